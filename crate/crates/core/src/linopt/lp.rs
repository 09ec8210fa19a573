use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Result of the feasibility problem `A λ = b, λ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// `λ ≥ 0` with `A λ = b` exactly.
    Feasible(Vec<Rational>),
    /// Farkas vector `y` with `yᵀA ≤ 0` and `yᵀb > 0`.
    Infeasible(Vec<Rational>),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

/// Checks `λ ≥ 0` and `A λ = b`.
pub fn verify_feasible(a: &RatMatrix, b: &[Rational], lambda: &[Rational]) -> bool {
    lambda.iter().all(|l| !l.is_negative()) && a.mul_vec(lambda).is_ok_and(|r| r == b)
}

/// Checks `yᵀA ≤ 0` and `yᵀb > 0`.
pub fn verify_farkas(a: &RatMatrix, b: &[Rational], y: &[Rational]) -> bool {
    if y.len() != a.rows() || b.len() != a.rows() {
        return false;
    }
    let yb: Rational = y.iter().zip(b).map(|(p, q)| p * q).sum();
    yb.is_positive() && a.vec_mul(y).is_ok_and(|row| row.iter().all(|v| !v.is_positive()))
}

/// Phase-1 simplex with Bland's rule on `A λ + s = b` (rows flipped so
/// `b ≥ 0`), minimizing the sum of artificials `s`.
pub fn lp_feasible(a: &RatMatrix, b: &[Rational]) -> Result<LpOutcome> {
    let (m, k) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!("{m} rows vs right-hand side of length {}", b.len())));
    }
    let width = k + m + 1;
    let rhs = k + m;
    let flip: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let mut t = vec![Rational::zero(); m * width];
    for i in 0..m {
        let s = if flip[i] { -Rational::one() } else { Rational::one() };
        for j in 0..k {
            t[i * width + j] = &a[(i, j)] * &s;
        }
        t[i * width + k + i] = Rational::one();
        t[i * width + rhs] = &b[i] * &s;
    }
    // reduced costs; the last entry holds minus the objective value
    let mut cost = vec![Rational::zero(); width];
    for i in 0..m {
        for j in 0..k {
            cost[j] -= &t[i * width + j];
        }
        cost[rhs] -= &t[i * width + rhs];
    }
    let mut basis: Vec<usize> = (k..k + m).collect();

    loop {
        let Some(enter) = (0..k + m).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let piv = &t[i * width + enter];
            if !piv.is_positive() {
                continue;
            }
            let r = &t[i * width + rhs] / piv;
            let better = match &leave {
                None => true,
                Some((li, lr)) => r < *lr || (r == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, r));
            }
        }
        // phase 1 is bounded below by zero, so a pivot row always exists
        let (row, _) = leave.ok_or_else(|| Error::Consistency("unbounded phase-1 problem".into()))?;
        pivot(&mut t, width, m, row, enter);
        let f = cost[enter].clone();
        for j in 0..width {
            let v = &t[row * width + j];
            if !v.is_zero() {
                cost[j] -= &f * v;
            }
        }
        basis[row] = enter;
    }

    if cost[rhs].is_zero() {
        let mut x = vec![Rational::zero(); k];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < k {
                x[bv] = t[i * width + rhs].clone();
            }
        }
        if !verify_feasible(a, b, &x) {
            return Err(Error::Consistency("simplex solution failed exact verification".into()));
        }
        Ok(LpOutcome::Feasible(x))
    } else {
        // reduced cost of artificial i is 1 - y_i
        let y: Vec<Rational> = (0..m)
            .map(|i| {
                let yi = Rational::one() - &cost[k + i];
                if flip[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        if !verify_farkas(a, b, &y) {
            return Err(Error::Consistency("Farkas certificate failed exact verification".into()));
        }
        Ok(LpOutcome::Infeasible(y))
    }
}

fn pivot(t: &mut [Rational], width: usize, m: usize, row: usize, col: usize) {
    let inv = t[row * width + col].recip();
    for j in 0..width {
        if !t[row * width + j].is_zero() {
            t[row * width + j] *= &inv;
        }
    }
    for i in 0..m {
        if i == row {
            continue;
        }
        let f = t[i * width + col].clone();
        if f.is_zero() {
            continue;
        }
        for j in 0..width {
            let v = &t[row * width + j];
            if !v.is_zero() {
                let d = &f * v;
                t[i * width + j] -= d;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn identity_system() {
        let a = RatMatrix::identity(2);
        assert_eq!(lp_feasible(&a, &[int(1), int(2)]).unwrap(), LpOutcome::Feasible(vec![int(1), int(2)]));
        assert_eq!(lp_feasible(&a, &[int(0), int(0)]).unwrap(), LpOutcome::Feasible(vec![int(0), int(0)]));
    }

    #[test]
    fn infeasible_single_column() {
        let a = RatMatrix::from_i64(&[&[1], &[1]]);
        let b = [int(1), int(-1)];
        match lp_feasible(&a, &b).unwrap() {
            LpOutcome::Infeasible(y) => assert!(verify_farkas(&a, &b, &y)),
            other => panic!("expected infeasible, got {other:?}"),
        }
        // negative multiple of the only column
        let b = [int(-1), int(-1)];
        assert!(!lp_feasible(&a, &b).unwrap().is_feasible());
    }

    #[test]
    fn degenerate_and_redundant() {
        let a = RatMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]]);
        let b = [int(2), int(3), int(5)];
        match lp_feasible(&a, &b).unwrap() {
            LpOutcome::Feasible(x) => assert!(verify_feasible(&a, &b, &x)),
            other => panic!("{other:?}"),
        }
        let b = [int(2), int(3), int(4)];
        assert!(!lp_feasible(&a, &b).unwrap().is_feasible());
    }

    #[test]
    fn deterministic() {
        let a = RatMatrix::from_i64(&[&[1, 2, 3, 1], &[3, 1, 2, 2]]);
        let b = [int(4), int(5)];
        assert_eq!(lp_feasible(&a, &b).unwrap(), lp_feasible(&a, &b).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(lp_feasible(&RatMatrix::identity(2), &[int(1)]).is_err());
    }
}
