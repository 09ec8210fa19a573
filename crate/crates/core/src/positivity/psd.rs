use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linopt::RatMatrix;
use crate::rational::Rational;

/// `Q = Pᵀ L D Lᵀ P`: row `i` of `L D Lᵀ` corresponds to row `perm[i]` of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdlWitness {
    pub perm: Vec<usize>,
    pub l: RatMatrix,
    pub d: Vec<Rational>,
}

impl LdlWitness {
    /// Recomputes the product and checks unit-lower shape and `D ≥ 0`.
    pub fn verify(&self, q: &RatMatrix) -> bool {
        let n = self.d.len();
        if q.rows() != n || q.cols() != n || self.l.rows() != n || self.l.cols() != n || self.perm.len() != n {
            return false;
        }
        if self.d.iter().any(Signed::is_negative) {
            return false;
        }
        for i in 0..n {
            if !self.l[(i, i)].is_one() || (i + 1..n).any(|j| !self.l[(i, j)].is_zero()) {
                return false;
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let s: Rational = (0..=j).map(|k| &self.l[(i, k)] * &self.d[k] * &self.l[(j, k)]).sum();
                if s != q[(self.perm[i], self.perm[j])] {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdResult {
    Psd(LdlWitness),
    /// `w` with `wᵀ Q w < 0`, and that value.
    NotPsd { w: Vec<Rational>, value: Rational },
}

impl PsdResult {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdResult::Psd(_))
    }
}

pub fn quadratic_form(q: &RatMatrix, w: &[Rational]) -> Rational {
    let qw = q.mul_vec(w).expect("dimensions match");
    w.iter().zip(&qw).map(|(a, b)| a * b).sum()
}

/// Exact `LDLᵀ` with symmetric (largest-diagonal) pivoting.
pub fn psd_check(q: &RatMatrix) -> Result<PsdResult> {
    if !q.is_symmetric() {
        return Err(Error::NotSymmetricMatrix);
    }
    let n = q.rows();
    // `a` holds the permuted matrix; the trailing block is the Schur complement
    let mut a = q.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = RatMatrix::identity(n);
    let mut d = vec![Rational::zero(); n];
    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| a[(i, i)].is_negative()) {
            let mut u = vec![Rational::zero(); n];
            u[i] = Rational::one();
            return Ok(not_psd(q, &l, &perm, k, u));
        }
        if let Some((i, j)) = (k..n).find_map(|i| {
            if !a[(i, i)].is_zero() {
                return None;
            }
            (k..n).find(|&j| j != i && !a[(i, j)].is_zero()).map(|j| (i, j))
        }) {
            // (t e_i + e_j)ᵀ S (t e_i + e_j) = 2 t S_ij + S_jj = -1
            let t = -(&a[(j, j)] + Rational::one()) / (Rational::from_integer(2.into()) * &a[(i, j)]);
            let mut u = vec![Rational::zero(); n];
            u[i] = t;
            u[j] = Rational::one();
            return Ok(not_psd(q, &l, &perm, k, u));
        }
        let p = (k..n).fold(k, |best, i| if a[(i, i)] > a[(best, best)] { i } else { best });
        if p != k {
            swap_sym(&mut a, k, p);
            perm.swap(k, p);
            for c in 0..k {
                let tmp = l[(k, c)].clone();
                l[(k, c)] = l[(p, c)].clone();
                l[(p, c)] = tmp;
            }
        }
        let piv = a[(k, k)].clone();
        d[k] = piv.clone();
        if piv.is_zero() {
            // the remaining block is identically zero
            continue;
        }
        for i in k + 1..n {
            l[(i, k)] = &a[(i, k)] / &piv;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            for j in k + 1..=i {
                let v = &l[(i, k)] * &a[(k, j)];
                if !v.is_zero() {
                    a[(i, j)] -= &v;
                    if i != j {
                        let s = a[(i, j)].clone();
                        a[(j, i)] = s;
                    }
                }
            }
        }
        for i in k + 1..n {
            a[(i, k)] = Rational::zero();
            a[(k, i)] = Rational::zero();
        }
    }
    Ok(PsdResult::Psd(LdlWitness { perm, l, d }))
}

fn swap_sym(a: &mut RatMatrix, x: usize, y: usize) {
    let n = a.rows();
    for c in 0..n {
        let t = a[(x, c)].clone();
        a[(x, c)] = a[(y, c)].clone();
        a[(y, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, x)].clone();
        a[(r, x)] = a[(r, y)].clone();
        a[(r, y)] = t;
    }
}

/// Lifts `u` (supported on the trailing block, permuted coordinates) through
/// `Lᵀ w = u` and undoes the permutation.
fn not_psd(q: &RatMatrix, l: &RatMatrix, perm: &[usize], k: usize, u: Vec<Rational>) -> PsdResult {
    let n = u.len();
    let mut w = u;
    for i in (0..k).rev() {
        let s: Rational = (i + 1..n).map(|j| &l[(j, i)] * &w[j]).sum();
        w[i] = -s;
    }
    let mut out = vec![Rational::zero(); n];
    for i in 0..n {
        out[perm[i]] = w[i].clone();
    }
    let value = quadratic_form(q, &out);
    assert!(value.is_negative(), "negative pivot must give a negative direction");
    PsdResult::NotPsd { w: out, value }
}
