use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::partition::{partitions, Partition};
use super::poly::Poly;
use super::sympoly::SymPoly;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Polynomial in formal elementary symmetric functions.
///
/// Without homogenization, variable `i` of `poly` stands for `e_{i+1}`
/// (so `e_1..e_n`); after [`ElemPoly::homogenize`], variable `i` stands for
/// `e_i` (so `e_0..e_n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemPoly {
    n: usize,
    homogenized: bool,
    poly: Poly,
}

impl ElemPoly {
    pub fn new(n: usize, poly: Poly) -> Result<Self> {
        if poly.n_vars() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} elementary variables, got {}", poly.n_vars())));
        }
        Ok(ElemPoly { n, homogenized: false, poly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_homogenized(&self) -> bool {
        self.homogenized
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Coefficient of `∏ e_i^{a_i}` with `exps[i]` the power of the `i`-th
    /// stored variable.
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.poly.coeff(exps)
    }

    /// Multiplies each term by the power of `e_0` that brings its number of
    /// `e` factors up to `d`.
    pub fn homogenize(&self, d: u32) -> Result<ElemPoly> {
        if self.homogenized {
            return Err(Error::DimensionMismatch("already homogenized".into()));
        }
        let mut out = Poly::zero(self.n + 1);
        for (e, c) in self.poly.terms() {
            let deg: u32 = e.iter().sum();
            if deg > d {
                return Err(Error::DegreeTooHigh { term: deg, target: d });
            }
            let mut exp = Vec::with_capacity(self.n + 1);
            exp.push(d - deg);
            exp.extend_from_slice(e);
            out.add_term(exp, c.clone());
        }
        Ok(ElemPoly { n: self.n, homogenized: true, poly: out })
    }

    /// Expansion back into the monomial-symmetric basis of `x_1..x_n`
    /// (`e_0` is set to 1).
    pub fn to_sympoly(&self) -> Result<SymPoly> {
        let offset = usize::from(self.homogenized);
        let mut degree = None;
        let mut out: Option<SymPoly> = None;
        let mut counter = ZeroOneCounter::default();
        for (e, c) in self.poly.terms() {
            let mut mu = Vec::new();
            for (i, &a) in e.iter().enumerate().skip(offset) {
                let idx = (i + 1 - offset) as u32;
                mu.extend(std::iter::repeat(idx).take(a as usize));
            }
            let mu = Partition::new(mu);
            let w = mu.sum();
            match degree {
                None => degree = Some(w),
                Some(d0) if d0 != w => return Err(Error::NotHomogeneous),
                _ => {}
            }
            let part = counter.elementary_in_m_basis(&mu, self.n).scale(c);
            out = Some(match out {
                None => part,
                Some(acc) => acc.add(&part)?,
            });
        }
        Ok(out.unwrap_or_else(|| SymPoly::zero(self.n, 0)))
    }

    /// Literal substitution `e_i ↦ e_i(x_1..x_n)` as an ordinary polynomial.
    pub fn substitute_elementary(&self) -> Poly {
        let mut images = Vec::new();
        if self.homogenized {
            images.push(Poly::one(self.n));
        }
        for k in 1..=self.n {
            images.push(elementary_symmetric(self.n, k));
        }
        self.poly.substitute(&images)
    }
}

impl fmt::Display for ElemPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let offset = usize::from(!self.homogenized);
        let mut first = true;
        for (e, c) in self.poly.terms().collect::<Vec<_>>().into_iter().rev() {
            let mut factors = Vec::new();
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("e{}", i + offset)),
                    _ => factors.push(format!("e{}^{a}", i + offset)),
                }
            }
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = if factors.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                factors.join("*")
            } else {
                format!("{abs}*{}", factors.join("*"))
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// `e_k(x_1..x_n)` as a `Poly`.
pub fn elementary_symmetric(n: usize, k: usize) -> Poly {
    let mut out = Poly::zero(n);
    if k > n {
        return out;
    }
    let mut v = vec![0u32; n];
    for slot in v.iter_mut().skip(n - k) {
        *slot = 1;
    }
    loop {
        out.add_term(v.clone(), Rational::one());
        if !super::sympoly::next_permutation(&mut v) {
            break;
        }
    }
    out
}

/// Rewrites `S` as a polynomial in `e_1..e_n` by leading-term elimination:
/// the lex-largest `m_λ` present is cancelled by `c · e_{λ'}`, whose leading
/// monomial-symmetric term is exactly `m_λ`.
pub fn to_elementary(s: &SymPoly) -> ElemPoly {
    let n = s.n_vars();
    let mut rest = s.clone();
    let mut out = Poly::zero(n);
    let mut counter = ZeroOneCounter::default();
    loop {
        let Some((lambda, c)) = rest.coeffs().next().map(|(p, c)| (p.clone(), c.clone())) else {
            break;
        };
        let mu = lambda.conjugate();
        let mut exp = vec![0u32; n];
        for &p in mu.parts() {
            exp[p as usize - 1] += 1;
        }
        out.add_term(exp, c.clone());
        let sub = counter.elementary_in_m_basis(&mu, n).scale(&c);
        rest = rest.sub(&sub).expect("same shape");
        debug_assert!(rest.coeff(&lambda).is_zero());
    }
    ElemPoly { n, homogenized: false, poly: out }
}

/// Counts 0-1 matrices with prescribed row and column sums; the coefficient of
/// `m_ν` in `e_μ` is the number with row sums `μ` and column sums `ν`.
#[derive(Default)]
struct ZeroOneCounter {
    memo: HashMap<(Vec<u32>, Vec<u32>), BigInt>,
}

impl ZeroOneCounter {
    fn elementary_in_m_basis(&mut self, mu: &Partition, n: usize) -> SymPoly {
        let d = mu.sum();
        let mut out = Vec::new();
        for nu in partitions(d, n) {
            if nu.parts().first().copied().unwrap_or(0) as usize > mu.len() {
                continue;
            }
            let c = self.count(mu.parts().to_vec(), nu.parts());
            if !c.is_zero() {
                out.push((nu, Rational::from_integer(c)));
            }
        }
        SymPoly::from_coeffs(n, d, out).expect("partitions of d with at most n parts")
    }

    fn count(&mut self, mut rows: Vec<u32>, cols: &[u32]) -> BigInt {
        rows.retain(|&r| r > 0);
        rows.sort_unstable_by(|a, b| b.cmp(a));
        let Some((&first, rest)) = cols.split_first() else {
            return if rows.is_empty() { BigInt::one() } else { BigInt::zero() };
        };
        let remaining: u32 = cols.iter().sum();
        if rows.iter().sum::<u32>() != remaining || rows.len() < first as usize {
            return BigInt::zero();
        }
        let key = (rows.clone(), cols.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        let k = first as usize;
        let mut chosen: Vec<usize> = (0..k).collect();
        loop {
            let mut next = rows.clone();
            for &i in &chosen {
                next[i] -= 1;
            }
            total += self.count(next, rest);
            if !advance_combination(&mut chosen, rows.len()) {
                break;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

fn advance_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::symmetrize_poly;
    use crate::rational::int;

    fn m(n: usize, parts: &[u32]) -> SymPoly {
        SymPoly::monomial_symmetric(n, Partition::new(parts.to_vec()), int(1)).unwrap()
    }

    #[test]
    fn small_conversions() {
        let e = to_elementary(&m(2, &[1, 1]));
        assert_eq!(e.to_string(), "e2");
        let e = to_elementary(&m(2, &[2]));
        assert_eq!(e.coeff(&[2, 0]), int(1));
        assert_eq!(e.coeff(&[0, 1]), int(-2));
        let dsq = (&Poly::var(2, 0) - &Poly::var(2, 1)).pow(2);
        let e = to_elementary(&symmetrize_poly(&dsq, 2).unwrap());
        assert_eq!(e.coeff(&[2, 0]), int(2));
        assert_eq!(e.coeff(&[0, 1]), int(-8));
        assert_eq!(e.poly().len(), 2);
    }

    #[test]
    fn homogenize_examples() {
        let e = ElemPoly::new(2, Poly::from_terms(2, [(vec![2, 0], int(1)), (vec![0, 1], int(-2))])).unwrap();
        let h = e.homogenize(2).unwrap();
        assert_eq!(h.coeff(&[0, 2, 0]), int(1));
        assert_eq!(h.coeff(&[1, 0, 1]), int(-2));
        let c = ElemPoly::new(2, Poly::constant(2, int(5))).unwrap().homogenize(3).unwrap();
        assert_eq!(c.coeff(&[3, 0, 0]), int(5));
        let e = ElemPoly::new(2, Poly::from_terms(2, [(vec![0, 1], int(1)), (vec![1, 0], int(1))])).unwrap();
        let h = e.homogenize(2).unwrap();
        assert_eq!(h.coeff(&[1, 0, 1]), int(1));
        assert_eq!(h.coeff(&[1, 1, 0]), int(1));
        assert_eq!(h.poly().len(), 2);
        assert!(matches!(e.homogenize(0), Err(Error::DegreeTooHigh { .. })));
    }

    #[test]
    fn round_trip_all_partitions() {
        for n in 1..=4 {
            for d in 0..=6 {
                for p in partitions(d, n) {
                    let s = SymPoly::monomial_symmetric(n, p, int(3)).unwrap();
                    let e = to_elementary(&s);
                    assert_eq!(e.to_sympoly().unwrap(), s);
                    assert_eq!(SymPoly::from_symmetric_poly(&e.substitute_elementary()).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn homogenized_round_trip() {
        let s = m(3, &[2, 1]);
        let h = to_elementary(&s).homogenize(3).unwrap();
        assert_eq!(h.to_sympoly().unwrap(), s);
        assert_eq!(SymPoly::from_symmetric_poly(&h.substitute_elementary()).unwrap(), s);
    }
}
