use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::partition::{partitions, Partition};
use super::poly::{Exponent, Poly};
use crate::error::{Error, Result};
use crate::rational::{self, binomial, factorial, Rational};

/// Homogeneous symmetric polynomial in `n_vars` variables, stored in the
/// monomial-symmetric basis: `Σ_λ c_λ m_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    n_vars: usize,
    degree: u32,
    coeffs: BTreeMap<Partition, Rational>,
}

impl SymPoly {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        SymPoly { n_vars, degree, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs<I>(n_vars: usize, degree: u32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Rational)>,
    {
        let mut s = Self::zero(n_vars, degree);
        for (p, c) in coeffs {
            s.check_partition(&p)?;
            s.add_coeff(p, c);
        }
        Ok(s)
    }

    /// The single basis element `c · m_λ`.
    pub fn monomial_symmetric(n_vars: usize, lambda: Partition, c: Rational) -> Result<Self> {
        let degree = lambda.sum();
        Self::from_coeffs(n_vars, degree, [(lambda, c)])
    }

    fn check_partition(&self, p: &Partition) -> Result<()> {
        if p.sum() != self.degree {
            return Err(Error::DegreeMismatch { partition: p.parts().to_vec(), degree: self.degree });
        }
        if p.len() > self.n_vars {
            return Err(Error::TooFewVariables { needed: p.len(), got: self.n_vars });
        }
        Ok(())
    }

    fn add_coeff(&mut self, p: Partition, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(p).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients in graded-lex order.
    pub fn coeffs(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, lambda: &Partition) -> Rational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest number of parts among the stored partitions.
    pub fn max_parts(&self) -> usize {
        self.coeffs.keys().map(Partition::len).max().unwrap_or(0)
    }

    /// Coefficient of `x^α` in the full expansion; `α` may be unsorted and
    /// contain zeros.
    pub fn coeff_of(&self, alpha: &[u32]) -> Result<Rational> {
        let sum: u32 = alpha.iter().sum();
        if sum != self.degree {
            return Err(Error::DegreeMismatch { partition: alpha.to_vec(), degree: self.degree });
        }
        let p = Partition::new(alpha.to_vec());
        if p.len() > self.n_vars {
            return Ok(Rational::zero());
        }
        Ok(self.coeff(&p))
    }

    pub fn scale(&self, c: &Rational) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero(self.n_vars, self.degree);
        }
        SymPoly {
            n_vars: self.n_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(p, v)| (p.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_coeff(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.scale(&-Rational::one()))
    }

    fn check_compatible(&self, other: &SymPoly) -> Result<()> {
        if self.n_vars != other.n_vars || (self.degree != other.degree && !self.is_zero() && !other.is_zero()) {
            return Err(Error::DimensionMismatch(format!(
                "SymPoly in {} vars of degree {} vs {} vars of degree {}",
                self.n_vars, self.degree, other.n_vars, other.degree
            )));
        }
        Ok(())
    }

    /// Coordinates over the given partition list (missing entries are zero).
    pub fn coordinates(&self, basis: &[Partition]) -> Vec<Rational> {
        basis.iter().map(|p| self.coeff(p)).collect()
    }

    /// If `self = c · other` for some rational `c`, returns it. Both must be nonzero.
    pub fn proportionality(&self, other: &SymPoly) -> Option<Rational> {
        if self.is_zero() || other.is_zero() || self.n_vars != other.n_vars || self.degree != other.degree {
            return None;
        }
        if self.coeffs.len() != other.coeffs.len() {
            return None;
        }
        let (p0, c0) = other.coeffs.iter().next()?;
        let ratio = self.coeff(p0) / c0;
        other
            .coeffs
            .iter()
            .all(|(p, c)| self.coeffs.get(p).is_some_and(|v| *v == c * &ratio))
            .then_some(ratio)
    }

    /// Full monomial expansion.
    pub fn expand(&self) -> Poly {
        let mut out = Poly::zero(self.n_vars);
        for (p, c) in &self.coeffs {
            let mut v = p.padded(self.n_vars);
            v.sort_unstable();
            loop {
                out.add_term(v.clone(), c.clone());
                if !next_permutation(&mut v) {
                    break;
                }
            }
        }
        out
    }

    /// Reads a symmetric `Poly` into the m-basis, verifying symmetry exactly.
    pub fn from_symmetric_poly(p: &Poly) -> Result<SymPoly> {
        let degree = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        let mut s = SymPoly::zero(p.n_vars(), degree);
        let mut seen = 0usize;
        for (e, c) in p.terms() {
            if e.windows(2).all(|w| w[0] >= w[1]) {
                s.add_coeff(Partition::new(e.clone()), c.clone());
            }
            seen += 1;
        }
        let expanded = s.expand();
        if expanded.len() != seen || expanded != *p {
            return Err(Error::NotSymmetric);
        }
        Ok(s)
    }

    /// Evaluates with a caller-chosen scalar type.
    pub fn eval_with<T, F>(&self, point: &[T], coeff: F) -> T
    where
        T: Clone + Zero + One + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
        F: Fn(&Rational) -> T,
    {
        assert_eq!(point.len(), self.n_vars, "point has wrong dimension");
        let mut total = T::zero();
        for (p, c) in &self.coeffs {
            total = total + coeff(c) * eval_monomial_symmetric(p, point);
        }
        total
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.eval_with(point, |c| c.clone())
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.eval_with(point, rational::to_f64)
    }

    /// Exact evaluation at an integer point; result is rational because the
    /// coefficients are.
    pub fn eval_integer(&self, point: &[i64]) -> Rational {
        let den = self.coeffs.values().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let xs: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
        let scaled = self.eval_with(&xs, |c| (c * Rational::from_integer(den.clone())).to_integer());
        Rational::new(scaled, den)
    }

    /// `D S` with `D = Σ_i ∂/∂x_i`.
    pub fn translation_derivative(&self) -> SymPoly {
        if self.degree == 0 {
            return SymPoly::zero(self.n_vars, 0);
        }
        let mut out = SymPoly::zero(self.n_vars, self.degree - 1);
        for mu in partitions(self.degree - 1, self.n_vars) {
            let padded = mu.padded(self.n_vars);
            let mut c = Rational::zero();
            // positions with equal entries contribute equally
            let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
            for &v in &padded {
                *counts.entry(v).or_default() += 1;
            }
            for (&v, &cnt) in &counts {
                let mut raised = mu.parts().to_vec();
                raised.push(v + 1);
                if v > 0 {
                    let pos = raised.iter().position(|&x| x == v).expect("value present");
                    raised.remove(pos);
                }
                let lam = Partition::new(raised);
                let s = self.coeff(&lam);
                if !s.is_zero() {
                    c += s * Rational::from_integer(BigInt::from((v + 1) as u64 * cnt as u64));
                }
            }
            out.add_coeff(mu, c);
        }
        out
    }

    /// Coefficients of `t^0, t^1, ..., t^deg` in `S(x_1 + t, ..., x_n + t)`.
    ///
    /// The coefficient of `t^j` is `D^j S / j!` (Taylor expansion along the
    /// all-ones direction), which is what gets computed.
    pub fn translation_shift(&self) -> Vec<SymPoly> {
        let mut out = vec![self.clone()];
        let mut cur = self.clone();
        for j in 1..=self.degree {
            cur = cur.translation_derivative();
            let inv = Rational::new(BigInt::one(), factorial(j as usize));
            out.push(cur.scale(&inv));
        }
        out
    }

    pub fn is_translation_invariant(&self) -> bool {
        self.translation_shift().iter().skip(1).all(SymPoly::is_zero)
    }

    /// Image of a symmetric polynomial `T` in `m = self.n_vars` variables under
    /// `T ↦ (n-m)! Σ_{|S|=m} T(x_S)`, the map sending `Sym_m P` to `Sym_n P`.
    pub fn lift(&self, n: usize) -> Result<SymPoly> {
        let m = self.n_vars;
        if n < m {
            return Err(Error::TooFewVariables { needed: m, got: n });
        }
        let base = factorial(n - m);
        let coeffs = self.coeffs.iter().map(|(p, c)| {
            let l = p.len();
            let f = &base * binomial(n - l, m - l);
            (p.clone(), c * Rational::from_integer(f))
        });
        SymPoly::from_coeffs(n, self.degree, coeffs.collect::<Vec<_>>())
    }

    /// Inverse of [`SymPoly::lift`]: the unique `T` in `m` variables with
    /// `T.lift(n) == self`. Requires every partition to have at most `m` parts.
    pub fn descend(&self, m: usize) -> Result<SymPoly> {
        let n = self.n_vars;
        if m > n {
            return Err(Error::DimensionMismatch(format!("cannot descend from {n} to {m} variables")));
        }
        if self.max_parts() > m {
            return Err(Error::TooFewVariables { needed: self.max_parts(), got: m });
        }
        let base = factorial(n - m);
        let coeffs = self.coeffs.iter().map(|(p, c)| {
            let l = p.len();
            let f = &base * binomial(n - l, m - l);
            (p.clone(), c / Rational::from_integer(f))
        });
        SymPoly::from_coeffs(m, self.degree, coeffs.collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> SymPolyJson {
        SymPolyJson {
            n: self.n_vars,
            degree: self.degree,
            terms: self.coeffs.iter().map(|(p, c)| (p.parts().to_vec(), rational::format(c))).collect(),
        }
    }

    pub fn from_json(j: &SymPolyJson) -> Result<SymPoly> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for (parts, c) in &j.terms {
            terms.push((Partition::from_sorted(parts.clone())?, rational::parse(c)?));
        }
        SymPoly::from_coeffs(j.n, j.degree, terms)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(p, c)| format!("{c}·m{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Wire format: `{"n": .., "degree": .., "terms": [[[parts], "p/q"], ...]}`
/// with terms in graded-lex order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SymPolyJson {
    pub n: usize,
    pub degree: u32,
    pub terms: Vec<(Vec<u32>, String)>,
}

/// `Σ_σ P(σx)` in the m-basis, without enumerating `S_n`.
///
/// Each exponent vector `β` (zero-padded to `n`) is stabilized by
/// `∏_k (#entries equal to k)!` permutations, so it contributes that multiple
/// of its coefficient to `m_{sort(β)}`.
pub fn symmetrize_poly(p: &Poly, n: usize) -> Result<SymPoly> {
    let degree = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if p.n_vars() > n {
        return Err(Error::TooFewVariables { needed: p.n_vars(), got: n });
    }
    let mut out = SymPoly::zero(n, degree);
    for (e, c) in p.terms() {
        let mut full: Exponent = e.clone();
        full.resize(n, 0);
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &k in &full {
            *counts.entry(k).or_default() += 1;
        }
        let stab = counts.values().fold(BigInt::one(), |acc, &m| acc * factorial(m));
        out.add_coeff(Partition::new(full), c * Rational::from_integer(stab));
    }
    Ok(out)
}

/// `m_λ(x)` by dynamic programming over variables; each state records how many
/// parts of each distinct size remain unplaced.
pub fn eval_monomial_symmetric<T>(lambda: &Partition, point: &[T]) -> T
where
    T: Clone + Zero + One + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    let mult = lambda.multiplicities();
    let radix: Vec<usize> = mult.iter().map(|&(_, c)| c + 1).collect();
    let size: usize = radix.iter().product();
    let mut stride = vec![1usize; radix.len()];
    for i in 1..radix.len() {
        stride[i] = stride[i - 1] * radix[i - 1];
    }
    let full: usize = mult.iter().zip(&stride).map(|(&(_, c), s)| c * s).sum();
    let mut dp = vec![T::zero(); size];
    dp[full] = T::one();
    let max_part = mult.first().map_or(0, |&(v, _)| v) as usize;
    for x in point {
        let mut pw = Vec::with_capacity(max_part + 1);
        pw.push(T::one());
        for k in 1..=max_part {
            let next = pw[k - 1].clone() * x.clone();
            pw.push(next);
        }
        let mut next = dp.clone();
        for state in 0..size {
            let mut acc = T::zero();
            let mut any = false;
            for (i, &(v, c)) in mult.iter().enumerate() {
                let digit = (state / stride[i]) % radix[i];
                if digit < c {
                    acc = acc + dp[state + stride[i]].clone() * pw[v as usize].clone();
                    any = true;
                }
            }
            if any {
                next[state] = next[state].clone() + acc;
            }
        }
        dp = next;
    }
    dp[0].clone()
}

/// Lexicographic next permutation; false when `v` was the last one.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn diff_sq(n: usize) -> Poly {
        (&Poly::var(n, 0) - &Poly::var(n, 1)).pow(2)
    }

    #[test]
    fn symmetrize_examples() {
        let odd = &Poly::var(2, 0) - &Poly::var(2, 1);
        assert!(symmetrize_poly(&odd, 2).unwrap().is_zero());

        let s2 = symmetrize_poly(&diff_sq(2), 2).unwrap();
        assert_eq!(s2.coeff(&m(&[2])), int(2));
        assert_eq!(s2.coeff(&m(&[1, 1])), int(-4));

        let s3 = symmetrize_poly(&diff_sq(2), 3).unwrap();
        assert_eq!(s3.coeff(&m(&[2])), int(4));
        assert_eq!(s3.coeff(&m(&[1, 1])), int(-4));

        let x1sq = Poly::var(1, 0).pow(2);
        let s = symmetrize_poly(&x1sq, 3).unwrap();
        assert_eq!(s.coeff(&m(&[2])), int(2));
        assert_eq!(s.coeffs().count(), 1);
    }

    #[test]
    fn symmetrize_errors() {
        let inhom = &Poly::var(2, 0) + &Poly::var(2, 1).pow(2);
        assert!(matches!(symmetrize_poly(&inhom, 2), Err(Error::NotHomogeneous)));
        assert!(matches!(symmetrize_poly(&diff_sq(3), 2), Err(Error::TooFewVariables { .. })));
    }

    #[test]
    fn coeff_of_examples() {
        let s2 = symmetrize_poly(&diff_sq(2), 2).unwrap();
        assert_eq!(s2.coeff_of(&[2, 0]).unwrap(), int(2));
        assert_eq!(SymPoly::zero(3, 2).coeff_of(&[1, 1, 0]).unwrap(), int(0));
        let s3 = symmetrize_poly(&diff_sq(2), 3).unwrap();
        assert_eq!(s3.coeff_of(&[1, 1, 0]).unwrap(), int(-4));
        assert_eq!(s3.coeff_of(&[0, 1, 1]).unwrap(), int(-4));
        assert!(matches!(s3.coeff_of(&[1, 0, 0]), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn expansion_and_readback() {
        let s3 = symmetrize_poly(&diff_sq(2), 3).unwrap();
        let p = s3.expand();
        assert_eq!(p.coeff(&[0, 2, 0]), int(4));
        assert_eq!(p.coeff(&[1, 0, 1]), int(-4));
        assert_eq!(SymPoly::from_symmetric_poly(&p).unwrap(), s3);
        assert!(matches!(SymPoly::from_symmetric_poly(&diff_sq(2).extend_vars(3)), Err(Error::NotSymmetric)));
    }

    #[test]
    fn evaluation_matches_expansion() {
        let s = symmetrize_poly(&(&(&Poly::var(3, 0) - &Poly::var(3, 1)) * &(&Poly::var(3, 1) - &Poly::var(3, 2))), 3)
            .unwrap();
        let pt = [int(2), int(1), int(0)];
        assert_eq!(s.eval(&pt), s.expand().eval(&pt));
        assert_eq!(s.eval(&pt), int(-6));
        assert_eq!(s.eval_integer(&[2, 1, 0]), int(-6));
        assert!((s.eval_f64(&[2.0, 1.0, 0.0]) + 6.0).abs() < 1e-9);
    }

    #[test]
    fn translation_invariance() {
        assert!(symmetrize_poly(&diff_sq(2), 2).unwrap().is_translation_invariant());
        assert!(symmetrize_poly(&diff_sq(2), 3).unwrap().is_translation_invariant());
        let e1 = SymPoly::monomial_symmetric(3, m(&[1]), int(1)).unwrap();
        assert!(!e1.is_translation_invariant());
        let shift = e1.translation_shift();
        assert_eq!(shift[1].coeff(&Partition::new(vec![])), int(3));
    }

    #[test]
    fn lift_and_descend_are_inverse() {
        let s2 = symmetrize_poly(&diff_sq(2), 2).unwrap();
        let s3 = symmetrize_poly(&diff_sq(2), 3).unwrap();
        assert_eq!(s2.lift(3).unwrap(), s3);
        assert_eq!(s3.descend(2).unwrap(), s2);
        let s5 = symmetrize_poly(&diff_sq(2), 5).unwrap();
        assert_eq!(s2.lift(5).unwrap(), s5);
    }

    #[test]
    fn json_roundtrip() {
        let s = symmetrize_poly(&diff_sq(2), 3).unwrap();
        let j = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(j, r#"{"n":3,"degree":2,"terms":[[[2],"4/1"],[[1,1],"-4/1"]]}"#);
        let back: SymPolyJson = serde_json::from_str(&j).unwrap();
        assert_eq!(SymPoly::from_json(&back).unwrap(), s);
    }
}
