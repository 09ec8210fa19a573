use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Dense exponent vector; its length is the number of variables.
pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap`, so the last entry is the lex-leading term.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly { n_vars, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars, "variable index out of range");
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(n_vars: usize, terms: I) -> Self {
        let mut p = Self::zero(n_vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        assert_eq!(exp.len(), self.n_vars, "exponent length must equal n_vars");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// `Some(d)` if every term has total degree `d`. The zero polynomial is
    /// homogeneous of every degree and reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => Some(0),
            Some(d) => degs.all(|x| x == d).then_some(d),
        }
    }

    /// Highest index of a variable that actually occurs, plus one.
    pub fn support_vars(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&x| x > 0))
            .map(|i| i + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.n_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.n_vars);
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                rational::to_f64(c) * e.iter().zip(point).map(|(&k, x)| x.powi(k as i32)).product::<f64>()
            })
            .sum()
    }

    /// Same polynomial viewed in `n_vars >= self.n_vars` variables.
    pub fn extend_vars(&self, n_vars: usize) -> Poly {
        assert!(n_vars >= self.n_vars);
        Poly {
            n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(n_vars, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Drops trailing variables that do not occur.
    pub fn truncate_vars(&self, n_vars: usize) -> Result<Poly> {
        if self.support_vars() > n_vars {
            return Err(Error::TooFewVariables { needed: self.support_vars(), got: n_vars });
        }
        Ok(Poly {
            n_vars,
            terms: self.terms.iter().map(|(e, c)| (e[..n_vars].to_vec(), c.clone())).collect(),
        })
    }

    /// `P(x_{perm[0]}, ..., x_{perm[n-1]})`.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly {
        assert_eq!(perm.len(), self.n_vars);
        let mut out = Poly::zero(self.n_vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.n_vars];
            for (i, &k) in e.iter().enumerate() {
                ne[perm[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Composition `P(images[0], ..., images[n-1])`; all images share one ring.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.n_vars);
        let target_vars = images.first().map_or(0, |p| p.n_vars);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.n_vars), p.clone()]).collect();
        let mut out = Poly::zero(target_vars);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            out = &out + &term;
        }
        out
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        assert_eq!(self.n_vars, divisor.n_vars);
        let (lead_e, lead_c) = divisor.leading_term().ok_or_else(|| Error::Degenerate("division by zero".into()))?;
        if divisor.len() == 1 && lead_e.iter().all(|&k| k == 0) {
            return Ok(self.scale(&lead_c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.n_vars);
        while let Some((e, c)) = rem.leading_term() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return Err(Error::InexactDivision);
            }
            let qe: Exponent = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            let t = Poly::monomial(qe, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Ok(quot)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n_vars, rhs.n_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n_vars, rhs.n_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n_vars, rhs.n_vars);
        let mut acc: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { n_vars: self.n_vars, terms: acc }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn arithmetic_basics() {
        let d = &x(2, 0) - &x(2, 1);
        let sq = d.pow(2);
        assert_eq!(sq.coeff(&[2, 0]), int(1));
        assert_eq!(sq.coeff(&[1, 1]), int(-2));
        assert_eq!(sq.homogeneous_degree(), Some(2));
        assert!((&sq - &sq).is_zero());
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = &(&x(3, 0) + &x(3, 1)).pow(3) - &x(3, 2);
        let b = &x(3, 0) - &x(3, 2).scale(&int(2));
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(matches!((&prod + &Poly::one(3)).div_exact(&b), Err(Error::InexactDivision)));
    }

    #[test]
    fn substitution_and_permutation() {
        // (x1 - x2) with x1 -> y1 + y2, x2 -> y2 gives y1
        let p = &x(2, 0) - &x(2, 1);
        let images = [&x(2, 0) + &x(2, 1), x(2, 1)];
        assert_eq!(p.substitute(&images), x(2, 0));
        assert_eq!(p.permute_vars(&[1, 0]), -&p);
    }

    #[test]
    fn evaluation() {
        let p = &(&x(3, 0) - &x(3, 1)) * &(&x(3, 1) - &x(3, 2));
        assert_eq!(p.eval(&[int(2), int(1), int(0)]), int(1));
        assert!((p.eval_f64(&[2.0, 1.0, 0.0]) - 1.0).abs() < 1e-12);
    }
}
