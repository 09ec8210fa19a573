//! Discriminants of derivatives of `p(t) = ∏ (t - x_i)` as symmetric
//! polynomials in the roots.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyalg::{ElemPoly, Poly, SymPoly};
use crate::rational::{factorial, Rational};

/// Univariate polynomial in `t` whose coefficients live in a multivariate
/// ring; `coeffs[j]` multiplies `t^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Poly>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Poly>) -> Result<Self> {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Degenerate("zero polynomial in t".into()));
        }
        let n = coeffs[0].n_vars();
        if coeffs.iter().any(|c| c.n_vars() != n) {
            return Err(Error::DimensionMismatch("coefficients from different rings".into()));
        }
        Ok(UniPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Poly {
        self.coeffs.last().expect("nonzero")
    }

    pub fn derivative(&self) -> Result<UniPoly> {
        let n = self.coeffs[0].n_vars();
        if self.degree() == 0 {
            return Err(Error::Degenerate("derivative of a constant".into()));
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale(&Rational::from_integer(BigInt::from(j))))
                .collect::<Vec<_>>(),
        )
        .or_else(|_| Ok(UniPoly { coeffs: vec![Poly::zero(n)] }))
    }

    /// Applies a ring map to every coefficient.
    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Result<UniPoly> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

/// `p(t) = ∏_{i=1}^n (t - x_i) = Σ_j (-1)^j e_j t^{n-j}` with the `e_j` kept
/// as formal variables (variable `j-1` is `e_j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPoly {
    n: usize,
    poly: UniPoly,
}

impl RootPoly {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Degenerate("need at least one root".into()));
        }
        let mut coeffs = vec![Poly::zero(n); n + 1];
        coeffs[n] = Poly::one(n);
        for j in 1..=n {
            let sign = if j % 2 == 1 { -Rational::one() } else { Rational::one() };
            coeffs[n - j] = Poly::var(n, j - 1).scale(&sign);
        }
        Ok(RootPoly { n, poly: UniPoly::new(coeffs)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    /// Same polynomial with coefficients expanded in the roots `x_1..x_n`.
    pub fn in_roots(&self) -> Result<UniPoly> {
        let e = self.poly.map(|c| {
            ElemPoly::new(self.n, c.clone()).expect("ring matches").substitute_elementary()
        })?;
        Ok(e)
    }
}

/// `k`-th derivative in `t`; leading coefficient `n!/(n-k)!`.
pub fn derivative_k(p: &RootPoly, k: usize) -> Result<UniPoly> {
    if k + 2 > p.n {
        return Err(Error::DerivativeOutOfRange { n: p.n, k });
    }
    let mut f = p.poly.clone();
    for _ in 0..k {
        f = f.derivative()?;
    }
    Ok(f)
}

/// Sylvester resultant by fraction-free (Bareiss) elimination.
pub fn resultant_sylvester(f: &UniPoly, g: &UniPoly) -> Result<Poly> {
    let (m, k) = (f.degree(), g.degree());
    if m == 0 || k == 0 {
        return Err(Error::Degenerate(format!("resultant needs positive degrees, got {m} and {k}")));
    }
    let nv = f.coeffs[0].n_vars();
    if g.coeffs[0].n_vars() != nv {
        return Err(Error::DimensionMismatch("resultant of polynomials over different rings".into()));
    }
    let size = m + k;
    let mut a = vec![vec![Poly::zero(nv); size]; size];
    for r in 0..k {
        for (j, c) in f.coeffs.iter().rev().enumerate() {
            a[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in g.coeffs.iter().rev().enumerate() {
            a[k + r][r + j] = c.clone();
        }
    }
    bareiss_det(a)
}

fn bareiss_det(mut a: Vec<Vec<Poly>>) -> Result<Poly> {
    let size = a.len();
    let nv = a[0][0].n_vars();
    let mut sign = Rational::one();
    let mut prev = Poly::one(nv);
    for k in 0..size.saturating_sub(1) {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..size).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Poly::zero(nv));
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
            a[i][k] = Poly::zero(nv);
        }
        prev = a[k][k].clone();
    }
    Ok(a[size - 1][size - 1].scale(&sign))
}

/// `Disc(f) = (-1)^{m(m-1)/2} Res(f, f') / lc(f)` for `f` of degree `m`.
pub fn discriminant(f: &UniPoly) -> Result<Poly> {
    let m = f.degree();
    let res = resultant_sylvester(f, &f.derivative()?)?;
    let sign = if (m * (m - 1) / 2) % 2 == 1 { -Rational::one() } else { Rational::one() };
    res.scale(&sign).div_exact(f.leading())
}

/// `D_{n,k}`: discriminant of the `k`-th derivative of `∏ (t - x_i)`,
/// returned in the monomial-symmetric basis of the roots.
pub fn disc_nk(n: usize, k: usize) -> Result<SymPoly> {
    if n < 2 || k + 2 > n {
        return Err(Error::DerivativeOutOfRange { n, k });
    }
    let p = RootPoly::new(n)?;
    let f = derivative_k(&p, k)?;
    let lc = Rational::from_integer(factorial(n) / factorial(n - k));
    if f.leading().coeff(&vec![0; n]) != lc || f.leading().len() != 1 {
        return Err(Error::Consistency("unexpected leading coefficient".into()));
    }
    let disc = discriminant(&f)?;
    let s = ElemPoly::new(n, disc.clone())?.to_sympoly()?;
    let m = (n - k) as u32;
    if s.degree() != m * (m - 1) && !s.is_zero() {
        return Err(Error::Consistency(format!("degree {} instead of {}", s.degree(), m * (m - 1))));
    }
    // spot-check against the discriminant of the specialized polynomial
    for point in check_points(n) {
        let direct = discriminant_at(&f, &point)?;
        if s.eval(&point) != direct {
            return Err(Error::Consistency("discriminant disagrees with direct evaluation".into()));
        }
    }
    Ok(s)
}

fn check_points(n: usize) -> Vec<Vec<Rational>> {
    let a: Vec<Rational> = (0..n).map(|i| Rational::new(BigInt::from(i * i + 1), BigInt::from(i + 2))).collect();
    let b: Vec<Rational> = (0..n).map(|i| Rational::from_integer(BigInt::from(3 * i as i64 - 2 * (i as i64 % 2) * 5))).collect();
    vec![a, b]
}

/// Evaluates the formal `e`-coefficients of `f` at the roots `x` and takes the
/// discriminant of the resulting rational polynomial.
pub fn discriminant_at(f: &UniPoly, x: &[Rational]) -> Result<Rational> {
    let n = x.len();
    let e: Vec<Rational> = (1..=n).map(|k| elementary_value(x, k)).collect();
    let coeffs: Vec<Poly> = f.coeffs.iter().map(|c| Poly::constant(1, c.eval(&e))).collect();
    let g = UniPoly::new(coeffs)?;
    let d = discriminant(&g)?;
    Ok(d.coeff(&[0]))
}

fn elementary_value(x: &[Rational], k: usize) -> Rational {
    let mut e = vec![Rational::zero(); k + 1];
    e[0] = Rational::one();
    for xi in x {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * xi;
            e[j] += add;
        }
    }
    e[k].clone()
}

/// `Σ_{i<j} (x_i - x_j)^2` in `n` variables.
pub fn sum_of_squared_differences(n: usize) -> SymPoly {
    use crate::polyalg::Partition;
    SymPoly::from_coeffs(
        n,
        2,
        [
            (Partition::new(vec![2]), Rational::from_integer(BigInt::from(n as i64 - 1))),
            (Partition::new(vec![1, 1]), Rational::from_integer(BigInt::from(-2))),
        ]
        .into_iter()
        .filter(|(p, _)| p.len() <= n)
        .collect::<Vec<_>>(),
    )
    .expect("degree-2 partitions")
}

/// `∏_{i<j} (x_i - x_j)^2` in `n` variables.
pub fn vandermonde_squared(n: usize) -> Result<SymPoly> {
    let mut p = Poly::one(n);
    for i in 0..n {
        for j in i + 1..n {
            p = &p * &(&Poly::var(n, i) - &Poly::var(n, j)).pow(2);
        }
    }
    SymPoly::from_symmetric_poly(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn derivatives() {
        let p = RootPoly::new(2).unwrap();
        assert_eq!(derivative_k(&p, 0).unwrap(), p.poly().clone());
        let d = derivative_k(&RootPoly::new(3).unwrap(), 1).unwrap();
        assert_eq!(d.coeffs()[2], Poly::constant(3, int(3)));
        assert_eq!(d.coeffs()[1], Poly::var(3, 0).scale(&int(-2)));
        assert_eq!(d.coeffs()[0], Poly::var(3, 1));
        let d = derivative_k(&RootPoly::new(4).unwrap(), 2).unwrap();
        assert_eq!(d.coeffs()[2], Poly::constant(4, int(12)));
        assert_eq!(d.coeffs()[1], Poly::var(4, 0).scale(&int(-6)));
        assert_eq!(d.coeffs()[0], Poly::var(4, 1).scale(&int(2)));
        assert!(derivative_k(&RootPoly::new(4).unwrap(), 3).is_err());
    }

    #[test]
    fn resultants() {
        let a = Poly::var(2, 0);
        let b = Poly::var(2, 1);
        let f = UniPoly::new(vec![a.scale(&int(-1)), Poly::one(2)]).unwrap();
        let g = UniPoly::new(vec![b.scale(&int(-1)), Poly::one(2)]).unwrap();
        assert_eq!(resultant_sylvester(&f, &g).unwrap(), &a - &b);
        assert!(resultant_sylvester(&f, &f).unwrap().is_zero());
        let p = RootPoly::new(2).unwrap();
        let r = resultant_sylvester(p.poly(), &p.poly().derivative().unwrap()).unwrap();
        let want = &Poly::var(2, 1).scale(&int(4)) - &Poly::var(2, 0).pow(2);
        assert_eq!(r, want);
    }

    #[test]
    fn quadratic_discriminant() {
        let d = disc_nk(2, 0).unwrap();
        assert_eq!(d, vandermonde_squared(2).unwrap());
    }

    #[test]
    fn vandermonde_anchor() {
        for n in 2..=4 {
            assert_eq!(disc_nk(n, 0).unwrap(), vandermonde_squared(n).unwrap());
        }
    }

    #[test]
    fn second_to_last_derivative() {
        for k in 0..=3usize {
            let d = disc_nk(k + 2, k).unwrap();
            let c = d.proportionality(&sum_of_squared_differences(k + 2)).unwrap();
            assert_eq!(c, Rational::from_integer(factorial(k + 1) * factorial(k)));
        }
    }

    #[test]
    fn properties() {
        for (n, k) in [(3, 1), (4, 1), (5, 2)] {
            let d = disc_nk(n, k).unwrap();
            assert!(d.is_translation_invariant());
            assert_eq!(d.degree() as usize, (n - k) * (n - k - 1));
        }
        // double root kills D_{n,0} only
        let d = disc_nk(3, 0).unwrap();
        assert!(d.eval(&[int(1), int(1), ratio(5, 2)]).is_zero());
    }
}
