use std::collections::{BTreeMap, BTreeSet, HashSet};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::certificate::SosCertificate;
use super::psd::{psd_check, PsdResult};
use crate::error::{Error, Result};
use crate::linopt::{lp_feasible, RatMatrix};
use crate::polyalg::{Exponent, Poly, SymPoly};
use crate::rational::{self, Rational};

/// Budget and knobs for the numeric Gram search.
#[derive(Clone, Debug)]
pub struct SosSearchConfig {
    /// Projection iterations per attempt.
    pub iterations: usize,
    /// Half-width of the integer grid used to find forced kernel vectors.
    pub grid: i64,
    /// Largest power of two tried as a rounding denominator.
    pub max_denominator_log2: u32,
}

impl Default for SosSearchConfig {
    fn default() -> Self {
        SosSearchConfig { iterations: 2000, grid: 2, max_denominator_log2: 16 }
    }
}

#[derive(Clone, Debug)]
pub enum SosOutcome {
    Certificate(SosCertificate),
    Unknown(String),
}

impl SosOutcome {
    pub fn certificate(&self) -> Option<&SosCertificate> {
        match self {
            SosOutcome::Certificate(c) => Some(c),
            SosOutcome::Unknown(_) => None,
        }
    }
}

/// Searches for `target = scale · v Q vᵀ` with `v` in `n_active` variables.
///
/// The target is first written as the lift of a symmetric polynomial `T` in
/// `n_active` variables (so a certificate for `T` certifies the target); if
/// `T` is translation invariant the last variable is set to zero and the
/// certificate is transported back through `y_i = x_i - x_m`. Monomials are
/// restricted to the half Newton polytope and to the orthogonal complement of
/// `v(z)` for integer zeros `z`; the Gram matrix is found by alternating
/// projections, rounded, projected exactly onto the affine constraints and
/// accepted only after exact verification.
pub fn find_sos(target: &SymPoly, n_active: usize, cfg: &SosSearchConfig) -> Result<SosOutcome> {
    let deg = target.degree();
    if deg % 2 != 0 {
        return Err(Error::OddDegree(deg));
    }
    let k = deg / 2;
    let n = target.n_vars();
    let m = n_active.min(n);
    if target.max_parts() > m {
        return Ok(SosOutcome::Unknown(format!("support needs {} variables", target.max_parts())));
    }
    if target.is_zero() {
        let mut e = vec![0; m.max(1)];
        e[0] = k;
        return Ok(SosOutcome::Certificate(SosCertificate { v: vec![e], q: RatMatrix::zeros(1, 1), scale: Rational::one() }));
    }
    let t = if m < n { target.descend(m)? } else { target.clone() };
    let full = t.expand();
    let reduced = m >= 2 && t.is_translation_invariant();
    let g = if reduced { set_last_to_zero(&full) } else { full };

    let s0 = g.terms().map(|(_, c)| c.abs()).max().expect("nonzero");
    let gn = g.scale(&s0.recip());

    let mons = half_newton_monomials(&gn, k);
    if mons.is_empty() {
        return Ok(SosOutcome::Unknown("empty half Newton polytope".into()));
    }
    let w = match facial_reduction(&gn, &mons, cfg.grid) {
        Ok(w) => w,
        Err(reason) => return Ok(SosOutcome::Unknown(reason)),
    };
    if w.cols() == 0 {
        return Ok(SosOutcome::Unknown("every monomial is forced into the kernel".into()));
    }
    let problem = match GramProblem::new(&gn, &mons, w) {
        Ok(p) => p,
        Err(reason) => return Ok(SosOutcome::Unknown(reason)),
    };
    let Some(q_red) = problem.solve(cfg) else {
        return Ok(SosOutcome::Unknown("no exactly verified Gram matrix within budget".into()));
    };
    let (v, q) = if reduced { unreduce(&mons, &q_red, m)? } else { (mons, q_red) };
    let cert = SosCertificate { v, q, scale: s0 };
    match cert.check(target) {
        Ok(()) => Ok(SosOutcome::Certificate(cert)),
        Err(e) => Err(Error::Consistency(format!("assembled certificate failed verification: {e}"))),
    }
}

fn set_last_to_zero(p: &Poly) -> Poly {
    let r = p.n_vars() - 1;
    Poly::from_terms(r, p.terms().filter(|(e, _)| e[r] == 0).map(|(e, c)| (e[..r].to_vec(), c.clone())))
}

/// All exponent vectors of total degree `k` in `r` variables, lex order.
pub fn monomials_of_degree(r: usize, k: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; r];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    if r > 0 {
        rec(0, k, &mut cur, &mut out);
    }
    out
}

/// Degree-`k` monomials `a` with `2a` in the convex hull of the support.
fn half_newton_monomials(g: &Poly, k: u32) -> Vec<Exponent> {
    let support: Vec<&Exponent> = g.terms().map(|(e, _)| e).collect();
    let r = g.n_vars();
    let lo: Vec<u32> = (0..r).map(|i| support.iter().map(|e| e[i]).min().unwrap_or(0)).collect();
    let hi: Vec<u32> = (0..r).map(|i| support.iter().map(|e| e[i]).max().unwrap_or(0)).collect();
    let mut cols: Vec<Vec<Rational>> = support
        .iter()
        .map(|e| e.iter().map(|&x| Rational::from_integer(x.into())).chain(std::iter::once(Rational::one())).collect())
        .collect();
    cols.sort();
    let a = RatMatrix::from_columns(cols).expect("rectangular");
    monomials_of_degree(r, k)
        .into_iter()
        .filter(|m| (0..r).all(|i| lo[i] <= 2 * m[i] && 2 * m[i] <= hi[i]))
        .filter(|m| {
            if support.iter().any(|e| e.iter().zip(m).all(|(x, y)| *x == 2 * y)) {
                return true;
            }
            let b: Vec<Rational> =
                m.iter().map(|&x| Rational::from_integer((2 * x).into())).chain(std::iter::once(Rational::one())).collect();
            lp_feasible(&a, &b).is_ok_and(|o| o.is_feasible())
        })
        .collect()
}

/// Exact value of `g` at an integer point.
fn eval_int(g: &[(Exponent, BigInt)], z: &[i64]) -> BigInt {
    let maxe = g.iter().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0) as usize;
    let pows: Vec<Vec<BigInt>> = z
        .iter()
        .map(|&x| {
            let mut v = vec![BigInt::one()];
            for i in 1..=maxe {
                let next = &v[i - 1] * x;
                v.push(next);
            }
            v
        })
        .collect();
    g.iter()
        .map(|(e, c)| e.iter().enumerate().fold(c.clone(), |acc, (i, &p)| if p == 0 { acc } else { acc * &pows[i][p as usize] }))
        .sum()
}

/// Basis `W` (columns) of the complement of `span{v(z)}` over integer zeros
/// `z` of `g`; any PSD Gram matrix satisfies `Q v(z) = 0` there.
fn facial_reduction(g: &Poly, mons: &[Exponent], grid: i64) -> std::result::Result<RatMatrix, String> {
    let r = g.n_vars();
    let den = g.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let gi: Vec<(Exponent, BigInt)> =
        g.terms().map(|(e, c)| (e.clone(), (c * Rational::from_integer(den.clone())).to_integer())).collect();
    let mut rows: HashSet<Vec<BigInt>> = HashSet::new();
    let mut z = vec![-grid; r];
    loop {
        if z.iter().any(|&x| x != 0) {
            let val = eval_int(&gi, &z);
            if val.is_negative() {
                return Err(format!("negative value at {z:?}"));
            }
            if val.is_zero() {
                let v: Vec<BigInt> = mons
                    .iter()
                    .map(|a| a.iter().zip(&z).fold(BigInt::one(), |acc, (&p, &x)| acc * BigInt::from(x).pow(p)))
                    .collect();
                if let Some(v) = normalize_direction(v) {
                    rows.insert(v);
                }
            }
        }
        let Some(i) = (0..r).rev().find(|&i| z[i] < grid) else { break };
        z[i] += 1;
        for x in z.iter_mut().skip(i + 1) {
            *x = -grid;
        }
    }
    let nm = mons.len();
    if rows.is_empty() {
        return Ok(RatMatrix::identity(nm));
    }
    let mut rows: Vec<Vec<BigInt>> = rows.into_iter().collect();
    rows.sort();
    let zmat = RatMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(Rational::from_integer).collect()).collect())
        .expect("rectangular");
    let ns = zmat.nullspace();
    if ns.is_empty() {
        return Ok(RatMatrix::zeros(nm, 0));
    }
    Ok(RatMatrix::from_columns(ns).expect("rectangular"))
}

fn normalize_direction(mut v: Vec<BigInt>) -> Option<Vec<BigInt>> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let first_neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in &mut v {
        *x = &*x / &g;
        if first_neg {
            *x = -&*x;
        }
    }
    Some(v)
}

/// Affine constraints `⟨M_μ, R⟩ = g_μ` on a symmetric `R` with `Q = W R Wᵀ`.
struct GramProblem {
    w: RatMatrix,
    s: usize,
    /// `(a, b)` with `a ≤ b`, the order of the unknowns.
    vars: Vec<(usize, usize)>,
    /// Reduced rows `x_p = b - Σ c_j x_j` over free unknowns `j`.
    pivot_rows: Vec<(usize, Vec<(usize, Rational)>, Rational)>,
    a_scaled: DMatrix<f64>,
    b_float: DVector<f64>,
}

impl GramProblem {
    fn new(g: &Poly, mons: &[Exponent], w: RatMatrix) -> std::result::Result<Self, String> {
        let s = w.cols();
        let vars: Vec<(usize, usize)> = (0..s).flat_map(|a| (a..s).map(move |b| (a, b))).collect();
        let index: BTreeMap<(usize, usize), usize> = vars.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        // group ordered monomial pairs by their product
        let mut by_mu: BTreeMap<Exponent, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, vi) in mons.iter().enumerate() {
            for (j, vj) in mons.iter().enumerate() {
                let mu: Exponent = vi.iter().zip(vj).map(|(a, b)| a + b).collect();
                by_mu.entry(mu).or_default().push((i, j));
            }
        }
        if let Some((e, _)) = g.terms().find(|(e, _)| !by_mu.contains_key(*e)) {
            return Err(format!("monomial {e:?} cannot be produced by the Gram basis"));
        }
        let mut rows = Vec::new();
        for (mu, pairs) in &by_mu {
            let mut row = vec![Rational::zero(); vars.len()];
            for &(i, j) in pairs {
                for a in 0..s {
                    let wia = &w[(i, a)];
                    if wia.is_zero() {
                        continue;
                    }
                    for b in 0..s {
                        let wjb = &w[(j, b)];
                        if wjb.is_zero() {
                            continue;
                        }
                        let key = if a <= b { (a, b) } else { (b, a) };
                        row[index[&key]] += wia * wjb;
                    }
                }
            }
            row.push(g.coeff(mu));
            rows.push(row);
        }
        let aug = RatMatrix::from_rows(rows).map_err(|e| e.to_string())?;
        let a_full = aug.clone();
        let rref = aug.rref();
        let nv = vars.len();
        if rref.pivots.last() == Some(&nv) {
            return Err("Gram constraints are inconsistent".into());
        }
        let mut pivot_rows = Vec::new();
        for (r, &p) in rref.pivots.iter().enumerate() {
            let row = rref.matrix.row(r);
            let rest = (0..nv).filter(|&j| j != p && !row[j].is_zero()).map(|j| (j, row[j].clone())).collect();
            pivot_rows.push((p, rest, row[nv].clone()));
        }
        let rows_f = a_full.rows();
        let sqrt2 = std::f64::consts::SQRT_2;
        let a_scaled = DMatrix::from_fn(rows_f, nv, |i, j| {
            let x = rational::to_f64(&a_full[(i, j)]);
            if vars[j].0 == vars[j].1 {
                x
            } else {
                x / sqrt2
            }
        });
        let b_float = DVector::from_fn(rows_f, |i, _| rational::to_f64(&a_full[(i, nv)]));
        Ok(GramProblem { w, s, vars, pivot_rows, a_scaled, b_float })
    }

    fn to_matrix(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut r = DMatrix::zeros(self.s, self.s);
        for (i, &(a, b)) in self.vars.iter().enumerate() {
            if a == b {
                r[(a, a)] = x[i];
            } else {
                let v = x[i] / std::f64::consts::SQRT_2;
                r[(a, b)] = v;
                r[(b, a)] = v;
            }
        }
        r
    }

    fn to_vector(&self, r: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_fn(self.vars.len(), |i, _| {
            let (a, b) = self.vars[i];
            if a == b {
                r[(a, a)]
            } else {
                r[(a, b)] * std::f64::consts::SQRT_2
            }
        })
    }

    /// Alternating projections with a shrinking eigenvalue floor; returns the
    /// exact Gram matrix `Q = W R Wᵀ` once some rounding verifies.
    fn solve(&self, cfg: &SosSearchConfig) -> Option<RatMatrix> {
        let svd = self.a_scaled.clone().svd(true, true);
        let pinv = svd.pseudo_inverse(1e-10).ok()?;
        let project = |x: &DVector<f64>| -> DVector<f64> { x - &pinv * (&self.a_scaled * x - &self.b_float) };
        let mut x = project(&DVector::zeros(self.vars.len()));
        let mut eps = 0.1;
        let mut last_try = usize::MAX;
        for it in 0..cfg.iterations {
            x = project(&x);
            let r = self.to_matrix(&x);
            let eig = SymmetricEigen::new(r.clone());
            let min = eig.eigenvalues.min();
            if min > 0.0 && (last_try == usize::MAX || it >= last_try + 10) {
                last_try = it;
                if let Some(q) = self.round_and_verify(&r, cfg) {
                    return Some(q);
                }
            }
            let clipped = eig.eigenvalues.map(|l| l.max(eps));
            let rc = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
            x = self.to_vector(&rc);
            if it % 250 == 249 {
                eps = (eps / 2.0).max(1e-8);
            }
        }
        let r = self.to_matrix(&project(&x));
        self.round_and_verify(&r, cfg)
    }

    fn round_and_verify(&self, r: &DMatrix<f64>, cfg: &SosSearchConfig) -> Option<RatMatrix> {
        let mut dens: Vec<u64> = (0..=cfg.max_denominator_log2).map(|j| 1u64 << j).collect();
        dens.extend([20u32, 24, 28, 32].iter().filter(|&&j| j > cfg.max_denominator_log2).map(|&j| 1u64 << j));
        for den in dens {
            let mut x: Vec<Rational> =
                self.vars.iter().map(|&(a, b)| rational::round_to_denominator(r[(a, b)], den)).collect();
            self.project_exact(&mut x);
            let mut rm = RatMatrix::zeros(self.s, self.s);
            for (i, &(a, b)) in self.vars.iter().enumerate() {
                rm[(a, b)] = x[i].clone();
                rm[(b, a)] = x[i].clone();
            }
            if let Ok(PsdResult::Psd(_)) = psd_check(&rm) {
                let q = self.w.mul(&rm).ok()?.mul(&self.w.transpose()).ok()?;
                return Some(q);
            }
        }
        None
    }

    /// Recomputes the pivot unknowns from the free ones, landing exactly on
    /// the affine set.
    fn project_exact(&self, x: &mut [Rational]) {
        for (p, rest, b) in &self.pivot_rows {
            x[*p] = b - rest.iter().map(|(j, c)| c * &x[*j]).sum::<Rational>();
        }
    }
}

/// Transports a Gram matrix over monomials in `y_1..y_{m-1}` to monomials in
/// `x_1..x_m` via `y_i = x_i - x_m`.
fn unreduce(mons: &[Exponent], q: &RatMatrix, m: usize) -> Result<(Vec<Exponent>, RatMatrix)> {
    let mut images = Vec::with_capacity(mons.len());
    let mut all: BTreeSet<Exponent> = BTreeSet::new();
    for a in mons {
        let mut p = Poly::one(m);
        for (i, &e) in a.iter().enumerate() {
            if e > 0 {
                let y = &Poly::var(m, i) - &Poly::var(m, m - 1);
                p = &p * &y.pow(e);
            }
        }
        all.extend(p.terms().map(|(e, _)| e.clone()));
        images.push(p);
    }
    let u: Vec<Exponent> = all.into_iter().collect();
    let mut c = RatMatrix::zeros(mons.len(), u.len());
    for (i, p) in images.iter().enumerate() {
        for (j, e) in u.iter().enumerate() {
            c[(i, j)] = p.coeff(e);
        }
    }
    let full = c.transpose().mul(q)?.mul(&c)?;
    Ok((u, full))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Multigraph;
    use crate::polyalg::symmetrize_poly;
    use crate::positivity::verify_sos;
    use crate::symgm::symmetrized_graph_monomial;

    fn cfg() -> SosSearchConfig {
        SosSearchConfig::default()
    }

    #[test]
    fn monomial_lists() {
        assert_eq!(monomials_of_degree(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials_of_degree(5, 3).len(), 35);
    }

    #[test]
    fn squared_difference() {
        let t = symmetrize_poly(&(&Poly::var(2, 0) - &Poly::var(2, 1)).pow(2), 4).unwrap();
        let c = find_sos(&t, 4, &cfg()).unwrap();
        assert!(verify_sos(&t, c.certificate().expect("certificate")));
    }

    #[test]
    fn square_graph_targets() {
        let tri = Multigraph::new(3, [(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        let t = symmetrized_graph_monomial(&tri, 4).unwrap();
        let c = find_sos(&t, 4, &cfg()).unwrap();
        assert!(verify_sos(&t, c.certificate().expect("certificate")));
        let star = Multigraph::new(3, [(0, 1, 2), (0, 2, 2)]).unwrap();
        let t = symmetrized_graph_monomial(&star, 8).unwrap();
        let c = find_sos(&t, 4, &cfg()).unwrap();
        assert!(verify_sos(&t, c.certificate().expect("certificate")));
    }

    #[test]
    fn four_star_certified_only_at_six_variables() {
        let star = Multigraph::new(5, (1..5).map(|i| (0, i, 1))).unwrap();
        let t = symmetrized_graph_monomial(&star, 8).unwrap();
        for m in 4..=5 {
            assert!(find_sos(&t, m, &cfg()).unwrap().certificate().is_none());
        }
        let cert = find_sos(&t, 6, &cfg()).unwrap().certificate().cloned().unwrap();
        assert_eq!(cert.n_vars(), 6);
        assert!(verify_sos(&t, &cert));
    }

    #[test]
    fn odd_degree_rejected() {
        assert!(matches!(find_sos(&SymPoly::zero(3, 3), 3, &cfg()), Err(Error::OddDegree(3))));
    }
}
