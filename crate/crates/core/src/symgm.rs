//! Graph monomials, their symmetrizations, and the coloring formula for
//! their coefficients.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graphs::Multigraph;
use crate::polyalg::{symmetrize_poly, to_elementary, ElemPoly, Partition, Poly, SymPoly};
use crate::rational::{factorial, Rational};

/// `∏_{i→j} (x_i - x_j)^{mult}` in `g.n_vertices()` variables.
pub fn graph_monomial(g: &Multigraph) -> Poly {
    let n = g.n_vertices();
    let mut p = Poly::one(n);
    for (i, j, m) in g.edges() {
        let lin = &Poly::var(n, i) - &Poly::var(n, j);
        p = &p * &lin.pow(m);
    }
    p
}

/// `g̃ = Σ_{σ ∈ S_n} P_g(σx)`; isolated vertices are dropped first, so `n`
/// only needs to cover the non-isolated ones.
pub fn symmetrized_graph_monomial(g: &Multigraph, n: usize) -> Result<SymPoly> {
    let needed = g.non_isolated_count();
    if n < needed || n == 0 {
        return Err(Error::TooFewVariables { needed: needed.max(1), got: n });
    }
    let c = g.compact();
    symmetrize_poly(&graph_monomial(&c), n)
}

/// Signed count of partition-colorings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ColoringCount {
    pub positive_count: u64,
    pub negative_count: u64,
}

impl ColoringCount {
    pub fn signed(&self) -> i128 {
        self.positive_count as i128 - self.negative_count as i128
    }
}

/// Colorings of `g` by `α`: color `i` paints a distinct vertex and `α_i` of
/// its incident edges, every edge gets exactly one color, and the sign is the
/// parity of edges colored by the vertex they point into.
pub fn count_colorings(g: &Multigraph, alpha: &Partition) -> Result<ColoringCount> {
    let g = g.compact();
    let d = g.edge_count();
    if alpha.sum() != d {
        return Err(Error::DegreeMismatch { partition: alpha.parts().to_vec(), degree: d });
    }
    // edge instances (tail, head)
    let inst: Vec<(usize, usize)> =
        g.edges().flat_map(|(i, j, m)| std::iter::repeat((i, j)).take(m as usize)).collect();
    let n = g.n_vertices();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(i, j)) in inst.iter().enumerate() {
        incident[i].push(e);
        incident[j].push(e);
    }
    let mut search = Coloring {
        inst: &inst,
        incident: &incident,
        alpha: alpha.parts(),
        painted: vec![false; n],
        colored: vec![false; inst.len()],
        count: ColoringCount::default(),
    };
    if alpha.len() <= n {
        search.color(0, 0);
    }
    Ok(search.count)
}

struct Coloring<'a> {
    inst: &'a [(usize, usize)],
    incident: &'a [Vec<usize>],
    alpha: &'a [u32],
    painted: Vec<bool>,
    colored: Vec<bool>,
    count: ColoringCount,
}

impl Coloring<'_> {
    fn color(&mut self, idx: usize, odd: usize) {
        if idx == self.alpha.len() {
            if self.colored.iter().all(|&c| c) {
                if odd % 2 == 0 {
                    self.count.positive_count += 1;
                } else {
                    self.count.negative_count += 1;
                }
            }
            return;
        }
        let need = self.alpha[idx] as usize;
        for v in 0..self.painted.len() {
            if self.painted[v] {
                continue;
            }
            let free: Vec<usize> = self.incident[v].iter().copied().filter(|&e| !self.colored[e]).collect();
            if free.len() < need {
                continue;
            }
            self.painted[v] = true;
            let mut pick: Vec<usize> = (0..need).collect();
            loop {
                let mut new_odd = 0;
                for &p in &pick {
                    let e = free[p];
                    self.colored[e] = true;
                    if self.inst[e].1 == v {
                        new_odd += 1;
                    }
                }
                if self.feasible(v) {
                    self.color(idx + 1, odd + new_odd);
                }
                for &p in &pick {
                    self.colored[free[p]] = false;
                }
                if !next_combination(&mut pick, free.len()) {
                    break;
                }
            }
            self.painted[v] = false;
        }
    }

    /// After painting `v`, its remaining free edges can only go to the other
    /// endpoint, which must still be unpainted.
    fn feasible(&self, v: usize) -> bool {
        self.incident[v].iter().all(|&e| {
            if self.colored[e] {
                return true;
            }
            let (a, b) = self.inst[e];
            let other = if a == v { b } else { a };
            !self.painted[other]
        })
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
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

/// `(n - ℓ(α))! · (positive - negative)`: the coefficient of `x^α` in `g̃` with
/// `n` variables; the factorial accounts for the unpainted vertices.
pub fn coeff_by_coloring(g: &Multigraph, alpha: &Partition, n: usize) -> Result<Rational> {
    let needed = g.non_isolated_count();
    if n < needed {
        return Err(Error::TooFewVariables { needed, got: n });
    }
    if alpha.len() > n {
        return Err(Error::TooFewVariables { needed: alpha.len(), got: n });
    }
    let c = count_colorings(g, alpha)?;
    Ok(Rational::from_integer(factorial(n - alpha.len()) * BigInt::from(c.signed())))
}

/// `Q_g(e_0, ..., e_n)`: `g̃` in elementary symmetric functions, homogenized
/// to degree `d`.
pub fn q_covariant(g: &Multigraph, n: usize) -> Result<ElemPoly> {
    let s = symmetrized_graph_monomial(g, n)?;
    to_elementary(&s).homogenize(g.edge_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::enumerate_multigraphs;
    use crate::polyalg::partitions;
    use crate::rational::int;

    fn g(n: usize, e: &[(usize, usize, u32)]) -> Multigraph {
        Multigraph::new(n, e.iter().copied()).unwrap()
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn monomials() {
        let e = graph_monomial(&g(2, &[(0, 1, 1)]));
        assert_eq!(e.coeff(&[1, 0]), int(1));
        assert_eq!(e.coeff(&[0, 1]), int(-1));
        let dbl = graph_monomial(&g(2, &[(0, 1, 2)]));
        assert_eq!(dbl.coeff(&[1, 1]), int(-2));
        let path = graph_monomial(&g(3, &[(0, 1, 1), (1, 2, 1)]));
        assert_eq!(path.coeff(&[1, 1, 0]), int(1));
        assert_eq!(path.coeff(&[1, 0, 1]), int(-1));
        assert_eq!(path.coeff(&[0, 2, 0]), int(-1));
        assert_eq!(path.coeff(&[0, 1, 1]), int(1));
        assert_eq!(path.len(), 4);
    }

    #[test]
    fn symmetrized_examples() {
        assert!(symmetrized_graph_monomial(&g(2, &[(0, 1, 1)]), 2).unwrap().is_zero());
        let dbl = symmetrized_graph_monomial(&g(2, &[(0, 1, 2)]), 3).unwrap();
        assert_eq!(dbl.coeff(&p(&[2])), int(4));
        assert_eq!(dbl.coeff(&p(&[1, 1])), int(-4));
        let path = symmetrized_graph_monomial(&g(3, &[(0, 1, 1), (1, 2, 1)]), 3).unwrap();
        assert_eq!(path.coeff(&p(&[2])), int(-2));
        assert_eq!(path.coeff(&p(&[1, 1])), int(2));
        assert_eq!(path.eval_integer(&[2, 1, 0]), int(-6));
        assert!(symmetrized_graph_monomial(&g(3, &[(0, 1, 1), (1, 2, 1)]), 2).is_err());
    }

    #[test]
    fn coloring_examples() {
        let dbl = g(2, &[(0, 1, 2)]);
        assert_eq!(count_colorings(&dbl, &p(&[2])).unwrap(), ColoringCount { positive_count: 2, negative_count: 0 });
        assert_eq!(coeff_by_coloring(&dbl, &p(&[2]), 2).unwrap(), int(2));
        assert_eq!(coeff_by_coloring(&dbl, &p(&[2]), 3).unwrap(), int(4));
        assert_eq!(coeff_by_coloring(&g(2, &[(0, 1, 1)]), &p(&[1]), 2).unwrap(), int(0));
    }

    #[test]
    fn coloring_matches_expansion_small() {
        for d in 1..=4 {
            for h in enumerate_multigraphs(d) {
                let n = (2 * d as usize).max(h.n_vertices());
                let s = symmetrized_graph_monomial(&h, n).unwrap();
                for a in partitions(d, n) {
                    assert_eq!(coeff_by_coloring(&h, &a, n).unwrap(), s.coeff(&a), "{h} {a}");
                }
            }
        }
    }

    #[test]
    fn covariants() {
        assert!(q_covariant(&g(2, &[(0, 1, 1)]), 2).unwrap().is_zero());
        let q = q_covariant(&g(2, &[(0, 1, 2)]), 2).unwrap();
        assert_eq!(q.coeff(&[0, 2, 0]), int(2));
        assert_eq!(q.coeff(&[1, 0, 1]), int(-8));
        assert_eq!(q.poly().len(), 2);
        let tri = g(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).double();
        let q = q_covariant(&tri, 3).unwrap();
        assert!(q.poly().terms().all(|(e, _)| e.iter().sum::<u32>() == 6));
    }

    #[test]
    fn reversal_flips_sign_and_invariance() {
        for h in enumerate_multigraphs(4) {
            let s = symmetrized_graph_monomial(&h, 8).unwrap();
            assert!(s.is_translation_invariant());
            let (i, j, _) = h.edges().next().unwrap();
            let r = symmetrized_graph_monomial(&h.reverse_one(i, j).unwrap(), 8).unwrap();
            assert_eq!(r, s.scale(&int(-1)));
        }
    }
}
