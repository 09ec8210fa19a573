//! 2-partitions, partition graphs, square graphs and the triangular change of
//! basis between them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Multigraph;
use crate::linopt::RatMatrix;
use crate::polyalg::{partitions, Partition, SymPoly};
use crate::rational::{self, factorial, Rational};
use crate::symgm::symmetrized_graph_monomial;

/// How the order treats partitions of different length.
pub const PREFIX_RULE: &str = "missing parts compare as even parts of size 0";

/// Integer partition with every part at least 2.
///
/// Ordered by `≺`: compare the split forms (odd parts descending, then even
/// parts descending) at the first position where they differ; an odd part
/// precedes an even one, and between parts of equal parity the larger one
/// comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoPartition(Partition);

impl TwoPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p < 2) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a part smaller than 2")));
        }
        Ok(TwoPartition(Partition::new(parts)))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn parts(&self) -> &[u32] {
        self.0.parts()
    }

    pub fn sum(&self) -> u32 {
        self.0.sum()
    }

    /// Odd parts descending followed by even parts descending.
    pub fn split_form(&self) -> Vec<u32> {
        let odd = self.parts().iter().copied().filter(|p| p % 2 == 1);
        let even = self.parts().iter().copied().filter(|p| p % 2 == 0);
        odd.chain(even).collect()
    }

    pub fn odd_count(&self) -> usize {
        self.parts().iter().filter(|&&p| p % 2 == 1).count()
    }

    pub fn twos(&self) -> usize {
        self.parts().iter().filter(|&&p| p == 2).count()
    }

    /// `(-2)^{#odd/2} · 2^{#(parts = 2)}`: each glued component contributes
    /// a sign and a choice of which parallel center edge is odd, each 2-part a
    /// choice of center.
    pub fn diagonal_factor(&self) -> Rational {
        let glued = self.odd_count() / 2;
        let sign = if glued % 2 == 1 { -1 } else { 1 };
        Rational::from_integer(BigInt::from(sign) * (BigInt::one() << (glued + self.twos())))
    }

    fn order_key(&self) -> Vec<(u8, std::cmp::Reverse<u32>)> {
        self.split_form().into_iter().map(|p| ((p % 2 == 0) as u8, std::cmp::Reverse(p))).collect()
    }
}

impl Ord for TwoPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.order_key(), other.order_key());
        let pad = (1u8, std::cmp::Reverse(0));
        for i in 0..a.len().max(b.len()) {
            let x = a.get(i).copied().unwrap_or(pad);
            let y = b.get(i).copied().unwrap_or(pad);
            match x.cmp(&y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for TwoPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TwoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All 2-partitions of `d`, ascending under `≺`.
pub fn two_partitions_ordered(d: u32) -> Vec<TwoPartition> {
    let mut out: Vec<TwoPartition> = partitions(d, d as usize)
        .into_iter()
        .filter(|p| p.parts().iter().all(|&x| x >= 2))
        .map(|p| TwoPartition(p))
        .collect();
    out.sort();
    out
}

/// Disjoint union of stars, one per part, edges directed away from centers.
pub fn partition_graph(alpha: &TwoPartition) -> Multigraph {
    let mut edges = Vec::new();
    let mut next = 0usize;
    for &p in alpha.parts() {
        let c = next;
        for l in 1..=p as usize {
            edges.push((c, c + l, 1));
        }
        next += p as usize + 1;
    }
    Multigraph::new(next.max(1), edges).expect("stars are valid")
}

/// Double-edge stars for even parts; each consecutive pair of odd parts
/// becomes a glued component (two centers joined by a double edge, center `i`
/// with `⌊α_i/2⌋` double pendants).
pub fn square_graph(alpha: &TwoPartition) -> Result<Multigraph> {
    if alpha.sum() % 2 != 0 {
        return Err(Error::OddDegree(alpha.sum()));
    }
    let mut edges = Vec::new();
    let mut next = 0usize;
    let odd: Vec<u32> = alpha.parts().iter().copied().filter(|p| p % 2 == 1).collect();
    for pair in odd.chunks(2) {
        let (c1, c2) = (next, next + 1);
        next += 2;
        edges.push((c1, c2, 2));
        for (c, p) in [(c1, pair[0]), (c2, pair[1])] {
            for _ in 0..p / 2 {
                edges.push((c, next, 2));
                next += 1;
            }
        }
    }
    for &p in alpha.parts().iter().filter(|p| *p % 2 == 0) {
        let c = next;
        next += 1;
        for _ in 0..p / 2 {
            edges.push((c, next, 2));
            next += 1;
        }
    }
    Multigraph::new(next.max(1), edges)
}

/// `coeff_of(S, β) / (n - ℓ(β))!`, the coefficient with unpainted-vertex
/// permutations divided out.
pub fn normalized_coeff(s: &SymPoly, beta: &Partition) -> Rational {
    let n = s.n_vars();
    if beta.len() > n {
        return Rational::zero();
    }
    s.coeff(beta) / Rational::from_integer(factorial(n - beta.len()))
}

/// Coordinates of a symmetric translation-invariant polynomial in the
/// partition-graph basis, read off the normalized coefficients at the
/// 2-partitions.
pub fn coordinates(s: &SymPoly, basis: &[TwoPartition]) -> Vec<Rational> {
    basis
        .iter()
        .map(|b| normalized_coeff(s, b.partition()) / Rational::from_integer(b.partition().repetition_factor()))
        .collect()
}

/// Square graphs written in the partition-graph basis, rows and columns in
/// ascending `≺` order: `h̃_α = Σ_β M[α][β] b̃_β`.
#[derive(Clone, Debug)]
pub struct BasisMatrix {
    pub d: u32,
    pub n: usize,
    pub order: Vec<TwoPartition>,
    pub matrix: RatMatrix,
    pub inverse: RatMatrix,
}

impl BasisMatrix {
    /// `M[α][β] = 0` whenever `β ≺ α`; with ascending indices this is the
    /// strictly-below-diagonal part.
    pub fn vanishes_below_order(&self) -> bool {
        let k = self.order.len();
        (0..k).all(|i| (0..i).all(|j| self.matrix[(i, j)].is_zero()))
    }

    pub fn diagonal_matches(&self) -> bool {
        self.order.iter().enumerate().all(|(i, a)| self.matrix[(i, i)] == a.diagonal_factor())
    }

    pub fn to_json(&self) -> BasisMatrixJson {
        let labels: Vec<Vec<u32>> = self.order.iter().map(|p| p.parts().to_vec()).collect();
        let fmt = |m: &RatMatrix| m.to_rows().iter().map(|r| r.iter().map(rational::format).collect()).collect();
        BasisMatrixJson {
            d: self.d,
            n: self.n,
            order: "ascending ≺: split form (odd parts desc, then even parts desc) compared at the first difference; odd before even, larger before smaller within a parity".into(),
            prefix_rule: PREFIX_RULE.into(),
            rows: "square graphs h_alpha".into(),
            columns: "partition graphs b_beta".into(),
            partitions: labels,
            matrix: fmt(&self.matrix),
            inverse: fmt(&self.inverse),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisMatrixJson {
    pub d: u32,
    pub n: usize,
    pub order: String,
    pub prefix_rule: String,
    pub rows: String,
    pub columns: String,
    pub partitions: Vec<Vec<u32>>,
    pub matrix: Vec<Vec<String>>,
    pub inverse: Vec<Vec<String>>,
}

/// Builds the change of basis for a stable pair `n ≥ 2d`, checking the
/// expansion exactly, the triangular shape and the diagonal.
pub fn change_of_basis_matrix(d: u32, n: usize) -> Result<BasisMatrix> {
    if d % 2 != 0 {
        return Err(Error::OddDegree(d));
    }
    if n < 2 * d as usize {
        return Err(Error::TooFewVariables { needed: 2 * d as usize, got: n });
    }
    let order = two_partitions_ordered(d);
    let b: Vec<SymPoly> =
        order.iter().map(|a| symmetrized_graph_monomial(&partition_graph(a), n)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(order.len());
    for a in &order {
        let h = symmetrized_graph_monomial(&square_graph(a)?, n)?;
        let coords = coordinates(&h, &order);
        let mut rebuilt = SymPoly::zero(n, d);
        for (c, bb) in coords.iter().zip(&b) {
            rebuilt = rebuilt.add(&bb.scale(c))?;
        }
        if rebuilt != h {
            return Err(Error::Consistency(format!("square graph {a} is not spanned by partition graphs")));
        }
        rows.push(coords);
    }
    let matrix = RatMatrix::from_rows(rows)?;
    let inverse = matrix.inverse().map_err(|_| Error::Consistency("change of basis is singular".into()))?;
    let bm = BasisMatrix { d, n, order, matrix, inverse };
    if !bm.vanishes_below_order() || !bm.diagonal_matches() {
        return Err(Error::Consistency("change of basis is not triangular with the expected diagonal".into()));
    }
    Ok(bm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{canonical_form, enumerate_multigraphs};
    use crate::rational::int;

    fn tp(p: &[u32]) -> TwoPartition {
        TwoPartition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(two_partitions_ordered(4), vec![tp(&[4]), tp(&[2, 2])]);
        assert_eq!(two_partitions_ordered(6), vec![tp(&[3, 3]), tp(&[6]), tp(&[4, 2]), tp(&[2, 2, 2])]);
        assert_eq!(two_partitions_ordered(5), vec![tp(&[5]), tp(&[3, 2])]);
        assert!(TwoPartition::new(vec![3, 1]).is_err());
    }

    #[test]
    fn order_is_total_and_consistent() {
        for d in 2..=12 {
            let ps = two_partitions_ordered(d);
            for w in ps.windows(2) {
                assert_eq!(w[0].cmp(&w[1]), Ordering::Less);
            }
        }
    }

    #[test]
    fn graphs() {
        let s = partition_graph(&tp(&[2]));
        assert_eq!(s.edge_count(), 2);
        assert_eq!(s.n_vertices(), 3);
        let s = partition_graph(&tp(&[4, 2]));
        assert_eq!(s.components().len(), 2);
        assert_eq!(s.edge_count(), 6);
        let h = square_graph(&tp(&[2])).unwrap();
        assert_eq!(h, Multigraph::new(2, [(0, 1, 2)]).unwrap());
        let glued = square_graph(&tp(&[3, 3])).unwrap();
        let expect = Multigraph::new(4, [(0, 1, 2), (0, 2, 2), (1, 3, 2)]).unwrap();
        assert_eq!(canonical_form(&glued), canonical_form(&expect));
        let h42 = square_graph(&tp(&[4, 2])).unwrap();
        assert_eq!(h42.components().len(), 2);
        assert!(h42.is_square());
        assert!(square_graph(&tp(&[3, 2])).is_err());
    }

    #[test]
    fn matrices() {
        let m2 = change_of_basis_matrix(2, 4).unwrap();
        assert_eq!(m2.matrix, RatMatrix::from_i64(&[&[2]]));
        let m4 = change_of_basis_matrix(4, 8).unwrap();
        assert_eq!(m4.matrix[(0, 0)], int(1));
        assert_eq!(m4.matrix[(1, 1)], int(4));
        let m6 = change_of_basis_matrix(6, 12).unwrap();
        assert_eq!(m6.matrix[(0, 0)], int(-2));
        assert!((1..4).all(|i| m6.matrix[(i, i)] > int(0)));
        assert!(change_of_basis_matrix(6, 11).is_err());
    }

    #[test]
    fn partition_coefficients() {
        for d in [4u32, 6] {
            let n = 2 * d as usize;
            let order = two_partitions_ordered(d);
            for a in &order {
                let b = symmetrized_graph_monomial(&partition_graph(a), n).unwrap();
                for beta in &order {
                    let want = if a == beta { Rational::from_integer(a.partition().repetition_factor()) } else { int(0) };
                    assert_eq!(normalized_coeff(&b, beta.partition()), want);
                }
                let h = symmetrized_graph_monomial(&square_graph(a).unwrap(), n).unwrap();
                let want = a.diagonal_factor() * Rational::from_integer(a.partition().repetition_factor());
                assert_eq!(normalized_coeff(&h, a.partition()), want);
            }
        }
        let h33 = symmetrized_graph_monomial(&square_graph(&tp(&[3, 3])).unwrap(), 12).unwrap();
        assert_eq!(normalized_coeff(&h33, &Partition::new(vec![3, 3])), int(-4));
        let by_coloring = crate::symgm::count_colorings(&square_graph(&tp(&[3, 3])).unwrap(), &Partition::new(vec![3, 3]));
        assert_eq!(by_coloring.unwrap().signed(), -4);
    }

    #[test]
    fn span_rank() {
        for (d, r) in [(4u32, 2usize), (5, 2), (6, 4)] {
            let n = 2 * d as usize;
            let basis = partitions(d, n);
            let rows: Vec<Vec<Rational>> = enumerate_multigraphs(d)
                .iter()
                .map(|g| symmetrized_graph_monomial(g, n).unwrap().coordinates(&basis))
                .collect();
            assert_eq!(RatMatrix::from_rows(rows).unwrap().rank(), r);
            assert_eq!(two_partitions_ordered(d).len(), r);
        }
    }
}
