use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lp::{lp_feasible, verify_farkas, LpOutcome};
use super::matrix::RatMatrix;
use crate::error::{Error, Result};
use crate::graphs::{canonical_form, enumerate_multigraphs, CanonicalKey, GraphJson, Multigraph};
use crate::polyalg::{partitions, Partition, SymPoly};
use crate::rational::{self, Rational};
use crate::symgm::symmetrized_graph_monomial;

/// How generators are read off a target degree: a degree-`d` square graph has
/// `d/2` double edges, i.e. it is a doubled `d/2`-edge multigraph.
pub const GENERATOR_RULE: &str = "square graphs = doubled multigraphs with d/2 edges (d/2 double edges)";

/// A square-graph generator of the cone together with its symmetrization.
#[derive(Clone, Debug)]
pub struct ConeGenerator {
    pub graph: Multigraph,
    pub key: CanonicalKey,
    pub poly: SymPoly,
}

/// Nonzero symmetrized square graphs of degree `d` in `n` variables, one per
/// isomorphism class, sorted by key.
pub fn square_generators(d: u32, n: usize) -> Result<Vec<ConeGenerator>> {
    if d % 2 != 0 {
        return Err(Error::OddDegree(d));
    }
    let halves: Vec<Multigraph> =
        enumerate_multigraphs(d / 2).into_iter().filter(|g| g.non_isolated_count() <= n).collect();
    let gens: Vec<Option<ConeGenerator>> = halves
        .par_iter()
        .map(|h| {
            let graph = h.double();
            let poly = symmetrized_graph_monomial(&graph, n)?;
            Ok((!poly.is_zero()).then(|| ConeGenerator { key: canonical_form(&graph), graph, poly }))
        })
        .collect::<Result<_>>()?;
    let gens: Vec<ConeGenerator> = gens.into_iter().flatten().collect();
    if gens.is_empty() {
        return Err(Error::TooFewVariables { needed: 2, got: n });
    }
    Ok(gens)
}

/// Nonnegative weights over square graphs reproducing the target exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCertificate {
    pub n: usize,
    pub d: u32,
    pub terms: Vec<(Multigraph, Rational)>,
}

impl ConeCertificate {
    /// Re-symmetrizes every graph and checks `Σ w_i g̃_i = target` exactly.
    pub fn verify(&self, target: &SymPoly) -> bool {
        if self.terms.iter().any(|(_, w)| w.is_negative()) || target.n_vars() != self.n {
            return false;
        }
        let parts: Option<Vec<SymPoly>> = self
            .terms
            .par_iter()
            .map(|(g, w)| symmetrized_graph_monomial(g, self.n).ok().map(|p| p.scale(w)))
            .collect();
        let Some(parts) = parts else { return false };
        let mut acc = SymPoly::zero(self.n, self.d);
        for p in &parts {
            match acc.add(p) {
                Ok(s) => acc = s,
                Err(_) => return false,
            }
        }
        acc.sub(target).is_ok_and(|r| r.is_zero())
    }
}

/// Exact proof of non-membership: `y` over m-basis coordinates with
/// `y·g̃ ≤ 0` for every generator and `y·target > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub n: usize,
    pub d: u32,
    pub partitions: Vec<Partition>,
    pub y: Vec<Rational>,
}

impl FarkasCertificate {
    pub fn verify(&self, target: &SymPoly, generators: &[ConeGenerator]) -> bool {
        let b = target.coordinates(&self.partitions);
        let cols: Vec<Vec<Rational>> = generators.iter().map(|g| g.poly.coordinates(&self.partitions)).collect();
        // coordinates outside the listed partitions must vanish for the
        // functional to be meaningful
        let covered = |s: &SymPoly| s.coeffs().all(|(p, _)| self.partitions.contains(p));
        if !covered(target) || !generators.iter().all(|g| covered(&g.poly)) {
            return false;
        }
        RatMatrix::from_columns(cols).is_ok_and(|a| verify_farkas(&a, &b, &self.y))
    }
}

#[derive(Clone, Debug)]
pub enum ConeResult {
    Member(ConeCertificate),
    Infeasible(FarkasCertificate),
}

impl ConeResult {
    pub fn is_member(&self) -> bool {
        matches!(self, ConeResult::Member(_))
    }
}

/// Is `target` (degree `d`, `n` variables) a nonnegative combination of
/// symmetrized square graphs?
pub fn cone_membership(target: &SymPoly, d: u32, n: usize) -> Result<ConeResult> {
    if d % 2 != 0 {
        return Err(Error::OddDegree(d));
    }
    if target.n_vars() != n || (target.degree() != d && !target.is_zero()) {
        return Err(Error::DimensionMismatch(format!(
            "target has {} variables and degree {}, expected {n} and {d}",
            target.n_vars(),
            target.degree()
        )));
    }
    let gens = square_generators(d, n)?;
    cone_membership_with(target, &gens)
}

/// Same as [`cone_membership`] with a precomputed generator list.
pub fn cone_membership_with(target: &SymPoly, gens: &[ConeGenerator]) -> Result<ConeResult> {
    let n = target.n_vars();
    let d = gens.first().map_or(target.degree(), |g| g.poly.degree());
    let basis = partitions(d, n);
    let cols: Vec<Vec<Rational>> = gens.iter().map(|g| g.poly.coordinates(&basis)).collect();
    let a = RatMatrix::from_columns(cols)?;
    let b = target.coordinates(&basis);
    match lp_feasible(&a, &b)? {
        LpOutcome::Feasible(x) => {
            let terms = gens.iter().zip(x).filter(|(_, w)| !w.is_zero()).map(|(g, w)| (g.graph.clone(), w)).collect();
            let cert = ConeCertificate { n, d, terms };
            if !cert.verify(target) {
                return Err(Error::Consistency("cone certificate failed polynomial re-verification".into()));
            }
            Ok(ConeResult::Member(cert))
        }
        LpOutcome::Infeasible(y) => {
            let cert = FarkasCertificate { n, d, partitions: basis, y };
            if !cert.verify(target, gens) {
                return Err(Error::Consistency("Farkas certificate failed re-verification".into()));
            }
            Ok(ConeResult::Infeasible(cert))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConeTermJson {
    pub graph: GraphJson,
    pub key: String,
    pub weight: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FarkasJson {
    pub partitions: Vec<Vec<u32>>,
    pub y: Vec<String>,
}

/// Wire format of a cone-membership answer.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConeResultJson {
    pub feasible: bool,
    pub n: usize,
    pub d: u32,
    pub generators: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<ConeTermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub farkas: Option<FarkasJson>,
}

impl ConeResult {
    pub fn to_json(&self) -> ConeResultJson {
        match self {
            ConeResult::Member(c) => ConeResultJson {
                feasible: true,
                n: c.n,
                d: c.d,
                generators: GENERATOR_RULE.into(),
                terms: c
                    .terms
                    .iter()
                    .map(|(g, w)| ConeTermJson { graph: g.to_json(), key: canonical_form(g).to_hex(), weight: rational::format(w) })
                    .collect(),
                farkas: None,
            },
            ConeResult::Infeasible(f) => ConeResultJson {
                feasible: false,
                n: f.n,
                d: f.d,
                generators: GENERATOR_RULE.into(),
                terms: Vec::new(),
                farkas: Some(FarkasJson {
                    partitions: f.partitions.iter().map(|p| p.parts().to_vec()).collect(),
                    y: f.y.iter().map(rational::format).collect(),
                }),
            },
        }
    }
}

impl ConeCertificate {
    pub fn from_json(j: &ConeResultJson) -> Result<ConeCertificate> {
        if !j.feasible {
            return Err(Error::Parse("not a feasible cone certificate".into()));
        }
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((Multigraph::from_json(&t.graph)?, rational::parse(&t.weight)?)))
            .collect::<Result<_>>()?;
        Ok(ConeCertificate { n: j.n, d: j.d, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn double_edge_is_its_own_certificate() {
        let h = Multigraph::new(2, [(0, 1, 2)]).unwrap();
        let t = symmetrized_graph_monomial(&h, 4).unwrap();
        match cone_membership(&t, 2, 4).unwrap() {
            ConeResult::Member(c) => {
                assert_eq!(c.terms, vec![(h, int(1))]);
            }
            ConeResult::Infeasible(_) => panic!("expected member"),
        }
    }

    #[test]
    fn negative_target_is_refuted() {
        let h = Multigraph::new(2, [(0, 1, 2)]).unwrap();
        let t = symmetrized_graph_monomial(&h, 4).unwrap().scale(&int(-1));
        let gens = square_generators(2, 4).unwrap();
        match cone_membership_with(&t, &gens).unwrap() {
            ConeResult::Infeasible(f) => assert!(f.verify(&t, &gens)),
            ConeResult::Member(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn vandermonde_square() {
        // doubled triangle at n = 3 is 3! times the squared Vandermonde
        let tri = Multigraph::new(3, [(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        let t = symmetrized_graph_monomial(&tri, 3).unwrap().scale(&ratio(1, 6));
        match cone_membership(&t, 6, 3).unwrap() {
            ConeResult::Member(c) => {
                assert!(c.verify(&t));
                assert_eq!(c.terms.len(), 1);
                assert_eq!(c.terms[0].1, ratio(1, 6));
            }
            ConeResult::Infeasible(_) => panic!("expected member"),
        }
    }

    #[test]
    fn json_round_trip() {
        let h = Multigraph::new(2, [(0, 1, 2)]).unwrap();
        let t = symmetrized_graph_monomial(&h, 3).unwrap().scale(&int(3));
        let r = cone_membership(&t, 2, 3).unwrap();
        let j = r.to_json();
        let back = ConeCertificate::from_json(&serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap()).unwrap();
        assert!(back.verify(&t));
    }

    #[test]
    fn odd_degree_rejected() {
        assert!(matches!(cone_membership(&SymPoly::zero(3, 3), 3, 3), Err(Error::OddDegree(3))));
    }
}
