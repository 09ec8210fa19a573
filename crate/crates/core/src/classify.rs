//! Classification of all `d`-edge multigraphs by their symmetrization at
//! `n = 2d` variables: vanishing, square-cone member, sign-changing, sum of
//! squares, or none of these.

use std::collections::BTreeMap;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{canonical_form, enumerate_multigraphs, CanonicalKey, GraphJson, Multigraph};
use crate::linopt::{
    cone_membership_with, square_generators, ConeCertificate, ConeGenerator, ConeResult, ConeResultJson,
    FarkasCertificate, RatMatrix,
};
use crate::polyalg::{Partition, SymPoly, SymPolyJson};
use crate::positivity::{
    find_sos, sign_witness_search, SignWitness, SignWitnessJson, SosCertificate, SosSearchConfig,
};
use crate::rational::{self, int, Rational};
use crate::symgm::symmetrized_graph_monomial;

/// Returns `c` with `g̃₁ = c·g̃₂` at `n` variables, or `None` when the two are
/// not proportional.
pub fn equivalence(g1: &Multigraph, g2: &Multigraph, n: usize) -> Result<Option<Rational>> {
    let p1 = symmetrized_graph_monomial(g1, n)?;
    let p2 = symmetrized_graph_monomial(g2, n)?;
    if p1.is_zero() || p2.is_zero() {
        return Err(Error::Vanishing);
    }
    Ok(p1.proportionality(&p2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    SquareCone,
    SosCertified,
    SignChanging,
    CandidateLax,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::SquareCone => "SQUARE_CONE",
            Label::SosCertified => "SOS_CERTIFIED",
            Label::SignChanging => "SIGN_CHANGING",
            Label::CandidateLax => "CANDIDATE_LAX",
        }
    }
}

/// Proof attached to a class label.
#[derive(Clone, Debug)]
pub enum Evidence {
    Cone(ConeCertificate),
    Sign(SignWitness),
    Sos { n_active: usize, certificate: SosCertificate },
    None,
}

#[derive(Clone, Debug)]
pub struct ClassMember {
    pub graph: Multigraph,
    pub key: CanonicalKey,
    /// `g̃_member = constant · class polynomial`.
    pub constant: Rational,
}

#[derive(Clone, Debug)]
pub struct EquivalenceClass {
    pub representative: CanonicalKey,
    /// Representative's symmetrization, signed so that its first nonzero
    /// coefficient is positive.
    pub poly: SymPoly,
    pub members: Vec<ClassMember>,
    pub label: Label,
    /// Sign under which the label's evidence holds (`poly` or `-poly`).
    pub orientation: i8,
    pub evidence: Evidence,
    /// Exact non-membership proofs for `poly` and `-poly`, present whenever
    /// neither lies in the square cone.
    pub farkas: Vec<FarkasCertificate>,
    /// Variable counts at which the SOS search ran without success.
    pub sos_attempts: Vec<usize>,
}

impl EquivalenceClass {
    pub fn oriented_poly(&self) -> SymPoly {
        self.poly.scale(&int(self.orientation as i64))
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub d: u32,
    pub n: usize,
    pub vanishing: Vec<CanonicalKey>,
    pub classes: Vec<EquivalenceClass>,
}

/// Pipeline knobs.
#[derive(Clone, Debug)]
pub struct ClassifyConfig {
    pub seed: u64,
    pub sos: SosSearchConfig,
    /// Variable counts tried by the SOS search, ascending.
    pub tiers: Vec<usize>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { seed: 0, sos: SosSearchConfig::default(), tiers: vec![4, 5, 6] }
    }
}

/// Divides by the first nonzero coefficient in graded-lex order; `None` for zero.
fn normalized_key(p: &SymPoly) -> Option<Vec<(Partition, Rational)>> {
    let (_, c0) = p.coeffs().next()?;
    let c0 = c0.clone();
    Some(p.coeffs().map(|(l, c)| (l.clone(), c / &c0)).collect())
}

fn first_sign(p: &SymPoly) -> i64 {
    p.coeffs().next().map_or(1, |(_, c)| if c.is_negative() { -1 } else { 1 })
}

/// Runs the full pipeline for `d`-edge graphs at `n = 2d` variables.
pub fn classify_report(d: u32, cfg: &ClassifyConfig) -> Result<ClassificationReport> {
    let n = 2 * d as usize;
    let graphs = enumerate_multigraphs(d);
    let polys: Vec<SymPoly> = graphs.par_iter().map(|g| symmetrized_graph_monomial(g, n)).collect::<Result<_>>()?;

    let mut vanishing = Vec::new();
    let mut groups: BTreeMap<Vec<(Partition, Rational)>, Vec<(CanonicalKey, usize)>> = BTreeMap::new();
    for (i, (g, p)) in graphs.iter().zip(&polys).enumerate() {
        let key = canonical_form(g);
        match normalized_key(p) {
            None => vanishing.push(key),
            Some(k) => groups.entry(k).or_default().push((key, i)),
        }
    }
    vanishing.sort();

    let gens = if d % 2 == 0 { square_generators(d, n)? } else { Vec::new() };
    let mut classes: Vec<EquivalenceClass> = groups
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|mut members| {
            members.sort();
            let rep = members[0].1;
            let poly = polys[rep].scale(&int(first_sign(&polys[rep])));
            let members = members
                .iter()
                .map(|(key, i)| {
                    let constant = polys[*i]
                        .proportionality(&poly)
                        .ok_or_else(|| Error::Consistency("class members are not proportional".into()))?;
                    Ok(ClassMember { graph: graphs[*i].clone(), key: key.clone(), constant })
                })
                .collect::<Result<Vec<_>>>()?;
            label_class(members, poly, &gens, cfg)
        })
        .collect::<Result<_>>()?;
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(ClassificationReport { d, n, vanishing, classes })
}

fn label_class(
    members: Vec<ClassMember>,
    poly: SymPoly,
    gens: &[ConeGenerator],
    cfg: &ClassifyConfig,
) -> Result<EquivalenceClass> {
    let representative = members[0].key.clone();
    let mut class = EquivalenceClass {
        representative,
        poly,
        members,
        label: Label::CandidateLax,
        orientation: 1,
        evidence: Evidence::None,
        farkas: Vec::new(),
        sos_attempts: Vec::new(),
    };
    if class.poly.degree() % 2 != 0 {
        class.label = Label::SignChanging;
        if let Some(w) = sign_witness_search(&class.poly, cfg.seed) {
            class.evidence = Evidence::Sign(w);
        }
        return Ok(class);
    }
    for s in [1i8, -1] {
        let target = class.poly.scale(&int(s as i64));
        match cone_membership_with(&target, gens)? {
            ConeResult::Member(c) => {
                class.label = Label::SquareCone;
                class.orientation = s;
                class.evidence = Evidence::Cone(c);
                class.farkas.clear();
                return Ok(class);
            }
            ConeResult::Infeasible(f) => class.farkas.push(f),
        }
    }
    if let Some(w) = sign_witness_search(&class.poly, cfg.seed) {
        if w.changes_sign() {
            class.label = Label::SignChanging;
            class.evidence = Evidence::Sign(w);
            return Ok(class);
        }
        // never positive on the battery: study -poly instead
        class.orientation = -1;
    }
    let target = class.oriented_poly();
    for &m in cfg.tiers.iter().filter(|&&m| m >= target.max_parts()) {
        class.sos_attempts.push(m);
        if let Some(cert) = find_sos(&target, m, &cfg.sos)?.certificate() {
            class.label = Label::SosCertified;
            class.evidence = Evidence::Sos { n_active: m, certificate: cert.clone() };
            return Ok(class);
        }
    }
    Ok(class)
}

impl ClassificationReport {
    pub fn count(&self, label: Label) -> usize {
        self.classes.iter().filter(|c| c.label == label).count()
    }

    pub fn member_count(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).sum()
    }

    /// Re-checks every attached proof exactly.
    pub fn verify(&self, cfg: &ClassifyConfig) -> Result<()> {
        let gens = if self.d % 2 == 0 { square_generators(self.d, self.n)? } else { Vec::new() };
        for class in &self.classes {
            let target = class.oriented_poly();
            let ok = match (&class.label, &class.evidence) {
                (Label::SquareCone, Evidence::Cone(c)) => c.verify(&target),
                (Label::SignChanging, Evidence::Sign(w)) => w.verify(&class.poly) && w.changes_sign(),
                (Label::SosCertified, Evidence::Sos { certificate, .. }) => certificate.check(&target).is_ok(),
                (Label::CandidateLax, Evidence::None) => {
                    sign_witness_search(&target, cfg.seed).is_none()
                        && class.farkas.len() == 2
                        && class.farkas[0].verify(&class.poly, &gens)
                        && class.farkas[1].verify(&class.poly.scale(&int(-1)), &gens)
                }
                _ => false,
            };
            if !ok {
                return Err(Error::Consistency(format!(
                    "class {} failed re-verification of its {} evidence",
                    class.representative.to_hex(),
                    class.label.as_str()
                )));
            }
            for m in &class.members {
                let p = symmetrized_graph_monomial(&m.graph, self.n)?;
                if p != class.poly.scale(&m.constant) {
                    return Err(Error::Consistency(format!("member {} has the wrong constant", m.key.to_hex())));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            d: self.d,
            n: self.n,
            vanishing: self.vanishing.iter().map(CanonicalKey::to_hex).collect(),
            classes: self.classes.iter().map(EquivalenceClass::to_json).collect(),
        }
    }

    /// Full certificate files keyed by a stable file name.
    pub fn certificate_files(&self) -> Vec<(String, serde_json::Value)> {
        let mut out = Vec::new();
        for c in &self.classes {
            let stem = format!("d{}_{}", self.d, c.representative.to_hex());
            let value = match &c.evidence {
                Evidence::Cone(cert) => serde_json::to_value(ConeResult::Member(cert.clone()).to_json()),
                Evidence::Sos { certificate, .. } => serde_json::to_value(certificate.to_json()),
                Evidence::Sign(w) => serde_json::to_value(w.to_json()),
                Evidence::None => continue,
            };
            out.push((format!("{stem}_{}.json", c.label.as_str().to_lowercase()), value.expect("serializable")));
        }
        out
    }

    /// One line per class: representative, size, label.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("representative,members,label,orientation\n");
        for c in &self.classes {
            s.push_str(&format!(
                "{},{},{},{}\n",
                c.representative.to_hex(),
                c.members.len(),
                c.label.as_str(),
                c.orientation
            ));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MemberJson {
    pub key: String,
    pub graph: GraphJson,
    pub constant: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SosSummaryJson {
    pub n_active: usize,
    pub monomials: usize,
    pub scale: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassJson {
    pub representative: String,
    pub label: Label,
    pub orientation: i8,
    pub polynomial: SymPolyJson,
    pub members: Vec<MemberJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeResultJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignWitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sos: Option<SosSummaryJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub farkas: Vec<ConeResultJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sos_attempts: Vec<usize>,
}

/// Wire format of a classification report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportJson {
    pub d: u32,
    pub n: usize,
    pub vanishing: Vec<String>,
    pub classes: Vec<ClassJson>,
}

impl ReportJson {
    pub fn count(&self, label: Label) -> usize {
        self.classes.iter().filter(|c| c.label == label).count()
    }
}

impl EquivalenceClass {
    pub fn to_json(&self) -> ClassJson {
        let mut j = ClassJson {
            representative: self.representative.to_hex(),
            label: self.label,
            orientation: self.orientation,
            polynomial: self.poly.to_json(),
            members: self
                .members
                .iter()
                .map(|m| MemberJson { key: m.key.to_hex(), graph: m.graph.to_json(), constant: rational::format(&m.constant) })
                .collect(),
            cone: None,
            sign: None,
            sos: None,
            farkas: self.farkas.iter().map(|f| ConeResult::Infeasible(f.clone()).to_json()).collect(),
            sos_attempts: self.sos_attempts.clone(),
        };
        match &self.evidence {
            Evidence::Cone(c) => j.cone = Some(ConeResult::Member(c.clone()).to_json()),
            Evidence::Sign(w) => j.sign = Some(w.to_json()),
            Evidence::Sos { n_active, certificate } => {
                j.sos = Some(SosSummaryJson {
                    n_active: *n_active,
                    monomials: certificate.v.len(),
                    scale: rational::format(&certificate.scale),
                })
            }
            Evidence::None => {}
        }
        j
    }
}

/// Positive `a`, `b` with `target = a·first + b·second`, if they exist.
pub fn positive_combination(target: &SymPoly, first: &SymPoly, second: &SymPoly) -> Result<Option<(Rational, Rational)>> {
    let basis: Vec<Partition> = {
        let mut all: Vec<Partition> =
            target.coeffs().chain(first.coeffs()).chain(second.coeffs()).map(|(p, _)| p.clone()).collect();
        all.sort();
        all.dedup();
        all
    };
    let a = RatMatrix::from_columns(vec![first.coordinates(&basis), second.coordinates(&basis)])?;
    let Some(x) = a.solve(&target.coordinates(&basis))? else { return Ok(None) };
    if !(x[0].is_positive() && x[1].is_positive()) {
        return Ok(None);
    }
    let recomposed = first.scale(&x[0]).add(&second.scale(&x[1]))?;
    if recomposed != *target {
        return Ok(None);
    }
    Ok(Some((x[0].clone(), x[1].clone())))
}

/// Searches the square generators for one that, together with `base`,
/// positively spans `target`.
pub fn positive_combination_with_square(
    target: &SymPoly,
    base: &SymPoly,
    gens: &[ConeGenerator],
) -> Result<Option<(CanonicalKey, Rational, Rational)>> {
    for g in gens {
        if let Some((a, b)) = positive_combination(target, base, &g.poly)? {
            return Ok(Some((g.key.clone(), a, b)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equivalence_examples() {
        let g = Multigraph::new(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(equivalence(&g, &g, 4).unwrap(), Some(int(1)));
        let r = g.reverse_one(0, 1).unwrap();
        assert_eq!(equivalence(&g, &r, 4).unwrap(), Some(int(-1)));
        let double = Multigraph::new(2, [(0, 1, 2)]).unwrap();
        let star = Multigraph::new(3, [(0, 1, 1), (0, 2, 1)]).unwrap();
        let c = equivalence(&double, &star, 4).unwrap().unwrap();
        assert_eq!(c.abs(), int(2));
        let single = Multigraph::new(2, [(0, 1, 1)]).unwrap();
        assert!(matches!(equivalence(&single, &g, 4), Err(Error::Vanishing)));
    }

    #[test]
    fn degree_two_smoke() {
        let cfg = ClassifyConfig::default();
        let r = classify_report(2, &cfg).unwrap();
        assert_eq!(r.vanishing.len() + r.member_count(), 3);
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].label, Label::SquareCone);
        r.verify(&cfg).unwrap();
    }

    #[test]
    fn positive_combination_solves_exactly() {
        let sq = symmetrized_graph_monomial(&Multigraph::new(3, [(0, 1, 2), (1, 2, 2)]).unwrap(), 4).unwrap();
        let sq2 = symmetrized_graph_monomial(&Multigraph::new(4, [(0, 1, 2), (2, 3, 2)]).unwrap(), 4).unwrap();
        let t = sq.scale(&int(3)).add(&sq2.scale(&int(2))).unwrap();
        assert_eq!(positive_combination(&t, &sq, &sq2).unwrap(), Some((int(3), int(2))));
        assert_eq!(positive_combination(&t.scale(&int(-1)), &sq, &sq2).unwrap(), None);
    }
}
