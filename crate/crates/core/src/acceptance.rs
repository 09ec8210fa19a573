//! End-to-end acceptance checks, one outcome per criterion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bases::{
    change_of_basis_matrix, normalized_coeff, partition_graph, square_graph, two_partitions_ordered, TwoPartition,
};
use crate::classify::{classify_report, positive_combination_with_square, ClassificationReport, ClassifyConfig, Label};
use crate::discriminant::{disc_nk, sum_of_squared_differences, vandermonde_squared};
use crate::error::Result;
use crate::graphs::{enumerate_multigraphs, Multigraph};
use crate::linopt::{cone_membership_with, square_generators, ConeGenerator, ConeResult, RatMatrix};
use crate::polyalg::{partitions, Partition, SymPoly};
use crate::rational::{self, factorial, int, ratio, Rational};
use crate::symgm::{coeff_by_coloring, symmetrized_graph_monomial};

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub summary: String,
    pub details: Vec<String>,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] criterion {:>2}: {}: {}", self.id, self.title, self.summary)?;
        for d in &self.details {
            write!(f, "\n         {d}")?;
        }
        Ok(())
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "enumeration counts"),
    (2, "four-edge classification"),
    (3, "six-edge classification"),
    (4, "discriminant anchors"),
    (5, "second-derivative-gap discriminants"),
    (6, "discriminants in the square cone"),
    (7, "coefficient formulas"),
    (8, "basis structure"),
    (9, "coloring oracle"),
    (10, "extension property"),
];

/// Runs criteria, sharing classification reports between them.
pub struct Runner {
    cfg: ClassifyConfig,
    reports: BTreeMap<u32, (ClassificationReport, Duration)>,
}

impl Runner {
    pub fn new(cfg: ClassifyConfig) -> Self {
        Runner { cfg, reports: BTreeMap::new() }
    }

    fn report(&mut self, d: u32) -> Result<&(ClassificationReport, Duration)> {
        if !self.reports.contains_key(&d) {
            let t = Instant::now();
            let r = classify_report(d, &self.cfg)?;
            self.reports.insert(d, (r, t.elapsed()));
        }
        Ok(&self.reports[&d])
    }

    pub fn run(&mut self, id: u8) -> Result<CriterionOutcome> {
        let title = CRITERIA
            .iter()
            .find(|(i, _)| *i == id)
            .map(|(_, t)| *t)
            .ok_or_else(|| crate::error::Error::Parse(format!("unknown criterion {id}")))?;
        let t = Instant::now();
        let (passed, summary, details) = match id {
            1 => enumeration(),
            2 => self.four_edges()?,
            3 => self.six_edges()?,
            4 => discriminant_anchors()?,
            5 => gap_two_constants()?,
            6 => discriminant_cone()?,
            7 => coefficient_formulas()?,
            8 => basis_structure()?,
            9 => coloring_oracle(self.cfg.seed)?,
            _ => extension(self.cfg.seed)?,
        };
        Ok(CriterionOutcome { id, title, passed, summary, details, elapsed: t.elapsed() })
    }

    pub fn run_all(&mut self) -> Result<Vec<CriterionOutcome>> {
        CRITERIA.iter().map(|(id, _)| self.run(*id)).collect()
    }

    fn four_edges(&mut self) -> Result<(bool, String, Vec<String>)> {
        let cfg = self.cfg.clone();
        let (r, elapsed) = self.report(4)?;
        let mut details = Vec::new();
        let verified = r.verify(&cfg);
        if let Err(e) = &verified {
            details.push(format!("re-verification failed: {e}"));
        }
        details.push(label_line(r));
        let lax: Vec<_> = r.classes.iter().filter(|c| c.label == Label::CandidateLax).collect();
        let gens = square_generators(4, r.n)?;
        let has_square = |c: &crate::classify::EquivalenceClass| c.members.iter().any(|m| m.graph.is_square());
        let star = star_graph(4);
        let star_class = r.classes.iter().find(|c| c.members.iter().any(|m| m.key == crate::graphs::canonical_form(&star)));
        if let Some(sc) = star_class {
            details.push(format!(
                "class of the 4-leaf out-star {}: {}{}",
                sc.representative.to_hex(),
                sc.label.as_str(),
                match &sc.evidence {
                    crate::classify::Evidence::Sos { n_active, certificate } =>
                        format!(" (exact certificate in {n_active} variables, {} monomials)", certificate.v.len()),
                    _ => String::new(),
                }
            ));
        }
        // the base polynomial for the combination check: the candidate class
        // when there is exactly one, otherwise the out-star's class
        let base = if lax.len() == 1 { Some(lax[0]) } else { star_class };
        let mut combo_ok = false;
        if let Some(base) = base {
            let thirds: Vec<_> =
                r.classes.iter().filter(|c| c.representative != base.representative && !has_square(c)).collect();
            for c in &thirds {
                match positive_combination_with_square(&c.oriented_poly(), &base.oriented_poly(), &gens)? {
                    Some((key, a, b)) => {
                        combo_ok = true;
                        details.push(format!(
                            "class {} = {}·[{}] + {}·h̃[{}]",
                            c.representative.to_hex(),
                            rational::format(&a),
                            base.representative.to_hex(),
                            rational::format(&b),
                            key.to_hex()
                        ));
                    }
                    None => details.push(format!(
                        "class {} is not a positive combination of [{}] and one square graph",
                        c.representative.to_hex(),
                        base.representative.to_hex()
                    )),
                }
            }
            if thirds.len() != 1 {
                combo_ok = false;
            }
        }
        let within = *elapsed < Duration::from_secs(600);
        let passed = verified.is_ok()
            && r.vanishing.len() == 10
            && r.classes.len() == 4
            && r.member_count() == 13
            && lax.len() == 1
            && combo_ok
            && within;
        let summary = format!(
            "{} vanishing, {} classes over {} graphs, {} CANDIDATE_LAX (expected 10, 4, 13, 1); combination check {}; runtime under 10 min: {}",
            r.vanishing.len(),
            r.classes.len(),
            r.member_count(),
            lax.len(),
            if combo_ok && lax.len() == 1 { "holds" } else if combo_ok { "holds for the out-star class only" } else { "fails" },
            yes_no(within)
        );
        Ok((passed, summary, details))
    }

    fn six_edges(&mut self) -> Result<(bool, String, Vec<String>)> {
        let cfg = self.cfg.clone();
        let (r, elapsed) = self.report(6)?;
        let mut details = Vec::new();
        let verified = r.verify(&cfg);
        if let Err(e) = &verified {
            details.push(format!("re-verification failed: {e}"));
        }
        details.push(label_line(r));
        for c in r.classes.iter().filter(|c| matches!(c.label, Label::SosCertified | Label::CandidateLax)) {
            details.push(format!("{} {} (SOS tiers tried: {:?})", c.representative.to_hex(), c.label.as_str(), c.sos_attempts));
        }
        let within = *elapsed < Duration::from_secs(4 * 3600);
        let counts = [
            r.count(Label::SquareCone),
            r.count(Label::SignChanging),
            r.count(Label::SosCertified),
            r.count(Label::CandidateLax),
        ];
        let passed = verified.is_ok()
            && r.vanishing.len() == 102
            && r.classes.len() == 27
            && counts == [12, 7, 5, 3]
            && within;
        let summary = format!(
            "{} vanishing, {} classes; SQUARE_CONE/SIGN_CHANGING/SOS_CERTIFIED/CANDIDATE_LAX = {}/{}/{}/{} (expected 102, 27; 12/7/5/3); certificates re-verified: {}; runtime under 4 h: {}",
            r.vanishing.len(),
            r.classes.len(),
            counts[0],
            counts[1],
            counts[2],
            counts[3],
            yes_no(verified.is_ok()),
            yes_no(within)
        );
        Ok((passed, summary, details))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn label_line(r: &ClassificationReport) -> String {
    let mut line = String::from("labels:");
    for c in &r.classes {
        line.push_str(&format!(" {}={}", c.representative.to_hex(), c.label.as_str()));
    }
    line
}

/// Out-directed star with `leaves` leaves.
pub fn star_graph(leaves: usize) -> Multigraph {
    Multigraph::new(leaves + 1, (1..=leaves).map(|i| (0, i, 1))).expect("star is valid")
}

fn enumeration() -> (bool, String, Vec<String>) {
    let t = Instant::now();
    let a = enumerate_multigraphs(4).len();
    let b = enumerate_multigraphs(6).len();
    let within = t.elapsed() < Duration::from_secs(60);
    (
        a == 23 && b == 212 && within,
        format!("{a} graphs with 4 edges, {b} with 6 (expected 23, 212); runtime under 1 min: {}", yes_no(within)),
        Vec::new(),
    )
}

fn complete_doubled(n: usize) -> Multigraph {
    Multigraph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 2)))).expect("complete graph is valid")
}

fn discriminant_anchors() -> Result<(bool, String, Vec<String>)> {
    let mut ok = true;
    let mut details = Vec::new();
    for n in 2..=5 {
        let d = disc_nk(n, 0)?;
        let vdm = d == vandermonde_squared(n)?;
        let g = symmetrized_graph_monomial(&complete_doubled(n), n)?;
        let prop = g == d.scale(&Rational::from_integer(factorial(n)));
        ok &= vdm && prop;
        details.push(format!("n = {n}: D = Vandermonde²: {}, doubled K_n = n!·D: {}", yes_no(vdm), yes_no(prop)));
    }
    Ok((ok, "D_{n,0} for n = 2..5".into(), details))
}

fn gap_two_constants() -> Result<(bool, String, Vec<String>)> {
    let mut ok = true;
    let mut agree_all = true;
    let mut details = Vec::new();
    for k in 0..=3usize {
        let d = disc_nk(k + 2, k)?;
        let c = d.proportionality(&sum_of_squared_differences(k + 2));
        let stated = Rational::from_integer(factorial(k + 1)) / int(2);
        match c {
            Some(c) if c.is_positive() => {
                let agree = c == stated;
                agree_all &= agree;
                details.push(format!(
                    "k = {k}: c_k = {} ((k+1)!·k! = {}), stated (k+1)!/2 = {}: {}",
                    rational::format(&c),
                    factorial(k + 1) * factorial(k),
                    rational::format(&stated),
                    if agree { "agree" } else { "DISAGREE" }
                ));
            }
            _ => {
                ok = false;
                details.push(format!("k = {k}: not a positive multiple of Σ(x_i - x_j)²"));
            }
        }
    }
    let summary = format!(
        "D_(k+2,k) = c_k·Σ_(i<j)(x_i - x_j)² exactly for k = 0..3: {}; stated constant {}",
        yes_no(ok),
        if agree_all { "agrees" } else { "disagrees (flagged)" }
    );
    Ok((ok, summary, details))
}

fn discriminant_cone() -> Result<(bool, String, Vec<String>)> {
    let cases = [(5usize, 1usize), (6, 2), (4, 1), (5, 2), (6, 3)];
    let mut ok = true;
    let mut details = Vec::new();
    for (n, k) in cases {
        let d = disc_nk(n, k)?;
        let gens = square_generators(d.degree(), n)?;
        match cone_membership_with(&d, &gens)? {
            ConeResult::Member(c) => {
                let v = c.verify(&d);
                ok &= v;
                details.push(format!(
                    "D_({n},{k}) at n = {n}: member, {} square graphs, re-verified: {}",
                    c.terms.len(),
                    yes_no(v)
                ));
            }
            ConeResult::Infeasible(_) => {
                ok = false;
                details.push(format!("D_({n},{k}) at n = {n}: not in the cone (Farkas certificate)"));
            }
        }
    }
    let d51 = disc_nk(5, 1)?;
    let gens = square_generators(d51.degree(), 5)?;
    let stretch = three_term_weights(&d51, &gens, &[ratio(19, 6), int(14), int(2)]);
    details.push(match stretch {
        Some((a, b, c)) => format!(
            "stretch: D_(5,1) = 19/6·h̃[{}] + 14·h̃[{}] + 2·h̃[{}]",
            gens[a].key.to_hex(),
            gens[b].key.to_hex(),
            gens[c].key.to_hex()
        ),
        None => format!("stretch: no three square graphs carry the weights {{19/6, 14, 2}} ({} generators searched)", gens.len()),
    });
    Ok((ok, "D_(5,1), D_(6,2), D_(k+3,k) for k = 1..3 in the square cone".into(), details))
}

/// Generators `a, b, c` with `target = w0·a + w1·b + w2·c`.
fn three_term_weights(target: &SymPoly, gens: &[ConeGenerator], w: &[Rational; 3]) -> Option<(usize, usize, usize)> {
    let basis: Vec<Partition> = partitions(target.degree(), target.n_vars());
    let coords: Vec<Vec<Rational>> = gens.iter().map(|g| g.poly.coordinates(&basis)).collect();
    let mut lookup: HashMap<Vec<Rational>, usize> = HashMap::new();
    for (i, c) in coords.iter().enumerate() {
        lookup.entry(c.iter().map(|x| x * &w[2]).collect()).or_insert(i);
    }
    let t = target.coordinates(&basis);
    for (a, ca) in coords.iter().enumerate() {
        for (b, cb) in coords.iter().enumerate() {
            if a == b {
                continue;
            }
            let rest: Vec<Rational> = t.iter().zip(ca).zip(cb).map(|((x, y), z)| x - y * &w[0] - z * &w[1]).collect();
            if let Some(&c) = lookup.get(&rest) {
                if c != a && c != b {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Closed-form square-graph coefficient as stated, taken verbatim.
fn stated_square_coefficient(alpha: &TwoPartition) -> Rational {
    let sign = if (alpha.odd_count() / 2) % 2 == 1 { -1 } else { 1 };
    Rational::from_integer(BigInt::from(sign) * (BigInt::one() << alpha.twos()) * alpha.partition().repetition_factor())
}

fn coefficient_formulas() -> Result<(bool, String, Vec<String>)> {
    let mut ok = true;
    let mut details = Vec::new();
    for d in [4u32, 6] {
        let n = 2 * d as usize;
        let order = two_partitions_ordered(d);
        for a in &order {
            let b = symmetrized_graph_monomial(&partition_graph(a), n)?;
            for beta in &order {
                let want = if a == beta { Rational::from_integer(a.partition().repetition_factor()) } else { Rational::zero() };
                let got = normalized_coeff(&b, beta.partition());
                if got != want {
                    ok = false;
                    details.push(format!("b[{a}] at {beta}: {} instead of {}", rational::format(&got), rational::format(&want)));
                }
            }
            let h = symmetrized_graph_monomial(&square_graph(a)?, n)?;
            let got = normalized_coeff(&h, a.partition());
            let want = stated_square_coefficient(a);
            if got != want {
                ok = false;
                details.push(format!(
                    "h[{a}] at {a}: {} instead of stated {} (exact count gives (-2)^(#odd/2)·2^(#2s)·∏mult!)",
                    rational::format(&got),
                    rational::format(&want)
                ));
            }
        }
    }
    let summary = if ok {
        "partition-graph and square-graph coefficients match for d = 4, 6".into()
    } else {
        "mismatches against the stated formulas".into()
    };
    Ok((ok, summary, details))
}

fn basis_structure() -> Result<(bool, String, Vec<String>)> {
    let mut ok = true;
    let mut details = Vec::new();
    for d in [4u32, 5, 6] {
        let n = 2 * d as usize;
        let basis = partitions(d, n);
        let rows: Vec<Vec<Rational>> = enumerate_multigraphs(d)
            .par_iter()
            .map(|g| symmetrized_graph_monomial(g, n).map(|p| p.coordinates(&basis)))
            .collect::<Result<_>>()?;
        let rank = RatMatrix::from_rows(rows)?.rank();
        let want = two_partitions_ordered(d).len();
        ok &= rank == want;
        details.push(format!("d = {d}: rank {rank}, 2-partitions {want}"));
    }
    for d in [2u32, 4, 6] {
        match change_of_basis_matrix(d, 2 * d as usize) {
            Ok(m) => {
                let tri = m.vanishes_below_order();
                let inv = m.matrix.mul(&m.inverse)? == RatMatrix::identity(m.order.len());
                ok &= tri && inv;
                details.push(format!("d = {d}: triangular under ≺: {}, invertible: {}", yes_no(tri), yes_no(inv)));
            }
            Err(e) => {
                ok = false;
                details.push(format!("d = {d}: {e}"));
            }
        }
    }
    Ok((ok, "span ranks for d = 4, 5, 6 and change of basis for d = 2, 4, 6".into(), details))
}

/// Uniform random multigraph with `d` edges on `2d` vertices.
fn random_graph(d: u32, rng: &mut ChaCha8Rng) -> Multigraph {
    let n = 2 * d as usize;
    let mut mult: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for _ in 0..d {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        *mult.entry((i, j)).or_default() += 1;
    }
    Multigraph::new(n, mult.into_iter().map(|((i, j), m)| (i, j, m))).expect("valid multigraph")
}

fn coloring_oracle(seed: u64) -> Result<(bool, String, Vec<String>)> {
    let mut graphs: Vec<(u32, Multigraph)> = enumerate_multigraphs(4).into_iter().map(|g| (4, g)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    graphs.extend((0..20).map(|_| (6, random_graph(6, &mut rng))));
    let mismatches: Vec<String> = graphs
        .par_iter()
        .map(|(d, g)| {
            let n = 2 * *d as usize;
            let s = symmetrized_graph_monomial(g, n)?;
            let mut bad = Vec::new();
            for alpha in partitions(*d, n) {
                let c = coeff_by_coloring(g, &alpha, n)?;
                if c != s.coeff(&alpha) {
                    bad.push(format!("{g} at {alpha}: coloring {} vs expansion {}", c, s.coeff(&alpha)));
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let checked = graphs.len();
    Ok((
        mismatches.is_empty(),
        format!("{checked} graphs (23 with 4 edges, 20 seeded random with 6), all partitions: {} mismatches", mismatches.len()),
        mismatches,
    ))
}

/// Kernel vectors of the graphs' coefficient matrix at `n` variables.
fn kernel(graphs: &[Multigraph], d: u32, n: usize) -> Result<Vec<Vec<Rational>>> {
    let basis = partitions(d, n);
    let cols: Vec<Vec<Rational>> = graphs
        .par_iter()
        .map(|g| symmetrized_graph_monomial(g, n).map(|p| p.coordinates(&basis)))
        .collect::<Result<_>>()?;
    Ok(RatMatrix::from_columns(cols)?.nullspace())
}

fn combination(graphs: &[Multigraph], weights: &[Rational], d: u32, n: usize) -> Result<SymPoly> {
    let parts: Vec<SymPoly> = graphs
        .par_iter()
        .zip(weights)
        .filter(|(_, w)| !w.is_zero())
        .map(|(g, w)| symmetrized_graph_monomial(g, n).map(|p| p.scale(w)))
        .collect::<Result<_>>()?;
    parts.iter().try_fold(SymPoly::zero(n, d), |acc, p| acc.add(p))
}

fn extension(seed: u64) -> Result<(bool, String, Vec<String>)> {
    let mut ok = true;
    let mut details = Vec::new();
    let g4 = enumerate_multigraphs(4);
    let k4 = kernel(&g4, 4, 8)?;
    let vanishing = g4.iter().filter(|g| symmetrized_graph_monomial(g, 8).is_ok_and(|p| p.is_zero())).count();
    let mut still = 0;
    for v in &k4 {
        let z9 = combination(&g4, v, 4, 9)?.is_zero();
        let z10 = combination(&g4, v, 4, 10)?.is_zero();
        still += (z9 && z10) as usize;
    }
    ok &= still == k4.len() && vanishing == 10;
    details.push(format!(
        "d = 4: {vanishing} vanishing graphs; kernel of dimension {} at n = 8, {still} basis vectors still vanish at n = 9 and 10",
        k4.len()
    ));
    let g6 = enumerate_multigraphs(6);
    let k6 = kernel(&g6, 6, 12)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut still = 0;
    for _ in 0..5 {
        let mut w = vec![Rational::zero(); g6.len()];
        for v in &k6 {
            let c = int(rng.gen_range(-3..=3));
            if c.is_zero() {
                continue;
            }
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi += vi * &c;
            }
        }
        let at12 = combination(&g6, &w, 6, 12)?.is_zero();
        let z13 = combination(&g6, &w, 6, 13)?.is_zero();
        let z14 = combination(&g6, &w, 6, 14)?.is_zero();
        still += (at12 && z13 && z14) as usize;
    }
    ok &= still == 5;
    details.push(format!(
        "d = 6: kernel of dimension {} at n = 12; {still} of 5 random combinations still vanish at n = 13 and 14",
        k6.len()
    ));
    Ok((ok, "vanishing relations persist when more variables are added".into(), details))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_formula_differs_only_on_glued_components() {
        for d in [4u32, 6] {
            for a in two_partitions_ordered(d) {
                let agree = stated_square_coefficient(&a) == a.diagonal_factor() * Rational::from_integer(a.partition().repetition_factor());
                assert_eq!(agree, a.odd_count() == 0, "{a}");
            }
        }
    }

    #[test]
    fn random_graphs_have_d_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            assert_eq!(random_graph(6, &mut rng).edge_count(), 6);
        }
    }

    #[test]
    fn cheap_criteria_pass() {
        let mut r = Runner::new(ClassifyConfig::default());
        for id in [1, 4, 5] {
            assert!(r.run(id).unwrap().passed, "criterion {id}");
        }
    }
}
