use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::polyalg::SymPoly;
use crate::rational::{self, Rational};

/// Exact evaluation showing a polynomial takes a negative value, and a
/// positive one when the battery found it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignWitness {
    pub negative: (Vec<i64>, Rational),
    pub positive: Option<(Vec<i64>, Rational)>,
}

impl SignWitness {
    pub fn changes_sign(&self) -> bool {
        self.positive.is_some()
    }

    /// Re-evaluates every recorded point.
    pub fn verify(&self, target: &SymPoly) -> bool {
        let (a, va) = &self.negative;
        let ok_neg = a.len() == target.n_vars() && va.is_negative() && target.eval_integer(a) == *va;
        let ok_pos = self
            .positive
            .as_ref()
            .is_none_or(|(b, vb)| b.len() == target.n_vars() && vb.is_positive() && target.eval_integer(b) == *vb);
        ok_neg && ok_pos
    }

    pub fn to_json(&self) -> SignWitnessJson {
        SignWitnessJson {
            negative_point: self.negative.0.clone(),
            negative_value: rational::format(&self.negative.1),
            positive_point: self.positive.as_ref().map(|p| p.0.clone()),
            positive_value: self.positive.as_ref().map(|p| rational::format(&p.1)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SignWitnessJson {
    pub negative_point: Vec<i64>,
    pub negative_value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive_point: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive_value: Option<String>,
}

/// Size of the seeded random part of the battery.
pub const RANDOM_POINTS: usize = 400;

/// The deterministic point battery: every sorted `n`-tuple over
/// `{-2, ..., 2}` (coordinate collapses; order is irrelevant for symmetric
/// targets), then seeded random integer points. Homogeneity makes integer
/// points as good as rational ones for sign questions.
pub fn battery(n: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut pts = Vec::new();
    let mut cur = vec![-2i64; n];
    loop {
        pts.push(cur.clone());
        // next weakly increasing tuple
        let Some(i) = (0..n).rev().find(|&i| cur[i] < 2) else { break };
        let v = cur[i] + 1;
        for x in cur.iter_mut().skip(i) {
            *x = v;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_POINTS {
        let range = if rng.gen_bool(0.5) { 3 } else { 9 };
        pts.push((0..n).map(|_| rng.gen_range(-range..=range)).collect());
    }
    pts
}

/// Scans the battery and returns the first negative point together with the
/// first positive point; `None` means no negative value was found, which is
/// not a proof of nonnegativity.
pub fn sign_witness_search(target: &SymPoly, seed: u64) -> Option<SignWitness> {
    if target.is_zero() {
        return None;
    }
    let pts = battery(target.n_vars(), seed);
    let vals: Vec<Rational> = pts.par_iter().map(|p| target.eval_integer(p)).collect();
    let neg = vals.iter().position(Signed::is_negative)?;
    let pos = vals.iter().position(Signed::is_positive);
    Some(SignWitness {
        negative: (pts[neg].clone(), vals[neg].clone()),
        positive: pos.map(|i| (pts[i].clone(), vals[i].clone())),
    })
}

/// Smallest value found on the battery (for diagnostics).
pub fn battery_minimum(target: &SymPoly, seed: u64) -> Rational {
    let pts = battery(target.n_vars(), seed);
    pts.par_iter().map(|p| target.eval_integer(p)).min().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{symmetrize_poly, Poly};
    use crate::rational::int;

    #[test]
    fn battery_shape() {
        let b = battery(3, 0);
        assert_eq!(b.len(), 35 + RANDOM_POINTS);
        assert_eq!(battery(12, 0).len(), 1820 + RANDOM_POINTS);
        assert_eq!(battery(3, 5), battery(3, 5));
    }

    #[test]
    fn path_changes_sign() {
        let path = &(&Poly::var(3, 0) - &Poly::var(3, 1)) * &(&Poly::var(3, 1) - &Poly::var(3, 2));
        let s = symmetrize_poly(&path, 3).unwrap();
        assert_eq!(s.eval_integer(&[2, 1, 0]), int(-6));
        let w = sign_witness_search(&s, 0).unwrap();
        assert!(w.verify(&s));
        assert!(w.negative.1 < int(0));
        assert!(!w.changes_sign(), "minus a sum of squares never turns positive");
    }

    #[test]
    fn nonnegative_targets() {
        let sq = (&Poly::var(2, 0) - &Poly::var(2, 1)).pow(2);
        assert!(sign_witness_search(&symmetrize_poly(&sq, 3).unwrap(), 0).is_none());
        assert!(sign_witness_search(&SymPoly::zero(3, 2), 0).is_none());
    }
}
