use proptest::prelude::*;

use symgraph::graphs::{canonical_form, CanonicalKey};
use symgraph::linopt::{cone_membership_with, square_generators, ConeResult};
use symgraph::polyalg::{symmetrize_poly, to_elementary, Poly, SymPoly};
use symgraph::positivity::{find_sos, psd_check, quadratic_form, verify_sos, PsdResult, SosSearchConfig};
use symgraph::rational::int;
use symgraph::symgm::symmetrized_graph_monomial;
use symgraph::{linopt::RatMatrix, Multigraph, Rational};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_symmetrize(p: &Poly, n: usize) -> Poly {
    let q = p.extend_vars(n);
    permutations(n).iter().fold(Poly::zero(n), |acc, s| &acc + &q.permute_vars(s))
}

/// Homogeneous polynomial with small integer coefficients in `vars` variables.
fn homogeneous_poly(vars: usize, degree: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=degree, vars), -3i64..=3), 1..5).prop_map(move |terms| {
        let mut p = Poly::zero(vars);
        for (mut e, c) in terms {
            // push the excess or deficit onto the last variable to keep the degree fixed
            let s: u32 = e.iter().sum();
            if s > degree {
                let mut over = s - degree;
                for x in e.iter_mut() {
                    let t = over.min(*x);
                    *x -= t;
                    over -= t;
                }
            } else {
                *e.last_mut().unwrap() += degree - s;
            }
            p.add_term(e, int(c));
        }
        p
    })
}

/// Random loopless multigraph with `d` edges on `v` vertices.
fn multigraph(d: usize, v: usize) -> impl Strategy<Value = Multigraph> {
    prop::collection::vec((0..v, 1..v), d).prop_map(move |pairs| {
        let mut counts = std::collections::BTreeMap::new();
        for (i, off) in pairs {
            let j = (i + off) % v;
            *counts.entry((i, j)).or_insert(0u32) += 1;
        }
        Multigraph::new(v, counts.into_iter().map(|((i, j), m)| (i, j, m))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetrize_matches_brute_force(p in homogeneous_poly(3, 3), n in 3usize..=4) {
        let s = symmetrize_poly(&p, n).unwrap();
        prop_assert_eq!(s.expand(), brute_symmetrize(&p, n));
    }

    #[test]
    fn coefficient_ignores_exponent_order(p in homogeneous_poly(3, 4), perm in Just(vec![2usize, 0, 1, 3])) {
        let s = symmetrize_poly(&p, 4).unwrap();
        for (lambda, c) in s.coeffs() {
            let mut alpha = lambda.parts().to_vec();
            alpha.resize(4, 0);
            let shuffled: Vec<u32> = perm.iter().map(|&i| alpha[i]).collect();
            prop_assert_eq!(s.coeff_of(&shuffled).unwrap(), c.clone());
        }
    }

    #[test]
    fn elementary_round_trip(p in homogeneous_poly(2, 4), n in 2usize..=4) {
        let s = symmetrize_poly(&p, n).unwrap();
        let back = to_elementary(&s).to_sympoly().unwrap();
        // the zero form carries no degree through the elementary basis
        if s.is_zero() {
            prop_assert!(back.is_zero());
        } else {
            prop_assert_eq!(back, s);
        }
    }

    #[test]
    fn lift_matches_symmetrization(g in multigraph(3, 4), extra in 0usize..=2) {
        let m = 4;
        let small = symmetrized_graph_monomial(&g, m).unwrap();
        let big = symmetrized_graph_monomial(&g, m + extra).unwrap();
        prop_assert_eq!(small.lift(m + extra).unwrap(), big.clone());
        prop_assert!(big.is_translation_invariant());
    }

    #[test]
    fn reversing_edges_changes_sign_by_parity(g in multigraph(4, 5)) {
        let (i, j, m) = g.edges().next().unwrap();
        let s = symmetrized_graph_monomial(&g, 6).unwrap();
        let one = g.reverse_one(i, j).unwrap();
        prop_assert_eq!(symmetrized_graph_monomial(&one, 6).unwrap(), s.scale(&int(-1)));
        let mut all = g.clone();
        for _ in 0..m {
            all = all.reverse_one(i, j).unwrap();
        }
        let sign = if m % 2 == 1 { int(-1) } else { int(1) };
        prop_assert_eq!(symmetrized_graph_monomial(&all, 6).unwrap(), s.scale(&sign));
    }

    #[test]
    fn canonical_key_is_a_complete_invariant(g in multigraph(5, 5), shift in 1usize..5) {
        let perm: Vec<usize> = (0..5).map(|i| (i + shift) % 5).collect();
        let h = g.relabel(&perm).unwrap();
        let k = canonical_form(&g);
        prop_assert_eq!(canonical_form(&h), k.clone());
        let back = CanonicalKey::from_hex(&k.to_hex()).unwrap().to_graph().unwrap();
        prop_assert_eq!(canonical_form(&back), k);
    }

    #[test]
    fn nonnegative_square_combinations_are_members(w in prop::collection::vec(0i64..4, 8)) {
        let gens = square_generators(4, 5).unwrap();
        let mut t = SymPoly::zero(5, 4);
        for (g, c) in gens.iter().zip(&w) {
            t = t.add(&g.poly.scale(&int(*c))).unwrap();
        }
        match cone_membership_with(&t, &gens).unwrap() {
            ConeResult::Member(c) => prop_assert!(c.verify(&t)),
            ConeResult::Infeasible(_) => prop_assert!(false, "nonnegative combination refuted"),
        }
        if !t.is_zero() {
            let neg = t.scale(&int(-1));
            match cone_membership_with(&neg, &gens).unwrap() {
                ConeResult::Infeasible(f) => prop_assert!(f.verify(&neg, &gens)),
                ConeResult::Member(_) => prop_assert!(false, "negated target accepted"),
            }
        }
    }

    #[test]
    fn gram_products_are_psd(b in prop::collection::vec(-3i64..=3, 12), shift in 1i64..20) {
        let bm = RatMatrix::from_rows((0..4).map(|i| (0..3).map(|j| int(b[3 * i + j])).collect()).collect()).unwrap();
        let q = bm.mul(&bm.transpose()).unwrap();
        prop_assert!(psd_check(&q).unwrap().is_psd());
        let mut bad = q.clone();
        bad[(0, 0)] = &q[(0, 0)] - int(shift);
        let diag_neg = q[(0, 0)] < int(shift);
        if let PsdResult::NotPsd { w, value } = psd_check(&bad).unwrap() {
            prop_assert!(value < Rational::from_integer(0.into()));
            prop_assert_eq!(quadratic_form(&bad, &w), value);
        } else {
            prop_assert!(!diag_neg);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn sums_of_squared_differences_are_certified(a in prop::collection::vec(-2i64..=2, 2)) {
        // (a_0 x_0 + a_1 x_1 - (a_0 + a_1) x_2)^2, symmetrized
        let l = &(&Poly::var(3, 0).scale(&int(a[0])) + &Poly::var(3, 1).scale(&int(a[1])))
            - &Poly::var(3, 2).scale(&int(a[0] + a[1]));
        let t = symmetrize_poly(&l.pow(2), 4).unwrap();
        prop_assume!(!t.is_zero());
        let cert = find_sos(&t, 3, &SosSearchConfig::default()).unwrap();
        let cert = cert.certificate().cloned();
        prop_assert!(cert.is_some());
        prop_assert!(verify_sos(&t, &cert.unwrap()));
    }
}
