use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symvar::corr::{compose, enumerate_good, factor, pullback_square, CompMap, Correspondence};
use symvar::equations::h_tableau;
use symvar::partitions::{
    canonicalize, good_filling_exists, leq, min_excluded, mu_minus, mu_s, partitions_in_box,
    preceq, ExtNat, GenComposition, GenPartition, Tableau,
};
use symvar::poly::{
    discriminant, orbit_evaluations, parse_poly, q, quotient_dimension, vanishing_ideal, Perm,
    ProductPoly, SparsePoly, Var, Q,
};
use symvar::sample::{self, MapKind};
use symvar::variety::{
    act_point, apply_corr, contains, end_closure, gamma_at, theta_member, type_of, width_at_most,
    FinitaryPoint, PointSetVariety,
};

fn ext() -> impl Strategy<Value = ExtNat> {
    prop_oneof![3 => (1u64..4).prop_map(ExtNat::Fin), 1 => Just(ExtNat::Inf)]
}

fn partition(max_len: usize) -> impl Strategy<Value = GenPartition> {
    prop::collection::vec(ext(), 0..=max_len).prop_map(GenPartition::new)
}

fn inf_partition(max_len: usize) -> impl Strategy<Value = GenPartition> {
    prop::collection::vec(ext(), 0..max_len).prop_map(|mut v| {
        v.push(ExtNat::Inf);
        GenPartition::new(v)
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_values() -> Vec<Q> {
    (0..4).map(q).collect()
}

fn poly() -> impl Strategy<Value = SparsePoly> {
    let term = (-3i64..4, prop::collection::vec((1u32..4, 0u32..3), 0..3));
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        let mut p = SparsePoly::zero();
        for (c, vars) in terms {
            let mut m = SparsePoly::constant(q(c));
            for (v, e) in vars {
                m = &m * &SparsePoly::xi(v).pow(e);
            }
            p = &p + &m;
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent(v in prop::collection::vec(prop_oneof![Just(ExtNat::ZERO), ext()], 0..6)) {
        let p = canonicalize(v.clone());
        prop_assert_eq!(canonicalize(p.parts().iter().copied()), p.clone());
        prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(!p.parts().contains(&ExtNat::ZERO));
    }

    #[test]
    fn partition_text_roundtrip(p in partition(5)) {
        prop_assert_eq!(p.to_string().parse::<GenPartition>().unwrap(), p);
    }

    #[test]
    fn leq_implies_preceq(a in partition(4), b in partition(4)) {
        if leq(&a, &b) {
            prop_assert!(preceq(&a, &b));
        }
    }

    #[test]
    fn preceq_matches_fillings(a in partition(4), b in partition(4)) {
        prop_assert_eq!(preceq(&a, &b), good_filling_exists(&a, &b));
    }

    #[test]
    fn preceq_is_a_preorder(a in partition(3), b in partition(3), c in partition(3)) {
        prop_assert!(preceq(&a, &a));
        if preceq(&a, &b) && preceq(&b, &c) {
            prop_assert!(preceq(&a, &c));
        }
    }

    #[test]
    fn min_excluded_is_the_minimal_antichain(lam in inf_partition(3)) {
        let m = min_excluded(&lam).unwrap();
        for a in &m {
            prop_assert!(!preceq(a, &lam));
            for b in &m {
                prop_assert!(a == b || !preceq(a, b));
            }
        }
        // Every excluded partition in a larger box dominates a member.
        let e = lam.finite_sum();
        for a in partitions_in_box(lam.len() + 2, e + 2) {
            if !preceq(&a, &lam) {
                prop_assert!(m.iter().any(|b| preceq(b, &a)), "{} not above any member", a);
            }
        }
    }

    #[test]
    fn truncation_roundtrip(mu in inf_partition(4), e in 0u64..4) {
        let minus = mu_minus(&mu, e);
        let s = mu_s(&minus, e).unwrap();
        prop_assert_eq!(mu_minus(&s, e), minus);
        prop_assert!(leq(&mu, &s));
    }

    #[test]
    fn polynomial_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn polynomial_text_roundtrip(a in poly()) {
        prop_assert_eq!(parse_poly(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn permutation_action_is_a_homomorphism(a in poly(), b in poly(), img in Just(vec![2u32, 3, 1])) {
        let s = Perm::from_images(img);
        prop_assert_eq!((&a * &b).apply_perm(&s), &a.apply_perm(&s) * &b.apply_perm(&s));
    }

    #[test]
    fn pullback_square_properties(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mu = sample::inf_composition(&mut r, 4, 5);
        for kind in [MapKind::PrincipalSurjection, MapKind::Injection, MapKind::Arbitrary] {
            let f1 = sample::map_into(&mut r, &mu, MapKind::Arbitrary);
            let f2 = sample::map_into(&mut r, &mu, kind);
            let sq = pullback_square(&f1, &f2).unwrap();
            let (a, b) = (sq.g1.then(&f1).unwrap(), sq.g2.then(&f2).unwrap());
            prop_assert_eq!(a.table(), b.table());
            if f2.is_principal_surjection() {
                prop_assert!(sq.g1.is_principal_surjection());
            }
            if f2.is_injection() {
                prop_assert!(sq.g1.is_injection());
            }
        }
    }

    #[test]
    fn factorization_recombines(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mu = sample::inf_composition(&mut r, 4, 5);
        let f = sample::map_into(&mut r, &mu, MapKind::Arbitrary);
        let (h, g) = factor(&f);
        prop_assert!(h.is_principal_surjection());
        prop_assert!(g.is_injection());
        prop_assert_eq!(h.then(&g).unwrap(), f);
    }

    #[test]
    fn composition_contains_iterated_action(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lam = sample::inf_composition(&mut r, 2, 2);
        let mid = sample::inf_composition(&mut r, 2, 2);
        let nu = sample::inf_composition(&mut r, 2, 2);
        let f = enumerate_good(&lam, &mid);
        let g = enumerate_good(&mid, &nu);
        prop_assume!(!f.is_empty() && !g.is_empty());
        let f = &f[seed as usize % f.len()];
        let g = &g[(seed >> 8) as usize % g.len()];
        let pts: Vec<Vec<Q>> = (0..3)
            .map(|k| (0..nu.len()).map(|i| q(((k * 7 + i * 3) % 3) as i64)).collect())
            .collect();
        let s = PointSetVariety::new(nu.clone(), pts).unwrap();
        let h = compose(f, g).unwrap();
        let lhs = apply_corr(f, &apply_corr(g, &s).unwrap()).unwrap();
        let rhs = apply_corr(&h, &s).unwrap();
        prop_assert!(lhs.is_subset(&rhs));
    }

    #[test]
    fn vanishing_ideal_properties(pts in prop::collection::btree_set(prop::collection::vec(-2i64..3, 2), 1..6)) {
        let pts: Vec<Vec<Q>> = pts.into_iter().map(|p| p.into_iter().map(q).collect()).collect();
        let basis = vanishing_ideal(&pts);
        for g in &basis {
            for p in &pts {
                let val = g.eval(|v| match v { Var::T(i) => Some(p[i as usize - 1].clone()), _ => None });
                prop_assert_eq!(val, q(0));
            }
        }
        prop_assert_eq!(quotient_dimension(&basis, 2, 100), Some(pts.len()));
        let outside = vec![q(5), q(-7)];
        let all_vanish = basis.iter().all(|g| {
            g.eval(|v| match v { Var::T(i) => Some(outside[i as usize - 1].clone()), _ => None }) == q(0)
        });
        prop_assert!(!all_vanish);
    }

    #[test]
    fn width_matches_discriminant_orbits(seed in any::<u64>(), n in 1u32..4) {
        let x = sample::finitary_point(&mut rng(seed), 4, 3, &small_values());
        let vanishes = orbit_evaluations(&discriminant(n + 1), &x) == [q(0)].into();
        prop_assert_eq!(width_at_most(&x, n as usize), vanishes);
    }

    #[test]
    fn point_text_roundtrip(seed in any::<u64>()) {
        let x = sample::finitary_point(&mut rng(seed), 4, 5, &[q(0), q(1), Q::new(3.into(), 2.into()), q(-4)]);
        prop_assert_eq!(x.to_string().parse::<FinitaryPoint>().unwrap(), x);
    }

    #[test]
    fn h_tableau_square_invariant_under_relabeling(shape in prop::collection::vec(1u64..3, 1..4), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let t = Tableau::canonical(&GenPartition::finite(&shape));
        let n = t.labels().count() as u32;
        let mut img: Vec<u32> = (1..=n).collect();
        img.shuffle(&mut rng(seed));
        let sigma = Perm::from_images(img.clone());
        let relabeled = Tableau::new(
            t.rows().iter().map(|r| r.iter().map(|&x| sigma.apply(x)).collect()).collect(),
        ).unwrap();
        let sq = |h: ProductPoly| { let e = h.expand(); &e * &e };
        prop_assert_eq!(sq(h_tableau(&t)).apply_perm(&sigma), sq(h_tableau(&relabeled)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn end_closure_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lam = sample::inf_partition(&mut r, 3, 3);
        let z = sample::distinct_point_set(&mut r, &lam, 2, &small_values());
        let ze = end_closure(&z);
        prop_assert!(z.is_subset(&ze));
        prop_assert_eq!(end_closure(&ze), ze);
    }

    #[test]
    fn gamma_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lam = sample::inf_partition(&mut r, 3, 2);
        let z = sample::distinct_point_set(&mut r, &lam, 3, &small_values());
        let first = z.points().iter().next().unwrap().clone();
        let smaller = PointSetVariety::new(z.lambda().clone(), [first]).unwrap();
        let mu = sample::inf_composition(&mut r, 3, 2);
        prop_assert!(gamma_at(&smaller, &mu).is_subset(&gamma_at(&z, &mu)));
    }

    #[test]
    fn gamma_restricts_to_automorphism_images(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lam = sample::inf_partition(&mut r, 3, 3);
        let z = sample::distinct_point_set(&mut r, &lam, 2, &small_values());
        let g = gamma_at(&z, z.lambda());
        let distinct: BTreeSet<Vec<Q>> = g.points().iter().filter(|p| {
            p.iter().collect::<BTreeSet<_>>().len() == p.len()
        }).cloned().collect();
        let mut images = BTreeSet::new();
        for sigma in symvar::partitions::aut(z.lambda()) {
            for p in z.points() {
                images.insert(sigma.iter().map(|&j| p[j].clone()).collect::<Vec<Q>>());
            }
        }
        prop_assert_eq!(distinct, images);
    }

    #[test]
    fn gamma_is_compatible_with_principal_surjections(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lam = sample::inf_partition(&mut r, 3, 2);
        let z = sample::distinct_point_set(&mut r, &lam, 2, &small_values());
        let nu = sample::inf_composition(&mut r, 2, 2);
        let f = sample::map_into(&mut r, &nu, MapKind::PrincipalSurjection);
        prop_assume!(f.domain().len() <= 4);
        let upstairs = gamma_at(&z, f.domain());
        let downstairs = gamma_at(&z, &nu);
        // α_f^{-1}(Γ_ν) = Γ_μ: pulling back downstairs points gives the upstairs points.
        let pulled: BTreeSet<Vec<Q>> = downstairs.points().iter().map(|y| act_point(&f, y)).collect();
        let constant_on_fibers: BTreeSet<Vec<Q>> = upstairs.points().iter().filter(|x| {
            (0..nu.len()).all(|j| f.fiber(j).iter().all(|&i| x[i] == x[f.fiber(j)[0]]))
        }).cloned().collect();
        prop_assert_eq!(pulled, constant_on_fibers);
    }

    #[test]
    fn theta_respects_the_type_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lam = sample::inf_partition(&mut r, 3, 2);
        let z = sample::distinct_point_set(&mut r, &lam, 2, &small_values());
        let x = sample::finitary_point(&mut r, 4, 4, &small_values());
        if !preceq(&type_of(&x), &lam) {
            prop_assert!(!theta_member(&z, &x).unwrap());
        }
    }

    #[test]
    fn containment_is_reflexive_and_transitive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sets: Vec<PointSetVariety> = (0..3).map(|_| {
            let lam = sample::inf_partition(&mut r, 2, 2);
            sample::distinct_point_set(&mut r, &lam, 1, &small_values())
        }).collect();
        for a in &sets {
            prop_assert!(contains(a, a).unwrap());
            for b in &sets {
                for c in &sets {
                    if contains(a, b).unwrap() && contains(b, c).unwrap() {
                        prop_assert!(contains(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn variety_json_roundtrip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lam = sample::inf_partition(&mut r, 3, 3);
        let vals = vec![q(0), Q::new(1.into(), 3.into()), q(-2), q(5)];
        let z = sample::distinct_point_set(&mut r, &lam, 2, &vals);
        let text = z.to_json().to_string();
        prop_assert_eq!(PointSetVariety::parse_json(&text).unwrap(), z);
    }
}

#[test]
fn principal_surjection_and_identity_correspondence() {
    let lam = GenComposition::new(vec![ExtNat::Inf, ExtNat::Fin(2)]).unwrap();
    let id = Correspondence::identity(&lam);
    let s = PointSetVariety::from_ints(lam.clone(), &[&[0, 1], &[2, 3]]).unwrap();
    assert_eq!(apply_corr(&id, &s).unwrap(), s);
    let f = CompMap::identity(&lam);
    assert!(f.is_principal_surjection() && f.is_injection());
    assert!(apply_corr(&id, &PointSetVariety::empty(lam))
        .unwrap()
        .is_empty());
}
