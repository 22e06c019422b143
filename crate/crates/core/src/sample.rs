//! Seeded random instances for self-checks and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corr::CompMap;
use crate::partitions::{ExtNat, GenComposition, GenPartition};
use crate::poly::{q, Monomial, SparsePoly, Var, Q};
use crate::variety::{FinitaryPoint, PointSetVariety};

/// An ∞-partition with at most `max_len` parts and finite parts summing to at
/// most `max_e`.
pub fn inf_partition<R: Rng>(rng: &mut R, max_len: usize, max_e: u64) -> GenPartition {
    let len = rng.gen_range(1..=max_len);
    let infinite = rng.gen_range(1..=len);
    let mut parts = vec![ExtNat::Inf; infinite];
    let mut budget = max_e;
    for _ in infinite..len {
        if budget == 0 {
            break;
        }
        let p = rng.gen_range(1..=budget);
        budget -= p;
        parts.push(ExtNat::Fin(p));
    }
    GenPartition::new(parts)
}

/// A finitary point of width at most `max_width` with distinct small integer
/// values and finite multiplicities at most `max_mult`.
pub fn finitary_point<R: Rng>(
    rng: &mut R,
    max_width: usize,
    max_mult: u64,
    values: &[Q],
) -> FinitaryPoint {
    let width = rng.gen_range(1..=max_width.min(values.len()));
    let vals: Vec<Q> = values.choose_multiple(rng, width).cloned().collect();
    let infinite = rng.gen_range(1..=width);
    let mut classes: Vec<(Q, ExtNat)> = vals
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let m = if k < infinite {
                ExtNat::Inf
            } else {
                ExtNat::Fin(rng.gen_range(1..=max_mult))
            };
            (v, m)
        })
        .collect();
    classes.shuffle(rng);
    FinitaryPoint::new(classes).expect("valid by construction")
}

/// `count` points with pairwise distinct coordinates drawn from `values`,
/// on a random composition of the partition `lambda`.
pub fn distinct_point_set<R: Rng>(
    rng: &mut R,
    lambda: &GenPartition,
    count: usize,
    values: &[Q],
) -> PointSetVariety {
    let mut weights = lambda.parts().to_vec();
    weights.shuffle(rng);
    let comp = GenComposition::new(weights).expect("positive parts");
    let points: Vec<Vec<Q>> = (0..count)
        .map(|_| values.choose_multiple(rng, lambda.len()).cloned().collect())
        .collect();
    PointSetVariety::new(comp, points).expect("lengths match")
}

/// A nonzero polynomial in `ξ_1..ξ_{nvars}` of total degree at most `max_deg`.
pub fn polynomial<R: Rng>(rng: &mut R, nvars: u32, max_deg: u32) -> SparsePoly {
    loop {
        let mut p = SparsePoly::zero();
        for _ in 0..rng.gen_range(1..=4) {
            let deg = rng.gen_range(0..=max_deg);
            let mut pairs = Vec::new();
            for _ in 0..deg {
                pairs.push((Var::Xi(rng.gen_range(1..=nvars)), 1));
            }
            let c = q(rng.gen_range(-3..=3));
            p.add_term(Monomial::from_pairs(pairs), c);
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random ∞-composition with at most `max_len` labels.
pub fn inf_composition<R: Rng>(rng: &mut R, max_len: usize, max_part: u64) -> GenComposition {
    let len = rng.gen_range(1..=max_len);
    let mut w: Vec<ExtNat> = (0..len)
        .map(|_| {
            if rng.gen_bool(0.4) {
                ExtNat::Inf
            } else {
                ExtNat::Fin(rng.gen_range(1..=max_part))
            }
        })
        .collect();
    if !w.iter().any(|x| x.is_inf()) {
        let k = rng.gen_range(0..len);
        w[k] = ExtNat::Inf;
    }
    GenComposition::new(w).expect("positive weights")
}

/// The kind of map produced by [`map_into`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    PrincipalSurjection,
    Injection,
    Arbitrary,
}

/// A random map into `mu` of the requested kind, with a freshly built domain.
pub fn map_into<R: Rng>(rng: &mut R, mu: &GenComposition, kind: MapKind) -> CompMap {
    let mut weights = Vec::new();
    let mut table = Vec::new();
    for j in 0..mu.len() {
        let parts = match kind {
            MapKind::PrincipalSurjection => split_exact(rng, mu.weight(j)),
            MapKind::Injection => {
                if rng.gen_bool(0.7) {
                    vec![shrink(rng, mu.weight(j))]
                } else {
                    Vec::new()
                }
            }
            MapKind::Arbitrary => {
                if rng.gen_bool(0.2) {
                    Vec::new()
                } else {
                    let total = shrink(rng, mu.weight(j));
                    split_exact(rng, total)
                }
            }
        };
        for p in parts {
            weights.push(p);
            table.push(j);
        }
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.shuffle(rng);
    let weights: Vec<ExtNat> = order.iter().map(|&k| weights[k]).collect();
    let table: Vec<usize> = order.iter().map(|&k| table[k]).collect();
    let domain = GenComposition::new(weights).expect("positive parts");
    CompMap::new(domain, mu.clone(), table).expect("weights respected")
}

fn shrink<R: Rng>(rng: &mut R, w: ExtNat) -> ExtNat {
    match w {
        ExtNat::Inf if rng.gen_bool(0.6) => ExtNat::Inf,
        ExtNat::Inf => ExtNat::Fin(rng.gen_range(1..=4)),
        ExtNat::Fin(n) => ExtNat::Fin(rng.gen_range(1..=n)),
    }
}

/// Parts summing exactly to `w` (one or more of them infinite when `w` is).
fn split_exact<R: Rng>(rng: &mut R, w: ExtNat) -> Vec<ExtNat> {
    match w {
        ExtNat::Inf => {
            let mut v = vec![ExtNat::Inf; rng.gen_range(1..=2)];
            for _ in 0..rng.gen_range(0..=2) {
                v.push(ExtNat::Fin(rng.gen_range(1..=3)));
            }
            v
        }
        ExtNat::Fin(mut n) => {
            let mut v = Vec::new();
            while n > 0 {
                let p = rng.gen_range(1..=n);
                v.push(ExtNat::Fin(p));
                n -= p;
            }
            v
        }
    }
}
