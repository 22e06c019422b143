//! Tableau polynomials and generators for the ideals `I_λ` and `I_λ(Z)`.
//!
//! Generators are kept factored (see [`ProductPoly`]); membership of a
//! finitary point in the zero locus of the orbit ideal is decided by
//! searching the orbit of the point for a nonvanishing evaluation.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::partitions::{
    lambda_minus_set, min_excluded, preceq_minus_set, ExtNat, GenComposition, GenPartition, Tableau,
};
use crate::poly::{orbit_nonvanishing, q, vanishing_ideal, ProductPoly, SparsePoly, Var, Q};
use crate::variety::{gamma_at, FinitaryPoint, PointSetVariety};

/// `h_T = ∏ (ξ_i − ξ_j)` over pairs `i < j` in distinct rows of `T`.
pub fn h_tableau(t: &Tableau) -> ProductPoly {
    let mut cells: Vec<(u32, usize)> = t
        .rows()
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().map(move |&x| (x, r)))
        .collect();
    cells.sort_unstable();
    let mut h = ProductPoly::one();
    for (k, &(i, ri)) in cells.iter().enumerate() {
        for &(j, rj) in &cells[k + 1..] {
            if ri != rj {
                h.push(&SparsePoly::xi(i) - &SparsePoly::xi(j));
            }
        }
    }
    h
}

/// Where a generator comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `h_α` for a minimal excluded partition `α`.
    Excluded(GenPartition),
    /// The generator attached to a truncated partition `μ` and an element `g`
    /// of the vanishing ideal of `Γ_λ(Z)⁺_μ`.
    Slice { mu: GenPartition, g: SparsePoly },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Excluded(a) => write!(f, "excluded {a}"),
            Provenance::Slice { mu, g } => write!(f, "mu={mu} g={g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub poly: ProductPoly,
    pub provenance: Provenance,
}

/// A list of generators whose orbit ideal cuts out a type locus or a `Θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeIdeal {
    pub lambda: GenPartition,
    pub generators: Vec<Generator>,
}

impl fmt::Display for TypeIdeal {
    /// One `# provenance:` line followed by the generator, per generator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "# provenance: {}", g.provenance)?;
            writeln!(f, "{}", g.poly)?;
        }
        Ok(())
    }
}

/// Generators `h_α` for `α` in the minimal excluded antichain of `λ`.
pub fn i_lambda(lambda: &GenPartition) -> Result<TypeIdeal> {
    let generators = min_excluded(lambda)?
        .into_iter()
        .map(|alpha| Generator {
            poly: h_tableau(&Tableau::canonical(&alpha)),
            provenance: Provenance::Excluded(alpha),
        })
        .collect();
    Ok(TypeIdeal {
        lambda: lambda.clone(),
        generators,
    })
}

/// How the `Z`-dependent generators of `I_λ(Z)` are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ThetaRecipe {
    /// `h_{T_μ} · ι_μ(g)` for `μ ∈ Λ⁻`, taken literally.
    /// It cuts out a set that can miss points of `Θ_λ(Z)` (see the tests).
    AsPublished,
    /// `h_{T_μ} · q_μ · ι_μ(g)` for every finite `μ ⪯ λ` with parts at most
    /// `e(λ) + 1`, where `q_μ` vanishes unless each row of `T_μ` carries a
    /// single value (given that all values come from the coordinates of `Z`).
    #[default]
    Corrected,
}

/// `I_λ(Z)` with the default recipe.
pub fn i_lambda_z(lambda: &GenPartition, z: &PointSetVariety) -> Result<TypeIdeal> {
    i_lambda_z_with(lambda, z, ThetaRecipe::default())
}

pub fn i_lambda_z_with(
    lambda: &GenPartition,
    z: &PointSetVariety,
    recipe: ThetaRecipe,
) -> Result<TypeIdeal> {
    if &z.lambda().shape() != lambda {
        return Err(Error::Incompatible(format!(
            "point set lives on {} but the partition is {lambda}",
            z.lambda()
        )));
    }
    z.require_distinct()?;
    let mut ideal = i_lambda(lambda)?;
    let shapes = match recipe {
        ThetaRecipe::AsPublished => lambda_minus_set(lambda)?,
        ThetaRecipe::Corrected => preceq_minus_set(lambda),
    };
    let values: Vec<Q> = z.coordinate_values().into_iter().collect();
    let diffs: BTreeSet<Q> = values
        .iter()
        .flat_map(|a| values.iter().filter(move |b| *b != a).map(move |b| a - b))
        .collect();
    for mu in shapes {
        let t = Tableau::canonical(&mu);
        let mut base = h_tableau(&t);
        if recipe == ThetaRecipe::Corrected {
            for row in t.rows() {
                for &j in &row[1..] {
                    for d in &diffs {
                        let lin = &(&SparsePoly::xi(j) - &SparsePoly::xi(row[0]))
                            - &SparsePoly::constant(d.clone());
                        base.push(lin);
                    }
                }
            }
        }
        let comp = GenComposition::new(mu.parts().to_vec())?;
        let slice = gamma_at(z, &comp);
        let pts: Vec<Vec<Q>> = slice.points().iter().cloned().collect();
        let firsts: Vec<u32> = t.rows().iter().map(|r| r[0]).collect();
        for g in vanishing_ideal(&pts) {
            let mut poly = base.clone();
            poly.push(g.map_vars(|v| match v {
                Var::T(i) => Var::Xi(firsts[i as usize - 1]),
                other => other,
            }));
            ideal.generators.push(Generator {
                poly,
                provenance: Provenance::Slice { mu: mu.clone(), g },
            });
        }
    }
    Ok(ideal)
}

/// Whether every generator vanishes on the whole orbit of `x`.
pub fn member_by_equations(ideal: &TypeIdeal, x: &FinitaryPoint) -> bool {
    ideal
        .generators
        .iter()
        .all(|g| orbit_nonvanishing(&g.poly, x).is_none())
}

/// Random finitary points used to compare zero loci.
pub fn test_battery(
    values: &[Q],
    max_width: usize,
    max_mult: u64,
    count: usize,
    seed: u64,
) -> Vec<FinitaryPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Q> = values.to_vec();
    for k in 0..=max_width as i64 {
        pool.push(q(100 + k));
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let width = rng.gen_range(1..=max_width);
        let vals: Vec<Q> = pool.choose_multiple(&mut rng, width).cloned().collect();
        let infinite = rng.gen_range(1..=width);
        let classes = vals
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
        out.push(FinitaryPoint::new(classes).expect("distinct values from the pool"));
    }
    out
}

/// Drops generators whose vanishing is implied by the remaining ones on a
/// random battery of points. This is a heuristic: a dropped generator has
/// only been checked on the battery.
pub fn reduce(ideal: &TypeIdeal, values: &[Q], seed: u64) -> TypeIdeal {
    let e = ideal.lambda.finite_sum();
    let width = ideal.lambda.len() + 2;
    let battery = test_battery(values, width, e + 2, 200, seed);
    let zero: Vec<Vec<bool>> = ideal
        .generators
        .iter()
        .map(|g| {
            battery
                .iter()
                .map(|x| orbit_nonvanishing(&g.poly, x).is_none())
                .collect()
        })
        .collect();
    let mut keep = vec![true; ideal.generators.len()];
    for k in 0..keep.len() {
        let implied = (0..battery.len())
            .all(|b| zero[k][b] || (0..keep.len()).any(|o| o != k && keep[o] && !zero[o][b]));
        if implied {
            keep[k] = false;
        }
    }
    TypeIdeal {
        lambda: ideal.lambda.clone(),
        generators: ideal
            .generators
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(g, _)| g.clone())
            .collect(),
    }
}
