//! Finitary points, finite point sets on ∞-compositions, and the closure
//! constructions built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde_json::{json, Value};

use crate::corr::{enumerate_end, enumerate_good_fibers, CompMap, Correspondence};
use crate::error::{Error, Result};
use crate::partitions::{aut, ExtNat, GenComposition, GenPartition};
use crate::poly::{fmt_q, parse_q, Q};

/// A point of 𝔸^∞ taking finitely many values, each with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitaryPoint {
    classes: Vec<(Q, ExtNat)>,
}

impl FinitaryPoint {
    /// Requires distinct values, positive multiplicities and an infinite class.
    pub fn new(classes: Vec<(Q, ExtNat)>) -> Result<Self> {
        if classes.iter().any(|(_, m)| *m == ExtNat::ZERO) {
            return Err(Error::InvalidPoint(
                "multiplicities must be positive".into(),
            ));
        }
        if !classes.iter().map(|(v, _)| v).all_unique() {
            return Err(Error::InvalidPoint("values must be distinct".into()));
        }
        if !classes.iter().any(|(_, m)| m.is_inf()) {
            return Err(Error::InvalidPoint(
                "a point needs a value of infinite multiplicity".into(),
            ));
        }
        Ok(FinitaryPoint { classes })
    }

    pub fn classes(&self) -> &[(Q, ExtNat)] {
        &self.classes
    }

    pub fn width(&self) -> usize {
        self.classes.len()
    }

    pub fn values(&self) -> Vec<Q> {
        self.classes.iter().map(|(v, _)| v.clone()).collect()
    }
}

impl fmt::Display for FinitaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .classes
            .iter()
            .map(|(v, m)| format!("{}^{}", fmt_q(v), m))
            .join(",");
        f.write_str(&s)
    }
}

impl FromStr for FinitaryPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let classes = s
            .split(',')
            .map(|tok| {
                let (v, m) = tok
                    .trim()
                    .split_once('^')
                    .ok_or_else(|| Error::Parse(format!("expected value^mult, got `{tok}`")))?;
                Ok((parse_q(v)?, m.trim().parse::<ExtNat>()?))
            })
            .collect::<Result<Vec<_>>>()?;
        FinitaryPoint::new(classes)
    }
}

/// The type of `x`: its multiplicities sorted non-increasingly.
pub fn type_of(x: &FinitaryPoint) -> GenPartition {
    GenPartition::new(x.classes.iter().map(|(_, m)| *m))
}

pub fn width_at_most(x: &FinitaryPoint, n: usize) -> bool {
    x.width() <= n
}

/// A finite set of rational points in `𝒳_λ = 𝔸^{⟨λ⟩}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSetVariety {
    lambda: GenComposition,
    points: BTreeSet<Vec<Q>>,
}

impl PointSetVariety {
    pub fn new(lambda: GenComposition, points: impl IntoIterator<Item = Vec<Q>>) -> Result<Self> {
        let points: BTreeSet<Vec<Q>> = points.into_iter().collect();
        if let Some(p) = points.iter().find(|p| p.len() != lambda.len()) {
            return Err(Error::InvalidPoint(format!(
                "point of length {} on a composition with {} labels",
                p.len(),
                lambda.len()
            )));
        }
        Ok(PointSetVariety { lambda, points })
    }

    pub fn empty(lambda: GenComposition) -> Self {
        PointSetVariety {
            lambda,
            points: BTreeSet::new(),
        }
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_ints(lambda: GenComposition, points: &[&[i64]]) -> Result<Self> {
        PointSetVariety::new(
            lambda,
            points
                .iter()
                .map(|p| p.iter().map(|&c| crate::poly::q(c)).collect()),
        )
    }

    pub fn lambda(&self) -> &GenComposition {
        &self.lambda
    }

    pub fn points(&self) -> &BTreeSet<Vec<Q>> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_point(&self, p: &[Q]) -> bool {
        self.points.contains(p)
    }

    /// Whether every point has pairwise distinct coordinates.
    pub fn is_distinct(&self) -> bool {
        self.points.iter().all(|p| p.iter().all_unique())
    }

    pub fn require_distinct(&self) -> Result<()> {
        match self.points.iter().find(|p| !p.iter().all_unique()) {
            Some(p) => Err(Error::NotDistinct(format_tuple(p))),
            None => Ok(()),
        }
    }

    /// All coordinate values occurring in the points.
    pub fn coordinate_values(&self) -> BTreeSet<Q> {
        self.points.iter().flatten().cloned().collect()
    }

    pub fn is_subset(&self, other: &PointSetVariety) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn to_json(&self) -> Value {
        let lambda: Vec<Value> = self
            .lambda
            .weights()
            .iter()
            .map(|w| match w {
                ExtNat::Inf => json!("inf"),
                ExtNat::Fin(n) => json!(n),
            })
            .collect();
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| Value::Array(p.iter().map(q_to_json).collect()))
            .collect();
        json!({ "lambda": lambda, "points": points })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("variety file: {m}"));
        let lambda = v
            .get("lambda")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `lambda` array"))?
            .iter()
            .map(|w| match w {
                Value::String(s) => s.parse::<ExtNat>(),
                Value::Number(n) => n
                    .as_u64()
                    .map(ExtNat::Fin)
                    .ok_or_else(|| bad("weights must be naturals or \"inf\"")),
                _ => Err(bad("weights must be naturals or \"inf\"")),
            })
            .collect::<Result<Vec<_>>>()?;
        let lambda = GenComposition::new(lambda)?;
        let points = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `points` array"))?
            .iter()
            .map(|p| {
                p.as_array()
                    .ok_or_else(|| bad("each point must be an array"))?
                    .iter()
                    .map(q_from_json)
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PointSetVariety::new(lambda, points)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("variety file: {e}")))?;
        Self::from_json(&v)
    }
}

fn q_to_json(x: &Q) -> Value {
    if x.is_integer() {
        if let Ok(n) = x.numer().to_string().parse::<i64>() {
            return json!(n);
        }
    }
    json!(fmt_q(x))
}

fn q_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_q(&n.to_string()),
        _ => Err(Error::Parse(format!(
            "coordinates must be integers or \"p/q\" strings, got {v}"
        ))),
    }
}

/// Formats a tuple as `(a,b,c)`.
pub fn format_tuple(p: &[Q]) -> String {
    format!("({})", p.iter().map(fmt_q).join(","))
}

/// `α_f(x)`: coordinate `i` of the result is `x_{f(i)}`.
pub fn act_point(f: &CompMap, x: &[Q]) -> Vec<Q> {
    f.table().iter().map(|&j| x[j].clone()).collect()
}

/// For each label `i` of the target, the set of source labels reached from it.
type Signature = Vec<Vec<usize>>;

/// Points `z` with `z_i = y_t` for every `t` in the `i`-th target set, over
/// `y ∈ points` constant on each target set.
fn apply_signature(sig: &Signature, points: &BTreeSet<Vec<Q>>, out: &mut BTreeSet<Vec<Q>>) {
    'points: for y in points {
        let mut z = Vec::with_capacity(sig.len());
        for targets in sig {
            let v = &y[targets[0]];
            if targets[1..].iter().any(|&t| &y[t] != v) {
                continue 'points;
            }
            z.push(v.clone());
        }
        out.insert(z);
    }
}

fn signature_of(f: &Correspondence) -> Signature {
    (0..f.target().len())
        .map(|i| {
            let set: BTreeSet<usize> = f
                .f1()
                .fiber(i)
                .into_iter()
                .map(|r| f.f2().apply(r))
                .collect();
            set.into_iter().collect()
        })
        .collect()
}

/// `α_f(S) = α_{f₁}^{-1}(α_{f₂}(S))`.
pub fn apply_corr(f: &Correspondence, s: &PointSetVariety) -> Result<PointSetVariety> {
    if f.source() != s.lambda() {
        return Err(Error::Incompatible(format!(
            "correspondence into {} applied to a point set on {}",
            f.source(),
            s.lambda()
        )));
    }
    let mut out = BTreeSet::new();
    apply_signature(&signature_of(f), &s.points, &mut out);
    Ok(PointSetVariety {
        lambda: f.target().clone(),
        points: out,
    })
}

/// `Z^e`: the union of `α_f(Z)` over all self-maps `f` of `λ`.
pub fn end_closure(z: &PointSetVariety) -> PointSetVariety {
    let mut out = BTreeSet::new();
    for f in enumerate_end(&z.lambda) {
        for y in &z.points {
            out.insert(act_point(&f, y));
        }
    }
    PointSetVariety {
        lambda: z.lambda.clone(),
        points: out,
    }
}

/// `Γ_λ(Z)_μ` (for finite `μ`, the slice `Γ_λ(Z)⁺_μ`): the union of `α_f(Z^e)`
/// over good correspondences `f: μ ⇢ λ`.
///
/// Only the target sets `f₂(f₁^{-1}(i))` matter for `α_f`, so correspondences
/// are deduplicated by them before any point is processed.
pub fn gamma_at(z: &PointSetVariety, mu: &GenComposition) -> PointSetVariety {
    let mut out = BTreeSet::new();
    if !z.is_empty() {
        let ze = end_closure(z);
        let sigs: BTreeSet<Signature> = enumerate_good_fibers(mu, &z.lambda)
            .into_iter()
            .map(|fibers| {
                fibers
                    .into_iter()
                    .map(|fib| {
                        let set: BTreeSet<usize> = fib.into_iter().map(|(_, t)| t).collect();
                        set.into_iter().collect()
                    })
                    .collect()
            })
            .collect();
        for sig in &sigs {
            apply_signature(sig, &ze.points, &mut out);
        }
    }
    PointSetVariety {
        lambda: mu.clone(),
        points: out,
    }
}

/// Whether `x ∈ Θ_λ(Z)`.
///
/// With `μ` the type of `x`, tries every arrangement of the values of `x` on
/// the composition of shape `μ` (classes ordered by multiplicity, tied classes
/// in every order) against `Γ_λ(Z)_μ`.
pub fn theta_member(z: &PointSetVariety, x: &FinitaryPoint) -> Result<bool> {
    z.require_distinct()?;
    if z.is_empty() {
        return Ok(false);
    }
    let mut classes = x.classes.clone();
    classes.sort_by(|a, b| b.1.cmp(&a.1));
    let mu = GenComposition::new(classes.iter().map(|(_, m)| *m).collect())?;
    let gamma = gamma_at(z, &mu);
    let blocks: Vec<Vec<Q>> = classes
        .iter()
        .chunk_by(|(_, m)| *m)
        .into_iter()
        .map(|(_, g)| g.map(|(v, _)| v.clone()).collect())
        .collect();
    let arrangements = blocks
        .iter()
        .map(|b| b.iter().cloned().permutations(b.len()).collect::<Vec<_>>())
        .multi_cartesian_product();
    for arr in arrangements {
        let tuple: Vec<Q> = arr.into_iter().flatten().collect();
        if gamma.contains_point(&tuple) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `Θ_μ(Z₁) ⊂ Θ_λ(Z₂)`, decided by `Z₁ ⊂ Γ_λ(Z₂)_μ`.
pub fn contains(z1: &PointSetVariety, z2: &PointSetVariety) -> Result<bool> {
    z1.require_distinct()?;
    z2.require_distinct()?;
    if z1.is_empty() {
        return Ok(true);
    }
    Ok(z1.is_subset(&gamma_at(z2, &z1.lambda)))
}

/// The points of `Z` grouped into orbits of `Aut(λ)`.
pub fn aut_orbits(z: &PointSetVariety) -> Vec<BTreeSet<Vec<Q>>> {
    let perms = aut(&z.lambda);
    let mut owner: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    let mut orbits: Vec<BTreeSet<Vec<Q>>> = Vec::new();
    for p in &z.points {
        if owner.contains_key(p) {
            continue;
        }
        let k = orbits.len();
        let mut orbit = BTreeSet::new();
        for sigma in &perms {
            let image: Vec<Q> = sigma.iter().map(|&j| p[j].clone()).collect();
            if z.points.contains(&image) {
                owner.insert(image.clone(), k);
                orbit.insert(image);
            }
        }
        orbits.push(orbit);
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::enumerate_good;
    use crate::poly::{discriminant, orbit_evaluations, q};

    fn comp(s: &str) -> GenComposition {
        GenComposition::new(s.split(',').map(|t| t.parse().unwrap()).collect()).unwrap()
    }

    fn pt(s: &str) -> FinitaryPoint {
        s.parse().unwrap()
    }

    fn set(lambda: &str, pts: &[&[i64]]) -> PointSetVariety {
        PointSetVariety::from_ints(comp(lambda), pts).unwrap()
    }

    fn tuple(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&c| q(c)).collect()
    }

    #[test]
    fn types() {
        assert_eq!(
            type_of(&pt("3^3,5^2,6^inf,7^inf")).to_string(),
            "inf,inf,3,2"
        );
        assert_eq!(type_of(&pt("4^inf")).to_string(), "inf");
        assert_eq!(type_of(&pt("0^inf,1^3,2^inf")).to_string(), "inf,inf,3");
    }

    #[test]
    fn point_validation_and_roundtrip() {
        assert!("0^3,1^2".parse::<FinitaryPoint>().is_err());
        assert!("0^inf,0^2".parse::<FinitaryPoint>().is_err());
        assert!("0^inf,1^0".parse::<FinitaryPoint>().is_err());
        let x = pt("-1/2^inf,3^2");
        assert_eq!(x.to_string().parse::<FinitaryPoint>().unwrap(), x);
    }

    #[test]
    fn width_agrees_with_discriminant_orbit() {
        let x = pt("0^inf,1^inf");
        assert!(width_at_most(&x, 2) && !width_at_most(&x, 1));
        for (s, n) in [
            ("0^inf,1^inf", 1u32),
            ("0^inf,1^inf", 2),
            ("0^inf,1^2,5^1", 2),
            ("0^inf,1^2,5^1", 3),
        ] {
            let x = pt(s);
            let vanishes = orbit_evaluations(&discriminant(n + 1), &x) == [q(0)].into();
            assert_eq!(width_at_most(&x, n as usize), vanishes, "{s} {n}");
        }
    }

    #[test]
    fn act_point_examples() {
        let x = tuple(&[5, 7]);
        let f = CompMap::identity(&comp("inf,inf"));
        assert_eq!(act_point(&f, &x), x);
        let g = CompMap::new(comp("inf,inf"), comp("inf,inf"), vec![1, 1]).unwrap();
        assert_eq!(act_point(&g, &x), tuple(&[7, 7]));
        let h = CompMap::new(comp("2"), comp("inf,3"), vec![1]).unwrap();
        assert_eq!(act_point(&h, &x), tuple(&[7]));
    }

    #[test]
    fn end_closure_examples() {
        let z = set("inf,inf", &[&[0, 1]]);
        let ze = end_closure(&z);
        let expected = set("inf,inf", &[&[0, 1], &[0, 0], &[1, 1], &[1, 0]]);
        assert_eq!(ze, expected);
        assert_eq!(end_closure(&ze), ze);
    }

    #[test]
    fn skew_reflection_example() {
        let z = set("inf,2,1,1", &[&[1, 2, 3, 3]]);
        let target = tuple(&[1, 3, 2, 2]);
        assert!(!end_closure(&z).contains_point(&target));
        assert!(gamma_at(&z, &comp("inf,2,1,1")).contains_point(&target));
        let lam = comp("inf,2,1,1");
        let fibers = vec![
            vec![(ExtNat::Inf, 0)],
            vec![(ExtNat::Fin(1), 2), (ExtNat::Fin(1), 3)],
            vec![(ExtNat::Fin(1), 1)],
            vec![(ExtNat::Fin(1), 1)],
        ];
        let f = Correspondence::from_canonical(&lam, &lam, &fibers).unwrap();
        assert!(apply_corr(&f, &end_closure(&z))
            .unwrap()
            .contains_point(&target));
    }

    #[test]
    fn swapped_pair_slices() {
        let z = set("inf,inf", &[&[0, 1], &[1, 0]]);
        assert_eq!(
            gamma_at(&z, &comp("1,1")),
            set("1,1", &[&[0, 1], &[1, 0], &[0, 0], &[1, 1]])
        );
        assert_eq!(gamma_at(&z, &comp("1")), set("1", &[&[0], &[1]]));
    }

    #[test]
    fn gamma_matches_explicit_union() {
        let z = set("inf,1", &[&[0, 1]]);
        for mu in ["inf,1", "inf,inf", "2,1", "1,1,1", "inf,1,1"] {
            let mu = comp(mu);
            let ze = end_closure(&z);
            let mut union = BTreeSet::new();
            for f in enumerate_good(&mu, z.lambda()) {
                union.extend(apply_corr(&f, &ze).unwrap().points.clone());
            }
            assert_eq!(gamma_at(&z, &mu).points, union);
        }
    }

    #[test]
    fn theta_examples() {
        let z = set("inf,inf", &[&[0, 1], &[1, 0]]);
        assert!(theta_member(&z, &pt("0^inf,1^inf")).unwrap());
        assert!(!theta_member(&z, &pt("0^inf,1^inf,2^1")).unwrap());
        for n in 1..=3i64 {
            let z = set(&format!("inf,{n}"), &[&[0, 1]]);
            assert!(theta_member(&z, &pt(&format!("0^inf,1^{n}"))).unwrap());
            assert!(!theta_member(&z, &pt(&format!("0^inf,1^{}", n + 1))).unwrap());
        }
        let bad = set("inf,1,1", &[&[0, 1, 1]]);
        assert!(theta_member(&bad, &pt("0^inf")).is_err());
        assert!(!theta_member(&PointSetVariety::empty(comp("inf")), &pt("0^inf")).unwrap());
    }

    #[test]
    fn containment_examples() {
        let a = set("inf,1", &[&[0, 1]]);
        let b = set("inf,2", &[&[0, 1]]);
        assert!(contains(&a, &b).unwrap());
        assert!(!contains(&b, &a).unwrap());
        assert!(contains(&a, &a).unwrap());
        assert!(contains(&PointSetVariety::empty(comp("inf")), &a).unwrap());
    }

    #[test]
    fn orbits() {
        assert_eq!(aut_orbits(&set("inf,inf", &[&[0, 1], &[1, 0]])).len(), 1);
        assert_eq!(aut_orbits(&set("inf,3", &[&[0, 1]])).len(), 1);
        assert_eq!(aut_orbits(&set("inf,inf", &[&[0, 1], &[2, 3]])).len(), 2);
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"lambda":[2,"inf"],"points":[["1/2",3],[0,-1]]}"#;
        let v = PointSetVariety::parse_json(text).unwrap();
        assert_eq!(v.lambda(), &comp("2,inf"));
        assert_eq!(PointSetVariety::from_json(&v.to_json()).unwrap(), v);
        assert!(PointSetVariety::parse_json(r#"{"lambda":["inf"],"points":[[1,2]]}"#).is_err());
    }
}
