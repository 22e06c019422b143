//! Discriminants, the skew coset sum, and constructive extraction of a
//! discriminant multiple from any nonzero polynomial.
//!
//! Extraction produces a replayable certificate: a sequence of steps, each
//! applying an element of the group ring `ℚ[𝔖]` and then multiplying by a
//! polynomial, that turns `f` into exactly `c · Δ_n`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{q, Perm, SparsePoly, Var, Q};
use crate::error::{Error, Result};

/// `Δ(ξ_{s_1}, …, ξ_{s_k}) = ∏_{i<j} (ξ_{s_j} − ξ_{s_i})`.
pub fn discriminant_of(indices: &[u32]) -> SparsePoly {
    let mut p = SparsePoly::one();
    for j in 0..indices.len() {
        for i in 0..j {
            p = &p * &(&SparsePoly::xi(indices[j]) - &SparsePoly::xi(indices[i]));
        }
    }
    p
}

/// `Δ_n = ∏_{1≤i<j≤n} (ξ_j − ξ_i)`, with `Δ_1 = 1`.
pub fn discriminant(n: u32) -> SparsePoly {
    discriminant_of(&(1..=n).collect::<Vec<_>>())
}

/// `Σ sgn(σ) σ(ξ_n^k Δ_{n−1})` over coset representatives of `𝔖_n / 𝔖_{n−1}`.
///
/// The representatives are the identity and the transpositions `(i n)` for
/// `i < n`. The sum is computed term by term.
pub fn skew_sum(n: u32, k: u32) -> SparsePoly {
    assert!(n >= 2 && k < n, "skew_sum needs n >= 2 and k <= n - 1");
    let base = &SparsePoly::xi(n).pow(k) * &discriminant(n - 1);
    let mut total = base.clone();
    for i in 1..n {
        total = &total - &base.apply_perm(&Perm::transposition(i, n));
    }
    total
}

/// An element `Σ c_σ σ` of the group ring.
pub type GroupRingElement = Vec<(Q, Perm)>;

/// One replay step: `p ↦ multiplier · Σ c_σ σ(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessStep {
    pub group: GroupRingElement,
    pub multiplier: SparsePoly,
}

impl WitnessStep {
    fn multiply(m: SparsePoly) -> Self {
        WitnessStep {
            group: vec![(Q::one(), Perm::identity())],
            multiplier: m,
        }
    }

    fn act(group: GroupRingElement) -> Self {
        WitnessStep {
            group,
            multiplier: SparsePoly::one(),
        }
    }

    fn apply(&self, p: &SparsePoly) -> SparsePoly {
        let mut acc = SparsePoly::zero();
        for (c, sigma) in &self.group {
            acc = &acc + &p.apply_perm(sigma).scale(c);
        }
        &self.multiplier * &acc
    }
}

/// A certificate that `c · Δ_n` lies in the orbit ideal of a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionWitness {
    pub steps: Vec<WitnessStep>,
    pub c: Q,
    pub n: u32,
}

/// Runs the witness steps on `f`.
pub fn replay(f: &SparsePoly, w: &ExtractionWitness) -> SparsePoly {
    w.steps.iter().fold(f.clone(), |p, s| s.apply(&p))
}

/// Whether replaying `w` on `f` gives exactly `c · Δ_n`.
pub fn verify_witness(f: &SparsePoly, w: &ExtractionWitness) -> bool {
    !w.c.is_zero() && w.n >= 1 && replay(f, w) == discriminant(w.n).scale(&w.c)
}

/// Builds a witness for `f ≠ 0` in the `ξ` variables.
///
/// Writes `f = Σ g_i ξ_r^i` in its highest variable `ξ_r`, obtains a witness
/// `X` for the leading coefficient `g_d` recursively, multiplies by
/// `Δ(ξ_{b_1}, …, ξ_{b_d})` for fresh indices `b`, applies the alternating
/// coset sum over `{b_1, …, b_d, r}` (which kills every `g_i` with `i < d`
/// and turns `g_d ξ_r^d` into `g_d Δ(ξ_b, ξ_r)`), replays `X`, and finally
/// multiplies by the cross differences that glue the two discriminants.
pub fn extract_discriminant(f: &SparsePoly) -> Result<ExtractionWitness> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.vars().iter().any(|v| matches!(v, Var::T(_))) {
        return Err(Error::Parse(
            "extraction expects a polynomial in the x variables".into(),
        ));
    }
    let mut used: BTreeSet<u32> = f.xi_support().into_iter().collect();
    let (mut steps, c, seq) = extract_rec(f, &mut used);
    let n = seq.len().max(1) as u32;
    if seq.len() > 1 {
        steps.push(WitnessStep::act(vec![(Q::one(), normalizing_perm(&seq))]));
    }
    Ok(ExtractionWitness { steps, c, n })
}

/// Returns steps with `replay(f) = c · Δ(ξ_{seq})`.
fn extract_rec(f: &SparsePoly, used: &mut BTreeSet<u32>) -> (Vec<WitnessStep>, Q, Vec<u32>) {
    if let Some(c) = f.as_constant() {
        return (Vec::new(), c, Vec::new());
    }
    let r = *f.xi_support().last().expect("non-constant");
    let coeffs = f.coefficients_in(Var::Xi(r));
    let d = (coeffs.len() - 1) as u32;
    let lead = coeffs.last().expect("nonzero").clone();
    used.insert(r);
    let (inner, c, a) = extract_rec(&lead, used);

    let mut b = Vec::new();
    let mut cand = 1u32;
    while b.len() < d as usize {
        if !used.contains(&cand) {
            b.push(cand);
            used.insert(cand);
        }
        cand += 1;
    }

    let mut steps = vec![WitnessStep::multiply(discriminant_of(&b))];
    let mut y: GroupRingElement = vec![(Q::one(), Perm::identity())];
    y.extend(b.iter().map(|&bj| (q(-1), Perm::transposition(bj, r))));
    steps.push(WitnessStep::act(y));
    steps.extend(inner);

    let mut glue = SparsePoly::one();
    for &ai in &a {
        for &later in b.iter().chain(std::iter::once(&r)) {
            glue = &glue * &(&SparsePoly::xi(later) - &SparsePoly::xi(ai));
        }
    }
    steps.push(WitnessStep::multiply(glue));

    let mut seq = a;
    seq.extend(b);
    seq.push(r);
    (steps, c, seq)
}

/// A permutation sending `seq[k]` to `k + 1`.
fn normalizing_perm(seq: &[u32]) -> Perm {
    let n = seq.len() as u32;
    let top = seq.iter().copied().max().unwrap_or(0).max(n);
    let mut image = vec![0u32; top as usize];
    for (k, &s) in seq.iter().enumerate() {
        image[s as usize - 1] = k as u32 + 1;
    }
    let mut it = (n + 1..=top).collect::<Vec<_>>().into_iter();
    for slot in image.iter_mut() {
        if *slot == 0 {
            *slot = it.next().expect("bijection completion");
        }
    }
    Perm::from_images(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn small_discriminants() {
        assert_eq!(discriminant(1), SparsePoly::one());
        assert_eq!(discriminant(2).to_string(), "-x1 + x2");
        let d3 = parse_poly("(x2 - x1)*(x3 - x1)*(x3 - x2)").unwrap();
        assert_eq!(discriminant(3), d3);
        assert_eq!(discriminant(3).num_terms(), 6);
    }

    #[test]
    fn skew_sum_cases() {
        assert!(skew_sum(2, 0).is_zero());
        assert_eq!(skew_sum(2, 1), discriminant(2));
        assert!(skew_sum(4, 2).is_zero());
    }

    #[test]
    fn extraction_examples() {
        let f = parse_poly("x1 - x2").unwrap();
        let w = extract_discriminant(&f).unwrap();
        assert!(verify_witness(&f, &w));
        assert_eq!(w.n, 2);

        let f = parse_poly("5").unwrap();
        let w = extract_discriminant(&f).unwrap();
        assert_eq!((w.c.clone(), w.n, w.steps.len()), (q(5), 1, 0));
        assert!(verify_witness(&f, &w));

        let f = parse_poly("x1*x2").unwrap();
        let w = extract_discriminant(&f).unwrap();
        assert!(verify_witness(&f, &w));
    }

    #[test]
    fn corrupted_witness_fails() {
        let f = parse_poly("x1 - x2").unwrap();
        let mut w = extract_discriminant(&f).unwrap();
        w.steps[1].group[0].0 += q(1);
        assert!(!verify_witness(&f, &w));
        assert!(extract_discriminant(&SparsePoly::zero()).is_err());
    }

    #[test]
    fn normalizing_perm_is_bijective() {
        let p = normalizing_perm(&[3, 1, 4]);
        assert_eq!((p.apply(3), p.apply(1), p.apply(4)), (1, 2, 3));
        assert_eq!(p.apply(2), 4);
    }
}
