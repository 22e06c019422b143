//! Generalized partitions and compositions with weights in ℕ ∪ {∞}.
//!
//! A generalized partition is a finite non-increasing sequence of positive
//! weights, some of which may be infinite. This module provides the two
//! orders on such partitions (`leq`, the componentwise order, and `preceq`,
//! the order generated by combining and decreasing parts), the filling
//! criterion for `preceq`, the minimal excluded antichain of an
//! ∞-partition, and the truncation operators used by the equation
//! synthesis.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A natural number or infinity.
///
/// The derived order places every finite value below `Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);
    pub const ONE: ExtNat = ExtNat::Fin(1);

    pub fn is_inf(self) -> bool {
        matches!(self, ExtNat::Inf)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    /// `self - rhs`, with `∞ - n = ∞` and `∞ - ∞ = 0`.
    ///
    /// Panics if `rhs` is larger than `self`.
    pub fn saturating_residue(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Inf, ExtNat::Inf) => ExtNat::ZERO,
            (ExtNat::Inf, ExtNat::Fin(_)) => ExtNat::Inf,
            (ExtNat::Fin(a), ExtNat::Fin(b)) => {
                assert!(b <= a, "residue of {a} by {b}");
                ExtNat::Fin(a - b)
            }
            (ExtNat::Fin(_), ExtNat::Inf) => panic!("residue of a finite weight by infinity"),
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Inf,
        }
    }
}

impl std::iter::Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(ExtNat::ZERO, |a, b| a + b)
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(ExtNat::Inf);
        }
        t.parse::<u64>()
            .map(ExtNat::Fin)
            .map_err(|_| Error::Parse(format!("expected a natural number or `inf`, got `{t}`")))
    }
}

/// A non-increasing finite sequence of positive [`ExtNat`] weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenPartition {
    parts: Vec<ExtNat>,
}

impl GenPartition {
    /// The empty partition.
    pub fn empty() -> Self {
        GenPartition { parts: Vec::new() }
    }

    /// Builds a partition from arbitrary weights by sorting and dropping zeros.
    pub fn new(parts: impl IntoIterator<Item = ExtNat>) -> Self {
        canonicalize(parts)
    }

    /// Shorthand for a partition with only finite parts.
    pub fn finite(parts: &[u64]) -> Self {
        canonicalize(parts.iter().map(|&p| ExtNat::Fin(p)))
    }

    pub fn parts(&self) -> &[ExtNat] {
        &self.parts
    }

    /// Number of parts, ℓ(λ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn infinite_count(&self) -> usize {
        self.parts.iter().filter(|p| p.is_inf()).count()
    }

    pub fn has_infinite_part(&self) -> bool {
        self.infinite_count() > 0
    }

    pub fn is_finite(&self) -> bool {
        !self.has_infinite_part()
    }

    /// Sum of the finite parts, written e(λ).
    pub fn finite_sum(&self) -> u64 {
        self.parts.iter().filter_map(|p| p.finite()).sum()
    }

    /// Total weight |λ|.
    pub fn total(&self) -> ExtNat {
        self.parts.iter().copied().sum()
    }

    /// The composition on labels `1..=ℓ(λ)` with the parts as weights.
    pub fn to_composition(&self) -> GenComposition {
        GenComposition {
            weights: self.parts.clone(),
        }
    }
}

impl fmt::Display for GenPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        write!(f, "{}", self.parts.iter().join(","))
    }
}

impl FromStr for GenPartition {
    type Err = Error;

    /// Parses `inf,inf,3,2`; the empty partition is `()` or the empty string.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|u| u.strip_suffix(')'))
            .unwrap_or(t);
        if t.trim().is_empty() {
            return Ok(GenPartition::empty());
        }
        let parts = t
            .split(',')
            .map(ExtNat::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(canonicalize(parts))
    }
}

/// Sorts weights non-increasingly and removes zeros.
pub fn canonicalize(parts: impl IntoIterator<Item = ExtNat>) -> GenPartition {
    let mut parts: Vec<ExtNat> = parts.into_iter().filter(|&p| p != ExtNat::ZERO).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    GenPartition { parts }
}

/// A weighting of the labels `1..=r` by positive [`ExtNat`] values.
///
/// Labels are stored zero-based; label `i` in the mathematical sense is
/// index `i - 1` of `weights`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenComposition {
    weights: Vec<ExtNat>,
}

impl GenComposition {
    /// Builds a composition, rejecting zero weights.
    pub fn new(weights: Vec<ExtNat>) -> Result<Self> {
        if weights.contains(&ExtNat::ZERO) {
            return Err(Error::Parse(
                "composition weights must be positive".to_string(),
            ));
        }
        Ok(GenComposition { weights })
    }

    pub fn weights(&self) -> &[ExtNat] {
        &self.weights
    }

    pub fn weight(&self, label: usize) -> ExtNat {
        self.weights[label]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        self.weights.iter().any(|w| w.is_inf())
    }

    pub fn total(&self) -> ExtNat {
        self.weights.iter().copied().sum()
    }

    pub fn finite_sum(&self) -> u64 {
        self.weights.iter().filter_map(|w| w.finite()).sum()
    }

    pub fn shape(&self) -> GenPartition {
        canonicalize(self.weights.iter().copied())
    }
}

impl fmt::Display for GenComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.weights.iter().join(","))
    }
}

/// A tableau: rows of distinct positive integer labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    rows: Vec<Vec<u32>>,
}

impl Tableau {
    /// Validates global distinctness of labels and non-increasing row lengths.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for row in &rows {
            for &x in row {
                if x == 0 || !seen.insert(x) {
                    return Err(Error::Parse(format!("tableau label {x} repeated or zero")));
                }
            }
        }
        if rows.windows(2).any(|w| w[0].len() < w[1].len()) {
            return Err(Error::Parse("tableau rows must be non-increasing".into()));
        }
        Ok(Tableau { rows })
    }

    /// Rows filled row-major with consecutive labels starting at 1.
    ///
    /// Panics if `shape` has an infinite part.
    pub fn canonical(shape: &GenPartition) -> Self {
        let mut next = 1u32;
        let rows = shape
            .parts()
            .iter()
            .map(|p| {
                let len = p.finite().expect("tableau shapes are finite") as u32;
                let row: Vec<u32> = (next..next + len).collect();
                next += len;
                row
            })
            .collect();
        Tableau { rows }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> GenPartition {
        GenPartition::finite(&self.rows.iter().map(|r| r.len() as u64).collect::<Vec<_>>())
    }

    pub fn labels(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().flatten().copied()
    }
}

/// Componentwise order: `μ` is obtained from `λ` by decreasing or removing parts.
pub fn leq(mu: &GenPartition, lambda: &GenPartition) -> bool {
    mu.len() <= lambda.len() && mu.parts.iter().zip(&lambda.parts).all(|(m, l)| m <= l)
}

/// The order generated by combining, decreasing and removing parts.
///
/// Decides whether disjoint groups of parts of `λ` can be found, one per
/// part of `μ`, each summing to at least the corresponding part.
pub fn preceq(mu: &GenPartition, lambda: &GenPartition) -> bool {
    if mu.len() > lambda.len() {
        return false;
    }
    let mut used = vec![false; lambda.len()];
    group_search(&mu.parts, &lambda.parts, &mut used)
}

fn group_search(mu: &[ExtNat], lambda: &[ExtNat], used: &mut [bool]) -> bool {
    let Some((&target, rest)) = mu.split_first() else {
        return true;
    };
    let free: Vec<usize> = (0..lambda.len()).filter(|&i| !used[i]).collect();
    if free.len() < mu.len() {
        return false;
    }
    // Only minimal groups are tried: dropping any member would leave the sum
    // short of the target. Any feasible grouping can be shrunk to such a one.
    for size in 1..=free.len() - rest.len() {
        for group in free.iter().copied().combinations(size) {
            let sum: ExtNat = group.iter().map(|&i| lambda[i]).sum();
            if sum < target {
                continue;
            }
            let minimal = group.iter().all(|&skip| {
                let s: ExtNat = group
                    .iter()
                    .filter(|&&i| i != skip)
                    .map(|&i| lambda[i])
                    .sum();
                s < target
            });
            if !minimal {
                continue;
            }
            for &i in &group {
                used[i] = true;
            }
            let ok = group_search(rest, lambda, used);
            for &i in &group {
                used[i] = false;
            }
            if ok {
                return true;
            }
        }
    }
    false
}

/// Whether a tableau of shape `μ` admits a good `λ`-filling.
///
/// Entry `i` may appear at most `λ_i` times and in at most one row. Rows of
/// `μ` longer than `e(λ) + 1` are truncated to that length: such a row must
/// contain an entry of infinite multiplicity, which can then fill the rest.
pub fn good_filling_exists(mu: &GenPartition, lambda: &GenPartition) -> bool {
    let cap = lambda.finite_sum() + 1;
    let rows: Vec<u64> = mu
        .parts
        .iter()
        .map(|p| match p {
            ExtNat::Fin(n) => (*n).min(cap),
            ExtNat::Inf => cap,
        })
        .collect();
    let capacity: Vec<Option<u64>> = lambda.parts.iter().map(|p| p.finite()).collect();
    let mut state = FillState {
        remaining: capacity,
        owner: vec![None; lambda.len()],
    };
    fill_row(&rows, 0, &mut state)
}

struct FillState {
    /// Remaining uses of each entry; `None` for entries of infinite multiplicity.
    remaining: Vec<Option<u64>>,
    /// The row an entry has been placed in, if any.
    owner: Vec<Option<usize>>,
}

fn fill_row(rows: &[u64], row: usize, st: &mut FillState) -> bool {
    if row == rows.len() {
        return true;
    }
    fill_cells(rows, row, rows[row], 0, st)
}

/// Fills the remaining `left` cells of `row` with entries `>= min_entry`
/// (entries within a row are kept non-decreasing).
fn fill_cells(rows: &[u64], row: usize, left: u64, min_entry: usize, st: &mut FillState) -> bool {
    if left == 0 {
        return fill_row(rows, row + 1, st);
    }
    // Capacity still reachable by this row from entries >= min_entry.
    let mut reachable: u64 = 0;
    for i in min_entry..st.remaining.len() {
        if st.owner[i].is_some_and(|o| o != row) {
            continue;
        }
        match st.remaining[i] {
            None => {
                reachable = u64::MAX;
                break;
            }
            Some(r) => reachable += r,
        }
    }
    if reachable < left {
        return false;
    }
    for i in min_entry..st.remaining.len() {
        if st.owner[i].is_some_and(|o| o != row) || st.remaining[i] == Some(0) {
            continue;
        }
        let previous_owner = st.owner[i];
        st.owner[i] = Some(row);
        if let Some(r) = st.remaining[i].as_mut() {
            *r -= 1;
        }
        let ok = fill_cells(rows, row, left - 1, i, st);
        if let Some(r) = st.remaining[i].as_mut() {
            *r += 1;
        }
        st.owner[i] = previous_owner;
        if ok {
            return true;
        }
    }
    false
}

/// All finite partitions with at most `max_len` parts, each in `1..=max_part`,
/// including the empty partition, in lexicographic order of part vectors.
pub fn partitions_in_box(max_len: usize, max_part: u64) -> Vec<GenPartition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    box_rec(max_len, max_part, &mut current, &mut out);
    out
}

fn box_rec(max_len: usize, bound: u64, current: &mut Vec<ExtNat>, out: &mut Vec<GenPartition>) {
    out.push(GenPartition {
        parts: current.clone(),
    });
    if current.len() == max_len {
        return;
    }
    for p in 1..=bound {
        current.push(ExtNat::Fin(p));
        box_rec(max_len, p, current, out);
        current.pop();
    }
}

/// The `⪯`-minimal finite partitions `α` with `α ⋠ λ`.
///
/// The search runs over partitions with at most `ℓ(λ) + 1` parts, each at
/// most `e(λ) + 1`. A minimal excluded partition never leaves this box:
/// dropping a part from one with more parts, or lowering an oversized part to
/// `e(λ) + 1`, yields a smaller excluded partition.
pub fn min_excluded(lambda: &GenPartition) -> Result<Vec<GenPartition>> {
    if !lambda.has_infinite_part() {
        return Err(Error::NoInfinitePart(lambda.to_string()));
    }
    let excluded: Vec<GenPartition> = partitions_in_box(lambda.len() + 1, lambda.finite_sum() + 1)
        .into_iter()
        .filter(|a| !preceq(a, lambda))
        .collect();
    let mut minimal: Vec<GenPartition> = excluded
        .iter()
        .filter(|a| !excluded.iter().any(|b| b != *a && preceq(b, a)))
        .cloned()
        .collect();
    minimal.sort_by(partition_display_order);
    Ok(minimal)
}

/// Orders partitions by length descending, then by parts ascending, which lists
/// `(1,1,1,1,1), (2,2,2,2), (3,3,3,1), (4,4,4)` in that order.
pub fn partition_display_order(a: &GenPartition, b: &GenPartition) -> Ordering {
    b.len().cmp(&a.len()).then_with(|| a.parts.cmp(&b.parts))
}

/// Lowers every part larger than `e + 1` to `e + 1`.
pub fn mu_minus(mu: &GenPartition, e: u64) -> GenPartition {
    let cap = ExtNat::Fin(e + 1);
    canonicalize(mu.parts.iter().map(|&p| p.min(cap)))
}

/// Raises every part equal to `e + 1` to infinity.
pub fn mu_s(mu: &GenPartition, e: u64) -> Result<GenPartition> {
    let cap = ExtNat::Fin(e + 1);
    if let Some(bad) = mu.parts.iter().find(|&&p| !p.is_inf() && p > cap) {
        return Err(Error::PartTooLarge {
            partition: mu.to_string(),
            part: bad.to_string(),
            bound: e + 1,
        });
    }
    Ok(canonicalize(mu.parts.iter().map(|&p| {
        if p == cap {
            ExtNat::Inf
        } else {
            p
        }
    })))
}

/// The set `{ μ⁻ : μ ≤ λ }` of truncations, without the empty partition.
pub fn lambda_minus_set(lambda: &GenPartition) -> Result<Vec<GenPartition>> {
    if !lambda.has_infinite_part() {
        return Err(Error::NoInfinitePart(lambda.to_string()));
    }
    let e = lambda.finite_sum();
    let bounds: Vec<u64> = lambda
        .parts
        .iter()
        .map(|&p| p.min(ExtNat::Fin(e + 1)).finite().unwrap_or(e + 1))
        .collect();
    let set: BTreeSet<GenPartition> = bounds
        .iter()
        .map(|&b| 0..=b)
        .multi_cartesian_product()
        .map(|v| mu_minus(&GenPartition::finite(&v), e))
        .filter(|p| !p.is_empty())
        .collect();
    let mut out: Vec<GenPartition> = set.into_iter().collect();
    out.sort_by(partition_display_order);
    Ok(out)
}

/// The finite partitions `α ⪯ λ` with every part at most `e(λ) + 1`, without the
/// empty partition. These are exactly the truncations `ν⁻` of all `ν ⪯ λ`.
pub fn preceq_minus_set(lambda: &GenPartition) -> Vec<GenPartition> {
    let e = lambda.finite_sum();
    let mut out: Vec<GenPartition> = partitions_in_box(lambda.len(), e + 1)
        .into_iter()
        .filter(|a| !a.is_empty() && preceq(a, lambda))
        .collect();
    out.sort_by(partition_display_order);
    out
}

/// Weight-preserving permutations of the labels of `λ`, as image vectors
/// (`perm[i]` is the image of label `i`), in lexicographic order.
pub fn aut(lambda: &GenComposition) -> Vec<Vec<usize>> {
    let n = lambda.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    aut_rec(lambda, 0, &mut perm, &mut taken, &mut out);
    out
}

fn aut_rec(
    lambda: &GenComposition,
    i: usize,
    perm: &mut Vec<usize>,
    taken: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == lambda.len() {
        out.push(perm.clone());
        return;
    }
    for j in 0..lambda.len() {
        if !taken[j] && lambda.weight(j) == lambda.weight(i) {
            taken[j] = true;
            perm[i] = j;
            aut_rec(lambda, i + 1, perm, taken, out);
            taken[j] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> GenPartition {
        s.parse().unwrap()
    }

    #[test]
    fn canonicalize_sorts_and_drops_zeros() {
        let c = canonicalize([3u64.into(), ExtNat::Inf, 0u64.into(), 2u64.into()]);
        assert_eq!(c, p("inf,3,2"));
        assert_eq!(canonicalize([]), GenPartition::empty());
        assert_eq!(p("inf,inf").to_string(), "inf,inf");
    }

    #[test]
    fn accessors() {
        let l = p("inf,inf,3,2");
        assert_eq!(l.len(), 4);
        assert_eq!(l.infinite_count(), 2);
        assert_eq!(l.finite_sum(), 5);
        assert_eq!(l.total(), ExtNat::Inf);
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&p("2"), &p("inf,1")));
        assert!(!leq(&p("inf"), &p("3")));
        assert!(leq(&GenPartition::empty(), &p("4,1")));
    }

    #[test]
    fn preceq_examples() {
        assert!(!preceq(&p("4,4,4"), &p("inf,inf,2,1")));
        assert!(preceq(&p("inf,inf,2,1"), &p("inf,inf,2,1")));
        assert!(!preceq(&p("2,2"), &p("inf,1")));
        assert!(preceq(&p("inf,2"), &p("inf,1,1")));
        assert!(preceq(&p("3"), &p("1,1,1")));
    }

    #[test]
    fn filling_examples() {
        assert!(!good_filling_exists(&p("2,2"), &p("inf,1")));
        assert!(good_filling_exists(&p("inf,3,2"), &p("inf,inf,3,2")));
        assert!(good_filling_exists(&GenPartition::empty(), &p("1")));
    }

    #[test]
    fn min_excluded_examples() {
        assert_eq!(
            min_excluded(&p("inf,1")).unwrap(),
            vec![p("1,1,1"), p("2,2")]
        );
        assert_eq!(
            min_excluded(&p("inf,inf,2,1")).unwrap(),
            vec![p("1,1,1,1,1"), p("2,2,2,2"), p("3,3,3,1"), p("4,4,4")]
        );
        assert_eq!(min_excluded(&p("inf")).unwrap(), vec![p("1,1")]);
        assert!(matches!(
            min_excluded(&p("3,1")),
            Err(Error::NoInfinitePart(_))
        ));
    }

    #[test]
    fn truncations() {
        assert_eq!(mu_minus(&p("inf,3,1"), 2), p("3,3,1"));
        assert_eq!(mu_minus(&p("2,1"), 2), p("2,1"));
        assert_eq!(mu_minus(&p("inf,inf"), 0), p("1,1"));
        assert_eq!(mu_s(&p("3,3,1"), 2).unwrap(), p("inf,inf,1"));
        assert_eq!(mu_s(&p("1"), 2).unwrap(), p("1"));
        assert_eq!(mu_s(&p("1,1"), 0).unwrap(), p("inf,inf"));
        assert!(mu_s(&p("4"), 2).is_err());
    }

    #[test]
    fn lambda_minus_examples() {
        assert_eq!(
            lambda_minus_set(&p("inf,inf")).unwrap(),
            vec![p("1,1"), p("1")]
        );
        assert_eq!(lambda_minus_set(&p("inf")).unwrap(), vec![p("1")]);
        let mut got = lambda_minus_set(&p("inf,1")).unwrap();
        got.sort();
        let mut want = vec![p("2"), p("2,1"), p("1"), p("1,1")];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn aut_examples() {
        assert_eq!(aut(&p("inf,inf").to_composition()).len(), 2);
        assert_eq!(aut(&p("inf,3").to_composition()).len(), 1);
        assert_eq!(aut(&p("inf,2,2,1").to_composition()).len(), 2);
    }

    #[test]
    fn tableau_canonical() {
        let t = Tableau::canonical(&p("3,2"));
        assert_eq!(t.rows(), &[vec![1, 2, 3], vec![4, 5]]);
        assert_eq!(t.shape(), p("3,2"));
        assert!(Tableau::new(vec![vec![1, 2], vec![2]]).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["inf,inf,3,2", "()", "5", "inf"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("inf,x".parse::<GenPartition>().is_err());
    }
}
