//! Polynomials kept as products of factors.
//!
//! Tableau polynomials are products of many linear forms; their expansions
//! are far too large to store (the generator of shape `(4,4,4)` has 48 linear
//! factors in 12 variables). Generators are therefore carried in factored
//! form and expanded only on request.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_q, Perm, SparsePoly, Var, Q};
use crate::error::Result;

/// `scalar · ∏ factors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPoly {
    scalar: Q,
    factors: Vec<SparsePoly>,
}

impl ProductPoly {
    pub fn constant(c: Q) -> Self {
        ProductPoly {
            scalar: c,
            factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    /// Multiplies by `f` in place. Constant factors are folded into the scalar.
    pub fn push(&mut self, f: SparsePoly) {
        match f.as_constant() {
            Some(c) => self.scalar *= c,
            None => self.factors.push(f),
        }
    }

    pub fn with(mut self, f: SparsePoly) -> Self {
        self.push(f);
        self
    }

    pub fn extend(&mut self, other: &ProductPoly) {
        self.scalar *= &other.scalar;
        self.factors.extend(other.factors.iter().cloned());
    }

    pub fn scalar(&self) -> &Q {
        &self.scalar
    }

    pub fn factors(&self) -> &[SparsePoly] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Multiplies everything out.
    pub fn expand(&self) -> SparsePoly {
        self.factors
            .iter()
            .fold(SparsePoly::constant(self.scalar.clone()), |acc, f| &acc * f)
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        if self.is_zero() {
            return 0;
        }
        self.factors.iter().map(SparsePoly::degree).sum()
    }

    /// Indices of the `ξ` variables occurring in some factor.
    pub fn xi_support(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.factors.iter().flat_map(|f| f.xi_support()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Evaluates at an assignment of every occurring variable.
    pub fn eval(&self, value: impl Fn(Var) -> Option<Q>) -> Q {
        let mut acc = self.scalar.clone();
        for f in &self.factors {
            if acc.is_zero() {
                break;
            }
            acc *= f.eval(&value);
        }
        acc
    }

    pub fn apply_perm(&self, sigma: &Perm) -> ProductPoly {
        ProductPoly {
            scalar: self.scalar.clone(),
            factors: self.factors.iter().map(|f| f.apply_perm(sigma)).collect(),
        }
    }

    /// Renames variables in every factor.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var + Copy) -> ProductPoly {
        ProductPoly {
            scalar: self.scalar.clone(),
            factors: self.factors.iter().map(|g| g.map_vars(f)).collect(),
        }
    }

    /// Parses `c*(x1 - x2)*(x2 - x3)^2`, keeping the top-level factors.
    pub fn parse(s: &str) -> Result<ProductPoly> {
        super::parse::parse_product(s)
    }

    /// Factors made sign-normalized, as a multiset.
    fn normalized_factors(&self) -> BTreeMap<NormKey, usize> {
        let mut m = BTreeMap::new();
        for f in &self.factors {
            *m.entry(NormKey(f.sign_normalized())).or_insert(0) += 1;
        }
        m
    }

    /// Whether `±σ(self) = other` for some permutation `σ` of the `ξ` indices.
    ///
    /// First looks for a relabeling matching the factors one by one up to sign;
    /// if none exists and both expansions are small, compares expansions.
    pub fn equivalent_up_to_relabeling(&self, other: &ProductPoly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let sa = self.xi_support();
        let sb = other.xi_support();
        if sa.len() != sb.len() || self.degree() != other.degree() {
            return false;
        }
        if self.scalar.abs_eq(&other.scalar)
            && self.factors.len() == other.factors.len()
            && self.factor_level_match(other, &sa, &sb)
        {
            return true;
        }
        let cost: usize = self
            .factors
            .iter()
            .chain(&other.factors)
            .map(SparsePoly::num_terms)
            .product();
        if cost > 200_000 || sa.len() > 8 {
            return false;
        }
        let ea = self.expand();
        let eb = other.expand();
        expanded_match(&ea, &eb, &sa, &sb)
    }

    fn factor_level_match(&self, other: &ProductPoly, sa: &[u32], sb: &[u32]) -> bool {
        let target = other.normalized_factors();
        let keys: std::collections::BTreeSet<NormKey> = target.keys().cloned().collect();
        // For each prefix length, the factors whose variables all lie in that prefix.
        let pos: BTreeMap<u32, usize> = sa.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut ready: Vec<Vec<usize>> = vec![Vec::new(); sa.len() + 1];
        for (k, f) in self.factors.iter().enumerate() {
            let last = f.xi_support().iter().map(|v| pos[v] + 1).max().unwrap_or(0);
            ready[last].push(k);
        }
        let mut image = vec![0u32; sa.len()];
        let mut used = vec![false; sb.len()];
        self.relabel_search(0, sa, sb, &mut image, &mut used, &ready, &keys, &target)
    }

    #[allow(clippy::too_many_arguments)]
    fn relabel_search(
        &self,
        depth: usize,
        sa: &[u32],
        sb: &[u32],
        image: &mut Vec<u32>,
        used: &mut Vec<bool>,
        ready: &[Vec<usize>],
        keys: &std::collections::BTreeSet<NormKey>,
        target: &BTreeMap<NormKey, usize>,
    ) -> bool {
        let rename = |image: &[u32], depth: usize, f: &SparsePoly| {
            f.map_vars(|v| match v {
                Var::Xi(i) => match sa[..depth].iter().position(|&a| a == i) {
                    Some(k) => Var::Xi(image[k]),
                    None => v,
                },
                t => t,
            })
            .sign_normalized()
        };
        for &k in &ready[depth] {
            if !keys.contains(&NormKey(rename(image, depth, &self.factors[k]))) {
                return false;
            }
        }
        if depth == sa.len() {
            let mut got: BTreeMap<NormKey, usize> = BTreeMap::new();
            for f in &self.factors {
                *got.entry(NormKey(rename(image, depth, f))).or_insert(0) += 1;
            }
            return &got == target;
        }
        for j in 0..sb.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            image[depth] = sb[j];
            let ok = self.relabel_search(depth + 1, sa, sb, image, used, ready, keys, target);
            used[j] = false;
            if ok {
                return true;
            }
        }
        false
    }
}

/// Sign-normalized factor used as a multiset key.
#[derive(Clone, Debug, PartialEq, Eq)]
struct NormKey(SparsePoly);

impl Ord for NormKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a: Vec<_> = self.0.terms().collect();
        let b: Vec<_> = other.0.terms().collect();
        a.cmp(&b)
    }
}

impl PartialOrd for NormKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn expanded_match(a: &SparsePoly, b: &SparsePoly, sa: &[u32], sb: &[u32]) -> bool {
    let na = a.sign_normalized();
    let nb = b.sign_normalized();
    let mut image = vec![0u32; sa.len()];
    let mut used = vec![false; sb.len()];
    fn rec(
        depth: usize,
        a: &SparsePoly,
        b: &SparsePoly,
        sa: &[u32],
        sb: &[u32],
        image: &mut Vec<u32>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == sa.len() {
            let renamed = a
                .map_vars(|v| match v {
                    Var::Xi(i) => {
                        Var::Xi(image[sa.iter().position(|&x| x == i).expect("in support")])
                    }
                    t => t,
                })
                .sign_normalized();
            return &renamed == b;
        }
        let deg = |p: &SparsePoly, v: u32| {
            p.terms()
                .map(|(m, _)| m.exponent(Var::Xi(v)))
                .max()
                .unwrap_or(0)
        };
        for j in 0..sb.len() {
            if used[j] || deg(a, sa[depth]) != deg(b, sb[j]) {
                continue;
            }
            used[j] = true;
            image[depth] = sb[j];
            let ok = rec(depth + 1, a, b, sa, sb, image, used);
            used[j] = false;
            if ok {
                return true;
            }
        }
        false
    }
    rec(0, &na, &nb, sa, sb, &mut image, &mut used)
}

impl From<SparsePoly> for ProductPoly {
    fn from(p: SparsePoly) -> Self {
        ProductPoly::one().with(p)
    }
}

impl fmt::Display for ProductPoly {
    /// Prints `c*(f1)*(f2)…`; single-term factors are printed without parentheses.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() || self.scalar.is_zero() {
            return write!(f, "{}", fmt_q(&self.scalar));
        }
        let mut parts: Vec<String> = Vec::new();
        if self.scalar == -Q::one() {
            write!(f, "-")?;
        } else if !self.scalar.is_one() {
            parts.push(fmt_q(&self.scalar));
        }
        for g in &self.factors {
            if g.num_terms() == 1 && !g.to_string().starts_with('-') {
                parts.push(g.to_string());
            } else {
                parts.push(format!("({g})"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

trait AbsEq {
    fn abs_eq(&self, other: &Self) -> bool;
}

impl AbsEq for Q {
    fn abs_eq(&self, other: &Q) -> bool {
        self == other || *self == -other.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn pp(s: &str) -> ProductPoly {
        ProductPoly::parse(s).unwrap()
    }

    #[test]
    fn display_and_parse_roundtrip() {
        for s in [
            "(x1 - x2)*(x1 - x3)",
            "-(x1 - x2)*x3",
            "3/2*(x1 - 1)",
            "1",
            "x1*(x1 - 1)",
        ] {
            let p = pp(s);
            assert_eq!(p.to_string(), s);
            assert_eq!(pp(&p.to_string()).expand(), p.expand());
        }
    }

    #[test]
    fn expand_matches_parse_poly() {
        let s = "(x1 - x2)*(x2 - x3)*(x3 - x1)";
        assert_eq!(pp(s).expand(), parse_poly(s).unwrap());
    }

    #[test]
    fn equivalence_up_to_sign_and_relabeling() {
        let a = pp("(x1 - x2)*(x2 - x3)*(x3 - x1)");
        let b = pp("(x4 - x5)*(x4 - x6)*(x5 - x6)");
        assert!(a.equivalent_up_to_relabeling(&b));
        let c = pp("(x1 - x2)*(x1 - x3)");
        assert!(!a.equivalent_up_to_relabeling(&c));
        let d = pp("(x2 - x1)*x1*(x1 - 1)");
        let e = pp("(x1 - x2)*(x2^2 - x2)");
        assert!(d.equivalent_up_to_relabeling(&e));
        let f = pp("(x1 - x2)*(x2^2 - 2*x2)");
        assert!(!d.equivalent_up_to_relabeling(&f));
    }
}
