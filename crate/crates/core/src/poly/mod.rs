//! Exact sparse multivariate polynomials over ℚ.
//!
//! Variables are `ξ_i` (printed `x<i>`) and `t_i` (printed `t<i>`), both
//! indexed from 1. Terms are ordered graded-lexicographically with
//! `ξ_1 > ξ_2 > … > t_1 > t_2 > …`. The symmetric group acts on the `ξ`
//! variables only.

mod discriminant;
mod orbit;
mod parse;
mod product;
mod vanishing;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use discriminant::{
    discriminant, discriminant_of, extract_discriminant, replay, skew_sum, verify_witness,
    ExtractionWitness, GroupRingElement, WitnessStep,
};
pub use orbit::{orbit_evaluations, orbit_nonvanishing, orbit_values_product, twin_classes};
pub use parse::parse_poly;
pub use product::ProductPoly;
pub use vanishing::{quotient_dimension, vanishing_ideal};

/// Exact rational numbers.
pub type Q = BigRational;

/// Builds a rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Builds the rational `n / d`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> crate::Result<Q> {
    let t = s.trim();
    let bad = || crate::Error::Parse(format!("bad rational `{t}`"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// A polynomial variable.
///
/// The derived order lists variables from most to least significant for the
/// lexicographic tie-break: `Xi(1) < Xi(2) < … < T(1) < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Xi(u32),
    T(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Xi(i) => write!(f, "x{i}"),
            Var::T(i) => write!(f, "t{i}"),
        }
    }
}

/// A monomial: variables with positive exponents, sorted by [`Var`] order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs, merging repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    fn map_vars(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl Ord for Monomial {
    /// Graded-lex: higher total degree is larger; ties are broken by the
    /// exponent of the most significant variable where the two differ.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return std::cmp::Ordering::Equal,
                    (Some(_), None) => return std::cmp::Ordering::Greater,
                    (None, Some(_)) => return std::cmp::Ordering::Less,
                    (Some(&(va, ea)), Some(&(vb, eb))) => {
                        if va < vb {
                            return std::cmp::Ordering::Greater;
                        }
                        if vb < va {
                            return std::cmp::Ordering::Less;
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A finitely supported permutation of the positive integers.
///
/// Stored as the images of `1..=n`; every index above `n` is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity() -> Self {
        Perm { images: Vec::new() }
    }

    /// Builds a permutation from the images of `1..=n`.
    ///
    /// Panics if the images are not a permutation of `1..=n`.
    pub fn from_images(images: Vec<u32>) -> Self {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        assert!(
            sorted.iter().enumerate().all(|(i, &v)| v == i as u32 + 1),
            "not a permutation: {images:?}"
        );
        let mut p = Perm { images };
        p.trim();
        p
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(a: u32, b: u32) -> Self {
        Self::from_map(&[(a, b), (b, a)])
    }

    /// Builds a permutation from explicit `i ↦ σ(i)` pairs; unlisted indices are fixed.
    pub fn from_map(pairs: &[(u32, u32)]) -> Self {
        let n = pairs.iter().flat_map(|&(a, b)| [a, b]).max().unwrap_or(0);
        let mut images: Vec<u32> = (1..=n).collect();
        for &(a, b) in pairs {
            images[a as usize - 1] = b;
        }
        Self::from_images(images)
    }

    /// Cycle notation, e.g. `&[&[1, 2, 3]]` for `1 ↦ 2 ↦ 3 ↦ 1`.
    pub fn from_cycles(cycles: &[&[u32]]) -> Self {
        let mut pairs = Vec::new();
        for c in cycles {
            for k in 0..c.len() {
                pairs.push((c[k], c[(k + 1) % c.len()]));
            }
        }
        Self::from_map(&pairs)
    }

    fn trim(&mut self) {
        while let Some(&last) = self.images.last() {
            if last as usize == self.images.len() {
                self.images.pop();
            } else {
                break;
            }
        }
    }

    pub fn apply(&self, i: u32) -> u32 {
        if i >= 1 && (i as usize) <= self.images.len() {
            self.images[i as usize - 1]
        } else {
            i
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_empty()
    }

    /// Indices moved by the permutation.
    pub fn support(&self) -> Vec<u32> {
        (1..=self.images.len() as u32)
            .filter(|&i| self.apply(i) != i)
            .collect()
    }

    pub fn sign(&self) -> i64 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut sign = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start + 1 {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i] as usize - 1;
            }
            write!(
                f,
                "({})",
                cycle
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            )?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A sparse polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, Q>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = SparsePoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn var(v: Var) -> Self {
        let mut p = SparsePoly::zero();
        p.add_term(Monomial::var(v), Q::one());
        p
    }

    pub fn xi(i: u32) -> Self {
        Self::var(Var::Xi(i))
    }

    pub fn t(i: u32) -> Self {
        Self::var(Var::T(i))
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = SparsePoly::zero();
        p.add_term(m, c);
        p
    }

    /// Adds `c · m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Coefficient of the given monomial.
    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Variables with a nonzero exponent somewhere.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect()
    }

    /// Indices of the `ξ` variables that occur.
    pub fn xi_support(&self) -> Vec<u32> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Xi(i) => Some(i),
                Var::T(_) => None,
            })
            .collect()
    }

    pub fn scale(&self, c: &Q) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut out = SparsePoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Renames variables; distinct variables may be merged.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(&f), c.clone());
        }
        out
    }

    /// Substitutes polynomials for variables; unmapped variables stay.
    pub fn substitute(&self, f: impl Fn(Var) -> Option<SparsePoly>) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            let mut term = SparsePoly::constant(c.clone());
            for &(v, e) in &m.0 {
                let base = f(v).unwrap_or_else(|| SparsePoly::var(v));
                term = &term * &base.pow(e);
            }
            out = &out + &term;
        }
        out
    }

    /// Evaluates with every variable assigned by `value`.
    ///
    /// Panics if a variable is unassigned.
    pub fn eval(&self, value: impl Fn(Var) -> Option<Q>) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = value(v).unwrap_or_else(|| panic!("unassigned variable {v}"));
                t *= num_traits::pow(x, e as usize);
            }
            total += t;
        }
        total
    }

    /// Applies `σ` to the `ξ` variables: `ξ_i ↦ ξ_{σ(i)}`.
    pub fn apply_perm(&self, sigma: &Perm) -> SparsePoly {
        if sigma.is_identity() {
            return self.clone();
        }
        self.map_vars(|v| match v {
            Var::Xi(i) => Var::Xi(sigma.apply(i)),
            t => t,
        })
    }

    /// The polynomial as a univariate polynomial in `v`: coefficient of `v^k`
    /// at index `k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<SparsePoly> {
        let d = self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0) as usize;
        let mut out = vec![SparsePoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(v) as usize;
            let rest = Monomial(m.0.iter().copied().filter(|&(w, _)| w != v).collect());
            out[k].add_term(rest, c.clone());
        }
        out
    }

    /// Rescales so that the leading coefficient is positive.
    pub fn sign_normalized(&self) -> SparsePoly {
        match self.leading() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Rescales so that the leading coefficient is one.
    pub fn monic(&self) -> SparsePoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Q::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        SparsePoly { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $f(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}

impl fmt::Display for SparsePoly {
    /// Prints terms from the leading one down, e.g. `x1^2*x2 - x2 + 3/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_q(&a))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> SparsePoly {
        SparsePoly::xi(i)
    }

    #[test]
    fn grlex_order() {
        let m = |pairs: &[(u32, u32)]| {
            Monomial::from_pairs(pairs.iter().map(|&(i, e)| (Var::Xi(i), e)))
        };
        assert!(m(&[(1, 1)]) > m(&[(2, 1)]));
        assert!(m(&[(2, 2)]) > m(&[(1, 1)]));
        assert!(m(&[(1, 1), (2, 1)]) > m(&[(2, 2)]));
        assert!(m(&[(1, 2)]) > m(&[(1, 1), (2, 1)]));
        assert!(Monomial::var(Var::Xi(5)) > Monomial::var(Var::T(1)));
    }

    #[test]
    fn display_canonical() {
        let p = &(&x(1).pow(2) * &x(2)) - &x(2);
        let p = &p + &SparsePoly::constant(qf(3, 2));
        assert_eq!(p.to_string(), "x1^2*x2 - x2 + 3/2");
        assert_eq!(SparsePoly::zero().to_string(), "0");
        assert_eq!((-&x(3)).to_string(), "-x3");
    }

    #[test]
    fn perm_action() {
        let p = &x(1) - &x(2);
        assert_eq!(p.apply_perm(&Perm::transposition(1, 2)), -&p);
        let q1 = &x(1) * &x(2).pow(2);
        let q2 = &x(2) * &x(3).pow(2);
        assert_eq!(q1.apply_perm(&Perm::from_cycles(&[&[1, 2, 3]])), q2);
        assert_eq!(q1.apply_perm(&Perm::identity()), q1);
    }

    #[test]
    fn perm_sign_and_display() {
        assert_eq!(Perm::transposition(2, 5).sign(), -1);
        assert_eq!(Perm::from_cycles(&[&[1, 2, 3]]).sign(), 1);
        assert_eq!(Perm::from_cycles(&[&[1, 2, 3]]).to_string(), "(1 2 3)");
        assert_eq!(Perm::identity().to_string(), "()");
        assert!(Perm::from_images(vec![1, 2, 3]).is_identity());
    }

    #[test]
    fn coefficients_in_variable() {
        let p = &(&x(1) * &x(3).pow(2)) + &x(3);
        let cs = p.coefficients_in(Var::Xi(3));
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], x(1));
        assert_eq!(cs[1], SparsePoly::one());
        assert!(cs[0].is_zero());
    }

    #[test]
    fn rationals_roundtrip() {
        for s in ["0", "-3", "7/2", "-1/5"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("a").is_err());
    }
}
