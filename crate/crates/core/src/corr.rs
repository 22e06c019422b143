//! Maps of generalized compositions and correspondences between them.
//!
//! A map `f: λ → μ` is a function on labels whose fibers have total weight at
//! most the weight of their image. A correspondence `λ ⇢ μ` is a pair
//! `(f₁: ρ ↠ λ, f₂: ρ → μ)` with `f₁` a principal surjection; it acts on point
//! sets of `μ` by pushing forward along `f₂` and pulling back along `f₁`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::partitions::{ExtNat, GenComposition};

/// A weight-respecting function between the label sets of two compositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompMap {
    domain: GenComposition,
    codomain: GenComposition,
    table: Vec<usize>,
}

impl CompMap {
    /// Validates the table and the weight condition.
    pub fn new(
        domain: GenComposition,
        codomain: GenComposition,
        table: Vec<usize>,
    ) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::InvalidMap(format!(
                "table has {} entries for {} labels",
                table.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&j| j >= codomain.len()) {
            return Err(Error::InvalidMap(format!("label {} out of range", bad + 1)));
        }
        let f = CompMap {
            domain,
            codomain,
            table,
        };
        let push = f.pushforward();
        for (j, w) in push.iter().enumerate() {
            if *w > f.codomain.weight(j) {
                return Err(Error::InvalidMap(format!(
                    "fiber over label {} has weight {} > {}",
                    j + 1,
                    w,
                    f.codomain.weight(j)
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(lambda: &GenComposition) -> Self {
        CompMap {
            domain: lambda.clone(),
            codomain: lambda.clone(),
            table: (0..lambda.len()).collect(),
        }
    }

    pub fn domain(&self) -> &GenComposition {
        &self.domain
    }

    pub fn codomain(&self) -> &GenComposition {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// Labels of the domain mapping to `j`.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.table.len())
            .filter(|&i| self.table[i] == j)
            .collect()
    }

    /// Fiber weights per codomain label; empty fibers have weight zero.
    pub fn pushforward(&self) -> Vec<ExtNat> {
        let mut w = vec![ExtNat::ZERO; self.codomain.len()];
        for (i, &j) in self.table.iter().enumerate() {
            w[j] = w[j] + self.domain.weight(i);
        }
        w
    }

    pub fn is_principal_surjection(&self) -> bool {
        self.pushforward().as_slice() == self.codomain.weights()
    }

    pub fn is_injection(&self) -> bool {
        let set: BTreeSet<usize> = self.table.iter().copied().collect();
        set.len() == self.table.len()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &CompMap) -> Result<CompMap> {
        if self.codomain != other.domain {
            return Err(Error::Incompatible(format!(
                "{} vs {}",
                self.codomain, other.domain
            )));
        }
        CompMap::new(
            self.domain.clone(),
            other.codomain.clone(),
            self.table.iter().map(|&j| other.table[j]).collect(),
        )
    }
}

/// Factors `f = g ∘ h` with `h` a principal surjection onto the image weights
/// and `g` an injection.
pub fn factor(f: &CompMap) -> (CompMap, CompMap) {
    let push = f.pushforward();
    let image: Vec<usize> = (0..push.len())
        .filter(|&j| push[j] != ExtNat::ZERO)
        .collect();
    let mid = GenComposition::new(image.iter().map(|&j| push[j]).collect())
        .expect("image weights are positive");
    let h_table = f
        .table
        .iter()
        .map(|j| image.iter().position(|k| k == j).expect("in image"))
        .collect();
    let h = CompMap::new(f.domain.clone(), mid.clone(), h_table).expect("principal surjection");
    let g = CompMap::new(mid, f.codomain.clone(), image).expect("injection");
    (h, g)
}

/// The output of [`pullback_square`]: `f₁ ∘ g₁ = f₂ ∘ g₂`.
#[derive(Clone, Debug)]
pub struct PullbackSquare {
    pub wmu: GenComposition,
    pub g1: CompMap,
    pub g2: CompMap,
}

/// Builds `μ̃` with maps `g₁: μ̃ → μ¹`, `g₂: μ̃ → μ²` closing the square over
/// `f₁: μ¹ → μ`, `f₂: μ² → μ`.
///
/// Works one codomain fiber at a time. If the `μ²` side is a single part that
/// can absorb all of the `μ¹` side, the `μ¹` parts are copied over. Otherwise
/// the largest remaining parts `a` of `μ¹` and `b` of `μ²` produce a part
/// `min(a, b)` of `μ̃` mapped to both; the two are reduced by that amount and
/// the process repeats, except that an infinite `b` matched with an infinite
/// `a` stays infinite. It stops when the smaller of the two is the last part
/// of its side, which then becomes the last part of `μ̃`. If `f₂` is a principal surjection so is
/// `g₁`, and if `f₂` is an injection so is `g₁`.
pub fn pullback_square(f1: &CompMap, f2: &CompMap) -> Result<PullbackSquare> {
    if f1.codomain != f2.codomain {
        return Err(Error::Incompatible(format!(
            "codomains {} and {}",
            f1.codomain, f2.codomain
        )));
    }
    let mut weights = Vec::new();
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    for j in 0..f1.codomain.len() {
        let a: Vec<(ExtNat, usize)> = f1
            .fiber(j)
            .into_iter()
            .map(|i| (f1.domain.weight(i), i))
            .collect();
        let b: Vec<(ExtNat, usize)> = f2
            .fiber(j)
            .into_iter()
            .map(|i| (f2.domain.weight(i), i))
            .collect();
        if a.is_empty() || b.is_empty() {
            continue;
        }
        for (w, l1, l2) in pullback_fiber(a, b) {
            weights.push(w);
            t1.push(l1);
            t2.push(l2);
        }
    }
    let wmu = GenComposition::new(weights).expect("positive parts");
    let g1 = CompMap::new(wmu.clone(), f1.domain.clone(), t1)?;
    let g2 = CompMap::new(wmu.clone(), f2.domain.clone(), t2)?;
    Ok(PullbackSquare { wmu, g1, g2 })
}

/// Sorts parts largest first, ties by label.
fn sort_parts(v: &mut [(ExtNat, usize)]) {
    v.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
}

fn pullback_fiber(
    mut a: Vec<(ExtNat, usize)>,
    mut b: Vec<(ExtNat, usize)>,
) -> Vec<(ExtNat, usize, usize)> {
    let mut out = Vec::new();
    loop {
        sort_parts(&mut a);
        sort_parts(&mut b);
        let (a1, la) = a[0];
        let (b1, lb) = b[0];
        if b.len() == 1 && a.iter().map(|p| p.0).sum::<ExtNat>() <= b1 {
            out.extend(a.iter().map(|&(w, l)| (w, l, lb)));
            return out;
        }
        let w = a1.min(b1);
        if w == a1 && a.len() == 1 {
            out.push((w, la, lb));
            return out;
        }
        if w == b1 && b.len() == 1 {
            out.push((w, la, lb));
            return out;
        }
        out.push((w, la, lb));
        a[0].0 = a1.saturating_residue(w);
        if !(a1.is_inf() && b1.is_inf()) {
            b[0].0 = b1.saturating_residue(w);
        }
        a.retain(|p| p.0 != ExtNat::ZERO);
        b.retain(|p| p.0 != ExtNat::ZERO);
    }
}

/// A correspondence `target ⇢ source`: `f1: ρ ↠ target`, `f2: ρ → source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correspondence {
    f1: CompMap,
    f2: CompMap,
}

impl Correspondence {
    pub fn new(f1: CompMap, f2: CompMap) -> Result<Self> {
        if f1.domain != f2.domain {
            return Err(Error::Incompatible(
                "the two legs have different domains".into(),
            ));
        }
        if !f1.is_principal_surjection() {
            return Err(Error::InvalidMap(
                "first leg is not a principal surjection".into(),
            ));
        }
        Ok(Correspondence { f1, f2 })
    }

    pub fn identity(lambda: &GenComposition) -> Self {
        Correspondence {
            f1: CompMap::identity(lambda),
            f2: CompMap::identity(lambda),
        }
    }

    /// The correspondence `(id, f)` induced by a map `f: λ → μ`.
    pub fn from_map(f: &CompMap) -> Self {
        Correspondence {
            f1: CompMap::identity(&f.domain),
            f2: f.clone(),
        }
    }

    pub fn rho(&self) -> &GenComposition {
        &self.f1.domain
    }

    pub fn f1(&self) -> &CompMap {
        &self.f1
    }

    pub fn f2(&self) -> &CompMap {
        &self.f2
    }

    pub fn target(&self) -> &GenComposition {
        &self.f1.codomain
    }

    pub fn source(&self) -> &GenComposition {
        &self.f2.codomain
    }

    /// Fibers of `f1` bounded by `ℓ(source)`, and singletons over labels
    /// heavier than the finite part sum of the source.
    pub fn is_good(&self) -> bool {
        let e = ExtNat::Fin(self.source().finite_sum());
        let l = self.source().len();
        (0..self.target().len()).all(|i| {
            let size = self.f1.fiber(i).len();
            size <= l && (self.target().weight(i) <= e || size == 1)
        })
    }

    /// Per target label, the sorted `(weight, source label)` pairs of its fiber.
    pub fn canonical_form(&self) -> Vec<Vec<(ExtNat, usize)>> {
        (0..self.target().len())
            .map(|i| {
                let mut v: Vec<(ExtNat, usize)> = self
                    .f1
                    .fiber(i)
                    .into_iter()
                    .map(|r| (self.rho().weight(r), self.f2.apply(r)))
                    .collect();
                v.sort();
                v
            })
            .collect()
    }

    /// Rebuilds a correspondence from its canonical form.
    pub fn from_canonical(
        target: &GenComposition,
        source: &GenComposition,
        fibers: &[Vec<(ExtNat, usize)>],
    ) -> Result<Self> {
        let mut w = Vec::new();
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        for (i, fib) in fibers.iter().enumerate() {
            for &(wt, s) in fib {
                w.push(wt);
                t1.push(i);
                t2.push(s);
            }
        }
        let rho = GenComposition::new(w)?;
        Correspondence::new(
            CompMap::new(rho.clone(), target.clone(), t1)?,
            CompMap::new(rho, source.clone(), t2)?,
        )
    }
}

/// The composite `h: λ ⇢ ν` of `f: λ ⇢ μ` and `g: μ ⇢ ν`.
///
/// Closes the square over `μ` formed by `f₂: ρ → μ` and `g₁: σ ↠ μ`; the map
/// `τ → ρ` is then a principal surjection and `h = (f₁ ∘ (τ → ρ), g₂ ∘ (τ → σ))`.
pub fn compose(f: &Correspondence, g: &Correspondence) -> Result<Correspondence> {
    if f.source() != g.target() {
        return Err(Error::Incompatible(format!(
            "middle compositions {} and {}",
            f.source(),
            g.target()
        )));
    }
    let sq = pullback_square(&f.f2, &g.f1)?;
    let h1 = sq.g1.then(&f.f1)?;
    let h2 = sq.g2.then(&g.f2)?;
    Correspondence::new(h1, h2)
}

/// All weight-respecting self-maps of `λ`, in lexicographic order of tables.
pub fn enumerate_end(lambda: &GenComposition) -> Vec<CompMap> {
    let n = lambda.len();
    let mut out = Vec::new();
    let mut table = Vec::with_capacity(n);
    let mut load = vec![ExtNat::ZERO; n];
    fn rec(
        lambda: &GenComposition,
        table: &mut Vec<usize>,
        load: &mut Vec<ExtNat>,
        out: &mut Vec<CompMap>,
    ) {
        let i = table.len();
        if i == lambda.len() {
            out.push(CompMap {
                domain: lambda.clone(),
                codomain: lambda.clone(),
                table: table.clone(),
            });
            return;
        }
        for j in 0..lambda.len() {
            let new = load[j] + lambda.weight(i);
            if new > lambda.weight(j) {
                continue;
            }
            let old = load[j];
            load[j] = new;
            table.push(j);
            rec(lambda, table, load, out);
            table.pop();
            load[j] = old;
        }
    }
    rec(lambda, &mut table, &mut load, &mut out);
    out
}

/// Fiber options for one label of weight `w`: multisets of `(weight, target)`
/// pairs with total `w`, at most `max_size` of them, a singleton when `w > e`.
fn fiber_options(
    w: ExtNat,
    e: u64,
    max_size: usize,
    lambda: &GenComposition,
) -> Vec<Vec<(ExtNat, usize)>> {
    let targets = 0..lambda.len();
    match w {
        ExtNat::Inf => targets
            .filter(|&t| lambda.weight(t).is_inf())
            .map(|t| vec![(ExtNat::Inf, t)])
            .collect(),
        ExtNat::Fin(n) if n > e => targets
            .filter(|&t| lambda.weight(t) >= w)
            .map(|t| vec![(w, t)])
            .collect(),
        ExtNat::Fin(n) => {
            let pairs: Vec<(ExtNat, usize)> = (1..=n)
                .flat_map(|k| targets.clone().map(move |t| (ExtNat::Fin(k), t)))
                .filter(|&(k, t)| k <= lambda.weight(t))
                .collect();
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(
                pairs: &[(ExtNat, usize)],
                start: usize,
                left: u64,
                max_size: usize,
                cur: &mut Vec<(ExtNat, usize)>,
                out: &mut Vec<Vec<(ExtNat, usize)>>,
            ) {
                if left == 0 {
                    out.push(cur.clone());
                    return;
                }
                if cur.len() == max_size {
                    return;
                }
                for k in start..pairs.len() {
                    let wk = pairs[k].0.finite().expect("finite");
                    if wk > left {
                        continue;
                    }
                    cur.push(pairs[k]);
                    rec(pairs, k, left - wk, max_size, cur, out);
                    cur.pop();
                }
            }
            rec(&pairs, 0, n, max_size, &mut cur, &mut out);
            out
        }
    }
}

/// All good correspondences `μ ⇢ λ` up to relabeling of `ρ`, in canonical form
/// order (label by label, options in generation order).
pub fn enumerate_good(mu: &GenComposition, lambda: &GenComposition) -> Vec<Correspondence> {
    enumerate_good_fibers(mu, lambda)
        .into_iter()
        .map(|fibers| {
            Correspondence::from_canonical(mu, lambda, &fibers).expect("valid by construction")
        })
        .collect()
}

/// Canonical forms of all good correspondences `μ ⇢ λ`.
pub fn enumerate_good_fibers(
    mu: &GenComposition,
    lambda: &GenComposition,
) -> Vec<Vec<Vec<(ExtNat, usize)>>> {
    let e = lambda.finite_sum();
    let options: Vec<Vec<Vec<(ExtNat, usize)>>> = mu
        .weights()
        .iter()
        .map(|&w| fiber_options(w, e, lambda.len(), lambda))
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut load = vec![ExtNat::ZERO; lambda.len()];
    fn rec(
        options: &[Vec<Vec<(ExtNat, usize)>>],
        lambda: &GenComposition,
        load: &mut Vec<ExtNat>,
        cur: &mut Vec<Vec<(ExtNat, usize)>>,
        out: &mut Vec<Vec<Vec<(ExtNat, usize)>>>,
    ) {
        let i = cur.len();
        if i == options.len() {
            out.push(cur.clone());
            return;
        }
        for opt in &options[i] {
            let saved = load.clone();
            let mut ok = true;
            for &(w, t) in opt {
                load[t] = load[t] + w;
                if load[t] > lambda.weight(t) {
                    ok = false;
                }
            }
            if ok {
                cur.push(opt.clone());
                rec(options, lambda, load, cur, out);
                cur.pop();
            }
            *load = saved;
        }
    }
    rec(&options, lambda, &mut load, &mut cur, &mut out);
    out
}
