//! Evaluating polynomials along the 𝔖-orbit of a finitary point.
//!
//! Permuting the coordinates of a finitary point `x` and restricting to the
//! variables of `p` amounts to assigning each variable a value class of `x`,
//! with no class used more often than its multiplicity. All evaluations are
//! obtained this way, so the orbit ideal of `p` vanishes at `x` exactly when
//! every such assignment gives zero.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::{Perm, ProductPoly, SparsePoly, Var, Q};
use crate::partitions::ExtNat;
use crate::variety::FinitaryPoint;

/// Calls `visit` with every admissible assignment (variable position → class).
fn for_each_assignment(nvars: usize, caps: &[ExtNat], visit: &mut dyn FnMut(&[usize])) {
    fn rec(
        k: usize,
        nvars: usize,
        caps: &[ExtNat],
        used: &mut [u64],
        assign: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if k == nvars {
            visit(assign);
            return;
        }
        for c in 0..caps.len() {
            if caps[c] <= ExtNat::Fin(used[c]) {
                continue;
            }
            used[c] += 1;
            assign.push(c);
            rec(k + 1, nvars, caps, used, assign, visit);
            assign.pop();
            used[c] -= 1;
        }
    }
    let mut used = vec![0u64; caps.len()];
    rec(0, nvars, caps, &mut used, &mut Vec::new(), visit);
}

fn lookup<'a>(support: &'a [u32], values: &'a [Q]) -> impl Fn(Var) -> Option<Q> + 'a {
    move |v| match v {
        Var::Xi(i) => support
            .iter()
            .position(|&s| s == i)
            .map(|k| values[k].clone()),
        Var::T(_) => None,
    }
}

/// All values of `p` along the orbit of `x`.
pub fn orbit_evaluations(p: &SparsePoly, x: &FinitaryPoint) -> BTreeSet<Q> {
    let support = p.xi_support();
    let caps: Vec<ExtNat> = x.classes().iter().map(|(_, m)| *m).collect();
    let mut out = BTreeSet::new();
    for_each_assignment(support.len(), &caps, &mut |assign| {
        let values: Vec<Q> = assign.iter().map(|&c| x.classes()[c].0.clone()).collect();
        out.insert(p.eval(lookup(&support, &values)));
    });
    out
}

/// All values of a factored polynomial along the orbit of `x`.
pub fn orbit_values_product(p: &ProductPoly, x: &FinitaryPoint) -> BTreeSet<Q> {
    let support = p.xi_support();
    let caps: Vec<ExtNat> = x.classes().iter().map(|(_, m)| *m).collect();
    let mut out = BTreeSet::new();
    for_each_assignment(support.len(), &caps, &mut |assign| {
        let values: Vec<Q> = assign.iter().map(|&c| x.classes()[c].0.clone()).collect();
        out.insert(p.eval(lookup(&support, &values)));
    });
    out
}

/// Partition of the support into classes of interchangeable variables.
///
/// Two variables are twins when exchanging them maps the multiset of
/// sign-normalized factors to itself, so the product changes at most by sign.
/// Transpositions with this property generate a product of full symmetric
/// groups on the classes.
pub fn twin_classes(p: &ProductPoly) -> Vec<Vec<u32>> {
    let support = p.xi_support();
    let key = |fs: &mut dyn Iterator<Item = SparsePoly>| {
        let mut v: Vec<String> = fs.map(|f| f.sign_normalized().to_string()).collect();
        v.sort_unstable();
        v
    };
    let base = key(&mut p.factors().iter().cloned());
    // Cheap invariant first: the sorted list of factor descriptions touching a variable.
    let signature = |v: u32| {
        let mut sig: Vec<(usize, u32)> = p
            .factors()
            .iter()
            .filter(|f| f.xi_support().contains(&v))
            .map(|f| (f.num_terms(), f.degree()))
            .collect();
        sig.sort_unstable();
        sig
    };
    let sigs: BTreeMap<u32, Vec<(usize, u32)>> =
        support.iter().map(|&v| (v, signature(v))).collect();
    let mut parent: BTreeMap<u32, u32> = support.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<u32, u32>, v: u32) -> u32 {
        let p = parent[&v];
        if p == v {
            return v;
        }
        let r = find(parent, p);
        parent.insert(v, r);
        r
    }
    for (k, &u) in support.iter().enumerate() {
        for &v in &support[k + 1..] {
            if find(&mut parent, u) == find(&mut parent, v) || sigs[&u] != sigs[&v] {
                continue;
            }
            let t = Perm::transposition(u, v);
            if key(&mut p.factors().iter().map(|f| f.apply_perm(&t))) == base {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent.insert(rv, ru);
            }
        }
    }
    let mut classes: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &v in &support {
        let r = find(&mut parent, v);
        classes.entry(r).or_default().push(v);
    }
    classes.into_values().collect()
}

/// An orbit element of `x` where `p` does not vanish, if any.
///
/// Returns the value assigned to each support variable. The search assigns
/// variables in index order, checks each factor as soon as its variables are
/// fixed, and within a twin class only tries non-decreasing class indices.
pub fn orbit_nonvanishing(p: &ProductPoly, x: &FinitaryPoint) -> Option<Vec<(u32, Q)>> {
    if p.is_zero() {
        return None;
    }
    let support = p.xi_support();
    let n = support.len();
    let pos: BTreeMap<u32, usize> = support.iter().enumerate().map(|(k, &v)| (v, k)).collect();

    let mut ready: Vec<Vec<&SparsePoly>> = vec![Vec::new(); n + 1];
    for f in p.factors() {
        let last = f.xi_support().iter().map(|v| pos[v] + 1).max().unwrap_or(0);
        ready[last].push(f);
    }
    if ready[0]
        .iter()
        .any(|f| f.as_constant().is_some_and(|c| c.is_zero()))
    {
        return None;
    }

    // Previous member of the same twin class in assignment order.
    let mut prev_twin: Vec<Option<usize>> = vec![None; n];
    for class in twin_classes(p) {
        let mut ks: Vec<usize> = class.iter().map(|v| pos[v]).collect();
        ks.sort_unstable();
        for w in ks.windows(2) {
            prev_twin[w[1]] = Some(w[0]);
        }
    }

    let mut st = Search {
        x,
        support: &support,
        ready: &ready,
        prev_twin: &prev_twin,
        used: vec![0; x.classes().len()],
        assign: Vec::with_capacity(n),
        values: vec![None; support.iter().copied().max().unwrap_or(0) as usize + 1],
    };
    if st.rec(0) {
        Some(
            support
                .iter()
                .zip(&st.assign)
                .map(|(&v, &c)| (v, x.classes()[c].0.clone()))
                .collect(),
        )
    } else {
        None
    }
}

struct Search<'a> {
    x: &'a FinitaryPoint,
    support: &'a [u32],
    ready: &'a [Vec<&'a SparsePoly>],
    prev_twin: &'a [Option<usize>],
    used: Vec<u64>,
    assign: Vec<usize>,
    values: Vec<Option<Q>>,
}

impl Search<'_> {
    fn rec(&mut self, k: usize) -> bool {
        if k == self.support.len() {
            return true;
        }
        let start = self.prev_twin[k].map_or(0, |j| self.assign[j]);
        for c in start..self.x.classes().len() {
            if self.x.classes()[c].1 <= ExtNat::Fin(self.used[c]) {
                continue;
            }
            let var = self.support[k] as usize;
            self.values[var] = Some(self.x.classes()[c].0.clone());
            let values = &self.values;
            let alive = self.ready[k + 1].iter().all(|f| {
                !f.eval(|v| match v {
                    Var::Xi(i) => values[i as usize].clone(),
                    Var::T(_) => None,
                })
                .is_zero()
            });
            if alive {
                self.used[c] += 1;
                self.assign.push(c);
                if self.rec(k + 1) {
                    return true;
                }
                self.assign.pop();
                self.used[c] -= 1;
            }
            self.values[var] = None;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{discriminant, parse_poly, q};

    fn pt(s: &str) -> FinitaryPoint {
        s.parse().unwrap()
    }

    #[test]
    fn known_multiplicities() {
        let x1 = parse_poly("x1").unwrap();
        assert_eq!(
            orbit_evaluations(&x1, &pt("0^inf,1^3")),
            [q(0), q(1)].into()
        );
        assert_eq!(
            orbit_evaluations(&discriminant(3), &pt("0^inf,1^inf")),
            [q(0)].into()
        );
        let p = parse_poly("x1*(x1 - 1)").unwrap();
        assert_eq!(
            orbit_evaluations(&p, &pt("0^inf,1^inf,2^1")),
            [q(0), q(2)].into()
        );
    }

    #[test]
    fn multiplicity_caps_respected() {
        let p = ProductPoly::parse("(x1 - x2)*(x1 - x3)*(x2 - x3)").unwrap();
        assert!(orbit_nonvanishing(&p, &pt("0^inf,1^1")).is_none());
        assert!(orbit_nonvanishing(&p, &pt("0^inf,1^1,2^1")).is_some());
        let q2 = ProductPoly::parse("(x1 - x3)*(x1 - x4)*(x2 - x3)*(x2 - x4)").unwrap();
        assert!(orbit_nonvanishing(&q2, &pt("0^inf,1^1")).is_none());
        assert!(orbit_nonvanishing(&q2, &pt("0^inf,1^2")).is_some());
    }

    #[test]
    fn twins_of_a_tableau_polynomial() {
        let p = ProductPoly::parse("(x1 - x3)*(x1 - x4)*(x2 - x3)*(x2 - x4)").unwrap();
        assert_eq!(twin_classes(&p), vec![vec![1, 2], vec![3, 4]]);
        let r = ProductPoly::parse("(x1 - x2)*x1").unwrap();
        assert_eq!(twin_classes(&r), vec![vec![1], vec![2]]);
    }
}
