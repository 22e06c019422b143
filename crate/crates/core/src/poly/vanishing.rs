//! Vanishing ideals of finite point sets by the Buchberger–Möller algorithm.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{Monomial, SparsePoly, Var, Q};

struct Reducer {
    /// Echelon rows: pivot column, evaluation vector (1 at the pivot), and the
    /// polynomial whose evaluations the row records.
    rows: Vec<(usize, Vec<Q>, SparsePoly)>,
}

impl Reducer {
    fn reduce(&self, mut v: Vec<Q>, mut p: SparsePoly) -> (Vec<Q>, SparsePoly) {
        for (piv, row, poly) in &self.rows {
            if v[*piv].is_zero() {
                continue;
            }
            let c = v[*piv].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a -= &c * b;
                }
            }
            p = &p - &poly.scale(&c);
        }
        (v, p)
    }
}

/// The reduced graded-lex Gröbner basis of the ideal of polynomials in
/// `t_1, …, t_r` vanishing on `points`.
///
/// Monomials are visited in increasing order; each one is evaluated at all
/// points and reduced against the evaluations of the standard monomials
/// found so far. A dependency yields a basis element, otherwise the monomial
/// becomes standard and its multiples by each variable become candidates.
/// The empty point set gives the unit ideal `⟨1⟩`. Output is sorted by
/// leading monomial, largest first.
pub fn vanishing_ideal(points: &[Vec<Q>]) -> Vec<SparsePoly> {
    let distinct: BTreeSet<&Vec<Q>> = points.iter().collect();
    let points: Vec<&Vec<Q>> = distinct.into_iter().collect();
    if points.is_empty() {
        return vec![SparsePoly::one()];
    }
    let r = points[0].len();
    assert!(
        points.iter().all(|p| p.len() == r),
        "points of mixed length"
    );
    let vars: Vec<Var> = (1..=r as u32).map(Var::T).collect();

    let mut candidates: BTreeSet<Monomial> = BTreeSet::new();
    candidates.insert(Monomial::one());
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut leading: Vec<Monomial> = Vec::new();
    let mut basis: Vec<SparsePoly> = Vec::new();
    let mut reducer = Reducer { rows: Vec::new() };

    while let Some(m) = candidates.pop_first() {
        if !seen.insert(m.clone()) || leading.iter().any(|l| l.divides(&m)) {
            continue;
        }
        let v: Vec<Q> = points
            .iter()
            .map(|p| {
                let mut x = Q::one();
                for &(var, e) in m.pairs() {
                    let Var::T(i) = var else { unreachable!() };
                    x *= num_traits::pow(p[i as usize - 1].clone(), e as usize);
                }
                x
            })
            .collect();
        let (v, poly) = reducer.reduce(v, SparsePoly::monomial(m.clone(), Q::one()));
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                leading.push(m);
                basis.push(poly);
            }
            Some(piv) => {
                let inv = v[piv].recip();
                let v: Vec<Q> = v.iter().map(|x| x * &inv).collect();
                reducer.rows.push((piv, v, poly.scale(&inv)));
                for &var in &vars {
                    candidates.insert(m.mul(&Monomial::var(var)));
                }
            }
        }
    }
    basis.sort_by(|a, b| b.leading().map(|l| l.0).cmp(&a.leading().map(|l| l.0)));
    basis
}

/// Number of standard monomials of a monic Gröbner basis with the given
/// leading monomials, counted up to `bound` (returns `None` if more).
pub fn quotient_dimension(basis: &[SparsePoly], r: usize, bound: usize) -> Option<usize> {
    let leads: Vec<Monomial> = basis
        .iter()
        .filter_map(|p| p.leading().map(|l| l.0.clone()))
        .collect();
    let mut count = 0;
    let mut frontier = vec![Monomial::one()];
    let mut seen = BTreeSet::new();
    while let Some(m) = frontier.pop() {
        if !seen.insert(m.clone()) || leads.iter().any(|l| l.divides(&m)) {
            continue;
        }
        count += 1;
        if count > bound {
            return None;
        }
        for i in 1..=r as u32 {
            frontier.push(m.mul(&Monomial::var(Var::T(i))));
        }
    }
    Some(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, q};

    fn pts(v: &[&[i64]]) -> Vec<Vec<Q>> {
        v.iter()
            .map(|p| p.iter().map(|&x| q(x)).collect())
            .collect()
    }

    #[test]
    fn two_points_on_a_line() {
        let g = vanishing_ideal(&pts(&[&[0], &[1]]));
        assert_eq!(g, vec![parse_poly("t1^2 - t1").unwrap()]);
    }

    #[test]
    fn square_grid() {
        let g = vanishing_ideal(&pts(&[&[0, 1], &[1, 0], &[0, 0], &[1, 1]]));
        assert_eq!(
            g,
            vec![
                parse_poly("t1^2 - t1").unwrap(),
                parse_poly("t2^2 - t2").unwrap()
            ]
        );
    }

    #[test]
    fn single_point() {
        let g = vanishing_ideal(&pts(&[&[3, -2]]));
        assert_eq!(
            g,
            vec![parse_poly("t1 - 3").unwrap(), parse_poly("t2 + 2").unwrap()]
        );
    }

    #[test]
    fn empty_set_is_unit_ideal() {
        assert_eq!(vanishing_ideal(&[]), vec![SparsePoly::one()]);
    }

    #[test]
    fn quotient_dimension_matches_point_count() {
        let p = pts(&[&[0, 1], &[1, 0], &[2, 2], &[5, 1], &[0, 0]]);
        let g = vanishing_ideal(&p);
        assert_eq!(quotient_dimension(&g, 2, 100), Some(5));
    }
}
