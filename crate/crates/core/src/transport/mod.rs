//! The `d_rk` ground cost, exact 1-Wasserstein distance with the diagonal
//! as a sink, and the landscape stability bound.
//!
//! `d_rk(x, y)` is the area of the symmetric difference of the right
//! triangles that `x` and `y` span with the diagonal.

mod mcf;

use std::fmt;

use crate::error::{Error, Result};
use crate::landscape::compute_landscape;
use crate::measure::{PersistenceMeasure, Point};
use crate::rational::{lcm, Int, Rational};

use mcf::MinCostFlow;

/// A point above the diagonal, or the diagonal itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    Point(Point),
    Diagonal,
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Point(p) => write!(f, "{p:?}"),
            Site::Diagonal => f.write_str("Δ"),
        }
    }
}

impl From<Point> for Site {
    fn from(p: Point) -> Self {
        Site::Point(p)
    }
}

fn d_rk_checked(x: &Site, y: &Site) -> Result<Rational> {
    let half_sq = |p: &Point| -> Result<Rational> {
        let s = p.persistence();
        Ok(s.checked_mul(&s)?.half())
    };
    match (x, y) {
        (Site::Diagonal, Site::Diagonal) => Ok(Rational::zero()),
        (Site::Point(p), Site::Diagonal) | (Site::Diagonal, Site::Point(p)) => half_sq(p),
        (Site::Point(p), Site::Point(q)) => {
            let lo = p.birth().max(q.birth());
            let hi = p.death().min(q.death());
            let overlap = if hi > lo {
                let o = hi.checked_sub(lo)?;
                o.checked_mul(&o)?
            } else {
                Rational::zero()
            };
            half_sq(p)?.checked_add(&half_sq(q)?)?.checked_sub(&overlap)
        }
    }
}

/// `1/2 (x2 - x1)^2 + 1/2 (y2 - y1)^2 - max(min(x2, y2) - max(x1, y1), 0)^2`,
/// with the diagonal contributing no triangle.
pub fn d_rk(x: &Site, y: &Site) -> Rational {
    d_rk_checked(x, y).expect("rational arithmetic overflow")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub source: Site,
    pub target: Site,
    pub mass: Rational,
}

/// A coupling of two measures through the diagonal. Flows from the
/// diagonal to itself cost nothing and are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportPlan {
    flows: Vec<Flow>,
    total_cost: Rational,
}

impl TransportPlan {
    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn total_cost(&self) -> &Rational {
        &self.total_cost
    }

    /// Mass leaving each off-diagonal source.
    pub fn source_marginal(&self) -> Result<PersistenceMeasure> {
        PersistenceMeasure::from_atoms(self.flows.iter().filter_map(|f| match &f.source {
            Site::Point(p) => Some((p.clone(), f.mass.clone())),
            Site::Diagonal => None,
        }))
    }

    /// Mass arriving at each off-diagonal target.
    pub fn target_marginal(&self) -> Result<PersistenceMeasure> {
        PersistenceMeasure::from_atoms(self.flows.iter().filter_map(|f| match &f.target {
            Site::Point(p) => Some((p.clone(), f.mass.clone())),
            Site::Diagonal => None,
        }))
    }

    /// `sum mass * d_rk(source, target)` recomputed from the flows.
    pub fn recomputed_cost(&self) -> Rational {
        self.flows
            .iter()
            .map(|f| &f.mass * &d_rk(&f.source, &f.target))
            .sum()
    }
}

fn to_i128(r: &Rational) -> Result<i128> {
    r.to_integer_i128().ok_or(Error::Overflow)
}

#[allow(clippy::clone_on_copy)]
fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Result<Int> {
    let mut c = Rational::one().numer().clone();
    for v in values {
        c = lcm(&c, v.denom())?;
    }
    Ok(c)
}

/// Exact `W_1` distance with ground cost `d_rk`, and an optimal plan.
///
/// Atoms of `m1` supply their weight, atoms of `m2` demand theirs, and one
/// diagonal node on each side balances the totals at cost `d_rk(., Δ)`.
/// Weights and costs are scaled to integers and the flow problem is solved
/// exactly.
pub fn w1_rk(m1: &PersistenceMeasure, m2: &PersistenceMeasure) -> Result<(Rational, TransportPlan)> {
    let xs: Vec<(&Point, &Rational)> = m1.atoms().collect();
    let ys: Vec<(&Point, &Rational)> = m2.atoms().collect();
    let (n1, n2) = (xs.len(), ys.len());

    let wscale = Rational::from_int(lcm(&m1.common_denominator()?, &m2.common_denominator()?)?);
    let supply = |w: &Rational| w.checked_mul(&wscale).and_then(|v| to_i128(&v));

    let site = |p: &Point| Site::Point(p.clone());
    let mut cost = vec![vec![Rational::zero(); n2 + 1]; n1 + 1];
    for (i, (x, _)) in xs.iter().enumerate() {
        for (j, (y, _)) in ys.iter().enumerate() {
            cost[i][j] = d_rk_checked(&site(x), &site(y))?;
        }
        cost[i][n2] = d_rk_checked(&site(x), &Site::Diagonal)?;
    }
    for (j, (y, _)) in ys.iter().enumerate() {
        cost[n1][j] = d_rk_checked(&Site::Diagonal, &site(y))?;
    }
    let cscale = Rational::from_int(lcm_of_denominators(cost.iter().flatten())?);

    // nodes: source, m1 atoms, Δ as supplier, m2 atoms, Δ as consumer, sink
    let src = 0;
    let left = |i: usize| 1 + i;
    let right = |j: usize| 2 + n1 + j;
    let sink = 3 + n1 + n2;
    let mut g = MinCostFlow::new(sink + 1);

    let mut total1 = 0i128;
    let mut total2 = 0i128;
    let s1: Vec<i128> = xs.iter().map(|(_, w)| supply(w)).collect::<Result<_>>()?;
    let s2: Vec<i128> = ys.iter().map(|(_, w)| supply(w)).collect::<Result<_>>()?;
    for &s in &s1 {
        total1 = total1.checked_add(s).ok_or(Error::Overflow)?;
    }
    for &s in &s2 {
        total2 = total2.checked_add(s).ok_or(Error::Overflow)?;
    }
    let total = total1.checked_add(total2).ok_or(Error::Overflow)?;

    for i in 0..=n1 {
        let cap = if i < n1 { s1[i] } else { total2 };
        g.add_edge(src, left(i), cap, 0);
    }
    for j in 0..=n2 {
        let cap = if j < n2 { s2[j] } else { total1 };
        g.add_edge(right(j), sink, cap, 0);
    }
    let mut arcs = Vec::new();
    for i in 0..=n1 {
        for j in 0..=n2 {
            let c = to_i128(&cost[i][j].checked_mul(&cscale)?)?;
            let id = g.add_edge(left(i), right(j), total, c);
            if i < n1 || j < n2 {
                arcs.push((i, j, id));
            }
        }
    }
    let (flow, scaled_cost) = g.run(src, sink, total)?;
    debug_assert_eq!(flow, total);

    let denom = wscale.checked_mul(&cscale)?;
    let total_cost = Rational::from_i128(scaled_cost).checked_div(&denom)?;
    let node = |side: &[(&Point, &Rational)], k: usize| match side.get(k) {
        Some((p, _)) => Site::Point((*p).clone()),
        None => Site::Diagonal,
    };
    let mut flows = Vec::new();
    for (i, j, id) in arcs {
        let f = g.flow(id);
        if f > 0 {
            flows.push(Flow {
                source: node(&xs, i),
                target: node(&ys, j),
                mass: Rational::from_i128(f).checked_div(&wscale)?,
            });
        }
    }
    let plan = TransportPlan {
        flows,
        total_cost: total_cost.clone(),
    };
    Ok((total_cost, plan))
}

/// Largest number of unit atoms per side accepted by [`w1_rk_bruteforce`].
pub const BRUTEFORCE_MAX_UNITS: usize = 7;

/// Exhaustive `W_1` over partial matchings of unit atoms, for testing.
///
/// Both measures are scaled by the common denominator `c` of their weights
/// and expanded into unit atoms; every matching is tried, with unmatched
/// units paying their diagonal cost, and the minimum is divided by `c`.
pub fn w1_rk_bruteforce(m1: &PersistenceMeasure, m2: &PersistenceMeasure) -> Result<Rational> {
    let c = Rational::from_int(lcm(&m1.common_denominator()?, &m2.common_denominator()?)?);
    let expand = |m: &PersistenceMeasure| -> Result<Vec<Point>> {
        let mut units = Vec::new();
        for (p, w) in m.atoms() {
            let k = to_i128(&(w * &c))?;
            if k as usize > BRUTEFORCE_MAX_UNITS {
                return Err(Error::SizeBound {
                    units: k as usize,
                    max: BRUTEFORCE_MAX_UNITS,
                });
            }
            units.extend(std::iter::repeat_n(p.clone(), k as usize));
            if units.len() > BRUTEFORCE_MAX_UNITS {
                return Err(Error::SizeBound {
                    units: units.len(),
                    max: BRUTEFORCE_MAX_UNITS,
                });
            }
        }
        Ok(units)
    };
    let us = expand(m1)?;
    let vs = expand(m2)?;
    let pair: Vec<Vec<Rational>> = us
        .iter()
        .map(|u| {
            vs.iter()
                .map(|v| d_rk(&Site::Point(u.clone()), &Site::Point(v.clone())))
                .collect()
        })
        .collect();
    let diag_u: Vec<Rational> = us.iter().map(|u| d_rk(&Site::Point(u.clone()), &Site::Diagonal)).collect();
    let diag_v: Vec<Rational> = vs.iter().map(|v| d_rk(&Site::Point(v.clone()), &Site::Diagonal)).collect();

    struct Search<'a> {
        pair: &'a [Vec<Rational>],
        diag_u: &'a [Rational],
        diag_v: &'a [Rational],
        used: Vec<bool>,
        best: Option<Rational>,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, acc: Rational) {
            if i == self.diag_u.len() {
                let rest: Rational = self
                    .diag_v
                    .iter()
                    .zip(&self.used)
                    .filter(|(_, u)| !**u)
                    .map(|(d, _)| d)
                    .sum();
                let total = acc + rest;
                if self.best.as_ref().is_none_or(|b| &total < b) {
                    self.best = Some(total);
                }
                return;
            }
            self.go(i + 1, &acc + &self.diag_u[i]);
            for j in 0..self.diag_v.len() {
                if !self.used[j] {
                    self.used[j] = true;
                    let next = &acc + &self.pair[i][j];
                    self.go(i + 1, next);
                    self.used[j] = false;
                }
            }
        }
    }

    let mut search = Search {
        pair: &pair,
        diag_u: &diag_u,
        diag_v: &diag_v,
        used: vec![false; vs.len()],
        best: None,
    };
    search.go(0, Rational::zero());
    Ok(search.best.unwrap_or_default() / c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// `||Lambda m1 - Lambda m2||_1`
    pub lhs: Rational,
    /// `1/2 W_1(m1, m2)`
    pub rhs: Rational,
    pub holds: bool,
}

/// Compares the landscape distance with half the transport distance, exactly.
pub fn check_stability(m1: &PersistenceMeasure, m2: &PersistenceMeasure) -> Result<StabilityReport> {
    check_stability_with_factor(m1, m2, &Rational::new(1, 2))
}

pub(crate) fn check_stability_with_factor(
    m1: &PersistenceMeasure,
    m2: &PersistenceMeasure,
    factor: &Rational,
) -> Result<StabilityReport> {
    let lhs = compute_landscape(m1)?.l1_distance(&compute_landscape(m2)?);
    let (w, _) = w1_rk(m1, m2)?;
    let rhs = w.checked_mul(factor)?;
    let holds = lhs <= rhs;
    Ok(StabilityReport { lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pt(b: i64, d: i64) -> Point {
        Point::new(Rational::from_integer(b), Rational::from_integer(d)).unwrap()
    }

    fn site(b: i64, d: i64) -> Site {
        Site::Point(pt(b, d))
    }

    fn measure(atoms: &[(i64, i64, Rational)]) -> PersistenceMeasure {
        PersistenceMeasure::from_atoms(atoms.iter().map(|(b, d, w)| (pt(*b, *d), w.clone()))).unwrap()
    }

    #[test]
    fn d_rk_examples() {
        assert_eq!(d_rk(&site(0, 2), &site(0, 2)), q(0, 1));
        assert_eq!(d_rk(&site(0, 2), &Site::Diagonal), q(2, 1));
        assert_eq!(d_rk(&site(0, 2), &site(1, 3)), q(3, 1));
        assert_eq!(d_rk(&site(0, 1), &site(5, 7)), q(5, 2));
        assert_eq!(d_rk(&Site::Diagonal, &Site::Diagonal), q(0, 1));
    }

    #[test]
    fn w1_examples() {
        let a = measure(&[(0, 2, q(1, 1))]);
        let b = measure(&[(1, 3, q(1, 1))]);
        let (w, plan) = w1_rk(&a, &a).unwrap();
        assert_eq!(w, q(0, 1));
        assert_eq!(
            plan.flows(),
            &[Flow {
                source: site(0, 2),
                target: site(0, 2),
                mass: q(1, 1)
            }]
        );
        let (w, plan) = w1_rk(&a, &PersistenceMeasure::empty()).unwrap();
        assert_eq!(w, q(2, 1));
        assert_eq!(plan.flows()[0].target, Site::Diagonal);
        let (w, plan) = w1_rk(&a, &b).unwrap();
        assert_eq!(w, q(3, 1));
        assert_eq!(plan.recomputed_cost(), w);
        assert_eq!(plan.source_marginal().unwrap(), a);
        assert_eq!(plan.target_marginal().unwrap(), b);
        for (x, y) in [(&a, &a), (&a, &PersistenceMeasure::empty()), (&a, &b)] {
            assert_eq!(w1_rk_bruteforce(x, y).unwrap(), w1_rk(x, y).unwrap().0);
        }
    }

    #[test]
    fn fractional_weights_split_between_targets() {
        let a = measure(&[(0, 4, q(1, 2))]);
        let b = measure(&[(0, 4, q(1, 3)), (1, 4, q(1, 3))]);
        let (w, plan) = w1_rk(&a, &b).unwrap();
        assert_eq!(w, w1_rk_bruteforce(&a, &b).unwrap());
        assert_eq!(plan.source_marginal().unwrap(), a);
        assert_eq!(plan.target_marginal().unwrap(), b);
        assert_eq!(plan.recomputed_cost(), w);
    }

    #[test]
    fn bruteforce_size_bound() {
        let a = measure(&[(0, 2, q(8, 1))]);
        assert!(matches!(
            w1_rk_bruteforce(&a, &PersistenceMeasure::empty()),
            Err(Error::SizeBound { .. })
        ));
    }

    #[test]
    fn stability_examples() {
        let a = measure(&[(0, 2, q(1, 1))]);
        let b = measure(&[(1, 3, q(1, 1))]);
        let r = check_stability(&a, &a).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (q(0, 1), q(0, 1), true));
        let r = check_stability(&a, &PersistenceMeasure::empty()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (q(1, 1), q(1, 1), true));
        let r = check_stability(&a, &b).unwrap();
        assert_eq!(r.rhs, q(3, 2));
        assert!(r.holds);
    }

    #[test]
    fn shifted_tents_distance_matches_quadrature() {
        let a = measure(&[(0, 2, q(1, 1))]);
        let b = measure(&[(1, 3, q(1, 1))]);
        let lhs = check_stability(&a, &b).unwrap().lhs;
        assert_eq!(lhs, q(3, 2));
        // midpoint rule for int |tent(0,2) - tent(1,3)| dt over [-1, 4]
        let tent = |b: f64, d: f64, t: f64| (t - b).min(d - t).max(0.0);
        let n = 100_000;
        let (lo, hi) = (-1.0f64, 4.0f64);
        let dt = (hi - lo) / n as f64;
        let approx: f64 = (0..n)
            .map(|i| {
                let t = lo + (i as f64 + 0.5) * dt;
                (tent(0.0, 2.0, t) - tent(1.0, 3.0, t)).abs() * dt
            })
            .sum();
        assert!((approx - lhs.to_f64()).abs() < 1e-6);
    }
}
