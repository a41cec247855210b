use std::collections::BTreeSet;

use cplandscape::aggregation::{average_landscape, compare_apl_cpl, rank_k_transform};
use cplandscape::inversion::{nu0_quadrant, reconstruct, rect_mass_from_landscape};
use cplandscape::io::{parse_diagram, parse_landscape, write_diagram, write_landscape};
use cplandscape::transport::{check_stability, d_rk, w1_rk, w1_rk_bruteforce, Site};
use cplandscape::*;
use proptest::prelude::*;

fn rational(max_abs: i64) -> impl Strategy<Value = Rational> {
    (1..=8i64).prop_flat_map(move |d| (-max_abs * d..=max_abs * d).prop_map(move |n| Rational::new(n, d)))
}

fn coordinate() -> impl Strategy<Value = Rational> {
    (1..=8i64).prop_flat_map(|d| (0..=10 * d).prop_map(move |n| Rational::new(n, d)))
}

fn weight() -> impl Strategy<Value = Rational> {
    (1..=8i64).prop_flat_map(|d| (1..=2 * d).prop_map(move |n| Rational::new(n, d)))
}

fn point() -> impl Strategy<Value = Point> {
    (coordinate(), coordinate())
        .prop_filter("distinct ends", |(x, y)| x != y)
        .prop_map(|(x, y)| if x < y { Point::new(x, y) } else { Point::new(y, x) }.unwrap())
}

fn measure(max_atoms: usize) -> impl Strategy<Value = PersistenceMeasure> {
    prop::collection::vec((point(), weight()), 0..=max_atoms)
        .prop_map(|atoms| PersistenceMeasure::from_atoms(atoms).unwrap())
}

fn diagram(max_atoms: usize) -> impl Strategy<Value = PersistenceMeasure> {
    prop::collection::vec((point(), 1..=3i64), 0..=max_atoms).prop_map(|atoms| {
        PersistenceMeasure::from_atoms(atoms.into_iter().map(|(p, w)| (p, Rational::from_integer(w)))).unwrap()
    })
}

fn positive(max: i64) -> impl Strategy<Value = Rational> {
    (1..=8i64).prop_flat_map(move |d| (1..=max * d).prop_map(move |n| Rational::new(n, d)))
}

/// Births, deaths and pairwise midpoints.
fn critical_ts(m: &PersistenceMeasure) -> Vec<Rational> {
    let ends: Vec<Rational> = m
        .atoms()
        .flat_map(|(p, _)| [p.birth().clone(), p.death().clone()])
        .collect();
    let mut ts: BTreeSet<Rational> = ends.iter().cloned().collect();
    for x in &ends {
        for y in &ends {
            ts.insert(x.midpoint(y));
        }
    }
    ts.into_iter().collect()
}

/// Values of `h` at which some atom enters or leaves `Q_{t,h}`.
fn breakpoints_in_h(m: &PersistenceMeasure, t: &Rational) -> Vec<Rational> {
    let mut hs: BTreeSet<Rational> = [Rational::zero()].into();
    for (p, _) in m.atoms() {
        for h in [t - p.birth(), p.death() - t] {
            if !h.is_negative() {
                hs.insert(h);
            }
        }
    }
    hs.into_iter().collect()
}

fn mass_alive_at(m: &PersistenceMeasure, t: &Rational) -> Rational {
    m.atoms()
        .filter(|(p, _)| p.birth() < t && t < p.death())
        .map(|(_, w)| w.clone())
        .sum()
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn open_quadrant_mass_at_most_closed(m in measure(12), t in rational(11), h in positive(6)) {
        let open = m.quadrant_mass(&Quadrant::open(t.clone(), h.clone()).unwrap());
        let closed = m.quadrant_mass(&Quadrant::closed(t, h).unwrap());
        prop_assert!(open <= closed);
        prop_assert!(!open.is_negative());
    }

    #[test]
    fn quadrant_mass_decreasing_and_right_continuous_in_h(m in measure(12), t in rational(11)) {
        let hs = breakpoints_in_h(&m, &t);
        let mass = |h: &Rational| m.quadrant_mass(&Quadrant::open(t.clone(), h.clone()).unwrap());
        for w in hs.windows(2) {
            prop_assert!(mass(&w[1]) <= mass(&w[0]));
            // constant on [h_i, h_{i+1})
            let inner = w[0].midpoint(&w[1]);
            prop_assert_eq!(mass(&w[0]), mass(&inner));
            prop_assert_eq!(mass(&w[0]), mass(&w[0].midpoint(&inner)));
        }
    }

    #[test]
    fn rect_mass_nonnegative_and_consistent(
        m in measure(12),
        mut cs in prop::collection::vec(rational(11), 4),
    ) {
        cs.sort();
        let r = Rect::new(cs[0].clone(), cs[1].clone(), cs[2].clone(), cs[3].clone()).unwrap();
        let direct = m.rect_mass_direct(&r);
        prop_assert_eq!(&direct, &m.rect_mass_by_quadrants(&r));
        prop_assert!(!direct.is_negative());
        prop_assert_eq!(&rect_mass_from_landscape(&compute_landscape(&m).unwrap(), &r), &direct);
    }

    #[test]
    fn landscape_matches_oracle(m in measure(15), probes in prop::collection::vec((positive(6), rational(11)), 30)) {
        let l = compute_landscape(&m).unwrap();
        for (a, t) in probes {
            prop_assert_eq!(l.evaluate(&a, &t).unwrap(), landscape_value_oracle(&m, &a, &t).unwrap());
        }
        for t in critical_ts(&m) {
            let mut level = Rational::zero();
            for (_, w) in m.atoms() {
                level += w;
                prop_assert_eq!(l.evaluate(&level, &t).unwrap(), landscape_value_oracle(&m, &level, &t).unwrap());
            }
        }
    }

    #[test]
    fn computed_landscapes_validate(m in measure(15)) {
        let report = validate_landscape(&compute_landscape(&m).unwrap());
        prop_assert!(report.all_pass(), "{}", report);
    }

    #[test]
    fn scaling_identity(m in measure(10), c in positive(10), probes in prop::collection::vec((positive(20), rational(11)), 20)) {
        let l = compute_landscape(&m).unwrap();
        let lc = compute_landscape(&m.scale(&c).unwrap()).unwrap();
        for (a, t) in probes {
            prop_assert_eq!(lc.evaluate(&a, &t).unwrap(), l.evaluate(&(&a / &c), &t).unwrap());
        }
    }

    #[test]
    fn norm_closed_form(m in measure(15)) {
        let expected: Rational = m
            .atoms()
            .map(|(p, w)| w * &p.persistence() * p.persistence() / Rational::from_integer(4))
            .sum();
        prop_assert_eq!(compute_landscape(&m).unwrap().l1_norm(), expected);
    }

    #[test]
    fn level_support_is_peak_alive_mass(m in measure(15)) {
        let l = compute_landscape(&m).unwrap();
        let peak = critical_ts(&m).iter().map(|t| mass_alive_at(&m, t)).max().unwrap_or_default();
        prop_assert_eq!(l.a_max(), peak);
        prop_assert!(l.a_max() <= m.total_mass());
        let above = l.a_max() + Rational::new(1, 1000);
        for t in critical_ts(&m) {
            prop_assert!(l.evaluate(&above, &t).unwrap().is_zero());
        }
    }

    #[test]
    fn level_support_is_total_mass_with_common_point(
        atoms in prop::collection::vec((positive(5), positive(5), weight()), 1..10),
    ) {
        // every atom contains t = 5 in its interior
        let five = Rational::from_integer(5);
        let m = PersistenceMeasure::from_triples(atoms.into_iter().map(|(l, r, w)| (&five - &l, &five + &r, w))).unwrap();
        prop_assert_eq!(compute_landscape(&m).unwrap().a_max(), m.total_mass());
    }

    #[test]
    fn l1_triangle_inequality(a in measure(8), b in measure(8), c in measure(8)) {
        let (la, lb, lc) = (compute_landscape(&a).unwrap(), compute_landscape(&b).unwrap(), compute_landscape(&c).unwrap());
        prop_assert!(la.l1_distance(&lc) <= la.l1_distance(&lb) + lb.l1_distance(&lc));
        prop_assert_eq!(la.l1_distance(&lb), lb.l1_distance(&la));
        prop_assert!(la.l1_distance(&la).is_zero());
    }

    #[test]
    fn nu0_is_quadrant_mass(m in measure(12), probes in prop::collection::vec((rational(11), positive(6)), 30)) {
        let l = compute_landscape(&m).unwrap();
        let mut all = probes;
        for t in critical_ts(&m) {
            for h in breakpoints_in_h(&m, &t) {
                all.push((t.clone(), h));
            }
        }
        for (t, h) in all {
            prop_assert_eq!(
                nu0_quadrant(&l, &t, &h).unwrap(),
                m.quadrant_mass(&Quadrant::open(t.clone(), h.clone()).unwrap())
            );
        }
    }

    #[test]
    fn nu0_decreasing_and_right_continuous(m in measure(12), t in rational(11)) {
        let l = compute_landscape(&m).unwrap();
        let nu = |h: &Rational| nu0_quadrant(&l, &t, h).unwrap();
        for w in breakpoints_in_h(&m, &t).windows(2) {
            prop_assert!(nu(&w[1]) <= nu(&w[0]));
            prop_assert_eq!(nu(&w[0]), nu(&w[0].midpoint(&w[1])));
        }
    }

    #[test]
    fn round_trips(m in measure(12)) {
        let l = compute_landscape(&m).unwrap();
        let back = reconstruct(&l).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(compute_landscape(&back).unwrap(), l);
    }

    #[test]
    fn round_trip_with_coincidences(
        pool in prop::collection::btree_set(0..12i64, 2..5),
        picks in prop::collection::vec((0..5usize, 0..5usize, 1..=10i64), 1..10),
    ) {
        let pool: Vec<Rational> = pool.into_iter().map(|v| Rational::new(v, 2)).collect();
        let atoms: Vec<_> = picks
            .into_iter()
            .filter_map(|(i, j, w)| {
                let (x, y) = (&pool[i % pool.len()], &pool[j % pool.len()]);
                (x < y).then(|| (x.clone(), y.clone(), Rational::from_integer(w)))
            })
            .collect();
        let m = PersistenceMeasure::from_triples(atoms).unwrap();
        prop_assert_eq!(reconstruct(&compute_landscape(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn distinct_measures_have_distinct_landscapes(a in measure(6), b in measure(6)) {
        prop_assume!(a != b);
        prop_assert_ne!(compute_landscape(&a).unwrap(), compute_landscape(&b).unwrap());
    }

    #[test]
    fn d_rk_symmetric_and_nonnegative(x in point(), y in point()) {
        let (sx, sy) = (Site::Point(x), Site::Point(y));
        prop_assert_eq!(d_rk(&sx, &sy), d_rk(&sy, &sx));
        prop_assert!(!d_rk(&sx, &sy).is_negative());
        prop_assert!(d_rk(&sx, &sx).is_zero());
        prop_assert_eq!(d_rk(&sx, &Site::Diagonal), d_rk(&Site::Diagonal, &sx));
    }

    #[test]
    fn w1_zero_on_diagonal_and_symmetric(a in measure(6), b in measure(6)) {
        prop_assert!(w1_rk(&a, &a).unwrap().0.is_zero());
        let (ab, plan) = w1_rk(&a, &b).unwrap();
        prop_assert_eq!(&ab, &w1_rk(&b, &a).unwrap().0);
        prop_assert_eq!(plan.source_marginal().unwrap(), a);
        prop_assert_eq!(plan.target_marginal().unwrap(), b);
        prop_assert_eq!(&plan.recomputed_cost(), &ab);
    }

    #[test]
    fn w1_matches_bruteforce(
        a in prop::collection::vec((point(), 1..=2i64), 0..=3),
        b in prop::collection::vec((point(), 1..=2i64), 0..=3),
        c in 1..=2i64,
    ) {
        let build = |atoms: Vec<(Point, i64)>| {
            let mut units = 0;
            let kept: Vec<_> = atoms
                .into_iter()
                .take_while(|(_, k)| { units += k; units <= 5 })
                .map(|(p, k)| (p, Rational::new(k, c)))
                .collect();
            PersistenceMeasure::from_atoms(kept).unwrap()
        };
        let (a, b) = (build(a), build(b));
        prop_assert_eq!(w1_rk(&a, &b).unwrap().0, w1_rk_bruteforce(&a, &b).unwrap());
    }

    #[test]
    fn stability_bound(a in measure(6), b in measure(6)) {
        let r = check_stability(&a, &b).unwrap();
        prop_assert!(r.holds, "{} > {}", r.lhs, r.rhs);
        let alone = check_stability(&a, &PersistenceMeasure::empty()).unwrap();
        prop_assert_eq!(alone.lhs, alone.rhs);
    }

    #[test]
    fn w1_scaling(a in measure(6), b in measure(6), c in positive(10)) {
        let w = w1_rk(&a, &b).unwrap().0;
        let wc = w1_rk(&a.scale(&c).unwrap(), &b.scale(&c).unwrap()).unwrap().0;
        prop_assert_eq!(wc, &c * &w);
    }

    #[test]
    fn mean_measure_consistency(samples in prop::collection::vec(diagram(5), 1..4), k in 1..=3u32, t in rational(11), h in positive(3)) {
        let r = compare_apl_cpl(&samples, k, &t, &h).unwrap();
        let mean = PersistenceMeasure::mean(&samples).unwrap();
        let kq = Rational::from_integer(k as i64);
        prop_assert_eq!(&r.cpl_value, &compute_landscape(&mean).unwrap().evaluate(&kq, &t).unwrap());
        prop_assert_eq!(&r.apl_value, &average_landscape(&samples).unwrap().evaluate(&kq, &t).unwrap());
        if r.hypothesis_mass {
            prop_assert!(r.cpl_value <= r.apl_value);
        }
    }

    #[test]
    fn average_of_copies(m in diagram(8), n in 1..5usize) {
        let copies = vec![m.clone(); n];
        prop_assert_eq!(average_landscape(&copies).unwrap(), compute_landscape(&m).unwrap());
    }

    #[test]
    fn rank_k_shift(m in diagram(8), k in 1..=6u32, probes in prop::collection::vec((positive(8), rational(11)), 20)) {
        let shifted = compute_landscape(&rank_k_transform(&m, k).unwrap()).unwrap();
        let l = compute_landscape(&m).unwrap();
        let offset = Rational::from_integer(k as i64 - 1);
        for (a, t) in probes {
            prop_assert_eq!(shifted.evaluate(&a, &t).unwrap(), l.evaluate(&(&a + &offset), &t).unwrap());
        }
    }

    #[test]
    fn text_round_trips(m in measure(12)) {
        prop_assert_eq!(&parse_diagram(&write_diagram(&m)).unwrap(), &m);
        let l = compute_landscape(&m).unwrap();
        prop_assert_eq!(parse_landscape(&write_landscape(&l)).unwrap(), l);
    }
}
