//! Seeded randomized property suite.
//!
//! Each numbered criterion draws from its own ChaCha stream derived from
//! the seed, so criteria can run concurrently and the report is a function
//! of the configuration alone.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aggregation::{compare_apl_cpl_with, rank_k_transform, Reading};
use crate::error::Result;
use crate::inversion::{nu0_quadrant, reconstruct, reconstruct_signed};
use crate::landscape::{compute_landscape, landscape_value_oracle, Band, Landscape};
use crate::measure::{PersistenceMeasure, Point, Quadrant, SignedMeasure};
use crate::profile::Profile;
use crate::rational::Rational;
use crate::transport::{check_stability_with_factor, w1_rk, w1_rk_bruteforce};
use crate::validate::validate_landscape;

/// Trial counts per criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trials {
    pub oracle_measures: usize,
    pub oracle_probes: usize,
    pub inverse_measures: usize,
    pub inverse_probes: usize,
    pub round_trips: usize,
    pub stability_pairs: usize,
    pub stability_empty: usize,
    pub bruteforce: usize,
    pub scaling: usize,
    pub apl_families: usize,
    pub rank_k: usize,
    pub signed: usize,
}

impl Default for Trials {
    fn default() -> Self {
        Self {
            oracle_measures: 200,
            oracle_probes: 50,
            inverse_measures: 200,
            inverse_probes: 100,
            round_trips: 200,
            stability_pairs: 1000,
            stability_empty: 50,
            bruteforce: 500,
            scaling: 100,
            apl_families: 100,
            rank_k: 100,
            signed: 100,
        }
    }
}

impl Trials {
    /// Every count divided by `divisor`, keeping at least one trial.
    pub fn reduced(&self, divisor: usize) -> Self {
        let d = |n: usize| (n / divisor.max(1)).max(1);
        Self {
            oracle_measures: d(self.oracle_measures),
            oracle_probes: d(self.oracle_probes),
            inverse_measures: d(self.inverse_measures),
            inverse_probes: d(self.inverse_probes),
            round_trips: d(self.round_trips),
            stability_pairs: d(self.stability_pairs),
            stability_empty: d(self.stability_empty),
            bruteforce: d(self.bruteforce),
            scaling: d(self.scaling),
            apl_families: d(self.apl_families),
            rank_k: d(self.rank_k),
            signed: d(self.signed),
        }
    }
}

/// Size bounds of the random instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sizes {
    /// Atoms per measure in the oracle and axiom criteria.
    pub max_atoms: usize,
    /// Atoms per measure where reconstruction or transport is involved.
    pub max_atoms_small: usize,
    /// Largest denominator of random coordinates and weights.
    pub max_denominator: i64,
    /// Coordinates are drawn from `[0, coord_max]`.
    pub coord_max: i64,
    /// Unit atoms per side for the brute-force comparison.
    pub bruteforce_units: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Self {
            max_atoms: 30,
            max_atoms_small: 12,
            max_denominator: 8,
            coord_max: 10,
            bruteforce_units: 5,
        }
    }
}

/// Deliberate defects for checking that the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutant {
    /// Stability bound compared against `W_1` instead of `W_1 / 2`.
    DropHalf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: Trials,
    pub sizes: Sizes,
    pub mutant: Option<Mutant>,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            trials: Trials::default(),
            sizes: Sizes::default(),
            mutant: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub notes: Vec<String>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{status}] {:>2} {}: {} checks, {} failures",
            self.id, self.title, self.checks, self.failures
        )?;
        for n in &self.notes {
            write!(f, "\n       {n}")?;
        }
        if let Some(w) = &self.first_failure {
            write!(f, "\n       first failure: {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(CriterionResult::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite seed {}", self.seed)?;
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let passed = self.results.iter().filter(|r| r.passed()).count();
        writeln!(f, "{passed}/{} criteria passed", self.results.len())
    }
}

/// Ids of the criteria run by [`run_suite`].
pub const CRITERIA: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|&id| s.spawn(move || run_criterion(id, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect()
    });
    SuiteReport {
        seed: config.seed,
        results,
    }
}

pub fn run_criterion(id: u8, config: &SuiteConfig) -> CriterionResult {
    let mut rng = stream(config.seed, id as u64);
    let (title, tally) = match id {
        1 => ("oracle equivalence", oracle_equivalence(config)),
        2 => ("landscape axioms", landscape_axioms(config)),
        3 => ("generalized inverse", generalized_inverse(config, &mut rng)),
        4 => ("round trip", round_trip(config, &mut rng)),
        5 => ("stability", stability(config, &mut rng)),
        6 => ("solver vs brute force", solver_vs_bruteforce(config, &mut rng)),
        7 => ("scaling identities", scaling(config, &mut rng)),
        8 => ("apl dominance", apl_dominance(config, &mut rng)),
        9 => ("rank_k shift", rank_k_shift(config, &mut rng)),
        10 => ("signed round trip", signed_round_trip(config, &mut rng)),
        _ => panic!("no criterion {id}"),
    };
    CriterionResult {
        id,
        title,
        checks: tally.checks,
        failures: tally.failures,
        first_failure: tally.first_failure,
        notes: tally.notes,
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    first_failure: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(describe());
        }
    }

    fn fail(&mut self, why: String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(why);
        }
    }

    /// Records `f`'s checks, or one failure if it errors.
    fn run(&mut self, context: impl Fn() -> String, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.checks += 1;
            self.fail(format!("{}: {e}", context()));
        }
    }
}

/// Random instances on a rational grid.
pub mod gen {
    use super::*;

    pub fn rational(rng: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
        let d = rng.gen_range(1..=max_den);
        let n = rng.gen_range(lo * d..=hi * d);
        Rational::new(n, d)
    }

    pub fn point(rng: &mut impl Rng, s: &Sizes) -> Point {
        loop {
            let x = rational(rng, 0, s.coord_max, s.max_denominator);
            let y = rational(rng, 0, s.coord_max, s.max_denominator);
            if x != y {
                let (b, d) = if x < y { (x, y) } else { (y, x) };
                return Point::new(b, d).unwrap();
            }
        }
    }

    /// Positive weight at most `max`, denominator at most `max_den`.
    pub fn weight(rng: &mut impl Rng, max: i64, max_den: i64) -> Rational {
        let d = rng.gen_range(1..=max_den);
        Rational::new(rng.gen_range(1..=max * d), d)
    }

    pub fn measure(rng: &mut impl Rng, max_atoms: usize, s: &Sizes) -> PersistenceMeasure {
        let n = rng.gen_range(0..=max_atoms);
        let atoms: Vec<_> = (0..n)
            .map(|_| (point(rng, s), weight(rng, 2, s.max_denominator)))
            .collect();
        PersistenceMeasure::from_atoms(atoms).unwrap()
    }

    /// Integer weights in `1..=max_weight`.
    pub fn diagram(rng: &mut impl Rng, max_atoms: usize, max_weight: i64, s: &Sizes) -> PersistenceMeasure {
        let n = rng.gen_range(0..=max_atoms);
        let atoms: Vec<_> = (0..n)
            .map(|_| (point(rng, s), Rational::from_integer(rng.gen_range(1..=max_weight))))
            .collect();
        PersistenceMeasure::from_atoms(atoms).unwrap()
    }

    /// Measures biased towards coincidences: shared births and deaths from
    /// a small coordinate pool, repeated points and large weights.
    pub fn degenerate_measure(rng: &mut impl Rng, max_atoms: usize, s: &Sizes) -> PersistenceMeasure {
        let pool: Vec<Rational> = (0..rng.gen_range(2..=5))
            .map(|_| rational(rng, 0, s.coord_max, 2))
            .collect();
        let n = rng.gen_range(1..=max_atoms);
        let mut atoms = Vec::new();
        while atoms.len() < n {
            let x = pool.choose(rng).unwrap().clone();
            let y = pool.choose(rng).unwrap().clone();
            if x == y {
                if pool.iter().all(|p| p == &x) {
                    break;
                }
                continue;
            }
            let (b, d) = if x < y { (x, y) } else { (y, x) };
            let w = if rng.gen_bool(0.5) {
                Rational::from_integer(rng.gen_range(1..=10))
            } else {
                weight(rng, 10, s.max_denominator)
            };
            atoms.push((Point::new(b, d).unwrap(), w));
        }
        PersistenceMeasure::from_atoms(atoms).unwrap()
    }

    /// Critical abscissae of `m`: births, deaths and midpoints of pairs.
    pub fn critical_ts(m: &PersistenceMeasure) -> Vec<Rational> {
        let ends: Vec<Rational> = m
            .atoms()
            .flat_map(|(p, _)| [p.birth().clone(), p.death().clone()])
            .collect();
        let mut ts: Vec<Rational> = ends.clone();
        for (i, x) in ends.iter().enumerate() {
            for y in &ends[i + 1..] {
                ts.push(x.midpoint(y));
            }
        }
        ts.sort();
        ts.dedup();
        ts
    }

    /// A level in `(0, cap]` that is either random or a partial sum of weights.
    pub fn level(rng: &mut impl Rng, m: &PersistenceMeasure, cap: &Rational) -> Rational {
        let weights: Vec<&Rational> = m.atoms().map(|(_, w)| w).collect();
        if !weights.is_empty() && rng.gen_bool(0.4) {
            let mut ws = weights.clone();
            ws.shuffle(rng);
            let k = rng.gen_range(1..=ws.len());
            return ws[..k].iter().copied().sum();
        }
        let d = rng.gen_range(1..=16);
        let top = (cap * &Rational::from_integer(d)).floor().to_integer_i128().unwrap().max(1) as i64;
        Rational::new(rng.gen_range(1..=top), d)
    }

    pub fn abscissa(rng: &mut impl Rng, critical: &[Rational], s: &Sizes) -> Rational {
        if !critical.is_empty() && rng.gen_bool(0.4) {
            critical.choose(rng).unwrap().clone()
        } else {
            rational(rng, -1, s.coord_max + 1, 2 * s.max_denominator)
        }
    }
}

fn oracle_measures(config: &SuiteConfig) -> Vec<PersistenceMeasure> {
    let mut rng = stream(config.seed, 101);
    (0..config.trials.oracle_measures)
        .map(|_| gen::measure(&mut rng, config.sizes.max_atoms, &config.sizes))
        .collect()
}

fn oracle_equivalence(config: &SuiteConfig) -> Tally {
    let mut rng = stream(config.seed, 1);
    let mut tally = Tally::default();
    for (i, m) in oracle_measures(config).into_iter().enumerate() {
        tally.run(
            || format!("measure {i}"),
            |tally| {
                let l = compute_landscape(&m)?;
                let critical = gen::critical_ts(&m);
                let cap = m.total_mass() + Rational::one();
                for _ in 0..config.trials.oracle_probes {
                    let a = gen::level(&mut rng, &m, &cap);
                    let t = gen::abscissa(&mut rng, &critical, &config.sizes);
                    let got = l.evaluate(&a, &t)?;
                    let want = landscape_value_oracle(&m, &a, &t)?;
                    tally.check(got == want, || {
                        format!("measure {i} {m:?} at a = {a}, t = {t}: {got} != oracle {want}")
                    });
                }
                Ok(())
            },
        );
    }
    tally
}

/// Hand-built landscapes, each failing exactly the numbered property.
pub fn property_counterexamples() -> Vec<(usize, Landscape)> {
    let r = |n: i64, d: i64| Rational::new(n, d);
    let tent = |b: Rational, d: Rational| {
        let mid = b.midpoint(&d);
        let h = (&d - &b).half();
        Profile::new(vec![(b, Rational::zero()), (mid, h), (d, Rational::zero())]).unwrap()
    };
    let bump = Profile::new(vec![
        (r(0, 1), r(0, 1)),
        (r(3, 2), r(3, 2)),
        (r(3, 1), r(0, 1)),
    ])
    .unwrap();
    let increasing = Landscape::new(vec![
        Band::new(r(0, 1), r(1, 1), tent(r(0, 1), r(2, 1))).unwrap(),
        Band::new(r(1, 1), r(2, 1), bump).unwrap(),
    ])
    .unwrap();

    let shallow = Profile::from_breakpoints(vec![
        (r(0, 1), r(0, 1)),
        (r(2, 1), r(1, 1)),
        (r(4, 1), r(0, 1)),
    ])
    .unwrap();
    let not_lipschitz = Landscape::new(vec![Band::new(r(0, 1), r(1, 1), shallow).unwrap()]).unwrap();

    let right_continuous = Landscape::from_raw_bands(vec![
        Band::closed_open(r(0, 1), r(1, 1), tent(r(0, 1), r(2, 1))).unwrap(),
        Band::closed_open(r(1, 1), r(2, 1), tent(r(1, 2), r(3, 2))).unwrap(),
    ])
    .unwrap();

    // landscape of the signed measure 2 d(0,2) + d(1,3) - d(1,2): every
    // quadrant mass is non-negative but the mass at (1,2) is -1
    let envelope = Profile::new(vec![
        (r(0, 1), r(0, 1)),
        (r(1, 1), r(1, 1)),
        (r(3, 2), r(1, 2)),
        (r(2, 1), r(1, 1)),
        (r(3, 1), r(0, 1)),
    ])
    .unwrap();
    let signed = Landscape::new(vec![
        Band::new(r(0, 1), r(1, 1), envelope).unwrap(),
        Band::new(r(1, 1), r(2, 1), tent(r(0, 1), r(2, 1))).unwrap(),
    ])
    .unwrap();

    vec![
        (1, increasing),
        (2, not_lipschitz),
        (3, right_continuous),
        (4, signed),
    ]
}

fn landscape_axioms(config: &SuiteConfig) -> Tally {
    let mut tally = Tally::default();
    for (i, m) in oracle_measures(config).into_iter().enumerate() {
        tally.run(
            || format!("measure {i}"),
            |tally| {
                let report = validate_landscape(&compute_landscape(&m)?);
                tally.check(report.all_pass(), || format!("measure {i} {m:?}: {}", report.summary()));
                Ok(())
            },
        );
    }
    for (property, l) in property_counterexamples() {
        let failed = validate_landscape(&l).failed();
        tally.check(failed == vec![property], || {
            format!("counterexample for ({property}) fails {failed:?}")
        });
    }
    tally
}

fn generalized_inverse(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Tally {
    let s = &config.sizes;
    let mut tally = Tally::default();
    for i in 0..config.trials.inverse_measures {
        let m = gen::measure(rng, s.max_atoms_small, s);
        tally.run(
            || format!("measure {i}"),
            |tally| {
                let l = compute_landscape(&m)?;
                let mut probes = Vec::new();
                // quadrant membership of an atom changes where t - h = b or t + h = d
                for t in gen::critical_ts(&m) {
                    let mut hs = vec![Rational::zero()];
                    for (p, _) in m.atoms() {
                        for h in [&t - p.birth(), p.death() - &t] {
                            if !h.is_negative() {
                                hs.push(h);
                            }
                        }
                    }
                    hs.sort();
                    hs.dedup();
                    let mut between: Vec<Rational> = hs.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
                    between.push(hs.last().unwrap() + &Rational::one());
                    probes.extend(hs.into_iter().chain(between).map(|h| (t.clone(), h)));
                }
                for _ in 0..config.trials.inverse_probes {
                    let t = gen::rational(rng, -1, s.coord_max + 1, 2 * s.max_denominator);
                    let h = gen::rational(rng, 0, s.coord_max / 2 + 1, 2 * s.max_denominator);
                    probes.push((t, h));
                }
                for (t, h) in probes {
                    let got = nu0_quadrant(&l, &t, &h)?;
                    let want = m.quadrant_mass(&Quadrant::open(t.clone(), h.clone())?);
                    tally.check(got == want, || {
                        format!("measure {m:?} at t = {t}, h = {h}: nu0 {got} != mass {want}")
                    });
                }
                Ok(())
            },
        );
    }
    tally
}

fn round_trip(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Tally {
    let s = &config.sizes;
    let mut tally = Tally::default();
    let mut degenerate = 0;
    for i in 0..config.trials.round_trips {
        let m = if i % 2 == 0 {
            gen::measure(rng, s.max_atoms_small, s)
        } else {
            degenerate += 1;
            gen::degenerate_measure(rng, s.max_atoms_small, s)
        };
        tally.run(
            || format!("measure {m:?}"),
            |tally| {
                let back = reconstruct(&compute_landscape(&m)?)?;
                tally.check(back == m, || format!("{m:?} came back as {back:?}"));
                Ok(())
            },
        );
    }
    tally
        .notes
        .push(format!("{degenerate} measures with shared coordinates and weights up to 10"));
    tally
}

fn stability(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Tally {
    let s = &config.sizes;
    let factor = match config.mutant {
        Some(Mutant::DropHalf) => Rational::one(),
        None => Rational::new(1, 2),
    };
    let mut tally = Tally::default();
    let mut tight = 0;
    for _ in 0..config.trials.stability_pairs {
        let m1 = gen::measure(rng, 6, s);
        let m2 = gen::measure(rng, 6, s);
        tally.run(
            || format!("pair {m1:?}, {m2:?}"),
            |tally| {
                let r = check_stability_with_factor(&m1, &m2, &factor)?;
                if r.lhs == r.rhs {
                    tight += 1;
                }
                tally.check(r.holds, || format!("{m1:?} vs {m2:?}: {} > {}", r.lhs, r.rhs));
                Ok(())
            },
        );
    }
    let empty = PersistenceMeasure::empty();
    for _ in 0..config.trials.stability_empty {
        let m = gen::measure(rng, s.max_atoms_small, s);
        tally.run(
            || format!("measure {m:?} vs empty"),
            |tally| {
                let r = check_stability_with_factor(&m, &empty, &factor)?;
                let closed_form: Rational = m
                    .atoms()
                    .map(|(p, w)| w * &p.persistence() * p.persistence() / Rational::from_integer(4))
                    .sum();
                tally.check(r.lhs == r.rhs && r.lhs == closed_form, || {
                    format!("{m:?} vs empty: lhs {}, rhs {}, closed form {closed_form}", r.lhs, r.rhs)
                });
                Ok(())
            },
        );
    }
    tally
        .notes
        .push(format!("{tight} random pairs attain equality"));
    tally
}

/// Weights are multiples of `1/c` with at most `bruteforce_units` units in total.
fn unit_measure(rng: &mut ChaCha8Rng, c: i64, s: &Sizes) -> PersistenceMeasure {
    let units = rng.gen_range(0..=s.bruteforce_units);
    let mut atoms = Vec::new();
    let mut left = units;
    while left > 0 {
        let k = rng.gen_range(1..=left);
        atoms.push((gen::point(rng, s), Rational::new(k as i64, c)));
        left -= k;
    }
    PersistenceMeasure::from_atoms(atoms).unwrap()
}

fn solver_vs_bruteforce(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Tally {
    let s = &config.sizes;
    let mut tally = Tally::default();
    for _ in 0..config.trials.bruteforce {
        let c = rng.gen_range(1..=3i64);
        let m1 = unit_measure(rng, c, s);
        let m2 = unit_measure(rng, c, s);
        tally.run(
            || format!("pair {m1:?}, {m2:?}"),
            |tally| {
                let (w, plan) = w1_rk(&m1, &m2)?;
                let brute = w1_rk_bruteforce(&m1, &m2)?;
                tally.check(w == brute, || format!("{m1:?} vs {m2:?}: solver {w}, brute force {brute}"));
                let marginals = plan.source_marginal()? == m1 && plan.target_marginal()? == m2;
                tally.check(marginals && plan.recomputed_cost() == w, || {
                    format!("{m1:?} vs {m2:?}: plan {plan:?} is not a coupling of cost {w}")
                });
                Ok(())
            },
        );
    }
    tally
}

fn scaling(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Tally {
    let s = &config.sizes;
    let mut tally = Tally::default();
    for _ in 0..config.trials.scaling {
        let mu = gen::measure(rng, 8, s);
        let nu = gen::measure(rng, 8, s);
        let d = rng.gen_range(1..=s.max_denominator);
        let c = Rational::new(rng.gen_range(1..=10 * d), d);
        tally.run(
            || format!("triple {mu:?}, {nu:?}, {c}"),
            |tally| {
                let cmu = mu.scale(&c)?;
                let l = compute_landscape(&mu)?;
                let lc = compute_landscape(&cmu)?;
                let critical = gen::critical_ts(&mu);
                let cap = cmu.total_mass() + Rational::one();
                for _ in 0..20 {
                    let a = gen::level(rng, &cmu, &cap);
                    let t = gen::abscissa(rng, &critical, s);
                    let lhs = lc.evaluate(&a, &t)?;
                    let rhs = l.evaluate(&(&a / &c), &t)?;
                    tally.check(lhs == rhs, || {
                        format!("{mu:?}, c = {c}, a = {a}, t = {t}: {lhs} != {rhs}")
                    });
                }
                let (w, _) = w1_rk(&mu, &nu)?;
                let (wc, _) = w1_rk(&cmu, &nu.scale(&c)?)?;
                tally.check(wc == &c * &w, || format!("{mu:?}, {nu:?}, c = {c}: {wc} != {c} * {w}"));
                Ok(())
            },
        );
    }
    tally
}

/// Samples each with exactly `k` unit points in the closed quadrant
/// `Q_{t,h}` and a few points outside it.
fn apl_family(rng: &mut ChaCha8Rng, k: usize, t: &Rational, h: &Rational) -> Vec<PersistenceMeasure> {
    let (x, y) = (t - h, t + h);
    let n = rng.gen_range(2..=5);
    (0..n)
        .map(|_| {
            let mut inside: Vec<Point> = Vec::new();
            while inside.len() < k {
                let b = &x - &gen::rational(rng, 0, 3, 4);
                let d = &y + &gen::rational(rng, 0, 3, 4);
                let p = Point::new(b, d).unwrap();
                if !inside.contains(&p) {
                    inside.push(p);
                }
            }
            let outside = (0..rng.gen_range(0..=3)).map(|_| {
                // born after t - h, so never in the quadrant
                let b = &x + &gen::rational(rng, 1, 6, 4);
                let d = &b + &gen::rational(rng, 1, 4, 4);
                Point::new(b, d).unwrap()
            });
            let atoms: Vec<(Point, Rational)> = inside
                .into_iter()
                .chain(outside)
                .map(|p| (p, Rational::one()))
                .collect();
            PersistenceMeasure::from_atoms(atoms).unwrap()
        })
        .collect()
}

fn apl_dominance(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Tally {
    let mut tally = Tally::default();
    let mut strict = 0;
    for i in 0..config.trials.apl_families {
        let k = 1 + i % 3;
        let t = gen::rational(rng, 3, 7, 4);
        let h = gen::rational(rng, 1, 2, 4);
        let family = apl_family(rng, k, &t, &h);
        tally.run(
            || format!("family {i}"),
            |tally| {
                for reading in [Reading::DistinctPoints, Reading::Mass] {
                    let r = compare_apl_cpl_with(&family, k as u32, &t, &h, reading)?;
                    tally.check(r.dominance == Some(true), || {
                        format!(
                            "family {family:?}, k = {k}, t = {t}, h = {h}: {reading:?} hypothesis {}, cpl {} apl {}",
                            r.hypothesis_distinct, r.cpl_value, r.apl_value
                        )
                    });
                    if reading == Reading::DistinctPoints && r.cpl_value < r.apl_value {
                        strict += 1;
                    }
                }
                let copies = vec![family[0].clone(); family.len()];
                let r = compare_apl_cpl_with(&copies, k as u32, &t, &h, Reading::DistinctPoints)?;
                tally.check(r.cpl_value == r.apl_value, || {
                    format!("identical samples {:?}: cpl {} != apl {}", family[0], r.cpl_value, r.apl_value)
                });
                Ok(())
            },
        );
    }
    tally.notes.push(format!("strict inequality in {strict} families"));
    tally
}

fn rank_k_shift(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Tally {
    let s = &config.sizes;
    let mut tally = Tally::default();
    for _ in 0..config.trials.rank_k {
        let m = loop {
            let m = gen::diagram(rng, 8, 3, s);
            if !m.is_empty() {
                break m;
            }
        };
        let total = m.total_mass().to_integer_i128().unwrap() as u32;
        let k = rng.gen_range(1..=total);
        tally.run(
            || format!("{m:?}, k = {k}"),
            |tally| {
                let shifted = compute_landscape(&rank_k_transform(&m, k)?)?;
                let l = compute_landscape(&m)?;
                let critical = gen::critical_ts(&m);
                let cap = m.total_mass() + Rational::one();
                let offset = Rational::from_integer(k as i64 - 1);
                for _ in 0..20 {
                    let a = gen::level(rng, &m, &cap);
                    let t = gen::abscissa(rng, &critical, s);
                    let lhs = shifted.evaluate(&a, &t)?;
                    let rhs = l.evaluate(&(&a + &offset), &t)?;
                    tally.check(lhs == rhs, || format!("{m:?}, k = {k}, a = {a}, t = {t}: {lhs} != {rhs}"));
                }
                Ok(())
            },
        );
    }
    tally
}

fn signed_round_trip(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Tally {
    let s = &config.sizes;
    let mut tally = Tally::default();
    for _ in 0..config.trials.signed {
        let pos = gen::measure(rng, s.max_atoms_small / 2, s);
        let neg_atoms: Vec<_> = gen::measure(rng, s.max_atoms_small / 2, s)
            .atoms()
            .filter(|(p, _)| pos.weight(p).is_none())
            .map(|(p, w)| (p.clone(), w.clone()))
            .collect();
        let neg = PersistenceMeasure::from_atoms(neg_atoms).unwrap();
        let jordan = SignedMeasure::new(pos, neg).unwrap();
        tally.run(
            || format!("{jordan:?}"),
            |tally| {
                let back = reconstruct_signed(&compute_landscape(jordan.pos())?, &compute_landscape(jordan.neg())?)?;
                tally.check(back == jordan, || format!("{jordan:?} came back as {back:?}"));
                Ok(())
            },
        );
    }
    tally
}
