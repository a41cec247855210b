//! Continuous persistence landscapes `lambda(a, t) = sup{h > 0 : mu(Q_{t,h}) >= a}`.
//!
//! A [`Landscape`] stores `lambda` as a finite list of level bands. Band `k`
//! covers levels `a` in the half-open interval `(lo_k, hi_k]` and carries one
//! profile `t -> lambda(a, t)` valid for every level in it. Bands open on the
//! left make `lambda(-, t)` left-continuous by construction.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::measure::{PersistenceMeasure, Point};
use crate::profile::Profile;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Band {
    lo: Rational,
    hi: Rational,
    profile: Profile,
    // [lo, hi) instead of (lo, hi]; only in raw landscapes
    closed_lo: bool,
}

impl Band {
    /// The level band `(lo, hi]`.
    pub fn new(lo: Rational, hi: Rational, profile: Profile) -> Result<Self> {
        if lo.is_negative() || lo >= hi {
            return Err(Error::MalformedLandscape(format!(
                "band ({lo}, {hi}] needs 0 <= lo < hi"
            )));
        }
        Ok(Self {
            lo,
            hi,
            profile,
            closed_lo: false,
        })
    }

    /// The level band `[lo, hi)`, which only raw landscapes may hold. A
    /// nonzero profile on such a band makes `lambda(-, t)` jump at `hi`.
    pub fn closed_open(lo: Rational, hi: Rational, profile: Profile) -> Result<Self> {
        Ok(Self {
            closed_lo: true,
            ..Self::new(lo, hi, profile)?
        })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn is_closed_open(&self) -> bool {
        self.closed_lo
    }

    pub fn covers(&self, a: &Rational) -> bool {
        if self.closed_lo {
            &self.lo <= a && a < &self.hi
        } else {
            &self.lo < a && a <= &self.hi
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.closed_lo {
            write!(f, "[{}, {})", self.lo, self.hi)
        } else {
            write!(f, "({}, {}]", self.lo, self.hi)
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Landscape {
    bands: Vec<Band>,
    // contiguous from 0 and pointwise non-increasing; enables binary search
    monotone: bool,
}

impl PartialEq for Landscape {
    fn eq(&self, other: &Self) -> bool {
        self.bands == other.bands
    }
}

impl Eq for Landscape {}

impl Landscape {
    pub fn empty() -> Self {
        Self {
            bands: Vec::new(),
            monotone: true,
        }
    }

    /// Builds a canonical landscape from bands that partition `(0, a_max]`.
    /// Equal adjacent bands are merged and trailing zero bands dropped.
    pub fn new(bands: Vec<Band>) -> Result<Self> {
        if let Some(b) = bands.iter().find(|b| b.closed_lo) {
            return Err(Error::MalformedLandscape(format!(
                "band {b} must be open on the left"
            )));
        }
        check_contiguous(&bands).map_err(Error::MalformedLandscape)?;
        let mut merged: Vec<Band> = Vec::with_capacity(bands.len());
        for band in bands {
            match merged.last_mut() {
                Some(last) if last.profile == band.profile => last.hi = band.hi,
                _ => merged.push(band),
            }
        }
        while merged.last().is_some_and(|b| b.profile.is_zero()) {
            merged.pop();
        }
        Ok(Self::raw_unchecked(merged))
    }

    /// Stores bands exactly as given; they need only be sorted and
    /// non-overlapping. Gaps, a first band not starting at zero, `[lo, hi)`
    /// bands, increasing profiles and duplicate neighbours are all kept, so that
    /// [`validate_landscape`](crate::validate::validate_landscape) can report
    /// on them.
    pub fn from_raw_bands(bands: Vec<Band>) -> Result<Self> {
        for w in bands.windows(2) {
            let touching_both = w[1].lo == w[0].hi && !w[0].closed_lo && w[1].closed_lo;
            if w[1].lo < w[0].hi || touching_both {
                return Err(Error::MalformedLandscape(format!(
                    "bands {} and {} overlap or are unsorted",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self::raw_unchecked(bands))
    }

    fn raw_unchecked(bands: Vec<Band>) -> Self {
        let monotone = check_contiguous(&bands).is_ok()
            && bands.iter().all(|b| !b.closed_lo)
            && bands
                .windows(2)
                .all(|w| w[1].profile.dominated_by(&w[0].profile).is_none());
        Self { bands, monotone }
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn is_empty(&self) -> bool {
        self.bands.is_empty()
    }

    /// Supremum of levels with a nonzero profile; `lambda = 0` above it.
    pub fn a_max(&self) -> Rational {
        self.bands.last().map(|b| b.hi.clone()).unwrap_or_default()
    }

    pub(crate) fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// The band whose level interval contains `a`, if any.
    pub fn band_at(&self, a: &Rational) -> Option<&Band> {
        let i = self
            .bands
            .partition_point(|b| &b.hi < a || (b.closed_lo && &b.hi == a));
        self.bands.get(i).filter(|b| b.covers(a))
    }

    pub fn evaluate(&self, a: &Rational, t: &Rational) -> Result<Rational> {
        if !a.is_positive() {
            return Err(Error::NonPositiveLevel(a.clone()));
        }
        Ok(self
            .band_at(a)
            .map(|b| b.profile.eval(t))
            .unwrap_or_default())
    }

    pub fn l1_norm(&self) -> Rational {
        self.bands
            .iter()
            .map(|b| b.width() * b.profile.integral())
            .sum()
    }

    /// `integral integral |lambda_1 - lambda_2| dt da` over a common
    /// refinement of both band partitions.
    pub fn l1_distance(&self, other: &Self) -> Rational {
        let levels: BTreeSet<&Rational> = self
            .bands
            .iter()
            .chain(other.bands.iter())
            .flat_map(|b| [&b.lo, &b.hi])
            .collect();
        let zero = Profile::zero();
        let mut total = Rational::zero();
        let mut prev: Option<&Rational> = None;
        for hi in levels {
            if let Some(lo) = prev {
                let mid = lo.midpoint(hi);
                let p1 = self.band_at(&mid).map_or(&zero, |b| &b.profile);
                let p2 = other.band_at(&mid).map_or(&zero, |b| &b.profile);
                if p1 != p2 {
                    total += (hi - lo) * p1.l1_distance(p2);
                }
            }
            prev = Some(hi);
        }
        total
    }

    /// Every profile breakpoint `(t, h)` across all bands, deduplicated.
    pub fn corners(&self) -> BTreeSet<(Rational, Rational)> {
        self.bands
            .iter()
            .flat_map(|b| b.profile.breakpoints().iter().cloned())
            .collect()
    }
}

/// `Ok` when bands start at zero and each begins where the previous ends.
pub(crate) fn check_contiguous(bands: &[Band]) -> std::result::Result<(), String> {
    if let Some(first) = bands.first() {
        if !first.lo.is_zero() {
            return Err(format!("first band starts at {}, not 0", first.lo));
        }
    }
    for w in bands.windows(2) {
        if w[0].hi != w[1].lo {
            return Err(format!(
                "band {} is not followed contiguously by {}",
                w[0], w[1]
            ));
        }
    }
    Ok(())
}

/// `lambda(a, t)` computed straight from the atoms: the tent value at which
/// the descending cumulative weight first reaches `a`, or 0.
pub fn landscape_value_oracle(m: &PersistenceMeasure, a: &Rational, t: &Rational) -> Result<Rational> {
    if !a.is_positive() {
        return Err(Error::NonPositiveLevel(a.clone()));
    }
    let mut tents: Vec<(Rational, &Rational)> = m
        .atoms()
        .map(|(p, w)| (p.tent(t), w))
        .filter(|(v, _)| v.is_positive())
        .collect();
    tents.sort_by(|x, y| y.0.cmp(&x.0));
    let mut cumulative = Rational::zero();
    for (v, w) in tents {
        cumulative += w;
        if &cumulative >= a {
            return Ok(v);
        }
    }
    Ok(Rational::zero())
}

/// Sorted tent values at one abscissa, grouped by value: `(cumulative
/// integer weight through this group, value)`, values strictly decreasing.
struct LevelSteps {
    steps: Vec<(Rational, Rational)>,
}

impl LevelSteps {
    fn at(t: &Rational, atoms: &[(Point, Rational)]) -> Self {
        let mut vals: Vec<(Rational, &Rational)> = atoms
            .iter()
            .map(|(p, n)| (p.tent(t), n))
            .filter(|(v, _)| v.is_positive())
            .collect();
        vals.sort_by(|x, y| y.0.cmp(&x.0));
        let mut steps: Vec<(Rational, Rational)> = Vec::new();
        let mut cumulative = Rational::zero();
        for (v, n) in vals {
            cumulative += n;
            match steps.last_mut() {
                Some(last) if last.1 == v => last.0 = cumulative.clone(),
                _ => steps.push((cumulative.clone(), v)),
            }
        }
        Self { steps }
    }

    /// Value at integer level `k`: the first group whose cumulative weight
    /// reaches `k`.
    fn value(&self, k: &Rational) -> Rational {
        let i = self.steps.partition_point(|(c, _)| c < k);
        self.steps.get(i).map(|s| s.1.clone()).unwrap_or_default()
    }
}

/// Abscissae where the order of the tents can change: births, deaths,
/// peaks, and crossings of a rising edge with a falling edge.
fn critical_abscissae(atoms: &[(Point, Rational)]) -> Vec<Rational> {
    let mut ts: BTreeSet<Rational> = BTreeSet::new();
    for (p, _) in atoms {
        ts.insert(p.birth().clone());
        ts.insert(p.death().clone());
        ts.insert(p.midpoint());
    }
    for (rising, _) in atoms {
        for (falling, _) in atoms {
            let t = rising.birth().midpoint(falling.death());
            let inside = |p: &Point| p.birth() < &t && &t < p.death();
            if inside(rising) && inside(falling) {
                ts.insert(t);
            }
        }
    }
    ts.into_iter().collect()
}

/// Computes the exact landscape of `m`.
///
/// The weights are first scaled by their common denominator `c`, so that
/// `c * m` is an integer-weighted diagram whose classical landscapes
/// `lambda_1 >= lambda_2 >= ...` are the k-th largest tent envelopes; the
/// continuous landscape places `lambda_k` on the level band
/// `((k - 1)/c, k/c]`. Consecutive `lambda_k` only differ at cumulative
/// weights reached at some critical abscissa, so the envelope sweep emits
/// one band per such weight instead of one per unit level.
pub fn compute_landscape(m: &PersistenceMeasure) -> Result<Landscape> {
    if m.is_empty() {
        return Ok(Landscape::empty());
    }
    let c = Rational::from_int(m.common_denominator()?);
    let mut atoms: Vec<(Point, Rational)> = Vec::with_capacity(m.len());
    for (p, w) in m.atoms() {
        atoms.push((p.clone(), w.checked_mul(&c)?));
    }
    let ts = critical_abscissae(&atoms);
    let sweep: Vec<LevelSteps> = ts.iter().map(|t| LevelSteps::at(t, &atoms)).collect();

    let levels: BTreeSet<Rational> = sweep
        .iter()
        .flat_map(|s| s.steps.iter().map(|(k, _)| k.clone()))
        .collect();

    let mut bands = Vec::with_capacity(levels.len());
    let mut lo = Rational::zero();
    for k in levels {
        let points: Vec<(Rational, Rational)> = ts
            .iter()
            .zip(&sweep)
            .map(|(t, s)| (t.clone(), s.value(&k)))
            .collect();
        let profile = Profile::new(points)?;
        let hi = k.checked_div(&c)?;
        bands.push(Band::new(lo, hi.clone(), profile)?);
        lo = hi;
    }
    Landscape::new(bands)
}
