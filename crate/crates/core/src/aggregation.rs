//! Average landscapes of diagram samples, against the landscape of their
//! mean measure, and the level-shifting `rank_k` transform.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::inversion::reconstruct;
use crate::landscape::{compute_landscape, Band, Landscape};
use crate::measure::{PersistenceMeasure, Quadrant};
use crate::profile::Profile;
use crate::rational::Rational;

fn require_samples(samples: &[PersistenceMeasure]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptyMean);
    }
    samples.iter().try_for_each(PersistenceMeasure::require_integer_weights)
}

/// Pointwise mean of the landscapes of integer-weight diagrams.
///
/// Each diagram's landscape has integer band boundaries, so the mean is
/// taken per band of the union of boundaries. Profiles of the mean may have
/// slopes outside `{-1, 0, 1}`.
pub fn average_landscape(samples: &[PersistenceMeasure]) -> Result<Landscape> {
    require_samples(samples)?;
    let landscapes: Vec<Landscape> = samples.iter().map(compute_landscape).collect::<Result<_>>()?;
    average_of(&landscapes)
}

fn average_of(landscapes: &[Landscape]) -> Result<Landscape> {
    let mut cuts: BTreeSet<Rational> = BTreeSet::new();
    for l in landscapes {
        for b in l.bands() {
            cuts.insert(b.hi().clone());
        }
    }
    let n = Rational::from_integer(landscapes.len() as i64);
    let mut bands = Vec::with_capacity(cuts.len());
    let mut lo = Rational::zero();
    for hi in cuts {
        let sum = landscapes.iter().fold(Profile::zero(), |acc, l| match l.band_at(&hi) {
            Some(b) => acc.add(b.profile()),
            None => acc,
        });
        bands.push(Band::new(lo, hi.clone(), sum.scale(&n.recip()))?);
        lo = hi;
    }
    Landscape::new(bands)
}

/// How "each sample has exactly `k` points in the closed quadrant" is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// `k` distinct support points, multiplicities ignored.
    DistinctPoints,
    /// Total closed-quadrant mass `k`.
    Mass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AplComparison {
    pub k: u32,
    pub t: Rational,
    pub h: Rational,
    pub hypothesis_distinct: bool,
    pub hypothesis_mass: bool,
    /// Landscape of the mean measure at level `k`.
    pub cpl_value: Rational,
    /// Average landscape at level `k`.
    pub apl_value: Rational,
    pub reading: Reading,
    /// `cpl_value <= apl_value`, present when the hypothesis holds under
    /// the chosen reading.
    pub dominance: Option<bool>,
}

pub fn compare_apl_cpl(
    samples: &[PersistenceMeasure],
    k: u32,
    t: &Rational,
    h: &Rational,
) -> Result<AplComparison> {
    compare_apl_cpl_with(samples, k, t, h, Reading::DistinctPoints)
}

pub fn compare_apl_cpl_with(
    samples: &[PersistenceMeasure],
    k: u32,
    t: &Rational,
    h: &Rational,
    reading: Reading,
) -> Result<AplComparison> {
    require_samples(samples)?;
    if k == 0 {
        return Err(Error::NonPositiveLevel(Rational::zero()));
    }
    let quad = Quadrant::closed(t.clone(), h.clone())?;
    let kr = Rational::from_integer(k as i64);
    let hypothesis_distinct = samples
        .iter()
        .all(|s| s.atoms().filter(|(p, _)| quad.contains(p)).count() == k as usize);
    let hypothesis_mass = samples.iter().all(|s| s.quadrant_mass(&quad) == kr);

    let cpl_value = compute_landscape(&PersistenceMeasure::mean(samples)?)?.evaluate(&kr, t)?;
    let apl_value = average_landscape(samples)?.evaluate(&kr, t)?;
    let hypothesis = match reading {
        Reading::DistinctPoints => hypothesis_distinct,
        Reading::Mass => hypothesis_mass,
    };
    let dominance = hypothesis.then(|| cpl_value <= apl_value);
    Ok(AplComparison {
        k,
        t: t.clone(),
        h: h.clone(),
        hypothesis_distinct,
        hypothesis_mass,
        cpl_value,
        apl_value,
        reading,
        dominance,
    })
}

/// The diagram whose landscape is `lambda(a + k - 1, t)`: the Möbius
/// inversion of the rank function truncated by `k - 1`.
pub fn rank_k_transform(m: &PersistenceMeasure, k: u32) -> Result<PersistenceMeasure> {
    m.require_integer_weights()?;
    if k == 0 {
        return Err(Error::NonPositiveLevel(Rational::zero()));
    }
    let shift = Rational::from_integer(k as i64 - 1);
    let l = compute_landscape(m)?;
    let mut bands = Vec::new();
    for b in l.bands() {
        if b.hi() <= &shift {
            continue;
        }
        let lo = (b.lo() - &shift).max(Rational::zero());
        bands.push(Band::new(lo, b.hi() - &shift, b.profile().clone())?);
    }
    reconstruct(&Landscape::new(bands)?)
}
