//! Checks that a landscape satisfies the four properties characterising
//! the image of the landscape map:
//!
//! 1. `lambda(-, t)` is non-increasing (and vanishes for large `a`);
//! 2. `lambda(a, -)` is 1-Lipschitz, here: every segment has slope in `{-1, 0, 1}`;
//! 3. `lambda(-, t)` is left-continuous, automatic for `(lo, hi]` bands;
//! 4. the premeasure derived from `lambda` is non-negative on rectangles,
//!    the supermodularity `nu0(Q_z) + nu0(Q_w) >= nu0(Q_x) + nu0(Q_y)`.
//!
//! Property (4) is checked on the critical grid only. When every profile
//! segment has unit slope, each band's graph maps to horizontal and vertical
//! grid segments in corner coordinates `(t - h, t + h)`, so `nu0` is constant
//! on grid cells and the derived signed measure is carried by grid vertices:
//! all rectangle masses are then non-negative iff every vertex mass is.

use std::collections::BTreeMap;
use std::fmt;

use crate::inversion::CriticalGrid;
use crate::landscape::Landscape;
use crate::profile::Profile;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub passed: bool,
    pub witness: Option<String>,
}

impl PropertyCheck {
    fn pass() -> Self {
        Self {
            passed: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        Self {
            passed: false,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub decreasing: PropertyCheck,
    pub lipschitz: PropertyCheck,
    pub left_continuous: PropertyCheck,
    pub rect_nonnegative: PropertyCheck,
    pub(crate) vertex_masses: BTreeMap<(usize, usize), Rational>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }

    pub fn checks(&self) -> [(&'static str, &PropertyCheck); 4] {
        [
            ("(1) decreasing in a", &self.decreasing),
            ("(2) unit slopes in t", &self.lipschitz),
            ("(3) left-continuous in a", &self.left_continuous),
            ("(4) rectangle masses >= 0", &self.rect_nonnegative),
        ]
    }

    /// Which of the four properties failed, as 1-based indices.
    pub fn failed(&self) -> Vec<usize> {
        self.checks()
            .iter()
            .enumerate()
            .filter(|(_, (_, c))| !c.passed)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn summary(&self) -> String {
        let failures: Vec<String> = self
            .checks()
            .iter()
            .filter(|(_, c)| !c.passed)
            .map(|(name, c)| format!("{name}: {}", c.witness.as_deref().unwrap_or("failed")))
            .collect();
        if failures.is_empty() {
            "all properties hold".into()
        } else {
            failures.join("; ")
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, c) in self.checks() {
            match &c.witness {
                None => writeln!(f, "pass {name}")?,
                Some(w) => writeln!(f, "FAIL {name}: {w}")?,
            }
        }
        Ok(())
    }
}

pub fn validate_landscape(l: &Landscape) -> ValidationReport {
    let bands = l.bands();

    let zero = Profile::zero();
    let mut decreasing = PropertyCheck::pass();
    for (k, b) in bands.iter().enumerate() {
        // lambda just below the band: the previous band if it ends exactly
        // where this one starts, zero across a gap, nothing at level 0
        let below = match k.checked_sub(1).map(|j| &bands[j]) {
            None if b.lo().is_zero() => continue,
            None => &zero,
            Some(p) if p.hi() == b.lo() && p.covers(p.hi()) != b.covers(b.lo()) => p.profile(),
            Some(_) => &zero,
        };
        if let Some(t) = b.profile().dominated_by(below) {
            decreasing = PropertyCheck::fail(format!(
                "band {b} exceeds the levels just below it at t = {t}: {} > {}",
                b.profile().eval(&t),
                below.eval(&t)
            ));
            break;
        }
    }

    let mut lipschitz = PropertyCheck::pass();
    'bands: for (k, b) in bands.iter().enumerate() {
        let pts = b.profile().breakpoints();
        for (i, s) in b.profile().slopes().enumerate() {
            if !(s.is_zero() || s.abs() == Rational::one()) {
                lipschitz = PropertyCheck::fail(format!(
                    "band {} segment from t = {} to t = {} has slope {s}",
                    k + 1,
                    pts[i].0,
                    pts[i + 1].0
                ));
                break 'bands;
            }
        }
    }

    // (lo, hi] bands are left-continuous by construction; a [lo, hi) band
    // is so only if its profile is also the value at hi and the left limit at lo
    let mut left_continuous = PropertyCheck::pass();
    for (k, b) in bands.iter().enumerate().filter(|(_, b)| b.is_closed_open()) {
        let at_hi = l.band_at(b.hi()).map_or(&zero, |n| n.profile());
        if at_hi != b.profile() {
            left_continuous = PropertyCheck::fail(format!(
                "lambda(-, t) jumps at a = {} leaving band {b}",
                b.hi()
            ));
            break;
        }
        let ends_at_lo = k > 0 && bands[k - 1].hi() == b.lo();
        if b.lo().is_positive() && !ends_at_lo && !b.profile().is_zero() {
            left_continuous = PropertyCheck::fail(format!(
                "lambda(-, t) jumps at a = {} entering band {b}",
                b.lo()
            ));
            break;
        }
    }

    let grid = CriticalGrid::of(l);
    let masses = grid.vertex_masses(l);
    let rect_nonnegative = match masses.iter().find(|(_, m)| m.is_negative()) {
        None => PropertyCheck::pass(),
        Some((&(i, j), m)) => {
            let r = grid.isolating_rect(i, j);
            PropertyCheck::fail(format!(
                "rectangle [{}, {}) x ({}, {}] around ({}, {}) has mass {m}",
                r.x1,
                r.z1,
                r.z2,
                r.y2,
                grid.coords()[i],
                grid.coords()[j]
            ))
        }
    };

    ValidationReport {
        decreasing,
        lipschitz,
        left_continuous,
        rect_nonnegative,
        vertex_masses: masses,
    }
}
