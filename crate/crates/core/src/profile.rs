//! Compactly supported piecewise-linear functions of `t`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A piecewise-linear function given by breakpoints `(t, h)` with strictly
/// increasing `t`, `h >= 0`, zero at both ends and zero outside. The empty
/// breakpoint list is the zero function.
///
/// Breakpoints are kept minimal: no point is collinear with its neighbours
/// and there are no leading or trailing zero runs, so two profiles are
/// equal as functions iff they are equal as values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Profile {
    points: Vec<(Rational, Rational)>,
}

impl Profile {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a profile whose segments all have slope -1, 0 or +1.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        let p = Self::from_breakpoints(points)?;
        if let Some((i, s)) = p.slopes().enumerate().find(|(_, s)| !is_unit_slope(s)) {
            return Err(Error::MalformedProfile(format!(
                "slope {s} of segment {i} is outside {{-1, 0, 1}}"
            )));
        }
        Ok(p)
    }

    /// Builds a profile with arbitrary slopes.
    pub fn from_breakpoints(points: Vec<(Rational, Rational)>) -> Result<Self> {
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::MalformedProfile(format!(
                    "abscissae must increase strictly, found {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some((t, h)) = points.iter().find(|(_, h)| h.is_negative()) {
            return Err(Error::MalformedProfile(format!("negative value {h} at t = {t}")));
        }
        if let (Some(first), Some(last)) = (points.first(), points.last()) {
            if !first.1.is_zero() || !last.1.is_zero() {
                return Err(Error::MalformedProfile(
                    "first and last breakpoints must have h = 0".into(),
                ));
            }
        }
        Ok(Self {
            points: canonical(points),
        })
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn is_zero(&self) -> bool {
        self.points.is_empty()
    }

    /// Support hull `[first t, last t]`, if nonzero.
    pub fn support(&self) -> Option<(&Rational, &Rational)> {
        Some((&self.points.first()?.0, &self.points.last()?.0))
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let i = self.points.partition_point(|(x, _)| x <= t);
        if i == 0 {
            return Rational::zero();
        }
        let (x0, y0) = &self.points[i - 1];
        if x0 == t {
            return y0.clone();
        }
        if i == self.points.len() {
            return Rational::zero();
        }
        let (x1, y1) = &self.points[i];
        interpolate(x0, y0, x1, y1, t)
    }

    pub fn slopes(&self) -> impl Iterator<Item = Rational> + '_ {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
    }

    pub fn has_unit_slopes(&self) -> bool {
        self.slopes().all(|s| is_unit_slope(&s))
    }

    pub fn max_value(&self) -> Rational {
        self.points
            .iter()
            .map(|(_, h)| h)
            .max()
            .cloned()
            .unwrap_or_default()
    }

    /// Exact area under the profile.
    pub fn integral(&self) -> Rational {
        self.points
            .windows(2)
            .map(|w| (&w[1].0 - &w[0].0) * (&w[0].1 + &w[1].1))
            .sum::<Rational>()
            .half()
    }

    /// `integral |self(t) - other(t)| dt`, exact.
    pub fn l1_distance(&self, other: &Self) -> Rational {
        let ts = merged_abscissae(self, other);
        let mut total = Rational::zero();
        let mut prev: Option<(Rational, Rational)> = None;
        for t in ts {
            let d = self.eval(&t) - other.eval(&t);
            if let Some((t0, d0)) = prev {
                total += abs_linear_integral(&d0, &d, &(&t - &t0));
            }
            prev = Some((t, d));
        }
        total
    }

    pub fn add(&self, other: &Self) -> Self {
        let points = merged_abscissae(self, other)
            .into_iter()
            .map(|t| {
                let v = self.eval(&t) + other.eval(&t);
                (t, v)
            })
            .collect();
        Self {
            points: canonical(points),
        }
    }

    /// Multiplies values by `c >= 0`.
    pub fn scale(&self, c: &Rational) -> Self {
        debug_assert!(!c.is_negative());
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            points: self
                .points
                .iter()
                .map(|(t, h)| (t.clone(), h * c))
                .collect(),
        }
    }

    /// `self(t) <= other(t)` for every `t`.
    pub fn dominated_by(&self, other: &Self) -> Option<Rational> {
        // both are linear between merged breakpoints, so checking those suffices
        merged_abscissae(self, other)
            .into_iter()
            .find(|t| self.eval(t) > other.eval(t))
    }
}

fn is_unit_slope(s: &Rational) -> bool {
    s.is_zero() || s.abs() == Rational::one()
}

fn interpolate(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational, t: &Rational) -> Rational {
    y0 + &((y1 - y0) * (t - x0) / (x1 - x0))
}

/// Integral over an interval of length `width` of `|d(t)|`, where `d` is
/// linear with end values `d0`, `d1`.
fn abs_linear_integral(d0: &Rational, d1: &Rational, width: &Rational) -> Rational {
    let same_sign = !(d0.is_positive() && d1.is_negative()) && !(d0.is_negative() && d1.is_positive());
    if same_sign {
        (d0.abs() + d1.abs()) * width / Rational::from_integer(2)
    } else {
        // split at the root; two triangles
        let a = d0.abs();
        let b = d1.abs();
        (&a * &a + &b * &b) * width / (Rational::from_integer(2) * (a + b))
    }
}

fn merged_abscissae(a: &Profile, b: &Profile) -> Vec<Rational> {
    let mut ts: Vec<Rational> = Vec::with_capacity(a.points.len() + b.points.len());
    let (mut i, mut j) = (0, 0);
    while i < a.points.len() || j < b.points.len() {
        let next = match (a.points.get(i), b.points.get(j)) {
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Less => {
                    i += 1;
                    x.0.clone()
                }
                Ordering::Greater => {
                    j += 1;
                    y.0.clone()
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    x.0.clone()
                }
            },
            (Some(x), None) => {
                i += 1;
                x.0.clone()
            }
            (None, Some(y)) => {
                j += 1;
                y.0.clone()
            }
            (None, None) => unreachable!(),
        };
        ts.push(next);
    }
    ts
}

fn collinear(a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

fn canonical(points: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
            out.pop();
        }
        out.push(p);
    }
    // leading and trailing zero runs carry no information
    let start = out
        .windows(2)
        .position(|w| !(w[0].1.is_zero() && w[1].1.is_zero()))
        .unwrap_or(out.len());
    let mut out = out.split_off(start);
    while out.len() >= 2 && out[out.len() - 2].1.is_zero() && out[out.len() - 1].1.is_zero() {
        out.pop();
    }
    if out.iter().all(|(_, h)| h.is_zero()) {
        out.clear();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pts(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter()
            .map(|&(t, h)| (Rational::from_integer(t), Rational::from_integer(h)))
            .collect()
    }

    #[test]
    fn tent_evaluation() {
        let p = Profile::new(pts(&[(0, 0), (1, 1), (2, 0)])).unwrap();
        assert_eq!(p.eval(&q(1, 2)), q(1, 2));
        assert_eq!(p.eval(&q(1, 1)), q(1, 1));
        assert_eq!(p.eval(&q(3, 1)), q(0, 1));
        assert_eq!(p.eval(&q(-1, 1)), q(0, 1));
        assert_eq!(p.integral(), q(1, 1));
    }

    #[test]
    fn canonical_form() {
        let p = Profile::new(pts(&[(-2, 0), (0, 0), (1, 1), (2, 2), (3, 1), (4, 0), (6, 0)])).unwrap();
        assert_eq!(p.breakpoints(), pts(&[(0, 0), (2, 2), (4, 0)]).as_slice());
        let z = Profile::new(pts(&[(0, 0), (3, 0)])).unwrap();
        assert!(z.is_zero());
        // interior zero gap is kept
        let gap = Profile::new(pts(&[(0, 0), (1, 1), (2, 0), (5, 0), (6, 1), (7, 0)])).unwrap();
        assert_eq!(gap.breakpoints().len(), 6);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Profile::new(pts(&[(0, 0), (1, 2), (2, 0)])).is_err());
        assert!(Profile::from_breakpoints(pts(&[(0, 0), (1, 2), (2, 0)])).is_ok());
        assert!(Profile::new(pts(&[(0, 0), (0, 0)])).is_err());
        assert!(Profile::new(pts(&[(0, 0), (1, 1)])).is_err());
        assert!(Profile::from_breakpoints(pts(&[(0, 0), (1, -1), (2, 0)])).is_err());
    }

    #[test]
    fn l1_distance_of_shifted_tents() {
        let a = Profile::new(pts(&[(0, 0), (1, 1), (2, 0)])).unwrap();
        let b = Profile::new(pts(&[(1, 0), (2, 1), (3, 0)])).unwrap();
        assert_eq!(a.l1_distance(&b), q(3, 2));
        assert_eq!(a.l1_distance(&a), q(0, 1));
        assert_eq!(a.l1_distance(&Profile::zero()), q(1, 1));
    }

    #[test]
    fn sum_and_scale() {
        let a = Profile::new(pts(&[(0, 0), (1, 1), (2, 0)])).unwrap();
        let b = Profile::new(pts(&[(1, 0), (2, 1), (3, 0)])).unwrap();
        let mean = a.add(&b).scale(&q(1, 2));
        assert_eq!(
            mean.breakpoints(),
            &[
                (q(0, 1), q(0, 1)),
                (q(1, 1), q(1, 2)),
                (q(2, 1), q(1, 2)),
                (q(3, 1), q(0, 1))
            ]
        );
        assert_eq!(mean.eval(&q(3, 2)), q(1, 2));
    }
}
