//! Finitely supported persistence measures and their quadrant and
//! rectangle masses.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{lcm, Int, Rational};

/// A point strictly above the diagonal, `birth < death`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    birth: Rational,
    death: Rational,
}

impl Point {
    pub fn new(birth: Rational, death: Rational) -> Result<Self> {
        if birth >= death {
            return Err(Error::NotAboveDiagonal { birth, death });
        }
        Ok(Self { birth, death })
    }

    pub fn birth(&self) -> &Rational {
        &self.birth
    }

    pub fn death(&self) -> &Rational {
        &self.death
    }

    pub fn persistence(&self) -> Rational {
        &self.death - &self.birth
    }

    /// Abscissa of the tent peak.
    pub fn midpoint(&self) -> Rational {
        self.birth.midpoint(&self.death)
    }

    /// Tent function `max(min(t - birth, death - t), 0)`.
    pub fn tent(&self, t: &Rational) -> Rational {
        let up = t - &self.birth;
        let down = &self.death - t;
        let v = up.min(down);
        if v.is_positive() {
            v
        } else {
            Rational::zero()
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.birth, self.death)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    Open,
    Closed,
}

/// `Q_{t,h} = (-inf, t-h) x (t+h, inf)` when open, with both boundary rays
/// included when closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadrant {
    t: Rational,
    h: Rational,
    closure: Closure,
}

impl Quadrant {
    pub fn new(t: Rational, h: Rational, closure: Closure) -> Result<Self> {
        if h.is_negative() {
            return Err(Error::NegativeHeight(h));
        }
        Ok(Self { t, h, closure })
    }

    pub fn open(t: Rational, h: Rational) -> Result<Self> {
        Self::new(t, h, Closure::Open)
    }

    pub fn closed(t: Rational, h: Rational) -> Result<Self> {
        Self::new(t, h, Closure::Closed)
    }

    /// The open quadrant `(-inf, x) x (y, inf)` with corner `(x, y)`, `x <= y`.
    pub fn open_at_corner(x: &Rational, y: &Rational) -> Result<Self> {
        Self::open(x.midpoint(y), (y - x).half())
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    /// Corner `(t - h, t + h)`.
    pub fn corner(&self) -> (Rational, Rational) {
        (&self.t - &self.h, &self.t + &self.h)
    }

    pub fn contains(&self, p: &Point) -> bool {
        let (x, y) = self.corner();
        match self.closure {
            Closure::Open => p.birth < x && p.death > y,
            Closure::Closed => p.birth <= x && p.death >= y,
        }
    }
}

/// Half-open rectangle `[x1, z1) x (z2, y2]` lying in the closed upper half
/// plane: `x1 <= z1 <= z2 <= y2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x1: Rational,
    pub z1: Rational,
    pub z2: Rational,
    pub y2: Rational,
}

impl Rect {
    pub fn new(x1: Rational, z1: Rational, z2: Rational, y2: Rational) -> Result<Self> {
        if x1 > z1 || z1 > z2 || z2 > y2 {
            return Err(Error::InvalidRect(format!(
                "[{x1}, {z1}) x ({z2}, {y2}] needs x1 <= z1 <= z2 <= y2"
            )));
        }
        Ok(Self { x1, z1, z2, y2 })
    }

    pub fn is_empty(&self) -> bool {
        self.x1 == self.z1 || self.z2 == self.y2
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.x1 <= p.birth && p.birth < self.z1 && self.z2 < p.death && p.death <= self.y2
    }

    /// The four open quadrants whose signed sum is the rectangle, as
    /// `(sign, quadrant)` pairs: `+Q(z1,z2) - Q(x1,z2) - Q(z1,y2) + Q(x1,y2)`.
    pub fn inclusion_exclusion(&self) -> [(i8, Quadrant); 4] {
        let quad = |x: &Rational, y: &Rational| {
            Quadrant::open_at_corner(x, y).expect("rect corners lie on or above the diagonal")
        };
        [
            (1, quad(&self.z1, &self.z2)),
            (-1, quad(&self.x1, &self.z2)),
            (-1, quad(&self.z1, &self.y2)),
            (1, quad(&self.x1, &self.y2)),
        ]
    }
}

/// A finite weighted multiset of points above the diagonal; every weight is
/// a positive rational. Every quadrant mass is a finite sum, so these
/// measures are q-tame.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PersistenceMeasure {
    atoms: BTreeMap<Point, Rational>,
}

impl PersistenceMeasure {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a measure from `(point, weight)` pairs; repeated points merge
    /// by adding weights.
    pub fn from_atoms<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Rational)>,
    {
        let mut map: BTreeMap<Point, Rational> = BTreeMap::new();
        for (p, w) in atoms {
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight(w));
            }
            let slot = map.entry(p).or_default();
            *slot = slot.checked_add(&w)?;
        }
        Ok(Self { atoms: map })
    }

    /// Convenience constructor from `(birth, death, weight)` triples.
    pub fn from_triples<I>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational, Rational)>,
    {
        let mut atoms = Vec::new();
        for (b, d, w) in triples {
            atoms.push((Point::new(b, d)?, w));
        }
        Self::from_atoms(atoms)
    }

    pub fn atoms(&self) -> impl ExactSizeIterator<Item = (&Point, &Rational)> + Clone {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight(&self, p: &Point) -> Option<&Rational> {
        self.atoms.get(p)
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.values().sum()
    }

    pub fn quadrant_mass(&self, q: &Quadrant) -> Rational {
        self.atoms
            .iter()
            .filter(|(p, _)| q.contains(p))
            .map(|(_, w)| w)
            .sum()
    }

    /// Mass of `[x1, z1) x (z2, y2]`. The direct sum and the four-quadrant
    /// inclusion-exclusion are both evaluated in debug builds.
    pub fn rect_mass(&self, r: &Rect) -> Rational {
        let direct = self.rect_mass_direct(r);
        debug_assert_eq!(direct, self.rect_mass_by_quadrants(r));
        direct
    }

    pub fn rect_mass_direct(&self, r: &Rect) -> Rational {
        self.atoms
            .iter()
            .filter(|(p, _)| r.contains(p))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn rect_mass_by_quadrants(&self, r: &Rect) -> Rational {
        r.inclusion_exclusion()
            .iter()
            .map(|(sign, quad)| {
                let m = self.quadrant_mass(quad);
                if *sign > 0 {
                    m
                } else {
                    -m
                }
            })
            .sum()
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::NonPositiveScale(c.clone()));
        }
        let mut atoms = BTreeMap::new();
        for (p, w) in &self.atoms {
            atoms.insert(p.clone(), w.checked_mul(c)?);
        }
        Ok(Self { atoms })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut atoms = self.atoms.clone();
        for (p, w) in &other.atoms {
            let slot = atoms.entry(p.clone()).or_default();
            *slot = slot.checked_add(w)?;
        }
        Ok(Self { atoms })
    }

    /// `(1/N) * sum(measures)`.
    pub fn mean(measures: &[Self]) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::EmptyMean);
        }
        let mut sum = Self::empty();
        for m in measures {
            sum = sum.add(m)?;
        }
        sum.scale(&Rational::from_integer(measures.len() as i64).recip())
    }

    /// The least positive integer `c` such that `c * m` has integer weights.
    #[allow(clippy::clone_on_copy)]
    pub fn common_denominator(&self) -> Result<Int> {
        let mut c = Rational::one().numer().clone();
        for w in self.atoms.values() {
            c = lcm(&c, w.denom())?;
        }
        Ok(c)
    }

    pub fn has_integer_weights(&self) -> bool {
        self.atoms.values().all(Rational::is_integer)
    }

    /// Returns an error naming the first non-integer weight.
    pub fn require_integer_weights(&self) -> Result<()> {
        match self.atoms.values().find(|w| !w.is_integer()) {
            Some(w) => Err(Error::NonIntegerWeight(w.clone())),
            None => Ok(()),
        }
    }

    pub(crate) fn from_map_unchecked(atoms: BTreeMap<Point, Rational>) -> Self {
        debug_assert!(atoms.values().all(Rational::is_positive));
        Self { atoms }
    }
}

impl fmt::Debug for PersistenceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.atoms.iter()).finish()
    }
}

/// A signed measure given by its Jordan decomposition `pos - neg`; the two
/// parts have disjoint supports.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedMeasure {
    pos: PersistenceMeasure,
    neg: PersistenceMeasure,
}

impl SignedMeasure {
    pub fn new(pos: PersistenceMeasure, neg: PersistenceMeasure) -> Result<Self> {
        if let Some(p) = pos.atoms.keys().find(|p| neg.atoms.contains_key(p)) {
            return Err(Error::OverlappingSupports {
                birth: p.birth.clone(),
                death: p.death.clone(),
            });
        }
        Ok(Self { pos, neg })
    }

    /// `a - b` with shared atoms cancelled, yielding the minimal pair.
    pub fn difference(a: &PersistenceMeasure, b: &PersistenceMeasure) -> Result<Self> {
        let mut pos = BTreeMap::new();
        let mut neg = b.atoms.clone();
        for (p, w) in &a.atoms {
            match neg.remove(p) {
                Some(v) => match w.cmp(&v) {
                    std::cmp::Ordering::Greater => {
                        pos.insert(p.clone(), w.checked_sub(&v)?);
                    }
                    std::cmp::Ordering::Less => {
                        neg.insert(p.clone(), v.checked_sub(w)?);
                    }
                    std::cmp::Ordering::Equal => {}
                },
                None => {
                    pos.insert(p.clone(), w.clone());
                }
            }
        }
        Ok(Self {
            pos: PersistenceMeasure::from_map_unchecked(pos),
            neg: PersistenceMeasure::from_map_unchecked(neg),
        })
    }

    pub fn pos(&self) -> &PersistenceMeasure {
        &self.pos
    }

    pub fn neg(&self) -> &PersistenceMeasure {
        &self.neg
    }

    pub fn is_zero(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn quadrant_mass(&self, q: &Quadrant) -> Rational {
        self.pos.quadrant_mass(q) - self.neg.quadrant_mass(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn measure(atoms: &[(Rational, Rational, Rational)]) -> PersistenceMeasure {
        PersistenceMeasure::from_triples(atoms.iter().cloned()).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn quadrant_mass_examples() {
        let m = measure(&[(int(0), int(2), int(1))]);
        let open = Quadrant::open(int(1), q(1, 2)).unwrap();
        assert_eq!(m.quadrant_mass(&open), int(1));
        let boundary = Quadrant::open(int(1), int(1)).unwrap();
        assert_eq!(m.quadrant_mass(&boundary), int(0));
        let closed = Quadrant::closed(int(1), int(1)).unwrap();
        assert_eq!(m.quadrant_mass(&closed), int(1));

        let m = measure(&[(int(0), int(2), q(1, 2)), (int(1), int(3), q(3, 2))]);
        // (-inf, 5/4) x (7/4, inf) holds both atoms
        let quad = Quadrant::open(q(3, 2), q(1, 4)).unwrap();
        assert_eq!(m.quadrant_mass(&quad), int(2));
    }

    #[test]
    fn negative_height_rejected() {
        assert!(matches!(
            Quadrant::open(int(0), q(-1, 2)),
            Err(Error::NegativeHeight(_))
        ));
    }

    #[test]
    fn rect_mass_examples() {
        let m = measure(&[(int(0), int(2), int(1))]);
        let r = Rect::new(int(-1), int(1), int(1), int(3)).unwrap();
        assert_eq!(m.rect_mass(&r), int(1));
        let empty = Rect::new(int(0), int(0), int(2), int(3)).unwrap();
        assert!(empty.is_empty());
        assert_eq!(m.rect_mass(&empty), int(0));

        let m = measure(&[(int(0), int(2), int(1)), (int(0), int(3), int(2))]);
        let r = Rect::new(int(-1), int(1), q(5, 2), int(3)).unwrap();
        assert_eq!(m.rect_mass_direct(&r), int(2));
        assert_eq!(m.rect_mass_by_quadrants(&r), int(2));
    }

    #[test]
    fn rect_rejects_bad_corners() {
        assert!(Rect::new(int(1), int(0), int(2), int(3)).is_err());
        assert!(Rect::new(int(0), int(2), int(1), int(3)).is_err());
        assert!(Rect::new(int(0), int(1), int(3), int(2)).is_err());
    }

    #[test]
    fn construction_rules() {
        assert!(matches!(
            Point::new(int(2), int(1)),
            Err(Error::NotAboveDiagonal { .. })
        ));
        assert!(Point::new(int(1), int(1)).is_err());
        assert!(matches!(
            PersistenceMeasure::from_triples([(int(0), int(1), int(0))]),
            Err(Error::NonPositiveWeight(_))
        ));
        assert!(PersistenceMeasure::from_triples([(int(0), int(1), int(-1))]).is_err());
        let merged = measure(&[(int(0), int(2), int(1)), (int(0), int(2), q(1, 2))]);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.total_mass(), q(3, 2));
    }

    #[test]
    fn scale_add_mean() {
        let m = measure(&[(int(0), int(2), q(1, 3))]);
        assert_eq!(m.scale(&int(3)).unwrap(), measure(&[(int(0), int(2), int(1))]));
        assert!(m.scale(&int(0)).is_err());

        let a = measure(&[(int(0), int(2), int(1))]);
        let b = measure(&[(int(0), int(2), int(2))]);
        assert_eq!(a.add(&b).unwrap(), measure(&[(int(0), int(2), int(3))]));

        let c = measure(&[(int(1), int(3), int(1))]);
        let mean = PersistenceMeasure::mean(&[a, c]).unwrap();
        assert_eq!(
            mean,
            measure(&[(int(0), int(2), q(1, 2)), (int(1), int(3), q(1, 2))])
        );
        assert_eq!(PersistenceMeasure::mean(&[]), Err(Error::EmptyMean));
    }

    #[test]
    fn common_denominator_examples() {
        let m = measure(&[(int(0), int(2), q(1, 2)), (int(1), int(3), q(3, 4))]);
        assert_eq!(Rational::from_int(m.common_denominator().unwrap()), int(4));
        let m = measure(&[(int(0), int(2), int(2))]);
        assert_eq!(Rational::from_int(m.common_denominator().unwrap()), int(1));
        let m = measure(&[(int(0), int(2), q(1, 6)), (int(1), int(3), q(1, 10))]);
        assert_eq!(Rational::from_int(m.common_denominator().unwrap()), int(30));
        assert_eq!(
            Rational::from_int(PersistenceMeasure::empty().common_denominator().unwrap()),
            int(1)
        );
    }

    #[test]
    fn signed_difference_cancels() {
        let a = measure(&[(int(0), int(2), int(2)), (int(1), int(3), int(1))]);
        let b = measure(&[(int(0), int(2), q(1, 2)), (int(0), int(5), int(1))]);
        let s = SignedMeasure::difference(&a, &b).unwrap();
        assert_eq!(
            s.pos(),
            &measure(&[(int(0), int(2), q(3, 2)), (int(1), int(3), int(1))])
        );
        assert_eq!(s.neg(), &measure(&[(int(0), int(5), int(1))]));
        assert!(SignedMeasure::difference(&a, &a).unwrap().is_zero());
        assert!(SignedMeasure::new(a.clone(), a).is_err());
    }
}
