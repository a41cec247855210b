//! Recovering a persistence measure from its landscape.
//!
//! The premeasure `nu0(Q_{t,h}) = inf{a >= 0 : lambda(a, t) <= h}` agrees
//! with `mu(Q_{t,h})` for `lambda = Lambda(mu)`, and rectangle masses follow
//! by inclusion-exclusion over four quadrants. For a landscape whose
//! profiles have unit slopes, `nu0` is constant on the open cells of the
//! grid spanned by the corner coordinates `t - h`, `t + h`, so the measure it
//! determines is atomic on grid vertices and each vertex mass is the mass of
//! a rectangle isolating that vertex.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::landscape::{compute_landscape, Landscape};
use crate::measure::{PersistenceMeasure, Point, Rect, SignedMeasure};
use crate::rational::Rational;
use crate::validate::validate_landscape;

/// `inf{a >= 0 : lambda(a, t) <= h}`.
pub fn nu0_quadrant(l: &Landscape, t: &Rational, h: &Rational) -> Result<Rational> {
    if h.is_negative() {
        return Err(Error::NegativeHeight(h.clone()));
    }
    Ok(nu0_unchecked(l, t, h))
}

fn nu0_unchecked(l: &Landscape, t: &Rational, h: &Rational) -> Rational {
    let bands = l.bands();
    if l.is_monotone() {
        // lambda(-, t) is a non-increasing step function: the set of levels
        // with lambda <= h is an up-set, its infimum a band boundary
        let i = bands.partition_point(|b| &b.profile().eval(t) > h);
        return match bands.get(i) {
            Some(b) => b.lo().clone(),
            None => l.a_max(),
        };
    }
    // general sorted bands, possibly with gaps where lambda = 0
    let mut prev_hi = Rational::zero();
    for b in bands {
        if b.lo() > &prev_hi {
            return prev_hi;
        }
        if &b.profile().eval(t) <= h {
            return b.lo().clone();
        }
        prev_hi = b.hi().clone();
    }
    prev_hi
}

pub fn nu0_at_corner(l: &Landscape, x: &Rational, y: &Rational) -> Rational {
    debug_assert!(x <= y);
    nu0_unchecked(l, &x.midpoint(y), &(y - x).half())
}

/// `nu0([x1, z1) x (z2, y2])` by inclusion-exclusion of four quadrants.
pub fn rect_mass_from_landscape(l: &Landscape, r: &Rect) -> Rational {
    r.inclusion_exclusion()
        .iter()
        .map(|(sign, quad)| {
            let v = nu0_unchecked(l, quad.t(), quad.h());
            if *sign > 0 {
                v
            } else {
                -v
            }
        })
        .sum()
}

/// Sorted corner coordinates `t - h` and `t + h` over every profile
/// breakpoint, with the midpoints of their gaps.
#[derive(Clone, Debug)]
pub struct CriticalGrid {
    coords: Vec<Rational>,
    // mids[i + 1] is the midpoint above coords[i]; mids[0] lies below coords[0]
    mids: Vec<Rational>,
}

impl CriticalGrid {
    pub fn of(l: &Landscape) -> Self {
        let mut set = BTreeSet::new();
        for (t, h) in l.corners() {
            set.insert(&t - &h);
            set.insert(&t + &h);
        }
        Self::from_coords(set.into_iter().collect())
    }

    fn from_coords(coords: Vec<Rational>) -> Self {
        let mut mids = Vec::with_capacity(coords.len() + 1);
        if let (Some(first), Some(last)) = (coords.first(), coords.last()) {
            mids.push(first - &Rational::one());
            for w in coords.windows(2) {
                mids.push(w[0].midpoint(&w[1]));
            }
            mids.push(last + &Rational::one());
        }
        Self { coords, mids }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    fn index_of(&self, c: &Rational) -> Option<usize> {
        self.coords.binary_search(c).ok()
    }

    /// The rectangle `[mid below b, mid above b) x (mid below d, mid above d]`
    /// around grid vertex `(coords[i], coords[j])`, `i < j`. It contains no
    /// other grid vertex.
    pub fn isolating_rect(&self, i: usize, j: usize) -> Rect {
        debug_assert!(i < j);
        Rect::new(
            self.mids[i].clone(),
            self.mids[i + 1].clone(),
            self.mids[j].clone(),
            self.mids[j + 1].clone(),
        )
        .expect("midpoints of distinct grid columns are ordered")
    }

    /// Mass of every grid vertex strictly above the diagonal, keyed by
    /// `(i, j)` coordinate indices. `nu0` is evaluated once per pair of
    /// midpoints and each vertex mass is the mixed difference of the four
    /// values around it.
    pub fn vertex_masses(&self, l: &Landscape) -> BTreeMap<(usize, usize), Rational> {
        let n = self.coords.len();
        let mut table: HashMap<(usize, usize), Rational> = HashMap::new();
        let mut nu = |a: usize, b: usize| -> Rational {
            table
                .entry((a, b))
                .or_insert_with(|| nu0_at_corner(l, &self.mids[a], &self.mids[b]))
                .clone()
        };
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                // +Q(z1, z2) - Q(x1, z2) - Q(z1, y2) + Q(x1, y2)
                let mass = nu(i + 1, j) - nu(i, j) - nu(i + 1, j + 1) + nu(i, j + 1);
                out.insert((i, j), mass);
            }
        }
        out
    }
}

/// Rebuilds the finitely supported measure whose landscape is `l`.
///
/// Candidate atoms are `(t - h, t + h)` for every profile corner with
/// `h > 0`; each gets the mass of the grid rectangle isolating it.
/// Zero-mass candidates are dropped and the result is checked by
/// recomputing its landscape.
pub fn reconstruct(l: &Landscape) -> Result<PersistenceMeasure> {
    let report = validate_landscape(l);
    if !report.all_pass() {
        return Err(Error::ValidationFailed(report.summary()));
    }
    let grid = CriticalGrid::of(l);
    let masses = report.vertex_masses;

    let mut atoms = Vec::new();
    let candidates: BTreeSet<(Rational, Rational)> = l
        .corners()
        .into_iter()
        .filter(|(_, h)| h.is_positive())
        .map(|(t, h)| (&t - &h, &t + &h))
        .collect();
    for (b, d) in candidates {
        let (i, j) = match (grid.index_of(&b), grid.index_of(&d)) {
            (Some(i), Some(j)) => (i, j),
            _ => unreachable!("corner coordinates are grid coordinates"),
        };
        let w = masses.get(&(i, j)).cloned().unwrap_or_default();
        if w.is_positive() {
            atoms.push((Point::new(b, d)?, w));
        }
    }
    let m = PersistenceMeasure::from_atoms(atoms)?;
    let check = compute_landscape(&m)?;
    if &check != l {
        return Err(Error::VerificationFailed(format!(
            "landscape of the extracted {} atoms differs from the input; \
             the input is not the landscape of a finitely supported measure",
            m.len()
        )));
    }
    Ok(m)
}

/// Inverts the landscapes of both Jordan parts, then cancels shared atoms.
pub fn reconstruct_signed(pos: &Landscape, neg: &Landscape) -> Result<SignedMeasure> {
    let p = reconstruct(pos)?;
    let n = reconstruct(neg)?;
    SignedMeasure::difference(&p, &n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn measure(atoms: &[(Rational, Rational, Rational)]) -> PersistenceMeasure {
        PersistenceMeasure::from_triples(atoms.iter().cloned()).unwrap()
    }

    fn lambda(atoms: &[(Rational, Rational, Rational)]) -> Landscape {
        compute_landscape(&measure(atoms)).unwrap()
    }

    #[test]
    fn nu0_examples() {
        let l = lambda(&[(int(0), int(2), int(1))]);
        assert_eq!(nu0_quadrant(&l, &int(1), &q(1, 2)).unwrap(), int(1));
        assert_eq!(nu0_quadrant(&l, &int(1), &int(1)).unwrap(), int(0));
        assert!(nu0_quadrant(&l, &int(1), &q(-1, 2)).is_err());
        let l = lambda(&[(int(0), int(2), q(1, 2)), (int(1), int(3), q(3, 2))]);
        assert_eq!(nu0_quadrant(&l, &q(3, 2), &q(1, 4)).unwrap(), int(2));
    }

    #[test]
    fn rect_mass_examples() {
        let l = lambda(&[(int(0), int(2), int(1))]);
        let r = Rect::new(int(-1), int(1), int(1), int(3)).unwrap();
        assert_eq!(rect_mass_from_landscape(&l, &r), int(1));
        let r = Rect::new(int(3), int(4), int(5), int(6)).unwrap();
        assert_eq!(rect_mass_from_landscape(&l, &r), int(0));
        let atoms = [(int(0), int(2), int(1)), (int(1), int(3), int(2))];
        let l = lambda(&atoms);
        let r = Rect::new(q(1, 2), q(3, 2), q(5, 2), q(7, 2)).unwrap();
        assert_eq!(rect_mass_from_landscape(&l, &r), int(2));
        assert_eq!(measure(&atoms).rect_mass(&r), int(2));
    }

    #[test]
    fn reconstruct_examples() {
        let atoms = [(int(0), int(2), int(1))];
        assert_eq!(reconstruct(&lambda(&atoms)).unwrap(), measure(&atoms));
        assert!(reconstruct(&Landscape::empty()).unwrap().is_empty());
        let atoms = [
            (int(0), int(2), q(1, 2)),
            (int(1), int(3), q(3, 2)),
            (int(0), int(3), int(1)),
        ];
        assert_eq!(reconstruct(&lambda(&atoms)).unwrap(), measure(&atoms));
    }

    #[test]
    fn reconstruct_signed_examples() {
        let a = lambda(&[(int(0), int(2), int(1))]);
        let s = reconstruct_signed(&a, &Landscape::empty()).unwrap();
        assert_eq!(s.pos(), &measure(&[(int(0), int(2), int(1))]));
        assert!(s.neg().is_empty());
        assert!(reconstruct_signed(&a, &a).unwrap().is_zero());

        let pos = lambda(&[(int(0), int(2), int(2)), (int(1), int(3), int(1))]);
        let neg = lambda(&[(int(0), int(2), q(1, 2))]);
        let s = reconstruct_signed(&pos, &neg).unwrap();
        assert_eq!(
            s.pos(),
            &measure(&[(int(0), int(2), q(3, 2)), (int(1), int(3), int(1))])
        );
        assert!(s.neg().is_empty());
    }

    #[test]
    fn grid_isolates_single_vertices() {
        let l = lambda(&[(int(0), int(2), int(1)), (int(1), int(3), int(1))]);
        let grid = CriticalGrid::of(&l);
        assert_eq!(grid.coords(), &[int(0), int(1), int(2), int(3)]);
        let r = grid.isolating_rect(0, 2);
        assert_eq!(r, Rect::new(int(-1), q(1, 2), q(3, 2), q(5, 2)).unwrap());
        let masses = grid.vertex_masses(&l);
        let nonzero: Vec<_> = masses.iter().filter(|(_, m)| !m.is_zero()).collect();
        assert_eq!(nonzero, vec![(&(0, 2), &int(1)), (&(1, 3), &int(1))]);
    }
}
