//! Exact continuous persistence landscapes.
//!
//! A finitely supported persistence measure `mu` (a weighted set of points
//! above the diagonal) has landscape `lambda(a, t) = sup{h > 0 : mu(Q_{t,h}) >= a}`,
//! where `Q_{t,h} = (-inf, t - h) x (t + h, inf)`. This crate computes it
//! exactly over rationals, inverts it, and measures landscapes and
//! measures against each other.

pub mod aggregation;
pub mod error;
pub mod inversion;
pub mod io;
pub mod landscape;
pub mod measure;
pub mod profile;
pub mod rational;
pub mod suite;
pub mod transport;
pub mod validate;

pub use aggregation::{average_landscape, compare_apl_cpl, compare_apl_cpl_with, rank_k_transform, AplComparison, Reading};
pub use error::{Error, Result};
pub use inversion::{nu0_quadrant, reconstruct, reconstruct_signed, rect_mass_from_landscape};
pub use landscape::{compute_landscape, landscape_value_oracle, Band, Landscape};
pub use measure::{Closure, PersistenceMeasure, Point, Quadrant, Rect, SignedMeasure};
pub use profile::Profile;
pub use rational::Rational;
pub use validate::{validate_landscape, ValidationReport};
pub use transport::{check_stability, d_rk, w1_rk, w1_rk_bruteforce, Site, StabilityReport, TransportPlan};
