//! Exact elliptic genera of (virtual) complete intersections in projective
//! space, computed as residues of theta-function ratios over `Q(y^{1/2})[[q^{1/2}]]`,
//! together with a floating-point evaluator of the Landau-Ginzburg orbifold
//! sector sums that reproduce them.
//!
//! The exact layers are generic over a [`Field`]; the numeric layers are
//! generic over a [`Real`]. Most callers want the aliases below.

pub mod coeffring;
pub mod error;
pub mod genera;
pub mod lgside;
pub mod scalar;
pub mod selftest;
pub mod serial;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
pub use scalar::{Field, Real};

pub use num_complex::Complex;
pub use num_rational::BigRational;

/// Exact rational numbers.
pub type BigRat = BigRational;
/// Complex doubles.
pub type C64 = Complex<f64>;

pub type Poly = coeffring::Poly<BigRat>;
pub type RatFunc = coeffring::RatFunc<BigRat>;
pub type QSeries = coeffring::QSeries<BigRat>;
pub type ZLaurent = series::ZLaurent<BigRat>;
pub type TSeries = series::TSeries<BigRat>;
pub type GenusResult = genera::GenusResult<BigRat>;

pub use genera::{CISpec, GenusKind};
pub use theta::{EvalPoint, ThetaKind};


pub use coeffring::Prefactor;



pub use lgside::{Correspondence, CorrespondenceReport};
/// Sector-sum parameters over `f64`.
pub type LGParams = lgside::LGParams<f64>;
