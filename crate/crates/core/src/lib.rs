//! Convex forms, sums of squares and generalized Cauchy-Schwarz constants.
//!
//! The form calculus is generic over [`Scalar`]; the aliases below fix the
//! two modes used throughout: exact rationals and `f64`.

pub mod certificates;
pub mod cones;
pub mod error;
pub mod form;
pub mod gcs;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod sdp;
pub mod tolerances;

pub use error::{Error, Result};
pub use form::{AnyForm, DiskIntegral, Form, FormFile, Monomial, PolarProfile, TermFile};
pub use scalar::{Coeff, Scalar, ScalarMode};

pub type Rational = num_rational::BigRational;
pub type RationalForm = Form<Rational>;
pub type FloatForm = Form<f64>;
