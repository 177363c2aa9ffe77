//! Trkalian (constant-eigenvalue curl eigen-) fields, their Radon transforms,
//! and the transform-space operator calculus.
//!
//! Every numerical routine is generic over the scalar type through
//! [`scalar::Real`] (implemented for `f32` and `f64`); the aliases at the
//! crate root fix the double-precision instantiation used by the command-line
//! tool and the verification suite.

pub mod biotsavart;
pub mod catalog;
pub mod cktransform;
pub mod error;
pub mod fd;
pub mod fields;
pub mod geometry;
pub mod io;
pub mod moses;
pub mod quadrature;
pub mod radon;
pub mod rbs;
pub mod scalar;
pub mod special;
pub mod verify;

pub use error::{Result, TrkError};
pub use scalar::Real;

pub type Direction = geometry::Direction<f64>;
pub type SphereQuadrature = quadrature::SphereQuadrature<f64>;
pub type PlaneQuadrature = quadrature::PlaneQuadrature<f64>;
pub type FrameVector = moses::FrameVector<f64>;
pub type Vec3 = scalar::RVec3<f64>;
pub type CVec3 = scalar::CVec3<f64>;
pub type Complex = scalar::Cplx<f64>;
pub type AnalyticProfile = radon::AnalyticProfile<f64>;
pub type RadonAtom = radon::RadonAtom<f64>;
pub type GridProfile = radon::GridProfile<f64>;
pub type PGrid = radon::PGrid<f64>;
pub type SampledField = fields::SampledField<f64>;
pub type ModeField = fields::ModeField<f64>;
pub type VolumeQuadrature = biotsavart::VolumeQuadrature<f64>;
pub type DebyeChoice = cktransform::DebyeChoice<f64>;
