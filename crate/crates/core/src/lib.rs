//! Hypersurface families in R⁴ that share a prescribed curve as a common
//! isoasymptotic.
//!
//! A curve r(s) is given by closed-form component expressions; its Frenet
//! apparatus {T, N, B₁, B₂, κ₁, κ₂, κ₃} is computed from exact symbolic
//! derivatives. A pencil member
//! P(s, t, q) = r(s) + u·T + v·N + w·B₁ + x·B₂ is specified by four
//! marching-scale expressions, and [`FamilySpec::verify`] decides whether r
//! is both an isoparametric and an asymptotic curve of P. [`viz`] slices and
//! projects P into meshes.

pub mod config;
pub mod curve;
pub mod error;
pub mod expr;
pub mod family;
pub mod frenet;
pub mod interval;
pub mod vec4;
pub mod viz;

pub use config::{builtin, load_config, Config, ConfigError, BUILTIN_NAMES};
pub use curve::{CurveSpec, ValidationReport};
pub use error::{Error, Result};
pub use expr::{parse, Expr, ExprError, Var};
pub use family::{
    AsymptoticReport, FamilySpec, IsoparametricReport, MarchingScale, PhiValues,
    SurfacePartials, VerificationReport,
};
pub use frenet::{frenet_apparatus, verify_frenet_odes, FrenetData, OdeResiduals};
pub use interval::Interval;
pub use vec4::{ternary_cross, Vec4};
pub use viz::{export_mesh, slice_surface, FixedParam, Mesh, Projection};
