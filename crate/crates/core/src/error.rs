use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigError;
use crate::expr::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("cannot normalize vector of norm {norm:e}")]
    DegenerateVector { norm: f64 },

    #[error("degenerate Frenet frame at s = {s}: {reason}")]
    DegenerateFrame { s: f64, reason: &'static str },

    #[error("third curvature undefined at s = {s}: second curvature vanishes")]
    DegenerateTorsion { s: f64 },

    #[error("singular parametrization at (s, t, q) = ({s}, {t}, {q}): normal has norm {norm:e}")]
    SingularPoint { s: f64, t: f64, q: f64, norm: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid marching scale: {0}")]
    InvalidScale(String),

    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    OutOfDomain { what: &'static str, value: f64, lo: f64, hi: f64 },

    #[error("isoparametricity fails (max |u,v,w,x| on curve = {max_abs:e}); asymptotic test not applicable")]
    NotIsoparametric { max_abs: f64 },

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
