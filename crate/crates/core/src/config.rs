//! JSON configuration and the builtin example families.
//!
//! ```json
//! {
//!   "name": "ex1",
//!   "curve": {
//!     "components": ["1/2*cos(s)", "1/2*sin(s)", "1/2*s", "sqrt(2)/2*s"],
//!     "s_range": { "lo": 0, "hi": "2*pi" }
//!   },
//!   "ms": {
//!     "u": "(t-1/2)*(q-0)", "v": "t-1/2", "w": "0", "x": "q-0",
//!     "t0": 0.5, "q0": 0,
//!     "t_box": { "lo": 0, "hi": 1 },
//!     "q_box": { "lo": 0, "hi": 1 }
//!   },
//!   "grid": { "n_s": 257, "validate_samples": 257, "frenet_samples": 9, "mesh": [25, 25] },
//!   "tolerances": { "tol": 1e-8, "tol_nondeg": 1e-10, "tol_unit": 1e-8 },
//!   "mesh": { "fix": "q=0", "project": "drop:4" }
//! }
//! ```
//!
//! Scalars (range ends, `t0`, `q0`) are JSON numbers or constant
//! expression strings. Ranges accept `open_lo` / `open_hi` flags. Unknown
//! keys are rejected; `grid`, `tolerances` and `mesh` are optional.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveSpec, DEFAULT_TOL_UNIT, DEFAULT_VALIDATION_SAMPLES};
use crate::error::Error;
use crate::expr::{parse, Expr};
use crate::family::{FamilySpec, MarchingScale, DEFAULT_GRID, DEFAULT_TOL, DEFAULT_TOL_NONDEG};
use crate::interval::Interval;
use crate::viz::{FixedParam, Projection};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigIssue {
    pub path: String,
    pub reason: String,
}

/// Every problem found in a configuration, each tagged with its field path.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl ConfigError {
    fn single(path: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError { issues: vec![ConfigIssue { path: path.into(), reason: reason.into() }] }
    }

    pub fn paths(&self) -> Vec<&str> {
        self.issues.iter().map(|i| i.path.as_str()).collect()
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration:")?;
        for issue in &self.issues {
            write!(f, "\n  {}: {}", issue.path, issue.reason)?;
        }
        Ok(())
    }
}

/// A number, or a constant expression such as `"2*pi"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(String),
}

impl Scalar {
    fn resolve(&self) -> Result<f64, String> {
        match self {
            Scalar::Number(v) if v.is_finite() => Ok(*v),
            Scalar::Number(v) => Err(format!("{v} is not finite")),
            Scalar::Expr(text) => {
                let e = parse(text).map_err(|e| e.to_string())?;
                if !e.is_constant() {
                    return Err(format!("`{text}` is not a constant"));
                }
                e.eval_const().map_err(|e| e.to_string())
            }
        }
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Number(v)
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Expr(s.into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub lo: Scalar,
    pub hi: Scalar,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub open_lo: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub open_hi: bool,
}

impl RangeConfig {
    pub fn closed(lo: impl Into<Scalar>, hi: impl Into<Scalar>) -> Self {
        RangeConfig { lo: lo.into(), hi: hi.into(), open_lo: false, open_hi: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub components: Vec<String>,
    pub s_range: RangeConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleConfig {
    pub u: Option<String>,
    pub v: Option<String>,
    pub w: Option<String>,
    pub x: Option<String>,
    pub t0: Option<Scalar>,
    pub q0: Option<Scalar>,
    pub t_box: RangeConfig,
    pub q_box: RangeConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n_s: usize,
    pub validate_samples: usize,
    pub frenet_samples: usize,
    pub mesh: [usize; 2],
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_s: DEFAULT_GRID,
            validate_samples: DEFAULT_VALIDATION_SAMPLES,
            frenet_samples: 9,
            mesh: [25, 25],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceConfig {
    pub tol: f64,
    pub tol_nondeg: f64,
    pub tol_unit: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { tol: DEFAULT_TOL, tol_nondeg: DEFAULT_TOL_NONDEG, tol_unit: DEFAULT_TOL_UNIT }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fix: Option<FixedParam>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub project: Option<Projection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub curve: CurveConfig,
    pub ms: ScaleConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub mesh: MeshConfig,
}

/// Read and fully check a configuration file.
pub fn load_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::single("<file>", format!("{}: {e}", path.display())))?;
    Config::from_json(&text)
}

impl Config {
    /// Strict parse plus semantic checks.
    pub fn from_json(text: &str) -> Result<Config, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Config = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "<root>".to_string() } else { path };
            ConfigError::single(path, e.into_inner().to_string())
        })?;
        config.build()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Turn the configuration into a validated family, collecting every
    /// offending field.
    pub fn build(&self) -> Result<FamilySpec, ConfigError> {
        let mut issues = Vec::new();
        let mut issue = |path: &str, reason: String| {
            issues.push(ConfigIssue { path: path.to_string(), reason });
        };

        // curve
        let mut components: Vec<Option<Expr>> = Vec::new();
        for i in 0..4 {
            let path = format!("curve.components[{i}]");
            match self.curve.components.get(i) {
                None => issue(&path, "missing component expression".into()),
                Some(text) => match parse(text) {
                    Ok(e) => components.push(Some(e)),
                    Err(e) => {
                        issue(&path, e.to_string());
                        components.push(None);
                    }
                },
            }
        }
        if self.curve.components.len() > 4 {
            issue(
                "curve.components",
                format!("expected 4 components, found {}", self.curve.components.len()),
            );
        }
        let s_range = resolve_range(&self.curve.s_range, "curve.s_range", &mut issue);

        // marching scale
        let mut scale_exprs: Vec<Option<Expr>> = Vec::new();
        for (name, text) in [
            ("u", &self.ms.u),
            ("v", &self.ms.v),
            ("w", &self.ms.w),
            ("x", &self.ms.x),
        ] {
            let path = format!("ms.{name}");
            match text {
                None => issue(&path, "missing marching-scale expression".into()),
                Some(text) => match parse(text) {
                    Ok(e) => match e.differentiate(crate::expr::Var::S) {
                        Err(err) => issue(&path, err.to_string()),
                        Ok(_) => scale_exprs.push(Some(e)),
                    },
                    Err(e) => issue(&path, e.to_string()),
                },
            }
        }
        let t_box = resolve_range(&self.ms.t_box, "ms.t_box", &mut issue);
        let q_box = resolve_range(&self.ms.q_box, "ms.q_box", &mut issue);
        let mut anchor = |name: &str, value: &Option<Scalar>, bx: Option<Interval>| {
            let path = format!("ms.{name}");
            match value {
                None => {
                    issue(&path, "missing".into());
                    None
                }
                Some(v) => match v.resolve() {
                    Err(e) => {
                        issue(&path, e);
                        None
                    }
                    Ok(v) => match bx {
                        Some(b) if !b.closure_contains(v) => {
                            issue(&path, format!("{v} lies outside [{}, {}]", b.lo, b.hi));
                            None
                        }
                        _ => Some(v),
                    },
                },
            }
        };
        let t0 = anchor("t0", &self.ms.t0, t_box);
        let q0 = anchor("q0", &self.ms.q0, q_box);

        // settings
        if self.grid.n_s < 2 {
            issue("grid.n_s", "need at least 2 samples".into());
        }
        if self.grid.validate_samples < 2 {
            issue("grid.validate_samples", "need at least 2 samples".into());
        }
        if self.grid.frenet_samples < 1 {
            issue("grid.frenet_samples", "need at least 1 sample".into());
        }
        if self.grid.mesh.iter().any(|n| *n < 2) {
            issue("grid.mesh", "mesh grid must be at least 2×2".into());
        }
        for (name, v) in [
            ("tol", self.tolerances.tol),
            ("tol_nondeg", self.tolerances.tol_nondeg),
            ("tol_unit", self.tolerances.tol_unit),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                issue(&format!("tolerances.{name}"), format!("{v} is not a non-negative number"));
            }
        }

        if !issues.is_empty() {
            return Err(ConfigError { issues });
        }
        let components: [Expr; 4] = components
            .into_iter()
            .map(|c| c.expect("checked above"))
            .collect::<Vec<_>>()
            .try_into()
            .expect("four components");
        let scale_exprs: [Expr; 4] = scale_exprs
            .into_iter()
            .map(|c| c.expect("checked above"))
            .collect::<Vec<_>>()
            .try_into()
            .expect("four scale functions");

        let curve = CurveSpec::new(components, s_range.expect("checked"))
            .map_err(|e| ConfigError::single("curve", e.to_string()))?;
        let scale = MarchingScale::new(
            scale_exprs,
            t0.expect("checked"),
            q0.expect("checked"),
            t_box.expect("checked"),
            q_box.expect("checked"),
        )
        .map_err(|e| ConfigError::single("ms", e.to_string()))?;
        FamilySpec::with_validation(
            curve,
            scale,
            self.grid.validate_samples,
            self.tolerances.tol_unit,
        )
        .map_err(|e| match e {
            Error::InvalidCurve(reason) => ConfigError::single("curve", reason),
            other => ConfigError::single("<root>", other.to_string()),
        })
    }
}

fn resolve_range(
    range: &RangeConfig,
    path: &str,
    issue: &mut impl FnMut(&str, String),
) -> Option<Interval> {
    let lo = range.lo.resolve().map_err(|e| issue(&format!("{path}.lo"), e)).ok();
    let hi = range.hi.resolve().map_err(|e| issue(&format!("{path}.hi"), e)).ok();
    let (lo, hi) = (lo?, hi?);
    if lo >= hi {
        issue(path, format!("empty range: lo = {lo} is not below hi = {hi}"));
        return None;
    }
    Some(Interval { lo, hi, open_lo: range.open_lo, open_hi: range.open_hi })
}

pub const BUILTIN_NAMES: [&str; 3] = ["ex1", "ex2a", "ex2b"];

/// The builtin example families.
///
/// * `ex1`: helix (½cos s, ½sin s, ½s, (√2/2)s) on [0, 2π] with
///   u = (t−½)q, v = t−½, w = 0, x = q, anchored at (t₀, q₀) = (½, 0).
/// * `ex2a`: helix (½sin s, ½cos s, 0, (√3/2)s) on [0, 3] with
///   u = t−½, v = (s+t+1)q, w = 0, x = (s+1)(t−½), anchored at (½, 0).
/// * `ex2b`: the same curve on (0, π/2] with u = 0, v = sin(s(q−½)),
///   w = 0, x = sq²(t−1), anchored at (1, ½), q ∈ (0, 1).
pub fn builtin(name: &str) -> Option<Config> {
    let closed01 = || RangeConfig::closed(0.0, 1.0);
    let cfg = |name: &str,
               description: &str,
               curve: [&str; 4],
               s_range: RangeConfig,
               uvwx: [&str; 4],
               t0: f64,
               q0: f64,
               q_box: RangeConfig,
               fix: &str,
               project: &str| Config {
        name: Some(name.into()),
        description: Some(description.into()),
        curve: CurveConfig { components: curve.map(String::from).to_vec(), s_range },
        ms: ScaleConfig {
            u: Some(uvwx[0].into()),
            v: Some(uvwx[1].into()),
            w: Some(uvwx[2].into()),
            x: Some(uvwx[3].into()),
            t0: Some(t0.into()),
            q0: Some(q0.into()),
            t_box: closed01(),
            q_box,
        },
        grid: GridConfig::default(),
        tolerances: ToleranceConfig::default(),
        mesh: MeshConfig {
            fix: Some(fix.parse().expect("builtin fix")),
            project: Some(project.parse().expect("builtin projection")),
        },
    };
    match name {
        "ex1" => Some(cfg(
            "ex1",
            "helix in R^4 with scales u=(t-t0)(q-q0), v=t-t0, w=0, x=q-q0",
            ["1/2*cos(s)", "1/2*sin(s)", "1/2*s", "sqrt(2)/2*s"],
            RangeConfig::closed(0.0, "2*pi"),
            ["(t-1/2)*(q-0)", "t-1/2", "0", "q-0"],
            0.5,
            0.0,
            closed01(),
            "q=0",
            "drop:4",
        )),
        "ex2a" => Some(cfg(
            "ex2a",
            "helix in R^4 with scales u=t-t0, v=(s+t+1)(q-q0), w=0, x=(s+1)(t-t0)",
            ["1/2*sin(s)", "1/2*cos(s)", "0", "sqrt(3)/2*s"],
            RangeConfig::closed(0.0, 3.0),
            ["t-1/2", "(s+t+1)*(q-0)", "0", "(s+1)*(t-1/2)"],
            0.5,
            0.0,
            closed01(),
            "q=0",
            "drop:4",
        )),
        "ex2b" => Some(cfg(
            "ex2b",
            "helix in R^4 with scales u=0, v=sin(s(q-q0)), w=0, x=s q^2 (t-t0)",
            ["1/2*sin(s)", "1/2*cos(s)", "0", "sqrt(3)/2*s"],
            RangeConfig { open_lo: true, ..RangeConfig::closed(0.0, "pi/2") },
            ["0", "sin(s*(q-1/2))", "0", "s*q^2*(t-1)"],
            1.0,
            0.5,
            RangeConfig { open_lo: true, open_hi: true, ..closed01() },
            "t=1",
            "drop:3",
        ))
        .map(|mut c| {
            // φ₃² + φ₄² = s⁴/16 shrinks toward the open end s → 0; with 129
            // points the first sample s ≈ 0.0122 still clears tol_nondeg
            c.grid.n_s = 129;
            c
        }),
        _ => None,
    }
}
