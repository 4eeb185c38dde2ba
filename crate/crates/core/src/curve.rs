//! Arc-length curves r(s) in R⁴ given by closed-form component expressions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Var};
use crate::interval::Interval;
use crate::vec4::{Vec4, EPS_DEGENERATE};

pub const DEFAULT_VALIDATION_SAMPLES: usize = 257;
pub const DEFAULT_TOL_UNIT: f64 = 1e-8;

/// Highest derivative order kept for a curve.
pub const MAX_ORDER: usize = 4;

/// A curve r(s) = (r₁(s), r₂(s), r₃(s), r₄(s)) on an arc-length interval.
///
/// Symbolic derivatives up to fourth order are built once at construction.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    interval: Interval,
    /// `derivs[k][i]` is the k-th derivative of component i.
    derivs: [[Expr; 4]; MAX_ORDER + 1],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n_samples: usize,
    pub tol_unit: f64,
    /// max |‖r′(s)‖ − 1| over the grid
    pub max_speed_deviation: f64,
    /// min ‖r″(s)‖ over the grid
    pub min_second_derivative_norm: f64,
    pub eval_error: Option<String>,
    pub pass: bool,
}

impl CurveSpec {
    /// Build a curve from four expressions in `s`.
    ///
    /// Rejects components mentioning `t` or `q` and intervals with
    /// `lo >= hi`. Validity of the arc-length assumption is checked
    /// separately by [`CurveSpec::validate`].
    pub fn new(components: [Expr; 4], interval: Interval) -> Result<Self> {
        if !interval.is_valid() {
            return Err(Error::InvalidCurve(format!(
                "interval [{}, {}] is empty or not finite",
                interval.lo, interval.hi
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.depends_on(Var::T) || c.depends_on(Var::Q) {
                return Err(Error::InvalidCurve(format!(
                    "component {} `{c}` depends on t or q",
                    i + 1
                )));
            }
        }
        let mut derivs: Vec<[Expr; 4]> = Vec::with_capacity(MAX_ORDER + 1);
        derivs.push(components);
        for k in 1..=MAX_ORDER {
            let prev = &derivs[k - 1];
            let next = [
                prev[0].differentiate(Var::S)?,
                prev[1].differentiate(Var::S)?,
                prev[2].differentiate(Var::S)?,
                prev[3].differentiate(Var::S)?,
            ];
            derivs.push(next);
        }
        let derivs: [[Expr; 4]; MAX_ORDER + 1] =
            derivs.try_into().expect("exactly MAX_ORDER + 1 rows");
        Ok(CurveSpec { interval, derivs })
    }

    /// Parse four component strings.
    pub fn parse(components: [&str; 4], interval: Interval) -> Result<Self> {
        let exprs = [
            components[0].parse::<Expr>()?,
            components[1].parse::<Expr>()?,
            components[2].parse::<Expr>()?,
            components[3].parse::<Expr>()?,
        ];
        Self::new(exprs, interval)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn components(&self) -> &[Expr; 4] {
        &self.derivs[0]
    }

    /// Symbolic k-th derivative expressions.
    pub fn derivative_exprs(&self, order: usize) -> &[Expr; 4] {
        &self.derivs[order]
    }

    /// The k-th derivative r⁽ᵏ⁾(s) for a single order `k <= 4`.
    pub fn derivative(&self, s: f64, order: usize) -> Result<Vec4> {
        assert!(order <= MAX_ORDER, "derivative order {order} exceeds {MAX_ORDER}");
        let d = &self.derivs[order];
        Ok(Vec4([
            d[0].eval(s, 0.0, 0.0)?,
            d[1].eval(s, 0.0, 0.0)?,
            d[2].eval(s, 0.0, 0.0)?,
            d[3].eval(s, 0.0, 0.0)?,
        ]))
    }

    /// r(s), r′(s), …, r⁽ᵒʳᵈᵉʳ⁾(s).
    ///
    /// `s` must lie in the closure of the curve interval.
    pub fn derivatives(&self, s: f64, order: usize) -> Result<Vec<Vec4>> {
        assert!(order <= MAX_ORDER, "derivative order {order} exceeds {MAX_ORDER}");
        self.check_param(s)?;
        (0..=order).map(|k| self.derivative(s, k)).collect()
    }

    pub fn point(&self, s: f64) -> Result<Vec4> {
        self.derivative(s, 0)
    }

    pub(crate) fn check_param(&self, s: f64) -> Result<()> {
        if self.interval.closure_contains(s) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { what: "s", value: s, lo: self.interval.lo, hi: self.interval.hi })
        }
    }

    /// Check unit speed and a nonvanishing second derivative on a uniform
    /// grid of `n_samples` points.
    pub fn validate(&self, n_samples: usize, tol_unit: f64) -> ValidationReport {
        assert!(n_samples >= 2, "validation needs at least two samples");
        let mut max_dev = 0.0_f64;
        let mut min_r2 = f64::INFINITY;
        let mut eval_error = None;
        for s in self.interval.samples(n_samples) {
            match (self.derivative(s, 1), self.derivative(s, 2)) {
                (Ok(d1), Ok(d2)) => {
                    max_dev = max_dev.max((d1.norm() - 1.0).abs());
                    min_r2 = min_r2.min(d2.norm());
                }
                (Err(e), _) | (_, Err(e)) => {
                    eval_error = Some(format!("at s = {s}: {e}"));
                    break;
                }
            }
        }
        let pass = eval_error.is_none() && max_dev <= tol_unit && min_r2 > EPS_DEGENERATE;
        ValidationReport {
            n_samples,
            tol_unit,
            max_speed_deviation: max_dev,
            min_second_derivative_norm: min_r2,
            eval_error,
            pass,
        }
    }

    /// Like [`CurveSpec::validate`], with failure reported as [`Error::InvalidCurve`].
    pub fn ensure_valid(&self, n_samples: usize, tol_unit: f64) -> Result<()> {
        let report = self.validate(n_samples, tol_unit);
        if report.pass {
            return Ok(());
        }
        let reason = if let Some(e) = report.eval_error {
            e
        } else if report.max_speed_deviation > tol_unit {
            format!(
                "not unit speed: max |‖r′‖ − 1| = {:e} exceeds {:e}",
                report.max_speed_deviation, tol_unit
            )
        } else {
            format!(
                "second derivative vanishes: min ‖r″‖ = {:e}",
                report.min_second_derivative_norm
            )
        };
        Err(Error::InvalidCurve(reason))
    }
}
