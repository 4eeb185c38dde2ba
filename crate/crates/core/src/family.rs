//! Hypersurface pencils through a curve and the isoasymptotic criterion.
//!
//! A member of the pencil is
//!
//! ```text
//! P(s, t, q) = r(s) + u·T(s) + v·N(s) + w·B₁(s) + x·B₂(s)
//! ```
//!
//! where u, v, w, x are the marching-scale functions of (s, t, q). The curve
//! r is an isoasymptotic of P exactly when
//!
//! ```text
//! u = v = w = x = 0              at (s, t₀, q₀) for every s
//! φ₂ = 0 and φ₃² + φ₄² ≠ 0       at (s, t₀, q₀) for every s
//! ```
//!
//! with φ₂ = w_t x_q − w_q x_t, φ₃ = v_t x_q − v_q x_t, φ₄ = v_t w_q − v_q w_t.
//! Along the curve the normal n̂ = P_s ⊗ P_t ⊗ P_q decomposes as
//! φ₁T − φ₂N + φ₃B₁ − φ₄B₂, so φ₂ = 0 is the statement n̂ • N = 0.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{CurveSpec, DEFAULT_TOL_UNIT, DEFAULT_VALIDATION_SAMPLES};
use crate::error::{Error, Result};
use crate::expr::{Expr, ExprError, Var};
use crate::frenet::{frenet_apparatus, FrenetData};
use crate::interval::Interval;
use crate::vec4::{det2, det3, ternary_cross, Vec4, EPS_DEGENERATE};

pub const DEFAULT_GRID: usize = 257;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_TOL_NONDEG: f64 = 1e-10;

const U: usize = 0;
const V: usize = 1;
const W: usize = 2;
const X: usize = 3;

/// One marching-scale function with its first partials.
#[derive(Clone, Debug)]
pub struct ScaleFunction {
    pub expr: Expr,
    pub ds: Expr,
    pub dt: Expr,
    pub dq: Expr,
}

impl ScaleFunction {
    pub fn new(expr: Expr) -> Result<Self, ExprError> {
        Ok(ScaleFunction {
            ds: expr.differentiate(Var::S)?,
            dt: expr.differentiate(Var::T)?,
            dq: expr.differentiate(Var::Q)?,
            expr,
        })
    }

    pub fn partial(&self, var: Var) -> &Expr {
        match var {
            Var::S => &self.ds,
            Var::T => &self.dt,
            Var::Q => &self.dq,
        }
    }
}

/// The marching-scale functions u, v, w, x with the anchor (t₀, q₀) and the
/// parameter boxes for t and q.
#[derive(Clone, Debug)]
pub struct MarchingScale {
    functions: [ScaleFunction; 4],
    pub t0: f64,
    pub q0: f64,
    pub t_box: Interval,
    pub q_box: Interval,
}

/// Values and first partials of (u, v, w, x) at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleJet {
    pub value: [f64; 4],
    pub ds: [f64; 4],
    pub dt: [f64; 4],
    pub dq: [f64; 4],
}

impl MarchingScale {
    pub fn new(
        exprs: [Expr; 4],
        t0: f64,
        q0: f64,
        t_box: Interval,
        q_box: Interval,
    ) -> Result<Self> {
        for (name, b) in [("t", &t_box), ("q", &q_box)] {
            if !b.is_valid() {
                return Err(Error::InvalidScale(format!(
                    "{name} box [{}, {}] is empty or not finite",
                    b.lo, b.hi
                )));
            }
        }
        if !t_box.closure_contains(t0) {
            return Err(Error::OutOfDomain { what: "t0", value: t0, lo: t_box.lo, hi: t_box.hi });
        }
        if !q_box.closure_contains(q0) {
            return Err(Error::OutOfDomain { what: "q0", value: q0, lo: q_box.lo, hi: q_box.hi });
        }
        let [u, v, w, x] = exprs;
        let functions = [
            ScaleFunction::new(u)?,
            ScaleFunction::new(v)?,
            ScaleFunction::new(w)?,
            ScaleFunction::new(x)?,
        ];
        Ok(MarchingScale { functions, t0, q0, t_box, q_box })
    }

    pub fn parse(
        exprs: [&str; 4],
        t0: f64,
        q0: f64,
        t_box: Interval,
        q_box: Interval,
    ) -> Result<Self> {
        let parsed = [exprs[0].parse()?, exprs[1].parse()?, exprs[2].parse()?, exprs[3].parse()?];
        Self::new(parsed, t0, q0, t_box, q_box)
    }

    /// u, v, w, x in that order.
    pub fn functions(&self) -> &[ScaleFunction; 4] {
        &self.functions
    }

    pub fn jet(&self, s: f64, t: f64, q: f64) -> Result<ScaleJet, ExprError> {
        let mut jet = ScaleJet { value: [0.0; 4], ds: [0.0; 4], dt: [0.0; 4], dq: [0.0; 4] };
        for (i, f) in self.functions.iter().enumerate() {
            jet.value[i] = f.expr.eval(s, t, q)?;
            jet.ds[i] = f.ds.eval(s, t, q)?;
            jet.dt[i] = f.dt.eval(s, t, q)?;
            jet.dq[i] = f.dq.eval(s, t, q)?;
        }
        Ok(jet)
    }
}

/// A curve together with the marching-scale functions of a pencil member.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    curve: CurveSpec,
    scale: MarchingScale,
}

/// Partial derivatives of P at one point, in frame coordinates and in R⁴.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePartials {
    pub frenet: FrenetData,
    /// coordinates of ∂P/∂s, ∂P/∂t, ∂P/∂q in the frame {T, N, B₁, B₂}
    pub frame_coords: [[f64; 4]; 3],
    pub ps: Vec4,
    pub pt: Vec4,
    pub pq: Vec4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiValues {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
}

impl PhiValues {
    /// φ₁T − φ₂N + φ₃B₁ − φ₄B₂.
    pub fn normal_from_frame(&self, frenet: &FrenetData) -> Vec4 {
        frenet.from_frame_coords([self.phi1, -self.phi2, self.phi3, -self.phi4])
    }

    pub fn nondegeneracy(&self) -> f64 {
        self.phi3 * self.phi3 + self.phi4 * self.phi4
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridDescription {
    pub s_lo: f64,
    pub s_hi: f64,
    pub open_lo: bool,
    pub open_hi: bool,
    pub n_s: usize,
    pub t0: f64,
    pub q0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoparametricReport {
    pub pass: bool,
    /// max |u|, |v|, |w|, |x| at (s, t₀, q₀)
    pub max_abs_uvwx_on_curve: f64,
    /// max |∂u/∂s|, … at (s, t₀, q₀)
    pub max_abs_s_partials_on_curve: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub pass: bool,
    pub max_abs_phi1: f64,
    pub max_abs_phi2: f64,
    pub min_phi3sq_plus_phi4sq: f64,
    /// max |normalize(n̂) • N| over nonsingular grid points
    pub max_abs_normal_dot_n: Option<f64>,
    /// max |r″ • normalize(n̂)| / κ₁ over nonsingular grid points
    pub max_abs_r2_dot_normal_over_kappa1: Option<f64>,
    /// grid points where n̂ vanishes
    pub singular_points: usize,
    pub first_singular_s: Option<f64>,
}

/// Outcome of the full isoasymptotic check along the curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub grid: GridDescription,
    pub tol: f64,
    pub tol_nondeg: f64,
    pub isoparametric_pass: bool,
    pub max_abs_uvwx_on_curve: f64,
    pub max_abs_s_partials_on_curve: f64,
    pub asymptotic_pass: bool,
    pub max_abs_phi1: Option<f64>,
    pub max_abs_phi2: Option<f64>,
    pub min_phi3sq_plus_phi4sq: Option<f64>,
    #[serde(rename = "max_abs_normal_dot_N")]
    pub max_abs_normal_dot_n: Option<f64>,
    pub max_abs_r2_dot_normal_over_kappa1: Option<f64>,
    pub singular_points: Option<usize>,
    pub first_singular_s: Option<f64>,
    pub isoasymptotic: bool,
}

impl FamilySpec {
    /// Pair a curve with marching-scale functions, validating the curve on
    /// the default grid.
    pub fn new(curve: CurveSpec, scale: MarchingScale) -> Result<Self> {
        Self::with_validation(curve, scale, DEFAULT_VALIDATION_SAMPLES, DEFAULT_TOL_UNIT)
    }

    pub fn with_validation(
        curve: CurveSpec,
        scale: MarchingScale,
        n_samples: usize,
        tol_unit: f64,
    ) -> Result<Self> {
        curve.ensure_valid(n_samples, tol_unit)?;
        Ok(FamilySpec { curve, scale })
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn scale(&self) -> &MarchingScale {
        &self.scale
    }

    /// P(s, t, q).
    pub fn eval_surface(&self, s: f64, t: f64, q: f64) -> Result<Vec4> {
        let f = frenet_apparatus(&self.curve, s)?;
        let r = self.curve.point(s)?;
        let mut coeffs = [0.0; 4];
        for (c, func) in coeffs.iter_mut().zip(self.scale.functions.iter()) {
            *c = func.expr.eval(s, t, q)?;
        }
        Ok(r + f.from_frame_coords(coeffs))
    }

    /// ∂P/∂s, ∂P/∂t, ∂P/∂q from the frame expansions
    ///
    /// ```text
    /// P_s = (1 + u_s − vκ₁)T + (uκ₁ + v_s − wκ₂)N + (vκ₂ + w_s − xκ₃)B₁ + (wκ₃ + x_s)B₂
    /// P_t = u_t T + v_t N + w_t B₁ + x_t B₂
    /// P_q = u_q T + v_q N + w_q B₁ + x_q B₂
    /// ```
    pub fn surface_partials(&self, s: f64, t: f64, q: f64) -> Result<SurfacePartials> {
        let f = frenet_apparatus(&self.curve, s)?;
        let j = self.scale.jet(s, t, q)?;
        let (k1, k2, k3) = (f.kappa1, f.kappa2, f.kappa3);
        let val = j.value;
        let s_coords = [
            1.0 + j.ds[U] - val[V] * k1,
            val[U] * k1 + j.ds[V] - val[W] * k2,
            val[V] * k2 + j.ds[W] - val[X] * k3,
            val[W] * k3 + j.ds[X],
        ];
        Ok(SurfacePartials {
            frenet: f,
            frame_coords: [s_coords, j.dt, j.dq],
            ps: f.from_frame_coords(s_coords),
            pt: f.from_frame_coords(j.dt),
            pq: f.from_frame_coords(j.dq),
        })
    }

    /// n̂ = P_s ⊗ P_t ⊗ P_q (not normalized).
    ///
    /// Fails with [`Error::SingularPoint`] when the three partials are
    /// linearly dependent.
    pub fn surface_normal(&self, s: f64, t: f64, q: f64) -> Result<Vec4> {
        let p = self.surface_partials(s, t, q)?;
        let n = ternary_cross(&p.ps, &p.pt, &p.pq);
        let norm = n.norm();
        if norm <= EPS_DEGENERATE {
            return Err(Error::SingularPoint { s, t, q, norm });
        }
        Ok(n)
    }

    /// φ₁ … φ₄ at (s, t₀, q₀).
    ///
    /// φ₁ is the full 3×3 determinant; φ₂, φ₃, φ₄ use the 2×2 reductions
    /// that hold on the curve once the marching scales and their s-partials
    /// vanish there.
    pub fn phi_values(&self, s: f64) -> Result<PhiValues> {
        let j = self.scale.jet(s, self.scale.t0, self.scale.q0)?;
        let (ds, dt, dq) = (j.ds, j.dt, j.dq);
        Ok(PhiValues {
            phi1: det3([[ds[V], ds[W], ds[X]], [dt[V], dt[W], dt[X]], [dq[V], dq[W], dq[X]]]),
            phi2: det2([[dt[W], dt[X]], [dq[W], dq[X]]]),
            phi3: det2([[dt[V], dt[X]], [dq[V], dq[X]]]),
            phi4: det2([[dt[V], dt[W]], [dq[V], dq[W]]]),
        })
    }

    fn grid(&self, n_s: usize) -> (GridDescription, Vec<f64>) {
        let iv = self.curve.interval();
        let desc = GridDescription {
            s_lo: iv.lo,
            s_hi: iv.hi,
            open_lo: iv.open_lo,
            open_hi: iv.open_hi,
            n_s,
            t0: self.scale.t0,
            q0: self.scale.q0,
        };
        (desc, iv.samples(n_s))
    }

    /// Check that P(s, t₀, q₀) = r(s), i.e. u = v = w = x = 0 along the
    /// curve, together with the vanishing of their s-partials there.
    pub fn check_isoparametric(&self, n_s: usize, tol: f64) -> Result<IsoparametricReport> {
        assert!(n_s >= 2, "need at least two grid points");
        let (_, grid) = self.grid(n_s);
        let (t0, q0) = (self.scale.t0, self.scale.q0);
        let jets: Vec<ScaleJet> = grid
            .par_iter()
            .map(|&s| self.scale.jet(s, t0, q0))
            .collect::<Result<_, _>>()?;
        let max_abs = |pick: fn(&ScaleJet) -> &[f64; 4]| {
            jets.iter()
                .flat_map(|j| pick(j).iter())
                .fold(0.0_f64, |m, v| m.max(v.abs()))
        };
        let max_values = max_abs(|j| &j.value);
        let max_ds = max_abs(|j| &j.ds);
        Ok(IsoparametricReport {
            pass: max_values <= tol && max_ds <= tol,
            max_abs_uvwx_on_curve: max_values,
            max_abs_s_partials_on_curve: max_ds,
        })
    }

    /// Decide φ₂ ≡ 0 and φ₃² + φ₄² ≠ 0 along the curve.
    ///
    /// The nonvanishing condition is tested pointwise: any grid point with
    /// φ₃² + φ₄² ≤ `tol_nondeg` fails the family. The normal-curvature test
    /// |normalize(n̂) • N| is recorded alongside from the full cross product.
    /// Fails with [`Error::NotIsoparametric`] if the isoparametric check at
    /// the same tolerance does not pass.
    pub fn check_asymptotic(
        &self,
        n_s: usize,
        tol: f64,
        tol_nondeg: f64,
    ) -> Result<AsymptoticReport> {
        let iso = self.check_isoparametric(n_s, tol)?;
        if !iso.pass {
            return Err(Error::NotIsoparametric { max_abs: iso.max_abs_uvwx_on_curve });
        }
        let (_, grid) = self.grid(n_s);
        let samples: Vec<AsymptoticSample> = grid
            .par_iter()
            .map(|&s| self.asymptotic_sample(s))
            .collect::<Result<_>>()?;

        let mut max_phi1 = 0.0_f64;
        let mut max_phi2 = 0.0_f64;
        let mut min_nondeg = f64::INFINITY;
        let mut max_dot_n: Option<f64> = None;
        let mut max_r2: Option<f64> = None;
        let mut singular = 0;
        let mut first_singular = None;
        for (s, sample) in grid.iter().zip(samples.iter()) {
            max_phi1 = max_phi1.max(sample.phi.phi1.abs());
            max_phi2 = max_phi2.max(sample.phi.phi2.abs());
            min_nondeg = min_nondeg.min(sample.phi.nondegeneracy());
            match sample.oracle {
                Some((dot_n, r2)) => {
                    max_dot_n = Some(max_dot_n.map_or(dot_n, |m| m.max(dot_n)));
                    max_r2 = Some(max_r2.map_or(r2, |m| m.max(r2)));
                }
                None => {
                    singular += 1;
                    first_singular.get_or_insert(*s);
                }
            }
        }
        Ok(AsymptoticReport {
            pass: max_phi2 <= tol && min_nondeg > tol_nondeg,
            max_abs_phi1: max_phi1,
            max_abs_phi2: max_phi2,
            min_phi3sq_plus_phi4sq: min_nondeg,
            max_abs_normal_dot_n: max_dot_n,
            max_abs_r2_dot_normal_over_kappa1: max_r2,
            singular_points: singular,
            first_singular_s: first_singular,
        })
    }

    fn asymptotic_sample(&self, s: f64) -> Result<AsymptoticSample> {
        let phi = self.phi_values(s)?;
        let p = self.surface_partials(s, self.scale.t0, self.scale.q0)?;
        let n = ternary_cross(&p.ps, &p.pt, &p.pq);
        let oracle = match n.normalize() {
            Ok(unit) => {
                let r2 = self.curve.derivative(s, 2)?;
                Some((unit.dot(&p.frenet.normal).abs(), r2.dot(&unit).abs() / p.frenet.kappa1))
            }
            Err(_) => None,
        };
        Ok(AsymptoticSample { phi, oracle })
    }

    /// Run both checks and assemble the report.
    pub fn verify(&self, n_s: usize, tol: f64, tol_nondeg: f64) -> Result<VerificationReport> {
        let (grid, _) = self.grid(n_s);
        let iso = self.check_isoparametric(n_s, tol)?;
        let asym = if iso.pass { Some(self.check_asymptotic(n_s, tol, tol_nondeg)?) } else { None };
        let asymptotic_pass = asym.as_ref().is_some_and(|a| a.pass);
        Ok(VerificationReport {
            grid,
            tol,
            tol_nondeg,
            isoparametric_pass: iso.pass,
            max_abs_uvwx_on_curve: iso.max_abs_uvwx_on_curve,
            max_abs_s_partials_on_curve: iso.max_abs_s_partials_on_curve,
            asymptotic_pass,
            max_abs_phi1: asym.as_ref().map(|a| a.max_abs_phi1),
            max_abs_phi2: asym.as_ref().map(|a| a.max_abs_phi2),
            min_phi3sq_plus_phi4sq: asym.as_ref().map(|a| a.min_phi3sq_plus_phi4sq),
            max_abs_normal_dot_n: asym.as_ref().and_then(|a| a.max_abs_normal_dot_n),
            max_abs_r2_dot_normal_over_kappa1: asym
                .as_ref()
                .and_then(|a| a.max_abs_r2_dot_normal_over_kappa1),
            singular_points: asym.as_ref().map(|a| a.singular_points),
            first_singular_s: asym.as_ref().and_then(|a| a.first_singular_s),
            isoasymptotic: iso.pass && asymptotic_pass,
        })
    }
}

struct AsymptoticSample {
    phi: PhiValues,
    /// (|n̂•N|, |r″•n̂|/κ₁), absent where n̂ = 0
    oracle: Option<(f64, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn helix() -> CurveSpec {
        CurveSpec::parse(
            ["1/2*cos(s)", "1/2*sin(s)", "1/2*s", "sqrt(2)/2*s"],
            Interval::closed(0.0, 2.0 * PI),
        )
        .unwrap()
    }

    fn helix_family(u: &str, v: &str, w: &str, x: &str, t0: f64, q0: f64) -> FamilySpec {
        let ms = MarchingScale::parse(
            [u, v, w, x],
            t0,
            q0,
            Interval::closed(0.0, 1.0),
            Interval::closed(0.0, 1.0),
        )
        .unwrap();
        FamilySpec::new(helix(), ms).unwrap()
    }

    fn ex1() -> FamilySpec {
        helix_family("(t-1/2)*(q-0)", "t-1/2", "0", "q-0", 0.5, 0.0)
    }

    #[test]
    fn surface_passes_through_curve() {
        let f = ex1();
        for s in [0.0, 1.0, 4.0] {
            let p = f.eval_surface(s, 0.5, 0.0).unwrap();
            let r = f.curve().point(s).unwrap();
            assert!((p - r).max_abs() < 1e-15);
        }
    }

    #[test]
    fn surface_matches_expanded_form() {
        let f = ex1();
        let (s, t, q) = (1.3, 0.2, 0.7);
        let p = f.eval_surface(s, t, q).unwrap();
        let (sn, cs) = s.sin_cos();
        assert_abs_diff_eq!(
            p[0],
            cs - t * cs + 0.25 * q * sn - 0.5 * q * t * sn,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            p[1],
            sn - 0.25 * q * cs - t * sn + 0.5 * q * t * cs,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            p[2],
            0.5 * s - 0.25 * q + 6f64.sqrt() / 3.0 * q + 0.5 * q * t,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            p[3],
            2f64.sqrt() / 2.0 * s - 3f64.sqrt() / 3.0 * q - 2f64.sqrt() / 4.0 * q
                + 2f64.sqrt() / 2.0 * q * t,
            epsilon = 1e-14
        );
    }

    #[test]
    fn partials_on_curve_are_frame_vectors() {
        let f = ex1();
        let p = f.surface_partials(2.0, 0.5, 0.0).unwrap();
        assert!((p.ps - p.frenet.tangent).max_abs() < 1e-15);
        assert!((p.pt - p.frenet.normal).max_abs() < 1e-15);
        assert!((p.pq - p.frenet.binormal2).max_abs() < 1e-15);
        let n = f.surface_normal(2.0, 0.5, 0.0).unwrap();
        assert!((n - p.frenet.binormal1).max_abs() < 1e-12);
    }

    #[test]
    fn phi_values_of_first_family() {
        let phi = ex1().phi_values(1.0).unwrap();
        assert_eq!(phi, PhiValues { phi1: 0.0, phi2: 0.0, phi3: 1.0, phi4: 0.0 });
    }

    #[test]
    fn zero_scale_is_singular() {
        let f = helix_family("0", "0", "0", "0", 0.5, 0.5);
        assert!(matches!(f.surface_normal(1.0, 0.5, 0.5), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn isoparametric_failure() {
        let f = helix_family("(t-1/2)*(q-1/2)", "t-1/2", "0", "q", 0.5, 0.5);
        let r = f.check_isoparametric(257, 1e-8).unwrap();
        assert!(!r.pass);
        assert_eq!(r.max_abs_uvwx_on_curve, 0.5);
        assert!(matches!(f.check_asymptotic(257, 1e-8, 1e-10), Err(Error::NotIsoparametric { .. })));
        let v = f.verify(257, 1e-8, 1e-10).unwrap();
        assert!(!v.isoasymptotic);
        assert!(v.max_abs_phi2.is_none());
    }

    #[test]
    fn mutated_family_fails_on_phi2() {
        let f = helix_family("(t-1/2)*(q-0)", "t-1/2", "t-1/2", "q-0", 0.5, 0.0);
        let r = f.check_asymptotic(257, 1e-8, 1e-10).unwrap();
        assert!(!r.pass);
        assert_eq!(r.max_abs_phi2, 1.0);
        assert!(r.max_abs_normal_dot_n.unwrap() > 0.1);
    }

    #[test]
    fn anchor_must_lie_in_box() {
        let err = MarchingScale::parse(
            ["0", "0", "0", "0"],
            2.0,
            0.0,
            Interval::closed(0.0, 1.0),
            Interval::closed(0.0, 1.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::OutOfDomain { what: "t0", .. }));
    }

    #[test]
    fn invalid_curve_is_rejected() {
        let c = CurveSpec::parse(["s", "s", "0", "0"], Interval::closed(0.0, 1.0)).unwrap();
        let ms = MarchingScale::parse(
            ["0", "t", "0", "q"],
            0.0,
            0.0,
            Interval::closed(0.0, 1.0),
            Interval::closed(0.0, 1.0),
        )
        .unwrap();
        assert!(matches!(FamilySpec::new(c, ms), Err(Error::InvalidCurve(_))));
    }
}
