//! The Frenet apparatus {T, N, B₁, B₂, κ₁, κ₂, κ₃} of an arc-length curve
//! in R⁴.
//!
//! With r the curve parametrized by arc length:
//!
//! ```text
//! T  = r′            κ₁ = ‖r″‖          N = r″ / κ₁
//! B₂ = (r′ ⊗ r″ ⊗ r‴) / ‖r′ ⊗ r″ ⊗ r‴‖
//! B₁ = B₂ ⊗ T ⊗ N
//! κ₂ = (B₁ • r‴) / κ₁
//! κ₃ = (B₂ • r⁗) / (κ₁ κ₂)
//! ```
//!
//! κ₂ is a signed projection and may come out negative; no sign is forced.

use serde::Serialize;

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::vec4::{ternary_cross, Vec4, EPS_DEGENERATE};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetData {
    pub s: f64,
    pub tangent: Vec4,
    pub normal: Vec4,
    pub binormal1: Vec4,
    pub binormal2: Vec4,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

impl FrenetData {
    /// The frame as [T, N, B₁, B₂].
    pub fn frame(&self) -> [Vec4; 4] {
        [self.tangent, self.normal, self.binormal1, self.binormal2]
    }

    /// Σ coords[i]·frame[i].
    pub fn from_frame_coords(&self, coords: [f64; 4]) -> Vec4 {
        Vec4::combine(coords, self.frame())
    }
}

pub fn frenet_apparatus(curve: &CurveSpec, s: f64) -> Result<FrenetData> {
    let d = curve.derivatives(s, 4)?;
    let (d1, d2, d3, d4) = (d[1], d[2], d[3], d[4]);

    let kappa1 = d2.norm();
    if kappa1 <= EPS_DEGENERATE {
        return Err(Error::DegenerateFrame { s, reason: "second derivative vanishes" });
    }
    let normal = d2 * (1.0 / kappa1);

    let cross = ternary_cross(&d1, &d2, &d3);
    let cross_norm = cross.norm();
    if cross_norm <= EPS_DEGENERATE {
        return Err(Error::DegenerateFrame {
            s,
            reason: "first three derivatives are linearly dependent",
        });
    }
    let binormal2 = cross * (1.0 / cross_norm);
    let tangent = d1;
    let binormal1 = ternary_cross(&binormal2, &tangent, &normal);

    let kappa2 = binormal1.dot(&d3) / kappa1;
    let b2_dot_d4 = binormal2.dot(&d4);
    let kappa3 = if kappa2.abs() <= EPS_DEGENERATE {
        if b2_dot_d4.abs() > EPS_DEGENERATE {
            return Err(Error::DegenerateTorsion { s });
        }
        0.0
    } else {
        b2_dot_d4 / (kappa1 * kappa2)
    };

    Ok(FrenetData { s, tangent, normal, binormal1, binormal2, kappa1, kappa2, kappa3 })
}

/// Residuals of the Frenet equations
///
/// ```text
/// T′  = κ₁N
/// N′  = −κ₁T + κ₂B₁
/// B₁′ = −κ₂N + κ₃B₂
/// B₂′ = −κ₃B₁
/// ```
///
/// with the derivatives of the frame fields taken by central differences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdeResiduals {
    pub tangent: f64,
    pub normal: f64,
    pub binormal1: f64,
    pub binormal2: f64,
}

impl OdeResiduals {
    pub fn max(&self) -> f64 {
        self.tangent.max(self.normal).max(self.binormal1).max(self.binormal2)
    }
}

pub fn verify_frenet_odes(curve: &CurveSpec, s: f64, h: f64) -> Result<OdeResiduals> {
    let iv = curve.interval();
    for x in [s - h, s + h] {
        if !iv.closure_contains(x) {
            return Err(Error::OutOfDomain { what: "s ± h", value: x, lo: iv.lo, hi: iv.hi });
        }
    }
    let f = frenet_apparatus(curve, s)?;
    let minus = frenet_apparatus(curve, s - h)?;
    let plus = frenet_apparatus(curve, s + h)?;
    let deriv = |a: Vec4, b: Vec4| (b - a) * (0.5 / h);

    let dt = deriv(minus.tangent, plus.tangent);
    let dn = deriv(minus.normal, plus.normal);
    let db1 = deriv(minus.binormal1, plus.binormal1);
    let db2 = deriv(minus.binormal2, plus.binormal2);

    Ok(OdeResiduals {
        tangent: (dt - f.normal * f.kappa1).norm(),
        normal: (dn + f.tangent * f.kappa1 - f.binormal1 * f.kappa2).norm(),
        binormal1: (db1 + f.normal * f.kappa2 - f.binormal2 * f.kappa3).norm(),
        binormal2: (db2 + f.binormal1 * f.kappa3).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use approx::assert_abs_diff_eq;

    fn assert_vec(a: Vec4, b: [f64; 4], eps: f64) {
        for i in 0..4 {
            assert_abs_diff_eq!(a[i], b[i], epsilon = eps);
        }
    }

    #[test]
    fn helix_frame_matches_closed_form() {
        let c = CurveSpec::parse(
            ["1/2*cos(s)", "1/2*sin(s)", "1/2*s", "sqrt(2)/2*s"],
            Interval::closed(0.0, 6.3),
        )
        .unwrap();
        let (r2, r3, r6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
        for s in [0.0, 0.4, 2.5, 6.0] {
            let f = frenet_apparatus(&c, s).unwrap();
            let (sn, cs) = s.sin_cos();
            assert_vec(f.tangent, [-0.5 * sn, 0.5 * cs, 0.5, r2 / 2.0], 1e-12);
            assert_vec(f.normal, [-cs, -sn, 0.0, 0.0], 1e-12);
            assert_vec(f.binormal2, [0.0, 0.0, r6 / 3.0, -r3 / 3.0], 1e-12);
            assert_vec(f.binormal1, [-r3 / 2.0 * sn, r3 / 2.0 * cs, -r3 / 6.0, -r6 / 6.0], 1e-12);
            assert_abs_diff_eq!(f.kappa1, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(f.kappa2, -r3 / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(f.kappa3, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn straight_line_has_no_frame() {
        let c = CurveSpec::parse(["s", "0", "0", "0"], Interval::closed(0.0, 1.0)).unwrap();
        assert!(matches!(frenet_apparatus(&c, 0.5), Err(Error::DegenerateFrame { .. })));
    }

    #[test]
    fn planar_circle_has_no_second_binormal() {
        let c = CurveSpec::parse(["cos(s)", "sin(s)", "0", "0"], Interval::closed(0.0, 1.0))
            .unwrap();
        let err = frenet_apparatus(&c, 0.5).unwrap_err();
        assert!(matches!(err, Error::DegenerateFrame { .. }), "{err}");
    }

    #[test]
    fn ode_check_needs_room_for_the_stencil() {
        let c = CurveSpec::parse(
            ["1/2*sin(s)", "1/2*cos(s)", "0", "sqrt(3)/2*s"],
            Interval::closed(0.0, 3.0),
        )
        .unwrap();
        assert!(matches!(verify_frenet_odes(&c, 0.0, 1e-4), Err(Error::OutOfDomain { .. })));
        assert!(verify_frenet_odes(&c, 0.5, 1e-4).unwrap().max() <= 1e-6);
    }
}
