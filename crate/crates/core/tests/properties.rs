use isoasym_core::{
    builtin, frenet_apparatus, parse, slice_surface, ternary_cross, FixedParam, Projection, Var,
    Vec4, BUILTIN_NAMES,
};
use proptest::prelude::*;

fn vec4() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-3.0..3.0_f64).prop_map(Vec4)
}

fn close(a: Vec4, b: Vec4, eps: f64) -> bool {
    (a - b).max_abs() <= eps
}

proptest! {
    #[test]
    fn cross_is_orthogonal_to_its_arguments(u in vec4(), v in vec4(), w in vec4()) {
        let c = ternary_cross(&u, &v, &w);
        let scale = 1.0 + u.norm() * v.norm() * w.norm();
        for x in [u, v, w] {
            prop_assert!(c.dot(&x).abs() <= 1e-12 * scale * (1.0 + x.norm()));
        }
    }

    #[test]
    fn cross_alternates(u in vec4(), v in vec4(), w in vec4()) {
        let c = ternary_cross(&u, &v, &w);
        let eps = 1e-12 * (1.0 + u.norm() * v.norm() * w.norm());
        prop_assert_eq!(ternary_cross(&v, &u, &w), -c);
        prop_assert!(close(ternary_cross(&u, &w, &v), -c, eps));
        prop_assert!(close(ternary_cross(&w, &v, &u), -c, eps));
        prop_assert!(close(ternary_cross(&v, &w, &u), c, eps));
    }

    #[test]
    fn cross_is_linear_in_each_slot(
        u in vec4(), v in vec4(), w in vec4(), z in vec4(), a in -2.0..2.0_f64, b in -2.0..2.0_f64,
    ) {
        let eps = 1e-11 * (1.0 + (u.norm() + z.norm()) * v.norm() * w.norm());
        let mix = u * a + z * b;
        let args = [u, v, w];
        for slot in 0..3 {
            let with = |x: Vec4| {
                let mut a3 = args;
                a3[slot] = x;
                ternary_cross(&a3[0], &a3[1], &a3[2])
            };
            prop_assert!(close(with(mix), with(u) * a + with(z) * b, eps));
        }
    }

    #[test]
    fn cross_norm_is_the_parallelotope_volume(u in vec4(), v in vec4(), w in vec4()) {
        // ‖u⊗v⊗w‖² equals the Gram determinant of (u, v, w)
        let g = [[u.dot(&u), u.dot(&v), u.dot(&w)],
                 [v.dot(&u), v.dot(&v), v.dot(&w)],
                 [w.dot(&u), w.dot(&v), w.dot(&w)]];
        let gram = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
        let n2 = ternary_cross(&u, &v, &w).dot(&ternary_cross(&u, &v, &w));
        prop_assert!((n2 - gram).abs() <= 1e-9 * (1.0 + gram.abs() + u.norm().powi(6) + v.norm().powi(6)));
    }

    #[test]
    fn display_round_trips(s in -3.0..3.0_f64, t in -3.0..3.0_f64, q in -3.0..3.0_f64) {
        for text in ["s*q^2*(t-1)", "sin(s*(q-1/2))", "-2^2+t/(1+q^2)", "sqrt(2)/2*s", "exp(-s)*cos(t-q)"] {
            let e = parse(text).unwrap();
            let back = parse(&e.to_string()).unwrap();
            let (x, y) = (e.eval(s, t, q).unwrap(), back.eval(s, t, q).unwrap());
            prop_assert!((x - y).abs() <= 1e-14 * (1.0 + x.abs()), "{} vs {}", e, back);
        }
    }

    #[test]
    fn derivative_is_linear(a in -3.0..3.0_f64, s in 0.1..3.0_f64, t in 0.1..3.0_f64) {
        let f = parse("sin(s*t)").unwrap();
        let g = parse("s^3*ln(t)").unwrap();
        let sum = parse(&format!("({a})*sin(s*t)+s^3*ln(t)")).unwrap();
        for var in Var::ALL {
            let lhs = sum.differentiate(var).unwrap().eval(s, t, 0.0).unwrap();
            let rhs = a * f.differentiate(var).unwrap().eval(s, t, 0.0).unwrap()
                + g.differentiate(var).unwrap().eval(s, t, 0.0).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn frame_is_orthonormal_and_positive(k in 0usize..2, frac in 0.0..=1.0_f64) {
        let name = ["ex1", "ex2a"][k];
        let f = builtin(name).unwrap().build().unwrap();
        let iv = f.curve().interval();
        let fr = frenet_apparatus(f.curve(), iv.lo + frac * iv.width()).unwrap();
        let m = fr.frame();
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((m[i].dot(&m[j]) - target).abs() <= 1e-12);
            }
        }
        // T ⊗ N ⊗ B₁ = −B₂ for a positively oriented frame
        prop_assert!(close(ternary_cross(&m[0], &m[1], &m[2]), -m[3], 1e-12));
    }

    #[test]
    fn frenet_reconstructs_higher_derivatives(k in 0usize..2, frac in 0.0..=1.0_f64) {
        let name = ["ex1", "ex2a"][k];
        let f = builtin(name).unwrap().build().unwrap();
        let iv = f.curve().interval();
        let s = iv.lo + frac * iv.width();
        let fr = frenet_apparatus(f.curve(), s).unwrap();
        let d = f.curve().derivatives(s, 4).unwrap();
        let (k1, k2, k3) = (fr.kappa1, fr.kappa2, fr.kappa3);
        // r‴ = −κ₁²T + κ₂κ₁B₁ for constant curvatures
        let r3 = fr.tangent * (-k1 * k1) + fr.binormal1 * (k1 * k2);
        prop_assert!(close(d[3], r3, 1e-12));
        // r⁗ = −κ₁(κ₁² + κ₂²)N + κ₁κ₂κ₃B₂
        let r4 = fr.normal * (-k1 * (k1 * k1 + k2 * k2)) + fr.binormal2 * (k1 * k2 * k3);
        prop_assert!(close(d[4], r4, 1e-12));
    }

    #[test]
    fn partials_match_finite_differences(
        k in 0usize..3, a in 0.05..0.95_f64, b in 0.05..0.95_f64, c in 0.05..0.95_f64,
    ) {
        let fam = builtin(BUILTIN_NAMES[k]).unwrap().build().unwrap();
        let (iv, sc) = (fam.curve().interval(), fam.scale());
        let p = [iv.lo + a * iv.width(), sc.t_box.lo + b * sc.t_box.width(),
                 sc.q_box.lo + c * sc.q_box.width()];
        let parts = fam.surface_partials(p[0], p[1], p[2]).unwrap();
        let h = 1e-5;
        for (i, exact) in [parts.ps, parts.pt, parts.pq].into_iter().enumerate() {
            let at = |d: f64| {
                let mut x = p;
                x[i] += d;
                fam.eval_surface(x[0], x[1], x[2]).unwrap()
            };
            let fd = (at(h) - at(-h)) * (0.5 / h);
            prop_assert!(close(exact, fd, 1e-6 * (1.0 + exact.norm())), "axis {}", i);
        }
    }

    #[test]
    fn normal_decomposes_along_the_curve(k in 0usize..3, frac in 0.01..=1.0_f64) {
        let fam = builtin(BUILTIN_NAMES[k]).unwrap().build().unwrap();
        let (iv, sc) = (fam.curve().interval(), fam.scale());
        let s = iv.lo + frac * iv.width();
        let parts = fam.surface_partials(s, sc.t0, sc.q0).unwrap();
        let phi = fam.phi_values(s).unwrap();
        let n = ternary_cross(&parts.ps, &parts.pt, &parts.pq);
        prop_assert!(close(n, phi.normal_from_frame(&parts.frenet), 1e-9));
        prop_assert!(phi.phi1.abs() <= 1e-10);
    }

    #[test]
    fn projection_is_linear(u in vec4(), v in vec4(), a in -2.0..2.0_f64, axis in 1u8..=4) {
        let p = Projection::drop_axis(axis).unwrap();
        let lhs = p.project(u * a + v);
        let (pu, pv) = (p.project(u), p.project(v));
        for i in 0..3 {
            prop_assert!((lhs[i] - (a * pu[i] + pv[i])).abs() <= 1e-12 * (1.0 + lhs[i].abs()));
        }
    }
}

#[test]
fn curve_polyline_lies_on_the_slice() {
    // holding the anchor parameter fixed, the row of vertices at the anchor
    // value of the other parameter is the projected curve itself
    let fam = builtin("ex1").unwrap().build().unwrap();
    let fixed: FixedParam = "q=0".parse().unwrap();
    let proj = Projection::drop_axis(4).unwrap();
    let mesh = slice_surface(&fam, fixed, (25, 25), proj).unwrap();
    // t samples are 0, 1/24, ..., 1; t0 = 1/2 is index 12
    let curve = &mesh.polylines[0];
    for (i, c) in curve.iter().enumerate() {
        let v = mesh.vertices[i * 25 + 12];
        for k in 0..3 {
            assert!((v[k] - c[k]).abs() <= 1e-12, "row {i}");
        }
    }
}
