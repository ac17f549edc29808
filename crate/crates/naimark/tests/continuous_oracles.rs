//! Independent quadrature oracle for the continuous families: the
//! closed-form Gaussian moment rules are checked against adaptive Simpson
//! integration over [−8, 8]² (the Gaussian tail beyond is ~1e−28).

#![allow(clippy::needless_range_loop)]

use naimark::continuous::{
    improved_pair_joints, phase_prono, quadrature_prono, triple_joint_g, GaussianPolyOvm,
    NoiseParams, VarCount,
};
use naimark::Matrix2;

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = (a + b) / 2.0;
        let lm = (a + m) / 2.0;
        let rm = (m + b) / 2.0;
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1)
        }
    }
    let m = (a + b) / 2.0;
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 24)
}

/// Numeric total of one label, entrywise iterated adaptive Simpson against
/// the Gaussian reference measure.
fn numeric_label_total(ovm: &GaussianPolyOvm, label: usize) -> Matrix2 {
    let pi = std::f64::consts::PI;
    let mut m = [[num_complex::Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let integrate_part = |re: bool| -> f64 {
                match ovm.vars {
                    VarCount::One => adaptive_simpson(
                        &|x| {
                            let v = ovm.at(label, x, 0.0).m[i][j];
                            let w = (-x * x).exp() / pi.sqrt();
                            if re {
                                v.re * w
                            } else {
                                v.im * w
                            }
                        },
                        -8.0,
                        8.0,
                        1e-11,
                    ),
                    VarCount::Two => adaptive_simpson(
                        &|x| {
                            adaptive_simpson(
                                &|y| {
                                    let v = ovm.at(label, x, y).m[i][j];
                                    let w = (-x * x - y * y).exp() / pi;
                                    if re {
                                        v.re * w
                                    } else {
                                        v.im * w
                                    }
                                },
                                -8.0,
                                8.0,
                                1e-12,
                            )
                        },
                        -8.0,
                        8.0,
                        1e-11,
                    ),
                }
            };
            m[i][j] = num_complex::Complex64::new(integrate_part(true), integrate_part(false));
        }
    }
    Matrix2 { m }
}

#[test]
fn univariate_totals_match_quadrature() {
    for (theta, eps) in [(0.0, 0.0), (1.1, 0.3), (2.0, 1.0)] {
        let q = quadrature_prono(theta, eps).unwrap();
        let numeric = numeric_label_total(&q, 0);
        let exact = q.label_total(0);
        assert!(
            numeric.max_abs_diff(&exact) <= 1e-8,
            "θ = {theta}, ε = {eps}: {:e}",
            numeric.max_abs_diff(&exact)
        );
        assert!(exact.max_abs_diff(&Matrix2::identity()) <= 1e-12);
    }
}

#[test]
fn bivariate_totals_match_quadrature() {
    let p = NoiseParams::new(0.8, 0.7, 0.9, 1.1).unwrap();
    let g = triple_joint_g(&p).unwrap();
    for label in 0..2 {
        let numeric = numeric_label_total(&g, label);
        let exact = g.label_total(label);
        assert!(
            numeric.max_abs_diff(&exact) <= 1e-8,
            "label {label}: {:e}",
            numeric.max_abs_diff(&exact)
        );
    }
    assert!(g.normalization_residual() <= 1e-12);
}

#[test]
fn pair_joint_totals_match_quadrature() {
    let (g2, g1) = improved_pair_joints(0.7, 1.1).unwrap();
    for label in 0..2 {
        let numeric = numeric_label_total(&g2, label);
        let exact = g2.label_total(label);
        assert!(numeric.max_abs_diff(&exact) <= 1e-8);
    }
    let numeric = numeric_label_total(&g1, 0);
    assert!(numeric.max_abs_diff(&g1.label_total(0)) <= 1e-8);
}

#[test]
fn symbolic_marginal_matches_quadrature_pointwise() {
    // Marginalizing the triple density over y, evaluated at fixed x,
    // agrees with direct numeric integration of the bivariate density.
    let p = NoiseParams::new(0.6, 0.55, 0.8, 0.9).unwrap();
    let g = triple_joint_g(&p).unwrap();
    let marg = g.marginal_over_y().unwrap();
    let pi = std::f64::consts::PI;
    for &x in &[-1.7, 0.0, 0.4, 2.2] {
        for label in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let numeric = adaptive_simpson(
                        &|y| g.at(label, x, y).m[i][j].re * (-y * y).exp() / pi.sqrt(),
                        -8.0,
                        8.0,
                        1e-11,
                    );
                    let exact = marg.at(label, x, 0.0).m[i][j].re;
                    assert!(
                        (numeric - exact).abs() <= 1e-8,
                        "x = {x}, label {label}, entry ({i}, {j})"
                    );
                }
            }
        }
    }
}

#[test]
fn trig_normalization_matches_quadrature() {
    let phi = phase_prono(0.35).unwrap();
    let two_pi = 2.0 * std::f64::consts::PI;
    for i in 0..2 {
        for j in 0..2 {
            let numeric =
                adaptive_simpson(&|t| phi.at(0, t).m[i][j].re / two_pi, 0.0, two_pi, 1e-11);
            let exact = phi.label_total(0).m[i][j].re;
            assert!((numeric - exact).abs() <= 1e-9);
        }
    }
}
