//! Curvature of `da²/ω(a²) + a² g_S` recomputed in arc length.
//!
//! With `t` the radial arc length and `φ(t) = a`, the metric is
//! `dt² + φ² g_S`, whose curvatures are the textbook expressions in `φ_t` and
//! `φ_tt`. Here `φ_t = √ω(a²)` and `φ_tt = (dφ_t/da) φ_t`, and the
//! `a`-derivative is taken by central differences, so the comparison error is
//! second order in the difference step.

use solitonforge::warped::{self, GeomPoint};

struct Warp {
    omega: fn(f64) -> f64,
    omega_p: fn(f64) -> f64,
}

const WARPS: [Warp; 3] = [
    Warp { omega: |s| 1.0 / (1.0 + s), omega_p: |s| -1.0 / ((1.0 + s) * (1.0 + s)) },
    Warp { omega: |s| 0.6 + 0.4 * (-s).exp(), omega_p: |s| -0.4 * (-s).exp() },
    Warp { omega: |s| 1.0 + 0.3 * s / (1.0 + s * s), omega_p: |s| 0.3 * (1.0 - s * s) / ((1.0 + s * s) * (1.0 + s * s)) },
];

/// `f = s/4 + 0.2 sin(s/2)` and its first two s-derivatives.
fn f_s(s: f64) -> f64 {
    0.25 + 0.1 * (0.5 * s).cos()
}

fn f_ss(s: f64) -> f64 {
    -0.05 * (0.5 * s).sin()
}

/// Quantities from the arc-length formulas, with difference step `h` in `a`.
struct ArcLength {
    sec_rad: f64,
    sec_tan: f64,
    ric_rad: f64,
    ric_tan: f64,
    scal: f64,
    hess_rad: f64,
    hess_tan: f64,
    lap: f64,
}

fn arc_length(w: &Warp, n: usize, a: f64, h: f64) -> ArcLength {
    let nf = n as f64;
    let phi_t = |a: f64| (w.omega)(a * a).sqrt();
    let f_t = |a: f64| {
        let s = a * a;
        // df/dt = df/da · da/dt, df/da = 2a f_s
        2.0 * a * f_s(s) * phi_t(a)
    };
    let pt = phi_t(a);
    let ptt = (phi_t(a + h) - phi_t(a - h)) / (2.0 * h) * pt;
    let ft = f_t(a);
    let ftt = (f_t(a + h) - f_t(a - h)) / (2.0 * h) * pt;
    let sec_rad = -ptt / a;
    let sec_tan = (1.0 - pt * pt) / (a * a);
    let ric_rad = (nf - 1.0) * sec_rad;
    let ric_tan = sec_rad + (nf - 2.0) * sec_tan;
    ArcLength {
        sec_rad,
        sec_tan,
        ric_rad,
        ric_tan,
        scal: ric_rad + (nf - 1.0) * ric_tan,
        hess_rad: ftt,
        hess_tan: ft * pt / a,
        lap: ftt + (nf - 1.0) * ft * pt / a,
    }
}

fn module_values(w: &Warp, n: usize, a: f64) -> ArcLength {
    let s = a * a;
    let p = GeomPoint::new(n, s, (w.omega)(s), (w.omega_p)(s)).unwrap();
    let (sr, st) = warped::sectional(&p).unwrap();
    let ric = warped::ricci_frame(&p).unwrap();
    let (fp, fpp) = (f_s(s), f_ss(s));
    let hess = warped::hessian_f_frame(&p, fp, fpp).unwrap();
    ArcLength {
        sec_rad: sr,
        sec_tan: st,
        ric_rad: ric.rad,
        ric_tan: ric.tan,
        scal: warped::scalar_curvature(&p).unwrap(),
        hess_rad: hess.rad,
        hess_tan: hess.tan,
        lap: warped::laplacian_radial(&p, fp, fpp).unwrap(),
    }
}

fn errors(x: &ArcLength, y: &ArcLength) -> [f64; 8] {
    [
        (x.sec_rad - y.sec_rad).abs(),
        (x.sec_tan - y.sec_tan).abs(),
        (x.ric_rad - y.ric_rad).abs(),
        (x.ric_tan - y.ric_tan).abs(),
        (x.scal - y.scal).abs(),
        (x.hess_rad - y.hess_rad).abs(),
        (x.hess_tan - y.hess_tan).abs(),
        (x.lap - y.lap).abs(),
    ]
}

#[test]
fn arc_length_differences_converge_at_second_order() {
    for (k, w) in WARPS.iter().enumerate() {
        for n in [3, 4, 7] {
            for a in [0.3, 1.0, 2.2] {
                let exact = module_values(w, n, a);
                let coarse = errors(&arc_length(w, n, a, 1e-3), &exact);
                let fine = errors(&arc_length(w, n, a, 5e-4), &exact);
                for (q, (c, f)) in coarse.iter().zip(&fine).enumerate() {
                    // the tangential quantities involve no difference quotient
                    if [1, 6].contains(&q) {
                        assert!(*c <= 1e-13 * (1.0 + exact.sec_tan.abs()), "warp {k} n {n} a {a} q {q}: {c:e}");
                        continue;
                    }
                    if *c < 1e-11 {
                        continue;
                    }
                    let ratio = c / f;
                    assert!((3.4..=4.6).contains(&ratio), "warp {k} n {n} a {a} q {q}: ratio {ratio} ({c:e}, {f:e})");
                }
            }
        }
    }
}

#[test]
fn round_sphere_cap_has_unit_curvature() {
    // a = sin t on the unit sphere gives ω = 1 − s
    for n in [3, 5] {
        for s in [0.1_f64, 0.5, 0.9] {
            let p = GeomPoint::new(n, s, 1.0 - s, -1.0).unwrap();
            let (sr, st) = warped::sectional(&p).unwrap();
            assert!((sr - 1.0).abs() < 1e-15 && (st - 1.0).abs() < 1e-14);
            let nf = n as f64;
            assert!((warped::scalar_curvature(&p).unwrap() - nf * (nf - 1.0)).abs() < 1e-12);
        }
    }
}
