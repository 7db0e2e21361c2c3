//! The integrator checked against a fixed-step RK4 written here from the
//! master equation, plus the potential identities recomputed at random nodes.

use proptest::prelude::*;
use solitonforge::ode::{rhs, SolitonProfile};

/// `ω″` from `4s²ω ω″ = 2(n−2)ω(ω−1) + sω′(2sω′ − s − 2(n−2))`.
fn omega_pp(n: usize, s: f64, w: f64, wp: f64) -> f64 {
    let n2 = n as f64 - 2.0;
    (2.0 * n2 * w * (w - 1.0) + s * wp * (2.0 * s * wp - s - 2.0 * n2)) / (4.0 * s * s * w)
}

/// Classical RK4 in `x = ln s` on `(ω, sω′)` between two values of s. The
/// linearization has an eigenvalue near `−s/(4ω)`, so the step is capped at
/// `0.2ω/s` to stay inside the stability region.
fn rk4(n: usize, s_a: f64, w: f64, wp: f64, s_b: f64, dx_max: f64) -> (f64, f64) {
    let field = |x: f64, y: [f64; 2]| {
        let s = x.exp();
        let q = y[1];
        [q, q + s * s * omega_pp(n, s, y[0], q / s)]
    };
    let (mut x, xb) = (s_a.ln(), s_b.ln());
    let mut y = [w, s_a * wp];
    while x < xb {
        let dx = dx_max.min(0.2 * y[0] / x.exp()).min(xb - x);
        let k1 = field(x, y);
        let k2 = field(x + dx / 2.0, [y[0] + dx / 2.0 * k1[0], y[1] + dx / 2.0 * k1[1]]);
        let k3 = field(x + dx / 2.0, [y[0] + dx / 2.0 * k2[0], y[1] + dx / 2.0 * k2[1]]);
        let k4 = field(x + dx, [y[0] + dx * k3[0], y[1] + dx * k3[1]]);
        for j in 0..2 {
            y[j] += dx / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        x = if xb - x <= dx { xb } else { x + dx };
    }
    (y[0], y[1] / s_b)
}

#[test]
fn worked_right_hand_side() {
    // 2·1·0.5·(−0.5) = −0.5;  −0.1·(−0.2 − 1 − 2) = 0.32;  (−0.5 + 0.32)/(4·0.5) = −0.09
    let v: f64 = rhs(3, 1.0, 0.5, -0.1).unwrap();
    assert!((v + 0.09).abs() < 1e-15, "{v}");
    assert_eq!(omega_pp(3, 1.0, 0.5, -0.1), v);
}

#[test]
fn profile_agrees_with_rk4_reference() {
    for (n, b) in [(3, -1.0), (3, -0.1), (4, -0.25), (5, -0.5)] {
        let p = SolitonProfile::construct(n, b, 1e6, 4096, 1e-10).unwrap();
        let a = p.s.partition_point(|&s| s < 1.0);
        let (mut s_ref, mut w, mut wp) = (p.s[a], p.omega[a], p.omega_p[a]);
        for target in [1e2, 1e4, 1e5] {
            let j = p.s.partition_point(|&s| s < target).min(p.len() - 1);
            (w, wp) = rk4(n, s_ref, w, wp, p.s[j], 2e-4);
            s_ref = p.s[j];
            let ew = (w - p.omega[j]).abs();
            let ewp = (wp - p.omega_p[j]).abs() / p.omega_p[j].abs();
            assert!(ew <= 1e-9, "n {n} b {b} s {}: ω differs by {ew:e}", p.s[j]);
            assert!(ewp <= 1e-7, "n {n} b {b} s {}: ω′ differs by {ewp:e} relative", p.s[j]);
        }
    }
}

#[test]
fn gaussian_reference_is_flat() {
    let (w, wp) = rk4(3, 1.0, 1.0, 0.0, 1e4, 1e-3);
    assert_eq!((w, wp), (1.0, 0.0));
}

fn bryant() -> &'static SolitonProfile<f64> {
    use std::sync::OnceLock;
    static P: OnceLock<SolitonProfile<f64>> = OnceLock::new();
    P.get_or_init(|| SolitonProfile::construct(4, -0.25, 1e6, 4096, 1e-10).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn normalization_holds_at_random_nodes(i in 0usize..4096) {
        let p = bryant();
        let (n, s, w, wp, f, fp) = (p.n as f64, p.s[i], p.omega[i], p.omega_p[i], p.f[i], p.f_p[i]);
        let scal = -2.0 * (n - 1.0) * wp + (n - 1.0) * (n - 2.0) * (1.0 - w) / s;
        let grad2 = 4.0 * s * w * fp * fp;
        prop_assert!((grad2 + scal - f).abs() <= 1e-8 * f.abs().max(1.0), "node {}: {:e}", i, grad2 + scal - f);
    }

    #[test]
    fn tangential_soliton_line_holds_at_random_nodes(i in 0usize..4096) {
        // tangential component of 2Ric + g = 2 Hess f
        let p = bryant();
        let (n, s, w, wp, fp) = (p.n as f64, p.s[i], p.omega[i], p.omega_p[i], p.f_p[i]);
        let ric_tan = ((n - 2.0) * (1.0 - w) - s * wp) / s;
        let hess_tan = 2.0 * fp * w;
        prop_assert!((2.0 * ric_tan + 1.0 - 2.0 * hess_tan).abs() <= 1e-8, "node {}", i);
    }

    #[test]
    fn right_hand_side_matches_the_reference(n in 3usize..8, s in 1e-3f64..1e3, w in 0.05f64..1.5, wp in -2.0f64..2.0) {
        let a: f64 = rhs(n, s, w, wp).unwrap();
        let b = omega_pp(n, s, w, wp);
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
    }
}
