//! Pointwise and integrated identities every expander profile must satisfy:
//! the soliton equation itself, the two normalizations of the potential, the
//! barrier inequality for `(f + n/2)^{−ε}`, the flow estimate along `−∇f`, and
//! the decay of `|∇R|`.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{fit_decay, DecayFit};
use crate::error::{Error, Result};
use crate::ode::{Dopri5, NodeJets, SolitonProfile};
use crate::warped::{self, FrameTensor2};
use crate::Scalar;

/// Jet length used for closed-form derivatives at grid nodes.
pub(crate) const JET_LEN: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub sup_residual: f64,
    pub grid_resolution: usize,
    pub convergence_order: Option<f64>,
    /// Sub-residuals or auxiliary quantities, in a fixed order.
    pub components: Vec<Component>,
}

impl IdentityReport {
    pub fn new(name: &str, grid_resolution: usize) -> Self {
        Self {
            name: name.into(),
            sup_residual: 0.0,
            grid_resolution,
            convergence_order: None,
            components: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, value: f64) {
        self.components.push(Component { name: name.into(), value });
    }

    pub fn component(&self, name: &str) -> Option<f64> {
        self.components.iter().find(|c| c.name == name).map(|c| c.value)
    }
}

fn node_jets<T: Scalar>(p: &SolitonProfile<T>, i: usize) -> NodeJets<T> {
    NodeJets::new(p.n, p.s[i], p.omega[i], p.omega_p[i], JET_LEN)
}

/// Observed order `log2(e_coarse / e_fine)` for a mesh halving.
pub fn observed_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// `2 D²f − g − 2 Ric` in the frame at node `i`, with f′ read from the profile
/// and f″ from the closed-form derivative of f′ at the node data. The axis
/// series is deliberately not used here: the residual is about the stored data.
pub fn soliton_frame_residual<T: Scalar>(p: &SolitonProfile<T>, i: usize) -> Result<FrameTensor2<T>> {
    let pt = p.point(i)?;
    let fpp = node_jets(p, i).f_p.d1();
    let hess = warped::hessian_f_frame(&pt, p.f_p[i], fpp)?;
    let ric = warped::ricci_frame(&pt)?;
    Ok(hess.scale(T::lit(2.0)).sub(&FrameTensor2::identity()).sub(&ric.scale(T::lit(2.0))))
}

/// Residual of the trapezoid rule with end corrections applied to
/// `ω(x_{i+1}) − ω(x_i)` in `x = ln s`, using `ω_x = sω′` and
/// `ω_xx = sω′ + s²ω″`. It measures how well neighbouring nodes belong to one
/// solution of the equation, which is what the integrator tolerance controls.
pub fn grid_compatibility<T: Scalar>(p: &SolitonProfile<T>) -> Result<T> {
    let mut worst = T::zero();
    let mut prev: Option<(T, T, T, T)> = None;
    for i in 0..p.len() {
        let s = p.s[i];
        let q = s * p.omega_p[i];
        let qx = q + s * s * p.omega_pp(i)?;
        let cur = (s.ln(), p.omega[i], q, qx);
        if let Some((x0, w0, q0, qx0)) = prev {
            let h = cur.0 - x0;
            let quad = h / T::lit(2.0) * (q0 + cur.2) + h * h / T::lit(12.0) * (qx0 - cur.3);
            worst = worst.max((cur.1 - w0 - quad).abs());
        }
        prev = Some(cur);
    }
    Ok(worst)
}

/// Sup over the grid of the frame components of `2 D²f − g − 2 Ric`, with the
/// radial and tangential lines and the node-to-node compatibility reported
/// separately.
pub fn soliton_residual<T: Scalar>(p: &SolitonProfile<T>) -> Result<IdentityReport> {
    let (mut rad, mut tan) = (T::zero(), T::zero());
    for i in 0..p.len() {
        let r = soliton_frame_residual(p, i)?;
        rad = rad.max(r.rad.abs());
        tan = tan.max(r.tan.abs());
    }
    let compat = grid_compatibility(p)?;
    let axis = p.axis_series_gap();
    let mut rep = IdentityReport::new("soliton equation 2Ric + g = L_X g", p.len());
    rep.push("radial line", rad.to_f64_lossy());
    rep.push("tangential line", tan.to_f64_lossy());
    rep.push("grid compatibility", compat.to_f64_lossy());
    rep.push("axis series agreement", axis.to_f64_lossy());
    rep.sup_residual = rad.max(tan).max(compat).max(axis).to_f64_lossy();
    Ok(rep)
}

/// `|∇f|² + R = f` and `Δf + |∇f|² = n/2 + f`, each relative to the size of
/// its right-hand side.
pub fn hamilton_identities<T: Scalar>(p: &SolitonProfile<T>) -> Result<IdentityReport> {
    let half_n = T::from_usize_lossy(p.n) / T::lit(2.0);
    let (mut first, mut second) = (T::zero(), T::zero());
    for i in 0..p.len() {
        let pt = p.point(i)?;
        let f = p.f[i];
        let grad2 = warped::grad_norm_sq_f(&pt, p.f_p[i])?;
        let r = warped::scalar_curvature(&pt)?;
        first = first.max((grad2 + r - f).abs() / f.abs().max(T::one()));
        let fpp = node_jets(p, i).f_p.d1();
        let lap = warped::laplacian_radial(&pt, p.f_p[i], fpp)?;
        second = second.max((lap + grad2 - half_n - f).abs() / (half_n + f.abs()));
    }
    let mut rep = IdentityReport::new("Hamilton identities", p.len());
    rep.push("|grad f|^2 + R = f", first.to_f64_lossy());
    rep.push("Lap f + |grad f|^2 = n/2 + f", second.to_f64_lossy());
    rep.sup_residual = first.max(second).to_f64_lossy();
    Ok(rep)
}

/// Barrier data for `u = (f + n/2)^{−ε}` at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierPoint<T> {
    /// `Δu + D_X u − u/2 + (1/2 − ε²)u` from the assembled operator.
    pub assembled: T,
    /// `−ε(ε+1)[F^{−ε}(1 − 1/F) + F^{−ε−2}(n/2 + R)]` with `F = f + n/2`.
    pub closed_form: T,
}

pub fn barrier_point<T: Scalar>(p: &SolitonProfile<T>, i: usize, eps: T) -> Result<BarrierPoint<T>> {
    let half_n = T::from_usize_lossy(p.n) / T::lit(2.0);
    let pt = p.point(i)?;
    let j = node_jets(p, i);
    let u = j.f.add_scalar(half_n).powf(-eps);
    let (u0, u1, u2) = (u.value(), u.d1(), u.d2());
    let lap = warped::laplacian_radial(&pt, u1, u2)?;
    let dxu = T::lit(4.0) * pt.s * pt.omega * p.f_p[i] * u1;
    let half = T::lit(0.5);
    let assembled = lap + dxu - half * u0 + (half - eps * eps) * u0;

    let big_f = p.f[i] + half_n;
    let r = warped::scalar_curvature(&pt)?;
    let closed_form = -eps
        * (eps + T::one())
        * (big_f.powf(-eps) * (T::one() - T::one() / big_f) + big_f.powf(-eps - T::lit(2.0)) * (half_n + r));
    Ok(BarrierPoint { assembled, closed_form })
}

/// Maximum over the grid of the barrier expression (must be negative) and the
/// largest gap between the assembled and closed-form evaluations.
pub fn barrier_margin<T: Scalar>(p: &SolitonProfile<T>, eps: T) -> Result<IdentityReport> {
    let limit = T::one() / T::lit(2.0).sqrt();
    if !(eps > T::zero() && eps < limit) {
        return Err(Error::InvalidInput(format!("ε must lie in (0, 1/√2), got {eps}")));
    }
    let mut max_m = T::neg_infinity();
    let mut gap = T::zero();
    let mut negative = true;
    for i in 0..p.len() {
        let b = barrier_point(p, i, eps)?;
        max_m = max_m.max(b.assembled);
        negative &= b.assembled < T::zero() && b.closed_form < T::zero();
        gap = gap.max((b.assembled - b.closed_form).abs());
    }
    let mut rep = IdentityReport::new(&format!("barrier (f + n/2)^-{eps}"), p.len());
    rep.push("max margin", max_m.to_f64_lossy());
    rep.push("closed form gap", gap.to_f64_lossy());
    rep.push("all nodes negative", if negative { 1.0 } else { 0.0 });
    rep.sup_residual = gap.to_f64_lossy();
    Ok(rep)
}

/// Trajectory of the flow of `−∇f` started at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub tau: Vec<f64>,
    pub s: Vec<f64>,
    pub r: Vec<f64>,
    pub f: Vec<f64>,
    pub bound_r: Vec<f64>,
    pub bound_f: Vec<f64>,
}

const FLOW_TOL: f64 = 1e-10;

fn potential_from_state<T: Scalar>(n: usize, s: T, omega: T, omega_p: T) -> Result<(T, T)> {
    let fp = crate::ode::potential_derivative(n, s, omega, omega_p)?;
    let pt = warped::GeomPoint::new(n, s, omega, omega_p)?;
    Ok((warped::grad_norm_sq_f(&pt, fp)? + warped::scalar_curvature(&pt)?, fp))
}

/// Integrates `ds/dτ = −4sωf′` from `s_start`, sampling `samples + 1` equally
/// spaced times in `[0, τ_max]`, and checks `f(τ) ≥ f(0)e^{−τ}` and
/// `r(τ) ≥ r(0)e^{−τ/2}`.
pub fn flow_trace<T: Scalar>(
    p: &SolitonProfile<T>,
    s_start: T,
    tau_max: T,
    samples: usize,
) -> Result<(FlowTrace, IdentityReport)> {
    if !(s_start > p.s0() && s_start < p.s_max()) {
        return Err(Error::InvalidInput(format!("start s = {s_start} is not inside the profile grid")));
    }
    if !(tau_max > T::zero()) || samples == 0 {
        return Err(Error::InvalidInput("flow needs τ_max > 0 and at least one sample".into()));
    }
    let n = p.n;
    let tol = T::lit(FLOW_TOL);
    // carry the warping function from the nearest node below to s_start
    let k = p.s.partition_point(|&s| s <= s_start) - 1;
    let mut w0 = [p.omega[k], p.s[k] * p.omega_p[k]];
    if p.s[k] < s_start {
        Dopri5::new(tol).solve(
            |x: T, y: &[T; 2]| ode_rhs(n, x, y),
            p.s[k].ln(),
            w0,
            &[s_start.ln()],
            |_, _, y| w0 = *y,
        )?;
    }
    let s0_grid = p.s0();
    let taus: Vec<T> =
        (0..=samples).map(|i| tau_max * T::from_usize_lossy(i) / T::from_usize_lossy(samples)).collect();
    let mut states = vec![[T::zero(); 3]; taus.len()];
    Dopri5::new(tol).solve(
        |_, y: &[T; 3]| {
            let s = y[0].exp();
            if s < s0_grid {
                return Err(Error::GridExit { s: s.to_f64_lossy() });
            }
            let [_, w, q] = *y;
            let fp = crate::ode::potential_derivative(n, s, w, q / s)?;
            let dx = -T::lit(4.0) * w * fp;
            let d = ode_rhs(n, y[0], &[w, q])?;
            Ok([dx, d[0] * dx, d[1] * dx])
        },
        T::zero(),
        [s_start.ln(), w0[0], w0[1]],
        &taus,
        |i, _, y| states[i] = *y,
    )?;

    let mut tr = FlowTrace { tau: vec![], s: vec![], r: vec![], f: vec![], bound_r: vec![], bound_f: vec![] };
    let (mut violation, mut equality_gap, mut min_margin) = (T::zero(), T::zero(), T::infinity());
    let mut f0 = T::zero();
    for (i, st) in states.iter().enumerate() {
        let s = st[0].exp();
        if s < s0_grid {
            return Err(Error::GridExit { s: s.to_f64_lossy() });
        }
        let (f, _) = potential_from_state(n, s, st[1], st[2] / s)?;
        if i == 0 {
            f0 = f;
        }
        let r = T::lit(2.0) * f.sqrt();
        let bound_f = f0 * (-taus[i]).exp();
        let bound_r = T::lit(2.0) * f0.sqrt() * (-taus[i] / T::lit(2.0)).exp();
        let rel_f = (f - bound_f) / bound_f;
        let rel_r = (r - bound_r) / bound_r;
        violation = violation.max(-rel_f).max(-rel_r);
        equality_gap = equality_gap.max(rel_f.abs());
        if i > 0 {
            min_margin = min_margin.min(rel_f);
        }
        tr.tau.push(taus[i].to_f64_lossy());
        tr.s.push(s.to_f64_lossy());
        tr.r.push(r.to_f64_lossy());
        tr.f.push(f.to_f64_lossy());
        tr.bound_r.push(bound_r.to_f64_lossy());
        tr.bound_f.push(bound_f.to_f64_lossy());
    }
    let mut rep = IdentityReport::new(&format!("flow estimate from s = {s_start}"), taus.len());
    rep.push("max relative violation", violation.to_f64_lossy());
    rep.push("min relative margin in f", min_margin.to_f64_lossy());
    rep.push("max relative gap to f(0)e^-tau", equality_gap.to_f64_lossy());
    rep.sup_residual = violation.max(T::zero()).to_f64_lossy();
    Ok((tr, rep))
}

/// The master equation in `x = ln s` with state `(ω, sω′)`.
fn ode_rhs<T: Scalar>(n: usize, x: T, y: &[T; 2]) -> Result<[T; 2]> {
    let s = x.exp();
    let wpp = crate::ode::rhs(n, s, y[0], y[1] / s)?;
    Ok([y[1], y[1] + s * s * wpp])
}

/// Decay of `|∇R| = 2√(sω)|R′|` against r, together with the decay of R.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradRDecay {
    pub exact_zero: bool,
    pub grad_fit: Option<DecayFit>,
    pub r_fit: Option<DecayFit>,
}

/// `|∇R|` at every node.
pub fn grad_r_samples<T: Scalar>(p: &SolitonProfile<T>) -> Result<Vec<T>> {
    let series = p.axis_series();
    (0..p.len())
        .map(|i| {
            let rp = p.jets_with(&series, i, JET_LEN).r_curv.d1();
            warped::grad_norm_radial(&p.point(i)?, rp)
        })
        .collect()
}

/// Fits `|∇R|` and `R` against `r = 2√f` over the s-window `[s_lo, s_hi]`.
pub fn grad_r_decay<T: Scalar>(p: &SolitonProfile<T>, window: (T, T)) -> Result<GradRDecay> {
    let (lo, hi) = p.window(window.0, window.1);
    let grad = grad_r_samples(p)?;
    let grad = &grad[lo..hi];
    let r_curv: Vec<T> = (lo..hi).map(|i| p.scalar_curvature(i)).collect::<Result<_>>()?;
    let radius: Vec<T> = p.f[lo..hi].iter().map(|&f| T::lit(2.0) * f.sqrt()).collect();
    if grad.iter().all(|v| *v == T::zero()) && r_curv.iter().all(|v| *v == T::zero()) {
        return Ok(GradRDecay { exact_zero: true, grad_fit: None, r_fit: None });
    }
    Ok(GradRDecay {
        exact_zero: false,
        grad_fit: Some(fit_decay(&radius, grad)?),
        r_fit: Some(fit_decay(&radius, &r_curv)?),
    })
}
