//! The soliton ODE for the warping function ω(s), its singular start at s = 0,
//! the reconstruction of the potential f and the extraction of the cone angle.
//!
//! Integration runs in `x = ln s` with state `(ω, q = s ω′)`, which keeps the
//! system autonomous-looking near the axis and lets a log-spaced grid be hit
//! node by node.

pub mod dopri;
mod shoot;

use serde::{Deserialize, Serialize};

pub use dopri::{Dopri5, StepStats};
pub use shoot::{shoot, ShootOptions, ShootResult};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::warped::{self, GeomPoint};
use crate::Scalar;

/// Blow-down threshold for ω.
pub const OMEGA_FLOOR: f64 = 1e-8;
/// Default launch point of the series start.
pub const DEFAULT_S0: f64 = 1e-6;
pub const DEFAULT_NODES: usize = 4096;
pub const DEFAULT_S_MAX: f64 = 1e6;
/// Smallest outer radius at which the cone angle is extracted.
pub const ALPHA_MIN_S: f64 = 1e4;
/// Outer radius of the auxiliary run used when a grid is too short for α.
pub const ALPHA_AUX_S: f64 = 1e5;

fn check_dim(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("dimension must be ≥ 3, got {n}")));
    }
    Ok(())
}

/// ω″ from the master equation
/// `4s²ω ω″ = 2(n−2)ω(ω−1) + sω′(2sω′ − s − 2(n−2))`.
pub fn rhs<T: Scalar>(n: usize, s: T, omega: T, omega_p: T) -> Result<T> {
    check_dim(n)?;
    if !(s > T::zero()) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    if !(omega > T::lit(OMEGA_FLOOR)) {
        return Err(Error::BlowDown { s: s.to_f64_lossy(), floor: OMEGA_FLOOR });
    }
    let q = s * omega_p;
    Ok(s2_omega_pp(n, s, omega, q) / (s * s))
}

/// `s² ω″` written in terms of `q = s ω′`; this form stays bounded at both ends.
fn s2_omega_pp<T: Scalar>(n: usize, s: T, omega: T, q: T) -> T {
    s2_omega_pp_offset(n, s, omega - T::one(), q)
}

/// [`s2_omega_pp`] with `u = ω − 1` given exactly.
fn s2_omega_pp_offset<T: Scalar>(n: usize, s: T, u: T, q: T) -> T {
    let two = T::lit(2.0);
    let n2 = T::from_usize_lossy(n) - two;
    let omega = T::one() + u;
    (two * n2 * omega * u + q * (two * q - s - two * n2)) / (T::lit(4.0) * omega)
}

/// Second Taylor coefficient of the regular solution with ω(0) = 1, ω′(0) = b.
pub fn series_coefficient<T: Scalar>(n: usize, b: T) -> T {
    let nn = T::from_usize_lossy(n);
    b * (T::lit(2.0) * (nn - T::one()) * b - T::one()) / (T::lit(2.0) * (nn + T::lit(2.0)))
}

/// `(ω(s0) − 1, ω′(s0))` of the regular solution. Uses the full axis series
/// when it is accurate at `s0` and the truncation `b s + c s²` otherwise. The
/// offset from 1 is returned rather than ω itself: near the axis `ω − 1 ≈ bs`
/// is tiny and would lose most of its digits when added to 1.
pub fn series_offset<T: Scalar>(n: usize, b: T, s0: T) -> (T, T) {
    let a = axis_series(n, b, AXIS_TERMS);
    if axis_series_usable(&a, s0) {
        let (mut u, mut wp) = (T::zero(), T::zero());
        for (k, &c) in a.iter().enumerate().skip(1).rev() {
            u = u * s0 + c;
            wp = wp * s0 + T::from_usize_lossy(k) * c;
        }
        return (u * s0, wp);
    }
    let c = series_coefficient(n, b);
    (b * s0 + c * s0 * s0, b + T::lit(2.0) * c * s0)
}

/// `(ω(s0), ω′(s0))` of the regular solution.
pub fn series_init<T: Scalar>(n: usize, b: T, s0: T) -> (T, T) {
    let (u, wp) = series_offset(n, b, s0);
    (T::one() + u, wp)
}

/// Taylor jet of ω about `s`, `len` coefficients, obtained by solving the master
/// equation order by order from `(ω(s), ω′(s))`.
pub fn omega_jet<T: Scalar>(n: usize, s: T, omega: T, omega_p: T, len: usize) -> Jet<T> {
    let len = len.max(2);
    let mut w = vec![T::zero(); len];
    w[0] = omega;
    w[1] = omega_p;
    let two = T::lit(2.0);
    let n2 = T::from_usize_lossy(n) - two;
    let lead = T::lit(4.0) * s * s * omega;
    for k in 0..len - 2 {
        // coefficient k of the residual with the unknown w[k+2] still zero
        let wj = Jet::from_coeffs(w[..k + 3].to_vec());
        let sj = Jet::variable(s, k + 3);
        let wp = wj.differentiate();
        let wpp = wp.differentiate();
        let lhs = (&(&sj * &sj).scale(T::lit(4.0)) * &wj) * &wpp;
        let term1 = (&wj * &wj.add_scalar(-T::one())).scale(two * n2);
        let inner = &(&sj * &wp).scale(two) - &sj.add_scalar(two * n2);
        let term2 = &(&sj * &wp) * &inner;
        let e = &(&lhs - &term1) - &term2;
        let ek = e.coeffs()[k];
        w[k + 2] = -ek / (lead * T::from_usize_lossy((k + 1) * (k + 2)));
    }
    Jet::from_coeffs(w)
}

/// Nodes with `s` below this take their jets from the regular series at 0.
pub const AXIS_SERIES_S: f64 = 1.0;
const AXIS_TERMS: usize = 64;

/// Taylor coefficients `a_0 = 1, a_1 = b, a_2, …` of the solution that is
/// regular at the axis, from the order-by-order balance
/// `2(k−1)(2k+n−2) a_k = −E_k(a_0, …, a_{k−1})`.
pub fn axis_series<T: Scalar>(n: usize, b: T, terms: usize) -> Vec<T> {
    let terms = terms.max(2);
    let mut a = vec![T::zero(); terms];
    a[0] = T::one();
    a[1] = b;
    let two = T::lit(2.0);
    let n2 = T::from_usize_lossy(n) - two;
    let idx = T::from_usize_lossy;
    for k in 2..terms {
        let (mut lhs, mut t1, mut t2) = (T::zero(), T::zero(), T::zero());
        for j in 0..=k {
            let m = k - j;
            // s²ω″, ω − 1, sω′ and 2sω′ − s − 2(n−2) coefficient by coefficient
            lhs = lhs + a[j] * idx(m) * idx(m.saturating_sub(1)) * a[m];
            if m >= 1 {
                t1 = t1 + a[j] * a[m];
            }
            let pj = idx(j) * a[j];
            let mut qm = two * idx(m) * a[m];
            if m == 1 {
                qm = qm - T::one();
            }
            if m == 0 {
                qm = qm - two * n2;
            }
            t2 = t2 + pj * qm;
        }
        let e = T::lit(4.0) * lhs - two * n2 * t1 - t2;
        a[k] = -e / (two * idx(k - 1) * (two * idx(k) + n2));
    }
    a
}

/// Whether the truncated axis series is accurate to rounding at `s`.
fn axis_series_usable<T: Scalar>(a: &[T], s: T) -> bool {
    if !(s <= T::lit(AXIS_SERIES_S)) {
        return false;
    }
    let k = a.len();
    let tail = (k.saturating_sub(4)..k).fold(T::zero(), |m, j| m.max(a[j].abs() * s.powi(j as i32)));
    tail.is_finite() && tail <= T::epsilon() * T::lit(1e-3)
}

/// Jets of the derived scalar quantities at one node.
#[derive(Debug, Clone)]
pub struct NodeJets<T> {
    pub n: usize,
    pub s: Jet<T>,
    pub omega: Jet<T>,
    pub omega_p: Jet<T>,
    /// `(1 − ω)/s`.
    pub v: Jet<T>,
    pub f_p: Jet<T>,
    /// Primitive of `f_p` through the pointwise value of f.
    pub f: Jet<T>,
    /// `4sωf′² + R` as a jet; differentiating it is less accurate than `f`.
    pub f_pointwise: Jet<T>,
    pub r_curv: Jet<T>,
}

impl<T: Scalar> NodeJets<T> {
    /// Jets from the node values `(ω, ω′)`; `len` Taylor coefficients for ω
    /// (derived jets lose one).
    pub fn new(n: usize, s: T, omega: T, omega_p: T, len: usize) -> Self {
        let w = omega_jet(n, s, omega, omega_p, len);
        let sj = Jet::variable(s, w.len());
        let v = &w.scale(-T::one()).add_scalar(T::one()) / &sj;
        Self::assemble(n, sj, w, v)
    }

    /// Jets of the regular solution from its series at the axis, or `None` when
    /// `s` lies outside the range where the series is accurate to rounding.
    /// Near the axis any perturbation of `(ω, ω′)` excites the singular
    /// solution, so node-based jets lose a power of `1/s` per derivative.
    pub fn from_axis_series(n: usize, series: &[T], s: T, len: usize) -> Option<Self> {
        if !axis_series_usable(series, s) {
            return None;
        }
        let len = len.max(2);
        let sj = Jet::variable(s, len);
        let horner = |coeffs: &mut dyn Iterator<Item = T>| {
            coeffs.fold(Jet::constant(T::zero(), len), |acc, c| (&acc * &sj).add_scalar(c))
        };
        let w = horner(&mut series.iter().rev().copied());
        let v = horner(&mut series[1..].iter().rev().map(|&c| -c));
        Some(Self::assemble(n, sj, w, v))
    }

    fn assemble(n: usize, sj: Jet<T>, w: Jet<T>, v: Jet<T>) -> Self {
        let len = w.len();
        let wp = w.differentiate();
        let two = T::lit(2.0);
        let n1 = T::from_usize_lossy(n - 1);
        let n2 = T::from_usize_lossy(n) - two;
        // f′ = [1 + 2(n−2)(1−ω)/s − 2ω′] / (4ω)
        let num = (&v.scale(two * n2) - &wp.scale(two)).add_scalar(T::one());
        let fp = &num / &w.scale(T::lit(4.0));
        let r_curv = &wp.scale(-two * n1) + &v.scale(n1 * n2);
        let sw = &sj * &w;
        let f_pointwise = &(&(&sw * &fp) * &fp).scale(T::lit(4.0)) + &r_curv;
        let mut coeffs = vec![f_pointwise.value()];
        coeffs.extend(fp.coeffs().iter().enumerate().map(|(k, &c)| c / T::from_usize_lossy(k + 1)));
        coeffs.truncate(len - 1);
        let f = Jet::from_coeffs(coeffs);
        Self { n, s: sj, omega: w, omega_p: wp, v, f_p: fp, f, f_pointwise, r_curv }
    }
}

/// Closed-form `f′(s)` from the second soliton equation.
pub fn potential_derivative<T: Scalar>(n: usize, s: T, omega: T, omega_p: T) -> Result<T> {
    let sw = s * omega;
    if !(sw > T::zero()) {
        return Err(Error::Domain(format!("s·ω must be positive, got {sw}")));
    }
    let n2 = T::from_usize_lossy(n) - T::lit(2.0);
    Ok((s + T::lit(2.0) * (n2 * (T::one() - omega) - s * omega_p)) / (T::lit(4.0) * sw))
}

/// Log-spaced grid with `nodes` points from `s0` to `s_max` inclusive.
pub fn log_grid<T: Scalar>(s0: T, s_max: T, nodes: usize) -> Result<Vec<T>> {
    if !(s0 > T::zero()) || !(s_max > s0) || nodes < 2 {
        return Err(Error::InvalidInput(format!(
            "log grid needs 0 < s0 < s_max and ≥ 2 nodes (got s0={s0}, s_max={s_max}, nodes={nodes})"
        )));
    }
    let (l0, l1) = (s0.ln(), s_max.ln());
    let m = T::from_usize_lossy(nodes - 1);
    let mut g: Vec<T> = (0..nodes).map(|i| (l0 + (l1 - l0) * T::from_usize_lossy(i) / m).exp()).collect();
    g[0] = s0;
    g[nodes - 1] = s_max;
    Ok(g)
}

fn check_grid<T: Scalar>(grid: &[T]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidInput("grid needs at least two nodes".into()));
    }
    if !(grid[0] > T::zero()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("grid must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Warping function sampled on a grid, before the potential is attached.
#[derive(Debug, Clone)]
pub struct WarpProfile<T> {
    pub n: usize,
    pub b: T,
    pub tol: T,
    pub s: Vec<T>,
    pub omega: Vec<T>,
    pub omega_p: Vec<T>,
    pub stats: StepStats,
}

/// Integrates the master equation from the series start at `grid[0]` through
/// every node of `grid`.
pub fn integrate<T: Scalar>(n: usize, b: T, grid: &[T], tol: T) -> Result<WarpProfile<T>> {
    check_dim(n)?;
    check_grid(grid)?;
    if b > T::zero() {
        return Err(Error::InvalidInput(format!("b = ω′(0) must be ≤ 0, got {b}")));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let s0 = grid[0];
    let (u0, wp0) = series_offset(n, b, s0);
    let xs: Vec<T> = grid.iter().map(|s| s.ln()).collect();
    let floor = T::lit(OMEGA_FLOOR);

    let mut omega = vec![T::zero(); grid.len()];
    let mut omega_p = vec![T::zero(); grid.len()];
    let stats = Dopri5::new(tol).solve(
        |x: T, y: &[T; 2]| {
            let s = x.exp();
            // the state carries u = ω − 1
            if !(T::one() + y[0] > floor) {
                return Err(Error::BlowDown { s: s.to_f64_lossy(), floor: OMEGA_FLOOR });
            }
            Ok([y[1], y[1] + s2_omega_pp_offset(n, s, y[0], y[1])])
        },
        xs[0],
        [u0, s0 * wp0],
        &xs,
        |k, _, y| {
            omega[k] = T::one() + y[0];
            omega_p[k] = y[1] / grid[k];
        },
    )?;
    Ok(WarpProfile { n, b, tol, s: grid.to_vec(), omega, omega_p, stats })
}

/// Terms of the formal expansion kept when extracting the cone angle.
pub const FORMAL_TERMS: usize = 8;

/// Coefficients `a_0 = 1 − α, a_1, …, a_terms` of the formal expansion
/// `ω ~ Σ a_k s^{−k}`. The series diverges, but every coefficient is fixed by
/// α: the `s·sω′` term of the equation isolates `a_{m+1}` at order `s^{−m}`,
///
/// `(m+1) a_{m+1} = 4(a∗E)_m − 2(n−2)((a∗a)_m − a_m) − 2(D∗D)_m + 2(n−2)D_m`
///
/// with `D_k = −k a_k` (from sω′) and `E_k = k(k+1) a_k` (from s²ω″).
pub fn formal_coefficients<T: Scalar>(n: usize, alpha: T, terms: usize) -> Vec<T> {
    let n2 = T::from_usize_lossy(n) - T::lit(2.0);
    let two = T::lit(2.0);
    let mut a = vec![T::one() - alpha];
    let conv = |x: &[T], y: &[T], m: usize| (0..=m).fold(T::zero(), |acc, k| acc + x[k] * y[m - k]);
    for m in 0..terms {
        let d: Vec<T> = (0..=m).map(|k| -T::from_usize_lossy(k) * a[k]).collect();
        let e: Vec<T> = (0..=m).map(|k| T::from_usize_lossy(k * (k + 1)) * a[k]).collect();
        let next = T::lit(4.0) * conv(&a, &e, m) - two * n2 * (conv(&a, &a, m) - a[m]) - two * conv(&d, &d, m)
            + two * n2 * d[m];
        a.push(next / T::from_usize_lossy(m + 1));
    }
    a
}

/// Cone angle from `ω(S) = Σ_{k ≤ FORMAL_TERMS} a_k(α) S^{−k}` at the
/// outermost node, solved by fixed-point iteration on
/// `α = 1 − ω(S) + Σ_{k ≥ 1} a_k(α) S^{−k}` (a contraction with rate O(1/S)).
pub fn cone_angle<T: Scalar>(n: usize, s_outer: T, omega_outer: T) -> Result<T> {
    check_dim(n)?;
    if s_outer < T::lit(ALPHA_MIN_S) {
        return Err(Error::InvalidInput(format!(
            "cone angle needs an outer radius s ≥ {ALPHA_MIN_S:e}, got {s_outer}"
        )));
    }
    let tail = |alpha: T| {
        let a = formal_coefficients(n, alpha, FORMAL_TERMS);
        // Horner in 1/S, skipping a_0
        a[1..].iter().rev().fold(T::zero(), |acc, &c| (acc + c) / s_outer)
    };
    let mut alpha = T::one() - omega_outer;
    for _ in 0..100 {
        let next = T::one() - omega_outer + tail(alpha);
        let done = (next - alpha).abs() <= T::epsilon() * T::lit(4.0) * next.abs().max(T::epsilon());
        alpha = next;
        if done {
            if alpha < T::zero() || alpha >= T::one() {
                return Err(Error::Domain(format!("cone angle {alpha} outside [0, 1)")));
            }
            return Ok(alpha);
        }
    }
    Err(Error::NonConvergence(format!("cone angle iteration at s = {s_outer}")))
}

/// Full soliton profile: warping function, potential and cone angle on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonProfile<T> {
    pub n: usize,
    pub b: T,
    pub alpha: T,
    pub tol: T,
    pub s: Vec<T>,
    pub omega: Vec<T>,
    pub omega_p: Vec<T>,
    pub f: Vec<T>,
    pub f_p: Vec<T>,
}

/// Attaches `f′` (closed form) and `f = 4sωf′² + R` (pointwise normalization).
pub fn potential<T: Scalar>(warp: &WarpProfile<T>, alpha: T) -> Result<SolitonProfile<T>> {
    let mut f = Vec::with_capacity(warp.s.len());
    let mut f_p = Vec::with_capacity(warp.s.len());
    for i in 0..warp.s.len() {
        let (s, w, wp) = (warp.s[i], warp.omega[i], warp.omega_p[i]);
        let fp = potential_derivative(warp.n, s, w, wp)?;
        let p = GeomPoint::new(warp.n, s, w, wp)?;
        f.push(warped::grad_norm_sq_f(&p, fp)? + warped::scalar_curvature(&p)?);
        f_p.push(fp);
    }
    Ok(SolitonProfile {
        n: warp.n,
        b: warp.b,
        alpha,
        tol: warp.tol,
        s: warp.s.clone(),
        omega: warp.omega.clone(),
        omega_p: warp.omega_p.clone(),
        f,
        f_p,
    })
}

impl<T: Scalar> SolitonProfile<T> {
    /// Integrates on a default log grid `[DEFAULT_S0, s_max]` with `nodes` nodes.
    pub fn construct(n: usize, b: T, s_max: T, nodes: usize, tol: T) -> Result<Self> {
        let grid = log_grid(T::lit(DEFAULT_S0), s_max, nodes)?;
        Self::on_grid(n, b, &grid, tol)
    }

    /// Integrates on an arbitrary grid. When the grid ends before
    /// `ALPHA_MIN_S` the cone angle comes from a separate run to `ALPHA_AUX_S`.
    pub fn on_grid(n: usize, b: T, grid: &[T], tol: T) -> Result<Self> {
        let warp = integrate(n, b, grid, tol)?;
        let last = grid.len() - 1;
        let alpha = if grid[last] >= T::lit(ALPHA_MIN_S) {
            cone_angle(n, grid[last], warp.omega[last])?
        } else {
            alpha_for(n, b, tol)?
        };
        potential(&warp, alpha)
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn s0(&self) -> T {
        self.s[0]
    }

    pub fn s_max(&self) -> T {
        self.s[self.s.len() - 1]
    }

    pub fn omega_pp(&self, i: usize) -> Result<T> {
        rhs(self.n, self.s[i], self.omega[i], self.omega_p[i])
    }

    /// Geometric data at node `i`, including ω″ from the master equation.
    pub fn point(&self, i: usize) -> Result<GeomPoint<T>> {
        Ok(GeomPoint::new(self.n, self.s[i], self.omega[i], self.omega_p[i])?.with_omega_pp(self.omega_pp(i)?))
    }

    /// Taylor jets at node `i`. Near the axis they come from the regular
    /// series (see [`NodeJets::from_axis_series`]), elsewhere from the node data.
    pub fn jets(&self, i: usize, len: usize) -> NodeJets<T> {
        if self.s[i] <= T::lit(AXIS_SERIES_S) {
            return self.jets_with(&self.axis_series(), i, len);
        }
        NodeJets::new(self.n, self.s[i], self.omega[i], self.omega_p[i], len)
    }

    /// Coefficients of the regular series at the axis for this `(n, b)`.
    pub fn axis_series(&self) -> Vec<T> {
        axis_series(self.n, self.b, AXIS_TERMS)
    }

    /// [`Self::jets`] with the axis series supplied by the caller, for loops
    /// over many nodes.
    pub fn jets_with(&self, series: &[T], i: usize, len: usize) -> NodeJets<T> {
        NodeJets::from_axis_series(self.n, series, self.s[i], len)
            .unwrap_or_else(|| NodeJets::new(self.n, self.s[i], self.omega[i], self.omega_p[i], len))
    }

    /// Largest gap between the stored `(ω, s ω′)` and the axis series on the
    /// nodes where the series is used for jets.
    pub fn axis_series_gap(&self) -> T {
        let series = self.axis_series();
        let mut worst = T::zero();
        for i in 0..self.len() {
            if let Some(j) = NodeJets::from_axis_series(self.n, &series, self.s[i], 2) {
                worst = worst
                    .max((j.omega.value() - self.omega[i]).abs())
                    .max(self.s[i] * (j.omega.d1() - self.omega_p[i]).abs());
            } else if self.s[i] > T::lit(AXIS_SERIES_S) {
                break;
            }
        }
        worst
    }

    pub fn scalar_curvature(&self, i: usize) -> Result<T> {
        warped::scalar_curvature(&self.point(i)?)
    }

    /// Index of the first node with `s ≥ s_lo` and one past the last with `s ≤ s_hi`.
    pub fn window(&self, s_lo: T, s_hi: T) -> (usize, usize) {
        let lo = self.s.partition_point(|&s| s < s_lo);
        let hi = self.s.partition_point(|&s| s <= s_hi);
        (lo, hi.max(lo))
    }
}

/// Cone angle for `(n, b)` from a coarse dedicated run to `ALPHA_AUX_S`.
pub fn alpha_for<T: Scalar>(n: usize, b: T, tol: T) -> Result<T> {
    let grid = [T::lit(DEFAULT_S0), T::lit(ALPHA_AUX_S)];
    let warp = integrate(n, b, &grid, tol)?;
    cone_angle(n, grid[1], warp.omega[1])
}

/// Outcome of the qualitative shape checks for a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualitativeReport {
    pub derivative_sign_constant: bool,
    pub below_one: bool,
    pub strictly_decreasing: bool,
    pub positive_infimum: bool,
    pub min_omega: f64,
    pub passed: bool,
}

/// Shape of ω for b < 0: ω′ keeps its sign, ω < 1, ω strictly decreases and
/// stays bounded away from zero. For b = 0 the profile must be identically flat.
pub fn qualitative_check<T: Scalar>(p: &SolitonProfile<T>) -> QualitativeReport {
    let min_omega = p.omega.iter().fold(T::infinity(), |m, &w| m.min(w));
    let (sign, below, decr) = if p.b == T::zero() {
        let flat_w = p.omega.iter().all(|&w| (w - T::one()).abs() <= p.tol);
        let flat_wp = p.omega_p.iter().all(|&wp| wp.abs() <= p.tol);
        (flat_wp, flat_w, flat_w)
    } else {
        (
            p.omega_p.iter().all(|&wp| wp < T::zero()),
            p.omega.iter().all(|&w| w < T::one()),
            p.omega.windows(2).all(|w| w[1] < w[0]),
        )
    };
    let positive = min_omega > T::lit(OMEGA_FLOOR);
    QualitativeReport {
        derivative_sign_constant: sign,
        below_one: below,
        strictly_decreasing: decr,
        positive_infimum: positive,
        min_omega: min_omega.to_f64_lossy(),
        passed: sign && below && decr && positive,
    }
}
