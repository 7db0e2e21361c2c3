//! One-dimensional reductions of the drift Laplacian on radial vector fields
//! and of `Δ_L + ℒ_X − 1` on diagonal rotationally symmetric 2-tensors, with
//! Dirichlet solvers on sublevel sets `{f ≤ ρ²}`.
//!
//! Everything is written in `x = ln s`. With `A = 4ω/s` and
//! `B = (2(n−2)ω + 2sω′)/s + 4ωf′` the scalar drift Laplacian `Δu + D_X u` is
//! `A u_xx + B u_x`; the vector and tensor operators add zeroth-order terms
//! coming from the connection, the curvature action and `∇X`.

pub mod stencil;

use serde::{Deserialize, Serialize};

pub use stencil::{block_thomas, thomas, weights, Block, ComponentCoeffs, OperatorStencil};

use crate::error::{Error, Result};
use crate::ode::{log_grid, SolitonProfile};
use crate::warped::FrameTensor2;
use crate::Scalar;

/// Radial component `v` of `V = v e_r` at each grid node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialVectorField<T> {
    pub s: Vec<T>,
    pub v: Vec<T>,
}

/// Diagonal tensor `β e_r⊗e_r + γ (tangential identity)` per grid node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialTensor2<T> {
    pub s: Vec<T>,
    pub beta: Vec<T>,
    pub gamma: Vec<T>,
}

impl<T: Scalar> RadialVectorField<T> {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn sup_abs(&self) -> T {
        self.v.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

impl<T: Scalar> RadialTensor2<T> {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn frame(&self, i: usize) -> FrameTensor2<T> {
        FrameTensor2::new(self.beta[i], self.gamma[i])
    }

    /// Frame norm `√(β² + (n−1)γ²)` at node `i`.
    pub fn norm(&self, n: usize, i: usize) -> T {
        (self.beta[i] * self.beta[i] + T::from_usize_lossy(n - 1) * self.gamma[i] * self.gamma[i]).sqrt()
    }

    pub fn sup_norm(&self, n: usize) -> T {
        (0..self.len()).fold(T::zero(), |m, i| m.max(self.norm(n, i)))
    }
}

/// Metric and potential data entering the stencils, taken from the jets so
/// that nodes near the axis use the regular series.
#[derive(Debug, Clone, Copy)]
struct NodeCoeffs<T> {
    s: T,
    omega: T,
    omega_p: T,
    /// `(1 − ω)/s`
    v: T,
    f_p: T,
    hess: FrameTensor2<T>,
}

fn node_coeffs<T: Scalar>(p: &SolitonProfile<T>, series: &[T], i: usize) -> NodeCoeffs<T> {
    let j = p.jets_with(series, i, 3);
    let (s, omega, omega_p) = (p.s[i], j.omega.value(), j.omega.d1());
    let (f_p, f_pp) = (j.f_p.value(), j.f_p.d1());
    let two = T::lit(2.0);
    let hess = FrameTensor2::new(
        T::lit(4.0) * s * omega * f_pp + two * f_p * omega + two * f_p * s * omega_p,
        two * f_p * omega,
    );
    NodeCoeffs { s, omega, omega_p, v: j.v.value(), f_p, hess }
}

/// `(A, B)` of the scalar drift Laplacian at one node.
fn drift_laplacian<T: Scalar>(n: usize, c: &NodeCoeffs<T>) -> (T, T) {
    let two = T::lit(2.0);
    let n2 = T::from_usize_lossy(n) - two;
    let a = T::lit(4.0) * c.omega / c.s;
    let b = (two * n2 * c.omega + two * c.s * c.omega_p) / c.s + T::lit(4.0) * c.omega * c.f_p;
    (a, b)
}

/// `ω/s − ω′`: the combined weight of the connection and curvature terms that
/// couple β and γ.
fn coupling_weight<T: Scalar>(c: &NodeCoeffs<T>) -> T {
    c.omega / c.s - c.omega_p
}

fn grid_of<T: Scalar>(p: &SolitonProfile<T>, m: usize) -> (Vec<T>, Vec<T>) {
    let s = p.s[..m].to_vec();
    let x = s.iter().map(|v| v.ln()).collect();
    (s, x)
}

/// Stencil of `ΔV + D_X V − V/2` for `V = v e_r` on the first `m` nodes.
pub fn vec_stencil<T: Scalar>(p: &SolitonProfile<T>, m: usize) -> OperatorStencil<T> {
    let series = p.axis_series();
    let (s, x) = grid_of(p, m);
    let mut co = ComponentCoeffs::with_len(m);
    let n1 = T::from_usize_lossy(p.n - 1);
    for i in 0..m {
        let c = node_coeffs(p, &series, i);
        let (a, b) = drift_laplacian(p.n, &c);
        co.second[i] = a;
        co.first[i] = b;
        co.zeroth[i] = -n1 * c.omega / c.s - T::lit(0.5);
    }
    OperatorStencil { s, x, components: vec![co], coupling: None }
}

/// Stencil of `Δ_L h + ℒ_X h − h` for diagonal `h = (β, γ)` on the first `m` nodes.
pub fn lich_stencil<T: Scalar>(p: &SolitonProfile<T>, m: usize) -> OperatorStencil<T> {
    let series = p.axis_series();
    let (s, x) = grid_of(p, m);
    let mut rad = ComponentCoeffs::with_len(m);
    let mut tan = ComponentCoeffs::with_len(m);
    let mut c_bg = vec![T::zero(); m];
    let mut c_gb = vec![T::zero(); m];
    let two = T::lit(2.0);
    let n1 = T::from_usize_lossy(p.n - 1);
    for i in 0..m {
        let c = node_coeffs(p, &series, i);
        let (a, b) = drift_laplacian(p.n, &c);
        let k = coupling_weight(&c);
        rad.second[i] = a;
        rad.first[i] = b;
        rad.zeroth[i] = -two * n1 * k + two * c.hess.rad - T::one();
        tan.second[i] = a;
        tan.first[i] = b;
        tan.zeroth[i] = -two * k + two * c.hess.tan - T::one();
        c_bg[i] = two * n1 * k;
        c_gb[i] = two * k;
    }
    OperatorStencil { s, x, components: vec![rad, tan], coupling: Some([c_bg, c_gb]) }
}

/// Stencil of `ℒ_X h` alone, i.e. `D_X h + 2 D²f ∘ h` componentwise.
pub fn lie_x_stencil<T: Scalar>(p: &SolitonProfile<T>, m: usize) -> OperatorStencil<T> {
    let series = p.axis_series();
    let (s, x) = grid_of(p, m);
    let mut rad = ComponentCoeffs::with_len(m);
    let mut tan = ComponentCoeffs::with_len(m);
    let two = T::lit(2.0);
    for i in 0..m {
        let c = node_coeffs(p, &series, i);
        let drift = T::lit(4.0) * c.omega * c.f_p;
        rad.first[i] = drift;
        tan.first[i] = drift;
        rad.zeroth[i] = two * c.hess.rad;
        tan.zeroth[i] = two * c.hess.tan;
    }
    OperatorStencil { s, x, components: vec![rad, tan], coupling: None }
}

fn check_grid<T: Scalar>(p: &SolitonProfile<T>, s: &[T]) -> Result<()> {
    if s.len() < 3 || s.len() > p.len() || s.iter().zip(&p.s).any(|(a, b)| a != b) {
        return Err(Error::InvalidInput(format!(
            "field on {} nodes does not sit on a prefix of the profile grid ({} nodes)",
            s.len(),
            p.len()
        )));
    }
    Ok(())
}

/// `ΔV + D_X V − V/2` at the interior nodes of the field's grid.
pub fn vec_operator<T: Scalar>(p: &SolitonProfile<T>, field: &RadialVectorField<T>) -> Result<RadialVectorField<T>> {
    check_grid(p, &field.s)?;
    let st = vec_stencil(p, field.len());
    let mut out = st.apply(&[&field.v])?;
    Ok(RadialVectorField { s: field.s[1..field.len() - 1].to_vec(), v: out.remove(0) })
}

/// `Δ_L h + ℒ_X h − h` at the interior nodes of the field's grid.
pub fn lich_operator<T: Scalar>(p: &SolitonProfile<T>, h: &RadialTensor2<T>) -> Result<RadialTensor2<T>> {
    check_grid(p, &h.s)?;
    let st = lich_stencil(p, h.len());
    let mut out = st.apply(&[&h.beta, &h.gamma])?;
    let gamma = out.remove(1);
    Ok(RadialTensor2 { s: h.s[1..h.len() - 1].to_vec(), beta: out.remove(0), gamma })
}

/// `ℒ_X h` at the interior nodes of the field's grid.
pub fn lie_x_operator<T: Scalar>(p: &SolitonProfile<T>, h: &RadialTensor2<T>) -> Result<RadialTensor2<T>> {
    check_grid(p, &h.s)?;
    let st = lie_x_stencil(p, h.len());
    let mut out = st.apply(&[&h.beta, &h.gamma])?;
    let gamma = out.remove(1);
    Ok(RadialTensor2 { s: h.s[1..h.len() - 1].to_vec(), beta: out.remove(0), gamma })
}

/// `X = ∇f` as a radial field, `v = 2√(sω) f′`.
pub fn potential_field<T: Scalar>(p: &SolitonProfile<T>) -> RadialVectorField<T> {
    let series = p.axis_series();
    let v = (0..p.len())
        .map(|i| {
            let c = node_coeffs(p, &series, i);
            T::lit(2.0) * (c.s * c.omega).sqrt() * c.f_p
        })
        .collect();
    RadialVectorField { s: p.s.clone(), v }
}

/// Frame components of `2Ric + g`:
/// `β* = 1 − 2(n−1)ω′`, `γ* = 1 + 2[(n−2)(1−ω)/s − ω′]`.
pub fn soliton_tensor<T: Scalar>(p: &SolitonProfile<T>) -> RadialTensor2<T> {
    let series = p.axis_series();
    let two = T::lit(2.0);
    let n1 = T::from_usize_lossy(p.n - 1);
    let n2 = T::from_usize_lossy(p.n) - two;
    let (mut beta, mut gamma) = (Vec::with_capacity(p.len()), Vec::with_capacity(p.len()));
    for i in 0..p.len() {
        let c = node_coeffs(p, &series, i);
        beta.push(T::one() - two * n1 * c.omega_p);
        gamma.push(T::one() + two * (n2 * c.v - c.omega_p));
    }
    RadialTensor2 { s: p.s.clone(), beta, gamma }
}

/// Sup over interior nodes of `|ΔX + D_X X − X/2|`.
pub fn vec_kernel_residual<T: Scalar>(p: &SolitonProfile<T>) -> Result<T> {
    let r = vec_operator(p, &potential_field(p))?;
    Ok(r.sup_abs())
}

/// Sup over interior nodes of the frame norm of `Δ_L h + ℒ_X h − h` at `h = 2Ric + g`.
pub fn lich_kernel_residual<T: Scalar>(p: &SolitonProfile<T>) -> Result<T> {
    let r = lich_operator(p, &soliton_tensor(p))?;
    Ok(r.sup_norm(p.n))
}

/// Largest gap, over interior nodes and relative to the size of the stencil
/// products, between the trace of
/// `Δ_L h + ℒ_X h − h` at `h = 2Ric + g` and `(Δ + D_X)(tr h) + 2⟨D²f, h⟩ − tr h`
/// assembled with the same stencil.
pub fn trace_coherence<T: Scalar>(p: &SolitonProfile<T>) -> Result<T> {
    let series = p.axis_series();
    let h = soliton_tensor(p);
    let out = lich_operator(p, &h)?;
    let n1 = T::from_usize_lossy(p.n - 1);
    let tr: Vec<T> = (0..h.len()).map(|i| h.beta[i] + n1 * h.gamma[i]).collect();
    let st = lich_stencil(p, p.len());
    let mut worst = T::zero();
    for i in 1..p.len() - 1 {
        let (hm, hp) = st.gaps(i);
        let (d1, d2) = weights(hm, hp);
        let c = node_coeffs(p, &series, i);
        let (a, b) = drift_laplacian(p.n, &c);
        let (tx, txx) = stencil::derivatives(&d1, &d2, tr[i - 1], tr[i], tr[i + 1]);
        let contraction = T::lit(2.0) * (c.hess.rad * h.beta[i] + n1 * c.hess.tan * h.gamma[i]);
        let scalar = a * txx + b * tx + contraction - tr[i];
        let traced = out.beta[i - 1] + n1 * out.gamma[i - 1];
        // size of the largest products formed by the stencil
        let stencil = a.abs() * (d2[0].abs() + d2[2].abs()) + b.abs() * (d1[0].abs() + d1[2].abs());
        let scale = stencil * tr[i].abs() + contraction.abs() + tr[i].abs();
        worst = worst.max((traced - scalar).abs() / scale.max(T::one()));
    }
    Ok(worst)
}

/// `1/(1/2 − ε²)`, the constant in the barrier bound `|V| ≤ B (f + n/2)^{−ε}`
/// for `|Q| ≤ (f + n/2)^{−ε}`.
pub fn barrier_constant<T: Scalar>(eps: T) -> Result<T> {
    let gap = T::lit(0.5) - eps * eps;
    if !(eps > T::zero() && gap > T::zero()) {
        return Err(Error::InvalidInput(format!("ε must lie in (0, 1/√2), got {eps}")));
    }
    Ok(T::one() / gap)
}

/// `(f + n/2)^{−ε}` at every node.
pub fn barrier_function<T: Scalar>(p: &SolitonProfile<T>, eps: T) -> Vec<T> {
    let half_n = T::from_usize_lossy(p.n) / T::lit(2.0);
    p.f.iter().map(|&f| (f + half_n).powf(-eps)).collect()
}

/// Index of the outer boundary node: the last node with `f ≤ ρ²`.
pub fn boundary_index<T: Scalar>(p: &SolitonProfile<T>, rho: T) -> Result<usize> {
    let r2 = rho * rho;
    let last = p.len() - 1;
    if !(rho > T::zero()) || r2 > p.f[last] {
        return Err(Error::InvalidInput(format!("ρ² = {r2} lies outside the grid (f ≤ {})", p.f[last])));
    }
    let m = p.f.partition_point(|&f| f <= r2);
    if m < 3 {
        return Err(Error::InvalidInput(format!("ρ² = {r2} leaves fewer than 3 nodes inside {{f ≤ ρ²}}")));
    }
    Ok(m - 1)
}

/// Solves `ΔV + D_X V − V/2 = Q` on `{f ≤ ρ²}` with `V = 0` on the boundary
/// node and `v_x = v/2` at the inner node (`v/|X|` bounded at the axis).
pub fn dirichlet_vec_solve<T: Scalar>(
    p: &SolitonProfile<T>,
    q: &RadialVectorField<T>,
    rho: T,
) -> Result<RadialVectorField<T>> {
    let m = boundary_index(p, rho)?;
    if q.len() < m + 1 || q.s[..=m] != p.s[..=m] {
        return Err(Error::InvalidInput("right-hand side does not cover {f ≤ ρ²} on the profile grid".into()));
    }
    let st = vec_stencil(p, m + 1);
    let co = &st.components[0];
    let (mut lower, mut diag, mut upper) = (vec![T::zero(); m], vec![T::zero(); m], vec![T::zero(); m]);
    let two = T::lit(2.0);
    for i in 0..m {
        let (a, b, c) = (co.second[i], co.first[i], co.zeroth[i]);
        if i == 0 {
            // ghost node v₋₁ = v₁ − h v₀ from the Robin condition
            let h = st.x[1] - st.x[0];
            diag[0] = -a * (two + h) / (h * h) + b / two + c;
            upper[0] = two * a / (h * h);
        } else {
            let (hm, hp) = st.gaps(i);
            let (d1, d2) = weights(hm, hp);
            lower[i] = a * d2[0] + b * d1[0];
            diag[i] = a * d2[1] + b * d1[1] + c;
            upper[i] = a * d2[2] + b * d1[2];
        }
        let off = lower[i] + upper[i];
        if lower[i] < T::zero() || upper[i] < T::zero() || !(diag[i] < T::zero()) || -diag[i] <= off {
            return Err(Error::SolverSingular(format!(
                "vector operator loses diagonal dominance at s = {} (refine the grid there)",
                st.s[i]
            )));
        }
    }
    upper[m - 1] = T::zero();
    let mut v = thomas(&lower, &diag, &upper, &q.v[..m])?;
    v.push(T::zero());
    Ok(RadialVectorField { s: st.s, v })
}

/// Solution of the tensor Dirichlet problem with the comparison data against
/// the barrier `2Ric + g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LichSolution<T> {
    pub h: RadialTensor2<T>,
    /// `max(|β_b|/β*, |γ_b|/γ*)` at the boundary node.
    pub theta: T,
    /// The same ratio maximized over the interior nodes.
    pub interior_ratio: T,
    /// Sup of the frame norm of h over the domain.
    pub sup_norm: T,
    /// Sup of the frame norm of `2Ric + g` over the domain.
    pub barrier_norm: T,
}

impl<T: Scalar> LichSolution<T> {
    /// `|h| ≤ θ (2Ric + g)` componentwise at every interior node, up to a
    /// relative `slack`.
    pub fn comparison_holds(&self, slack: T) -> bool {
        self.interior_ratio <= self.theta * (T::one() + slack)
    }
}

/// Axis conditions `(β_x, γ_x) = P (β, γ)` at the inner node `s₀`.
///
/// Regular solutions have `U = β + (n−1)γ` smooth in s and `D = β − γ = O(s)`.
/// Expanding the equation for U one order past the axis gives
/// `U_x = −s₀ R U / n²`, and D behaves like s to the same accuracy, `D_x = D`.
fn tensor_axis_matrix<T: Scalar>(n: usize, s0: T, r_curv: T) -> Block<T> {
    let nn = T::from_usize_lossy(n);
    let n1 = nn - T::one();
    let sigma = s0 * r_curv / (nn * nn);
    [
        [(n1 - sigma) / nn, -n1 * (T::one() + sigma) / nn],
        [-(T::one() + sigma) / nn, (T::one() - n1 * sigma) / nn],
    ]
}

/// Solves `Δ_L h + ℒ_X h − h = 0` on `{f ≤ ρ²}` with `h = (β_b, γ_b)` on the
/// boundary node and the regularity conditions of [`tensor_axis_matrix`] at
/// the inner node.
pub fn lich_dirichlet_solve<T: Scalar>(p: &SolitonProfile<T>, boundary: (T, T), rho: T) -> Result<LichSolution<T>> {
    let m = boundary_index(p, rho)?;
    let st = lich_stencil(p, m + 1);
    let [rad, tan] = [&st.components[0], &st.components[1]];
    let coupling = st.coupling.as_ref().expect("tensor stencil is coupled");
    let zero = [[T::zero(); 2]; 2];
    let (mut lower, mut diag, mut upper) = (vec![zero; m], vec![zero; m], vec![zero; m]);
    let mut rhs = vec![[T::zero(); 2]; m];
    let two = T::lit(2.0);
    for i in 0..m {
        let a = rad.second[i];
        let b = rad.first[i];
        if i == 0 {
            let h = st.x[1] - st.x[0];
            // ghost values u₋₁ = u₁ − 2h u_x turn u_x into a zeroth-order term
            let g = -two * a / h + b;
            let ww = -two * a / (h * h);
            let pm = tensor_axis_matrix(p.n, st.s[0], p.jets(0, 2).r_curv.value());
            diag[0] = [
                [ww + g * pm[0][0] + rad.zeroth[0], g * pm[0][1] + coupling[0][0]],
                [g * pm[1][0] + coupling[1][0], ww + g * pm[1][1] + tan.zeroth[0]],
            ];
            upper[0] = [[two * a / (h * h), T::zero()], [T::zero(), two * a / (h * h)]];
        } else {
            let (hm, hp) = st.gaps(i);
            let (d1, d2) = weights(hm, hp);
            let lo = a * d2[0] + b * d1[0];
            let mid = a * d2[1] + b * d1[1];
            let up = a * d2[2] + b * d1[2];
            lower[i] = [[lo, T::zero()], [T::zero(), lo]];
            diag[i] = [[mid + rad.zeroth[i], coupling[0][i]], [coupling[1][i], mid + tan.zeroth[i]]];
            upper[i] = [[up, T::zero()], [T::zero(), up]];
        }
        let monotone = lower[i][0][0] >= T::zero()
            && upper[i][0][0] >= T::zero()
            && diag[i][0][1] >= T::zero()
            && diag[i][1][0] >= T::zero();
        if !monotone {
            return Err(Error::SolverSingular(format!(
                "tensor operator loses monotonicity at s = {} (refine the grid there)",
                st.s[i]
            )));
        }
    }
    let up = upper[m - 1];
    rhs[m - 1] = [-up[0][0] * boundary.0, -up[1][1] * boundary.1];
    upper[m - 1] = zero;
    let sol = block_thomas(&lower, &diag, &upper, &rhs)?;

    let mut beta: Vec<T> = sol.iter().map(|u| u[0]).collect();
    let mut gamma: Vec<T> = sol.iter().map(|u| u[1]).collect();
    beta.push(boundary.0);
    gamma.push(boundary.1);
    let h = RadialTensor2 { s: st.s.clone(), beta, gamma };

    let kernel = soliton_tensor(p);
    let ratio = |i: usize| (h.beta[i] / kernel.beta[i]).abs().max((h.gamma[i] / kernel.gamma[i]).abs());
    let theta = ratio(m);
    let interior_ratio = (0..m).fold(T::zero(), |acc, i| acc.max(ratio(i)));
    let barrier_norm = (0..=m).fold(T::zero(), |acc, i| acc.max(kernel.norm(p.n, i)));
    let sup_norm = h.sup_norm(p.n);
    Ok(LichSolution { h, theta, interior_ratio, sup_norm, barrier_norm })
}

/// `sup(|v| − B (f + n/2)^{−ε})` over the nodes of a solution.
pub fn barrier_excess<T: Scalar>(p: &SolitonProfile<T>, sol: &RadialVectorField<T>, eps: T) -> Result<T> {
    let b = barrier_constant(eps)?;
    let u = barrier_function(p, eps);
    Ok((0..sol.len()).fold(T::neg_infinity(), |acc, i| acc.max(sol.v[i].abs() - b * u[i])))
}

/// Pointwise `ΔR + D_X R + 2|Ric|² + R` from the jets at node `i`.
pub fn scalar_curvature_residual_at<T: Scalar>(p: &SolitonProfile<T>, series: &[T], i: usize) -> T {
    let j = p.jets_with(series, i, 5);
    let (s, w, wp) = (p.s[i], j.omega.value(), j.omega.d1());
    let nn = T::from_usize_lossy(p.n);
    let n1 = T::from_usize_lossy(p.n - 1);
    let n2 = nn - T::lit(2.0);
    let (r, rp, rpp) = (j.r_curv.value(), j.r_curv.d1(), j.r_curv.d2());
    let four = T::lit(4.0);
    let lap = four * s * w * rpp + T::lit(2.0) * rp * (nn * w + s * wp);
    let drift = four * s * w * j.f_p.value() * rp;
    let ric_rad = -n1 * wp;
    let ric_tan = n2 * j.v.value() - wp;
    let ric2 = ric_rad * ric_rad + n1 * ric_tan * ric_tan;
    lap + drift + T::lit(2.0) * ric2 + r
}

/// The trace identity for `2Ric + g`, `ΔR + D_X R + 2|Ric|² + R = 0`, over the grid.
pub fn scalar_curvature_identity<T: Scalar>(p: &SolitonProfile<T>) -> crate::identities::IdentityReport {
    let mut rep = crate::identities::IdentityReport::new("Lap R + D_X R + 2|Ric|^2 + R = 0", p.len());
    let series = p.axis_series();
    let worst = (0..p.len()).fold(T::zero(), |m, i| m.max(scalar_curvature_residual_at(p, &series, i).abs()));
    rep.push("sup residual", worst.to_f64_lossy());
    rep.sup_residual = worst.to_f64_lossy();
    rep
}

/// Kernel residuals on three nested log grids (each halving the mesh width).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub name: String,
    pub nodes: Vec<usize>,
    pub sup_residuals: Vec<f64>,
    /// `log2` of successive residual ratios.
    pub orders: Vec<f64>,
}

/// Measures how the vector and tensor kernel residuals fall under mesh halving
/// on `[s_lo, s_hi]`, starting from `coarse_nodes` nodes.
pub fn kernel_convergence<T: Scalar>(
    n: usize,
    b: T,
    window: (T, T),
    coarse_nodes: usize,
    tol: T,
) -> Result<(ConvergenceStudy, ConvergenceStudy)> {
    let mut vec_study = ConvergenceStudy {
        name: "Lap X + D_X X - X/2 = 0".into(),
        nodes: Vec::new(),
        sup_residuals: Vec::new(),
        orders: Vec::new(),
    };
    let mut lich_study = ConvergenceStudy { name: "Lich(2Ric + g) = 0".into(), ..vec_study.clone() };
    for k in 0..3 {
        let nodes = (coarse_nodes - 1) * (1 << k) + 1;
        let grid = log_grid(window.0, window.1, nodes)?;
        let p = SolitonProfile::on_grid(n, b, &grid, tol)?;
        for (study, r) in
            [(&mut vec_study, vec_kernel_residual(&p)?), (&mut lich_study, lich_kernel_residual(&p)?)]
        {
            study.nodes.push(nodes);
            study.sup_residuals.push(r.to_f64_lossy());
        }
    }
    for study in [&mut vec_study, &mut lich_study] {
        study.orders = study.sup_residuals.windows(2).map(|w| crate::identities::observed_order(w[0], w[1])).collect();
    }
    Ok((vec_study, lich_study))
}

/// Solutions on nested sublevel sets restricted to a fixed compact set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedStudy {
    pub rho: Vec<f64>,
    /// Sup norm of each solution over the nodes with `s ≤ s_compact`.
    pub sup_compact: Vec<f64>,
    /// Sup distance on the compact set between consecutive solutions.
    pub gaps: Vec<f64>,
}

fn compact_nodes<T: Scalar>(p: &SolitonProfile<T>, s_compact: T) -> usize {
    p.s.partition_point(|&s| s <= s_compact)
}

/// Vector solves with the same right-hand side on `{f ≤ ρ²}` for each `ρ`.
pub fn nested_vec_study<T: Scalar>(
    p: &SolitonProfile<T>,
    q: &RadialVectorField<T>,
    rhos: &[T],
    s_compact: T,
) -> Result<NestedStudy> {
    let k = compact_nodes(p, s_compact);
    let sols: Vec<RadialVectorField<T>> = rhos.iter().map(|&r| dirichlet_vec_solve(p, q, r)).collect::<Result<_>>()?;
    if sols.iter().any(|s| s.len() < k) {
        return Err(Error::InvalidInput("compact set is not contained in every domain".into()));
    }
    let sup_compact = sols.iter().map(|s| s.v[..k].iter().fold(T::zero(), |m, v| m.max(v.abs())).to_f64_lossy()).collect();
    let gaps = sols
        .windows(2)
        .map(|w| (0..k).fold(T::zero(), |m, i| m.max((w[0].v[i] - w[1].v[i]).abs())).to_f64_lossy())
        .collect();
    Ok(NestedStudy { rho: rhos.iter().map(|r| r.to_f64_lossy()).collect(), sup_compact, gaps })
}

/// Tensor solves with boundary data `boundary(ρ)` on `{f ≤ ρ²}` for each `ρ`.
pub fn nested_lich_study<T: Scalar>(
    p: &SolitonProfile<T>,
    boundary: impl Fn(T) -> (T, T),
    rhos: &[T],
    s_compact: T,
) -> Result<NestedStudy> {
    let k = compact_nodes(p, s_compact);
    let sols: Vec<LichSolution<T>> =
        rhos.iter().map(|&r| lich_dirichlet_solve(p, boundary(r), r)).collect::<Result<_>>()?;
    if sols.iter().any(|s| s.h.len() < k) {
        return Err(Error::InvalidInput("compact set is not contained in every domain".into()));
    }
    let sup_compact = sols.iter().map(|s| (0..k).fold(T::zero(), |m, i| m.max(s.h.norm(p.n, i))).to_f64_lossy()).collect();
    let gaps = sols
        .windows(2)
        .map(|w| {
            (0..k)
                .fold(T::zero(), |m, i| {
                    let db = w[0].h.beta[i] - w[1].h.beta[i];
                    let dg = w[0].h.gamma[i] - w[1].h.gamma[i];
                    m.max((db * db + T::from_usize_lossy(p.n - 1) * dg * dg).sqrt())
                })
                .to_f64_lossy()
        })
        .collect();
    Ok(NestedStudy { rho: rhos.iter().map(|r| r.to_f64_lossy()).collect(), sup_compact, gaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped;
    use approx::assert_relative_eq;

    fn profile(n: usize, b: f64, s0: f64, s1: f64, nodes: usize) -> SolitonProfile<f64> {
        SolitonProfile::on_grid(n, b, &log_grid(s0, s1, nodes).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn gaussian_potential_field_is_in_the_kernel() {
        let coarse = profile(3, 0.0, 1e-2, 1e2, 401);
        let fine = profile(3, 0.0, 1e-2, 1e2, 801);
        let x = potential_field(&coarse);
        // flat space: |X| = r/2 = √s/2
        for (s, v) in x.s.iter().zip(&x.v) {
            assert_relative_eq!(*v, s.sqrt() / 2.0, max_relative = 1e-14);
        }
        let e1 = vec_kernel_residual(&coarse).unwrap();
        let e2 = vec_kernel_residual(&fine).unwrap();
        assert!((crate::identities::observed_order(e1, e2) - 2.0).abs() < 0.1, "{e1} {e2}");
        let zero = RadialVectorField { s: coarse.s.clone(), v: vec![0.0; coarse.len()] };
        assert_eq!(vec_operator(&coarse, &zero).unwrap().sup_abs(), 0.0);
    }

    #[test]
    fn metric_maps_to_twice_ricci() {
        let p = profile(3, -1.0, 1e-4, 1e3, 1201);
        let g = RadialTensor2 { s: p.s.clone(), beta: vec![1.0; p.len()], gamma: vec![1.0; p.len()] };
        let out = lich_operator(&p, &g).unwrap();
        let lie = lie_x_operator(&p, &g).unwrap();
        for i in (1..p.len() - 1).step_by(50) {
            let ric = warped::ricci_frame(&p.point(i).unwrap()).unwrap();
            let scale = 1.0 + 2.0 / p.s[i];
            assert!((out.beta[i - 1] - 2.0 * ric.rad).abs() <= 1e-12 * scale);
            assert!((out.gamma[i - 1] - 2.0 * ric.tan).abs() <= 1e-12 * scale);
            let j = p.jets(i, 3);
            let hess = warped::hessian_f_frame(&p.point(i).unwrap(), j.f_p.value(), j.f_p.d1()).unwrap();
            assert_relative_eq!(lie.beta[i - 1], 2.0 * hess.rad, epsilon = 1e-10);
            assert_relative_eq!(lie.gamma[i - 1], 2.0 * hess.tan, epsilon = 1e-10);
        }
    }

    #[test]
    fn trace_of_tensor_operator_is_the_scalar_identity() {
        let p = profile(4, -0.25, 1e-4, 1e3, 801);
        assert!(trace_coherence(&p).unwrap() <= 1e-12);
    }

    #[test]
    fn scalar_curvature_identity_holds() {
        let g = profile(3, 0.0, 1e-6, 1e4, 512);
        assert_eq!(scalar_curvature_identity(&g).sup_residual, 0.0);
        let p = SolitonProfile::construct(3, -1.0, 1e6, 2048, 1e-10).unwrap();
        assert!(scalar_curvature_identity(&p).sup_residual <= 1e-7);
    }

    #[test]
    fn homogeneous_problems_have_zero_solutions() {
        let p = profile(3, -1.0, 1e-4, 1e3, 4001);
        let zero = RadialVectorField { s: p.s.clone(), v: vec![0.0; p.len()] };
        assert!(dirichlet_vec_solve(&p, &zero, 10.0).unwrap().sup_abs() <= 1e-10);
        assert!(lich_dirichlet_solve(&p, (0.0, 0.0), 10.0).unwrap().sup_norm <= 1e-10);
    }

    #[test]
    fn kernel_multiple_is_reproduced() {
        let p = profile(3, -1.0, 1e-4, 1e3, 8001);
        let ker = soliton_tensor(&p);
        let m = boundary_index(&p, 10.0).unwrap();
        let delta = 1e-3;
        let sol = lich_dirichlet_solve(&p, (delta * ker.beta[m], delta * ker.gamma[m]), 10.0).unwrap();
        for i in 0..=m {
            assert!((sol.h.beta[i] - delta * ker.beta[i]).abs() <= 1e-8);
            assert!((sol.h.gamma[i] - delta * ker.gamma[i]).abs() <= 1e-8);
        }
        assert_relative_eq!(sol.theta, delta, max_relative = 1e-12);
        assert!(sol.comparison_holds(1e-6));
    }

    #[test]
    fn forced_solution_sits_under_the_barrier() {
        let p = profile(4, -0.25, 1e-4, 1e3, 4001);
        let q = RadialVectorField { s: p.s.clone(), v: barrier_function(&p, 0.4) };
        let sol = dirichlet_vec_solve(&p, &q, 12.0).unwrap();
        assert!(barrier_excess(&p, &sol, 0.4).unwrap() <= 0.0);
        assert_relative_eq!(barrier_constant(0.4).unwrap(), 1.0 / 0.34, max_relative = 1e-14);
        assert!(barrier_constant(0.75).is_err());
    }

    #[test]
    fn coarse_grid_loses_dominance() {
        let p = profile(3, -1.0, 1e-4, 1e3, 200);
        let zero = RadialVectorField { s: p.s.clone(), v: vec![0.0; p.len()] };
        assert!(matches!(dirichlet_vec_solve(&p, &zero, 30.0), Err(Error::SolverSingular(_))));
        assert!(matches!(lich_dirichlet_solve(&p, (1.0, 1.0), 30.0), Err(Error::SolverSingular(_))));
    }

    #[test]
    fn boundary_outside_grid_is_rejected() {
        let p = profile(3, -1.0, 1e-4, 10.0, 200);
        assert!(boundary_index(&p, 1e3).is_err());
        assert!(boundary_index(&p, -1.0).is_err());
        assert!(boundary_index(&p, 1e-3).is_err());
    }

    #[test]
    fn operators_are_linear() {
        let p = profile(3, -1.0, 1e-3, 1e2, 300);
        let u: Vec<f64> = p.s.iter().map(|s| (1.0 + s).ln()).collect();
        let w: Vec<f64> = p.s.iter().map(|s| s.sqrt().sin()).collect();
        let mix: Vec<f64> = u.iter().zip(&w).map(|(a, b)| 2.5 * a - 0.75 * b).collect();
        let apply = |v: &[f64]| vec_operator(&p, &RadialVectorField { s: p.s.clone(), v: v.to_vec() }).unwrap().v;
        let (lu, lw, lm) = (apply(&u), apply(&w), apply(&mix));
        // roundoff enters through the stencil weights, which scale like 4ω/(s h²)
        let h = p.s[1].ln() - p.s[0].ln();
        for i in 0..lm.len() {
            let scale = 8.0 / (p.s[i + 1] * h * h);
            assert!((lm[i] - (2.5 * lu[i] - 0.75 * lw[i])).abs() <= 1e-14 * scale, "{i}");
        }
    }
}
