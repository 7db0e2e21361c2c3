//! Rotation generators on ambient `ℝⁿ`, cone metrics with perturbations in
//! Cartesian coordinates, Lie derivatives of metrics along rotations, and the
//! decay of the commutator bound `|∇R||U|/|X|` on rotationally symmetric
//! solitons.
//!
//! Metrics are stored as Cartesian component matrices on `ℝⁿ∖{0}`. In these
//! coordinates the Euclidean metric is `dr² + r²g_S`, so the cone
//! `dr² + (1−α)r²g_S` has components `x̂x̂ᵀ + (1−α)(I − x̂x̂ᵀ)`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{fit_decay, ConeChart, DecayFit};
use crate::error::{Error, Result};
use crate::identities::grad_r_samples;
use crate::ode::SolitonProfile;
use crate::Scalar;

/// Dense row-major `n×n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn outer(a: &[T], b: &[T]) -> Self {
        let n = a.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = a[i] * b[j];
            }
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| *a - *b).collect() }
    }

    pub fn scale(&self, k: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| *a * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    m[(i, j)] = m[(i, j)] + a * o[(k, j)];
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.n).map(|i| (0..self.n).fold(T::zero(), |acc, j| acc + self[(i, j)] * x[j])).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    /// Lower Cholesky factor, or `None` if the matrix is not positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d = d - l[(j, k)] * l[(j, k)];
            }
            if !(d > T::zero()) {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut v = self[(i, j)];
                for k in 0..j {
                    v = v - l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = v / d;
            }
        }
        Some(l)
    }

    /// `|h|_g = √tr(G⁻¹hG⁻¹h)` for symmetric `h`, with `self = G`.
    pub fn norm_in(&self, h: &Self) -> Result<T> {
        let l = self.cholesky().ok_or_else(|| Error::Domain("metric is not positive definite".into()))?;
        // M = L⁻¹ h L⁻ᵀ by forward substitution on columns, then on rows
        let n = self.n;
        let solve_lower = |b: &[T]| -> Vec<T> {
            let mut y = vec![T::zero(); n];
            for i in 0..n {
                let mut v = b[i];
                for k in 0..i {
                    v = v - l[(i, k)] * y[k];
                }
                y[i] = v / l[(i, i)];
            }
            y
        };
        let mut a = Self::zeros(n);
        for j in 0..n {
            let col: Vec<T> = (0..n).map(|i| h[(i, j)]).collect();
            let y = solve_lower(&col);
            for i in 0..n {
                a[(i, j)] = y[i];
            }
        }
        let mut sq = T::zero();
        for i in 0..n {
            let y = solve_lower(&(0..n).map(|j| a[(i, j)]).collect::<Vec<_>>());
            sq = y.iter().fold(sq, |acc, v| acc + *v * *v);
        }
        Ok(sq.sqrt())
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

fn norm<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt()
}

/// Tangential projector `I − x̂x̂ᵀ`, equal to `r⁻²·r²g_S` in Cartesian components.
pub fn tangential_projector<T: Scalar>(x: &[T]) -> Matrix<T> {
    let r = norm(x);
    let u: Vec<T> = x.iter().map(|v| *v / r).collect();
    Matrix::identity(x.len()).sub(&Matrix::outer(&u, &u))
}

/// The generator `U = x_j ∂_i − x_i ∂_j`, with zero-based `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationGenerator {
    pub n: usize,
    pub i: usize,
    pub j: usize,
}

impl RotationGenerator {
    pub fn new(n: usize, i: usize, j: usize) -> Result<Self> {
        if !(i < j && j < n) {
            return Err(Error::InvalidInput(format!("generator indices ({i}, {j}) invalid in dimension {n}")));
        }
        Ok(Self { n, i, j })
    }

    pub fn apply<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        let mut u = vec![T::zero(); self.n];
        u[self.i] = x[self.j];
        u[self.j] = -x[self.i];
        u
    }

    /// The flow map at time t, a rotation by angle t in the (i, j) plane.
    pub fn flow<T: Scalar>(&self, t: T) -> Matrix<T> {
        let (s, c) = t.sin_cos();
        let mut m = Matrix::identity(self.n);
        m[(self.i, self.i)] = c;
        m[(self.i, self.j)] = s;
        m[(self.j, self.i)] = -s;
        m[(self.j, self.j)] = c;
        m
    }

    /// One-based label `U_ij`.
    pub fn label(&self) -> String {
        format!("U_{}{}", self.i + 1, self.j + 1)
    }
}

/// The `n(n−1)/2` standard generators of `so(n)`.
pub fn generator_basis(n: usize) -> Result<Vec<RotationGenerator>> {
    if n < 3 {
        return Err(Error::InvalidInput("dimension must be ≥ 3".into()));
    }
    Ok((0..n).flat_map(|i| (i + 1..n).map(move |j| RotationGenerator { n, i, j })).collect())
}

/// `Σ_{i<j} U_ij(x) ⊗ U_ij(x)`.
pub fn sum_outer<T: Scalar>(n: usize, x: &[T]) -> Result<Matrix<T>> {
    if x.len() != n {
        return Err(Error::InvalidInput(format!("point of length {} in dimension {n}", x.len())));
    }
    if x.iter().all(|v| *v == T::zero()) {
        return Err(Error::InvalidInput("sum_outer needs x ≠ 0".into()));
    }
    let mut acc = Matrix::zeros(n);
    for g in generator_basis(n)? {
        let u = g.apply(x);
        acc = acc.add(&Matrix::outer(&u, &u));
    }
    Ok(acc)
}

pub type Perturbation<T> = Arc<dyn Fn(&[T]) -> Result<Matrix<T>> + Send + Sync>;

/// `g_α + k` on `ℝⁿ∖{0}` in Cartesian components.
#[derive(Clone)]
pub struct PerturbedConeMetric<T> {
    pub n: usize,
    pub alpha: T,
    pub k: Option<Perturbation<T>>,
    /// Exponents `(p₀, p₁)` with `|k| = O(r^{−p₀})`, `|∇k| = O(r^{−p₁})`, when known.
    pub budget: Option<(f64, f64)>,
}

impl<T: Scalar> fmt::Debug for PerturbedConeMetric<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerturbedConeMetric")
            .field("n", &self.n)
            .field("alpha", &self.alpha)
            .field("perturbed", &self.k.is_some())
            .field("budget", &self.budget)
            .finish()
    }
}

impl<T: Scalar> PerturbedConeMetric<T> {
    pub fn cone(n: usize, alpha: T) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput("dimension must be ≥ 3".into()));
        }
        if !(alpha >= T::zero() && alpha < T::one()) {
            return Err(Error::InvalidInput(format!("cone angle {alpha} outside [0, 1)")));
        }
        Ok(Self { n, alpha, k: None, budget: None })
    }

    pub fn with_perturbation(mut self, k: Perturbation<T>, budget: Option<(f64, f64)>) -> Self {
        self.k = Some(k);
        self.budget = budget;
        self
    }

    /// `k = c·r^{−p}(x̂₁² − x̂₂²)(I − x̂x̂ᵀ)`, a quadrupole in the first two
    /// coordinates with `|k| = O(r^{−p})` and `|∇k| = O(r^{−p−1})`.
    pub fn quadrupole(n: usize, alpha: T, amplitude: T, p: T) -> Result<Self> {
        let k: Perturbation<T> = Arc::new(move |x: &[T]| {
            let r = norm(x);
            let q = (x[0] * x[0] - x[1] * x[1]) / (r * r);
            Ok(tangential_projector(x).scale(amplitude * r.powf(-p) * q))
        });
        let p = p.to_f64_lossy();
        Ok(Self::cone(n, alpha)?.with_perturbation(k, Some((p, p + 1.0))))
    }

    /// The Bryant metric in its conical chart: `k = k_rr x̂x̂ᵀ + (1−α)k_tan(I − x̂x̂ᵀ)`
    /// with the chart's frame components interpolated linearly in `ln r`.
    pub fn from_chart(chart: &ConeChart<T>) -> Result<Self> {
        if chart.r.len() < 2 {
            return Err(Error::InvalidInput("cone chart has fewer than two nodes".into()));
        }
        let lr: Vec<T> = chart.r.iter().map(|r| r.ln()).collect();
        let (k_rr, k_tan) = (chart.k_rr.clone(), chart.k_tan.clone());
        let c0 = T::one() - chart.alpha;
        let k: Perturbation<T> = Arc::new(move |x: &[T]| {
            let r = norm(x);
            let l = r.ln();
            if l < lr[0] || l > lr[lr.len() - 1] {
                return Err(Error::InvalidInput(format!("radius {r} outside the chart")));
            }
            let i = lr.partition_point(|v| *v <= l).clamp(1, lr.len() - 1);
            let w = (l - lr[i - 1]) / (lr[i] - lr[i - 1]);
            let rr = k_rr[i - 1] + w * (k_rr[i] - k_rr[i - 1]);
            let tt = k_tan[i - 1] + w * (k_tan[i] - k_tan[i - 1]);
            let u: Vec<T> = x.iter().map(|v| *v / r).collect();
            let radial = Matrix::outer(&u, &u);
            Ok(radial.scale(rr).add(&tangential_projector(x).scale(c0 * tt)))
        });
        Ok(Self::cone(chart.n, chart.alpha)?.with_perturbation(k, None))
    }

    pub fn cone_at(&self, x: &[T]) -> Matrix<T> {
        let r = norm(x);
        let u: Vec<T> = x.iter().map(|v| *v / r).collect();
        let radial = Matrix::outer(&u, &u);
        radial.add(&tangential_projector(x).scale(T::one() - self.alpha))
    }

    pub fn metric_at(&self, x: &[T]) -> Result<Matrix<T>> {
        if x.len() != self.n || x.iter().all(|v| *v == T::zero()) {
            return Err(Error::InvalidInput("metric sampled at an invalid point".into()));
        }
        let g = self.cone_at(x);
        match &self.k {
            Some(k) => Ok(g.add(&k(x)?)),
            None => Ok(g),
        }
    }
}

/// Rotation angle of the finite-difference Lie derivative, `ε^{1/5}`, which
/// balances the fourth-order truncation against cancellation. The flow moves a
/// point at radius r by at most `angle·r`, so the spatial step scales with r.
pub fn lie_angle_step<T: Scalar>() -> T {
    T::epsilon().powf(T::lit(0.2))
}

/// `ℒ_U g` at x in Cartesian components, by a fourth-order central difference
/// of the pullback `R_tᵀ G(R_t x) R_t` along the exact rotation flow.
pub fn lie_derivative_at<T: Scalar>(
    metric: &PerturbedConeMetric<T>,
    u: &RotationGenerator,
    x: &[T],
    angle: T,
) -> Result<Matrix<T>> {
    if u.n != metric.n {
        return Err(Error::InvalidInput(format!("generator in dimension {} for metric in {}", u.n, metric.n)));
    }
    // below √ε the difference quotient keeps at most half the digits of G
    let floor = T::epsilon().sqrt();
    if !(angle >= floor && angle <= T::lit(0.1)) {
        return Err(Error::StepSize(format!("rotation step {angle} outside [{floor}, 0.1]")));
    }
    let pull = |t: T| -> Result<Matrix<T>> {
        let rot = u.flow(t);
        let g = metric.metric_at(&rot.apply(x))?;
        Ok(rot.transpose().mul(&g).mul(&rot))
    };
    let d1 = pull(angle)?.sub(&pull(-angle)?);
    let two = T::lit(2.0);
    let d2 = pull(two * angle)?.sub(&pull(-two * angle)?);
    Ok(d1.scale(T::lit(8.0)).sub(&d2).scale(T::one() / (T::lit(12.0) * angle)))
}

/// `|ℒ_U g|_g` at each sample point.
pub fn lie_derivative_metric<T: Scalar>(
    metric: &PerturbedConeMetric<T>,
    u: &RotationGenerator,
    points: &[Vec<T>],
) -> Result<Vec<T>> {
    let angle = lie_angle_step::<T>();
    points
        .iter()
        .map(|x| {
            let l = lie_derivative_at(metric, u, x, angle)?;
            metric.metric_at(x)?.norm_in(&l)
        })
        .collect()
}

/// Unit directions for angular sampling. In dimension 3 these come from a
/// regular two-angle chart with polar angle in `[0.3, π−0.3]`; otherwise they
/// are seeded pseudo-random points of the sphere.
pub fn sample_directions<T: Scalar>(n: usize, count: usize, seed: u64) -> Vec<Vec<T>> {
    if n == 3 {
        let rows = (count as f64).sqrt().ceil().max(1.0) as usize;
        let cols = count.div_ceil(rows);
        let mut out = Vec::with_capacity(count);
        'outer: for a in 0..rows {
            let theta = 0.3 + (std::f64::consts::PI - 0.6) * (a as f64 + 0.5) / rows as f64;
            for b in 0..cols {
                if out.len() == count {
                    break 'outer;
                }
                let phi = 2.0 * std::f64::consts::PI * (b as f64 + 0.25) / cols as f64;
                out.push(
                    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()].iter().map(|v| T::lit(*v)).collect(),
                );
            }
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (0.1..=1.0).contains(&r) {
            out.push(v.iter().map(|a| T::lit(a / r)).collect());
        }
    }
    out
}

/// Largest `|ℒ_U g|` over generators and directions at each radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KillingProfile {
    pub radii: Vec<f64>,
    pub sup: Vec<f64>,
    pub fit: Option<DecayFit>,
}

impl KillingProfile {
    pub fn max(&self) -> f64 {
        self.sup.iter().fold(0.0, |a, b| a.max(*b))
    }
}

pub fn killing_profile<T: Scalar>(
    metric: &PerturbedConeMetric<T>,
    radii: &[T],
    directions: &[Vec<T>],
    fit: bool,
) -> Result<KillingProfile> {
    let gens = generator_basis(metric.n)?;
    let mut sup = Vec::with_capacity(radii.len());
    for &r in radii {
        let points: Vec<Vec<T>> = directions.iter().map(|d| d.iter().map(|v| *v * r).collect()).collect();
        let mut m = T::zero();
        for g in &gens {
            for v in lie_derivative_metric(metric, g, &points)? {
                m = m.max(v);
            }
        }
        sup.push(m.to_f64_lossy());
    }
    let radii: Vec<f64> = radii.iter().map(|r| r.to_f64_lossy()).collect();
    let fit = if fit { Some(fit_decay(&radii, &sup)?) } else { None };
    Ok(KillingProfile { radii, sup, fit })
}

/// Outcome of the commutator check `[X, U] = −U(R)X/|X|²` on a rotationally
/// symmetric profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub generator: String,
    /// `sup |U(R)|/|X|` over the sampled points of the window.
    pub commutator_sup: f64,
    /// The bound `|∇R||U|/|X|` vanishes on the window.
    pub exact_zero: bool,
    pub fit: Option<DecayFit>,
    pub epsilon: f64,
    pub pass: bool,
}

/// Evaluates the commutator on sample points of each sphere in the s-window
/// and fits the decay of `|∇R||U|/|X|` in `r = 2√f`, with `|U| ≤ a = √s`.
pub fn commutator_bound<T: Scalar>(
    p: &SolitonProfile<T>,
    u: &RotationGenerator,
    window: (T, T),
    epsilon: f64,
) -> Result<CommutatorReport> {
    if u.n != p.n {
        return Err(Error::InvalidInput(format!("generator in dimension {} for a profile in {}", u.n, p.n)));
    }
    let (lo, hi) = p.window(window.0, window.1);
    let grad = grad_r_samples(p)?;
    let series = p.axis_series();
    let directions = sample_directions::<T>(p.n, 16, 7);
    let two = T::lit(2.0);
    let mut radius = Vec::with_capacity(hi - lo);
    let mut bound = Vec::with_capacity(hi - lo);
    let mut commutator = T::zero();
    for i in lo..hi {
        let s = p.s[i];
        let x_norm = two * (s * p.omega[i]).sqrt() * p.f_p[i];
        let r_prime = p.jets_with(&series, i, 3).r_curv.d1();
        for d in &directions {
            let x: Vec<T> = d.iter().map(|v| *v * s.sqrt()).collect();
            // U(R) = R′(s)·U(|x|²) = 2R′(s)⟨x, U(x)⟩
            let ux = u.apply(&x);
            let dot = x.iter().zip(&ux).fold(T::zero(), |acc, (a, b)| acc + *a * *b);
            commutator = commutator.max((two * r_prime * dot).abs() / x_norm);
        }
        radius.push(two * p.f[i].sqrt());
        bound.push(grad[i] * s.sqrt() / x_norm);
    }
    let exact_zero = bound.iter().all(|v| *v == T::zero());
    let fit = if exact_zero { None } else { Some(fit_decay(&radius, &bound)?) };
    let pass = exact_zero || fit.map(|f| f.exponent >= 2.0 * epsilon).unwrap_or(false);
    Ok(CommutatorReport {
        generator: u.label(),
        commutator_sup: commutator.to_f64_lossy(),
        exact_zero,
        fit,
        epsilon,
        pass,
    })
}
