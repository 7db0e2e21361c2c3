//! Curvature and Hessian formulas for warped metrics `g = da²/ω(a²) + a² g_{S^{n-1}}`.
//!
//! Everything is expressed in the coordinate `s = a²` and in the orthonormal
//! frame `{√ω ∂_a, a⁻¹ ∂_θ}`: a diagonal rotationally symmetric (0,2)-tensor is
//! described by its radial component and the common tangential component.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

/// Pointwise data of the warping function at `s = a²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomPoint<T> {
    pub n: usize,
    pub s: T,
    pub omega: T,
    pub omega_p: T,
    /// Only needed by callers that differentiate curvature further.
    pub omega_pp: Option<T>,
}

impl<T: Scalar> GeomPoint<T> {
    pub fn new(n: usize, s: T, omega: T, omega_p: T) -> Result<Self> {
        let p = Self { n, s, omega, omega_p, omega_pp: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_omega_pp(mut self, omega_pp: T) -> Self {
        self.omega_pp = Some(omega_pp);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Domain(format!("dimension must be ≥ 3, got {}", self.n)));
        }
        if !(self.s > T::zero()) {
            return Err(Error::Domain(format!("s must be positive, got {}", self.s)));
        }
        if !(self.omega > T::zero()) {
            return Err(Error::Domain(format!("omega must be positive, got {}", self.omega)));
        }
        Ok(())
    }

    pub(crate) fn dims(&self) -> (T, T) {
        let n = T::from_usize_lossy(self.n);
        (n - T::one(), n - T::lit(2.0))
    }
}

/// Diagonal rotationally symmetric (0,2)-tensor in the orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameTensor2<T> {
    pub rad: T,
    pub tan: T,
}

impl<T: Scalar> FrameTensor2<T> {
    pub fn new(rad: T, tan: T) -> Self {
        Self { rad, tan }
    }

    /// The metric itself.
    pub fn identity() -> Self {
        Self { rad: T::one(), tan: T::one() }
    }

    pub fn trace(&self, n: usize) -> T {
        self.rad + T::from_usize_lossy(n - 1) * self.tan
    }

    /// Frame (Hilbert–Schmidt) norm.
    pub fn norm(&self, n: usize) -> T {
        (self.rad * self.rad + T::from_usize_lossy(n - 1) * self.tan * self.tan).sqrt()
    }

    pub fn scale(&self, k: T) -> Self {
        Self { rad: self.rad * k, tan: self.tan * k }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { rad: self.rad + other.rad, tan: self.tan + other.tan }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { rad: self.rad - other.rad, tan: self.tan - other.tan }
    }

    pub fn max_abs(&self) -> T {
        self.rad.abs().max(self.tan.abs())
    }
}

pub fn ricci_frame<T: Scalar>(p: &GeomPoint<T>) -> Result<FrameTensor2<T>> {
    p.validate()?;
    let (n1, n2) = p.dims();
    Ok(FrameTensor2 {
        rad: -n1 * p.omega_p,
        tan: (n2 * (T::one() - p.omega) - p.s * p.omega_p) / p.s,
    })
}

/// Radial and tangential sectional curvatures `(−ω′, (1−ω)/s)`.
pub fn sectional<T: Scalar>(p: &GeomPoint<T>) -> Result<(T, T)> {
    p.validate()?;
    Ok((-p.omega_p, (T::one() - p.omega) / p.s))
}

/// Hessian of a radial function `f(s)` given `f′(s)` and `f″(s)`.
pub fn hessian_f_frame<T: Scalar>(p: &GeomPoint<T>, fp: T, fpp: T) -> Result<FrameTensor2<T>> {
    p.validate()?;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    Ok(FrameTensor2 {
        rad: four * p.s * p.omega * fpp + two * fp * p.omega + two * fp * p.s * p.omega_p,
        tan: two * fp * p.omega,
    })
}

/// Laplace–Beltrami operator applied to a radial function `u(s)`.
pub fn laplacian_radial<T: Scalar>(p: &GeomPoint<T>, up: T, upp: T) -> Result<T> {
    p.validate()?;
    let n = T::from_usize_lossy(p.n);
    Ok(T::lit(4.0) * p.s * p.omega * upp + T::lit(2.0) * up * (n * p.omega + p.s * p.omega_p))
}

pub fn scalar_curvature<T: Scalar>(p: &GeomPoint<T>) -> Result<T> {
    p.validate()?;
    let (n1, n2) = p.dims();
    Ok(-T::lit(2.0) * n1 * p.omega_p + n1 * n2 * (T::one() - p.omega) / p.s)
}

/// `|∇f|² = 4 s ω f′²`.
pub fn grad_norm_sq_f<T: Scalar>(p: &GeomPoint<T>, fp: T) -> Result<T> {
    p.validate()?;
    Ok(T::lit(4.0) * p.s * p.omega * fp * fp)
}

/// `|∇u|` for a radial function, `2√(sω)|u′|`.
pub fn grad_norm_radial<T: Scalar>(p: &GeomPoint<T>, up: T) -> Result<T> {
    p.validate()?;
    Ok(T::lit(2.0) * (p.s * p.omega).sqrt() * up.abs())
}
