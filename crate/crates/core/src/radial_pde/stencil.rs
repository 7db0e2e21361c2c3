//! Three-point stencils in `x = ln s` on nonuniform grids, and the two banded
//! solvers used by the Dirichlet problems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

/// Weights `(w₋, w₀, w₊)` of the first and second derivative at an interior
/// node with left gap `hm` and right gap `hp`. Both are second order when the
/// gaps vary smoothly.
pub fn weights<T: Scalar>(hm: T, hp: T) -> ([T; 3], [T; 3]) {
    let two = T::lit(2.0);
    let sum = hm + hp;
    let d1 = [-hp / (hm * sum), (hp - hm) / (hm * hp), hm / (hp * sum)];
    let d2 = [two / (hm * sum), -two / (hm * hp), two / (hp * sum)];
    (d1, d2)
}

/// First and second derivative from three values, in difference form so that
/// constants are annihilated exactly.
pub fn derivatives<T: Scalar>(d1: &[T; 3], d2: &[T; 3], um: T, u0: T, up: T) -> (T, T) {
    let (dm, dp) = (um - u0, up - u0);
    (d1[0] * dm + d1[2] * dp, d2[0] * dm + d2[2] * dp)
}

/// Coefficients of `a₂ u_xx + a₁ u_x + a₀ u` for one unknown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentCoeffs<T> {
    pub second: Vec<T>,
    pub first: Vec<T>,
    pub zeroth: Vec<T>,
}

impl<T: Scalar> ComponentCoeffs<T> {
    pub fn with_len(len: usize) -> Self {
        Self { second: vec![T::zero(); len], first: vec![T::zero(); len], zeroth: vec![T::zero(); len] }
    }
}

/// A linear second-order operator in x for one unknown (radial vector fields)
/// or two coupled unknowns (diagonal tensors, coupled through zeroth order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorStencil<T> {
    pub s: Vec<T>,
    pub x: Vec<T>,
    pub components: Vec<ComponentCoeffs<T>>,
    /// `coupling[c][i]` multiplies the other unknown in the equation for `c`.
    pub coupling: Option<[Vec<T>; 2]>,
}

impl<T: Scalar> OperatorStencil<T> {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Gaps to the neighbours of interior node `i`.
    pub fn gaps(&self, i: usize) -> (T, T) {
        (self.x[i] - self.x[i - 1], self.x[i + 1] - self.x[i])
    }

    /// Applies the operator at interior nodes `1..len−1`; `fields` holds one
    /// slice per component on the full grid.
    pub fn apply(&self, fields: &[&[T]]) -> Result<Vec<Vec<T>>> {
        let m = self.len();
        if fields.len() != self.components.len() || fields.iter().any(|f| f.len() != m) {
            return Err(Error::InvalidInput(format!(
                "operator on {} nodes with {} components got fields of lengths {:?}",
                m,
                self.components.len(),
                fields.iter().map(|f| f.len()).collect::<Vec<_>>()
            )));
        }
        if m < 3 {
            return Err(Error::InvalidInput("stencil needs at least 3 nodes".into()));
        }
        let mut out = vec![Vec::with_capacity(m - 2); fields.len()];
        for i in 1..m - 1 {
            let (hm, hp) = self.gaps(i);
            let (d1, d2) = weights(hm, hp);
            for (c, co) in self.components.iter().enumerate() {
                let u = fields[c];
                let (ux, uxx) = derivatives(&d1, &d2, u[i - 1], u[i], u[i + 1]);
                let mut val = co.second[i] * uxx + co.first[i] * ux + co.zeroth[i] * u[i];
                if let Some(cp) = &self.coupling {
                    val = val + cp[c][i] * fields[1 - c][i];
                }
                out[c].push(val);
            }
        }
        Ok(out)
    }
}

/// Solves the tridiagonal system `lower[i] u[i−1] + diag[i] u[i] + upper[i] u[i+1] = rhs[i]`.
pub fn thomas<T: Scalar>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let m = diag.len();
    let mut c = vec![T::zero(); m];
    let mut d = vec![T::zero(); m];
    let mut denom = diag[0];
    for i in 0..m {
        if i > 0 {
            denom = diag[i] - lower[i] * c[i - 1];
        }
        if !(denom.abs() > T::epsilon() * diag[i].abs()) {
            return Err(Error::SolverSingular(format!("zero pivot at row {i}")));
        }
        c[i] = if i + 1 < m { upper[i] / denom } else { T::zero() };
        d[i] = (rhs[i] - if i > 0 { lower[i] * d[i - 1] } else { T::zero() }) / denom;
    }
    for i in (0..m.saturating_sub(1)).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    Ok(d)
}

/// Row-major 2×2 block.
pub type Block<T> = [[T; 2]; 2];

fn mul<T: Scalar>(a: &Block<T>, b: &Block<T>) -> Block<T> {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn mul_vec<T: Scalar>(a: &Block<T>, v: [T; 2]) -> [T; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

fn inverse<T: Scalar>(a: &Block<T>, row: usize) -> Result<Block<T>> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let scale = (a[0][0].abs() + a[0][1].abs()) * (a[1][0].abs() + a[1][1].abs());
    if !(det.abs() > T::epsilon() * scale) {
        return Err(Error::SolverSingular(format!("singular 2×2 pivot block at row {row}")));
    }
    Ok([[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]])
}

/// Block tridiagonal solve with 2×2 blocks.
pub fn block_thomas<T: Scalar>(
    lower: &[Block<T>],
    diag: &[Block<T>],
    upper: &[Block<T>],
    rhs: &[[T; 2]],
) -> Result<Vec<[T; 2]>> {
    let m = diag.len();
    let zero = [[T::zero(); 2]; 2];
    let mut c: Vec<Block<T>> = vec![zero; m];
    let mut d: Vec<[T; 2]> = vec![[T::zero(); 2]; m];
    for i in 0..m {
        let (piv, r) = if i == 0 {
            (diag[0], rhs[0])
        } else {
            let lc = mul(&lower[i], &c[i - 1]);
            let ld = mul_vec(&lower[i], d[i - 1]);
            (
                [[diag[i][0][0] - lc[0][0], diag[i][0][1] - lc[0][1]], [diag[i][1][0] - lc[1][0], diag[i][1][1] - lc[1][1]]],
                [rhs[i][0] - ld[0], rhs[i][1] - ld[1]],
            )
        };
        let inv = inverse(&piv, i)?;
        if i + 1 < m {
            c[i] = mul(&inv, &upper[i]);
        }
        d[i] = mul_vec(&inv, r);
    }
    for i in (0..m.saturating_sub(1)).rev() {
        let cd = mul_vec(&c[i], d[i + 1]);
        d[i] = [d[i][0] - cd[0], d[i][1] - cd[1]];
    }
    Ok(d)
}
