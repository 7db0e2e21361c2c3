use serde::{Deserialize, Serialize};

use super::alpha_for;
use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct ShootOptions<T> {
    /// Integrator tolerance for each trial run.
    pub tol: T,
    /// Bracket search stops past `b = −b_max`.
    pub b_max: T,
    /// First trial value of b in the bracket search.
    pub b_first: T,
    /// Hard cap on the number of ODE integrations.
    pub max_integrations: usize,
}

impl<T: Scalar> Default for ShootOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-10), b_max: T::lit(1e3), b_first: T::lit(-0.125), max_integrations: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootResult {
    pub b_star: f64,
    pub alpha_achieved: f64,
    /// Number of ODE integrations performed.
    pub iterations: usize,
    pub bracket: (f64, f64),
    /// `(b, α(b))` for every trial, in the order evaluated.
    pub scan: Vec<(f64, f64)>,
    /// Whether α decreased in b across the bracket-search samples.
    pub monotone: bool,
}

/// Finds `b ≤ 0` whose cone angle is within `tol_alpha` of `alpha_target`.
pub fn shoot<T: Scalar>(n: usize, alpha_target: T, tol_alpha: T, opts: &ShootOptions<T>) -> Result<ShootResult> {
    if !(alpha_target > T::zero() && alpha_target < T::one()) {
        return Err(Error::InvalidInput(format!("target cone angle must lie in (0, 1), got {alpha_target}")));
    }
    if !(tol_alpha > T::zero()) {
        return Err(Error::InvalidInput(format!("cone angle tolerance must be positive, got {tol_alpha}")));
    }
    let mut scan: Vec<(T, T)> = Vec::new();
    let eval = |b: T, scan: &mut Vec<(T, T)>| -> Result<T> {
        if scan.len() >= opts.max_integrations {
            return Err(Error::BracketFailure(format!("integration budget {} exhausted", opts.max_integrations)));
        }
        let a = if b == T::zero() { T::zero() } else { alpha_for(n, b, opts.tol)? };
        scan.push((b, a));
        Ok(a)
    };

    // b = 0 is the Gaussian, α = 0, so the upper end never needs an integration
    let (mut b_hi, mut a_hi) = (T::zero(), T::zero());
    let mut b_lo = opts.b_first;
    let mut a_lo = eval(b_lo, &mut scan)?;
    let mut monotone = a_lo > a_hi;
    while a_lo <= alpha_target {
        let next = b_lo * T::lit(2.0);
        if next < -opts.b_max {
            return Err(Error::BracketFailure(format!(
                "α stays ≤ {alpha_target} for b ∈ [{}, 0]",
                -opts.b_max
            )));
        }
        let a_next = eval(next, &mut scan)?;
        monotone &= a_next > a_lo;
        b_hi = b_lo;
        a_hi = a_lo;
        b_lo = next;
        a_lo = a_next;
    }

    if !monotone {
        // fall back to a uniform scan for an adjacent straddling pair
        let m = 32;
        let mut prev = (b_lo, a_lo);
        let mut found = None;
        for k in 1..=m {
            let b = b_lo * (T::one() - T::from_usize_lossy(k) / T::from_usize_lossy(m));
            let a = eval(b, &mut scan)?;
            if (prev.1 - alpha_target) * (a - alpha_target) <= T::zero() {
                found = Some((prev, (b, a)));
                break;
            }
            prev = (b, a);
        }
        let ((bl, al), (bh, ah)) =
            found.ok_or_else(|| Error::BracketFailure("fallback scan found no straddling pair".into()))?;
        b_lo = bl;
        a_lo = al;
        b_hi = bh;
        a_hi = ah;
    }

    // α(b_lo) and α(b_hi) sit on opposite sides of the target
    let lo_above = a_lo > alpha_target;
    while (a_lo - a_hi).abs() >= tol_alpha {
        let mid = (b_lo + b_hi) * T::lit(0.5);
        let a = eval(mid, &mut scan)?;
        if (a > alpha_target) == lo_above {
            b_lo = mid;
            a_lo = a;
        } else {
            b_hi = mid;
            a_hi = a;
        }
    }
    let (b_star, alpha_achieved) =
        if (a_lo - alpha_target).abs() <= (a_hi - alpha_target).abs() { (b_lo, a_lo) } else { (b_hi, a_hi) };

    Ok(ShootResult {
        b_star: b_star.to_f64_lossy(),
        alpha_achieved: alpha_achieved.to_f64_lossy(),
        iterations: scan.len(),
        bracket: (b_lo.to_f64_lossy(), b_hi.to_f64_lossy()),
        scan: scan.iter().map(|(b, a)| (b.to_f64_lossy(), a.to_f64_lossy())).collect(),
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_targets_outside_unit_interval() {
        let o = ShootOptions::<f64>::default();
        assert!(shoot(3, 0.0, 1e-3, &o).is_err());
        assert!(shoot(3, 1.0, 1e-3, &o).is_err());
    }

    #[test]
    fn small_target_gives_small_b() {
        let o = ShootOptions::<f64>::default();
        let r = shoot(3, 0.01, 1e-4, &o).unwrap();
        assert!(r.b_star < 0.0 && r.b_star > -0.01, "{r:?}");
        assert!((r.alpha_achieved - 0.01).abs() < 1e-4);
    }

    #[test]
    fn bracket_failure_when_budget_too_small() {
        let o = ShootOptions { b_max: 0.2, ..ShootOptions::<f64>::default() };
        assert!(matches!(shoot(3, 0.99, 1e-3, &o), Err(Error::BracketFailure(_))));
    }
}
