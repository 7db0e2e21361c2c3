//! Dormand–Prince 5(4) with PI step-size control and exact landing on output nodes.

use crate::error::{Error, Result};
use crate::Scalar;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// error coefficients: 5th order weights minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5<T> {
    pub rtol: T,
    /// Per-component absolute floor of the error scale.
    pub atol: T,
    /// Smallest admissible step before `StepFailure`.
    pub h_min: T,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl<T: Scalar> Dopri5<T> {
    pub fn new(tol: T) -> Self {
        Self { rtol: tol, atol: tol * T::lit(1e-12), h_min: T::lit(1e-14), max_steps: 50_000_000 }
    }

    /// Integrates `y' = rhs(x, y)` from `x0` through every node in `nodes`
    /// (strictly increasing, all ≥ `x0`), calling `on_node(k, x, y)` exactly
    /// at each node.
    pub fn solve<const D: usize, F, G>(
        &self,
        mut rhs: F,
        x0: T,
        y0: [T; D],
        nodes: &[T],
        mut on_node: G,
    ) -> Result<StepStats>
    where
        F: FnMut(T, &[T; D]) -> Result<[T; D]>,
        G: FnMut(usize, T, &[T; D]),
    {
        let mut stats = StepStats::default();
        let mut x = x0;
        let mut y = y0;
        let mut k1 = rhs(x, &y)?;
        stats.evaluations += 1;

        let mut next = 0;
        while next < nodes.len() && nodes[next] <= x {
            on_node(next, x, &y);
            next += 1;
        }
        if next == nodes.len() {
            return Ok(stats);
        }

        let span = nodes[nodes.len() - 1] - x0;
        let mut h = self.initial_step(&y, &k1, span);
        let beta = T::lit(0.04);
        let expo1 = T::lit(0.2) - beta * T::lit(0.75);
        let safe = T::lit(0.9);
        let fac_max = T::lit(10.0);
        let fac_min = T::lit(0.2);
        let mut facold = T::lit(1e-4);
        let mut last_rejected = false;

        while next < nodes.len() {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::StepFailure { s: x.exp().to_f64_lossy(), h: h.to_f64_lossy() });
            }
            let target = nodes[next];
            let clipped = x + h >= target;
            let h_try = if clipped { target - x } else { h };
            if clipped && h_try <= self.h_min {
                // the node is within rounding of the current point
                x = target;
                on_node(next, x, &y);
                next += 1;
                continue;
            }
            if h_try < self.h_min {
                return Err(Error::StepFailure { s: x.exp().to_f64_lossy(), h: h_try.to_f64_lossy() });
            }

            let (y_new, k7, err) = self.step(&mut rhs, x, &y, &k1, h_try)?;
            stats.evaluations += 6;
            let err = err.max(T::lit(1e-30));

            if err <= T::one() {
                stats.accepted += 1;
                let fac11 = err.powf(expo1);
                let mut fac = fac11 / facold.powf(beta);
                fac = (fac / safe).max(T::one() / fac_max).min(T::one() / fac_min);
                let mut h_new = h_try / fac;
                if last_rejected {
                    h_new = h_new.min(h_try);
                }
                facold = err.max(T::lit(1e-4));
                last_rejected = false;

                x = if clipped { target } else { x + h_try };
                y = y_new;
                k1 = k7;
                if clipped {
                    on_node(next, x, &y);
                    next += 1;
                    // a short clipped step should not throttle the next one
                    h = h.max(h_new);
                } else {
                    h = h_new;
                }
            } else {
                stats.rejected += 1;
                let fac11 = err.powf(expo1);
                h = h_try / (T::one() / fac_min).min(fac11 / safe);
                last_rejected = true;
            }
        }
        Ok(stats)
    }

    fn initial_step<const D: usize>(&self, y: &[T; D], f: &[T; D], span: T) -> T {
        let mut d0 = T::zero();
        let mut d1 = T::zero();
        for i in 0..D {
            let sc = self.atol + self.rtol * y[i].abs();
            d0 = d0.max(y[i].abs() / sc);
            d1 = d1.max(f[i].abs() / sc);
        }
        let guess = if d1 > T::lit(1e-5) && d0 > T::lit(1e-5) {
            T::lit(0.01) * d0 / d1
        } else {
            T::lit(1e-6)
        };
        guess.min(span.abs() * T::lit(0.01)).max(self.h_min * T::lit(10.0))
    }

    #[allow(clippy::type_complexity)]
    fn step<const D: usize, F>(
        &self,
        rhs: &mut F,
        x: T,
        y: &[T; D],
        k1: &[T; D],
        h: T,
    ) -> Result<([T; D], [T; D], T)>
    where
        F: FnMut(T, &[T; D]) -> Result<[T; D]>,
    {
        let l = T::lit;
        let comb = |terms: &[(f64, &[T; D])]| -> [T; D] {
            let mut out = *y;
            for i in 0..D {
                let mut acc = T::zero();
                for (c, k) in terms {
                    acc = acc + l(*c) * k[i];
                }
                out[i] = out[i] + h * acc;
            }
            out
        };
        let k2 = rhs(x + l(C2) * h, &comb(&[(A21, k1)]))?;
        let k3 = rhs(x + l(C3) * h, &comb(&[(A31, k1), (A32, &k2)]))?;
        let k4 = rhs(x + l(C4) * h, &comb(&[(A41, k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = rhs(x + l(C5) * h, &comb(&[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
        let k6 = rhs(x + h, &comb(&[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
        let y_new = comb(&[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(x + h, &y_new)?;

        let mut err = T::zero();
        for i in 0..D {
            let e = h
                * (l(E1) * k1[i] + l(E3) * k3[i] + l(E4) * k4[i] + l(E5) * k5[i] + l(E6) * k6[i]
                    + l(E7) * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max(e.abs() / sc);
        }
        Ok((y_new, k7, err))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_hits_nodes() {
        let solver = Dopri5::new(1e-10_f64);
        let nodes: Vec<f64> = (1..=20).map(|k| k as f64 * 0.25).collect();
        let mut seen = Vec::new();
        solver
            .solve(|_, y: &[f64; 1]| Ok([-y[0]]), 0.0, [1.0], &nodes, |k, x, y| seen.push((k, x, y[0])))
            .unwrap();
        assert_eq!(seen.len(), nodes.len());
        for (k, x, y) in seen {
            assert_eq!(x, nodes[k]);
            assert!((y - (-x).exp()).abs() < 1e-9 * (-x).exp().max(1e-3));
        }
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let solver = Dopri5::new(1e-11_f64);
        let mut last = [0.0; 2];
        solver
            .solve(|_, y: &[f64; 2]| Ok([y[1], -y[0]]), 0.0, [1.0, 0.0], &[10.0], |_, _, y| last = *y)
            .unwrap();
        assert!((last[0] - 10f64.cos()).abs() < 1e-8);
        assert!((last[1] + 10f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn rhs_error_propagates() {
        let solver = Dopri5::new(1e-8_f64);
        let out = solver.solve(
            |x, _: &[f64; 1]| if x > 0.5 { Err(Error::BlowDown { s: x, floor: 0.0 }) } else { Ok([1.0]) },
            0.0,
            [0.0],
            &[1.0],
            |_, _, _| {},
        );
        assert!(matches!(out, Err(Error::BlowDown { .. })));
    }
}
