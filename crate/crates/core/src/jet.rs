//! Truncated Taylor series ("jets") in a single variable.
//!
//! A `Jet` stores the coefficients `c_k` of `u(s0 + e) = sum_k c_k e^k` up to a
//! fixed order. Arithmetic propagates the coefficients exactly, so derivatives of
//! composite expressions (curvature of a warped metric, the soliton potential,
//! barrier functions) are available without finite differencing.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    /// Jet of a constant, truncated after `len` coefficients.
    pub fn constant(value: T, len: usize) -> Self {
        let mut coeffs = vec![T::zero(); len.max(1)];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// Jet of the independent variable `s` at `s0`.
    pub fn variable(s0: T, len: usize) -> Self {
        let mut j = Self::constant(s0, len.max(2));
        j.coeffs[1] = T::one();
        j.coeffs.truncate(len.max(1));
        j
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "jet needs at least one coefficient");
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    /// k-th derivative at the expansion point (zero past the truncation order).
    pub fn derivative_at(&self, k: usize) -> T {
        match self.coeffs.get(k) {
            Some(&c) => c * factorial::<T>(k),
            None => T::zero(),
        }
    }

    pub fn d1(&self) -> T {
        self.derivative_at(1)
    }

    pub fn d2(&self) -> T {
        self.derivative_at(2)
    }

    /// Jet of the derivative; loses one order.
    pub fn differentiate(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(T::zero(), 1);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, &c)| c * T::from_usize_lossy(k + 1))
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, k: T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * k).collect() }
    }

    pub fn add_scalar(&self, k: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + k;
        out
    }

    pub fn sqrt(&self) -> Self {
        let a = &self.coeffs;
        let mut r = vec![T::zero(); a.len()];
        r[0] = a[0].sqrt();
        let two_r0 = r[0] + r[0];
        for k in 1..a.len() {
            let mut acc = a[k];
            for j in 1..k {
                acc = acc - r[j] * r[k - j];
            }
            r[k] = acc / two_r0;
        }
        Self { coeffs: r }
    }

    /// `self^p` for real `p`; requires a nonzero constant term.
    pub fn powf(&self, p: T) -> Self {
        let a = &self.coeffs;
        let mut y = vec![T::zero(); a.len()];
        y[0] = a[0].powf(p);
        for k in 1..a.len() {
            let kk = T::from_usize_lossy(k);
            let mut acc = T::zero();
            for j in 1..=k {
                let jj = T::from_usize_lossy(j);
                acc = acc + ((p + T::one()) * jj - kk) * a[j] * y[k - j];
            }
            y[k] = acc / (kk * a[0]);
        }
        Self { coeffs: y }
    }

    fn zip_len(&self, other: &Self) -> usize {
        self.coeffs.len().min(other.coeffs.len())
    }
}

fn factorial<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * T::from_usize_lossy(j))
}

impl<T: Scalar> Add for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: Self) -> Jet<T> {
        let n = self.zip_len(rhs);
        Jet { coeffs: (0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect() }
    }
}

impl<T: Scalar> Sub for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: Self) -> Jet<T> {
        let n = self.zip_len(rhs);
        Jet { coeffs: (0..n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect() }
    }
}

impl<T: Scalar> Mul for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: Self) -> Jet<T> {
        let n = self.zip_len(rhs);
        let coeffs = (0..n)
            .map(|k| (0..=k).fold(T::zero(), |acc, j| acc + self.coeffs[j] * rhs.coeffs[k - j]))
            .collect();
        Jet { coeffs }
    }
}

impl<T: Scalar> Div for &Jet<T> {
    type Output = Jet<T>;
    fn div(self, rhs: Self) -> Jet<T> {
        let n = self.zip_len(rhs);
        let b = &rhs.coeffs;
        let mut q = vec![T::zero(); n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc = acc - b[j] * q[k - j];
            }
            q[k] = acc / b[0];
        }
        Jet { coeffs: q }
    }
}

impl<T: Scalar> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.scale(-T::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: Jet<T>) -> Jet<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: &Jet<T>) -> Jet<T> {
                (&self).$m(rhs)
            }
        }
        impl<T: Scalar> $tr<Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: Jet<T>) -> Jet<T> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_derivatives() {
        // u(s) = s^3 at s = 2: u' = 12, u'' = 12, u''' = 6
        let s = Jet::variable(2.0_f64, 5);
        let u = &(&s * &s) * &s;
        assert_relative_eq!(u.value(), 8.0);
        assert_relative_eq!(u.d1(), 12.0);
        assert_relative_eq!(u.d2(), 12.0);
        assert_relative_eq!(u.derivative_at(3), 6.0);
        assert_relative_eq!(u.derivative_at(4), 0.0);
    }

    #[test]
    fn quotient_sqrt_and_power_match_closed_forms() {
        let x0 = 1.7_f64;
        let s = Jet::variable(x0, 4);
        let one = Jet::constant(1.0, 4);
        let inv = &one / &(&s + &one);
        assert_relative_eq!(inv.d2(), 2.0 / (x0 + 1.0).powi(3), epsilon = 1e-14);
        let r = s.sqrt();
        assert_relative_eq!(r.d2(), -0.25 * x0.powf(-1.5), epsilon = 1e-14);
        let p = s.powf(-0.4);
        assert_relative_eq!(p.derivative_at(3), -0.4 * -1.4 * -2.4 * x0.powf(-3.4), epsilon = 1e-13);
    }

    #[test]
    fn differentiate_drops_one_order() {
        let s = Jet::variable(0.5_f64, 4);
        let d = (&s * &s).differentiate();
        assert_eq!(d.len(), 3);
        assert_relative_eq!(d.value(), 1.0);
        assert_relative_eq!(d.d1(), 2.0);
    }
}
