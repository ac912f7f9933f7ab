//! Dense complex-coefficient polynomials.
//!
//! Every sampled class member is built from these, so derivatives and
//! antiderivatives are exact up to coefficient rounding.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Polynomial `Σ coeffs[k] z^k`. The empty list is the zero polynomial.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        CPoly { coeffs }
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        CPoly {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Complex64) -> Self {
        CPoly { coeffs: vec![c] }
    }

    /// The identity map `z`.
    pub fn identity() -> Self {
        CPoly::from_real(&[0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `len(coeffs) - 1`, or `None` for the empty list.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::default())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, &c| acc * z + c)
    }

    /// Evaluates the polynomial and its derivative in one pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = Complex64::default();
        let mut slope = Complex64::default();
        for &c in self.coeffs.iter().rev() {
            slope = slope * z + value;
            value = value * z + c;
        }
        (value, slope)
    }

    pub fn derivative(&self) -> CPoly {
        CPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    /// Antiderivative vanishing at the origin.
    pub fn antiderivative(&self) -> CPoly {
        if self.coeffs.is_empty() {
            return CPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::default());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        CPoly { coeffs }
    }

    pub fn scale(&self, s: Complex64) -> CPoly {
        CPoly {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> CPoly {
        if self.coeffs.is_empty() {
            return CPoly::zero();
        }
        let mut coeffs = vec![Complex64::default(); k];
        coeffs.extend_from_slice(&self.coeffs);
        CPoly { coeffs }
    }

    /// Synthetic division by `(z - root)`: returns quotient and remainder.
    pub fn div_linear(&self, root: Complex64) -> (CPoly, Complex64) {
        let n = self.coeffs.len();
        if n == 0 {
            return (CPoly::zero(), Complex64::default());
        }
        let mut quotient = vec![Complex64::default(); n - 1];
        let mut carry = Complex64::default();
        for k in (0..n).rev() {
            carry = carry * root + self.coeffs[k];
            if k > 0 {
                quotient[k - 1] = carry;
            }
        }
        (CPoly { coeffs: quotient }, carry)
    }

    /// `Σ |coeff_k|`, an upper bound for `|p(z)|` on the closed unit disc.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

impl From<Vec<Complex64>> for CPoly {
    fn from(coeffs: Vec<Complex64>) -> Self {
        CPoly::new(coeffs)
    }
}

impl Add for &CPoly {
    type Output = CPoly;

    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly {
            coeffs: (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        }
    }
}

impl Sub for &CPoly {
    type Output = CPoly;

    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly {
            coeffs: (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        }
    }
}

impl Neg for &CPoly {
    type Output = CPoly;

    fn neg(self) -> CPoly {
        CPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CPoly {
    type Output = CPoly;

    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return CPoly::zero();
        }
        let mut coeffs = vec![Complex64::default(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        CPoly { coeffs }
    }
}
