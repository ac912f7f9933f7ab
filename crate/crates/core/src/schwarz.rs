//! Polynomial self-maps of the unit disc with a coefficient-sum certificate.
//!
//! If `Σ |c_k| ≤ 1` then `|Σ c_k z^k| ≤ Σ |c_k| |z|^k ≤ 1` on the closed disc,
//! so membership in the Schwarz class needs no numerical check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::CPoly;

/// Largest degree the sampler accepts.
pub const MAX_SAMPLE_DEGREE: usize = 32;

/// Headroom used when nothing else is requested; keeps samples strictly
/// inside the disc.
pub const DEFAULT_HEADROOM: f64 = 0.999;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzCert {
    poly: CPoly,
    sum_bound: f64,
    vanishes_at_zero: bool,
}

impl SchwarzCert {
    /// Certifies `poly`. Fails if `Σ |c_k| > 1`.
    pub fn new(poly: CPoly) -> Result<Self> {
        let sum_bound = poly.abs_sum();
        if sum_bound.is_nan() || sum_bound > 1.0 {
            return Err(Error::parameter(
                "poly",
                format!("coefficient sum {sum_bound} exceeds 1"),
            ));
        }
        let vanishes_at_zero = poly.coeff(0) == Complex64::default();
        Ok(SchwarzCert {
            poly,
            sum_bound,
            vanishes_at_zero,
        })
    }

    /// `g(z) = z`, the boundary case of the Schwarz lemma.
    pub fn identity() -> Self {
        SchwarzCert::new(CPoly::identity()).expect("identity has coefficient sum 1")
    }

    /// The constant map `c` with `|c| ≤ 1`.
    pub fn constant(c: Complex64) -> Result<Self> {
        SchwarzCert::new(CPoly::constant(c))
    }

    pub fn poly(&self) -> &CPoly {
        &self.poly
    }

    pub fn sum_bound(&self) -> f64 {
        self.sum_bound
    }

    pub fn vanishes_at_zero(&self) -> bool {
        self.vanishes_at_zero
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.poly.eval(z)
    }
}

fn check_headroom(headroom: f64) -> Result<()> {
    if headroom > 0.0 && headroom <= 1.0 {
        Ok(())
    } else {
        Err(Error::parameter(
            "headroom",
            format!("{headroom} not in (0, 1]"),
        ))
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_SAMPLE_DEGREE {
        Err(Error::parameter(
            "degree",
            format!("{degree} exceeds the cap of {MAX_SAMPLE_DEGREE}"),
        ))
    } else {
        Ok(())
    }
}

fn uniform_in_disc(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, theta)
}

/// Draws `coeffs[from..]` uniformly in the unit disc and rescales them so
/// their absolute sum is `budget`.
fn fill_scaled(coeffs: &mut [Complex64], from: usize, budget: f64, rng: &mut ChaCha8Rng) {
    for c in coeffs.iter_mut().skip(from) {
        *c = uniform_in_disc(rng);
    }
    let total: f64 = coeffs.iter().skip(from).map(|c| c.norm()).sum();
    if total > 0.0 {
        let s = budget / total;
        for c in coeffs.iter_mut().skip(from) {
            *c *= s;
        }
        // rounding may leave the sum an ulp above budget
        while coeffs.iter().skip(from).map(|c| c.norm()).sum::<f64>() > budget {
            for c in coeffs.iter_mut().skip(from) {
                *c *= 1.0 - f64::EPSILON;
            }
        }
    }
}

/// Seeded random Schwarz-class polynomial of the given degree.
///
/// Coefficients are drawn uniformly in the unit disc and rescaled so that
/// their absolute sum equals `headroom`. With `vanish_at_zero` the constant
/// term is zero, which is the normalization `g(0) = 0`.
pub fn sample_schwarz(
    seed: u64,
    degree: usize,
    vanish_at_zero: bool,
    headroom: f64,
) -> Result<SchwarzCert> {
    check_degree(degree)?;
    check_headroom(headroom)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::default(); degree + 1];
    let from = usize::from(vanish_at_zero);
    fill_scaled(&mut coeffs, from, headroom, &mut rng);
    SchwarzCert::new(CPoly::new(coeffs))
}

/// Schwarz-class polynomial with `g(0) = 0` and `g'(0) = linear`.
///
/// The higher coefficients share the budget `(1 - linear) * headroom`, so the
/// certificate stays `≤ 1` and is strictly below 1 whenever `linear < 1`.
/// With `linear = 1` the only possibility is `g(z) = z`.
pub fn sample_schwarz_pinned(
    seed: u64,
    degree: usize,
    linear: f64,
    headroom: f64,
) -> Result<SchwarzCert> {
    check_degree(degree)?;
    check_headroom(headroom)?;
    if !(0.0..=1.0).contains(&linear) {
        return Err(Error::parameter("a", format!("{linear} not in [0, 1]")));
    }
    if degree == 0 {
        return Err(Error::parameter(
            "degree",
            "pinning the linear coefficient needs degree >= 1",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::default(); degree + 1];
    coeffs[1] = Complex64::new(linear, 0.0);
    fill_scaled(&mut coeffs, 2, (1.0 - linear) * headroom, &mut rng);
    SchwarzCert::new(CPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(r: f64, n: usize) -> impl Iterator<Item = Complex64> {
        (0..n).map(move |k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64))
    }

    fn polar_grid(nr: usize, nt: usize) -> impl Iterator<Item = Complex64> {
        (1..=nr).flat_map(move |j| ring(j as f64 / nr as f64, nt))
    }

    #[test]
    fn construction_guarantees() {
        let cert = sample_schwarz(42, 3, true, 0.999).unwrap();
        assert_eq!(cert.poly().coeff(0), Complex64::default());
        assert!(cert.vanishes_at_zero());
        assert!((cert.sum_bound() - 0.999).abs() < 1e-15);
        for z in ring(0.9, 64) {
            assert!(cert.eval(z).norm() <= 0.999);
        }
    }

    #[test]
    fn deterministic_in_arguments() {
        let a = sample_schwarz(7, 5, false, 0.5).unwrap();
        let b = sample_schwarz(7, 5, false, 0.5).unwrap();
        assert_eq!(a, b);
        let c = sample_schwarz(8, 5, false, 0.5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn degree_cap_and_headroom_are_checked() {
        assert!(matches!(
            sample_schwarz(1, MAX_SAMPLE_DEGREE + 1, true, 0.9),
            Err(Error::Parameter { name: "degree", .. })
        ));
        assert!(sample_schwarz(1, MAX_SAMPLE_DEGREE, true, 0.9).is_ok());
        assert!(sample_schwarz(1, 3, true, 0.0).is_err());
        assert!(sample_schwarz(1, 3, true, 1.5).is_err());
        assert!(sample_schwarz(1, 3, true, f64::NAN).is_err());
    }

    #[test]
    fn degree_zero_vanishing_is_zero_map() {
        let cert = sample_schwarz(3, 0, true, 0.999).unwrap();
        assert!(cert.poly().is_zero());
        assert_eq!(cert.sum_bound(), 0.0);
        assert!(cert.vanishes_at_zero());
    }

    #[test]
    fn certificate_rejects_large_sum() {
        assert!(SchwarzCert::new(CPoly::from_real(&[0.0, 0.6, 0.6])).is_err());
        let id = SchwarzCert::identity();
        assert_eq!(id.sum_bound(), 1.0);
        assert!(id.vanishes_at_zero());
    }

    #[test]
    fn pinned_linear_coefficient() {
        let cert = sample_schwarz_pinned(11, 4, 0.5, 0.999).unwrap();
        assert_eq!(cert.poly().coeff(0), Complex64::default());
        assert_eq!(cert.poly().coeff(1), Complex64::new(0.5, 0.0));
        assert!((cert.sum_bound() - (0.5 + 0.5 * 0.999)).abs() < 1e-15);

        let edge = sample_schwarz_pinned(11, 4, 1.0, 0.999).unwrap();
        assert_eq!(edge.sum_bound(), 1.0);
        assert!((edge.eval(Complex64::new(0.3, 0.2)) - Complex64::new(0.3, 0.2)).norm() < 1e-15);
        assert!(sample_schwarz_pinned(11, 4, 1.2, 0.999).is_err());
        assert!(sample_schwarz_pinned(11, 0, 0.5, 0.999).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn sup_norm_within_certificate(seed in any::<u64>(), degree in 0usize..12, vanish in any::<bool>()) {
            let cert = sample_schwarz(seed, degree, vanish, 0.999).unwrap();
            for z in polar_grid(128, 64) {
                prop_assert!(cert.eval(z).norm() <= cert.sum_bound() + 1e-12);
            }
        }

        #[test]
        fn schwarz_pick_on_rings(seed in any::<u64>(), degree in 1usize..12) {
            let cert = sample_schwarz(seed, degree, true, 0.999).unwrap();
            for r in [0.3, 0.5, 0.8, 0.95] {
                for z in ring(r, 64) {
                    let (g, dg) = cert.poly().eval_with_derivative(z);
                    let margin = (1.0 - g.norm_sqr()) - dg.norm() * (1.0 - z.norm_sqr());
                    prop_assert!(margin >= -1e-10, "margin {} at {}", margin, z);
                }
            }
        }
    }
}
