//! Concavity operators and pre-Schwarzian evaluators for class members.
//!
//! For a normalized function `f` the pre-Schwarzian here is `Q(z) = z f''(z) / f'(z)`.
//! The analytic concavity operator is
//!
//! ```text
//! T_f(z) = 2/(A-1) * [ (A+1)/2 * (1+z)/(1-z) - 1 - Q(z) ]
//! ```
//!
//! and the meromorphic one, for a simple pole at `p`, is
//!
//! ```text
//! P_f(z) = -[ 1 + Q(z) + (z+p)/(z-p) - (1+pz)/(1-pz) ].
//! ```

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::class::{ClassKind, ClassSpec, Param};
use crate::error::{Error, Result};
use crate::poly::CPoly;
use crate::schwarz::SchwarzCert;

/// Default exclusion radius around the pole for the raw `P_f` path.
pub const DEFAULT_POLE_GUARD: f64 = 1e-3;

type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// `z ↦ z f''(z)/f'(z)` for one function, optionally with a pole-cancelled
/// form `z ↦ 1 + z f''/f' + (z+p)/(z-p)` for meromorphic members.
#[derive(Clone)]
pub struct PreSchwarzian {
    eval: Evaluator,
    regularized: Option<(f64, Evaluator)>,
}

impl fmt::Debug for PreSchwarzian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PreSchwarzian")
            .field("pole", &self.pole())
            .finish_non_exhaustive()
    }
}

impl PreSchwarzian {
    pub fn new(eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        PreSchwarzian {
            eval: Arc::new(eval),
            regularized: None,
        }
    }

    /// Installs the pole-cancelled evaluator for a pole at `pole`.
    pub fn with_regularized(
        mut self,
        pole: f64,
        regularized: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        self.regularized = Some((pole, Arc::new(regularized)));
        self
    }

    /// Same evaluator with the regularized form dropped.
    pub fn raw(&self) -> Self {
        PreSchwarzian {
            eval: Arc::clone(&self.eval),
            regularized: None,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn pole(&self) -> Option<f64> {
        self.regularized.as_ref().map(|(p, _)| *p)
    }

    /// `1 + Q(z) + (z+p)/(z-p)`, when a regularized form is installed.
    pub fn regularized(&self, z: Complex64) -> Option<Complex64> {
        self.regularized.as_ref().map(|(_, r)| r(z))
    }

    /// `1 + z f''(z)/f'(z)`, through the regularized form when present.
    pub fn convexity(&self, z: Complex64) -> Complex64 {
        match &self.regularized {
            Some((p, r)) => r(z) - (z + p) / (z - p),
            None => 1.0 + self.eval(z),
        }
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn check_in_disc(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(z, "|z| must be < 1"))
    }
}

fn check_aperture(aperture: f64) -> Result<()> {
    Param::Aperture.validate(aperture).map(|_| ())
}

/// Concavity operator `T_f` for aperture `A`.
pub fn t_of(aperture: f64, q: &PreSchwarzian, z: Complex64) -> Result<Complex64> {
    check_aperture(aperture)?;
    check_in_disc(z)?;
    Ok(t_kernel(aperture, q.eval(z), z))
}

fn t_kernel(aperture: f64, q: Complex64, z: Complex64) -> Complex64 {
    let half_plane = (one() + z) / (one() - z);
    (half_plane * ((aperture + 1.0) / 2.0) - 1.0 - q) * (2.0 / (aperture - 1.0))
}

/// Meromorphic concavity operator `P_f` with the default pole guard.
pub fn p_of(pole: f64, q: &PreSchwarzian, z: Complex64) -> Result<Complex64> {
    p_of_guarded(pole, q, z, DEFAULT_POLE_GUARD)
}

/// `P_f` with an explicit exclusion radius `delta` around the pole.
///
/// If `q` carries a regularized form it is used and `delta` is ignored.
pub fn p_of_guarded(pole: f64, q: &PreSchwarzian, z: Complex64, delta: f64) -> Result<Complex64> {
    Param::Pole.validate(pole)?;
    check_in_disc(z)?;
    let disc_term = (one() + z * pole) / (one() - z * pole);
    match &q.regularized {
        Some((p, r)) => {
            if *p != pole {
                return Err(Error::parameter(
                    "p",
                    format!("evaluator has its pole at {p}, not {pole}"),
                ));
            }
            Ok(-(r(z) - disc_term))
        }
        None => {
            if (z - pole).norm() <= delta {
                return Err(Error::Singularity { z, pole, delta });
            }
            Ok(-(one() + q.eval(z) + (z + pole) / (z - pole) - disc_term))
        }
    }
}

/// Pre-Schwarzian of the class member determined by `data`.
///
/// * `pprime`, `pprime-fixed`: `f' = (1+g)/(1-g)` with `g = data`, `g(0) = 0`.
/// * `starlike-half`: `z f'/f = 1/(1 + z φ)` with `φ = data`.
/// * `u0`: `z/f = 1 + λ z W` with `W = ∫_0^z w₁`, `w₁ = data`.
/// * `vp`, `vp-convex`: `z/f = 1 - b z + λ z W` with `b` chosen so that `f` has
///   its pole at `p`; also installs the pole-cancelled form.
pub fn presch_for(spec: &ClassSpec, data: &SchwarzCert) -> Result<PreSchwarzian> {
    match spec.kind() {
        ClassKind::Pprime => subordinate_presch(data),
        ClassKind::PprimeFixed => {
            let a = spec.second_coeff();
            if (data.poly().coeff(1) - Complex64::new(a, 0.0)).norm() > 1e-12 {
                return Err(Error::parameter(
                    "a",
                    format!("g'(0) = {} does not match a = {a}", data.poly().coeff(1)),
                ));
            }
            subordinate_presch(data)
        }
        ClassKind::Lif => Err(Error::parameter(
            "class",
            "lif has no constructive member; use extremal_presch",
        )),
        ClassKind::StarlikeHalf => Ok(starlike_half_presch(data)),
        ClassKind::U0 => Ok(u0_presch(spec.lambda(), data)),
        ClassKind::Vp | ClassKind::VpConvex => {
            Ok(VpMember::new(spec.lambda(), spec.pole(), data).presch())
        }
    }
}

fn subordinate_presch(data: &SchwarzCert) -> Result<PreSchwarzian> {
    if !data.vanishes_at_zero() {
        return Err(Error::parameter(
            "g",
            "subordination map must satisfy g(0) = 0",
        ));
    }
    let g = data.poly().clone();
    Ok(PreSchwarzian::new(move |z| {
        let (gz, dg) = g.eval_with_derivative(z);
        z * dg * 2.0 / (one() - gz * gz)
    }))
}

fn starlike_half_presch(data: &SchwarzCert) -> PreSchwarzian {
    let phi = data.poly().clone();
    PreSchwarzian::new(move |z| {
        let (ph, dph) = phi.eval_with_derivative(z);
        let zphi = z * ph;
        (one() - zphi - z * z * dph) / (one() + zphi) - 1.0
    })
}

// |λ z W| ≤ λ|z|² < 1 and |λ z² w₁| ≤ λ|z|² < 1 in the disc, so neither
// denominator vanishes.
fn u0_presch(lambda: f64, data: &SchwarzCert) -> PreSchwarzian {
    let w1 = data.poly().clone();
    let big_w = w1.antiderivative();
    PreSchwarzian::new(move |z| {
        let (w, dw) = w1.eval_with_derivative(z);
        let iw = big_w.eval(z);
        let z2 = z * z;
        -(z2 * lambda * (w * 2.0 + z * dw)) / (one() - z2 * w * lambda)
            - z * lambda * 2.0 * (iw + z * w) / (one() + z * iw * lambda)
    })
}

/// Polynomial pieces of a member of the meromorphic class.
#[derive(Debug, Clone)]
struct VpMember {
    lambda: f64,
    pole: f64,
    w1: CPoly,
    /// `w(z) = (∫_p^z w₁) / (z - p)`
    w: CPoly,
    /// `u(z) = z² w₁(z)`
    u: CPoly,
    /// `(u(z) - p z w(z)) / (z - p)`, exact because the numerator vanishes at `p`
    cancelled: CPoly,
}

impl VpMember {
    fn new(lambda: f64, pole: f64, data: &SchwarzCert) -> Self {
        let p = Complex64::new(pole, 0.0);
        let w1 = data.poly().clone();
        let big_w = w1.antiderivative();
        let shifted = &big_w - &CPoly::constant(big_w.eval(p));
        let (w, _) = shifted.div_linear(p);
        let u = w1.shift(2);
        let numerator = &u - &w.shift(1).scale(p);
        let (cancelled, _) = numerator.div_linear(p);
        VpMember {
            lambda,
            pole,
            w1,
            w,
            u,
            cancelled,
        }
    }

    /// `z f''/f'` straight from the representation, singular at `p`.
    fn raw_q(&self, z: Complex64) -> Complex64 {
        let (lambda, p) = (self.lambda, self.pole);
        let (w1, dw1) = self.w1.eval_with_derivative(z);
        let (w, dw) = self.w.eval_with_derivative(z);
        let z2 = z * z;
        -(z * 2.0) / (z - p) - z2 * lambda * (w1 * 2.0 + z * dw1) / (one() - z2 * w1 * lambda)
            + z * (2.0 * lambda * p) * (w + z * dw) / (one() - z * w * (lambda * p))
    }

    /// `1 + z f''/f' + (z+p)/(z-p)`, regular at `p`.
    fn regularized(&self, z: Complex64) -> Complex64 {
        let (lambda, p) = (self.lambda, self.pole);
        let (u, du) = self.u.eval_with_derivative(z);
        let w = self.w.eval(z);
        -(z * du * lambda) / (one() - u * lambda)
            + self.cancelled.eval(z) * (2.0 * lambda * p) / (one() - z * w * (lambda * p))
    }

    fn presch(self) -> PreSchwarzian {
        let member = Arc::new(self);
        let pole = member.pole;
        let raw = Arc::clone(&member);
        PreSchwarzian::new(move |z| raw.raw_q(z))
            .with_regularized(pole, move |z| member.regularized(z))
    }
}

/// `U_f(z) = (z/f)^2 f' - 1` for members of `u0`, `vp` and `vp-convex`,
/// which is `-λ z² w₁(z)` for the represented member.
pub fn u_functional(spec: &ClassSpec, data: &SchwarzCert, z: Complex64) -> Result<Complex64> {
    check_in_disc(z)?;
    match spec.kind() {
        ClassKind::U0 | ClassKind::Vp | ClassKind::VpConvex => {
            Ok(-(z * z) * data.eval(z) * spec.lambda())
        }
        kind => Err(Error::parameter(
            "class",
            format!("U_f is defined through the representation only for u0 and vp, not {kind}"),
        )),
    }
}

/// `U_f(z) = (z/f)^2 f' - 1` from evaluators of `f` and `f'`, with the
/// removable value 0 at the origin.
pub fn u_functional_of(
    f: impl Fn(Complex64) -> Complex64,
    f_prime: impl Fn(Complex64) -> Complex64,
    z: Complex64,
) -> Result<Complex64> {
    check_in_disc(z)?;
    if z == Complex64::default() {
        return Ok(Complex64::default());
    }
    let ratio = z / f(z);
    Ok(ratio * ratio * f_prime(z) - 1.0)
}

/// Functions whose `T_f` is known in closed form and attains the sharp radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extremal {
    /// `f₀(z) = -z + 2 log(1+z)` in the class `pprime`.
    Pprime,
    /// `g₀(z) = (1 - ((1-z)/(1+z))^α) / (2α)` in a linear-invariant family of order `α`.
    Lif,
}

impl TryFrom<ClassKind> for Extremal {
    type Error = Error;

    fn try_from(kind: ClassKind) -> Result<Self> {
        match kind {
            ClassKind::Pprime => Ok(Extremal::Pprime),
            ClassKind::Lif => Ok(Extremal::Lif),
            other => Err(Error::parameter(
                "class",
                format!("no closed-form extremal for {other}"),
            )),
        }
    }
}

/// Closed-form `T` of the extremal function.
pub fn closed_extremal_t(
    kind: Extremal,
    aperture: f64,
    alpha: f64,
    z: Complex64,
) -> Result<Complex64> {
    check_aperture(aperture)?;
    if (z - 1.0).norm() == 0.0 || (z + 1.0).norm() == 0.0 {
        return Err(Error::domain(z, "pole of the extremal operator at ±1"));
    }
    let inv = one() / (one() - z * z);
    match kind {
        Extremal::Pprime => {
            let k = (aperture + 3.0) / (aperture - 1.0);
            Ok(inv * k * (z * z + z * 2.0 + (aperture - 1.0) / (aperture + 3.0)))
        }
        Extremal::Lif => {
            Param::Alpha.validate(alpha)?;
            let k = (aperture + 1.0 + 2.0 * alpha) / (aperture - 1.0);
            Ok(inv * (z * z + z * (2.0 * k) + 1.0))
        }
    }
}

/// Pre-Schwarzian of the extremal function, for use with [`t_of`].
pub fn extremal_presch(kind: Extremal, alpha: f64) -> Result<PreSchwarzian> {
    match kind {
        // f₀' = (1-z)/(1+z)
        Extremal::Pprime => Ok(PreSchwarzian::new(|z| -(z * 2.0) / (one() - z * z))),
        // g₀' = (1-z)^(α-1) / (1+z)^(α+1)
        Extremal::Lif => {
            Param::Alpha.validate(alpha)?;
            Ok(PreSchwarzian::new(move |z| {
                z * (z - alpha) * 2.0 / (one() - z * z)
            }))
        }
    }
}
