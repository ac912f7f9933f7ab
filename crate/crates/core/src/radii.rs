//! Closed-form radii, radius polynomials and the least-root solver.

use serde::{Deserialize, Serialize};

use crate::class::{ClassKind, ClassSpec};
use crate::error::{Error, Result};

/// Number of equal subintervals scanned for the first sign change.
pub const SCAN_INTERVALS: usize = 4096;

/// Endpoint inset of the scanned interval.
pub const SCAN_INSET: f64 = 1e-12;

/// Default bisection width.
pub const ROOT_TOL: f64 = 1e-12;

/// Real polynomial `Σ coeffs[k] r^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RPoly {
    pub coeffs: Vec<f64>,
}

impl RPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        RPoly { coeffs }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusMethod {
    ClosedForm,
    LeastRoot,
    MinOfTwo,
}

impl RadiusMethod {
    pub fn name(self) -> &'static str {
        match self {
            RadiusMethod::ClosedForm => "closed-form",
            RadiusMethod::LeastRoot => "least-root",
            RadiusMethod::MinOfTwo => "min-of-two",
        }
    }
}

/// A computed radius and how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub value: f64,
    pub method: RadiusMethod,
    #[serde(default)]
    pub r1: Option<f64>,
    #[serde(default)]
    pub r2: Option<f64>,
    #[serde(default)]
    pub poly: Option<RPoly>,
    #[serde(default)]
    pub bracket: Option<(f64, f64)>,
}

/// First root of `poly` in `(lo, hi)`.
///
/// Scans [`SCAN_INTERVALS`] equal pieces of `[lo + ε, hi - ε]` for the first
/// sign change, then bisects that piece down to width `tol` and returns the
/// midpoint. A node where the polynomial is exactly zero is returned as is.
pub fn least_root_in(poly: &RPoly, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::parameter(
            "bracket",
            format!("need lo < hi, got [{lo}, {hi}]"),
        ));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::parameter("tol", format!("{tol} must be positive")));
    }
    let (a, b) = (lo + SCAN_INSET, hi - SCAN_INSET);
    let step = (b - a) / SCAN_INTERVALS as f64;
    let mut left = a;
    let mut f_left = poly.eval(left);
    if f_left == 0.0 {
        return Ok(left);
    }
    for k in 1..=SCAN_INTERVALS {
        let right = if k == SCAN_INTERVALS {
            b
        } else {
            a + step * k as f64
        };
        let f_right = poly.eval(right);
        if f_right == 0.0 {
            return Ok(right);
        }
        if f_left.signum() != f_right.signum() {
            return Ok(bisect(poly, left, right, f_left, tol));
        }
        left = right;
        f_left = f_right;
    }
    Err(Error::NoRoot {
        lo: a,
        hi: b,
        f_lo: poly.eval(a),
        f_hi: poly.eval(b),
    })
}

fn bisect(poly: &RPoly, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = poly.eval(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `1 - 2/√(A+3)`, the sharp radius for `pprime`.
pub fn pprime_radius(aperture: f64) -> f64 {
    1.0 - 2.0 / (aperture + 3.0).sqrt()
}

/// Sharp radius for a linear-invariant family of order `alpha`.
pub fn lif_radius(aperture: f64, alpha: f64) -> f64 {
    (aperture + 1.0 + 2.0 * alpha - 2.0 * ((aperture + alpha) * (1.0 + alpha)).sqrt())
        / (aperture - 1.0)
}

/// `r₁` for `u0`, clamped to 1.
///
/// `√((5 + λ - √((1-λ)(25-λ))) / (6λ))`, evaluated as `√(6 / (5 + λ + √((1-λ)(25-λ))))`
/// to avoid cancellation for small `λ`.
pub fn u0_r1(lambda: f64) -> f64 {
    let s = ((1.0 - lambda) * (25.0 - lambda)).sqrt();
    (6.0 / (5.0 + lambda + s)).sqrt().min(1.0)
}

/// `r₁` for `vp` and `vp-convex`, clamped to 1.
///
/// `√((3 - λ - √((1-λ)(9-λ))) / (2λ))`, evaluated as `√(2 / (3 - λ + √((1-λ)(9-λ))))`.
pub fn vp_r1(lambda: f64) -> f64 {
    let s = ((1.0 - lambda) * (9.0 - lambda)).sqrt();
    (2.0 / (3.0 - lambda + s)).sqrt().min(1.0)
}

/// Radius polynomial of the classes whose radius is a least root.
pub fn polynomial_for(spec: &ClassSpec) -> Result<RPoly> {
    let coeffs = match spec.kind() {
        ClassKind::PprimeFixed => {
            let (big_a, a) = (spec.aperture(), spec.second_coeff());
            let d = big_a + 3.0;
            vec![
                (big_a - 1.0) / d,
                -2.0 * (big_a * (1.0 - a) + 3.0 * a + 1.0) / d,
                2.0 * (big_a * (1.0 - 2.0 * a) - 2.0 * a - 3.0) / d,
                -2.0 * (big_a + 1.0) * (1.0 - a) / d,
                1.0,
            ]
        }
        ClassKind::StarlikeHalf => {
            let a = spec.aperture();
            vec![-a - 1.0, 3.0 * a + 7.0, -(3.0 * a + 1.0), a - 1.0]
        }
        ClassKind::U0 => {
            let (a, l) = (spec.aperture(), spec.lambda());
            vec![a - 1.0, -(a + 3.0), -l * (a + 11.0), -l * (9.0 - a)]
        }
        ClassKind::Vp => {
            let (l, p) = (spec.lambda(), spec.pole());
            let p2 = p * p;
            vec![
                p,
                -(1.0 + p2 + 3.0 * l * p2),
                p * (1.0 - 4.0 * l - l * p2),
                l * (5.0 * l * p2 - 4.0 * p2 + 3.0),
                l * p * (3.0 * l * p2 - l + 1.0),
                l * l * p2,
            ]
        }
        ClassKind::VpConvex => {
            let (l, p) = (spec.lambda(), spec.pole());
            let p2 = p * p;
            vec![
                p2,
                -p * (2.0 + 3.0 * l * p2),
                1.0 - 5.0 * l * p2,
                -l * p * (1.0 - 5.0 * l * p2),
                l * (1.0 + 2.0 * l * p2),
                l * l * p,
            ]
        }
        kind @ (ClassKind::Pprime | ClassKind::Lif) => {
            return Err(Error::parameter(
                "class",
                format!("{kind} has a closed-form radius and no radius polynomial"),
            ))
        }
    };
    Ok(RPoly::new(coeffs))
}

/// Interval searched for the least root of [`polynomial_for`].
pub fn bracket_for(spec: &ClassSpec) -> Option<(f64, f64)> {
    match spec.kind() {
        ClassKind::PprimeFixed | ClassKind::StarlikeHalf | ClassKind::U0 => Some((0.0, 1.0)),
        ClassKind::Vp | ClassKind::VpConvex => Some((0.0, spec.pole())),
        ClassKind::Pprime | ClassKind::Lif => None,
    }
}

pub fn radius_for(spec: &ClassSpec) -> Result<RadiusResult> {
    let closed = |value| RadiusResult {
        value,
        method: RadiusMethod::ClosedForm,
        r1: None,
        r2: None,
        poly: None,
        bracket: None,
    };
    let r1 = match spec.kind() {
        ClassKind::Pprime => return Ok(closed(pprime_radius(spec.aperture()))),
        ClassKind::Lif => return Ok(closed(lif_radius(spec.aperture(), spec.alpha()))),
        ClassKind::PprimeFixed | ClassKind::StarlikeHalf => None,
        ClassKind::U0 => Some(u0_r1(spec.lambda())),
        ClassKind::Vp | ClassKind::VpConvex => Some(vp_r1(spec.lambda())),
    };
    let poly = polynomial_for(spec)?;
    let (lo, hi) = bracket_for(spec).expect("least-root classes have a bracket");
    let root = least_root_in(&poly, lo, hi, ROOT_TOL)?;
    Ok(match r1 {
        None => RadiusResult {
            value: root,
            method: RadiusMethod::LeastRoot,
            r1: None,
            r2: None,
            poly: Some(poly),
            bracket: Some((lo, hi)),
        },
        Some(r1) => RadiusResult {
            value: r1.min(root),
            method: RadiusMethod::MinOfTwo,
            r1: Some(r1),
            r2: Some(root),
            poly: Some(poly),
            bracket: Some((lo, hi)),
        },
    })
}
