//! Numerical verification: grid positivity on sampled members, sharpness of
//! the closed-form radii, and algebraic identities between the radii.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::{ClassKind, ClassSpec};
use crate::error::{Error, Result};
use crate::operators::{closed_extremal_t, p_of, presch_for, t_of, Extremal, PreSchwarzian};
use crate::radii::{
    least_root_in, lif_radius, polynomial_for, pprime_radius, radius_for, RPoly, ROOT_TOL,
};
use crate::schwarz::{sample_schwarz, sample_schwarz_pinned, SchwarzCert, DEFAULT_HEADROOM};

/// Grid points with a margin below this count as failures.
pub const FAILURE_THRESHOLD: f64 = -1e-9;

/// Polar grid `{ r_max·j/n_radial · e^{2πik/n_angular} }`, plus the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_radial: usize,
    pub n_angular: usize,
    /// Fraction of the radius that is actually checked.
    pub margin_factor: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_radial: 16,
            n_angular: 256,
            margin_factor: 0.999,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_radial == 0 {
            return Err(Error::parameter("grid-r", "need at least one radial step"));
        }
        if self.n_angular == 0 {
            return Err(Error::parameter("grid-theta", "need at least one angle"));
        }
        if !(self.margin_factor > 0.0 && self.margin_factor < 1.0) {
            return Err(Error::parameter(
                "margin",
                format!("{} not in (0, 1)", self.margin_factor),
            ));
        }
        Ok(())
    }

    /// Grid points in a fixed order, origin first.
    pub fn points(&self, r_max: f64) -> impl Iterator<Item = Complex64> + '_ {
        let (nr, nt) = (self.n_radial, self.n_angular);
        std::iter::once(Complex64::default()).chain((1..=nr).flat_map(move |j| {
            let r = r_max * j as f64 / nr as f64;
            (0..nt).map(move |k| {
                Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / nt as f64)
            })
        }))
    }
}

#[derive(Debug, Clone, Copy)]
struct GridScan {
    min: f64,
    argmin: Complex64,
    failures: usize,
}

fn scan_grid(
    eval: impl Fn(Complex64) -> Result<Complex64>,
    r_max: f64,
    grid: &GridSpec,
) -> Result<GridScan> {
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(Error::parameter("rMax", format!("{r_max} not in (0, 1)")));
    }
    if grid.n_radial == 0 || grid.n_angular == 0 {
        return Err(Error::parameter("grid", "empty polar grid"));
    }
    let mut scan = GridScan {
        min: f64::INFINITY,
        argmin: Complex64::default(),
        failures: 0,
    };
    for z in grid.points(r_max) {
        let value = eval(z)
            .map_err(|e| Error::AtPoint {
                z,
                source: Box::new(e),
            })?
            .re;
        // NaN counts as a failure and as the worst possible margin
        let value = if value.is_nan() {
            f64::NEG_INFINITY
        } else {
            value
        };
        if value < FAILURE_THRESHOLD {
            scan.failures += 1;
        }
        if value < scan.min {
            scan.min = value;
            scan.argmin = z;
        }
    }
    Ok(scan)
}

/// Minimum of `Re eval(z)` over the polar grid of radius `r_max`, and where
/// it is attained (first grid point on ties).
pub fn disc_min_real(
    eval: impl Fn(Complex64) -> Result<Complex64>,
    r_max: f64,
    grid: &GridSpec,
) -> Result<(f64, Complex64)> {
    scan_grid(eval, r_max, grid).map(|s| (s.min, s.argmin))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub seed: u64,
    pub z: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub class_spec: ClassSpec,
    pub samples: usize,
    pub degree: usize,
    pub grid: GridSpec,
    /// Grid points, over all samples, with margin below [`FAILURE_THRESHOLD`].
    pub failures: usize,
    /// Smallest real part of the checked operator seen anywhere.
    pub worst_margin: f64,
    pub witness: Witness,
    pub radius_used: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Class datum for sample seed `seed`.
pub fn sample_member(spec: &ClassSpec, seed: u64, degree: usize) -> Result<SchwarzCert> {
    match spec.kind() {
        ClassKind::Pprime => sample_schwarz(seed, degree, true, DEFAULT_HEADROOM),
        ClassKind::PprimeFixed => {
            sample_schwarz_pinned(seed, degree, spec.second_coeff(), DEFAULT_HEADROOM)
        }
        ClassKind::StarlikeHalf | ClassKind::U0 | ClassKind::Vp | ClassKind::VpConvex => {
            sample_schwarz(seed, degree, false, DEFAULT_HEADROOM)
        }
        ClassKind::Lif => Err(Error::parameter(
            "class",
            "lif members are not sampled; use sharpness_check and identity_checks",
        )),
    }
}

/// The operator whose real part must stay positive inside the radius:
/// `T_f` for analytic classes, `P_f` for `vp`, `1 + z f''/f'` for `vp-convex`.
pub fn checked_operator(spec: &ClassSpec, q: &PreSchwarzian, z: Complex64) -> Result<Complex64> {
    match spec.kind() {
        ClassKind::Vp => p_of(spec.pole(), q, z),
        ClassKind::VpConvex => Ok(q.convexity(z)),
        _ => t_of(spec.aperture(), q, z),
    }
}

/// Samples `n_samples` members and checks the operator on the grid of
/// radius `margin_factor · R`.
///
/// Sample `i` is drawn with seed `seed ^ i`. Samples run in parallel and are
/// reduced in index order, so the report depends only on the arguments.
pub fn sample_verify(
    spec: &ClassSpec,
    n_samples: usize,
    seed: u64,
    grid: &GridSpec,
    degree: usize,
) -> Result<VerifyReport> {
    grid.validate()?;
    if spec.kind() == ClassKind::Lif {
        // fail before sampling
        sample_member(spec, seed, degree)?;
    }
    let radius = radius_for(spec)?.value;
    let r_max = grid.margin_factor * radius;

    let scans: Vec<Result<(u64, GridScan)>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let sample_seed = seed ^ i as u64;
            let run = || -> Result<GridScan> {
                let data = sample_member(spec, sample_seed, degree)?;
                let q = presch_for(spec, &data)?;
                scan_grid(|z| checked_operator(spec, &q, z), r_max, grid)
            };
            run().map(|s| (sample_seed, s)).map_err(|e| Error::Sample {
                index: i,
                seed: sample_seed,
                source: Box::new(e),
            })
        })
        .collect();

    let mut report = VerifyReport {
        class_spec: *spec,
        samples: n_samples,
        degree,
        grid: *grid,
        failures: 0,
        worst_margin: f64::INFINITY,
        witness: Witness {
            seed,
            z: Complex64::default(),
        },
        radius_used: r_max,
    };
    for scan in scans {
        let (sample_seed, scan) = scan?;
        report.failures += scan.failures;
        if scan.min < report.worst_margin {
            report.worst_margin = scan.min;
            report.witness = Witness {
                seed: sample_seed,
                z: scan.argmin,
            };
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub kind: Extremal,
    pub aperture: f64,
    pub alpha: f64,
    pub radius: f64,
    pub eps: f64,
    /// `Re T(-(R + eps))`, expected negative.
    pub outside: f64,
    /// `Re T(-(R - eps))`, expected positive.
    pub inside: f64,
    pub passed: bool,
}

/// Evaluates the extremal's closed-form operator on the negative real axis
/// just outside and just inside the sharp radius.
///
/// `alpha` is ignored for [`Extremal::Pprime`].
pub fn sharpness_check(
    kind: Extremal,
    aperture: f64,
    alpha: f64,
    eps: f64,
) -> Result<SharpnessReport> {
    crate::class::Param::Aperture.validate(aperture)?;
    let radius = match kind {
        Extremal::Pprime => pprime_radius(aperture),
        Extremal::Lif => {
            crate::class::Param::Alpha.validate(alpha)?;
            lif_radius(aperture, alpha)
        }
    };
    if !(eps > 0.0 && radius + eps < 1.0) {
        return Err(Error::parameter(
            "eps",
            format!("{eps} must be positive with R + eps < 1 (R = {radius})"),
        ));
    }
    let at =
        |r: f64| closed_extremal_t(kind, aperture, alpha, Complex64::new(-r, 0.0)).map(|t| t.re);
    let outside = at(radius + eps)?;
    let inside = at(radius - eps)?;
    Ok(SharpnessReport {
        kind,
        aperture,
        alpha,
        radius,
        eps,
        outside,
        inside,
        passed: outside < 0.0 && inside > 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    fn new(name: &str, max_error: f64, tolerance: f64) -> Self {
        IdentityCheck {
            name: name.to_owned(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
        }
    }
}

/// `n` equally spaced apertures in `(1, 2]`, ending at 2.
pub fn aperture_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 1.0 + i as f64 / n as f64).collect()
}

/// `n` equally spaced values in `(0, 1]`, ending at 1.
pub fn unit_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / n as f64).collect()
}

fn max_abs(values: impl Iterator<Item = Result<f64>>) -> f64 {
    values
        .map(|v| v.map(f64::abs).unwrap_or(f64::INFINITY))
        .fold(
            0.0,
            |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) },
        )
}

fn smaller_quadratic_root(aperture: f64, alpha: f64) -> Result<f64> {
    // r² - 2k r + 1 with k = (A + 1 + 2α)/(A - 1)
    let k = (aperture + 1.0 + 2.0 * alpha) / (aperture - 1.0);
    let quad = RPoly::new(vec![1.0, -2.0 * k, 1.0]);
    least_root_in(&quad, 0.0, 1.0, ROOT_TOL)
}

/// Fixed suite of identities between the radii.
pub fn identity_checks() -> Vec<IdentityCheck> {
    let apertures = aperture_grid(20);
    let mut checks = Vec::new();

    let reduction = max_abs(apertures.iter().map(|&a| {
        let fixed = radius_for(&ClassSpec::pprime_fixed(a, 1.0)?)?.value;
        Ok(fixed - pprime_radius(a))
    }));
    checks.push(IdentityCheck::new(
        "pprime-fixed-reduction",
        reduction,
        1e-10,
    ));

    let remark = max_abs(apertures.iter().map(|&a| {
        let r = radius_for(&ClassSpec::lif(a, 2.0)?)?.value;
        Ok(r - (a + 5.0 - (12.0 * (a + 2.0)).sqrt()) / (a - 1.0))
    }));
    checks.push(IdentityCheck::new("lif-order-two", remark, 1e-12));

    let quadratic = max_abs(apertures.iter().flat_map(|&a| {
        [1.0, 1.5, 2.0, 3.0, 5.0]
            .into_iter()
            .map(move |alpha| Ok(lif_radius(a, alpha) - smaller_quadratic_root(a, alpha)?))
    }));
    checks.push(IdentityCheck::new("lif-quadratic-root", quadratic, 1e-11));

    let exact = 2.0 - 3f64.sqrt();
    let starlike = ClassSpec::starlike_half(2.0).and_then(|spec| {
        let root_err = (radius_for(&spec)?.value - exact).abs();
        let residual = polynomial_for(&spec)?.eval(exact).abs();
        Ok((root_err, residual))
    });
    checks.push(match starlike {
        Ok((root_err, residual)) => IdentityCheck {
            passed: root_err <= 1e-9 && residual <= 1e-12,
            ..IdentityCheck::new("starlike-half-root", root_err, 1e-9)
        },
        Err(_) => IdentityCheck::new("starlike-half-root", f64::INFINITY, 1e-9),
    });

    let u0 = ClassSpec::u0(2.0, 1.0)
        .and_then(|s| radius_for(&s))
        .map(|r| (r.value - 1.0 / 7.0).abs());
    checks.push(IdentityCheck::new(
        "u0-exact-root",
        u0.unwrap_or(f64::INFINITY),
        1e-9,
    ));

    let grid = unit_grid(20);
    let pole_values = max_abs(grid.iter().flat_map(|&l| {
        grid.iter().map(move |&x| {
            let p = 0.999 * x;
            let phi = polynomial_for(&ClassSpec::vp(l, p)?)?.eval(p);
            let psi = polynomial_for(&ClassSpec::vp_convex(l, p)?)?.eval(p);
            let phi_expected = -4.0 * l * p.powi(3) * (1.0 + p * p) * (1.0 - l * p * p);
            let psi_expected = -8.0 * l * p.powi(4) * (1.0 - l * p * p);
            Ok((phi - phi_expected).abs().max((psi - psi_expected).abs()))
        })
    }));
    checks.push(IdentityCheck::new("vp-pole-values", pole_values, 1e-12));

    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::extremal_presch;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_point_count_and_order() {
        let grid = GridSpec {
            n_radial: 3,
            n_angular: 4,
            margin_factor: 0.5,
        };
        let pts: Vec<_> = grid.points(0.6).collect();
        assert_eq!(pts.len(), 1 + 3 * 4);
        assert_eq!(pts[0], Complex64::default());
        assert!((pts[1] - c(0.2, 0.0)).norm() < 1e-15);
        assert!((pts.last().unwrap().norm() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn constant_evaluator() {
        let (min, _) = disc_min_real(|_| Ok(c(1.0, 0.0)), 0.5, &GridSpec::default()).unwrap();
        assert_eq!(min, 1.0);
    }

    #[test]
    fn extremal_positive_inside_negative_outside() {
        let t = |z| closed_extremal_t(Extremal::Pprime, 2.0, 0.0, z);
        let r = 0.999 * pprime_radius(2.0);
        let (min, _) = disc_min_real(t, r, &GridSpec::default()).unwrap();
        assert!(min > 0.0);

        let (min, at) = disc_min_real(t, 0.12, &GridSpec::default()).unwrap();
        assert!(min < 0.0);
        assert!(at.re < 0.0 && at.im.abs() < 0.05 * at.norm(), "{at}");
    }

    #[test]
    fn disc_min_real_errors() {
        let grid = GridSpec::default();
        assert!(disc_min_real(|_| Ok(c(1.0, 0.0)), 1.0, &grid).is_err());
        assert!(disc_min_real(|_| Ok(c(1.0, 0.0)), 0.0, &grid).is_err());
        let err = disc_min_real(
            |z| {
                if z.norm() > 0.3 {
                    Err(Error::domain(z, "test"))
                } else {
                    Ok(z)
                }
            },
            0.5,
            &grid,
        )
        .unwrap_err();
        match err {
            Error::AtPoint { z, .. } => assert!(z.norm() > 0.3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sharpness_examples() {
        let rep = sharpness_check(Extremal::Pprime, 2.0, 0.0, 0.01).unwrap();
        assert!(rep.passed && rep.outside < 0.0 && rep.inside > 0.0);
        assert!((rep.radius - 0.105_572_809).abs() < 1e-9);

        let rep = sharpness_check(Extremal::Lif, 2.0, 2.0, 0.005).unwrap();
        assert!(rep.passed);

        let rep = sharpness_check(Extremal::Pprime, 1.5, 0.0, 0.01).unwrap();
        assert!(rep.passed);
        assert!((rep.radius - 0.0572).abs() < 1e-4);

        assert!(sharpness_check(Extremal::Pprime, 2.0, 0.0, 0.95).is_err());
        assert!(sharpness_check(Extremal::Pprime, 2.0, 0.0, -0.01).is_err());
    }

    #[test]
    fn sample_verify_small_runs_pass() {
        let grid = GridSpec {
            n_radial: 8,
            n_angular: 64,
            margin_factor: 0.999,
        };
        let specs = [
            ClassSpec::pprime(1.5).unwrap(),
            ClassSpec::pprime_fixed(2.0, 0.5).unwrap(),
            ClassSpec::u0(2.0, 0.5).unwrap(),
            ClassSpec::vp(1.0, 0.5).unwrap(),
            ClassSpec::vp_convex(0.5, 0.3).unwrap(),
        ];
        for spec in specs {
            let rep = sample_verify(&spec, 20, 3, &grid, 4).unwrap();
            assert_eq!(rep.failures, 0, "{spec}: {rep:?}");
            assert!(rep.worst_margin > 0.0);
            let r = radius_for(&spec).unwrap().value;
            assert!((rep.radius_used - 0.999 * r).abs() < 1e-15);
        }
    }

    #[test]
    fn sample_verify_is_deterministic() {
        let spec = ClassSpec::vp(0.5, 0.7).unwrap();
        let grid = GridSpec {
            n_radial: 4,
            n_angular: 32,
            margin_factor: 0.999,
        };
        let a = sample_verify(&spec, 30, 99, &grid, 5).unwrap();
        let b = sample_verify(&spec, 30, 99, &grid, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
    }

    #[test]
    fn sample_verify_rejects_lif_and_bad_grid() {
        let grid = GridSpec::default();
        assert!(sample_verify(&ClassSpec::lif(2.0, 2.0).unwrap(), 5, 1, &grid, 4).is_err());
        let bad = GridSpec {
            n_radial: 0,
            ..grid
        };
        assert!(sample_verify(&ClassSpec::pprime(2.0).unwrap(), 5, 1, &bad, 4).is_err());
        let err = sample_verify(&ClassSpec::pprime(2.0).unwrap(), 5, 1, &grid, 99).unwrap_err();
        assert!(matches!(err, Error::Sample { index: 0, .. }));
        assert_eq!(err.parameter_name(), Some("degree"));
    }

    #[test]
    fn normalization_near_origin() {
        // T = 1 + 2/(A-1)·((A+1) - Q'(0))·z + O(z²), so the 1e-2 window needs A = 2
        for spec in [
            ClassSpec::pprime(2.0).unwrap(),
            ClassSpec::u0(2.0, 1.0).unwrap(),
        ] {
            for seed in 0..20 {
                let data = sample_member(&spec, seed, 4).unwrap();
                let q = presch_for(&spec, &data).unwrap();
                let (min, _) =
                    disc_min_real(|z| t_of(2.0, &q, z), 1e-3, &GridSpec::default()).unwrap();
                assert!((min - 1.0).abs() < 1e-2, "{spec} seed {seed}: {min}");
            }
        }
    }

    #[test]
    fn starlike_half_least_root_admits_counterexample() {
        // φ ≡ 1 gives f = z/(1+z), starlike of order 1/2, whose T is negative
        // on the negative axis well inside the least root of the cubic.
        let spec = ClassSpec::starlike_half(2.0).unwrap();
        let phi = SchwarzCert::constant(Complex64::new(1.0, 0.0)).unwrap();
        let q = presch_for(&spec, &phi).unwrap();
        let r = 0.999 * radius_for(&spec).unwrap().value;
        let t = t_of(2.0, &q, c(-r, 0.0)).unwrap();
        assert!(t.re < -1.7, "{t}");
        // the same member's T vanishes at (√1.5 - 1)/(√1.5 + 1) = 5 - 2√6
        let r_star = 5.0 - 2.0 * 6f64.sqrt();
        assert!(t_of(2.0, &q, c(-r_star, 0.0)).unwrap().norm() < 1e-12);

        let rep = sample_verify(&spec, 20, 3, &GridSpec::default(), 4).unwrap();
        assert!(rep.failures > 0);
    }

    #[test]
    fn extremal_lif_operator_on_grid() {
        let q = extremal_presch(Extremal::Lif, 2.0).unwrap();
        let r = 0.999 * lif_radius(2.0, 2.0);
        let (min, _) = disc_min_real(|z| t_of(2.0, &q, z), r, &GridSpec::default()).unwrap();
        assert!(min > 0.0);
    }

    #[test]
    fn identity_suite_passes() {
        let checks = identity_checks();
        assert_eq!(checks.len(), 6);
        for check in &checks {
            assert!(check.passed, "{check:?}");
        }
    }

    #[test]
    fn remark_spot_value() {
        let a = 1.5;
        let expected = (6.5 - 42f64.sqrt()) / 0.5;
        assert!((expected - 0.038_518_603_2).abs() < 1e-10);
        assert!((lif_radius(a, 2.0) - expected).abs() < 1e-12);
    }
}
