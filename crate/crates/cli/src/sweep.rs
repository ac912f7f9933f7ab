//! CSV parameter sweeps over `radius_for`.

use std::fmt::Write as _;
use std::path::PathBuf;

use conrad_core::{radius_for, ClassKind, ClassSpec, Param, Params, RadiusResult};

/// Sweep of one class parameter over `[from, to]` in `steps` equal steps.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kind: ClassKind,
    /// Values of the other parameters; the swept one is overwritten per step.
    pub template: Params,
    pub param: Param,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub output_path: PathBuf,
}

pub const CSV_HEADER: &str = "param,value,r1,r2,method";

impl SweepConfig {
    /// Parameter values visited, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    /// Class spec at every step; fails on the first illegal one.
    pub fn specs(&self) -> conrad_core::Result<Vec<ClassSpec>> {
        if self.steps < 2 {
            return Err(conrad_core::Error::Parameter {
                name: "steps",
                reason: format!("{} must be at least 2", self.steps),
            });
        }
        self.values()
            .into_iter()
            .map(|v| {
                let mut params = self.template;
                params.set(self.param, Some(v));
                ClassSpec::from_params(self.kind, params)
            })
            .collect()
    }
}

/// `%.12g`-style formatting: 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

fn row(out: &mut String, x: f64, r: &RadiusResult) {
    let opt = |v: Option<f64>| v.map(format_sig12).unwrap_or_default();
    writeln!(
        out,
        "{},{},{},{},{}",
        format_sig12(x),
        format_sig12(r.value),
        opt(r.r1),
        opt(r.r2),
        r.method.name()
    )
    .expect("writing to a String");
}

/// Renders the sweep as CSV text.
pub fn sweep_csv(config: &SweepConfig) -> conrad_core::Result<String> {
    let specs = config.specs()?;
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (x, spec) in config.values().into_iter().zip(&specs) {
        row(&mut out, x, &radius_for(spec)?);
    }
    Ok(out)
}

#[derive(Debug)]
pub enum SweepError {
    Radius(conrad_core::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::Radius(e) => write!(f, "{e}"),
            SweepError::Io(e) => write!(f, "cannot write sweep output: {e}"),
        }
    }
}

impl std::error::Error for SweepError {}

/// Writes the CSV to `config.output_path` and returns the number of rows.
pub fn emit_sweep(config: &SweepConfig) -> Result<usize, SweepError> {
    let csv = sweep_csv(config).map_err(SweepError::Radius)?;
    std::fs::write(&config.output_path, csv).map_err(SweepError::Io)?;
    Ok(config.steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(
        kind: ClassKind,
        template: Params,
        param: Param,
        from: f64,
        to: f64,
        steps: usize,
    ) -> SweepConfig {
        SweepConfig {
            kind,
            template,
            param,
            from,
            to,
            steps,
            output_path: PathBuf::from("unused.csv"),
        }
    }

    fn column(csv: &str, idx: usize) -> Vec<f64> {
        csv.lines()
            .skip(1)
            .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
            .collect()
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.105_572_809_000_084_1), "0.105572809000");
        assert_eq!(format_sig12(1.0), "1.00000000000");
        assert_eq!(format_sig12(2.0 - 3f64.sqrt()), "0.267949192431");
        assert_eq!(format_sig12(1.5e-7), "1.50000000000e-7");
        assert_eq!(format_sig12(0.0), "0");
    }

    #[test]
    fn values_include_endpoints() {
        let c = config(
            ClassKind::Pprime,
            Params::default(),
            Param::Aperture,
            1.1,
            2.0,
            10,
        );
        let v = c.values();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 1.1);
        assert_eq!(v[9], 2.0);
    }

    #[test]
    fn pprime_sweep_increases() {
        let c = config(
            ClassKind::Pprime,
            Params::default(),
            Param::Aperture,
            1.1,
            2.0,
            10,
        );
        let csv = sweep_csv(&c).unwrap();
        assert!(csv.starts_with("param,value,r1,r2,method\n"));
        let values = column(&csv, 1);
        assert_eq!(values.len(), 10);
        assert!(values.windows(2).all(|w| w[1] > w[0]));
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",,,closed-form")));
    }

    #[test]
    fn lif_sweep_decreases_in_alpha() {
        let t = Params {
            aperture: Some(2.0),
            ..Params::default()
        };
        let c = config(ClassKind::Lif, t, Param::Alpha, 1.0, 3.0, 9);
        let values = column(&sweep_csv(&c).unwrap(), 1);
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn vp_sweep_stays_below_pole() {
        let t = Params {
            lambda: Some(0.5),
            ..Params::default()
        };
        let c = config(ClassKind::Vp, t, Param::Pole, 0.1, 0.9, 9);
        let csv = sweep_csv(&c).unwrap();
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let p: f64 = cols[0].parse().unwrap();
            let v: f64 = cols[1].parse().unwrap();
            assert!(v < p, "{line}");
            assert_eq!(cols[4], "min-of-two");
        }
    }

    #[test]
    fn illegal_range_is_rejected() {
        let c = config(
            ClassKind::Pprime,
            Params::default(),
            Param::Aperture,
            0.5,
            2.0,
            5,
        );
        assert_eq!(sweep_csv(&c).unwrap_err().parameter_name(), Some("A"));
        let c = config(
            ClassKind::Pprime,
            Params::default(),
            Param::Aperture,
            1.5,
            2.0,
            1,
        );
        assert_eq!(sweep_csv(&c).unwrap_err().parameter_name(), Some("steps"));
    }

    #[test]
    fn sweep_is_deterministic() {
        let t = Params {
            aperture: Some(1.7),
            ..Params::default()
        };
        let c = config(ClassKind::U0, t, Param::Lambda, 0.1, 1.0, 12);
        assert_eq!(sweep_csv(&c).unwrap(), sweep_csv(&c).unwrap());
    }
}
