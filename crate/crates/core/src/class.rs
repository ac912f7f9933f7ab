//! Function classes and their parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible aperture is `1 + APERTURE_FLOOR`.
pub const APERTURE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    /// `Re f' > 0`.
    Pprime,
    /// `Re f' > 0` with fixed second coefficient `a = f''(0)/2`.
    PprimeFixed,
    /// Linear-invariant family of order `alpha`.
    Lif,
    /// Starlike of order 1/2.
    StarlikeHalf,
    /// `|(z/f)^2 f' - 1| < lambda` with `f''(0) = 0`.
    U0,
    /// Meromorphic analogue with a simple pole at `p`; concavity.
    Vp,
    /// Same class as `Vp`; convexity.
    VpConvex,
}

impl ClassKind {
    pub const ALL: [ClassKind; 7] = [
        ClassKind::Pprime,
        ClassKind::PprimeFixed,
        ClassKind::Lif,
        ClassKind::StarlikeHalf,
        ClassKind::U0,
        ClassKind::Vp,
        ClassKind::VpConvex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Pprime => "pprime",
            ClassKind::PprimeFixed => "pprime-fixed",
            ClassKind::Lif => "lif",
            ClassKind::StarlikeHalf => "starlike-half",
            ClassKind::U0 => "u0",
            ClassKind::Vp => "vp",
            ClassKind::VpConvex => "vp-convex",
        }
    }

    /// Parameters this class takes, in canonical order.
    pub fn params(self) -> &'static [Param] {
        match self {
            ClassKind::Pprime | ClassKind::StarlikeHalf => &[Param::Aperture],
            ClassKind::PprimeFixed => &[Param::Aperture, Param::SecondCoeff],
            ClassKind::Lif => &[Param::Aperture, Param::Alpha],
            ClassKind::U0 => &[Param::Aperture, Param::Lambda],
            ClassKind::Vp | ClassKind::VpConvex => &[Param::Lambda, Param::Pole],
        }
    }

    /// Meromorphic classes, verified through `P_f` or convexity rather than `T_f`.
    pub fn is_meromorphic(self) -> bool {
        matches!(self, ClassKind::Vp | ClassKind::VpConvex)
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::parameter("class", format!("unknown class `{s}`")))
    }
}

/// Class parameter, named after its conventional symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Param {
    /// `A`, the opening angle at infinity is at most `π A`.
    #[serde(rename = "A")]
    Aperture,
    /// `a = f''(0)/2`.
    #[serde(rename = "a")]
    SecondCoeff,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "lambda")]
    Lambda,
    /// Pole location `p`.
    #[serde(rename = "p")]
    Pole,
}

impl Param {
    pub const ALL: [Param; 5] = [
        Param::Aperture,
        Param::SecondCoeff,
        Param::Alpha,
        Param::Lambda,
        Param::Pole,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Aperture => "A",
            Param::SecondCoeff => "a",
            Param::Alpha => "alpha",
            Param::Lambda => "lambda",
            Param::Pole => "p",
        }
    }

    /// Checks `value` against the legal range of this parameter.
    pub fn validate(self, value: f64) -> Result<f64> {
        let ok = match self {
            Param::Aperture => value > 1.0 + APERTURE_FLOOR && value <= 2.0,
            Param::SecondCoeff => (0.0..=1.0).contains(&value),
            Param::Alpha => value >= 1.0 && value.is_finite(),
            Param::Lambda => value > 0.0 && value <= 1.0,
            Param::Pole => value > 0.0 && value < 1.0,
        };
        if ok {
            Ok(value)
        } else {
            let range = match self {
                Param::Aperture => "(1, 2]",
                Param::SecondCoeff => "[0, 1]",
                Param::Alpha => "[1, inf)",
                Param::Lambda => "(0, 1]",
                Param::Pole => "(0, 1)",
            };
            Err(Error::parameter(
                self.name(),
                format!("{value} is outside {range}"),
            ))
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::parameter("param", format!("unknown parameter `{s}`")))
    }
}

/// Loose parameter set, as collected from a command line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub aperture: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

impl Params {
    pub fn get(&self, param: Param) -> Option<f64> {
        match param {
            Param::Aperture => self.aperture,
            Param::SecondCoeff => self.a,
            Param::Alpha => self.alpha,
            Param::Lambda => self.lambda,
            Param::Pole => self.p,
        }
    }

    pub fn set(&mut self, param: Param, value: Option<f64>) {
        let slot = match param {
            Param::Aperture => &mut self.aperture,
            Param::SecondCoeff => &mut self.a,
            Param::Alpha => &mut self.alpha,
            Param::Lambda => &mut self.lambda,
            Param::Pole => &mut self.p,
        };
        *slot = value;
    }
}

/// A validated class together with exactly the parameters it uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ClassSpec {
    kind: ClassKind,
    params: Params,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    kind: ClassKind,
    #[serde(flatten)]
    params: Params,
}

impl TryFrom<RawSpec> for ClassSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        ClassSpec::from_params(raw.kind, raw.params)
    }
}

impl From<ClassSpec> for RawSpec {
    fn from(spec: ClassSpec) -> Self {
        RawSpec {
            kind: spec.kind,
            params: spec.params,
        }
    }
}

impl ClassSpec {
    /// Builds a spec, requiring every parameter of `kind` and rejecting the rest.
    pub fn from_params(kind: ClassKind, params: Params) -> Result<Self> {
        let needed = kind.params();
        let mut clean = Params::default();
        for param in Param::ALL {
            match (needed.contains(&param), params.get(param)) {
                (true, Some(v)) => clean.set(param, Some(param.validate(v)?)),
                (true, None) => {
                    return Err(Error::parameter(
                        param.name(),
                        format!("required by class {kind}"),
                    ))
                }
                (false, Some(_)) => {
                    return Err(Error::parameter(
                        param.name(),
                        format!("not used by class {kind}"),
                    ))
                }
                (false, None) => {}
            }
        }
        Ok(ClassSpec {
            kind,
            params: clean,
        })
    }

    pub fn pprime(aperture: f64) -> Result<Self> {
        Self::from_params(
            ClassKind::Pprime,
            Params {
                aperture: Some(aperture),
                ..Params::default()
            },
        )
    }

    pub fn pprime_fixed(aperture: f64, a: f64) -> Result<Self> {
        Self::from_params(
            ClassKind::PprimeFixed,
            Params {
                aperture: Some(aperture),
                a: Some(a),
                ..Params::default()
            },
        )
    }

    pub fn lif(aperture: f64, alpha: f64) -> Result<Self> {
        Self::from_params(
            ClassKind::Lif,
            Params {
                aperture: Some(aperture),
                alpha: Some(alpha),
                ..Params::default()
            },
        )
    }

    pub fn starlike_half(aperture: f64) -> Result<Self> {
        Self::from_params(
            ClassKind::StarlikeHalf,
            Params {
                aperture: Some(aperture),
                ..Params::default()
            },
        )
    }

    pub fn u0(aperture: f64, lambda: f64) -> Result<Self> {
        Self::from_params(
            ClassKind::U0,
            Params {
                aperture: Some(aperture),
                lambda: Some(lambda),
                ..Params::default()
            },
        )
    }

    pub fn vp(lambda: f64, p: f64) -> Result<Self> {
        Self::from_params(
            ClassKind::Vp,
            Params {
                lambda: Some(lambda),
                p: Some(p),
                ..Params::default()
            },
        )
    }

    pub fn vp_convex(lambda: f64, p: f64) -> Result<Self> {
        Self::from_params(
            ClassKind::VpConvex,
            Params {
                lambda: Some(lambda),
                p: Some(p),
                ..Params::default()
            },
        )
    }

    /// Same class with one parameter replaced.
    pub fn with_param(&self, param: Param, value: f64) -> Result<Self> {
        let mut params = self.params;
        params.set(param, Some(value));
        Self::from_params(self.kind, params)
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn get(&self, param: Param) -> Option<f64> {
        self.params.get(param)
    }

    fn require(&self, param: Param) -> f64 {
        self.params
            .get(param)
            .unwrap_or_else(|| panic!("class {} has no parameter {param}", self.kind))
    }

    /// `A`. Panics for classes without an aperture (`vp`, `vp-convex`).
    pub fn aperture(&self) -> f64 {
        self.require(Param::Aperture)
    }

    /// `a`. Panics unless the class is `pprime-fixed`.
    pub fn second_coeff(&self) -> f64 {
        self.require(Param::SecondCoeff)
    }

    /// `alpha`. Panics unless the class is `lif`.
    pub fn alpha(&self) -> f64 {
        self.require(Param::Alpha)
    }

    /// `lambda`. Panics unless the class is `u0`, `vp` or `vp-convex`.
    pub fn lambda(&self) -> f64 {
        self.require(Param::Lambda)
    }

    /// Pole location `p`. Panics unless the class is `vp` or `vp-convex`.
    pub fn pole(&self) -> f64 {
        self.require(Param::Pole)
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for param in self.kind.params() {
            write!(f, " {}={}", param, self.require(*param))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_round_trip_through_names() {
        for kind in ClassKind::ALL {
            assert_eq!(kind.name().parse::<ClassKind>().unwrap(), kind);
        }
        assert!("koebe".parse::<ClassKind>().is_err());
    }

    #[test]
    fn ranges_are_enforced() {
        assert!(ClassSpec::pprime(2.0).is_ok());
        assert!(ClassSpec::pprime(1.0).is_err());
        assert!(ClassSpec::pprime(1.0 + 1e-10).is_err());
        assert!(ClassSpec::pprime(2.0 + 1e-12).is_err());
        assert!(ClassSpec::pprime(f64::NAN).is_err());
        assert!(ClassSpec::pprime_fixed(2.0, 1.0).is_ok());
        assert!(ClassSpec::pprime_fixed(2.0, -0.1).is_err());
        assert!(ClassSpec::lif(2.0, 0.5).is_err());
        assert!(ClassSpec::lif(2.0, f64::INFINITY).is_err());
        assert!(ClassSpec::u0(2.0, 0.0).is_err());
        assert!(ClassSpec::u0(2.0, 1.0).is_ok());
        assert!(ClassSpec::vp(1.0, 1.0).is_err());
        assert!(ClassSpec::vp(1.0, 0.0).is_err());
    }

    #[test]
    fn exactly_the_relevant_parameters() {
        let err = ClassSpec::from_params(
            ClassKind::Pprime,
            Params {
                aperture: Some(2.0),
                lambda: Some(0.5),
                ..Params::default()
            },
        )
        .unwrap_err();
        assert_eq!(err.parameter_name(), Some("lambda"));

        let err = ClassSpec::from_params(ClassKind::Vp, Params::default()).unwrap_err();
        assert_eq!(err.parameter_name(), Some("lambda"));
    }

    #[test]
    fn out_of_range_names_the_parameter() {
        let err = ClassSpec::vp(0.5, 1.5).unwrap_err();
        assert_eq!(err.parameter_name(), Some("p"));
    }

    #[test]
    fn with_param_revalidates() {
        let spec = ClassSpec::vp(0.5, 0.3).unwrap();
        assert_eq!(spec.with_param(Param::Pole, 0.6).unwrap().pole(), 0.6);
        assert!(spec.with_param(Param::Pole, 1.2).is_err());
        assert!(spec.with_param(Param::Aperture, 2.0).is_err());
    }

    #[test]
    fn display_lists_parameters() {
        let spec = ClassSpec::u0(2.0, 0.5).unwrap();
        assert_eq!(spec.to_string(), "u0 A=2 lambda=0.5");
    }
}
