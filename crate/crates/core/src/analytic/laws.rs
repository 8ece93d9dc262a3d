use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::normal::std_normal_sf;
use super::quad;
use crate::error::{require_open_unit, require_positive, Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Density of the first hitting time of zero by Brownian motion started at `x`.
pub fn tau_density(x: f64, t: f64) -> Result<f64> {
    require_positive("x", x)?;
    require_positive("t", t)?;
    Ok(x * (-x * x / (2.0 * t)).exp() / (SQRT_2PI * t * t.sqrt()))
}

/// `P(τ(x) ≤ t) = 2 Φ̄(x / √t)`.
pub fn tau_cdf(x: f64, t: f64) -> Result<f64> {
    require_positive("x", x)?;
    require_positive("t", t)?;
    Ok(2.0 * std_normal_sf(x / t.sqrt()))
}

fn check_v_args(x: f64, u: f64) -> Result<()> {
    require_positive("x", x)?;
    if u == 0.0 {
        return Err(Error::DegenerateLaw { u, atom: x });
    }
    if u == 1.0 {
        return Err(Error::DegenerateLaw { u, atom: 0.0 });
    }
    require_open_unit("u", u)?;
    Ok(())
}

/// Density of `V_{x,u}`, the path to zero observed at fraction `u` of its
/// hitting time.
pub fn v_density(x: f64, u: f64, y: f64) -> Result<f64> {
    check_v_args(x, u)?;
    require_positive("y", y)?;
    Ok(v_density_unchecked(x, u, y))
}

#[inline]
pub(crate) fn v_density_unchecked(x: f64, u: f64, y: f64) -> f64 {
    let c = 1.0 - u;
    let uy2 = u * y * y;
    let dm = y - x;
    let dp = y + x;
    4.0 * (u * c).sqrt() * x * y * y / (PI * (uy2 + c * dm * dm) * (uy2 + c * dp * dp))
}

/// Limit of `y² v_density(x, u, y)` as `y → ∞`.
pub fn v_tail_constant(x: f64, u: f64) -> Result<f64> {
    check_v_args(x, u)?;
    Ok(4.0 * x * (u * (1.0 - u)).sqrt() / PI)
}

/// `P(sup V_{x,·} > y)`.
pub fn max_tail(x: f64, y: f64) -> Result<f64> {
    require_positive("x", x)?;
    if y.is_nan() {
        return Err(Error::domain("y", "not NaN", y));
    }
    Ok(if y > x { x / y } else { 1.0 })
}

/// Density of `τ(1)^{1/2}`.
pub fn sqrt_tau_density(y: f64) -> Result<f64> {
    require_positive("y", y)?;
    Ok(SQRT_2_OVER_PI * (-0.5 / (y * y)).exp() / (y * y))
}

/// Large-`z` behaviour of the density of `V_{x,u} / y` given that the path
/// maximum exceeds `y`.
pub fn q_asymptote(u: f64, z: f64) -> Result<f64> {
    require_open_unit("u", u)?;
    require_positive("z", z)?;
    Ok(4.0 * (u * (1.0 - u)).sqrt() / (PI * z * z))
}

/// `∫_0^∞ u Φ̄(u) du`, integrated on `[0, 10]`. The neglected tail is below
/// `Φ̄(10)/2 < 4e-24`.
pub fn mills_integral_check() -> f64 {
    quad::integrate(|u| u * std_normal_sf(u), 0.0, 10.0, 1e-13).expect("smooth integrand")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    TauDensity,
    VDensity,
    VTailAsymptote,
    MaxTail,
    SqrtTauDensity,
    QAsymptote,
}

impl Law {
    pub const ALL: [Law; 6] = [
        Law::TauDensity,
        Law::VDensity,
        Law::VTailAsymptote,
        Law::MaxTail,
        Law::SqrtTauDensity,
        Law::QAsymptote,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::TauDensity => "tau_density",
            Law::VDensity => "v_density",
            Law::VTailAsymptote => "v_tail_asymptote",
            Law::MaxTail => "max_tail",
            Law::SqrtTauDensity => "sqrt_tau_density",
            Law::QAsymptote => "q_asymptote",
        }
    }

    fn needs_u(self) -> bool {
        matches!(self, Law::VDensity | Law::VTailAsymptote | Law::QAsymptote)
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let norm = s.replace('-', "_");
        Law::ALL
            .into_iter()
            .find(|l| l.name() == norm)
            .ok_or_else(|| format!("unknown law {s:?}"))
    }
}

/// One of the analytic laws with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub law: Law,
    pub x: f64,
    pub u: Option<f64>,
    /// Conditioning threshold, only meaningful for `q_asymptote`.
    pub y: Option<f64>,
}

impl DensitySpec {
    pub fn new(law: Law, x: f64, u: Option<f64>, y: Option<f64>) -> Result<Self> {
        let spec = DensitySpec { law, x, u, y };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("x", self.x)?;
        if self.law.needs_u() {
            match self.u {
                Some(u) if self.law == Law::QAsymptote => {
                    require_open_unit("u", u)?;
                }
                Some(u) => check_v_args(self.x, u)?,
                None => return Err(Error::domain("u", "required for this law", f64::NAN)),
            }
        }
        if let Some(y) = self.y {
            require_positive("y", y)?;
            if self.law == Law::QAsymptote && y <= self.x {
                return Err(Error::domain("y", "y > x", y));
            }
        }
        Ok(())
    }

    /// The law evaluated at `arg`: a time for `tau_density`, a level for
    /// `v_density`, `v_tail_asymptote`, `max_tail` and `sqrt_tau_density`, and
    /// a rescaled level `z` for `q_asymptote`.
    pub fn eval(&self, arg: f64) -> Result<f64> {
        let u = || {
            self.u
                .ok_or_else(|| Error::domain("u", "required for this law", f64::NAN))
        };
        match self.law {
            Law::TauDensity => tau_density(self.x, arg),
            Law::VDensity => v_density(self.x, u()?, arg),
            Law::VTailAsymptote => {
                require_positive("y", arg)?;
                Ok(v_tail_constant(self.x, u()?)? / (arg * arg))
            }
            Law::MaxTail => max_tail(self.x, arg),
            Law::SqrtTauDensity => {
                // the law of τ(x)^{1/2} is x times the law of τ(1)^{1/2}
                require_positive("y", arg)?;
                Ok(sqrt_tau_density(arg / self.x)? / self.x)
            }
            Law::QAsymptote => q_asymptote(u()?, arg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tau_density_reference() {
        assert_relative_eq!(
            tau_density(1.0, 1.0).unwrap(),
            0.241_970_724_519_143_37,
            max_relative = 1e-14
        );
        assert!(tau_density(0.0, 1.0).is_err());
        assert!(tau_density(1.0, -1.0).is_err());
        // t^{-3/2} decay
        let r = tau_density(1.0, 1e8).unwrap() / tau_density(1.0, 4e8).unwrap();
        assert!((r - 8.0).abs() < 1e-6);
    }

    #[test]
    fn tau_cdf_reference() {
        assert_relative_eq!(
            tau_cdf(1.0, 1.0).unwrap(),
            0.317_310_507_862_914_15,
            max_relative = 1e-13
        );
        assert!(tau_cdf(1.0, 1e-6).unwrap() < 1e-100);
        assert!(tau_cdf(1.0, 1e12).unwrap() > 1.0 - 1e-6);
    }

    #[test]
    fn tau_cdf_matches_integrated_density() {
        let f = |t: f64| {
            if t > 0.0 {
                tau_density(1.0, t).unwrap()
            } else {
                0.0
            }
        };
        let v = quad::integrate(f, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - tau_cdf(1.0, 1.0).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn tau_cdf_derivative() {
        let mut t = 0.1;
        while t <= 10.0 {
            let h = 1e-4 * t;
            let fd = (tau_cdf(1.0, t + h).unwrap() - tau_cdf(1.0, t - h).unwrap()) / (2.0 * h);
            let p = tau_density(1.0, t).unwrap();
            assert!(((fd - p) / p).abs() < 1e-5, "t={t}");
            t *= 1.1;
        }
    }

    #[test]
    fn v_density_reference() {
        assert_relative_eq!(
            v_density(1.0, 0.5, 1.0).unwrap(),
            8.0 / (5.0 * PI),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            v_density(2.0, 0.3, 1.4).unwrap(),
            0.5 * v_density(1.0, 0.3, 0.7).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn degenerate_endpoints() {
        assert!(matches!(
            v_density(1.0, 0.0, 1.0),
            Err(Error::DegenerateLaw { atom, .. }) if atom == 1.0
        ));
        assert!(matches!(
            v_density(2.0, 1.0, 1.0),
            Err(Error::DegenerateLaw { atom, .. }) if atom == 0.0
        ));
        assert!(matches!(
            v_density(1.0, 1.5, 1.0),
            Err(Error::Domain { .. })
        ));
        assert!(v_tail_constant(1.0, 0.0).is_err());
    }

    #[test]
    fn tail_constant() {
        assert_relative_eq!(
            v_tail_constant(1.0, 0.5).unwrap(),
            2.0 / PI,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            v_tail_constant(3.0, 0.2).unwrap(),
            3.0 * v_tail_constant(1.0, 0.2).unwrap(),
            max_relative = 1e-15
        );
        assert!(v_tail_constant(1.0, 1e-12).unwrap() < 1e-5);
        let y = 1e3;
        let r = y * y * v_density(1.0, 0.5, y).unwrap() / (2.0 / PI);
        assert!((r - 1.0).abs() < 5e-3);
    }

    #[test]
    fn max_tail_values() {
        assert_eq!(max_tail(1.0, 2.0).unwrap(), 0.5);
        assert_eq!(max_tail(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(max_tail(2.0, 8.0).unwrap(), 0.25);
        assert_eq!(max_tail(1.0, -3.0).unwrap(), 1.0);
    }

    #[test]
    fn sqrt_tau_reference() {
        assert_relative_eq!(
            sqrt_tau_density(1.0).unwrap(),
            0.483_941_449_038_286_73,
            max_relative = 1e-14
        );
        for &y in &[0.5, 1.0, 2.0] {
            let a = sqrt_tau_density(y).unwrap();
            let b = 2.0 * y * tau_density(1.0, y * y).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        assert!(sqrt_tau_density(0.0).is_err());
    }

    #[test]
    fn q_asymptote_values() {
        assert_relative_eq!(
            q_asymptote(0.5, 1.0).unwrap(),
            2.0 / PI,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            q_asymptote(0.5, 2.0).unwrap(),
            0.5 / PI,
            max_relative = 1e-15
        );
        assert!(q_asymptote(0.0, 1.0).is_err());
        assert!(q_asymptote(0.5, 0.0).is_err());
    }

    #[test]
    fn mills() {
        assert!((mills_integral_check() - 0.25).abs() < 1e-8);
        // truncation beyond 10 is below the Gaussian tail bound
        let tail = quad::integrate_to_infinity(|u| u * std_normal_sf(u), 10.0, 1e-30).unwrap();
        assert!(tail < 1e-20);
        assert_eq!(0.0 * std_normal_sf(0.0), 0.0);
    }

    #[test]
    fn spec_eval_and_validation() {
        let s = DensitySpec::new(Law::VDensity, 1.0, Some(0.5), None).unwrap();
        assert_relative_eq!(s.eval(1.0).unwrap(), 8.0 / (5.0 * PI), max_relative = 1e-14);
        assert!(DensitySpec::new(Law::VDensity, 1.0, None, None).is_err());
        assert!(DensitySpec::new(Law::VDensity, 1.0, Some(1.0), None).is_err());
        assert!(DensitySpec::new(Law::QAsymptote, 1.0, Some(0.5), Some(0.5)).is_err());
        assert!(DensitySpec::new(Law::TauDensity, -1.0, None, None).is_err());
        let s = DensitySpec::new(Law::SqrtTauDensity, 2.0, None, None).unwrap();
        // x τ(1)^{1/2} has density f(y/x)/x
        assert_relative_eq!(
            s.eval(2.0).unwrap(),
            sqrt_tau_density(1.0).unwrap() / 2.0,
            max_relative = 1e-15
        );
        for l in Law::ALL {
            assert_eq!(l.name().parse::<Law>().unwrap(), l);
        }
        assert_eq!("v-density".parse::<Law>().unwrap(), Law::VDensity);
    }
}
