use serde::Serialize;
use std::str::FromStr;

use crate::error::Error;
use crate::ode::StepControl;

/// Environment variable selecting a named tolerance profile.
pub const PROFILE_ENV: &str = "ROSS_ROBIN_TOLERANCE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceProfile {
    Default,
    Strict,
    Fast,
}

impl FromStr for ToleranceProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "default" => Ok(Self::Default),
            "strict" => Ok(Self::Strict),
            "fast" => Ok(Self::Fast),
            other => Err(Error::InvalidInput(format!("unknown tolerance profile '{other}'"))),
        }
    }
}

/// Numerical knobs shared by every solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub profile: ToleranceProfile,
    /// Relative tolerance of the embedded Runge–Kutta pair.
    pub ode_rtol: f64,
    /// Absolute tolerance, measured against the current solution magnitude.
    pub ode_atol: f64,
    /// Start radius of ball integrations (series data is imposed there).
    pub shoot_start: f64,
    pub eig_abs: f64,
    pub eig_rel: f64,
    pub max_iter: usize,
    /// Gauss–Legendre points per profile step for radial integrals.
    pub quad_points: usize,
    /// State norm that triggers rescaling during shooting.
    pub renorm: f64,
    /// Grid size of the finite-difference oracle (the second grid is twice this).
    pub oracle_n: usize,
}

impl Tolerances {
    pub fn for_profile(profile: ToleranceProfile) -> Self {
        let base = Self {
            profile,
            ode_rtol: 1e-10,
            ode_atol: 1e-10,
            shoot_start: 1e-6,
            eig_abs: 1e-12,
            eig_rel: 1e-12,
            max_iter: 200,
            quad_points: 8,
            renorm: 1e8,
            oracle_n: 10_000,
        };
        match profile {
            ToleranceProfile::Default => base,
            ToleranceProfile::Strict => Self {
                ode_rtol: 1e-12,
                ode_atol: 1e-12,
                shoot_start: 1e-7,
                eig_abs: 1e-13,
                eig_rel: 1e-13,
                quad_points: 12,
                oracle_n: 20_000,
                ..base
            },
            ToleranceProfile::Fast => Self {
                ode_rtol: 1e-8,
                ode_atol: 1e-8,
                shoot_start: 1e-5,
                eig_abs: 1e-10,
                eig_rel: 1e-10,
                quad_points: 6,
                oracle_n: 2_000,
                ..base
            },
        }
    }

    /// Profile named by [`PROFILE_ENV`], or the default profile when unset.
    pub fn from_env() -> Result<Self, Error> {
        match std::env::var(PROFILE_ENV) {
            Ok(v) => Ok(Self::for_profile(v.parse()?)),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn step_control(&self) -> StepControl {
        StepControl { rtol: self.ode_rtol, atol: self.ode_atol, ..StepControl::default() }
    }

    pub(crate) fn eig_xtol(&self, scale: f64) -> f64 {
        self.eig_abs.max(self.eig_rel * scale.abs())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::for_profile(ToleranceProfile::Default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_parse() {
        assert_eq!("strict".parse::<ToleranceProfile>().unwrap(), ToleranceProfile::Strict);
        assert_eq!("".parse::<ToleranceProfile>().unwrap(), ToleranceProfile::Default);
        assert!("loose".parse::<ToleranceProfile>().is_err());
        let s = Tolerances::for_profile(ToleranceProfile::Strict);
        assert!(s.ode_rtol < Tolerances::default().ode_rtol);
    }
}
