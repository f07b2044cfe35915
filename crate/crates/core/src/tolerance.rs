use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Environment variable read by the CLI to override the default `eps_geom`.
pub const EPS_GEOM_ENV: &str = "MINK_CENTERS_EPS_GEOM";

/// Numerical tolerances shared by every predicate and solver.
///
/// `eps_geom` is the incidence/equality tolerance. It is always applied
/// relative to a scale, i.e. as `eps_geom * max(1, scale)` or
/// `eps_geom * scale` where the instance size is known. `eps_opt` is the
/// convergence tolerance of the one-dimensional and simplex-descent solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub eps_geom: f64,
    pub eps_opt: f64,
    pub max_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_geom: 1e-9,
            eps_opt: 1e-12,
            max_iters: 20_000,
        }
    }
}

impl Tolerances {
    pub fn new(eps_geom: f64, eps_opt: f64, max_iters: usize) -> Result<Self> {
        let tol = Self {
            eps_geom,
            eps_opt,
            max_iters,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn with_eps_geom(mut self, eps_geom: f64) -> Result<Self> {
        self.eps_geom = eps_geom;
        if self.eps_opt > eps_geom {
            self.eps_opt = eps_geom;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_geom.is_finite() && self.eps_geom > 0.0) {
            return Err(GeomError::InvalidTolerances(format!(
                "eps_geom must be positive, got {}",
                self.eps_geom
            )));
        }
        if !(self.eps_opt.is_finite() && self.eps_opt > 0.0) {
            return Err(GeomError::InvalidTolerances(format!(
                "eps_opt must be positive, got {}",
                self.eps_opt
            )));
        }
        if self.eps_opt > self.eps_geom {
            return Err(GeomError::InvalidTolerances(format!(
                "eps_opt ({}) must not exceed eps_geom ({})",
                self.eps_opt, self.eps_geom
            )));
        }
        if self.max_iters == 0 {
            return Err(GeomError::InvalidTolerances(
                "max_iters must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Defaults, with `eps_geom` taken from [`EPS_GEOM_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(EPS_GEOM_ENV) {
            Ok(raw) => {
                let eps: f64 = raw.trim().parse().map_err(|_| {
                    GeomError::InvalidTolerances(format!("{EPS_GEOM_ENV}={raw:?} is not a number"))
                })?;
                Self::default().with_eps_geom(eps)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    /// `eps_geom * max(1, scale)`.
    #[inline]
    pub fn scaled(&self, scale: f64) -> f64 {
        self.eps_geom * scale.abs().max(1.0)
    }
}
