//! Physical parameters of the two-detector model.

use crate::error::{Error, Result};

/// Operating point of the detector pair.
///
/// `alpha` is stored with its physical (negative) sign; user-facing output
/// reports `|alpha|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    omega: f64,
    beta: f64,
    alpha: f64,
    tau: f64,
}

pub const TAU_MIN: f64 = -3.0;
pub const TAU_MAX: f64 = 1.0;

impl DetectorParams {
    /// Validates the four knobs. Out-of-range values are rejected, never clamped.
    pub fn new(omega: f64, beta: f64, alpha: f64, tau: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::OutOfDomain {
                field: "omega",
                value: omega,
                allowed: "(0, inf)",
            });
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::OutOfDomain {
                field: "beta",
                value: beta,
                allowed: "(0, inf)",
            });
        }
        if !(alpha < 0.0 && alpha.is_finite()) {
            return Err(Error::OutOfDomain {
                field: "alpha",
                value: alpha,
                allowed: "(-inf, 0)",
            });
        }
        check_tau(tau)?;
        Ok(Self {
            omega,
            beta,
            alpha,
            tau,
        })
    }

    /// Same as [`DetectorParams::new`] but takes `|alpha|`, as the CLI does.
    pub fn with_alpha_abs(omega: f64, beta: f64, alpha_abs: f64, tau: f64) -> Result<Self> {
        if !(alpha_abs > 0.0 && alpha_abs.is_finite()) {
            return Err(Error::OutOfDomain {
                field: "alpha_abs",
                value: alpha_abs,
                allowed: "(0, inf)",
            });
        }
        Self::new(omega, beta, -alpha_abs, tau)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_abs(&self) -> f64 {
        -self.alpha
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Copy with a different inverse temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.omega, beta, self.alpha, self.tau)
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.omega, self.beta, self.alpha, tau)
    }
}

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if (TAU_MIN..=TAU_MAX).contains(&tau) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            field: "tau",
            value: tau,
            allowed: "[-3, 1]",
        })
    }
}

/// Free-function form of [`DetectorParams::new`].
pub fn validate(omega: f64, beta: f64, alpha: f64, tau: f64) -> Result<DetectorParams> {
    DetectorParams::new(omega, beta, alpha, tau)
}
