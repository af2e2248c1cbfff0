//! The relaxation ratio `T = κ₋/κ₊` together with its complements.
//!
//! Near `|T| = 1` the differences `1 − T` and `1 + T` carry all the physics
//! (they set the small eigenvalues of the equilibrium state), so they are
//! stored alongside `T` rather than recomputed by subtraction.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    value: f64,
    one_minus: f64,
    one_plus: f64,
}

impl Ratio {
    /// From a plain value with `|t| ≤ 1`.
    pub fn new(t: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::OutOfDomain {
                field: "T",
                value: t,
                allowed: "[-1, 1]",
            });
        }
        Ok(Self {
            value: t,
            one_minus: 1.0 - t,
            one_plus: 1.0 + t,
        })
    }

    /// `T = tanh(u/2)` from the log-odds `u = ln((1 + T)/(1 − T))`.
    pub fn from_log_odds(u: f64) -> Self {
        // 1 - T = 2/(1 + e^u), 1 + T = 2/(1 + e^-u)
        let (one_minus, one_plus) = if u >= 0.0 {
            let e = (-u).exp();
            (2.0 * e / (1.0 + e), 2.0 / (1.0 + e))
        } else {
            let e = u.exp();
            (2.0 / (1.0 + e), 2.0 * e / (1.0 + e))
        };
        Self {
            value: (0.5 * u).tanh(),
            one_minus,
            one_plus,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// `1 − T`
    pub fn one_minus(&self) -> f64 {
        self.one_minus
    }

    /// `1 + T`
    pub fn one_plus(&self) -> f64 {
        self.one_plus
    }

    /// `1 − T²`
    pub fn one_minus_sq(&self) -> f64 {
        self.one_minus * self.one_plus
    }

    pub fn sq(&self) -> f64 {
        self.value * self.value
    }
}

impl TryFrom<f64> for Ratio {
    type Error = Error;

    fn try_from(t: f64) -> Result<Self> {
        Ratio::new(t)
    }
}
