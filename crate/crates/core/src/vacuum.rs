//! Spectral density of a massless scalar field in a CPT-invariant α-vacuum,
//! the Kossakowski coefficients built from it, and a detailed-balance
//! diagnostic.
//!
//! Every exponential is combined in log domain. The ratio `T = Σ₋/Σ₊` is
//! obtained from the log-odds
//!
//! ```text
//! u = ln(𝒴(ω)/𝒴(−ω)) = βω + 2·ln(1 + e^{α−πω}) − 2·ln(1 + e^{α+πω})
//! ```
//!
//! as `T = tanh(u/2)`, never from the difference of two spectral densities.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::params::DetectorParams;
use crate::ratio::Ratio;

/// Largest natural log representable as a finite f64.
const LN_F64_MAX: f64 = 709.782_712_893_384;

/// Which side of the spectrum `𝒴(±ω)` is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i32(s: i32) -> Option<Self> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// `ln(1 + e^z)` without overflow.
pub(crate) fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn ln_a(p: &DetectorParams) -> f64 {
    2.0 * softplus(p.alpha() - PI * p.omega())
}

fn ln_b(p: &DetectorParams) -> f64 {
    2.0 * softplus(p.alpha() + PI * p.omega())
}

/// `ln 𝒴(±ω)`. Always finite for valid parameters.
pub fn ln_spectral_density(p: &DetectorParams, sign: Sign) -> f64 {
    let bw = p.beta() * p.omega();
    // ln(1 - e^{-βω}) and ln(1 - e^{2α})
    let ln_thermal = (-(-bw).exp_m1()).ln();
    let ln_norm = (-(2.0 * p.alpha()).exp_m1()).ln();
    let common = p.omega().ln() - (2.0 * PI).ln() - ln_thermal - ln_norm;
    match sign {
        Sign::Plus => common + ln_a(p),
        // (−ω)/(1 − e^{βω}) = ω e^{−βω}/(1 − e^{−βω})
        Sign::Minus => common + ln_b(p) - bw,
    }
}

/// `𝒴(±ω)`, the Fourier transform of the α-vacuum Wightman function.
pub fn spectral_density(p: &DetectorParams, sign: Sign) -> Result<f64> {
    let ln = ln_spectral_density(p, sign);
    if ln > LN_F64_MAX {
        return Err(Error::Overflow {
            quantity: match sign {
                Sign::Plus => "Y(+omega)",
                Sign::Minus => "Y(-omega)",
            },
            log_value: ln,
        });
    }
    Ok(ln.exp())
}

/// `ω → 0⁺` limit of the spectral density, `(1 + e^α)² / (2πβ(1 − e^{2α}))`.
pub fn spectral_density_at_zero(p: &DetectorParams) -> f64 {
    let a = p.alpha();
    let ln = 2.0 * softplus(a) - (2.0 * PI * p.beta()).ln() - (-(2.0 * a).exp_m1()).ln();
    ln.exp()
}

/// Log-odds `u = ln(𝒴(ω)/𝒴(−ω))`, so that `T = tanh(u/2)`.
pub fn log_odds(p: &DetectorParams) -> f64 {
    p.beta() * p.omega() + ln_a(p) - ln_b(p)
}

/// The relaxation ratio `T = Σ₋/Σ₊` with stable complements.
pub fn ratio(p: &DetectorParams) -> Ratio {
    Ratio::from_log_odds(log_odds(p))
}

/// `ln(1 − |T|)`. Finite for every valid parameter point, which is the
/// strict bound `|T| < 1` even where `T` itself rounds to ±1.
pub fn ln_one_minus_abs_ratio(p: &DetectorParams) -> f64 {
    let u = log_odds(p).abs();
    LN_2 - softplus(u)
}

/// `∂T/∂β = (ω/2)(1 − T²) = 2ABωe^{−βω}/(A + e^{−βω}B)²`.
pub fn dratio_dbeta(p: &DetectorParams) -> f64 {
    0.5 * p.omega() * ratio(p).one_minus_sq()
}

/// `ln ∂T/∂β`; finite everywhere, so `∂T/∂β > 0` strictly.
pub fn ln_dratio_dbeta(p: &DetectorParams) -> f64 {
    let u = log_odds(p).abs();
    // 1 − T² = 4e^{−|u|}/(1 + e^{−|u|})²
    (0.5 * p.omega()).ln() + 2.0 * LN_2 - u - 2.0 * (-u).exp().ln_1p()
}

/// Spectral density values and Kossakowski coefficients at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KossakowskiSpectrum {
    pub y_plus: f64,
    pub y_minus: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
    pub ratio: Ratio,
    pub log_odds: f64,
}

/// `Σ± = ½(𝒴(ω) ± 𝒴(−ω))` and `T = Σ₋/Σ₊`.
pub fn kossakowski(p: &DetectorParams) -> Result<KossakowskiSpectrum> {
    let y_plus = spectral_density(p, Sign::Plus)?;
    let y_minus = spectral_density(p, Sign::Minus)?;
    let sigma_plus = 0.5 * (y_plus + y_minus);
    if !sigma_plus.is_finite() {
        return Err(Error::Overflow {
            quantity: "Sigma_plus",
            log_value: ln_spectral_density(p, Sign::Plus).max(ln_spectral_density(p, Sign::Minus)),
        });
    }
    let u = log_odds(p);
    let ratio = Ratio::from_log_odds(u);
    Ok(KossakowskiSpectrum {
        y_plus,
        y_minus,
        sigma_plus,
        sigma_minus: sigma_plus * ratio.value(),
        ratio,
        log_odds: u,
    })
}

/// `|𝒴(−ω)/𝒴(ω) − e^{−βω}|`; zero exactly when the rates obey detailed
/// balance at inverse temperature β.
pub fn kms_defect(p: &DetectorParams) -> Result<f64> {
    let neg_u = -log_odds(p);
    if neg_u > LN_F64_MAX {
        return Err(Error::Overflow {
            quantity: "Y(-omega)/Y(omega)",
            log_value: neg_u,
        });
    }
    Ok((neg_u.exp() - (-p.beta() * p.omega()).exp()).abs())
}
