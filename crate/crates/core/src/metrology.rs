//! Quantum Fisher information for estimating the inverse temperature β.
//!
//! The eigenbasis of the equilibrium state does not depend on β, so only the
//! classical term `Σᵢ (∂_β μᵢ)²/μᵢ` survives. It is evaluated three ways:
//! from analytic eigenvalue derivatives ([`qfi_spectral`], normative), from
//! the closed form in `T` and `∂_β T` ([`qfi_closed`]), and from central
//! differences of the eigenvalues ([`qfi_fd`]).

use crate::equilibrium::spectral_at;
use crate::error::{Error, Result};
use crate::params::DetectorParams;
use crate::vacuum::{dratio_dbeta, ratio};

/// Relative step used by [`qfi_fd_default`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Upper bound on `ω·h` for the default step. The eigenvalues vary on the
/// scale `1/ω` in β, so a purely relative step loses second-order accuracy
/// once `βω` is large.
pub const MAX_FD_PHASE: f64 = 1e-4;

/// `h = min(1e-5·β, 1e-4/ω)`.
pub fn default_fd_step(p: &DetectorParams) -> f64 {
    (DEFAULT_FD_STEP * p.beta()).min(MAX_FD_PHASE / p.omega())
}

/// Number of log-spaced points in the coarse peak scan.
pub const PEAK_SCAN_POINTS: usize = 64;

/// Fisher information with respect to β, in units of `1/β²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QfiValue(pub f64);

impl QfiValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `(μ')²/μ` written as `μ'·(μ'/μ)` to avoid underflow of the square.
/// A vanishing eigenvalue with vanishing derivative contributes nothing.
fn fisher_term(index: usize, mu: f64, dmu: f64) -> Result<f64> {
    if mu == 0.0 {
        if dmu.abs() > f64::MIN_POSITIVE {
            return Err(Error::Degenerate(format!(
                "mu_{} = 0 with derivative {dmu:e}",
                index + 1
            )));
        }
        return Ok(0.0);
    }
    Ok(dmu * (dmu / mu))
}

/// `Σᵢ (∂_β μᵢ)²/μᵢ` with analytic `dμᵢ/dT` chained through `∂T/∂β`.
pub fn qfi_spectral(p: &DetectorParams) -> Result<QfiValue> {
    let r = ratio(p);
    let spec = spectral_at(r, p.tau())?;
    let t = r.value();
    let dt = dratio_dbeta(p);
    let c = p.tau() + 3.0;
    let d2 = (3.0 + r.sq()).powi(2);
    let dmu = [
        -c * r.one_minus() * (3.0 + t) / (2.0 * d2) * dt,
        c * r.one_plus() * (3.0 - t) / (2.0 * d2) * dt,
        -2.0 * c * t / d2 * dt,
        0.0,
    ];
    let mut total = 0.0;
    for (i, (&mu, &dm)) in spec.mu.iter().zip(dmu.iter()).enumerate().take(3) {
        total += fisher_term(i, mu, dm)?;
    }
    Ok(QfiValue(total))
}

/// `F = 2(τ+3)(3−T²)(∂_βT)² / ((1−T²)(3+T²)²)`.
pub fn qfi_closed(p: &DetectorParams) -> Result<QfiValue> {
    let r = ratio(p);
    let dt = dratio_dbeta(p);
    let gap = r.one_minus_sq();
    if gap == 0.0 {
        if dt == 0.0 {
            return Ok(QfiValue(0.0));
        }
        return Err(Error::Degenerate(format!("|T| = 1 with dT/dbeta = {dt:e}")));
    }
    let t2 = r.sq();
    let c = p.tau() + 3.0;
    Ok(QfiValue(
        2.0 * c * (3.0 - t2) * dt * (dt / gap) / (3.0 + t2).powi(2),
    ))
}

/// Classical Fisher term with `μᵢ'` from central differences of step `h`.
pub fn qfi_fd(p: &DetectorParams, h: f64) -> Result<QfiValue> {
    let limit = p.beta() / 10.0;
    if !(h > 0.0 && h < limit) {
        return Err(Error::StepTooLarge { step: h, limit });
    }
    let at = |beta: f64| -> Result<[f64; 4]> {
        let q = p.with_beta(beta)?;
        Ok(spectral_at(ratio(&q), q.tau())?.mu)
    };
    let mid = at(p.beta())?;
    let up = at(p.beta() + h)?;
    let down = at(p.beta() - h)?;
    let total = (0..4)
        .map(|i| {
            let dmu = (up[i] - down[i]) / (2.0 * h);
            if mid[i] == 0.0 {
                0.0
            } else {
                dmu * (dmu / mid[i])
            }
        })
        .sum();
    Ok(QfiValue(total))
}

/// [`qfi_fd`] with the step from [`default_fd_step`].
pub fn qfi_fd_default(p: &DetectorParams) -> Result<QfiValue> {
    qfi_fd(p, default_fd_step(p))
}

/// Location and height of the QFI maximum in β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakResult {
    pub beta_star: f64,
    pub qfi_star: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
}

/// Maximizes the QFI over β in `bracket` at fixed `(ω, α, τ)`.
///
/// A 64-point log-spaced scan picks the sub-bracket around the best sample,
/// then golden-section search narrows it to width `< tol`.
pub fn peak_qfi(
    omega: f64,
    alpha: f64,
    tau: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<PeakResult> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite() && tol > 0.0) {
        return Err(Error::InvalidBracket { lo, hi, tol });
    }
    let base = DetectorParams::new(omega, lo, alpha, tau)?;
    let mut evaluations = 0usize;
    let mut qfi_at = |beta: f64| -> Result<f64> {
        evaluations += 1;
        Ok(qfi_spectral(&base.with_beta(beta)?)?.value())
    };

    let step = (hi / lo).ln() / (PEAK_SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..PEAK_SCAN_POINTS)
        .map(|i| match i {
            0 => lo,
            i if i == PEAK_SCAN_POINTS - 1 => hi,
            i => lo * (step * i as f64).exp(),
        })
        .collect();
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &b) in grid.iter().enumerate() {
        let f = qfi_at(b)?;
        if f > best.1 {
            best = (i, f);
        }
    }
    let (idx, coarse_max) = best;
    if idx == 0 || idx == PEAK_SCAN_POINTS - 1 {
        return Err(Error::FlatLandscape {
            lo,
            hi,
            at: grid[idx],
        });
    }

    let (beta_star, qfi_star) = golden_section_max(&mut qfi_at, grid[idx - 1], grid[idx + 1], tol)?;
    let (beta_star, qfi_star) = if qfi_star >= coarse_max {
        (beta_star, qfi_star)
    } else {
        (grid[idx], coarse_max)
    };
    Ok(PeakResult {
        beta_star,
        qfi_star,
        bracket,
        evaluations,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
fn golden_section_max<F>(f: &mut F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a >= tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        }
        // collapsed interval: no representable interior points left
        if x1 <= a || x2 >= b || x1 >= x2 {
            break;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen reference values carry all printed digits
mod tests {
    use super::*;
    use crate::vacuum::log_odds;
    use proptest::prelude::*;

    fn params(omega: f64, beta: f64, alpha: f64, tau: f64) -> DetectorParams {
        DetectorParams::new(omega, beta, alpha, tau).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            ((a - b) / b).abs()
        }
    }

    // 50-digit evaluations of the closed form with a 1e-20 central difference.
    const QFI_3_10_M6_1: f64 = 8.471_491_440_232_178_5e-10;
    const QFI_2_LN3_M50_0: f64 = 0.384_736_142_977_901_22;

    #[test]
    fn singlet_preparation_carries_no_information() {
        for (w, b, a) in [(1.0, 1.0, -1.0), (3.0, 10.0, -6.0), (10.0, 0.3, -12.0)] {
            let p = params(w, b, a, -3.0);
            assert_eq!(qfi_spectral(&p).unwrap().value(), 0.0);
            assert_eq!(qfi_closed(&p).unwrap().value(), 0.0);
            assert_eq!(qfi_fd_default(&p).unwrap().value(), 0.0);
        }
    }

    #[test]
    fn reference_points() {
        let p = params(3.0, 10.0, -6.0, 1.0);
        let s = qfi_spectral(&p).unwrap().value();
        let c = qfi_closed(&p).unwrap().value();
        assert!(rel(s, QFI_3_10_M6_1) < 1e-12);
        assert!(rel(c, s) < 1e-10);
        let f = qfi_fd(&p, 1e-4).unwrap().value();
        assert!(rel(f, s) < 1e-6);
        assert!(rel(qfi_fd_default(&p).unwrap().value(), s) < 1e-6);

        let p = params(2.0, 3f64.ln(), -50.0, 0.0);
        assert!(rel(qfi_closed(&p).unwrap().value(), QFI_2_LN3_M50_0) < 1e-13);
        assert!(rel(qfi_spectral(&p).unwrap().value(), QFI_2_LN3_M50_0) < 1e-13);
    }

    #[test]
    fn zero_ratio_point() {
        let (omega, alpha, tau) = (1.3, -0.7, 0.4);
        let probe = params(omega, 1.0, alpha, tau);
        let beta = (probe.beta() * omega - log_odds(&probe)) / omega;
        let p = params(omega, beta, alpha, tau);
        assert!(ratio(&p).value().abs() < 1e-14);
        let dt = dratio_dbeta(&p);
        let expect = 2.0 * (tau + 3.0) / 3.0 * dt * dt;
        assert!(rel(qfi_spectral(&p).unwrap().value(), expect) < 1e-12);
        assert!(rel(qfi_closed(&p).unwrap().value(), expect) < 1e-12);
    }

    #[test]
    fn finite_difference_is_second_order() {
        let p = params(3.0, 10.0, -6.0, 1.0);
        let exact = qfi_spectral(&p).unwrap().value();
        let e1 = (qfi_fd(&p, 1e-4).unwrap().value() - exact).abs();
        let e2 = (qfi_fd(&p, 5e-5).unwrap().value() - exact).abs();
        let order = e1 / e2;
        assert!((3.5..4.5).contains(&order), "error ratio {order}");
    }

    #[test]
    fn step_bound_is_enforced() {
        let p = params(3.0, 10.0, -6.0, 1.0);
        assert!(matches!(qfi_fd(&p, 1.0), Err(Error::StepTooLarge { .. })));
        assert!(matches!(qfi_fd(&p, 0.0), Err(Error::StepTooLarge { .. })));
        assert!(qfi_fd(&p, 0.99).is_ok());
    }

    #[test]
    fn proportional_to_tau_plus_three() {
        let p = params(3.0, 2.0, -6.0, 1.0);
        let f1 = qfi_spectral(&p).unwrap().value();
        for tau in [-2.5, -1.0, 0.0, 0.5] {
            let f2 = qfi_spectral(&p.with_tau(tau).unwrap()).unwrap().value();
            assert!(rel(f1 / f2, 4.0 / (tau + 3.0)) < 1e-12);
        }
    }

    #[test]
    fn decays_at_low_temperature() {
        let p = params(3.0, 1.0, -6.0, 1.0);
        let peak = peak_qfi(3.0, -6.0, 1.0, (0.05, 30.0), 1e-8).unwrap();
        let far = qfi_spectral(&p.with_beta(100.0).unwrap()).unwrap().value();
        assert!(far < 1e-6 * peak.qfi_star);
    }

    #[test]
    fn continuous_in_beta() {
        let p = params(3.0, 1.0, -6.0, 1.0);
        let values: Vec<f64> = (0..9500)
            .map(|i| {
                let b = 0.5 + 1e-3 * i as f64;
                qfi_spectral(&p.with_beta(b).unwrap()).unwrap().value()
            })
            .collect();
        for w in values.windows(2) {
            let (a, b) = (w[0], w[1]);
            assert!(a > 0.0 && b > 0.0);
            assert!(a / b < 10.0 && b / a < 10.0);
        }
    }

    #[test]
    fn peak_magnitudes() {
        let up = peak_qfi(10.0, -6.0, 1.0, (0.05, 30.0), 1e-8).unwrap();
        assert!((56.0..=84.0).contains(&up.qfi_star), "{up:?}");
        let mixed = peak_qfi(10.0, -6.0, -2.0, (0.05, 30.0), 1e-8).unwrap();
        assert!((12.0..=18.0).contains(&mixed.qfi_star), "{mixed:?}");
        // the peak sits at the same β for every τ
        assert!((up.beta_star - mixed.beta_star).abs() < 1e-6);
        let ends = [0.05, 30.0].map(|b| qfi_spectral(&params(10.0, b, -6.0, 1.0)).unwrap().value());
        assert!(ends.iter().all(|&e| up.qfi_star >= e));
    }

    #[test]
    fn peak_search_is_deterministic() {
        let a = peak_qfi(5.0, -3.0, 0.5, (0.05, 30.0), 1e-9).unwrap();
        let b = peak_qfi(5.0, -3.0, 0.5, (0.05, 30.0), 1e-9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flat_landscape() {
        assert!(matches!(
            peak_qfi(10.0, -6.0, -3.0, (0.05, 30.0), 1e-8),
            Err(Error::FlatLandscape { .. })
        ));
        // peak lies below the bracket
        assert!(matches!(
            peak_qfi(10.0, -6.0, 1.0, (20.0, 30.0), 1e-8),
            Err(Error::FlatLandscape { .. })
        ));
        assert!(matches!(
            peak_qfi(10.0, -6.0, 1.0, (3.0, 1.0), 1e-8),
            Err(Error::InvalidBracket { .. })
        ));
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let mut f = |x: f64| -> Result<f64> { Ok(-(x - 1.234).powi(2)) };
        let (x, _) = golden_section_max(&mut f, 0.0, 3.0, 1e-10).unwrap();
        assert!((x - 1.234).abs() < 1e-9);
    }

    fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
        (lo.ln()..hi.ln()).prop_map(f64::exp)
    }

    proptest! {
        #[test]
        fn three_routes_agree(
            omega in log_uniform(0.5, 10.0),
            beta in log_uniform(0.05, 30.0),
            alpha_abs in 0.5f64..12.0,
            tau in -3.0f64..=1.0,
        ) {
            let p = params(omega, beta, -alpha_abs, tau);
            let s = qfi_spectral(&p).unwrap().value();
            let c = qfi_closed(&p).unwrap().value();
            prop_assert!(s >= 0.0 && s.is_finite());
            prop_assert!(rel(c, s) <= 1e-10, "closed {} vs spectral {}", c, s);
            if s > 0.0 {
                let f = qfi_fd_default(&p).unwrap().value();
                prop_assert!(rel(f, s) <= 1e-6, "fd {} vs spectral {}", f, s);
            }
        }
    }
}
