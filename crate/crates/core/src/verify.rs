//! Self-checks: every closed form against an independent oracle.
//!
//! Each check reports a measured defect and the bound it must respect. The
//! formulas under test are injected through [`Formulas`] so that a
//! deliberately wrong variant can be run through the same checks.

use std::fmt;

use crate::correlations::{lqu_closed, lqu_oracle, skew_matrix, Subsystem};
use crate::equilibrium::{spectral_at, xstate, xstate_via_bloch};
use crate::error::Result;
use crate::lindblad::{bell_diagonal, relax, LindbladCoeffs};
use crate::metrology::{qfi_closed, qfi_fd, qfi_fd_default, qfi_spectral, QfiValue};
use crate::params::DetectorParams;
use crate::ratio::Ratio;
use crate::state::{eigenvalues, DensityMatrix4, SpectralDecomp};
use crate::vacuum::{dratio_dbeta, kms_defect, ratio};

/// The closed forms a check may exercise.
#[derive(Clone, Copy)]
pub struct Formulas {
    pub spectrum: fn(Ratio, f64) -> Result<SpectralDecomp>,
    pub qfi_closed: fn(&DetectorParams) -> Result<QfiValue>,
}

impl Default for Formulas {
    fn default() -> Self {
        Formulas {
            spectrum: spectral_at,
            qfi_closed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub bound: Bound,
    pub limit: f64,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

impl Check {
    fn at_most(name: &'static str, measured: f64, limit: f64) -> Self {
        Check {
            name,
            measured,
            bound: Bound::AtMost,
            limit,
            error: None,
        }
    }

    fn at_least(name: &'static str, measured: f64, limit: f64) -> Self {
        Check {
            bound: Bound::AtLeast,
            ..Check::at_most(name, measured, limit)
        }
    }

    fn from_result(name: &'static str, limit: f64, r: Result<f64>) -> Self {
        match r {
            Ok(v) => Check::at_most(name, v, limit),
            Err(e) => Check {
                error: Some(e.to_string()),
                ..Check::at_most(name, f64::NAN, limit)
            },
        }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && match self.bound {
                Bound::AtMost => self.measured <= self.limit,
                Bound::AtLeast => self.measured >= self.limit,
            }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        write!(
            f,
            "{status} {:<22} {:.3e} {op} {:.1e}",
            self.name, self.measured, self.limit
        )?;
        if let Some(e) = &self.error {
            write!(f, " ({e})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Runs the full suite. `tol_scale` multiplies every upper-bound tolerance.
pub fn run(tol_scale: f64) -> Report {
    run_with(&Formulas::default(), tol_scale)
}

pub fn run_with(f: &Formulas, tol_scale: f64) -> Report {
    let points = sample_points(200);
    Report {
        checks: vec![
            check_mu_trace(f, tol_scale),
            check_bloch_route(tol_scale),
            check_eigensolve(f, tol_scale),
            check_special_points(tol_scale),
            check_qfi_closed(f, &points, tol_scale),
            check_qfi_fd(&points, tol_scale),
            check_fd_order(),
            check_lqu_oracle(tol_scale),
            check_skew_offdiagonal(tol_scale),
            check_dratio(&points, tol_scale),
            check_kms_bd_limit(tol_scale),
            check_kms_alpha_vacuum(),
            check_lindblad(&lindblad_points(), tol_scale),
        ],
    }
}

/// `(T, τ)` grid with `n` points per axis over `[−0.95, 0.95] × [−3, 1]`.
pub fn state_grid(n: usize) -> Vec<(f64, f64)> {
    let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (lin(-0.95, 0.95, i), lin(-3.0, 1.0, j))))
        .collect()
}

/// Deterministic points filling ω ∈ [0.5, 10], β ∈ [0.05, 30] (both
/// log-uniform), |α| ∈ [0.5, 12], τ ∈ [−3, 1].
pub fn sample_points(n: usize) -> Vec<DetectorParams> {
    // additive recurrence on the 4-dimensional generalized golden ratio
    const G: f64 = 1.167_303_978_261_418_7;
    let step = [1.0 / G, 1.0 / (G * G), 1.0 / G.powi(3), 1.0 / G.powi(4)];
    let log_map = |u: f64, lo: f64, hi: f64| (lo.ln() + u * (hi / lo).ln()).exp();
    (1..=n)
        .map(|i| {
            let u: Vec<f64> = step.iter().map(|s| (0.5 + s * i as f64).fract()).collect();
            DetectorParams::with_alpha_abs(
                log_map(u[0], 0.5, 10.0),
                log_map(u[1], 0.05, 30.0),
                0.5 + 11.5 * u[2],
                -3.0 + 4.0 * u[3],
            )
            .expect("sample map stays inside the domain")
        })
        .collect()
}

/// Nine (ω, β, α) points covering every value of ω ∈ {1, 3, 10},
/// β ∈ {1, 10}, α ∈ {−1, −6}.
pub fn lindblad_points() -> Vec<DetectorParams> {
    [
        (1.0, 1.0, -1.0),
        (1.0, 10.0, -6.0),
        (1.0, 10.0, -1.0),
        (3.0, 1.0, -1.0),
        (3.0, 10.0, -6.0),
        (3.0, 1.0, -6.0),
        (10.0, 1.0, -1.0),
        (10.0, 10.0, -6.0),
        (10.0, 10.0, -1.0),
    ]
    .iter()
    .map(|&(w, b, a)| DetectorParams::new(w, b, a, 0.0).expect("fixed points are valid"))
    .collect()
}

pub fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn max_over<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0_f64, |m, v| Ok(m.max(v?)))
}

/// `|Σμ − 1|` over the state grid.
pub fn check_mu_trace(f: &Formulas, scale: f64) -> Check {
    let r = max_over(state_grid(21).into_iter().map(|(t, tau)| {
        let s = (f.spectrum)(Ratio::new(t)?, tau)?;
        Ok((s.sum() - 1.0).abs())
    }));
    Check::from_result("mu_trace", 1e-12 * scale, r)
}

/// Entrywise distance between the X-state built from η's and from the
/// Bloch expansion.
pub fn check_bloch_route(scale: f64) -> Check {
    let r = max_over(state_grid(21).into_iter().map(|(t, tau)| {
        let a = xstate(t, tau)?.matrix();
        let b = xstate_via_bloch(t, tau)?;
        Ok((a - b.matrix()).camax())
    }));
    Check::from_result("bloch_route", 1e-12 * scale, r)
}

/// Closed-form eigenvalues against a numerical eigensolve.
pub fn check_eigensolve(f: &Formulas, scale: f64) -> Check {
    let r = max_over(state_grid(21).into_iter().map(|(t, tau)| {
        let mut closed = (f.spectrum)(Ratio::new(t)?, tau)?.mu;
        closed.sort_by(f64::total_cmp);
        let numeric = eigenvalues(&xstate(t, tau)?.matrix());
        Ok(closed
            .iter()
            .zip(numeric.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }));
    Check::from_result("eigensolve", 1e-12 * scale, r)
}

/// (T, τ) = (0, 0) is I/4 with zero LQU; τ = −3 has zero QFI and unit LQU.
pub fn check_special_points(scale: f64) -> Check {
    let r = (|| {
        let mixed = xstate(0.0, 0.0)?.density()?;
        let mut worst = mixed.trace_distance(&DensityMatrix4::maximally_mixed());
        worst = worst.max(lqu_closed(0.0, 0.0)?.value.abs());
        for p in sample_points(20) {
            let p = p.with_tau(-3.0)?;
            worst = worst.max(qfi_spectral(&p)?.value().abs());
            worst = worst.max((lqu_closed(ratio(&p).value(), -3.0)?.value - 1.0).abs());
        }
        Ok(worst)
    })();
    Check::from_result("special_points", 1e-12 * scale, r)
}

/// Relative gap between the closed-form and spectral QFI.
pub fn check_qfi_closed(f: &Formulas, points: &[DetectorParams], scale: f64) -> Check {
    let r = max_over(points.iter().map(|p| {
        Ok(relative(
            (f.qfi_closed)(p)?.value(),
            qfi_spectral(p)?.value(),
        ))
    }));
    Check::from_result("qfi_closed_vs_spectral", 1e-10 * scale, r)
}

/// Relative gap between the finite-difference and spectral QFI.
pub fn check_qfi_fd(points: &[DetectorParams], scale: f64) -> Check {
    let r = max_over(points.iter().map(|p| {
        Ok(relative(
            qfi_fd_default(p)?.value(),
            qfi_spectral(p)?.value(),
        ))
    }));
    Check::from_result("qfi_fd_vs_spectral", 1e-6 * scale, r)
}

/// Error ratio when the finite-difference step is halved; 4 for a
/// second-order scheme. Reported as `|ratio − 4|`.
pub fn check_fd_order() -> Check {
    let r = fd_error_ratio(
        &DetectorParams::new(1.0, 2.0, -1.0, 0.0).expect("valid point"),
        0.02,
    );
    Check::from_result("fd_order", 0.5, r.map(|q| (q - 4.0).abs()))
}

/// `err(h) / err(h/2)` for [`qfi_fd`] against the spectral value.
pub fn fd_error_ratio(p: &DetectorParams, h: f64) -> Result<f64> {
    let exact = qfi_spectral(p)?.value();
    let coarse = (qfi_fd(p, h)?.value() - exact).abs();
    let fine = (qfi_fd(p, h / 2.0)?.value() - exact).abs();
    Ok(coarse / fine)
}

/// Matrix-square-root LQU against the closed form.
pub fn check_lqu_oracle(scale: f64) -> Check {
    let r = max_over(state_grid(20).into_iter().map(|(t, tau)| {
        let rho = xstate(t, tau)?.density()?;
        Ok((lqu_oracle(&rho)?.value - lqu_closed(t, tau)?.value).abs())
    }));
    Check::from_result("lqu_oracle", 1e-10 * scale, r)
}

/// Largest off-diagonal entry of the skew-information matrix on X-states.
pub fn check_skew_offdiagonal(scale: f64) -> Check {
    let r = max_over(state_grid(20).into_iter().map(|(t, tau)| {
        let m = skew_matrix(&xstate(t, tau)?.density()?, Subsystem::A)?;
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        Ok(worst)
    }));
    Check::from_result("skew_offdiagonal", 1e-12 * scale, r)
}

/// Analytic ∂T/∂β against a central difference of whichever of `1 ∓ T`
/// is small, so that saturated points keep their digits.
pub fn check_dratio(points: &[DetectorParams], scale: f64) -> Check {
    let r = max_over(points.iter().map(|p| {
        let h = 1e-5 * p.beta().min(1.0 / p.omega());
        let (up, down) = (
            ratio(&p.with_beta(p.beta() + h)?),
            ratio(&p.with_beta(p.beta() - h)?),
        );
        let fd = if ratio(p).value() >= 0.0 {
            -(up.one_minus() - down.one_minus())
        } else {
            up.one_plus() - down.one_plus()
        } / (2.0 * h);
        Ok(relative(fd, dratio_dbeta(p)))
    }));
    Check::from_result("dratio_fd", 1e-6 * scale, r)
}

/// At α = −50 the ratio is `tanh(βω/2)` and the rates obey detailed balance.
pub fn check_kms_bd_limit(scale: f64) -> Check {
    let r = max_over(bd_points(100).into_iter().map(|p| {
        let t = ratio(&p).value();
        let thermal = (0.5 * p.beta() * p.omega()).tanh();
        Ok((t - thermal).abs().max(kms_defect(&p)?))
    }));
    Check::from_result("kms_bd_limit", 1e-12 * scale, r)
}

/// Deterministic (ω, β) points at α = −50 with ω ∈ [0.01, 5] and
/// β ∈ [1e−3, 1e4], both log-uniform.
pub fn bd_points(n: usize) -> Vec<DetectorParams> {
    const G: f64 = 1.324_717_957_244_746;
    (1..=n)
        .map(|i| {
            let u = (0.5 + i as f64 / G).fract();
            let v = (0.5 + i as f64 / (G * G)).fract();
            let omega = (0.01_f64.ln() + u * 500.0_f64.ln()).exp();
            let beta = (1e-3_f64.ln() + v * 1e7_f64.ln()).exp();
            DetectorParams::new(omega, beta, -50.0, 0.0).expect("valid point")
        })
        .collect()
}

/// A finite α-vacuum is not thermal at the given β.
pub fn check_kms_alpha_vacuum() -> Check {
    match DetectorParams::new(1.0, 2.0, -1.0, 0.0).and_then(|p| kms_defect(&p)) {
        Ok(v) => Check::at_least("kms_alpha_vacuum", v, 0.01),
        Err(e) => Check {
            error: Some(e.to_string()),
            ..Check::at_least("kms_alpha_vacuum", f64::NAN, 0.01)
        },
    }
}

/// Initial states used for relaxation runs.
pub fn lindblad_initial_states() -> Vec<DensityMatrix4> {
    vec![
        DensityMatrix4::basis(0),
        DensityMatrix4::maximally_mixed(),
        bell_diagonal(0.3, -0.2, 0.4).expect("valid Bell-diagonal state"),
    ]
}

/// Worst final trace distance to the analytic equilibrium, and worst τ drift,
/// over all points and initial states.
pub fn lindblad_defects(points: &[DetectorParams]) -> Result<(f64, f64)> {
    let mut distance = 0.0_f64;
    let mut drift = 0.0_f64;
    for p in points {
        let c = LindbladCoeffs::from_params(p)?;
        for rho0 in lindblad_initial_states() {
            let traj = relax(&rho0, &c)?;
            distance = distance.max(traj.final_distance);
            let tau0 = traj.taus.first().copied().unwrap_or(f64::NAN);
            for &tau in &traj.taus {
                drift = drift.max((tau - tau0).abs());
            }
        }
    }
    Ok((distance, drift))
}

/// Relaxation to the analytic equilibrium with τ conserved. The measured
/// value is `max(distance / 1e−6, drift / 1e−8)`, so the bound is 1.
pub fn check_lindblad(points: &[DetectorParams], scale: f64) -> Check {
    let r = lindblad_defects(points).map(|(d, t)| (d / 1e-6).max(t / 1e-8));
    Check::from_result("lindblad_relaxation", scale, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_points_cover_domain() {
        let pts = sample_points(500);
        let (mut lo, mut hi) = ([f64::MAX; 4], [f64::MIN; 4]);
        for p in &pts {
            for (k, v) in [p.omega(), p.beta(), p.alpha_abs(), p.tau()]
                .into_iter()
                .enumerate()
            {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        assert!(lo[0] < 0.6 && hi[0] > 9.0);
        assert!(lo[1] < 0.07 && hi[1] > 25.0);
        assert!(lo[2] < 0.7 && hi[2] > 11.5);
        assert!(lo[3] < -2.9 && hi[3] > 0.9);
    }

    #[test]
    fn nan_never_passes() {
        assert!(!Check::at_most("x", f64::NAN, 1.0).passed());
        assert!(!Check::at_least("x", f64::NAN, 1.0).passed());
    }

    #[test]
    fn tolerance_scale_applies() {
        let c = check_mu_trace(&Formulas::default(), 1e6);
        assert_eq!(c.limit, 1e-6);
    }

    #[test]
    fn fast_checks_pass() {
        let f = Formulas::default();
        let pts = sample_points(50);
        for c in [
            check_mu_trace(&f, 1.0),
            check_bloch_route(1.0),
            check_eigensolve(&f, 1.0),
            check_special_points(1.0),
            check_qfi_closed(&f, &pts, 1.0),
            check_qfi_fd(&pts, 1.0),
            check_fd_order(),
            check_dratio(&pts, 1.0),
            check_kms_bd_limit(1.0),
            check_kms_alpha_vacuum(),
        ] {
            assert!(c.passed(), "{c}");
        }
    }
}
