//! The asymptotic two-detector state as a function of the relaxation ratio
//! `T` and the conserved initial-state constant `τ`.
//!
//! Two constructions are provided: the X-form entries directly, and the
//! Bloch-vector coefficients fed through [`bloch_matrix`]. They must agree.

use crate::error::Result;
use crate::params::check_tau;
use crate::ratio::Ratio;
use crate::state::{bloch_matrix, pauli_product, DensityMatrix4, SpectralDecomp, XState};

/// X-form equilibrium state at a plain ratio value `t`, `|t| ≤ 1`.
pub fn xstate(t: f64, tau: f64) -> Result<XState> {
    xstate_at(Ratio::new(t)?, tau)
}

/// X-form equilibrium state using the stable complements of `ratio`.
pub fn xstate_at(ratio: Ratio, tau: f64) -> Result<XState> {
    check_tau(tau)?;
    let t2 = ratio.sq();
    let d = 3.0 + t2;
    let c = tau + 3.0;
    Ok(XState {
        eta_minus: c * ratio.one_minus().powi(2) / (4.0 * d),
        eta_plus: c * ratio.one_plus().powi(2) / (4.0 * d),
        eta_22: (3.0 - tau - (1.0 + tau) * t2) / (4.0 * d),
        eta_23: (tau - t2) / (2.0 * d),
    })
}

/// Bloch coefficients `(ρ₃, [ρ₁₁, ρ₂₂, ρ₃₃])` of the equilibrium state.
pub fn bloch_coefficients(t: f64, tau: f64) -> (f64, [f64; 3]) {
    let t2 = t * t;
    let d = 3.0 + t2;
    let rho3 = -t * (tau + 3.0) / d;
    let transverse = (tau - t2) / d;
    let longitudinal = (t2 * (tau + 3.0) + tau - t2) / d;
    (rho3, [transverse, transverse, longitudinal])
}

/// Equilibrium state built from its Bloch coefficients.
pub fn xstate_via_bloch(t: f64, tau: f64) -> Result<DensityMatrix4> {
    Ratio::new(t)?;
    check_tau(tau)?;
    let (rho3, diag) = bloch_coefficients(t, tau);
    DensityMatrix4::new(bloch_matrix(rho3, diag))
}

/// Eigenvalues of the equilibrium state in the fixed eigenbasis
/// `|00⟩, |11⟩, (|01⟩+|10⟩)/√2, (|01⟩−|10⟩)/√2`.
pub fn spectral(t: f64, tau: f64) -> Result<SpectralDecomp> {
    spectral_at(Ratio::new(t)?, tau)
}

pub fn spectral_at(ratio: Ratio, tau: f64) -> Result<SpectralDecomp> {
    check_tau(tau)?;
    let c = tau + 3.0;
    let d4 = 4.0 * (3.0 + ratio.sq());
    Ok(SpectralDecomp {
        mu: [
            c * ratio.one_minus().powi(2) / d4,
            c * ratio.one_plus().powi(2) / d4,
            c * ratio.one_minus_sq() / d4,
            (1.0 - tau) / 4.0,
        ],
    })
}

/// `τ = Σᵢ Tr[ρ (sᵢ⊗sᵢ)]`.
pub fn tau_of_state(rho: &DensityMatrix4) -> f64 {
    (1..=3)
        .map(|i| rho.expectation(&pauli_product(i, i)).re)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{eigenvalues, Mat4};

    fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn grid() -> impl Iterator<Item = (f64, f64)> {
        (0..=20)
            .flat_map(|i| (0..=16).map(move |j| (-1.0 + 0.1 * i as f64, -3.0 + 0.25 * j as f64)))
    }

    #[test]
    fn symmetric_point_is_maximally_mixed() {
        let x = xstate(0.0, 0.0).unwrap();
        for v in [x.eta_minus, x.eta_plus, x.eta_22] {
            assert!((v - 0.25).abs() < 1e-15);
        }
        assert_eq!(x.eta_23, 0.0);
    }

    #[test]
    fn ground_state_at_unit_ratio() {
        let x = xstate(1.0, 1.0).unwrap();
        assert_eq!(x.eta_plus, 1.0);
        assert_eq!(x.eta_minus, 0.0);
        assert_eq!(x.eta_22, 0.0);
        assert_eq!(x.eta_23, 0.0);
    }

    #[test]
    fn tau_minus_three_is_singlet() {
        for t in [-1.0, -0.4, 0.0, 0.7, 1.0] {
            let x = xstate(t, -3.0).unwrap();
            let singlet = DensityMatrix4::singlet();
            assert!(max_abs_diff(&x.matrix(), singlet.matrix()) < 1e-15);
            let s = spectral(t, -3.0).unwrap();
            assert_eq!(s.mu, [0.0, 0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(xstate(1.2, 0.0).is_err());
        assert!(xstate(0.2, 1.2).is_err());
        assert!(spectral(0.2, -3.5).is_err());
        assert!(xstate_via_bloch(-1.01, 0.0).is_err());
    }

    #[test]
    fn bloch_route_matches_x_form() {
        for (t, tau) in [(0.5, 0.0), (0.0, 0.0), (0.9, -2.0), (-0.3, 0.7)] {
            let a = xstate(t, tau).unwrap().matrix();
            let b = xstate_via_bloch(t, tau).unwrap();
            assert!(max_abs_diff(&a, b.matrix()) < 1e-14, "({t}, {tau})");
        }
        for (t, tau) in grid() {
            let a = xstate(t, tau).unwrap().matrix();
            let b = xstate_via_bloch(t, tau).unwrap();
            assert!(max_abs_diff(&a, b.matrix()) < 1e-14, "({t}, {tau})");
        }
    }

    #[test]
    fn states_are_valid_over_domain() {
        for (t, tau) in grid() {
            let x = xstate(t, tau).unwrap();
            assert!((x.trace() - 1.0).abs() < 1e-12);
            assert!(x.eta_minus >= 0.0 && x.eta_plus >= 0.0);
            assert!(x.eta_22 >= x.eta_23.abs() - 1e-12);
            x.density().unwrap();
        }
    }

    #[test]
    fn spectrum_matches_dense_eigensolve() {
        for (t, tau) in grid().chain([(0.5, 0.5)]) {
            let s = spectral(t, tau).unwrap();
            assert!((s.sum() - 1.0).abs() < 1e-12);
            assert!(s.mu.iter().all(|&m| m >= -1e-12));
            let mut closed = s.mu;
            closed.sort_by(f64::total_cmp);
            let numeric = eigenvalues(&xstate(t, tau).unwrap().matrix());
            for (c, n) in closed.iter().zip(numeric.iter()) {
                assert!(
                    (c - n).abs() < 1e-12,
                    "({t}, {tau}): {closed:?} vs {numeric:?}"
                );
            }
            let x = xstate(t, tau).unwrap();
            assert!((s.mu[2] - (x.eta_22 + x.eta_23)).abs() < 1e-15);
            assert!((s.mu[3] - (x.eta_22 - x.eta_23)).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_eigenbasis_reconstructs_state() {
        for (t, tau) in grid() {
            let s = spectral(t, tau).unwrap();
            let x = xstate(t, tau).unwrap();
            assert!(max_abs_diff(&s.reconstruct(), &x.matrix()) < 1e-15);
        }
    }

    #[test]
    fn degenerate_spectrum_keeps_basis() {
        let s = spectral(0.0, 0.0).unwrap();
        assert_eq!(s.mu, [0.25; 4]);
        assert_eq!(s.eigvecs(), crate::state::Eigenvector::ALL);
    }

    #[test]
    fn stable_ratio_matches_plain() {
        let r = Ratio::from_log_odds(1.7);
        let a = spectral_at(r, 0.3).unwrap();
        let b = spectral(r.value(), 0.3).unwrap();
        for (x, y) in a.mu.iter().zip(b.mu.iter()) {
            assert!((x - y).abs() < 1e-15);
        }
        let saturated = Ratio::from_log_odds(100.0);
        let s = spectral_at(saturated, 0.0).unwrap();
        assert!(s.mu[0] > 0.0 && s.mu[2] > 0.0);
    }

    #[test]
    fn tau_of_reference_states() {
        assert!(tau_of_state(&DensityMatrix4::maximally_mixed()).abs() < 1e-15);
        assert!((tau_of_state(&DensityMatrix4::basis(0)) - 1.0).abs() < 1e-15);
        assert!((tau_of_state(&DensityMatrix4::singlet()) + 3.0).abs() < 1e-15);
    }
}
