//! Kossakowski–Lindblad dynamics of the detector pair, used as a dynamical
//! oracle for the equilibrium state and for conservation of `τ`.
//!
//! Both detectors share one Kossakowski matrix
//! `Ωᵢⱼ = κ₊δᵢⱼ − iκ₋εᵢⱼ₃ + τ_K δᵢ₃δⱼ₃`, so the double sum over detector
//! pairs collapses onto the collective operators `Γᵢ`:
//!
//! ```text
//! dρ/dt = −i[(ω/2)Γ₃, ρ] + Σᵢⱼ Ωᵢⱼ/2 (2 Γⱼ ρ Γᵢ − {Γᵢ Γⱼ, ρ})
//! ```

use nalgebra::{Matrix3, SMatrix, SVector};

use crate::equilibrium::{tau_of_state, xstate_at};
use crate::error::{Error, Result};
use crate::params::{DetectorParams, TAU_MAX, TAU_MIN};
use crate::ratio::Ratio;
use crate::state::{bloch_matrix, collective, eigenvalues, DensityMatrix4, Mat4, C64};
use crate::vacuum::{kossakowski, spectral_density_at_zero};

type Liouvillian = SMatrix<C64, 16, 16>;
type Vec16 = SVector<C64, 16>;

/// Largest stable step in units of `1/κ₊`.
pub const MAX_STEP_KAPPA: f64 = 0.01;

const TRACE_DRIFT_TOL: f64 = 1e-6;
const CONVERGED_DISTANCE: f64 = 1e-6;
const SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladCoeffs {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    /// The `τ` entry of the Kossakowski matrix, `𝒴(0) − κ₊`; unrelated to
    /// the initial-state constant.
    pub tau_k: f64,
    pub omega: f64,
    /// `κ₋/κ₊` with stable complements.
    pub ratio: Ratio,
}

impl LindbladCoeffs {
    pub fn from_params(p: &DetectorParams) -> Result<Self> {
        let k = kossakowski(p)?;
        Ok(Self {
            kappa_plus: k.sigma_plus,
            kappa_minus: k.sigma_minus,
            tau_k: spectral_density_at_zero(p) - k.sigma_plus,
            omega: p.omega(),
            ratio: k.ratio,
        })
    }

    fn kossakowski_matrix(&self) -> Matrix3<C64> {
        let kp = C64::new(self.kappa_plus, 0.0);
        let km = C64::new(0.0, self.kappa_minus);
        let zero = C64::new(0.0, 0.0);
        Matrix3::new(
            kp,
            -km,
            zero,
            km,
            kp,
            zero,
            zero,
            zero,
            C64::new(self.kappa_plus + self.tau_k, 0.0),
        )
    }
}

/// `dρ/dt` for an arbitrary 4×4 matrix (not necessarily a state).
pub fn generator_matrix(rho: &Mat4, c: &LindbladCoeffs) -> Mat4 {
    let gamma = [collective(1), collective(2), collective(3)];
    let omega = c.kossakowski_matrix();
    let i = C64::new(0.0, 1.0);
    let h = gamma[2] * C64::new(0.5 * c.omega, 0.0);
    let mut out = (h * rho - rho * h) * (-i);
    for a in 0..3 {
        for b in 0..3 {
            let w = omega[(a, b)];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            let prod = gamma[a] * gamma[b];
            let jump = gamma[b] * rho * gamma[a] * C64::new(2.0, 0.0);
            out += (jump - prod * rho - rho * prod) * (w * 0.5);
        }
    }
    out
}

pub fn generator(rho: &DensityMatrix4, c: &LindbladCoeffs) -> Mat4 {
    generator_matrix(rho.matrix(), c)
}

/// Superoperator of [`generator_matrix`] acting on column-stacked matrices.
pub fn liouvillian(c: &LindbladCoeffs) -> Liouvillian {
    let mut l = Liouvillian::zeros();
    for k in 0..16 {
        let mut basis = Vec16::zeros();
        basis[k] = C64::new(1.0, 0.0);
        let image = generator_matrix(&Mat4::from_column_slice(basis.as_slice()), c);
        l.set_column(k, &Vec16::from_column_slice(image.as_slice()));
    }
    l
}

/// Sampled solution of the master equation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix4>,
    /// `τ` of each sampled state.
    pub taus: Vec<f64>,
    /// Trace distance of each sample to the analytic equilibrium.
    pub distances: Vec<f64>,
    pub target: DensityMatrix4,
    pub converged: bool,
    pub final_distance: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix4 {
        self.states
            .last()
            .expect("trajectory has at least one sample")
    }
}

fn clamp_tau(tau: f64) -> f64 {
    if tau < TAU_MIN && tau > TAU_MIN - 1e-12 {
        TAU_MIN
    } else if tau > TAU_MAX && tau < TAU_MAX + 1e-12 {
        TAU_MAX
    } else {
        tau
    }
}

/// Fixed-step RK4 from `rho0` to `t_end`, re-Hermitizing after every step.
///
/// The step is shortened slightly so that an integer number of steps lands
/// exactly on `t_end`.
pub fn integrate(
    rho0: &DensityMatrix4,
    c: &LindbladCoeffs,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    let limit = MAX_STEP_KAPPA / c.kappa_plus;
    if !(dt > 0.0 && dt <= limit * (1.0 + 1e-12) && t_end >= dt && t_end.is_finite()) {
        return Err(Error::InvalidStep { dt, limit, t_end });
    }
    let steps = (t_end / dt).ceil() as usize;
    let h = t_end / steps as f64;
    let stride = (steps / SAMPLES).max(1);

    let target = xstate_at(c.ratio, clamp_tau(tau_of_state(rho0)))?.density()?;
    let l = liouvillian(c);
    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);

    let mut v = Vec16::from_column_slice(rho0.matrix().as_slice());
    let mut traj = Trajectory {
        times: Vec::with_capacity(SAMPLES + 1),
        states: Vec::with_capacity(SAMPLES + 1),
        taus: Vec::with_capacity(SAMPLES + 1),
        distances: Vec::with_capacity(SAMPLES + 1),
        target,
        converged: false,
        final_distance: f64::NAN,
    };
    for step in 1..=steps {
        let k1 = l * v;
        let k2 = l * (v + k1 * half);
        let k3 = l * (v + k2 * half);
        let k4 = l * (v + k3 * full);
        v += (k1 + k2 * two + k3 * two + k4) * sixth;

        let m = Mat4::from_column_slice(v.as_slice());
        let m = (m + m.adjoint()) * C64::new(0.5, 0.0);
        v = Vec16::from_column_slice(m.as_slice());

        let t = step as f64 * h;
        let drift = (m.trace() - C64::new(1.0, 0.0)).norm();
        if drift > TRACE_DRIFT_TOL {
            return Err(Error::StepUnstable {
                time: t,
                trace_defect: drift,
            });
        }
        if step % stride == 0 || step == steps {
            let state = DensityMatrix4::new(m)?;
            traj.times.push(t);
            traj.taus.push(tau_of_state(&state));
            traj.distances.push(state.trace_distance(&traj.target));
            traj.states.push(state);
        }
    }
    traj.final_distance = *traj.distances.last().expect("at least one step");
    traj.converged = traj.final_distance < CONVERGED_DISTANCE;
    Ok(traj)
}

/// Integrates to `t = 50/κ₊` with the largest allowed step.
pub fn relax(rho0: &DensityMatrix4, c: &LindbladCoeffs) -> Result<Trajectory> {
    integrate(rho0, c, 50.0 / c.kappa_plus, MAX_STEP_KAPPA / c.kappa_plus)
}

/// `¼(I⊗I + Σᵢ rᵢ sᵢ⊗sᵢ)`.
pub fn bell_diagonal(r1: f64, r2: f64, r3: f64) -> Result<DensityMatrix4> {
    for (field, r) in [("r1", r1), ("r2", r2), ("r3", r3)] {
        if !(-1.0..=1.0).contains(&r) {
            return Err(Error::OutOfDomain {
                field,
                value: r,
                allowed: "[-1, 1]",
            });
        }
    }
    let m = bloch_matrix(0.0, [r1, r2, r3]);
    let min = eigenvalues(&m).min();
    if min < -1e-12 {
        return Err(Error::NotAState {
            min_eigenvalue: min,
        });
    }
    DensityMatrix4::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::xstate;

    fn coeffs(omega: f64, beta: f64, alpha: f64) -> LindbladCoeffs {
        LindbladCoeffs::from_params(&DetectorParams::new(omega, beta, alpha, 0.0).unwrap()).unwrap()
    }

    fn max_abs(m: &Mat4) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn singlet_is_dark() {
        let c = coeffs(3.0, 2.0, -1.0);
        let g = generator(&DensityMatrix4::singlet(), &c);
        assert!(max_abs(&g) < 1e-12 * c.kappa_plus.max(1.0));
    }

    #[test]
    fn equilibrium_is_a_fixed_point() {
        for (w, b, a) in [(1.0, 1.0, -6.0), (1.0, 2.0, -1.0), (3.0, 0.5, -2.0)] {
            let c = coeffs(w, b, a);
            for tau in [-2.0, 0.0, 0.5, 1.0] {
                let x = xstate(c.kappa_minus / c.kappa_plus, tau)
                    .unwrap()
                    .density()
                    .unwrap();
                let g = generator(&x, &c);
                assert!(
                    max_abs(&g) < 1e-12 * c.kappa_plus.max(1.0),
                    "({w},{b},{a},{tau})"
                );
            }
        }
    }

    #[test]
    fn generator_is_traceless_and_hermitian() {
        let c = coeffs(1.0, 1.0, -1.0);
        let bd = bell_diagonal(0.3, -0.2, 0.4).unwrap();
        for rho in [
            bd,
            DensityMatrix4::basis(0),
            DensityMatrix4::maximally_mixed(),
        ] {
            let g = generator(&rho, &c);
            assert!(g.trace().norm() < 1e-12);
            assert!(max_abs(&(g - g.adjoint())) < 1e-12);
        }
    }

    #[test]
    fn liouvillian_reproduces_generator() {
        let c = coeffs(3.0, 1.0, -6.0);
        let rho = bell_diagonal(0.3, -0.2, 0.4).unwrap();
        let direct = generator(&rho, &c);
        let v = Vec16::from_column_slice(rho.matrix().as_slice());
        let via = Mat4::from_column_slice((liouvillian(&c) * v).as_slice());
        assert!(max_abs(&(direct - via)) < 1e-14 * c.kappa_plus.max(1.0));
    }

    #[test]
    fn relaxes_to_equilibrium() {
        let c = coeffs(1.0, 1.0, -6.0);
        let traj = relax(&DensityMatrix4::basis(0), &c).unwrap();
        assert!(traj.converged, "final distance {}", traj.final_distance);
        let expect = xstate(c.ratio.value(), 1.0).unwrap().density().unwrap();
        assert!(traj.final_state().trace_distance(&expect) < 1e-6);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert!(traj.times[0] > 0.0);
    }

    #[test]
    fn singlet_stays_put() {
        let c = coeffs(3.0, 10.0, -1.0);
        let traj = relax(&DensityMatrix4::singlet(), &c).unwrap();
        for s in &traj.states {
            assert!(max_abs(&(s.matrix() - DensityMatrix4::singlet().matrix())) < 1e-10);
        }
    }

    #[test]
    fn tau_is_conserved() {
        let c = coeffs(1.0, 1.0, -1.0);
        let rho0 = bell_diagonal(0.3, -0.2, 0.4).unwrap();
        assert!((tau_of_state(&rho0) - 0.5).abs() < 1e-15);
        let traj = relax(&rho0, &c).unwrap();
        for t in &traj.taus {
            assert!((t - 0.5).abs() < 1e-8);
        }
        for s in &traj.states {
            assert!(s.eigenvalues().min() >= -1e-8);
        }
        assert!(traj.converged);
    }

    #[test]
    fn step_halving_is_converged() {
        let c = coeffs(3.0, 1.0, -6.0);
        let rho0 = bell_diagonal(0.3, -0.2, 0.4).unwrap();
        let t_end = 50.0 / c.kappa_plus;
        let dt = MAX_STEP_KAPPA / c.kappa_plus;
        let a = integrate(&rho0, &c, t_end, dt).unwrap();
        let b = integrate(&rho0, &c, t_end, dt / 2.0).unwrap();
        assert!(max_abs(&(a.final_state().matrix() - b.final_state().matrix())) < 1e-9);
    }

    #[test]
    fn rejects_unstable_steps() {
        let c = coeffs(1.0, 1.0, -1.0);
        let rho0 = DensityMatrix4::maximally_mixed();
        let too_big = 0.1 / c.kappa_plus;
        assert!(matches!(
            integrate(&rho0, &c, 1.0 / c.kappa_plus, too_big),
            Err(Error::InvalidStep { .. })
        ));
        assert!(matches!(
            integrate(&rho0, &c, 1e-6 / c.kappa_plus, 0.01 / c.kappa_plus),
            Err(Error::InvalidStep { .. })
        ));
    }

    #[test]
    fn bell_diagonal_states() {
        let mixed = bell_diagonal(0.0, 0.0, 0.0).unwrap();
        assert!(max_abs(&(mixed.matrix() - DensityMatrix4::maximally_mixed().matrix())) < 1e-15);
        let singlet = bell_diagonal(-1.0, -1.0, -1.0).unwrap();
        assert!(max_abs(&(singlet.matrix() - DensityMatrix4::singlet().matrix())) < 1e-15);
        let triplet = bell_diagonal(1.0, 1.0, -1.0).unwrap();
        let mut ev: Vec<f64> = triplet.eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (v, e) in ev.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        assert!((tau_of_state(&triplet) - 1.0).abs() < 1e-15);
        assert!(matches!(
            bell_diagonal(1.0, 1.0, 1.0),
            Err(Error::NotAState { .. })
        ));
        assert!(matches!(
            bell_diagonal(1.5, 0.0, 0.0),
            Err(Error::OutOfDomain { .. })
        ));
    }
}
