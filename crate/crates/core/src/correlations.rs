//! Local quantum uncertainty of the equilibrium state.
//!
//! For a qubit probe the minimal skew information over local observables is
//! `1 − λ_max(Π)` with `Πᵢⱼ = Tr[√ρ (sᵢ⊗s₀) √ρ (sⱼ⊗s₀)]`. For the X-family
//! `Π` is diagonal with `Π₁₁ = Π₂₂`, which gives the closed forms below.

use nalgebra::{Matrix3, SymmetricEigen};

use crate::equilibrium::xstate_at;
use crate::error::{Error, Result};
use crate::params::check_tau;
use crate::ratio::Ratio;
use crate::state::{hermitian_eigen, pauli_product, DensityMatrix4, Mat4, C64};

const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-8;
const CLAMP_TOL: f64 = 1e-12;
const RANK_CUTOFF: f64 = 64.0 * f64::EPSILON;

/// LQU together with the two candidate maxima of `Π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LquValue {
    pub value: f64,
    pub theta11: f64,
    pub theta33: f64,
}

/// `(ϑ₁₁, ϑ₃₃)` for the equilibrium state at ratio `t`.
pub fn theta_closed(t: f64, tau: f64) -> Result<(f64, f64)> {
    theta_closed_at(Ratio::new(t)?, tau)
}

pub fn theta_closed_at(ratio: Ratio, tau: f64) -> Result<(f64, f64)> {
    check_tau(tau)?;
    let x = xstate_at(ratio, tau)?;
    let c = tau + 3.0;
    let d = ratio.sq() + 3.0;
    let gap = ratio.one_minus_sq();
    let theta11 = 0.5
        * (x.eta_minus.sqrt() + x.eta_plus.sqrt())
        * ((1.0 - tau).sqrt() + (gap * c / d).sqrt());
    let theta33 = c / 2.0 - c / d + ((1.0 - tau) * gap * c / (4.0 * d)).sqrt();
    Ok((theta11, theta33))
}

fn clamp_unit(v: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&v) {
        0.0
    } else if v > 1.0 && v <= 1.0 + CLAMP_TOL {
        1.0
    } else {
        v
    }
}

/// `1 − max(ϑ₁₁, ϑ₃₃)`.
pub fn lqu_closed(t: f64, tau: f64) -> Result<LquValue> {
    lqu_closed_at(Ratio::new(t)?, tau)
}

pub fn lqu_closed_at(ratio: Ratio, tau: f64) -> Result<LquValue> {
    let (theta11, theta33) = theta_closed_at(ratio, tau)?;
    Ok(LquValue {
        value: clamp_unit(1.0 - theta11.max(theta33)),
        theta11,
        theta33,
    })
}

/// `√ρ` by spectral decomposition.
///
/// Eigenvalues at or below the numerical rank cutoff `64·ε·λ_max` are set to
/// zero: the square root would otherwise turn round-off of order `1e-17` on
/// rank-deficient states into entries of order `1e-9`.
pub fn sqrt_psd(rho: &DensityMatrix4) -> Result<Mat4> {
    let (values, vectors) = hermitian_eigen(rho.matrix());
    let min = values.min();
    if min < -NEGATIVE_EIGENVALUE_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let cutoff = RANK_CUTOFF * values.max().max(0.0);
    let root = Mat4::from_diagonal(&values.map(|v| {
        let v = if v <= cutoff { 0.0 } else { v };
        C64::new(v.sqrt(), 0.0)
    }));
    Ok(vectors * root * vectors.adjoint())
}

/// Which detector the local observable acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// The 3×3 matrix `Π`, before symmetrization. Complex so that callers can
/// inspect how far it is from real-symmetric.
pub fn skew_matrix(rho: &DensityMatrix4, side: Subsystem) -> Result<Matrix3<C64>> {
    let root = sqrt_psd(rho)?;
    let local = |i: usize| match side {
        Subsystem::A => pauli_product(i, 0),
        Subsystem::B => pauli_product(0, i),
    };
    let ops = [local(1), local(2), local(3)];
    let sandwiched: Vec<Mat4> = ops.iter().map(|op| root * op * root).collect();
    Ok(Matrix3::from_fn(|i, j| (sandwiched[i] * ops[j]).trace()))
}

/// LQU of an arbitrary two-qubit state with respect to detector (a).
pub fn lqu_oracle(rho: &DensityMatrix4) -> Result<LquValue> {
    lqu_oracle_on(rho, Subsystem::A)
}

pub fn lqu_oracle_on(rho: &DensityMatrix4, side: Subsystem) -> Result<LquValue> {
    let pi = skew_matrix(rho, side)?;
    let real = pi.map(|z| z.re);
    let sym = (real + real.transpose()) * 0.5;
    let lambda_max = SymmetricEigen::new(sym).eigenvalues.max();
    Ok(LquValue {
        value: clamp_unit(1.0 - lambda_max),
        theta11: sym[(0, 0)],
        theta33: sym[(2, 2)],
    })
}
