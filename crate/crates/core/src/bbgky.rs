//! Second-order moment closure (backreaction equations): nine coupled ODEs
//! for the Bloch vector and the symmetrized fluctuations, their fixed point
//! at zero binding energy, stability in the (Fy, Fz) subspace, and the
//! combined regime classification against the mean-field prediction.
//!
//! Third moments are split into products of first and second moments; the
//! fluctuations then drive the Bloch vector and are driven back by it, which
//! takes trajectories off the generalized Bloch sphere surface.

use crate::error::{Error, Result};
use crate::fock::SystemParams;
use crate::meanfield::{mft_stability, split_eigenvalues};
use crate::numerics::{real_eigenvalues_small, OdeProblem};
use crate::stability::{FixedPoint, RegimeLabel, StabilityClass, StabilityReport, Theory};
use crate::state::MomentState;

/// Time derivative of the nine-component moment state.
pub fn bbr_rhs(s: &MomentState, params: &SystemParams) -> MomentState {
    let delta = params.delta();
    let r = params.r_offset();
    let eps = params.eps();
    let gamma = params.gamma();
    MomentState {
        fx: eps * s.fy - 16.0 * gamma * s.fx,
        fy: -eps * s.fx - delta * s.fz + 1.5 * delta * (0.5 * s.kzz + s.fz * s.fz)
            - 16.0 * gamma * s.fy
            - r,
        fz: 2.0 * delta * s.fy,
        kxx: 2.0 * eps * s.kxy - 32.0 * gamma * s.kxx + 32.0 * gamma * s.kyy
            + 64.0 * gamma * s.fy * s.fy,
        kyy: -2.0 * eps * s.kxy - 2.0 * delta * s.kyz + 6.0 * delta * s.fz * s.kyz
            - 32.0 * gamma * s.kyy
            + 32.0 * gamma * s.kxx
            + 64.0 * gamma * s.fx * s.fx,
        kzz: 4.0 * delta * s.kyz,
        kxy: -eps * s.kxx - delta * s.kxz + 3.0 * delta * s.fz * s.kxz + eps * s.kyy
            - 64.0 * gamma * s.kxy
            - 64.0 * gamma * s.fx * s.fy,
        kyz: 2.0 * delta * s.kyy - eps * s.kxz - delta * s.kzz + 3.0 * delta * s.fz * s.kzz
            - 16.0 * gamma * s.kyz,
        kxz: 2.0 * delta * s.kxy + eps * s.kyz - 16.0 * gamma * s.kxz,
    }
}

/// Integrate the backreaction equations, sampling at the grid times.
pub fn evolve_bbr(
    s0: &MomentState,
    params: &SystemParams,
    tgrid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<MomentState>> {
    let problem = OdeProblem::with_tols(9, rtol, atol);
    let sol = problem.integrate(
        |_, y, dy| {
            let d = bbr_rhs(
                &MomentState::from_array([
                    y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], y[8],
                ]),
                params,
            );
            dy.copy_from_slice(&d.to_array());
        },
        &s0.to_array(),
        tgrid,
    )?;
    Ok(sol
        .states
        .into_iter()
        .map(|y| MomentState::from_array([y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], y[8]]))
        .collect())
}

/// Fixed point of the backreaction flow at zero binding energy:
/// vanishing Bloch vector and cross fluctuations,
/// `Kzz = 2/3 + 8/(3N)`, `Kxx = Kyy = Kzz/2`.
pub fn bbr_fixed_point(params: &SystemParams) -> Result<MomentState> {
    if params.eps() != 0.0 {
        return Err(Error::InvalidParams(
            "backreaction fixed point requires eps = 0".into(),
        ));
    }
    let kzz = 2.0 / 3.0 + 8.0 / (3.0 * params.n_f());
    Ok(MomentState {
        fx: 0.0,
        fy: 0.0,
        fz: 0.0,
        kxx: 0.5 * kzz,
        kyy: 0.5 * kzz,
        kzz,
        kxy: 0.0,
        kxz: 0.0,
        kyz: 0.0,
    })
}

/// Smallest dephasing rate at which the backreaction fixed point is a
/// junction: `64 Gamma^2 = N g^2`.
pub fn bbr_junction_threshold(params: &SystemParams) -> f64 {
    params.g() * params.n_f().sqrt() / 8.0
}

/// Linearized flow about the backreaction fixed point, restricted to
/// fluctuations in (Fy, Fz):
/// `(dfy' , dfz') = (-16 Gamma dfy - Delta dfz, 2 Delta dfy)`.
pub fn fluctuation_rhs(df: (f64, f64), params: &SystemParams) -> Result<(f64, f64)> {
    if params.eps() != 0.0 {
        return Err(Error::InvalidParams(
            "fluctuation analysis requires eps = 0".into(),
        ));
    }
    let (dfy, dfz) = df;
    let delta = params.delta();
    Ok((
        -16.0 * params.gamma() * dfy - delta * dfz,
        2.0 * delta * dfy,
    ))
}

/// Stability of the backreaction fixed point in the (Fy, Fz) subspace.
pub fn bbr_stability(params: &SystemParams) -> Result<StabilityReport> {
    let fp = bbr_fixed_point(params)?;
    let gamma = params.gamma();
    let disc = 256.0 * gamma * gamma - 4.0 * params.n_f() * params.g() * params.g();
    let eigenvalues = split_eigenvalues(gamma, disc);
    let class = if disc >= 0.0 {
        StabilityClass::StableJunction
    } else {
        StabilityClass::StableFocus
    };
    Ok(StabilityReport {
        theory: Theory::Backreaction,
        fixed_point: FixedPoint::Moments(fp),
        eigenvalues,
        class,
    })
}

/// Combined regime of the two closures. The mean-field junction threshold
/// always lies above the backreaction one, so exactly three regimes occur;
/// in the band between the thresholds the backreaction theory predicts a
/// junction while mean-field predicts a focus.
pub fn regime_classify(params: &SystemParams) -> Result<RegimeLabel> {
    if !(params.gamma() > 0.0) {
        return Err(Error::InvalidParams(
            "regime classification requires gamma > 0".into(),
        ));
    }
    let mft = mft_stability(params)?.class;
    let bbr = bbr_stability(params)?.class;
    Ok(match (bbr, mft) {
        (StabilityClass::StableJunction, StabilityClass::StableJunction) => {
            RegimeLabel::BothJunction
        }
        (StabilityClass::StableFocus, StabilityClass::StableFocus) => RegimeLabel::BothFocus,
        (StabilityClass::StableJunction, StabilityClass::StableFocus) => RegimeLabel::Mixed,
        (StabilityClass::StableFocus, StabilityClass::StableJunction) => {
            // Impossible: the thresholds are strictly ordered.
            unreachable!("mean-field junction implies backreaction junction")
        }
    })
}

/// Numerical Jacobian spectrum of the full nine-dimensional flow at the
/// fixed point. Supplementary output; the stability contract lives in the
/// (Fy, Fz) subspace.
pub fn bbr_full_jacobian_eigenvalues(
    params: &SystemParams,
) -> Result<Vec<num_complex::Complex64>> {
    let fp = bbr_fixed_point(params)?;
    let base = fp.to_array();
    let h = 1e-6;
    let mut jac = vec![0.0; 81];
    for col in 0..9 {
        let mut plus = base;
        let mut minus = base;
        plus[col] += h;
        minus[col] -= h;
        let dp = bbr_rhs(&MomentState::from_array(plus), params).to_array();
        let dm = bbr_rhs(&MomentState::from_array(minus), params).to_array();
        for row in 0..9 {
            jac[row * 9 + col] = (dp[row] - dm[row]) / (2.0 * h);
        }
    }
    real_eigenvalues_small(&jac, 9)
}
