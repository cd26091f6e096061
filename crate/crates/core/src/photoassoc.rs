//! c-number photoassociation model: condensate atoms and molecules coupled
//! to a discretized continuum of noncondensate pair modes, plus the
//! Markovian (Wigner-Weisskopf) reduction in which the continuum collapses
//! to an exponential molecular loss at rate `pi |xi(0)|^2`.

use crate::error::{Error, Result};
use crate::numerics::OdeProblem;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// One discretized continuum mode.
#[derive(Debug, Clone, Copy)]
pub struct ContinuumMode {
    pub energy: f64,
    pub coupling: Complex64,
    pub weight: f64,
}

/// Molecular detuning, conversion coupling, and the discretized pair-mode
/// band.
#[derive(Debug, Clone)]
pub struct ContinuumModel {
    pub delta: f64,
    pub omega: Complex64,
    pub modes: Vec<ContinuumMode>,
}

impl ContinuumModel {
    pub fn new(delta: f64, omega: Complex64, modes: Vec<ContinuumMode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParams("continuum band is empty".into()));
        }
        if modes.windows(2).any(|w| w[1].energy <= w[0].energy) {
            return Err(Error::InvalidParams(
                "mode energies must be strictly increasing".into(),
            ));
        }
        if modes.iter().any(|m| !(m.weight > 0.0)) {
            return Err(Error::InvalidParams(
                "quadrature weights must be positive".into(),
            ));
        }
        Ok(ContinuumModel {
            delta,
            omega,
            modes,
        })
    }

    /// Uniform energy grid on `[-half_width, half_width]` with trapezoidal
    /// weights and constant coupling `xi0`.
    pub fn flat_band(
        xi0: f64,
        half_width: f64,
        n_modes: usize,
        delta: f64,
        omega: Complex64,
    ) -> Result<Self> {
        if n_modes < 2 || !(half_width > 0.0) {
            return Err(Error::InvalidParams(
                "flat band needs at least two modes and positive width".into(),
            ));
        }
        let de = 2.0 * half_width / (n_modes - 1) as f64;
        let modes = (0..n_modes)
            .map(|j| {
                let w = if j == 0 || j == n_modes - 1 {
                    0.5 * de
                } else {
                    de
                };
                ContinuumMode {
                    energy: -half_width + de * j as f64,
                    coupling: Complex64::new(xi0, 0.0),
                    weight: w,
                }
            })
            .collect();
        ContinuumModel::new(delta, omega, modes)
    }

    /// Markovian decay rate `pi |xi(0)|^2`, with the coupling evaluated at
    /// the mode nearest zero energy.
    pub fn markov_rate(&self) -> f64 {
        let nearest = self
            .modes
            .iter()
            .min_by(|a, b| a.energy.abs().partial_cmp(&b.energy.abs()).unwrap())
            .expect("nonempty band");
        PI * nearest.coupling.norm_sqr()
    }
}

/// c-number amplitudes: atomic, molecular, and one per pair mode.
#[derive(Debug, Clone)]
pub struct PAState {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub pair_modes: Vec<Complex64>,
}

impl PAState {
    /// Two-mode start with an empty continuum.
    pub fn condensate(alpha: Complex64, beta: Complex64, n_modes: usize) -> Self {
        PAState {
            alpha,
            beta,
            pair_modes: vec![Complex64::new(0.0, 0.0); n_modes],
        }
    }

    /// Conserved quadratic weight `|alpha|^2 + |beta|^2 + sum w_j |c_j|^2`.
    pub fn norm_q(&self, model: &ContinuumModel) -> f64 {
        let band: f64 = self
            .pair_modes
            .iter()
            .zip(&model.modes)
            .map(|(c, m)| m.weight * c.norm_sqr())
            .sum();
        self.alpha.norm_sqr() + self.beta.norm_sqr() + band
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Full coupled flow:
///
/// ```text
/// alpha' = i (Omega/sqrt2) conj(alpha) beta
/// beta'  = i delta beta + i (conj(Omega)/sqrt2) alpha^2 + i sum_j w_j xi_j c_j
/// c_j'   = -i eps_j c_j + i conj(xi_j) beta
/// ```
pub fn continuum_rhs(s: &PAState, model: &ContinuumModel) -> Result<PAState> {
    if s.pair_modes.len() != model.modes.len() {
        return Err(Error::DimensionMismatch(format!(
            "state has {} pair modes, model {}",
            s.pair_modes.len(),
            model.modes.len()
        )));
    }
    let band: Complex64 = s
        .pair_modes
        .iter()
        .zip(&model.modes)
        .map(|(c, m)| m.weight * m.coupling * c)
        .sum();
    let alpha_dot = I * model.omega * FRAC_1_SQRT_2 * s.alpha.conj() * s.beta;
    let beta_dot = I * model.delta * s.beta
        + I * model.omega.conj() * FRAC_1_SQRT_2 * s.alpha * s.alpha
        + I * band;
    let pair_dot = s
        .pair_modes
        .iter()
        .zip(&model.modes)
        .map(|(c, m)| -I * m.energy * c + I * m.coupling.conj() * s.beta)
        .collect();
    Ok(PAState {
        alpha: alpha_dot,
        beta: beta_dot,
        pair_modes: pair_dot,
    })
}

/// Markovian reduction: the continuum becomes a molecular decay at
/// `Gamma = pi |xi(0)|^2`; the atomic equation is untouched.
pub fn markov_rhs(
    alpha: Complex64,
    beta: Complex64,
    model: &ContinuumModel,
) -> (Complex64, Complex64) {
    let gamma = model.markov_rate();
    let alpha_dot = I * model.omega * FRAC_1_SQRT_2 * alpha.conj() * beta;
    let beta_dot = I * model.delta * beta + I * model.omega.conj() * FRAC_1_SQRT_2 * alpha * alpha
        - gamma * beta;
    (alpha_dot, beta_dot)
}

/// Which description to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaVariant {
    Continuum,
    Markov,
}

/// Observables sampled along a photoassociation run.
#[derive(Debug, Clone, Copy)]
pub struct PaSample {
    pub alpha_sq: f64,
    pub beta_sq: f64,
    /// Conserved weight for the continuum variant; `|alpha|^2 + |beta|^2`
    /// for the Markov variant.
    pub norm: f64,
}

/// Integrate either variant from `s0` (the Markov variant ignores the pair
/// modes), sampling at the grid times.
pub fn evolve_pa(
    s0: &PAState,
    model: &ContinuumModel,
    tgrid: &[f64],
    rtol: f64,
    atol: f64,
    variant: PaVariant,
) -> Result<Vec<PaSample>> {
    match variant {
        PaVariant::Markov => {
            let y0 = [s0.alpha.re, s0.alpha.im, s0.beta.re, s0.beta.im];
            let problem = OdeProblem::with_tols(4, rtol, atol);
            let sol = problem.integrate(
                |_, y, dy| {
                    let (da, db) = markov_rhs(
                        Complex64::new(y[0], y[1]),
                        Complex64::new(y[2], y[3]),
                        model,
                    );
                    dy[0] = da.re;
                    dy[1] = da.im;
                    dy[2] = db.re;
                    dy[3] = db.im;
                },
                &y0,
                tgrid,
            )?;
            Ok(sol
                .states
                .iter()
                .map(|y| {
                    let a2 = y[0] * y[0] + y[1] * y[1];
                    let b2 = y[2] * y[2] + y[3] * y[3];
                    PaSample {
                        alpha_sq: a2,
                        beta_sq: b2,
                        norm: a2 + b2,
                    }
                })
                .collect())
        }
        PaVariant::Continuum => {
            if s0.pair_modes.len() != model.modes.len() {
                return Err(Error::DimensionMismatch(format!(
                    "state has {} pair modes, model {}",
                    s0.pair_modes.len(),
                    model.modes.len()
                )));
            }
            let m = model.modes.len();
            let dim = 2 * (2 + m);
            let mut y0 = Vec::with_capacity(dim);
            y0.extend_from_slice(&[s0.alpha.re, s0.alpha.im, s0.beta.re, s0.beta.im]);
            for c in &s0.pair_modes {
                y0.push(c.re);
                y0.push(c.im);
            }
            let problem = OdeProblem::with_tols(dim, rtol, atol);
            let sol = problem.integrate(
                |_, y, dy| {
                    let alpha = Complex64::new(y[0], y[1]);
                    let beta = Complex64::new(y[2], y[3]);
                    // alpha'
                    let da = I * model.omega * FRAC_1_SQRT_2 * alpha.conj() * beta;
                    dy[0] = da.re;
                    dy[1] = da.im;
                    // beta' accumulates the band term below.
                    let mut db = I * model.delta * beta
                        + I * model.omega.conj() * FRAC_1_SQRT_2 * alpha * alpha;
                    for (j, mode) in model.modes.iter().enumerate() {
                        let c = Complex64::new(y[4 + 2 * j], y[5 + 2 * j]);
                        db += I * mode.weight * mode.coupling * c;
                        let dc = -I * mode.energy * c + I * mode.coupling.conj() * beta;
                        dy[4 + 2 * j] = dc.re;
                        dy[5 + 2 * j] = dc.im;
                    }
                    dy[2] = db.re;
                    dy[3] = db.im;
                },
                &y0,
                tgrid,
            )?;
            Ok(sol
                .states
                .iter()
                .map(|y| {
                    let a2 = y[0] * y[0] + y[1] * y[1];
                    let b2 = y[2] * y[2] + y[3] * y[3];
                    let band: f64 = model
                        .modes
                        .iter()
                        .enumerate()
                        .map(|(j, mode)| {
                            mode.weight
                                * (y[4 + 2 * j] * y[4 + 2 * j] + y[5 + 2 * j] * y[5 + 2 * j])
                        })
                        .sum();
                    PaSample {
                        alpha_sq: a2,
                        beta_sq: b2,
                        norm: a2 + b2 + band,
                    }
                })
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn default_model(half_width: f64, n_modes: usize) -> ContinuumModel {
        ContinuumModel::flat_band(0.5, half_width, n_modes, 0.0, Complex64::new(1.0, 0.0))
            .unwrap()
    }

    #[test]
    fn flat_band_construction() {
        let m = default_model(50.0, 2000);
        assert_eq!(m.modes.len(), 2000);
        assert!((m.markov_rate() - PI * 0.25).abs() < 1e-14);
        let total_weight: f64 = m.modes.iter().map(|x| x.weight).sum();
        assert!((total_weight - 100.0).abs() < 1e-9);
        assert!(ContinuumModel::flat_band(0.5, 0.0, 100, 0.0, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn decoupled_band_freezes_amplitudes() {
        // Omega = 0 and xi = 0: alpha frozen, modes rotate freely.
        let mut modes = default_model(5.0, 11).modes;
        for m in modes.iter_mut() {
            m.coupling = Complex64::new(0.0, 0.0);
        }
        let model = ContinuumModel::new(0.0, Complex64::new(0.0, 0.0), modes).unwrap();
        let mut s = PAState::condensate(Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.1), 11);
        s.pair_modes[4] = Complex64::new(0.2, -0.1);
        let d = continuum_rhs(&s, &model).unwrap();
        assert_eq!(d.alpha, Complex64::new(0.0, 0.0));
        assert_eq!(d.beta, Complex64::new(0.0, 0.0));
        let expect = -I * model.modes[4].energy * s.pair_modes[4];
        assert!((d.pair_modes[4] - expect).norm() < 1e-15);
    }

    #[test]
    fn atoms_frozen_until_molecules_seed() {
        let model = default_model(5.0, 11);
        let s = PAState::condensate(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 11);
        let d = continuum_rhs(&s, &model).unwrap();
        assert_eq!(d.alpha, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn quadratic_weight_conserved_pointwise() {
        // dQ/dt = 2 Re(conj(alpha) alpha' + conj(beta) beta'
        //              + sum w_j conj(c_j) c_j') = 0 on any state.
        let model = default_model(7.0, 31);
        let mut seed = 42u64;
        let mut next = move || {
            seed = seed.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = seed;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..5 {
            let s = PAState {
                alpha: Complex64::new(next(), next()),
                beta: Complex64::new(next(), next()),
                pair_modes: (0..31).map(|_| Complex64::new(next(), next())).collect(),
            };
            let d = continuum_rhs(&s, &model).unwrap();
            let mut dq = 2.0 * (s.alpha.conj() * d.alpha + s.beta.conj() * d.beta).re;
            for ((c, dc), m) in s.pair_modes.iter().zip(&d.pair_modes).zip(&model.modes) {
                dq += 2.0 * m.weight * (c.conj() * dc).re;
            }
            assert!(dq.abs() < 1e-12, "dQ/dt = {dq:e}");
        }
    }

    #[test]
    fn markov_pure_exponential_without_conversion() {
        let model =
            ContinuumModel::flat_band(0.5, 50.0, 200, 0.0, Complex64::new(0.0, 0.0)).unwrap();
        let gamma = model.markov_rate();
        let s0 = PAState::condensate(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0), 0);
        let grid = linspace(0.0, 2.0, 21);
        let traj = evolve_pa(&s0, &model, &grid, 1e-11, 1e-14, PaVariant::Markov).unwrap();
        for (i, s) in traj.iter().enumerate() {
            let expect = 0.1 * (-gamma * grid[i]).exp();
            assert!(
                (s.beta_sq.sqrt() - expect).abs() < 1e-9,
                "t={}: {} vs {expect}",
                grid[i],
                s.beta_sq.sqrt()
            );
        }
    }

    #[test]
    fn markov_norm_nonincreasing() {
        let model = default_model(50.0, 200);
        let s0 = PAState::condensate(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0), 0);
        let grid = linspace(0.0, 4.0, 81);
        let traj = evolve_pa(&s0, &model, &grid, 1e-10, 1e-12, PaVariant::Markov).unwrap();
        for w in traj.windows(2) {
            assert!(w[1].norm <= w[0].norm + 1e-10);
        }
    }

    #[test]
    fn markov_alpha_equation_matches_continuum() {
        let model = default_model(5.0, 11);
        let s = PAState::condensate(Complex64::new(0.8, 0.1), Complex64::new(0.2, -0.3), 11);
        let dc = continuum_rhs(&s, &model).unwrap();
        let (da, _) = markov_rhs(s.alpha, s.beta, &model);
        assert!((dc.alpha - da).norm() < 1e-15);
    }

    /// Shared experiment: flat band, `Omega = 1`, `delta = 0`, seeded
    /// molecular amplitude. Returns the max relative deviation of |beta|
    /// between the two variants over `[t_lo, 3/Gamma]`, plus the worst
    /// continuum norm drift.
    fn ww_deviation(half_width_in_gamma: f64, n_modes: usize) -> (f64, f64, f64) {
        let xi0 = 0.5;
        let gamma = PI * xi0 * xi0;
        let model = ContinuumModel::flat_band(
            xi0,
            half_width_in_gamma * gamma,
            n_modes,
            0.0,
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let s0 = PAState::condensate(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0), n_modes);
        let grid = linspace(0.0, 3.0 / gamma, 121);
        let full = evolve_pa(&s0, &model, &grid, 1e-10, 1e-12, PaVariant::Continuum).unwrap();
        let markov = evolve_pa(&s0, &model, &grid, 1e-10, 1e-12, PaVariant::Markov).unwrap();
        let q0 = full[0].norm;
        let mut max_rel: f64 = 0.0;
        let mut max_drift: f64 = 0.0;
        let mut short_time_dev: f64 = 0.0;
        for (i, (f, m)) in full.iter().zip(&markov).enumerate() {
            let rel = (f.beta_sq.sqrt() - m.beta_sq.sqrt()).abs() / m.beta_sq.sqrt();
            max_rel = max_rel.max(rel);
            max_drift = max_drift.max((f.norm - q0).abs());
            if grid[i] <= 0.01 / gamma {
                short_time_dev =
                    short_time_dev.max((f.beta_sq.sqrt() - m.beta_sq.sqrt()).abs());
            }
        }
        (max_rel, max_drift, short_time_dev)
    }

    #[test]
    fn wigner_weisskopf_reduction() {
        let (rel, drift, short) = ww_deviation(50.0 / (PI * 0.25), 2000);
        assert!(rel < 0.05, "relative |beta| deviation {rel}");
        assert!(drift < 1e-8, "norm drift {drift:e}");
        assert!(short < 1e-4, "short-time deviation {short:e}");
    }

    #[test]
    fn markov_limit_improves_with_band() {
        let (coarse, _, _) = ww_deviation(10.0, 500);
        let (mid, _, _) = ww_deviation(50.0, 500);
        let (fine, _, _) = ww_deviation(50.0, 2000);
        assert!(
            fine <= mid + 1e-12 && mid <= coarse + 1e-12,
            "deviations not decreasing: {coarse} -> {mid} -> {fine}"
        );
    }
}
