//! Adaptive Dormand-Prince 5(4) integrator with 4th-order dense output.
//!
//! One integrator backs every flow in the crate: the 3- and 9-component
//! moment closures, the photoassociation amplitudes, and the flattened
//! density matrix. States are flat `&[f64]` vectors; complex states are
//! interleaved re/im pairs. Output is sampled on a caller-supplied time grid
//! through the dense interpolant, decoupled from the internal step size.

use crate::error::{Error, Result};

/// Butcher tableau time fractions.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

/// Embedded error coefficients (5th minus 4th order weights).
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Dense-output coefficients.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Integration settings for a fixed-dimension problem.
#[derive(Debug, Clone)]
pub struct OdeProblem {
    pub dim: usize,
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl OdeProblem {
    pub fn new(dim: usize) -> Self {
        OdeProblem {
            dim,
            rtol: 1e-8,
            atol: 1e-10,
            max_step: f64::INFINITY,
            max_steps: 100_000_000,
        }
    }

    pub fn with_tols(dim: usize, rtol: f64, atol: f64) -> Self {
        OdeProblem {
            rtol,
            atol,
            ..OdeProblem::new(dim)
        }
    }

    fn validate(&self, y0: &[f64], tgrid: &[f64]) -> Result<()> {
        if self.dim == 0 || y0.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state length {} does not match problem dimension {}",
                y0.len(),
                self.dim
            )));
        }
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        if tgrid.len() < 2 {
            return Err(Error::InvalidParams(
                "time grid needs at least two points".into(),
            ));
        }
        if tgrid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams(
                "time grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Integrate `rhs` from `tgrid[0]` to the last grid time, sampling the
    /// dense interpolant at every grid time.
    pub fn integrate<F>(&self, rhs: F, y0: &[f64], tgrid: &[f64]) -> Result<OdeSolution>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        self.integrate_projected(rhs, |_: &mut [f64]| {}, y0, tgrid)
    }

    /// Like [`integrate`](Self::integrate), but applies `project` to the
    /// state after every accepted step (e.g. re-Hermitization of a flattened
    /// density matrix). The projection must be a small correction; the local
    /// error estimate does not see it.
    pub fn integrate_projected<F, P>(
        &self,
        mut rhs: F,
        mut project: P,
        y0: &[f64],
        tgrid: &[f64],
    ) -> Result<OdeSolution>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        P: FnMut(&mut [f64]),
    {
        self.validate(y0, tgrid)?;
        let n = self.dim;
        let t_end = *tgrid.last().unwrap();

        let mut y = y0.to_vec();
        let mut t = tgrid[0];
        let mut sol = OdeSolution {
            states: Vec::with_capacity(tgrid.len()),
            n_steps: 0,
            n_rejected: 0,
            n_rhs_evals: 0,
        };
        sol.states.push(y.clone());
        let mut grid_idx = 1;

        let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; n]).collect();
        let mut y_stage = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        let mut cont = vec![0.0; 5 * n];

        rhs(t, &y, &mut k[0]);
        sol.n_rhs_evals += 1;

        let mut h = self.initial_step(&mut rhs, t, &y, &k[0].clone(), &mut sol);
        let mut fac_old: f64 = 1e-4;
        let mut last_rejected = false;

        while grid_idx < tgrid.len() {
            if sol.n_steps + sol.n_rejected > self.max_steps {
                return Err(Error::StepLimit { t });
            }
            h = h.min(self.max_step).min(t_end - t);
            if h < f64::EPSILON * 16.0 * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t });
            }

            // Stages 2..6.
            for i in 0..n {
                y_stage[i] = y[i] + h * A21 * k[0][i];
            }
            rhs(t + C2 * h, &y_stage, &mut k[1]);
            for i in 0..n {
                y_stage[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
            }
            rhs(t + C3 * h, &y_stage, &mut k[2]);
            for i in 0..n {
                y_stage[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
            }
            rhs(t + C4 * h, &y_stage, &mut k[3]);
            for i in 0..n {
                y_stage[i] = y[i]
                    + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
            }
            rhs(t + C5 * h, &y_stage, &mut k[4]);
            for i in 0..n {
                y_stage[i] = y[i]
                    + h * (A61 * k[0][i]
                        + A62 * k[1][i]
                        + A63 * k[2][i]
                        + A64 * k[3][i]
                        + A65 * k[4][i]);
            }
            rhs(t + h, &y_stage, &mut k[5]);
            // 5th-order solution (stage 7 node).
            for i in 0..n {
                y_new[i] = y[i]
                    + h * (A71 * k[0][i]
                        + A73 * k[2][i]
                        + A74 * k[3][i]
                        + A75 * k[4][i]
                        + A76 * k[5][i]);
            }
            rhs(t + h, &y_new, &mut k[6]);
            sol.n_rhs_evals += 6;

            // Weighted RMS error norm.
            let mut err_sq = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * k[0][i]
                        + E3 * k[2][i]
                        + E4 * k[3][i]
                        + E5 * k[4][i]
                        + E6 * k[5][i]
                        + E7 * k[6][i]);
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err_sq += (e / scale) * (e / scale);
            }
            let err = (err_sq / n as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::NonFinite { t });
            }

            let fac11 = err.powf(0.2 - BETA * 0.75);
            if err <= 1.0 {
                // Accept: build the dense interpolant, emit grid points.
                for i in 0..n {
                    let ydiff = y_new[i] - y[i];
                    let bspl = h * k[0][i] - ydiff;
                    cont[i] = y[i];
                    cont[n + i] = ydiff;
                    cont[2 * n + i] = bspl;
                    cont[3 * n + i] = ydiff - h * k[6][i] - bspl;
                    cont[4 * n + i] = h
                        * (D1 * k[0][i]
                            + D3 * k[2][i]
                            + D4 * k[3][i]
                            + D5 * k[4][i]
                            + D6 * k[5][i]
                            + D7 * k[6][i]);
                }
                let t_new = t + h;
                let t_tol = 4.0 * f64::EPSILON * t_new.abs().max(1.0);
                while grid_idx < tgrid.len() && tgrid[grid_idx] <= t_new + t_tol {
                    let theta = ((tgrid[grid_idx] - t) / h).clamp(0.0, 1.0);
                    let theta1 = 1.0 - theta;
                    let state: Vec<f64> = (0..n)
                        .map(|i| {
                            cont[i]
                                + theta
                                    * (cont[n + i]
                                        + theta1
                                            * (cont[2 * n + i]
                                                + theta
                                                    * (cont[3 * n + i]
                                                        + theta1 * cont[4 * n + i])))
                        })
                        .collect();
                    sol.states.push(state);
                    grid_idx += 1;
                }

                t = t_new;
                y.copy_from_slice(&y_new);
                project(&mut y);
                if grid_idx < tgrid.len() {
                    rhs(t, &y, &mut k[0]);
                    sol.n_rhs_evals += 1;
                }
                sol.n_steps += 1;

                let mut fac = fac11 / fac_old.powf(BETA);
                fac_old = err.max(1e-4);
                fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_new = h / fac;
                if last_rejected {
                    h_new = h_new.min(h);
                }
                last_rejected = false;
                h = h_new;
            } else {
                sol.n_rejected += 1;
                last_rejected = true;
                h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            }
        }

        Ok(sol)
    }

    /// Starting step size estimate (Hairer's two-trial heuristic).
    fn initial_step<F>(&self, rhs: &mut F, t0: f64, y0: &[f64], f0: &[f64], sol: &mut OdeSolution) -> f64
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = self.dim;
        let sci: Vec<f64> = y0
            .iter()
            .map(|&v| self.atol + self.rtol * v.abs())
            .collect();
        let d0 = rms(y0, &sci);
        let d1 = rms(f0, &sci);
        let h0 = if d0 < 1e-10 || d1 < 1e-10 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let h0 = h0.min(self.max_step);

        let y1: Vec<f64> = y0.iter().zip(f0).map(|(&y, &f)| y + h0 * f).collect();
        let mut f1 = vec![0.0; n];
        rhs(t0 + h0, &y1, &mut f1);
        sol.n_rhs_evals += 1;
        let df: Vec<f64> = f1.iter().zip(f0).map(|(&a, &b)| a - b).collect();
        let d2 = rms(&df, &sci) / h0;

        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dm).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.max_step)
    }
}

fn rms(v: &[f64], scale: &[f64]) -> f64 {
    let s: f64 = v
        .iter()
        .zip(scale)
        .map(|(&x, &w)| (x / w) * (x / w))
        .sum();
    (s / v.len() as f64).sqrt()
}

/// States sampled at the requested grid times plus step statistics.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub states: Vec<Vec<f64>>,
    pub n_steps: usize,
    pub n_rejected: usize,
    pub n_rhs_evals: usize,
}
