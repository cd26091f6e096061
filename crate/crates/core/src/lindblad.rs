//! Exact dynamics of the density matrix under the dephasing master equation
//!
//! ```text
//! drho/dt = -i [H, rho] - Gamma [l, [l, rho]]
//! ```
//!
//! With the population difference `l` diagonal, the double commutator acts
//! elementwise: matrix element `(m, n)` is damped at the rate
//! `16 Gamma (m - n)^2`, so coherences decay while populations mix only
//! through the Hamiltonian.

use crate::error::{Error, Result};
use crate::fock::{
    build_hamiltonian, build_lindblad_op, DensityMatrix, FockBasis, MomentCache, SystemParams,
};
use crate::matrix::CMat;
use crate::numerics::OdeProblem;
use crate::state::MomentState;
use num_complex::Complex64;
use std::io::Write;

pub use crate::fock::{check_density, DensityCheck};

/// Right-hand side of the master equation for an arbitrary density matrix.
/// General dense evaluation; the evolver uses an equivalent banded fast
/// path (see `FlatRhs`).
pub fn lindblad_rhs(rho: &DensityMatrix, params: &SystemParams) -> Result<CMat> {
    if rho.dim() != params.dim() {
        return Err(Error::DimensionMismatch(format!(
            "density matrix dim {} vs sector dim {}",
            rho.dim(),
            params.dim()
        )));
    }
    let h = build_hamiltonian(params);
    let ell = build_lindblad_op(params);
    let commutator = h.mat.commutator(&rho.mat);
    let double = ell.mat.commutator(&ell.mat.commutator(&rho.mat));
    Ok(commutator
        .scale(Complex64::new(0.0, -1.0))
        .sub(&double.scale(Complex64::new(params.gamma(), 0.0))))
}

/// Banded master-equation RHS on the flat interleaved re/im layout.
struct FlatRhs {
    dim: usize,
    diag: Vec<f64>,
    off: Vec<f64>,
    damp: Vec<f64>,
}

impl FlatRhs {
    fn new(params: &SystemParams) -> Self {
        let h = build_hamiltonian(params);
        let d = params.dim();
        let diag: Vec<f64> = (0..d).map(|i| h.mat[(i, i)].re).collect();
        let off: Vec<f64> = (0..d - 1).map(|i| h.mat[(i, i + 1)].re).collect();
        let mut damp = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let k = i as f64 - j as f64;
                damp[i * d + j] = 16.0 * params.gamma() * k * k;
            }
        }
        FlatRhs {
            dim: d,
            diag,
            off,
            damp,
        }
    }

    #[inline]
    fn eval(&self, y: &[f64], dy: &mut [f64]) {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let idx = 2 * (i * d + j);
                // [H, rho]_{ij} with tridiagonal H.
                let mut cr = (self.diag[i] - self.diag[j]) * y[idx];
                let mut ci = (self.diag[i] - self.diag[j]) * y[idx + 1];
                if i > 0 {
                    let e = self.off[i - 1];
                    let k = 2 * ((i - 1) * d + j);
                    cr += e * y[k];
                    ci += e * y[k + 1];
                }
                if i + 1 < d {
                    let e = self.off[i];
                    let k = 2 * ((i + 1) * d + j);
                    cr += e * y[k];
                    ci += e * y[k + 1];
                }
                if j > 0 {
                    let e = self.off[j - 1];
                    let k = 2 * (i * d + (j - 1));
                    cr -= e * y[k];
                    ci -= e * y[k + 1];
                }
                if j + 1 < d {
                    let e = self.off[j];
                    let k = 2 * (i * d + (j + 1));
                    cr -= e * y[k];
                    ci -= e * y[k + 1];
                }
                // drho = -i [H, rho] - damp * rho
                let g = self.damp[i * d + j];
                dy[idx] = ci - g * y[idx];
                dy[idx + 1] = -cr - g * y[idx + 1];
            }
        }
    }
}

fn flatten(rho: &CMat) -> Vec<f64> {
    let mut y = Vec::with_capacity(2 * rho.data().len());
    for z in rho.data() {
        y.push(z.re);
        y.push(z.im);
    }
    y
}

fn unflatten(y: &[f64], dim: usize) -> CMat {
    let mut m = CMat::zeros(dim);
    for (k, z) in m.data_mut().iter_mut().enumerate() {
        *z = Complex64::new(y[2 * k], y[2 * k + 1]);
    }
    m
}

/// Observables extracted at one grid time.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub moments: MomentState,
    /// Second moment `<Lz^2>`.
    pub lz2: f64,
    /// Atom fraction `(1 - Fz)/2`.
    pub na_over_n: f64,
    pub trace_err: f64,
    pub herm_err: f64,
    pub min_eig: f64,
}

/// Time series of observables plus the final state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub final_state: DensityMatrix,
    /// Per-step Hermiticity drift removed by the projection, maximized over
    /// the run.
    pub max_step_herm_drift: f64,
    /// Stored states at every grid time, when requested.
    pub snapshots: Vec<(f64, DensityMatrix)>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    /// Fixed CSV schema:
    /// `t,Fx,Fy,Fz,Na_over_N,Lz2,Kxx,Kyy,Kzz,Kxy,Kxz,Kyz,trace_err,min_eig`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "t,Fx,Fy,Fz,Na_over_N,Lz2,Kxx,Kyy,Kzz,Kxy,Kxz,Kyz,trace_err,min_eig"
        )?;
        for p in &self.points {
            let m = &p.moments;
            writeln!(
                w,
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                p.t, m.fx, m.fy, m.fz, p.na_over_n, p.lz2, m.kxx, m.kyy, m.kzz, m.kxy,
                m.kxz, m.kyz, p.trace_err, p.min_eig
            )?;
        }
        Ok(())
    }
}

/// Settings for the exact evolution.
#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Keep a copy of the density matrix at every grid time.
    pub store_snapshots: bool,
    /// Compute the smallest eigenvalue at each grid time (the dominant
    /// sampling cost for larger sectors).
    pub track_min_eig: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            rtol: 1e-8,
            atol: 1e-10,
            store_snapshots: false,
            track_min_eig: true,
        }
    }
}

/// Integrate the master equation from `rho0`, sampling observables at the
/// grid times. The state is re-Hermitized after every accepted step;
/// positivity is monitored through the reported smallest eigenvalue but
/// never enforced.
pub fn evolve_exact(
    rho0: &DensityMatrix,
    params: &SystemParams,
    tgrid: &[f64],
    options: &EvolveOptions,
) -> Result<Trajectory> {
    if rho0.dim() != params.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state dim {} vs sector dim {}",
            rho0.dim(),
            params.dim()
        )));
    }
    let d = params.dim();
    let rhs = FlatRhs::new(params);
    let cache = MomentCache::new(params);

    let mut max_drift: f64 = 0.0;
    let problem = OdeProblem::with_tols(2 * d * d, options.rtol, options.atol);
    let sol = problem.integrate_projected(
        |_t, y, dy| rhs.eval(y, dy),
        |y: &mut [f64]| {
            // Hermitize in place: pairs (i,j)/(j,i) averaged.
            let mut drift: f64 = 0.0;
            for i in 0..d {
                let di = 2 * (i * d + i);
                drift = drift.max(y[di + 1].abs());
                y[di + 1] = 0.0;
                for j in i + 1..d {
                    let up = 2 * (i * d + j);
                    let lo = 2 * (j * d + i);
                    let re = 0.5 * (y[up] + y[lo]);
                    let im = 0.5 * (y[up + 1] - y[lo + 1]);
                    drift = drift.max((y[up] - re).hypot(y[up + 1] - im));
                    y[up] = re;
                    y[up + 1] = im;
                    y[lo] = re;
                    y[lo + 1] = -im;
                }
            }
            max_drift = max_drift.max(drift);
        },
        &flatten(&rho0.mat),
        tgrid,
    )?;

    let mut points = Vec::with_capacity(tgrid.len());
    let mut snapshots = Vec::new();
    let mut final_state = None;
    for (idx, flat) in sol.states.iter().enumerate() {
        let raw = unflatten(flat, d);
        let herm_err = raw.hermiticity_error();
        let mut clean = raw;
        clean.hermitize();
        let rho = DensityMatrix { mat: clean };
        let moments = cache.moments(&rho);
        let trace_err = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
        let min_eig = if options.track_min_eig {
            rho.mat.eigenvalues()?[0]
        } else {
            f64::NAN
        };
        points.push(TrajectoryPoint {
            t: tgrid[idx],
            lz2: moments.lz_squared(),
            na_over_n: moments.atom_fraction(),
            moments,
            trace_err,
            herm_err,
            min_eig,
        });
        if options.store_snapshots {
            snapshots.push((tgrid[idx], rho.clone()));
        }
        if idx == sol.states.len() - 1 {
            final_state = Some(rho);
        }
    }

    Ok(Trajectory {
        points,
        final_state: final_state.expect("grid has at least two points"),
        max_step_herm_drift: max_drift,
        snapshots,
    })
}

/// Unique steady state of the dephasing master equation: the uniform
/// mixture of the sector's Fock states. Requires `Gamma > 0`; without
/// dephasing every diagonal ensemble of Hamiltonian eigenstates is
/// stationary and the query is refused.
pub fn steady_state(params: &SystemParams) -> Result<DensityMatrix> {
    if !(params.gamma() > 0.0) {
        return Err(Error::InvalidParams(
            "steady state requires gamma > 0; it is not unique otherwise".into(),
        ));
    }
    DensityMatrix::maximally_mixed(params.n_total())
}

/// Total squared weight of the coherences, `sum_{m != n} |rho_{mn}|^2`.
pub fn offdiag_weight(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += rho.mat[(i, j)].norm_sqr();
            }
        }
    }
    acc
}

/// Trace distance `(1/2) sum |eig(r1 - r2)|`.
pub fn trace_distance(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    r1.mat.check_same_dim(&r2.mat)?;
    let diff = r1.mat.sub(&r2.mat);
    let eigs = diff.eigenvalues()?;
    Ok(0.5 * eigs.iter().map(|e| e.abs()).sum::<f64>())
}

/// Energy expectation `Tr(rho H)`.
pub fn energy(rho: &DensityMatrix, params: &SystemParams) -> f64 {
    build_hamiltonian(params).mat.trace_product(&rho.mat).re
}

/// Convenience: basis for the sector of `rho`.
pub fn sector_of(rho: &DensityMatrix) -> Result<FockBasis> {
    FockBasis::new(rho.n_total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_state;

    fn params(n: usize, g: f64, eps: f64, gamma: f64) -> SystemParams {
        SystemParams::new(n, g, eps, gamma).unwrap()
    }

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn random_density(n_total: usize, seed: u64) -> DensityMatrix {
        // Deterministic positive unit-trace matrix: rho = G G^dag / tr.
        let d = n_total / 2 + 1;
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = s;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let g = CMat::from_fn(d, |_, _| Complex64::new(next(), next()));
        let mut m = g.mul(&g.adjoint());
        let tr = m.trace().re;
        m = m.scale(Complex64::new(1.0 / tr, 0.0));
        DensityMatrix { mat: m }
    }

    #[test]
    fn rhs_uniform_is_stationary() {
        let p = params(20, 1.0, 7.0, 0.9);
        let rho = DensityMatrix::maximally_mixed(20).unwrap();
        let d = lindblad_rhs(&rho, &p).unwrap();
        assert!(d.max_abs() < 1e-14);
    }

    #[test]
    fn rhs_pure_state_commutator() {
        // Gamma = 0 from |0><0|: only the first off-diagonal responds, with
        // entry (1,0) equal to -i <1|H|0>.
        let p = params(10, 1.0, 3.0, 0.0);
        let rho = fock_state(0, 10).unwrap();
        let d = lindblad_rhs(&rho, &p).unwrap();
        let h = build_hamiltonian(&p);
        let expect = Complex64::new(0.0, -1.0) * h.mat[(1, 0)];
        assert!((d[(1, 0)] - expect).norm() < 1e-14);
        assert!((d[(0, 1)] - expect.conj()).norm() < 1e-14);
        let dim = p.dim();
        for i in 0..dim {
            for j in 0..dim {
                if !((i, j) == (1, 0) || (i, j) == (0, 1)) {
                    assert!(d[(i, j)].norm() < 1e-14, "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn rhs_traceless() {
        let p = params(12, 0.8, 2.0, 0.4);
        for seed in [1u64, 2, 3] {
            let rho = random_density(12, seed);
            let d = lindblad_rhs(&rho, &p).unwrap();
            assert!(d.trace().norm() < 1e-14);
        }
    }

    #[test]
    fn flat_rhs_matches_dense() {
        let p = params(12, 0.8, 2.0, 0.4);
        let rho = random_density(12, 9);
        let dense = lindblad_rhs(&rho, &p).unwrap();
        let rhs = FlatRhs::new(&p);
        let y = flatten(&rho.mat);
        let mut dy = vec![0.0; y.len()];
        rhs.eval(&y, &mut dy);
        let fast = unflatten(&dy, p.dim());
        assert!(dense.max_abs_diff(&fast) < 1e-13);
    }

    #[test]
    fn evolve_conserves_trace_and_energy_undamped() {
        let p = params(10, 1.0, 4.0, 0.0);
        let rho0 = fock_state(0, 10).unwrap();
        let e0 = energy(&rho0, &p);
        let grid = linspace(0.0, 2.0, 21);
        let traj = evolve_exact(&rho0, &p, &grid, &EvolveOptions::default()).unwrap();
        for pt in &traj.points {
            assert!(pt.trace_err < 1e-10);
        }
        let ef = energy(&traj.final_state, &p);
        assert!((ef - e0).abs() < 1e-8, "energy drift {}", ef - e0);
        assert!(traj.max_step_herm_drift < 1e-10);
    }

    #[test]
    fn dephasing_exponent_pure_decay() {
        // g = eps = 0: |rho_mn(t)| = |rho_mn(0)| exp(-16 Gamma (m-n)^2 t).
        let gamma = 0.05;
        let p = params(12, 0.0, 0.0, gamma);
        for m in [1usize, 2, 3] {
            let d = p.dim();
            let mut mat = CMat::zeros(d);
            mat[(0, 0)] = Complex64::new(0.5, 0.0);
            mat[(m, m)] = Complex64::new(0.5, 0.0);
            mat[(0, m)] = Complex64::new(0.5, 0.0);
            mat[(m, 0)] = Complex64::new(0.5, 0.0);
            let rho0 = DensityMatrix { mat };
            let t_end = 0.4;
            let grid = linspace(0.0, t_end, 5);
            let traj = evolve_exact(
                &rho0,
                &p,
                &grid,
                &EvolveOptions {
                    rtol: 1e-12,
                    atol: 1e-15,
                    store_snapshots: true,
                    track_min_eig: false,
                },
            )
            .unwrap();
            for (t, rho) in &traj.snapshots {
                let expect = 0.5 * (-16.0 * gamma * (m * m) as f64 * t).exp();
                let got = rho.mat[(0, m)].norm();
                assert!(
                    (got - expect).abs() < 1e-8 * expect,
                    "m={m} t={t}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn steady_state_examples() {
        let p = params(100, 1.0, 0.0, 1.0);
        let rho_s = steady_state(&p).unwrap();
        assert!((rho_s.mat[(0, 0)].re - 1.0 / 51.0).abs() < 1e-15);
        let d = lindblad_rhs(&rho_s, &p).unwrap();
        assert!(d.max_abs() < 1e-14);
        let m = crate::fock::bloch_moments(&rho_s).unwrap();
        assert!(m.bloch().norm() < 1e-13);

        assert!(steady_state(&params(100, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn offdiag_weight_examples() {
        let diag = DensityMatrix::maximally_mixed(10).unwrap();
        assert_eq!(offdiag_weight(&diag), 0.0);

        // Equal superposition of |0> and |1>.
        let mut mat = CMat::zeros(6);
        for i in 0..2 {
            for j in 0..2 {
                mat[(i, j)] = Complex64::new(0.5, 0.0);
            }
        }
        let sup = DensityMatrix { mat };
        assert!((offdiag_weight(&sup) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn offdiag_weight_decays_under_dephasing() {
        let p = params(10, 1.0, 2.0, 0.8);
        let mut mat = CMat::zeros(6);
        for i in 0..2 {
            for j in 0..2 {
                mat[(i, j)] = Complex64::new(0.5, 0.0);
            }
        }
        let rho0 = DensityMatrix { mat };
        let w0 = offdiag_weight(&rho0);
        let grid = linspace(0.0, 1.0, 3);
        let traj = evolve_exact(
            &rho0,
            &p,
            &grid,
            &EvolveOptions {
                store_snapshots: true,
                ..EvolveOptions::default()
            },
        )
        .unwrap();
        let w_end = offdiag_weight(&traj.snapshots.last().unwrap().1);
        assert!(w_end < w0, "{w_end} !< {w0}");
    }

    #[test]
    fn trace_distance_examples() {
        let a = fock_state(0, 2).unwrap();
        assert!(trace_distance(&a, &a).unwrap() < 1e-15);
        let b = fock_state(1, 2).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        let uniform = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((trace_distance(&a, &uniform).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn csv_schema() {
        let p = params(4, 1.0, 0.0, 0.1);
        let traj = evolve_exact(
            &fock_state(0, 4).unwrap(),
            &p,
            &[0.0, 0.1, 0.2],
            &EvolveOptions::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,Fx,Fy,Fz,Na_over_N,Lz2,Kxx,Kyy,Kzz,Kxy,Kxz,Kyz,trace_err,min_eig"
        );
        assert_eq!(lines.count(), 3);
    }
}
