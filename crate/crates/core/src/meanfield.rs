//! Mean-field Bloch equations: the first-order closure of the moment
//! hierarchy, its fixed point and stability, and the closed-form
//! Jacobi-elliptic solution of the undamped flow.

use crate::error::{Error, Result};
use crate::fock::SystemParams;
use crate::numerics::{cubic_roots_trig, elliptic_k, jacobi_sn_cn_dn, OdeProblem};
use crate::stability::{FixedPoint, StabilityClass, StabilityReport, Theory};
use crate::state::BlochVector;
use num_complex::Complex64;

/// Time derivative of the Bloch vector under the first-order closure:
///
/// ```text
/// Fx' = eps Fy - 16 Gamma Fx
/// Fy' = -eps Fx - Delta Fz + (3/2) Delta Fz^2 - 16 Gamma Fy - R
/// Fz' = 2 Delta Fy
/// ```
pub fn mft_rhs(f: &BlochVector, params: &SystemParams) -> BlochVector {
    let delta = params.delta();
    let r = params.r_offset();
    let eps = params.eps();
    let gamma = params.gamma();
    BlochVector {
        fx: eps * f.fy - 16.0 * gamma * f.fx,
        fy: -eps * f.fx - delta * f.fz + 1.5 * delta * (f.fz * f.fz) - 16.0 * gamma * f.fy - r,
        fz: 2.0 * delta * f.fy,
    }
}

/// Integrate the Bloch equations, sampling at the grid times.
pub fn evolve_mft(
    f0: &BlochVector,
    params: &SystemParams,
    tgrid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<BlochVector>> {
    let problem = OdeProblem::with_tols(3, rtol, atol);
    let sol = problem.integrate(
        |_, y, dy| {
            let d = mft_rhs(&BlochVector::new(y[0], y[1], y[2]), params);
            dy[0] = d.fx;
            dy[1] = d.fy;
            dy[2] = d.fz;
        },
        &f0.to_array(),
        tgrid,
    )?;
    Ok(sol
        .states
        .into_iter()
        .map(|s| BlochVector::new(s[0], s[1], s[2]))
        .collect())
}

/// Both roots of the stationary condition: the physical fixed point and the
/// companion root, which lies above `Fz = +1`.
#[derive(Debug, Clone, Copy)]
pub struct MftFixedPoint {
    pub point: BlochVector,
    /// Companion root `(1 + sqrt(1 + 3(1 + 4/N)))/3`; outside the physical
    /// range.
    pub unphysical_fz: f64,
}

fn fixed_point_discriminant(params: &SystemParams) -> f64 {
    (1.0 + 3.0 * (1.0 + 4.0 / params.n_f())).sqrt()
}

/// Roots `(physical, unphysical)` of the stationary condition
/// `(3/2) Fz^2 - Fz - R/Delta = 0`. Independent of the dephasing rate; the
/// point `(0, 0, physical)` is stationary for any `Gamma`, but only isolated
/// when `Gamma > 0` (see [`mft_fixed_point`]).
pub fn mft_stationary_roots(params: &SystemParams) -> (f64, f64) {
    let s = fixed_point_discriminant(params);
    ((1.0 - s) / 3.0, (1.0 + s) / 3.0)
}

/// Fixed point of the mean-field flow. Dephasing (`Gamma > 0`) is required:
/// it forces `Fx = Fy = 0`, making the fixed point isolated.
pub fn mft_fixed_point_full(params: &SystemParams) -> Result<MftFixedPoint> {
    if !(params.gamma() > 0.0) {
        return Err(Error::InvalidParams(
            "mean-field fixed point requires gamma > 0 (otherwise not isolated)".into(),
        ));
    }
    let (physical, unphysical) = mft_stationary_roots(params);
    Ok(MftFixedPoint {
        point: BlochVector::new(0.0, 0.0, physical),
        unphysical_fz: unphysical,
    })
}

pub fn mft_fixed_point(params: &SystemParams) -> Result<BlochVector> {
    mft_fixed_point_full(params).map(|fp| fp.point)
}

/// Smallest dephasing rate at which the mean-field fixed point is a
/// junction: `64 Gamma^2 = N g^2 sqrt(1 + 3(1 + 4/N))`.
pub fn mft_junction_threshold(params: &SystemParams) -> f64 {
    let s = fixed_point_discriminant(params);
    (params.n_f() * params.g() * params.g() * s).sqrt() / 8.0
}

/// Stability of the mean-field fixed point in the (Fy, Fz) subspace.
/// Restricted to zero binding energy, where Fx decouples.
pub fn mft_stability(params: &SystemParams) -> Result<StabilityReport> {
    if params.eps() != 0.0 {
        return Err(Error::InvalidParams(
            "stability analysis requires eps = 0".into(),
        ));
    }
    let fp = mft_fixed_point(params)?;
    let gamma = params.gamma();
    let s = fixed_point_discriminant(params);
    let disc = 256.0 * gamma * gamma - 4.0 * params.n_f() * params.g() * params.g() * s;
    let eigenvalues = split_eigenvalues(gamma, disc);
    let class = if disc >= 0.0 {
        StabilityClass::StableJunction
    } else {
        StabilityClass::StableFocus
    };
    Ok(StabilityReport {
        theory: Theory::MeanField,
        fixed_point: FixedPoint::Bloch(fp),
        eigenvalues,
        class,
    })
}

/// Eigenvalue pair `(-16 Gamma +- sqrt(disc)) / 2` for real or complex
/// discriminant.
pub(crate) fn split_eigenvalues(gamma: f64, disc: f64) -> [Complex64; 2] {
    if disc >= 0.0 {
        let root = disc.sqrt();
        [
            Complex64::new(0.5 * (-16.0 * gamma + root), 0.0),
            Complex64::new(0.5 * (-16.0 * gamma - root), 0.0),
        ]
    } else {
        let imag = 0.5 * (-disc).sqrt();
        [
            Complex64::new(-8.0 * gamma, imag),
            Complex64::new(-8.0 * gamma, -imag),
        ]
    }
}

/// Conserved quantity of the undamped flow:
///
/// ```text
/// W(F) = Fx^2 + Fy^2 - (1/2)(1 + Fz)(1 - Fz)^2 - (2/N)(1 - Fz)
/// ```
///
/// Exactly constant along the Gamma = 0 Bloch equations. (The Euclidean norm
/// |F| itself is not conserved; W is the sphere-function combination that
/// is.)
pub fn mft_invariant(f: &BlochVector, n_total: f64) -> f64 {
    let one_minus = 1.0 - f.fz;
    f.fx * f.fx + f.fy * f.fy
        - 0.5 * (1.0 + f.fz) * one_minus * one_minus
        - 2.0 / n_total * one_minus
}

/// Closed-form orbit data for the undamped flow started from
/// `(0, 0, Fz0)`.
#[derive(Debug, Clone)]
pub struct EllipticSolution {
    /// Linear coefficient of the reduced oscillator, `eps^2 + g^2 N`.
    pub a: f64,
    /// Quadratic coefficient, `-(3/2) g^2 N`.
    pub b: f64,
    /// Constant forcing, `g^2 N / 2 + 2 g^2 - eps^2 Fz0`.
    pub c: f64,
    /// `sqrt(a^2 - 4 b c)`.
    pub disc: f64,
    /// Cubic-root angle of the trigonometric solution.
    pub theta: f64,
    /// Constant term of the shifted cubic.
    pub d: f64,
    /// Initial displacement from the oscillation center.
    pub u0: f64,
    /// Shifted-cubic roots, descending.
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    /// Time scaling of the elliptic argument.
    pub k: f64,
    /// Elliptic modulus, `m^2 = (u2 - u3)/(u1 - u3)`.
    pub m: f64,
    /// Phase fixing `Fz(0) = Fz0` with `Fz'(0) = 0`.
    pub t0: f64,
    /// Oscillation period `2 K(m) / k`.
    pub period: f64,
}

/// Build the elliptic solution for the undamped flow from `(0, 0, fz0)`.
///
/// The orbit oscillates between the two lower roots of the shifted cubic;
/// `fz0` is itself always a root of that cubic, and must be one of the two
/// turning points.
pub fn elliptic_params(params: &SystemParams, fz0: f64) -> Result<EllipticSolution> {
    if params.gamma() != 0.0 {
        return Err(Error::InvalidParams(
            "closed-form solution requires gamma = 0".into(),
        ));
    }
    if !(params.g() > 0.0) {
        return Err(Error::InvalidParams(
            "closed-form solution requires g > 0 (quadratic term must not vanish)".into(),
        ));
    }
    let g2n = params.g() * params.g() * params.n_f();
    let a = params.eps() * params.eps() + g2n;
    let b = -1.5 * g2n;
    let c = 0.5 * g2n + 2.0 * params.g() * params.g() - params.eps() * params.eps() * fz0;

    let disc_sq = a * a - 4.0 * b * c;
    if disc_sq <= 0.0 {
        return Err(Error::NoRealOscillation(format!(
            "a^2 - 4bc = {disc_sq:.6e} <= 0"
        )));
    }
    let disc = disc_sq.sqrt();

    let shift = (a - disc) / (2.0 * b);
    let u0 = fz0 + shift;
    let quad_coef = 3.0 * disc / (2.0 * b);
    let d = -u0 * u0 * u0 - quad_coef * u0 * u0;

    // Cubic-root angle; out-of-domain arguments mean no bounded orbit.
    let cos3theta = -0.5 * (d * (2.0 * b / disc).powi(3) + 2.0);
    if cos3theta.abs() > 1.0 + 1e-9 {
        return Err(Error::NoRealOscillation(format!(
            "cubic angle argument {cos3theta:.6} outside [-1, 1]"
        )));
    }
    let theta = cos3theta.clamp(-1.0, 1.0).acos() / 3.0;

    let roots = cubic_roots_trig(quad_coef, 0.0, d).map_err(|_| {
        Error::NoRealOscillation("shifted cubic has complex roots".into())
    })?;
    let [u1, u2, u3] = roots;
    let scale = u1.abs().max(u3.abs()).max(1.0);
    if u1 - u2 < 1e-10 * scale || u2 - u3 < 1e-10 * scale {
        return Err(Error::DegenerateOrbit(format!(
            "roots {u1:.6e}, {u2:.6e}, {u3:.6e} too close"
        )));
    }

    let k = (-b * (u1 - u3) / 6.0).sqrt();
    let m = ((u2 - u3) / (u1 - u3)).sqrt();
    let quarter = elliptic_k(m)?;
    let period = 2.0 * quarter / k;

    // Fz0 must sit at a turning point of the bounded orbit.
    let match_tol = 1e-9 * scale;
    let t0 = if (u0 - u3).abs() <= match_tol {
        0.0
    } else if (u0 - u2).abs() <= match_tol {
        -quarter / k
    } else {
        return Err(Error::InconsistentInitialCondition(format!(
            "Fz0 = {fz0} maps to u0 = {u0:.6e}, not a turning point of [{u3:.6e}, {u2:.6e}]"
        )));
    };

    Ok(EllipticSolution {
        a,
        b,
        c,
        disc,
        theta,
        d,
        u0,
        u1,
        u2,
        u3,
        k,
        m,
        t0,
        period,
    })
}

/// Evaluate the closed-form `Fz(t)`.
pub fn elliptic_fz(sol: &EllipticSolution, t: f64) -> f64 {
    let (_, cn, _) = jacobi_sn_cn_dn(sol.k * (t - sol.t0), sol.m)
        .expect("modulus validated at construction");
    sol.u2 - (sol.u2 - sol.u3) * cn * cn - (sol.a - sol.disc) / (2.0 * sol.b)
}

/// Full Bloch vector along the closed-form orbit. `Fy` follows from the time
/// derivative of `Fz`; `Fx` from integrating its own equation, which for the
/// `(0, 0, Fz0)` start gives `Fx = eps (Fz - Fz0) / (2 Delta)`.
pub fn elliptic_bloch(
    sol: &EllipticSolution,
    params: &SystemParams,
    fz0: f64,
    t: f64,
) -> BlochVector {
    let (sn, cn, dn) = jacobi_sn_cn_dn(sol.k * (t - sol.t0), sol.m)
        .expect("modulus validated at construction");
    let fz = sol.u2 - (sol.u2 - sol.u3) * cn * cn - (sol.a - sol.disc) / (2.0 * sol.b);
    let dfz = 2.0 * sol.k * (sol.u2 - sol.u3) * sn * cn * dn;
    let delta = params.delta();
    BlochVector {
        fx: params.eps() * (fz - fz0) / (2.0 * delta),
        fy: dfz / (2.0 * delta),
        fz,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, g: f64, eps: f64, gamma: f64) -> SystemParams {
        SystemParams::new(n, g, eps, gamma).unwrap()
    }

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn rhs_at_fixed_point_vanishes() {
        let p = params(100, 1.0, 0.0, 0.7);
        let fp = mft_fixed_point(&p).unwrap();
        let d = mft_rhs(&fp, &p);
        assert!(d.norm() < 1e-14, "residual {}", d.norm());
    }

    #[test]
    fn rhs_at_origin_resonant() {
        let p = params(100, 1.0, 0.0, 0.0);
        let d = mft_rhs(&BlochVector::default(), &p);
        assert!((d.fy + p.r_offset()).abs() < 1e-15);
        assert!(d.fx.abs() < 1e-15 && d.fz.abs() < 1e-15);
    }

    #[test]
    fn fixed_point_value_and_oracle() {
        let p = params(100, 1.0, 0.0, 1.0);
        let fp = mft_fixed_point(&p).unwrap();
        assert!((fp.fz + 0.3432594).abs() < 1e-6, "Fzf = {}", fp.fz);

        // Bisection oracle on the stationary quadratic.
        let delta = p.delta();
        let r = p.r_offset();
        let q = |fz: f64| -delta * fz + 1.5 * delta * fz * fz - r;
        let (mut lo, mut hi) = (-1.0, 0.0);
        assert!(q(lo) > 0.0 && q(hi) < 0.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if q(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!((fp.fz - oracle).abs() < 1e-12, "{} vs {oracle}", fp.fz);
    }

    #[test]
    fn fixed_point_large_n_limit() {
        let p = params(100_000_000, 1.0, 0.0, 1.0);
        let fp = mft_fixed_point(&p).unwrap();
        assert!((fp.fz + 1.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn fixed_point_companion_root_unphysical() {
        for n in [10usize, 100, 1000] {
            let p = params(n, 1.0, 0.0, 1.0);
            let full = mft_fixed_point_full(&p).unwrap();
            assert!(full.unphysical_fz > 1.0);
            assert!(full.point.fz > -1.0 && full.point.fz < 0.0);
        }
    }

    #[test]
    fn fixed_point_requires_damping() {
        let p = params(100, 1.0, 0.0, 0.0);
        assert!(mft_fixed_point(&p).is_err());
    }

    #[test]
    fn fixed_point_residual_sweep() {
        for n in [10usize, 40, 100, 400, 1000] {
            for gamma in [1e-3, 0.1, 1.0, 10.0] {
                let p = params(n, 1.0, 0.0, gamma);
                let fp = mft_fixed_point(&p).unwrap();
                let res = mft_rhs(&fp, &p).norm();
                assert!(res < 1e-13, "N={n} gamma={gamma}: residual {res:e}");
            }
        }
    }

    #[test]
    fn stability_threshold_n100() {
        let p = params(100, 1.0, 0.0, 1.0);
        let thr = mft_junction_threshold(&p);
        assert!((thr - 1.78087).abs() < 1e-4, "threshold {thr}");
        // Flips across the threshold; the boundary itself is a junction.
        let below = mft_stability(&params(100, 1.0, 0.0, thr - 1e-6)).unwrap();
        let at = mft_stability(&params(100, 1.0, 0.0, thr + 1e-12)).unwrap();
        assert_eq!(below.class, StabilityClass::StableFocus);
        assert_eq!(at.class, StabilityClass::StableJunction);
    }

    #[test]
    fn stability_fig_parameter_classes() {
        let junction = mft_stability(&params(300, 1.0, 0.0, 10.0)).unwrap();
        assert_eq!(junction.class, StabilityClass::StableJunction);
        for e in junction.eigenvalues {
            assert!(e.im == 0.0 && e.re < 0.0);
        }
        let focus = mft_stability(&params(300, 1.0, 0.0, 0.12)).unwrap();
        assert_eq!(focus.class, StabilityClass::StableFocus);
        assert!(focus.eigenvalues[0].im > 0.0);
        assert!(focus.eigenvalues[0].re < 0.0);
    }

    #[test]
    fn stability_rejects_finite_binding() {
        assert!(mft_stability(&params(100, 1.0, 5.0, 1.0)).is_err());
    }

    #[test]
    fn stability_matches_finite_difference_jacobian() {
        // Numerical Jacobian of the (Fy, Fz) flow at the fixed point.
        for gamma in [0.3, 1.25, 2.5] {
            let p = params(100, 1.0, 0.0, gamma);
            let fp = mft_fixed_point(&p).unwrap();
            let h = 1e-6;
            let f = |fy: f64, fz: f64| {
                let d = mft_rhs(&BlochVector::new(0.0, fy, fz), &p);
                (d.fy, d.fz)
            };
            let (fy0, fz0) = (fp.fy, fp.fz);
            let j11 = (f(fy0 + h, fz0).0 - f(fy0 - h, fz0).0) / (2.0 * h);
            let j12 = (f(fy0, fz0 + h).0 - f(fy0, fz0 - h).0) / (2.0 * h);
            let j21 = (f(fy0 + h, fz0).1 - f(fy0 - h, fz0).1) / (2.0 * h);
            let j22 = (f(fy0, fz0 + h).1 - f(fy0, fz0 - h).1) / (2.0 * h);
            // Eigenvalues of [[j11, j12], [j21, j22]].
            let tr = j11 + j22;
            let det = j11 * j22 - j12 * j21;
            let disc = tr * tr - 4.0 * det;
            let report = mft_stability(&p).unwrap();
            let formula = report.eigenvalues;
            if disc >= 0.0 {
                let lam1 = 0.5 * (tr + disc.sqrt());
                let lam2 = 0.5 * (tr - disc.sqrt());
                assert!((lam1 - formula[0].re).abs() < 1e-6 * lam1.abs().max(1.0));
                assert!((lam2 - formula[1].re).abs() < 1e-6 * lam2.abs().max(1.0));
            } else {
                assert!((0.5 * tr - formula[0].re).abs() < 1e-6);
                assert!((0.5 * (-disc).sqrt() - formula[0].im.abs()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn elliptic_coefficients_examples() {
        let p = params(100, 1.0, 25.0, 0.0);
        let sol = elliptic_params(&p, 1.0).unwrap();
        assert!((sol.a - 725.0).abs() < 1e-12);
        assert!((sol.b + 150.0).abs() < 1e-12);
        assert!((sol.c + 573.0).abs() < 1e-12);

        // At Fz0 = 0 the binding-energy part of c drops out.
        let sol0 = elliptic_params(&p, 0.0).unwrap();
        assert!((sol0.c - 52.0).abs() < 1e-12);
    }

    #[test]
    fn elliptic_requires_undamped() {
        let p = params(100, 1.0, 25.0, 0.5);
        assert!(elliptic_params(&p, 1.0).is_err());
    }

    #[test]
    fn elliptic_turning_points() {
        let p = params(100, 1.0, 25.0, 0.0);
        let sol = elliptic_params(&p, 1.0).unwrap();
        let shift = (sol.a - sol.disc) / (2.0 * sol.b);
        // cn(0) = 1 at t = t0: the lower turning point.
        let at_t0 = elliptic_fz(&sol, sol.t0);
        assert!((at_t0 - (sol.u3 - shift)).abs() < 1e-12);
        // Half a period later: the upper turning point.
        let at_half = elliptic_fz(&sol, sol.t0 + 0.5 * sol.period);
        assert!((at_half - (sol.u2 - shift)).abs() < 1e-12);
        // The start itself reproduces Fz0 = 1.
        assert!((elliptic_fz(&sol, 0.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn elliptic_matches_integrated_flow() {
        let p = params(100, 1.0, 25.0, 0.0);
        let fz0 = 1.0;
        let sol = elliptic_params(&p, fz0).unwrap();
        let tgrid = linspace(0.0, 3.0 * sol.period, 1200);
        let traj = evolve_mft(
            &BlochVector::new(0.0, 0.0, fz0),
            &p,
            &tgrid,
            1e-10,
            1e-12,
        )
        .unwrap();
        let mut max_err: f64 = 0.0;
        for (i, f) in traj.iter().enumerate() {
            max_err = max_err.max((elliptic_fz(&sol, tgrid[i]) - f.fz).abs());
        }
        assert!(max_err < 1e-6, "max deviation {max_err:e}");
    }

    #[test]
    fn elliptic_period_matches_measured() {
        // Measure the period from the integrated flow by parabola-refined
        // maxima of Fz: the orbit starts at its upper turning point, so
        // peaks sit at multiples of the period.
        let p = params(100, 1.0, 25.0, 0.0);
        let sol = elliptic_params(&p, 1.0).unwrap();
        let t_end = 3.05 * sol.period;
        let n_samples = 30_000;
        let tgrid = linspace(0.0, t_end, n_samples);
        let traj = evolve_mft(&BlochVector::new(0.0, 0.0, 1.0), &p, &tgrid, 1e-12, 1e-14)
            .unwrap();
        let dt = tgrid[1] - tgrid[0];
        // Find the local maximum nearest 3 periods.
        let around = (3.0 * sol.period / dt).round() as usize;
        let mut peak_idx = around;
        for i in around.saturating_sub(200)..(around + 200).min(n_samples - 1) {
            if traj[i].fz > traj[peak_idx].fz {
                peak_idx = i;
            }
        }
        let (ym, y0, yp) = (
            traj[peak_idx - 1].fz,
            traj[peak_idx].fz,
            traj[peak_idx + 1].fz,
        );
        let offset = 0.5 * (ym - yp) / (ym - 2.0 * y0 + yp);
        let t_peak = tgrid[peak_idx] + offset * dt;
        let measured = t_peak / 3.0;
        let rel = (measured - sol.period).abs() / sol.period;
        assert!(rel < 1e-6, "period {measured} vs {}, rel {rel:e}", sol.period);
    }

    #[test]
    fn invariant_examples() {
        let n = 100.0;
        assert!(mft_invariant(&BlochVector::new(0.0, 0.0, 1.0), n).abs() < 1e-15);
        let w = mft_invariant(&BlochVector::new(0.0, 0.0, -1.0), n);
        assert!((w + 4.0 / n).abs() < 1e-15);
    }

    #[test]
    fn invariant_conserved_along_undamped_flow() {
        let p = params(100, 1.0, 25.0, 0.0);
        let sol = elliptic_params(&p, 1.0).unwrap();
        let f0 = BlochVector::new(0.0, 0.0, 1.0);
        let w0 = mft_invariant(&f0, p.n_f());
        let tgrid = linspace(0.0, 10.0 * sol.period, 2000);
        let traj = evolve_mft(&f0, &p, &tgrid, 1e-10, 1e-12).unwrap();
        let mut max_drift: f64 = 0.0;
        let mut max_norm_drift: f64 = 0.0;
        let norm0 = f0.norm();
        for f in &traj {
            max_drift = max_drift.max((mft_invariant(f, p.n_f()) - w0).abs());
            max_norm_drift = max_norm_drift.max((f.norm() - norm0).abs());
        }
        assert!(max_drift < 1e-8, "W drift {max_drift:e}");
        // The Euclidean norm is genuinely not conserved; recorded here so
        // the distinction from W stays visible.
        assert!(max_norm_drift > 1e-4, "norm drift {max_norm_drift:e}");
    }

    #[test]
    fn elliptic_bloch_consistent_with_flow() {
        let p = params(100, 1.0, 19.0, 0.0);
        let fz0 = -1.0;
        let sol = elliptic_params(&p, fz0).unwrap();
        let tgrid = linspace(0.0, 2.0 * sol.period, 400);
        let traj = evolve_mft(&BlochVector::new(0.0, 0.0, fz0), &p, &tgrid, 1e-11, 1e-13)
            .unwrap();
        for (i, f) in traj.iter().enumerate() {
            let e = elliptic_bloch(&sol, &p, fz0, tgrid[i]);
            assert!((e.fx - f.fx).abs() < 1e-6);
            assert!((e.fy - f.fy).abs() < 1e-6);
            assert!((e.fz - f.fz).abs() < 1e-6);
        }
    }

    #[test]
    fn junction_regime_monotone_fz() {
        // Deep junction regime: Fz approaches the fixed point monotonically.
        let p = params(300, 1.0, 0.0, 10.0);
        let fp = mft_fixed_point(&p).unwrap();
        let f0 = BlochVector::new(0.0, 0.0, crate::fock::fock_moments(10, 300).unwrap().fz);
        let tgrid = linspace(0.0, 8.0, 400);
        let traj = evolve_mft(&f0, &p, &tgrid, 1e-10, 1e-12).unwrap();
        for w in traj.windows(2) {
            assert!(w[1].fz >= w[0].fz - 1e-9, "Fz not monotone");
        }
        assert!((traj.last().unwrap().fz - fp.fz).abs() < 1e-3);
    }

    #[test]
    fn focus_regime_overshoots() {
        // Spiral approach: Fz crosses the fixed-point value.
        let p = params(300, 1.0, 0.0, 0.12);
        let fp = mft_fixed_point(&p).unwrap();
        let f0 = BlochVector::new(0.0, 0.0, crate::fock::fock_moments(40, 300).unwrap().fz);
        let tgrid = linspace(0.0, 40.0, 2000);
        let traj = evolve_mft(&f0, &p, &tgrid, 1e-10, 1e-12).unwrap();
        let crossings = traj
            .windows(2)
            .filter(|w| (w[0].fz - fp.fz) * (w[1].fz - fp.fz) < 0.0)
            .count();
        assert!(crossings >= 2, "only {crossings} crossings");
        assert!((traj.last().unwrap().fz - fp.fz).abs() < 1e-3);
    }
}
