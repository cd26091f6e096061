//! Subcommand implementations.

use crate::config::{Method, RunConfig};
use crate::manifest::{RunManifest, ValidationSummary};
use crate::output;
use crate::presets::{self, FigurePreset};
use crate::CliError;
use amcsim::bbgky::{
    bbr_fixed_point, bbr_full_jacobian_eigenvalues, bbr_junction_threshold, bbr_rhs,
    bbr_stability, evolve_bbr, regime_classify,
};
use amcsim::fock::{fock_state, SystemParams};
use amcsim::lindblad::{evolve_exact, steady_state, EvolveOptions};
use amcsim::meanfield::{
    elliptic_fz, elliptic_params, evolve_mft, mft_invariant, mft_junction_threshold, mft_rhs,
    mft_stability, mft_stationary_roots,
};
use amcsim::numerics::{elliptic_k, jacobi_cn};
use amcsim::photoassoc::{evolve_pa, ContinuumModel, PAState, PaVariant};
use amcsim::stability::StabilityReport;
use amcsim::state::BlochVector;
use num_complex::Complex64;
use serde_json::json;
use std::path::Path;
use std::time::Instant;

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Mft => "mft",
        Method::Bbr => "bbr",
        Method::Elliptic => "elliptic",
        Method::PaContinuum => "pa-continuum",
        Method::PaMarkov => "pa-markov",
    }
}

struct CurveOutput {
    method: Method,
    csv: String,
    validation: ValidationSummary,
}

/// Run one solver variant described by the config and render its CSV.
fn run_curve(cfg: &RunConfig, method: Method) -> Result<CurveOutput, CliError> {
    let tgrid = cfg.tgrid()?;
    let params = cfg.system_params()?;
    match method {
        Method::Exact => {
            if cfg.initial.kind != "fock" {
                return Err(CliError::Validation(
                    "exact runs need a Fock initial state".into(),
                ));
            }
            let rho0 = fock_state(cfg.initial.n0, cfg.params.n)
                .map_err(|e| CliError::Validation(format!("initial: {e}")))?;
            let traj = evolve_exact(
                &rho0,
                &params,
                &tgrid,
                &EvolveOptions {
                    rtol: cfg.run.rtol,
                    atol: cfg.run.atol,
                    store_snapshots: false,
                    track_min_eig: true,
                },
            )?;
            let mut buf = Vec::new();
            traj.write_csv(&mut buf)?;
            let max_trace = traj
                .points
                .iter()
                .map(|p| p.trace_err)
                .fold(0.0f64, f64::max);
            let min_eig = traj
                .points
                .iter()
                .map(|p| p.min_eig)
                .fold(f64::INFINITY, f64::min);
            Ok(CurveOutput {
                method,
                csv: String::from_utf8(buf).expect("csv is utf8"),
                validation: ValidationSummary {
                    max_trace_err: Some(max_trace),
                    min_eig: Some(min_eig),
                    invariant_drift: Some(traj.max_step_herm_drift),
                },
            })
        }
        Method::Mft => {
            let f0 = cfg.initial_moments()?.bloch();
            let states = evolve_mft(&f0, &params, &tgrid, cfg.run.rtol, cfg.run.atol)?;
            let drift = if cfg.params.gamma == 0.0 {
                let w0 = mft_invariant(&f0, params.n_f());
                Some(
                    states
                        .iter()
                        .map(|f| (mft_invariant(f, params.n_f()) - w0).abs())
                        .fold(0.0f64, f64::max),
                )
            } else {
                None
            };
            Ok(CurveOutput {
                method,
                csv: output::mft_csv(&tgrid, &states, params.n_f()),
                validation: ValidationSummary {
                    invariant_drift: drift,
                    ..Default::default()
                },
            })
        }
        Method::Bbr => {
            let s0 = cfg.initial_moments()?;
            let states = evolve_bbr(&s0, &params, &tgrid, cfg.run.rtol, cfg.run.atol)?;
            Ok(CurveOutput {
                method,
                csv: output::bbr_csv(&tgrid, &states),
                validation: ValidationSummary::default(),
            })
        }
        Method::Elliptic => {
            let m0 = cfg.initial_moments()?;
            if m0.fx != 0.0 || m0.fy != 0.0 {
                return Err(CliError::Validation(
                    "elliptic runs require Fx0 = Fy0 = 0".into(),
                ));
            }
            let sol = elliptic_params(&params, m0.fz)
                .map_err(|e| CliError::Validation(format!("elliptic: {e}")))?;
            let fz: Vec<f64> = tgrid.iter().map(|&t| elliptic_fz(&sol, t)).collect();
            Ok(CurveOutput {
                method,
                csv: output::elliptic_csv(&tgrid, &fz),
                validation: ValidationSummary::default(),
            })
        }
        Method::PaContinuum | Method::PaMarkov => {
            let pa = &cfg.photoassoc;
            let model = ContinuumModel::flat_band(
                pa.xi0,
                pa.half_width,
                pa.n_modes,
                pa.delta,
                Complex64::new(pa.omega, 0.0),
            )
            .map_err(|e| CliError::Validation(format!("photoassoc: {e}")))?;
            let s0 = PAState::condensate(
                Complex64::new(pa.alpha0, 0.0),
                Complex64::new(pa.beta0, 0.0),
                pa.n_modes,
            );
            let variant = if method == Method::PaContinuum {
                PaVariant::Continuum
            } else {
                PaVariant::Markov
            };
            let samples = evolve_pa(&s0, &model, &tgrid, cfg.run.rtol, cfg.run.atol, variant)?;
            let drift = if variant == PaVariant::Continuum {
                let q0 = samples[0].norm;
                Some(
                    samples
                        .iter()
                        .map(|s| (s.norm - q0).abs())
                        .fold(0.0f64, f64::max),
                )
            } else {
                None
            };
            Ok(CurveOutput {
                method,
                csv: output::pa_csv(&tgrid, &samples, method_name(method)),
                validation: ValidationSummary {
                    invariant_drift: drift,
                    ..Default::default()
                },
            })
        }
    }
}

fn merge_validation(into: &mut ValidationSummary, from: &ValidationSummary) {
    let max_opt = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    };
    let min_opt = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    into.max_trace_err = max_opt(into.max_trace_err, from.max_trace_err);
    into.min_eig = min_opt(into.min_eig, from.min_eig);
    into.invariant_drift = max_opt(into.invariant_drift, from.invariant_drift);
}

/// Exact runs must stay trace-preserving and positive to tolerance or the
/// command fails with a numerical error.
fn gate_exact_validation(v: &ValidationSummary) -> Result<(), CliError> {
    if let Some(tr) = v.max_trace_err {
        if tr >= 1e-9 {
            return Err(CliError::Numerical(format!(
                "trace error {tr:.3e} exceeds 1e-9"
            )));
        }
    }
    if let Some(me) = v.min_eig {
        if me <= -1e-8 {
            return Err(CliError::Numerical(format!(
                "minimum eigenvalue {me:.3e} below -1e-8"
            )));
        }
    }
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Numerical(format!("cannot create {dir:?}: {e}")))
}

pub fn cmd_evolve(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    cfg.validate_for_method()?;
    ensure_dir(out_dir)?;
    let start = Instant::now();
    let curve = run_curve(cfg, cfg.run.method)?;

    let csv_path = out_dir.join(format!("{}.csv", method_name(curve.method)));
    std::fs::write(&csv_path, &curve.csv)?;

    let mut manifest = RunManifest::new(
        serde_json::to_value(cfg).expect("config serializes"),
        start.elapsed().as_millis(),
    );
    manifest.add_file(&csv_path)?;
    manifest.validation = curve.validation;
    if cfg.run.method == Method::Exact {
        gate_exact_validation(&manifest.validation)?;
    }
    let manifest_path = out_dir.join("manifest.json");
    manifest.write(&manifest_path)?;
    println!("wrote {} and {}", csv_path.display(), manifest_path.display());
    Ok(())
}

fn preset_config(p: &FigurePreset) -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.params.n = p.n;
    cfg.params.g = p.g;
    cfg.params.eps = p.eps;
    cfg.params.gamma = p.gamma;
    cfg.initial.kind = "fock".into();
    cfg.initial.n0 = p.n0;
    cfg.run.t_max = p.t_max;
    cfg.run.stride = p.stride;
    cfg.run.rtol = p.rtol;
    cfg.run.atol = p.atol;
    cfg
}

pub fn cmd_figure(key: &str, out_dir: &Path) -> Result<(), CliError> {
    let preset = presets::find(key).ok_or_else(|| {
        CliError::Validation(format!(
            "unknown figure `{key}`; available: {}",
            presets::keys().join(", ")
        ))
    })?;
    ensure_dir(out_dir)?;
    let start = Instant::now();
    let cfg = preset_config(preset);

    // Independent curves run on their own threads; outputs are gathered and
    // written in preset order.
    let results: Vec<Result<CurveOutput, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = preset
            .methods
            .iter()
            .map(|&m| {
                let cfg_ref = &cfg;
                scope.spawn(move || run_curve(cfg_ref, m))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("curve thread panicked"))
            .collect()
    });

    let mut manifest = RunManifest::new(
        json!({ "figure": key, "config": serde_json::to_value(&cfg).expect("config serializes") }),
        0,
    );
    let mut any_exact = false;
    for result in results {
        let curve = result?;
        any_exact |= curve.method == Method::Exact;
        let path = out_dir.join(format!("{key}_{}.csv", method_name(curve.method)));
        std::fs::write(&path, &curve.csv)?;
        manifest.add_file(&path)?;
        merge_validation(&mut manifest.validation, &curve.validation);
        println!("wrote {}", path.display());
    }
    manifest.wall_ms = start.elapsed().as_millis();
    if any_exact {
        gate_exact_validation(&manifest.validation)?;
    }
    let manifest_path = out_dir.join(format!("{key}_manifest.json"));
    manifest.write(&manifest_path)?;
    println!("wrote {}", manifest_path.display());
    Ok(())
}

fn stability_json(report: &StabilityReport) -> serde_json::Value {
    let fp = match report.fixed_point {
        amcsim::stability::FixedPoint::Bloch(b) => json!({
            "fx": b.fx, "fy": b.fy, "fz": b.fz,
        }),
        amcsim::stability::FixedPoint::Moments(m) => json!({
            "fx": m.fx, "fy": m.fy, "fz": m.fz,
            "kxx": m.kxx, "kyy": m.kyy, "kzz": m.kzz,
            "kxy": m.kxy, "kxz": m.kxz, "kyz": m.kyz,
        }),
    };
    json!({
        "theory": report.theory.to_string(),
        "fixed_point": fp,
        "eigenvalues": report
            .eigenvalues
            .iter()
            .map(|e| json!({ "re": e.re, "im": e.im }))
            .collect::<Vec<_>>(),
        "class": report.class.to_string(),
    })
}

fn emit_report(
    name: &str,
    report: &serde_json::Value,
    out_dir: Option<&Path>,
) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    println!("{text}");
    if let Some(dir) = out_dir {
        ensure_dir(dir)?;
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, &text)?;
        let mut manifest = RunManifest::new(report.clone(), 0);
        manifest.add_file(&path)?;
        manifest.write(&dir.join(format!("{name}_manifest.json")))?;
    }
    Ok(())
}

pub fn cmd_fixed_points(
    params: &SystemParams,
    out_dir: Option<&Path>,
) -> Result<(), CliError> {
    let (fz_physical, fz_unphysical) = mft_stationary_roots(params);
    let mft_point = BlochVector::new(0.0, 0.0, fz_physical);
    let mft_residual = mft_rhs(&mft_point, params).norm();

    let master = bloch_moments_of_steady_state(params);

    let bbr = if params.eps() == 0.0 {
        let fp = bbr_fixed_point(params).expect("eps checked");
        let res: f64 = bbr_rhs(&fp, params)
            .to_array()
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        json!({
            "fx": fp.fx, "fy": fp.fy, "fz": fp.fz,
            "kxx": fp.kxx, "kyy": fp.kyy, "kzz": fp.kzz,
            "kxy": fp.kxy, "kxz": fp.kxz, "kyz": fp.kyz,
            "residual": res,
        })
    } else {
        serde_json::Value::Null
    };

    let report = json!({
        "params": params_json(params),
        "mft": {
            "fx": 0.0, "fy": 0.0, "fz": fz_physical,
            "unphysical_fz": fz_unphysical,
            "residual": mft_residual,
        },
        "master_equation": master,
        "bbr": bbr,
    });
    emit_report("fixed_points", &report, out_dir)
}

fn params_json(p: &SystemParams) -> serde_json::Value {
    json!({
        "N": p.n_total(), "g": p.g(), "eps": p.eps(), "gamma": p.gamma(),
        "delta": p.delta(), "r": p.r_offset(),
    })
}

fn bloch_moments_of_steady_state(params: &SystemParams) -> serde_json::Value {
    // The master-equation fixed point: all first moments vanish.
    if params.gamma() > 0.0 {
        let rho = steady_state(params).expect("gamma > 0");
        let m = amcsim::fock::bloch_moments(&rho).expect("valid sector");
        json!({ "fx": m.fx, "fy": m.fy, "fz": m.fz })
    } else {
        json!({ "fx": 0.0, "fy": 0.0, "fz": 0.0, "note": "gamma = 0: steady state not unique" })
    }
}

pub fn cmd_stability(params: &SystemParams, out_dir: Option<&Path>) -> Result<(), CliError> {
    if params.eps() != 0.0 {
        return Err(CliError::Validation(
            "stability analysis requires eps = 0".into(),
        ));
    }
    if !(params.gamma() > 0.0) {
        return Err(CliError::Validation(
            "stability analysis requires gamma > 0".into(),
        ));
    }
    let mft = mft_stability(params).map_err(|e| CliError::Validation(e.to_string()))?;
    let bbr = bbr_stability(params).map_err(|e| CliError::Validation(e.to_string()))?;
    let regime = regime_classify(params).map_err(|e| CliError::Validation(e.to_string()))?;
    let full_spectrum = bbr_full_jacobian_eigenvalues(params)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let report = json!({
        "params": params_json(params),
        "mft": stability_json(&mft),
        "bbr": stability_json(&bbr),
        "regime": regime.to_string(),
        "thresholds": {
            "bbr_junction_gamma": bbr_junction_threshold(params),
            "mft_junction_gamma": mft_junction_threshold(params),
        },
        "bbr_full_jacobian_eigenvalues": full_spectrum
            .iter()
            .map(|e| json!({ "re": e.re, "im": e.im }))
            .collect::<Vec<_>>(),
    });
    emit_report("stability", &report, out_dir)
}

pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl std::str::FromStr for RangeSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range `{s}` must be lo:hi:count"));
        }
        let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo: {e}"))?;
        let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi: {e}"))?;
        let count: usize = parts[2].parse().map_err(|e| format!("bad count: {e}"))?;
        if count < 1 || hi < lo {
            return Err(format!("range `{s}` is empty"));
        }
        Ok(RangeSpec { lo, hi, count })
    }
}

impl RangeSpec {
    fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        (0..self.count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

pub fn cmd_phase_diagram(
    n_range: &RangeSpec,
    gamma_range: &RangeSpec,
    g: f64,
    out_dir: &Path,
) -> Result<(), CliError> {
    if gamma_range.lo <= 0.0 {
        return Err(CliError::Validation(
            "gamma range must be strictly positive".into(),
        ));
    }
    if n_range.lo < 2.0 {
        return Err(CliError::Validation("N range must start at >= 2".into()));
    }
    ensure_dir(out_dir)?;
    let start = Instant::now();

    // Atom numbers rounded to the even sector grid, deduplicated.
    let mut n_values: Vec<usize> = n_range
        .values()
        .iter()
        .map(|&x| ((x / 2.0).round() as usize * 2).max(2))
        .collect();
    n_values.dedup();
    let gamma_values = gamma_range.values();

    // Each atom number is an independent work item; gather in input order.
    let rows: Vec<Result<Vec<output::PhaseRow>, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = n_values
            .iter()
            .map(|&n| {
                let gammas = &gamma_values;
                scope.spawn(move || -> Result<Vec<output::PhaseRow>, CliError> {
                    let mut chunk = Vec::with_capacity(gammas.len());
                    for &gamma in gammas {
                        let p = SystemParams::new(n, g, 0.0, gamma)
                            .map_err(|e| CliError::Validation(e.to_string()))?;
                        let mft = mft_stability(&p)
                            .map_err(|e| CliError::Numerical(e.to_string()))?;
                        let bbr = bbr_stability(&p)
                            .map_err(|e| CliError::Numerical(e.to_string()))?;
                        let regime = regime_classify(&p)
                            .map_err(|e| CliError::Numerical(e.to_string()))?;
                        chunk.push(output::PhaseRow {
                            n,
                            g,
                            gamma,
                            mft_class: mft.class.to_string(),
                            bbr_class: bbr.class.to_string(),
                            regime: regime.to_string(),
                        });
                    }
                    Ok(chunk)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep thread panicked"))
            .collect()
    });

    let mut all_rows = Vec::new();
    for chunk in rows {
        all_rows.extend(chunk?);
    }
    let phase_path = out_dir.join("phase_diagram.csv");
    std::fs::write(&phase_path, output::phase_csv(&all_rows))?;

    let edges: Vec<(usize, f64, f64, f64)> = n_values
        .iter()
        .map(|&n| {
            let p = SystemParams::new(n, g, 0.0, 1.0).expect("validated");
            (n, g, bbr_junction_threshold(&p), mft_junction_threshold(&p))
        })
        .collect();
    let edges_path = out_dir.join("band_edges.csv");
    std::fs::write(&edges_path, output::band_edges_csv(&edges))?;

    let mut manifest = RunManifest::new(
        json!({
            "n_range": [n_range.lo, n_range.hi, n_range.count],
            "gamma_range": [gamma_range.lo, gamma_range.hi, gamma_range.count],
            "g": g,
        }),
        start.elapsed().as_millis(),
    );
    manifest.add_file(&phase_path)?;
    manifest.add_file(&edges_path)?;
    manifest.write(&out_dir.join("phase_manifest.json"))?;
    println!(
        "wrote {} ({} rows) and {}",
        phase_path.display(),
        all_rows.len(),
        edges_path.display()
    );
    Ok(())
}

pub fn cmd_photoassoc(
    cfg: &RunConfig,
    variant: &str,
    out_dir: &Path,
) -> Result<(), CliError> {
    ensure_dir(out_dir)?;
    let start = Instant::now();
    let mut manifest = RunManifest::new(
        serde_json::to_value(cfg).expect("config serializes"),
        0,
    );
    let run_continuum = matches!(variant, "continuum" | "both");
    let run_markov = matches!(variant, "markov" | "both");
    if !run_continuum && !run_markov {
        return Err(CliError::Validation(format!(
            "unknown variant `{variant}` (expected continuum|markov|both)"
        )));
    }

    let tgrid = cfg.tgrid()?;
    let mut continuum_samples = None;
    let mut markov_samples = None;
    if run_continuum {
        let curve = run_curve(cfg, Method::PaContinuum)?;
        let path = out_dir.join("pa-continuum.csv");
        std::fs::write(&path, &curve.csv)?;
        manifest.add_file(&path)?;
        merge_validation(&mut manifest.validation, &curve.validation);
        // Keep samples for the comparison file.
        let pa = &cfg.photoassoc;
        let model = ContinuumModel::flat_band(
            pa.xi0,
            pa.half_width,
            pa.n_modes,
            pa.delta,
            Complex64::new(pa.omega, 0.0),
        )
        .map_err(|e| CliError::Validation(e.to_string()))?;
        let s0 = PAState::condensate(
            Complex64::new(pa.alpha0, 0.0),
            Complex64::new(pa.beta0, 0.0),
            pa.n_modes,
        );
        continuum_samples = Some(evolve_pa(
            &s0,
            &model,
            &tgrid,
            cfg.run.rtol,
            cfg.run.atol,
            PaVariant::Continuum,
        )?);
        println!("wrote {}", path.display());
    }
    if run_markov {
        let curve = run_curve(cfg, Method::PaMarkov)?;
        let path = out_dir.join("pa-markov.csv");
        std::fs::write(&path, &curve.csv)?;
        manifest.add_file(&path)?;
        merge_validation(&mut manifest.validation, &curve.validation);
        let pa = &cfg.photoassoc;
        let model = ContinuumModel::flat_band(
            pa.xi0,
            pa.half_width,
            pa.n_modes,
            pa.delta,
            Complex64::new(pa.omega, 0.0),
        )
        .map_err(|e| CliError::Validation(e.to_string()))?;
        let s0 = PAState::condensate(
            Complex64::new(pa.alpha0, 0.0),
            Complex64::new(pa.beta0, 0.0),
            pa.n_modes,
        );
        markov_samples = Some(evolve_pa(
            &s0,
            &model,
            &tgrid,
            cfg.run.rtol,
            cfg.run.atol,
            PaVariant::Markov,
        )?);
        println!("wrote {}", path.display());
    }
    if let (Some(full), Some(markov)) = (&continuum_samples, &markov_samples) {
        let path = out_dir.join("pa-comparison.csv");
        std::fs::write(&path, output::pa_comparison_csv(&tgrid, full, markov))?;
        manifest.add_file(&path)?;
        println!("wrote {}", path.display());
    }
    manifest.wall_ms = start.elapsed().as_millis();
    manifest.write(&out_dir.join("pa_manifest.json"))?;
    Ok(())
}

pub fn cmd_selftest() -> Result<(), CliError> {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("selftest {name}: {} ({detail})", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };

    // Operator identities at N = 4.
    {
        let p = SystemParams::new(4, 1.0, 0.0, 0.0).expect("valid");
        let ops = amcsim::fock::build_bloch_ops(&p);
        let dev = ops
            .lz
            .mat
            .commutator(&ops.lx.mat)
            .max_abs_diff(&ops.ly.mat.scale(Complex64::new(0.0, 1.0)));
        check("commutator", dev < 1e-12, format!("deviation {dev:.2e}"));
    }
    // Fixed-point residuals.
    {
        let p = SystemParams::new(100, 1.0, 0.0, 1.0).expect("valid");
        let fp = amcsim::meanfield::mft_fixed_point(&p).expect("gamma > 0");
        let res = mft_rhs(&fp, &p).norm();
        check("mft-fixed-point", res < 1e-13, format!("residual {res:.2e}"));
        let fpb = bbr_fixed_point(&p).expect("eps = 0");
        let resb: f64 = bbr_rhs(&fpb, &p)
            .to_array()
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        check("bbr-fixed-point", resb < 1e-13, format!("residual {resb:.2e}"));
        let rho_s = steady_state(&p).expect("gamma > 0");
        let drho = amcsim::lindblad::lindblad_rhs(&rho_s, &p).expect("dims match");
        let stationary = drho.max_abs();
        check(
            "steady-state",
            stationary < 1e-13,
            format!("rhs max {stationary:.2e}"),
        );
    }
    // Elliptic kernels.
    {
        let k0 = elliptic_k(0.0).expect("domain");
        let cn = jacobi_cn(1.0, 0.0).expect("domain");
        check(
            "elliptic-kernels",
            (k0 - std::f64::consts::FRAC_PI_2).abs() < 1e-14
                && (cn - 1.0f64.cos()).abs() < 1e-12,
            format!("K(0) = {k0:.15}, cn(1,0) = {cn:.15}"),
        );
    }
    // Determinism of a short run.
    {
        let cfg = RunConfig::default();
        let mut cfg = cfg;
        cfg.params.n = 20;
        cfg.params.eps = 5.0;
        cfg.params.gamma = 0.3;
        cfg.run.method = Method::Mft;
        cfg.run.t_max = 1.0;
        cfg.run.stride = 0.05;
        let a = run_curve(&cfg, Method::Mft)?;
        let b = run_curve(&cfg, Method::Mft)?;
        check("determinism", a.csv == b.csv, "byte-identical rerun".into());
    }

    if failures.is_empty() {
        println!("selftest: all checks passed");
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "selftest failures: {}",
            failures.join(", ")
        )))
    }
}

