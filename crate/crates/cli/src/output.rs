//! Fixed-schema CSV writers. All numeric cells use the same exponent format
//! so identical configs produce byte-identical files.

use amcsim::meanfield::mft_invariant;
use amcsim::photoassoc::PaSample;
use amcsim::state::{BlochVector, MomentState};
use std::fmt::Write;

fn cell(v: f64) -> String {
    format!("{v:.12e}")
}

/// `t,Fx,Fy,Fz,Na_over_N,W`
pub fn mft_csv(tgrid: &[f64], states: &[BlochVector], n_total: f64) -> String {
    let mut out = String::from("t,Fx,Fy,Fz,Na_over_N,W\n");
    for (t, f) in tgrid.iter().zip(states) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            cell(*t),
            cell(f.fx),
            cell(f.fy),
            cell(f.fz),
            cell(f.atom_fraction()),
            cell(mft_invariant(f, n_total)),
        );
    }
    out
}

/// `t,Fx,Fy,Fz,Kxx,Kyy,Kzz,Kxy,Kxz,Kyz,Na_over_N`
pub fn bbr_csv(tgrid: &[f64], states: &[MomentState]) -> String {
    let mut out = String::from("t,Fx,Fy,Fz,Kxx,Kyy,Kzz,Kxy,Kxz,Kyz,Na_over_N\n");
    for (t, s) in tgrid.iter().zip(states) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            cell(*t),
            cell(s.fx),
            cell(s.fy),
            cell(s.fz),
            cell(s.kxx),
            cell(s.kyy),
            cell(s.kzz),
            cell(s.kxy),
            cell(s.kxz),
            cell(s.kyz),
            cell(s.atom_fraction()),
        );
    }
    out
}

/// `t,Fz,Na_over_N`
pub fn elliptic_csv(tgrid: &[f64], fz: &[f64]) -> String {
    let mut out = String::from("t,Fz,Na_over_N\n");
    for (t, z) in tgrid.iter().zip(fz) {
        let _ = writeln!(
            out,
            "{},{},{}",
            cell(*t),
            cell(*z),
            cell(0.5 * (1.0 - z)),
        );
    }
    out
}

/// `t,abs_alpha_sq,abs_beta_sq,Q,variant`
pub fn pa_csv(tgrid: &[f64], samples: &[PaSample], variant: &str) -> String {
    let mut out = String::from("t,abs_alpha_sq,abs_beta_sq,Q,variant\n");
    for (t, s) in tgrid.iter().zip(samples) {
        let _ = writeln!(
            out,
            "{},{},{},{},{variant}",
            cell(*t),
            cell(s.alpha_sq),
            cell(s.beta_sq),
            cell(s.norm),
        );
    }
    out
}

/// `t,abs_beta_continuum,abs_beta_markov,rel_dev`
pub fn pa_comparison_csv(tgrid: &[f64], full: &[PaSample], markov: &[PaSample]) -> String {
    let mut out = String::from("t,abs_beta_continuum,abs_beta_markov,rel_dev\n");
    for ((t, f), m) in tgrid.iter().zip(full).zip(markov) {
        let bf = f.beta_sq.sqrt();
        let bm = m.beta_sq.sqrt();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            cell(*t),
            cell(bf),
            cell(bm),
            cell((bf - bm).abs() / bm.max(1e-300)),
        );
    }
    out
}

pub struct PhaseRow {
    pub n: usize,
    pub g: f64,
    pub gamma: f64,
    pub mft_class: String,
    pub bbr_class: String,
    pub regime: String,
}

/// `N,g,gamma,mft_class,bbr_class,regime`
pub fn phase_csv(rows: &[PhaseRow]) -> String {
    let mut out = String::from("N,g,gamma,mft_class,bbr_class,regime\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            cell(r.g),
            cell(r.gamma),
            r.mft_class,
            r.bbr_class,
            r.regime
        );
    }
    out
}

/// `N,g,gamma_lower,gamma_upper` (junction thresholds per atom number)
pub fn band_edges_csv(rows: &[(usize, f64, f64, f64)]) -> String {
    let mut out = String::from("N,g,gamma_lower,gamma_upper\n");
    for (n, g, lo, hi) in rows {
        let _ = writeln!(out, "{},{},{},{}", n, cell(*g), cell(*lo), cell(*hi));
    }
    out
}
