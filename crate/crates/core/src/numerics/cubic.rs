//! Real roots of a monic cubic by the trigonometric method.

use crate::error::{Error, Result};

/// Roots of `x^3 + p2 x^2 + p1 x + p0`, sorted descending (`r[0] >= r[1] >=
/// r[2]`). Requires three real roots; a negative discriminant beyond a small
/// tolerance is an error.
pub fn cubic_roots_trig(p2: f64, p1: f64, p0: f64) -> Result<[f64; 3]> {
    // Depress: x = y - p2/3 gives y^3 + p y + q.
    let shift = p2 / 3.0;
    let p = p1 - p2 * p2 / 3.0;
    let q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;

    let scale = p2.abs().max(p1.abs()).max(p0.abs()).max(1.0);
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    if disc < -1e-12 * scale * scale * scale {
        return Err(Error::ComplexRoots { disc });
    }

    let mut roots = if p >= 0.0 {
        // Triple or near-triple root; p can only be >= 0 here within the
        // discriminant tolerance, with all roots collapsing at -shift.
        [-shift; 3]
    } else {
        let amp = 2.0 * (-p / 3.0).sqrt();
        let cos_arg = (3.0 * q / (p * amp)).clamp(-1.0, 1.0);
        let theta = cos_arg.acos() / 3.0;
        let mut r = [0.0; 3];
        for (k, rk) in r.iter_mut().enumerate() {
            *rk = amp * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift;
        }
        r
    };

    // One Newton polish per root to sharpen residuals.
    for r in roots.iter_mut() {
        let f = ((*r + p2) * *r + p1) * *r + p0;
        let df = (3.0 * *r + 2.0 * p2) * *r + p1;
        if df.abs() > 1e-30 {
            let step = f / df;
            if step.abs() < 1e-3 * (1.0 + r.abs()) {
                *r -= step;
            }
        }
    }
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(roots)
}
