//! Complete elliptic integral of the first kind and Jacobi elliptic
//! functions, both through the arithmetic-geometric mean.
//!
//! The argument `m` is the *modulus* throughout: the defining integral of
//! `K(m)` carries `m^2 sin^2` under the square root, and `jacobi_cn(u, m)`
//! degenerates to `cos(u)` at `m = 0` and to `sech(u)` as `m -> 1`.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

const MAX_ITER: usize = 40;

fn check_modulus(m: f64) -> Result<()> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::OutOfDomain(format!(
            "elliptic modulus must satisfy 0 <= m < 1, got {m}"
        )));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind, `K(m) = π / (2 AGM(1, m'))`
/// with `m' = sqrt(1 - m^2)` the complementary modulus.
pub fn elliptic_k(m: f64) -> Result<f64> {
    check_modulus(m)?;
    if m == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m * m).sqrt();
    for _ in 0..MAX_ITER {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (a - b).abs() <= f64::EPSILON * an {
            return Ok(FRAC_PI_2 / an);
        }
        a = an;
        b = bn;
    }
    Ok(FRAC_PI_2 / a)
}

/// Jacobi elliptic `sn`, `cn`, `dn` from one descending AGM chain.
pub fn jacobi_sn_cn_dn(u: f64, m: f64) -> Result<(f64, f64, f64)> {
    check_modulus(m)?;
    if m < 1e-14 {
        return Ok((u.sin(), u.cos(), 1.0));
    }

    // Reduce by the full period 4K to keep the ascending phase small.
    let quarter = elliptic_k(m)?;
    let period = 4.0 * quarter;
    let u = u - period * (u / period).round();

    let mut a = vec![1.0f64];
    let mut c = vec![m];
    let mut b = (1.0 - m * m).sqrt();
    loop {
        let a_prev = *a.last().unwrap();
        let an = 0.5 * (a_prev + b);
        let cn_ = 0.5 * (a_prev - b);
        let bn = (a_prev * b).sqrt();
        a.push(an);
        c.push(cn_);
        b = bn;
        if cn_.abs() <= f64::EPSILON * an || a.len() > MAX_ITER {
            break;
        }
    }
    let n = a.len() - 1;
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    let mut phi_prev = phi;
    for i in (1..=n).rev() {
        phi_prev = phi;
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = cn / (phi_prev - phi).cos();
    Ok((sn, cn, dn))
}

/// Jacobi elliptic cosine `cn(u, m)`.
pub fn jacobi_cn(u: f64, m: f64) -> Result<f64> {
    jacobi_sn_cn_dn(u, m).map(|(_, cn, _)| cn)
}
