//! Dense eigenvalue routines.
//!
//! Hermitian matrices go through a cyclic Jacobi rotation method on the real
//! symmetric embedding; small general real matrices (Jacobian spectra) use a
//! Hessenberg reduction followed by the classic Francis QR iteration.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalues of a real symmetric matrix (row-major flat `n x n`), sorted
/// ascending. Cyclic Jacobi rotations; unconditionally convergent.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "flat matrix must be n*n");
    if n == 0 {
        return Vec::new();
    }
    let mut m = a.to_vec();
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += m[p * n + q].abs();
            }
        }
        if off == 0.0 {
            break;
        }
        let thresh = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let g = 100.0 * m[p * n + q].abs();
                if sweep > 3
                    && d[p].abs() + g == d[p].abs()
                    && d[q].abs() + g == d[q].abs()
                {
                    m[p * n + q] = 0.0;
                } else if m[p * n + q].abs() > thresh {
                    let mut h = d[q] - d[p];
                    let t = if h.abs() + g == h.abs() {
                        m[p * n + q] / h
                    } else {
                        let theta = 0.5 * h / m[p * n + q];
                        let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            t = -t;
                        }
                        t
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    h = t * m[p * n + q];
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    m[p * n + q] = 0.0;
                    let rot = |m: &mut [f64], i: usize, j: usize, k: usize, l: usize| {
                        let g = m[i * n + j];
                        let h = m[k * n + l];
                        m[i * n + j] = g - s * (h + g * tau);
                        m[k * n + l] = h + s * (g - h * tau);
                    };
                    for j in 0..p {
                        rot(&mut m, j, p, j, q);
                    }
                    for j in p + 1..q {
                        rot(&mut m, p, j, j, q);
                    }
                    for j in q + 1..n {
                        rot(&mut m, p, j, q, j);
                    }
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    d
}

/// Eigenvalues of a Hermitian matrix (row-major flat `n x n`), sorted
/// ascending. The matrix is embedded as the real symmetric
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of the input doubled.
pub fn hermitian_eigenvalues(data: &[Complex64], n: usize) -> Result<Vec<f64>> {
    if data.len() != n * n {
        return Err(Error::DimensionMismatch(format!(
            "expected {}x{n} Hermitian matrix",
            n
        )));
    }
    let mut max_abs: f64 = 0.0;
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let h = data[i * n + j];
            max_abs = max_abs.max(h.norm());
            dev = dev.max((h - data[j * n + i].conj()).norm());
        }
    }
    if dev > 1e-8 * max_abs.max(1.0) {
        return Err(Error::NotHermitian { dev });
    }

    let nn = 2 * n;
    let mut emb = vec![0.0; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let h = data[i * n + j];
            emb[i * nn + j] = h.re;
            emb[i * nn + (n + j)] = -h.im;
            emb[(n + i) * nn + j] = h.im;
            emb[(n + i) * nn + (n + j)] = h.re;
        }
    }
    let doubled = symmetric_eigenvalues(&emb, nn);
    Ok(doubled.into_iter().step_by(2).collect())
}

/// Eigenvalues of a small general real matrix (row-major flat `n x n`),
/// intended for Jacobian spectra of modest dimension. Householder reduction
/// to Hessenberg form, then Francis double-shift QR.
pub fn real_eigenvalues_small(a: &[f64], n: usize) -> Result<Vec<Complex64>> {
    if a.len() != n * n {
        return Err(Error::DimensionMismatch(format!("expected {n}x{n} matrix")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Complex64::new(a[0], 0.0)]);
    }
    let mut h = a.to_vec();
    hessenberg(&mut h, n);
    hqr_eigenvalues(&mut h, n)
}

fn hessenberg(h: &mut [f64], n: usize) {
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[i * n + (m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i * n + (m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[i * n + j];
            }
            f /= hh;
            for i in m..=high {
                h[i * n + j] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[i * n + j];
            }
            f /= hh;
            for j in m..=high {
                h[i * n + j] -= f * ort[j];
            }
        }
        h[m * n + (m - 1)] = scale * g;
    }
    // Zero out entries below the first subdiagonal.
    for i in 2..n {
        for j in 0..i - 1 {
            h[i * n + j] = 0.0;
        }
    }
}

#[allow(clippy::too_many_lines, unused_assignments)]
fn hqr_eigenvalues(h: &mut [f64], nn: usize) -> Result<Vec<Complex64>> {
    let low = 0usize;
    let eps = f64::EPSILON;
    let mut d = vec![0.0; nn];
    let mut e = vec![0.0; nn];
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z);
    let (mut w, mut x, mut y);
    p = 0.0;
    q = 0.0;
    r = 0.0;

    let n = nn;
    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[i * n + j].abs();
        }
    }
    if norm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); nn]);
    }
    let mut hi = nn - 1; // index of the active trailing eigenvalue
    let mut iter = 0usize;
    loop {
        // Find a negligible subdiagonal element.
        let mut l = hi;
        while l > low {
            s = h[(l - 1) * n + (l - 1)].abs() + h[l * n + l].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[l * n + (l - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == hi {
            d[hi] = h[hi * n + hi] + exshift;
            e[hi] = 0.0;
            if hi == low {
                break;
            }
            hi -= 1;
            iter = 0;
        } else if l + 1 == hi {
            w = h[hi * n + (hi - 1)] * h[(hi - 1) * n + hi];
            p = (h[(hi - 1) * n + (hi - 1)] - h[hi * n + hi]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            x = h[hi * n + hi] + exshift;
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[hi - 1] = x + z;
                d[hi] = if z != 0.0 { x - w / z } else { d[hi - 1] };
                e[hi - 1] = 0.0;
                e[hi] = 0.0;
            } else {
                d[hi - 1] = x + p;
                d[hi] = x + p;
                e[hi - 1] = z;
                e[hi] = -z;
            }
            if hi < low + 2 {
                break;
            }
            hi -= 2;
            iter = 0;
        } else {
            x = h[hi * n + hi];
            y = h[(hi - 1) * n + (hi - 1)];
            w = h[hi * n + (hi - 1)] * h[(hi - 1) * n + hi];

            if iter == 10 || iter == 20 {
                exshift += x;
                for i in low..=hi {
                    h[i * n + i] -= x;
                }
                s = h[hi * n + (hi - 1)].abs() + h[(hi - 1) * n + (hi - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::StepLimit { t: hi as f64 });
            }

            let mut m = hi - 2;
            loop {
                z = h[m * n + m];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1) * n + m] + h[m * n + (m + 1)];
                q = h[(m + 1) * n + (m + 1)] - z - r - s;
                r = h[(m + 2) * n + (m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[m * n + (m - 1)].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (h[(m - 1) * n + (m - 1)].abs()
                                + z.abs()
                                + h[(m + 1) * n + (m + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=hi {
                h[i * n + (i - 2)] = 0.0;
                if i > m + 2 {
                    h[i * n + (i - 3)] = 0.0;
                }
            }

            for k in m..hi {
                let notlast = k != hi - 1;
                if k != m {
                    p = h[k * n + (k - 1)];
                    q = h[(k + 1) * n + (k - 1)];
                    r = if notlast { h[(k + 2) * n + (k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[k * n + (k - 1)] = -s * x;
                } else if l != m {
                    h[k * n + (k - 1)] = -h[k * n + (k - 1)];
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;

                for j in k..n {
                    let mut pp = h[k * n + j] + q * h[(k + 1) * n + j];
                    if notlast {
                        pp += r * h[(k + 2) * n + j];
                        h[(k + 2) * n + j] -= pp * z;
                    }
                    h[k * n + j] -= pp * x;
                    h[(k + 1) * n + j] -= pp * y;
                }
                for i in 0..=hi.min(k + 3) {
                    let mut pp = x * h[i * n + k] + y * h[i * n + (k + 1)];
                    if notlast {
                        pp += z * h[i * n + (k + 2)];
                        h[i * n + (k + 2)] -= pp * r;
                    }
                    h[i * n + k] -= pp;
                    h[i * n + (k + 1)] -= pp * q;
                }
            }
        }
    }

    let mut eigs: Vec<Complex64> = d
        .into_iter()
        .zip(e)
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    eigs.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let a = [1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0];
        let eig = symmetric_eigenvalues(&a, 3);
        assert!((eig[0] - 1.0).abs() < 1e-14);
        assert!((eig[1] - 2.0).abs() < 1e-14);
        assert!((eig[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_offdiag() {
        let a = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let eig = hermitian_eigenvalues(&a, 2).unwrap();
        assert!((eig[0] + 1.0).abs() < 1e-13);
        assert!((eig[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn complex_hermitian_pauli_y() {
        let a = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        let eig = hermitian_eigenvalues(&a, 2).unwrap();
        assert!((eig[0] + 1.0).abs() < 1e-13);
        assert!((eig[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(matches!(
            hermitian_eigenvalues(&a, 2),
            Err(Error::NotHermitian { .. })
        ));
    }

    /// Deterministic pseudo-random stream for test matrices.
    pub(crate) struct SplitMix64(pub u64);
    impl SplitMix64 {
        pub fn next_f64(&mut self) -> f64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z = z ^ (z >> 31);
            (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        }
    }

    fn random_hermitian(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = SplitMix64(seed);
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = Complex64::new(rng.next_f64(), 0.0);
            for j in i + 1..n {
                let v = Complex64::new(rng.next_f64(), rng.next_f64());
                a[i * n + j] = v;
                a[j * n + i] = v.conj();
            }
        }
        a
    }

    #[test]
    fn trace_identity_d51() {
        let n = 51;
        let a = random_hermitian(n, 7);
        let trace: f64 = (0..n).map(|i| a[i * n + i].re).sum();
        let eig = hermitian_eigenvalues(&a, n).unwrap();
        assert_eq!(eig.len(), n);
        let sum: f64 = eig.iter().sum();
        assert!((sum - trace).abs() < 1e-10, "trace {trace} vs sum {sum}");
    }

    #[test]
    fn unitary_invariance() {
        // Conjugate by a product of complex Givens rotations; the spectrum
        // must not move.
        let n = 8;
        let a = random_hermitian(n, 21);
        let mut b = a.clone();
        let mut rng = SplitMix64(400);
        for _ in 0..20 {
            let p = (rng.next_f64().abs() * n as f64) as usize % n;
            let mut q = (rng.next_f64().abs() * n as f64) as usize % n;
            if p == q {
                q = (q + 1) % n;
            }
            let ang = rng.next_f64() * std::f64::consts::PI;
            let phase = Complex64::from_polar(1.0, rng.next_f64() * std::f64::consts::PI);
            let (c, s) = (ang.cos(), ang.sin());
            // rows
            for j in 0..n {
                let bp = b[p * n + j];
                let bq = b[q * n + j];
                b[p * n + j] = c * bp + s * phase * bq;
                b[q * n + j] = -s * phase.conj() * bp + c * bq;
            }
            // columns (conjugate transpose of the rotation)
            for i in 0..n {
                let bp = b[i * n + p];
                let bq = b[i * n + q];
                b[i * n + p] = c * bp + s * phase.conj() * bq;
                b[i * n + q] = -s * phase * bp + c * bq;
            }
        }
        let ea = hermitian_eigenvalues(&a, n).unwrap();
        let eb = hermitian_eigenvalues(&b, n).unwrap();
        for (x, y) in ea.iter().zip(&eb) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn general_real_known_complex_pair() {
        // Companion-style matrix with eigenvalues 2, 1 ± 3i.
        // (x-2)(x^2 - 2x + 10) = x^3 - 4x^2 + 14x - 20.
        let a = [
            0.0, 0.0, 20.0, //
            1.0, 0.0, -14.0, //
            0.0, 1.0, 4.0,
        ];
        let eig = real_eigenvalues_small(&a, 3).unwrap();
        let mut found_real = false;
        let mut found_pair = 0;
        for v in &eig {
            if v.im.abs() < 1e-9 {
                assert!((v.re - 2.0).abs() < 1e-9);
                found_real = true;
            } else {
                assert!((v.re - 1.0).abs() < 1e-9 && (v.im.abs() - 3.0).abs() < 1e-9);
                found_pair += 1;
            }
        }
        assert!(found_real && found_pair == 2);
    }

    #[test]
    fn general_matches_jacobi_on_symmetric() {
        let n = 9;
        let mut rng = SplitMix64(99);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = rng.next_f64();
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let sym = symmetric_eigenvalues(&a, n);
        let mut gen: Vec<f64> = real_eigenvalues_small(&a, n)
            .unwrap()
            .into_iter()
            .map(|z| {
                assert!(z.im.abs() < 1e-9);
                z.re
            })
            .collect();
        gen.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in sym.iter().zip(&gen) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }
}
