//! System parameters, the fixed total-number Fock basis, and the operator
//! matrices of the two-mode conversion model.
//!
//! Basis states are labeled by the molecule count `n`: `|n>` holds `N - 2n`
//! atoms and `n` molecules, `n = 0..N/2`, so the sector dimension is
//! `N/2 + 1` and the total particle number is conserved by construction.
//! The molecule count convention makes the population-difference operator
//! and `Lz` diagonal and the Hamiltonian tridiagonal.

use crate::error::{Error, Result};
use crate::matrix::CMat;
use crate::state::MomentState;
use num_complex::Complex64;

/// Model parameters. `g` sets the frequency unit: the binding energy and
/// dephasing rate are in units of `g`, times in `1/g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    n: usize,
    g: f64,
    eps: f64,
    gamma: f64,
}

impl SystemParams {
    pub fn new(n: usize, g: f64, eps: f64, gamma: f64) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "total atom number must be even and >= 2, got {n}"
            )));
        }
        // g = 0 is admitted so pure-dephasing runs can be expressed; the
        // closed-form solution separately insists on g > 0.
        if !(g >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "conversion strength must be nonnegative, got {g}"
            )));
        }
        if !(eps >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "binding energy must be >= 0, got {eps}"
            )));
        }
        if !(gamma >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "dephasing rate must be >= 0, got {gamma}"
            )));
        }
        Ok(SystemParams { n, g, eps, gamma })
    }

    pub fn n_total(&self) -> usize {
        self.n
    }

    pub fn n_f(&self) -> f64 {
        self.n as f64
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        SystemParams::new(self.n, self.g, self.eps, gamma)
    }

    /// Collective conversion frequency `g sqrt(N/2)`.
    pub fn delta(&self) -> f64 {
        self.g * (self.n_f() / 2.0).sqrt()
    }

    /// Constant drive term in the Fy equation, `delta/2 + 2 delta/N`.
    pub fn r_offset(&self) -> f64 {
        let d = self.delta();
        0.5 * d + 2.0 * d / self.n_f()
    }

    /// Sector dimension `N/2 + 1`.
    pub fn dim(&self) -> usize {
        self.n / 2 + 1
    }

    pub fn basis(&self) -> FockBasis {
        FockBasis { n_total: self.n }
    }
}

/// The fixed-N Fock sector: index `n` counts molecules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    n_total: usize,
}

impl FockBasis {
    pub fn new(n_total: usize) -> Result<Self> {
        if n_total < 2 || n_total % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "total atom number must be even and >= 2, got {n_total}"
            )));
        }
        Ok(FockBasis { n_total })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.n_total / 2 + 1
    }

    /// (atoms, molecules) occupation of basis index `n`.
    pub fn occupation(&self, n: usize) -> (usize, usize) {
        (self.n_total - 2 * n, n)
    }
}

/// Structural tag for operator matrices; used to pick fast paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixStructure {
    Diagonal,
    Tridiagonal,
    Dense,
}

/// A D x D operator in the Fock basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub mat: CMat,
    pub structure: MatrixStructure,
    pub hermitian: bool,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

/// A density matrix in the Fock basis. Validity (Hermitian, unit trace,
/// positive) is checked by [`check_density`], not enforced on construction.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub mat: CMat,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Total atom number implied by the sector dimension.
    pub fn n_total(&self) -> usize {
        2 * (self.dim() - 1)
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Uniform mixture of all basis states.
    pub fn maximally_mixed(n_total: usize) -> Result<Self> {
        let basis = FockBasis::new(n_total)?;
        let d = basis.dim();
        let w = Complex64::new(1.0 / d as f64, 0.0);
        let mut mat = CMat::zeros(d);
        for i in 0..d {
            mat[(i, i)] = w;
        }
        Ok(DensityMatrix { mat })
    }
}

/// Tridiagonal matrix elements of the conversion Hamiltonian.
///
/// Diagonal: `(eps/2)(N - 2n)`. First off-diagonal `<n-1|H|n>`:
/// `(g/2) sqrt(n (N - 2n + 1)(N - 2n + 2))`, real symmetric.
pub fn build_hamiltonian(params: &SystemParams) -> OperatorMatrix {
    let d = params.dim();
    let nf = params.n_f();
    let mut mat = CMat::zeros(d);
    for i in 0..d {
        let ni = i as f64;
        mat[(i, i)] = Complex64::new(0.5 * params.eps() * (nf - 2.0 * ni), 0.0);
    }
    for m in 0..d - 1 {
        // <m|H|m+1> with n = m + 1 molecules on the right.
        let n = (m + 1) as f64;
        let v = 0.5 * params.g() * (n * (nf - 2.0 * n + 1.0) * (nf - 2.0 * n + 2.0)).sqrt();
        mat[(m, m + 1)] = Complex64::new(v, 0.0);
        mat[(m + 1, m)] = Complex64::new(v, 0.0);
    }
    OperatorMatrix {
        mat,
        structure: MatrixStructure::Tridiagonal,
        hermitian: true,
    }
}

/// Population-difference operator, diagonal with entries `4n - N`.
pub fn build_lindblad_op(params: &SystemParams) -> OperatorMatrix {
    let d = params.dim();
    let nf = params.n_f();
    let mut mat = CMat::zeros(d);
    for i in 0..d {
        mat[(i, i)] = Complex64::new(4.0 * i as f64 - nf, 0.0);
    }
    OperatorMatrix {
        mat,
        structure: MatrixStructure::Diagonal,
        hermitian: true,
    }
}

/// The three generalized Bloch operators.
pub struct BlochOps {
    pub lx: OperatorMatrix,
    pub ly: OperatorMatrix,
    pub lz: OperatorMatrix,
}

/// Off-diagonal element `<m|Lx|m+1>` of the coherence operator.
fn lx_elem(nf: f64, m: usize) -> f64 {
    let n = (m + 1) as f64;
    std::f64::consts::SQRT_2 * (n * (nf - 2.0 * n + 1.0) * (nf - 2.0 * n + 2.0)).sqrt()
        / nf.powf(1.5)
}

/// Build Lx, Ly, Lz.
///
/// `Lz` is diagonal with entries `(4n - N)/N`. `Lx` is real symmetric
/// tridiagonal. `Ly` is Hermitian tridiagonal with `<n-1|Ly|n> = +i
/// <n-1|Lx|n>`; the sign is pinned by the commutator identities
/// `[Lz, Lx] = (4i/N) Ly` and `[Lz, Ly] = -(4i/N) Lx` (see the operator
/// identity tests).
pub fn build_bloch_ops(params: &SystemParams) -> BlochOps {
    let d = params.dim();
    let nf = params.n_f();

    let mut lz = CMat::zeros(d);
    for i in 0..d {
        lz[(i, i)] = Complex64::new((4.0 * i as f64 - nf) / nf, 0.0);
    }

    let mut lx = CMat::zeros(d);
    let mut ly = CMat::zeros(d);
    for m in 0..d - 1 {
        let x = lx_elem(nf, m);
        lx[(m, m + 1)] = Complex64::new(x, 0.0);
        lx[(m + 1, m)] = Complex64::new(x, 0.0);
        ly[(m, m + 1)] = Complex64::new(0.0, x);
        ly[(m + 1, m)] = Complex64::new(0.0, -x);
    }

    BlochOps {
        lx: OperatorMatrix {
            mat: lx,
            structure: MatrixStructure::Tridiagonal,
            hermitian: true,
        },
        ly: OperatorMatrix {
            mat: ly,
            structure: MatrixStructure::Tridiagonal,
            hermitian: true,
        },
        lz: OperatorMatrix {
            mat: lz,
            structure: MatrixStructure::Diagonal,
            hermitian: true,
        },
    }
}

/// Expectation value `Tr(rho op)`.
pub fn expectation(rho: &DensityMatrix, op: &OperatorMatrix) -> Result<Complex64> {
    rho.mat.check_same_dim(&op.mat)?;
    Ok(rho.mat.trace_product(&op.mat))
}

/// Cached Bloch operators and their symmetrized products, for repeated
/// moment extraction from the same sector.
pub struct MomentCache {
    lx: CMat,
    ly: CMat,
    lz: CMat,
    acom_xx: CMat,
    acom_yy: CMat,
    acom_zz: CMat,
    acom_xy: CMat,
    acom_xz: CMat,
    acom_yz: CMat,
}

impl MomentCache {
    pub fn new(params: &SystemParams) -> Self {
        let ops = build_bloch_ops(params);
        let (lx, ly, lz) = (ops.lx.mat, ops.ly.mat, ops.lz.mat);
        MomentCache {
            acom_xx: lx.anticommutator(&lx),
            acom_yy: ly.anticommutator(&ly),
            acom_zz: lz.anticommutator(&lz),
            acom_xy: lx.anticommutator(&ly),
            acom_xz: lx.anticommutator(&lz),
            acom_yz: ly.anticommutator(&lz),
            lx,
            ly,
            lz,
        }
    }

    pub fn moments(&self, rho: &DensityMatrix) -> MomentState {
        let fx = rho.mat.trace_product(&self.lx).re;
        let fy = rho.mat.trace_product(&self.ly).re;
        let fz = rho.mat.trace_product(&self.lz).re;
        MomentState {
            fx,
            fy,
            fz,
            kxx: rho.mat.trace_product(&self.acom_xx).re - 2.0 * fx * fx,
            kyy: rho.mat.trace_product(&self.acom_yy).re - 2.0 * fy * fy,
            kzz: rho.mat.trace_product(&self.acom_zz).re - 2.0 * fz * fz,
            kxy: rho.mat.trace_product(&self.acom_xy).re - 2.0 * fx * fy,
            kxz: rho.mat.trace_product(&self.acom_xz).re - 2.0 * fx * fz,
            kyz: rho.mat.trace_product(&self.acom_yz).re - 2.0 * fy * fz,
        }
    }
}

/// First and symmetrized second moments of the Bloch operators in `rho`.
/// The sector size fixes the total atom number.
pub fn bloch_moments(rho: &DensityMatrix) -> Result<MomentState> {
    let n_total = rho.n_total();
    if rho.dim() < 2 {
        return Err(Error::DimensionMismatch(
            "density matrix must act on a sector with N >= 2".into(),
        ));
    }
    let params = SystemParams::new(n_total, 1.0, 0.0, 0.0)?;
    Ok(MomentCache::new(&params).moments(rho))
}

/// Projector `|n><n|`.
pub fn fock_state(n: usize, n_total: usize) -> Result<DensityMatrix> {
    let basis = FockBasis::new(n_total)?;
    if n >= basis.dim() {
        return Err(Error::IndexOutOfRange(format!(
            "molecule index {n} exceeds N/2 = {}",
            basis.dim() - 1
        )));
    }
    let mut mat = CMat::zeros(basis.dim());
    mat[(n, n)] = Complex64::new(1.0, 0.0);
    Ok(DensityMatrix { mat })
}

/// Analytic moments of the Fock state `|n>`: `Fz = (4n - N)/N`, vanishing
/// coherences and cross fluctuations, and
/// `Kxx = Kyy = (4/N^3)[(n+1)(N-2n)(N-2n-1) + n(N-2n+1)(N-2n+2)]`.
pub fn fock_moments(n: usize, n_total: usize) -> Result<MomentState> {
    let basis = FockBasis::new(n_total)?;
    if n >= basis.dim() {
        return Err(Error::IndexOutOfRange(format!(
            "molecule index {n} exceeds N/2 = {}",
            basis.dim() - 1
        )));
    }
    let nf = n_total as f64;
    let nm = n as f64;
    let kxx = 4.0 / nf.powi(3)
        * ((nm + 1.0) * (nf - 2.0 * nm) * (nf - 2.0 * nm - 1.0)
            + nm * (nf - 2.0 * nm + 1.0) * (nf - 2.0 * nm + 2.0));
    Ok(MomentState {
        fx: 0.0,
        fy: 0.0,
        fz: (4.0 * nm - nf) / nf,
        kxx,
        kyy: kxx,
        kzz: 0.0,
        kxy: 0.0,
        kxz: 0.0,
        kyz: 0.0,
    })
}

/// Validation summary for a density matrix.
#[derive(Debug, Clone, Copy)]
pub struct DensityCheck {
    pub trace_err: f64,
    pub herm_err: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
}

impl DensityCheck {
    pub fn passed(&self) -> bool {
        self.trace_err < self.tol && self.herm_err < self.tol && self.min_eigenvalue > -self.tol
    }
}

/// Report trace, Hermiticity and positivity deviations of `rho`.
pub fn check_density(rho: &DensityMatrix, tol: f64) -> DensityCheck {
    let trace_err = (rho.mat.trace() - Complex64::new(1.0, 0.0)).norm();
    let herm_err = rho.mat.hermiticity_error();
    // Eigenvalues of the Hermitian part; drift beyond `herm_err` is already
    // reported separately.
    let mut sym = rho.mat.clone();
    sym.hermitize();
    let min_eigenvalue = sym
        .eigenvalues()
        .map(|e| e[0])
        .unwrap_or(f64::NEG_INFINITY);
    DensityCheck {
        trace_err,
        herm_err,
        min_eigenvalue,
        tol,
    }
}
