//! First- and second-moment state vectors shared by the closures.

/// First moments (Fx, Fy, Fz) of the generalized Bloch operators.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
}

impl BlochVector {
    pub fn new(fx: f64, fy: f64, fz: f64) -> Self {
        BlochVector { fx, fy, fz }
    }

    pub fn norm(&self) -> f64 {
        (self.fx * self.fx + self.fy * self.fy + self.fz * self.fz).sqrt()
    }

    /// Fraction of particles in the atomic mode, `(1 - Fz) / 2`.
    pub fn atom_fraction(&self) -> f64 {
        0.5 * (1.0 - self.fz)
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.fx, self.fy, self.fz]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        BlochVector::new(a[0], a[1], a[2])
    }
}

/// Bloch vector plus the six symmetrized second-moment fluctuations
/// `K_ij = <L_i L_j + L_j L_i> - 2 <L_i><L_j>`. The diagonal entries are
/// twice the variances; the matrix is symmetric so only one triangle is
/// stored.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentState {
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
    pub kxx: f64,
    pub kyy: f64,
    pub kzz: f64,
    pub kxy: f64,
    pub kxz: f64,
    pub kyz: f64,
}

impl MomentState {
    pub fn bloch(&self) -> BlochVector {
        BlochVector::new(self.fx, self.fy, self.fz)
    }

    /// Second moment `<Lz^2> = Kzz/2 + Fz^2`.
    pub fn lz_squared(&self) -> f64 {
        0.5 * self.kzz + self.fz * self.fz
    }

    pub fn atom_fraction(&self) -> f64 {
        0.5 * (1.0 - self.fz)
    }

    pub fn to_array(&self) -> [f64; 9] {
        [
            self.fx, self.fy, self.fz, self.kxx, self.kyy, self.kzz, self.kxy, self.kxz,
            self.kyz,
        ]
    }

    pub fn from_array(a: [f64; 9]) -> Self {
        MomentState {
            fx: a[0],
            fy: a[1],
            fz: a[2],
            kxx: a[3],
            kyy: a[4],
            kzz: a[5],
            kxy: a[6],
            kxz: a[7],
            kyz: a[8],
        }
    }

    pub fn max_abs_diff(&self, other: &MomentState) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
