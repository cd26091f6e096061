//! Fixed-point stability reports shared by the mean-field and backreaction
//! analyses.

use num_complex::Complex64;

/// Which closure produced the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theory {
    MeanField,
    Backreaction,
}

impl std::fmt::Display for Theory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Theory::MeanField => write!(f, "MFT"),
            Theory::Backreaction => write!(f, "BBR"),
        }
    }
}

/// Node vs spiral approach to a stable fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    /// Both eigenvalues real and negative: monotone approach.
    StableJunction,
    /// Complex conjugate pair with negative real part: oscillatory approach.
    StableFocus,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StabilityClass::StableJunction => write!(f, "stable-junction"),
            StabilityClass::StableFocus => write!(f, "stable-focus"),
        }
    }
}

/// Combined regime of the two closures at the same parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    BothJunction,
    BothFocus,
    /// Backreaction predicts a junction while mean-field predicts a focus.
    Mixed,
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeLabel::BothJunction => write!(f, "both-junction"),
            RegimeLabel::BothFocus => write!(f, "both-focus"),
            RegimeLabel::Mixed => write!(f, "mixed"),
        }
    }
}

/// Fixed point of either closure.
#[derive(Debug, Clone, Copy)]
pub enum FixedPoint {
    Bloch(crate::state::BlochVector),
    Moments(crate::state::MomentState),
}

/// Fixed point, linearization eigenvalues in the (Fy, Fz) subspace, and the
/// resulting classification.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub theory: Theory,
    pub fixed_point: FixedPoint,
    pub eigenvalues: [Complex64; 2],
    pub class: StabilityClass,
}
