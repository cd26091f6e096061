//! Frozen figure presets. Parameters come from the captions; time windows
//! and strides are artifact choices long enough to show the relaxation or a
//! few oscillation periods.
//!
//! Orientation note: the first figure's quoted initial condition carries the
//! opposite sign to the Lz convention used here, while its own y-axis starts
//! at atom fraction 1, so its presets start from the all-atom Fock state;
//! see the audit test.

use crate::config::Method;

#[derive(Debug, Clone, Copy)]
pub struct FigurePreset {
    pub key: &'static str,
    pub n: usize,
    pub g: f64,
    pub eps: f64,
    pub gamma: f64,
    /// Fock index of the initial state (molecule count).
    pub n0: usize,
    pub t_max: f64,
    pub stride: f64,
    pub rtol: f64,
    pub atol: f64,
    pub methods: &'static [Method],
}

const ELLIPTIC_EXACT: &[Method] = &[Method::Elliptic, Method::Exact];
const ALL_THREE: &[Method] = &[Method::Exact, Method::Mft, Method::Bbr];
const MFT_BBR: &[Method] = &[Method::Mft, Method::Bbr];

pub const FIGURE_PRESETS: &[FigurePreset] = &[
    FigurePreset { key: "fig1a", n: 100, g: 1.0, eps: 25.0, gamma: 0.0, n0: 0, t_max: 0.61, stride: 5e-4, rtol: 1e-10, atol: 1e-13, methods: ELLIPTIC_EXACT },
    FigurePreset { key: "fig1b", n: 100, g: 1.0, eps: 19.0, gamma: 0.0, n0: 0, t_max: 0.73, stride: 5e-4, rtol: 1e-10, atol: 1e-13, methods: ELLIPTIC_EXACT },
    FigurePreset { key: "fig2a", n: 100, g: 1.0, eps: 30.0, gamma: 1.0, n0: 0, t_max: 4.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: ALL_THREE },
    FigurePreset { key: "fig2b", n: 100, g: 1.0, eps: 30.0, gamma: 1.0, n0: 0, t_max: 4.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: ALL_THREE },
    FigurePreset { key: "fig2c", n: 100, g: 1.0, eps: 40.0, gamma: 1.8, n0: 0, t_max: 3.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: ALL_THREE },
    FigurePreset { key: "fig2d", n: 100, g: 1.0, eps: 40.0, gamma: 1.8, n0: 0, t_max: 3.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: ALL_THREE },
    FigurePreset { key: "fig2e", n: 100, g: 1.0, eps: 10.0, gamma: 0.2, n0: 0, t_max: 10.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: ALL_THREE },
    FigurePreset { key: "fig2f", n: 100, g: 1.0, eps: 10.0, gamma: 0.2, n0: 0, t_max: 10.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: ALL_THREE },
    FigurePreset { key: "fig3a", n: 100, g: 1.0, eps: 30.0, gamma: 1.0, n0: 0, t_max: 4.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig3b", n: 100, g: 1.0, eps: 40.0, gamma: 1.8, n0: 0, t_max: 3.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig3c", n: 100, g: 1.0, eps: 10.0, gamma: 0.2, n0: 0, t_max: 10.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig3d", n: 100, g: 1.0, eps: 15.0, gamma: 0.8, n0: 0, t_max: 6.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig4a", n: 300, g: 1.0, eps: 0.0, gamma: 10.0, n0: 10, t_max: 8.0, stride: 0.005, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig4b", n: 300, g: 1.0, eps: 0.0, gamma: 12.0, n0: 90, t_max: 8.0, stride: 0.005, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig4c", n: 300, g: 1.0, eps: 0.0, gamma: 4.0, n0: 30, t_max: 8.0, stride: 0.005, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig4d", n: 300, g: 1.0, eps: 0.0, gamma: 24.0, n0: 80, t_max: 8.0, stride: 0.005, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig5a", n: 300, g: 1.0, eps: 0.0, gamma: 0.12, n0: 40, t_max: 40.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig5b", n: 300, g: 1.0, eps: 0.0, gamma: 0.2, n0: 82, t_max: 40.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig5c", n: 300, g: 1.0, eps: 0.0, gamma: 0.16, n0: 45, t_max: 40.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "fig5d", n: 300, g: 1.0, eps: 0.0, gamma: 0.1, n0: 100, t_max: 40.0, stride: 0.01, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "mixed_a", n: 80, g: 1.0, eps: 0.0, gamma: 1.1192, n0: 0, t_max: 2.0, stride: 0.002, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
    FigurePreset { key: "mixed_b", n: 1000, g: 1.0, eps: 0.0, gamma: 3.9568, n0: 0, t_max: 2.0, stride: 0.002, rtol: 1e-8, atol: 1e-10, methods: MFT_BBR },
];

pub fn find(key: &str) -> Option<&'static FigurePreset> {
    FIGURE_PRESETS.iter().find(|p| p.key == key)
}

pub fn keys() -> Vec<&'static str> {
    FIGURE_PRESETS.iter().map(|p| p.key).collect()
}
