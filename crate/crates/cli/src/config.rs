//! Declarative run configuration: a TOML file plus flag overrides, flags
//! winning.

use crate::CliError;
use amcsim::fock::SystemParams;
use amcsim::state::MomentState;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Mft,
    Bbr,
    Elliptic,
    PaContinuum,
    PaMarkov,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Method::Exact),
            "mft" => Ok(Method::Mft),
            "bbr" => Ok(Method::Bbr),
            "elliptic" => Ok(Method::Elliptic),
            "pa-continuum" => Ok(Method::PaContinuum),
            "pa-markov" => Ok(Method::PaMarkov),
            other => Err(format!(
                "unknown method `{other}` (expected exact|mft|bbr|elliptic|pa-continuum|pa-markov)"
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamsSection {
    pub n: usize,
    pub g: f64,
    pub eps: f64,
    pub gamma: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        ParamsSection {
            n: 100,
            g: 1.0,
            eps: 0.0,
            gamma: 0.0,
        }
    }
}

/// Initial condition: a Fock index, an explicit Bloch vector, or explicit
/// moments.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct InitialSection {
    pub kind: String,
    pub n0: usize,
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
    pub moments: Option<[f64; 9]>,
}

impl Default for InitialSection {
    fn default() -> Self {
        InitialSection {
            kind: "fock".into(),
            n0: 0,
            fx: 0.0,
            fy: 0.0,
            fz: -1.0,
            moments: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunSection {
    pub method: Method,
    pub t_max: f64,
    pub stride: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            method: Method::Exact,
            t_max: 4.0,
            stride: 0.01,
            rtol: 1e-8,
            atol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PhotoassocSection {
    pub xi0: f64,
    pub half_width: f64,
    pub n_modes: usize,
    pub omega: f64,
    pub delta: f64,
    pub alpha0: f64,
    pub beta0: f64,
}

impl Default for PhotoassocSection {
    fn default() -> Self {
        PhotoassocSection {
            xi0: 0.5,
            half_width: 50.0,
            n_modes: 2000,
            omega: 1.0,
            delta: 0.0,
            alpha0: 1.0,
            beta0: 0.1,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub params: ParamsSection,
    pub initial: InitialSection,
    pub run: RunSection,
    pub photoassoc: PhotoassocSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {path:?}: {e}")))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config parse error in {path:?}: {e}")))
    }

    pub fn system_params(&self) -> Result<SystemParams, CliError> {
        SystemParams::new(
            self.params.n,
            self.params.g,
            self.params.eps,
            self.params.gamma,
        )
        .map_err(|e| CliError::Validation(format!("params: {e}")))
    }

    /// Time grid from 0 to t_max with the configured stride.
    pub fn tgrid(&self) -> Result<Vec<f64>, CliError> {
        if !(self.run.t_max > 0.0) || !(self.run.stride > 0.0) {
            return Err(CliError::Validation(
                "t_max and stride must be positive".into(),
            ));
        }
        let n = (self.run.t_max / self.run.stride).round() as usize;
        if n < 1 {
            return Err(CliError::Validation("stride exceeds t_max".into()));
        }
        Ok((0..=n)
            .map(|i| self.run.t_max * i as f64 / n as f64)
            .collect())
    }

    /// Moment-state initial condition (for mft/bbr/elliptic runs).
    pub fn initial_moments(&self) -> Result<MomentState, CliError> {
        match self.initial.kind.as_str() {
            "fock" => amcsim::fock::fock_moments(self.initial.n0, self.params.n)
                .map_err(|e| CliError::Validation(format!("initial: {e}"))),
            "bloch" => Ok(MomentState {
                fx: self.initial.fx,
                fy: self.initial.fy,
                fz: self.initial.fz,
                ..MomentState::default()
            }),
            "moments" => {
                let m = self.initial.moments.ok_or_else(|| {
                    CliError::Validation("initial.kind = \"moments\" needs initial.moments".into())
                })?;
                Ok(MomentState::from_array(m))
            }
            other => Err(CliError::Validation(format!(
                "unknown initial.kind `{other}` (expected fock|bloch|moments)"
            ))),
        }
    }

    pub fn validate_for_method(&self) -> Result<(), CliError> {
        match self.run.method {
            Method::Exact => {
                if self.initial.kind != "fock" {
                    return Err(CliError::Validation(
                        "method = exact needs a Fock initial state (initial.kind = \"fock\")"
                            .into(),
                    ));
                }
            }
            Method::Elliptic => {
                if self.params.gamma != 0.0 {
                    return Err(CliError::Validation(
                        "method = elliptic requires gamma = 0".into(),
                    ));
                }
                let m = self.initial_moments()?;
                if m.fx != 0.0 || m.fy != 0.0 {
                    return Err(CliError::Validation(
                        "method = elliptic requires Fx0 = Fy0 = 0".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}
