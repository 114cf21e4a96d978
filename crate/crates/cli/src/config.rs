//! The JSON flow configuration read by the flow commands.
//!
//! A config holds the gas, the anchor state, the wave sequence, solver
//! settings and output settings. Unknown keys are rejected and every error
//! names the offending key. Angles may be numbers (radians) or strings such
//! as `"30deg"`; anchor and shock angles are normalized into `[0, 2 pi)`.

use std::f64::consts::TAU;

use polarflow::flowfield::{Anchor, Angle, FlowSpec, PieceSpec, SolverSpec};
use polarflow::polar::wrap_angle;
use polarflow::{make_gas, Error as CoreError, GasModel, PhaseBounds};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Output samples over one turn when the config does not say.
pub const DEFAULT_SAMPLES: usize = 720;

/// Phase bounds used when a config or a solver command gives none.
pub fn default_bounds() -> PhaseBounds {
    PhaseBounds {
        rho_min: 1e-3,
        rho_max: 1e3,
        p_min: 1e-3,
        p_max: 1e3,
        speed_max: 100.0,
        e_min: 1e-8,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasConfig {
    pub gamma: f64,
    #[serde(default = "default_bounds")]
    pub bounds: PhaseBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Svg,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Json => "json",
        }
    }
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Svg, Format::Json]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            samples: default_samples(),
            formats: default_formats(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub gas: GasConfig,
    pub anchor: Anchor,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub output: OutputConfig,
}

impl FlowConfig {
    pub fn gas_model(&self) -> Result<GasModel> {
        make_gas(self.gas.gamma, self.gas.bounds).map_err(|e| {
            let key = match e {
                CoreError::Gamma(_) => "gas.gamma",
                _ => "gas.bounds",
            };
            CliError::Config(format!("{key}: {e}"))
        })
    }

    pub fn spec(&self) -> FlowSpec {
        FlowSpec {
            anchor: self.anchor,
            pieces: self.pieces.clone(),
            solver: self.solver.clone(),
        }
    }

    /// Checks values that the schema alone cannot and normalizes angles.
    fn validate(&mut self) -> Result<()> {
        let bad = |key: String, msg: String| Err(CliError::Config(format!("{key}: {msg}")));
        self.gas_model()?;
        let a = &mut self.anchor;
        if !a.theta.0.is_finite() {
            return bad("anchor.theta".into(), "must be finite".into());
        }
        a.theta = Angle(wrap_angle(a.theta.0));
        for (key, v) in [("anchor.rho", a.rho), ("anchor.p", a.p)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(key.into(), format!("must be positive (got {v})"));
            }
        }
        if !a.l.is_finite() || a.l == 0.0 {
            return bad("anchor.l".into(), format!("must be finite and nonzero (got {})", a.l));
        }
        for (i, p) in self.pieces.iter_mut().enumerate() {
            match p {
                PieceSpec::Shock { z, theta, .. } => {
                    if z.is_some() == theta.is_some() {
                        return bad(format!("pieces[{i}]"), "give exactly one of z and theta".into());
                    }
                    if let Some(z) = z {
                        if !(*z > 0.0 && z.is_finite()) {
                            return bad(format!("pieces[{i}].z"), format!("must be positive (got {z})"));
                        }
                    }
                    if let Some(t) = theta {
                        if !t.0.is_finite() {
                            return bad(format!("pieces[{i}].theta"), "must be finite".into());
                        }
                        *t = Angle(wrap_angle(t.0));
                    }
                }
                PieceSpec::Contact { rho, l } => {
                    if !(*rho > 0.0 && rho.is_finite()) {
                        return bad(format!("pieces[{i}].rho"), format!("must be positive (got {rho})"));
                    }
                    if !l.is_finite() {
                        return bad(format!("pieces[{i}].l"), "must be finite".into());
                    }
                }
                PieceSpec::PmWave { span, to_axis, .. } => match (span, *to_axis) {
                    (Some(s), false) if s.0 > 0.0 && s.0 < TAU => {}
                    (Some(s), false) => {
                        return bad(format!("pieces[{i}].span"), format!("must lie in (0, 2 pi) (got {})", s.0));
                    }
                    (None, true) => {}
                    _ => return bad(format!("pieces[{i}]"), "give exactly one of span and to_axis".into()),
                },
            }
        }
        if self.solver.shoot.len() > 2 {
            return bad("solver.shoot".into(), "at most two shooting variables".into());
        }
        if !(self.solver.tolerance > 0.0) {
            return bad("solver.tolerance".into(), "must be positive".into());
        }
        if self.solver.pm_steps_per_radian == 0 {
            return bad("solver.pm_steps_per_radian".into(), "must be positive".into());
        }
        if self.output.samples == 0 {
            return bad("output.samples".into(), "must be positive".into());
        }
        Ok(())
    }
}

/// Strict parse of a JSON config document.
pub fn parse_config(text: &str) -> Result<FlowConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let mut cfg: FlowConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            CliError::Config(inner.to_string())
        } else {
            CliError::Config(format!("{path}: {inner}"))
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"gas": {"gamma": 1.4}, "anchor": {"theta": 0, "rho": 1, "p": 1, "l": 1}}"#;

    #[test]
    fn minimal_config_uses_documented_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.output.samples, 720);
        assert_eq!(c.output.formats.len(), 3);
        assert_eq!(c.solver.pm_steps_per_radian, 64);
        assert_eq!(c.gas.bounds, default_bounds());
        assert!(c.pieces.is_empty());
    }

    #[test]
    fn gamma_below_one_names_the_key() {
        let e = parse_config(&MINIMAL.replace("1.4", "0.9")).unwrap_err();
        assert!(e.to_string().contains("gas.gamma"), "{e}");
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn unknown_keys_are_reported_with_their_path() {
        let text = MINIMAL.replace(r#""gamma": 1.4"#, r#""gamma": 1.4, "gama": 2"#);
        let e = parse_config(&text).unwrap_err().to_string();
        assert!(e.contains("gas") && e.contains("gama"), "{e}");
        let text = MINIMAL.replace(r#""l": 1}"#, r#""l": 1}, "output": {"samples": "many"}"#);
        let e = parse_config(&text).unwrap_err().to_string();
        assert!(e.contains("output.samples"), "{e}");
        assert!(parse_config("{").is_err());
    }

    #[test]
    fn angles_are_normalized() {
        let text = MINIMAL.replace(r#""theta": 0"#, r#""theta": "-90deg""#);
        let c = parse_config(&text).unwrap();
        assert!((c.anchor.theta.0 - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        let text = MINIMAL.replace(
            r#""l": 1}"#,
            r#""l": 1}, "pieces": [{"kind": "shock", "orientation": "forward", "theta": "400deg"}]"#,
        );
        let c = parse_config(&text).unwrap();
        let PieceSpec::Shock { theta: Some(t), .. } = c.pieces[0] else { panic!() };
        assert!((t.0 - 40f64.to_radians()).abs() < 1e-14);
    }

    #[test]
    fn value_errors_name_the_piece() {
        let text = MINIMAL.replace(
            r#""l": 1}"#,
            r#""l": 1}, "pieces": [{"kind": "contact", "rho": -1, "l": 2}]"#,
        );
        let e = parse_config(&text).unwrap_err().to_string();
        assert!(e.contains("pieces[0].rho"), "{e}");
    }
}
