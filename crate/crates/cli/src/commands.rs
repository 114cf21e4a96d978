//! Subcommands. Each one fronts a single operation of the core crate.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use polarflow::flowfield::Angle;
use polarflow::pmwave::STEPS_PER_RADIAN;
use polarflow::{
    bv_decompose, build_flow, full_audit, integrate_pm, make_gas, max_deflection, max_deflection_limit,
    sector_decompose, solve_shock_angle, validate_structure, Branch, FlowField, GasModel, Orientation,
    PrimitiveState,
};
use serde::Serialize;

use crate::config::{default_bounds, parse_config, FlowConfig, Format};
use crate::error::{CliError, Result};
use crate::export::{states_to_csv, to_csv, to_json, to_svg, write_atomic};

#[derive(Debug, Parser)]
#[command(name = "polarflow", version, about = "Build and verify steady self-similar Euler flows U(theta)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a flow and write the artifacts listed in its output block.
    Build {
        config: PathBuf,
        /// Directory for the artifacts; files are named after the config.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Build a flow, audit it and print the JSON report.
    Verify {
        config: PathBuf,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the sector decomposition and the jump/Lipschitz split.
    Analyze {
        config: PathBuf,
        /// Include the sampled Lipschitz part.
        #[arg(long)]
        full: bool,
    },
    /// Write one artifact of a built flow.
    Export {
        config: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's sample count.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Shock angle for a given upstream Mach number and deflection.
    ShockSolve {
        #[arg(long)]
        mach: f64,
        /// Radians, or degrees with a "deg" suffix.
        #[arg(long, allow_hyphen_values = true)]
        deflection: Angle,
        #[arg(long, value_enum, default_value_t = BranchArg::Weak)]
        branch: BranchArg,
        #[command(flatten)]
        gas: GasArgs,
    },
    /// Integrate a Prandtl–Meyer wave from a sonic state and print its samples as CSV.
    PmTrace {
        #[command(flatten)]
        gas: GasArgs,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Tangential velocity of the start state; its normal velocity is sonic.
        #[arg(long, allow_hyphen_values = true)]
        l: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta_start: Angle,
        #[arg(long, allow_hyphen_values = true)]
        theta_end: Angle,
        #[arg(long, value_enum, default_value_t = OrientationArg::Forward)]
        orientation: OrientationArg,
        #[arg(long, default_value_t = STEPS_PER_RADIAN)]
        steps_per_radian: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest flow turning across an attached shock.
    MaxTurn {
        #[command(flatten)]
        gas: GasArgs,
        /// Also report the maximum at this upstream Mach number.
        #[arg(long)]
        mach: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct GasArgs {
    #[arg(long, default_value_t = 1.4)]
    pub gamma: f64,
}

impl GasArgs {
    fn model(&self) -> Result<GasModel> {
        make_gas(self.gamma, default_bounds()).map_err(|e| CliError::Config(format!("--gamma: {e}")))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BranchArg {
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrientationArg {
    Forward,
    Backward,
}

pub fn load_config(path: &Path) -> Result<FlowConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

fn build(cfg: &FlowConfig) -> Result<FlowField> {
    let g = cfg.gas_model()?;
    Ok(build_flow(&g, &cfg.spec())?)
}

fn artifact(f: &FlowField, format: Format, samples: usize) -> String {
    match format {
        Format::Csv => to_csv(f, samples),
        Format::Svg => to_svg(f, samples),
        Format::Json => to_json(&full_audit(f)),
    }
}

#[derive(Serialize)]
struct Analysis {
    sectors: Vec<polarflow::Sector>,
    structure: polarflow::CheckList,
    theta0: f64,
    jumps: Vec<(f64, [f64; 4])>,
    total_variation_jump: f64,
    total_variation_lipschitz: f64,
    lipschitz_constant: f64,
    limit_mismatch_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lipschitz_part: Option<Vec<(f64, [f64; 4])>>,
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs one command, writing its normal output to `out`.
pub fn run(cmd: &Command, out: &mut dyn Write) -> Result<()> {
    let mut say = |s: String| {
        // a closed stdout is not worth a failure exit
        let _ = out.write_all(s.as_bytes());
    };
    match cmd {
        Command::Build { config, out_dir } => {
            let cfg = load_config(config)?;
            let f = build(&cfg)?;
            let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("flow");
            say(format!(
                "built {} pieces, closure residual {:.3e}\n",
                f.pieces.len(),
                f.closure.max_abs()
            ));
            for fmt in &cfg.output.formats {
                let path = out_dir.join(format!("{stem}.{}", fmt.extension()));
                write_atomic(&path, artifact(&f, *fmt, cfg.output.samples).as_bytes())?;
                say(format!("wrote {}\n", path.display()));
            }
            Ok(())
        }
        Command::Verify { config, out: file } => {
            let cfg = load_config(config)?;
            let f = build(&cfg)?;
            let report = full_audit(&f);
            let text = to_json(&report);
            if let Some(p) = file {
                write_atomic(p, text.as_bytes())?;
            }
            say(text);
            if report.verdict {
                Ok(())
            } else {
                Err(CliError::Admissibility(report.failures().join("; ")))
            }
        }
        Command::Analyze { config, full } => {
            let cfg = load_config(config)?;
            let f = build(&cfg)?;
            let sectors = sector_decompose(&f).map_err(|e| CliError::Admissibility(e.to_string()))?;
            let structure = validate_structure(&f);
            let d = bv_decompose(&f, cfg.output.samples);
            let passed = structure.passed();
            let a = Analysis {
                sectors,
                structure,
                theta0: d.theta0,
                jumps: d.jumps,
                total_variation_jump: d.total_variation_jump,
                total_variation_lipschitz: d.total_variation_lipschitz,
                lipschitz_constant: d.lipschitz_constant,
                limit_mismatch_max: d.limit_mismatch_max,
                lipschitz_part: full.then_some(d.lipschitz_part),
            };
            say(json_line(&a));
            if passed {
                Ok(())
            } else {
                let names: Vec<_> = a.structure.failures().map(|c| c.name.clone()).collect();
                Err(CliError::Admissibility(format!("failed checks: {}", names.join(", "))))
            }
        }
        Command::Export {
            config,
            format,
            out: path,
            samples,
        } => {
            let cfg = load_config(config)?;
            if *samples == Some(0) {
                return Err(CliError::Config("--samples must be positive".into()));
            }
            let f = build(&cfg)?;
            let n = samples.unwrap_or(cfg.output.samples);
            write_atomic(path, artifact(&f, *format, n).as_bytes())?;
            say(format!("wrote {}\n", path.display()));
            Ok(())
        }
        Command::ShockSolve {
            mach,
            deflection,
            branch,
            gas,
        } => {
            let g = gas.model()?;
            let b = match branch {
                BranchArg::Weak => Branch::Weak,
                BranchArg::Strong => Branch::Strong,
            };
            let beta = solve_shock_angle(*mach, deflection.0, b, &g)?;
            say(format!(
                "shock angle: {:.4}° ({:.10} rad)\n",
                beta.to_degrees(),
                beta
            ));
            Ok(())
        }
        Command::PmTrace {
            gas,
            rho,
            p,
            l,
            theta_start,
            theta_end,
            orientation,
            steps_per_radian,
            out: file,
        } => {
            let g = gas.model()?;
            if !(*rho > 0.0 && *p > 0.0) {
                return Err(CliError::Config("--rho and --p must be positive".into()));
            }
            let o = match orientation {
                OrientationArg::Forward => Orientation::Forward,
                OrientationArg::Backward => Orientation::Backward,
            };
            let (t0, t1) = (theta_start.0, theta_end.0);
            let n = o.sign() * (g.gamma() * p / rho).sqrt();
            let (u, v) = polarflow::from_polar(n, *l, t0);
            let start = PrimitiveState::new(*rho, u, v, *p);
            let steps = polarflow::pmwave::steps_for((t1 - t0).abs(), *steps_per_radian);
            let w = integrate_pm(&start, t0, t1, o, steps, &g)?;
            let text = states_to_csv(w.samples.iter().map(|s| (s.theta, &s.state)), &g);
            match file {
                Some(p) => {
                    write_atomic(p, text.as_bytes())?;
                    say(format!("{:?} wave, {} samples, wrote {}\n", w.kind, w.samples.len(), p.display()));
                }
                None => say(text),
            }
            Ok(())
        }
        Command::MaxTurn { gas, mach } => {
            let g = gas.model()?;
            let a = max_deflection_limit(&g);
            say(format!(
                "max turning angle: {:.3}° ({:.6} rad) = arcsin(1/gamma) at gamma = {}, the limit over all upstream Mach numbers\n",
                a.to_degrees(),
                a,
                g.gamma()
            ));
            say("detachment criterion: a deflection larger than the maximum at the upstream Mach number admits no attached shock\n".into());
            if let Some(m) = mach {
                let (am, beta) = max_deflection(*m, &g)?;
                say(format!(
                    "at M = {m}: {:.3}° (shock angle {:.3}°)\n",
                    am.to_degrees(),
                    beta.to_degrees()
                ));
            }
            Ok(())
        }
    }
}
