//! CSV, SVG and JSON artifacts for a built flow.
//!
//! Every file is written to a temporary sibling and renamed into place, so a
//! reader never sees a partial artifact.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use polarflow::polar::PolarState;
use polarflow::{AuditReport, FlowField, GasModel, PrimitiveState, WavePiece};

use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "theta,rho,u,v,p,N,L,c,mach_n,s,phi";

/// Side of the square SVG viewport.
pub const SVG_SIZE: f64 = 800.0;
const RADIUS: f64 = 330.0;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut b = tempfile::Builder::new();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        b.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = b.tempfile_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

/// `n` evenly spaced angles over one turn starting at the flow's origin.
pub fn sample_angles(f: &FlowField, n: usize) -> Vec<f64> {
    (0..n).map(|k| f.origin + TAU * k as f64 / n as f64).collect()
}

fn csv_row(out: &mut String, theta: f64, s: &PrimitiveState, g: &GasModel) {
    let ps = PolarState::from_primitive(s, theta);
    let c = s.sound_speed(g);
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{}",
        theta,
        s.rho,
        s.u,
        s.v,
        s.p,
        ps.n,
        ps.l,
        c,
        ps.n / c,
        s.entropy(g),
        s.v.atan2(s.u)
    );
}

/// One row per sample; jumps are sampled from the right.
pub fn to_csv(f: &FlowField, samples: usize) -> String {
    let mut out = String::with_capacity(200 * (samples + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for t in sample_angles(f, samples) {
        csv_row(&mut out, t, &f.evaluate(t), &f.gas);
    }
    out
}

/// Rows of `(theta, state)` in the CSV layout, for traced waves and the like.
pub fn states_to_csv<'a>(rows: impl IntoIterator<Item = (f64, &'a PrimitiveState)>, g: &GasModel) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (t, s) in rows {
        csv_row(&mut out, t, s, g);
    }
    out
}

pub fn to_json(report: &AuditReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("audit reports serialize");
    s.push('\n');
    s
}

/// A CSV row read back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub theta: f64,
    pub state: PrimitiveState,
}

pub fn read_csv(text: &str) -> std::result::Result<Vec<Sample>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err("missing or unexpected CSV header".into());
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let v: Vec<f64> = line
                .split(',')
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| format!("row {}: {e}", i + 1))?;
            if v.len() != 11 {
                return Err(format!("row {}: expected 11 columns, got {}", i + 1, v.len()));
            }
            Ok(Sample {
                theta: v[0],
                state: PrimitiveState::new(v[1], v[2], v[3], v[4]),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpKind {
    Shock,
    Contact,
}

/// A discontinuity located between two consecutive samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectedJump {
    pub before: f64,
    pub after: f64,
    pub kind: JumpKind,
}

fn change(a: &PrimitiveState, b: &PrimitiveState) -> f64 {
    let q = 0.5 * (a.speed() + b.speed()) + 1e-300;
    ((b.rho - a.rho) / (a.rho + b.rho)).abs() * 2.0
        + ((b.p - a.p) / (a.p + b.p)).abs() * 2.0
        + ((b.u - a.u).abs() + (b.v - a.v).abs()) / q
}

/// Finds jumps in samples covering one turn. The state is constant between
/// jumps except inside waves, where consecutive changes are comparable, so
/// a jump is an isolated change well above those of its neighbors.
pub fn detect_jumps(samples: &[Sample]) -> Vec<DetectedJump> {
    let n = samples.len();
    if n < 3 {
        return Vec::new();
    }
    let d: Vec<f64> = (0..n)
        .map(|k| change(&samples[k].state, &samples[(k + 1) % n].state))
        .collect();
    let mut out = Vec::new();
    for k in 0..n {
        let neighbors = d[(k + n - 1) % n].max(d[(k + 1) % n]);
        if d[k] > 1e-9 && d[k] > 3.0 * neighbors {
            let (a, b) = (&samples[k], &samples[(k + 1) % n]);
            let after = if k + 1 == n { b.theta + TAU } else { b.theta };
            let dp = 2.0 * ((b.state.p - a.state.p) / (a.state.p + b.state.p)).abs();
            out.push(DetectedJump {
                before: a.theta,
                after,
                kind: if dp <= 1e-9 { JumpKind::Contact } else { JumpKind::Shock },
            });
        }
    }
    out
}

fn point(r: f64, theta: f64) -> (f64, f64) {
    // screen y points down
    (r * theta.cos(), -r * theta.sin())
}

fn wedge(out: &mut String, r: f64, a: f64, b: f64, attrs: &str) {
    let (x1, y1) = point(r, a);
    let (x2, y2) = point(r, b);
    let large = if b - a > std::f64::consts::PI { 1 } else { 0 };
    let _ = writeln!(
        out,
        r#"<path d="M0,0 L{x1:.3},{y1:.3} A{r:.3},{r:.3} 0 {large} 0 {x2:.3},{y2:.3} Z" {attrs}/>"#
    );
}

fn ray(out: &mut String, theta: f64, attrs: &str) {
    let (x, y) = point(RADIUS + 25.0, theta);
    let _ = writeln!(out, r#"<line x1="0" y1="0" x2="{x:.3}" y2="{y:.3}" {attrs}/>"#);
}

fn arrow(out: &mut String, theta: f64, s: &PrimitiveState) {
    let q = s.speed();
    if q == 0.0 {
        return;
    }
    let (x, y) = point(0.62 * RADIUS, theta);
    let (dx, dy) = (24.0 * s.u / q, -24.0 * s.v / q);
    let _ = writeln!(
        out,
        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#111" stroke-width="1.5" marker-end="url(#head)"/>"##,
        x - dx,
        y - dy,
        x + dx,
        y + dy
    );
}

/// Blue to red ramp over `t` in `[0, 1]`.
fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (40.0 + 215.0 * t).round() as u8;
    let g = (90.0 + 110.0 * (1.0 - (2.0 * t - 1.0).abs())).round() as u8;
    let b = (255.0 - 215.0 * t).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Polar figure: wedges colored by log pressure, shaded wave fans, shock
/// and contact rays, and arrows along the velocity of each constant state.
pub fn to_svg(f: &FlowField, samples: usize) -> String {
    let half = SVG_SIZE / 2.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="{} {} {SVG_SIZE} {SVG_SIZE}">"#,
        -half, -half
    );
    out.push_str("<title>Self-similar flow U(theta)</title>\n");
    out.push_str(concat!(
        r##"<defs><marker id="head" viewBox="0 0 10 10" refX="8" refY="5" markerWidth="6" markerHeight="6" orient="auto">"##,
        r##"<path d="M0,0 L10,5 L0,10 Z" fill="#111"/></marker></defs>"##,
        "\n"
    ));
    let _ = writeln!(out, r##"<rect x="{}" y="{}" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="#fff"/>"##, -half, -half);

    let n = samples.max(4);
    let angles = sample_angles(f, n);
    let logp: Vec<f64> = angles.iter().map(|&t| f.evaluate(t).p.ln()).collect();
    let lo = logp.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = logp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    out.push_str("<g stroke=\"none\">\n");
    for (k, &t) in angles.iter().enumerate() {
        let color = ramp((logp[k] - lo) / span);
        wedge(&mut out, RADIUS, t, t + TAU / n as f64, &format!(r#"fill="{color}" stroke="{color}" stroke-width="0.3""#));
    }
    out.push_str("</g>\n");

    for p in &f.pieces {
        match p {
            WavePiece::Wave(w) => {
                let (a, b) = w.extent();
                wedge(&mut out, RADIUS, a, b, r##"fill="#000" fill-opacity="0.25""##);
            }
            WavePiece::Shock(s) => ray(&mut out, s.theta, r##"stroke="#c00000" stroke-width="2.5""##),
            WavePiece::Contact { theta, .. } => {
                ray(&mut out, *theta, r##"stroke="#0030c0" stroke-width="2" stroke-dasharray="8,5""##)
            }
            WavePiece::Constant { start, end, state } if end - start > 0.05 => {
                arrow(&mut out, 0.5 * (start + end), state);
            }
            WavePiece::Constant { .. } => {}
        }
    }
    let _ = writeln!(out, r##"<circle cx="0" cy="0" r="{RADIUS}" fill="none" stroke="#333" stroke-width="1"/>"##);
    out.push_str("</svg>\n");
    out
}
