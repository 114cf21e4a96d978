//! Sectors between contacts and the structural checks run on a whole flow.

use std::f64::consts::PI;

use serde::Serialize;

use super::{FlowField, WavePiece, MATCH_TOL};
use crate::error::{Error, Result};
use crate::numeric::bracket_root;
use crate::pmwave::{classify_pm, WaveKind};
use crate::polar::{wrap_pi, PolarState};
use crate::report::{Check, CheckList};
use crate::shock::{check_admissibility, lax_neighborhood_bound, separation_distance, Orientation};

/// Angular tolerance for placing pieces relative to a sector's axis.
const AXIS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sector {
    pub start: f64,
    pub end: f64,
    pub direction: Orientation,
    /// Interior zero of `L`.
    pub theta_bar: f64,
    /// Indices of the pieces strictly between the bounding contacts.
    pub first_piece: usize,
    pub last_piece: usize,
}

impl Sector {
    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    /// Angles of the region where `L >= 0`.
    pub fn positive_l_region(&self) -> (f64, f64) {
        match self.direction {
            Orientation::Forward => (self.start, self.theta_bar),
            Orientation::Backward => (self.theta_bar, self.end),
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.start < theta && theta < self.end
    }
}

/// Splits the flow at its contacts and locates each sector's axis.
pub fn sector_decompose(f: &FlowField) -> Result<Vec<Sector>> {
    let contacts: Vec<usize> = f
        .pieces
        .iter()
        .enumerate()
        .filter(|(_, p)| matches!(p, WavePiece::Contact { .. }))
        .map(|(i, _)| i)
        .collect();
    if contacts.len() > 3 {
        return Err(Error::TooManySectors(contacts.len()));
    }
    if contacts.len() < 2 {
        return Err(Error::Flow(format!(
            "{} contact(s): a flow without stagnation has at least two sectors",
            contacts.len()
        )));
    }
    let last = *contacts.last().unwrap();
    if last != f.pieces.len() - 1 {
        return Err(Error::Flow("the circle must close at a contact".into()));
    }
    let mut out = Vec::with_capacity(contacts.len());
    let mut start = f.origin;
    let mut first_piece = 0;
    for &ci in &contacts {
        let end = f.pieces[ci].extent().0;
        out.push(sector_between(f, start, end, first_piece, ci)?);
        start = end;
        first_piece = ci + 1;
    }
    Ok(out)
}

fn sector_between(f: &FlowField, start: f64, end: f64, first: usize, contact: usize) -> Result<Sector> {
    if first >= contact {
        return Err(Error::Flow(format!("empty sector at {start}")));
    }
    let n_at = |t: f64| PolarState::from_primitive(&f.evaluate(t), t).n;
    let l_at = |t: f64| PolarState::from_primitive(&f.evaluate(t), t).l;
    let mid = 0.5 * (start + end);
    let n_mid = n_at(mid);
    if n_mid == 0.0 {
        return Err(Error::Flow(format!("normal velocity vanishes inside the sector at {mid}")));
    }
    let direction = Orientation::of_normal_velocity(n_mid);
    // sign consistency at piece ends and wave samples
    let eps = 1e-9 * (end - start);
    let mut probes = vec![start + eps, end - eps];
    for p in &f.pieces[first..contact] {
        let (a, b) = p.extent();
        probes.push(a);
        probes.push(0.5 * (a + b));
        if let WavePiece::Wave(w) = p {
            probes.extend(w.samples.iter().map(|s| s.theta));
        }
    }
    for &t in probes.iter().filter(|&&t| t > start && t < end) {
        for n in [n_at(t), PolarState::from_primitive(&f.evaluate_left(t), t).n] {
            if n * direction.sign() <= 0.0 {
                return Err(Error::Flow(format!(
                    "normal velocity changes sign inside the sector [{start}, {end}] at {t}"
                )));
            }
        }
    }
    let sg = direction.sign();
    let (la, lb) = (l_at(start + eps), l_at(end - eps));
    if sg * la <= 0.0 || sg * lb >= 0.0 {
        return Err(Error::Flow(format!(
            "tangential velocity on [{start}, {end}] does not cross zero monotonically"
        )));
    }
    let theta_bar = bracket_root(l_at, start + eps, end - eps)
        .ok_or_else(|| Error::Flow("no zero of L in the sector".into()))?;
    Ok(Sector {
        start,
        end,
        direction,
        theta_bar,
        first_piece: first,
        last_piece: contact - 1,
    })
}

/// Aggregates one named check over many items, keeping the worst margin.
struct Agg {
    name: &'static str,
    margin: f64,
    failures: Vec<String>,
}

impl Agg {
    fn new(name: &'static str, empty_margin: f64) -> Self {
        Agg {
            name,
            margin: empty_margin,
            failures: Vec::new(),
        }
    }

    fn add(&mut self, margin: f64, what: impl FnOnce() -> String) {
        self.margin = self.margin.min(margin);
        if !(margin > 0.0) {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.add(-1.0, || what);
    }

    fn finish(self) -> Check {
        let mut c = Check::new(self.name, self.margin);
        c.passed = self.failures.is_empty();
        if !self.failures.is_empty() {
            c = c.with_detail(self.failures.join("; "));
        }
        c
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_pi(a - b).abs()
}

fn flow_angle_of(s: &crate::gas::PrimitiveState) -> f64 {
    s.v.atan2(s.u)
}

/// Runs every structural check and reports each with its worst margin.
pub fn validate_structure(f: &FlowField) -> CheckList {
    let g = &f.gas;
    let n = f.pieces.len();
    let mut out = CheckList::default();

    // neighbor states and contact conditions
    let mut cont = Agg::new("piece_continuity", 1.0);
    let mut contact = Agg::new("contact_conditions", 1.0);
    for i in 0..n {
        let j = (i + 1) % n;
        let d = f.pieces[i].right_state().rel_diff(&f.pieces[j].left_state());
        cont.add(MATCH_TOL - d, || {
            format!("pieces {i} and {j} differ by {d:.3e}")
        });
        if let WavePiece::Contact { theta, left, right } = &f.pieces[i] {
            let (pl, pr) = (
                PolarState::from_primitive(left, *theta),
                PolarState::from_primitive(right, *theta),
            );
            let scale = left.speed().max(right.speed());
            let nmax = pl.n.abs().max(pr.n.abs()) / scale;
            let dp = (pl.p - pr.p).abs() / pl.p.max(pr.p);
            contact.add(MATCH_TOL - nmax.max(dp), || {
                format!("contact {i}: |N|/q = {nmax:.3e}, [p]/p = {dp:.3e}")
            });
        }
    }
    out.push(cont.finish());
    out.push(contact.finish());

    let mut phase = Agg::new("phase_space", 1.0);
    for v in f.phase_violations() {
        phase.fail(v);
    }
    out.push(phase.finish());

    // Lax conditions
    let mut lax = Agg::new("lax_conditions", 1.0);
    for (i, s) in f.shocks() {
        let checks = check_admissibility(s, g);
        for c in &checks.checks {
            lax.add(if c.passed { c.margin } else { c.margin.min(0.0) }, || {
                format!("shock {i}: {} fails (margin {:.3e})", c.name, c.margin)
            });
        }
    }
    out.push(lax.finish());

    // constant neighborhoods of width delta_L * J
    let delta_l = lax_neighborhood_bound(g);
    let mut nbhd = Agg::new("constant_neighborhoods", 1.0);
    for (i, s) in f.shocks() {
        let need = delta_l * s.jump_size(g);
        for j in [(i + n - 1) % n, (i + 1) % n] {
            match &f.pieces[j] {
                WavePiece::Constant { start, end, .. } => {
                    let w = end - start;
                    nbhd.add(w - need, || {
                        format!("shock {i}: neighbor {j} has width {w:.3e} < {need:.3e}")
                    });
                }
                p => nbhd.fail(format!("shock {i}: neighbor {j} is a {}", p.label())),
            }
        }
    }
    out.push(nbhd.finish());

    // separation of opposite shocks and of shocks from contacts
    let d_sep = separation_distance(g);
    let mut sep = Agg::new("shock_separation", 1.0);
    let shocks: Vec<_> = f.shocks().collect();
    for (a, (i, si)) in shocks.iter().enumerate() {
        for (j, sj) in shocks.iter().skip(a + 1) {
            if si.orientation != sj.orientation {
                let d = circular_distance(si.theta, sj.theta);
                sep.add(d - d_sep, || format!("shocks {i} and {j} are {d:.3e} apart"));
            }
        }
        for (k, p) in f.pieces.iter().enumerate() {
            if let WavePiece::Contact { theta, .. } = p {
                let d = circular_distance(si.theta, *theta);
                sep.add(d - d_sep, || format!("shock {i} and contact {k} are {d:.3e} apart"));
            }
        }
    }
    out.push(sep.finish());

    let sectors = match sector_decompose(f) {
        Ok(s) => {
            out.push(Check::new("sector_count", 3.5 - s.len() as f64));
            s
        }
        Err(e) => {
            out.push(Check::new("sector_count", -1.0).with_detail(e.to_string()));
            for name in [
                "compression_separation",
                "positive_l_structure",
                "turning_bookkeeping",
                "wave_classification",
            ] {
                out.push(Check::new(name, -1.0).with_detail("no sector decomposition"));
            }
            return out;
        }
    };

    let mut comp = Agg::new("compression_separation", 1.0);
    let mut posl = Agg::new("positive_l_structure", 1.0);
    let mut turn = Agg::new("turning_bookkeeping", 1.0);
    let mut class = Agg::new("wave_classification", 1.0);
    for (k, sec) in sectors.iter().enumerate() {
        let pieces = &f.pieces[sec.first_piece..=sec.last_piece];
        let offset = sec.first_piece;

        // at least one shock between any two compression waves
        let mut last_comp: Option<usize> = None;
        let mut shock_since = false;
        for (i, p) in pieces.iter().enumerate() {
            match p {
                WavePiece::Shock(_) => shock_since = true,
                WavePiece::Wave(w) if w.kind == WaveKind::Compression => {
                    if let Some(prev) = last_comp {
                        if !shock_since {
                            comp.fail(format!(
                                "sector {k}: compression waves {} and {} are not separated by a shock",
                                prev + offset,
                                i + offset
                            ));
                        }
                    }
                    last_comp = Some(i);
                    shock_since = false;
                }
                _ => {}
            }
        }

        positive_l_check(sec, k, pieces, offset, &mut posl);

        // total turning along the gas path equals sg (pi - width)
        let sg = sec.direction.sign();
        let mut phi_change = 0.0;
        for p in pieces {
            phi_change += wrap_pi(flow_angle_of(&p.right_state()) - flow_angle_of(&p.left_state()));
        }
        let boundary_left = flow_angle_of(&f.pieces[(sec.first_piece + n - 1) % n].right_state());
        let boundary_right = flow_angle_of(&f.pieces[sec.last_piece + 1].left_state());
        phi_change += wrap_pi(boundary_left - flow_angle_of(&pieces[0].left_state()));
        phi_change += wrap_pi(boundary_right - flow_angle_of(&pieces[pieces.len() - 1].right_state()));
        // gas moves against increasing theta in forward sectors
        let turning = -sg * phi_change;
        let expected = sg * (PI - sec.width());
        let err = (turning - expected).abs();
        turn.add(1e-9 - err, || {
            format!("sector {k}: turning {turning:.12} vs {expected:.12}")
        });
        // the flow angle at each contact is the contact angle itself or its antipode
        let at_start = wrap_pi(boundary_left - sec.start - if sg > 0.0 { 0.0 } else { PI });
        let at_end = wrap_pi(boundary_right - sec.end + if sg > 0.0 { PI } else { 0.0 });
        for (what, d) in [("start", at_start), ("end", at_end)] {
            turn.add(1e-9 - d.abs(), || {
                format!("sector {k}: flow angle at the {what} contact is off by {d:.3e}")
            });
        }

        for (i, p) in pieces.iter().enumerate() {
            let WavePiece::Wave(w) = p else { continue };
            let idx = i + offset;
            if w.orientation != sec.direction {
                class.fail(format!("wave {idx}: orientation differs from its sector"));
                continue;
            }
            match classify_pm(w, sec.theta_bar) {
                Ok(kind) if kind == w.kind => {}
                Ok(kind) => class.fail(format!("wave {idx}: stored as {:?}, classified {kind:?}", w.kind)),
                Err(e) => class.fail(format!("wave {idx}: {e}")),
            }
            let first = &w.samples[0];
            let last = &w.samples[w.samples.len() - 1];
            let (lo, hi) = if first.theta <= last.theta { (first, last) } else { (last, first) };
            // density change along the gas path
            let drho = sg * (lo.state.rho - hi.state.rho);
            let trend = match w.kind {
                WaveKind::Compression => drho,
                WaveKind::Expansion => -drho,
            };
            class.add(trend, || {
                format!("wave {idx}: density change {drho:.3e} along the gas path contradicts {:?}", w.kind)
            });
            let mut sorted: Vec<_> = w.samples.iter().collect();
            sorted.sort_by(|a, b| a.theta.partial_cmp(&b.theta).unwrap());
            for pair in sorted.windows(2) {
                let d = wrap_pi(flow_angle_of(&pair[1].state) - flow_angle_of(&pair[0].state));
                class.add(d, || format!("wave {idx}: flow angle not increasing at {}", pair[0].theta));
            }
        }
    }
    out.push(comp.finish());
    out.push(posl.finish());
    out.push(turn.finish());
    out.push(class.finish());
    out
}

/// The `L >= 0` part of a sector holds nothing, one shock (possibly a normal
/// shock at the axis), or one expansion wave (possibly ending at the axis).
fn positive_l_check(sec: &Sector, k: usize, pieces: &[WavePiece], offset: usize, agg: &mut Agg) {
    let (a, b) = sec.positive_l_region();
    let mut found: Vec<String> = Vec::new();
    let mut bad = false;
    for (i, p) in pieces.iter().enumerate() {
        let idx = i + offset;
        match p {
            WavePiece::Constant { .. } => {}
            WavePiece::Shock(s) => {
                if s.theta > a - AXIS_TOL && s.theta < b + AXIS_TOL {
                    found.push(format!("shock {idx}"));
                }
            }
            WavePiece::Contact { .. } => {}
            WavePiece::Wave(w) => {
                let (lo, hi) = w.extent();
                if hi.min(b) - lo.max(a) > AXIS_TOL {
                    if w.kind != WaveKind::Expansion {
                        bad = true;
                    }
                    found.push(format!("{:?} wave {idx}", w.kind).to_lowercase());
                }
            }
        }
    }
    if bad || found.len() > 1 {
        agg.fail(format!("sector {k}: L >= 0 region holds {}", found.join(", ")));
    } else {
        agg.add(1.0, String::new);
    }
}
