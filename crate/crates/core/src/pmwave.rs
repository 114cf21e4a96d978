//! Prandtl–Meyer waves: smooth pieces on which `N = ±c` and the angular
//! derivative of the state lies in the kernel of the frame Jacobian.
//!
//! Along a wave the state is isentropic and `N` is slaved to `±c(rho)`, so
//! only `(rho, L)` is integrated:
//!
//! ```text
//! forward:   rho' =  2 rho L / ((gamma + 1) c),   L' = -c
//! backward:  rho' = -2 rho L / ((gamma + 1) c),   L' = +c
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{in_phase_space, GasModel, PrimitiveState, Vec4};
use crate::numeric::bracket_root;
use crate::polar::{from_polar, wrap_pi, PolarState};
use crate::shock::Orientation;

/// Default integration density.
pub const STEPS_PER_RADIAN: usize = 64;

/// Relative tolerance on `|N| - c` for a state to count as sonic.
pub const SONIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    Expansion,
    Compression,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PmSample {
    pub theta: f64,
    pub state: PrimitiveState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PMWave {
    pub orientation: Orientation,
    pub theta_start: f64,
    pub theta_end: f64,
    pub kind: WaveKind,
    /// Entropy indicator shared by every sample.
    pub entropy: f64,
    pub samples: Vec<PmSample>,
    #[serde(skip)]
    gamma: f64,
}

fn sound_speed(rho: f64, s: f64, gamma: f64) -> f64 {
    (gamma * s * rho.powf(gamma - 1.0)).sqrt()
}

fn rhs(rho: f64, l: f64, s: f64, sg: f64, gamma: f64) -> (f64, f64) {
    let c = sound_speed(rho, s, gamma);
    (sg * 2.0 * rho * l / ((gamma + 1.0) * c), -sg * c)
}

fn rk4_step(rho: f64, l: f64, h: f64, s: f64, sg: f64, gamma: f64) -> (f64, f64) {
    let (k1r, k1l) = rhs(rho, l, s, sg, gamma);
    let (k2r, k2l) = rhs(rho + 0.5 * h * k1r, l + 0.5 * h * k1l, s, sg, gamma);
    let (k3r, k3l) = rhs(rho + 0.5 * h * k2r, l + 0.5 * h * k2l, s, sg, gamma);
    let (k4r, k4l) = rhs(rho + h * k3r, l + h * k3l, s, sg, gamma);
    (
        rho + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
        l + h / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l),
    )
}

fn state_from(theta: f64, rho: f64, l: f64, s: f64, sg: f64, gamma: f64) -> PrimitiveState {
    let n = sg * sound_speed(rho, s, gamma);
    let (u, v) = from_polar(n, l, theta);
    PrimitiveState::new(rho, u, v, s * rho.powf(gamma))
}

fn check_sonic(st: &PolarState, orient: Orientation, g: &GasModel) -> Result<()> {
    let c = st.sound_speed(g);
    let dev = orient.sign() * st.n - c;
    if dev.abs() > SONIC_TOL * c {
        return Err(Error::NotSonic(dev));
    }
    Ok(())
}

/// `(d rho / d theta, d L / d theta)` at a sonic state.
pub fn pm_rhs(state: &PolarState, orient: Orientation, g: &GasModel) -> Result<(f64, f64)> {
    check_sonic(state, orient, g)?;
    let s = state.p / state.rho.powf(g.gamma());
    Ok(rhs(state.rho, state.l, s, orient.sign(), g.gamma()))
}

/// `dU/dtheta` in conserved variables along the wave through `(theta, rho, L)`.
pub fn conserved_derivative(
    theta: f64,
    rho: f64,
    l: f64,
    entropy: f64,
    orient: Orientation,
    g: &GasModel,
) -> Vec4 {
    let gamma = g.gamma();
    let sg = orient.sign();
    let (dr, dl) = rhs(rho, l, entropy, sg, gamma);
    let c = sound_speed(rho, entropy, gamma);
    let n = sg * c;
    let dn = sg * (gamma - 1.0) * c / (2.0 * rho) * dr;
    let (st, ct) = theta.sin_cos();
    let u = n * st + l * ct;
    let v = -n * ct + l * st;
    let du = dn * st + n * ct + dl * ct - l * st;
    let dv = -dn * ct + n * st + dl * st + l * ct;
    let dp = c * c * dr;
    Vec4::new(
        dr,
        dr * u + rho * du,
        dr * v + rho * dv,
        dp / (gamma - 1.0) + 0.5 * dr * (u * u + v * v) + rho * (u * du + v * dv),
    )
}

/// Number of fixed steps covering `span` at `per_radian` steps per radian.
pub fn steps_for(span: f64, per_radian: usize) -> usize {
    ((span.abs() * per_radian as f64).ceil() as usize).max(1)
}

impl PMWave {
    fn sample_polar(&self, i: usize) -> PolarState {
        let s = &self.samples[i];
        PolarState::from_primitive(&s.state, s.theta)
    }

    pub fn start_state(&self) -> PrimitiveState {
        self.samples[0].state
    }

    pub fn end_state(&self) -> PrimitiveState {
        self.samples[self.samples.len() - 1].state
    }

    /// Tangential velocity at every sample.
    pub fn tangential_velocities(&self) -> Vec<f64> {
        (0..self.samples.len()).map(|i| self.sample_polar(i).l).collect()
    }

    /// Interval `(lo, hi)` covered by the wave.
    pub fn extent(&self) -> (f64, f64) {
        (self.theta_start.min(self.theta_end), self.theta_start.max(self.theta_end))
    }

    /// State at `theta` by cubic Hermite interpolation of `(rho, L)` with the
    /// ODE slopes; exact at samples.
    pub fn eval(&self, theta: f64) -> PrimitiveState {
        let n = self.samples.len();
        if n == 1 {
            return self.samples[0].state;
        }
        let asc = self.theta_end >= self.theta_start;
        let key = |t: f64| if asc { t } else { -t };
        let k = key(theta);
        let i = match self
            .samples
            .binary_search_by(|s| key(s.theta).partial_cmp(&k).unwrap())
        {
            Ok(i) => return self.samples[i].state,
            Err(0) => 0,
            Err(i) if i >= n => n - 2,
            Err(i) => i - 1,
        };
        let (a, b) = (self.sample_polar(i), self.sample_polar(i + 1));
        let sg = self.orientation.sign();
        let h = b.theta - a.theta;
        let t = (theta - a.theta) / h;
        let (dra, dla) = rhs(a.rho, a.l, self.entropy, sg, self.gamma);
        let (drb, dlb) = rhs(b.rho, b.l, self.entropy, sg, self.gamma);
        let rho = hermite(t, h, a.rho, dra, b.rho, drb);
        let l = hermite(t, h, a.l, dla, b.l, dlb);
        state_from(theta, rho, l, self.entropy, sg, self.gamma)
    }

    /// `dU/dtheta` at sample `i`.
    pub fn derivative_at(&self, i: usize, g: &GasModel) -> Vec4 {
        let p = self.sample_polar(i);
        conserved_derivative(p.theta, p.rho, p.l, self.entropy, self.orientation, g)
    }

    /// Splits at sample `i` into two waves sharing that sample.
    pub fn split_at(&self, i: usize) -> Option<(PMWave, PMWave)> {
        if i == 0 || i + 1 >= self.samples.len() {
            return None;
        }
        let mut a = self.clone();
        let mut b = self.clone();
        a.samples.truncate(i + 1);
        a.theta_end = self.samples[i].theta;
        b.samples.drain(..i);
        b.theta_start = self.samples[i].theta;
        Some((a, b))
    }

    /// Same angles with the states traversed in reverse order.
    pub fn with_reversed_states(&self) -> PMWave {
        let mut w = self.clone();
        let n = w.samples.len();
        for (i, s) in w.samples.iter_mut().enumerate() {
            let src = &self.samples[n - 1 - i];
            let p = PolarState::from_primitive(&src.state, src.theta);
            let (u, v) = from_polar(p.n, p.l, s.theta);
            s.state = PrimitiveState::new(p.rho, u, v, p.p);
        }
        w
    }
}

fn hermite(t: f64, h: f64, y0: f64, d0: f64, y1: f64, d1: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1
}

struct Integrator {
    sg: f64,
    gamma: f64,
    entropy: f64,
    orient: Orientation,
}

impl Integrator {
    fn push(&self, out: &mut Vec<PmSample>, theta: f64, rho: f64, l: f64, g: &GasModel) -> Result<()> {
        let state = state_from(theta, rho, l, self.entropy, self.sg, self.gamma);
        in_phase_space(&state, g)
            .into_result()
            .map_err(|e| Error::Wave(format!("at theta = {theta}: {e}")))?;
        out.push(PmSample { theta, state });
        Ok(())
    }

    fn finish(&self, samples: Vec<PmSample>, theta_start: f64, theta_end: f64, g: &GasModel) -> Result<PMWave> {
        let ls: Vec<f64> = samples
            .iter()
            .map(|s| PolarState::from_primitive(&s.state, s.theta).l)
            .collect();
        let scale = samples
            .iter()
            .map(|s| s.state.sound_speed(g))
            .fold(0.0, f64::max);
        let tol = 1e-9 * scale;
        let kind = wave_kind_from_l(&ls, tol)?;
        Ok(PMWave {
            orientation: self.orient,
            theta_start,
            theta_end,
            kind,
            entropy: self.entropy,
            samples,
            gamma: self.gamma,
        })
    }
}

/// Kind from the sign of `L` over the samples, allowing `L = 0` at either end.
fn wave_kind_from_l(ls: &[f64], tol: f64) -> Result<WaveKind> {
    let pos = ls.iter().any(|&l| l > tol);
    let neg = ls.iter().any(|&l| l < -tol);
    match (pos, neg) {
        (true, true) => Err(Error::Wave("tangential velocity changes sign inside the wave".into())),
        (false, true) => Ok(WaveKind::Compression),
        _ => Ok(WaveKind::Expansion),
    }
}

/// Integrates the wave from `start` at `theta_start` to `theta_end` with
/// `steps` fixed RK4 steps.
pub fn integrate_pm(
    start: &PrimitiveState,
    theta_start: f64,
    theta_end: f64,
    orient: Orientation,
    steps: usize,
    g: &GasModel,
) -> Result<PMWave> {
    let p0 = PolarState::from_primitive(start, theta_start);
    check_sonic(&p0, orient, g)?;
    let it = Integrator {
        sg: orient.sign(),
        gamma: g.gamma(),
        entropy: start.entropy(g),
        orient,
    };
    let mut samples = Vec::new();
    it.push(&mut samples, theta_start, p0.rho, p0.l, g)?;
    if theta_end != theta_start {
        let steps = steps.max(1);
        let h = (theta_end - theta_start) / steps as f64;
        let (mut rho, mut l) = (p0.rho, p0.l);
        for k in 1..=steps {
            (rho, l) = rk4_step(rho, l, h, it.entropy, it.sg, it.gamma);
            let theta = if k == steps { theta_end } else { theta_start + h * k as f64 };
            it.push(&mut samples, theta, rho, l, g)?;
        }
    }
    it.finish(samples, theta_start, theta_end, g)
}

/// Integrates from `start` towards the angle where `L = 0`, which is where the
/// wave meets the sector's axis. The direction is the one in which `|L|` decreases.
pub fn integrate_pm_to_axis(
    start: &PrimitiveState,
    theta_start: f64,
    orient: Orientation,
    steps_per_radian: usize,
    g: &GasModel,
) -> Result<PMWave> {
    let p0 = PolarState::from_primitive(start, theta_start);
    check_sonic(&p0, orient, g)?;
    let it = Integrator {
        sg: orient.sign(),
        gamma: g.gamma(),
        entropy: start.entropy(g),
        orient,
    };
    let mut samples = Vec::new();
    it.push(&mut samples, theta_start, p0.rho, p0.l, g)?;
    if p0.l == 0.0 {
        return it.finish(samples, theta_start, theta_start, g);
    }
    // dL/dtheta = -sg c, so |L| decreases when moving by sign(L) * sg
    let dir = p0.l.signum() * it.sg;
    let h = dir / steps_per_radian.max(1) as f64;
    let (mut theta, mut rho, mut l) = (theta_start, p0.rho, p0.l);
    let max_steps = (std::f64::consts::TAU * steps_per_radian as f64) as usize + 1;
    for _ in 0..max_steps {
        let (r1, l1) = rk4_step(rho, l, h, it.entropy, it.sg, it.gamma);
        if l1 == 0.0 || l1.signum() != l.signum() {
            let (_, dla) = rhs(rho, l, it.entropy, it.sg, it.gamma);
            let (_, dlb) = rhs(r1, l1, it.entropy, it.sg, it.gamma);
            let t = bracket_root(|t| hermite(t, h, l, dla, l1, dlb), 0.0, 1.0).unwrap_or(1.0);
            let (r_end, l_end) = rk4_step(rho, l, t * h, it.entropy, it.sg, it.gamma);
            let theta_end = theta + t * h;
            it.push(&mut samples, theta_end, r_end, l_end, g)?;
            return it.finish(samples, theta_start, theta_end, g);
        }
        theta += h;
        (rho, l) = (r1, l1);
        it.push(&mut samples, theta, rho, l, g)?;
    }
    Err(Error::Wave("tangential velocity never vanishes".into()))
}

/// Classifies a wave relative to its sector's axis angle `theta_bar`, where `L = 0`.
///
/// Expansion waves lie where `L >= 0` (before the axis in a forward sector,
/// after it in a backward one); compression waves where `L <= 0`.
pub fn classify_pm(wave: &PMWave, theta_bar: f64) -> Result<WaveKind> {
    let (lo, hi) = wave.extent();
    let eps = 1e-9;
    let before = wrap_pi(hi - theta_bar) <= eps;
    let after = wrap_pi(lo - theta_bar) >= -eps;
    let ls = wave.tangential_velocities();
    let scale = wave.samples.iter().map(|s| s.state.speed()).fold(0.0, f64::max);
    let kind = wave_kind_from_l(&ls, 1e-9 * scale)?;
    let positive_side = match wave.orientation {
        Orientation::Forward => before,
        Orientation::Backward => after,
    };
    let negative_side = match wave.orientation {
        Orientation::Forward => after,
        Orientation::Backward => before,
    };
    match kind {
        WaveKind::Expansion if positive_side => Ok(WaveKind::Expansion),
        WaveKind::Compression if negative_side => Ok(WaveKind::Compression),
        _ => Err(Error::Wave(format!(
            "wave on [{lo}, {hi}] is inconsistent with the sign of L relative to the axis at {theta_bar}"
        ))),
    }
}
