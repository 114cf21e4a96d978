//! Flux Jacobian in the angular frame, the Roe averaged matrix and its
//! analytic eigensystem.
//!
//! `A(U; theta) = sin(theta) df^x/dU - cos(theta) df^y/dU`. The Roe matrix is
//! the same expression evaluated at the √ρ-weighted velocity and total
//! enthalpy, which makes `A_hat (U_R - U_L)` equal the flux jump exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{GasModel, Mat4, PrimitiveState, Vec4};

/// Jacobian built from velocity `(u, v)` and total specific enthalpy `h`.
fn jacobian_uvh(u: f64, v: f64, h: f64, theta: f64, gamma: f64) -> Mat4 {
    let gm = gamma - 1.0;
    let q2 = u * u + v * v;
    let phi = 0.5 * gm * q2;
    let (s, c) = theta.sin_cos();
    let ax = Mat4::new(
        0.0, 1.0, 0.0, 0.0,
        phi - u * u, (3.0 - gamma) * u, -gm * v, gm,
        -u * v, v, u, 0.0,
        u * (phi - h), h - gm * u * u, -gm * u * v, gamma * u,
    );
    let ay = Mat4::new(
        0.0, 0.0, 1.0, 0.0,
        -u * v, v, u, 0.0,
        phi - v * v, -gm * u, (3.0 - gamma) * v, gm,
        v * (phi - h), -gm * u * v, h - gm * v * v, gamma * v,
    );
    ax * s - ay * c
}

/// Exact Jacobian of `sin(theta) f^x - cos(theta) f^y` with respect to `U`.
pub fn jacobian(s: &PrimitiveState, theta: f64, g: &GasModel) -> Mat4 {
    jacobian_uvh(s.u, s.v, s.h(g), theta, g.gamma())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoeAverage {
    pub u_bar: f64,
    pub v_bar: f64,
    pub h_bar: f64,
    pub c_bar: f64,
}

impl RoeAverage {
    /// Averaged normal velocity at `theta`.
    pub fn n_bar(&self, theta: f64) -> f64 {
        self.u_bar * theta.sin() - self.v_bar * theta.cos()
    }

    /// Averaged tangential velocity at `theta`.
    pub fn l_bar(&self, theta: f64) -> f64 {
        self.u_bar * theta.cos() + self.v_bar * theta.sin()
    }
}

pub fn roe_average(left: &PrimitiveState, right: &PrimitiveState, g: &GasModel) -> RoeAverage {
    let (wl, wr) = (left.rho.sqrt(), right.rho.sqrt());
    let avg = |a: f64, b: f64| (a * wl + b * wr) / (wl + wr);
    let u_bar = avg(left.u, right.u);
    let v_bar = avg(left.v, right.v);
    let h_bar = avg(left.h(g), right.h(g));
    let c2 = (g.gamma() - 1.0) * (h_bar - 0.5 * (u_bar * u_bar + v_bar * v_bar));
    RoeAverage {
        u_bar,
        v_bar,
        h_bar,
        c_bar: c2.max(0.0).sqrt(),
    }
}

pub fn roe_matrix(left: &PrimitiveState, right: &PrimitiveState, theta: f64, g: &GasModel) -> Mat4 {
    let a = roe_average(left, right, g);
    jacobian_uvh(a.u_bar, a.v_bar, a.h_bar, theta, g.gamma())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    /// `(N - c, N, N, N + c)`
    pub eigenvalues: [f64; 4],
    /// Columns `r^-, r^entropy, r^shear, r^+`.
    pub right: Mat4,
    /// Rows `l^-, l^entropy, l^shear, l^+`, with `left * right = I`.
    pub left: Mat4,
}

impl EigenSystem {
    /// `R diag(lambda) L`
    pub fn reconstruct(&self) -> Mat4 {
        let d = Mat4::from_diagonal(&Vec4::from(self.eigenvalues));
        self.right * d * self.left
    }
}

/// Eigenvalues and biorthonormal eigenvectors of the Jacobian at `(u, v, h)`.
///
/// Acoustic columns use the normalization `(1, u ± c sin θ, v ∓ c cos θ, h ± N c)`.
pub fn eigensystem_uvh(u: f64, v: f64, h: f64, theta: f64, gamma: f64) -> Result<EigenSystem> {
    let q2 = u * u + v * v;
    let c2 = (gamma - 1.0) * (h - 0.5 * q2);
    if !(c2 > 0.0) {
        return Err(Error::DegenerateSoundSpeed(c2));
    }
    let c = c2.sqrt();
    let (s, co) = theta.sin_cos();
    let n = u * s - v * co;
    let l = u * co + v * s;
    let right = Mat4::new(
        1.0, 1.0, 0.0, 1.0,
        u - c * s, u, co, u + c * s,
        v + c * co, v, s, v - c * co,
        h - n * c, 0.5 * q2, l, h + n * c,
    );
    let b1 = (gamma - 1.0) / c2;
    let b2 = 0.5 * b1 * q2;
    let left = Mat4::new(
        0.5 * (b2 + n / c), 0.5 * (-b1 * u - s / c), 0.5 * (-b1 * v + co / c), 0.5 * b1,
        1.0 - b2, b1 * u, b1 * v, -b1,
        -l, co, s, 0.0,
        0.5 * (b2 - n / c), 0.5 * (-b1 * u + s / c), 0.5 * (-b1 * v - co / c), 0.5 * b1,
    );
    Ok(EigenSystem {
        eigenvalues: [n - c, n, n, n + c],
        right,
        left,
    })
}

pub fn eigensystem(avg: &RoeAverage, theta: f64, g: &GasModel) -> Result<EigenSystem> {
    eigensystem_uvh(avg.u_bar, avg.v_bar, avg.h_bar, theta, g.gamma())
}

/// Conserved state from `U`, without phase-space checks.
fn primitive_of(u: &Vec4, gamma: f64) -> PrimitiveState {
    let rho = u[0];
    let (vx, vy) = (u[1] / rho, u[2] / rho);
    let p = (gamma - 1.0) * (u[3] - 0.5 * rho * (vx * vx + vy * vy));
    PrimitiveState::new(rho, vx, vy, p)
}

/// `(d(N + c)/dU · r^+, d(N - c)/dU · r^-)` by central differences, with the
/// acoustic eigenvectors in their first-component-one normalization.
pub fn genuine_nonlinearity(s: &PrimitiveState, theta: f64, g: &GasModel) -> (f64, f64) {
    let gamma = g.gamma();
    let es = eigensystem_uvh(s.u, s.v, s.h(g), theta, gamma)
        .expect("valid state has positive sound speed");
    let u0 = s.to_conserved(g).0;
    let speed = |u: &Vec4, sign: f64| {
        let p = primitive_of(u, gamma);
        let n = p.u * theta.sin() - p.v * theta.cos();
        n + sign * (gamma * p.p / p.rho).sqrt()
    };
    let directional = |r: Vec4, sign: f64| {
        let h = 1e-5 * u0.norm() / r.norm();
        let fwd = speed(&(u0 + r * h), sign);
        let bwd = speed(&(u0 - r * h), sign);
        let fwd2 = speed(&(u0 + r * (2.0 * h)), sign);
        let bwd2 = speed(&(u0 - r * (2.0 * h)), sign);
        (8.0 * (fwd - bwd) - (fwd2 - bwd2)) / (12.0 * h)
    };
    (
        directional(es.right.column(3).into(), 1.0),
        directional(es.right.column(0).into(), -1.0),
    )
}
