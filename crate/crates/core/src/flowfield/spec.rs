//! Wave-sequence description consumed by [`build_flow`](super::build_flow).

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::pmwave::{WaveKind, STEPS_PER_RADIAN};
use crate::shock::Orientation;

/// Angle in radians. Deserializes from a number (radians) or from a string
/// such as `"30deg"` or `"0.5rad"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle(pub f64);

impl Angle {
    pub fn radians(self) -> f64 {
        self.0
    }
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (num, scale) = if let Some(x) = t.strip_suffix("deg") {
            (x, std::f64::consts::PI / 180.0)
        } else if let Some(x) = t.strip_suffix("rad") {
            (x, 1.0)
        } else {
            (t, 1.0)
        };
        num.trim()
            .parse::<f64>()
            .map(|v| Angle(v * scale))
            .map_err(|_| format!("invalid angle {s:?}; use radians or a \"deg\" suffix"))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Angle;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an angle in radians or a string with a \"deg\" suffix")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Angle, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// The constant state just after the closing contact. Its normal velocity
/// vanishes at `theta`, so the velocity is `l (cos theta, sin theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Anchor {
    pub theta: Angle,
    pub rho: f64,
    pub p: f64,
    pub l: f64,
}

/// Which side of the sector axis (sign of `L`) a piece is placed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PieceSpec {
    /// A shock given by its strength `z` (placed at the first admissible
    /// angle on `side`) or by its angle.
    Shock {
        orientation: Orientation,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<Angle>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        side: Option<Side>,
    },
    /// A contact at the next zero of `N`; the new state has density `rho`,
    /// tangential velocity `l` and the incoming pressure.
    Contact { rho: f64, l: f64 },
    /// A Prandtl–Meyer wave covering `span`, or running to the sector axis.
    PmWave {
        orientation: Orientation,
        wave: WaveKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        span: Option<Angle>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        to_axis: bool,
    },
}

/// A scalar of the description adjusted to close the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShootVar {
    AnchorRho,
    AnchorL,
    AnchorP,
    ShockZ(usize),
    ShockTheta(usize),
    ContactRho(usize),
    ContactL(usize),
    WaveSpan(usize),
}

impl FromStr for ShootVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unknown shooting variable {s:?}");
        match s {
            "anchor.rho" => return Ok(ShootVar::AnchorRho),
            "anchor.l" => return Ok(ShootVar::AnchorL),
            "anchor.p" => return Ok(ShootVar::AnchorP),
            _ => {}
        }
        let rest = s.strip_prefix("pieces[").ok_or_else(bad)?;
        let (idx, field) = rest.split_once("].").ok_or_else(bad)?;
        let i: usize = idx.parse().map_err(|_| bad())?;
        Ok(match field {
            "z" => ShootVar::ShockZ(i),
            "theta" => ShootVar::ShockTheta(i),
            "rho" => ShootVar::ContactRho(i),
            "l" => ShootVar::ContactL(i),
            "span" => ShootVar::WaveSpan(i),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for ShootVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShootVar::AnchorRho => write!(f, "anchor.rho"),
            ShootVar::AnchorL => write!(f, "anchor.l"),
            ShootVar::AnchorP => write!(f, "anchor.p"),
            ShootVar::ShockZ(i) => write!(f, "pieces[{i}].z"),
            ShootVar::ShockTheta(i) => write!(f, "pieces[{i}].theta"),
            ShootVar::ContactRho(i) => write!(f, "pieces[{i}].rho"),
            ShootVar::ContactL(i) => write!(f, "pieces[{i}].l"),
            ShootVar::WaveSpan(i) => write!(f, "pieces[{i}].span"),
        }
    }
}

impl Serialize for ShootVar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ShootVar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

fn default_tolerance() -> f64 {
    1e-12
}

fn default_iterations() -> usize {
    60
}

fn default_steps() -> usize {
    STEPS_PER_RADIAN
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    /// Up to two scalars adjusted so that the flow closes in angle and pressure.
    #[serde(default)]
    pub shoot: Vec<ShootVar>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_steps")]
    pub pm_steps_per_radian: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            shoot: Vec::new(),
            tolerance: default_tolerance(),
            max_iterations: default_iterations(),
            pm_steps_per_radian: default_steps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub anchor: Anchor,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
}

impl FlowSpec {
    pub(crate) fn get(&self, v: ShootVar) -> Option<f64> {
        Some(match (v, self.pieces.get(piece_index(v))) {
            (ShootVar::AnchorRho, _) => self.anchor.rho,
            (ShootVar::AnchorL, _) => self.anchor.l,
            (ShootVar::AnchorP, _) => self.anchor.p,
            (ShootVar::ShockZ(_), Some(PieceSpec::Shock { z: Some(z), .. })) => *z,
            (ShootVar::ShockTheta(_), Some(PieceSpec::Shock { theta: Some(t), .. })) => t.0,
            (ShootVar::ContactRho(_), Some(PieceSpec::Contact { rho, .. })) => *rho,
            (ShootVar::ContactL(_), Some(PieceSpec::Contact { l, .. })) => *l,
            (ShootVar::WaveSpan(_), Some(PieceSpec::PmWave { span: Some(s), .. })) => s.0,
            _ => return None,
        })
    }

    pub(crate) fn set(&mut self, v: ShootVar, x: f64) {
        let i = piece_index(v);
        match (v, self.pieces.get_mut(i)) {
            (ShootVar::AnchorRho, _) => self.anchor.rho = x,
            (ShootVar::AnchorL, _) => self.anchor.l = x,
            (ShootVar::AnchorP, _) => self.anchor.p = x,
            (ShootVar::ShockZ(_), Some(PieceSpec::Shock { z, .. })) => *z = Some(x),
            (ShootVar::ShockTheta(_), Some(PieceSpec::Shock { theta, .. })) => *theta = Some(Angle(x)),
            (ShootVar::ContactRho(_), Some(PieceSpec::Contact { rho, .. })) => *rho = x,
            (ShootVar::ContactL(_), Some(PieceSpec::Contact { l, .. })) => *l = x,
            (ShootVar::WaveSpan(_), Some(PieceSpec::PmWave { span, .. })) => *span = Some(Angle(x)),
            _ => {}
        }
    }

    /// Number of contacts including the implicit closing one.
    pub fn contact_count(&self) -> usize {
        1 + self
            .pieces
            .iter()
            .filter(|p| matches!(p, PieceSpec::Contact { .. }))
            .count()
    }
}

fn piece_index(v: ShootVar) -> usize {
    match v {
        ShootVar::ShockZ(i)
        | ShootVar::ShockTheta(i)
        | ShootVar::ContactRho(i)
        | ShootVar::ContactL(i)
        | ShootVar::WaveSpan(i) => i,
        _ => usize::MAX,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_parse() {
        assert_eq!("0.5".parse::<Angle>().unwrap(), Angle(0.5));
        let a: Angle = "180deg".parse().unwrap();
        assert!((a.0 - std::f64::consts::PI).abs() < 1e-15);
        assert!("abc".parse::<Angle>().is_err());
        let a: Angle = serde_json::from_str("\"90deg\"").unwrap();
        assert!((a.0 - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn shoot_vars_round_trip() {
        for s in ["anchor.l", "pieces[3].z", "pieces[10].span", "pieces[1].rho"] {
            assert_eq!(s.parse::<ShootVar>().unwrap().to_string(), s);
        }
        assert!("pieces[x].z".parse::<ShootVar>().is_err());
        assert!("pieces[0].q".parse::<ShootVar>().is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = r#"{"anchor":{"theta":0,"rho":1,"p":1,"l":1,"extra":2}}"#;
        assert!(serde_json::from_str::<FlowSpec>(bad).is_err());
        let ok = r#"{"anchor":{"theta":"10deg","rho":1,"p":1,"l":1},
                    "pieces":[{"kind":"shock","orientation":"forward","z":0.5,"side":"positive"}]}"#;
        let spec: FlowSpec = serde_json::from_str(ok).unwrap();
        assert_eq!(spec.solver.pm_steps_per_radian, 64);
        assert_eq!(spec.contact_count(), 1);
    }
}
