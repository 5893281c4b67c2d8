use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::map::LorenzMap;

/// Parameter `(s, t) ∈ [0, 1]²` of the quadratic family, with the rotated
/// coordinates `u = s − t` and `m = s + t − 1`. Increasing `m` at fixed `u`
/// moves both branches up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamPoint {
    pub s: f64,
    pub t: f64,
}

impl ParamPoint {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(s) || !unit(t) {
            return Err(LorenzError::Domain(format!("parameter ({s}, {t}) outside the unit square")));
        }
        Ok(ParamPoint { s, t })
    }

    pub fn from_um(u: f64, m: f64) -> Result<Self> {
        Self::new((m + 1.0 + u) / 2.0, (m + 1.0 - u) / 2.0)
    }

    pub fn u(&self) -> f64 {
        self.s - self.t
    }

    pub fn m(&self) -> f64 {
        self.s + self.t - 1.0
    }

    /// Move to the nearest point of the square.
    pub fn clamped(s: f64, t: f64) -> Self {
        ParamPoint { s: s.clamp(0.0, 1.0), t: t.clamp(0.0, 1.0) }
    }
}

/// Range of `m` on the fiber `M_u` inside the square.
pub fn fiber_range(u: f64) -> Option<(f64, f64)> {
    let a = u.abs();
    (a <= 1.0).then(|| (a - 1.0, 1.0 - a))
}

/// Deformation class of `z′` relative to `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConeRelation {
    /// Both parameters weakly larger, not both equal.
    CPlus,
    /// Both parameters weakly smaller, not both equal.
    CMinus,
    /// One branch up, the other down.
    B,
    Equal,
}

pub fn cone_relation(z: &ParamPoint, z2: &ParamPoint) -> ConeRelation {
    if z == z2 {
        ConeRelation::Equal
    } else if z2.s >= z.s && z2.t >= z.t {
        ConeRelation::CPlus
    } else if z2.s <= z.s && z2.t <= z.t {
        ConeRelation::CMinus
    } else {
        ConeRelation::B
    }
}

pub fn family_map(pt: &ParamPoint) -> LorenzMap<f64> {
    LorenzMap::quadratic(pt.s, pt.t).expect("parameter points lie in the square")
}
