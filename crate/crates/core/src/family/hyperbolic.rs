//! Numerical evidence for hyperbolicity: both critical orbits settle on
//! attracting cycles.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::family::param::{family_map, ParamPoint};
use crate::map::{LorenzMap, Side, SignedPoint};
use crate::symbolic::kneading::{critical_seed, CriticalSide};

pub const MAX_HORIZON: usize = 100_000;
/// Distance at which an orbit counts as having returned.
pub const RETURN_TOL: f64 = 1e-9;
/// Multipliers below `1 − MULTIPLIER_GAP` are attracting; within the gap of 1
/// the cycle is neutral. A critical orbit captured by a repelling cycle is
/// left undecided.
pub const MULTIPLIER_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolicEvidence {
    Hyperbolic,
    NonHyperbolic,
    Undecided,
}

impl HyperbolicEvidence {
    pub fn as_str(self) -> &'static str {
        match self {
            HyperbolicEvidence::Hyperbolic => "hyperbolic",
            HyperbolicEvidence::NonHyperbolic => "non_hyperbolic",
            HyperbolicEvidence::Undecided => "undecided",
        }
    }
}

/// A cycle reached by a critical orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cycle {
    pub period: usize,
    pub multiplier: f64,
    /// Iterate at which the return was first seen.
    pub detected_at: usize,
}

fn derivative(map: &LorenzMap<f64>, x: &SignedPoint<f64>) -> f64 {
    match x.symbol() {
        Some(sym) => map.branch_derivative(sym, &x.value).abs(),
        None => f64::NAN,
    }
}

/// Brent-style search for a cycle in the orbit of `start`, with a tolerant
/// return test confirmed over two further periods.
pub fn find_cycle(map: &LorenzMap<f64>, start: SignedPoint<f64>, horizon: usize) -> Option<Cycle> {
    let side = start.side;
    let mut reference = start.clone();
    let mut x = start;
    let mut power = 1usize;
    let mut lag = 0usize;
    let mut n = 0usize;
    while n < horizon {
        x = map.step_inheriting(&x, side).ok()?;
        n += 1;
        lag += 1;
        if (x.value - reference.value).abs() < RETURN_TOL && x.symbol() == reference.symbol() {
            return confirm(map, &x, side, lag, n);
        }
        if lag == power {
            reference = x.clone();
            power *= 2;
            lag = 0;
        }
    }
    None
}

fn confirm(map: &LorenzMap<f64>, x: &SignedPoint<f64>, side: Side, period: usize, at: usize) -> Option<Cycle> {
    let mut y = x.clone();
    let mut multiplier = 1.0;
    for round in 0..2 {
        let anchor = y.clone();
        for _ in 0..period {
            if round == 0 {
                multiplier *= derivative(map, &y);
            }
            y = map.step_inheriting(&y, side).ok()?;
        }
        if (y.value - anchor.value).abs() >= RETURN_TOL {
            return None;
        }
    }
    multiplier.is_finite().then_some(Cycle { period, multiplier, detected_at: at })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicReport {
    pub evidence: HyperbolicEvidence,
    pub minus: Option<Cycle>,
    pub plus: Option<Cycle>,
}

pub fn classify_hyperbolic(pt: &ParamPoint, horizon: usize) -> Result<HyperbolicEvidence> {
    Ok(hyperbolic_report(pt, horizon)?.evidence)
}

pub fn hyperbolic_report(pt: &ParamPoint, horizon: usize) -> Result<HyperbolicReport> {
    if horizon > MAX_HORIZON {
        return Err(LorenzError::Precondition(format!("horizon {horizon} exceeds {MAX_HORIZON}")));
    }
    let map = family_map(pt);
    let minus = find_cycle(&map, critical_seed(CriticalSide::Minus), horizon);
    let plus = find_cycle(&map, critical_seed(CriticalSide::Plus), horizon);
    let attracting = |c: &Option<Cycle>| c.is_some_and(|c| c.multiplier < 1.0 - MULTIPLIER_GAP);
    let evidence = if attracting(&minus) && attracting(&plus) {
        HyperbolicEvidence::Hyperbolic
    } else if [minus, plus].iter().flatten().any(|c| (c.multiplier - 1.0).abs() <= MULTIPLIER_GAP) {
        HyperbolicEvidence::NonHyperbolic
    } else {
        HyperbolicEvidence::Undecided
    };
    Ok(HyperbolicReport { evidence, minus, plus })
}

/// Hyperbolic evidence persists at the four diagonal perturbations by `eps`.
pub fn is_stable(pt: &ParamPoint, horizon: usize, eps: f64) -> Result<bool> {
    for (ds, dt) in [(eps, eps), (eps, -eps), (-eps, eps), (-eps, -eps)] {
        let q = ParamPoint::clamped(pt.s + ds, pt.t + dt);
        if classify_hyperbolic(&q, horizon)? != HyperbolicEvidence::Hyperbolic {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCell {
    pub s: f64,
    pub t: f64,
    pub evidence: HyperbolicEvidence,
    /// For hyperbolic cells: evidence survives the perturbation.
    pub stable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub ns: usize,
    pub nt: usize,
    pub horizon: usize,
    pub perturbation: f64,
    /// Row-major, row `j` holds `t_j`.
    pub cells: Vec<DensityCell>,
    pub hyperbolic: usize,
    pub non_hyperbolic: usize,
    pub undecided: usize,
    pub fraction: f64,
    /// Hyperbolic cells that lost their evidence under perturbation.
    pub openness_violations: usize,
}

/// Classify the centers of an `ns × nt` grid over `[0, 1]²` and re-check
/// every hyperbolic cell under perturbation.
pub fn hyperbolic_density(ns: usize, nt: usize, horizon: usize, eps: f64, parallel: bool) -> Result<DensityReport> {
    if ns == 0 || nt == 0 || !(eps > 0.0) {
        return Err(LorenzError::Precondition("density grid needs positive sizes and perturbation".into()));
    }
    let cell = |k: usize| -> Result<DensityCell> {
        let (i, j) = (k % ns, k / ns);
        let s = (i as f64 + 0.5) / ns as f64;
        let t = (j as f64 + 0.5) / nt as f64;
        let pt = ParamPoint::new(s, t)?;
        let evidence = classify_hyperbolic(&pt, horizon)?;
        let stable = match evidence {
            HyperbolicEvidence::Hyperbolic => Some(is_stable(&pt, horizon, eps)?),
            _ => None,
        };
        Ok(DensityCell { s, t, evidence, stable })
    };
    let cells: Vec<DensityCell> = if parallel {
        (0..ns * nt).into_par_iter().map(cell).collect::<Result<_>>()?
    } else {
        (0..ns * nt).map(cell).collect::<Result<_>>()?
    };
    let count = |e: HyperbolicEvidence| cells.iter().filter(|c| c.evidence == e).count();
    let hyperbolic = count(HyperbolicEvidence::Hyperbolic);
    Ok(DensityReport {
        ns,
        nt,
        horizon,
        perturbation: eps,
        hyperbolic,
        non_hyperbolic: count(HyperbolicEvidence::NonHyperbolic),
        undecided: count(HyperbolicEvidence::Undecided),
        fraction: hyperbolic as f64 / cells.len() as f64,
        openness_violations: cells.iter().filter(|c| c.stable == Some(false)).count(),
        cells,
    })
}
