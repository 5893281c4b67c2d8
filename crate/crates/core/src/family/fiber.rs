use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::family::param::fiber_range;

/// Probes used to check that a fiber predicate switches at most once.
const MONOTONE_PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FiberSearch {
    /// The predicate switches at this `m` (to within the tolerance).
    Transition(f64),
    /// The predicate has this value along the whole fiber.
    Constant(bool),
}

/// Locate the switch of a monotone predicate along the fiber `M_u`.
pub fn fiber_bisect<F>(u: f64, predicate: F, tol: f64) -> Result<FiberSearch>
where
    F: Fn(f64) -> bool,
{
    let (lo, hi) =
        fiber_range(u).ok_or_else(|| LorenzError::Domain(format!("fiber u={u} misses the parameter square")))?;
    bisect_switch(lo, hi, predicate, tol)
}

/// Same as [`fiber_bisect`] on an explicit `m` interval.
pub fn bisect_switch<F>(lo: f64, hi: f64, predicate: F, tol: f64) -> Result<FiberSearch>
where
    F: Fn(f64) -> bool,
{
    Ok(match switch_bracket(lo, hi, predicate, tol)? {
        Switch::Constant(v) => FiberSearch::Constant(v),
        Switch::Bracket { a, b, .. } => FiberSearch::Transition(0.5 * (a + b)),
    })
}

/// Result of [`switch_bracket`]: the final bracket keeps both one-sided values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Switch {
    Constant(bool),
    /// `predicate(a) == at_a`, `predicate(b) != at_a`, `|b − a| ≤ tol`.
    Bracket { a: f64, b: f64, at_a: bool },
}

pub fn switch_bracket<F>(lo: f64, hi: f64, predicate: F, tol: f64) -> Result<Switch>
where
    F: Fn(f64) -> bool,
{
    if !(tol > 0.0) {
        return Err(LorenzError::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let n = MONOTONE_PROBES;
    let ms: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let vals: Vec<bool> = ms.iter().map(|&m| predicate(m)).collect();
    let switches: Vec<usize> = (0..n).filter(|&i| vals[i] != vals[i + 1]).collect();
    match switches.as_slice() {
        [] => Ok(Switch::Constant(vals[0])),
        [i] => {
            let (mut a, mut b) = (ms[*i], ms[*i + 1]);
            let at_a = vals[*i];
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if predicate(mid) == at_a {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            Ok(Switch::Bracket { a, b, at_a })
        }
        _ => Err(LorenzError::Contract(format!(
            "predicate switches {} times across [{lo}, {hi}]",
            switches.len()
        ))),
    }
}
