//! Island boundaries: fiberwise extents of the membership interval, the
//! endpoints `u₁, u₂`, extremal points and vertices.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::family::fiber::{switch_bracket, Switch};
use crate::family::param::{family_map, fiber_range, ParamPoint};
use crate::renorm::{detect_type, periodic_candidates, RenormType};
use crate::symbolic::{adjacent_branch, CriticalSide};

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySide {
    Upper,
    Lower,
}

/// The four boundary quantities at a parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryDefects {
    pub p: f64,
    pub q: f64,
    /// `fᵃ(0₋) − q`
    pub fa0m_minus_q: f64,
    /// `fᵃ(0₋)`
    pub fa0m: f64,
    /// `fᵇ(0₊) − p`
    pub fb0p_minus_p: f64,
    /// `fᵇ(0₊)`
    pub fb0p: f64,
}

impl BoundaryDefects {
    /// Smallest defect among the two conditions of one boundary side.
    pub fn side_defect(&self, side: BoundarySide) -> f64 {
        match side {
            BoundarySide::Upper => self.fa0m_minus_q.abs().min(self.fb0p.abs()),
            BoundarySide::Lower => self.fa0m.abs().min(self.fb0p_minus_p.abs()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryClass {
    pub defects: BoundaryDefects,
    /// `fᵃ(0₋) = q` or `fᵇ(0₊) = 0`.
    pub upper: bool,
    /// `fᵃ(0₋) = 0` or `fᵇ(0₊) = p`.
    pub lower: bool,
    /// Both conditions of one side hold at once.
    pub vertex: Option<BoundarySide>,
    /// `fᵃ(0₋) = 0` and `fᵇ(0₊) = 0`.
    pub trivial_extremal: bool,
    /// `fᵃ(0₋) = q` and `fᵇ(0₊) = p`.
    pub full_branch_extremal: bool,
}

/// Boundary quantities from the renormalization data at `pt`, or from the
/// periodic points nearest 0 when `pt` sits just outside the archipelago.
pub fn boundary_defects(pt: &ParamPoint, rtype: &RenormType) -> Result<BoundaryDefects> {
    let map = family_map(pt);
    let (p, q, fa0m, fb0p) = match detect_type(&map, rtype)? {
        Some(r) => (r.p, r.q, r.fa0m, r.fb0p),
        None => {
            let undefined = || LorenzError::Undefined(format!("no type {rtype} boundary data at ({}, {})", pt.s, pt.t));
            let left = adjacent_branch(&map, CriticalSide::Minus, rtype.a())?;
            let right = adjacent_branch(&map, CriticalSide::Plus, rtype.b())?;
            if left.word != rtype.alpha || right.word != rtype.beta {
                return Err(undefined());
            }
            let p = *periodic_candidates(&map, &left).first().ok_or_else(undefined)?;
            let q = *periodic_candidates(&map, &right).first().ok_or_else(undefined)?;
            (p, q, map.compose(&rtype.alpha, &0.0), map.compose(&rtype.beta, &0.0))
        }
    };
    Ok(BoundaryDefects { p, q, fa0m_minus_q: fa0m - q, fa0m, fb0p_minus_p: fb0p - p, fb0p })
}

pub fn classify_boundary_point(pt: &ParamPoint, rtype: &RenormType) -> Result<BoundaryClass> {
    classify_boundary_point_with(pt, rtype, DEFAULT_CLASSIFY_TOL)
}

/// Which boundary conditions hold at `pt` within `tol`. `Undefined` when none does.
pub fn classify_boundary_point_with(pt: &ParamPoint, rtype: &RenormType, tol: f64) -> Result<BoundaryClass> {
    let d = boundary_defects(pt, rtype)?;
    Ok(classify_defects(&d, tol).ok_or_else(|| {
        LorenzError::Undefined(format!(
            "({}, {}) is not on a type {rtype} boundary within {tol}: defects {:?}",
            pt.s, pt.t, d
        ))
    })?)
}

fn classify_defects(d: &BoundaryDefects, tol: f64) -> Option<BoundaryClass> {
    let upper_a = d.fa0m_minus_q.abs() <= tol;
    let upper_b = d.fb0p.abs() <= tol;
    let lower_a = d.fa0m.abs() <= tol;
    let lower_b = d.fb0p_minus_p.abs() <= tol;
    let (upper, lower) = (upper_a || upper_b, lower_a || lower_b);
    if !upper && !lower {
        return None;
    }
    let vertex = if upper_a && upper_b {
        Some(BoundarySide::Upper)
    } else if lower_a && lower_b {
        Some(BoundarySide::Lower)
    } else {
        None
    };
    Some(BoundaryClass {
        defects: *d,
        upper,
        lower,
        vertex,
        trivial_extremal: lower_a && upper_b,
        full_branch_extremal: upper_a && lower_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    Trivial,
    FullBranch,
    Unclassified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremal {
    pub point: ParamPoint,
    pub kind: ExtremalKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vertex {
    pub point: ParamPoint,
    pub boundary: BoundarySide,
    /// The classifier confirms both conditions of `boundary` at `point`.
    pub confirmed: bool,
}

/// Sampled boundary of one island in `(u, m)` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IslandBoundary {
    pub rtype: RenormType,
    pub u_range: (f64, f64),
    /// `[u, ∂₋(u)]`, the last member `m` from below.
    pub lower: Vec<[f64; 2]>,
    /// `[u, ∂₊(u)]`, the last member `m` from above.
    pub upper: Vec<[f64; 2]>,
    pub left_extremal: Extremal,
    pub right_extremal: Extremal,
    pub vertices: Vec<Vertex>,
    /// The island meets the edge of the parameter square.
    pub truncated: bool,
    pub fiber_tol: f64,
    /// Fibers whose sampled membership is not the traced interval.
    pub contiguity_failures: Vec<usize>,
    /// Adjacent samples violating the 1-Lipschitz bound with `2·fiber_tol` slack.
    pub lipschitz_violations: Vec<(BoundarySide, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub fiber_tol: f64,
    pub fibers: usize,
    pub contiguity_samples: usize,
    pub classify_tol: f64,
    pub initial_step: f64,
    pub parallel: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            fiber_tol: 1e-10,
            fibers: 128,
            contiguity_samples: 64,
            classify_tol: DEFAULT_CLASSIFY_TOL,
            initial_step: 1.0 / 64.0,
            parallel: true,
        }
    }
}

fn member(rtype: &RenormType, u: f64, m: f64) -> bool {
    match ParamPoint::from_um(u, m) {
        Ok(pt) => matches!(detect_type(&family_map(&pt), rtype), Ok(Some(_))),
        Err(_) => false,
    }
}

/// Membership interval on one fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Extent {
    u: f64,
    lo: f64,
    hi: f64,
    clipped: bool,
}

impl Extent {
    fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// The membership interval through the first member among `probes`.
fn extent(rtype: &RenormType, u: f64, probes: &[f64], tol: f64) -> Result<Option<Extent>> {
    let Some((f_lo, f_hi)) = fiber_range(u) else {
        return Ok(None);
    };
    let Some(m_in) = probes.iter().copied().filter(|m| (f_lo..=f_hi).contains(m)).find(|&m| member(rtype, u, m))
    else {
        return Ok(None);
    };
    let pred = |m: f64| member(rtype, u, m);
    let mut clipped = false;
    let lo = match switch_bracket(f_lo, m_in, pred, tol)? {
        Switch::Bracket { b, at_a: false, .. } => b,
        Switch::Constant(true) => {
            clipped = true;
            f_lo
        }
        other => return Err(LorenzError::Consistency(format!("lower fiber search at u={u}: {other:?}"))),
    };
    let hi = match switch_bracket(m_in, f_hi, pred, tol)? {
        Switch::Bracket { a, at_a: true, .. } => a,
        Switch::Constant(true) => {
            clipped = true;
            f_hi
        }
        other => return Err(LorenzError::Consistency(format!("upper fiber search at u={u}: {other:?}"))),
    };
    Ok(Some(Extent { u, lo, hi, clipped }))
}

fn probes_around(center: f64, width: f64) -> [f64; 5] {
    let w = width.abs();
    [center, center - 0.25 * w, center + 0.25 * w, center - 0.45 * w, center + 0.45 * w]
}

/// March from the seed fiber in direction `dir` until the island closes.
fn march(rtype: &RenormType, seed: Extent, dir: f64, opts: &TraceOptions) -> Result<(Vec<Extent>, bool)> {
    let stop = opts.fiber_tol / 8.0;
    let mut samples = vec![seed];
    let mut h = opts.initial_step;
    let mut truncated = seed.clipped;
    while h >= stop {
        let last = *samples.last().expect("seeded");
        let u = last.u + dir * h;
        if u.abs() > 1.0 {
            if (1.0 - last.u.abs()) < opts.fiber_tol {
                truncated = true;
                break;
            }
            h = 0.5 * h.min(1.0 - last.u.abs());
            continue;
        }
        let (plo, phi) = match samples.len() {
            1 => (last.lo, last.hi),
            n => {
                let prev = samples[n - 2];
                let slope = |a: f64, b: f64| (b - a) / (last.u - prev.u);
                (last.lo + slope(prev.lo, last.lo) * (u - last.u), last.hi + slope(prev.hi, last.hi) * (u - last.u))
            }
        };
        let mut probes = probes_around(0.5 * (plo + phi), phi - plo).to_vec();
        probes.push(last.center());
        match extent(rtype, u, &probes, opts.fiber_tol)? {
            Some(e) => {
                truncated |= e.clipped;
                samples.push(e);
                h = (2.0 * h).min(opts.initial_step);
            }
            None => h *= 0.5,
        }
    }
    Ok((samples, truncated))
}

/// Piecewise-linear interpolation of the marched extents.
fn interpolate(track: &[Extent], u: f64) -> (f64, f64) {
    let k = track.partition_point(|e| e.u < u);
    if k == 0 {
        return (track[0].lo, track[0].hi);
    }
    if k == track.len() {
        let e = track[k - 1];
        return (e.lo, e.hi);
    }
    let (a, b) = (track[k - 1], track[k]);
    let w = if b.u > a.u { (u - a.u) / (b.u - a.u) } else { 0.0 };
    (a.lo + w * (b.lo - a.lo), a.hi + w * (b.hi - a.hi))
}

fn maybe_par<T, F>(n: usize, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

pub fn trace_island_boundary(rtype: &RenormType, seed: &ParamPoint) -> Result<IslandBoundary> {
    trace_island_boundary_with(rtype, seed, &TraceOptions::default())
}

pub fn trace_island_boundary_with(rtype: &RenormType, seed: &ParamPoint, opts: &TraceOptions) -> Result<IslandBoundary> {
    if opts.fibers < 2 || !(opts.fiber_tol > 0.0) {
        return Err(LorenzError::Precondition("tracing needs at least 2 fibers and a positive tolerance".into()));
    }
    if detect_type(&family_map(seed), rtype)?.is_none() {
        return Err(LorenzError::Precondition(format!(
            "seed ({}, {}) is not in the type {rtype} archipelago",
            seed.s, seed.t
        )));
    }
    let (u0, m0) = (seed.u(), seed.m());
    let first = extent(rtype, u0, &[m0], opts.fiber_tol)?
        .ok_or_else(|| LorenzError::Consistency("seed fiber lost its member".into()))?;
    let (mut left, trunc_l) = march(rtype, first, -1.0, opts)?;
    let (right, trunc_r) = march(rtype, first, 1.0, opts)?;
    left.reverse();
    left.pop();
    let track: Vec<Extent> = left.into_iter().chain(right).collect();
    let (tip1, tip2) = (track[0], *track.last().expect("non-empty"));
    let (u1, u2) = (tip1.u, tip2.u);

    let n = opts.fibers;
    let us: Vec<f64> = (0..n).map(|i| if i + 1 == n { u2 } else { u1 + (u2 - u1) * i as f64 / (n - 1) as f64 }).collect();
    let extents = maybe_par(n, opts.parallel, |i| {
        let u = us[i];
        if i == 0 {
            return Ok(tip1);
        }
        if i + 1 == n {
            return Ok(tip2);
        }
        let (lo, hi) = interpolate(&track, u);
        let mut probes = probes_around(0.5 * (lo + hi), hi - lo).to_vec();
        probes.extend([lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)]);
        extent(rtype, u, &probes, opts.fiber_tol)?
            .ok_or_else(|| LorenzError::Consistency(format!("fiber u={u} inside [u1, u2] has no member near the trace")))
    })?;
    let truncated = trunc_l || trunc_r || extents.iter().any(|e| e.clipped);

    let contiguous = maybe_par(n, opts.parallel, |i| Ok(fiber_matches(rtype, &extents[i], opts)))?;
    let contiguity_failures = (0..n).filter(|&i| !contiguous[i]).collect();

    let lower: Vec<[f64; 2]> = extents.iter().map(|e| [e.u, e.lo]).collect();
    let upper: Vec<[f64; 2]> = extents.iter().map(|e| [e.u, e.hi]).collect();
    let mut lipschitz_violations = Vec::new();
    for (side, curve) in [(BoundarySide::Lower, &lower), (BoundarySide::Upper, &upper)] {
        for i in 0..n - 1 {
            let (a, b) = (curve[i], curve[i + 1]);
            if (b[1] - a[1]).abs() > (b[0] - a[0]).abs() + 2.0 * opts.fiber_tol {
                lipschitz_violations.push((side, i));
            }
        }
    }

    let extremal = |e: &Extent| -> Extremal {
        let point = ParamPoint::from_um(e.u, e.center()).unwrap_or_else(|_| ParamPoint::clamped(0.0, 0.0));
        let kind = match classify_boundary_point_with(&point, rtype, opts.classify_tol) {
            Ok(c) if c.trivial_extremal => ExtremalKind::Trivial,
            Ok(c) if c.full_branch_extremal => ExtremalKind::FullBranch,
            _ => ExtremalKind::Unclassified,
        };
        Extremal { point, kind }
    };
    let vertices = find_vertices(rtype, &extents, opts)?;

    Ok(IslandBoundary {
        rtype: rtype.clone(),
        u_range: (u1, u2),
        lower,
        upper,
        left_extremal: extremal(&tip1),
        right_extremal: extremal(&tip2),
        vertices,
        truncated,
        fiber_tol: opts.fiber_tol,
        contiguity_failures,
        lipschitz_violations,
    })
}

/// Sampled membership along the whole fiber agrees with the traced interval.
fn fiber_matches(rtype: &RenormType, e: &Extent, opts: &TraceOptions) -> bool {
    let Some((f_lo, f_hi)) = fiber_range(e.u) else {
        return false;
    };
    let k = opts.contiguity_samples.max(2);
    let slack = 2.0 * opts.fiber_tol;
    let statuses: Vec<(f64, bool)> = (0..k)
        .map(|j| {
            let m = f_lo + (f_hi - f_lo) * (j as f64 + 0.5) / k as f64;
            (m, member(rtype, e.u, m))
        })
        .collect();
    let first = statuses.iter().position(|s| s.1);
    let last = statuses.iter().rposition(|s| s.1);
    if let (Some(a), Some(b)) = (first, last) {
        if !statuses[a..=b].iter().all(|s| s.1) {
            return false;
        }
    }
    statuses.iter().all(|&(m, inside)| {
        let expected_in = m >= e.lo && m <= e.hi;
        let near_edge = (m - e.lo).abs() <= slack || (m - e.hi).abs() <= slack;
        inside == expected_in || near_edge
    })
}

/// Which condition of `side` is active at a boundary sample: `true` for the
/// `fᵃ(0₋)` condition, `false` for the `fᵇ(0₊)` one.
fn active_condition(rtype: &RenormType, u: f64, m: f64, side: BoundarySide) -> Option<bool> {
    let pt = ParamPoint::from_um(u, m).ok()?;
    let d = boundary_defects(&pt, rtype).ok()?;
    Some(match side {
        BoundarySide::Upper => d.fa0m_minus_q.abs() <= d.fb0p.abs(),
        BoundarySide::Lower => d.fa0m.abs() <= d.fb0p_minus_p.abs(),
    })
}

/// One side of the boundary at `u`, searched from a member `m_in`.
fn boundary_at(rtype: &RenormType, u: f64, m_in: f64, side: BoundarySide, tol: f64) -> Result<Option<f64>> {
    let Some((f_lo, f_hi)) = fiber_range(u) else {
        return Ok(None);
    };
    if !member(rtype, u, m_in) {
        return Ok(None);
    }
    let pred = |m: f64| member(rtype, u, m);
    Ok(match side {
        BoundarySide::Lower => match switch_bracket(f_lo, m_in, pred, tol)? {
            Switch::Bracket { b, at_a: false, .. } => Some(b),
            _ => None,
        },
        BoundarySide::Upper => match switch_bracket(m_in, f_hi, pred, tol)? {
            Switch::Bracket { a, at_a: true, .. } => Some(a),
            _ => None,
        },
    })
}

/// Switches of the active boundary condition between interior samples,
/// refined by bisection in `u`.
fn find_vertices(rtype: &RenormType, extents: &[Extent], opts: &TraceOptions) -> Result<Vec<Vertex>> {
    let n = extents.len();
    let mut vertices = Vec::new();
    for side in [BoundarySide::Upper, BoundarySide::Lower] {
        let curve = |e: &Extent| match side {
            BoundarySide::Upper => e.hi,
            BoundarySide::Lower => e.lo,
        };
        let active: Vec<Option<bool>> = extents[1..n - 1]
            .iter()
            .map(|e| active_condition(rtype, e.u, curve(e), side))
            .collect();
        for k in 0..active.len().saturating_sub(1) {
            let (Some(ca), Some(cb)) = (active[k], active[k + 1]) else {
                continue;
            };
            if ca == cb {
                continue;
            }
            // (u, a member m on that fiber)
            let (ea, eb) = (extents[k + 1], extents[k + 2]);
            let (mut a, mut b) = ((ea.u, ea.center()), (eb.u, eb.center()));
            let mut m_at = curve(&ea);
            while b.0 - a.0 > opts.fiber_tol {
                let (u, m_in) = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
                let Some(m) = boundary_at(rtype, u, m_in, side, opts.fiber_tol)? else {
                    break;
                };
                match active_condition(rtype, u, m, side) {
                    Some(c) if c == ca => a = (u, m_in),
                    Some(_) => b = (u, m_in),
                    None => break,
                }
                m_at = m;
            }
            let point = ParamPoint::from_um(0.5 * (a.0 + b.0), m_at)
                .unwrap_or_else(|_| ParamPoint::clamped(0.0, 0.0));
            let confirmed = classify_boundary_point_with(&point, rtype, opts.classify_tol)
                .map(|c| c.vertex == Some(side))
                .unwrap_or(false);
            vertices.push(Vertex { point, boundary: side, confirmed });
        }
    }
    Ok(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defects(fa0m: f64, q: f64, fb0p: f64, p: f64) -> BoundaryDefects {
        BoundaryDefects { p, q, fa0m_minus_q: fa0m - q, fa0m, fb0p_minus_p: fb0p - p, fb0p }
    }

    #[test]
    fn extremal_and_vertex_patterns() {
        let c = classify_defects(&defects(0.0, 0.4, 0.0, -0.4), 1e-8).unwrap();
        assert!(c.trivial_extremal && !c.full_branch_extremal && c.vertex.is_none());
        let c = classify_defects(&defects(0.4, 0.4, -0.4, -0.4), 1e-8).unwrap();
        assert!(c.full_branch_extremal && !c.trivial_extremal);
        let c = classify_defects(&defects(0.4, 0.4, 0.0, -0.4), 1e-8).unwrap();
        assert_eq!(c.vertex, Some(BoundarySide::Upper));
        assert!(c.upper && !c.lower);
        assert!(classify_defects(&defects(0.2, 0.4, -0.2, -0.4), 1e-8).is_none());
    }

    #[test]
    fn interpolation_clamps() {
        let t = [
            Extent { u: 0.0, lo: -1.0, hi: 1.0, clipped: false },
            Extent { u: 1.0, lo: 0.0, hi: 2.0, clipped: false },
        ];
        assert_eq!(interpolate(&t, 0.5), (-0.5, 1.5));
        assert_eq!(interpolate(&t, -1.0), (-1.0, 1.0));
        assert_eq!(interpolate(&t, 3.0), (0.0, 2.0));
    }

    #[test]
    fn seed_outside_is_rejected() {
        let t: RenormType = "LR,RL".parse().unwrap();
        let seed = ParamPoint::new(0.0, 1.0).unwrap();
        assert!(matches!(trace_island_boundary(&t, &seed), Err(LorenzError::Precondition(_))));
    }
}
