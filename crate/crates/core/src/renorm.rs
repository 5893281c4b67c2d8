//! Renormalizations `(p, q, fᵃ, fᵇ)`: detection, the rescaling operator and
//! the nesting law between two renormalizations of the same map.
//!
//! The branch of `fᵃ` containing `[p, 0]` must be the branch adjacent to 0,
//! so for each period `a` there is exactly one candidate word `α = K⁻ₐ`, and
//! likewise `β = K⁺_b`. The boundary points are the repelling fixed points of
//! `fᵃ` and `fᵇ` on those branches nearest to 0.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::map::{LorenzMap, SignedPoint};
use crate::roots::{bisect, secant_root};
use crate::scalar::Scalar;
use crate::symbolic::kneading::CriticalSide;
use crate::symbolic::{Branch, BranchPartition, Symbol, Word};

pub const DEFAULT_PERIOD_CAP: usize = 16;

/// Samples per branch when looking for sign changes of `fᵃ(x) − x`.
const FIXED_POINT_SAMPLES: usize = 64;

/// Renormalization type `(α, β)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RenormType {
    pub alpha: Word,
    pub beta: Word,
}

impl RenormType {
    pub fn new(alpha: Word, beta: Word) -> Result<Self> {
        if alpha.first() != Some(Symbol::L) {
            return Err(LorenzError::Parse(format!("alpha word '{alpha}' must start with L")));
        }
        if beta.first() != Some(Symbol::R) {
            return Err(LorenzError::Parse(format!("beta word '{beta}' must start with R")));
        }
        Ok(RenormType { alpha, beta })
    }

    pub fn a(&self) -> usize {
        self.alpha.len()
    }

    pub fn b(&self) -> usize {
        self.beta.len()
    }

    pub fn total_period(&self) -> usize {
        self.a() + self.b()
    }
}

impl fmt::Display for RenormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

impl FromStr for RenormType {
    type Err = LorenzError;

    /// `"LR,RL"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| LorenzError::Parse(format!("renormalization type '{s}' needs the form ALPHA,BETA")))?;
        RenormType::new(a.parse()?, b.parse()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Renormalization<S> {
    pub p: S,
    pub q: S,
    pub a: usize,
    pub b: usize,
    pub rtype: RenormType,
    /// `Dfᵃ(p)`.
    pub deriv_p: S,
    /// `Dfᵇ(q)`.
    pub deriv_q: S,
    /// `fᵃ(0₋)`.
    pub fa0m: S,
    /// `fᵇ(0₊)`.
    pub fb0p: S,
    /// Smallest slack over all verification checks, scaled by the domain.
    pub slack: S,
    /// Some check passed by less than the uncertainty band.
    pub uncertain: bool,
}

/// Fixed points of `f^{|word|}` on the branch with that word adjacent to 0,
/// ordered from 0 outward. Empty when no such branch exists.
pub fn periodic_candidates<S: Scalar>(map: &LorenzMap<S>, branch: &Branch<S>) -> Vec<S> {
    let side = match branch.word.first() {
        Some(Symbol::L) => CriticalSide::Minus,
        Some(Symbol::R) => CriticalSide::Plus,
        None => return Vec::new(),
    };
    let word = &branch.word;
    let g = |x: &S| map.compose(word, x) - x.clone();
    // far end of the branch, away from 0
    let far = match side {
        CriticalSide::Minus => branch.lo.clone(),
        CriticalSide::Plus => branch.hi.clone(),
    };
    // strictly inside (P, 0) or (0, Q): roots at 0 or at the boundary fixed points are excluded
    let band = S::zero_tol() * map.scale();
    let in_branch = |x: &S| match side {
        CriticalSide::Minus => *x >= branch.lo && *x < -band.clone() && *x > map.lo().clone() + band.clone(),
        CriticalSide::Plus => *x <= branch.hi && *x > band.clone() && *x < map.hi().clone() - band.clone(),
    };

    if map.is_piecewise_affine() {
        let (g0, gf) = (g(&S::zero()), g(&far));
        return match secant_root(&S::zero(), &g0, &far, &gf) {
            Some(x) if in_branch(&x) => vec![x],
            Some(_) => Vec::new(),
            // g constant: a whole interval of fixed points, none isolated
            None => Vec::new(),
        };
    }

    let tol = S::bisect_tol() * map.scale();
    let n = FIXED_POINT_SAMPLES;
    let xs: Vec<S> = (0..=n).map(|j| far.clone() * S::ratio(j as i64, n as i64)).collect();
    let vs: Vec<S> = xs.iter().map(&g).collect();
    let mut roots: Vec<S> = Vec::new();
    for j in 0..n {
        // near = xs[j], outer = xs[j+1]
        let (near, outer) = (&xs[j], &xs[j + 1]);
        let (vn, vo) = (&vs[j], &vs[j + 1]);
        let changes = (*vn >= S::zero() && *vo <= S::zero()) || (*vn <= S::zero() && *vo >= S::zero());
        if !changes || (vn.is_zero() && j > 0) {
            continue;
        }
        let (lo, hi, vlo) = match side {
            CriticalSide::Minus => (outer.clone(), near.clone(), vo.clone()),
            CriticalSide::Plus => (near.clone(), outer.clone(), vn.clone()),
        };
        let root = if vlo <= S::zero() {
            bisect(&g, lo, hi, &tol, 400).mid()
        } else {
            bisect(|x: &S| -g(x), lo, hi, &tol, 400).mid()
        };
        if in_branch(&root) && roots.last() != Some(&root) {
            roots.push(root);
        }
    }
    roots
}

/// Fixed point of `f^{|word|}` nearest 0 on the adjacent branch with this word.
pub fn find_periodic_boundary<S: Scalar>(map: &LorenzMap<S>, word: &Word) -> Result<Option<S>> {
    let side = match word.first() {
        Some(Symbol::L) => CriticalSide::Minus,
        Some(Symbol::R) => CriticalSide::Plus,
        None => return Err(LorenzError::Precondition("periodic boundary search needs a non-empty word".into())),
    };
    let branch = crate::symbolic::adjacent_branch(map, side, word.len())?;
    if &branch.word != word {
        return Ok(None);
    }
    Ok(periodic_candidates(map, &branch).into_iter().next())
}

/// Slack of every defining condition of the renormalization `(p, q, fᵃ, fᵇ)`.
/// Positive means satisfied; the minimum is returned.
fn min_slack<S: Scalar>(map: &LorenzMap<S>, alpha: &Word, beta: &Word, p: &S, q: &S) -> S {
    let zero = S::zero();
    let mut slacks: Vec<S> = Vec::new();
    let fix_tol = S::margin() * S::lit(100.0) * map.scale();
    // P < p < 0 < q < Q
    slacks.push(p.clone() - map.lo().clone());
    slacks.push(map.hi().clone() - q.clone());
    slacks.push(-p.clone());
    slacks.push(q.clone());
    // periodicity of the boundary points is a hard check, not a margin
    for (word, x) in [(alpha, p), (beta, q)] {
        let residual = (map.compose(word, x) - x.clone()).abs();
        if residual > fix_tol {
            return fix_tol - residual;
        }
    }
    // non-trivial return branches inside [p, q]
    let fa0m = map.compose(alpha, &zero);
    let fb0p = map.compose(beta, &zero);
    slacks.push(q.clone() - fa0m.clone());
    slacks.push(fa0m);
    slacks.push(fb0p.clone() - p.clone());
    slacks.push(-fb0p);
    // first return: intermediate images of [p, 0] and [0, q] avoid (p, q). The
    // periodic end may touch p or q (it decides the side, hard); the critical
    // end carries the slack.
    let hard_fail = -(fix_tol.clone() + fix_tol.clone());
    for i in 1..alpha.len() {
        let w = alpha.prefix(i);
        let (per, crit) = (map.compose(&w, p), map.compose(&w, &zero));
        if per <= p.clone() + fix_tol.clone() {
            slacks.push(p.clone() - crit);
        } else if per < q.clone() - fix_tol.clone() {
            return hard_fail;
        }
    }
    for j in 1..beta.len() {
        let w = beta.prefix(j);
        let (crit, per) = (map.compose(&w, &zero), map.compose(&w, q));
        if per >= q.clone() - fix_tol.clone() {
            slacks.push(crit - q.clone());
        } else if per > p.clone() + fix_tol.clone() {
            return hard_fail;
        }
    }
    slacks.into_iter().fold(None, |m: Option<S>, s| match m {
        Some(m) if m <= s => Some(m),
        _ => Some(s),
    })
    .unwrap_or(zero)
}

/// Verify `(p, q)` as a type-`(α, β)` renormalization. `None` when a check fails.
fn assemble<S: Scalar>(map: &LorenzMap<S>, rtype: &RenormType, p: &S, q: &S) -> Option<Renormalization<S>> {
    let slack = min_slack(map, &rtype.alpha, &rtype.beta, p, q);
    let scale = map.scale();
    if slack < -(S::margin() * scale.clone()) {
        return None;
    }
    let uncertain = if S::EXACT { slack.is_zero() } else { slack < S::uncertain_band() * scale };
    Some(Renormalization {
        p: p.clone(),
        q: q.clone(),
        a: rtype.a(),
        b: rtype.b(),
        rtype: rtype.clone(),
        deriv_p: map.compose_derivative(&rtype.alpha, p),
        deriv_q: map.compose_derivative(&rtype.beta, q),
        fa0m: map.compose(&rtype.alpha, &S::zero()),
        fb0p: map.compose(&rtype.beta, &S::zero()),
        slack,
        uncertain,
    })
}

fn first_valid<S: Scalar>(
    map: &LorenzMap<S>,
    rtype: &RenormType,
    ps: &[S],
    qs: &[S],
) -> Option<Renormalization<S>> {
    // pairs ordered by combined distance from 0 in candidate rank, innermost first
    let mut pairs: Vec<(usize, usize)> =
        (0..ps.len()).flat_map(|i| (0..qs.len()).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (i + j, i));
    pairs.into_iter().find_map(|(i, j)| assemble(map, rtype, &ps[i], &qs[j]))
}

/// Type-restricted detector: the renormalization of type `rtype`, if any.
pub fn detect_type<S: Scalar>(map: &LorenzMap<S>, rtype: &RenormType) -> Result<Option<Renormalization<S>>> {
    let left = crate::symbolic::adjacent_branch(map, CriticalSide::Minus, rtype.a())?;
    if left.word != rtype.alpha {
        return Ok(None);
    }
    let right = crate::symbolic::adjacent_branch(map, CriticalSide::Plus, rtype.b())?;
    if right.word != rtype.beta {
        return Ok(None);
    }
    let ps = periodic_candidates(map, &left);
    let qs = periodic_candidates(map, &right);
    Ok(first_valid(map, rtype, &ps, &qs))
}

/// All renormalizations with periods `a ≤ a_max`, `b ≤ b_max`, sorted by
/// `(a + b, α, β)`.
pub fn detect_renormalizations<S: Scalar>(
    map: &LorenzMap<S>,
    a_max: usize,
    b_max: usize,
) -> Result<Vec<Renormalization<S>>> {
    if a_max == 0 || b_max == 0 {
        return Err(LorenzError::Precondition("period caps must be at least 1".into()));
    }
    let lefts = adjacent_chain(map, CriticalSide::Minus, a_max)?;
    let rights = adjacent_chain(map, CriticalSide::Plus, b_max)?;
    let left_roots: Vec<Vec<S>> = lefts.iter().map(|b| periodic_candidates(map, b)).collect();
    let right_roots: Vec<Vec<S>> = rights.iter().map(|b| periodic_candidates(map, b)).collect();

    let mut found = Vec::new();
    for (l, ps) in lefts.iter().zip(&left_roots) {
        if ps.is_empty() {
            continue;
        }
        for (r, qs) in rights.iter().zip(&right_roots) {
            if qs.is_empty() {
                continue;
            }
            let rtype = RenormType { alpha: l.word.clone(), beta: r.word.clone() };
            if let Some(ren) = first_valid(map, &rtype, ps, qs) {
                found.push(ren);
            }
        }
    }
    found.sort_by(|x, y| {
        (x.a + x.b)
            .cmp(&(y.a + y.b))
            .then_with(|| x.rtype.cmp(&y.rtype))
    });
    Ok(found)
}

/// Adjacent branches of `f¹ … fⁿ` on one side, built incrementally.
fn adjacent_chain<S: Scalar>(map: &LorenzMap<S>, side: CriticalSide, n: usize) -> Result<Vec<Branch<S>>> {
    let mut out = Vec::with_capacity(n);
    let mut branch = BranchPartition::identity(map).branches.remove(0);
    for _ in 0..n {
        let children = branch.refine(map)?;
        let pick = match side {
            CriticalSide::Minus => children.into_iter().rev().find(|b| b.lo < S::zero()),
            CriticalSide::Plus => children.into_iter().find(|b| b.hi > S::zero()),
        };
        branch = pick.ok_or_else(|| LorenzError::Consistency("adjacent branch vanished".into()))?;
        out.push(branch.clone());
    }
    Ok(out)
}

/// Re-check a renormalization by pointwise iteration of `f` (not by branch
/// composition): periodicity of `p` and `q`, the return of the critical
/// orbits into `[p, q]` at exactly times `a` and `b`, and the avoidance of
/// `(p, q)` by the intermediate orbit points.
pub fn verify_renormalization<S: Scalar>(map: &LorenzMap<S>, r: &Renormalization<S>) -> Result<()> {
    let scale = map.scale();
    let tol = S::margin() * S::lit(100.0) * scale.clone();
    let slack = S::margin() * scale;
    let fail = |what: String| Err(LorenzError::Consistency(format!("renormalization {}: {what}", r.rtype)));
    let inside_open = |x: &S| *x > r.p.clone() + slack.clone() && *x < r.q.clone() - slack.clone();

    for (start, period, word) in [
        (SignedPoint::interior(r.p.clone()), r.a, &r.rtype.alpha),
        (SignedPoint::interior(r.q.clone()), r.b, &r.rtype.beta),
    ] {
        let orbit = map.orbit(&start, period)?;
        let back = &orbit[period].value;
        if (back.clone() - start.value.clone()).abs() > tol {
            return fail(format!("boundary point {} not periodic (returns to {back})", start.value));
        }
        for (i, x) in orbit.iter().enumerate().take(period) {
            if i > 0 && inside_open(&x.value) {
                return fail(format!("orbit of {} enters (p, q) at step {i}", start.value));
            }
            if x.symbol() != Some(word.symbols()[i]) {
                return fail(format!("orbit of {} leaves its branch at step {i}", start.value));
            }
        }
    }
    for (seed, period, word) in [
        (SignedPoint::left_of_zero(), r.a, &r.rtype.alpha),
        (SignedPoint::right_of_zero(), r.b, &r.rtype.beta),
    ] {
        let orbit = map.orbit(&seed, period)?;
        for (i, x) in orbit.iter().enumerate().take(period) {
            if x.symbol() != Some(word.symbols()[i]) {
                return fail(format!("critical orbit itinerary differs at step {i}"));
            }
            if i > 0 && inside_open(&x.value) {
                return fail(format!("critical orbit returns early at step {i}"));
            }
        }
        let last = &orbit[period].value;
        if *last < r.p.clone() - slack.clone() || *last > r.q.clone() + slack.clone() {
            return fail(format!("critical orbit does not return into [p, q] ({last})"));
        }
    }
    Ok(())
}

/// `ℛ(f) = A ∘ (p, q, fᵃ, fᵇ) ∘ A⁻¹` with `A(x) = x/q`, a Lorenz map on `[p/q, 1]`.
pub fn renormalize<S: Scalar>(map: &LorenzMap<S>, r: &Renormalization<S>) -> LorenzMap<S> {
    LorenzMap::rescaled(map.clone(), r.p.clone(), r.q.clone(), r.rtype.alpha.clone(), r.rtype.beta.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Block {
    Alpha,
    Beta,
}

/// Decomposition of the longer type's words into the shorter type's words.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingRelation {
    pub outer: RenormType,
    pub inner: RenormType,
    pub alpha_blocks: Vec<Block>,
    pub beta_blocks: Vec<Block>,
}

/// Split `word` into consecutive copies of `alpha` and `beta`. The leading
/// symbol of each block decides which word it must be.
pub fn decompose(word: &Word, alpha: &Word, beta: &Word) -> Option<Vec<Block>> {
    let mut blocks = Vec::new();
    let mut rest = word.symbols();
    while !rest.is_empty() {
        let (block, piece) = match rest[0] {
            Symbol::L => (Block::Alpha, alpha),
            Symbol::R => (Block::Beta, beta),
        };
        if piece.is_empty() || !rest.starts_with(piece.symbols()) {
            return None;
        }
        blocks.push(block);
        rest = &rest[piece.len()..];
    }
    Some(blocks)
}

/// Check that two renormalizations of one map are nested: the longer type is
/// built from the shorter one's words (`α̂ = αβ…`, `β̂ = βα…`,
/// `|α̂|, |β̂| ≥ |α| + |β|`) and its domain lies inside the shorter one's.
pub fn check_nesting<S: Scalar>(first: &Renormalization<S>, second: &Renormalization<S>) -> Result<NestingRelation> {
    let (outer, inner) = match (first.a + first.b).cmp(&(second.a + second.b)) {
        Ordering::Greater => (second, first),
        _ => (first, second),
    };
    let violation = |what: String| {
        Err(LorenzError::Consistency(format!(
            "nesting violation between {} and {}: {what}",
            outer.rtype, inner.rtype
        )))
    };
    let (alpha, beta) = (&outer.rtype.alpha, &outer.rtype.beta);
    if outer.rtype == inner.rtype {
        return Ok(NestingRelation {
            outer: outer.rtype.clone(),
            inner: inner.rtype.clone(),
            alpha_blocks: vec![Block::Alpha],
            beta_blocks: vec![Block::Beta],
        });
    }
    let Some(alpha_blocks) = decompose(&inner.rtype.alpha, alpha, beta) else {
        return violation(format!("{} is not a concatenation of {alpha} and {beta}", inner.rtype.alpha));
    };
    let Some(beta_blocks) = decompose(&inner.rtype.beta, alpha, beta) else {
        return violation(format!("{} is not a concatenation of {alpha} and {beta}", inner.rtype.beta));
    };
    if alpha_blocks.get(..2) != Some(&[Block::Alpha, Block::Beta][..]) {
        return violation(format!("{} does not begin with {alpha}{beta}", inner.rtype.alpha));
    }
    if beta_blocks.get(..2) != Some(&[Block::Beta, Block::Alpha][..]) {
        return violation(format!("{} does not begin with {beta}{alpha}", inner.rtype.beta));
    }
    let total = outer.a + outer.b;
    if inner.a < total || inner.b < total {
        return violation(format!("periods ({}, {}) shorter than {total}", inner.a, inner.b));
    }
    let slack = S::margin();
    if inner.p < outer.p.clone() - slack.clone() || inner.q > outer.q.clone() + slack {
        return violation("domains are not nested".into());
    }
    Ok(NestingRelation { outer: outer.rtype.clone(), inner: inner.rtype.clone(), alpha_blocks, beta_blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn full_branch_two_cycle() {
        let m = LorenzMap::affine(q(2, 1), q(2, 1)).unwrap();
        assert_eq!(find_periodic_boundary(&m, &w("LR")).unwrap(), Some(q(-1, 3)));
        assert_eq!(find_periodic_boundary(&m, &w("RL")).unwrap(), Some(q(1, 3)));
        // LL is not the adjacent word of f²
        assert_eq!(find_periodic_boundary(&m, &w("LL")).unwrap(), None);
    }

    #[test]
    fn no_interior_fixed_point() {
        let m = LorenzMap::quadratic(0.0, 1.0).unwrap();
        assert_eq!(find_periodic_boundary(&m, &w("L")).unwrap(), None);
    }

    #[test]
    fn full_branch_maps_are_not_renormalizable() {
        let m = LorenzMap::quadratic(1.0, 0.0).unwrap();
        assert!(detect_renormalizations(&m, 8, 8).unwrap().is_empty());
        let a = LorenzMap::affine(q(2, 1), q(2, 1)).unwrap();
        assert!(detect_renormalizations(&a, 8, 8).unwrap().is_empty());
    }

    #[test]
    fn type_parsing() {
        let t: RenormType = "LR,RL".parse().unwrap();
        assert_eq!((t.a(), t.b()), (2, 2));
        assert!("RL,RL".parse::<RenormType>().is_err());
        assert!("LRX,RL".parse::<RenormType>().is_err());
        assert!("LR".parse::<RenormType>().is_err());
    }

    #[test]
    fn decomposition() {
        let (a, b) = (w("LR"), w("RL"));
        assert_eq!(decompose(&w("LRRL"), &a, &b), Some(vec![Block::Alpha, Block::Beta]));
        assert_eq!(decompose(&w("LRRLRL"), &a, &b), Some(vec![Block::Alpha, Block::Beta, Block::Beta]));
        assert_eq!(decompose(&w("LLRL"), &a, &b), None);
    }
}
