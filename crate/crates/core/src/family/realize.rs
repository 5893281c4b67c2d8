//! Constructive search for a family parameter with a prescribed truncated
//! kneading pair: recursive quadrisection of `[0, 1]²` pruned by the cone
//! monotonicity of kneading. The lower-left corner of a rectangle bounds
//! every kneading inside it from below and the upper-right corner from above.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::family::param::{family_map, ParamPoint};
use crate::symbolic::{kneading, CriticalSide, Symbol, Word};

pub const MAX_REALIZE_DEPTH: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizeOptions {
    /// Rectangles are not split below side `2^-min_size_log2`.
    pub min_size_log2: u32,
    pub node_budget: usize,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { min_size_log2: 40, node_budget: 1 << 20 }
    }
}

/// A rectangle `[s0, s1] × [t0, t1]` excluded by a corner bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrunedRect {
    pub s0: f64,
    pub s1: f64,
    pub t0: f64,
    pub t1: f64,
    pub side: CriticalSide,
    /// `true`: the target lies below the lower-left corner's word.
    pub below: bool,
}

/// Record of an unsuccessful search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PruningCertificate {
    pub nodes: usize,
    pub pruned: usize,
    /// Rectangles at the size floor that were neither pruned nor matched.
    pub unresolved: usize,
    pub budget_exhausted: bool,
    /// The pruned rectangles cover the square: the target is not realized.
    pub complete: bool,
    /// The first pruned rectangles, coarsest first.
    pub sample: Vec<PrunedRect>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Realization {
    Found { s: f64, t: f64 },
    None { certificate: PruningCertificate },
}

impl Realization {
    pub fn point(&self) -> Option<ParamPoint> {
        match self {
            Realization::Found { s, t } => Some(ParamPoint { s: *s, t: *t }),
            Realization::None { .. } => None,
        }
    }
}

const SAMPLE_LIMIT: usize = 64;

pub fn realize_kneading(target_minus: &Word, target_plus: &Word) -> Result<Realization> {
    realize_kneading_with(target_minus, target_plus, &RealizeOptions::default())
}

pub fn realize_kneading_with(target_minus: &Word, target_plus: &Word, opts: &RealizeOptions) -> Result<Realization> {
    let n = target_minus.len();
    if n == 0 || n != target_plus.len() || n > MAX_REALIZE_DEPTH {
        return Err(LorenzError::Precondition(format!(
            "targets need equal length in 1..={MAX_REALIZE_DEPTH}, got {} and {}",
            n,
            target_plus.len()
        )));
    }
    if target_minus.first() != Some(Symbol::L) || target_plus.first() != Some(Symbol::R) {
        return Err(LorenzError::Precondition("targets must start with L and R respectively".into()));
    }
    if opts.min_size_log2 > 52 {
        return Err(LorenzError::Precondition("size floor below double precision".into()));
    }
    let res = opts.min_size_log2;
    let unit = (1u64 << res) as f64;
    let mut cache: HashMap<(u64, u64), (Word, Word)> = HashMap::new();
    let mut knead_at = |i: u64, j: u64| -> Result<(Word, Word)> {
        if let Some(k) = cache.get(&(i, j)) {
            return Ok(k.clone());
        }
        let pt = ParamPoint::new(i as f64 / unit, j as f64 / unit)?;
        let k = kneading(&family_map(&pt), n)?;
        let pair = (k.k_minus, k.k_plus);
        cache.insert((i, j), pair.clone());
        Ok(pair)
    };
    let matches = |k: &(Word, Word)| &k.0 == target_minus && &k.1 == target_plus;

    // (i0, j0, level): side 2^(res - level) in grid units
    let mut queue: VecDeque<(u64, u64, u32)> = VecDeque::from([(0, 0, 0)]);
    let mut cert = PruningCertificate {
        nodes: 0,
        pruned: 0,
        unresolved: 0,
        budget_exhausted: false,
        complete: false,
        sample: Vec::new(),
    };
    while let Some((i0, j0, level)) = queue.pop_front() {
        if cert.nodes >= opts.node_budget {
            cert.budget_exhausted = true;
            break;
        }
        cert.nodes += 1;
        let size = 1u64 << (res - level);
        let (i1, j1) = (i0 + size, j0 + size);
        let lo = knead_at(i0, j0)?;
        let hi = knead_at(i1, j1)?;
        let found = |i: u64, j: u64| Realization::Found { s: i as f64 / unit, t: j as f64 / unit };
        if matches(&lo) {
            return Ok(found(i0, j0));
        }
        if matches(&hi) {
            return Ok(found(i1, j1));
        }
        let exclusion = [
            (CriticalSide::Minus, target_minus < &lo.0, target_minus > &hi.0),
            (CriticalSide::Plus, target_plus < &lo.1, target_plus > &hi.1),
        ]
        .into_iter()
        .find(|(_, below, above)| *below || *above);
        if let Some((side, below, _)) = exclusion {
            cert.pruned += 1;
            if cert.sample.len() < SAMPLE_LIMIT {
                cert.sample.push(PrunedRect {
                    s0: i0 as f64 / unit,
                    s1: i1 as f64 / unit,
                    t0: j0 as f64 / unit,
                    t1: j1 as f64 / unit,
                    side,
                    below,
                });
            }
            continue;
        }
        if level == res {
            cert.unresolved += 1;
            continue;
        }
        let half = size / 2;
        if matches(&knead_at(i0 + half, j0 + half)?) {
            return Ok(found(i0 + half, j0 + half));
        }
        for (di, dj) in [(0, 0), (half, 0), (0, half), (half, half)] {
            queue.push_back((i0 + di, j0 + dj, level + 1));
        }
    }
    cert.complete = !cert.budget_exhausted && cert.unresolved == 0 && queue.is_empty();
    Ok(Realization::None { certificate: cert })
}
