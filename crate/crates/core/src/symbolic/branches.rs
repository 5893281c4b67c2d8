//! Branches of `fⁿ`: maximal intervals of monotonicity, their words and
//! cutting times.
//!
//! Partitions are built by refinement. Each branch carries its image
//! `fᵏ(I)`; when that image straddles 0 the branch is cut at the preimage of
//! 0, and the new endpoint remembers the time `k` at which it was created.
//! That bookkeeping is exactly the cutting-time data.

use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::map::LorenzMap;
use crate::roots::bisect;
use crate::scalar::Scalar;
use crate::symbolic::kneading::CriticalSide;
use crate::symbolic::{Symbol, Word};

pub const DEFAULT_MAX_DEPTH: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch<S> {
    pub lo: S,
    pub hi: S,
    pub word: Word,
    /// `lₙ(I)`: the time at which `hi` was mapped to 0; `None` when `hi` is `Q`.
    pub cut_l: Option<usize>,
    /// `rₙ(I)`: the time at which `lo` was mapped to 0; `None` when `lo` is `P`.
    pub cut_r: Option<usize>,
    /// Endpoints of `fⁿ(I)`.
    pub image_lo: S,
    pub image_hi: S,
}

impl<S: Scalar> Branch<S> {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn length(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> S {
        S::midpoint(&self.lo, &self.hi)
    }

    pub fn contains(&self, x: &S) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Side of 0 the current image lies on, or `None` when 0 is interior to it.
    fn image_side(&self) -> Option<Symbol> {
        let zero = S::zero();
        if self.image_lo < zero && self.image_hi > zero {
            None
        } else if self.image_hi <= zero && self.image_lo < self.image_hi {
            Some(Symbol::L)
        } else if self.image_lo >= zero && self.image_lo < self.image_hi {
            Some(Symbol::R)
        } else if self.image_hi <= zero {
            // collapsed image; the upper endpoint is approached from the left
            Some(Symbol::L)
        } else {
            Some(Symbol::R)
        }
    }

    /// Point of the branch whose `fᵏ` image is 0, for `k = depth`.
    fn zero_preimage(&self, map: &LorenzMap<S>) -> Result<S> {
        if let Some(x) = exact_preimage(map, &self.word) {
            return Ok(x);
        }
        let f = |x: &S| map.compose(&self.word, x);
        let slack = S::margin() * map.scale();
        let (flo, fhi) = (f(&self.lo), f(&self.hi));
        if flo > slack || fhi < -slack.clone() {
            return Err(LorenzError::Consistency(format!(
                "no sign change of f^{} on [{}, {}] (values {flo}, {fhi})",
                self.depth(),
                self.lo,
                self.hi
            )));
        }
        let tol = S::bisect_tol() * map.scale();
        Ok(bisect(f, self.lo.clone(), self.hi.clone(), &tol, 400).mid())
    }

    /// Branches of `f^{k+1}` inside this branch of `fᵏ`.
    pub(crate) fn refine(&self, map: &LorenzMap<S>) -> Result<Vec<Branch<S>>> {
        let k = self.depth();
        let advance = |sym: Symbol, lo: &S, hi: &S| -> (S, S) {
            let a = map.snap(map.clamp(map.branch(sym, lo)));
            let b = map.snap(map.clamp(map.branch(sym, hi)));
            (a, b)
        };
        match self.image_side() {
            Some(sym) => {
                let (image_lo, image_hi) = advance(sym, &self.image_lo, &self.image_hi);
                Ok(vec![Branch {
                    lo: self.lo.clone(),
                    hi: self.hi.clone(),
                    word: self.word.extended(sym),
                    cut_l: self.cut_l,
                    cut_r: self.cut_r,
                    image_lo,
                    image_hi,
                }])
            }
            None => {
                let x = self.zero_preimage(map)?;
                let (llo, lhi) = advance(Symbol::L, &self.image_lo, &S::zero());
                let (rlo, rhi) = advance(Symbol::R, &S::zero(), &self.image_hi);
                Ok(vec![
                    Branch {
                        lo: self.lo.clone(),
                        hi: x.clone(),
                        word: self.word.extended(Symbol::L),
                        cut_l: Some(k),
                        cut_r: self.cut_r,
                        image_lo: llo,
                        image_hi: lhi,
                    },
                    Branch {
                        lo: x,
                        hi: self.hi.clone(),
                        word: self.word.extended(Symbol::R),
                        cut_l: self.cut_l,
                        cut_r: Some(k),
                        image_lo: rlo,
                        image_hi: rhi,
                    },
                ])
            }
        }
    }
}

/// Preimage of 0 through the branch inverses, when the map has closed-form inverses.
fn exact_preimage<S: Scalar>(map: &LorenzMap<S>, word: &Word) -> Option<S> {
    word.symbols().iter().rev().try_fold(S::zero(), |y, &sym| map.branch_inverse(sym, &y))
}

/// `𝔹ₙ(f)` ordered left to right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchPartition<S> {
    pub depth: usize,
    pub branches: Vec<Branch<S>>,
}

impl<S: Scalar> BranchPartition<S> {
    /// The trivial partition `{[P, Q]}` of `f⁰`.
    pub fn identity(map: &LorenzMap<S>) -> Self {
        BranchPartition {
            depth: 0,
            branches: vec![Branch {
                lo: map.lo().clone(),
                hi: map.hi().clone(),
                word: Word::empty(),
                cut_l: None,
                cut_r: None,
                image_lo: map.lo().clone(),
                image_hi: map.hi().clone(),
            }],
        }
    }

    pub fn refine(&self, map: &LorenzMap<S>) -> Result<Self> {
        let mut branches = Vec::with_capacity(self.branches.len() * 2);
        for b in &self.branches {
            branches.extend(b.refine(map)?);
        }
        Ok(BranchPartition { depth: self.depth + 1, branches })
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Longest branch.
    pub fn mesh(&self) -> S {
        self.branches.iter().map(Branch::length).fold(S::zero(), |m, l| if l > m { l } else { m })
    }

    pub fn find_word(&self, word: &Word) -> Option<&Branch<S>> {
        self.branches.iter().find(|b| &b.word == word)
    }

    /// Branch with `∂₊I = 0` (for `Minus`) or `∂₋I = 0` (for `Plus`).
    pub fn adjacent(&self, side: CriticalSide) -> Option<&Branch<S>> {
        match side {
            CriticalSide::Minus => self.branches.iter().find(|b| b.hi.is_zero()),
            CriticalSide::Plus => self.branches.iter().find(|b| b.lo.is_zero()),
        }
    }
}

fn check_depth(n: usize, max_depth: usize) -> Result<()> {
    if n == 0 {
        return Err(LorenzError::Precondition("partition depth must be at least 1".into()));
    }
    if n > max_depth {
        return Err(LorenzError::Precondition(format!("partition depth {n} exceeds the cap {max_depth}")));
    }
    Ok(())
}

/// `𝔹ₙ(f)` with the default depth cap.
pub fn branch_partition<S: Scalar>(map: &LorenzMap<S>, n: usize) -> Result<BranchPartition<S>> {
    branch_partition_capped(map, n, DEFAULT_MAX_DEPTH)
}

pub fn branch_partition_capped<S: Scalar>(map: &LorenzMap<S>, n: usize, max_depth: usize) -> Result<BranchPartition<S>> {
    check_depth(n, max_depth)?;
    let mut part = BranchPartition::identity(map);
    for _ in 0..n {
        part = part.refine(map)?;
    }
    Ok(part)
}

/// `𝔹₁(f), …, 𝔹ₙ(f)`.
pub fn branch_partitions<S: Scalar>(map: &LorenzMap<S>, n: usize) -> Result<Vec<BranchPartition<S>>> {
    check_depth(n, DEFAULT_MAX_DEPTH)?;
    let mut out = Vec::with_capacity(n);
    let mut part = BranchPartition::identity(map);
    for _ in 0..n {
        part = part.refine(map)?;
        out.push(part.clone());
    }
    Ok(out)
}

/// The single branch of `fⁿ` adjacent to 0 on the given side, built without
/// refining the rest of the partition.
pub fn adjacent_branch<S: Scalar>(map: &LorenzMap<S>, side: CriticalSide, n: usize) -> Result<Branch<S>> {
    if n == 0 {
        return Err(LorenzError::Precondition("branch depth must be at least 1".into()));
    }
    let mut branch = BranchPartition::identity(map).branches.remove(0);
    for _ in 0..n {
        let children = branch.refine(map)?;
        let pick = match side {
            CriticalSide::Minus => children.into_iter().rev().find(|b| b.lo < S::zero()),
            CriticalSide::Plus => children.into_iter().find(|b| b.hi > S::zero()),
        };
        branch = pick.ok_or_else(|| LorenzError::Consistency("adjacent branch vanished".into()))?;
    }
    Ok(branch)
}

/// `(lₙ(I), rₙ(I))` read from the endpoint bookkeeping.
pub fn cutting_times<S: Scalar>(branch: &Branch<S>) -> (Option<usize>, Option<usize>) {
    (branch.cut_l, branch.cut_r)
}

/// Longest branch of `fⁿ`.
pub fn partition_mesh<S: Scalar>(map: &LorenzMap<S>, n: usize) -> Result<S> {
    Ok(branch_partition(map, n)?.mesh())
}
