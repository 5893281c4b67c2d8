//! Checkable form of the branch correspondence between two maps with equal
//! truncated kneading: the order-preserving matching of their branch
//! partitions must preserve words and cutting times at every depth.

use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::map::LorenzMap;
use crate::scalar::Scalar;
use crate::symbolic::branches::branch_partitions;
use crate::symbolic::kneading::kneading;
use crate::symbolic::Word;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Discrepancy {
    BranchCount { depth: usize, left: usize, right: usize },
    Word { depth: usize, index: usize, left: Word, right: Word },
    CuttingTimes {
        depth: usize,
        index: usize,
        left: (Option<usize>, Option<usize>),
        right: (Option<usize>, Option<usize>),
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    pub depth: usize,
    /// `|𝔹ₖ|` for `k = 1..=depth`, shared by both maps when verified.
    pub branch_counts: Vec<usize>,
    pub discrepancy: Option<Discrepancy>,
}

impl CorrespondenceReport {
    pub fn verified(&self) -> bool {
        self.discrepancy.is_none()
    }
}

/// Compare `𝔹ₖ(f)` and `𝔹ₖ(g)` for all `k ≤ n`, matching branches by order.
///
/// Returns `HypothesisNotMet` when the kneading pairs (including exact hits)
/// differ; a failed verification is reported in the returned report instead.
pub fn check_combinatorial_equivalence<S: Scalar>(
    f: &LorenzMap<S>,
    g: &LorenzMap<S>,
    n: usize,
) -> Result<CorrespondenceReport> {
    let kf = kneading(f, n)?;
    let kg = kneading(g, n)?;
    if let Some(i) = kf.first_mismatch(&kg) {
        return Err(LorenzError::HypothesisNotMet(format!(
            "kneading data differ at index {i}: ({}, {}) vs ({}, {})",
            kf.k_minus, kf.k_plus, kg.k_minus, kg.k_plus
        )));
    }
    let pf = branch_partitions(f, n)?;
    let pg = branch_partitions(g, n)?;
    let mut branch_counts = Vec::with_capacity(n);
    for (k, (a, b)) in pf.iter().zip(&pg).enumerate() {
        let depth = k + 1;
        if a.len() != b.len() {
            return Ok(CorrespondenceReport {
                depth: n,
                branch_counts,
                discrepancy: Some(Discrepancy::BranchCount { depth, left: a.len(), right: b.len() }),
            });
        }
        for (index, (x, y)) in a.branches.iter().zip(&b.branches).enumerate() {
            let discrepancy = if x.word != y.word {
                Some(Discrepancy::Word { depth, index, left: x.word.clone(), right: y.word.clone() })
            } else if (x.cut_l, x.cut_r) != (y.cut_l, y.cut_r) {
                Some(Discrepancy::CuttingTimes { depth, index, left: (x.cut_l, x.cut_r), right: (y.cut_l, y.cut_r) })
            } else {
                None
            };
            if discrepancy.is_some() {
                return Ok(CorrespondenceReport { depth: n, branch_counts, discrepancy });
            }
        }
        branch_counts.push(a.len());
    }
    Ok(CorrespondenceReport { depth: n, branch_counts, discrepancy: None })
}
