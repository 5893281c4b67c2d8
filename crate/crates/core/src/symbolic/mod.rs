//! Symbolic dynamics: words, kneading pairs, branch partitions and cutting times.

pub mod branches;
pub mod equivalence;
pub mod kneading;
pub mod word;

pub use branches::{
    adjacent_branch, branch_partition, branch_partition_capped, branch_partitions, cutting_times, partition_mesh,
    Branch, BranchPartition, DEFAULT_MAX_DEPTH,
};
pub use equivalence::{check_combinatorial_equivalence, CorrespondenceReport, Discrepancy};
pub use kneading::{kneading, CriticalSide, ExactHit, KneadingPair};
pub use word::{compare_words, Symbol, Word};
