use serde::Serialize;

use crate::error::{LorenzError, Result};
use crate::map::{LorenzMap, Side, SignedPoint};
use crate::scalar::Scalar;
use crate::symbolic::{Symbol, Word};

/// Which critical orbit an exact hit belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CriticalSide {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExactHit {
    pub side: CriticalSide,
    pub index: usize,
}

/// Truncated kneading invariant `(K⁻ₙ, K⁺ₙ)` together with the iterates
/// `1 ≤ i ≤ n` at which a critical orbit returns exactly to 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KneadingPair {
    pub depth: usize,
    pub k_minus: Word,
    pub k_plus: Word,
    pub exact_hits: Vec<ExactHit>,
}

impl KneadingPair {
    /// First index where the words or the exact-hit patterns differ.
    pub fn first_mismatch(&self, other: &KneadingPair) -> Option<usize> {
        let words = [
            self.k_minus.first_difference(&other.k_minus),
            self.k_plus.first_difference(&other.k_plus),
        ]
        .into_iter()
        .flatten()
        .min();
        let hits = self
            .exact_hits
            .iter()
            .filter(|h| !other.exact_hits.contains(h))
            .chain(other.exact_hits.iter().filter(|h| !self.exact_hits.contains(h)))
            .map(|h| h.index)
            .min();
        match (words, hits) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b).or_else(|| {
                (self.k_minus.len() != other.k_minus.len()).then(|| self.depth.min(other.depth))
            }),
        }
    }
}

/// Symbols of the critical orbit `0∓, f(0∓), …, fⁿ⁻¹(0∓)` and the exact hits up to `fⁿ`.
fn critical_itinerary<S: Scalar>(map: &LorenzMap<S>, seed: SignedPoint<S>, n: usize) -> Result<(Word, Vec<usize>)> {
    let orbit = map.orbit(&seed, n)?;
    let word = orbit[..n]
        .iter()
        .map(|p| p.symbol().ok_or_else(|| LorenzError::Consistency("critical orbit lost its side".into())))
        .collect::<Result<Word>>()?;
    let hits = orbit.iter().enumerate().skip(1).filter(|(_, p)| p.value.is_zero()).map(|(i, _)| i).collect();
    Ok((word, hits))
}

pub fn kneading<S: Scalar>(map: &LorenzMap<S>, n: usize) -> Result<KneadingPair> {
    if n == 0 {
        return Err(LorenzError::Precondition("kneading depth must be at least 1".into()));
    }
    let (k_minus, hits_minus) = critical_itinerary(map, SignedPoint::left_of_zero(), n)?;
    let (k_plus, hits_plus) = critical_itinerary(map, SignedPoint::right_of_zero(), n)?;
    debug_assert_eq!(k_minus.first(), Some(Symbol::L));
    debug_assert_eq!(k_plus.first(), Some(Symbol::R));
    let mut exact_hits: Vec<ExactHit> = hits_minus
        .into_iter()
        .map(|index| ExactHit { side: CriticalSide::Minus, index })
        .chain(hits_plus.into_iter().map(|index| ExactHit { side: CriticalSide::Plus, index }))
        .collect();
    exact_hits.sort();
    Ok(KneadingPair { depth: n, k_minus, k_plus, exact_hits })
}

/// Seed side for a critical orbit.
pub fn critical_seed<S: Scalar>(side: CriticalSide) -> SignedPoint<S> {
    match side {
        CriticalSide::Minus => SignedPoint::new(S::zero(), Side::FromLeft),
        CriticalSide::Plus => SignedPoint::new(S::zero(), Side::FromRight),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn fixed_critical_value() {
        let m = LorenzMap::quadratic(1.0, 1.0).unwrap();
        let k = kneading(&m, 6).unwrap();
        assert_eq!(k.k_minus, w("LRRRRR"));
        assert_eq!(k.k_plus, w("RRRRRR"));
        assert_eq!(k.exact_hits.len(), 6);
        assert!(k.exact_hits.iter().all(|h| h.side == CriticalSide::Plus));
    }

    #[test]
    fn left_inheritance_at_zero() {
        let m = LorenzMap::quadratic(0.0, 1.0).unwrap();
        assert_eq!(kneading(&m, 4).unwrap().k_minus, w("LLLL"));
    }

    #[test]
    fn exact_affine_kneading() {
        let m = LorenzMap::affine(BigRational::ratio(3, 2), BigRational::ratio(3, 2)).unwrap();
        let k = kneading(&m, 6).unwrap();
        assert_eq!(k.k_minus, w("LRRLRL"));
        assert_eq!(k.k_plus, w("RLLRLR"));
        assert!(k.exact_hits.is_empty());
    }

    #[test]
    fn zero_depth_rejected() {
        let m = LorenzMap::quadratic(0.5, 0.5).unwrap();
        assert!(matches!(kneading(&m, 0), Err(LorenzError::Precondition(_))));
    }

    #[test]
    fn mismatch_index() {
        let a = kneading(&LorenzMap::affine(1.5, 1.5).unwrap(), 6).unwrap();
        let b = kneading(&LorenzMap::affine(2.0, 2.0).unwrap(), 6).unwrap();
        assert_eq!(a.first_mismatch(&a), None);
        let i = a.first_mismatch(&b).unwrap();
        assert!(i <= 3, "{i}");
    }
}
