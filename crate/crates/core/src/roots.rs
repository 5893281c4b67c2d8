//! Bisection on monotone functions.

use crate::scalar::Scalar;

/// Outcome of a sign-change search.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracketed<S> {
    /// Largest point known with `f ≤ 0` (for increasing `f`).
    pub below: S,
    /// Smallest point known with `f ≥ 0`.
    pub above: S,
}

impl<S: Scalar> Bracketed<S> {
    pub fn mid(&self) -> S {
        S::midpoint(&self.below, &self.above)
    }
}

/// Shrink `[lo, hi]` around the sign change of `f`, where `f(lo) ≤ 0 ≤ f(hi)`
/// is assumed (`f` need not be increasing elsewhere, only sign-separated).
/// Stops at width `tol`, when the midpoint stops moving, or after `max_iter`.
pub fn bisect<S, F>(f: F, lo: S, hi: S, tol: &S, max_iter: usize) -> Bracketed<S>
where
    S: Scalar,
    F: Fn(&S) -> S,
{
    let mut below = lo;
    let mut above = hi;
    for _ in 0..max_iter {
        if above.clone() - below.clone() <= *tol {
            break;
        }
        let mid = S::midpoint(&below, &above);
        if mid == below || mid == above {
            break;
        }
        let v = f(&mid);
        if v.is_zero() {
            return Bracketed { below: mid.clone(), above: mid };
        }
        if v < S::zero() {
            below = mid;
        } else {
            above = mid;
        }
    }
    Bracketed { below, above }
}

/// Root of an affine function from two evaluations; exact for exact scalars.
pub fn secant_root<S: Scalar>(x0: &S, f0: &S, x1: &S, f1: &S) -> Option<S> {
    let df = f1.clone() - f0.clone();
    if df.is_zero() {
        return None;
    }
    Some(x0.clone() - f0.clone() * (x1.clone() - x0.clone()) / df)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn sqrt_two() {
        let b = bisect(|x: &f64| x * x - 2.0, 0.0, 2.0, &1e-15, 200);
        assert!((b.mid() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn exact_hit_stops() {
        let b = bisect(|x: &f64| x - 0.5, 0.0, 1.0, &1e-15, 200);
        assert_eq!(b.mid(), 0.5);
    }

    #[test]
    fn rational_secant_is_exact() {
        let r = |n, d| BigRational::ratio(n, d);
        // 4x + 1 - x = 3x + 1
        let root = secant_root(&r(-1, 1), &r(-2, 1), &r(0, 1), &r(1, 1)).unwrap();
        assert_eq!(root, r(-1, 3));
    }
}
