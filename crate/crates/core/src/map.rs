//! Lorenz maps: two increasing branches on `[P, 0]` and `[0, Q]` that fix the
//! endpoints of the domain and jump at the origin.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{LorenzError, Result};
use crate::scalar::Scalar;
use crate::symbolic::{Symbol, Word};

/// Direction from which a point at the discontinuity is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    FromLeft,
    FromRight,
    Interior,
}

/// A point of the domain, remembering the one-sided limit when it sits on 0.
///
/// Well formed iff `side != Interior` exactly when `value == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedPoint<S> {
    pub value: S,
    pub side: Side,
}

impl<S: Scalar> SignedPoint<S> {
    pub fn new(value: S, side: Side) -> Self {
        SignedPoint { value, side }
    }

    pub fn interior(value: S) -> Self {
        SignedPoint { value, side: Side::Interior }
    }

    /// `0₋`, the left limit at the discontinuity.
    pub fn left_of_zero() -> Self {
        SignedPoint { value: S::zero(), side: Side::FromLeft }
    }

    /// `0₊`, the right limit at the discontinuity.
    pub fn right_of_zero() -> Self {
        SignedPoint { value: S::zero(), side: Side::FromRight }
    }

    pub fn is_well_formed(&self) -> bool {
        (self.side != Side::Interior) == self.value.is_zero()
    }

    /// Itinerary symbol, `None` for an interior point sitting on 0.
    pub fn symbol(&self) -> Option<Symbol> {
        if self.value < S::zero() {
            Some(Symbol::L)
        } else if self.value > S::zero() {
            Some(Symbol::R)
        } else {
            match self.side {
                Side::FromLeft => Some(Symbol::L),
                Side::FromRight => Some(Symbol::R),
                Side::Interior => None,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind<S> {
    /// Left branch `−1 + (1+s)(1−x²)`, right branch `1 − (2−t)(1−x²)` on `[−1, 1]`.
    Quadratic { s: S, t: S },
    /// Left branch `−1 + k₋(x+1)`, right branch `1 − k₊(1−x)` on `[−1, 1]`.
    Affine { k_minus: S, k_plus: S },
    /// First-return map of a parent rescaled by `x ↦ x/q`.
    Rescaled(Arc<Rescaling<S>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rescaling<S> {
    pub parent: LorenzMap<S>,
    pub p: S,
    pub q: S,
    pub alpha: Word,
    pub beta: Word,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LorenzMap<S> {
    lo: S,
    hi: S,
    exponent: f64,
    kind: MapKind<S>,
}

impl<S: Scalar> LorenzMap<S> {
    /// Member of the monotone quadratic family, `(s, t) ∈ [0, 1]²`.
    pub fn quadratic(s: S, t: S) -> Result<Self> {
        let unit = |v: &S| *v >= S::zero() && *v <= S::one();
        if !unit(&s) || !unit(&t) {
            return Err(LorenzError::Domain(format!(
                "quadratic family parameters must lie in [0,1], got s={s}, t={t}"
            )));
        }
        Ok(LorenzMap { lo: -S::one(), hi: S::one(), exponent: 2.0, kind: MapKind::Quadratic { s, t } })
    }

    /// Piecewise affine map with slopes `k₋, k₊ ∈ (1, 2]`.
    pub fn affine(k_minus: S, k_plus: S) -> Result<Self> {
        let ok = |k: &S| *k > S::one() && *k <= S::two();
        if !ok(&k_minus) || !ok(&k_plus) {
            return Err(LorenzError::Domain(format!(
                "affine slopes must lie in (1,2], got k-={k_minus}, k+={k_plus}"
            )));
        }
        Ok(LorenzMap { lo: -S::one(), hi: S::one(), exponent: 1.0, kind: MapKind::Affine { k_minus, k_plus } })
    }

    /// Rescaled first-return map on `[p/q, 1]` built from the branches of
    /// `parent` with words `alpha` (left) and `beta` (right).
    pub(crate) fn rescaled(parent: LorenzMap<S>, p: S, q: S, alpha: Word, beta: Word) -> Self {
        let lo = p.clone() / q.clone();
        let exponent = parent.exponent;
        LorenzMap {
            lo,
            hi: S::one(),
            exponent,
            kind: MapKind::Rescaled(Arc::new(Rescaling { parent, p, q, alpha, beta })),
        }
    }

    pub fn lo(&self) -> &S {
        &self.lo
    }

    pub fn hi(&self) -> &S {
        &self.hi
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn kind(&self) -> &MapKind<S> {
        &self.kind
    }

    pub fn is_piecewise_affine(&self) -> bool {
        matches!(self.kind, MapKind::Affine { .. })
    }

    /// `max(|P|, Q)`, the length scale for tolerances.
    pub fn scale(&self) -> S {
        let a = self.lo.abs();
        if a > self.hi.abs() {
            a
        } else {
            self.hi.abs()
        }
    }

    pub(crate) fn zero_threshold(&self) -> S {
        S::zero_tol() * self.scale()
    }

    /// Snap a value within the zero threshold onto 0.
    pub(crate) fn snap(&self, y: S) -> S {
        if !S::EXACT && y.abs() <= self.zero_threshold() {
            S::zero()
        } else {
            y
        }
    }

    pub(crate) fn clamp(&self, y: S) -> S {
        if y < self.lo {
            self.lo.clone()
        } else if y > self.hi {
            self.hi.clone()
        } else {
            y
        }
    }

    /// Branch formula evaluated without domain checks. Continuous on the closed
    /// half-domain, so `branch(L, 0)` is `f(0₋)`.
    pub fn branch(&self, sym: Symbol, x: &S) -> S {
        let one = S::one();
        match (&self.kind, sym) {
            (MapKind::Quadratic { s, .. }, Symbol::L) => {
                -one.clone() + (one.clone() + s.clone()) * (one - x.clone() * x.clone())
            }
            (MapKind::Quadratic { t, .. }, Symbol::R) => {
                one.clone() - (S::two() - t.clone()) * (one - x.clone() * x.clone())
            }
            (MapKind::Affine { k_minus, .. }, Symbol::L) => -one.clone() + k_minus.clone() * (x.clone() + one),
            (MapKind::Affine { k_plus, .. }, Symbol::R) => one.clone() - k_plus.clone() * (one - x.clone()),
            (MapKind::Rescaled(r), sym) => {
                let word = match sym {
                    Symbol::L => &r.alpha,
                    Symbol::R => &r.beta,
                };
                r.parent.compose(word, &(r.q.clone() * x.clone())) / r.q.clone()
            }
        }
    }

    /// Derivative of a branch formula.
    pub fn branch_derivative(&self, sym: Symbol, x: &S) -> S {
        match (&self.kind, sym) {
            (MapKind::Quadratic { s, .. }, Symbol::L) => -S::two() * x.clone() * (S::one() + s.clone()),
            (MapKind::Quadratic { t, .. }, Symbol::R) => S::two() * x.clone() * (S::two() - t.clone()),
            (MapKind::Affine { k_minus, .. }, Symbol::L) => k_minus.clone(),
            (MapKind::Affine { k_plus, .. }, Symbol::R) => k_plus.clone(),
            (MapKind::Rescaled(r), sym) => {
                let word = match sym {
                    Symbol::L => &r.alpha,
                    Symbol::R => &r.beta,
                };
                r.parent.compose_derivative(word, &(r.q.clone() * x.clone()))
            }
        }
    }

    /// Inverse of an affine branch; `None` for the other kinds.
    pub fn branch_inverse(&self, sym: Symbol, y: &S) -> Option<S> {
        let one = S::one();
        match (&self.kind, sym) {
            (MapKind::Affine { k_minus, .. }, Symbol::L) => Some((y.clone() + one.clone()) / k_minus.clone() - one),
            (MapKind::Affine { k_plus, .. }, Symbol::R) => Some(one.clone() - (one - y.clone()) / k_plus.clone()),
            _ => None,
        }
    }

    /// Apply the branches named by `word` in order, i.e. `f^n` restricted to
    /// the branch of `f^n` with that word, continuously extended to its closure.
    pub fn compose(&self, word: &Word, x: &S) -> S {
        word.symbols().iter().fold(x.clone(), |y, &sym| {
            let z = self.branch(sym, &y);
            if S::EXACT {
                z
            } else {
                self.clamp(z)
            }
        })
    }

    /// Derivative of [`LorenzMap::compose`] by the chain rule.
    pub fn compose_derivative(&self, word: &Word, x: &S) -> S {
        let mut y = x.clone();
        let mut d = S::one();
        for &sym in word.symbols() {
            d = d * self.branch_derivative(sym, &y);
            y = self.branch(sym, &y);
            if !S::EXACT {
                y = self.clamp(y);
            }
        }
        d
    }

    fn check_domain(&self, x: &S) -> Result<()> {
        if *x < self.lo || *x > self.hi || x.is_degenerate() {
            return Err(LorenzError::Domain(format!(
                "point {x} outside [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    /// `f(x)`, using the one-sided limit when `x` is 0.
    pub fn eval(&self, x: &SignedPoint<S>) -> Result<S> {
        self.check_domain(&x.value)?;
        let sym = x.symbol().ok_or_else(|| {
            LorenzError::Precondition("evaluation at 0 needs a one-sided approach".into())
        })?;
        Ok(self.branch(sym, &x.value))
    }

    /// One iteration step with zero snapping and side inheritance.
    pub fn step(&self, x: &SignedPoint<S>) -> Result<SignedPoint<S>> {
        self.step_inheriting(x, x.side)
    }

    /// One step along an orbit approached from `side`: a landing on 0 takes
    /// that side, since every iterate of a one-sided limit is a one-sided
    /// limit from the same direction.
    pub fn step_inheriting(&self, x: &SignedPoint<S>, side: Side) -> Result<SignedPoint<S>> {
        let y = self.eval(x)?;
        self.settle(y, side, 1)
    }

    fn settle(&self, y: S, side: Side, step: usize) -> Result<SignedPoint<S>> {
        let slack = S::margin() * S::lit(10.0) * self.scale();
        if y.is_degenerate() || y < self.lo.clone() - slack.clone() || y > self.hi.clone() + slack {
            return Err(LorenzError::Escape { step, value: y.approx() });
        }
        let y = self.snap(self.clamp(y));
        if y.is_zero() {
            Ok(SignedPoint::new(y, side))
        } else {
            Ok(SignedPoint::interior(y))
        }
    }

    /// `x₀ = start, …, xₙ`. An iterate landing on 0 keeps the seed's side.
    pub fn orbit(&self, start: &SignedPoint<S>, n: usize) -> Result<Vec<SignedPoint<S>>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(start.clone());
        let mut x = start.clone();
        for i in 1..=n {
            let y = self.eval(&x)?;
            x = self.settle(y, start.side, i)?;
            out.push(x.clone());
        }
        Ok(out)
    }

    /// `(f(0₋), f(0₊))`.
    pub fn critical_values(&self) -> (S, S) {
        (self.branch(Symbol::L, &S::zero()), self.branch(Symbol::R, &S::zero()))
    }

    /// Schwarzian derivative `f‴/f′ − (3/2)(f″/f′)²` for the two closed-form kinds.
    pub fn schwarzian(&self, x: &S) -> Result<S> {
        if x.is_zero() || *x <= self.lo || *x >= self.hi {
            return Err(LorenzError::Undefined(format!("Schwarzian needs a branch interior point, got {x}")));
        }
        let sym = if *x < S::zero() { Symbol::L } else { Symbol::R };
        let (d1, d2, d3) = match &self.kind {
            MapKind::Quadratic { s, t } => {
                let c = match sym {
                    Symbol::L => -(S::one() + s.clone()),
                    Symbol::R => S::two() - t.clone(),
                };
                // branch = const + c·x²
                (S::two() * c.clone() * x.clone(), S::two() * c, S::zero())
            }
            MapKind::Affine { .. } => (self.branch_derivative(sym, x), S::zero(), S::zero()),
            MapKind::Rescaled(_) => {
                return Err(LorenzError::Undefined("Schwarzian of rescaled maps is not tracked".into()))
            }
        };
        if d1.is_zero() {
            return Err(LorenzError::Undefined(format!("derivative vanishes at {x}")));
        }
        let ratio = d2 / d1.clone();
        Ok(d3 / d1 - S::lit(1.5) * ratio.clone() * ratio)
    }

    /// Check the defining properties on `samples` points per branch: fixed
    /// endpoints, strictly increasing branches and critical values in the domain.
    pub fn validate(&self, samples: usize) -> Result<()> {
        let tol = S::margin() * self.scale();
        let fixed_lo = self.branch(Symbol::L, &self.lo) - self.lo.clone();
        let fixed_hi = self.branch(Symbol::R, &self.hi) - self.hi.clone();
        if fixed_lo.abs() > tol || fixed_hi.abs() > tol {
            return Err(LorenzError::Consistency(format!(
                "boundary not fixed: f(P)-P={fixed_lo}, f(Q)-Q={fixed_hi}"
            )));
        }
        let (cm, cp) = self.critical_values();
        for c in [&cm, &cp] {
            if *c < self.lo.clone() - tol.clone() || *c > self.hi.clone() + tol.clone() {
                return Err(LorenzError::Consistency(format!("critical value {c} outside the domain")));
            }
        }
        let n = samples.max(2);
        for (sym, a, b) in [(Symbol::L, self.lo.clone(), S::zero()), (Symbol::R, S::zero(), self.hi.clone())] {
            let mut prev: Option<S> = None;
            for i in 0..=n {
                let x = a.clone() + (b.clone() - a.clone()) * S::ratio(i as i64, n as i64);
                let y = self.branch(sym, &x);
                if let Some(p) = prev {
                    if y <= p {
                        return Err(LorenzError::Consistency(format!(
                            "branch {} not increasing near {x}",
                            sym.as_char()
                        )));
                    }
                }
                prev = Some(y);
            }
        }
        Ok(())
    }

    /// JSON literal `{kind, params, domain, exponent}`.
    pub fn to_literal(&self) -> Value {
        let params = match &self.kind {
            MapKind::Quadratic { s, t } => json!({ "s": s.to_json(), "t": t.to_json() }),
            MapKind::Affine { k_minus, k_plus } => {
                json!({ "k_minus": k_minus.to_json(), "k_plus": k_plus.to_json() })
            }
            MapKind::Rescaled(r) => json!({
                "parent": r.parent.to_literal(),
                "p": r.p.to_json(),
                "q": r.q.to_json(),
                "a": r.alpha.len(),
                "b": r.beta.len(),
                "alpha": r.alpha.to_string(),
                "beta": r.beta.to_string(),
            }),
        };
        let kind = match &self.kind {
            MapKind::Quadratic { .. } => "quadratic",
            MapKind::Affine { .. } => "affine",
            MapKind::Rescaled(_) => "rescaled",
        };
        json!({
            "kind": kind,
            "params": params,
            "domain": [self.lo.to_json(), self.hi.to_json()],
            "exponent": self.exponent,
        })
    }

    /// Rebuild a quadratic or affine map from its literal.
    pub fn from_literal(value: &Value) -> Result<Self> {
        let bad = |what: &str| LorenzError::Parse(format!("map literal: {what}"));
        let kind = value.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing kind"))?;
        let params = value.get("params").ok_or_else(|| bad("missing params"))?;
        let field = |name: &str| -> Result<S> {
            params.get(name).and_then(S::from_json).ok_or_else(|| bad(&format!("bad field {name}")))
        };
        match kind {
            "quadratic" => Self::quadratic(field("s")?, field("t")?),
            "affine" => Self::affine(field("k_minus")?, field("k_plus")?),
            other => Err(bad(&format!("kind '{other}' cannot be rebuilt from a literal"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn quadratic_critical_values() {
        let m = LorenzMap::quadratic(0.0, 1.0).unwrap();
        assert_eq!(m.critical_values(), (0.0, 0.0));
        let m = LorenzMap::quadratic(1.0, 0.0).unwrap();
        assert_eq!(m.critical_values(), (1.0, -1.0));
        assert_eq!(m.eval(&SignedPoint::left_of_zero()).unwrap(), 1.0);
    }

    #[test]
    fn quadratic_boundary_derivative() {
        let m = LorenzMap::quadratic(0.5, 0.5).unwrap();
        assert_eq!(m.branch_derivative(Symbol::L, &-1.0), 3.0);
        assert_eq!(m.branch_derivative(Symbol::R, &1.0), 3.0);
    }

    #[test]
    fn parameter_checks() {
        assert!(matches!(LorenzMap::quadratic(1.5, 0.0), Err(LorenzError::Domain(_))));
        assert!(matches!(LorenzMap::quadratic(0.5, -0.1), Err(LorenzError::Domain(_))));
        assert!(matches!(LorenzMap::affine(q(1, 1), q(3, 2)), Err(LorenzError::Domain(_))));
        assert!(matches!(LorenzMap::affine(q(3, 2), q(5, 2)), Err(LorenzError::Domain(_))));
        assert!(LorenzMap::affine(q(2, 1), q(2, 1)).is_ok());
    }

    #[test]
    fn affine_exact_values() {
        let m = LorenzMap::affine(q(3, 2), q(3, 2)).unwrap();
        assert_eq!(m.critical_values(), (q(1, 2), q(-1, 2)));
        assert_eq!(m.eval(&SignedPoint::interior(q(1, 2))).unwrap(), q(1, 4));
        let full = LorenzMap::affine(q(2, 1), q(2, 1)).unwrap();
        assert_eq!(full.critical_values(), (q(1, 1), q(-1, 1)));
    }

    #[test]
    fn eval_errors() {
        let m = LorenzMap::quadratic(0.5, 0.5).unwrap();
        assert!(matches!(m.eval(&SignedPoint::interior(1.5)), Err(LorenzError::Domain(_))));
        assert!(matches!(m.eval(&SignedPoint::interior(0.0)), Err(LorenzError::Precondition(_))));
        assert_eq!(m.eval(&SignedPoint::interior(-1.0)).unwrap(), -1.0);
        assert_eq!(m.eval(&SignedPoint::interior(1.0)).unwrap(), 1.0);
    }

    #[test]
    fn orbit_examples() {
        let m = LorenzMap::affine(q(3, 2), q(3, 2)).unwrap();
        let orb = m.orbit(&SignedPoint::left_of_zero(), 5).unwrap();
        let vals: Vec<_> = orb.iter().skip(1).map(|p| p.value.clone()).collect();
        assert_eq!(vals, vec![q(1, 2), q(1, 4), q(-1, 8), q(5, 16), q(-1, 32)]);

        let m = LorenzMap::quadratic(1.0, 1.0).unwrap();
        let orb = m.orbit(&SignedPoint::right_of_zero(), 3).unwrap();
        assert!(orb.iter().all(|p| *p == SignedPoint::right_of_zero()));

        let m = LorenzMap::quadratic(1.0, 0.0).unwrap();
        let orb = m.orbit(&SignedPoint::left_of_zero(), 2).unwrap();
        assert_eq!(orb[1].value, 1.0);
        assert_eq!(orb[2].value, 1.0);
    }

    #[test]
    fn zero_landing_inherits_side() {
        let m = LorenzMap::quadratic(0.0, 1.0).unwrap();
        let orb = m.orbit(&SignedPoint::left_of_zero(), 4).unwrap();
        assert!(orb.iter().all(|p| p.side == Side::FromLeft && p.value == 0.0));
        // an interior point landing on 0 has no defined continuation
        let full = LorenzMap::affine(q(2, 1), q(2, 1)).unwrap();
        let err = full.orbit(&SignedPoint::interior(q(-1, 2)), 2).unwrap_err();
        assert!(matches!(err, LorenzError::Precondition(_)));
    }

    #[test]
    fn schwarzian_closed_forms() {
        let m = LorenzMap::quadratic(0.0, 0.0).unwrap();
        assert!((m.schwarzian(&-0.5f64).unwrap() + 6.0f64).abs() < 1e-12);
        let a = LorenzMap::affine(1.5, 1.7).unwrap();
        assert_eq!(a.schwarzian(&0.3).unwrap(), 0.0);
        assert!(matches!(m.schwarzian(&0.0), Err(LorenzError::Undefined(_))));
    }

    #[test]
    fn literal_roundtrip() {
        let m = LorenzMap::affine(q(3, 2), q(7, 5)).unwrap();
        let lit = m.to_literal();
        assert_eq!(lit["params"]["k_minus"], "3/2");
        assert_eq!(lit["domain"][0], "-1/1");
        assert_eq!(LorenzMap::<BigRational>::from_literal(&lit).unwrap(), m);
        let f = LorenzMap::quadratic(0.25, 0.75).unwrap();
        assert_eq!(LorenzMap::<f64>::from_literal(&f.to_literal()).unwrap(), f);
    }

    #[test]
    fn validate_constructed_maps() {
        LorenzMap::quadratic(0.3, 0.9).unwrap().validate(200).unwrap();
        LorenzMap::affine(q(5, 4), q(2, 1)).unwrap().validate(50).unwrap();
    }
}
