//! Truncated power-series ("jet") arithmetic: the computational substrate
//! for everything else in the crate.
//!
//! A jet stores Taylor coefficients `F_k = D^k f(x) / k!` at a base point,
//! not raw derivatives; raw derivatives are recovered through
//! [`Jet::derivative`]. Binary operations truncate to the minimum order of
//! the operands and never pad silently with zeros.

use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S> {
    base: S,
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    /// A jet of order `coeffs.len() - 1`. Panics on an empty coefficient
    /// list; order 0 (a bare value) is the minimum.
    pub fn new(base: S, coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least its value");
        Jet { base, coeffs }
    }

    pub fn constant(base: S, value: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = value;
        Jet { base, coeffs }
    }

    /// The jet of `z ↦ z` at `base`.
    pub fn identity(base: S, order: usize) -> Self {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = base.clone();
        if order >= 1 {
            coeffs[1] = S::one();
        }
        Jet { base, coeffs }
    }

    /// Jet of `exp` at 0: `F_k = 1/k!`. Exact in the rational backend.
    pub fn exp_at_zero(order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut f = S::one();
        coeffs.push(S::one());
        for k in 1..=order {
            f = f / S::from_int(k as i64);
            coeffs.push(f.clone());
        }
        Jet {
            base: S::zero(),
            coeffs,
        }
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// f(x): the constant coefficient.
    pub fn value(&self) -> &S {
        &self.coeffs[0]
    }

    /// Recover the raw derivative `D^k f(x) = k! F_k`.
    pub fn derivative(&self, k: usize) -> S {
        self.coeff(k) * factorial::<S>(k)
    }

    pub fn truncated(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Jet {
            base: self.base.clone(),
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Jet {
            base: self.base.clone(),
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Jet {
            base: self.base.clone(),
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    fn check_same_base(&self, other: &Self) -> Result<()> {
        if points_coincide(&self.base, &other.base) {
            Ok(())
        } else {
            Err(Error::BasePointMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_base(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
            .collect();
        Ok(Jet {
            base: self.base.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Cauchy product truncated to the minimum order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_base(other)?;
        let n = self.order().min(other.order());
        let mut coeffs = vec![S::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                let t = self.coeffs[i].clone() * other.coeffs[j].clone();
                coeffs[i + j] = coeffs[i + j].clone() + t;
            }
        }
        Ok(Jet {
            base: self.base.clone(),
            coeffs,
        })
    }

    /// Series division; the divisor's constant term must be nonzero under
    /// the backend's zero test (scaled by the divisor's largest coefficient).
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_same_base(other)?;
        let scale = max_abs_coeff(other);
        if other.coeffs[0].is_zero_scaled(&scale) {
            return Err(Error::DivisionByZeroConstant);
        }
        let n = self.order().min(other.order());
        let inv_b0 = S::one() / other.coeffs[0].clone();
        let mut q: Vec<S> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                let t = other.coeffs[j].clone() * q[k - j].clone();
                acc = acc - t;
            }
            q.push(acc * inv_b0.clone());
        }
        Ok(Jet {
            base: self.base.clone(),
            coeffs: q,
        })
    }

    /// Composition `outer ∘ self`. The outer jet must be expanded at this
    /// jet's value; the result is based at this jet's base point.
    pub fn compose_into(&self, outer: &Self) -> Result<Self> {
        if !points_coincide(outer.base(), self.value()) {
            return Err(Error::ExpansionPointMismatch);
        }
        let n = self.order().min(outer.order());
        // w = inner - inner(x): vanishing constant term.
        let mut w = self.truncated(n);
        w.coeffs[0] = S::zero();
        let mut res = Jet::constant(self.base.clone(), outer.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            res = res.mul(&w)?;
            res.coeffs[0] = res.coeffs[0].clone() + outer.coeffs[k].clone();
        }
        Ok(res)
    }

    /// Series reversion: the jet of the local inverse, based at `f(x)`,
    /// solving `g ∘ f = id` coefficient by coefficient.
    pub fn reverse(&self) -> Result<Self> {
        let n = self.order();
        if n < 1 {
            return Err(Error::OrderTooSmall { have: n, need: 1 });
        }
        let scale = max_abs_coeff(self);
        if self.coeffs[1].is_zero_scaled(&scale) {
            return Err(Error::CriticalPoint);
        }
        // u = f - f(x); powers[j] = u^j truncated to order n.
        let mut u = self.clone();
        u.coeffs[0] = S::zero();
        let mut powers: Vec<Jet<S>> = Vec::with_capacity(n + 1);
        powers.push(Jet::constant(self.base.clone(), S::one(), n));
        for j in 1..=n {
            let prev = powers[j - 1].clone();
            powers.push(prev.mul(&u)?);
        }
        let inv_u1 = S::one() / self.coeffs[1].clone();
        let mut g = vec![S::zero(); n + 1];
        g[0] = self.base.clone();
        if n >= 1 {
            g[1] = inv_u1.clone();
        }
        // (u^j)_k is zero for j > k; (u^k)_k = u1^k.
        let mut inv_u1_pow = inv_u1.clone();
        for k in 2..=n {
            let mut acc = S::zero();
            for j in 1..k {
                let t = g[j].clone() * powers[j].coeff(k);
                acc = acc + t;
            }
            inv_u1_pow = inv_u1_pow * inv_u1.clone();
            g[k] = -acc * inv_u1_pow.clone();
        }
        Ok(Jet {
            base: self.value().clone(),
            coeffs: g,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base": self.base.to_json(),
            "order": self.order(),
            "coeffs": self.coeffs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let base = v
            .get("base")
            .ok_or_else(|| Error::Parse("jet missing \"base\"".into()))
            .and_then(S::from_json)?;
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Parse("jet missing \"coeffs\" array".into()))?
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("jet needs at least one coefficient".into()));
        }
        if let Some(order) = v.get("order").and_then(|o| o.as_u64()) {
            if order as usize + 1 != coeffs.len() {
                return Err(Error::Parse(format!(
                    "jet order {order} disagrees with {} coefficients",
                    coeffs.len()
                )));
            }
        }
        Ok(Jet::new(base, coeffs))
    }
}

/// Jet of `exp` at an arbitrary float point.
pub fn exp_jet_f64(x: f64, order: usize) -> Jet<f64> {
    let ex = x.exp();
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut f = ex;
    coeffs.push(ex);
    for k in 1..=order {
        f /= k as f64;
        coeffs.push(f);
    }
    Jet::new(x, coeffs)
}

/// Backend-aware point comparison: exact equality, or a scaled float test.
pub fn points_coincide<S: Scalar>(a: &S, b: &S) -> bool {
    let d = a.clone() - b.clone();
    let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    let scale = if scale > S::one() { scale } else { S::one() };
    d.is_zero_scaled(&scale)
}

fn max_abs_coeff<S: Scalar>(j: &Jet<S>) -> S {
    let mut best = S::one();
    for c in &j.coeffs {
        let a = c.abs();
        if a > best {
            best = a;
        }
    }
    best
}

/// Anything that can expand itself as a jet of a requested order at a
/// point: rational maps, interval maps, inverse branches, closures.
pub trait JetSource<S: Scalar>: Sync {
    fn jet_at(&self, x: &S, order: usize) -> Result<Jet<S>>;
}

impl<S: Scalar, F> JetSource<S> for F
where
    F: Fn(&S, usize) -> Result<Jet<S>> + Sync,
{
    fn jet_at(&self, x: &S, order: usize) -> Result<Jet<S>> {
        self(x, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Scalar::from_ratio(n, d)
    }

    fn rjet(base: (i64, i64), coeffs: &[(i64, i64)]) -> Jet<Rational> {
        Jet::new(
            rat(base.0, base.1),
            coeffs.iter().map(|&(n, d)| rat(n, d)).collect(),
        )
    }

    #[test]
    fn add_componentwise() {
        let a = rjet((0, 1), &[(1, 1), (1, 1)]);
        let b = rjet((0, 1), &[(2, 1), (3, 1)]);
        assert_eq!(a.add(&b).unwrap(), rjet((0, 1), &[(3, 1), (4, 1)]));
    }

    #[test]
    fn add_zero_is_identity() {
        let a = rjet((0, 1), &[(5, 3), (-2, 7), (1, 9)]);
        let z = Jet::constant(rat(0, 1), rat(0, 1), 2);
        assert_eq!(a.add(&z).unwrap(), a);
    }

    #[test]
    fn add_exp_doubles_coefficients() {
        let e = Jet::<Rational>::exp_at_zero(3);
        let s = e.add(&e).unwrap();
        assert_eq!(
            s.coeffs(),
            &[rat(2, 1), rat(2, 1), rat(1, 1), rat(1, 3)][..]
        );
    }

    #[test]
    fn add_base_mismatch() {
        let a = rjet((0, 1), &[(1, 1)]);
        let b = rjet((1, 1), &[(1, 1)]);
        assert_eq!(a.add(&b), Err(Error::BasePointMismatch));
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = rjet((0, 1), &[(1, 1), (1, 1), (0, 1)]);
        let b = rjet((0, 1), &[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(
            a.mul(&b).unwrap().coeffs(),
            &[rat(1, 1), rat(0, 1), rat(-1, 1)][..]
        );
    }

    #[test]
    fn mul_by_one() {
        let a = rjet((0, 1), &[(3, 2), (5, 7), (-1, 4)]);
        let one = Jet::constant(rat(0, 1), rat(1, 1), 2);
        assert_eq!(a.mul(&one).unwrap(), a);
    }

    #[test]
    fn mul_exp_exp_is_exp_2z() {
        let e = Jet::<Rational>::exp_at_zero(3);
        let p = e.mul(&e).unwrap();
        assert_eq!(
            p.coeffs(),
            &[rat(1, 1), rat(2, 1), rat(2, 1), rat(4, 3)][..]
        );
    }

    #[test]
    fn div_geometric_series() {
        let one = Jet::constant(rat(0, 1), rat(1, 1), 3);
        let denom = rjet((0, 1), &[(1, 1), (-1, 1), (0, 1), (0, 1)]);
        assert_eq!(
            one.div(&denom).unwrap().coeffs(),
            &[rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1)][..]
        );
    }

    #[test]
    fn div_self_is_one() {
        let a = rjet((0, 1), &[(2, 3), (1, 5), (7, 2)]);
        let q = a.div(&a).unwrap();
        assert_eq!(q, Jet::constant(rat(0, 1), rat(1, 1), 2));
    }

    #[test]
    fn div_bernoulli_generating_coefficients() {
        // 1 / (1 + z/2 + z^2/6) to order 2 = (1, -1/2, 1/12)
        let one = Jet::constant(rat(0, 1), rat(1, 1), 2);
        let denom = rjet((0, 1), &[(1, 1), (1, 2), (1, 6)]);
        let q = one.div(&denom).unwrap();
        assert_eq!(q.coeffs(), &[rat(1, 1), rat(-1, 2), rat(1, 12)][..]);
        // re-multiplying recovers the divisor's inverse relation
        assert_eq!(
            q.mul(&denom).unwrap(),
            Jet::constant(rat(0, 1), rat(1, 1), 2)
        );
    }

    #[test]
    fn div_by_vanishing_constant_term() {
        let a = rjet((0, 1), &[(1, 1), (0, 1)]);
        let b = rjet((0, 1), &[(0, 1), (1, 1)]);
        assert_eq!(a.div(&b), Err(Error::DivisionByZeroConstant));
    }

    #[test]
    fn compose_identity_outer() {
        let inner = rjet((2, 1), &[(5, 1), (1, 2), (3, 4)]);
        let outer = Jet::identity(rat(5, 1), 2);
        assert_eq!(inner.compose_into(&outer).unwrap(), inner);
    }

    #[test]
    fn compose_exp_with_2z() {
        let outer = Jet::<Rational>::exp_at_zero(3);
        let inner = rjet((0, 1), &[(0, 1), (2, 1), (0, 1), (0, 1)]);
        let c = inner.compose_into(&outer).unwrap();
        assert_eq!(
            c.coeffs(),
            &[rat(1, 1), rat(2, 1), rat(2, 1), rat(4, 3)][..]
        );
    }

    #[test]
    fn compose_chain_rule_order_one() {
        let inner = rjet((1, 2), &[(3, 1), (7, 5), (1, 1)]);
        let outer = rjet((3, 1), &[(2, 1), (11, 3), (0, 1)]);
        let c = inner.compose_into(&outer).unwrap();
        // D(g∘f) = Dg(f(x)) Df(x)
        assert_eq!(c.coeff(1), rat(11, 3) * rat(7, 5));
    }

    #[test]
    fn compose_point_mismatch() {
        let inner = rjet((0, 1), &[(1, 1), (1, 1)]);
        let outer = Jet::identity(rat(2, 1), 1);
        assert_eq!(
            inner.compose_into(&outer),
            Err(Error::ExpansionPointMismatch)
        );
    }

    #[test]
    fn reverse_z_plus_z_squared() {
        let f = rjet((0, 1), &[(0, 1), (1, 1), (1, 1), (0, 1), (0, 1)]);
        let g = f.reverse().unwrap();
        assert_eq!(
            g.coeffs(),
            &[rat(0, 1), rat(1, 1), rat(-1, 1), rat(2, 1), rat(-5, 1)][..]
        );
        let round = f.compose_into(&g).unwrap();
        assert_eq!(round, Jet::identity(rat(0, 1), 4));
    }

    #[test]
    fn reverse_affine() {
        // f = 3z + 2 at base 1: coeffs (5, 3); inverse (z-2)/3 at base 5.
        let f = rjet((1, 1), &[(5, 1), (3, 1)]);
        let g = f.reverse().unwrap();
        assert_eq!(g.base(), &rat(5, 1));
        assert_eq!(g.coeffs(), &[rat(1, 1), rat(1, 3)][..]);
    }

    #[test]
    fn reverse_logistic_at_quarter() {
        // 4x(1-x) at 1/4: (3/4, 2, -4, 0)
        let f = rjet((1, 4), &[(3, 4), (2, 1), (-4, 1), (0, 1)]);
        let g = f.reverse().unwrap();
        assert_eq!(g.base(), &rat(3, 4));
        assert_eq!(g.coeff(1), rat(1, 2));
        let round = f.compose_into(&g).unwrap();
        assert_eq!(round, Jet::identity(rat(1, 4), 3));
    }

    #[test]
    fn reverse_critical_point_rejected() {
        let f = rjet((0, 1), &[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(f.reverse(), Err(Error::CriticalPoint));
    }

    #[test]
    fn derivative_recovery() {
        let f = rjet((0, 1), &[(1, 1), (2, 1), (3, 2)]);
        assert_eq!(f.derivative(2), rat(3, 1));
    }

    #[test]
    fn json_round_trip() {
        let f = rjet((1, 3), &[(1, 2), (-4, 7)]);
        let v = f.to_json();
        assert_eq!(Jet::<Rational>::from_json(&v).unwrap(), f);
        let g = exp_jet_f64(0.5, 2);
        let v = g.to_json();
        assert_eq!(Jet::<f64>::from_json(&v).unwrap(), g);
    }
}
