//! Higher-order Schwarzian derivatives by three routes (Hankel determinant
//! ratio, Padé defect, Pick recursion), the Pick algorithm and its inverse,
//! Jacobi-type continued fractions, and the composition identities.

use crate::error::{Error, Result};
use crate::jets::{points_coincide, Jet};
use crate::pade::{hankel_det, is_normal, pade_approximant, RationalMap};
use crate::scalar::{factorial, Scalar};

/// `S_0 .. S_d` at a point, with per-level definedness flags. `S_0 = 1`
/// by convention.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzianSequence<S> {
    base: S,
    levels: Vec<LevelValue<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LevelValue<S> {
    Defined(S),
    /// Normality (or an intermediate derivative) failed at this level; the
    /// value and all later ones are undefined along this route.
    NotNormal,
}

impl<S: Scalar> SchwarzianSequence<S> {
    pub fn new(base: S, levels: Vec<LevelValue<S>>) -> Self {
        assert!(matches!(&levels[..], [LevelValue::Defined(v), ..] if *v == S::one()));
        SchwarzianSequence { base, levels }
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    /// Highest level carried by the sequence (defined or not).
    pub fn max_order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn value(&self, k: usize) -> Option<&S> {
        match self.levels.get(k) {
            Some(LevelValue::Defined(v)) => Some(v),
            _ => None,
        }
    }

    pub fn level(&self, k: usize) -> Option<&LevelValue<S>> {
        self.levels.get(k)
    }

    pub fn all_defined(&self) -> bool {
        self.levels
            .iter()
            .all(|l| matches!(l, LevelValue::Defined(_)))
    }

    /// True when every `S_k`, `1 <= k <= max_order`, is defined and
    /// strictly positive.
    pub fn all_positive(&self) -> bool {
        (1..=self.max_order()).all(|k| self.value(k).map(|v| v.signum() > 0) == Some(true))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base": self.base.to_json(),
            "S": self.levels.iter().map(|l| match l {
                LevelValue::Defined(v) => v.to_json(),
                LevelValue::NotNormal => serde_json::Value::Null,
            }).collect::<Vec<_>>(),
        })
    }
}

fn derivative_nonzero<S: Scalar>(f: &Jet<S>) -> Result<S> {
    let scale = f
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .fold(S::one(), |a, b| if b > a { b } else { a });
    let df = f.coeff(1);
    if df.is_zero_scaled(&scale) {
        Err(Error::CriticalPoint)
    } else {
        Ok(df)
    }
}

/// `S_d(f)(x)` by the determinant formula
/// `(2d+1)! det M_{d+1} / (Df det M_d)`.
pub fn schwarzian_det<S: Scalar>(f: &Jet<S>, d: usize) -> Result<S> {
    if d == 0 {
        return Ok(S::one());
    }
    if f.order() < 2 * d + 1 {
        return Err(Error::OrderTooSmall {
            have: f.order(),
            need: 2 * d + 1,
        });
    }
    let df = derivative_nonzero(f)?;
    if !is_normal(f, d)? {
        return Err(Error::NotNormal {
            order: d,
            degenerate: None,
        });
    }
    let num = hankel_det(f, d + 1)?;
    let den = hankel_det(f, d)?;
    Ok(factorial::<S>(2 * d + 1) * num / (df * den))
}

/// `S_d(f)(x)` by the defect definition:
/// `D^{2d+1}(f - [f]_{d,x})(x) / Df(x)`.
pub fn schwarzian_defect<S: Scalar>(f: &Jet<S>, d: usize) -> Result<S> {
    if d == 0 {
        return Ok(S::one());
    }
    if f.order() < 2 * d + 1 {
        return Err(Error::OrderTooSmall {
            have: f.order(),
            need: 2 * d + 1,
        });
    }
    let df = derivative_nonzero(f)?;
    let approx = pade_approximant(f, d)?;
    let expansion = approx.jet_at(f.base(), 2 * d + 1)?;
    let delta = f.coeff(2 * d + 1) - expansion.coeff(2 * d + 1);
    Ok(delta * factorial::<S>(2 * d + 1) / df)
}

/// One step of the Pick algorithm based at the jet's base point:
/// `z ↦ (1 - Df(x)(z-x)/(f(z)-f(x))) / (z-x)`. Two orders are lost.
pub fn pick_step<S: Scalar>(f: &Jet<S>) -> Result<Jet<S>> {
    let n = f.order();
    if n < 2 {
        return Err(Error::OrderTooSmall { have: n, need: 2 });
    }
    let df = derivative_nonzero(f)?;
    // g(w) = (f(z) - f(x))/w, a unit series with g(0) = Df.
    let g = Jet::new(f.base().clone(), f.coeffs()[1..].to_vec());
    let h = Jet::constant(f.base().clone(), df, n - 1).div(&g)?;
    // (1 - h) vanishes at 0; divide by w by shifting down.
    let mut tail: Vec<S> = h.coeffs()[1..].iter().map(|c| -c.clone()).collect();
    if tail.is_empty() {
        tail.push(S::zero());
    }
    Ok(Jet::new(f.base().clone(), tail))
}

/// The Pick algorithm applied symbolically to a rational map, based at the
/// map's own expansion point. For `R = p/q` with `R(x)` finite and
/// `DR(x) != 0` the result has degree `deg R - 1`.
pub fn pick_step_rational<S: Scalar>(r: &RationalMap<S>) -> Result<RationalMap<S>> {
    let v = r.value_at_base();
    let dr = r.derivative_at_base();
    let scale = r
        .numerator()
        .iter()
        .chain(r.denominator())
        .map(|c| c.abs())
        .fold(S::one(), |a, b| if b > a { b } else { a });
    if dr.is_zero_scaled(&scale) {
        return Err(Error::CriticalPoint);
    }
    // R(z) - R(x) = n(w)/q(w) with n(0) = 0; write n = w ñ.
    let n = crate::poly::sub(r.numerator(), &crate::poly::scale(r.denominator(), &v));
    let n_tilde: Vec<S> = if n.len() > 1 {
        n[1..].to_vec()
    } else {
        vec![S::zero()]
    };
    // Pick R = (ñ - DR q) / (w ñ); the numerator also vanishes at 0.
    let m = crate::poly::sub(&n_tilde, &crate::poly::scale(r.denominator(), &dr));
    let m_tilde: Vec<S> = if m.len() > 1 {
        m[1..].to_vec()
    } else {
        vec![S::zero()]
    };
    let t = RationalMap::new(r.base().clone(), m_tilde, n_tilde)?;
    if S::EXACT {
        t.reduced()
    } else {
        Ok(t)
    }
}

/// Inverse Pick step: `z ↦ A + μ(z-x)/(1-(z-x)t(z))`. Two orders are
/// gained; the result has `f(x) = A`, `Df(x) = μ`.
pub fn pick_inverse_step<S: Scalar>(t: &Jet<S>, a: &S, mu: &S) -> Result<Jet<S>> {
    if mu.is_zero() {
        return Err(Error::InvalidParameter(
            "inverse Pick step needs mu != 0".into(),
        ));
    }
    let m = t.order();
    // v = 1 - w t(z), exact through order m + 1.
    let mut v = vec![S::one()];
    v.extend(t.coeffs().iter().map(|c| -c.clone()));
    let v = Jet::new(t.base().clone(), v);
    let s = Jet::constant(t.base().clone(), S::one(), m + 1).div(&v)?;
    let mut coeffs = Vec::with_capacity(m + 3);
    coeffs.push(a.clone());
    coeffs.extend(s.coeffs().iter().map(|c| c.clone() * mu.clone()));
    Ok(Jet::new(t.base().clone(), coeffs))
}

/// `S_1 .. S_d` through the Pick recursion
/// `S_d(f) = 2d(2d+1) · D(Pick f)(x) · S_{d-1}(Pick f)(x)`,
/// which telescopes to `S_m(f) = (2m+1)! · Π_{j<=m} D T_j(x)` over the
/// Pick tower `T_j`. A vanishing tower derivative makes that level's value
/// 0 and every later level undefined.
pub fn schwarzian_recursive<S: Scalar>(f: &Jet<S>, d: usize) -> Result<SchwarzianSequence<S>> {
    if f.order() < 2 * d + 1 {
        return Err(Error::OrderTooSmall {
            have: f.order(),
            need: 2 * d + 1,
        });
    }
    derivative_nonzero(f)?;
    let mut levels = vec![LevelValue::Defined(S::one())];
    let mut tower = f.clone();
    let mut deriv_product = S::one();
    let mut m = 1;
    while m <= d {
        tower = pick_step(&tower)?;
        let dt = tower.coeff(1);
        let scale = tower
            .coeffs()
            .iter()
            .map(|c| c.abs())
            .fold(S::one(), |a, b| if b > a { b } else { a });
        deriv_product = deriv_product * dt.clone();
        levels.push(LevelValue::Defined(
            factorial::<S>(2 * m + 1) * deriv_product.clone(),
        ));
        if dt.is_zero_scaled(&scale) {
            // S_m = 0 exactly; the tower cannot be continued.
            for _ in m + 1..=d {
                levels.push(LevelValue::NotNormal);
            }
            break;
        }
        m += 1;
    }
    Ok(SchwarzianSequence::new(f.base().clone(), levels))
}

/// `S_d(f)(x)` covering the degenerate case: when `f` is not normal of
/// order `d` but the coefficient system is still consistent, the
/// approximant collapses to a lower order and the defect definition still
/// applies (a rational map of degree 1 has every `S_d = 0` this way).
/// `Ok(None)` means no approximant of order `d` exists at all.
pub fn schwarzian_general<S: Scalar>(f: &Jet<S>, d: usize) -> Result<Option<S>> {
    if d == 0 {
        return Ok(Some(S::one()));
    }
    if f.order() < 2 * d + 1 {
        return Err(Error::OrderTooSmall {
            have: f.order(),
            need: 2 * d + 1,
        });
    }
    let df = derivative_nonzero(f)?;
    if is_normal(f, d)? {
        return Ok(Some(schwarzian_det(f, d)?));
    }
    match crate::pade::pade_solve(f, d)? {
        crate::pade::PadeOutcome::Normal(_) => unreachable!("normality was ruled out"),
        crate::pade::PadeOutcome::Degenerate(r) => {
            let expansion = r.jet_at(f.base(), 2 * d + 1)?;
            // the degenerate solution must still coincide to order 2d
            for k in 0..=2 * d {
                if !(f.coeff(k) - expansion.coeff(k)).is_zero() {
                    return Ok(None);
                }
            }
            let delta = f.coeff(2 * d + 1) - expansion.coeff(2 * d + 1);
            Ok(Some(delta * factorial::<S>(2 * d + 1) / df))
        }
        crate::pade::PadeOutcome::Inconsistent => Ok(None),
    }
}

/// Per-level sequence via [`schwarzian_general`]: levels without an
/// approximant are flagged.
pub fn schwarzian_sequence_general<S: Scalar>(
    f: &Jet<S>,
    d: usize,
) -> Result<SchwarzianSequence<S>> {
    if f.order() < 2 * d + 1 {
        return Err(Error::OrderTooSmall {
            have: f.order(),
            need: 2 * d + 1,
        });
    }
    derivative_nonzero(f)?;
    let mut levels = vec![LevelValue::Defined(S::one())];
    for k in 1..=d {
        match schwarzian_general(f, k)? {
            Some(v) => levels.push(LevelValue::Defined(v)),
            None => levels.push(LevelValue::NotNormal),
        }
    }
    Ok(SchwarzianSequence::new(f.base().clone(), levels))
}

/// Per-level determinant-route sequence with flags instead of errors.
pub fn schwarzian_sequence_det<S: Scalar>(f: &Jet<S>, d: usize) -> Result<SchwarzianSequence<S>> {
    if f.order() < 2 * d + 1 {
        return Err(Error::OrderTooSmall {
            have: f.order(),
            need: 2 * d + 1,
        });
    }
    derivative_nonzero(f)?;
    let mut levels = vec![LevelValue::Defined(S::one())];
    for k in 1..=d {
        match schwarzian_det(f, k) {
            Ok(v) => levels.push(LevelValue::Defined(v)),
            Err(Error::NotNormal { .. }) => levels.push(LevelValue::NotNormal),
            Err(e) => return Err(e),
        }
    }
    Ok(SchwarzianSequence::new(f.base().clone(), levels))
}

/// Jacobi-type continued fraction coefficients `A_0..A_d`, `μ_0..μ_{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedFractionRep<S> {
    pub base: S,
    pub a: Vec<S>,
    pub mu: Vec<S>,
}

impl<S: Scalar> ContinuedFractionRep<S> {
    pub fn depth(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    /// Expand the continued fraction back into a jet of the given order by
    /// repeated inverse Pick steps.
    pub fn expand_jet(&self, order: usize) -> Result<Jet<S>> {
        let d = self.depth();
        let mut g = Jet::constant(self.base.clone(), self.a[d].clone(), order);
        for k in (0..d).rev() {
            g = pick_inverse_step(&g, &self.a[k], &self.mu[k])?;
        }
        Ok(g.truncated(order))
    }

    /// Evaluate the continued fraction symbolically into a rational map of
    /// degree (at most) `depth`.
    pub fn to_rational_map(&self) -> Result<RationalMap<S>> {
        let d = self.depth();
        let mut num = vec![self.a[d].clone()];
        let mut den = vec![S::one()];
        for k in (0..d).rev() {
            // R_k = A_k + mu_k w / (1 - w R_{k+1})
            //     = (A_k (den - w num) + mu_k w den) / (den - w num)
            let mut w_num = vec![S::zero()];
            w_num.extend(num.clone());
            let new_den = crate::poly::sub(&den, &w_num);
            let mut w_den = vec![S::zero()];
            w_den.extend(den.clone());
            let new_num = crate::poly::add(
                &crate::poly::scale(&new_den, &self.a[k]),
                &crate::poly::scale(&w_den, &self.mu[k]),
            );
            num = new_num;
            den = new_den;
        }
        RationalMap::new(self.base.clone(), num, den)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base": self.base.to_json(),
            "A": self.a.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "mu": self.mu.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of continued-fraction extraction, carrying the partial
/// representation when a level fails.
#[derive(Debug, Clone)]
pub struct CfOutcome<S> {
    pub rep: ContinuedFractionRep<S>,
    /// First level whose `μ` vanished, if any; the representation stops
    /// just before it.
    pub failed_level: Option<usize>,
}

/// Extract the continued fraction representation to depth `d` by iterating
/// the Pick algorithm. Needs `f.order() >= 2d`.
pub fn continued_fraction_partial<S: Scalar>(f: &Jet<S>, d: usize) -> Result<CfOutcome<S>> {
    if f.order() < 2 * d {
        return Err(Error::OrderTooSmall {
            have: f.order(),
            need: 2 * d,
        });
    }
    let base = f.base().clone();
    let mut a = vec![f.value().clone()];
    let mut mu = Vec::new();
    let mut tower = f.clone();
    for level in 0..d {
        let scale = tower
            .coeffs()
            .iter()
            .map(|c| c.abs())
            .fold(S::one(), |acc, b| if b > acc { b } else { acc });
        let m = tower.coeff(1);
        if m.is_zero_scaled(&scale) {
            return Ok(CfOutcome {
                rep: ContinuedFractionRep { base, a, mu },
                failed_level: Some(level),
            });
        }
        mu.push(m);
        tower = pick_step(&tower)?;
        a.push(tower.value().clone());
    }
    Ok(CfOutcome {
        rep: ContinuedFractionRep { base, a, mu },
        failed_level: None,
    })
}

/// Continued fraction to depth `d`, or `NotNormal` at the failing level.
pub fn continued_fraction<S: Scalar>(f: &Jet<S>, d: usize) -> Result<ContinuedFractionRep<S>> {
    let out = continued_fraction_partial(f, d)?;
    match out.failed_level {
        None => Ok(out.rep),
        Some(level) => Err(Error::NotNormal {
            order: level,
            degenerate: None,
        }),
    }
}

/// The three quantities of the composition formula
/// `S_d(g∘f) = S_d(g)∘f (Df)^{2d} + S_d(f) + S_d([g]_d ∘ [f]_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionCheck<S> {
    pub lhs: S,
    pub rhs_sum: S,
    pub extra_term: S,
    pub holds: bool,
}

pub fn composition_check<S: Scalar>(
    f: &Jet<S>,
    g: &Jet<S>,
    d: usize,
) -> Result<CompositionCheck<S>> {
    if !points_coincide(g.base(), f.value()) {
        return Err(Error::ExpansionPointMismatch);
    }
    let df = derivative_nonzero(f)?;
    derivative_nonzero(g)?;
    let composed = f.compose_into(g)?;
    let lhs = schwarzian_det(&composed, d)?;
    let s_f = schwarzian_det(f, d)?;
    let s_g = schwarzian_det(g, d)?;
    let rhs_sum = s_g * df.powi(2 * d as i32) + s_f;
    // extra term: compose the two Padé approximants symbolically and take
    // the Schwarzian of the resulting rational map's jet.
    let pf = pade_approximant(f, d)?;
    let pg = pade_approximant(g, d)?;
    let comp = RationalMap::compose(&pg, &pf)?;
    let comp_jet = comp.jet_at(f.base(), 2 * d + 1)?;
    let extra_term = schwarzian_det(&comp_jet, d)?;
    let diff = lhs.clone() - (rhs_sum.clone() + extra_term.clone());
    let scale = [lhs.abs(), rhs_sum.abs(), extra_term.abs(), S::one()]
        .into_iter()
        .fold(S::one(), |a, b| if b > a { b } else { a });
    Ok(CompositionCheck {
        holds: diff.is_zero_scaled(&scale),
        lhs,
        rhs_sum,
        extra_term,
    })
}

/// The composition inequality for maps with non-negative lower-order
/// Schwarzians: `S_d(g∘f) >= S_d(g)∘f (Df)^{2d} + S_d(f)`.
/// Hypothesis violations are reported as errors, distinct from an
/// inequality failure (`Ok(false)`).
pub fn composition_inequality_check<S: Scalar>(f: &Jet<S>, g: &Jet<S>, d: usize) -> Result<bool> {
    if !points_coincide(g.base(), f.value()) {
        return Err(Error::ExpansionPointMismatch);
    }
    let df = derivative_nonzero(f)?;
    derivative_nonzero(g)?;
    for k in 1..d {
        for (name, jet) in [("f", f), ("g", g)] {
            let v = schwarzian_det(jet, k).map_err(|e| match e {
                Error::NotNormal { .. } => Error::HypothesisViolated(format!(
                    "S_{k}({name}) does not exist at the base point"
                )),
                other => other,
            })?;
            if v.signum() < 0 {
                return Err(Error::HypothesisViolated(format!(
                    "S_{k}({name}) = {v} < 0 at the base point"
                )));
            }
        }
    }
    let s_f = schwarzian_det(f, d).map_err(hypothesis_existence(d, "f"))?;
    let s_g = schwarzian_det(g, d).map_err(hypothesis_existence(d, "g"))?;
    let composed = f.compose_into(g)?;
    // Existence of S_d(g∘f) is part of the proposition's conclusion, so a
    // normality failure here is an inequality failure, not a bad input.
    let lhs = match schwarzian_det(&composed, d) {
        Ok(v) => v,
        Err(Error::NotNormal { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let rhs = s_g * df.powi(2 * d as i32) + s_f;
    if S::EXACT {
        Ok(lhs >= rhs)
    } else {
        let scale = [lhs.abs(), rhs.abs(), S::one()]
            .into_iter()
            .fold(S::one(), |a, b| if b > a { b } else { a });
        let diff = lhs - rhs;
        Ok(diff.signum() >= 0 || diff.is_zero_scaled(&scale))
    }
}

fn hypothesis_existence(d: usize, name: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::NotNormal { .. } => {
            Error::HypothesisViolated(format!("S_{d}({name}) does not exist at the base point"))
        }
        other => other,
    }
}

/// Verify `S_d(f ∘ M) = S_d(f) ∘ M (DM)^{2d}` for a Möbius `M` and that
/// post-composition `M ∘ f` leaves `S_d` unchanged.
pub fn mobius_precomposition_check<S: Scalar>(
    f: &Jet<S>,
    m: &RationalMap<S>,
    d: usize,
) -> Result<bool> {
    if m.degree_report().degree != 1 {
        return Err(Error::InvalidParameter(
            "precomposition check needs a Möbius (degree-1) map".into(),
        ));
    }
    let s_f = schwarzian_det(f, d)?;

    // Pre-composition: expand M at x = M^{-1}(base of f).
    let x = match m.invert_mobius_at(f.base())? {
        crate::pade::Value::Finite(x) => x,
        crate::pade::Value::Infinite => return Err(Error::PoleAtPoint),
    };
    let m_jet = m.jet_at(&x, f.order())?;
    let dm = m_jet.coeff(1);
    if dm.is_zero() {
        return Err(Error::CriticalPoint);
    }
    let pre = m_jet.compose_into(f)?;
    let lhs_pre = schwarzian_det(&pre, d)?;
    let rhs_pre = s_f.clone() * dm.powi(2 * d as i32);
    let scale_pre = [lhs_pre.abs(), rhs_pre.abs(), S::one()]
        .into_iter()
        .fold(S::one(), |a, b| if b > a { b } else { a });
    let pre_ok = (lhs_pre - rhs_pre).is_zero_scaled(&scale_pre);

    // Post-composition: expand M at f(x); no effect on S_d.
    let m_at_val = m.jet_at(f.value(), f.order())?;
    derivative_nonzero(&m_at_val)?;
    let post = f.compose_into(&m_at_val)?;
    let lhs_post = schwarzian_det(&post, d)?;
    let scale_post = [lhs_post.abs(), s_f.abs(), S::one()]
        .into_iter()
        .fold(S::one(), |a, b| if b > a { b } else { a });
    let post_ok = (lhs_post - s_f).is_zero_scaled(&scale_post);

    Ok(pre_ok && post_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Scalar::from_ratio(n, d)
    }

    fn exp_jet(order: usize) -> Jet<Rational> {
        Jet::exp_at_zero(order)
    }

    fn mobius_jet(order: usize) -> Jet<Rational> {
        // z/(1-z) at 0: coefficients (0, 1, 1, 1, ...)
        let mut c = vec![rat(0, 1)];
        c.extend(std::iter::repeat(rat(1, 1)).take(order));
        Jet::new(rat(0, 1), c)
    }

    #[test]
    fn schwarzian_det_exp() {
        assert_eq!(schwarzian_det(&exp_jet(3), 1).unwrap(), rat(-1, 2));
        assert_eq!(schwarzian_det(&exp_jet(5), 2).unwrap(), rat(1, 6));
    }

    #[test]
    fn schwarzian_det_classical_formula() {
        // S_1 = D3f/Df - (3/2)(D2f/Df)^2 on a generic jet
        let f = Jet::new(
            rat(0, 1),
            vec![rat(1, 2), rat(3, 1), rat(-2, 1), rat(5, 1)],
        );
        let df = f.derivative(1);
        let d2 = f.derivative(2);
        let d3 = f.derivative(3);
        let classical =
            d3.clone() / df.clone() - rat(3, 2) * (d2.clone() / df.clone()).powi(2);
        assert_eq!(schwarzian_det(&f, 1).unwrap(), classical);
    }

    #[test]
    fn schwarzian_mobius_vanishes() {
        assert_eq!(schwarzian_det(&mobius_jet(3), 1).unwrap(), rat(0, 1));
    }

    #[test]
    fn schwarzian_defect_matches_det() {
        for d in 1..=2 {
            assert_eq!(
                schwarzian_defect(&exp_jet(2 * d + 1), d).unwrap(),
                schwarzian_det(&exp_jet(2 * d + 1), d).unwrap()
            );
        }
    }

    #[test]
    fn defect_vanishes_on_rational_maps() {
        // degree-2 rational map expanded anywhere has S_2 = 0
        let r = crate::pade::pade_approximant(&exp_jet(4), 2).unwrap();
        let jet = r.jet_at(&rat(1, 3), 5).unwrap();
        assert_eq!(schwarzian_defect(&jet, 2).unwrap(), rat(0, 1));
        assert_eq!(schwarzian_det(&jet, 2).unwrap(), rat(0, 1));
    }

    #[test]
    fn pick_step_exp_constant_term() {
        let t = pick_step(&exp_jet(4)).unwrap();
        assert_eq!(t.value(), &rat(1, 2));
        assert_eq!(t.order(), 2);
    }

    #[test]
    fn pick_step_affine_zero_jet() {
        let f = Jet::new(rat(0, 1), vec![rat(3, 1), rat(7, 1), rat(0, 1), rat(0, 1)]);
        let t = pick_step(&f).unwrap();
        assert!(t.coeffs().iter().all(|c| c == &rat(0, 1)));
    }

    #[test]
    fn pick_step_mobius_value() {
        let t = pick_step(&mobius_jet(4)).unwrap();
        assert_eq!(t.value(), &rat(1, 1));
    }

    #[test]
    fn pick_inverse_step_identity() {
        let t = Jet::constant(rat(0, 1), rat(0, 1), 0);
        let f = pick_inverse_step(&t, &rat(0, 1), &rat(1, 1)).unwrap();
        assert_eq!(f, Jet::identity(rat(0, 1), 2));
    }

    #[test]
    fn pick_inverse_step_geometric() {
        // t = 1/2 constant, A = 1, mu = 1: 1 + w/(1 - w/2)
        let t = Jet::constant(rat(0, 1), rat(1, 2), 1);
        let f = pick_inverse_step(&t, &rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!(
            f.coeffs(),
            &[rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 4)][..]
        );
    }

    #[test]
    fn pick_round_trip() {
        let f = Jet::new(
            rat(1, 2),
            vec![rat(2, 1), rat(3, 1), rat(-1, 1), rat(1, 2), rat(5, 1), rat(-7, 3)],
        );
        let t = pick_step(&f).unwrap();
        let back = pick_inverse_step(&t, f.value(), &f.coeff(1)).unwrap();
        assert_eq!(back.truncated(f.order() - 2), f.truncated(f.order() - 2));
    }

    #[test]
    fn recursive_matches_det_for_exp() {
        let seq = schwarzian_recursive(&exp_jet(5), 2).unwrap();
        assert_eq!(seq.value(0), Some(&rat(1, 1)));
        assert_eq!(seq.value(1), Some(&rat(-1, 2)));
        assert_eq!(seq.value(2), Some(&rat(1, 6)));
    }

    #[test]
    fn recursive_mobius_terminates_with_flags() {
        let seq = schwarzian_recursive(&mobius_jet(7), 3).unwrap();
        assert_eq!(seq.value(1), Some(&rat(0, 1)));
        assert_eq!(seq.level(2), Some(&LevelValue::NotNormal));
        assert_eq!(seq.level(3), Some(&LevelValue::NotNormal));
        assert!(!seq.all_defined());
    }

    #[test]
    fn recursive_logistic_inverse_branch() {
        // inverse of 4x(1-x) at 1/4 (base 3/4): S_1 = 6
        let f = Jet::new(rat(1, 4), vec![rat(3, 4), rat(2, 1), rat(-4, 1), rat(0, 1)]);
        let g = f.reverse().unwrap();
        let seq = schwarzian_recursive(&g, 1).unwrap();
        assert_eq!(seq.value(1), Some(&rat(6, 1)));
        // classical identity: S_1(f^{-1})∘f = -S_1(f)/(Df)^2 with S_1(f)(1/4) = -24
        assert_eq!(schwarzian_det(&f, 1).unwrap(), rat(-24, 1));
    }

    #[test]
    fn continued_fraction_exp() {
        let cf = continued_fraction(&exp_jet(4), 2).unwrap();
        assert_eq!(cf.a[0], rat(1, 1));
        assert_eq!(cf.mu[0], rat(1, 1));
        assert_eq!(cf.a[1], rat(1, 2));
        assert_eq!(cf.mu[1], rat(-1, 12));
    }

    #[test]
    fn continued_fraction_affine_partial() {
        let f = Jet::new(
            rat(0, 1),
            vec![rat(5, 1), rat(2, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
        );
        let out = continued_fraction_partial(&f, 2).unwrap();
        // A_0 = 5, mu_0 = 2, then the tower is the zero jet: mu_1 = 0
        assert_eq!(out.rep.a, vec![rat(5, 1), rat(0, 1)]);
        assert_eq!(out.rep.mu, vec![rat(2, 1)]);
        assert_eq!(out.failed_level, Some(1));
        assert!(matches!(
            continued_fraction(&f, 2),
            Err(Error::NotNormal { order: 1, .. })
        ));
    }

    #[test]
    fn continued_fraction_round_trip() {
        let cf = ContinuedFractionRep {
            base: rat(1, 3),
            a: vec![rat(2, 1), rat(-1, 2), rat(3, 1)],
            mu: vec![rat(1, 2), rat(5, 7)],
        };
        let jet = cf.expand_jet(8).unwrap();
        let back = continued_fraction(&jet, 2).unwrap();
        assert_eq!(back, cf);
        // the symbolic rational map agrees with the jet expansion
        let r = cf.to_rational_map().unwrap();
        assert_eq!(r.jet_at(&rat(1, 3), 4).unwrap(), jet.truncated(4));
        assert_eq!(r.degree(), 2);
    }

    #[test]
    fn mu_relation() {
        // mu_k = S_k / (2k(2k+1) S_{k-1})
        let f = Jet::new(
            rat(0, 1),
            vec![rat(1, 1), rat(2, 1), rat(1, 3), rat(-1, 2), rat(2, 5), rat(1, 7), rat(-3, 4)],
        );
        let cf = continued_fraction(&f, 3).unwrap();
        let s1 = schwarzian_det(&f, 1).unwrap();
        let s2 = schwarzian_det(&f, 2).unwrap();
        assert_eq!(cf.mu[1], s1.clone() / (rat(6, 1)));
        assert_eq!(cf.mu[2], s2 / (rat(20, 1) * s1));
    }

    #[test]
    fn composition_formula_d1_extra_term_vanishes() {
        let f = Jet::new(
            rat(0, 1),
            vec![rat(1, 2), rat(2, 1), rat(1, 5), rat(-1, 3)],
        );
        let g = Jet::new(
            rat(1, 2),
            vec![rat(0, 1), rat(1, 1), rat(1, 4), rat(2, 7)],
        );
        let c = composition_check(&f, &g, 1).unwrap();
        assert_eq!(c.extra_term, rat(0, 1));
        assert!(c.holds);
    }

    #[test]
    fn composition_formula_d2_exact() {
        // note: z + z^2 + z^3 itself is not normal of order 2 at 0
        // (det M_2 = 0), so S_2 does not exist there; use a normal cubic.
        let f = Jet::new(
            rat(0, 1),
            vec![rat(0, 1), rat(1, 1), rat(1, 1), rat(2, 1), rat(0, 1), rat(0, 1)],
        );
        let c = composition_check(&f, &f, 2).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, c.rhs_sum.clone() + c.extra_term.clone());
        assert_ne!(c.extra_term, rat(0, 1));
    }

    #[test]
    fn composition_inequality_hypothesis_violation() {
        // g with S_1 < 0 (exp has S_1 = -1/2)
        let f = mobius_jet(5);
        let g = exp_jet(5);
        match composition_inequality_check(&f, &g, 2) {
            Err(Error::HypothesisViolated(_)) => {}
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn mobius_precomposition_identity() {
        // M = 2z + 1, f = exp jet, d = 1
        let m = RationalMap::mobius(rat(2, 1), rat(1, 1), rat(0, 1), rat(1, 1)).unwrap();
        let f = exp_jet(5);
        assert!(mobius_precomposition_check(&f, &m, 1).unwrap());
        // M = identity
        let id = RationalMap::mobius(rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)).unwrap();
        assert!(mobius_precomposition_check(&f, &id, 1).unwrap());
        // M = -z (sign symmetry)
        let neg = RationalMap::mobius(rat(-1, 1), rat(0, 1), rat(0, 1), rat(1, 1)).unwrap();
        assert!(mobius_precomposition_check(&f, &neg, 2).unwrap());
    }
}
