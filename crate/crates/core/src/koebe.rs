//! Generalized Koebe inequality checker for maps with non-negative
//! Schwarzians up to order d, including the Möbius sharpness witness.
//!
//! The bound constant is `m!/n!`, the one the proof's final display
//! produces; the sharpness witness `x/(1-x)` on `(-1,1)` is consistent
//! only with that resolution (a regression test documents that the
//! inverted constant fails on it).

use crate::error::{Error, Result};
use crate::jets::JetSource;
use crate::pickclass::{pd_membership, PdReport};
use crate::scalar::{factorial, Scalar};

/// Interval endpoints; `None` marks an unbounded side.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval<S> {
    pub lo: Option<S>,
    pub hi: Option<S>,
}

impl<S: Scalar> Interval<S> {
    pub fn bounded(lo: S, hi: S) -> Self {
        Interval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn contains(&self, x: &S) -> bool {
        let above = self.lo.as_ref().map(|l| x > l).unwrap_or(true);
        let below = self.hi.as_ref().map(|h| x < h).unwrap_or(true);
        above && below
    }

    /// Distance to the finite boundary; `None` when the interval is the
    /// whole line.
    pub fn dist_to_boundary(&self, x: &S) -> Option<S> {
        let d_lo = self.lo.as_ref().map(|l| x.clone() - l.clone());
        let d_hi = self.hi.as_ref().map(|h| h.clone() - x.clone());
        match (d_lo, d_hi) {
            (Some(a), Some(b)) => Some(if a < b { a } else { b }),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }
}

/// Parameters of one bound evaluation: `|D^m f(x)|` against
/// `(m!/n!) dist(x,∂U)^{-(m-n)} |D^n f(x)|` with `n` odd,
/// `1 <= n <= m <= 2d`.
#[derive(Debug, Clone)]
pub struct KoebeQuery<S> {
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub interval: Interval<S>,
    pub x: S,
}

impl<S: Scalar> KoebeQuery<S> {
    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::InvalidParameter("koebe needs d >= 1".into()));
        }
        if self.n % 2 == 0 {
            return Err(Error::InvalidParameter("n must be odd".into()));
        }
        if !(1 <= self.n && self.n <= self.m && self.m <= 2 * self.d) {
            return Err(Error::InvalidParameter(
                "need 1 <= n <= m <= 2d".into(),
            ));
        }
        if !self.interval.contains(&self.x) {
            return Err(Error::InvalidParameter(
                "evaluation point must lie strictly inside the interval".into(),
            ));
        }
        Ok(())
    }
}

/// The bound value; `vacuous` when the interval has no finite endpoint and
/// `m > n` (the bound is +infinity).
#[derive(Debug, Clone, PartialEq)]
pub enum Bound<S> {
    Finite(S),
    Vacuous,
}

/// `(m!/n!) · dist(x, ∂U)^{-(m-n)} · |D^n f(x)|`.
pub fn koebe_bound<S: Scalar>(q: &KoebeQuery<S>, dn_f: &S) -> Result<Bound<S>> {
    q.validate()?;
    let constant = factorial::<S>(q.m) / factorial::<S>(q.n);
    if q.m == q.n {
        return Ok(Bound::Finite(dn_f.abs()));
    }
    match q.interval.dist_to_boundary(&q.x) {
        None => Ok(Bound::Vacuous),
        Some(dist) => {
            let power = dist.powi(-((q.m - q.n) as i32));
            Ok(Bound::Finite(constant * power * dn_f.abs()))
        }
    }
}

#[derive(Debug, Clone)]
pub struct KoebeRow<S> {
    pub x: S,
    pub dm: S,
    pub dn: S,
    pub dist: S,
    pub bound: S,
    /// `|D^m f| / bound`; `None` encodes 0/0 (reported as ratio 0) handled
    /// upstream, infinity never survives a passing membership check.
    pub ratio: S,
}

#[derive(Debug, Clone)]
pub struct KoebeReport<S> {
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub rows: Vec<KoebeRow<S>>,
    pub max_ratio: S,
    pub argmax: Option<S>,
    pub tol: f64,
    pub pass: bool,
    pub membership: PdReport<S>,
}

impl<S: Scalar> KoebeReport<S> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d, "m": self.m, "n": self.n,
            "rows": self.rows.iter().map(|r| serde_json::json!({
                "x": r.x.to_json(),
                "Dm": r.dm.to_json(),
                "Dn": r.dn.to_json(),
                "dist": r.dist.to_json(),
                "bound": r.bound.to_json(),
                "ratio": r.ratio.to_json(),
            })).collect::<Vec<_>>(),
            "summary": {
                "max_ratio": self.max_ratio.to_json(),
                "argmax": self.argmax.as_ref().map(|x| x.to_json()),
                "verdict": if self.pass { "PASS" } else { "FAIL" },
            },
            "tol": self.tol,
        })
    }
}

/// Check the bound at every grid point. Membership in `P_d(U)` is verified
/// first on the same grid and failure refuses the check.
pub fn koebe_check<S: Scalar>(
    source: &dyn JetSource<S>,
    d: usize,
    m: usize,
    n: usize,
    interval: &Interval<S>,
    points: &[S],
    tol: f64,
) -> Result<KoebeReport<S>> {
    let (Some(_), Some(_)) = (&interval.lo, &interval.hi) else {
        return Err(Error::InvalidParameter(
            "koebe_check needs a bounded interval".into(),
        ));
    };
    for x in points {
        let q = KoebeQuery {
            d,
            m,
            n,
            interval: interval.clone(),
            x: x.clone(),
        };
        q.validate()?;
    }
    let membership = pd_membership(source, d, points, tol)?;
    if !membership.pass {
        return Err(Error::MembershipFailure(format!(
            "{} points with negative levels, {} undefined",
            membership.negative_points, membership.undefined_points
        )));
    }
    let mut rows = Vec::with_capacity(points.len());
    let mut max_ratio = S::zero();
    let mut argmax = None;
    for x in points {
        let order = (2 * d + 1).max(m);
        let jet = source.jet_at(x, order)?;
        let dm = jet.derivative(m);
        let dn = jet.derivative(n);
        let dist = interval
            .dist_to_boundary(x)
            .expect("bounded interval has a finite distance");
        let constant = factorial::<S>(m) / factorial::<S>(n);
        let bound = if m == n {
            dn.abs()
        } else {
            constant * dist.powi(-((m - n) as i32)) * dn.abs()
        };
        let scale = if bound.abs() > dm.abs() {
            bound.abs()
        } else {
            dm.abs()
        };
        let ratio = if bound.is_zero_scaled(&scale) {
            // membership passed, so D^n = 0 forces D^m = 0: the ratio is 0
            S::zero()
        } else {
            dm.abs() / bound.clone()
        };
        if ratio > max_ratio {
            max_ratio = ratio.clone();
            argmax = Some(x.clone());
        }
        rows.push(KoebeRow {
            x: x.clone(),
            dm,
            dn,
            dist,
            bound,
            ratio,
        });
    }
    let pass = if S::EXACT {
        max_ratio <= S::one()
    } else {
        max_ratio.to_f64() <= 1.0 + tol
    };
    Ok(KoebeReport {
        d,
        m,
        n,
        rows,
        max_ratio,
        argmax,
        tol,
        pass,
        membership,
    })
}

/// Chebyshev-spaced float grid clipped to the central 98% of the interval.
pub fn chebyshev_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let r = 0.49 * (hi - lo);
    let n = count.max(1);
    let mut pts: Vec<f64> = (0..n)
        .map(|i| {
            let theta = std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64);
            mid + r * theta.cos()
        })
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pade::RationalMap;
    use crate::pickclass::uniform_grid;
    use crate::scalar::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Scalar::from_ratio(n, d)
    }

    fn witness() -> RationalMap<Rational> {
        // x / (1 - x) about 0
        RationalMap::new(rat(0, 1), vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(-1, 1)])
            .unwrap()
    }

    fn unit_interval() -> Interval<Rational> {
        Interval::bounded(rat(-1, 1), rat(1, 1))
    }

    #[test]
    fn bound_degenerate_exponent() {
        let q = KoebeQuery {
            d: 2,
            m: 3,
            n: 3,
            interval: unit_interval(),
            x: rat(1, 2),
        };
        assert_eq!(koebe_bound(&q, &rat(-7, 2)).unwrap(), Bound::Finite(rat(7, 2)));
    }

    #[test]
    fn bound_arithmetic_fixtures() {
        // U = (-1,1), x = 1/2, m = 2, n = 1, DnF = 4: 2 * 2 * 4 = 16
        let q = KoebeQuery {
            d: 1,
            m: 2,
            n: 1,
            interval: unit_interval(),
            x: rat(1, 2),
        };
        assert_eq!(koebe_bound(&q, &rat(4, 1)).unwrap(), Bound::Finite(rat(16, 1)));
        // U = (0,1), x = 1/2, m = 3, n = 1, DnF = 1: 6 * 4 * 1 = 24
        let q = KoebeQuery {
            d: 2,
            m: 3,
            n: 1,
            interval: Interval::bounded(rat(0, 1), rat(1, 1)),
            x: rat(1, 2),
        };
        assert_eq!(koebe_bound(&q, &rat(1, 1)).unwrap(), Bound::Finite(rat(24, 1)));
    }

    #[test]
    fn bound_unbounded_cases() {
        let q = KoebeQuery {
            d: 1,
            m: 2,
            n: 1,
            interval: Interval {
                lo: Some(rat(0, 1)),
                hi: None,
            },
            x: rat(1, 4),
        };
        // half-infinite: distance to the finite endpoint
        assert_eq!(koebe_bound(&q, &rat(1, 1)).unwrap(), Bound::Finite(rat(8, 1)));
        let q = KoebeQuery {
            d: 1,
            m: 2,
            n: 1,
            interval: Interval { lo: None, hi: None },
            x: rat(0, 1),
        };
        assert_eq!(koebe_bound(&q, &rat(1, 1)).unwrap(), Bound::Vacuous);
    }

    #[test]
    fn bound_validation() {
        let q = KoebeQuery {
            d: 1,
            m: 2,
            n: 2, // even n
            interval: unit_interval(),
            x: rat(0, 1),
        };
        assert!(koebe_bound(&q, &rat(1, 1)).is_err());
        let q = KoebeQuery {
            d: 1,
            m: 3, // m > 2d
            n: 1,
            interval: unit_interval(),
            x: rat(0, 1),
        };
        assert!(koebe_bound(&q, &rat(1, 1)).is_err());
    }

    #[test]
    fn mobius_witness_achieves_ratio_one() {
        let w = witness();
        let pts = [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4)];
        let rep = koebe_check(&w, 1, 2, 1, &unit_interval(), &pts, 0.0).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.max_ratio, rat(1, 1));
        for row in &rep.rows {
            // D^2 f / Df = 2/(1-x) = 2/dist at x >= 0: equality everywhere here
            assert_eq!(row.ratio, rat(1, 1), "at x = {}", row.x);
        }
    }

    #[test]
    fn statement_constant_violated_by_witness() {
        // with the n!/m! constant, the witness ratio becomes (m!/n!)^2 = 4
        let w = witness();
        let pts = [rat(1, 4)];
        let rep = koebe_check(&w, 1, 2, 1, &unit_interval(), &pts, 0.0).unwrap();
        let inverted_ratio = rep.rows[0].ratio.clone() * rat(2, 1) * rat(2, 1);
        assert!(inverted_ratio > rat(1, 1));
    }

    #[test]
    fn affine_ratio_zero() {
        let aff = RationalMap::new(rat(0, 1), vec![rat(1, 3), rat(2, 1)], vec![rat(1, 1)])
            .unwrap();
        let pts = uniform_grid(&rat(-1, 2), &rat(1, 2), 5);
        let rep = koebe_check(&aff, 1, 2, 1, &unit_interval(), &pts, 0.0).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.max_ratio, rat(0, 1));
    }

    #[test]
    fn membership_gate_refuses() {
        // z^2 about 1 on an interval where S_1 < 0
        let sq = RationalMap::new(
            rat(1, 1),
            vec![rat(1, 1), rat(2, 1), rat(1, 1)],
            vec![rat(1, 1)],
        )
        .unwrap();
        let pts = [rat(1, 1), rat(5, 4)];
        let out = koebe_check(&sq, 1, 2, 1, &Interval::bounded(rat(1, 2), rat(2, 1)), &pts, 0.0);
        assert!(matches!(out, Err(Error::MembershipFailure(_))));
    }

    #[test]
    fn scaling_invariance_under_affine_changes() {
        // replace f by a∘f∘b and rescale U: every ratio is unchanged
        let w = witness();
        let pts = [rat(0, 1), rat(1, 4), rat(1, 2)];
        let base = koebe_check(&w, 1, 2, 1, &unit_interval(), &pts, 0.0).unwrap();

        // b(z) = z/2 - 1/4, a(y) = 3y + 5; conjugated source on b^{-1}(U)
        let b1 = rat(1, 2);
        let b0 = rat(-1, 4);
        let a1 = rat(3, 1);
        let a0 = rat(5, 1);
        let w2 = w.clone();
        let conj = move |x: &Rational, order: usize| {
            let y = b1.clone() * x.clone() + b0.clone();
            let jet = w2.jet_at(&y, order)?;
            let mut coeffs: Vec<Rational> = Vec::with_capacity(order + 1);
            let mut b1p = rat(1, 1);
            for k in 0..=order {
                let c = a1.clone() * jet.coeff(k) * b1p.clone();
                coeffs.push(if k == 0 { c + a0.clone() } else { c });
                b1p = b1p * b1.clone();
            }
            Ok(crate::jets::Jet::new(x.clone(), coeffs))
        };
        // b^{-1}((-1,1)) = (-3/2, 5/2); points map through b^{-1}
        let conj_interval = Interval::bounded(rat(-3, 2), rat(5, 2));
        let conj_pts: Vec<Rational> = pts
            .iter()
            .map(|x| (x.clone() - rat(-1, 4)) / rat(1, 2))
            .collect();
        let conj_rep = koebe_check(&conj, 1, 2, 1, &conj_interval, &conj_pts, 0.0).unwrap();
        for (r0, r1) in base.rows.iter().zip(&conj_rep.rows) {
            assert_eq!(r0.ratio, r1.ratio);
        }
    }

    #[test]
    fn chebyshev_grid_inside_central_band() {
        let g = chebyshev_grid(-1.0, 1.0, 64);
        assert_eq!(g.len(), 64);
        assert!(g.iter().all(|&x| x > -0.99 && x < 0.99));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
