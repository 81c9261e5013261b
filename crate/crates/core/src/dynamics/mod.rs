//! Interval map families on [0,1], orbit and first-entry bookkeeping,
//! forward jet transport, inverse-branch Schwarzian sequences, and the
//! first-return positivity scan.

mod bigfloat;
mod kernel;

pub use kernel::{stern_brocot_samples, CertifiedValue, ReportedValue};

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::jets::{Jet, JetSource};
use crate::poly;
use crate::scalar::{Rational, Scalar};
use crate::schwarzian::{schwarzian_recursive, SchwarzianSequence};

/// A critical point with its flatness order (the exponent `α` of the
/// non-flat power factorization; 2 for a quadratic extremum).
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint<S> {
    pub location: S,
    pub flatness: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind<S> {
    /// Polynomial coefficients in ascending powers, over [0,1].
    Polynomial(Vec<S>),
    /// `post ∘ q_{α,a} ∘ pre` with polynomial `pre`, `post`.
    Composite {
        post: Vec<S>,
        alpha: S,
        a: S,
        pre: Vec<S>,
    },
}

/// A self-map of [0,1] with declared critical-point metadata, validated at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMap<S> {
    kind: MapKind<S>,
    critical_points: Vec<CriticalPoint<S>>,
}

const GRID_VALIDATION_POINTS: usize = 257;
const FLOAT_RANGE_TOL: f64 = 1e-9;

impl<S: Scalar> IntervalMap<S> {
    pub fn new_polynomial(
        coeffs: Vec<S>,
        critical_points: Vec<CriticalPoint<S>>,
    ) -> Result<Self> {
        let coeffs = poly::trim(coeffs);
        let deriv = poly::derivative(&coeffs);
        for cp in &critical_points {
            if cp.location <= S::zero() || cp.location >= S::one() {
                return Err(Error::InvalidMap(format!(
                    "critical point {} outside (0,1)",
                    cp.location
                )));
            }
            let dv = poly::eval(&deriv, &cp.location);
            let scale = coeffs
                .iter()
                .map(|c| c.abs())
                .fold(S::one(), |a, b| if b > a { b } else { a });
            if !dv.is_zero_scaled(&scale) {
                return Err(Error::InvalidMap(format!(
                    "declared critical point {} has Df = {}",
                    cp.location, dv
                )));
            }
        }
        let map = IntervalMap {
            kind: MapKind::Polynomial(coeffs),
            critical_points,
        };
        map.validate_range()?;
        Ok(map)
    }

    /// The family `q_{α,a}(x) = ((x+a)^α - a^α) / ((1+a)^α - a^α)`,
    /// exact for integer `α`, float otherwise.
    pub fn q_family(alpha: S, a: S) -> Result<Self> {
        if !(alpha > S::one()) {
            return Err(Error::InvalidParameter("q family needs α > 1".into()));
        }
        if a < S::zero() {
            return Err(Error::InvalidParameter("q family needs a >= 0".into()));
        }
        Ok(IntervalMap {
            kind: MapKind::Composite {
                post: vec![S::zero(), S::one()],
                alpha,
                a,
                pre: vec![S::zero(), S::one()],
            },
            critical_points: Vec::new(),
        })
    }

    /// The logistic map `4x(1-x)` with its quadratic critical point.
    pub fn logistic() -> Self {
        IntervalMap {
            kind: MapKind::Polynomial(vec![S::zero(), S::from_int(4), S::from_int(-4)]),
            critical_points: vec![CriticalPoint {
                location: S::from_ratio(1, 2),
                flatness: S::from_int(2),
            }],
        }
    }

    pub fn kind(&self) -> &MapKind<S> {
        &self.kind
    }

    pub fn critical_points(&self) -> &[CriticalPoint<S>] {
        &self.critical_points
    }

    /// Range validation: exact extremum check at the endpoints and all
    /// declared critical points, plus a dense float grid that also looks
    /// for undeclared derivative sign changes.
    fn validate_range(&self) -> Result<()> {
        // exact endpoint + critical value check
        let mut probes = vec![S::zero(), S::one()];
        for cp in &self.critical_points {
            probes.push(cp.location.clone());
        }
        for x in &probes {
            let v = self.eval(x)?;
            let inside = if S::EXACT {
                v >= S::zero() && v <= S::one()
            } else {
                let vf = v.to_f64();
                vf >= -FLOAT_RANGE_TOL && vf <= 1.0 + FLOAT_RANGE_TOL
            };
            if !inside {
                return Err(Error::InvalidMap(format!("f({x}) = {v} leaves [0,1]")));
            }
        }
        // dense float scan; zero derivative values at grid points must not
        // mask a sign change, so only nonzero signs update the tracker
        let mut last_nonzero: Option<(i8, f64)> = None;
        for i in 0..GRID_VALIDATION_POINTS {
            let xf = i as f64 / (GRID_VALIDATION_POINTS - 1) as f64;
            let x = S::from_f64(xf);
            let v = self.eval(&x)?.to_f64();
            if !(-FLOAT_RANGE_TOL..=1.0 + FLOAT_RANGE_TOL).contains(&v) {
                return Err(Error::InvalidMap(format!("f({xf}) ≈ {v} leaves [0,1]")));
            }
            if xf > 0.0 && xf < 1.0 {
                let dv = self.jet_at(&x, 1)?.coeff(1).to_f64();
                let sign = if dv > 0.0 {
                    1
                } else if dv < 0.0 {
                    -1
                } else {
                    0
                };
                if sign != 0 {
                    if let Some((ps, px)) = last_nonzero {
                        if ps != sign {
                            let declared = self.critical_points.iter().any(|cp| {
                                let c = cp.location.to_f64();
                                c >= px && c <= xf
                            });
                            if !declared {
                                return Err(Error::InvalidMap(format!(
                                    "derivative changes sign in ({px}, {xf}) with no declared critical point"
                                )));
                            }
                        }
                    }
                    last_nonzero = Some((sign, xf));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &S) -> Result<S> {
        match &self.kind {
            MapKind::Polynomial(c) => Ok(poly::eval(c, x)),
            MapKind::Composite {
                post,
                alpha,
                a,
                pre,
            } => {
                let u = poly::eval(pre, x);
                let qv = q_value(alpha, a, &u)?;
                Ok(poly::eval(post, &qv))
            }
        }
    }

    pub fn jet_at(&self, x: &S, order: usize) -> Result<Jet<S>> {
        match &self.kind {
            MapKind::Polynomial(c) => Ok(poly_jet(c, x, order)),
            MapKind::Composite {
                post,
                alpha,
                a,
                pre,
            } => {
                let pre_jet = poly_jet(pre, x, order);
                let u = pre_jet.value().clone();
                let q_jet = q_jet(alpha, a, &u, order)?;
                let inner = pre_jet.compose_into(&q_jet)?;
                let post_jet = poly_jet(post, inner.value(), order);
                inner.compose_into(&post_jet)
            }
        }
    }

    /// `(x, f(x), ..., f^n(x))`, failing if the orbit leaves [0,1].
    pub fn iterate(&self, x: &S, n: usize) -> Result<Vec<S>> {
        let mut orbit = Vec::with_capacity(n + 1);
        let mut cur = x.clone();
        for step in 0..=n {
            let inside = if S::EXACT {
                cur >= S::zero() && cur <= S::one()
            } else {
                let v = cur.to_f64();
                (-FLOAT_RANGE_TOL..=1.0 + FLOAT_RANGE_TOL).contains(&v)
            };
            if !inside {
                return Err(Error::InvalidMap(format!(
                    "orbit escaped [0,1] at step {step}: {cur}"
                )));
            }
            orbit.push(cur.clone());
            if step < n {
                cur = self.eval(&cur)?;
            }
        }
        Ok(orbit)
    }

    /// Minimal `s <= max_steps` with `f^s(x)` strictly inside the target.
    pub fn first_entry(
        &self,
        x: &S,
        target: &(S, S),
        max_steps: usize,
    ) -> Result<Option<usize>> {
        let mut cur = x.clone();
        for s in 0..=max_steps {
            if cur > target.0 && cur < target.1 {
                return Ok(Some(s));
            }
            if s < max_steps {
                cur = self.eval(&cur)?;
            }
        }
        Ok(None)
    }

    /// Jet of `f^steps` at `x` by repeated composition along the orbit.
    pub fn forward_jet(&self, x: &S, steps: usize, order: usize) -> Result<Jet<S>> {
        let mut acc = Jet::identity(x.clone(), order);
        for _ in 0..steps {
            let outer = self.jet_at(acc.value(), order)?;
            acc = acc.compose_into(&outer)?;
        }
        Ok(acc)
    }

    /// Schwarzian sequence of the inverse branch of `f^{s+1}` at
    /// `f^{s+1}(x)`: forward transport, reversion, Pick recursion.
    pub fn inverse_branch_schwarzians(
        &self,
        x: &S,
        s: usize,
        d: usize,
    ) -> Result<SchwarzianSequence<S>> {
        let order = 2 * d + 1;
        let mut acc = Jet::identity(x.clone(), order);
        for step in 0..=s {
            let outer = self.jet_at(acc.value(), order)?;
            let scale = outer
                .coeffs()
                .iter()
                .map(|c| c.abs())
                .fold(S::one(), |a, b| if b > a { b } else { a });
            if outer.coeff(1).is_zero_scaled(&scale) {
                return Err(Error::CriticalOrbit { step });
            }
            acc = acc.compose_into(&outer)?;
        }
        let inverse = acc.reverse()?;
        schwarzian_recursive(&inverse, d)
    }

    /// Coefficients of the `s`-fold symbolic composition (polynomial maps
    /// only); the independent oracle for jet transport.
    pub fn symbolic_power(&self, s: usize) -> Result<Vec<S>> {
        let MapKind::Polynomial(c) = &self.kind else {
            return Err(Error::InvalidParameter(
                "symbolic power needs a polynomial map".into(),
            ));
        };
        let mut acc = vec![S::zero(), S::one()];
        for _ in 0..s {
            acc = poly::compose(c, &acc);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kind = match &self.kind {
            MapKind::Polynomial(c) => serde_json::json!({
                "kind": "polynomial",
                "coeffs": c.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            }),
            MapKind::Composite {
                post,
                alpha,
                a,
                pre,
            } => serde_json::json!({
                "kind": "composite",
                "post": post.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
                "alpha": alpha.to_json(),
                "a": a.to_json(),
                "pre": pre.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            }),
        };
        serde_json::json!({
            "map": kind,
            "critical_points": self.critical_points.iter().map(|cp| serde_json::json!({
                "location": cp.location.to_json(),
                "flatness": cp.flatness.to_json(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let read_poly = |v: &serde_json::Value, key: &str| -> Result<Vec<S>> {
            v.get(key)
                .and_then(|c| c.as_array())
                .ok_or_else(|| Error::Parse(format!("interval map missing \"{key}\"")))?
                .iter()
                .map(S::from_json)
                .collect()
        };
        let critical_points = match v.get("critical_points") {
            None => Vec::new(),
            Some(arr) => arr
                .as_array()
                .ok_or_else(|| Error::Parse("critical_points must be an array".into()))?
                .iter()
                .map(|cp| {
                    Ok(CriticalPoint {
                        location: cp
                            .get("location")
                            .ok_or_else(|| Error::Parse("critical point needs location".into()))
                            .and_then(S::from_json)?,
                        flatness: match cp.get("flatness") {
                            Some(f) => S::from_json(f)?,
                            None => S::from_int(2),
                        },
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let m = v
            .get("map")
            .ok_or_else(|| Error::Parse("interval map missing \"map\"".into()))?;
        match m.get("kind").and_then(|k| k.as_str()) {
            Some("polynomial") => {
                IntervalMap::new_polynomial(read_poly(m, "coeffs")?, critical_points)
            }
            Some("composite") => {
                let alpha = m
                    .get("alpha")
                    .ok_or_else(|| Error::Parse("composite map needs alpha".into()))
                    .and_then(S::from_json)?;
                let a = m
                    .get("a")
                    .ok_or_else(|| Error::Parse("composite map needs a".into()))
                    .and_then(S::from_json)?;
                Ok(IntervalMap {
                    kind: MapKind::Composite {
                        post: read_poly(m, "post")?,
                        alpha,
                        a,
                        pre: read_poly(m, "pre")?,
                    },
                    critical_points,
                })
            }
            other => Err(Error::Parse(format!("unknown map kind {other:?}"))),
        }
    }
}

impl<S: Scalar> JetSource<S> for IntervalMap<S> {
    fn jet_at(&self, x: &S, order: usize) -> Result<Jet<S>> {
        IntervalMap::jet_at(self, x, order)
    }
}

fn poly_jet<S: Scalar>(c: &[S], x: &S, order: usize) -> Jet<S> {
    let mut shifted = poly::shift(c, x);
    shifted.truncate(order + 1);
    while shifted.len() < order + 1 {
        shifted.push(S::zero());
    }
    Jet::new(x.clone(), shifted)
}

fn q_norm<S: Scalar>(alpha: &S, a: &S) -> Result<S> {
    let one_a = S::one() + a.clone();
    let pow_hi = one_a
        .powf(alpha)
        .ok_or_else(|| Error::FloatRequired("non-integer α needs the float backend".into()))?;
    let pow_lo = if a.is_zero() {
        S::zero()
    } else {
        a.powf(alpha)
            .ok_or_else(|| Error::FloatRequired("non-integer α needs the float backend".into()))?
    };
    Ok(pow_hi - pow_lo)
}

fn q_value<S: Scalar>(alpha: &S, a: &S, u: &S) -> Result<S> {
    let norm = q_norm(alpha, a)?;
    let base = u.clone() + a.clone();
    let pow_u = if base.is_zero() {
        S::zero()
    } else {
        base.powf(alpha)
            .ok_or_else(|| Error::FloatRequired("non-integer α needs the float backend".into()))?
    };
    let pow_a = if a.is_zero() {
        S::zero()
    } else {
        a.powf(alpha)
            .ok_or_else(|| Error::FloatRequired("non-integer α needs the float backend".into()))?
    };
    Ok((pow_u - pow_a) / norm)
}

/// Jet of `q_{α,a}` at `u`: exact binomial expansion for integer `α`,
/// falling powers through `powf` otherwise.
fn q_jet<S: Scalar>(alpha: &S, a: &S, u: &S, order: usize) -> Result<Jet<S>> {
    let norm = q_norm(alpha, a)?;
    if let Some(n) = alpha.as_integer() {
        if n >= 2 {
            // ((x+a)^n - a^n)/norm as a polynomial, then Taylor shift
            let mut base = vec![a.clone(), S::one()];
            let mut pw = vec![S::one()];
            for _ in 0..n {
                pw = poly::mul(&pw, &base);
            }
            pw[0] = pw[0].clone() - a.clone().powi(n as i32);
            let inv = S::one() / norm;
            base = poly::scale(&pw, &inv);
            return Ok(poly_jet(&base, u, order));
        }
    }
    let base = u.clone() + a.clone();
    if base.is_zero() {
        return Err(Error::InvalidParameter(
            "q-family jet at the singular endpoint x + a = 0".into(),
        ));
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    // F_k = alpha (alpha-1) ... (alpha-k+1) / k! * (u+a)^{alpha-k} / norm
    let mut falling = S::one();
    for k in 0..=order {
        if k > 0 {
            falling = falling * (alpha.clone() - S::from_int(k as i64 - 1))
                / S::from_int(k as i64);
        }
        let exponent = alpha.clone() - S::from_int(k as i64);
        let pw = base
            .powf(&exponent)
            .ok_or_else(|| Error::FloatRequired("non-integer α needs the float backend".into()))?;
        let mut c = falling.clone() * pw / norm.clone();
        if k == 0 {
            let pow_a = if a.is_zero() {
                S::zero()
            } else {
                a.powf(alpha).ok_or_else(|| {
                    Error::FloatRequired("non-integer α needs the float backend".into())
                })?
            };
            c = c - pow_a / norm.clone();
        }
        coeffs.push(c);
    }
    Ok(Jet::new(u.clone(), coeffs))
}

/// Configuration of the first-return positivity scan.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub d: usize,
    pub eps_list: Vec<Rational>,
    pub sample_count: usize,
    pub max_steps: usize,
    /// Record every entry time, not just the minimal one.
    pub all_entries: bool,
}

/// One recorded inverse-branch event.
#[derive(Debug, Clone)]
pub struct ReturnEvent {
    pub x: Rational,
    pub s: usize,
    pub minimal: bool,
    pub eps: Rational,
    pub derivative: ReportedValue,
    /// Exact S_1 of the inverse branch.
    pub s1: ReportedValue,
    /// Certified S_2 .. S_d.
    pub higher: Vec<CertifiedValue>,
    /// Exact check of S_1(inverse) = -S_1(forward)/Df^2.
    pub identity_ok: bool,
    pub coeff_bits: u64,
}

impl ReturnEvent {
    pub fn all_positive(&self) -> bool {
        self.s1.sign > 0 && self.higher.iter().all(|h| h.certified && h.sign > 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x": self.x.to_string(),
            "s": self.s,
            "minimal": self.minimal,
            "eps": self.eps.to_string(),
            "derivative": {"approx": self.derivative.approx, "sign": self.derivative.sign},
            "S1": {"approx": self.s1.approx, "sign": self.s1.sign, "bits": self.s1.bits},
            "higher": self.higher.iter().map(|h| serde_json::json!({
                "k": h.k, "approx": h.approx, "sign": h.sign,
                "certified": h.certified, "precision_bits": h.precision_bits,
            })).collect::<Vec<_>>(),
            "identity_ok": self.identity_ok,
            "coeff_bits": self.coeff_bits,
        })
    }
}

/// A non-positive (or unresolved) value observed in the scan.
#[derive(Debug, Clone)]
pub struct Witness {
    pub x: Rational,
    pub s: usize,
    pub k: usize,
    pub approx: f64,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub struct EpsSummary {
    pub eps: Rational,
    pub events: usize,
    pub all_positive: usize,
    pub discarded_critical: usize,
    pub unresolved: usize,
    pub identity_failures: usize,
    pub no_entry_samples: usize,
    /// Smallest observed S_k per level 1..d (float view).
    pub min_levels: Vec<Option<f64>>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub d: usize,
    pub critical_point: Rational,
    pub sample_count: usize,
    pub max_steps: usize,
    pub events: Vec<ReturnEvent>,
    pub summaries: Vec<EpsSummary>,
    pub max_coeff_bits: u64,
}

impl ScanReport {
    pub fn to_json(&self, map: &IntervalMap<Rational>) -> serde_json::Value {
        serde_json::json!({
            "map": map.to_json(),
            "critical_point": self.critical_point.to_string(),
            "d": self.d,
            "samples": self.sample_count,
            "max_steps": self.max_steps,
            "max_coeff_bits": self.max_coeff_bits,
            "epsilons": self.summaries.iter().map(|s| serde_json::json!({
                "eps": s.eps.to_string(),
                "events": s.events,
                "all_positive": s.all_positive,
                "discarded_critical": s.discarded_critical,
                "unresolved": s.unresolved,
                "identity_failures": s.identity_failures,
                "no_entry_samples": s.no_entry_samples,
                "min_Sk": s.min_levels,
                "witnesses": s.witnesses.iter().map(|w| serde_json::json!({
                    "x": w.x.to_string(), "s": w.s, "k": w.k,
                    "approx": w.approx, "sign": w.sign,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "events": self.events.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Scan the inverse branches of first entries into `(c-ε, c+ε)` for
/// positivity of `S_1 .. S_d`. Samples are Stern–Brocot rationals; all
/// entry decisions and the `d = 1` data are exact, higher levels are
/// certified by outward-rounded interval arithmetic.
pub fn theorem1_scan(
    map: &IntervalMap<Rational>,
    c: &Rational,
    cfg: &ScanConfig,
) -> Result<ScanReport> {
    let MapKind::Polynomial(coeffs) = &map.kind else {
        return Err(Error::FloatRequired(
            "the scan runs polynomial maps in exact arithmetic".into(),
        ));
    };
    if cfg.d < 1 {
        return Err(Error::InvalidParameter("scan needs d >= 1".into()));
    }
    if !map
        .critical_points
        .iter()
        .any(|cp| &cp.location == c)
    {
        return Err(Error::InvalidParameter(format!(
            "{c} is not a declared critical point of the map"
        )));
    }
    let mut targets = Vec::with_capacity(cfg.eps_list.len());
    for eps in &cfg.eps_list {
        let lo = c.clone() - eps.clone();
        let hi = c.clone() + eps.clone();
        if lo <= Rational::zero() || hi >= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "neighbourhood (c-ε, c+ε) = ({lo}, {hi}) leaves (0,1)"
            )));
        }
        targets.push((lo, hi));
    }
    let cleared = kernel::ClearedPoly::from_rational(coeffs);
    let samples = stern_brocot_samples(cfg.sample_count);

    struct SampleOutcome {
        x: Rational,
        entries: Vec<Vec<usize>>,
        events: BTreeMap<usize, kernel::EventData>,
        escaped: Option<usize>,
    }

    let outcomes: Vec<Result<SampleOutcome>> = samples
        .par_iter()
        .map(|x| {
            let scan = kernel::scan_orbit(&cleared, x, &targets, cfg.max_steps, cfg.all_entries);
            let mut events = BTreeMap::new();
            let mut distinct: Vec<usize> =
                scan.entries.iter().flatten().copied().collect();
            distinct.sort_unstable();
            distinct.dedup();
            for s in distinct {
                events.insert(s, kernel::compute_event(&cleared, x, s, cfg.d)?);
            }
            Ok(SampleOutcome {
                x: x.clone(),
                entries: scan.entries,
                events,
                escaped: scan.escaped_at,
            })
        })
        .collect();

    let mut all_events = Vec::new();
    let mut summaries: Vec<EpsSummary> = cfg
        .eps_list
        .iter()
        .map(|eps| EpsSummary {
            eps: eps.clone(),
            events: 0,
            all_positive: 0,
            discarded_critical: 0,
            unresolved: 0,
            identity_failures: 0,
            no_entry_samples: 0,
            min_levels: vec![None; cfg.d],
            witnesses: Vec::new(),
        })
        .collect();
    let mut max_bits = 0u64;

    for outcome in outcomes {
        let o = outcome?;
        if let Some(step) = o.escaped {
            return Err(Error::InvalidMap(format!(
                "orbit of {} escaped [0,1] at step {step}",
                o.x
            )));
        }
        for (t, entry_times) in o.entries.iter().enumerate() {
            if entry_times.is_empty() {
                summaries[t].no_entry_samples += 1;
                continue;
            }
            for (idx, &s) in entry_times.iter().enumerate() {
                let data = &o.events[&s];
                max_bits = max_bits.max(data.coeff_bits);
                if data.critical {
                    summaries[t].discarded_critical += 1;
                    continue;
                }
                let event = ReturnEvent {
                    x: o.x.clone(),
                    s,
                    minimal: idx == 0,
                    eps: cfg.eps_list[t].clone(),
                    derivative: data.derivative.clone().expect("non-critical event"),
                    s1: data.s1.clone().expect("non-critical event"),
                    higher: data.higher.clone(),
                    identity_ok: data.identity_ok,
                    coeff_bits: data.coeff_bits,
                };
                let summary = &mut summaries[t];
                summary.events += 1;
                if event.all_positive() {
                    summary.all_positive += 1;
                }
                if !event.identity_ok {
                    summary.identity_failures += 1;
                }
                track_min(&mut summary.min_levels[0], event.s1.approx);
                if event.s1.sign <= 0 {
                    summary.witnesses.push(Witness {
                        x: event.x.clone(),
                        s,
                        k: 1,
                        approx: event.s1.approx,
                        sign: event.s1.sign,
                    });
                }
                for h in &event.higher {
                    track_min(&mut summary.min_levels[h.k - 1], h.approx);
                    if !h.certified {
                        summary.unresolved += 1;
                    } else if h.sign <= 0 {
                        summary.witnesses.push(Witness {
                            x: event.x.clone(),
                            s,
                            k: h.k,
                            approx: h.approx,
                            sign: h.sign,
                        });
                    }
                }
                all_events.push(event);
            }
        }
    }

    Ok(ScanReport {
        d: cfg.d,
        critical_point: c.clone(),
        sample_count: cfg.sample_count,
        max_steps: cfg.max_steps,
        events: all_events,
        summaries,
        max_coeff_bits: max_bits,
    })
}

fn track_min(slot: &mut Option<f64>, value: f64) {
    if value.is_nan() {
        return;
    }
    match slot {
        None => *slot = Some(value),
        Some(cur) => {
            if value < *cur {
                *slot = Some(value);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn logistic() -> IntervalMap<Rational> {
        IntervalMap::logistic()
    }

    #[test]
    fn iterate_critical_orbit() {
        let orbit = logistic().iterate(&rat(1, 2), 4).unwrap();
        assert_eq!(
            orbit,
            vec![rat(1, 2), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]
        );
    }

    #[test]
    fn iterate_fixed_point() {
        let orbit = logistic().iterate(&rat(3, 4), 3).unwrap();
        assert!(orbit.iter().all(|v| v == &rat(3, 4)));
    }

    #[test]
    fn iterate_zero_steps() {
        assert_eq!(logistic().iterate(&rat(1, 3), 0).unwrap(), vec![rat(1, 3)]);
    }

    #[test]
    fn first_entry_cases() {
        let m = logistic();
        let target = (rat(7, 16), rat(9, 16));
        // immediate entry
        assert_eq!(m.first_entry(&rat(1, 2), &target, 5).unwrap(), Some(0));
        // fixed point never entering
        assert_eq!(
            m.first_entry(&rat(0, 1), &target, 30).unwrap(),
            None
        );
        // direct-iteration oracle
        let s = m
            .first_entry(&rat(1, 3), &(rat(7, 16), rat(9, 16)), 50)
            .unwrap()
            .unwrap();
        let orbit = m.iterate(&rat(1, 3), s).unwrap();
        assert!(orbit[s] > rat(7, 16) && orbit[s] < rat(9, 16));
        for v in &orbit[..s] {
            assert!(!(v > &rat(7, 16) && v < &rat(9, 16)));
        }
    }

    #[test]
    fn forward_jet_fixtures() {
        let m = logistic();
        // steps = 0: identity jet
        assert_eq!(
            m.forward_jet(&rat(1, 3), 0, 2).unwrap(),
            Jet::identity(rat(1, 3), 2)
        );
        // one step at 1/4: (3/4, 2, -4, 0)
        let j = m.forward_jet(&rat(1, 4), 1, 3).unwrap();
        assert_eq!(
            j.coeffs(),
            &[rat(3, 4), rat(2, 1), rat(-4, 1), rat(0, 1)][..]
        );
    }

    #[test]
    fn forward_jet_derivative_product() {
        let m = logistic();
        let x = rat(2, 7);
        let steps = 6;
        let jet = m.forward_jet(&x, steps, 2).unwrap();
        let orbit = m.iterate(&x, steps).unwrap();
        let mut product = rat(1, 1);
        for v in &orbit[..steps] {
            product = product * m.jet_at(v, 1).unwrap().coeff(1);
        }
        assert_eq!(jet.coeff(1), product);
    }

    #[test]
    fn forward_jet_matches_symbolic_composition() {
        let m = logistic();
        let x = rat(1, 3);
        for s in 0..=4 {
            let sym = m.symbolic_power(s).unwrap();
            let jet = m.forward_jet(&x, s, 5).unwrap();
            let spoly = poly_jet(&sym, &x, 5);
            assert_eq!(jet, spoly, "power {s}");
        }
    }

    #[test]
    fn inverse_branch_fixture() {
        let m = logistic();
        let seq = m.inverse_branch_schwarzians(&rat(1, 4), 0, 1).unwrap();
        assert_eq!(seq.base(), &rat(3, 4));
        assert_eq!(seq.value(1), Some(&rat(6, 1)));
    }

    #[test]
    fn inverse_branch_critical_rejected() {
        let m = logistic();
        assert_eq!(
            m.inverse_branch_schwarzians(&rat(1, 2), 0, 1),
            Err(Error::CriticalOrbit { step: 0 })
        );
    }

    #[test]
    fn q_family_parameter_collapse() {
        // α = 2, a = 0 is x²
        let q: IntervalMap<Rational> = IntervalMap::q_family(rat(2, 1), rat(0, 1)).unwrap();
        assert_eq!(q.eval(&rat(1, 3)).unwrap(), rat(1, 9));
        // α = 2, a = 1: (x² + 2x)/3
        let q = IntervalMap::<Rational>::q_family(rat(2, 1), rat(1, 1)).unwrap();
        assert_eq!(q.eval(&rat(1, 2)).unwrap(), (rat(1, 4) + rat(1, 1)) / rat(3, 1));
    }

    #[test]
    fn q_family_endpoints() {
        for (alpha, a) in [(rat(2, 1), rat(0, 1)), (rat(3, 1), rat(1, 2)), (rat(2, 1), rat(1, 1))] {
            let q = IntervalMap::<Rational>::q_family(alpha, a).unwrap();
            assert_eq!(q.eval(&rat(0, 1)).unwrap(), rat(0, 1));
            assert_eq!(q.eval(&rat(1, 1)).unwrap(), rat(1, 1));
        }
    }

    #[test]
    fn q_family_float_non_integer_alpha() {
        let q: IntervalMap<f64> = IntervalMap::q_family(1.5, 0.25).unwrap();
        assert!((q.eval(&0.0).unwrap()).abs() < 1e-15);
        assert!((q.eval(&1.0).unwrap() - 1.0).abs() < 1e-15);
        // jet derivative matches a finite difference
        let j = q.jet_at(&0.5, 2).unwrap();
        let h = 1e-6;
        let fd = (q.eval(&(0.5 + h)).unwrap() - q.eval(&(0.5 - h)).unwrap()) / (2.0 * h);
        assert!((j.coeff(1) - fd).abs() < 1e-8);
    }

    #[test]
    fn q_family_exact_rejects_non_integer_alpha() {
        let q: IntervalMap<Rational> =
            IntervalMap::q_family(rat(3, 2), rat(0, 1)).unwrap();
        assert!(matches!(
            q.eval(&rat(1, 2)),
            Err(Error::FloatRequired(_))
        ));
    }

    #[test]
    fn q_family_invalid_parameters() {
        assert!(IntervalMap::<Rational>::q_family(rat(1, 1), rat(0, 1)).is_err());
        assert!(IntervalMap::<Rational>::q_family(rat(2, 1), rat(-1, 2)).is_err());
    }

    #[test]
    fn polynomial_validation_catches_range_escape() {
        // 2x leaves [0,1]
        let out = IntervalMap::<Rational>::new_polynomial(
            vec![rat(0, 1), rat(2, 1)],
            Vec::new(),
        );
        assert!(matches!(out, Err(Error::InvalidMap(_))));
    }

    #[test]
    fn polynomial_validation_catches_undeclared_critical_point() {
        // logistic without declaring 1/2
        let out = IntervalMap::<Rational>::new_polynomial(
            vec![rat(0, 1), rat(4, 1), rat(-4, 1)],
            Vec::new(),
        );
        assert!(matches!(out, Err(Error::InvalidMap(_))));
    }

    #[test]
    fn polynomial_validation_checks_declared_derivative() {
        let out = IntervalMap::<Rational>::new_polynomial(
            vec![rat(0, 1), rat(4, 1), rat(-4, 1)],
            vec![CriticalPoint {
                location: rat(1, 3),
                flatness: rat(2, 1),
            }],
        );
        assert!(matches!(out, Err(Error::InvalidMap(_))));
    }

    #[test]
    fn scan_rejects_map_without_critical_point() {
        let m = IntervalMap::<Rational>::new_polynomial(
            vec![rat(0, 1), rat(1, 1)],
            Vec::new(),
        )
        .unwrap();
        let cfg = ScanConfig {
            d: 1,
            eps_list: vec![rat(1, 8)],
            sample_count: 5,
            max_steps: 5,
            all_entries: false,
        };
        assert!(theorem1_scan(&m, &rat(1, 2), &cfg).is_err());
    }

    #[test]
    fn scan_small_logistic_d1() {
        let m = logistic();
        let cfg = ScanConfig {
            d: 1,
            eps_list: vec![rat(1, 8)],
            sample_count: 24,
            max_steps: 12,
            all_entries: false,
        };
        let rep = theorem1_scan(&m, &rat(1, 2), &cfg).unwrap();
        let summary = &rep.summaries[0];
        assert!(summary.events > 0);
        assert_eq!(summary.identity_failures, 0);
        assert_eq!(summary.events, summary.all_positive);
        assert!(summary.witnesses.is_empty());
        // every event's S_1 matches the generic machinery
        for e in rep.events.iter().take(6) {
            let seq = m.inverse_branch_schwarzians(&e.x, e.s, 1).unwrap();
            let expect = seq.value(1).unwrap().to_f64();
            assert!(
                (e.s1.approx - expect).abs() <= 1e-9 * expect.abs().max(1.0),
                "S1 mismatch at x={} s={}: {} vs {}",
                e.x,
                e.s,
                e.s1.approx,
                expect
            );
        }
    }

    #[test]
    fn scan_small_logistic_d2_certified() {
        let m = logistic();
        let cfg = ScanConfig {
            d: 2,
            eps_list: vec![rat(1, 8)],
            sample_count: 16,
            max_steps: 10,
            all_entries: false,
        };
        let rep = theorem1_scan(&m, &rat(1, 2), &cfg).unwrap();
        let summary = &rep.summaries[0];
        assert!(summary.events > 0);
        assert_eq!(summary.unresolved, 0);
        assert_eq!(summary.events, summary.all_positive);
        // cross-check certified S_2 against the exact generic machinery
        for e in rep.events.iter().take(4) {
            let seq = m.inverse_branch_schwarzians(&e.x, e.s, 2).unwrap();
            let expect = seq.value(2).unwrap().to_f64();
            let got = e.higher[0].approx;
            assert!(
                (got - expect).abs() <= 1e-9 * expect.abs().max(1.0),
                "S2 mismatch at x={} s={}: {got} vs {expect}",
                e.x,
                e.s
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let m = logistic();
        let v = m.to_json();
        let back = IntervalMap::<Rational>::from_json(&v).unwrap();
        assert_eq!(m, back);
    }
}
