//! Pick-class certification of real rational maps, upper half-plane
//! sampling, cross-ratio matrix positivity, pointwise P_d(U) membership
//! over a grid, and a randomized matrix-monotonicity test.

use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jets::JetSource;
use crate::pade::{RationalMap, Value};
use crate::scalar::Scalar;
use crate::schwarzian::{
    pick_step_rational, schwarzian_det, schwarzian_sequence_general, LevelValue,
    SchwarzianSequence,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyMethod {
    SchwarzianSigns,
    DegreeReduction,
}

impl CertifyMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertifyMethod::SchwarzianSigns => "schwarzian-signs",
            CertifyMethod::DegreeReduction => "degree-reduction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pick,
    NotPick,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pick => "Pick",
            Verdict::NotPick => "NotPick",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// One level of certification evidence: the Schwarzian value at that level
/// (signs method) or the derivative of the reduced map (reduction method).
#[derive(Debug, Clone)]
pub struct LevelRecord<S> {
    pub level: usize,
    pub derivative_positive: Option<bool>,
    pub s_value: Option<S>,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct PickCertificate<S> {
    pub degree: usize,
    pub base: S,
    pub method: CertifyMethod,
    pub verdict: Verdict,
    /// All inequalities strict.
    pub strict: bool,
    /// All inequalities hold weakly (>= 0); by the characterization's
    /// converse this already certifies membership.
    pub weak: bool,
    pub levels: Vec<LevelRecord<S>>,
    /// Verdicts re-derived at two nearby points.
    pub cross_checks: Vec<(S, Verdict)>,
}

impl<S: Scalar> PickCertificate<S> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree,
            "base": self.base.to_json(),
            "method": self.method.as_str(),
            "verdict": self.verdict.as_str(),
            "strict": self.strict,
            "weak": self.weak,
            "levels": self.levels.iter().map(|l| serde_json::json!({
                "level": l.level,
                "derivative_positive": l.derivative_positive,
                "S": l.s_value.as_ref().map(|v| v.to_json()),
                "note": l.note,
            })).collect::<Vec<_>>(),
            "cross_checks": self.cross_checks.iter().map(|(x, v)| serde_json::json!({
                "point": x.to_json(),
                "verdict": v.as_str(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn certify_at<S: Scalar>(
    r: &RationalMap<S>,
    x: &S,
    method: CertifyMethod,
) -> Result<(Verdict, bool, bool, Vec<LevelRecord<S>>)> {
    let deg = r.degree_report().degree;
    if deg == 0 {
        // constants map into the closed half-plane
        return Ok((
            Verdict::Pick,
            true,
            true,
            vec![LevelRecord {
                level: 0,
                derivative_positive: None,
                s_value: None,
                note: Some("constant map, trivially Pick".into()),
            }],
        ));
    }
    if matches!(r.eval(x), Value::Infinite) {
        return Err(Error::PoleAtPoint);
    }
    match method {
        CertifyMethod::SchwarzianSigns => certify_signs(r, x, deg),
        CertifyMethod::DegreeReduction => certify_reduction(r, x, deg),
    }
}

fn certify_signs<S: Scalar>(
    r: &RationalMap<S>,
    x: &S,
    deg: usize,
) -> Result<(Verdict, bool, bool, Vec<LevelRecord<S>>)> {
    let jet = r.jet_at(x, 2 * deg + 1)?;
    let mut levels = Vec::new();
    let scale = jet
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .fold(S::one(), |a, b| if b > a { b } else { a });
    let df = jet.coeff(1);
    let df_near_zero = df.is_zero_scaled(&scale);
    let df_positive = df.signum() > 0 && !df_near_zero;
    levels.push(LevelRecord {
        level: 0,
        derivative_positive: Some(df_positive),
        s_value: None,
        note: Some(format!("DR(x) = {df}")),
    });
    if df_near_zero && !S::EXACT {
        return Ok((Verdict::Inconclusive, false, false, levels));
    }
    if !df_positive {
        return Ok((Verdict::NotPick, false, false, levels));
    }
    let mut strict = true;
    let mut weak = true;
    let mut inconclusive = false;
    for k in 1..deg {
        match schwarzian_det(&jet, k) {
            Ok(v) => {
                let near_zero = v.is_zero_scaled(&scale);
                let sgn = v.signum();
                if !S::EXACT && near_zero {
                    inconclusive = true;
                    strict = false;
                } else if sgn < 0 {
                    strict = false;
                    weak = false;
                } else if sgn == 0 {
                    strict = false;
                }
                levels.push(LevelRecord {
                    level: k,
                    derivative_positive: None,
                    s_value: Some(v),
                    note: None,
                });
            }
            Err(Error::NotNormal { .. }) => {
                // Pick maps of degree deg are normal of every order <= deg
                strict = false;
                weak = false;
                levels.push(LevelRecord {
                    level: k,
                    derivative_positive: None,
                    s_value: None,
                    note: Some("normality fails at this level".into()),
                });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let verdict = if inconclusive {
        Verdict::Inconclusive
    } else if weak {
        Verdict::Pick
    } else {
        Verdict::NotPick
    };
    Ok((verdict, strict && weak, weak, levels))
}

fn certify_reduction<S: Scalar>(
    r: &RationalMap<S>,
    x: &S,
    deg: usize,
) -> Result<(Verdict, bool, bool, Vec<LevelRecord<S>>)> {
    let mut current = r.recentered(x)?;
    if S::EXACT {
        current = current.reduced()?;
    }
    let mut levels = Vec::new();
    for level in 0..deg {
        let cur_deg = current.degree_report().degree;
        if cur_deg == 0 {
            levels.push(LevelRecord {
                level,
                derivative_positive: None,
                s_value: None,
                note: Some("reached a constant".into()),
            });
            return Ok((Verdict::Pick, true, true, levels));
        }
        let d_here = current.derivative_at_base();
        let scale = current
            .numerator()
            .iter()
            .chain(current.denominator())
            .map(|c| c.abs())
            .fold(S::one(), |a, b| if b > a { b } else { a });
        let near_zero = d_here.is_zero_scaled(&scale);
        let positive = d_here.signum() > 0 && !near_zero;
        levels.push(LevelRecord {
            level,
            derivative_positive: Some(positive),
            s_value: None,
            note: Some(format!("degree {cur_deg}, derivative {d_here}")),
        });
        if !S::EXACT && near_zero {
            return Ok((Verdict::Inconclusive, false, false, levels));
        }
        if !positive {
            return Ok((Verdict::NotPick, false, false, levels));
        }
        current = pick_step_rational(&current)?;
    }
    Ok((Verdict::Pick, true, true, levels))
}

/// Certify whether a real rational map is in the Pick class by checking
/// point conditions at `x`, cross-validating at two nearby points.
pub fn certify_pick<S: Scalar>(
    r: &RationalMap<S>,
    x: &S,
    method: CertifyMethod,
) -> Result<PickCertificate<S>> {
    let deg = r.degree_report().degree;
    let (verdict, strict, weak, levels) = certify_at(r, x, method)?;
    // cross-validate at two more finite points
    let mut cross_checks = Vec::new();
    let mut candidates = Vec::new();
    for off in [(1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1), (3, 1), (-3, 1)] {
        candidates.push(x.clone() + S::from_ratio(off.0, off.1));
    }
    for cand in candidates {
        if cross_checks.len() >= 2 {
            break;
        }
        if matches!(r.eval(&cand), Value::Infinite) {
            continue;
        }
        if let Ok((v, _, _, _)) = certify_at(r, &cand, method) {
            cross_checks.push((cand, v));
        }
    }
    let mut verdict = verdict;
    if verdict != Verdict::Inconclusive
        && cross_checks
            .iter()
            .any(|(_, v)| *v != verdict && *v != Verdict::Inconclusive)
    {
        verdict = Verdict::Inconclusive;
    }
    Ok(PickCertificate {
        degree: deg,
        base: x.clone(),
        method,
        verdict,
        strict,
        weak,
        levels,
        cross_checks,
    })
}

/// Rectangular sampling grid in the upper half-plane.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub re_lo: f64,
    pub re_hi: f64,
    pub re_count: usize,
    pub im_lo: f64,
    pub im_hi: f64,
    pub im_count: usize,
    /// Log-spaced imaginary values (the default covers several decades).
    pub log_im: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            re_lo: -3.0,
            re_hi: 3.0,
            re_count: 40,
            im_lo: 1e-3,
            im_hi: 1e3,
            im_count: 40,
            log_im: true,
        }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.re_count * self.im_count);
        for i in 0..self.re_count {
            let re = if self.re_count == 1 {
                self.re_lo
            } else {
                self.re_lo + (self.re_hi - self.re_lo) * i as f64 / (self.re_count - 1) as f64
            };
            for j in 0..self.im_count {
                let im = if self.im_count == 1 {
                    self.im_lo
                } else if self.log_im {
                    let t = j as f64 / (self.im_count - 1) as f64;
                    self.im_lo * (self.im_hi / self.im_lo).powf(t)
                } else {
                    self.im_lo + (self.im_hi - self.im_lo) * j as f64 / (self.im_count - 1) as f64
                };
                out.push(Complex64::new(re, im));
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct HalfplaneReport {
    pub evaluated: usize,
    pub poles: usize,
    pub min_im: f64,
    pub argmin: Complex64,
    pub tol: f64,
    pub pass: bool,
}

impl HalfplaneReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "evaluated": self.evaluated,
            "poles": self.poles,
            "min_im": self.min_im,
            "argmin": {"re": self.argmin.re, "im": self.argmin.im},
            "tol": self.tol,
            "pass": self.pass,
        })
    }
}

/// Evaluate the map over a grid in the upper half-plane and report the
/// minimum imaginary part; PASS iff `min Im >= -tol` and no poles were hit.
pub fn halfplane_sample_check<S: Scalar>(
    r: &RationalMap<S>,
    grid: &GridSpec,
    tol: f64,
) -> HalfplaneReport {
    let rf = r.to_f64_map();
    let mut min_im = f64::INFINITY;
    let mut argmin = Complex64::new(f64::NAN, f64::NAN);
    let mut poles = 0usize;
    let pts = grid.points();
    for z in &pts {
        match rf.eval_complex(*z) {
            Some(w) => {
                if w.im < min_im {
                    min_im = w.im;
                    argmin = *z;
                }
            }
            None => poles += 1,
        }
    }
    HalfplaneReport {
        evaluated: pts.len(),
        poles,
        min_im,
        argmin,
        tol,
        pass: poles == 0 && min_im >= -tol,
    }
}

/// One sample for the cross-ratio matrix: a point, the function value and
/// the derivative there.
#[derive(Debug, Clone, Copy)]
pub struct CrossRatioSample {
    pub lambda: f64,
    pub value: f64,
    pub derivative: f64,
}

/// The matrix of square-rooted squared difference quotients normalized by
/// derivative products; unit diagonal by construction.
#[derive(Debug, Clone)]
pub struct CrossRatioMatrix {
    pub lambdas: Vec<f64>,
    pub entries: Vec<Vec<f64>>,
    /// Set when some inner expression was negative (precondition
    /// violation); the absolute value was used under the square root.
    pub negative_inner: bool,
}

pub fn crossratio_matrix(samples: &[CrossRatioSample]) -> Result<CrossRatioMatrix> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidParameter("no sample points".into()));
    }
    for i in 0..n {
        if samples[i].derivative == 0.0 {
            return Err(Error::CriticalPoint);
        }
        for j in 0..i {
            if samples[i].lambda == samples[j].lambda {
                return Err(Error::InvalidParameter(format!(
                    "coincident sample points at {}",
                    samples[i].lambda
                )));
            }
        }
    }
    let mut negative_inner = false;
    let mut entries = vec![vec![0.0; n]; n];
    for i in 0..n {
        entries[i][i] = 1.0;
        for j in 0..i {
            let dq = (samples[i].value - samples[j].value)
                / (samples[i].lambda - samples[j].lambda);
            let inner = dq * dq / (samples[i].derivative * samples[j].derivative);
            if inner < 0.0 {
                negative_inner = true;
            }
            let e = inner.abs().sqrt();
            entries[i][j] = e;
            entries[j][i] = e;
        }
    }
    Ok(CrossRatioMatrix {
        lambdas: samples.iter().map(|s| s.lambda).collect(),
        entries,
        negative_inner,
    })
}

/// Build the cross-ratio matrix for a rational map at given sample points.
pub fn crossratio_from_map<S: Scalar>(
    r: &RationalMap<S>,
    lambdas: &[S],
) -> Result<CrossRatioMatrix> {
    let samples = lambdas
        .iter()
        .map(|l| {
            let jet = r.jet_at(l, 1)?;
            Ok(CrossRatioSample {
                lambda: l.to_f64(),
                value: jet.coeff(0).to_f64(),
                derivative: jet.coeff(1).to_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    crossratio_matrix(&samples)
}

impl CrossRatioMatrix {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.lambdas.len();
        let m = DMatrix::from_fn(n, n, |i, j| self.entries[i][j]);
        let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambdas": self.lambdas,
            "entries": self.entries,
            "negative_inner": self.negative_inner,
            "eigenvalues": self.eigenvalues(),
        })
    }
}

/// Per-point result of a P_d membership scan.
#[derive(Debug, Clone)]
pub struct PdRow<S> {
    pub x: S,
    pub sequence: SchwarzianSequence<S>,
}

#[derive(Debug, Clone)]
pub struct PdReport<S> {
    pub d: usize,
    pub rows: Vec<PdRow<S>>,
    /// Smallest defined S_k across the grid: (k, value, point).
    pub min_value: Option<(usize, S, S)>,
    /// Points where some level had no approximant at all.
    pub undefined_points: usize,
    pub negative_points: usize,
    pub tol: f64,
    pub pass: bool,
}

impl<S: Scalar> PdReport<S> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "rows": self.rows.iter().map(|r| serde_json::json!({
                "x": r.x.to_json(),
                "sequence": r.sequence.to_json(),
            })).collect::<Vec<_>>(),
            "min": self.min_value.as_ref().map(|(k, v, x)| serde_json::json!({
                "k": k, "value": v.to_json(), "x": x.to_json(),
            })),
            "undefined_points": self.undefined_points,
            "negative_points": self.negative_points,
            "tol": self.tol,
            "pass": self.pass,
        })
    }
}

/// Compute `S_1 .. S_d` at every grid point and report the sign pattern.
/// PASS iff every level is defined and `>= -tol` (exactly `>= 0` on the
/// exact backend). A critical point inside the grid is an error.
pub fn pd_membership<S: Scalar>(
    source: &dyn JetSource<S>,
    d: usize,
    points: &[S],
    tol: f64,
) -> Result<PdReport<S>> {
    let mut rows = Vec::with_capacity(points.len());
    let mut min_value: Option<(usize, S, S)> = None;
    let mut undefined_points = 0usize;
    let mut negative_points = 0usize;
    for x in points {
        let jet = source.jet_at(x, 2 * d + 1)?;
        let seq = schwarzian_sequence_general(&jet, d)?;
        let mut any_undefined = false;
        let mut any_negative = false;
        for k in 1..=d {
            match seq.level(k) {
                Some(LevelValue::Defined(v)) => {
                    let neg = if S::EXACT {
                        v.signum() < 0
                    } else {
                        v.to_f64() < -tol
                    };
                    if neg {
                        any_negative = true;
                    }
                    let better = match &min_value {
                        None => true,
                        Some((_, best, _)) => v < best,
                    };
                    if better {
                        min_value = Some((k, v.clone(), x.clone()));
                    }
                }
                _ => any_undefined = true,
            }
        }
        if any_undefined {
            undefined_points += 1;
        }
        if any_negative {
            negative_points += 1;
        }
        rows.push(PdRow {
            x: x.clone(),
            sequence: seq,
        });
    }
    Ok(PdReport {
        d,
        rows,
        min_value,
        undefined_points,
        negative_points,
        tol,
        pass: undefined_points == 0 && negative_points == 0,
    })
}

/// Evenly spaced points strictly inside `(lo, hi)`.
pub fn uniform_grid<S: Scalar>(lo: &S, hi: &S, count: usize) -> Vec<S> {
    let n = count.max(1);
    let width = hi.clone() - lo.clone();
    (1..=n)
        .map(|i| {
            lo.clone()
                + width.clone() * S::from_int(i as i64) / S::from_int((n + 1) as i64)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct MonotoneConfig {
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_rejections: usize,
}

impl MonotoneConfig {
    pub fn new(order: usize, trials: usize, seed: u64) -> Self {
        MonotoneConfig {
            order,
            trials,
            seed,
            max_rejections: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MonotoneWitness {
    /// Row-major matrices of the worst pair.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub gap: f64,
    pub trial: usize,
}

#[derive(Debug, Clone)]
pub struct MonotoneReport {
    pub order: usize,
    pub trials_run: usize,
    pub sampling_misses: usize,
    pub failures: usize,
    pub min_gap: f64,
    pub witness: Option<MonotoneWitness>,
    pub pass: bool,
}

impl MonotoneReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order,
            "trials": self.trials_run,
            "sampling_misses": self.sampling_misses,
            "failures": self.failures,
            "min_eigenvalue": self.min_gap,
            "witness": self.witness.as_ref().map(|w| serde_json::json!({
                "A": w.a, "B": w.b, "gap": w.gap, "trial": w.trial,
            })),
            "pass": self.pass,
        })
    }
}

fn apply_scalar_function(f: &(dyn Fn(f64) -> f64 + Sync), m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| f(l)));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

/// `min eig( f(B) - f(A) )` for a fixed symmetric pair, with images taken
/// through eigendecomposition.
pub fn monotone_gap(
    f: &(dyn Fn(f64) -> f64 + Sync),
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> f64 {
    let fa = apply_scalar_function(f, a);
    let fb = apply_scalar_function(f, b);
    min_eigenvalue(&(fb - fa))
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    (&m + m.transpose()) * 0.5
}

fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()))
}

struct TrialOutcome {
    gap: f64,
    tau: f64,
    miss: bool,
    pair: Option<(DMatrix<f64>, DMatrix<f64>)>,
}

fn run_trial(
    f: &(dyn Fn(f64) -> f64 + Sync),
    u: (f64, f64),
    n: usize,
    seed: u64,
    trial: usize,
    max_rejections: usize,
) -> TrialOutcome {
    // per-trial rng: seed + trial index
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
    let c = 0.5 * (u.0 + u.1);
    let h = 0.5 * (u.1 - u.0);
    for _ in 0..max_rejections {
        let w = random_symmetric(&mut rng, n);
        let rho = spectral_radius(&w);
        let a = if rho > 0.0 {
            DMatrix::identity(n, n) * c + w * (0.6 * h / rho)
        } else {
            DMatrix::identity(n, n) * c
        };
        let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let p = &g * g.transpose();
        let rho_p = spectral_radius(&p);
        let b = if rho_p > 0.0 {
            &a + p * (0.2 * h / rho_p)
        } else {
            a.clone()
        };
        // rejection check: spectra must stay inside the open interval
        let in_u = |m: &DMatrix<f64>| {
            m.clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .all(|&l| l > u.0 && l < u.1)
        };
        if !in_u(&a) || !in_u(&b) {
            continue;
        }
        let gap = monotone_gap(f, &a, &b);
        let tau = 1e-9 * (&b - &a).norm();
        return TrialOutcome {
            gap,
            tau,
            miss: false,
            pair: Some((a, b)),
        };
    }
    TrialOutcome {
        gap: f64::INFINITY,
        tau: 0.0,
        miss: true,
        pair: None,
    }
}

/// Randomized matrix-monotonicity test: sample pairs `A <= B` with spectra
/// in `U`, compare `f(A)` and `f(B)` through eigendecomposition, and
/// report the minimum eigenvalue of `f(B) - f(A)` over all trials.
/// A trial fails when that eigenvalue drops below `-1e-9 ||B - A||`.
pub fn matrix_monotone_test(
    f: &(dyn Fn(f64) -> f64 + Sync),
    u: (f64, f64),
    cfg: &MonotoneConfig,
) -> Result<MonotoneReport> {
    if cfg.order == 0 {
        return Err(Error::InvalidParameter("matrix order must be >= 1".into()));
    }
    if !(u.0 < u.1) {
        return Err(Error::InvalidParameter("empty interval".into()));
    }
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(f, u, cfg.order, cfg.seed, t, cfg.max_rejections))
        .collect();
    let mut misses = 0usize;
    let mut failures = 0usize;
    let mut min_gap = f64::INFINITY;
    let mut witness: Option<MonotoneWitness> = None;
    for (t, o) in outcomes.iter().enumerate() {
        if o.miss {
            misses += 1;
            continue;
        }
        if o.gap < -o.tau {
            failures += 1;
        }
        if o.gap < min_gap {
            min_gap = o.gap;
            if let Some((a, b)) = &o.pair {
                witness = Some(MonotoneWitness {
                    a: a.iter().copied().collect(),
                    b: b.iter().copied().collect(),
                    gap: o.gap,
                    trial: t,
                });
            }
        }
    }
    if misses == cfg.trials {
        return Err(Error::SamplingFailure(cfg.max_rejections));
    }
    Ok(MonotoneReport {
        order: cfg.order,
        trials_run: cfg.trials,
        sampling_misses: misses,
        failures,
        min_gap,
        witness,
        pass: failures == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Scalar::from_ratio(n, d)
    }

    fn halfplane_mobius() -> RationalMap<Rational> {
        RationalMap::new(rat(0, 1), vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(-1, 1)])
            .unwrap()
    }

    #[test]
    fn certify_mobius_pick_both_methods() {
        let r = halfplane_mobius();
        for method in [CertifyMethod::SchwarzianSigns, CertifyMethod::DegreeReduction] {
            let c = certify_pick(&r, &rat(0, 1), method).unwrap();
            assert_eq!(c.verdict, Verdict::Pick, "{method:?}");
            assert!(c.strict);
        }
    }

    #[test]
    fn certify_square_not_pick() {
        // z^2 about 1: p(w) = (1+w)^2
        let r = RationalMap::new(
            rat(1, 1),
            vec![rat(1, 1), rat(2, 1), rat(1, 1)],
            vec![rat(1, 1)],
        )
        .unwrap();
        for method in [CertifyMethod::SchwarzianSigns, CertifyMethod::DegreeReduction] {
            let c = certify_pick(&r, &rat(1, 1), method).unwrap();
            assert_eq!(c.verdict, Verdict::NotPick, "{method:?}");
        }
        // the signs route sees S_1(z^2)(1) = -3/2
        let c = certify_pick(&r, &rat(1, 1), CertifyMethod::SchwarzianSigns).unwrap();
        assert_eq!(c.levels[1].s_value, Some(rat(-3, 2)));
    }

    #[test]
    fn certify_pole_rejected() {
        let r = halfplane_mobius();
        assert!(matches!(
            certify_pick(&r, &rat(1, 1), CertifyMethod::SchwarzianSigns),
            Err(Error::PoleAtPoint)
        ));
    }

    #[test]
    fn certify_constant_trivially_pick() {
        let r = RationalMap::constant(rat(0, 1), rat(3, 1));
        let c = certify_pick(&r, &rat(0, 1), CertifyMethod::DegreeReduction).unwrap();
        assert_eq!(c.verdict, Verdict::Pick);
    }

    #[test]
    fn halfplane_translation_and_square() {
        let shift = RationalMap::new(rat(0, 1), vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1)])
            .unwrap();
        let rep = halfplane_sample_check(&shift, &GridSpec::default(), 1e-12);
        assert!(rep.pass);
        assert!((rep.min_im - 1e-3).abs() < 1e-12);

        let square = RationalMap::new(
            rat(0, 1),
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
            vec![rat(1, 1)],
        )
        .unwrap();
        let rep = halfplane_sample_check(&square, &GridSpec::default(), 1e-12);
        assert!(!rep.pass);
        assert!(rep.min_im < 0.0);
    }

    #[test]
    fn halfplane_mobius_passes() {
        let rep = halfplane_sample_check(&halfplane_mobius(), &GridSpec::default(), 1e-12);
        assert!(rep.pass, "min_im = {}", rep.min_im);
    }

    #[test]
    fn crossratio_mobius_rank_one() {
        let m = crossratio_from_map(&halfplane_mobius(), &[rat(0, 1), rat(1, 4), rat(1, 2)])
            .unwrap();
        for row in &m.entries {
            for e in row {
                assert!((e - 1.0).abs() < 1e-12);
            }
        }
        let ev = m.eigenvalues();
        assert!((ev[2] - 3.0).abs() < 1e-10);
        assert!(ev[0].abs() < 1e-10 && ev[1].abs() < 1e-10);
        assert!(ev[0] > -1e-10);
    }

    #[test]
    fn crossratio_single_point() {
        let m = crossratio_matrix(&[CrossRatioSample {
            lambda: 0.0,
            value: 1.0,
            derivative: 2.0,
        }])
        .unwrap();
        assert_eq!(m.entries, vec![vec![1.0]]);
        assert!((m.eigenvalues()[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn crossratio_coincident_points_rejected() {
        let s = CrossRatioSample {
            lambda: 1.0,
            value: 0.0,
            derivative: 1.0,
        };
        assert!(crossratio_matrix(&[s, s]).is_err());
    }

    #[test]
    fn pd_membership_mobius_all_zero() {
        let r = halfplane_mobius();
        let grid = uniform_grid(&rat(-1, 1), &rat(1, 2), 7);
        let rep = pd_membership(&r, 3, &grid, 0.0).unwrap();
        assert!(rep.pass);
        for row in &rep.rows {
            for k in 1..=3 {
                assert_eq!(row.sequence.value(k), Some(&rat(0, 1)));
            }
        }
    }

    #[test]
    fn pd_membership_sign_map_z_plus_z_cubed() {
        // S_1(z + z^3) changes sign on (-1, 1); the report records it
        let r = RationalMap::new(
            rat(0, 1),
            vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(1, 1)],
        )
        .unwrap();
        let grid = uniform_grid(&rat(-9, 10), &rat(9, 10), 9);
        let rep = pd_membership(&r, 1, &grid, 0.0).unwrap();
        assert!(!rep.pass);
        assert!(rep.negative_points > 0);
        // S_1(z+z^3) = 6z(1+3z^2)... sign follows x: check midpoint symmetry
        let neg = rep
            .rows
            .iter()
            .filter(|row| row.sequence.value(1).map(|v| v.signum() < 0) == Some(true))
            .count();
        assert!(neg > 0);
    }

    #[test]
    fn monotone_affine_passes() {
        let cfg = MonotoneConfig::new(3, 64, 7);
        let rep = matrix_monotone_test(&|t| 2.0 * t + 1.0, (-1.0, 1.0), &cfg).unwrap();
        assert!(rep.pass, "min gap {}", rep.min_gap);
        assert!(rep.min_gap >= -1e-12);
    }

    #[test]
    fn monotone_square_fixture_fails() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let b = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let gap = monotone_gap(&|t| t * t, &a, &b);
        let expect = (3.0 - 13.0f64.sqrt()) / 2.0;
        assert!((gap - expect).abs() < 1e-12, "gap {gap} expect {expect}");
    }

    #[test]
    fn monotone_sqrt_passes() {
        let cfg = MonotoneConfig::new(3, 200, 42);
        let rep = matrix_monotone_test(&|t| t.sqrt(), (0.0, 4.0), &cfg).unwrap();
        assert!(rep.pass, "min gap {}", rep.min_gap);
        assert!(rep.min_gap >= -1e-9);
    }

    #[test]
    fn monotone_square_random_fails() {
        let cfg = MonotoneConfig::new(2, 500, 11);
        let rep = matrix_monotone_test(&|t| t * t, (-1.0, 1.0), &cfg).unwrap();
        assert!(!rep.pass);
    }
}
