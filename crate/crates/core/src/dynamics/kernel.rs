//! Exact scan engine for the first-return positivity harness.
//!
//! Reducing rationals are useless here: orbit denominators of a degree-g
//! polynomial map square (or worse) every step, and gcd normalization on
//! multi-megabit integers dominates everything. The kernel instead uses
//! three gcd-free layers:
//!
//!  * membership and escape decisions through outward-rounded interval
//!    arithmetic, falling back to exact shared-denominator integers only
//!    when an orbit point cannot be separated from a boundary;
//!  * forward jets as integer numerators over one shared denominator
//!    (exact, multiply-only), with the order-3 event algebra carried in a
//!    monomial-tracked fraction form so integer sizes never exceed a
//!    small multiple of the jet itself;
//!  * certified-sign interval evaluation with a precision-escalation
//!    ladder for the higher-order Schwarzian values.

use num::bigint::Sign;
use num::{BigInt, One, Zero};

use super::bigfloat::Interval;
use crate::error::Result;
use crate::scalar::{rational_to_f64, Rational, Scalar};

/// Precision ladder for certified-sign evaluation.
const PRECISION_LADDER: [u32; 4] = [256, 768, 2304, 6912];

/// Precision ladder for certified orbit membership.
const ORBIT_LADDER: [u32; 2] = [192, 512];

/// Integer-cleared polynomial `P(x)/den`.
#[derive(Debug, Clone)]
pub(crate) struct ClearedPoly {
    pub coeffs: Vec<BigInt>,
    pub den: BigInt,
}

impl ClearedPoly {
    pub fn from_rational(coeffs: &[Rational]) -> ClearedPoly {
        use num::Integer;
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let cleared = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        ClearedPoly {
            coeffs: cleared,
            den,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Orbit value `a / d` (shared-denominator form, never reduced).
#[derive(Debug, Clone)]
pub(crate) struct OrbitPoint {
    pub a: BigInt,
    pub d: BigInt,
}

impl OrbitPoint {
    pub fn from_rational(x: &Rational) -> OrbitPoint {
        OrbitPoint {
            a: x.numer().clone(),
            d: x.denom().clone(),
        }
    }

    /// One exact orbit step: evaluate `P(a/d)/den`.
    pub fn step(&self, map: &ClearedPoly) -> OrbitPoint {
        let g = map.degree();
        let mut acc = map.coeffs[g].clone();
        for j in (0..g).rev() {
            acc = acc * &self.a + &map.coeffs[j] * d_pow(&self.d, (g - j) as u32);
        }
        let new_d = d_pow(&self.d, g as u32) * &map.den;
        OrbitPoint { a: acc, d: new_d }
    }

    /// Sign of `a/d - r`, exactly.
    pub fn cmp_rational(&self, r: &Rational) -> std::cmp::Ordering {
        let lhs = &self.a * r.denom();
        let rhs = r.numer() * &self.d;
        lhs.cmp(&rhs)
    }

    pub fn in_unit_interval(&self) -> bool {
        self.a.sign() != Sign::Minus && self.a <= self.d
    }
}

fn d_pow(d: &BigInt, k: u32) -> BigInt {
    match k {
        0 => BigInt::one(),
        1 => d.clone(),
        2 => d * d,
        _ => num::pow::pow(d.clone(), k as usize),
    }
}

/// Forward jet with one shared denominator: coefficient k is `n[k] / d`.
#[derive(Debug, Clone)]
pub(crate) struct SharedJet {
    pub n: Vec<BigInt>,
    pub d: BigInt,
}

impl SharedJet {
    /// Identity jet at `x = a/d`.
    pub fn identity(x: &OrbitPoint, order: usize) -> SharedJet {
        let mut n = vec![BigInt::zero(); order + 1];
        n[0] = x.a.clone();
        if order >= 1 {
            n[1] = x.d.clone();
        }
        SharedJet { n, d: x.d.clone() }
    }

    pub fn order(&self) -> usize {
        self.n.len() - 1
    }

    fn mul(&self, o: &SharedJet) -> SharedJet {
        let ord = self.order().min(o.order());
        let mut n = vec![BigInt::zero(); ord + 1];
        for i in 0..=ord {
            if self.n[i].is_zero() {
                continue;
            }
            for j in 0..=ord - i {
                n[i + j] += &self.n[i] * &o.n[j];
            }
        }
        SharedJet {
            n,
            d: &self.d * &o.d,
        }
    }

    /// Transport one map application: evaluate `P(jet)/den` by Horner,
    /// which is exactly the jet of `f ∘ (this)` for a global polynomial.
    pub fn step(&self, map: &ClearedPoly) -> SharedJet {
        let g = map.degree();
        let ord = self.order();
        let mut acc = SharedJet {
            n: {
                let mut v = vec![BigInt::zero(); ord + 1];
                v[0] = map.coeffs[g].clone();
                v
            },
            d: BigInt::one(),
        };
        for j in (0..g).rev() {
            acc = acc.mul(self);
            acc.n[0] += &map.coeffs[j] * &acc.d;
        }
        acc.d *= &map.den;
        acc
    }

    pub fn max_bits(&self) -> u64 {
        self.n
            .iter()
            .map(|c| c.bits())
            .chain(std::iter::once(self.d.bits()))
            .max()
            .unwrap_or(0)
    }
}

/// `coeff · N1^e1 · D^e2` where `N1` is the forward derivative numerator
/// and `D` the shared jet denominator. Every division in the order-3
/// event algebra is by a pure monomial, so the coefficient integers stay
/// within a small multiple of the jet size (a plain unreduced fraction
/// chain squares them).
#[derive(Debug, Clone)]
struct MonoFrac {
    coeff: BigInt,
    e1: i32,
    e2: i32,
}

/// Cached powers of the two tracked bases.
struct MonoCtx {
    n1: Vec<BigInt>,
    d: Vec<BigInt>,
}

impl MonoCtx {
    fn new(n1: BigInt, d: BigInt, max_pow: usize) -> MonoCtx {
        let mut n1s = vec![BigInt::one(), n1];
        let mut ds = vec![BigInt::one(), d];
        for k in 2..=max_pow {
            let t = &n1s[k - 1] * &n1s[1];
            n1s.push(t);
            let t = &ds[k - 1] * &ds[1];
            ds.push(t);
        }
        MonoCtx { n1: n1s, d: ds }
    }

    fn n1_sign(&self) -> i8 {
        match self.n1[1].sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }
}

impl MonoFrac {
    fn from_coeff(coeff: BigInt, e1: i32, e2: i32) -> MonoFrac {
        MonoFrac { coeff, e1, e2 }
    }

    fn int(k: i64) -> MonoFrac {
        MonoFrac {
            coeff: BigInt::from(k),
            e1: 0,
            e2: 0,
        }
    }

    fn mul(&self, o: &MonoFrac) -> MonoFrac {
        MonoFrac {
            coeff: &self.coeff * &o.coeff,
            e1: self.e1 + o.e1,
            e2: self.e2 + o.e2,
        }
    }

    fn scale(&self, k: i64) -> MonoFrac {
        MonoFrac {
            coeff: &self.coeff * BigInt::from(k),
            e1: self.e1,
            e2: self.e2,
        }
    }

    fn neg(&self) -> MonoFrac {
        MonoFrac {
            coeff: -&self.coeff,
            e1: self.e1,
            e2: self.e2,
        }
    }

    /// Divide by a pure monomial `±N1^a D^b` (coefficient ±1).
    fn div_monomial(&self, o: &MonoFrac) -> MonoFrac {
        let negate = match o.coeff.sign() {
            Sign::Plus => false,
            Sign::Minus => true,
            Sign::NoSign => panic!("division by zero monomial"),
        };
        debug_assert!(o.coeff.magnitude().is_one(), "divisor must be a monomial");
        let coeff = if negate {
            -&self.coeff
        } else {
            self.coeff.clone()
        };
        MonoFrac {
            coeff,
            e1: self.e1 - o.e1,
            e2: self.e2 - o.e2,
        }
    }

    /// Align to common exponents and combine coefficients.
    fn sub(&self, o: &MonoFrac, ctx: &MonoCtx) -> MonoFrac {
        let e1 = self.e1.min(o.e1);
        let e2 = self.e2.min(o.e2);
        let lift = |m: &MonoFrac| -> BigInt {
            let mut c = m.coeff.clone();
            let d1 = (m.e1 - e1) as usize;
            if d1 > 0 {
                c *= &ctx.n1[d1];
            }
            let d2 = (m.e2 - e2) as usize;
            if d2 > 0 {
                c *= &ctx.d[d2];
            }
            c
        };
        MonoFrac {
            coeff: lift(self) - lift(o),
            e1,
            e2,
        }
    }

    fn add(&self, o: &MonoFrac, ctx: &MonoCtx) -> MonoFrac {
        self.sub(&o.neg(), ctx)
    }

    fn sign(&self, ctx: &MonoCtx) -> i8 {
        let mut s = match self.coeff.sign() {
            Sign::Minus => -1,
            Sign::NoSign => return 0,
            Sign::Plus => 1,
        };
        if self.e1.rem_euclid(2) == 1 && ctx.n1_sign() < 0 {
            s = -s;
        }
        s
    }

    fn eq_exact(&self, o: &MonoFrac, ctx: &MonoCtx) -> bool {
        self.sub(o, ctx).coeff.is_zero()
    }

    fn to_f64(&self, ctx: &MonoCtx) -> f64 {
        let mut num = self.coeff.clone();
        let mut den = BigInt::one();
        for (e, base) in [(self.e1, &ctx.n1), (self.e2, &ctx.d)] {
            if e >= 0 {
                num *= &base[e as usize];
            } else {
                den *= &base[(-e) as usize];
            }
        }
        rational_to_f64(&num, &den)
    }

    fn bits(&self, ctx: &MonoCtx) -> u64 {
        self.coeff.bits()
            + (self.e1.unsigned_abs() as u64) * ctx.n1[1].bits()
            + (self.e2.unsigned_abs() as u64) * ctx.d[1].bits()
    }
}

/// Interval jet (base point implicit).
#[derive(Debug, Clone)]
pub(crate) struct IntervalJet {
    pub c: Vec<Interval>,
}

impl IntervalJet {
    pub fn identity(x: &OrbitPoint, order: usize, p: u32) -> IntervalJet {
        let mut c = vec![Interval::zero(); order + 1];
        c[0] = Interval::from_big_ratio(&x.a, &x.d, p);
        if order >= 1 {
            c[1] = Interval::from_int(1);
        }
        IntervalJet { c }
    }

    fn mul(&self, o: &IntervalJet, p: u32) -> IntervalJet {
        let ord = self.c.len().min(o.c.len()) - 1;
        let mut c = vec![Interval::zero(); ord + 1];
        for i in 0..=ord {
            for j in 0..=ord - i {
                let t = self.c[i].mul(&o.c[j], p);
                c[i + j] = c[i + j].add(&t, p);
            }
        }
        IntervalJet { c }
    }

    pub fn step(&self, map: &ClearedPoly, p: u32) -> IntervalJet {
        let g = map.degree();
        let ord = self.c.len() - 1;
        let inv_den = Interval::from_int(1)
            .div(&Interval::from_bigint(&map.den), p)
            .expect("nonzero clearing denominator");
        let mut acc = IntervalJet {
            c: {
                let mut v = vec![Interval::zero(); ord + 1];
                v[0] = Interval::from_bigint(&map.coeffs[g]);
                v
            },
        };
        for j in (0..g).rev() {
            acc = acc.mul(self, p);
            acc.c[0] = acc.c[0].add(&Interval::from_bigint(&map.coeffs[j]), p);
        }
        for e in &mut acc.c {
            *e = e.mul(&inv_den, p);
        }
        acc
    }

    /// Series reversion; `None` when the derivative interval straddles 0.
    pub fn reverse(&self, p: u32) -> Option<IntervalJet> {
        let n = self.c.len() - 1;
        let inv_u1 = Interval::from_int(1).div(&self.c[1], p)?;
        let mut u = self.clone();
        u.c[0] = Interval::zero();
        let mut powers: Vec<IntervalJet> = Vec::with_capacity(n + 1);
        let mut one = IntervalJet {
            c: vec![Interval::zero(); n + 1],
        };
        one.c[0] = Interval::from_int(1);
        powers.push(one);
        for j in 1..=n {
            let prev = powers[j - 1].clone();
            powers.push(prev.mul(&u, p));
        }
        let mut g = vec![Interval::zero(); n + 1];
        g[1] = inv_u1.clone();
        let mut inv_pow = inv_u1.clone();
        for k in 2..=n {
            let mut acc = Interval::zero();
            for j in 1..k {
                let t = g[j].mul(&powers[j].c[k], p);
                acc = acc.add(&t, p);
            }
            inv_pow = inv_pow.mul(&inv_u1, p);
            g[k] = acc.neg().mul(&inv_pow, p);
        }
        g[0] = Interval::zero();
        Some(IntervalJet { c: g })
    }
}

/// Determinant by Laplace expansion (no pivot divisions, interval-safe).
fn interval_det(m: &[Vec<Interval>], p: u32) -> Interval {
    let n = m.len();
    if n == 0 {
        return Interval::from_int(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Interval::zero();
    for (j, pivot) in m[0].iter().enumerate() {
        let minor: Vec<Vec<Interval>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let sub = interval_det(&minor, p);
        let term = pivot.mul(&sub, p);
        acc = if j % 2 == 0 {
            acc.add(&term, p)
        } else {
            acc.sub(&term, p)
        };
    }
    acc
}

fn interval_hankel(jet: &IntervalJet, dim: usize) -> Vec<Vec<Interval>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| jet.c[i + j + 1].clone()).collect())
        .collect()
}

/// `S_k` of an interval jet by the determinant ratio; `None` on a
/// zero-straddling divisor.
fn interval_schwarzian(jet: &IntervalJet, k: usize, p: u32) -> Option<Interval> {
    let num = interval_det(&interval_hankel(jet, k + 1), p);
    let den = interval_det(&interval_hankel(jet, k), p);
    let df = jet.c[1].clone();
    let denom = df.mul(&den, p);
    let ratio = num.div(&denom, p)?;
    let mut fac = 1i64;
    for t in 2..=(2 * k + 1) as i64 {
        fac *= t;
    }
    Some(ratio.mul(&Interval::from_int(fac), p))
}

/// A certified higher-order value: sign proven by interval arithmetic at
/// some ladder precision, or unresolved at the cap.
#[derive(Debug, Clone)]
pub struct CertifiedValue {
    pub k: usize,
    pub approx: f64,
    pub sign: i8,
    pub certified: bool,
    pub precision_bits: u32,
}

/// Exactly computed value (unreduced fraction), reported compactly.
#[derive(Debug, Clone)]
pub struct ReportedValue {
    pub approx: f64,
    pub sign: i8,
    pub bits: u64,
}

/// Everything the scan records for one inverse-branch event.
#[derive(Debug, Clone)]
pub(crate) struct EventData {
    pub critical: bool,
    pub derivative: Option<ReportedValue>,
    pub s1: Option<ReportedValue>,
    pub identity_ok: bool,
    pub higher: Vec<CertifiedValue>,
    pub coeff_bits: u64,
}

/// Compute the exact order-3 data and certified higher levels for the
/// inverse branch of `f^{s+1}` at the sample `x`.
pub(crate) fn compute_event(
    map: &ClearedPoly,
    x: &Rational,
    s: usize,
    d: usize,
) -> Result<EventData> {
    let x0 = OrbitPoint::from_rational(x);
    // exact order-3 forward jet
    let mut jet = SharedJet::identity(&x0, 3);
    for _ in 0..=s {
        jet = jet.step(map);
    }
    let coeff_bits = jet.max_bits();
    if jet.n[1].is_zero() {
        return Ok(EventData {
            critical: true,
            derivative: None,
            s1: None,
            identity_ok: false,
            higher: Vec::new(),
            coeff_bits,
        });
    }

    // F_1 = N1/D is the tracked monomial base; F_2, F_3 carry their
    // numerators in the coefficient slot.
    let ctx = MonoCtx::new(jet.n[1].clone(), jet.d.clone(), 6);
    let f1 = MonoFrac::from_coeff(BigInt::one(), 1, -1);
    let f2 = MonoFrac::from_coeff(jet.n[2].clone(), 0, -1);
    let f3 = MonoFrac::from_coeff(jet.n[3].clone(), 0, -1);

    // triangular reversion of the order-3 jet
    let u2_2 = f1.mul(&f1);
    let u2_3 = f1.mul(&f2).scale(2);
    let u3_3 = u2_2.mul(&f1);
    let g1 = MonoFrac::int(1).div_monomial(&f1);
    let g2 = g1.mul(&f2).neg().div_monomial(&u2_2);
    let g3 = g1
        .mul(&f3)
        .add(&g2.mul(&u2_3), &ctx)
        .neg()
        .div_monomial(&u3_3);

    // S_1 of the inverse branch via its Hankel ratio
    let det2_inv = g1.mul(&g3).sub(&g2.mul(&g2), &ctx);
    let s1_inv = det2_inv.scale(6).div_monomial(&g1.mul(&g1));

    // S_1 of the forward jet by the same route
    let det2_fwd = f1.mul(&f3).sub(&f2.mul(&f2), &ctx);
    let s1_fwd = det2_fwd.scale(6).div_monomial(&u2_2);

    // d = 1 specialization: S_1(inverse) · Df^2 = -S_1(forward), exactly.
    let identity_ok = s1_inv.mul(&u2_2).eq_exact(&s1_fwd.neg(), &ctx);

    let derivative = ReportedValue {
        approx: rational_to_f64(&jet.n[1], &jet.d),
        sign: f1.sign(&ctx),
        bits: jet.n[1].bits() + jet.d.bits(),
    };
    let s1 = ReportedValue {
        approx: s1_inv.to_f64(&ctx),
        sign: s1_inv.sign(&ctx),
        bits: s1_inv.bits(&ctx),
    };

    // higher levels by certified intervals with precision escalation
    let mut higher = Vec::with_capacity(d.saturating_sub(1));
    if d >= 2 {
        let order = 2 * d + 1;
        let mut resolved: Vec<Option<CertifiedValue>> = vec![None; d + 1];
        for &p in &PRECISION_LADDER {
            let mut ijet = IntervalJet::identity(&x0, order, p);
            for _ in 0..=s {
                ijet = ijet.step(map, p);
            }
            let Some(inv) = ijet.reverse(p) else { continue };
            let mut all_done = true;
            for k in 2..=d {
                if resolved[k].is_some() {
                    continue;
                }
                match interval_schwarzian(&inv, k, p) {
                    Some(v) => match v.certified_sign() {
                        Some(sign) => {
                            resolved[k] = Some(CertifiedValue {
                                k,
                                approx: v.midpoint_f64(),
                                sign,
                                certified: true,
                                precision_bits: p,
                            });
                        }
                        None => all_done = false,
                    },
                    None => all_done = false,
                }
            }
            if all_done {
                break;
            }
        }
        for k in 2..=d {
            higher.push(resolved[k].take().unwrap_or(CertifiedValue {
                k,
                approx: f64::NAN,
                sign: 0,
                certified: false,
                precision_bits: *PRECISION_LADDER.last().unwrap(),
            }));
        }
    }

    Ok(EventData {
        critical: false,
        derivative: Some(derivative),
        s1: Some(s1),
        identity_ok,
        higher,
        coeff_bits,
    })
}

/// Entry bookkeeping for one sample against several targets.
pub(crate) struct OrbitScan {
    /// For each target interval: entry times `s <= max_steps`.
    pub entries: Vec<Vec<usize>>,
    pub escaped_at: Option<usize>,
}

#[derive(Clone, Copy, PartialEq)]
enum Membership {
    Inside,
    Outside,
    Uncertain,
}

/// Certified membership scan through interval arithmetic, escalating
/// precision and finally replaying the orbit exactly when a point cannot
/// be separated from a target boundary.
pub(crate) fn scan_orbit(
    map: &ClearedPoly,
    x: &Rational,
    targets: &[(Rational, Rational)],
    max_steps: usize,
    all_entries: bool,
) -> OrbitScan {
    'ladder: for &p in &ORBIT_LADDER {
        let mut entries: Vec<Vec<usize>> = vec![Vec::new(); targets.len()];
        let x0 = OrbitPoint::from_rational(x);
        let mut cur = Interval::from_big_ratio(&x0.a, &x0.d, p);
        let inv_den = Interval::from_int(1)
            .div(&Interval::from_bigint(&map.den), p)
            .expect("nonzero clearing denominator");
        for s in 0..=max_steps {
            let zero = BigInt::zero();
            let one = BigInt::one();
            let below = cur.hi.cmp_rational(&zero, &one) == std::cmp::Ordering::Less;
            let above = cur.lo.cmp_rational(&one, &one) == std::cmp::Ordering::Greater;
            if below || above {
                return OrbitScan {
                    entries,
                    escaped_at: Some(s),
                };
            }
            for (t, (lo, hi)) in targets.iter().enumerate() {
                if !all_entries && !entries[t].is_empty() {
                    continue;
                }
                match classify(&cur, lo, hi) {
                    Membership::Inside => entries[t].push(s),
                    Membership::Outside => {}
                    Membership::Uncertain => continue 'ladder,
                }
            }
            if !all_entries && entries.iter().all(|e| !e.is_empty()) {
                return OrbitScan {
                    entries,
                    escaped_at: None,
                };
            }
            if s < max_steps {
                let g = map.degree();
                let mut acc = Interval::from_bigint(&map.coeffs[g]);
                for j in (0..g).rev() {
                    acc = acc.mul(&cur, p);
                    acc = acc.add(&Interval::from_bigint(&map.coeffs[j]), p);
                }
                cur = acc.mul(&inv_den, p);
            }
        }
        return OrbitScan {
            entries,
            escaped_at: None,
        };
    }
    scan_orbit_exact(map, x, targets, max_steps, all_entries)
}

fn classify(v: &Interval, lo: &Rational, hi: &Rational) -> Membership {
    use std::cmp::Ordering::*;
    let above_lo = v.lo.cmp_rational(lo.numer(), lo.denom()) == Greater;
    let below_hi = v.hi.cmp_rational(hi.numer(), hi.denom()) == Less;
    if above_lo && below_hi {
        return Membership::Inside;
    }
    let all_below = v.hi.cmp_rational(lo.numer(), lo.denom()) != Greater;
    let all_above = v.lo.cmp_rational(hi.numer(), hi.denom()) != Less;
    if all_below || all_above {
        return Membership::Outside;
    }
    Membership::Uncertain
}

/// Plain exact orbit scan (shared-denominator integers); the fallback
/// when interval separation fails.
pub(crate) fn scan_orbit_exact(
    map: &ClearedPoly,
    x: &Rational,
    targets: &[(Rational, Rational)],
    max_steps: usize,
    all_entries: bool,
) -> OrbitScan {
    let mut entries: Vec<Vec<usize>> = vec![Vec::new(); targets.len()];
    let mut cur = OrbitPoint::from_rational(x);
    for s in 0..=max_steps {
        if !cur.in_unit_interval() {
            return OrbitScan {
                entries,
                escaped_at: Some(s),
            };
        }
        for (t, (lo, hi)) in targets.iter().enumerate() {
            if !all_entries && !entries[t].is_empty() {
                continue;
            }
            if cur.cmp_rational(lo) == std::cmp::Ordering::Greater
                && cur.cmp_rational(hi) == std::cmp::Ordering::Less
            {
                entries[t].push(s);
            }
        }
        if !all_entries && entries.iter().all(|e| !e.is_empty()) {
            break;
        }
        if s < max_steps {
            cur = cur.step(map);
        }
    }
    OrbitScan {
        entries,
        escaped_at: None,
    }
}

/// Stern–Brocot mediants of (0,1) in breadth-first order.
pub fn stern_brocot_samples(count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let mut level: Vec<((u64, u64), (u64, u64))> = vec![((0, 1), (1, 1))];
    while out.len() < count {
        let mut next = Vec::with_capacity(level.len() * 2);
        for ((an, ad), (bn, bd)) in level {
            let m = (an + bn, ad + bd);
            out.push(Rational::from_ratio(m.0 as i64, m.1 as i64));
            next.push(((an, ad), m));
            next.push((m, (bn, bd)));
            if out.len() >= count {
                break;
            }
        }
        level = next;
    }
    out
}
