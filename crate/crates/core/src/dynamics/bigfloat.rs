//! Arbitrary-precision dyadic floats with directed rounding, and the
//! interval arithmetic built on them. Used by the scan kernel to certify
//! signs of Schwarzian values whose exact computation would be too large:
//! an interval that excludes zero proves the sign.

use num::bigint::Sign;
use num::{BigInt, Integer, ToPrimitive, Zero};

/// `m * 2^e`. No normalization invariant; `m = 0` encodes zero.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BigFloat {
    pub m: BigInt,
    pub e: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Dir {
    Down,
    Up,
}

fn shr_floor(m: &BigInt, k: u64) -> BigInt {
    // BigInt's Shr is an arithmetic shift: it already floors.
    m >> k
}

fn shr_ceil(m: &BigInt, k: u64) -> BigInt {
    -shr_floor(&(-m), k)
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        BigFloat {
            m: BigInt::from(n),
            e: 0,
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        BigFloat { m: n, e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn sign(&self) -> i8 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Exponent of the most significant bit: value magnitude is in
    /// `[2^(mag_exp - 1), 2^mag_exp)`.
    fn mag_exp(&self) -> i64 {
        self.e + self.m.bits() as i64
    }

    pub fn round(&self, p: u32, dir: Dir) -> BigFloat {
        let bits = self.m.bits();
        if bits <= p as u64 {
            return self.clone();
        }
        let k = bits - p as u64;
        let m = match dir {
            Dir::Down => shr_floor(&self.m, k),
            Dir::Up => shr_ceil(&self.m, k),
        };
        BigFloat {
            m,
            e: self.e + k as i64,
        }
    }

    fn ulp_shift(&self, delta: i64) -> BigFloat {
        BigFloat {
            m: &self.m + delta,
            e: self.e,
        }
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn add(&self, other: &BigFloat, p: u32, dir: Dir) -> BigFloat {
        if self.is_zero() {
            return other.round(p, dir);
        }
        if other.is_zero() {
            return self.round(p, dir);
        }
        let (hi, lo) = if self.mag_exp() >= other.mag_exp() {
            (self, other)
        } else {
            (other, self)
        };
        let gap = hi.mag_exp() - lo.mag_exp();
        if gap > p as i64 + 2 {
            // |lo| is far below one ulp of the rounded hi: nudge only when
            // the discarded value lies on the wrong side.
            let r = hi.round(p, dir);
            return match (dir, lo.sign()) {
                (Dir::Down, -1) => r.ulp_shift(-1),
                (Dir::Up, 1) => r.ulp_shift(1),
                _ => r,
            };
        }
        let e = self.e.min(other.e);
        let ma = &self.m << (self.e - e) as u64;
        let mb = &other.m << (other.e - e) as u64;
        BigFloat { m: ma + mb, e }.round(p, dir)
    }

    pub fn mul(&self, other: &BigFloat, p: u32, dir: Dir) -> BigFloat {
        BigFloat {
            m: &self.m * &other.m,
            e: self.e + other.e,
        }
        .round(p, dir)
    }

    /// Directed-rounding division; caller guarantees `other != 0`.
    pub fn div(&self, other: &BigFloat, p: u32, dir: Dir) -> BigFloat {
        assert!(!other.is_zero());
        if self.is_zero() {
            return BigFloat::zero();
        }
        let na = self.m.bits() as i64;
        let nb = other.m.bits() as i64;
        let k = ((p as i64 + 2) + nb - na).max(0) as u64;
        let num = &self.m << k;
        let (q, r) = num.div_rem(&other.m);
        // div_rem truncates toward zero; turn into floor/ceil.
        let exact = r.is_zero();
        let positive = (num.sign() == Sign::Minus) == (other.m.sign() == Sign::Minus);
        let q_floor = if exact || positive { q.clone() } else { &q - 1 };
        let m = match dir {
            Dir::Down => q_floor,
            Dir::Up => {
                if exact {
                    q_floor
                } else {
                    q_floor + 1
                }
            }
        };
        BigFloat {
            m,
            e: self.e - other.e - k as i64,
        }
        .round(p, dir)
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &BigFloat) -> std::cmp::Ordering {
        let s = self.sign();
        let o = other.sign();
        if s != o {
            return s.cmp(&o);
        }
        if s == 0 {
            return std::cmp::Ordering::Equal;
        }
        // compare magnitudes cheaply first
        let me = self.mag_exp();
        let oe = other.mag_exp();
        if me != oe {
            let mag = me.cmp(&oe);
            return if s > 0 { mag } else { mag.reverse() };
        }
        let e = self.e.min(other.e);
        let ma = &self.m << (self.e - e) as u64;
        let mb = &other.m << (other.e - e) as u64;
        ma.cmp(&mb)
    }

    /// Exact comparison against a rational `p/q` (q > 0). Only sensible
    /// for moderate exponents (values near [0,1]); shifts materialize.
    pub fn cmp_rational(&self, p: &BigInt, q: &BigInt) -> std::cmp::Ordering {
        debug_assert!(q.sign() != Sign::Minus);
        let lhs = &self.m * q;
        if self.e >= 0 {
            (lhs << self.e as u64).cmp(p)
        } else {
            lhs.cmp(&(p << (-self.e) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits();
        let shift = bits.saturating_sub(53);
        let top = shr_floor(&self.m, shift).to_f64().unwrap_or(f64::NAN);
        let exp = self.e + shift as i64;
        if exp > 1023 {
            return if self.sign() > 0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if exp < -1074 - 53 {
            return 0.0;
        }
        top * 2f64.powi(exp as i32)
    }
}

/// Closed interval `[lo, hi]` of dyadic floats; every operation rounds
/// outward so the true value is always contained.
#[derive(Debug, Clone)]
pub(crate) struct Interval {
    pub lo: BigFloat,
    pub hi: BigFloat,
}

impl Interval {
    pub fn zero() -> Self {
        Interval {
            lo: BigFloat::zero(),
            hi: BigFloat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Interval {
            lo: BigFloat::from_int(n),
            hi: BigFloat::from_int(n),
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Interval {
            lo: BigFloat::from_bigint(n.clone()),
            hi: BigFloat::from_bigint(n.clone()),
        }
    }

    /// Exact big-integer fraction, outward rounded.
    pub fn from_big_ratio(n: &BigInt, d: &BigInt, p: u32) -> Self {
        let nf = BigFloat::from_bigint(n.clone());
        let df = BigFloat::from_bigint(d.clone());
        Interval {
            lo: nf.div(&df, p, Dir::Down),
            hi: nf.div(&df, p, Dir::Up),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, o: &Interval, p: u32) -> Interval {
        Interval {
            lo: self.lo.add(&o.lo, p, Dir::Down),
            hi: self.hi.add(&o.hi, p, Dir::Up),
        }
    }

    pub fn sub(&self, o: &Interval, p: u32) -> Interval {
        self.add(&o.neg(), p)
    }

    pub fn mul(&self, o: &Interval, p: u32) -> Interval {
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for (a, b) in pairs {
            let down = a.mul(b, p, Dir::Down);
            let up = a.mul(b, p, Dir::Up);
            lo = Some(match lo {
                None => down,
                Some(cur) => {
                    if down.cmp_exact(&cur) == std::cmp::Ordering::Less {
                        down
                    } else {
                        cur
                    }
                }
            });
            hi = Some(match hi {
                None => up,
                Some(cur) => {
                    if up.cmp_exact(&cur) == std::cmp::Ordering::Greater {
                        up
                    } else {
                        cur
                    }
                }
            });
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() <= 0 && self.hi.sign() >= 0
    }

    /// `None` when the divisor interval straddles zero.
    pub fn div(&self, o: &Interval, p: u32) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for (a, b) in pairs {
            let down = a.div(b, p, Dir::Down);
            let up = a.div(b, p, Dir::Up);
            lo = Some(match lo {
                None => down,
                Some(cur) => {
                    if down.cmp_exact(&cur) == std::cmp::Ordering::Less {
                        down
                    } else {
                        cur
                    }
                }
            });
            hi = Some(match hi {
                None => up,
                Some(cur) => {
                    if up.cmp_exact(&cur) == std::cmp::Ordering::Greater {
                        up
                    } else {
                        cur
                    }
                }
            });
        }
        Some(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    /// Certified sign: `Some(+1/-1)` when zero is excluded, `Some(0)` when
    /// the interval is exactly zero, else `None`.
    pub fn certified_sign(&self) -> Option<i8> {
        let ls = self.lo.sign();
        let hs = self.hi.sign();
        if ls > 0 {
            return Some(1);
        }
        if hs < 0 {
            return Some(-1);
        }
        if ls == 0 && hs == 0 {
            return Some(0);
        }
        None
    }

    pub fn midpoint_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }
}
