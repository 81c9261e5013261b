//! Dense univariate polynomial helpers over a [`Scalar`], used by the
//! rational-map machinery. Coefficients are in ascending powers.

use crate::scalar::Scalar;

pub fn trim<S: Scalar>(mut c: Vec<S>) -> Vec<S> {
    let scale = max_abs(&c);
    while c.len() > 1 && c.last().map(|t| t.is_zero_scaled(&scale)) == Some(true) {
        c.pop();
    }
    if c.is_empty() {
        c.push(S::zero());
    }
    c
}

pub fn degree<S: Scalar>(c: &[S]) -> usize {
    let scale = max_abs(c);
    let mut d = c.len().saturating_sub(1);
    while d > 0 && c[d].is_zero_scaled(&scale) {
        d -= 1;
    }
    d
}

pub fn is_zero_poly<S: Scalar>(c: &[S]) -> bool {
    let scale = max_abs(c);
    c.iter().all(|t| t.is_zero_scaled(&scale))
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(S::zero);
            let y = b.get(k).cloned().unwrap_or_else(S::zero);
            x + y
        })
        .collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    add(a, &neg(b))
}

pub fn neg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|t| -t.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|t| t.clone() * c.clone()).collect()
}

pub fn mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x.clone() * y.clone();
            out[i + j] = out[i + j].clone() + t;
        }
    }
    out
}

pub fn eval<S: Scalar>(c: &[S], t: &S) -> S {
    let mut acc = S::zero();
    for k in (0..c.len()).rev() {
        acc = acc * t.clone() + c[k].clone();
    }
    acc
}

/// Taylor shift: coefficients of `p(t + w)` as a polynomial in `w`.
pub fn shift<S: Scalar>(c: &[S], t: &S) -> Vec<S> {
    let n = c.len();
    let mut out = vec![S::zero(); n];
    // binomial expansion of each power of (t + w)
    for (j, cj) in c.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        // (t + w)^j: term C(j,k) t^{j-k} w^k
        let mut binom = S::one();
        let mut tp = vec![S::one(); j + 1];
        for i in 1..=j {
            tp[i] = tp[i - 1].clone() * t.clone();
        }
        for k in 0..=j {
            let term = cj.clone() * binom.clone() * tp[j - k].clone();
            out[k] = out[k].clone() + term;
            if k < j {
                binom = binom * S::from_int((j - k) as i64) / S::from_int((k + 1) as i64);
            }
        }
    }
    out
}

/// Polynomial composition `a(b(x))`.
pub fn compose<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut acc = vec![S::zero()];
    for k in (0..a.len()).rev() {
        acc = mul(&acc, b);
        if acc.is_empty() {
            acc.push(S::zero());
        }
        acc[0] = acc[0].clone() + a[k].clone();
    }
    acc
}

pub fn derivative<S: Scalar>(c: &[S]) -> Vec<S> {
    if c.len() <= 1 {
        return vec![S::zero()];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, t)| t.clone() * S::from_int(k as i64))
        .collect()
}

/// Polynomial division with remainder; divisor must be nonzero.
pub fn divrem<S: Scalar>(a: &[S], b: &[S]) -> (Vec<S>, Vec<S>) {
    let b = trim(b.to_vec());
    assert!(!is_zero_poly(&b), "division by the zero polynomial");
    let db = b.len() - 1;
    let mut r = trim(a.to_vec());
    let da = r.len() - 1;
    if da < db || is_zero_poly(&r) {
        return (vec![S::zero()], r);
    }
    let mut q = vec![S::zero(); da - db + 1];
    let lead = b[db].clone();
    for k in (0..=da - db).rev() {
        let cur = r[db + k].clone();
        if cur.is_zero() {
            continue;
        }
        let f = cur / lead.clone();
        q[k] = f.clone();
        for i in 0..=db {
            let t = f.clone() * b[i].clone();
            r[k + i] = r[k + i].clone() - t;
        }
    }
    (trim(q), trim(r))
}

/// Monic gcd by the Euclidean remainder sequence. Meaningful on the exact
/// backend; callers on floats should not rely on it.
pub fn gcd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    if is_zero_poly(&x) {
        return make_monic(y);
    }
    while !is_zero_poly(&y) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(x)
}

fn make_monic<S: Scalar>(c: Vec<S>) -> Vec<S> {
    let c = trim(c);
    let lead = c.last().cloned().unwrap_or_else(S::one);
    if lead.is_zero() {
        return c;
    }
    let inv = S::one() / lead;
    scale(&c, &inv)
}

fn max_abs<S: Scalar>(c: &[S]) -> S {
    let mut best = S::one();
    for e in c {
        let a = e.abs();
        if a > best {
            best = a;
        }
    }
    best
}
