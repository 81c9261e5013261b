//! Seeded random generators for jets, continued fractions, and rational
//! maps. Every randomized check in the crate (self-test, acceptance
//! suite, property tests) draws from here so runs are reproducible from
//! an explicit seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::jets::Jet;
use crate::pade::{is_normal, RationalMap};
use crate::scalar::{Rational, Scalar};
use crate::schwarzian::ContinuedFractionRep;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational with numerator in `[-max_num, max_num]` and denominator in
/// `[1, max_den]`.
pub fn rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    let n = rng.gen_range(-max_num..=max_num);
    let d = rng.gen_range(1..=max_den);
    Rational::from_ratio(n, d)
}

fn nonzero_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    loop {
        let r = rational(rng, max_num, max_den);
        if !Scalar::is_zero(&r) {
            return r;
        }
    }
}

/// A jet with rational coefficients in `[-5, 5]` and nonvanishing
/// derivative, based at 0.
pub fn jet(rng: &mut ChaCha8Rng, order: usize) -> Jet<Rational> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let c = rational(rng, 5, 4);
        if k == 1 && Scalar::is_zero(&c) {
            coeffs.push(Rational::from_ratio(1, 2));
        } else {
            coeffs.push(c);
        }
    }
    Jet::new(Rational::zero(), coeffs)
}

/// A jet that is normal of every order `1..=d_max` at its base point
/// (resampled until the Hankel determinants are nonzero).
pub fn normal_jet(rng: &mut ChaCha8Rng, order: usize, d_max: usize) -> Jet<Rational> {
    loop {
        let j = jet(rng, order);
        let ok = (1..=d_max).all(|d| is_normal(&j, d).unwrap_or(false));
        if ok {
            return j;
        }
    }
}

/// Continued-fraction coefficients with the requested sign pattern for the
/// `μ` entries; depth `d` gives a rational map of degree exactly `d`.
pub fn continued_fraction(
    rng: &mut ChaCha8Rng,
    depth: usize,
    positive_mu: bool,
) -> ContinuedFractionRep<Rational> {
    let base = rational(rng, 2, 3);
    let a = (0..=depth).map(|_| rational(rng, 3, 3)).collect();
    let mu = (0..depth)
        .map(|_| {
            let m = nonzero_rational(rng, 3, 3);
            if positive_mu {
                m.abs()
            } else {
                m
            }
        })
        .collect();
    ContinuedFractionRep { base, a, mu }
}

/// A continued fraction with at least one strictly negative `μ`.
pub fn continued_fraction_mixed(
    rng: &mut ChaCha8Rng,
    depth: usize,
) -> ContinuedFractionRep<Rational> {
    assert!(depth >= 1);
    loop {
        let cf = continued_fraction(rng, depth, false);
        if cf.mu.iter().any(|m| m.signum() < 0) {
            return cf;
        }
    }
}

/// A random rational Pick map of degree exactly `depth` (all `μ > 0`).
pub fn pick_map(rng: &mut ChaCha8Rng, depth: usize) -> RationalMap<Rational> {
    continued_fraction(rng, depth, true)
        .to_rational_map()
        .expect("nonzero μ keeps the construction finite")
}

/// An arbitrary rational map of degree at most `max_degree` from random
/// numerator and denominator coefficients (denominator nonzero at the
/// base point by construction).
pub fn rational_map(rng: &mut ChaCha8Rng, max_degree: usize) -> RationalMap<Rational> {
    loop {
        let dp = rng.gen_range(0..=max_degree);
        let dq = rng.gen_range(0..=max_degree);
        let p: Vec<Rational> = (0..=dp).map(|_| rational(rng, 4, 3)).collect();
        let mut q: Vec<Rational> = (0..=dq).map(|_| rational(rng, 4, 3)).collect();
        q[0] = Rational::one();
        let base = rational(rng, 2, 3);
        if let Ok(r) = RationalMap::new(base, p, q) {
            if r.degree() >= 1 {
                return r;
            }
        }
    }
}

/// A point where the map is finite with nonvanishing derivative and the
/// jet of the requested order exists.
pub fn valid_point(
    rng: &mut ChaCha8Rng,
    r: &RationalMap<Rational>,
    order: usize,
) -> Rational {
    loop {
        let x = rational(rng, 6, 4);
        if let Ok(jet) = r.jet_at(&x, order) {
            if !Scalar::is_zero(&jet.coeff(1)) {
                return x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let a = jet(&mut rng(7), 5);
        let b = jet(&mut rng(7), 5);
        assert_eq!(a, b);
    }

    #[test]
    fn normal_jets_are_normal() {
        let mut r = rng(3);
        for _ in 0..5 {
            let j = normal_jet(&mut r, 9, 4);
            for d in 1..=4 {
                assert!(is_normal(&j, d).unwrap());
            }
        }
    }

    #[test]
    fn pick_maps_have_requested_degree() {
        let mut r = rng(5);
        for depth in 1..=4 {
            let m = pick_map(&mut r, depth);
            assert_eq!(m.degree(), depth);
        }
    }

    #[test]
    fn mixed_cf_has_negative_mu() {
        let mut r = rng(11);
        for _ in 0..5 {
            let cf = continued_fraction_mixed(&mut r, 3);
            assert!(cf.mu.iter().any(|m| m.signum() < 0));
        }
    }
}
