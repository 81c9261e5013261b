//! Small dense linear algebra used by the Padé and Schwarzian machinery.
//!
//! Two elimination strategies, selected per backend through [`Scalar`]:
//! Gaussian elimination with partial pivoting for floats, and fraction-free
//! (Bareiss) elimination over cleared integers for exact rationals. Hankel
//! systems are badly conditioned, so the exact path is the one the
//! verification suites rely on.

use num::{BigInt, BigRational, Integer, One, Zero};

use crate::scalar::Scalar;

/// Determinant by Gaussian elimination with partial pivoting.
/// The empty determinant is 1.
pub fn gauss_det<S: Scalar>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    if n == 0 {
        return S::one();
    }
    let scale = max_abs(&m);
    let mut det = S::one();
    for k in 0..n {
        let pivot_row = (k..n).max_by(|&a, &b| {
            m[a][k]
                .abs()
                .partial_cmp(&m[b][k].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let pivot_row = match pivot_row {
            Some(r) => r,
            None => return S::zero(),
        };
        if m[pivot_row][k].is_zero_scaled(&scale) {
            return S::zero();
        }
        if pivot_row != k {
            m.swap(pivot_row, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det = det * pivot.clone();
        for i in k + 1..n {
            let factor = m[i][k].clone() / pivot.clone();
            for j in k..n {
                let sub = factor.clone() * m[k][j].clone();
                m[i][j] = m[i][j].clone() - sub;
            }
        }
    }
    det
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let scale = max_abs(&a);
    for k in 0..n {
        let pivot_row = (k..n).max_by(|&r, &s| {
            a[r][k]
                .abs()
                .partial_cmp(&a[s][k].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot_row][k].is_zero_scaled(&scale) {
            return None;
        }
        a.swap(pivot_row, k);
        b.swap(pivot_row, k);
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            let factor = a[i][k].clone() / pivot.clone();
            for j in k..n {
                let sub = factor.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - sub;
            }
            let sub = factor * b[k].clone();
            b[i] = b[i].clone() - sub;
        }
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in i + 1..n {
            acc = acc - a[i][j].clone() * x[j].clone();
        }
        x[i] = acc / a[i][i].clone();
    }
    Some(x)
}

/// Fraction-free determinant of an integer matrix (Bareiss). All interior
/// divisions are exact, so no gcds are taken and entry growth stays
/// polynomial.
pub fn bareiss_det_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Clear a rational matrix row-by-row into integers, returning the integer
/// matrix and the product of the row multipliers.
fn clear_rows(m: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigRational) {
    let mut cleared = Vec::with_capacity(m.len());
    let mut factor = <BigRational as One>::one();
    for row in m {
        let mut l = BigInt::one();
        for e in row {
            l = l.lcm(e.denom());
        }
        let ints: Vec<BigInt> = row.iter().map(|e| e.numer() * (&l / e.denom())).collect();
        factor = factor * BigRational::from_integer(l);
        cleared.push(ints);
    }
    (cleared, factor)
}

/// Exact determinant of a rational matrix via Bareiss elimination on the
/// denominator-cleared integer matrix.
pub fn bareiss_det_rational(m: Vec<Vec<BigRational>>) -> BigRational {
    if m.is_empty() {
        return <BigRational as One>::one();
    }
    let (cleared, factor) = clear_rows(&m);
    BigRational::from_integer(bareiss_det_int(cleared)) / factor
}

/// Exact solve of `a x = b` over the rationals: fraction-free forward
/// elimination on the cleared augmented matrix, then rational back
/// substitution. Returns `None` when singular.
pub fn bareiss_solve_rational(
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    assert_eq!(b.len(), n);
    let mut rows: Vec<Vec<BigRational>> = a;
    for (row, rhs) in rows.iter_mut().zip(b) {
        row.push(rhs);
    }
    let (mut m, _) = clear_rows(&rows);
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let r = (k + 1..n).find(|&r| !m[r][k].is_zero())?;
            m.swap(k, r);
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    if m[n - 1][n - 1].is_zero() {
        return None;
    }
    let mut x = vec![<BigRational as Zero>::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc = acc - BigRational::from_integer(m[i][j].clone()) * x[j].clone();
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Some(x)
}

/// Outcome of a full row reduction of `[a | b]`, used to analyse singular
/// Padé systems: rank, consistency, and (when consistent) the particular
/// solution with free unknowns set to zero.
#[derive(Debug, Clone)]
pub struct RrefOutcome<S> {
    pub rank: usize,
    pub consistent: bool,
    pub solution: Option<Vec<S>>,
}

pub fn rref_solve<S: Scalar>(mut a: Vec<Vec<S>>, b: Vec<S>) -> RrefOutcome<S> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let scale = if rows == 0 { S::one() } else { max_abs(&a) };
    for (row, rhs) in a.iter_mut().zip(b) {
        row.push(rhs);
    }
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let pivot = (r..rows).find(|&i| !a[i][c].is_zero_scaled(&scale));
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let inv = S::one() / a[r][c].clone();
        for j in c..=cols {
            a[r][j] = a[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero_scaled(&scale) {
                let f = a[i][c].clone();
                for j in c..=cols {
                    let sub = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let rank = r;
    let consistent = (rank..rows).all(|i| a[i][cols].is_zero_scaled(&scale));
    let solution = consistent.then(|| {
        let mut x = vec![S::zero(); cols];
        for (i, &c) in pivot_cols.iter().enumerate() {
            x[c] = a[i][cols].clone();
        }
        x
    });
    RrefOutcome {
        rank,
        consistent,
        solution,
    }
}

fn max_abs<S: Scalar>(m: &[Vec<S>]) -> S {
    let mut best = S::one();
    let mut found = false;
    for row in m {
        for e in row {
            let a = e.abs();
            if !found || a > best {
                best = a;
                found = true;
            }
        }
    }
    if found {
        best
    } else {
        S::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn empty_determinant_is_one() {
        assert_eq!(bareiss_det_rational(vec![]), rat(1, 1));
        assert_eq!(gauss_det::<f64>(vec![]), 1.0);
    }

    #[test]
    fn int_bareiss_matches_cofactor() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(-1), BigInt::from(3)],
            vec![BigInt::from(0), BigInt::from(4), BigInt::from(1)],
            vec![BigInt::from(5), BigInt::from(2), BigInt::from(-2)],
        ];
        // cofactor expansion: 2*(4*-2-1*2) - (-1)*(0*-2-1*5) + 3*(0*2-4*5)
        let expect = 2 * (-8 - 2) + 1 * (0 - 5) + 3 * (0 - 20);
        assert_eq!(bareiss_det_int(m), BigInt::from(expect));
    }

    #[test]
    fn rational_det_and_solve_agree() {
        let a = vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 3), rat(1, 4)],
        ];
        let det = bareiss_det_rational(a.clone());
        assert_eq!(det, rat(1, 8) - rat(1, 9));
        let x = bareiss_solve_rational(a.clone(), vec![rat(1, 1), rat(0, 1)]).unwrap();
        // check residual
        for (row, rhs) in a.iter().zip([rat(1, 1), rat(0, 1)]) {
            let lhs = row[0].clone() * x[0].clone() + row[1].clone() * x[1].clone();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn singular_solve_is_none() {
        let a = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]];
        assert!(bareiss_solve_rational(a, vec![rat(1, 1), rat(1, 1)]).is_none());
    }

    #[test]
    fn rref_consistency_cases() {
        // x + y = 2, 2x + 2y = 4: rank 1, consistent, free y = 0.
        let out = rref_solve(
            vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]],
            vec![rat(2, 1), rat(4, 1)],
        );
        assert_eq!(out.rank, 1);
        assert!(out.consistent);
        assert_eq!(out.solution.unwrap(), vec![rat(2, 1), rat(0, 1)]);

        let out = rref_solve(
            vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]],
            vec![rat(2, 1), rat(5, 1)],
        );
        assert!(!out.consistent);
        assert!(out.solution.is_none());
    }

    #[test]
    fn float_solve_partial_pivoting() {
        let a = vec![vec![1e-12, 1.0], vec![1.0, 1.0]];
        let x = gauss_solve(a, vec![1.0, 2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-9);
        assert!((x[1] - 1.0).abs() < 1e-9);
    }
}
