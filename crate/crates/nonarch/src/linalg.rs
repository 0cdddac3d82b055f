//! Determinants and linear solves for the coefficient domains we use.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::padic::{inverse_mod, modulo, Padic, PadicError};
use crate::valuation::{split_prime_power, Prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular at working precision")]
    Singular,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Fraction-free Bareiss elimination; `div_exact` must divide exactly.
pub fn bareiss_determinant<T: Clone + PartialEq>(
    mut m: Vec<Vec<T>>,
    zero: T,
    one: T,
    sub: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    div_exact: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
) -> T {
    let n = m.len();
    if n == 0 {
        return one;
    }
    let mut negate = false;
    let mut prev = one;
    for k in 0..n - 1 {
        if m[k][k] == zero {
            match (k + 1..n).find(|&i| m[i][k] != zero) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = sub(&mul(&m[i][j], &m[k][k]), &mul(&m[i][k], &m[k][j]));
                m[i][j] = div_exact(&t, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        neg(&det)
    } else {
        det
    }
}

/// Valuation of a residue modulo `p^k`, capped at `k`.
fn residue_valuation(x: &BigInt, p: Prime, k: u32) -> u32 {
    if x.is_zero() {
        k
    } else {
        (split_prime_power(x, p).0 as u32).min(k)
    }
}

/// Determinant over `Z/p^k` by elimination with valuation pivoting. Adding a
/// multiple of one row to another never changes the determinant, so reducing
/// the multiplier modulo `p^(k-v)` loses nothing.
pub fn residue_determinant(mut m: Vec<Vec<BigInt>>, p: Prime, k: u32) -> BigInt {
    let modulus = p.pow(k);
    let n = m.len();
    let mut det = BigInt::one();
    for c in 0..n {
        let (row, v) = (c..n)
            .map(|r| (r, residue_valuation(&m[r][c], p, k)))
            .min_by_key(|&(r, v)| (v, r))
            .expect("nonempty range");
        if v >= k {
            return BigInt::zero();
        }
        if row != c {
            m.swap(row, c);
            det = -det;
        }
        let pv = p.pow(v);
        let unit_inv = inverse_mod(&(&m[c][c] / &pv), &modulus).expect("unit part");
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = modulo(&(&m[r][c] / &pv * &unit_inv), &modulus);
            for j in c..n {
                let t = &m[r][j] - &factor * &m[c][j];
                m[r][j] = modulo(&t, &modulus);
            }
        }
        det = modulo(&(det * &m[c][c]), &modulus);
    }
    modulo(&det, &modulus)
}

fn padic_pivot(m: &[Vec<Padic>], c: usize, rows: std::ops::Range<usize>) -> Option<usize> {
    rows.filter(|&r| !m[r][c].is_zero())
        .min_by_key(|&r| (m[r][c].valuation().expect("nonzero"), r))
}

/// Valuation lower bound of a column, `None` when every entry is an exact zero.
fn column_floor(m: &[Vec<Padic>], c: usize, rows: std::ops::Range<usize>) -> Option<i64> {
    rows.filter_map(|r| m[r][c].valuation_lower_bound()).min()
}

/// Determinant over `Q_p` with valuation pivoting and tracked precision. The
/// empty determinant is a one of relative precision `empty_precision`.
pub fn padic_determinant(
    mut m: Vec<Vec<Padic>>,
    p: Prime,
    empty_precision: u32,
) -> Result<Padic, LinalgError> {
    let n = m.len();
    let mut negate = false;
    let mut pivots: Vec<Padic> = Vec::with_capacity(n);
    let mut tail = None;
    for c in 0..n {
        let Some(row) = padic_pivot(&m, c, c..n) else {
            // Nothing left is known to be nonzero; bound the remaining minor.
            let mut floor = 0i64;
            for j in c..n {
                match column_floor(&m, j, c..n) {
                    Some(v) => floor += v,
                    None => return Ok(Padic::zero(p)),
                }
            }
            tail = Some(Padic::zero_to_precision(p, floor));
            break;
        };
        if row != c {
            m.swap(row, c);
            negate = !negate;
        }
        let pivot_inv = m[c][c].inv()?;
        for r in c + 1..n {
            if m[r][c].is_exact_zero() {
                continue;
            }
            let factor = m[r][c].mul(&pivot_inv)?;
            for j in c + 1..n {
                m[r][j] = m[r][j].sub(&factor.mul(&m[c][j])?)?;
            }
            m[r][c] = Padic::zero(p);
        }
        pivots.push(m[c][c].clone());
    }
    let mut factors = pivots.into_iter().chain(tail);
    let Some(first) = factors.next() else {
        return Ok(Padic::one(p, empty_precision));
    };
    let mut det = factors.try_fold(first, |acc, x| acc.mul(&x))?;
    if negate {
        det = det.neg();
    }
    Ok(det)
}

/// Solves `m · x = b` over `Q_p` by Gaussian elimination with valuation pivoting.
pub fn padic_solve(
    mut m: Vec<Vec<Padic>>,
    mut b: Vec<Padic>,
    p: Prime,
) -> Result<Vec<Padic>, LinalgError> {
    let n = m.len();
    for c in 0..n {
        let row = padic_pivot(&m, c, c..n).ok_or(LinalgError::Singular)?;
        m.swap(row, c);
        b.swap(row, c);
        let pivot_inv = m[c][c].inv()?;
        for r in c + 1..n {
            if m[r][c].is_exact_zero() {
                continue;
            }
            let factor = m[r][c].mul(&pivot_inv)?;
            for j in c + 1..n {
                m[r][j] = m[r][j].sub(&factor.mul(&m[c][j])?)?;
            }
            b[r] = b[r].sub(&factor.mul(&b[c])?)?;
            m[r][c] = Padic::zero(p);
        }
    }
    let mut x = vec![Padic::zero(p); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in i + 1..n {
            acc = acc.sub(&m[i][j].mul(&x[j])?)?;
        }
        x[i] = acc.div(&m[i][i])?;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{int, Rational};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn int_det(m: Vec<Vec<i64>>) -> BigInt {
        let m = m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        bareiss_determinant(
            m,
            BigInt::zero(),
            BigInt::one(),
            |a, b| a - b,
            |a, b| a * b,
            |a, b| a / b,
            |a| -a,
        )
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(int_det(vec![vec![1, 0, 1], vec![2, 0, 0], vec![0, 2, 0]]), BigInt::from(4));
        assert_eq!(int_det(vec![vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(int_det(vec![]), BigInt::one());
        assert_eq!(int_det(vec![vec![1, 2], vec![2, 4]]), BigInt::zero());
    }

    #[test]
    fn residue_det_matches_integer_det() {
        let m = vec![vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]];
        let exact = int_det(m.clone());
        let q = p(5);
        let modulus = q.pow(3);
        let reduced = m
            .into_iter()
            .map(|r| r.into_iter().map(|x| modulo(&BigInt::from(x), &modulus)).collect())
            .collect();
        assert_eq!(residue_determinant(reduced, q, 3), modulo(&exact, &modulus));
    }

    #[test]
    fn padic_solve_small_system() {
        let q = p(7);
        let to = |x: i64| Padic::from_rational(&int(x), q, 10).unwrap();
        let m = vec![vec![to(7), to(1)], vec![to(2), to(3)]];
        let b = vec![to(8), to(5)];
        let x = padic_solve(m, b, q).unwrap();
        assert_eq!(x[0].to_rational(), int(1));
        assert_eq!(x[1].to_rational(), int(1));
        let det = padic_determinant(vec![vec![to(7), to(1)], vec![to(2), to(3)]], q, 10).unwrap();
        assert_eq!(det.to_rational(), Rational::from_integer(BigInt::from(19)));
    }
}
