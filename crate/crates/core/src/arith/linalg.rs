//! Small dense linear algebra: characteristic polynomials, integer matrix
//! products and null vectors over an exact field.

use num_bigint::BigInt;

use super::poly::IntPoly;
use super::rational::Rational;
use super::ExactField;
use crate::error::ArithError;

pub type IntMatrix4 = [[i64; 4]; 4];

/// Characteristic polynomial `det(tI - m)` by Faddeev-LeVerrier.
pub fn charpoly<R: AsRef<[i64]>>(m: &[R]) -> Result<IntPoly, ArithError> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.as_ref().len() != n) {
        return Err(ArithError::BadMatrix);
    }
    let a: Vec<Vec<Rational>> = m
        .iter()
        .map(|r| r.as_ref().iter().map(|&x| Rational::from_integer(x)).collect())
        .collect();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    // M_k = A·M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A·M_k)/k
    let mut mk: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul_q(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = &row[i] + &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul_q(&a, &mk);
        let trace = (0..n).fold(Rational::zero(), |t, i| t + &am[i][i]);
        coeffs[n - k] = -(trace / Rational::from_integer(k as i64));
    }
    let ints = coeffs
        .iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.numer().clone()
        })
        .collect::<Vec<BigInt>>();
    Ok(IntPoly::new(ints))
}

fn mat_mul_q(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |s, k| s + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Exact product of two 4×4 integer matrices; `None` on overflow.
pub fn mat_mul4(a: &IntMatrix4, b: &IntMatrix4) -> Option<IntMatrix4> {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0i64;
            for k in 0..4 {
                s = s.checked_add(a[i][k].checked_mul(b[k][j])?)?;
            }
            out[i][j] = s;
        }
    }
    Some(out)
}

/// Exact determinant of a 4×4 integer matrix (cofactor expansion in `i128`).
pub fn det4(m: &IntMatrix4) -> BigInt {
    fn det3(m: [[i128; 3]; 3]) -> i128 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let mut total = BigInt::from(0);
    for col in 0..4 {
        let mut minor = [[0i128; 3]; 3];
        for (r, row) in m.iter().enumerate().skip(1) {
            let mut cc = 0;
            for (c, &v) in row.iter().enumerate() {
                if c != col {
                    minor[r - 1][cc] = v as i128;
                    cc += 1;
                }
            }
        }
        let term = BigInt::from(m[0][col]) * BigInt::from(det3(minor));
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `m · v` for an integer matrix acting on field elements.
pub fn apply4<F: ExactField>(m: &IntMatrix4, v: &[F; 4]) -> [F; 4] {
    std::array::from_fn(|i| {
        (0..4).fold(v[0].zero_like(), |acc, j| match m[i][j] {
            0 => acc,
            1 => acc + &v[j],
            -1 => acc - &v[j],
            k => acc + v[j].scale_int(k),
        })
    })
}

/// A nonzero solution of `rows · x = 0`, by Gaussian elimination. The free
/// variable is set to one.
pub fn null_vector<F: ExactField>(mut rows: Vec<Vec<F>>) -> Option<Vec<F>> {
    let n = rows.first()?.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].one_like().checked_div(&rows[r][c]).ok()?;
        rows[r] = rows[r].iter().map(|x| x.clone() * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row.iter()) {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let free = (0..n).find(|c| !pivots.iter().any(|&(_, pc)| pc == *c))?;
    let one = rows[0][0].one_like();
    let mut x = vec![one.zero_like(); n];
    x[free] = one;
    for &(pr, pc) in &pivots {
        x[pc] = -rows[pr][free].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_small_matrices() {
        assert_eq!(charpoly(&[[2i64, 1], [1, 1]]).unwrap(), IntPoly::from_i64s(&[1, -3, 1]));
        let id = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert_eq!(charpoly(&id).unwrap(), IntPoly::from_i64s(&[-1, 3, -3, 1]));
        assert_eq!(charpoly::<[i64; 0]>(&[]), Err(ArithError::BadMatrix));
    }

    #[test]
    fn determinant_and_product() {
        let m = [[1, 2, 0, 0], [3, 4, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        assert_eq!(det4(&m), BigInt::from(-2));
        let id = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        assert_eq!(mat_mul4(&m, &id), Some(m));
    }

    #[test]
    fn null_vector_of_rank_deficient_matrix() {
        let q = |n: i64| Rational::from_integer(n);
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        let x = null_vector(rows.clone()).unwrap();
        for row in &rows {
            let dot = row.iter().zip(&x).fold(q(0), |s, (a, b)| s + a * b);
            assert!(dot.is_zero());
        }
        assert!(x.iter().any(|v| !v.is_zero()));
    }
}
