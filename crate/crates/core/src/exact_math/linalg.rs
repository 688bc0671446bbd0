use num_rational::BigRational;
use num_traits::{One, Zero};

/// Determinant of a square rational matrix by fraction-exact Gaussian elimination.
pub fn rational_determinant(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::rational;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&v| rational(v, 1)).collect()).collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(rational_determinant(&m(&[&[2, 0], &[0, 3]])), rational(6, 1));
        assert_eq!(rational_determinant(&m(&[&[0, 1], &[1, 0]])), rational(-1, 1));
        assert_eq!(rational_determinant(&m(&[&[1, 2], &[2, 4]])), rational(0, 1));
        assert_eq!(rational_determinant(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), rational(-3, 1));
        assert_eq!(rational_determinant(&[]), rational(1, 1));
    }
}
