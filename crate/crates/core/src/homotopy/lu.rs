//! Dense LU with partial pivoting over any numeric field.

use num_complex::Complex64;

use crate::polycore::Field;

/// In-place factorization; `None` when a pivot vanishes.
pub(crate) struct Lu<S> {
    a: Vec<Vec<S>>,
    perm: Vec<usize>,
}

impl<S: Field> Lu<S> {
    pub fn factor(mut a: Vec<Vec<S>>) -> Option<Self> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i][k].magnitude().total_cmp(&a[j][k].magnitude()))?;
            if a[p][k].is_zero() || !a[p][k].magnitude().is_finite() {
                return None;
            }
            a.swap(k, p);
            perm.swap(k, p);
            let piv = a[k][k].clone();
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone() / piv.clone();
                for j in k + 1..n {
                    let d = f.clone() * a[k][j].clone();
                    a[i][j] = a[i][j].clone() - d;
                }
                a[i][k] = f;
            }
        }
        Some(Lu { a, perm })
    }

    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.a.len();
        let mut x: Vec<S> = self.perm.iter().map(|&i| b[i].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let d = self.a[i][j].clone() * x[j].clone();
                x[i] = x[i].clone() - d;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let d = self.a[i][j].clone() * x[j].clone();
                x[i] = x[i].clone() - d;
            }
            x[i] = x[i].clone() / self.a[i][i].clone();
        }
        x
    }
}

pub(crate) fn norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn mat_norm_inf(a: &[Vec<Complex64>]) -> f64 {
    a.iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// ‖A‖∞ ‖A⁻¹‖∞, infinite for singular A.
pub(crate) fn condition_estimate(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 1.0;
    }
    let Some(lu) = Lu::factor(a.to_vec()) else { return f64::INFINITY };
    let mut inv_rows = vec![0.0f64; n];
    for j in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        let col = lu.solve(&e);
        for i in 0..n {
            inv_rows[i] += col[i].norm();
        }
    }
    let inv = inv_rows.into_iter().fold(0.0, f64::max);
    (mat_norm_inf(a) * inv).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn solves_with_pivoting() {
        let a = vec![vec![c(0.0), c(1.0)], vec![c(2.0), c(3.0)]];
        let lu = Lu::factor(a).unwrap();
        let x = lu.solve(&[c(1.0), c(8.0)]);
        assert!((x[0] - c(2.5)).norm() < 1e-14 && (x[1] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]];
        assert!(Lu::factor(a.clone()).is_none());
        assert!(condition_estimate(&a).is_infinite());
    }

    #[test]
    fn identity_condition_is_one() {
        let a = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]];
        assert_eq!(condition_estimate(&a), 1.0);
    }
}
