//! Small exact integer/rational linear algebra shared by the polyhedral code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divide by the gcd of the entries; the zero vector is returned unchanged.
pub fn make_primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn primitive_i128(v: &[i128]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    let g = if g == 0 { 1 } else { g };
    v.iter().map(|x| (x / g).to_i64()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_i128(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn is_zero(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

fn rank_i128(rows: &[Vec<i64>], ncols: usize) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = m[rank][col].checked_mul(m[r][c])?.checked_sub(m[r][col].checked_mul(m[rank][c])?)?;
                m[r][c] = v / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
    }
    Some(rank)
}

fn rank_big(rows: &[Vec<i64>], ncols: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    rref_in_place(&mut m, ncols).len()
}

/// Rank of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let ncols = first.len();
    rank_i128(rows, ncols).unwrap_or_else(|| rank_big(rows, ncols))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref_in_place(m: &mut Vec<Vec<BigRational>>, ncols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

/// Scale a rational vector to a primitive integer vector.
pub fn rational_to_primitive(v: &[BigRational]) -> Vec<i64> {
    let l = v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.iter().map(|x| (x / &g).to_i64().expect("entry fits in i64")).collect()
}

/// Integer basis (primitive rows) of the kernel {x : M x = 0}.
pub fn nullspace(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let pivots = rref_in_place(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            rational_to_primitive(&v)
        })
        .collect()
}

/// Canonical integer basis of the row space: reduced echelon rows scaled to
/// primitive integers.
pub fn canonical_row_basis(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    rref_in_place(&mut m, ncols);
    m.iter().map(|r| rational_to_primitive(r)).collect()
}

/// Orthogonal projection of `v` onto the complement of span(basis), scaled
/// to a primitive integer vector.
pub fn project_out(v: &[i64], basis: &[Vec<i64>]) -> Vec<i64> {
    if basis.is_empty() {
        return v.to_vec();
    }
    let k = basis.len();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    // Solve (B B^T) c = B v
    let mut aug: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| q(dot(&basis[i], &basis[j]))).collect();
            row.push(q(dot(&basis[i], v)));
            row
        })
        .collect();
    rref_in_place(&mut aug, k + 1);
    let coef: Vec<BigRational> = (0..k).map(|i| aug[i][k].clone()).collect();
    let proj: Vec<BigRational> = (0..v.len())
        .map(|j| {
            let mut x = q(v[j]);
            for i in 0..k {
                x -= &coef[i] * q(basis[i][j]);
            }
            x
        })
        .collect();
    rational_to_primitive(&proj)
}

/// Determinant of a square integer matrix (fraction-free elimination).
pub fn det_big(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Determinant with an i128 fast path.
pub fn det_i128(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].checked_mul(a[i][j]).zip(a[i][k].checked_mul(a[k][j]));
                let Some((x, y)) = v else { return det_big(m).to_i128().expect("determinant fits in i128") };
                a[i][j] = (x - y) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * if n == 0 { 1 } else { a[n - 1][n - 1] }
}

/// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn abs_max(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub fn signum_first_nonzero(v: &[i64]) -> i64 {
    v.iter().find(|&&x| x != 0).map(|x| x.signum()).unwrap_or(0)
}

pub fn big_is_unit(d: &BigInt) -> bool {
    d.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace_agree() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            assert_eq!(dot(row, &ns[0]), 0);
        }
    }

    #[test]
    fn determinant_paths_agree() {
        let m = vec![vec![2, 1, 1], vec![1, 0, 0], vec![0, 1, 0]];
        assert_eq!(det_i128(&m), 1);
        assert_eq!(det_big(&m), BigInt::from(1));
    }

    #[test]
    fn projection_is_orthogonal() {
        let p = project_out(&[1, 0], &[vec![1, 1]]);
        assert_eq!(p, vec![1, -1]);
    }

    #[test]
    fn ext_gcd_identity() {
        let (g, x, y) = ext_gcd(12, -18);
        assert_eq!(g, 6);
        assert_eq!(12 * x - 18 * y, 6);
    }
}
