//! Smith normal form of integer matrices with unimodular transforms,
//! used to solve `N x ∈ Z^n` when counting torus fixed points.

use num::{BigInt, Integer, One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Left unimodular transform.
    pub u: Vec<Vec<BigInt>>,
    /// Diagonal of `D = U * M * V`, with `d1 | d2 | ... | dn`, zeros last.
    pub d: Vec<BigInt>,
    /// Right unimodular transform.
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn swap_rows(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    m.swap(a, b);
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row[a] -= q * row[b]
fn row_op(m: &mut [Vec<BigInt>], a: usize, b: usize, q: &BigInt) {
    let rb = m[b].clone();
    for (x, y) in m[a].iter_mut().zip(rb.iter()) {
        *x -= q * y;
    }
}

fn col_op(m: &mut [Vec<BigInt>], a: usize, b: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = q * &row[b];
        row[a] -= t;
    }
}

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and `D`
/// diagonal with a divisibility chain. Total on integer matrices.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SnfResult {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let n = rows.min(cols);

    for t in 0..n {
        loop {
            // find a nonzero pivot in the trailing block, smallest |.|
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() {
                        let better = match &best {
                            None => true,
                            Some((bi, bj)) => a[i][j].abs() < a[*bi][*bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != t {
                swap_rows(&mut a, pi, t);
                swap_rows(&mut u, pi, t);
            }
            if pj != t {
                swap_cols(&mut a, pj, t);
                swap_cols(&mut v, pj, t);
            }
            let mut clean = true;
            for i in (t + 1)..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_op(&mut a, i, t, &q);
                    row_op(&mut u, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_op(&mut a, j, t, &q);
                    col_op(&mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                // force pivot to divide the rest of the block
                let mut ok = true;
                'outer: for i in (t + 1)..rows {
                    for j in (t + 1)..cols {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            // add row i to row t to pull the entry in range
                            let one = BigInt::one();
                            let minus = -&one;
                            row_op(&mut a, t, i, &minus);
                            row_op(&mut u, t, i, &minus);
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                if ok {
                    break;
                }
            }
        }
    }

    // normalize signs, collect diagonal, push zeros last
    let mut d: Vec<BigInt> = (0..n).map(|i| a[i][i].clone()).collect();
    for (i, di) in d.iter_mut().enumerate() {
        if di.is_negative() {
            *di = -di.clone();
            for x in u[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    // zeros last while keeping transforms consistent
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| d[i].is_zero());
    let mut perm_needed = false;
    for (k, &i) in order.iter().enumerate() {
        if k != i {
            perm_needed = true;
        }
    }
    if perm_needed {
        let mut nd = Vec::with_capacity(n);
        let mut nu = u.clone();
        let mut nv = v.clone();
        for (k, &i) in order.iter().enumerate() {
            nd.push(d[i].clone());
            nu[k] = u[i].clone();
            for (r, row) in v.iter().enumerate() {
                nv[r][k] = row[i].clone();
            }
        }
        d = nd;
        u = nu;
        v = nv;
    }
    SnfResult { u, d, v }
}

impl SnfResult {
    /// `|det M| = prod d_i` for square inputs.
    pub fn abs_det(&self) -> BigInt {
        self.d.iter().fold(BigInt::one(), |acc, x| acc * x)
    }
}

pub fn matmul_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    use crate::exact::{Matrix, Rational};
    let n = m.len();
    let mat = Matrix::from_fn(n, n, |i, j| Rational::from_integer(m[i][j].clone()));
    let d = mat.determinant();
    assert!(d.is_integer());
    d.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_mat(v: &[[i64; 4]; 4]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn check_snf(m: &[Vec<BigInt>]) -> SnfResult {
        let r = smith_normal_form(m);
        // U m V = D
        let umv = matmul_int(&matmul_int(&r.u, m), &r.v);
        for i in 0..m.len() {
            for j in 0..m[0].len() {
                let expect = if i == j && i < r.d.len() { r.d[i].clone() } else { BigInt::zero() };
                assert_eq!(umv[i][j], expect, "U m V != D at ({i},{j})");
            }
        }
        // unimodular
        assert_eq!(det_int(&r.u).abs(), BigInt::one());
        assert_eq!(det_int(&r.v).abs(), BigInt::one());
        // divisibility chain, zeros last
        for w in r.d.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "chain {:?}", r.d);
            }
        }
        r
    }

    #[test]
    fn identity_matrix() {
        let m = int_mat(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        let r = check_snf(&m);
        assert!(r.d.iter().all(|d| d == &BigInt::one()));
    }

    #[test]
    fn doubled_lattice_has_sixteen_fixed_points() {
        // the matrix of (-1 - id) on any T^4: fixed points are the
        // half-lattice points
        let m = int_mat(&[[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]);
        let r = check_snf(&m);
        assert_eq!(r.abs_det(), BigInt::from(16));
        // brute-force oracle: count x in {0,1/2}^4 with 2x integral
        let mut count = 0;
        for mask in 0..16u32 {
            let x: Vec<f64> = (0..4).map(|b| if mask >> b & 1 == 1 { 0.5 } else { 0.0 }).collect();
            if x.iter().all(|&xi| (2.0 * xi).fract() == 0.0) {
                count += 1;
            }
        }
        assert_eq!(count, 16);
    }

    #[test]
    fn zero_matrix() {
        let m = int_mat(&[[0; 4]; 4]);
        let r = check_snf(&m);
        assert!(r.d.iter().all(|d| d.is_zero()));
    }

    proptest! {
        #[test]
        fn random_small_matrices(entries in proptest::collection::vec(-5i64..=5, 16)) {
            let m: Vec<Vec<BigInt>> = entries
                .chunks(4)
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let r = check_snf(&m);
            prop_assert_eq!(r.abs_det(), det_int(&m).abs());
        }
    }
}
