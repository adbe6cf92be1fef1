//! Pointwise 2-form algebra on `R^4 = C^2`.
//!
//! Real coordinates are fixed once for the whole crate: `z = x1 + i x2`,
//! `w = x3 + i x4`, orientation `dx1 ∧ dx2 ∧ dx3 ∧ dx4`, and 2-form
//! components in the basis
//! `{dx12, dx13, dx14, dx23, dx24, dx34}`.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HodgeError {
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
}

/// Index pairs of the six basis 2-forms, in component order.
pub const BASIS_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A point of `C^2` in real coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point4(pub [f64; 4]);

impl Point4 {
    pub fn from_complex(z: (f64, f64), w: (f64, f64)) -> Self {
        Point4([z.0, z.1, w.0, w.1])
    }
    pub fn z(&self) -> (f64, f64) {
        (self.0[0], self.0[1])
    }
    pub fn w(&self) -> (f64, f64) {
        (self.0[2], self.0[3])
    }
    /// `s = |z|^2 + |w|^2`.
    pub fn s(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }
    pub fn add_scaled(&self, dir: &[f64; 4], t: f64) -> Self {
        Point4([
            self.0[0] + t * dir[0],
            self.0[1] + t * dir[1],
            self.0[2] + t * dir[2],
            self.0[3] + t * dir[3],
        ])
    }
}

/// A real 2-form at a point: six components in the fixed basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoForm(pub [f64; 6]);

impl TwoForm {
    pub const ZERO: TwoForm = TwoForm([0.0; 6]);

    /// Standard Kähler form `omega_0 = dx12 + dx34`.
    pub fn omega0() -> Self {
        TwoForm([1.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    }
    /// `Re(dz ∧ dw) = dx13 - dx24`.
    pub fn re_omega_top() -> Self {
        TwoForm([0.0, 1.0, 0.0, 0.0, -1.0, 0.0])
    }
    /// `Im(dz ∧ dw) = dx14 + dx23`.
    pub fn im_omega_top() -> Self {
        TwoForm([0.0, 0.0, 1.0, 1.0, 0.0, 0.0])
    }
    /// Anti-self-dual basis: `dx12 - dx34`, `dx13 + dx24`, `dx14 - dx23`.
    pub fn asd_basis(alpha: usize) -> Self {
        match alpha {
            1 => TwoForm([1.0, 0.0, 0.0, 0.0, 0.0, -1.0]),
            2 => TwoForm([0.0, 1.0, 0.0, 0.0, 1.0, 0.0]),
            3 => TwoForm([0.0, 0.0, 1.0, -1.0, 0.0, 0.0]),
            _ => panic!("alpha must be 1..=3"),
        }
    }

    pub fn add(&self, o: &TwoForm) -> TwoForm {
        let mut c = [0.0; 6];
        for i in 0..6 {
            c[i] = self.0[i] + o.0[i];
        }
        TwoForm(c)
    }

    pub fn sub(&self, o: &TwoForm) -> TwoForm {
        let mut c = [0.0; 6];
        for i in 0..6 {
            c[i] = self.0[i] - o.0[i];
        }
        TwoForm(c)
    }

    pub fn scale(&self, t: f64) -> TwoForm {
        let mut c = self.0;
        for x in &mut c {
            *x *= t;
        }
        TwoForm(c)
    }

    /// Antisymmetric component matrix `F_{ab}`.
    pub fn as_matrix(&self) -> [[f64; 4]; 4] {
        let mut f = [[0.0; 4]; 4];
        for (k, &(a, b)) in BASIS_PAIRS.iter().enumerate() {
            f[a][b] = self.0[k];
            f[b][a] = -self.0[k];
        }
        f
    }

    pub fn from_matrix(f: &[[f64; 4]; 4]) -> TwoForm {
        let mut c = [0.0; 6];
        for (k, &(a, b)) in BASIS_PAIRS.iter().enumerate() {
            c[k] = f[a][b];
        }
        TwoForm(c)
    }

    /// Coefficient of `dx1234` in `self ∧ other`.
    pub fn wedge(&self, o: &TwoForm) -> f64 {
        let a = &self.0;
        let b = &o.0;
        a[0] * b[5] - a[1] * b[4] + a[2] * b[3] + a[3] * b[2] - a[4] * b[1] + a[5] * b[0]
    }

    /// Build the real 2-form `i Σ H_jk dz^j ∧ dzbar^k` from a Hermitian
    /// complex Hessian: `h11`, `h22` real, `h12 = a + i b`.
    pub fn from_hermitian(h11: f64, h22: f64, a: f64, b: f64) -> TwoForm {
        TwoForm([
            2.0 * h11,
            -2.0 * b,
            2.0 * a,
            -2.0 * a,
            -2.0 * b,
            2.0 * h22,
        ])
    }

    /// Pullback under a real linear map: `(g^* α)_{ab} = α_{cd} g^c_a g^d_b`.
    pub fn pullback(&self, g: &[[f64; 4]; 4]) -> TwoForm {
        let f = self.as_matrix();
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut acc = 0.0;
                for c in 0..4 {
                    for d in 0..4 {
                        acc += f[c][d] * g[c][a] * g[d][b];
                    }
                }
                out[a][b] = acc;
            }
        }
        TwoForm::from_matrix(&out)
    }

    /// Type (1,1) part with respect to the standard complex structure:
    /// `α^{1,1} = (α + I^* α) / 2`.
    pub fn type_11_part(&self) -> TwoForm {
        let j = complex_structure();
        self.add(&self.pullback(&j)).scale(0.5)
    }
}

/// The matrix of the standard complex structure `I` (multiplication by i).
pub fn complex_structure() -> [[f64; 4]; 4] {
    // I dx1 = -dx2 ... as an endomorphism of tangent vectors: I e1 = e2,
    // I e2 = -e1, I e3 = e4, I e4 = -e3, written with g[c][a] = (I e_a)^c.
    let mut j = [[0.0; 4]; 4];
    j[1][0] = 1.0;
    j[0][1] = -1.0;
    j[3][2] = 1.0;
    j[2][3] = -1.0;
    j
}

/// Symmetric positive-definite metric at a point.
#[derive(Clone, Copy, Debug)]
pub struct Metric4(pub [[f64; 4]; 4]);

impl Metric4 {
    pub fn flat() -> Self {
        let mut g = [[0.0; 4]; 4];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Metric4(g)
    }

    /// The Riemannian metric of the Kähler form with Hermitian Hessian
    /// `(h11, h22, h12 = a + ib)`.
    pub fn from_hermitian(h11: f64, h22: f64, a: f64, b: f64) -> Self {
        Metric4([
            [2.0 * h11, 0.0, 2.0 * a, 2.0 * b],
            [0.0, 2.0 * h11, -2.0 * b, 2.0 * a],
            [2.0 * a, -2.0 * b, 2.0 * h22, 0.0],
            [2.0 * b, 2.0 * a, 0.0, 2.0 * h22],
        ])
    }

    pub fn det(&self) -> f64 {
        det4(&self.0)
    }

    pub fn inverse(&self) -> Result<[[f64; 4]; 4], HodgeError> {
        let d = self.det();
        if !(d > 0.0) || !self.is_positive_definite() {
            return Err(HodgeError::NotPositiveDefinite);
        }
        Ok(inv4(&self.0))
    }

    pub fn is_positive_definite(&self) -> bool {
        // leading principal minors
        let g = &self.0;
        let m1 = g[0][0];
        let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let m3 = det3(&[
            [g[0][0], g[0][1], g[0][2]],
            [g[1][0], g[1][1], g[1][2]],
            [g[2][0], g[2][1], g[2][2]],
        ]);
        let m4 = det4(g);
        m1 > 0.0 && m2 > 0.0 && m3 > 0.0 && m4 > 0.0
    }

    /// Pointwise norm `|α|_g` of a 2-form.
    pub fn form_norm(&self, alpha: &TwoForm) -> Result<f64, HodgeError> {
        let ginv = self.inverse()?;
        let f = alpha.as_matrix();
        // |α|^2 = (1/2) G^{ac} G^{bd} F_{ab} F_{cd} = -(1/2) tr((G^{-1}F)^2)
        let mut gf = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += ginv[i][k] * f[k][j];
                }
                gf[i][j] = acc;
            }
        }
        let mut tr = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                tr += gf[i][j] * gf[j][i];
            }
        }
        Ok((-0.5 * tr).max(0.0).sqrt())
    }

    /// Hodge star on 2-forms for this metric and the fixed orientation.
    pub fn star(&self, alpha: &TwoForm) -> Result<TwoForm, HodgeError> {
        let ginv = self.inverse()?;
        let sqrt_g = self.det().sqrt();
        let f = alpha.as_matrix();
        // raise indices
        let mut fu = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut acc = 0.0;
                for c in 0..4 {
                    for d in 0..4 {
                        acc += ginv[a][c] * ginv[b][d] * f[c][d];
                    }
                }
                fu[a][b] = acc;
            }
        }
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut acc = 0.0;
                for c in 0..4 {
                    for d in 0..4 {
                        let e = levi_civita(a, b, c, d);
                        if e != 0.0 {
                            acc += e * fu[c][d];
                        }
                    }
                }
                out[a][b] = 0.5 * sqrt_g * acc;
            }
        }
        Ok(TwoForm::from_matrix(&out))
    }

    /// Anti-self-duality residual `|*α + α| / max(|α|, floor)`.
    pub fn asd_residual(&self, alpha: &TwoForm, floor: f64) -> Result<f64, HodgeError> {
        let star = self.star(alpha)?;
        let num = self.form_norm(&star.add(alpha))?;
        let den = self.form_norm(alpha)?.max(floor);
        Ok(num / den)
    }

    /// Riemannian volume density against `dx1234`.
    pub fn volume_density(&self) -> f64 {
        self.det().sqrt()
    }

    /// An orthonormal frame (columns) via Cholesky of the metric.
    pub fn orthonormal_frame(&self) -> Result<[[f64; 4]; 4], HodgeError> {
        // g = L L^T; frame vectors are columns of (L^T)^{-1}
        let l = cholesky4(&self.0).ok_or(HodgeError::NotPositiveDefinite)?;
        let lt_inv = inv4(&transpose4(&l));
        Ok(lt_inv)
    }
}

fn levi_civita(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let idx = [a, b, c, d];
    let mut seen = [false; 4];
    for &i in &idx {
        if seen[i] {
            return 0.0;
        }
        seen[i] = true;
    }
    let mut perm = idx;
    let mut sign = 1.0;
    for i in 0..4 {
        while perm[i] != i {
            let j = perm[i];
            perm.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut det = 0.0;
    for j in 0..4 {
        let mut sub = [[0.0; 3]; 3];
        for r in 1..4 {
            let mut cc = 0;
            for c in 0..4 {
                if c == j {
                    continue;
                }
                sub[r - 1][cc] = m[r][c];
                cc += 1;
            }
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][j] * det3(&sub);
    }
    det
}

fn inv4(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    // Gauss-Jordan with partial pivoting
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let mut piv = col;
        for r in (col + 1)..4 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..4 {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..4 {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col];
                for j in 0..4 {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

fn transpose4(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut t = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = m[j][i];
        }
    }
    t
}

fn cholesky4(m: &[[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let mut l = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let mut sum = m[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Some(l)
}

/// Real 4x4 matrix of a complex 2x2 linear map acting on `(z, w)`.
pub fn real_matrix_of_complex(
    m: &[[(f64, f64); 2]; 2],
) -> [[f64; 4]; 4] {
    // block structure: each complex entry a+ib acts as [[a,-b],[b,a]]
    let mut g = [[0.0; 4]; 4];
    for bi in 0..2 {
        for bj in 0..2 {
            let (a, b) = m[bi][bj];
            g[2 * bi][2 * bj] = a;
            g[2 * bi][2 * bj + 1] = -b;
            g[2 * bi + 1][2 * bj] = b;
            g[2 * bi + 1][2 * bj + 1] = a;
        }
    }
    g
}
