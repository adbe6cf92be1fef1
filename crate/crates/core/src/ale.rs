//! The Eguchi-Hanson ALE Calabi-Yau model on `C^2/Z_2` in radial form:
//! Kähler potential, metric, circle/SU(2) moment maps and the radial
//! anti-self-dual generator, all with closed-form derivatives.
//!
//! Everything is a function of `s = r^2`. The Kähler potential solves the
//! radial Ricci-flat equation `4 φ'(φ' + s φ'') = 1` with `s φ' -> a^2/2`
//! at the origin, which pins `φ'(s) = sqrt(s^2 + a^4) / (2s)`; the additive
//! constant is fixed by `φ(s) - s/2 -> 0` at infinity.

use crate::hodge::{Metric4, Point4, TwoForm};
use crate::radial::{Grid, RadialProfile};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AleError {
    #[error("resolution scale a must be nonnegative, got {0}")]
    NegativeScale(f64),
    #[error("operation requires a > 0 (flat degenerate model)")]
    FlatModel,
    #[error("only the Z_2 model (gamma order 2) is realized numerically, got {0}")]
    UnsupportedOrder(usize),
    #[error(transparent)]
    Radial(#[from] crate::radial::RadialError),
}

/// Number of real dimensions worth of volume: integrating a radial 4-form
/// coefficient `c(s)` over `C^2/Z_m` gives `(π^2 / m) ∫ c(s) s ds`.
pub fn radial_volume_factor(gamma_order: usize) -> f64 {
    std::f64::consts::PI.powi(2) / gamma_order as f64
}

/// The Eguchi-Hanson model at resolution scale `a >= 0` (`a = 0` is the
/// flat cone), with a log grid and the sampled potential.
#[derive(Clone, Debug)]
pub struct EhModel {
    a: f64,
    gamma_order: usize,
    grid: Grid,
    potential: RadialProfile,
}

impl EhModel {
    /// Default grid: 2048 log-spaced nodes on `[1e-4 a^2, 1e4 a^2]`
    /// (scale 1 when `a = 0`).
    pub fn default_grid(a: f64) -> Grid {
        let scale = if a > 0.0 { a * a } else { 1.0 };
        Grid::log_spaced(1e-4 * scale, 1e4 * scale, 2048).expect("valid default grid")
    }

    pub fn new(a: f64, gamma_order: usize, grid: Grid) -> Result<Self, AleError> {
        if a < 0.0 {
            return Err(AleError::NegativeScale(a));
        }
        if gamma_order != 2 {
            return Err(AleError::UnsupportedOrder(gamma_order));
        }
        let potential = RadialProfile::from_fn(&grid, |s| eh_phi(a, s))?;
        Ok(EhModel { a, gamma_order, grid, potential })
    }

    pub fn with_default_grid(a: f64) -> Result<Self, AleError> {
        Self::new(a, 2, Self::default_grid(a))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn gamma_order(&self) -> usize {
        self.gamma_order
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// The sampled Kähler potential `φ(s)`.
    pub fn potential_profile(&self) -> &RadialProfile {
        &self.potential
    }

    pub fn phi(&self, s: f64) -> f64 {
        eh_phi(self.a, s)
    }

    pub fn dphi(&self, s: f64) -> f64 {
        eh_dphi(self.a, s)
    }

    pub fn d2phi(&self, s: f64) -> f64 {
        eh_d2phi(self.a, s)
    }

    pub fn d3phi(&self, s: f64) -> f64 {
        eh_d3phi(self.a, s)
    }

    /// `φ(s) - s/2`, evaluated in a cancellation-free form.
    pub fn phi_minus_flat(&self, s: f64) -> f64 {
        eh_phi_minus_flat(self.a, s)
    }

    /// `φ'(s) - 1/2`, evaluated in a cancellation-free form.
    pub fn dphi_minus_half(&self, s: f64) -> f64 {
        eh_dphi_minus_half(self.a, s)
    }

    /// The radial metric eigenvalue `φ' + s φ''`, in the cancellation-free
    /// form `s / (2 sqrt(s^2 + a^4))`.
    pub fn radial_eigenvalue(&self, s: f64) -> f64 {
        eh_radial_eigenvalue(self.a, s)
    }

    /// Ricci-flat residual `4 φ'(φ' + s φ'') - 1` from the closed form.
    pub fn ricci_flat_residual(&self, s: f64) -> f64 {
        4.0 * self.dphi(s) * self.radial_eigenvalue(s) - 1.0
    }

    pub fn metric_at(&self, p: &Point4) -> Metric4 {
        let s = p.s();
        radial_metric_at(self.dphi(s), self.d2phi(s), p)
    }

    pub fn kahler_form_at(&self, p: &Point4) -> TwoForm {
        let s = p.s();
        radial_form_at(self.dphi(s), self.d2phi(s), p)
    }

    /// Hamiltonian `ν_α = φ'(s) q_α` of the circle (`α = 1`) or the other
    /// two SU(2) directions (`α = 2, 3`); `dν_α = ι_{v_α} η` and
    /// `ν_α - ν_{0,α} -> 0` at infinity.
    pub fn moment_map(&self, alpha: usize, p: &Point4) -> f64 {
        self.dphi(p.s()) * angular_factor(alpha).value(p)
    }

    /// `i ∂ ∂̄ ν_α` assembled from the closed-form derivatives.
    pub fn moment_form_at(&self, alpha: usize, p: &Point4) -> TwoForm {
        let s = p.s();
        angular_form_at(
            self.dphi(s),
            self.d2phi(s),
            self.d3phi(s),
            angular_factor(alpha),
            p,
        )
    }

    /// The generating vector field of the `α`-th circle action at `p`
    /// (flat model fields; the ALE action covers them under the resolution).
    pub fn circle_field(&self, alpha: usize, p: &Point4) -> [f64; 4] {
        circle_field(alpha, p)
    }
}

/// `φ(s)` with the decay normalization `φ - s/2 -> 0`.
pub fn eh_phi(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        return 0.5 * s;
    }
    0.5 * s + eh_phi_minus_flat(a, s)
}

pub fn eh_phi_minus_flat(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let a2 = a * a;
    let a4 = a2 * a2;
    let root = (s * s + a4).sqrt();
    // φ - s/2 = (root - s)/2 - (a²/2) ln((a² + root)/s), grouped to avoid
    // cancellation at large s
    let diff = a4 / (root + s); // root - s
    0.5 * diff - 0.5 * a2 * ((a2 + diff) / s).ln_1p()
}

pub fn eh_dphi(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        return 0.5;
    }
    let a4 = a.powi(4);
    (s * s + a4).sqrt() / (2.0 * s)
}

pub fn eh_dphi_minus_half(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let a4 = a.powi(4);
    let root = (s * s + a4).sqrt();
    a4 / (2.0 * s * (root + s))
}

pub fn eh_d2phi(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let a4 = a.powi(4);
    -a4 / (2.0 * s * s * (s * s + a4).sqrt())
}

/// `φ' + s φ'' = s / (2 sqrt(s^2 + a^4))`; the naive two-term sum cancels
/// catastrophically near the core.
pub fn eh_radial_eigenvalue(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        return 0.5;
    }
    let a4 = a.powi(4);
    s / (2.0 * (s * s + a4).sqrt())
}

pub fn eh_d3phi(a: f64, s: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let a4 = a.powi(4);
    let q = s * s + a4;
    a4 * (3.0 * s * s + 2.0 * a4) / (2.0 * s.powi(3) * q.powf(1.5))
}

/// Flat moment maps: `μ_0 = (|z|^2 - |w|^2)/2`, `-i ν_{0,2} + ν_{0,3} = conj(z) w`.
pub fn moment_map_flat(z: (f64, f64), w: (f64, f64)) -> (f64, f64, f64) {
    let p = Point4::from_complex(z, w);
    (
        0.5 * angular_factor(1).value(&p),
        0.5 * angular_factor(2).value(&p),
        0.5 * angular_factor(3).value(&p),
    )
}

/// The three quadratic angular factors: `q_1 = |z|^2 - |w|^2`,
/// `q_2 = -2 Im(conj(z) w)`, `q_3 = 2 Re(conj(z) w)`, so that the flat
/// Hamiltonians are `q_α / 2`.
#[derive(Clone, Copy, Debug)]
pub enum AngularFactor {
    Q1,
    Q2,
    Q3,
}

pub fn angular_factor(alpha: usize) -> AngularFactor {
    match alpha {
        1 => AngularFactor::Q1,
        2 => AngularFactor::Q2,
        3 => AngularFactor::Q3,
        _ => panic!("alpha must be in 1..=3"),
    }
}

impl AngularFactor {
    pub fn value(&self, p: &Point4) -> f64 {
        let [x1, x2, x3, x4] = p.0;
        match self {
            AngularFactor::Q1 => x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4,
            AngularFactor::Q2 => -2.0 * (x1 * x4 - x2 * x3),
            AngularFactor::Q3 => 2.0 * (x1 * x3 + x2 * x4),
        }
    }

    /// Complex gradient `(∂_z q, ∂_w q)`.
    fn grad(&self, p: &Point4) -> [(f64, f64); 2] {
        let (zr, zi) = p.z();
        let (wr, wi) = p.w();
        match self {
            // (conj z, -conj w)
            AngularFactor::Q1 => [(zr, -zi), (-wr, wi)],
            // (-i conj w, i conj z)
            AngularFactor::Q2 => [(-wi, -wr), (zi, zr)],
            // (conj w, conj z)
            AngularFactor::Q3 => [(wr, -wi), (zr, -zi)],
        }
    }

    /// Constant Hermitian matrix `∂_j ∂_kbar q` as `(h11, h22, h12)`.
    fn hermitian(&self) -> (f64, f64, (f64, f64)) {
        match self {
            AngularFactor::Q1 => (1.0, -1.0, (0.0, 0.0)),
            AngularFactor::Q2 => (0.0, 0.0, (0.0, -1.0)),
            AngularFactor::Q3 => (0.0, 0.0, (1.0, 0.0)),
        }
    }
}

/// Generating vector fields of the flat circle actions at `p`.
pub fn circle_field(alpha: usize, p: &Point4) -> [f64; 4] {
    let [x1, x2, x3, x4] = p.0;
    match alpha {
        1 => [x2, -x1, -x4, x3],
        2 => [x3, x4, -x1, -x2],
        3 => [x4, -x3, x2, -x1],
        _ => panic!("alpha must be in 1..=3"),
    }
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Hermitian Hessian of a radial function `F(s)` at `p`, as
/// `(h11, h22, h12)` with `h12` complex: `H_jk = F' δ_jk + F'' zbar_j z_k`.
fn radial_hessian(d1: f64, d2: f64, p: &Point4) -> (f64, f64, (f64, f64)) {
    let (zr, zi) = p.z();
    let (wr, wi) = p.w();
    let zz = zr * zr + zi * zi;
    let ww = wr * wr + wi * wi;
    // conj(z) * w
    let zw = cmul((zr, -zi), (wr, wi));
    (d1 + d2 * zz, d1 + d2 * ww, (d2 * zw.0, d2 * zw.1))
}

/// `i ∂ ∂̄ F` for radial `F` with `F'(s) = d1`, `F''(s) = d2` at `p`.
pub fn radial_form_at(d1: f64, d2: f64, p: &Point4) -> TwoForm {
    let (h11, h22, h12) = radial_hessian(d1, d2, p);
    TwoForm::from_hermitian(h11, h22, h12.0, h12.1)
}

/// Kähler metric of `i ∂ ∂̄ F` for radial `F`.
pub fn radial_metric_at(d1: f64, d2: f64, p: &Point4) -> Metric4 {
    let (h11, h22, h12) = radial_hessian(d1, d2, p);
    Metric4::from_hermitian(h11, h22, h12.0, h12.1)
}

/// `i ∂ ∂̄ (R(s) q(x))` for a radial profile `R` (with derivatives `r1`, `r2`
/// at `s`) times a quadratic angular factor `q`.
pub fn angular_form_at(
    r: f64,
    r1: f64,
    r2: f64,
    q: AngularFactor,
    p: &Point4,
) -> TwoForm {
    let (zr, zi) = p.z();
    let (wr, wi) = p.w();
    let zbar = [(zr, -zi), (wr, -wi)];
    let zvar = [(zr, zi), (wr, wi)];
    let qv = q.value(p);
    let grad = q.grad(p);
    let (qh11, qh22, qh12) = q.hermitian();

    let entry = |j: usize, k: usize| -> (f64, f64) {
        // R'' zbar_j z_k q
        let t1 = cmul(zbar[j], zvar[k]);
        let mut re = r2 * t1.0 * qv;
        let mut im = r2 * t1.1 * qv;
        // R' (δ_jk q + z_k ∂_j q + zbar_j conj(∂_k q))
        if j == k {
            re += r1 * qv;
        }
        let t2 = cmul(zvar[k], grad[j]);
        let t3 = cmul(zbar[j], (grad[k].0, -grad[k].1));
        re += r1 * (t2.0 + t3.0);
        im += r1 * (t2.1 + t3.1);
        // R ∂_j ∂_kbar q
        let qh = match (j, k) {
            (0, 0) => (qh11, 0.0),
            (1, 1) => (qh22, 0.0),
            (0, 1) => qh12,
            (1, 0) => (qh12.0, -qh12.1),
            _ => unreachable!(),
        };
        re += r * qh.0;
        im += r * qh.1;
        (re, im)
    };

    let h11 = entry(0, 0).0;
    let h22 = entry(1, 1).0;
    let h12 = entry(0, 1);
    TwoForm::from_hermitian(h11, h22, h12.0, h12.1)
}

/// The radial anti-self-dual generator `α = i ∂ ∂̄ ψ` on the Eguchi-Hanson
/// model: `ψ'(s) = 2C / (s sqrt(s^2 + a^4))`, the unique radial solution of
/// `(i ∂ ∂̄ ψ) ∧ η = 0`, decaying like `-2C/s` at infinity.
#[derive(Clone, Debug)]
pub struct AsdGenerator {
    a: f64,
    c: f64,
}

impl AsdGenerator {
    pub fn new(model: &EhModel, c: f64) -> Result<Self, AleError> {
        if model.a() <= 0.0 {
            return Err(AleError::FlatModel);
        }
        Ok(AsdGenerator { a: model.a(), c })
    }

    /// Normalization making the total radial self-pairing equal `-1/2`,
    /// the self-intersection of the dual generator on the `A_1` model:
    /// `C = a^2 / (4π)`.
    pub fn calibrated(model: &EhModel) -> Result<Self, AleError> {
        let c = model.a().powi(2) / (4.0 * std::f64::consts::PI);
        Self::new(model, c)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn psi(&self, s: f64) -> f64 {
        let a2 = self.a * self.a;
        let a4 = a2 * a2;
        let root = (s * s + a4).sqrt();
        let diff = a4 / (root + s); // root - s
        -(2.0 * self.c / a2) * ((a2 + diff) / s).ln_1p()
    }

    pub fn dpsi(&self, s: f64) -> f64 {
        let a4 = self.a.powi(4);
        2.0 * self.c / (s * (s * s + a4).sqrt())
    }

    pub fn d2psi(&self, s: f64) -> f64 {
        let a4 = self.a.powi(4);
        let q = s * s + a4;
        -2.0 * self.c * (2.0 * s * s + a4) / (s * s * q.powf(1.5))
    }

    pub fn profile(&self, grid: &Grid) -> RadialProfile {
        RadialProfile::from_fn(grid, |s| self.psi(s)).expect("finite psi")
    }

    pub fn form_at(&self, p: &Point4) -> TwoForm {
        let s = p.s();
        radial_form_at(self.dpsi(s), self.d2psi(s), p)
    }

    /// `w = s ψ'`; the self-pairing integrand reduces to `w w'`.
    pub fn w(&self, s: f64) -> f64 {
        2.0 * self.c / (s * s + self.a.powi(4)).sqrt()
    }

    /// Exact value of `∫ α ∧ α` over the radial band `[s0, s1]` of the
    /// `Z_2` model: `2 π^2 (w(s1)^2 - w(s0)^2)`.
    pub fn pairing_analytic(&self, s0: f64, s1: f64) -> f64 {
        2.0 * std::f64::consts::PI.powi(2) * (self.w(s1).powi(2) - self.w(s0).powi(2))
    }

    /// Full-space self-pairing `-8 π^2 C^2 / a^4`.
    pub fn pairing_total(&self) -> f64 {
        -8.0 * std::f64::consts::PI.powi(2) * self.c * self.c / self.a.powi(4)
    }

    /// Simpson quadrature of the self-pairing over `[s0, s1]`: the wedge
    /// coefficient of `α ∧ α` is `(8/s) w w'` against the volume factor
    /// `π^2/2 · s ds` of the `Z_2` quotient.
    pub fn pairing_numeric(&self, s0: f64, s1: f64, panels: usize) -> f64 {
        let a4 = self.a.powi(4);
        let c = self.c;
        crate::radial::simpson_log(
            |s| {
                let q = s * s + a4;
                // 4 π^2 w w' with w = 2C (s^2+a^4)^{-1/2}
                -16.0 * std::f64::consts::PI.powi(2) * c * c * s / (q * q)
            },
            s0,
            s1,
            panels,
        )
    }
}

/// Anti-self-duality residual `|*α + α| / max(|α|, floor)` of a form
/// against a metric.
pub fn asd_check(metric: &Metric4, form: &TwoForm, floor: f64) -> Result<f64, crate::hodge::HodgeError> {
    metric.asd_residual(form, floor)
}

/// A uniformly random point on the sphere `|x|^2 = s`.
pub fn sample_point_at_s(s: f64, rng: &mut impl Rng) -> Point4 {
    loop {
        let v: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-12 {
            let f = (s / n2).sqrt();
            return Point4([v[0] * f, v[1] * f, v[2] * f, v[3] * f]);
        }
    }
}

/// Fourth-order Runge-Kutta integration of the radial volume ODE
/// `2 ((s φ')^2)' = s` in the variable `w = s φ'`, from `w(0) = a^2/2`,
/// reporting `w` at the grid nodes. Independent reference for the
/// closed-form potential.
pub fn integrate_radial_ma_ode(a: f64, grid: &Grid, substeps: usize) -> Vec<f64> {
    let rhs = |s: f64, w: f64| s / (4.0 * w);
    let mut out = Vec::with_capacity(grid.len());
    let mut s = 0.0;
    let mut w = 0.5 * a * a;
    for &target in grid.s() {
        let n = substeps.max(1);
        let h = (target - s) / n as f64;
        for _ in 0..n {
            let k1 = rhs(s, w);
            let k2 = rhs(s + 0.5 * h, w + 0.5 * h * k1);
            let k3 = rhs(s + 0.5 * h, w + 0.5 * h * k2);
            let k4 = rhs(s + h, w + h * k3);
            w += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            s += h;
        }
        s = target;
        out.push(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_model_has_constant_half_slope() {
        let m = EhModel::with_default_grid(0.0).unwrap();
        for &s in m.grid().s().iter().step_by(100) {
            assert_eq!(m.dphi(s), 0.5);
            assert_eq!(m.phi(s), 0.5 * s);
        }
    }

    #[test]
    fn closed_form_satisfies_ricci_flat_equation() {
        let m = EhModel::with_default_grid(1.0).unwrap();
        let sup = m
            .grid()
            .s()
            .iter()
            .map(|&s| m.ricci_flat_residual(s).abs())
            .fold(0.0, f64::max);
        assert!(sup < 1e-10, "sup residual {sup}");
    }

    #[test]
    fn core_and_tail_asymptotics() {
        let m = EhModel::with_default_grid(1.0).unwrap();
        // s φ' -> a^2/2 at the origin
        let s0 = m.grid().s_min();
        assert!((s0 * m.dphi(s0) - 0.5).abs() < 1e-7);
        // s^2 (φ' - 1/2) -> a^4/4 in the tail
        for &s in &[1e3, 1e4] {
            let v = s * s * m.dphi_minus_half(s);
            assert!((v - 0.25).abs() < 1e-6, "at s={s}: {v}");
        }
        // φ - s/2 -> 0 with s (φ - s/2) bounded
        let tail = m.grid().s().iter().filter(|&&s| s > 1e2);
        for &s in tail {
            let v = s * m.phi_minus_flat(s);
            assert!(v.abs() < 0.6, "s(φ - s/2) unbounded: {v} at {s}");
        }
    }

    #[test]
    fn rk4_oracle_matches_closed_form() {
        let a = 1.0;
        let grid = EhModel::default_grid(a);
        let m = EhModel::new(a, 2, grid.clone()).unwrap();
        let w = integrate_radial_ma_ode(a, &grid, 8);
        let mut worst = 0.0f64;
        for (i, &s) in grid.s().iter().enumerate() {
            let exact = s * m.dphi(s);
            let rel = ((w[i] - exact) / exact).abs();
            worst = worst.max(rel);
        }
        assert!(worst < 1e-8, "sup rel err {worst}");
    }

    #[test]
    fn scaling_covariance_of_the_potential() {
        // a -> λ a, s -> λ^2 s sends φ -> λ^2 φ (our normalization makes
        // the additive constant vanish identically)
        let lambda: f64 = 0.37;
        let m1 = EhModel::with_default_grid(1.0).unwrap();
        let m2 = EhModel::with_default_grid(lambda).unwrap();
        for &s in m1.grid().s().iter().step_by(37) {
            let lhs = m2.phi(lambda * lambda * s);
            let rhs = lambda * lambda * m1.phi(s);
            assert!(
                (lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()),
                "s={s}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn moment_maps_match_flat_limits_and_hamilton_equation() {
        let m = EhModel::with_default_grid(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // flat special values
        assert_eq!(moment_map_flat((1.0, 0.0), (0.0, 0.0)), (0.5, 0.0, 0.0));
        assert_eq!(moment_map_flat((1.0, 0.0), (1.0, 0.0)), (0.0, 0.0, 1.0));
        assert_eq!(moment_map_flat((0.0, 0.0), (0.0, 0.0)), (0.0, 0.0, 0.0));
        // a = 0: μ = μ_0 exactly
        let flat = EhModel::with_default_grid(0.0).unwrap();
        let p = sample_point_at_s(2.5, &mut rng);
        let (mu0, _, _) = moment_map_flat(p.z(), p.w());
        assert!((flat.moment_map(1, &p) - mu0).abs() < 1e-14);

        // finite-difference check dν_α = ι_v η at random points
        for _ in 0..100 {
            let s = rng.gen_range(0.05f64..50.0);
            let p = sample_point_at_s(s, &mut rng);
            for alpha in 1..=3 {
                let v = m.circle_field(alpha, &p);
                let eta = m.kahler_form_at(&p);
                // ι_v η as a 1-form: (ι_v η)_b = v^a η_{ab}
                let f = eta.as_matrix();
                let mut contr = [0.0; 4];
                for b in 0..4 {
                    for a_ in 0..4 {
                        contr[b] += v[a_] * f[a_][b];
                    }
                }
                // central differences of ν_α
                let h = 1e-5 * (1.0 + s.sqrt());
                let mut max_rel = 0.0f64;
                for dir in 0..4 {
                    let mut e = [0.0; 4];
                    e[dir] = 1.0;
                    let fp = m.moment_map(alpha, &p.add_scaled(&e, h));
                    let fm = m.moment_map(alpha, &p.add_scaled(&e, -h));
                    let d = (fp - fm) / (2.0 * h);
                    let scale = contr.iter().map(|c| c.abs()).fold(1e-9, f64::max);
                    max_rel = max_rel.max((d - contr[dir]).abs() / scale);
                }
                assert!(max_rel < 1e-6, "dν != ι_v η (α={alpha}, s={s}): {max_rel}");
            }
        }
    }

    #[test]
    fn outer_decay_of_moment_map_difference() {
        let m = EhModel::with_default_grid(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // s^{(2+k)/2} |∇^k (ν - ν_0)| bounded on the outer half, k = 0, 1
        let mut sup0 = 0.0f64;
        let mut sup1 = 0.0f64;
        for _ in 0..200 {
            let s = rng.gen_range(1.0f64..9.0e3);
            let p = sample_point_at_s(s, &mut rng);
            let (mu0, _, _) = moment_map_flat(p.z(), p.w());
            let diff = m.moment_map(1, &p) - mu0;
            sup0 = sup0.max(s * diff.abs());
            let h = 1e-4 * s.sqrt();
            let mut grad2 = 0.0;
            for dir in 0..4 {
                let mut e = [0.0; 4];
                e[dir] = 1.0;
                let dp = m.moment_map(1, &p.add_scaled(&e, h))
                    - moment_map_flat(p.add_scaled(&e, h).z(), p.add_scaled(&e, h).w()).0;
                let dm = m.moment_map(1, &p.add_scaled(&e, -h))
                    - moment_map_flat(p.add_scaled(&e, -h).z(), p.add_scaled(&e, -h).w()).0;
                grad2 += ((dp - dm) / (2.0 * h)).powi(2);
            }
            sup1 = sup1.max(s.powf(1.5) * grad2.sqrt());
        }
        assert!(sup0 < 1.0, "k=0 ladder unbounded: {sup0}");
        assert!(sup1 < 3.0, "k=1 ladder unbounded: {sup1}");
    }

    #[test]
    fn asd_generator_solves_primitivity_ode_and_decays() {
        let m = EhModel::with_default_grid(1.0).unwrap();
        let g = AsdGenerator::new(&m, 1.0).unwrap();
        // s sqrt(s^2+1) ψ' = 2 for all grid s, and 2v + s v' = 0 for v = ψ'φ'
        for &s in m.grid().s().iter().step_by(50) {
            let lhs = s * (s * s + 1.0).sqrt() * g.dpsi(s);
            assert!((lhs - 2.0).abs() < 1e-12);
            let v = g.dpsi(s) * m.dphi(s);
            let h = 1e-5 * s;
            let vp = g.dpsi(s + h) * m.dphi(s + h);
            let vm = g.dpsi(s - h) * m.dphi(s - h);
            let dv = (vp - vm) / (2.0 * h);
            assert!((2.0 * v + s * dv).abs() < 1e-6 * v.abs().max(1e-12), "ODE at s={s}");
        }
        // decay ladder for ψ
        for &s in &[1e2, 1e3, 1e4] {
            assert!((s * g.psi(s)).abs() < 2.5 * g.c().abs() + 0.1);
        }
    }

    #[test]
    fn asd_pointwise_residuals() {
        let m = EhModel::with_default_grid(1.0).unwrap();
        let g = AsdGenerator::calibrated(&m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let s = rng.gen_range(0.02f64..100.0);
            let p = sample_point_at_s(s, &mut rng);
            let metric = m.metric_at(&p);
            let asd_psi = asd_check(&metric, &g.form_at(&p), 1e-12).unwrap();
            assert!(asd_psi < 1e-8, "i∂∂̄ψ not ASD at s={s}: {asd_psi}");
            for alpha in 1..=3 {
                let asd_mu = asd_check(&metric, &m.moment_form_at(alpha, &p), 1e-12).unwrap();
                assert!(asd_mu < 1e-8, "i∂∂̄ν_{alpha} not ASD at s={s}: {asd_mu}");
            }
        }
        // flat sanity directions
        let flatg = Metric4::flat();
        assert!(asd_check(&flatg, &TwoForm::asd_basis(1), 1e-12).unwrap() < 1e-14);
        assert!((asd_check(&flatg, &TwoForm::omega0(), 1e-12).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pairing_quadrature_matches_analytic_and_calibration() {
        let m = EhModel::with_default_grid(1.0).unwrap();
        let g = AsdGenerator::calibrated(&m).unwrap();
        let (s0, s1) = (m.grid().s_min(), m.grid().s_max());
        let numeric = g.pairing_numeric(s0, s1, 4096);
        let analytic = g.pairing_analytic(s0, s1);
        assert!(
            ((numeric - analytic) / analytic).abs() < 1e-8,
            "quadrature {numeric} vs analytic {analytic}"
        );
        // truncation error to the full line is tiny; total equals -1/2
        assert!((g.pairing_total() + 0.5).abs() < 1e-14);
        assert!((numeric + 0.5).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_scales_and_orders() {
        assert!(matches!(
            EhModel::with_default_grid(-1.0),
            Err(AleError::NegativeScale(_))
        ));
        assert!(matches!(
            EhModel::new(1.0, 3, EhModel::default_grid(1.0)),
            Err(AleError::UnsupportedOrder(3))
        ));
        let flat = EhModel::with_default_grid(0.0).unwrap();
        assert!(matches!(AsdGenerator::new(&flat, 1.0), Err(AleError::FlatModel)));
    }
}
