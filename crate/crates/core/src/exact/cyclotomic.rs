//! Elements of cyclotomic fields `Q(zeta_n)` with exact rational
//! coefficients, reduced modulo the n-th cyclotomic polynomial.

use super::{ExactError, Rational};
use num::{BigInt, One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Default bound on conductors produced by promotion. Covers the cyclic
/// groups of order 2, 3, 4, 6, 8, 12, 24 and the binary dihedral entries,
/// which all live in small cyclotomic fields.
pub const DEFAULT_CONDUCTOR_BOUND: u32 = 24;

pub fn euler_phi(n: u32) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Monic integer coefficients of the n-th cyclotomic polynomial,
/// `x^n - 1 = prod_{d | n} Phi_d(x)`, computed by exact division and cached.
fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                num = poly_div_exact(&num, &cyclotomic_poly(d));
            }
        }
        num
    };
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials (remainder known to vanish).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    debug_assert!(lead.is_one());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            let idx = i - dd + j;
            rem[idx] = &rem[idx] - &c * d;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// An element of `Q(zeta_n)` in the power basis `1, zeta, ..., zeta^(phi(n)-1)`.
///
/// Values are immutable after construction and safe to share across threads.
/// Binary operations promote both sides to the lcm conductor; input-side
/// conductor bounds are enforced at parse/validation time via [`unify`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::one()] }
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// `zeta_n^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![Rational::zero(); k + 1];
        raw[k] = Rational::one();
        Self::from_poly(n, raw)
    }

    /// Build from an arbitrary-degree polynomial in `zeta_n`, reducing
    /// modulo the cyclotomic polynomial.
    pub fn from_poly(conductor: u32, mut raw: Vec<Rational>) -> Self {
        let phi = euler_phi(conductor);
        let modulus = cyclotomic_poly(conductor);
        let dd = modulus.len() - 1;
        debug_assert_eq!(dd, phi);
        // reduce: for powers >= phi subtract coeff * x^(i-dd) * Phi_n
        let mut i = raw.len();
        while i > dd {
            i -= 1;
            let c = raw[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, m) in modulus.iter().enumerate() {
                let idx = i - dd + j;
                let t = &c * Rational::from_integer(m.clone());
                raw[idx] -= t;
            }
        }
        raw.truncate(dd.max(1));
        raw.resize(phi.max(1), Rational::zero());
        Cyclotomic { conductor, coeffs: raw }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in `Q(zeta_m)` for `n | m` (zeta_n = zeta_m^(m/n)).
    pub fn promote(&self, m: u32) -> Result<Self, ExactError> {
        if m == self.conductor {
            return Ok(self.clone());
        }
        if m % self.conductor != 0 {
            return Err(ExactError::ConductorMismatch(self.conductor, m));
        }
        let step = (m / self.conductor) as usize;
        let mut raw = vec![Rational::zero(); self.coeffs.len() * step];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[k * step] = c.clone();
            }
        }
        Ok(Self::from_poly(m, raw))
    }

    /// Drop to the smallest power-of-the-same-roots representation we track:
    /// if all non-constant coefficients vanish, conductor 1.
    fn normalized(self) -> Self {
        if self.conductor != 1 && self.is_rational() {
            Cyclotomic { conductor: 1, coeffs: vec![self.coeffs[0].clone()] }
        } else {
            self
        }
    }

    fn binop(&self, other: &Self, f: impl Fn(&Self, &Self) -> Self) -> Self {
        if self.conductor == other.conductor {
            return f(self, other).normalized();
        }
        let m = lcm(self.conductor, other.conductor);
        let a = self.promote(m).expect("lcm promotion");
        let b = other.promote(m).expect("lcm promotion");
        f(&a, &b).normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binop(other, |a, b| {
            let coeffs = a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x + y)
                .collect();
            Cyclotomic { conductor: a.conductor, coeffs }
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binop(other, |a, b| {
            let mut raw = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len()];
            for (i, x) in a.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.coeffs.iter().enumerate() {
                    if !y.is_zero() {
                        raw[i + j] += x * y;
                    }
                }
            }
            Self::from_poly(a.conductor, raw)
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// `Q[x]` against the cyclotomic polynomial.
    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(Rational::one() / r));
        }
        let modulus: Vec<Rational> = cyclotomic_poly(self.conductor)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let (g, _, t) = poly_ext_gcd(&modulus, &self.coeffs);
        // g is a nonzero constant (the cyclotomic polynomial is irreducible)
        debug_assert!(poly_degree(&g) == Some(0));
        let ginv = Rational::one() / g[0].clone();
        let coeffs = t.iter().map(|c| c * &ginv).collect();
        Ok(Self::from_poly(self.conductor, coeffs).normalized())
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Complex conjugation, `zeta -> zeta^(n-1)`.
    pub fn conj(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor as usize;
        let mut raw = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(n - k) % n] += c;
            }
        }
        Self::from_poly(self.conductor, raw).normalized()
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Numeric embedding `zeta_n -> exp(2 pi i / n)`, as `(re, im)`.
    pub fn embed(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = rational_to_f64(c);
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / n;
            re += v * theta.cos();
            im += v * theta.sin();
        }
        (re, im)
    }

    /// Parse expressions like `1/2`, `-zeta8^3`, `1 + 1/2*zeta4`, `2*zeta3^2 - 1`.
    pub fn parse(input: &str) -> Result<Self, ExactError> {
        parse_cyclotomic(input)
    }
}

/// Promote `a` and `b` to their lcm conductor, rejecting conductors beyond
/// `bound`. This is the checked entry point used when ingesting input.
pub fn unify(
    a: &Cyclotomic,
    b: &Cyclotomic,
    bound: u32,
) -> Result<(Cyclotomic, Cyclotomic), ExactError> {
    let m = lcm(a.conductor(), b.conductor());
    if m > bound {
        return Err(ExactError::ConductorOverflow(m, bound));
    }
    Ok((a.promote(m)?, b.promote(m)?))
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn poly_degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = poly_degree(b).expect("nonzero divisor");
    let mut r = a.to_vec();
    while let Some(dr) = poly_degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / &b[db];
        for j in 0..=db {
            let idx = dr - db + j;
            let t = &f * &b[j];
            r[idx] -= t;
        }
    }
    r
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
fn poly_ext_gcd(
    a: &[Rational],
    b: &[Rational],
) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let zero = || vec![Rational::zero()];
    let one = || vec![Rational::one()];
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (one(), zero());
    let (mut t0, mut t1) = (zero(), one());
    while poly_degree(&r1).is_some() {
        let q = poly_quot(&r0, &r1);
        let r2 = poly_rem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    (r0, s0, t0)
}

fn poly_quot(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = poly_degree(b).expect("nonzero divisor");
    let mut r = a.to_vec();
    let da = match poly_degree(&r) {
        Some(d) if d >= db => d,
        _ => return vec![Rational::zero()],
    };
    let mut q = vec![Rational::zero(); da - db + 1];
    while let Some(dr) = poly_degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / &b[db];
        q[dr - db] = f.clone();
        for j in 0..=db {
            let idx = dr - db + j;
            let t = &f * &b[j];
            r[idx] -= t;
        }
    }
    q
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    out.resize(a.len().max(b.len()), Rational::zero());
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // exact for the small numbers appearing here; falls back to string
    // conversion for large ones
    let nf = bigint_to_f64(num);
    let df = bigint_to_f64(den);
    nf / df
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    use num::ToPrimitive;
    b.to_f64().unwrap_or(f64::NAN)
}

fn parse_cyclotomic(input: &str) -> Result<Cyclotomic, ExactError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(ExactError::Parse(input.to_string()));
    }
    let bad = || ExactError::Parse(input.to_string());
    // split into signed terms
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i64;
    let mut first = true;
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !first && !cur.is_empty() {
            terms.push((sign, std::mem::take(&mut cur)));
            sign = if ch == '-' { -1 } else { 1 };
        } else if (ch == '+' || ch == '-') && cur.is_empty() {
            sign *= if ch == '-' { -1 } else { 1 };
        } else {
            cur.push(ch);
        }
        first = false;
    }
    if cur.is_empty() {
        return Err(bad());
    }
    terms.push((sign, cur));

    let mut acc = Cyclotomic::zero();
    for (sign, term) in terms {
        let mut rat = Rational::one();
        let mut zeta: Option<(u32, i64)> = None;
        for factor in term.split('*') {
            if let Some(rest) = factor.strip_prefix("zeta") {
                let (n_str, k) = match rest.split_once('^') {
                    Some((n, k)) => (n, k.parse::<i64>().map_err(|_| bad())?),
                    None => (rest, 1),
                };
                let n: u32 = n_str.parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                if zeta.is_some() {
                    return Err(bad());
                }
                zeta = Some((n, k));
            } else {
                let r = match factor.split_once('/') {
                    Some((p, q)) => {
                        let p: i64 = p.parse().map_err(|_| bad())?;
                        let q: i64 = q.parse().map_err(|_| bad())?;
                        if q == 0 {
                            return Err(bad());
                        }
                        Rational::new(p.into(), q.into())
                    }
                    None => {
                        let p: i64 = factor.parse().map_err(|_| bad())?;
                        Rational::from_integer(p.into())
                    }
                };
                rat *= r;
            }
        }
        if sign < 0 {
            rat = -rat;
        }
        let t = match zeta {
            Some((n, k)) => Cyclotomic::root_of_unity(n, k).scale(&rat),
            None => Cyclotomic::from_rational(rat),
        };
        acc = acc.add(&t);
    }
    Ok(acc)
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "zeta{}", self.conductor)?;
                } else {
                    write!(f, "zeta{}^{}", self.conductor, k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zeta(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let i = zeta(4, 1);
        assert_eq!(i.mul(&i), Cyclotomic::from_int(-1));
    }

    #[test]
    fn zeta8_times_seventh_power_is_one() {
        let a = zeta(8, 1);
        let b = zeta(8, 7);
        assert_eq!(a.mul(&b), Cyclotomic::one());
    }

    #[test]
    fn conjugation_is_involutive_and_fixes_reals() {
        let x = zeta(12, 5).add(&Cyclotomic::from_rational(super::super::ratio(2, 3)));
        assert_eq!(x.conj().conj(), x);
        assert!(Cyclotomic::from_int(7).is_real());
        // zeta + conj(zeta) is real
        let r = zeta(8, 1).add(&zeta(8, 1).conj());
        assert!(r.is_real());
    }

    #[test]
    fn cross_conductor_product() {
        // zeta4 * zeta6 = zeta12^(3+2)=zeta12^5
        let p = zeta(4, 1).mul(&zeta(6, 1));
        assert_eq!(p, zeta(12, 5));
    }

    #[test]
    fn unify_respects_bound() {
        let a = zeta(8, 1);
        let b = zeta(12, 1);
        assert!(unify(&a, &b, 24).is_ok());
        assert!(matches!(
            unify(&a, &b, 12),
            Err(ExactError::ConductorOverflow(24, 12))
        ));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["1/2", "-zeta8^3", "1 + 1/2*zeta4", "2*zeta3^2 - 1", "-1"] {
            let v = Cyclotomic::parse(s).unwrap();
            let again = Cyclotomic::parse(&v.to_string()).unwrap();
            assert_eq!(v, again, "{s}");
        }
    }

    fn arb_cyclotomic(n: u32) -> impl Strategy<Value = Cyclotomic> {
        let phi = euler_phi(n);
        proptest::collection::vec((-6i64..=6, 1i64..=4), phi).prop_map(move |cs| {
            let coeffs = cs
                .into_iter()
                .map(|(p, q)| Rational::new(p.into(), q.into()))
                .collect();
            Cyclotomic::from_poly(n, coeffs)
        })
    }

    proptest! {
        #[test]
        fn embedding_is_multiplicative(a in arb_cyclotomic(12), b in arb_cyclotomic(12)) {
            let (ar, ai) = a.embed();
            let (br, bi) = b.embed();
            let (pr, pi) = a.mul(&b).embed();
            let er = ar * br - ai * bi;
            let ei = ar * bi + ai * br;
            prop_assert!((pr - er).abs() < 1e-12 * (1.0 + er.abs()));
            prop_assert!((pi - ei).abs() < 1e-12 * (1.0 + ei.abs()));
        }

        #[test]
        fn field_axioms(a in arb_cyclotomic(8), b in arb_cyclotomic(8), c in arb_cyclotomic(8)) {
            // associativity and distributivity
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            // inverses round-trip to one
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inv().unwrap()), Cyclotomic::one());
            }
        }
    }
}
