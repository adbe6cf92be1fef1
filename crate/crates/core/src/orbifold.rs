//! Enumeration of the singular set of `T^4_Λ / Γ` for a rank-4 lattice
//! `Λ ⊂ C^2` and a finite subgroup `Γ ⊂ SU(2)` with `Γ Λ ⊂ Λ`, together
//! with stabilizers, the invariant anti-self-dual dimension `d_Γ`, irrep
//! counts and the `d_Γ + Σ_p N_{Γ_p} = 19` bookkeeping.
//!
//! All arithmetic is exact: lattice and group entries live in a cyclotomic
//! field, fixed points are counted through the Smith normal form of the
//! integer matrix of `γ - 1` in the lattice basis, and `d_Γ` is the exact
//! rank of the group-averaged projector on the constant anti-self-dual
//! 2-forms.

use crate::exact::{
    smith_normal_form, unify, Cyclotomic, ExactError, Matrix, Rational,
    DEFAULT_CONDUCTOR_BOUND,
};
use num::{BigInt, One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrbifoldError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("generator {0} is not unitary")]
    NotUnitary(usize),
    #[error("generator {0} does not have determinant 1")]
    NotSpecial(usize),
    #[error("lattice basis does not have real rank 4")]
    LatticeNotRank4,
    #[error("group closure did not terminate: got {count} elements at word length {word_length} (bound {bound})")]
    NonFiniteClosure { count: usize, word_length: usize, bound: usize },
    #[error("group action does not preserve the lattice (generator {generator})")]
    Incompatible { generator: usize },
    #[error("group must be nontrivial")]
    TrivialGroup,
    #[error("non-isolated fixed locus: element {element} fixes a positive-dimensional set")]
    NonIsolatedFixedLocus { element: usize },
}

/// Exact 2x2 matrix over a cyclotomic field.
#[derive(Clone, PartialEq)]
pub struct Mat2 {
    pub e: [[Cyclotomic; 2]; 2],
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 {
            e: [
                [Cyclotomic::one(), Cyclotomic::zero()],
                [Cyclotomic::zero(), Cyclotomic::one()],
            ],
        }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let mut e = [
            [Cyclotomic::zero(), Cyclotomic::zero()],
            [Cyclotomic::zero(), Cyclotomic::zero()],
        ];
        for i in 0..2 {
            for j in 0..2 {
                e[i][j] = self.e[i][0]
                    .mul(&o.e[0][j])
                    .add(&self.e[i][1].mul(&o.e[1][j]));
            }
        }
        Mat2 { e }
    }

    pub fn det(&self) -> Cyclotomic {
        self.e[0][0]
            .mul(&self.e[1][1])
            .sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn conj_transpose(&self) -> Mat2 {
        Mat2 {
            e: [
                [self.e[0][0].conj(), self.e[1][0].conj()],
                [self.e[0][1].conj(), self.e[1][1].conj()],
            ],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    /// Multiplicative order (panics if it exceeds `bound`).
    pub fn order(&self, bound: usize) -> usize {
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_identity() {
                return k;
            }
            p = p.mul(self);
        }
        panic!("element order exceeds bound {bound}");
    }

    /// Numeric embedding as a real 4x4 matrix acting on `(x1, x2, x3, x4)`.
    pub fn embed_real(&self) -> [[f64; 4]; 4] {
        let c = |i: usize, j: usize| self.e[i][j].embed();
        crate::hodge::real_matrix_of_complex(&[[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]
        )
    }
}

/// Isomorphism type of a finite subgroup of SU(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StabilizerType {
    /// Cyclic of the given order (>= 2).
    Cyclic(usize),
    /// Binary dihedral of order `4k`, parameterized by `k >= 1`.
    BinaryDihedral(usize),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl StabilizerType {
    pub fn order(&self) -> usize {
        match self {
            StabilizerType::Cyclic(m) => *m,
            StabilizerType::BinaryDihedral(k) => 4 * k,
            StabilizerType::BinaryTetrahedral => 24,
            StabilizerType::BinaryOctahedral => 48,
            StabilizerType::BinaryIcosahedral => 120,
        }
    }

    /// Number of nontrivial irreducible representations (= nodes of the
    /// associated diagram).
    pub fn n_irreps(&self) -> usize {
        match self {
            StabilizerType::Cyclic(m) => m - 1,
            StabilizerType::BinaryDihedral(k) => k + 2,
            StabilizerType::BinaryTetrahedral => 6,
            StabilizerType::BinaryOctahedral => 7,
            StabilizerType::BinaryIcosahedral => 8,
        }
    }
}

impl fmt::Display for StabilizerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilizerType::Cyclic(m) => write!(f, "cyclic({m})"),
            StabilizerType::BinaryDihedral(k) => write!(f, "binary-dihedral({})", 4 * k),
            StabilizerType::BinaryTetrahedral => write!(f, "binary-tetrahedral"),
            StabilizerType::BinaryOctahedral => write!(f, "binary-octahedral"),
            StabilizerType::BinaryIcosahedral => write!(f, "binary-icosahedral"),
        }
    }
}

/// Classify a finite subgroup of SU(2) given as an element list.
pub fn classify_subgroup(elements: &[Mat2]) -> StabilizerType {
    let n = elements.len();
    let abelian = elements
        .iter()
        .enumerate()
        .all(|(i, a)| elements[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)));
    if abelian {
        // finite abelian subgroups of SU(2) are cyclic
        return StabilizerType::Cyclic(n);
    }
    let max_order = elements.iter().map(|g| g.order(2 * n)).max().unwrap_or(1);
    if max_order == n / 2 && n % 4 == 0 {
        return StabilizerType::BinaryDihedral(n / 4);
    }
    match n {
        24 => StabilizerType::BinaryTetrahedral,
        48 => StabilizerType::BinaryOctahedral,
        120 => StabilizerType::BinaryIcosahedral,
        _ => panic!("unrecognized SU(2) subgroup of order {n}"),
    }
}

/// A singular orbit of the torus quotient: the lexicographically smallest
/// representative (in exact lattice coordinates), its ambient coordinates,
/// and the literal stabilizer of that representative.
#[derive(Clone, Debug)]
pub struct SingularPoint {
    /// Representative in lattice coordinates, each in `[0, 1)`.
    pub lattice_coords: [Rational; 4],
    /// The same point in `C^2` coordinates.
    pub ambient: [Cyclotomic; 2],
    /// Elements of the stabilizer (indices into the group element list).
    pub stabilizer: Vec<usize>,
    /// Isomorphism-type label of the stabilizer.
    pub stab_type: StabilizerType,
    /// Size of the full orbit of this point under the group.
    pub orbit_size: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct OrbifoldOptions {
    pub conductor_bound: u32,
    pub order_bound: usize,
}

impl Default for OrbifoldOptions {
    fn default() -> Self {
        OrbifoldOptions { conductor_bound: DEFAULT_CONDUCTOR_BOUND, order_bound: 120 }
    }
}

/// A rank-4 lattice in `C^2` together with a finite subgroup of SU(2),
/// validated and closed under multiplication at construction.
#[derive(Clone)]
pub struct LatticeGroupPair {
    /// Four basis vectors `(z, w)`.
    basis: [[Cyclotomic; 2]; 4],
    generators: Vec<Mat2>,
    elements: Vec<Mat2>,
    /// 4x4 system matrix expressing ambient vectors in the basis: rows are
    /// the `(z, w, conj z, conj w)` components of the basis vectors.
    system: Matrix<Cyclotomic>,
    opts: OrbifoldOptions,
}

impl LatticeGroupPair {
    pub fn new(
        basis: [[Cyclotomic; 2]; 4],
        generators: Vec<Mat2>,
        opts: OrbifoldOptions,
    ) -> Result<Self, OrbifoldError> {
        // unify every scalar into one conductor within the bound
        let mut all: Vec<Cyclotomic> = Vec::new();
        for b in &basis {
            all.extend_from_slice(b);
        }
        for g in &generators {
            for row in &g.e {
                all.extend_from_slice(row);
            }
        }
        let mut common = Cyclotomic::one();
        for x in &all {
            let (c, _) = unify(&common, x, opts.conductor_bound)?;
            common = c;
        }

        // SU(2) membership, checked exactly
        for (k, g) in generators.iter().enumerate() {
            let gtg = g.conj_transpose().mul(g);
            if !gtg.is_identity() {
                return Err(OrbifoldError::NotUnitary(k));
            }
            if g.det() != Cyclotomic::one() {
                return Err(OrbifoldError::NotSpecial(k));
            }
        }

        // real rank 4: the (z, w, conj z, conj w) system must be invertible
        let system = Matrix::from_fn(4, 4, |i, k| match i {
            0 => basis[k][0].clone(),
            1 => basis[k][1].clone(),
            2 => basis[k][0].conj(),
            _ => basis[k][1].conj(),
        });
        if system.rank() != 4 {
            return Err(OrbifoldError::LatticeNotRank4);
        }

        // group closure
        let mut elements = vec![Mat2::identity()];
        let mut frontier = vec![Mat2::identity()];
        let mut word_length = 0;
        while !frontier.is_empty() {
            word_length += 1;
            let mut next: Vec<Mat2> = Vec::new();
            for f in &frontier {
                for g in &generators {
                    let h = f.mul(g);
                    if !elements.contains(&h) && !next.contains(&h) {
                        next.push(h);
                    }
                }
            }
            elements.extend(next.iter().cloned());
            if elements.len() > opts.order_bound {
                return Err(OrbifoldError::NonFiniteClosure {
                    count: elements.len(),
                    word_length,
                    bound: opts.order_bound,
                });
            }
            frontier = next;
        }

        Ok(LatticeGroupPair { basis, generators, elements, system, opts })
    }

    pub fn basis(&self) -> &[[Cyclotomic; 2]; 4] {
        &self.basis
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn options(&self) -> &OrbifoldOptions {
        &self.opts
    }

    /// Lattice coordinates of `g . b_j` for each basis vector, as exact
    /// field elements (4 coordinates per vector).
    fn action_coords(&self, g: &Mat2) -> Result<[[Cyclotomic; 4]; 4], ExactError> {
        let mut out: [[Cyclotomic; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| Cyclotomic::zero()));
        for (j, b) in self.basis.iter().enumerate() {
            let gz = g.e[0][0].mul(&b[0]).add(&g.e[0][1].mul(&b[1]));
            let gw = g.e[1][0].mul(&b[0]).add(&g.e[1][1].mul(&b[1]));
            let rhs = [gz.clone(), gw.clone(), gz.conj(), gw.conj()];
            let sol = self.system.solve(&rhs)?;
            for (k, v) in sol.into_iter().enumerate() {
                out[j][k] = v;
            }
        }
        Ok(out)
    }

    /// True iff every generator maps every lattice basis vector to an
    /// integer combination of basis vectors.
    pub fn check_compatibility(&self) -> Result<bool, OrbifoldError> {
        for g in &self.generators {
            let coords = self.action_coords(g)?;
            for row in &coords {
                for c in row {
                    match c.as_rational() {
                        Some(r) if r.is_integer() => {}
                        _ => return Ok(false),
                    }
                }
            }
        }
        Ok(true)
    }

    /// Integer matrices of all group elements in the lattice basis
    /// (columns are the images of the basis vectors).
    pub fn integer_reps(&self) -> Result<Vec<Vec<Vec<BigInt>>>, OrbifoldError> {
        let mut reps = Vec::with_capacity(self.elements.len());
        for (gi, g) in self.elements.iter().enumerate() {
            let coords = self.action_coords(g)?;
            let mut m = vec![vec![BigInt::zero(); 4]; 4];
            for (j, row) in coords.iter().enumerate() {
                for (k, c) in row.iter().enumerate() {
                    let r = c.as_rational().filter(|r| r.is_integer()).ok_or(
                        OrbifoldError::Incompatible {
                            generator: gi.min(self.generators.len().saturating_sub(1)),
                        },
                    )?;
                    // column j holds the image of basis vector j
                    m[k][j] = r.to_integer();
                }
            }
            reps.push(m);
        }
        Ok(reps)
    }

    /// Solve `(M - 1) x ∈ Z^4` through the Smith normal form; returns all
    /// solutions in `[0,1)^4` if the fixed set is finite.
    fn fixed_points_of(
        rep: &[Vec<BigInt>],
        element: usize,
    ) -> Result<Vec<[Rational; 4]>, OrbifoldError> {
        let mut n = rep.to_vec();
        for (i, row) in n.iter_mut().enumerate() {
            row[i] -= BigInt::one();
        }
        let snf = smith_normal_form(&n);
        if snf.d.iter().any(|x| x.is_zero()) {
            return Err(OrbifoldError::NonIsolatedFixedLocus { element });
        }
        // x = V eta with eta_i = k_i / d_i
        let mut sols = Vec::new();
        let dims: Vec<i64> = snf
            .d
            .iter()
            .map(|x| {
                use num::ToPrimitive;
                x.to_i64().expect("small elementary divisor")
            })
            .collect();
        let mut idx = [0i64; 4];
        loop {
            let eta: Vec<Rational> =
                (0..4).map(|i| Rational::new(idx[i].into(), dims[i].into())).collect();
            let mut x: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
            for (r, xi) in x.iter_mut().enumerate() {
                for (c, e) in eta.iter().enumerate() {
                    *xi += Rational::from_integer(snf.v[r][c].clone()) * e;
                }
                *xi = mod1(xi);
            }
            sols.push(x);
            // odometer over the elementary divisor boxes
            let mut carry = 0;
            loop {
                idx[carry] += 1;
                if idx[carry] < dims[carry] {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
                if carry == 4 {
                    return Ok(sols);
                }
            }
        }
    }

    /// Apply the integer rep of a group element to a torus point.
    fn act(rep: &[Vec<BigInt>], x: &[Rational; 4]) -> [Rational; 4] {
        std::array::from_fn(|r| {
            let mut acc = Rational::zero();
            for (c, xc) in x.iter().enumerate() {
                acc += Rational::from_integer(rep[r][c].clone()) * xc;
            }
            mod1(&acc)
        })
    }

    /// Enumerate the singular set: one entry per orbit of points with a
    /// nontrivial stabilizer, sorted lexicographically by representative.
    pub fn enumerate_singular_points(&self) -> Result<Vec<SingularPoint>, OrbifoldError> {
        if self.order() <= 1 {
            return Err(OrbifoldError::TrivialGroup);
        }
        if !self.check_compatibility()? {
            return Err(OrbifoldError::Incompatible { generator: 0 });
        }
        let reps = self.integer_reps()?;
        let id_index = self
            .elements
            .iter()
            .position(|e| e.is_identity())
            .expect("closure contains identity");

        let mut points: Vec<[Rational; 4]> = Vec::new();
        for (gi, rep) in reps.iter().enumerate() {
            if gi == id_index {
                continue;
            }
            for p in Self::fixed_points_of(rep, gi)? {
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }

        // group into orbits
        let mut seen = vec![false; points.len()];
        let mut out = Vec::new();
        for i in 0..points.len() {
            if seen[i] {
                continue;
            }
            let mut orbit: Vec<[Rational; 4]> = Vec::new();
            for rep in &reps {
                let img = Self::act(rep, &points[i]);
                if !orbit.contains(&img) {
                    orbit.push(img);
                }
            }
            for (j, p) in points.iter().enumerate() {
                if orbit.contains(p) {
                    seen[j] = true;
                }
            }
            let rep_pt = orbit
                .iter()
                .min_by(|a, b| lex_cmp(a, b))
                .expect("nonempty orbit")
                .clone();
            let stabilizer: Vec<usize> = reps
                .iter()
                .enumerate()
                .filter(|(_, rep)| Self::act(rep, &rep_pt) == rep_pt)
                .map(|(gi, _)| gi)
                .collect();
            debug_assert!(stabilizer.len() > 1, "singular point with trivial stabilizer");
            debug_assert_eq!(stabilizer.len() * orbit.len(), self.order());
            let stab_mats: Vec<Mat2> =
                stabilizer.iter().map(|&gi| self.elements[gi].clone()).collect();
            let stab_type = classify_subgroup(&stab_mats);
            let ambient = self.ambient_of(&rep_pt);
            out.push(SingularPoint {
                lattice_coords: rep_pt,
                ambient,
                stabilizer,
                stab_type,
                orbit_size: orbit.len(),
            });
        }
        out.sort_by(|a, b| lex_cmp(&a.lattice_coords, &b.lattice_coords));
        Ok(out)
    }

    /// Ambient `C^2` coordinates of a lattice-coordinate point.
    pub fn ambient_of(&self, x: &[Rational; 4]) -> [Cyclotomic; 2] {
        let mut z = Cyclotomic::zero();
        let mut w = Cyclotomic::zero();
        for (k, b) in self.basis.iter().enumerate() {
            z = z.add(&b[0].scale(&x[k]));
            w = w.add(&b[1].scale(&x[k]));
        }
        [z, w]
    }

    /// Whether `point` lies in the orbit of `rep` (both in lattice coords).
    pub fn same_orbit(
        &self,
        rep: &[Rational; 4],
        point: &[Rational; 4],
    ) -> Result<bool, OrbifoldError> {
        let reps = self.integer_reps()?;
        Ok(reps.iter().any(|m| &Self::act(m, point) == rep))
    }

    /// Exact 3x3 matrix of the pullback action of `g` on the constant
    /// anti-self-dual 2-forms.
    pub fn asd_rep_matrix(g: &Mat2) -> Matrix<Cyclotomic> {
        let i_unit = Cyclotomic::root_of_unity(4, 1);
        let half = Cyclotomic::from_rational(crate::exact::ratio(1, 2));
        // basis forms as (h1, h2, p): i h1 dz dzbar + i h2 dw dwbar
        //                             + p dz dwbar - conj(p) dw dzbar
        let basis = [
            (half.clone(), half.neg(), Cyclotomic::zero()),
            (Cyclotomic::zero(), Cyclotomic::zero(), half.clone()),
            (Cyclotomic::zero(), Cyclotomic::zero(), i_unit.mul(&half)),
        ];
        let a = &g.e[0][0];
        let b = &g.e[0][1];
        let c = &g.e[1][0];
        let d = &g.e[1][1];
        let two_im = |u: &Cyclotomic| -> Cyclotomic {
            // 2 Im(u) = -i (u - conj u)
            i_unit.mul(&u.sub(&u.conj())).neg()
        };
        let mut cols: Vec<[Cyclotomic; 3]> = Vec::new();
        for (h1, h2, p) in &basis {
            let aa = a.mul(&a.conj());
            let cc = c.mul(&c.conj());
            let bb = b.mul(&b.conj());
            let dd = d.mul(&d.conj());
            let h1p = h1
                .mul(&aa)
                .add(&h2.mul(&cc))
                .add(&two_im(&p.mul(a).mul(&c.conj())));
            let h2p = h1
                .mul(&bb)
                .add(&h2.mul(&dd))
                .add(&two_im(&p.mul(b).mul(&d.conj())));
            let pp = i_unit
                .mul(&h1.mul(a).mul(&b.conj()).add(&h2.mul(c).mul(&d.conj())))
                .add(&p.mul(a).mul(&d.conj()))
                .sub(&p.conj().mul(c).mul(&b.conj()));
            // decompose back: c1 = h1' - h2', c2 = p' + conj p',
            // c3 = -i (p' - conj p'); the self-dual component h1' + h2'
            // vanishes because the action preserves the splitting
            debug_assert!(h1p.add(&h2p).is_zero());
            let c1 = h1p.sub(&h2p);
            let c2 = pp.add(&pp.conj());
            let c3 = i_unit.mul(&pp.sub(&pp.conj())).neg();
            cols.push([c1, c2, c3]);
        }
        Matrix::from_fn(3, 3, |r, cidx| cols[cidx][r].clone())
    }

    /// `d_Γ`: the exact rank of the averaged projector
    /// `(1/|Γ|) Σ_γ ρ(γ)` on the constant anti-self-dual 2-forms.
    pub fn invariant_asd_dimension(&self) -> usize {
        let n = self.order();
        let mut acc = Matrix::<Cyclotomic>::zeros(3, 3);
        for g in &self.elements {
            acc = acc.add_mat(&Self::asd_rep_matrix(g));
        }
        let inv_n = Cyclotomic::from_rational(crate::exact::ratio(1, n as i64));
        let p = acc.scale(&inv_n);
        // averaging over the group gives a projector
        debug_assert_eq!(p.matmul(&p), p);
        p.rank()
    }
}

impl fmt::Debug for LatticeGroupPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeGroupPair(order {})", self.order())
    }
}

fn mod1(r: &Rational) -> Rational {
    let f = r.floor();
    r - f
}

fn lex_cmp(a: &[Rational; 4], b: &[Rational; 4]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Number of nontrivial irreducible representations of the subgroup:
/// conjugacy classes minus one, enumerated by exact matrix conjugation.
pub fn count_nontrivial_irreps(elements: &[Mat2]) -> usize {
    if elements.is_empty() {
        return 0;
    }
    let mut assigned = vec![false; elements.len()];
    let mut classes = 0;
    for i in 0..elements.len() {
        if assigned[i] {
            continue;
        }
        classes += 1;
        for g in elements {
            // g x g^{-1}: for unitary matrices g^{-1} is the conjugate
            // transpose
            let conj = g.mul(&elements[i]).mul(&g.conj_transpose());
            if let Some(j) = elements.iter().position(|e| *e == conj) {
                assigned[j] = true;
            }
        }
    }
    classes - 1
}

/// The K3 bookkeeping: `d_Γ`, the singular points with their irrep
/// counts, and the total `d_Γ + Σ_p N_{Γ_p}`.
#[derive(Clone, Debug)]
pub struct K3Count {
    pub d_gamma: usize,
    pub points: Vec<SingularPoint>,
    pub total: usize,
}

pub fn k3_count(pair: &LatticeGroupPair) -> Result<K3Count, OrbifoldError> {
    let d_gamma = pair.invariant_asd_dimension();
    let points = pair.enumerate_singular_points()?;
    let total = d_gamma + points.iter().map(|p| p.stab_type.n_irreps()).sum::<usize>();
    Ok(K3Count { d_gamma, points, total })
}

/// Stock configurations: any-lattice `Z_2`, the square-lattice `Z_4`, and
/// the square-lattice binary dihedral group of order 8.
pub mod examples {
    use super::*;

    pub fn gaussian_basis() -> [[Cyclotomic; 2]; 4] {
        let one = Cyclotomic::one;
        let i = || Cyclotomic::root_of_unity(4, 1);
        let zero = Cyclotomic::zero;
        [[one(), zero()], [i(), zero()], [zero(), one()], [zero(), i()]]
    }

    pub fn minus_one() -> Mat2 {
        let m1 = Cyclotomic::from_int(-1);
        Mat2 { e: [[m1.clone(), Cyclotomic::zero()], [Cyclotomic::zero(), m1]] }
    }

    pub fn diag_i() -> Mat2 {
        Mat2 {
            e: [
                [Cyclotomic::root_of_unity(4, 1), Cyclotomic::zero()],
                [Cyclotomic::zero(), Cyclotomic::root_of_unity(4, 3)],
            ],
        }
    }

    pub fn off_diagonal_j() -> Mat2 {
        Mat2 {
            e: [
                [Cyclotomic::zero(), Cyclotomic::from_int(-1)],
                [Cyclotomic::one(), Cyclotomic::zero()],
            ],
        }
    }

    pub fn z2_pair() -> LatticeGroupPair {
        LatticeGroupPair::new(gaussian_basis(), vec![minus_one()], OrbifoldOptions::default())
            .expect("valid pair")
    }

    pub fn z4_pair() -> LatticeGroupPair {
        LatticeGroupPair::new(gaussian_basis(), vec![diag_i()], OrbifoldOptions::default())
            .expect("valid pair")
    }

    pub fn binary_dihedral_pair() -> LatticeGroupPair {
        LatticeGroupPair::new(
            gaussian_basis(),
            vec![diag_i(), off_diagonal_j()],
            OrbifoldOptions::default(),
        )
        .expect("valid pair")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::exact::ratio;

    fn coords(parts: [(i64, i64); 4]) -> [Rational; 4] {
        std::array::from_fn(|i| ratio(parts[i].0, parts[i].1))
    }

    #[test]
    fn z2_sixteen_points_all_a1() {
        let pair = z2_pair();
        assert!(pair.check_compatibility().unwrap());
        let pts = pair.enumerate_singular_points().unwrap();
        assert_eq!(pts.len(), 16);
        assert!(pts.iter().all(|p| p.stab_type == StabilizerType::Cyclic(2)));
        assert_eq!(pair.invariant_asd_dimension(), 3);
        assert_eq!(k3_count(&pair).unwrap().total, 19);
    }

    #[test]
    fn z4_point_list_matches() {
        let pair = z4_pair();
        assert!(pair.check_compatibility().unwrap());
        let pts = pair.enumerate_singular_points().unwrap();
        let z4: Vec<_> =
            pts.iter().filter(|p| p.stab_type == StabilizerType::Cyclic(4)).collect();
        let z2: Vec<_> =
            pts.iter().filter(|p| p.stab_type == StabilizerType::Cyclic(2)).collect();
        assert_eq!((z4.len(), z2.len()), (4, 6));
        assert_eq!(pair.invariant_asd_dimension(), 1);
        assert_eq!(k3_count(&pair).unwrap().total, 1 + 4 * 3 + 6);

        // the four order-4 points are exactly the listed ones:
        // [0,0], [(1+i)/2, 0], [0, (1+i)/2], [(1+i)/2, (1+i)/2]
        let want = [
            coords([(0, 1), (0, 1), (0, 1), (0, 1)]),
            coords([(1, 2), (1, 2), (0, 1), (0, 1)]),
            coords([(0, 1), (0, 1), (1, 2), (1, 2)]),
            coords([(1, 2), (1, 2), (1, 2), (1, 2)]),
        ];
        for w in &want {
            assert!(
                z4.iter().any(|p| &p.lattice_coords == w),
                "missing order-4 point {w:?}"
            );
        }
        // the listed order-2 points each land in exactly one orbit
        let z2_listed = [
            coords([(1, 2), (0, 1), (0, 1), (0, 1)]),
            coords([(1, 2), (0, 1), (1, 2), (1, 2)]),
            coords([(0, 1), (0, 1), (1, 2), (0, 1)]),
            coords([(1, 2), (1, 2), (1, 2), (0, 1)]),
            coords([(1, 2), (0, 1), (1, 2), (0, 1)]),
            coords([(1, 2), (0, 1), (0, 1), (1, 2)]),
        ];
        for w in &z2_listed {
            let hits: Vec<_> = z2
                .iter()
                .filter(|p| pair.same_orbit(&p.lattice_coords, w).unwrap())
                .collect();
            assert_eq!(hits.len(), 1, "point {w:?} should land in exactly one orbit");
        }
    }

    #[test]
    fn binary_dihedral_types_and_count() {
        let pair = binary_dihedral_pair();
        assert_eq!(pair.order(), 8);
        let pts = pair.enumerate_singular_points().unwrap();
        let by_type = |t: StabilizerType| pts.iter().filter(|p| p.stab_type == t).count();
        assert_eq!(by_type(StabilizerType::BinaryDihedral(2)), 2);
        assert_eq!(by_type(StabilizerType::Cyclic(4)), 3);
        assert_eq!(by_type(StabilizerType::Cyclic(2)), 2);
        assert_eq!(pts.len(), 7);
        assert_eq!(pair.invariant_asd_dimension(), 0);
        assert_eq!(k3_count(&pair).unwrap().total, 4 * 2 + 3 * 3 + 2);
        assert_eq!(count_nontrivial_irreps(pair.elements()), 4);
    }

    #[test]
    fn irrep_counts_for_cyclic_groups() {
        for k in [2usize, 3, 4, 6] {
            let gen = Mat2 {
                e: [
                    [Cyclotomic::root_of_unity(k as u32, 1), Cyclotomic::zero()],
                    [Cyclotomic::zero(), Cyclotomic::root_of_unity(k as u32, k as i64 - 1)],
                ],
            };
            let mut elements = vec![Mat2::identity()];
            let mut p = gen.clone();
            while !p.is_identity() {
                elements.push(p.clone());
                p = p.mul(&gen);
            }
            assert_eq!(elements.len(), k);
            assert_eq!(count_nontrivial_irreps(&elements), k - 1);
            assert_eq!(classify_subgroup(&elements), StabilizerType::Cyclic(k));
        }
        assert_eq!(count_nontrivial_irreps(&[Mat2::identity()]), 0);
    }

    #[test]
    fn incompatible_lattice_detected() {
        // stretch the imaginary basis directions to zeta8 multiples: the
        // Z_4 action no longer preserves the lattice
        let z8 = || Cyclotomic::root_of_unity(8, 1);
        let basis = [
            [Cyclotomic::one(), Cyclotomic::zero()],
            [z8(), Cyclotomic::zero()],
            [Cyclotomic::zero(), Cyclotomic::one()],
            [Cyclotomic::zero(), z8()],
        ];
        let pair =
            LatticeGroupPair::new(basis, vec![diag_i()], OrbifoldOptions::default()).unwrap();
        assert!(!pair.check_compatibility().unwrap());
        assert!(matches!(
            pair.enumerate_singular_points(),
            Err(OrbifoldError::Incompatible { .. })
        ));
    }

    #[test]
    fn trivial_group_is_rejected() {
        let pair =
            LatticeGroupPair::new(gaussian_basis(), vec![], OrbifoldOptions::default()).unwrap();
        assert!(matches!(
            pair.enumerate_singular_points(),
            Err(OrbifoldError::TrivialGroup)
        ));
    }

    #[test]
    fn fixed_point_counts_match_brute_force() {
        for pair in [z2_pair(), z4_pair(), binary_dihedral_pair()] {
            let reps = pair.integer_reps().unwrap();
            let id = pair.elements().iter().position(|e| e.is_identity()).unwrap();
            for (gi, rep) in reps.iter().enumerate() {
                if gi == id {
                    continue;
                }
                let mut n = rep.clone();
                for (i, row) in n.iter_mut().enumerate() {
                    row[i] -= BigInt::one();
                }
                let snf = smith_normal_form(&n);
                let det: BigInt = snf.abs_det();
                let pts = LatticeGroupPair::fixed_points_of(rep, gi).unwrap();
                assert_eq!(BigInt::from(pts.len()), det);
                // brute force over the q-denominator fundamental-domain grid
                use num::ToPrimitive;
                let q = snf.d.iter().map(|d| d.to_i64().unwrap()).max().unwrap();
                let mut brute = 0;
                for a in 0..q {
                    for b in 0..q {
                        for c in 0..q {
                            for d in 0..q {
                                let x = [ratio(a, q), ratio(b, q), ratio(c, q), ratio(d, q)];
                                let ok = (0..4).all(|r| {
                                    let mut acc = Rational::zero();
                                    for (cc, xc) in x.iter().enumerate() {
                                        acc += Rational::from_integer(n[r][cc].clone()) * xc;
                                    }
                                    acc.is_integer()
                                });
                                if ok {
                                    brute += 1;
                                }
                            }
                        }
                    }
                }
                assert_eq!(brute, pts.len(), "brute force disagrees for element {gi}");
            }
        }
    }

    #[test]
    fn stabilizers_are_subgroups_and_d_gamma_is_constrained() {
        for pair in [z2_pair(), z4_pair(), binary_dihedral_pair()] {
            let pts = pair.enumerate_singular_points().unwrap();
            for p in &pts {
                let mats: Vec<Mat2> =
                    p.stabilizer.iter().map(|&i| pair.elements()[i].clone()).collect();
                // closed under product and inverse
                for a in &mats {
                    assert!(mats.contains(&a.conj_transpose()));
                    for b in &mats {
                        assert!(mats.contains(&a.mul(b)));
                    }
                }
                assert!(mats.len() > 1);
                assert_eq!(p.stab_type.order(), mats.len());
            }
            let d = pair.invariant_asd_dimension();
            assert!(d == 0 || d == 1 || d == 3);
            // d = 3 iff the group is {±1}
            assert_eq!(d == 3, pair.order() == 2);
        }
    }

    #[test]
    fn non_finite_closure_is_reported() {
        let gen = Mat2 {
            e: [
                [Cyclotomic::root_of_unity(24, 1), Cyclotomic::zero()],
                [Cyclotomic::zero(), Cyclotomic::root_of_unity(24, 23)],
            ],
        };
        let r = LatticeGroupPair::new(
            gaussian_basis(),
            vec![gen],
            OrbifoldOptions { conductor_bound: 24, order_bound: 10 },
        );
        assert!(matches!(r, Err(OrbifoldError::NonFiniteClosure { .. })));
    }

    #[test]
    fn float_and_exact_asd_representations_agree() {
        use crate::hodge::TwoForm;
        for pair in [z4_pair(), binary_dihedral_pair()] {
            for g in pair.elements() {
                let exact = LatticeGroupPair::asd_rep_matrix(g);
                let real = g.embed_real();
                for (col, alpha) in (1..=3).enumerate() {
                    let img = TwoForm::asd_basis(alpha).pullback(&real);
                    // express the image in the ASD basis numerically
                    let comp = [
                        0.5 * (img.0[0] - img.0[5]),
                        0.5 * (img.0[1] + img.0[4]),
                        0.5 * (img.0[2] - img.0[3]),
                    ];
                    for (row, c) in comp.iter().enumerate() {
                        let (re, im) = exact[(row, col)].embed();
                        assert!(im.abs() < 1e-12);
                        assert!((re - c).abs() < 1e-12, "entry ({row},{col})");
                    }
                }
                // the exact representation matrix is orthogonal
                let gt = exact.transpose().matmul(&exact);
                assert_eq!(gt, Matrix::identity(3));
            }
        }
    }
}
