//! The diole `𝒜 = A ⊕ P` and its graded derivations of degree −1, 0, 1.
//!
//! A degree-0 derivation is `X` on `A` and `X·I + G` on `P`; degree 1 is a
//! `P`-valued vector field on `A`; degree −1 is a linear form `P → A`, which
//! only exists for rank 1.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::One;

use crate::diffop::{MatrixOp, ScalarOp, VectorField};
use crate::error::{check_vars, Error, Result};
use crate::linalg;
use crate::poly::{monomials_up_to, Poly, PolyMat, PolyVec, Rational};

/// `(a, p)` with `a ∈ A` in degree 0 and `p ∈ P` in degree 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiolicElement {
    pub a: Poly,
    pub p: PolyVec,
}

impl DiolicElement {
    pub fn new(a: Poly, p: PolyVec) -> Result<Self> {
        check_vars(a.n(), p.n())?;
        Ok(DiolicElement { a, p })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        DiolicElement {
            a: Poly::zero(n),
            p: PolyVec::zero(n, m),
        }
    }

    pub fn even(a: Poly, m: usize) -> Self {
        let n = a.n();
        DiolicElement {
            a,
            p: PolyVec::zero(n, m),
        }
    }

    pub fn odd(p: PolyVec) -> Self {
        DiolicElement {
            a: Poly::zero(p.n()),
            p,
        }
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn m(&self) -> usize {
        self.p.m()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.p.is_zero()
    }

    /// `(a,p)(b,q) = (ab, aq + bp)`; `P·P = 0`.
    pub fn mul(&self, other: &DiolicElement) -> DiolicElement {
        DiolicElement {
            a: &self.a * &other.a,
            p: &other.p.scale(&self.a) + &self.p.scale(&other.a),
        }
    }
}

impl fmt::Display for DiolicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.a, self.p)
    }
}

impl<'a> Add<&'a DiolicElement> for &'a DiolicElement {
    type Output = DiolicElement;
    fn add(self, rhs: &DiolicElement) -> DiolicElement {
        DiolicElement {
            a: &self.a + &rhs.a,
            p: &self.p + &rhs.p,
        }
    }
}

impl<'a> Sub<&'a DiolicElement> for &'a DiolicElement {
    type Output = DiolicElement;
    fn sub(self, rhs: &DiolicElement) -> DiolicElement {
        DiolicElement {
            a: &self.a - &rhs.a,
            p: &self.p - &rhs.p,
        }
    }
}

impl Neg for &DiolicElement {
    type Output = DiolicElement;
    fn neg(self) -> DiolicElement {
        DiolicElement {
            a: -&self.a,
            p: -&self.p,
        }
    }
}

/// Degree-0 derivation `𝕏 + G`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Der0 {
    x: VectorField,
    g: PolyMat,
}

impl Der0 {
    pub fn new(x: VectorField, g: PolyMat) -> Result<Self> {
        check_vars(x.n(), g.n())?;
        if g.rows() != g.cols() {
            return Err(Error::Dimension("endomorphism part must be square".into()));
        }
        Ok(Der0 { x, g })
    }

    /// The diagonal lift `(X, 0)`.
    pub fn split(x: VectorField, m: usize) -> Self {
        let n = x.n();
        Der0 {
            x,
            g: PolyMat::zero_square(n, m),
        }
    }

    /// A vertical derivation `(0, G)`.
    pub fn vertical(g: PolyMat) -> Self {
        Der0 {
            x: VectorField::zero(g.n()),
            g,
        }
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    pub fn m(&self) -> usize {
        self.g.rows()
    }

    pub fn x(&self) -> &VectorField {
        &self.x
    }

    pub fn g(&self) -> &PolyMat {
        &self.g
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.g.is_zero()
    }

    pub fn apply_even(&self, a: &Poly) -> Poly {
        self.x.apply(a)
    }

    pub fn apply_odd(&self, p: &PolyVec) -> PolyVec {
        &p.map(|c| self.x.apply(c)) + &self.g.apply(p)
    }

    pub fn apply(&self, e: &DiolicElement) -> DiolicElement {
        DiolicElement {
            a: self.apply_even(&e.a),
            p: self.apply_odd(&e.p),
        }
    }

    pub fn checked_apply(&self, e: &DiolicElement) -> Result<DiolicElement> {
        self.check_element(e)?;
        Ok(self.apply(e))
    }

    fn check_element(&self, e: &DiolicElement) -> Result<()> {
        check_vars(self.n(), e.n())?;
        if e.m() != self.m() {
            return Err(Error::Dimension(format!("rank {} element for rank {} derivation", e.m(), self.m())));
        }
        Ok(())
    }

    /// The operator `X·I + G` on `P`.
    pub fn odd_operator(&self) -> MatrixOp {
        &MatrixOp::diagonal(&self.x.to_op(), self.m()) + &MatrixOp::from_poly_mat(&self.g)
    }
}

impl fmt::Display for Der0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.g)
    }
}

/// Degree-1 derivation `a ↦ Σ Z^α(a) e_α`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Der1 {
    n: usize,
    z: Vec<VectorField>,
}

impl Der1 {
    pub fn new(n: usize, z: Vec<VectorField>) -> Result<Self> {
        for v in &z {
            check_vars(n, v.n())?;
        }
        Ok(Der1 { n, z })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        Der1 {
            n,
            z: vec![VectorField::zero(n); m],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.z.len()
    }

    pub fn components(&self) -> &[VectorField] {
        &self.z
    }

    pub fn is_zero(&self) -> bool {
        self.z.iter().all(VectorField::is_zero)
    }

    pub fn apply(&self, a: &Poly) -> PolyVec {
        PolyVec::new(self.n, self.z.iter().map(|v| v.apply(a)).collect()).expect("same n")
    }

    pub fn checked_apply(&self, a: &Poly) -> Result<PolyVec> {
        check_vars(self.n, a.n())?;
        Ok(self.apply(a))
    }
}

impl fmt::Display for Der1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.z.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Degree −1 derivation `p ↦ φ·p`, for rank-one `P` only.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DerNeg1 {
    phi: Poly,
}

impl DerNeg1 {
    pub fn new(phi: Vec<Poly>) -> Result<Self> {
        if phi.len() != 1 {
            return Err(Error::RankNotOne(phi.len()));
        }
        Ok(DerNeg1 {
            phi: phi.into_iter().next().unwrap(),
        })
    }

    pub fn phi(&self) -> &Poly {
        &self.phi
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }

    pub fn apply(&self, p: &PolyVec) -> Poly {
        &self.phi * p.get(0)
    }
}

/// Linear-algebra witness of the rank-one obstruction for degree −1
/// derivations: the relations `Δ(e_α)e_β = e_α Δ(e_β)` in the unknowns
/// `φ_α = Δ(e_α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub m: usize,
    pub relations: usize,
    pub rank: usize,
    /// Dimension of the admissible `φ`; zero means only `Δ = 0` survives.
    pub nullity: usize,
}

pub fn der_neg1_obstruction(m: usize) -> ObstructionWitness {
    let mut rows = Vec::new();
    for alpha in 0..m {
        for beta in 0..m {
            if alpha == beta {
                continue;
            }
            // component β of φ_α e_β − φ_β e_α is φ_α
            let mut row = linalg::SparseRow::new();
            row.insert(alpha, Rational::one());
            rows.push(row);
            let mut row = linalg::SparseRow::new();
            row.insert(beta, -Rational::one());
            rows.push(row);
        }
    }
    let relations = rows.len();
    let rank = linalg::rank(rows);
    ObstructionWitness {
        m,
        relations,
        rank,
        nullity: m - rank,
    }
}

/// A homogeneous derivation of `𝒜`; `Trivial` records a degree with no
/// nonzero derivations (outside −1..=1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Der {
    Neg1(DerNeg1),
    Zero(Der0),
    One(Der1),
    Trivial { degree: i32, n: usize, m: usize },
}

impl Der {
    pub fn degree(&self) -> i32 {
        match self {
            Der::Neg1(_) => -1,
            Der::Zero(_) => 0,
            Der::One(_) => 1,
            Der::Trivial { degree, .. } => *degree,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Der::Neg1(d) => d.n(),
            Der::Zero(d) => d.n(),
            Der::One(d) => d.n(),
            Der::Trivial { n, .. } => *n,
        }
    }

    pub fn m(&self) -> usize {
        match self {
            Der::Neg1(_) => 1,
            Der::Zero(d) => d.m(),
            Der::One(d) => d.m(),
            Der::Trivial { m, .. } => *m,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Der::Neg1(d) => d.phi.is_zero(),
            Der::Zero(d) => d.is_zero(),
            Der::One(d) => d.is_zero(),
            Der::Trivial { .. } => true,
        }
    }

    /// Action on `𝒜` as a linear map, each piece shifted by the degree.
    pub fn apply(&self, e: &DiolicElement) -> DiolicElement {
        let (n, m) = (e.n(), e.m());
        match self {
            Der::Zero(d) => d.apply(e),
            Der::One(d) => DiolicElement::odd(d.apply(&e.a)),
            Der::Neg1(d) => DiolicElement::even(d.apply(&e.p), m),
            Der::Trivial { .. } => DiolicElement::zero(n, m),
        }
    }

    fn dims(&self) -> (usize, usize) {
        (self.n(), self.m())
    }
}

fn sign(exp: i32) -> bool {
    exp.rem_euclid(2) == 1
}

/// The graded commutator `[D, D'] = D∘D' − (−1)^{gh} D'∘D`, in closed form.
///
/// In debug builds each result is compared with compose-and-subtract on
/// the monomial probes.
pub fn graded_commutator_der(d1: &Der, d2: &Der) -> Result<Der> {
    let (n, m) = d1.dims();
    check_vars(n, d2.n())?;
    if d2.m() != m {
        return Err(Error::Dimension(format!("ranks {} and {}", m, d2.m())));
    }
    let out = match (d1, d2) {
        (Der::Zero(a), Der::Zero(b)) => {
            let x = a.x.bracket(&b.x);
            let g = &(&(&b.g.map(|h| a.x.apply(h)) - &a.g.map(|g| b.x.apply(g))) + &(&a.g * &b.g)) - &(&b.g * &a.g);
            Der::Zero(Der0 { x, g })
        }
        (Der::Zero(a), Der::One(z)) => Der::One(zero_one(a, z)),
        (Der::One(z), Der::Zero(a)) => {
            let r = zero_one(a, z);
            Der::One(Der1 {
                n,
                z: r.z.iter().map(|v| -v).collect(),
            })
        }
        (Der::Zero(a), Der::Neg1(v)) => Der::Neg1(zero_neg1(a, v)),
        (Der::Neg1(v), Der::Zero(a)) => Der::Neg1(DerNeg1 {
            phi: -zero_neg1(a, v).phi,
        }),
        (Der::Neg1(v), Der::One(z)) | (Der::One(z), Der::Neg1(v)) => {
            // ν∘Z + Z∘ν: φ·z on A, and p ↦ z(φp) on P
            let zf = &z.z[0];
            Der::Zero(Der0 {
                x: zf.scale(&v.phi),
                g: PolyMat::scalar(1, &zf.apply(&v.phi)),
            })
        }
        _ => Der::Trivial {
            degree: d1.degree() + d2.degree(),
            n,
            m,
        },
    };
    debug_assert!(
        commutator_matches_composition(d1, d2, &out),
        "closed-form commutator disagrees with composition"
    );
    Ok(out)
}

fn zero_one(a: &Der0, z: &Der1) -> Der1 {
    let n = a.n();
    let comps = (0..z.m())
        .map(|alpha| {
            let mut v = a.x.bracket(&z.z[alpha]);
            for beta in 0..z.m() {
                let g = a.g.get(alpha, beta);
                if !g.is_zero() {
                    v = &v + &z.z[beta].scale(g);
                }
            }
            v
        })
        .collect();
    Der1 { n, z: comps }
}

fn zero_neg1(a: &Der0, v: &DerNeg1) -> DerNeg1 {
    DerNeg1 {
        phi: &a.x.apply(&v.phi) - &(&v.phi * a.g.get(0, 0)),
    }
}

/// Probe elements `(x^μ, 0)` and `(0, x^μ e_β)` with `|μ| ≤ 2`.
pub fn derivation_probes(n: usize, m: usize) -> Vec<DiolicElement> {
    let monos = monomials_up_to(n, 2);
    let mut out = Vec::new();
    for mu in &monos {
        let x = Poly::monomial(mu.clone(), Rational::one());
        out.push(DiolicElement::even(x.clone(), m));
        for beta in 0..m {
            out.push(DiolicElement::odd(PolyVec::basis(n, m, beta).scale(&x)));
        }
    }
    out
}

/// Compose-and-subtract oracle for [`graded_commutator_der`].
pub fn commutator_matches_composition(d1: &Der, d2: &Der, result: &Der) -> bool {
    let (n, m) = d1.dims();
    let odd = sign(d1.degree() * d2.degree());
    derivation_probes(n, m).iter().all(|e| {
        let first = d1.apply(&d2.apply(e));
        let second = d2.apply(&d1.apply(e));
        let expected = if odd { &first + &second } else { &first - &second };
        result.apply(e) == expected
    })
}

/// The projection `𝕏 + G ↦ X` of the Atiyah sequence.
pub fn symbol_sigma(d: &Der0) -> VectorField {
    d.x.clone()
}

/// `(p·D)(a) = X(a)·p`.
pub fn p_action(p: &PolyVec, d: &Der0) -> Result<Der1> {
    check_vars(p.n(), d.n())?;
    if p.m() != d.m() {
        return Err(Error::Dimension(format!("rank {} section for rank {} derivation", p.m(), d.m())));
    }
    Ok(Der1 {
        n: d.n(),
        z: p.comps().iter().map(|c| d.x.scale(c)).collect(),
    })
}

/// Functorial constructions on modules sharing one scalar symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    DirectSum,
    Tensor,
    /// `Hom(P, P')`, coordinates of `F` row-major (`β·m + α` for `F_{βα}`).
    Hom,
    Exterior(usize),
    Symmetric(usize),
}

/// Induced degree-0 derivation on a functor of `P` (and `P'`).
pub fn artificial_der(kind: Construction, d: &Der0, d2: &Der0) -> Result<Der0> {
    if d.n() != d2.n() || d.x != d2.x {
        return Err(Error::SymbolMismatch);
    }
    let n = d.n();
    let (g, h) = (&d.g, &d2.g);
    let (m, m2) = (d.m(), d2.m());
    let induced = match kind {
        Construction::DirectSum => PolyMat::from_fn(n, m + m2, m + m2, |i, j| match (i < m, j < m) {
            (true, true) => g.get(i, j).clone(),
            (false, false) => h.get(i - m, j - m).clone(),
            _ => Poly::zero(n),
        }),
        Construction::Tensor => &g.kron(&PolyMat::identity(n, m2)) + &PolyMat::identity(n, m).kron(h),
        Construction::Hom => &h.kron(&PolyMat::identity(n, m)) - &PolyMat::identity(n, m2).kron(&g.transpose()),
        Construction::Exterior(k) => {
            check_power(k, m)?;
            exterior_power(g, k)
        }
        Construction::Symmetric(k) => {
            check_power(k, m)?;
            symmetric_power(g, k)
        }
    };
    Ok(Der0 {
        x: d.x.clone(),
        g: induced,
    })
}

fn check_power(k: usize, m: usize) -> Result<()> {
    if k == 0 || k > m {
        return Err(Error::IndexOutOfRange { index: k, bound: m + 1 });
    }
    Ok(())
}

/// Increasing `k`-subsets of `0..m` in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    go(0, m, k, &mut cur, &mut out);
    out
}

/// Nondecreasing `k`-tuples of `0..m` (multisets) in lexicographic order.
pub fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    crate::diffop::slot_tuples(m, k)
}

/// Sorts `v` in place and returns the permutation sign as `true` for odd.
pub(crate) fn sort_with_parity(v: &mut [usize]) -> bool {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    odd
}

fn exterior_power(g: &PolyMat, k: usize) -> PolyMat {
    let n = g.n();
    let basis = subsets(g.rows(), k);
    let index = |s: &[usize]| basis.iter().position(|b| b == s).unwrap();
    let mut out = PolyMat::zero(n, basis.len(), basis.len());
    for (col, set) in basis.iter().enumerate() {
        for pos in 0..k {
            for gamma in 0..g.rows() {
                let entry = g.get(gamma, set[pos]);
                if entry.is_zero() || set.iter().enumerate().any(|(q, &s)| q != pos && s == gamma) {
                    continue;
                }
                let mut image = set.clone();
                image[pos] = gamma;
                let odd = sort_with_parity(&mut image);
                let row = index(&image);
                let cur = out.get(row, col).clone();
                out.set(row, col, if odd { &cur - entry } else { &cur + entry });
            }
        }
    }
    out
}

fn symmetric_power(g: &PolyMat, k: usize) -> PolyMat {
    let n = g.n();
    let basis = multisets(g.rows(), k);
    let index = |s: &[usize]| basis.iter().position(|b| b == s).unwrap();
    let mut out = PolyMat::zero(n, basis.len(), basis.len());
    for (col, set) in basis.iter().enumerate() {
        for pos in 0..k {
            for gamma in 0..g.rows() {
                let entry = g.get(gamma, set[pos]);
                if entry.is_zero() {
                    continue;
                }
                let mut image = set.clone();
                image[pos] = gamma;
                image.sort_unstable();
                let row = index(&image);
                let cur = out.get(row, col).clone();
                out.set(row, col, &cur + entry);
            }
        }
    }
    out
}

/// Free `Q₀ ⊕ Q₁` with an `A`-bilinear `φ: P × Q₀ → Q₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedDiolicModule {
    n: usize,
    rank0: usize,
    rank1: usize,
    /// `phi[α]` is the `rank1 × rank0` matrix of `q ↦ φ(e_α, q)`.
    phi: Vec<PolyMat>,
}

impl TruncatedDiolicModule {
    pub fn new(n: usize, rank0: usize, rank1: usize, phi: Vec<PolyMat>) -> Result<Self> {
        for t in &phi {
            check_vars(n, t.n())?;
            if t.rows() != rank1 || t.cols() != rank0 {
                return Err(Error::Dimension(format!(
                    "structure slice is {}×{}, expected {}×{}",
                    t.rows(),
                    t.cols(),
                    rank1,
                    rank0
                )));
            }
        }
        Ok(TruncatedDiolicModule { n, rank0, rank1, phi })
    }

    /// `𝒜` itself: `Q₀ = A`, `Q₁ = P`, `φ(p, a) = a·p`.
    pub fn regular(n: usize, m: usize) -> Self {
        let phi = (0..m)
            .map(|alpha| {
                let mut t = PolyMat::zero(n, m, 1);
                t.set(alpha, 0, Poly::one(n));
                t
            })
            .collect();
        TruncatedDiolicModule {
            n,
            rank0: 1,
            rank1: m,
            phi,
        }
    }

    /// `(Λ¹(A), Λ¹(P), ∧)`: `Q₀ = Aⁿ` on `dx_i`, `Q₁ = A^{nm}` on
    /// `dx_i ⊗ e_α` at index `i·m + α`.
    pub fn one_forms(n: usize, m: usize) -> Self {
        let phi = (0..m)
            .map(|alpha| {
                let mut t = PolyMat::zero(n, n * m, n);
                for i in 0..n {
                    t.set(i * m + alpha, i, Poly::one(n));
                }
                t
            })
            .collect();
        TruncatedDiolicModule {
            n,
            rank0: n,
            rank1: n * m,
            phi,
        }
    }

    pub fn m(&self) -> usize {
        self.phi.len()
    }

    pub fn rank0(&self) -> usize {
        self.rank0
    }

    pub fn rank1(&self) -> usize {
        self.rank1
    }

    pub fn structure(&self, p: &PolyVec, q: &PolyVec) -> PolyVec {
        let mut acc = PolyVec::zero(self.n, self.rank1);
        for (alpha, t) in self.phi.iter().enumerate() {
            let c = p.get(alpha);
            if !c.is_zero() {
                acc = &acc + &t.apply(q).scale(c);
            }
        }
        acc
    }
}

/// Checks `X^P(a·p) = φ(p, X^A(a)) + a·X^P(p)` on monomials `a` of degree ≤ 2
/// and basis sections `p`. `xa` is `rank0 × 1`, `xp` is `rank1 × m`.
pub fn check_phi_der(module: &TruncatedDiolicModule, xa: &MatrixOp, xp: &MatrixOp) -> Result<bool> {
    let (n, m) = (module.n, module.m());
    check_vars(n, xa.n())?;
    check_vars(n, xp.n())?;
    if xa.rows() != module.rank0 || xa.cols() != 1 {
        return Err(Error::Dimension(format!("X^A must be {}×1", module.rank0)));
    }
    if xp.rows() != module.rank1 || xp.cols() != m {
        return Err(Error::Dimension(format!("X^P must be {}×{}", module.rank1, m)));
    }
    let one = PolyVec::new(n, vec![Poly::one(n)])?;
    if !xa.apply(&one).is_zero() {
        return Err(Error::Invalid("X^A must annihilate constants".into()));
    }
    for mu in monomials_up_to(n, 2) {
        let a = Poly::monomial(mu, Rational::one());
        let da = xa.apply(&PolyVec::new(n, vec![a.clone()])?);
        for beta in 0..m {
            let p = PolyVec::basis(n, m, beta);
            let lhs = xp.apply(&p.scale(&a));
            let rhs = &module.structure(&p, &da) + &xp.apply(&p).scale(&a);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `X` as the `1 × 1` operator matrix used by [`check_phi_der`].
pub fn scalar_column(op: &ScalarOp) -> MatrixOp {
    MatrixOp::diagonal(op, 1)
}
