//! Linear differential operators `Σ a_σ ∂^σ` on `A` and matrices of them on `P`.
//!
//! Operators are kept in normal form (coefficients left of the derivatives),
//! so equality is map equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{check_vars, Error, Result};
use crate::poly::{monomials_up_to, MultiIndex, Poly, PolyMat, PolyVec, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScalarOp {
    n: usize,
    coeffs: BTreeMap<MultiIndex, Poly>,
}

impl ScalarOp {
    pub fn zero(n: usize) -> Self {
        ScalarOp {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::mult(Poly::one(n))
    }

    /// Multiplication by `a`, an operator of order 0.
    pub fn mult(a: Poly) -> Self {
        Self::term(MultiIndex::zero(a.n()), a)
    }

    /// `a ∂^σ`.
    pub fn term(sigma: MultiIndex, a: Poly) -> Self {
        assert_eq!(sigma.len(), a.n(), "multi-index length differs from variable count");
        let mut op = ScalarOp::zero(a.n());
        op.add_term(sigma, a);
        op
    }

    pub fn derivative(sigma: MultiIndex) -> Self {
        let n = sigma.len();
        Self::term(sigma, Poly::one(n))
    }

    /// `∂_{i+1}`.
    pub fn partial(n: usize, i: usize) -> Self {
        Self::derivative(MultiIndex::unit(n, i))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Poly)>) -> Result<Self> {
        let mut op = ScalarOp::zero(n);
        for (sigma, a) in terms {
            check_vars(n, sigma.len())?;
            check_vars(n, a.n())?;
            op.add_term(sigma, a);
        }
        Ok(op)
    }

    pub(crate) fn add_term(&mut self, sigma: MultiIndex, a: Poly) {
        if a.is_zero() {
            return;
        }
        match self.coeffs.entry(sigma) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(a);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &a;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Poly)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, sigma: &MultiIndex) -> Poly {
        self.coeffs.get(sigma).cloned().unwrap_or_else(|| Poly::zero(self.n))
    }

    /// Highest `|σ|` with a nonzero coefficient; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(MultiIndex::degree).max()
    }

    /// Whether the order is at most `k` (anything is at most `k` when zero).
    pub fn order_at_most(&self, k: i64) -> bool {
        self.order().map_or(true, |o| i64::from(o) <= k)
    }

    /// The terms with `|σ| = k`.
    pub fn homogeneous_part(&self, k: u32) -> ScalarOp {
        ScalarOp {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(s, _)| s.degree() == k)
                .map(|(s, a)| (s.clone(), a.clone()))
                .collect(),
        }
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        assert_eq!(self.n, p.n(), "variable count mismatch");
        let mut out = Poly::zero(self.n);
        for (sigma, a) in &self.coeffs {
            let dp = p.diff(sigma);
            if !dp.is_zero() {
                out += &(a * &dp);
            }
        }
        out
    }

    pub fn checked_apply(&self, p: &Poly) -> Result<Poly> {
        check_vars(self.n, p.n())?;
        Ok(self.apply(p))
    }

    /// `self ∘ other` via Leibniz: `∂^σ ∘ b = Σ_{ρ≤σ} C(σ,ρ) ∂^ρ(b) ∂^{σ−ρ}`.
    pub fn compose(&self, other: &ScalarOp) -> ScalarOp {
        assert_eq!(self.n, other.n, "variable count mismatch");
        let mut out = ScalarOp::zero(self.n);
        for (sigma, a) in &self.coeffs {
            let divisors = sigma.divisors();
            for (tau, b) in &other.coeffs {
                for rho in &divisors {
                    let db = b.diff(rho);
                    if db.is_zero() {
                        continue;
                    }
                    let c = Rational::from_integer(sigma.binomial(rho));
                    let rest = sigma.checked_sub(rho).expect("divisor");
                    out.add_term(rest.add(tau), (a * &db).scale(&c));
                }
            }
        }
        out
    }

    pub fn checked_compose(&self, other: &ScalarOp) -> Result<ScalarOp> {
        check_vars(self.n, other.n)?;
        Ok(self.compose(other))
    }

    pub fn commutator(&self, other: &ScalarOp) -> ScalarOp {
        &self.compose(other) - &other.compose(self)
    }

    /// `a ∘ self`.
    pub fn left_mul(&self, a: &Poly) -> ScalarOp {
        let mut out = ScalarOp::zero(self.n);
        for (s, c) in &self.coeffs {
            out.add_term(s.clone(), a * c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> ScalarOp {
        ScalarOp {
            n: self.n,
            coeffs: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.coeffs.iter().map(|(s, a)| (s.clone(), a.scale(c))).collect()
            },
        }
    }

    /// `δ_a(Δ) = a∘Δ − Δ∘a`.
    pub fn delta(&self, a: &Poly) -> ScalarOp {
        &self.left_mul(a) - &self.compose(&ScalarOp::mult(a.clone()))
    }

    /// Same operator viewed in more variables is not supported; this is the
    /// first-order part as a vector field when the operator has no other terms.
    pub fn as_vector_field(&self) -> Option<VectorField> {
        let mut comps = vec![Poly::zero(self.n); self.n];
        for (s, a) in &self.coeffs {
            if s.degree() != 1 {
                return None;
            }
            let i = s.entries().iter().position(|&e| e == 1).unwrap();
            comps[i] = a.clone();
        }
        Some(VectorField { n: self.n, comps })
    }
}

fn fmt_operator_term(f: &mut fmt::Formatter<'_>, sigma: &MultiIndex, a: &Poly, first: bool) -> fmt::Result {
    let mut coeff = a.clone();
    let single = a.num_terms() == 1;
    let lead_neg = single && a.terms().next().is_some_and(|(_, c)| c < &Rational::zero());
    if !first {
        f.write_str(if lead_neg { " - " } else { " + " })?;
        if lead_neg {
            coeff = -coeff;
        }
    }
    let is_plain = sigma.degree() == 0;
    let one = coeff == Poly::one(a.n());
    let minus_one = coeff == -Poly::one(a.n());
    if is_plain {
        if single {
            write!(f, "{coeff}")?;
        } else {
            write!(f, "({coeff})")?;
        }
        return Ok(());
    }
    if minus_one {
        f.write_str("-")?;
    } else if !one {
        if single {
            write!(f, "{coeff}*")?;
        } else {
            write!(f, "({coeff})*")?;
        }
    }
    let mut firstd = true;
    for (i, &k) in sigma.entries().iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !firstd {
            f.write_str("*")?;
        }
        firstd = false;
        write!(f, "d{}", i + 1)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for ScalarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (s, a)) in self.coeffs.iter().rev().enumerate() {
            fmt_operator_term(f, s, a, i == 0)?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a ScalarOp> for &'a ScalarOp {
    type Output = ScalarOp;
    fn add(self, rhs: &ScalarOp) -> ScalarOp {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = self.clone();
        for (s, a) in &rhs.coeffs {
            out.add_term(s.clone(), a.clone());
        }
        out
    }
}

impl<'a> Sub<&'a ScalarOp> for &'a ScalarOp {
    type Output = ScalarOp;
    fn sub(self, rhs: &ScalarOp) -> ScalarOp {
        self + &(-rhs)
    }
}

impl Neg for &ScalarOp {
    type Output = ScalarOp;
    fn neg(self) -> ScalarOp {
        ScalarOp {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(s, a)| (s.clone(), -a)).collect(),
        }
    }
}

/// A `rows × cols` array of scalar operators, acting `A^cols → A^rows`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatrixOp {
    n: usize,
    rows: usize,
    cols: usize,
    entries: Vec<ScalarOp>,
}

impl MatrixOp {
    pub fn zero(n: usize, rows: usize, cols: usize) -> Self {
        MatrixOp {
            n,
            rows,
            cols,
            entries: vec![ScalarOp::zero(n); rows * cols],
        }
    }

    pub fn zero_square(n: usize, m: usize) -> Self {
        Self::zero(n, m, m)
    }

    pub fn from_fn(n: usize, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ScalarOp) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        MatrixOp {
            n,
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<ScalarOp>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged operator matrix".into()));
            }
            for op in row {
                check_vars(n, op.n)?;
                entries.push(op);
            }
        }
        Ok(MatrixOp {
            n,
            rows: r,
            cols: c,
            entries,
        })
    }

    /// `op · I_m`.
    pub fn diagonal(op: &ScalarOp, m: usize) -> Self {
        Self::from_fn(op.n, m, m, |i, j| {
            if i == j {
                op.clone()
            } else {
                ScalarOp::zero(op.n)
            }
        })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self::diagonal(&ScalarOp::identity(n), m)
    }

    /// The order-0 operator given by a polynomial matrix.
    pub fn from_poly_mat(g: &PolyMat) -> Self {
        Self::from_fn(g.n(), g.rows(), g.cols(), |i, j| ScalarOp::mult(g.get(i, j).clone()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarOp {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &ScalarOp> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ScalarOp::is_zero)
    }

    pub fn order(&self) -> Option<u32> {
        self.entries.iter().filter_map(ScalarOp::order).max()
    }

    pub fn order_at_most(&self, k: i64) -> bool {
        self.entries.iter().all(|e| e.order_at_most(k))
    }

    pub fn map(&self, f: impl FnMut(&ScalarOp) -> ScalarOp) -> MatrixOp {
        MatrixOp {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn apply(&self, p: &PolyVec) -> PolyVec {
        assert_eq!(self.cols, p.m(), "operator/vector shape mismatch");
        let comps = (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.n);
                for (j, pj) in p.comps().iter().enumerate() {
                    acc += &self.entry(i, j).apply(pj);
                }
                acc
            })
            .collect();
        PolyVec::new(self.n, comps).expect("shapes checked")
    }

    pub fn checked_apply(&self, p: &PolyVec) -> Result<PolyVec> {
        check_vars(self.n, p.n())?;
        if self.cols != p.m() {
            return Err(Error::Dimension(format!(
                "{}×{} operator on rank-{} vector",
                self.rows,
                self.cols,
                p.m()
            )));
        }
        Ok(self.apply(p))
    }

    pub fn compose(&self, other: &MatrixOp) -> MatrixOp {
        assert_eq!(self.cols, other.rows, "operator shapes do not compose");
        MatrixOp::from_fn(self.n, self.rows, other.cols, |i, j| {
            let mut acc = ScalarOp::zero(self.n);
            for l in 0..self.cols {
                acc = &acc + &self.entry(i, l).compose(other.entry(l, j));
            }
            acc
        })
    }

    pub fn checked_compose(&self, other: &MatrixOp) -> Result<MatrixOp> {
        check_vars(self.n, other.n)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}×{} with {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.compose(other))
    }

    pub fn commutator(&self, other: &MatrixOp) -> MatrixOp {
        &self.compose(other) - &other.compose(self)
    }

    pub fn delta(&self, a: &Poly) -> MatrixOp {
        self.map(|e| e.delta(a))
    }

    pub fn left_mul(&self, a: &Poly) -> MatrixOp {
        self.map(|e| e.left_mul(a))
    }

    /// Order-0 parts `a_0` of every entry.
    pub fn zero_order_part(&self) -> PolyMat {
        let zero = MultiIndex::zero(self.n);
        PolyMat::from_fn(self.n, self.rows, self.cols, |i, j| self.entry(i, j).coeff(&zero))
    }
}

impl fmt::Display for MatrixOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<'a> Add<&'a MatrixOp> for &'a MatrixOp {
    type Output = MatrixOp;
    fn add(self, rhs: &MatrixOp) -> MatrixOp {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        MatrixOp {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a MatrixOp> for &'a MatrixOp {
    type Output = MatrixOp;
    fn sub(self, rhs: &MatrixOp) -> MatrixOp {
        self + &(-rhs)
    }
}

impl Neg for &MatrixOp {
    type Output = MatrixOp;
    fn neg(self) -> MatrixOp {
        self.map(|e| -e)
    }
}

/// A derivation `Σ Xⁱ ∂_i` of `A`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VectorField {
    n: usize,
    comps: Vec<Poly>,
}

impl VectorField {
    pub fn zero(n: usize) -> Self {
        VectorField {
            n,
            comps: vec![Poly::zero(n); n],
        }
    }

    pub fn new(comps: Vec<Poly>) -> Result<Self> {
        let n = comps.len();
        for c in &comps {
            check_vars(n, c.n())?;
        }
        Ok(VectorField { n, comps })
    }

    pub fn parse(texts: &[&str]) -> Result<Self> {
        let n = texts.len();
        let comps = texts
            .iter()
            .map(|t| Poly::parse(t, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { n, comps })
    }

    /// `∂_{i+1}`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.comps[i] = Poly::one(n);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn apply(&self, a: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                out += &(c * &a.d(i));
            }
        }
        out
    }

    pub fn to_op(&self) -> ScalarOp {
        let mut op = ScalarOp::zero(self.n);
        for (i, c) in self.comps.iter().enumerate() {
            op.add_term(MultiIndex::unit(self.n, i), c.clone());
        }
        op
    }

    /// `[X, Y] = Σ (X(Yⁱ) − Y(Xⁱ)) ∂_i`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        VectorField {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(x, y)| &self.apply(y) - &other.apply(x))
                .collect(),
        }
    }

    pub fn scale(&self, a: &Poly) -> VectorField {
        VectorField {
            n: self.n,
            comps: self.comps.iter().map(|c| a * c).collect(),
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_op())
    }
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            n: self.n,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField {
            n: self.n,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField {
            n: self.n,
            comps: self.comps.iter().map(|c| -c).collect(),
        }
    }
}

/// Anything that acts `A^cols → A^rows` and can be probed on polynomial vectors.
pub trait Probe {
    fn n(&self) -> usize;
    fn cols(&self) -> usize;
    /// Order bound of the stored representation (largest `|σ|` present).
    fn support_order(&self) -> u32;
    fn eval(&self, p: &PolyVec) -> PolyVec;
}

impl Probe for ScalarOp {
    fn n(&self) -> usize {
        self.n
    }
    fn cols(&self) -> usize {
        1
    }
    fn support_order(&self) -> u32 {
        self.order().unwrap_or(0)
    }
    fn eval(&self, p: &PolyVec) -> PolyVec {
        PolyVec::new(self.n, vec![self.apply(p.get(0))]).expect("same n")
    }
}

impl Probe for MatrixOp {
    fn n(&self) -> usize {
        self.n
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn support_order(&self) -> u32 {
        self.order().unwrap_or(0)
    }
    fn eval(&self, p: &PolyVec) -> PolyVec {
        self.apply(p)
    }
}

/// Black-box value of `δ_{a_0}⋯δ_{a_k}(Δ)(p)`, expanded as
/// `Σ_S ± (Π_{i∈S} a_i)·Δ((Π_{i∉S} a_i)·p)` without composing operators.
pub fn delta_nest_value<O: Probe + ?Sized>(op: &O, factors: &[Poly], p: &PolyVec) -> PolyVec {
    let k = factors.len();
    let n = op.n();
    let mut acc = PolyVec::zero(n, p.m().max(1));
    let mut first = true;
    for mask in 0u32..(1 << k) {
        let mut outside = Poly::one(n);
        let mut inside = Poly::one(n);
        let mut sign_neg = false;
        for (i, a) in factors.iter().enumerate() {
            if mask & (1 << i) != 0 {
                outside = &outside * a;
            } else {
                inside = &inside * a;
                sign_neg = !sign_neg;
            }
        }
        let value = op.eval(&p.scale(&inside)).scale(&outside);
        if first {
            acc = PolyVec::zero(n, value.m());
            first = false;
        }
        acc = if sign_neg { &acc - &value } else { &acc + &value };
    }
    acc
}

/// Nondecreasing `len`-tuples of coordinate slots `0..n`.
pub(crate) fn slot_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let start = t.last().copied().unwrap_or(0);
                (start..n).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Basis-vector probes `x^μ e_β` with `|μ| ≤ d`.
pub(crate) fn vector_probes(n: usize, m: usize, d: u32) -> Vec<PolyVec> {
    let monos = monomials_up_to(n, d);
    let mut out = Vec::with_capacity(monos.len() * m);
    for beta in 0..m {
        for mu in &monos {
            out.push(PolyVec::basis(n, m, beta).scale(&Poly::monomial(mu.clone(), Rational::one())));
        }
    }
    out
}

/// Order check by coefficient inspection.
pub fn verify_order<O: HasOrder + ?Sized>(op: &O, k: u32) -> bool {
    op.max_order().map_or(true, |o| o <= k)
}

/// Order check through the defining condition: every δ-nest of depth `k+1`
/// over coordinate functions kills every monomial probe.
///
/// Coordinates suffice because `δ_{ab} = aδ_b + bδ_a − δ_aδ_b`. Probes run up
/// to degree `max(k+1, support order)`, enough to detect any surviving
/// operator of order ≤ support order.
pub fn verify_order_by_deltas<O: Probe + ?Sized>(op: &O, k: u32) -> bool {
    let n = op.n();
    let d = (k + 1).max(op.support_order());
    let probes = vector_probes(n, op.cols(), d);
    let coords: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    slot_tuples(n, k as usize + 1).into_iter().all(|tuple| {
        let factors: Vec<Poly> = tuple.iter().map(|&i| coords[i].clone()).collect();
        probes
            .iter()
            .all(|p| delta_nest_value(op, &factors, p).is_zero())
    })
}

pub trait HasOrder {
    fn max_order(&self) -> Option<u32>;
}

impl HasOrder for ScalarOp {
    fn max_order(&self) -> Option<u32> {
        self.order()
    }
}

impl HasOrder for MatrixOp {
    fn max_order(&self) -> Option<u32> {
        self.order()
    }
}

/// Whether `op` vanishes, judged only by its values on the monomials of
/// degree ≤ `d` (exact when `d` bounds the order).
pub fn vanishes_on_monomials(op: &ScalarOp, d: u32) -> bool {
    monomials_up_to(op.n, d)
        .into_iter()
        .all(|e| op.apply(&Poly::monomial(e, Rational::one())).is_zero())
}

/// Whether `f` and `g` agree on every monomial of degree ≤ `d`.
pub fn agree_on_monomials(f: impl Fn(&Poly) -> Poly, g: impl Fn(&Poly) -> Poly, n: usize, d: u32) -> bool {
    monomials_up_to(n, d).into_iter().all(|e| {
        let x = Poly::monomial(e, Rational::one());
        f(&x) == g(&x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_scalar_op, Sampler};
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    fn d(n: usize, i: usize) -> ScalarOp {
        ScalarOp::partial(n, i)
    }

    fn mult(s: &str, n: usize) -> ScalarOp {
        ScalarOp::mult(p(s, n))
    }

    /// Composition oracle: apply the factors one after the other on probes.
    fn composes_correctly(a: &ScalarOp, b: &ScalarOp) -> bool {
        let c = a.compose(b);
        let bound = a.order().unwrap_or(0) + b.order().unwrap_or(0);
        agree_on_monomials(|x| c.apply(x), |x| a.apply(&b.apply(x)), a.n(), bound)
    }

    #[test]
    fn apply_examples() {
        assert_eq!(d(1, 0).apply(&p("x1^2", 1)), p("2*x1", 1));
        let x_d = mult("x1", 1).compose(&d(1, 0));
        // oracle: differentiate, then multiply
        let q = p("x1^3", 1);
        assert_eq!(x_d.apply(&q), &p("x1", 1) * &q.d(0));
        assert_eq!(x_d.apply(&q), p("3*x1^3", 1));
        assert_eq!(ScalarOp::identity(2).apply(&p("x1*x2 + 4", 2)), p("x1*x2 + 4", 2));
        assert!(d(1, 0).checked_apply(&p("x1", 2)).is_err());
    }

    #[test]
    fn compose_examples() {
        let c = d(1, 0).compose(&mult("x1", 1));
        assert!(composes_correctly(&d(1, 0), &mult("x1", 1)));
        assert_eq!(c, &mult("x1", 1).compose(&d(1, 0)) + &ScalarOp::identity(1));
        assert_eq!(
            d(2, 0).compose(&d(2, 1)),
            ScalarOp::derivative(MultiIndex::new(vec![1, 1]))
        );
        let x_d = mult("x1", 1).compose(&d(1, 0));
        assert_eq!(d(1, 0).compose(&x_d).order(), Some(2));
        assert!(composes_correctly(&d(1, 0), &x_d));
    }

    #[test]
    fn commutator_examples() {
        let one = d(1, 0).commutator(&mult("x1", 1));
        assert_eq!(one, ScalarOp::identity(1));
        assert!(d(2, 0).commutator(&d(2, 1)).is_zero());
        let a = mult("x1", 1).compose(&d(1, 0));
        let b = mult("x1^2", 1).compose(&d(1, 0));
        let c = a.commutator(&b);
        // oracle: compose-and-subtract evaluated on probes
        assert!(agree_on_monomials(
            |x| c.apply(x),
            |x| &a.apply(&b.apply(x)) - &b.apply(&a.apply(x)),
            1,
            3
        ));
        assert_eq!(c, b);
    }

    #[test]
    fn delta_examples() {
        let dx = d(1, 0).delta(&p("x1", 1));
        assert_eq!(dx, mult("-1", 1));
        assert!(agree_on_monomials(
            |x| dx.apply(x),
            |x| &(&p("x1", 1) * &d(1, 0).apply(x)) - &d(1, 0).apply(&(&p("x1", 1) * x)),
            1,
            3
        ));
        assert!(mult("x1^2", 1).delta(&p("x1 + 3", 1)).is_zero());
        assert!(dx.delta(&p("x1", 1)).is_zero());
    }

    #[test]
    fn verify_order_examples() {
        let d12 = ScalarOp::derivative(MultiIndex::new(vec![1, 1]));
        assert!(!verify_order(&d12, 1));
        assert!(verify_order(&d12, 2));
        assert!(!verify_order_by_deltas(&d12, 1));
        assert!(verify_order_by_deltas(&d12, 2));
        assert!(verify_order(&mult("x1", 2), 0) && verify_order_by_deltas(&mult("x1", 2), 0));
        assert!(verify_order(&ScalarOp::zero(2), 0) && verify_order_by_deltas(&ScalarOp::zero(2), 0));
        // probes beyond k+1 are needed: ∂^5 survives two δ's as order 3
        let d5 = ScalarOp::derivative(MultiIndex::new(vec![5]));
        assert!(!verify_order_by_deltas(&d5, 1));
    }

    #[test]
    fn matrix_examples() {
        let n = 1;
        let diag = MatrixOp::diagonal(&d(n, 0), 2);
        let v = PolyVec::parse(&["x1", "x1^2"], n).unwrap();
        assert_eq!(diag.apply(&v), PolyVec::parse(&["1", "2*x1"], n).unwrap());
        let e12 = MatrixOp::from_poly_mat(&PolyMat::unit(n, 2, 0, 1));
        let w = PolyVec::parse(&["x1 + 1", "x1^3"], n).unwrap();
        assert_eq!(e12.apply(&w), PolyVec::parse(&["x1^3", "0"], n).unwrap());
        let xi = MatrixOp::diagonal(&mult("x1", n), 2);
        let composed = diag.compose(&xi);
        let expected = &MatrixOp::diagonal(&mult("x1", n).compose(&d(n, 0)), 2) + &MatrixOp::identity(n, 2);
        assert_eq!(composed, expected);
        // 1×1 matrices agree with scalar composition
        let a = mult("x1^2", n).compose(&d(n, 0));
        let b = d(n, 0).compose(&d(n, 0));
        assert_eq!(
            MatrixOp::diagonal(&a, 1).compose(&MatrixOp::diagonal(&b, 1)),
            MatrixOp::diagonal(&a.compose(&b), 1)
        );
        assert!(diag.checked_apply(&PolyVec::zero(n, 3)).is_err());
    }

    #[test]
    fn vector_field_bracket_matches_commutator() {
        let x = VectorField::parse(&["x2", "x1^2"]).unwrap();
        let y = VectorField::parse(&["1", "x1*x2"]).unwrap();
        assert_eq!(x.bracket(&y).to_op(), x.to_op().commutator(&y.to_op()));
    }

    fn ops(order: u32, coeff_deg: u32) -> impl Strategy<Value = (ScalarOp, ScalarOp, ScalarOp)> {
        (1usize..=2, any::<u64>()).prop_map(move |(n, seed)| {
            let mut s = Sampler::new(seed);
            (
                random_scalar_op(&mut s, n, order, coeff_deg),
                random_scalar_op(&mut s, n, order, coeff_deg),
                random_scalar_op(&mut s, n, order, coeff_deg),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn commutator_jacobi((a, b, c) in ops(2, 2)) {
            let j = &(&a.commutator(&b.commutator(&c)) + &b.commutator(&c.commutator(&a))) + &c.commutator(&a.commutator(&b));
            prop_assert!(j.is_zero());
        }

        #[test]
        fn commutator_order_drops((a, b, _c) in ops(3, 2)) {
            let (Some(k), Some(l)) = (a.order(), b.order()) else { return Ok(()); };
            prop_assert!(a.commutator(&b).order_at_most(i64::from(k + l) - 1));
        }

        #[test]
        fn compose_matches_sequential_application((a, b, _c) in ops(2, 2)) {
            prop_assert!(composes_correctly(&a, &b));
        }

        #[test]
        fn compose_is_associative((a, b, c) in ops(2, 2)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn delta_is_a_derivation_of_composition((a, b, c) in ops(2, 2)) {
            let f = c.coeffs().next().map(|(_, f)| f.clone()).unwrap_or_else(|| Poly::var(a.n(), 0));
            let lhs = a.compose(&b).delta(&f);
            let rhs = &a.delta(&f).compose(&b) + &a.compose(&b.delta(&f));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn deltas_commute_and_lower_order((a, _b, _c) in ops(3, 2)) {
            let n = a.n();
            let (f, g) = (Poly::var(n, 0), Poly::var(n, n - 1) + Poly::var(n, 0).pow(2));
            prop_assert_eq!(a.delta(&f).delta(&g), a.delta(&g).delta(&f));
            if let Some(k) = a.order() {
                if k >= 1 {
                    prop_assert!(a.delta(&f).order_at_most(i64::from(k) - 1));
                }
            }
        }

        #[test]
        fn order_checks_agree((a, _b, _c) in ops(3, 2)) {
            for k in 0..=4 {
                prop_assert_eq!(verify_order(&a, k), verify_order_by_deltas(&a, k));
            }
        }

        #[test]
        fn matrix_order_checks_agree(seed in any::<u64>()) {
            let mut s = Sampler::new(seed);
            let m = MatrixOp::from_fn(2, 2, 2, |_, _| random_scalar_op(&mut s, 2, 2, 1));
            for k in 0..=3 {
                prop_assert_eq!(verify_order(&m, k), verify_order_by_deltas(&m, k));
            }
        }
    }
}
