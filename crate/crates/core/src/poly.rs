//! Sparse polynomials over ℚ and the vector/matrix shapes built from them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{check_vars, Error, Result};
use crate::parse;

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exponent vector, also used for derivative multi-indices.
///
/// Ordered graded-lexicographically: total degree first, then
/// lexicographically with `x1 > x2 > …`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` when `other ≤ self` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// All `τ ≤ self` componentwise.
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &s in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=s).map(move |t| {
                        let mut v = prefix.clone();
                        v.push(t);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Product of binomials `Π C(σ_i, τ_i)`.
    pub fn binomial(&self, lower: &Self) -> BigInt {
        let mut acc = BigInt::one();
        for (&s, &t) in self.0.iter().zip(&lower.0) {
            acc *= binomial(s, t);
        }
        acc
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Every exponent vector in `n` variables of total degree ≤ `d`, by
/// increasing degree and, within a degree, with `x1`-heavy entries first.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut layer = Vec::new();
        exponents_of_degree(n, deg, &mut Vec::with_capacity(n), &mut layer);
        out.extend(layer.into_iter().map(MultiIndex));
    }
    out
}

fn exponents_of_degree(n: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == n {
        prefix.push(deg);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for first in (0..=deg).rev() {
        prefix.push(first);
        exponents_of_degree(n, deg - first, prefix, out);
        prefix.pop();
    }
}

/// An element of `ℚ[x1..xn]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zero(n), c)
    }

    pub fn from_int(n: usize, c: i64) -> Self {
        Self::constant(n, int(c))
    }

    /// The coordinate `x_{i+1}` (slots are 0-based).
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, i), Rational::one())
    }

    pub fn monomial(exps: MultiIndex, c: Rational) -> Self {
        let mut p = Poly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Self {
        let mut p = Poly::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent length differs from variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut p = Poly::zero(n);
        for term in parse::parse_terms(text, &['x'])? {
            let mut exps = vec![0u32; n];
            for f in &term.factors {
                exps[parse::slot(f, n)?] += f.exp;
            }
            p.add_term(MultiIndex(exps), term.coeff);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &MultiIndex) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&MultiIndex::zero(self.n))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().map_or(true, |d| d == 0)
    }

    pub(crate) fn add_term(&mut self, e: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        check_vars(self.n, other.n)?;
        Ok(self * other)
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        check_vars(self.n, other.n)?;
        Ok(self + other)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// ∂/∂x_{i+1}; errors when the slot is out of range.
    pub fn partial(&self, i: usize) -> Result<Poly> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.n,
            });
        }
        Ok(self.d(i))
    }

    pub(crate) fn d(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.0[i] -= 1;
            out.terms.insert(e2, c * int(i64::from(k)));
        }
        out
    }

    /// `∂^σ`.
    pub fn diff(&self, sigma: &MultiIndex) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            let Some(rest) = e.checked_sub(sigma) else {
                continue;
            };
            let mut factor = BigInt::one();
            for (&top, &s) in e.0.iter().zip(&sigma.0) {
                for j in 0..s {
                    factor *= BigInt::from(top - j);
                }
            }
            out.terms.insert(rest, c * Rational::from_integer(factor));
        }
        out
    }

    /// Substitutes `x_i ↦ values[i]`.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(&e.0) {
                for _ in 0..k {
                    t *= v;
                }
            }
            acc += t;
        }
        acc
    }

    fn fmt_monomial(e: &MultiIndex, f: &mut fmt::Formatter<'_>, letter: char) -> fmt::Result {
        let mut first = true;
        for (i, &k) in e.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{letter}{}", i + 1)?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// Writes `terms` (already in print order) in the shared canonical form;
/// `mono` renders a non-constant monomial.
pub(crate) fn write_terms<'a, E: 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a E, &'a Rational)>,
    is_unit: impl Fn(&E) -> bool,
    mono: impl Fn(&E, &mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if is_unit(e) {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            mono(e, f)?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().rev(),
            |e| e.degree() == 0,
            |e, f| Poly::fmt_monomial(e, f, 'x'),
        )
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c);
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = Poly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_binops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
    };
}
owned_binops!(Poly);

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// An element of `P = Aᵐ` in the basis `e_1..e_m`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyVec {
    n: usize,
    comps: Vec<Poly>,
}

impl PolyVec {
    pub fn zero(n: usize, m: usize) -> Self {
        PolyVec {
            n,
            comps: vec![Poly::zero(n); m],
        }
    }

    /// The basis section `e_{alpha+1}`.
    pub fn basis(n: usize, m: usize, alpha: usize) -> Self {
        let mut v = Self::zero(n, m);
        v.comps[alpha] = Poly::one(n);
        v
    }

    pub fn new(n: usize, comps: Vec<Poly>) -> Result<Self> {
        for c in &comps {
            check_vars(n, c.n)?;
        }
        Ok(PolyVec { n, comps })
    }

    pub(crate) fn from_vec(n: usize, comps: Vec<Poly>) -> Self {
        debug_assert!(comps.iter().all(|c| c.n == n));
        PolyVec { n, comps }
    }

    pub fn parse(texts: &[&str], n: usize) -> Result<Self> {
        let comps = texts
            .iter()
            .map(|t| Poly::parse(t, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyVec { n, comps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn get(&self, alpha: usize) -> &Poly {
        &self.comps[alpha]
    }

    pub fn into_comps(self) -> Vec<Poly> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn scale(&self, a: &Poly) -> PolyVec {
        PolyVec {
            n: self.n,
            comps: self.comps.iter().map(|c| a * c).collect(),
        }
    }

    pub fn scale_rational(&self, c: &Rational) -> PolyVec {
        PolyVec {
            n: self.n,
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn map(&self, f: impl FnMut(&Poly) -> Poly) -> PolyVec {
        PolyVec {
            n: self.n,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    /// Coordinates of `p ⊗ q` in the basis `e_α ⊗ e'_β`, index `α·m' + β`.
    pub fn tensor(&self, other: &PolyVec) -> PolyVec {
        let mut comps = Vec::with_capacity(self.m() * other.m());
        for a in &self.comps {
            for b in &other.comps {
                comps.push(a * b);
            }
        }
        PolyVec { n: self.n, comps }
    }

    pub fn checked_add(&self, other: &PolyVec) -> Result<PolyVec> {
        self.same_shape(other)?;
        Ok(self + other)
    }

    fn same_shape(&self, other: &PolyVec) -> Result<()> {
        check_vars(self.n, other.n)?;
        if self.m() != other.m() {
            return Err(Error::Dimension(format!(
                "vector ranks {} and {}",
                self.m(),
                other.m()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PolyVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl<'a> Add<&'a PolyVec> for &'a PolyVec {
    type Output = PolyVec;
    fn add(self, rhs: &PolyVec) -> PolyVec {
        assert_eq!(self.m(), rhs.m(), "rank mismatch");
        PolyVec {
            n: self.n,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a PolyVec> for &'a PolyVec {
    type Output = PolyVec;
    fn sub(self, rhs: &PolyVec) -> PolyVec {
        assert_eq!(self.m(), rhs.m(), "rank mismatch");
        PolyVec {
            n: self.n,
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &PolyVec {
    type Output = PolyVec;
    fn neg(self) -> PolyVec {
        self.map(|c| -c)
    }
}

owned_binops!(PolyVec);

/// An `rows × cols` matrix of polynomials; square ones are elements of `End_A(P)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMat {
    n: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMat {
    pub fn zero(n: usize, rows: usize, cols: usize) -> Self {
        PolyMat {
            n,
            rows,
            cols,
            entries: vec![Poly::zero(n); rows * cols],
        }
    }

    pub fn zero_square(n: usize, m: usize) -> Self {
        Self::zero(n, m, m)
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self::scalar(m, &Poly::one(n))
    }

    pub fn scalar(m: usize, a: &Poly) -> Self {
        let mut out = Self::zero(a.n(), m, m);
        for i in 0..m {
            out.set(i, i, a.clone());
        }
        out
    }

    /// The matrix unit `E^{αβ}`, sending `e_β` to `e_α`.
    pub fn unit(n: usize, m: usize, alpha: usize, beta: usize) -> Self {
        let mut out = Self::zero(n, m, m);
        out.set(alpha, beta, Poly::one(n));
        out
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged matrix rows".into()));
            }
            for p in row {
                check_vars(n, p.n)?;
                entries.push(p);
            }
        }
        Ok(PolyMat {
            n,
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_fn(n: usize, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMat {
            n,
            rows,
            cols,
            entries,
        }
    }

    pub fn parse(rows: &[Vec<&str>], n: usize) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|t| Poly::parse(t, n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(n, rows)
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

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn map(&self, f: impl FnMut(&Poly) -> Poly) -> PolyMat {
        PolyMat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> PolyMat {
        PolyMat::from_fn(self.n, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn apply(&self, p: &PolyVec) -> PolyVec {
        assert_eq!(self.cols, p.m(), "matrix/vector shape mismatch");
        let comps = (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.n);
                for (j, pj) in p.comps().iter().enumerate() {
                    acc += &(self.get(i, j) * pj);
                }
                acc
            })
            .collect();
        PolyVec::from_vec(self.n, comps)
    }

    pub fn checked_apply(&self, p: &PolyVec) -> Result<PolyVec> {
        check_vars(self.n, p.n())?;
        if self.cols != p.m() {
            return Err(Error::Dimension(format!(
                "{}×{} matrix on rank-{} vector",
                self.rows,
                self.cols,
                p.m()
            )));
        }
        Ok(self.apply(p))
    }

    pub fn commutator(&self, other: &PolyMat) -> PolyMat {
        &(self * other) - &(other * self)
    }

    /// Kronecker product, index `(i·r' + k, j·c' + l)`.
    pub fn kron(&self, other: &PolyMat) -> PolyMat {
        PolyMat::from_fn(
            self.n,
            self.rows * other.rows,
            self.cols * other.cols,
            |r, c| self.get(r / other.rows, c / other.cols) * other.get(r % other.rows, c % other.cols),
        )
    }
}

impl fmt::Display for PolyMat {
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
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<'a> Add<&'a PolyMat> for &'a PolyMat {
    type Output = PolyMat;
    fn add(self, rhs: &PolyMat) -> PolyMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        PolyMat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a PolyMat> for &'a PolyMat {
    type Output = PolyMat;
    fn sub(self, rhs: &PolyMat) -> PolyMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        PolyMat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &PolyMat {
    type Output = PolyMat;
    fn neg(self) -> PolyMat {
        self.map(|p| -p)
    }
}

impl<'a> Mul<&'a PolyMat> for &'a PolyMat {
    type Output = PolyMat;
    fn mul(self, rhs: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        PolyMat::from_fn(self.n, self.rows, rhs.cols, |i, j| {
            let mut acc = Poly::zero(self.n);
            for l in 0..self.cols {
                acc += &(self.get(i, l) * rhs.get(l, j));
            }
            acc
        })
    }
}

owned_binops!(PolyMat);
