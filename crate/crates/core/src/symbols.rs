//! Graded symbols: polynomials in `x` and momenta `ξ` (written `k1..kn`),
//! homogeneous in `ξ`, with the canonical bracket
//! `{F, G} = Σ_i (∂F/∂ξ_i ∂G/∂x_i − ∂F/∂x_i ∂G/∂ξ_i)`.
//!
//! With this sign `{smbl Δ, smbl ∇} = smbl [Δ, ∇]` for `δ_a = [a, ·]`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::diffop::{MatrixOp, ScalarOp};
use crate::diole::Der0;
use crate::diolic_diffops::{DiffOp, DiffOp0, DiffOp1, DiffOpNeg1};
use crate::error::{check_vars, Error, Result};
use crate::parse;
use crate::poly::{write_terms, MultiIndex, Poly, PolyMat};
use crate::VectorField;

/// A `ξ`-homogeneous symbol of degree `k`, stored as a polynomial in
/// `2n` variables (`x` first, then `ξ`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymbolPoly {
    n: usize,
    k: u32,
    poly: Poly,
}

fn xi_degree(e: &MultiIndex, n: usize) -> u32 {
    e.entries()[n..].iter().sum()
}

impl SymbolPoly {
    pub fn zero(n: usize, k: u32) -> Self {
        SymbolPoly {
            n,
            k,
            poly: Poly::zero(2 * n),
        }
    }

    /// A function of `x` as a symbol of degree 0.
    pub fn function(a: &Poly) -> Self {
        let n = a.n();
        let poly = Poly::from_terms(
            2 * n,
            a.terms().map(|(e, c)| {
                let mut exps = e.entries().to_vec();
                exps.resize(2 * n, 0);
                (MultiIndex::new(exps), c.clone())
            }),
        );
        SymbolPoly { n, k: 0, poly }
    }

    /// `ξ_i`.
    pub fn momentum(n: usize, i: usize) -> Self {
        SymbolPoly {
            n,
            k: 1,
            poly: Poly::var(2 * n, n + i),
        }
    }

    /// Wraps a polynomial in `2n` variables, inferring the degree from its
    /// terms; `k` is used when the polynomial is zero.
    pub fn from_poly(n: usize, poly: Poly, k: u32) -> Result<Self> {
        check_vars(2 * n, poly.n())?;
        let degrees: Vec<u32> = poly.terms().map(|(e, _)| xi_degree(e, n)).collect();
        let k = match degrees.first() {
            None => k,
            Some(&d) => {
                if degrees.iter().any(|&other| other != d) {
                    return Err(Error::Invalid("symbol is not homogeneous in the momenta".into()));
                }
                d
            }
        };
        Ok(SymbolPoly { n, k, poly })
    }

    /// Reads the polynomial grammar with `x1..xn` and momenta `k1..kn`. A zero
    /// symbol gets degree 0.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut poly = Poly::zero(2 * n);
        for term in parse::parse_terms(text, &['x', 'k'])? {
            let mut exps = vec![0u32; 2 * n];
            for f in &term.factors {
                let slot = parse::slot(f, n)?;
                exps[if f.letter == 'k' { n + slot } else { slot }] += f.exp;
            }
            poly += &Poly::monomial(MultiIndex::new(exps), term.coeff);
        }
        SymbolPoly::from_poly(n, poly, 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn d_x(&self, i: usize) -> Poly {
        self.poly.d(i)
    }

    fn d_xi(&self, i: usize) -> Poly {
        self.poly.d(self.n + i)
    }

    /// Normal-ordered operator `Σ a_σ(x) ∂^σ`, a right inverse of the
    /// symbol map at degree `k`.
    pub fn quantize(&self) -> ScalarOp {
        let n = self.n;
        let mut op = ScalarOp::zero(n);
        for (e, c) in self.poly.terms() {
            let (xs, xis) = e.entries().split_at(n);
            let coeff = Poly::monomial(MultiIndex::new(xs.to_vec()), c.clone());
            op = &op + &ScalarOp::term(MultiIndex::new(xis.to_vec()), coeff);
        }
        op
    }

    fn with_degree(&self, poly: Poly, k: u32) -> SymbolPoly {
        SymbolPoly { n: self.n, k, poly }
    }

    /// Same symbol viewed at another degree; only a zero symbol may move.
    fn at_degree(&self, k: u32) -> SymbolPoly {
        debug_assert!(self.is_zero() || self.k == k, "degree {} symbol used at {k}", self.k);
        self.with_degree(self.poly.clone(), k)
    }
}

fn check_same(a: &SymbolPoly, b: &SymbolPoly) -> Result<()> {
    check_vars(a.n, b.n)
}

/// Top-order part `Σ_{|σ|=k} a_σ ξ^σ`.
pub fn smbl_scalar(op: &ScalarOp, k: u32) -> Result<SymbolPoly> {
    if let Some(found) = op.order() {
        if found > k {
            return Err(Error::OrderExceeded { found, bound: k });
        }
    }
    Ok(top_part(op, k))
}

/// `smbl_scalar` without the order check: terms of order above `k` must not
/// exist.
fn top_part(op: &ScalarOp, k: u32) -> SymbolPoly {
    let n = op.n();
    let mut poly = Poly::zero(2 * n);
    for (sigma, a) in op.coeffs() {
        if sigma.degree() != k {
            continue;
        }
        for (e, c) in a.terms() {
            let mut exps = e.entries().to_vec();
            exps.extend_from_slice(sigma.entries());
            poly += &Poly::monomial(MultiIndex::new(exps), c.clone());
        }
    }
    SymbolPoly { n, k, poly }
}

/// The product of symbols, which is the symbol of the composition.
pub fn star(s1: &SymbolPoly, s2: &SymbolPoly) -> Result<SymbolPoly> {
    check_same(s1, s2)?;
    Ok(mul(s1, s2))
}

fn mul(s1: &SymbolPoly, s2: &SymbolPoly) -> SymbolPoly {
    s1.with_degree(&s1.poly * &s2.poly, s1.k + s2.k)
}

/// The canonical bracket, of degree `k + ℓ − 1` (a bracket of two functions
/// is zero of degree 0).
pub fn poisson_bracket(s1: &SymbolPoly, s2: &SymbolPoly) -> Result<SymbolPoly> {
    check_same(s1, s2)?;
    Ok(bracket(s1, s2))
}

fn bracket(s1: &SymbolPoly, s2: &SymbolPoly) -> SymbolPoly {
    let mut poly = Poly::zero(2 * s1.n);
    for i in 0..s1.n {
        poly += &(&s1.d_xi(i) * &s2.d_x(i));
        poly -= &(&s1.d_x(i) * &s2.d_xi(i));
    }
    s1.with_degree(poly, (s1.k + s2.k).saturating_sub(1))
}

/// `H_s(t) = {s, t}`.
pub fn hamiltonian_apply(s: &SymbolPoly, t: &SymbolPoly) -> Result<SymbolPoly> {
    poisson_bracket(s, t)
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        write_terms(
            f,
            self.poly.terms().rev(),
            |e| e.degree() == 0,
            |e, f| {
                let mut first = true;
                for (i, &p) in e.entries().iter().enumerate() {
                    if p == 0 {
                        continue;
                    }
                    if !first {
                        f.write_str("*")?;
                    }
                    first = false;
                    let (letter, idx) = if i < n { ('x', i) } else { ('k', i - n) };
                    write!(f, "{letter}{}", idx + 1)?;
                    if p > 1 {
                        write!(f, "^{p}")?;
                    }
                }
                Ok(())
            },
        )
    }
}

impl<'a> Add<&'a SymbolPoly> for &'a SymbolPoly {
    type Output = SymbolPoly;

    fn add(self, rhs: &'a SymbolPoly) -> SymbolPoly {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let k = if self.is_zero() { rhs.k } else { self.k };
        debug_assert!(rhs.is_zero() || rhs.k == k, "adding symbols of degrees {} and {}", self.k, rhs.k);
        self.with_degree(&self.poly + &rhs.poly, k)
    }
}

impl<'a> Sub<&'a SymbolPoly> for &'a SymbolPoly {
    type Output = SymbolPoly;

    fn sub(self, rhs: &'a SymbolPoly) -> SymbolPoly {
        self + &-rhs
    }
}

impl Neg for &SymbolPoly {
    type Output = SymbolPoly;

    fn neg(self) -> SymbolPoly {
        self.with_degree(-&self.poly, self.k)
    }
}

/// Symbol of a degree-0 diolic operator of order `k` under the split
/// `□^P = □^A·I + M`: the order-`k` symbol of `□^A` and the order-`(k−1)`
/// symbols of the entries of `M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiolicSymbol0 {
    k: u32,
    s: SymbolPoly,
    ms: Vec<Vec<SymbolPoly>>,
}

/// Symbol of a degree-1 operator `A → P`, one component per basis section.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiolicSymbol1 {
    k: u32,
    comps: Vec<SymbolPoly>,
}

/// Symbol of a degree −1 operator `P → A` (rank one), of degree `k − 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiolicSymbolNeg1 {
    k: u32,
    t: SymbolPoly,
}

impl DiolicSymbol0 {
    pub fn new(k: u32, s: SymbolPoly, ms: Vec<Vec<SymbolPoly>>) -> Result<Self> {
        let n = s.n;
        let m = ms.len();
        if ms.iter().any(|row| row.len() != m) {
            return Err(Error::Dimension("matrix symbol must be square".into()));
        }
        expect_degree(&s, k)?;
        for e in ms.iter().flatten() {
            check_vars(n, e.n)?;
            if k == 0 && !e.is_zero() {
                return Err(Error::OrderExceeded { found: e.k + 1, bound: 0 });
            }
            expect_degree(e, k.saturating_sub(1))?;
        }
        let ms = ms
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.at_degree(k.saturating_sub(1))).collect())
            .collect();
        Ok(DiolicSymbol0 { k, s: s.at_degree(k), ms })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn scalar(&self) -> &SymbolPoly {
        &self.s
    }

    pub fn matrix(&self) -> &[Vec<SymbolPoly>] {
        &self.ms
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero() && self.ms.iter().flatten().all(SymbolPoly::is_zero)
    }
}

impl DiolicSymbol1 {
    pub fn new(k: u32, comps: Vec<SymbolPoly>) -> Result<Self> {
        let n = comps.first().map_or(0, |c| c.n);
        for c in &comps {
            check_vars(n, c.n)?;
            expect_degree(c, k)?;
        }
        let comps = comps.iter().map(|c| c.at_degree(k)).collect();
        Ok(DiolicSymbol1 { k, comps })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn comps(&self) -> &[SymbolPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(SymbolPoly::is_zero)
    }
}

impl DiolicSymbolNeg1 {
    pub fn new(k: u32, t: SymbolPoly) -> Result<Self> {
        if k == 0 && !t.is_zero() {
            return Err(Error::OrderExceeded { found: t.k + 1, bound: 0 });
        }
        expect_degree(&t, k.saturating_sub(1))?;
        Ok(DiolicSymbolNeg1 {
            k,
            t: t.at_degree(k.saturating_sub(1)),
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn symbol(&self) -> &SymbolPoly {
        &self.t
    }
}

fn expect_degree(s: &SymbolPoly, k: u32) -> Result<()> {
    if s.is_zero() || s.k == k {
        Ok(())
    } else {
        Err(Error::Invalid(format!("symbol {s} has degree {} where {k} is expected", s.k)))
    }
}

pub fn diolic_symbol0(b: &DiffOp0) -> DiolicSymbol0 {
    let k = b.k();
    let lower = k.saturating_sub(1);
    let mp = b.matrix_part();
    let ms = (0..mp.rows())
        .map(|i| {
            (0..mp.cols())
                .map(|j| if k == 0 { SymbolPoly::zero(b.n(), 0) } else { top_part(mp.entry(i, j), lower) })
                .collect()
        })
        .collect();
    DiolicSymbol0 {
        k,
        s: top_part(b.box_a(), k),
        ms,
    }
}

/// The split lift `(quantize s, quantize Ms)` of a degree-0 symbol.
pub fn lift_symbol0(s: &DiolicSymbol0) -> DiffOp0 {
    let n = s.s.n;
    let m = s.ms.len();
    let mp = MatrixOp::from_fn(n, m, m, |i, j| s.ms[i][j].quantize());
    DiffOp0::new(s.k, s.s.quantize(), mp).expect("symbol degrees bound the orders")
}

pub fn diolic_symbol1(b: &DiffOp1) -> DiolicSymbol1 {
    DiolicSymbol1 {
        k: b.k(),
        comps: b.ops().iter().map(|op| top_part(op, b.k())).collect(),
    }
}

pub fn diolic_symbol_neg1(b: &DiffOpNeg1) -> DiolicSymbolNeg1 {
    let k = b.k();
    let t = if k == 0 { SymbolPoly::zero(b.n(), 0) } else { top_part(b.op(), k - 1) };
    DiolicSymbolNeg1 { k, t }
}

/// A homogeneous diolic symbol; degrees outside −1..=1 are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DiolicSymbol {
    Neg1(DiolicSymbolNeg1),
    Zero(DiolicSymbol0),
    One(DiolicSymbol1),
    Trivial { degree: i32, n: usize, m: usize },
}

impl DiolicSymbol {
    pub fn degree(&self) -> i32 {
        match self {
            DiolicSymbol::Neg1(_) => -1,
            DiolicSymbol::Zero(_) => 0,
            DiolicSymbol::One(_) => 1,
            DiolicSymbol::Trivial { degree, .. } => *degree,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DiolicSymbol::Neg1(t) => t.t.is_zero(),
            DiolicSymbol::Zero(s) => s.is_zero(),
            DiolicSymbol::One(s) => s.is_zero(),
            DiolicSymbol::Trivial { .. } => true,
        }
    }

    fn n(&self) -> usize {
        match self {
            DiolicSymbol::Neg1(t) => t.t.n,
            DiolicSymbol::Zero(s) => s.s.n,
            DiolicSymbol::One(s) => s.comps.first().map_or(0, |c| c.n),
            DiolicSymbol::Trivial { n, .. } => *n,
        }
    }

    fn m(&self) -> usize {
        match self {
            DiolicSymbol::Neg1(_) => 1,
            DiolicSymbol::Zero(s) => s.ms.len(),
            DiolicSymbol::One(s) => s.comps.len(),
            DiolicSymbol::Trivial { m, .. } => *m,
        }
    }

    fn negate(&self) -> DiolicSymbol {
        match self {
            DiolicSymbol::Neg1(t) => DiolicSymbol::Neg1(DiolicSymbolNeg1 { k: t.k, t: -&t.t }),
            DiolicSymbol::Zero(s) => DiolicSymbol::Zero(DiolicSymbol0 {
                k: s.k,
                s: -&s.s,
                ms: s.ms.iter().map(|row| row.iter().map(|e| -e).collect()).collect(),
            }),
            DiolicSymbol::One(s) => DiolicSymbol::One(DiolicSymbol1 {
                k: s.k,
                comps: s.comps.iter().map(|c| -c).collect(),
            }),
            DiolicSymbol::Trivial { .. } => self.clone(),
        }
    }
}

pub fn diolic_symbol(b: &DiffOp) -> DiolicSymbol {
    match b {
        DiffOp::Neg1(x) => DiolicSymbol::Neg1(diolic_symbol_neg1(x)),
        DiffOp::Zero(x) => DiolicSymbol::Zero(diolic_symbol0(x)),
        DiffOp::One(x) => DiolicSymbol::One(diolic_symbol1(x)),
        DiffOp::Trivial { degree, n, m } => DiolicSymbol::Trivial {
            degree: *degree,
            n: *n,
            m: *m,
        },
    }
}

/// The `(0, 1)` pairing: component `j` is
/// `{s, t_j} + Σ_β Ms_{jβ} ⋆ t_β`.
pub fn diolic_poisson_bracket(s: &DiolicSymbol0, t: &DiolicSymbol1) -> Result<DiolicSymbol1> {
    check_vars(s.s.n, t.comps.first().map_or(s.s.n, |c| c.n))?;
    if s.ms.len() != t.comps.len() {
        return Err(Error::Dimension(format!("ranks {} and {}", s.ms.len(), t.comps.len())));
    }
    Ok(bracket_0_1(s, t))
}

fn bracket_0_1(s: &DiolicSymbol0, t: &DiolicSymbol1) -> DiolicSymbol1 {
    let k = (s.k + t.k).saturating_sub(1);
    let comps = (0..t.comps.len())
        .map(|j| {
            let mut acc = bracket(&s.s, &t.comps[j]).at_degree(k);
            for (beta, tb) in t.comps.iter().enumerate() {
                acc = &acc + &mul(&s.ms[j][beta], tb).at_degree(k);
            }
            acc
        })
        .collect();
    DiolicSymbol1 { k, comps }
}

/// The `(0, 0)` pairing: `({s, s'}, {s, M'} + {M, s'} + [M, M']⋆)`.
fn bracket_0_0(x: &DiolicSymbol0, y: &DiolicSymbol0) -> DiolicSymbol0 {
    let k = (x.k + y.k).saturating_sub(1);
    let lower = k.saturating_sub(1);
    let m = x.ms.len();
    let n = x.s.n;
    let ms = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if k == 0 {
                        return SymbolPoly::zero(n, 0);
                    }
                    let mut acc = &bracket(&x.s, &y.ms[i][j]).at_degree(lower) + &bracket(&x.ms[i][j], &y.s).at_degree(lower);
                    for l in 0..m {
                        acc = &acc + &mul(&x.ms[i][l], &y.ms[l][j]).at_degree(lower);
                        acc = &acc - &mul(&y.ms[i][l], &x.ms[l][j]).at_degree(lower);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    DiolicSymbol0 {
        k,
        s: bracket(&x.s, &y.s).at_degree(k),
        ms,
    }
}

/// The rank-one `(0, −1)` pairing: `{s, t} − t ⋆ Ms`.
fn bracket_0_neg1(x: &DiolicSymbol0, y: &DiolicSymbolNeg1) -> DiolicSymbolNeg1 {
    let k = (x.k + y.k).saturating_sub(1);
    let lower = k.saturating_sub(1);
    let t = if k == 0 {
        SymbolPoly::zero(x.s.n, 0)
    } else {
        &bracket(&x.s, &y.t).at_degree(lower) - &mul(&y.t, &x.ms[0][0]).at_degree(lower)
    };
    DiolicSymbolNeg1 { k, t }
}

/// The rank-one `(−1, 1)` pairing: `(t ⋆ u, {u, t})`.
fn bracket_neg1_1(x: &DiolicSymbolNeg1, y: &DiolicSymbol1) -> DiolicSymbol0 {
    let k = (x.k + y.k).saturating_sub(1);
    let lower = k.saturating_sub(1);
    let u = &y.comps[0];
    let n = u.n;
    let s = if x.k == 0 { SymbolPoly::zero(n, k) } else { mul(&x.t, u).at_degree(k) };
    let entry = if k == 0 { SymbolPoly::zero(n, 0) } else { bracket(u, &x.t).at_degree(lower) };
    DiolicSymbol0 { k, s, ms: vec![vec![entry]] }
}

/// Graded bracket of diolic symbols, matching the symbol of the graded
/// commutator of any representatives.
pub fn diolic_bracket(x: &DiolicSymbol, y: &DiolicSymbol) -> Result<DiolicSymbol> {
    let (n, m) = (x.n(), x.m());
    check_vars(n, y.n())?;
    if y.m() != m {
        return Err(Error::Dimension(format!("ranks {} and {}", m, y.m())));
    }
    let degree = x.degree() + y.degree();
    Ok(match (x, y) {
        (DiolicSymbol::Zero(a), DiolicSymbol::Zero(b)) => DiolicSymbol::Zero(bracket_0_0(a, b)),
        (DiolicSymbol::Zero(a), DiolicSymbol::One(b)) => DiolicSymbol::One(bracket_0_1(a, b)),
        (DiolicSymbol::Zero(a), DiolicSymbol::Neg1(b)) => DiolicSymbol::Neg1(bracket_0_neg1(a, b)),
        (DiolicSymbol::Neg1(a), DiolicSymbol::One(b)) => DiolicSymbol::Zero(bracket_neg1_1(a, b)),
        // [y, x] = −(−1)^{|x||y|}[x, y]
        (DiolicSymbol::One(_) | DiolicSymbol::Neg1(_), DiolicSymbol::Zero(_)) => diolic_bracket(y, x)?.negate(),
        (DiolicSymbol::One(_), DiolicSymbol::Neg1(_)) => diolic_bracket(y, x)?,
        _ => DiolicSymbol::Trivial { degree, n, m },
    })
}

/// `λᵏ(B)(a_1..a_{k−1})`: the nested `δ_{a_1}⋯δ_{a_{k−1}}` of `□^P`, read
/// as a derivation `X·I + G`. The scalar zero-order term coming from `□^A`
/// is dropped, so the value depends only on the diolic symbol and vanishes
/// for all arguments exactly when `B` has diolic order `k − 1`.
pub fn lambda_k(b: &DiffOp0, args: &[Poly]) -> Result<Der0> {
    let k = b.k();
    if k == 0 || args.len() != (k - 1) as usize {
        return Err(Error::Invalid(format!(
            "order {k} operator takes {} arguments, got {}",
            i64::from(k) - 1,
            args.len()
        )));
    }
    let n = b.n();
    for a in args {
        check_vars(n, a.n())?;
    }
    let mut scalar = b.box_a().clone();
    let mut matrix: MatrixOp = b.matrix_part().clone();
    for a in args {
        scalar = scalar.delta(a);
        matrix = matrix.delta(a);
    }
    let first = scalar.homogeneous_part(1);
    let x = VectorField::new((0..n).map(|i| first.coeff(&MultiIndex::unit(n, i))).collect())?;
    if !matrix.order_at_most(0) {
        return Err(Error::OrderExceeded {
            found: matrix.order().unwrap_or(0),
            bound: 0,
        });
    }
    let g: PolyMat = matrix.zero_order_part();
    Der0::new(x, g)
}

/// Whether `λᵏ(B)` vanishes on all monomial argument tuples of degree ≤ k.
pub fn lambda_k_vanishes(b: &DiffOp0) -> Result<bool> {
    let k = b.k();
    if k == 0 {
        return Err(Error::Invalid("λ needs an operator of order at least 1".into()));
    }
    let monos: Vec<Poly> = crate::poly::monomials_up_to(b.n(), k)
        .into_iter()
        .map(|e| Poly::monomial(e, crate::poly::int(1)))
        .collect();
    let mut tuple = vec![0usize; (k - 1) as usize];
    loop {
        let args: Vec<Poly> = tuple.iter().map(|&i| monos[i].clone()).collect();
        if !lambda_k(b, &args)?.is_zero() {
            return Ok(false);
        }
        // non-decreasing tuples suffice: λ is symmetric
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                return Ok(true);
            }
            pos -= 1;
            if tuple[pos] + 1 < monos.len() {
                tuple[pos] += 1;
                let v = tuple[pos];
                for t in &mut tuple[pos + 1..] {
                    *t = v;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests;
