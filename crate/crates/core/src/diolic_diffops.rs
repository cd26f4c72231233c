//! Graded diolic differential operators of degrees −1, 0, 1.
//!
//! A degree-0 operator of order `k` is stored as `(□^A, M)` with
//! `□^P = □^A·I + M` and `M` of order ≤ k−1, so the shared scalar symbol is a
//! representation invariant rather than something to re-check.

use std::collections::BTreeMap;

use num_traits::One;

use crate::diffop::{delta_nest_value, slot_tuples, vector_probes, MatrixOp, Probe, ScalarOp};
use crate::diole::DiolicElement;
use crate::error::{check_vars, Error, Result};
use crate::poly::{monomials_up_to, MultiIndex, Poly, PolyVec, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp0 {
    k: u32,
    box_a: ScalarOp,
    m_part: MatrixOp,
}

fn check_order(found: Option<u32>, bound: i64) -> Result<()> {
    match found {
        Some(o) if i64::from(o) > bound => Err(Error::OrderExceeded {
            found: o,
            bound: bound.max(0) as u32,
        }),
        _ => Ok(()),
    }
}

impl DiffOp0 {
    pub fn new(k: u32, box_a: ScalarOp, m_part: MatrixOp) -> Result<Self> {
        check_vars(box_a.n(), m_part.n())?;
        if m_part.rows() != m_part.cols() {
            return Err(Error::Dimension("matrix part must be square".into()));
        }
        check_order(box_a.order(), i64::from(k))?;
        check_order(m_part.order(), i64::from(k) - 1)?;
        Ok(DiffOp0 { k, box_a, m_part })
    }

    /// Builds from the raw pair `(□^A, □^P)`, rejecting pairs whose scalar
    /// symbols differ.
    pub fn from_pair(k: u32, box_a: ScalarOp, box_p: MatrixOp) -> Result<Self> {
        if !verify_diolic_diffop(&box_a, &box_p, k)? {
            return Err(Error::Invalid(format!(
                "operator on P differs from the scalar operator at order {k}"
            )));
        }
        let m_part = &box_p - &MatrixOp::diagonal(&box_a, box_p.rows());
        DiffOp0::new(k, box_a, m_part)
    }

    pub fn zero(n: usize, m: usize, k: u32) -> Self {
        DiffOp0 {
            k,
            box_a: ScalarOp::zero(n),
            m_part: MatrixOp::zero_square(n, m),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.box_a.n()
    }

    pub fn m(&self) -> usize {
        self.m_part.rows()
    }

    pub fn box_a(&self) -> &ScalarOp {
        &self.box_a
    }

    pub fn matrix_part(&self) -> &MatrixOp {
        &self.m_part
    }

    pub fn box_p(&self) -> MatrixOp {
        &MatrixOp::diagonal(&self.box_a, self.m()) + &self.m_part
    }

    pub fn is_zero(&self) -> bool {
        self.box_a.is_zero() && self.m_part.is_zero()
    }

    /// The same operator viewed in a higher order filtration step.
    pub fn embed(&self, k: u32) -> Result<Self> {
        DiffOp0::new(k, self.box_a.clone(), self.m_part.clone())
    }

    pub fn apply(&self, e: &DiolicElement) -> Result<DiolicElement> {
        check_vars(self.n(), e.n())?;
        if e.m() != self.m() {
            return Err(Error::Dimension(format!("rank {} element for rank {} operator", e.m(), self.m())));
        }
        Ok(self.apply_unchecked(e))
    }

    fn apply_unchecked(&self, e: &DiolicElement) -> DiolicElement {
        DiolicElement {
            a: self.box_a.apply(&e.a),
            p: &e.p.map(|c| self.box_a.apply(c)) + &self.m_part.apply(&e.p),
        }
    }
}

/// `a ↦ Σ ops^α(a) e_α`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp1 {
    k: u32,
    n: usize,
    ops: Vec<ScalarOp>,
}

impl DiffOp1 {
    pub fn new(k: u32, n: usize, ops: Vec<ScalarOp>) -> Result<Self> {
        for op in &ops {
            check_vars(n, op.n())?;
            check_order(op.order(), i64::from(k))?;
        }
        Ok(DiffOp1 { k, n, ops })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[ScalarOp] {
        &self.ops
    }

    pub fn is_zero(&self) -> bool {
        self.ops.iter().all(ScalarOp::is_zero)
    }

    pub fn apply(&self, a: &Poly) -> PolyVec {
        PolyVec::new(self.n, self.ops.iter().map(|op| op.apply(a)).collect()).expect("same n")
    }
}

/// An operator `P → A` for rank-one `P`; graded order `k` allows a scalar
/// operator of order ≤ k−1 (so order 1 matches the degree −1 derivations).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOpNeg1 {
    k: u32,
    op: ScalarOp,
}

impl DiffOpNeg1 {
    pub fn new(k: u32, ops: Vec<ScalarOp>) -> Result<Self> {
        if ops.len() != 1 {
            return Err(Error::RankNotOne(ops.len()));
        }
        let op = ops.into_iter().next().unwrap();
        check_order(op.order(), i64::from(k) - 1)?;
        Ok(DiffOpNeg1 { k, op })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.op.n()
    }

    pub fn op(&self) -> &ScalarOp {
        &self.op
    }

    pub fn apply(&self, p: &PolyVec) -> Poly {
        self.op.apply(p.get(0))
    }
}

/// A homogeneous graded operator; degrees outside −1..=1 are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DiffOp {
    Neg1(DiffOpNeg1),
    Zero(DiffOp0),
    One(DiffOp1),
    Trivial { degree: i32, n: usize, m: usize },
}

impl DiffOp {
    pub fn degree(&self) -> i32 {
        match self {
            DiffOp::Neg1(_) => -1,
            DiffOp::Zero(_) => 0,
            DiffOp::One(_) => 1,
            DiffOp::Trivial { degree, .. } => *degree,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            DiffOp::Neg1(b) => b.n(),
            DiffOp::Zero(b) => b.n(),
            DiffOp::One(b) => b.n(),
            DiffOp::Trivial { n, .. } => *n,
        }
    }

    pub fn m(&self) -> usize {
        match self {
            DiffOp::Neg1(_) => 1,
            DiffOp::Zero(b) => b.m(),
            DiffOp::One(b) => b.m(),
            DiffOp::Trivial { m, .. } => *m,
        }
    }

    /// Order bound; zero for the trivial degrees.
    pub fn k(&self) -> u32 {
        match self {
            DiffOp::Neg1(b) => b.k,
            DiffOp::Zero(b) => b.k,
            DiffOp::One(b) => b.k,
            DiffOp::Trivial { .. } => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DiffOp::Neg1(b) => b.op.is_zero(),
            DiffOp::Zero(b) => b.is_zero(),
            DiffOp::One(b) => b.is_zero(),
            DiffOp::Trivial { .. } => true,
        }
    }

    /// Action on `𝒜` as a linear map.
    pub fn apply(&self, e: &DiolicElement) -> DiolicElement {
        match self {
            DiffOp::Zero(b) => b.apply_unchecked(e),
            DiffOp::One(b) => DiolicElement::odd(b.apply(&e.a)),
            DiffOp::Neg1(b) => DiolicElement::even(b.apply(&e.p), 1),
            DiffOp::Trivial { .. } => DiolicElement::zero(e.n(), e.m()),
        }
    }
}

/// Whether `δ_{a_1}⋯δ_{a_k}(□^A)·p = δ_{a_1}⋯δ_{a_k}(□^P)(p)` on coordinate
/// nests and monomial probes, cross-checked against the coefficient test
/// that `□^P − □^A·I` has order ≤ k−1.
pub fn verify_diolic_diffop(box_a: &ScalarOp, box_p: &MatrixOp, k: u32) -> Result<bool> {
    let n = box_a.n();
    check_vars(n, box_p.n())?;
    if box_p.rows() != box_p.cols() {
        return Err(Error::Dimension("operator on P must be square".into()));
    }
    check_order(box_a.order(), i64::from(k))?;
    check_order(box_p.order(), i64::from(k))?;
    let m = box_p.rows();
    let lifted = MatrixOp::diagonal(box_a, m);

    let d = (k + 1).max(box_a.support_order()).max(box_p.support_order());
    let probes = vector_probes(n, m, d);
    let by_deltas = slot_tuples(n, k as usize).into_iter().all(|tuple| {
        let factors: Vec<Poly> = tuple.iter().map(|&i| Poly::var(n, i)).collect();
        probes
            .iter()
            .all(|p| delta_nest_value(&lifted, &factors, p) == delta_nest_value(box_p, &factors, p))
    });
    let by_coefficients = (box_p - &lifted).order_at_most(i64::from(k) - 1);
    debug_assert_eq!(by_deltas, by_coefficients, "δ-nest and coefficient checks disagree");
    Ok(by_coefficients && by_deltas)
}

/// `[B, B'] = B∘B' − (−1)^{gh} B'∘B` in closed form.
pub fn graded_commutator_diff(b1: &DiffOp, b2: &DiffOp) -> Result<DiffOp> {
    let (n, m) = (b1.n(), b1.m());
    check_vars(n, b2.n())?;
    if b2.m() != m {
        return Err(Error::Dimension(format!("ranks {} and {}", m, b2.m())));
    }
    let order = (b1.k() + b2.k()).saturating_sub(1);
    let out = match (b1, b2) {
        (DiffOp::Zero(x), DiffOp::Zero(y)) => {
            let a = x.box_a.commutator(&y.box_a);
            let xi = MatrixOp::diagonal(&x.box_a, m);
            let yi = MatrixOp::diagonal(&y.box_a, m);
            let mm = &(&xi.commutator(&y.m_part) + &x.m_part.commutator(&yi)) + &x.m_part.commutator(&y.m_part);
            DiffOp::Zero(DiffOp0::new(order, a, mm)?)
        }
        (DiffOp::Zero(x), DiffOp::One(z)) => DiffOp::One(zero_one(x, z, order)?),
        (DiffOp::One(z), DiffOp::Zero(x)) => {
            let r = zero_one(x, z, order)?;
            DiffOp::One(DiffOp1 {
                ops: r.ops.iter().map(|o| -o).collect(),
                ..r
            })
        }
        (DiffOp::Zero(x), DiffOp::Neg1(v)) => DiffOp::Neg1(zero_neg1(x, v, order)?),
        (DiffOp::Neg1(v), DiffOp::Zero(x)) => {
            let r = zero_neg1(x, v, order)?;
            DiffOp::Neg1(DiffOpNeg1 { op: -&r.op, ..r })
        }
        (DiffOp::Neg1(v), DiffOp::One(z)) | (DiffOp::One(z), DiffOp::Neg1(v)) => {
            // ν∘Z on A and Z∘ν on P
            let box_a = v.op.compose(&z.ops[0]);
            let box_p = z.ops[0].compose(&v.op);
            let mm = MatrixOp::diagonal(&(&box_p - &box_a), 1);
            DiffOp::Zero(DiffOp0::new(order, box_a, mm)?)
        }
        _ => DiffOp::Trivial {
            degree: b1.degree() + b2.degree(),
            n,
            m,
        },
    };
    debug_assert!(
        commutator_matches_composition(b1, b2, &out),
        "closed-form commutator disagrees with composition"
    );
    Ok(out)
}

fn zero_one(x: &DiffOp0, z: &DiffOp1, order: u32) -> Result<DiffOp1> {
    let ops = (0..z.m())
        .map(|j| {
            let mut op = x.box_a.commutator(&z.ops[j]);
            for beta in 0..z.m() {
                op = &op + &x.m_part.entry(j, beta).compose(&z.ops[beta]);
            }
            op
        })
        .collect();
    DiffOp1::new(order, z.n, ops)
}

fn zero_neg1(x: &DiffOp0, v: &DiffOpNeg1, order: u32) -> Result<DiffOpNeg1> {
    let op = &x.box_a.commutator(&v.op) - &v.op.compose(x.m_part.entry(0, 0));
    DiffOpNeg1::new(order, vec![op])
}

/// Elements `(x^μ, 0)` and `(0, x^μ e_β)` with `|μ| ≤ d`.
pub fn operator_probes(n: usize, m: usize, d: u32) -> Vec<DiolicElement> {
    let mut out = Vec::new();
    for mu in monomials_up_to(n, d) {
        let x = Poly::monomial(mu, Rational::one());
        out.push(DiolicElement::even(x.clone(), m));
        for beta in 0..m {
            out.push(DiolicElement::odd(PolyVec::basis(n, m, beta).scale(&x)));
        }
    }
    out
}

/// Values of `op` on the probes of degree ≤ `d`.
pub fn values_on_probes(op: &DiffOp, n: usize, m: usize, d: u32) -> Vec<DiolicElement> {
    operator_probes(n, m, d).iter().map(|e| op.apply(e)).collect()
}

/// Compose-and-subtract oracle for [`graded_commutator_diff`].
pub fn commutator_matches_composition(b1: &DiffOp, b2: &DiffOp, result: &DiffOp) -> bool {
    let (n, m) = (b1.n(), b1.m());
    let odd = (b1.degree() * b2.degree()).rem_euclid(2) == 1;
    operator_probes(n, m, b1.k() + b2.k()).iter().all(|e| {
        let first = b1.apply(&b2.apply(e));
        let second = b2.apply(&b1.apply(e));
        let expected = if odd { &first + &second } else { &first - &second };
        result.apply(e) == expected
    })
}

/// The symbol-level projection `□^A·I + M ↦ □^A`.
pub fn atiyah_project(b: &DiffOp0) -> ScalarOp {
    b.box_a.clone()
}

/// The diagonal section `□ ↦ (□, 0)`.
pub fn atiyah_split(op: &ScalarOp, k: u32, m: usize) -> Result<DiffOp0> {
    DiffOp0::new(k, op.clone(), MatrixOp::zero_square(op.n(), m))
}

/// Checks a `k`-connection given on the generators `∂^σ`, `1 ≤ |σ| ≤ k`:
/// each value must project to `∂^σ` and annihilate the unit `(1, 0)`.
pub fn check_k_connection(nabla: &BTreeMap<MultiIndex, DiffOp0>, n: usize, m: usize, k: u32) -> Result<bool> {
    let unit = DiolicElement::even(Poly::one(n), m);
    let mut ok = true;
    for sigma in monomials_up_to(n, k).into_iter().filter(|s| s.degree() >= 1) {
        let value = nabla
            .get(&sigma)
            .ok_or_else(|| Error::MissingGenerator(format!("{:?}", sigma.entries())))?;
        if value.k() > k {
            return Err(Error::OrderExceeded { found: value.k(), bound: k });
        }
        let section = atiyah_project(value) == ScalarOp::derivative(sigma.clone());
        let unital = value.apply(&unit)?.is_zero();
        ok &= section && unital;
    }
    Ok(ok)
}

/// `p ⊗ B ↦ (a ↦ □^A(a)·p)`.
pub fn beta_diff(p: &PolyVec, b: &DiffOp0) -> Result<DiffOp1> {
    check_vars(p.n(), b.n())?;
    if p.m() != b.m() {
        return Err(Error::Dimension(format!("rank {} section for rank {} operator", p.m(), b.m())));
    }
    DiffOp1::new(b.k, b.n(), p.comps().iter().map(|c| b.box_a.left_mul(c)).collect())
}
