//! First-order bidifferential brackets of Jacobi type.
//!
//! Coefficients are indexed by slots `0..=n`: slot 0 is the identity and
//! slot `i ≥ 1` is `∂_i`, so `Box^{AA}(a, b) = Σ c_{st} ∂^s a ∂^t b`.

use crate::diffop::{MatrixOp, ScalarOp};
use crate::error::{check_vars, Error, Result};
use crate::poly::{Poly, PolyVec};

use super::schouten::Homog;
use super::{monomials, probe_triples, BiDer0, Report, MAX_WITNESSES};

fn slot(a: &Poly, s: usize) -> Poly {
    if s == 0 {
        a.clone()
    } else {
        a.d(s - 1)
    }
}

fn check_square(c: &[Vec<Poly>], n: usize) -> Result<()> {
    if c.len() != n + 1 || c.iter().any(|r| r.len() != n + 1) {
        return Err(Error::Dimension(format!("coefficient table must be {0}×{0}", n + 1)));
    }
    for row in c {
        for v in row {
            check_vars(n, v.n())?;
        }
    }
    Ok(())
}

fn is_skew(c: &[Vec<Poly>]) -> bool {
    (0..c.len()).all(|s| (0..c.len()).all(|t| c[s][t] == -&c[t][s]))
}

fn bidiff(c: &[Vec<Poly>], a: &Poly, b: &Poly) -> Poly {
    let n = a.n();
    let da: Vec<Poly> = (0..=n).map(|s| slot(a, s)).collect();
    let db: Vec<Poly> = (0..=n).map(|t| slot(b, t)).collect();
    let mut acc = Poly::zero(n);
    for (s, row) in c.iter().enumerate() {
        if da[s].is_zero() {
            continue;
        }
        for (t, coeff) in row.iter().enumerate() {
            if !coeff.is_zero() && !db[t].is_zero() {
                acc += &(&(coeff * &da[s]) * &db[t]);
            }
        }
    }
    acc
}

/// A degree-0 first-order bracket on `𝒜`: `Box^{AA}` by coefficients and
/// `Box^{AP}(a, p) = Σ_s ∂^s(a)·D_s(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiOp0 {
    n: usize,
    m: usize,
    c: Vec<Vec<Poly>>,
    d: Vec<MatrixOp>,
}

impl JacobiOp0 {
    /// Rejects non-skew coefficients and `D` whose second-slot behaviour
    /// does not share the scalar symbol of `Box^{AA}`.
    pub fn new(n: usize, m: usize, c: Vec<Vec<Poly>>, d: Vec<MatrixOp>) -> Result<Self> {
        check_square(&c, n)?;
        if !is_skew(&c) {
            return Err(Error::Invalid("bracket coefficients are not skew".into()));
        }
        if d.len() != n + 1 {
            return Err(Error::Dimension(format!("need {} operators on P", n + 1)));
        }
        for op in &d {
            check_vars(n, op.n())?;
            if op.rows() != m || op.cols() != m {
                return Err(Error::Dimension(format!("operators on P must be {m}×{m}")));
            }
            if !op.order_at_most(1) {
                return Err(Error::OrderExceeded {
                    found: op.order().unwrap_or(0),
                    bound: 1,
                });
            }
        }
        let out = JacobiOp0 { n, m, c, d };
        out.check_shared_symbol()?;
        Ok(out)
    }

    /// Lift of a degree-0 biderivation: `Box(1, −) = 0`.
    pub fn from_poisson(pi: &BiDer0) -> Self {
        let (n, m) = (pi.n(), pi.m());
        let mut c = vec![vec![Poly::zero(n); n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                c[i + 1][j + 1] = pi.bivector().get(i, j).clone();
            }
        }
        let mut d = vec![MatrixOp::zero_square(n, m)];
        for i in 0..n {
            let mut first = ScalarOp::zero(n);
            for j in 0..n {
                first = &first + &ScalarOp::partial(n, j).left_mul(pi.bivector().get(i, j));
            }
            d.push(&MatrixOp::diagonal(&first, m) + &MatrixOp::from_poly_mat(&pi.end_part()[i]));
        }
        JacobiOp0 { n, m, c, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eval_aa(&self, a: &Poly, b: &Poly) -> Poly {
        bidiff(&self.c, a, b)
    }

    pub fn eval_ap(&self, a: &Poly, p: &PolyVec) -> PolyVec {
        let mut acc = PolyVec::zero(self.n, p.m());
        for (s, op) in self.d.iter().enumerate() {
            let da = slot(a, s);
            if !da.is_zero() {
                acc = &acc + &op.apply(p).scale(&da);
            }
        }
        acc
    }

    /// `Box(z1, z2)` on homogeneous arguments; `Box(p, a) = −Box(a, p)` and
    /// `Box(p, q) = 0`.
    pub fn eval(&self, z1: &Homog, z2: &Homog) -> Option<Homog> {
        match (z1, z2) {
            (Homog::A(a), Homog::A(b)) => Some(Homog::A(self.eval_aa(a, b))),
            (Homog::A(a), Homog::P(p)) => Some(Homog::P(self.eval_ap(a, p))),
            (Homog::P(p), Homog::A(a)) => Some(Homog::P(-&self.eval_ap(a, p))),
            (Homog::P(_), Homog::P(_)) => None,
        }
    }

    fn check_shared_symbol(&self) -> Result<()> {
        let one = Poly::one(self.n);
        let monos = monomials(self.n, 2);
        for a in &monos {
            let at_one = self.eval_aa(a, &one);
            for b in &monos {
                let scalar = &self.eval_aa(a, b) - &(b * &at_one);
                for beta in 0..self.m {
                    let p = PolyVec::basis(self.n, self.m, beta);
                    let lhs = &self.eval_ap(a, &p.scale(b)) - &self.eval_ap(a, &p).scale(b);
                    if lhs != p.scale(&scalar) {
                        return Err(Error::Invalid(format!(
                            "operator on P does not share the scalar symbol (a = {a}, b = {b}, p = e{})",
                            beta + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn add(x: Option<Homog>, y: Option<Homog>, negate_y: bool) -> Option<Homog> {
    let y = y.map(|v| if negate_y { v.neg() } else { v });
    match (x, y) {
        (None, y) => y,
        (x, None) => x,
        (Some(Homog::A(a)), Some(Homog::A(b))) => Some(Homog::A(&a + &b)),
        (Some(Homog::P(p)), Some(Homog::P(q))) => Some(Homog::P(&p + &q)),
        _ => unreachable!("degrees agree"),
    }
}

/// `Jac(z1,z2,z3) = B(B(z1,z2),z3) − B(z1,B(z2,z3)) + (−1)^{|z1||z2|} B(z2,B(z1,z3))`;
/// `None` is zero.
pub fn jacobiator0(b: &JacobiOp0, z1: &Homog, z2: &Homog, z3: &Homog) -> Option<Homog> {
    let inner = |x: &Homog, y: &Homog, z: &Homog, outer_first: bool| -> Option<Homog> {
        if outer_first {
            b.eval(x, y).and_then(|v| b.eval(&v, z))
        } else {
            b.eval(y, z).and_then(|v| b.eval(x, &v))
        }
    };
    let t1 = inner(z1, z2, z3, true);
    let t2 = inner(z1, z2, z3, false);
    let t3 = b.eval(z1, z3).and_then(|v| b.eval(z2, &v));
    let sign_odd = (z1.degree() * z2.degree()) % 2 == 1;
    let out = add(add(t1, t2, true), t3, sign_odd);
    out.filter(|v| !v.is_zero())
}

/// Jacobiator on monomial triples of degree ≤ 3 per slot, plus the
/// `(a, b, p)` residual on `a, b ∈ {1, x_i}` and basis sections.
pub fn is_jacobi0(b: &JacobiOp0) -> Report {
    let (n, m) = (b.n, b.m);
    let mut report = Report::default();
    let mut witnesses = 0;
    for [z1, z2, z3] in probe_triples(n, m, 3) {
        if let Some(v) = jacobiator0(b, &z1, &z2, &z3) {
            let label = format!("jacobi({z1}, {z2}, {z3})");
            match v {
                Homog::A(a) => report.push(&label, vec![], a),
                Homog::P(p) => report.push_vec(&label, vec![], &p),
            }
            witnesses += 1;
            if witnesses == MAX_WITNESSES {
                break;
            }
        }
    }
    let mut coords = vec![Poly::one(n)];
    coords.extend((0..n).map(|i| Poly::var(n, i)));
    for (s, a) in coords.iter().enumerate() {
        for (t, c) in coords.iter().enumerate() {
            for beta in 0..m {
                let p = PolyVec::basis(n, m, beta);
                let value = &(&b.eval_ap(&b.eval_aa(a, c), &p) - &b.eval_ap(a, &b.eval_ap(c, &p))) + &b.eval_ap(c, &b.eval_ap(a, &p));
                report.push_vec("diolic-jacobi", vec![s, t, beta], &value);
            }
        }
    }
    report
}

/// Degree −1 bracket on rank-one `P`: `{f p₀, g p₀} = J(f, g) p₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiNeg1 {
    n: usize,
    c: Vec<Vec<Poly>>,
}

impl JacobiNeg1 {
    pub fn new(n: usize, m: usize, c: Vec<Vec<Poly>>) -> Result<Self> {
        if m != 1 {
            return Err(Error::RankNotOne(m));
        }
        check_square(&c, n)?;
        Ok(JacobiNeg1 { n, c })
    }

    pub fn eval(&self, f: &Poly, g: &Poly) -> Poly {
        bidiff(&self.c, f, g)
    }

    pub fn is_skew(&self) -> bool {
        is_skew(&self.c)
    }

    pub fn jacobiator(&self, f: &Poly, g: &Poly, h: &Poly) -> Poly {
        let j = |a: &Poly, b: &Poly| self.eval(a, b);
        &(&j(&j(f, g), h) + &j(&j(g, h), f)) + &j(&j(h, f), g)
    }
}

/// Skew and Jacobi on monomials of degree ≤ 3.
pub fn is_jacobi_neg1(j: &JacobiNeg1) -> Report {
    let mut report = Report::default();
    if !j.is_skew() {
        for s in 0..j.c.len() {
            for t in s..j.c.len() {
                report.push("skew", vec![s, t], &j.c[s][t] + &j.c[t][s]);
            }
        }
        return report;
    }
    let monos = monomials(j.n, 3);
    let mut witnesses = 0;
    for a in 0..monos.len() {
        for b in a + 1..monos.len() {
            for c in b + 1..monos.len() {
                let (f, g, h) = (&monos[a], &monos[b], &monos[c]);
                let value = j.jacobiator(f, g, h);
                if !value.is_zero() {
                    report.push(&format!("jacobi({f}, {g}, {h})"), vec![], value);
                    witnesses += 1;
                    if witnesses == MAX_WITNESSES {
                        return report;
                    }
                }
            }
        }
    }
    report
}
