//! Graded biderivations of `𝒜` in degrees −2..=1 and the structure checks
//! built on them: Poisson, Lie algebroid, Jacobi.

mod algebroid;
mod jacobi;
mod schouten;

use std::fmt;

use crate::error::{check_vars, Error, Result};
use crate::poly::{monomials_up_to, Poly, PolyMat, PolyVec, Rational};

pub use algebroid::{is_lie_algebroid, BiDerNeg1};
pub use jacobi::{is_jacobi0, is_jacobi_neg1, jacobiator0, JacobiNeg1, JacobiOp0};
pub use schouten::{schouten_eval, schouten_self_eval, Homog, Multi};

/// Probe sweeps stop after this many failing probes.
pub const MAX_WITNESSES: usize = 8;

/// One nonzero residual of a structure equation; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub equation: String,
    pub indices: Vec<usize>,
    pub value: Poly,
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return write!(f, "{}: {}", self.equation, self.value);
        }
        let idx: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}[{}]: {}", self.equation, idx.join(","), self.value)
    }
}

/// Outcome of a structure check. `residuals` decides the verdict; `notes`
/// carries informational values that do not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub residuals: Vec<Residual>,
    pub notes: Vec<Residual>,
}

impl Report {
    pub fn holds(&self) -> bool {
        self.residuals.is_empty()
    }

    pub(crate) fn push(&mut self, equation: &str, indices: Vec<usize>, value: Poly) {
        if !value.is_zero() {
            self.residuals.push(Residual {
                equation: equation.to_string(),
                indices,
                value,
            });
        }
    }

    pub(crate) fn push_vec(&mut self, equation: &str, indices: Vec<usize>, value: &PolyVec) {
        for (alpha, c) in value.comps().iter().enumerate() {
            let mut idx = indices.clone();
            idx.push(alpha);
            self.push(equation, idx, c.clone());
        }
    }
}

fn check_skew(mat: &PolyMat, what: &str) -> Result<()> {
    for i in 0..mat.rows() {
        for j in 0..mat.cols() {
            if mat.get(i, j) != &-mat.get(j, i) {
                return Err(Error::Invalid(format!("{what} is not antisymmetric at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

/// Skew matrix from the strict upper triangle, row by row:
/// `rows[i]` lists `Π^{i,j}` for `j > i`.
pub fn skew_from_upper(n: usize, rows: &[Vec<Poly>]) -> Result<PolyMat> {
    if rows.len() + 1 < n || rows.len() > n {
        return Err(Error::Dimension(format!("expected {} upper-triangle rows", n.saturating_sub(1))));
    }
    let mut out = PolyMat::zero_square(n, n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n - i - 1 {
            return Err(Error::Dimension(format!("row {} needs {} entries", i + 1, n - i - 1)));
        }
        for (off, v) in row.iter().enumerate() {
            check_vars(n, v.n())?;
            let j = i + 1 + off;
            out.set(i, j, v.clone());
            out.set(j, i, -v);
        }
    }
    Ok(out)
}

/// `P`-valued bivector `(a, b) ↦ Σ Π^{ij,α} ∂_i a ∂_j b e_α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiDer1 {
    n: usize,
    /// One skew `n × n` matrix per basis section.
    pi: Vec<PolyMat>,
}

impl BiDer1 {
    pub fn new(n: usize, pi: Vec<PolyMat>) -> Result<Self> {
        for t in &pi {
            check_vars(n, t.n())?;
            if t.rows() != n || t.cols() != n {
                return Err(Error::Dimension("bivector components must be n×n".into()));
            }
            check_skew(t, "bivector")?;
        }
        Ok(BiDer1 { n, pi })
    }

    pub fn m(&self) -> usize {
        self.pi.len()
    }

    pub fn eval(&self, a: &Poly, b: &Poly) -> PolyVec {
        let da: Vec<Poly> = (0..self.n).map(|i| a.d(i)).collect();
        let db: Vec<Poly> = (0..self.n).map(|j| b.d(j)).collect();
        let comps = self.pi.iter().map(|t| pairing(t, &da, &db)).collect();
        PolyVec::from_vec(self.n, comps)
    }

    pub fn as_multi(&self) -> Multi {
        let me = self.clone();
        Multi::new(2, 1, move |args| match (&args[0], &args[1]) {
            (Homog::A(a), Homog::A(b)) => Some(Homog::P(me.eval(a, b))),
            _ => None,
        })
    }
}

fn pairing(t: &PolyMat, da: &[Poly], db: &[Poly]) -> Poly {
    let mut acc = Poly::zero(t.n());
    for (i, ai) in da.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in db.iter().enumerate() {
            let c = t.get(i, j);
            if !c.is_zero() && !bj.is_zero() {
                acc += &(&(c * ai) * bj);
            }
        }
    }
    acc
}

/// Degree-0 biderivation `(Π^{ij}, Π^{iα}_β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiDer0 {
    pi_aa: PolyMat,
    /// `pi_end[i]` is the matrix `Π^{i}` acting on sections.
    pi_end: Vec<PolyMat>,
}

impl BiDer0 {
    pub fn new(pi_aa: PolyMat, pi_end: Vec<PolyMat>) -> Result<Self> {
        let n = pi_aa.n();
        if pi_aa.rows() != n || pi_aa.cols() != n {
            return Err(Error::Dimension("bivector must be n×n".into()));
        }
        check_skew(&pi_aa, "bivector")?;
        if pi_end.len() != n {
            return Err(Error::Dimension(format!("endomorphism part needs {n} matrices")));
        }
        let m = pi_end.first().map_or(0, PolyMat::rows);
        for t in &pi_end {
            check_vars(n, t.n())?;
            if t.rows() != m || t.cols() != m {
                return Err(Error::Dimension("endomorphism part must be n square matrices of one size".into()));
            }
        }
        Ok(BiDer0 { pi_aa, pi_end })
    }

    /// Pure bivector with zero endomorphism part on rank `m`.
    pub fn from_bivector(pi_aa: PolyMat, m: usize) -> Result<Self> {
        let n = pi_aa.n();
        BiDer0::new(pi_aa, vec![PolyMat::zero_square(n, m); n])
    }

    pub fn n(&self) -> usize {
        self.pi_aa.n()
    }

    pub fn m(&self) -> usize {
        self.pi_end.first().map_or(0, PolyMat::rows)
    }

    pub fn bivector(&self) -> &PolyMat {
        &self.pi_aa
    }

    pub fn end_part(&self) -> &[PolyMat] {
        &self.pi_end
    }

    pub fn eval_aa(&self, a: &Poly, b: &Poly) -> Poly {
        let n = self.n();
        let da: Vec<Poly> = (0..n).map(|i| a.d(i)).collect();
        let db: Vec<Poly> = (0..n).map(|j| b.d(j)).collect();
        pairing(&self.pi_aa, &da, &db)
    }

    /// `Σ_i ∂_i a·(Σ_j Π^{ij}∂_j p + Π^i p)`.
    pub fn eval_ap(&self, a: &Poly, p: &PolyVec) -> PolyVec {
        let n = self.n();
        let mut acc = PolyVec::zero(n, p.m());
        for i in 0..n {
            let ai = a.d(i);
            if ai.is_zero() {
                continue;
            }
            let mut v = self.pi_end[i].apply(p);
            for j in 0..n {
                let c = self.pi_aa.get(i, j);
                if !c.is_zero() {
                    v = &v + &p.map(|x| x.d(j)).scale(c);
                }
            }
            acc = &acc + &v.scale(&ai);
        }
        acc
    }

    /// Checked form of [`BiDer0::eval_aa`] / [`BiDer0::eval_ap`].
    pub fn eval(&self, a: &Poly, z: &Homog) -> Result<Homog> {
        check_vars(self.n(), a.n())?;
        match z {
            Homog::A(b) => {
                check_vars(self.n(), b.n())?;
                Ok(Homog::A(self.eval_aa(a, b)))
            }
            Homog::P(p) => {
                check_vars(self.n(), p.n())?;
                if p.m() != self.m() {
                    return Err(Error::Dimension(format!("rank {} section for rank {}", p.m(), self.m())));
                }
                Ok(Homog::P(self.eval_ap(a, p)))
            }
        }
    }

    /// The biderivation as a Schouten leaf; `Π(p)(b) = −Π(b)(p)`.
    pub fn as_multi(&self) -> Multi {
        let me = self.clone();
        Multi::new(2, 0, move |args| match (&args[0], &args[1]) {
            (Homog::A(a), Homog::A(b)) => Some(Homog::A(me.eval_aa(a, b))),
            (Homog::A(a), Homog::P(p)) => Some(Homog::P(me.eval_ap(a, p))),
            (Homog::P(p), Homog::A(b)) => Some(Homog::P(-&me.eval_ap(b, p))),
            _ => None,
        })
    }
}

/// Symmetric pairing `(p, q) ↦ g·p·q` on rank-one `P` (degree −2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiDerNeg2 {
    g: Poly,
}

impl BiDerNeg2 {
    pub fn new(g: Poly, m: usize) -> Result<Self> {
        if m != 1 {
            return Err(Error::RankNotOne(m));
        }
        Ok(BiDerNeg2 { g })
    }

    pub fn eval(&self, p: &PolyVec, q: &PolyVec) -> Result<Poly> {
        check_vars(self.g.n(), p.n())?;
        check_vars(self.g.n(), q.n())?;
        if p.m() != 1 || q.m() != 1 {
            return Err(Error::RankNotOne(p.m().max(q.m())));
        }
        Ok(&(&self.g * p.get(0)) * q.get(0))
    }

    pub fn as_multi(&self) -> Multi {
        let g = self.g.clone();
        Multi::new(2, -2, move |args| match (&args[0], &args[1]) {
            (Homog::P(p), Homog::P(q)) => Some(Homog::A(&(&g * p.get(0)) * q.get(0))),
            _ => None,
        })
    }
}

/// Residuals of the degree-0 Poisson equations:
///
/// * `usual`: `Σ_ℓ Π^{iℓ}∂_ℓΠ^{jk} + cyclic` for `i < j < k`;
/// * `diolic`: `Σ_i (Π^i ∂_iΠ^{jk} + Π^{ij}∂_iΠ^k − Π^{ik}∂_iΠ^j) − [Π^j, Π^k]`
///   entrywise for `j < k`;
/// * `flatness`: `{x_j,{x_k,e_β}} − {x_k,{x_j,e_β}} − {{x_j,x_k},e_β}`.
///
/// The diolic residual without the commutator term is listed under
/// `notes` whenever it is nonzero.
pub fn is_poisson0(pi: &BiDer0) -> Report {
    let (n, m) = (pi.n(), pi.m());
    let w = &pi.pi_aa;
    let mut report = Report::default();
    let d = |p: &Poly, l: usize| p.d(l);

    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut acc = Poly::zero(n);
                for l in 0..n {
                    acc += &(w.get(i, l) * &d(w.get(j, k), l));
                    acc += &(w.get(j, l) * &d(w.get(k, i), l));
                    acc += &(w.get(k, l) * &d(w.get(i, j), l));
                }
                report.push("usual", vec![i, j, k], acc);
            }
        }
    }

    for j in 0..n {
        for k in j + 1..n {
            let mut printed = PolyMat::zero_square(n, m);
            for i in 0..n {
                let term = &(&pi.pi_end[i].map(|e| e * &d(w.get(j, k), i)) + &pi.pi_end[k].map(|e| w.get(i, j) * &d(e, i)))
                    - &pi.pi_end[j].map(|e| w.get(i, k) * &d(e, i));
                printed = &printed + &term;
            }
            let corrected = &printed - &pi.pi_end[j].commutator(&pi.pi_end[k]);
            for alpha in 0..m {
                for beta in 0..m {
                    report.push("diolic", vec![j, k, alpha, beta], corrected.get(alpha, beta).clone());
                    let note = printed.get(alpha, beta);
                    if !note.is_zero() && note != corrected.get(alpha, beta) {
                        report.notes.push(Residual {
                            equation: "diolic-without-commutator".into(),
                            indices: vec![j, k, alpha, beta],
                            value: note.clone(),
                        });
                    }
                }
            }
        }
    }

    for j in 0..n {
        for k in j + 1..n {
            let (xj, xk) = (Poly::var(n, j), Poly::var(n, k));
            for beta in 0..m {
                let e = PolyVec::basis(n, m, beta);
                let lhs = &pi.eval_ap(&xj, &pi.eval_ap(&xk, &e)) - &pi.eval_ap(&xk, &pi.eval_ap(&xj, &e));
                let value = &lhs - &pi.eval_ap(&pi.eval_aa(&xj, &xk), &e);
                report.push_vec("flatness", vec![j, k, beta], &value);
            }
        }
    }
    report
}

/// Monomial probes `x^μ` with `|μ| ≤ d`.
pub(crate) fn monomials(n: usize, d: u32) -> Vec<Poly> {
    monomials_up_to(n, d)
        .into_iter()
        .map(|e| Poly::monomial(e, Rational::from_integer(1.into())))
        .collect()
}

/// Triples with at most one entry in `P`, up to graded skew-symmetry:
/// increasing triples of monomials, and increasing pairs followed by a
/// section probe `x^μ e_β`.
pub(crate) fn probe_triples(n: usize, m: usize, d: u32) -> Vec<[Homog; 3]> {
    let monos = monomials(n, d);
    let mut out = Vec::new();
    for i in 0..monos.len() {
        for j in i + 1..monos.len() {
            for k in j + 1..monos.len() {
                out.push([Homog::A(monos[i].clone()), Homog::A(monos[j].clone()), Homog::A(monos[k].clone())]);
            }
            for mu in &monos {
                for beta in 0..m {
                    out.push([
                        Homog::A(monos[i].clone()),
                        Homog::A(monos[j].clone()),
                        Homog::P(PolyVec::basis(n, m, beta).scale(mu)),
                    ]);
                }
            }
        }
    }
    out
}

/// Whether `[[Π, Π]]` vanishes on every probe triple of degree ≤ `d`.
pub fn schouten_vanishes(pi: &Multi, n: usize, m: usize, d: u32) -> bool {
    probe_triples(n, m, d)
        .iter()
        .all(|[a, b, c]| schouten_self_eval(pi, a, b, c).is_none())
}
