//! Degree −1 biderivations as anchored brackets on `P`.

use crate::diffop::VectorField;
use crate::diole::Der0;
use crate::error::{check_vars, Error, Result};
use crate::poly::{Poly, PolyMat, PolyVec};

use super::schouten::{Homog, Multi};
use super::{monomials, Report, MAX_WITNESSES};

/// `e_α ↦ (ρ_α, C_α)` with `(C_α)_{γβ} = c^γ_{αβ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiDerNeg1 {
    n: usize,
    rho: Vec<VectorField>,
    /// `structure[α][β]` is `[e_α, e_β]` as a section.
    structure: Vec<Vec<PolyVec>>,
}

impl BiDerNeg1 {
    /// `anchor[α]` lists `ρ^i_α`; `c[α][β][γ] = c^γ_{αβ}`.
    pub fn new(n: usize, anchor: Vec<Vec<Poly>>, c: Vec<Vec<Vec<Poly>>>) -> Result<Self> {
        let m = anchor.len();
        let rho = anchor.into_iter().map(VectorField::new).collect::<Result<Vec<_>>>()?;
        for v in &rho {
            check_vars(n, v.n())?;
        }
        if c.len() != m || c.iter().any(|row| row.len() != m || row.iter().any(|v| v.len() != m)) {
            return Err(Error::Dimension(format!("structure functions must be {m}×{m}×{m}")));
        }
        let structure: Vec<Vec<PolyVec>> = c
            .into_iter()
            .map(|row| row.into_iter().map(|v| PolyVec::new(n, v)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        for a in 0..m {
            for b in 0..m {
                if structure[a][b] != -&structure[b][a] {
                    return Err(Error::Invalid(format!(
                        "structure functions not antisymmetric in ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(BiDerNeg1 { n, rho, structure })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rho.len()
    }

    pub fn anchor(&self, p: &PolyVec) -> VectorField {
        let mut acc = VectorField::zero(self.n);
        for (alpha, v) in self.rho.iter().enumerate() {
            let c = p.get(alpha);
            if !c.is_zero() {
                acc = &acc + &v.scale(c);
            }
        }
        acc
    }

    /// `e_α` viewed as a degree-0 derivation.
    pub fn component(&self, alpha: usize) -> Der0 {
        let m = self.m();
        let g = PolyMat::from_fn(self.n, m, m, |gamma, beta| self.structure[alpha][beta].get(gamma).clone());
        Der0::new(self.rho[alpha].clone(), g).expect("consistent dimensions")
    }

    /// `[p, q] = Σ p^α q^β c_{αβ} + ρ(p)(q^β) e_β − ρ(q)(p^α) e_α`.
    pub fn bracket(&self, p: &PolyVec, q: &PolyVec) -> PolyVec {
        let m = self.m();
        let mut acc = &q.map(|c| self.anchor(p).apply(c)) - &p.map(|c| self.anchor(q).apply(c));
        for a in 0..m {
            if p.get(a).is_zero() {
                continue;
            }
            for b in 0..m {
                let coeff = p.get(a) * q.get(b);
                if !coeff.is_zero() {
                    acc = &acc + &self.structure[a][b].scale(&coeff);
                }
            }
        }
        acc
    }

    pub fn checked_bracket(&self, p: &PolyVec, q: &PolyVec) -> Result<PolyVec> {
        for v in [p, q] {
            check_vars(self.n, v.n())?;
            if v.m() != self.m() {
                return Err(Error::Dimension(format!("rank {} section for rank {}", v.m(), self.m())));
            }
        }
        Ok(self.bracket(p, q))
    }

    pub fn as_multi(&self) -> Multi {
        let me = self.clone();
        Multi::new(2, -1, move |args| match (&args[0], &args[1]) {
            (Homog::P(p), Homog::P(q)) => Some(Homog::P(me.bracket(p, q))),
            (Homog::P(p), Homog::A(a)) => Some(Homog::A(me.anchor(p).apply(a))),
            (Homog::A(a), Homog::P(p)) => Some(Homog::A(-me.anchor(p).apply(a))),
            _ => None,
        })
    }
}

/// Jacobi identity on triples `x^μ e_α` with `|μ| ≤ 2`, and the anchor
/// morphism `ρ([e_α, e_β]) = [ρ_α, ρ_β]`.
pub fn is_lie_algebroid(l: &BiDerNeg1) -> Report {
    let (n, m) = (l.n, l.m());
    let mut report = Report::default();
    let mut probes = Vec::new();
    for mu in monomials(n, 2) {
        for alpha in 0..m {
            probes.push(PolyVec::basis(n, m, alpha).scale(&mu));
        }
    }
    let mut witnesses = 0;
    'outer: for i in 0..probes.len() {
        for j in i + 1..probes.len() {
            for k in j + 1..probes.len() {
                let (p, q, r) = (&probes[i], &probes[j], &probes[k]);
                let jac = &(&l.bracket(p, &l.bracket(q, r)) + &l.bracket(q, &l.bracket(r, p))) + &l.bracket(r, &l.bracket(p, q));
                if !jac.is_zero() {
                    report.push_vec(&format!("jacobi({p}, {q}, {r})"), vec![], &jac);
                    witnesses += 1;
                    if witnesses == MAX_WITNESSES {
                        break 'outer;
                    }
                }
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let lhs = l.anchor(&l.structure[a][b]);
            let rhs = l.rho[a].bracket(&l.rho[b]);
            let diff = &lhs - &rhs;
            for (i, c) in diff.comps().iter().enumerate() {
                report.push("anchor", vec![a, b, i], c.clone());
            }
        }
    }
    report
}
