//! The Der-complex of `P = Aᵐ` and the Chevalley–Eilenberg complex of a
//! diolic Lie algebra, with exact cohomology over ℚ.
//!
//! `Der(P)` is free over `A` on `∇_1..∇_n` (index `i`) and the basis
//! endomorphisms `E^{αβ}` (index `n + α·m + β`), with `E^{αβ} p = p^β e_α`.
//! Both differentials use 0-based slots:
//!
//! ```text
//! (dw)(Δ_0..Δ_k) = Σ_i (−1)^i Δ_i·w(..Δ̂_i..) + Σ_{i<j} (−1)^{i+j} w([Δ_i, Δ_j], ..Δ̂_i..Δ̂_j..)
//! ```

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::diole::{sort_with_parity, subsets};
use crate::error::{check_vars, Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::poly::{monomials_up_to, MultiIndex, Poly, PolyVec, Rational};

/// Default bound on the dimension of any single cochain space.
pub const DEFAULT_CAP: usize = 20_000;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Index of `∇_i` in the `Der(P)` basis.
pub fn nabla_index(i: usize) -> usize {
    i
}

/// Index of `E^{αβ}` in the `Der(P)` basis.
pub fn endo_index(n: usize, m: usize, alpha: usize, beta: usize) -> usize {
    n + alpha * m + beta
}

/// `[Δ_a, Δ_b]` in the `Der(P)` basis as signed unit coefficients.
fn der_bracket(n: usize, m: usize, a: usize, b: usize) -> Vec<(usize, i64)> {
    if a < n || b < n {
        return Vec::new();
    }
    let (alpha, beta) = ((a - n) / m, (a - n) % m);
    let (gamma, delta) = ((b - n) / m, (b - n) % m);
    let mut out = Vec::new();
    if beta == gamma {
        out.push((endo_index(n, m, alpha, delta), 1));
    }
    if delta == alpha {
        out.push((endo_index(n, m, gamma, beta), -1));
    }
    out
}

fn der_act(n: usize, m: usize, a: usize, p: &PolyVec) -> PolyVec {
    if a < n {
        p.map(|c| c.d(a))
    } else {
        let (alpha, beta) = ((a - n) / m, (a - n) % m);
        let mut comps = vec![Poly::zero(p.n()); m];
        comps[alpha] = p.get(beta).clone();
        PolyVec::new(p.n(), comps).expect("same n")
    }
}

/// An alternating `A`-multilinear map `Der(P)^k → P`, stored on strictly
/// increasing index tuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FatForm {
    n: usize,
    m: usize,
    k: usize,
    values: BTreeMap<Vec<usize>, PolyVec>,
}

impl FatForm {
    pub fn zero(n: usize, m: usize, k: usize) -> Self {
        FatForm {
            n,
            m,
            k,
            values: BTreeMap::new(),
        }
    }

    /// The degree-0 form given by a section.
    pub fn section(p: &PolyVec) -> Self {
        let mut w = FatForm::zero(p.n(), p.m(), 0);
        if !p.is_zero() {
            w.values.insert(Vec::new(), p.clone());
        }
        w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn basis_size(&self) -> usize {
        self.n + self.m * self.m
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Sets `w(Δ_{i_1}, …, Δ_{i_k})`, extending by antisymmetry.
    pub fn set(&mut self, indices: &[usize], value: PolyVec) -> Result<()> {
        if indices.len() != self.k {
            return Err(Error::Dimension(format!("{} arguments for a {}-form", indices.len(), self.k)));
        }
        check_vars(self.n, value.n())?;
        if value.m() != self.m {
            return Err(Error::Dimension(format!("value of rank {} for rank {}", value.m(), self.m)));
        }
        let size = self.basis_size();
        if let Some(&bad) = indices.iter().find(|&&i| i >= size) {
            return Err(Error::IndexOutOfRange { index: bad, bound: size });
        }
        let mut key = indices.to_vec();
        let odd = sort_with_parity(&mut key);
        if key.windows(2).any(|w| w[0] == w[1]) {
            if value.is_zero() {
                return Ok(());
            }
            return Err(Error::Invalid("alternating form repeats an argument".into()));
        }
        let value = if odd { -&value } else { value };
        if value.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, value);
        }
        Ok(())
    }

    /// `w(Δ_{i_1}, …, Δ_{i_k})` for any index order.
    pub fn get(&self, indices: &[usize]) -> PolyVec {
        let mut key = indices.to_vec();
        let odd = sort_with_parity(&mut key);
        match self.values.get(&key) {
            Some(v) if odd => -v,
            Some(v) => v.clone(),
            None => PolyVec::zero(self.n, self.m),
        }
    }

    /// Nonzero values on increasing index tuples.
    pub fn values(&self) -> impl Iterator<Item = (&[usize], &PolyVec)> {
        self.values.iter().map(|(k, v)| (k.as_slice(), v))
    }
}

fn without(t: &[usize], skip: &[usize]) -> Vec<usize> {
    t.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, &v)| v)
        .collect()
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

pub fn der_differential(w: &FatForm) -> Result<FatForm> {
    let (n, m, k) = (w.n, w.m, w.k);
    let size = w.basis_size();
    if k + 1 > size {
        return Err(Error::Dimension(format!("no forms of degree {} on a basis of size {size}", k + 1)));
    }
    let mut out = FatForm::zero(n, m, k + 1);
    for t in subsets(size, k + 1) {
        let mut acc = PolyVec::zero(n, m);
        for i in 0..=k {
            let v = der_act(n, m, t[i], &w.get(&without(&t, &[i])));
            acc = if i % 2 == 0 { &acc + &v } else { &acc - &v };
        }
        for i in 0..=k {
            for j in i + 1..=k {
                let rest = without(&t, &[i, j]);
                for (b, c) in der_bracket(n, m, t[i], t[j]) {
                    let mut args = vec![b];
                    args.extend_from_slice(&rest);
                    let v = w.get(&args);
                    if (c * sign((i + j) % 2 == 1)) > 0 {
                        acc = &acc + &v;
                    } else {
                        acc = &acc - &v;
                    }
                }
            }
        }
        if !acc.is_zero() {
            out.values.insert(t, acc);
        }
    }
    Ok(out)
}

/// Coordinates of the degree-≤D truncation of one cochain level.
struct Level {
    subsets: Vec<Vec<usize>>,
    subset_index: HashMap<Vec<usize>, usize>,
}

impl Level {
    fn new(size: usize, k: usize) -> Self {
        let subsets = subsets(size, k);
        let subset_index = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Level { subsets, subset_index }
    }
}

/// Dimensions of the degree-≤D cochain spaces `C^k`, `k = 0..=n+m²`.
pub fn der_cochain_dims(n: usize, m: usize, d: u32) -> Vec<usize> {
    let size = n + m * m;
    let monos = binomial(n + d as usize, n);
    (0..=size).map(|k| binomial(size, k) * m * monos).collect()
}

/// Betti numbers of the Der-complex restricted to coefficients of degree
/// ≤ `d`, which the differential preserves. Fails when a cochain space is
/// larger than `cap`.
pub fn der_cohomology_truncated(n: usize, m: usize, d: u32, cap: usize) -> Result<Vec<usize>> {
    if n == 0 || m == 0 {
        return Err(Error::Dimension("need n ≥ 1 and m ≥ 1".into()));
    }
    let dims = der_cochain_dims(n, m, d);
    if let Some(&found) = dims.iter().find(|&&v| v > cap) {
        return Err(Error::CapExceeded {
            what: "cochain dimension".into(),
            found,
            cap,
        });
    }
    let size = n + m * m;
    let monos = monomials_up_to(n, d);
    let mono_index: HashMap<MultiIndex, usize> = monos.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let levels: Vec<Level> = (0..=size).map(|k| Level::new(size, k)).collect();
    let ranks: Vec<usize> = (0..size)
        .into_par_iter()
        .map(|k| {
            let target = &levels[k + 1];
            let mut e = Echelon::new();
            for s in &levels[k].subsets {
                for alpha in 0..m {
                    for mu in &monos {
                        let mut w = FatForm::zero(n, m, k);
                        let value = PolyVec::basis(n, m, alpha).scale(&Poly::monomial(mu.clone(), Rational::one()));
                        w.values.insert(s.clone(), value);
                        let dw = der_differential(&w).expect("degree below basis size");
                        let mut row = SparseRow::new();
                        for (t, v) in dw.values() {
                            let ti = target.subset_index[t];
                            for (beta, c) in v.comps().iter().enumerate() {
                                for (e, coeff) in c.terms() {
                                    let col = (ti * m + beta) * monos.len() + mono_index[e];
                                    row.insert(col, coeff.clone());
                                }
                            }
                        }
                        e.insert(row);
                    }
                }
            }
            e.rank()
        })
        .collect();
    Ok(betti(&dims, &ranks))
}

/// `b_k = dim C^k − rank d^k − rank d^{k−1}`, with `ranks[k] = rank d^k`.
fn betti(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|k| {
            let out = ranks.get(k).copied().unwrap_or(0);
            let inc = if k == 0 { 0 } else { ranks[k - 1] };
            dims[k] - out - inc
        })
        .collect()
}

/// Alternating sum `Σ (−1)^k v_k`.
pub fn euler_characteristic(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// A Lie algebra `𝔤₀` with structure constants `c[a][b][g] = c^g_{ab}` and
/// a representation `ρ` on `𝔤₁ = ℚ^{d1}`; together a diolic Lie algebra
/// with `[𝔤₁, 𝔤₁] = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CEData {
    r: usize,
    c: Vec<Vec<Vec<Rational>>>,
    d1: usize,
    rho: Vec<Vec<Vec<Rational>>>,
}

impl CEData {
    /// Checks shapes, antisymmetry, the Jacobi identity and that `ρ` is a
    /// representation.
    pub fn new(c: Vec<Vec<Vec<Rational>>>, d1: usize, rho: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let data = CEData::shaped(c, d1, rho)?;
        if let Some(defect) = lie_defects(&data).into_iter().next() {
            return Err(Error::Invalid(defect));
        }
        Ok(data)
    }

    /// Checks shapes and antisymmetry only.
    pub fn shaped(c: Vec<Vec<Vec<Rational>>>, d1: usize, rho: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let r = c.len();
        if c.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r)) {
            return Err(Error::Dimension(format!("structure constants must be {r}×{r}×{r}")));
        }
        if rho.len() != r || rho.iter().any(|mat| mat.len() != d1 || mat.iter().any(|row| row.len() != d1)) {
            return Err(Error::Dimension(format!("need {r} matrices of size {d1}×{d1}")));
        }
        for a in 0..r {
            for b in 0..r {
                for g in 0..r {
                    if c[a][b][g] != -c[b][a][g].clone() {
                        return Err(Error::Invalid(format!(
                            "structure constants not antisymmetric in ({}, {})",
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
        }
        Ok(CEData { r, c, d1, rho })
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn rep_dim(&self) -> usize {
        self.d1
    }

    fn act(&self, a: usize, v: &[Rational]) -> Vec<Rational> {
        self.rho[a]
            .iter()
            .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
            .collect()
    }
}

fn matmul(x: &[Vec<Rational>], y: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let d = x.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).fold(Rational::zero(), |acc, l| acc + &x[i][l] * &y[l][j]))
                .collect()
        })
        .collect()
}

/// Human-readable failures of Jacobi and of the representation property.
pub fn lie_defects(l: &CEData) -> Vec<String> {
    let r = l.r;
    let mut out = Vec::new();
    // [a,[b,c]] + cyclic, coefficient of e_g
    let bracket = |a: usize, v: &[Rational]| -> Vec<Rational> {
        (0..r)
            .map(|g| (0..r).fold(Rational::zero(), |acc, b| acc + &v[b] * &l.c[a][b][g]))
            .collect()
    };
    for a in 0..r {
        for b in a + 1..r {
            for c in b + 1..r {
                let mut total = vec![Rational::zero(); r];
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    let inner = l.c[y][z].clone();
                    for (t, v) in total.iter_mut().zip(bracket(x, &inner)) {
                        *t += v;
                    }
                }
                if total.iter().any(|v| !v.is_zero()) {
                    out.push(format!("Jacobi fails on (e{}, e{}, e{})", a + 1, b + 1, c + 1));
                }
            }
        }
    }
    for a in 0..r {
        for b in a + 1..r {
            let mut lhs = vec![vec![Rational::zero(); l.d1]; l.d1];
            for g in 0..r {
                for i in 0..l.d1 {
                    for j in 0..l.d1 {
                        lhs[i][j] += &l.c[a][b][g] * &l.rho[g][i][j];
                    }
                }
            }
            let ab = matmul(&l.rho[a], &l.rho[b]);
            let ba = matmul(&l.rho[b], &l.rho[a]);
            let rhs: Vec<Vec<Rational>> = ab.iter().zip(&ba).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect();
            if lhs != rhs {
                out.push(format!("ρ([e{0}, e{1}]) ≠ [ρ(e{0}), ρ(e{1})]", a + 1, b + 1));
            }
        }
    }
    out
}

/// Whether the data assembles into a diolic Lie algebra.
pub fn diolic_lie_check(l: &CEData) -> bool {
    lie_defects(l).is_empty()
}

/// A cochain in `Hom(Λ^p 𝔤₀, 𝔤₁)`, stored on increasing index tuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CeCochain {
    p: usize,
    d1: usize,
    values: BTreeMap<Vec<usize>, Vec<Rational>>,
}

impl CeCochain {
    pub fn zero(p: usize, d1: usize) -> Self {
        CeCochain {
            p,
            d1,
            values: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn set(&mut self, indices: &[usize], value: Vec<Rational>) -> Result<()> {
        if indices.len() != self.p || value.len() != self.d1 {
            return Err(Error::Dimension(format!(
                "{} arguments and {} components for a {}-cochain in dimension {}",
                indices.len(),
                value.len(),
                self.p,
                self.d1
            )));
        }
        let mut key = indices.to_vec();
        let odd = sort_with_parity(&mut key);
        let zero = value.iter().all(Zero::is_zero);
        if key.windows(2).any(|w| w[0] == w[1]) {
            return if zero { Ok(()) } else { Err(Error::Invalid("alternating cochain repeats an argument".into())) };
        }
        if zero {
            self.values.remove(&key);
        } else {
            let value = if odd { value.into_iter().map(|v| -v).collect() } else { value };
            self.values.insert(key, value);
        }
        Ok(())
    }

    pub fn get(&self, indices: &[usize]) -> Vec<Rational> {
        let mut key = indices.to_vec();
        let odd = sort_with_parity(&mut key);
        match self.values.get(&key) {
            Some(v) if odd => v.iter().map(|x| -x.clone()).collect(),
            Some(v) => v.clone(),
            None => vec![Rational::zero(); self.d1],
        }
    }
}

pub fn ce_differential(l: &CEData, t: &CeCochain) -> Result<CeCochain> {
    if t.d1 != l.d1 {
        return Err(Error::Dimension(format!("cochain valued in dimension {} for {}", t.d1, l.d1)));
    }
    let p = t.p;
    if p + 1 > l.r {
        return Err(Error::Dimension(format!("no cochains of degree {} on dimension {}", p + 1, l.r)));
    }
    let mut out = CeCochain::zero(p + 1, l.d1);
    for s in subsets(l.r, p + 1) {
        let mut acc = vec![Rational::zero(); l.d1];
        for i in 0..=p {
            let v = l.act(s[i], &t.get(&without(&s, &[i])));
            for (a, x) in acc.iter_mut().zip(v) {
                if i % 2 == 0 {
                    *a += x;
                } else {
                    *a -= x;
                }
            }
        }
        for i in 0..=p {
            for j in i + 1..=p {
                let rest = without(&s, &[i, j]);
                for g in 0..l.r {
                    let coeff = &l.c[s[i]][s[j]][g];
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut args = vec![g];
                    args.extend_from_slice(&rest);
                    let v = t.get(&args);
                    let factor = if (i + j) % 2 == 0 { coeff.clone() } else { -coeff.clone() };
                    for (a, x) in acc.iter_mut().zip(v) {
                        *a += &factor * x;
                    }
                }
            }
        }
        if acc.iter().any(|v| !v.is_zero()) {
            out.values.insert(s, acc);
        }
    }
    Ok(out)
}

/// Betti numbers `b_0..b_r` of the Chevalley–Eilenberg complex.
pub fn ce_cohomology(l: &CEData) -> Vec<usize> {
    let r = l.r;
    let dims: Vec<usize> = (0..=r).map(|p| binomial(r, p) * l.d1).collect();
    let ranks: Vec<usize> = (0..r)
        .into_par_iter()
        .map(|p| {
            let target: HashMap<Vec<usize>, usize> = subsets(r, p + 1).into_iter().enumerate().map(|(i, s)| (s, i)).collect();
            let mut e = Echelon::new();
            for s in subsets(r, p) {
                for v in 0..l.d1 {
                    let mut t = CeCochain::zero(p, l.d1);
                    let mut value = vec![Rational::zero(); l.d1];
                    value[v] = Rational::one();
                    t.values.insert(s.clone(), value);
                    let dt = ce_differential(l, &t).expect("degree below dimension");
                    let mut row = SparseRow::new();
                    for (key, val) in &dt.values {
                        for (comp, x) in val.iter().enumerate() {
                            if !x.is_zero() {
                                row.insert(target[key] * l.d1 + comp, x.clone());
                            }
                        }
                    }
                    e.insert(row);
                }
            }
            e.rank()
        })
        .collect();
    betti(&dims, &ranks)
}
