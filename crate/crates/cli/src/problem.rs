//! Problem files: the JSON schema, its canonical form, and conversion into
//! library values.
//!
//! Polynomials are strings in the polynomial grammar (`x1`, `x2`, ...),
//! symbols add momenta `k1`, `k2`, ..., rationals are `"p"` or `"p/q"`, and
//! a scalar operator is a list of `{sigma, coeff}` records meaning
//! `Σ coeff·∂^sigma`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use diolic::diole::{Der, Der0, Der1, DerNeg1};
use diolic::diolic_diffops::{DiffOp, DiffOp0, DiffOp1, DiffOpNeg1};
use diolic::multider::{BiDer0, BiDerNeg1, JacobiNeg1, JacobiOp0};
use diolic::symbols::SymbolPoly;
use diolic::{MatrixOp, MultiIndex, Poly, PolyMat, Rational, ScalarOp, VectorField};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::caps::Caps;
use crate::error::{CliError, CliResult};

/// One term `coeff·∂^sigma` of a scalar operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpTerm {
    pub sigma: Vec<u32>,
    pub coeff: String,
}

pub type OpText = Vec<OpTerm>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Poisson0File {
    pub n: usize,
    pub m: usize,
    /// Full antisymmetric `n × n` matrix.
    pub bivector: Vec<Vec<String>>,
    /// `end_part[i]` is the `m × m` matrix `Π^i_{End}`; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_part: Option<Vec<Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Jacobi0File {
    pub n: usize,
    pub m: usize,
    /// `(n+1) × (n+1)` coefficients; slot 0 is the identity, slot `i` is `∂_i`.
    pub jacobi_aa: Vec<Vec<String>>,
    /// `n + 1` operators on `P`, one per first-slot index.
    pub jacobi_ap: Vec<Vec<Vec<OpText>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiNeg1File {
    pub n: usize,
    pub m: usize,
    pub jacobi_aa: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidFile {
    pub n: usize,
    pub m: usize,
    /// `anchor[α]` lists the components of `ρ(e_α)`.
    pub anchor: Vec<Vec<String>>,
    /// `structure[α][β]` lists the components of `[e_α, e_β]`.
    pub structure: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiolicDiffopFile {
    pub n: usize,
    pub m: usize,
    pub k: u32,
    #[serde(rename = "boxA")]
    pub box_a: OpText,
    /// Either the matrix part `M` (so `□^P = □^A·I + M`) or `□^P` itself.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub matrix_part: Option<Vec<Vec<OpText>>>,
    #[serde(rename = "boxP", default, skip_serializing_if = "Option::is_none")]
    pub box_p: Option<Vec<Vec<OpText>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionValue {
    pub sigma: Vec<u32>,
    #[serde(rename = "boxA")]
    pub box_a: OpText,
    #[serde(rename = "M")]
    pub matrix_part: Vec<Vec<OpText>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KConnectionFile {
    pub n: usize,
    pub m: usize,
    pub k: u32,
    pub connection: Vec<ConnectionValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CeFile {
    pub dim: usize,
    /// `c[a][b][g]` is the `e_g` coefficient of `[e_a, e_b]`.
    pub c: Vec<Vec<Vec<String>>>,
    pub rep_dim: usize,
    /// `rho[a]` is the matrix of `e_a` on the representation.
    pub rho: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerCohomologyFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "D")]
    pub degree_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketFile {
    pub n: usize,
    pub m: usize,
    /// Same spelling as `bracket --kind`.
    pub bracket: String,
    pub left: Value,
    pub right: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    pub n: usize,
    pub k: u32,
    pub op: OpText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemFile {
    Poisson0(Poisson0File),
    Jacobi0(Jacobi0File),
    JacobiNeg1(JacobiNeg1File),
    Algebroid(AlgebroidFile),
    DiolicDiffop(DiolicDiffopFile),
    KConnection(KConnectionFile),
    Ce(CeFile),
    DerCohomology(DerCohomologyFile),
    Bracket(BracketFile),
    Symbol(SymbolFile),
}

impl ProblemFile {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(CliError::from)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    /// Reprints every polynomial, rational and operator in canonical form.
    pub fn canonical(&self) -> CliResult<Self> {
        Ok(match self {
            ProblemFile::Poisson0(f) => {
                let pi = poisson0(f)?;
                ProblemFile::Poisson0(Poisson0File {
                    n: f.n,
                    m: f.m,
                    bivector: print_mat(pi.bivector()),
                    end_part: Some(pi.end_part().iter().map(print_mat).collect()),
                })
            }
            ProblemFile::Jacobi0(f) => {
                jacobi0(f)?;
                ProblemFile::Jacobi0(Jacobi0File {
                    n: f.n,
                    m: f.m,
                    jacobi_aa: canon_table(&f.jacobi_aa, f.n, "jacobi_aa")?,
                    jacobi_ap: f
                        .jacobi_ap
                        .iter()
                        .enumerate()
                        .map(|(s, d)| canon_matrix_op(d, f.n, &format!("jacobi_ap[{s}]")))
                        .collect::<CliResult<_>>()?,
                })
            }
            ProblemFile::JacobiNeg1(f) => {
                jacobi_neg1(f)?;
                ProblemFile::JacobiNeg1(JacobiNeg1File {
                    n: f.n,
                    m: f.m,
                    jacobi_aa: canon_table(&f.jacobi_aa, f.n, "jacobi_aa")?,
                })
            }
            ProblemFile::Algebroid(f) => {
                algebroid(f)?;
                ProblemFile::Algebroid(AlgebroidFile {
                    n: f.n,
                    m: f.m,
                    anchor: canon_table(&f.anchor, f.n, "anchor")?,
                    structure: f
                        .structure
                        .iter()
                        .enumerate()
                        .map(|(a, t)| canon_table(t, f.n, &format!("structure[{a}]")))
                        .collect::<CliResult<_>>()?,
                })
            }
            ProblemFile::DiolicDiffop(f) => {
                let (box_a, box_p) = diolic_diffop(f)?;
                let matrix_part = &box_p - &MatrixOp::diagonal(&box_a, f.m);
                ProblemFile::DiolicDiffop(DiolicDiffopFile {
                    n: f.n,
                    m: f.m,
                    k: f.k,
                    box_a: print_op(&box_a),
                    matrix_part: Some(print_matrix_op(&matrix_part)),
                    box_p: None,
                })
            }
            ProblemFile::KConnection(f) => {
                let table = k_connection(f)?;
                ProblemFile::KConnection(KConnectionFile {
                    n: f.n,
                    m: f.m,
                    k: f.k,
                    connection: table
                        .iter()
                        .map(|(sigma, b)| ConnectionValue {
                            sigma: sigma.entries().to_vec(),
                            box_a: print_op(b.box_a()),
                            matrix_part: print_matrix_op(b.matrix_part()),
                        })
                        .collect(),
                })
            }
            ProblemFile::Ce(f) => {
                let (c, rho) = ce_tables(f)?;
                let print3 = |t: &[Vec<Vec<Rational>>]| -> Vec<Vec<Vec<String>>> {
                    t.iter().map(|a| a.iter().map(|b| b.iter().map(|q| q.to_string()).collect()).collect()).collect()
                };
                ProblemFile::Ce(CeFile {
                    dim: f.dim,
                    c: print3(&c),
                    rep_dim: f.rep_dim,
                    rho: print3(&rho),
                })
            }
            ProblemFile::DerCohomology(f) => ProblemFile::DerCohomology(f.clone()),
            ProblemFile::Bracket(f) => {
                let kind = BracketKind::parse(&f.bracket)?;
                let left = Operand::from_value(kind.left, &f.left, f.n, f.m, "left")?;
                let right = Operand::from_value(kind.right, &f.right, f.n, f.m, "right")?;
                ProblemFile::Bracket(BracketFile {
                    n: f.n,
                    m: f.m,
                    bracket: kind.to_string(),
                    left: left.to_value(),
                    right: right.to_value(),
                })
            }
            ProblemFile::Symbol(f) => ProblemFile::Symbol(SymbolFile {
                n: f.n,
                k: f.k,
                op: print_op(&scalar_op(&f.op, f.n, "op")?),
            }),
        })
    }

    /// Rejects problems above the configured dimension caps.
    pub fn check_caps(&self, caps: &Caps) -> CliResult<()> {
        match self {
            ProblemFile::Poisson0(f) => caps.nm(f.n, f.m),
            ProblemFile::Jacobi0(f) => caps.nm(f.n, f.m),
            ProblemFile::JacobiNeg1(f) => caps.nm(f.n, f.m),
            ProblemFile::Algebroid(f) => caps.nm(f.n, f.m),
            ProblemFile::DiolicDiffop(f) => caps.nm(f.n, f.m).and_then(|_| caps.order(f.k)),
            ProblemFile::KConnection(f) => caps.nm(f.n, f.m).and_then(|_| caps.order(f.k)),
            ProblemFile::Ce(f) => caps.lie_dim(f.dim, f.rep_dim),
            ProblemFile::DerCohomology(f) => caps.nm(f.n, f.m).and_then(|_| caps.degree(f.degree_bound)),
            ProblemFile::Bracket(f) => caps.nm(f.n, f.m),
            ProblemFile::Symbol(f) => caps.nm(f.n, 1).and_then(|_| caps.order(f.k)),
        }
    }
}

fn at<T>(path: &str, r: diolic::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::at(path, source))
}

fn shape<T>(path: &str, what: String) -> CliResult<T> {
    Err(CliError::Shape {
        path: path.to_string(),
        message: what,
    })
}

pub fn poly(text: &str, n: usize, path: &str) -> CliResult<Poly> {
    at(path, Poly::parse(text, n))
}

pub fn rational(text: &str, path: &str) -> CliResult<Rational> {
    text.trim().parse::<Rational>().map_err(|e| CliError::Shape {
        path: path.to_string(),
        message: format!("bad rational '{text}': {e}"),
    })
}

fn polys(texts: &[String], n: usize, path: &str) -> CliResult<Vec<Poly>> {
    texts.iter().enumerate().map(|(i, t)| poly(t, n, &format!("{path}[{i}]"))).collect()
}

fn poly_table(rows: &[Vec<String>], n: usize, path: &str) -> CliResult<Vec<Vec<Poly>>> {
    rows.iter().enumerate().map(|(i, r)| polys(r, n, &format!("{path}[{i}]"))).collect()
}

fn square_mat(rows: &[Vec<String>], n: usize, size: usize, path: &str) -> CliResult<PolyMat> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return shape(path, format!("expected a {size}×{size} matrix"));
    }
    at(path, PolyMat::from_rows(n, poly_table(rows, n, path)?))
}

fn canon_table(rows: &[Vec<String>], n: usize, path: &str) -> CliResult<Vec<Vec<String>>> {
    Ok(poly_table(rows, n, path)?.iter().map(|r| r.iter().map(Poly::to_string).collect()).collect())
}

fn print_mat(m: &PolyMat) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

pub fn scalar_op(terms: &[OpTerm], n: usize, path: &str) -> CliResult<ScalarOp> {
    let mut parsed = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let here = format!("{path}[{i}]");
        if t.sigma.len() != n {
            return shape(&here, format!("sigma has {} entries, expected {n}", t.sigma.len()));
        }
        parsed.push((MultiIndex::new(t.sigma.clone()), poly(&t.coeff, n, &format!("{here}.coeff"))?));
    }
    at(path, ScalarOp::from_terms(n, parsed))
}

pub fn matrix_op(rows: &[Vec<OpText>], n: usize, path: &str) -> CliResult<MatrixOp> {
    let size = rows.len();
    if rows.iter().any(|r| r.len() != size) {
        return shape(path, "operator matrix must be square".into());
    }
    let ops = rows
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, t)| scalar_op(t, n, &format!("{path}[{i}][{j}]"))).collect())
        .collect::<CliResult<Vec<Vec<ScalarOp>>>>()?;
    at(path, MatrixOp::from_rows(n, ops))
}

pub fn print_op(op: &ScalarOp) -> OpText {
    op.coeffs()
        .map(|(s, a)| OpTerm {
            sigma: s.entries().to_vec(),
            coeff: a.to_string(),
        })
        .collect()
}

pub fn print_matrix_op(op: &MatrixOp) -> Vec<Vec<OpText>> {
    (0..op.rows()).map(|i| (0..op.cols()).map(|j| print_op(op.entry(i, j))).collect()).collect()
}

fn canon_matrix_op(rows: &[Vec<OpText>], n: usize, path: &str) -> CliResult<Vec<Vec<OpText>>> {
    Ok(print_matrix_op(&matrix_op(rows, n, path)?))
}

pub fn poisson0(f: &Poisson0File) -> CliResult<BiDer0> {
    let w = square_mat(&f.bivector, f.n, f.n, "bivector")?;
    match &f.end_part {
        None => at("bivector", BiDer0::from_bivector(w, f.m)),
        Some(end) => {
            if end.len() != f.n {
                return shape("end_part", format!("expected {} matrices", f.n));
            }
            let mats = end
                .iter()
                .enumerate()
                .map(|(i, g)| square_mat(g, f.n, f.m, &format!("end_part[{i}]")))
                .collect::<CliResult<Vec<_>>>()?;
            at("end_part", BiDer0::new(w, mats))
        }
    }
}

pub fn jacobi0(f: &Jacobi0File) -> CliResult<JacobiOp0> {
    let c = poly_table(&f.jacobi_aa, f.n, "jacobi_aa")?;
    let d = f
        .jacobi_ap
        .iter()
        .enumerate()
        .map(|(s, rows)| {
            let path = format!("jacobi_ap[{s}]");
            if rows.len() != f.m {
                return shape(&path, format!("expected {0}×{0} operators", f.m));
            }
            matrix_op(rows, f.n, &path)
        })
        .collect::<CliResult<Vec<_>>>()?;
    at("jacobi_ap", JacobiOp0::new(f.n, f.m, c, d))
}

pub fn jacobi_neg1(f: &JacobiNeg1File) -> CliResult<JacobiNeg1> {
    at("jacobi_aa", JacobiNeg1::new(f.n, f.m, poly_table(&f.jacobi_aa, f.n, "jacobi_aa")?))
}

pub fn algebroid(f: &AlgebroidFile) -> CliResult<BiDerNeg1> {
    if f.anchor.len() != f.m {
        return shape("anchor", format!("expected {} anchor rows", f.m));
    }
    if let Some(i) = f.anchor.iter().position(|r| r.len() != f.n) {
        return shape(&format!("anchor[{i}]"), format!("expected {} components", f.n));
    }
    let anchor = poly_table(&f.anchor, f.n, "anchor")?;
    let c = f
        .structure
        .iter()
        .enumerate()
        .map(|(a, t)| poly_table(t, f.n, &format!("structure[{a}]")))
        .collect::<CliResult<Vec<_>>>()?;
    at("structure", BiDerNeg1::new(f.n, anchor, c))
}

/// `(□^A, □^P)`.
pub fn diolic_diffop(f: &DiolicDiffopFile) -> CliResult<(ScalarOp, MatrixOp)> {
    let box_a = scalar_op(&f.box_a, f.n, "boxA")?;
    let box_p = match (&f.matrix_part, &f.box_p) {
        (Some(mp), None) => &MatrixOp::diagonal(&box_a, f.m) + &sized_matrix_op(mp, f.n, f.m, "M")?,
        (None, Some(bp)) => sized_matrix_op(bp, f.n, f.m, "boxP")?,
        _ => return shape("M", "give exactly one of M and boxP".into()),
    };
    Ok((box_a, box_p))
}

fn sized_matrix_op(rows: &[Vec<OpText>], n: usize, m: usize, path: &str) -> CliResult<MatrixOp> {
    if rows.len() != m {
        return shape(path, format!("expected a {m}×{m} operator matrix"));
    }
    matrix_op(rows, n, path)
}

pub fn k_connection(f: &KConnectionFile) -> CliResult<BTreeMap<MultiIndex, DiffOp0>> {
    let mut table = BTreeMap::new();
    for (i, v) in f.connection.iter().enumerate() {
        let path = format!("connection[{i}]");
        if v.sigma.len() != f.n {
            return shape(&path, format!("sigma has {} entries, expected {}", v.sigma.len(), f.n));
        }
        let box_a = scalar_op(&v.box_a, f.n, &format!("{path}.boxA"))?;
        let mp = sized_matrix_op(&v.matrix_part, f.n, f.m, &format!("{path}.M"))?;
        let value = at(&path, DiffOp0::new(f.k, box_a, mp))?;
        if table.insert(MultiIndex::new(v.sigma.clone()), value).is_some() {
            return shape(&path, "generator listed twice".into());
        }
    }
    Ok(table)
}

type Table3 = Vec<Vec<Vec<Rational>>>;

pub fn ce_tables(f: &CeFile) -> CliResult<(Table3, Table3)> {
    let read = |t: &[Vec<Vec<String>>], dims: (usize, usize, usize), key: &str| -> CliResult<Table3> {
        if t.len() != dims.0 || t.iter().any(|a| a.len() != dims.1 || a.iter().any(|b| b.len() != dims.2)) {
            return shape(key, format!("expected a {}×{}×{} table", dims.0, dims.1, dims.2));
        }
        t.iter()
            .enumerate()
            .map(|(a, x)| {
                x.iter()
                    .enumerate()
                    .map(|(b, y)| y.iter().enumerate().map(|(g, s)| rational(s, &format!("{key}[{a}][{b}][{g}]"))).collect())
                    .collect()
            })
            .collect()
    };
    let c = read(&f.c, (f.dim, f.dim, f.dim), "c")?;
    let rho = read(&f.rho, (f.dim, f.rep_dim, f.rep_dim), "rho")?;
    Ok((c, rho))
}

/// Degree of a bracket operand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperandKind {
    Symbol,
    Der(i32),
    Diff(i32),
}

impl std::fmt::Display for OperandKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let deg = |d: i32| if d < 0 { "neg1".to_string() } else { d.to_string() };
        match self {
            OperandKind::Symbol => f.write_str("symbol"),
            OperandKind::Der(d) => write!(f, "der{}", deg(*d)),
            OperandKind::Diff(d) => write!(f, "diff{}", deg(*d)),
        }
    }
}

/// `symbol`, `der0`, `diff1`, or a pair such as `der0-der1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketKind {
    pub left: OperandKind,
    pub right: OperandKind,
}

impl BracketKind {
    pub fn parse(text: &str) -> CliResult<Self> {
        let one = |t: &str| -> CliResult<OperandKind> {
            let degree = |d: &str| match d {
                "neg1" => Some(-1),
                "0" => Some(0),
                "1" => Some(1),
                _ => None,
            };
            let parsed = if t == "symbol" {
                Some(OperandKind::Symbol)
            } else if let Some(d) = t.strip_prefix("der") {
                degree(d).map(OperandKind::Der)
            } else if let Some(d) = t.strip_prefix("diff") {
                degree(d).map(OperandKind::Diff)
            } else {
                None
            };
            parsed.ok_or_else(|| CliError::Usage(format!("unknown bracket kind '{t}'")))
        };
        let (left, right) = match text.split_once('-') {
            Some((l, r)) => (one(l)?, one(r)?),
            None => {
                let k = one(text)?;
                (k, k)
            }
        };
        let family = |k: OperandKind| std::mem::discriminant(&k);
        if family(left) != family(right) {
            return Err(CliError::Usage(format!("cannot bracket {left} with {right}")));
        }
        Ok(BracketKind { left, right })
    }
}

impl std::fmt::Display for BracketKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.left == self.right {
            write!(f, "{}", self.left)
        } else {
            write!(f, "{}-{}", self.left, self.right)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Der0Text {
    x: Vec<String>,
    g: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Der1Text {
    z: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DerNeg1Text {
    phi: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Diff0Text {
    k: u32,
    #[serde(rename = "boxA")]
    box_a: OpText,
    #[serde(rename = "M")]
    matrix_part: Vec<Vec<OpText>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Diff1Text {
    k: u32,
    ops: Vec<OpText>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiffNeg1Text {
    k: u32,
    op: OpText,
}

/// A parsed bracket operand.
#[derive(Clone, Debug, PartialEq)]
pub enum Operand {
    Symbol(SymbolPoly),
    Der(Der),
    Diff(DiffOp),
}

fn typed<T: for<'de> Deserialize<'de>>(v: &Value, path: &str) -> CliResult<T> {
    T::deserialize(v).map_err(|e| CliError::Shape {
        path: path.to_string(),
        message: e.to_string(),
    })
}

impl Operand {
    pub fn from_value(kind: OperandKind, v: &Value, n: usize, m: usize, path: &str) -> CliResult<Self> {
        Ok(match kind {
            OperandKind::Symbol => {
                let text: String = typed(v, path)?;
                Operand::Symbol(at(path, SymbolPoly::parse(&text, n))?)
            }
            OperandKind::Der(0) => {
                let t: Der0Text = typed(v, path)?;
                if t.x.len() != n {
                    return shape(path, format!("x needs {n} components"));
                }
                let x = at(path, VectorField::new(polys(&t.x, n, &format!("{path}.x"))?))?;
                let g = square_mat(&t.g, n, m, &format!("{path}.g"))?;
                Operand::Der(Der::Zero(at(path, Der0::new(x, g))?))
            }
            OperandKind::Der(1) => {
                let t: Der1Text = typed(v, path)?;
                if t.z.len() != m || t.z.iter().any(|r| r.len() != n) {
                    return shape(path, format!("z needs {m} vector fields of {n} components"));
                }
                let z = t
                    .z
                    .iter()
                    .enumerate()
                    .map(|(a, r)| at(path, VectorField::new(polys(r, n, &format!("{path}.z[{a}]"))?)))
                    .collect::<CliResult<Vec<_>>>()?;
                Operand::Der(Der::One(at(path, Der1::new(n, z))?))
            }
            OperandKind::Der(_) => {
                let t: DerNeg1Text = typed(v, path)?;
                let phi = poly(&t.phi, n, &format!("{path}.phi"))?;
                Operand::Der(Der::Neg1(at(path, DerNeg1::new(vec![phi; m]))?))
            }
            OperandKind::Diff(0) => {
                let t: Diff0Text = typed(v, path)?;
                let box_a = scalar_op(&t.box_a, n, &format!("{path}.boxA"))?;
                let mp = sized_matrix_op(&t.matrix_part, n, m, &format!("{path}.M"))?;
                Operand::Diff(DiffOp::Zero(at(path, DiffOp0::new(t.k, box_a, mp))?))
            }
            OperandKind::Diff(1) => {
                let t: Diff1Text = typed(v, path)?;
                if t.ops.len() != m {
                    return shape(path, format!("ops needs {m} operators"));
                }
                let ops = t
                    .ops
                    .iter()
                    .enumerate()
                    .map(|(a, o)| scalar_op(o, n, &format!("{path}.ops[{a}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                Operand::Diff(DiffOp::One(at(path, DiffOp1::new(t.k, n, ops))?))
            }
            OperandKind::Diff(_) => {
                let t: DiffNeg1Text = typed(v, path)?;
                if m != 1 {
                    return Err(CliError::at(path, diolic::Error::RankNotOne(m)));
                }
                let op = scalar_op(&t.op, n, &format!("{path}.op"))?;
                Operand::Diff(DiffOp::Neg1(at(path, DiffOpNeg1::new(t.k, vec![op]))?))
            }
        })
    }

    pub fn to_value(&self) -> Value {
        let ser = |v: serde_json::Result<Value>| v.expect("operands serialize");
        let vf = |v: &VectorField| v.comps().iter().map(Poly::to_string).collect::<Vec<_>>();
        match self {
            Operand::Symbol(s) => Value::String(s.to_string()),
            Operand::Der(Der::Zero(d)) => serde_json::json!({ "x": vf(d.x()), "g": print_mat(d.g()) }),
            Operand::Der(Der::One(d)) => serde_json::json!({ "z": d.components().iter().map(vf).collect::<Vec<_>>() }),
            Operand::Der(Der::Neg1(d)) => serde_json::json!({ "phi": d.phi().to_string() }),
            Operand::Der(Der::Trivial { .. }) => Value::Null,
            Operand::Diff(DiffOp::Zero(b)) => serde_json::json!({
                "k": b.k(),
                "boxA": ser(serde_json::to_value(print_op(b.box_a()))),
                "M": ser(serde_json::to_value(print_matrix_op(b.matrix_part()))),
            }),
            Operand::Diff(DiffOp::One(b)) => serde_json::json!({
                "k": b.k(),
                "ops": ser(serde_json::to_value(b.ops().iter().map(print_op).collect::<Vec<_>>())),
            }),
            Operand::Diff(DiffOp::Neg1(b)) => serde_json::json!({
                "k": b.k(),
                "op": ser(serde_json::to_value(print_op(b.op()))),
            }),
            Operand::Diff(DiffOp::Trivial { .. }) => Value::Null,
        }
    }
}

/// Smallest `n` covering every variable index written in `v` and every
/// length fixed by the operand schema.
pub fn infer_n(v: &Value) -> usize {
    match v {
        Value::String(s) => max_index(s),
        Value::Array(items) => items.iter().map(infer_n).max().unwrap_or(0),
        Value::Object(map) => map
            .iter()
            .map(|(key, val)| {
                let fixed = match (key.as_str(), val) {
                    ("x" | "sigma", Value::Array(a)) => a.len(),
                    ("z", Value::Array(rows)) => rows.iter().filter_map(Value::as_array).map(Vec::len).max().unwrap_or(0),
                    _ => 0,
                };
                fixed.max(infer_n(val))
            })
            .max()
            .unwrap_or(0),
        _ => 0,
    }
}

fn max_index(s: &str) -> usize {
    let bytes = s.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if matches!(bytes[i], b'x' | b'k') {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = s[start..j].parse::<usize>() {
                best = best.max(v);
            }
            i = j.max(i + 1);
        } else {
            i += 1;
        }
    }
    best
}

/// Rank read off the operand shape, when it fixes one.
pub fn infer_m(kind: OperandKind, v: &Value) -> Option<usize> {
    let len = |key: &str| v.get(key).and_then(Value::as_array).map(Vec::len);
    match kind {
        OperandKind::Der(0) => len("g"),
        OperandKind::Der(1) => len("z"),
        OperandKind::Diff(0) => len("M"),
        OperandKind::Diff(1) => len("ops"),
        OperandKind::Der(_) | OperandKind::Diff(_) => Some(1),
        OperandKind::Symbol => None,
    }
}
