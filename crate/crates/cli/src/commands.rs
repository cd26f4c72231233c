//! The three subcommands, as pure functions from parsed input to a report.

use std::path::Path;

use diolic::complexes::{
    ce_cohomology, der_cochain_dims, der_cohomology_truncated, diolic_lie_check, euler_characteristic, lie_defects,
    CEData, DEFAULT_CAP,
};
use diolic::diole::{graded_commutator_der, Der, DiolicElement};
use diolic::diolic_diffops::{atiyah_project, check_k_connection, graded_commutator_diff, verify_diolic_diffop, DiffOp};
use diolic::multider::{is_jacobi0, is_jacobi_neg1, is_lie_algebroid, is_poisson0, Residual};
use diolic::symbols::{poisson_bracket, smbl_scalar};
use diolic::{multider, MatrixOp, MultiIndex, Poly, ScalarOp};
use serde_json::Value;

use crate::caps::Caps;
use crate::error::{CliError, CliResult};
use crate::problem::{self, BracketKind, Operand, OperandKind, ProblemFile};
use crate::report::{Named, Report};

fn named(r: &Residual) -> Named {
    let name = if r.indices.is_empty() {
        r.equation.clone()
    } else {
        let idx: Vec<String> = r.indices.iter().map(|i| (i + 1).to_string()).collect();
        format!("{}[{}]", r.equation, idx.join(","))
    };
    Named::new(name, &r.value)
}

fn from_structure(kind: &str, r: &multider::Report) -> Report {
    let mut out = Report::checked(kind, r.residuals.iter().map(named).collect());
    out.notes = r.notes.iter().map(named).collect();
    out
}

fn derivative_name(sigma: &MultiIndex) -> String {
    ScalarOp::derivative(sigma.clone()).to_string()
}

/// Terms of `op` with `|σ| ≥ k`, i.e. what keeps it above order `k − 1`.
fn terms_from_order(prefix: &str, op: &MatrixOp, k: u32) -> Vec<Named> {
    let mut out = Vec::new();
    for i in 0..op.rows() {
        for j in 0..op.cols() {
            for (sigma, a) in op.entry(i, j).coeffs() {
                if sigma.degree() >= k {
                    out.push(Named::new(format!("{prefix}[{},{}] {}", i + 1, j + 1, derivative_name(sigma)), a));
                }
            }
        }
    }
    out
}

pub fn check(problem: &ProblemFile, caps: &Caps) -> CliResult<Report> {
    problem.check_caps(caps)?;
    Ok(match problem {
        ProblemFile::Poisson0(f) => from_structure("poisson0", &is_poisson0(&problem::poisson0(f)?)),
        ProblemFile::Jacobi0(f) => from_structure("jacobi0", &is_jacobi0(&problem::jacobi0(f)?)),
        ProblemFile::JacobiNeg1(f) => from_structure("jacobi_neg1", &is_jacobi_neg1(&problem::jacobi_neg1(f)?)),
        ProblemFile::Algebroid(f) => from_structure("algebroid", &is_lie_algebroid(&problem::algebroid(f)?)),
        ProblemFile::DiolicDiffop(f) => {
            let (box_a, box_p) = problem::diolic_diffop(f)?;
            for (what, order) in [("boxA", box_a.order()), ("boxP", box_p.order())] {
                if let Some(found) = order.filter(|&o| o > f.k) {
                    return Err(CliError::at(what, diolic::Error::OrderExceeded { found, bound: f.k }));
                }
            }
            let holds = verify_diolic_diffop(&box_a, &box_p, f.k).map_err(|e| CliError::at("boxP", e))?;
            let difference = &box_p - &MatrixOp::diagonal(&box_a, f.m);
            let mut residuals = terms_from_order("M", &difference, f.k);
            debug_assert_eq!(holds, residuals.is_empty());
            if !holds && residuals.is_empty() {
                residuals.push(Named::new("delta nest", "nonzero"));
            }
            Report::checked("diolic_diffop", residuals)
        }
        ProblemFile::KConnection(f) => {
            let table = problem::k_connection(f)?;
            let holds = check_k_connection(&table, f.n, f.m, f.k).map_err(|e| CliError::at("connection", e))?;
            let unit = DiolicElement::even(Poly::one(f.n), f.m);
            let mut residuals = Vec::new();
            for (sigma, value) in &table {
                let gen = derivative_name(sigma);
                let defect = &atiyah_project(value) - &ScalarOp::derivative(sigma.clone());
                for (tau, a) in defect.coeffs() {
                    residuals.push(Named::new(format!("section({gen}) {}", derivative_name(tau)), a));
                }
                let at_unit = value.apply(&unit).map_err(|e| CliError::at("connection", e))?;
                if !at_unit.a.is_zero() {
                    residuals.push(Named::new(format!("unit({gen}).a"), &at_unit.a));
                }
                for (alpha, c) in at_unit.p.comps().iter().enumerate() {
                    if !c.is_zero() {
                        residuals.push(Named::new(format!("unit({gen}).p[{}]", alpha + 1), c));
                    }
                }
            }
            debug_assert_eq!(holds, residuals.is_empty());
            Report::checked("k_connection", residuals)
        }
        ProblemFile::Ce(f) => {
            let (c, rho) = problem::ce_tables(f)?;
            let data = CEData::shaped(c, f.rep_dim, rho).map_err(|e| CliError::at("c", e))?;
            let defects = lie_defects(&data);
            debug_assert_eq!(diolic_lie_check(&data), defects.is_empty());
            Report::checked("ce", defects.into_iter().map(|d| Named::new(d, "nonzero")).collect())
        }
        ProblemFile::DerCohomology(f) => der_cohomology(f.n, f.m, f.degree_bound, caps)?,
        ProblemFile::Bracket(f) => {
            let kind = BracketKind::parse(&f.bracket)?;
            let left = Operand::from_value(kind.left, &f.left, f.n, f.m, "left")?;
            let right = Operand::from_value(kind.right, &f.right, f.n, f.m, "right")?;
            Report::value("bracket", bracket_value(&left, &right)?)
        }
        ProblemFile::Symbol(f) => {
            let op = problem::scalar_op(&f.op, f.n, "op")?;
            Report::value("symbol", smbl_scalar(&op, f.k).map_err(|e| CliError::at("op", e))?)
        }
    })
}

pub fn check_file(path: &Path, caps: &Caps) -> CliResult<Report> {
    check(&ProblemFile::read(path)?, caps)
}

fn show_der(d: &Der) -> String {
    match d {
        Der::Neg1(v) => v.phi().to_string(),
        Der::Zero(v) => v.to_string(),
        Der::One(v) => v.to_string(),
        Der::Trivial { .. } => "0".into(),
    }
}

fn show_diff(d: &DiffOp) -> String {
    match d {
        DiffOp::Neg1(b) => b.op().to_string(),
        DiffOp::Zero(b) => format!("({}, {})", b.box_a(), b.matrix_part()),
        DiffOp::One(b) => {
            let ops: Vec<String> = b.ops().iter().map(ScalarOp::to_string).collect();
            format!("({})", ops.join(", "))
        }
        DiffOp::Trivial { .. } => "0".into(),
    }
}

fn bracket_value(left: &Operand, right: &Operand) -> CliResult<String> {
    let input = |e| CliError::at("right", e);
    Ok(match (left, right) {
        (Operand::Symbol(a), Operand::Symbol(b)) => poisson_bracket(a, b).map_err(input)?.to_string(),
        (Operand::Der(a), Operand::Der(b)) => show_der(&graded_commutator_der(a, b).map_err(input)?),
        (Operand::Diff(a), Operand::Diff(b)) => show_diff(&graded_commutator_diff(a, b).map_err(input)?),
        _ => return Err(CliError::Usage("operands of different families".into())),
    })
}

fn operand_value(kind: OperandKind, text: &str, which: &str) -> CliResult<Value> {
    match kind {
        OperandKind::Symbol => Ok(Value::String(text.to_string())),
        _ => serde_json::from_str(text).map_err(|e| CliError::Shape {
            path: which.to_string(),
            message: format!("operand is not JSON: {e}"),
        }),
    }
}

/// `bracket --kind <kind> <left> <right>`; `n` and `m` default to what the
/// operands imply.
pub fn bracket(kind: &str, left: &str, right: &str, n: Option<usize>, m: Option<usize>, caps: &Caps) -> CliResult<Report> {
    let kind = BracketKind::parse(kind)?;
    let lv = operand_value(kind.left, left, "left")?;
    let rv = operand_value(kind.right, right, "right")?;
    let n = n.unwrap_or_else(|| problem::infer_n(&lv).max(problem::infer_n(&rv)).max(1));
    let m = m
        .or_else(|| problem::infer_m(kind.left, &lv))
        .or_else(|| problem::infer_m(kind.right, &rv))
        .unwrap_or(1);
    caps.nm(n, m)?;
    let a = Operand::from_value(kind.left, &lv, n, m, "left")?;
    let b = Operand::from_value(kind.right, &rv, n, m, "right")?;
    Ok(Report::value("bracket", bracket_value(&a, &b)?))
}

pub fn der_cohomology(n: usize, m: usize, d: u32, caps: &Caps) -> CliResult<Report> {
    caps.nm(n, m)?;
    caps.degree(d)?;
    let betti = der_cohomology_truncated(n, m, d, DEFAULT_CAP).map_err(|e| CliError::at("der", e))?;
    let dims = der_cochain_dims(n, m, d);
    let euler = euler_characteristic(&dims);
    debug_assert_eq!(euler, euler_characteristic(&betti));
    Ok(Report::cohomology("der_cohomology", betti, dims, euler))
}

pub fn ce_cohomology_file(path: &Path, caps: &Caps) -> CliResult<Report> {
    let f = match ProblemFile::read(path)? {
        ProblemFile::Ce(f) => f,
        _ => return Err(CliError::Usage(format!("{} is not a ce problem", path.display()))),
    };
    caps.lie_dim(f.dim, f.rep_dim)?;
    let (c, rho) = problem::ce_tables(&f)?;
    let data = CEData::new(c, f.rep_dim, rho).map_err(|e| CliError::at("c", e))?;
    let betti = ce_cohomology(&data);
    let dims: Vec<usize> = (0..=f.dim).map(|p| binomial(f.dim, p) * f.rep_dim).collect();
    let euler = euler_characteristic(&dims);
    debug_assert_eq!(euler, euler_characteristic(&betti));
    Ok(Report::cohomology("ce_cohomology", betti, dims, euler))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
