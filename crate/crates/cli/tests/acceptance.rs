//! End-to-end acceptance suite: one line per criterion, exact arithmetic,
//! wall-clock limits where the criterion sets one.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use diolic::complexes::{
    ce_cohomology, ce_differential, der_cochain_dims, der_cohomology_truncated, der_differential, euler_characteristic,
    CEData, CeCochain, FatForm, DEFAULT_CAP,
};
use diolic::diole::{
    der_neg1_obstruction, derivation_probes, graded_commutator_der, subsets, Der, Der0, Der1, DerNeg1, DiolicElement,
};
use diolic::diolic_diffops::{
    atiyah_project, atiyah_split, commutator_matches_composition, graded_commutator_diff, operator_probes, DiffOp,
    DiffOp0, DiffOp1, DiffOpNeg1,
};
use diolic::diffop::verify_order;
use diolic::multider::{
    is_jacobi0, is_jacobi_neg1, is_lie_algebroid, is_poisson0, schouten_vanishes, BiDer0, BiDerNeg1, JacobiNeg1,
    JacobiOp0,
};
use diolic::poly::int;
use diolic::sample::{
    random_matrix_op, random_poly, random_poly_mat, random_scalar_op, random_scalar_op_of_order, random_vector_field,
    Sampler,
};
use diolic::symbols::{lambda_k_vanishes, poisson_bracket, smbl_scalar, star};
use diolic::{MatrixOp, MultiIndex, Poly, PolyMat, PolyVec, Rational, ScalarOp};
use diolic_cli::{commands, Caps, ProblemFile};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str, n: usize) -> Poly {
    Poly::parse(s, n).unwrap()
}

fn odd(a: i32, b: i32) -> bool {
    (a * b).rem_euclid(2) == 1
}

// 1 ─ symbols

fn symbol_homomorphism() -> Outcome {
    let mut s = Sampler::new(0x5eed_0001);
    let mut nonzero = 0;
    for case in 0..200 {
        let n = 1 + s.below(3);
        let (k, l) = (s.range(0, 3), s.range(0, 3));
        let a = random_scalar_op_of_order(&mut s, n, k, 3);
        let b = random_scalar_op_of_order(&mut s, n, l, 3);
        let (sa, sb) = (smbl_scalar(&a, k).unwrap(), smbl_scalar(&b, l).unwrap());
        let product = smbl_scalar(&a.compose(&b), k + l).unwrap();
        ensure(product == star(&sa, &sb).unwrap(), || format!("case {case}: composition symbol"))?;
        let bracket = smbl_scalar(&a.commutator(&b), (k + l).saturating_sub(1)).unwrap();
        ensure(bracket == poisson_bracket(&sa, &sb).unwrap(), || format!("case {case}: commutator symbol"))?;
        nonzero += usize::from(!bracket.is_zero());
    }
    ensure(nonzero >= 100, || format!("only {nonzero} pairs have a nonzero bracket symbol"))
}

// 2 ─ Poisson

fn skew(rows: &[&[&str]], n: usize) -> PolyMat {
    let mut m = PolyMat::zero_square(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (off, t) in row.iter().enumerate() {
            let j = i + 1 + off;
            m.set(i, j, p(t, n));
            m.set(j, i, -p(t, n));
        }
    }
    m
}

fn constant(rows: &[&[i64]], n: usize) -> PolyMat {
    PolyMat::from_rows(n, rows.iter().map(|r| r.iter().map(|&v| Poly::from_int(n, v)).collect()).collect()).unwrap()
}

fn zero_end(n: usize, m: usize) -> Vec<PolyMat> {
    vec![PolyMat::zero_square(n, m); n]
}

/// Structures with their intended verdicts.
fn poisson_structures() -> Vec<(&'static str, BiDer0, bool)> {
    let so3 = || skew(&[&["x3", "-x2"], &["x1"], &[]], 3);
    let symplectic = || skew(&[&["1"]], 2);
    let scalar2 = |t: &str| PolyMat::scalar(1, &p(t, 2));
    vec![
        ("symplectic", BiDer0::new(symplectic(), zero_end(2, 1)).unwrap(), true),
        ("so(3), zero end part", BiDer0::new(so3(), zero_end(3, 1)).unwrap(), true),
        ("so(3), rank 2", BiDer0::new(so3(), zero_end(3, 2)).unwrap(), true),
        (
            "symplectic, constant end part",
            BiDer0::new(symplectic(), vec![constant(&[&[1, 2], &[0, 1]], 2), constant(&[&[3, 4], &[0, 3]], 2)]).unwrap(),
            true,
        ),
        ("x1*x2 bivector", BiDer0::from_bivector(skew(&[&["x1*x2"]], 2), 1).unwrap(), true),
        ("symplectic, end part x2", BiDer0::new(symplectic(), vec![scalar2("x2"), scalar2("0")]).unwrap(), true),
        (
            "so(3), end part x_i",
            BiDer0::new(so3(), (0..3).map(|i| PolyMat::scalar(1, &Poly::var(3, i))).collect()).unwrap(),
            false,
        ),
        (
            "symplectic, non-commuting constants",
            BiDer0::new(symplectic(), vec![constant(&[&[1, 2], &[0, 1]], 2), constant(&[&[0, 0], &[1, 0]], 2)]).unwrap(),
            false,
        ),
        ("non-Poisson bivector", BiDer0::from_bivector(skew(&[&["x3", "x1"], &["0"], &[]], 3), 1).unwrap(), false),
        (
            "end part breaking the module condition",
            {
                let mut end = zero_end(3, 1);
                end[2] = PolyMat::scalar(1, &p("x2", 3));
                BiDer0::new(skew(&[&["x1", "0"], &["0"], &[]], 3), end).unwrap()
            },
            false,
        ),
        ("symplectic, end part (x2, x2)", BiDer0::new(symplectic(), vec![scalar2("x2"), scalar2("x2")]).unwrap(), false),
    ]
}

fn poisson_equivalence() -> Outcome {
    let structures = poisson_structures();
    ensure(structures.len() >= 10, || "fewer than 10 structures".into())?;
    ensure(structures.iter().filter(|s| !s.2).count() >= 3, || "fewer than 3 designed failures".into())?;
    for (name, pi, expected) in &structures {
        let pde = is_poisson0(pi).holds();
        let schouten = schouten_vanishes(&pi.as_multi(), pi.n(), pi.m(), 2);
        ensure(pde == schouten, || format!("{name}: PDE says {pde}, Schouten says {schouten}"))?;
        ensure(pde == *expected, || format!("{name}: expected {expected}"))?;
    }
    Ok(())
}

// 3 ─ Jacobi

fn witt_table() -> Vec<Vec<Poly>> {
    vec![vec![p("0", 1), p("1", 1)], vec![p("-1", 1), p("0", 1)]]
}

fn witt_lift(g1: &str) -> JacobiOp0 {
    let d0 = MatrixOp::diagonal(&ScalarOp::partial(1, 0), 1);
    let d1 = MatrixOp::from_poly_mat(&PolyMat::scalar(1, &p(g1, 1)));
    JacobiOp0::new(1, 1, witt_table(), vec![d0, d1]).unwrap()
}

fn jacobi_suite() -> Outcome {
    let witt = JacobiNeg1::new(1, 1, witt_table()).unwrap();
    ensure(is_jacobi_neg1(&witt).holds(), || "Witt bracket fails".into())?;
    ensure(is_jacobi0(&witt_lift("-1")).holds(), || "Witt lift fails".into())?;
    for (name, pi, expected) in poisson_structures() {
        if expected {
            ensure(is_jacobi0(&JacobiOp0::from_poisson(&pi)).holds(), || format!("lift of {name} fails"))?;
        }
    }
    let broken = is_jacobi0(&witt_lift("x1"));
    ensure(!broken.residuals.is_empty() && broken.residuals.iter().all(|r| !r.value.is_zero()), || {
        "non-constant G1 not rejected".into()
    })?;
    // E = x1∂1 does not preserve Λ = ∂1∧∂2
    let c = vec![
        vec![p("0", 2), p("x1", 2), p("0", 2)],
        vec![p("-x1", 2), p("0", 2), p("1", 2)],
        vec![p("0", 2), p("-1", 2), p("0", 2)],
    ];
    let report = is_jacobi_neg1(&JacobiNeg1::new(2, 1, c).unwrap());
    ensure(!report.holds() && report.residuals.iter().all(|r| !r.value.is_zero()), || {
        "rescaled contact bracket not rejected".into()
    })
}

// 4 ─ graded Lie structure

fn random_der(s: &mut Sampler, degree: i32, n: usize, m: usize) -> Der {
    match degree {
        -1 => Der::Neg1(DerNeg1::new(vec![random_poly(s, n, 2)]).unwrap()),
        0 => Der::Zero(Der0::new(random_vector_field(s, n, 2), random_poly_mat(s, n, m, 1)).unwrap()),
        _ => Der::One(Der1::new(n, (0..m).map(|_| random_vector_field(s, n, 2)).collect()).unwrap()),
    }
}

fn random_diff(s: &mut Sampler, degree: i32, n: usize, m: usize) -> DiffOp {
    let k = s.range(0, 2);
    match degree {
        -1 => {
            let k = k.max(1);
            DiffOp::Neg1(DiffOpNeg1::new(k, vec![random_scalar_op(s, n, k - 1, 1)]).unwrap())
        }
        0 => {
            let mp = if k == 0 { MatrixOp::zero_square(n, m) } else { random_matrix_op(s, n, m, k - 1, 1) };
            DiffOp::Zero(DiffOp0::new(k, random_scalar_op(s, n, k, 1), mp).unwrap())
        }
        _ => DiffOp::One(DiffOp1::new(k, n, (0..m).map(|_| random_scalar_op(s, n, k, 1)).collect()).unwrap()),
    }
}

/// `Σ sign·value` of linear maps given by their values on a probe list.
fn combine(parts: &[(bool, Vec<DiolicElement>)]) -> Vec<DiolicElement> {
    let len = parts[0].1.len();
    (0..len)
        .map(|i| {
            let mut acc = parts[0].1[i].clone();
            if parts[0].0 {
                acc = -&acc;
            }
            for (neg, vals) in &parts[1..] {
                acc = if *neg { &acc - &vals[i] } else { &acc + &vals[i] };
            }
            acc
        })
        .collect()
}

fn graded_identities<T>(
    a: &T,
    b: &T,
    c: &T,
    degree: impl Fn(&T) -> i32,
    bracket: impl Fn(&T, &T) -> T,
    values: impl Fn(&T) -> Vec<DiolicElement>,
) -> Outcome {
    let (da, db) = (degree(a), degree(b));
    let ab = bracket(a, b);
    let ba = bracket(b, a);
    let skew = combine(&[(false, values(&ab)), (odd(da, db), values(&ba))]);
    ensure(skew.iter().all(DiolicElement::is_zero), || format!("skew fails for degrees ({da}, {db})"))?;
    // [a,[b,c]] = [[a,b],c] + (−1)^{|a||b|}[b,[a,c]]
    let lhs = values(&bracket(a, &bracket(b, c)));
    let jac = combine(&[
        (false, lhs),
        (true, values(&bracket(&ab, c))),
        (!odd(da, db), values(&bracket(b, &bracket(a, c)))),
    ]);
    ensure(jac.iter().all(DiolicElement::is_zero), || format!("Jacobi fails for degrees ({da}, {db}, {})", degree(c)))
}

fn graded_lie() -> Outcome {
    let mut s = Sampler::new(0x5eed_0004);
    let degrees = [-1, 0, 1];
    for case in 0..100 {
        let ds = [degrees[s.below(3)], degrees[s.below(3)], degrees[s.below(3)]];
        let n = 1 + s.below(2);
        let m = if ds.contains(&-1) { 1 } else { 1 + s.below(2) };
        let [a, b, c] = ds.map(|d| random_der(&mut s, d, n, m));
        let probes = derivation_probes(n, m);
        graded_identities(
            &a,
            &b,
            &c,
            Der::degree,
            |x, y| graded_commutator_der(x, y).unwrap(),
            |d| probes.iter().map(|e| d.apply(e)).collect(),
        )
        .map_err(|e| format!("derivations, case {case}: {e}"))?;

        let [a, b, c] = ds.map(|d| random_diff(&mut s, d, n, m));
        let depth = a.k() + b.k() + c.k();
        let probes = operator_probes(n, m, depth);
        graded_identities(
            &a,
            &b,
            &c,
            DiffOp::degree,
            |x, y| graded_commutator_diff(x, y).unwrap(),
            |d| probes.iter().map(|e| d.apply(e)).collect(),
        )
        .map_err(|e| format!("operators, case {case}: {e}"))?;
    }
    for _ in 0..20 {
        let (n, m) = (1 + s.below(2), 1 + s.below(2));
        let (x, y) = (random_der(&mut s, 1, n, m), random_der(&mut s, 1, n, m));
        ensure(graded_commutator_der(&x, &y).unwrap().is_zero(), || "[Der1, Der1] ≠ 0".into())?;
        let (x, y) = (random_diff(&mut s, 1, n, m), random_diff(&mut s, 1, n, m));
        let z = graded_commutator_diff(&x, &y).unwrap();
        ensure(z.is_zero() && operator_probes(n, m, 4).iter().all(|e| z.apply(e).is_zero()), || {
            "[Diff1, Diff1] ≠ 0".into()
        })?;
    }
    Ok(())
}

// 5 ─ order arithmetic

fn random_diffop0(s: &mut Sampler, n: usize, m: usize, k: u32) -> DiffOp0 {
    let box_a = random_scalar_op_of_order(s, n, k, 1);
    let mp = if k == 0 { MatrixOp::zero_square(n, m) } else { random_matrix_op(s, n, m, k - 1, 1) };
    DiffOp0::new(k, box_a, mp).unwrap()
}

fn order_arithmetic() -> Outcome {
    let mut s = Sampler::new(0x5eed_0005);
    for case in 0..100 {
        let (n, m) = (1 + s.below(2), 1 + s.below(2));
        let (k, l) = (s.range(1, 3), s.range(1, 3));
        let (a, b) = (DiffOp::Zero(random_diffop0(&mut s, n, m, k)), DiffOp::Zero(random_diffop0(&mut s, n, m, l)));
        let c = graded_commutator_diff(&a, &b).unwrap();
        let DiffOp::Zero(c0) = &c else {
            return Err(format!("case {case}: commutator left degree 0"));
        };
        let bound = i64::from(k + l) - 1;
        ensure(c0.box_a().order_at_most(bound), || format!("case {case}: scalar part above k+l-1"))?;
        ensure(c0.matrix_part().order_at_most(bound - 1), || format!("case {case}: matrix part above k+l-2"))?;
        ensure(commutator_matches_composition(&a, &b, &c), || format!("case {case}: disagrees with composition"))?;
    }
    Ok(())
}

// 6 ─ Atiyah sequences

fn atiyah_sequences() -> Outcome {
    let mut s = Sampler::new(0x5eed_0006);
    for k in 0..=3u32 {
        for n in 1..=2 {
            for m in 1..=2 {
                for sigma in diolic::monomials_up_to(n, k) {
                    let op = ScalarOp::derivative(sigma.clone());
                    let split = atiyah_split(&op, k, m).unwrap();
                    ensure(atiyah_project(&split) == op, || format!("project∘split ≠ id at {sigma:?}"))?;
                }
                // kernel of the projection: (0, M) with M of order ≤ k − 1
                let zero = ScalarOp::zero(n);
                if k >= 1 {
                    let inside = random_matrix_op(&mut s, n, m, k - 1, 1);
                    let kept = DiffOp0::new(k, zero.clone(), inside).unwrap();
                    ensure(atiyah_project(&kept).is_zero(), || "kernel element projects to nonzero".into())?;
                }
                let mut top = vec![0; n];
                top[0] = k;
                let too_big = MatrixOp::diagonal(&ScalarOp::derivative(MultiIndex::new(top)), m);
                ensure(DiffOp0::new(k, zero, too_big).is_err(), || format!("order-{k} matrix part accepted at k = {k}"))?;
            }
        }
    }
    let w1 = der_neg1_obstruction(1);
    let w2 = der_neg1_obstruction(2);
    ensure(w1.nullity == 1 && w2.nullity == 0 && w2.relations > 0, || format!("obstruction witnesses {w1:?}, {w2:?}"))?;
    let phi = p("x1", 1);
    ensure(DerNeg1::new(vec![phi.clone()]).is_ok(), || "rank-one DerNeg1 rejected".into())?;
    ensure(DerNeg1::new(vec![phi.clone(), phi]).is_err(), || "rank-two DerNeg1 accepted".into())?;
    let op = ScalarOp::partial(1, 0);
    ensure(DiffOpNeg1::new(2, vec![op.clone()]).is_ok(), || "rank-one DiffOpNeg1 rejected".into())?;
    ensure(DiffOpNeg1::new(2, vec![op.clone(), op]).is_err(), || "rank-two DiffOpNeg1 accepted".into())
}

// 7 ─ λᵏ kernel

fn lambda_kernel() -> Outcome {
    let mut s = Sampler::new(0x5eed_0007);
    let (mut inside, mut outside) = (0, 0);
    for case in 0..50 {
        let (n, m) = (1 + s.below(2), 1 + s.below(2));
        let k = s.range(1, 3);
        // drop one or both parts below their top order about half the time
        let a_order = if s.coin(0.5) { k - 1 } else { k };
        let m_order = if s.coin(0.5) { k.checked_sub(2) } else { Some(k - 1) };
        let box_a = random_scalar_op_of_order(&mut s, n, a_order, 1);
        let mp = match m_order {
            Some(o) => random_matrix_op(&mut s, n, m, o, 1),
            None => MatrixOp::zero_square(n, m),
        };
        let b = DiffOp0::new(k, box_a, mp).unwrap();
        let lower = verify_order(b.box_a(), k - 1)
            && if k >= 2 { verify_order(b.matrix_part(), k - 2) } else { b.matrix_part().is_zero() };
        let vanishes = lambda_k_vanishes(&b).unwrap();
        ensure(vanishes == lower, || format!("case {case}: λ vanishes = {vanishes}, lower order = {lower}"))?;
        if lower {
            inside += 1;
        } else {
            outside += 1;
        }
    }
    ensure(inside > 0 && outside > 0, || format!("degenerate sample: {inside} in the kernel, {outside} outside"))
}

// 8 ─ complexes

fn random_form(s: &mut Sampler, n: usize, m: usize, k: usize) -> FatForm {
    let mut w = FatForm::zero(n, m, k);
    for t in subsets(n + m * m, k) {
        if s.coin(0.5) {
            let v = PolyVec::new(n, (0..m).map(|_| random_poly(s, n, 2)).collect()).unwrap();
            w.set(&t, v).unwrap();
        }
    }
    w
}

fn rat_table(v: &[(usize, usize, usize, i64)], r: usize) -> Vec<Vec<Vec<Rational>>> {
    let mut c = vec![vec![vec![int(0); r]; r]; r];
    for &(a, b, g, x) in v {
        c[a][b][g] = int(x);
        c[b][a][g] = int(-x);
    }
    c
}

fn ce_suites() -> Vec<(&'static str, CEData, Vec<usize>)> {
    let sl2 = rat_table(&[(0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)], 3);
    let adjoint: Vec<Vec<Vec<Rational>>> =
        (0..3).map(|a| (0..3).map(|g| (0..3).map(|b| sl2[a][b][g].clone()).collect()).collect()).collect();
    let trivial = |r: usize| vec![vec![vec![int(0)]]; r];
    vec![
        ("abelian ℚ², trivial", CEData::new(rat_table(&[], 2), 1, trivial(2)).unwrap(), vec![1, 2, 1]),
        ("sl2, adjoint", CEData::new(sl2.clone(), 3, adjoint).unwrap(), vec![0, 0, 0, 0]),
        ("sl2, trivial", CEData::new(sl2, 1, trivial(3)).unwrap(), vec![1, 0, 0, 1]),
    ]
}

fn complexes() -> Outcome {
    let mut s = Sampler::new(0x5eed_0008);
    let mut nonzero = 0;
    for case in 0..100 {
        let (n, m) = (1 + s.below(2), 1 + s.below(2));
        let k = s.below(3).min(n + m * m - 2);
        let w = random_form(&mut s, n, m, k);
        let dw = der_differential(&w).unwrap();
        nonzero += usize::from(!dw.is_zero());
        let ddw = der_differential(&dw).unwrap();
        ensure(ddw.is_zero(), || format!("case {case}: ∂² ≠ 0 on a ({n}, {m}) form of degree {k}"))?;
    }
    ensure(nonzero >= 50, || format!("only {nonzero} forms have a nonzero differential"))?;
    for (name, data, golden) in ce_suites() {
        for p in 0..data.dim().saturating_sub(1) {
            let mut t = CeCochain::zero(p, data.rep_dim());
            for key in subsets(data.dim(), p) {
                t.set(&key, (0..data.rep_dim()).map(|_| int(s.below(7) as i64 - 3)).collect()).unwrap();
            }
            let dd = ce_differential(&data, &ce_differential(&data, &t).unwrap()).unwrap();
            ensure(dd.is_zero(), || format!("{name}: d² ≠ 0 in degree {p}"))?;
        }
        let betti = ce_cohomology(&data);
        ensure(betti == golden, || format!("{name}: betti {betti:?}, expected {golden:?}"))?;
        let dims: Vec<usize> = (0..=data.dim()).map(|p| subsets(data.dim(), p).len() * data.rep_dim()).collect();
        ensure(euler_characteristic(&dims) == euler_characteristic(&betti), || format!("{name}: Euler mismatch"))?;
    }
    let betti = der_cohomology_truncated(1, 1, 3, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(betti == vec![0, 0, 0], || format!("Der(1,1,3) betti {betti:?}"))?;
    let dims = der_cochain_dims(1, 1, 3);
    ensure(euler_characteristic(&dims) == euler_characteristic(&betti), || "Der Euler mismatch".into())
}

// 9 ─ algebroids

fn algebroids() -> Outcome {
    let so3 = |perturb: bool| {
        let mut c = vec![vec![vec![Poly::zero(1); 3]; 3]; 3];
        for (a, b, g) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[a][b][g] = p("1", 1);
            c[b][a][g] = p("-1", 1);
        }
        if perturb {
            c[2][0][0] = p("x1", 1);
            c[0][2][0] = p("-x1", 1);
        }
        BiDerNeg1::new(1, vec![vec![Poly::zero(1)]; 3], c).unwrap()
    };
    let tangent = BiDerNeg1::new(
        2,
        vec![vec![p("1", 2), p("0", 2)], vec![p("0", 2), p("1", 2)]],
        vec![vec![vec![Poly::zero(2); 2]; 2]; 2],
    )
    .unwrap();
    ensure(is_lie_algebroid(&tangent).holds(), || "tangent algebroid fails".into())?;
    ensure(is_lie_algebroid(&so3(false)).holds(), || "so(3) bundle fails".into())?;
    let report = is_lie_algebroid(&so3(true));
    ensure(
        report.residuals.iter().any(|r| r.equation.starts_with("jacobi") && !r.value.is_zero()),
        || format!("perturbed so(3) gives {:?}", report.residuals),
    )
}

// 10 ─ CLI

fn problems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems")
}

/// Documented exit code of every shipped problem file.
const EXPECTED_EXIT: &[(&str, i32)] = &[
    ("abelian2_trivial.json", 0),
    ("bracket_der0.json", 0),
    ("bracket_der1.json", 0),
    ("bracket_symbol.json", 0),
    ("contact_rescaled_jacobi_neg1_fail.json", 1),
    ("der_cohomology_1_1_3.json", 0),
    ("diolic_diffop_fail.json", 1),
    ("diolic_diffop_pass.json", 0),
    ("k_connection_fail.json", 1),
    ("k_connection_pass.json", 0),
    ("perturbed_poisson.json", 1),
    ("perturbed_so3_algebroid.json", 1),
    ("sl2_adjoint.json", 0),
    ("sl2_broken_rep.json", 1),
    ("sl2_trivial.json", 0),
    ("so3_bundle_algebroid.json", 0),
    ("so3_poisson.json", 0),
    ("so3_scalar_end_fail.json", 1),
    ("symbol_example.json", 0),
    ("symplectic_constant_end.json", 0),
    ("symplectic_jacobi0.json", 0),
    ("tangent_algebroid.json", 0),
    ("witt_jacobi0.json", 0),
    ("witt_jacobi0_fail.json", 1),
    ("witt_jacobi_neg1.json", 0),
];

fn run_cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_diolic")).args(args).output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn cli_determinism() -> Outcome {
    let mut shipped: Vec<String> = std::fs::read_dir(problems_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|name| name.ends_with(".json"))
        .collect();
    shipped.sort();
    let listed: Vec<&str> = EXPECTED_EXIT.iter().map(|(f, _)| *f).collect();
    ensure(shipped == listed, || format!("shipped files {shipped:?} differ from the expectation table"))?;

    let caps = Caps::default();
    for (file, code) in EXPECTED_EXIT {
        let path = problems_dir().join(file);
        let path_str = path.to_str().unwrap();
        let (first, c1) = run_cli(&["check", path_str]);
        let (second, c2) = run_cli(&["check", path_str]);
        ensure(first == second, || format!("{file}: reports differ between runs"))?;
        ensure(c1 == *code && c2 == *code, || format!("{file}: exit {c1}, expected {code}"))?;

        let problem = ProblemFile::read(&path).map_err(|e| format!("{file}: {e}"))?;
        let reparsed = ProblemFile::from_json(&problem.to_json()).map_err(|e| format!("{file}: {e}"))?;
        ensure(reparsed == problem, || format!("{file}: parse∘print ≠ id"))?;
        let canon = problem.canonical().map_err(|e| format!("{file}: {e}"))?;
        ensure(canon.canonical().map_err(|e| e.to_string())? == canon, || format!("{file}: canonical form not stable"))?;
        let original = commands::check(&problem, &caps).map_err(|e| format!("{file}: {e}"))?;
        let normalized = commands::check(&canon, &caps).map_err(|e| format!("{file}: {e}"))?;
        ensure(original == normalized, || format!("{file}: canonical form changes the report"))?;
        ensure(original.to_json().as_bytes() == first.strip_suffix(b"\n").unwrap_or(&first), || {
            format!("{file}: library and binary reports differ")
        })?;
    }

    let dir = problems_dir();
    let cases: [(Vec<String>, &str, i32); 4] = [
        (
            vec!["cohomology".into(), "--ce".into(), dir.join("sl2_adjoint.json").display().to_string()],
            "\"betti\":[0,0,0,0]",
            0,
        ),
        (
            vec!["cohomology".into(), "--ce".into(), dir.join("abelian2_trivial.json").display().to_string()],
            "\"betti\":[1,2,1]",
            0,
        ),
        (vec!["cohomology".into(), "--der".into(), "1".into(), "1".into(), "3".into()], "\"betti\":[0,0,0]", 0),
        (
            vec!["bracket".into(), "--kind".into(), "symbol".into(), "k1".into(), "x1*k1".into()],
            "\"value\":\"k1\"",
            0,
        ),
    ];
    for (args, needle, code) in &cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (out, c) = run_cli(&argv);
        let text = String::from_utf8_lossy(&out);
        ensure(text.contains(needle) && c == *code, || format!("{args:?}: got {text} (exit {c})"))?;
    }
    Ok(())
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, title: "symbol of composition and commutator", limit: secs(10), run: symbol_homomorphism },
        Criterion { id: 2, title: "Poisson PDE agrees with Schouten square", limit: secs(30), run: poisson_equivalence },
        Criterion { id: 3, title: "Jacobi suite", limit: secs(10), run: jacobi_suite },
        Criterion { id: 4, title: "graded skew symmetry and Jacobi identity", limit: secs(20), run: graded_lie },
        Criterion { id: 5, title: "order arithmetic of degree-0 commutators", limit: None, run: order_arithmetic },
        Criterion { id: 6, title: "Atiyah sequences and the rank obstruction", limit: None, run: atiyah_sequences },
        Criterion { id: 7, title: "lambda kernel is diolic order k-1", limit: None, run: lambda_kernel },
        Criterion { id: 8, title: "Der and Chevalley-Eilenberg complexes", limit: secs(30), run: complexes },
        Criterion { id: 9, title: "Lie algebroid checker", limit: secs(5), run: algebroids },
        Criterion { id: 10, title: "CLI determinism and round trip", limit: None, run: cli_determinism },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(()), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let limit = c.limit.map(|l| format!(", limit {l:?}")).unwrap_or_default();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {} ({elapsed:.2?}{limit})", c.id, c.title),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {} ({elapsed:.2?}{limit}): {e}", c.id, c.title);
            }
        }
    }
    let _ = panic::take_hook();
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
