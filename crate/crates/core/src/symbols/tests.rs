use super::*;
use crate::diolic_diffops::graded_commutator_diff;
use crate::sample::{random_matrix_op, random_poly, random_scalar_op, Sampler};
use proptest::prelude::*;

fn sp(text: &str, n: usize) -> SymbolPoly {
    SymbolPoly::parse(text, n).unwrap()
}

fn op(terms: &[(&[u32], &str)], n: usize) -> ScalarOp {
    ScalarOp::from_terms(
        n,
        terms.iter().map(|(s, a)| (MultiIndex::new(s.to_vec()), Poly::parse(a, n).unwrap())),
    )
    .unwrap()
}

#[test]
fn parse_and_display() {
    let s = sp("x1*k1^2 - 3*k2^2", 2);
    assert_eq!(s.k(), 2);
    assert_eq!(sp(&s.to_string(), 2), s);
    assert!(SymbolPoly::parse("k1 + x1", 1).is_err());
    assert!(SymbolPoly::parse("x1*k1^2 - 3*k2", 2).is_err());
    assert!(SymbolPoly::parse("k3", 2).is_err());
    assert_eq!(sp("0", 2).k(), 0);
}

#[test]
fn scalar_symbol_examples() {
    let d = op(&[(&[2, 0], "x1"), (&[0, 1], "1")], 2);
    assert_eq!(smbl_scalar(&d, 2).unwrap(), sp("x1*k1^2", 2));
    assert!(smbl_scalar(&op(&[(&[0, 1], "1")], 2), 2).unwrap().is_zero());
    assert_eq!(smbl_scalar(&ScalarOp::mult(Poly::parse("x1^2", 1).unwrap()), 0).unwrap(), sp("x1^2", 1));
    assert_eq!(smbl_scalar(&d, 1), Err(Error::OrderExceeded { found: 2, bound: 1 }));
}

#[test]
fn product_examples() {
    assert_eq!(star(&sp("k1", 1), &sp("x1*k1", 1)).unwrap(), sp("x1*k1^2", 1));
    let d1 = ScalarOp::partial(1, 0);
    let x1d1 = op(&[(&[1], "x1")], 1);
    let composed = smbl_scalar(&d1.compose(&x1d1), 2).unwrap();
    assert_eq!(composed, sp("x1*k1^2", 1));
    assert_eq!(composed, star(&smbl_scalar(&d1, 1).unwrap(), &smbl_scalar(&x1d1, 1).unwrap()).unwrap());
    assert!(star(&sp("k1", 1), &sp("0", 1)).unwrap().is_zero());
    assert!(star(&sp("k1", 1), &sp("k1", 2)).is_err());
}

#[test]
fn bracket_examples() {
    let b = poisson_bracket(&sp("k1", 1), &sp("x1", 1)).unwrap();
    assert_eq!(b, sp("1", 1));
    let d1 = ScalarOp::partial(1, 0);
    let x1 = ScalarOp::mult(Poly::parse("x1", 1).unwrap());
    assert_eq!(smbl_scalar(&d1.commutator(&x1), 0).unwrap(), b);
    assert!(poisson_bracket(&sp("k1", 2), &sp("k2", 2)).unwrap().is_zero());
    assert!(poisson_bracket(&sp("x1*k1", 1), &sp("x1*k1", 1)).unwrap().is_zero());
    assert_eq!(hamiltonian_apply(&sp("k1", 1), &sp("x1^2", 1)).unwrap(), sp("2*x1", 1));
    assert!(hamiltonian_apply(&sp("x1*k1^2", 1), &sp("1", 1)).unwrap().is_zero());
}

fn random_symbol(s: &mut Sampler, n: usize, k: u32) -> SymbolPoly {
    let op = random_scalar_op(s, n, k, 2);
    top_part(&op, k)
}

fn sum3(a: &SymbolPoly, b: &SymbolPoly, c: &SymbolPoly) -> SymbolPoly {
    &(a + b) + c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symbol_of_composition_is_the_product(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = 1 + s.below(2);
        let (k, l) = (s.range(0, 3), s.range(0, 3));
        let (d, e) = (random_scalar_op(&mut s, n, k, 2), random_scalar_op(&mut s, n, l, 2));
        let lhs = smbl_scalar(&d.compose(&e), k + l).unwrap();
        let rhs = star(&smbl_scalar(&d, k).unwrap(), &smbl_scalar(&e, l).unwrap()).unwrap();
        prop_assert_eq!(lhs.poly(), rhs.poly());
    }

    #[test]
    fn symbol_of_commutator_is_the_bracket(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = 1 + s.below(2);
        let (k, l) = (s.range(0, 3), s.range(0, 3));
        prop_assume!(k + l > 0);
        let (d, e) = (random_scalar_op(&mut s, n, k, 2), random_scalar_op(&mut s, n, l, 2));
        let lhs = smbl_scalar(&d.commutator(&e), k + l - 1).unwrap();
        let rhs = poisson_bracket(&smbl_scalar(&d, k).unwrap(), &smbl_scalar(&e, l).unwrap()).unwrap();
        prop_assert_eq!(lhs.poly(), rhs.poly());
    }

    #[test]
    fn bracket_is_skew_leibniz_and_jacobi(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = 2;
        let (f, g, h) = (random_symbol(&mut s, n, 1), random_symbol(&mut s, n, 2), random_symbol(&mut s, n, 1));
        prop_assert_eq!(bracket(&f, &g), -&bracket(&g, &f));
        let lhs = bracket(&f, &mul(&g, &h));
        let rhs = &mul(&bracket(&f, &g), &h) + &mul(&g, &bracket(&f, &h));
        prop_assert_eq!(lhs.poly(), rhs.poly());
        let jac = sum3(
            &bracket(&f, &bracket(&g, &h)),
            &bracket(&g, &bracket(&h, &f)),
            &bracket(&h, &bracket(&f, &g)),
        );
        prop_assert!(jac.is_zero());
    }
}

fn diffop0(terms: &[(&[u32], &str)], m_part: MatrixOp, k: u32, n: usize) -> DiffOp0 {
    DiffOp0::new(k, op(terms, n), m_part).unwrap()
}

#[test]
fn diolic_symbol_examples() {
    let n = 2;
    let zero_sym = |k| SymbolPoly::zero(n, k);
    let x1 = MatrixOp::diagonal(&ScalarOp::mult(Poly::parse("x1", 2).unwrap()), 1);
    let b = diffop0(&[(&[2, 0], "1")], x1, 2, n);
    let sym = diolic_symbol0(&b);
    assert_eq!(sym.scalar(), &sp("k1^2", 2));
    assert!(sym.matrix()[0][0].is_zero());

    let d2 = MatrixOp::diagonal(&ScalarOp::partial(2, 1), 1);
    let sym = diolic_symbol0(&diffop0(&[(&[2, 0], "1")], d2, 2, n));
    assert_eq!(sym, DiolicSymbol0::new(2, sp("k1^2", 2), vec![vec![sp("k2", 2)]]).unwrap());

    let lower = diffop0(&[(&[1, 0], "x2"), (&[0, 0], "1")], MatrixOp::zero_square(n, 1), 2, n);
    assert!(diolic_symbol0(&lower).is_zero());
    assert_eq!(diolic_symbol0(&lower).scalar(), &zero_sym(2));

    let b1 = DiffOp1::new(1, n, vec![ScalarOp::partial(2, 0), ScalarOp::partial(2, 1)]).unwrap();
    let sym = diolic_symbol1(&b1);
    assert_eq!(sym.comps(), &[sp("k1", 2), sp("k2", 2)]);
}

#[test]
fn diolic_bracket_examples() {
    let n = 1;
    let s = DiolicSymbol0::new(2, sp("k1^2", 1), vec![vec![SymbolPoly::zero(n, 1)]]).unwrap();
    let t = DiolicSymbol1::new(1, vec![sp("x1*k1", 1)]).unwrap();
    let got = diolic_poisson_bracket(&s, &t).unwrap();
    assert_eq!(got.comps(), &[sp("2*k1^2", 1)]);
    let b0 = DiffOp0::new(2, ScalarOp::derivative(MultiIndex::new(vec![2])), MatrixOp::zero_square(1, 1)).unwrap();
    let b1 = DiffOp1::new(1, 1, vec![op(&[(&[1], "x1")], 1)]).unwrap();
    let comm = graded_commutator_diff(&DiffOp::Zero(b0), &DiffOp::One(b1)).unwrap();
    assert_eq!(diolic_symbol(&comm), DiolicSymbol::One(got));

    // s = 0 with a constant matrix part: only Σ Ms ⋆ T survives
    let s = DiolicSymbol0::new(1, SymbolPoly::zero(2, 1), vec![vec![sp("2", 2), sp("0", 2)], vec![sp("1", 2), sp("-1", 2)]]).unwrap();
    let t = DiolicSymbol1::new(2, vec![sp("x1*k2^2", 2), sp("k1*k2", 2)]).unwrap();
    let got = diolic_poisson_bracket(&s, &t).unwrap();
    assert_eq!(got.comps(), &[sp("2*x1*k2^2", 2), sp("x1*k2^2 - k1*k2", 2)]);

    let wrong_rank = DiolicSymbol1::new(2, vec![sp("k1^2", 2)]).unwrap();
    assert!(diolic_poisson_bracket(&s, &wrong_rank).is_err());
}

fn random_diffop(s: &mut Sampler, degree: i32, n: usize, m: usize) -> DiffOp {
    let k = s.range(0, 2);
    match degree {
        0 => {
            let a = random_scalar_op(s, n, k, 1);
            let mp = if k == 0 { MatrixOp::zero_square(n, m) } else { random_matrix_op(s, n, m, k - 1, 1) };
            DiffOp::Zero(DiffOp0::new(k, a, mp).unwrap())
        }
        1 => DiffOp::One(DiffOp1::new(k, n, (0..m).map(|_| random_scalar_op(s, n, k, 1)).collect()).unwrap()),
        _ => {
            let k = k.max(1);
            DiffOp::Neg1(DiffOpNeg1::new(k, vec![random_scalar_op(s, n, k - 1, 1)]).unwrap())
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn diolic_bracket_is_the_symbol_of_the_commutator(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = 1 + s.below(2);
        let pairs = [(0, 0), (0, 1), (1, 0), (0, -1), (-1, 0), (-1, 1), (1, -1), (1, 1)];
        let (d1, d2) = pairs[s.below(pairs.len())];
        let m = if d1 < 0 || d2 < 0 { 1 } else { 1 + s.below(2) };
        let (x, y) = (random_diffop(&mut s, d1, n, m), random_diffop(&mut s, d2, n, m));
        let comm = graded_commutator_diff(&x, &y).unwrap();
        let want = diolic_symbol(&comm);
        let got = diolic_bracket(&diolic_symbol(&x), &diolic_symbol(&y)).unwrap();
        prop_assert_eq!(got, want, "degrees ({}, {})", d1, d2);
    }

    #[test]
    fn degree_zero_bracket_is_skew(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let m = 1 + s.below(2);
        let (x, y) = (random_diffop(&mut s, 0, 2, m), random_diffop(&mut s, 0, 2, m));
        let (sx, sy) = (diolic_symbol(&x), diolic_symbol(&y));
        prop_assert_eq!(diolic_bracket(&sx, &sy).unwrap(), diolic_bracket(&sy, &sx).unwrap().negate());
    }

    #[test]
    fn symbol_sequence_is_exact(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let m = 1 + s.below(2);
        let DiffOp::Zero(b) = random_diffop(&mut s, 0, 2, m) else { unreachable!() };
        let sym = diolic_symbol0(&b);
        // the split lift is a right inverse
        prop_assert_eq!(diolic_symbol0(&lift_symbol0(&sym)), sym.clone());
        // and the difference lies in the kernel, which is diolic order k − 1
        let lift = lift_symbol0(&sym);
        let diff_a = b.box_a() - lift.box_a();
        let diff_m = b.matrix_part() - lift.matrix_part();
        let k = i64::from(b.k());
        prop_assert!(diff_a.order_at_most(k - 1));
        prop_assert!(diff_m.order_at_most(k - 2));
    }

    #[test]
    fn lambda_kernel_is_diolic_order_below_k(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = 1 + s.below(2);
        let m = 1 + s.below(2);
        let k = s.range(1, 3);
        let drop_top = s.coin(0.5);
        let a = random_scalar_op(&mut s, n, if drop_top { k - 1 } else { k }, 1);
        let mp = if k == 1 || (drop_top && s.coin(0.5)) {
            if k >= 2 { random_matrix_op(&mut s, n, m, k - 2, 1) } else { MatrixOp::zero_square(n, m) }
        } else {
            random_matrix_op(&mut s, n, m, k - 1, 1)
        };
        let mp = if k == 1 { random_matrix_op(&mut s, n, m, 0, 1) } else { mp };
        let b = DiffOp0::new(k, a, mp).unwrap();
        let lower = b.box_a().order_at_most(i64::from(k) - 1) && b.matrix_part().order_at_most(i64::from(k) - 2);
        prop_assert_eq!(lambda_k_vanishes(&b).unwrap(), lower);
        prop_assert_eq!(lower, diolic_symbol0(&b).is_zero());
    }

    #[test]
    fn lambda_is_symmetric(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let b = DiffOp0::new(3, random_scalar_op(&mut s, 2, 3, 1), random_matrix_op(&mut s, 2, 2, 2, 1)).unwrap();
        let (a1, a2) = (random_poly(&mut s, 2, 2), random_poly(&mut s, 2, 2));
        prop_assert_eq!(lambda_k(&b, &[a1.clone(), a2.clone()]).unwrap(), lambda_k(&b, &[a2, a1]).unwrap());
    }
}

#[test]
fn lambda_examples() {
    let b = diffop0(&[(&[2], "1")], MatrixOp::zero_square(1, 1), 2, 1);
    let d = lambda_k(&b, &[Poly::parse("x1", 1).unwrap()]).unwrap();
    assert_eq!(d.x(), &VectorField::parse(&["-2"]).unwrap());
    assert!(d.g().is_zero());

    let lower = diffop0(&[(&[1], "x1"), (&[0], "3")], MatrixOp::from_poly_mat(&PolyMat::scalar(1, &Poly::parse("x1", 1).unwrap())), 2, 1);
    for a in ["x1", "x1^2", "1"] {
        assert!(lambda_k(&lower, &[Poly::parse(a, 1).unwrap()]).unwrap().is_zero());
    }
    assert!(lambda_k_vanishes(&lower).unwrap());
    assert!(lambda_k(&b, &[]).is_err());

    let b3 = diffop0(&[(&[2, 1], "x2"), (&[1, 0], "1")], MatrixOp::diagonal(&op(&[(&[0, 2], "x1")], 2), 2), 3, 2);
    let args = [Poly::parse("x1*x2", 2).unwrap(), Poly::parse("x2^2", 2).unwrap()];
    let swapped = [args[1].clone(), args[0].clone()];
    assert_eq!(lambda_k(&b3, &args).unwrap(), lambda_k(&b3, &swapped).unwrap());
}
