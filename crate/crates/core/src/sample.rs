//! Seeded random generators for property checks.
//!
//! Everything is sparse on purpose: a handful of terms with small rational
//! coefficients keeps exact arithmetic cheap while still exercising every
//! code path.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffop::{MatrixOp, ScalarOp, VectorField};
use crate::poly::{monomials_up_to, rat, MultiIndex, Poly, PolyMat, PolyVec};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn range(&mut self, lo: u32, hi: u32) -> u32 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn coefficient(&mut self) -> num_rational::BigRational {
        let mut num = self.rng.gen_range(-4i64..=4);
        if num == 0 {
            num = 1;
        }
        rat(num, self.rng.gen_range(1i64..=3))
    }

    fn index_of_degree_at_most(&mut self, n: usize, d: u32) -> MultiIndex {
        let monos = monomials_up_to(n, d);
        monos[self.below(monos.len())].clone()
    }
}

/// Up to `max_terms` terms of degree ≤ `max_deg`.
pub fn random_poly_terms(s: &mut Sampler, n: usize, max_deg: u32, max_terms: usize) -> Poly {
    let count = s.below(max_terms + 1);
    let terms: Vec<_> = (0..count)
        .map(|_| (s.index_of_degree_at_most(n, max_deg), s.coefficient()))
        .collect();
    Poly::from_terms(n, terms)
}

pub fn random_poly(s: &mut Sampler, n: usize, max_deg: u32) -> Poly {
    random_poly_terms(s, n, max_deg, 3)
}

/// A nonzero polynomial.
pub fn random_nonzero_poly(s: &mut Sampler, n: usize, max_deg: u32) -> Poly {
    loop {
        let p = random_poly(s, n, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Up to three terms `a_σ ∂^σ` with `|σ| ≤ order`; the top order is hit
/// with a fixed term so orders are spread rather than clustered low.
pub fn random_scalar_op(s: &mut Sampler, n: usize, order: u32, coeff_deg: u32) -> ScalarOp {
    let mut op = ScalarOp::zero(n);
    let count = 1 + s.below(3);
    for t in 0..count {
        let sigma = if t == 0 {
            let k = s.range(0, order);
            let layer: Vec<_> = monomials_up_to(n, k).into_iter().filter(|e| e.degree() == k).collect();
            layer[s.below(layer.len())].clone()
        } else {
            s.index_of_degree_at_most(n, order)
        };
        let a = random_poly_terms(s, n, coeff_deg, 2);
        op = &op + &ScalarOp::term(sigma, a);
    }
    op
}

/// An operator of order exactly `order` (nonzero top part).
pub fn random_scalar_op_of_order(s: &mut Sampler, n: usize, order: u32, coeff_deg: u32) -> ScalarOp {
    loop {
        let layer: Vec<_> = monomials_up_to(n, order)
            .into_iter()
            .filter(|e| e.degree() == order)
            .collect();
        let top = ScalarOp::term(
            layer[s.below(layer.len())].clone(),
            random_nonzero_poly(s, n, coeff_deg),
        );
        let rest = if order > 0 {
            random_scalar_op(s, n, order - 1, coeff_deg)
        } else {
            ScalarOp::zero(n)
        };
        let op = &top + &rest;
        if op.order() == Some(order) {
            return op;
        }
    }
}

pub fn random_poly_vec(s: &mut Sampler, n: usize, m: usize, max_deg: u32) -> PolyVec {
    PolyVec::new(n, (0..m).map(|_| random_poly(s, n, max_deg)).collect()).expect("same n")
}

pub fn random_poly_mat(s: &mut Sampler, n: usize, m: usize, max_deg: u32) -> PolyMat {
    PolyMat::from_fn(n, m, m, |_, _| {
        if s.coin(0.5) {
            random_poly_terms(s, n, max_deg, 2)
        } else {
            Poly::zero(n)
        }
    })
}

/// Entries of order ≤ `order`, about half of them zero.
pub fn random_matrix_op(s: &mut Sampler, n: usize, m: usize, order: u32, coeff_deg: u32) -> MatrixOp {
    MatrixOp::from_fn(n, m, m, |_, _| {
        if s.coin(0.5) {
            random_scalar_op(s, n, order, coeff_deg)
        } else {
            ScalarOp::zero(n)
        }
    })
}

pub fn random_vector_field(s: &mut Sampler, n: usize, coeff_deg: u32) -> VectorField {
    VectorField::new((0..n).map(|_| random_poly_terms(s, n, coeff_deg, 2)).collect()).expect("same n")
}
