//! Schouten bracket of graded multiderivations of `𝒜`, evaluated lazily.
//!
//! A multiderivation is known only through its values on homogeneous
//! arguments. `[[Δ, ∇]]` is evaluated by the inductive rules
//!
//! ```text
//! [[Δ, b]]      = Δ(b)
//! [[a, ∇]]      = (−1)^{|a|h + j} ∇(a)
//! [[Δ, ∇]](z)   = [[Δ, ∇(z)]] − (−1)^{|z|h + j} [[Δ(z), ∇]]
//! ```
//!
//! with `h` the degree and `j` the arity of `∇`, so no operator is ever
//! written down explicitly.

use std::fmt;
use std::rc::Rc;

use crate::poly::{Poly, PolyVec};

/// A homogeneous element of `𝒜`: degree 0 in `A`, degree 1 in `P`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Homog {
    A(Poly),
    P(PolyVec),
}

impl Homog {
    pub fn degree(&self) -> i32 {
        match self {
            Homog::A(_) => 0,
            Homog::P(_) => 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Homog::A(a) => a.is_zero(),
            Homog::P(p) => p.is_zero(),
        }
    }

    pub fn neg(&self) -> Homog {
        match self {
            Homog::A(a) => Homog::A(-a),
            Homog::P(p) => Homog::P(-p),
        }
    }

    fn add(&self, other: &Homog) -> Homog {
        match (self, other) {
            (Homog::A(a), Homog::A(b)) => Homog::A(a + b),
            (Homog::P(p), Homog::P(q)) => Homog::P(p + q),
            _ => panic!("adding elements of different degrees"),
        }
    }
}

impl fmt::Display for Homog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homog::A(a) => write!(f, "{a}"),
            Homog::P(p) => write!(f, "{p}"),
        }
    }
}

/// Values of a homogeneous multiderivation; `None` means zero (including
/// every output whose degree falls outside `{0, 1}`).
pub type Values = Rc<dyn Fn(&[Homog]) -> Option<Homog>>;

/// A graded multiderivation of given arity and degree.
#[derive(Clone)]
pub struct Multi {
    pub arity: usize,
    pub degree: i32,
    pub values: Values,
}

impl Multi {
    pub fn new(arity: usize, degree: i32, values: impl Fn(&[Homog]) -> Option<Homog> + 'static) -> Self {
        Multi {
            arity,
            degree,
            values: Rc::new(values),
        }
    }
}

#[derive(Clone)]
enum Node {
    Zero { arity: usize, degree: i32 },
    Value(Homog),
    Partial { base: Rc<Multi>, args: Vec<Homog> },
    Bracket(Box<Node>, Box<Node>),
    /// Signed sum; `true` marks a negated term.
    Sum(Vec<(bool, Node)>),
}

impl Node {
    fn arity(&self) -> usize {
        match self {
            Node::Zero { arity, .. } => *arity,
            Node::Value(_) => 0,
            Node::Partial { base, args } => base.arity - args.len(),
            Node::Bracket(d, e) => d.arity() + e.arity() - 1,
            Node::Sum(terms) => terms[0].1.arity(),
        }
    }

    fn degree(&self) -> i32 {
        match self {
            Node::Zero { degree, .. } => *degree,
            Node::Value(v) => v.degree(),
            Node::Partial { base, args } => base.degree + args.iter().map(Homog::degree).sum::<i32>(),
            Node::Bracket(d, e) => d.degree() + e.degree(),
            Node::Sum(terms) => terms[0].1.degree(),
        }
    }
}

fn odd(e: i32) -> bool {
    e.rem_euclid(2) == 1
}

fn signed(neg: bool, node: Node) -> Node {
    if neg {
        Node::Sum(vec![(true, node)])
    } else {
        node
    }
}

/// Collapses a signed sum of arity-0 nodes into a single value.
fn collapse(terms: Vec<(bool, Node)>, arity: usize, degree: i32) -> Node {
    if arity > 0 {
        return Node::Sum(terms);
    }
    let mut acc: Option<Homog> = None;
    for (neg, t) in terms {
        let v = match t {
            Node::Value(v) => v,
            Node::Zero { .. } => continue,
            Node::Sum(inner) => match collapse(inner, 0, degree) {
                Node::Value(v) => v,
                _ => continue,
            },
            _ => unreachable!("arity-0 nodes are values"),
        };
        let v = if neg { v.neg() } else { v };
        acc = Some(match acc {
            None => v,
            Some(a) => a.add(&v),
        });
    }
    match acc {
        Some(v) => Node::Value(v),
        None => Node::Zero { arity: 0, degree },
    }
}

fn insert(node: &Node, z: &Homog) -> Node {
    let arity = node.arity();
    debug_assert!(arity > 0, "inserting into a value");
    match node {
        Node::Zero { arity, degree } => Node::Zero {
            arity: arity - 1,
            degree: degree + z.degree(),
        },
        Node::Value(_) => unreachable!(),
        Node::Partial { base, args } => {
            let mut args = args.clone();
            args.push(z.clone());
            if args.len() < base.arity {
                return Node::Partial { base: base.clone(), args };
            }
            let degree = base.degree + args.iter().map(Homog::degree).sum::<i32>();
            match (base.values)(&args) {
                Some(v) => Node::Value(v),
                None => Node::Zero { arity: 0, degree },
            }
        }
        Node::Bracket(d, e) => {
            let (h, j) = (e.degree(), e.arity() as i32);
            let first = bracket(d, &insert(e, z));
            let second = bracket(&insert(d, z), e);
            let degree = node.degree() + z.degree();
            // first − (−1)^{|z|h + j} second
            collapse(vec![(false, first), (!odd(z.degree() * h + j), second)], arity - 1, degree)
        }
        Node::Sum(terms) => {
            let degree = node.degree() + z.degree();
            collapse(terms.iter().map(|(neg, t)| (*neg, insert(t, z))).collect(), arity - 1, degree)
        }
    }
}

fn bracket(d: &Node, e: &Node) -> Node {
    let (i, j) = (d.arity(), e.arity());
    let degree = d.degree() + e.degree();
    if i == 0 && j == 0 {
        return Node::Zero { arity: 0, degree };
    }
    if i + j == 0 {
        unreachable!()
    }
    match (d, e) {
        (_, Node::Zero { arity: 0, .. }) | (Node::Zero { arity: 0, .. }, _) => Node::Zero {
            arity: i + j - 1,
            degree,
        },
        (_, Node::Value(b)) => insert(d, b),
        (Node::Value(a), _) => signed(odd(a.degree() * e.degree() + j as i32), insert(e, a)),
        _ => Node::Bracket(Box::new(d.clone()), Box::new(e.clone())),
    }
}

/// `[[Δ, ∇]](z_1)⋯(z_r)` for `r = i + j − 1` arguments; `None` is zero.
pub fn schouten_eval(d: &Multi, e: &Multi, args: &[Homog]) -> Option<Homog> {
    let leaf = |m: &Multi| Node::Partial {
        base: Rc::new(m.clone()),
        args: Vec::new(),
    };
    let mut node = bracket(&leaf(d), &leaf(e));
    assert_eq!(node.arity(), args.len(), "wrong number of arguments");
    for z in args {
        node = insert(&node, z);
    }
    match node {
        Node::Value(v) if !v.is_zero() => Some(v),
        _ => None,
    }
}

/// `[[Π, Π]]` on three arguments.
pub fn schouten_self_eval(pi: &Multi, z1: &Homog, z2: &Homog, z3: &Homog) -> Option<Homog> {
    schouten_eval(pi, pi, &[z1.clone(), z2.clone(), z3.clone()])
}
