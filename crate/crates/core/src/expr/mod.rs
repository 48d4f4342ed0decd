//! Scalar-field expressions over named chart coordinates.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := '-' exponent | power
//! atom     := number | coordinate | 'pi' | 'e'
//!           | func '(' expr ')' | '(' expr ')'
//! func     := 'sin' | 'cos' | 'tan' | 'exp' | 'log' | 'sqrt'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)`. Exponents must fold to a constant integer, except on the
//! base `e` where `e^expr` means `exp(expr)`.

mod dual;
mod parser;

pub use dual::{Dual, Scalar};
pub use parser::{is_reserved, parse_expr};

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(f64),
    /// Index into the owning chart's coordinate list.
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

/// A parsed expression bound to a coordinate list.
#[derive(Clone, Debug)]
pub struct ScalarFieldExpr {
    ast: Node,
    coords: Arc<[String]>,
}

impl PartialEq for ScalarFieldExpr {
    fn eq(&self, other: &Self) -> bool {
        self.ast == other.ast && self.coords == other.coords
    }
}

/// Value, gradient and Hessian of a scalar field at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2Value {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl ScalarFieldExpr {
    pub(crate) fn from_parts(ast: Node, coords: Arc<[String]>) -> Self {
        Self { ast, coords }
    }

    /// The constant field `c` over `coords`.
    pub fn constant(c: f64, coords: &[String]) -> Self {
        Self { ast: Node::Const(c), coords: coords.into() }
    }

    pub fn ast(&self) -> &Node {
        &self.ast
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// True when no coordinate appears in the tree.
    pub fn is_constant(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Const(_) => true,
                Node::Var(_) => false,
                Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => walk(a),
                Node::Bin(_, a, b) => walk(a) && walk(b),
            }
        }
        walk(&self.ast)
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: format!("evaluating `{self}`"),
                expected: self.dim(),
                found: point.len(),
            });
        }
        Ok(())
    }

    /// Evaluates over any [`Scalar`]; `inputs` are the seeded coordinates.
    pub fn eval_with<T: Scalar>(&self, inputs: &[T]) -> Result<T> {
        let out = eval_node(&self.ast, inputs, &self.coords)?;
        if !out.real().is_finite() {
            return Err(Error::NonFinite { subexpr: self.to_string() });
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        self.check_point(point)?;
        self.eval_with(point)
    }

    /// Value and gradient, one dual pass per coordinate.
    pub fn eval_grad(&self, point: &[f64]) -> Result<(f64, DVector<f64>)> {
        self.check_point(point)?;
        let n = self.dim();
        if n == 0 {
            return Ok((self.eval_with::<f64>(&[])?, DVector::zeros(0)));
        }
        let mut grad = DVector::zeros(n);
        let mut value = 0.0;
        let mut seeded: Vec<Dual<f64>> = point.iter().map(|&x| Dual::constant(x)).collect();
        for i in 0..n {
            seeded[i].eps = 1.0;
            let r = self.eval_with(&seeded)?;
            seeded[i].eps = 0.0;
            value = r.re;
            grad[i] = r.eps;
        }
        Ok((value, grad))
    }

    /// Value, gradient and Hessian via nested duals, one pass per `i ≤ j`.
    pub fn eval_jet2(&self, point: &[f64]) -> Result<Jet2Value> {
        self.check_point(point)?;
        let n = self.dim();
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        if n == 0 {
            let value = self.eval_with::<f64>(&[])?;
            return Ok(Jet2Value { value, grad, hess });
        }
        let mut value = 0.0;
        let mut seeded: Vec<Dual<Dual<f64>>> = point
            .iter()
            .map(|&x| Dual::new(Dual::new(x, 0.0), Dual::new(0.0, 0.0)))
            .collect();
        for i in 0..n {
            for j in i..n {
                seeded[i].eps.re = 1.0;
                seeded[j].re.eps = 1.0;
                let r = self.eval_with(&seeded)?;
                seeded[i].eps.re = 0.0;
                seeded[j].re.eps = 0.0;
                value = r.re.re;
                if i == j {
                    grad[i] = r.eps.re;
                }
                hess[(i, j)] = r.eps.eps;
                hess[(j, i)] = r.eps.eps;
            }
        }
        Ok(Jet2Value { value, grad, hess })
    }
}

fn domain_err(node: &Node, coords: &[String], reason: &str) -> Error {
    Error::Domain {
        subexpr: Printer { node, coords }.to_string(),
        reason: reason.to_string(),
    }
}

fn eval_node<T: Scalar>(node: &Node, x: &[T], coords: &[String]) -> Result<T> {
    Ok(match node {
        Node::Const(c) => T::constant(*c),
        Node::Var(i) => x[*i],
        Node::Neg(a) => -eval_node(a, x, coords)?,
        Node::Bin(op, a, b) => {
            let l = eval_node(a, x, coords)?;
            let r = eval_node(b, x, coords)?;
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => {
                    if r.real() == 0.0 {
                        return Err(domain_err(node, coords, "division by zero"));
                    }
                    l / r
                }
            }
        }
        Node::Pow(a, n) => {
            let base = eval_node(a, x, coords)?;
            if *n < 0 && base.real() == 0.0 {
                return Err(domain_err(node, coords, "negative power of zero"));
            }
            base.powi(*n)
        }
        Node::Call(f, a) => {
            let arg = eval_node(a, x, coords)?;
            let v = arg.real();
            match f {
                Func::Sin => arg.sin(),
                Func::Cos => arg.cos(),
                Func::Tan => {
                    if v.cos() == 0.0 {
                        return Err(domain_err(node, coords, "tan pole"));
                    }
                    arg.tan()
                }
                Func::Exp => arg.exp(),
                Func::Log => {
                    if v <= 0.0 {
                        return Err(domain_err(node, coords, "log of non-positive value"));
                    }
                    arg.ln()
                }
                Func::Sqrt => {
                    if v < 0.0 {
                        return Err(domain_err(node, coords, "sqrt of negative value"));
                    }
                    if v == 0.0 {
                        return Err(domain_err(node, coords, "sqrt is not differentiable at 0"));
                    }
                    arg.sqrt()
                }
            }
        }
    })
}

struct Printer<'a> {
    node: &'a Node,
    coords: &'a [String],
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |node| Printer { node, coords: self.coords };
        match self.node {
            Node::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "(-{:?})", -c)
            }
            Node::Const(c) => write!(f, "{c:?}"),
            Node::Var(i) => f.write_str(&self.coords[*i]),
            Node::Neg(a) => write!(f, "(-{})", sub(a)),
            Node::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => '+',
                    BinOp::Sub => '-',
                    BinOp::Mul => '*',
                    BinOp::Div => '/',
                };
                write!(f, "({} {sym} {})", sub(a), sub(b))
            }
            Node::Pow(a, n) if *n < 0 => write!(f, "({}^-{})", sub(a), -(*n as i64)),
            Node::Pow(a, n) => write!(f, "({}^{n})", sub(a)),
            Node::Call(func, a) => write!(f, "{}({})", func.name(), sub(a)),
        }
    }
}

/// Fully parenthesised; parses back to an identical tree.
impl fmt::Display for ScalarFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { node: &self.ast, coords: &self.coords }.fmt(f)
    }
}

/// Parses a list of expression strings against the same coordinates.
pub fn parse_all<S: AsRef<str>>(texts: &[S], coords: &[String]) -> Result<Vec<ScalarFieldExpr>> {
    texts.iter().map(|t| parse_expr(t.as_ref(), coords)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uvw() -> Vec<String> {
        ["u", "v", "w"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn exp_two_w_jet() {
        let e = parse_expr("exp(2*w)", &uvw()).unwrap();
        let j = e.eval_jet2(&[0.3, -0.2, 0.0]).unwrap();
        assert_eq!(j.value, 1.0);
        assert_eq!(j.grad[2], 2.0);
        assert_eq!(j.hess[(2, 2)], 4.0);
        assert_eq!(j.grad[0], 0.0);
    }

    #[test]
    fn h_of_example_three_two() {
        let e = parse_expr("1/(v*e^w)", &uvw()).unwrap();
        let j = e.eval_jet2(&[0.0, 1.0, 0.0]).unwrap();
        assert!((j.value - 1.0).abs() < 1e-15);
        assert!((j.grad[1] + 1.0).abs() < 1e-15);
        assert!((j.grad[2] + 1.0).abs() < 1e-15);
        // ∂v∂w (1/(v e^w)) = 1/(v² e^w)
        assert!((j.hess[(1, 2)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let e = parse_expr("u + log(v)", &uvw()).unwrap();
        match e.eval(&[1.0, -1.0, 0.0]) {
            Err(Error::Domain { subexpr, .. }) => assert_eq!(subexpr, "log(v)"),
            other => panic!("unexpected {other:?}"),
        }
        let e = parse_expr("1/(v-1)", &uvw()).unwrap();
        assert!(matches!(e.eval(&[0.0, 1.0, 0.0]), Err(Error::Domain { .. })));
        let e = parse_expr("sqrt(u)", &uvw()).unwrap();
        assert!(matches!(e.eval(&[-1.0, 1.0, 0.0]), Err(Error::Domain { .. })));
    }

    #[test]
    fn overflow_is_reported_not_silent() {
        let e = parse_expr("exp(exp(u))", &uvw()).unwrap();
        assert!(matches!(e.eval(&[10.0, 0.0, 0.0]), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn wrong_point_length() {
        let e = parse_expr("u", &uvw()).unwrap();
        assert!(matches!(e.eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn display_round_trips() {
        let c = uvw();
        for text in ["-u^2", "u^-2 + 3", "2^3^2", "sin(u)*cos(v)/(1+w^2)", "e^(u*v) - pi"] {
            let e = parse_expr(text, &c).unwrap();
            let again = parse_expr(&e.to_string(), &c).unwrap();
            assert_eq!(e, again, "{text} -> {e}");
        }
    }
}
