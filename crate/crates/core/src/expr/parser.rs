use std::sync::Arc;

use super::{BinOp, Func, Node, ScalarFieldExpr};
use crate::error::{Error, Result};

const CONSTANTS: [&str; 2] = ["pi", "e"];
const FUNCTIONS: [&str; 6] = ["sin", "cos", "tan", "exp", "log", "sqrt"];

/// Names that cannot be used as chart coordinates.
pub fn is_reserved(name: &str) -> bool {
    CONSTANTS.contains(&name) || FUNCTIONS.contains(&name)
}

/// Parses `text` with `coords` as the only admissible identifiers.
pub fn parse_expr(text: &str, coords: &[String]) -> Result<ScalarFieldExpr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0, coords };
    let ast = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(ScalarFieldExpr::from_parts(ast, Arc::from(coords)))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    coords: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self) -> Error {
        let message = match self.src.get(self.pos) {
            Some(&c) => format!("unexpected `{}`", c as char),
            None => "unexpected end of input".to_string(),
        };
        Error::Syntax { offset: self.pos, message }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let (base, is_e) = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let exp_offset = self.pos;
        let exponent = self.exponent()?;
        if is_e {
            return Ok(Node::Call(Func::Exp, Box::new(exponent)));
        }
        let n = fold_constant(&exponent).ok_or_else(|| Error::Syntax {
            offset: exp_offset,
            message: "exponent must be a constant integer (use exp/log for general powers)".into(),
        })?;
        if n.fract() != 0.0 || n.abs() > 1024.0 {
            return Err(Error::Syntax {
                offset: exp_offset,
                message: format!("exponent {n} is not an integer in [-1024, 1024]"),
            });
        }
        Ok(Node::Pow(Box::new(base), n as i32))
    }

    fn exponent(&mut self) -> Result<Node> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.exponent()?)));
        }
        self.power()
    }

    /// Returns the atom and whether it was the bare constant `e`.
    fn atom(&mut self) -> Result<(Node, bool)> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.unexpected());
                }
                Ok((inner, false))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok((self.number()?, false)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            _ => Err(self.unexpected()),
        }
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(Error::Syntax { offset: start, message: "malformed number".into() });
        }
        // exponent part only when a digit follows, so `2*e` stays a product
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .map(Node::Const)
            .map_err(|_| Error::Syntax { offset: start, message: format!("malformed number `{text}`") })
    }

    fn identifier(&mut self) -> Result<(Node, bool)> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if let Some(i) = self.coords.iter().position(|c| c == name) {
            return Ok((Node::Var(i), false));
        }
        if let Some(func) = Func::from_name(name) {
            if !self.eat(b'(') {
                return Err(Error::Syntax {
                    offset: self.pos,
                    message: format!("expected `(` after `{name}`"),
                });
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.unexpected());
            }
            return Ok((Node::Call(func, Box::new(arg)), false));
        }
        match name {
            "pi" => Ok((Node::Const(std::f64::consts::PI), false)),
            "e" => Ok((Node::Const(std::f64::consts::E), true)),
            _ => Err(Error::UnknownIdentifier { name: name.to_string(), offset: start }),
        }
    }
}

fn fold_constant(node: &Node) -> Option<f64> {
    Some(match node {
        Node::Const(c) => *c,
        Node::Var(_) => return None,
        Node::Neg(a) => -fold_constant(a)?,
        Node::Bin(op, a, b) => {
            let (l, r) = (fold_constant(a)?, fold_constant(b)?);
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => l / r,
            }
        }
        Node::Pow(a, n) => fold_constant(a)?.powi(*n),
        Node::Call(f, a) => {
            let x = fold_constant(a)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Exp => x.exp(),
                Func::Log => x.ln(),
                Func::Sqrt => x.sqrt(),
            }
        }
    })
}
