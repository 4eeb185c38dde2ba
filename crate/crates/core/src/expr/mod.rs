//! A small expression language for scalar functions of `s`, `t` and `q`.
//!
//! Expressions are parsed from text, evaluated in double precision and
//! differentiated symbolically. The grammar is
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := NUMBER | 's' | 't' | 'q' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
//! FUNC  := sin | cos | tan | exp | ln | sqrt
//! ```
//!
//! so `^` binds tighter than unary minus and associates to the right.
//! Exponents must be constant for differentiation.

mod diff;
mod parser;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parser::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    S,
    T,
    Q,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::S, Var::T, Var::Q];

    pub fn name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::T => "t",
            Var::Q => "q",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "s" => Ok(Var::S),
            "t" => Ok(Var::T),
            "q" => Ok(Var::Q),
            other => Err(format!("unknown parameter `{other}` (expected s, t or q)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> Result<f64, &'static str> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => Ok(x.tan()),
            Func::Exp => Ok(x.exp()),
            Func::Ln if x <= 0.0 => Err("logarithm of a non-positive number"),
            Func::Ln => Ok(x.ln()),
            Func::Sqrt if x < 0.0 => Err("square root of a negative number"),
            Func::Sqrt => Ok(x.sqrt()),
        }
    }
}

/// Abstract syntax tree of a scalar expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Pi,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxErrorKind {
    Empty,
    UnbalancedParen,
    UnknownIdentifier(String),
    DanglingOperator(char),
    UnexpectedChar(char),
    UnexpectedToken(String),
    BadNumber(String),
}

impl fmt::Display for SyntaxErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxErrorKind::Empty => f.write_str("empty expression"),
            SyntaxErrorKind::UnbalancedParen => f.write_str("unbalanced parenthesis"),
            SyntaxErrorKind::UnknownIdentifier(id) => write!(f, "unknown identifier `{id}`"),
            SyntaxErrorKind::DanglingOperator(op) => write!(f, "operator `{op}` has no operand"),
            SyntaxErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            SyntaxErrorKind::UnexpectedToken(t) => write!(f, "unexpected {t}"),
            SyntaxErrorKind::BadNumber(n) => write!(f, "malformed number `{n}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {kind}")]
    Syntax { offset: usize, kind: SyntaxErrorKind },

    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: &'static str },

    #[error("cannot differentiate `{expr}`: exponent is not constant")]
    UnsupportedNode { expr: String },
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    /// True when the expression mentions no variable.
    pub fn is_constant(&self) -> bool {
        !Var::ALL.iter().any(|v| self.depends_on(*v))
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on(var),
            Expr::Bin(_, a, b) => a.depends_on(var) || b.depends_on(var),
        }
    }

    pub(crate) fn as_num(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            _ => None,
        }
    }

    /// Evaluate at `(s, t, q)`.
    pub fn eval(&self, s: f64, t: f64, q: f64) -> Result<f64, ExprError> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Pi => std::f64::consts::PI,
            Expr::Var(Var::S) => s,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::Q) => q,
            Expr::Neg(a) => -a.eval(s, t, q)?,
            Expr::Bin(op, a, b) => {
                let x = a.eval(s, t, q)?;
                let y = b.eval(s, t, q)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div if y == 0.0 => return Err(self.domain("division by zero")),
                    BinOp::Div => x / y,
                    BinOp::Pow => x.powf(y),
                }
            }
            Expr::Call(func, a) => {
                let x = a.eval(s, t, q)?;
                func.apply(x).map_err(|reason| self.domain(reason))?
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.domain("result is not a finite number"))
        }
    }

    /// Evaluate an expression that must not depend on any variable.
    pub fn eval_const(&self) -> Result<f64, ExprError> {
        self.eval(0.0, 0.0, 0.0)
    }

    /// Symbolic partial derivative with respect to `var`.
    pub fn differentiate(&self, var: Var) -> Result<Expr, ExprError> {
        diff::differentiate(self, var)
    }

    fn domain(&self, reason: &'static str) -> ExprError {
        ExprError::Domain { expr: self.to_string(), reason }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => 3,
            _ => 5,
        }
    }
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse(text)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                child(f, a, 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                match op {
                    // right-associative: the base needs strictly higher precedence
                    BinOp::Pow => {
                        child(f, a, p + 1)?;
                        f.write_str("^")?;
                        child(f, b, 3)
                    }
                    _ => {
                        child(f, a, p)?;
                        write!(f, "{}", op.symbol())?;
                        child(f, b, p + 1)
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, s: f64, t: f64, q: f64) -> Result<f64, ExprError> {
        parse(text).unwrap().eval(s, t, q)
    }

    #[test]
    fn eval_basic() {
        assert_eq!(ev("t*q", 0.0, 2.0, 3.0).unwrap(), 6.0);
        assert_eq!(ev("sin(s*(q-1/2))", 1.0, 123.0, 0.5).unwrap(), 0.0);
        assert_eq!(ev("2^3^2", 0.0, 0.0, 0.0).unwrap(), 512.0);
        assert_eq!(ev("-2^2", 0.0, 0.0, 0.0).unwrap(), -4.0);
        assert_eq!(ev("2^-1", 0.0, 0.0, 0.0).unwrap(), 0.5);
        assert_eq!(ev("pi", 0.0, 0.0, 0.0).unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn eval_domain_errors() {
        for text in ["1/s", "ln(s)", "sqrt(s-1)", "ln(-1)"] {
            match ev(text, 0.0, 0.0, 0.0) {
                Err(ExprError::Domain { .. }) => {}
                other => panic!("{text}: expected domain error, got {other:?}"),
            }
        }
        let err = ev("s + 1/(t-t)", 1.0, 2.0, 0.0).unwrap_err();
        assert_eq!(
            err,
            ExprError::Domain { expr: "1/(t-t)".into(), reason: "division by zero" }
        );
        assert!(ev("exp(1000)", 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for text in [
            "sin(s*(q-1/2))",
            "(t-1/2)*(q-0)",
            "s*q^2*(t-1)",
            "-(s+1)*(t-1/2)",
            "2^3^2",
            "(2^3)^2",
            "-s^2",
            "(-s)^2",
            "s-(t-q)",
            "s/(t*q)",
            "--s",
        ] {
            let e = parse(text).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{text} -> {printed}");
        }
    }

    #[test]
    fn negative_literals_reparse() {
        let e = Expr::Bin(BinOp::Mul, Box::new(Expr::Var(Var::S)), Box::new(Expr::Num(-0.5)));
        assert_eq!(e.to_string(), "s*-0.5");
        assert_eq!(parse(&e.to_string()).unwrap().eval(2.0, 0.0, 0.0).unwrap(), -1.0);
    }

    #[test]
    fn constant_detection() {
        assert!(parse("sqrt(2)/2*pi").unwrap().is_constant());
        assert!(!parse("sqrt(2)/2*s").unwrap().is_constant());
        assert!(parse("t*q").unwrap().depends_on(Var::Q));
        assert!(!parse("t*q").unwrap().depends_on(Var::S));
    }
}
