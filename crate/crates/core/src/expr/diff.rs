//! Symbolic differentiation with a minimal simplifier.
//!
//! The smart constructors fold constants and apply x·0 → 0, x·1 → x,
//! x + 0 → x (plus the obvious mirror images). Nothing else is rewritten.

use super::{BinOp, Expr, ExprError, Func, Var};

pub(super) fn differentiate(e: &Expr, var: Var) -> Result<Expr, ExprError> {
    if !e.depends_on(var) {
        // still reject non-constant exponents anywhere in the tree
        check_exponents(e)?;
        return Ok(Expr::Num(0.0));
    }
    Ok(match e {
        Expr::Num(_) | Expr::Pi => Expr::Num(0.0),
        Expr::Var(v) => Expr::Num(if *v == var { 1.0 } else { 0.0 }),
        Expr::Neg(a) => neg(differentiate(a, var)?),
        Expr::Bin(op, a, b) => {
            let (a, b) = (a.as_ref(), b.as_ref());
            match op {
                BinOp::Add => add(differentiate(a, var)?, differentiate(b, var)?),
                BinOp::Sub => sub(differentiate(a, var)?, differentiate(b, var)?),
                BinOp::Mul => add(
                    mul(differentiate(a, var)?, b.clone()),
                    mul(a.clone(), differentiate(b, var)?),
                ),
                BinOp::Div => {
                    // (a'b - ab') / b^2
                    let num = sub(
                        mul(differentiate(a, var)?, b.clone()),
                        mul(a.clone(), differentiate(b, var)?),
                    );
                    div(num, pow(b.clone(), Expr::Num(2.0)))
                }
                BinOp::Pow => {
                    if !b.is_constant() {
                        return Err(ExprError::UnsupportedNode { expr: e.to_string() });
                    }
                    check_exponents(a)?;
                    // c·a^(c-1)·a'
                    let c = b.clone();
                    let c_minus_one = sub(b.clone(), Expr::Num(1.0));
                    mul(mul(c, pow(a.clone(), c_minus_one)), differentiate(a, var)?)
                }
            }
        }
        Expr::Call(func, a) => {
            let da = differentiate(a, var)?;
            let a = a.as_ref().clone();
            match func {
                Func::Sin => mul(da, call(Func::Cos, a)),
                Func::Cos => neg(mul(da, call(Func::Sin, a))),
                Func::Tan => div(da, pow(call(Func::Cos, a), Expr::Num(2.0))),
                Func::Exp => mul(da, call(Func::Exp, a)),
                Func::Ln => div(da, a),
                Func::Sqrt => div(da, mul(Expr::Num(2.0), call(Func::Sqrt, a))),
            }
        }
    })
}

fn check_exponents(e: &Expr) -> Result<(), ExprError> {
    match e {
        Expr::Num(_) | Expr::Pi | Expr::Var(_) => Ok(()),
        Expr::Neg(a) | Expr::Call(_, a) => check_exponents(a),
        Expr::Bin(BinOp::Pow, _, b) if !b.is_constant() => {
            Err(ExprError::UnsupportedNode { expr: e.to_string() })
        }
        Expr::Bin(_, a, b) => {
            check_exponents(a)?;
            check_exponents(b)
        }
    }
}

fn is_num(e: &Expr, v: f64) -> bool {
    e.as_num() == Some(v)
}

fn fold(e: Expr) -> Expr {
    // keep the symbolic form when evaluation would fail
    match e.eval_const() {
        Ok(v) => Expr::Num(v),
        Err(_) => e,
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => Expr::Num(-v),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    Expr::Bin(op, Box::new(a), Box::new(b))
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => Expr::Num(x + y),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => bin(BinOp::Add, a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => Expr::Num(x - y),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => bin(BinOp::Sub, a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) || is_num(&b, 0.0) {
        return Expr::Num(0.0);
    }
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => Expr::Num(x * y),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        _ => bin(BinOp::Mul, a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(_), Some(y)) if y != 0.0 => fold(bin(BinOp::Div, a, b)),
        (_, Some(y)) if y == 1.0 => a,
        _ => bin(BinOp::Div, a, b),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match (a.as_num(), b.as_num()) {
        (Some(_), Some(_)) => fold(bin(BinOp::Pow, a, b)),
        (_, Some(y)) if y == 1.0 => a,
        (_, Some(y)) if y == 0.0 => Expr::Num(1.0),
        _ => bin(BinOp::Pow, a, b),
    }
}

fn call(func: Func, a: Expr) -> Expr {
    let e = Expr::Call(func, Box::new(a));
    if e.is_constant() {
        fold(e)
    } else {
        e
    }
}
