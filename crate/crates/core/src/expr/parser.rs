use super::{BinOp, Expr, ExprError, Func, SyntaxErrorKind, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(id) => format!("identifier `{id}`"),
            Tok::Op(c) => format!("operator `{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, kind: SyntaxErrorKind) -> ExprError {
    ExprError::Syntax { offset, kind }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                toks.push((i, Tok::Op(c as char)));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent, only when digits follow
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let v: f64 = lit
                    .parse()
                    .map_err(|_| syntax(start, SyntaxErrorKind::BadNumber(lit.into())))?;
                toks.push((start, Tok::Num(v)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].into())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(i, SyntaxErrorKind::UnexpectedChar(ch)));
            }
        }
    }
    toks.push((text.len(), Tok::End));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    /// offsets of currently open parentheses
    open: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Tok::Op(c) if ops.contains(c) => {
                let c = *c;
                self.bump();
                Some(c)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.eat_op(&['+', '-']) {
            let rhs = self.operand(op, Self::term)?;
            let op = if op == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.eat_op(&['*', '/']) {
            let rhs = self.operand(op, Self::unary)?;
            let op = if op == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat_op(&['-']).is_some() {
            let inner = self.operand('-', Self::unary)?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat_op(&['^']).is_some() {
            let exponent = self.operand('^', Self::unary)?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    /// Parse the right operand of `op`, reporting a dangling operator when
    /// the input ends (or a closing paren follows) instead.
    fn operand(
        &mut self,
        op: char,
        next: fn(&mut Self) -> Result<Expr, ExprError>,
    ) -> Result<Expr, ExprError> {
        match self.peek() {
            Tok::End if !self.open.is_empty() => {
                Err(syntax(self.offset(), SyntaxErrorKind::UnbalancedParen))
            }
            Tok::End | Tok::RParen => {
                Err(syntax(self.offset(), SyntaxErrorKind::DanglingOperator(op)))
            }
            _ => next(self),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (offset, tok) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => self.parenthesized(offset),
            Tok::Ident(id) => match id.as_str() {
                "s" => Ok(Expr::Var(Var::S)),
                "t" => Ok(Expr::Var(Var::T)),
                "q" => Ok(Expr::Var(Var::Q)),
                "pi" => Ok(Expr::Pi),
                name => match Func::from_name(name) {
                    Some(func) => {
                        let (paren, next) = self.bump();
                        if next != Tok::LParen {
                            return Err(syntax(
                                paren,
                                SyntaxErrorKind::UnexpectedToken(format!(
                                    "{} after `{name}` (expected `(`)",
                                    next.describe()
                                )),
                            ));
                        }
                        let arg = self.parenthesized(paren)?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                    None => Err(syntax(offset, SyntaxErrorKind::UnknownIdentifier(id))),
                },
            },
            Tok::End if !self.open.is_empty() => {
                Err(syntax(offset, SyntaxErrorKind::UnbalancedParen))
            }
            Tok::RParen if self.open.is_empty() => {
                Err(syntax(offset, SyntaxErrorKind::UnbalancedParen))
            }
            Tok::Op(c) => Err(syntax(offset, SyntaxErrorKind::DanglingOperator(c))),
            other => Err(syntax(offset, SyntaxErrorKind::UnexpectedToken(other.describe()))),
        }
    }

    /// Parse `expr ')'` after an opening parenthesis at `open_at`.
    fn parenthesized(&mut self, open_at: usize) -> Result<Expr, ExprError> {
        self.open.push(open_at);
        let inner = self.expr()?;
        match self.peek() {
            Tok::RParen => {
                self.bump();
                self.open.pop();
                Ok(inner)
            }
            Tok::End => Err(syntax(self.offset(), SyntaxErrorKind::UnbalancedParen)),
            other => Err(syntax(
                self.offset(),
                SyntaxErrorKind::UnexpectedToken(other.describe()),
            )),
        }
    }
}

/// Parse an expression in `s`, `t`, `q`.
///
/// Syntax errors carry the byte offset at which parsing failed.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(text)?;
    if toks.len() == 1 {
        return Err(syntax(0, SyntaxErrorKind::Empty));
    }
    let mut p = Parser { toks, pos: 0, open: Vec::new() };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::RParen => Err(syntax(p.offset(), SyntaxErrorKind::UnbalancedParen)),
        other => Err(syntax(p.offset(), SyntaxErrorKind::UnexpectedToken(other.describe()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    fn err_at(text: &str) -> (usize, SyntaxErrorKind) {
        match parse(text) {
            Err(ExprError::Syntax { offset, kind }) => (offset, kind),
            other => panic!("{text}: expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parses_scale_function() {
        let e = parse("sin(s*(q-1/2))").unwrap();
        let half = Expr::Bin(BinOp::Div, b(Expr::Num(1.0)), b(Expr::Num(2.0)));
        let expected = Expr::Call(
            Func::Sin,
            b(Expr::Bin(
                BinOp::Mul,
                b(Expr::Var(Var::S)),
                b(Expr::Bin(BinOp::Sub, b(Expr::Var(Var::Q)), b(half))),
            )),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn parses_product_of_differences() {
        let e = parse("(t-1/2)*(q-0)").unwrap();
        let half = Expr::Bin(BinOp::Div, b(Expr::Num(1.0)), b(Expr::Num(2.0)));
        let expected = Expr::Bin(
            BinOp::Mul,
            b(Expr::Bin(BinOp::Sub, b(Expr::Var(Var::T)), b(half))),
            b(Expr::Bin(BinOp::Sub, b(Expr::Var(Var::Q)), b(Expr::Num(0.0)))),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse(" ( t - 1 / 2 ) *\t(q-0) ").unwrap(), parse("(t-1/2)*(q-0)").unwrap());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("1-2-3").unwrap().eval_const().unwrap(), -4.0);
        assert_eq!(parse("8/4/2").unwrap().eval_const().unwrap(), 1.0);
        assert_eq!(parse("2+3*4^2").unwrap().eval_const().unwrap(), 50.0);
        assert_eq!(parse("-3^2").unwrap().eval_const().unwrap(), -9.0);
        assert_eq!(parse("2*-3").unwrap().eval_const().unwrap(), -6.0);
        assert_eq!(parse("1.5e2 + .5").unwrap().eval_const().unwrap(), 150.5);
    }

    #[test]
    fn unbalanced_paren_reports_end_offset() {
        assert_eq!(err_at("s*(q-").0, 5);
        assert_eq!(err_at("s*(q-"), (5, SyntaxErrorKind::UnbalancedParen));
        assert_eq!(err_at("(s+t"), (4, SyntaxErrorKind::UnbalancedParen));
        assert_eq!(err_at("s+t)"), (3, SyntaxErrorKind::UnbalancedParen));
    }

    #[test]
    fn other_syntax_errors() {
        assert_eq!(err_at(""), (0, SyntaxErrorKind::Empty));
        assert_eq!(err_at("   "), (0, SyntaxErrorKind::Empty));
        assert_eq!(err_at("s+x"), (2, SyntaxErrorKind::UnknownIdentifier("x".into())));
        assert_eq!(err_at("s*"), (2, SyntaxErrorKind::DanglingOperator('*')));
        assert_eq!(err_at("*s"), (0, SyntaxErrorKind::DanglingOperator('*')));
        assert_eq!(err_at("s$"), (1, SyntaxErrorKind::UnexpectedChar('$')));
        assert_eq!(err_at("1.2.3"), (0, SyntaxErrorKind::BadNumber("1.2.3".into())));
        assert_eq!(err_at("sin s").0, 4);
        assert_eq!(err_at("s t").0, 2);
    }
}
