//! Expressions in one variable `t` for user-defined curves.
//!
//! Grammar (usual precedence, `^` right-associative, binds tighter than
//! unary minus):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | tan | sqrt | exp | ln | abs
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Exp,
    Ln,
    Abs,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sqrt,
        Func::Exp,
        Func::Ln,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

/// Expression tree over the variable `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("arity mismatch at offset {offset}: `{func}` takes exactly one argument")]
    Arity { offset: usize, func: &'static str },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of a non-positive value")]
    LogDomain,
    #[error("square root of a negative value")]
    SqrtDomain,
    #[error("expression is not finite at t = {0}")]
    NotFinite(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Num(v) => format!("number {v}"),
            Token::Ident(s) => format!("`{s}`"),
            Token::Op(c) => format!("`{c}`"),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            // exponent only when followed by digits, so `2e` stays `2` then `e`
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
            let value: f64 = text[start..i].parse().map_err(|_| ParseError::Syntax {
                offset: start,
                message: "malformed number".into(),
            })?;
            out.push((start, Token::Num(value)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Token::Ident(text[start..i].to_string())));
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Token::Op(c),
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            _ => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Token::End));
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}, found {}", self.peek().describe())))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Op('+') => BinOp::Add,
                Token::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Op('*') => BinOp::Mul,
                Token::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Token::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Token::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Token::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "t" => return Ok(Expr::Var),
                    "pi" => return Ok(Expr::Const(Constant::Pi)),
                    "e" => return Ok(Expr::Const(Constant::E)),
                    _ => {}
                }
                let func = Func::from_name(&name)
                    .ok_or(ParseError::UnknownIdentifier { offset, name })?;
                self.expect(Token::LParen, "`(` after function name")?;
                let arg = self.expr()?;
                if *self.peek() == Token::Comma {
                    return Err(ParseError::Arity {
                        offset: self.offset(),
                        func: func.name(),
                    });
                }
                self.expect(Token::RParen, "`)`")?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => Err(self.syntax("expected expression")),
        }
    }
}

/// Parse an expression in `t`.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let expr = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.syntax(format!("unexpected {}", parser.peek().describe())));
    }
    Ok(expr)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) => b,
        _ if is_num(&b, 0.0) => a,
        (Expr::Num(x), Expr::Num(y)) => num(x + y),
        _ => Expr::Binary(BinOp::Add, Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&b, 0.0) => a,
        _ if is_num(&a, 0.0) => neg(b),
        (Expr::Num(x), Expr::Num(y)) => num(x - y),
        _ => Expr::Binary(BinOp::Sub, Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) || is_num(&b, 0.0) => num(0.0),
        _ if is_num(&a, 1.0) => b,
        _ if is_num(&b, 1.0) => a,
        (Expr::Num(x), Expr::Num(y)) => num(x * y),
        _ => Expr::Binary(BinOp::Mul, Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) => num(0.0),
        _ if is_num(&b, 1.0) => a,
        _ => Expr::Binary(BinOp::Div, Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match &b {
        _ if is_num(&b, 1.0) => a,
        _ if is_num(&b, 0.0) => num(1.0),
        _ => Expr::Binary(BinOp::Pow, Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

impl Expr {
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        let v = self.eval_raw(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NotFinite(t.to_string()))
        }
    }

    fn eval_raw(&self, t: f64) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Const(c) => c.value(),
            Expr::Var => t,
            Expr::Neg(a) => -a.eval_raw(t)?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval_raw(t)?, b.eval_raw(t)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        x / y
                    }
                    BinOp::Pow => x.powf(y),
                }
            }
            Expr::Call(f, a) => {
                let x = a.eval_raw(t)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(EvalError::SqrtDomain);
                        }
                        x.sqrt()
                    }
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(EvalError::LogDomain);
                        }
                        x.ln()
                    }
                    Func::Abs => x.abs(),
                }
            }
        })
    }

    /// True when the expression does not mention `t`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Symbolic derivative with respect to `t`, lightly simplified.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Const(_) => num(0.0),
            Expr::Var => num(1.0),
            Expr::Neg(a) => neg(a.derivative()),
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                let (da, db) = (a.derivative(), b.derivative());
                match op {
                    BinOp::Add => add(da, db),
                    BinOp::Sub => sub(da, db),
                    BinOp::Mul => add(mul(da, b.clone()), mul(a, db)),
                    BinOp::Div => div(
                        sub(mul(da, b.clone()), mul(a, db)),
                        pow(b, num(2.0)),
                    ),
                    BinOp::Pow if b.is_constant() => mul(
                        mul(b.clone(), pow(a, sub(b, num(1.0)))),
                        da,
                    ),
                    BinOp::Pow => mul(
                        pow(a.clone(), b.clone()),
                        add(
                            mul(db, call(Func::Ln, a.clone())),
                            div(mul(b, da), a),
                        ),
                    ),
                }
            }
            Expr::Call(f, a) => {
                let a = a.as_ref().clone();
                let da = a.derivative();
                let outer = match f {
                    Func::Sin => call(Func::Cos, a),
                    Func::Cos => neg(call(Func::Sin, a)),
                    Func::Tan => div(num(1.0), pow(call(Func::Cos, a), num(2.0))),
                    Func::Sqrt => div(num(1.0), mul(num(2.0), call(Func::Sqrt, a))),
                    Func::Exp => call(Func::Exp, a),
                    Func::Ln => div(num(1.0), a),
                    Func::Abs => div(a.clone(), call(Func::Abs, a)),
                };
                mul(outer, da)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Num(v) if v.is_sign_negative() => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Var => f.write_str("t"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(BinOp::Pow, a, b) => {
                write_child(f, a, a.precedence() <= 4)?;
                f.write_str("^")?;
                write_child(f, b, b.precedence() < 3)
            }
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => unreachable!(),
                };
                write_child(f, a, a.precedence() < p)?;
                write!(f, " {sym} ")?;
                write_child(f, b, b.precedence() <= p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn eval(text: &str, t: f64) -> f64 {
        parse_expression(text).unwrap().eval(t).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert!((eval("cos(t)+t*sin(t)", PI) + 1.0).abs() < 1e-12);
        assert_eq!(eval("2+3*t^2", 1.0), 5.0);
        let err = parse_expression("sin()").unwrap_err();
        assert_eq!(err.offset(), 4);
        assert!(err.to_string().contains("expected expression"), "{err}");
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("2^3^2", 0.0), 512.0);
        assert_eq!(eval("-2^2", 0.0), -4.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("8/4/2", 0.0), 1.0);
        assert_eq!(eval("8-4-2", 0.0), 2.0);
        assert_eq!(eval("(1+2)*3", 0.0), 9.0);
        assert!((eval("pi", 0.0) - PI).abs() < 1e-15);
        assert!((eval("ln(e)", 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(eval("1.5e2 + .5", 0.0), 150.5);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            parse_expression("x + 1"),
            Err(ParseError::UnknownIdentifier { offset: 0, .. })
        ));
        assert!(matches!(parse_expression("sin(t, 2)"), Err(ParseError::Arity { offset: 5, .. })));
        assert!(matches!(parse_expression("(t"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("t t"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("t $"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("sin"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expression("2e"), Err(ParseError::Syntax { offset: 1, .. })));
    }

    #[test]
    fn evaluation_errors_are_not_panics() {
        let e = parse_expression("1/t").unwrap();
        assert_eq!(e.eval(0.0), Err(EvalError::DivisionByZero));
        let e = parse_expression("ln(t)").unwrap();
        assert_eq!(e.eval(0.0), Err(EvalError::LogDomain));
        assert_eq!(e.eval(-1.0), Err(EvalError::LogDomain));
        let e = parse_expression("sqrt(t)").unwrap();
        assert_eq!(e.eval(-1.0), Err(EvalError::SqrtDomain));
        let e = parse_expression("exp(t)").unwrap();
        assert!(matches!(e.eval(1e4), Err(EvalError::NotFinite(_))));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cases = [
            "t^3 - 2*t",
            "sin(t)*cos(2*t)",
            "exp(t/2)/(1+t^2)",
            "sqrt(1+t^2)",
            "ln(2+t) - tan(t/3)",
            "abs(t - 5)",
            "2^t",
            "t^t",
            "-(t+1)^-2",
        ];
        for text in cases {
            let e = parse_expression(text).unwrap();
            let d = e.derivative();
            for &t in &[0.3, 0.9, 1.7] {
                let fd = crate::numeric::diff1(|x| e.eval(x).unwrap(), t, 1e-4);
                let an = d.eval(t).unwrap();
                assert!((fd - an).abs() < 1e-8 * an.abs().max(1.0), "{text}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn display_reparses() {
        for text in ["-t^2", "(-t)^2", "t - (t - 1)", "2^3^2", "(2^3)^2", "-(t + 1) * 3", "--t"] {
            let e = parse_expression(text).unwrap();
            let printed = e.to_string();
            let again = parse_expression(&printed).unwrap();
            assert_eq!(again.to_string(), printed, "{text}");
            assert_eq!(again.eval(1.3).unwrap(), e.eval(1.3).unwrap(), "{text} -> {printed}");
        }
    }
}
