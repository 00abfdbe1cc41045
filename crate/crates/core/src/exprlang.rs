//! Arithmetic expressions for kernels `k(t, s)` and forcings `f(t)`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary ('^' factor)?
//! primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-2^2` is
//! `-4` and `2^3^2` is `2^9`. There is no implicit multiplication. Known names
//! are the variables `t`, `s`, the constants `pi`, `e` and the functions
//! `exp ln sqrt sin cos abs gamma` (one argument) and `pow` (two).

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::gamma::gamma;

/// Nesting limit of the recursive descent, well within default stack sizes.
pub const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    S,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::S => "s",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Abs,
    Gamma,
    Pow,
}

impl Func {
    const ALL: [Func; 8] = [Func::Exp, Func::Ln, Func::Sqrt, Func::Sin, Func::Cos, Func::Abs, Func::Gamma, Func::Pow];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
            Func::Gamma => "gamma",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        if self == Func::Pow {
            2
        } else {
            1
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Number(f64),
    Var(Var),
    Pi,
    E,
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Call(Func, Vec<Expression>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the offending token (input length at end of input).
    pub offset: usize,
    pub expected: String,
    /// Input text around the offset.
    pub excerpt: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: expected {} near \"{}\"", self.offset, self.expected, self.excerpt)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    Unbound(Var),
    /// A function or operator evaluated outside its domain.
    Domain { expr: String, argument: f64 },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Unbound(v) => write!(f, "variable {} is not bound here", v.name()),
            EvalError::Domain { expr, argument } => write!(f, "domain error in {expr} (argument {argument})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok<'a> {
    Num(f64),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    tok: Tok<'a>,
    tok_start: usize,
    depth: usize,
}

fn excerpt(src: &str, offset: usize) -> String {
    let mut start = offset.saturating_sub(12);
    while !src.is_char_boundary(start) {
        start -= 1;
    }
    let mut end = (offset + 12).min(src.len());
    while !src.is_char_boundary(end) {
        end += 1;
    }
    src[start..end].to_string()
}

impl<'a> Parser<'a> {
    fn error<T>(&self, offset: usize, expected: &str) -> Result<T, ParseError> {
        Err(ParseError { offset, expected: expected.to_string(), excerpt: excerpt(self.src, offset) })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            self.tok = Tok::End;
            return Ok(());
        };
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += c.len_utf8();
            self.tok = t;
            return Ok(());
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
            self.tok = Tok::Ident(&rest[..len]);
            self.pos += len;
            return Ok(());
        }
        self.error(self.pos, "a number, name, '-' or '('")
    }

    fn number(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - s
        };
        let mut p = start;
        let int = digits(&mut p);
        let mut frac = 0;
        if p < bytes.len() && bytes[p] == b'.' {
            p += 1;
            frac = digits(&mut p);
        }
        if int + frac == 0 {
            return self.error(start, "a digit");
        }
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) == 0 {
                return self.error(q, "exponent digits");
            }
            p = q;
        }
        if p < bytes.len() && (bytes[p].is_ascii_alphabetic() || bytes[p] == b'_') {
            return self.error(p, "an operator (no implicit multiplication)");
        }
        match self.src[start..p].parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.tok = Tok::Num(v);
                self.pos = p;
                Ok(())
            }
            _ => self.error(start, "a finite number"),
        }
    }

    fn expect(&mut self, tok: Tok<'static>, what: &str) -> Result<(), ParseError> {
        if self.tok == tok {
            self.advance()
        } else {
            self.error(self.tok_start, what)
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.error(self.tok_start, "shallower nesting");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.advance()?;
            let rhs = self.term()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.advance()?;
            let rhs = self.factor()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expression, ParseError> {
        self.enter()?;
        let out = if self.tok == Tok::Minus {
            self.advance()?;
            Expression::Neg(Box::new(self.factor()?))
        } else {
            let base = self.primary()?;
            if self.tok == Tok::Caret {
                self.advance()?;
                Expression::Binary(BinOp::Pow, Box::new(base), Box::new(self.factor()?))
            } else {
                base
            }
        };
        self.depth -= 1;
        Ok(out)
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        let start = self.tok_start;
        match self.tok {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Expression::Number(v))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.advance()?;
                match name {
                    "t" => return Ok(Expression::Var(Var::T)),
                    "s" => return Ok(Expression::Var(Var::S)),
                    "pi" => return Ok(Expression::Pi),
                    "e" => return Ok(Expression::E),
                    _ => {}
                }
                let Some(func) = Func::from_name(name) else {
                    return self.error(start, "a known name (t, s, pi, e, exp, ln, sqrt, sin, cos, abs, gamma, pow)");
                };
                self.expect(Tok::LParen, "'(' after function name")?;
                let mut args = Vec::new();
                args.push(self.expr()?);
                while self.tok == Tok::Comma {
                    self.advance()?;
                    args.push(self.expr()?);
                }
                if args.len() != func.arity() {
                    return self.error(
                        start,
                        &format!("{} argument(s) for {}, got {}", func.arity(), func.name(), args.len()),
                    );
                }
                self.expect(Tok::RParen, "')'")?;
                Ok(Expression::Call(func, args))
            }
            _ => self.error(start, "a number, name, '-' or '('"),
        }
    }
}

/// Parses expression source text.
pub fn parse(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser { src: text, pos: 0, tok: Tok::End, tok_start: 0, depth: 0 };
    p.advance()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.error(p.tok_start, "an operator or end of input");
    }
    Ok(e)
}

impl core::str::FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

fn domain(e: &Expression, argument: f64) -> EvalError {
    EvalError::Domain { expr: e.to_string(), argument }
}

fn power(e: &Expression, x: f64, y: f64) -> Result<f64, EvalError> {
    if x < 0.0 && y != libm::trunc(y) {
        return Err(domain(e, x));
    }
    Ok(libm::pow(x, y))
}

impl Expression {
    /// IEEE double evaluation with `t` bound and `s` optionally bound.
    pub fn evaluate(&self, t: f64, s: Option<f64>) -> Result<f64, EvalError> {
        Ok(match self {
            Expression::Number(v) => *v,
            Expression::Var(Var::T) => t,
            Expression::Var(Var::S) => s.ok_or(EvalError::Unbound(Var::S))?,
            Expression::Pi => core::f64::consts::PI,
            Expression::E => core::f64::consts::E,
            Expression::Neg(x) => -x.evaluate(t, s)?,
            Expression::Binary(op, a, b) => {
                let x = a.evaluate(t, s)?;
                let y = b.evaluate(t, s)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                    BinOp::Pow => power(self, x, y)?,
                }
            }
            Expression::Call(func, args) => {
                let x = args[0].evaluate(t, s)?;
                match func {
                    Func::Exp => libm::exp(x),
                    Func::Ln if x <= 0.0 => return Err(domain(self, x)),
                    Func::Ln => libm::log(x),
                    Func::Sqrt if x < 0.0 => return Err(domain(self, x)),
                    Func::Sqrt => libm::sqrt(x),
                    Func::Sin => libm::sin(x),
                    Func::Cos => libm::cos(x),
                    Func::Abs => libm::fabs(x),
                    Func::Gamma if x <= 0.0 && x == libm::trunc(x) => return Err(domain(self, x)),
                    Func::Gamma => gamma(x),
                    Func::Pow => power(self, x, args[1].evaluate(t, s)?)?,
                }
            }
        })
    }

    /// Set of variables occurring in the expression.
    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Expression::Var(v) => {
                out.insert(*v);
            }
            Expression::Neg(x) => x.collect_vars(out),
            Expression::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expression::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Expression::Number(_) | Expression::Pi | Expression::E => {}
        }
    }
}

/// See [`Expression::evaluate`].
pub fn evaluate(expr: &Expression, t: f64, s: Option<f64>) -> Result<f64, EvalError> {
    expr.evaluate(t, s)
}

/// See [`Expression::free_variables`].
pub fn free_variables(expr: &Expression) -> BTreeSet<Var> {
    expr.free_variables()
}

/// Fully parenthesised form that parses back to the same tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Number(v) if *v < 0.0 => write!(f, "(-{:?})", -v),
            Expression::Number(v) => write!(f, "{v:?}"),
            Expression::Var(v) => f.write_str(v.name()),
            Expression::Pi => f.write_str("pi"),
            Expression::E => f.write_str("e"),
            Expression::Neg(x) => write!(f, "(-{x})"),
            Expression::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expression::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
