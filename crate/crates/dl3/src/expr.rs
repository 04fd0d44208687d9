//! A small expression language for scalar functions of one variable `s`,
//! evaluated over dual scalars.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := unary ("^" factor)?            // ^ is right-associative
//! unary  := "-" unary | atom
//! atom   := number | "s" | ident "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` keeps a numeric-literal exponent in the tree; any other exponent is
//! rewritten as `exp(rhs * ln(lhs))` at parse time, so domain analysis stays
//! decidable. Function names come from a fixed set. Because literals are real
//! and all operations are dual-arithmetic, evaluating at `s₀ + ε·1` returns
//! the derivative of the expression at `s₀` in the dual part — expressions
//! never need user-supplied derivatives.

use crate::dual::{lift, DualScalar, LiftFn};
use crate::error::{Error, Result};
use std::fmt;

/// Functions callable inside expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
    Tanh,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// `base ^ literal-exponent`.
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

/// An expression tree node with its source span (byte offsets).
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: (usize, usize),
}

impl Expr {
    fn new(kind: ExprKind, span: (usize, usize)) -> Self {
        Self { kind, span }
    }

    /// Evaluates over the dual ring; `s` maps to the argument, literals map
    /// to `(v, 0)`, operators use dual arithmetic and functions the Taylor
    /// lift. Domain and division errors carry the offending source span.
    pub fn eval(&self, src: &str, s: DualScalar) -> Result<DualScalar> {
        let at = |e: Error| -> Error {
            match e {
                Error::Eval { .. } => e,
                other => Error::Eval {
                    start: self.span.0,
                    end: self.span.1,
                    fragment: src
                        .get(self.span.0..self.span.1)
                        .unwrap_or_default()
                        .to_string(),
                    message: other.to_string(),
                },
            }
        };
        let r = match &self.kind {
            ExprKind::Num(v) => DualScalar::from_re(*v),
            ExprKind::Var => s,
            ExprKind::Add(a, b) => a.eval(src, s)? + b.eval(src, s)?,
            ExprKind::Sub(a, b) => a.eval(src, s)? - b.eval(src, s)?,
            ExprKind::Mul(a, b) => a.eval(src, s)?.checked_mul(b.eval(src, s)?).map_err(at)?,
            ExprKind::Div(a, b) => a.eval(src, s)?.div(b.eval(src, s)?).map_err(at)?,
            ExprKind::Neg(a) => -a.eval(src, s)?,
            ExprKind::Pow(base, p) => lift(LiftFn::Power(*p), base.eval(src, s)?).map_err(at)?,
            ExprKind::Call(f, arg) => {
                let x = arg.eval(src, s)?;
                match f {
                    Func::Sin => lift(LiftFn::Sin, x),
                    Func::Cos => lift(LiftFn::Cos, x),
                    Func::Sinh => lift(LiftFn::Sinh, x),
                    Func::Cosh => lift(LiftFn::Cosh, x),
                    Func::Exp => lift(LiftFn::Exp, x),
                    Func::Ln => lift(LiftFn::Ln, x),
                    Func::Sqrt => lift(LiftFn::Sqrt, x),
                    // tanh = sinh/cosh in dual arithmetic; the quotient rule
                    // reproduces the exact lift d(tanh) = 1/cosh².
                    Func::Tanh => lift(LiftFn::Sinh, x)?.div(lift(LiftFn::Cosh, x)?),
                }
                .map_err(at)?
            }
        };
        if r.is_finite() {
            Ok(r)
        } else {
            Err(at(Error::Overflow { op: "eval" }))
        }
    }

    /// Symbolic derivative with respect to `s`. Spans point back at the
    /// subexpressions the derivative terms came from.
    pub fn derivative(&self) -> Expr {
        let sp = self.span;
        let k = match &self.kind {
            ExprKind::Num(_) => ExprKind::Num(0.0),
            ExprKind::Var => ExprKind::Num(1.0),
            ExprKind::Add(a, b) => {
                ExprKind::Add(Box::new(a.derivative()), Box::new(b.derivative()))
            }
            ExprKind::Sub(a, b) => {
                ExprKind::Sub(Box::new(a.derivative()), Box::new(b.derivative()))
            }
            ExprKind::Mul(a, b) => ExprKind::Add(
                Box::new(Expr::new(
                    ExprKind::Mul(Box::new(a.derivative()), b.clone()),
                    sp,
                )),
                Box::new(Expr::new(
                    ExprKind::Mul(a.clone(), Box::new(b.derivative())),
                    sp,
                )),
            ),
            ExprKind::Div(a, b) => {
                // (a'b - ab') / b²
                let num = Expr::new(
                    ExprKind::Sub(
                        Box::new(Expr::new(
                            ExprKind::Mul(Box::new(a.derivative()), b.clone()),
                            sp,
                        )),
                        Box::new(Expr::new(
                            ExprKind::Mul(a.clone(), Box::new(b.derivative())),
                            sp,
                        )),
                    ),
                    sp,
                );
                ExprKind::Div(
                    Box::new(num),
                    Box::new(Expr::new(ExprKind::Pow(b.clone(), 2.0), sp)),
                )
            }
            ExprKind::Neg(a) => ExprKind::Neg(Box::new(a.derivative())),
            ExprKind::Pow(base, p) => {
                // p · base^(p−1) · base'
                let scaled = Expr::new(
                    ExprKind::Mul(
                        Box::new(Expr::new(ExprKind::Num(*p), sp)),
                        Box::new(Expr::new(ExprKind::Pow(base.clone(), p - 1.0), sp)),
                    ),
                    sp,
                );
                ExprKind::Mul(Box::new(scaled), Box::new(base.derivative()))
            }
            ExprKind::Call(f, arg) => {
                let chain = |outer: ExprKind| {
                    ExprKind::Mul(Box::new(Expr::new(outer, sp)), Box::new(arg.derivative()))
                };
                match f {
                    Func::Sin => chain(ExprKind::Call(Func::Cos, arg.clone())),
                    Func::Cos => chain(ExprKind::Neg(Box::new(Expr::new(
                        ExprKind::Call(Func::Sin, arg.clone()),
                        sp,
                    )))),
                    Func::Sinh => chain(ExprKind::Call(Func::Cosh, arg.clone())),
                    Func::Cosh => chain(ExprKind::Call(Func::Sinh, arg.clone())),
                    Func::Exp => chain(ExprKind::Call(Func::Exp, arg.clone())),
                    Func::Ln => ExprKind::Div(Box::new(arg.derivative()), arg.clone()),
                    Func::Sqrt => {
                        // arg' / (2 sqrt(arg))
                        let denom = Expr::new(
                            ExprKind::Mul(
                                Box::new(Expr::new(ExprKind::Num(2.0), sp)),
                                Box::new(Expr::new(ExprKind::Call(Func::Sqrt, arg.clone()), sp)),
                            ),
                            sp,
                        );
                        ExprKind::Div(Box::new(arg.derivative()), Box::new(denom))
                    }
                    Func::Tanh => {
                        // arg' / cosh(arg)²
                        let denom = Expr::new(
                            ExprKind::Pow(
                                Box::new(Expr::new(ExprKind::Call(Func::Cosh, arg.clone()), sp)),
                                2.0,
                            ),
                            sp,
                        );
                        ExprKind::Div(Box::new(arg.derivative()), Box::new(denom))
                    }
                }
            }
        };
        Expr::new(k, sp)
    }
}

/// Prints fully parenthesized, so `parse(print(e))` rebuilds the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(v) => {
                if *v < 0.0 || v.is_sign_negative() {
                    write!(f, "({v})")
                } else {
                    write!(f, "{v}")
                }
            }
            ExprKind::Var => write!(f, "s"),
            ExprKind::Add(a, b) => write!(f, "({a} + {b})"),
            ExprKind::Sub(a, b) => write!(f, "({a} - {b})"),
            ExprKind::Mul(a, b) => write!(f, "({a} * {b})"),
            ExprKind::Div(a, b) => write!(f, "({a} / {b})"),
            ExprKind::Neg(a) => write!(f, "(-{a})"),
            ExprKind::Pow(a, p) => {
                if *p < 0.0 {
                    write!(f, "({a} ^ ({p}))")
                } else {
                    write!(f, "({a} ^ {p})")
                }
            }
            ExprKind::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize, usize)>> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(Tok, usize, usize)>> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' | b'.' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                // Optional exponent part: e.g. 1e-3, 2.5E+4.
                if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
                    let mark = self.pos;
                    self.pos += 1;
                    if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                        self.pos += 1;
                    }
                    if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                            self.pos += 1;
                        }
                    } else {
                        self.pos = mark;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: f64 = text.parse().map_err(|_| Error::Parse {
                    offset: start,
                    message: format!("invalid number literal `{text}`"),
                })?;
                Tok::Num(v)
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Tok::Ident(
                    std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .to_string(),
                )
            }
            other => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok(Some((tok, start, self.pos)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, s, _)| s)
            .unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<(Tok, usize, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek() {
            let op = match op {
                Tok::Plus => ExprKind::Add as fn(_, _) -> _,
                Tok::Minus => ExprKind::Sub as fn(_, _) -> _,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let span = (lhs.span.0, rhs.span.1);
            lhs = Expr::new(op(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(op) = self.peek() {
            let op = match op {
                Tok::Star => ExprKind::Mul as fn(_, _) -> _,
                Tok::Slash => ExprKind::Div as fn(_, _) -> _,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            let span = (lhs.span.0, rhs.span.1);
            lhs = Expr::new(op(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let exp = self.factor()?;
            let span = (base.span.0, exp.span.1);
            // A literal exponent (possibly negated) stays a Pow node; anything
            // else is rewritten via exp/ln.
            let lit = match &exp.kind {
                ExprKind::Num(v) => Some(*v),
                ExprKind::Neg(inner) => match inner.kind {
                    ExprKind::Num(v) => Some(-v),
                    _ => None,
                },
                _ => None,
            };
            return Ok(match lit {
                Some(p) => Expr::new(ExprKind::Pow(Box::new(base), p), span),
                None => {
                    let ln = Expr::new(ExprKind::Call(Func::Ln, Box::new(base)), span);
                    let prod = Expr::new(ExprKind::Mul(Box::new(exp), Box::new(ln)), span);
                    Expr::new(ExprKind::Call(Func::Exp, Box::new(prod)), span)
                }
            });
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            let (_, start, _) = self.bump().unwrap();
            let inner = self.unary()?;
            let span = (start, inner.span.1);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.bump() {
            Some((Tok::Num(v), s, e)) => Ok(Expr::new(ExprKind::Num(v), (s, e))),
            Some((Tok::Ident(name), s, e)) => {
                if matches!(self.peek(), Some(Tok::LParen)) {
                    let func = Func::from_name(&name).ok_or(Error::Parse {
                        offset: s,
                        message: format!("unknown function `{name}`"),
                    })?;
                    self.bump();
                    let arg = self.expr()?;
                    match self.bump() {
                        Some((Tok::RParen, _, close)) => {
                            Ok(Expr::new(ExprKind::Call(func, Box::new(arg)), (s, close)))
                        }
                        other => Err(Error::Parse {
                            offset: other.map(|(_, s2, _)| s2).unwrap_or(self.len),
                            message: "unbalanced parenthesis: expected `)`".into(),
                        }),
                    }
                } else if name == "s" {
                    Ok(Expr::new(ExprKind::Var, (s, e)))
                } else {
                    Err(Error::Parse {
                        offset: s,
                        message: format!("unknown identifier `{name}` (the variable is `s`)"),
                    })
                }
            }
            Some((Tok::LParen, s, _)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _, close)) => Ok(Expr::new(inner.kind, (s, close))),
                    other => Err(Error::Parse {
                        offset: other.map(|(_, s2, _)| s2).unwrap_or(self.len),
                        message: "unbalanced parenthesis: expected `)`".into(),
                    }),
                }
            }
            other => Err(Error::Parse {
                offset: other.map(|(_, s2, _)| s2).unwrap_or(offset),
                message: "expected a number, `s`, a function call or `(`".into(),
            }),
        }
    }
}

/// Parses an expression; errors carry the character offset of the problem.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse {
            offset: p.offset(),
            message: "trailing tokens after expression".into(),
        });
    }
    Ok(e)
}
