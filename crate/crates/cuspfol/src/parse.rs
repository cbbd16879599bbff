//! Textual grammar for polynomials and differential forms.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | power
//! power   := primary ('^' natural)?
//! primary := rational | name | '(' expr ')' | 'd' '(' expr ')'
//! rational:= natural ('/' natural)?
//! ```
//!
//! `^` binds tighter than unary minus (`-x^2` is `-(x^2)`), and `*` is
//! always explicit — there is no implicit multiplication. `/` exists only
//! inside rational literals such as `3/2`; general division is not part of
//! the grammar. A `name` resolves in this order:
//!
//! 1. a declared variable, verbatim (so a declared `dx` wins over rule 2);
//! 2. `d` + a declared variable — the basis 1-form, e.g. `dx`, `dy`;
//! 3. otherwise: unknown-variable error.
//!
//! `d(expr)` applies the exterior derivative to whatever `expr` evaluates
//! to. Sums must agree in form degree, polynomials may multiply forms, and
//! products or powers of two differential forms are rejected: wedges only
//! appear in *output* notation (`dx^dy`), never in input.
//!
//! Every error carries the 1-based line and column where it was detected.

use std::fmt;
use std::str::FromStr;

use crate::form::{differential, DiffForm};
use crate::poly::{Poly, QPoly, Vars};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at line {line}, column {col}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent too large")]
    HugeExponent,
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    #[error("cannot add forms of degree {0} and {1}")]
    DegreeMismatch(u8, u8),
    #[error("product of two differential forms is not in the grammar")]
    FormProduct,
    #[error("only polynomials can be raised to a power")]
    FormExponent,
    #[error("expected a polynomial, found a differential form")]
    FormWherePolyExpected,
}

fn err<T>(kind: ParseErrorKind, line: u32, col: u32) -> Result<T, ParseError> {
    Err(ParseError { kind, line, col })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    Int(String),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl fmt::Display for TokKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokKind::Int(s) => write!(f, "`{s}`"),
            TokKind::Name(s) => write!(f, "`{s}`"),
            TokKind::Plus => write!(f, "`+`"),
            TokKind::Minus => write!(f, "`-`"),
            TokKind::Star => write!(f, "`*`"),
            TokKind::Caret => write!(f, "`^`"),
            TokKind::Slash => write!(f, "`/`"),
            TokKind::LParen => write!(f, "`(`"),
            TokKind::RParen => write!(f, "`)`"),
            TokKind::End => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    line: u32,
    col: u32,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;
    // advances one char, maintaining line/column counters
    fn step(chars: &[char], i: &mut usize, line: &mut u32, col: &mut u32) {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    }
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            step(&chars, &mut i, &mut line, &mut col);
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                step(&chars, &mut i, &mut line, &mut col);
            }
            tokens.push(Token {
                kind: TokKind::Int(digits),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                name.push(chars[i]);
                step(&chars, &mut i, &mut line, &mut col);
            }
            tokens.push(Token {
                kind: TokKind::Name(name),
                line: tl,
                col: tc,
            });
            continue;
        }
        let kind = match c {
            '+' => TokKind::Plus,
            '-' => TokKind::Minus,
            '*' => TokKind::Star,
            '^' => TokKind::Caret,
            '/' => TokKind::Slash,
            '(' => TokKind::LParen,
            ')' => TokKind::RParen,
            other => return err(ParseErrorKind::UnexpectedChar(other), tl, tc),
        };
        step(&chars, &mut i, &mut line, &mut col);
        tokens.push(Token {
            kind,
            line: tl,
            col: tc,
        });
    }
    tokens.push(Token {
        kind: TokKind::End,
        line,
        col,
    });
    Ok(tokens)
}

/// A partially evaluated expression: polynomial or differential form.
#[derive(Debug, Clone)]
enum Value {
    P(QPoly),
    F(DiffForm<Rat>),
}

impl Value {
    fn degree(&self) -> u8 {
        match self {
            Value::P(_) => 0,
            Value::F(f) => f.degree(),
        }
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: &TokKind, what: &str) -> Result<Token, ParseError> {
        if &self.peek().kind == kind {
            Ok(self.bump())
        } else {
            let t = self.peek();
            err(
                ParseErrorKind::Unexpected {
                    expected: what.to_string(),
                    found: t.kind.to_string(),
                },
                t.line,
                t.col,
            )
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            let (negate, at) = match &self.peek().kind {
                TokKind::Plus => (false, (self.peek().line, self.peek().col)),
                TokKind::Minus => (true, (self.peek().line, self.peek().col)),
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let rhs = if negate { neg(rhs) } else { rhs };
            acc = add(acc, rhs, at)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().kind == TokKind::Star {
            let at = (self.peek().line, self.peek().col);
            self.bump();
            let rhs = self.factor()?;
            acc = mul(acc, rhs, at)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        if self.peek().kind == TokKind::Minus {
            self.bump();
            return Ok(neg(self.factor()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let base = self.primary()?;
        if self.peek().kind != TokKind::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.peek().clone();
        let exp = match &t.kind {
            TokKind::Int(digits) => {
                self.bump();
                match u32::from_str(digits) {
                    Ok(e) => e,
                    Err(_) => return err(ParseErrorKind::HugeExponent, t.line, t.col),
                }
            }
            TokKind::Minus => return err(ParseErrorKind::NegativeExponent, t.line, t.col),
            other => {
                return err(
                    ParseErrorKind::Unexpected {
                        expected: "an exponent".to_string(),
                        found: other.to_string(),
                    },
                    t.line,
                    t.col,
                )
            }
        };
        match base {
            Value::P(p) => {
                if exp == 0 {
                    Ok(Value::P(Poly::one(self.vars)))
                } else {
                    Ok(Value::P(p.pow(exp)))
                }
            }
            Value::F(_) => err(ParseErrorKind::FormExponent, t.line, t.col),
        }
    }

    fn primary(&mut self) -> Result<Value, ParseError> {
        let t = self.bump();
        match t.kind {
            TokKind::Int(digits) => {
                let numer = Rat::from_str(&digits).expect("digits parse");
                // a following `/ natural` completes a rational literal
                if self.peek().kind == TokKind::Slash {
                    self.bump();
                    let d = self.peek().clone();
                    let TokKind::Int(den) = &d.kind else {
                        return err(
                            ParseErrorKind::Unexpected {
                                expected: "a denominator".to_string(),
                                found: d.kind.to_string(),
                            },
                            d.line,
                            d.col,
                        );
                    };
                    self.bump();
                    let denom = Rat::from_str(den).expect("digits parse");
                    if denom.is_zero() {
                        return err(ParseErrorKind::ZeroDenominator, d.line, d.col);
                    }
                    return Ok(Value::P(Poly::constant(self.vars, &numer / &denom)));
                }
                Ok(Value::P(Poly::constant(self.vars, numer)))
            }
            TokKind::Name(name) => {
                // 1. declared variable, verbatim
                if let Some(p) = Poly::var_named(self.vars, &name) {
                    return Ok(Value::P(p));
                }
                // 2. the d(...) macro
                if name == "d" && self.peek().kind == TokKind::LParen {
                    self.bump();
                    let inner = self.expr()?;
                    self.expect(&TokKind::RParen, "`)`")?;
                    return Ok(match inner {
                        Value::P(p) => Value::F(differential(&p)),
                        Value::F(f) => Value::F(f.d()),
                    });
                }
                // 3. d + declared variable: a basis 1-form
                if let Some(rest) = name.strip_prefix('d') {
                    if let Some(i) = self.vars.index_of(rest) {
                        let coeffs: Vec<QPoly> = (0..self.vars.len())
                            .map(|j| {
                                if j == i {
                                    Poly::one(self.vars)
                                } else {
                                    Poly::zero(self.vars)
                                }
                            })
                            .collect();
                        return Ok(Value::F(DiffForm::one_form(self.vars, &coeffs)));
                    }
                }
                err(ParseErrorKind::UnknownVariable(name), t.line, t.col)
            }
            TokKind::LParen => {
                let inner = self.expr()?;
                self.expect(&TokKind::RParen, "`)`")?;
                Ok(inner)
            }
            other => err(
                ParseErrorKind::Unexpected {
                    expected: "an expression".to_string(),
                    found: other.to_string(),
                },
                t.line,
                t.col,
            ),
        }
    }
}

fn neg(v: Value) -> Value {
    match v {
        Value::P(p) => Value::P(-p),
        Value::F(f) => Value::F(f.neg()),
    }
}

fn add(a: Value, b: Value, at: (u32, u32)) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::P(p), Value::P(q)) => Ok(Value::P(&p + &q)),
        (Value::F(f), Value::F(g)) if f.degree() == g.degree() => Ok(Value::F(f.add(&g))),
        (a, b) => err(
            ParseErrorKind::DegreeMismatch(a.degree(), b.degree()),
            at.0,
            at.1,
        ),
    }
}

fn mul(a: Value, b: Value, at: (u32, u32)) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::P(p), Value::P(q)) => Ok(Value::P(&p * &q)),
        (Value::P(p), Value::F(f)) | (Value::F(f), Value::P(p)) => Ok(Value::F(f.scaled_by(&p))),
        (Value::F(_), Value::F(_)) => err(ParseErrorKind::FormProduct, at.0, at.1),
    }
}

fn parse_value(src: &str, vars: &Vars) -> Result<Value, ParseError> {
    let tokens = lex(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        vars,
    };
    let value = parser.expr()?;
    let t = parser.peek();
    if t.kind != TokKind::End {
        return err(
            ParseErrorKind::Unexpected {
                expected: "end of input".to_string(),
                found: t.kind.to_string(),
            },
            t.line,
            t.col,
        );
    }
    Ok(value)
}

/// Parses a polynomial over the declared variables.
pub fn parse_poly(src: &str, vars: &Vars) -> Result<QPoly, ParseError> {
    match parse_value(src, vars)? {
        Value::P(p) => Ok(p),
        Value::F(_) => err(ParseErrorKind::FormWherePolyExpected, 1, 1),
    }
}

/// Parses a differential form; a plain polynomial reads as a 0-form.
pub fn parse_form(src: &str, vars: &Vars) -> Result<DiffForm<Rat>, ParseError> {
    match parse_value(src, vars)? {
        Value::P(p) => Ok(DiffForm::from_poly(p)),
        Value::F(f) => Ok(f),
    }
}
