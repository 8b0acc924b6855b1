//! A small expression language for algebra elements.
//!
//! ```text
//! expr    := ['-'] term (('+'|'-') term)*
//! term    := factor (factor | '/' factor)*      juxtaposition multiplies
//! factor  := atom ('^' int | '\'')*             postfix power and adjoint
//! atom    := ident | uint | 'q' | '(' expr ')'
//! ```
//!
//! Products bind tighter than sums, postfixes tighter still; `/` divides by
//! a scalar. Negative exponents are allowed on scalar subexpressions only.
//! Errors carry the 1-based column of the offending token.

use qhopf_core::ncpoly::NCPoly;
use qhopf_core::presentation::PresId;
use qhopf_core::scalar::QRat;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    QParam,
    Gen(String),
    Adj(Box<Expr>),
    Pow(Box<Expr>, i64),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

#[derive(Clone, Debug)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at column {}: {}",
            self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Caret,
    Prime,
    Slash,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            '\'' => {
                toks.push((Tok::Prime, col));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text.parse::<i64>().map_err(|_| ParseError {
                    column: start + 1,
                    message: format!("integer literal `{}` is too large", text),
                })?;
                toks.push((Tok::Int(value), start + 1));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                toks.push((Tok::Ident(text), start + 1));
            }
            _ => {
                return Err(ParseError {
                    column: col,
                    message: format!("unexpected character `{}`", c),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        end: chars.len() + 1,
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError {
                column: self.col(),
                message: format!("expected {}", what),
            })
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Expr::Neg(Box::new(self.parse_term()?))
        } else {
            self.parse_term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    acc = Expr::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    acc = Expr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen)
        )
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let rhs = self.parse_factor()?;
                acc = Expr::Div(Box::new(acc), Box::new(rhs));
            } else if self.starts_factor() {
                let rhs = self.parse_factor()?;
                acc = Expr::Mul(Box::new(acc), Box::new(rhs));
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.parse_atom()?;
        loop {
            match self.peek() {
                Some(Tok::Caret) => {
                    let caret_col = self.col();
                    self.pos += 1;
                    let negative = if self.peek() == Some(&Tok::Minus) {
                        self.pos += 1;
                        true
                    } else {
                        false
                    };
                    let k = match self.bump() {
                        Some(Tok::Int(k)) => k,
                        _ => {
                            return Err(ParseError {
                                column: caret_col,
                                message: "expected an integer exponent after `^`".into(),
                            })
                        }
                    };
                    acc = Expr::Pow(Box::new(acc), if negative { -k } else { k });
                }
                Some(Tok::Prime) => {
                    self.pos += 1;
                    acc = Expr::Adj(Box::new(acc));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Ident(name)) => {
                if name == "q" {
                    Ok(Expr::QParam)
                } else {
                    Ok(Expr::Gen(name))
                }
            }
            Some(Tok::Int(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let e = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(t) => Err(ParseError {
                column: col,
                message: format!("unexpected token {:?}", t),
            }),
            None => Err(ParseError {
                column: col,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parse a source string into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let lexer = lex(src)?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
        end: lexer.end,
    };
    let e = p.parse_expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError {
            column: p.col(),
            message: "trailing input".into(),
        });
    }
    Ok(e)
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Pow(..) | Expr::Adj(..) => 3,
        Expr::Num(_) | Expr::QParam | Expr::Gen(_) => 4,
    }
}

fn pretty_prec(e: &Expr, min: u8, out: &mut String) {
    let p = prec(e);
    let need_parens = p < min;
    if need_parens {
        out.push('(');
    }
    match e {
        Expr::Num(v) => out.push_str(&v.to_string()),
        Expr::QParam => out.push('q'),
        Expr::Gen(name) => out.push_str(name),
        Expr::Adj(x) => {
            pretty_prec(x, 3, out);
            out.push('\'');
        }
        Expr::Pow(x, k) => {
            pretty_prec(x, 3, out);
            out.push('^');
            out.push_str(&k.to_string());
        }
        Expr::Mul(x, y) => {
            pretty_prec(x, 2, out);
            out.push(' ');
            pretty_prec(y, 3, out);
        }
        Expr::Div(x, y) => {
            pretty_prec(x, 2, out);
            out.push('/');
            pretty_prec(y, 3, out);
        }
        Expr::Add(x, y) => {
            pretty_prec(x, 1, out);
            out.push_str(" + ");
            pretty_prec(y, 2, out);
        }
        Expr::Sub(x, y) => {
            pretty_prec(x, 1, out);
            out.push_str(" - ");
            pretty_prec(y, 2, out);
        }
        Expr::Neg(x) => {
            out.push('-');
            pretty_prec(x, 2, out);
        }
    }
    if need_parens {
        out.push(')');
    }
}

/// Minimal-parentheses canonical text; `parse(pretty(e)) == e`.
pub fn pretty(e: &Expr) -> String {
    let mut out = String::new();
    pretty_prec(e, 0, &mut out);
    out
}

/// Resolve a generator name for an algebra, honoring the circle alias
/// `v` for `u`.
fn resolve_generator(pres: PresId, name: &str) -> Option<NCPoly> {
    let canonical = match (pres, name) {
        (PresId::Circle, "v") => "u",
        _ => name,
    };
    NCPoly::generator(pres, canonical).ok()
}

#[derive(Clone, Debug)]
pub struct EvalError {
    pub message: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for EvalError {}

/// Evaluate an expression in the chosen algebra. Scalars embed as
/// multiples of the empty word; division and negative powers demand
/// scalar operands.
pub fn eval(e: &Expr, pres: PresId) -> Result<NCPoly, EvalError> {
    match e {
        Expr::Num(v) => Ok(NCPoly::scalar(pres, QRat::from_int(*v))),
        Expr::QParam => Ok(NCPoly::scalar(pres, QRat::q_pow(1))),
        Expr::Gen(name) => resolve_generator(pres, name).ok_or_else(|| EvalError {
            message: format!("unknown generator `{}` in algebra {}", name, pres),
        }),
        Expr::Adj(x) => Ok(eval(x, pres)?.star()),
        Expr::Pow(x, k) => {
            let base = eval(x, pres)?;
            if *k >= 0 {
                Ok(base.pow(*k as u32).normalize())
            } else {
                let s = base.normalize().as_scalar().ok_or_else(|| EvalError {
                    message: "negative powers are defined on scalars only".into(),
                })?;
                if s.is_zero() {
                    return Err(EvalError {
                        message: "cannot invert zero".into(),
                    });
                }
                Ok(NCPoly::scalar(pres, s.inv().pow(-k)))
            }
        }
        Expr::Mul(x, y) => Ok(eval(x, pres)?.mul(&eval(y, pres)?).normalize()),
        Expr::Div(x, y) => {
            let den = eval(y, pres)?
                .normalize()
                .as_scalar()
                .ok_or_else(|| EvalError {
                    message: "division is defined by scalars only".into(),
                })?;
            if den.is_zero() {
                return Err(EvalError {
                    message: "division by zero".into(),
                });
            }
            Ok(eval(x, pres)?.scale(&den.inv()))
        }
        Expr::Add(x, y) => Ok(eval(x, pres)?.add(&eval(y, pres)?)),
        Expr::Sub(x, y) => Ok(eval(x, pres)?.sub(&eval(y, pres)?)),
        Expr::Neg(x) => Ok(eval(x, pres)?.neg()),
    }
}

/// Parse and evaluate in one step.
pub fn parse_in(src: &str, pres: PresId) -> Result<NCPoly, String> {
    let e = parse(src).map_err(|e| e.to_string())?;
    eval(&e, pres).map_err(|e| e.to_string())
}
