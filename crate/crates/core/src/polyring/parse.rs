//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Implicit multiplication is rejected; whitespace is ignored.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{MPoly, Registry};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax { pos: start, msg: alloc::format!("unexpected character {:?}", c as char) })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    registry: &'a Registry,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.at += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.at += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    let pos = self.pos();
                    self.at += 1;
                    let e = e
                        .to_u32()
                        .ok_or_else(|| Error::Syntax { pos, msg: "exponent too large".to_string() })?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(MPoly::constant(self.registry, n))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                let i = self.registry.index_of(&name).ok_or(Error::UnknownIdentifier { name, pos })?;
                Ok(MPoly::var(self.registry, i))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.at += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(_) => self.err("expected a number, identifier or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub(crate) fn parse_with_registry(text: &str, registry: &Registry) -> Result<MPoly> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, at: 0, end: text.len(), registry };
    let out = parser.expr()?;
    if parser.at != parser.toks.len() {
        return parser.err(match parser.peek() {
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen) => "implicit multiplication is not allowed; use `*`",
            _ => "unexpected token",
        });
    }
    Ok(out)
}

/// Parses `text` over a fresh registry built from `names`.
pub fn parse_poly<S: AsRef<str>>(text: &str, names: &[S]) -> Result<MPoly> {
    let registry = Registry::new(names)?;
    parse_with_registry(text, &registry)
}
