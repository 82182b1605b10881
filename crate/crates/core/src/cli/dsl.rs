//! Text syntax for field expressions.
//!
//! ```text
//! expr    = [ "-" ] term { ( "+" | "-" ) term } ;
//! term    = scalar [ "*" factor ] | factor ;
//! scalar  = number | "i" | "(" complex ")" ;        number = int [ "/" int ] [ "i" ]
//! factor  = "S" factor | "T" [ "^" int ] factor
//!         | "B" int | "Psi" int | "vac"
//!         | "f{" [ key ":" value { "," key ":" value } ] "}"
//!         | ":" factor factor { factor } ":"
//!         | "(" expr ")" ;
//! query   = "[" expr "_" expr "]" ;
//! ```
//!
//! A bare scalar denotes a multiple of `vac`. Chains `:a b c:` nest to the
//! left, `:(:a b:) c:`; a product nested inside another must be
//! parenthesised. Function literals use the JSON object form
//! `{"e1,..,en": "p/q"}` of a coefficient function.

use serde_json::Value;

use crate::error::{Result, ScdrError};
use crate::scalars::{CoeffFunction, Scalar};
use crate::terms::{FieldExpr, Generator};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Plus,
    Minus,
    Star,
    Under,
    Caret,
    Number(String),
    Ident(String),
    Gen(Generator),
    Func(Value),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn perr(pos: usize, message: impl Into<String>) -> ScdrError {
    ScdrError::Parse { position: pos, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ':' => Some(Tok::Colon),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '_' => Some(Tok::Under),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, pos: start });
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && bytes[i] == b'i' && !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric()) {
                i += 1;
            }
            out.push(Token { tok: Tok::Number(src[start..i].to_string()), pos: start });
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word = &src[start..i];
            if word == "f" && bytes.get(i) == Some(&b'{') {
                let close = src[i..].find('}').ok_or_else(|| perr(i, "unterminated function literal"))? + i;
                let v: Value = serde_json::from_str(&src[i..=close])
                    .map_err(|e| perr(i, format!("bad function literal: {e}")))?;
                out.push(Token { tok: Tok::Func(v), pos: start });
                i = close + 1;
                continue;
            }
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let tok = if i > digits_start {
                let index: u16 = src[digits_start..i].parse().map_err(|_| perr(digits_start, "index too large"))?;
                if index == 0 {
                    return Err(perr(digits_start, "generator indices start at 1"));
                }
                match word {
                    "B" => Tok::Gen(Generator::b(index)),
                    "Psi" => Tok::Gen(Generator::psi(index)),
                    _ => return Err(perr(start, format!("unknown generator `{}`", &src[start..i]))),
                }
            } else {
                Tok::Ident(word.to_string())
            };
            out.push(Token { tok, pos: start });
            continue;
        }
        return Err(perr(start, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// Smallest dimension that accommodates every index and function literal.
fn required_dim(tokens: &[Token]) -> usize {
    tokens
        .iter()
        .map(|t| match &t.tok {
            Tok::Gen(g) => g.index as usize,
            Tok::Func(Value::Object(m)) => m.keys().next().map(|k| k.split(',').count()).unwrap_or(0),
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}

/// Dimension implied by the text alone; at least 1.
pub fn infer_dim(src: &str) -> Result<usize> {
    Ok(required_dim(&lex(src)?).max(1))
}

struct Parser<'a> {
    tokens: &'a [Token],
    at: usize,
    end: usize,
    dim: usize,
    cutoff: u32,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.tokens.get(self.at).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.tokens.get(self.at + k).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map(|t| t.pos).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(perr(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<FieldExpr> {
        let mut items = Vec::new();
        let neg = self.eat(&Tok::Minus);
        let (c, e) = self.term()?;
        items.push((c.signed(neg), e));
        loop {
            let neg = if self.eat(&Tok::Plus) {
                false
            } else if self.eat(&Tok::Minus) {
                true
            } else {
                break;
            };
            let (c, e) = self.term()?;
            items.push((c.signed(neg), e));
        }
        if items.len() == 1 && items[0].0.is_one() {
            return Ok(items.pop().unwrap().1);
        }
        Ok(FieldExpr::sum(items))
    }

    fn term(&mut self) -> Result<(Scalar, FieldExpr)> {
        let scalar = match self.peek() {
            Some(Tok::Number(n)) => {
                let pos = self.pos();
                self.at += 1;
                Some(n.parse::<Scalar>().map_err(|_| perr(pos, format!("bad number `{n}`")))?)
            }
            Some(Tok::Ident(w)) if w == "i" => {
                self.at += 1;
                Some(Scalar::i())
            }
            Some(Tok::LParen) => self.try_complex()?,
            _ => None,
        };
        match scalar {
            Some(c) if self.eat(&Tok::Star) => Ok((c, self.factor()?)),
            Some(c) => Ok((c, FieldExpr::Vacuum)),
            None => Ok((Scalar::one(), self.factor()?)),
        }
    }

    /// `( complex ) *`, or `None` with the position unchanged.
    fn try_complex(&mut self) -> Result<Option<Scalar>> {
        let mut k = 1;
        let mut text = String::new();
        loop {
            match self.peek_at(k) {
                Some(Tok::Number(n)) => text.push_str(n),
                Some(Tok::Ident(w)) if w == "i" => text.push('i'),
                Some(Tok::Plus) => text.push('+'),
                Some(Tok::Minus) => text.push('-'),
                Some(Tok::RParen) => break,
                _ => return Ok(None),
            }
            k += 1;
        }
        if self.peek_at(k + 1) != Some(&Tok::Star) || text.is_empty() {
            return Ok(None);
        }
        let pos = self.pos();
        let c = text.parse::<Scalar>().map_err(|_| perr(pos, format!("bad scalar `{text}`")))?;
        self.at += k + 1;
        Ok(Some(c))
    }

    fn factor(&mut self) -> Result<FieldExpr> {
        let pos = self.pos();
        let tok = self.peek().ok_or_else(|| perr(pos, "unexpected end of input"))?;
        self.at += 1;
        match tok {
            Tok::Ident(w) if w == "S" => Ok(FieldExpr::s(self.factor()?)),
            Tok::Ident(w) if w == "T" => {
                let mut k = 1;
                if self.eat(&Tok::Caret) {
                    let p = self.pos();
                    k = match self.peek() {
                        Some(Tok::Number(n)) => n.parse::<u32>().map_err(|_| perr(p, "bad exponent"))?,
                        _ => return Err(perr(p, "expected exponent after `^`")),
                    };
                    self.at += 1;
                }
                let mut e = self.factor()?;
                for _ in 0..k {
                    e = FieldExpr::t(e);
                }
                Ok(e)
            }
            Tok::Ident(w) if w == "vac" => Ok(FieldExpr::Vacuum),
            Tok::Gen(g) => {
                if g.index as usize > self.dim {
                    return Err(perr(pos, format!("index {} exceeds dimension {}", g.index, self.dim)));
                }
                Ok(FieldExpr::Gen(*g))
            }
            Tok::Func(v) => Ok(FieldExpr::coeff(
                CoeffFunction::from_json(self.dim, self.cutoff, v).map_err(|e| perr(pos, e.to_string()))?,
            )),
            Tok::Colon => {
                let mut items = vec![self.factor()?];
                while !self.eat(&Tok::Colon) {
                    if self.peek().is_none() {
                        return Err(perr(self.pos(), "unterminated normally ordered product"));
                    }
                    items.push(self.factor()?);
                }
                Ok(FieldExpr::nop_chain(items))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            other => Err(perr(pos, format!("unexpected token {other:?}"))),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.tokens.len() {
            return Err(perr(self.pos(), "trailing input"));
        }
        Ok(())
    }
}

fn parser<'a>(tokens: &'a [Token], src: &str, dim: usize, cutoff: u32) -> Result<Parser<'a>> {
    let need = required_dim(tokens);
    if need > dim {
        return Err(perr(0, format!("expression needs dimension {need}, but dim is {dim}")));
    }
    Ok(Parser { tokens, at: 0, end: src.len(), dim, cutoff })
}

/// Parses an expression in `dim` coordinates with series cutoff `cutoff`.
pub fn parse_expr(src: &str, dim: usize, cutoff: u32) -> Result<FieldExpr> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err(perr(0, "empty expression"));
    }
    let mut p = parser(&tokens, src, dim, cutoff)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a bracket query `[a _ b]`.
pub fn parse_query(src: &str, dim: usize, cutoff: u32) -> Result<(FieldExpr, FieldExpr)> {
    let tokens = lex(src)?;
    let mut p = parser(&tokens, src, dim, cutoff)?;
    p.expect(&Tok::LBracket, "`[`")?;
    let a = p.expr()?;
    p.expect(&Tok::Under, "`_`")?;
    let b = p.expr()?;
    p.expect(&Tok::RBracket, "`]`")?;
    p.finish()?;
    Ok((a, b))
}

/// Whether every scalar in the expression is rational.
pub fn is_rational(e: &FieldExpr) -> bool {
    match e {
        FieldExpr::Vacuum | FieldExpr::Gen(_) => true,
        FieldExpr::Coeff(f) => f.terms().all(|(_, c)| c.is_real()),
        FieldExpr::Nop(a, b) => is_rational(a) && is_rational(b),
        FieldExpr::Sum(items) => items.iter().all(|(c, x)| c.is_real() && is_rational(x)),
        FieldExpr::SDeriv(x) | FieldExpr::TDeriv(x) => is_rational(x),
    }
}
