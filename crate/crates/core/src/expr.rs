//! Expression grammar shared by endomorphism files, transcripts and builtins.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := rational ['*'] factor (['*'] factor)* | rational | factor (['*'] factor)*
//! factor := symbol ['^' uint] | '(' expr ')' ['^' uint]
//! rational := uint ['/' uint]
//! ```
//!
//! Juxtaposition is the (noncommutative) product; `*` is an optional explicit
//! product sign. An identifier that is not a symbol is read as a run of
//! juxtaposed symbols when it splits into them (`zxz`, `z1z2`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::freealg::{AlgebraCtx, NCPoly};
use crate::poly::{CommPoly, Ring};
use crate::scalar::{Field, Scalar};

/// Where parsed values live: the free algebra or a commutative ring.
pub trait Target {
    type Value: Clone;
    fn field(&self) -> Field;
    fn constant(&self, c: Scalar) -> Self::Value;
    fn symbol(&self, name: &str) -> Option<Self::Value>;
    fn symbol_names(&self) -> Vec<String>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
}

impl Target for Arc<AlgebraCtx> {
    type Value = NCPoly;
    fn field(&self) -> Field {
        AlgebraCtx::field(self)
    }
    fn constant(&self, c: Scalar) -> NCPoly {
        NCPoly::constant(self, c)
    }
    fn symbol(&self, name: &str) -> Option<NCPoly> {
        self.lookup(name).map(|l| NCPoly::letter(self, l))
    }
    fn symbol_names(&self) -> Vec<String> {
        let mut v = self.x_names().to_vec();
        v.push(self.z_name().to_string());
        v
    }
    fn add(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        a + b
    }
    fn sub(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        a - b
    }
    fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        a * b
    }
}

impl Target for Arc<Ring> {
    type Value = CommPoly;
    fn field(&self) -> Field {
        Ring::field(self)
    }
    fn constant(&self, c: Scalar) -> CommPoly {
        CommPoly::constant(self, c)
    }
    fn symbol(&self, name: &str) -> Option<CommPoly> {
        self.var_index(name).map(|i| CommPoly::var(self, i))
    }
    fn symbol_names(&self) -> Vec<String> {
        self.vars().to_vec()
    }
    fn add(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a + b
    }
    fn sub(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a - b
    }
    fn mul(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a * b
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Lexer> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = col0 + k;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            toks.push((Tok::Int(s.parse().unwrap()), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            toks.push((Tok::Ident(chars[start..k].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        toks.push((t, col));
        k += 1;
    }
    toks.push((Tok::End, col0 + chars.len()));
    Ok(Lexer { toks })
}

struct Parser<'t, T: Target> {
    target: &'t T,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    pending_prefix: Option<T::Value>,
}

impl<'t, T: Target> Parser<'t, T> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err<V>(&self, msg: impl Into<String>) -> Result<V> {
        Err(Error::Parse {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<T::Value> {
        let mut neg = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                neg = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if neg {
            self.target.sub(&self.target.constant(self.target.field().zero()), &first)
        } else {
            first
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.target.add(&acc, &t);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.target.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen)
    }

    fn term(&mut self) -> Result<T::Value> {
        let mut acc = None;
        if let Tok::Int(_) = self.peek() {
            let c = self.rational()?;
            acc = Some(self.target.constant(c));
            if *self.peek() == Tok::Star {
                self.bump();
                if !self.starts_factor() {
                    return self.err("expected a factor after `*`");
                }
            }
        }
        if acc.is_none() && !self.starts_factor() {
            return self.err("expected a term");
        }
        while self.starts_factor() {
            let f = self.factor()?;
            acc = Some(match acc {
                Some(a) => self.target.mul(&a, &f),
                None => f,
            });
            if *self.peek() == Tok::Star {
                self.bump();
                if !self.starts_factor() {
                    return self.err("expected a factor after `*`");
                }
            }
        }
        Ok(acc.unwrap())
    }

    fn rational(&mut self) -> Result<Scalar> {
        let Tok::Int(n) = self.bump() else { unreachable!() };
        let mut d = BigInt::from(1);
        if *self.peek() == Tok::Slash {
            self.bump();
            match self.bump() {
                Tok::Int(v) => d = v,
                _ => return self.err("expected a denominator after `/`"),
            }
        }
        let col = self.col();
        self.target.field().ratio(&n, &d).map_err(|e| Error::Parse {
            line: self.line,
            col,
            msg: e.to_string(),
        })
    }

    fn exponent(&mut self) -> Result<u32> {
        if *self.peek() != Tok::Caret {
            return Ok(1);
        }
        self.bump();
        match self.bump() {
            Tok::Int(v) => match v.to_u32() {
                Some(e) => Ok(e),
                None => self.err("exponent too large"),
            },
            _ => self.err("expected an exponent after `^`"),
        }
    }

    /// Reads an identifier as one symbol, or as a juxtaposed run of symbols
    /// (`zxz`, `z1z2`) split by longest match. A trailing `^e` binds to the
    /// last symbol of the run.
    fn symbol_run(&mut self, name: &str) -> Option<T::Value> {
        if let Some(v) = self.target.symbol(name) {
            return Some(v);
        }
        let mut names = self.target.symbol_names();
        names.sort_by_key(|n| std::cmp::Reverse(n.len()));
        let mut parts = Vec::new();
        let mut rest = name;
        while !rest.is_empty() {
            let head = names.iter().find(|n| !n.is_empty() && rest.starts_with(n.as_str()))?;
            parts.push(self.target.symbol(head)?);
            rest = &rest[head.len()..];
        }
        let last = parts.pop()?;
        self.pending_prefix = parts.into_iter().reduce(|a, b| self.target.mul(&a, &b));
        Some(last)
    }

    fn factor(&mut self) -> Result<T::Value> {
        let col = self.col();
        let base = match self.bump() {
            Tok::Ident(name) => match self.symbol_run(&name) {
                Some(v) => v,
                None => {
                    return Err(Error::Parse {
                        line: self.line,
                        col,
                        msg: format!("unknown symbol `{name}`"),
                    })
                }
            },
            Tok::LParen => {
                let e = self.expr()?;
                if self.bump() != Tok::RParen {
                    return Err(Error::Parse {
                        line: self.line,
                        col: self.toks[self.pos.saturating_sub(1)].1,
                        msg: "expected `)`".into(),
                    });
                }
                e
            }
            _ => unreachable!(),
        };
        let prefix = self.pending_prefix.take();
        let e = self.exponent()?;
        let mut acc = prefix.unwrap_or_else(|| self.target.constant(self.target.field().one()));
        for _ in 0..e {
            acc = self.target.mul(&acc, &base);
        }
        Ok(acc)
    }
}

/// Parses `src` as one expression. `line` and `col0` (1-based) position the
/// text inside a larger document for diagnostics.
pub fn parse_expr_at<T: Target>(target: &T, src: &str, line: usize, col0: usize) -> Result<T::Value> {
    let lexer = lex(src, line, col0)?;
    let mut p = Parser {
        target,
        toks: lexer.toks,
        pos: 0,
        line,
        pending_prefix: None,
    };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

pub fn parse_expr<T: Target>(target: &T, src: &str) -> Result<T::Value> {
    parse_expr_at(target, src, 1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noncommutative_expressions() {
        let ctx = AlgebraCtx::standard(Field::Rational, 2);
        let f = parse_expr(&ctx, "x + z(xz - zy)").unwrap();
        assert_eq!(f.to_string(), "x + z x z - z^2 y");
        let g = parse_expr(&ctx, "x + z x z - z^2 y").unwrap();
        assert_eq!(f, g);
        let h = parse_expr(&ctx, "-1/2 z y z + 3*x").unwrap();
        assert_eq!(h.to_string(), "3 x - 1/2 z y z");
        assert_eq!(parse_expr(&ctx, "(x+y)^2").unwrap().num_terms(), 4);
        assert_eq!(parse_expr(&ctx, "0").unwrap().to_string(), "0");
        assert_eq!(parse_expr(&ctx, "zxz^2").unwrap().to_string(), "z x z^2");
        assert!(parse_expr(&ctx, "zqz").is_err());
    }

    #[test]
    fn commutative_expressions() {
        let r = Ring::bivariate(Field::Rational);
        let p = parse_expr(&r, "1+z1*z2").unwrap();
        assert_eq!(p.to_string(), "1+z1*z2");
        let p = parse_expr(&r, "-1/2*z2^3+z1 z2").unwrap();
        assert_eq!(p.to_string(), "z1*z2-1/2*z2^3");
        assert_eq!(parse_expr(&r, "z1z2^2").unwrap().to_string(), "z1*z2^2");
    }

    #[test]
    fn prime_field_coefficients() {
        let ctx = AlgebraCtx::standard(Field::Prime(7), 2);
        assert_eq!(parse_expr(&ctx, "1/2 x").unwrap().to_string(), "4 x");
        assert!(parse_expr(&ctx, "1/7 x").is_err());
    }

    #[test]
    fn diagnostics() {
        let ctx = AlgebraCtx::standard(Field::Rational, 2);
        let e = parse_expr_at(&ctx, "x + w", 3, 6).unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, col: 10, msg: "unknown symbol `w`".into() });
        assert!(matches!(parse_expr(&ctx, "x +"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr(&ctx, "(x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr(&ctx, "x $"), Err(Error::Parse { col: 3, .. })));
        assert!(matches!(parse_expr(&ctx, "x )"), Err(Error::Parse { .. })));
    }
}
