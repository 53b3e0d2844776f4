//! Recursive-descent parser for the ASCII polynomial grammar.
//!
//! ```text
//! expr     := [sign] term { sign term }
//! term     := factor { ("*" | "/") factor | factor }   (juxtaposition multiplies)
//! factor   := atom [ "^" exponent ]
//! atom     := NUMBER | IDENT | "(" expr ")"
//! exponent := ["-"] NUMBER | "(" "-" NUMBER ")"
//! sign     := "+" | "-"
//! ```
//!
//! Division is exact and only by a nonzero constant subexpression, which also
//! covers rational literals such as `1/2`. Variables are `x1..xn`, with the
//! aliases `x`, `y`, `z` accepted when n <= 3. Negative exponents are rejected
//! unless the Laurent entry point is used.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Polynomial, Rat};
use crate::error::{Error, Result};

/// Absolute bound on exponent literals; expansion beyond this is refused.
const MAX_EXPONENT: i64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Lexer {
    fn new(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                b'+' => {
                    toks.push((i, Tok::Plus));
                    i += 1;
                }
                b'-' => {
                    toks.push((i, Tok::Minus));
                    i += 1;
                }
                b'*' => {
                    toks.push((i, Tok::Star));
                    i += 1;
                }
                b'/' => {
                    toks.push((i, Tok::Slash));
                    i += 1;
                }
                b'^' => {
                    toks.push((i, Tok::Caret));
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
                b'0'..=b'9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits = &text[start..i];
                    let n: BigInt = digits.parse().expect("digit run parses");
                    toks.push((start, Tok::Num(n)));
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    toks.push((start, Tok::Ident(text[start..i].to_string())));
                }
                _ => {
                    return Err(Error::Parse {
                        pos: i,
                        msg: format!("unexpected character `{}`", c as char),
                    })
                }
            }
        }
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_pos(&self, text_len: usize) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(text_len)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }
}

struct Parser<'a> {
    lex: Lexer,
    names: &'a [String],
    laurent: bool,
    text_len: usize,
}

impl<'a> Parser<'a> {
    fn vars(&self) -> usize {
        self.names.len()
    }

    fn resolve_var(&self, name: &str, pos: usize) -> Result<usize> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        // x1..xn always resolve by position
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(i) = rest.parse::<usize>() {
                if i >= 1 && i <= self.vars() {
                    return Ok(i - 1);
                }
            }
        }
        // single-letter aliases when n <= 3
        if self.vars() <= 3 && name.len() == 1 {
            if let Some(i) = ["x", "y", "z"].iter().position(|a| *a == name) {
                if i < self.vars() {
                    return Ok(i);
                }
            }
        }
        Err(Error::UnknownVariable {
            pos,
            name: name.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        if let Some(tok) = self.lex.peek() {
            if *tok == Tok::Minus {
                self.lex.next();
                negate = true;
            } else if *tok == Tok::Plus {
                self.lex.next();
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        while let Some(tok) = self.lex.peek() {
            match tok {
                Tok::Plus => {
                    self.lex.next();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Tok::Minus => {
                    self.lex.next();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.lex.peek() {
                Some(Tok::Star) => {
                    self.lex.next();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Slash) => {
                    let (pos, _) = self.lex.next().expect("peeked");
                    let f = self.factor()?;
                    let c = f.constant_term();
                    if f.num_terms() > 1 || (f.num_terms() == 1 && c.is_zero()) {
                        return Err(Error::Parse {
                            pos,
                            msg: "division only by a nonzero constant".into(),
                        });
                    }
                    if c.is_zero() {
                        return Err(Error::Parse {
                            pos,
                            msg: "division by zero".into(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                // juxtaposition: `2x`, `3(x+1)`
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.lex.peek() == Some(&Tok::Caret) {
            self.lex.next();
            let (pos, e) = self.exponent()?;
            if num_traits::Signed::abs(&e) > BigInt::from(MAX_EXPONENT) {
                return Err(Error::Parse {
                    pos,
                    msg: format!("exponent exceeds the cap of {MAX_EXPONENT}"),
                });
            }
            if e.is_negative() {
                if !self.laurent {
                    return Err(Error::NegativeExponent { pos });
                }
                // Laurent: base must be a single monomial for exact inversion
                if base.num_terms() != 1 {
                    return Err(Error::Parse {
                        pos,
                        msg: "negative powers only of a single monomial".into(),
                    });
                }
                let (m, c) = base.terms().next().expect("one term");
                let exps: Vec<i64> = m
                    .exponents()
                    .iter()
                    .map(|&v| {
                        v.checked_mul(i64::try_from(e.clone()).expect("exponent bounded"))
                            .expect("exponent in range")
                    })
                    .collect();
                let k = u32::try_from(-e.clone()).map_err(|_| Error::Parse {
                    pos,
                    msg: "exponent out of range".into(),
                })?;
                let cinv = c.clone().recip().pow(k as i32);
                return Ok(Polynomial::monomial(self.vars(), exps, cinv));
            }
            let k = u32::try_from(e).map_err(|_| Error::Parse {
                pos,
                msg: "exponent out of range".into(),
            })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<(usize, BigInt)> {
        match self.lex.next() {
            Some((pos, Tok::Num(n))) => Ok((pos, n)),
            Some((pos, Tok::Minus)) => match self.lex.next() {
                Some((_, Tok::Num(n))) => Ok((pos, -n)),
                other => Err(Error::Parse {
                    pos: other.map(|(p, _)| p).unwrap_or(self.text_len),
                    msg: "expected integer exponent".into(),
                }),
            },
            Some((pos, Tok::LParen)) => {
                let inner = self.exponent()?;
                match self.lex.next() {
                    Some((_, Tok::RParen)) => Ok((pos, inner.1)),
                    other => Err(Error::Parse {
                        pos: other.map(|(p, _)| p).unwrap_or(self.text_len),
                        msg: "expected `)` after exponent".into(),
                    }),
                }
            }
            other => Err(Error::Parse {
                pos: other.map(|(p, _)| p).unwrap_or(self.text_len),
                msg: "expected integer exponent".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.lex.next() {
            Some((_, Tok::Num(n))) => Ok(Polynomial::constant(self.vars(), Rat::from_integer(n))),
            Some((pos, Tok::Ident(name))) => {
                let idx = self.resolve_var(&name, pos)?;
                Polynomial::variable(self.vars(), idx)
            }
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.lex.next() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    other => Err(Error::Parse {
                        pos: other.map(|(p, _)| p).unwrap_or(self.text_len),
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Some((pos, tok)) => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {tok:?}"),
            }),
            None => Err(Error::Parse {
                pos: self.text_len,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

fn parse_impl(text: &str, names: &[String], laurent: bool) -> Result<Polynomial> {
    let lex = Lexer::new(text)?;
    let mut p = Parser {
        lex,
        names,
        laurent,
        text_len: text.len(),
    };
    if p.lex.peek().is_none() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let poly = p.expr()?;
    if p.lex.peek().is_some() {
        return Err(Error::Parse {
            pos: p.lex.peek_pos(text.len()),
            msg: "trailing input".into(),
        });
    }
    Ok(poly)
}

fn default_names(vars: usize) -> Vec<String> {
    (0..vars).map(|i| format!("x{}", i + 1)).collect()
}

/// Parse an expression in `vars` variables; exponents must be non-negative.
pub fn parse_poly(text: &str, vars: usize) -> Result<Polynomial> {
    parse_impl(text, &default_names(vars), false)
}

/// Parse allowing negative exponents (Laurent monomials).
pub fn parse_poly_laurent(text: &str, vars: usize) -> Result<Polynomial> {
    parse_impl(text, &default_names(vars), true)
}

/// Parse with explicit variable names (one per variable).
pub fn parse_poly_with_names(text: &str, names: &[&str]) -> Result<Polynomial> {
    let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    parse_impl(text, &owned, false)
}

/// Parse with explicit variable names, allowing negative exponents.
pub fn parse_poly_with_names_laurent(text: &str, names: &[&str]) -> Result<Polynomial> {
    let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    parse_impl(text, &owned, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::poly::{rat, ratio};

    #[test]
    fn literal_and_terms() {
        assert!(parse_poly("0", 1).unwrap().is_zero());
        let p = parse_poly("x^2*y - 1/2", 2).unwrap();
        assert_eq!(p.coeff(&[2, 1]), rat(1));
        assert_eq!(p.coeff(&[0, 0]), ratio(-1, 2));
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn expansion_matches_repeated_multiplication() {
        let p = parse_poly("(x+1)^2", 1).unwrap();
        let x1 = parse_poly("x+1", 1).unwrap();
        assert_eq!(p, &x1 * &x1);
        assert_eq!(p.to_string(), "x^2 + 2*x + 1");
    }

    #[test]
    fn implicit_multiplication() {
        assert_eq!(
            parse_poly("-2x", 1).unwrap(),
            parse_poly("-2*x", 1).unwrap()
        );
        assert_eq!(
            parse_poly("3(x+1)", 1).unwrap(),
            parse_poly("3*x+3", 1).unwrap()
        );
    }

    #[test]
    fn unknown_variable_and_syntax_errors() {
        match parse_poly("x + w", 1) {
            Err(Error::UnknownVariable { name, .. }) => assert_eq!(name, "w"),
            other => panic!("expected unknown variable, got {other:?}"),
        }
        assert!(matches!(parse_poly("x +", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(x", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("", 1), Err(Error::Parse { .. })));
    }

    #[test]
    fn exponent_cap() {
        assert!(matches!(
            parse_poly("x^100000", 1),
            Err(Error::Parse { .. })
        ));
        assert!(parse_poly("x^10000", 1).is_ok());
    }

    #[test]
    fn negative_exponent_policy() {
        assert!(matches!(
            parse_poly("x^-1", 1),
            Err(Error::NegativeExponent { .. })
        ));
        let q = parse_poly_laurent("x^-2", 1).unwrap();
        assert_eq!(q.coeff(&[-2]), rat(1));
        let r = parse_poly_laurent("x^(-2)", 1).unwrap();
        assert_eq!(q, r);
    }

    #[test]
    fn division_rules() {
        assert_eq!(parse_poly("x^6/720", 1).unwrap().coeff(&[6]), ratio(1, 720));
        assert!(parse_poly("x/y", 2).is_err());
        assert!(parse_poly("1/0", 1).is_err());
    }

    #[test]
    fn aliases() {
        let p = parse_poly("x*y*z", 3).unwrap();
        assert_eq!(p.coeff(&[1, 1, 1]), rat(1));
        let q = parse_poly("x1*x2*x3", 3).unwrap();
        assert_eq!(p, q);
        // alias y invalid for n=1
        assert!(parse_poly("y", 1).is_err());
        let named = parse_poly_with_names("y^2 + y", &["y"]).unwrap();
        assert_eq!(named, parse_poly("x^2 + x", 1).unwrap());
    }
}
