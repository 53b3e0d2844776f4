//! Parser for the operator expression language used by the CLI:
//!
//! ```text
//! op := "W[" ints "]"              generalized Wronskian (one variable)
//!     | "d[" int "]"               derivative power (one variable)
//!     | "id" [ "(" n ")" ]         arity-1 identity (default one variable)
//!     | "box(" n "," k ")"         jet Wronskian bracket
//!     | "nambu(" n ")" | "nambuN"  Jacobian bracket
//!     | "wedge(" op "," op ")"
//!     | "act(" op "," op ")"
//!     | "rn(" op "," op ")"
//!     | "inner(" op ";" poly { "," poly } ")"
//! ```

use crate::error::{Error, Result};
use crate::jet::{nambu_op, JetBracketSpec};
use crate::poly::parse_poly;
use crate::skewop::SkewOp;

/// Parse an operator expression.
pub fn parse_operator(text: &str) -> Result<SkewOp> {
    let mut p = OpParser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let op = p.op()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(Error::Parse {
            pos: p.pos,
            msg: "trailing input after operator expression".into(),
        });
    }
    Ok(op)
}

struct OpParser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> OpParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse {
                pos: self.pos,
                msg: format!("expected `{}`", c as char),
            })
        }
    }

    fn peek_is(&mut self, c: u8) -> bool {
        self.skip_ws();
        self.pos < self.bytes.len() && self.bytes[self.pos] == c
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse {
                pos: start,
                msg: "expected an operator name".into(),
            });
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse {
                pos: start,
                msg: "expected an integer".into(),
            });
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "integer out of range".into(),
            })
    }

    fn int_list(&mut self) -> Result<Vec<u32>> {
        let mut out = vec![self.integer()?];
        while self.peek_is(b',') {
            self.pos += 1;
            out.push(self.integer()?);
        }
        Ok(out)
    }

    /// Grab raw text up to the next top-level `,`, `;` or `)`.
    fn raw_until_delim(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'(' => depth += 1,
                b')' => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                b',' | b';' if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse {
                pos: start,
                msg: "expected an expression".into(),
            });
        }
        Ok(&self.text[start..self.pos])
    }

    fn op(&mut self) -> Result<SkewOp> {
        let at = self.pos;
        let name = self.ident()?;
        match name.as_str() {
            "W" => {
                self.expect(b'[')?;
                let indices = self.int_list()?;
                self.expect(b']')?;
                SkewOp::generalized_wronskian(&indices)
            }
            "d" => {
                self.expect(b'[')?;
                let i = self.integer()?;
                self.expect(b']')?;
                Ok(SkewOp::partial_power(i))
            }
            "id" => {
                let vars = if self.peek_is(b'(') {
                    self.pos += 1;
                    let n = self.integer()?;
                    self.expect(b')')?;
                    n as usize
                } else {
                    1
                };
                Ok(SkewOp::identity(vars))
            }
            "box" => {
                self.expect(b'(')?;
                let n = self.integer()? as usize;
                self.expect(b',')?;
                let k = self.integer()?;
                self.expect(b')')?;
                Ok(JetBracketSpec::new(n, k)?.as_skew_op())
            }
            "wedge" | "act" | "rn" => {
                self.expect(b'(')?;
                let a = self.op()?;
                self.expect(b',')?;
                let b = self.op()?;
                self.expect(b')')?;
                match name.as_str() {
                    "wedge" => a.wedge(&b),
                    "act" => a.action(&b),
                    _ => a.rn_bracket(&b),
                }
            }
            "inner" => {
                self.expect(b'(')?;
                let a = self.op()?;
                self.expect(b';')?;
                let mut polys = Vec::new();
                loop {
                    let raw = self.raw_until_delim()?;
                    polys.push(parse_poly(raw.trim(), a.vars())?);
                    if self.peek_is(b',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect(b')')?;
                a.inner_product(&polys)
            }
            _ => {
                // nambu(n) or the compact form nambuN
                if let Some(rest) = name.strip_prefix("nambu") {
                    if rest.is_empty() {
                        self.expect(b'(')?;
                        let n = self.integer()? as usize;
                        self.expect(b')')?;
                        return Ok(nambu_op(n));
                    }
                    if let Ok(n) = rest.parse::<usize>() {
                        return Ok(nambu_op(n));
                    }
                }
                Err(Error::Parse {
                    pos: at,
                    msg: format!("unknown operator `{name}`"),
                })
            }
        }
    }
}
