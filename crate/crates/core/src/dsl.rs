//! Text form of [`SetSpec`].
//!
//! ```text
//! spec := "mod(" m "," r ")" | "geq(" n ")" | "range(" lo "," hi ")"
//!       | "bits(" v* ";" bound ")" | "not(" spec ")"
//!       | "and(" spec ("," spec)+ ")" | "or(" spec ("," spec)+ ")"
//!       | "dil(" n "," spec ")" | "shift(" t "," spec ")" | "all" | "none"
//! ```
//!
//! Whitespace is ignored between tokens; integers are decimal and unbounded.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::setspec::SetSpec;

pub fn parse_spec(text: &str) -> Result<SetSpec> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input after spec"));
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a spec keyword"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn number(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a decimal integer"));
        }
        Ok(BigUint::parse_bytes(&self.src[start..self.pos], 10).expect("digits"))
    }

    fn spec(&mut self) -> Result<SetSpec> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let kw = self.ident()?.to_owned();
        let validated = |r: Result<SetSpec>| {
            r.map_err(|e| match e {
                Error::Validation(m) => Error::Validation(format!("{m} (at byte {at})")),
                other => other,
            })
        };
        match kw.as_str() {
            "all" => Ok(SetSpec::Full),
            "none" => Ok(SetSpec::Empty),
            "mod" => {
                self.expect(b'(')?;
                let m = self.number()?;
                self.expect(b',')?;
                let r = self.number()?;
                self.expect(b')')?;
                validated(SetSpec::congruence(m, r))
            }
            "geq" => {
                self.expect(b'(')?;
                let lo = self.number()?;
                self.expect(b')')?;
                validated(SetSpec::interval(lo, None))
            }
            "range" => {
                self.expect(b'(')?;
                let lo = self.number()?;
                self.expect(b',')?;
                let hi = self.number()?;
                self.expect(b')')?;
                validated(SetSpec::interval(lo, Some(hi)))
            }
            "bits" => {
                self.expect(b'(')?;
                let mut members = Vec::new();
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    members.push(self.number()?);
                }
                self.expect(b';')?;
                let bound = self.number()?;
                self.expect(b')')?;
                validated(SetSpec::bitmap(members, bound))
            }
            "not" => {
                self.expect(b'(')?;
                let inner = self.spec()?;
                self.expect(b')')?;
                Ok(inner.complement())
            }
            "and" | "or" => {
                self.expect(b'(')?;
                let mut children = vec![self.spec()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    children.push(self.spec()?);
                }
                if children.len() < 2 {
                    return Err(self.err(format!("{kw} needs at least two operands")));
                }
                self.expect(b')')?;
                Ok(if kw == "and" {
                    SetSpec::and(children)
                } else {
                    SetSpec::or(children)
                })
            }
            "dil" | "shift" => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b',')?;
                let inner = self.spec()?;
                self.expect(b')')?;
                validated(if kw == "dil" {
                    SetSpec::dilation(n, inner)
                } else {
                    SetSpec::shift(n, inner)
                })
            }
            other => Err(Error::Syntax {
                pos: at,
                msg: format!("unknown keyword '{other}'"),
            }),
        }
    }
}
