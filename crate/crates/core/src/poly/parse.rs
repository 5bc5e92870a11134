//! Hand-written recursive-descent parser for the curve text format:
//!
//! ```text
//! poly := [sign] term { sign term } ;  sign := "+" | "-" ;
//! term := int | [int "*"] var ["^" int] ["*" var ["^" int]] ;
//! var  := "U" | "V" ;                  int  := digit {digit} ;
//! ```
//!
//! Whitespace is insignificant, `*` between factors may be omitted.

use num_bigint::BigInt;
use num_traits::One;

use super::BivariatePoly;
use crate::error::{Error, Result};

pub fn parse_poly(text: &str) -> Result<BivariatePoly> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    if parser.at_end() {
        return Err(Error::EmptyInput);
    }

    let mut terms = Vec::new();
    let mut negative = parser.eat_sign().unwrap_or(false);
    loop {
        let (i, j, mut c) = parser.term()?;
        if negative {
            c = -c;
        }
        terms.push((i, j, c));

        parser.skip_ws();
        if parser.at_end() {
            break;
        }
        negative = match parser.eat_sign() {
            Some(neg) => neg,
            None => return Err(parser.syntax("expected '+' or '-'")),
        };
    }
    Ok(BivariatePoly::from_terms(terms))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn eat_sign(&mut self) -> Option<bool> {
        self.skip_ws();
        let neg = match self.peek()? {
            b'+' => false,
            b'-' => true,
            _ => return None,
        };
        self.pos += 1;
        Some(neg)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<(u32, u32, BigInt)> {
        self.skip_ws();
        let mut coeff = BigInt::one();
        let mut exps = (0u32, 0u32);
        let mut want_var = true;

        if let Some(d) = self.digits() {
            coeff = d.parse().expect("ascii digits");
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else if !self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
                want_var = false;
            }
        }

        if want_var {
            self.factor(&mut exps)?;
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        self.factor(&mut exps)?;
                    }
                    Some(b) if b.is_ascii_alphabetic() => self.factor(&mut exps)?,
                    _ => break,
                }
            }
        }
        Ok((exps.0, exps.1, coeff))
    }

    fn factor(&mut self, exps: &mut (u32, u32)) -> Result<()> {
        self.skip_ws();
        let var_at = self.pos;
        let slot = match self.peek() {
            Some(b'U') => &mut exps.0,
            Some(b'V') => &mut exps.1,
            Some(b) if b.is_ascii_alphabetic() => {
                return Err(Error::UnknownVariable {
                    offset: var_at,
                    found: b as char,
                })
            }
            _ => return Err(self.syntax("expected a term")),
        };
        self.pos += 1;

        self.skip_ws();
        let mut exponent = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let d = self
                .digits()
                .ok_or_else(|| self.syntax("expected an exponent"))?;
            exponent = d.parse().map_err(|_| Error::Syntax {
                offset: at,
                message: "exponent does not fit in 32 bits".into(),
            })?;
        }
        *slot = slot.checked_add(exponent).ok_or(Error::Syntax {
            offset: var_at,
            message: "exponent does not fit in 32 bits".into(),
        })?;
        Ok(())
    }
}
