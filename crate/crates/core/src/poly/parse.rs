//! Recursive-descent parser for the polynomial text format.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := number | 'i' | var ('^' uint)? | '(' expr ')' | '-' factor
//! var    := ('x' | 'y' | 'z') uint        -- 1-based site index
//! number := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! `i` is the imaginary unit, which lets complex coefficients round-trip
//! through the printer.

use num_complex::Complex64;
use thiserror::Error;

use super::{AmbientPolynomial, Axis, Monomial, SitePolynomial};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

pub fn parse_poly(text: &str, sites: usize) -> Result<SitePolynomial, ParseError> {
    if sites == 0 {
        return Err(ParseError { offset: 0, message: "site count must be positive".into() });
    }
    let mut parser = Parser { src: text.as_bytes(), pos: 0, sites };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error(format!("unexpected '{}'", parser.src[parser.pos] as char)));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sites: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { offset: self.pos, message: message.into() }
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

    fn expr(&mut self) -> Result<SitePolynomial, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SitePolynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SitePolynomial, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(SitePolynomial::constant(self.sites, Complex64::new(0.0, 1.0)))
            }
            Some(c @ (b'x' | b'y' | b'z')) => {
                let start = self.pos;
                self.pos += 1;
                let axis = match c {
                    b'x' => Axis::X,
                    b'y' => Axis::Y,
                    _ => Axis::Z,
                };
                let site = self.uint("site index")?;
                if site == 0 {
                    return Err(ParseError { offset: start, message: "site indices are 1-based".into() });
                }
                if site as usize > self.sites {
                    return Err(ParseError {
                        offset: start,
                        message: format!("site index {site} exceeds {}", self.sites),
                    });
                }
                let mut power = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let e = self.uint("exponent")?;
                    if e > MAX_EXPONENT as u64 {
                        return Err(ParseError {
                            offset: at,
                            message: format!("exponent {e} exceeds {MAX_EXPONENT}"),
                        });
                    }
                    power = e as u32;
                }
                let mut m = Monomial::one(self.sites);
                m.0[site as usize - 1][axis.index()] = power;
                Ok(AmbientPolynomial::from_terms(self.sites, [(m, Complex64::new(1.0, 0.0))])
                    .expect("sites match")
                    .reduce())
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let value = self.number()?;
                Ok(SitePolynomial::constant(self.sites, Complex64::new(value, 0.0)))
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
        }
    }

    /// Unsigned integer immediately at the cursor (no leading whitespace).
    fn uint(&mut self, what: &str) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(format!("expected {what}")));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits
            .parse()
            .map_err(|_| ParseError { offset: start, message: format!("{what} out of range") })
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(ParseError { offset: start, message: "malformed number".into() });
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(self.error("malformed exponent"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
        let value: f64 = text
            .parse()
            .map_err(|_| ParseError { offset: start, message: format!("malformed number '{text}'") })?;
        if !value.is_finite() {
            return Err(ParseError { offset: start, message: format!("number '{text}' overflows") });
        }
        Ok(value)
    }
}
