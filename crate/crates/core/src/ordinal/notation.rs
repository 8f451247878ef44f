//! Text notation for ordinals: `w^2*3+w+4`.
//!
//! ```text
//! expr := term ("+" term)*
//! term := "0" | nat | "w" ["^" nat] ["*" nat]
//! ```
//!
//! Only the canonical spelling of each ordinal is accepted, so the printed
//! form of a value is unique.

use thiserror::Error;

use super::{Ordinal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("non-canonical ordinal notation: {0}")]
    NonCanonical(String),
    #[error("empty interval set has no supremum or maximum")]
    EmptySet,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax(&self, message: impl Into<String>) -> OrdinalError {
        OrdinalError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(OrdinalError::NonCanonical(format!("leading zero in {digits:?}")));
        }
        digits.parse::<u64>().map_err(|_| OrdinalError::Syntax {
            position: start,
            message: format!("number {digits} out of range"),
        })
    }

    fn term(&mut self) -> Result<Term, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.eat(b'^') {
                    let e = self.nat()?;
                    if e < 2 {
                        return Err(OrdinalError::NonCanonical(format!(
                            "w^{e} must be written without the exponent"
                        )));
                    }
                    u32::try_from(e).map_err(|_| self.syntax("exponent out of range"))?
                } else {
                    1
                };
                let coefficient = if self.eat(b'*') {
                    let c = self.nat()?;
                    if c < 2 {
                        return Err(OrdinalError::NonCanonical(format!(
                            "coefficient {c} must be omitted or at least 2"
                        )));
                    }
                    c
                } else {
                    1
                };
                Ok(Term {
                    exponent,
                    coefficient,
                })
            }
            Some(b'0'..=b'9') => {
                let n = self.nat()?;
                if n == 0 {
                    return Err(OrdinalError::NonCanonical(
                        "zero summand inside a sum".to_string(),
                    ));
                }
                Ok(Term {
                    exponent: 0,
                    coefficient: n,
                })
            }
            Some(c) => Err(self.syntax(format!("unexpected character {:?}", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

pub fn parse_ordinal(text: &str) -> Result<Ordinal, OrdinalError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Ordinal::zero());
    }
    let mut cursor = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut terms: Vec<Term> = Vec::new();
    loop {
        let term = cursor.term()?;
        if let Some(prev) = terms.last() {
            if prev.exponent <= term.exponent {
                return Err(OrdinalError::NonCanonical(format!(
                    "{text:?}: summands must strictly decrease in exponent"
                )));
            }
        }
        terms.push(term);
        if cursor.peek().is_none() {
            break;
        }
        if !cursor.eat(b'+') {
            return Err(cursor.syntax("expected '+'"));
        }
    }
    Ok(Ordinal { terms })
}

pub(super) fn format_ordinal(a: &Ordinal) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = a
        .terms
        .iter()
        .map(|t| {
            let base = match t.exponent {
                0 => return t.coefficient.to_string(),
                1 => "w".to_string(),
                e => format!("w^{e}"),
            };
            if t.coefficient == 1 {
                base
            } else {
                format!("{base}*{}", t.coefficient)
            }
        })
        .collect();
    parts.join("+")
}
