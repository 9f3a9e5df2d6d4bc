//! Parser for operator words.
//!
//! Grammar (whitespace separates atoms; columns are 1-based):
//!
//! ```text
//! expression := [ scalar "*" ] atom+
//! atom       := "m" [ "^" exponent ] | "p" | "dx"
//! exponent   := rational | "(" rational ")"
//! scalar     := rational
//! rational   := ["-"] digits [ "." digits | "/" digits ]
//! ```
//!
//! `m` alone means `m^1`; decimal exponents are converted exactly
//! (`m^0.25` is `m^(1/4)`).

use num_rational::BigRational;

use crate::rational::{gauss_real, parse_rational};

use super::{Atom, OperatorError, OperatorExpression};

struct Scanner {
    chars: Vec<char>,
    pos: usize,
}

impl Scanner {
    fn new(text: &str) -> Self {
        Scanner {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> OperatorError {
        OperatorError::Parse {
            column,
            message: message.into(),
        }
    }

    /// True when a rational literal can start here.
    fn at_rational(&mut self) -> bool {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => true,
            Some('-') => matches!(
                self.chars.get(self.pos + 1),
                Some(c) if c.is_ascii_digit() || *c == '.'
            ),
            _ => false,
        }
    }

    /// Scan a rational literal: `-1/2`, `3`, `0.25`.
    fn scan_rational(&mut self) -> Result<BigRational, OperatorError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-')) {
            self.pos += 1;
        }
        let digits = |s: &mut Self| {
            while matches!(s.chars.get(s.pos), Some(c) if c.is_ascii_digit()) {
                s.pos += 1;
            }
        };
        digits(self);
        match self.chars.get(self.pos) {
            Some('.') => {
                self.pos += 1;
                digits(self);
            }
            Some('/') => {
                self.pos += 1;
                digits(self);
            }
            _ => {}
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_rational(&text)
            .map_err(|_| self.error(start + 1, format!("malformed rational `{text}`")))
    }

    fn scan_ident(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        (start + 1, self.chars[start..self.pos].iter().collect())
    }
}

pub(super) fn parse(text: &str) -> Result<OperatorExpression, OperatorError> {
    let mut s = Scanner::new(text);
    let mut scalar = gauss_real(BigRational::from_integer(1.into()));

    if s.at_rational() {
        let value = s.scan_rational()?;
        if !s.eat('*') {
            return Err(s.error(
                s.column(),
                "expected `*` after leading scalar".to_string(),
            ));
        }
        scalar = gauss_real(value);
    }

    let mut atoms = Vec::new();
    loop {
        match s.peek() {
            None => break,
            Some(c) if c.is_ascii_alphabetic() => {
                let (column, name) = s.scan_ident();
                match name.as_str() {
                    "p" => atoms.push(Atom::Momentum),
                    "dx" => atoms.push(Atom::Derivative),
                    "m" => {
                        if s.eat('^') {
                            let exponent = if s.eat('(') {
                                let q = s.scan_rational()?;
                                if !s.eat(')') {
                                    return Err(s.error(
                                        s.column(),
                                        "unbalanced parentheses in exponent".to_string(),
                                    ));
                                }
                                q
                            } else if s.at_rational() {
                                s.scan_rational()?
                            } else {
                                return Err(s.error(
                                    s.column(),
                                    "malformed exponent: expected a rational".to_string(),
                                ));
                            };
                            atoms.push(Atom::MassPower(exponent));
                        } else {
                            atoms.push(Atom::MassPower(BigRational::from_integer(1.into())));
                        }
                    }
                    other => {
                        return Err(
                            s.error(column, format!("unknown atom `{other}` (expected m, p, dx)"))
                        )
                    }
                }
            }
            Some(c) => {
                return Err(s.error(s.column(), format!("unexpected character `{c}`")));
            }
        }
    }

    if atoms.is_empty() {
        return Err(s.error(s.column(), "expected at least one atom".to_string()));
    }
    OperatorExpression::new(scalar, atoms)
}
