//! Recursive-descent reader for the polynomial text grammar
//!
//! ```text
//! poly   := term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := VAR INDEX ('^' EXP)?
//! coeff  := INT | INT '/' INT
//! ```
//!
//! A leading sign is accepted. `VAR` is one of the letters handed to
//! [`parse_terms`]; polynomials use `x`, symbols add `k` for momenta.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

#[derive(Debug, Clone)]
pub(crate) struct Factor {
    pub letter: char,
    /// 1-based, as written.
    pub index: usize,
    pub exp: u32,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct RawTerm {
    pub coeff: Rational,
    pub factors: Vec<Factor>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected digits");
        }
        // ASCII digits are valid UTF-8.
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }

    fn small_int(&mut self, what: &str) -> Result<u64> {
        let start = self.pos;
        let text = self.digits()?;
        text.parse::<u64>().map_err(|_| Error::Parse {
            column: start + 1,
            message: format!("{what} too large"),
        })
    }
}

pub(crate) fn parse_terms(text: &str, letters: &[char]) -> Result<Vec<RawTerm>> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    if !text.is_ascii() {
        let bad = text.char_indices().find(|(_, c)| !c.is_ascii()).unwrap().0;
        cur.pos = bad;
        return cur.error("non-ASCII character");
    }
    let mut terms = Vec::new();
    let mut negate = match cur.peek() {
        Some(b'-') => {
            cur.pos += 1;
            true
        }
        Some(b'+') => {
            cur.pos += 1;
            false
        }
        None => return cur.error("empty polynomial"),
        _ => false,
    };
    loop {
        let mut term = parse_term(&mut cur, letters)?;
        if negate {
            term.coeff = -term.coeff;
        }
        terms.push(term);
        match cur.peek() {
            None => break,
            Some(b'+') => negate = false,
            Some(b'-') => negate = true,
            Some(c) => return cur.error(format!("unexpected character '{}'", c as char)),
        }
        cur.pos += 1;
    }
    Ok(terms)
}

fn parse_term(cur: &mut Cursor<'_>, letters: &[char]) -> Result<RawTerm> {
    let mut coeff = Rational::one();
    let mut factors = Vec::new();
    match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let num: BigInt = cur.digits()?.parse().unwrap();
            let mut value = Rational::from_integer(num);
            if cur.peek() == Some(b'/') {
                cur.pos += 1;
                let at = cur.pos;
                let den: BigInt = cur.digits()?.parse().unwrap();
                if den.is_zero() {
                    cur.pos = at;
                    return cur.error("zero denominator");
                }
                value /= Rational::from_integer(den);
            }
            coeff = value;
        }
        _ => factors.push(parse_factor(cur, letters)?),
    }
    while cur.peek() == Some(b'*') {
        cur.pos += 1;
        factors.push(parse_factor(cur, letters)?);
    }
    Ok(RawTerm { coeff, factors })
}

fn parse_factor(cur: &mut Cursor<'_>, letters: &[char]) -> Result<Factor> {
    let letter = match cur.peek() {
        Some(c) if letters.contains(&(c as char)) => c as char,
        Some(c) => return cur.error(format!("expected a variable, found '{}'", c as char)),
        None => return cur.error("expected a variable, found end of input"),
    };
    let column = cur.pos + 1;
    cur.pos += 1;
    let at = cur.pos;
    let index = cur.small_int("variable index")?;
    if index == 0 {
        cur.pos = at;
        return cur.error("variable index must be ≥ 1");
    }
    let mut exp = 1u64;
    if cur.peek() == Some(b'^') {
        cur.pos += 1;
        exp = cur.small_int("exponent")?;
        if exp > u64::from(u32::MAX) {
            return cur.error("exponent too large");
        }
    }
    let index = usize::try_from(index).map_err(|_| Error::Parse {
        column: at + 1,
        message: "variable index too large".into(),
    })?;
    Ok(Factor {
        letter,
        index,
        exp: exp as u32,
        column,
    })
}

/// Converts the written 1-based index to a slot, rejecting indices above `n`.
pub(crate) fn slot(f: &Factor, n: usize) -> Result<usize> {
    if f.index > n {
        Err(Error::Parse {
            column: f.column,
            message: format!("variable {}{} out of range for n = {n}", f.letter, f.index),
        })
    } else {
        Ok(f.index - 1)
    }
}
