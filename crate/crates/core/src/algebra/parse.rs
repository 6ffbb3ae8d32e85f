//! Reader for the printed polynomial syntax, e.g. `-6*a2 + 12*a1^2`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraError, Monomial, MultiPoly, Rational, Symbol};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return self.err("expected digits");
        }
        Ok(digits.parse().expect("digit string"))
    }

    fn small(&mut self) -> Result<u32, AlgebraError> {
        let n = self.integer()?;
        match u32::try_from(n) {
            Ok(v) => Ok(v),
            Err(_) => self.err("exponent out of range"),
        }
    }

    /// factor := integer ['/' integer] | ident ['^' integer]
    fn factor(&mut self, coeff: &mut Rational, mono: &mut Monomial) -> Result<(), AlgebraError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.eat('/') {
                    self.integer()?
                } else {
                    BigInt::one()
                };
                if den.is_zero() {
                    return self.err("zero denominator");
                }
                *coeff *= Rational::new(num, den);
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let sym = Symbol::parse(name)?;
                let exp = if self.eat('^') { self.small()? } else { 1 };
                *mono = mono.mul(&Monomial::pow_of(sym, exp));
            }
            _ => return self.err("expected a number or a symbol"),
        }
        Ok(())
    }

    fn term(&mut self) -> Result<(Monomial, Rational), AlgebraError> {
        let mut coeff = Rational::one();
        let mut mono = Monomial::one();
        self.factor(&mut coeff, &mut mono)?;
        while self.eat('*') {
            self.factor(&mut coeff, &mut mono)?;
        }
        Ok((mono, coeff))
    }
}

impl FromStr for MultiPoly {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { src: s, pos: 0 };
        let mut out = MultiPoly::zero();
        let mut negative = cur.eat('-');
        loop {
            let (m, c) = cur.term()?;
            out.add_term(m, if negative { -c } else { c });
            if cur.eat('+') {
                negative = false;
            } else if cur.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        cur.skip_ws();
        if cur.pos != s.len() {
            return cur.err("trailing input");
        }
        Ok(out)
    }
}
