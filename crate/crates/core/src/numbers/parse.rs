//! Recursive-descent reader for number expressions.
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := postfix (('*' | '/') postfix)*
//! postfix := primary 'i'?
//! primary := number | 'i' | 'sqrt(' expr ')' | '(' expr ')' | sign primary
//! number  := digits ('.' digits)?
//! ```
//!
//! Whitespace is insignificant. Decimal literals are read exactly (`0.1` is
//! `1/10`).

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{ComplexNumber, NumberError, QuadraticNumber};

/// Parses a real scalar; an imaginary part is an error.
pub fn parse_quadratic(text: &str) -> Result<QuadraticNumber, NumberError> {
    let z = parse_complex(text)?;
    if !z.im.is_zero() {
        return Err(NumberError::NotReal);
    }
    Ok(z.re)
}

/// Parses a complex scalar such as `1/2+sqrt(3)/2*i` or `2i`.
pub fn parse_complex(text: &str) -> Result<ComplexNumber, NumberError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> NumberError {
        NumberError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ComplexNumber, NumberError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            if self.eat(b'+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ComplexNumber, NumberError> {
        let mut acc = self.postfix()?;
        loop {
            if self.eat(b'*') {
                acc = acc.checked_mul(&self.postfix()?)?;
            } else if self.eat(b'/') {
                acc = acc.checked_div(&self.postfix()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn postfix(&mut self) -> Result<ComplexNumber, NumberError> {
        let start = self.peek();
        let value = self.primary()?;
        // "2i", "(sqrt(3)/2)i": a trailing i multiplies, but "ii" is not accepted.
        if start != Some(b'i') && self.at_imaginary_unit() {
            self.pos += 1;
            return value.checked_mul(&ComplexNumber::i());
        }
        Ok(value)
    }

    fn at_imaginary_unit(&mut self) -> bool {
        self.peek() == Some(b'i') && !self.src[self.pos..].starts_with(b"if")
    }

    fn primary(&mut self) -> Result<ComplexNumber, NumberError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.primary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.primary()
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(ComplexNumber::i())
            }
            Some(b's') => {
                if !self.src[self.pos..].starts_with(b"sqrt") {
                    return Err(self.error("unknown identifier"));
                }
                self.pos += 4;
                if !self.eat(b'(') {
                    return Err(self.error("expected '(' after sqrt"));
                }
                let arg = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(ComplexNumber::real(self.sqrt(arg)?))
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn sqrt(&self, arg: ComplexNumber) -> Result<QuadraticNumber, NumberError> {
        if !arg.im.is_zero() || !arg.re.is_rational() {
            return Err(self.error("sqrt argument must be a rational number"));
        }
        if arg.re.is_negative() {
            return Err(NumberError::NegativeRadicand);
        }
        // √(p/q) = √(p·q)/q
        let p = arg.re.numerator_rational();
        let q = arg.re.denominator();
        let pq = (p * q)
            .to_u64()
            .ok_or_else(|| NumberError::RadicandTooLarge((p * q).to_string()))?;
        Ok(&QuadraticNumber::sqrt_of(pq) / &QuadraticNumber::from_big(q.clone()))
    }

    fn number(&mut self) -> Result<ComplexNumber, NumberError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part = &self.src[start..self.pos];
        let mut frac: &[u8] = &[];
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let fs = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            frac = &self.src[fs..self.pos];
            if frac.is_empty() {
                return Err(self.error("expected digits after '.'"));
            }
        }
        let digits: Vec<u8> = int_part.iter().chain(frac).copied().collect();
        let mantissa = BigInt::parse_bytes(&digits, 10).unwrap_or_else(BigInt::zero);
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        Ok(ComplexNumber::real(QuadraticNumber::ratio(
            mantissa, scale,
        )?))
    }
}
