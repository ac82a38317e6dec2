use std::fmt;

use num_complex::Complex64;
use num_traits::One;

use super::{NumberError, QuadraticNumber};

/// A complex value whose real and imaginary parts are exact quadratic scalars.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ComplexNumber {
    pub re: QuadraticNumber,
    pub im: QuadraticNumber,
}

impl ComplexNumber {
    pub fn new(re: QuadraticNumber, im: QuadraticNumber) -> Self {
        ComplexNumber { re, im }
    }

    pub fn real(re: QuadraticNumber) -> Self {
        ComplexNumber {
            re,
            im: QuadraticNumber::zero(),
        }
    }

    pub fn i() -> Self {
        ComplexNumber::new(QuadraticNumber::zero(), QuadraticNumber::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Common radicand of both parts, or an error if they disagree.
    pub fn radicand(&self) -> Result<u64, NumberError> {
        match (self.re.radicand(), self.im.radicand()) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(NumberError::MixedRadicals(a, b)),
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, NumberError> {
        Ok(ComplexNumber::new(
            self.re.checked_add(&o.re)?,
            self.im.checked_add(&o.im)?,
        ))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, NumberError> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, NumberError> {
        let re = self
            .re
            .checked_mul(&o.re)?
            .checked_sub(&self.im.checked_mul(&o.im)?)?;
        let im = self
            .re
            .checked_mul(&o.im)?
            .checked_add(&self.im.checked_mul(&o.re)?)?;
        Ok(ComplexNumber::new(re, im))
    }

    pub fn norm_sqr(&self) -> Result<QuadraticNumber, NumberError> {
        self.re
            .checked_mul(&self.re)?
            .checked_add(&self.im.checked_mul(&self.im)?)
    }

    pub fn conj(&self) -> Self {
        ComplexNumber::new(self.re.clone(), -&self.im)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, NumberError> {
        let n = o.norm_sqr()?;
        if n.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        let p = self.checked_mul(&o.conj())?;
        Ok(ComplexNumber::new(
            p.re.checked_div(&n)?,
            p.im.checked_div(&n)?,
        ))
    }

    pub fn neg(&self) -> Self {
        ComplexNumber::new(-&self.re, -&self.im)
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl From<QuadraticNumber> for ComplexNumber {
    fn from(re: QuadraticNumber) -> Self {
        ComplexNumber::real(re)
    }
}

impl fmt::Display for ComplexNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = if self.im == QuadraticNumber::one() {
            "i".to_string()
        } else if self.im == -QuadraticNumber::one() {
            "-i".to_string()
        } else {
            // A two-term coefficient over 1 prints without parentheses.
            let (r, s) = self.im.split();
            if !r.is_zero() && !s.is_zero() && self.im.denominator().is_one() {
                format!("({})*i", self.im)
            } else {
                format!("{}*i", self.im)
            }
        };
        if self.re.is_zero() {
            return f.write_str(&im);
        }
        if im.starts_with('-') {
            write!(f, "{}{}", self.re, im)
        } else {
            write!(f, "{}+{}", self.re, im)
        }
    }
}

impl serde::Serialize for ComplexNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
