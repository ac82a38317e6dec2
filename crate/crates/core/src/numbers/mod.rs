//! Exact scalars `(u + v·√D) / w` over the rationals and real quadratic fields.
//!
//! Every verdict in this crate (line equality, membership of half-lattice
//! points, interval disjointness on invariant lines) is decided with these
//! values. Floating point only appears in rendering and in the numerical
//! elliptic-function layer.

mod complex;
mod parse;

pub use complex::ComplexNumber;
pub use parse::{parse_complex, parse_quadratic};

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("mixed radicals: sqrt({0}) and sqrt({1}) cannot share one scalar")]
    MixedRadicals(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected a real scalar, found imaginary part")]
    NotReal,
    #[error("radicand out of range: {0}")]
    RadicandTooLarge(String),
    #[error("square root of a negative number")]
    NegativeRadicand,
}

/// The value `(u + v·√d) / w` in canonical form.
///
/// Canonical means `w > 0`, `gcd(u, v, w) = 1`, `d` square-free and `d ≥ 2`
/// whenever `v ≠ 0`, and `v = 0 ⟹ d = 0`. Canonical form makes structural
/// equality coincide with numeric equality, so `Eq` and `Hash` are derived.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    u: BigInt,
    v: BigInt,
    w: BigInt,
    d: u64,
}

impl QuadraticNumber {
    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        QuadraticNumber {
            u: n.into(),
            v: BigInt::zero(),
            w: BigInt::one(),
            d: 0,
        }
    }

    pub fn from_big(n: BigInt) -> Self {
        Self::integer(n)
    }

    /// `num / den`; fails on a zero denominator.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, NumberError> {
        Self::new(num.into(), BigInt::zero(), den.into(), 0)
    }

    /// Builds `(u + v·√d)/w` and canonicalizes, pulling square factors out of `d`.
    pub fn new(u: BigInt, v: BigInt, w: BigInt, d: u64) -> Result<Self, NumberError> {
        if w.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        let (k, core) = split_square(d);
        let (u, v, d) = match core {
            0 => (u, BigInt::zero(), 0),
            // √d = k is an integer and folds into the rational part.
            1 => (u + v * BigInt::from(k), BigInt::zero(), 0),
            c => (u, v * BigInt::from(k), c),
        };
        Ok(Self::canonical(u, v, w, d))
    }

    /// `√n` for a non-negative integer `n`.
    pub fn sqrt_of(n: u64) -> Self {
        let (k, core) = split_square(n);
        match core {
            0 => Self::zero(),
            1 => Self::integer(k),
            c => Self::canonical(BigInt::zero(), BigInt::from(k), BigInt::one(), c),
        }
    }

    fn canonical(mut u: BigInt, mut v: BigInt, mut w: BigInt, mut d: u64) -> Self {
        if v.is_zero() {
            d = 0;
        }
        if w.is_negative() {
            u = -u;
            v = -v;
            w = -w;
        }
        let g = u.gcd(&v).gcd(&w);
        if !g.is_zero() && !g.is_one() {
            u /= &g;
            v /= &g;
            w /= &g;
        }
        QuadraticNumber { u, v, w, d }
    }

    pub fn numerator_rational(&self) -> &BigInt {
        &self.u
    }

    pub fn numerator_surd(&self) -> &BigInt {
        &self.v
    }

    pub fn denominator(&self) -> &BigInt {
        &self.w
    }

    /// Square-free radicand, `0` for rationals.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.w.is_one()
    }

    /// The integer value, if this is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.u.clone())
    }

    /// Rational part `u/w` and surd coefficient `v/w` (so `x = r + c·√d`).
    pub fn split(&self) -> (QuadraticNumber, QuadraticNumber) {
        (
            Self::canonical(self.u.clone(), BigInt::zero(), self.w.clone(), 0),
            Self::canonical(self.v.clone(), BigInt::zero(), self.w.clone(), 0),
        )
    }

    /// Exact sign via integer comparison of `u²` against `v²·d`.
    pub fn signum(&self) -> i8 {
        let su = sign_of(&self.u);
        let sv = sign_of(&self.v);
        if sv == 0 {
            return su;
        }
        if su == 0 || su == sv {
            return sv;
        }
        let u2 = &self.u * &self.u;
        let v2d = &self.v * &self.v * BigInt::from(self.d);
        // d is square-free and ≥ 2, so u² = v²d is impossible here.
        if u2 > v2d {
            su
        } else {
            sv
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact `⌊x⌋`.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.u.div_floor(&self.w);
        }
        // k = ⌊v·√d⌋ from an integer square root; √(v²d) is never an integer.
        let root = Roots::sqrt(&(&self.v * &self.v * BigInt::from(self.d)));
        let k = if self.v.is_positive() {
            root
        } else {
            -root - 1
        };
        // u + v√d ∈ (u + k, u + k + 1), so ⌊x⌋ is ⌊(u+k)/w⌋ or one more.
        let candidate = (&self.u + &k).div_floor(&self.w);
        let next: BigInt = &candidate + 1;
        if (self - &Self::from_big(next.clone())).signum() >= 0 {
            next
        } else {
            candidate
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `x − ⌊x⌋ ∈ [0, 1)`.
    pub fn mod1(&self) -> Self {
        self - &Self::from_big(self.floor())
    }

    fn field_with(&self, other: &Self) -> Result<u64, NumberError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(NumberError::MixedRadicals(a, b)),
        }
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.field_with(other).is_ok()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumberError> {
        let d = self.field_with(other)?;
        Ok(Self::canonical(
            &self.u * &other.w + &other.u * &self.w,
            &self.v * &other.w + &other.v * &self.w,
            &self.w * &other.w,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumberError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumberError> {
        let d = self.field_with(other)?;
        let dd = BigInt::from(d);
        Ok(Self::canonical(
            &self.u * &other.u + &self.v * &other.v * dd,
            &self.u * &other.v + &self.v * &other.u,
            &self.w * &other.w,
            d,
        ))
    }

    pub fn recip(&self) -> Result<Self, NumberError> {
        if self.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        // w / (u + v√d) = w(u − v√d) / (u² − v²d)
        let norm = &self.u * &self.u - &self.v * &self.v * BigInt::from(self.d);
        Ok(Self::canonical(
            &self.w * &self.u,
            -(&self.w * &self.v),
            norm,
            self.d,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumberError> {
        self.field_with(other)?;
        self.checked_mul(&other.recip()?)
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self::canonical(&self.u * n, &self.v * n, self.w.clone(), self.d)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Nearest `f64`, adjusted by the active float-mirror perturbation.
    pub fn to_f64(&self) -> f64 {
        crate::mirror::perturb(self.to_f64_unperturbed())
    }

    pub(crate) fn to_f64_unperturbed(&self) -> f64 {
        let r = ratio_to_f64(&self.u, &self.w);
        if self.v.is_zero() {
            return r;
        }
        r + ratio_to_f64(&self.v, &self.w) * (self.d as f64).sqrt()
    }

    /// Exact comparison, also across different radicands.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match sign_of_sum(self, &-other) {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

fn sign_of(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Writes `n = k²·c` with `c` square-free.
fn split_square(n: u64) -> (u64, u64) {
    if n < 2 {
        return (1, n);
    }
    let mut k = 1u64;
    let mut c = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= p;
        }
        if e % 2 == 1 {
            c *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (k, c * rest)
}

pub(crate) fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    let bits = n.bits().max(d.bits());
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN);
    }
    let shift = bits - 900;
    let n = n >> shift;
    let d = d >> shift;
    if d.is_zero() {
        return if n.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

/// Exact sign of `x + y` where `x` and `y` may lie in different quadratic fields.
pub fn sign_of_sum(x: &QuadraticNumber, y: &QuadraticNumber) -> i8 {
    if let Ok(s) = x.checked_add(y) {
        return s.signum();
    }
    let (sx, sy) = (x.signum(), y.signum());
    if sx == 0 {
        return sy;
    }
    if sy == 0 || sx == sy {
        return sx;
    }
    // Opposite signs: the larger magnitude wins. |x| > |y| ⟺ x² − y² > 0, and
    // x² − y² = (x² − rat(y²)) + (−surd(y²)) is again a two-field sum whose
    // second term is a pure surd, so the recursion bottoms out in one field.
    let x2 = x * x;
    let y2 = y * y;
    let (ry, iy) = y2.split();
    let surd = iy.mul_sqrt(y2.radicand());
    let dominance = sign_of_sum(&(&x2 - &ry), &-surd);
    if dominance > 0 {
        sx
    } else {
        sy
    }
}

impl QuadraticNumber {
    /// `c·√d` for a rational `self = c`.
    fn mul_sqrt(&self, d: u64) -> QuadraticNumber {
        debug_assert!(self.is_rational());
        if d == 0 {
            return Self::zero();
        }
        Self::canonical(BigInt::zero(), self.u.clone(), self.w.clone(), d)
    }
}

/// Exact `⌊x + y⌋` for `x`, `y` possibly in different quadratic fields.
pub fn floor_of_sum(x: &QuadraticNumber, y: &QuadraticNumber) -> BigInt {
    if let Ok(s) = x.checked_add(y) {
        return s.floor();
    }
    let approx = x.to_f64_unperturbed() + y.to_f64_unperturbed();
    let mut n = BigInt::from(approx.floor() as i64);
    // x + y − n < 0 → step down; x + y − (n+1) ≥ 0 → step up.
    loop {
        let shifted = x - &QuadraticNumber::from_big(n.clone());
        if sign_of_sum(&shifted, y) < 0 {
            n -= 1;
            continue;
        }
        let shifted_up = x - &QuadraticNumber::from_big(&n + BigInt::one());
        if sign_of_sum(&shifted_up, y) >= 0 {
            n += 1;
            continue;
        }
        return n;
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl Default for QuadraticNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for QuadraticNumber {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<BigInt> for QuadraticNumber {
    fn from(n: BigInt) -> Self {
        Self::integer(n)
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber {
            u: -&self.u,
            v: -&self.v,
            w: self.w.clone(),
            d: self.d,
        }
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

// Operator forms panic on mixed radicands; call sites use them only where the
// field is already known to agree, and the `checked_*` forms everywhere else.
macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                match self.$checked(rhs) {
                    Ok(x) => x,
                    Err(e) => panic!("{}: {} vs {}", e, self, rhs),
                }
            }
        }
        impl $tr<QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: QuadraticNumber) -> QuadraticNumber {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl fmt::Display for QuadraticNumber {
    /// Prints in the number-expression grammar so that output re-parses.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = match (&self.v, self.d) {
            (v, _) if v.is_zero() => None,
            (v, d) if v.is_one() => Some(format!("sqrt({d})")),
            (v, d) if (-v).is_one() => Some(format!("-sqrt({d})")),
            (v, d) => Some(format!("{v}*sqrt({d})")),
        };
        let numer = match (&surd, self.u.is_zero()) {
            (None, _) => self.u.to_string(),
            (Some(s), true) => s.clone(),
            (Some(s), false) if s.starts_with('-') => format!("{}{}", self.u, s),
            (Some(s), false) => format!("{}+{}", self.u, s),
        };
        if self.w.is_one() {
            return f.write_str(&numer);
        }
        let compound = surd.is_some() && !self.u.is_zero();
        if compound {
            write!(f, "({})/{}", numer, self.w)
        } else {
            write!(f, "{}/{}", numer, self.w)
        }
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{self}]")
    }
}

impl serde::Serialize for QuadraticNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_quadratic(&text).map_err(serde::de::Error::custom)
    }
}
