//! The lattice `Λ = ℤ + ℤω`, lattice coordinates, and the half-lattice grid.
//!
//! Points are stored in lattice coordinates: `(x, y)` stands for `x + y·ω`.
//! Reduction modulo `Λ` is then coordinate-wise reduction modulo 1, which is
//! exact regardless of the numeric value of `ω`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::numbers::{ComplexNumber, NumberError, QuadraticNumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Im ω must be positive")]
    LowerHalfPlane,
    #[error(transparent)]
    Number(#[from] NumberError),
}

/// A pair of lattice coordinates, not necessarily reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Coord {
    pub x: QuadraticNumber,
    pub y: QuadraticNumber,
}

impl Coord {
    pub fn new(x: QuadraticNumber, y: QuadraticNumber) -> Self {
        Coord { x, y }
    }

    pub fn origin() -> Self {
        Coord::new(QuadraticNumber::zero(), QuadraticNumber::zero())
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Coord::new(
            QuadraticNumber::ratio(xn, xd).expect("nonzero denominator"),
            QuadraticNumber::ratio(yn, yd).expect("nonzero denominator"),
        )
    }

    pub fn is_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational()
    }

    pub fn checked_add(&self, o: &Coord) -> Result<Coord, NumberError> {
        Ok(Coord::new(
            self.x.checked_add(&o.x)?,
            self.y.checked_add(&o.y)?,
        ))
    }

    pub fn checked_sub(&self, o: &Coord) -> Result<Coord, NumberError> {
        Ok(Coord::new(
            self.x.checked_sub(&o.x)?,
            self.y.checked_sub(&o.y)?,
        ))
    }

    pub fn checked_scale(&self, k: &QuadraticNumber) -> Result<Coord, NumberError> {
        Ok(Coord::new(self.x.checked_mul(k)?, self.y.checked_mul(k)?))
    }

    pub fn shift(&self, n: &BigInt, m: &BigInt) -> Coord {
        Coord::new(
            &self.x + &QuadraticNumber::from_big(n.clone()),
            &self.y + &QuadraticNumber::from_big(m.clone()),
        )
    }

    /// Float mirror of the coordinates.
    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point of the torus `ℂ/Λ`: lattice coordinates reduced into `[0, 1)²`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct TorusPoint(Coord);

impl TorusPoint {
    pub fn coord(&self) -> &Coord {
        &self.0
    }

    pub fn x(&self) -> &QuadraticNumber {
        &self.0.x
    }

    pub fn y(&self) -> &QuadraticNumber {
        &self.0.y
    }

    pub fn zero() -> Self {
        TorusPoint(Coord::origin())
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Reduces coordinates modulo 1, giving the representative in the closed
/// parallelogram with vertices `0, 1, ω, 1+ω`.
pub fn reduce_to_fundamental(p: &Coord) -> TorusPoint {
    TorusPoint(Coord::new(p.x.mod1(), p.y.mod1()))
}

/// The lattice `{n + mω : n, m ∈ ℤ}` with `Im ω > 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    omega: ComplexNumber,
}

impl Lattice {
    pub fn new(omega: ComplexNumber) -> Result<Self, LatticeError> {
        omega.radicand()?;
        if !omega.im.is_positive() {
            return Err(LatticeError::LowerHalfPlane);
        }
        Ok(Lattice { omega })
    }

    /// The square lattice `ℤ[i]`.
    pub fn square() -> Self {
        Lattice::new(ComplexNumber::i()).expect("i is in the upper half plane")
    }

    /// The hexagonal lattice with `ω = 1/2 + (√3/2)·i`.
    pub fn hexagonal() -> Self {
        let half = QuadraticNumber::ratio(1, 2).expect("literal");
        let im = &QuadraticNumber::sqrt_of(3) * &half;
        Lattice::new(ComplexNumber::new(half, im)).expect("upper half plane")
    }

    pub fn omega(&self) -> &ComplexNumber {
        &self.omega
    }

    pub fn omega_f64(&self) -> Complex64 {
        self.omega.to_complex64()
    }

    /// Exact lattice coordinates `(x, y)` of `z = x + y·ω`.
    pub fn coords_of(&self, z: &ComplexNumber) -> Result<Coord, NumberError> {
        let y = z.im.checked_div(&self.omega.im)?;
        let x = z.re.checked_sub(&y.checked_mul(&self.omega.re)?)?;
        Ok(Coord::new(x, y))
    }

    /// Exact complex value of lattice coordinates.
    pub fn complex_of(&self, p: &Coord) -> Result<ComplexNumber, NumberError> {
        let re = p.x.checked_add(&p.y.checked_mul(&self.omega.re)?)?;
        let im = p.y.checked_mul(&self.omega.im)?;
        Ok(ComplexNumber::new(re, im))
    }

    /// Float embedding `x + y·ω` of a torus point.
    pub fn embed(&self, p: &TorusPoint) -> Complex64 {
        self.embed_coord(p.coord())
    }

    pub fn embed_coord(&self, p: &Coord) -> Complex64 {
        self.embed_f64(p.to_f64())
    }

    pub fn embed_f64(&self, (x, y): (f64, f64)) -> Complex64 {
        Complex64::new(x, 0.0) + self.omega_f64() * y
    }

    /// Lattice coordinates of a float complex number.
    pub fn coords_f64(&self, z: Complex64) -> (f64, f64) {
        let w = self.omega_f64();
        let y = z.im / w.im;
        (z.re - y * w.re, y)
    }

    /// `|ω|` as a float.
    pub fn omega_norm(&self) -> f64 {
        self.omega_f64().norm()
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ(ω = {})", self.omega)
    }
}

/// The four points `z0 + {0, 1/2, ω/2, (1+ω)/2}` modulo `Λ`: the fixed points
/// of the involution `z ↦ 2·z0 − z`.
pub fn half_lattice_q(z0: &Coord) -> [TorusPoint; 4] {
    let half = QuadraticNumber::ratio(1, 2).expect("literal");
    let zero = QuadraticNumber::zero();
    let offsets = [
        (zero.clone(), zero.clone()),
        (half.clone(), zero.clone()),
        (zero, half.clone()),
        (half.clone(), half),
    ];
    offsets.map(|(dx, dy)| reduce_to_fundamental(&Coord::new(&z0.x + &dx, &z0.y + &dy)))
}
