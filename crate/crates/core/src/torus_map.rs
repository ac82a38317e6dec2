//! Affine coverings `A(z) = a·z + b (mod Λ)` of the torus.
//!
//! The linear part is carried as the integer matrix `M = [[p, r], [q, s]]`
//! defined by `a = p + q·ω` and `a·ω = r + s·ω`. In lattice coordinates the
//! map is `(x, y) ↦ M·(x, y) + (b_x, b_y) mod ℤ²`, so iterating it never
//! touches the numeric value of `ω`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{reduce_to_fundamental, Coord, Lattice, TorusPoint};
use crate::numbers::{ComplexNumber, NumberError, QuadraticNumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusMapError {
    #[error("a·Λ is not contained in Λ: {0}")]
    NotACovering(String),
    #[error("degree {0} is below 2")]
    DegreeTooLow(BigInt),
    #[error("incompatible scalar fields: {0}")]
    IncompatibleField(#[from] NumberError),
}

/// Integer 2×2 matrix acting on lattice coordinates: `(x, y) ↦ (p·x + r·y, q·x + s·y)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl IntMatrix {
    pub fn identity() -> Self {
        IntMatrix::from_i64(1, 0, 0, 1)
    }

    pub fn from_i64(p: i64, q: i64, r: i64, s: i64) -> Self {
        IntMatrix {
            p: p.into(),
            q: q.into(),
            r: r.into(),
            s: s.into(),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.p * &self.s - &self.q * &self.r
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        IntMatrix {
            p: &self.p * &o.p + &self.r * &o.q,
            q: &self.q * &o.p + &self.s * &o.q,
            r: &self.p * &o.r + &self.r * &o.s,
            s: &self.q * &o.r + &self.s * &o.s,
        }
    }

    pub fn pow(&self, n: u32) -> IntMatrix {
        (0..n).fold(IntMatrix::identity(), |acc, _| acc.mul(self))
    }

    pub fn apply(&self, c: &Coord) -> Result<Coord, NumberError> {
        let (p, q, r, s) = (
            QuadraticNumber::from_big(self.p.clone()),
            QuadraticNumber::from_big(self.q.clone()),
            QuadraticNumber::from_big(self.r.clone()),
            QuadraticNumber::from_big(self.s.clone()),
        );
        Ok(Coord::new(
            p.checked_mul(&c.x)?.checked_add(&r.checked_mul(&c.y)?)?,
            q.checked_mul(&c.x)?.checked_add(&s.checked_mul(&c.y)?)?,
        ))
    }

    pub fn apply_int(&self, (m, k): (&BigInt, &BigInt)) -> (BigInt, BigInt) {
        (&self.p * m + &self.r * k, &self.q * m + &self.s * k)
    }

    pub fn apply_f64(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let f = |n: &BigInt| n.to_f64().unwrap_or(f64::NAN);
        (
            f(&self.p) * x + f(&self.r) * y,
            f(&self.q) * x + f(&self.s) * y,
        )
    }

    pub fn is_scalar(&self) -> bool {
        self.q.is_zero() && self.r.is_zero() && self.p == self.s
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.r, self.q, self.s)
    }
}

/// Solves `c = p + q·ω`, `c·ω = r + s·ω` for integers, i.e. the matrix of
/// multiplication by `c` in the basis `(1, ω)`. `None` when `c·Λ ⊄ Λ`.
pub fn multiplication_matrix(c: &ComplexNumber, lat: &Lattice) -> Option<IntMatrix> {
    let pq = lat.coords_of(c).ok()?;
    let (p, q) = (pq.x.to_integer()?, pq.y.to_integer()?);
    let omega = lat.omega();
    let omega_sq = omega.checked_mul(omega).ok()?;
    // c·ω = p·ω + q·ω², which stays in ω's field even when c alone would not.
    let c_omega = ComplexNumber::real(QuadraticNumber::from_big(p.clone()))
        .checked_mul(omega)
        .ok()?
        .checked_add(
            &ComplexNumber::real(QuadraticNumber::from_big(q.clone()))
                .checked_mul(&omega_sq)
                .ok()?,
        )
        .ok()?;
    let rs = lat.coords_of(&c_omega).ok()?;
    let (r, s) = (rs.x.to_integer()?, rs.y.to_integer()?);
    Some(IntMatrix { p, q, r, s })
}

/// Whether `q·ω² + (p − s)·ω − r = 0` holds exactly.
pub fn satisfies_omega_quadratic(m: &IntMatrix, lat: &Lattice) -> bool {
    let omega = lat.omega();
    let int = |n: &BigInt| ComplexNumber::real(QuadraticNumber::from_big(n.clone()));
    let lhs = (|| -> Result<ComplexNumber, NumberError> {
        int(&m.q)
            .checked_mul(&omega.checked_mul(omega)?)?
            .checked_add(&int(&(&m.p - &m.s)).checked_mul(omega)?)?
            .checked_sub(&int(&m.r))
    })();
    matches!(lhs, Ok(z) if z.is_zero())
}

/// How the derivative `a` sits: an integer, or a genuinely complex multiplier.
#[derive(Clone, PartialEq, Debug)]
pub enum MultiplierClass {
    IntegerDerivative(BigInt),
    NonRealMultiplier { a: ComplexNumber, theta: f64 },
}

impl MultiplierClass {
    pub fn is_integer(&self) -> bool {
        matches!(self, MultiplierClass::IntegerDerivative(_))
    }
}

/// The covering `A(z) = a·z + b (mod Λ)` with `deg A ≥ 2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineTorusMap {
    lattice: Lattice,
    a: ComplexNumber,
    b: TorusPoint,
    matrix: IntMatrix,
    degree: BigInt,
}

impl AffineTorusMap {
    pub fn new(
        a: ComplexNumber,
        b: ComplexNumber,
        lattice: Lattice,
    ) -> Result<Self, TorusMapError> {
        let matrix = multiplication_matrix(&a, &lattice)
            .ok_or_else(|| TorusMapError::NotACovering(format!("a = {a}, {lattice}")))?;
        if !satisfies_omega_quadratic(&matrix, &lattice) {
            return Err(TorusMapError::NotACovering(format!(
                "matrix {matrix} fails q·ω² + (p−s)·ω − r = 0"
            )));
        }
        let degree = matrix.det();
        // deg A = |a|², computed in ω's field from a = p + q·ω.
        let a_exact = lattice.complex_of(&Coord::new(
            QuadraticNumber::from_big(matrix.p.clone()),
            QuadraticNumber::from_big(matrix.q.clone()),
        ))?;
        debug_assert_eq!(
            a_exact.norm_sqr().ok(),
            Some(QuadraticNumber::from_big(degree.clone()))
        );
        if degree < BigInt::from(2) {
            return Err(TorusMapError::DegreeTooLow(degree));
        }
        let b = reduce_to_fundamental(&lattice.coords_of(&b)?);
        Ok(AffineTorusMap {
            lattice,
            a: a_exact,
            b,
            matrix,
            degree,
        })
    }

    /// Shorthand for an integer multiplier with rational translation given in
    /// lattice coordinates.
    pub fn integer(a: i64, b: Coord, lattice: Lattice) -> Result<Self, TorusMapError> {
        let b = lattice.complex_of(&b)?;
        Self::new(ComplexNumber::real(QuadraticNumber::integer(a)), b, lattice)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn a(&self) -> &ComplexNumber {
        &self.a
    }

    pub fn b(&self) -> &TorusPoint {
        &self.b
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    pub fn classify(&self) -> MultiplierClass {
        classify_multiplier(self)
    }

    /// The integer multiplier, when `a ∈ ℤ`.
    pub fn integer_multiplier(&self) -> Option<BigInt> {
        self.matrix.is_scalar().then(|| self.matrix.p.clone())
    }

    /// `|a|` as a float.
    pub fn expansion(&self) -> f64 {
        self.degree.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    /// `M·P + b` without reduction: the image of `P` under the plane lift `α(z) = a·z + b`.
    pub fn apply_lift(&self, p: &Coord) -> Result<Coord, TorusMapError> {
        Ok(self.matrix.apply(p)?.checked_add(self.b.coord())?)
    }

    pub fn apply_lift_f64(&self, p: (f64, f64)) -> (f64, f64) {
        let (x, y) = self.matrix.apply_f64(p);
        let (bx, by) = self.b.coord().to_f64();
        (x + bx, y + by)
    }

    pub fn apply(&self, p: &Coord) -> Result<TorusPoint, TorusMapError> {
        Ok(reduce_to_fundamental(&self.apply_lift(p)?))
    }

    pub fn iterate(&self, p: &Coord, n: usize) -> Result<TorusPoint, TorusMapError> {
        let mut cur = reduce_to_fundamental(p);
        for _ in 0..n {
            cur = self.apply(cur.coord())?;
        }
        Ok(cur)
    }

    /// `b` has rational lattice coordinates.
    pub fn has_rational_translation(&self) -> bool {
        self.b.coord().is_rational()
    }
}

pub fn classify_multiplier(map: &AffineTorusMap) -> MultiplierClass {
    if let Some(a) = map.integer_multiplier() {
        return MultiplierClass::IntegerDerivative(a);
    }
    // Im a ≠ 0 exactly, so sin θ ≠ 0.
    debug_assert!(!map.a.im.is_zero());
    let z = map.a.to_complex64();
    MultiplierClass::NonRealMultiplier {
        a: map.a.clone(),
        theta: z.arg(),
    }
}
