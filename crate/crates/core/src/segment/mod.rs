//! Segments on flat lines, their intersection modulo `Λ`, wandering
//! certificates for integer multipliers and collision certificates.

mod collision;
pub mod geometry;
mod wandering;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{Coord, Lattice};
use crate::line_orbit::{line_from_point, LineError, SlopeSpec, TorusLine, Transverse};
use crate::numbers::{floor_of_sum, NumberError, QuadraticNumber};
use crate::torus_map::{AffineTorusMap, TorusMapError};

pub use collision::{
    collision_bound, find_collision, guaranteed_collision_index, normalized_iterates, BoundKind,
    CollisionCertificate, GroupAction, DEFAULT_BUDGET,
};
pub use geometry::{Chord, ChordError, Witness};
pub use wandering::segment_iterates;
pub use wandering::{
    admissible_interval, certify_wandering, CertificateMode, Recurrence, ReturnMap,
    WanderingCertificate, WanderingVerdict, DEFAULT_CHECK_ITERATES,
};
pub(crate) use wandering::{cross_check, slack};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("segment has t_lo >= t_hi")]
    DegenerateSegment,
    #[error("segment parameters must be rational, got {0}")]
    ParameterNotRational(String),
    #[error("float intersection test is within 1e-9 of degeneracy")]
    UncertainAtTolerance,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no collision among iterates 0..={budget}")]
    NoCollisionWithinBudget { budget: usize },
    #[error("rotation of order {nu} does not preserve the lattice")]
    WrongLatticeForGroup { nu: u32 },
    #[error("iterates {0} and {1} of a certified segment meet")]
    CrossCheckFailed(usize, usize),
    #[error("this operation needs an integer multiplier")]
    NotIntegerMultiplier,
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    Map(#[from] TorusMapError),
    #[error(transparent)]
    Number(#[from] NumberError),
}

impl From<ChordError> for SegmentError {
    fn from(e: ChordError) -> Self {
        match e {
            ChordError::Uncertain => SegmentError::UncertainAtTolerance,
            ChordError::TooManyTranslates(n) => {
                SegmentError::BudgetExceeded(format!("{n} lattice translates"))
            }
        }
    }
}

/// `point(t) = base + lift + t·direction` for `t ∈ [t_lo, t_hi]`, where `base`
/// is the line's canonical base point and `lift` an integer translate chosen
/// so that the midpoint lies in `[0, 1]²`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusSegment {
    line: TorusLine,
    t_lo: QuadraticNumber,
    t_hi: QuadraticNumber,
    lift: (BigInt, BigInt),
}

fn rational(t: &QuadraticNumber) -> Result<(), SegmentError> {
    if t.is_rational() {
        Ok(())
    } else {
        Err(SegmentError::ParameterNotRational(t.to_string()))
    }
}

impl TorusSegment {
    pub fn new(
        line: TorusLine,
        t_lo: QuadraticNumber,
        t_hi: QuadraticNumber,
    ) -> Result<Self, SegmentError> {
        rational(&t_lo)?;
        rational(&t_hi)?;
        if t_lo >= t_hi {
            return Err(SegmentError::DegenerateSegment);
        }
        let mut seg = TorusSegment {
            line,
            t_lo,
            t_hi,
            lift: (BigInt::zero(), BigInt::zero()),
        };
        seg.normalize_lift();
        Ok(seg)
    }

    /// The segment with the given lift endpoints.
    pub fn from_endpoints(p: &Coord, q: &Coord) -> Result<Self, SegmentError> {
        let d = q.checked_sub(p)?;
        if d.x.is_zero() && d.y.is_zero() {
            return Err(SegmentError::DegenerateSegment);
        }
        if d.x.is_zero() || d.y.checked_div(&d.x)?.is_rational() {
            // Rational direction: d = λ·(m, k) with (m, k) primitive.
            let (m, k, lambda) = primitive_direction(&d)?;
            let slope = SlopeSpec::rational(m.clone(), k.clone())?;
            let line = line_from_point(&slope, p)?;
            let tau = closed_parameter(&line, p)?;
            let (lo, hi) = order(tau.clone(), &tau + &lambda);
            return TorusSegment::new(line, lo, hi);
        }
        let s = d.y.checked_div(&d.x)?;
        rational(&d.x)?;
        let line = line_from_point(&SlopeSpec::irrational(s)?, p)?;
        let (lo, hi) = order(QuadraticNumber::zero(), d.x.clone());
        TorusSegment::new(line, lo, hi)
    }

    pub fn line(&self) -> &TorusLine {
        &self.line
    }

    pub fn t_lo(&self) -> &QuadraticNumber {
        &self.t_lo
    }

    pub fn t_hi(&self) -> &QuadraticNumber {
        &self.t_hi
    }

    pub fn lift(&self) -> (&BigInt, &BigInt) {
        (&self.lift.0, &self.lift.1)
    }

    /// `base + lift`: the point of parameter 0 on the chosen lift.
    pub fn lift_base(&self) -> Coord {
        self.line.base_point().shift(&self.lift.0, &self.lift.1)
    }

    /// The same line and lift over a different parameter interval.
    pub fn with_interval(
        &self,
        t_lo: QuadraticNumber,
        t_hi: QuadraticNumber,
    ) -> Result<Self, SegmentError> {
        TorusSegment::new(self.line.clone(), t_lo, t_hi)
    }

    fn normalize_lift(&mut self) {
        let mid = (&self.t_lo + &self.t_hi) * &QuadraticNumber::ratio(1, 2).expect("literal");
        let base = self.line.base_point();
        let dir = self.line.direction();
        let fx = floor_of_sum(&base.x, &(&mid * &dir.x));
        let fy = floor_of_sum(&base.y, &(&mid * &dir.y));
        self.lift = (-fx, -fy);
    }

    /// Exact lift point when its coordinates share one field.
    pub fn point(&self, t: &QuadraticNumber) -> Option<Coord> {
        let base = self.lift_base();
        let dir = self.line.direction();
        let x = base.x.checked_add(&t.checked_mul(&dir.x).ok()?).ok()?;
        let y = base.y.checked_add(&t.checked_mul(&dir.y).ok()?).ok()?;
        Some(Coord::new(x, y))
    }

    pub fn point_f64(&self, t: &QuadraticNumber) -> (f64, f64) {
        let base = self.lift_base().to_f64();
        let dir = self.line.direction().to_f64();
        let t = t.to_f64();
        (base.0 + t * dir.0, base.1 + t * dir.1)
    }

    pub fn endpoints_f64(&self) -> ((f64, f64), (f64, f64)) {
        (self.point_f64(&self.t_lo), self.point_f64(&self.t_hi))
    }

    /// The lift as a chord, exact when possible.
    pub fn chord(&self) -> Chord {
        match (self.point(&self.t_lo), self.point(&self.t_hi)) {
            (Some(a), Some(b)) => Chord::new(a, b),
            _ => {
                let (a, b) = self.endpoints_f64();
                Chord::Float { a, b }
            }
        }
    }

    pub fn param_length(&self) -> QuadraticNumber {
        &self.t_hi - &self.t_lo
    }

    /// Euclidean length in the plane.
    pub fn length(&self, lat: &Lattice) -> f64 {
        let dir = lat.embed_f64(self.line.direction().to_f64()).norm();
        self.param_length().to_f64() * dir
    }

    /// Image under an integer-multiplier map `z ↦ a·z + b`. On an
    /// irrational line the canonical parameter scales: `t ↦ a·t`.
    pub fn image_under(&self, map: &AffineTorusMap) -> Result<TorusSegment, SegmentError> {
        let a = map
            .integer_multiplier()
            .ok_or(SegmentError::NotIntegerMultiplier)?;
        if self.line.is_closed() {
            let line = crate::line_orbit::line_image(map, &self.line)?;
            let p = map.apply_lift(&self.point(&self.t_lo).expect("closed lines are exact"))?;
            let q = map.apply_lift(&self.point(&self.t_hi).expect("closed lines are exact"))?;
            let seg = TorusSegment::from_endpoints(&p, &q)?;
            debug_assert_eq!(seg.line, line);
            return Ok(seg);
        }
        let line = crate::line_orbit::line_image(map, &self.line)?;
        let (lo, hi) = order(self.t_lo.mul_int(&a), self.t_hi.mul_int(&a));
        TorusSegment::new(line, lo, hi)
    }

    /// Image under the involution `z ↦ 2·z0 − z`; the parameter flips sign.
    pub fn reflect_through(&self, z0: &Coord) -> Result<TorusSegment, SegmentError> {
        match &self.line {
            TorusLine::Irrational { slope, transverse } => {
                let two = BigInt::from(2);
                let alpha = (-&transverse.alpha).checked_sub(&z0.y.mul_int(&two))?;
                let beta = z0.x.mul_int(&two).checked_sub(&transverse.beta)?;
                let line = TorusLine::irrational(slope.clone(), Transverse::new(alpha, beta))?;
                TorusSegment::new(line, -&self.t_hi, -&self.t_lo)
            }
            TorusLine::Closed { .. } => {
                let flip = |p: Coord| -> Result<Coord, NumberError> {
                    let two = BigInt::from(2);
                    Ok(Coord::new(
                        z0.x.mul_int(&two).checked_sub(&p.x)?,
                        z0.y.mul_int(&two).checked_sub(&p.y)?,
                    ))
                };
                let p = flip(self.point(&self.t_lo).expect("closed lines are exact"))?;
                let q = flip(self.point(&self.t_hi).expect("closed lines are exact"))?;
                TorusSegment::from_endpoints(&p, &q)
            }
        }
    }
}

impl fmt::Display for TorusSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} t ∈ [{}, {}]", self.line, self.t_lo, self.t_hi)
    }
}

fn order(a: QuadraticNumber, b: QuadraticNumber) -> (QuadraticNumber, QuadraticNumber) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `d = λ·(m, k)` with `(m, k)` primitive; `d` has rational ratio.
fn primitive_direction(d: &Coord) -> Result<(BigInt, BigInt, QuadraticNumber), SegmentError> {
    // d/λ₀ is rational for λ₀ the nonzero coordinate.
    let pivot = if d.x.is_zero() { &d.y } else { &d.x };
    let rx = d.x.checked_div(pivot)?;
    let ry = d.y.checked_div(pivot)?;
    let den = rx.denominator().lcm(ry.denominator());
    let mut m = rx.mul_int(&den).to_integer().expect("rational");
    let mut k = ry.mul_int(&den).to_integer().expect("rational");
    let g = m.gcd(&k);
    m /= &g;
    k /= &g;
    // d = pivot·(rx, ry) = pivot·(g/den)·(m, k)
    let mut lambda = pivot
        .mul_int(&g)
        .checked_div(&QuadraticNumber::from_big(den))?;
    if m.is_negative() || (m.is_zero() && k.is_negative()) {
        m = -m;
        k = -k;
        lambda = -lambda;
    }
    rational(&lambda)?;
    Ok((m, k, lambda))
}

/// Parameter `τ` of `p` on a closed line: `p − base − τ·(m, k) ∈ ℤ²`.
fn closed_parameter(line: &TorusLine, p: &Coord) -> Result<QuadraticNumber, SegmentError> {
    let TorusLine::Closed { m, k, .. } = line else {
        unreachable!("closed lines only")
    };
    let delta = p.checked_sub(&line.base_point())?;
    // u·m + v·k = 1
    let eg = m.extended_gcd(k);
    let tau = delta
        .x
        .mul_int(&eg.x)
        .checked_add(&delta.y.mul_int(&eg.y))?;
    rational(&tau)?;
    Ok(tau)
}

/// Whether the projections of the two segments to the torus meet; on
/// success the witness is reported on the first segment's lift.
pub fn segments_intersect(
    _lat: &Lattice,
    s1: &TorusSegment,
    s2: &TorusSegment,
) -> Result<Option<Witness>, SegmentError> {
    if let (
        TorusLine::Irrational {
            slope: sa,
            transverse: ta,
        },
        TorusLine::Irrational {
            slope: sb,
            transverse: tb,
        },
    ) = (&s1.line, &s2.line)
    {
        if sa == sb {
            // Distinct parallel injective lines never meet; on one line the
            // canonical parameter is global.
            if ta != tb {
                return Ok(None);
            }
            let lo = std::cmp::max(&s1.t_lo, &s2.t_lo);
            let hi = std::cmp::min(&s1.t_hi, &s2.t_hi);
            if lo > hi {
                return Ok(None);
            }
            return Ok(Some(Witness {
                exact: s1.point(lo),
                approx: s1.point_f64(lo),
            }));
        }
    }
    Ok(s1.chord().meets_mod_lattice(&s2.chord())?)
}
