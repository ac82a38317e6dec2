//! Flat lines on the torus and their orbits under integer-multiplier maps.
//!
//! A line of irrational slope `s` (in lattice coordinates, `s = dy/dx`) is
//! identified by its transverse pair `(α, β)`: the functional `s·x − y` takes
//! the value `α + β·s` on it, modulo `sℤ + ℤ`. Because `1` and `s` are
//! linearly independent over the field holding `α` and `β`, the pair taken
//! modulo `ℤ²` determines the line, and equality of lines becomes equality of
//! exact scalars. The canonical base point of the line is `(β, −α)`.
//!
//! A line of rational direction `(m, k)` closes up into a curve; it is stored
//! as the value of `k·x − m·y` modulo 1.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Coord, TorusPoint};
use crate::numbers::{NumberError, QuadraticNumber};
use crate::torus_map::AffineTorusMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineError {
    #[error("transverse data shares the slope's radicand sqrt({0})")]
    FieldClash(u64),
    #[error("an irrational slope is not preserved by a non-real multiplier")]
    SlopeNotInvariant,
    #[error("direction ({0}, {1}) is not a primitive nonzero integer vector")]
    NotPrimitive(BigInt, BigInt),
    #[error("slope {0} is rational; use a rational direction")]
    RationalSlope(String),
    #[error("orbit classification requires a rational translation b")]
    IrrationalTranslation,
    #[error("orbit exceeded its finite-state bound {0}")]
    OrbitBoundExceeded(BigInt),
    #[error(transparent)]
    Number(#[from] NumberError),
}

/// Direction of a flat line in lattice coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SlopeSpec {
    /// Primitive integer direction `(m, k)`; the line closes up.
    RationalDirection { m: BigInt, k: BigInt },
    /// Irrational slope `dy/dx = s`.
    IrrationalSlope(QuadraticNumber),
}

impl SlopeSpec {
    pub fn rational(m: impl Into<BigInt>, k: impl Into<BigInt>) -> Result<Self, LineError> {
        let (m, k) = (m.into(), k.into());
        if !m.gcd(&k).is_one() {
            return Err(LineError::NotPrimitive(m, k));
        }
        Ok(SlopeSpec::RationalDirection { m, k })
    }

    pub fn irrational(s: QuadraticNumber) -> Result<Self, LineError> {
        if s.is_rational() {
            return Err(LineError::RationalSlope(s.to_string()));
        }
        Ok(SlopeSpec::IrrationalSlope(s))
    }

    /// Direction vector `(dx, dy)` in lattice coordinates.
    pub fn direction(&self) -> Coord {
        match self {
            SlopeSpec::RationalDirection { m, k } => Coord::new(
                QuadraticNumber::from_big(m.clone()),
                QuadraticNumber::from_big(k.clone()),
            ),
            SlopeSpec::IrrationalSlope(s) => Coord::new(QuadraticNumber::one(), s.clone()),
        }
    }
}

impl fmt::Display for SlopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeSpec::RationalDirection { m, k } => write!(f, "{m},{k}"),
            SlopeSpec::IrrationalSlope(s) => write!(f, "{s}"),
        }
    }
}

/// Transverse pair `(α, β)`, both reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Transverse {
    pub alpha: QuadraticNumber,
    pub beta: QuadraticNumber,
}

impl Transverse {
    pub fn new(alpha: QuadraticNumber, beta: QuadraticNumber) -> Self {
        Transverse {
            alpha: alpha.mod1(),
            beta: beta.mod1(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.alpha.is_rational() && self.beta.is_rational()
    }

    /// Canonical base point `(β, −α)`.
    pub fn base_point(&self) -> Coord {
        Coord::new(self.beta.clone(), -&self.alpha)
    }
}

impl fmt::Display for Transverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(α={}, β={})", self.alpha, self.beta)
    }
}

/// A flat line modulo `Λ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TorusLine {
    /// Closed geodesic `{k·x − m·y ≡ offset (mod 1)}` with `(m, k)` primitive.
    Closed {
        m: BigInt,
        k: BigInt,
        offset: QuadraticNumber,
    },
    /// Injective geodesic of irrational slope.
    Irrational {
        slope: QuadraticNumber,
        transverse: Transverse,
    },
}

impl TorusLine {
    /// Irrational-slope line from its transverse pair.
    pub fn irrational(slope: QuadraticNumber, transverse: Transverse) -> Result<Self, LineError> {
        SlopeSpec::irrational(slope.clone())?;
        check_transverse_field(&slope, &transverse.alpha, &transverse.beta)?;
        Ok(TorusLine::Irrational { slope, transverse })
    }

    pub fn closed(m: BigInt, k: BigInt, offset: QuadraticNumber) -> Result<Self, LineError> {
        SlopeSpec::rational(m.clone(), k.clone())?;
        // (m, k) and (−m, −k) describe the same line; keep m > 0, or m = 0 < k.
        let flip = m.is_negative() || (m.is_zero() && k.is_negative());
        Ok(if flip {
            TorusLine::Closed {
                m: -m,
                k: -k,
                offset: (-offset).mod1(),
            }
        } else {
            TorusLine::Closed {
                m,
                k,
                offset: offset.mod1(),
            }
        })
    }

    pub fn slope(&self) -> SlopeSpec {
        match self {
            TorusLine::Closed { m, k, .. } => SlopeSpec::RationalDirection {
                m: m.clone(),
                k: k.clone(),
            },
            TorusLine::Irrational { slope, .. } => SlopeSpec::IrrationalSlope(slope.clone()),
        }
    }

    pub fn transverse(&self) -> Option<&Transverse> {
        match self {
            TorusLine::Irrational { transverse, .. } => Some(transverse),
            TorusLine::Closed { .. } => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, TorusLine::Closed { .. })
    }

    /// Canonical base point; parameter `t = 0` of the line.
    pub fn base_point(&self) -> Coord {
        match self {
            TorusLine::Irrational { transverse, .. } => transverse.base_point(),
            TorusLine::Closed { m, k, offset } => {
                // k·u − m·v = 1 from the extended gcd; then (c·u, c·v) lies on the line.
                let eg = k.extended_gcd(m);
                let (u, v) = (eg.x, -eg.y);
                Coord::new(offset.mul_int(&u), offset.mul_int(&v))
            }
        }
    }

    pub fn direction(&self) -> Coord {
        self.slope().direction()
    }

    /// Whether the point lies on the line (exact).
    pub fn contains(&self, p: &Coord) -> Result<bool, LineError> {
        let probe = line_from_point(&self.slope(), p)?;
        Ok(&probe == self)
    }
}

impl fmt::Display for TorusLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusLine::Closed { m, k, offset } => {
                write!(f, "closed line dir ({m},{k}) offset {offset}")
            }
            TorusLine::Irrational { slope, transverse } => {
                write!(f, "line slope {slope} {transverse}")
            }
        }
    }
}

fn check_transverse_field(
    slope: &QuadraticNumber,
    alpha: &QuadraticNumber,
    beta: &QuadraticNumber,
) -> Result<(), LineError> {
    let ds = slope.radicand();
    for x in [alpha, beta] {
        if x.radicand() == ds {
            return Err(LineError::FieldClash(ds));
        }
    }
    alpha.checked_add(beta)?;
    Ok(())
}

/// The line of the given slope through `base`.
pub fn line_from_point(slope: &SlopeSpec, base: &Coord) -> Result<TorusLine, LineError> {
    match slope {
        SlopeSpec::IrrationalSlope(s) => {
            if let Ok(v) = s
                .checked_mul(&base.x)
                .and_then(|sx| sx.checked_sub(&base.y))
            {
                if v.radicand() == 0 || v.radicand() == s.radicand() {
                    // Base in the slope's field: split s·x − y = α + β·s with
                    // rational α, β.
                    let (v0, v1) = v.split();
                    let (s0, s1) = s.split();
                    let beta = v1.checked_div(&s1)?;
                    let alpha = v0.checked_sub(&beta.checked_mul(&s0)?)?;
                    return TorusLine::irrational(s.clone(), Transverse::new(alpha, beta));
                }
            }
            check_transverse_field(s, &base.x, &base.y)?;
            TorusLine::irrational(s.clone(), Transverse::new(-&base.y, base.x.clone()))
        }
        SlopeSpec::RationalDirection { m, k } => {
            let offset = base.x.mul_int(k).checked_sub(&base.y.mul_int(m))?;
            TorusLine::closed(m.clone(), k.clone(), offset)
        }
    }
}

/// Image of a line under the map.
pub fn line_image(map: &AffineTorusMap, line: &TorusLine) -> Result<TorusLine, LineError> {
    match line {
        TorusLine::Irrational { slope, transverse } => {
            let a = map
                .integer_multiplier()
                .ok_or(LineError::SlopeNotInvariant)?;
            let b = map.b().coord();
            let alpha = transverse.alpha.mul_int(&a).checked_sub(&b.y)?;
            let beta = transverse.beta.mul_int(&a).checked_add(&b.x)?;
            TorusLine::irrational(slope.clone(), Transverse::new(alpha, beta))
        }
        TorusLine::Closed { m, k, .. } => {
            let (dm, dk) = map.matrix().apply_int((m, k));
            let g = dm.gcd(&dk);
            let anchor = map.apply_lift(&line.base_point()).map_err(|e| match e {
                crate::torus_map::TorusMapError::IncompatibleField(n) => LineError::Number(n),
                _ => unreachable!("apply_lift only fails on fields"),
            })?;
            line_from_point(&SlopeSpec::rational(dm / &g, dk / &g)?, &anchor)
        }
    }
}

/// Which transverse coordinate witnesses irrationality.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IrrationalWitness {
    Alpha,
    Beta,
}

/// Orbit type of a line under an integer-multiplier map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LineOrbitClass {
    JordanCurve {
        m: BigInt,
        k: BigInt,
    },
    /// `states[n] = Aⁿ(L)` for `n < preperiod + period`, pairwise distinct,
    /// and `A^{preperiod+period}(L) = states[preperiod]`.
    EventuallyPeriodic {
        preperiod: usize,
        period: usize,
        states: Vec<Transverse>,
    },
    WanderingLine {
        witness: IrrationalWitness,
    },
}

impl LineOrbitClass {
    /// The periodic part of an eventually periodic orbit.
    pub fn cycle(&self) -> Option<&[Transverse]> {
        match self {
            LineOrbitClass::EventuallyPeriodic {
                preperiod, states, ..
            } => Some(&states[*preperiod..]),
            _ => None,
        }
    }
}

/// Jordan curve, eventually periodic, or wandering.
pub fn classify_line(map: &AffineTorusMap, line: &TorusLine) -> Result<LineOrbitClass, LineError> {
    if !map.has_rational_translation() {
        return Err(LineError::IrrationalTranslation);
    }
    let transverse = match line {
        TorusLine::Closed { m, k, .. } => {
            return Ok(LineOrbitClass::JordanCurve {
                m: m.clone(),
                k: k.clone(),
            })
        }
        TorusLine::Irrational { transverse, .. } => transverse,
    };
    if map.integer_multiplier().is_none() {
        return Err(LineError::SlopeNotInvariant);
    }
    // Periodic states of x ↦ a·x + c (mod 1) with a, c rational are rational,
    // so an irrational coordinate never repeats.
    if !transverse.alpha.is_rational() {
        return Ok(LineOrbitClass::WanderingLine {
            witness: IrrationalWitness::Alpha,
        });
    }
    if !transverse.beta.is_rational() {
        return Ok(LineOrbitClass::WanderingLine {
            witness: IrrationalWitness::Beta,
        });
    }
    let b = map.b().coord();
    let den = [&transverse.alpha, &transverse.beta, &b.x, &b.y]
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denominator()));
    let bound = &den * &den;

    let mut states = vec![transverse.clone()];
    let mut seen = HashMap::from([(transverse.clone(), 0usize)]);
    let mut cur = line.clone();
    loop {
        cur = line_image(map, &cur)?;
        let t = cur.transverse().expect("slope is invariant").clone();
        if let Some(&first) = seen.get(&t) {
            let period = states.len() - first;
            return Ok(LineOrbitClass::EventuallyPeriodic {
                preperiod: first,
                period,
                states,
            });
        }
        if BigInt::from(states.len()) > bound {
            return Err(LineError::OrbitBoundExceeded(bound));
        }
        seen.insert(t.clone(), states.len());
        states.push(t);
    }
}

/// The first point of `q` lying on the line, if any.
pub fn passes_through_q(line: &TorusLine, q: &[TorusPoint]) -> Option<TorusPoint> {
    q.iter()
        .find(|p| match line {
            TorusLine::Irrational { transverse, .. } => {
                // (q₁, q₂) is on the line iff β ≡ q₁ and α ≡ −q₂ (mod 1).
                (&transverse.beta - p.x()).mod1().is_zero()
                    && (&transverse.alpha + p.y()).mod1().is_zero()
            }
            TorusLine::Closed { .. } => line.contains(p.coord()).unwrap_or(false),
        })
        .cloned()
}
