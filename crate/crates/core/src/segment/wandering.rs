//! Wandering certificates for segments under integer multipliers.
//!
//! On an irrational line the canonical parameter is multiplied by `a` at each
//! step. Two iterates `Aⁿ(S)`, `Aᵐ(S)` can only meet when they lie on the
//! same line (or, at sphere level, on lines exchanged by the involution), and
//! then the question is whether the intervals `aⁿ·I` and `±aᵐ·I` overlap.
//! With `k = m − n` this is `I ∩ ε·aᵏ·I ≠ ∅`, which is ruled out for every
//! admissible `k` once `0 ∉ I` and `max|t| < λ·min|t|`, where `λ` is the
//! smallest positive value of `ε·aᵏ`.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::{segments_intersect, SegmentError, TorusSegment};
use crate::lattice::Coord;
use crate::line_orbit::{classify_line, LineOrbitClass};
use crate::numbers::QuadraticNumber;
use crate::torus_map::AffineTorusMap;

pub const DEFAULT_CHECK_ITERATES: usize = 12;

/// Cross-check cap: the check is quadratic in the number of iterates.
pub const MAX_CHECK_ITERATES: usize = 512;

/// Which parameter dilations can bring the segment back onto itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Recurrence {
    /// Some iterate returns to the segment's line (or its mirror image).
    pub returns: bool,
    /// Smallest positive dilation among the returns, if any is positive.
    pub expansion: Option<BigInt>,
}

impl Recurrence {
    pub fn none() -> Self {
        Recurrence {
            returns: false,
            expansion: None,
        }
    }

    /// Same-line returns after every multiple of `period` steps.
    pub fn periodic(a: &BigInt, period: usize) -> Self {
        let ap = num_traits::pow(a.clone(), period);
        let expansion = if ap.is_positive() { ap } else { &ap * &ap };
        Recurrence {
            returns: true,
            expansion: Some(expansion),
        }
    }
}

/// The largest admissible subinterval of `[lo, hi]` (fixed point at 0) and
/// whether it is the whole interval. Ties between the two sides of 0 go to
/// the positive side.
pub fn admissible_interval(
    lo: &QuadraticNumber,
    hi: &QuadraticNumber,
    rec: &Recurrence,
) -> (QuadraticNumber, QuadraticNumber, bool) {
    if !rec.returns {
        return (lo.clone(), hi.clone(), true);
    }
    let zero = QuadraticNumber::zero();
    // One side at a time, as a positive interval (near, far] with near ≥ 0.
    let side = |near: &QuadraticNumber, far: &QuadraticNumber| -> (QuadraticNumber, bool) {
        let ok = match &rec.expansion {
            Some(l) => near.is_positive() && far < &near.mul_int(l),
            None => near.is_positive(),
        };
        if ok {
            return (near.clone(), true);
        }
        // near' = 2·far/(λ+1) sits strictly inside (far/λ, far).
        let shrink = match &rec.expansion {
            Some(l) => far.mul_int(&BigInt::from(2)) / QuadraticNumber::from_big(l + 1),
            None => far * &QuadraticNumber::ratio(1, 2).expect("literal"),
        };
        (std::cmp::max(near.clone(), shrink), false)
    };
    let mut best: Option<(QuadraticNumber, QuadraticNumber, bool)> = None;
    if hi.is_positive() {
        let near = std::cmp::max(lo.clone(), zero.clone());
        let (n, whole) = side(&near, hi);
        best = Some((n, hi.clone(), whole));
    }
    if lo.is_negative() {
        let near = -std::cmp::min(hi, &zero);
        let (n, whole) = side(&near, &-lo);
        let cand = (lo.clone(), -n, whole);
        let longer = match &best {
            None => true,
            Some((a, b, _)) => &cand.1 - &cand.0 > b - a,
        };
        if longer {
            best = Some(cand);
        }
    }
    best.expect("lo < hi leaves at least one side")
}

/// `t ↦ multiplier·t + offset` on the periodic line, in its canonical
/// parameter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReturnMap {
    pub multiplier: BigInt,
    pub offset: QuadraticNumber,
    pub fixed_point: QuadraticNumber,
    /// `A^p(point(t)) = point(multiplier·t + offset) + lift_shift`.
    pub lift_shift: (BigInt, BigInt),
}

impl ReturnMap {
    pub fn apply(&self, t: &QuadraticNumber) -> QuadraticNumber {
        &t.mul_int(&self.multiplier) + &self.offset
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CertificateMode {
    WholeSegment,
    Subsegment,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WanderingCertificate {
    pub mode: CertificateMode,
    pub segment: TorusSegment,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    pub return_map: Option<ReturnMap>,
    pub expansion: Option<BigInt>,
    pub checked_iterates: usize,
    /// `λ·min|t − t*| / max|t − t*|`; above 1 means disjoint iterates.
    pub slack: Option<QuadraticNumber>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WanderingVerdict {
    Certified(Box<WanderingCertificate>),
    NotWanderable { reason: String },
}

/// Certify that the projection of `seg` (or of a subsegment) wanders, and
/// cross-check the first `check` iterates for pairwise disjointness.
pub fn certify_wandering(
    map: &AffineTorusMap,
    seg: &TorusSegment,
    check: usize,
) -> Result<WanderingVerdict, SegmentError> {
    let a = map
        .integer_multiplier()
        .ok_or(SegmentError::NotIntegerMultiplier)?;
    let class = classify_line(map, seg.line())?;
    let (rec, preperiod, period, return_map) = match &class {
        LineOrbitClass::JordanCurve { m, k } => {
            return Ok(WanderingVerdict::NotWanderable {
                reason: format!("the line closes up along direction ({m}, {k})"),
            })
        }
        LineOrbitClass::WanderingLine { .. } => (Recurrence::none(), None, None, None),
        LineOrbitClass::EventuallyPeriodic {
            preperiod, period, ..
        } => (
            Recurrence::periodic(&a, *period),
            Some(*preperiod),
            Some(*period),
            Some(return_map(map, &class)?),
        ),
    };
    let (lo, hi, whole) = admissible_interval(seg.t_lo(), seg.t_hi(), &rec);
    let certified = seg.with_interval(lo, hi)?;
    cross_check(map, &certified, check, None)?;
    Ok(WanderingVerdict::Certified(Box::new(
        WanderingCertificate {
            mode: if whole {
                CertificateMode::WholeSegment
            } else {
                CertificateMode::Subsegment
            },
            slack: slack(&certified, &rec),
            segment: certified,
            preperiod,
            period,
            return_map,
            expansion: rec.expansion,
            checked_iterates: check,
        },
    )))
}

pub(crate) fn slack(seg: &TorusSegment, rec: &Recurrence) -> Option<QuadraticNumber> {
    let l = rec.expansion.as_ref()?;
    let (a, b) = (seg.t_lo().abs(), seg.t_hi().abs());
    let (near, far) = if a <= b { (a, b) } else { (b, a) };
    if far.is_zero() {
        return None;
    }
    Some(near.mul_int(l) / far)
}

/// Return map on the periodic line of an eventually periodic orbit.
fn return_map(map: &AffineTorusMap, class: &LineOrbitClass) -> Result<ReturnMap, SegmentError> {
    let LineOrbitClass::EventuallyPeriodic {
        preperiod,
        period,
        states,
    } = class
    else {
        unreachable!("periodic orbits only")
    };
    let a = map
        .integer_multiplier()
        .ok_or(SegmentError::NotIntegerMultiplier)?;
    let base = states[*preperiod].base_point();
    let mut p = base.clone();
    for _ in 0..*period {
        p = map.apply_lift(&p)?;
    }
    // Rational base point: the displacement along an irrational direction
    // must vanish, so A^p fixes the base point up to an integer vector.
    let d = p.checked_sub(&base)?;
    let shift = match (d.x.to_integer(), d.y.to_integer()) {
        (Some(x), Some(y)) => (x, y),
        _ => unreachable!("periodic base point returns up to ℤ²"),
    };
    Ok(ReturnMap {
        multiplier: num_traits::pow(a, *period),
        offset: QuadraticNumber::zero(),
        fixed_point: QuadraticNumber::zero(),
        lift_shift: shift,
    })
}

/// The first `count` iterates `S, A(S), …`.
pub fn segment_iterates(
    map: &AffineTorusMap,
    seg: &TorusSegment,
    count: usize,
) -> Result<Vec<TorusSegment>, SegmentError> {
    let mut out = Vec::with_capacity(count);
    let mut cur = seg.clone();
    for _ in 0..count {
        let next = cur.image_under(map)?;
        out.push(std::mem::replace(&mut cur, next));
    }
    Ok(out)
}

/// Pairwise disjointness of iterates `0..check`. With a reflection center
/// the test is against `Y ∪ ρ(Y)` for each earlier iterate `Y`, and each
/// iterate is also tested against its own mirror image.
pub(crate) fn cross_check(
    map: &AffineTorusMap,
    seg: &TorusSegment,
    check: usize,
    mirror: Option<&Coord>,
) -> Result<(), SegmentError> {
    if check > MAX_CHECK_ITERATES {
        return Err(SegmentError::BudgetExceeded(format!(
            "{check} check iterates (cap {MAX_CHECK_ITERATES})"
        )));
    }
    let its = segment_iterates(map, seg, check)?;
    let lat = map.lattice();
    let mirrored = match mirror {
        Some(z0) => its
            .iter()
            .map(|s| s.reflect_through(z0))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    for m in 0..its.len() {
        for n in 0..m {
            if segments_intersect(lat, &its[m], &its[n])?.is_some() {
                return Err(SegmentError::CrossCheckFailed(n, m));
            }
        }
        for n in 0..mirrored.len().min(m + 1) {
            // A segment meeting its own mirror image only at the fixed point
            // of the involution still folds; reject it as well.
            if segments_intersect(lat, &its[m], &mirrored[n])?.is_some() {
                return Err(SegmentError::CrossCheckFailed(n, m));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::line_orbit::{TorusLine, Transverse};
    use crate::numbers::parse_quadratic;

    fn q(s: &str) -> QuadraticNumber {
        parse_quadratic(s).unwrap()
    }

    fn doubling() -> AffineTorusMap {
        AffineTorusMap::integer(2, Coord::origin(), Lattice::square()).unwrap()
    }

    fn seg(alpha: &str, beta: &str, lo: &str, hi: &str) -> TorusSegment {
        let line = TorusLine::irrational(q("sqrt(2)"), Transverse::new(q(alpha), q(beta))).unwrap();
        TorusSegment::new(line, q(lo), q(hi)).unwrap()
    }

    #[test]
    fn wandering_line_whole_segment() {
        let s = seg("sqrt(3)-1", "0", "0", "1/10");
        let WanderingVerdict::Certified(c) = certify_wandering(&doubling(), &s, 12).unwrap() else {
            panic!()
        };
        assert_eq!(c.mode, CertificateMode::WholeSegment);
        assert_eq!(c.segment, s);
        assert_eq!(c.period, None);
    }

    #[test]
    fn closed_line_not_wanderable() {
        let s =
            TorusSegment::from_endpoints(&Coord::ratio(0, 1, 0, 1), &Coord::ratio(1, 10, 1, 10))
                .unwrap();
        let v = certify_wandering(&doubling(), &s, 12).unwrap();
        assert!(matches!(v, WanderingVerdict::NotWanderable { .. }));
    }

    #[test]
    fn periodic_line_subsegment() {
        let s = seg("1/3", "0", "0", "1/10");
        let WanderingVerdict::Certified(c) = certify_wandering(&doubling(), &s, 12).unwrap() else {
            panic!()
        };
        assert_eq!(c.mode, CertificateMode::Subsegment);
        assert_eq!((c.preperiod, c.period), (Some(0), Some(2)));
        assert_eq!(c.expansion, Some(BigInt::from(4)));
        assert_eq!(c.segment.t_lo(), &q("1/25"));
        assert_eq!(c.segment.t_hi(), &q("1/10"));
        assert_eq!(c.slack, Some(q("8/5")));
        let rm = c.return_map.unwrap();
        assert_eq!(rm.multiplier, BigInt::from(4));
        assert_eq!(rm.fixed_point, q("0"));
    }

    #[test]
    fn admissible_sides() {
        let rec = Recurrence {
            returns: true,
            expansion: Some(BigInt::from(4)),
        };
        // Already admissible.
        assert_eq!(
            admissible_interval(&q("1/10"), &q("3/10"), &rec),
            (q("1/10"), q("3/10"), true)
        );
        // Negative side longer.
        assert_eq!(
            admissible_interval(&q("-1/2"), &q("1/10"), &rec),
            (q("-1/2"), q("-1/5"), false)
        );
        // Mirror-only returns just need to avoid 0.
        let rec = Recurrence {
            returns: true,
            expansion: None,
        };
        assert_eq!(
            admissible_interval(&q("-1/10"), &q("1/10"), &rec),
            (q("1/20"), q("1/10"), false)
        );
    }
}
