//! Lattès models: an affine torus map together with a finite rotation group
//! it commutes with, the quotient sphere, and wandering continua on it.
//!
//! Only the involution case `ν = 2` carries a concrete quotient map (the
//! Weierstrass function). For `ν ∈ {3, 4, 6}` the model exists to produce the
//! group-orbit collision obstruction.

mod semiconj;
mod weierstrass;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{half_lattice_q, reduce_to_fundamental, Coord, Lattice, TorusPoint};
use crate::line_orbit::{
    classify_line, passes_through_q, LineError, LineOrbitClass, TorusLine, Transverse,
};
use crate::segment::{
    admissible_interval, find_collision, CertificateMode, CollisionCertificate, GroupAction,
    Recurrence, SegmentError, TorusSegment, WanderingCertificate,
};
use crate::torus_map::{AffineTorusMap, TorusMapError};

pub use semiconj::{
    duplication, fit_descended_map, verify_semiconjugacy, RationalMap, SampleRow,
    SemiconjugacyPath, SemiconjugacyReport,
};
pub use weierstrass::{g_invariants, g_invariants_by_lattice_sum, wp, wp_by_lattice_sum, wp_prime};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LattesError {
    #[error("map does not descend to the quotient: {0}")]
    NotLattesCompatible(String),
    #[error("rotation of order {nu} does not preserve the lattice")]
    WrongLatticeForGroup { nu: u32 },
    #[error("operation needs the involution model (ν = 2), got ν = {0}")]
    NeedsInvolution(u32),
    #[error("involution pairs cycle states with shift {shift} in a cycle of period {period}")]
    OddPeriodPairing { period: usize, shift: usize },
    #[error("z is within 1e-6 of a lattice point")]
    NearPole,
    #[error("least-squares fit is ill-conditioned (singular value ratio {0:e})")]
    FitIllConditioned(f64),
    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualExceedsTol { residual: f64, tol: f64 },
    #[error("duplication formula failed its numerical check (residual {0:e})")]
    DuplicationCheckFailed(f64),
    #[error("need at least {needed} usable samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    Map(#[from] TorusMapError),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LattesModel {
    map: AffineTorusMap,
    group: GroupAction,
    z0: TorusPoint,
}

impl LattesModel {
    pub fn new(map: AffineTorusMap, nu: u32, z0: Coord) -> Result<Self, LattesError> {
        let lat = map.lattice().clone();
        if !z0.is_rational() {
            return Err(LattesError::NotLattesCompatible(format!(
                "center {z0} is not rational"
            )));
        }
        let group = GroupAction::new(&lat, nu, z0.clone()).map_err(|e| match e {
            SegmentError::WrongLatticeForGroup { nu } => LattesError::WrongLatticeForGroup { nu },
            other => LattesError::Segment(other),
        })?;
        let m = map.matrix();
        let r = group.rotation();
        if m.mul(r) != r.mul(m) {
            return Err(LattesError::NotLattesCompatible(
                "linear part does not commute with the rotation".into(),
            ));
        }
        // With commuting linear parts, A∘ρ − ρ∘A is constant; test it at z0.
        let rho = |p: &Coord| -> Result<Coord, LattesError> {
            let d = p.checked_sub(&z0).map_err(SegmentError::from)?;
            Ok(r.apply(&d)
                .and_then(|v| v.checked_add(&z0))
                .map_err(SegmentError::from)?)
        };
        let az0 = map.apply_lift(&z0)?;
        if reduce_to_fundamental(&rho(&az0)?) != reduce_to_fundamental(&az0) {
            return Err(LattesError::NotLattesCompatible(format!(
                "A(z0) = {} is not fixed by the rotation",
                reduce_to_fundamental(&az0)
            )));
        }
        if nu == 2 {
            let q = half_lattice_q(&z0);
            for p in &q {
                let img = map.apply(p.coord())?;
                if !q.contains(&img) {
                    return Err(LattesError::NotLattesCompatible(format!(
                        "A({p}) = {img} leaves the fixed-point set"
                    )));
                }
            }
        }
        Ok(LattesModel {
            map,
            group,
            z0: reduce_to_fundamental(&z0),
        })
    }

    pub fn map(&self) -> &AffineTorusMap {
        &self.map
    }

    pub fn lattice(&self) -> &Lattice {
        self.map.lattice()
    }

    pub fn nu(&self) -> u32 {
        self.group.order()
    }

    pub fn z0(&self) -> &TorusPoint {
        &self.z0
    }

    pub fn group(&self) -> &GroupAction {
        &self.group
    }

    /// Cone orders of the quotient orbifold.
    pub fn signature(&self) -> &'static [u32] {
        match self.nu() {
            2 => &[2, 2, 2, 2],
            3 => &[3, 3, 3],
            4 => &[2, 4, 4],
            _ => &[2, 3, 6],
        }
    }

    /// Involution model with an integer multiplier.
    pub fn flexible(&self) -> bool {
        self.nu() == 2 && self.map.integer_multiplier().is_some()
    }

    /// Fixed points of the involution.
    pub fn q_points(&self) -> [TorusPoint; 4] {
        half_lattice_q(self.z0.coord())
    }

    fn require_involution(&self) -> Result<(), LattesError> {
        if self.nu() == 2 {
            Ok(())
        } else {
            Err(LattesError::NeedsInvolution(self.nu()))
        }
    }

    /// `ρ(z) = 2·z0 − z` on a transverse pair.
    pub fn reflect_transverse(&self, t: &Transverse) -> Transverse {
        let two = BigInt::from(2);
        let z0 = self.z0.coord();
        Transverse::new(
            &(-&t.alpha) - &z0.y.mul_int(&two),
            &z0.x.mul_int(&two) - &t.beta,
        )
    }
}

impl fmt::Display for LattesModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Lattès model ν={} z0={} a={} on {}",
            self.nu(),
            self.z0,
            self.map.a(),
            self.lattice()
        )
    }
}

/// How a flat line looks after projection to the sphere.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum ThetaLineType {
    InjectiveGeodesicImage,
    FoldedRay { fold_point: TorusPoint },
    ClosedCurveImage,
}

pub fn theta_line_type(
    model: &LattesModel,
    line: &TorusLine,
) -> Result<ThetaLineType, LattesError> {
    model.require_involution()?;
    if line.is_closed() {
        return Ok(ThetaLineType::ClosedCurveImage);
    }
    // Two fixed points on one line would force a rational direction.
    Ok(match passes_through_q(line, &model.q_points()) {
        Some(p) => ThetaLineType::FoldedRay { fold_point: p },
        None => ThetaLineType::InjectiveGeodesicImage,
    })
}

/// Action of the involution on a cycle of lines.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum RhoPairing {
    /// The mirror cycle is disjoint from the cycle.
    Unpaired { period: usize },
    /// `ρ(state j) = state j + shift` with `shift = period/2`.
    Paired {
        period: usize,
        shift: usize,
        pairing: Vec<usize>,
    },
    /// Every line of the cycle is its own mirror image.
    SelfPaired { period: usize },
}

impl RhoPairing {
    /// Recurrence of a parameter interval on the first cycle line: same-line
    /// returns after multiples of `p` steps and mirrored returns after
    /// `shift + j·p` steps.
    pub fn recurrence(&self, a: &BigInt) -> Recurrence {
        let pow = |k: usize| num_traits::pow(a.clone(), k);
        match self {
            RhoPairing::Unpaired { period } => Recurrence::periodic(a, *period),
            RhoPairing::Paired { shift, .. } => {
                let c = -pow(*shift);
                let expansion = if c.is_positive() { c } else { &c * &c };
                Recurrence {
                    returns: true,
                    expansion: Some(expansion),
                }
            }
            RhoPairing::SelfPaired { period } => Recurrence {
                returns: true,
                expansion: Some(pow(*period).abs()),
            },
        }
    }

    /// Period of the cycle on the sphere.
    pub fn sphere_period(&self) -> usize {
        match self {
            RhoPairing::Unpaired { period } | RhoPairing::SelfPaired { period } => *period,
            RhoPairing::Paired { shift, .. } => *shift,
        }
    }
}

pub fn rho_pairing(model: &LattesModel, cycle: &[Transverse]) -> Result<RhoPairing, LattesError> {
    model.require_involution()?;
    let p = cycle.len();
    let mirror: Vec<Transverse> = cycle.iter().map(|t| model.reflect_transverse(t)).collect();
    let Some(shift) = cycle.iter().position(|t| t == &mirror[0]) else {
        return Ok(RhoPairing::Unpaired { period: p });
    };
    let pairing: Vec<usize> = (0..p).map(|j| (j + shift) % p).collect();
    // ρ commutes with A, so the shift is uniform; check it anyway.
    if (0..p).any(|j| mirror[j] != cycle[pairing[j]]) {
        return Err(LattesError::NotLattesCompatible(
            "involution does not act on the cycle by a shift".into(),
        ));
    }
    if shift == 0 {
        return Ok(RhoPairing::SelfPaired { period: p });
    }
    if 2 * shift != p {
        return Err(LattesError::OddPeriodPairing { period: p, shift });
    }
    Ok(RhoPairing::Paired {
        period: p,
        shift,
        pairing,
    })
}

#[derive(Clone, PartialEq, Debug)]
pub enum SphereVerdict {
    Certified {
        certificate: Box<WanderingCertificate>,
        line_type: ThetaLineType,
        pairing: Option<RhoPairing>,
    },
    NotWanderable {
        reason: String,
    },
    NotFlexible {
        reason: String,
        witness: Option<CollisionCertificate>,
    },
}

/// Certify that the sphere image of `seg` (or of a subsegment) wanders.
pub fn certify_sphere_wandering(
    model: &LattesModel,
    seg: &TorusSegment,
    check: usize,
) -> Result<SphereVerdict, LattesError> {
    let map = &model.map;
    if !model.flexible() {
        let reason = if model.nu() > 2 {
            format!("rotation group of order {}", model.nu())
        } else {
            format!("multiplier {} is not an integer", map.a())
        };
        let group = (model.nu() > 2).then_some(&model.group);
        let witness = match find_collision(map, seg, group, None) {
            Ok(c) => Some(c),
            Err(SegmentError::NoCollisionWithinBudget { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        return Ok(SphereVerdict::NotFlexible { reason, witness });
    }
    let a = map.integer_multiplier().expect("flexible");
    let class = classify_line(map, seg.line())?;
    let line_type = theta_line_type(model, seg.line())?;
    let (rec, preperiod, pairing) = match &class {
        LineOrbitClass::JordanCurve { m, k } => {
            return Ok(SphereVerdict::NotWanderable {
                reason: format!("the line closes up along direction ({m}, {k})"),
            })
        }
        LineOrbitClass::WanderingLine { .. } => (Recurrence::none(), None, None),
        LineOrbitClass::EventuallyPeriodic { preperiod, .. } => {
            let pairing = rho_pairing(model, class.cycle().expect("periodic"))?;
            (pairing.recurrence(&a), Some(*preperiod), Some(pairing))
        }
    };
    let (lo, hi, whole) = admissible_interval(seg.t_lo(), seg.t_hi(), &rec);
    let certified = seg.with_interval(lo, hi)?;
    crate::segment::cross_check(map, &certified, check, Some(model.z0.coord()))?;
    let slack = crate::segment::slack(&certified, &rec);
    Ok(SphereVerdict::Certified {
        certificate: Box::new(WanderingCertificate {
            mode: if whole {
                CertificateMode::WholeSegment
            } else {
                CertificateMode::Subsegment
            },
            segment: certified,
            preperiod,
            period: pairing.as_ref().map(RhoPairing::sphere_period),
            return_map: None,
            expansion: rec.expansion,
            checked_iterates: check,
            slack,
        }),
        line_type,
        pairing,
    })
}

/// Whether `Θ(X) ∩ Θ(Y) ≠ ∅`, via `X ∩ (Y ∪ ρ(Y)) ≠ ∅`.
pub fn sphere_images_meet(
    model: &LattesModel,
    x: &TorusSegment,
    y: &TorusSegment,
) -> Result<bool, LattesError> {
    model.require_involution()?;
    let lat = model.lattice();
    if crate::segment::segments_intersect(lat, x, y)?.is_some() {
        return Ok(true);
    }
    let ry = y.reflect_through(model.z0.coord())?;
    Ok(crate::segment::segments_intersect(lat, x, &ry)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::parse_quadratic;
    use crate::numbers::QuadraticNumber;

    fn q(s: &str) -> QuadraticNumber {
        parse_quadratic(s).unwrap()
    }

    fn doubling(b: Coord) -> AffineTorusMap {
        AffineTorusMap::integer(2, b, Lattice::square()).unwrap()
    }

    fn model(nu: u32) -> Result<LattesModel, LattesError> {
        LattesModel::new(doubling(Coord::origin()), nu, Coord::origin())
    }

    fn t(a: &str, b: &str) -> Transverse {
        Transverse::new(q(a), q(b))
    }

    #[test]
    fn construction() {
        let m = model(2).unwrap();
        assert!(m.flexible());
        assert_eq!(m.signature(), &[2, 2, 2, 2]);
        let r = LattesModel::new(doubling(Coord::ratio(1, 3, 0, 1)), 2, Coord::origin());
        assert!(matches!(r, Err(LattesError::NotLattesCompatible(_))));
        assert_eq!(model(3), Err(LattesError::WrongLatticeForGroup { nu: 3 }));
        let m4 = model(4).unwrap();
        assert!(!m4.flexible());
        assert_eq!(m4.signature(), &[2, 4, 4]);
        // b in the half lattice is fine for ν = 2.
        assert!(LattesModel::new(doubling(Coord::ratio(1, 2, 0, 1)), 2, Coord::origin()).is_ok());
    }

    #[test]
    fn line_types() {
        let m = model(2).unwrap();
        let closed = TorusLine::closed(1.into(), 1.into(), q("0")).unwrap();
        assert_eq!(
            theta_line_type(&m, &closed).unwrap(),
            ThetaLineType::ClosedCurveImage
        );
        let folded = TorusLine::irrational(q("sqrt(2)"), t("0", "1/2")).unwrap();
        let ThetaLineType::FoldedRay { fold_point } = theta_line_type(&m, &folded).unwrap() else {
            panic!()
        };
        assert_eq!(fold_point, reduce_to_fundamental(&Coord::ratio(1, 2, 0, 1)));
        let free = TorusLine::irrational(q("sqrt(2)"), t("sqrt(3)-1", "0")).unwrap();
        assert_eq!(
            theta_line_type(&m, &free).unwrap(),
            ThetaLineType::InjectiveGeodesicImage
        );
    }

    #[test]
    fn pairings() {
        let m = model(2).unwrap();
        let p = rho_pairing(&m, &[t("1/3", "0"), t("2/3", "0")]).unwrap();
        assert!(matches!(p, RhoPairing::Paired { shift: 1, .. }));
        let c = [t("1/5", "0"), t("2/5", "0"), t("4/5", "0"), t("3/5", "0")];
        let p = rho_pairing(&m, &c).unwrap();
        assert_eq!(
            p,
            RhoPairing::Paired {
                period: 4,
                shift: 2,
                pairing: vec![2, 3, 0, 1]
            }
        );
        // Orbit of (1/7, 1/3) under doubling: β alternates 1/3, 2/3 while α
        // runs through 1/7, 2/7, 4/7; the mirror orbit has α ∈ {3/7, 5/7, 6/7}.
        let mut c = vec![t("1/7", "1/3")];
        for _ in 0..5 {
            let last = c.last().unwrap();
            c.push(Transverse::new(
                last.alpha.mul_int(&2.into()),
                last.beta.mul_int(&2.into()),
            ));
        }
        assert_eq!(
            rho_pairing(&m, &c).unwrap(),
            RhoPairing::Unpaired { period: 6 }
        );
        let p = rho_pairing(&m, &[t("1/2", "0")]).unwrap();
        assert_eq!(p, RhoPairing::SelfPaired { period: 1 });
    }

    #[test]
    fn sphere_certificates() {
        let m = model(2).unwrap();
        let line = TorusLine::irrational(q("sqrt(2)"), t("sqrt(3)-1", "0")).unwrap();
        let seg = TorusSegment::new(line, q("0"), q("1/10")).unwrap();
        let SphereVerdict::Certified { certificate, .. } =
            certify_sphere_wandering(&m, &seg, 12).unwrap()
        else {
            panic!()
        };
        assert_eq!(certificate.mode, CertificateMode::WholeSegment);

        // Paired cycle {1/3, 2/3}: halved period 1, dilation −2 is negative so λ = 4.
        let line = TorusLine::irrational(q("sqrt(2)"), t("1/3", "0")).unwrap();
        let seg = TorusSegment::new(line, q("0"), q("1/10")).unwrap();
        let SphereVerdict::Certified {
            certificate,
            pairing,
            ..
        } = certify_sphere_wandering(&m, &seg, 12).unwrap()
        else {
            panic!()
        };
        assert!(matches!(pairing, Some(RhoPairing::Paired { shift: 1, .. })));
        assert_eq!(certificate.mode, CertificateMode::Subsegment);
        assert_eq!(certificate.period, Some(1));
        assert_eq!(certificate.expansion, Some(BigInt::from(4)));
    }

    #[test]
    fn rotation_models_are_not_flexible() {
        let m = model(4).unwrap();
        let line = TorusLine::irrational(q("sqrt(2)"), t("sqrt(3)-1", "0")).unwrap();
        let seg = TorusSegment::new(line, q("0"), q("0.0577")).unwrap();
        let SphereVerdict::NotFlexible { witness, .. } =
            certify_sphere_wandering(&m, &seg, 12).unwrap()
        else {
            panic!()
        };
        assert!(witness.unwrap().m <= 7);
    }
}
