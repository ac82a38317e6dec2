//! Collision search: some iterate meets an earlier iterate (or a rotated copy
//! of one) modulo `Λ`.

use serde::Serialize;

use super::{segments_intersect, Chord, SegmentError, TorusSegment, Witness};
use crate::lattice::{Coord, Lattice, TorusPoint};
use crate::numbers::{ComplexNumber, QuadraticNumber};
use crate::torus_map::{multiplication_matrix, AffineTorusMap, IntMatrix, MultiplierClass};

/// Iterate cap when no length bound applies (integer multiplier, plain mode).
pub const DEFAULT_BUDGET: usize = 20;

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum BoundKind {
    /// Angle between consecutive iterates.
    Angle(f64),
    /// Order of the rotation group; the angle is bounded below by `π/3`.
    GroupOrder(u32),
}

/// Length above which two segments in the given relative position, with
/// midpoints in the fundamental parallelogram, must meet modulo `Λ`.
pub fn collision_bound(lat: &Lattice, kind: BoundKind) -> f64 {
    let s = match kind {
        BoundKind::Angle(theta) => theta.sin().abs(),
        BoundKind::GroupOrder(_) => (std::f64::consts::PI / 3.0).sin(),
    };
    2.0 * (1.0 + lat.omega_norm()) / s
}

/// Index `m` by which a collision is forced: the first `n` with
/// `expansionⁿ·len > bound`, plus one.
pub fn guaranteed_collision_index(bound: f64, len: f64, expansion: f64) -> usize {
    let l = (bound / len).ln() / expansion.ln();
    (l.floor() + 2.0).max(1.0) as usize
}

/// The rotation `z ↦ z0 + ζ·(z − z0)` with `ζ = e^{2πi/ν}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupAction {
    nu: u32,
    center: Coord,
    rotation: IntMatrix,
}

impl GroupAction {
    pub fn new(lat: &Lattice, nu: u32, center: Coord) -> Result<Self, SegmentError> {
        let zeta = root_of_unity(nu).ok_or(SegmentError::WrongLatticeForGroup { nu })?;
        let rotation =
            multiplication_matrix(&zeta, lat).ok_or(SegmentError::WrongLatticeForGroup { nu })?;
        Ok(GroupAction {
            nu,
            center,
            rotation,
        })
    }

    pub fn order(&self) -> u32 {
        self.nu
    }

    pub fn center(&self) -> &Coord {
        &self.center
    }

    /// The rotation in lattice coordinates.
    pub fn rotation(&self) -> &IntMatrix {
        &self.rotation
    }
}

fn root_of_unity(nu: u32) -> Option<ComplexNumber> {
    let half = || QuadraticNumber::ratio(1, 2).expect("literal");
    let h3 = || &QuadraticNumber::sqrt_of(3) * &half();
    Some(match nu {
        1 => ComplexNumber::real(QuadraticNumber::one()),
        2 => ComplexNumber::real(QuadraticNumber::integer(-1)),
        3 => ComplexNumber::new(-half(), h3()),
        4 => ComplexNumber::i(),
        6 => ComplexNumber::new(half(), h3()),
        _ => return None,
    })
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CollisionCertificate {
    pub n: usize,
    pub m: usize,
    pub k: u32,
    /// Witness in lattice coordinates, reduced into `[0, 1)²`.
    pub witness: (f64, f64),
    pub witness_exact: Option<TorusPoint>,
    pub exact: bool,
    pub bound_used: Option<f64>,
    pub budget: usize,
    /// Cells skipped because the float test was within its band.
    pub uncertain_cells: usize,
}

/// One iterate: always a chord, and a segment when the multiplier is an
/// integer and the line is carried along exactly.
#[derive(Clone, Debug)]
struct Piece {
    seg: Option<TorusSegment>,
    chord: Chord,
}

impl Piece {
    fn of(seg: &TorusSegment) -> Piece {
        Piece {
            seg: Some(seg.clone()),
            chord: seg.chord().normalized(),
        }
    }

    fn next(&self, map: &AffineTorusMap) -> Result<Piece, SegmentError> {
        if let Some(s) = &self.seg {
            if map.integer_multiplier().is_some() {
                return Ok(Piece::of(&s.image_under(map)?));
            }
        }
        Ok(Piece {
            seg: None,
            chord: self.chord.map_lift(map).normalized(),
        })
    }
}

/// The chords `B₀, B₁, …, B_{count−1}` with each midpoint moved into the
/// fundamental parallelogram.
pub fn normalized_iterates(map: &AffineTorusMap, seg: &TorusSegment, count: usize) -> Vec<Chord> {
    let mut out = Vec::with_capacity(count);
    let mut cur = seg.chord().normalized();
    for _ in 0..count {
        let next = cur.map_lift(map).normalized();
        out.push(std::mem::replace(&mut cur, next));
    }
    out
}

/// Length bound and default budget for this search.
fn default_budget(
    map: &AffineTorusMap,
    seg: &TorusSegment,
    group: Option<&GroupAction>,
) -> (Option<f64>, usize) {
    let lat = map.lattice();
    let bound = match (group, map.classify()) {
        (Some(g), _) if g.order() > 2 => {
            Some(collision_bound(lat, BoundKind::GroupOrder(g.order())))
        }
        (_, MultiplierClass::NonRealMultiplier { theta, .. }) => {
            Some(collision_bound(lat, BoundKind::Angle(theta)))
        }
        _ => None,
    };
    let budget = match bound {
        Some(b) => {
            let l = (b / seg.length(lat)).ln() / map.expansion().ln();
            (l.ceil() + 2.0).max(1.0) as usize
        }
        None => DEFAULT_BUDGET,
    };
    (bound, budget)
}

fn test_cell(
    lat: &Lattice,
    later: &Piece,
    earlier: &Piece,
    group: Option<&GroupAction>,
    k: u32,
    rotations: &[IntMatrix],
) -> Result<Option<Witness>, SegmentError> {
    if let (Some(a), Some(b)) = (&later.seg, &earlier.seg) {
        match (k, group) {
            (0, _) => return segments_intersect(lat, a, b),
            (1, Some(g)) if g.order() == 2 => {
                return segments_intersect(lat, a, &b.reflect_through(g.center())?)
            }
            _ => {}
        }
    }
    let other = match group {
        Some(g) if k > 0 => earlier
            .chord
            .rotate_about(&rotations[k as usize], g.center()),
        _ => earlier.chord.clone(),
    };
    Ok(later.chord.meets_mod_lattice(&other)?)
}

/// Search cells `(m, n, k)` with `n < m ≤ budget`, `k < ν`, ordered by `m`,
/// then `n`, then `k`, for `Aᵐ(S) ∩ ρᵏ(Aⁿ(S)) ≠ ∅`.
pub fn find_collision(
    map: &AffineTorusMap,
    seg: &TorusSegment,
    group: Option<&GroupAction>,
    budget: Option<usize>,
) -> Result<CollisionCertificate, SegmentError> {
    let lat = map.lattice();
    let (bound, default) = default_budget(map, seg, group);
    let budget = budget.unwrap_or(default);
    let nu = group.map_or(1, GroupAction::order);
    let rotations: Vec<IntMatrix> = match group {
        Some(g) => (0..nu).map(|k| g.rotation().pow(k)).collect(),
        None => vec![IntMatrix::identity()],
    };
    let mut pieces = vec![Piece::of(seg)];
    let mut uncertain = 0;
    for m in 1..=budget {
        let next = pieces[m - 1].next(map)?;
        pieces.push(next);
        for n in 0..m {
            for k in 0..nu {
                let hit = match test_cell(lat, &pieces[m], &pieces[n], group, k, &rotations) {
                    Ok(h) => h,
                    Err(SegmentError::UncertainAtTolerance) => {
                        uncertain += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                if let Some(w) = hit {
                    return Ok(CollisionCertificate {
                        n,
                        m,
                        k,
                        witness: w.reduced_approx(),
                        exact: w.exact.is_some(),
                        witness_exact: w.torus_point(),
                        bound_used: bound,
                        budget,
                        uncertain_cells: uncertain,
                    });
                }
            }
        }
    }
    Err(SegmentError::NoCollisionWithinBudget { budget })
}

impl CollisionCertificate {
    /// Recompute iterates `n` and `m` and test the claimed cell again.
    pub fn reverify(
        &self,
        map: &AffineTorusMap,
        seg: &TorusSegment,
        group: Option<&GroupAction>,
    ) -> Result<bool, SegmentError> {
        if self.n >= self.m {
            return Ok(false);
        }
        let nu = group.map_or(1, GroupAction::order);
        if self.k >= nu {
            return Ok(false);
        }
        let rotations: Vec<IntMatrix> = match group {
            Some(g) => (0..nu).map(|k| g.rotation().pow(k)).collect(),
            None => vec![IntMatrix::identity()],
        };
        let mut cur = Piece::of(seg);
        let mut earlier = None;
        for i in 0..=self.m {
            if i == self.n {
                earlier = Some(cur.clone());
            }
            if i < self.m {
                cur = cur.next(map)?;
            }
        }
        let earlier = earlier.expect("n < m");
        match test_cell(map.lattice(), &cur, &earlier, group, self.k, &rotations) {
            Ok(hit) => Ok(hit.is_some()),
            Err(SegmentError::UncertainAtTolerance) => Ok(false),
            Err(e) => Err(e),
        }
    }
}
