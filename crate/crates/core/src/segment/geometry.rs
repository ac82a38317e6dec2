//! Chords: straight segments in lattice coordinates, tested for intersection
//! modulo `ℤ²`.
//!
//! Intersection is preserved by the affine change of basis between the plane
//! and lattice coordinates, so no value of `ω` is needed here. Exact chords
//! (all coordinates in one quadratic field) are decided with exact orientation
//! predicates. Float chords fall back to `f64` with an uncertainty band.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::lattice::{reduce_to_fundamental, Coord, Lattice, TorusPoint};
use crate::numbers::{NumberError, QuadraticNumber};
use crate::torus_map::{AffineTorusMap, IntMatrix};

/// Orientation values closer to zero than this (relative to the chord
/// lengths) are reported as undecidable in float mode.
pub const FLOAT_BAND: f64 = 1e-9;

/// Cap on lattice translates examined for a single chord pair.
pub const MAX_TRANSLATES: u64 = 20_000_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ChordError {
    Uncertain,
    TooManyTranslates(u64),
}

#[derive(Clone, PartialEq, Debug)]
pub enum Chord {
    Exact { a: Coord, b: Coord },
    Float { a: (f64, f64), b: (f64, f64) },
}

/// Where two chords meet, in lattice coordinates of the first chord's lift.
#[derive(Clone, PartialEq, Debug)]
pub struct Witness {
    pub exact: Option<Coord>,
    pub approx: (f64, f64),
}

impl Witness {
    pub fn torus_point(&self) -> Option<TorusPoint> {
        self.exact.as_ref().map(reduce_to_fundamental)
    }

    /// Float witness reduced into `[0, 1)²`.
    pub fn reduced_approx(&self) -> (f64, f64) {
        match self.torus_point() {
            Some(p) => p.coord().to_f64(),
            None => (self.approx.0.rem_euclid(1.0), self.approx.1.rem_euclid(1.0)),
        }
    }
}

fn common_radicand<'a>(xs: impl IntoIterator<Item = &'a QuadraticNumber>) -> Option<u64> {
    let mut d = 0;
    for x in xs {
        match (d, x.radicand()) {
            (_, 0) => {}
            (0, e) => d = e,
            (a, e) if a == e => {}
            _ => return None,
        }
    }
    Some(d)
}

impl Chord {
    /// Exact chord when both endpoints share a field, float otherwise.
    pub fn new(a: Coord, b: Coord) -> Chord {
        if common_radicand([&a.x, &a.y, &b.x, &b.y]).is_some() {
            Chord::Exact { a, b }
        } else {
            Chord::Float {
                a: a.to_f64(),
                b: b.to_f64(),
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Chord::Exact { .. })
    }

    pub fn endpoints_f64(&self) -> ((f64, f64), (f64, f64)) {
        match self {
            Chord::Exact { a, b } => (a.to_f64(), b.to_f64()),
            Chord::Float { a, b } => (*a, *b),
        }
    }

    pub fn midpoint_f64(&self) -> (f64, f64) {
        let (a, b) = self.endpoints_f64();
        ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
    }

    /// Euclidean length in the plane.
    pub fn length(&self, lat: &Lattice) -> f64 {
        let (a, b) = self.endpoints_f64();
        (lat.embed_f64(b) - lat.embed_f64(a)).norm()
    }

    /// Translate by an integer vector.
    pub fn shift(&self, n: &BigInt, m: &BigInt) -> Chord {
        match self {
            Chord::Exact { a, b } => Chord::Exact {
                a: a.shift(n, m),
                b: b.shift(n, m),
            },
            Chord::Float { a, b } => {
                let (fx, fy) = (n.to_f64().unwrap_or(0.0), m.to_f64().unwrap_or(0.0));
                Chord::Float {
                    a: (a.0 + fx, a.1 + fy),
                    b: (b.0 + fx, b.1 + fy),
                }
            }
        }
    }

    /// The lift translated so that its midpoint lies in `[0, 1)²`.
    pub fn normalized(&self) -> Chord {
        let (n, m) = match self {
            Chord::Exact { a, b } => {
                let half = QuadraticNumber::ratio(1, 2).expect("literal");
                let mx = (&a.x + &b.x) * &half;
                let my = (&a.y + &b.y) * &half;
                (-mx.floor(), -my.floor())
            }
            Chord::Float { .. } => {
                let (mx, my) = self.midpoint_f64();
                (
                    BigInt::from(-(mx.floor() as i64)),
                    BigInt::from(-(my.floor() as i64)),
                )
            }
        };
        self.shift(&n, &m)
    }

    /// Image under the plane lift of the map.
    pub fn map_lift(&self, map: &AffineTorusMap) -> Chord {
        match self {
            Chord::Exact { a, b } => match (map.apply_lift(a), map.apply_lift(b)) {
                (Ok(a), Ok(b)) => Chord::new(a, b),
                _ => Chord::Float {
                    a: map.apply_lift_f64(a.to_f64()),
                    b: map.apply_lift_f64(b.to_f64()),
                },
            },
            Chord::Float { a, b } => Chord::Float {
                a: map.apply_lift_f64(*a),
                b: map.apply_lift_f64(*b),
            },
        }
    }

    /// Image under `z ↦ center + R·(z − center)` with `R` an integer matrix.
    pub fn rotate_about(&self, rotation: &IntMatrix, center: &Coord) -> Chord {
        let exact = |p: &Coord| -> Result<Coord, NumberError> {
            rotation.apply(&p.checked_sub(center)?)?.checked_add(center)
        };
        let float = |p: (f64, f64)| {
            let c = center.to_f64();
            let (x, y) = rotation.apply_f64((p.0 - c.0, p.1 - c.1));
            (x + c.0, y + c.1)
        };
        match self {
            Chord::Exact { a, b } => match (exact(a), exact(b)) {
                (Ok(a), Ok(b)) => Chord::new(a, b),
                _ => Chord::Float {
                    a: float(a.to_f64()),
                    b: float(b.to_f64()),
                },
            },
            Chord::Float { a, b } => Chord::Float {
                a: float(*a),
                b: float(*b),
            },
        }
    }

    /// Intersection of the two lifts in the plane (no lattice translates).
    pub fn meets_in_plane(&self, other: &Chord) -> Result<Option<Witness>, ChordError> {
        match (self, other) {
            (Chord::Exact { a, b }, Chord::Exact { a: c, b: d })
                if common_radicand([&a.x, &a.y, &b.x, &b.y, &c.x, &c.y, &d.x, &d.y]).is_some() =>
            {
                Ok(exact_meet(a, b, c, d).map(|w| Witness {
                    approx: w.to_f64(),
                    exact: Some(w),
                }))
            }
            _ => {
                let (a, b) = self.endpoints_f64();
                let (c, d) = other.endpoints_f64();
                float_meet(a, b, c, d).map(|o| {
                    o.map(|w| Witness {
                        exact: None,
                        approx: w,
                    })
                })
            }
        }
    }

    /// Whether the projections to the torus meet: some integer translate of
    /// `other` meets `self`. Translates are enumerated over the integer
    /// points of the Minkowski difference `self − other`, with a float
    /// pre-filter and an exact (or banded float) decision per candidate.
    pub fn meets_mod_lattice(&self, other: &Chord) -> Result<Option<Witness>, ChordError> {
        let (a, b) = self.endpoints_f64();
        let (c, d) = other.endpoints_f64();
        let verts = [
            (a.0 - c.0, a.1 - c.1),
            (a.0 - d.0, a.1 - d.1),
            (b.0 - c.0, b.1 - c.1),
            (b.0 - d.0, b.1 - d.1),
        ];
        let scale = verts
            .iter()
            .fold(1.0f64, |m, v| m.max(v.0.abs()).max(v.1.abs()));
        let margin = 1e-7 * scale;
        let xmin = verts.iter().map(|v| v.0).fold(f64::INFINITY, f64::min) - margin;
        let xmax = verts.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max) + margin;
        let (n_lo, n_hi) = (xmin.ceil() as i64, xmax.floor() as i64);
        let mut examined: u64 = 0;
        let mut uncertain = false;
        for n in n_lo..=n_hi {
            let Some((ylo, yhi)) = column_range(&verts, n as f64, margin) else {
                continue;
            };
            let (m_lo, m_hi) = ((ylo - margin).ceil() as i64, (yhi + margin).floor() as i64);
            if m_hi >= m_lo {
                examined += (m_hi - m_lo + 1) as u64;
            }
            if examined > MAX_TRANSLATES {
                return Err(ChordError::TooManyTranslates(examined));
            }
            for m in m_lo..=m_hi {
                let shifted = other.shift(&BigInt::from(n), &BigInt::from(m));
                match self.meets_in_plane(&shifted) {
                    Ok(Some(w)) => return Ok(Some(w)),
                    Ok(None) => {}
                    Err(ChordError::Uncertain) => uncertain = true,
                    Err(e) => return Err(e),
                }
            }
        }
        if uncertain {
            Err(ChordError::Uncertain)
        } else {
            Ok(None)
        }
    }
}

/// `y`-extent of the convex hull of `verts` on the vertical line `x = x0`.
fn column_range(verts: &[(f64, f64); 4], x0: f64, margin: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..4 {
        for j in i..4 {
            let (p, q) = (verts[i], verts[j]);
            let (xl, xh) = (p.0.min(q.0), p.0.max(q.0));
            if x0 < xl - margin || x0 > xh + margin {
                continue;
            }
            if (q.0 - p.0).abs() <= margin {
                lo = lo.min(p.1.min(q.1));
                hi = hi.max(p.1.max(q.1));
            } else {
                let t = ((x0 - p.0) / (q.0 - p.0)).clamp(0.0, 1.0);
                let y = p.1 + t * (q.1 - p.1);
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn cross(o: &Coord, p: &Coord, q: &Coord) -> QuadraticNumber {
    let (ux, uy) = (&p.x - &o.x, &p.y - &o.y);
    let (vx, vy) = (&q.x - &o.x, &q.y - &o.y);
    &ux * &vy - &uy * &vx
}

fn within(a: &Coord, b: &Coord, p: &Coord) -> bool {
    let between = |u: &QuadraticNumber, v: &QuadraticNumber, w: &QuadraticNumber| {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        lo <= w && w <= hi
    };
    between(&a.x, &b.x, &p.x) && between(&a.y, &b.y, &p.y)
}

/// Exact intersection of `[a, b]` and `[c, d]`; all coordinates share a field.
fn exact_meet(a: &Coord, b: &Coord, c: &Coord, d: &Coord) -> Option<Coord> {
    let o1 = cross(a, b, c).signum();
    let o2 = cross(a, b, d).signum();
    let o3 = cross(c, d, a).signum();
    let o4 = cross(c, d, b).signum();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        // a + t·(b − a), t = ((c − a) × (d − c)) / ((b − a) × (d − c))
        let (ex, ey) = (&b.x - &a.x, &b.y - &a.y);
        let (fx, fy) = (&d.x - &c.x, &d.y - &c.y);
        let (gx, gy) = (&c.x - &a.x, &c.y - &a.y);
        let denom = &ex * &fy - &ey * &fx;
        let t = (&gx * &fy - &gy * &fx) / denom;
        return Some(Coord::new(&a.x + &(&t * &ex), &a.y + &(&t * &ey)));
    }
    if o1 == 0 && within(a, b, c) {
        return Some(c.clone());
    }
    if o2 == 0 && within(a, b, d) {
        return Some(d.clone());
    }
    if o3 == 0 && within(c, d, a) {
        return Some(a.clone());
    }
    if o4 == 0 && within(c, d, b) {
        return Some(b.clone());
    }
    None
}

fn float_meet(
    a: (f64, f64),
    b: (f64, f64),
    c: (f64, f64),
    d: (f64, f64),
) -> Result<Option<(f64, f64)>, ChordError> {
    let cr = |o: (f64, f64), p: (f64, f64), q: (f64, f64)| {
        (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0)
    };
    let len = |p: (f64, f64), q: (f64, f64)| ((q.0 - p.0).powi(2) + (q.1 - p.1).powi(2)).sqrt();
    let (lab, lcd) = (len(a, b), len(c, d));
    // Normalize each orientation by the length of the chord it is measured against.
    let o1 = cr(a, b, c) / lab;
    let o2 = cr(a, b, d) / lab;
    let o3 = cr(c, d, a) / lcd;
    let o4 = cr(c, d, b) / lcd;
    if [o1, o2, o3, o4].iter().any(|o| o.abs() < FLOAT_BAND) {
        // Far-apart bounding boxes are still decidable.
        let sep = |p: (f64, f64), q: (f64, f64), r: (f64, f64), s: (f64, f64)| {
            p.0.max(q.0) + FLOAT_BAND < r.0.min(s.0)
                || r.0.max(s.0) + FLOAT_BAND < p.0.min(q.0)
                || p.1.max(q.1) + FLOAT_BAND < r.1.min(s.1)
                || r.1.max(s.1) + FLOAT_BAND < p.1.min(q.1)
        };
        if sep(a, b, c, d) {
            return Ok(None);
        }
        return Err(ChordError::Uncertain);
    }
    if o1.signum() != o2.signum() && o3.signum() != o4.signum() {
        let t = o3 * lcd / (o3 * lcd - o4 * lcd);
        return Ok(Some((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))));
    }
    Ok(None)
}

/// Whether every coordinate of the chord is rational.
pub fn is_rational_chord(c: &Chord) -> bool {
    match c {
        Chord::Exact { a, b } => a.is_rational() && b.is_rational(),
        Chord::Float { .. } => false,
    }
}
