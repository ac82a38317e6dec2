#![allow(dead_code)]

pub mod biquad;

use biquad::{Bq, Slope, Strip, Q};
use lattes_wander::lattice::{Coord, Lattice};
use lattes_wander::line_orbit::TorusLine;
use lattes_wander::numbers::{parse_complex, parse_quadratic, QuadraticNumber};
use lattes_wander::segment::TorusSegment;
use lattes_wander::torus_map::AffineTorusMap;
use num_rational::BigRational;
use num_traits::Zero;

pub fn qn(s: &str) -> QuadraticNumber {
    parse_quadratic(s).unwrap()
}

pub fn lattice(omega: &str) -> Lattice {
    Lattice::new(parse_complex(omega).unwrap()).unwrap()
}

pub fn coord(x: &str, y: &str) -> Coord {
    Coord::new(qn(x), qn(y))
}

pub fn rational_of(x: &QuadraticNumber) -> Q {
    assert!(x.is_rational());
    BigRational::new(x.numerator_rational().clone(), x.denominator().clone())
}

/// The oracle's picture of an irrational-slope segment: start point and
/// parameter length, with the slope split as `c·√p`.
pub fn strip_of(seg: &TorusSegment, field: u64) -> (Slope, Strip) {
    let s = match seg.line() {
        TorusLine::Irrational { slope, .. } => slope.clone(),
        TorusLine::Closed { .. } => panic!("oracle handles irrational slopes only"),
    };
    assert!(s.numerator_rational().is_zero());
    let p = s.radicand() as i64;
    let q = field as i64;
    let c = BigRational::new(s.numerator_surd().clone(), s.denominator().clone());
    // base + lift + t_lo·(1, s), assembled in the oracle's field since the
    // sum may need two radicands.
    let base = seg.line().base_point();
    let (lx, ly) = seg.lift();
    let int = |n: &num_bigint::BigInt| Bq::rational(p, q, BigRational::from_integer(n.clone()));
    let t0 = Bq::rational(p, q, rational_of(seg.t_lo()));
    let sv = Bq::from_scalar(p, q, &s);
    let strip = Strip {
        start: (
            &(&Bq::from_scalar(p, q, &base.x) + &int(lx)) + &t0,
            &(&Bq::from_scalar(p, q, &base.y) + &int(ly)) + &(&t0 * &sv),
        ),
        len: rational_of(&(seg.t_hi() - seg.t_lo())),
    };
    (Slope::new(c, p, q), strip)
}

pub fn b_of(map: &AffineTorusMap) -> (Q, Q) {
    (rational_of(map.b().x()), rational_of(map.b().y()))
}

/// Brute force: the first `count` oracle iterates are pairwise disjoint.
pub fn oracle_disjoint(
    map: &AffineTorusMap,
    seg: &TorusSegment,
    field: u64,
    count: usize,
) -> Result<(), String> {
    let a = map.integer_multiplier().unwrap();
    let a: i64 = a.try_into().unwrap();
    let (slope, first) = strip_of(seg, field);
    if !biquad::meet_mod_z2(&slope, &first, &first) {
        return Err("oracle misses a self-meet".into());
    }
    let b = b_of(map);
    let mut its = vec![first];
    for _ in 1..count {
        its.push(biquad::iterate(its.last().unwrap(), &slope, a, &b));
    }
    for j in 0..count {
        for i in 0..j {
            if biquad::meet_mod_z2(&slope, &its[i], &its[j]) {
                return Err(format!("oracle: iterates {i} and {j} meet"));
            }
        }
    }
    Ok(())
}
