mod common;

use common::lattice;
use lattes_wander::lattes::{rho_pairing, sphere_images_meet, wp, LattesModel, RhoPairing};
use lattes_wander::lattice::{Coord, Lattice};
use lattes_wander::line_orbit::{classify_line, LineOrbitClass, TorusLine, Transverse};
use lattes_wander::numbers::QuadraticNumber;
use lattes_wander::segment::TorusSegment;
use lattes_wander::torus_map::AffineTorusMap;
use num_complex::Complex64;
use proptest::prelude::*;

const OMEGAS: [&str; 4] = ["i", "2i", "1/2+sqrt(3)/2*i", "1/3+5/4*i"];
const TOL: f64 = 1e-12;

fn ratio(n: i64, d: i64) -> QuadraticNumber {
    QuadraticNumber::ratio(n, d).unwrap()
}

fn half(n: i64) -> QuadraticNumber {
    ratio(n, 2)
}

/// Distance between segments `[p0, p1]` and `[q0, q1]` in the plane.
fn segment_distance(p: [(f64, f64); 2], q: [(f64, f64); 2]) -> ((f64, f64), (f64, f64), f64) {
    fn closest(a: (f64, f64), b: (f64, f64), x: (f64, f64)) -> (f64, f64) {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let t = (((x.0 - a.0) * dx + (x.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        (a.0 + t * dx, a.1 + t * dy)
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let (d1, d2) = (cross(q[0], q[1], p[0]), cross(q[0], q[1], p[1]));
    let (d3, d4) = (cross(p[0], p[1], q[0]), cross(p[0], p[1], q[1]));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        let t = d1 / (d1 - d2);
        let x = (
            p[0].0 + t * (p[1].0 - p[0].0),
            p[0].1 + t * (p[1].1 - p[0].1),
        );
        return (x, x, 0.0);
    }
    let cands = [
        (p[0], closest(q[0], q[1], p[0])),
        (p[1], closest(q[0], q[1], p[1])),
        (closest(p[0], p[1], q[0]), q[0]),
        (closest(p[0], p[1], q[1]), q[1]),
    ];
    cands
        .into_iter()
        .map(|(a, b)| (a, b, ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()))
        .min_by(|x, y| x.2.total_cmp(&y.2))
        .unwrap()
}

/// Closest approach of `x` to the translates of `y`, in lattice coordinates.
fn torus_distance(x: [(f64, f64); 2], y: [(f64, f64); 2]) -> ((f64, f64), (f64, f64), f64) {
    let mut best = ((0.0, 0.0), (0.0, 0.0), f64::INFINITY);
    for n in -3..=3 {
        for m in -3..=3 {
            let (n, m) = (n as f64, m as f64);
            let shifted = [(y[0].0 + n, y[0].1 + m), (y[1].0 + n, y[1].1 + m)];
            let d = segment_distance(x, shifted);
            if d.2 < best.2 {
                best = d;
            }
        }
    }
    best
}

fn closed_segment() -> impl Strategy<Value = TorusSegment> {
    (
        0i64..12,
        0i64..12,
        prop::sample::select(vec![(1i64, 0i64), (0, 1), (1, 1), (1, -2), (3, 1)]),
        1i64..12,
    )
        .prop_map(|(x, y, (dx, dy), len)| {
            let p = Coord::new(ratio(x, 12), ratio(y, 12));
            let q = p
                .checked_add(&Coord::new(ratio(dx * len, 24), ratio(dy * len, 24)))
                .unwrap();
            TorusSegment::from_endpoints(&p, &q).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn involution_is_invisible_to_theta(
        w in prop::sample::select(OMEGAS.to_vec()),
        qx in 0i64..2,
        qy in 0i64..2,
        u in 0.03f64..0.97,
        v in 0.03f64..0.97,
    ) {
        let lat = lattice(w);
        let z0 = lat.embed_coord(&Coord::new(half(qx), half(qy)));
        let z = lat.embed_f64((u, v));
        prop_assume!((z - z0).norm() > 0.05 && (z - 2.0 * z0).norm() > 0.05);
        let theta = wp(&lat, z - z0, TOL).unwrap();
        let mirrored = wp(&lat, (2.0 * z0 - z) - z0, TOL).unwrap();
        prop_assert!((theta - mirrored).norm() <= 1e-9 * theta.norm().max(1.0), "{theta} vs {mirrored}");
    }

    #[test]
    fn sphere_meeting_matches_float_proximity(x in closed_segment(), y in closed_segment(), z0 in 0usize..3) {
        let lat = Lattice::square();
        let centre = [(0, 0), (1, 0), (1, 1)][z0];
        let centre = Coord::new(half(centre.0), half(centre.1));
        let map = AffineTorusMap::integer(2, Coord::origin(), lat.clone()).unwrap();
        let model = LattesModel::new(map, 2, centre.clone()).unwrap();
        let meet = sphere_images_meet(&model, &x, &y).unwrap();
        let (cx, cy) = centre.to_f64();
        let (xa, xb) = x.endpoints_f64();
        let (ya, yb) = y.endpoints_f64();
        let reflect = |p: (f64, f64)| (2.0 * cx - p.0, 2.0 * cy - p.1);
        let direct = torus_distance([xa, xb], [ya, yb]);
        let mirrored = torus_distance([xa, xb], [reflect(ya), reflect(yb)]);
        let (px, py, d) = if direct.2 <= mirrored.2 { direct } else { mirrored };
        if meet {
            prop_assert!(d < 1e-9, "reduction says meet, distance {d}");
            let theta = |p: (f64, f64)| wp(&lat, lat.embed_f64((p.0 - cx, p.1 - cy)), TOL);
            if let (Ok(a), Ok(b)) = (theta(px), theta(py)) {
                prop_assert!((a - b).norm() <= 1e-6 * a.norm().max(1.0), "{a} vs {b}");
            }
        } else {
            prop_assert!(d > 1e-12, "reduction says disjoint, distance {d}");
        }
    }

    #[test]
    fn doubled_centre_set_is_forward_invariant(
        a in prop::sample::select(vec![2i64, -2, 3, -3]),
        w in prop::sample::select(OMEGAS.to_vec()),
        b in (0i64..2, 0i64..2),
        z0 in (0i64..4, 0i64..4),
    ) {
        let lat = lattice(w);
        let map = AffineTorusMap::integer(a, Coord::new(half(b.0), half(b.1)), lat).unwrap();
        let Ok(model) = LattesModel::new(map.clone(), 2, Coord::new(ratio(z0.0, 4), ratio(z0.1, 4))) else {
            return Ok(());
        };
        let q = model.q_points();
        for p in &q {
            prop_assert!(q.contains(&map.apply(p.coord()).unwrap()));
        }
    }

    #[test]
    fn pairings_are_involutions(
        a in prop::sample::select(vec![2i64, -2, 3]),
        den in 1i64..30,
        al in 0i64..30,
        be in 0i64..30,
    ) {
        let map = AffineTorusMap::integer(a, Coord::origin(), Lattice::square()).unwrap();
        let model = LattesModel::new(map.clone(), 2, Coord::origin()).unwrap();
        let line = TorusLine::irrational(
            QuadraticNumber::sqrt_of(2),
            Transverse::new(ratio(al % den, den), ratio(be % den, den)),
        ).unwrap();
        let class = classify_line(&map, &line).unwrap();
        let LineOrbitClass::EventuallyPeriodic { .. } = &class else { unreachable!() };
        let pairing = rho_pairing(&model, class.cycle().unwrap()).unwrap();
        if let RhoPairing::Paired { period, shift, pairing } = pairing {
            prop_assert_eq!(period % 2, 0);
            prop_assert_eq!(2 * shift, period);
            for j in 0..period {
                prop_assert_eq!(pairing[pairing[j]], j);
            }
        }
    }
}

#[test]
fn theta_is_even_about_each_half_period() {
    let lat = Lattice::hexagonal();
    for p in [(0.5, 0.0), (0.0, 0.5), (0.5, 0.5)] {
        let c = lat.embed_f64(p);
        let z = Complex64::new(0.123, 0.0456);
        let a = wp(&lat, c + z, TOL).unwrap();
        let b = wp(&lat, c - z, TOL).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm().max(1.0));
    }
}
