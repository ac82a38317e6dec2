mod common;

use std::collections::BTreeSet;

use common::{coord, lattice};
use lattes_wander::lattice::{half_lattice_q, reduce_to_fundamental, Coord, Lattice};
use lattes_wander::numbers::{parse_complex, ComplexNumber, QuadraticNumber};
use lattes_wander::torus_map::{AffineTorusMap, TorusMapError};
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

const OMEGAS: [&str; 5] = ["i", "2i", "1/2+i", "1/2+sqrt(3)/2*i", "1/3+5/4*i"];

/// Multipliers paired with lattices they preserve.
const COVERINGS: [(&str, &str); 9] = [
    ("2", "i"),
    ("-3", "1/3+5/4*i"),
    ("2", "1/2+sqrt(3)/2*i"),
    ("1+i", "i"),
    ("2i", "i"),
    ("1-2i", "i"),
    ("2i", "2i"),
    ("sqrt(3)*i", "1/2+sqrt(3)/2*i"),
    ("3/2+sqrt(3)/2*i", "1/2+sqrt(3)/2*i"),
];

fn rational(den: i64) -> impl Strategy<Value = QuadraticNumber> {
    (-3 * den..3 * den).prop_map(move |n| QuadraticNumber::ratio(n, den).unwrap())
}

fn point() -> impl Strategy<Value = Coord> {
    (1i64..30)
        .prop_flat_map(|d| (rational(d), rational(d)))
        .prop_map(|(x, y)| Coord::new(x, y))
}

fn covering() -> impl Strategy<Value = AffineTorusMap> {
    (prop::sample::select(COVERINGS.to_vec()), 0i64..4, 0i64..4).prop_map(|((a, w), bx, by)| {
        let lat = lattice(w);
        let b = lat
            .complex_of(&Coord::new(
                QuadraticNumber::ratio(bx, 4).unwrap(),
                QuadraticNumber::ratio(by, 4).unwrap(),
            ))
            .unwrap();
        AffineTorusMap::new(parse_complex(a).unwrap(), b, lat).unwrap()
    })
}

/// Distance from `z` to the nearest lattice vector.
fn lattice_distance(lat: &Lattice, z: Complex64) -> f64 {
    let (x, y) = lat.coords_f64(z);
    (z - lat.embed_f64((x.round(), y.round()))).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reduction_is_a_retraction(p in point(), w in prop::sample::select(OMEGAS.to_vec())) {
        let r = reduce_to_fundamental(&p);
        prop_assert_eq!(reduce_to_fundamental(r.coord()), r.clone());
        let lat = lattice(w);
        let d = lat.embed_coord(r.coord()) - lat.embed_coord(&p);
        prop_assert!(lattice_distance(&lat, d) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn matrix_matches_complex_multiplication(map in covering(), p in point()) {
        let lat = map.lattice();
        let image = map.apply(&p).unwrap();
        let a = map.a().to_complex64();
        let b = lat.embed(map.b());
        let d = lat.embed(&image) - (a * lat.embed_coord(&p) + b);
        prop_assert!(lattice_distance(lat, d) < 1e-10, "{}", d);
    }

    #[test]
    fn covering_is_degree_to_one(map in covering(), q in point()) {
        // Preimages are M⁻¹(q − b + k) for k ∈ ℤ²; ℤ²/Mℤ² has representatives
        // in the box [0, det)².
        let m = map.matrix();
        let det = m.det();
        let n: i64 = (&det).try_into().unwrap();
        let target = reduce_to_fundamental(&q);
        let shifted = q.checked_sub(map.b().coord()).unwrap();
        let frac = |num: QuadraticNumber| num.checked_div(&QuadraticNumber::from_big(det.clone())).unwrap();
        let mut found = BTreeSet::new();
        for kx in 0..n.abs() {
            for ky in 0..n.abs() {
                let v = shifted.shift(&BigInt::from(kx), &BigInt::from(ky));
                // adj(M) = [[s, −r], [−q, p]]
                let x = frac(&v.x.mul_int(&m.s) - &v.y.mul_int(&m.r));
                let y = frac(&v.y.mul_int(&m.p) - &v.x.mul_int(&m.q));
                let pre = reduce_to_fundamental(&Coord::new(x, y));
                prop_assert_eq!(map.apply(pre.coord()).unwrap(), target.clone());
                found.insert(pre.to_string());
            }
        }
        prop_assert_eq!(BigInt::from(found.len()), det.clone());
        prop_assert_eq!(&det, map.degree());
    }

    #[test]
    fn real_non_integer_multiplier_is_rejected(
        num in -40i64..40,
        den in 2i64..9,
        surd in prop::sample::select(vec![0u64, 2, 3, 5]),
        w in prop::sample::select(OMEGAS.to_vec()),
    ) {
        let re = QuadraticNumber::new(num.into(), 1.into(), den.into(), surd).unwrap();
        prop_assume!(!re.is_integer());
        let r = AffineTorusMap::new(ComplexNumber::real(re), ComplexNumber::real(QuadraticNumber::zero()), lattice(w));
        prop_assert!(matches!(r, Err(TorusMapError::NotACovering(_))), "{:?}", r);
    }

    #[test]
    fn half_lattice_points_double_to_twice_the_center(z0 in point()) {
        let two = BigInt::from(2);
        let centre = reduce_to_fundamental(&Coord::new(z0.x.mul_int(&two), z0.y.mul_int(&two)));
        for q in half_lattice_q(&z0) {
            let doubled = Coord::new(q.x().mul_int(&two), q.y().mul_int(&two));
            prop_assert_eq!(reduce_to_fundamental(&doubled), centre.clone());
        }
    }
}

#[test]
fn integer_maps_have_square_degree() {
    for a in [2i64, -2, 3, -5] {
        for w in OMEGAS {
            let map = AffineTorusMap::integer(a, coord("1/2", "0"), lattice(w)).unwrap();
            assert_eq!(map.degree(), &BigInt::from(a * a));
            assert!(map.matrix().is_scalar());
        }
    }
}
