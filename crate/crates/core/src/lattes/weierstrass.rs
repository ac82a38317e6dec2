//! Weierstrass `℘` for the lattice `ℤ + ℤω`, evaluated through `q`-expansions
//! in `q = e^{2πiω}`. The plain lattice sums are kept as slow oracles.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::LattesError;
use crate::lattice::Lattice;

const MAX_TERMS: usize = 100_000;

/// Points closer than this to a lattice point are rejected.
pub const POLE_RADIUS: f64 = 1e-6;

fn nome(lat: &Lattice) -> Complex64 {
    (Complex64::i() * 2.0 * PI * lat.omega_f64()).exp()
}

/// Sums `term(n)` for `n = 1, 2, …` until a term falls below `tol` relative to
/// the running total.
fn series(tol: f64, mut term: impl FnMut(usize) -> Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=MAX_TERMS {
        let t = term(n);
        acc += t;
        if t.norm() <= tol * 1e-3 * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

/// `(g2, g3)` from the weight-4 and weight-6 Eisenstein series.
pub fn g_invariants(lat: &Lattice, tol: f64) -> (Complex64, Complex64) {
    let q = nome(lat);
    // Σ n³qⁿ/(1−qⁿ) and Σ n⁵qⁿ/(1−qⁿ)
    let mut qn = Complex64::new(1.0, 0.0);
    let (mut s3, mut s5) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for n in 1..=MAX_TERMS {
        qn *= q;
        let nf = n as f64;
        let t = qn / (1.0 - qn);
        s3 += t * nf.powi(3);
        s5 += t * nf.powi(5);
        if (t * nf.powi(5)).norm() <= tol * 1e-3 * s5.norm().max(1.0) {
            break;
        }
    }
    let e4 = 1.0 + 240.0 * s3;
    let e6 = 1.0 - 504.0 * s5;
    (
        e4 * (4.0 * PI.powi(4) / 3.0),
        e6 * (8.0 * PI.powi(6) / 27.0),
    )
}

/// Representative of `z` modulo `Λ` with lattice coordinates in `[−½, ½]²`.
fn centered(lat: &Lattice, z: Complex64) -> Result<Complex64, LattesError> {
    let (x, y) = lat.coords_f64(z);
    let (x, y) = (x - x.round(), y - y.round());
    let w = lat.embed_f64((x, y));
    let near_pole = (-1..=1)
        .any(|i| (-1..=1).any(|j| (w - lat.embed_f64((i as f64, j as f64))).norm() < POLE_RADIUS));
    if near_pole {
        return Err(LattesError::NearPole);
    }
    Ok(w)
}

fn x_over_one_minus_x_sq(x: Complex64) -> Complex64 {
    x / ((1.0 - x) * (1.0 - x))
}

fn derivative_kernel(x: Complex64) -> Complex64 {
    x * (1.0 + x) / ((1.0 - x) * (1.0 - x) * (1.0 - x))
}

/// `℘(z)`; `tol` controls series truncation.
pub fn wp(lat: &Lattice, z: Complex64, tol: f64) -> Result<Complex64, LattesError> {
    let z = centered(lat, z)?;
    let q = nome(lat);
    let two_pi_i = Complex64::i() * 2.0 * PI;
    let u = (two_pi_i * z).exp();
    // x/(1−x)² is invariant under x ↦ 1/x, so the n < 0 terms fold onto qⁿ/u.
    let mut qn = Complex64::new(1.0, 0.0);
    let lattice_part = series(tol, |_| {
        qn *= q;
        x_over_one_minus_x_sq(qn * u) + x_over_one_minus_x_sq(qn / u)
            - 2.0 * x_over_one_minus_x_sq(qn)
    });
    Ok(two_pi_i * two_pi_i * (x_over_one_minus_x_sq(u) + 1.0 / 12.0 + lattice_part))
}

/// `℘′(z)`.
pub fn wp_prime(lat: &Lattice, z: Complex64, tol: f64) -> Result<Complex64, LattesError> {
    let z = centered(lat, z)?;
    let q = nome(lat);
    let two_pi_i = Complex64::i() * 2.0 * PI;
    let u = (two_pi_i * z).exp();
    // The derivative kernel is odd under x ↦ 1/x.
    let mut qn = Complex64::new(1.0, 0.0);
    let tail = series(tol, |_| {
        qn *= q;
        derivative_kernel(qn * u) - derivative_kernel(qn / u)
    });
    Ok(two_pi_i.powu(3) * (derivative_kernel(u) + tail))
}

/// `1/z² + Σ′ [1/(z−w)² − 1/w²]` over `w = n + mω`, `|n|, |m| ≤ radius`.
/// The truncation error decays like `1/radius`.
pub fn wp_by_lattice_sum(lat: &Lattice, z: Complex64, radius: i64) -> Complex64 {
    let mut acc = 1.0 / (z * z);
    for n in -radius..=radius {
        for m in -radius..=radius {
            if n == 0 && m == 0 {
                continue;
            }
            let w = lat.embed_f64((n as f64, m as f64));
            acc += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
        }
    }
    acc
}

/// `60·Σ′ w⁻⁴` and `140·Σ′ w⁻⁶` over the same square of lattice points.
pub fn g_invariants_by_lattice_sum(lat: &Lattice, radius: i64) -> (Complex64, Complex64) {
    let mut s4 = Complex64::new(0.0, 0.0);
    let mut s6 = Complex64::new(0.0, 0.0);
    for n in -radius..=radius {
        for m in -radius..=radius {
            if n == 0 && m == 0 {
                continue;
            }
            let w = lat.embed_f64((n as f64, m as f64));
            let w2 = w * w;
            s4 += 1.0 / (w2 * w2);
            s6 += 1.0 / (w2 * w2 * w2);
        }
    }
    (60.0 * s4, 140.0 * s6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::parse_complex;

    const TOL: f64 = 1e-12;

    #[test]
    fn symmetric_lattices_kill_an_invariant() {
        let (g2, g3) = g_invariants(&Lattice::square(), TOL);
        assert!(g3.norm() < 1e-10);
        assert!(g2.re > 0.0 && g2.im.abs() < 1e-10);
        let (g2, _) = g_invariants(&Lattice::hexagonal(), TOL);
        assert!(g2.norm() < 1e-10);
    }

    #[test]
    fn agrees_with_lattice_sums() {
        for omega in ["i", "2i", "1/2+sqrt(3)/2*i", "1/3+5/4*i"] {
            let lat = Lattice::new(parse_complex(omega).unwrap()).unwrap();
            let (g2, g3) = g_invariants(&lat, TOL);
            let (s2, s3) = g_invariants_by_lattice_sum(&lat, 150);
            // The square truncation has an O(radius⁻²) tail.
            assert!((g2 - s2).norm() < 1e-2, "{omega}: {g2} vs {s2}");
            assert!((g3 - s3).norm() < 1e-2, "{omega}: {g3} vs {s3}");
            let z = Complex64::new(0.23, 0.17);
            let a = wp(&lat, z, TOL).unwrap();
            let b = wp_by_lattice_sum(&lat, z, 300);
            assert!((a - b).norm() < 1e-2, "{omega}: {a} vs {b}");
        }
    }

    #[test]
    fn differential_equation() {
        for omega in ["i", "2i", "1/2+sqrt(3)/2*i", "1/3+5/4*i"] {
            let lat = Lattice::new(parse_complex(omega).unwrap()).unwrap();
            let (g2, g3) = g_invariants(&lat, TOL);
            for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.41, 0.77)] {
                let p = wp(&lat, z, TOL).unwrap();
                let dp = wp_prime(&lat, z, TOL).unwrap();
                let r = dp * dp - (4.0 * p * p * p - g2 * p - g3);
                assert!(
                    r.norm() < 1e-6 * (1.0 + p.norm().powi(3)),
                    "{omega} {z}: {r}"
                );
            }
        }
    }

    #[test]
    fn half_period_is_critical() {
        let lat = Lattice::square();
        let z = Complex64::new(0.5, 0.5);
        assert!(wp_prime(&lat, z, TOL).unwrap().norm() < 1e-6);
        // ℘ is real on the square lattice's half periods; e₃ = 0 there.
        assert!(wp(&lat, z, TOL).unwrap().norm() < 1e-9);
    }

    #[test]
    fn pole_rejected() {
        let lat = Lattice::square();
        assert_eq!(
            wp(&lat, Complex64::new(1.0, 1e-8), TOL),
            Err(LattesError::NearPole)
        );
    }
}
