//! Numerical check that the map descends through `Θ(z) = ℘(z − z0)`:
//! `f(Θ(z)) = Θ(A(z))` for a rational map `f` of degree `|a|²`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::weierstrass::{g_invariants, wp};
use super::{LattesError, LattesModel};
use crate::lattice::Lattice;

/// Samples with `|Θ|` above this are dropped (too close to a pole).
const SAMPLE_CAP: f64 = 100.0;

const SERIES_TOL: f64 = 1e-12;

/// Smallest accepted ratio between the second-smallest and largest singular
/// values of the fit matrix.
const FIT_CONDITION_FLOOR: f64 = 1e-13;

/// `℘(2z)` as a rational function of `x = ℘(z)`.
pub fn duplication(g2: Complex64, g3: Complex64, x: Complex64) -> Complex64 {
    let x2 = x * x;
    let num = x2 * x2 + g2 / 2.0 * x2 + 2.0 * g3 * x + g2 * g2 / 16.0;
    let den = 4.0 * x2 * x - g2 * x - g3;
    num / den
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiconjugacyPath {
    Analytic,
    Fitted,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SampleRow {
    pub z: (f64, f64),
    pub wp: (f64, f64),
    pub residual: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SemiconjugacyReport {
    pub path: SemiconjugacyPath,
    pub degree: u64,
    pub max_residual: f64,
    pub samples_used: usize,
    #[serde(skip)]
    pub rows: Vec<SampleRow>,
}

impl SemiconjugacyReport {
    /// CSV with header `z_re,z_im,wp_re,wp_im,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z_re,z_im,wp_re,wp_im,residual\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:e},{:e},{:e},{:e},{:e}\n",
                r.z.0, r.z.1, r.wp.0, r.wp.1, r.residual
            ));
        }
        out
    }
}

/// Halton point `i` in bases 2 and 3.
fn halton(i: usize) -> (f64, f64) {
    let radical = |mut n: usize, b: usize| {
        let (mut f, mut r) = (1.0, 0.0);
        while n > 0 {
            f /= b as f64;
            r += f * (n % b) as f64;
            n /= b;
        }
        r
    };
    (radical(i, 2), radical(i, 3))
}

/// Relative residual, measured against `max(1, |expected|)`.
fn residual(got: Complex64, expected: Complex64) -> f64 {
    (got - expected).norm() / expected.norm().max(1.0)
}

struct Sample {
    z: Complex64,
    x: Complex64,
    y: Complex64,
}

/// Deterministic samples `z` with `x = Θ(z)` and `y = Θ(A(z))`, both finite
/// and moderate.
fn samples(model: &LattesModel, count: usize, tol: f64) -> Vec<Sample> {
    let lat = model.lattice();
    let z0 = lat.embed(model.z0());
    let map = model.map();
    let mut out = Vec::with_capacity(count);
    // Offsetting the Halton index skips the origin and the dyadic points.
    let mut i = 7;
    while out.len() < count && i < 50 * count + 100 {
        i += 1;
        let (u, v) = halton(i);
        let (u, v) = (
            u + 1e-3 * std::f64::consts::SQRT_2,
            v + 1e-3 * std::f64::consts::E,
        );
        let z = lat.embed_f64((u, v));
        let az = lat.embed_f64(map.apply_lift_f64((u, v)));
        let (Ok(x), Ok(y)) = (wp(lat, z - z0, tol), wp(lat, az - z0, tol)) else {
            continue;
        };
        if x.norm() > SAMPLE_CAP || y.norm() > SAMPLE_CAP {
            continue;
        }
        out.push(Sample { z, x, y });
    }
    out
}

/// Validates the duplication formula against `℘` on a grid.
fn check_duplication(
    lat: &Lattice,
    g2: Complex64,
    g3: Complex64,
    tol: f64,
) -> Result<(), LattesError> {
    let mut worst: f64 = 0.0;
    for i in 1..10 {
        for j in 1..10 {
            let z = lat.embed_f64((i as f64 / 10.0 + 0.013, j as f64 / 10.0 + 0.007));
            let (Ok(x), Ok(y)) = (wp(lat, z, tol), wp(lat, 2.0 * z, tol)) else {
                continue;
            };
            if x.norm() > SAMPLE_CAP || y.norm() > SAMPLE_CAP {
                continue;
            }
            worst = worst.max(residual(duplication(g2, g3, x), y));
        }
    }
    if worst < 1e-8 {
        Ok(())
    } else {
        Err(LattesError::DuplicationCheckFailed(worst))
    }
}

fn horner(coef: &[Complex64], x: Complex64) -> Complex64 {
    coef.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// `P(x)/Q(x)` with coefficients listed from the constant term up.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalMap {
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
}

impl RationalMap {
    pub fn eval(&self, x: Complex64) -> Complex64 {
        horner(&self.numerator, x) / horner(&self.denominator, x)
    }

    /// The duplication map `℘(z) ↦ ℘(2z)`.
    pub fn duplication(g2: Complex64, g3: Complex64) -> Self {
        let c = |re: f64| Complex64::new(re, 0.0);
        RationalMap {
            numerator: vec![g2 * g2 / 16.0, 2.0 * g3, g2 / 2.0, c(0.0), c(1.0)],
            denominator: vec![-g3, -g2, c(0.0), c(4.0), c(0.0)],
        }
    }

    /// Rescaled so that the highest-degree numerator coefficient of
    /// largest modulus is 1.
    pub fn normalized(&self) -> Self {
        let lead = self
            .numerator
            .iter()
            .rev()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let lead = self
            .numerator
            .iter()
            .rev()
            .find(|c| c.norm() > 1e-6 * lead.norm())
            .copied()
            .unwrap_or(lead);
        RationalMap {
            numerator: self.numerator.iter().map(|c| c / lead).collect(),
            denominator: self.denominator.iter().map(|c| c / lead).collect(),
        }
    }

    /// Largest coefficient difference after normalization, relative to the
    /// largest coefficient of `self`.
    pub fn coefficient_distance(&self, other: &RationalMap) -> f64 {
        let (a, b) = (self.normalized(), other.normalized());
        let pad = |v: &[Complex64], n: usize| {
            let mut v = v.to_vec();
            v.resize(n, Complex64::new(0.0, 0.0));
            v
        };
        let n = a.numerator.len().max(b.numerator.len());
        let m = a.denominator.len().max(b.denominator.len());
        let ca: Vec<Complex64> = pad(&a.numerator, n)
            .into_iter()
            .chain(pad(&a.denominator, m))
            .collect();
        let cb: Vec<Complex64> = pad(&b.numerator, n)
            .into_iter()
            .chain(pad(&b.denominator, m))
            .collect();
        let scale = ca.iter().map(|c| c.norm()).fold(0.0, f64::max);
        ca.iter()
            .zip(&cb)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
            / scale
    }
}

/// Homogeneous least-squares fit of `P(x) − y·Q(x) = 0` with `deg P, deg Q ≤ d`,
/// on `x` scaled into the unit disk.
fn fit_rational(train: &[Sample], d: usize) -> Result<RationalMap, LattesError> {
    let scale = train.iter().map(|s| s.x.norm()).fold(1.0, f64::max);
    let yscale = train.iter().map(|s| s.y.norm()).fold(1.0, f64::max);
    let cols = 2 * (d + 1);
    let mut a = DMatrix::<Complex64>::zeros(train.len(), cols);
    for (r, s) in train.iter().enumerate() {
        let x = s.x / scale;
        let y = s.y / yscale;
        let mut pw = Complex64::new(1.0, 0.0);
        for k in 0..=d {
            a[(r, k)] = pw;
            a[(r, d + 1 + k)] = -y * pw;
            pw *= x;
        }
        // Equilibrate rows so that large |y| does not dominate.
        let norm = a.row(r).norm();
        if norm > 0.0 {
            a.row_mut(r).unscale_mut(norm);
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let smax = svd.singular_values[*order.last().expect("nonempty")];
    let second = svd.singular_values[order[1]];
    if second < FIT_CONDITION_FLOOR * smax {
        return Err(LattesError::FitIllConditioned(second / smax));
    }
    let null: Vec<Complex64> = v_t.row(order[0]).iter().map(|c| c.conj()).collect();
    // Undo the scaling: p_k·(x/s)^k = (p_k/s^k)·x^k.
    let unscale = |c: &[Complex64], factor: f64| -> Vec<Complex64> {
        c.iter()
            .enumerate()
            .map(|(k, c)| c * factor / scale.powi(k as i32))
            .collect()
    };
    Ok(RationalMap {
        numerator: unscale(&null[..=d], yscale),
        denominator: unscale(&null[d + 1..], 1.0),
    })
}

/// Fits the descended map `f` of degree `|a|²` on `count` samples.
pub fn fit_descended_map(model: &LattesModel, count: usize) -> Result<RationalMap, LattesError> {
    model.require_involution()?;
    let d = model.map().degree().to_usize().expect("small degree");
    let pts = samples(model, count, SERIES_TOL);
    let needed = 4 * (d + 1);
    if pts.len() < needed {
        return Err(LattesError::TooFewSamples {
            needed,
            got: pts.len(),
        });
    }
    fit_rational(&pts, d)
}

/// Checks `f(Θ(z)) = Θ(A(z))` on `count` samples. The doubling map with
/// `b = 0` and `z0 = 0` uses the duplication formula; everything else fits
/// `f` on half the samples and reports the residual on the other half.
pub fn verify_semiconjugacy(
    model: &LattesModel,
    count: usize,
    tol: f64,
) -> Result<SemiconjugacyReport, LattesError> {
    model.require_involution()?;
    let lat = model.lattice();
    let degree = model.map().degree().to_u64().expect("small degree");
    let analytic = model
        .map()
        .integer_multiplier()
        .is_some_and(|a| a == 2.into())
        && model.map().b().coord().x.is_zero()
        && model.map().b().coord().y.is_zero()
        && model.z0().coord().x.is_zero()
        && model.z0().coord().y.is_zero();
    let pts = samples(model, count, SERIES_TOL);
    let (path, rows): (_, Vec<SampleRow>) = if analytic {
        let (g2, g3) = g_invariants(lat, SERIES_TOL);
        check_duplication(lat, g2, g3, SERIES_TOL)?;
        let rows = pts
            .iter()
            .map(|s| row(s, residual(duplication(g2, g3, s.x), s.y)))
            .collect();
        (SemiconjugacyPath::Analytic, rows)
    } else {
        let d = degree as usize;
        let needed = 4 * (d + 1);
        let half = pts.len() / 2;
        if half < needed {
            return Err(LattesError::TooFewSamples {
                needed: 2 * needed,
                got: pts.len(),
            });
        }
        let f = fit_rational(&pts[..half], d)?;
        let rows = pts[half..]
            .iter()
            .map(|s| row(s, residual(f.eval(s.x), s.y)))
            .collect();
        (SemiconjugacyPath::Fitted, rows)
    };
    let max_residual = rows_max(&rows);
    let report = SemiconjugacyReport {
        path,
        degree,
        max_residual,
        samples_used: rows.len(),
        rows,
    };
    if !(max_residual < tol) {
        return Err(LattesError::ResidualExceedsTol {
            residual: max_residual,
            tol,
        });
    }
    Ok(report)
}

fn row(s: &Sample, residual: f64) -> SampleRow {
    SampleRow {
        z: (s.z.re, s.z.im),
        wp: (s.x.re, s.x.im),
        residual,
    }
}

fn rows_max(rows: &[SampleRow]) -> f64 {
    rows.iter().map(|r| r.residual).fold(0.0, f64::max)
}
