//! Independent exact arithmetic in `ℚ(√p, √q)` and a brute-force test for
//! parallel segments meeting modulo `ℤ²`. Nothing here calls the library's
//! geometry; only the conversion from its scalars.

use std::ops::{Add, Mul, Neg, Sub};

use lattes_wander::numbers::QuadraticNumber;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `a + b√p`.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Inner {
    a: Q,
    b: Q,
}

impl Inner {
    fn sign(&self, p: i64) -> i32 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        let t = &self.a * &self.a - &self.b * &self.b * Q::from_integer(p.into());
        sa * sgn(&t)
    }
}

fn sgn(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// `x + y√q` with `x, y ∈ ℚ(√p)`; `p` and `q` are distinct primes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bq {
    p: i64,
    q: i64,
    x: Inner,
    y: Inner,
}

impl Bq {
    pub fn rational(p: i64, q_: i64, r: Q) -> Bq {
        Bq {
            p,
            q: q_,
            x: Inner { a: r, b: Q::zero() },
            y: Inner {
                a: Q::zero(),
                b: Q::zero(),
            },
        }
    }

    pub fn sqrt_p(p: i64, q_: i64) -> Bq {
        let mut v = Bq::rational(p, q_, Q::zero());
        v.x.b = Q::one();
        v
    }

    /// Embeds a library scalar; its radicand must be 1, `p`, `q` or `p·q`.
    pub fn from_scalar(p: i64, q_: i64, s: &QuadraticNumber) -> Bq {
        let w = s.denominator().clone();
        let u = Q::new(s.numerator_rational().clone(), w.clone());
        let v = Q::new(s.numerator_surd().clone(), w);
        let mut out = Bq::rational(p, q_, u);
        if v.is_zero() {
            return out;
        }
        let d = s.radicand() as i64;
        if d == p {
            out.x.b = v;
        } else if d == q_ {
            out.y.a = v;
        } else if d == p * q_ {
            out.y.b = v;
        } else {
            panic!("radicand {d} outside ℚ(√{p}, √{q_})");
        }
        out
    }

    /// Coefficients on `1, √p, √q, √(pq)`.
    pub fn coefficients(&self) -> [&Q; 4] {
        [&self.x.a, &self.x.b, &self.y.a, &self.y.b]
    }

    pub fn sign(&self) -> i32 {
        let sx = self.x.sign(self.p);
        let sy = self.y.sign(self.p);
        if sx == sy || sy == 0 {
            return sx;
        }
        if sx == 0 {
            return sy;
        }
        // x² − q·y² decides when the two parts disagree.
        let x2 = inner_mul(&self.x, &self.x, self.p);
        let y2 = inner_mul(&self.y, &self.y, self.p);
        let qq = Q::from_integer(self.q.into());
        let t = Inner {
            a: x2.a - y2.a * &qq,
            b: x2.b - y2.b * &qq,
        };
        sx * t.sign(self.p)
    }

    pub fn scale(&self, r: &Q) -> Bq {
        let mut v = self.clone();
        for c in [&mut v.x.a, &mut v.x.b, &mut v.y.a, &mut v.y.b] {
            *c = &*c * r;
        }
        v
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let f = |r: &Q| r.to_f64().unwrap();
        let (sp, sq) = ((self.p as f64).sqrt(), (self.q as f64).sqrt());
        f(&self.x.a) + f(&self.x.b) * sp + f(&self.y.a) * sq + f(&self.y.b) * sp * sq
    }
}

fn inner_mul(l: &Inner, r: &Inner, p: i64) -> Inner {
    Inner {
        a: &l.a * &r.a + &l.b * &r.b * Q::from_integer(p.into()),
        b: &l.a * &r.b + &l.b * &r.a,
    }
}

impl Add for &Bq {
    type Output = Bq;
    fn add(self, o: &Bq) -> Bq {
        Bq {
            p: self.p,
            q: self.q,
            x: Inner {
                a: &self.x.a + &o.x.a,
                b: &self.x.b + &o.x.b,
            },
            y: Inner {
                a: &self.y.a + &o.y.a,
                b: &self.y.b + &o.y.b,
            },
        }
    }
}

impl Neg for &Bq {
    type Output = Bq;
    fn neg(self) -> Bq {
        self.scale(&-Q::one())
    }
}

impl Sub for &Bq {
    type Output = Bq;
    fn sub(self, o: &Bq) -> Bq {
        self + &-o
    }
}

impl Mul for &Bq {
    type Output = Bq;
    fn mul(self, o: &Bq) -> Bq {
        let qq = Q::from_integer(self.q.into());
        let xx = inner_mul(&self.x, &o.x, self.p);
        let yy = inner_mul(&self.y, &o.y, self.p);
        let xy = inner_mul(&self.x, &o.y, self.p);
        let yx = inner_mul(&self.y, &o.x, self.p);
        Bq {
            p: self.p,
            q: self.q,
            x: Inner {
                a: xx.a + yy.a * &qq,
                b: xx.b + yy.b * qq,
            },
            y: Inner {
                a: xy.a + yx.a,
                b: xy.b + yx.b,
            },
        }
    }
}

/// `{start + t·(1, c√p) : 0 ≤ t ≤ len}` in the plane.
#[derive(Clone, Debug)]
pub struct Strip {
    pub start: (Bq, Bq),
    pub len: Q,
}

/// Slope `c·√p` of every strip handled here.
#[derive(Clone, Debug)]
pub struct Slope {
    pub c: Q,
    p: i64,
    q: i64,
}

impl Slope {
    pub fn new(c: Q, p: i64, q_: i64) -> Slope {
        assert!(!c.is_zero());
        Slope { c, p, q: q_ }
    }

    fn value(&self) -> Bq {
        Bq::sqrt_p(self.p, self.q).scale(&self.c)
    }

    fn step(&self, start: &(Bq, Bq), t: &Q) -> (Bq, Bq) {
        let dy = self.value().scale(t);
        (
            &start.0 + &Bq::rational(self.p, self.q, t.clone()),
            &start.1 + &dy,
        )
    }
}

/// Image under `z ↦ a·z + b` (lattice coordinates, integer `a`).
pub fn iterate(strip: &Strip, slope: &Slope, a: i64, b: &(Q, Q)) -> Strip {
    let (p, q_) = (slope.p, slope.q);
    let ai = Bq::rational(p, q_, Q::from_integer(a.into()));
    let lift = |z: &(Bq, Bq)| {
        (
            &(&ai * &z.0) + &Bq::rational(p, q_, b.0.clone()),
            &(&ai * &z.1) + &Bq::rational(p, q_, b.1.clone()),
        )
    };
    let len = &strip.len * Q::from_integer(a.abs().into());
    if a > 0 {
        Strip {
            start: lift(&strip.start),
            len,
        }
    } else {
        let end = slope.step(&strip.start, &strip.len);
        Strip {
            start: lift(&end),
            len,
        }
    }
}

/// Image under `z ↦ 2·z0 − z`.
pub fn reflect(strip: &Strip, slope: &Slope, z0: &(Q, Q)) -> Strip {
    let (p, q_) = (slope.p, slope.q);
    let end = slope.step(&strip.start, &strip.len);
    let two = Q::from_integer(2.into());
    Strip {
        start: (
            &Bq::rational(p, q_, &z0.0 * &two) - &end.0,
            &Bq::rational(p, q_, &z0.1 * &two) - &end.1,
        ),
        len: strip.len.clone(),
    }
}

/// Whether the two strips meet modulo `ℤ²`. A translate `(n, m)` puts the
/// second strip on the first one's line iff
/// `(y_a − y_b) + s·(x_b − x_a) + s·n = m`; the `√p` coordinate fixes `n`.
pub fn meet_mod_z2(slope: &Slope, a: &Strip, b: &Strip) -> bool {
    let s = slope.value();
    let dx = &b.start.0 - &a.start.0;
    let v0 = &(&a.start.1 - &b.start.1) + &(&s * &dx);
    let [r, cp, cq, cpq] = v0.coefficients();
    if !cq.is_zero() || !cpq.is_zero() {
        return false;
    }
    let n = -(cp / &slope.c);
    if !n.is_integer() || !r.is_integer() {
        return false;
    }
    // t − t' = D := x_b + n − x_a; need [0, len_a] ∩ [D, D + len_b] ≠ ∅.
    let d = &dx + &Bq::rational(slope.p, slope.q, n);
    let la = Bq::rational(slope.p, slope.q, a.len.clone());
    let lb = Bq::rational(slope.p, slope.q, b.len.clone());
    (&d - &la).sign() <= 0 && (&d + &lb).sign() >= 0
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        // √2 + √3 − √6 − 1/2 ≈ 0.1968
        let mut v = Bq::rational(2, 3, q(-1, 2));
        v.x.b = q(1, 1);
        v.y.a = q(1, 1);
        v.y.b = q(-1, 1);
        assert_eq!(v.sign(), 1);
        assert!((v.to_f64() - 0.19677).abs() < 1e-4);
        // 5√2 − 7 > 0, 7 − 5√2 < 0 by 0.0711
        let mut w = Bq::rational(2, 3, q(-7, 1));
        w.x.b = q(5, 1);
        assert_eq!(w.sign(), 1);
        assert_eq!((-&w).sign(), -1);
    }
}
