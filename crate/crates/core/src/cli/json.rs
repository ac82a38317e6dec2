//! JSON encodings of verdicts. Exact scalars are printed in the number
//! grammar so they re-parse; integers become JSON numbers when they fit.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::lattes::{RhoPairing, SemiconjugacyReport, SphereVerdict, ThetaLineType};
use crate::lattice::{Coord, TorusPoint};
use crate::line_orbit::{IrrationalWitness, LineOrbitClass, Transverse};
use crate::numbers::QuadraticNumber;
use crate::segment::{
    CertificateMode, CollisionCertificate, ReturnMap, TorusSegment, WanderingCertificate,
    WanderingVerdict,
};
use crate::torus_map::{AffineTorusMap, MultiplierClass};

pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn scalar(x: &QuadraticNumber) -> Value {
    json!(x.to_string())
}

pub fn coord(c: &Coord) -> Value {
    json!([c.x.to_string(), c.y.to_string()])
}

pub fn point(p: &TorusPoint) -> Value {
    coord(p.coord())
}

pub fn transverse(t: &Transverse) -> Value {
    json!({"alpha": scalar(&t.alpha), "beta": scalar(&t.beta)})
}

/// Floats are rounded to 12 significant digits so that output bytes do not
/// depend on the last ulp.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.11e}");
    json!(s.parse::<f64>().unwrap_or(x))
}

pub fn map(map: &AffineTorusMap) -> Value {
    let m = map.matrix();
    let mut v = json!({
        "a": map.a().to_string(),
        "b": point(map.b()),
        "omega": map.lattice().omega().to_string(),
        "degree": int(map.degree()),
        "matrix": [[int(&m.p), int(&m.r)], [int(&m.q), int(&m.s)]],
        "p": int(&m.p),
        "q": int(&m.q),
        "r": int(&m.r),
        "s": int(&m.s),
    });
    match map.classify() {
        MultiplierClass::IntegerDerivative(a) => {
            v["multiplier"] = json!("integer");
            v["multiplier_class"] = json!("integer-derivative");
            v["integer_multiplier"] = int(&a);
        }
        MultiplierClass::NonRealMultiplier { theta, .. } => {
            v["multiplier"] = json!("non-real");
            v["multiplier_class"] = json!("non-real-multiplier");
            v["theta"] = float(theta);
        }
    }
    v
}

pub fn segment(s: &TorusSegment) -> Value {
    let (a, b) = s.endpoints_f64();
    json!({
        "line": s.line().to_string(),
        "t_lo": scalar(s.t_lo()),
        "t_hi": scalar(s.t_hi()),
        "lift_base": coord(&s.lift_base()),
        "endpoints": [[float(a.0), float(a.1)], [float(b.0), float(b.1)]],
    })
}

pub fn line_class(c: &LineOrbitClass) -> Value {
    match c {
        LineOrbitClass::JordanCurve { m, k } => {
            json!({"class": "jordan-curve", "direction": [int(m), int(k)]})
        }
        LineOrbitClass::EventuallyPeriodic {
            preperiod,
            period,
            states,
        } => json!({
            "class": "eventually-periodic",
            "preperiod": preperiod,
            "period": period,
            "states": states.iter().map(transverse).collect::<Vec<_>>(),
        }),
        LineOrbitClass::WanderingLine { witness } => json!({
            "class": "wandering-line",
            "witness": match witness {
                IrrationalWitness::Alpha => "alpha",
                IrrationalWitness::Beta => "beta",
            },
        }),
    }
}

fn return_map(r: &ReturnMap) -> Value {
    json!({
        "multiplier": int(&r.multiplier),
        "offset": scalar(&r.offset),
        "fixed_point": scalar(&r.fixed_point),
        "lift_shift": [int(&r.lift_shift.0), int(&r.lift_shift.1)],
    })
}

pub fn wandering_certificate(c: &WanderingCertificate) -> Value {
    json!({
        "verdict": "certified",
        "mode": match c.mode {
            CertificateMode::WholeSegment => "whole-segment",
            CertificateMode::Subsegment => "subsegment",
        },
        "segment": segment(&c.segment),
        "preperiod": c.preperiod,
        "period": c.period,
        "return_map": c.return_map.as_ref().map(return_map),
        "expansion": c.expansion.as_ref().map(int),
        "checked_iterates": c.checked_iterates,
        "slack": c.slack.as_ref().map(scalar),
    })
}

pub fn wandering_verdict(v: &WanderingVerdict) -> Value {
    match v {
        WanderingVerdict::Certified(c) => wandering_certificate(c),
        WanderingVerdict::NotWanderable { reason } => {
            json!({"verdict": "not-wanderable", "reason": reason})
        }
    }
}

pub fn collision(c: &CollisionCertificate) -> Value {
    json!({
        "verdict": "collision",
        "n": c.n,
        "m": c.m,
        "k": c.k,
        "witness": [float(c.witness.0), float(c.witness.1)],
        "witness_exact": c.witness_exact.as_ref().map(point),
        "exact": c.exact,
        "bound_used": c.bound_used.map(float),
        "budget": c.budget,
        "uncertain_cells": c.uncertain_cells,
    })
}

fn line_type(t: &ThetaLineType) -> Value {
    match t {
        ThetaLineType::InjectiveGeodesicImage => json!({"type": "injective"}),
        ThetaLineType::FoldedRay { fold_point } => {
            json!({"type": "folded-ray", "fold_point": point(fold_point)})
        }
        ThetaLineType::ClosedCurveImage => json!({"type": "closed-curve"}),
    }
}

fn pairing(p: &RhoPairing) -> Value {
    match p {
        RhoPairing::Unpaired { period } => json!({"pairing": "unpaired", "period": period}),
        RhoPairing::Paired {
            period,
            shift,
            pairing,
        } => json!({
            "pairing": "paired",
            "period": period,
            "shift": shift,
            "index_map": pairing,
        }),
        RhoPairing::SelfPaired { period } => {
            json!({"pairing": "self-paired", "period": period})
        }
    }
}

pub fn sphere_verdict(v: &SphereVerdict) -> Value {
    match v {
        SphereVerdict::Certified {
            certificate,
            line_type: t,
            pairing: p,
        } => {
            let mut out = wandering_certificate(certificate);
            out["line_type"] = line_type(t);
            out["rho_pairing"] = p.as_ref().map(pairing).unwrap_or(Value::Null);
            out
        }
        SphereVerdict::NotWanderable { reason } => {
            json!({"verdict": "not-wanderable", "reason": reason})
        }
        SphereVerdict::NotFlexible { reason, witness } => json!({
            "verdict": "not-flexible",
            "reason": reason,
            "witness": witness.as_ref().map(collision),
        }),
    }
}

pub fn semiconjugacy(r: &SemiconjugacyReport) -> Value {
    json!({
        "path": r.path,
        "degree": r.degree,
        "max_residual": float(r.max_residual),
        "samples_used": r.samples_used,
    })
}
