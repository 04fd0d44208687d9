//! Frenet frames and invariants for dual timelike curves.
//!
//! For a timelike curve the frame is `T = α̃′/‖α̃′‖`, `N` the unit component
//! of `α̃″` orthogonal to `T`, and `B = N ∧ T`; then `⟨T,T⟩ = −1`,
//! `⟨N,N⟩ = ⟨B,B⟩ = 1` and the derivative equations
//!
//! ```text
//! dT/ds̃ =  κN
//! dN/ds̃ =  κT + τB
//! dB/ds̃ = −τN
//! ```
//!
//! hold with `κ.re ≥ 0`. The general-parameter quotients are
//! `κ = ‖α̃′ ∧ α̃″‖ / ‖α̃′‖³` and `τ = −⟨α̃′ ∧ α̃″, α̃‴⟩ / ‖α̃′ ∧ α̃″‖²`;
//! the triple product equals `det(α̃′, α̃″, α̃‴)`, and the leading sign is
//! fixed by the `B = N ∧ T` orientation (on the hyperbolic helix it makes
//! `τ = b/c²` positive, matching the arc-length route `τ = ⟨dN/ds̃, B⟩`).
//! All derivatives are taken with respect to the *dual* arc length, i.e.
//! parameter derivatives divided by the dual speed, which keeps both
//! formulas parameterization-invariant in the dual parts as well.

use super::{Curve, DualFrame, KAPPA_THRESHOLD};
use crate::dual::DualScalar;
use crate::dual_vec::DualVec3;
use crate::error::{Error, Result};
use crate::lorentz::CausalClass;

fn require_timelike(d1: DualVec3, t: f64) -> Result<()> {
    match d1.causal_class() {
        CausalClass::Timelike => Ok(()),
        CausalClass::Lightlike => Err(Error::DegenerateSpeed { t }),
        CausalClass::Spacelike => Err(Error::Causal(format!(
            "curve derivative is not timelike at t = {t}"
        ))),
    }
}

/// Frame by the general-parameter quotient formulas; `s` is stored verbatim.
pub(crate) fn frenet_at(curve: &Curve, t: f64, s: DualScalar) -> Result<DualFrame> {
    let jets = curve.jet(t, 3)?;
    let (pos, d1, d2, d3) = (jets[0], jets[1], jets[2], jets[3]);
    require_timelike(d1, t)?;
    let v = d1.norm()?;
    let tangent = d1.scale(v.recip()?);

    let w = d1.cross(d2);
    let wn2 = w.dot(w);
    let wnorm = wn2.abs().sqrt()?;
    let v3 = v * v * v;
    let kappa = wnorm.div(v3)?;
    if kappa.re <= KAPPA_THRESHOLD {
        return Err(Error::DegenerateFrame {
            kappa_re: kappa.re,
            threshold: KAPPA_THRESHOLD,
        });
    }

    // Component of the acceleration orthogonal to the (timelike) tangent;
    // equals v²κN, so normalizing it orients N with κ ≥ 0.
    let perp = d2 + tangent.scale(d2.dot(tangent));
    let normal = perp.normalized()?;
    let binormal = normal.cross(tangent);
    let tau = (-w.dot(d3)).div(wn2)?;

    Ok(DualFrame {
        s,
        position: pos,
        tangent,
        normal,
        binormal,
        kappa,
        tau,
        speed_ratio: DualScalar::from_re(v.du / v.re),
    })
}

/// Frame via the arc-length-derivative formulas `κ = ‖dT/ds̃‖`,
/// `τ = ⟨dN/ds̃, B⟩`, with `d/ds̃ = (1/‖α̃′‖) d/dt` in dual arithmetic.
/// Requires the curve to be unit speed in the real part at `t`.
pub(crate) fn frenet_unit_speed_at(curve: &Curve, t: f64, s: DualScalar) -> Result<DualFrame> {
    let jets = curve.jet(t, 3)?;
    let (pos, d1, d2, d3) = (jets[0], jets[1], jets[2], jets[3]);
    require_timelike(d1, t)?;
    let v = d1.norm()?;
    let deviation = (v.re - 1.0).abs();
    if deviation >= 1e-8 {
        return Err(Error::NotUnitSpeed { t, deviation });
    }

    // Speed derivatives from the jets: v² = −⟨α̃′,α̃′⟩ for timelike curves.
    let f1 = (d1.dot(d2)) * 2.0;
    let f2 = (d2.dot(d2) + d1.dot(d3)) * 2.0;
    let vdot = -(f1.div(v * 2.0)?);
    let vddot = (-(f2) - vdot * vdot * 2.0).div(v * 2.0)?;

    let vinv = v.recip()?;
    let tangent = d1.scale(vinv);
    // T′ and T″ with respect to t, by the quotient rule.
    let g1 = -(vdot.div(v * v)?);
    let g2 = (vdot * vdot * 2.0 - v * vddot).div(v * v * v)?;
    let t_dot = d2.scale(vinv) + d1.scale(g1);
    let t_ddot = d3.scale(vinv) + d2.scale(g1 * 2.0) + d1.scale(g2);

    let tn2 = t_dot.dot(t_dot);
    let tnorm = tn2.abs().sqrt()?;
    let kappa = tnorm.div(v)?;
    if kappa.re <= KAPPA_THRESHOLD {
        return Err(Error::DegenerateFrame {
            kappa_re: kappa.re,
            threshold: KAPPA_THRESHOLD,
        });
    }

    let scale_n = (v * kappa).recip()?;
    let normal = t_dot.scale(scale_n);
    let binormal = normal.cross(tangent);

    // N′ = T″/(vκ) + T′ · d/dt[1/(vκ)].
    let tnorm_dot = t_dot.dot(t_ddot).div(tnorm)?;
    let kappa_dot = (tnorm_dot * v - tnorm * vdot).div(v * v)?;
    let scale_n_dot = -((vdot * kappa + v * kappa_dot) * (scale_n * scale_n));
    let n_dot = t_ddot.scale(scale_n) + t_dot.scale(scale_n_dot);
    let tau = n_dot.dot(binormal).div(v)?;

    Ok(DualFrame {
        s,
        position: pos,
        tangent,
        normal,
        binormal,
        kappa,
        tau,
        speed_ratio: DualScalar::from_re(v.du / v.re),
    })
}
