//! Dual timelike Mannheim partner pairs: construction from prescribed data
//! and numerical verification of the identities binding the two curves'
//! invariants.
//!
//! A pair `{α̃, β̃}` is Mannheim when the binormal line of `α̃` coincides with
//! the principal normal line of `β̃` at corresponding points, equivalently
//! `β̃ = α̃ + λB` for a nonzero dual constant `λ`. Writing `P`, `Q` for the
//! curvature and torsion of `β̃`, the pair exists iff `λ(P² − Q²) = P`; given
//! `λ` and a torsion profile `Q(s)`, the curvature branch
//!
//! ```text
//! P = (1 − √(1 + 4λ²Q²)) / (2λ)
//! ```
//!
//! solves that constraint with `λP ≤ 0`, which keeps `P.re > 0` when
//! `λ.re < 0` and puts the two tangents in a common time cone. β̃ is then
//! synthesized by integrating its frame system and α̃ recovered pointwise as
//! `α̃ = β̃ − λV₂`, with exact jets derived from the frame states.
//!
//! Orientation: with the frame convention used by extraction (`B = N ∧ T`
//! for both curves), the partner relation forces `⟨B_α, V₂⟩ = −1`; residual
//! evaluation therefore aligns `B_α` (and the torsion with it) to `+V₂`
//! before comparing against the identities, which are stated in the aligned
//! frame. The sign is recorded per sample.

pub mod report;

use crate::curve::integrate::{integrate_from_invariants, FrameTriple, InvariantFn};
use crate::curve::{Curve, CurveSource, CurveSpec, DualFrame, SampledTable};
use crate::dual::{hyperbolic_pair, DualScalar};
use crate::dual_vec::DualVec3;
use crate::error::{Error, Result};
use crate::exec;

pub use report::{theorem_report, MannheimReport, ReportConfig, ReportLevel};

/// A constructed partner pair with its correspondence grid.
#[derive(Debug)]
pub struct MannheimPair {
    /// The Mannheim curve (offset limb), `α̃ = β̃ − λV₂`.
    pub alpha: Curve,
    /// The partner curve, parameterized by its own arc length.
    pub beta: Curve,
    pub lambda: DualScalar,
    /// Correspondence: row i of either curve is the same pair point.
    pub ts: Vec<f64>,
    pub steps: usize,
    /// Frame orthonormality drift after re-projection during synthesis.
    pub max_drift_after: f64,
}

/// Solves `λ(P² − Q²) = P` for the curvature, taking the branch with
/// `λP ≤ 0` (the root `(1 − √(1 + 4λ²Q²))/(2λ)` in dual arithmetic).
pub fn curvature_from_torsion(q: DualScalar, lambda: DualScalar) -> Result<DualScalar> {
    let disc = DualScalar::ONE + lambda * lambda * q * q * 4.0;
    let root = disc.sqrt()?;
    (DualScalar::ONE - root).div(lambda * 2.0)
}

/// `β̃ = α̃ + λB` sampled over `ts`: the binormal offset of a curve, as a
/// table spec sharing the grid with the input. This is the raw offset; it is
/// a Mannheim pair only when the input's invariants satisfy the pair
/// condition for this `λ`.
pub fn offset_along_binormal(curve: &Curve, lambda: DualScalar, ts: &[f64]) -> Result<CurveSpec> {
    let frames = curve.sample_frames(ts)?;
    let rows: Vec<DualVec3> = frames
        .iter()
        .map(|f| f.position + f.binormal.scale(lambda))
        .collect();
    let table = SampledTable::new(ts.to_vec(), rows)?;
    Ok(CurveSpec {
        range: table.range(),
        samples: table.len(),
        source: CurveSource::Table(table),
    })
}

/// Builds a Mannheim pair from a torsion profile `Q(s)` for the partner
/// curve and a nonzero dual constant `λ`.
///
/// Fails when `λ.re = 0`, when the curvature branch leaves `P.re > 0`
/// (pick `λ.re < 0` for positive torsion profiles), and when `Q` is constant
/// over the range: constant `(P, Q)` forces the offset limb to a straight
/// line with no Frenet frame, so pair verification is undefined there.
pub fn partner_from_invariants(
    q_fn: &InvariantFn,
    lambda: DualScalar,
    range: (f64, f64),
    steps: usize,
) -> Result<MannheimPair> {
    if lambda.re == 0.0 {
        return Err(Error::Input(
            "lambda has zero real part; a Mannheim offset requires a nonzero constant lambda"
                .into(),
        ));
    }
    let n = steps + 1;
    let ts = crate::curve::linspace(range.0, range.1, n);

    // Constant torsion profile ⇒ constant curvature ⇒ the offset limb has
    // zero curvature (straight line) and no frame.
    let q_vals = exec::try_map_range(n, |i| Ok(q_fn.value(ts[i])?.re))?;
    let (qmin, qmax) = q_vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let qscale = qmax.abs().max(qmin.abs()).max(1.0);
    if qmax - qmin <= 1e-10 * qscale {
        return Err(Error::DegeneratePair(
            "constant torsion profile: with constant (P, Q) the offset limb degenerates to a \
             straight timelike line with zero curvature, so the pair has no Frenet data to verify"
                .into(),
        ));
    }

    // P(s), P′(s), P″(s) through the branch formula, in dual arithmetic.
    // With R = √(1 + 4λ²Q²): P = (1 − R)/(2λ), R′ = 4λ²QQ′/R,
    // P′ = −2λQQ′/R, and P″ by the quotient rule.
    let lam = lambda;
    let p_fn = {
        let qv = q_fn.value_fn();
        let qd1 = q_fn.deriv_fn();
        let qd1b = q_fn.deriv_fn();
        let qd2 = q_fn.deriv2_fn();
        let qvb = q_fn.value_fn();
        let qvc = q_fn.value_fn();
        InvariantFn::from_parts(
            move |x| curvature_from_torsion(qv(x)?, lam),
            move |x| {
                let q = qvb(x)?;
                let dq = qd1(x)?;
                let disc = DualScalar::ONE + lam * lam * q * q * 4.0;
                let root = disc.sqrt()?;
                (-(lam * q * dq * 2.0)).div(root)
            },
            move |x| {
                let q = qvc(x)?;
                let dq = qd1b(x)?;
                let ddq = qd2(x)?;
                let disc = DualScalar::ONE + lam * lam * q * q * 4.0;
                let root = disc.sqrt()?;
                let droot = (lam * lam * q * dq * 4.0).div(root)?;
                let num = (dq * dq + q * ddq) * root - q * dq * droot;
                ((num * -2.0) * lam).div(root * root)
            },
        )
    };

    // Branch feasibility: P.re must stay positive on the grid.
    for &t in &ts {
        let p = p_fn.value(t)?;
        if p.re <= 0.0 {
            return Err(Error::BranchInfeasible(format!(
                "curvature branch gives P.re = {} ≤ 0 at s = {t}; choose lambda with the \
                 opposite sign of the torsion profile",
                p.re
            )));
        }
    }

    let frame0 = FrameTriple::canonical();
    let integrated = integrate_from_invariants(&p_fn, q_fn, &frame0, range, steps)?;
    let max_drift_after = integrated.max_drift_after;

    // α̃ = β̃ − λV₂ with exact jets expressed in the β frame. Writing
    // c = P − λ(P² − Q²) (identically zero on the branch, kept for exactness):
    //   α̃′  = (1 − λP)V₁ − λQV₃
    //   α̃″  = −λP′V₁ + cV₂ − λQ′V₃
    //   α̃‴  = (−λP″ + cP)V₁ + (−λPP′ + λQQ′ + c′)V₂ + (cQ − λQ″)V₃
    let mut alpha_jets = Vec::with_capacity(n);
    #[allow(clippy::needless_range_loop)] // indexes five parallel arrays
    for i in 0..n {
        let f = &integrated.frames[i];
        let (p, q) = (integrated.p[i], integrated.q[i]);
        let (dp, dq) = (integrated.dp[i], integrated.dq[i]);
        let (ddp, ddq) = (p_fn.deriv2(ts[i])?, q_fn.deriv2(ts[i])?);
        let one_m = DualScalar::ONE - lam * p;
        let c = p - lam * (p * p - q * q);
        let cd = dp - lam * (p * dp - q * dq) * 2.0;
        let j0 = integrated.positions[i] - f.v2.scale(lam);
        let j1 = f.v1.scale(one_m) - f.v3.scale(lam * q);
        let j2 = f.v1.scale(-(lam * dp)) + f.v2.scale(c) - f.v3.scale(lam * dq);
        let j3 = f.v1.scale(-(lam * ddp) + c * p)
            + f.v2.scale(-(lam * p * dp) + lam * q * dq + cd)
            + f.v3.scale(c * q - lam * ddq);
        alpha_jets.push([j0, j1, j2, j3]);
    }
    let alpha = Curve::from_node_data(crate::curve::NodeData::new(ts.clone(), alpha_jets)?, n);
    let beta = integrated.into_curve()?;

    Ok(MannheimPair {
        alpha,
        beta,
        lambda,
        ts,
        steps,
        max_drift_after,
    })
}

/// The dual angle `Φ` between the tangents of corresponding frames,
/// extracted from `cosh Φ = −⟨T, V₁⟩` with the sign of `θ` fixed by
/// `sinh Φ = ⟨N, V₁⟩` (the tangent relation `V₁ = cosh Φ T + sinh Φ N`).
///
/// `check_tol` bounds the residual of `cosh²Φ − sinh²Φ = 1` computed from
/// the raw inner products; failing it means `V₁` does not lie in the
/// tangent-normal plane of the first frame.
pub fn extract_phi(frame_a: &DualFrame, frame_b: &DualFrame, check_tol: f64) -> Result<DualScalar> {
    let ch = -(frame_a.tangent.dot(frame_b.tangent));
    let sh = frame_a.normal.dot(frame_b.tangent);
    if ch.re < 1.0 - 1e-9 {
        return Err(Error::InversionDomain(format!(
            "tangents have ⟨T,V₁⟩.re = {}; the pair needs a common time cone (cosh Φ ≥ 1)",
            -ch.re
        )));
    }
    let unit = ch * ch - sh * sh;
    if (unit.re - 1.0).abs() > check_tol || unit.du.abs() > check_tol {
        return Err(Error::InversionDomain(format!(
            "cosh²Φ − sinh²Φ = {unit} deviates from 1 beyond {check_tol:e}; the partner tangent \
             leaves the tangent-normal plane"
        )));
    }
    // asinh is smooth through θ = 0, so both components stay stable there.
    let theta = sh.re.asinh();
    let theta_star = sh.du / theta.cosh();
    Ok(DualScalar::new(theta, theta_star))
}

/// Outcome of the pairwise Mannheim check, with the per-sample data needed
/// downstream.
pub struct PairCheck {
    pub is_pair: bool,
    /// max over samples of ||⟨B_α, V₂⟩.re| − 1|.
    pub collinearity_max_re_dev: f64,
    /// max over samples of |⟨B_α, V₂⟩.du| (sign-aligned).
    pub collinearity_max_du: f64,
    /// ⟨B_α, V₂⟩ per sample.
    pub collinearity: Vec<DualScalar>,
    /// Pointwise dual distance ‖β̃ − α̃‖.
    pub distance: Vec<DualScalar>,
    pub distance_spread_re: f64,
    pub distance_spread_du: f64,
    pub alpha_frames: Vec<DualFrame>,
    pub beta_frames: Vec<DualFrame>,
}

/// Checks the Mannheim property over a shared grid: the binormal of the
/// first curve collinear with the partner's principal normal at every
/// corresponding sample (within `tol`, after sign alignment), and constant
/// pointwise dual distance (within `tol`).
pub fn verify_pair(alpha: &Curve, beta: &Curve, ts: &[f64], tol: f64) -> Result<PairCheck> {
    if ts.len() < 3 {
        return Err(Error::Input(
            "correspondence grid needs at least 3 samples".into(),
        ));
    }
    if !ts.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Input(
            "correspondence grid must be strictly increasing".into(),
        ));
    }
    for (name, c) in [("alpha", alpha), ("beta", beta)] {
        let (lo, hi) = c.range();
        let slack = 1e-9 * (hi - lo).abs().max(1.0);
        if ts[0] < lo - slack || ts[ts.len() - 1] > hi + slack {
            return Err(Error::Input(format!(
                "correspondence grid [{}, {}] leaves the {name} curve range [{lo}, {hi}]",
                ts[0],
                ts[ts.len() - 1]
            )));
        }
    }

    let alpha_frames = alpha.sample_frames(ts)?;
    let beta_frames = beta.sample_frames(ts)?;

    let mut collinearity = Vec::with_capacity(ts.len());
    let mut distance = Vec::with_capacity(ts.len());
    let (mut col_re_dev, mut col_du) = (0.0f64, 0.0f64);
    for (fa, fb) in alpha_frames.iter().zip(&beta_frames) {
        let c = fa.binormal.dot(fb.normal);
        col_re_dev = col_re_dev.max((c.re.abs() - 1.0).abs());
        col_du = col_du.max(c.du.abs());
        collinearity.push(c);
        // Coincident points (λ = 0 offsets, self-comparison) have zero
        // separation, whose dual norm is taken as zero.
        let diff = fb.position - fa.position;
        let d = if diff.re.norm_sq_euclidean() == 0.0 && diff.du.norm_sq_euclidean() == 0.0 {
            DualScalar::ZERO
        } else {
            diff.norm()?
        };
        distance.push(d);
    }
    let spread = |sel: fn(&DualScalar) -> f64| -> f64 {
        let (lo, hi) = distance
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                (lo.min(sel(d)), hi.max(sel(d)))
            });
        hi - lo
    };
    let distance_spread_re = spread(|d| d.re);
    let distance_spread_du = spread(|d| d.du);

    let is_pair = col_re_dev <= tol
        && col_du <= tol
        && distance_spread_re <= tol
        && distance_spread_du <= tol;

    Ok(PairCheck {
        is_pair,
        collinearity_max_re_dev: col_re_dev,
        collinearity_max_du: col_du,
        collinearity,
        distance,
        distance_spread_re,
        distance_spread_du,
        alpha_frames,
        beta_frames,
    })
}

/// Curvature centers of corresponding points and the four dual distances of
/// the osculating-circle ratio, computed from the center definitions
/// `M = α̃ + (1/κ)N`, `M* = β̃ + (1/P)V₂` rather than any collinearity
/// shortcut.
#[derive(Debug, Clone, Copy)]
pub struct CenterRatio {
    pub m: DualVec3,
    pub m_star: DualVec3,
    pub dist_beta_m: DualScalar,
    pub dist_alpha_m: DualScalar,
    pub dist_beta_mstar: DualScalar,
    pub dist_alpha_mstar: DualScalar,
    /// `(‖β̃M‖/‖α̃M‖) : (‖β̃M*‖/‖α̃M*‖)` as a dual scalar.
    pub ratio: DualScalar,
}

pub fn curvature_center_ratio(frame_a: &DualFrame, frame_b: &DualFrame) -> Result<CenterRatio> {
    let m = frame_a.position + frame_a.normal.scale(frame_a.kappa.recip()?);
    let m_star = frame_b.position + frame_b.normal.scale(frame_b.kappa.recip()?);
    let dist_beta_m = (m - frame_b.position).norm()?;
    let dist_alpha_m = (m - frame_a.position).norm()?;
    let dist_beta_mstar = (m_star - frame_b.position).norm()?;
    let dist_alpha_mstar = (m_star - frame_a.position).norm()?;
    let left = dist_beta_m.div(dist_alpha_m)?;
    let right = dist_beta_mstar.div(dist_alpha_mstar)?;
    Ok(CenterRatio {
        m,
        m_star,
        dist_beta_m,
        dist_alpha_m,
        dist_beta_mstar,
        dist_alpha_mstar,
        ratio: left.div(right)?,
    })
}

/// Inputs of the real/dual component splits at one sample. `tau` must be the
/// aligned torsion and `w` the pair rate ds*/ds used by the dual residuals.
#[derive(Debug, Clone, Copy)]
pub struct SplitInput {
    pub tau: DualScalar,
    pub p: DualScalar,
    pub q: DualScalar,
    pub phi: DualScalar,
    pub w: DualScalar,
    pub lambda: DualScalar,
}

/// One identity's residual computed separately in each component from the
/// expanded real/dual formulas.
#[derive(Debug, Clone, Copy)]
pub struct SplitRecord {
    pub name: &'static str,
    pub re: f64,
    pub du: f64,
}

/// Componentwise residual formulas for the split-form identities, valid for
/// real `λ` (the splits are stated with a real offset constant `c`).
///
/// Each record reassembles exactly (to rounding) to the corresponding dual
/// residual evaluated in dual arithmetic; the expansions keep the dual part
/// of the rate factor `w`, which the abbreviated forms drop.
pub fn split_components(inp: &SplitInput) -> Result<Vec<SplitRecord>> {
    if inp.lambda.du != 0.0 {
        return Err(Error::Input(format!(
            "component splits assume a real offset constant; lambda has dual part {}",
            inp.lambda.du
        )));
    }
    let c = inp.lambda.re;
    if c == 0.0 {
        return Err(Error::Input("component splits need nonzero lambda".into()));
    }
    let (k2, k2s) = (inp.tau.re, inp.tau.du);
    let (p, ps) = (inp.p.re, inp.p.du);
    let (q, qs) = (inp.q.re, inp.q.du);
    let (th, ths) = (inp.phi.re, inp.phi.du);
    let (w, ws) = (inp.w.re, inp.w.du);
    let (sh, ch) = (th.sinh(), th.cosh());

    Ok(vec![
        // τ = P/(λQ): real part p/(cq), dual part (p*q − pq*)/(cq²).
        SplitRecord {
            name: "torsion_quotient_split",
            re: k2 - p / (c * q),
            du: k2s - (ps * q - p * qs) / (c * q * q),
        },
        // λ(P² − Q²) = P: real part c(p² − q²) = p, dual part 2c(pp* − qq*) = p*.
        SplitRecord {
            name: "pair_condition_split",
            re: c * (p * p - q * q) - p,
            du: 2.0 * c * (p * ps - q * qs) - ps,
        },
        // τ = −(P sinh Φ + Q cosh Φ)·(ds*/ds).
        SplitRecord {
            name: "torsion_angle_projection_split",
            re: k2 + (p * sh + q * ch) * w,
            du: k2s
                + (p * sh + q * ch) * ws
                + (ps * sh + p * ths * ch + qs * ch + q * ths * sh) * w,
        },
        // P = τ sinh Φ cosh Φ.
        SplitRecord {
            name: "curvature_back_projection_split",
            re: p - k2 * sh * ch,
            du: ps - k2s * sh * ch - k2 * ths * (ch * ch + sh * sh),
        },
        // Q = −τ cosh²Φ.
        SplitRecord {
            name: "torsion_back_projection_split",
            re: q + k2 * ch * ch,
            du: qs + k2s * ch * ch + 2.0 * k2 * ths * sh * ch,
        },
    ])
}

/// Dual-arithmetic counterparts of the split identities, for reassembly
/// checks: returns (name, dual residual) in the same order as
/// [`split_components`].
pub fn split_dual_residuals(inp: &SplitInput) -> Result<Vec<(&'static str, DualScalar)>> {
    let (sh, ch) = hyperbolic_pair(inp.phi)?;
    let lam = inp.lambda;
    let tq = inp.tau - inp.p.div(lam * inp.q)?;
    let pc = lam * (inp.p * inp.p - inp.q * inp.q) - inp.p;
    let proj = inp.tau + (inp.p * sh + inp.q * ch) * inp.w;
    let back_p = inp.p - inp.tau * sh * ch;
    let back_q = inp.q + inp.tau * ch * ch;
    Ok(vec![
        ("torsion_quotient_split", tq),
        ("pair_condition_split", pc),
        ("torsion_angle_projection_split", proj),
        ("curvature_back_projection_split", back_p),
        ("torsion_back_projection_split", back_q),
    ])
}
