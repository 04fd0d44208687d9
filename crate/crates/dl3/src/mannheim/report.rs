//! Per-sample and aggregate residual reports for Mannheim pairs.
//!
//! Every identity relating the pair's invariants is evaluated wholly in dual
//! arithmetic at each correspondence sample, as a left-minus-right residual;
//! the report stores per-sample values and per-identity aggregates, plus
//! classification verdicts. Relations that hinge on a sign convention are
//! evaluated in both variants and recorded as data rather than silently
//! choosing:
//!
//! - both sign variants of the squared-angle relations
//!   (`cosh²Φ = ±(1 ∓ λP)`, `sinh²Φ = ∓λ²τQ`),
//! - both candidates for the coefficient `μ` in `μQ + λP = 1`
//!   (`λ coth Φ`, which satisfies the identity, and `λ tanh Φ`, which does
//!   not),
//! - both closed forms of the curvature-center ratio next to the directly
//!   computed value.
//!
//! The torsion of the first curve is reported in the frame whose binormal is
//! aligned with the partner's principal normal (`sign` per sample); the pair
//! rate ds*/ds is `1/cosh Φ`, cross-checked against the quotient of the two
//! dual speeds as the `speed_ratio_consistency` residual.

use super::{
    curvature_center_ratio, extract_phi, split_components, split_dual_residuals, verify_pair,
    CenterRatio, SplitInput,
};
use crate::curve::Curve;
use crate::dual::{hyperbolic_pair, DualScalar};
use crate::error::{Error, Result};
use crate::exec;
use serde::Serialize;
use std::collections::BTreeMap;

/// How much of the report to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportLevel {
    /// Pair verdict plus identity residuals.
    Verify,
    /// Everything: adds the real/dual component splits.
    Theorems,
}

#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub lambda: DualScalar,
    pub tol: f64,
    pub level: ReportLevel,
    /// Synthesis step count, when known (recorded in meta).
    pub steps: Option<usize>,
    /// Curvature branch label, when the pair came from synthesis.
    pub branch: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportMeta {
    pub lambda_re: f64,
    pub lambda_du: f64,
    pub range: [f64; 2],
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    pub level: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityStats {
    pub name: String,
    pub max_residual_re: f64,
    pub max_residual_du: f64,
    pub mean_residual_re: f64,
    pub mean_residual_du: f64,
    /// Samples where this identity was undefined (excluded from aggregates).
    pub flagged_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub is_pair: bool,
    pub collinearity_max_abs: f64,
    pub distance_spread_re: f64,
    pub distance_spread_du: f64,
    /// [min, max] of the torsion product (τ·Q).re over the grid.
    pub schell_product_range: [f64; 2],
    /// [min, max] of the directly computed curvature-center ratio (real part).
    pub mannheim_ratio_range: [f64; 2],
    /// −1 when (τ·Q).re < 0 at every sample, +1 when positive everywhere,
    /// 0 when mixed.
    pub torsion_sign_product: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub t: f64,
    pub s_re: f64,
    pub s_du: f64,
    pub s_star_re: f64,
    pub s_star_du: f64,
    /// Sign aligning the first curve's binormal with the partner normal.
    pub sign: f64,
    pub phi_re: f64,
    pub phi_du: f64,
    pub kappa_re: f64,
    pub kappa_du: f64,
    /// Torsion of the first curve in the aligned frame.
    pub tau_re: f64,
    pub tau_du: f64,
    pub p_re: f64,
    pub p_du: f64,
    pub q_re: f64,
    pub q_du: f64,
    /// ds*/ds = 1/cosh Φ.
    pub speed_ratio_re: f64,
    pub speed_ratio_du: f64,
    pub distance_re: f64,
    pub distance_du: f64,
    pub collinearity_re: f64,
    pub collinearity_du: f64,
    pub schell_re: f64,
    pub schell_du: f64,
    pub center_ratio_re: f64,
    pub center_ratio_du: f64,
    /// Residual [re, du] per identity; flagged identities are absent here.
    pub residuals: BTreeMap<String, [f64; 2]>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitStats {
    pub name: String,
    /// Largest componentwise-formula residuals over the grid.
    pub max_formula_re: f64,
    pub max_formula_du: f64,
    /// Largest difference between the component formulas and the components
    /// of the dual-arithmetic residual.
    pub max_reassembly_re: f64,
    pub max_reassembly_du: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitSummary {
    pub lambda_re: f64,
    pub identities: Vec<SplitStats>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MannheimReport {
    pub meta: ReportMeta,
    pub identities: Vec<IdentityStats>,
    pub verdicts: Verdicts,
    pub samples: Vec<SampleRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splits: Option<SplitSummary>,
}

impl MannheimReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn identity(&self, name: &str) -> Option<&IdentityStats> {
        self.identities.iter().find(|i| i.name == name)
    }
}

/// Per-sample quantities that survive into residual evaluation.
struct Core {
    sigma: f64,
    tau: DualScalar,
    kappa: DualScalar,
    p: DualScalar,
    q: DualScalar,
    phi: Option<DualScalar>,
    sh: DualScalar,
    ch: DualScalar,
    w: DualScalar,
    v_alpha: DualScalar,
    v_beta: DualScalar,
    center: Option<CenterRatio>,
    flags: Vec<String>,
}

fn minmax(values: impl Iterator<Item = f64>) -> [f64; 2] {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    [lo, hi]
}

/// Builds the full residual report for a candidate pair over a shared
/// uniform grid. The pair verdict is evaluated first; when the curves fail
/// the pair property the angle-dependent identities are flagged per sample
/// rather than aborting, so a failing report is still written.
pub fn theorem_report(
    alpha: &Curve,
    beta: &Curve,
    ts: &[f64],
    cfg: &ReportConfig,
) -> Result<MannheimReport> {
    let n = ts.len();
    if n < 3 {
        return Err(Error::Input("report grid needs at least 3 samples".into()));
    }
    let h = ts[1] - ts[0];
    if !ts
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0))
    {
        return Err(Error::Input("report grid must be uniform".into()));
    }

    let check = verify_pair(alpha, beta, ts, cfg.tol)?;
    let s_alpha = alpha.arc_lengths(ts)?;
    let s_beta = beta.arc_lengths(ts)?;
    let lam = cfg.lambda;

    // Phase 1: per-sample frame-local quantities, in parallel.
    let cores: Vec<Core> = exec::try_map_range(n, |i| {
        let fa = &check.alpha_frames[i];
        let fb = &check.beta_frames[i];
        let mut flags = Vec::new();
        let sigma = if check.collinearity[i].re < 0.0 {
            -1.0
        } else {
            1.0
        };
        let tau = fa.tau * sigma;
        let phi = match extract_phi(fa, fb, cfg.tol.max(1e-10)) {
            Ok(v) => Some(v),
            Err(_) => {
                flags.push("angle_extraction_failed".to_string());
                None
            }
        };
        let (sh, ch) = match phi {
            Some(v) => hyperbolic_pair(v)?,
            None => (DualScalar::ZERO, DualScalar::ONE),
        };
        let w = ch.recip()?;
        let center = match curvature_center_ratio(fa, fb) {
            Ok(c) => Some(c),
            Err(_) => {
                flags.push("center_ratio_undefined".to_string());
                None
            }
        };
        Ok(Core {
            sigma,
            tau,
            kappa: fa.kappa,
            p: fb.kappa,
            q: fb.tau,
            phi,
            sh,
            ch,
            w,
            v_alpha: alpha.speed(ts[i])?,
            v_beta: beta.speed(ts[i])?,
            center,
            flags,
        })
    })?;

    // Phase 2 (sequential): stencil derivatives, means, residual assembly.
    let phis: Vec<Option<DualScalar>> = cores.iter().map(|c| c.phi).collect();
    let dphi_ds = |i: usize| -> Option<DualScalar> {
        let dphi_dx = if i == 0 {
            let (a, b, c) = (phis[0]?, phis[1]?, phis[2]?);
            (a * -3.0 + b * 4.0 - c) * (0.5 / h)
        } else if i == n - 1 {
            let (a, b, c) = (phis[n - 1]?, phis[n - 2]?, phis[n - 3]?);
            (a * 3.0 - b * 4.0 + c) * (0.5 / h)
        } else {
            (phis[i + 1]? - phis[i - 1]?) * (0.5 / h)
        };
        dphi_dx.div(cores[i].v_alpha).ok()
    };

    let dist_mean = {
        let mut acc = DualScalar::ZERO;
        for d in &check.distance {
            acc += *d;
        }
        acc * (1.0 / n as f64)
    };

    let mut per_sample: Vec<BTreeMap<String, [f64; 2]>> = Vec::with_capacity(n);
    let mut flags_per_sample: Vec<Vec<String>> = cores.iter().map(|c| c.flags.clone()).collect();

    for (i, core) in cores.iter().enumerate() {
        let mut residuals: BTreeMap<String, [f64; 2]> = BTreeMap::new();
        let flag = |flags: &mut Vec<String>, name: &str| flags.push(name.to_string());
        let put = |map: &mut BTreeMap<String, [f64; 2]>, name: &str, v: DualScalar| {
            map.insert(name.to_string(), [v.re, v.du]);
        };
        let (p, q, tau, kappa) = (core.p, core.q, core.tau, core.kappa);
        let (sh, ch, w) = (core.sh, core.ch, core.w);
        let angle_ok = core.phi.is_some();

        // Identities that need only the invariants.
        match p.div(lam * q) {
            Ok(rhs) => put(&mut residuals, "torsion_quotient", tau - rhs),
            Err(_) => flag(&mut flags_per_sample[i], "torsion_quotient"),
        }
        put(&mut residuals, "pair_condition", lam * (p * p - q * q) - p);
        put(
            &mut residuals,
            "distance_constancy",
            check.distance[i] - dist_mean,
        );

        if angle_ok {
            // μ candidates for μQ + λP = 1.
            if sh.re.abs() > 1e-12 {
                let coth = ch.div(sh).expect("sh.re nonzero");
                put(
                    &mut residuals,
                    "normal_coeff_sum_coth",
                    lam * coth * q + lam * p - DualScalar::ONE,
                );
            } else {
                flag(&mut flags_per_sample[i], "normal_coeff_sum_coth");
            }
            let tanh = sh.div(ch).expect("ch.re ≥ 1");
            put(
                &mut residuals,
                "normal_coeff_sum_tanh",
                lam * tanh * q + lam * p - DualScalar::ONE,
            );

            // Angle-rate identity κ = −dΦ/ds; undefined where sinh Φ
            // crosses zero (the angle magnitude kinks there).
            if sh.re.abs() > 1e-8 {
                match dphi_ds(i) {
                    Some(rate) => put(&mut residuals, "curvature_angle_rate", kappa + rate),
                    None => flag(&mut flags_per_sample[i], "curvature_angle_rate"),
                }
            } else {
                flag(&mut flags_per_sample[i], "curvature_angle_rate");
            }

            put(
                &mut residuals,
                "torsion_angle_projection",
                tau + (p * sh + q * ch) * w,
            );
            put(
                &mut residuals,
                "curvature_back_projection",
                p - tau * sh * ch,
            );
            put(&mut residuals, "torsion_back_projection", q + tau * ch * ch);
            put(
                &mut residuals,
                "invariant_square_difference",
                q * q - p * p - tau * tau * ch * ch,
            );

            // Both sign variants of the squared-angle relations.
            let lam2tq = lam * lam * tau * q;
            put(
                &mut residuals,
                "angle_cosh_sq_plus",
                ch * ch + (DualScalar::ONE + lam * p),
            );
            put(&mut residuals, "angle_sinh_sq_plus", sh * sh - lam2tq);
            put(
                &mut residuals,
                "angle_cosh_sq_minus",
                ch * ch - (DualScalar::ONE - lam * p),
            );
            put(&mut residuals, "angle_sinh_sq_minus", sh * sh + lam2tq);

            // ds*/ds = 1/cosh Φ against the quotient of dual speeds.
            match core.v_beta.div(core.v_alpha) {
                Ok(rate) => put(&mut residuals, "speed_ratio_consistency", w - rate),
                Err(_) => flag(&mut flags_per_sample[i], "speed_ratio_consistency"),
            }

            // Frame relation: V₁ = chT + shN, V₂ = σB, V₃ = shT + chN.
            let fa = &check.alpha_frames[i];
            let fb = &check.beta_frames[i];
            let r1 = fb.tangent - (fa.tangent.scale(ch) + fa.normal.scale(sh));
            let r2 = fb.normal - fa.binormal.scale(DualScalar::from_re(core.sigma));
            let r3 = fb.binormal - (fa.tangent.scale(sh) + fa.normal.scale(ch));
            let mut max_re = 0.0f64;
            let mut max_du = 0.0f64;
            for r in [r1, r2, r3] {
                for k in 0..3 {
                    let c = r.component(k);
                    max_re = max_re.max(c.re.abs());
                    max_du = max_du.max(c.du.abs());
                }
            }
            residuals.insert("frame_relation".to_string(), [max_re, max_du]);
        } else {
            for name in [
                "normal_coeff_sum_coth",
                "normal_coeff_sum_tanh",
                "curvature_angle_rate",
                "torsion_angle_projection",
                "curvature_back_projection",
                "torsion_back_projection",
                "invariant_square_difference",
                "angle_cosh_sq_plus",
                "angle_sinh_sq_plus",
                "angle_cosh_sq_minus",
                "angle_sinh_sq_minus",
                "speed_ratio_consistency",
                "frame_relation",
            ] {
                flag(&mut flags_per_sample[i], name);
            }
        }

        // Curvature-center ratio against both closed forms.
        if let Some(center) = &core.center {
            let product_form = (DualScalar::ONE + kappa * p) * (DualScalar::ONE + lam * p);
            put(
                &mut residuals,
                "center_ratio_product_form",
                center.ratio - product_form,
            );
            match (DualScalar::ONE - lam * lam * kappa * kappa).sqrt() {
                Ok(root) => put(
                    &mut residuals,
                    "center_ratio_root_form",
                    center.ratio - (DualScalar::ONE + lam * p) * root,
                ),
                Err(_) => flag(&mut flags_per_sample[i], "center_ratio_root_form"),
            }
        } else {
            flag(&mut flags_per_sample[i], "center_ratio_product_form");
            flag(&mut flags_per_sample[i], "center_ratio_root_form");
        }

        per_sample.push(residuals);
    }

    // Aggregates per identity.
    let mut names: Vec<String> = Vec::new();
    for m in &per_sample {
        for k in m.keys() {
            if !names.contains(k) {
                names.push(k.clone());
            }
        }
    }
    for f in &flags_per_sample {
        for k in f {
            if k != "angle_extraction_failed" && k != "center_ratio_undefined" && !names.contains(k)
            {
                names.push(k.clone());
            }
        }
    }
    names.sort();
    let identities: Vec<IdentityStats> = names
        .iter()
        .map(|name| {
            let mut max_re = 0.0f64;
            let mut max_du = 0.0f64;
            let mut sum_re = 0.0f64;
            let mut sum_du = 0.0f64;
            let mut count = 0usize;
            for m in &per_sample {
                if let Some([re, du]) = m.get(name) {
                    max_re = max_re.max(re.abs());
                    max_du = max_du.max(du.abs());
                    sum_re += re.abs();
                    sum_du += du.abs();
                    count += 1;
                }
            }
            IdentityStats {
                name: name.clone(),
                max_residual_re: max_re,
                max_residual_du: max_du,
                mean_residual_re: if count > 0 {
                    sum_re / count as f64
                } else {
                    f64::NAN
                },
                mean_residual_du: if count > 0 {
                    sum_du / count as f64
                } else {
                    f64::NAN
                },
                flagged_samples: n - count,
            }
        })
        .collect();

    // Verdicts.
    let schell: Vec<DualScalar> = cores.iter().map(|c| c.tau * c.q).collect();
    let schell_range = minmax(schell.iter().map(|s| s.re));
    let ratio_range = minmax(
        cores
            .iter()
            .filter_map(|c| c.center.as_ref().map(|r| r.ratio.re)),
    );
    let torsion_sign_product = if schell.iter().all(|s| s.re < 0.0) {
        -1.0
    } else if schell.iter().all(|s| s.re > 0.0) {
        1.0
    } else {
        0.0
    };
    let verdicts = Verdicts {
        is_pair: check.is_pair,
        collinearity_max_abs: check.collinearity_max_re_dev.max(check.collinearity_max_du),
        distance_spread_re: check.distance_spread_re,
        distance_spread_du: check.distance_spread_du,
        schell_product_range: schell_range,
        mannheim_ratio_range: ratio_range,
        torsion_sign_product,
    };

    // Sample records.
    let samples: Vec<SampleRecord> = (0..n)
        .map(|i| {
            let c = &cores[i];
            let phi = c.phi.unwrap_or(DualScalar::new(f64::NAN, f64::NAN));
            let ratio = c
                .center
                .map(|r| r.ratio)
                .unwrap_or(DualScalar::new(f64::NAN, f64::NAN));
            SampleRecord {
                t: ts[i],
                s_re: s_alpha[i].re,
                s_du: s_alpha[i].du,
                s_star_re: s_beta[i].re,
                s_star_du: s_beta[i].du,
                sign: c.sigma,
                phi_re: phi.re,
                phi_du: phi.du,
                kappa_re: c.kappa.re,
                kappa_du: c.kappa.du,
                tau_re: c.tau.re,
                tau_du: c.tau.du,
                p_re: c.p.re,
                p_du: c.p.du,
                q_re: c.q.re,
                q_du: c.q.du,
                speed_ratio_re: c.w.re,
                speed_ratio_du: c.w.du,
                distance_re: check.distance[i].re,
                distance_du: check.distance[i].du,
                collinearity_re: check.collinearity[i].re,
                collinearity_du: check.collinearity[i].du,
                schell_re: schell[i].re,
                schell_du: schell[i].du,
                center_ratio_re: ratio.re,
                center_ratio_du: ratio.du,
                residuals: per_sample[i].clone(),
                flags: flags_per_sample[i].clone(),
            }
        })
        .collect();

    // Component splits (full level, real λ only).
    let splits = if cfg.level == ReportLevel::Theorems && lam.du == 0.0 && lam.re != 0.0 {
        let mut stats: BTreeMap<&'static str, SplitStats> = BTreeMap::new();
        for core in cores.iter() {
            let Some(phi) = core.phi else { continue };
            let inp = SplitInput {
                tau: core.tau,
                p: core.p,
                q: core.q,
                phi,
                w: core.w,
                lambda: lam,
            };
            let formulas = split_components(&inp)?;
            let duals = split_dual_residuals(&inp)?;
            for (rec, (name, dual)) in formulas.iter().zip(&duals) {
                debug_assert_eq!(rec.name, *name);
                let e = stats.entry(rec.name).or_insert_with(|| SplitStats {
                    name: rec.name.to_string(),
                    max_formula_re: 0.0,
                    max_formula_du: 0.0,
                    max_reassembly_re: 0.0,
                    max_reassembly_du: 0.0,
                });
                e.max_formula_re = e.max_formula_re.max(rec.re.abs());
                e.max_formula_du = e.max_formula_du.max(rec.du.abs());
                e.max_reassembly_re = e.max_reassembly_re.max((rec.re - dual.re).abs());
                e.max_reassembly_du = e.max_reassembly_du.max((rec.du - dual.du).abs());
            }
        }
        Some(SplitSummary {
            lambda_re: lam.re,
            identities: stats.into_values().collect(),
        })
    } else {
        None
    };

    Ok(MannheimReport {
        meta: ReportMeta {
            lambda_re: lam.re,
            lambda_du: lam.du,
            range: [ts[0], ts[n - 1]],
            samples: n,
            steps: cfg.steps,
            tol: cfg.tol,
            branch: cfg.branch.clone(),
            level: match cfg.level {
                ReportLevel::Verify => "verify".to_string(),
                ReportLevel::Theorems => "theorems".to_string(),
            },
        },
        identities,
        verdicts,
        samples,
        splits,
    })
}
