//! Dual space curves `α̃(t) = α(t) + εα*(t)` and their differential geometry.
//!
//! A [`CurveSpec`] declares a curve (built-in family, component expressions,
//! prescribed invariants, or a sampled table); [`Curve`] is the realized
//! evaluator. Jets up to order 3 are analytic for built-in families, come
//! from Richardson-extrapolated central differences for expression curves
//! (ε-free: the dual slot carries the curve's own dual part, never a
//! differentiation seed), and from 5-point polynomial windows for tables.
//!
//! Dual arc length is `s̃ = ∫ ‖α̃′(t)‖ dt`, evaluated by adaptive
//! Gauss-Legendre quadrature in dual arithmetic.

pub mod frenet;
pub mod integrate;
pub mod quad;
pub mod table;

use crate::dual::DualScalar;
use crate::dual_vec::DualVec3;
use crate::error::{Error, Result};
use crate::exec;
use crate::expr::Expr;
use crate::lorentz::{CausalClass, RealVec3};
use std::collections::BTreeMap;

pub use table::{format_g17, SampledTable, CSV_HEADER};

/// Curvature below this threshold counts as a degenerate frame.
pub const KAPPA_THRESHOLD: f64 = 1e-10;

/// Panel tolerance of the arc-length quadrature.
pub const ARC_PANEL_TOL: f64 = 1e-10;

/// Registered analytic curve families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinFamily {
    /// `γ(s) = (a sinh(s/c), a cosh(s/c), b s/c)` with `c = √(a² − b²)`;
    /// unit-speed timelike for `a² > b²`, with constant curvature `a/c²`
    /// and torsion `b/c²`.
    TimelikeHyperbolicHelix { a: f64, b: f64 },
}

impl BuiltinFamily {
    /// Looks a family up by registry name and validates its parameters.
    pub fn from_registry(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        match name {
            "timelike_hyperbolic_helix" => {
                let get = |k: &str| {
                    params.get(k).copied().ok_or_else(|| {
                        Error::Input(format!("family `{name}` requires parameter `{k}`"))
                    })
                };
                let a = get("a")?;
                let b = get("b")?;
                for k in params.keys() {
                    if k != "a" && k != "b" {
                        return Err(Error::Input(format!(
                            "family `{name}` does not take parameter `{k}`"
                        )));
                    }
                }
                if a * a <= b * b {
                    return Err(Error::Input(format!(
                        "timelike_hyperbolic_helix requires a² > b², got a = {a}, b = {b}"
                    )));
                }
                Ok(BuiltinFamily::TimelikeHyperbolicHelix { a, b })
            }
            other => Err(Error::Input(format!(
                "unknown builtin family `{other}` (known: timelike_hyperbolic_helix)"
            ))),
        }
    }

    fn jet(&self, t: f64, order: usize) -> Vec<DualVec3> {
        match *self {
            BuiltinFamily::TimelikeHyperbolicHelix { a, b } => {
                let c = (a * a - b * b).sqrt();
                let u = t / c;
                let (sh, ch) = (u.sinh(), u.cosh());
                let mut out = vec![DualVec3::from_re(RealVec3::new(a * sh, a * ch, b * u))];
                let derivs = [
                    RealVec3::new(a / c * ch, a / c * sh, b / c),
                    RealVec3::new(a / (c * c) * sh, a / (c * c) * ch, 0.0),
                    RealVec3::new(a / (c * c * c) * ch, a / (c * c * c) * sh, 0.0),
                ];
                for d in derivs.iter().take(order) {
                    out.push(DualVec3::from_re(*d));
                }
                out
            }
        }
    }
}

/// Where a curve's geometry comes from.
#[derive(Debug, Clone)]
pub enum CurveSource {
    Builtin(BuiltinFamily),
    /// Real and dual component expressions in the parameter `s`.
    Expressions {
        re: [(Expr, String); 3],
        du: [(Expr, String); 3],
    },
    /// Curvature and torsion expressions; realized by integrating the frame
    /// system from `frame0` (canonical frame when `None`).
    Invariants {
        p: (Expr, String),
        q: (Expr, String),
        frame0: Option<integrate::FrameTriple>,
    },
    Table(SampledTable),
}

/// Declarative curve definition: source, parameter range, sample count.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub source: CurveSource,
    pub range: (f64, f64),
    pub samples: usize,
}

impl CurveSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.range.0 < self.range.1) {
            return Err(Error::Input(format!(
                "degenerate parameter range [{}, {}]",
                self.range.0, self.range.1
            )));
        }
        if self.samples < 8 {
            return Err(Error::Input(format!(
                "sample count {} below minimum 8",
                self.samples
            )));
        }
        if let CurveSource::Table(t) = &self.source {
            let (a, b) = t.range();
            if (a - self.range.0).abs() > 1e-9 || (b - self.range.1).abs() > 1e-9 {
                return Err(Error::Input(
                    "table range disagrees with declared range".into(),
                ));
            }
        }
        Ok(())
    }

    /// Uniform sample grid over the declared range.
    pub fn grid(&self) -> Vec<f64> {
        linspace(self.range.0, self.range.1, self.samples)
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * step })
        .collect()
}

/// Per-node data of a curve realized from integrated frames: exact jets at
/// the nodes, polynomial windows off-node.
#[derive(Debug, Clone)]
pub struct NodeData {
    pub jets: Vec<[DualVec3; 4]>,
    table: SampledTable,
}

impl NodeData {
    pub fn new(ts: Vec<f64>, jets: Vec<[DualVec3; 4]>) -> Result<Self> {
        let rows = jets.iter().map(|j| j[0]).collect();
        let table = SampledTable::new(ts, rows)?;
        Ok(Self { jets, table })
    }
}

#[derive(Debug, Clone)]
enum CurveImpl {
    Analytic(BuiltinFamily),
    Expressions {
        re: [(Expr, String); 3],
        du: [(Expr, String); 3],
    },
    Table(SampledTable),
    Nodes(NodeData),
}

/// A realized curve: jet evaluation, arc length, Frenet data.
#[derive(Debug, Clone)]
pub struct Curve {
    imp: CurveImpl,
    range: (f64, f64),
    samples: usize,
}

/// A curve point's full Frenet data.
///
/// The frame satisfies `⟨T,T⟩ = −1`, `⟨N,N⟩ = ⟨B,B⟩ = 1`, cross terms zero;
/// `kappa.re ≥ 0` with the normal's orientation absorbing the sign, and
/// `B = N ∧ T` so that the frame derivative equations hold with the torsion
/// sign this crate uses throughout (the hyperbolic helix has `τ = b/c² > 0`).
#[derive(Debug, Clone, Copy)]
pub struct DualFrame {
    /// Dual arc length from the curve's range start.
    pub s: DualScalar,
    pub position: DualVec3,
    pub tangent: DualVec3,
    pub normal: DualVec3,
    pub binormal: DualVec3,
    pub kappa: DualScalar,
    pub tau: DualScalar,
    /// Rate of the arc-length dual part per unit real arc length, ds*/ds.
    pub speed_ratio: DualScalar,
}

/// Richardson-extrapolated central differences, ε-free, with the base step
/// scaled by derivative order: 1e-4·max(1,|t|) for order 1, 1e-3 for order 2,
/// 1e-2 for order 3 (third-derivative stencils at the order-1 step would
/// drown in rounding noise).
fn fd_derivative<F>(f: &F, t: f64, order: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let scale = 1.0f64.max(t.abs());
    let d = |h: f64| -> Result<f64> {
        Ok(match order {
            1 => (f(t + h)? - f(t - h)?) / (2.0 * h),
            2 => (f(t + h)? - 2.0 * f(t)? + f(t - h)?) / (h * h),
            _ => {
                (f(t + 2.0 * h)? - 2.0 * f(t + h)? + 2.0 * f(t - h)? - f(t - 2.0 * h)?)
                    / (2.0 * h * h * h)
            }
        })
    };
    let h = match order {
        1 => 1e-4,
        2 => 1e-3,
        _ => 1e-2,
    } * scale;
    let coarse = d(h)?;
    let fine = d(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

impl Curve {
    /// Realizes a spec. Invariants sources integrate the frame system once,
    /// with `samples − 1` fixed steps.
    pub fn realize(spec: &CurveSpec) -> Result<Curve> {
        spec.validate()?;
        let imp = match &spec.source {
            CurveSource::Builtin(f) => CurveImpl::Analytic(*f),
            CurveSource::Expressions { re, du } => CurveImpl::Expressions {
                re: re.clone(),
                du: du.clone(),
            },
            CurveSource::Table(t) => CurveImpl::Table(t.clone()),
            CurveSource::Invariants { p, q, frame0 } => {
                let pf = integrate::InvariantFn::from_expr(p.0.clone(), p.1.clone());
                let qf = integrate::InvariantFn::from_expr(q.0.clone(), q.1.clone());
                let frame0 = frame0.unwrap_or_else(integrate::FrameTriple::canonical);
                let ic = integrate::integrate_from_invariants(
                    &pf,
                    &qf,
                    &frame0,
                    spec.range,
                    spec.samples - 1,
                )?;
                CurveImpl::Nodes(ic.into_node_data()?)
            }
        };
        Ok(Curve {
            imp,
            range: spec.range,
            samples: spec.samples,
        })
    }

    /// Wraps precomputed node jets (integrated curves, partner limbs).
    pub fn from_node_data(data: NodeData, samples: usize) -> Curve {
        let range = data.table.range();
        Curve {
            imp: CurveImpl::Nodes(data),
            range,
            samples,
        }
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn grid(&self) -> Vec<f64> {
        match &self.imp {
            CurveImpl::Table(t) => t.ts().to_vec(),
            CurveImpl::Nodes(n) => n.table.ts().to_vec(),
            _ => linspace(self.range.0, self.range.1, self.samples),
        }
    }

    /// The backing sample table, for table- and node-backed curves.
    pub fn table(&self) -> Option<&SampledTable> {
        match &self.imp {
            CurveImpl::Table(t) => Some(t),
            CurveImpl::Nodes(n) => Some(&n.table),
            _ => None,
        }
    }

    fn check_range(&self, t: f64) -> Result<()> {
        let slack = 1e-9 * (self.range.1 - self.range.0).abs().max(1.0);
        if t < self.range.0 - slack || t > self.range.1 + slack {
            return Err(Error::OutOfRange {
                t,
                t0: self.range.0,
                t1: self.range.1,
            });
        }
        Ok(())
    }

    /// Position and derivatives of `α̃` with respect to `t`, orders `0..=order`.
    pub fn jet(&self, t: f64, order: usize) -> Result<Vec<DualVec3>> {
        if order > 3 {
            return Err(Error::Input(format!("jet order {order} exceeds 3")));
        }
        self.check_range(t)?;
        match &self.imp {
            CurveImpl::Analytic(f) => Ok(f.jet(t, order)),
            CurveImpl::Expressions { re, du } => {
                let mut out = Vec::with_capacity(order + 1);
                for k in 0..=order {
                    let mut comps = [0.0f64; 6];
                    for (c, slot) in comps.iter_mut().enumerate() {
                        let (expr, src) = if c < 3 { &re[c] } else { &du[c - 3] };
                        let eval = |x: f64| Ok(expr.eval(src, DualScalar::from_re(x))?.re);
                        *slot = if k == 0 {
                            eval(t)?
                        } else {
                            fd_derivative(&eval, t, k)?
                        };
                    }
                    out.push(DualVec3::new(
                        RealVec3::new(comps[0], comps[1], comps[2]),
                        RealVec3::new(comps[3], comps[4], comps[5]),
                    ));
                }
                Ok(out)
            }
            CurveImpl::Table(table) => table.jet(t, order),
            CurveImpl::Nodes(data) => match data.table.node_index(t) {
                Some(i) => Ok(data.jets[i][..=order].to_vec()),
                None => data.table.jet(t, order),
            },
        }
    }

    /// Dual speed `‖α̃′(t)‖`; errors when the derivative goes lightlike.
    pub fn speed(&self, t: f64) -> Result<DualScalar> {
        let d1 = self.jet(t, 1)?[1];
        if d1.causal_class() == CausalClass::Lightlike {
            return Err(Error::DegenerateSpeed { t });
        }
        d1.norm().map_err(|e| match e {
            Error::Lightlike { .. } | Error::NormUndefined => Error::DegenerateSpeed { t },
            other => other,
        })
    }

    /// Dual arc length `s̃(t) = ∫ ‖α̃′‖ dτ` from the range start.
    pub fn arc_length(&self, t: f64) -> Result<DualScalar> {
        self.check_range(t)?;
        quad::integrate_dual(&|x| self.speed(x), self.range.0, t, ARC_PANEL_TOL)
    }

    /// Frenet frame, curvature and torsion at `t` by the general-parameter
    /// quotient formulas; requires a timelike tangent and `κ.re` above the
    /// degeneracy threshold.
    pub fn frenet_general(&self, t: f64) -> Result<DualFrame> {
        let s = self.arc_length(t)?;
        frenet::frenet_at(self, t, s)
    }

    /// Frenet data at `s` on an (already) unit-speed curve, via the
    /// arc-length-derivative formulas `κ = ‖T′‖`, `τ = ⟨N′, B⟩`; agrees with
    /// [`Curve::frenet_general`] to rounding on analytic inputs.
    pub fn frenet_unit_speed(&self, s: f64) -> Result<DualFrame> {
        let arc = self.arc_length(s)?;
        frenet::frenet_unit_speed_at(self, s, arc)
    }

    /// Frames over a grid, evaluated in parallel when available; arc lengths
    /// come from per-interval quadratures (also parallel) prefix-summed in
    /// grid order, so results do not depend on the thread count.
    pub fn sample_frames(&self, ts: &[f64]) -> Result<Vec<DualFrame>> {
        let mut frames = exec::try_map_range(ts.len(), |i| {
            frenet::frenet_at(self, ts[i], DualScalar::ZERO)
        })?;
        let arcs = self.arc_lengths(ts)?;
        for (f, s) in frames.iter_mut().zip(arcs) {
            f.s = s;
        }
        Ok(frames)
    }

    /// Sequential twin of [`Curve::sample_frames`], for comparison.
    pub fn sample_frames_seq(&self, ts: &[f64]) -> Result<Vec<DualFrame>> {
        let mut frames = exec::try_map_range_seq(ts.len(), |i| {
            frenet::frenet_at(self, ts[i], DualScalar::ZERO)
        })?;
        let arcs = self.arc_lengths_with(ts, false)?;
        for (f, s) in frames.iter_mut().zip(arcs) {
            f.s = s;
        }
        Ok(frames)
    }

    /// Cumulative dual arc length at each grid point, `s̃(ts[i])`.
    pub fn arc_lengths(&self, ts: &[f64]) -> Result<Vec<DualScalar>> {
        self.arc_lengths_with(ts, true)
    }

    fn arc_lengths_with(&self, ts: &[f64], parallel: bool) -> Result<Vec<DualScalar>> {
        // Independent per-interval integrals, then a sequential scan.
        let piece = |i: usize| -> Result<DualScalar> {
            let (a, b) = if i == 0 {
                (self.range.0, ts[0])
            } else {
                (ts[i - 1], ts[i])
            };
            quad::integrate_dual(&|x| self.speed(x), a, b, ARC_PANEL_TOL)
        };
        let pieces = if parallel {
            exec::try_map_range(ts.len(), piece)?
        } else {
            exec::try_map_range_seq(ts.len(), piece)?
        };
        let mut acc = DualScalar::ZERO;
        Ok(pieces
            .into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect())
    }
}

/// A curve resampled by real arc length, with the dual arc carried alongside.
#[derive(Debug, Clone)]
pub struct Reparameterized {
    /// Table spec parameterized by real arc length (unit speed).
    pub spec: CurveSpec,
    /// Dual arc length `s̃ = s + εs*` at each output row.
    pub arc: Vec<DualScalar>,
}

/// Resamples a curve by real arc length via bisection on the cumulative
/// arc-length function.
pub fn reparameterize(curve: &Curve) -> Result<Reparameterized> {
    let n = curve.samples();
    let (t0, t1) = curve.range();
    // Dense cumulative table so each bisection only integrates one cell.
    let m = 4 * (n - 1) + 1;
    let dense = linspace(t0, t1, m);
    let cum = curve.arc_lengths(&dense)?;
    let total = cum[m - 1];
    if !(total.re > 0.0) {
        return Err(Error::Input("curve has non-positive arc length".into()));
    }
    let arc_at = |t: f64, hint: usize| -> Result<DualScalar> {
        Ok(cum[hint] + quad::integrate_dual(&|x| curve.speed(x), dense[hint], t, ARC_PANEL_TOL)?)
    };
    let targets = linspace(0.0, total.re, n);
    let mut rows = Vec::with_capacity(n);
    let mut arc = Vec::with_capacity(n);
    for (k, &target) in targets.iter().enumerate() {
        let t = if k == 0 {
            t0
        } else if k == n - 1 {
            t1
        } else {
            // Bracket on the dense table, then bisect to 1e-10.
            let mut cell = cum.partition_point(|a| a.re < target);
            cell = cell.clamp(1, m - 1);
            let (mut lo, mut hi) = (dense[cell - 1], dense[cell]);
            let hint = cell - 1;
            let tol = 1e-10 * (t1 - t0).abs().max(1.0);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if arc_at(mid, hint)?.re < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let cell = ((t - t0) / (dense[1] - dense[0])).floor() as usize;
        let hint = cell.min(m - 2);
        arc.push(arc_at(t, hint)?);
        rows.push(curve.jet(t, 0)?[0]);
    }
    let table = SampledTable::new(targets.clone(), rows)?;
    Ok(Reparameterized {
        spec: CurveSpec {
            source: CurveSource::Table(table),
            range: (0.0, total.re),
            samples: n,
        },
        arc,
    })
}
