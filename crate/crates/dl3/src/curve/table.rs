//! Sampled curve tables on a uniform parameter grid, their CSV interchange
//! format, and polynomial jet evaluation through 5-point windows.
//!
//! The CSV layout is `t,x1,x2,x3,x1d,x2d,x3d`: parameter, real components,
//! dual components, one row per sample, floats printed with 17 significant
//! digits. Jets (value and up to three derivatives) come from the degree-4
//! Lagrange polynomial through the 5 grid points nearest the query; at a grid
//! node this reduces to the classical 5-point stencils.

use crate::dual_vec::DualVec3;
use crate::error::{Error, Result};
use crate::lorentz::RealVec3;

/// Formats with 17 significant digits, locking byte-stable output.
pub fn format_g17(x: f64) -> String {
    // Normalize negative zero so equal values print identically.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Value plus first three derivatives at a point; supports the product rule
/// so Newton-form polynomials can be evaluated jointly with derivatives.
#[derive(Debug, Clone, Copy)]
struct Jet4([f64; 4]);

impl Jet4 {
    fn constant(v: f64) -> Self {
        Jet4([v, 0.0, 0.0, 0.0])
    }

    /// The linear factor (t - x0), whose derivative is 1.
    fn linear(t: f64, x0: f64) -> Self {
        Jet4([t - x0, 1.0, 0.0, 0.0])
    }

    fn add(self, o: Jet4) -> Jet4 {
        Jet4([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }

    fn mul(self, o: Jet4) -> Jet4 {
        let f = self.0;
        let g = o.0;
        Jet4([
            f[0] * g[0],
            f[1] * g[0] + f[0] * g[1],
            f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2],
            f[3] * g[0] + 3.0 * f[2] * g[1] + 3.0 * f[1] * g[2] + f[0] * g[3],
        ])
    }
}

/// Evaluates the interpolating polynomial through (xs, ys) and its first
/// three derivatives at `t`, via divided differences and a Horner pass in
/// jet arithmetic.
fn lagrange_jet(xs: &[f64], ys: &[f64], t: f64) -> [f64; 4] {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let mut acc = Jet4::constant(dd[n - 1]);
    for i in (0..n - 1).rev() {
        acc = acc.mul(Jet4::linear(t, xs[i])).add(Jet4::constant(dd[i]));
    }
    acc.0
}

/// A dual curve given by rows on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTable {
    ts: Vec<f64>,
    rows: Vec<DualVec3>,
    step: f64,
}

pub const CSV_HEADER: &str = "t,x1,x2,x3,x1d,x2d,x3d";

impl SampledTable {
    /// Window width for jet evaluation.
    const WINDOW: usize = 5;

    pub fn new(ts: Vec<f64>, rows: Vec<DualVec3>) -> Result<Self> {
        if ts.len() != rows.len() {
            return Err(Error::Input(format!(
                "table has {} parameters but {} rows",
                ts.len(),
                rows.len()
            )));
        }
        if ts.len() < Self::WINDOW {
            return Err(Error::Input(format!(
                "table needs at least {} rows, got {}",
                Self::WINDOW,
                ts.len()
            )));
        }
        let step = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
        if !(step > 0.0) {
            return Err(Error::Input("table parameter must be increasing".into()));
        }
        for i in 1..ts.len() {
            let d = ts[i] - ts[i - 1];
            if (d - step).abs() > 1e-9 * step.max(1.0) {
                return Err(Error::Input(format!(
                    "table grid is not uniform at row {i}: spacing {d}, expected {step}"
                )));
            }
        }
        for (i, r) in rows.iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::Input(format!("non-finite components at row {i}")));
            }
        }
        Ok(Self { ts, rows, step })
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn rows(&self) -> &[DualVec3] {
        &self.rows
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn range(&self) -> (f64, f64) {
        (self.ts[0], self.ts[self.ts.len() - 1])
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    /// Index of the grid node equal to `t`, if `t` lies on the grid.
    pub fn node_index(&self, t: f64) -> Option<usize> {
        let i = ((t - self.ts[0]) / self.step).round();
        if !(0.0..=(self.len() - 1) as f64).contains(&i) {
            return None;
        }
        let i = i as usize;
        if (t - self.ts[i]).abs() <= 1e-6 * self.step {
            Some(i)
        } else {
            None
        }
    }

    /// Jets of order 0..=order at `t` from the 5-point window around it.
    pub fn jet(&self, t: f64, order: usize) -> Result<Vec<DualVec3>> {
        if order + 2 > Self::WINDOW.min(self.len()) {
            return Err(Error::Input(format!(
                "order {order} exceeds the smoothness available from the table window"
            )));
        }
        let n = self.len();
        let center = ((t - self.ts[0]) / self.step).round() as isize;
        let start = (center - (Self::WINDOW as isize) / 2)
            .clamp(0, n as isize - Self::WINDOW as isize) as usize;
        let xs: Vec<f64> = self.ts[start..start + Self::WINDOW].to_vec();
        let mut comp_jets = [[0.0; 4]; 6];
        let mut ys = [0.0; Self::WINDOW];
        for (c, jet) in comp_jets.iter_mut().enumerate() {
            for (k, y) in ys.iter_mut().enumerate() {
                let row = &self.rows[start + k];
                *y = match c {
                    0 => row.re.x1,
                    1 => row.re.x2,
                    2 => row.re.x3,
                    3 => row.du.x1,
                    4 => row.du.x2,
                    _ => row.du.x3,
                };
            }
            *jet = lagrange_jet(&xs, &ys, t);
        }
        Ok((0..=order)
            .map(|k| {
                DualVec3::new(
                    RealVec3::new(comp_jets[0][k], comp_jets[1][k], comp_jets[2][k]),
                    RealVec3::new(comp_jets[3][k], comp_jets[4][k], comp_jets[5][k]),
                )
            })
            .collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 160);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (t, row) in self.ts.iter().zip(&self.rows) {
            out.push_str(&format_g17(*t));
            for v in [
                row.re.x1, row.re.x2, row.re.x3, row.du.x1, row.du.x2, row.du.x3,
            ] {
                out.push(',');
                out.push_str(&format_g17(v));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(content: &str) -> Result<Self> {
        let mut lines = content.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Input("empty table file".into()))?;
        let normalized: Vec<&str> = header.split(',').map(str::trim).collect();
        let expected: Vec<&str> = CSV_HEADER.split(',').collect();
        if normalized != expected {
            return Err(Error::Input(format!(
                "unexpected table header `{header}`, expected `{CSV_HEADER}`"
            )));
        }
        let mut ts = Vec::new();
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 7 {
                return Err(Error::Input(format!(
                    "row {}: expected 7 fields, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            let mut vals = [0.0f64; 7];
            for (v, f) in vals.iter_mut().zip(&fields) {
                *v = f.parse().map_err(|_| {
                    Error::Input(format!("row {}: invalid number `{f}`", lineno + 2))
                })?;
            }
            ts.push(vals[0]);
            rows.push(DualVec3::new(
                RealVec3::new(vals[1], vals[2], vals[3]),
                RealVec3::new(vals[4], vals[5], vals[6]),
            ));
        }
        Self::new(ts, rows)
    }
}
