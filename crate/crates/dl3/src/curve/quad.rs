//! Adaptive composite Gauss-Legendre quadrature over dual-valued integrands.
//!
//! Each panel is evaluated with 10- and 20-node rules; panels whose two
//! estimates disagree by more than the panel tolerance (in either dual
//! component) are bisected. Nodes and weights are computed once by Newton
//! iteration on the Legendre recurrence.

use crate::dual::DualScalar;
use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Legendre P_n(x) and its derivative via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the n-point rule on [-1, 1].
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn rule_10() -> &'static [(f64, f64)] {
    static R: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(10))
}

fn rule_20() -> &'static [(f64, f64)] {
    static R: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(20))
}

fn panel<F>(f: &F, a: f64, b: f64, rule: &[(f64, f64)]) -> Result<DualScalar>
where
    F: Fn(f64) -> Result<DualScalar>,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = DualScalar::ZERO;
    for &(x, w) in rule {
        acc += f(mid + half * x)? * (w * half);
    }
    Ok(acc)
}

/// Integrates `f` over [a, b] (a ≤ b) with per-panel tolerance `tol` on the
/// disagreement between the 10- and 20-node estimates, in both components.
pub fn integrate_dual<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<DualScalar>
where
    F: Fn(f64) -> Result<DualScalar>,
{
    if a == b {
        return Ok(DualScalar::ZERO);
    }
    let mut total = DualScalar::ZERO;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let coarse = panel(f, lo, hi, rule_10())?;
        let fine = panel(f, lo, hi, rule_20())?;
        let d = fine - coarse;
        if (d.re.abs() <= tol && d.du.abs() <= tol) || depth >= 40 {
            if depth >= 40 {
                return Err(Error::Input(format!(
                    "quadrature failed to converge on [{lo}, {hi}]"
                )));
            }
            total += fine;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(total)
}
