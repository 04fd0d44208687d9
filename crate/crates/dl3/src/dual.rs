//! The dual-number ring `D = {a + εa* | a, a* ∈ ℝ}` with `ε² = 0`.
//!
//! Addition is componentwise, multiplication follows
//! `(a + εa*)(b + εb*) = ab + ε(ab* + a*b)`, and division by `b + εb*` is
//! defined whenever `b ≠ 0` as `a/b + ε(a*b − ab*)/b²`. Smooth univariate
//! functions extend to `D` through their first-order Taylor expansion,
//! `f(a + εa*) = f(a) + εa*f′(a)`, so evaluating an expression at `a + ε·1`
//! yields its derivative at `a` in the dual part.
//!
//! Components are IEEE doubles; the ring itself is exact over ℝ, so every
//! equality assertion elsewhere in the crate carries an explicit tolerance.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Divisors whose real part does not exceed this magnitude count as pure dual.
pub const DIV_ZERO_THRESHOLD: f64 = 1e-300;

/// A dual number `re + ε·du`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualScalar {
    pub re: f64,
    pub du: f64,
}

impl DualScalar {
    pub const ZERO: DualScalar = DualScalar { re: 0.0, du: 0.0 };
    pub const ONE: DualScalar = DualScalar { re: 1.0, du: 0.0 };
    /// The dual unit ε = (0, 1); ε·ε = (0, 0) exactly.
    pub const EPSILON: DualScalar = DualScalar { re: 0.0, du: 1.0 };

    #[inline]
    pub const fn new(re: f64, du: f64) -> Self {
        Self { re, du }
    }

    /// A real number embedded in the ring (zero dual part).
    #[inline]
    pub const fn from_re(re: f64) -> Self {
        Self { re, du: 0.0 }
    }

    /// The differentiation seed `x + ε·1`.
    #[inline]
    pub const fn seeded(re: f64) -> Self {
        Self { re, du: 1.0 }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }

    /// Multiplication with an overflow check on the result.
    #[inline]
    pub fn checked_mul(self, rhs: DualScalar) -> Result<DualScalar> {
        let r = self * rhs;
        if r.is_finite() {
            Ok(r)
        } else {
            Err(Error::Overflow { op: "mul" })
        }
    }

    /// Division `(a + εa*)/(b + εb*) = a/b + ε(a*b − ab*)/b²`, defined for
    /// `b ≠ 0`. A divisor with `|b| ≤ DIV_ZERO_THRESHOLD` is rejected as pure
    /// dual rather than mapped to an infinity.
    #[allow(clippy::should_implement_trait)] // checked, Result-returning division
    #[inline]
    pub fn div(self, rhs: DualScalar) -> Result<DualScalar> {
        if rhs.re.abs() <= DIV_ZERO_THRESHOLD {
            return Err(Error::PureDualDivisor {
                re: rhs.re,
                threshold: DIV_ZERO_THRESHOLD,
            });
        }
        let r = DualScalar::new(
            self.re / rhs.re,
            (self.du * rhs.re - self.re * rhs.du) / (rhs.re * rhs.re),
        );
        if r.is_finite() {
            Ok(r)
        } else {
            Err(Error::Overflow { op: "div" })
        }
    }

    /// Multiplicative inverse `1/(b + εb*)`.
    #[inline]
    pub fn recip(self) -> Result<DualScalar> {
        DualScalar::ONE.div(self)
    }

    /// `|x| + ε x* sign(x)`: the dual absolute value, smooth away from `re = 0`.
    #[inline]
    pub fn abs(self) -> DualScalar {
        if self.re < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sin(self) -> Result<DualScalar> {
        lift(LiftFn::Sin, self)
    }
    pub fn cos(self) -> Result<DualScalar> {
        lift(LiftFn::Cos, self)
    }
    pub fn sinh(self) -> Result<DualScalar> {
        lift(LiftFn::Sinh, self)
    }
    pub fn cosh(self) -> Result<DualScalar> {
        lift(LiftFn::Cosh, self)
    }
    pub fn exp(self) -> Result<DualScalar> {
        lift(LiftFn::Exp, self)
    }
    pub fn ln(self) -> Result<DualScalar> {
        lift(LiftFn::Ln, self)
    }
    pub fn sqrt(self) -> Result<DualScalar> {
        lift(LiftFn::Sqrt, self)
    }
    pub fn atanh(self) -> Result<DualScalar> {
        lift(LiftFn::Atanh, self)
    }
    pub fn asinh(self) -> Result<DualScalar> {
        lift(LiftFn::Asinh, self)
    }
    pub fn acosh(self) -> Result<DualScalar> {
        lift(LiftFn::Acosh, self)
    }
    pub fn powf(self, p: f64) -> Result<DualScalar> {
        lift(LiftFn::Power(p), self)
    }
}

impl Add for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn add(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl Sub for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn sub(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl Mul for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn mul(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl Mul<f64> for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn mul(self, rhs: f64) -> DualScalar {
        DualScalar::new(self.re * rhs, self.du * rhs)
    }
}

impl Neg for DualScalar {
    type Output = DualScalar;
    #[inline]
    fn neg(self) -> DualScalar {
        DualScalar::new(-self.re, -self.du)
    }
}

impl AddAssign for DualScalar {
    fn add_assign(&mut self, rhs: DualScalar) {
        *self = *self + rhs;
    }
}

impl SubAssign for DualScalar {
    fn sub_assign(&mut self, rhs: DualScalar) {
        *self = *self - rhs;
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ε{}", self.re, self.du)
    }
}

/// The fixed set of liftable univariate functions.
///
/// Keeping the set closed (rather than accepting arbitrary callbacks) makes
/// every domain error nameable and testable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LiftFn {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
    Atanh,
    Asinh,
    Acosh,
    /// `x ↦ x^p` for a fixed real exponent `p`.
    Power(f64),
}

impl LiftFn {
    pub fn name(self) -> &'static str {
        match self {
            LiftFn::Sin => "sin",
            LiftFn::Cos => "cos",
            LiftFn::Sinh => "sinh",
            LiftFn::Cosh => "cosh",
            LiftFn::Exp => "exp",
            LiftFn::Ln => "ln",
            LiftFn::Sqrt => "sqrt",
            LiftFn::Atanh => "atanh",
            LiftFn::Asinh => "asinh",
            LiftFn::Acosh => "acosh",
            LiftFn::Power(_) => "power",
        }
    }

    fn check_domain(self, x: f64) -> Result<()> {
        let bad = match self {
            LiftFn::Ln => x <= 0.0,
            LiftFn::Sqrt => x < 0.0,
            LiftFn::Atanh => x.abs() >= 1.0,
            LiftFn::Acosh => x < 1.0,
            LiftFn::Power(p) => (x < 0.0 && p.fract() != 0.0) || (x == 0.0 && p < 1.0 && p != 0.0),
            _ => false,
        };
        if bad {
            Err(Error::Domain {
                function: self.name(),
                value: x,
            })
        } else {
            Ok(())
        }
    }

    fn value(self, x: f64) -> f64 {
        match self {
            LiftFn::Sin => x.sin(),
            LiftFn::Cos => x.cos(),
            LiftFn::Sinh => x.sinh(),
            LiftFn::Cosh => x.cosh(),
            LiftFn::Exp => x.exp(),
            LiftFn::Ln => x.ln(),
            LiftFn::Sqrt => x.sqrt(),
            LiftFn::Atanh => x.atanh(),
            LiftFn::Asinh => x.asinh(),
            LiftFn::Acosh => x.acosh(),
            LiftFn::Power(p) => x.powf(p),
        }
    }

    fn derivative(self, x: f64) -> f64 {
        match self {
            LiftFn::Sin => x.cos(),
            LiftFn::Cos => -x.sin(),
            LiftFn::Sinh => x.cosh(),
            LiftFn::Cosh => x.sinh(),
            LiftFn::Exp => x.exp(),
            LiftFn::Ln => 1.0 / x,
            LiftFn::Sqrt => 0.5 / x.sqrt(),
            LiftFn::Atanh => 1.0 / (1.0 - x * x),
            LiftFn::Asinh => 1.0 / (1.0 + x * x).sqrt(),
            LiftFn::Acosh => 1.0 / ((x - 1.0).sqrt() * (x + 1.0).sqrt()),
            LiftFn::Power(p) => p * x.powf(p - 1.0),
        }
    }
}

/// Taylor lift `f(a + εa*) = f(a) + εa*f′(a)`.
///
/// Rejects arguments outside the real domain of `f` (naming the function) and
/// results that fail to stay finite. A zero dual part is propagated exactly,
/// so e.g. `sqrt(1 + ε0) = 1 + ε0` even where `f′` is large.
pub fn lift(f: LiftFn, a: DualScalar) -> Result<DualScalar> {
    f.check_domain(a.re)?;
    let v = f.value(a.re);
    let du = if a.du == 0.0 {
        0.0
    } else {
        a.du * f.derivative(a.re)
    };
    let r = DualScalar::new(v, du);
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow { op: f.name() })
    }
}

/// Both hyperbolic lifts of a dual angle `Φ = θ + εθ*`:
/// `(sinh Φ, cosh Φ) = (sinh θ + εθ* cosh θ, cosh θ + εθ* sinh θ)`.
///
/// The pair satisfies `cosh²Φ − sinh²Φ = 1 + ε0` up to rounding.
pub fn hyperbolic_pair(phi: DualScalar) -> Result<(DualScalar, DualScalar)> {
    Ok((lift(LiftFn::Sinh, phi)?, lift(LiftFn::Cosh, phi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: DualScalar, b: DualScalar, tol: f64) -> bool {
        (a.re - b.re).abs() <= tol && (a.du - b.du).abs() <= tol
    }

    #[test]
    fn multiplication_rule() {
        let a = DualScalar::new(2.0, 3.0);
        let b = DualScalar::new(4.0, 5.0);
        assert_eq!(a * b, DualScalar::new(8.0, 22.0));
        assert_eq!(a * DualScalar::ONE, a);
    }

    #[test]
    fn epsilon_is_nilpotent_exactly() {
        let eps = DualScalar::EPSILON;
        assert_eq!(eps * eps, DualScalar::ZERO);
        let a = DualScalar::new(7.25, -3.5);
        assert_eq!(a * eps, DualScalar::new(0.0, 7.25));
    }

    #[test]
    fn division_rule() {
        let a = DualScalar::new(4.0, 2.0);
        let b = DualScalar::new(2.0, 1.0);
        assert_eq!(a.div(b).unwrap(), DualScalar::new(2.0, 0.0));
        assert_eq!(a.div(DualScalar::ONE).unwrap(), a);
        let c = DualScalar::new(1.0, 1.0);
        assert_eq!(c.div(c).unwrap(), DualScalar::new(1.0, 0.0));
    }

    #[test]
    fn pure_dual_divisor_is_an_error() {
        let a = DualScalar::new(1.0, 2.0);
        let err = a.div(DualScalar::EPSILON).unwrap_err();
        assert!(matches!(err, Error::PureDualDivisor { .. }));
    }

    #[test]
    fn division_reconstructs_numerator() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10_000 {
            let a = DualScalar::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3));
            let mut b = DualScalar::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3));
            if b.re.abs() < 1e-6 {
                b.re += 1.0;
            }
            let q = a.div(b).unwrap();
            let back = q * b;
            let scale = 1.0f64.max(a.re.abs()).max(a.du.abs());
            assert!(
                (back.re - a.re).abs() <= 1e-12 * scale && (back.du - a.du).abs() <= 1e-12 * scale,
                "round trip failed: {a} vs {back}"
            );
        }
    }

    #[test]
    fn ring_axioms_hold_within_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let sample = |rng: &mut ChaCha8Rng| {
            DualScalar::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3))
        };
        for _ in 0..10_000 {
            let (a, b, c) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            let scale = [a, b, c]
                .iter()
                .map(|d| d.re.abs().max(d.du.abs()))
                .fold(1.0f64, f64::max);
            let rel = 1e-12 * scale * scale * scale;
            assert_eq!(a * b, b * a);
            assert_eq!(a + b, b + a);
            let assoc = (a * b) * c - a * (b * c);
            assert!(assoc.re.abs() <= rel && assoc.du.abs() <= rel);
            let distr = a * (b + c) - (a * b + a * c);
            assert!(distr.re.abs() <= rel && distr.du.abs() <= rel);
        }
    }

    #[test]
    fn lift_examples() {
        assert!(close(
            lift(LiftFn::Sin, DualScalar::EPSILON).unwrap(),
            DualScalar::new(0.0, 1.0),
            0.0
        ));
        // Square the lifted square root back: sqrt(1 + ε4) = 1 + ε2.
        let r = lift(LiftFn::Sqrt, DualScalar::new(1.0, 4.0)).unwrap();
        assert_eq!(r, DualScalar::new(1.0, 2.0));
        assert_eq!(r * r, DualScalar::new(1.0, 4.0));
    }

    #[test]
    fn lift_domain_errors_name_the_function() {
        let err = lift(LiftFn::Sqrt, DualScalar::new(-2.0, 0.0)).unwrap_err();
        match err {
            Error::Domain { function, .. } => assert_eq!(function, "sqrt"),
            other => panic!("unexpected error {other:?}"),
        }
        let err = lift(LiftFn::Acosh, DualScalar::new(0.5, 0.0)).unwrap_err();
        match err {
            Error::Domain { function, .. } => assert_eq!(function, "acosh"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn lift_dual_part_matches_central_difference() {
        let cases: &[(LiftFn, f64)] = &[
            (LiftFn::Sin, 0.7),
            (LiftFn::Cos, 0.7),
            (LiftFn::Sinh, 0.7),
            (LiftFn::Cosh, 0.7),
            (LiftFn::Exp, 0.7),
            (LiftFn::Ln, 1.3),
            (LiftFn::Sqrt, 2.1),
            (LiftFn::Atanh, 0.4),
            (LiftFn::Asinh, 0.8),
            (LiftFn::Acosh, 1.9),
            (LiftFn::Power(2.5), 1.7),
        ];
        let h = 1e-6;
        for &(f, a) in cases {
            let lifted = lift(f, DualScalar::seeded(a)).unwrap();
            let fd = (f.value(a + h) - f.value(a - h)) / (2.0 * h);
            assert!(
                (lifted.du - fd).abs() <= 1e-6,
                "{}: lifted {} vs fd {}",
                f.name(),
                lifted.du,
                fd
            );
        }
    }

    #[test]
    fn hyperbolic_pair_identity() {
        for &(theta, theta_star) in &[(0.0, 1.0), (0.0, 0.0), (0.3, 0.2), (-1.1, 0.7)] {
            let (sh, ch) = hyperbolic_pair(DualScalar::new(theta, theta_star)).unwrap();
            let unit = ch * ch - sh * sh;
            assert!(close(unit, DualScalar::ONE, 1e-12), "got {unit}");
        }
        let (sh, ch) = hyperbolic_pair(DualScalar::EPSILON).unwrap();
        assert_eq!(sh, DualScalar::new(0.0, 1.0));
        assert_eq!(ch, DualScalar::ONE);
    }

    #[test]
    fn overflow_is_reported() {
        let big = DualScalar::new(1e308, 1e308);
        assert!(matches!(
            big.checked_mul(big),
            Err(Error::Overflow { op: "mul" })
        ));
        assert!(lift(LiftFn::Exp, DualScalar::new(1e4, 1.0)).is_err());
    }
}
