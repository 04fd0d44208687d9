//! The module D³ of dual vectors over the dual ring, with the Lorentzian
//! metric extended dually:
//!
//! - `⟨A,B⟩ = ⟨a,b⟩ + ε(⟨a,b*⟩ + ⟨a*,b⟩)`
//! - `A ∧ B = a ∧ b + ε(a ∧ b* + a* ∧ b)`
//! - `‖A‖ = √|⟨A,A⟩|` in dual arithmetic, defined whenever the real part is
//!   nonzero and non-lightlike.
//!
//! The norm formula `‖a‖ + ε⟨a,a*⟩/‖a‖` found in positive-definite treatments
//! is the spacelike specialization; for timelike vectors the Lorentzian sign
//! flips the dual part, which is why the norm here is defined as the dual
//! square root of the dual absolute value of `⟨A,A⟩`.

use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::lorentz::{CausalClass, RealVec3};
use std::ops::{Add, Neg, Sub};

/// Membership tolerance of the dual unit sphere predicate.
pub const UNIT_SPHERE_TOL: f64 = 1e-9;

/// A dual vector `a + εa*` in D³.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualVec3 {
    pub re: RealVec3,
    pub du: RealVec3,
}

impl DualVec3 {
    pub const ZERO: DualVec3 = DualVec3 {
        re: RealVec3::ZERO,
        du: RealVec3::ZERO,
    };

    #[inline]
    pub const fn new(re: RealVec3, du: RealVec3) -> Self {
        Self { re, du }
    }

    /// A real vector embedded with zero dual part.
    #[inline]
    pub const fn from_re(re: RealVec3) -> Self {
        Self {
            re,
            du: RealVec3::ZERO,
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }

    /// Component of index 0..3 as a dual scalar.
    #[inline]
    pub fn component(self, i: usize) -> DualScalar {
        match i {
            0 => DualScalar::new(self.re.x1, self.du.x1),
            1 => DualScalar::new(self.re.x2, self.du.x2),
            _ => DualScalar::new(self.re.x3, self.du.x3),
        }
    }

    /// Module action of the dual ring: `(k + εk*)(a + εa*) = ka + ε(ka* + k*a)`.
    #[inline]
    pub fn scale(self, k: DualScalar) -> DualVec3 {
        DualVec3::new(self.re * k.re, self.du * k.re + self.re * k.du)
    }

    /// Dual Lorentzian inner product.
    #[inline]
    pub fn dot(self, rhs: DualVec3) -> DualScalar {
        DualScalar::new(
            self.re.dot(rhs.re),
            self.re.dot(rhs.du) + self.du.dot(rhs.re),
        )
    }

    /// Dual Lorentzian cross product.
    #[inline]
    pub fn cross(self, rhs: DualVec3) -> DualVec3 {
        DualVec3::new(
            self.re.cross(rhs.re),
            self.re.cross(rhs.du) + self.du.cross(rhs.re),
        )
    }

    /// Causal classification by the sign of `⟨A,A⟩.re`, i.e. of the real part.
    #[inline]
    pub fn causal_class(self) -> CausalClass {
        self.re.causal_class()
    }

    /// Dual norm `√|⟨A,A⟩|`.
    ///
    /// Undefined for vectors with zero real part and for lightlike vectors.
    pub fn norm(self) -> Result<DualScalar> {
        if self.re.norm_sq_euclidean() == 0.0 {
            return Err(Error::NormUndefined);
        }
        if self.causal_class() == CausalClass::Lightlike {
            return Err(Error::Lightlike { op: "norm" });
        }
        self.dot(self).abs().sqrt()
    }

    /// Scales to unit dual norm; errors on lightlike input.
    pub fn normalized(self) -> Result<DualVec3> {
        if self.re.norm_sq_euclidean() == 0.0 {
            return Err(Error::NormUndefined);
        }
        if self.causal_class() == CausalClass::Lightlike {
            return Err(Error::Lightlike { op: "normalize" });
        }
        let n = self.norm()?;
        Ok(self.scale(n.recip()?))
    }

    /// Whether the vector lies on the dual unit sphere, `‖A‖ = 1 + ε0`
    /// within `tol` per component.
    pub fn is_unit(self, tol: f64) -> bool {
        match self.norm() {
            Ok(n) => (n.re - 1.0).abs() <= tol && n.du.abs() <= tol,
            Err(_) => false,
        }
    }

    /// Dual unit-sphere membership at the conventional tolerance
    /// [`UNIT_SPHERE_TOL`].
    pub fn on_unit_sphere(self) -> bool {
        self.is_unit(UNIT_SPHERE_TOL)
    }
}

impl Add for DualVec3 {
    type Output = DualVec3;
    #[inline]
    fn add(self, rhs: DualVec3) -> DualVec3 {
        DualVec3::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl Sub for DualVec3 {
    type Output = DualVec3;
    #[inline]
    fn sub(self, rhs: DualVec3) -> DualVec3 {
        DualVec3::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl Neg for DualVec3 {
    type Output = DualVec3;
    #[inline]
    fn neg(self) -> DualVec3 {
        DualVec3::new(-self.re, -self.du)
    }
}

/// Which of the four dual angles applies, by the causal characters of the
/// two unit vectors (and, for spacelike pairs, of the plane they span).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualAngleKind {
    /// Timelike–timelike, same time cone: `⟨A,B⟩ = −cosh Φ`.
    Hyperbolic,
    /// Spacelike–spacelike spanning a timelike plane: `⟨A,B⟩ = cosh Φ`.
    Central,
    /// Spacelike–spacelike spanning a spacelike plane: `⟨A,B⟩ = cos Φ`.
    Spacelike,
    /// Spacelike–timelike: `⟨A,B⟩ = sinh Φ`.
    LorentzianTimelike,
}

/// A dual angle `Φ = θ + εθ*` tagged with the case it was extracted from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualAngle {
    pub value: DualScalar,
    pub kind: DualAngleKind,
}

/// Recovers `θ*` from the dual part of a hyperbolic cosine given `θ`:
/// `cosh(θ+εθ*) = cosh θ + εθ* sinh θ`.
fn theta_star_from_cosh(du: f64, theta: f64) -> Result<f64> {
    let sh = theta.sinh();
    if sh.abs() > 1e-15 {
        Ok(du / sh)
    } else if du.abs() <= 1e-12 {
        Ok(0.0)
    } else {
        Err(Error::InversionDomain(format!(
            "dual part {du:e} unrecoverable at zero angle"
        )))
    }
}

/// The dual angle between two non-lightlike dual vectors.
///
/// Inputs are normalized internally. The kind follows the causal pair:
/// timelike–timelike pairs must share a time cone (`⟨A,B⟩.re ≤ −1`);
/// hyperbolic inversions with `|⟨A,B⟩.re| < 1` are rejected. For
/// spacelike–spacelike pairs the spanned plane is discriminated by the
/// causal class of `cross(A.re, B.re)`: a timelike normal means a spacelike
/// plane and vice versa. Angles are reported with `θ ≥ 0`.
pub fn angle_between(a: DualVec3, b: DualVec3) -> Result<DualAngle> {
    for v in [a, b] {
        if v.causal_class() == CausalClass::Lightlike {
            return Err(Error::Causal(
                "angle undefined for a lightlike vector".into(),
            ));
        }
    }
    let a = a.normalized()?;
    let b = b.normalized()?;
    let x = a.dot(b);
    match (a.causal_class(), b.causal_class()) {
        (CausalClass::Timelike, CausalClass::Timelike) => {
            if x.re.abs() < 1.0 - 1e-9 {
                return Err(Error::InversionDomain(format!(
                    "timelike pair with |⟨A,B⟩.re| = {} < 1",
                    x.re.abs()
                )));
            }
            if x.re > 0.0 {
                return Err(Error::InversionDomain(
                    "timelike vectors lie in opposite time cones".into(),
                ));
            }
            let ch = -x;
            let theta = ch.re.max(1.0).acosh();
            let theta_star = theta_star_from_cosh(ch.du, theta)?;
            Ok(DualAngle {
                value: DualScalar::new(theta, theta_star),
                kind: DualAngleKind::Hyperbolic,
            })
        }
        (CausalClass::Spacelike, CausalClass::Spacelike) => {
            let normal = a.re.cross(b.re);
            match normal.causal_class() {
                CausalClass::Timelike => {
                    // Spacelike plane: ⟨A,B⟩ = cos Φ.
                    if x.re.abs() > 1.0 + 1e-9 {
                        return Err(Error::InversionDomain(format!(
                            "spacelike pair with |⟨A,B⟩.re| = {} > 1",
                            x.re.abs()
                        )));
                    }
                    let c = x.re.clamp(-1.0, 1.0);
                    let theta = c.acos();
                    let sn = theta.sin();
                    let theta_star = if sn.abs() > 1e-15 {
                        -x.du / sn
                    } else if x.du.abs() <= 1e-12 {
                        0.0
                    } else {
                        return Err(Error::InversionDomain(
                            "dual part unrecoverable at angle 0 or π".into(),
                        ));
                    };
                    Ok(DualAngle {
                        value: DualScalar::new(theta, theta_star),
                        kind: DualAngleKind::Spacelike,
                    })
                }
                CausalClass::Spacelike => {
                    // Timelike plane: ⟨A,B⟩ = cosh Φ.
                    if x.re < 1.0 - 1e-9 {
                        return Err(Error::InversionDomain(format!(
                            "central angle needs ⟨A,B⟩.re ≥ 1, got {}",
                            x.re
                        )));
                    }
                    let theta = x.re.max(1.0).acosh();
                    let theta_star = theta_star_from_cosh(x.du, theta)?;
                    Ok(DualAngle {
                        value: DualScalar::new(theta, theta_star),
                        kind: DualAngleKind::Central,
                    })
                }
                CausalClass::Lightlike => Err(Error::InversionDomain(
                    "spacelike pair spans a degenerate (lightlike) plane".into(),
                )),
            }
        }
        // Mixed pair: ⟨A,B⟩ = sinh Φ, always invertible.
        _ => {
            let theta = x.re.asinh();
            let theta_star = x.du / theta.cosh();
            Ok(DualAngle {
                value: DualScalar::new(theta, theta_star),
                kind: DualAngleKind::LorentzianTimelike,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::hyperbolic_pair;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const E1: RealVec3 = RealVec3::new(1.0, 0.0, 0.0);
    const E2: RealVec3 = RealVec3::new(0.0, 1.0, 0.0);
    const E3: RealVec3 = RealVec3::new(0.0, 0.0, 1.0);

    fn rand_vec(rng: &mut ChaCha8Rng) -> DualVec3 {
        DualVec3::new(
            RealVec3::new(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            ),
            RealVec3::new(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            ),
        )
    }

    #[test]
    fn dual_inner_product() {
        let a = DualVec3::new(E1, E2);
        let b = DualVec3::from_re(E1);
        assert_eq!(a.dot(b), DualScalar::new(-1.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let (a, b, c) = (rand_vec(&mut rng), rand_vec(&mut rng), rand_vec(&mut rng));
            assert_eq!(a.dot(b), b.dot(a));
            let lin = (a + c).dot(b) - (a.dot(b) + c.dot(b));
            assert!(lin.re.abs() <= 1e-12 * 100.0 && lin.du.abs() <= 1e-12 * 100.0);
        }
    }

    #[test]
    fn dual_cross_product() {
        // Real parts only reduce to the real cross product.
        let a = DualVec3::from_re(E2);
        let b = DualVec3::from_re(E3);
        assert_eq!(a.cross(b), DualVec3::from_re(-E1));
        // Hand-expanded ε rule.
        let a = DualVec3::new(E2, E1);
        let b = DualVec3::from_re(E3);
        assert_eq!(a.cross(b), DualVec3::new(-E1, -E2));
        // A ∧ A = 0.
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let a = rand_vec(&mut rng);
            assert_eq!(a.cross(a), DualVec3::ZERO);
        }
    }

    #[test]
    fn cross_output_is_dual_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10_000 {
            let (a, b) = (rand_vec(&mut rng), rand_vec(&mut rng));
            let w = a.cross(b);
            for v in [a, b] {
                let d = w.dot(v);
                assert!(d.re.abs() <= 1e-10 * 1e3 && d.du.abs() <= 1e-10 * 1e3);
            }
        }
    }

    #[test]
    fn norm_examples() {
        let a = DualVec3::new(E2, E3);
        assert_eq!(a.norm().unwrap(), DualScalar::ONE);
        // Timelike case: ⟨A,A⟩ = −1 − ε4, |·| = 1 + ε4, √ = 1 + ε2,
        // and squaring back recovers the absolute value.
        let a = DualVec3::new(E1, E1 * 2.0);
        let n = a.norm().unwrap();
        assert_eq!(n, DualScalar::new(1.0, 2.0));
        assert_eq!(n * n, DualScalar::new(1.0, 4.0));
        assert_eq!(DualVec3::from_re(E2).norm().unwrap(), DualScalar::ONE);
    }

    #[test]
    fn norm_error_cases() {
        let pure_dual = DualVec3::new(RealVec3::ZERO, E2);
        assert!(matches!(pure_dual.norm(), Err(Error::NormUndefined)));
        let lightlike = DualVec3::from_re(RealVec3::new(1.0, 1.0, 0.0));
        assert!(matches!(lightlike.norm(), Err(Error::Lightlike { .. })));
        assert!(matches!(
            lightlike.normalized(),
            Err(Error::Lightlike { .. })
        ));
    }

    #[test]
    fn classification_ignores_dual_part() {
        let any_dual = RealVec3::new(3.0, -7.0, 0.1);
        assert_eq!(
            DualVec3::new(E1, any_dual).causal_class(),
            CausalClass::Timelike
        );
        assert_eq!(
            DualVec3::new(E2, any_dual).causal_class(),
            CausalClass::Spacelike
        );
        assert_eq!(
            DualVec3::from_re(RealVec3::new(1.0, 1.0, 0.0)).causal_class(),
            CausalClass::Lightlike
        );
    }

    #[test]
    fn normalization_yields_unit_norm() {
        let v = DualVec3::from_re(E1 * 2.0);
        assert_eq!(v.normalized().unwrap(), DualVec3::from_re(E1));
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let mut checked = 0;
        while checked < 1000 {
            let a = rand_vec(&mut rng);
            // Normalization is ill-conditioned arbitrarily close to the light
            // cone, so require a causal margin along with non-lightlike.
            if a.re.dot(a.re).abs() < 5.0 {
                continue;
            }
            let u = a.normalized().unwrap();
            let n = u.norm().unwrap();
            assert!(
                (n.re - 1.0).abs() <= 1e-12 && n.du.abs() <= 1e-12,
                "norm {n} for input {a:?}"
            );
            checked += 1;
        }
        let timelike = DualVec3::new(E1, E1 * 2.0);
        assert!(timelike.normalized().unwrap().is_unit(1e-12));
    }

    #[test]
    fn angle_examples() {
        let a = DualVec3::from_re(E1);
        let same = angle_between(a, a).unwrap();
        assert_eq!(same.kind, DualAngleKind::Hyperbolic);
        assert_eq!(same.value, DualScalar::ZERO);

        let b = DualVec3::from_re(RealVec3::new(0.5f64.cosh(), 0.5f64.sinh(), 0.0));
        let phi = angle_between(a, b).unwrap();
        assert_eq!(phi.kind, DualAngleKind::Hyperbolic);
        assert!((phi.value.re - 0.5).abs() <= 1e-12 && phi.value.du.abs() <= 1e-12);
    }

    #[test]
    fn angle_recovers_dual_part() {
        // Timelike pair arranged so ⟨A,B⟩ = −(cosh 0.5 + ε·0.2·sinh 0.5).
        let a = DualVec3::from_re(E1);
        let (sh, ch) = hyperbolic_pair(DualScalar::new(0.5, 0.2)).unwrap();
        let b = DualVec3::from_re(E1).scale(ch) + DualVec3::from_re(E2).scale(sh);
        let got = a.dot(b);
        assert!((got.re + 0.5f64.cosh()).abs() <= 1e-15);
        assert!((got.du + 0.2 * 0.5f64.sinh()).abs() <= 1e-15);
        let phi = angle_between(a, b).unwrap();
        assert!((phi.value.re - 0.5).abs() <= 1e-12);
        assert!((phi.value.du - 0.2).abs() <= 1e-12);
    }

    #[test]
    fn angle_round_trip_under_hyperbolic_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..500 {
            let theta = rng.gen_range(0.1..3.0);
            let theta_star = rng.gen_range(-1.0..1.0);
            let phi = DualScalar::new(theta, theta_star);
            let (sh, ch) = hyperbolic_pair(phi).unwrap();
            let a = DualVec3::from_re(E1);
            let s = DualVec3::from_re(E2);
            let b = a.scale(ch) + s.scale(sh);
            let got = angle_between(a, b).unwrap();
            assert_eq!(got.kind, DualAngleKind::Hyperbolic);
            assert!(
                (got.value.re - theta).abs() <= 1e-9 && (got.value.du - theta_star).abs() <= 1e-9,
                "expected {phi}, got {}",
                got.value
            );
        }
    }

    #[test]
    fn angle_kind_dispatch() {
        // Spacelike pair spanning the spacelike plane {x2,x3}: normal is timelike.
        let a = DualVec3::from_re(E2);
        let b = DualVec3::from_re(RealVec3::new(0.0, 0.5f64.cos(), 0.5f64.sin()));
        let phi = angle_between(a, b).unwrap();
        assert_eq!(phi.kind, DualAngleKind::Spacelike);
        assert!((phi.value.re - 0.5).abs() <= 1e-12);

        // Spacelike pair spanning a timelike plane: ⟨A,B⟩ = cosh.
        let a = DualVec3::from_re(E2);
        let b = DualVec3::from_re(RealVec3::new(0.7f64.sinh(), 0.7f64.cosh(), 0.0));
        let phi = angle_between(a, b).unwrap();
        assert_eq!(phi.kind, DualAngleKind::Central);
        assert!((phi.value.re - 0.7).abs() <= 1e-12);

        // Mixed pair.
        let a = DualVec3::from_re(E2);
        let b = DualVec3::from_re(E1);
        let phi = angle_between(a, b).unwrap();
        assert_eq!(phi.kind, DualAngleKind::LorentzianTimelike);
        assert!(phi.value.re.abs() <= 1e-12);
    }

    #[test]
    fn angle_error_cases() {
        let lightlike = DualVec3::from_re(RealVec3::new(1.0, 1.0, 0.0));
        let timelike = DualVec3::from_re(E1);
        assert!(matches!(
            angle_between(lightlike, timelike),
            Err(Error::Causal(_))
        ));
        // Opposite time cones.
        assert!(matches!(
            angle_between(timelike, -timelike),
            Err(Error::InversionDomain(_))
        ));
    }
}
