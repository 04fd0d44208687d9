//! Real Minkowski 3-space ℝ³₁ with signature (−, +, +).
//!
//! The timelike axis is the *first* coordinate: `⟨a,b⟩ = −a₁b₁ + a₂b₂ + a₃b₃`.
//! The Lorentzian cross product is the metric adjoint of the determinant,
//! `⟨a ∧ b, c⟩ = det(a, b, c)`, which in components reads
//! `a ∧ b = (a₃b₂ − a₂b₃, a₃b₁ − a₁b₃, a₁b₂ − a₂b₁)` and is Lorentz-orthogonal
//! to both factors.

use std::ops::{Add, Mul, Neg, Sub};

/// Causal character of a vector under the (−, +, +) metric.
///
/// The zero vector counts as spacelike by convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
}

/// A vector in ℝ³₁; `x1` spans the timelike axis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RealVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl RealVec3 {
    pub const ZERO: RealVec3 = RealVec3 {
        x1: 0.0,
        x2: 0.0,
        x3: 0.0,
    };

    #[inline]
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Lorentzian inner product `−a₁b₁ + a₂b₂ + a₃b₃`.
    #[inline]
    pub fn dot(self, rhs: RealVec3) -> f64 {
        -self.x1 * rhs.x1 + self.x2 * rhs.x2 + self.x3 * rhs.x3
    }

    /// Lorentzian cross product, orthogonal to both factors and satisfying
    /// `⟨a ∧ b, c⟩ = det(a, b, c)`.
    #[inline]
    pub fn cross(self, rhs: RealVec3) -> RealVec3 {
        RealVec3::new(
            self.x3 * rhs.x2 - self.x2 * rhs.x3,
            self.x3 * rhs.x1 - self.x1 * rhs.x3,
            self.x1 * rhs.x2 - self.x2 * rhs.x1,
        )
    }

    /// Euclidean squared norm, used only to scale classification thresholds.
    #[inline]
    pub fn norm_sq_euclidean(self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Relative threshold below which `⟨a,a⟩` counts as zero.
    #[inline]
    pub fn causal_threshold(self) -> f64 {
        1e-12 * 1.0f64.max(self.norm_sq_euclidean())
    }

    /// Causal classification with a threshold relative to the vector's size,
    /// so large vectors near the light cone classify stably.
    pub fn causal_class(self) -> CausalClass {
        let q = self.dot(self);
        let tau = self.causal_threshold();
        if q < -tau {
            CausalClass::Timelike
        } else if q > tau || self.norm_sq_euclidean() == 0.0 {
            // The zero vector counts as spacelike by convention.
            CausalClass::Spacelike
        } else {
            CausalClass::Lightlike
        }
    }
}

impl Add for RealVec3 {
    type Output = RealVec3;
    #[inline]
    fn add(self, rhs: RealVec3) -> RealVec3 {
        RealVec3::new(self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl Sub for RealVec3 {
    type Output = RealVec3;
    #[inline]
    fn sub(self, rhs: RealVec3) -> RealVec3 {
        RealVec3::new(self.x1 - rhs.x1, self.x2 - rhs.x2, self.x3 - rhs.x3)
    }
}

impl Mul<f64> for RealVec3 {
    type Output = RealVec3;
    #[inline]
    fn mul(self, k: f64) -> RealVec3 {
        RealVec3::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Neg for RealVec3 {
    type Output = RealVec3;
    #[inline]
    fn neg(self) -> RealVec3 {
        RealVec3::new(-self.x1, -self.x2, -self.x3)
    }
}
