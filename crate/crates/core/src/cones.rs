//! The patch cone `K_P = R+ (C(perp P) x {1})` and its dual.
//!
//! Wrench triples `[m_t, f_n]` live in `K_P`: they are the homogeneous
//! coordinates of the rotated center of pressure. Twist triples
//! `[omega_t, v_n]` live in the dual cone, which is exactly the set of
//! twists whose normal velocity field is nonnegative over the whole hull.
//!
//! Membership tests accept a `tol * scale` slack on every inequality so that
//! points on the cone boundary (the tipping regime) test as members.

use alloc::vec::Vec;
use core::ops::{Add, Mul};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Hull, Patch, Vec2};

/// Homogeneous triple `[tangential, normal]`: either `[m_t, f_n]` or
/// `[omega_t, v_n]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HomVec3 {
    pub tangential: Vec2,
    pub normal: f64,
}

impl HomVec3 {
    pub const ZERO: HomVec3 = HomVec3 {
        tangential: Vec2::ZERO,
        normal: 0.0,
    };

    pub const fn new(tangential: Vec2, normal: f64) -> Self {
        Self { tangential, normal }
    }

    pub fn dot(&self, other: &HomVec3) -> f64 {
        self.tangential.dot(other.tangential) + self.normal * other.normal
    }

    pub fn norm(&self) -> f64 {
        libm::hypot(self.tangential.norm(), self.normal)
    }

    pub fn is_finite(&self) -> bool {
        self.tangential.is_finite() && self.normal.is_finite()
    }
}

impl Add for HomVec3 {
    type Output = HomVec3;
    fn add(self, rhs: HomVec3) -> HomVec3 {
        HomVec3::new(self.tangential + rhs.tangential, self.normal + rhs.normal)
    }
}

impl Mul<f64> for HomVec3 {
    type Output = HomVec3;
    fn mul(self, s: f64) -> HomVec3 {
        HomVec3::new(self.tangential * s, self.normal * s)
    }
}

/// `K_P` for a given patch, with the rotated hull built eagerly.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchCone {
    patch: Patch,
    rotated: Patch,
}

impl PatchCone {
    pub fn new(patch: &Patch) -> Self {
        Self {
            patch: patch.clone(),
            rotated: patch.perp(),
        }
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    /// The generator rotated by a quarter turn, `perp P`.
    pub fn rotated_patch(&self) -> &Patch {
        &self.rotated
    }

    /// Scale applied to `tol` in [`PatchCone::in_dual`].
    pub fn dual_scale(&self, h: &HomVec3) -> f64 {
        1f64.max(h.norm()) * self.patch.magnitude()
    }

    /// Membership of a wrench triple `[m_t, f_n]` in `K_P`.
    pub fn in_primal(&self, h: &HomVec3, tol: f64) -> bool {
        let band = tol * 1f64.max(h.norm());
        if h.normal < -band {
            false
        } else if h.normal <= band {
            h.tangential.norm() <= band
        } else {
            self.rotated.contains(h.tangential / h.normal, tol)
        }
    }

    /// Membership of a twist triple `[omega_t, v_n]` in the dual cone: the
    /// minimum of the normal velocity field over the hull is nonnegative.
    pub fn in_dual(&self, h: &HomVec3, tol: f64) -> bool {
        self.min_normal_velocity(h) >= -tol * self.dual_scale(h)
    }

    /// `min over C(P)` of `v_n - <perp(omega_t), x>`.
    pub fn min_normal_velocity(&self, h: &HomVec3) -> f64 {
        let (value, _) = self.patch.support(h.tangential.perp());
        h.normal - value
    }

    /// `n` elements `alpha [y, 1]` of the cone with `y` drawn from the
    /// rotated hull. The generator is ChaCha8 seeded with `seed`.
    pub fn sample_primal(&self, seed: u64, n: usize) -> Vec<HomVec3> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                if rng.gen_range(0..16) == 0 {
                    return HomVec3::ZERO;
                }
                let alpha = rng.gen_range(0.0..10.0);
                let y = sample_hull_point(&self.rotated, &mut rng);
                HomVec3::new(y * alpha, alpha)
            })
            .collect()
    }
}

/// Random point of the hull: a convex combination with exponential weights
/// for polygons, a uniform draw from the disk image for ellipses.
pub(crate) fn sample_hull_point<R: Rng>(patch: &Patch, rng: &mut R) -> Vec2 {
    match patch.hull() {
        Hull::Polygon(v) => {
            let mut acc = Vec2::ZERO;
            let mut total = 0.0;
            for &p in v {
                let w = -libm::log(1.0 - rng.gen_range(0.0..1.0));
                acc += p * w;
                total += w;
            }
            if total > 0.0 {
                acc / total
            } else {
                v[0]
            }
        }
        Hull::Ellipse(e) => {
            let r = libm::sqrt(rng.gen_range(0.0..1.0));
            let t = rng.gen_range(0.0..core::f64::consts::TAU);
            let (s, c) = libm::sincos(t);
            e.to_world(Vec2::new(e.semi_axes.0 * r * c, e.semi_axes.1 * r * s))
        }
    }
}

/// Free-function forms matching the cone vocabulary.
pub fn in_primal(cone: &PatchCone, h: &HomVec3, tol: f64) -> bool {
    cone.in_primal(h, tol)
}

pub fn in_dual(cone: &PatchCone, h: &HomVec3, tol: f64) -> bool {
    cone.in_dual(h, tol)
}

/// `<a, b>`; zero exactly at complementary pairs.
pub fn complementarity_residual(a: &HomVec3, b: &HomVec3) -> f64 {
    a.dot(b)
}

pub fn sample_primal(cone: &PatchCone, seed: u64, n: usize) -> Vec<HomVec3> {
    cone.sample_primal(seed, n)
}
