//! Twists, wrenches, force distributions and the center-of-pressure toolbox.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};

use crate::cones::HomVec3;
use crate::geometry::{Patch, Vec2};

/// Relative spatial velocity `[omega_t, omega_n, v_t, v_n]` of the contact
/// frame, split along the contact plane and its normal.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Twist {
    pub omega_t: Vec2,
    pub omega_n: f64,
    pub v_t: Vec2,
    pub v_n: f64,
}

impl Twist {
    pub const ZERO: Twist = Twist {
        omega_t: Vec2::ZERO,
        omega_n: 0.0,
        v_t: Vec2::ZERO,
        v_n: 0.0,
    };

    pub const fn new(omega_t: Vec2, omega_n: f64, v_t: Vec2, v_n: f64) -> Self {
        Self {
            omega_t,
            omega_n,
            v_t,
            v_n,
        }
    }

    /// Twist with only the components seen by the normal velocity field.
    pub const fn normal(omega_t: Vec2, v_n: f64) -> Self {
        Self::new(omega_t, 0.0, Vec2::ZERO, v_n)
    }

    pub fn is_finite(&self) -> bool {
        self.omega_t.is_finite() && self.omega_n.is_finite() && self.v_t.is_finite() && self.v_n.is_finite()
    }

    /// The triple `[omega_t, v_n]`.
    pub fn homogeneous(&self) -> HomVec3 {
        HomVec3::new(self.omega_t, self.v_n)
    }

    /// Norm of the in-plane motion `[v_t, omega_n]`.
    pub fn tangential_norm(&self) -> f64 {
        libm::hypot(self.v_t.norm(), self.omega_n)
    }
}

impl Add for Twist {
    type Output = Twist;
    fn add(self, rhs: Twist) -> Twist {
        Twist::new(
            self.omega_t + rhs.omega_t,
            self.omega_n + rhs.omega_n,
            self.v_t + rhs.v_t,
            self.v_n + rhs.v_n,
        )
    }
}

impl Mul<f64> for Twist {
    type Output = Twist;
    fn mul(self, s: f64) -> Twist {
        Twist::new(self.omega_t * s, self.omega_n * s, self.v_t * s, self.v_n * s)
    }
}

/// Resultant `[m_t, m_n, f_t, f_n]` of a contact force distribution,
/// expressed at the origin of the contact frame.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Wrench {
    pub m_t: Vec2,
    pub m_n: f64,
    pub f_t: Vec2,
    pub f_n: f64,
}

impl Wrench {
    pub const ZERO: Wrench = Wrench {
        m_t: Vec2::ZERO,
        m_n: 0.0,
        f_t: Vec2::ZERO,
        f_n: 0.0,
    };

    pub const fn new(m_t: Vec2, m_n: f64, f_t: Vec2, f_n: f64) -> Self {
        Self { m_t, m_n, f_t, f_n }
    }

    /// Wrench of a purely normal distribution.
    pub const fn normal(m_t: Vec2, f_n: f64) -> Self {
        Self::new(m_t, 0.0, Vec2::ZERO, f_n)
    }

    pub fn is_finite(&self) -> bool {
        self.m_t.is_finite() && self.m_n.is_finite() && self.f_t.is_finite() && self.f_n.is_finite()
    }

    /// The triple `[m_t, f_n]`.
    pub fn homogeneous(&self) -> HomVec3 {
        HomVec3::new(self.m_t, self.f_n)
    }
}

/// One Dirac atom of a force distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub point: Vec2,
    pub rho_n: f64,
    pub rho_t: Vec2,
}

impl Atom {
    /// Purely normal atom.
    pub const fn normal(point: Vec2, rho_n: f64) -> Self {
        Self {
            point,
            rho_n,
            rho_t: Vec2::ZERO,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldError {
    NonFinite { index: usize },
    NegativeIntensity { index: usize, rho_n: f64 },
    AtomOutsidePatch { index: usize },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NonFinite { index } => write!(f, "atom {index} has non-finite components"),
            FieldError::NegativeIntensity { index, rho_n } => {
                write!(f, "atom {index} has negative normal intensity {rho_n}")
            }
            FieldError::AtomOutsidePatch { index } => write!(f, "atom {index} lies outside the patch"),
        }
    }
}

impl core::error::Error for FieldError {}

/// Finite sum of Dirac atoms standing in for a force density on the patch.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ForceDistribution {
    atoms: Vec<Atom>,
}

impl ForceDistribution {
    pub const fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    /// Repulsive distribution: every `rho_n` must be finite and nonnegative.
    pub fn new(atoms: Vec<Atom>) -> Result<Self, FieldError> {
        for (index, a) in atoms.iter().enumerate() {
            if !a.point.is_finite() || !a.rho_n.is_finite() || !a.rho_t.is_finite() {
                return Err(FieldError::NonFinite { index });
            }
            if a.rho_n < 0.0 {
                return Err(FieldError::NegativeIntensity { index, rho_n: a.rho_n });
            }
        }
        Ok(Self { atoms })
    }

    /// No sign check; used to build counterexamples.
    pub fn new_unchecked(atoms: Vec<Atom>) -> Self {
        Self { atoms }
    }

    /// Checks that every atom lies in the patch region within `tol`.
    pub fn validate_in(&self, patch: &Patch, tol: f64) -> Result<(), FieldError> {
        match self.atoms.iter().position(|a| !patch.covers(a.point, tol)) {
            Some(index) => Err(FieldError::AtomOutsidePatch { index }),
            None => Ok(()),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_repulsive(&self) -> bool {
        self.atoms.iter().all(|a| a.rho_n >= 0.0)
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// `nu_n(x) = v_n + <omega_t, perp(x)>`.
#[inline]
pub fn normal_velocity(twist: &Twist, x: Vec2) -> f64 {
    twist.v_n + twist.omega_t.dot(x.perp())
}

/// `nu_t(x) = v_t - omega_n perp(x)`.
#[inline]
pub fn tangential_velocity(twist: &Twist, x: Vec2) -> Vec2 {
    twist.v_t - x.perp() * twist.omega_n
}

/// Resultant of the atoms, summed in list order with compensation.
pub fn integrate_wrench(dist: &ForceDistribution) -> Wrench {
    let mut f_n = CompensatedSum::default();
    let mut m_x = CompensatedSum::default();
    let mut m_y = CompensatedSum::default();
    let mut f_x = CompensatedSum::default();
    let mut f_y = CompensatedSum::default();
    let mut m_n = CompensatedSum::default();
    for a in dist.atoms() {
        let xp = a.point.perp();
        f_n.add(a.rho_n);
        m_x.add(a.rho_n * xp.x);
        m_y.add(a.rho_n * xp.y);
        f_x.add(a.rho_t.x);
        f_y.add(a.rho_t.y);
        m_n.add(-(a.rho_t.x * xp.x));
        m_n.add(-(a.rho_t.y * xp.y));
    }
    Wrench::new(
        Vec2::new(m_x.value(), m_y.value()),
        m_n.value(),
        Vec2::new(f_x.value(), f_y.value()),
        f_n.value(),
    )
}

fn moment_free_point(w: &Wrench, tol: f64) -> Option<Vec2> {
    (w.f_n.abs() > tol).then(|| -w.m_t.perp() / w.f_n)
}

/// `c_p = -perp(m_t) / f_n`, absent when `|f_n| <= tol`.
pub fn center_of_pressure(w: &Wrench, tol: f64) -> Option<Vec2> {
    moment_free_point(w, tol)
}

/// Tangential moment about `c`: `m_t - f_n perp(c)`.
pub fn varignon_shift(w: &Wrench, c: Vec2) -> Vec2 {
    w.m_t - c.perp() * w.f_n
}

/// Point about which the tangential moment vanishes. Same value as
/// [`center_of_pressure`], bit for bit.
pub fn zmp(w: &Wrench, tol: f64) -> Option<Vec2> {
    moment_free_point(w, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn normal_velocity_examples() {
        let t = Twist::normal(Vec2::new(1.0, 0.0), 1.0);
        assert_eq!(normal_velocity(&t, Vec2::new(0.0, -1.0)), 0.0);
        assert_eq!(normal_velocity(&t, Vec2::new(0.0, 1.0)), 2.0);
        let c = Twist::normal(Vec2::ZERO, 3.5);
        assert_eq!(normal_velocity(&c, Vec2::new(-4.0, 9.0)), 3.5);
    }

    #[test]
    fn normal_velocity_matches_expanded_form() {
        let t = Twist::normal(Vec2::new(0.3, -1.7), 0.25);
        for x in [Vec2::new(1.0, 2.0), Vec2::new(-3.0, 0.5), Vec2::ZERO] {
            let expanded = t.v_n + x.y * t.omega_t.x - x.x * t.omega_t.y;
            assert!((normal_velocity(&t, x) - expanded).abs() < 1e-15);
        }
    }

    #[test]
    fn tangential_velocity_examples() {
        let slide = Twist::new(Vec2::ZERO, 0.0, Vec2::new(1.0, 0.0), 0.0);
        assert_eq!(tangential_velocity(&slide, Vec2::new(4.0, -2.0)), Vec2::new(1.0, 0.0));
        let spin = Twist::new(Vec2::ZERO, 1.0, Vec2::ZERO, 0.0);
        assert_eq!(tangential_velocity(&spin, Vec2::new(1.0, 0.0)), Vec2::new(0.0, 1.0));
        assert_eq!(tangential_velocity(&Twist::ZERO, Vec2::new(5.0, 5.0)), Vec2::ZERO);
    }

    #[test]
    fn integrate_examples() {
        let d = ForceDistribution::new(vec![
            Atom::normal(Vec2::new(1.0, 0.0), 2.0),
            Atom::normal(Vec2::new(-1.0, 0.0), 2.0),
        ])
        .unwrap();
        let w = integrate_wrench(&d);
        assert_eq!(w.f_n, 4.0);
        assert_eq!(w.m_t, Vec2::ZERO);

        assert_eq!(integrate_wrench(&ForceDistribution::empty()), Wrench::ZERO);

        let d = ForceDistribution::new(vec![Atom::normal(Vec2::new(0.0, -1.0), 2.0)]).unwrap();
        let w = integrate_wrench(&d);
        assert_eq!(w.f_n, 2.0);
        assert_eq!(w.m_t, Vec2::new(-2.0, 0.0));
    }

    #[test]
    fn integrate_tangential_parts() {
        let d = ForceDistribution::new(vec![Atom {
            point: Vec2::new(1.0, 0.0),
            rho_n: 0.0,
            rho_t: Vec2::new(0.0, 3.0),
        }])
        .unwrap();
        let w = integrate_wrench(&d);
        assert_eq!(w.f_t, Vec2::new(0.0, 3.0));
        // -<(0,3), perp(1,0)> = -<(0,3),(0,-1)> = 3
        assert_eq!(w.m_n, 3.0);
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let d = ForceDistribution::new(vec![
            Atom::normal(Vec2::ZERO, 1e16),
            Atom::normal(Vec2::ZERO, 1.0),
            Atom::normal(Vec2::ZERO, 1.0),
            Atom::normal(Vec2::ZERO, -0.0),
        ])
        .unwrap();
        assert_eq!(integrate_wrench(&d).f_n, 1e16 + 2.0);
    }

    #[test]
    fn distribution_validation() {
        assert_eq!(
            ForceDistribution::new(vec![Atom::normal(Vec2::ZERO, -1.0)]),
            Err(FieldError::NegativeIntensity { index: 0, rho_n: -1.0 })
        );
        let d = ForceDistribution::new_unchecked(vec![Atom::normal(Vec2::ZERO, -1.0)]);
        assert!(!d.is_repulsive());
        let sq = Patch::rectangle(Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0)).unwrap();
        let d = ForceDistribution::new(vec![
            Atom::normal(Vec2::ZERO, 1.0),
            Atom::normal(Vec2::new(3.0, 0.0), 1.0),
        ])
        .unwrap();
        assert_eq!(d.validate_in(&sq, 1e-9), Err(FieldError::AtomOutsidePatch { index: 1 }));
    }

    #[test]
    fn cop_examples() {
        let w = Wrench::normal(Vec2::new(-2.0, 0.0), 2.0);
        assert_eq!(center_of_pressure(&w, 1e-9), Some(Vec2::new(0.0, -1.0)));
        assert_eq!(zmp(&w, 1e-9), Some(Vec2::new(0.0, -1.0)));
        let c = center_of_pressure(&Wrench::normal(Vec2::ZERO, 5.0), 1e-9).unwrap();
        assert_eq!(c, Vec2::ZERO);
        assert_eq!(center_of_pressure(&Wrench::ZERO, 1e-9), None);
        assert_eq!(zmp(&Wrench::ZERO, 1e-9), None);
        assert_eq!(zmp(&Wrench::normal(Vec2::ZERO, 1.0), 1e-9), Some(Vec2::ZERO));
    }

    #[test]
    fn varignon_examples() {
        let w = Wrench::normal(Vec2::new(-2.0, 0.0), 2.0);
        assert_eq!(varignon_shift(&w, Vec2::new(0.0, -1.0)), Vec2::ZERO);
        assert_eq!(varignon_shift(&w, Vec2::ZERO), w.m_t);
        let unit = Wrench::normal(Vec2::ZERO, 1.0);
        assert_eq!(varignon_shift(&unit, Vec2::new(1.0, 0.0)), Vec2::new(0.0, 1.0));
    }
}
