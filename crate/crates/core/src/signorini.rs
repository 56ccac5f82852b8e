//! The planar Signorini condition
//!
//! ```text
//! K_P  ∋  [m_t, f_n]  ⊥  [omega_t, v_n]  ∈  K_P*
//! ```
//!
//! [`check`] evaluates both memberships and the complementarity residual,
//! [`classify`] names the contact regime of a satisfying pair,
//! [`extended_cop`] gives the set-valued center of pressure that stays
//! defined when the normal force vanishes, and [`synthesize_distribution`]
//! builds a finite force distribution realizing a satisfying pair pointwise.
//!
//! Every tolerance here is relative: it is multiplied by
//! [`problem_scale`], `max(1, |[m_t, f_n]|, |[omega_t, v_n]|, diameter)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cones::{complementarity_residual, PatchCone};
use crate::fields::{center_of_pressure, Atom, ForceDistribution, Twist, Wrench};
use crate::geometry::{edges, GeometryError, Patch, Shape, SupportSet, Vec2};

/// Oriented zero normal-velocity line `{x : <x, normal> = offset}`.
///
/// The normal velocity field is `|omega_t| (<x, normal> - offset)`, so it is
/// positive on the side `normal` points to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroLine {
    pub normal: Vec2,
    pub offset: f64,
}

impl ZeroLine {
    pub fn signed_distance(&self, x: Vec2) -> f64 {
        x.dot(self.normal) - self.offset
    }

    /// Foot of the perpendicular from the origin.
    pub fn point(&self) -> Vec2 {
        self.normal * self.offset
    }

    /// Unit direction along the line.
    pub fn direction(&self) -> Vec2 {
        self.normal.perp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    /// Zero wrench, nonzero twist: the contact is breaking.
    Separating,
    /// Nonzero wrench, zero twist: the patch is pressed flat.
    Resting,
    /// Both nonzero: the body pivots about the zero-line through the CoP.
    Tipping,
    /// Both zero.
    Inactive,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::Separating => "separating",
            RegimeKind::Resting => "resting",
            RegimeKind::Tipping => "tipping",
            RegimeKind::Inactive => "inactive",
        }
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Regime {
    pub kind: RegimeKind,
    /// In-plane motion `[v_t, omega_n]` is nonzero: sliding or slide-tipping
    /// under a friction law.
    pub tangential_motion: bool,
}

/// Center of pressure extended to the zero-force case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedCop {
    Point(Vec2),
    Set(SupportSet),
}

impl ExtendedCop {
    /// Distance from `p` to the set; `FullHull` reports 0.
    pub fn distance_to(&self, p: Vec2) -> f64 {
        match self {
            ExtendedCop::Point(c) => c.distance(p),
            ExtendedCop::Set(s) => s.distance_to(p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub primal_ok: bool,
    pub dual_ok: bool,
    pub residual: f64,
    pub satisfied: bool,
    /// `None` when the pair is not complementary.
    pub regime: Option<Regime>,
    pub cop: Option<Vec2>,
    pub zero_line: Option<ZeroLine>,
    pub extended_cop: ExtendedCop,
    pub scale: f64,
    pub wrench_norm: f64,
    pub twist_norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SignoriniError {
    InvalidPatch(GeometryError),
    NotComplementary {
        primal_ok: bool,
        dual_ok: bool,
        residual: f64,
    },
    SynthesisFailure,
}

impl fmt::Display for SignoriniError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignoriniError::InvalidPatch(e) => write!(f, "invalid patch: {e}"),
            SignoriniError::NotComplementary {
                primal_ok,
                dual_ok,
                residual,
            } => write!(
                f,
                "wrench and twist are not complementary (primal_ok={primal_ok}, dual_ok={dual_ok}, residual={residual})"
            ),
            SignoriniError::SynthesisFailure => {
                f.write_str("no chord through the center of pressure with both ends in the patch")
            }
        }
    }
}

impl core::error::Error for SignoriniError {}

impl From<GeometryError> for SignoriniError {
    fn from(e: GeometryError) -> Self {
        SignoriniError::InvalidPatch(e)
    }
}

/// `max(1, |[m_t, f_n]|, |[omega_t, v_n]|, diameter)`.
pub fn problem_scale(patch: &Patch, w: &Wrench, t: &Twist) -> f64 {
    1f64.max(w.homogeneous().norm())
        .max(t.homogeneous().norm())
        .max(patch.diameter())
}

/// Zero normal-velocity line of `t`, absent when `|omega_t| <= tol`.
pub fn zero_line(t: &Twist, tol: f64) -> Option<ZeroLine> {
    let w = t.omega_t.norm();
    if w <= tol {
        return None;
    }
    // <x, perp(omega)> = v_n  <=>  <x, -perp(omega)/|omega|> = -v_n/|omega|
    Some(ZeroLine {
        normal: -t.omega_t.perp() / w,
        offset: -t.v_n / w,
    })
}

fn extended_cop_scaled(patch: &Patch, w: &Wrench, t: &Twist, band: f64) -> ExtendedCop {
    if w.f_n.abs() > band {
        ExtendedCop::Point(-w.m_t.perp() / w.f_n)
    } else if t.omega_t.norm() <= band {
        ExtendedCop::Set(SupportSet::FullHull)
    } else {
        ExtendedCop::Set(patch.support(t.omega_t.perp()).1)
    }
}

/// Classical CoP when `|f_n|` is above the band, otherwise the face of the
/// hull where the normal velocity field is smallest.
pub fn extended_cop(patch: &Patch, w: &Wrench, t: &Twist, tol: f64) -> ExtendedCop {
    extended_cop_scaled(patch, w, t, tol * problem_scale(patch, w, t))
}

pub fn check(patch: &Patch, w: &Wrench, t: &Twist, tol: f64) -> Verdict {
    check_cone(&PatchCone::new(patch), w, t, tol)
}

/// [`check`] against a prebuilt cone.
pub fn check_cone(cone: &PatchCone, w: &Wrench, t: &Twist, tol: f64) -> Verdict {
    let patch = cone.patch();
    let wh = w.homogeneous();
    let th = t.homogeneous();
    let scale = problem_scale(patch, w, t);
    let band = tol * scale;
    let primal_ok = cone.in_primal(&wh, tol);
    let dual_ok = cone.in_dual(&th, tol);
    let residual = complementarity_residual(&wh, &th);
    let satisfied = primal_ok && dual_ok && residual.abs() <= band;
    let wrench_norm = wh.norm();
    let twist_norm = th.norm();
    let regime = satisfied.then(|| regime_of(wrench_norm, twist_norm, t, band));
    Verdict {
        primal_ok,
        dual_ok,
        residual,
        satisfied,
        regime,
        cop: center_of_pressure(w, band),
        zero_line: zero_line(t, band),
        extended_cop: extended_cop_scaled(patch, w, t, band),
        scale,
        wrench_norm,
        twist_norm,
    }
}

fn regime_of(wrench_norm: f64, twist_norm: f64, t: &Twist, band: f64) -> Regime {
    let kind = match (wrench_norm <= band, twist_norm <= band) {
        (true, true) => RegimeKind::Inactive,
        (true, false) => RegimeKind::Separating,
        (false, true) => RegimeKind::Resting,
        (false, false) => RegimeKind::Tipping,
    };
    Regime {
        kind,
        tangential_motion: t.v_t.norm() > band || t.omega_n.abs() > band,
    }
}

/// Regime of a satisfying pair; non-complementary pairs are refused.
pub fn classify(patch: &Patch, w: &Wrench, t: &Twist, tol: f64) -> Result<Regime, SignoriniError> {
    let v = check(patch, w, t, tol);
    v.regime.ok_or(SignoriniError::NotComplementary {
        primal_ok: v.primal_ok,
        dual_ok: v.dual_ok,
        residual: v.residual,
    })
}

/// Smallest atom set realizing the normal part of `w` whose atoms satisfy
/// the pointwise Signorini condition against `t`:
///
/// - no atoms when `f_n` is in the zero band;
/// - one atom at the CoP when the CoP lies in the patch itself;
/// - otherwise (CoP in a notch of a nonconvex polygon) two atoms on the
///   patch outline, on a chord through the CoP. The chord follows the
///   zero-line when the twist is nonzero, since that is the only line
///   through the CoP on which the normal velocity vanishes.
pub fn synthesize_distribution(
    patch: &Patch,
    w: &Wrench,
    t: &Twist,
    tol: f64,
) -> Result<ForceDistribution, SignoriniError> {
    let v = check(patch, w, t, tol);
    let regime = v.regime.ok_or(SignoriniError::NotComplementary {
        primal_ok: v.primal_ok,
        dual_ok: v.dual_ok,
        residual: v.residual,
    })?;
    let band = tol * v.scale;
    if w.f_n <= band {
        return Ok(ForceDistribution::empty());
    }
    let cop = -w.m_t.perp() / w.f_n;
    if patch.covers(cop, tol) {
        return Ok(ForceDistribution::new_unchecked(vec![Atom::normal(cop, w.f_n)]));
    }
    let Shape::Polygon(outline) = patch.shape() else {
        return Err(SignoriniError::SynthesisFailure);
    };

    let directions: Vec<Vec2> = match (regime.kind, v.zero_line) {
        (RegimeKind::Tipping, Some(line)) => vec![line.direction()],
        (RegimeKind::Tipping, None) => Vec::new(),
        _ => outline
            .iter()
            .filter_map(|&p| (p - cop).normalized())
            .chain(
                (0..CHORD_DIRECTIONS)
                    .map(|k| Vec2::new(1.0, 0.0).rotated(core::f64::consts::PI * k as f64 / CHORD_DIRECTIONS as f64)),
            )
            .collect(),
    };
    for u in directions {
        if let Some((x1, x2)) = bracketing_chord(outline, cop, u, patch.length_scale()) {
            let e = x1 - x2;
            let alpha = ((cop - x2).dot(e) / e.norm_squared()).clamp(0.0, 1.0);
            return Ok(ForceDistribution::new_unchecked(vec![
                Atom::normal(x1, alpha * w.f_n),
                Atom::normal(x2, (1.0 - alpha) * w.f_n),
            ]));
        }
    }
    Err(SignoriniError::SynthesisFailure)
}

const CHORD_DIRECTIONS: usize = 256;

/// Nearest outline crossings on either side of `c` along the line `c + s u`.
fn bracketing_chord(outline: &[Vec2], c: Vec2, u: Vec2, length: f64) -> Option<(Vec2, Vec2)> {
    let eps = 1e-12 * length;
    let mut below: Option<(f64, Vec2)> = None;
    let mut above: Option<(f64, Vec2)> = None;
    let mut push = |s: f64, p: Vec2| {
        if s < 0.0 {
            if below.map_or(true, |(b, _)| s > b) {
                below = Some((s, p));
            }
        } else if s > 0.0 && above.map_or(true, |(a, _)| s < a) {
            above = Some((s, p));
        }
    };
    for (a, b) in edges(outline) {
        let e = b - a;
        let den = u.cross(e);
        if den.abs() <= 1e-14 * e.norm() {
            if u.cross(a - c).abs() <= eps {
                push((a - c).dot(u), a);
                push((b - c).dot(u), b);
            }
            continue;
        }
        let s = (a - c).cross(e) / den;
        let r = (a - c).cross(u) / den;
        if (-1e-12..=1.0 + 1e-12).contains(&r) {
            push(s, a + e * r.clamp(0.0, 1.0));
        }
    }
    Some((below?.1, above?.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{integrate_wrench, normal_velocity};

    fn square() -> Patch {
        Patch::rectangle(Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0)).unwrap()
    }

    fn l_shape() -> Patch {
        Patch::polygon(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 2.0),
            Vec2::new(0.0, 2.0),
        ])
        .unwrap()
    }

    const TOL: f64 = 1e-9;

    #[test]
    fn zero_line_examples() {
        let l = zero_line(&Twist::normal(Vec2::new(1.0, 0.0), 1.0), TOL).unwrap();
        // {x2 = -1}: every point with y = -1 is on it
        for x in [-3.0, 0.0, 2.5] {
            assert!(l.signed_distance(Vec2::new(x, -1.0)).abs() < 1e-15);
        }
        assert!((l.normal.norm() - 1.0).abs() < 1e-12);
        assert!(zero_line(&Twist::normal(Vec2::ZERO, 3.0), TOL).is_none());
        let l = zero_line(&Twist::normal(Vec2::new(0.0, 1.0), 0.0), TOL).unwrap();
        for y in [-1.0, 0.0, 4.0] {
            assert!(l.signed_distance(Vec2::new(0.0, y)).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_line_orientation_matches_field() {
        let t = Twist::normal(Vec2::new(0.4, -1.3), 0.7);
        let l = zero_line(&t, TOL).unwrap();
        for x in [Vec2::new(1.0, 2.0), Vec2::new(-2.0, 0.3), Vec2::new(0.0, -5.0)] {
            let expected = t.omega_t.norm() * l.signed_distance(x);
            assert!((normal_velocity(&t, x) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn check_tipping() {
        let w = Wrench::normal(Vec2::new(-2.0, 0.0), 2.0);
        let t = Twist::normal(Vec2::new(1.0, 0.0), 1.0);
        let v = check(&square(), &w, &t, TOL);
        assert!(v.primal_ok && v.dual_ok && v.satisfied);
        assert_eq!(v.residual, 0.0);
        assert_eq!(v.regime.unwrap().kind, RegimeKind::Tipping);
        assert_eq!(v.cop, Some(Vec2::new(0.0, -1.0)));
        assert!(v.zero_line.unwrap().signed_distance(v.cop.unwrap()).abs() < 1e-15);
        assert_eq!(v.extended_cop, ExtendedCop::Point(Vec2::new(0.0, -1.0)));
    }

    #[test]
    fn check_resting_and_violation() {
        let w = Wrench::normal(Vec2::ZERO, 1.0);
        let v = check(&square(), &w, &Twist::ZERO, TOL);
        assert!(v.satisfied);
        assert_eq!(v.regime.unwrap().kind, RegimeKind::Resting);
        assert_eq!(v.cop, Some(Vec2::ZERO));
        assert!(v.zero_line.is_none());

        let v = check(&square(), &w, &Twist::normal(Vec2::ZERO, 1.0), TOL);
        assert!(v.primal_ok && v.dual_ok);
        assert!(!v.satisfied);
        assert_eq!(v.residual, 1.0);
        assert!(v.regime.is_none());
    }

    #[test]
    fn classify_examples() {
        let sep = classify(&square(), &Wrench::ZERO, &Twist::normal(Vec2::new(1.0, 0.0), 2.0), TOL).unwrap();
        assert_eq!(sep.kind, RegimeKind::Separating);
        assert!(!sep.tangential_motion);

        let sliding = Twist::new(Vec2::ZERO, 0.0, Vec2::new(1.0, 0.0), 0.0);
        let r = classify(&square(), &Wrench::normal(Vec2::ZERO, 1.0), &sliding, TOL).unwrap();
        assert_eq!(
            r,
            Regime {
                kind: RegimeKind::Resting,
                tangential_motion: true
            }
        );

        let r = classify(
            &square(),
            &Wrench::normal(Vec2::new(-2.0, 0.0), 2.0),
            &Twist::normal(Vec2::new(1.0, 0.0), 1.0),
            TOL,
        )
        .unwrap();
        assert_eq!(r.kind, RegimeKind::Tipping);

        assert_eq!(
            classify(&square(), &Wrench::ZERO, &Twist::ZERO, TOL).unwrap().kind,
            RegimeKind::Inactive
        );

        let err = classify(
            &square(),
            &Wrench::normal(Vec2::ZERO, 1.0),
            &Twist::normal(Vec2::ZERO, 1.0),
            TOL,
        );
        assert!(matches!(err, Err(SignoriniError::NotComplementary { residual, .. }) if residual == 1.0));
    }

    #[test]
    fn extended_cop_examples() {
        let sq = square();
        assert_eq!(
            extended_cop(&sq, &Wrench::normal(Vec2::new(-2.0, 0.0), 2.0), &Twist::ZERO, TOL),
            ExtendedCop::Point(Vec2::new(0.0, -1.0))
        );
        assert_eq!(
            extended_cop(&sq, &Wrench::ZERO, &Twist::normal(Vec2::new(1.0, 0.0), 2.0), TOL),
            ExtendedCop::Set(SupportSet::Segment(Vec2::new(-1.0, -1.0), Vec2::new(1.0, -1.0)))
        );
        assert_eq!(
            extended_cop(&sq, &Wrench::ZERO, &Twist::ZERO, TOL),
            ExtendedCop::Set(SupportSet::FullHull)
        );
    }

    #[test]
    fn synthesize_tipping_single_atom() {
        let w = Wrench::normal(Vec2::new(-2.0, 0.0), 2.0);
        let t = Twist::normal(Vec2::new(1.0, 0.0), 1.0);
        let d = synthesize_distribution(&square(), &w, &t, TOL).unwrap();
        assert_eq!(d.atoms(), &[Atom::normal(Vec2::new(0.0, -1.0), 2.0)]);
        assert_eq!(normal_velocity(&t, d.atoms()[0].point), 0.0);
    }

    #[test]
    fn synthesize_zero_force_is_empty() {
        let d =
            synthesize_distribution(&square(), &Wrench::ZERO, &Twist::normal(Vec2::new(1.0, 0.0), 2.0), TOL).unwrap();
        assert!(d.is_empty());
        let d = synthesize_distribution(&square(), &Wrench::ZERO, &Twist::ZERO, TOL).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn synthesize_refuses_non_complementary() {
        let r = synthesize_distribution(
            &square(),
            &Wrench::normal(Vec2::ZERO, 1.0),
            &Twist::normal(Vec2::ZERO, 1.0),
            TOL,
        );
        assert!(matches!(r, Err(SignoriniError::NotComplementary { .. })));
    }

    #[test]
    fn synthesize_notch_tipping_uses_zero_line_chord() {
        // CoP on the hull edge (2,1)-(1,2) bridging the notch; the body
        // tips about that edge.
        let patch = l_shape();
        let c = Vec2::new(1.25, 1.75);
        let f = 3.0;
        let w = Wrench::normal(c.perp() * f, f);
        // nu_n(x) = 3 - x - y: zero-line {x + y = 3}, patch on the positive side.
        let t = Twist::normal(Vec2::new(-1.0, 1.0), 3.0);
        let v = check(&patch, &w, &t, TOL);
        assert!(v.satisfied, "{v:?}");
        assert_eq!(v.regime.unwrap().kind, RegimeKind::Tipping);
        let d = synthesize_distribution(&patch, &w, &t, TOL).unwrap();
        assert_eq!(d.len(), 2);
        let back = integrate_wrench(&d);
        assert!((back.f_n - f).abs() < 1e-12);
        assert!((back.m_t - w.m_t).norm() < 1e-12);
        for a in d.atoms() {
            assert!(a.rho_n >= 0.0);
            assert!(patch.covers(a.point, 1e-12));
            assert!(normal_velocity(&t, a.point).abs() < 1e-12);
        }
        let mut pts: Vec<Vec2> = d.atoms().iter().map(|a| a.point).collect();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));
        assert!(pts[0].distance(Vec2::new(1.0, 2.0)) < 1e-12);
        assert!(pts[1].distance(Vec2::new(2.0, 1.0)) < 1e-12);
    }

    #[test]
    fn synthesize_notch_resting_finds_some_chord() {
        let patch = l_shape();
        let c = Vec2::new(1.3, 1.4);
        let w = Wrench::normal(c.perp() * 2.0, 2.0);
        let d = synthesize_distribution(&patch, &w, &Twist::ZERO, TOL).unwrap();
        assert_eq!(d.len(), 2);
        let back = integrate_wrench(&d);
        assert!((back.m_t - w.m_t).norm() < 1e-12);
        assert!(d.atoms().iter().all(|a| a.rho_n >= 0.0 && patch.covers(a.point, 1e-12)));
    }
}
