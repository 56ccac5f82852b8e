//! Property tests for the geometric, field and cone invariants.

use proptest::prelude::*;
use signorini_core::cones::PatchCone;
use signorini_core::oracle::{random_convex_polygon, random_ellipse, random_star_polygon, SamplePlan, SampleSet};
use signorini_core::{
    center_of_pressure, check, integrate_wrench, normal_velocity, synthesize_distribution, varignon_shift, zmp, Atom,
    ForceDistribution, HomVec3, Patch, RegimeKind, Shape, SupportSet, Twist, Vec2, Wrench,
};

fn coord() -> impl Strategy<Value = f64> {
    (-1000i32..=1000).prop_map(|x| f64::from(x) / 100.0)
}

fn vec2() -> impl Strategy<Value = Vec2> {
    (coord(), coord()).prop_map(|(x, y)| Vec2::new(x, y))
}

fn twist() -> impl Strategy<Value = Twist> {
    (vec2(), coord(), vec2(), coord()).prop_map(|(w, wn, v, vn)| Twist::new(w, wn, v, vn))
}

fn point_cloud() -> impl Strategy<Value = Vec<Vec2>> {
    prop::collection::vec(vec2(), 1..20)
}

fn any_patch() -> impl Strategy<Value = Patch> {
    (0u64..10_000, 0u8..3).prop_map(|(seed, kind)| match kind {
        0 => random_convex_polygon(seed),
        1 => random_star_polygon(seed, 3 + (seed % 10) as usize),
        _ => random_ellipse(seed),
    })
}

fn cloud_patch(points: &[Vec2]) -> Option<Patch> {
    let mut v = points.to_vec();
    v.dedup();
    if v.len() > 1 && v[0] == v[v.len() - 1] {
        v.pop();
    }
    Patch::polygon(v).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn perp_is_orthogonal_quarter_turn(v in vec2()) {
        prop_assert_eq!(v.perp().perp(), -v);
        prop_assert_eq!(v.dot(v.perp()), 0.0);
        prop_assert_eq!(v.perp().perp().perp().perp(), v);
    }

    #[test]
    fn hull_is_idempotent_and_ccw(points in point_cloud()) {
        let Some(p) = cloud_patch(&points) else { return Ok(()) };
        let h = p.hull_vertices().to_vec();
        let again = Patch::polygon(h.clone()).unwrap();
        prop_assert_eq!(again.hull_vertices(), &h[..]);
        if h.len() >= 3 {
            for i in 0..h.len() {
                let (a, b, c) = (h[i], h[(i + 1) % h.len()], h[(i + 2) % h.len()]);
                prop_assert!((b - a).cross(c - b) > 0.0);
            }
        }
        for q in &points {
            prop_assert!(p.contains(*q, 1e-12));
        }
    }

    #[test]
    fn support_dominates_hull_vertices(points in point_cloud(), d in vec2()) {
        let Some(p) = cloud_patch(&points) else { return Ok(()) };
        let (value, set) = p.support(d);
        let slack = 1e-12 * (1.0 + d.norm()) * p.magnitude();
        for x in p.hull_vertices() {
            prop_assert!(x.dot(d) <= value + slack);
        }
        match set {
            SupportSet::Vertex(v) => prop_assert!((v.dot(d) - value).abs() <= slack),
            SupportSet::Segment(a, b) => {
                prop_assert!(a != b);
                prop_assert!((a.dot(d) - value).abs() <= slack);
                prop_assert!((b.dot(d) - value).abs() <= slack);
            }
            SupportSet::FullHull => prop_assert_eq!(d, Vec2::ZERO),
        }
    }

    #[test]
    fn contains_matches_edge_normal_enumeration(points in point_cloud(), q in vec2()) {
        let Some(p) = cloud_patch(&points) else { return Ok(()) };
        let h = p.hull_vertices();
        if h.len() < 3 {
            return Ok(());
        }
        // Stay away from the boundary where rounding decides.
        if p.hull_boundary_distance(q) < 1e-9 {
            return Ok(());
        }
        let by_support = (0..h.len()).all(|i| {
            let normal = (h[(i + 1) % h.len()] - h[i]).perp();
            q.dot(normal) <= p.support(normal).0
        });
        prop_assert_eq!(p.contains(q, 0.0), by_support);
    }

    #[test]
    fn normal_velocity_is_linear_in_twist(a in twist(), b in twist(), s in coord(), r in coord(), x in vec2()) {
        let lhs = normal_velocity(&(a * s + b * r), x);
        let rhs = s * normal_velocity(&a, x) + r * normal_velocity(&b, x);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs() + rhs.abs()) * 1e3);
    }

    #[test]
    fn normal_velocity_is_affine_in_point(t in twist(), x1 in vec2(), x2 in vec2(), alpha in 0.0f64..=1.0) {
        let mid = x1 * alpha + x2 * (1.0 - alpha);
        let lhs = normal_velocity(&t, mid);
        let rhs = alpha * normal_velocity(&t, x1) + (1.0 - alpha) * normal_velocity(&t, x2);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * 1e4);
    }

    #[test]
    fn integration_is_permutation_invariant_and_linear(
        atoms in prop::collection::vec((vec2(), 0.0f64..10.0), 0..10),
        k in 0.0f64..5.0,
    ) {
        let list: Vec<Atom> = atoms.iter().map(|&(p, r)| Atom::normal(p, r)).collect();
        let mut reversed = list.clone();
        reversed.reverse();
        let w = integrate_wrench(&ForceDistribution::new(list.clone()).unwrap());
        let wr = integrate_wrench(&ForceDistribution::new(reversed).unwrap());
        let tol = 1e-12 * (1.0 + w.f_n) * 10.0;
        prop_assert!((w.f_n - wr.f_n).abs() <= tol);
        prop_assert!((w.m_t - wr.m_t).norm() <= tol);
        let scaled: Vec<Atom> = list.iter().map(|a| Atom::normal(a.point, a.rho_n * k)).collect();
        let ws = integrate_wrench(&ForceDistribution::new(scaled).unwrap());
        prop_assert!((ws.f_n - k * w.f_n).abs() <= tol * (1.0 + k));
        prop_assert!((ws.m_t - w.m_t * k).norm() <= tol * (1.0 + k));
    }

    #[test]
    fn cop_zeroes_varignon_and_equals_zmp(m in vec2(), f in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0]) {
        let w = Wrench::normal(m, f);
        let c = center_of_pressure(&w, 1e-9).unwrap();
        prop_assert_eq!(Some(c), zmp(&w, 1e-9));
        let residual = varignon_shift(&w, c).norm();
        prop_assert!(residual <= 1e-12 * m.norm() + 1e-12 * f.abs() * c.norm().max(1.0));
    }

    #[test]
    fn repulsive_cop_lies_in_hull(
        patch in any_patch(),
        seed in 0u64..1000,
    ) {
        let (d, w) = signorini_core::oracle::random_repulsive_instance(&patch, seed).unwrap();
        prop_assert!(d.is_repulsive());
        if let Some(c) = center_of_pressure(&w, 1e-12) {
            prop_assert!(patch.contains(c, 1e-9));
        }
    }

    #[test]
    fn cones_are_scale_invariant(patch in any_patch(), h in (vec2(), coord()), s in 0.01f64..100.0) {
        let cone = PatchCone::new(&patch);
        let h = HomVec3::new(h.0, h.1);
        // Away from the tolerance bands, membership cannot depend on scale.
        let margin_ok = {
            let min_nu = cone.min_normal_velocity(&h);
            min_nu.abs() > 1e-6 * cone.dual_scale(&h)
        };
        if margin_ok {
            prop_assert_eq!(cone.in_dual(&h, 1e-9), cone.in_dual(&(h * s), 1e-9));
        }
        if h.normal.abs() > 1e-3 {
            let c = -h.tangential.perp() / h.normal;
            if patch.hull_boundary_distance(c) > 1e-6 * patch.length_scale() {
                prop_assert_eq!(cone.in_primal(&h, 1e-9), cone.in_primal(&(h * s), 1e-9));
            }
        }
    }

    #[test]
    fn memberships_are_rotation_equivariant(patch in any_patch(), h in (vec2(), coord()), angle in 0.0f64..6.3) {
        let rotated = match patch.shape() {
            Shape::Polygon(v) => Patch::polygon(v.iter().map(|p| p.rotated(angle)).collect()).unwrap(),
            Shape::Ellipse(e) => Patch::ellipse(e.center.rotated(angle), e.semi_axes, e.rotation + angle).unwrap(),
        };
        let h = HomVec3::new(h.0, h.1);
        let hr = HomVec3::new(h.tangential.rotated(angle), h.normal);
        let (k, kr) = (PatchCone::new(&patch), PatchCone::new(&rotated));
        if k.min_normal_velocity(&h).abs() > 1e-6 * k.dual_scale(&h) {
            prop_assert_eq!(k.in_dual(&h, 1e-9), kr.in_dual(&hr, 1e-9));
        }
        if h.normal.abs() > 1e-3 {
            let c = -h.tangential.perp() / h.normal;
            if patch.hull_boundary_distance(c) > 1e-6 * patch.length_scale() {
                prop_assert_eq!(k.in_primal(&h, 1e-9), kr.in_primal(&hr, 1e-9));
            }
        }
    }

    #[test]
    fn duality_holds_on_samples(patch in any_patch(), seed in 0u64..1000, t in (vec2(), coord())) {
        let cone = PatchCone::new(&patch);
        let b = HomVec3::new(t.0, t.1);
        if !cone.in_dual(&b, 1e-9) {
            return Ok(());
        }
        for a in cone.sample_primal(seed, 32) {
            prop_assert!(a.dot(&b) >= -1e-9 * a.norm() * b.norm() * patch.magnitude());
        }
    }

    #[test]
    fn singleton_patch_reduces_to_scalar_signorini(
        f in prop_oneof![Just(0.0), -5.0f64..5.0],
        v in prop_oneof![Just(0.0), -5.0f64..5.0],
        omega in vec2(),
    ) {
        let p = Patch::point(Vec2::ZERO).unwrap();
        let verdict = check(&p, &Wrench::normal(Vec2::ZERO, f), &Twist::normal(omega, v), 1e-9);
        let band = 1e-6;
        if f.abs() > band && v.abs() > band || f == 0.0 || v == 0.0 {
            prop_assert_eq!(verdict.satisfied, f >= 0.0 && v >= 0.0 && f * v <= 1e-9);
        }
    }

    #[test]
    fn frame_change_preserves_verdict(seed in 0u64..500, angle in 0.0f64..6.3, shift in vec2()) {
        let patch = random_convex_polygon(seed);
        let inst = signorini_core::oracle::random_complementary_instance(&patch, seed ^ 0x5eed).unwrap();
        let before = check(&patch, &inst.wrench, &inst.twist, 1e-9);

        // New frame: x' = R x + s. Points move rigidly; the wrench moves with
        // Varignon, the twist with the affine change of the normal field.
        let moved = match patch.shape() {
            Shape::Polygon(v) => Patch::polygon(v.iter().map(|p| p.rotated(angle) + shift).collect()).unwrap(),
            _ => unreachable!(),
        };
        let m_shifted = varignon_shift(&inst.wrench, -shift.rotated(-angle));
        let w = Wrench::normal(m_shifted.rotated(angle), inst.wrench.f_n);
        let omega = inst.twist.omega_t.rotated(angle);
        // nu'(x') = nu(x) with x = R^T (x' - s)  =>  v' = v - <omega', perp(s)>
        let v_n = inst.twist.v_n - omega.dot(shift.perp());
        let t = Twist::new(omega, inst.twist.omega_n, inst.twist.v_t.rotated(angle), v_n);
        let after = check(&moved, &w, &t, 1e-9);
        prop_assert_eq!(before.satisfied, after.satisfied);
        prop_assert_eq!(before.regime, after.regime);
        for x in patch.hull_vertices() {
            let nu = normal_velocity(&inst.twist, *x);
            let nu_moved = normal_velocity(&t, x.rotated(angle) + shift);
            prop_assert!((nu - nu_moved).abs() < 1e-9);
        }
    }

    #[test]
    fn synthesis_round_trip(seed in 0u64..2000) {
        let patch = match seed % 3 {
            0 => random_convex_polygon(seed),
            1 => random_star_polygon(seed, 8),
            _ => random_ellipse(seed),
        };
        let inst = signorini_core::oracle::random_complementary_instance(&patch, seed).unwrap();
        let (w, t) = (inst.wrench, inst.twist);
        let d = synthesize_distribution(&patch, &w, &t, 1e-9).unwrap();
        let back = integrate_wrench(&d);
        let scale = 1f64.max(w.homogeneous().norm()).max(t.homogeneous().norm()).max(patch.diameter());
        prop_assert!((back.f_n - w.f_n).abs() <= 1e-9 * scale);
        prop_assert!((back.m_t - w.m_t).norm() <= 1e-9 * scale);
        for a in d.atoms() {
            let nu = normal_velocity(&t, a.point);
            prop_assert!(a.rho_n >= 0.0);
            prop_assert!(nu >= -1e-9 * scale);
            prop_assert!(a.rho_n * nu <= 1e-9 * scale);
        }
    }

    #[test]
    fn resting_forces_zero_field(seed in 0u64..2000) {
        let patch = random_star_polygon(seed, 7);
        let inst = signorini_core::oracle::random_complementary_instance(&patch, seed).unwrap();
        let v = check(&patch, &inst.wrench, &inst.twist, 1e-9);
        match v.regime.unwrap().kind {
            RegimeKind::Resting => {
                for x in patch.hull_vertices() {
                    prop_assert!(normal_velocity(&inst.twist, *x).abs() <= 1e-9 * v.scale);
                }
            }
            RegimeKind::Separating => prop_assert!(v.wrench_norm <= 1e-9 * v.scale),
            RegimeKind::Tipping => {
                let c = v.cop.unwrap();
                prop_assert!(v.zero_line.unwrap().signed_distance(c).abs() <= 1e-9 * patch.length_scale());
                prop_assert!(patch.hull_boundary_distance(c) <= 1e-9 * patch.length_scale());
            }
            RegimeKind::Inactive => {}
        }
    }
}

#[test]
fn extended_cop_limit_of_vanishing_force() {
    // Fixed tipping twist about the bottom edge of the square; loads with
    // shrinking f_n keep the CoP on that edge, the support set of the twist.
    let square = Patch::rectangle(Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0)).unwrap();
    let t = Twist::normal(Vec2::new(1.0, 0.0), 1.0);
    let (_, set) = square.support(t.omega_t.perp());
    let mut f = 1.0;
    while f > 1e-6 {
        let c = Vec2::new(0.3, -1.0);
        let w = Wrench::normal(c.perp() * f, f);
        let v = check(&square, &w, &t, 1e-9);
        assert!(v.satisfied);
        assert!(set.distance_to(v.cop.unwrap()) < 1e-12);
        f /= 10.0;
    }
    let v = check(&square, &Wrench::ZERO, &t, 1e-9);
    assert_eq!(v.extended_cop, signorini_core::ExtendedCop::Set(set));
}

#[test]
fn dual_membership_agrees_with_grid_on_random_polygons() {
    for seed in 0..10u64 {
        let patch = random_convex_polygon(seed);
        let samples = SampleSet::new(&patch, &SamplePlan::default());
        let o = signorini_core::oracle::dual_matches_field(&patch, &samples, seed, 200, 1e-9);
        assert!(o.passed(), "{o:?}");
    }
}
