//! Brute-force pointwise verification and randomized instance generation.
//!
//! The cone tests in [`crate::cones`] and [`crate::signorini`] decide the
//! contact condition from the wrench and twist alone. This module checks
//! the same statements the slow way: it looks at individual force atoms and
//! at the normal velocity field sampled over the patch, and it generates
//! instances whose pointwise status is known by construction.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so a seed pins every draw on every platform.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cones::PatchCone;
use crate::fields::{integrate_wrench, normal_velocity, Atom, ForceDistribution, Twist, Wrench};
use crate::geometry::{edges, Hull, Patch, Shape, SupportSet, Vec2};
use crate::signorini::{check_cone, synthesize_distribution, RegimeKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// Grid resolution below 2.
    InvalidPlan,
    /// No admissible draw within the rejection budget.
    RejectionBudgetExceeded,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::InvalidPlan => f.write_str("sample plan needs a grid resolution of at least 2"),
            OracleError::RejectionBudgetExceeded => f.write_str("rejection sampling budget exhausted"),
        }
    }
}

impl core::error::Error for OracleError {}

/// Where the normal velocity field is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplePlan {
    /// Points per axis of the bounding-box grid; only points in the patch
    /// are kept.
    pub grid_resolution: usize,
    /// Adds hull vertices and hull edge midpoints (axis endpoints for
    /// ellipses).
    pub include_hull_vertices: bool,
    /// Evenly spaced points along the outline, with a seeded phase.
    pub boundary_samples: usize,
    pub rng_seed: u64,
}

impl SamplePlan {
    pub fn new(
        grid_resolution: usize,
        include_hull_vertices: bool,
        boundary_samples: usize,
        rng_seed: u64,
    ) -> Result<Self, OracleError> {
        if grid_resolution < 2 {
            return Err(OracleError::InvalidPlan);
        }
        Ok(Self {
            grid_resolution,
            include_hull_vertices,
            boundary_samples,
            rng_seed,
        })
    }
}

impl Default for SamplePlan {
    fn default() -> Self {
        Self {
            grid_resolution: 100,
            include_hull_vertices: true,
            boundary_samples: 512,
            rng_seed: 0,
        }
    }
}

/// Materialized sample points of a plan, reusable across many checks.
#[derive(Clone, Debug)]
pub struct SampleSet {
    points: Vec<Vec2>,
    magnitude: f64,
}

impl SampleSet {
    pub fn new(patch: &Patch, plan: &SamplePlan) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(plan.rng_seed);
        let mut points = Vec::new();
        let (lo, hi) = patch.bounding_box();
        let n = plan.grid_resolution.max(2);
        for i in 0..n {
            for j in 0..n {
                let fx = i as f64 / (n - 1) as f64;
                let fy = j as f64 / (n - 1) as f64;
                let p = Vec2::new(lo.x + (hi.x - lo.x) * fx, lo.y + (hi.y - lo.y) * fy);
                if patch.covers(p, 0.0) {
                    points.push(p);
                }
            }
        }
        if plan.include_hull_vertices {
            match patch.hull() {
                Hull::Polygon(h) => {
                    points.extend_from_slice(h);
                    if h.len() > 1 {
                        points.extend(edges(h).map(|(a, b)| a.lerp(b, 0.5)));
                    }
                }
                Hull::Ellipse(e) => {
                    points.extend((0..4).map(|k| e.boundary_point(k as f64 * PI / 2.0)));
                }
            }
        }
        if plan.boundary_samples > 0 {
            let phase = rng.gen_range(0.0..1.0);
            points.extend(boundary_points(patch, plan.boundary_samples, phase));
        }
        Self {
            points,
            magnitude: patch.magnitude(),
        }
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest sampled normal velocity and where it occurs.
    pub fn min_normal_velocity(&self, t: &Twist) -> (f64, Vec2) {
        let mut best = (f64::INFINITY, Vec2::ZERO);
        for &p in &self.points {
            let nu = normal_velocity(t, p);
            if nu < best.0 {
                best = (nu, p);
            }
        }
        best
    }

    /// Tolerance scale for normal velocities: `max(1, |[omega_t, v_n]|)`
    /// times the patch magnitude.
    pub fn velocity_scale(&self, t: &Twist) -> f64 {
        1f64.max(t.homogeneous().norm()) * self.magnitude
    }
}

/// `n` points spread along the outline of the original region.
pub fn boundary_points(patch: &Patch, n: usize, phase: f64) -> Vec<Vec2> {
    match patch.shape() {
        Shape::Ellipse(e) => (0..n)
            .map(|k| e.boundary_point(TAU * (k as f64 + phase) / n as f64))
            .collect(),
        Shape::Polygon(v) => {
            if v.len() == 1 {
                return vec![v[0]; n.min(1)];
            }
            let lengths: Vec<f64> = edges(v).map(|(a, b)| a.distance(b)).collect();
            let perimeter: f64 = lengths.iter().sum();
            let mut out = Vec::with_capacity(n);
            let mut edge = 0;
            let mut start = 0.0;
            for k in 0..n {
                let s = perimeter * (k as f64 + phase) / n as f64;
                while edge + 1 < lengths.len() && s > start + lengths[edge] {
                    start += lengths[edge];
                    edge += 1;
                }
                let a = v[edge];
                let b = v[(edge + 1) % v.len()];
                let t = if lengths[edge] > 0.0 {
                    ((s - start) / lengths[edge]).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                out.push(a.lerp(b, t));
            }
            out
        }
    }
}

/// About `n` points on a closed polyline, spread over each edge in
/// proportion to its length and starting at the edge's first vertex, so
/// every corner is sampled.
fn corner_anchored_points(v: &[Vec2], n: usize) -> Vec<Vec2> {
    let perimeter: f64 = edges(v).map(|(a, b)| a.distance(b)).sum();
    let mut out = Vec::with_capacity(n + v.len());
    for (a, b) in edges(v) {
        let m = (libm::round(n as f64 * a.distance(b) / perimeter) as usize).max(1);
        out.extend((0..m).map(|j| a.lerp(b, j as f64 / m as f64)));
    }
    out
}

/// Outcome of one pointwise condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Condition {
    /// Amount by which the worst point is on the wrong side of zero (0 when
    /// nothing is violated).
    pub violation: f64,
    /// Worst point, if any point was examined.
    pub location: Option<Vec2>,
    pub passed: bool,
}

/// Result of [`pointwise_check`]: repulsivity at the atoms, nonpenetration at
/// every sample, complementarity at the atoms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointwiseReport {
    pub repulsivity: Condition,
    pub nonpenetration: Condition,
    pub complementarity: Condition,
}

impl PointwiseReport {
    pub fn passed(&self) -> bool {
        self.repulsivity.passed && self.nonpenetration.passed && self.complementarity.passed
    }
}

/// Checks `0 <= rho_n(x) ⊥ nu_n(x) >= 0` on the atoms of `dist` and the
/// samples of `plan`.
pub fn pointwise_check(
    patch: &Patch,
    dist: &ForceDistribution,
    t: &Twist,
    plan: &SamplePlan,
    tol: f64,
) -> PointwiseReport {
    pointwise_check_with(&SampleSet::new(patch, plan), dist, t, tol)
}

/// [`pointwise_check`] over precomputed samples. Atoms are always added to
/// the nonpenetration samples.
pub fn pointwise_check_with(samples: &SampleSet, dist: &ForceDistribution, t: &Twist, tol: f64) -> PointwiseReport {
    let scale = samples.velocity_scale(t);

    let mut worst_rho = (f64::INFINITY, None);
    let mut worst_product = (f64::NEG_INFINITY, None);
    let mut total = 0.0;
    for a in dist.atoms() {
        if a.rho_n < worst_rho.0 {
            worst_rho = (a.rho_n, Some(a.point));
        }
        let product = a.rho_n * normal_velocity(t, a.point);
        if product > worst_product.0 {
            worst_product = (product, Some(a.point));
        }
        total += a.rho_n.abs();
    }
    let repulsivity = Condition {
        violation: (-worst_rho.0).max(0.0),
        location: worst_rho.1,
        passed: worst_rho.0 >= -tol,
    };
    let complementarity = Condition {
        violation: worst_product.0.max(0.0),
        location: worst_product.1,
        passed: worst_product.0 <= tol * scale * 1f64.max(total),
    };

    let (mut min_nu, mut at) = samples.min_normal_velocity(t);
    for a in dist.atoms() {
        let nu = normal_velocity(t, a.point);
        if nu < min_nu {
            min_nu = nu;
            at = a.point;
        }
    }
    let examined = !samples.is_empty() || !dist.is_empty();
    let nonpenetration = Condition {
        violation: (-min_nu).max(0.0),
        location: examined.then_some(at),
        passed: min_nu >= -tol * scale,
    };
    PointwiseReport {
        repulsivity,
        nonpenetration,
        complementarity,
    }
}

/// Maximizer of `<x, d>` over `n` outline samples of the hull. For ellipses
/// the best sample is refined by a parabola through its neighbours in the
/// angle parameter.
pub fn brute_force_argmax(patch: &Patch, d: Vec2, n: usize) -> Vec2 {
    match patch.hull() {
        Hull::Ellipse(e) => {
            let angle = |k: f64| TAU * k / n as f64;
            let value = |t: f64| e.boundary_point(t).dot(d);
            let best = (0..n)
                .max_by(|&i, &j| value(angle(i as f64)).total_cmp(&value(angle(j as f64))))
                .unwrap_or(0) as f64;
            let (f0, f1, f2) = (value(angle(best - 1.0)), value(angle(best)), value(angle(best + 1.0)));
            let curvature = f0 - 2.0 * f1 + f2;
            let shift = if curvature < 0.0 {
                (0.5 * (f0 - f2) / curvature).clamp(-1.0, 1.0)
            } else {
                0.0
            };
            e.boundary_point(angle(best + shift))
        }
        Hull::Polygon(h) => {
            let mut best = h[0];
            let mut best_value = h[0].dot(d);
            if h.len() > 1 {
                for p in corner_anchored_points(h, n) {
                    let v = p.dot(d);
                    if v > best_value {
                        best = p;
                        best_value = v;
                    }
                }
            }
            best
        }
    }
}

/// Uniform point of the patch region: rejection from the bounding box for
/// regions with area, uniform on the outline for segments.
pub fn random_point_in_patch<R: Rng>(patch: &Patch, rng: &mut R) -> Result<Vec2, OracleError> {
    match patch.shape() {
        Shape::Ellipse(e) => {
            let r = libm::sqrt(rng.gen_range(0.0..1.0));
            let t = rng.gen_range(0.0..TAU);
            let (s, c) = libm::sincos(t);
            Ok(e.to_world(Vec2::new(e.semi_axes.0 * r * c, e.semi_axes.1 * r * s)))
        }
        Shape::Polygon(v) => {
            let hull = patch.hull_vertices();
            match hull.len() {
                1 => Ok(hull[0]),
                2 => {
                    let (a, b) = edges(v).nth(rng.gen_range(0..v.len())).unwrap_or((hull[0], hull[1]));
                    Ok(a.lerp(b, rng.gen_range(0.0..=1.0)))
                }
                _ => {
                    let (lo, hi) = patch.bounding_box();
                    for _ in 0..REJECTION_BUDGET {
                        let p = Vec2::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
                        if patch.covers(p, 0.0) {
                            return Ok(p);
                        }
                    }
                    Err(OracleError::RejectionBudgetExceeded)
                }
            }
        }
    }
}

const REJECTION_BUDGET: usize = 10_000;

/// 1 to 8 atoms at random points of the patch with nonnegative weights, and
/// their resultant.
pub fn random_repulsive_instance(patch: &Patch, seed: u64) -> Result<(ForceDistribution, Wrench), OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = match rng.gen_range(0..16) {
        0 => {
            let p = random_point_in_patch(patch, &mut rng)?;
            vec![Atom::normal(p, 0.0)]
        }
        1 => {
            let p = random_hull_vertex(patch, &mut rng);
            vec![Atom::normal(p, rng.gen_range(0.1..10.0))]
        }
        _ => {
            let k = rng.gen_range(1..=8);
            let mut atoms = Vec::with_capacity(k);
            for _ in 0..k {
                let p = random_point_in_patch(patch, &mut rng)?;
                atoms.push(Atom::normal(p, rng.gen_range(0.0..10.0)));
            }
            atoms
        }
    };
    let dist = ForceDistribution::new_unchecked(atoms);
    let w = integrate_wrench(&dist);
    Ok((dist, w))
}

fn random_hull_vertex<R: Rng>(patch: &Patch, rng: &mut R) -> Vec2 {
    match patch.hull() {
        Hull::Polygon(h) => h[rng.gen_range(0..h.len())],
        Hull::Ellipse(e) => e.boundary_point(rng.gen_range(0.0..TAU)),
    }
}

/// Which construction produced a complementary instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Zero normal twist, repulsive atoms anywhere.
    Resting,
    /// Normal velocity positive everywhere, no atoms.
    Separating,
    /// Zero-line supporting the hull, atoms on the zero-line.
    Tipping,
}

impl Family {
    pub fn expected_regime(self) -> RegimeKind {
        match self {
            Family::Resting => RegimeKind::Resting,
            Family::Separating => RegimeKind::Separating,
            Family::Tipping => RegimeKind::Tipping,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub family: Family,
    pub distribution: ForceDistribution,
    pub twist: Twist,
    pub wrench: Wrench,
}

/// Pointwise complementary instance from a family chosen by the seed.
pub fn random_complementary_instance(patch: &Patch, seed: u64) -> Result<Instance, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = match rng.gen_range(0..3) {
        0 => Family::Resting,
        1 => Family::Separating,
        _ => Family::Tipping,
    };
    random_instance_in_family(patch, family, rng.gen())
}

pub fn random_instance_in_family(patch: &Patch, family: Family, seed: u64) -> Result<Instance, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let in_plane = |rng: &mut ChaCha8Rng| -> (f64, Vec2) {
        if rng.gen_bool(0.5) {
            (0.0, Vec2::ZERO)
        } else {
            (
                rng.gen_range(-2.0..2.0),
                Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            )
        }
    };
    let (omega_n, v_t) = in_plane(&mut rng);
    let (dist, omega_t, v_n) = match family {
        Family::Resting => {
            let k = rng.gen_range(1..=8);
            let mut atoms = Vec::with_capacity(k);
            for _ in 0..k {
                let p = random_point_in_patch(patch, &mut rng)?;
                atoms.push(Atom::normal(p, rng.gen_range(0.1..10.0)));
            }
            (ForceDistribution::new_unchecked(atoms), Vec2::ZERO, 0.0)
        }
        Family::Separating => {
            let omega = if rng.gen_range(0..8) == 0 {
                Vec2::ZERO
            } else {
                unit(rng.gen_range(0.0..TAU)) * rng.gen_range(0.05..5.0)
            };
            let top = sampled_support(patch, omega.perp());
            let margin = rng.gen_range(0.05..2.0) * 1f64.max(omega.norm() * patch.diameter());
            (ForceDistribution::empty(), omega, top + margin)
        }
        Family::Tipping => {
            let (d, atoms) = tipping_atoms(patch, &mut rng)?;
            let s = rng.gen_range(0.2..5.0);
            // perp(omega) = s d
            let omega = -d.perp() * s;
            let anchor = atoms[0].point;
            (ForceDistribution::new_unchecked(atoms), omega, s * anchor.dot(d))
        }
    };
    let twist = Twist::new(omega_t, omega_n, v_t, v_n);
    let wrench = integrate_wrench(&dist);
    Ok(Instance {
        family,
        distribution: dist,
        twist,
        wrench,
    })
}

fn unit(angle: f64) -> Vec2 {
    let (s, c) = libm::sincos(angle);
    Vec2::new(c, s)
}

/// Max of `<x, d>` over hull vertices (exact for polygons) or 4096 outline
/// samples (ellipses, low by at most `1.2e-6 |d| a`).
fn sampled_support(patch: &Patch, d: Vec2) -> f64 {
    let pts: Vec<Vec2> = match patch.hull() {
        Hull::Polygon(h) => h.clone(),
        Hull::Ellipse(_) => boundary_points(patch, 4096, 0.0),
    };
    pts.iter().map(|p| p.dot(d)).fold(f64::NEG_INFINITY, f64::max)
}

/// Unit outward direction `d` of a supporting line and 1-3 atoms of the
/// patch lying on it.
fn tipping_atoms<R: Rng>(patch: &Patch, rng: &mut R) -> Result<(Vec2, Vec<Atom>), OracleError> {
    let weight = |rng: &mut R| rng.gen_range(0.1..10.0);
    match (patch.shape(), patch.hull()) {
        (Shape::Ellipse(_), Hull::Ellipse(e)) => {
            let d = unit(rng.gen_range(0.0..TAU));
            // Tangency point: the outward normal there is parallel to d.
            let local = e.to_local(e.center + d);
            let (a, b) = e.semi_axes;
            let s = libm::hypot(a * local.x, b * local.y);
            let x = e.to_world(Vec2::new(a * a * local.x / s, b * b * local.y / s));
            Ok((d, vec![Atom::normal(x, weight(rng))]))
        }
        (Shape::Polygon(outline), Hull::Polygon(h)) => match h.len() {
            1 => Ok((unit(rng.gen_range(0.0..TAU)), vec![Atom::normal(h[0], weight(rng))])),
            2 => {
                let along = h[1] - h[0];
                if rng.gen_bool(0.5) {
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    let d = along.perp().normalized().ok_or(OracleError::RejectionBudgetExceeded)? * sign;
                    let k = rng.gen_range(1..=3);
                    let atoms = (0..k)
                        .map(|_| Atom::normal(h[0].lerp(h[1], rng.gen_range(0.0..=1.0)), weight(rng)))
                        .collect();
                    Ok((d, atoms))
                } else {
                    // Tilted line touching only the endpoint h[1].
                    let tilt = rng.gen_range(-1.2..1.2);
                    let d = along
                        .normalized()
                        .ok_or(OracleError::RejectionBudgetExceeded)?
                        .rotated(tilt);
                    Ok((d, vec![Atom::normal(h[1], weight(rng))]))
                }
            }
            n => {
                let i = rng.gen_range(0..n);
                if rng.gen_bool(0.5) {
                    let (a, b) = (h[i], h[(i + 1) % n]);
                    let d = (b - a)
                        .perp()
                        .normalized()
                        .ok_or(OracleError::RejectionBudgetExceeded)?;
                    let pieces = patch_on_line(outline, d, a.dot(d), patch.length_scale());
                    if pieces.is_empty() {
                        return Err(OracleError::RejectionBudgetExceeded);
                    }
                    let k = rng.gen_range(1..=3);
                    let atoms = (0..k)
                        .map(|_| {
                            let (p, q) = pieces[rng.gen_range(0..pieces.len())];
                            Atom::normal(p.lerp(q, rng.gen_range(0.0..=1.0)), weight(rng))
                        })
                        .collect();
                    Ok((d, atoms))
                } else {
                    let (prev, v, next) = (h[(i + n - 1) % n], h[i], h[(i + 1) % n]);
                    let n1 = (v - prev)
                        .perp()
                        .normalized()
                        .ok_or(OracleError::RejectionBudgetExceeded)?;
                    let n2 = (next - v)
                        .perp()
                        .normalized()
                        .ok_or(OracleError::RejectionBudgetExceeded)?;
                    let lambda = rng.gen_range(0.05..0.95);
                    let d = (n1 * lambda + n2 * (1.0 - lambda))
                        .normalized()
                        .ok_or(OracleError::RejectionBudgetExceeded)?;
                    Ok((d, vec![Atom::normal(v, weight(rng))]))
                }
            }
        },
        _ => unreachable!("ellipse shapes have ellipse hulls"),
    }
}

/// Pieces of the outline on the line `<x, d> = offset`: collinear edges as
/// segments, isolated vertices as zero-length segments.
fn patch_on_line(outline: &[Vec2], d: Vec2, offset: f64, length: f64) -> Vec<(Vec2, Vec2)> {
    let eps = 1e-12 * length;
    let on = |p: Vec2| (p.dot(d) - offset).abs() <= eps;
    let mut pieces = Vec::new();
    for (a, b) in edges(outline) {
        if on(a) && on(b) {
            pieces.push((a, b));
        } else if on(a) {
            pieces.push((a, a));
        }
    }
    pieces
}

/// Aggregate result of one randomized property.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest normalized error seen (property-specific; 0 is perfect).
    pub worst: f64,
}

impl PropertyOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            trials: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, ok: bool, error: f64) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
        }
        if error.is_nan() || error > self.worst {
            self.worst = error;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Combines outcomes of the same property over several patches.
    pub fn merge(&mut self, other: &PropertyOutcome) {
        self.trials += other.trials;
        self.failures += other.failures;
        self.worst = self.worst.max(other.worst);
    }
}

/// Sample plan with at least 10^4 interior points for fat shapes plus a
/// dense outline; used by the equivalence suites.
pub fn dense_plan(seed: u64) -> SamplePlan {
    SamplePlan {
        grid_resolution: 128,
        include_hull_vertices: true,
        boundary_samples: 8192,
        rng_seed: seed,
    }
}

/// Resultants of random repulsive distributions lie in `K_P`.
pub fn resultants_in_primal(patch: &Patch, seed: u64, count: usize, tol: f64) -> PropertyOutcome {
    let cone = PatchCone::new(patch);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = PropertyOutcome::new("resultants_in_primal");
    for _ in 0..count {
        match random_repulsive_instance(patch, rng.gen()) {
            Ok((_, w)) => {
                let h = w.homogeneous();
                let ok = cone.in_primal(&h, tol);
                let excess = if h.normal > 0.0 {
                    let c = -h.tangential.perp() / h.normal;
                    if patch.contains(c, 0.0) {
                        0.0
                    } else {
                        patch.hull_boundary_distance(c) / patch.length_scale()
                    }
                } else {
                    h.tangential.norm()
                };
                out.record(ok, excess);
            }
            Err(_) => out.record(false, f64::INFINITY),
        }
    }
    out
}

/// Every sampled element of `K_P` is the resultant of a synthesized
/// repulsive distribution that reintegrates to it and is pointwise
/// admissible against the zero twist.
pub fn primal_is_realizable(patch: &Patch, samples: &SampleSet, seed: u64, count: usize, tol: f64) -> PropertyOutcome {
    let cone = PatchCone::new(patch);
    let mut out = PropertyOutcome::new("primal_is_realizable");
    for h in cone.sample_primal(seed, count) {
        let w = Wrench::normal(h.tangential, h.normal);
        match synthesize_distribution(patch, &w, &Twist::ZERO, tol) {
            Ok(dist) => {
                let back = integrate_wrench(&dist).homogeneous();
                let err = (back + h * -1.0).norm();
                let rel = if h.norm() > 0.0 { err / h.norm() } else { err };
                let report = pointwise_check_with(samples, &dist, &Twist::ZERO, tol);
                let inside = dist.validate_in(patch, tol).is_ok();
                out.record(dist.is_repulsive() && rel <= 1e-9 && report.passed() && inside, rel);
            }
            Err(_) => out.record(false, f64::INFINITY),
        }
    }
    out
}

/// Random twists whose membership in the dual cone is compared with the
/// sampled minimum of the normal velocity field.
pub fn random_dual_probe<R: Rng>(patch: &Patch, rng: &mut R) -> Twist {
    let omega = unit(rng.gen_range(0.0..TAU)) * rng.gen_range(0.0..5.0);
    let reach = patch.radius() * omega.norm() + 1.0;
    let v_n = if matches!(patch.hull(), Hull::Polygon(_)) && rng.gen_range(0..4) == 0 {
        // Exactly tangent: supporting line through a hull vertex.
        sampled_support(patch, omega.perp())
    } else {
        rng.gen_range(-reach..reach)
    };
    Twist::normal(omega, v_n)
}

/// Dual membership agrees with the sampled field minimum.
pub fn dual_matches_field(patch: &Patch, samples: &SampleSet, seed: u64, count: usize, tol: f64) -> PropertyOutcome {
    let cone = PatchCone::new(patch);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = PropertyOutcome::new("dual_matches_field");
    for _ in 0..count {
        let t = random_dual_probe(patch, &mut rng);
        let (min_sampled, _) = samples.min_normal_velocity(&t);
        let brute = min_sampled >= -tol * samples.velocity_scale(&t);
        let fast = cone.in_dual(&t.homogeneous(), tol);
        let gap = (cone.min_normal_velocity(&t.homogeneous()) - min_sampled).abs() / samples.velocity_scale(&t);
        out.record(brute == fast, gap);
    }
    out
}

/// Geometry of tipping instances: distances of the CoP to the zero-line and
/// to the hull boundary, relative to the patch length scale.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TippingGeometry {
    pub instances: usize,
    pub max_line_distance: f64,
    pub max_boundary_distance: f64,
}

/// Pointwise complementary instances satisfy the planar condition with the
/// family's regime.
pub fn pointwise_implies_conic(patch: &Patch, seed: u64, count: usize, tol: f64) -> (PropertyOutcome, TippingGeometry) {
    let cone = PatchCone::new(patch);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = PropertyOutcome::new("pointwise_implies_conic");
    let mut geometry = TippingGeometry::default();
    let length = patch.length_scale();
    for _ in 0..count {
        let inst = match random_complementary_instance(patch, rng.gen()) {
            Ok(i) => i,
            Err(_) => {
                out.record(false, f64::INFINITY);
                continue;
            }
        };
        let v = check_cone(&cone, &inst.wrench, &inst.twist, tol);
        let rel = v.residual.abs() / v.scale;
        let regime_ok = v.regime.map(|r| r.kind) == Some(inst.family.expected_regime());
        out.record(v.satisfied && rel <= 1e-9 && regime_ok, rel);
        if inst.family == Family::Tipping {
            if let (Some(c), Some(line)) = (v.cop, v.zero_line) {
                geometry.instances += 1;
                geometry.max_line_distance = geometry.max_line_distance.max(line.signed_distance(c).abs() / length);
                geometry.max_boundary_distance = geometry
                    .max_boundary_distance
                    .max(patch.hull_boundary_distance(c) / length);
            } else {
                geometry.instances += 1;
                geometry.max_line_distance = f64::INFINITY;
            }
        }
    }
    (out, geometry)
}

/// Complementary pair on the cone boundaries (or a resting/separating pair)
/// with zero residual by construction.
pub fn boundary_pair<R: Rng>(patch: &Patch, cone: &PatchCone, rng: &mut R) -> (Wrench, Twist) {
    match rng.gen_range(0..4) {
        0 => {
            let h = cone.sample_primal(rng.gen(), 1)[0];
            (Wrench::normal(h.tangential, h.normal), Twist::ZERO)
        }
        1 => {
            let omega = unit(rng.gen_range(0.0..TAU)) * rng.gen_range(0.05..5.0);
            let (value, _) = patch.support(omega.perp());
            let slack = rng.gen_range(0.0..1.0);
            (Wrench::ZERO, Twist::normal(omega, value + slack))
        }
        _ => {
            let omega = unit(rng.gen_range(0.0..TAU)) * rng.gen_range(0.05..5.0);
            let (value, set) = patch.support(omega.perp());
            let c = match set {
                SupportSet::Vertex(v) => v,
                SupportSet::Segment(a, b) => a.lerp(b, rng.gen_range(0.0..=1.0)),
                SupportSet::FullHull => Vec2::ZERO,
            };
            let f = rng.gen_range(0.1..10.0);
            (Wrench::normal(c.perp() * f, f), Twist::normal(omega, value))
        }
    }
}

/// Every zero-residual boundary pair admits a synthesized distribution that
/// passes the pointwise check.
pub fn conic_implies_pointwise(
    patch: &Patch,
    samples: &SampleSet,
    seed: u64,
    count: usize,
    tol: f64,
) -> PropertyOutcome {
    let cone = PatchCone::new(patch);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = PropertyOutcome::new("conic_implies_pointwise");
    for _ in 0..count {
        let (w, t) = boundary_pair(patch, &cone, &mut rng);
        match synthesize_distribution(patch, &w, &t, tol) {
            Ok(dist) => {
                let report = pointwise_check_with(samples, &dist, &t, tol);
                let back = integrate_wrench(&dist).homogeneous();
                let scale = 1f64
                    .max(w.homogeneous().norm())
                    .max(t.homogeneous().norm())
                    .max(patch.diameter());
                let err = (back + w.homogeneous() * -1.0).norm() / scale;
                let inside = dist.validate_in(patch, tol).is_ok();
                out.record(report.passed() && err <= 1e-9 && inside, err);
            }
            Err(_) => out.record(false, f64::INFINITY),
        }
    }
    out
}

/// Raising `v_n` by a tenth of the patch size on a loaded instance must be
/// caught by the cone check or by the pointwise check.
pub fn negative_control(patch: &Patch, samples: &SampleSet, seed: u64, count: usize, tol: f64) -> PropertyOutcome {
    let cone = PatchCone::new(patch);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = PropertyOutcome::new("negative_control");
    let family = [Family::Resting, Family::Tipping];
    for k in 0..count {
        let inst = match random_instance_in_family(patch, family[k % 2], rng.gen()) {
            Ok(i) if i.wrench.f_n > 0.0 => i,
            Ok(_) => continue,
            Err(_) => {
                out.record(false, f64::INFINITY);
                continue;
            }
        };
        let mut t = inst.twist;
        t.v_n += 0.1 * patch.length_scale();
        let caught = !check_cone(&cone, &inst.wrench, &t, tol).satisfied
            || !pointwise_check_with(samples, &inst.distribution, &t, tol).passed();
        out.record(caught, 0.0);
    }
    out
}

/// All randomized properties on one patch.
pub fn run_suite(patch: &Patch, seed: u64, count: usize, tol: f64) -> Vec<PropertyOutcome> {
    let samples = SampleSet::new(patch, &dense_plan(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        resultants_in_primal(patch, rng.gen(), count, tol),
        primal_is_realizable(patch, &samples, rng.gen(), count, tol),
        dual_matches_field(patch, &samples, rng.gen(), count, tol),
        pointwise_implies_conic(patch, rng.gen(), count, tol).0,
        conic_implies_pointwise(patch, &samples, rng.gen(), count, tol),
        negative_control(patch, &samples, rng.gen(), count, tol),
    ]
}

/// Star-shaped polygon: `n` sorted random angles with random radii around a
/// random center. Generally nonconvex.
pub fn random_star_polygon(seed: u64, n: usize) -> Patch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n.max(3);
    let size = rng.gen_range(0.2..3.0);
    let center = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let vertices: Vec<Vec2> = angles
            .iter()
            .map(|&a| center + unit(a) * (size * rng.gen_range(0.3..1.0)))
            .collect();
        if let Ok(p) = Patch::polygon(vertices) {
            if p.hull_vertices().len() >= 3 {
                return p;
            }
        }
    }
}

/// Convex polygon: hull of a random star with 3 to 12 points.
pub fn random_convex_polygon(seed: u64) -> Patch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=12);
    let star = random_star_polygon(rng.gen(), n);
    Patch::polygon(star.hull_vertices().to_vec()).expect("hull of a valid polygon is valid")
}

pub fn random_ellipse(seed: u64) -> Patch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let axes = (rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0));
    Patch::ellipse(center, axes, rng.gen_range(0.0..PI)).expect("positive semi-axes")
}
