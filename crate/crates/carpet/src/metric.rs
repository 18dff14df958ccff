//! Geodesic distances and ray checks on a built carpet.
//!
//! All coordinates here are absolute. Distances are exact BFS values, so the
//! defining quantities of the ray conditions are integers and any violation
//! is at least 1; the default tolerance 0.5 turns the asymptotic definitions
//! into exact finite checks.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::build::{Coord, FiniteCarpet};

/// Default tolerance for ray checks on the integer metric.
pub const DEFAULT_EPSILON: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("{0} is not a vertex of the built carpet")]
    NotAVertex(Coord),
    #[error("ray sample must start at t=0 with strictly increasing t")]
    BadRaySample,
    #[error("ray sample vertex {0} missing from the built carpet")]
    RayVertexMissing(Coord),
}

/// Exact distances from one source, stored densely over the bounding square.
#[derive(Debug, Clone)]
pub struct DistanceField {
    source: Coord,
    side: i64,
    dist: Vec<i32>,
}

impl DistanceField {
    pub fn source(&self) -> Coord {
        self.source
    }

    pub fn get(&self, c: Coord) -> Option<u32> {
        if c.x < 0 || c.y < 0 || c.x > self.side || c.y > self.side {
            return None;
        }
        let idx = (c.y * (self.side + 1) + c.x) as usize;
        match self.dist[idx] {
            -1 => None,
            d => Some(d as u32),
        }
    }
}

/// Breadth-first distances from `source`.
pub fn bfs(g: &FiniteCarpet, source: Coord) -> Result<DistanceField, MetricError> {
    if !g.contains(source) {
        return Err(MetricError::NotAVertex(source));
    }
    let side = g.side();
    let stride = (side + 1) as usize;
    let mut dist = vec![-1i32; stride * stride];
    let idx = |c: Coord| (c.y as usize) * stride + c.x as usize;
    let mut queue = VecDeque::new();
    dist[idx(source)] = 0;
    queue.push_back(source);
    while let Some(p) = queue.pop_front() {
        let d = dist[idx(p)];
        for q in g.neighbors(p) {
            let qi = idx(q);
            if dist[qi] == -1 {
                dist[qi] = d + 1;
                queue.push_back(q);
            }
        }
    }
    Ok(DistanceField { source, side, dist })
}

/// Small LRU cache of distance fields, keyed by source, bound to one carpet.
/// Use one per worker; the fields themselves are shared, immutable `Arc`s.
pub struct DistCache {
    side: i64,
    budget: usize,
    entries: VecDeque<(Coord, Arc<DistanceField>)>,
}

impl DistCache {
    pub const DEFAULT_BUDGET: usize = 64;

    pub fn new(g: &FiniteCarpet) -> Self {
        Self::with_budget(g, Self::DEFAULT_BUDGET)
    }

    pub fn with_budget(g: &FiniteCarpet, budget: usize) -> Self {
        DistCache {
            side: g.side(),
            budget: budget.max(1),
            entries: VecDeque::new(),
        }
    }

    pub fn field(
        &mut self,
        g: &FiniteCarpet,
        source: Coord,
    ) -> Result<Arc<DistanceField>, MetricError> {
        assert_eq!(g.side(), self.side, "cache bound to a different carpet");
        if let Some(pos) = self.entries.iter().position(|(s, _)| *s == source) {
            let entry = self.entries.remove(pos).unwrap();
            self.entries.push_front(entry.clone());
            return Ok(entry.1);
        }
        let field = Arc::new(bfs(g, source)?);
        self.entries.push_front((source, field.clone()));
        while self.entries.len() > self.budget {
            self.entries.pop_back();
        }
        Ok(field)
    }
}

/// Exact geodesic distance between two vertices.
pub fn distance(
    g: &FiniteCarpet,
    cache: &mut DistCache,
    u: Coord,
    v: Coord,
) -> Result<u32, MetricError> {
    if !g.contains(v) {
        return Err(MetricError::NotAVertex(v));
    }
    let field = cache.field(g, u)?;
    field.get(v).ok_or(MetricError::NotAVertex(v))
}

/// The horofunction integrand `d(y, base) - d(y, v)`.
pub fn phi(
    g: &FiniteCarpet,
    cache: &mut DistCache,
    base: Coord,
    v: Coord,
    y: Coord,
) -> Result<i64, MetricError> {
    if !g.contains(y) {
        return Err(MetricError::NotAVertex(y));
    }
    let fb = cache.field(g, base)?;
    let fv = cache.field(g, v)?;
    let db = fb.get(y).ok_or(MetricError::NotAVertex(y))? as i64;
    let dv = fv.get(y).ok_or(MetricError::NotAVertex(y))? as i64;
    Ok(db - dv)
}

/// Length of the shortest route from `u` to `v` forced through `via`.
pub fn constrained_distance(
    g: &FiniteCarpet,
    cache: &mut DistCache,
    u: Coord,
    v: Coord,
    via: Coord,
) -> Result<u32, MetricError> {
    Ok(distance(g, cache, u, via)? + distance(g, cache, via, v)?)
}

/// Union of all geodesics between `u` and `v`:
/// `{x : d(u,x) + d(x,v) = d(u,v)}`. Includes both endpoints.
pub fn geodesic_support(
    g: &FiniteCarpet,
    cache: &mut DistCache,
    u: Coord,
    v: Coord,
) -> Result<Vec<Coord>, MetricError> {
    let fu = cache.field(g, u)?;
    let fv = cache.field(g, v)?;
    let total = fu.get(v).ok_or(MetricError::NotAVertex(v))?;
    let mut out = Vec::new();
    for &x in g.vertices() {
        if let (Some(a), Some(b)) = (fu.get(x), fv.get(x)) {
            if a + b == total {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Vertices within graph distance `r` of `center`, sorted by
/// `(distance, x, y)` in root-relative coordinates for determinism.
pub fn ball(
    g: &FiniteCarpet,
    cache: &mut DistCache,
    center: Coord,
    r: u32,
) -> Result<Vec<Coord>, MetricError> {
    let field = cache.field(g, center)?;
    let mut out: Vec<(u32, Coord)> = g
        .vertices()
        .iter()
        .filter_map(|&v| field.get(v).filter(|&d| d <= r).map(|d| (d, v)))
        .collect();
    out.sort_by_key(|&(d, v)| {
        let rel = g.to_relative(v);
        (d, rel.x, rel.y)
    });
    Ok(out.into_iter().map(|(_, v)| v).collect())
}

/// A finite sample of a parametrized ray: strictly increasing times starting
/// at 0 with one vertex each, in absolute coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RaySample {
    points: Vec<(u64, Coord)>,
}

impl RaySample {
    pub fn new(points: Vec<(u64, Coord)>) -> Result<Self, MetricError> {
        if points.is_empty() || points[0].0 != 0 {
            return Err(MetricError::BadRaySample);
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(MetricError::BadRaySample);
        }
        Ok(RaySample { points })
    }

    pub fn points(&self) -> &[(u64, Coord)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the first sample point treated as part of the tail: the
    /// leading third is dropped unless an explicit cutoff is given.
    pub fn tail_start(&self, cutoff: Option<usize>) -> usize {
        match cutoff {
            Some(n) => n.min(self.points.len()),
            None => self.points.len().div_ceil(3),
        }
    }
}

/// Result of a ray-definition check; the worst violation is an exact integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayCheck {
    pub pass: bool,
    pub worst_violation: i64,
    /// `(t, s)` or `(t, probe)` context of the worst violation, if any.
    pub worst_case: Option<String>,
}

fn verdict(worst: i64, worst_case: Option<String>, epsilon: f64) -> RayCheck {
    RayCheck {
        pass: (worst as f64) < epsilon,
        worst_violation: worst,
        worst_case,
    }
}

/// Checks the weak ray conditions on the sample tail: the distance from the
/// origin must track `t`, and for every probe `y` the increments
/// `d(γ(t),y) - d(γ(s),y)` must track `t - s`.
pub fn check_weakly_geodesic(
    g: &FiniteCarpet,
    cache: &mut DistCache,
    ray: &RaySample,
    probes: &[Coord],
    epsilon: f64,
    cutoff: Option<usize>,
) -> Result<RayCheck, MetricError> {
    for &(_, p) in ray.points() {
        if !g.contains(p) {
            return Err(MetricError::RayVertexMissing(p));
        }
    }
    let origin = ray.points()[0].1;
    let origin_field = cache.field(g, origin)?;
    let start = ray.tail_start(cutoff);
    let mut worst = 0i64;
    let mut worst_case = None;

    for &(t, p) in &ray.points()[start..] {
        let d = origin_field
            .get(p)
            .ok_or(MetricError::RayVertexMissing(p))? as i64;
        let viol = (d - t as i64).abs();
        if viol > worst {
            worst = viol;
            worst_case = Some(format!("|d(γ({t}),γ(0)) - {t}| = {viol}"));
        }
    }

    for &y in probes {
        let fy = cache.field(g, y)?;
        let tail = &ray.points()[start..];
        for (i, &(s, ps)) in tail.iter().enumerate() {
            let ds = fy.get(ps).ok_or(MetricError::RayVertexMissing(ps))? as i64;
            for &(t, pt) in &tail[i + 1..] {
                let dt = fy.get(pt).ok_or(MetricError::RayVertexMissing(pt))? as i64;
                let viol = (dt - ds - (t as i64 - s as i64)).abs();
                if viol > worst {
                    worst = viol;
                    worst_case = Some(format!(
                        "|d(γ({t}),y) - d(γ({s}),y) - ({t}-{s})| = {viol} at probe {y}",
                        y = g.to_relative(y)
                    ));
                }
            }
        }
    }
    Ok(verdict(worst, worst_case, epsilon))
}

/// Checks the chain condition `|d(γ(t),γ(s)) + d(γ(s),γ(0)) - t| < ε` on the
/// sample tail.
pub fn check_almost_geodesic(
    g: &FiniteCarpet,
    cache: &mut DistCache,
    ray: &RaySample,
    epsilon: f64,
    cutoff: Option<usize>,
) -> Result<RayCheck, MetricError> {
    for &(_, p) in ray.points() {
        if !g.contains(p) {
            return Err(MetricError::RayVertexMissing(p));
        }
    }
    let origin = ray.points()[0].1;
    let start = ray.tail_start(cutoff);
    let tail = &ray.points()[start..];
    let mut worst = 0i64;
    let mut worst_case = None;
    for (i, &(s, ps)) in tail.iter().enumerate() {
        let fs = cache.field(g, ps)?;
        let d_s0 = fs
            .get(origin)
            .ok_or(MetricError::RayVertexMissing(origin))? as i64;
        for &(t, pt) in tail[i..].iter() {
            let d_ts = fs.get(pt).ok_or(MetricError::RayVertexMissing(pt))? as i64;
            let viol = (d_ts + d_s0 - t as i64).abs();
            if viol > worst {
                worst = viol;
                worst_case = Some(format!(
                    "|d(γ({t}),γ({s})) + d(γ({s}),γ(0)) - {t}| = {viol}"
                ));
            }
        }
    }
    Ok(verdict(worst, worst_case, epsilon))
}

/// Whether distances from the root split additively along the sequence:
/// `d(root, p_m) = d(root, p_k) + d(p_k, p_m)` for all `k < m`. This is the
/// finite certificate that each point extends the previous geodesics.
pub fn check_geodesic_chain(
    g: &FiniteCarpet,
    cache: &mut DistCache,
    root: Coord,
    points: &[Coord],
) -> Result<bool, MetricError> {
    let root_field = cache.field(g, root)?;
    for (i, &p) in points.iter().enumerate() {
        let fp = cache.field(g, p)?;
        let dp = root_field.get(p).ok_or(MetricError::NotAVertex(p))? as i64;
        for &q in &points[i + 1..] {
            let dq = root_field.get(q).ok_or(MetricError::NotAVertex(q))? as i64;
            let dpq = fp.get(q).ok_or(MetricError::NotAVertex(q))? as i64;
            if dq != dp + dpq {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::{build_level, central_hole, side_for_level};
    use crate::word::WordSpec;

    fn w(s: &str) -> WordSpec {
        WordSpec::parse(s).unwrap()
    }

    #[test]
    fn four_cycle_distances() {
        let g = build_level(&w("a(0)*"), 1).unwrap();
        let mut cache = DistCache::new(&g);
        let a = Coord::new(0, 0);
        assert_eq!(distance(&g, &mut cache, a, Coord::new(1, 0)).unwrap(), 1);
        assert_eq!(distance(&g, &mut cache, a, Coord::new(1, 1)).unwrap(), 2);
        assert_eq!(distance(&g, &mut cache, a, Coord::new(0, 1)).unwrap(), 1);
        assert_eq!(distance(&g, &mut cache, a, a).unwrap(), 0);
    }

    #[test]
    fn rejects_non_vertices() {
        let g = build_level(&w("a(0)*"), 3).unwrap();
        let mut cache = DistCache::new(&g);
        let inside_hole = Coord::new(4, 4);
        assert!(!g.contains(inside_hole));
        assert!(bfs(&g, inside_hole).is_err());
        assert!(distance(&g, &mut cache, Coord::new(0, 0), inside_hole).is_err());
    }

    #[test]
    fn distance_to_far_hole_corner() {
        // top-right corner of the central hole at level 4, seen from the root
        let g = build_level(&w("b(7)*"), 4).unwrap();
        let mut cache = DistCache::new(&g);
        let c3 = g.to_absolute(Coord::new(17, 5));
        assert_eq!(distance(&g, &mut cache, g.root_abs(), c3).unwrap(), 22);
    }

    #[test]
    fn antipodal_point_distance() {
        for m in 2..=4u32 {
            let g = build_level(&w("b(7)*"), m + 1).unwrap();
            let mut cache = DistCache::new(&g);
            let z = g.to_absolute(Coord::new(2 * side_for_level(m) - 1, 1));
            assert_eq!(
                distance(&g, &mut cache, g.root_abs(), z).unwrap() as i64,
                3i64.pow(m) - 1
            );
        }
    }

    #[test]
    fn constrained_distance_basics() {
        let g = build_level(&w("b(7)*"), 4).unwrap();
        let mut cache = DistCache::new(&g);
        let root = g.root_abs();
        let z = g.to_absolute(Coord::new(17, 1));
        assert_eq!(
            constrained_distance(&g, &mut cache, root, z, root).unwrap(),
            distance(&g, &mut cache, root, z).unwrap()
        );
        let b = g.to_absolute(Coord::new(17, -4));
        let c = g.to_absolute(Coord::new(17, 5));
        let d = distance(&g, &mut cache, root, z).unwrap();
        assert_eq!(constrained_distance(&g, &mut cache, root, z, b).unwrap(), d);
        assert_eq!(constrained_distance(&g, &mut cache, root, z, c).unwrap(), d);
    }

    #[test]
    fn support_of_identical_endpoints() {
        let g = build_level(&w("a(0)*"), 2).unwrap();
        let mut cache = DistCache::new(&g);
        let u = Coord::new(1, 0);
        assert_eq!(geodesic_support(&g, &mut cache, u, u).unwrap(), vec![u]);
    }

    #[test]
    fn support_on_open_region_is_l1_box() {
        let g = build_level(&w("a(0)*"), 2).unwrap();
        let mut cache = DistCache::new(&g);
        // the full 3x3 grid graph: support of a straight box is the box
        let u = Coord::new(0, 0);
        let v = Coord::new(2, 1);
        let support = geodesic_support(&g, &mut cache, u, v).unwrap();
        let expected: Vec<Coord> = g
            .vertices()
            .iter()
            .copied()
            .filter(|c| c.x <= 2 && c.y <= 1)
            .collect();
        assert_eq!(support, expected);
    }

    #[test]
    fn disjoint_supports_around_the_hole() {
        let g = build_level(&w("b(7)*"), 4).unwrap();
        let mut cache = DistCache::new(&g);
        let z3 = g.to_absolute(Coord::new(17, 1));
        let v1 = g.to_absolute(Coord::new(0, 1));
        let v2 = g.to_absolute(Coord::new(0, -1));
        let s1 = geodesic_support(&g, &mut cache, v1, z3).unwrap();
        let s2 = geodesic_support(&g, &mut cache, v2, z3).unwrap();
        let common: Vec<Coord> = s1.iter().copied().filter(|c| s2.contains(c)).collect();
        // both unions of geodesics contain the target, and nothing else
        assert_eq!(common, vec![z3]);
    }

    #[test]
    fn straight_ray_checks() {
        let g = build_level(&w("a(0)*"), 3).unwrap();
        let mut cache = DistCache::new(&g);
        // bottom boundary line is hole-free
        let pts: Vec<(u64, Coord)> = (0..=9).map(|t| (t as u64, Coord::new(t, 0))).collect();
        let ray = RaySample::new(pts).unwrap();
        let probes = [Coord::new(0, 1), Coord::new(3, 0)];
        let weak =
            check_weakly_geodesic(&g, &mut cache, &ray, &probes, DEFAULT_EPSILON, None).unwrap();
        assert!(weak.pass, "{weak:?}");
        assert_eq!(weak.worst_violation, 0);
        let almost = check_almost_geodesic(&g, &mut cache, &ray, DEFAULT_EPSILON, None).unwrap();
        assert!(almost.pass);
        assert!(check_geodesic_chain(
            &g,
            &mut cache,
            Coord::new(0, 0),
            &(1..=9).map(|t| Coord::new(t, 0)).collect::<Vec<_>>()
        )
        .unwrap());
    }

    #[test]
    fn alternating_sample_fails() {
        let g = build_level(&w("a(0)*"), 2).unwrap();
        let mut cache = DistCache::new(&g);
        let a = Coord::new(0, 0);
        let b = Coord::new(1, 0);
        let ray = RaySample::new(vec![(0, a), (1, b), (2, a), (3, b), (4, a), (5, b)]).unwrap();
        let check =
            check_weakly_geodesic(&g, &mut cache, &ray, &[a], DEFAULT_EPSILON, None).unwrap();
        assert!(!check.pass);
        assert!(check.worst_violation >= 1);
    }

    #[test]
    fn chain_condition_implies_weak_condition() {
        // with probes drawn from the sample head, any sample that passes the
        // chain check on its tail also passes the weak check there at the
        // same tolerance; probes at the far end see approaching distances
        // and are excluded by the asymptotic reading
        let g = build_level(&w("b(7)*"), 5).unwrap();
        let mut cache = DistCache::new(&g);
        let hole = central_hole(5);
        let samples = [
            (0..=9)
                .map(|t| (t as u64, Coord::new(t, 0)))
                .collect::<Vec<_>>(),
            vec![
                (0, Coord::new(0, 0)),
                (3, Coord::new(2, 1)),
                (7, Coord::new(5, 2)),
                (12, Coord::new(9, 3)),
            ],
            vec![(0, g.root_abs()), (11, Coord::new(9, 10)), (22, hole.c)],
        ];
        for points in samples {
            let ray = RaySample::new(points).unwrap();
            let almost =
                check_almost_geodesic(&g, &mut cache, &ray, DEFAULT_EPSILON, None).unwrap();
            if almost.pass {
                let head = &ray.points()[..ray.tail_start(None)];
                let probes: Vec<Coord> = head.iter().map(|&(_, p)| p).collect();
                let weak =
                    check_weakly_geodesic(&g, &mut cache, &ray, &probes, DEFAULT_EPSILON, None)
                        .unwrap();
                assert!(weak.pass, "{weak:?}");
            }
        }
    }

    #[test]
    fn l1_lower_bound_and_symmetry() {
        let g = build_level(&w("a(67)*"), 3).unwrap();
        let mut cache = DistCache::new(&g);
        let vs = g.vertices();
        for step in [7usize, 13, 29] {
            for (i, &u) in vs.iter().enumerate().step_by(step) {
                let v = vs[(i * 31 + 17) % vs.len()];
                let duv = distance(&g, &mut cache, u, v).unwrap();
                let dvu = distance(&g, &mut cache, v, u).unwrap();
                assert_eq!(duv, dvu);
                assert!(duv as i64 >= u.l1(v));
                assert_eq!(duv == 0, u == v);
            }
        }
    }

    #[test]
    fn hole_free_ball_is_isometric_to_l1() {
        // a neighborhood clear of every obstructing hole carries the plain
        // lattice metric
        let g = build_level(&w("a(0)*"), 3).unwrap();
        let mut cache = DistCache::new(&g);
        let corner = Coord::new(0, 0);
        let region = ball(&g, &mut cache, corner, 4).unwrap();
        let hole = central_hole(3);
        assert!(region.iter().all(|&p| !hole.strictly_inside(p)));
        for &u in &region {
            for &v in &region {
                assert_eq!(distance(&g, &mut cache, u, v).unwrap() as i64, u.l1(v));
            }
        }
    }

    #[test]
    fn l1_equality_pairs_carry_a_staircase() {
        // whenever the distance meets the lattice bound, a monotone
        // staircase of support vertices realizes it
        let g = build_level(&w("b(7)*"), 3).unwrap();
        let mut cache = DistCache::new(&g);
        let vs = g.vertices();
        for (i, &u) in vs.iter().enumerate().step_by(11) {
            let v = vs[(i * 37 + 5) % vs.len()];
            let d = distance(&g, &mut cache, u, v).unwrap();
            if d as i64 != u.l1(v) {
                continue;
            }
            let support = geodesic_support(&g, &mut cache, u, v).unwrap();
            let (sx, sy) = ((v.x - u.x).signum(), (v.y - u.y).signum());
            let mut cur = u;
            while cur != v {
                let step_x = Coord::new(cur.x + sx, cur.y);
                let step_y = Coord::new(cur.x, cur.y + sy);
                cur = if sx != 0 && support.contains(&step_x) && g.has_edge(cur, sx, 0) {
                    step_x
                } else if sy != 0 && support.contains(&step_y) && g.has_edge(cur, 0, sy) {
                    step_y
                } else {
                    panic!("no monotone support step from {cur} toward {v}");
                };
            }
        }
    }

    #[test]
    fn phi_basics() {
        let g = build_level(&w("b(7)*"), 4).unwrap();
        let mut cache = DistCache::new(&g);
        let root = g.root_abs();
        let y = g.to_absolute(Coord::new(5, 2));
        assert_eq!(phi(&g, &mut cache, root, root, y).unwrap(), 0);
        let v = g.to_absolute(Coord::new(0, 1));
        let p = phi(&g, &mut cache, root, v, y).unwrap();
        assert!(p.unsigned_abs() <= distance(&g, &mut cache, root, v).unwrap() as u64);
    }

    #[test]
    fn phi_is_lipschitz_along_edges() {
        let g = build_level(&w("b(7)*"), 3).unwrap();
        let mut cache = DistCache::new(&g);
        let root = g.root_abs();
        let v = g.to_absolute(Coord::new(0, 1));
        for &y in g.vertices() {
            for y2 in g.neighbors(y) {
                let p1 = phi(&g, &mut cache, root, v, y).unwrap();
                let p2 = phi(&g, &mut cache, root, v, y2).unwrap();
                assert!((p1 - p2).abs() <= 2);
            }
        }
    }

    #[test]
    fn constrained_matches_support_membership() {
        let g = build_level(&w("b(7)*"), 3).unwrap();
        let mut cache = DistCache::new(&g);
        let u = g.root_abs();
        let hole = central_hole(3);
        let v = hole.c.offset(1, 1);
        assert!(g.contains(v));
        let support = geodesic_support(&g, &mut cache, u, v).unwrap();
        let d = distance(&g, &mut cache, u, v).unwrap();
        for &x in g.vertices() {
            let via = constrained_distance(&g, &mut cache, u, v, x).unwrap();
            assert!(via >= d);
            assert_eq!(via == d, support.contains(&x));
        }
    }

    #[test]
    fn cache_is_lru_bounded() {
        let g = build_level(&w("a(0)*"), 2).unwrap();
        let mut cache = DistCache::with_budget(&g, 2);
        for &v in g.vertices().iter().take(5) {
            cache.field(&g, v).unwrap();
        }
        assert!(cache.entries.len() <= 2);
    }
}
