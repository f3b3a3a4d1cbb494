//! Nets with every edge realized as a polyline of sphere points.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Rotation3;

use crate::geom::{SpherePoint, Vec3};
use crate::net::{EdgeGeometry, EdgeId, Net, NetError, RegionId};

/// Neumaier-compensated sum; the optimizer compares merit values that
/// differ in the last few digits.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyEdge {
    pub id: EdgeId,
    pub left_region: RegionId,
    pub right_region: RegionId,
    /// Indices into the point array. Arcs start and end at vertex points;
    /// a closed loop lists its points once, without repeating the first.
    pub nodes: Vec<usize>,
    pub closed: bool,
}

impl PolyEdge {
    /// Consecutive node pairs, including the closing segment of a loop.
    pub fn segments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.nodes.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.nodes[i], self.nodes[(i + 1) % n]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyFace {
    pub region: RegionId,
    /// Closed cycle of point indices with the face on the left.
    pub cycle: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedNet {
    points: Vec<Vec3>,
    /// The first `vertex_ids.len()` points are the net's vertices.
    vertex_ids: Vec<u32>,
    edges: Vec<PolyEdge>,
    faces: Vec<PolyFace>,
    regions: Vec<(RegionId, f64)>,
    m: usize,
    skeleton: Net,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub region: RegionId,
    pub value: f64,
    /// Set when a face of the region has a cusp, a collapsed segment or a
    /// self-crossing, so the angle-excess area is meaningless.
    pub unreliable: bool,
}

impl DiscretizedNet {
    /// Samples every edge of `net` with `m ≥ 2` points (a closed loop gets
    /// `m` points and `m` segments).
    pub fn from_net(net: &Net, m: usize) -> Result<Self, NetError> {
        assert!(m >= 2, "polylines need at least two points");
        let mut points: Vec<Vec3> = net.vertices().iter().map(|v| *v.point.vec()).collect();
        let vertex_ids: Vec<u32> = net.vertices().iter().map(|v| v.id).collect();
        let mut edges = Vec::with_capacity(net.edges().len());
        for e in net.edges() {
            let (nodes, closed) = match (&e.geometry, e.endpoints) {
                (EdgeGeometry::Arc(arc), Some((a, b))) => {
                    let samples = arc.sample(m);
                    let mut nodes = vec![net.vertex_position(a)];
                    for p in &samples[1..m - 1] {
                        nodes.push(points.len());
                        points.push(*p.vec());
                    }
                    nodes.push(net.vertex_position(b));
                    (nodes, false)
                }
                (EdgeGeometry::Loop(circle), _) => {
                    let nodes = (points.len()..points.len() + m).collect();
                    points.extend(circle.sample(m, None).iter().map(|p| *p.vec()));
                    (nodes, true)
                }
                (EdgeGeometry::Arc(_), None) => unreachable!("checked at construction"),
            };
            edges.push(PolyEdge {
                id: e.id,
                left_region: e.left_region,
                right_region: e.right_region,
                nodes,
                closed,
            });
        }
        let faces = net
            .faces()
            .iter()
            .map(|f| {
                let mut cycle = Vec::new();
                for d in &f.boundary {
                    let edge = &edges[net.edge_position(d.edge)];
                    let mut nodes = edge.nodes.clone();
                    if !d.forward {
                        nodes.reverse();
                    }
                    if !edge.closed {
                        nodes.pop();
                    }
                    cycle.extend(nodes);
                }
                PolyFace { region: f.region, cycle }
            })
            .collect();
        Ok(Self {
            points,
            vertex_ids,
            edges,
            faces,
            regions: net.regions().iter().map(|r| (r.id, r.target_area)).collect(),
            m,
            skeleton: net.clone(),
        })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn edges(&self) -> &[PolyEdge] {
        &self.edges
    }

    pub fn faces(&self) -> &[PolyFace] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_ids(&self) -> &[u32] {
        &self.vertex_ids
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    pub fn skeleton(&self) -> &Net {
        &self.skeleton
    }

    /// `(region id, target area)` in region-id order of the source net.
    pub fn regions(&self) -> &[(RegionId, f64)] {
        &self.regions
    }

    pub fn set_targets(&mut self, targets: &BTreeMap<RegionId, f64>) {
        for (id, t) in &mut self.regions {
            if let Some(v) = targets.get(id) {
                *t = *v;
            }
        }
    }

    /// Copy with the point array replaced; points are renormalized.
    pub fn with_points(&self, points: Vec<Vec3>) -> Self {
        assert_eq!(points.len(), self.points.len());
        Self {
            points: points.into_iter().map(|p| p.normalize()).collect(),
            ..self.clone()
        }
    }

    pub fn rotated(&self, rot: &Rotation3<f64>) -> Self {
        self.with_points(self.points.iter().map(|p| rot * p).collect())
    }

    pub fn point(&self, i: usize) -> SpherePoint {
        SpherePoint::from_vec(self.points[i]).expect("points stay on the sphere")
    }

    /// Largest deviation of a point norm from 1.
    pub fn max_norm_error(&self) -> f64 {
        self.points.iter().map(|p| (p.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Total length, each interface once, as great-circle segments.
    pub fn objective(&self) -> f64 {
        let mut s = Sum::default();
        for e in &self.edges {
            for (a, b) in e.segments() {
                s.add(segment_length(&self.points[a], &self.points[b]));
            }
        }
        s.value()
    }

    pub fn edge_length(&self, edge: usize) -> f64 {
        let mut s = Sum::default();
        for (a, b) in self.edges[edge].segments() {
            s.add(segment_length(&self.points[a], &self.points[b]));
        }
        s.value()
    }

    /// Area of every region from the angle excess of its face polygons.
    pub fn region_areas(&self) -> Vec<f64> {
        let index = self.region_index();
        let mut sums = vec![Sum::default(); self.regions.len()];
        for f in &self.faces {
            sums[index[&f.region]].add(face_area(&self.points, &f.cycle));
        }
        sums.iter().map(Sum::value).collect()
    }

    pub fn constraint_residuals(&self) -> Vec<Residual> {
        let index = self.region_index();
        let mut unreliable = vec![false; self.regions.len()];
        for f in &self.faces {
            if !cycle_is_simple(&self.points, &f.cycle) {
                unreliable[index[&f.region]] = true;
            }
        }
        self.region_areas()
            .iter()
            .zip(&self.regions)
            .zip(unreliable)
            .map(|((a, (id, target)), bad)| Residual {
                region: *id,
                value: a - target,
                unreliable: bad,
            })
            .collect()
    }

    pub(crate) fn region_index(&self) -> BTreeMap<RegionId, usize> {
        self.regions.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect()
    }

    /// Edges with a segment shorter than `min_len`.
    pub fn collapsed_edges(&self, min_len: f64) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.segments().any(|(a, b)| segment_length(&self.points[a], &self.points[b]) < min_len))
            .map(|e| e.id)
            .collect()
    }

    /// Perimeter, `region_areas − targets` and their gradients projected to
    /// the tangent planes. `area_grads[r][i]` is the gradient of region `r`'s
    /// area at point `i`.
    pub(crate) fn first_variation(&self) -> Variation {
        let n = self.points.len();
        let mut length_grad = vec![Vec3::zeros(); n];
        let mut masses = vec![0.0; n];
        let mut perimeter = Sum::default();
        for e in &self.edges {
            for (a, b) in e.segments() {
                let (pa, pb) = (&self.points[a], &self.points[b]);
                let len = segment_length(pa, pb);
                perimeter.add(len);
                masses[a] += 0.5 * len;
                masses[b] += 0.5 * len;
                let (ga, gb) = segment_length_grad(pa, pb);
                length_grad[a] += ga;
                length_grad[b] += gb;
            }
        }
        let index = self.region_index();
        let mut area_grads = vec![vec![Vec3::zeros(); n]; self.regions.len()];
        let mut areas = vec![Sum::default(); self.regions.len()];
        let mut max_turn: f64 = 0.0;
        for f in &self.faces {
            let r = index[&f.region];
            let k = f.cycle.len();
            let mut turning = Sum::default();
            for i in 0..k {
                let (ia, ib, ic) = (f.cycle[(i + k - 1) % k], f.cycle[i], f.cycle[(i + 1) % k]);
                let (alpha, ga, gb, gc) = turning_angle_grad(&self.points[ia], &self.points[ib], &self.points[ic]);
                turning.add(alpha);
                max_turn = max_turn.max(alpha.abs());
                // area = 2π − Σ turning
                area_grads[r][ia] -= ga;
                area_grads[r][ib] -= gb;
                area_grads[r][ic] -= gc;
            }
            areas[r].add(2.0 * PI);
            areas[r].add(-turning.value());
        }
        for (i, p) in self.points.iter().enumerate() {
            length_grad[i] = project(p, &length_grad[i]);
            for g in &mut area_grads {
                g[i] = project(p, &g[i]);
            }
        }
        Variation {
            perimeter: perimeter.value(),
            residuals: areas
                .iter()
                .zip(&self.regions)
                .map(|(a, (_, t))| a.value() - t)
                .collect(),
            length_grad,
            area_grads,
            max_turn,
            masses,
        }
    }
}

pub(crate) struct Variation {
    pub perimeter: f64,
    pub residuals: Vec<f64>,
    pub length_grad: Vec<Vec3>,
    pub area_grads: Vec<Vec<Vec3>>,
    /// Sharpest turn along any face boundary; the area jumps by 2π when a
    /// turn passes through ±π.
    pub max_turn: f64,
    /// Half the length of the segments meeting at each point.
    pub masses: Vec<f64>,
}

pub(crate) fn project(p: &Vec3, v: &Vec3) -> Vec3 {
    v - v.dot(p) * p
}

pub(crate) fn segment_length(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Ambient gradient of `atan2(|a×b|, a·b)` in `a` and `b`.
fn segment_length_grad(a: &Vec3, b: &Vec3) -> (Vec3, Vec3) {
    let n = a.cross(b);
    let s = n.norm();
    let c = a.dot(b);
    let q = s * s + c * c;
    if s == 0.0 {
        return (Vec3::zeros(), Vec3::zeros());
    }
    // ds/da = b × n / s, ds/db = n × a / s, dc/da = b, dc/db = a
    let ga = (c * b.cross(&n) / s - s * b) / q;
    let gb = (c * n.cross(a) / s - s * a) / q;
    (ga, gb)
}

/// Signed left turn at `b` of the path `a → b → c` along great circles.
pub(crate) fn turning_angle(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let n1 = a.cross(b);
    let n2 = b.cross(c);
    b.dot(&n1.cross(&n2)).atan2(n1.dot(&n2))
}

/// `turning_angle` and its ambient gradients in `a`, `b`, `c`.
fn turning_angle_grad(a: &Vec3, b: &Vec3, c: &Vec3) -> (f64, Vec3, Vec3, Vec3) {
    let n1 = a.cross(b);
    let n2 = b.cross(c);
    let m = n1.cross(&n2);
    let y = b.dot(&m);
    let x = n1.dot(&n2);
    let q = x * x + y * y;
    let alpha = y.atan2(x);
    if q == 0.0 {
        return (alpha, Vec3::zeros(), Vec3::zeros(), Vec3::zeros());
    }
    // partials of alpha with respect to n1, n2 and the explicit b in y
    let g1 = (x * n2.cross(b) - y * n2) / q;
    let g2 = (x * b.cross(&n1) - y * n1) / q;
    let gb_direct = x * m / q;
    // n1 = a × b: v·dn1 = da·(b × v) + db·(v × a); n2 = b × c: v·dn2 = db·(c × v) + dc·(v × b)
    let ga = b.cross(&g1);
    let gb = gb_direct + g1.cross(a) + c.cross(&g2);
    let gc = g2.cross(b);
    (alpha, ga, gb, gc)
}

pub(crate) fn face_area(points: &[Vec3], cycle: &[usize]) -> f64 {
    let k = cycle.len();
    let mut turning = Sum::default();
    for i in 0..k {
        turning.add(turning_angle(
            &points[cycle[(i + k - 1) % k]],
            &points[cycle[i]],
            &points[cycle[(i + 1) % k]],
        ));
    }
    2.0 * PI - turning.value()
}

/// No near-cusp turns, no collapsed segments and no crossing between
/// non-adjacent segments.
fn cycle_is_simple(points: &[Vec3], cycle: &[usize]) -> bool {
    let k = cycle.len();
    let seg = |i: usize| (points[cycle[i]], points[cycle[(i + 1) % k]]);
    for i in 0..k {
        let (a, b) = seg(i);
        if segment_length(&a, &b) < 1e-12 {
            return false;
        }
        let turn = turning_angle(&points[cycle[(i + k - 1) % k]], &a, &b);
        if turn.abs() > PI - 1e-9 {
            return false;
        }
    }
    for i in 0..k {
        for j in i + 2..k {
            if i == 0 && j == k - 1 {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_cross(&a, &b, &c, &d) {
                return false;
            }
        }
    }
    true
}

fn segments_cross(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> bool {
    // points within rounding of the other segment's great circle count as on it
    const ON_PLANE: f64 = 1e-13;
    let opposite = |n: Vec3, p: &Vec3, q: &Vec3| {
        let n = n.normalize();
        let (sp, sq) = (p.dot(&n), q.dot(&n));
        (sp > ON_PLANE && sq < -ON_PLANE) || (sp < -ON_PLANE && sq > ON_PLANE)
    };
    // both segments are short, so they can only meet in the hemisphere they share
    opposite(a.cross(b), c, d) && opposite(c.cross(d), a, b) && (a + b).dot(&(c + d)) > 0.0
}
