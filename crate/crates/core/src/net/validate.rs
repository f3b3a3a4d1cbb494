use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::Serialize;

use super::{DirectedEdge, EdgeGeometry, EdgeId, Face, Net, RegionId, VertexId};
use crate::geom::{self, Vec3};

/// Names of the checks in the order they are reported.
pub const CHECK_NAMES: [&str; 9] = [
    "trivalence",
    "euler_characteristic",
    "face_boundaries",
    "target_areas",
    "meeting_angles",
    "pressure_curvature",
    "same_region_adjacency",
    "digon",
    "odd_face_adjacency",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of each meeting angle from 120°, in radians.
    pub angle: f64,
    /// Allowed `|kappa - (p_left - p_right)|`.
    pub kappa: f64,
    /// Allowed gap when chaining a face boundary.
    pub closure: f64,
    /// Allowed deviation of the summed target areas from 4π.
    pub area: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            angle: 1e-6,
            kappa: 1e-9,
            closure: geom::CLOSURE_TOL,
            area: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub offenders: Vec<String>,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

struct Check {
    name: &'static str,
    offenders: Vec<String>,
    deviation: f64,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            offenders: Vec::new(),
            deviation: 0.0,
        }
    }

    fn measure(&mut self, deviation: f64) {
        if deviation > self.deviation || deviation.is_nan() {
            self.deviation = deviation;
        }
    }

    fn finish(mut self) -> CheckResult {
        self.offenders.dedup();
        CheckResult {
            name: self.name,
            passed: self.offenders.is_empty(),
            offenders: self.offenders,
            deviation: self.deviation,
        }
    }
}

/// Runs every structural check on `net`. Checks never abort early; each one
/// reports its offending elements (`v<id>`, `e<id>`, `f<id>`, `r<id>`) and
/// its largest measured deviation.
pub fn validate(net: &Net, tol: &Tolerances) -> ValidationReport {
    let incidence = incidence(net);
    let checks = vec![
        trivalence(net),
        euler(net),
        face_boundaries(net, tol),
        target_areas(net, tol),
        meeting_angles(net, &incidence, tol),
        pressure_curvature(net, tol),
        same_region_adjacency(net),
        digons(net, &incidence),
        odd_face_adjacency(net),
    ];
    debug_assert!(checks.iter().map(|c| c.name).eq(CHECK_NAMES));
    ValidationReport { checks }
}

/// For each vertex (in vertex order) the incident edges and whether the
/// edge starts there.
fn incidence(net: &Net) -> Vec<Vec<(usize, bool)>> {
    let mut inc = vec![Vec::new(); net.vertices.len()];
    for (i, e) in net.edges.iter().enumerate() {
        if let Some((a, b)) = e.endpoints {
            inc[net.vertex_position(a)].push((i, true));
            inc[net.vertex_position(b)].push((i, false));
        }
    }
    inc
}

fn trivalence(net: &Net) -> CheckResult {
    let mut check = Check::new("trivalence");
    for (v, deg) in net.vertices.iter().zip(net.degrees()) {
        check.measure((deg as f64 - 3.0).abs());
        if deg != 3 {
            check.offenders.push(format!("v{}", v.id));
        }
    }
    check.finish()
}

fn euler(net: &Net) -> CheckResult {
    let mut check = Check::new("euler_characteristic");
    let loops = net.edges.iter().filter(|e| e.is_loop()).count() as i64;
    let chi = net.vertices.len() as i64 + loops - net.edges.len() as i64 + net.faces.len() as i64;
    check.measure((chi - 2).abs() as f64);
    if chi != 2 {
        check.offenders.push(format!("chi={chi}"));
    }
    check.finish()
}

fn face_boundaries(net: &Net, tol: &Tolerances) -> CheckResult {
    let mut check = Check::new("face_boundaries");
    let mut sides: BTreeMap<(EdgeId, bool), usize> = BTreeMap::new();
    for face in &net.faces {
        let mut bad = false;
        let n = face.boundary.len();
        for (i, d) in face.boundary.iter().enumerate() {
            *sides.entry((d.edge, d.forward)).or_default() += 1;
            let edge = net.edge(d.edge).expect("checked at construction");
            if edge.left_of(d.forward) != face.region {
                bad = true;
            }
            let next = face.boundary[(i + 1) % n];
            let next_edge = net.edge(next.edge).expect("checked at construction");
            match (edge.directed_endpoints(d.forward), next_edge.directed_endpoints(next.forward)) {
                (Some((_, end)), Some((start, _))) if end != start => bad = true,
                _ => {}
            }
        }
        if !bad {
            match net.face_boundary(face) {
                Ok(Some(poly)) => {
                    for w in poly.arcs().windows(2) {
                        check.measure(geom::spherical_distance(&w[0].end(), &w[1].start()));
                    }
                }
                Ok(None) => {}
                Err(_) => bad = true,
            }
        }
        if bad {
            check.offenders.push(format!("f{}", face.id));
        }
    }
    for e in &net.edges {
        for forward in [true, false] {
            let used = sides.get(&(e.id, forward)).copied().unwrap_or(0);
            if used != 1 {
                check.offenders.push(format!("e{}", e.id));
            }
        }
    }
    if check.deviation > tol.closure {
        check.offenders.push(format!("gap={:e}", check.deviation));
    }
    check.finish()
}

fn target_areas(net: &Net, tol: &Tolerances) -> CheckResult {
    let mut check = Check::new("target_areas");
    let total: f64 = net.regions.iter().map(|r| r.target_area).sum();
    check.measure((total - geom::FOUR_PI).abs());
    if check.deviation > tol.area {
        check.offenders.extend(net.regions.iter().map(|r| format!("r{}", r.id)));
    }
    check.finish()
}

fn outgoing_tangent(net: &Net, edge: usize, starts_here: bool) -> Option<Vec3> {
    match &net.edges[edge].geometry {
        EdgeGeometry::Arc(a) if starts_here => Some(a.start_tangent()),
        EdgeGeometry::Arc(a) => Some(-a.end_tangent()),
        EdgeGeometry::Loop(_) => None,
    }
}

/// Angles between consecutive tangents around `at`, counterclockwise.
pub(crate) fn sorted_gaps(at: &Vec3, tangents: &[Vec3]) -> Vec<f64> {
    if tangents.is_empty() {
        return Vec::new();
    }
    let e1 = (tangents[0] - tangents[0].dot(at) * at).normalize();
    let e2 = at.cross(&e1);
    let mut angles: Vec<f64> = tangents.iter().map(|t| t.dot(&e2).atan2(t.dot(&e1))).collect();
    angles.sort_by(f64::total_cmp);
    let n = angles.len();
    (0..n)
        .map(|i| {
            let gap = angles[(i + 1) % n] - angles[i];
            if i + 1 == n {
                gap + 2.0 * PI
            } else {
                gap
            }
        })
        .collect()
}

fn meeting_angles(net: &Net, incidence: &[Vec<(usize, bool)>], tol: &Tolerances) -> CheckResult {
    let mut check = Check::new("meeting_angles");
    for (v, inc) in net.vertices.iter().zip(incidence) {
        if inc.len() != 3 {
            continue;
        }
        let tangents: Vec<Vec3> = inc.iter().filter_map(|&(e, s)| outgoing_tangent(net, e, s)).collect();
        let worst = sorted_gaps(v.point.vec(), &tangents)
            .into_iter()
            .map(|g| (g - 2.0 * PI / 3.0).abs())
            .fold(0.0, f64::max);
        check.measure(worst);
        if worst > tol.angle {
            check.offenders.push(format!("v{}", v.id));
        }
    }
    check.finish()
}

fn pressure_curvature(net: &Net, tol: &Tolerances) -> CheckResult {
    let mut check = Check::new("pressure_curvature");
    for e in &net.edges {
        let left = net.region(e.left_region).expect("checked at construction").pressure;
        let right = net.region(e.right_region).expect("checked at construction").pressure;
        let dev = (e.kappa - (left - right)).abs();
        check.measure(dev);
        if dev > tol.kappa {
            check.offenders.push(format!("e{}", e.id));
        }
    }
    check.finish()
}

fn same_region_adjacency(net: &Net) -> CheckResult {
    let mut check = Check::new("same_region_adjacency");
    for e in &net.edges {
        if e.left_region == e.right_region {
            check.offenders.push(format!("e{}", e.id));
        }
    }
    check.measure(check.offenders.len() as f64);
    check.finish()
}

/// Looks for a single face, or a pair of faces sharing an edge, whose union
/// is bounded by a cycle with exactly two corners (boundary vertices with an
/// edge leaving the union) and whose two corners have different outside
/// edges. Larger unions are not searched.
fn digons(net: &Net, incidence: &[Vec<(usize, bool)>]) -> CheckResult {
    let mut check = Check::new("digon");
    let mut by_edge: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (i, f) in net.faces.iter().enumerate() {
        for d in &f.boundary {
            by_edge.entry(d.edge).or_default().push(i);
        }
    }
    let mut sets: BTreeSet<Vec<usize>> = (0..net.faces.len()).map(|i| vec![i]).collect();
    for faces in by_edge.values() {
        for (a, &i) in faces.iter().enumerate() {
            for &j in &faces[a + 1..] {
                if i != j {
                    sets.insert(vec![i.min(j), i.max(j)]);
                }
            }
        }
    }
    for set in sets {
        let faces: Vec<&Face> = set.iter().map(|&i| &net.faces[i]).collect();
        if union_is_digon(net, incidence, &faces) {
            check.offenders.push(
                faces
                    .iter()
                    .map(|f| format!("f{}", f.id))
                    .collect::<Vec<_>>()
                    .join("+"),
            );
        }
    }
    check.measure(check.offenders.len() as f64);
    check.finish()
}

fn union_is_digon(net: &Net, incidence: &[Vec<(usize, bool)>], faces: &[&Face]) -> bool {
    let all: Vec<DirectedEdge> = faces.iter().flat_map(|f| f.boundary.iter().copied()).collect();
    if all.iter().any(|d| net.edge(d.edge).is_some_and(|e| e.is_loop())) {
        return false;
    }
    let present: BTreeSet<(EdgeId, bool)> = all.iter().map(|d| (d.edge, d.forward)).collect();
    let interior: BTreeSet<EdgeId> = all
        .iter()
        .filter(|d| present.contains(&(d.edge, !d.forward)))
        .map(|d| d.edge)
        .collect();
    let boundary: Vec<DirectedEdge> = all.into_iter().filter(|d| !interior.contains(&d.edge)).collect();
    if boundary.is_empty() {
        return false;
    }
    let endpoints = |d: &DirectedEdge| -> (VertexId, VertexId) {
        net.edge(d.edge)
            .and_then(|e| e.directed_endpoints(d.forward))
            .expect("non-loop edge")
    };
    let mut by_start: BTreeMap<VertexId, DirectedEdge> = BTreeMap::new();
    for d in &boundary {
        if by_start.insert(endpoints(d).0, *d).is_some() {
            return false;
        }
    }
    // walk the cycle; a union with several boundary components is skipped
    let mut cycle = vec![boundary[0]];
    loop {
        let end = endpoints(cycle.last().unwrap()).1;
        let Some(next) = by_start.get(&end) else { return false };
        if *next == cycle[0] {
            break;
        }
        if cycle.len() > boundary.len() {
            return false;
        }
        cycle.push(*next);
    }
    if cycle.len() != boundary.len() {
        return false;
    }
    let mut corners: Vec<BTreeSet<EdgeId>> = Vec::new();
    for (i, d) in cycle.iter().enumerate() {
        let next = cycle[(i + 1) % cycle.len()];
        let v = endpoints(d).1;
        let outside: BTreeSet<EdgeId> = incidence[net.vertex_position(v)]
            .iter()
            .map(|&(e, _)| net.edges[e].id)
            .filter(|&e| e != d.edge && e != next.edge && !interior.contains(&e))
            .collect();
        if !outside.is_empty() {
            corners.push(outside);
        }
    }
    corners.len() == 2 && corners[0].is_disjoint(&corners[1])
}

/// An odd-sided face meets, across its edges, at least one face of every
/// other region. Around an odd cycle the neighbours need three labels, so
/// with more than four regions the check requires three distinct neighbours.
fn odd_face_adjacency(net: &Net) -> CheckResult {
    let mut check = Check::new("odd_face_adjacency");
    let required = (net.regions.len().saturating_sub(1)).min(3);
    for face in &net.faces {
        if face.boundary.len() % 2 == 0 {
            continue;
        }
        let neighbours: BTreeSet<RegionId> = face
            .boundary
            .iter()
            .map(|d| net.edge(d.edge).expect("checked at construction").left_of(!d.forward))
            .filter(|&r| r != face.region)
            .collect();
        check.measure(required.saturating_sub(neighbours.len()) as f64);
        if neighbours.len() < required {
            check.offenders.push(format!("f{}", face.id));
        }
    }
    check.finish()
}
