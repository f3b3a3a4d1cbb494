//! The regular partitions of the sphere into 2, 3, 4, 6 and 12 congruent
//! regions meeting in threes: a great circle, three half great circles
//! between the poles, and the radial projections of the tetrahedron, cube
//! and dodecahedron.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::geom::{arc_between, circle_for_area, isoperimetric_profile, Arc, GeomError, SpherePoint, Vec3, FOUR_PI};
use crate::net::{region_areas, DirectedEdge, EdgeRec, Face, Net, RegionRec, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogName {
    GreatCircle,
    ThreeSemicircles,
    Tetrahedral,
    Cubical,
    Dodecahedral,
}

impl CatalogName {
    pub const ALL: [CatalogName; 5] = [
        CatalogName::GreatCircle,
        CatalogName::ThreeSemicircles,
        CatalogName::Tetrahedral,
        CatalogName::Cubical,
        CatalogName::Dodecahedral,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogName::GreatCircle => "great_circle",
            CatalogName::ThreeSemicircles => "three_semicircles",
            CatalogName::Tetrahedral => "tetrahedral",
            CatalogName::Cubical => "cubical",
            CatalogName::Dodecahedral => "dodecahedral",
        }
    }

    pub fn region_count(&self) -> usize {
        match self {
            CatalogName::GreatCircle => 2,
            CatalogName::ThreeSemicircles => 3,
            CatalogName::Tetrahedral => 4,
            CatalogName::Cubical => 6,
            CatalogName::Dodecahedral => 12,
        }
    }

    /// Closed-form total perimeter, as text and value.
    pub fn closed_form(&self) -> (&'static str, f64) {
        match self {
            CatalogName::GreatCircle => ("2π", 2.0 * PI),
            CatalogName::ThreeSemicircles => ("3π", 3.0 * PI),
            CatalogName::Tetrahedral => ("6·arccos(−1/3)", 6.0 * (-1.0f64 / 3.0).acos()),
            CatalogName::Cubical => ("12·arccos(1/3)", 12.0 * (1.0f64 / 3.0).acos()),
            CatalogName::Dodecahedral => ("30·arccos(√5/3)", 30.0 * (5.0f64.sqrt() / 3.0).acos()),
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown catalog entry `{0}` (expected one of great_circle, three_semicircles, tetrahedral, cubical, dodecahedral)")]
pub struct UnknownName(pub String);

impl FromStr for CatalogName {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CatalogName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: CatalogName,
    pub n: usize,
    pub net: Net,
    pub closed_form: &'static str,
    pub closed_form_perimeter: f64,
}

pub fn build_named_net(name: CatalogName) -> CatalogEntry {
    let n = name.region_count();
    let net = match name {
        CatalogName::GreatCircle => great_circle(),
        CatalogName::ThreeSemicircles => three_semicircles(),
        CatalogName::Tetrahedral => tetrahedral(),
        CatalogName::Cubical => cubical(),
        CatalogName::Dodecahedral => dodecahedral(),
    };
    let (closed_form, closed_form_perimeter) = name.closed_form();
    CatalogEntry {
        name,
        n,
        net,
        closed_form,
        closed_form_perimeter,
    }
}

/// Looks an entry up by its snake_case name.
pub fn build_by_name(name: &str) -> Result<CatalogEntry, UnknownName> {
    name.parse().map(build_named_net)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogRow {
    pub name: CatalogName,
    pub n: usize,
    pub perimeter: f64,
    pub closed_form: &'static str,
    pub region_area: f64,
    pub lower_bound: f64,
    pub ratio: f64,
}

/// One row per entry: perimeter against the bound `2π√(n−1)`.
pub fn catalog_table() -> Vec<CatalogRow> {
    CatalogName::ALL
        .into_iter()
        .map(|name| {
            let n = name.region_count();
            let (closed_form, perimeter) = name.closed_form();
            let lower_bound = 2.0 * PI * ((n - 1) as f64).sqrt();
            CatalogRow {
                name,
                n,
                perimeter,
                closed_form,
                region_area: FOUR_PI / n as f64,
                lower_bound,
                ratio: perimeter / lower_bound,
            }
        })
        .collect()
}

fn point(v: Vec3) -> SpherePoint {
    SpherePoint::from_vec(v).expect("catalog coordinates are nonzero")
}

fn equal_regions(n: u32) -> Vec<RegionRec> {
    (0..n)
        .map(|id| RegionRec {
            id,
            target_area: FOUR_PI / n as f64,
            pressure: 0.0,
        })
        .collect()
}

fn great_circle() -> Net {
    let north = point(Vec3::z());
    let edges = vec![EdgeRec::closed_loop(1, north, 0.0, 0, 1).expect("valid loop")];
    let faces = vec![
        Face {
            id: 0,
            region: 0,
            boundary: vec![DirectedEdge::new(1, true)],
        },
        Face {
            id: 1,
            region: 1,
            boundary: vec![DirectedEdge::new(1, false)],
        },
    ];
    Net::new(Vec::new(), edges, equal_regions(2), faces).expect("valid net")
}

/// Two regions split by the circle around the north pole enclosing `area`.
/// Region 0 is the cap. Pressures are the equilibrium ones, `κ` and 0.
pub fn cap_net(area: f64) -> Result<Net, GeomError> {
    let circle = circle_for_area(area, None)?;
    let kappa = circle.curvature();
    let edges = vec![EdgeRec::closed_loop(1, circle.center, kappa, 0, 1).expect("radius checked above")];
    let regions = vec![
        RegionRec {
            id: 0,
            target_area: area,
            pressure: kappa.max(0.0),
        },
        RegionRec {
            id: 1,
            target_area: FOUR_PI - area,
            pressure: (-kappa).max(0.0),
        },
    ];
    let faces = vec![
        Face {
            id: 0,
            region: 0,
            boundary: vec![DirectedEdge::new(1, true)],
        },
        Face {
            id: 1,
            region: 1,
            boundary: vec![DirectedEdge::new(1, false)],
        },
    ];
    Ok(Net::new(Vec::new(), edges, regions, faces).expect("valid net"))
}

fn three_semicircles() -> Net {
    let north = point(Vec3::z());
    let south = point(-Vec3::z());
    let vertices = vec![Vertex { id: 0, point: north }, Vertex { id: 1, point: south }];
    // Edge i is the meridian at longitude 2πi/3, its left side facing east.
    let edges = (0..3u32)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / 3.0;
            let center = point(Vec3::new(-phi.sin(), phi.cos(), 0.0));
            let arc = Arc::from_center(north, south, center).expect("meridian");
            EdgeRec::from_arc(i + 1, 0, 1, i, (i + 2) % 3, arc)
        })
        .collect();
    let faces = (0..3u32)
        .map(|i| Face {
            id: i,
            region: i,
            boundary: vec![DirectedEdge::new(i + 1, true), DirectedEdge::new((i + 1) % 3 + 1, false)],
        })
        .collect();
    Net::new(vertices, edges, equal_regions(3), faces).expect("valid net")
}

fn tetrahedral() -> Net {
    let r = 8.0f64.sqrt() / 3.0;
    let mut corners = vec![Vec3::z()];
    for k in 0..3 {
        let phi = 2.0 * PI * k as f64 / 3.0;
        corners.push(Vec3::new(r * phi.cos(), r * phi.sin(), -1.0 / 3.0));
    }
    let normals = corners.iter().map(|c| -c).collect::<Vec<_>>();
    polyhedral(&corners, &normals)
}

fn cubical() -> Net {
    let mut corners = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                corners.push(Vec3::new(sx, sy, sz));
            }
        }
    }
    let normals = vec![Vec3::x(), -Vec3::x(), Vec3::y(), -Vec3::y(), Vec3::z(), -Vec3::z()];
    polyhedral(&corners, &normals)
}

fn dodecahedral() -> Net {
    let phi = 0.5 * (1.0 + 5.0f64.sqrt());
    let inv = 1.0 / phi;
    let mut corners = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                corners.push(Vec3::new(sx, sy, sz));
            }
        }
    }
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            corners.push(Vec3::new(0.0, s1 * inv, s2 * phi));
            corners.push(Vec3::new(s1 * inv, s2 * phi, 0.0));
            corners.push(Vec3::new(s1 * phi, 0.0, s2 * inv));
        }
    }
    // Face centers of the dodecahedron are the icosahedron's vertices.
    let mut normals = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            normals.push(Vec3::new(0.0, s1 * phi, s2));
            normals.push(Vec3::new(s2, 0.0, s1 * phi));
            normals.push(Vec3::new(s1 * phi, s2, 0.0));
        }
    }
    polyhedral(&corners, &normals)
}

/// Radially projected convex polyhedron. Face `i` (region `i`) consists of
/// the corners maximizing the dot product with `normals[i]`.
fn polyhedral(corners: &[Vec3], normals: &[Vec3]) -> Net {
    let points: Vec<SpherePoint> = corners.iter().map(|&c| point(c)).collect();
    let vertices = points
        .iter()
        .enumerate()
        .map(|(i, &p)| Vertex { id: i as u32, point: p })
        .collect();

    // (lo, hi) -> (edge id, forward when stored as lo -> hi)
    let mut edge_of: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut edges: Vec<EdgeRec> = Vec::new();
    let mut faces = Vec::new();
    for (f, normal) in normals.iter().enumerate() {
        let n = normal.normalize();
        let best = points.iter().map(|p| p.vec().dot(&n)).fold(f64::MIN, f64::max);
        let mut ring: Vec<usize> = (0..points.len()).filter(|&i| points[i].vec().dot(&n) > best - 1e-9).collect();
        // Counterclockwise about the outward normal keeps the face on the left.
        let u = (points[ring[0]].vec() - best * n).normalize();
        let w = n.cross(&u);
        ring.sort_by(|&a, &b| {
            let ang = |i: usize| {
                let d = points[i].vec();
                d.dot(&w).atan2(d.dot(&u))
            };
            ang(a).total_cmp(&ang(b))
        });

        let mut boundary = Vec::new();
        for k in 0..ring.len() {
            let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
            let key = (a.min(b), a.max(b));
            match edge_of.get(&key) {
                Some(&id) => {
                    let e = &mut edges[id as usize - 1];
                    let forward = e.endpoints == Some((a as u32, b as u32));
                    assert!(!forward, "each edge is shared by two faces in opposite directions");
                    e.right_region = f as u32;
                    boundary.push(DirectedEdge::new(id, false));
                }
                None => {
                    let id = edges.len() as u32 + 1;
                    let arc = arc_between(points[a], points[b], 0.0, true).expect("adjacent corners");
                    // right region is filled in by the neighbouring face
                    edges.push(EdgeRec::from_arc(id, a as u32, b as u32, f as u32, u32::MAX, arc));
                    edge_of.insert(key, id);
                    boundary.push(DirectedEdge::new(id, true));
                }
            }
        }
        faces.push(Face {
            id: f as u32,
            region: f as u32,
            boundary,
        });
    }
    Net::new(vertices, edges, equal_regions(normals.len() as u32), faces).expect("valid net")
}

/// Replaces the middle third of edge `edge_id` by a lens-shaped face of a
/// new region, bounded by two arcs of curvature ±0.3. The result is
/// trivalent with the right Euler characteristic, but the lens is a digon.
/// Target areas are set to the actual areas.
pub fn split_edge_into_digon(net: &Net, edge_id: u32) -> Net {
    let old = net.edge(edge_id).expect("edge exists").clone();
    let (a, b) = old.endpoints.expect("edge has endpoints");
    let arc = old.directed_arc(true).expect("arc edge");
    let (p, q) = (arc.point_at(1.0 / 3.0), arc.point_at(2.0 / 3.0));
    let pa = net.vertex(a).unwrap().point;
    let pb = net.vertex(b).unwrap().point;

    let next_vertex = net.vertices().iter().map(|v| v.id).max().map_or(0, |m| m + 1);
    let (vp, vq) = (next_vertex, next_vertex + 1);
    let next_edge = net.edges().iter().map(|e| e.id).max().unwrap_or(0) + 1;
    let (e_left, e_right, e_tail) = (next_edge, next_edge + 1, next_edge + 2);
    let lens_region = net.regions().iter().map(|r| r.id).max().map_or(0, |m| m + 1);
    let lens_face = net.faces().iter().map(|f| f.id).max().map_or(0, |m| m + 1);
    let (l, r) = (old.left_region, old.right_region);

    let mut vertices = net.vertices().to_vec();
    vertices.push(Vertex { id: vp, point: p });
    vertices.push(Vertex { id: vq, point: q });

    let piece = |from: SpherePoint, to: SpherePoint| arc_between(from, to, old.kappa, true).expect("sub-arc");
    let mut edges: Vec<EdgeRec> = net
        .edges()
        .iter()
        .map(|e| {
            if e.id == edge_id {
                EdgeRec::from_arc(edge_id, a, vp, l, r, piece(pa, p))
            } else {
                e.clone()
            }
        })
        .collect();
    // a negative-curvature arc bulges to its left, a positive one to its right
    let bulge_left = arc_between(p, q, -0.3, true).expect("lens arc");
    let bulge_right = arc_between(p, q, 0.3, true).expect("lens arc");
    edges.push(EdgeRec::from_arc(e_left, vp, vq, l, lens_region, bulge_left));
    edges.push(EdgeRec::from_arc(e_right, vp, vq, lens_region, r, bulge_right));
    edges.push(EdgeRec::from_arc(e_tail, vq, b, l, r, piece(q, pb)));

    let mut faces: Vec<Face> = net
        .faces()
        .iter()
        .map(|f| {
            let mut boundary = Vec::new();
            for d in &f.boundary {
                if d.edge != edge_id {
                    boundary.push(*d);
                } else if d.forward {
                    boundary.extend([
                        DirectedEdge::new(edge_id, true),
                        DirectedEdge::new(e_left, true),
                        DirectedEdge::new(e_tail, true),
                    ]);
                } else {
                    boundary.extend([
                        DirectedEdge::new(e_tail, false),
                        DirectedEdge::new(e_right, false),
                        DirectedEdge::new(edge_id, false),
                    ]);
                }
            }
            Face { boundary, ..f.clone() }
        })
        .collect();
    faces.push(Face {
        id: lens_face,
        region: lens_region,
        boundary: vec![DirectedEdge::new(e_right, true), DirectedEdge::new(e_left, false)],
    });

    let mut regions = net.regions().to_vec();
    regions.push(RegionRec {
        id: lens_region,
        target_area: 0.0,
        pressure: 0.0,
    });
    let draft = Net::new(vertices.clone(), edges.clone(), regions.clone(), faces.clone()).expect("valid net");
    let areas = region_areas(&draft).expect("closed faces");
    for reg in &mut regions {
        reg.target_area = areas[&reg.id];
    }
    Net::new(vertices, edges, regions, faces).expect("valid net")
}

/// `2π√(n−1)`, the perimeter bound for `n` equal regions.
pub fn equal_area_lower_bound(n: usize) -> f64 {
    let area = FOUR_PI / n as f64;
    // n regions of area 4π/n, each boundary counted twice
    if n < 2 {
        return 0.0;
    }
    0.5 * n as f64 * isoperimetric_profile(area).expect("area in (0, 4π)")
}

/// Two great circles through the poles: four lunes meeting at two
/// degree-4 vertices.
pub fn crossing_great_circles() -> Net {
    let n = point(Vec3::z());
    let s = n.antipode();
    let vertices = vec![Vertex { id: 0, point: n }, Vertex { id: 1, point: s }];
    let meridian = |k: usize| {
        let phi = k as f64 * std::f64::consts::FRAC_PI_2;
        Arc::from_center(n, s, point(Vec3::new(-phi.sin(), phi.cos(), 0.0))).expect("half great circle")
    };
    let edges = (0..4)
        .map(|k| EdgeRec::from_arc(k as u32 + 1, 0, 1, k as u32, ((k + 3) % 4) as u32, meridian(k)))
        .collect();
    let faces = (0..4u32)
        .map(|k| Face {
            id: k,
            region: k,
            boundary: vec![DirectedEdge::new(k + 1, true), DirectedEdge::new((k + 1) % 4 + 1, false)],
        })
        .collect();
    Net::new(vertices, edges, equal_regions(4), faces).expect("valid net")
}

/// Relabels every face of region `victim` as region `into`. The emptied
/// region keeps target 0 and the surviving one absorbs its target.
pub fn merge_regions(net: &Net, victim: u32, into: u32) -> Net {
    let moved = net.region(victim).expect("region exists").target_area;
    let regions = net
        .regions()
        .iter()
        .map(|r| {
            let mut r = *r;
            if r.id == into {
                r.target_area += moved;
            } else if r.id == victim {
                r.target_area = 0.0;
            }
            r
        })
        .collect();
    let relabel = |r: u32| if r == victim { into } else { r };
    let edges = net
        .edges()
        .iter()
        .map(|e| EdgeRec {
            left_region: relabel(e.left_region),
            right_region: relabel(e.right_region),
            ..e.clone()
        })
        .collect();
    let faces = net
        .faces()
        .iter()
        .map(|f| Face {
            region: relabel(f.region),
            ..f.clone()
        })
        .collect();
    Net::new(net.vertices().to_vec(), edges, regions, faces).expect("relabelling keeps references valid")
}

/// Nets that break exactly one structural rule each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counterexample {
    Digon,
    DegreeFourVertex,
    SameRegionAdjacency,
}

impl Counterexample {
    pub const ALL: [Counterexample; 3] = [
        Counterexample::Digon,
        Counterexample::DegreeFourVertex,
        Counterexample::SameRegionAdjacency,
    ];

    pub fn build(&self) -> Net {
        let tetra = build_named_net(CatalogName::Tetrahedral).net;
        match self {
            Counterexample::Digon => split_edge_into_digon(&tetra, 1),
            Counterexample::DegreeFourVertex => crossing_great_circles(),
            Counterexample::SameRegionAdjacency => merge_regions(&tetra, 3, 0),
        }
    }

    /// The validator check that must reject it.
    pub fn expected_check(&self) -> &'static str {
        match self {
            Counterexample::Digon => "digon",
            Counterexample::DegreeFourVertex => "trivalence",
            Counterexample::SameRegionAdjacency => "same_region_adjacency",
        }
    }
}
