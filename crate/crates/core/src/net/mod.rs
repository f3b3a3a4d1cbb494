//! Labeled curve networks on the sphere.
//!
//! A [`Net`] stores trivalent vertices, constant-curvature edges that each
//! separate two regions, and faces. A region may own several faces, so a
//! disconnected region is represented directly. Faces list their boundary
//! as directed edge references with the face on the left.
//!
//! An edge without endpoints is a closed loop (a full circle with no
//! vertex on it). For Euler characteristic purposes a loop counts as one
//! vertex and one edge.

mod io;
pub(crate) mod validate;

use std::collections::BTreeMap;

use nalgebra::Rotation3;
use thiserror::Error;

use crate::geom::{self, Arc, CircleSpec, GeomError, PolygonBoundary, SpherePoint};

pub use io::{parse_net, parse_net_with_warnings, serialize_net, NET_FORMAT_VERSION};
pub use validate::{validate, CheckResult, Tolerances, ValidationReport, CHECK_NAMES};

pub type VertexId = u32;
pub type EdgeId = u32;
pub type RegionId = u32;
pub type FaceId = u32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: u32 },
    #[error("edge ids must be positive (their sign encodes direction), found {0}")]
    ZeroEdgeId(u32),
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    #[error("{owner} references unknown region {region}")]
    UnknownRegion { owner: String, region: RegionId },
    #[error("face {face} references unknown edge {edge}")]
    UnknownEdge { face: FaceId, edge: EdgeId },
    #[error("face {face} is malformed: {reason}")]
    MalformedFace { face: FaceId, reason: &'static str },
    #[error("edge {edge}: geometry does not match its endpoint vertices (gap {gap:e})")]
    EndpointMismatch { edge: EdgeId, gap: f64 },
    #[error("edge {edge}: {reason}")]
    MalformedEdge { edge: EdgeId, reason: String },
    #[error("vertex {vertex} has norm {norm}, too far from the unit sphere")]
    NotUnit { vertex: VertexId, norm: f64 },
    #[error("{context}: {source}")]
    Geometry {
        context: String,
        #[source]
        source: GeomError,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported net format version {0}")]
    Version(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    pub point: SpherePoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeGeometry {
    Arc(Arc),
    Loop(CircleSpec),
}

impl EdgeGeometry {
    pub fn length(&self) -> f64 {
        match self {
            EdgeGeometry::Arc(a) => a.length(),
            EdgeGeometry::Loop(c) => c.perimeter(),
        }
    }

    fn rotated(&self, rot: &Rotation3<f64>) -> Self {
        match self {
            EdgeGeometry::Arc(a) => EdgeGeometry::Arc(a.rotated(rot)),
            EdgeGeometry::Loop(c) => EdgeGeometry::Loop(CircleSpec {
                center: c.center.rotated(rot),
                radius: c.radius,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRec {
    pub id: EdgeId,
    /// `None` for a closed loop.
    pub endpoints: Option<(VertexId, VertexId)>,
    pub kappa: f64,
    pub left_region: RegionId,
    pub right_region: RegionId,
    pub geometry: EdgeGeometry,
}

impl EdgeRec {
    pub fn from_arc(id: EdgeId, from: VertexId, to: VertexId, left: RegionId, right: RegionId, arc: Arc) -> Self {
        Self {
            id,
            endpoints: Some((from, to)),
            kappa: arc.kappa(),
            left_region: left,
            right_region: right,
            geometry: EdgeGeometry::Arc(arc),
        }
    }

    /// A vertex-free loop of signed curvature `kappa` with the cap around
    /// `center` on its left.
    pub fn closed_loop(
        id: EdgeId,
        center: SpherePoint,
        kappa: f64,
        left: RegionId,
        right: RegionId,
    ) -> Result<Self, NetError> {
        let circle = CircleSpec::new(center, 1.0f64.atan2(kappa)).map_err(|source| NetError::Geometry {
            context: format!("edge {id}"),
            source,
        })?;
        Ok(Self {
            id,
            endpoints: None,
            kappa,
            left_region: left,
            right_region: right,
            geometry: EdgeGeometry::Loop(circle),
        })
    }

    pub fn is_loop(&self) -> bool {
        self.endpoints.is_none()
    }

    pub fn length(&self) -> f64 {
        self.geometry.length()
    }

    /// Region on the left when traversed in direction `forward`.
    pub fn left_of(&self, forward: bool) -> RegionId {
        if forward {
            self.left_region
        } else {
            self.right_region
        }
    }

    /// Start and end vertex when traversed in direction `forward`.
    pub fn directed_endpoints(&self, forward: bool) -> Option<(VertexId, VertexId)> {
        self.endpoints.map(|(a, b)| if forward { (a, b) } else { (b, a) })
    }

    pub fn directed_arc(&self, forward: bool) -> Option<Arc> {
        match &self.geometry {
            EdgeGeometry::Arc(a) if forward => Some(*a),
            EdgeGeometry::Arc(a) => Some(a.reversed()),
            EdgeGeometry::Loop(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionRec {
    pub id: RegionId,
    pub target_area: f64,
    /// Defined up to a common constant; the lowest-pressure region is
    /// conventionally 0.
    pub pressure: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectedEdge {
    pub edge: EdgeId,
    pub forward: bool,
}

impl DirectedEdge {
    pub fn new(edge: EdgeId, forward: bool) -> Self {
        Self { edge, forward }
    }

    /// Signed id as written in net files.
    pub fn signed(&self) -> i64 {
        if self.forward {
            self.edge as i64
        } else {
            -(self.edge as i64)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: FaceId,
    pub region: RegionId,
    pub boundary: Vec<DirectedEdge>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    vertices: Vec<Vertex>,
    edges: Vec<EdgeRec>,
    regions: Vec<RegionRec>,
    faces: Vec<Face>,
    vertex_index: BTreeMap<VertexId, usize>,
    edge_index: BTreeMap<EdgeId, usize>,
    region_index: BTreeMap<RegionId, usize>,
}

fn index_ids<T>(items: &[T], kind: &'static str, id: impl Fn(&T) -> u32) -> Result<BTreeMap<u32, usize>, NetError> {
    let mut map = BTreeMap::new();
    for (i, item) in items.iter().enumerate() {
        if map.insert(id(item), i).is_some() {
            return Err(NetError::DuplicateId { kind, id: id(item) });
        }
    }
    Ok(map)
}

impl Net {
    /// Checks referential integrity and that edge geometry agrees with the
    /// vertex positions. Structural conditions such as trivalence are left
    /// to [`validate`].
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<EdgeRec>,
        regions: Vec<RegionRec>,
        faces: Vec<Face>,
    ) -> Result<Self, NetError> {
        let vertex_index = index_ids(&vertices, "vertex", |v| v.id)?;
        let edge_index = index_ids(&edges, "edge", |e| e.id)?;
        let region_index = index_ids(&regions, "region", |r| r.id)?;
        index_ids(&faces, "face", |f| f.id)?;

        for e in &edges {
            if e.id == 0 {
                return Err(NetError::ZeroEdgeId(e.id));
            }
            for r in [e.left_region, e.right_region] {
                if !region_index.contains_key(&r) {
                    return Err(NetError::UnknownRegion {
                        owner: format!("edge {}", e.id),
                        region: r,
                    });
                }
            }
            match (e.endpoints, &e.geometry) {
                (Some((a, b)), EdgeGeometry::Arc(arc)) => {
                    for v in [a, b] {
                        if !vertex_index.contains_key(&v) {
                            return Err(NetError::UnknownVertex { edge: e.id, vertex: v });
                        }
                    }
                    let pa = vertices[vertex_index[&a]].point;
                    let pb = vertices[vertex_index[&b]].point;
                    let gap = geom::spherical_distance(&pa, &arc.start()).max(geom::spherical_distance(&pb, &arc.end()));
                    if gap > geom::CLOSURE_TOL {
                        return Err(NetError::EndpointMismatch { edge: e.id, gap });
                    }
                }
                (None, EdgeGeometry::Loop(_)) => {}
                _ => {
                    return Err(NetError::MalformedEdge {
                        edge: e.id,
                        reason: "loops have no endpoints and arcs need two".into(),
                    })
                }
            }
        }

        for f in &faces {
            if !region_index.contains_key(&f.region) {
                return Err(NetError::UnknownRegion {
                    owner: format!("face {}", f.id),
                    region: f.region,
                });
            }
            if f.boundary.is_empty() {
                return Err(NetError::MalformedFace {
                    face: f.id,
                    reason: "empty boundary",
                });
            }
            for d in &f.boundary {
                let Some(&i) = edge_index.get(&d.edge) else {
                    return Err(NetError::UnknownEdge { face: f.id, edge: d.edge });
                };
                if edges[i].is_loop() && f.boundary.len() != 1 {
                    return Err(NetError::MalformedFace {
                        face: f.id,
                        reason: "a loop must bound a face on its own",
                    });
                }
            }
        }

        Ok(Self {
            vertices,
            edges,
            regions,
            faces,
            vertex_index,
            edge_index,
            region_index,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeRec] {
        &self.edges
    }

    pub fn regions(&self) -> &[RegionRec] {
        &self.regions
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertex_index.get(&id).map(|&i| &self.vertices[i])
    }

    pub fn edge(&self, id: EdgeId) -> Option<&EdgeRec> {
        self.edge_index.get(&id).map(|&i| &self.edges[i])
    }

    pub fn region(&self, id: RegionId) -> Option<&RegionRec> {
        self.region_index.get(&id).map(|&i| &self.regions[i])
    }

    pub(crate) fn edge_position(&self, id: EdgeId) -> usize {
        self.edge_index[&id]
    }

    pub(crate) fn vertex_position(&self, id: VertexId) -> usize {
        self.vertex_index[&id]
    }

    /// Number of edge ends at each vertex, in vertex order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            if let Some((a, b)) = e.endpoints {
                deg[self.vertex_index[&a]] += 1;
                deg[self.vertex_index[&b]] += 1;
            }
        }
        deg
    }

    /// Boundary of `face` as a closed arc chain, or `None` for a loop face.
    pub fn face_boundary(&self, face: &Face) -> Result<Option<PolygonBoundary>, NetError> {
        let first = self.edge(face.boundary[0].edge).expect("checked at construction");
        if first.is_loop() {
            return Ok(None);
        }
        let arcs = face
            .boundary
            .iter()
            .map(|d| {
                self.edge(d.edge)
                    .and_then(|e| e.directed_arc(d.forward))
                    .expect("checked at construction")
            })
            .collect();
        PolygonBoundary::new(arcs)
            .map(Some)
            .map_err(|source| NetError::Geometry {
                context: format!("face {}", face.id),
                source,
            })
    }

    /// Area of the face on the left of its boundary.
    pub fn face_area(&self, face: &Face) -> Result<f64, NetError> {
        match self.face_boundary(face)? {
            Some(boundary) => Ok(geom::polygon_area(&boundary)),
            None => {
                let d = face.boundary[0];
                let edge = self.edge(d.edge).expect("checked at construction");
                let EdgeGeometry::Loop(circle) = edge.geometry else {
                    unreachable!("loop edges carry circle geometry")
                };
                let circle = if d.forward { circle } else { circle.reversed() };
                Ok(circle.enclosed_area())
            }
        }
    }

    pub fn rotated(&self, rot: &Rotation3<f64>) -> Net {
        let mut net = self.clone();
        for v in &mut net.vertices {
            v.point = v.point.rotated(rot);
        }
        for e in &mut net.edges {
            e.geometry = e.geometry.rotated(rot);
        }
        net
    }

    /// Copy with region pressures replaced.
    pub fn with_pressures(&self, pressures: &BTreeMap<RegionId, f64>) -> Net {
        let mut net = self.clone();
        for r in &mut net.regions {
            if let Some(p) = pressures.get(&r.id) {
                r.pressure = *p;
            }
        }
        net
    }
}

/// Area of every region, summed over its faces.
pub fn region_areas(net: &Net) -> Result<BTreeMap<RegionId, f64>, NetError> {
    let mut areas: BTreeMap<RegionId, f64> = net.regions.iter().map(|r| (r.id, 0.0)).collect();
    for face in &net.faces {
        *areas.get_mut(&face.region).expect("checked at construction") += net.face_area(face)?;
    }
    Ok(areas)
}

/// Sum of edge lengths, each interface counted once.
pub fn total_perimeter(net: &Net) -> f64 {
    net.edges.iter().map(EdgeRec::length).sum()
}
