//! Net file format (JSON, `version` 1).
//!
//! ```text
//! { "version": 1,
//!   "vertices": [{"id", "xyz": [x, y, z]}],
//!   "edges":    [{"id", "from", "to", "kappa", "left_region", "right_region", "minor", "center"?}],
//!   "regions":  [{"id", "target_area", "pressure"}],
//!   "faces":    [{"id", "region", "boundary": [signed edge ids]}] }
//! ```
//!
//! Edge ids are positive; a negative entry in a face boundary means the edge
//! is traversed from `to` to `from`. `center` is written only when the other
//! fields do not determine the arc: for closed loops (`from` and `to` are
//! null) and for half great circles between antipodal vertices.

use serde::{Deserialize, Serialize};

use super::{DirectedEdge, EdgeGeometry, EdgeRec, Face, Net, NetError, RegionRec, Vertex};
use crate::geom::{arc_between, Arc, SpherePoint, Vec3};
use crate::json;

pub const NET_FORMAT_VERSION: u32 = 1;

/// Norm deviations up to this are accepted silently.
const SILENT_NORM_TOL: f64 = 1e-12;
/// Norm deviations up to this are normalized with a warning.
const NORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetFile {
    version: u32,
    vertices: Vec<VertexEntry>,
    edges: Vec<EdgeEntry>,
    regions: Vec<RegionEntry>,
    faces: Vec<FaceEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: u32,
    xyz: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeEntry {
    id: u32,
    from: Option<u32>,
    to: Option<u32>,
    kappa: f64,
    left_region: u32,
    right_region: u32,
    minor: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionEntry {
    id: u32,
    target_area: f64,
    pressure: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceEntry {
    id: u32,
    region: u32,
    boundary: Vec<i64>,
}

pub fn parse_net(text: &str) -> Result<Net, NetError> {
    parse_net_with_warnings(text).map(|(net, _)| net)
}

/// Parses a net file, also returning the non-fatal diagnostics (vertices
/// that were slightly off the unit sphere and got normalized).
pub fn parse_net_with_warnings(text: &str) -> Result<(Net, Vec<String>), NetError> {
    let file: NetFile = serde_json::from_str(text).map_err(|e| NetError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.version != NET_FORMAT_VERSION {
        return Err(NetError::Version(file.version));
    }
    let mut warnings = Vec::new();

    let mut vertices = Vec::with_capacity(file.vertices.len());
    for v in &file.vertices {
        let raw = Vec3::from(v.xyz);
        let norm = raw.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZE_TOL {
            return Err(NetError::NotUnit { vertex: v.id, norm });
        }
        let point = if (norm - 1.0).abs() > SILENT_NORM_TOL {
            let msg = format!("vertex {} had norm {norm:.17}; normalized", v.id);
            log::warn!("{msg}");
            warnings.push(msg);
            SpherePoint::from_vec(raw)
        } else {
            Ok(SpherePoint::from_unit(raw))
        }
        .map_err(|source| geometry_error(format!("vertex {}", v.id), source))?;
        vertices.push(Vertex { id: v.id, point });
    }
    let position = |id: u32| vertices.iter().find(|v| v.id == id).map(|v| v.point);

    let mut edges = Vec::with_capacity(file.edges.len());
    for e in &file.edges {
        let center = e
            .center
            .map(|c| SpherePoint::from_vec(Vec3::from(c)))
            .transpose()
            .map_err(|source| geometry_error(format!("edge {} center", e.id), source))?;
        let edge = match (e.from, e.to) {
            (None, None) => {
                let center = center.ok_or_else(|| NetError::MalformedEdge {
                    edge: e.id,
                    reason: "a closed loop needs a center".into(),
                })?;
                EdgeRec::closed_loop(e.id, center, e.kappa, e.left_region, e.right_region)?
            }
            (Some(from), Some(to)) => {
                let p = position(from).ok_or(NetError::UnknownVertex { edge: e.id, vertex: from })?;
                let q = position(to).ok_or(NetError::UnknownVertex { edge: e.id, vertex: to })?;
                let arc = match center {
                    Some(c) => Arc::from_center(p, q, c),
                    None => arc_between(p, q, e.kappa, e.minor),
                }
                .map_err(|source| geometry_error(format!("edge {}", e.id), source))?;
                if (arc.kappa() - e.kappa).abs() > 1e-9 * (1.0 + e.kappa.abs()) {
                    return Err(NetError::MalformedEdge {
                        edge: e.id,
                        reason: format!("kappa {} disagrees with its center ({})", e.kappa, arc.kappa()),
                    });
                }
                EdgeRec {
                    kappa: e.kappa,
                    ..EdgeRec::from_arc(e.id, from, to, e.left_region, e.right_region, arc)
                }
            }
            _ => {
                return Err(NetError::MalformedEdge {
                    edge: e.id,
                    reason: "`from` and `to` must both be set or both be null".into(),
                })
            }
        };
        edges.push(edge);
    }

    let regions = file
        .regions
        .iter()
        .map(|r| RegionRec {
            id: r.id,
            target_area: r.target_area,
            pressure: r.pressure,
        })
        .collect();

    let mut faces = Vec::with_capacity(file.faces.len());
    for f in &file.faces {
        let mut boundary = Vec::with_capacity(f.boundary.len());
        for &signed in &f.boundary {
            let edge = u32::try_from(signed.unsigned_abs()).map_err(|_| NetError::UnknownEdge {
                face: f.id,
                edge: u32::MAX,
            })?;
            if edge == 0 {
                return Err(NetError::UnknownEdge { face: f.id, edge: 0 });
            }
            boundary.push(DirectedEdge::new(edge, signed > 0));
        }
        faces.push(Face {
            id: f.id,
            region: f.region,
            boundary,
        });
    }

    Ok((Net::new(vertices, edges, regions, faces)?, warnings))
}

fn geometry_error(context: String, source: crate::geom::GeomError) -> NetError {
    NetError::Geometry { context, source }
}

/// Writes `net` in the file format, reals at 17 significant digits.
pub fn serialize_net(net: &Net) -> String {
    let file = NetFile {
        version: NET_FORMAT_VERSION,
        vertices: net
            .vertices()
            .iter()
            .map(|v| VertexEntry {
                id: v.id,
                xyz: v.point.to_array(),
            })
            .collect(),
        edges: net.edges().iter().map(|e| edge_entry(net, e)).collect(),
        regions: net
            .regions()
            .iter()
            .map(|r| RegionEntry {
                id: r.id,
                target_area: r.target_area,
                pressure: r.pressure,
            })
            .collect(),
        faces: net
            .faces()
            .iter()
            .map(|f| FaceEntry {
                id: f.id,
                region: f.region,
                boundary: f.boundary.iter().map(DirectedEdge::signed).collect(),
            })
            .collect(),
    };
    json::to_string(&file).expect("net files contain only plain data")
}

fn edge_entry(net: &Net, e: &EdgeRec) -> EdgeEntry {
    let (from, to, minor, center) = match (&e.geometry, e.endpoints) {
        (EdgeGeometry::Loop(c), _) => (None, None, true, Some(c.center.to_array())),
        (EdgeGeometry::Arc(arc), Some((a, b))) => {
            let p = net.vertex(a).expect("validated").point;
            let q = net.vertex(b).expect("validated").point;
            let rebuilt = arc_between(p, q, e.kappa, arc.is_minor());
            let reproducible = rebuilt.is_ok_and(|r| r.center() == arc.center());
            let center = (!reproducible).then(|| arc.center().to_array());
            (Some(a), Some(b), arc.is_minor(), center)
        }
        (EdgeGeometry::Arc(_), None) => unreachable!("checked at construction"),
    };
    EdgeEntry {
        id: e.id,
        from,
        to,
        kappa: e.kappa,
        left_region: e.left_region,
        right_region: e.right_region,
        minor,
        center,
    }
}
