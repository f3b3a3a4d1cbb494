//! Constant-curvature fits to optimized polylines.

use std::collections::BTreeMap;

use nalgebra::{Matrix3, SymmetricEigen};

use super::dnet::DiscretizedNet;
use crate::geom::{Arc, GeomError, SpherePoint, Vec3};
use crate::net::{validate::sorted_gaps, EdgeId, EdgeRec, Net, NetError, RegionId, RegionRec, Vertex, VertexId};

#[derive(Debug, thiserror::Error)]
pub enum FitError {
    #[error("edge {edge} has {points} points; a circle fit needs at least 3")]
    TooShort { edge: EdgeId, points: usize },
    #[error("edge {edge}: {source}")]
    Geometry { edge: EdgeId, source: GeomError },
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Circle through a polyline, as the plane `normal · p = offset` with the
/// polyline running counterclockwise around `normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    pub normal: Vec3,
    pub offset: f64,
    /// Signed geodesic curvature, positive when bending to the left.
    pub kappa: f64,
    /// Largest distance of a point from the fitted circle, in radians.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFit {
    pub edge: EdgeId,
    pub fit: CircleFit,
    /// `|κ − (p_left − p_right)|`.
    pub pressure_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexAngles {
    pub vertex: VertexId,
    pub angles_deg: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStructure {
    pub edges: Vec<EdgeFit>,
    pub vertices: Vec<VertexAngles>,
}

impl EdgeStructure {
    pub fn max_abs_kappa(&self) -> f64 {
        self.edges.iter().map(|e| e.fit.kappa.abs()).fold(0.0, f64::max)
    }

    pub fn max_deviation(&self) -> f64 {
        self.edges.iter().map(|e| e.fit.deviation).fold(0.0, f64::max)
    }

    pub fn max_pressure_gap(&self) -> f64 {
        self.edges.iter().map(|e| e.pressure_gap).fold(0.0, f64::max)
    }

    /// Largest departure of a meeting angle from 120°.
    pub fn max_angle_error_deg(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|v| v.angles_deg.iter())
            .map(|a| (a - 120.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Least-squares plane through the points; its intersection with the sphere
/// is the fitted circle.
pub fn fit_circle(points: &[Vec3], closed: bool) -> Option<CircleFit> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let mean = points.iter().sum::<Vec3>() / n;
    let mut cov = Matrix3::zeros();
    for p in points {
        let q = p - mean;
        cov += q * q.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let smallest = eig.eigenvalues.imin();
    let mut normal: Vec3 = eig.eigenvectors.column(smallest).into_owned().normalize();
    let count = if closed { points.len() } else { points.len() - 1 };
    let winding: f64 = (0..count)
        .map(|i| points[i].cross(&points[(i + 1) % points.len()]).dot(&normal))
        .sum();
    if winding < 0.0 {
        normal = -normal;
    }
    let offset = normal.dot(&mean).clamp(-1.0, 1.0);
    let radius = offset.acos();
    let deviation = points
        .iter()
        .map(|p| (normal.dot(p).clamp(-1.0, 1.0).acos() - radius).abs())
        .fold(0.0, f64::max);
    Some(CircleFit {
        normal,
        offset,
        kappa: offset / (1.0 - offset * offset).sqrt(),
        deviation,
    })
}

fn edge_points(dnet: &DiscretizedNet, nodes: &[usize]) -> Vec<Vec3> {
    nodes.iter().map(|&i| dnet.points()[i]).collect()
}

fn fit_edges(dnet: &DiscretizedNet) -> Result<Vec<CircleFit>, FitError> {
    dnet.edges()
        .iter()
        .map(|e| {
            fit_circle(&edge_points(dnet, &e.nodes), e.closed).ok_or(FitError::TooShort {
                edge: e.id,
                points: e.nodes.len(),
            })
        })
        .collect()
}

/// Fits a circle to every edge, measures the meeting angles at every vertex
/// from the fitted tangents, and compares each fitted curvature with the
/// pressure jump across the edge.
pub fn estimate_edge_structure(
    dnet: &DiscretizedNet,
    pressures: &BTreeMap<RegionId, f64>,
) -> Result<EdgeStructure, FitError> {
    let fits = fit_edges(dnet)?;
    let pressure = |r: RegionId| pressures.get(&r).copied().unwrap_or(0.0);
    let mut tangents = vec![Vec::new(); dnet.vertex_count()];
    let mut edges = Vec::with_capacity(fits.len());
    for (e, fit) in dnet.edges().iter().zip(&fits) {
        if !e.closed {
            let (first, last) = (e.nodes[0], e.nodes[e.nodes.len() - 1]);
            tangents[first].push(fit.normal.cross(&dnet.points()[first]));
            tangents[last].push(-fit.normal.cross(&dnet.points()[last]));
        }
        edges.push(EdgeFit {
            edge: e.id,
            fit: *fit,
            pressure_gap: (fit.kappa - (pressure(e.left_region) - pressure(e.right_region))).abs(),
        });
    }
    let vertices = tangents
        .iter()
        .enumerate()
        .map(|(i, t)| VertexAngles {
            vertex: dnet.vertex_ids()[i],
            angles_deg: sorted_gaps(&dnet.points()[i], t).iter().map(|a| a.to_degrees()).collect(),
        })
        .collect();
    Ok(EdgeStructure { edges, vertices })
}

/// Replaces every polyline by its fitted arc. Arc centers are nudged to be
/// equidistant from both endpoints so the arc closes exactly.
pub fn to_net(dnet: &DiscretizedNet, pressures: &BTreeMap<RegionId, f64>) -> Result<Net, FitError> {
    let fits = fit_edges(dnet)?;
    let vertices: Vec<Vertex> = dnet
        .vertex_ids()
        .iter()
        .enumerate()
        .map(|(i, &id)| Vertex { id, point: dnet.point(i) })
        .collect();
    let mut edges = Vec::with_capacity(fits.len());
    for (e, fit) in dnet.edges().iter().zip(&fits) {
        let geometry = |source| FitError::Geometry { edge: e.id, source };
        if e.closed {
            let center = SpherePoint::from_vec(fit.normal).map_err(geometry)?;
            edges.push(EdgeRec::closed_loop(e.id, center, fit.kappa, e.left_region, e.right_region)?);
            continue;
        }
        let (first, last) = (e.nodes[0], e.nodes[e.nodes.len() - 1]);
        let (a, b) = (dnet.points()[first], dnet.points()[last]);
        let chord = a - b;
        let center = fit.normal - (fit.normal.dot(&chord) / chord.norm_squared()) * chord;
        let arc = Arc::from_center(
            dnet.point(first),
            dnet.point(last),
            SpherePoint::from_vec(center).map_err(geometry)?,
        )
        .map_err(geometry)?;
        edges.push(EdgeRec::from_arc(
            e.id,
            dnet.vertex_ids()[first],
            dnet.vertex_ids()[last],
            e.left_region,
            e.right_region,
            arc,
        ));
    }
    let regions = dnet
        .regions()
        .iter()
        .map(|&(id, target_area)| RegionRec {
            id,
            target_area,
            pressure: pressures.get(&id).copied().unwrap_or(0.0),
        })
        .collect();
    Ok(Net::new(vertices, edges, regions, dnet.skeleton().faces().to_vec())?)
}
