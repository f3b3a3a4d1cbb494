//! Perimeter-minimizing partitions of the unit sphere into regions of
//! prescribed area.
//!
//! * [`geom`]: points, constant-curvature arcs, Gauss-Bonnet areas and the
//!   isoperimetric profile.
//! * [`net`]: trivalent curve networks with region labels, validators and
//!   the JSON file format.
//! * [`catalog`]: the five regular partitions for 2, 3, 4, 6 and 12 regions.
//! * [`verifier`]: interval-arithmetic certification of the numeric
//!   inequalities behind the optimality of the tetrahedral partition.
//! * [`optimizer`]: augmented-Lagrangian perimeter minimization over
//!   discretized networks.

pub mod catalog;
pub mod geom;
pub mod json;
pub mod net;
pub mod optimizer;
pub mod verifier;

pub use geom::{
    arc_between, circle_for_area, exterior_angle, isoperimetric_profile, polygon_area, spherical_distance,
    split_profile, Arc, CircleSpec, GeomError, PolygonBoundary, SpherePoint,
};
