//! Orthographic SVG of a net: the hemisphere facing a fixed oblique viewer
//! on the left, the opposite hemisphere (seen from behind) on the right.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use sphere_partition::geom::Vec3;
use sphere_partition::net::{EdgeGeometry, Face, Net};

const RADIUS: f64 = 200.0;
const MARGIN: f64 = 20.0;
const SAMPLES_PER_RADIAN: f64 = 60.0;
const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
    "#8cd17d", "#d37295",
];

/// Orthonormal frame with the viewer on the `axis` side.
struct View {
    right: Vec3,
    up: Vec3,
    axis: Vec3,
    cx: f64,
    cy: f64,
}

impl View {
    fn front(cx: f64, cy: f64) -> Self {
        // oblique, so vertices at the poles or on the axes stay off the rim
        let axis = Vec3::new(0.35, -0.55, 0.76).normalize();
        let right = Vec3::z().cross(&axis).normalize();
        let up = axis.cross(&right);
        Self { right, up, axis, cx, cy }
    }

    fn behind(front: &View, cx: f64, cy: f64) -> Self {
        Self {
            right: -front.right,
            up: front.up,
            axis: -front.axis,
            cx,
            cy,
        }
    }

    /// Orthographic coordinates on the unit disk, y up.
    fn coords(&self, p: &Vec3) -> (f64, f64) {
        (p.dot(&self.right), p.dot(&self.up))
    }

    fn to_screen(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (self.cx + RADIUS * x, self.cy - RADIUS * y)
    }

    fn visible(&self, p: &Vec3) -> bool {
        p.dot(&self.axis) >= 0.0
    }

    /// Point where the segment `a`-`b` meets the rim, `a` visible and `b` not.
    fn rim_crossing(&self, a: &Vec3, b: &Vec3) -> (f64, f64) {
        let (da, db) = (a.dot(&self.axis), b.dot(&self.axis));
        let p = b * da - a * db;
        let (x, y) = self.coords(&p);
        let r = x.hypot(y);
        (x / r, y / r)
    }

    /// Visible part of a face as closed polygons in disk coordinates.
    /// `None` when the boundary stays on one side of the rim, in which
    /// case the face is either all in view or all out of it.
    fn clip(&self, boundary: &[Vec3]) -> Option<Vec<Vec<(f64, f64)>>> {
        let n = boundary.len();
        let start = (0..n).find(|&i| !self.visible(&boundary[i]) && self.visible(&boundary[(i + 1) % n]))?;
        // runs of visible points, each entering and leaving across the rim
        let mut runs: Vec<Vec<(f64, f64)>> = Vec::new();
        let mut run: Vec<(f64, f64)> = Vec::new();
        for k in 0..n {
            let (a, b) = (&boundary[(start + k) % n], &boundary[(start + k + 1) % n]);
            match (self.visible(a), self.visible(b)) {
                (false, true) => {
                    run = vec![self.rim_crossing(b, a)];
                    run.push(self.coords(b));
                }
                (true, true) => run.push(self.coords(b)),
                (true, false) => {
                    run.push(self.rim_crossing(a, b));
                    runs.push(std::mem::take(&mut run));
                }
                (false, false) => {}
            }
        }
        let angle = |(x, y): (f64, f64)| y.atan2(x);
        let mut used = vec![false; runs.len()];
        let mut pieces = Vec::new();
        while let Some(first) = used.iter().position(|u| !u) {
            let mut piece = Vec::new();
            let mut current = first;
            loop {
                used[current] = true;
                piece.extend_from_slice(&runs[current]);
                // the face is on the left, so the rim is followed counterclockwise
                let exit = angle(*runs[current].last().expect("runs are nonempty"));
                let sweep = |j: usize| (angle(runs[j][0]) - exit).rem_euclid(TAU);
                let next = (0..runs.len())
                    .min_by(|&i, &j| sweep(i).total_cmp(&sweep(j)))
                    .expect("at least one run");
                let steps = (sweep(next) * SAMPLES_PER_RADIAN).ceil() as usize;
                for s in 1..steps {
                    let t = exit + sweep(next) * s as f64 / steps as f64;
                    piece.push((t.cos(), t.sin()));
                }
                if used[next] {
                    break;
                }
                current = next;
            }
            pieces.push(piece);
        }
        Some(pieces)
    }

    /// Whether the face contains the point at the center of the view:
    /// stereographic projection from the far pole sends the center to the
    /// origin; the face is on the left of its boundary.
    fn centered_in(&self, boundary: &[Vec3]) -> bool {
        let planar: Vec<(f64, f64)> = boundary
            .iter()
            .map(|p| {
                let d = 1.0 + p.dot(&self.axis);
                (p.dot(&self.right) / d, p.dot(&self.up) / d)
            })
            .collect();
        let n = planar.len();
        let mut signed_area = 0.0;
        let mut winding = 0.0;
        for i in 0..n {
            let (a, b) = (planar[i], planar[(i + 1) % n]);
            signed_area += a.0 * b.1 - a.1 * b.0;
            winding += (a.0 * b.1 - a.1 * b.0).atan2(a.0 * b.0 + a.1 * b.1);
        }
        let encloses = winding.abs() > std::f64::consts::PI;
        encloses == (signed_area > 0.0)
    }
}

fn sample_edge(geometry: &EdgeGeometry) -> Vec<Vec3> {
    let count = |len: f64| ((len * SAMPLES_PER_RADIAN).ceil() as usize).max(8);
    match geometry {
        EdgeGeometry::Arc(arc) => arc.sample(count(arc.length())).iter().map(|p| *p.vec()).collect(),
        EdgeGeometry::Loop(circle) => {
            let mut pts: Vec<Vec3> = circle.sample(count(circle.perimeter()), None).iter().map(|p| *p.vec()).collect();
            pts.push(pts[0]);
            pts
        }
    }
}

fn face_polygon(net: &Net, face: &Face) -> Vec<Vec3> {
    let mut out = Vec::new();
    for d in &face.boundary {
        let Some(edge) = net.edge(d.edge) else { continue };
        let mut pts = sample_edge(&edge.geometry);
        if !d.forward {
            pts.reverse();
        }
        pts.pop();
        out.extend(pts);
    }
    out
}

fn path(points: &[(f64, f64)], close: bool) -> String {
    let mut d = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { "M" } else { "L" });
    }
    if close {
        d.push('Z');
    }
    d.trim_end().to_string()
}

fn color(region: u32) -> &'static str {
    PALETTE[region as usize % PALETTE.len()]
}

fn draw_hemisphere(out: &mut String, net: &Net, view: &View, label: &str) {
    let _ = writeln!(out, "  <g>");
    let polygons: Vec<(u32, Vec<Vec3>)> = net.faces().iter().map(|f| (f.region, face_polygon(net, f))).collect();
    let background = polygons
        .iter()
        .find(|(_, poly)| view.centered_in(poly))
        .map_or("#ffffff", |(r, _)| color(*r));
    let _ = writeln!(
        out,
        r#"    <circle cx="{:.2}" cy="{:.2}" r="{RADIUS:.2}" fill="{background}"/>"#,
        view.cx, view.cy
    );
    for (region, poly) in &polygons {
        let pieces = match view.clip(poly) {
            Some(pieces) => pieces,
            None if view.visible(&poly[0]) && !view.centered_in(poly) => vec![poly.iter().map(|p| view.coords(p)).collect()],
            None => continue,
        };
        for piece in pieces {
            let projected: Vec<(f64, f64)> = piece.into_iter().map(|c| view.to_screen(c)).collect();
            let _ = writeln!(out, r#"    <path d="{}" fill="{}"/>"#, path(&projected, true), color(*region));
        }
    }
    for edge in net.edges() {
        let pts = sample_edge(&edge.geometry);
        let mut run: Vec<(f64, f64)> = Vec::new();
        let mut runs = Vec::new();
        for p in &pts {
            if view.visible(p) {
                run.push(view.to_screen(view.coords(p)));
            } else if run.len() > 1 {
                runs.push(std::mem::take(&mut run));
            } else {
                run.clear();
            }
        }
        if run.len() > 1 {
            runs.push(run);
        }
        for r in runs {
            let _ = writeln!(
                out,
                r##"    <path d="{}" fill="none" stroke="#222222" stroke-width="2"/>"##,
                path(&r, false)
            );
        }
    }
    for v in net.vertices() {
        if view.visible(v.point.vec()) {
            let (x, y) = view.to_screen(view.coords(v.point.vec()));
            let _ = writeln!(out, r##"    <circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#222222"/>"##);
        }
    }
    let _ = writeln!(
        out,
        r##"    <circle cx="{:.2}" cy="{:.2}" r="{RADIUS:.2}" fill="none" stroke="#555555" stroke-width="1"/>"##,
        view.cx, view.cy
    );
    let _ = writeln!(
        out,
        r#"    <text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="14">{label}</text>"#,
        view.cx,
        view.cy + RADIUS + 16.0
    );
    let _ = writeln!(out, "  </g>");
}

pub fn svg(net: &Net) -> String {
    let width = 4.0 * RADIUS + 4.0 * MARGIN;
    let height = 2.0 * RADIUS + 2.0 * MARGIN + 24.0;
    let front = View::front(MARGIN + RADIUS, MARGIN + RADIUS);
    let back = View::behind(&front, 3.0 * MARGIN + 3.0 * RADIUS, MARGIN + RADIUS);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    draw_hemisphere(&mut out, net, &front, "near side");
    draw_hemisphere(&mut out, net, &back, "far side");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use sphere_partition::catalog::{build_named_net, CatalogName};
    use std::f64::consts::PI;

    #[test]
    fn exactly_one_face_holds_each_view_center() {
        for name in CatalogName::ALL {
            let net = build_named_net(name).net;
            let front = View::front(0.0, 0.0);
            let back = View::behind(&front, 0.0, 0.0);
            for view in [&front, &back] {
                let count = net.faces().iter().filter(|f| view.centered_in(&face_polygon(&net, f))).count();
                assert_eq!(count, 1, "{name}");
            }
        }
    }

    fn shoelace(poly: &[(f64, f64)]) -> f64 {
        let n = poly.len();
        (0..n)
            .map(|i| {
                let (a, b) = (poly[i], poly[(i + 1) % n]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum::<f64>()
            / 2.0
    }

    #[test]
    fn clipped_faces_tile_the_disk() {
        let mut tiled = 0;
        for name in CatalogName::ALL {
            let net = build_named_net(name).net;
            let front = View::front(0.0, 0.0);
            let back = View::behind(&front, 0.0, 0.0);
            for view in [&front, &back] {
                let mut total = 0.0;
                let mut all_cross = true;
                for f in net.faces() {
                    let poly = face_polygon(&net, f);
                    match view.clip(&poly) {
                        Some(pieces) => {
                            for piece in pieces {
                                let a = shoelace(&piece);
                                assert!(a > 0.0, "{name}: {a}");
                                total += a;
                            }
                        }
                        None => all_cross = false,
                    }
                }
                assert!(total <= PI + 1e-9, "{name}: {total}");
                if all_cross {
                    // polygons inscribed at 60 samples per radian
                    assert!((total - PI).abs() < 1e-3, "{name}: {total}");
                    tiled += 1;
                }
            }
        }
        assert!(tiled >= 2, "{tiled}");
    }

    #[test]
    fn svg_has_both_hemispheres() {
        let s = svg(&build_named_net(CatalogName::Cubical).net);
        assert!(s.starts_with("<svg"));
        assert!(s.contains("near side") && s.contains("far side"));
        // 6 faces, minus the one behind each disk, per hemisphere
        assert!(s.matches(r#"fill="#).count() >= 2 * 6);
    }
}
