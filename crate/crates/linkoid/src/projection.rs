//! Projection of 3D polygonal curves to linkoid diagrams.
//!
//! A direction on the sphere determines an orthogonal projection; every
//! transversal double point of the projected polylines becomes a crossing,
//! with over/under decided by depth along the direction. Directions that
//! produce non-generic pictures (triple points, tangencies, vertex or
//! endpoint coincidences, near-parallel overlaps, shallow crossings) are
//! reported as typed degeneracies so the caller can redraw; they form a
//! measure-zero set.
//!
//! Curves are rescaled to unit bounding-box diagonal before projecting, so
//! the tolerance `eps` is in normalized units. The polynomial is scale-free.

use crate::diagram::{Arc, ArcEnd, Attach, Crossing, LinkoidDiagram, PortRef};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_PROJECTION_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("component {0} needs at least {1} points")]
    TooFewPoints(usize, usize),
    #[error("component {0} repeats consecutive point {1}")]
    RepeatedPoint(usize, usize),
    #[error("closure interpolation needs all components open (component {0} is closed)")]
    NotOpen(usize),
    #[error("closure parameter {0} outside [0, 1]")]
    BadParameter(f64),
    #[error("curve input: {0}")]
    Parse(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum ProjectionError {
    #[error("direction must be a unit vector (|xi| = {0})")]
    BadDirection(f64),
    #[error("eps must be positive")]
    BadEps,
    #[error("empty curve collection")]
    EmptyCurves,
}

/// One polygonal component: an ordered point sequence, open or closed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveComponent {
    pub points: Vec<[f64; 3]>,
    #[serde(default)]
    pub closed: bool,
}

/// An ordered collection of polygonal components in 3-space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSet {
    pub components: Vec<CurveComponent>,
}

impl CurveSet {
    pub fn new(components: Vec<CurveComponent>) -> Result<Self, CurveError> {
        let set = CurveSet { components };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        for (i, c) in self.components.iter().enumerate() {
            let min = if c.closed { 3 } else { 2 };
            if c.points.len() < min {
                return Err(CurveError::TooFewPoints(i, min));
            }
            for k in 1..c.points.len() {
                if c.points[k] == c.points[k - 1] {
                    return Err(CurveError::RepeatedPoint(i, k));
                }
            }
            if c.closed && c.points[0] == *c.points.last().unwrap() {
                return Err(CurveError::RepeatedPoint(i, 0));
            }
        }
        Ok(())
    }

    /// Near-self-intersection report (general position is all the math
    /// needs, so this is advisory, not an error).
    pub fn simplicity_warnings(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let segs = all_segments_3d(self);
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (a, b) = (&segs[i], &segs[j]);
                if a.comp == b.comp && adjacent_edges(self, a, b) {
                    continue;
                }
                let d = segment_segment_distance_3d(a.p0, a.p1, b.p0, b.p1);
                if d < tol {
                    out.push(format!(
                        "components {} and {} pass within {d:.2e} (segments {} and {})",
                        a.comp, b.comp, a.edge, b.edge
                    ));
                }
            }
        }
        out
    }

    /// JSON reader: {"components": [{"points": [[x,y,z],...], "closed": false}, ...]}
    pub fn parse_json(text: &str) -> Result<Self, CurveError> {
        let set: CurveSet =
            serde_json::from_str(text).map_err(|e| CurveError::Parse(e.to_string()))?;
        set.validate()?;
        Ok(set)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("curve set serializes")
    }

    /// Plain-text reader for bracketed coordinate lists:
    /// `NAME = [[x,y,z],[x,y,z],...]`, one open component per list, in
    /// order of appearance.
    pub fn parse_text(text: &str) -> Result<Self, CurveError> {
        let mut components = Vec::new();
        let bytes: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == '=' {
                // scan forward to the list start
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_whitespace() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == '[' {
                    let mut depth = 0usize;
                    let start = j;
                    let mut end = None;
                    for (k, &ch) in bytes.iter().enumerate().skip(start) {
                        match ch {
                            '[' => depth += 1,
                            ']' => {
                                depth -= 1;
                                if depth == 0 {
                                    end = Some(k);
                                    break;
                                }
                            }
                            _ => {}
                        }
                    }
                    let end = end.ok_or_else(|| {
                        CurveError::Parse("unbalanced brackets in coordinate list".into())
                    })?;
                    let body: String = bytes[start..=end].iter().collect();
                    let points: Vec<[f64; 3]> = serde_json::from_str(&body)
                        .map_err(|e| CurveError::Parse(format!("bad coordinate list: {e}")))?;
                    components.push(CurveComponent {
                        points,
                        closed: false,
                    });
                    i = end;
                }
            }
            i += 1;
        }
        if components.is_empty() {
            return Err(CurveError::Parse("no coordinate lists found".into()));
        }
        CurveSet::new(components)
    }

    /// Move every endpoint pair toward closure: appends
    /// last + s*(first - last) to each open component; at s = 1 the
    /// component closes up (the coincident point is not stored twice).
    pub fn interpolate_closure(&self, s: f64) -> Result<CurveSet, CurveError> {
        if !(0.0..=1.0).contains(&s) {
            return Err(CurveError::BadParameter(s));
        }
        let mut out = self.clone();
        for (i, c) in out.components.iter_mut().enumerate() {
            if c.closed {
                return Err(CurveError::NotOpen(i));
            }
            if s == 1.0 {
                c.closed = true;
            } else {
                let last = *c.points.last().unwrap();
                let first = c.points[0];
                let p = [
                    last[0] + s * (first[0] - last[0]),
                    last[1] + s * (first[1] - last[1]),
                    last[2] + s * (first[2] - last[2]),
                ];
                c.points.push(p);
            }
        }
        Ok(out)
    }

    /// Apply a point transform to every vertex.
    pub fn map_points(&self, mut f: impl FnMut([f64; 3]) -> [f64; 3]) -> CurveSet {
        CurveSet {
            components: self
                .components
                .iter()
                .map(|c| CurveComponent {
                    points: c.points.iter().map(|&p| f(p)).collect::<Vec<_>>(),
                    closed: c.closed,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegeneracyReason {
    NearParallel,
    TriplePoint,
    EndpointOnStrand,
    VertexCoincidence,
    /// depth difference at a crossing below eps (a near-tangency in 3-space)
    DepthTangency,
    /// guards missed a borderline configuration and the assembled diagram
    /// failed validation; treat like any other degeneracy and redraw
    Inconsistent,
}

#[derive(Debug, Clone)]
pub struct Degeneracy {
    pub reason: DegeneracyReason,
    pub detail: String,
    /// offending (component, edge) indices
    pub segments: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub enum ProjectionOutcome {
    Diagram(LinkoidDiagram),
    Degenerate(Degeneracy),
}

impl ProjectionOutcome {
    pub fn diagram(self) -> Option<LinkoidDiagram> {
        match self {
            ProjectionOutcome::Diagram(d) => Some(d),
            ProjectionOutcome::Degenerate(_) => None,
        }
    }
}

struct Seg {
    comp: usize,
    edge: usize,
    p0: [f64; 3],
    p1: [f64; 3],
}

fn all_segments_3d(c: &CurveSet) -> Vec<Seg> {
    let mut out = Vec::new();
    for (ci, comp) in c.components.iter().enumerate() {
        let n = comp.points.len();
        let edges = if comp.closed { n } else { n - 1 };
        for e in 0..edges {
            out.push(Seg {
                comp: ci,
                edge: e,
                p0: comp.points[e],
                p1: comp.points[(e + 1) % n],
            });
        }
    }
    out
}

fn adjacent_edges(c: &CurveSet, a: &Seg, b: &Seg) -> bool {
    if a.comp != b.comp {
        return false;
    }
    if a.edge == b.edge {
        return true;
    }
    let n = c.components[a.comp].points.len();
    let closed = c.components[a.comp].closed;
    if closed {
        let edges = n;
        let d = (a.edge + edges - b.edge) % edges;
        d == 1 || d == edges - 1
    } else {
        a.edge.abs_diff(b.edge) == 1
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn segment_segment_distance_3d(p1: [f64; 3], p2: [f64; 3], q1: [f64; 3], q2: [f64; 3]) -> f64 {
    // closest distance between two 3D segments, clamped parametrization
    let d1 = sub(p2, p1);
    let d2 = sub(q2, q1);
    let r = sub(p1, q1);
    let a = dot3(d1, d1);
    let e = dot3(d2, d2);
    let f = dot3(d2, r);
    let c = dot3(d1, r);
    let b = dot3(d1, d2);
    let denom = a * e - b * b;
    let mut s = if denom.abs() > 1e-300 {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = if e > 0.0 { (b * s + f) / e } else { 0.0 };
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    let cp = [p1[0] + s * d1[0], p1[1] + s * d1[1], p1[2] + s * d1[2]];
    let cq = [q1[0] + t * d2[0], q1[1] + t * d2[1], q1[2] + t * d2[2]];
    norm3(sub(cp, cq))
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

struct FlatSeg {
    comp: usize,
    edge: usize,
    a: [f64; 2],
    b: [f64; 2],
    za: f64,
    zb: f64,
}

struct FoundCrossing {
    seg1: usize,
    t1: f64,
    seg2: usize,
    t2: f64,
    point: [f64; 2],
    /// true when seg1 is the over strand
    first_over: bool,
}

/// Project a curve collection along the unit direction `xi` and read off the
/// linkoid diagram of the picture, or report the degeneracy that prevents a
/// generic reading.
pub fn project(
    curves: &CurveSet,
    xi: [f64; 3],
    eps: f64,
) -> Result<ProjectionOutcome, ProjectionError> {
    if curves.components.is_empty() {
        return Err(ProjectionError::EmptyCurves);
    }
    let n = norm3(xi);
    if (n - 1.0).abs() > 1e-9 {
        return Err(ProjectionError::BadDirection(n));
    }
    if eps <= 0.0 {
        return Err(ProjectionError::BadEps);
    }
    let xi = [xi[0] / n, xi[1] / n, xi[2] / n];

    // rescale to unit bounding-box diagonal
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for c in &curves.components {
        for p in &c.points {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
    }
    let diag = norm3(sub(hi, lo)).max(f64::MIN_POSITIVE);
    let scale = 1.0 / diag;

    // orthonormal frame (u, v, xi), right-handed
    let k = (0..3)
        .min_by(|&a, &b| xi[a].abs().partial_cmp(&xi[b].abs()).unwrap())
        .unwrap();
    let mut ek = [0.0; 3];
    ek[k] = 1.0;
    let mut u = cross3(ek, xi);
    let un = norm3(u);
    u = [u[0] / un, u[1] / un, u[2] / un];
    let v = cross3(xi, u);

    // flatten: per component, projected vertices and depths (scaled),
    // dropping zero-length 3D edges
    let mut flat: Vec<FlatSeg> = Vec::new();
    let mut comp_edges: Vec<Vec<usize>> = Vec::new(); // flat indices per component in order
    for (ci, comp) in curves.components.iter().enumerate() {
        let mut pts: Vec<[f64; 3]> = Vec::with_capacity(comp.points.len());
        for &p in &comp.points {
            let q = [p[0] * scale, p[1] * scale, p[2] * scale];
            if pts.last() != Some(&q) {
                pts.push(q);
            }
        }
        if comp.closed && pts.len() > 1 && pts[0] == *pts.last().unwrap() {
            pts.pop();
        }
        let m = pts.len();
        let edges = if comp.closed { m } else { m - 1 };
        let mut idxs = Vec::with_capacity(edges);
        for e in 0..edges {
            let p0 = pts[e];
            let p1 = pts[(e + 1) % m];
            idxs.push(flat.len());
            flat.push(FlatSeg {
                comp: ci,
                edge: e,
                a: [dot3(p0, u), dot3(p0, v)],
                b: [dot3(p1, u), dot3(p1, v)],
                za: dot3(p0, xi),
                zb: dot3(p1, xi),
            });
        }
        comp_edges.push(idxs);
    }

    // vertex-proximity guard: any projected vertex close to a non-incident
    // projected segment makes the picture unstable
    for (ci, comp) in curves.components.iter().enumerate() {
        let closed = comp.closed;
        for (vi, idxs) in comp_edges[ci].iter().enumerate() {
            // vertex vi is the start vertex of this edge
            let vert = flat[*idxs].a;
            let is_endpoint = !closed && vi == 0;
            for (sj, s) in flat.iter().enumerate() {
                // skip segments incident to the vertex
                if s.comp == ci {
                    if s.edge == vi {
                        continue;
                    }
                    let edges = comp_edges[ci].len();
                    let prev = (vi + edges - 1) % edges;
                    if s.edge == prev && (closed || vi > 0) {
                        continue;
                    }
                }
                let d = point_segment_distance_2d(vert, s.a, s.b);
                if d < eps {
                    let reason = if is_endpoint {
                        DegeneracyReason::EndpointOnStrand
                    } else {
                        DegeneracyReason::VertexCoincidence
                    };
                    return Ok(ProjectionOutcome::Degenerate(Degeneracy {
                        reason,
                        detail: format!(
                            "vertex {vi} of component {ci} within {d:.2e} of a strand"
                        ),
                        segments: vec![(ci, vi), (flat[sj].comp, flat[sj].edge)],
                    }));
                }
            }
        }
        // the final vertex of an open component is not any edge's start
        if !closed {
            let last = flat[*comp_edges[ci].last().unwrap()].b;
            for (sj, s) in flat.iter().enumerate() {
                if s.comp == ci && s.edge + 1 == comp_edges[ci].len() {
                    continue;
                }
                let d = point_segment_distance_2d(last, s.a, s.b);
                if d < eps {
                    return Ok(ProjectionOutcome::Degenerate(Degeneracy {
                        reason: DegeneracyReason::EndpointOnStrand,
                        detail: format!("head of component {ci} within {d:.2e} of a strand"),
                        segments: vec![(ci, comp_edges[ci].len() - 1), (flat[sj].comp, flat[sj].edge)],
                    }));
                }
            }
        }
    }

    // pairwise transversal intersections
    let mut found: Vec<FoundCrossing> = Vec::new();
    for i in 0..flat.len() {
        for j in i + 1..flat.len() {
            let (s1, s2) = (&flat[i], &flat[j]);
            if s1.comp == s2.comp {
                let closed = curves.components[s1.comp].closed;
                let edges = comp_edges[s1.comp].len();
                let adjacent = if closed {
                    let d = (s1.edge + edges - s2.edge) % edges;
                    d == 1 || d == edges - 1
                } else {
                    s1.edge.abs_diff(s2.edge) == 1
                };
                if adjacent {
                    continue;
                }
            }
            let d1 = [s1.b[0] - s1.a[0], s1.b[1] - s1.a[1]];
            let d2 = [s2.b[0] - s2.a[0], s2.b[1] - s2.a[1]];
            let l1 = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
            let l2 = (d2[0] * d2[0] + d2[1] * d2[1]).sqrt();
            let denom = cross2(d1, d2);
            let r = [s2.a[0] - s1.a[0], s2.a[1] - s1.a[1]];
            if l1 < eps || l2 < eps {
                // an edge projecting to nearly a point is a tangency
                return Ok(ProjectionOutcome::Degenerate(Degeneracy {
                    reason: DegeneracyReason::NearParallel,
                    detail: "edge projects to a near-point".into(),
                    segments: vec![(s1.comp, s1.edge), (s2.comp, s2.edge)],
                }));
            }
            let sin_angle = denom.abs() / (l1 * l2);
            if sin_angle < eps {
                // parallel directions: degenerate only if they overlap
                let gap = segment_segment_distance_2d(s1.a, s1.b, s2.a, s2.b);
                if gap < eps {
                    return Ok(ProjectionOutcome::Degenerate(Degeneracy {
                        reason: DegeneracyReason::NearParallel,
                        detail: format!("near-parallel segments {gap:.2e} apart"),
                        segments: vec![(s1.comp, s1.edge), (s2.comp, s2.edge)],
                    }));
                }
                continue;
            }
            let t1 = cross2(r, d2) / denom;
            let t2 = cross2(r, d1) / denom;
            if !(0.0 < t1 && t1 < 1.0 && 0.0 < t2 && t2 < 1.0) {
                continue;
            }
            let z1 = s1.za + t1 * (s1.zb - s1.za);
            let z2 = s2.za + t2 * (s2.zb - s2.za);
            if (z1 - z2).abs() < eps {
                return Ok(ProjectionOutcome::Degenerate(Degeneracy {
                    reason: DegeneracyReason::DepthTangency,
                    detail: format!("depth gap {:.2e} at a crossing", (z1 - z2).abs()),
                    segments: vec![(s1.comp, s1.edge), (s2.comp, s2.edge)],
                }));
            }
            found.push(FoundCrossing {
                seg1: i,
                t1,
                seg2: j,
                t2,
                point: [s1.a[0] + t1 * d1[0], s1.a[1] + t1 * d1[1]],
                first_over: z1 > z2,
            });
        }
    }

    // crossing-crossing proximity (triple points)
    for a in 0..found.len() {
        for b in a + 1..found.len() {
            let dx = found[a].point[0] - found[b].point[0];
            let dy = found[a].point[1] - found[b].point[1];
            if (dx * dx + dy * dy).sqrt() < eps {
                let (s1, s2) = (&flat[found[a].seg1], &flat[found[b].seg1]);
                return Ok(ProjectionOutcome::Degenerate(Degeneracy {
                    reason: DegeneracyReason::TriplePoint,
                    detail: "two crossings coincide".into(),
                    segments: vec![(s1.comp, s1.edge), (s2.comp, s2.edge)],
                }));
            }
        }
    }

    match assemble(curves, &flat, &found) {
        Ok(d) => Ok(ProjectionOutcome::Diagram(d)),
        Err(e) => Ok(ProjectionOutcome::Degenerate(Degeneracy {
            reason: DegeneracyReason::Inconsistent,
            detail: format!("diagram assembly failed: {e}"),
            segments: Vec::new(),
        })),
    }
}

fn point_segment_distance_2d(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    let d = [p[0] - q[0], p[1] - q[1]];
    (d[0] * d[0] + d[1] * d[1]).sqrt()
}

fn segment_segment_distance_2d(a0: [f64; 2], a1: [f64; 2], b0: [f64; 2], b1: [f64; 2]) -> f64 {
    point_segment_distance_2d(a0, b0, b1)
        .min(point_segment_distance_2d(a1, b0, b1))
        .min(point_segment_distance_2d(b0, a0, a1))
        .min(point_segment_distance_2d(b1, a0, a1))
}

/// Build the linkoid diagram from the crossing list.
fn assemble(
    curves: &CurveSet,
    flat: &[FlatSeg],
    found: &[FoundCrossing],
) -> Result<LinkoidDiagram, crate::diagram::DiagramError> {
    // passage lists per component: (edge, t, crossing id, is_first_seg)
    let mut passages: Vec<Vec<(usize, f64, usize, bool)>> =
        vec![Vec::new(); curves.components.len()];
    for (xid, f) in found.iter().enumerate() {
        let s1 = &flat[f.seg1];
        let s2 = &flat[f.seg2];
        passages[s1.comp].push((s1.edge, f.t1, xid, true));
        passages[s2.comp].push((s2.edge, f.t2, xid, false));
    }
    for p in &mut passages {
        p.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
    }

    let open_index: Vec<Option<usize>> = {
        let mut next = 0;
        curves
            .components
            .iter()
            .map(|c| {
                if c.closed {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let n_open = open_index.iter().flatten().count();

    let mut arcs: Vec<Arc> = Vec::new();
    let mut crossings: Vec<Crossing> = vec![
        Crossing {
            ports: [PortRef {
                arc: usize::MAX,
                end: ArcEnd::Tail,
            }; 4],
        };
        found.len()
    ];
    let mut free_loops = 0usize;
    // (crossing, is_first_seg, arriving) -> (arc, end) filled as walks go
    let mut pending: Vec<[Option<PortRef>; 4]> = vec![[None; 4]; found.len()];
    let store = |pending: &mut Vec<[Option<PortRef>; 4]>,
                 xid: usize,
                 first: bool,
                 arriving: bool,
                 pr: PortRef| {
        let k = (first as usize) * 2 + arriving as usize;
        debug_assert!(pending[xid][k].is_none());
        pending[xid][k] = Some(pr);
    };

    for (ci, comp) in curves.components.iter().enumerate() {
        let ps = &passages[ci];
        if ps.is_empty() {
            if comp.closed {
                free_loops += 1;
            } else {
                let j = open_index[ci].unwrap();
                arcs.push(Arc {
                    from: Attach::Endpoint(2 * j + 1),
                    to: Attach::Endpoint(2 * j + 2),
                });
            }
            continue;
        }
        let first_arc = arcs.len();
        let count = ps.len();
        let arc_count = if comp.closed { count } else { count + 1 };
        for _ in 0..arc_count {
            arcs.push(Arc {
                from: Attach::Endpoint(0),
                to: Attach::Endpoint(0),
            });
        }
        if !comp.closed {
            let j = open_index[ci].unwrap();
            arcs[first_arc].from = Attach::Endpoint(2 * j + 1);
            arcs[first_arc + arc_count - 1].to = Attach::Endpoint(2 * j + 2);
        }
        for (k, &(_, _, xid, first)) in ps.iter().enumerate() {
            // arc arriving at this passage, arc departing from it
            let arr = first_arc + k;
            let dep = if comp.closed {
                first_arc + (k + 1) % arc_count
            } else {
                first_arc + k + 1
            };
            store(
                &mut pending,
                xid,
                first,
                true,
                PortRef {
                    arc: arr,
                    end: ArcEnd::Head,
                },
            );
            store(
                &mut pending,
                xid,
                first,
                false,
                PortRef {
                    arc: dep,
                    end: ArcEnd::Tail,
                },
            );
        }
    }

    // place arc-ends into CCW slots
    for (xid, f) in found.iter().enumerate() {
        let s1 = &flat[f.seg1];
        let s2 = &flat[f.seg2];
        let dir = |s: &FlatSeg| {
            let d = [s.b[0] - s.a[0], s.b[1] - s.a[1]];
            let l = (d[0] * d[0] + d[1] * d[1]).sqrt();
            [d[0] / l, d[1] / l]
        };
        let (d_over, d_under, under_first) = if f.first_over {
            (dir(s1), dir(s2), false)
        } else {
            (dir(s2), dir(s1), true)
        };
        let take = |pending: &mut Vec<[Option<PortRef>; 4]>, first: bool, arriving: bool| {
            let k = (first as usize) * 2 + arriving as usize;
            pending[xid][k].take().expect("passage recorded")
        };
        let under_in = take(&mut pending, under_first, true);
        let under_out = take(&mut pending, under_first, false);
        let over_in = take(&mut pending, !under_first, true);
        let over_out = take(&mut pending, !under_first, false);
        let in_ray = [-d_under[0], -d_under[1]];
        // slot 1 is the over end counterclockwise of the incoming under ray
        let over_in_ray = [-d_over[0], -d_over[1]];
        let (slot1, slot3) = if cross2(in_ray, over_in_ray) > 0.0 {
            (over_in, over_out)
        } else {
            (over_out, over_in)
        };
        crossings[xid].ports = [under_in, slot1, under_out, slot3];
        // write attachments
        for (s, p) in crossings[xid].ports.iter().enumerate() {
            let att = Attach::Port {
                crossing: xid,
                slot: s as u8,
            };
            match p.end {
                ArcEnd::Tail => arcs[p.arc].from = att,
                ArcEnd::Head => arcs[p.arc].to = att,
            }
        }
    }

    let d = LinkoidDiagram {
        n_open,
        free_loops,
        arcs,
        crossings,
    };
    d.validate()?;
    for (xid, f) in found.iter().enumerate() {
        let s1 = &flat[f.seg1];
        let s2 = &flat[f.seg2];
        let dir = |s: &FlatSeg| [s.b[0] - s.a[0], s.b[1] - s.a[1]];
        let (d_over, d_under) = if f.first_over {
            (dir(s1), dir(s2))
        } else {
            (dir(s2), dir(s1))
        };
        let geometric = if cross2(d_over, d_under) > 0.0 { 1 } else { -1 };
        debug_assert_eq!(
            d.crossing_sign(xid),
            geometric,
            "slot rule and right-hand rule disagree"
        );
    }
    Ok(d)
}
