//! Diagram surgery: the rewire primitive plus the operations built on it —
//! smoothing a crossing, switching a crossing, crossing-reducing
//! simplification, and crossing-free closure.

use super::{
    Arc, ArcEnd, Attach, Crossing, DiagramError, LinkoidDiagram, PortRef, SmoothingChoice,
};
use std::collections::HashMap;

/// One end of one arc, identified by (arc id, end).
pub(crate) type EndRef = (usize, ArcEnd);

impl LinkoidDiagram {
    /// Rebuild the diagram after removing `removed` crossings, gluing the
    /// arc-end pairs in `joins`, and deleting `dropped` arcs entirely.
    /// Chains of glued arcs merge into single arcs; closed chains become
    /// free loops. Surviving crossings keep their CCW slot order.
    pub(crate) fn rewire(
        &self,
        removed: &[usize],
        joins: &[(EndRef, EndRef)],
        dropped: &[usize],
        n_open_override: Option<usize>,
    ) -> LinkoidDiagram {
        let mut is_removed = vec![false; self.crossings.len()];
        for &x in removed {
            is_removed[x] = true;
        }
        let mut is_dropped = vec![false; self.arcs.len()];
        for &a in dropped {
            is_dropped[a] = true;
        }
        let end_idx = |e: EndRef| 2 * e.0 + if e.1 == ArcEnd::Head { 1 } else { 0 };
        let mut glue: Vec<Option<EndRef>> = vec![None; 2 * self.arcs.len()];
        for &(p, q) in joins {
            debug_assert!(!is_dropped[p.0] && !is_dropped[q.0]);
            debug_assert!(glue[end_idx(p)].is_none() && glue[end_idx(q)].is_none());
            glue[end_idx(p)] = Some(q);
            glue[end_idx(q)] = Some(p);
        }
        #[cfg(debug_assertions)]
        for &x in removed {
            for p in self.crossings[x].ports {
                assert!(
                    is_dropped[p.arc] || glue[end_idx((p.arc, p.end))].is_some(),
                    "port of removed crossing neither glued nor dropped"
                );
            }
        }

        let attach_of = |e: EndRef| match e.1 {
            ArcEnd::Tail => self.arcs[e.0].from,
            ArcEnd::Head => self.arcs[e.0].to,
        };
        let is_terminal = |e: EndRef| glue[end_idx(e)].is_none();

        let mut new_arcs: Vec<(Attach, Attach)> = Vec::new();
        let mut end_map: HashMap<(usize, u8), PortRef> = HashMap::new(); // old end -> new port ref
        let mut consumed = vec![false; self.arcs.len()];
        let mut new_loops = 0usize;

        let trace_chain = |start: EndRef,
                               new_arcs: &mut Vec<(Attach, Attach)>,
                               end_map: &mut HashMap<(usize, u8), PortRef>,
                               consumed: &mut Vec<bool>| {
            let new_id = new_arcs.len();
            let start_code = (start.0, if start.1 == ArcEnd::Head { 1u8 } else { 0 });
            let mut cur = start;
            loop {
                consumed[cur.0] = true;
                let far = (cur.0, cur.1.flip());
                match glue[end_idx(far)] {
                    Some(next) => cur = next,
                    None => {
                        end_map.insert(start_code, PortRef {
                            arc: new_id,
                            end: ArcEnd::Tail,
                        });
                        end_map.insert(
                            (far.0, if far.1 == ArcEnd::Head { 1 } else { 0 }),
                            PortRef {
                                arc: new_id,
                                end: ArcEnd::Head,
                            },
                        );
                        new_arcs.push((attach_of(start), attach_of(far)));
                        break;
                    }
                }
            }
        };

        // flow-forward chains first so surviving orientations stay intact
        for a in 0..self.arcs.len() {
            let e = (a, ArcEnd::Tail);
            if !is_dropped[a] && !consumed[a] && is_terminal(e) {
                trace_chain(e, &mut new_arcs, &mut end_map, &mut consumed);
            }
        }
        for a in 0..self.arcs.len() {
            let e = (a, ArcEnd::Head);
            if !is_dropped[a] && !consumed[a] && is_terminal(e) {
                trace_chain(e, &mut new_arcs, &mut end_map, &mut consumed);
            }
        }
        // what remains are closed chains
        for a0 in 0..self.arcs.len() {
            if is_dropped[a0] || consumed[a0] {
                continue;
            }
            new_loops += 1;
            let mut cur = (a0, ArcEnd::Tail);
            loop {
                consumed[cur.0] = true;
                let far = (cur.0, cur.1.flip());
                let next = glue[end_idx(far)].expect("closed chain end must be glued");
                if next.0 == a0 {
                    break;
                }
                cur = next;
            }
        }

        // reindex surviving crossings and remap attachments
        let mut cross_map = vec![usize::MAX; self.crossings.len()];
        let mut next = 0;
        for x in 0..self.crossings.len() {
            if !is_removed[x] {
                cross_map[x] = next;
                next += 1;
            }
        }
        let remap_attach = |att: Attach| match att {
            Attach::Endpoint(l) => Attach::Endpoint(l),
            Attach::Port { crossing, slot } => Attach::Port {
                crossing: cross_map[crossing],
                slot,
            },
        };
        let mut arcs: Vec<Arc> = new_arcs
            .iter()
            .map(|&(f, t)| Arc {
                from: remap_attach(f),
                to: remap_attach(t),
            })
            .collect();
        let mut crossings = Vec::with_capacity(next);
        for x in 0..self.crossings.len() {
            if is_removed[x] {
                continue;
            }
            let ports = self.crossings[x].ports.map(|p| {
                *end_map
                    .get(&(p.arc, if p.end == ArcEnd::Head { 1 } else { 0 }))
                    .expect("surviving port end must be a chain terminal")
            });
            crossings.push(Crossing { ports });
        }
        let mut out = LinkoidDiagram {
            n_open: n_open_override.unwrap_or(self.n_open),
            free_loops: self.free_loops + new_loops,
            arcs: Vec::new(),
            crossings,
        };
        // restore the incoming-under anchor where a chain direction flipped
        std::mem::swap(&mut out.arcs, &mut arcs);
        for x in 0..out.crossings.len() {
            let p = &out.crossings[x].ports;
            if p[0].end == ArcEnd::Tail && p[2].end == ArcEnd::Head {
                out.rotate_crossing_slots(x, 2);
            }
        }
        // write back port attachments into arcs
        for x in 0..out.crossings.len() {
            for s in 0..4u8 {
                let p = out.crossings[x].ports[s as usize];
                let att = Attach::Port { crossing: x, slot: s };
                match p.end {
                    ArcEnd::Tail => out.arcs[p.arc].from = att,
                    ArcEnd::Head => out.arcs[p.arc].to = att,
                }
            }
        }
        debug_assert!(out.validate_structure().is_ok());
        out
    }

    /// Rotate the slot array of crossing `x` by `r` (must keep the under
    /// diagonal on even slots, so r is 0 or 2 for smoothing-safe use; the
    /// crossing-switch uses odd r deliberately).
    pub(crate) fn rotate_crossing_slots(&mut self, x: usize, r: u8) {
        let old = self.crossings[x].ports;
        for s in 0..4u8 {
            let p = old[((s + r) % 4) as usize];
            self.crossings[x].ports[s as usize] = p;
            let att = Attach::Port { crossing: x, slot: s };
            match p.end {
                ArcEnd::Tail => self.arcs[p.arc].from = att,
                ArcEnd::Head => self.arcs[p.arc].to = att,
            }
        }
    }

    /// Replace crossing `x` by its A- or B-smoothing.
    pub fn smooth_at(&self, x: usize, choice: SmoothingChoice) -> Result<Self, DiagramError> {
        if x >= self.crossings.len() {
            return Err(DiagramError::SiteOutOfRange(x));
        }
        let p = self.crossings[x].ports.map(|p| (p.arc, p.end));
        let joins = match choice {
            SmoothingChoice::A => [(p[0], p[1]), (p[2], p[3])],
            SmoothingChoice::B => [(p[0], p[3]), (p[1], p[2])],
        };
        Ok(self.rewire(&[x], &joins, &[], None))
    }

    /// The oriented smoothing of crossing `x` (the L0 diagram of the skein
    /// triple): joins that respect strand orientation.
    pub fn oriented_smooth_at(&self, x: usize) -> Result<Self, DiagramError> {
        if x >= self.crossings.len() {
            return Err(DiagramError::SiteOutOfRange(x));
        }
        let choice = if self.crossing_sign(x) > 0 {
            SmoothingChoice::A
        } else {
            SmoothingChoice::B
        };
        self.smooth_at(x, choice)
    }

    /// Switch over- and under-strand at crossing `x` (L+ <-> L-).
    pub fn switch_crossing(&self, x: usize) -> Result<Self, DiagramError> {
        if x >= self.crossings.len() {
            return Err(DiagramError::SiteOutOfRange(x));
        }
        let mut out = self.clone();
        let r = if self.crossings[x].ports[3].end == ArcEnd::Head {
            3
        } else {
            1
        };
        out.rotate_crossing_slots(x, r);
        Ok(out)
    }

    /// Mirror image: switch every crossing. Bracket transforms by A <-> A^-1
    /// and writhe negates.
    pub fn mirror_diagram(&self) -> Self {
        let mut out = self.clone();
        for x in 0..self.crossings.len() {
            let r = if out.crossings[x].ports[3].end == ArcEnd::Head {
                3
            } else {
                1
            };
            out.rotate_crossing_slots(x, r);
        }
        out
    }

    /// Repeatedly remove kinks (Ω₁) and reducible bigons (Ω₂) whose local
    /// disk contains no endpoint. Returns the simplified diagram and the
    /// net signed kink count `twist`, so that
    /// bracket(self) = (-A^3)^twist * bracket(simplified).
    pub fn simplify(&self) -> (Self, i64) {
        let mut cur = self.clone();
        let mut twist = 0i64;
        'outer: loop {
            // Ω₁: an arc with both ends on one crossing at adjacent slots.
            for x in 0..cur.crossings.len() {
                let ports = cur.crossings[x].ports;
                for s in 0..4usize {
                    let s1 = (s + 1) % 4;
                    if ports[s].arc == ports[s1].arc {
                        twist += if s % 2 == 0 { 1 } else { -1 };
                        let t0 = ports[(s + 2) % 4];
                        let t1 = ports[(s + 3) % 4];
                        cur = cur.rewire(
                            &[x],
                            &[((t0.arc, t0.end), (t1.arc, t1.end))],
                            &[ports[s].arc],
                            None,
                        );
                        continue 'outer;
                    }
                }
            }
            // Ω₂: arcs e (under at both ends) and f (over at both ends)
            // running between the same two crossings, adjacent at both, with
            // compatible cyclic sense.
            for e in 0..cur.arcs.len() {
                let (Attach::Port { crossing: x, slot: se_x }, Attach::Port { crossing: y, slot: se_y }) =
                    (cur.arcs[e].from, cur.arcs[e].to)
                else {
                    continue;
                };
                if x == y || se_x % 2 != 0 || se_y % 2 != 0 {
                    continue;
                }
                for f in 0..cur.arcs.len() {
                    if f == e {
                        continue;
                    }
                    let (Attach::Port { crossing: fx, slot: sf_x }, Attach::Port { crossing: fy, slot: sf_y }) =
                        (cur.arcs[f].from, cur.arcs[f].to)
                    else {
                        continue;
                    };
                    let (sf_at_x, sf_at_y) = if (fx, fy) == (x, y) {
                        (sf_x, sf_y)
                    } else if (fx, fy) == (y, x) {
                        (sf_y, sf_x)
                    } else {
                        continue;
                    };
                    let dx = (4 + sf_at_x as i8 - se_x as i8) % 4;
                    let dy = (4 + sf_at_y as i8 - se_y as i8) % 4;
                    let adjacent = |d: i8| d == 1 || d == 3;
                    if !adjacent(dx) || !adjacent(dy) || (dx + dy) % 4 != 0 {
                        continue;
                    }
                    let px = cur.crossings[x].ports.map(|p| (p.arc, p.end));
                    let py = cur.crossings[y].ports.map(|p| (p.arc, p.end));
                    cur = cur.rewire(
                        &[x, y],
                        &[
                            (px[0], px[2]),
                            (px[1], px[3]),
                            (py[0], py[2]),
                            (py[1], py[3]),
                        ],
                        &[],
                        None,
                    );
                    continue 'outer;
                }
            }
            break;
        }
        (cur, twist)
    }

    /// Close every open component head-to-leg without creating crossings.
    /// Possible exactly when each component's two endpoints lie on a common
    /// face and the closure arcs can be nested without crossing each other.
    pub fn close_linkoid(&self, plan: &ClosurePlan) -> Result<Self, DiagramError> {
        if self.n_open == 0 {
            return Err(DiagramError::InvalidClosure(
                "diagram has no open components".into(),
            ));
        }
        if plan.face_routes.len() != self.n_open {
            return Err(DiagramError::InvalidClosure(format!(
                "plan routes {} components, diagram has {}",
                plan.face_routes.len(),
                self.n_open
            )));
        }
        let faces = self.faces();
        // locate endpoint arcs and their faces
        let mut leg_arc = vec![usize::MAX; self.n_open];
        let mut head_arc = vec![usize::MAX; self.n_open];
        for (a, arc) in self.arcs.iter().enumerate() {
            if let Attach::Endpoint(l) = arc.from {
                leg_arc[(l - 1) / 2] = a;
            }
            if let Attach::Endpoint(l) = arc.to {
                head_arc[l / 2 - 1] = a;
            }
        }
        let mut label_face = HashMap::new();
        for (fi, f) in faces.faces.iter().enumerate() {
            for &l in &f.endpoints {
                label_face.insert(l, fi);
            }
        }
        for j in 0..self.n_open {
            let (leg, head) = (2 * j + 1, 2 * j + 2);
            let fi = plan.face_routes[j];
            if label_face.get(&leg) != Some(&fi) || label_face.get(&head) != Some(&fi) {
                return Err(DiagramError::InvalidClosure(format!(
                    "component {} endpoints do not both lie on face {fi}",
                    j + 1
                )));
            }
        }
        // per face, the routed pairs must form a non-crossing matching in
        // the cyclic boundary order
        for (fi, f) in faces.faces.iter().enumerate() {
            let routed: Vec<usize> = (0..self.n_open)
                .filter(|&j| plan.face_routes[j] == fi)
                .collect();
            if routed.len() < 2 {
                continue;
            }
            let pos: HashMap<usize, usize> = f
                .endpoints
                .iter()
                .enumerate()
                .map(|(i, &l)| (l, i))
                .collect();
            for (i, &ja) in routed.iter().enumerate() {
                for &jb in &routed[i + 1..] {
                    let (mut a1, mut a2) = (pos[&(2 * ja + 1)], pos[&(2 * ja + 2)]);
                    if a1 > a2 {
                        std::mem::swap(&mut a1, &mut a2);
                    }
                    let inside =
                        |p: usize| p > a1 && p < a2;
                    if inside(pos[&(2 * jb + 1)]) != inside(pos[&(2 * jb + 2)]) {
                        return Err(DiagramError::InvalidClosure(format!(
                            "closure arcs of components {} and {} would cross",
                            ja + 1,
                            jb + 1
                        )));
                    }
                }
            }
        }
        let joins: Vec<(EndRef, EndRef)> = (0..self.n_open)
            .map(|j| ((head_arc[j], ArcEnd::Head), (leg_arc[j], ArcEnd::Tail)))
            .collect();
        let out = self.rewire(&[], &joins, &[], Some(0));
        out.validate_planar().map_err(|_| {
            DiagramError::InvalidClosure("closure produced a non-planar diagram".into())
        })?;
        Ok(out)
    }

    /// Crossing-free closure with the face routing inferred (each endpoint
    /// lies on exactly one face, so the routing is forced).
    pub fn crossing_free_closure(&self) -> Result<Self, DiagramError> {
        self.close_linkoid(&ClosurePlan::infer(self)?)
    }
}

/// Closure-arc embedding data: the face each component's closure arc is
/// routed through.
#[derive(Debug, Clone)]
pub struct ClosurePlan {
    pub face_routes: Vec<usize>,
}

impl ClosurePlan {
    /// Infer the forced routing: error if some component's endpoints do not
    /// share a face.
    pub fn infer(d: &LinkoidDiagram) -> Result<Self, DiagramError> {
        let faces = d.faces();
        let mut label_face = HashMap::new();
        for (fi, f) in faces.faces.iter().enumerate() {
            for &l in &f.endpoints {
                label_face.insert(l, fi);
            }
        }
        let mut routes = Vec::with_capacity(d.n_open);
        for j in 0..d.n_open {
            let (fl, fh) = (label_face.get(&(2 * j + 1)), label_face.get(&(2 * j + 2)));
            match (fl, fh) {
                (Some(a), Some(b)) if a == b => routes.push(*a),
                _ => {
                    return Err(DiagramError::InvalidClosure(format!(
                        "component {} endpoints lie on different faces",
                        j + 1
                    )))
                }
            }
        }
        Ok(ClosurePlan {
            face_routes: routes,
        })
    }
}
