//! Linkoid diagrams on S²: open-ended link diagrams with over/under crossing
//! data, stored as an extended PD structure.
//!
//! A diagram holds a dense arena of arcs and crossings. Each crossing records
//! its four arc-ends in counterclockwise order starting from the incoming
//! under-strand end, so the under-strand occupies slots {0, 2} and the
//! over-strand slots {1, 3}. Arcs are oriented (`from` -> `to`); open
//! component j runs from its leg (label 2j-1) to its head (label 2j).
//!
//! The A-smoothing of a crossing joins slot pairs {0,1} and {2,3}, the
//! B-smoothing joins {0,3} and {1,2}. This is Kauffman's A-regions rule; it
//! is pinned by the one-kink oracle in the tests (a positive kink must
//! contribute the factor -A^3).

mod braid;
mod moves;
mod parse;
mod surgery;

pub use braid::{braid_linkoid, BraidWord};
pub use moves::{
    legal_omega3_sites, omega1_add, omega2_poke, omega3_slide, Omega1Site, Omega3Site, PokeSite,
};
pub use parse::{parse_diagram, parse_diagram_json, print_diagram_json};
pub use surgery::ClosurePlan;

use crate::segcycle::Pairing;
use crate::unionfind::UnionFind;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Hard cap on crossing count for full state enumeration.
pub const DEFAULT_CROSSING_CAP: usize = 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid diagram: {0}")]
    Validation(String),
    #[error("diagram is not planar-realizable on S^2: {0}")]
    NotPlanar(String),
    #[error("crossing count {crossings} exceeds cap {cap}; simplify the diagram first")]
    CapExceeded { crossings: usize, cap: usize },
    #[error("empty collection")]
    EmptyDiagram,
    #[error("not a valid crossing-free closure: {0}")]
    InvalidClosure(String),
    #[error("crossing site {0} out of range")]
    SiteOutOfRange(usize),
    #[error("smoothing has {got} choices for {expected} crossings")]
    SmoothingLength { expected: usize, got: usize },
}

/// Which end of an arc: `Tail` is where the strand flow leaves from,
/// `Head` is where it arrives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcEnd {
    Tail,
    Head,
}

impl ArcEnd {
    pub fn flip(self) -> ArcEnd {
        match self {
            ArcEnd::Tail => ArcEnd::Head,
            ArcEnd::Head => ArcEnd::Tail,
        }
    }
}

/// Reference to one end of one arc, as stored in a crossing slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PortRef {
    pub arc: usize,
    pub end: ArcEnd,
}

/// What an arc end is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attach {
    /// A free endpoint with its 1-based label (legs odd, heads even).
    Endpoint(usize),
    /// Slot `slot` (0..4, counterclockwise) of crossing `crossing`.
    Port { crossing: usize, slot: u8 },
}

/// An oriented arc: an edge of the diagram between two crossing passages,
/// or between an endpoint and its first/last passage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: Attach,
    pub to: Attach,
}

/// A crossing: four arc-ends counterclockwise from the incoming under end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub ports: [PortRef; 4],
}

/// A choice of smoothing at one crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingChoice {
    A,
    B,
}

/// An assignment of a smoothing choice to every crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smoothing(pub Vec<SmoothingChoice>);

impl Smoothing {
    /// Decode a bitmask: bit i set means the B-smoothing at crossing i.
    pub fn from_mask(mask: u64, crossings: usize) -> Self {
        Smoothing(
            (0..crossings)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        SmoothingChoice::B
                    } else {
                        SmoothingChoice::A
                    }
                })
                .collect(),
        )
    }

    pub fn all_a(crossings: usize) -> Self {
        Smoothing(vec![SmoothingChoice::A; crossings])
    }
}

/// The result of smoothing every crossing of a diagram: disjoint circles
/// plus one long segment per open component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateResolution {
    /// Number of disjoint circles in the state.
    pub circ: usize,
    /// The induced pairing J_S on endpoint labels (empty for pure links).
    pub pairing: Pairing,
    /// Algebraic smoothing sum: (#A) - (#B).
    pub sigma: i64,
}

/// A linkoid diagram: n open components (labels fixed by position),
/// any number of closed components, and crossing-free circles.
#[derive(Debug, Clone)]
pub struct LinkoidDiagram {
    pub(crate) n_open: usize,
    pub(crate) free_loops: usize,
    pub(crate) arcs: Vec<Arc>,
    pub(crate) crossings: Vec<Crossing>,
}

impl LinkoidDiagram {
    /// The trivial linkoid with n open components and no crossings.
    pub fn trivial(n: usize) -> Self {
        let arcs = (0..n)
            .map(|j| Arc {
                from: Attach::Endpoint(2 * j + 1),
                to: Attach::Endpoint(2 * j + 2),
            })
            .collect();
        LinkoidDiagram {
            n_open: n,
            free_loops: 0,
            arcs,
            crossings: Vec::new(),
        }
    }

    /// k disjoint crossing-free circles (a trivial unlink diagram).
    pub fn unlink(k: usize) -> Self {
        LinkoidDiagram {
            n_open: 0,
            free_loops: k,
            arcs: Vec::new(),
            crossings: Vec::new(),
        }
    }

    pub fn open_count(&self) -> usize {
        self.n_open
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loop_count(&self) -> usize {
        self.free_loops
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_open == 0 && self.free_loops == 0 && self.arcs.is_empty()
    }

    /// Number of closed components with at least one crossing passage.
    pub fn closed_walk_count(&self) -> usize {
        self.walks().1.len()
    }

    pub(crate) fn port(&self, x: usize, slot: u8) -> PortRef {
        self.crossings[x].ports[slot as usize]
    }

    pub(crate) fn attach_of(&self, p: PortRef) -> Attach {
        match p.end {
            ArcEnd::Tail => self.arcs[p.arc].from,
            ArcEnd::Head => self.arcs[p.arc].to,
        }
    }

    /// Sign of crossing x under the planar right-hand rule. Valid on
    /// diagrams with consistent strand orientations (anything built by the
    /// parser, the projector, or the braid constructor).
    pub fn crossing_sign(&self, x: usize) -> i64 {
        let c = &self.crossings[x];
        debug_assert!(c.ports[0].end == ArcEnd::Head && c.ports[2].end == ArcEnd::Tail);
        if c.ports[3].end == ArcEnd::Head {
            1
        } else {
            -1
        }
    }

    /// Algebraic sum of crossing signs.
    pub fn writhe(&self) -> i64 {
        (0..self.crossings.len())
            .map(|x| self.crossing_sign(x))
            .sum()
    }

    /// Smooth every crossing per `s` and trace the resulting 1-manifold.
    pub fn resolve(&self, s: &Smoothing) -> Result<StateResolution, DiagramError> {
        if s.0.len() != self.crossings.len() {
            return Err(DiagramError::SmoothingLength {
                expected: self.crossings.len(),
                got: s.0.len(),
            });
        }
        let mut uf = UnionFind::new(self.arcs.len().max(1));
        let mut sigma = 0i64;
        for (x, choice) in s.0.iter().enumerate() {
            let p = &self.crossings[x].ports;
            match choice {
                SmoothingChoice::A => {
                    sigma += 1;
                    uf.union(p[0].arc, p[1].arc);
                    uf.union(p[2].arc, p[3].arc);
                }
                SmoothingChoice::B => {
                    sigma -= 1;
                    uf.union(p[0].arc, p[3].arc);
                    uf.union(p[1].arc, p[2].arc);
                }
            }
        }
        // Tally endpoint labels per merged component; components without
        // endpoints are circles, the rest are long segments.
        let mut labels_by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut seen_roots: BTreeMap<usize, ()> = BTreeMap::new();
        for a in 0..self.arcs.len() {
            let r = uf.find(a);
            seen_roots.entry(r).or_insert(());
            for att in [self.arcs[a].from, self.arcs[a].to] {
                if let Attach::Endpoint(label) = att {
                    labels_by_root.entry(r).or_default().push(label);
                }
            }
        }
        let mut circ = self.free_loops;
        let mut pairs = Vec::with_capacity(self.n_open);
        for (r, _) in seen_roots {
            match labels_by_root.get(&r) {
                None => circ += 1,
                Some(ls) => {
                    debug_assert_eq!(ls.len(), 2, "segment must have exactly two endpoints");
                    pairs.push((ls[0], ls[1]));
                }
            }
        }
        let pairing = Pairing::from_pairs(2 * self.n_open, &pairs)
            .map_err(|e| DiagramError::Validation(format!("state pairing: {e}")))?;
        Ok(StateResolution {
            circ,
            pairing,
            sigma,
        })
    }

    /// All 2^c states, in mask order (bit i set = B at crossing i).
    pub fn enumerate_states(
        &self,
    ) -> Result<impl Iterator<Item = StateResolution> + '_, DiagramError> {
        self.enumerate_states_capped(DEFAULT_CROSSING_CAP)
    }

    pub fn enumerate_states_capped(
        &self,
        cap: usize,
    ) -> Result<impl Iterator<Item = StateResolution> + '_, DiagramError> {
        let c = self.crossings.len();
        if c > cap {
            return Err(DiagramError::CapExceeded { crossings: c, cap });
        }
        Ok((0..1u64 << c).map(move |mask| {
            self.resolve(&Smoothing::from_mask(mask, c))
                .expect("smoothing length matches")
        }))
    }

    /// Full validation: structural cross-references, consistent strand
    /// orientations, endpoint labelling, and planar realizability.
    pub fn validate(&self) -> Result<(), DiagramError> {
        self.validate_structure()?;
        self.validate_oriented()?;
        self.validate_labels()?;
        self.validate_planar()
    }

    pub(crate) fn validate_structure(&self) -> Result<(), DiagramError> {
        // ports <-> arc attachments must mirror each other exactly
        for (x, c) in self.crossings.iter().enumerate() {
            for (s, p) in c.ports.iter().enumerate() {
                if p.arc >= self.arcs.len() {
                    return Err(DiagramError::Validation(format!(
                        "crossing {x} slot {s} references missing arc {}",
                        p.arc
                    )));
                }
                let att = self.attach_of(*p);
                if att
                    != (Attach::Port {
                        crossing: x,
                        slot: s as u8,
                    })
                {
                    return Err(DiagramError::Validation(format!(
                        "crossing {x} slot {s} and arc {} disagree on incidence",
                        p.arc
                    )));
                }
            }
        }
        for (a, arc) in self.arcs.iter().enumerate() {
            for (att, end) in [(arc.from, ArcEnd::Tail), (arc.to, ArcEnd::Head)] {
                if let Attach::Port { crossing, slot } = att {
                    if crossing >= self.crossings.len() {
                        return Err(DiagramError::Validation(format!(
                            "arc {a} references missing crossing {crossing}"
                        )));
                    }
                    let p = self.port(crossing, slot);
                    if p != (PortRef { arc: a, end }) {
                        return Err(DiagramError::Validation(format!(
                            "arc {a} end not mirrored at crossing {crossing} slot {slot}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn validate_oriented(&self) -> Result<(), DiagramError> {
        for (x, c) in self.crossings.iter().enumerate() {
            if c.ports[0].end != ArcEnd::Head || c.ports[2].end != ArcEnd::Tail {
                return Err(DiagramError::Validation(format!(
                    "crossing {x}: under-strand must enter at slot 0 and exit at slot 2"
                )));
            }
            let over_in_3 = c.ports[3].end == ArcEnd::Head;
            let over_in_1 = c.ports[1].end == ArcEnd::Head;
            if over_in_3 == over_in_1 {
                return Err(DiagramError::Validation(format!(
                    "crossing {x}: orientation mismatch on the over-strand"
                )));
            }
        }
        Ok(())
    }

    fn validate_labels(&self) -> Result<(), DiagramError> {
        let mut seen = vec![false; 2 * self.n_open];
        for (a, arc) in self.arcs.iter().enumerate() {
            for (att, end) in [(arc.from, ArcEnd::Tail), (arc.to, ArcEnd::Head)] {
                if let Attach::Endpoint(label) = att {
                    if label == 0 || label > 2 * self.n_open {
                        return Err(DiagramError::Validation(format!(
                            "endpoint label {label} out of range for {} open components",
                            self.n_open
                        )));
                    }
                    if seen[label - 1] {
                        return Err(DiagramError::Validation(format!(
                            "endpoint label {label} used twice"
                        )));
                    }
                    seen[label - 1] = true;
                    let is_leg = label % 2 == 1;
                    if is_leg != (end == ArcEnd::Tail) {
                        return Err(DiagramError::Validation(format!(
                            "endpoint {label}: legs must source flow (arc {a})"
                        )));
                    }
                }
            }
        }
        if let Some(i) = seen.iter().position(|&s| !s) {
            return Err(DiagramError::Validation(format!(
                "endpoint label {} missing",
                i + 1
            )));
        }
        Ok(())
    }

    /// Euler-consistency of the rotation-system face traversal, per
    /// connected component: V - E + F must equal 2 on S^2.
    pub(crate) fn validate_planar(&self) -> Result<(), DiagramError> {
        if self.arcs.is_empty() {
            return Ok(());
        }
        // connected components over arcs (shared crossings connect arcs)
        let mut uf = UnionFind::new(self.arcs.len());
        for c in &self.crossings {
            for s in 1..4 {
                uf.union(c.ports[0].arc, c.ports[s].arc);
            }
        }
        let faces = self.faces();
        let mut v_count: BTreeMap<usize, usize> = BTreeMap::new();
        let mut e_count: BTreeMap<usize, usize> = BTreeMap::new();
        let mut f_count: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &self.crossings {
            *v_count.entry(uf.find(c.ports[0].arc)).or_insert(0) += 1;
        }
        for a in 0..self.arcs.len() {
            let r = uf.find(a);
            *e_count.entry(r).or_insert(0) += 1;
            for att in [self.arcs[a].from, self.arcs[a].to] {
                if matches!(att, Attach::Endpoint(_)) {
                    *v_count.entry(r).or_insert(0) += 1;
                }
            }
        }
        for f in &faces.faces {
            let r = uf.find(f.darcs[0].0);
            *f_count.entry(r).or_insert(0) += 1;
        }
        for (&r, &e) in &e_count {
            let v = *v_count.get(&r).unwrap_or(&0);
            let f = *f_count.get(&r).unwrap_or(&0);
            if v as i64 - e as i64 + f as i64 != 2 {
                return Err(DiagramError::NotPlanar(format!(
                    "component has V={v} E={e} F={f}"
                )));
            }
        }
        Ok(())
    }

    /// Walks of every strand: open strands (ordered by minimum endpoint
    /// label) and closed strands. Each step is an arc id plus the passage
    /// met at its far end (None at the terminal endpoint of open strands).
    pub fn walks(&self) -> (Vec<OpenWalk>, Vec<ClosedWalk>) {
        let mut visited = vec![false; self.arcs.len()];
        let mut open = Vec::new();
        // collect endpoint-attached arc ends
        let mut starts: Vec<(usize, usize, ArcEnd)> = Vec::new(); // (label, arc, end attached)
        for (a, arc) in self.arcs.iter().enumerate() {
            if let Attach::Endpoint(l) = arc.from {
                starts.push((l, a, ArcEnd::Tail));
            }
            if let Attach::Endpoint(l) = arc.to {
                starts.push((l, a, ArcEnd::Head));
            }
        }
        starts.sort_unstable_by_key(|s| s.0);
        for &(label, a0, end0) in &starts {
            if visited[a0] {
                continue;
            }
            // walk away from the endpoint
            let mut steps = Vec::new();
            let mut arc = a0;
            // the far end of the current arc, travelling away from `end0`
            let mut far = end0.flip();
            loop {
                visited[arc] = true;
                let att = match far {
                    ArcEnd::Head => self.arcs[arc].to,
                    ArcEnd::Tail => self.arcs[arc].from,
                };
                match att {
                    Attach::Endpoint(l2) => {
                        steps.push(WalkStep {
                            arc,
                            passage: None,
                        });
                        open.push(OpenWalk {
                            start_label: label,
                            end_label: l2,
                            steps,
                        });
                        break;
                    }
                    Attach::Port { crossing, slot } => {
                        steps.push(WalkStep {
                            arc,
                            passage: Some(Passage {
                                crossing,
                                over: slot % 2 == 1,
                            }),
                        });
                        let out = self.port(crossing, (slot + 2) % 4);
                        far = out.end.flip();
                        arc = out.arc;
                    }
                }
            }
        }
        // remaining arcs belong to closed strands
        let mut closed = Vec::new();
        for a0 in 0..self.arcs.len() {
            if visited[a0] {
                continue;
            }
            let mut steps = Vec::new();
            let mut arc = a0;
            let mut far = ArcEnd::Head; // travel along stored orientation
            loop {
                visited[arc] = true;
                let att = match far {
                    ArcEnd::Head => self.arcs[arc].to,
                    ArcEnd::Tail => self.arcs[arc].from,
                };
                let Attach::Port { crossing, slot } = att else {
                    unreachable!("closed strand met an endpoint");
                };
                steps.push(WalkStep {
                    arc,
                    passage: Some(Passage {
                        crossing,
                        over: slot % 2 == 1,
                    }),
                });
                let out = self.port(crossing, (slot + 2) % 4);
                far = out.end.flip();
                arc = out.arc;
                if arc == a0 && far == ArcEnd::Head {
                    break;
                }
            }
            closed.push(ClosedWalk { steps });
        }
        (open, closed)
    }

    /// Faces of the embedded diagram via rotation-system traversal.
    pub fn faces(&self) -> Faces {
        let n = self.arcs.len();
        // directed arc index: 2*arc + {0 fwd, 1 bwd}
        let mut next: Vec<usize> = vec![usize::MAX; 2 * n];
        let mut face_of: Vec<usize> = vec![usize::MAX; 2 * n];
        for a in 0..n {
            for (dir, att) in [(0, self.arcs[a].to), (1, self.arcs[a].from)] {
                let me = 2 * a + dir;
                next[me] = match att {
                    Attach::Endpoint(_) => 2 * a + (1 - dir),
                    Attach::Port { crossing, slot } => {
                        let s2 = (slot + 3) % 4;
                        let p = self.port(crossing, s2);
                        match p.end {
                            ArcEnd::Tail => 2 * p.arc,
                            ArcEnd::Head => 2 * p.arc + 1,
                        }
                    }
                };
            }
        }
        let mut faces = Vec::new();
        for start in 0..2 * n {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut darcs = Vec::new();
            let mut endpoints = Vec::new();
            let mut cur = start;
            loop {
                face_of[cur] = id;
                let (a, dir) = (cur / 2, cur % 2);
                darcs.push((a, if dir == 0 { Dir::Fwd } else { Dir::Bwd }));
                let att = if dir == 0 {
                    self.arcs[a].to
                } else {
                    self.arcs[a].from
                };
                if let Attach::Endpoint(l) = att {
                    endpoints.push(l);
                }
                cur = next[cur];
                if cur == start {
                    break;
                }
            }
            faces.push(Face { darcs, endpoints });
        }
        Faces { faces, face_of }
    }

    /// Deterministic canonical layout used for printing, equality, and the
    /// memoization/census signature.
    pub fn canonical_layout(&self) -> Layout {
        let (open, closed) = self.walks();
        let mut cross_new = vec![usize::MAX; self.crossings.len()];
        let mut arc_new = vec![usize::MAX; self.arcs.len()];
        let mut next_cross = 0usize;
        let mut next_arc = 0usize;
        let commit = |steps: &[WalkStep],
                          cross_new: &mut Vec<usize>,
                          arc_new: &mut Vec<usize>,
                          next_cross: &mut usize,
                          next_arc: &mut usize| {
            for st in steps {
                if arc_new[st.arc] == usize::MAX {
                    arc_new[st.arc] = *next_arc;
                    *next_arc += 1;
                }
                if let Some(p) = &st.passage {
                    if cross_new[p.crossing] == usize::MAX {
                        cross_new[p.crossing] = *next_cross;
                        *next_cross += 1;
                    }
                }
            }
        };
        let mut open_sorted = open;
        open_sorted.sort_by_key(|w| w.start_label.min(w.end_label));
        for w in &open_sorted {
            commit(
                &w.steps,
                &mut cross_new,
                &mut arc_new,
                &mut next_cross,
                &mut next_arc,
            );
        }
        // closed walks: greedy lexicographically-least rotation
        let mut remaining: Vec<ClosedWalk> = closed;
        let mut closed_out: Vec<ClosedWalk> = Vec::new();
        while !remaining.is_empty() {
            let mut best: Option<(usize, usize, Vec<(usize, bool)>)> = None;
            for (wi, w) in remaining.iter().enumerate() {
                let len = w.steps.len();
                for rot in 0..len {
                    // speculative crossing ids for this candidate
                    let mut spec = cross_new.clone();
                    let mut spec_next = next_cross;
                    let mut key = Vec::with_capacity(len);
                    for k in 0..len {
                        let st = &w.steps[(rot + k) % len];
                        let p = st.passage.as_ref().expect("closed walks have passages");
                        if spec[p.crossing] == usize::MAX {
                            spec[p.crossing] = spec_next;
                            spec_next += 1;
                        }
                        key.push((spec[p.crossing], p.over));
                    }
                    let better = match &best {
                        None => true,
                        Some((_, _, bk)) => key < *bk,
                    };
                    if better {
                        best = Some((wi, rot, key));
                    }
                }
            }
            let (wi, rot, _) = best.unwrap();
            let w = remaining.remove(wi);
            let len = w.steps.len();
            let rotated: Vec<WalkStep> = (0..len).map(|k| w.steps[(rot + k) % len].clone()).collect();
            commit(
                &rotated,
                &mut cross_new,
                &mut arc_new,
                &mut next_cross,
                &mut next_arc,
            );
            closed_out.push(ClosedWalk { steps: rotated });
        }
        Layout {
            open_walks: open_sorted,
            closed_walks: closed_out,
            cross_new,
            arc_new,
        }
    }

    /// Canonical signature: equal signatures mean identical diagrams up to
    /// internal renumbering. Used as the memoization and census key.
    pub fn canonical_signature(&self) -> String {
        let layout = self.canonical_layout();
        let mut s = format!("n{};f{}", self.n_open, self.free_loops);
        let fmt_steps = |steps: &[WalkStep]| -> String {
            steps
                .iter()
                .map(|st| match &st.passage {
                    Some(p) => format!(
                        "a{} X{}{}",
                        layout.arc_new[st.arc],
                        layout.cross_new[p.crossing],
                        if p.over { 'o' } else { 'u' }
                    ),
                    None => format!("a{}", layout.arc_new[st.arc]),
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        for w in &layout.open_walks {
            s.push_str(&format!(
                ";o{}-{}:{}",
                w.start_label,
                w.end_label,
                fmt_steps(&w.steps)
            ));
        }
        for w in &layout.closed_walks {
            s.push_str(&format!(";c:{}", fmt_steps(&w.steps)));
        }
        // crossing table in canonical order, rotation-normalized (0 or 2)
        let mut order: Vec<(usize, usize)> = layout
            .cross_new
            .iter()
            .enumerate()
            .map(|(old, &new)| (new, old))
            .collect();
        order.sort_unstable();
        for (new, old) in order {
            let ports = &self.crossings[old].ports;
            let quad = |off: usize| -> Vec<String> {
                (0..4)
                    .map(|i| {
                        let p = ports[(i + off) % 4];
                        format!(
                            "a{}{}",
                            layout.arc_new[p.arc],
                            if p.end == ArcEnd::Head { 'h' } else { 't' }
                        )
                    })
                    .collect()
            };
            let q0 = quad(0);
            let q2 = quad(2);
            let q = if q0 <= q2 { q0 } else { q2 };
            s.push_str(&format!(";X{}({})", new, q.join(" ")));
        }
        s
    }
}

impl PartialEq for LinkoidDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.n_open == other.n_open
            && self.free_loops == other.free_loops
            && self.canonical_signature() == other.canonical_signature()
    }
}

impl Eq for LinkoidDiagram {}

impl fmt::Display for LinkoidDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", parse::print_diagram(self))
    }
}

/// One step of a strand walk: traverse `arc`, then meet `passage` (None at
/// the far endpoint of an open strand).
#[derive(Debug, Clone)]
pub struct WalkStep {
    pub arc: usize,
    pub passage: Option<Passage>,
}

#[derive(Debug, Clone)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Debug, Clone)]
pub struct OpenWalk {
    pub start_label: usize,
    pub end_label: usize,
    pub steps: Vec<WalkStep>,
}

#[derive(Debug, Clone)]
pub struct ClosedWalk {
    pub steps: Vec<WalkStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Fwd,
    Bwd,
}

/// A face of the embedded diagram: its boundary as directed arcs, plus the
/// endpoint labels met along the boundary, in cyclic order.
#[derive(Debug, Clone)]
pub struct Face {
    pub darcs: Vec<(usize, Dir)>,
    pub endpoints: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Faces {
    pub faces: Vec<Face>,
    /// face id per directed arc (2*arc + {0 fwd, 1 bwd})
    pub face_of: Vec<usize>,
}

impl Faces {
    pub fn face_of_darc(&self, arc: usize, dir: Dir) -> usize {
        self.face_of[2 * arc + if dir == Dir::Fwd { 0 } else { 1 }]
    }
}

/// Canonical renumbering of a diagram.
pub struct Layout {
    pub open_walks: Vec<OpenWalk>,
    pub closed_walks: Vec<ClosedWalk>,
    /// new crossing index by old index
    pub cross_new: Vec<usize>,
    /// new arc index by old index
    pub arc_new: Vec<usize>,
}

#[cfg(test)]
pub(crate) mod tests;
