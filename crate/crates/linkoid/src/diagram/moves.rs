//! Reidemeister move application on PD structures, used to exercise the
//! invariance properties of the bracket and Jones polynomials.
//!
//! Faces are traced with the interior on the left of travel, so all local
//! constructions here are laid out against that convention.

use super::{Arc, ArcEnd, Attach, Crossing, DiagramError, Dir, Face, LinkoidDiagram, PortRef};

#[derive(Debug, Clone, Copy)]
pub struct Omega1Site {
    pub arc: usize,
    pub positive: bool,
}

/// Insert a kink of the given sign on an arc. The bracket gains a factor
/// (-A^3)^sign; the Jones polynomial is unchanged.
pub fn omega1_add(d: &LinkoidDiagram, site: Omega1Site) -> Result<LinkoidDiagram, DiagramError> {
    let a = site.arc;
    if a >= d.arcs.len() {
        return Err(DiagramError::SiteOutOfRange(a));
    }
    let mut out = d.clone();
    let x = out.crossings.len();
    let k = out.arcs.len();
    let m2 = k + 1;
    let old_to = out.arcs[a].to;
    let port = |slot: u8| Attach::Port { crossing: x, slot };
    if site.positive {
        // strand passes under first; the loop occupies slots {2, 3}
        out.arcs[a].to = port(0);
        out.arcs.push(Arc {
            from: port(2),
            to: port(3),
        });
        out.arcs.push(Arc {
            from: port(1),
            to: old_to,
        });
        out.crossings.push(Crossing {
            ports: [
                PortRef { arc: a, end: ArcEnd::Head },
                PortRef { arc: m2, end: ArcEnd::Tail },
                PortRef { arc: k, end: ArcEnd::Tail },
                PortRef { arc: k, end: ArcEnd::Head },
            ],
        });
    } else {
        // loop occupies slots {1, 2}
        out.arcs[a].to = port(0);
        out.arcs.push(Arc {
            from: port(2),
            to: port(1),
        });
        out.arcs.push(Arc {
            from: port(3),
            to: old_to,
        });
        out.crossings.push(Crossing {
            ports: [
                PortRef { arc: a, end: ArcEnd::Head },
                PortRef { arc: k, end: ArcEnd::Head },
                PortRef { arc: k, end: ArcEnd::Tail },
                PortRef { arc: m2, end: ArcEnd::Tail },
            ],
        });
    }
    if let Attach::Port { crossing, slot } = old_to {
        out.crossings[crossing].ports[slot as usize] = PortRef {
            arc: m2,
            end: ArcEnd::Head,
        };
    }
    debug_assert!(out.validate_structure().is_ok());
    debug_assert_eq!(
        out.crossing_sign(x),
        if site.positive { 1 } else { -1 }
    );
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct PokeSite {
    /// positions in the face boundary (must be forward-travelled darcs of
    /// two distinct arcs)
    pub i: usize,
    pub j: usize,
    /// true: the strand of darc i passes over; false: under
    pub over_first: bool,
}

/// Poke one strand across another through a shared face (an Ω₂ move that
/// adds two cancelling crossings). The bracket is unchanged.
pub fn omega2_poke(
    d: &LinkoidDiagram,
    face: &Face,
    site: PokeSite,
) -> Result<LinkoidDiagram, DiagramError> {
    let (ai, di) = *face
        .darcs
        .get(site.i)
        .ok_or(DiagramError::SiteOutOfRange(site.i))?;
    let (bj, dj) = *face
        .darcs
        .get(site.j)
        .ok_or(DiagramError::SiteOutOfRange(site.j))?;
    if ai == bj || di != Dir::Fwd || dj != Dir::Fwd {
        return Err(DiagramError::Validation(
            "poke site must be two forward darcs of distinct arcs".into(),
        ));
    }
    let mut out = d.clone();
    let x = out.crossings.len();
    let y = x + 1;
    let a_to = out.arcs[ai].to;
    let b_to = out.arcs[bj].to;
    let u_top = out.arcs.len();
    let m2 = u_top + 1;
    let v_mid = u_top + 2;
    let v2 = u_top + 3;
    let px = |slot: u8| Attach::Port { crossing: x, slot };
    let py = |slot: u8| Attach::Port { crossing: y, slot };
    let pr = |arc: usize, end: ArcEnd| PortRef { arc, end };
    if site.over_first {
        // strand u (arc ai) over strand v (arc bj) at both crossings
        out.arcs[ai].to = px(3);
        out.arcs.push(Arc { from: px(1), to: py(1) }); // u_top
        out.arcs.push(Arc { from: py(3), to: a_to }); // m2
        out.arcs.push(Arc { from: py(2), to: px(0) }); // v_mid
        out.arcs.push(Arc { from: px(2), to: b_to }); // v2
        out.arcs[bj].to = py(0);
        out.crossings.push(Crossing {
            ports: [
                pr(v_mid, ArcEnd::Head),
                pr(u_top, ArcEnd::Tail),
                pr(v2, ArcEnd::Tail),
                pr(ai, ArcEnd::Head),
            ],
        });
        out.crossings.push(Crossing {
            ports: [
                pr(bj, ArcEnd::Head),
                pr(u_top, ArcEnd::Head),
                pr(v_mid, ArcEnd::Tail),
                pr(m2, ArcEnd::Tail),
            ],
        });
    } else {
        out.arcs[ai].to = px(0);
        out.arcs.push(Arc { from: px(2), to: py(0) }); // u_top
        out.arcs.push(Arc { from: py(2), to: a_to }); // m2
        out.arcs.push(Arc { from: py(1), to: px(1) }); // v_mid
        out.arcs.push(Arc { from: px(3), to: b_to }); // v2
        out.arcs[bj].to = py(3);
        out.crossings.push(Crossing {
            ports: [
                pr(ai, ArcEnd::Head),
                pr(v_mid, ArcEnd::Head),
                pr(u_top, ArcEnd::Tail),
                pr(v2, ArcEnd::Tail),
            ],
        });
        out.crossings.push(Crossing {
            ports: [
                pr(u_top, ArcEnd::Head),
                pr(v_mid, ArcEnd::Tail),
                pr(m2, ArcEnd::Tail),
                pr(bj, ArcEnd::Head),
            ],
        });
    }
    if let Attach::Port { crossing, slot } = a_to {
        out.crossings[crossing].ports[slot as usize] = pr(m2, ArcEnd::Head);
    }
    if let Attach::Port { crossing, slot } = b_to {
        out.crossings[crossing].ports[slot as usize] = pr(v2, ArcEnd::Head);
    }
    debug_assert!(out.validate_structure().is_ok());
    Ok(out)
}

/// A legal Ω₃ site: a triangular face whose three bounding strands admit a
/// slide (some strand passes over both, or under both, of its two corners).
#[derive(Debug, Clone)]
pub struct Omega3Site {
    /// the three side arcs of the triangle
    pub sides: [usize; 3],
}

/// All legal Ω₃ sites of the diagram.
pub fn legal_omega3_sites(d: &LinkoidDiagram) -> Vec<Omega3Site> {
    let faces = d.faces();
    let mut sites = Vec::new();
    'faces: for f in &faces.faces {
        if f.darcs.len() != 3 || !f.endpoints.is_empty() {
            continue;
        }
        let arcs = [f.darcs[0].0, f.darcs[1].0, f.darcs[2].0];
        if arcs[0] == arcs[1] || arcs[1] == arcs[2] || arcs[0] == arcs[2] {
            continue;
        }
        let mut slots = [(0u8, 0u8); 3]; // (from-slot, to-slot) of each side
        for (i, &a) in arcs.iter().enumerate() {
            let (Attach::Port { crossing: cf, slot: sf }, Attach::Port { crossing: ct, slot: st }) =
                (d.arcs[a].from, d.arcs[a].to)
            else {
                continue 'faces;
            };
            if cf == ct {
                continue 'faces;
            }
            slots[i] = (sf, st);
        }
        // the sides must meet in exactly 3 distinct corner crossings
        let mut corner_set = Vec::new();
        for &a in &arcs {
            for att in [d.arcs[a].from, d.arcs[a].to] {
                if let Attach::Port { crossing, .. } = att {
                    if !corner_set.contains(&crossing) {
                        corner_set.push(crossing);
                    }
                }
            }
        }
        if corner_set.len() != 3 {
            continue;
        }
        // a mover strand: side arc over at both corners or under at both
        let has_mover = arcs.iter().enumerate().any(|(i, _)| {
            let (sf, st) = slots[i];
            (sf % 2 == 1) == (st % 2 == 1)
        });
        if has_mover {
            sites.push(Omega3Site { sides: arcs });
        }
    }
    sites
}

/// Slide the triangle: each of the three strands swaps the order of its two
/// corner crossings. Preserves the bracket and Jones polynomials when
/// applied at a legal site.
pub fn omega3_slide(d: &LinkoidDiagram, site: &Omega3Site) -> Result<LinkoidDiagram, DiagramError> {
    let mut out = d.clone();
    struct Update {
        crossing: usize,
        slot: u8,
        port: PortRef,
    }
    let mut port_updates: Vec<Update> = Vec::new();
    let mut arc_updates: Vec<(usize, Option<Attach>, Option<Attach>)> = Vec::new(); // (arc, from, to)
    for &s in &site.sides {
        let (Attach::Port { crossing: c1, slot: w1 }, Attach::Port { crossing: c2, slot: i2 }) =
            (d.arcs[s].from, d.arcs[s].to)
        else {
            return Err(DiagramError::Validation("triangle side not between crossings".into()));
        };
        // strand passes c1 (in at i1, out at w1) then c2 (in at i2, out at w2)
        let i1 = (w1 + 2) % 4;
        let w2 = (i2 + 2) % 4;
        let e_in = d.port(c1, i1);
        let e_out = d.port(c2, w2);
        if e_in.end != ArcEnd::Head || e_out.end != ArcEnd::Tail {
            return Err(DiagramError::Validation(
                "triangle strand flow is inconsistent".into(),
            ));
        }
        port_updates.push(Update {
            crossing: c1,
            slot: i1,
            port: PortRef { arc: s, end: ArcEnd::Head },
        });
        port_updates.push(Update {
            crossing: c1,
            slot: w1,
            port: PortRef { arc: e_out.arc, end: ArcEnd::Tail },
        });
        port_updates.push(Update {
            crossing: c2,
            slot: i2,
            port: PortRef { arc: e_in.arc, end: ArcEnd::Head },
        });
        port_updates.push(Update {
            crossing: c2,
            slot: w2,
            port: PortRef { arc: s, end: ArcEnd::Tail },
        });
        arc_updates.push((
            s,
            Some(Attach::Port { crossing: c2, slot: w2 }),
            Some(Attach::Port { crossing: c1, slot: i1 }),
        ));
        arc_updates.push((e_in.arc, None, Some(Attach::Port { crossing: c2, slot: i2 })));
        arc_updates.push((e_out.arc, Some(Attach::Port { crossing: c1, slot: w1 }), None));
    }
    for u in port_updates {
        out.crossings[u.crossing].ports[u.slot as usize] = u.port;
    }
    for (a, from, to) in arc_updates {
        if let Some(f) = from {
            out.arcs[a].from = f;
        }
        if let Some(t) = to {
            out.arcs[a].to = t;
        }
    }
    out.validate_structure()?;
    out.validate_planar()?;
    Ok(out)
}
