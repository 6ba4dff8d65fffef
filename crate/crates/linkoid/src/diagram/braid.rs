//! Braid-word constructors. A braid on k strands, read top to bottom, gives
//! a linkoid whose components are the strands (legs on top). Pure braids
//! give link-type linkoids: their trace closure routes every closure arc
//! through the outer face.

use super::{Arc, ArcEnd, Attach, Crossing, DiagramError, LinkoidDiagram, PortRef};

/// A braid word: letter +i (1-based, i < strands) is a positive crossing of
/// the strands at positions i and i+1, letter -i the negative crossing.
#[derive(Debug, Clone)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    /// The permutation taking top position to bottom position (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        perm
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Append letters that sort the permutation back to the identity,
    /// turning any word into a pure braid word.
    pub fn purify(&mut self) {
        loop {
            let perm = self.permutation();
            match (0..self.strands.saturating_sub(1)).find(|&i| perm[i] > perm[i + 1]) {
                Some(i) => self.letters.push(i as i32 + 1),
                None => break,
            }
        }
    }
}

/// Build the linkoid diagram of a braid word. Component j is the strand
/// whose leg is at top position j.
pub fn braid_linkoid(w: &BraidWord) -> Result<LinkoidDiagram, DiagramError> {
    if w.strands < 2 {
        return Err(DiagramError::Validation(
            "braid needs at least 2 strands".into(),
        ));
    }
    for &l in &w.letters {
        let i = l.unsigned_abs() as usize;
        if l == 0 || i >= w.strands {
            return Err(DiagramError::Validation(format!(
                "braid letter {l} out of range for {} strands",
                w.strands
            )));
        }
    }
    let mut arcs: Vec<Arc> = Vec::new();
    let mut crossings: Vec<Crossing> = Vec::new();
    // the open arc currently at each position, and which component it extends
    let mut front: Vec<usize> = (0..w.strands)
        .map(|j| {
            arcs.push(Arc {
                from: Attach::Endpoint(2 * j + 1),
                to: Attach::Endpoint(0), // patched as the braid grows
            });
            j
        })
        .collect();
    let mut comp: Vec<usize> = (0..w.strands).collect();
    for &l in &w.letters {
        let i = l.unsigned_abs() as usize - 1; // left position
        let x = crossings.len();
        let (nw, ne) = (front[i], front[i + 1]);
        let sw = arcs.len();
        let se = arcs.len() + 1;
        let port = |slot: u8| Attach::Port { crossing: x, slot };
        let pr = |arc: usize, end: ArcEnd| PortRef { arc, end };
        if l > 0 {
            // right strand over left: positive crossing
            arcs[nw].to = port(0);
            arcs[ne].to = port(3);
            arcs.push(Arc { from: port(1), to: Attach::Endpoint(0) }); // sw
            arcs.push(Arc { from: port(2), to: Attach::Endpoint(0) }); // se
            crossings.push(Crossing {
                ports: [
                    pr(nw, ArcEnd::Head),
                    pr(sw, ArcEnd::Tail),
                    pr(se, ArcEnd::Tail),
                    pr(ne, ArcEnd::Head),
                ],
            });
        } else {
            // left strand over right: negative crossing
            arcs[ne].to = port(0);
            arcs[nw].to = port(1);
            arcs.push(Arc { from: port(2), to: Attach::Endpoint(0) }); // sw
            arcs.push(Arc { from: port(3), to: Attach::Endpoint(0) }); // se
            crossings.push(Crossing {
                ports: [
                    pr(ne, ArcEnd::Head),
                    pr(nw, ArcEnd::Head),
                    pr(sw, ArcEnd::Tail),
                    pr(se, ArcEnd::Tail),
                ],
            });
        }
        front[i] = sw;
        front[i + 1] = se;
        comp.swap(i, i + 1);
    }
    for (pos, &a) in front.iter().enumerate() {
        arcs[a].to = Attach::Endpoint(2 * comp[pos] + 2);
    }
    let d = LinkoidDiagram {
        n_open: w.strands,
        free_loops: 0,
        arcs,
        crossings,
    };
    d.validate()?;
    Ok(d)
}
