//! Permutation machinery on endpoint labels: pairing combinations (fixed-
//! point-free involutions), the head-leg pairing HL, orbits under HL∘J, and
//! segment-cycle extraction.
//!
//! Endpoint labels are 1-based throughout: component j of a linkoid has leg
//! 2j-1 and head 2j, so the label set is G = {1, ..., 2n}.

use crate::unionfind::UnionFind;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PairingError {
    #[error("pairing size must be positive and even, got {0}")]
    BadSize(usize),
    #[error("label {0} out of range 1..={1}")]
    LabelOutOfRange(usize, usize),
    #[error("pairing is not a fixed-point-free involution at label {0}")]
    NotInvolution(usize),
    #[error("pairings have different sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("malformed cycle notation: {0}")]
    BadCycleNotation(String),
}

/// A fixed-point-free involution on {1, ..., 2n}, stored as an image array
/// for O(1) application. Cycle notation is used only for I/O.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pairing {
    /// image[i] is the 0-based image of 0-based label i
    image: Vec<usize>,
}

impl Pairing {
    /// Build from disjoint 2-cycles given as 1-based label pairs. The empty
    /// pairing (n2 = 0) is allowed: it is the J_S of a pure link state.
    pub fn from_pairs(n2: usize, pairs: &[(usize, usize)]) -> Result<Self, PairingError> {
        if n2 % 2 != 0 {
            return Err(PairingError::BadSize(n2));
        }
        let mut image = vec![usize::MAX; n2];
        for &(a, b) in pairs {
            for x in [a, b] {
                if x == 0 || x > n2 {
                    return Err(PairingError::LabelOutOfRange(x, n2));
                }
            }
            if a == b || image[a - 1] != usize::MAX || image[b - 1] != usize::MAX {
                return Err(PairingError::NotInvolution(a));
            }
            image[a - 1] = b - 1;
            image[b - 1] = a - 1;
        }
        if let Some(i) = image.iter().position(|&x| x == usize::MAX) {
            return Err(PairingError::NotInvolution(i + 1));
        }
        Ok(Pairing { image })
    }

    /// The head-leg pairing HL = (1 2)(3 4)...(2n-1 2n).
    pub fn head_leg(n: usize) -> Result<Self, PairingError> {
        if n == 0 {
            return Err(PairingError::BadSize(0));
        }
        let image = (0..2 * n).map(|i| i ^ 1).collect();
        Ok(Pairing { image })
    }

    /// Parse cycle notation such as "(1 3)(2 4)".
    pub fn parse(text: &str) -> Result<Self, PairingError> {
        let mut pairs = Vec::new();
        let mut max = 0usize;
        let body = text.trim();
        if !body.starts_with('(') {
            return Err(PairingError::BadCycleNotation(body.to_string()));
        }
        for chunk in body.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let inner = chunk
                .strip_prefix('(')
                .ok_or_else(|| PairingError::BadCycleNotation(text.to_string()))?;
            let labels: Vec<usize> = inner
                .split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| PairingError::BadCycleNotation(s.to_string()))
                })
                .collect::<Result<_, _>>()?;
            if labels.len() != 2 {
                return Err(PairingError::BadCycleNotation(chunk.to_string()));
            }
            max = max.max(labels[0]).max(labels[1]);
            pairs.push((labels[0], labels[1]));
        }
        Self::from_pairs(max, &pairs)
    }

    /// Number of labels 2n.
    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Apply the involution to a 1-based label.
    pub fn apply(&self, a: usize) -> Result<usize, PairingError> {
        if a == 0 || a > self.image.len() {
            return Err(PairingError::LabelOutOfRange(a, self.image.len()));
        }
        Ok(self.image[a - 1] + 1)
    }

    /// The n disjoint 2-cycles, each (min, max), sorted by min label.
    pub fn cycles(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.image.len() / 2);
        for i in 0..self.image.len() {
            let j = self.image[i];
            if i < j {
                out.push((i + 1, j + 1));
            }
        }
        out
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in self.cycles() {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

/// Partition of G into segment cycles: disjoint classes, each closed under
/// both J and HL, each of even size, listed by ascending minimum label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentCyclePartition {
    pub classes: Vec<Vec<usize>>,
}

impl SegmentCyclePartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// Orbit of a 1-based label under iteration of x -> HL(J(x)).
/// The composite map is a bijection, so forward iteration closes the cycle.
pub fn orbit(a: usize, j: &Pairing, hl: &Pairing) -> Result<Vec<usize>, PairingError> {
    if j.len() != hl.len() {
        return Err(PairingError::SizeMismatch(j.len(), hl.len()));
    }
    if a == 0 || a > j.len() {
        return Err(PairingError::LabelOutOfRange(a, j.len()));
    }
    let mut out = vec![a];
    let mut x = hl.apply(j.apply(a)?)?;
    while x != a {
        out.push(x);
        x = hl.apply(j.apply(x)?)?;
    }
    out.sort_unstable();
    Ok(out)
}

/// Segment cycles of the pairing J: orbits of the group generated by HL∘J
/// and HL, computed as union-find over the edges {a, J(a)} and {a, HL(a)}.
pub fn segment_cycles(j: &Pairing, hl: &Pairing) -> Result<SegmentCyclePartition, PairingError> {
    if j.len() != hl.len() {
        return Err(PairingError::SizeMismatch(j.len(), hl.len()));
    }
    let n2 = j.len();
    let mut uf = UnionFind::new(n2);
    for a in 0..n2 {
        uf.union(a, j.image[a]);
        uf.union(a, hl.image[a]);
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n2];
    for a in 0..n2 {
        let r = uf.find(a);
        by_root[r].push(a + 1);
    }
    let mut classes: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
    classes.sort_by_key(|c| c[0]);
    Ok(SegmentCyclePartition { classes })
}

/// |S|_cyc: the number of distinct segment cycles of J.
pub fn cycle_count(j: &Pairing, hl: &Pairing) -> Result<usize, PairingError> {
    Ok(segment_cycles(j, hl)?.class_count())
}

/// Decorated-circle traversal of the segment cycle containing `a`: labels in
/// the cyclic order a, J(a), HL(J(a)), J(HL(J(a))), ..., alternating J- and
/// HL-arcs. Debug/visualization aid; the bracket itself only needs counts.
pub fn decorated_cycle(a: usize, j: &Pairing, hl: &Pairing) -> Result<Vec<usize>, PairingError> {
    if j.len() != hl.len() {
        return Err(PairingError::SizeMismatch(j.len(), hl.len()));
    }
    let mut out = vec![a];
    let mut x = a;
    loop {
        let jx = j.apply(x)?;
        if jx == out[0] {
            break;
        }
        out.push(jx);
        let hjx = hl.apply(jx)?;
        if hjx == out[0] {
            break;
        }
        out.push(hjx);
        x = hjx;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    /// Brute-force oracle: close {a} under both x -> HL(J(x)) and x -> HL(x).
    fn orbit_closure_oracle(a: usize, j: &Pairing, hl: &Pairing) -> Vec<usize> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            stack.push(hl.apply(j.apply(x).unwrap()).unwrap());
            stack.push(hl.apply(x).unwrap());
        }
        seen.into_iter().collect()
    }

    fn cycles_oracle(j: &Pairing, hl: &Pairing) -> Vec<Vec<usize>> {
        let mut remaining: BTreeSet<usize> = (1..=j.len()).collect();
        let mut out = Vec::new();
        while let Some(&a) = remaining.iter().next() {
            let class = orbit_closure_oracle(a, j, hl);
            for x in &class {
                remaining.remove(x);
            }
            out.push(class);
        }
        out
    }

    #[test]
    fn head_leg_small() {
        assert_eq!(Pairing::head_leg(1).unwrap().to_string(), "(1 2)");
        assert_eq!(Pairing::head_leg(2).unwrap().to_string(), "(1 2)(3 4)");
        assert_eq!(Pairing::head_leg(3).unwrap().to_string(), "(1 2)(3 4)(5 6)");
        assert!(Pairing::head_leg(0).is_err());
    }

    #[test]
    fn orbit_of_hl_is_singleton() {
        let hl = Pairing::head_leg(4).unwrap();
        for a in 1..=8 {
            assert_eq!(orbit(a, &hl, &hl).unwrap(), vec![a]);
        }
    }

    #[test]
    fn orbit_hand_iteration() {
        let hl = Pairing::head_leg(2).unwrap();
        let j = Pairing::parse("(1 3)(2 4)").unwrap();
        assert_eq!(orbit(1, &j, &hl).unwrap(), vec![1, 4]);
        assert_eq!(orbit(2, &j, &hl).unwrap(), vec![2, 3]);
        assert!(orbit(5, &j, &hl).is_err());
    }

    #[test]
    fn segment_cycles_hopf_states() {
        let hl = Pairing::head_leg(2).unwrap();
        let j1 = Pairing::parse("(1 3)(2 4)").unwrap();
        let part = segment_cycles(&j1, &hl).unwrap();
        assert_eq!(part.classes, vec![vec![1, 2, 3, 4]]);
        assert_eq!(cycle_count(&j1, &hl).unwrap(), 1);

        let j2 = Pairing::parse("(1 2)(3 4)").unwrap();
        let part = segment_cycles(&j2, &hl).unwrap();
        assert_eq!(part.classes, vec![vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn segment_cycles_three_segments_state() {
        // the state with disjoint segments (1,3), (2,6), (4,5)
        let hl = Pairing::head_leg(3).unwrap();
        let j = Pairing::from_pairs(6, &[(1, 3), (2, 6), (4, 5)]).unwrap();
        let part = segment_cycles(&j, &hl).unwrap();
        assert_eq!(part.classes, cycles_oracle(&j, &hl));
        assert_eq!(part.class_count(), 1);
    }

    #[test]
    fn cycle_count_examples() {
        let hl5 = Pairing::head_leg(5).unwrap();
        assert_eq!(cycle_count(&hl5, &hl5).unwrap(), 5);

        let hl3 = Pairing::head_leg(3).unwrap();
        let j = Pairing::from_pairs(6, &[(1, 4), (3, 6), (5, 2)]).unwrap();
        assert_eq!(cycle_count(&j, &hl3).unwrap(), 1);

        let hl2 = Pairing::head_leg(2).unwrap();
        let j = Pairing::parse("(1 3)(2 4)").unwrap();
        assert_eq!(cycle_count(&j, &hl2).unwrap(), 1);
    }

    #[test]
    fn decorated_cycle_alternates() {
        let hl = Pairing::head_leg(2).unwrap();
        let j = Pairing::parse("(1 3)(2 4)").unwrap();
        assert_eq!(decorated_cycle(1, &j, &hl).unwrap(), vec![1, 3, 4, 2]);
    }

    fn random_involution(n: usize, rng: &mut ChaCha8Rng) -> Pairing {
        let mut labels: Vec<usize> = (1..=2 * n).collect();
        labels.shuffle(rng);
        let pairs: Vec<(usize, usize)> =
            labels.chunks(2).map(|c| (c[0], c[1])).collect();
        Pairing::from_pairs(2 * n, &pairs).unwrap()
    }

    #[test]
    fn random_involutions_satisfy_bounds_and_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5e9c);
        for _ in 0..300 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..8usize));
            let j = random_involution(n, &mut rng);
            let hl = Pairing::head_leg(n).unwrap();
            let part = segment_cycles(&j, &hl).unwrap();
            let k = part.class_count();
            assert!((1..=n).contains(&k), "n={n} k={k}");
            assert_eq!(part.classes, cycles_oracle(&j, &hl));
            // each class even-sized, closed under J and HL, union = G
            let mut all = Vec::new();
            for class in &part.classes {
                assert_eq!(class.len() % 2, 0);
                let set: BTreeSet<_> = class.iter().copied().collect();
                for &x in class {
                    assert!(set.contains(&j.apply(x).unwrap()));
                    assert!(set.contains(&hl.apply(x).unwrap()));
                }
                all.extend(class.iter().copied());
            }
            all.sort_unstable();
            assert_eq!(all, (1..=2 * n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn parse_roundtrip() {
        let j = Pairing::parse("(1 3)(2 4)").unwrap();
        assert_eq!(Pairing::parse(&j.to_string()).unwrap(), j);
        assert!(Pairing::parse("(1 2 3)").is_err());
        assert!(Pairing::parse("(1 1)").is_err());
        assert!(Pairing::parse("nope").is_err());
    }
}
