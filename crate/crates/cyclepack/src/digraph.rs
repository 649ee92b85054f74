//! Directed graphs, walks, paths and congestion accounting.
//!
//! Everything downstream (linkages, the auxiliary-graph algebra, the cycle
//! extraction drivers) lives on top of the types in this module. All values
//! are immutable after construction and all operations are pure.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A simple directed graph on vertices `0..n`. Self-loops and duplicate
/// arcs are rejected at construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<Vec<Vertex>>,
    inn: Vec<Vec<Vertex>>,
    arcs: BTreeSet<(Vertex, Vertex)>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            arcs: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn add_arc(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u >= self.n {
            return Err(Error::VertexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(Error::VertexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !self.arcs.insert((u, v)) {
            return Err(Error::DuplicateArc(u, v));
        }
        self.out[u].push(v);
        self.inn[v].push(u);
        Ok(())
    }

    /// Adds the arc unless it already exists; out-of-range and self-loop
    /// inputs still error. Returns whether the arc was new.
    pub fn ensure_arc(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        if self.has_arc(u, v) {
            return Ok(false);
        }
        self.add_arc(u, v)?;
        Ok(true)
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.inn[v]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// Subgraph on the same vertex set keeping only arcs with both
    /// endpoints in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<Vertex>) -> Digraph {
        let mut g = Digraph::new(self.n);
        for (u, v) in self.arcs() {
            if keep.contains(&u) && keep.contains(&v) {
                g.add_arc(u, v).expect("arc valid in restriction");
            }
        }
        g
    }

    /// All vertices reachable from `sources` (including the sources).
    pub fn reachable_from(&self, sources: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
        let mut seen: BTreeSet<Vertex> = sources.clone();
        let mut stack: Vec<Vertex> = sources.iter().copied().collect();
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Reachability with a set of deleted vertices.
    pub fn reachable_from_avoiding(
        &self,
        sources: &BTreeSet<Vertex>,
        deleted: &BTreeSet<Vertex>,
    ) -> BTreeSet<Vertex> {
        let mut seen: BTreeSet<Vertex> = sources
            .iter()
            .copied()
            .filter(|v| !deleted.contains(v))
            .collect();
        let mut stack: Vec<Vertex> = seen.iter().copied().collect();
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if !deleted.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Kahn toposort check ignoring the vertices in `deleted`.
    pub fn is_acyclic_without(&self, deleted: &BTreeSet<Vertex>) -> bool {
        let mut indeg = vec![0usize; self.n];
        let mut alive = 0usize;
        for v in 0..self.n {
            if deleted.contains(&v) {
                continue;
            }
            alive += 1;
            for &u in &self.inn[v] {
                if !deleted.contains(&u) {
                    indeg[v] += 1;
                }
            }
        }
        let mut queue: Vec<Vertex> = (0..self.n)
            .filter(|v| !deleted.contains(v) && indeg[*v] == 0)
            .collect();
        let mut removed = 0usize;
        while let Some(v) = queue.pop() {
            removed += 1;
            for &w in &self.out[v] {
                if !deleted.contains(&w) {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        queue.push(w);
                    }
                }
            }
        }
        removed == alive
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_without(&BTreeSet::new())
    }
}

/// A nonempty vertex sequence in which every consecutive pair is an arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    vertices: Vec<Vertex>,
}

impl Walk {
    pub fn new(g: &Digraph, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyWalk);
        }
        for &v in &vertices {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange(v, g.n()));
            }
        }
        for pair in vertices.windows(2) {
            if !g.has_arc(pair[0], pair[1]) {
                return Err(Error::InvalidWalk(pair[0], pair[1]));
            }
        }
        Ok(Walk { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    /// Number of arcs traversed.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() >= 2 && self.start() == self.end()
    }

    pub fn has_repeated_vertex(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.vertices.iter().any(|v| !seen.insert(*v))
    }
}

/// A walk with pairwise distinct vertices; a single vertex is a valid
/// zero-length path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(g: &Digraph, vertices: Vec<Vertex>) -> Result<Self> {
        let walk = Walk::new(g, vertices)?;
        Path::from_walk(walk)
    }

    pub fn from_walk(walk: Walk) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &v in walk.vertices() {
            if !seen.insert(v) {
                return Err(Error::NotAPath(v));
            }
        }
        Ok(Path {
            vertices: walk.vertices,
        })
    }

    pub fn singleton(g: &Digraph, v: Vertex) -> Result<Self> {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange(v, g.n()));
        }
        Ok(Path { vertices: vec![v] })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn to_walk(&self) -> Walk {
        Walk {
            vertices: self.vertices.clone(),
        }
    }
}

/// A family of walks with a declared congestion bound.
#[derive(Debug, Clone)]
pub struct WalkFamily {
    walks: Vec<Walk>,
    declared_congestion: usize,
}

impl WalkFamily {
    pub fn new(walks: Vec<Walk>, declared_congestion: usize) -> Result<Self> {
        let measured = congestion(walks.iter().map(|w| w.vertices()));
        if measured > declared_congestion {
            return Err(Error::CongestionExceeded {
                measured,
                declared: declared_congestion,
            });
        }
        Ok(WalkFamily {
            walks,
            declared_congestion,
        })
    }

    pub fn walks(&self) -> &[Walk] {
        &self.walks
    }

    pub fn declared_congestion(&self) -> usize {
        self.declared_congestion
    }

    pub fn measured_congestion(&self) -> usize {
        congestion(self.walks.iter().map(|w| w.vertices()))
    }
}

/// Maximum over vertices of the total visit count; a walk visiting a
/// vertex twice contributes two visits. Empty families have congestion 0.
pub fn congestion<'a, I>(walks: I) -> usize
where
    I: IntoIterator<Item = &'a [Vertex]>,
{
    let mut tally: HashMap<Vertex, usize> = HashMap::new();
    for walk in walks {
        for &v in walk {
            *tally.entry(v).or_insert(0) += 1;
        }
    }
    tally.values().copied().max().unwrap_or(0)
}

/// Shortcuts a walk to a path with the same endpoints. Scans left to
/// right; on revisiting a vertex the enclosed cycle segment is deleted,
/// keeping the earliest occurrence.
pub fn shortcut_walk(w: &Walk) -> Path {
    let mut seq: Vec<Vertex> = Vec::with_capacity(w.vertices().len());
    let mut pos: HashMap<Vertex, usize> = HashMap::new();
    for &v in w.vertices() {
        if let Some(&p) = pos.get(&v) {
            for &u in &seq[p + 1..] {
                pos.remove(&u);
            }
            seq.truncate(p + 1);
        } else {
            pos.insert(v, seq.len());
            seq.push(v);
        }
    }
    Path { vertices: seq }
}

/// Extracts a simple directed cycle from a walk with a repeated vertex.
/// The first repeated vertex in scan order delimits the cycle; the result
/// is a closed walk whose interior vertices are distinct.
pub fn extract_cycle(w: &Walk) -> Result<Walk> {
    let mut first_pos: HashMap<Vertex, usize> = HashMap::new();
    for (i, &v) in w.vertices().iter().enumerate() {
        if let Some(&p) = first_pos.get(&v) {
            return Ok(Walk {
                vertices: w.vertices()[p..=i].to_vec(),
            });
        }
        first_pos.insert(v, i);
    }
    Err(Error::NoCycle)
}

/// Canonical open form of a simple closed walk: the last (repeated) vertex
/// is dropped and the cycle is rotated so its minimum vertex comes first.
pub fn canonical_cycle(closed: &Walk) -> Result<Vec<Vertex>> {
    if !closed.is_closed() {
        return Err(Error::InvalidWitness("cycle walk is not closed".into()));
    }
    let body = &closed.vertices()[..closed.vertices().len() - 1];
    let mut seen = BTreeSet::new();
    for &v in body {
        if !seen.insert(v) {
            return Err(Error::InvalidWitness(format!(
                "cycle revisits vertex {v} before closing"
            )));
        }
    }
    let min_idx = body
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .map(|(i, _)| i)
        .unwrap();
    let mut rotated = Vec::with_capacity(body.len());
    rotated.extend_from_slice(&body[min_idx..]);
    rotated.extend_from_slice(&body[..min_idx]);
    Ok(rotated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(n: usize) -> Digraph {
        let mut g = Digraph::new(n);
        for v in 0..n - 1 {
            g.add_arc(v, v + 1).unwrap();
        }
        g
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let mut g = Digraph::new(3);
        assert!(matches!(g.add_arc(1, 1), Err(Error::SelfLoop(1))));
        g.add_arc(0, 1).unwrap();
        assert!(matches!(g.add_arc(0, 1), Err(Error::DuplicateArc(0, 1))));
        assert!(matches!(
            g.add_arc(0, 7),
            Err(Error::VertexOutOfRange(7, 3))
        ));
    }

    #[test]
    fn congestion_of_disjoint_paths_is_one() {
        let g = line(4);
        let p1 = Walk::new(&g, vec![0, 1]).unwrap();
        let p2 = Walk::new(&g, vec![2, 3]).unwrap();
        assert_eq!(congestion([p1.vertices(), p2.vertices()]), 1);
    }

    #[test]
    fn congestion_counts_repeat_visits_separately() {
        let mut g = Digraph::new(3);
        g.add_arc(0, 1).unwrap();
        g.add_arc(1, 0).unwrap();
        g.add_arc(2, 1).unwrap();
        // one walk visiting vertex 1 twice plus one path through vertex 1
        let w = Walk::new(&g, vec![1, 0, 1]).unwrap();
        let p = Walk::new(&g, vec![2, 1]).unwrap();
        assert_eq!(congestion([w.vertices(), p.vertices()]), 3);
        assert_eq!(congestion(std::iter::empty::<&[Vertex]>()), 0);
    }

    #[test]
    fn congestion_matches_naive_tally_on_random_walks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 20;
        let mut g = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.4) {
                    g.add_arc(u, v).unwrap();
                }
            }
        }
        let mut walks = Vec::new();
        for _ in 0..50 {
            let mut v = rng.gen_range(0..n);
            let mut seq = vec![v];
            for _ in 0..rng.gen_range(0..15) {
                let outs = g.out_neighbors(v);
                if outs.is_empty() {
                    break;
                }
                v = outs[rng.gen_range(0..outs.len())];
                seq.push(v);
            }
            walks.push(Walk::new(&g, seq).unwrap());
        }
        // independent oracle: per-vertex tally over raw sequences
        let mut tally = vec![0usize; n];
        for w in &walks {
            for &v in w.vertices() {
                tally[v] += 1;
            }
        }
        let expected = tally.into_iter().max().unwrap();
        assert_eq!(congestion(walks.iter().map(|w| w.vertices())), expected);
    }

    #[test]
    fn shortcut_is_identity_on_paths() {
        let g = line(3);
        let w = Walk::new(&g, vec![0, 1, 2]).unwrap();
        assert_eq!(shortcut_walk(&w).vertices(), &[0, 1, 2]);
    }

    #[test]
    fn shortcut_deletes_enclosed_cycle() {
        // a->b->c->b->d with a=0 b=1 c=2 d=3
        let mut g = Digraph::new(4);
        for (u, v) in [(0, 1), (1, 2), (2, 1), (1, 3)] {
            g.add_arc(u, v).unwrap();
        }
        let w = Walk::new(&g, vec![0, 1, 2, 1, 3]).unwrap();
        assert_eq!(shortcut_walk(&w).vertices(), &[0, 1, 3]);
    }

    #[test]
    fn shortcut_random_walks_yield_valid_subsequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 12;
        let mut g = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.5) {
                    g.add_arc(u, v).unwrap();
                }
            }
        }
        for _ in 0..200 {
            let mut v = rng.gen_range(0..n);
            let mut seq = vec![v];
            for _ in 0..30 {
                let outs = g.out_neighbors(v);
                if outs.is_empty() {
                    break;
                }
                v = outs[rng.gen_range(0..outs.len())];
                seq.push(v);
            }
            let w = Walk::new(&g, seq.clone()).unwrap();
            let p = shortcut_walk(&w);
            assert_eq!(p.start(), w.start());
            assert_eq!(p.end(), w.end());
            assert!(p.vertices().len() <= w.vertices().len());
            // output is a subsequence of the input
            let mut it = seq.iter();
            for pv in p.vertices() {
                assert!(it.any(|sv| sv == pv));
            }
            // valid path in g
            Path::new(&g, p.vertices().to_vec()).unwrap();
            // idempotent
            assert_eq!(shortcut_walk(&p.to_walk()).vertices(), p.vertices());
        }
    }

    #[test]
    fn extract_cycle_examples() {
        let mut g = Digraph::new(4);
        for (u, v) in [(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)] {
            g.add_arc(u, v).unwrap();
        }
        let w = Walk::new(&g, vec![0, 1, 0]).unwrap();
        assert_eq!(extract_cycle(&w).unwrap().vertices(), &[0, 1, 0]);
        let w = Walk::new(&g, vec![0, 1, 2, 3, 1]).unwrap();
        assert_eq!(extract_cycle(&w).unwrap().vertices(), &[1, 2, 3, 1]);
        let open = Walk::new(&g, vec![0, 1, 2]).unwrap();
        assert!(matches!(extract_cycle(&open), Err(Error::NoCycle)));
    }

    #[test]
    fn extract_cycle_random_closed_walks() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 10;
        let mut g = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.add_arc(u, v).unwrap();
                }
            }
        }
        for _ in 0..200 {
            let s = rng.gen_range(0..n);
            let mut seq = vec![s];
            let mut v = s;
            for _ in 0..rng.gen_range(1..20) {
                v = (v + rng.gen_range(1..n)) % n;
                seq.push(v);
            }
            if v != s {
                seq.push(s);
            }
            let w = Walk::new(&g, seq.clone()).unwrap();
            let c = extract_cycle(&w).unwrap();
            assert!(c.is_closed());
            // distinct except first = last
            let body = &c.vertices()[..c.vertices().len() - 1];
            let distinct: BTreeSet<_> = body.iter().collect();
            assert_eq!(distinct.len(), body.len());
            // arcs of the cycle appear in the walk
            let walk_arcs: BTreeSet<(Vertex, Vertex)> =
                seq.windows(2).map(|p| (p[0], p[1])).collect();
            for pair in c.vertices().windows(2) {
                assert!(walk_arcs.contains(&(pair[0], pair[1])));
            }
        }
    }

    #[test]
    fn canonical_cycle_rotates_to_minimum() {
        let mut g = Digraph::new(4);
        for (u, v) in [(2, 3), (3, 1), (1, 2)] {
            g.add_arc(u, v).unwrap();
        }
        let c = Walk::new(&g, vec![2, 3, 1, 2]).unwrap();
        assert_eq!(canonical_cycle(&c).unwrap(), vec![1, 2, 3]);
    }
}
