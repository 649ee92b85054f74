//! The auxiliary functional digraph of a dual linkage pair, the order it
//! induces on the linkage's paths, induced backlinkages for sublinkages,
//! and interlaced walks.

use std::collections::BTreeMap;

use crate::digraph::{congestion, Digraph, Path, Vertex, Walk};
use crate::error::{Error, Result};
use crate::linkage::RelaxedLinkage;

/// Functional digraph on the path indices of a linkage L: node `i` has a
/// unique out-arc to `next[i]`, realized by the path of the dual that
/// starts at the end of `L[i]`. Always a disjoint union of directed
/// cycles.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AuxGraph {
    next: Vec<usize>,
    prev: Vec<usize>,
    /// `back_of[i]` is the index of the dual path realizing the arc
    /// `(i, next[i])`.
    back_of: Vec<usize>,
}

impl AuxGraph {
    pub fn order(&self) -> usize {
        self.next.len()
    }

    pub fn next(&self, i: usize) -> usize {
        self.next[i]
    }

    pub fn prev(&self, i: usize) -> usize {
        self.prev[i]
    }

    pub fn back_of(&self, i: usize) -> usize {
        self.back_of[i]
    }

    /// The cycles of the functional digraph, each rotated to start at its
    /// minimum node, sorted by that minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.next.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            // `start` is the minimum unvisited node, hence the minimum of
            // its cycle (all smaller cycle members would be visited)
            let mut cyc = vec![start];
            seen[start] = true;
            let mut v = self.next[start];
            while v != start {
                seen[v] = true;
                cyc.push(v);
                v = self.next[v];
            }
            cycles.push(cyc);
        }
        cycles
    }
}

/// The paths of a linkage listed cycle-by-cycle around the auxiliary
/// graph; `boundaries[c]` is the position where cycle `c` begins.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BacklinkOrder {
    pub order: Vec<usize>,
    pub boundaries: Vec<usize>,
}

impl BacklinkOrder {
    /// Index of the cycle containing order position `pos`.
    pub fn cycle_of_position(&self, pos: usize) -> usize {
        match self.boundaries.binary_search(&pos) {
            Ok(c) => c,
            Err(ins) => ins - 1,
        }
    }

    /// Half-open position range `[start, end)` of cycle `c`.
    pub fn cycle_range(&self, c: usize) -> (usize, usize) {
        let start = self.boundaries[c];
        let end = self
            .boundaries
            .get(c + 1)
            .copied()
            .unwrap_or(self.order.len());
        (start, end)
    }

    pub fn cycle_count(&self) -> usize {
        self.boundaries.len()
    }
}

/// Checks that the two path families are dual — the starts of each equal
/// the ends of the other, with all starts distinct and all ends distinct —
/// and builds the auxiliary graph with one arc per dual path.
pub fn build_aux(l: &[Path], lback: &[Path]) -> Result<AuxGraph> {
    if l.len() != lback.len() {
        return Err(Error::NotDual(format!(
            "orders differ: {} vs {}",
            l.len(),
            lback.len()
        )));
    }
    if l.is_empty() {
        return Err(Error::NotDual("empty linkage".into()));
    }
    let end_of_l = endpoint_index(l, |p| p.end(), "ends of L")?;
    let start_of_l = endpoint_index(l, |p| p.start(), "starts of L")?;
    let n = l.len();
    let mut next = vec![usize::MAX; n];
    let mut prev = vec![usize::MAX; n];
    let mut back_of = vec![usize::MAX; n];
    for (bi, q) in lback.iter().enumerate() {
        let u = *end_of_l
            .get(&q.start())
            .ok_or_else(|| Error::NotDual(format!("dual path {bi} starts off B(L)")))?;
        let v = *start_of_l
            .get(&q.end())
            .ok_or_else(|| Error::NotDual(format!("dual path {bi} ends off A(L)")))?;
        if next[u] != usize::MAX {
            return Err(Error::NotDual(format!("two dual paths start at end of L[{u}]")));
        }
        next[u] = v;
        back_of[u] = bi;
        if prev[v] != usize::MAX {
            return Err(Error::NotDual(format!("two dual paths end at start of L[{v}]")));
        }
        prev[v] = u;
    }
    // |lback| = n and every node received exactly one out- and in-arc
    debug_assert!(next.iter().all(|&x| x != usize::MAX));
    Ok(AuxGraph { next, prev, back_of })
}

fn endpoint_index(
    paths: &[Path],
    f: impl Fn(&Path) -> Vertex,
    what: &str,
) -> Result<BTreeMap<Vertex, usize>> {
    let mut map = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        if map.insert(f(p), i).is_some() {
            return Err(Error::NotDual(format!("{what} are not distinct")));
        }
    }
    Ok(map)
}

/// The backlinkage-induced order: cycles sorted by minimum node, each
/// rotated to start at its minimum, concatenated.
pub fn induced_order(aux: &AuxGraph) -> BacklinkOrder {
    let mut order = Vec::with_capacity(aux.order());
    let mut boundaries = Vec::new();
    for cyc in aux.cycles() {
        boundaries.push(order.len());
        order.extend(cyc);
    }
    BacklinkOrder { order, boundaries }
}

/// Concatenates walks/paths in G, dropping the repeated junction vertex.
pub fn concat_walks(g: &Digraph, pieces: &[&[Vertex]]) -> Result<Walk> {
    let mut seq: Vec<Vertex> = Vec::new();
    for piece in pieces {
        if piece.is_empty() {
            return Err(Error::EmptyWalk);
        }
        if let Some(&last) = seq.last() {
            if last != piece[0] {
                return Err(Error::InternalInvariant(format!(
                    "walk pieces do not meet: {last} vs {}",
                    piece[0]
                )));
            }
            seq.extend_from_slice(&piece[1..]);
        } else {
            seq.extend_from_slice(piece);
        }
    }
    Walk::new(g, seq)
}

/// The walk in G associated with a path of the auxiliary graph: the
/// alternation L[n_1], dual, L[n_2], …, L[n_m]. With `closed`, the final
/// dual path (back to the start of L[n_1]) is appended, yielding a closed
/// walk; the node sequence must then be a full auxiliary cycle.
pub fn aux_walk(
    g: &Digraph,
    l: &[Path],
    lback: &[Path],
    aux: &AuxGraph,
    nodes: &[usize],
    closed: bool,
) -> Result<Walk> {
    if nodes.is_empty() {
        return Err(Error::NotAnAuxPath("empty node sequence".into()));
    }
    for &i in nodes {
        if i >= aux.order() {
            return Err(Error::NotAnAuxPath(format!("node {i} out of range")));
        }
    }
    for w in nodes.windows(2) {
        if aux.next(w[0]) != w[1] {
            return Err(Error::NotAnAuxPath(format!(
                "({}, {}) is not an auxiliary arc",
                w[0], w[1]
            )));
        }
    }
    let mut pieces: Vec<&[Vertex]> = Vec::new();
    for (k, &i) in nodes.iter().enumerate() {
        pieces.push(l[i].vertices());
        if k + 1 < nodes.len() || closed {
            pieces.push(lback[aux.back_of(i)].vertices());
        }
    }
    if closed && aux.next(*nodes.last().unwrap()) != nodes[0] {
        return Err(Error::NotAnAuxPath(
            "closed walk requested but last node does not return to first".into(),
        ));
    }
    concat_walks(g, &pieces)
}

/// The closed walks of all auxiliary cycles, in cycle order.
pub fn aux_cycle_walks(
    g: &Digraph,
    l: &[Path],
    lback: &[Path],
    aux: &AuxGraph,
) -> Result<Vec<Walk>> {
    aux.cycles()
        .iter()
        .map(|cyc| aux_walk(g, l, lback, aux, cyc, true))
        .collect()
}

/// The backlinkage induced by the sublinkage `p_idx` of L: for each
/// selected path, chain dual and L paths until re-entering the
/// sublinkage, then shortcut. The result is a relaxed linkage Q with
/// A(P) = B(Q) and A(Q) = B(P), of congestion at most
/// congestion(L) + congestion(Lback).
pub fn induced_backlinkage(
    g: &Digraph,
    l: &[Path],
    lback: &[Path],
    aux: &AuxGraph,
    p_idx: &[usize],
) -> Result<RelaxedLinkage> {
    if p_idx.is_empty() {
        return Err(Error::NotDual("empty sublinkage".into()));
    }
    let mut selected = vec![false; aux.order()];
    for &i in p_idx {
        if i >= aux.order() {
            return Err(Error::NotAnAuxPath(format!("path index {i} out of range")));
        }
        selected[i] = true;
    }
    let step_cap = l.len() + lback.len();
    let mut q_paths = Vec::with_capacity(p_idx.len());
    for &p in p_idx {
        let mut pieces: Vec<&[Vertex]> = vec![lback[aux.back_of(p)].vertices()];
        let mut node = aux.next(p);
        let mut steps = 0usize;
        while !selected[node] {
            pieces.push(l[node].vertices());
            pieces.push(lback[aux.back_of(node)].vertices());
            node = aux.next(node);
            steps += 1;
            if steps > step_cap {
                return Err(Error::InternalInvariant(
                    "induced backlinkage walk exceeded step cap".into(),
                ));
            }
        }
        let walk = concat_walks(g, &pieces)?;
        q_paths.push(crate::digraph::shortcut_walk(&walk));
    }
    let bound =
        congestion(l.iter().map(|p| p.vertices())) + congestion(lback.iter().map(|p| p.vertices()));
    RelaxedLinkage::new(q_paths, bound.max(1))
}

/// The interlaced walk starting at order position `j` of size `q`: the
/// alternation of q linkage paths and q − 1 dual paths along the induced
/// order. Returns the walk and whether it is a path (all vertices
/// distinct). Positions j … j+q−1 must lie inside one auxiliary cycle.
pub fn interlaced_walk(
    g: &Digraph,
    l: &[Path],
    lback: &[Path],
    aux: &AuxGraph,
    ord: &BacklinkOrder,
    j: usize,
    q: usize,
) -> Result<(Walk, bool)> {
    if q == 0 || j + q > ord.order.len() {
        return Err(Error::NotAnAuxPath(format!(
            "positions {j}..{} out of range",
            j + q
        )));
    }
    let c = ord.cycle_of_position(j);
    let (_, end) = ord.cycle_range(c);
    if j + q > end {
        return Err(Error::CrossesCycleBoundary);
    }
    let nodes: Vec<usize> = ord.order[j..j + q].to_vec();
    // within a cycle block, consecutive order positions follow aux arcs,
    // except that the block start is the rotation point: positions after
    // the first wrap around via next() only at the block boundary, which
    // the range check above already excludes
    let w = aux_walk(g, l, lback, aux, &nodes, false)?;
    let is_path = !w.has_repeated_vertex();
    Ok((w, is_path))
}
