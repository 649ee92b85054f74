//! Constructive cycle extraction: walk systems over a well-linked set,
//! untangling dual linkages into interlaced paths, the sparse and dense
//! extraction routines, and the packing drivers for congestion 2, 3,
//! and 4.

use std::collections::{BTreeSet, HashMap};

use crate::backlinkage::{aux_cycle_walks, aux_walk, build_aux, induced_order, interlaced_walk, AuxGraph};
use crate::digraph::{congestion, extract_cycle, Digraph, Path, Vertex, Walk};
use crate::error::{Error, Result};
use crate::intersection::{
    degeneracy, independent_transversal, intersection_graph, max_core, ColoredGraph, UGraph,
};
use crate::linkage::{is_well_linked, max_linkage, Linkage, WELL_LINKED_CAP};
use crate::partition::{disjoint_pairs, disjoint_pairs_with, OrderedBipartite, Rat};

/// A family of cycles certifying a congestion-`p` packing of size `k`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct CyclePackingCert {
    /// Simple directed cycles, each in canonical rotation (minimum
    /// vertex first, closing arc implicit).
    pub cycles: Vec<Vec<Vertex>>,
    pub p: usize,
    pub k: usize,
}

impl CyclePackingCert {
    pub fn measured_congestion(&self) -> usize {
        congestion(self.cycles.iter().map(|c| c.as_slice()))
    }

    pub fn validate(&self, g: &Digraph) -> Result<()> {
        if self.cycles.len() < self.k {
            return Err(Error::InvalidWitness(format!(
                "{} cycles, claimed {}",
                self.cycles.len(),
                self.k
            )));
        }
        for (i, c) in self.cycles.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidWitness(format!("cycle {i} is empty")));
            }
            let distinct: BTreeSet<Vertex> = c.iter().copied().collect();
            if distinct.len() != c.len() {
                return Err(Error::InvalidWitness(format!("cycle {i} repeats a vertex")));
            }
            for t in 0..c.len() {
                let (u, v) = (c[t], c[(t + 1) % c.len()]);
                if !g.has_arc(u, v) {
                    return Err(Error::InvalidWitness(format!(
                        "cycle {i} uses missing arc ({u}, {v})"
                    )));
                }
            }
        }
        let measured = self.measured_congestion();
        if measured > self.p {
            return Err(Error::CongestionExceeded {
                measured,
                declared: self.p,
            });
        }
        Ok(())
    }
}

/// Walks with designated marked positions: on each walk, `b` marked A
/// positions all precede `b` marked B positions, and the marked
/// vertices are pairwise distinct across the whole system.
#[derive(Debug, Clone)]
pub struct WalkSystem {
    pub walks: Vec<Walk>,
    /// (position on walk, vertex) for each A mark, ascending positions.
    pub a_marks: Vec<Vec<(usize, Vertex)>>,
    pub b_marks: Vec<Vec<(usize, Vertex)>>,
    /// Declared congestion of the walk family (1 or 2).
    pub congestion_tag: usize,
}

impl WalkSystem {
    pub fn order(&self) -> usize {
        self.walks.len()
    }

    /// Size of each marked set.
    pub fn set_size(&self) -> usize {
        self.a_marks.first().map_or(0, |m| m.len())
    }

    pub fn a_vertices(&self, i: usize) -> BTreeSet<Vertex> {
        self.a_marks[i].iter().map(|&(_, v)| v).collect()
    }

    pub fn b_vertices(&self, i: usize) -> BTreeSet<Vertex> {
        self.b_marks[i].iter().map(|&(_, v)| v).collect()
    }

    pub fn validate(&self, g: &Digraph) -> Result<()> {
        let a = self.walks.len();
        if self.a_marks.len() != a || self.b_marks.len() != a {
            return Err(Error::InvalidWitness("mark row count differs from walk count".into()));
        }
        let b = self.set_size();
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        for i in 0..a {
            Walk::new(g, self.walks[i].vertices().to_vec())?;
            for marks in [&self.a_marks[i], &self.b_marks[i]] {
                if marks.len() != b || b == 0 {
                    return Err(Error::InvalidWitness(format!(
                        "walk {i} has a marked set of size {} instead of {b}",
                        marks.len()
                    )));
                }
                for &(pos, v) in marks {
                    if self.walks[i].vertices().get(pos) != Some(&v) {
                        return Err(Error::InvalidWitness(format!(
                            "mark ({pos}, {v}) not on walk {i}"
                        )));
                    }
                    if !seen.insert(v) {
                        return Err(Error::InvalidWitness(format!(
                            "marked vertex {v} appears in two sets"
                        )));
                    }
                }
            }
            let max_a = self.a_marks[i].iter().map(|&(p, _)| p).max().unwrap();
            let min_b = self.b_marks[i].iter().map(|&(p, _)| p).min().unwrap();
            if max_a >= min_b {
                return Err(Error::InvalidWitness(format!(
                    "A marks do not precede B marks on walk {i}"
                )));
            }
        }
        let measured = congestion(self.walks.iter().map(|w| w.vertices()));
        if measured > self.congestion_tag {
            return Err(Error::CongestionExceeded {
                measured,
                declared: self.congestion_tag,
            });
        }
        Ok(())
    }
}

/// Outcome of the walk-system constructions: either the marked walks or
/// an early half-integral packing.
#[derive(Debug, Clone)]
pub enum WalkVerdict {
    System(WalkSystem),
    Packing(CyclePackingCert),
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct FailureReport {
    pub stage: String,
    pub reason: String,
    pub data_ref: String,
}

/// Rotates a simple closed vertex sequence (without the closing
/// repetition) so its minimum vertex comes first.
fn canonical_rotation(body: &[Vertex]) -> Vec<Vertex> {
    let min_pos = body
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| *v)
        .map(|(i, _)| i)
        .unwrap();
    let mut out = Vec::with_capacity(body.len());
    out.extend_from_slice(&body[min_pos..]);
    out.extend_from_slice(&body[..min_pos]);
    out
}

/// Extracts a simple cycle from a walk containing a repeated vertex and
/// returns it in canonical rotation.
fn cycle_from_walk(w: &Walk) -> Result<Vec<Vertex>> {
    let closed = extract_cycle(w)?;
    let body = &closed.vertices()[..closed.vertices().len() - 1];
    Ok(canonical_rotation(body))
}

/// Half-integral packing from the closed walks of the auxiliary graph's
/// cycles: each closed walk alternates forward and dual paths, so the
/// family of one extracted cycle per auxiliary cycle has congestion 2.
fn packing_from_aux(
    g: &Digraph,
    l: &[Path],
    lback: &[Path],
    aux: &AuxGraph,
    k: usize,
) -> Result<CyclePackingCert> {
    let walks = aux_cycle_walks(g, l, lback, aux)?;
    let cycles = walks
        .iter()
        .take(k)
        .map(cycle_from_walk)
        .collect::<Result<Vec<_>>>()?;
    let cert = CyclePackingCert { cycles, p: 2, k };
    cert.validate(g)?;
    Ok(cert)
}

fn split_halves(d_set: &BTreeSet<Vertex>) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
    let vec: Vec<Vertex> = d_set.iter().copied().collect();
    let half = vec.len() / 2;
    (
        vec[..half].iter().copied().collect(),
        vec[half..].iter().copied().collect(),
    )
}

/// Checks well-linkedness of `d_set` when it is small enough, returning
/// whether the check actually ran.
fn check_well_linked(g: &Digraph, d_set: &BTreeSet<Vertex>) -> Result<bool> {
    if d_set.len() > WELL_LINKED_CAP {
        return Ok(false);
    }
    let rep = is_well_linked(g, d_set, WELL_LINKED_CAP)?;
    if !rep.verdict {
        let (a, b, sep) = rep.witness.unwrap();
        return Err(Error::NoLinkage(format!(
            "set is not well-linked: no full linkage {a:?} -> {b:?} (separator {sep:?})"
        )));
    }
    Ok(true)
}

/// Full linkage between two sets, or a `NoLinkage` error naming the
/// separating cut.
fn full_linkage(g: &Digraph, from: &BTreeSet<Vertex>, to: &BTreeSet<Vertex>) -> Result<Linkage> {
    let (l, sep) = max_linkage(g, from, to)?;
    if l.order() < from.len().min(to.len()) {
        return Err(Error::NoLinkage(format!(
            "only {} of {} disjoint paths; separator {sep:?}",
            l.order(),
            from.len().min(to.len())
        )));
    }
    Ok(l)
}

/// Builds a congestion-2 walk system over a well-linked set of size
/// 4(a+k)b, or returns a half-integral packing of k cycles when the
/// auxiliary graph already has that many cycles. The second component
/// reports whether well-linkedness was actually verified (sets above
/// the check cap are trusted).
pub fn walk_system(
    g: &Digraph,
    d_set: &BTreeSet<Vertex>,
    a: usize,
    b: usize,
    k: usize,
) -> Result<(WalkVerdict, bool)> {
    if a == 0 || b == 0 || k == 0 {
        return Err(Error::BadSpec("a, b, k must be positive".into()));
    }
    if d_set.len() != 4 * (a + k) * b {
        return Err(Error::HypothesisViolated(format!(
            "|D| = {} but 4(a+k)b = {}",
            d_set.len(),
            4 * (a + k) * b
        )));
    }
    let checked = check_well_linked(g, d_set)?;
    let (d1, d2) = split_halves(d_set);
    let l = full_linkage(g, &d1, &d2)?;
    let lb = full_linkage(g, &d2, &d1)?;
    let aux = build_aux(l.paths(), lb.paths())?;
    let ord = induced_order(&aux);
    if ord.cycle_count() >= k {
        let cert = packing_from_aux(g, l.paths(), lb.paths(), &aux, k)?;
        return Ok((WalkVerdict::Packing(cert), checked));
    }
    // index blocks of 2b consecutive order positions; an index is good
    // when its block stays within one auxiliary cycle
    let blocks = a + k;
    let mut good = Vec::new();
    for i in 0..blocks {
        let s = i * 2 * b;
        let e = s + 2 * b;
        if ord.cycle_of_position(s) == ord.cycle_of_position(e - 1) {
            good.push(i);
        }
    }
    // each of the < k cycle boundaries ruins at most one block
    debug_assert!(blocks - good.len() < k);
    if good.len() < a {
        return Err(Error::InternalInvariant(format!(
            "only {} good index blocks, need {a}",
            good.len()
        )));
    }
    let mut walks = Vec::with_capacity(a);
    let mut a_marks = Vec::with_capacity(a);
    let mut b_marks = Vec::with_capacity(a);
    for &i in good.iter().take(a) {
        let s = i * 2 * b;
        let nodes = &ord.order[s..s + 2 * b];
        let walk = aux_walk(g, l.paths(), lb.paths(), &aux, nodes, false)?;
        // designated position of each forward path's start within the
        // concatenated walk
        let mut marks: Vec<(usize, Vertex)> = Vec::with_capacity(2 * b);
        let mut pos = 0usize;
        for (t, &n) in nodes.iter().enumerate() {
            marks.push((pos, l.paths()[n].start()));
            pos += l.paths()[n].len();
            if t + 1 < nodes.len() {
                pos += lb.paths()[aux.back_of(n)].len();
            }
        }
        a_marks.push(marks[..b].to_vec());
        b_marks.push(marks[b..].to_vec());
        walks.push(walk);
    }
    let sys = WalkSystem {
        walks,
        a_marks,
        b_marks,
        congestion_tag: 2,
    };
    sys.validate(g)?;
    Ok((WalkVerdict::System(sys), checked))
}

/// The fixed pairing (1,2),(2,1),(3,4),(4,3),… as 0-based index pairs.
pub fn pairing(a: usize) -> Vec<(usize, usize)> {
    (0..a / 2)
        .flat_map(|t| [(2 * t, 2 * t + 1), (2 * t + 1, 2 * t)])
        .collect()
}

fn mark_position(marks: &[(usize, Vertex)], v: Vertex) -> Option<usize> {
    marks.iter().find(|&&(_, m)| m == v).map(|&(p, _)| p)
}

/// Sparse extraction: given the walk system and one linkage per pairing
/// element with pairwise d-degenerate intersection graphs, picks
/// pairwise disjoint representative paths by an independent transversal
/// and closes one cycle per consecutive walk pair. Output congestion is
/// at most (walk congestion) + 1.
pub fn sparse_win(
    g: &Digraph,
    sys: &WalkSystem,
    links: &[Linkage],
    d: usize,
) -> Result<CyclePackingCert> {
    let a = sys.order();
    if a == 0 || a % 2 != 0 {
        return Err(Error::HypothesisViolated(format!("need an even number of walks, got {a}")));
    }
    let pr = pairing(a);
    if links.len() != pr.len() {
        return Err(Error::BadSpec(format!(
            "{} linkages for {} pairing elements",
            links.len(),
            pr.len()
        )));
    }
    let b = sys.set_size();
    let need = 4.0 * std::f64::consts::E * (a as f64) * (d as f64);
    if (b as f64) < need {
        return Err(Error::HypothesisViolated(format!(
            "marked set size {b} below 4ead = {need:.2}"
        )));
    }
    for (t, &(i, j)) in pr.iter().enumerate() {
        let bs = sys.b_vertices(i);
        let asj = sys.a_vertices(j);
        for p in links[t].paths() {
            if !bs.contains(&p.start()) || !asj.contains(&p.end()) {
                return Err(Error::BadSpec(format!(
                    "linkage {t} has a path not running from B_{i} to A_{j}"
                )));
            }
        }
    }
    // colored intersection graph over all linkage paths
    let total: usize = links.iter().map(|l| l.order()).sum();
    let mut graph = UGraph::new(total);
    let mut offset = vec![0usize; links.len()];
    let mut acc = 0usize;
    for (t, l) in links.iter().enumerate() {
        offset[t] = acc;
        acc += l.order();
    }
    let mut occ: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for (t, l) in links.iter().enumerate() {
        for (i, p) in l.paths().iter().enumerate() {
            for &v in p.vertices() {
                occ.entry(v).or_default().push(offset[t] + i);
            }
        }
    }
    for ids in occ.values() {
        for x in 0..ids.len() {
            for y in x + 1..ids.len() {
                if ids[x] != ids[y] {
                    graph.add_edge(ids[x], ids[y])?;
                }
            }
        }
    }
    let classes: Vec<Vec<usize>> = links
        .iter()
        .enumerate()
        .map(|(t, l)| (offset[t]..offset[t] + l.order()).collect())
        .collect();
    let colored = ColoredGraph::new(graph, classes)?;
    let chosen = independent_transversal(&colored, d as f64, true)?;
    let chosen_path = |t: usize| -> &Path { &links[t].paths()[chosen[t] - offset[t]] };
    // one cycle per consecutive pair of walks
    let mut cycles = Vec::with_capacity(a / 2);
    for t in 0..a / 2 {
        let (i1, i2) = (2 * t, 2 * t + 1);
        let fwd = chosen_path(2 * t); // B_{i1} -> A_{i2}
        let back = chosen_path(2 * t + 1); // B_{i2} -> A_{i1}
        let seg = |i: usize, from: Vertex, to: Vertex| -> Result<Vec<Vertex>> {
            let pa = mark_position(&sys.a_marks[i], from).ok_or_else(|| {
                Error::InternalInvariant(format!("vertex {from} not an A mark of walk {i}"))
            })?;
            let pb = mark_position(&sys.b_marks[i], to).ok_or_else(|| {
                Error::InternalInvariant(format!("vertex {to} not a B mark of walk {i}"))
            })?;
            Ok(sys.walks[i].vertices()[pa..=pb].to_vec())
        };
        let mut seq = seg(i1, back.end(), fwd.start())?;
        append_piece(&mut seq, fwd.vertices())?;
        let seg2 = seg(i2, fwd.end(), back.start())?;
        append_piece(&mut seq, &seg2)?;
        append_piece(&mut seq, back.vertices())?;
        let closed = Walk::new(g, seq)?;
        if !closed.is_closed() {
            return Err(Error::InternalInvariant("extraction walk did not close".into()));
        }
        cycles.push(cycle_from_walk(&closed)?);
    }
    let alpha = congestion(sys.walks.iter().map(|w| w.vertices()));
    let cert = CyclePackingCert {
        cycles,
        p: alpha + 1,
        k: a / 2,
    };
    cert.validate(g)?;
    Ok(cert)
}

fn append_piece(seq: &mut Vec<Vertex>, piece: &[Vertex]) -> Result<()> {
    match seq.last() {
        Some(&last) if last == piece[0] => {
            seq.extend_from_slice(&piece[1..]);
            Ok(())
        }
        _ => Err(Error::InternalInvariant("extraction pieces do not meet".into())),
    }
}

/// Occurrence blocks of `paths` inside `walk`: for each path appearing
/// as a contiguous subsequence, its (start position, path index), in
/// order of appearance.
fn subpath_blocks(walk: &Walk, paths: &[Path]) -> Vec<(usize, usize)> {
    let w = walk.vertices();
    let mut blocks = Vec::new();
    for (idx, p) in paths.iter().enumerate() {
        let pv = p.vertices();
        if pv.len() > w.len() {
            continue;
        }
        for s in 0..=w.len() - pv.len() {
            if &w[s..s + pv.len()] == pv {
                blocks.push((s, idx));
                break;
            }
        }
    }
    blocks.sort_unstable();
    blocks
}

/// Dense extraction: for each aligned pair of walks, finds a crossing
/// pair of intersection edges (an inversion between the appearance
/// orders) and closes a cycle through both walks. Output congestion is
/// at most the sum of the two walk-family congestions.
pub fn dense_win(
    g: &Digraph,
    u_walks: &[Walk],
    w_walks: &[Walk],
    l: &[Path],
    kp: &[Path],
) -> Result<CyclePackingCert> {
    if u_walks.len() != w_walks.len() || u_walks.is_empty() {
        return Err(Error::BadSpec("walk families must be nonempty and aligned".into()));
    }
    let count = u_walks.len();
    let mut cycles = Vec::with_capacity(count);
    for i in 0..count {
        let ub = subpath_blocks(&u_walks[i], l);
        let wb = subpath_blocks(&w_walks[i], kp);
        // bipartite intersection restricted to these paths
        let vert_sets = |blocks: &[(usize, usize)], fam: &[Path]| -> Vec<BTreeSet<Vertex>> {
            blocks
                .iter()
                .map(|&(_, idx)| fam[idx].vertices().iter().copied().collect())
                .collect()
        };
        let us = vert_sets(&ub, l);
        let ws = vert_sets(&wb, kp);
        let mut edges = Vec::new();
        for x in 0..us.len() {
            for y in 0..ws.len() {
                if us[x].intersection(&ws[y]).next().is_some() {
                    edges.push((x, y));
                }
            }
        }
        if edges.len() < us.len() + ws.len() {
            return Err(Error::IsForest(i));
        }
        // inversion: edges (x1, y1), (x2, y2) with x1 < x2 and y2 < y1
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for &(x1, y1) in &edges {
            for &(x2, y2) in &edges {
                if x1 < x2 && y2 < y1 {
                    let cand = (x1, y1, x2, y2);
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        let (x1, y1, x2, y2) = best.ok_or_else(|| {
            Error::InternalInvariant(format!(
                "no inversion in a non-forest intersection restriction (walk {i})"
            ))
        })?;
        let start = *us[x1].intersection(&ws[y1]).next().unwrap();
        let turn = *us[x2].intersection(&ws[y2]).next().unwrap();
        let pos_in = |blocks: &[(usize, usize)], fam: &[Path], slot: usize, v: Vertex| -> usize {
            let (bpos, idx) = blocks[slot];
            bpos + fam[idx].vertices().iter().position(|&x| x == v).unwrap()
        };
        let up0 = pos_in(&ub, l, x1, start);
        let up1 = pos_in(&ub, l, x2, turn);
        let wp0 = pos_in(&wb, kp, y2, turn);
        let wp1 = pos_in(&wb, kp, y1, start);
        if up0 > up1 || wp0 > wp1 {
            return Err(Error::InternalInvariant("inversion positions out of order".into()));
        }
        let mut seq = u_walks[i].vertices()[up0..=up1].to_vec();
        append_piece(&mut seq, &w_walks[i].vertices()[wp0..=wp1])?;
        let closed = Walk::new(g, seq)?;
        cycles.push(cycle_from_walk(&closed)?);
    }
    let alpha = congestion(u_walks.iter().map(|w| w.vertices()));
    let beta = congestion(w_walks.iter().map(|w| w.vertices()));
    let cert = CyclePackingCert {
        cycles,
        p: alpha + beta,
        k: count,
    };
    cert.validate(g)?;
    Ok(cert)
}

/// A vertex-distinct prefix of a greedy walk covering `q` consecutive
/// forward paths of a dual linkage pair.
#[derive(Debug, Clone)]
pub struct InterlacedPath {
    pub path: Path,
    /// Forward-path indices (into the linkage), in traversal order.
    pub forward: Vec<usize>,
    /// Order position where the greedy walk began.
    pub start_pos: usize,
}

#[derive(Debug, Clone)]
pub enum UntangleVerdict {
    Path(InterlacedPath),
    Packing(CyclePackingCert),
}

/// Greedy untangling of a dual linkage pair of size q(2k−2)+1: walks
/// forward and dual paths along the induced order until a cycle closes
/// or an auxiliary cycle ends. Returns either k half-integral cycles or
/// an interlaced path through q consecutive forward paths.
pub fn untangle(
    g: &Digraph,
    l: &Linkage,
    lback: &Linkage,
    q: usize,
    k: usize,
) -> Result<UntangleVerdict> {
    if q == 0 || k == 0 {
        return Err(Error::BadSpec("q and k must be positive".into()));
    }
    let want = q * (2 * k - 2) + 1;
    if l.order() != want || lback.order() != want {
        return Err(Error::HypothesisViolated(format!(
            "linkage size {} differs from q(2k-2)+1 = {want}",
            l.order()
        )));
    }
    let aux = build_aux(l.paths(), lback.paths())?;
    let ord = induced_order(&aux);
    let n = ord.order.len();
    let mut used = vec![false; n];
    let mut self_cycles: Vec<Vec<Vertex>> = Vec::new();
    let mut best: Option<InterlacedPath> = None;
    let mut next_start = 0usize;
    while next_start < n {
        while next_start < n && used[next_start] {
            next_start += 1;
        }
        if next_start >= n {
            break;
        }
        let pos0 = next_start;
        let (_, ce) = ord.cycle_range(ord.cycle_of_position(pos0));
        let mut walk: Vec<Vertex> = Vec::new();
        let mut seen: HashMap<Vertex, usize> = HashMap::new();
        let mut fwd: Vec<usize> = Vec::new();
        let mut snapshot: Option<usize> = None; // walk length after q forward paths
        let mut pos = pos0;
        // appends a piece; returns true when the walk self-intersects,
        // ending this greedy round with a recorded cycle
        let grow = |piece: &[Vertex],
                        walk: &mut Vec<Vertex>,
                        seen: &mut HashMap<Vertex, usize>,
                        self_cycles: &mut Vec<Vec<Vertex>>|
         -> bool {
            for &v in piece {
                if walk.last() == Some(&v) {
                    continue;
                }
                if let Some(&p) = seen.get(&v) {
                    self_cycles.push(canonical_rotation(&walk[p..]));
                    return true;
                }
                seen.insert(v, walk.len());
                walk.push(v);
            }
            false
        };
        'round: loop {
            let node = ord.order[pos];
            used[pos] = true;
            fwd.push(node);
            if fwd.len() == q + 1 && best.is_none() {
                if let Some(len) = snapshot {
                    best = Some(InterlacedPath {
                        path: Path::new(g, walk[..len].to_vec())?,
                        forward: fwd[..q].to_vec(),
                        start_pos: pos0,
                    });
                }
            }
            if grow(l.paths()[node].vertices(), &mut walk, &mut seen, &mut self_cycles) {
                break 'round;
            }
            if fwd.len() == q && snapshot.is_none() {
                snapshot = Some(walk.len());
            }
            if pos + 1 >= ce {
                // clean end at an auxiliary cycle boundary; a prefix of
                // exactly q forward paths is already an interlaced path
                if best.is_none() && fwd.len() >= q {
                    if let Some(len) = snapshot {
                        best = Some(InterlacedPath {
                            path: Path::new(g, walk[..len].to_vec())?,
                            forward: fwd[..q].to_vec(),
                            start_pos: pos0,
                        });
                    }
                }
                break 'round;
            }
            if grow(
                lback.paths()[aux.back_of(node)].vertices(),
                &mut walk,
                &mut seen,
                &mut self_cycles,
            ) {
                break 'round;
            }
            pos += 1;
        }
    }
    // verdict priority: cycles the greedy walks closed themselves, then
    // a long interlaced path, then the auxiliary cycles; at least one
    // branch always applies
    if self_cycles.len() >= k {
        let cert = CyclePackingCert {
            cycles: self_cycles.into_iter().take(k).collect(),
            p: 2,
            k,
        };
        cert.validate(g)?;
        return Ok(UntangleVerdict::Packing(cert));
    }
    if let Some(ip) = best {
        return Ok(UntangleVerdict::Path(ip));
    }
    if ord.cycle_count() >= k {
        return Ok(UntangleVerdict::Packing(packing_from_aux(
            g,
            l.paths(),
            lback.paths(),
            &aux,
            k,
        )?));
    }
    Err(Error::InternalInvariant(
        "untangling produced neither enough cycles nor a long walk".into(),
    ))
}

/// Builds a congestion-1 walk system (disjoint paths) over a
/// well-linked set of size 2(ab(2k−2)+1) by untangling, or forwards the
/// half-integral packing verdict.
pub fn disjoint_walk_system(
    g: &Digraph,
    d_set: &BTreeSet<Vertex>,
    a: usize,
    b: usize,
    k: usize,
) -> Result<(WalkVerdict, bool)> {
    if a == 0 || b == 0 || k == 0 {
        return Err(Error::BadSpec("a, b, k must be positive".into()));
    }
    let want = 2 * (a * b * (2 * k - 2) + 1);
    if d_set.len() != want {
        return Err(Error::HypothesisViolated(format!(
            "|D| = {} but 2(ab(2k-2)+1) = {want}",
            d_set.len()
        )));
    }
    let checked = check_well_linked(g, d_set)?;
    let (d1, d2) = split_halves(d_set);
    let l = full_linkage(g, &d1, &d2)?;
    let lb = full_linkage(g, &d2, &d1)?;
    match untangle(g, &l, &lb, a * b, k)? {
        UntangleVerdict::Packing(c) => Ok((WalkVerdict::Packing(c), checked)),
        UntangleVerdict::Path(ip) => {
            let verts = ip.path.vertices();
            let dpos: Vec<usize> = verts
                .iter()
                .enumerate()
                .filter(|(_, v)| d_set.contains(v))
                .map(|(i, _)| i)
                .collect();
            if dpos.len() < 2 * a * b {
                return Err(Error::InternalInvariant(format!(
                    "interlaced path hits only {} vertices of D, need {}",
                    dpos.len(),
                    2 * a * b
                )));
            }
            let mut walks = Vec::with_capacity(a);
            let mut a_marks = Vec::with_capacity(a);
            let mut b_marks = Vec::with_capacity(a);
            for i in 0..a {
                let block = &dpos[i * 2 * b..(i + 1) * 2 * b];
                let s = block[0];
                let e = block[2 * b - 1];
                let walk = Walk::new(g, verts[s..=e].to_vec())?;
                let marks: Vec<(usize, Vertex)> =
                    block.iter().map(|&p| (p - s, verts[p])).collect();
                a_marks.push(marks[..b].to_vec());
                b_marks.push(marks[b..].to_vec());
                walks.push(walk);
            }
            let sys = WalkSystem {
                walks,
                a_marks,
                b_marks,
                congestion_tag: 1,
            };
            sys.validate(g)?;
            Ok((WalkVerdict::System(sys), checked))
        }
    }
}

/// Constant-selection mode for the packing drivers.
#[derive(Debug, Clone, Copy)]
pub enum ConstantsMode {
    /// Full-strength constants; guarantees hold but instances must be
    /// enormous.
    Paper,
    /// Caller-supplied parameters; every downstream guard is still
    /// enforced and every certificate validated, but success is not
    /// guaranteed.
    Scaled { d: usize, a: usize, b: usize },
}

fn fail(stage: &str, err: impl std::fmt::Display) -> FailureReport {
    FailureReport {
        stage: stage.to_string(),
        reason: err.to_string(),
        data_ref: String::new(),
    }
}

/// Packs k cycles with per-vertex congestion at most p ∈ {2, 3, 4} over
/// a well-linked set, or reports the pipeline stage that failed. Every
/// returned certificate is validated before being returned.
pub fn pack_cycles(
    g: &Digraph,
    d_set: &BTreeSet<Vertex>,
    k: usize,
    p: usize,
    mode: ConstantsMode,
) -> std::result::Result<CyclePackingCert, FailureReport> {
    if k == 0 {
        return Err(fail("parameters", "k must be positive"));
    }
    let mut cert = match p {
        4 => drive_quarter(g, d_set, k, mode)?,
        2 | 3 => drive_low(g, d_set, k, p, mode)?,
        _ => return Err(fail("parameters", format!("unsupported congestion {p}"))),
    };
    if cert.p > p {
        return Err(fail(
            "validation",
            format!("certificate congestion bound {} exceeds requested {p}", cert.p),
        ));
    }
    cert.p = p;
    cert.k = k;
    cert.validate(g).map_err(|e| fail("validation", e))?;
    Ok(cert)
}

/// The quarter-integral (p = 4) driver: walk system, cross linkages
/// over the fixed pairing, then the sparse or dense extraction.
fn drive_quarter(
    g: &Digraph,
    d_set: &BTreeSet<Vertex>,
    k: usize,
    mode: ConstantsMode,
) -> std::result::Result<CyclePackingCert, FailureReport> {
    let (d, a, b) = match mode {
        ConstantsMode::Paper => {
            let d = (1usize << 10) * k;
            let a = 2 * k;
            let b = (4.0 * std::f64::consts::E * (a as f64) * (d as f64)).ceil() as usize;
            (d, a, b)
        }
        ConstantsMode::Scaled { d, a, b } => (d, a, b),
    };
    if a == 0 || a % 2 != 0 || b == 0 {
        return Err(fail("parameters", "need even a >= 2 and b >= 1"));
    }
    let (verdict, _checked) =
        walk_system(g, d_set, a, b, k).map_err(|e| fail("walk system", e))?;
    let sys = match verdict {
        WalkVerdict::Packing(c) => return Ok(c),
        WalkVerdict::System(s) => s,
    };
    let links = cross_linkages(g, &sys, b).map_err(|e| fail("cross linkages", e))?;
    match first_dense_pair(&links, d) {
        None => sparse_win(g, &sys, &links, d).map_err(|e| fail("sparse extraction", e)),
        Some((t, tp)) => {
            let (lsub, ksub) =
                dense_core_sublinkages(&links[t], &links[tp], d).map_err(|e| fail("dense core", e))?;
            let lb = full_linkage(g, &lsub.sinks(), &lsub.sources())
                .map_err(|e| fail("return linkage", e))?;
            let kb = full_linkage(g, &ksub.sinks(), &ksub.sources())
                .map_err(|e| fail("return linkage", e))?;
            let aux_l = build_aux(lsub.paths(), lb.paths()).map_err(|e| fail("auxiliary graph", e))?;
            let aux_k = build_aux(ksub.paths(), kb.paths()).map_err(|e| fail("auxiliary graph", e))?;
            let ord_l = induced_order(&aux_l);
            let ord_k = induced_order(&aux_k);
            if ord_l.cycle_count() >= k {
                return packing_from_aux(g, lsub.paths(), lb.paths(), &aux_l, k)
                    .map_err(|e| fail("auxiliary packing", e));
            }
            if ord_k.cycle_count() >= k {
                return packing_from_aux(g, ksub.paths(), kb.paths(), &aux_k, k)
                    .map_err(|e| fail("auxiliary packing", e));
            }
            let ob = position_bipartite(&lsub, &ord_l.order, &ksub, &ord_k.order)
                .map_err(|e| fail("segment pairs", e))?;
            let pairs = match mode {
                ConstantsMode::Paper => disjoint_pairs(&ob, 3 * k, 2),
                ConstantsMode::Scaled { .. } => {
                    disjoint_pairs_with(&ob, 3 * k, Rat::new(4, 3 * k as i128), |_| true)
                }
            }
            .map_err(|e| fail("segment pairs", e))?;
            // a pair is good when each side stays within one auxiliary cycle
            let good: Vec<_> = pairs
                .iter()
                .filter(|pr| {
                    ord_l.cycle_of_position(pr.x.0) == ord_l.cycle_of_position(pr.x.1 - 1)
                        && ord_k.cycle_of_position(pr.y.0) == ord_k.cycle_of_position(pr.y.1 - 1)
                })
                .take(k)
                .collect();
            if good.len() < k {
                return Err(fail("good indices", format!("only {} of {k}", good.len())));
            }
            let mut u_walks = Vec::with_capacity(k);
            let mut w_walks = Vec::with_capacity(k);
            for pr in &good {
                let (u, _) = interlaced_walk(
                    g,
                    lsub.paths(),
                    lb.paths(),
                    &aux_l,
                    &ord_l,
                    pr.x.0,
                    pr.x.1 - pr.x.0,
                )
                .map_err(|e| fail("interlaced walks", e))?;
                let (w, _) = interlaced_walk(
                    g,
                    ksub.paths(),
                    kb.paths(),
                    &aux_k,
                    &ord_k,
                    pr.y.0,
                    pr.y.1 - pr.y.0,
                )
                .map_err(|e| fail("interlaced walks", e))?;
                u_walks.push(u);
                w_walks.push(w);
            }
            dense_win(g, &u_walks, &w_walks, lsub.paths(), ksub.paths())
                .map_err(|e| fail("dense extraction", e))
        }
    }
}

/// The half- and third-integral (p = 2, 3) driver: seed with a walk
/// system (disjoint for p = 2), untangle every cross linkage, then run
/// the sparse or dense extraction on the untangled material.
fn drive_low(
    g: &Digraph,
    d_set: &BTreeSet<Vertex>,
    k: usize,
    p: usize,
    mode: ConstantsMode,
) -> std::result::Result<CyclePackingCert, FailureReport> {
    let (d, a, b, q) = match mode {
        ConstantsMode::Paper => {
            let d = 3 * (1usize << 10) * k;
            let a = 2 * k;
            let q = (4.0 * std::f64::consts::E * (a as f64) * (d as f64)).ceil() as usize;
            let core = q * (2 * k - 2) + 1;
            let b = if p == 2 { 2 * core } else { core };
            (d, a, b, q)
        }
        ConstantsMode::Scaled { d, a, b } => {
            let q = if k == 1 { 1 } else { ((b - 1) / (2 * k - 2)).max(1) };
            (d, a, b, q)
        }
    };
    if a == 0 || a % 2 != 0 || b == 0 {
        return Err(fail("parameters", "need even a >= 2 and b >= 1"));
    }
    let sub_size = q * (2 * k - 2) + 1;
    if sub_size > b {
        return Err(fail(
            "parameters",
            format!("untangling needs {sub_size} paths but only {b} are available"),
        ));
    }
    let (verdict, _checked) = if p == 2 {
        disjoint_walk_system(g, d_set, a, b, k).map_err(|e| fail("walk system", e))?
    } else {
        walk_system(g, d_set, a, b, k).map_err(|e| fail("walk system", e))?
    };
    let sys = match verdict {
        WalkVerdict::Packing(c) => return Ok(c),
        WalkVerdict::System(s) => s,
    };
    let links = cross_linkages(g, &sys, b).map_err(|e| fail("cross linkages", e))?;
    // untangle each cross linkage into an interlaced path
    let mut qs: Vec<Linkage> = Vec::with_capacity(links.len());
    let mut ips: Vec<InterlacedPath> = Vec::with_capacity(links.len());
    for link in &links {
        let idx: Vec<usize> = (0..sub_size).collect();
        let sub = link.sublinkage(&idx).map_err(|e| fail("untangling", e))?;
        let subback = full_linkage(g, &sub.sinks(), &sub.sources())
            .map_err(|e| fail("return linkage", e))?;
        match untangle(g, &sub, &subback, q, k).map_err(|e| fail("untangling", e))? {
            UntangleVerdict::Packing(c) => return Ok(c),
            UntangleVerdict::Path(ip) => {
                qs.push(sub.sublinkage(&ip.forward).map_err(|e| fail("untangling", e))?);
                ips.push(ip);
            }
        }
    }
    match first_dense_pair(&qs, d) {
        None => sparse_win(g, &sys, &qs, d).map_err(|e| fail("sparse extraction", e)),
        Some((t, tp)) => {
            let (q1, q2) =
                dense_core_sublinkages(&qs[t], &qs[tp], d).map_err(|e| fail("dense core", e))?;
            let ob = position_bipartite(&q1, &identity_order(q1.order()), &q2, &identity_order(q2.order()))
                .map_err(|e| fail("segment pairs", e))?;
            let pairs = match mode {
                ConstantsMode::Paper => disjoint_pairs(&ob, k, 2),
                ConstantsMode::Scaled { .. } => {
                    disjoint_pairs_with(&ob, k, Rat::new(4, k as i128), |_| true)
                }
            }
            .map_err(|e| fail("segment pairs", e))?;
            let slice_walk = |ip: &InterlacedPath, lkg: &Linkage, r: (usize, usize)| -> Result<Walk> {
                let first = lkg.paths()[r.0].start();
                let last = lkg.paths()[r.1 - 1].end();
                let verts = ip.path.vertices();
                let s = verts.iter().position(|&v| v == first).ok_or_else(|| {
                    Error::InternalInvariant("segment start not on interlaced path".into())
                })?;
                let e = verts.iter().position(|&v| v == last).ok_or_else(|| {
                    Error::InternalInvariant("segment end not on interlaced path".into())
                })?;
                if s > e {
                    return Err(Error::InternalInvariant("segment reversed on interlaced path".into()));
                }
                Walk::new(g, verts[s..=e].to_vec())
            };
            let mut u_walks = Vec::with_capacity(k);
            let mut w_walks = Vec::with_capacity(k);
            for pr in pairs.iter().take(k) {
                u_walks.push(slice_walk(&ips[t], &q1, pr.x).map_err(|e| fail("segment walks", e))?);
                w_walks.push(slice_walk(&ips[tp], &q2, pr.y).map_err(|e| fail("segment walks", e))?);
            }
            if u_walks.len() < k {
                return Err(fail("segment pairs", format!("only {} pairs of {k}", u_walks.len())));
            }
            dense_win(g, &u_walks, &w_walks, q1.paths(), q2.paths())
                .map_err(|e| fail("dense extraction", e))
        }
    }
}

fn identity_order(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// One full B_i → A_j linkage per pairing element.
fn cross_linkages(g: &Digraph, sys: &WalkSystem, b: usize) -> Result<Vec<Linkage>> {
    let pr = pairing(sys.order());
    let mut links = Vec::with_capacity(pr.len());
    for &(i, j) in &pr {
        let link = full_linkage(g, &sys.b_vertices(i), &sys.a_vertices(j))?;
        if link.order() < b {
            return Err(Error::NoLinkage(format!(
                "cross linkage B_{i} -> A_{j} has only {} paths",
                link.order()
            )));
        }
        links.push(link);
    }
    Ok(links)
}

/// The lexicographically first pair of linkages whose intersection
/// graph is not d-degenerate, if any.
fn first_dense_pair(links: &[Linkage], d: usize) -> Option<(usize, usize)> {
    for t in 0..links.len() {
        for tp in t + 1..links.len() {
            let ig = intersection_graph(links[t].paths(), links[tp].paths());
            if degeneracy(&ig.graph).0 > d {
                return Some((t, tp));
            }
        }
    }
    None
}

/// Restricts two linkages to a core of their intersection graph with
/// minimum degree above d.
fn dense_core_sublinkages(l: &Linkage, kk: &Linkage, d: usize) -> Result<(Linkage, Linkage)> {
    let ig = intersection_graph(l.paths(), kk.paths());
    let core = max_core(&ig.graph, d).ok_or_else(|| {
        Error::InternalInvariant("no core above the degeneracy threshold".into())
    })?;
    let li: Vec<usize> = (0..l.order()).filter(|i| core.contains(i)).collect();
    let ki: Vec<usize> = (0..kk.order())
        .filter(|j| core.contains(&(l.order() + j)))
        .collect();
    if li.is_empty() || ki.is_empty() {
        return Err(Error::InternalInvariant("dense core misses one side".into()));
    }
    Ok((l.sublinkage(&li)?, kk.sublinkage(&ki)?))
}

/// Ordered bipartite intersection graph over the given path orders.
fn position_bipartite(
    l: &Linkage,
    lord: &[usize],
    kk: &Linkage,
    kord: &[usize],
) -> Result<OrderedBipartite> {
    let edges: Vec<(usize, usize)> = (0..lord.len())
        .flat_map(|i| (0..kord.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let lp = &l.paths()[lord[i]];
            let kp = &kk.paths()[kord[j]];
            lp.vertices().iter().any(|v| kp.contains(*v))
        })
        .collect();
    OrderedBipartite::new(lord.len(), kord.len(), edges)
}
