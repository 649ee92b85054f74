//! Maximum vertex-disjoint linkages via vertex-capacitated max-flow,
//! well-linkedness checking, and dual linkage construction.

use std::collections::BTreeSet;

use crate::digraph::{congestion, Digraph, Path, Vertex};
use crate::error::{Error, Result};

/// A set of pairwise vertex-disjoint paths. The source set is the set of
/// path starts, the sink set the set of path ends.
#[derive(Debug, Clone)]
pub struct Linkage {
    paths: Vec<Path>,
}

impl Linkage {
    pub fn new(paths: Vec<Path>) -> Result<Self> {
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        for p in &paths {
            for &v in p.vertices() {
                if !seen.insert(v) {
                    return Err(Error::NotDisjoint(v));
                }
            }
        }
        Ok(Linkage { paths })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn order(&self) -> usize {
        self.paths.len()
    }

    /// Source set A: the starts of all paths.
    pub fn sources(&self) -> BTreeSet<Vertex> {
        self.paths.iter().map(|p| p.start()).collect()
    }

    /// Sink set B: the ends of all paths.
    pub fn sinks(&self) -> BTreeSet<Vertex> {
        self.paths.iter().map(|p| p.end()).collect()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.paths
            .iter()
            .flat_map(|p| p.vertices().iter().copied())
            .collect()
    }

    /// Restriction to the paths whose index is in `idx`, preserving order.
    pub fn sublinkage(&self, idx: &[usize]) -> Result<Linkage> {
        let mut paths = Vec::with_capacity(idx.len());
        for &i in idx {
            if i >= self.paths.len() {
                return Err(Error::InternalInvariant(format!(
                    "sublinkage index {i} out of range {}",
                    self.paths.len()
                )));
            }
            paths.push(self.paths[i].clone());
        }
        Linkage::new(paths)
    }
}

/// A path family with a declared congestion bound instead of
/// disjointness; bound 2 is half-integral, 4 quarter-integral.
#[derive(Debug, Clone)]
pub struct RelaxedLinkage {
    paths: Vec<Path>,
    congestion_bound: usize,
}

impl RelaxedLinkage {
    pub fn new(paths: Vec<Path>, congestion_bound: usize) -> Result<Self> {
        let measured = congestion(paths.iter().map(|p| p.vertices()));
        if measured > congestion_bound {
            return Err(Error::CongestionExceeded {
                measured,
                declared: congestion_bound,
            });
        }
        Ok(RelaxedLinkage {
            paths,
            congestion_bound,
        })
    }

    pub fn from_linkage(l: &Linkage) -> Self {
        RelaxedLinkage {
            paths: l.paths().to_vec(),
            congestion_bound: 1,
        }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn order(&self) -> usize {
        self.paths.len()
    }

    pub fn congestion_bound(&self) -> usize {
        self.congestion_bound
    }

    pub fn measured_congestion(&self) -> usize {
        congestion(self.paths.iter().map(|p| p.vertices()))
    }

    pub fn sources(&self) -> BTreeSet<Vertex> {
        self.paths.iter().map(|p| p.start()).collect()
    }

    pub fn sinks(&self) -> BTreeSet<Vertex> {
        self.paths.iter().map(|p| p.end()).collect()
    }
}

/// Result of a well-linkedness check; on failure carries the
/// lexicographically first violating pair and its separator.
#[derive(Debug, Clone)]
pub struct WellLinkedReport {
    pub verdict: bool,
    /// (A, B, separator) for the first violating pair.
    pub witness: Option<(BTreeSet<Vertex>, BTreeSet<Vertex>, BTreeSet<Vertex>)>,
}

const INF: i64 = i64::MAX / 4;

/// Dinic max-flow on a unit-ish capacity network; small and deterministic.
struct FlowNet {
    // edges stored as (to, cap); reverse edge at index ^ 1
    to: Vec<usize>,
    cap: Vec<i64>,
    head: Vec<Vec<usize>>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            to: Vec::new(),
            cap: Vec::new(),
            head: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: i64) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.head[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.head[v].push(id + 1);
        id
    }

    fn bfs(&self, s: usize, t: usize, level: &mut [i32]) -> bool {
        level.fill(-1);
        level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64, level: &[i32], it: &mut [usize]) -> i64 {
        if u == t {
            return f;
        }
        while it[u] < self.head[u].len() {
            let e = self.head[u][it[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let d = self.dfs(v, t, f.min(self.cap[e]), level, it);
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            it[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.head.len();
        let mut flow = 0;
        let mut level = vec![-1i32; n];
        while self.bfs(s, t, &mut level) {
            let mut it = vec![0usize; n];
            loop {
                let f = self.dfs(s, t, INF, &level, &mut it);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network.
    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// Maximum set of pairwise vertex-disjoint A-to-B paths, together with a
/// minimum vertex set meeting every A-to-B path. Vertices in the
/// intersection of A and B count as zero-length paths. The two returned
/// sizes are equal (Menger).
pub fn max_linkage(
    g: &Digraph,
    a: &BTreeSet<Vertex>,
    b: &BTreeSet<Vertex>,
) -> Result<(Linkage, BTreeSet<Vertex>)> {
    max_linkage_avoiding(g, a, b, &BTreeSet::new())
}

/// As [`max_linkage`] but the vertices in `blocked` are removed first.
pub fn max_linkage_avoiding(
    g: &Digraph,
    a: &BTreeSet<Vertex>,
    b: &BTreeSet<Vertex>,
    blocked: &BTreeSet<Vertex>,
) -> Result<(Linkage, BTreeSet<Vertex>)> {
    for &v in a.iter().chain(b.iter()) {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange(v, g.n()));
        }
    }
    let n = g.n();
    // node layout: v_in = 2v, v_out = 2v + 1, source = 2n, sink = 2n + 1
    let s = 2 * n;
    let t = 2 * n + 1;
    let mut net = FlowNet::new(2 * n + 2);
    let mut split_edge = vec![usize::MAX; n];
    for v in 0..n {
        if !blocked.contains(&v) {
            split_edge[v] = net.add_edge(2 * v, 2 * v + 1, 1);
        }
    }
    let mut arc_edges: Vec<(Vertex, Vertex, usize)> = Vec::new();
    for (u, v) in g.arcs() {
        if !blocked.contains(&u) && !blocked.contains(&v) {
            let id = net.add_edge(2 * u + 1, 2 * v, INF);
            arc_edges.push((u, v, id));
        }
    }
    for &v in a {
        if !blocked.contains(&v) {
            net.add_edge(s, 2 * v, INF);
        }
    }
    for &v in b {
        if !blocked.contains(&v) {
            net.add_edge(2 * v + 1, t, INF);
        }
    }
    let flow = net.max_flow(s, t) as usize;

    // min cut: split edges saturated across the residual s-side boundary
    let reach = net.residual_reachable(s);
    let mut separator = BTreeSet::new();
    for v in 0..n {
        let e = split_edge[v];
        if e != usize::MAX && reach[2 * v] && !reach[2 * v + 1] {
            separator.insert(v);
        }
    }
    debug_assert_eq!(separator.len(), flow);

    // decompose the flow into vertex-disjoint paths
    let mut flow_next: Vec<Option<Vertex>> = vec![None; n];
    let mut is_sink_exit = vec![false; n];
    for &(u, v, id) in &arc_edges {
        if net.cap[id ^ 1] > 0 {
            flow_next[u] = Some(v);
        }
    }
    // sink edges: v_out -> t with positive flow means the path ends at v
    for &v in b {
        if !blocked.contains(&v) {
            for &e in &net.head[2 * v + 1] {
                if net.to[e] == t && e % 2 == 0 && net.cap[e ^ 1] > 0 {
                    is_sink_exit[v] = true;
                }
            }
        }
    }
    let mut paths = Vec::with_capacity(flow);
    for &start in a {
        if blocked.contains(&start) {
            continue;
        }
        // path begins at `start` iff the source edge carries flow, i.e.
        // the split edge of `start` is saturated and no flow arc enters it
        let e = split_edge[start];
        if e == usize::MAX || net.cap[e] > 0 {
            continue; // split edge unsaturated: vertex unused
        }
        let entered = arc_edges
            .iter()
            .any(|&(_, v, id)| v == start && net.cap[id ^ 1] > 0);
        if entered {
            continue; // flow passes through `start` mid-path
        }
        let mut seq = vec![start];
        let mut v = start;
        // one unit of flow passes through each used vertex, so the exit
        // from v_out is unique: either the sink edge or one graph arc
        while !outflow_is_sink(&net, 2 * v + 1, t) {
            let w = flow_next[v].expect("flow conservation: non-sink exit is a graph arc");
            seq.push(w);
            v = w;
        }
        debug_assert!(is_sink_exit[v]);
        paths.push(Path::new(g, seq)?);
    }
    debug_assert_eq!(paths.len(), flow);
    let linkage = Linkage::new(paths)?;
    Ok((linkage, separator))
}

/// True if the flow out of node `u_out` goes to the sink rather than
/// along a graph arc.
fn outflow_is_sink(net: &FlowNet, u_out: usize, t: usize) -> bool {
    for &e in &net.head[u_out] {
        if e % 2 == 0 && net.cap[e ^ 1] > 0 {
            return net.to[e] == t;
        }
    }
    false
}

/// Default cap on |W| for well-linkedness checks; the pair enumeration is
/// exponential in |W|.
pub const WELL_LINKED_CAP: usize = 12;

/// Checks whether every pair of equal-size subsets A, B of W admits a
/// full linkage in G minus W \ (A ∪ B). Pairs with shared vertices are
/// covered by the disjoint pairs (shared vertices become zero-length
/// paths after the extra deletions), so the fast scan visits disjoint
/// pairs only; a failing instance is rescanned over all pairs to report
/// the lexicographically first violator.
pub fn is_well_linked(g: &Digraph, w: &BTreeSet<Vertex>, cap: usize) -> Result<WellLinkedReport> {
    if w.len() > cap {
        return Err(Error::CapExceeded {
            what: "well-linked set",
            size: w.len(),
            cap,
        });
    }
    for &v in w {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange(v, g.n()));
        }
    }
    let wv: Vec<Vertex> = w.iter().copied().collect();
    let m = wv.len();
    // fast scan: disjoint pairs only
    for mask_a in 1u32..(1 << m) {
        let ka = mask_a.count_ones();
        let rest = !mask_a & ((1u32 << m) - 1);
        let mut mask_b = rest;
        // iterate over submasks of `rest` with matching popcount
        loop {
            if mask_b.count_ones() == ka && pair_violates(g, &wv, mask_a, mask_b).is_some() {
                return Ok(full_scan_first_violation(g, &wv));
            }
            if mask_b == 0 {
                break;
            }
            mask_b = (mask_b - 1) & rest;
        }
    }
    Ok(WellLinkedReport {
        verdict: true,
        witness: None,
    })
}

/// Returns the separator if (A, B) given by bitmasks over `wv` lacks a
/// full linkage in G minus W \ (A ∪ B).
fn pair_violates(g: &Digraph, wv: &[Vertex], mask_a: u32, mask_b: u32) -> Option<BTreeSet<Vertex>> {
    let a: BTreeSet<Vertex> = mask_vertices(wv, mask_a);
    let b: BTreeSet<Vertex> = mask_vertices(wv, mask_b);
    let blocked: BTreeSet<Vertex> = wv
        .iter()
        .copied()
        .filter(|v| !a.contains(v) && !b.contains(v))
        .collect();
    let (l, sep) = max_linkage_avoiding(g, &a, &b, &blocked).expect("vertices validated");
    if l.order() < a.len() {
        Some(sep)
    } else {
        None
    }
}

fn mask_vertices(wv: &[Vertex], mask: u32) -> BTreeSet<Vertex> {
    wv.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, v)| *v)
        .collect()
}

/// Full scan over all equal-size pairs (including overlapping ones) in
/// ascending (mask_a, mask_b) order; returns the first violation.
fn full_scan_first_violation(g: &Digraph, wv: &[Vertex]) -> WellLinkedReport {
    let m = wv.len();
    for mask_a in 1u32..(1 << m) {
        let ka = mask_a.count_ones();
        for mask_b in 1u32..(1 << m) {
            if mask_b.count_ones() != ka {
                continue;
            }
            if let Some(sep) = pair_violates(g, wv, mask_a, mask_b) {
                return WellLinkedReport {
                    verdict: false,
                    witness: Some((mask_vertices(wv, mask_a), mask_vertices(wv, mask_b), sep)),
                };
            }
        }
    }
    // fast scan found a violation, so this is unreachable
    unreachable!("violation vanished on rescan");
}

/// A linkage of the same order from B(L) back to A(L).
pub fn dual_linkage(g: &Digraph, l: &Linkage) -> Result<Linkage> {
    let (back, _) = max_linkage(g, &l.sinks(), &l.sources())?;
    if back.order() < l.order() {
        return Err(Error::NoDual {
            found: back.order(),
            wanted: l.order(),
        });
    }
    Ok(back)
}

/// Validates that `l` and `lback` are dual: A(L) = B(Lback) and
/// A(Lback) = B(L), with equal orders.
pub fn check_dual(l: &Linkage, lback: &Linkage) -> Result<()> {
    if l.order() != lback.order() {
        return Err(Error::NotDual(format!(
            "orders differ: {} vs {}",
            l.order(),
            lback.order()
        )));
    }
    if l.sources() != lback.sinks() {
        return Err(Error::NotDual("A(L) != B(Lback)".into()));
    }
    if lback.sources() != l.sinks() {
        return Err(Error::NotDual("A(Lback) != B(L)".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
        let mut g = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    g.add_arc(u, v).unwrap();
                }
            }
        }
        g
    }

    /// Independent oracle: minimum vertex set whose removal leaves no
    /// A-to-B path (zero-length paths at A ∩ B included).
    fn brute_min_cut(g: &Digraph, a: &BTreeSet<Vertex>, b: &BTreeSet<Vertex>) -> usize {
        let n = g.n();
        for size in 0..=n {
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let s: BTreeSet<Vertex> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
                let srcs: BTreeSet<Vertex> =
                    a.iter().copied().filter(|v| !s.contains(v)).collect();
                let reach = g.reachable_from_avoiding(&srcs, &s);
                if !b.iter().any(|v| !s.contains(v) && reach.contains(v)) {
                    return size;
                }
            }
        }
        n
    }

    fn check_linkage(g: &Digraph, l: &Linkage, a: &BTreeSet<Vertex>, b: &BTreeSet<Vertex>) {
        let mut used = BTreeSet::new();
        for p in l.paths() {
            assert!(a.contains(&p.start()));
            assert!(b.contains(&p.end()));
            Path::new(g, p.vertices().to_vec()).unwrap();
            for &v in p.vertices() {
                assert!(used.insert(v), "vertex {v} reused");
            }
        }
    }

    #[test]
    fn two_disjoint_arcs() {
        let mut g = Digraph::new(4);
        g.add_arc(0, 2).unwrap();
        g.add_arc(1, 3).unwrap();
        let a: BTreeSet<_> = [0, 1].into();
        let b: BTreeSet<_> = [2, 3].into();
        let (l, sep) = max_linkage(&g, &a, &b).unwrap();
        assert_eq!(l.order(), 2);
        assert_eq!(sep.len(), 2);
        check_linkage(&g, &l, &a, &b);
    }

    #[test]
    fn identity_zero_length_path() {
        let g = Digraph::new(3);
        let a: BTreeSet<_> = [1].into();
        let (l, sep) = max_linkage(&g, &a, &a).unwrap();
        assert_eq!(l.order(), 1);
        assert_eq!(l.paths()[0].vertices(), &[1]);
        assert_eq!(sep.len(), 1);
    }

    #[test]
    fn menger_duality_matches_brute_cut() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..300 {
            let n = rng.gen_range(2..=9);
            let p = rng.gen_range(0.1..0.6);
            let g = random_digraph(&mut rng, n, p);
            let ka = rng.gen_range(1..=n.min(3));
            let kb = rng.gen_range(1..=n.min(3));
            let mut a = BTreeSet::new();
            while a.len() < ka {
                a.insert(rng.gen_range(0..n));
            }
            let mut b = BTreeSet::new();
            while b.len() < kb {
                b.insert(rng.gen_range(0..n));
            }
            let (l, sep) = max_linkage(&g, &a, &b).unwrap();
            assert_eq!(l.order(), sep.len(), "trial {trial}");
            assert_eq!(l.order(), brute_min_cut(&g, &a, &b), "trial {trial}");
            check_linkage(&g, &l, &a, &b);
            // the separator really cuts
            let srcs: BTreeSet<Vertex> = a.iter().copied().filter(|v| !sep.contains(v)).collect();
            let reach = g.reachable_from_avoiding(&srcs, &sep);
            assert!(!b.iter().any(|v| !sep.contains(v) && reach.contains(v)));
        }
    }

    #[test]
    fn well_linked_singleton_and_disconnected() {
        let g = Digraph::new(3);
        let report = is_well_linked(&g, &[1].into(), WELL_LINKED_CAP).unwrap();
        assert!(report.verdict);
        // two vertices with no connecting arcs
        let report = is_well_linked(&g, &[0, 2].into(), WELL_LINKED_CAP).unwrap();
        assert!(!report.verdict);
        let (a, b, sep) = report.witness.unwrap();
        assert_eq!(a.len(), b.len());
        assert!(sep.len() < a.len());
    }

    #[test]
    fn well_linked_cap_guard() {
        let g = Digraph::new(20);
        let w: BTreeSet<_> = (0..15).collect();
        assert!(matches!(
            is_well_linked(&g, &w, 12),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn bidirected_clique_is_well_linked() {
        let n = 6;
        let mut g = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.add_arc(u, v).unwrap();
                }
            }
        }
        let w: BTreeSet<_> = (0..n).collect();
        assert!(is_well_linked(&g, &w, WELL_LINKED_CAP).unwrap().verdict);
    }

    /// Independent oracle: the full pair enumeration with linkage order
    /// decided by the brute-force cut rather than the flow code.
    fn brute_well_linked(g: &Digraph, w: &BTreeSet<Vertex>) -> bool {
        let wv: Vec<Vertex> = w.iter().copied().collect();
        let m = wv.len();
        for mask_a in 1u32..(1 << m) {
            for mask_b in 1u32..(1 << m) {
                if mask_b.count_ones() != mask_a.count_ones() {
                    continue;
                }
                let a = mask_vertices(&wv, mask_a);
                let b = mask_vertices(&wv, mask_b);
                let blocked: BTreeSet<Vertex> = wv
                    .iter()
                    .copied()
                    .filter(|v| !a.contains(v) && !b.contains(v))
                    .collect();
                let restricted = {
                    let keep: BTreeSet<Vertex> =
                        (0..g.n()).filter(|v| !blocked.contains(v)).collect();
                    g.restrict(&keep)
                };
                if brute_min_cut_avoiding(&restricted, &a, &b, &blocked) < a.len() {
                    return false;
                }
            }
        }
        true
    }

    fn brute_min_cut_avoiding(
        g: &Digraph,
        a: &BTreeSet<Vertex>,
        b: &BTreeSet<Vertex>,
        blocked: &BTreeSet<Vertex>,
    ) -> usize {
        let n = g.n();
        let free: Vec<Vertex> = (0..n).filter(|v| !blocked.contains(v)).collect();
        for size in 0..=free.len() {
            for mask in 0u32..(1 << free.len()) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let mut s: BTreeSet<Vertex> = free
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect();
                s.extend(blocked.iter().copied());
                let srcs: BTreeSet<Vertex> =
                    a.iter().copied().filter(|v| !s.contains(v)).collect();
                let reach = g.reachable_from_avoiding(&srcs, &s);
                if !b.iter().any(|v| !s.contains(v) && reach.contains(v)) {
                    return size;
                }
            }
        }
        free.len()
    }

    #[test]
    fn well_linked_matches_independent_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..40 {
            let n = rng.gen_range(3..=7);
            let p = rng.gen_range(0.2..0.8);
            let g = random_digraph(&mut rng, n, p);
            let k = rng.gen_range(1..=n.min(4));
            let mut w = BTreeSet::new();
            while w.len() < k {
                w.insert(rng.gen_range(0..n));
            }
            let fast = is_well_linked(&g, &w, WELL_LINKED_CAP).unwrap();
            assert_eq!(fast.verdict, brute_well_linked(&g, &w));
        }
    }

    #[test]
    fn well_linked_monotone_under_arc_addition() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..30 {
            let n = rng.gen_range(3..=6);
            let mut g = random_digraph(&mut rng, n, 0.3);
            let w: BTreeSet<_> = (0..n.min(4)).collect();
            let before = is_well_linked(&g, &w, WELL_LINKED_CAP).unwrap().verdict;
            // add up to three random missing arcs
            for _ in 0..3 {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    let _ = g.ensure_arc(u, v);
                }
            }
            let after = is_well_linked(&g, &w, WELL_LINKED_CAP).unwrap().verdict;
            assert!(!before || after, "adding arcs flipped true -> false");
        }
    }

    #[test]
    fn dual_on_bidirected_path() {
        let n = 4;
        let mut g = Digraph::new(n);
        for v in 0..n - 1 {
            g.add_arc(v, v + 1).unwrap();
            g.add_arc(v + 1, v).unwrap();
        }
        let l = Linkage::new(vec![Path::new(&g, vec![0, 1, 2, 3]).unwrap()]).unwrap();
        let back = dual_linkage(&g, &l).unwrap();
        assert_eq!(back.order(), 1);
        assert_eq!(back.paths()[0].start(), 3);
        assert_eq!(back.paths()[0].end(), 0);
        check_dual(&l, &back).unwrap();
    }

    #[test]
    fn no_dual_in_dag() {
        let mut g = Digraph::new(3);
        g.add_arc(0, 1).unwrap();
        g.add_arc(1, 2).unwrap();
        let l = Linkage::new(vec![Path::new(&g, vec![0, 1, 2]).unwrap()]).unwrap();
        assert!(matches!(
            dual_linkage(&g, &l),
            Err(Error::NoDual { found: 0, wanted: 1 })
        ));
    }

    #[test]
    fn dual_of_dual_swaps_endpoint_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut found = 0;
        while found < 20 {
            let n = 15;
            let g = random_digraph(&mut rng, n, 0.25);
            let a: BTreeSet<_> = [0, 1, 2].into();
            let b: BTreeSet<_> = [12, 13, 14].into();
            let (l, _) = max_linkage(&g, &a, &b).unwrap();
            if l.order() < 3 {
                continue;
            }
            let Ok(back) = dual_linkage(&g, &l) else {
                continue;
            };
            found += 1;
            check_dual(&l, &back).unwrap();
            let back2 = dual_linkage(&g, &back).unwrap();
            assert_eq!(back2.sources(), l.sources());
            assert_eq!(back2.sinks(), l.sinks());
        }
    }
}
