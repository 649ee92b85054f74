//! Directed-treewidth lower-bound witnesses and balanced separations:
//! a brute-force balanced-separation search, checkers for the two
//! witness structures, and the dense-subgraph construction pipeline.

use std::collections::BTreeSet;

use crate::backlinkage::{build_aux, induced_backlinkage, induced_order, AuxGraph};
use crate::digraph::{congestion, Digraph, Path, Vertex};
use crate::error::{Error, Result};
use crate::intersection::{degeneracy, intersection_graph, max_core};
use crate::linkage::{max_linkage, Linkage};
use crate::partition::{disjoint_pairs_with, OrderedBipartite, Rat};

/// A separation: X ∪ Y covers the vertex set and no arc leaves Y \ X
/// into X \ Y; the order is |X ∩ Y|.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Separation {
    pub x: BTreeSet<Vertex>,
    pub y: BTreeSet<Vertex>,
}

impl Separation {
    pub fn order(&self) -> usize {
        self.x.intersection(&self.y).count()
    }

    pub fn validate(&self, g: &Digraph) -> Result<()> {
        for v in g.vertices() {
            if !self.x.contains(&v) && !self.y.contains(&v) {
                return Err(Error::InvalidWitness(format!(
                    "vertex {v} in neither side of the separation"
                )));
            }
        }
        for (u, v) in g.arcs() {
            let u_strict_y = self.y.contains(&u) && !self.x.contains(&u);
            let v_strict_x = self.x.contains(&v) && !self.y.contains(&v);
            if u_strict_y && v_strict_x {
                return Err(Error::InvalidWitness(format!(
                    "arc ({u}, {v}) crosses from Y \\ X to X \\ Y"
                )));
            }
        }
        Ok(())
    }
}

/// Default vertex-count cap for the brute-force separation search.
pub const SEPARATION_CAP: usize = 18;

/// Searches for a separation of order at most `w` in which each side
/// holds at least |W|/4 elements of `w_set`. Candidate separators S are
/// enumerated in (size, lexicographic) order; for each, every bipartition
/// (A, B) of W \ S is tried with Y = S ∪ B ∪ R(B) (R = reachability from
/// B avoiding S) and X = (V \ Y) ∪ S. The first qualifying separation is
/// returned; `None` means no qualifying separation exists at this order.
pub fn balanced_separation(
    g: &Digraph,
    w_set: &BTreeSet<Vertex>,
    w: usize,
    cap: usize,
) -> Result<Option<Separation>> {
    let n = g.n();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "separation search graph",
            size: n,
            cap,
        });
    }
    for &v in w_set {
        if v >= n {
            return Err(Error::VertexOutOfRange(v, n));
        }
    }
    let quarter = |side: &BTreeSet<Vertex>| 4 * side.intersection(w_set).count() >= w_set.len();
    let all: BTreeSet<Vertex> = g.vertices().collect();
    for size in 0..=w.min(n) {
        for s in subsets_of_size(n, size) {
            let free: Vec<Vertex> = w_set.iter().copied().filter(|v| !s.contains(v)).collect();
            // bipartition by bitmask; bit set = element goes to B
            for mask in 0u64..(1u64 << free.len()) {
                let b: BTreeSet<Vertex> = free
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect();
                let mut y: BTreeSet<Vertex> = g.reachable_from_avoiding(&b, &s);
                y.extend(s.iter().copied());
                let mut x: BTreeSet<Vertex> = all.difference(&y).copied().collect();
                x.extend(s.iter().copied());
                if quarter(&x) && quarter(&y) {
                    let sep = Separation { x, y };
                    debug_assert!(sep.validate(g).is_ok());
                    debug_assert!(sep.order() <= size);
                    return Ok(Some(sep));
                }
            }
        }
    }
    Ok(None)
}

/// All size-`k` subsets of 0..n in lexicographic order of their sorted
/// element lists.
fn subsets_of_size(n: usize, k: usize) -> Vec<BTreeSet<Vertex>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut Vec<BTreeSet<Vertex>>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// A system of disjoint paths with marked subpaths A_i before B_i, and
/// pairwise disjoint cross-links from each B_i to each A_j (i ≠ j).
/// Valid instances certify directed treewidth at least k/8 for the union
/// subgraph.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct GridWitness {
    /// Vertex sequences of the disjoint paths P_1 … P_k.
    pub paths: Vec<Vec<Vertex>>,
    /// Half-open index range of the subpath A_i within paths[i].
    pub a_span: Vec<(usize, usize)>,
    /// Half-open index range of the subpath B_i within paths[i].
    pub b_span: Vec<(usize, usize)>,
    /// Cross-links: (i, j, vertex sequence) with i ≠ j, starting in B_i
    /// and ending in A_j.
    pub links: Vec<(usize, usize, Vec<Vertex>)>,
}

impl GridWitness {
    pub fn k(&self) -> usize {
        self.paths.len()
    }

    pub fn certified_bound(&self) -> usize {
        self.k().div_ceil(8)
    }

    /// Vertex set of the union subgraph the certificate speaks about.
    pub fn union_vertices(&self) -> BTreeSet<Vertex> {
        self.paths
            .iter()
            .chain(self.links.iter().map(|(_, _, l)| l))
            .flatten()
            .copied()
            .collect()
    }
}

/// Validates every structural invariant of a [`GridWitness`] against G
/// and returns the certified lower bound ⌈k/8⌉ on the directed treewidth
/// of the union subgraph.
pub fn verify_grid_witness(g: &Digraph, wit: &GridWitness) -> Result<usize> {
    let k = wit.k();
    if k == 0 {
        return Err(Error::InvalidWitness("no paths".into()));
    }
    if wit.a_span.len() != k || wit.b_span.len() != k {
        return Err(Error::InvalidWitness("span count differs from path count".into()));
    }
    let mut used: BTreeSet<Vertex> = BTreeSet::new();
    for (i, p) in wit.paths.iter().enumerate() {
        Path::new(g, p.clone()).map_err(|e| Error::InvalidWitness(format!("path {i}: {e}")))?;
        for &v in p {
            if !used.insert(v) {
                return Err(Error::InvalidWitness(format!(
                    "paths are not disjoint at vertex {v}"
                )));
            }
        }
        let (a0, a1) = wit.a_span[i];
        let (b0, b1) = wit.b_span[i];
        if a0 >= a1 || b0 >= b1 || a1 > p.len() || b1 > p.len() {
            return Err(Error::InvalidWitness(format!("empty or out-of-range span on path {i}")));
        }
        if a1 > b0 {
            return Err(Error::InvalidWitness(format!(
                "subpath A does not precede subpath B on path {i}"
            )));
        }
    }
    // expect exactly one link per ordered pair i != j
    let mut seen_pairs = BTreeSet::new();
    let mut link_used: BTreeSet<Vertex> = BTreeSet::new();
    for (i, j, l) in &wit.links {
        if *i >= k || *j >= k || i == j {
            return Err(Error::InvalidWitness(format!("bad link pair ({i}, {j})")));
        }
        if !seen_pairs.insert((*i, *j)) {
            return Err(Error::InvalidWitness(format!("duplicate link ({i}, {j})")));
        }
        Path::new(g, l.clone())
            .map_err(|e| Error::InvalidWitness(format!("link ({i}, {j}): {e}")))?;
        for &v in l {
            if !link_used.insert(v) {
                return Err(Error::InvalidWitness(format!(
                    "links are not disjoint at vertex {v}"
                )));
            }
        }
        let (b0, b1) = wit.b_span[*i];
        if !wit.paths[*i][b0..b1].contains(&l[0]) {
            return Err(Error::InvalidWitness(format!(
                "link ({i}, {j}) does not start in subpath B of path {i}"
            )));
        }
        let (a0, a1) = wit.a_span[*j];
        if !wit.paths[*j][a0..a1].contains(l.last().unwrap()) {
            return Err(Error::InvalidWitness(format!(
                "link ({i}, {j}) does not end in subpath A of path {j}"
            )));
        }
    }
    if seen_pairs.len() != k * (k - 1) {
        return Err(Error::InvalidWitness(format!(
            "expected {} links, found {}",
            k * (k - 1),
            seen_pairs.len()
        )));
    }
    Ok(wit.certified_bound())
}

/// Four half-integral path families with a claimed treewidth bound k:
/// the first pair and the second pair are each dual, and a high minimum
/// degree of the cross intersection graph certifies directed treewidth
/// at least k for the union subgraph.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct LinkagePairWitness {
    pub p: Vec<Vec<Vertex>>,
    pub pback: Vec<Vec<Vertex>>,
    pub q: Vec<Vec<Vertex>>,
    pub qback: Vec<Vec<Vertex>>,
    pub k: usize,
}

impl LinkagePairWitness {
    pub fn union_vertices(&self) -> BTreeSet<Vertex> {
        self.p
            .iter()
            .chain(&self.pback)
            .chain(&self.q)
            .chain(&self.qback)
            .flatten()
            .copied()
            .collect()
    }
}

/// The required minimum degree 8k·log_{4/3}(|P|/24k) + 24k + 4 of the
/// cross intersection graph, as a real number.
pub fn linkage_pair_degree_bound(p_count: usize, k: usize) -> f64 {
    let kk = k as f64;
    let log = ((p_count as f64) / (24.0 * kk)).log2() / (4.0f64 / 3.0).log2();
    8.0 * kk * log + 24.0 * kk + 4.0
}

/// Comparison slack for the real-valued degree bound; borderline cases
/// are rejected.
pub const DEGREE_BOUND_EPS: f64 = 1e-9;

fn to_paths(g: &Digraph, fam: &[Vec<Vertex>], what: &str) -> Result<Vec<Path>> {
    fam.iter()
        .map(|v| {
            Path::new(g, v.clone()).map_err(|e| Error::InvalidWitness(format!("{what}: {e}")))
        })
        .collect()
}

/// Validates a [`LinkagePairWitness`]: each family has congestion at
/// most 2, the two pairs are dual, and the minimum degree of the cross
/// intersection graph strictly clears the required bound. Returns the
/// certified treewidth lower bound k for the union subgraph.
pub fn verify_linkage_pair_witness(g: &Digraph, wit: &LinkagePairWitness) -> Result<usize> {
    if wit.k == 0 {
        return Err(Error::InvalidWitness("k must be positive".into()));
    }
    let p = to_paths(g, &wit.p, "P")?;
    let pback = to_paths(g, &wit.pback, "P dual")?;
    let q = to_paths(g, &wit.q, "Q")?;
    let qback = to_paths(g, &wit.qback, "Q dual")?;
    for (fam, name) in [(&p, "P"), (&pback, "P dual"), (&q, "Q"), (&qback, "Q dual")] {
        let c = congestion(fam.iter().map(|x| x.vertices()));
        if c > 2 {
            return Err(Error::InvalidWitness(format!(
                "family {name} has congestion {c} > 2"
            )));
        }
    }
    build_aux(&p, &pback).map_err(|e| Error::InvalidWitness(format!("duality of (P, P dual): {e}")))?;
    build_aux(&q, &qback).map_err(|e| Error::InvalidWitness(format!("duality of (Q, Q dual): {e}")))?;
    let ig = intersection_graph(&p, &q);
    let min_deg = ig.min_degree() as f64;
    let bound = linkage_pair_degree_bound(p.len(), wit.k);
    if min_deg <= bound + DEGREE_BOUND_EPS {
        return Err(Error::BoundNotMet {
            lhs: min_deg,
            rhs: bound,
        });
    }
    Ok(wit.k)
}

/// Constant-selection mode for the dense-subgraph pipeline.
#[derive(Debug, Clone, Copy)]
pub enum DenseConstants {
    /// Enforce the degeneracy guard with the full-strength constants.
    Paper,
    /// Skip the degeneracy guard and run with the supplied
    /// average-degree target r.
    Scaled { r: usize },
}

/// One of the produced subgraphs D_i with its layered refinements.
#[derive(Debug, Clone)]
pub struct DenseSubgraph {
    pub vertices: BTreeSet<Vertex>,
    /// Annotated extra arcs closing the broken auxiliary cycles; not
    /// inserted into the input graph.
    pub artificial_arcs: Vec<(Vertex, Vertex)>,
    /// Forward linkage segments.
    pub u: Vec<Path>,
    pub w: Vec<Path>,
    /// Dual sides, including two-vertex paths over artificial arcs.
    pub ub: Vec<Path>,
    pub wb: Vec<Path>,
    /// Refined dual pairs with high-minimum-degree cross intersection.
    pub p: Vec<Path>,
    pub pback: Vec<Path>,
    pub q: Vec<Path>,
    pub qback: Vec<Path>,
}

#[derive(Debug, Clone)]
pub struct DenseReport {
    pub subgraphs: Vec<DenseSubgraph>,
    /// Maximum number of subgraphs any single vertex belongs to.
    pub max_membership: usize,
    /// The average-degree target used for the segment pairs.
    pub r: usize,
}

fn stage<T>(name: &'static str, r: std::result::Result<T, Error>) -> Result<T> {
    r.map_err(|e| Error::PipelineStage {
        stage: name,
        reason: e.to_string(),
    })
}

/// Runs the dense-subgraph pipeline: restrict to a high-minimum-degree
/// core of the intersection graph, take fresh duals, order both linkages
/// by their auxiliary cycles, split into `a` disjoint segment pairs of
/// average cross-degree at least r, close broken auxiliary cycles with
/// annotated artificial arcs, and refine each subgraph to a pair of dual
/// half-integral linkages with high-minimum-degree cross intersection.
pub fn build_dense_subgraphs(
    g: &Digraph,
    l: &Linkage,
    kk: &Linkage,
    a: usize,
    b: usize,
    mode: DenseConstants,
) -> Result<DenseReport> {
    if a == 0 || b == 0 {
        return Err(Error::BadSpec("a and b must be positive".into()));
    }
    let ig = intersection_graph(l.paths(), kk.paths());
    let (degen, _) = degeneracy(&ig.graph);
    let (core_threshold, r) = match mode {
        DenseConstants::Paper => {
            let d = 327_680.0 * (a as f64) * (b as f64) * ((l.order() as f64) / (b as f64)).log2();
            if (degen as f64) <= d {
                return Err(Error::HypothesisViolated(format!(
                    "intersection graph degeneracy {degen} not above {d}"
                )));
            }
            (d.floor() as usize, 0usize) // r fixed after restriction below
        }
        DenseConstants::Scaled { r } => {
            if degen == 0 {
                return Err(Error::PipelineStage {
                    stage: "core",
                    reason: "intersection graph has no edges".into(),
                });
            }
            (degen - 1, r)
        }
    };
    let core = max_core(&ig.graph, core_threshold).ok_or(Error::PipelineStage {
        stage: "core",
        reason: format!("no induced subgraph of minimum degree above {core_threshold}"),
    })?;
    let l_idx: Vec<usize> = (0..l.order()).filter(|i| core.contains(i)).collect();
    let k_idx: Vec<usize> = (0..kk.order())
        .filter(|j| core.contains(&(l.order() + j)))
        .collect();
    if l_idx.is_empty() || k_idx.is_empty() {
        return Err(Error::PipelineStage {
            stage: "core",
            reason: "core misses one side entirely".into(),
        });
    }
    let lr = l.sublinkage(&l_idx)?;
    let kr = kk.sublinkage(&k_idx)?;
    let r = match mode {
        DenseConstants::Paper => {
            (640.0 * (b as f64) * ((lr.order() as f64) / (b as f64)).log2()).ceil() as usize
        }
        DenseConstants::Scaled { .. } => r,
    };
    if r == 0 {
        return Err(Error::PipelineStage {
            stage: "segment pairs",
            reason: "average-degree target r vanished (restricted linkage too small)".into(),
        });
    }

    // fresh duals of the restricted linkages
    let (lback, _) = stage("dual of L", max_linkage(g, &lr.sinks(), &lr.sources()))?;
    if lback.order() < lr.order() {
        return Err(Error::PipelineStage {
            stage: "dual of L",
            reason: format!("only {} of {} return paths", lback.order(), lr.order()),
        });
    }
    let (kback, _) = stage("dual of K", max_linkage(g, &kr.sinks(), &kr.sources()))?;
    if kback.order() < kr.order() {
        return Err(Error::PipelineStage {
            stage: "dual of K",
            reason: format!("only {} of {} return paths", kback.order(), kr.order()),
        });
    }
    let aux_l = stage("auxiliary graph of L", build_aux(lr.paths(), lback.paths()))?;
    let aux_k = stage("auxiliary graph of K", build_aux(kr.paths(), kback.paths()))?;
    let ord_l = induced_order(&aux_l);
    let ord_k = induced_order(&aux_k);

    // ordered bipartite graph over order positions
    let edges: Vec<(usize, usize)> = (0..ord_l.order.len())
        .flat_map(|i| (0..ord_k.order.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let lp = &lr.paths()[ord_l.order[i]];
            let kp = &kr.paths()[ord_k.order[j]];
            lp.vertices().iter().any(|v| kp.contains(*v))
        })
        .collect();
    let ob = OrderedBipartite::new(ord_l.order.len(), ord_k.order.len(), edges)?;
    let d_param = Rat::new(2 * r as i128, a as i128);
    let guard: Box<dyn FnOnce(u64) -> bool> = match mode {
        DenseConstants::Paper => {
            let need = (1u64 << 9) * (r as u64) * (a as u64);
            Box::new(move |min_deg| min_deg >= need)
        }
        DenseConstants::Scaled { .. } => Box::new(|_| true),
    };
    let pairs = stage("segment pairs", disjoint_pairs_with(&ob, a, d_param, guard))?;

    let mut subgraphs = Vec::with_capacity(a);
    for pair in &pairs {
        let u_nodes: BTreeSet<usize> =
            (pair.x.0..pair.x.1).map(|pos| ord_l.order[pos]).collect();
        let w_nodes: BTreeSet<usize> =
            (pair.y.0..pair.y.1).map(|pos| ord_k.order[pos]).collect();
        let sub = build_one_subgraph(
            g, &lr, &lback, &aux_l, &kr, &kback, &aux_k, &u_nodes, &w_nodes, r,
        )?;
        subgraphs.push(sub);
    }

    // membership audit: every vertex lies in at most four subgraphs
    let mut max_membership = 0usize;
    let mut counts: std::collections::HashMap<Vertex, usize> = std::collections::HashMap::new();
    for s in &subgraphs {
        for &v in &s.vertices {
            let c = counts.entry(v).or_insert(0);
            *c += 1;
            max_membership = max_membership.max(*c);
        }
    }
    if max_membership > 4 {
        return Err(Error::InternalInvariant(format!(
            "a vertex belongs to {max_membership} > 4 subgraphs"
        )));
    }
    Ok(DenseReport {
        subgraphs,
        max_membership,
        r,
    })
}

/// Builds one D_i from its node sets on both sides.
#[allow(clippy::too_many_arguments)]
fn build_one_subgraph(
    g: &Digraph,
    lr: &Linkage,
    lback: &Linkage,
    aux_l: &AuxGraph,
    kr: &Linkage,
    kback: &Linkage,
    aux_k: &AuxGraph,
    u_nodes: &BTreeSet<usize>,
    w_nodes: &BTreeSet<usize>,
    r: usize,
) -> Result<DenseSubgraph> {
    let u: Vec<Path> = u_nodes.iter().map(|&i| lr.paths()[i].clone()).collect();
    let w: Vec<Path> = w_nodes.iter().map(|&j| kr.paths()[j].clone()).collect();

    // internal dual paths plus artificial arcs closing broken cycles,
    // computed the same way on both sides
    let build_side = |aux: &AuxGraph,
                          fwd: &Linkage,
                          back: &Linkage,
                          nodes: &BTreeSet<usize>|
     -> Result<(Vec<Path>, Vec<(Vertex, Vertex)>)> {
        let mut internal: Vec<Path> = Vec::new();
        for &i in nodes {
            if nodes.contains(&aux.next(i)) {
                internal.push(back.paths()[aux.back_of(i)].clone());
            }
        }
        let mut artificial: Vec<(Vertex, Vertex)> = Vec::new();
        for cyc in aux.cycles() {
            let inside: Vec<usize> = cyc.iter().copied().filter(|i| nodes.contains(i)).collect();
            if inside.is_empty() || inside.len() == cyc.len() {
                continue;
            }
            let outs: Vec<usize> = inside
                .iter()
                .copied()
                .filter(|&i| !nodes.contains(&aux.next(i)))
                .collect();
            let ins: Vec<usize> = inside
                .iter()
                .copied()
                .filter(|&i| !nodes.contains(&aux.prev(i)))
                .collect();
            if outs.len() != 1 || ins.len() != 1 {
                return Err(Error::InternalInvariant(
                    "order segment meets an auxiliary cycle in several runs".into(),
                ));
            }
            artificial.push((fwd.paths()[outs[0]].end(), fwd.paths()[ins[0]].start()));
        }
        if artificial.len() > 2 {
            return Err(Error::InternalInvariant(format!(
                "{} broken cycles on one side, expected at most 2",
                artificial.len()
            )));
        }
        Ok((internal, artificial))
    };
    let (u_internal, u_art) = build_side(aux_l, lr, lback, u_nodes)?;
    let (w_internal, w_art) = build_side(aux_k, kr, kback, w_nodes)?;

    // materialize artificial arcs in a scratch copy to validate the
    // closed-up dual linkages and run the refinement
    let mut ga = g.clone();
    let mut artificial_arcs = Vec::new();
    for &(x, y) in u_art.iter().chain(&w_art) {
        ga.ensure_arc(x, y)?;
        artificial_arcs.push((x, y));
    }
    let art_path = |x: Vertex, y: Vertex| Path::new(&ga, vec![x, y]);
    let mut ub = u_internal.clone();
    for &(x, y) in &u_art {
        ub.push(art_path(x, y)?);
    }
    let mut wb = w_internal.clone();
    for &(x, y) in &w_art {
        wb.push(art_path(x, y)?);
    }

    // the closed-up sides are dual pairs; their auxiliary graphs also
    // drive the induced backlinkages of the refinement
    let aux_u = build_aux(&u, &ub)?;
    let aux_w = build_aux(&w, &wb)?;

    // refinement: a high-minimum-degree core of I(U, W)
    let iguw = intersection_graph(&u, &w);
    let d2 = r.div_ceil(2).saturating_sub(1);
    let core2 = max_core(&iguw.graph, d2).ok_or(Error::PipelineStage {
        stage: "refinement core",
        reason: format!("I(U, W) has no subgraph of minimum degree above {d2}"),
    })?;
    let p_idx: Vec<usize> = (0..u.len()).filter(|i| core2.contains(i)).collect();
    let q_idx: Vec<usize> = (0..w.len()).filter(|j| core2.contains(&(u.len() + j))).collect();
    if p_idx.is_empty() || q_idx.is_empty() {
        return Err(Error::PipelineStage {
            stage: "refinement core",
            reason: "refinement core misses one side".into(),
        });
    }
    let p: Vec<Path> = p_idx.iter().map(|&i| u[i].clone()).collect();
    let q: Vec<Path> = q_idx.iter().map(|&j| w[j].clone()).collect();
    let pback = induced_backlinkage(&ga, &u, &ub, &aux_u, &p_idx)?;
    let qback = induced_backlinkage(&ga, &w, &wb, &aux_w, &q_idx)?;

    let mut vertices: BTreeSet<Vertex> = BTreeSet::new();
    for path in u.iter().chain(&w).chain(&u_internal).chain(&w_internal) {
        vertices.extend(path.vertices().iter().copied());
    }
    Ok(DenseSubgraph {
        vertices,
        artificial_arcs,
        u,
        w,
        ub,
        wb,
        p,
        pback: pback.paths().to_vec(),
        q,
        qback: qback.paths().to_vec(),
    })
}
