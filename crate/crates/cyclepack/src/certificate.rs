//! Versioned JSON certificates and an independent verifier. The
//! verifier re-derives every claimed property from the graph and the
//! certificate body alone, using only basic digraph primitives — it
//! never calls the code paths that produced the certificate.

use std::collections::BTreeSet;

use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::extraction::CyclePackingCert;
use crate::witness::{GridWitness, LinkagePairWitness, Separation, DEGREE_BOUND_EPS};

pub const SCHEMA_VERSION: u32 = 1;

/// A certificate with its schema version, as serialized to JSON.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Envelope {
    pub schema: u32,
    #[serde(flatten)]
    pub body: Certificate,
}

impl Envelope {
    pub fn new(body: Certificate) -> Self {
        Envelope {
            schema: SCHEMA_VERSION,
            body,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// k cycles with per-vertex congestion at most p.
    CyclePacking {
        p: usize,
        k: usize,
        cycles: Vec<Vec<Vertex>>,
        measured_congestion: usize,
    },
    /// Lower bound k on the directed treewidth of the structure's
    /// union subgraph.
    DtwWitness {
        k: usize,
        /// What kind of structure carries the bound.
        basis: String,
        structure: DtwStructure,
        /// Names of the clauses the producer validated.
        checks: Vec<String>,
    },
    /// A separation (X, Y) of the whole graph, optionally balanced
    /// with respect to a vertex set W.
    Separation {
        x: Vec<Vertex>,
        y: Vec<Vertex>,
        order: usize,
        balance_set: Option<Vec<Vertex>>,
    },
    /// Verdict of the well-linkedness check for a vertex set, with the
    /// violating pair and its separator when the verdict is negative.
    WellLinked {
        set: Vec<Vertex>,
        verdict: bool,
        violation: Option<(Vec<Vertex>, Vec<Vertex>, Vec<Vertex>)>,
    },
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(tag = "structure", rename_all = "snake_case")]
pub enum DtwStructure {
    /// Disjoint paths with marked subpaths linked in both directions.
    LinkedPathGrid {
        paths: Vec<Vec<Vertex>>,
        a_span: Vec<(usize, usize)>,
        b_span: Vec<(usize, usize)>,
        links: Vec<(usize, usize, Vec<Vertex>)>,
    },
    /// Two dual pairs of congestion-2 path families whose cross
    /// intersection graph has high minimum degree.
    DualLinkagePair {
        p: Vec<Vec<Vertex>>,
        pback: Vec<Vec<Vertex>>,
        q: Vec<Vec<Vertex>>,
        qback: Vec<Vec<Vertex>>,
    },
}

pub fn packing_certificate(cert: &CyclePackingCert) -> Envelope {
    Envelope::new(Certificate::CyclePacking {
        p: cert.p,
        k: cert.k,
        cycles: cert.cycles.clone(),
        measured_congestion: cert.measured_congestion(),
    })
}

pub fn grid_certificate(wit: &GridWitness) -> Envelope {
    Envelope::new(Certificate::DtwWitness {
        k: wit.certified_bound(),
        basis: "linked path grid".into(),
        structure: DtwStructure::LinkedPathGrid {
            paths: wit.paths.clone(),
            a_span: wit.a_span.clone(),
            b_span: wit.b_span.clone(),
            links: wit.links.clone(),
        },
        checks: vec![
            "paths disjoint".into(),
            "spans ordered".into(),
            "links complete and disjoint".into(),
        ],
    })
}

pub fn linkage_pair_certificate(wit: &LinkagePairWitness) -> Envelope {
    Envelope::new(Certificate::DtwWitness {
        k: wit.k,
        basis: "dual linkage pair".into(),
        structure: DtwStructure::DualLinkagePair {
            p: wit.p.clone(),
            pback: wit.pback.clone(),
            q: wit.q.clone(),
            qback: wit.qback.clone(),
        },
        checks: vec![
            "families congestion 2".into(),
            "dual pairs".into(),
            "degree bound".into(),
        ],
    })
}

pub fn separation_certificate(sep: &Separation, balance_set: Option<&BTreeSet<Vertex>>) -> Envelope {
    Envelope::new(Certificate::Separation {
        x: sep.x.iter().copied().collect(),
        y: sep.y.iter().copied().collect(),
        order: sep.order(),
        balance_set: balance_set.map(|w| w.iter().copied().collect()),
    })
}

/// Verifies a certificate against a graph. Returns whether it holds,
/// plus one diagnostic line per violated clause.
pub fn verify_certificate(g: &Digraph, env: &Envelope) -> (bool, Vec<String>) {
    let mut bad: Vec<String> = Vec::new();
    if env.schema != SCHEMA_VERSION {
        bad.push(format!("unsupported schema version {}", env.schema));
        return (false, bad);
    }
    match &env.body {
        Certificate::CyclePacking {
            p,
            k,
            cycles,
            measured_congestion,
        } => check_packing(g, *p, *k, cycles, *measured_congestion, &mut bad),
        Certificate::DtwWitness { k, structure, .. } => match structure {
            DtwStructure::LinkedPathGrid {
                paths,
                a_span,
                b_span,
                links,
            } => check_grid(g, *k, paths, a_span, b_span, links, &mut bad),
            DtwStructure::DualLinkagePair { p, pback, q, qback } => {
                check_pair(g, *k, p, pback, q, qback, &mut bad)
            }
        },
        Certificate::Separation {
            x,
            y,
            order,
            balance_set,
        } => check_separation(g, x, y, *order, balance_set.as_deref(), &mut bad),
        Certificate::WellLinked {
            set,
            verdict,
            violation,
        } => check_well_linked(g, set, *verdict, violation.as_ref(), &mut bad),
    }
    (bad.is_empty(), bad)
}

fn vertex_ok(g: &Digraph, v: Vertex) -> bool {
    v < g.n()
}

/// Checks that a vertex sequence is a walk in g with pairwise distinct
/// vertices; pushes diagnostics under the given label.
fn check_simple_walk(g: &Digraph, seq: &[Vertex], closed: bool, label: &str, bad: &mut Vec<String>) {
    if seq.is_empty() {
        bad.push(format!("{label}: empty vertex sequence"));
        return;
    }
    for &v in seq {
        if !vertex_ok(g, v) {
            bad.push(format!("{label}: vertex {v} out of range"));
            return;
        }
    }
    let distinct: BTreeSet<Vertex> = seq.iter().copied().collect();
    if distinct.len() != seq.len() {
        bad.push(format!("{label}: repeated vertex"));
    }
    for w in seq.windows(2) {
        if !g.has_arc(w[0], w[1]) {
            bad.push(format!("{label}: missing arc ({}, {})", w[0], w[1]));
        }
    }
    if closed && seq.len() > 1 && !g.has_arc(seq[seq.len() - 1], seq[0]) {
        bad.push(format!(
            "{label}: missing closing arc ({}, {})",
            seq[seq.len() - 1],
            seq[0]
        ));
    }
    if closed && seq.len() == 1 {
        bad.push(format!("{label}: single-vertex cycle"));
    }
}

fn tally_congestion(families: &[&[Vec<Vertex>]]) -> usize {
    let mut load: std::collections::BTreeMap<Vertex, usize> = std::collections::BTreeMap::new();
    for fam in families {
        for seq in *fam {
            let distinct: BTreeSet<Vertex> = seq.iter().copied().collect();
            for v in distinct {
                *load.entry(v).or_insert(0) += 1;
            }
        }
    }
    load.values().copied().max().unwrap_or(0)
}

fn check_packing(
    g: &Digraph,
    p: usize,
    k: usize,
    cycles: &[Vec<Vertex>],
    measured: usize,
    bad: &mut Vec<String>,
) {
    if k == 0 {
        bad.push("claimed size k is zero".into());
    }
    if cycles.len() < k {
        bad.push(format!("{} cycles for claimed size {k}", cycles.len()));
    }
    for (i, c) in cycles.iter().enumerate() {
        check_simple_walk(g, c, true, &format!("cycle {i}"), bad);
    }
    let tallied = tally_congestion(&[cycles]);
    if tallied != measured {
        bad.push(format!(
            "recorded congestion {measured} differs from tally {tallied}"
        ));
    }
    if tallied > p {
        bad.push(format!("congestion {tallied} exceeds declared bound {p}"));
    }
}

fn check_grid(
    g: &Digraph,
    k: usize,
    paths: &[Vec<Vertex>],
    a_span: &[(usize, usize)],
    b_span: &[(usize, usize)],
    links: &[(usize, usize, Vec<Vertex>)],
    bad: &mut Vec<String>,
) {
    let kp = paths.len();
    if k != kp.div_ceil(8) {
        bad.push(format!("claimed bound {k} differs from ceil({kp}/8)"));
    }
    if a_span.len() != kp || b_span.len() != kp {
        bad.push("span count differs from path count".into());
        return;
    }
    for (i, p) in paths.iter().enumerate() {
        check_simple_walk(g, p, false, &format!("path {i}"), bad);
        let (a, b) = (a_span[i], b_span[i]);
        if a.0 >= a.1 || b.0 >= b.1 || a.1 > p.len() || b.1 > p.len() {
            bad.push(format!("path {i}: invalid span"));
        } else if a.1 > b.0 {
            bad.push(format!("path {i}: A span does not precede B span"));
        }
    }
    if tally_congestion(&[paths]) > 1 {
        bad.push("paths are not pairwise disjoint".into());
    }
    let link_bodies: Vec<Vec<Vertex>> = links.iter().map(|(_, _, l)| l.clone()).collect();
    if tally_congestion(&[&link_bodies]) > 1 {
        bad.push("links are not pairwise disjoint".into());
    }
    let mut seen_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, j, l) in links {
        let (i, j) = (*i, *j);
        check_simple_walk(g, l, false, &format!("link ({i}, {j})"), bad);
        if i == j || i >= kp || j >= kp {
            bad.push(format!("link ({i}, {j}): invalid path indices"));
            continue;
        }
        if !seen_pairs.insert((i, j)) {
            bad.push(format!("link ({i}, {j}): duplicate pair"));
        }
        if l.is_empty() {
            continue;
        }
        // malformed spans were already reported above; skip the
        // membership checks instead of indexing out of bounds
        let (Some(bi), Some(aj)) = (
            paths[i].get(b_span[i].0..b_span[i].1.min(paths[i].len())),
            paths[j].get(a_span[j].0..a_span[j].1.min(paths[j].len())),
        ) else {
            continue;
        };
        if !bi.contains(&l[0]) {
            bad.push(format!("link ({i}, {j}): does not start in B_{i}"));
        }
        if !aj.contains(&l[l.len() - 1]) {
            bad.push(format!("link ({i}, {j}): does not end in A_{j}"));
        }
    }
    if seen_pairs.len() != kp * kp.saturating_sub(1) {
        bad.push(format!(
            "{} links for {} ordered pairs",
            seen_pairs.len(),
            kp * kp.saturating_sub(1)
        ));
    }
}

/// Checks the dual relation: every back path runs from the end of a
/// forward path to the start of one, hitting all ends and starts.
fn check_dual(fwd: &[Vec<Vertex>], back: &[Vec<Vertex>], label: &str, bad: &mut Vec<String>) {
    if fwd.len() != back.len() {
        bad.push(format!("{label}: {} back paths for {} paths", back.len(), fwd.len()));
        return;
    }
    if fwd.iter().chain(back).any(|s| s.is_empty()) {
        return; // already reported as empty sequences
    }
    let mut ends: Vec<Vertex> = fwd.iter().map(|p| p[p.len() - 1]).collect();
    let mut bstarts: Vec<Vertex> = back.iter().map(|p| p[0]).collect();
    ends.sort_unstable();
    bstarts.sort_unstable();
    if ends != bstarts {
        bad.push(format!("{label}: back paths do not start at the path ends"));
    }
    let mut starts: Vec<Vertex> = fwd.iter().map(|p| p[0]).collect();
    let mut bends: Vec<Vertex> = back.iter().map(|p| p[p.len() - 1]).collect();
    starts.sort_unstable();
    bends.sort_unstable();
    if starts != bends {
        bad.push(format!("{label}: back paths do not end at the path starts"));
    }
}

fn check_pair(
    g: &Digraph,
    k: usize,
    p: &[Vec<Vertex>],
    pback: &[Vec<Vertex>],
    q: &[Vec<Vertex>],
    qback: &[Vec<Vertex>],
    bad: &mut Vec<String>,
) {
    if k == 0 {
        bad.push("claimed bound k is zero".into());
    }
    for (fam, name) in [(p, "P"), (pback, "P back"), (q, "Q"), (qback, "Q back")] {
        for (i, seq) in fam.iter().enumerate() {
            check_simple_walk(g, seq, false, &format!("{name} path {i}"), bad);
        }
        let c = tally_congestion(&[fam]);
        if c > 2 {
            bad.push(format!("family {name} has congestion {c} > 2"));
        }
    }
    check_dual(p, pback, "P", bad);
    check_dual(q, qback, "Q", bad);
    // minimum cross-intersection degree against the required bound
    if p.is_empty() || q.is_empty() {
        bad.push("empty path family".into());
        return;
    }
    let q_sets: Vec<BTreeSet<Vertex>> = q.iter().map(|s| s.iter().copied().collect()).collect();
    let p_sets: Vec<BTreeSet<Vertex>> = p.iter().map(|s| s.iter().copied().collect()).collect();
    let deg_p = p_sets
        .iter()
        .map(|ps| q_sets.iter().filter(|qs| ps.intersection(qs).next().is_some()).count());
    let deg_q = q_sets
        .iter()
        .map(|qs| p_sets.iter().filter(|ps| qs.intersection(ps).next().is_some()).count());
    let min_deg = deg_p.chain(deg_q).min().unwrap() as f64;
    let kk = k as f64;
    let bound =
        8.0 * kk * (((p.len() as f64) / (24.0 * kk)).log2() / (4.0f64 / 3.0).log2()) + 24.0 * kk + 4.0;
    if !(min_deg > bound + DEGREE_BOUND_EPS) {
        bad.push(format!(
            "minimum cross degree {min_deg} does not clear the bound {bound:.6}"
        ));
    }
}

fn check_separation(
    g: &Digraph,
    x: &[Vertex],
    y: &[Vertex],
    order: usize,
    balance_set: Option<&[Vertex]>,
    bad: &mut Vec<String>,
) {
    let xs: BTreeSet<Vertex> = x.iter().copied().collect();
    let ys: BTreeSet<Vertex> = y.iter().copied().collect();
    for v in g.vertices() {
        if !xs.contains(&v) && !ys.contains(&v) {
            bad.push(format!("vertex {v} in neither side"));
        }
    }
    for v in xs.iter().chain(ys.iter()) {
        if !vertex_ok(g, *v) {
            bad.push(format!("vertex {v} out of range"));
        }
    }
    let cut: BTreeSet<Vertex> = xs.intersection(&ys).copied().collect();
    if cut.len() != order {
        bad.push(format!("recorded order {order} differs from |X ∩ Y| = {}", cut.len()));
    }
    for (u, v) in g.arcs() {
        if ys.contains(&u) && !xs.contains(&u) && xs.contains(&v) && !ys.contains(&v) {
            bad.push(format!("arc ({u}, {v}) crosses from Y \\ X to X \\ Y"));
        }
    }
    if let Some(w) = balance_set {
        let ws: BTreeSet<Vertex> = w.iter().copied().collect();
        let quarter = ws.len().div_ceil(4);
        let in_x = ws.iter().filter(|v| xs.contains(v)).count();
        let in_y = ws.iter().filter(|v| ys.contains(v)).count();
        if in_x < quarter || in_y < quarter {
            bad.push(format!(
                "unbalanced: {in_x} and {in_y} marked vertices of {} (need {quarter} each)",
                ws.len()
            ));
        }
    }
}

/// Maximum number of vertex-disjoint paths from A to B avoiding the
/// deleted vertices, by unit-capacity augmentation on the vertex-split
/// graph. Endpoints shared by A and B count as zero-length paths.
fn disjoint_path_count(
    g: &Digraph,
    a: &BTreeSet<Vertex>,
    b: &BTreeSet<Vertex>,
    deleted: &BTreeSet<Vertex>,
) -> usize {
    let shared: BTreeSet<Vertex> = a.intersection(b).copied().collect();
    let a: BTreeSet<Vertex> = a.difference(&shared).copied().collect();
    let b: BTreeSet<Vertex> = b.difference(&shared).copied().collect();
    let n = g.n();
    // node ids: 2v = in-copy, 2v+1 = out-copy; source = 2n, sink = 2n+1
    let (src, snk) = (2 * n, 2 * n + 1);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n + 2];
    let mut cap: std::collections::HashMap<(usize, usize), i32> = std::collections::HashMap::new();
    let add = |adj: &mut Vec<Vec<usize>>,
                   cap: &mut std::collections::HashMap<(usize, usize), i32>,
                   u: usize,
                   v: usize| {
        adj[u].push(v);
        adj[v].push(u);
        cap.insert((u, v), 1);
        cap.entry((v, u)).or_insert(0);
    };
    for v in 0..n {
        if deleted.contains(&v) || shared.contains(&v) {
            continue;
        }
        add(&mut adj, &mut cap, 2 * v, 2 * v + 1);
    }
    for (u, v) in g.arcs() {
        if deleted.contains(&u) || deleted.contains(&v) || shared.contains(&u) || shared.contains(&v)
        {
            continue;
        }
        add(&mut adj, &mut cap, 2 * u + 1, 2 * v);
    }
    for &v in &a {
        if !deleted.contains(&v) {
            add(&mut adj, &mut cap, src, 2 * v);
        }
    }
    for &v in &b {
        if !deleted.contains(&v) {
            add(&mut adj, &mut cap, 2 * v + 1, snk);
        }
    }
    let mut flow = 0usize;
    loop {
        // BFS for an augmenting path
        let mut prev: Vec<Option<usize>> = vec![None; 2 * n + 2];
        let mut queue = std::collections::VecDeque::from([src]);
        prev[src] = Some(src);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if prev[w].is_none() && cap.get(&(u, w)).copied().unwrap_or(0) > 0 {
                    prev[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        if prev[snk].is_none() {
            break;
        }
        let mut v = snk;
        while v != src {
            let u = prev[v].unwrap();
            *cap.get_mut(&(u, v)).unwrap() -= 1;
            *cap.get_mut(&(v, u)).unwrap() += 1;
            v = u;
        }
        flow += 1;
    }
    flow + shared.len()
}

fn check_well_linked(
    g: &Digraph,
    set: &[Vertex],
    verdict: bool,
    violation: Option<&(Vec<Vertex>, Vec<Vertex>, Vec<Vertex>)>,
    bad: &mut Vec<String>,
) {
    let d: BTreeSet<Vertex> = set.iter().copied().collect();
    if d.len() != set.len() {
        bad.push("set lists a vertex twice".into());
    }
    for &v in set {
        if !vertex_ok(g, v) {
            bad.push(format!("vertex {v} out of range"));
            return;
        }
    }
    if verdict {
        // re-check every disjoint pair of equal-size subsets
        let items: Vec<Vertex> = d.iter().copied().collect();
        let m = items.len();
        for mask_a in 1u64..(1 << m) {
            for mask_b in 1u64..(1 << m) {
                if mask_a & mask_b != 0
                    || mask_a.count_ones() != mask_b.count_ones()
                {
                    continue;
                }
                let a: BTreeSet<Vertex> = (0..m)
                    .filter(|i| mask_a & (1 << i) != 0)
                    .map(|i| items[i])
                    .collect();
                let b: BTreeSet<Vertex> = (0..m)
                    .filter(|i| mask_b & (1 << i) != 0)
                    .map(|i| items[i])
                    .collect();
                let rest: BTreeSet<Vertex> = d
                    .iter()
                    .filter(|v| !a.contains(v) && !b.contains(v))
                    .copied()
                    .collect();
                if disjoint_path_count(g, &a, &b, &rest) < a.len() {
                    bad.push(format!("pair {a:?} -> {b:?} is not fully linked"));
                    return;
                }
            }
        }
    } else {
        let Some((a, b, sep)) = violation else {
            bad.push("negative verdict without a violating pair".into());
            return;
        };
        let a_set: BTreeSet<Vertex> = a.iter().copied().collect();
        let b_set: BTreeSet<Vertex> = b.iter().copied().collect();
        let sep_set: BTreeSet<Vertex> = sep.iter().copied().collect();
        if a_set.len() != b_set.len() || a_set.intersection(&b_set).next().is_some() {
            bad.push("violating pair is not disjoint and equal-sized".into());
            return;
        }
        if !a_set.is_subset(&d) || !b_set.is_subset(&d) {
            bad.push("violating pair is not drawn from the set".into());
        }
        let rest: BTreeSet<Vertex> = d
            .iter()
            .filter(|v| !a_set.contains(v) && !b_set.contains(v))
            .copied()
            .collect();
        if disjoint_path_count(g, &a_set, &b_set, &rest) >= a_set.len() {
            bad.push("claimed violating pair is fully linked after all".into());
        }
        if sep_set.len() >= a_set.len() {
            bad.push(format!(
                "separator of size {} does not beat the pair size {}",
                sep_set.len(),
                a_set.len()
            ));
        }
        // the separator must disconnect A from B once the rest of the
        // set is removed
        let blocked: BTreeSet<Vertex> = rest
            .iter()
            .chain(sep_set.iter())
            .copied()
            .filter(|v| !a_set.contains(v) && !b_set.contains(v))
            .collect();
        let a_free: BTreeSet<Vertex> = a_set.difference(&sep_set).copied().collect();
        let b_free: BTreeSet<Vertex> = b_set.difference(&sep_set).copied().collect();
        if disjoint_path_count(g, &a_free, &b_free, &blocked) > 0 {
            bad.push("separator does not disconnect the violating pair".into());
        }
    }
}

/// Convenience: parse a JSON certificate and verify it.
pub fn verify_json(g: &Digraph, text: &str) -> Result<(bool, Vec<String>)> {
    let env = Envelope::from_json(text)
        .map_err(|e| Error::UnknownKind(format!("unparsable certificate: {e}")))?;
    Ok(verify_certificate(g, &env))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(n: usize) -> Digraph {
        let mut g = Digraph::new(n);
        for v in 0..n {
            g.add_arc(v, (v + 1) % n).unwrap();
        }
        g
    }

    #[test]
    fn packing_certificate_round_trips_and_verifies() {
        let g = ring(5);
        let cert = CyclePackingCert {
            cycles: vec![vec![0, 1, 2, 3, 4]],
            p: 1,
            k: 1,
        };
        let env = packing_certificate(&cert);
        let json = env.to_json().unwrap();
        assert!(json.contains("\"schema\": 1"));
        let back = Envelope::from_json(&json).unwrap();
        let (ok, diags) = verify_certificate(&g, &back);
        assert!(ok, "{diags:?}");
    }

    #[test]
    fn corrupted_packing_certificates_are_rejected() {
        let g = ring(6);
        let cert = CyclePackingCert {
            cycles: vec![vec![0, 1, 2, 3, 4, 5]],
            p: 1,
            k: 1,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
        for _ in 0..100 {
            let mut env = packing_certificate(&cert);
            // corrupt one field at random
            match &mut env.body {
                Certificate::CyclePacking {
                    p,
                    k,
                    cycles,
                    measured_congestion,
                } => match rng.gen_range(0..4) {
                    0 => *p = 0,
                    1 => *k += 1,
                    2 => {
                        let i = rng.gen_range(0..cycles[0].len());
                        cycles[0][i] = (cycles[0][i] + rng.gen_range(2..5)) % 6;
                    }
                    _ => *measured_congestion += 1,
                },
                _ => unreachable!(),
            }
            let (ok, _) = verify_certificate(&g, &env);
            assert!(!ok);
        }
    }

    #[test]
    fn grid_certificate_verifies_and_catches_bad_links() {
        let mut g = Digraph::new(6);
        for (u, v) in [(0, 1), (2, 3), (1, 4), (4, 2), (3, 5), (5, 0)] {
            g.add_arc(u, v).unwrap();
        }
        let wit = GridWitness {
            paths: vec![vec![0, 1], vec![2, 3]],
            a_span: vec![(0, 1), (0, 1)],
            b_span: vec![(1, 2), (1, 2)],
            links: vec![(0, 1, vec![1, 4, 2]), (1, 0, vec![3, 5, 0])],
        };
        let env = grid_certificate(&wit);
        let (ok, diags) = verify_certificate(&g, &env);
        assert!(ok, "{diags:?}");
        let mut broken = wit;
        broken.links[0].2 = vec![1, 4]; // no longer ends in A_1
        let (ok, diags) = verify_certificate(&g, &grid_certificate(&broken));
        assert!(!ok);
        assert!(diags.iter().any(|d| d.contains("does not end")));
    }

    #[test]
    fn linkage_pair_certificate_with_small_families() {
        // two disjoint 2-cycles: the degree bound is negative at
        // |P| = 1, k = 1, so a cross degree of zero clears it
        let mut g = Digraph::new(4);
        for (u, v) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            g.add_arc(u, v).unwrap();
        }
        let wit = LinkagePairWitness {
            p: vec![vec![0, 1]],
            pback: vec![vec![1, 0]],
            q: vec![vec![2, 3]],
            qback: vec![vec![3, 2]],
            k: 1,
        };
        let env = linkage_pair_certificate(&wit);
        let (ok, diags) = verify_certificate(&g, &env);
        assert!(ok, "{diags:?}");
        let mut broken = wit;
        broken.pback = vec![vec![3, 2]]; // not dual to P any more
        let (ok, diags) = verify_certificate(&g, &linkage_pair_certificate(&broken));
        assert!(!ok);
        assert!(diags.iter().any(|d| d.contains("P")));
    }

    #[test]
    fn separation_certificate_checks_crossing_arcs_and_balance() {
        // directed path 0 -> 1 -> 2 -> 3 -> 4, cut at 2
        let mut g = Digraph::new(5);
        for v in 0..4 {
            g.add_arc(v, v + 1).unwrap();
        }
        let sep = Separation {
            x: [0, 1, 2].into_iter().collect(),
            y: [2, 3, 4].into_iter().collect(),
        };
        let w: BTreeSet<Vertex> = (0..5).collect();
        let env = separation_certificate(&sep, Some(&w));
        let (ok, diags) = verify_certificate(&g, &env);
        assert!(ok, "{diags:?}");
        // on a ring the same split is no separation: the wrap-around
        // arc crosses from Y \ X back into X \ Y
        let (ok, diags) = verify_certificate(&ring(5), &separation_certificate(&sep, None));
        assert!(!ok);
        assert!(diags.iter().any(|d| d.contains("crosses")));
        // dropping the cut vertex from one side leaves it uncovered
        let gapped = Separation {
            x: [0, 1].into_iter().collect(),
            y: [3, 4].into_iter().collect(),
        };
        let (ok, diags) = verify_certificate(&g, &separation_certificate(&gapped, None));
        assert!(!ok);
        assert!(diags.iter().any(|d| d.contains("neither side")));
    }

    #[test]
    fn well_linked_certificates_in_both_directions() {
        // bidirected complete graph on 4 vertices: every subset is
        // well-linked
        let mut k4 = Digraph::new(4);
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    k4.add_arc(u, v).unwrap();
                }
            }
        }
        let env = Envelope::new(Certificate::WellLinked {
            set: vec![0, 1, 2, 3],
            verdict: true,
            violation: None,
        });
        let (ok, diags) = verify_certificate(&k4, &env);
        assert!(ok, "{diags:?}");

        // a directed path is not well-linked: nothing reaches backwards
        let mut path = Digraph::new(3);
        path.add_arc(0, 1).unwrap();
        path.add_arc(1, 2).unwrap();
        let env = Envelope::new(Certificate::WellLinked {
            set: vec![0, 2],
            verdict: false,
            violation: Some((vec![2], vec![0], vec![])),
        });
        let (ok, diags) = verify_certificate(&path, &env);
        assert!(ok, "{diags:?}");

        // claiming the path set is well-linked must fail
        let env = Envelope::new(Certificate::WellLinked {
            set: vec![0, 2],
            verdict: true,
            violation: None,
        });
        let (ok, _) = verify_certificate(&path, &env);
        assert!(!ok);
    }

    #[test]
    fn unknown_kind_and_schema_are_rejected() {
        let g = ring(3);
        assert!(verify_json(&g, "{\"schema\":1,\"kind\":\"mystery\"}").is_err());
        let mut env = Envelope::new(Certificate::WellLinked {
            set: vec![0],
            verdict: true,
            violation: None,
        });
        env.schema = 99;
        let (ok, diags) = verify_certificate(&g, &env);
        assert!(!ok);
        assert!(diags[0].contains("schema"));
    }
}
