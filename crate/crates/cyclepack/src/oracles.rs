//! Exact brute-force ground truth at desk scale: simple-cycle
//! enumeration, congestion-bounded cycle packing, minimum feedback
//! vertex set, and a combined consistency report.

use std::collections::BTreeSet;

use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};

/// Size caps guarding the exponential searches.
#[derive(Debug, Clone, Copy)]
pub struct OracleCaps {
    /// Maximum number of simple cycles enumerated.
    pub cycle_cap: usize,
    /// Maximum vertex count accepted by the feedback-set search.
    pub fvs_cap: usize,
    /// Maximum number of branch nodes explored by the packing search.
    pub search_cap: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            cycle_cap: 100_000,
            fvs_cap: 20,
            search_cap: 50_000_000,
        }
    }
}

/// All simple directed cycles of `g`, each reported once in canonical
/// rotation (minimum vertex first), sorted lexicographically.
pub fn enumerate_simple_cycles(g: &Digraph, cap: usize) -> Result<Vec<Vec<Vertex>>> {
    let n = g.n();
    let mut out: Vec<Vec<Vertex>> = Vec::new();
    let mut stack: Vec<Vertex> = Vec::new();
    let mut on_stack = vec![false; n];
    // cycles are rooted at their minimum vertex: the search from root s
    // only visits vertices > s
    for s in 0..n {
        stack.push(s);
        on_stack[s] = true;
        dfs_cycles(g, s, s, &mut stack, &mut on_stack, &mut out, cap)?;
        on_stack[s] = false;
        stack.pop();
    }
    out.sort_unstable();
    Ok(out)
}

fn dfs_cycles(
    g: &Digraph,
    root: Vertex,
    v: Vertex,
    stack: &mut Vec<Vertex>,
    on_stack: &mut [bool],
    out: &mut Vec<Vec<Vertex>>,
    cap: usize,
) -> Result<()> {
    for &w in g.out_neighbors(v) {
        if w == root {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "cycle enumeration",
                    size: out.len() + 1,
                    cap,
                });
            }
            out.push(stack.clone());
        } else if w > root && !on_stack[w] {
            stack.push(w);
            on_stack[w] = true;
            dfs_cycles(g, root, w, stack, on_stack, out, cap)?;
            on_stack[w] = false;
            stack.pop();
        }
    }
    Ok(())
}

/// Exact maximum family of simple cycles with every vertex used at most
/// `c` times. By default the family is a multiset (a cycle may repeat up
/// to `c` times); `distinct` restricts to pairwise distinct cycles.
/// Returns the size and one optimal family; among optima the result is
/// the deterministic one preferring many copies of lexicographically
/// smaller cycles.
pub fn max_packing_congestion(
    g: &Digraph,
    c: usize,
    distinct: bool,
    caps: &OracleCaps,
) -> Result<(usize, Vec<Vec<Vertex>>)> {
    if c == 0 {
        return Err(Error::BadSpec("congestion bound must be positive".into()));
    }
    let cycles = enumerate_simple_cycles(g, caps.cycle_cap)?;
    let mult = if distinct { 1 } else { c };
    let mut load = vec![0usize; g.n()];
    let mut counts = vec![0usize; cycles.len()];
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut nodes = 0usize;
    branch_packing(
        &cycles, c, mult, 0, 0, &mut load, &mut counts, &mut best, &mut nodes, caps.search_cap,
    )?;
    let (size, chosen) = best.unwrap_or((0, vec![0; cycles.len()]));
    let mut packing = Vec::with_capacity(size);
    for (i, &cnt) in chosen.iter().enumerate() {
        for _ in 0..cnt {
            packing.push(cycles[i].clone());
        }
    }
    Ok((size, packing))
}

#[allow(clippy::too_many_arguments)]
fn branch_packing(
    cycles: &[Vec<Vertex>],
    c: usize,
    mult: usize,
    idx: usize,
    current: usize,
    load: &mut [usize],
    counts: &mut [usize],
    best: &mut Option<(usize, Vec<usize>)>,
    nodes: &mut usize,
    search_cap: usize,
) -> Result<()> {
    *nodes += 1;
    if *nodes > search_cap {
        return Err(Error::CapExceeded {
            what: "packing search",
            size: *nodes,
            cap: search_cap,
        });
    }
    if idx == cycles.len() {
        if best.as_ref().map_or(true, |&(b, _)| current > b) {
            *best = Some((current, counts.to_vec()));
        }
        return Ok(());
    }
    // admissible bound: add up how many copies each remaining cycle
    // could take on its own
    let mut bound = current;
    for cyc in &cycles[idx..] {
        let slack = cyc.iter().map(|&v| c - load[v]).min().unwrap_or(0);
        bound += slack.min(mult);
    }
    if let Some(&(b, _)) = best.as_ref() {
        if bound <= b {
            return Ok(());
        }
    }
    let fit = cycles[idx]
        .iter()
        .map(|&v| c - load[v])
        .min()
        .unwrap_or(0)
        .min(mult);
    // try larger counts first so the first optimum found prefers
    // earlier (lexicographically smaller) cycles
    for take in (0..=fit).rev() {
        for &v in &cycles[idx] {
            load[v] += take;
        }
        counts[idx] = take;
        branch_packing(
            cycles, c, mult, idx + 1, current + take, load, counts, best, nodes, search_cap,
        )?;
        counts[idx] = 0;
        for &v in &cycles[idx] {
            load[v] -= take;
        }
    }
    Ok(())
}

/// Exact minimum feedback vertex set by iterative deepening on the set
/// size, branching over the vertices of a currently uncovered cycle.
/// The returned deletion set is verified to leave `g` acyclic.
pub fn min_fvs(g: &Digraph, cap: usize) -> Result<(usize, BTreeSet<Vertex>)> {
    if g.n() > cap {
        return Err(Error::CapExceeded {
            what: "feedback vertex set search",
            size: g.n(),
            cap,
        });
    }
    let mut deleted: BTreeSet<Vertex> = BTreeSet::new();
    for size in 0..=g.n() {
        if fvs_search(g, size, &mut deleted) {
            debug_assert!(g.is_acyclic_without(&deleted));
            if !g.is_acyclic_without(&deleted) {
                return Err(Error::InternalInvariant(
                    "feedback set does not hit every cycle".into(),
                ));
            }
            return Ok((deleted.len(), deleted));
        }
        debug_assert!(deleted.is_empty());
    }
    unreachable!("deleting all vertices always leaves an acyclic graph")
}

fn fvs_search(g: &Digraph, budget: usize, deleted: &mut BTreeSet<Vertex>) -> bool {
    match find_cycle_avoiding(g, deleted) {
        None => true,
        Some(cyc) => {
            if budget == 0 {
                return false;
            }
            for v in cyc {
                deleted.insert(v);
                if fvs_search(g, budget - 1, deleted) {
                    return true;
                }
                deleted.remove(&v);
            }
            false
        }
    }
}

/// Some directed cycle avoiding the deleted vertices, found by
/// deterministic depth-first search; `None` when the remainder is
/// acyclic.
fn find_cycle_avoiding(g: &Digraph, deleted: &BTreeSet<Vertex>) -> Option<Vec<Vertex>> {
    let n = g.n();
    // colors: 0 unvisited, 1 on the current path, 2 finished
    let mut color = vec![0u8; n];
    let mut stack: Vec<Vertex> = Vec::new();
    for s in 0..n {
        if color[s] != 0 || deleted.contains(&s) {
            continue;
        }
        if let Some(cyc) = dfs_find(g, s, deleted, &mut color, &mut stack) {
            return Some(cyc);
        }
    }
    None
}

fn dfs_find(
    g: &Digraph,
    v: Vertex,
    deleted: &BTreeSet<Vertex>,
    color: &mut [u8],
    stack: &mut Vec<Vertex>,
) -> Option<Vec<Vertex>> {
    color[v] = 1;
    stack.push(v);
    for &w in g.out_neighbors(v) {
        if deleted.contains(&w) {
            continue;
        }
        if color[w] == 1 {
            let pos = stack.iter().position(|&x| x == w).unwrap();
            let cyc = stack[pos..].to_vec();
            stack.truncate(0);
            return Some(cyc);
        }
        if color[w] == 0 {
            if let Some(cyc) = dfs_find(g, w, deleted, color, stack) {
                return Some(cyc);
            }
        }
    }
    color[v] = 2;
    stack.pop();
    None
}

/// Exact packing and covering numbers of one graph, with the
/// consistency audits between them.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct GapReport {
    pub n: usize,
    pub m: usize,
    pub fvs_opt: usize,
    /// Maximum packing sizes at per-vertex congestion 1, 2, 4.
    pub cp_1: usize,
    pub cp_2: usize,
    pub cp_4: usize,
    /// cp_1 <= cp_2 <= cp_4.
    pub monotone_ok: bool,
    /// fvs_opt >= cp_1 (disjoint cycles need distinct deleted vertices).
    pub covering_ok: bool,
}

impl GapReport {
    pub fn csv_header() -> &'static str {
        "n,m,fvs_opt,cp_1,cp_2,cp_4,monotone_ok,covering_ok"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n, self.m, self.fvs_opt, self.cp_1, self.cp_2, self.cp_4, self.monotone_ok,
            self.covering_ok
        )
    }
}

pub fn gap_report(g: &Digraph, caps: &OracleCaps) -> Result<GapReport> {
    let (fvs_opt, _) = min_fvs(g, caps.fvs_cap)?;
    let (cp_1, _) = max_packing_congestion(g, 1, false, caps)?;
    let (cp_2, _) = max_packing_congestion(g, 2, false, caps)?;
    let (cp_4, _) = max_packing_congestion(g, 4, false, caps)?;
    Ok(GapReport {
        n: g.n(),
        m: g.m(),
        fvs_opt,
        cp_1,
        cp_2,
        cp_4,
        monotone_ok: cp_1 <= cp_2 && cp_2 <= cp_4,
        covering_ok: fvs_opt >= cp_1,
    })
}
