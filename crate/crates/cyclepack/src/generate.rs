//! Seeded instance generators: grids with boundary annotations, planted
//! cycle packings, planted grid witnesses, uniform random digraphs, and
//! planted dual linkage pairs. A spec plus a seed fully determines the
//! output.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::witness::GridWitness;

/// A generator invocation; the seed fully determines the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceSpec {
    /// Bidirected rows × cols grid; the boundary vertices are annotated.
    Grid { rows: usize, cols: usize },
    /// k cycles overlapping in groups of p (so the packing has
    /// congestion exactly min(p, k group size)), plus a hub vertex
    /// making the graph strongly connected.
    PlantedCycles { k: usize, p: usize, seed: u64 },
    /// A grid witness on k disjoint two-vertex paths with one fresh
    /// link vertex per ordered pair.
    PlantedGridWitness { k: usize },
    /// n vertices, m distinct uniform random arcs (no self-loops).
    Random { n: usize, m: usize, seed: u64 },
    /// A dual linkage pair of size q(2k−2)+1 whose return paths
    /// sometimes revisit forward interiors.
    PlantedDual { q: usize, k: usize, seed: u64 },
}

/// Generator output: the graph plus whatever annotations the generator
/// can vouch for.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Digraph,
    /// Designated vertex set (grid boundary, or the planted linkage
    /// endpoints).
    pub marked: Option<BTreeSet<Vertex>>,
    /// Cycles planted with a known congestion bound.
    pub packing: Option<(usize, Vec<Vec<Vertex>>)>,
    pub grid_witness: Option<GridWitness>,
    /// Forward and return path families of a planted dual pair.
    pub dual_pair: Option<(Vec<Vec<Vertex>>, Vec<Vec<Vertex>>)>,
}

impl Generated {
    fn bare(graph: Digraph) -> Self {
        Generated {
            graph,
            marked: None,
            packing: None,
            grid_witness: None,
            dual_pair: None,
        }
    }
}

impl InstanceSpec {
    /// Parses the CLI word form, e.g. `grid 3 4`, `planted-cycles 3 1 7`,
    /// `planted-gridwitness 8`, `random 10 30 7`, `planted-dual 2 3 7`.
    pub fn parse(words: &[&str]) -> Result<Self> {
        let num = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|e| Error::BadSpec(format!("bad number {s:?}: {e}")))
        };
        let seed = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|e| Error::BadSpec(format!("bad seed {s:?}: {e}")))
        };
        match words {
            ["grid", r, c] => Ok(InstanceSpec::Grid {
                rows: num(r)?,
                cols: num(c)?,
            }),
            ["planted-cycles", k, p, s] => Ok(InstanceSpec::PlantedCycles {
                k: num(k)?,
                p: num(p)?,
                seed: seed(s)?,
            }),
            ["planted-gridwitness", k] => Ok(InstanceSpec::PlantedGridWitness { k: num(k)? }),
            ["random", n, m, s] => Ok(InstanceSpec::Random {
                n: num(n)?,
                m: num(m)?,
                seed: seed(s)?,
            }),
            ["planted-dual", q, k, s] => Ok(InstanceSpec::PlantedDual {
                q: num(q)?,
                k: num(k)?,
                seed: seed(s)?,
            }),
            _ => Err(Error::BadSpec(format!(
                "unknown generator invocation {words:?}"
            ))),
        }
    }
}

pub fn generate(spec: &InstanceSpec) -> Result<Generated> {
    match *spec {
        InstanceSpec::Grid { rows, cols } => grid(rows, cols),
        InstanceSpec::PlantedCycles { k, p, seed } => planted_cycles(k, p, seed),
        InstanceSpec::PlantedGridWitness { k } => planted_grid_witness(k),
        InstanceSpec::Random { n, m, seed } => random(n, m, seed),
        InstanceSpec::PlantedDual { q, k, seed } => planted_dual(q, k, seed),
    }
}

fn grid(rows: usize, cols: usize) -> Result<Generated> {
    if rows == 0 || cols == 0 {
        return Err(Error::BadSpec("grid dimensions must be positive".into()));
    }
    let mut g = Digraph::new(rows * cols);
    let id = |r: usize, c: usize| r * cols + c;
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_arc(id(r, c), id(r, c + 1))?;
                g.add_arc(id(r, c + 1), id(r, c))?;
            }
            if r + 1 < rows {
                g.add_arc(id(r, c), id(r + 1, c))?;
                g.add_arc(id(r + 1, c), id(r, c))?;
            }
        }
    }
    let boundary: BTreeSet<Vertex> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .filter(|&(r, c)| r == 0 || c == 0 || r == rows - 1 || c == cols - 1)
        .map(|(r, c)| id(r, c))
        .collect();
    let mut out = Generated::bare(g);
    out.marked = Some(boundary);
    Ok(out)
}

fn planted_cycles(k: usize, p: usize, seed: u64) -> Result<Generated> {
    if k == 0 || p == 0 {
        return Err(Error::BadSpec("k and p must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // cycles come in groups of up to p sharing one hub vertex, so the
    // planted family has congestion exactly min(p, largest group)
    let groups = k.div_ceil(p);
    let mut g = Digraph::new(0);
    let mut next = 0usize;
    let mut fresh = |g: &mut Digraph| {
        let v = next;
        next += 1;
        *g = grow(g, next);
        v
    };
    let mut cycles: Vec<Vec<Vertex>> = Vec::with_capacity(k);
    for group in 0..groups {
        let hub = fresh(&mut g);
        let in_group = if group + 1 < groups { p } else { k - group * p };
        for _ in 0..in_group {
            let len = rng.gen_range(2..=4usize);
            let mut cyc = vec![hub];
            for _ in 0..len {
                cyc.push(fresh(&mut g));
            }
            for w in 0..cyc.len() {
                g.ensure_arc(cyc[w], cyc[(w + 1) % cyc.len()])?;
            }
            cycles.push(cyc);
        }
    }
    // hub vertex tying everything into one strongly connected graph
    let s = fresh(&mut g);
    for cyc in &cycles {
        g.ensure_arc(s, cyc[0])?;
        g.ensure_arc(*cyc.last().unwrap(), s)?;
    }
    let mut out = Generated::bare(g);
    out.packing = Some((p.min(k), cycles));
    Ok(out)
}

/// Reallocates the graph with more vertices, keeping all arcs.
fn grow(g: &Digraph, n: usize) -> Digraph {
    let mut bigger = Digraph::new(n.max(g.n()));
    for (u, v) in g.arcs() {
        bigger.add_arc(u, v).unwrap();
    }
    bigger
}

fn planted_grid_witness(k: usize) -> Result<Generated> {
    if k == 0 {
        return Err(Error::BadSpec("k must be positive".into()));
    }
    // each path carries k−1 entry and k−1 exit vertices so the links
    // (one fresh middle vertex per ordered pair) stay pairwise disjoint
    let t = k.saturating_sub(1).max(1);
    let mut g = Digraph::new(2 * t * k + k * k);
    let a_of = |i: usize, slot: usize| 2 * t * i + slot;
    let b_of = |i: usize, slot: usize| 2 * t * i + t + slot;
    let mut w_next = 2 * t * k;
    let mut paths = Vec::with_capacity(k);
    for i in 0..k {
        let path: Vec<Vertex> = (0..2 * t).map(|s| 2 * t * i + s).collect();
        for w in path.windows(2) {
            g.add_arc(w[0], w[1])?;
        }
        paths.push(path);
    }
    let mut links = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let w = w_next;
            w_next += 1;
            let from = b_of(i, if j < i { j } else { j - 1 });
            let to = a_of(j, if i < j { i } else { i - 1 });
            g.add_arc(from, w)?;
            g.add_arc(w, to)?;
            links.push((i, j, vec![from, w, to]));
        }
    }
    let wit = GridWitness {
        paths,
        a_span: vec![(0, t); k],
        b_span: vec![(t, 2 * t); k],
        links,
    };
    let mut out = Generated::bare(g);
    out.grid_witness = Some(wit);
    Ok(out)
}

fn random(n: usize, m: usize, seed: u64) -> Result<Generated> {
    if n < 2 && m > 0 {
        return Err(Error::BadSpec("need at least two vertices for arcs".into()));
    }
    if m > n * n.saturating_sub(1) {
        return Err(Error::BadSpec(format!(
            "{m} arcs do not fit in a simple digraph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Digraph::new(n);
    let mut added = 0usize;
    while added < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && g.ensure_arc(u, v)? {
            added += 1;
        }
    }
    Ok(Generated::bare(g))
}

fn planted_dual(q: usize, k: usize, seed: u64) -> Result<Generated> {
    if q == 0 || k == 0 {
        return Err(Error::BadSpec("q and k must be positive".into()));
    }
    let m = q * (2 * k).saturating_sub(2) + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma: Vec<usize> = (0..m).collect();
    sigma.shuffle(&mut rng);
    // forward a_i -> m_i -> b_i; the return path's interior is either a
    // fresh vertex or the interior of the successor forward path
    let mut g = Digraph::new(4 * m);
    let mut fwd = Vec::with_capacity(m);
    let mut back = Vec::with_capacity(m);
    for i in 0..m {
        let (a, b, mid, fresh) = (i, m + i, 2 * m + i, 3 * m + i);
        g.add_arc(a, mid)?;
        g.add_arc(mid, b)?;
        let interior = if rng.gen_bool(0.3) { 2 * m + sigma[i] } else { fresh };
        g.ensure_arc(b, interior)?;
        g.ensure_arc(interior, sigma[i])?;
        fwd.push(vec![a, mid, b]);
        back.push(vec![b, interior, sigma[i]]);
    }
    let mut out = Generated::bare(g);
    out.marked = Some((0..m).chain(m..2 * m).collect());
    out.dual_pair = Some((fwd, back));
    Ok(out)
}
