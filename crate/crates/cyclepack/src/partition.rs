//! Partitioning of an ordered bipartite graph into segment pairs with an
//! edge-count guarantee, and the disjoint-pairs wrapper yielding
//! induced subgraphs of prescribed average degree.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rat = Ratio<i128>;

/// Bipartite graph with ordered classes X = x_0..x_{a-1} and
/// Y = y_0..y_{b-1}; edges are (X-index, Y-index) pairs.
#[derive(Debug, Clone)]
pub struct OrderedBipartite {
    a: usize,
    b: usize,
    edges: BTreeSet<(usize, usize)>,
    // prefix[i][j] = number of edges (x, y) with x < i and y < j
    prefix: Vec<Vec<u64>>,
}

impl OrderedBipartite {
    pub fn new(a: usize, b: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (x, y) in edges {
            if x >= a {
                return Err(Error::VertexOutOfRange(x, a));
            }
            if y >= b {
                return Err(Error::VertexOutOfRange(y, b));
            }
            if !set.insert((x, y)) {
                return Err(Error::DuplicateArc(x, y));
            }
        }
        let mut prefix = vec![vec![0u64; b + 1]; a + 1];
        for &(x, y) in &set {
            prefix[x + 1][y + 1] += 1;
        }
        for i in 1..=a {
            for j in 1..=b {
                prefix[i][j] += prefix[i][j - 1];
            }
        }
        for j in 0..=b {
            for i in 1..=a {
                prefix[i][j] += prefix[i - 1][j];
            }
        }
        Ok(OrderedBipartite {
            a,
            b,
            edges: set,
            prefix,
        })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.edges.contains(&(x, y))
    }

    /// Number of edges between X-interval `[x0, x1)` and Y-interval
    /// `[y0, y1)`.
    pub fn count(&self, x0: usize, x1: usize, y0: usize, y1: usize) -> u64 {
        if x0 >= x1 || y0 >= y1 {
            return 0;
        }
        self.prefix[x1][y1] + self.prefix[x0][y0] - self.prefix[x0][y1] - self.prefix[x1][y0]
    }

    pub fn degree_x(&self, x: usize) -> u64 {
        self.count(x, x + 1, 0, self.b)
    }

    pub fn degree_y(&self, y: usize) -> u64 {
        self.count(0, self.a, y, y + 1)
    }

    pub fn min_degree(&self) -> u64 {
        let dx = (0..self.a).map(|x| self.degree_x(x)).min();
        let dy = (0..self.b).map(|y| self.degree_y(y)).min();
        dx.into_iter().chain(dy).min().unwrap_or(0)
    }
}

/// A pair of half-open index intervals, one per class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SegmentPair {
    /// X-interval [x.0, x.1)
    pub x: (usize, usize),
    /// Y-interval [y.0, y.1)
    pub y: (usize, usize),
}

impl SegmentPair {
    pub fn x_len(&self) -> usize {
        self.x.1 - self.x.0
    }

    pub fn y_len(&self) -> usize {
        self.y.1 - self.y.0
    }
}

/// Splits the graph into 2^h pairwise-disjoint segment pairs, each
/// spanning at least d·n edges. Requires d·4^{h+1} − 1 > 2 and
/// m ≥ (d·4^{h+1} − 1)·n; n defaults to a + b but a larger value may be
/// supplied. All threshold comparisons use exact rational arithmetic.
pub fn partition_segments(
    g: &OrderedBipartite,
    h: u32,
    d: Rat,
    n_override: Option<usize>,
) -> Result<Vec<SegmentPair>> {
    let n = n_override.unwrap_or(g.a + g.b);
    if n < g.a + g.b {
        return Err(Error::HypothesisViolated(format!(
            "n = {n} smaller than a + b = {}",
            g.a + g.b
        )));
    }
    let n_rat = Rat::from_integer(n as i128);
    let threshold = d * Rat::from_integer(4i128.pow(h + 1)) - Rat::from_integer(1);
    if threshold <= Rat::from_integer(2) {
        return Err(Error::HypothesisViolated(format!(
            "d * 4^(h+1) - 1 = {threshold} is not greater than 2"
        )));
    }
    // the recursion halves h and quarters the edge guarantee, so every
    // level needs its own threshold above 2; the deepest split (h' = 1)
    // is the binding one
    if h >= 1 && d * Rat::from_integer(16) - Rat::from_integer(1) <= Rat::from_integer(2) {
        return Err(Error::HypothesisViolated(format!(
            "d = {d} too small for {h} levels of splitting (need d * 16 - 1 > 2)"
        )));
    }
    if Rat::from_integer(g.m() as i128) < threshold * n_rat {
        return Err(Error::HypothesisViolated(format!(
            "edge count {} below (d * 4^(h+1) - 1) * n = {}",
            g.m(),
            threshold * n_rat
        )));
    }
    let mut out = Vec::with_capacity(1 << h);
    split(g, h, n as i128, 0, g.a, 0, g.b, &mut out)?;
    Ok(out)
}

/// Recursive quadrant split on the rectangle [x0, x1) x [y0, y1).
#[allow(clippy::too_many_arguments)]
fn split(
    g: &OrderedBipartite,
    h: u32,
    n: i128,
    x0: usize,
    x1: usize,
    y0: usize,
    y1: usize,
    out: &mut Vec<SegmentPair>,
) -> Result<()> {
    if h == 0 {
        out.push(SegmentPair {
            x: (x0, x1),
            y: (y0, y1),
        });
        return Ok(());
    }
    let e_total = g.count(x0, x1, y0, y1) as i128;
    // minimal prefix positions s, t with degree sums reaching half the
    // edge count (degrees within the current induced subgraph)
    let s = minimal_prefix(e_total, (x0..x1).map(|x| g.count(x, x + 1, y0, y1) as i128))
        .map(|off| x0 + off)
        .ok_or_else(|| Error::InternalInvariant("no half-degree prefix in X".into()))?;
    let t = minimal_prefix(e_total, (y0..y1).map(|y| g.count(x0, x1, y, y + 1) as i128))
        .map(|off| y0 + off)
        .ok_or_else(|| Error::InternalInvariant("no half-degree prefix in Y".into()))?;
    if s == x0 || s + 1 == x1 || t == y0 || t + 1 == y1 {
        return Err(Error::InternalInvariant(format!(
            "split vertex at class boundary (s = {s} in [{x0},{x1}), t = {t} in [{y0},{y1}))"
        )));
    }
    // quadrants exclude the split vertices x_s, y_t themselves
    let diag = g.count(x0, s, y0, t) as i128 + g.count(s + 1, x1, t + 1, y1) as i128;
    let anti = g.count(x0, s, t + 1, y1) as i128 + g.count(s + 1, x1, y0, t) as i128;
    // pigeonhole: one of the two sums reaches e/2 - n/2; prefer the
    // diagonal on ties
    if 2 * diag >= e_total - n {
        split(g, h - 1, n, x0, s, y0, t, out)?;
        split(g, h - 1, n, s + 1, x1, t + 1, y1, out)?;
    } else if 2 * anti >= e_total - n {
        split(g, h - 1, n, x0, s, t + 1, y1, out)?;
        split(g, h - 1, n, s + 1, x1, y0, t, out)?;
    } else {
        return Err(Error::InternalInvariant(
            "pigeonhole case split failed on both diagonals".into(),
        ));
    }
    Ok(())
}

/// Smallest offset `s` (0-based, counting elements 0..=s) such that the
/// first s+1 degrees sum to at least half of `e_total`; returns the
/// offset of the split element.
fn minimal_prefix(e_total: i128, degrees: impl Iterator<Item = i128>) -> Option<usize> {
    let mut sum = 0i128;
    for (i, d) in degrees.enumerate() {
        sum += d;
        if 2 * sum >= e_total {
            return Some(i);
        }
    }
    None
}

/// Finds k disjoint segment pairs whose induced subgraphs each have
/// average degree at least r; requires minimum degree at least 2^9·r·k.
pub fn disjoint_pairs(g: &OrderedBipartite, k: usize, r: usize) -> Result<Vec<SegmentPair>> {
    disjoint_pairs_with(g, k, Rat::from_integer(2 * r as i128) / Rat::from_integer(k as i128), {
        let bound = (1u64 << 9) * (r as u64) * (k as u64);
        move |min_deg| min_deg >= bound
    })
}

/// As [`disjoint_pairs`] but with a caller-supplied density parameter d
/// and minimum-degree guard; the guard receives the measured minimum
/// degree.
pub fn disjoint_pairs_with(
    g: &OrderedBipartite,
    k: usize,
    d: Rat,
    degree_guard: impl FnOnce(u64) -> bool,
) -> Result<Vec<SegmentPair>> {
    if k == 0 {
        return Err(Error::HypothesisViolated("k must be at least 1".into()));
    }
    let min_deg = g.min_degree();
    if !degree_guard(min_deg) {
        return Err(Error::HypothesisViolated(format!(
            "minimum degree {min_deg} below the required bound"
        )));
    }
    // smallest h with 2^h >= 2k
    let mut h = 0u32;
    while (1usize << h) < 2 * k {
        h += 1;
    }
    let kp = 1usize << h;
    let n = g.a + g.b;
    let pairs = partition_segments(g, h, d, None)?;
    // a pair is small when both segments have size < 2n/k'
    let small: Vec<SegmentPair> = pairs
        .into_iter()
        .filter(|p| (p.x_len() * kp) < 2 * n && (p.y_len() * kp) < 2 * n)
        .collect();
    if small.len() < k {
        return Err(Error::InternalInvariant(format!(
            "only {} small pairs, expected at least {k}",
            small.len()
        )));
    }
    Ok(small.into_iter().take(k).collect())
}

/// Average degree of the subgraph induced by a segment pair: 2m / (|U| + |W|).
pub fn average_degree(g: &OrderedBipartite, p: &SegmentPair) -> Rat {
    let m = g.count(p.x.0, p.x.1, p.y.0, p.y.1) as i128;
    let v = (p.x_len() + p.y_len()) as i128;
    if v == 0 {
        return Rat::from_integer(0);
    }
    Rat::new(2 * m, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn complete(a: usize, b: usize) -> OrderedBipartite {
        OrderedBipartite::new(a, b, (0..a).flat_map(|x| (0..b).map(move |y| (x, y)))).unwrap()
    }

    fn check_pairs(g: &OrderedBipartite, pairs: &[SegmentPair], d: Rat, n: usize) {
        // disjoint intervals per class
        let mut xs: Vec<(usize, usize)> = pairs.iter().map(|p| p.x).collect();
        xs.sort_unstable();
        for w in xs.windows(2) {
            assert!(w[0].1 <= w[1].0, "X segments overlap: {w:?}");
        }
        let mut ys: Vec<(usize, usize)> = pairs.iter().map(|p| p.y).collect();
        ys.sort_unstable();
        for w in ys.windows(2) {
            assert!(w[0].1 <= w[1].0, "Y segments overlap: {w:?}");
        }
        // direct edge count against the raw edge set (independent of the
        // prefix matrix)
        for p in pairs {
            assert!(p.x_len() > 0 && p.y_len() > 0);
            let direct = g
                .edges()
                .filter(|&(x, y)| p.x.0 <= x && x < p.x.1 && p.y.0 <= y && y < p.y.1)
                .count() as i128;
            assert!(
                Rat::from_integer(direct) >= d * Rat::from_integer(n as i128),
                "pair {p:?} has {direct} edges, needs {}",
                d * Rat::from_integer(n as i128)
            );
        }
    }

    #[test]
    fn h_zero_returns_whole_classes() {
        let g = complete(6, 8);
        let d = Rat::from_integer(1);
        let pairs = partition_segments(&g, 0, d, None).unwrap();
        assert_eq!(pairs, vec![SegmentPair { x: (0, 6), y: (0, 8) }]);
    }

    #[test]
    fn complete_bipartite_h1() {
        let g = complete(100, 100);
        let d = Rat::from_integer(3);
        // hypothesis: 100^2 >= (3 * 16 - 1) * 200 = 9400
        let pairs = partition_segments(&g, 1, d, None).unwrap();
        assert_eq!(pairs.len(), 2);
        check_pairs(&g, &pairs, d, 200);
        // each pair carries at least 600 edges
        for p in &pairs {
            assert!(g.count(p.x.0, p.x.1, p.y.0, p.y.1) >= 600);
        }
    }

    #[test]
    fn hypothesis_guards() {
        let g = complete(4, 4);
        // d too small for the strict inequality
        assert!(matches!(
            partition_segments(&g, 0, Rat::new(1, 2), None),
            Err(Error::HypothesisViolated(_))
        ));
        // too few edges
        let sparse = OrderedBipartite::new(10, 10, [(0usize, 0usize)]).unwrap();
        assert!(matches!(
            partition_segments(&sparse, 1, Rat::from_integer(1), None),
            Err(Error::HypothesisViolated(_))
        ));
    }

    fn random_dense(rng: &mut ChaCha8Rng, a: usize, b: usize, p: f64) -> OrderedBipartite {
        let edges: Vec<(usize, usize)> = (0..a)
            .flat_map(|x| (0..b).map(move |y| (x, y)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        OrderedBipartite::new(a, b, edges).unwrap()
    }

    #[test]
    fn random_instances_meet_postconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut done = 0;
        while done < 300 {
            let a = rng.gen_range(8..=120);
            let b = rng.gen_range(8..=120);
            let h = rng.gen_range(0..=3u32);
            let p = rng.gen_range(0.3..1.0);
            let g = random_dense(&mut rng, a, b, p);
            let n = a + b;
            // choose the largest usable d for this instance, if any
            let threshold_num = Rat::from_integer(g.m() as i128) / Rat::from_integer(n as i128);
            // need d*4^(h+1) - 1 <= m/n and > 2
            let d = (threshold_num + Rat::from_integer(1)) / Rat::from_integer(4i128.pow(h + 1));
            if d * Rat::from_integer(4i128.pow(h + 1)) - Rat::from_integer(1) <= Rat::from_integer(2)
                || d * Rat::from_integer(16) - Rat::from_integer(1) <= Rat::from_integer(2)
            {
                continue;
            }
            let pairs = partition_segments(&g, h, d, None).unwrap();
            assert_eq!(pairs.len(), 1 << h);
            check_pairs(&g, &pairs, d, n);
            done += 1;
        }
    }

    #[test]
    fn disjoint_pairs_k1_complete() {
        let g = complete(512, 512);
        let pairs = disjoint_pairs(&g, 1, 1).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!(average_degree(&g, &pairs[0]) >= Rat::from_integer(1));
    }

    #[test]
    fn disjoint_pairs_degree_guard() {
        let g = complete(8, 8);
        assert!(matches!(
            disjoint_pairs(&g, 1, 1),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn disjoint_pairs_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..25 {
            let k = rng.gen_range(1..=2usize);
            let r = rng.gen_range(1..=2usize);
            let need = (1usize << 9) * r * k;
            // complete bipartite with classes just above the degree bound
            let a = need + rng.gen_range(0..=64);
            let b = need + rng.gen_range(0..=64);
            let g = complete(a, b);
            let n = a + b;
            let kp = (2 * k).next_power_of_two();
            let pairs = disjoint_pairs(&g, k, r).unwrap();
            assert_eq!(pairs.len(), k);
            for p in &pairs {
                assert!(average_degree(&g, p) >= Rat::from_integer(r as i128));
                // small-pair size bound: |U| + |W| < 4n/k'
                assert!((p.x_len() + p.y_len()) * kp < 4 * n);
            }
        }
    }

    #[test]
    fn determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_dense(&mut rng, 60, 60, 0.8);
        let d = Rat::new(1, 4);
        let p1 = partition_segments(&g, 2, d, None).unwrap();
        let p2 = partition_segments(&g, 2, d, None).unwrap();
        assert_eq!(p1, p2);
    }
}
