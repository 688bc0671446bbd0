//! Configuration-model pairings, their multigraph projections and cycle counts.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest number of points `d * n` accepted by [`enumerate_pairings`].
pub const ENUMERATION_CAP: usize = 16;

/// Rejection attempts allowed per simple-graph sample.
pub const SIMPLE_SAMPLE_ATTEMPTS: u64 = 10_000_000;

/// A perfect matching on the points `0..d*n`; point `q` belongs to cell `q / d`.
///
/// Pairs are stored as `(a, b)` with `a < b`, sorted by `a`. The index of a pair
/// in this list is the edge index used by orientations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pairing {
    d: usize,
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Builds a pairing from arbitrary pairs, validating that every point is used once.
    pub fn from_pairs(d: usize, n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let m = d * n;
        if m % 2 == 1 {
            return Err(Error::OddPointCount(m));
        }
        let mut seen = vec![false; m];
        let mut norm = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let (a, b) = (a.min(b), a.max(b));
            if b >= m || a == b || seen[a] || seen[b] {
                return Err(Error::InvalidParams(format!("pair ({a}, {b}) is not part of a perfect matching on {m} points")));
            }
            seen[a] = true;
            seen[b] = true;
            norm.push((a, b));
        }
        if norm.len() * 2 != m {
            return Err(Error::InvalidParams(format!("{} pairs do not cover {m} points", norm.len())));
        }
        norm.sort_unstable();
        Ok(Self { d, n, pairs: norm })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn cell(&self, point: usize) -> usize {
        point / self.d
    }

    /// Partner of every point.
    pub fn partners(&self) -> Vec<usize> {
        let mut partner = vec![0; self.d * self.n];
        for &(a, b) in &self.pairs {
            partner[a] = b;
            partner[b] = a;
        }
        partner
    }
}

/// A multigraph on `0..n`; loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidParams(format!("edge ({u}, {v}) has an endpoint outside 0..{n}")));
        }
        Ok(Self { n, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        Self { n, edges: (0..n).map(|i| (i, (i + 1) % n)).collect() }
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Degrees with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let first = *deg.first()?;
        deg.iter().all(|&x| x == first).then_some(first)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges.iter().all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    /// Simple complement; only meaningful for simple graphs.
    pub fn complement(&self) -> Self {
        let present: HashSet<(usize, usize)> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        let edges = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|e| !present.contains(e))
            .collect();
        Self { n: self.n, edges }
    }

    /// Adjacency lists of `(neighbour, edge index)`; a loop appears once.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            if u != v {
                adj[v].push((u, e));
            }
        }
        adj
    }

    /// Edge-list text: `n m` followed by one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.edges.len()).unwrap();
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header `n m`".into() })?;
        let [n, m] = parse_two(header, hl + 1)?;
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            let [u, v] = parse_two(line, idx + 1)?;
            if u >= n || v >= n {
                return Err(Error::Parse { line: idx + 1, msg: format!("vertex out of range 0..{n}") });
            }
            if edges.len() == m {
                return Err(Error::Parse { line: idx + 1, msg: format!("more than the declared {m} edges") });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("declared {m} edges but found {}", edges.len()),
            });
        }
        Ok(Self { n, edges })
    }
}

fn parse_two(line: &str, lineno: usize) -> Result<[usize; 2]> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse { line: lineno, msg: format!("expected two integers, found {:?}", line.trim()) });
    }
    let mut out = [0usize; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("`{f}` is not a nonnegative integer") })?;
    }
    Ok(out)
}

/// Uniform pairing: pair consecutive points of a uniform random permutation.
pub fn sample_pairing<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Pairing> {
    let m = d * n;
    if m % 2 == 1 {
        return Err(Error::OddPointCount(m));
    }
    let mut pts: Vec<usize> = (0..m).collect();
    pts.shuffle(rng);
    let mut pairs: Vec<_> = pts.chunks_exact(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
    pairs.sort_unstable();
    Ok(Pairing { d, n, pairs })
}

pub fn project(f: &Pairing) -> Multigraph {
    Multigraph { n: f.n, edges: f.pairs.iter().map(|&(a, b)| (f.cell(a), f.cell(b))).collect() }
}

pub fn is_simple(f: &Pairing) -> bool {
    project(f).is_simple()
}

/// Odometer over all perfect matchings of `0..2a`: digit `k` picks the partner
/// of the smallest unmatched point among the `2a - 2k - 1` remaining points.
pub struct PairingIter {
    d: usize,
    n: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for PairingIter {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        let m = self.d * self.n;
        let mut remaining: Vec<usize> = (0..m).collect();
        let mut pairs = Vec::with_capacity(m / 2);
        for &c in &self.digits {
            let first = remaining.remove(0);
            let partner = remaining.remove(c);
            pairs.push((first, partner));
        }
        let a = m / 2;
        self.done = true;
        for k in (0..a).rev() {
            if self.digits[k] + 1 < 2 * (a - k) - 1 {
                self.digits[k] += 1;
                self.digits[k + 1..].fill(0);
                self.done = false;
                break;
            }
        }
        Some(Pairing { d: self.d, n: self.n, pairs })
    }
}

/// Every pairing of `d * n <= ENUMERATION_CAP` points, each exactly once.
pub fn enumerate_pairings(d: usize, n: usize) -> Result<PairingIter> {
    let m = d * n;
    if m % 2 == 1 {
        return Err(Error::OddPointCount(m));
    }
    if m > ENUMERATION_CAP {
        return Err(Error::TooLarge { what: "d*n", value: m, cap: ENUMERATION_CAP });
    }
    Ok(PairingIter { d, n, digits: vec![0; m / 2], done: false })
}

/// Counts `X_1..X_kmax` of i-cycles; entry `i - 1` holds `X_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCensus {
    pub counts: Vec<u64>,
}

impl CycleCensus {
    pub fn get(&self, i: usize) -> u64 {
        self.counts.get(i - 1).copied().unwrap_or(0)
    }
}

/// Cycle counts of a multigraph with distinguishable edges: loops are
/// 1-cycles, pairs of parallel edges 2-cycles.
pub fn graph_cycle_census(g: &Multigraph, kmax: usize) -> CycleCensus {
    let mut counts = vec![0u64; kmax];
    if kmax == 0 {
        return CycleCensus { counts };
    }
    counts[0] = g.edges.iter().filter(|(u, v)| u == v).count() as u64;
    let adj = g.incidence();
    let mut on_path = vec![false; g.n];
    // Closed walks from their minimum vertex, each cycle found once per direction.
    let mut raw = vec![0u64; kmax + 1];
    for s in 0..g.n {
        on_path[s] = true;
        extend(g, &adj, s, s, usize::MAX, 1, kmax, &mut on_path, &mut raw);
        on_path[s] = false;
    }
    for i in 2..=kmax {
        counts[i - 1] = raw[i] / 2;
    }
    CycleCensus { counts }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Multigraph,
    adj: &[Vec<(usize, usize)>],
    start: usize,
    at: usize,
    via: usize,
    len: usize,
    kmax: usize,
    on_path: &mut [bool],
    raw: &mut [u64],
) {
    for &(w, e) in &adj[at] {
        if e == via || g.edges[e].0 == g.edges[e].1 {
            continue;
        }
        if w == start && len >= 2 {
            raw[len] += 1;
        } else if w > start && !on_path[w] && len < kmax {
            on_path[w] = true;
            extend(g, adj, start, w, e, len + 1, kmax, on_path, raw);
            on_path[w] = false;
        }
    }
}

pub fn cycle_census(f: &Pairing, kmax: usize) -> CycleCensus {
    graph_cycle_census(&project(f), kmax)
}

/// Uniform simple d-regular graph on `n` vertices by rejection from the
/// pairing model, abandoning a pairing at its first loop or repeated edge.
/// When `d > (n - 1) / 2` the complement of a uniform `(n - 1 - d)`-regular
/// graph is returned instead, which is again uniform.
pub fn sample_simple_graph<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Multigraph> {
    if (d * n) % 2 == 1 {
        return Err(Error::OddPointCount(d * n));
    }
    if d >= n {
        return Err(Error::InvalidParams(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let co = n - 1 - d;
    if co < d {
        return sample_simple_graph_direct(co, n, rng).map(|g| g.complement());
    }
    sample_simple_graph_direct(d, n, rng)
}

fn sample_simple_graph_direct<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Multigraph> {
    let m = d * n;
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(m / 2);
    'attempt: for _ in 0..SIMPLE_SAMPLE_ATTEMPTS {
        let mut remaining: Vec<usize> = (0..m).collect();
        let mut edges = Vec::with_capacity(m / 2);
        seen.clear();
        while let Some(first) = remaining.pop() {
            let idx = rng.random_range(0..remaining.len());
            let partner = remaining.swap_remove(idx);
            let (u, v) = (first / d, partner / d);
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                continue 'attempt;
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        return Ok(Multigraph { n, edges });
    }
    Err(Error::SamplerExhausted(SIMPLE_SAMPLE_ATTEMPTS))
}
