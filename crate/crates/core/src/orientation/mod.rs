//! p-orientations: decision, counting, manipulation and the oriented-pairing sampler.
//!
//! An orientation stores one flag per edge. For an edge `(u, v)` (or a pair
//! `(a, b)` of a pairing) the unflipped direction is `u -> v`, so `v` holds the
//! in-point. A loop always contributes exactly one to the in-degree of its vertex.

mod flow;

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::config_model::{project, CycleCensus, Multigraph, Pairing};
use crate::error::{Error, Result};
use crate::moments::ParamPair;
use flow::FlowNetwork;

/// Largest edge count accepted by [`count_bruteforce`].
pub const BRUTEFORCE_EDGE_CAP: usize = 32;

/// Largest vertex count accepted by [`exists_exact`].
pub const EXACT_VERTEX_CAP: usize = 24;

/// One in-point designation per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    reversed: Vec<bool>,
}

impl Orientation {
    /// Every edge `(u, v)` directed `u -> v`.
    pub fn forward(m: usize) -> Self {
        Self { reversed: vec![false; m] }
    }

    pub fn from_reversed(reversed: Vec<bool>) -> Self {
        Self { reversed }
    }

    pub fn len(&self) -> usize {
        self.reversed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reversed.is_empty()
    }

    pub fn is_reversed(&self, e: usize) -> bool {
        self.reversed[e]
    }

    /// `(tail, head)` of an edge given by its endpoints.
    pub fn direct(&self, e: usize, (u, v): (usize, usize)) -> (usize, usize) {
        if self.reversed[e] {
            (v, u)
        } else {
            (u, v)
        }
    }

    /// The arcs of `g` under this orientation.
    pub fn arcs(&self, g: &Multigraph) -> Vec<(usize, usize)> {
        check_len(g, self);
        g.edges.iter().enumerate().map(|(e, &uv)| self.direct(e, uv)).collect()
    }

    /// Directed edge list: `n m`, then one `u v` line per arc `u -> v`.
    pub fn to_directed_edge_list(&self, g: &Multigraph) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", g.n, g.m()).unwrap();
        for (u, v) in self.arcs(g) {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

fn check_len(g: &Multigraph, o: &Orientation) {
    assert_eq!(g.m(), o.len(), "orientation has {} flags for {} edges", o.len(), g.m());
}

/// A balanced split into in-vertices (in-degree `p`) and out-vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisection {
    pub in_vertices: Vec<usize>,
    pub out_vertices: Vec<usize>,
}

impl Bisection {
    /// Number of edges with one endpoint on each side.
    pub fn crossing_edges(&self, g: &Multigraph) -> usize {
        let side = self.sides(g.n);
        g.edges.iter().filter(|&&(u, v)| side[u] != side[v]).count()
    }

    /// `true` at in-vertices.
    pub fn sides(&self, n: usize) -> Vec<bool> {
        let mut side = vec![false; n];
        for &v in &self.in_vertices {
            side[v] = true;
        }
        side
    }
}

/// A p-orientation together with the bisection it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub bisection: Bisection,
    pub orientation: Orientation,
}

pub fn in_degrees(g: &Multigraph, o: &Orientation) -> Vec<usize> {
    let mut indeg = vec![0; g.n];
    for (_, h) in o.arcs(g) {
        indeg[h] += 1;
    }
    indeg
}

/// Every vertex has in-degree `p` or `deg(v) - p`.
pub fn is_p_orientation(g: &Multigraph, o: &Orientation, p: usize) -> bool {
    let deg = g.degrees();
    in_degrees(g, o).iter().zip(&deg).all(|(&i, &d)| i == p || (d >= p && i == d - p))
}

fn targets_for(deg: usize, p: usize) -> [Option<usize>; 2] {
    [(p <= deg).then_some(p), deg.checked_sub(p)]
}

/// Number of p-orientations by exhaustive search over edge directions,
/// pruning any partial assignment that leaves a vertex unable to reach
/// in-degree `p` or `deg(v) - p`.
pub fn count_bruteforce(g: &Multigraph, p: usize) -> Result<u64> {
    if g.m() > BRUTEFORCE_EDGE_CAP {
        return Err(Error::TooLarge { what: "edge count", value: g.m(), cap: BRUTEFORCE_EDGE_CAP });
    }
    let deg = g.degrees();
    let mut indeg = vec![0usize; g.n];
    let mut rem = vec![0usize; g.n];
    let mut loops = 0u32;
    for &(u, v) in &g.edges {
        if u == v {
            indeg[u] += 1;
            loops += 1;
        } else {
            rem[u] += 1;
            rem[v] += 1;
        }
    }
    let mut state = Search { deg, indeg, rem, p };
    if !(0..g.n).all(|v| state.viable(v)) {
        return Ok(0);
    }
    let edges = bfs_edge_order(g);
    Ok(state.count(&edges, 0) << loops)
}

struct Search {
    deg: Vec<usize>,
    indeg: Vec<usize>,
    rem: Vec<usize>,
    p: usize,
}

impl Search {
    fn viable(&self, v: usize) -> bool {
        let (lo, hi) = (self.indeg[v], self.indeg[v] + self.rem[v]);
        targets_for(self.deg[v], self.p).into_iter().flatten().any(|t| lo <= t && t <= hi)
    }

    fn count(&mut self, edges: &[(usize, usize)], i: usize) -> u64 {
        let Some(&(u, v)) = edges.get(i) else {
            return 1;
        };
        self.rem[u] -= 1;
        self.rem[v] -= 1;
        let mut total = 0;
        for head in [v, u] {
            self.indeg[head] += 1;
            if self.viable(u) && self.viable(v) {
                total += self.count(edges, i + 1);
            }
            self.indeg[head] -= 1;
        }
        self.rem[u] += 1;
        self.rem[v] += 1;
        total
    }
}

/// Non-loop edges ordered so that each vertex's edges finish early.
fn bfs_edge_order(g: &Multigraph) -> Vec<(usize, usize)> {
    let adj = g.incidence();
    let mut pos = vec![usize::MAX; g.n];
    let mut next = 0;
    for s in 0..g.n {
        if pos[s] != usize::MAX {
            continue;
        }
        pos[s] = next;
        next += 1;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &adj[u] {
                if pos[w] == usize::MAX {
                    pos[w] = next;
                    next += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = g.edges.iter().copied().filter(|(u, v)| u != v).collect();
    edges.sort_by_key(|&(u, v)| (pos[u].max(pos[v]), pos[u].min(pos[v])));
    edges
}

struct FlowOutcome {
    deficiency: usize,
    orientation: Option<Orientation>,
    unsaturated: Vec<bool>,
}

fn solve_targets(g: &Multigraph, r: &[usize]) -> FlowOutcome {
    let (m, n) = (g.m(), g.n);
    let (s, t) = (0, 1 + m + n);
    let mut net = FlowNetwork::new(m + n + 2);
    let mut head_arcs = Vec::with_capacity(m);
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        net.add_arc(s, 1 + e, 1);
        let to_v = net.add_arc(1 + e, 1 + m + v, 1);
        if u != v {
            net.add_arc(1 + e, 1 + m + u, 1);
        }
        head_arcs.push(to_v);
    }
    let sink_arcs: Vec<usize> = (0..n).map(|v| net.add_arc(1 + m + v, t, r[v] as u32)).collect();
    let flow = net.max_flow(s, t) as usize;
    let unsaturated = sink_arcs.iter().zip(r).map(|(&a, &rv)| (net.flow(a) as usize) < rv).collect();
    let orientation = (flow == m).then(|| Orientation {
        reversed: head_arcs.iter().map(|&a| net.flow(a) == 0).collect(),
    });
    FlowOutcome { deficiency: m - flow, orientation, unsaturated }
}

/// An orientation with in-degree exactly `r[v]` at every vertex, if one exists.
pub fn feasible_with_targets(g: &Multigraph, r: &[usize]) -> Result<Option<Orientation>> {
    if r.len() != g.n {
        return Err(Error::InvalidParams(format!("{} targets for {} vertices", r.len(), g.n)));
    }
    let sum: usize = r.iter().sum();
    if sum != g.m() {
        return Err(Error::TargetSum { sum, expected: g.m() });
    }
    Ok(solve_targets(g, r).orientation)
}

fn bisection_targets(side: &[bool], d: usize, p: usize) -> Vec<usize> {
    side.iter().map(|&inv| if inv { p } else { d - p }).collect()
}

fn witness_from(side: &[bool], orientation: Orientation) -> Witness {
    let (ins, outs): (Vec<usize>, Vec<usize>) = (0..side.len()).partition(|&v| side[v]);
    Witness { bisection: Bisection { in_vertices: ins, out_vertices: outs }, orientation }
}

fn regular_degree_checked(g: &Multigraph, p: usize) -> Result<usize> {
    let d = g.regular_degree().ok_or_else(|| Error::InvalidParams("graph is not regular".into()))?;
    if p == 0 || p >= d {
        return Err(Error::InvalidParams(format!("need 1 <= p < d, got d = {d}, p = {p}")));
    }
    Ok(d)
}

/// Decides existence of a p-orientation of a regular graph by trying every
/// bisection with vertex 0 among the in-vertices (the dual orientation covers
/// the other half) and realising the in-degree targets by max-flow.
pub fn exists_exact(g: &Multigraph, p: usize) -> Result<Option<Witness>> {
    if g.n % 2 == 1 {
        return Err(Error::OddVertexCount(g.n));
    }
    if g.n > EXACT_VERTEX_CAP {
        return Err(Error::TooLarge { what: "vertex count", value: g.n, cap: EXACT_VERTEX_CAP });
    }
    let d = regular_degree_checked(g, p)?;
    let n = g.n;
    let half = n / 2;
    if 2 * p == d {
        let side: Vec<bool> = (0..n).map(|v| v < half).collect();
        return Ok(solve_targets(g, &vec![p; n]).orientation.map(|o| witness_from(&side, o)));
    }
    let (cap_in, cap_out) = (p * half, (d - p) * half);
    // Combinations of `half - 1` vertices from 1..n, joined with vertex 0.
    let k = half - 1;
    let mut idx: Vec<usize> = (1..=k).collect();
    let mut side = vec![false; n];
    loop {
        side.fill(false);
        side[0] = true;
        for &i in &idx {
            side[i] = true;
        }
        let (mut e_in, mut e_out) = (0, 0);
        for &(u, v) in &g.edges {
            match (side[u], side[v]) {
                (true, true) => e_in += 1,
                (false, false) => e_out += 1,
                _ => {}
            }
        }
        if e_in <= cap_in && e_out <= cap_out {
            if let Some(o) = solve_targets(g, &bisection_targets(&side, d, p)).orientation {
                return Ok(Some(witness_from(&side, o)));
            }
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return Ok(None);
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Search effort for [`exists_heuristic`]: `restarts` random starts, each
/// allowed `steps_per_vertex * n` swap proposals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeuristicBudget {
    pub restarts: u32,
    pub steps_per_vertex: u32,
}

impl Default for HeuristicBudget {
    fn default() -> Self {
        Self { restarts: 50, steps_per_vertex: 20 }
    }
}

/// Local search over bisections minimising the flow deficiency `m - maxflow`.
///
/// Each step swaps a vertex whose target was not met with a random vertex on
/// the other side and keeps the swap unless the deficiency grows. `None` means
/// nothing was found, not that no p-orientation exists.
pub fn exists_heuristic<R: Rng + ?Sized>(
    g: &Multigraph,
    p: usize,
    budget: HeuristicBudget,
    rng: &mut R,
) -> Option<Witness> {
    let d = regular_degree_checked(g, p).ok()?;
    let n = g.n;
    if 2 * p == d {
        let side: Vec<bool> = (0..n).map(|v| v < n / 2).collect();
        return solve_targets(g, &vec![p; n]).orientation.map(|o| witness_from(&side, o));
    }
    if n % 2 == 1 {
        return None;
    }
    let steps = budget.steps_per_vertex as usize * n;
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..budget.restarts {
        order.shuffle(rng);
        let mut side = vec![false; n];
        for &v in &order[..n / 2] {
            side[v] = true;
        }
        let mut cur = solve_targets(g, &bisection_targets(&side, d, p));
        for _ in 0..steps {
            if let Some(o) = cur.orientation.take() {
                return Some(witness_from(&side, o));
            }
            let stuck: Vec<usize> = (0..n).filter(|&v| cur.unsaturated[v]).collect();
            let &a = stuck.choose(rng)?;
            let others: Vec<usize> = (0..n).filter(|&v| side[v] != side[a]).collect();
            let &b = others.choose(rng)?;
            side.swap(a, b);
            let cand = solve_targets(g, &bisection_targets(&side, d, p));
            if cand.deficiency <= cur.deficiency {
                cur = cand;
            } else {
                side.swap(a, b);
            }
        }
        if let Some(o) = cur.orientation {
            return Some(witness_from(&side, o));
        }
    }
    None
}

/// Reverses every edge; in-points and out-points swap.
pub fn dual(o: &Orientation) -> Orientation {
    Orientation { reversed: o.reversed.iter().map(|r| !r).collect() }
}

/// `W_1..W_rmax`: consistently directed r-cycles of the projected multigraph.
/// Every loop is a directed 1-cycle.
pub fn directed_cycle_census(f: &Pairing, o: &Orientation, rmax: usize) -> CycleCensus {
    let g = project(f);
    let mut counts = vec![0u64; rmax];
    if rmax == 0 {
        return CycleCensus { counts };
    }
    let mut out = vec![Vec::new(); g.n];
    for (t, h) in o.arcs(&g) {
        if t == h {
            counts[0] += 1;
        } else {
            out[t].push(h);
        }
    }
    let mut on_path = vec![false; g.n];
    for s in 0..g.n {
        on_path[s] = true;
        follow(&out, s, s, 1, rmax, &mut on_path, &mut counts);
        on_path[s] = false;
    }
    CycleCensus { counts }
}

fn follow(out: &[Vec<usize>], start: usize, at: usize, len: usize, rmax: usize, on_path: &mut [bool], counts: &mut [u64]) {
    for &w in &out[at] {
        if w == start {
            counts[len - 1] += 1;
        } else if w > start && !on_path[w] && len < rmax {
            on_path[w] = true;
            follow(out, start, w, len + 1, rmax, on_path, counts);
            on_path[w] = false;
        }
    }
}

/// Flips the edges of a directed cycle, given as edge indices in traversal order.
pub fn reverse_cycle(g: &Multigraph, o: &Orientation, cycle: &[usize]) -> Result<Orientation> {
    check_len(g, o);
    if cycle.is_empty() {
        return Err(Error::NotDirectedCycle("empty edge sequence".into()));
    }
    if let Some(&e) = cycle.iter().find(|&&e| e >= g.m()) {
        return Err(Error::NotDirectedCycle(format!("edge {e} is not in the graph")));
    }
    let arcs: Vec<(usize, usize)> = cycle.iter().map(|&e| o.direct(e, g.edges[e])).collect();
    let mut seen_vertex = vec![false; g.n];
    let mut seen_edge = vec![false; g.m()];
    for (i, &(t, h)) in arcs.iter().enumerate() {
        let e = cycle[i];
        if seen_edge[e] || seen_vertex[t] {
            return Err(Error::NotDirectedCycle(format!("edge {e} or vertex {t} repeats")));
        }
        seen_edge[e] = true;
        seen_vertex[t] = true;
        let next_tail = arcs[(i + 1) % arcs.len()].0;
        if h != next_tail {
            return Err(Error::NotDirectedCycle(format!("edge {e} ends at {h} but the next edge starts at {next_tail}")));
        }
    }
    let mut reversed = o.reversed.clone();
    for &e in cycle {
        reversed[e] = !reversed[e];
    }
    Ok(Orientation { reversed })
}

/// A uniform element of the space of (pairing, p-orientation) pairs.
///
/// In-vertices are a uniform half of the cells, each cell gets a uniform set of
/// special points, and in-points are matched to out-points by a uniform
/// bijection. When `d = 2p` every cell simply receives `p` in-points.
pub fn sample_oriented_pairing<R: Rng + ?Sized>(pair: ParamPair, n: usize, rng: &mut R) -> Result<(Pairing, Orientation)> {
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let (d, p) = (pair.d as usize, pair.p as usize);
    let mut cells: Vec<usize> = (0..n).collect();
    cells.shuffle(rng);
    let mut in_count = vec![d - p; n];
    for &v in &cells[..n / 2] {
        in_count[v] = p;
    }
    let mut in_points = Vec::with_capacity(d * n / 2);
    let mut out_points = Vec::with_capacity(d * n / 2);
    let mut pts: Vec<usize> = Vec::with_capacity(d);
    for v in 0..n {
        pts.clear();
        pts.extend(v * d..(v + 1) * d);
        pts.shuffle(rng);
        in_points.extend_from_slice(&pts[..in_count[v]]);
        out_points.extend_from_slice(&pts[in_count[v]..]);
    }
    out_points.shuffle(rng);
    let mut triples: Vec<(usize, usize, bool)> = in_points
        .iter()
        .zip(&out_points)
        .map(|(&i, &o)| if o < i { (o, i, false) } else { (i, o, true) })
        .collect();
    triples.sort_unstable();
    let f = Pairing::from_pairs(d, n, triples.iter().map(|&(a, b, _)| (a, b)).collect())?;
    Ok((f, Orientation { reversed: triples.iter().map(|t| t.2).collect() }))
}

/// Cell-type counts of two p-orientations of one pairing.
///
/// A cell gets `alpha = 0` if it is an in-vertex under the first orientation
/// and `alpha = 1` otherwise; `beta` likewise for the second. `j` is the
/// number of special points the two orientations share at the cell.
/// `counts[j]` lists `k_{j00}, k_{j01}, k_{j10}, k_{j11}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairClassVector {
    pub d: usize,
    pub n: usize,
    pub p: usize,
    pub k: u64,
    pub counts: Vec<[u64; 4]>,
}

/// Slot of `(alpha, beta)` inside a `counts` row.
pub fn class_slot(alpha: usize, beta: usize) -> usize {
    2 * alpha + beta
}

impl PairClassVector {
    pub fn get(&self, j: usize, alpha: usize, beta: usize) -> u64 {
        self.counts[j][class_slot(alpha, beta)]
    }

    /// The vector of `(O1, dual(O2))`: `beta` flips and `k -> n/2 - k`.
    pub fn involution(&self) -> Self {
        let counts = self.counts.iter().map(|c| [c[1], c[0], c[3], c[2]]).collect();
        Self { counts, k: (self.n / 2) as u64 - self.k, ..self.clone() }
    }

    /// Whether the four row sums are `k, n/2 - k, n/2 - k, k`.
    pub fn satisfies_sum_constraints(&self) -> bool {
        let half = (self.n / 2) as u64;
        if self.k > half {
            return false;
        }
        let sums: Vec<u64> = (0..4).map(|s| self.counts.iter().map(|c| c[s]).sum()).collect();
        sums == [self.k, half - self.k, half - self.k, self.k]
    }
}

struct CellView {
    alpha: Vec<usize>,
    special: Vec<Vec<bool>>,
}

fn cell_view(f: &Pairing, o: &Orientation, p: usize) -> Result<CellView> {
    let d = f.d();
    let mut is_in = vec![false; d * f.n()];
    for (e, &(a, b)) in f.pairs().iter().enumerate() {
        is_in[if o.is_reversed(e) { a } else { b }] = true;
    }
    let mut alpha = Vec::with_capacity(f.n());
    let mut special = Vec::with_capacity(f.n());
    for v in 0..f.n() {
        let pts = &is_in[v * d..(v + 1) * d];
        let indeg = pts.iter().filter(|&&x| x).count();
        let a = if indeg == p {
            0
        } else if indeg == d - p {
            1
        } else {
            return Err(Error::NotPOrientation(format!("cell {v} has in-degree {indeg}")));
        };
        alpha.push(a);
        special.push(pts.iter().map(|&x| x == (a == 0)).collect());
    }
    Ok(CellView { alpha, special })
}

pub fn pair_class_vector(f: &Pairing, o1: &Orientation, o2: &Orientation, p: usize) -> Result<PairClassVector> {
    let d = f.d();
    let p = p.min(d.saturating_sub(p));
    if p == 0 || 2 * p == d {
        return Err(Error::InvalidParams(format!("pair classes need 1 <= p < d/2, got d = {d}, p = {p}")));
    }
    for o in [o1, o2] {
        if o.len() != f.pairs().len() {
            return Err(Error::NotPOrientation(format!("{} flags for {} pairs", o.len(), f.pairs().len())));
        }
    }
    let (c1, c2) = (cell_view(f, o1, p)?, cell_view(f, o2, p)?);
    let mut counts = vec![[0u64; 4]; p + 1];
    let mut k = 0;
    for v in 0..f.n() {
        let j = c1.special[v].iter().zip(&c2.special[v]).filter(|(a, b)| **a && **b).count();
        counts[j][class_slot(c1.alpha[v], c2.alpha[v])] += 1;
        if c1.alpha[v] == 0 && c2.alpha[v] == 0 {
            k += 1;
        }
    }
    Ok(PairClassVector { d, n: f.n(), p, k, counts })
}

/// Points that are in-points under both orientations, counted directly.
pub fn in_in_point_count(f: &Pairing, o1: &Orientation, o2: &Orientation) -> usize {
    f.pairs()
        .iter()
        .enumerate()
        .filter(|&(e, _)| o1.is_reversed(e) == o2.is_reversed(e))
        .count()
}

#[cfg(test)]
mod tests;
