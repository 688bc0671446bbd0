//! Exact maximum bisection and the obstruction it gives to p-orientations:
//! a p-orientation sends exactly `(d - 2p) n / 2` more edges from the
//! in-vertices to the out-vertices than back, so the maximum bisection must
//! have at least that many crossing edges.

use std::collections::VecDeque;

use crate::config_model::Multigraph;
use crate::error::{Error, Result};
use crate::orientation::{Bisection, EXACT_VERTEX_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BisectionMethod {
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectionResult {
    pub best_size: usize,
    pub witness: Bisection,
    pub method: BisectionMethod,
}

struct Search {
    /// Vertices in search order.
    order: Vec<usize>,
    /// For the vertex at each position, its neighbours earlier in the order (with multiplicity).
    back: Vec<Vec<usize>>,
    /// Non-loop edges whose later endpoint sits at each position.
    closing: Vec<usize>,
    side: Vec<Option<bool>>,
    half: usize,
    best: usize,
    best_side: Vec<bool>,
}

impl Search {
    fn run(&mut self, pos: usize, crossing: usize, undecided: usize, in_count: usize) {
        if crossing + undecided <= self.best && pos > 0 {
            return;
        }
        if pos == self.order.len() {
            self.best = crossing;
            self.best_side = self.side.iter().map(|s| s.unwrap_or(false)).collect();
            return;
        }
        let out_count = pos - in_count;
        let v = self.order[pos];
        let choices: &[bool] = if pos == 0 { &[true] } else { &[true, false] };
        for &s in choices {
            if (s && in_count == self.half) || (!s && out_count == self.half) {
                continue;
            }
            let gained = self.back[pos].iter().filter(|&&u| self.side[u] != Some(s)).count();
            self.side[v] = Some(s);
            self.run(pos + 1, crossing + gained, undecided - self.closing[pos], in_count + usize::from(s));
            self.side[v] = None;
        }
    }
}

/// Breadth-first order from vertex 0, restarting in each component, so edges
/// close early and the bound bites sooner.
fn bfs_order(g: &Multigraph) -> Vec<usize> {
    let inc = g.incidence();
    let mut seen = vec![false; g.n];
    let mut order = Vec::with_capacity(g.n);
    for start in 0..g.n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in &inc[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// The largest number of crossing edges over all balanced vertex partitions,
/// by branch and bound with vertex 0 fixed on the in-side.
pub fn max_bisection_exact(g: &Multigraph) -> Result<BisectionResult> {
    if g.n % 2 == 1 {
        return Err(Error::OddVertexCount(g.n));
    }
    if g.n > EXACT_VERTEX_CAP {
        return Err(Error::TooLarge { what: "vertex count", value: g.n, cap: EXACT_VERTEX_CAP });
    }
    let order = bfs_order(g);
    let mut position = vec![0; g.n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut back = vec![Vec::new(); g.n];
    let mut closing = vec![0; g.n];
    let mut proper = 0;
    for &(u, v) in &g.edges {
        if u == v {
            continue;
        }
        proper += 1;
        let (first, last) = if position[u] < position[v] { (u, v) } else { (v, u) };
        back[position[last]].push(first);
        closing[position[last]] += 1;
    }
    let mut search = Search {
        order,
        back,
        closing,
        side: vec![None; g.n],
        half: g.n / 2,
        best: 0,
        best_side: Vec::new(),
    };
    search.run(0, 0, proper, 0);
    if search.best_side.is_empty() {
        // Only reachable when every completion ties at zero crossings.
        search.best_side = (0..g.n).map(|v| position[v] < g.n / 2).collect();
    }
    let (in_vertices, out_vertices) = (0..g.n).partition(|&v| search.best_side[v]);
    let witness = Bisection { in_vertices, out_vertices };
    debug_assert_eq!(witness.crossing_edges(g), search.best);
    Ok(BisectionResult { best_size: search.best, witness, method: BisectionMethod::Exact })
}

/// `|d - 2p| n / 2`, the crossing count every p-orientation forces.
pub fn obstruction_threshold(d: usize, p: usize, n: usize) -> usize {
    d.abs_diff(2 * p) * n / 2
}

/// `true` when the maximum bisection is too small for any p-orientation to exist.
pub fn orientation_obstruction(g: &Multigraph, p: usize) -> Result<bool> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::InvalidParams("the obstruction needs a regular graph".into()))?;
    if p == 0 || p >= d {
        return Err(Error::InvalidParams(format!("need 1 <= p < d, got p = {p}, d = {d}")));
    }
    let threshold = obstruction_threshold(d, p, g.n);
    if threshold == 0 {
        return Ok(false);
    }
    Ok(max_bisection_exact(g)?.best_size < threshold)
}

/// `(1 - η) log(1 - η) + (1 + η) log(1 + η)`.
pub fn bollobas_lhs(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::OutsideDomain(format!("η = {eta} must lie in (0, 1)")));
    }
    Ok((1.0 - eta) * (1.0 - eta).ln() + (1.0 + eta) * (1.0 + eta).ln())
}

/// Whether the expected number of bisections of size `(1 + η) d n / 4`
/// vanishes exponentially: `lhs(η) > 4 log 2 / d`.
pub fn bollobas_condition(d: u32, eta: f64) -> Result<bool> {
    Ok(bollobas_lhs(eta)? > 4.0 * std::f64::consts::LN_2 / d as f64)
}

/// `d/4 - sqrt(d log 2) / 2`, below which p-orientations exist for large d.
pub fn pstar_lower_bound(d: u32) -> f64 {
    let d = d as f64;
    d / 4.0 - (d * std::f64::consts::LN_2).sqrt() / 2.0
}
