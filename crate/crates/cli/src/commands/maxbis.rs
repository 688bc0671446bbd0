//! Maximum bisection of a graph read from an edge-list file, and whether it
//! rules out p-orientations.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use porient_core::bisection::{max_bisection_exact, obstruction_threshold};
use porient_core::config_model::Multigraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxbisReport {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub p: usize,
    /// `None` when the threshold is zero and no search was needed.
    pub max_bisection: Option<usize>,
    pub threshold: usize,
    pub obstructed: bool,
    pub witness: Option<Vec<usize>>,
}

impl MaxbisReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n: {}", self.n).unwrap();
        writeln!(out, "m: {}", self.m).unwrap();
        writeln!(out, "d: {}", self.d).unwrap();
        writeln!(out, "p: {}", self.p).unwrap();
        match self.max_bisection {
            Some(b) => writeln!(out, "max_bisection: {b}").unwrap(),
            None => writeln!(out, "max_bisection: not computed").unwrap(),
        }
        writeln!(out, "threshold: {}", self.threshold).unwrap();
        writeln!(out, "obstruction: {}", self.obstructed).unwrap();
        if let Some(w) = &self.witness {
            let side: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            writeln!(out, "witness_side: {}", side.join(" ")).unwrap();
        }
        out
    }
}

pub fn maxbis_graph(g: &Multigraph, p: usize) -> anyhow::Result<MaxbisReport> {
    let d = g.regular_degree().context("the graph is not regular")?;
    anyhow::ensure!(p >= 1 && p < d, "need 1 <= p < d, got p = {p}, d = {d}");
    let threshold = obstruction_threshold(d, p, g.n);
    let (max_bisection, witness) = if threshold == 0 && (g.n % 2 == 1 || g.n > porient_core::orientation::EXACT_VERTEX_CAP) {
        (None, None)
    } else {
        let r = max_bisection_exact(g)?;
        (Some(r.best_size), Some(r.witness.in_vertices))
    };
    let obstructed = max_bisection.is_some_and(|b| b < threshold);
    Ok(MaxbisReport { n: g.n, m: g.m(), d, p, max_bisection, threshold, obstructed, witness })
}

pub fn cmd_maxbis(path: &Path, p: usize) -> anyhow::Result<MaxbisReport> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = Multigraph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
    maxbis_graph(&g, p)
}
