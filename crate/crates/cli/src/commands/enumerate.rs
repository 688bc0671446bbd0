//! Exact first and second moments by enumerating every pairing and orientation.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use porient_core::config_model::{enumerate_pairings, project};
use porient_core::exact_math::pairings_count;
use porient_core::moments::{expected_count_exact, ParamPair};
use porient_core::orientation::count_bruteforce;
use porient_core::second_moment::second_moment_exact;

#[derive(Clone, Debug, PartialEq)]
pub struct EnumerateRow {
    pub p: usize,
    pub first_enumerated: BigRational,
    pub first_formula: BigRational,
    pub second_enumerated: BigRational,
    /// `None` when `d = 2p`, where the class-vector sum is not defined.
    pub second_formula: Option<BigRational>,
}

impl EnumerateRow {
    pub fn passed(&self) -> bool {
        self.first_enumerated == self.first_formula
            && self.second_formula.as_ref().is_none_or(|f| *f == self.second_enumerated)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumerateReport {
    pub d: usize,
    pub n: usize,
    pub pairings: BigInt,
    pub rows: Vec<EnumerateRow>,
}

impl EnumerateReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(EnumerateRow::passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("enumerate d = {}, n = {}: {} pairings\n", self.d, self.n, self.pairings);
        for r in &self.rows {
            writeln!(out, "p = {}", r.p).unwrap();
            writeln!(out, "  E(Y)   enumerated {}  formula {}", r.first_enumerated, r.first_formula).unwrap();
            match &r.second_formula {
                Some(f) => writeln!(out, "  E(Y^2) enumerated {}  formula {}", r.second_enumerated, f).unwrap(),
                None => writeln!(out, "  E(Y^2) enumerated {}  (d = 2p, no formula)", r.second_enumerated).unwrap(),
            }
            writeln!(out, "  {}", if r.passed() { "PASS" } else { "FAIL" }).unwrap();
        }
        out
    }
}

/// Enumerates all pairings of `d n` points; `p = None` covers every `1 <= p <= d/2`.
pub fn cmd_enumerate(d: usize, n: usize, p: Option<usize>) -> anyhow::Result<EnumerateReport> {
    let ps: Vec<usize> = match p {
        Some(p) => {
            anyhow::ensure!(p >= 1 && p < d, "p = {p} must satisfy 1 <= p < d = {d}");
            vec![p]
        }
        None => (1..=d / 2).collect(),
    };
    anyhow::ensure!(!ps.is_empty(), "no p with 1 <= p <= d/2 exists for d = {d}");
    let pairs: Vec<ParamPair> = ps.iter().map(|&p| ParamPair::new(d as u32, p as u32)).collect::<Result<_, _>>()?;
    let mut first = vec![BigInt::from(0); ps.len()];
    let mut second = vec![BigInt::from(0); ps.len()];
    for f in enumerate_pairings(d, n)? {
        let g = project(&f);
        for (i, &p) in ps.iter().enumerate() {
            let y = BigInt::from(count_bruteforce(&g, p)?);
            second[i] += &y * &y;
            first[i] += y;
        }
    }
    let pairings = pairings_count((d * n / 2) as u64);
    let mut rows = Vec::with_capacity(ps.len());
    for (i, &pair) in pairs.iter().enumerate() {
        let second_formula =
            if pair.canonical().is_eulerian() { None } else { Some(second_moment_exact(pair, n)?) };
        rows.push(EnumerateRow {
            p: ps[i],
            first_enumerated: BigRational::new(first[i].clone(), pairings.clone()),
            first_formula: expected_count_exact(pair, n)?,
            second_enumerated: BigRational::new(second[i].clone(), pairings.clone()),
            second_formula,
        });
    }
    Ok(EnumerateReport { d, n, pairings, rows })
}
