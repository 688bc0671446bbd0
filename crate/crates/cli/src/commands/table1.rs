//! The classification grid: one row per `p`, one column per `d >= 3`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use porient_core::moments::{affirmative_closure, classify_with, growth_base_cmp_one, ClassLabel, ParamPair, MAXCUT_UPPER_BOUNDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1 {
    pub dmax: u32,
    pub pmax: u32,
    /// `cells[p - 1][d - 3]`.
    pub cells: Vec<Vec<ClassLabel>>,
}

impl Table1 {
    pub fn cell(&self, d: u32, p: u32) -> ClassLabel {
        self.cells[(p - 1) as usize][(d - 3) as usize]
    }

    /// The first-moment growth base equals 1, so the negative verdict rests on
    /// the directed-cycle refinement rather than on exponential decay.
    pub fn is_equality_cell(&self, d: u32, p: u32) -> bool {
        self.cell(d, p) == ClassLabel::NegativeN
            && ParamPair::new(d, p).is_ok_and(|q| growth_base_cmp_one(q) == Ordering::Equal)
    }

    pub fn is_jaeger_cell(d: u32, p: u32) -> bool {
        d == 4 * p + 1
    }

    fn note(&self, d: u32, p: u32) -> &'static str {
        if self.is_equality_cell(d, p) {
            "equality"
        } else if self.cell(d, p) == ClassLabel::NegativeNstar {
            "maxcut"
        } else if Self::is_jaeger_cell(d, p) {
            "jaeger"
        } else {
            ""
        }
    }

    fn text_cell(&self, d: u32, p: u32) -> String {
        let mut s = self.cell(d, p).symbol().to_string();
        if self.is_equality_cell(d, p) {
            s.push('=');
        }
        if Self::is_jaeger_cell(d, p) {
            s = format!("[{s}]");
        }
        s
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Csv => self.render_csv(),
            TableFormat::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::from("p,d,label,note\n");
        for p in 1..=self.pmax {
            for d in 3..=self.dmax {
                writeln!(out, "{p},{d},{},{}", self.cell(d, p).symbol(), self.note(d, p)).unwrap();
            }
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::from("p\\d");
        for d in 3..=self.dmax {
            write!(out, "{d:>5}").unwrap();
        }
        out.push('\n');
        for p in 1..=self.pmax {
            write!(out, "{p:<3}").unwrap();
            for d in 3..=self.dmax {
                write!(out, "{:>5}", self.text_cell(d, p)).unwrap();
            }
            out.push('\n');
        }
        out.push('\n');
        out.push_str("Y  a.a.s. has a p-orientation\n");
        out.push_str("N  a.a.s. has none: the expected count vanishes\n");
        out.push_str("N* a.a.s. has none: the maximum bisection is too small\n");
        out.push_str("?  open\n");
        out.push_str("#  infeasible (p >= d)\n");
        out.push_str("[ ] Jaeger cell d = 4p + 1\n");
        for p in 1..=self.pmax {
            for d in 3..=self.dmax {
                if self.is_equality_cell(d, p) {
                    writeln!(out, "N= ({d},{p}): the growth base equals 1; negative via the directed-cycle count").unwrap();
                }
            }
        }
        for p in 1..=self.pmax {
            for d in 3..=self.dmax {
                if self.cell(d, p) != ClassLabel::NegativeNstar {
                    continue;
                }
                let q = ParamPair::new(d, p).map(|x| x.canonical().p).unwrap_or(p);
                let bound = MAXCUT_UPPER_BOUNDS.iter().find(|b| b.0 == d).map(|b| b.1).unwrap_or(f64::NAN);
                let needed = 1.0 - 2.0 * q as f64 / d as f64;
                writeln!(
                    out,
                    "N* ({d},{p}): needs bisection fraction {needed:.4} > max-cut bound {bound:.4} (Coja-Oghlan et al.)"
                )
                .unwrap();
            }
        }
        out
    }
}

pub fn cmd_table1(dmax: u32, pmax: u32) -> Table1 {
    let closure = affirmative_closure(dmax.max(3));
    let cells = (1..=pmax).map(|p| (3..=dmax).map(|d| classify_with(&closure, d, p)).collect()).collect();
    Table1 { dmax, pmax, cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markers() {
        let t = cmd_table1(20, 4);
        assert!(t.is_equality_cell(8, 1));
        assert!(!t.is_equality_cell(9, 1));
        let text = t.render(TableFormat::Text);
        assert!(text.contains("N="));
        assert!(text.contains("[Y]"));
        assert_eq!(t.render(TableFormat::Csv).lines().count(), 1 + 4 * 18);
    }
}
