use super::group_json;
use crate::exactalg::FgAbGroup;
use crate::homalg::{coinvariants, tor_bar, tor_pres, Coinvariants, TorResult, DEFAULT_COLUMN_LIMIT};
use crate::tamemod::GradedTameModule;
use crate::Error;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Bar,
    Pres,
    /// both engines; the cell shows the resolution value and the verdict
    Both,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Bar => "bar",
            Engine::Pres => "pres",
            Engine::Both => "both",
        })
    }
}

#[derive(Clone, Debug)]
pub struct E2Cell {
    pub p: usize,
    pub q: i64,
    pub value: FgAbGroup,
    pub method: Engine,
    pub stabilized: bool,
    pub complete: bool,
    /// only with [`Engine::Both`]
    pub agree: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct E2Page {
    pub trunc: usize,
    pub search: usize,
    pub p_max: usize,
    pub method: Engine,
    pub degrees: Vec<i64>,
    pub cells: BTreeMap<(usize, i64), E2Cell>,
    /// coinvariants of each `π_q`, the source of the edge map
    pub edge: BTreeMap<i64, Coinvariants>,
}

pub fn assemble_e2(g: &GradedTameModule, p_max: usize, method: Engine, search: usize) -> Result<E2Page, Error> {
    let mut cells = BTreeMap::new();
    let mut edge = BTreeMap::new();
    for (q, f) in g.iter() {
        let bar = match method {
            Engine::Bar | Engine::Both => Some(tor_bar(f, p_max, DEFAULT_COLUMN_LIMIT)?),
            Engine::Pres => None,
        };
        let pres = match method {
            Engine::Pres | Engine::Both => Some(tor_pres(f, p_max, search)?),
            Engine::Bar => None,
        };
        for p in 0..=p_max {
            let pick = |v: &Option<Vec<TorResult>>| v.as_ref().map(|v| v[p].clone());
            let (b, r) = (pick(&bar), pick(&pres));
            let main = r.clone().or_else(|| b.clone()).expect("one engine ran");
            let agree = match (&b, &r) {
                (Some(b), Some(r)) => Some(b.agrees(r)),
                _ => None,
            };
            let stabilized = b.iter().chain(r.iter()).all(|t| t.stabilized);
            let complete = r.as_ref().is_none_or(|t| t.complete);
            cells.insert((p, q), E2Cell { p, q, value: main.value, method, stabilized, complete, agree });
        }
        edge.insert(q, coinvariants(f));
    }
    Ok(E2Page { trunc: g.trunc(), search, p_max, method, degrees: g.degrees().collect(), cells, edge })
}

const DIFFERENTIALS: &str = "differentials d^r: E^r_{p,q} -> E^r_{p-r,q+r-1} (r >= 2) are not computed";
const ABUTMENT: &str = "abutment: the page converges to the true homotopy groups pi_{p+q}; no abutment values are computed";

impl E2Page {
    pub fn cell(&self, p: usize, q: i64) -> Option<&E2Cell> {
        self.cells.get(&(p, q))
    }

    /// Cell `(0, q)` against the coinvariants of `π_q`, for every `q`.
    pub fn edge_matches(&self) -> bool {
        self.edge.iter().all(|(q, c)| self.cell(0, *q).is_some_and(|cell| cell.value.isomorphic(&c.value)))
    }

    /// Every row with `p >= 1` vanishes.
    pub fn concentrated_in_edge(&self) -> bool {
        self.cells.values().all(|c| c.p == 0 || c.value.is_trivial())
    }

    pub fn render_text(&self) -> String {
        let mark = |c: &E2Cell| {
            let mut s = c.value.to_string();
            if !c.stabilized {
                s.push('*');
            }
            if !c.complete {
                s.push('?');
            }
            if c.agree == Some(false) {
                s.push('!');
            }
            s
        };
        let mut rows: Vec<(String, Vec<String>)> = self
            .degrees
            .iter()
            .rev()
            .map(|&q| (format!("q={q}"), (0..=self.p_max).map(|p| mark(&self.cells[&(p, q)])).collect()))
            .collect();
        rows.push((String::new(), (0..=self.p_max).map(|p| format!("p={p}")).collect()));
        let lead = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let widths: Vec<usize> =
            (0..=self.p_max).map(|p| rows.iter().map(|r| r.1[p].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for (label, cells) in &rows {
            let mut line = format!("{label:>lead$} |");
            for (c, w) in cells.iter().zip(&widths) {
                line.push_str(&format!(" {c:<w$}", w = *w));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out.push_str("edge row (coinvariants of pi_q):");
        for (q, c) in &self.edge {
            out.push_str(&format!(" q={q}: {}{}", c.value, if c.stabilized { "" } else { "*" }));
            out.push(';');
        }
        out.pop();
        out.push('\n');
        out.push_str("legend: * not stabilized between N-1 and N; ? incomplete generator search; ! engines disagree\n");
        if self.method == Engine::Both {
            let bad = self.cells.values().filter(|c| c.agree == Some(false)).count();
            out.push_str(&format!("engines: {}\n", if bad == 0 { "AGREE".to_string() } else { format!("DISAGREE in {bad} cells") }));
        }
        out.push_str(DIFFERENTIALS);
        out.push('\n');
        out.push_str(ABUTMENT);
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<serde_json::Value> = self
            .cells
            .values()
            .map(|c| {
                let mut v = group_json(&c.value);
                let o = v.as_object_mut().expect("object");
                o.insert("p".into(), c.p.into());
                o.insert("q".into(), c.q.into());
                o.insert("method".into(), c.method.to_string().into());
                o.insert("stabilized".into(), c.stabilized.into());
                o.insert("complete".into(), c.complete.into());
                if let Some(a) = c.agree {
                    o.insert("agree".into(), a.into());
                }
                v
            })
            .collect();
        let edge: Vec<serde_json::Value> = self
            .edge
            .iter()
            .map(|(q, c)| {
                let mut v = group_json(&c.value);
                let o = v.as_object_mut().expect("object");
                o.insert("q".into(), (*q).into());
                o.insert("stabilized".into(), c.stabilized.into());
                v
            })
            .collect();
        serde_json::json!({
            "window": { "p": [0, self.p_max], "q": self.degrees },
            "method": self.method.to_string(),
            "cells": cells,
            "edge_row": edge,
            "edge_matches_coinvariants": self.edge_matches(),
            "differentials": DIFFERENTIALS,
            "abutment": ABUTMENT,
        })
    }
}
