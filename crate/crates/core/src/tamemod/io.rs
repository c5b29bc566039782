//! JSON module files (schema `tamemod-v1`).

use super::functor::TruncIFunctor;
use crate::exactalg::{FgAbGroup, Matrix};
use crate::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA: &str = "tamemod-v1";

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn to_big(&self) -> Result<BigInt, Error> {
        match self {
            Num::Int(v) => Ok(BigInt::from(*v)),
            Num::Str(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }

    fn from_big(v: &BigInt) -> Num {
        match v.to_i64() {
            Some(x) => Num::Int(x),
            None => Num::Str(v.to_string()),
        }
    }
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct LevelFile {
    generators: usize,
    #[serde(default)]
    relations: Vec<Vec<Num>>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct ModuleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    #[serde(rename = "N")]
    n: usize,
    #[serde(default)]
    grade: i64,
    levels: Vec<LevelFile>,
    #[serde(default)]
    transpositions: BTreeMap<String, Vec<Vec<Num>>>,
    #[serde(default)]
    stab: Vec<Vec<Vec<Num>>>,
}

fn matrix(rows: &[Vec<Num>], nrows: usize, ncols: usize, what: &str) -> Result<Matrix, Error> {
    if rows.len() != nrows {
        return Err(Error::Parse(format!("{what}: expected {nrows} rows, found {}", rows.len())));
    }
    let mut out = Vec::with_capacity(nrows);
    for r in rows {
        if r.len() != ncols {
            return Err(Error::Parse(format!("{what}: expected rows of length {ncols}")));
        }
        out.push(r.iter().map(Num::to_big).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(Matrix::from_rows(&out, ncols))
}

fn rows(m: &Matrix) -> Vec<Vec<Num>> {
    m.to_rows().iter().map(|r| r.iter().map(Num::from_big).collect()).collect()
}

pub fn from_json(text: &str) -> Result<TruncIFunctor, Error> {
    let f: ModuleFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(s) = &f.schema {
        if s != SCHEMA {
            return Err(Error::Parse(format!("unknown schema {s:?}")));
        }
    }
    if f.levels.len() != f.n + 1 {
        return Err(Error::Parse(format!("N = {} needs {} levels", f.n, f.n + 1)));
    }
    let mut levels = Vec::new();
    for (n, l) in f.levels.iter().enumerate() {
        let rel = matrix(&l.relations, l.relations.len(), l.generators, &format!("relations of level {n}"))?;
        levels.push(FgAbGroup::new(l.generators, rel)?);
    }
    let mut transp: Vec<Vec<Matrix>> = vec![Vec::new(); f.n + 1];
    for key in f.transpositions.keys() {
        let (n, i) = key
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| Error::Parse(format!("bad transposition key {key:?}")))?;
        if n > f.n || i == 0 || i + 1 > n {
            return Err(Error::Parse(format!("transposition key {key:?} out of range")));
        }
    }
    for n in 0..=f.n {
        let g = levels[n].ngens();
        for i in 1..n {
            let key = format!("{n},{i}");
            let m = match f.transpositions.get(&key) {
                Some(m) => matrix(m, g, g, &format!("transposition {key}"))?,
                None if g == 0 => Matrix::zeros(0, 0),
                None => return Err(Error::Parse(format!("missing transposition {key}"))),
            };
            transp[n].push(m);
        }
    }
    if f.stab.len() != f.n {
        return Err(Error::Parse(format!("expected {} stabilization maps", f.n)));
    }
    let mut stab = Vec::new();
    for (n, m) in f.stab.iter().enumerate() {
        let (r, c) = (levels[n + 1].ngens(), levels[n].ngens());
        stab.push(matrix(m, r, c, &format!("stabilization map {n}"))?);
    }
    TruncIFunctor::new(f.n, f.grade, levels, transp, stab)
}

pub fn to_json(f: &TruncIFunctor) -> String {
    let n = f.trunc();
    let mut transpositions = BTreeMap::new();
    for m in 0..=n {
        for i in 1..m {
            transpositions.insert(format!("{m},{i}"), rows(f.transposition(m, i)));
        }
    }
    let file = ModuleFile {
        schema: Some(SCHEMA.into()),
        n,
        grade: f.grade(),
        levels: f
            .levels()
            .iter()
            .map(|g| LevelFile { generators: g.ngens(), relations: rows(g.relations()) })
            .collect(),
        transpositions,
        stab: (0..n).map(|k| rows(f.stab(k))).collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}
