use crate::exactalg::FgAbGroup;
use crate::Error;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const DEFAULT: &str = include_str!("../../data/stems.json");

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Entry {
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

/// Coefficient groups `q -> π_q` read from a data file. The values are
/// taken as given; nothing here checks them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemsTable {
    entries: BTreeMap<i64, Entry>,
}

impl StemsTable {
    /// Stable stems of the sphere for `q = 0..=7`.
    pub fn default_sphere() -> Self {
        StemsTable::from_json(DEFAULT).expect("bundled table parses")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let raw: BTreeMap<String, Entry> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("stems table: {e}")))?;
        let mut entries = BTreeMap::new();
        for (k, e) in raw {
            let q: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("stems table: bad degree {k:?}")))?;
            if e.torsion.iter().any(|&t| t < 2) {
                return Err(Error::Parse(format!("stems table: torsion orders in degree {q} must be at least 2")));
            }
            entries.insert(q, e);
        }
        Ok(StemsTable { entries })
    }

    pub fn to_json(&self) -> String {
        let raw: BTreeMap<String, &Entry> = self.entries.iter().map(|(q, e)| (q.to_string(), e)).collect();
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    pub fn get(&self, q: i64) -> Result<FgAbGroup, Error> {
        let e = self.entries.get(&q).ok_or_else(|| Error::MissingData(format!("no stems entry for degree {q}")))?;
        let torsion: Vec<BigInt> = e.torsion.iter().map(|&t| BigInt::from(t)).collect();
        Ok(FgAbGroup::from_invariants(e.free_rank, &torsion))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    /// The table of `Σ^s K`: every degree moves up by `s`.
    pub fn suspend(&self, s: i64) -> Self {
        StemsTable { entries: self.entries.iter().map(|(q, e)| (q + s, e.clone())).collect() }
    }
}
