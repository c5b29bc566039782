//! Coinvariants, `Tor^{Z[M]}_*(Z, -)` by two independent engines, and
//! homology of symmetric groups.

mod bar;
mod group;
mod pres;
mod rational;
mod stems;

pub use bar::{bar_chain_counts, tor_bar, DEFAULT_COLUMN_LIMIT};
pub use group::{group_homology, GROUP_LIMIT};
pub use pres::{tor_pres, tor_pres_from};
pub use rational::{coinvariant_kernel_annihilation, rational_collapse_check, rationalize_tor, AnnihilationReport, CollapseReport};
pub use stems::StemsTable;

use crate::exactalg::FgAbGroup;
use crate::tamemod::TruncIFunctor;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorMethod {
    Bar,
    PResolution,
}

impl fmt::Display for TorMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorMethod::Bar => "bar",
            TorMethod::PResolution => "pres",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorResult {
    pub degree: usize,
    pub value: FgAbGroup,
    pub method: TorMethod,
    pub trunc: usize,
    /// generator search level of the resolution engine
    pub search: Option<usize>,
    /// same value one truncation level lower
    pub stabilized: bool,
    /// the resolution search covered every level it needed to
    pub complete: bool,
}

impl TorResult {
    pub fn agrees(&self, other: &TorResult) -> bool {
        self.degree == other.degree && self.value.isomorphic(&other.value)
    }
}

impl fmt::Display for TorResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tor_{} = {}", self.degree, self.value)?;
        if !self.stabilized {
            write!(f, " (not stabilized)")?;
        }
        if !self.complete {
            write!(f, " (incomplete search)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Coinvariants {
    /// `Z ⊗_{Σ_n} F(n)` for `n = 0..=N`
    pub sequence: Vec<FgAbGroup>,
    pub value: FgAbGroup,
    /// the last two maps of the sequence are isomorphisms
    pub stabilized: bool,
}

pub fn coinvariants(f: &TruncIFunctor) -> Coinvariants {
    let n = f.trunc();
    let sequence: Vec<FgAbGroup> = (0..=n).map(|k| f.level_coinvariants(k)).collect();
    let stabilized = (n.saturating_sub(2)..n).all(|k| f.coinvariant_stab(k).is_isomorphism());
    Coinvariants { value: sequence[n].clone(), sequence, stabilized }
}
