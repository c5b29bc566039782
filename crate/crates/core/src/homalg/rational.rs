use super::TorResult;
use crate::exactalg::{FgAbGroup, GroupHom};
use crate::injcat::factorial;
use crate::tamemod::NatTrans;
use num_bigint::BigInt;
use num_traits::Zero;

/// Free ranks of the given Tor groups, i.e. `Tor_p(Q, -)` dimensions.
pub fn rationalize_tor(results: &[TorResult]) -> Vec<usize> {
    results.iter().map(|r| r.value.decompose().0).collect()
}

#[derive(Clone, Debug)]
pub struct CollapseReport {
    pub ranks: Vec<usize>,
    /// every degree `p >= 1` has rank zero
    pub collapses: bool,
}

pub fn rational_collapse_check(results: &[TorResult]) -> CollapseReport {
    let ranks = rationalize_tor(results);
    let collapses = ranks.iter().skip(1).all(|&r| r == 0);
    CollapseReport { ranks, collapses }
}

#[derive(Clone, Debug)]
pub struct AnnihilationReport {
    pub level: usize,
    /// kernel of the map induced on `Σ_n`-coinvariants
    pub kernel: FgAbGroup,
    /// `n!` kills the kernel
    pub annihilated: bool,
}

/// For an injective natural map, the kernel of the induced map on
/// `Σ_n`-coinvariants at each level, and whether `n!` annihilates it.
pub fn coinvariant_kernel_annihilation(t: &NatTrans) -> Vec<AnnihilationReport> {
    (0..=t.source.trunc())
        .map(|n| {
            let h = GroupHom::new_unchecked(
                t.source.level_coinvariants(n),
                t.target.level_coinvariants(n),
                t.components[n].clone(),
            )
            .expect("shape");
            let (kernel, _) = h.kernel();
            let (free, tors) = kernel.decompose();
            let bound = BigInt::from(factorial(n));
            let annihilated = free == 0 && tors.iter().all(|o| (&bound % o).is_zero());
            AnnihilationReport { level: n, kernel, annihilated }
        })
        .collect()
}
