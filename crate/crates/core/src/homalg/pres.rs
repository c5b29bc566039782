use super::{TorMethod, TorResult};
use crate::exactalg::{free_homology, FgAbGroup, Matrix};
use crate::pmod::{extend_resolution, resolve, PResolution};
use crate::tamemod::TruncIFunctor;
use crate::Error;

/// Apply `Z ⊗_M -` to a resolution reaching degree `p_max + 1`.
pub fn tor_pres_from(r: &PResolution, p_max: usize) -> Vec<(FgAbGroup, bool)> {
    let d: Vec<Matrix> = r.maps.iter().map(|m| m.augmented()).collect();
    (0..=p_max)
        .map(|p| {
            let value = free_homology(r.terms[p].len(), p.checked_sub(1).map(|q| &d[q]), d.get(p));
            let complete = r.complete.iter().take(p + 2).all(|&c| c);
            (value, complete)
        })
        .collect()
}

fn pres_values(f: &TruncIFunctor, p_max: usize, search: usize) -> Result<Vec<(FgAbGroup, bool)>, Error> {
    let r = extend_resolution(resolve(f, search)?, p_max + 1)?;
    Ok(tor_pres_from(&r, p_max))
}

/// Resolve `f` by sums of representables found up to `search` and take
/// homology after augmentation.
pub fn tor_pres(f: &TruncIFunctor, p_max: usize, search: usize) -> Result<Vec<TorResult>, Error> {
    let search = search.min(f.trunc());
    let values = pres_values(f, p_max, search)?;
    let lower = if f.trunc() >= 1 {
        pres_values(&f.restrict(f.trunc() - 1)?, p_max, search.min(f.trunc() - 1)).ok()
    } else {
        None
    };
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(p, (value, complete))| TorResult {
            degree: p,
            stabilized: lower.as_ref().is_some_and(|l| l[p].0.isomorphic(&value)),
            value,
            method: TorMethod::PResolution,
            trunc: f.trunc(),
            search: Some(search),
            complete,
        })
        .collect())
}
