//! Homotopy of free and semifree spectra as graded tame modules, and the
//! `E^2 = Tor_p(Z, π_q)` page built from them.

mod page;

pub use page::{assemble_e2, E2Cell, E2Page, Engine};

use crate::exactalg::FgAbGroup;
use crate::homalg::StemsTable;
use crate::pmod::p_functor;
use crate::tamemod::{tensor_group, tensor_sigma, GradedTameModule, SigmaModule};
use crate::Error;
use std::collections::BTreeMap;
use std::ops::RangeInclusive;

/// Degree `k` is `P_n ⊗ π_{k+n}`; the monoid acts through `P_n` only.
pub fn free_homotopy(
    n: usize,
    stems: &StemsTable,
    ks: RangeInclusive<i64>,
    trunc: usize,
) -> Result<GradedTameModule, Error> {
    let p = p_functor(n, trunc);
    let mut g = GradedTameModule::new(trunc);
    for k in ks {
        let coeff = stems.get(k + n as i64)?;
        g.insert(k, tensor_group(&p, &coeff))?;
    }
    Ok(g)
}

/// Degree `k` is `P_n ⊗_{Σ_n} B_{k+n}`, optionally sign-twisted.
pub fn semifree_homotopy(
    n: usize,
    family: &BTreeMap<i64, SigmaModule>,
    twist: bool,
    ks: RangeInclusive<i64>,
    trunc: usize,
) -> Result<GradedTameModule, Error> {
    let mut g = GradedTameModule::new(trunc);
    for k in ks {
        let q = k + n as i64;
        let b = family.get(&q).ok_or_else(|| Error::MissingData(format!("no Σ_{n}-module in degree {q}")))?;
        if b.degree() != n {
            return Err(Error::InvalidFunctor(format!("degree {q} carries a Σ_{} action, expected Σ_{n}", b.degree())));
        }
        g.insert(k, tensor_sigma(b, twist, trunc))?;
    }
    Ok(g)
}

/// Coefficients of `Σ_n^+ ∧ S^n` style input: `π_{q}` of `S^n` is the stem
/// `π_{q-n}`, and permuting sphere coordinates acts by the sign.
pub fn sphere_family(n: usize, stems: &StemsTable, ks: RangeInclusive<i64>) -> Result<BTreeMap<i64, SigmaModule>, Error> {
    ks.map(|k| Ok((k + n as i64, SigmaModule::signed(n, stems.get(k)?)))).collect()
}

/// The same coefficients with the permutation action forgotten.
pub fn trivial_family(n: usize, stems: &StemsTable, ks: RangeInclusive<i64>) -> Result<BTreeMap<i64, SigmaModule>, Error> {
    ks.map(|k| Ok((k + n as i64, SigmaModule::trivial(n, stems.get(k)?)))).collect()
}

/// Homotopy of `H_n S^n`-type input: the sign action on the sphere and the
/// sign twist of the construction cancel.
pub fn sphere_homotopy(
    n: usize,
    stems: &StemsTable,
    ks: RangeInclusive<i64>,
    twist: bool,
    trunc: usize,
) -> Result<GradedTameModule, Error> {
    let family = if twist { sphere_family(n, stems, ks.clone())? } else { trivial_family(n, stems, ks.clone())? };
    semifree_homotopy(n, &family, twist, ks, trunc)
}

/// Levelwise isomorphism test between two graded modules (same degrees,
/// isomorphic groups at every level).
pub fn levelwise_isomorphic(a: &GradedTameModule, b: &GradedTameModule) -> bool {
    a.trunc() == b.trunc()
        && a.degrees().eq(b.degrees())
        && a.iter().all(|(q, f)| {
            let g = b.get(q).expect("same degrees");
            (0..=a.trunc()).all(|m| f.level(m).isomorphic(g.level(m)))
        })
}

pub(crate) fn group_json(g: &FgAbGroup) -> serde_json::Value {
    let (free, torsion) = g.decompose();
    serde_json::json!({
        "group": g.to_string(),
        "free_rank": free,
        "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    })
}
