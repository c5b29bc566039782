use super::functor::TruncIFunctor;
use super::sigma::SigmaModule;
use crate::exactalg::{FgAbGroup, GroupHom, Matrix, Solver};
use crate::injcat::{enumerate_increasing, InjWord, Perm};
use crate::Error;
use num_bigint::BigInt;
use std::collections::HashMap;

/// The constant functor with identity structure maps.
pub fn constant(group: &FgAbGroup, trunc: usize) -> TruncIFunctor {
    let g = group.ngens();
    TruncIFunctor::new(
        trunc,
        0,
        vec![group.clone(); trunc + 1],
        (0..=trunc).map(|n| vec![Matrix::identity(g); n.saturating_sub(1)]).collect(),
        vec![Matrix::identity(g); trunc],
    )
    .expect("shapes")
    .mark_valid()
}

pub fn zero(trunc: usize) -> TruncIFunctor {
    constant(&FgAbGroup::zero(), trunc)
}

/// `W ↦ W(1)`: level `n` is `F(1+n)` with `Σ_n` acting through `1 × −`.
pub fn shift(f: &TruncIFunctor) -> Result<TruncIFunctor, Error> {
    let n = f.trunc();
    if n == 0 {
        return Err(Error::TruncationExceeded { needed: 1, trunc: 0 });
    }
    let levels = (0..n).map(|k| f.level(k + 1).clone()).collect();
    let transp = (0..n).map(|k| (1..k).map(|i| f.transposition(k + 1, i + 1).clone()).collect()).collect();
    let stab = (0..n - 1).map(|k| f.stab(k + 1).clone()).collect();
    let r = TruncIFunctor::new(n - 1, f.grade(), levels, transp, stab)?;
    Ok(if f.validate().is_ok() { r.mark_valid() } else { r })
}

/// Coset representative of `γ (1 × Σ_n)` in `Σ_{1+n}` with `γ(1) = a`.
pub(crate) fn coset_rep(a: u32, n: usize) -> Perm {
    InjWord::new(vec![a], n as u32 + 1).expect("a in range").complete_to_perm()
}

/// Induction from `Σ_n` to `Σ_{1+n}` levelwise: `Z[Σ_{1+n}] ⊗_{Σ_n} F(n)`,
/// with `F(n)` generator `g` in coset `a` at index `(a-1) * gens + g`.
pub fn induce(f: &TruncIFunctor) -> Result<TruncIFunctor, Error> {
    f.ensure_valid()?;
    let top = f.trunc();
    let mut levels = vec![FgAbGroup::zero()];
    let mut transp: Vec<Vec<Matrix>> = vec![vec![]];
    let mut stab = Vec::new();
    for n in 0..top {
        let g = f.level(n);
        let copies: Vec<&FgAbGroup> = vec![g; n + 1];
        levels.push(FgAbGroup::direct_sum(&copies));
        let reps: Vec<Perm> = (1..=n as u32 + 1).map(|a| coset_rep(a, n)).collect();
        let inv: Vec<Perm> = reps.iter().map(Perm::inverse).collect();
        let k = g.ngens();
        let mut ts = Vec::new();
        for i in 1..=n {
            let sigma = Perm::transposition(n + 1, i);
            let mut entries = Vec::new();
            for a in 0..=n {
                let moved = sigma.compose(&reps[a]);
                let b = moved.at(1) as usize - 1;
                let inner = inv[b].compose(&moved);
                debug_assert_eq!(inner.at(1), 1);
                let tau = Perm::from_word(
                    InjWord::new((2..=n + 1).map(|x| inner.at(x) - 1).collect(), n as u32).expect("perm"),
                )
                .expect("perm");
                let block = f.perm_matrix(&tau);
                for (col, c) in block.columns().iter().enumerate() {
                    for (row, v) in c {
                        entries.push((b * k + row, a * k + col, v.clone()));
                    }
                }
            }
            ts.push(Matrix::from_triplets((n + 1) * k, (n + 1) * k, entries));
        }
        transp.push(ts);
    }
    if top >= 1 {
        // level 0 -> 1 is the zero map out of the zero group
        stab.push(Matrix::zeros(levels[1].ngens(), 0));
    }
    for n in 0..top.saturating_sub(1) {
        let blocks: Vec<&Matrix> = vec![f.stab(n); n + 1];
        let diag = Matrix::block_diag(&blocks);
        // the new coset (a = n+2) receives nothing
        let extra = Matrix::zeros(f.level(n + 1).ngens(), diag.ncols());
        stab.push(diag.vstack(&extra));
    }
    Ok(TruncIFunctor::new(top, f.grade(), levels, transp, stab)?.mark_valid())
}

/// `P_n ⊗_{Σ_n} B` truncated at `trunc`; with `twist` the identification
/// carries the sign of the permutation. Generator `(u, b)` for increasing
/// `u` sits at index `pos(u) * gens(B) + b`.
pub fn tensor_sigma(b: &SigmaModule, twist: bool, trunc: usize) -> TruncIFunctor {
    let n = b.degree();
    let g = b.group().ngens();
    let mut levels = Vec::new();
    let mut transp = Vec::new();
    let mut stab = Vec::new();
    let subsets: Vec<Vec<InjWord>> = (0..=trunc).map(|m| enumerate_increasing(n, m)).collect();
    let index: Vec<HashMap<Vec<u32>, usize>> = subsets
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, u)| (u.values().to_vec(), i)).collect())
        .collect();
    for m in 0..=trunc {
        let copies: Vec<&FgAbGroup> = vec![b.group(); subsets[m].len()];
        levels.push(FgAbGroup::direct_sum(&copies));
        let dim = subsets[m].len() * g;
        let mut ts = Vec::new();
        for i in 1..m {
            let sigma = Perm::transposition(m, i);
            let mut entries = Vec::new();
            for (ui, u) in subsets[m].iter().enumerate() {
                let moved: Vec<u32> = u.values().iter().map(|&x| sigma.at(x as usize)).collect();
                let mut sorted = moved.clone();
                sorted.sort_unstable();
                // moved = sorted ∘ γ
                let gamma: Vec<u32> =
                    moved.iter().map(|x| sorted.binary_search(x).expect("present") as u32 + 1).collect();
                let gamma = Perm::from_word(InjWord::new(gamma, n as u32).expect("perm")).expect("perm");
                let sign = if twist { gamma.sign() } else { 1 };
                let vi = index[m][&sorted];
                let block = b.perm_matrix(&gamma);
                for (col, c) in block.columns().iter().enumerate() {
                    for (row, v) in c {
                        entries.push((vi * g + row, ui * g + col, v * sign));
                    }
                }
            }
            ts.push(Matrix::from_triplets(dim, dim, entries));
        }
        transp.push(ts);
        if m < trunc {
            let entries = subsets[m].iter().enumerate().flat_map(|(ui, u)| {
                let vi = index[m + 1][u.values()];
                (0..g).map(move |k| (vi * g + k, ui * g + k, BigInt::from(1)))
            });
            stab.push(Matrix::from_triplets(subsets[m + 1].len() * g, dim, entries));
        }
    }
    TruncIFunctor::new(trunc, 0, levels, transp, stab).expect("shapes").mark_valid()
}

fn same_trunc(f: &TruncIFunctor, g: &TruncIFunctor) -> Result<(), Error> {
    if f.trunc() != g.trunc() {
        return Err(Error::Dimension(format!("truncations {} and {} differ", f.trunc(), g.trunc())));
    }
    Ok(())
}

pub fn direct_sum(f: &TruncIFunctor, g: &TruncIFunctor) -> Result<TruncIFunctor, Error> {
    same_trunc(f, g)?;
    let n = f.trunc();
    let levels = (0..=n).map(|k| FgAbGroup::direct_sum(&[f.level(k), g.level(k)])).collect();
    let transp = (0..=n)
        .map(|k| (1..k).map(|i| Matrix::block_diag(&[f.transposition(k, i), g.transposition(k, i)])).collect())
        .collect();
    let stab = (0..n).map(|k| Matrix::block_diag(&[f.stab(k), g.stab(k)])).collect();
    let r = TruncIFunctor::new(n, f.grade(), levels, transp, stab)?;
    Ok(if f.validate().is_ok() && g.validate().is_ok() { r.mark_valid() } else { r })
}

/// Zero out every level above `i`.
pub fn truncate_above(f: &TruncIFunctor, i: usize) -> Result<TruncIFunctor, Error> {
    f.check_level(i)?;
    let n = f.trunc();
    let keep = |k: usize| k <= i;
    let levels = (0..=n).map(|k| if keep(k) { f.level(k).clone() } else { FgAbGroup::zero() }).collect();
    let transp = (0..=n)
        .map(|k| {
            (1..k)
                .map(|t| if keep(k) { f.transposition(k, t).clone() } else { Matrix::zeros(0, 0) })
                .collect()
        })
        .collect();
    let stab = (0..n)
        .map(|k| {
            if keep(k + 1) {
                f.stab(k).clone()
            } else {
                Matrix::zeros(0, if keep(k) { f.level(k).ngens() } else { 0 })
            }
        })
        .collect();
    let r = TruncIFunctor::new(n, f.grade(), levels, transp, stab)?;
    Ok(if f.validate().is_ok() { r.mark_valid() } else { r })
}

/// Levelwise `F(n) ⊗ A`.
pub fn tensor_group(f: &TruncIFunctor, a: &FgAbGroup) -> TruncIFunctor {
    let n = f.trunc();
    let id = Matrix::identity(a.ngens());
    let levels = (0..=n).map(|k| f.level(k).tensor(a)).collect();
    let transp = (0..=n).map(|k| (1..k).map(|i| f.transposition(k, i).kron(&id)).collect()).collect();
    let stab = (0..n).map(|k| f.stab(k).kron(&id)).collect();
    let r = TruncIFunctor::new(n, f.grade(), levels, transp, stab).expect("shapes");
    if f.validate().is_ok() {
        r.mark_valid()
    } else {
        r
    }
}

/// A natural transformation between functors of the same truncation.
#[derive(Clone, Debug)]
pub struct NatTrans {
    pub source: TruncIFunctor,
    pub target: TruncIFunctor,
    pub components: Vec<Matrix>,
}

impl NatTrans {
    /// Checks well-definedness and naturality for transpositions and
    /// stabilization.
    pub fn new(source: TruncIFunctor, target: TruncIFunctor, components: Vec<Matrix>) -> Result<Self, Error> {
        same_trunc(&source, &target)?;
        let n = source.trunc();
        if components.len() != n + 1 {
            return Err(Error::Dimension("one component per level".into()));
        }
        let t = NatTrans { source, target, components };
        for k in 0..=n {
            let h = t.hom(k)?;
            GroupHom::new(h.source, h.target, h.matrix)?;
            for i in 1..k {
                let l = t.components[k].mul(t.source.transposition(k, i));
                let r = t.target.transposition(k, i).mul(&t.components[k]);
                if !t.agree(k, &l, &r) {
                    return Err(Error::IllDefined(format!("not natural for s_{i} at level {k}")));
                }
            }
            if k < n {
                let l = t.components[k + 1].mul(t.source.stab(k));
                let r = t.target.stab(k).mul(&t.components[k]);
                if !t.agree(k + 1, &l, &r) {
                    return Err(Error::IllDefined(format!("not natural for stabilization at level {k}")));
                }
            }
        }
        Ok(t)
    }

    fn agree(&self, k: usize, a: &Matrix, b: &Matrix) -> bool {
        let d = a.sub(b);
        (0..d.ncols()).all(|j| self.target.level(k).is_zero_element(&d.dense_column(j)))
    }

    pub fn hom(&self, k: usize) -> Result<GroupHom, Error> {
        GroupHom::new_unchecked(
            self.source.level(k).clone(),
            self.target.level(k).clone(),
            self.components[k].clone(),
        )
    }
}

/// Lift each column of `m` (elements of `ambient`) through `incl`.
fn lift(incl: &Matrix, ambient: &FgAbGroup, m: &Matrix) -> Matrix {
    let solver = Solver::new(&incl.hstack(&ambient.relations().transpose()));
    let k = incl.ncols();
    let cols: Vec<Vec<BigInt>> = (0..m.ncols())
        .map(|j| solver.solve(&m.dense_column(j)).expect("element lies in the subgroup")[..k].to_vec())
        .collect();
    Matrix::from_dense_columns(k, &cols)
}

/// Levelwise kernel, with its inclusion into the source.
pub fn kernel_functor(t: &NatTrans) -> Result<(TruncIFunctor, NatTrans), Error> {
    let n = t.source.trunc();
    let mut levels = Vec::new();
    let mut incls = Vec::new();
    for k in 0..=n {
        let (kg, incl) = t.hom(k)?.kernel();
        levels.push(kg);
        incls.push(incl.matrix);
    }
    let mut transp = Vec::new();
    for k in 0..=n {
        let amb = t.source.level(k);
        transp.push(
            (1..k).map(|i| lift(&incls[k], amb, &t.source.transposition(k, i).mul(&incls[k]))).collect(),
        );
    }
    let stab = (0..n)
        .map(|k| lift(&incls[k + 1], t.source.level(k + 1), &t.source.stab(k).mul(&incls[k])))
        .collect();
    let kf = TruncIFunctor::new(n, t.source.grade(), levels, transp, stab)?;
    kf.ensure_valid()?;
    let inc = NatTrans { source: kf.clone(), target: t.source.clone(), components: incls };
    Ok((kf, inc))
}

/// Levelwise cokernel `target / image`.
pub fn cokernel_functor(t: &NatTrans) -> Result<TruncIFunctor, Error> {
    let n = t.target.trunc();
    let levels = (0..=n).map(|k| t.target.level(k).quotient(&t.components[k])).collect();
    let transp = (0..=n).map(|k| (1..k).map(|i| t.target.transposition(k, i).clone()).collect()).collect();
    let stab = (0..n).map(|k| t.target.stab(k).clone()).collect();
    let q = TruncIFunctor::new(n, t.target.grade(), levels, transp, stab)?;
    q.ensure_valid()?;
    Ok(q)
}

/// The map `V -> V(1)` given by the shift `i ↦ i+1` at each level.
pub fn d_map(f: &TruncIFunctor) -> Result<NatTrans, Error> {
    let sh = shift(f)?;
    let src = f.restrict(sh.trunc())?;
    let comps = (0..=sh.trunc())
        .map(|n| f.act_matrix(&InjWord::shift(n)))
        .collect::<Result<Vec<_>, _>>()?;
    NatTrans::new(src, sh, comps)
}

/// `V(k)` together with the transition maps `V(j-1) -> V(j)`, `j = 1..=k`,
/// each restricted to the truncation of its target.
pub fn d_stage(f: &TruncIFunctor, k: usize) -> Result<(TruncIFunctor, Vec<NatTrans>), Error> {
    f.check_level(k)?;
    f.ensure_valid()?;
    let mut cur = f.clone();
    let mut maps = Vec::new();
    for _ in 0..k {
        let t = d_map(&cur)?;
        cur = t.target.clone();
        maps.push(t);
    }
    Ok((cur, maps))
}
