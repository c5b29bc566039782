use super::{Combination, PMap, PSum};
use crate::exactalg::{Matrix, Solver};
use rustc_hash::FxHashSet;
use crate::injcat::{enumerate_inj, InjWord};
use crate::tamemod::{kernel_functor, NatTrans, TruncIFunctor};
use crate::Error;
use num_bigint::BigInt;
use num_traits::Zero;

/// `… -> P_2 -> P_1 -> P_0 -> W`, exact through the truncation level as far
/// as the generator search reached.
#[derive(Clone, Debug)]
pub struct PResolution {
    pub target: TruncIFunctor,
    /// generators were searched at levels `0..=search`
    pub search: usize,
    pub terms: Vec<PSum>,
    /// `maps[k]: terms[k+1] -> terms[k]`
    pub maps: Vec<PMap>,
    pub augmentation: NatTrans,
    /// `complete[k]`: the generators of `terms[k]` exhaust the kernel they
    /// cover at every level up to the truncation
    pub complete: Vec<bool>,
    /// kernel of the last map, still to be covered
    kernel: (TruncIFunctor, NatTrans),
}

fn sparse(v: Vec<BigInt>) -> Vec<(usize, BigInt)> {
    v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
}

/// Greedy generating set: walk the levels upward and keep every standard
/// basis vector not yet in the span of the images of earlier generators.
/// Levels above `search` are only checked.
fn generators(f: &TruncIFunctor, search: usize) -> (Vec<(usize, Vec<BigInt>)>, bool) {
    let top = f.trunc();
    // spanning columns per level: relations first, then images
    let mut spans: Vec<FxHashSet<Vec<(usize, BigInt)>>> = vec![FxHashSet::default(); top + 1];
    let mut rel_cols: Vec<Vec<Vec<(usize, BigInt)>>> =
        (0..=top).map(|m| f.level(m).relations().transpose().columns().to_vec()).collect();
    let mut gens = Vec::new();
    let mut complete = true;
    for m in 0..=top {
        let dim = f.level(m).ngens();
        let build = |spans: &FxHashSet<Vec<(usize, BigInt)>>, rels: &mut Vec<Vec<(usize, BigInt)>>| {
            let mut cols = rels.clone();
            let mut imgs: Vec<_> = spans.iter().cloned().collect();
            imgs.sort();
            cols.extend(imgs);
            Solver::new(&Matrix::from_sparse_columns(dim, cols))
        };
        let mut solver = build(&spans[m], &mut rel_cols[m]);
        for i in 0..dim {
            let e = f.level(m).unit(i);
            if solver.solve(&e).is_some() {
                continue;
            }
            if m > search {
                complete = false;
                break;
            }
            for (k, span) in spans.iter_mut().enumerate().skip(m) {
                for w in enumerate_inj(m, k) {
                    let img = sparse(f.act(&w, &e).expect("within truncation"));
                    if !img.is_empty() {
                        span.insert(img);
                    }
                }
            }
            gens.push((m, e));
            solver = build(&spans[m], &mut rel_cols[m]);
        }
    }
    (gens, complete)
}

/// Components of the map `⊕ P_{m_j} -> W` sending generator `j` to `x_j`.
fn cover(f: &TruncIFunctor, gens: &[(usize, Vec<BigInt>)]) -> Vec<Matrix> {
    (0..=f.trunc())
        .map(|k| {
            let mut cols = Vec::new();
            for (m, x) in gens {
                for w in enumerate_inj(*m, k) {
                    cols.push(f.act(&w, x).expect("within truncation"));
                }
            }
            Matrix::from_dense_columns(f.level(k).ngens(), &cols)
        })
        .collect()
}

/// Write an element of a P-sum at level `m` as one combination per summand.
fn split(sum: &PSum, m: usize, v: &[BigInt]) -> Vec<Combination> {
    let (_, off) = sum.offsets(m);
    sum.0
        .iter()
        .zip(off)
        .map(|(&n, o)| {
            enumerate_inj(n, m)
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !v[o + i].is_zero())
                .map(|(i, w): (usize, InjWord)| (v[o + i].clone(), w))
                .collect()
        })
        .collect()
}

/// Start a resolution of `w`: generators of `w` itself give `P_0 -> W`.
pub fn resolve(w: &TruncIFunctor, search: usize) -> Result<PResolution, Error> {
    w.ensure_valid()?;
    let (gens, complete) = generators(w, search);
    let p0 = PSum(gens.iter().map(|g| g.0).collect());
    let aug = NatTrans::new(p0.functor(w.trunc()), w.clone(), cover(w, &gens))?;
    let kernel = kernel_functor(&aug)?;
    Ok(PResolution {
        target: w.clone(),
        search,
        terms: vec![p0],
        maps: vec![],
        augmentation: aug,
        complete: vec![complete],
        kernel,
    })
}

/// Extend until `terms[target_degree]` exists.
pub fn extend_resolution(mut r: PResolution, target_degree: usize) -> Result<PResolution, Error> {
    let trunc = r.target.trunc();
    while r.terms.len() <= target_degree {
        let (kf, incl) = &r.kernel;
        let (gens, complete) = generators(kf, r.search);
        let last = r.terms.last().expect("nonempty").clone();
        let next = PSum(gens.iter().map(|g| g.0).collect());
        let cols: Vec<Vec<Combination>> = gens
            .iter()
            .map(|(m, x)| split(&last, *m, &incl.components[*m].apply(x)))
            .collect();
        let entries = (0..last.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let map = PMap::new(next.clone(), last, entries)?;
        let kernel = kernel_functor(&map.to_nat(trunc)?)?;
        r.terms.push(next);
        r.maps.push(map);
        r.complete.push(complete && *r.complete.last().expect("nonempty"));
        r.kernel = kernel;
    }
    Ok(r)
}

impl PResolution {
    pub fn trunc(&self) -> usize {
        self.target.trunc()
    }

    /// Is the kernel of the last map zero at every level?
    pub fn terminated(&self) -> bool {
        let k = &self.kernel.0;
        (0..=k.trunc()).all(|m| k.level(m).is_trivial())
    }

    /// Levelwise exactness check through the truncation: consecutive
    /// composites vanish and ranks add up.
    pub fn verify_exact(&self) -> bool {
        let top = self.trunc();
        (0..=top).all(|m| {
            let mats: Vec<Matrix> = self.maps.iter().map(|f| f.level_matrix(m)).collect();
            let aug = &self.augmentation.components[m];
            if !aug.mul(mats.first().unwrap_or(&Matrix::zeros(aug.ncols(), 0))).is_zero()
                && self.target.level(m).is_free()
            {
                return false;
            }
            mats.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
        })
    }
}
