use super::{TorMethod, TorResult};
use crate::exactalg::{CanonicalComplex, Matrix};
use crate::injcat::{enumerate_chain_ids, InjCategory};
use crate::tamemod::TruncIFunctor;
use crate::Error;
use num_bigint::BigInt;
use rustc_hash::FxHashMap;

/// Refuse complexes with more generators than this in one degree.
pub const DEFAULT_COLUMN_LIMIT: usize = 2_000_000;

/// Number of nondegenerate `p`-chains in the injections on `0..=n`, and the
/// rank of the bar term `C_p` for `f`.
pub fn bar_chain_counts(f: &TruncIFunctor, p: usize) -> (usize, usize) {
    let cat = InjCategory::new(f.trunc());
    let chains = enumerate_chain_ids(&cat, p);
    let dims: Vec<usize> = (0..=f.trunc()).map(|n| f.level(n).canonical().orders.len()).collect();
    (chains.len(), chains.iter().map(|(s, _)| dims[*s]).sum())
}

struct Bar<'a> {
    f: &'a TruncIFunctor,
    cat: InjCategory,
    // composition table; usize::MAX for non-composable pairs
    comp: Vec<Vec<usize>>,
    // arrow id -> action in canonical coordinates
    arrow: Vec<Matrix>,
    dims: Vec<usize>,
}

impl<'a> Bar<'a> {
    fn new(f: &'a TruncIFunctor) -> Result<Self, Error> {
        f.ensure_valid()?;
        let cat = InjCategory::new(f.trunc());
        let k = cat.len();
        let mut comp = vec![vec![usize::MAX; k]; k];
        for (g, row) in comp.iter_mut().enumerate() {
            for (h, slot) in row.iter_mut().enumerate() {
                if cat.get(h).codomain() == cat.get(g).source() {
                    *slot = cat.compose_ids(g, h);
                }
            }
        }
        let canon: Vec<_> = (0..=f.trunc()).map(|n| f.level(n).canonical()).collect();
        let arrow = (0..k)
            .map(|a| {
                let w = cat.get(a);
                let m = f.act_matrix(w)?;
                Ok(canon[w.codomain()].to_canon.mul(&m).mul(&canon[w.source()].from_canon))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let dims = canon.iter().map(|c| c.orders.len()).collect();
        Ok(Bar { f, cat, comp, arrow, dims })
    }

    /// `d_p : C_p -> C_{p-1}` given the chains of both degrees.
    fn differential(&self, hi: &[(usize, Vec<usize>)], lo: &[(usize, Vec<usize>)]) -> Matrix {
        let mut offset = FxHashMap::default();
        let mut rows = 0;
        for (s, ids) in lo {
            offset.insert((*s, ids.as_slice()), rows);
            rows += self.dims[*s];
        }
        let mut cols: Vec<Vec<(usize, BigInt)>> = Vec::new();
        let mut scratch: Vec<usize> = Vec::new();
        for (s, ids) in hi {
            let p = ids.len();
            let n0 = *s;
            let first = ids[0];
            let n1 = self.cat.get(first).codomain();
            let face0 = offset[&(n1, &ids[1..])];
            let a = &self.arrow[first];
            let last = offset[&(n0, &ids[..p - 1])];
            let mut inner: Vec<(usize, i64)> = Vec::with_capacity(p.saturating_sub(1));
            for i in 1..p {
                let c = self.comp[ids[i]][ids[i - 1]];
                if self.cat.is_identity(c) {
                    continue;
                }
                scratch.clear();
                scratch.extend_from_slice(&ids[..i - 1]);
                scratch.push(c);
                scratch.extend_from_slice(&ids[i + 1..]);
                inner.push((offset[&(n0, scratch.as_slice())], if i % 2 == 0 { 1 } else { -1 }));
            }
            let sign_last: i64 = if p % 2 == 0 { 1 } else { -1 };
            for k in 0..self.dims[n0] {
                let mut col: Vec<(usize, BigInt)> = a.column(k).iter().map(|(r, v)| (face0 + r, v.clone())).collect();
                for &(off, sg) in &inner {
                    col.push((off + k, BigInt::from(sg)));
                }
                col.push((last + k, BigInt::from(sign_last)));
                cols.push(col);
            }
        }
        Matrix::from_triplets(
            rows,
            cols.len(),
            cols.into_iter().enumerate().flat_map(|(j, c)| c.into_iter().map(move |(i, v)| (i, j, v))),
        )
    }

    fn complex(&self, top: usize, limit: usize) -> Result<CanonicalComplex, Error> {
        let mut chains = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let c = enumerate_chain_ids(&self.cat, p);
            let rank: usize = c.iter().map(|(s, _)| self.dims[*s]).sum();
            if rank > limit {
                return Err(Error::ResourceGuard(format!(
                    "bar term C_{p} has {rank} generators ({} chains) at truncation {}; limit {limit}",
                    c.len(),
                    self.f.trunc()
                )));
            }
            chains.push(c);
        }
        let canon: Vec<_> = (0..=self.f.trunc()).map(|n| self.f.level(n).canonical()).collect();
        let orders = chains
            .iter()
            .map(|c| c.iter().flat_map(|(s, _)| canon[*s].orders.iter().cloned()).collect())
            .collect();
        let mut d = vec![Matrix::zeros(0, chains[0].iter().map(|(s, _)| self.dims[*s]).sum())];
        for p in 1..=top {
            d.push(self.differential(&chains[p], &chains[p - 1]));
        }
        Ok(CanonicalComplex { orders, d })
    }
}

fn bar_values(f: &TruncIFunctor, p_max: usize, limit: usize) -> Result<Vec<crate::exactalg::FgAbGroup>, Error> {
    let bar = Bar::new(f)?;
    let cx = bar.complex(p_max + 1, limit)?;
    (0..=p_max).map(|p| cx.homology(p)).collect()
}

/// Homology of the normalized simplicial replacement of `f` over the
/// injections on `0..=N`, in degrees `0..=p_max`.
pub fn tor_bar(f: &TruncIFunctor, p_max: usize, limit: usize) -> Result<Vec<TorResult>, Error> {
    let values = bar_values(f, p_max, limit)?;
    let lower = if f.trunc() >= 1 { bar_values(&f.restrict(f.trunc() - 1)?, p_max, limit).ok() } else { None };
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(p, value)| TorResult {
            degree: p,
            stabilized: lower.as_ref().is_some_and(|l| l[p].isomorphic(&value)),
            value,
            method: TorMethod::Bar,
            trunc: f.trunc(),
            search: None,
            complete: true,
        })
        .collect())
}

