//! Elementary divisors of large sparse matrices.
//!
//! Unit pivots are eliminated first (each contributes an invariant factor of
//! 1), choosing short columns and short rows to limit fill-in. Whatever
//! remains has no unit entries and is finished densely.

use super::coeff::{with_fallback, Coeff};
use super::lattice::Lattice;
use super::matrix::Matrix;
use super::snf::{invariant_factors_dense, nonzero_nontrivial};
use num_bigint::BigInt;
use rustc_hash::{FxHashMap, FxHashSet};
use std::collections::BTreeSet;

/// Rank and the invariant factors greater than one.
pub fn invariant_factors(m: &Matrix) -> (usize, Vec<BigInt>) {
    if m.nrows() * m.ncols() <= 4096 {
        let (r, f) = invariant_factors_dense(m);
        return (r, nonzero_nontrivial(&f));
    }
    // eliminate along the smaller dimension's columns
    let work = if m.ncols() < m.nrows() { m.transpose() } else { m.clone() };
    with_fallback(|| eliminate::<i64>(&work), || eliminate::<BigInt>(&work))
}

pub fn sparse_rank(m: &Matrix) -> usize {
    invariant_factors(m).0
}

struct Elim<T> {
    rows: Vec<FxHashMap<u32, T>>,
    cols: Vec<FxHashSet<u32>>,
    // key currently stored in `queue` for each column
    key: Vec<Option<(u32, u32)>>,
    queue: BTreeSet<(u32, u32)>,
}

impl<T: Coeff> Elim<T> {
    fn refresh(&mut self, c: u32) {
        let ci = c as usize;
        if let Some(k) = self.key[ci].take() {
            self.queue.remove(&k);
        }
        let n = self.cols[ci].len() as u32;
        if n == 0 {
            return;
        }
        let has_unit = self.cols[ci]
            .iter()
            .any(|r| self.rows[*r as usize].get(&c).is_some_and(|v| v.is_unit()));
        if has_unit {
            self.queue.insert((n, c));
            self.key[ci] = Some((n, c));
        }
    }
}

fn eliminate<T: Coeff>(m: &Matrix) -> Option<(usize, Vec<BigInt>)> {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut e = Elim::<T> {
        rows: vec![FxHashMap::default(); nr],
        cols: vec![FxHashSet::default(); nc],
        key: vec![None; nc],
        queue: BTreeSet::new(),
    };
    for (j, col) in m.columns().iter().enumerate() {
        for (i, v) in col {
            e.rows[*i].insert(j as u32, T::from_big(v)?);
            e.cols[j].insert(*i as u32);
        }
    }
    for c in 0..nc as u32 {
        e.refresh(c);
    }
    let mut rank = 0usize;
    let mut dirty: FxHashSet<u32> = FxHashSet::default();
    while let Some(&(_, c)) = e.queue.iter().next() {
        let ci = c as usize;
        // shortest row holding a unit in this column
        let r = *e.cols[ci]
            .iter()
            .filter(|r| e.rows[**r as usize][&c].is_unit())
            .min_by_key(|r| (e.rows[**r as usize].len(), **r))
            .expect("queued column has a unit");
        let pivot_row: Vec<(u32, T)> =
            e.rows[r as usize].iter().map(|(k, v)| (*k, v.clone())).collect();
        let pv = e.rows[r as usize][&c].clone();
        let others: Vec<u32> = e.cols[ci].iter().copied().filter(|x| *x != r).collect();
        for r2 in others {
            // row r2 -= (a[r2][c] / pv) * row r, and 1/pv = pv for units
            let f = e.rows[r2 as usize][&c].mul(&pv)?;
            for (k, v) in &pivot_row {
                let row = &mut e.rows[r2 as usize];
                let delta = f.mul(v)?;
                let nv = match row.get(k) {
                    Some(old) => old.sub(&delta)?,
                    None => delta.neg()?,
                };
                if nv.is_zero() {
                    row.remove(k);
                    e.cols[*k as usize].remove(&r2);
                } else {
                    row.insert(*k, nv);
                    e.cols[*k as usize].insert(r2);
                }
                dirty.insert(*k);
            }
        }
        for (k, _) in &pivot_row {
            e.cols[*k as usize].remove(&r);
            dirty.insert(*k);
        }
        e.rows[r as usize].clear();
        e.cols[ci].clear();
        rank += 1;
        for k in dirty.drain() {
            e.refresh(k);
        }
    }
    // residual block without unit entries
    let live_rows: Vec<usize> = (0..nr).filter(|&i| !e.rows[i].is_empty()).collect();
    if live_rows.is_empty() {
        return Some((rank, Vec::new()));
    }
    let mut pos = vec![usize::MAX; nr];
    for (k, &i) in live_rows.iter().enumerate() {
        pos[i] = k;
    }
    let dim = live_rows.len();
    let mut lat = Lattice::new(dim);
    for j in 0..nc {
        if e.cols[j].is_empty() {
            continue;
        }
        let mut v = vec![BigInt::from(0); dim];
        for r in &e.cols[j] {
            v[pos[*r as usize]] = e.rows[*r as usize][&(j as u32)].to_big();
        }
        lat.insert(v);
    }
    let (r2, f) = invariant_factors_dense(&lat.basis_matrix());
    Some((rank + r2, nonzero_nontrivial(&f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_sparse(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Matrix {
        Matrix::from_triplets(
            rows,
            cols,
            entries.iter().map(|(i, j, v)| (i % rows, j % cols, BigInt::from(*v))),
        )
    }

    #[test]
    fn large_identity_like() {
        let n = 200;
        let m = Matrix::from_triplets(
            n,
            n,
            (0..n).flat_map(|i| [(i, i, BigInt::from(1)), ((i + 1) % n, i, BigInt::from(1))]),
        );
        // circulant I + shift of even size: det = 1 - (-1)^n... = 0, rank n-1
        let (r, f) = invariant_factors(&m);
        assert_eq!(r, n - 1);
        assert!(f.is_empty());
    }

    // Oracle: the dense Smith form on the same matrix.
    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_dense(rows in 1usize..90, cols in 1usize..90,
                             entries in proptest::collection::vec((0usize..90, 0usize..90, prop_oneof![Just(1i64), Just(-1), Just(2), Just(3), -6i64..7]), 0..200)) {
            let m = random_sparse(rows, cols, &entries);
            let (r, f) = invariant_factors_dense(&m);
            let expect = (r, nonzero_nontrivial(&f));
            prop_assert_eq!(eliminate::<i64>(&m).unwrap(), expect.clone());
            prop_assert_eq!(eliminate::<BigInt>(&m).unwrap(), expect.clone());
            prop_assert_eq!(invariant_factors(&m), expect);
        }
    }
}
