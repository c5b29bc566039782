//! Kernels and linear solves for sparse integer matrices.
//!
//! Row operations with unit pivots are applied first. They keep entries
//! small on the ±1-heavy matrices produced by functor maps. The leftover
//! block without unit entries goes through dense Smith normal form.

use super::coeff::{with_fallback, Coeff};
use super::matrix::Matrix;
use super::snf::{smith_normal_form, Snf};
use num_bigint::BigInt;
use num_traits::Zero;
use num_integer::Integer;
use rustc_hash::{FxHashMap, FxHashSet};
use std::sync::OnceLock;

#[derive(Debug)]
pub(crate) struct UnitElim {
    ncols: usize,
    /// reduced rows; pivot rows carry their pivot and non-pivot columns only
    rows: Vec<Vec<(usize, BigInt)>>,
    /// (row, column, unit)
    pivots: Vec<(usize, usize, BigInt)>,
    /// `row_t -= f * row_p`, in order
    ops: Vec<(usize, usize, BigInt)>,
    free_cols: Vec<usize>,
    residual_rows: Vec<usize>,
    residual: Matrix,
    /// built on the first solve
    solve_data: OnceLock<SolveData>,
    original: Matrix,
}

#[derive(Debug)]
struct SolveData {
    snf: Snf,
    /// rows of the residual transform above the rank, sparse
    u_top: Vec<Vec<(usize, BigInt)>>,
}

type Reduced<T> = (Vec<FxHashMap<u32, T>>, Vec<(usize, usize, T)>, Vec<(usize, usize, T)>);

fn reduce<T: Coeff>(a: &Matrix) -> Option<Reduced<T>> {
    let (nr, nc) = (a.nrows(), a.ncols());
    let mut rows: Vec<FxHashMap<u32, T>> = vec![FxHashMap::default(); nr];
    let mut cols: Vec<FxHashSet<u32>> = vec![FxHashSet::default(); nc];
    for (j, col) in a.columns().iter().enumerate() {
        for (i, v) in col {
            rows[*i].insert(j as u32, T::from_big(v)?);
            cols[j].insert(*i as u32);
        }
    }
    let mut active: FxHashSet<usize> = (0..nr).filter(|&i| !rows[i].is_empty()).collect();
    let mut pivots = Vec::new();
    let mut ops = Vec::new();
    loop {
        // Markowitz choice among unit entries of active rows
        let mut best: Option<(usize, usize, usize)> = None;
        let mut order: Vec<usize> = active.iter().copied().collect();
        order.sort_unstable();
        for &r in &order {
            let len = rows[r].len();
            for (&c, v) in &rows[r] {
                if !v.is_unit() {
                    continue;
                }
                let cost = (len - 1) * (cols[c as usize].len() - 1);
                let cand = (cost, r, c as usize);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        active.remove(&pr);
        let u = rows[pr][&(pc as u32)].clone();
        let prow: Vec<(u32, T)> = rows[pr].iter().map(|(c, v)| (*c, v.clone())).collect();
        let mut targets: Vec<u32> = cols[pc].iter().copied().filter(|&r| r as usize != pr).collect();
        targets.sort_unstable();
        for t in targets {
            let t = t as usize;
            // u is ±1, so u^{-1} = u
            let f = rows[t][&(pc as u32)].mul(&u)?;
            for (c, v) in &prow {
                let delta = f.mul(v)?;
                let entry = rows[t].entry(*c).or_insert_with(T::zero);
                *entry = entry.sub(&delta)?;
                if entry.is_zero() {
                    rows[t].remove(c);
                    cols[*c as usize].remove(&(t as u32));
                } else {
                    cols[*c as usize].insert(t as u32);
                }
            }
            ops.push((t, pr, f));
            if rows[t].is_empty() {
                active.remove(&t);
            }
        }
        pivots.push((pr, pc, u));
    }
    Some((rows, pivots, ops))
}

/// Kernel basis by column operations: for each row in turn, Euclid across
/// the live columns until one nonzero entry is left, which retires that
/// column. The transform is unimodular, so the surviving columns form a
/// saturated basis; reducing by the smallest entry keeps it small.
fn column_kernel(m: &Matrix) -> Vec<Vec<(usize, BigInt)>> {
    let nr = m.nrows();
    let mut cols: Vec<Vec<BigInt>> = (0..m.ncols()).map(|j| m.dense_column(j)).collect();
    let mut trans: Vec<FxHashMap<usize, BigInt>> =
        (0..m.ncols()).map(|j| std::iter::once((j, BigInt::from(1))).collect()).collect();
    let mut live: Vec<usize> = (0..m.ncols()).collect();
    for i in 0..nr {
        loop {
            let nz: Vec<usize> = live.iter().copied().filter(|&j| !Zero::is_zero(&cols[j][i])).collect();
            if nz.len() <= 1 {
                if let Some(&p) = nz.first() {
                    live.retain(|&j| j != p);
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| (cols[j][i].magnitude().clone(), j)).unwrap();
            let pc = cols[p].clone();
            let pt: Vec<(usize, BigInt)> = trans[p].iter().map(|(k, v)| (*k, v.clone())).collect();
            for &j in &nz {
                if j == p {
                    continue;
                }
                let q = cols[j][i].div_floor(&pc[i]);
                if Zero::is_zero(&q) {
                    continue;
                }
                for (r, v) in pc.iter().enumerate() {
                    if !Zero::is_zero(v) {
                        cols[j][r] -= &q * v;
                    }
                }
                for (k, v) in &pt {
                    let e = trans[j].entry(*k).or_insert_with(<BigInt as Zero>::zero);
                    *e -= &q * v;
                    if Zero::is_zero(e) {
                        trans[j].remove(k);
                    }
                }
            }
        }
    }
    live.into_iter()
        .map(|j| {
            let mut v: Vec<(usize, BigInt)> = trans[j].drain().collect();
            v.sort_unstable_by_key(|e| e.0);
            v
        })
        .collect()
}

impl UnitElim {
    pub(crate) fn new(a: &Matrix) -> Self {
        let (rows, pivots, ops): Reduced<BigInt> = with_fallback(
            || {
                reduce::<i64>(a).map(|(rows, pivots, ops)| {
                    (
                        rows.into_iter().map(|r| r.into_iter().map(|(c, v)| (c, v.to_big())).collect()).collect(),
                        pivots.into_iter().map(|(r, c, u)| (r, c, u.to_big())).collect(),
                        ops.into_iter().map(|(t, p, f)| (t, p, f.to_big())).collect(),
                    )
                })
            },
            || reduce::<BigInt>(a),
        );
        let ncols = a.ncols();
        let mut is_pivot_col = vec![false; ncols];
        let mut is_pivot_row = vec![false; a.nrows()];
        for (r, c, _) in &pivots {
            is_pivot_col[*c] = true;
            is_pivot_row[*r] = true;
        }
        let free_cols: Vec<usize> = (0..ncols).filter(|&c| !is_pivot_col[c]).collect();
        let mut pos = vec![usize::MAX; ncols];
        for (k, &c) in free_cols.iter().enumerate() {
            pos[c] = k;
        }
        let rows: Vec<Vec<(usize, BigInt)>> = rows
            .into_iter()
            .map(|r| {
                let mut v: Vec<(usize, BigInt)> = r.into_iter().map(|(c, x)| (c as usize, x)).collect();
                v.sort_unstable_by_key(|e| e.0);
                v
            })
            .collect();
        let residual_rows: Vec<usize> =
            (0..a.nrows()).filter(|&r| !is_pivot_row[r] && !rows[r].is_empty()).collect();
        let pos = &pos;
        let rows_ref = &rows;
        let residual = Matrix::from_triplets(
            residual_rows.len(),
            free_cols.len(),
            residual_rows
                .iter()
                .enumerate()
                .flat_map(|(i, &r)| rows_ref[r].iter().map(move |(c, v)| (i, pos[*c], v.clone())))
                .collect::<Vec<_>>(),
        );
        UnitElim {
            ncols,
            rows,
            pivots,
            ops,
            free_cols,
            residual_rows,
            residual,
            solve_data: OnceLock::new(),
            original: a.clone(),
        }
    }

    /// Fill in the pivot coordinates from the free ones, given the reduced
    /// right-hand side.
    fn back_substitute(&self, y: &[BigInt], rhs: Option<&[BigInt]>) -> Vec<BigInt> {
        let mut x = vec![<BigInt as Zero>::zero(); self.ncols];
        for (k, &c) in self.free_cols.iter().enumerate() {
            x[c] = y[k].clone();
        }
        for (r, c, u) in &self.pivots {
            let mut s = rhs.map_or_else(<BigInt as Zero>::zero, |b| b[*r].clone());
            for (k, v) in &self.rows[*r] {
                if k != c {
                    s -= v * &x[*k];
                }
            }
            x[*c] = u * s;
        }
        x
    }

    pub(crate) fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let nfree = self.free_cols.len();
        column_kernel(&self.residual)
            .into_iter()
            .map(|v| {
                let mut y = vec![<BigInt as Zero>::zero(); nfree];
                for (k, x) in v {
                    y[k] = x;
                }
                self.back_substitute(&y, None)
            })
            .collect()
    }

    fn solve_data(&self) -> &SolveData {
        self.solve_data.get_or_init(|| {
            let snf = smith_normal_form(&self.residual);
            let u_top = snf.u.transpose().columns()[..snf.rank].to_vec();
            SolveData { snf, u_top }
        })
    }

    /// `None` on overflow, `Some(None)` when unsolvable.
    fn solve_in<T: Coeff>(&self, b: &[BigInt]) -> Option<Option<Vec<T>>> {
        let mut b: Vec<T> = b.iter().map(T::from_big).collect::<Option<_>>()?;
        for (t, p, f) in &self.ops {
            if b[*p].is_zero() {
                continue;
            }
            let d = T::from_big(f)?.mul(&b[*p])?;
            b[*t] = b[*t].sub(&d)?;
        }
        let mut is_used = vec![false; b.len()];
        for (r, _, _) in &self.pivots {
            is_used[*r] = true;
        }
        for &r in &self.residual_rows {
            is_used[r] = true;
        }
        if b.iter().enumerate().any(|(r, v)| !is_used[r] && !v.is_zero()) {
            return Some(None);
        }
        let SolveData { snf: s, u_top } = self.solve_data();
        let nfree = self.free_cols.len();
        let mut z = vec![T::zero(); nfree];
        for (i, row) in u_top.iter().enumerate() {
            let mut y = T::zero();
            for (k, v) in row {
                let x = &b[self.residual_rows[*k]];
                if !x.is_zero() {
                    y = y.add(&T::from_big(v)?.mul(x)?)?;
                }
            }
            let d = T::from_big(&s.diag[i])?;
            if !d.divides(&y) {
                return Some(None);
            }
            z[i] = y.div_exact(&d);
        }
        let mut x = vec![T::zero(); self.ncols];
        for (j, col) in s.v.columns().iter().enumerate().take(s.rank) {
            if z[j].is_zero() {
                continue;
            }
            for (k, v) in col {
                let c = self.free_cols[*k];
                x[c] = x[c].add(&T::from_big(v)?.mul(&z[j])?)?;
            }
        }
        for (r, c, u) in &self.pivots {
            let mut acc = b[*r].clone();
            for (k, v) in &self.rows[*r] {
                if k != c && !x[*k].is_zero() {
                    acc = acc.sub(&T::from_big(v)?.mul(&x[*k])?)?;
                }
            }
            x[*c] = T::from_big(u)?.mul(&acc)?;
        }
        Some(Some(x))
    }

    pub(crate) fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let x = with_fallback(
            || self.solve_in::<i64>(b).map(|o| o.map(|x| x.iter().map(Coeff::to_big).collect())),
            || self.solve_in::<BigInt>(b),
        )?;
        // rows of the residual beyond its rank were not checked above
        if self.residual_rows.len() > self.solve_data().snf.rank && self.original.apply(&x) != b {
            return None;
        }
        Some(x)
    }
}
