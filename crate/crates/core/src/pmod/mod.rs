//! Representable functors `P_n = Z[I(n, -)]`, maps between finite sums of
//! them, and resolutions by such sums.

mod hom;
mod resolve;

pub use hom::{act_pro_element, drop_last, hom_from_p, kappa, kappa_inverse, prefix_class, tower_projection, Kappa, PHom};
pub use resolve::{extend_resolution, resolve, PResolution};

use crate::exactalg::{FgAbGroup, GroupHom, Matrix};
use crate::injcat::{count_inj, enumerate_inj, InjWord, Perm};
use crate::tamemod::{kernel_functor, NatTrans, TruncIFunctor};
use crate::Error;
use num_bigint::BigInt;
use std::fmt;

/// `P_n` truncated at `trunc`. Level `m` has basis `I(n, m)` in
/// lexicographic order; permutations act by postcomposition and
/// stabilization widens the codomain.
pub fn p_functor(n: usize, trunc: usize) -> TruncIFunctor {
    let levels = (0..=trunc).map(|m| FgAbGroup::free(count_inj(n, m))).collect();
    let mut transp = Vec::new();
    let mut stab = Vec::new();
    for m in 0..=trunc {
        let words = enumerate_inj(n, m);
        let mut ts = Vec::new();
        for i in 1..m {
            let s = Perm::transposition(m, i);
            let cols: Vec<(usize, BigInt)> = words
                .iter()
                .map(|w| (InjWord::compose(s.word(), w).expect("composable").lex_index(), BigInt::from(1)))
                .collect();
            ts.push(Matrix::from_sparse_columns(words.len(), cols.into_iter().map(|e| vec![e]).collect()));
        }
        transp.push(ts);
        if m < trunc {
            let cols = words.iter().map(|w| vec![(w.widen(m + 1).lex_index(), BigInt::from(1))]).collect();
            stab.push(Matrix::from_sparse_columns(count_inj(n, m + 1), cols));
        }
    }
    TruncIFunctor::new(trunc, 0, levels, transp, stab).expect("shapes").mark_valid()
}

/// `P_n -> P_0 = Z`, every word to 1.
pub fn augmentation(n: usize, trunc: usize) -> NatTrans {
    let f = PMap::new(PSum(vec![n]), PSum(vec![0]), vec![vec![vec![(BigInt::from(1), InjWord::new(vec![], n as u32).expect("empty"))]]])
        .expect("valid entry");
    f.to_nat(trunc).expect("natural")
}

/// `ker(P_n -> Z)`.
pub fn augmentation_kernel(n: usize, trunc: usize) -> TruncIFunctor {
    kernel_functor(&augmentation(n, trunc)).expect("kernel of a natural map").0
}

/// `P_{n_1} ⊕ … ⊕ P_{n_r}`, summands in order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PSum(pub Vec<usize>);

impl PSum {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rank at level `m` and the offset of each summand.
    pub fn offsets(&self, m: usize) -> (usize, Vec<usize>) {
        let mut off = Vec::with_capacity(self.0.len());
        let mut total = 0;
        for &n in &self.0 {
            off.push(total);
            total += count_inj(n, m);
        }
        (total, off)
    }

    pub fn functor(&self, trunc: usize) -> TruncIFunctor {
        let parts: Vec<TruncIFunctor> = self.0.iter().map(|&n| p_functor(n, trunc)).collect();
        let levels = (0..=trunc).map(|m| FgAbGroup::free(self.offsets(m).0)).collect();
        let transp = (0..=trunc)
            .map(|m| {
                (1..m)
                    .map(|i| {
                        let blocks: Vec<&Matrix> = parts.iter().map(|p| p.transposition(m, i)).collect();
                        Matrix::block_diag(&blocks)
                    })
                    .collect()
            })
            .collect();
        let stab = (0..trunc)
            .map(|m| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| p.stab(m)).collect();
                Matrix::block_diag(&blocks)
            })
            .collect();
        TruncIFunctor::new(trunc, 0, levels, transp, stab).expect("shapes").mark_valid()
    }
}

impl fmt::Display for PSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|n| format!("P{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of `Z[I(n, m)]`.
pub type Combination = Vec<(BigInt, InjWord)>;

/// A map of P-sums. Entry `(i, j)` lies in `Z[I(n_i, m_j)]` and is the
/// image of the generator of source summand `j` in target summand `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PMap {
    pub source: PSum,
    pub target: PSum,
    pub entries: Vec<Vec<Combination>>,
}

impl PMap {
    pub fn new(source: PSum, target: PSum, entries: Vec<Vec<Combination>>) -> Result<Self, Error> {
        if entries.len() != target.len() || entries.iter().any(|r| r.len() != source.len()) {
            return Err(Error::Dimension(format!("entries must be {} x {}", target.len(), source.len())));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                for (_, w) in c {
                    if w.source() != target.0[i] || w.codomain() != source.0[j] {
                        return Err(Error::InvalidWord(format!(
                            "entry ({i},{j}) needs words in I({}, {}), got {w}",
                            target.0[i], source.0[j]
                        )));
                    }
                }
            }
        }
        Ok(PMap { source, target, entries })
    }

    pub fn identity(s: &PSum) -> Self {
        let entries = (0..s.len())
            .map(|i| {
                (0..s.len())
                    .map(|j| if i == j { vec![(BigInt::from(1), InjWord::identity(s.0[i]))] } else { vec![] })
                    .collect()
            })
            .collect();
        PMap { source: s.clone(), target: s.clone(), entries }
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &PMap) -> Result<PMap, Error> {
        if first.target != self.source {
            return Err(Error::Dimension("PMap composition: summands do not match".into()));
        }
        let mut entries = vec![vec![Vec::new(); first.source.len()]; self.target.len()];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc: std::collections::BTreeMap<InjWord, BigInt> = Default::default();
                for k in 0..self.source.len() {
                    for (a, u) in &self.entries[i][k] {
                        for (b, w) in &first.entries[k][j] {
                            *acc.entry(InjWord::compose(w, u)?).or_default() += a * b;
                        }
                    }
                }
                *out = acc.into_iter().filter(|(_, c)| c != &BigInt::from(0)).map(|(w, c)| (c, w)).collect();
            }
        }
        Ok(PMap { source: first.source.clone(), target: self.target.clone(), entries })
    }

    /// Matrix of the map at level `m`: source word `v` of summand `j` goes
    /// to `Σ c · (v ∘ w)`.
    pub fn level_matrix(&self, m: usize) -> Matrix {
        let (rows, toff) = self.target.offsets(m);
        let mut trip = Vec::new();
        let mut col = 0;
        for (j, &mj) in self.source.0.iter().enumerate() {
            for v in enumerate_inj(mj, m) {
                for (i, row) in self.entries.iter().enumerate() {
                    for (c, w) in &row[j] {
                        let img = InjWord::compose(&v, w).expect("composable");
                        trip.push((toff[i] + img.lex_index(), col, c.clone()));
                    }
                }
                col += 1;
            }
        }
        Matrix::from_triplets(rows, col, trip)
    }

    pub fn evaluate(&self, m: usize) -> GroupHom {
        let mat = self.level_matrix(m);
        GroupHom::new_unchecked(FgAbGroup::free(mat.ncols()), FgAbGroup::free(mat.nrows()), mat).expect("shape")
    }

    pub fn to_nat(&self, trunc: usize) -> Result<NatTrans, Error> {
        NatTrans::new(
            self.source.functor(trunc),
            self.target.functor(trunc),
            (0..=trunc).map(|m| self.level_matrix(m)).collect(),
        )
    }

    /// Image under `Z ⊗_M -`: each word becomes its coefficient.
    pub fn augmented(&self) -> Matrix {
        let rows: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|c| c.iter().map(|(a, _)| a.clone()).sum()).collect())
            .collect();
        Matrix::from_rows(&rows, self.source.len())
    }
}

pub fn evaluate_pmap(f: &PMap, m: usize) -> GroupHom {
    f.evaluate(m)
}

/// Reads a combination written as `2*(1 3)@3 - (2 1)@3`, or `0`.
pub fn parse_combination(text: &str) -> Result<Combination, Error> {
    let mut out = Vec::new();
    let t = text.trim();
    if t == "0" || t.is_empty() {
        return Ok(out);
    }
    let mut sign = 1i64;
    let mut rest = t;
    loop {
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r;
            continue;
        }
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
            continue;
        }
        break;
    }
    let mut term_end = rest.len();
    let mut depth = 0;
    for (i, ch) in rest.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => {
                term_end = i;
                break;
            }
            _ => {}
        }
    }
    let (term, tail) = rest.split_at(term_end);
    let (coeff, word) = match term.split_once('*') {
        Some((c, w)) => (c.trim().parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))?, w),
        None => (BigInt::from(1), term),
    };
    out.push((coeff * sign, word.trim().parse::<InjWord>()?));
    if !tail.trim().is_empty() {
        out.extend(parse_combination(tail)?);
    }
    Ok(out)
}
