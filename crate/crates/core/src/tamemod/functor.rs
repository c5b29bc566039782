use crate::exactalg::{FgAbGroup, GroupHom, Matrix};
use crate::injcat::{InjWord, Perm};
use crate::Error;
use num_bigint::BigInt;
use rustc_hash::FxHashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// A functor on injections between `0..=N`, given by its value groups, the
/// adjacent transpositions `s_i` at each level and the stabilization maps
/// `F(n) -> F(n+1)`.
pub struct TruncIFunctor {
    trunc: usize,
    grade: i64,
    levels: Vec<FgAbGroup>,
    // transp[n][i - 1] = s_i on F(n), 1 <= i < n
    transp: Vec<Vec<Matrix>>,
    stab: Vec<Matrix>,
    valid: OnceLock<Result<(), Violation>>,
    perm_cache: RwLock<FxHashMap<(usize, Perm), Arc<Matrix>>>,
}

impl Clone for TruncIFunctor {
    fn clone(&self) -> Self {
        TruncIFunctor {
            trunc: self.trunc,
            grade: self.grade,
            levels: self.levels.clone(),
            transp: self.transp.clone(),
            stab: self.stab.clone(),
            valid: self.valid.clone(),
            perm_cache: RwLock::new(FxHashMap::default()),
        }
    }
}

impl fmt::Debug for TruncIFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncIFunctor(N={}, levels=[", self.trunc)?;
        for (n, g) in self.levels.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    WellDefined,
    Involution,
    Braid,
    Commute,
    Equivariance,
    AddedCoordinate,
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::WellDefined => "well-defined",
            Relation::Involution => "involution",
            Relation::Braid => "braid",
            Relation::Commute => "commute",
            Relation::Equivariance => "equivariance",
            Relation::AddedCoordinate => "added-coordinate",
        }
    }
}

/// A failed relation: the level it was checked at, the transposition
/// indices involved and the first generator on which the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub relation: Relation,
    pub level: usize,
    pub indices: Vec<usize>,
    pub generator: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} relation fails at level {}", self.relation.name(), self.level)?;
        if !self.indices.is_empty() {
            let idx: Vec<String> = self.indices.iter().map(|i| format!("s_{i}")).collect();
            write!(f, " for {}", idx.join(", "))?;
        }
        if let Some(g) = self.generator {
            write!(f, " on generator {g}")?;
        }
        Ok(())
    }
}

impl TruncIFunctor {
    pub fn new(
        trunc: usize,
        grade: i64,
        levels: Vec<FgAbGroup>,
        transp: Vec<Vec<Matrix>>,
        stab: Vec<Matrix>,
    ) -> Result<Self, Error> {
        if levels.len() != trunc + 1 || transp.len() != trunc + 1 || stab.len() != trunc {
            return Err(Error::Dimension(format!(
                "truncation {trunc} needs {} levels and {} stabilization maps",
                trunc + 1,
                trunc
            )));
        }
        for (n, ts) in transp.iter().enumerate() {
            if ts.len() != n.saturating_sub(1) {
                return Err(Error::Dimension(format!("level {n} needs {} transpositions", n.saturating_sub(1))));
            }
            let g = levels[n].ngens();
            for (i, t) in ts.iter().enumerate() {
                if t.nrows() != g || t.ncols() != g {
                    return Err(Error::Dimension(format!("s_{} at level {n} is not {g}x{g}", i + 1)));
                }
            }
        }
        for (n, s) in stab.iter().enumerate() {
            if s.nrows() != levels[n + 1].ngens() || s.ncols() != levels[n].ngens() {
                return Err(Error::Dimension(format!("stabilization map at level {n} has wrong shape")));
            }
        }
        Ok(TruncIFunctor {
            trunc,
            grade,
            levels,
            transp,
            stab,
            valid: OnceLock::new(),
            perm_cache: RwLock::new(FxHashMap::default()),
        })
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn grade(&self) -> i64 {
        self.grade
    }

    pub fn with_grade(mut self, grade: i64) -> Self {
        self.grade = grade;
        self
    }

    pub fn level(&self, n: usize) -> &FgAbGroup {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[FgAbGroup] {
        &self.levels
    }

    /// `s_i` on `F(n)`.
    pub fn transposition(&self, n: usize, i: usize) -> &Matrix {
        &self.transp[n][i - 1]
    }

    /// `F(n) -> F(n+1)`.
    pub fn stab(&self, n: usize) -> &Matrix {
        &self.stab[n]
    }

    pub fn stab_hom(&self, n: usize) -> GroupHom {
        GroupHom::new_unchecked(self.levels[n].clone(), self.levels[n + 1].clone(), self.stab[n].clone())
            .expect("shape checked")
    }

    /// Composite of stabilization maps `F(n) -> F(m)`.
    pub fn stab_power(&self, n: usize, m: usize) -> Result<Matrix, Error> {
        self.check_level(m)?;
        let mut acc = Matrix::identity(self.levels[n].ngens());
        for k in n..m {
            acc = self.stab[k].mul(&acc);
        }
        Ok(acc)
    }

    pub fn check_level(&self, m: usize) -> Result<(), Error> {
        if m > self.trunc {
            Err(Error::TruncationExceeded { needed: m, trunc: self.trunc })
        } else {
            Ok(())
        }
    }

    /// Run all relation checks; cached.
    pub fn validate(&self) -> Result<(), Violation> {
        self.valid.get_or_init(|| self.check_relations()).clone()
    }

    pub fn ensure_valid(&self) -> Result<(), Error> {
        self.validate().map_err(|v| Error::InvalidFunctor(v.to_string()))
    }

    /// Record validity established by construction.
    pub(crate) fn mark_valid(self) -> Self {
        let _ = self.valid.set(Ok(()));
        self
    }

    fn differ(&self, n: usize, a: &Matrix, b: &Matrix) -> Option<usize> {
        let d = a.sub(b);
        (0..d.ncols()).find(|&j| !self.levels[n].is_zero_element(&d.dense_column(j)))
    }

    fn check_relations(&self) -> Result<(), Violation> {
        let fail = |relation, level, indices: Vec<usize>, generator| {
            Err(Violation { relation, level, indices, generator })
        };
        for n in 0..=self.trunc {
            let g = &self.levels[n];
            for (i, t) in self.transp[n].iter().enumerate() {
                if GroupHom::new(g.clone(), g.clone(), t.clone()).is_err() {
                    return fail(Relation::WellDefined, n, vec![i + 1], None);
                }
            }
            if n < self.trunc && GroupHom::new(g.clone(), self.levels[n + 1].clone(), self.stab[n].clone()).is_err() {
                return fail(Relation::WellDefined, n, vec![], None);
            }
        }
        for n in 0..=self.trunc {
            let id = Matrix::identity(self.levels[n].ngens());
            let s = &self.transp[n];
            for i in 0..s.len() {
                if let Some(x) = self.differ(n, &s[i].mul(&s[i]), &id) {
                    return fail(Relation::Involution, n, vec![i + 1], Some(x));
                }
            }
            for i in 0..s.len().saturating_sub(1) {
                let l = s[i].mul(&s[i + 1]).mul(&s[i]);
                let r = s[i + 1].mul(&s[i]).mul(&s[i + 1]);
                if let Some(x) = self.differ(n, &l, &r) {
                    return fail(Relation::Braid, n, vec![i + 1, i + 2], Some(x));
                }
            }
            for i in 0..s.len() {
                for j in i + 2..s.len() {
                    if let Some(x) = self.differ(n, &s[i].mul(&s[j]), &s[j].mul(&s[i])) {
                        return fail(Relation::Commute, n, vec![i + 1, j + 1], Some(x));
                    }
                }
            }
        }
        for n in 0..self.trunc {
            for i in 0..self.transp[n].len() {
                let l = self.stab[n].mul(&self.transp[n][i]);
                let r = self.transp[n + 1][i].mul(&self.stab[n]);
                if let Some(x) = self.differ(n + 1, &l, &r) {
                    return fail(Relation::Equivariance, n, vec![i + 1], Some(x));
                }
            }
        }
        for n in 0..self.trunc.saturating_sub(1) {
            let ii = self.stab[n + 1].mul(&self.stab[n]);
            let l = self.transp[n + 2][n].mul(&ii);
            if let Some(x) = self.differ(n + 2, &l, &ii) {
                return fail(Relation::AddedCoordinate, n, vec![n + 1], Some(x));
            }
        }
        Ok(())
    }

    /// Action of a permutation on `F(m)`, from its reduced word; memoized.
    pub fn perm_matrix(&self, g: &Perm) -> Arc<Matrix> {
        let m = g.degree();
        let key = (m, g.clone());
        if let Some(x) = self.perm_cache.read().expect("cache lock").get(&key) {
            return x.clone();
        }
        let mut acc = Matrix::identity(self.levels[m].ngens());
        for i in g.reduced_word() {
            acc = acc.mul(&self.transp[m][i - 1]);
        }
        let acc = Arc::new(acc);
        self.perm_cache.write().expect("cache lock").entry(key).or_insert_with(|| acc.clone());
        acc
    }

    /// Matrix of `α_* : F(n) -> F(m)`: the completed permutation after
    /// stabilizing.
    pub fn act_matrix(&self, alpha: &InjWord) -> Result<Matrix, Error> {
        self.check_level(alpha.codomain())?;
        self.ensure_valid()?;
        let up = self.stab_power(alpha.source(), alpha.codomain())?;
        if alpha.values().iter().enumerate().all(|(i, &v)| v == i as u32 + 1) {
            return Ok(up);
        }
        Ok(self.perm_matrix(&alpha.complete_to_perm()).mul(&up))
    }

    pub fn act(&self, alpha: &InjWord, x: &[BigInt]) -> Result<Vec<BigInt>, Error> {
        if x.len() != self.levels[alpha.source()].ngens() {
            return Err(Error::Dimension("element does not live at the source level".into()));
        }
        Ok(self.act_matrix(alpha)?.apply(x))
    }

    pub fn act_hom(&self, alpha: &InjWord) -> Result<GroupHom, Error> {
        GroupHom::new_unchecked(
            self.levels[alpha.source()].clone(),
            self.levels[alpha.codomain()].clone(),
            self.act_matrix(alpha)?,
        )
    }

    /// Push an element from level `n` to level `m >= n`.
    pub fn push(&self, x: &[BigInt], n: usize, m: usize) -> Result<Vec<BigInt>, Error> {
        Ok(self.stab_power(n, m)?.apply(x))
    }

    /// Same functor with the top levels dropped.
    pub fn restrict(&self, trunc: usize) -> Result<TruncIFunctor, Error> {
        self.check_level(trunc)?;
        let r = TruncIFunctor::new(
            trunc,
            self.grade,
            self.levels[..=trunc].to_vec(),
            self.transp[..=trunc].to_vec(),
            self.stab[..trunc].to_vec(),
        )?;
        Ok(match self.valid.get() {
            Some(Ok(())) => r.mark_valid(),
            _ => r,
        })
    }
}
