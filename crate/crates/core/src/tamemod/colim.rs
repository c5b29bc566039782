//! Elements of the colimit `F(ω)` and bounded verdicts about the monoid
//! action on them.

use super::functor::TruncIFunctor;
use super::ops::NatTrans;
use crate::exactalg::{FgAbGroup, GroupHom, Matrix};
use crate::injcat::{InjWord, Perm};
use crate::Error;
use num_bigint::BigInt;

/// The class `[x@level]` in the colimit.
#[derive(Clone, Debug)]
pub struct ColimElement<'a> {
    pub parent: &'a TruncIFunctor,
    pub level: usize,
    pub value: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqVerdict {
    /// The representatives agree from this level on.
    EqualAtLevel(usize),
    /// Still different at the truncation level.
    DistinctUpTo(usize),
}

/// Bounded answer: `holds` is reliable up to the truncation; a failure comes
/// with the offending transposition and the level where it was observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationVerdict {
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionWitness {
    /// level and generator index of the offending element
    pub level: usize,
    pub generator: usize,
    /// transposition `s_j`, checked at `checked_at`
    pub transposition: usize,
    pub checked_at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistableVerdict {
    pub semistable: bool,
    pub witness: Option<ActionWitness>,
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityVerdict {
    pub surjective: bool,
    /// (level, generator) of an element outside the image
    pub witness: Option<(usize, usize)>,
    pub bound: usize,
}

impl<'a> ColimElement<'a> {
    pub fn new(parent: &'a TruncIFunctor, level: usize, value: Vec<BigInt>) -> Result<Self, Error> {
        parent.check_level(level)?;
        if value.len() != parent.level(level).ngens() {
            return Err(Error::Dimension(format!("level {level} has {} generators", parent.level(level).ngens())));
        }
        Ok(ColimElement { parent, level, value })
    }

    pub fn generator(parent: &'a TruncIFunctor, level: usize, g: usize) -> Result<Self, Error> {
        parent.check_level(level)?;
        Self::new(parent, level, parent.level(level).unit(g))
    }

    pub fn push_to(&self, m: usize) -> Result<Vec<BigInt>, Error> {
        self.parent.push(&self.value, self.level, m)
    }

    pub fn is_zero_up_to(&self) -> bool {
        let n = self.parent.trunc();
        self.parent.level(n).is_zero_element(&self.push_to(n).expect("within truncation"))
    }

    /// Action of any monoid element whose first `level` values are `prefix`.
    pub fn m_act(&self, prefix: &InjWord) -> Result<ColimElement<'a>, Error> {
        if prefix.source() != self.level {
            return Err(Error::Dimension(format!(
                "prefix has length {} but the element lives at level {}",
                prefix.source(),
                self.level
            )));
        }
        let value = self.parent.act(prefix, &self.value)?;
        Ok(ColimElement { parent: self.parent, level: prefix.codomain(), value })
    }

    /// Action of the shift `d(i) = i + 1`.
    pub fn d(&self) -> Result<ColimElement<'a>, Error> {
        self.m_act(&InjWord::shift(self.level))
    }

    pub fn add(&self, other: &ColimElement<'a>) -> Result<ColimElement<'a>, Error> {
        let m = self.level.max(other.level);
        let a = self.push_to(m)?;
        let b = other.push_to(m)?;
        Ok(ColimElement { parent: self.parent, level: m, value: a.iter().zip(&b).map(|(x, y)| x + y).collect() })
    }

    pub fn scale(&self, c: &BigInt) -> ColimElement<'a> {
        ColimElement { parent: self.parent, level: self.level, value: self.value.iter().map(|x| x * c).collect() }
    }

    pub fn eq_up_to(&self, other: &ColimElement<'_>) -> EqVerdict {
        let n = self.parent.trunc();
        for m in self.level.max(other.level)..=n {
            let a = self.push_to(m).expect("within truncation");
            let b = other.push_to(m).expect("within truncation");
            if self.parent.level(m).elements_equal(&a, &b) {
                return EqVerdict::EqualAtLevel(m);
            }
        }
        EqVerdict::DistinctUpTo(n)
    }

    pub fn equals(&self, other: &ColimElement<'_>) -> bool {
        matches!(self.eq_up_to(other), EqVerdict::EqualAtLevel(_))
    }

    /// Is the element fixed by every `s_j` with `j > k`? Checked on the
    /// representative pushed to the truncation level, where all such
    /// transpositions that fit are visible.
    pub fn filtration_le(&self, k: usize) -> FiltrationVerdict {
        let n = self.parent.trunc();
        let x = self.push_to(n).expect("within truncation");
        let g = self.parent.level(n);
        for j in k + 1..n {
            let y = self.parent.transposition(n, j).apply(&x);
            if !g.elements_equal(&x, &y) {
                return FiltrationVerdict { holds: false, witness: Some((j, n)) };
            }
        }
        FiltrationVerdict { holds: true, witness: None }
    }

    /// Smallest `k` with filtration `<= k` up to the truncation.
    pub fn filtration(&self) -> usize {
        (0..=self.level).find(|&k| self.filtration_le(k).holds).unwrap_or(self.level)
    }
}

impl TruncIFunctor {
    /// Trivial action check: every generator below the top level, pushed to
    /// the top, must be fixed by the transpositions that can move it.
    pub fn is_semistable_up_to(&self) -> Result<SemistableVerdict, Error> {
        self.ensure_valid()?;
        let n = self.trunc();
        let top = self.level(n);
        for lvl in 0..n {
            let up = self.stab_power(lvl, n)?;
            for g in 0..self.level(lvl).ngens() {
                let x = up.dense_column(g);
                for j in 1..=lvl.min(n - 1) {
                    let y = self.transposition(n, j).apply(&x);
                    if !top.elements_equal(&x, &y) {
                        return Ok(SemistableVerdict {
                            semistable: false,
                            witness: Some(ActionWitness { level: lvl, generator: g, transposition: j, checked_at: n }),
                            bound: n,
                        });
                    }
                }
            }
        }
        Ok(SemistableVerdict { semistable: true, witness: None, bound: n })
    }

    /// Is every element from a level below the top in the image of `d`?
    pub fn check_d_surjective_up_to(&self) -> Result<SurjectivityVerdict, Error> {
        self.ensure_valid()?;
        let n = self.trunc();
        if n == 0 {
            return Ok(SurjectivityVerdict { surjective: true, witness: None, bound: 0 });
        }
        let image = self.act_matrix(&InjWord::shift(n - 1))?;
        let q = self.level(n).quotient(&image);
        for lvl in 0..n {
            let up = self.stab_power(lvl, n)?;
            for g in 0..self.level(lvl).ngens() {
                if !q.is_zero_element(&up.dense_column(g)) {
                    return Ok(SurjectivityVerdict { surjective: false, witness: Some((lvl, g)), bound: n });
                }
            }
        }
        Ok(SurjectivityVerdict { surjective: true, witness: None, bound: n })
    }

    /// Elements of `F(N-1)` whose image in `F(N)` is fixed by every `s_j`,
    /// `j > k`: the filtration-`k` part of the colimit as far as the
    /// truncation can see it. Elements of the top level itself are not
    /// used, since no transposition can move their last coordinate.
    pub fn filtration_subgroup(&self, k: usize) -> (FgAbGroup, GroupHom) {
        let n = self.trunc();
        assert!(n >= 1, "needs two levels");
        let up = self.stab(n - 1);
        let id = Matrix::identity(self.level(n).ngens());
        let diffs: Vec<Matrix> = (k + 1..n).map(|j| self.transposition(n, j).sub(&id).mul(up)).collect();
        let copies: Vec<&FgAbGroup> = vec![self.level(n); diffs.len()];
        let target = FgAbGroup::direct_sum(&copies);
        let stacked = diffs.iter().fold(Matrix::zeros(0, up.ncols()), |acc, d| acc.vstack(d));
        GroupHom::new_unchecked(self.level(n - 1).clone(), target, stacked).expect("shape").kernel()
    }

    /// Image of `F(k)` in `F(N)`.
    pub fn colimit_image(&self, k: usize) -> FgAbGroup {
        let n = self.trunc();
        let m = self.stab_power(k, n).expect("within truncation");
        GroupHom::new_unchecked(self.level(k).clone(), self.level(n).clone(), m).expect("shape").image()
    }

    /// Filtration-`k` elements (pushed to the top level) that do not come
    /// from `F(k)`: generators of the subgroup, as vectors of `F(N)`.
    pub fn filtration_excess(&self, k: usize) -> Vec<Vec<BigInt>> {
        let n = self.trunc();
        let (_, incl) = self.filtration_subgroup(k);
        let pushed = self.stab(n - 1).mul(&incl.matrix);
        let q = self.level(n).quotient(&self.stab_power(k, n).expect("within truncation"));
        (0..pushed.ncols()).map(|j| pushed.dense_column(j)).filter(|x| !q.is_zero_element(x)).collect()
    }

    /// Does `F(k)` reach everything of filtration `k`, as seen at the top?
    pub fn image_matches_filtration(&self, k: usize) -> bool {
        self.filtration_excess(k).is_empty()
    }

    /// `Σ_n`-coinvariants of `F(n)`.
    pub fn level_coinvariants(&self, n: usize) -> FgAbGroup {
        let g = self.level(n);
        let id = Matrix::identity(g.ngens());
        let mut rel = Matrix::zeros(g.ngens(), 0);
        for j in 1..n {
            rel = rel.hstack(&self.transposition(n, j).sub(&id));
        }
        g.quotient(&rel)
    }

    /// Map on coinvariants induced by stabilization `F(n) -> F(n+1)`.
    pub fn coinvariant_stab(&self, n: usize) -> GroupHom {
        GroupHom::new_unchecked(self.level_coinvariants(n), self.level_coinvariants(n + 1), self.stab(n).clone())
            .expect("shape")
    }

    pub fn generators_at(&self, level: usize) -> Vec<ColimElement<'_>> {
        (0..self.level(level).ngens())
            .map(|g| ColimElement::generator(self, level, g).expect("in range"))
            .collect()
    }

    /// Full permutation action on `F(m)`.
    pub fn act_perm(&self, g: &Perm, x: &[BigInt]) -> Vec<BigInt> {
        self.perm_matrix(g).apply(x)
    }
}

impl NatTrans {
    /// Bounded check that the induced map of colimits is an isomorphism:
    /// surjective onto elements from below the top level, and every kernel
    /// element dies by the top level of the source.
    pub fn is_colimit_iso_up_to(&self) -> Result<bool, Error> {
        let n = self.target.trunc();
        let q = self.target.level(n).quotient(&self.components[n]);
        for lvl in 0..n {
            let up = self.target.stab_power(lvl, n)?;
            if (0..up.ncols()).any(|g| !q.is_zero_element(&up.dense_column(g))) {
                return Ok(false);
            }
        }
        for lvl in 0..n {
            let (_, incl) = self.hom(lvl)?.kernel();
            let up = self.source.stab_power(lvl, n)?.mul(&incl.matrix);
            if (0..up.ncols()).any(|g| !self.source.level(n).is_zero_element(&up.dense_column(g))) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
