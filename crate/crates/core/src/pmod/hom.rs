use super::{p_functor, Combination, PMap, PSum};
use crate::exactalg::{is_unimodular, Matrix};
use crate::injcat::{count_inj, enumerate_inj, InjWord};
use crate::tamemod::ops::coset_rep;
use crate::tamemod::{induce, ColimElement, NatTrans, TruncIFunctor};
use crate::Error;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// The map `P_n -> W` determined by an element of filtration at most `n`:
/// a word `w` goes to `w · x`.
#[derive(Clone, Debug)]
pub struct PHom<'a> {
    pub n: usize,
    pub x: ColimElement<'a>,
}

pub fn hom_from_p<'a>(n: usize, x: &ColimElement<'a>) -> Result<PHom<'a>, Error> {
    let v = x.filtration_le(n);
    if !v.holds {
        let (j, lvl) = v.witness.expect("failure carries a witness");
        return Err(Error::Filtration(format!("element is moved by s_{j} at level {lvl}; filtration exceeds {n}")));
    }
    Ok(PHom { n, x: x.clone() })
}

impl<'a> PHom<'a> {
    /// Image of the basis word `w ∈ I(n, m)`. When the representative lives
    /// above level `n` the word is extended by fresh values, which is
    /// harmless because the element is fixed by everything fixing `1..n`.
    pub fn image(&self, w: &InjWord) -> Result<ColimElement<'a>, Error> {
        if w.source() != self.n {
            return Err(Error::Dimension(format!("word {w} does not start at {}", self.n)));
        }
        if self.x.level <= self.n {
            let pushed = self.x.push_to(self.n)?;
            ColimElement::new(self.x.parent, self.n, pushed)?.m_act(w)
        } else {
            let extra = (self.x.level - self.n) as u32;
            let m = w.codomain() as u32;
            let mut values = w.values().to_vec();
            values.extend(m + 1..=m + extra);
            self.x.m_act(&InjWord::new(values, m + extra)?)
        }
    }

    /// Evaluation at `(1, …, n)`.
    pub fn evaluate(&self) -> Result<ColimElement<'a>, Error> {
        self.image(&InjWord::identity(self.n))
    }

    /// Levelwise natural transformation; available when the element is
    /// represented at level `n` or below.
    pub fn to_nat(&self) -> Result<NatTrans, Error> {
        let w = self.x.parent;
        if self.x.level > self.n {
            return Err(Error::Filtration(format!(
                "element is represented at level {} > {}; no levelwise map",
                self.x.level, self.n
            )));
        }
        let top = w.trunc();
        let base = self.x.push_to(self.n)?;
        let comps = (0..=top)
            .map(|m| {
                let cols = enumerate_inj(self.n, m)
                    .iter()
                    .map(|u| w.act(u, &base))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_dense_columns(w.level(m).ngens(), &cols))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        NatTrans::new(p_functor(self.n, top), w.clone(), comps)
    }
}

/// `P_{1+n} ≅ induce(P_n)` with both directions and a certificate.
#[derive(Clone, Debug)]
pub struct Kappa {
    pub forward: NatTrans,
    pub inverse: NatTrans,
    /// every level is unimodular and both composites are the identity
    pub certified: bool,
}

/// Generator `(1, …, n+1)` goes to `1 ⊗ (1, …, n)`.
pub fn kappa(n: usize, trunc: usize) -> Result<Kappa, Error> {
    if n + 1 > trunc {
        return Err(Error::TruncationExceeded { needed: n + 1, trunc });
    }
    let p = p_functor(n + 1, trunc);
    let ind = induce(&p_functor(n, trunc))?;
    let gen = ind.level(n + 1).unit(0);
    let forward = (0..=trunc)
        .map(|k| {
            let cols = enumerate_inj(n + 1, k)
                .iter()
                .map(|u| ind.act(u, &gen))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_dense_columns(ind.level(k).ngens(), &cols))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let inverse: Vec<Matrix> = (0..=trunc).map(|k| kappa_inverse(n, k)).collect();
    let certified = (0..=trunc).all(|k| {
        is_unimodular(&forward[k])
            && forward[k].mul(&inverse[k]).is_identity()
            && inverse[k].mul(&forward[k]).is_identity()
    });
    Ok(Kappa {
        forward: NatTrans::new(p.clone(), ind.clone(), forward)?,
        inverse: NatTrans::new(ind, p, inverse)?,
        certified,
    })
}

/// `γ_a ⊗ (x_1, …, x_n) ↦ (γ_a(1), γ_a(x_1+1), …, γ_a(x_n+1))` at level `k`.
pub fn kappa_inverse(n: usize, k: usize) -> Matrix {
    let rows = count_inj(n + 1, k);
    if k == 0 {
        return Matrix::zeros(rows, 0);
    }
    let m = k - 1;
    let words = enumerate_inj(n, m);
    let mut cols = Vec::new();
    for a in 1..=k as u32 {
        let g = coset_rep(a, m);
        for v in &words {
            let mut vals = vec![g.at(1)];
            vals.extend(v.values().iter().map(|&x| g.at(x as usize + 1)));
            let w = InjWord::new(vals, k as u32).expect("injective");
            cols.push(vec![(w.lex_index(), BigInt::from(1))]);
        }
    }
    Matrix::from_sparse_columns(rows, cols)
}

/// `f + I_n ↦ (f(1), …, f(n))`.
pub fn prefix_class(f: &InjWord, n: usize) -> Result<InjWord, Error> {
    if n > f.source() {
        return Err(Error::Dimension(format!("{f} has fewer than {n} values")));
    }
    InjWord::new(f.values()[..n].to_vec(), f.codomain() as u32)
}

pub fn drop_last(w: &InjWord) -> InjWord {
    let v = w.values();
    InjWord::new(v[..v.len().saturating_sub(1)].to_vec(), w.codomain() as u32).expect("sub-word")
}

/// `P_{1+n} -> P_n`, dropping the last coordinate.
pub fn tower_projection(n: usize) -> PMap {
    PMap::new(
        PSum(vec![n + 1]),
        PSum(vec![n]),
        vec![vec![vec![(BigInt::from(1), InjWord::inclusion(n, n + 1))]]],
    )
    .expect("valid entry")
}

/// Combination as a function on words, all widened to one codomain.
fn normalize(c: &Combination, codomain: usize) -> BTreeMap<InjWord, BigInt> {
    let mut out: BTreeMap<InjWord, BigInt> = BTreeMap::new();
    for (a, w) in c {
        *out.entry(w.widen(codomain)).or_default() += a;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn max_codomain(c: &Combination) -> usize {
    c.iter().map(|(_, w)| w.codomain()).max().unwrap_or(0)
}

/// Acts by a compatible tower `a_k ∈ P_k` on `e`, using the first
/// component `a_k` for which `e` has filtration at most `k`.
pub fn act_pro_element<'a>(seq: &[Combination], e: &ColimElement<'a>) -> Result<ColimElement<'a>, Error> {
    for (k, c) in seq.iter().enumerate() {
        if let Some((_, w)) = c.iter().find(|(_, w)| w.source() != k) {
            return Err(Error::InvalidWord(format!("component {k} contains {w}")));
        }
    }
    for k in 0..seq.len().saturating_sub(1) {
        let projected: Combination = seq[k + 1].iter().map(|(a, w)| (a.clone(), drop_last(w))).collect();
        let m = max_codomain(&projected).max(max_codomain(&seq[k]));
        if normalize(&projected, m) != normalize(&seq[k], m) {
            return Err(Error::IllDefined(format!("components {k} and {} are not compatible", k + 1)));
        }
    }
    let parent: &'a TruncIFunctor = e.parent;
    let k = (0..seq.len())
        .find(|&k| e.filtration_le(k).holds)
        .ok_or_else(|| Error::Filtration("tower too short for the element's filtration".into()))?;
    let h = hom_from_p(k, e)?;
    let mut acc: Option<ColimElement<'a>> = None;
    for (a, w) in &seq[k] {
        let term = h.image(w)?.scale(a);
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term)?,
        });
    }
    match acc {
        Some(x) => Ok(x),
        None => ColimElement::new(parent, e.level, vec![BigInt::zero(); parent.level(e.level).ngens()]),
    }
}
