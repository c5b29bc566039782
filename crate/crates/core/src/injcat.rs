//! The category of finite sets `{1..n}` and injections.
//!
//! An injection `n -> m` is stored as its word `(x1 .. xn)` of images.

use crate::Error;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InjWord {
    values: Vec<u32>,
    codomain: u32,
}

impl fmt::Debug for InjWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for InjWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() && !self.values.is_empty() {
            return write!(f, "id@{}", self.codomain);
        }
        let vs: Vec<String> = self.values.iter().map(u32::to_string).collect();
        write!(f, "({})@{}", vs.join(" "), self.codomain)
    }
}

impl FromStr for InjWord {
    type Err = Error;

    /// Accepts `(x1 x2 ..)@m`, `(x1,x2,..)@m` and `id@n`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed injection `{s}`"));
        let (body, cod) = s.rsplit_once('@').ok_or_else(bad)?;
        let m: u32 = cod.trim().parse().map_err(|_| bad())?;
        let body = body.trim();
        if body == "id" {
            return Ok(InjWord::identity(m as usize));
        }
        let inner = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
        let values = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        InjWord::new(values, m)
    }
}

impl InjWord {
    pub fn new(values: Vec<u32>, codomain: u32) -> Result<Self, Error> {
        let mut seen = vec![false; codomain as usize + 1];
        for &v in &values {
            if v == 0 || v > codomain {
                return Err(Error::InvalidWord(format!("value {v} outside 1..={codomain}")));
            }
            if seen[v as usize] {
                return Err(Error::InvalidWord(format!("repeated value {v}")));
            }
            seen[v as usize] = true;
        }
        Ok(InjWord { values, codomain })
    }

    pub fn identity(n: usize) -> Self {
        InjWord { values: (1..=n as u32).collect(), codomain: n as u32 }
    }

    /// The standard inclusion `n -> m`, `i -> i`.
    pub fn inclusion(n: usize, m: usize) -> Self {
        assert!(n <= m);
        InjWord { values: (1..=n as u32).collect(), codomain: m as u32 }
    }

    /// The shift `n -> n+1`, `i -> i+1`.
    pub fn shift(n: usize) -> Self {
        InjWord { values: (2..=n as u32 + 1).collect(), codomain: n as u32 + 1 }
    }

    pub fn source(&self) -> usize {
        self.values.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain as usize
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Image of `i` (1-based).
    pub fn at(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.values.len() == self.codomain as usize
            && self.values.iter().enumerate().all(|(i, &v)| v == i as u32 + 1)
    }

    pub fn is_bijection(&self) -> bool {
        self.values.len() == self.codomain as usize
    }

    pub fn is_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// Same values, larger codomain.
    pub fn widen(&self, m: usize) -> Self {
        assert!(m >= self.codomain as usize);
        InjWord { values: self.values.clone(), codomain: m as u32 }
    }

    /// `g ∘ f`
    pub fn compose(g: &InjWord, f: &InjWord) -> Result<InjWord, Error> {
        if f.codomain() != g.source() {
            return Err(Error::InvalidWord(format!("cannot compose {g} after {f}")));
        }
        Ok(InjWord { values: f.values.iter().map(|&x| g.values[x as usize - 1]).collect(), codomain: g.codomain })
    }

    /// Extend to a permutation of the codomain by listing the unused values
    /// in increasing order after the word.
    pub fn complete_to_perm(&self) -> Perm {
        let m = self.codomain as usize;
        let mut used = vec![false; m + 1];
        for &v in &self.values {
            used[v as usize] = true;
        }
        let mut values = self.values.clone();
        values.extend((1..=m as u32).filter(|&v| !used[v as usize]));
        Perm(InjWord { values, codomain: m as u32 })
    }

    /// `(self × 1)`: append the fixed point `codomain + 1`.
    pub fn plus_one(&self) -> InjWord {
        let mut values = self.values.clone();
        values.push(self.codomain + 1);
        InjWord { values, codomain: self.codomain + 1 }
    }

    /// `(1 × self)`: prepend a fixed point and shift the rest.
    pub fn one_plus(&self) -> InjWord {
        let mut values = vec![1];
        values.extend(self.values.iter().map(|v| v + 1));
        InjWord { values, codomain: self.codomain + 1 }
    }

    /// Position of this word in the lexicographic list of `I(n, m)`.
    pub fn lex_index(&self) -> usize {
        let (n, m) = (self.values.len(), self.codomain as usize);
        let mut used = vec![false; m + 1];
        let mut idx = 0usize;
        for (k, &v) in self.values.iter().enumerate() {
            let smaller = (1..v).filter(|&u| !used[u as usize]).count();
            idx += smaller * falling(m - k - 1, n - k - 1);
            used[v as usize] = true;
        }
        idx
    }
}

/// `a (a-1) ... (a-b+1)`
pub fn falling(a: usize, b: usize) -> usize {
    (0..b).map(|i| a - i).product()
}

/// `|I(n, m)| = m! / (m-n)!`
pub fn count_inj(n: usize, m: usize) -> usize {
    if n > m {
        0
    } else {
        falling(m, n)
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All injections `n -> m` in lexicographic order of their words.
pub fn enumerate_inj(n: usize, m: usize) -> Vec<InjWord> {
    let mut out = Vec::with_capacity(count_inj(n, m));
    if n > m {
        return out;
    }
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; m + 1];
    fn rec(n: usize, m: usize, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<InjWord>) {
        if cur.len() == n {
            out.push(InjWord { values: cur.clone(), codomain: m as u32 });
            return;
        }
        for v in 1..=m {
            if !used[v] {
                used[v] = true;
                cur.push(v as u32);
                rec(n, m, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, m, &mut cur, &mut used, &mut out);
    out
}

/// Increasing injections `n -> m` (one per subset), lexicographic.
pub fn enumerate_increasing(n: usize, m: usize) -> Vec<InjWord> {
    enumerate_inj(n, m).into_iter().filter(InjWord::is_increasing).collect()
}

/// A permutation of `{1..m}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(InjWord);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Perm {
    pub fn from_word(w: InjWord) -> Result<Self, Error> {
        if !w.is_bijection() {
            return Err(Error::InvalidWord(format!("{w} is not a permutation")));
        }
        Ok(Perm(w))
    }

    pub fn identity(m: usize) -> Self {
        Perm(InjWord::identity(m))
    }

    /// Adjacent transposition `s_i` swapping `i` and `i+1` in `{1..m}`.
    pub fn transposition(m: usize, i: usize) -> Self {
        assert!(i >= 1 && i < m, "s_{i} not defined on {m} points");
        let mut w = InjWord::identity(m);
        w.values.swap(i - 1, i);
        Perm(w)
    }

    pub fn degree(&self) -> usize {
        self.0.codomain()
    }

    pub fn word(&self) -> &InjWord {
        &self.0
    }

    pub fn at(&self, i: usize) -> u32 {
        self.0.at(i)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(InjWord::compose(&self.0, &other.0).expect("same degree"))
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u32; self.degree()];
        for (i, &x) in self.0.values.iter().enumerate() {
            v[x as usize - 1] = i as u32 + 1;
        }
        Perm(InjWord { values: v, codomain: self.0.codomain })
    }

    pub fn sign(&self) -> i64 {
        let v = &self.0.values;
        let inv = (0..v.len())
            .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| v[i] > v[j])
            .count();
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Indices `i1, i2, ..` with `self = s_{i1} s_{i2} ...`, found by
    /// repeatedly splitting off a descent on the right.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut g = self.0.values.clone();
        let mut right = Vec::new();
        loop {
            match (0..g.len().saturating_sub(1)).find(|&i| g[i] > g[i + 1]) {
                Some(i) => {
                    g.swap(i, i + 1);
                    right.push(i + 1);
                }
                None => break,
            }
        }
        // g = self ∘ s_{a1} ∘ s_{a2} ... = id, so self = ... s_{a2} s_{a1}
        right.reverse();
        right
    }

    pub fn all(m: usize) -> Vec<Perm> {
        enumerate_inj(m, m).into_iter().map(Perm).collect()
    }

    /// `(self × 1)` in one more point.
    pub fn plus_one(&self) -> Perm {
        Perm(self.0.plus_one())
    }

    /// `(1 × self)` in one more point.
    pub fn one_plus(&self) -> Perm {
        Perm(self.0.one_plus())
    }
}

/// Every injection between objects `0..=n_max`, indexed for fast lookups.
pub struct InjCategory {
    pub n_max: usize,
    morphisms: Vec<InjWord>,
    // offsets[n][m] = first id of I(n, m)
    offsets: Vec<Vec<usize>>,
    identity_ids: Vec<usize>,
}

impl InjCategory {
    pub fn new(n_max: usize) -> Self {
        let mut morphisms = Vec::new();
        let mut offsets = vec![vec![0; n_max + 1]; n_max + 1];
        for n in 0..=n_max {
            for m in 0..=n_max {
                offsets[n][m] = morphisms.len();
                morphisms.extend(enumerate_inj(n, m));
            }
        }
        let identity_ids = (0..=n_max).map(|n| offsets[n][n] + InjWord::identity(n).lex_index()).collect();
        InjCategory { n_max, morphisms, offsets, identity_ids }
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn get(&self, id: usize) -> &InjWord {
        &self.morphisms[id]
    }

    pub fn id_of(&self, w: &InjWord) -> usize {
        self.offsets[w.source()][w.codomain()] + w.lex_index()
    }

    pub fn is_identity(&self, id: usize) -> bool {
        let w = &self.morphisms[id];
        self.identity_ids[w.source()] == id
    }

    pub fn compose_ids(&self, g: usize, f: usize) -> usize {
        self.id_of(&InjWord::compose(&self.morphisms[g], &self.morphisms[f]).expect("composable"))
    }

    /// Non-identity morphisms out of `n`.
    pub fn out_of(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (n..=self.n_max)
            .flat_map(move |m| self.offsets[n][m]..self.offsets[n][m] + count_inj(n, m))
            .filter(move |&id| !self.is_identity(id))
    }
}

/// A chain `n0 -> n1 -> ... -> np` of non-identity injections; a 0-chain is
/// just an object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub start: usize,
    pub arrows: Vec<InjWord>,
}

impl Chain {
    pub fn end(&self) -> usize {
        self.arrows.last().map_or(self.start, InjWord::codomain)
    }
}

/// Nondegenerate `p`-chains in the full subcategory on `0..=n_max`,
/// as sequences of morphism ids (`p = 0` gives one chain per object).
pub fn enumerate_chain_ids(cat: &InjCategory, p: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out: Vec<(usize, Vec<usize>)> = (0..=cat.n_max).map(|n| (n, vec![])).collect();
    for _ in 0..p {
        let mut next = Vec::new();
        for (start, ids) in &out {
            let end = ids.last().map_or(*start, |&a| cat.get(a).codomain());
            for a in cat.out_of(end) {
                let mut v = ids.clone();
                v.push(a);
                next.push((*start, v));
            }
        }
        out = next;
    }
    out
}

pub fn enumerate_chains(n_max: usize, p: usize) -> Vec<Chain> {
    let cat = InjCategory::new(n_max);
    enumerate_chain_ids(&cat, p)
        .into_iter()
        .map(|(start, ids)| Chain { start, arrows: ids.iter().map(|&a| cat.get(a).clone()).collect() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> InjWord {
        s.parse().unwrap()
    }

    #[test]
    fn compose_and_complete() {
        assert_eq!(InjWord::compose(&w("(1 3)@3"), &w("(2 1)@2")).unwrap(), w("(3 1)@3"));
        // 3-prefix of the square of the shift
        assert_eq!(InjWord::compose(&w("(2 3 4 5)@5"), &w("(2 3 4)@4")).unwrap(), w("(3 4 5)@5"));
        assert_eq!(w("(3 1)@4").complete_to_perm().word(), &w("(3 1 2 4)@4"));
        assert_eq!(w("(2 5)@5").complete_to_perm().word(), &w("(2 5 1 3 4)@5"));
        assert!(InjWord::compose(&w("(1)@1"), &w("(1 2)@2")).is_err());
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(w("id@3").to_string(), "id@3");
        assert_eq!(w("(1 2 3)@3"), InjWord::identity(3));
        assert_eq!(w("(3,1)@3").to_string(), "(3 1)@3");
        assert_eq!(w("()@2").to_string(), "()@2");
        assert!("(1 1)@2".parse::<InjWord>().is_err());
        assert!("(4)@3".parse::<InjWord>().is_err());
        assert!("(1 2)".parse::<InjWord>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_inj(2, 3).len(), 6);
        assert_eq!(enumerate_inj(0, 4).len(), 1);
        assert!(enumerate_inj(3, 2).is_empty());
        assert_eq!(enumerate_increasing(2, 4).len(), 6);
        for (k, x) in enumerate_inj(3, 5).iter().enumerate() {
            assert_eq!(x.lex_index(), k);
        }
    }

    // Oracle: brute-force p-tuples of all morphisms, filtering composable
    // non-identity sequences.
    fn brute_chain_count(n_max: usize, p: usize) -> usize {
        let all: Vec<InjWord> = (0..=n_max)
            .flat_map(|n| (0..=n_max).flat_map(move |m| enumerate_inj(n, m)))
            .filter(|x| !(x.is_identity() && x.source() == x.codomain()))
            .collect();
        if p == 0 {
            return n_max + 1;
        }
        let mut tuples: Vec<Vec<&InjWord>> = all.iter().map(|x| vec![x]).collect();
        for _ in 1..p {
            let mut next = vec![];
            for t in &tuples {
                for x in &all {
                    let mut t2 = t.clone();
                    t2.push(x);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        tuples.iter().filter(|t| t.windows(2).all(|w| w[0].codomain() == w[1].source())).count()
    }

    #[test]
    fn chain_counts_match_brute_force() {
        for (n, p) in [(0, 1), (1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (2, 3)] {
            assert_eq!(enumerate_chains(n, p).len(), brute_chain_count(n, p), "N={n} p={p}");
        }
        // frozen from the oracle
        assert_eq!(enumerate_chains(2, 1).len(), 5);
        assert_eq!(enumerate_chains(1, 1).len(), 1);
        assert!(enumerate_chains(0, 1).is_empty());
        assert_eq!(enumerate_chains(3, 2).len(), 108);
    }

    #[test]
    fn category_ids_roundtrip() {
        let c = InjCategory::new(3);
        for id in 0..c.len() {
            assert_eq!(c.id_of(c.get(id)), id);
        }
        assert_eq!(c.out_of(1).count(), count_inj(1, 2) + count_inj(1, 3));
    }

    fn arb_perm(m: usize) -> impl Strategy<Value = Perm> {
        Just((1..=m as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |v| Perm::from_word(InjWord::new(v, m as u32).unwrap()).unwrap())
    }

    proptest! {
        #[test]
        fn reduced_word_multiplies_back(p in (1usize..7).prop_flat_map(arb_perm)) {
            let m = p.degree();
            let mut acc = Perm::identity(m);
            for i in p.reduced_word() {
                acc = acc.compose(&Perm::transposition(m, i));
            }
            prop_assert_eq!(acc, p.clone());
            let len = p.reduced_word().len() as i64;
            prop_assert_eq!(if len % 2 == 0 { 1 } else { -1 }, p.sign());
        }

        #[test]
        fn inverse_and_sign(p in (1usize..7).prop_flat_map(arb_perm)) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert_eq!(p.sign(), p.inverse().sign());
        }

        #[test]
        fn completion_restricts(v in (1usize..6).prop_flat_map(|m| (Just(m), 0..=m)).prop_flat_map(|(m, n)| {
            Just((1..=m as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(move |mut v| { v.truncate(n); (v, m) })
        })) {
            let x = InjWord::new(v.0.clone(), v.1 as u32).unwrap();
            let g = x.complete_to_perm();
            prop_assert_eq!(&g.word().values()[..x.source()], x.values());
            let incl = InjWord::inclusion(x.source(), x.codomain());
            prop_assert_eq!(InjWord::compose(g.word(), &incl).unwrap(), x);
        }
    }
}
