use super::functor::TruncIFunctor;
use crate::Error;
use std::collections::BTreeMap;

/// A finite family `q -> π_q` of truncated functors on one truncation level.
#[derive(Clone, Debug)]
pub struct GradedTameModule {
    trunc: usize,
    members: BTreeMap<i64, TruncIFunctor>,
}

impl GradedTameModule {
    pub fn new(trunc: usize) -> Self {
        GradedTameModule { trunc, members: BTreeMap::new() }
    }

    pub fn from_members(trunc: usize, members: impl IntoIterator<Item = (i64, TruncIFunctor)>) -> Result<Self, Error> {
        let mut g = GradedTameModule::new(trunc);
        for (q, f) in members {
            g.insert(q, f)?;
        }
        Ok(g)
    }

    pub fn insert(&mut self, q: i64, f: TruncIFunctor) -> Result<(), Error> {
        if f.trunc() != self.trunc {
            return Err(Error::IncompatibleTower(format!(
                "degree {q} has truncation {} but the family uses {}",
                f.trunc(),
                self.trunc
            )));
        }
        self.members.insert(q, f.with_grade(q));
        Ok(())
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn get(&self, q: i64) -> Option<&TruncIFunctor> {
        self.members.get(&q)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.members.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &TruncIFunctor)> {
        self.members.iter().map(|(q, f)| (*q, f))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
