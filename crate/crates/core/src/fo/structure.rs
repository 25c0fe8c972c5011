use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite relational structure on `0..universe_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    universe_size: usize,
    relations: BTreeMap<String, Relation>,
}

impl FiniteStructure {
    pub fn new(universe_size: usize) -> Result<Self> {
        if universe_size == 0 {
            return Err(invalid!("the universe must be nonempty"));
        }
        Ok(FiniteStructure {
            universe_size,
            relations: BTreeMap::new(),
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    /// Declares a relation; tuples are checked against the arity and the
    /// universe. Redeclaring a name is an error.
    pub fn add_relation<I>(&mut self, name: &str, arity: usize, tuples: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        if arity == 0 {
            return Err(invalid!("relation {name} must have positive arity"));
        }
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(invalid!("relation name {name:?} must be a nonempty token"));
        }
        if self.relations.contains_key(name) {
            return Err(invalid!("relation {name} declared twice"));
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(invalid!(
                    "tuple {t:?} of {name} has length {} but the arity is {arity}",
                    t.len()
                ));
            }
            if let Some(&bad) = t.iter().find(|&&e| e >= self.universe_size) {
                return Err(invalid!(
                    "element {bad} of {name} is outside the universe 0..{}",
                    self.universe_size
                ));
            }
            set.insert(t);
        }
        self.relations.insert(name.into(), Relation { arity, tuples: set });
        Ok(())
    }

    /// `0 < 1 < … < n-1` under the relation name `<`.
    pub fn linear_order(n: usize) -> Result<Self> {
        let mut s = FiniteStructure::new(n)?;
        s.add_relation(
            "<",
            2,
            (0..n).flat_map(|a| (a + 1..n).map(move |b| alloc::vec![a, b])),
        )?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    #[test]
    fn validation() {
        assert!(FiniteStructure::new(0).is_err());
        let mut s = FiniteStructure::new(3).unwrap();
        assert!(s.add_relation("E", 2, [vec![0, 3]]).is_err());
        assert!(s.add_relation("E", 2, [vec![0]]).is_err());
        assert!(s.add_relation("E", 0, []).is_err());
        s.add_relation("E", 2, [vec![0, 1]]).unwrap();
        assert!(s.add_relation("E", 1, []).is_err());
        assert_eq!(FiniteStructure::linear_order(4).unwrap().relation("<").unwrap().tuples.len(), 6);
    }
}
