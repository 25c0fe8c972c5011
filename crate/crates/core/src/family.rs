//! Families of equal-length binary strings and their restrictions.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::error::{invalid, Result};

/// A deduplicated set of binary strings of a common `width`, kept in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    width: usize,
    members: Vec<BitString>,
}

impl Family {
    pub fn empty(width: usize) -> Self {
        Family {
            width,
            members: Vec::new(),
        }
    }

    /// Builds a family, silently merging duplicates.
    pub fn new<I: IntoIterator<Item = BitString>>(width: usize, members: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for m in members {
            if m.len() != width {
                return Err(invalid!(
                    "member {m} has length {} but the family width is {width}",
                    m.len()
                ));
            }
            set.insert(m);
        }
        Ok(Family {
            width,
            members: set.into_iter().collect(),
        })
    }

    /// Builds a family, rejecting duplicates; the error names the index of
    /// the first repeated member.
    pub fn new_strict<I: IntoIterator<Item = BitString>>(width: usize, members: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, m) in members.into_iter().enumerate() {
            if m.len() != width {
                return Err(invalid!(
                    "member {i} has length {} but the family width is {width}",
                    m.len()
                ));
            }
            if !set.insert(m) {
                return Err(invalid!("member {i} is a duplicate"));
            }
        }
        Ok(Family {
            width,
            members: set.into_iter().collect(),
        })
    }

    /// The whole cube `{0,1}^width` (width ≤ 30).
    pub fn cube(width: usize) -> Self {
        assert!(width <= 30, "cube materialization limited to width 30");
        Family {
            width,
            members: (0..1u64 << width)
                .map(|v| BitString::from_int(v, width))
                .collect(),
        }
    }

    /// Convenience constructor from `0`/`1` string literals.
    pub fn parse_members(width: usize, members: &[&str]) -> Result<Self> {
        let parsed = members
            .iter()
            .map(|s| s.parse::<BitString>())
            .collect::<Result<Vec<_>>>()?;
        Family::new(width, parsed)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.width == other.width && self.members.iter().all(|m| other.contains(m))
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        if self.width != other.width {
            return Err(invalid!("width mismatch: {} vs {}", self.width, other.width));
        }
        Family::new(
            self.width,
            self.members.iter().chain(other.members.iter()).cloned(),
        )
    }

    pub fn into_members(self) -> Vec<BitString> {
        self.members
    }
}

/// A strictly increasing set of coordinates below `width`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordSet {
    width: usize,
    coords: Vec<usize>,
}

impl CoordSet {
    /// Sorts and validates `coords`; duplicates or out-of-range indices are
    /// rejected.
    pub fn new(width: usize, mut coords: Vec<usize>) -> Result<Self> {
        coords.sort_unstable();
        for pair in coords.windows(2) {
            if pair[0] == pair[1] {
                return Err(invalid!("coordinate {} repeated", pair[0]));
            }
        }
        if let Some(&last) = coords.last() {
            if last >= width {
                return Err(invalid!("coordinate {last} out of range for width {width}"));
            }
        }
        Ok(CoordSet { width, coords })
    }

    pub fn empty(width: usize) -> Self {
        CoordSet {
            width,
            coords: Vec::new(),
        }
    }

    pub fn all(width: usize) -> Self {
        CoordSet {
            width,
            coords: (0..width).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_subset_of(&self, other: &CoordSet) -> bool {
        self.coords.iter().all(|c| other.coords.binary_search(c).is_ok())
    }
}

fn check_width(family: &Family, coords: &CoordSet) -> Result<()> {
    if family.width != coords.width {
        return Err(invalid!(
            "coordinate set is over width {} but the family has width {}",
            coords.width,
            family.width
        ));
    }
    Ok(())
}

/// The distinct projections of the members onto `coords`.
pub fn restrict(family: &Family, coords: &CoordSet) -> Result<Family> {
    check_width(family, coords)?;
    Family::new(
        coords.len(),
        family.members.iter().map(|m| m.select(&coords.coords)),
    )
}

/// Whether every pattern on `coords` is realized by some member.
pub fn shatters(family: &Family, coords: &CoordSet) -> Result<bool> {
    check_width(family, coords)?;
    let k = coords.len();
    if k >= usize::BITS as usize - 1 || family.len() < 1usize << k {
        return Ok(false);
    }
    Ok(restrict(family, coords)?.len() == 1usize << k)
}
