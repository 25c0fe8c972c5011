//! The finite string ideal: membership, the union lemma, lower bounds and
//! cover certificates.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitString;
use crate::columns::ColumnMatrix;
use crate::combin::Combinations;
use crate::dimension::{find_shattered, sauer_bound};
use crate::error::{invalid, Error, Result};
use crate::family::{shatters, CoordSet, Family};

/// Finite ideal parameters: families over `{0,1}^width` with string
/// dimension `< bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IdealParams {
    width: usize,
    bound: usize,
}

impl IdealParams {
    pub fn new(width: usize, bound: usize) -> Result<Self> {
        if bound < 1 || bound > width + 2 {
            return Err(invalid!(
                "bound {bound} outside 1..={} for width {width}",
                width + 2
            ));
        }
        Ok(IdealParams { width, bound })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Size of the sets that members must fail to shatter.
    pub fn forbidden_size(&self) -> usize {
        self.bound - 1
    }
}

/// `string_dim(F) < bound`. Shattered sets are closed under subsets, so
/// this is the same as shattering no set of size `bound - 1`.
pub fn in_ideal(family: &Family, params: &IdealParams) -> Result<bool> {
    if family.width() != params.width {
        return Err(invalid!(
            "family width {} does not match ideal width {}",
            family.width(),
            params.width
        ));
    }
    Ok(find_shattered(family, params.forbidden_size()).is_none())
}

/// Outcome of [`union_lemma_check`] when the union shatters an `m·l`-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionWitness {
    /// Index of the part that shatters an `l`-set.
    pub part: usize,
    /// The `l`-set shattered by that part.
    pub coords: CoordSet,
    /// The `m·l`-set shattered by the union.
    pub union_coords: CoordSet,
}

/// If the union of `m = parts.len()` families shatters a set of size
/// `m·l`, names a part that shatters a set of size `l`.
///
/// The shattered set is cut into `m` consecutive blocks of `l`
/// coordinates; if no part shattered its own block, picking a missing
/// pattern per block and gluing them gives a pattern the union cannot
/// realize. So the first part shattering its own block is returned.
pub fn union_lemma_check(parts: &[Family], l: usize) -> Result<Option<UnionWitness>> {
    let Some(first) = parts.first() else {
        return Ok(None);
    };
    let width = first.width();
    if let Some(bad) = parts.iter().position(|p| p.width() != width) {
        return Err(invalid!("part {bad} has width {} but part 0 has width {width}", parts[bad].width()));
    }
    let m = parts.len();
    let size = m
        .checked_mul(l)
        .filter(|&s| s <= width)
        .ok_or_else(|| invalid!("{m} parts times l = {l} exceeds width {width}"))?;
    let union = Family::new(width, parts.iter().flat_map(|p| p.members().iter().cloned()))?;
    let Some(shattered) = find_shattered(&union, size) else {
        return Ok(None);
    };
    for (alpha, part) in parts.iter().enumerate() {
        let block = CoordSet::new(width, shattered.coords()[alpha * l..(alpha + 1) * l].to_vec())?;
        if shatters(part, &block)? {
            return Ok(Some(UnionWitness {
                part: alpha,
                coords: block,
                union_coords: shattered,
            }));
        }
    }
    unreachable!("a union shattering an m*l-set always has a part shattering its block")
}

/// `ceil(2^width / sum_{i < bound-1} C(width, i))`: the denominator is the
/// largest possible size of a family with string dimension `< bound`.
pub fn sauer_lower_bound(params: &IdealParams) -> Result<u128> {
    let n = params.width;
    if n > 126 {
        return Err(Error::Overflow(format!("width {n} exceeds 126")));
    }
    let capacity = sauer_bound(params.forbidden_size() as u64, n as u64)?;
    if capacity == 0 {
        return Err(Error::Infeasible(format!(
            "bound {} admits only the empty family",
            params.bound
        )));
    }
    Ok((1u128 << n).div_ceil(capacity))
}

/// Least `m` with `2^m >= k`.
pub fn log2_least(k: u128) -> Result<u32> {
    if k < 1 {
        return Err(invalid!("log2_least needs k >= 1, got {k}"));
    }
    Ok(128 - (k - 1).leading_zeros())
}

/// A pattern that does not occur on `coords` in some part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MissEntry {
    pub coords: CoordSet,
    pub pattern: BitString,
}

/// A list of parts of string dimension `< bound` whose union is the cube,
/// each carrying a map of absent patterns.
///
/// Witness maps are keyed by sets of column-class representatives (the
/// lowest coordinate among columns that are equal or complementary in the
/// part). Any other `(bound-1)`-set either contains a constant column, two
/// columns of one class, or maps onto a representative set with the same
/// number of realized patterns, so these entries cover every set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    pub params: IdealParams,
    pub parts: Vec<Family>,
    pub witnesses: Vec<Vec<MissEntry>>,
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateViolation {
    PartWidth { part: usize, width: usize },
    WitnessCount { parts: usize, maps: usize },
    Uncovered(BitString),
    NonemptyAtBoundOne { part: usize },
    MissingWitness { part: usize, coords: CoordSet },
    MalformedWitness { part: usize, coords: CoordSet },
    PatternPresent { part: usize, coords: CoordSet, pattern: BitString },
    Shattered { part: usize, coords: CoordSet },
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CertificateViolation::*;
        match self {
            PartWidth { part, width } => write!(f, "part {part} has width {width}"),
            WitnessCount { parts, maps } => {
                write!(f, "{parts} parts but {maps} witness maps")
            }
            Uncovered(s) => write!(f, "string {s} is not covered"),
            NonemptyAtBoundOne { part } => {
                write!(f, "part {part} is nonempty but bound 1 admits only the empty family")
            }
            MissingWitness { part, coords } => {
                write!(f, "part {part} has no witness for coordinates {:?}", coords.coords())
            }
            MalformedWitness { part, coords } => {
                write!(f, "part {part} witness for {:?} has the wrong shape", coords.coords())
            }
            PatternPresent {
                part,
                coords,
                pattern,
            } => write!(
                f,
                "part {part} realizes the claimed missing pattern {pattern} on {:?}",
                coords.coords()
            ),
            Shattered { part, coords } => {
                write!(f, "part {part} shatters {:?}", coords.coords())
            }
        }
    }
}

fn pattern_value(member: &BitString, coords: &[usize]) -> u64 {
    coords
        .iter()
        .fold(0u64, |acc, &c| (acc << 1) | member.get(c) as u64)
}

/// Representative coordinates of the non-constant column classes.
pub fn class_representatives(part: &Family) -> Vec<usize> {
    ColumnMatrix::from_family(part).reduce().0.coords().to_vec()
}

/// Absent patterns for every `k`-set of class representatives of `part`,
/// or the first shattered representative set.
pub fn witness_map(part: &Family, k: usize) -> core::result::Result<Vec<MissEntry>, CoordSet> {
    if part.is_empty() {
        return Ok(Vec::new());
    }
    if k == 0 {
        return Err(CoordSet::empty(part.width()));
    }
    assert!(k < 64, "witness patterns are limited to 63 coordinates");
    let reps = class_representatives(part);
    let mut entries = Vec::new();
    for choice in Combinations::new(reps.len(), k) {
        let coords: Vec<usize> = choice.iter().map(|&i| reps[i]).collect();
        let mut seen: Vec<u64> = part
            .members()
            .iter()
            .map(|m| pattern_value(m, &coords))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        let missing = seen
            .iter()
            .enumerate()
            .find(|&(i, &v)| v != i as u64)
            .map(|(i, _)| i as u64)
            .unwrap_or(seen.len() as u64);
        let set = CoordSet::new(part.width(), coords).expect("representatives are valid");
        if k < 64 && missing >= 1u64 << k {
            return Err(set);
        }
        entries.push(MissEntry {
            coords: set,
            pattern: BitString::from_int(missing, k),
        });
    }
    Ok(entries)
}

impl CoverCertificate {
    /// Assembles a certificate, computing witness maps; errors if a part
    /// is not in the ideal.
    pub fn from_parts(params: IdealParams, parts: Vec<Family>) -> Result<Self> {
        let mut witnesses = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            if part.width() != params.width {
                return Err(invalid!("part {i} has width {}", part.width()));
            }
            let map = witness_map(part, params.forbidden_size()).map_err(|coords| {
                invalid!("part {i} shatters {:?} and is not in the ideal", coords.coords())
            })?;
            witnesses.push(map);
        }
        Ok(CoverCertificate {
            params,
            parts,
            witnesses,
        })
    }

    pub fn size(&self) -> usize {
        self.parts.len()
    }

    /// Checks the certificate as a cover of the whole cube.
    pub fn validate(&self) -> core::result::Result<(), CertificateViolation> {
        let n = self.params.width;
        assert!(n <= 30, "cube validation limited to width 30");
        self.validate_parts()?;
        for v in 0..1u64 << n {
            let s = BitString::from_int(v, n);
            if !self.parts.iter().any(|p| p.contains(&s)) {
                return Err(CertificateViolation::Uncovered(s));
            }
        }
        self.validate_dimensions()
    }

    /// Checks the certificate as a cover of `target` (a family of the same
    /// width) rather than of the whole cube.
    pub fn validate_cover_of(&self, target: &Family) -> core::result::Result<(), CertificateViolation> {
        self.validate_parts()?;
        if let Some(s) = target
            .members()
            .iter()
            .find(|s| !self.parts.iter().any(|p| p.contains(s)))
        {
            return Err(CertificateViolation::Uncovered(s.clone()));
        }
        self.validate_dimensions()
    }

    fn validate_parts(&self) -> core::result::Result<(), CertificateViolation> {
        let k = self.params.forbidden_size();
        if self.witnesses.len() != self.parts.len() {
            return Err(CertificateViolation::WitnessCount {
                parts: self.parts.len(),
                maps: self.witnesses.len(),
            });
        }
        for (i, (part, map)) in self.parts.iter().zip(&self.witnesses).enumerate() {
            if part.width() != self.params.width {
                return Err(CertificateViolation::PartWidth {
                    part: i,
                    width: part.width(),
                });
            }
            if part.is_empty() {
                continue;
            }
            if k == 0 {
                return Err(CertificateViolation::NonemptyAtBoundOne { part: i });
            }
            for entry in map {
                if entry.coords.len() != k
                    || entry.pattern.len() != k
                    || entry.coords.width() != part.width()
                {
                    return Err(CertificateViolation::MalformedWitness {
                        part: i,
                        coords: entry.coords.clone(),
                    });
                }
                let want = entry.pattern.to_int().expect("k < 64");
                if part
                    .members()
                    .iter()
                    .any(|m| pattern_value(m, entry.coords.coords()) == want)
                {
                    return Err(CertificateViolation::PatternPresent {
                        part: i,
                        coords: entry.coords.clone(),
                        pattern: entry.pattern.clone(),
                    });
                }
            }
            let reps = class_representatives(part);
            for choice in Combinations::new(reps.len(), k) {
                let coords: Vec<usize> = choice.iter().map(|&c| reps[c]).collect();
                if !map.iter().any(|e| e.coords.coords() == coords.as_slice()) {
                    return Err(CertificateViolation::MissingWitness {
                        part: i,
                        coords: CoordSet::new(part.width(), coords).expect("valid"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Independent re-check through the shattering search.
    fn validate_dimensions(&self) -> core::result::Result<(), CertificateViolation> {
        for (i, part) in self.parts.iter().enumerate() {
            if let Some(coords) = find_shattered(part, self.params.forbidden_size()) {
                return Err(CertificateViolation::Shattered { part: i, coords });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::vc_dimension;
    use proptest::prelude::*;
    use std::vec;

    fn fam(width: usize, members: &[&str]) -> Family {
        Family::parse_members(width, members).unwrap()
    }

    fn params(w: usize, d: usize) -> IdealParams {
        IdealParams::new(w, d).unwrap()
    }

    #[test]
    fn params_range() {
        assert!(IdealParams::new(3, 0).is_err());
        assert!(IdealParams::new(3, 6).is_err());
        assert!(IdealParams::new(3, 5).is_ok());
    }

    #[test]
    fn in_ideal_examples() {
        assert!(!in_ideal(&Family::cube(3), &params(3, 4)).unwrap());
        assert!(in_ideal(&Family::cube(3), &params(3, 5)).unwrap());
        assert!(in_ideal(&fam(3, &["010"]), &params(3, 2)).unwrap());
        let parity = fam(3, &["000", "011", "101", "110"]);
        assert!(!in_ideal(&parity, &params(3, 3)).unwrap());
        assert!(in_ideal(&Family::empty(3), &params(3, 1)).unwrap());
        assert!(!in_ideal(&fam(3, &["010"]), &params(3, 1)).unwrap());
        assert!(in_ideal(&Family::cube(2), &params(3, 2)).is_err());
    }

    #[test]
    fn union_lemma_examples() {
        let w = union_lemma_check(&[Family::cube(4)], 2).unwrap().unwrap();
        assert_eq!(w.part, 0);
        assert_eq!(w.coords.len(), 2);

        let parts = [fam(2, &["01"]), fam(2, &["10"])];
        assert_eq!(union_lemma_check(&parts, 1).unwrap(), None);

        assert!(union_lemma_check(&[Family::cube(3), Family::cube(3)], 2).is_err());
        assert!(union_lemma_check(&[Family::cube(3), Family::cube(2)], 1).is_err());
        assert_eq!(union_lemma_check(&[], 3).unwrap(), None);
    }

    #[test]
    fn sauer_lower_bound_examples() {
        assert_eq!(sauer_lower_bound(&params(3, 2)).unwrap(), 8);
        assert_eq!(sauer_lower_bound(&params(2, 3)).unwrap(), 2);
        assert_eq!(sauer_lower_bound(&params(3, 3)).unwrap(), 2);
        for n in 1..8 {
            assert_eq!(sauer_lower_bound(&params(n, n + 2)).unwrap(), 1);
        }
        assert!(matches!(sauer_lower_bound(&params(3, 1)), Err(Error::Infeasible(_))));
    }

    #[test]
    fn log2_least_examples() {
        assert_eq!(log2_least(1).unwrap(), 0);
        assert_eq!(log2_least(8).unwrap(), 3);
        assert_eq!(log2_least(9).unwrap(), 4);
        assert_eq!(log2_least(2).unwrap(), 1);
        assert!(log2_least(0).is_err());
    }

    #[test]
    fn certificate_round_trip_through_validator() {
        let p = params(2, 3);
        let cert = CoverCertificate::from_parts(
            p,
            vec![fam(2, &["00", "01", "10"]), fam(2, &["11"])],
        )
        .unwrap();
        assert_eq!(cert.validate(), Ok(()));
        assert_eq!(cert.witnesses[0][0].pattern.to_bit_string(), "11");

        let mut missing = cert.clone();
        missing.parts.pop();
        missing.witnesses.pop();
        assert!(matches!(missing.validate(), Err(CertificateViolation::Uncovered(_))));

        let mut lying = cert.clone();
        lying.witnesses[0][0].pattern = "00".parse().unwrap();
        assert!(matches!(lying.validate(), Err(CertificateViolation::PatternPresent { .. })));

        let mut dropped = cert;
        dropped.witnesses[0].clear();
        assert!(matches!(dropped.validate(), Err(CertificateViolation::MissingWitness { .. })));

        assert!(CoverCertificate::from_parts(p, vec![Family::cube(2)]).is_err());
    }

    #[test]
    fn witness_map_uses_class_representatives() {
        // columns 0 and 2 are complementary, column 3 constant
        let part = fam(4, &["0010", "0110", "1000"]);
        assert_eq!(class_representatives(&part), vec![0, 1]);
        let map = witness_map(&part, 2).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map[0].coords.coords(), &[0, 1]);
        assert_eq!(map[0].pattern.to_bit_string(), "11");
    }

    fn family_strategy(max_width: usize) -> impl Strategy<Value = Family> {
        (1..=max_width).prop_flat_map(|w| {
            proptest::collection::btree_set(0u64..1 << w, 0..=(1usize << w))
                .prop_map(move |s| Family::new(w, s.into_iter().map(|v| BitString::from_int(v, w))).unwrap())
        })
    }

    proptest! {
        #[test]
        fn in_ideal_matches_dimension(f in family_strategy(4), extra in 0usize..6) {
            let bound = 1 + extra.min(f.width() + 1);
            let p = params(f.width(), bound);
            let sdim = vc_dimension(&f).string_dim as usize;
            prop_assert_eq!(in_ideal(&f, &p).unwrap(), sdim < bound);
            // witness maps exist exactly for ideal members
            prop_assert_eq!(witness_map(&f, bound - 1).is_ok(), sdim < bound);
        }
    }
}
