//! Finite trees whose large leaf sets always shatter.
//!
//! `T_0` has a single empty branch. `T_{k+1}` splits every branch `b_j`
//! of `T_k` into `b_j 0` and `b_j 1` (new index `2j + i`), then for each
//! `m = 1..=k` and each set `I` of `2^m` new indices (colexicographic
//! order) appends an `m`-bit block: the member of `I` with rank `r`
//! receives `r` in big-endian binary, every other branch receives `0^m`.
//! Any `2^m` leaves of `T_{k+1}` therefore realize all `m`-bit patterns on
//! the block recorded for them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::columns::ColumnMatrix;
use crate::combin::{binomial, colex_masks, indices_to_mask, mask_to_indices, pext};
use crate::error::{invalid, Error, Result};
use crate::family::Family;

/// Largest stage [`build_tree`] materializes.
pub const DENSE_STAGE_LIMIT: usize = 4;
/// Leaf sets are handled as 64-bit masks.
pub const VERIFY_STAGE_LIMIT: usize = 6;

/// One block of coordinates appended at construction step
/// `T_{built_at_stage} -> T_{built_at_stage + 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCert {
    pub built_at_stage: usize,
    pub m: usize,
    /// `2^m` branch indices of `T_{built_at_stage + 1}`, ascending.
    pub subset: Vec<usize>,
    pub coord_start: usize,
}

impl BlockCert {
    pub fn coord_range(&self) -> core::ops::Range<usize> {
        self.coord_start..self.coord_start + self.m
    }

    /// The `m`-bit string assigned to each member of the subset: rank in
    /// ascending index order, written big-endian.
    pub fn assignment(&self) -> Vec<(usize, BitString)> {
        self.subset
            .iter()
            .enumerate()
            .map(|(rank, &idx)| (idx, BitString::from_int(rank as u64, self.m)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShatterTree {
    pub stage: usize,
    pub height: usize,
    /// Leaf `j` is the branch with index `j`.
    pub leaves: Vec<BitString>,
    pub blocks: Vec<BlockCert>,
}

/// Height of `T_n` by counting blocks: each step adds one split
/// coordinate plus `C(2^{k+1}, 2^m) * m` block coordinates.
pub fn tree_height(n: usize) -> Option<u128> {
    let mut h: u128 = 0;
    for k in 0..n {
        h = h.checked_add(1)?;
        for m in 1..=k {
            let count = binomial(1u64.checked_shl((k + 1) as u32)?, 1u64.checked_shl(m as u32)?)?;
            h = h.checked_add(count.checked_mul(m as u128)?)?;
        }
    }
    Some(h)
}

pub fn build_tree(n: usize) -> Result<ShatterTree> {
    if n > DENSE_STAGE_LIMIT {
        return Err(Error::Capability(format!(
            "stage {n} exceeds the dense limit {DENSE_STAGE_LIMIT} (height {})",
            tree_height(n).map_or(String::from("> 2^128"), |h| format!("{h}"))
        )));
    }
    let mut leaves = alloc::vec![BitString::new()];
    let mut blocks = Vec::new();
    for k in 0..n {
        leaves = leaves
            .iter()
            .flat_map(|b| [b.with(false), b.with(true)])
            .collect();
        let branches = leaves.len();
        for m in 1..=k {
            for mask in colex_masks(branches, 1 << m) {
                let coord_start = leaves[0].len();
                let mut rank = 0u64;
                for (idx, leaf) in leaves.iter_mut().enumerate() {
                    if mask >> idx & 1 == 1 {
                        for t in (0..m).rev() {
                            leaf.push((rank >> t) & 1 == 1);
                        }
                        rank += 1;
                    } else {
                        leaf.push_zeros(m);
                    }
                }
                blocks.push(BlockCert {
                    built_at_stage: k,
                    m,
                    subset: mask_to_indices(mask),
                    coord_start,
                });
            }
        }
    }
    let height = leaves[0].len();
    Ok(ShatterTree {
        stage: n,
        height,
        leaves,
        blocks,
    })
}

/// The leaves as a family (duplicates, if any, merge).
pub fn leaf_family(tree: &ShatterTree) -> Family {
    Family::new(tree.height, tree.leaves.iter().cloned()).expect("leaves have the tree height")
}

/// Prefix closure of the members, including the empty string when the
/// family is nonempty.
pub fn prefix_tree(family: &Family) -> BTreeSet<BitString> {
    let mut out = BTreeSet::new();
    for m in family.members() {
        for len in 0..=m.len() {
            out.insert(m.prefix(len));
        }
    }
    out
}

/// Full-length strings of a prefix-closed set.
pub fn tree_leaves(nodes: &BTreeSet<BitString>, width: usize) -> Vec<BitString> {
    nodes.iter().filter(|s| s.len() == width).cloned().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Search every `2^k`-subset of leaves for a shattered `k`-set.
    Exhaustive,
    /// Check the recorded block for every `2^k`-subset.
    Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuaranteeViolation {
    pub subset: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub stage: usize,
    pub k: usize,
    pub mode: VerifyMode,
    pub subsets_checked: u64,
    pub violations: Vec<GuaranteeViolation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Precomputed state for checking individual leaf subsets; shared by the
/// sequential [`verify_guarantee`] and parallel drivers.
pub struct GuaranteeChecker<'a> {
    tree: &'a ShatterTree,
    k: usize,
    mode: VerifyMode,
    /// Distinct columns as leaf masks.
    columns: Vec<u64>,
    /// Last-step blocks of size `m = k`, keyed by subset mask.
    blocks: BTreeMap<u64, &'a BlockCert>,
}

impl<'a> GuaranteeChecker<'a> {
    pub fn new(tree: &'a ShatterTree, k: usize, mode: VerifyMode) -> Result<Self> {
        if tree.stage == 0 || k >= tree.stage {
            return Err(invalid!("k = {k} must satisfy 0 <= k < stage = {}", tree.stage));
        }
        if tree.stage > VERIFY_STAGE_LIMIT {
            return Err(Error::Capability(format!(
                "verification supports stage <= {VERIFY_STAGE_LIMIT}"
            )));
        }
        if tree.leaves.len() != 1 << tree.stage {
            return Err(invalid!(
                "stage {} tree has {} leaves, expected {}",
                tree.stage,
                tree.leaves.len(),
                1usize << tree.stage
            ));
        }
        if let Some(bad) = tree.leaves.iter().position(|l| l.len() != tree.height) {
            return Err(invalid!("leaf {bad} does not have height {}", tree.height));
        }
        let mut columns = Vec::new();
        if mode == VerifyMode::Exhaustive {
            let mut set = BTreeSet::new();
            for c in 0..tree.height {
                let col = tree
                    .leaves
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, leaf)| acc | (leaf.get(c) as u64) << j);
                set.insert(col);
            }
            columns = set.into_iter().collect();
        }
        let blocks = tree
            .blocks
            .iter()
            .filter(|b| b.built_at_stage + 1 == tree.stage && b.m == k)
            .map(|b| (indices_to_mask(&b.subset), b))
            .collect();
        Ok(GuaranteeChecker {
            tree,
            k,
            mode,
            columns,
            blocks,
        })
    }

    /// Every leaf subset of size `2^k`, colexicographic.
    pub fn subsets(&self) -> impl Iterator<Item = u64> {
        colex_masks(self.tree.leaves.len(), 1 << self.k)
    }

    pub fn subset_count(&self) -> u64 {
        binomial(self.tree.leaves.len() as u64, 1 << self.k).unwrap_or(0) as u64
    }

    /// `None` if the leaves in `subset` shatter some `k`-set.
    pub fn check(&self, subset: u64) -> Option<GuaranteeViolation> {
        let violation = |reason: String| {
            Some(GuaranteeViolation {
                subset: mask_to_indices(subset),
                reason,
            })
        };
        if self.k == 0 {
            // any nonempty family shatters the empty set
            return None;
        }
        match self.mode {
            VerifyMode::Exhaustive => {
                let size = subset.count_ones() as usize;
                let full = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
                let mut projected: Vec<u64> = self
                    .columns
                    .iter()
                    .map(|&c| {
                        let p = pext(c, subset);
                        if p & 1 == 1 {
                            !p & full
                        } else {
                            p
                        }
                    })
                    .filter(|&p| p != 0)
                    .collect();
                projected.sort_unstable();
                projected.dedup();
                let coords = (0..projected.len()).collect();
                let matrix = ColumnMatrix::from_masks(size, &projected, coords);
                if matrix.first_shattered(self.k).is_some() {
                    None
                } else {
                    violation(format!("no {}-set of coordinates is shattered", self.k))
                }
            }
            VerifyMode::Certificate => {
                let Some(block) = self.blocks.get(&subset) else {
                    return violation(String::from("no certificate block records this subset"));
                };
                let range = block.coord_range();
                if range.end > self.tree.height {
                    return violation(format!("block {range:?} exceeds the height"));
                }
                let mut patterns: Vec<u64> = mask_to_indices(subset)
                    .into_iter()
                    .map(|j| {
                        range
                            .clone()
                            .fold(0u64, |acc, c| (acc << 1) | self.tree.leaves[j].get(c) as u64)
                    })
                    .collect();
                patterns.sort_unstable();
                patterns.dedup();
                if patterns.len() == 1 << self.k {
                    None
                } else {
                    violation(format!(
                        "block at {range:?} realizes {} of {} patterns",
                        patterns.len(),
                        1u64 << self.k
                    ))
                }
            }
        }
    }

    pub fn report(&self, subsets_checked: u64, violations: Vec<GuaranteeViolation>) -> VerificationReport {
        VerificationReport {
            stage: self.tree.stage,
            k: self.k,
            mode: self.mode,
            subsets_checked,
            violations,
        }
    }
}

/// Checks that every set of `2^k` leaves shatters a `k`-set of
/// coordinates (larger sets follow by monotonicity).
pub fn verify_guarantee(tree: &ShatterTree, k: usize, mode: VerifyMode) -> Result<VerificationReport> {
    let checker = GuaranteeChecker::new(tree, k, mode)?;
    let mut checked = 0;
    let mut violations = Vec::new();
    for subset in checker.subsets() {
        checked += 1;
        if let Some(v) = checker.check(subset) {
            violations.push(v);
        }
    }
    Ok(checker.report(checked, violations))
}

/// `ceil(2^stage / (2^{bound-1} - 1))`: a family of string dimension
/// `< bound` holds fewer than `2^{bound-1}` leaves, otherwise it would
/// shatter a `(bound-1)`-set.
pub fn cover_lower_bound_from_tree(tree: &ShatterTree, bound: usize) -> Result<u64> {
    if bound < 1 || bound > tree.stage {
        return Err(invalid!("bound {bound} outside 1..={}", tree.stage));
    }
    let per_part = (1u64 << (bound - 1)) - 1;
    if per_part == 0 {
        return Err(Error::Infeasible(String::from(
            "bound 1 admits only empty parts, which cover nothing",
        )));
    }
    Ok((1u64 << tree.stage).div_ceil(per_part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::vc_dimension;
    use std::string::ToString;
    use std::vec;

    #[test]
    fn heights_follow_counting() {
        assert_eq!(tree_height(0), Some(0));
        assert_eq!(tree_height(1), Some(1));
        assert_eq!(tree_height(2), Some(8));
        assert_eq!(tree_height(3), Some(177));
        assert_eq!(tree_height(4), Some(42548));
        for n in 0..=3 {
            assert_eq!(build_tree(n).unwrap().height as u128, tree_height(n).unwrap());
        }
    }

    #[test]
    fn small_trees() {
        let t0 = build_tree(0).unwrap();
        assert_eq!(t0.leaves, vec![BitString::new()]);
        let f0 = leaf_family(&t0);
        assert_eq!((f0.width(), f0.len()), (0, 1));

        let t1 = build_tree(1).unwrap();
        let leaves: Vec<_> = t1.leaves.iter().map(|l| l.to_string()).collect();
        assert_eq!(leaves, vec!["0", "1"]);
        assert!(t1.blocks.is_empty());

        let t2 = build_tree(2).unwrap();
        assert_eq!(t2.leaves.len(), 4);
        assert_eq!(t2.height, 8);
        assert_eq!(t2.blocks.len(), 6);
        assert!(matches!(build_tree(5), Err(Error::Capability(_))));
    }

    #[test]
    fn t2_leaves_by_hand() {
        // split: 00, 01, 10, 11; then one bit per pair {a<b}: b gets 1
        // pairs in colex order: 01 02 12 03 13 23
        let t2 = build_tree(2).unwrap();
        let leaves: Vec<_> = t2.leaves.iter().map(|l| l.to_string()).collect();
        assert_eq!(leaves, vec!["00000000", "01100000", "10011000", "11000111"]);
    }

    #[test]
    fn blocks_partition_post_split_coordinates() {
        let t = build_tree(3).unwrap();
        let mut next = 0;
        for k in 0..3 {
            next += 1; // split coordinate
            for b in t.blocks.iter().filter(|b| b.built_at_stage == k) {
                assert_eq!(b.coord_start, next);
                assert_eq!(b.subset.len(), 1 << b.m);
                assert!(b.m >= 1 && b.m <= k);
                let mut images: Vec<_> = b.assignment().into_iter().map(|(_, s)| s).collect();
                images.sort();
                images.dedup();
                assert_eq!(images.len(), 1 << b.m);
                next += b.m;
            }
        }
        assert_eq!(next, t.height);
    }

    #[test]
    fn guarantee_holds_on_small_trees() {
        for n in 1..=3 {
            let t = build_tree(n).unwrap();
            for k in 0..n {
                for mode in [VerifyMode::Exhaustive, VerifyMode::Certificate] {
                    let r = verify_guarantee(&t, k, mode).unwrap();
                    assert!(r.passed(), "n={n} k={k} {mode:?}: {:?}", r.violations);
                    assert_eq!(r.subsets_checked, binomial(1 << n, 1 << k).unwrap() as u64);
                }
            }
        }
        let t3 = build_tree(3).unwrap();
        assert_eq!(verify_guarantee(&t3, 2, VerifyMode::Exhaustive).unwrap().subsets_checked, 70);
        assert!(verify_guarantee(&t3, 3, VerifyMode::Exhaustive).is_err());
    }

    #[test]
    fn duplicated_leaf_is_reported() {
        let mut t = build_tree(2).unwrap();
        t.leaves[1] = t.leaves[0].clone();
        for mode in [VerifyMode::Exhaustive, VerifyMode::Certificate] {
            let r = verify_guarantee(&t, 1, mode).unwrap();
            assert!(!r.passed());
            assert_eq!(r.violations[0].subset, vec![0, 1]);
        }
    }

    #[test]
    fn leaf_family_dimension() {
        for n in 0..=3 {
            let t = build_tree(n).unwrap();
            let r = vc_dimension(&leaf_family(&t));
            assert!(r.vc_dim >= n as i64 - 1, "n={n} vc={}", r.vc_dim);
        }
    }

    #[test]
    fn prefix_tree_examples() {
        let f = Family::parse_members(2, &["01"]).unwrap();
        let nodes: Vec<_> = prefix_tree(&f).into_iter().map(|s| s.to_string()).collect();
        assert_eq!(nodes, vec!["", "0", "01"]);
        assert!(prefix_tree(&Family::empty(3)).is_empty());
        let f = Family::parse_members(2, &["00", "01"]).unwrap();
        let nodes: Vec<_> = prefix_tree(&f).into_iter().map(|s| s.to_string()).collect();
        assert_eq!(nodes, vec!["", "0", "00", "01"]);
        let t = build_tree(3).unwrap();
        let lf = leaf_family(&t);
        assert_eq!(tree_leaves(&prefix_tree(&lf), t.height), lf.members().to_vec());
    }

    #[test]
    fn tree_cover_bounds() {
        let t3 = build_tree(3).unwrap();
        assert_eq!(cover_lower_bound_from_tree(&t3, 3).unwrap(), 3);
        assert!(matches!(cover_lower_bound_from_tree(&t3, 1), Err(Error::Infeasible(_))));
        assert!(cover_lower_bound_from_tree(&t3, 4).is_err());
        let t4 = build_tree(4).unwrap();
        assert_eq!(cover_lower_bound_from_tree(&t4, 2).unwrap(), 16);
        assert_eq!(cover_lower_bound_from_tree(&t4, 3).unwrap(), 6);
    }
}
