//! Covers of the cube `{0,1}^n` by families of bounded string dimension.
//!
//! Cube elements are handled as integers whose big-endian bits are the
//! string, so numeric order is lexicographic order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::combin::Combinations;
use crate::error::{Error, Result};
use crate::family::{CoordSet, Family};
use crate::ideal::{class_representatives, sauer_lower_bound, CoverCertificate, IdealParams, MissEntry};

/// Largest width accepted by [`cover_exact`].
pub const EXACT_WIDTH_LIMIT: usize = 4;
/// Largest width accepted by [`cover_greedy`].
pub const GREEDY_WIDTH_LIMIT: usize = 16;

fn family_from_ints(width: usize, elems: impl IntoIterator<Item = u64>) -> Family {
    Family::new(width, elems.into_iter().map(|v| BitString::from_int(v, width)))
        .expect("cube elements have the family width")
}

fn require_feasible(params: &IdealParams) -> Result<()> {
    if params.forbidden_size() == 0 {
        return Err(Error::Infeasible(format!(
            "bound 1 admits only the empty family, which cannot cover {{0,1}}^{}",
            params.width()
        )));
    }
    Ok(())
}

/// Bit masks of cube elements projecting to each pattern of a coordinate
/// set, for every `k`-set of coordinates.
fn pattern_classes(n: usize, k: usize) -> Vec<Vec<u32>> {
    Combinations::new(n, k)
        .map(|set| {
            let mut classes = vec![0u32; 1 << k];
            for v in 0..1u32 << n {
                let p = set
                    .iter()
                    .fold(0usize, |acc, &c| (acc << 1) | ((v >> (n - 1 - c)) & 1) as usize);
                classes[p] |= 1 << v;
            }
            classes
        })
        .collect()
}

/// The hyperoctahedral group acting on cube elements: every coordinate
/// permutation combined with every global bit flip.
fn cube_symmetries(n: usize) -> Vec<Vec<u8>> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for c in 0..n {
                if !p.contains(&c) {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for perm in &perms {
        for flip in 0..1u32 << n {
            let map = (0..1u32 << n)
                .map(|v| {
                    let mut w = 0u32;
                    for (src, &dst) in perm.iter().enumerate() {
                        w |= ((v >> src) & 1) << dst;
                    }
                    (w ^ flip) as u8
                })
                .collect();
            out.push(map);
        }
    }
    out
}

struct ExactSearch {
    /// Maximal ideal members, as element masks.
    candidates: Vec<u32>,
    symmetries: Vec<Vec<u8>>,
    capacity: u32,
    /// Canonical uncovered set -> largest budget known to fail.
    failed: BTreeMap<u32, usize>,
    path: Vec<u32>,
}

impl ExactSearch {
    fn canonical(&self, set: u32) -> u32 {
        self.symmetries
            .iter()
            .map(|map| {
                let mut image = 0u32;
                let mut s = set;
                while s != 0 {
                    let v = s.trailing_zeros();
                    s &= s - 1;
                    image |= 1 << map[v as usize];
                }
                image
            })
            .min()
            .unwrap_or(set)
    }

    fn solve(&mut self, uncovered: u32, budget: usize) -> bool {
        if uncovered == 0 {
            return true;
        }
        if budget == 0 || uncovered.count_ones() > budget as u32 * self.capacity {
            return false;
        }
        let key = self.canonical(uncovered);
        if self.failed.get(&key).is_some_and(|&b| b >= budget) {
            return false;
        }
        let lowest = uncovered & uncovered.wrapping_neg();
        let mut options: Vec<u32> = self
            .candidates
            .iter()
            .copied()
            .filter(|&c| c & lowest != 0)
            .collect();
        options.sort_by_key(|&c| (core::cmp::Reverse((c & uncovered).count_ones()), c));
        let mut tried = BTreeSet::new();
        for part in options {
            let rest = uncovered & !part;
            if !tried.insert(rest) {
                continue;
            }
            self.path.push(part);
            if self.solve(rest, budget - 1) {
                return true;
            }
            self.path.pop();
        }
        let entry = self.failed.entry(key).or_insert(0);
        *entry = (*entry).max(budget);
        false
    }
}

/// A minimum-size cover of `{0,1}^width` by families of string dimension
/// `< bound`, found by iterative deepening over maximal ideal members with
/// symmetry-reduced memoization.
pub fn cover_exact(params: &IdealParams) -> Result<CoverCertificate> {
    let n = params.width();
    if n > EXACT_WIDTH_LIMIT {
        return Err(Error::Capability(format!(
            "exact cover search supports width <= {EXACT_WIDTH_LIMIT}; use cover_greedy for width {n}"
        )));
    }
    require_feasible(params)?;
    let k = params.forbidden_size();
    let size = 1usize << n;
    let full: u32 = if size == 32 { u32::MAX } else { (1u32 << size) - 1 };

    let classes = pattern_classes(n, k);
    let in_ideal = |mask: u32| {
        classes
            .iter()
            .all(|pats| pats.iter().any(|&p| mask & p == 0))
    };
    let members: Vec<bool> = (0..=full).map(in_ideal).collect();
    let candidates: Vec<u32> = (0..=full)
        .filter(|&m| {
            members[m as usize]
                && (0..size).all(|v| m & (1 << v) != 0 || !members[(m | 1 << v) as usize])
        })
        .collect();
    let capacity = candidates.iter().map(|c| c.count_ones()).max().unwrap_or(0);

    let lower = sauer_lower_bound(params)? as usize;
    let mut search = ExactSearch {
        candidates,
        symmetries: cube_symmetries(n),
        capacity,
        failed: BTreeMap::new(),
        path: Vec::new(),
    };
    let mut budget = lower.max(1);
    loop {
        search.path.clear();
        if search.solve(full, budget) {
            break;
        }
        budget += 1;
    }
    let parts = search
        .path
        .iter()
        .map(|&mask| family_from_ints(n, (0..size as u64).filter(|&v| mask & (1 << v) != 0)))
        .collect();
    CoverCertificate::from_parts(*params, parts)
}

/// Per-coordinate-set pattern bookkeeping for the greedy cover.
struct PatternTracker {
    sets: Vec<Vec<usize>>,
    lo: Vec<[u16; 256]>,
    hi: Vec<[u16; 256]>,
    present: Vec<Vec<u64>>,
    counts: Vec<u32>,
    full: u32,
}

impl PatternTracker {
    fn new(n: usize, k: usize) -> Self {
        let sets: Vec<Vec<usize>> = Combinations::new(n, k).collect();
        let table = |set: &[usize], shift: usize| {
            let mut t = [0u16; 256];
            for (byte, slot) in t.iter_mut().enumerate() {
                let v = (byte as u32) << shift;
                *slot = set
                    .iter()
                    .fold(0u16, |acc, &c| (acc << 1) | ((v >> (n - 1 - c)) & 1) as u16);
            }
            t
        };
        let lo = sets.iter().map(|s| table(s, 0)).collect();
        let hi = sets.iter().map(|s| table(s, 8)).collect();
        let words = (1usize << k).div_ceil(64);
        PatternTracker {
            present: vec![vec![0; words]; sets.len()],
            counts: vec![0; sets.len()],
            full: 1 << k,
            sets,
            lo,
            hi,
        }
    }

    fn reset(&mut self) {
        for p in self.present.iter_mut() {
            p.iter_mut().for_each(|w| *w = 0);
        }
        self.counts.iter_mut().for_each(|c| *c = 0);
    }

    #[inline]
    fn pattern(&self, set: usize, v: u32) -> usize {
        (self.lo[set][(v & 0xff) as usize] | self.hi[set][(v >> 8) as usize]) as usize
    }

    fn is_present(&self, set: usize, p: usize) -> bool {
        (self.present[set][p / 64] >> (p % 64)) & 1 == 1
    }

    /// Adds `v` unless that would complete every pattern on some set.
    fn try_add(&mut self, v: u32) -> bool {
        for s in 0..self.sets.len() {
            let p = self.pattern(s, v);
            if !self.is_present(s, p) && self.counts[s] + 1 == self.full {
                return false;
            }
        }
        for s in 0..self.sets.len() {
            let p = self.pattern(s, v);
            if !self.is_present(s, p) {
                self.present[s][p / 64] |= 1 << (p % 64);
                self.counts[s] += 1;
            }
        }
        true
    }

    fn first_missing(&self, set: usize) -> usize {
        (0..self.full as usize)
            .find(|&p| !self.is_present(set, p))
            .expect("a tracked set is never completed")
    }
}

/// A cover built greedily: each part is seeded with the lexicographically
/// least uncovered string and absorbs every later uncovered string that
/// keeps it from shattering a `(bound-1)`-set.
pub fn cover_greedy(params: &IdealParams) -> Result<CoverCertificate> {
    let n = params.width();
    if n > GREEDY_WIDTH_LIMIT {
        return Err(Error::Capability(format!(
            "greedy cover supports width <= {GREEDY_WIDTH_LIMIT}, got {n}"
        )));
    }
    require_feasible(params)?;
    let k = params.forbidden_size();
    let size = 1usize << n;
    if k > n {
        return CoverCertificate::from_parts(*params, vec![Family::cube(n)]);
    }
    let mut tracker = PatternTracker::new(n, k);
    let mut covered = vec![false; size];
    let mut parts = Vec::new();
    let mut witnesses = Vec::new();
    let mut cursor = 0usize;
    loop {
        while cursor < size && covered[cursor] {
            cursor += 1;
        }
        if cursor == size {
            break;
        }
        tracker.reset();
        let mut elems = Vec::new();
        for (v, &done) in covered.iter().enumerate().skip(cursor) {
            if !done && tracker.try_add(v as u32) {
                elems.push(v as u64);
            }
        }
        for &v in &elems {
            covered[v as usize] = true;
        }
        let part = family_from_ints(n, elems);
        let reps = class_representatives(&part);
        let map = if reps.len() == n {
            // every coordinate is its own class: read the tracker directly
            (0..tracker.sets.len())
                .map(|s| MissEntry {
                    coords: CoordSet::new(n, tracker.sets[s].clone()).expect("valid"),
                    pattern: BitString::from_int(tracker.first_missing(s) as u64, k),
                })
                .collect()
        } else {
            crate::ideal::witness_map(&part, k).expect("greedy parts stay in the ideal")
        };
        parts.push(part);
        witnesses.push(map);
    }
    Ok(CoverCertificate {
        params: *params,
        parts,
        witnesses,
    })
}
