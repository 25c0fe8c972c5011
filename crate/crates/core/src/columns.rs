//! Column view of a family and the pruned search for shattered sets.
//!
//! A coordinate is stored as the bitset of members that carry a `1` there.
//! Two coordinates whose columns are equal or complementary are
//! interchangeable for shattering purposes, and constant columns are never
//! part of a shattered set, so searches run over one representative per
//! class (the lowest coordinate of the class).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::family::Family;

/// Column-major bit matrix: `columns()` columns, each a bitset over
/// `members()` rows.
#[derive(Clone, Debug)]
pub struct ColumnMatrix {
    members: usize,
    stride: usize,
    data: Vec<u64>,
    coords: Vec<usize>,
}

/// Where each original coordinate landed after reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnClass {
    Constant(bool),
    /// Index of the representative column, and whether this coordinate is
    /// its complement.
    Rep { index: usize, flipped: bool },
}

impl ColumnMatrix {
    pub fn from_family(family: &Family) -> Self {
        let members = family.len();
        let stride = members.div_ceil(64).max(1);
        let width = family.width();
        let mut data = vec![0u64; stride * width];
        for (row, m) in family.members().iter().enumerate() {
            for (w, &word) in m.words().iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let col = w * 64 + b;
                    data[col * stride + row / 64] |= 1u64 << (row % 64);
                }
            }
        }
        ColumnMatrix {
            members,
            stride,
            data,
            coords: (0..width).collect(),
        }
    }

    /// Columns over at most 64 rows given directly as masks.
    pub fn from_masks(members: usize, masks: &[u64], coords: Vec<usize>) -> Self {
        assert!(members <= 64);
        assert_eq!(masks.len(), coords.len());
        ColumnMatrix {
            members,
            stride: 1,
            data: masks.to_vec(),
            coords,
        }
    }

    #[inline]
    pub fn members(&self) -> usize {
        self.members
    }

    #[inline]
    pub fn columns(&self) -> usize {
        self.coords.len()
    }

    /// Original coordinate of each stored column.
    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    #[inline]
    fn column(&self, c: usize) -> &[u64] {
        &self.data[c * self.stride..(c + 1) * self.stride]
    }

    #[inline]
    fn bit(&self, c: usize, row: usize) -> bool {
        (self.data[c * self.stride + row / 64] >> (row % 64)) & 1 == 1
    }

    /// Keeps one column per identical/complementary class, dropping
    /// constant columns. Returns the reduced matrix and, for every input
    /// column, its class.
    pub fn reduce(&self) -> (ColumnMatrix, Vec<ColumnClass>) {
        let tail_mask = if self.members.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (self.members % 64)) - 1
        };
        let mut seen: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        let mut classes = Vec::with_capacity(self.columns());
        let mut data = Vec::new();
        let mut coords = Vec::new();
        for c in 0..self.columns() {
            let col = self.column(c);
            let flipped = self.members > 0 && col[0] & 1 == 1;
            let mut key: Vec<u64> = col.to_vec();
            if flipped {
                for w in key.iter_mut() {
                    *w = !*w;
                }
            }
            if let Some(last) = key.last_mut() {
                *last &= tail_mask;
            }
            if key.iter().all(|&w| w == 0) {
                classes.push(ColumnClass::Constant(flipped));
                continue;
            }
            let next = coords.len();
            let index = *seen.entry(key.clone()).or_insert_with(|| {
                data.extend_from_slice(&key);
                coords.push(self.coords[c]);
                next
            });
            classes.push(ColumnClass::Rep { index, flipped });
        }
        (
            ColumnMatrix {
                members: self.members,
                stride: self.stride,
                data,
                coords,
            },
            classes,
        )
    }

    fn refine(&self, c: usize, prev: &[u32], prev_classes: usize, scratch: &mut Scratch) -> usize {
        scratch.remap.clear();
        scratch.remap.resize(2 * prev_classes, u32::MAX);
        scratch.counts.clear();
        scratch.ids.clear();
        let col = self.column(c);
        let mut next = 0u32;
        for (row, &class) in prev.iter().enumerate() {
            let bit = (col[row / 64] >> (row % 64)) & 1;
            let key = 2 * class as usize + bit as usize;
            let mut id = scratch.remap[key];
            if id == u32::MAX {
                id = next;
                scratch.remap[key] = id;
                scratch.counts.push(0);
                next += 1;
            }
            scratch.counts[id as usize] += 1;
            scratch.ids.push(id);
        }
        next as usize
    }

    /// The colexicographically first set of `k` columns that is shattered,
    /// as column positions in this matrix.
    pub fn first_shattered(&self, k: usize) -> Option<Vec<usize>> {
        if self.members == 0 {
            return None;
        }
        if k == 0 {
            return Some(Vec::new());
        }
        if k > self.columns() || k >= 32 || self.members < 1usize << k {
            return None;
        }
        let mut search = ShatterDfs {
            matrix: self,
            k,
            chosen: vec![0; k],
            levels: (0..=k).map(|_| Scratch::default()).collect(),
        };
        search.levels[0].ids = vec![0; self.members];
        search.levels[0].counts = vec![self.members as u32];
        if search.descend(0, self.columns()) {
            let mut set = search.chosen;
            set.reverse();
            Some(set)
        } else {
            None
        }
    }

    /// `max |restriction to S|` over column sets `S` of each size
    /// `0..=max_k`, for columns of this matrix.
    pub fn trace_counts(&self, max_k: usize) -> Vec<u64> {
        let m = self.members as u64;
        let mut best = vec![0u64; max_k + 1];
        if self.members == 0 {
            return best;
        }
        let mut dfs = TraceDfs {
            matrix: self,
            max_k,
            best: &mut best,
            levels: (0..=max_k).map(|_| Scratch::default()).collect(),
        };
        dfs.levels[0].ids = vec![0; self.members];
        dfs.visit(0, 0, 1);
        // beyond the reachable sizes every extension adds nothing new
        let mut running = 0;
        for v in best.iter_mut() {
            running = running.max(*v);
            *v = running.min(m);
        }
        best
    }

    /// Number of distinct rows restricted to the given columns.
    pub fn distinct_on(&self, cols: &[usize]) -> usize {
        let mut rows: Vec<Vec<bool>> = (0..self.members)
            .map(|r| cols.iter().map(|&c| self.bit(c, r)).collect())
            .collect();
        rows.sort_unstable();
        rows.dedup();
        rows.len()
    }
}

#[derive(Default, Debug)]
struct Scratch {
    ids: Vec<u32>,
    counts: Vec<u32>,
    remap: Vec<u32>,
}

struct ShatterDfs<'a> {
    matrix: &'a ColumnMatrix,
    k: usize,
    chosen: Vec<usize>,
    levels: Vec<Scratch>,
}

impl ShatterDfs<'_> {
    /// Chooses the next-largest element below `upper`; elements are picked
    /// from the top down and each slot is scanned upward, which yields the
    /// colexicographic order.
    fn descend(&mut self, depth: usize, upper: usize) -> bool {
        if depth == self.k {
            return true;
        }
        let still_needed = self.k - depth - 1;
        let target = 1usize << (depth + 1);
        let min_size = 1u32 << still_needed;
        for c in still_needed..upper {
            let (head, tail) = self.levels.split_at_mut(depth + 1);
            let prev = &head[depth];
            let next = &mut tail[0];
            let classes = self.matrix.refine(c, &prev.ids, 1 << depth, next);
            if classes != target || next.counts.iter().any(|&n| n < min_size) {
                continue;
            }
            self.chosen[depth] = c;
            if self.descend(depth + 1, c) {
                return true;
            }
        }
        false
    }
}

struct TraceDfs<'a, 'b> {
    matrix: &'a ColumnMatrix,
    max_k: usize,
    best: &'b mut Vec<u64>,
    levels: Vec<Scratch>,
}

impl TraceDfs<'_, '_> {
    fn visit(&mut self, depth: usize, start: usize, classes: usize) {
        let m = self.matrix.members as u64;
        let c = classes as u64;
        if c > self.best[depth] {
            self.best[depth] = c;
        }
        if c == m {
            for v in self.best[depth..].iter_mut() {
                *v = m;
            }
            return;
        }
        if depth == self.max_k || start >= self.matrix.columns() {
            return;
        }
        let reachable = (self.matrix.columns() - start).min(self.max_k - depth);
        let promising = (1..=reachable).any(|extra| {
            let size = depth + extra;
            let cap = if size < 63 { 1u64 << size } else { u64::MAX };
            let bound = c.saturating_mul(1u64 << extra.min(62)).min(m).min(cap);
            bound > self.best[size]
        });
        if !promising {
            return;
        }
        for col in start..self.matrix.columns() {
            let (head, tail) = self.levels.split_at_mut(depth + 1);
            let next_classes = self
                .matrix
                .refine(col, &head[depth].ids, classes, &mut tail[0]);
            if next_classes == classes {
                // the column is a function of the current classes, so every
                // superset through it is matched by a smaller one without it
                continue;
            }
            self.visit(depth + 1, col + 1, next_classes);
        }
    }
}
