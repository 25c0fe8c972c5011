//! Binomials and colexicographic subset enumeration.

use alloc::vec::Vec;

/// `C(n, k)`, or `None` if it does not fit in a `u128`.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // C(n, i+1) = C(n, i) * (n - i) / (i + 1); cancel first so only a
        // result that truly overflows fails
        let d = (i + 1) as u128;
        let g = gcd(acc, d);
        acc = (acc / g).checked_mul((n - i) as u128 / (d / g))?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Size-`k` subsets of `0..n` in colexicographic order, as sorted index
/// vectors.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // advance: bump the lowest element that has room below its successor
        let k = self.current.len();
        let mut i = 0;
        loop {
            if i == k {
                self.done = true;
                break;
            }
            let limit = if i + 1 < k { self.current[i + 1] } else { self.n };
            if self.current[i] + 1 < limit {
                self.current[i] += 1;
                for (j, slot) in self.current[..i].iter_mut().enumerate() {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

/// Size-`k` subsets of `0..n` (n ≤ 64) as bitmasks, in colexicographic
/// order (which is increasing numeric order of the masks).
pub fn colex_masks(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 64, "mask enumeration supports at most 64 elements");
    let limit_bit = n;
    let first = if k > n {
        None
    } else if k == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << k) - 1)
    };
    core::iter::successors(first, move |&mask| {
        if mask == 0 {
            return None;
        }
        // Gosper's hack
        let c = mask & mask.wrapping_neg();
        let r = mask.checked_add(c)?;
        let next = (((r ^ mask) >> 2) / c) | r;
        if limit_bit < 64 && next >> limit_bit != 0 {
            None
        } else {
            Some(next)
        }
    })
}

pub fn mask_to_indices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

pub fn indices_to_mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |acc, &i| acc | (1u64 << i))
}

/// Gathers the bits of `value` selected by `mask` into the low bits of the
/// result, lowest selected bit first.
#[inline]
pub fn pext(value: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut bit = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if value & low != 0 {
            out |= 1u64 << bit;
        }
        bit += 1;
        m ^= low;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(16, 8), Some(12870));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(binomial(127, 63), Some(11_975_573_020_964_041_433_067_793_888_190_275_875));
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn combinations_are_colex() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(3, 0).collect::<Vec<_>>(), vec![vec![]]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn masks_agree_with_index_enumeration() {
        for n in 0..=8 {
            for k in 0..=n + 1 {
                let a: Vec<_> = colex_masks(n, k).map(mask_to_indices).collect();
                let b: Vec<_> = Combinations::new(n, k).collect();
                assert_eq!(a, b, "n={n} k={k}");
            }
        }
        assert_eq!(colex_masks(64, 63).count(), 64);
    }

    #[test]
    fn pext_gathers_low_first() {
        assert_eq!(pext(0b1010_1100, 0b1111_0000), 0b1010);
        assert_eq!(pext(0b101, 0b101), 0b11);
    }
}
