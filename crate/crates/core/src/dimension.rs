//! Shatter functions, VC and string dimension, and the bounds that go
//! with them.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitString;
use crate::columns::ColumnMatrix;
use crate::combin::binomial;
use crate::error::{invalid, Error, Result};
use crate::family::{CoordSet, Family};

/// Operational cap on the number of distinct non-constant column classes
/// for operations that enumerate every coordinate subset.
pub const ENUMERATION_WIDTH_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    /// Classical VC dimension, `-1` for the empty family.
    pub vc_dim: i64,
    /// Least size of a non-shattered set; always `vc_dim + 1`.
    pub string_dim: u64,
    /// Colexicographically first shattered set of size `vc_dim`.
    pub witness: Option<CoordSet>,
    /// `f(0..=width)`, or `None` when the column classes exceed
    /// [`ENUMERATION_WIDTH_CAP`].
    pub shatter_fn: Option<Vec<u64>>,
}

fn reduced(family: &Family) -> ColumnMatrix {
    ColumnMatrix::from_family(family).reduce().0
}

/// `f(k) = max |F restricted to A|` over `|A| = k`, for `k = 0..=max_k`.
pub fn shatter_function(family: &Family, max_k: usize) -> Result<Vec<u64>> {
    if max_k > family.width() {
        return Err(invalid!(
            "max_k = {max_k} exceeds the family width {}",
            family.width()
        ));
    }
    let reps = reduced(family);
    shatter_function_reduced(&reps, max_k)
}

fn shatter_function_reduced(reps: &ColumnMatrix, max_k: usize) -> Result<Vec<u64>> {
    if reps.columns() > ENUMERATION_WIDTH_CAP {
        return Err(Error::Capability(format!(
            "{} distinct column classes exceed the enumeration cap of {ENUMERATION_WIDTH_CAP}",
            reps.columns()
        )));
    }
    Ok(reps.trace_counts(max_k))
}

/// Largest shattered set size together with a colexicographically first
/// witness and the shatter function.
pub fn vc_dimension(family: &Family) -> DimensionReport {
    let reps = reduced(family);
    let mut vc_dim: i64 = -1;
    let mut witness = None;
    if !family.is_empty() {
        vc_dim = 0;
        witness = Some(CoordSet::empty(family.width()));
        let mut k = 1;
        // shattering a k-set needs at least 2^k members
        while k < 32 && family.len() >= 1usize << k {
            match reps.first_shattered(k) {
                Some(cols) => {
                    let coords = cols.iter().map(|&c| reps.coords()[c]).collect();
                    witness = Some(
                        CoordSet::new(family.width(), coords)
                            .expect("representatives are distinct in-range coordinates"),
                    );
                    vc_dim = k as i64;
                    k += 1;
                }
                None => break,
            }
        }
    }
    DimensionReport {
        vc_dim,
        string_dim: (vc_dim + 1) as u64,
        witness,
        shatter_fn: shatter_function_reduced(&reps, family.width()).ok(),
    }
}

/// Whether some `k`-subset of coordinates is shattered, returning the
/// colexicographically first one.
pub fn find_shattered(family: &Family, k: usize) -> Option<CoordSet> {
    let reps = reduced(family);
    reps.first_shattered(k).map(|cols| {
        CoordSet::new(family.width(), cols.iter().map(|&c| reps.coords()[c]).collect())
            .expect("representatives are distinct in-range coordinates")
    })
}

/// `sum_{i<d} C(n, i)`. Errors only if the sum leaves the `u128` range.
pub fn sauer_bound(d: u64, n: u64) -> Result<u128> {
    let mut total: u128 = 0;
    for i in 0..d.min(n + 1) {
        let term = binomial(n, i).ok_or_else(|| Error::Overflow(format!("C({n},{i})")))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::Overflow(format!("sauer_bound({d},{n})")))?;
    }
    Ok(total)
}

/// A non-negative dyadic rational `numerator / 2^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub numerator: u128,
    pub exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: u128, exponent: u32) -> Self {
        Dyadic {
            numerator,
            exponent,
        }
    }

    /// Lowest terms.
    pub fn reduced(self) -> Self {
        let mut d = self;
        while d.exponent > 0 && d.numerator.is_multiple_of(2) {
            d.numerator /= 2;
            d.exponent -= 1;
        }
        if d.numerator == 0 {
            d.exponent = 0;
        }
        d
    }

    pub fn to_f64(self) -> f64 {
        let mut v = self.numerator as f64;
        for _ in 0..self.exponent {
            v /= 2.0;
        }
        v
    }

    /// Exact comparison with `other`.
    pub fn cmp_exact(&self, other: &Dyadic) -> core::cmp::Ordering {
        // bring both to the larger exponent; numerators are < 2^127 in use
        let e = self.exponent.max(other.exponent);
        let a = self.numerator << (e - self.exponent);
        let b = other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.exponent == 0 {
            write!(f, "{}", r.numerator)
        } else {
            write!(f, "{}/{}", r.numerator, 1u128 << r.exponent)
        }
    }
}

/// `sauer_bound(string_dim(F), width) / 2^width`, an upper bound on the
/// counting density `|F| / 2^width`.
pub fn measure_upper_bound(family: &Family) -> Result<Dyadic> {
    let n = family.width();
    if n > 126 {
        return Err(Error::Overflow(format!("width {n} exceeds 126 for exact densities")));
    }
    let report = vc_dimension(family);
    let bound = sauer_bound(report.string_dim, n as u64)?;
    assert!(
        family.len() as u128 <= bound,
        "Sauer-Shelah violated: |F| = {} > {bound}",
        family.len()
    );
    Ok(Dyadic::new(bound, n as u32))
}

/// An extension `t` of `node` such that no member starts with `t`, or
/// `None` if every full-length extension of `node` is a member.
///
/// Among witnesses, children of a node are tried before deeper strings
/// and `0` before `1`.
pub fn nowhere_density_witness(family: &Family, node: &BitString) -> Result<Option<BitString>> {
    if node.len() > family.width() {
        return Err(invalid!(
            "node of length {} is longer than the width {}",
            node.len(),
            family.width()
        ));
    }
    let members = family.members();
    let lo = members.partition_point(|m| m.prefix(node.len()) < *node);
    let hi = members.partition_point(|m| m.prefix(node.len()) <= *node);
    if lo == hi {
        return Ok(Some(node.clone()));
    }
    Ok(missing_below(&members[lo..hi], node.clone(), family.width()))
}

/// `block` is nonempty, sorted, and every member extends `prefix`.
fn missing_below(block: &[BitString], prefix: BitString, width: usize) -> Option<BitString> {
    let depth = prefix.len();
    if depth == width {
        return None;
    }
    let split = block.partition_point(|m| !m.get(depth));
    let (zeros, ones) = block.split_at(split);
    if zeros.is_empty() {
        return Some(prefix.with(false));
    }
    if ones.is_empty() {
        return Some(prefix.with(true));
    }
    missing_below(zeros, prefix.with(false), width)
        .or_else(|| missing_below(ones, prefix.with(true), width))
}
