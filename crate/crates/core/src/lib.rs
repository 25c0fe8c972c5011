//! Finite shattering combinatorics over families of binary strings.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`family`]: families, coordinate sets, restriction and shattering;
//! * [`dimension`]: shatter functions, VC/string dimension, Sauer–Shelah
//!   bounds and nowhere-density witnesses;
//! * [`ideal`] and [`cover`]: membership in the finite string ideal, the
//!   union lemma, and covers of the cube by low-dimension families;
//! * [`tree`]: the recursive trees whose large leaf sets always shatter;
//! * [`fo`]: first-order formulas over finite structures and their
//!   definable families.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bits;
pub mod columns;
pub mod combin;
pub mod cover;
pub mod dimension;
pub mod error;
pub mod family;
pub mod fo;
pub mod ideal;
pub mod tree;

pub use bits::BitString;
pub use dimension::{
    measure_upper_bound, nowhere_density_witness, sauer_bound, shatter_function, vc_dimension,
    DimensionReport, Dyadic,
};
pub use error::{Error, Result};
pub use family::{restrict, shatters, CoordSet, Family};
pub use ideal::{
    in_ideal, log2_least, sauer_lower_bound, union_lemma_check, CoverCertificate, IdealParams,
    UnionWitness,
};
