use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::eval::Evaluator;
use super::structure::FiniteStructure;
use super::syntax::PartitionedFormula;
use crate::bits::BitString;
use crate::dimension::{vc_dimension, DimensionReport, ENUMERATION_WIDTH_CAP};
use crate::error::{Error, Result};
use crate::family::Family;

/// Upper limit on the number of parameter tuples enumerated.
pub const PARAMETER_LIMIT: usize = 1 << 20;

/// The family `{ phi(M^x; b) : b in M^y }` with its coordinate labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinableFamily {
    pub family: Family,
    /// Coordinate `i` is the x-tuple `x_tuples[i]` (lexicographic order).
    pub x_tuples: Vec<Vec<usize>>,
    /// Lexicographically first parameter tuple realizing each member.
    pub realizers: BTreeMap<BitString, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaDimension {
    pub family: Family,
    pub report: DimensionReport,
    /// The shattered x-tuples `a_0, …, a_{n-1}`.
    pub shattered: Vec<Vec<usize>>,
    /// For each pattern `I` (bit `i` set iff `i ∈ I`), a parameter tuple
    /// `b_I` with `phi(a_i; b_I)` true exactly for `i ∈ I`.
    pub realizers: Vec<(BitString, Vec<usize>)>,
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

fn checked_pow(n: usize, e: usize) -> Option<usize> {
    (0..e).try_fold(1usize, |acc, _| acc.checked_mul(n))
}

pub fn definable_family(structure: &FiniteStructure, formula: &PartitionedFormula) -> Result<DefinableFamily> {
    let n = structure.universe_size();
    let width = checked_pow(n, formula.x_vars.len()).filter(|&w| w <= ENUMERATION_WIDTH_CAP);
    let Some(width) = width else {
        return Err(Error::Capability(format!(
            "{n}^{} object tuples exceed the width cap {ENUMERATION_WIDTH_CAP}",
            formula.x_vars.len()
        )));
    };
    if checked_pow(n, formula.y_vars.len()).is_none_or(|p| p > PARAMETER_LIMIT) {
        return Err(Error::Capability(format!(
            "{n}^{} parameter tuples exceed the limit {PARAMETER_LIMIT}",
            formula.y_vars.len()
        )));
    }
    let mut evaluator = Evaluator::new(structure, formula)?;
    let x_tuples = tuples(n, formula.x_vars.len());
    let mut realizers: BTreeMap<BitString, Vec<usize>> = BTreeMap::new();
    for b in tuples(n, formula.y_vars.len()) {
        let mut member = BitString::zeros(width);
        for (i, a) in x_tuples.iter().enumerate() {
            if evaluator.eval(a, &b)? {
                member.set(i, true);
            }
        }
        realizers.entry(member).or_insert(b);
    }
    let family = Family::new(width, realizers.keys().cloned())?;
    Ok(DefinableFamily {
        family,
        x_tuples,
        realizers,
    })
}

/// VC dimension of the definable family, with the witness re-expressed
/// as object tuples and one parameter tuple per pattern.
pub fn formula_vc_dimension(structure: &FiniteStructure, formula: &PartitionedFormula) -> Result<FormulaDimension> {
    let def = definable_family(structure, formula)?;
    let report = vc_dimension(&def.family);
    let mut shattered = Vec::new();
    let mut realizers = Vec::new();
    if let Some(witness) = &report.witness {
        let coords = witness.coords();
        shattered = coords.iter().map(|&c| def.x_tuples[c].clone()).collect();
        for p in 0..1u64 << coords.len() {
            let pattern = BitString::from_int(p, coords.len());
            let (_, b) = def
                .realizers
                .iter()
                .find(|(m, _)| m.select(coords) == pattern)
                .expect("a shattered set realizes every pattern");
            realizers.push((pattern, b.clone()));
        }
    }
    Ok(FormulaDimension {
        family: def.family,
        report,
        shattered,
        realizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::{evaluate, parse_formula};
    use std::string::ToString;

    fn members(d: &DefinableFamily) -> Vec<alloc::string::String> {
        d.family.members().iter().map(|m| m.to_string()).collect()
    }

    #[test]
    fn families_over_four_elements() {
        let m = FiniteStructure::linear_order(4).unwrap();
        let eq = definable_family(&m, &parse_formula("x = y", "x;y").unwrap()).unwrap();
        assert_eq!(members(&eq), ["0001", "0010", "0100", "1000"]);
        let taut = definable_family(&m, &parse_formula("x = x", "x;y").unwrap()).unwrap();
        assert_eq!(members(&taut), ["1111"]);
        let lt = definable_family(&m, &parse_formula("x < y", "x;y").unwrap()).unwrap();
        assert_eq!(members(&lt), ["0000", "1000", "1100", "1110"]);
        assert_eq!(lt.realizers[&"1100".parse().unwrap()], vec![2]);
    }

    #[test]
    fn dimensions_and_witnesses() {
        let m = FiniteStructure::linear_order(4).unwrap();
        for (text, expected) in [("x = y", 1), ("x < y", 1), ("x = x", 0)] {
            let f = parse_formula(text, "x;y").unwrap();
            let d = formula_vc_dimension(&m, &f).unwrap();
            assert_eq!(d.report.vc_dim, expected, "{text}");
            assert_eq!(d.realizers.len(), 1 << expected);
            for (pattern, b) in &d.realizers {
                for (i, a) in d.shattered.iter().enumerate() {
                    assert_eq!(evaluate(&m, &f, a, b).unwrap(), pattern.get(i));
                }
            }
        }
    }

    #[test]
    fn width_cap() {
        let m = FiniteStructure::linear_order(5).unwrap();
        let f = parse_formula("x1 < x2", "x1,x2;").unwrap();
        assert!(matches!(definable_family(&m, &f), Err(Error::Capability(_))));
        let f = parse_formula("x < y", "x;").unwrap_err();
        assert!(matches!(f, Error::InvalidArgument(_)));
    }
}
