use std::collections::BTreeMap;

use shatterkit_core::fo::FiniteStructure;

use super::{lines, Line};
use crate::error::{Error, Result};

/// Parses a `.st` structure: `universe <N>`, then `relation <name>
/// <arity>` blocks with one space-separated tuple per line.
pub fn parse_structure(text: &str) -> Result<FiniteStructure> {
    let lines: Vec<Line<'_>> = lines(text).filter(|l| !l.is_comment()).collect();
    let Some((header, mut rest)) = lines.split_first() else {
        return Err(Error::parse(1, "missing `universe <N>` line"));
    };
    let n: usize = header.keyed("universe")?;
    let mut structure = FiniteStructure::new(n).map_err(|e| header.error(e.to_string()))?;
    while let Some((decl, body)) = rest.split_first() {
        let words: Vec<&str> = decl.text.split_whitespace().collect();
        let ["relation", name, arity] = words[..] else {
            return Err(decl.error("expected `relation <name> <arity>`"));
        };
        let arity: usize = arity
            .parse()
            .ok()
            .filter(|&a| a > 0)
            .ok_or_else(|| decl.error(format!("invalid arity `{arity}`")))?;
        if structure.relation(name).is_some() {
            return Err(decl.error(format!("relation {name} declared twice")));
        }
        let end = body
            .iter()
            .position(|l| l.text.starts_with("relation"))
            .unwrap_or(body.len());
        let mut tuples: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for line in &body[..end] {
            let tuple = line
                .text
                .split_whitespace()
                .map(|w| {
                    w.parse::<usize>()
                        .ok()
                        .filter(|&e| e < n)
                        .ok_or_else(|| line.error(format!("`{w}` is not an element of 0..{n}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if tuple.len() != arity {
                return Err(line.error(format!("tuple has {} entries but {name} has arity {arity}", tuple.len())));
            }
            if let Some(first) = tuples.insert(tuple, line.number) {
                return Err(line.error(format!("duplicate tuple (first at line {first})")));
            }
        }
        structure
            .add_relation(name, arity, tuples.into_keys())
            .map_err(|e| decl.error(e.to_string()))?;
        rest = &body[end..];
    }
    Ok(structure)
}

pub fn emit_structure(structure: &FiniteStructure) -> String {
    let mut out = format!("universe {}\n", structure.universe_size());
    for (name, rel) in structure.relations() {
        out.push_str(&format!("relation {name} {}\n", rel.arity));
        for t in &rel.tuples {
            let t: Vec<String> = t.iter().map(|e| e.to_string()).collect();
            out.push_str(&t.join(" "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_round_trip() {
        let m = FiniteStructure::linear_order(3).unwrap();
        let text = emit_structure(&m);
        assert_eq!(text, "universe 3\nrelation < 2\n0 1\n0 2\n1 2\n");
        assert_eq!(parse_structure(&text).unwrap(), m);
    }

    #[test]
    fn unsorted_input_is_canonicalized() {
        let m = parse_structure("universe 3\n# edges\nrelation E 2\n2 1\n0 1\nrelation P 1\n").unwrap();
        assert_eq!(emit_structure(&m), "universe 3\nrelation E 2\n0 1\n2 1\nrelation P 1\n");
    }

    #[test]
    fn malformed() {
        for (text, line) in [
            ("", 1),
            ("universe 0\n", 1),
            ("universe 3\nrel E 2\n", 2),
            ("universe 3\nrelation E 0\n", 2),
            ("universe 3\nrelation E 2\n0 3\n", 3),
            ("universe 3\nrelation E 2\n0\n", 3),
            ("universe 3\nrelation E 2\n0 1\n0 1\n", 4),
            ("universe 3\nrelation E 1\nrelation E 1\n", 3),
        ] {
            match parse_structure(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
