use std::collections::BTreeMap;

use shatterkit_core::{BitString, Family};

use super::{emit_member, lines, parse_member, Line};
use crate::error::Result;

/// Parses a `.fam` file: a `width <n>` line, then one member per line.
/// Duplicate members are rejected.
pub fn parse_family(text: &str) -> Result<Family> {
    let lines: Vec<Line<'_>> = lines(text).filter(|l| !l.is_comment()).collect();
    let (family, rest) = parse_block(&lines, 0)?;
    if let Some(extra) = rest.first() {
        return Err(extra.error("unexpected input after the family"));
    }
    Ok(family)
}

/// A `width` header and its members, stopping at `block` or `---`.
pub(crate) fn parse_block<'a, 'b>(lines: &'b [Line<'a>], after: usize) -> Result<(Family, &'b [Line<'a>])> {
    let Some((header, rest)) = lines.split_first() else {
        return Err(crate::Error::parse(after + 1, "missing `width <n>` line"));
    };
    let width: usize = header.keyed("width")?;
    let end = rest
        .iter()
        .position(|l| l.text == "---" || l.text.starts_with("block"))
        .unwrap_or(rest.len());
    let mut seen: BTreeMap<BitString, usize> = BTreeMap::new();
    for line in &rest[..end] {
        let member = parse_member(line, width)?;
        if let Some(first) = seen.insert(member, line.number) {
            return Err(line.error(format!("duplicate member (first at line {first})")));
        }
    }
    let family = Family::new(width, seen.into_keys()).map_err(|e| header.error(e.to_string()))?;
    Ok((family, &rest[end..]))
}

pub fn emit_family(family: &Family) -> String {
    let mut out = format!("width {}\n", family.width());
    for m in family.members() {
        emit_member(m, &mut out);
    }
    out
}
