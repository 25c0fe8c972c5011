use shatterkit_core::tree::{BlockCert, ShatterTree};

use super::{emit_member, lines, parse_member, Line};
use crate::error::{Error, Result};

/// Parses a `.tree` file: `stage`, `height`, the leaves as a `.fam` block
/// in index order (duplicates allowed, so damaged trees can be loaded
/// and rejected by verification), then `block` lines.
pub fn parse_tree(text: &str) -> Result<ShatterTree> {
    let lines: Vec<Line<'_>> = lines(text).filter(|l| !l.is_comment()).collect();
    let mut it = lines.iter();
    let stage_line = next(&mut it, "stage", 0)?;
    let stage: usize = stage_line.keyed("stage")?;
    if stage >= 64 {
        return Err(stage_line.error(format!("stage {stage} is too large")));
    }
    let height_line = next(&mut it, "height", stage_line.number)?;
    let height: usize = height_line.keyed("height")?;
    let width_line = next(&mut it, "width", height_line.number)?;
    let width: usize = width_line.keyed("width")?;
    if width != height {
        return Err(width_line.error(format!("leaf width {width} differs from height {height}")));
    }
    let rest = it.as_slice();
    let end = rest
        .iter()
        .position(|l| l.text.starts_with("block"))
        .unwrap_or(rest.len());
    let leaves = rest[..end]
        .iter()
        .map(|l| parse_member(l, width))
        .collect::<Result<Vec<_>>>()?;
    if leaves.len() != 1 << stage {
        return Err(width_line.error(format!(
            "stage {stage} needs {} leaves, found {}",
            1u64 << stage,
            leaves.len()
        )));
    }
    let blocks = rest[end..]
        .iter()
        .map(|l| parse_block_line(l, height))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShatterTree {
        stage,
        height,
        leaves,
        blocks,
    })
}

fn next<'a>(it: &mut std::slice::Iter<'_, Line<'a>>, what: &str, after: usize) -> Result<Line<'a>> {
    it.next()
        .copied()
        .ok_or_else(|| Error::parse(after + 1, format!("missing `{what}` line")))
}

fn parse_block_line(line: &Line<'_>, height: usize) -> Result<BlockCert> {
    let mut words = line.text.split_whitespace();
    if words.next() != Some("block") {
        return Err(line.error("expected `block <stage> <m> <coord_start> <indices...>`"));
    }
    let numbers = words
        .map(|w| w.parse::<usize>().map_err(|_| line.error(format!("invalid number `{w}`"))))
        .collect::<Result<Vec<_>>>()?;
    let [built_at_stage, m, coord_start, ref subset @ ..] = numbers[..] else {
        return Err(line.error("a block needs a stage, m and a coordinate start"));
    };
    if m == 0 || m >= 64 || subset.len() as u64 != 1u64 << m {
        return Err(line.error(format!("a block with m = {m} needs 2^m indices, found {}", subset.len())));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(line.error("block indices must be strictly increasing"));
    }
    if coord_start.checked_add(m).is_none_or(|end| end > height) {
        return Err(line.error(format!("block at {coord_start} with m = {m} exceeds the height {height}")));
    }
    Ok(BlockCert {
        built_at_stage,
        m,
        subset: subset.to_vec(),
        coord_start,
    })
}

pub fn emit_tree(tree: &ShatterTree) -> String {
    let mut out = format!("stage {}\nheight {}\nwidth {}\n", tree.stage, tree.height, tree.height);
    for leaf in &tree.leaves {
        emit_member(leaf, &mut out);
    }
    for b in &tree.blocks {
        out.push_str(&format!("block {} {} {}", b.built_at_stage, b.m, b.coord_start));
        for i in &b.subset {
            out.push_str(&format!(" {i}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use shatterkit_core::tree::build_tree;

    #[test]
    fn stage_two_text() {
        let t = build_tree(2).unwrap();
        let text = emit_tree(&t);
        assert_eq!(
            text,
            "stage 2\nheight 8\nwidth 8\n00000000\n01100000\n10011000\n11000111\n\
             block 1 1 2 0 1\nblock 1 1 3 0 2\nblock 1 1 4 1 2\n\
             block 1 1 5 0 3\nblock 1 1 6 1 3\nblock 1 1 7 2 3\n"
        );
        assert_eq!(parse_tree(&text).unwrap(), t);
    }

    #[test]
    fn stage_zero() {
        let t = build_tree(0).unwrap();
        assert_eq!(emit_tree(&t), "stage 0\nheight 0\nwidth 0\n-\n");
        assert_eq!(parse_tree(&emit_tree(&t)).unwrap(), t);
    }

    #[test]
    fn duplicate_leaves_load() {
        let t = parse_tree("stage 1\nheight 1\nwidth 1\n0\n0\n").unwrap();
        assert_eq!(t.leaves.len(), 2);
    }

    #[test]
    fn malformed() {
        for (text, line) in [
            ("stage 1\n", 2),
            ("stage 1\nheight 1\nwidth 2\n", 3),
            ("stage 1\nheight 1\nwidth 1\n0\n", 3),
            ("stage 1\nheight 1\nwidth 1\n0\n1\nblock 0 1 0 0\n", 6),
            ("stage 1\nheight 1\nwidth 1\n0\n1\nblock 0 1 1 0 1\n", 6),
            ("stage 1\nheight 2\nwidth 2\n00\n11\nblock 0 1 0 1 0\n", 6),
            ("stage 1\nheight 2\nwidth 2\n00\n11\nblock 0 x\n", 6),
        ] {
            match parse_tree(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
