use shatterkit_core::ideal::MissEntry;
use shatterkit_core::{BitString, CoordSet, CoverCertificate, IdealParams};

use super::fam::{emit_family, parse_block};
use super::{lines, Line};
use crate::error::{Error, Result};

/// Parses a `.cover` certificate: `width`, `bound` and `parts` headers,
/// then one `.fam` block per part, each introduced by `---`. Witness
/// entries are the comment lines `# miss <coords> <pattern>` of a block.
pub fn parse_cover(text: &str) -> Result<CoverCertificate> {
    let all: Vec<Line<'_>> = lines(text).collect();
    let headers: Vec<Line<'_>> = all
        .iter()
        .copied()
        .take_while(|l| l.text != "---")
        .filter(|l| !l.is_comment())
        .collect();
    let [w, b, p] = headers[..] else {
        let at = headers.get(3).or(headers.last()).map_or(1, |l| l.number);
        return Err(Error::parse(at, "expected the headers `width`, `bound` and `parts`"));
    };
    let width: usize = w.keyed("width")?;
    let bound: usize = b.keyed("bound")?;
    let count: usize = p.keyed("parts")?;
    let params = IdealParams::new(width, bound).map_err(|e| b.error(e.to_string()))?;

    let mut rest = &all[all.iter().position(|l| l.text == "---").unwrap_or(all.len())..];
    let mut parts = Vec::new();
    let mut witnesses = Vec::new();
    while let Some((sep, body)) = rest.split_first() {
        let end = body.iter().position(|l| l.text == "---").unwrap_or(body.len());
        let (block, tail) = body.split_at(end);
        let mut entries = Vec::new();
        for line in block.iter().filter(|l| l.is_comment()) {
            if let Some(entry) = parse_miss(line, width)? {
                entries.push(entry);
            }
        }
        let members: Vec<Line<'_>> = block.iter().copied().filter(|l| !l.is_comment()).collect();
        let (part, _) = parse_block(&members, sep.number)?;
        if part.width() != width {
            return Err(members[0].error(format!("part width {} differs from {width}", part.width())));
        }
        parts.push(part);
        witnesses.push(entries);
        rest = tail;
    }
    if parts.len() != count {
        return Err(p.error(format!("header announces {count} parts, found {}", parts.len())));
    }
    Ok(CoverCertificate {
        params,
        parts,
        witnesses,
    })
}

/// `Some` for `# miss` lines, `None` for other comments.
fn parse_miss(line: &Line<'_>, width: usize) -> Result<Option<MissEntry>> {
    let mut words = line.text.trim_start_matches('#').split_whitespace();
    if words.next() != Some("miss") {
        return Ok(None);
    }
    let (Some(coords), Some(pattern), None) = (words.next(), words.next(), words.next()) else {
        return Err(line.error("expected `# miss <coords> <pattern>`"));
    };
    let coords: Vec<usize> = if coords == "-" {
        Vec::new()
    } else {
        coords
            .split(',')
            .map(|c| c.parse().map_err(|_| line.error(format!("invalid coordinate `{c}`"))))
            .collect::<Result<_>>()?
    };
    let coords = CoordSet::new(width, coords).map_err(|e| line.error(e.to_string()))?;
    let pattern: BitString = if pattern == "-" {
        BitString::new()
    } else {
        pattern
            .parse()
            .map_err(|_| line.error(format!("invalid pattern `{pattern}`")))?
    };
    Ok(Some(MissEntry { coords, pattern }))
}

pub fn emit_cover(cert: &CoverCertificate) -> String {
    let mut out = format!(
        "width {}\nbound {}\nparts {}\n",
        cert.params.width(),
        cert.params.bound(),
        cert.parts.len()
    );
    for (part, entries) in cert.parts.iter().zip(&cert.witnesses) {
        out.push_str("---\n");
        for e in entries {
            let coords = if e.coords.is_empty() {
                String::from("-")
            } else {
                e.coords
                    .coords()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let pattern = if e.pattern.is_empty() {
                String::from("-")
            } else {
                e.pattern.to_bit_string()
            };
            out.push_str(&format!("# miss {coords} {pattern}\n"));
        }
        out.push_str(&emit_family(part));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use shatterkit_core::cover::{cover_exact, cover_greedy};

    #[test]
    fn exact_round_trip() {
        let cert = cover_exact(&IdealParams::new(2, 3).unwrap()).unwrap();
        let text = emit_cover(&cert);
        let back = parse_cover(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(emit_cover(&back), text);
        back.validate().unwrap();
    }

    #[test]
    fn greedy_round_trip() {
        let cert = cover_greedy(&IdealParams::new(4, 3).unwrap()).unwrap();
        let back = parse_cover(&emit_cover(&cert)).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn hand_written() {
        let text = "width 2\nbound 2\nparts 1\n---\n# a note\n# miss 0 1\nwidth 2\n00\n";
        let cert = parse_cover(text).unwrap();
        assert_eq!(cert.witnesses[0].len(), 1);
        // covers only 00, so validation fails
        assert!(cert.validate().is_err());
    }

    #[test]
    fn malformed() {
        for (text, line) in [
            ("width 2\nbound 2\n", 2),
            ("width 2\nbound 9\nparts 0\n", 2),
            ("width 2\nbound 2\nparts 2\n---\nwidth 2\n00\n", 3),
            ("width 2\nbound 2\nparts 1\n---\n# miss 5 1\nwidth 2\n00\n", 5),
            ("width 2\nbound 2\nparts 1\n---\n# miss 0\nwidth 2\n00\n", 5),
            ("width 2\nbound 2\nparts 1\n---\nwidth 3\n000\n", 5),
            ("width 2\nbound 2\nparts 1\n---\n", 5),
        ] {
            match parse_cover(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
