//! Line-oriented text formats.
//!
//! All four formats share the same lexical rules: blank lines are ignored,
//! lines starting with `#` are comments, and surrounding whitespace is
//! trimmed. Emitters produce a canonical form, so `emit(parse(emit(x)))`
//! is byte-identical to `emit(x)`.

mod cover;
mod fam;
mod st;
mod tree;

use std::fs;
use std::path::Path;
use std::str::FromStr;

use shatterkit_core::BitString;

use crate::error::{Error, Result};

pub use cover::{emit_cover, parse_cover};
pub use fam::{emit_family, parse_family};
pub use st::{emit_structure, parse_structure};
pub use tree::{emit_tree, parse_tree};

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

impl Line<'_> {
    pub fn is_comment(&self) -> bool {
        self.text.starts_with('#')
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.number, message)
    }

    /// The value of a `key value` line.
    pub fn keyed<T: FromStr>(&self, key: &str) -> Result<T> {
        let mut words = self.text.split_whitespace();
        if words.next() != Some(key) {
            return Err(self.error(format!("expected `{key} <value>`, found `{}`", self.text)));
        }
        let value = words
            .next()
            .ok_or_else(|| self.error(format!("`{key}` needs a value")))?;
        if words.next().is_some() {
            return Err(self.error(format!("trailing input after `{key} {value}`")));
        }
        value
            .parse()
            .map_err(|_| self.error(format!("invalid value `{value}` for `{key}`")))
    }
}

/// Nonblank lines, trimmed, with 1-based numbers.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            text: l.trim(),
        })
        .filter(|l| !l.text.is_empty())
}

/// A member of width `width`; the empty string is written `-`.
pub(crate) fn parse_member(line: &Line<'_>, width: usize) -> Result<BitString> {
    if line.text == "-" {
        return if width == 0 {
            Ok(BitString::new())
        } else {
            Err(line.error(format!("`-` denotes the empty string but the width is {width}")))
        };
    }
    if let Some(bad) = line.text.chars().find(|c| !matches!(c, '0' | '1')) {
        return Err(line.error(format!("unexpected character {bad:?} in member")));
    }
    if line.text.len() != width {
        return Err(line.error(format!(
            "member has length {} but the width is {width}",
            line.text.len()
        )));
    }
    Ok(BitString::from_bits(line.text.bytes().map(|b| b == b'1')))
}

pub(crate) fn emit_member(member: &BitString, out: &mut String) {
    if member.is_empty() {
        out.push('-');
    } else {
        out.push_str(&member.to_bit_string());
    }
    out.push('\n');
}
