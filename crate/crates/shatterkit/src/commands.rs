//! One function per subcommand. Each returns the report to print; limit
//! and infeasibility errors from the core become `capability-error`
//! reports, other errors propagate.

use std::path::Path;

use serde_json::{json, Value};
use shatterkit_core::cover::{cover_exact, cover_greedy};
use shatterkit_core::fo::{formula_vc_dimension, parse_formula};
use shatterkit_core::tree::{build_tree, tree_height, VerifyMode};
use shatterkit_core::{
    restrict as restrict_family, sauer_bound, sauer_lower_bound, shatter_function, vc_dimension, CoordSet,
    Error as CoreError, Family, IdealParams,
};

use crate::error::{Error, Result};
use crate::formats::{
    emit_cover, emit_family, emit_tree, parse_family, parse_structure, parse_tree, read_file, write_file,
};
use crate::parallel;
use crate::report::{Report, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMode {
    Exact,
    Greedy,
}

/// `Err(reason)` for errors that are reported rather than raised.
fn limits<T, E: Into<Error>>(r: std::result::Result<T, E>) -> Result<std::result::Result<T, String>> {
    match r.map_err(Into::into) {
        Ok(v) => Ok(Ok(v)),
        Err(Error::Core(e @ (CoreError::Capability(_) | CoreError::Infeasible(_)))) => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

fn load_family(path: &Path) -> Result<Family> {
    parse_family(&read_file(path)?)
}

fn path_value(path: &Path) -> Value {
    Value::String(path.display().to_string())
}

fn tuple_text(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(","))
}

/// VC and string dimension, a witness and the shatter function.
pub fn dim(family_path: &Path) -> Result<Report> {
    let family = load_family(family_path)?;
    let mut report = Report::new("dim").input("family", path_value(family_path));
    let d = vc_dimension(&family);
    report.put("width", family.width());
    report.put("members", family.len());
    report.put("vc_dim", d.vc_dim);
    report.put("string_dim", d.string_dim);
    report.put("witness", d.witness.as_ref().map(|w| json!(w.coords())).unwrap_or(Value::Null));
    report.put("shatter_fn", d.shatter_fn.map(Value::from).unwrap_or(Value::Null));
    Ok(report)
}

/// `f(k)` for `k = 0..=max` next to the polynomial bound from the string
/// dimension.
pub fn shatter_fn(family_path: &Path, max: Option<usize>) -> Result<Report> {
    let family = load_family(family_path)?;
    let max = max.unwrap_or(family.width());
    let mut report = Report::new("fn")
        .input("family", path_value(family_path))
        .input("max", max);
    let f = match limits(shatter_function(&family, max))? {
        Ok(f) => f,
        Err(reason) => return Ok(report.capability(reason)),
    };
    let sdim = vc_dimension(&family).string_dim;
    let bounds = (0..f.len() as u64)
        .map(|k| sauer_bound(sdim, k).map(|b| b.to_string()))
        .collect::<shatterkit_core::Result<Vec<_>>>()?;
    report.put("string_dim", sdim);
    report.put("f", f);
    report.put("sauer_bound", bounds);
    Ok(report)
}

/// The family restricted to `coords`, written to `out` or listed.
pub fn restrict(family_path: &Path, coords: &[usize], out: Option<&Path>) -> Result<Report> {
    let family = load_family(family_path)?;
    let mut report = Report::new("restrict")
        .input("family", path_value(family_path))
        .input("coords", coords.to_vec())
        .input("out", out.map(path_value).unwrap_or(Value::Null));
    let set = CoordSet::new(family.width(), coords.to_vec())?;
    let restricted = restrict_family(&family, &set)?;
    report.put("width", restricted.width());
    report.put("members", restricted.len());
    match out {
        Some(path) => write_file(path, &emit_family(&restricted))?,
        None => report.put(
            "family",
            restricted
                .members()
                .iter()
                .map(|m| if m.is_empty() { String::from("-") } else { m.to_bit_string() })
                .collect::<Vec<_>>(),
        ),
    }
    Ok(report)
}

pub fn tree_build(n: usize, out: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("tree build")
        .input("n", n)
        .input("out", out.map(path_value).unwrap_or(Value::Null));
    let tree = match limits(build_tree(n))? {
        Ok(t) => t,
        Err(reason) => return Ok(report.capability(reason)),
    };
    report.put("stage", tree.stage);
    report.put("height", tree.height);
    report.put("leaves", tree.leaves.len());
    report.put("blocks", tree.blocks.len());
    if tree_height(n) != Some(tree.height as u128) {
        report.status = Status::Violation;
        report.put("reason", "height differs from the block count");
    }
    if let Some(path) = out {
        write_file(path, &emit_tree(&tree))?;
    }
    Ok(report)
}

pub fn tree_verify(tree_path: &Path, k: usize, mode: VerifyMode) -> Result<Report> {
    let tree = parse_tree(&read_file(tree_path)?)?;
    let mut report = Report::new("tree verify")
        .input("tree", path_value(tree_path))
        .input("k", k)
        .input(
            "mode",
            match mode {
                VerifyMode::Exhaustive => "exhaustive",
                VerifyMode::Certificate => "certificate",
            },
        );
    let v = match limits(parallel::verify_guarantee(&tree, k, mode))? {
        Ok(v) => v,
        Err(reason) => return Ok(report.capability(reason)),
    };
    report.put("stage", tree.stage);
    report.put("height", tree.height);
    report.put("subsets_checked", v.subsets_checked);
    report.put("result", if v.passed() { "pass" } else { "fail" });
    report.put("violations", v.violations.len());
    if let Some(first) = v.violations.first() {
        report.status = Status::Violation;
        report.put("violating_subset", first.subset.clone());
        report.put("reason", first.reason.clone());
    }
    Ok(report)
}

pub fn cover(n: usize, d: usize, mode: CoverMode, out: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("cover")
        .input("n", n)
        .input("d", d)
        .input(
            "mode",
            match mode {
                CoverMode::Exact => "exact",
                CoverMode::Greedy => "greedy",
            },
        )
        .input("out", out.map(path_value).unwrap_or(Value::Null));
    let params = IdealParams::new(n, d)?;
    let cert = match limits(match mode {
        CoverMode::Exact => cover_exact(&params),
        CoverMode::Greedy => cover_greedy(&params),
    })? {
        Ok(c) => c,
        Err(reason) => return Ok(report.capability(reason)),
    };
    report.put("size", cert.size());
    report.put("sauer_lower_bound", sauer_lower_bound(&params)?.to_string());
    let check = if n <= 30 { cert.validate() } else { Ok(()) };
    match check {
        Ok(()) => report.put("valid", true),
        Err(v) => {
            report.status = Status::Violation;
            report.put("valid", false);
            report.put("reason", v.to_string());
        }
    }
    match out {
        Some(path) => write_file(path, &emit_cover(&cert))?,
        None => report.put(
            "parts",
            cert.parts
                .iter()
                .map(|p| p.members().iter().map(|m| m.to_bit_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        ),
    }
    Ok(report)
}

/// Dimension of the family a formula defines, with the shattered object
/// tuples and one parameter tuple per pattern.
pub fn fo(struct_path: &Path, formula: &str, partition: &str) -> Result<Report> {
    let structure = parse_structure(&read_file(struct_path)?)?;
    let mut report = Report::new("fo")
        .input("struct", path_value(struct_path))
        .input("formula", formula)
        .input("partition", partition);
    let f = parse_formula(formula, partition)?;
    let d = match limits(formula_vc_dimension(&structure, &f))? {
        Ok(d) => d,
        Err(reason) => return Ok(report.capability(reason)),
    };
    let n = structure.universe_size();
    report.put("universe", n);
    report.put("width", n.pow(f.x_vars.len() as u32));
    report.put("family_size", d.family.len());
    report.put("vc_dim", d.report.vc_dim);
    report.put("string_dim", d.report.string_dim);
    report.put("shattered", d.shattered.iter().map(|t| tuple_text(t)).collect::<Vec<_>>());
    report.put(
        "realizers",
        d.realizers
            .iter()
            .map(|(p, b)| {
                let p = if p.is_empty() { String::from("-") } else { p.to_bit_string() };
                format!("{p}:{}", tuple_text(b))
            })
            .collect::<Vec<_>>(),
    );
    Ok(report)
}
