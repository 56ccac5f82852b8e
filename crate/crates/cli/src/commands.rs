//! Subcommand bodies. Each returns the process exit status:
//! 0 on success, 1 when some case fails its check, 2 on input or IO error.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use signorini_core::oracle::{random_convex_polygon, random_ellipse, random_star_polygon, run_suite};
use signorini_core::{check, classify, synthesize_distribution, Patch};

use crate::records::{ClassifyRecord, PropertyRecord, SynthesisRecord, VerdictRecord};
use crate::render::{file_name, render_case};
use crate::scenario::{load_patch, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    /// One JSON object per line.
    #[default]
    Records,
    Pretty,
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    record: &T,
    pretty: impl FnOnce(&T) -> String,
) -> std::io::Result<()> {
    match format {
        Format::Records => {
            serde_json::to_writer(&mut *out, record).map_err(std::io::Error::other)?;
            out.write_all(b"\n")
        }
        Format::Pretty => out.write_all(pretty(record).as_bytes()),
    }
}

fn load(path: &Path, err: &mut dyn Write) -> Option<Scenario> {
    match Scenario::load(path) {
        Ok(s) => Some(s),
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            None
        }
    }
}

fn io_failure(err: &mut dyn Write, e: std::io::Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_INPUT
}

pub fn check_cmd(path: &Path, tol: Option<f64>, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(scenario) = load(path, err) else {
        return EXIT_INPUT;
    };
    let tol = scenario.tol(tol);
    let mut all = true;
    for case in &scenario.doc.cases {
        let v = check(&scenario.patch, &case.wrench(), &case.twist(), tol);
        all &= v.satisfied;
        if let Err(e) = emit(out, format, &VerdictRecord::new(&case.name, &v), VerdictRecord::pretty) {
            return io_failure(err, e);
        }
    }
    if all {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn classify_cmd(path: &Path, tol: Option<f64>, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(scenario) = load(path, err) else {
        return EXIT_INPUT;
    };
    let tol = scenario.tol(tol);
    let mut all = true;
    for case in &scenario.doc.cases {
        let r = classify(&scenario.patch, &case.wrench(), &case.twist(), tol);
        all &= r.is_ok();
        if let Err(e) = emit(out, format, &ClassifyRecord::new(&case.name, r), ClassifyRecord::pretty) {
            return io_failure(err, e);
        }
    }
    if all {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn synthesize_cmd(path: &Path, tol: Option<f64>, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(scenario) = load(path, err) else {
        return EXIT_INPUT;
    };
    let tol = scenario.tol(tol);
    let mut all = true;
    for case in &scenario.doc.cases {
        let d = synthesize_distribution(&scenario.patch, &case.wrench(), &case.twist(), tol);
        all &= d.is_ok();
        if let Err(e) = emit(
            out,
            format,
            &SynthesisRecord::new(&case.name, d),
            SynthesisRecord::pretty,
        ) {
            return io_failure(err, e);
        }
    }
    if all {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// Writes one SVG per case into `dir` (created if missing) and prints the
/// written paths.
pub fn render_cmd(path: &Path, dir: &Path, tol: Option<f64>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(scenario) = load(path, err) else {
        return EXIT_INPUT;
    };
    let tol = scenario.tol(tol);
    if let Err(e) = std::fs::create_dir_all(dir) {
        let _ = writeln!(err, "error: cannot create {}: {e}", dir.display());
        return EXIT_INPUT;
    }
    for (i, case) in scenario.doc.cases.iter().enumerate() {
        let w = case.wrench();
        let v = check(&scenario.patch, &w, &case.twist(), tol);
        let svg = render_case(&scenario.patch, &case.name, &w, &v);
        let target = dir.join(file_name(&case.name, i));
        if let Err(e) = std::fs::write(&target, svg) {
            let _ = writeln!(err, "error: cannot write {}: {e}", target.display());
            return EXIT_INPUT;
        }
        let _ = writeln!(out, "{}", target.display());
    }
    EXIT_OK
}

/// Patches used by `oracle` when no patch file is given.
pub fn random_patches(seed: u64) -> Vec<(String, Patch)> {
    let mut v = Vec::new();
    for i in 0..3u64 {
        v.push((format!("convex{i}"), random_convex_polygon(seed.wrapping_add(i))));
    }
    v.push(("star0".to_owned(), random_star_polygon(seed, 9)));
    v.push(("ellipse0".to_owned(), random_ellipse(seed)));
    v
}

pub fn oracle_cmd(
    patch: Option<&Path>,
    seed: u64,
    count: usize,
    tol: Option<f64>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    if count == 0 {
        let _ = writeln!(err, "error: --count must be at least 1");
        return EXIT_INPUT;
    }
    let patches = match patch {
        Some(path) => match load_patch(path) {
            Ok(p) => vec![("patch".to_owned(), p)],
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        },
        None => random_patches(seed),
    };
    let tol = tol.unwrap_or(signorini_core::DEFAULT_TOL);
    let mut all = true;
    for (name, p) in &patches {
        for outcome in run_suite(p, seed, count, tol) {
            let rec = PropertyRecord::new(name, &outcome);
            all &= rec.passed;
            if let Err(e) = emit(out, format, &rec, PropertyRecord::pretty) {
                return io_failure(err, e);
            }
        }
    }
    if all {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
