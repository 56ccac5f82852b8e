//! Output records. Every record of a kind carries the same field set;
//! absent values are explicit `null`s.

use std::fmt::Write as _;

use serde::Serialize;
use signorini_core::oracle::PropertyOutcome;
use signorini_core::{ExtendedCop, ForceDistribution, SignoriniError, SupportSet, Vec2, Verdict, ZeroLine};

/// Drops the sign of negative zero so records do not print `-0.0`.
fn clean(x: f64) -> f64 {
    x + 0.0
}

fn point(v: Vec2) -> [f64; 2] {
    [clean(v.x), clean(v.y)]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroLineRecord {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl From<ZeroLine> for ZeroLineRecord {
    fn from(l: ZeroLine) -> Self {
        Self {
            normal: point(l.normal),
            offset: clean(l.offset),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtendedCopRecord {
    /// `point`, `vertex`, `segment` or `full_hull`.
    pub kind: &'static str,
    pub points: Vec<[f64; 2]>,
}

impl From<ExtendedCop> for ExtendedCopRecord {
    fn from(e: ExtendedCop) -> Self {
        let (kind, points) = match e {
            ExtendedCop::Point(p) => ("point", vec![point(p)]),
            ExtendedCop::Set(SupportSet::Vertex(v)) => ("vertex", vec![point(v)]),
            ExtendedCop::Set(SupportSet::Segment(a, b)) => ("segment", vec![point(a), point(b)]),
            ExtendedCop::Set(SupportSet::FullHull) => ("full_hull", vec![]),
        };
        Self { kind, points }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub case: String,
    pub satisfied: bool,
    pub primal_ok: bool,
    pub dual_ok: bool,
    pub residual: f64,
    pub regime: Option<&'static str>,
    pub tangential_motion: Option<bool>,
    pub cop: Option<[f64; 2]>,
    pub zero_line: Option<ZeroLineRecord>,
    pub extended_cop: ExtendedCopRecord,
    pub scale: f64,
    pub wrench_norm: f64,
    pub twist_norm: f64,
}

impl VerdictRecord {
    pub fn new(case: &str, v: &Verdict) -> Self {
        Self {
            case: case.to_owned(),
            satisfied: v.satisfied,
            primal_ok: v.primal_ok,
            dual_ok: v.dual_ok,
            residual: clean(v.residual),
            regime: v.regime.map(|r| r.kind.as_str()),
            tangential_motion: v.regime.map(|r| r.tangential_motion),
            cop: v.cop.map(point),
            zero_line: v.zero_line.map(Into::into),
            extended_cop: v.extended_cop.into(),
            scale: v.scale,
            wrench_norm: v.wrench_norm,
            twist_norm: v.twist_norm,
        }
    }

    pub fn pretty(&self) -> String {
        let mut s = String::new();
        let status = if self.satisfied { "satisfied" } else { "NOT satisfied" };
        let _ = writeln!(s, "{}: {status}", self.case);
        let _ = writeln!(
            s,
            "  primal_ok={} dual_ok={} residual={:e}",
            self.primal_ok, self.dual_ok, self.residual
        );
        let regime = match (self.regime, self.tangential_motion) {
            (Some(r), Some(true)) => format!("{r} (with tangential motion)"),
            (Some(r), _) => r.to_owned(),
            _ => "-".to_owned(),
        };
        let _ = writeln!(s, "  regime: {regime}");
        let _ = writeln!(s, "  cop: {}", opt_point(self.cop));
        let line = self
            .zero_line
            .as_ref()
            .map(|l| format!("<x, {}> = {}", fmt_point(l.normal), l.offset))
            .unwrap_or_else(|| "-".to_owned());
        let _ = writeln!(s, "  zero_line: {line}");
        let pts: Vec<String> = self.extended_cop.points.iter().map(|p| fmt_point(*p)).collect();
        let _ = writeln!(s, "  extended_cop: {} {}", self.extended_cop.kind, pts.join(" "));
        s
    }
}

fn fmt_point(p: [f64; 2]) -> String {
    format!("({}, {})", p[0], p[1])
}

fn opt_point(p: Option<[f64; 2]>) -> String {
    p.map(fmt_point).unwrap_or_else(|| "-".to_owned())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyRecord {
    pub case: String,
    pub regime: Option<&'static str>,
    pub tangential_motion: Option<bool>,
    pub error: Option<String>,
}

impl ClassifyRecord {
    pub fn new(case: &str, result: Result<signorini_core::Regime, SignoriniError>) -> Self {
        match result {
            Ok(r) => Self {
                case: case.to_owned(),
                regime: Some(r.kind.as_str()),
                tangential_motion: Some(r.tangential_motion),
                error: None,
            },
            Err(e) => Self {
                case: case.to_owned(),
                regime: None,
                tangential_motion: None,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn pretty(&self) -> String {
        match (&self.regime, &self.error) {
            (Some(r), _) if self.tangential_motion == Some(true) => {
                format!("{}: {r} (with tangential motion)\n", self.case)
            }
            (Some(r), _) => format!("{}: {r}\n", self.case),
            (None, Some(e)) => format!("{}: error: {e}\n", self.case),
            (None, None) => format!("{}: -\n", self.case),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomRecord {
    pub point: [f64; 2],
    pub rho_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthesisRecord {
    pub case: String,
    pub atoms: Option<Vec<AtomRecord>>,
    pub error: Option<String>,
}

impl SynthesisRecord {
    pub fn new(case: &str, result: Result<ForceDistribution, SignoriniError>) -> Self {
        match result {
            Ok(d) => Self {
                case: case.to_owned(),
                atoms: Some(
                    d.atoms()
                        .iter()
                        .map(|a| AtomRecord {
                            point: point(a.point),
                            rho_n: clean(a.rho_n),
                        })
                        .collect(),
                ),
                error: None,
            },
            Err(e) => Self {
                case: case.to_owned(),
                atoms: None,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn pretty(&self) -> String {
        match (&self.atoms, &self.error) {
            (Some(atoms), _) if atoms.is_empty() => format!("{}: no atoms (zero normal force)\n", self.case),
            (Some(atoms), _) => {
                let mut s = format!("{}: {} atom(s)\n", self.case, atoms.len());
                for a in atoms {
                    let _ = writeln!(s, "  {} rho_n={}", fmt_point(a.point), a.rho_n);
                }
                s
            }
            (None, Some(e)) => format!("{}: error: {e}\n", self.case),
            (None, None) => format!("{}: -\n", self.case),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyRecord {
    pub patch: String,
    pub property: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub worst: f64,
    pub passed: bool,
}

impl PropertyRecord {
    pub fn new(patch: &str, o: &PropertyOutcome) -> Self {
        Self {
            patch: patch.to_owned(),
            property: o.name,
            trials: o.trials,
            failures: o.failures,
            worst: o.worst,
            passed: o.passed(),
        }
    }

    pub fn pretty(&self) -> String {
        format!(
            "{:<6} {:<12} {:<24} trials={:<6} failures={:<4} worst={:.3e}\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.patch,
            self.property,
            self.trials,
            self.failures,
            self.worst
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use signorini_core::{check, Patch, Twist, Wrench};

    fn square() -> Patch {
        Patch::rectangle(Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0)).unwrap()
    }

    #[test]
    fn verdict_records_share_field_set() {
        let tipping = check(
            &square(),
            &Wrench::normal(Vec2::new(-2.0, 0.0), 2.0),
            &Twist::normal(Vec2::new(1.0, 0.0), 1.0),
            1e-9,
        );
        let bad = check(&square(), &Wrench::normal(Vec2::ZERO, -1.0), &Twist::ZERO, 1e-9);
        let a = serde_json::to_value(VerdictRecord::new("t", &tipping)).unwrap();
        let b = serde_json::to_value(VerdictRecord::new("b", &bad)).unwrap();
        let keys = |v: &serde_json::Value| v.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
        assert_eq!(keys(&a), keys(&b));
        assert_eq!(a["regime"], "tipping");
        assert_eq!(a["cop"], serde_json::json!([0.0, -1.0]));
        assert_eq!(b["primal_ok"], false);
        assert!(b["regime"].is_null());
        assert!(b["zero_line"].is_null());
    }

    #[test]
    fn negative_zero_is_printed_as_zero() {
        let v = check(&square(), &Wrench::normal(Vec2::ZERO, 5.0), &Twist::ZERO, 1e-9);
        let text = serde_json::to_string(&VerdictRecord::new("r", &v)).unwrap();
        assert!(!text.contains("-0.0"), "{text}");
    }
}
