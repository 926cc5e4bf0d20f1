//! Input documents and report formats.
//!
//! Matrix sets travel as JSON (`{"matrices": [[[..],[..]], …]}` with an
//! optional `"roles"` object marking the singular/rotation pair), scan
//! results as CSV with a fixed five-column schema, and the other commands
//! emit JSON reports tagged with `schema_version` and the tool version.
//! Field order and float formatting are fixed, so identical inputs produce
//! byte-identical output.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::radius::{CanonicalParams, RadiusCase, RadiusResult, SingularRotationSystem};
use crate::search::{CertificateReport, MatrixSet, ProductSearchReport, SearchOutcome};

/// Version tag carried by every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

/// Mandatory header of scan CSV output.
pub const SCAN_CSV_HEADER: &str = "alpha,value,case,witness_l,certified";

/// On-disk matrix set document.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixSetDoc {
    pub matrices: Vec<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roles: Option<RolesDoc>,
}

/// Member indices (zero-based) of the singular and rotation factors.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RolesDoc {
    pub singular: usize,
    pub rotation: usize,
}

/// A parsed input document.
#[derive(Debug)]
pub enum ParsedInput {
    Set(MatrixSet),
    System {
        system: SingularRotationSystem,
        set: MatrixSet,
        roles: RolesDoc,
    },
}

impl ParsedInput {
    pub fn set(&self) -> &MatrixSet {
        match self {
            ParsedInput::Set(s) => s,
            ParsedInput::System { set, .. } => set,
        }
    }
}

/// Reads and validates a matrix set document from a file.
pub fn parse_matrix_set(path: &Path) -> Result<ParsedInput> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_set_str(&text)
}

/// Parses a matrix set document from JSON text.
pub fn parse_matrix_set_str(text: &str) -> Result<ParsedInput> {
    let doc: MatrixSetDoc = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "matrix set document: {e} (line {}, column {})",
            e.line(),
            e.column()
        ))
    })?;
    let mut members = Vec::with_capacity(doc.matrices.len());
    for (i, rows) in doc.matrices.iter().enumerate() {
        let m = Matrix::from_rows(rows)
            .map_err(|e| Error::Validation(format!("matrix {i}: {e}")))?;
        members.push(m);
    }
    let set = MatrixSet::new(members)?;
    match doc.roles {
        None => Ok(ParsedInput::Set(set)),
        Some(roles) => {
            let m = set.len();
            if roles.singular >= m || roles.rotation >= m {
                return Err(Error::Validation(format!(
                    "roles reference members {}/{} of a {m}-member set (indices are zero-based)",
                    roles.singular, roles.rotation
                )));
            }
            if roles.singular == roles.rotation {
                return Err(Error::Validation(
                    "roles must name two distinct members".into(),
                ));
            }
            let system = SingularRotationSystem::new(
                set.member(roles.singular).clone(),
                set.member(roles.rotation).clone(),
            )?;
            Ok(ParsedInput::System { system, set, roles })
        }
    }
}

/// Serializes a matrix set to the document format; `parse(emit(set))`
/// reproduces the set bit-exactly for all finite doubles.
pub fn emit_matrix_set(set: &MatrixSet, roles: Option<RolesDoc>) -> String {
    let doc = MatrixSetDoc {
        matrices: set.members().iter().map(|m| m.rows()).collect(),
        roles,
    };
    to_json_string(&doc)
}

/// Standard pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// Formats a float with 12 significant digits, deterministically.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.11e}")
}

/// One row of scan output.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub alpha: f64,
    pub result: RadiusResult,
}

impl ScanRow {
    pub fn case_tag(&self) -> &'static str {
        match self.result.case {
            RadiusCase::ExactZero { .. } => "exact_zero",
            RadiusCase::FiniteAttained { .. } => "finite_attained",
            RadiusCase::Truncated { .. } => "truncated",
        }
    }
}

/// Renders scan rows as CSV under the fixed schema
/// `alpha,value,case,witness_l,certified`.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 48 + 64);
    out.push_str(SCAN_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format_sig12(row.alpha));
        out.push(',');
        out.push_str(&format_sig12(row.result.value));
        out.push(',');
        out.push_str(row.case_tag());
        out.push(',');
        out.push_str(&row.result.witness().to_string());
        out.push(',');
        out.push_str(if row.result.finiteness { "true" } else { "false" });
        out.push('\n');
    }
    out
}

/// Report wrapper for `estimate`.
#[derive(Debug, Serialize)]
pub struct EstimateReportDoc {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: Value,
    pub report: ProductSearchReport,
    /// `min_sr_rate / m`: the subradius-based lower-bound arithmetic applied
    /// to the depth-limited estimate. The enumeration rate only bounds the
    /// subradius from above, so this is an estimate, not a certified bound.
    pub lower_bound_estimate: f64,
}

/// Report wrapper for `search`.
#[derive(Debug, Serialize)]
pub struct SearchReportDoc {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: Value,
    pub outcome: SearchOutcome,
}

/// Contiguous θ-range won by one product.
#[derive(Debug, Serialize)]
pub struct WinnerSpan {
    pub theta_start: f64,
    pub theta_end: f64,
    /// Index into the product list, zero-based.
    pub product: usize,
}

/// Report wrapper for `certify`: the grid summary.
#[derive(Debug, Serialize)]
pub struct CertifyReportDoc {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: Value,
    pub covered: bool,
    pub margin: f64,
    pub grid_size: usize,
    pub uncovered_intervals: Vec<(f64, f64)>,
    pub winner_spans: Vec<WinnerSpan>,
    pub worst_best_norm: f64,
}

impl CertifyReportDoc {
    pub fn from_report(report: &CertificateReport, config: Value) -> Self {
        let mut spans: Vec<WinnerSpan> = Vec::new();
        for (k, &w) in report.winner.iter().enumerate() {
            let theta = report.grid[k];
            match spans.last_mut() {
                Some(span) if span.product == w => span.theta_end = theta,
                _ => spans.push(WinnerSpan {
                    theta_start: theta,
                    theta_end: theta,
                    product: w,
                }),
            }
        }
        let worst = report.best_norm.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        CertifyReportDoc {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            covered: report.covered,
            margin: report.margin,
            grid_size: report.grid.len(),
            uncovered_intervals: report.uncovered_intervals.clone(),
            winner_spans: spans,
            worst_best_norm: worst,
        }
    }
}

/// Report wrapper for `radius`.
#[derive(Debug, Serialize)]
pub struct RadiusReportDoc {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: Value,
    pub params: CanonicalParams,
    pub alpha: String,
    pub result: RadiusResult,
}

pub(crate) fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EX7: &str = r#"{
        "matrices": [
            [[2.0, 0.0], [0.0, 0.0]],
            [[0.5, 0.8660254037844386], [-0.8660254037844386, 0.5]]
        ],
        "roles": {"singular": 0, "rotation": 1}
    }"#;

    #[test]
    fn parses_system_with_roles() {
        let parsed = parse_matrix_set_str(EX7).unwrap();
        match parsed {
            ParsedInput::System { system, set, .. } => {
                assert_eq!(set.len(), 2);
                assert_eq!(system.m1.get(0, 0), 2.0);
            }
            _ => panic!("expected a system"),
        }
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let text = r#"{"matrices": [[[1.0,0.0],[0.0,1.0]], [[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,1.0]]]}"#;
        assert!(matches!(
            parse_matrix_set_str(text),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn rejects_bad_roles() {
        let text = r#"{
            "matrices": [[[2.0,0.0],[0.0,0.5]], [[0.5,0.866],[-0.866,0.5]]],
            "roles": {"singular": 0, "rotation": 1}
        }"#;
        // Member 0 is invertible: the singular-role invariant fails by name.
        let err = parse_matrix_set_str(text).unwrap_err();
        assert!(matches!(err, Error::NotSingular { .. }), "{err}");
    }

    #[test]
    fn rejects_malformed_json_with_position() {
        let err = parse_matrix_set_str("{\"matrices\": [[[1.0,]]]}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn plain_set_without_roles() {
        let text = r#"{"matrices": [
            [[1.0,0.0,0.0],[0.0,0.0,1.0],[0.0,0.0,0.0]],
            [[1.0,0.0,0.0],[0.0,0.0,-1.0],[0.0,1.0,0.0]],
            [[0.8090169943749475,0.0,0.5877852522924731],[0.0,1.0,0.0],[-0.5877852522924731,0.0,0.8090169943749475]]
        ]}"#;
        let parsed = parse_matrix_set_str(text).unwrap();
        assert!(matches!(parsed, ParsedInput::Set(_)));
        assert_eq!(parsed.set().len(), 3);
    }

    #[test]
    fn format_sig12_deterministic() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(1.0), "1.00000000000e0");
        assert_eq!(format_sig12(1.0), format_sig12(1.0));
    }

    proptest! {
        #[test]
        fn roundtrip_bit_exact(values in proptest::collection::vec(-1e12f64..1e12, 8)) {
            let m1 = Matrix::from_flat(2, &values[0..4]).unwrap();
            let m2 = Matrix::from_flat(2, &values[4..8]).unwrap();
            let set = MatrixSet::new(vec![m1, m2]).unwrap();
            let text = emit_matrix_set(&set, None);
            let parsed = parse_matrix_set_str(&text).unwrap();
            let back = parsed.set();
            for i in 0..2 {
                for r in 0..2 {
                    for c in 0..2 {
                        prop_assert_eq!(
                            set.member(i).get(r, c).to_bits(),
                            back.member(i).get(r, c).to_bits()
                        );
                    }
                }
            }
        }
    }
}
