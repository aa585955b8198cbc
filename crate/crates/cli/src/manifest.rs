//! Manifest files: the JSON encoding of a frame manifold with an almost
//! contact metric structure, plus ingestion into core objects.

use std::fmt;
use std::path::Path;

use contact_tensor::catalog::CatalogEntry;
use contact_tensor::contact::{
    check_contact_metric, validate_almost_contact, ContactStructure, FrameOperator,
};
use contact_tensor::expr::{Expr, Symbol, SymbolKind, SymbolTable};
use contact_tensor::frame::{
    ChartFrame, FrameManifold, FrameMode, StructureFunctions, VectorField,
};
use contact_tensor::linalg::ExprMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::locate::SourceMap;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u32,
    pub name: String,
    pub dimension: usize,
    pub mode: Mode,
    #[serde(default)]
    pub symbols: Vec<SymbolDecl>,
    pub frame: FrameSpec,
    pub metric: Vec<Vec<String>>,
    /// Row `i` holds the frame components of `φ(e_i)`.
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Chart,
    Abstract,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Chart => "chart",
            Mode::Abstract => "abstract",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Coordinate,
    Parameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDecl {
    pub name: String,
    pub kind: Kind,
}

/// Chart mode uses `coordinates` + `vectors` (row `i` is `e_i` in the
/// coordinate basis); abstract mode uses `brackets`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brackets: Option<Vec<BracketDecl>>,
}

/// `[e_i, e_j] = Σ_k components[k-1] e_k`, 1-based, `i < j`. Unlisted
/// pairs commute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDecl {
    pub i: usize,
    pub j: usize,
    pub components: Vec<String>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Encodes already-constructed objects.
    pub fn from_objects(
        name: &str,
        provenance: Option<&str>,
        m: &FrameManifold,
        c: &ContactStructure,
    ) -> Self {
        let n = m.dim();
        let strs = |v: &[Expr]| v.iter().map(Expr::to_string).collect::<Vec<_>>();
        let (mode, frame) = match m.mode() {
            FrameMode::Chart(chart) => (
                Mode::Chart,
                FrameSpec {
                    coordinates: Some(
                        chart
                            .coordinates()
                            .iter()
                            .map(|s| s.name().to_string())
                            .collect(),
                    ),
                    vectors: Some(
                        (0..n)
                            .map(|i| {
                                (0..n)
                                    .map(|a| chart.coefficient(i, a).to_string())
                                    .collect()
                            })
                            .collect(),
                    ),
                    brackets: None,
                },
            ),
            FrameMode::Abstract => {
                let s = m.structure();
                let brackets = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| !s.bracket(i, j).is_zero())
                    .map(|(i, j)| BracketDecl {
                        i: i + 1,
                        j: j + 1,
                        components: strs(s.bracket(i, j).components()),
                    })
                    .collect();
                (
                    Mode::Abstract,
                    FrameSpec {
                        brackets: Some(brackets),
                        ..FrameSpec::default()
                    },
                )
            }
        };
        Manifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            name: name.to_string(),
            dimension: n,
            mode,
            symbols: m
                .symbols()
                .iter()
                .map(|s| SymbolDecl {
                    name: s.name().to_string(),
                    kind: match s.kind() {
                        SymbolKind::Coordinate => Kind::Coordinate,
                        SymbolKind::Parameter => Kind::Parameter,
                    },
                })
                .collect(),
            frame,
            metric: (0..n).map(|i| strs(m.metric().row(i))).collect(),
            phi: c
                .phi()
                .images()
                .iter()
                .map(|v| strs(v.components()))
                .collect(),
            xi: strs(c.xi().components()),
            provenance: provenance.map(str::to_string),
        }
    }
}

pub fn export(entry: &CatalogEntry) -> Manifest {
    Manifest::from_objects(
        &entry.id,
        Some(&entry.provenance),
        &entry.manifold,
        &entry.structure,
    )
}

/// One located problem in a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{l}:{c}: {}: {}", self.path, self.message),
            _ => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid manifest ({} problem{}):\n{}", .0.len(), if .0.len() == 1 { "" } else { "s" }, list(.0))]
    Invalid(Vec<Issue>),
    #[error("bad --set `{0}`: expected name=rational")]
    Binding(String),
}

fn list(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A structural axiom that fails on the ingested objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// Not an almost contact metric manifold (or brackets break Jacobi);
    /// nothing downstream is meaningful.
    Error,
    /// Almost contact metric but not contact metric.
    Warning,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub manifest: Manifest,
    /// `--set` values, in command-line order.
    pub bindings: Vec<(String, Expr)>,
    pub manifold: FrameManifold,
    pub structure: ContactStructure,
    pub violations: Vec<Violation>,
}

impl Loaded {
    pub fn has_errors(&self) -> bool {
        self.violations
            .iter()
            .any(|v| v.severity == Severity::Error)
    }
}

/// Parses the file and keeps a position index for error reporting.
pub fn read(path: &Path) -> Result<(Manifest, SourceMap), IngestError> {
    let src = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&src)
}

pub fn parse(src: &str) -> Result<(Manifest, SourceMap), IngestError> {
    let manifest: Manifest = serde_json::from_str(src).map_err(|e| IngestError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok((manifest, SourceMap::build(src)))
}

/// Parses `name=value` pairs; values must be rational constants.
pub fn parse_bindings(raw: &[String]) -> Result<Vec<(String, Expr)>, IngestError> {
    raw.iter()
        .map(|s| {
            let (name, value) = s
                .split_once('=')
                .ok_or_else(|| IngestError::Binding(s.clone()))?;
            let v = SymbolTable::new()
                .parse(value.trim())
                .ok()
                .filter(Expr::is_constant)
                .ok_or_else(|| IngestError::Binding(s.clone()))?;
            Ok((name.trim().to_string(), v))
        })
        .collect()
}

struct Collector<'a> {
    map: Option<&'a SourceMap>,
    issues: Vec<Issue>,
}

impl Collector<'_> {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.push_at(path.into(), 0, message.into());
    }

    /// `offset` is a 1-based column inside a string value, or 0.
    fn push_at(&mut self, path: String, offset: usize, message: String) {
        let pos = self.map.and_then(|m| m.find(&path));
        self.issues.push(Issue {
            line: pos.map(|p| p.line),
            column: pos.map(|p| p.column + offset),
            path,
            message,
        });
    }

    fn expr(
        &mut self,
        t: &SymbolTable,
        bindings: &[(String, Expr)],
        path: String,
        src: &str,
    ) -> Option<Expr> {
        match t.parse(src) {
            Ok(e) => match e.substitute_all(bindings) {
                Ok(e) => Some(e),
                Err(err) => {
                    self.push_at(path, 0, format!("`{src}` after substitution: {err}"));
                    None
                }
            },
            Err(err) => {
                self.push_at(path, err.column, format!("`{src}`: {}", err.message));
                None
            }
        }
    }

    fn exprs(
        &mut self,
        t: &SymbolTable,
        b: &[(String, Expr)],
        path: &str,
        row: &[String],
        n: usize,
    ) -> Option<Vec<Expr>> {
        if row.len() != n {
            self.push(path, format!("expected {n} entries, found {}", row.len()));
            return None;
        }
        let out: Vec<Option<Expr>> = row
            .iter()
            .enumerate()
            .map(|(k, s)| self.expr(t, b, format!("{path}[{k}]"), s))
            .collect();
        out.into_iter().collect()
    }

    fn matrix(
        &mut self,
        t: &SymbolTable,
        b: &[(String, Expr)],
        path: &str,
        rows: &[Vec<String>],
        n: usize,
    ) -> Option<Vec<Vec<Expr>>> {
        if rows.len() != n {
            self.push(path, format!("expected {n} rows, found {}", rows.len()));
        }
        let out: Vec<Option<Vec<Expr>>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| self.exprs(t, b, &format!("{path}[{i}]"), r, n))
            .collect();
        if rows.len() != n {
            return None;
        }
        out.into_iter().collect()
    }
}

/// Validates and constructs. Problems with the manifest itself are
/// collected exhaustively into [`IngestError::Invalid`]; axiom failures of
/// the resulting structure land in [`Loaded::violations`].
pub fn load(
    manifest: &Manifest,
    map: Option<&SourceMap>,
    bindings: &[(String, Expr)],
) -> Result<Loaded, IngestError> {
    let mut c = Collector {
        map,
        issues: vec![],
    };
    if manifest.schema_version != MANIFEST_SCHEMA_VERSION {
        c.push(
            "schema_version",
            format!(
                "unsupported version {} (supported: {MANIFEST_SCHEMA_VERSION})",
                manifest.schema_version
            ),
        );
    }
    let n = manifest.dimension;
    if n < 3 || n.is_multiple_of(2) {
        c.push("dimension", format!("must be an odd integer >= 3, got {n}"));
    }

    let mut table = SymbolTable::new();
    for (k, d) in manifest.symbols.iter().enumerate() {
        let s = match d.kind {
            Kind::Coordinate => Symbol::coordinate(&d.name),
            Kind::Parameter => Symbol::parameter(&d.name),
        };
        if let Err(e) = table.insert(s) {
            c.push(format!("symbols[{k}].name"), e.to_string());
        }
    }
    for (name, _) in bindings {
        if !table.get(name).is_some_and(Symbol::is_parameter) {
            c.push("symbols", format!("--set {name}: not a declared parameter"));
        }
    }

    let metric = c.matrix(&table, bindings, "metric", &manifest.metric, n);
    let phi = c.matrix(&table, bindings, "phi", &manifest.phi, n);
    let xi = c.exprs(&table, bindings, "xi", &manifest.xi, n);
    let frame = frame_data(&mut c, manifest, &table, bindings);

    if !c.issues.is_empty() {
        return Err(IngestError::Invalid(c.issues));
    }
    let (metric, phi, xi, frame) = (metric.unwrap(), phi.unwrap(), xi.unwrap(), frame.unwrap());
    let metric = ExprMatrix::from_rows(metric).expect("square by construction");
    let built = match frame {
        FrameData::Chart(chart) => FrameManifold::from_chart(table, chart, metric),
        FrameData::Abstract(s) => FrameManifold::from_structure(table, s, metric),
    };
    let manifold = match built {
        Ok(m) => m,
        Err(e) => {
            c.push("frame", e.to_string());
            return Err(IngestError::Invalid(c.issues));
        }
    };
    let structure = match ContactStructure::new(
        &manifold,
        FrameOperator::from_images(phi.into_iter().map(VectorField).collect()),
        VectorField(xi),
    ) {
        Ok(s) => s,
        Err(e) => {
            c.push("phi", e.to_string());
            return Err(IngestError::Invalid(c.issues));
        }
    };

    let violations = violations(&manifold, &structure).map_err(|e| {
        c.push("frame", e);
        IngestError::Invalid(std::mem::take(&mut c.issues))
    })?;
    Ok(Loaded {
        manifest: manifest.clone(),
        bindings: bindings.to_vec(),
        manifold,
        structure,
        violations,
    })
}

enum FrameData {
    Chart(ChartFrame),
    Abstract(StructureFunctions),
}

fn frame_data(
    c: &mut Collector,
    m: &Manifest,
    t: &SymbolTable,
    b: &[(String, Expr)],
) -> Option<FrameData> {
    let n = m.dimension;
    let f = &m.frame;
    match m.mode {
        Mode::Chart => {
            if f.brackets.is_some() {
                c.push(
                    "frame.brackets",
                    "chart mode derives brackets; remove this field",
                );
            }
            let (Some(coords), Some(vectors)) = (&f.coordinates, &f.vectors) else {
                c.push("frame", "chart mode needs `coordinates` and `vectors`");
                return None;
            };
            let mut symbols = Vec::new();
            if coords.len() != n {
                c.push(
                    "frame.coordinates",
                    format!("expected {n} coordinates, found {}", coords.len()),
                );
            }
            for (k, name) in coords.iter().enumerate() {
                match t.get(name) {
                    Some(s) if !s.is_parameter() => symbols.push(s.clone()),
                    Some(_) => c.push(
                        format!("frame.coordinates[{k}]"),
                        format!("`{name}` is declared as a parameter"),
                    ),
                    None => c.push(
                        format!("frame.coordinates[{k}]"),
                        format!("`{name}` is not declared"),
                    ),
                }
            }
            let vectors = c.matrix(t, b, "frame.vectors", vectors, n)?;
            if symbols.len() != n {
                return None;
            }
            match ChartFrame::new(symbols, vectors) {
                Ok(chart) => Some(FrameData::Chart(chart)),
                Err(e) => {
                    c.push("frame.vectors", e.to_string());
                    None
                }
            }
        }
        Mode::Abstract => {
            if f.coordinates.is_some() || f.vectors.is_some() {
                c.push("frame", "abstract mode takes `brackets` only");
            }
            let Some(brackets) = &f.brackets else {
                c.push("frame", "abstract mode needs `brackets`");
                return None;
            };
            let mut s = StructureFunctions::zero(n);
            let mut seen = std::collections::BTreeSet::new();
            let mut ok = true;
            for (k, d) in brackets.iter().enumerate() {
                let path = format!("frame.brackets[{k}]");
                if !(1 <= d.i && d.i < d.j && d.j <= n) {
                    c.push(
                        path,
                        format!("need 1 <= i < j <= {n}, got i = {}, j = {}", d.i, d.j),
                    );
                    ok = false;
                    continue;
                }
                if !seen.insert((d.i, d.j)) {
                    c.push(path, format!("[e{},e{}] given twice", d.i, d.j));
                    ok = false;
                    continue;
                }
                match c.exprs(t, b, &format!("{path}.components"), &d.components, n) {
                    Some(v) => s.set(d.i - 1, d.j - 1, VectorField(v)),
                    None => ok = false,
                }
            }
            ok.then_some(FrameData::Abstract(s))
        }
    }
}

fn violations(m: &FrameManifold, c: &ContactStructure) -> Result<Vec<Violation>, String> {
    let mut out = Vec::new();
    let frames = |ix: &[usize]| {
        ix.iter()
            .map(|i| format!("e{}", i + 1))
            .collect::<Vec<_>>()
            .join(",")
    };
    let jacobi = m.check_jacobi().map_err(|e| e.to_string())?;
    for v in jacobi.violations {
        let (i, j, k) = v.triple;
        out.push(Violation {
            severity: Severity::Error,
            path: "frame".into(),
            message: format!(
                "Jacobi identity fails on (e{},e{},e{}): cyclic sum {}",
                i + 1,
                j + 1,
                k + 1,
                v.cyclic_sum
            ),
        });
    }
    let axioms = validate_almost_contact(m, c).map_err(|e| e.to_string())?;
    for v in axioms.violations {
        out.push(Violation {
            severity: Severity::Error,
            path: "phi".into(),
            message: format!(
                "{} fails on ({}): residual {}",
                v.axiom,
                frames(&v.indices),
                v.residual
            ),
        });
    }
    if out.is_empty() {
        let cm = check_contact_metric(m, c).map_err(|e| e.to_string())?;
        for v in cm.violations {
            out.push(Violation {
                severity: Severity::Warning,
                path: "phi".into(),
                message: format!(
                    "{} fails on ({}): residual {}",
                    v.axiom,
                    frames(&v.indices),
                    v.residual
                ),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use contact_tensor::catalog;

    #[test]
    fn round_trip_objects() {
        for entry in catalog::all_entries() {
            let text = export(&entry).to_json();
            let (m, map) = parse(&text).unwrap();
            let loaded = load(&m, Some(&map), &[]).unwrap();
            assert_eq!(loaded.manifold, entry.manifold, "{}", entry.id);
            assert_eq!(loaded.structure, entry.structure, "{}", entry.id);
            assert!(!loaded.has_errors(), "{}", entry.id);
            assert_eq!(
                !loaded.violations.is_empty(),
                entry.invalid_fixture,
                "{}",
                entry.id
            );
        }
    }

    #[test]
    fn bindings() {
        let b = parse_bindings(&["lambda=1/2".into(), "mu = -1".into()]).unwrap();
        assert_eq!(b[0], ("lambda".to_string(), Expr::ratio(1, 2)));
        assert_eq!(b[1].1, Expr::int(-1));
        assert!(parse_bindings(&["lambda".into()]).is_err());
        assert!(parse_bindings(&["lambda=x".into()]).is_err());
    }
}
