//! Classification over a grid of `(λ, μ)` values for a parametrized
//! manifest. Rows are computed in parallel and emitted in grid order.

use contact_tensor::classify::{classify, self_checks, RecurrenceStatus};
use contact_tensor::curvature::Geometry;
use contact_tensor::expr::{Expr, SymbolTable};
use rayon::prelude::*;
use serde::Serialize;

use crate::manifest::{load, IngestError, Issue, Manifest};

pub const DEFAULT_LAMBDA: [&str; 4] = ["1/4", "1/2", "1", "3/2"];
pub const DEFAULT_MU: [&str; 4] = ["-1", "0", "1", "2"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub lambda: String,
    pub mu: String,
    /// `ok`, `skipped` (λ = 0) or `error`.
    pub status: String,
    pub contact_metric: Option<bool>,
    pub sasakian: Option<bool>,
    pub kappa_mu: Option<String>,
    pub kappa: Option<String>,
    pub flat: Option<bool>,
    pub constant_curvature: Option<String>,
    pub locally_symmetric: Option<bool>,
    pub phi_symmetric: Option<bool>,
    pub locally_phi_symmetric: Option<bool>,
    /// Recurrent or trivially recurrent (global scope).
    pub phi_recurrent: Option<bool>,
    pub phi_recurrent_status: Option<String>,
    pub locally_phi_recurrent_status: Option<String>,
    pub implication_chain: Option<bool>,
    pub self_checks_passed: Option<bool>,
    pub note: String,
}

impl SweepRow {
    fn blank(lambda: &Expr, mu: &Expr, status: &str, note: String) -> Self {
        SweepRow {
            lambda: lambda.to_string(),
            mu: mu.to_string(),
            status: status.into(),
            contact_metric: None,
            sasakian: None,
            kappa_mu: None,
            kappa: None,
            flat: None,
            constant_curvature: None,
            locally_symmetric: None,
            phi_symmetric: None,
            locally_phi_symmetric: None,
            phi_recurrent: None,
            phi_recurrent_status: None,
            locally_phi_recurrent_status: None,
            implication_chain: None,
            self_checks_passed: None,
            note,
        }
    }
}

/// Comma-separated rationals.
pub fn parse_grid(flag: &str, raw: &str) -> Result<Vec<Expr>, IngestError> {
    raw.split(',')
        .map(|s| {
            SymbolTable::new()
                .parse(s.trim())
                .ok()
                .filter(Expr::is_constant)
                .ok_or_else(|| IngestError::Binding(format!("{flag} {s}")))
        })
        .collect()
}

/// Fails up front if the template does not declare both parameters.
pub fn run(
    template: &Manifest,
    lambdas: &[Expr],
    mus: &[Expr],
) -> Result<Vec<SweepRow>, IngestError> {
    let missing: Vec<Issue> = ["lambda", "mu"]
        .into_iter()
        .filter(|p| !template.symbols.iter().any(|s| s.name == *p))
        .map(|p| Issue {
            path: "symbols".into(),
            line: None,
            column: None,
            message: format!("sweep template must declare the parameter `{p}`"),
        })
        .collect();
    if !missing.is_empty() {
        return Err(IngestError::Invalid(missing));
    }
    let grid: Vec<(Expr, Expr)> = lambdas
        .iter()
        .flat_map(|l| mus.iter().map(move |m| (l.clone(), m.clone())))
        .collect();
    Ok(grid.par_iter().map(|(l, m)| row(template, l, m)).collect())
}

fn row(template: &Manifest, lambda: &Expr, mu: &Expr) -> SweepRow {
    if lambda.is_zero() {
        return SweepRow::blank(
            lambda,
            mu,
            "skipped",
            "lambda = 0: Sasakian boundary".into(),
        );
    }
    let bindings = vec![
        ("lambda".to_string(), lambda.clone()),
        ("mu".to_string(), mu.clone()),
    ];
    let loaded = match load(template, None, &bindings) {
        Ok(l) if !l.has_errors() => l,
        Ok(l) => {
            let msgs: Vec<String> = l.violations.iter().map(ToString::to_string).collect();
            return SweepRow::blank(lambda, mu, "error", msgs.join("; "));
        }
        Err(e) => return SweepRow::blank(lambda, mu, "error", e.to_string().replace('\n', " ")),
    };
    let result = Geometry::compute(&loaded.manifold)
        .map_err(|e| e.to_string())
        .and_then(|geo| {
            classify(&geo, &loaded.structure)
                .map(|(r, h)| (geo, r, h))
                .map_err(|e| e.to_string())
        });
    let (geo, r, h) = match result {
        Ok(v) => v,
        Err(e) => return SweepRow::blank(lambda, mu, "error", e),
    };
    let failures = self_checks(&geo, &loaded.structure, &h, &r);
    let mut out = SweepRow::blank(lambda, mu, "ok", String::new());
    out.contact_metric = Some(r.contact_valid);
    out.sasakian = Some(r.sasakian.holds);
    out.kappa_mu = Some(r.kappa_mu.status.as_str().into());
    out.kappa = r.kappa_mu.kappa.as_ref().map(Expr::to_string);
    out.flat = Some(r.flat);
    out.constant_curvature = r.constant_curvature.as_ref().map(Expr::to_string);
    out.locally_symmetric = Some(r.locally_symmetric.holds);
    out.phi_symmetric = Some(r.phi_symmetric.holds);
    out.locally_phi_symmetric = Some(r.locally_phi_symmetric.holds);
    out.phi_recurrent = Some(r.phi_recurrent.status != RecurrenceStatus::NotRecurrent);
    out.phi_recurrent_status = Some(r.phi_recurrent.status.as_str().into());
    out.locally_phi_recurrent_status = Some(r.locally_phi_recurrent.status.as_str().into());
    out.implication_chain = Some(r.implication_chain_holds());
    out.self_checks_passed = Some(failures.is_empty());
    out.note = failures
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ");
    out
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

pub fn to_json(rows: &[SweepRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}
