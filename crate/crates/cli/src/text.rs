//! Aligned-table rendering of a [`Report`].

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::report::{Components, RecurrenceOut, Report, VerdictOut};

/// ANSI styling, off unless `CONTACT_TENSOR_COLOR=1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Style {
    pub color: bool,
}

impl Style {
    pub fn from_env() -> Self {
        Style {
            color: std::env::var("CONTACT_TENSOR_COLOR").is_ok_and(|v| v.trim() == "1"),
        }
    }

    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    pub fn heading(&self, s: &str) -> String {
        self.paint("1", s)
    }

    pub fn flag(&self, b: bool) -> String {
        if b {
            self.paint("32", "true")
        } else {
            self.paint("31", "false")
        }
    }
}

/// `(2/x)*e1 + e3`, matching the vector-field display of the core crate.
pub fn vector(c: &Components) -> String {
    combination(c, "e")
}

/// A 1-form in the dual coframe, `theta1 + (x)*theta3`.
pub fn covector(c: &Components) -> String {
    combination(c, "theta")
}

fn combination(c: &Components, basis: &str) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut keys: Vec<&String> = c.keys().collect();
    keys.sort_by_key(|k| k[1..].parse::<usize>().unwrap_or(usize::MAX));
    keys.iter()
        .map(|k| match c[*k].as_str() {
            "1" => format!("{basis}{}", &k[1..]),
            v => format!("({v})*{basis}{}", &k[1..]),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn table(out: &mut String, rows: &[(String, String)]) {
    if rows.is_empty() {
        out.push_str("  (all zero)\n");
        return;
    }
    let w = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    for (k, v) in rows {
        let _ = writeln!(out, "  {k:<w$}  {v}");
    }
}

fn vectors(m: &BTreeMap<String, Components>) -> Vec<(String, String)> {
    m.iter().map(|(k, v)| (k.clone(), vector(v))).collect()
}

fn verdict(st: &Style, v: &VerdictOut) -> String {
    match &v.witness {
        None => st.flag(v.holds),
        Some(w) => {
            let ix: Vec<String> = w.indices.iter().map(ToString::to_string).collect();
            format!(
                "{}  witness ({}) = {}",
                st.flag(v.holds),
                ix.join(","),
                vector(&w.value)
            )
        }
    }
}

fn recurrence(v: &RecurrenceOut) -> String {
    let mut s = format!("{} ({})", v.status, v.scope);
    if let Some(a) = &v.a {
        let _ = write!(s, "  A = {}", covector(a));
    }
    if let Some(o) = &v.obstruction {
        let _ = write!(s, "  obstruction: {o}");
    }
    s
}

pub fn render(r: &Report, st: &Style) -> String {
    let mut out = String::new();
    let m = &r.manifest;
    let _ = writeln!(
        out,
        "{}  ({}, dimension {})",
        st.heading(&m.name),
        m.mode,
        m.dimension
    );
    if let Some(p) = &m.provenance {
        let _ = writeln!(out, "  {p}");
    }
    if !r.bindings.is_empty() {
        let b: Vec<String> = r
            .bindings
            .iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        let _ = writeln!(out, "  with {}", b.join(", "));
    }

    let mut section = |title: &str, rows: Vec<(String, String)>| {
        let _ = writeln!(out, "\n{}", st.heading(title));
        table(&mut out, &rows);
    };
    section("Brackets", vectors(&r.brackets));

    let s = &r.structure;
    let mut rows = vectors(&s.phi);
    rows.push(("xi".into(), vector(&s.xi)));
    rows.push(("eta".into(), covector(&s.eta)));
    rows.extend(vectors(&s.h));
    if let Some(l) = &s.h_eigenvalue {
        rows.push(("h eigenvalue".into(), l.clone()));
    }
    section("Structure", rows);
    section("Connection", vectors(&r.connection));
    section("Curvature", vectors(&r.curvature));

    let mut rows: Vec<(String, String)> = r
        .ricci
        .tensor
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    rows.extend(vectors(&r.ricci.operator));
    rows.push(("r".into(), r.ricci.scalar.clone()));
    section("Ricci", rows);
    section("Covariant derivative of R", vectors(&r.nabla_r));

    let c = &r.classification;
    let km = &c.kappa_mu;
    let mut nullity = km.status.clone();
    if let Some(k) = &km.kappa {
        let _ = write!(nullity, "  kappa = {k}");
    }
    if let Some(mu) = &km.mu {
        let _ = write!(nullity, "  mu = {mu}");
    }
    if let Some(w) = &km.witness {
        let [i, j] = w.pair;
        let _ = write!(
            nullity,
            "  witness R(e{i},e{j})xi, {} component",
            w.component
        );
    }
    let rows = vec![
        ("contact metric".into(), st.flag(c.contact_metric)),
        ("Sasakian".into(), verdict(st, &c.sasakian)),
        ("(kappa,mu)-nullity".into(), nullity),
        ("flat".into(), st.flag(c.flat)),
        (
            "constant curvature".into(),
            c.constant_curvature.clone().unwrap_or_else(|| "no".into()),
        ),
        (
            "locally symmetric".into(),
            verdict(st, &c.locally_symmetric),
        ),
        ("phi-symmetric".into(), verdict(st, &c.phi_symmetric)),
        (
            "locally phi-symmetric".into(),
            verdict(st, &c.locally_phi_symmetric),
        ),
        ("phi-recurrent".into(), recurrence(&c.phi_recurrent)),
        (
            "locally phi-recurrent".into(),
            recurrence(&c.locally_phi_recurrent),
        ),
        ("implication chain".into(), st.flag(c.implication_chain)),
    ];
    section("Classification", rows);

    let _ = writeln!(out, "\n{}", st.heading("Diagnostics"));
    if r.diagnostics.is_empty() {
        out.push_str("  none\n");
    }
    for d in &r.diagnostics {
        let _ = writeln!(out, "  {d}");
    }
    let _ = writeln!(out, "\n{}", st.heading("Self-checks"));
    if r.self_checks.passed {
        out.push_str("  all passed\n");
    }
    for f in &r.self_checks.failures {
        let _ = writeln!(out, "  FAILED {f}");
    }
    out
}
