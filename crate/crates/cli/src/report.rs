//! The full computation for one manifest and its serialized form.

use std::collections::BTreeMap;

use contact_tensor::classify::{
    classify, self_checks, ClassificationReport, KappaMuVerdict, RecurrenceVerdict, Verdict,
};
use contact_tensor::contact::{h_eigenstructure, ContactError};
use contact_tensor::curvature::Geometry;
use contact_tensor::expr::Expr;
use contact_tensor::frame::{FrameError, OneForm, VectorField};
use serde::Serialize;
use thiserror::Error;

use crate::manifest::{Loaded, Severity};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Nonzero frame components, `"e2" -> "-4/x"`.
pub type Components = BTreeMap<String, String>;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("structure is not almost contact metric; run with --lint for the full list:\n{0}")]
    Invalid(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Contact(#[from] ContactError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub manifest: ManifestEcho,
    pub bindings: BTreeMap<String, String>,
    pub brackets: BTreeMap<String, Components>,
    pub structure: StructureSection,
    pub connection: BTreeMap<String, Components>,
    pub curvature: BTreeMap<String, Components>,
    pub ricci: RicciSection,
    pub nabla_r: BTreeMap<String, Components>,
    pub classification: ClassificationSection,
    pub diagnostics: Vec<String>,
    pub self_checks: SelfChecks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestEcho {
    pub name: String,
    pub dimension: usize,
    pub mode: String,
    pub symbols: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureSection {
    pub phi: BTreeMap<String, Components>,
    pub xi: Components,
    pub eta: Components,
    pub h: BTreeMap<String, Components>,
    /// `λ` with `h = diag(λ on D(λ), -λ on D(-λ), 0)`, when `h` is frame-diagonal.
    pub h_eigenvalue: Option<String>,
    pub h_eigenspaces: Option<Eigenspaces>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eigenspaces {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    pub kernel: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RicciSection {
    pub tensor: BTreeMap<String, String>,
    pub operator: BTreeMap<String, Components>,
    pub scalar: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationSection {
    pub contact_metric: bool,
    pub sasakian: VerdictOut,
    pub kappa_mu: KappaMuOut,
    pub flat: bool,
    pub constant_curvature: Option<String>,
    pub locally_symmetric: VerdictOut,
    pub phi_symmetric: VerdictOut,
    pub locally_phi_symmetric: VerdictOut,
    pub phi_recurrent: RecurrenceOut,
    pub locally_phi_recurrent: RecurrenceOut,
    pub implication_chain: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictOut {
    pub holds: bool,
    pub witness: Option<WitnessOut>,
}

/// 1-based frame indices and the offending value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessOut {
    pub indices: Vec<usize>,
    pub value: Components,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaMuOut {
    pub status: String,
    pub kappa: Option<String>,
    pub mu: Option<String>,
    pub constant: bool,
    pub kappa_le_one: Option<bool>,
    pub witness: Option<KappaMuWitnessOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaMuWitnessOut {
    /// 1-based `(i, j)` of the failing equation `R(e_i,e_j)ξ = ...`.
    pub pair: [usize; 2],
    /// Output component of that equation, e.g. `"e2"`.
    pub component: String,
    pub curvature: Components,
    pub kappa_coefficient: String,
    pub mu_coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceOut {
    pub status: String,
    pub scope: String,
    #[serde(rename = "A")]
    pub a: Option<Components>,
    pub obstruction: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfChecks {
    pub passed: bool,
    pub failures: Vec<String>,
}

pub(crate) fn e(i: usize) -> String {
    format!("e{}", i + 1)
}

pub fn components(v: &VectorField) -> Components {
    v.components()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (e(i), c.to_string()))
        .collect()
}

fn form(w: &OneForm) -> Components {
    components(&VectorField(w.0.clone()))
}

fn verdict(v: &Verdict) -> VerdictOut {
    VerdictOut {
        holds: v.holds,
        witness: v.witness.as_ref().map(|w| WitnessOut {
            indices: w.indices.iter().map(|i| i + 1).collect(),
            value: components(&w.value),
        }),
    }
}

fn kappa_mu(v: &KappaMuVerdict) -> KappaMuOut {
    KappaMuOut {
        status: v.status.as_str().into(),
        kappa: v.kappa.as_ref().map(Expr::to_string),
        mu: v.mu.as_ref().map(Expr::to_string),
        constant: v.constant_flag,
        kappa_le_one: v.kappa_le_one,
        witness: v.witness.as_ref().map(|w| KappaMuWitnessOut {
            pair: [w.i + 1, w.j + 1],
            component: e(w.component),
            curvature: components(&w.curvature),
            kappa_coefficient: w.kappa_coefficient.to_string(),
            mu_coefficient: w.mu_coefficient.to_string(),
        }),
    }
}

fn recurrence(v: &RecurrenceVerdict) -> RecurrenceOut {
    RecurrenceOut {
        status: v.status.as_str().into(),
        scope: v.scope.as_str().into(),
        a: v.a.as_ref().map(form),
        obstruction: v.obstruction.as_ref().map(ToString::to_string),
    }
}

fn classification(r: &ClassificationReport) -> ClassificationSection {
    ClassificationSection {
        contact_metric: r.contact_valid,
        sasakian: verdict(&r.sasakian),
        kappa_mu: kappa_mu(&r.kappa_mu),
        flat: r.flat,
        constant_curvature: r.constant_curvature.as_ref().map(Expr::to_string),
        locally_symmetric: verdict(&r.locally_symmetric),
        phi_symmetric: verdict(&r.phi_symmetric),
        locally_phi_symmetric: verdict(&r.locally_phi_symmetric),
        phi_recurrent: recurrence(&r.phi_recurrent),
        locally_phi_recurrent: recurrence(&r.locally_phi_recurrent),
        implication_chain: r.implication_chain_holds(),
    }
}

/// Everything computed for one manifest.
pub struct Analysis {
    pub geometry: Geometry,
    pub classification: ClassificationReport,
    pub report: Report,
}

/// brackets → h → connection → curvature → ∇R → classification → self-checks.
pub fn analyze(loaded: &Loaded) -> Result<Analysis, ReportError> {
    if loaded.has_errors() {
        let msgs: Vec<String> = loaded
            .violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
            .map(|v| format!("  {v}"))
            .collect();
        return Err(ReportError::Invalid(msgs.join("\n")));
    }
    let m = &loaded.manifold;
    let c = &loaded.structure;
    let n = m.dim();
    let geo = Geometry::compute(m)?;
    geo.fill_nabla_r();
    let (cls, h) = classify(&geo, c)?;

    let mut diagnostics: Vec<String> = loaded
        .violations
        .iter()
        .map(|v| v.message.clone())
        .collect();
    let (h_eigenvalue, h_eigenspaces) = match h_eigenstructure(&h) {
        Ok(es) => {
            let names = |v: &[usize]| v.iter().map(|&i| e(i)).collect();
            (
                es.lambda.as_ref().map(Expr::to_string),
                Some(Eigenspaces {
                    positive: names(&es.positive),
                    negative: names(&es.negative),
                    kernel: names(&es.kernel),
                }),
            )
        }
        Err(err) => {
            diagnostics.push(err.to_string());
            (None, None)
        }
    };
    diagnostics.extend(cls.kappa_mu.diagnostics.iter().cloned());
    if cls.kappa_mu.kappa_le_one == Some(false) {
        diagnostics.push("kappa exceeds 1 at a sampled parameter value".into());
    }

    let pairs = || (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)));
    let nonzero = |v: &VectorField| !v.is_zero();
    let s = m.structure();
    let brackets = pairs()
        .filter(|&(i, j)| nonzero(s.bracket(i, j)))
        .map(|(i, j)| (format!("[{},{}]", e(i), e(j)), components(s.bracket(i, j))))
        .collect();
    let per_frame = |f: &dyn Fn(usize) -> VectorField, label: &str| {
        (0..n)
            .map(|i| (i, f(i)))
            .filter(|(_, v)| nonzero(v))
            .map(|(i, v)| (format!("{label} {}", e(i)), components(&v)))
            .collect::<BTreeMap<_, _>>()
    };
    let structure = StructureSection {
        phi: per_frame(&|i| c.phi().image(i).clone(), "phi"),
        xi: components(c.xi()),
        eta: form(c.eta()),
        h: per_frame(&|i| h.operator().image(i).clone(), "h"),
        h_eigenvalue,
        h_eigenspaces,
    };
    let conn = geo.connection();
    let connection = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| nonzero(conn.get(i, j)))
        .map(|(i, j)| {
            (
                format!("nabla_{} {}", e(i), e(j)),
                components(conn.get(i, j)),
            )
        })
        .collect();
    let r = geo.riemann();
    let curvature = pairs()
        .flat_map(|(i, j)| (0..n).map(move |k| (i, j, k)))
        .filter(|&(i, j, k)| nonzero(r.get(i, j, k)))
        .map(|(i, j, k)| {
            (
                format!("R({},{}){}", e(i), e(j), e(k)),
                components(r.get(i, j, k)),
            )
        })
        .collect();
    let rd = geo.ricci();
    let ricci = RicciSection {
        tensor: (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !rd.ricci.get(i, j).is_zero())
            .map(|(i, j)| {
                (
                    format!("S({},{})", e(i), e(j)),
                    rd.ricci.get(i, j).to_string(),
                )
            })
            .collect(),
        operator: per_frame(&|i| rd.apply_q(i), "Q"),
        scalar: rd.scalar.to_string(),
    };
    let mut nabla_r = BTreeMap::new();
    for w in 0..n {
        for (i, j) in pairs() {
            for k in 0..n {
                let v = geo.nabla_r(w, i, j, k);
                if nonzero(v) {
                    nabla_r.insert(
                        format!("(nabla_{} R)({},{}){}", e(w), e(i), e(j), e(k)),
                        components(v),
                    );
                }
            }
        }
    }

    let failures: Vec<String> = self_checks(&geo, c, &h, &cls)
        .iter()
        .map(ToString::to_string)
        .collect();
    let mf = &loaded.manifest;
    let report = Report {
        schema_version: REPORT_SCHEMA_VERSION,
        manifest: ManifestEcho {
            name: mf.name.clone(),
            dimension: mf.dimension,
            mode: mf.mode.as_str().into(),
            symbols: mf
                .symbols
                .iter()
                .map(|s| {
                    let kind = serde_json::to_value(s.kind).expect("kind serializes");
                    (
                        s.name.clone(),
                        kind.as_str().unwrap_or_default().to_string(),
                    )
                })
                .collect(),
            provenance: mf.provenance.clone(),
        },
        bindings: loaded
            .bindings
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect(),
        brackets,
        structure,
        connection,
        curvature,
        ricci,
        nabla_r,
        classification: classification(&cls),
        diagnostics,
        self_checks: SelfChecks {
            passed: failures.is_empty(),
            failures,
        },
    };
    Ok(Analysis {
        geometry: geo,
        classification: cls,
        report,
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
