//! Exact structure classifiers over the curvature tables.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::contact::{
    check_contact_metric, compute_h, validate_almost_contact, ContactError, ContactStructure,
    HOperator,
};
use crate::curvature::{
    contact_derivative_checks, geometric_self_checks, h_squared_check,
    kappa_mu_phi_derivative_check, nabla_structure_tensors, Geometry, InvariantFailure, RicciData,
    RiemannTensor,
};
use crate::expr::Expr;
use crate::frame::{FrameManifold, OneForm, VectorField};
use crate::linalg::{solve_linear, LinearEquation, LinearSolution};

/// Which frame fields a φ-symmetry or φ-recurrence test ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Global,
    /// Only frame fields orthogonal to `ξ`.
    Local,
}

impl Scope {
    fn indices(self, c: &ContactStructure) -> Vec<usize> {
        match self {
            Scope::Global => (0..c.dim()).collect(),
            Scope::Local => c.horizontal_indices(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Global => "global",
            Scope::Local => "local",
        }
    }
}

/// A nonzero frame component that should have vanished: `indices` are the
/// tensor arguments, `value` the offending vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub value: VectorField,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from_witness(witness: Option<Witness>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// `R(e_i,e_j)ξ = η(e_j)e_i - η(e_i)e_j`, scanned over `i > j`.
pub fn is_sasakian(geo: &Geometry, c: &ContactStructure) -> Verdict {
    let n = geo.dim();
    let r = geo.riemann();
    for i in 0..n {
        for j in 0..i {
            let lhs = r.apply(i, j, c.xi());
            let rhs = &VectorField::basis(n, i).scale(&c.eta()[j])
                - &VectorField::basis(n, j).scale(&c.eta()[i]);
            let diff = &lhs - &rhs;
            if !diff.is_zero() {
                return Verdict::from_witness(Some(Witness {
                    indices: vec![i, j],
                    value: diff,
                }));
            }
        }
    }
    Verdict::from_witness(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaMuStatus {
    Consistent,
    Inconsistent,
    Underdetermined,
}

impl KappaMuStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            KappaMuStatus::Consistent => "consistent",
            KappaMuStatus::Inconsistent => "inconsistent",
            KappaMuStatus::Underdetermined => "underdetermined",
        }
    }
}

/// The first equation `R(e_i,e_j)ξ|_l = κ·a + μ·b` that cannot be met.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaMuWitness {
    pub i: usize,
    pub j: usize,
    /// Output component.
    pub component: usize,
    /// `R(e_i,e_j)ξ`, in full.
    pub curvature: VectorField,
    /// Coefficients of `κ` and `μ` in this equation.
    pub kappa_coefficient: Expr,
    pub mu_coefficient: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaMuVerdict {
    pub status: KappaMuStatus,
    /// `None` when inconsistent or left free.
    pub kappa: Option<Expr>,
    pub mu: Option<Expr>,
    pub witness: Option<KappaMuWitness>,
    /// Whether the determined `κ`, `μ` are free of coordinates.
    pub constant_flag: bool,
    /// `κ ≤ 1` at every sampled parameter binding; `None` when not checked.
    pub kappa_le_one: Option<bool>,
    pub diagnostics: Vec<String>,
}

/// Sample values for the `κ ≤ 1` check.
const SAMPLES: [(i64, i64); 9] = [
    (-2, 1),
    (-1, 1),
    (-1, 2),
    (0, 1),
    (1, 4),
    (1, 2),
    (1, 1),
    (3, 2),
    (2, 1),
];

/// Solves `R(X,Y)ξ = κ(η(Y)X - η(X)Y) + μ(η(Y)hX - η(X)hY)` for `κ`, `μ`
/// over all frame pairs `i < j` and output components, in that order.
pub fn solve_kappa_mu(geo: &Geometry, c: &ContactStructure, h: &HOperator) -> KappaMuVerdict {
    let m = geo.manifold();
    let n = m.dim();
    let r = geo.riemann();
    let eta = c.eta();
    let mut eqs = Vec::new();
    let mut origin = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = r.apply(i, j, c.xi());
            let ei = m.basis(i);
            let ej = m.basis(j);
            let kap = &ei.scale(&eta[j]) - &ej.scale(&eta[i]);
            let mu = &h.apply(&ei).scale(&eta[j]) - &h.apply(&ej).scale(&eta[i]);
            for l in 0..n {
                eqs.push(LinearEquation {
                    coeffs: vec![kap.0[l].clone(), mu.0[l].clone()],
                    rhs: lhs.0[l].clone(),
                });
                origin.push((i, j, l, lhs.clone()));
            }
        }
    }
    let mut verdict = KappaMuVerdict {
        status: KappaMuStatus::Inconsistent,
        kappa: None,
        mu: None,
        witness: None,
        constant_flag: false,
        kappa_le_one: None,
        diagnostics: vec![],
    };
    match solve_linear(2, &eqs) {
        LinearSolution::Inconsistent { index } => {
            let (i, j, l, lhs) = origin.swap_remove(index);
            let eq = &eqs[index];
            verdict.witness = Some(KappaMuWitness {
                i,
                j,
                component: l,
                curvature: lhs,
                kappa_coefficient: eq.coeffs[0].clone(),
                mu_coefficient: eq.coeffs[1].clone(),
            });
        }
        LinearSolution::Unique(v) => {
            verdict.status = KappaMuStatus::Consistent;
            verdict.kappa = Some(v[0].clone());
            verdict.mu = Some(v[1].clone());
        }
        LinearSolution::Underdetermined { particular, free } => {
            verdict.status = KappaMuStatus::Underdetermined;
            verdict.kappa = (!free.contains(&0)).then(|| particular[0].clone());
            verdict.mu = (!free.contains(&1)).then(|| particular[1].clone());
        }
    }
    if verdict.status != KappaMuStatus::Inconsistent {
        let symbols = m.symbols();
        verdict.constant_flag = verdict
            .kappa
            .iter()
            .chain(&verdict.mu)
            .all(|e| symbols.is_parameter_only(e));
        if !verdict.constant_flag {
            verdict
                .diagnostics
                .push("nullity with non-constant coefficients".into());
        } else if let Some(k) = &verdict.kappa {
            verdict.kappa_le_one = Some(sample_le_one(k));
        }
    }
    verdict
}

/// `k ≤ 1` at every sampled binding of its variables (poles skipped).
fn sample_le_one(k: &Expr) -> bool {
    let vars: Vec<String> = k.variables().iter().map(|v| v.to_string()).collect();
    let total = SAMPLES.len().pow(vars.len().min(3) as u32);
    let one = BigRational::one();
    (0..total).all(|mut idx| {
        let mut env = HashMap::new();
        for v in &vars {
            let (a, b) = SAMPLES[idx % SAMPLES.len()];
            idx /= SAMPLES.len();
            env.insert(v.clone(), BigRational::new(a.into(), b.into()));
        }
        k.eval(&env).map_or(true, |val| val <= one)
    })
}

pub fn is_flat(r: &RiemannTensor) -> bool {
    r.is_zero()
}

/// The `c` with `R(e_i,e_j)e_k = c(g_jk e_i - g_ik e_j)` everywhere, if any.
pub fn constant_curvature(m: &FrameManifold, r: &RiemannTensor) -> Option<Expr> {
    let n = m.dim();
    let g = m.metric();
    let mut eqs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let model = &m.basis(i).scale(g.get(j, k)) - &m.basis(j).scale(g.get(i, k));
                let lhs = r.get(i, j, k);
                for l in 0..n {
                    eqs.push(LinearEquation {
                        coeffs: vec![model.0[l].clone()],
                        rhs: lhs.0[l].clone(),
                    });
                }
            }
        }
    }
    match solve_linear(1, &eqs) {
        LinearSolution::Unique(v) => v.into_iter().next(),
        LinearSolution::Underdetermined { .. } => Some(Expr::zero()),
        LinearSolution::Inconsistent { .. } => None,
    }
}

fn quads(idx: &[usize]) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
    idx.iter().flat_map(move |&w| {
        idx.iter().flat_map(move |&i| {
            idx.iter()
                .flat_map(move |&j| idx.iter().map(move |&k| (w, i, j, k)))
        })
    })
}

/// `∇R = 0`; witness is the first nonzero `(∇_{e_w}R)(e_i,e_j)e_k`.
pub fn is_locally_symmetric(geo: &Geometry) -> Verdict {
    let all: Vec<usize> = (0..geo.dim()).collect();
    let witness = quads(&all).find_map(|(w, i, j, k)| {
        let v = geo.nabla_r(w, i, j, k);
        (!v.is_zero()).then(|| Witness {
            indices: vec![w, i, j, k],
            value: v.clone(),
        })
    });
    Verdict::from_witness(witness)
}

fn phi_squared(c: &ContactStructure, v: &VectorField) -> VectorField {
    c.phi().apply(&c.phi().apply(v))
}

/// `φ²((∇_W R)(X,Y)Z) = 0` for frame fields in `scope`.
pub fn phi_symmetry(geo: &Geometry, c: &ContactStructure, scope: Scope) -> Verdict {
    let idx = scope.indices(c);
    let witness = quads(&idx).find_map(|(w, i, j, k)| {
        let v = phi_squared(c, geo.nabla_r(w, i, j, k));
        (!v.is_zero()).then(|| Witness {
            indices: vec![w, i, j, k],
            value: v,
        })
    });
    Verdict::from_witness(witness)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceStatus {
    Recurrent,
    NotRecurrent,
    TriviallyRecurrent,
}

impl RecurrenceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RecurrenceStatus::Recurrent => "recurrent",
            RecurrenceStatus::NotRecurrent => "not_recurrent",
            RecurrenceStatus::TriviallyRecurrent => "trivially_recurrent",
        }
    }
}

/// Why no nonzero `A` exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// Component `l` of `φ²((∇_{e_w}R)(e_i,e_j)e_k) = A_w R(e_i,e_j)e_k`
    /// contradicts the value of `A_w` fixed so far (`None` if unset).
    Component {
        w: usize,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        lhs: Expr,
        curvature: Expr,
        a_w: Option<Expr>,
    },
    /// Consistent, but only `A = 0` solves.
    OnlyZero,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::OnlyZero => f.write_str("only A=0"),
            Obstruction::Component {
                w,
                i,
                j,
                k,
                l,
                lhs,
                curvature,
                a_w,
            } => {
                write!(
                    f,
                    "phi^2((nabla_e{} R)(e{},e{})e{}) has e{} component {} but A(e{})*R(e{},e{})e{} has {}",
                    w + 1,
                    i + 1,
                    j + 1,
                    k + 1,
                    l + 1,
                    lhs,
                    w + 1,
                    i + 1,
                    j + 1,
                    k + 1,
                    curvature
                )?;
                if let Some(a) = a_w {
                    write!(f, " with A(e{}) = {}", w + 1, a)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceVerdict {
    pub status: RecurrenceStatus,
    pub scope: Scope,
    /// Solved `A` (zero outside the scope), or `η` when trivially recurrent.
    pub a: Option<OneForm>,
    pub obstruction: Option<Obstruction>,
}

/// Solves `φ²((∇_{e_w}R)(e_i,e_j)e_k) = A(e_w) R(e_i,e_j)e_k` for `A`,
/// one frame direction at a time, scanning `(w,i,j,k,l)` lexicographically.
pub fn solve_phi_recurrence(
    geo: &Geometry,
    c: &ContactStructure,
    scope: Scope,
) -> RecurrenceVerdict {
    let n = geo.dim();
    let idx = scope.indices(c);
    let r = geo.riemann();
    let mut a = vec![Expr::zero(); n];
    let mut constrained = false;
    let not = |o| RecurrenceVerdict {
        status: RecurrenceStatus::NotRecurrent,
        scope,
        a: None,
        obstruction: Some(o),
    };
    for &w in &idx {
        let mut a_w: Option<Expr> = None;
        for (_, i, j, k) in quads(&idx).filter(|q| q.0 == w) {
            let lhs = phi_squared(c, geo.nabla_r(w, i, j, k));
            let rv = r.get(i, j, k);
            for l in 0..n {
                let (lv, cv) = (&lhs.0[l], &rv.0[l]);
                let ok = match (&a_w, cv.is_zero()) {
                    (_, true) => lv.is_zero(),
                    (None, false) => {
                        a_w = Some(lv / cv);
                        true
                    }
                    (Some(aw), false) => (aw * cv - lv).is_zero(),
                };
                if !ok {
                    return not(Obstruction::Component {
                        w,
                        i,
                        j,
                        k,
                        l,
                        lhs: lv.clone(),
                        curvature: cv.clone(),
                        a_w,
                    });
                }
            }
        }
        if let Some(v) = a_w {
            constrained = true;
            a[w] = v;
        }
    }
    if !constrained {
        return RecurrenceVerdict {
            status: RecurrenceStatus::TriviallyRecurrent,
            scope,
            a: Some(c.eta().clone()),
            obstruction: None,
        };
    }
    if a.iter().all(Expr::is_zero) {
        return not(Obstruction::OnlyZero);
    }
    RecurrenceVerdict {
        status: RecurrenceStatus::Recurrent,
        scope,
        a: Some(OneForm(a)),
        obstruction: None,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("the three-dimensional curvature decomposition needs dim 3, got {0}")]
pub struct NotThreeDimensional(pub usize);

/// Compares `R` against
/// `g(Y,Z)QX - g(X,Z)QY + S(Y,Z)X - S(X,Z)Y + (r/2)[g(X,Z)Y - g(Y,Z)X]`;
/// returns the first mismatching `(i,j,k)`.
pub fn check_3d_decomposition(
    m: &FrameManifold,
    r: &RiemannTensor,
    ricci: &RicciData,
) -> Result<Option<Witness>, NotThreeDimensional> {
    let n = m.dim();
    if n != 3 {
        return Err(NotThreeDimensional(n));
    }
    let g = m.metric();
    let s = &ricci.ricci;
    let half_r = &ricci.scalar * &Expr::ratio(1, 2);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (ei, ej) = (m.basis(i), m.basis(j));
                let model = &(&(&ricci.apply_q(i).scale(g.get(j, k))
                    - &ricci.apply_q(j).scale(g.get(i, k)))
                    + &(&ei.scale(s.get(j, k)) - &ej.scale(s.get(i, k))))
                    + &(&ej.scale(g.get(i, k)) - &ei.scale(g.get(j, k))).scale(&half_r);
                let diff = r.get(i, j, k) - &model;
                if !diff.is_zero() {
                    return Ok(Some(Witness {
                        indices: vec![i, j, k],
                        value: diff,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub contact_valid: bool,
    pub sasakian: Verdict,
    pub kappa_mu: KappaMuVerdict,
    pub flat: bool,
    pub constant_curvature: Option<Expr>,
    pub locally_symmetric: Verdict,
    pub phi_symmetric: Verdict,
    pub locally_phi_symmetric: Verdict,
    pub phi_recurrent: RecurrenceVerdict,
    pub locally_phi_recurrent: RecurrenceVerdict,
}

impl ClassificationReport {
    /// flat ⇒ locally symmetric ⇒ φ-symmetric ⇒ locally φ-symmetric.
    pub fn implication_chain_holds(&self) -> bool {
        let chain = [
            self.flat,
            self.locally_symmetric.holds,
            self.phi_symmetric.holds,
            self.locally_phi_symmetric.holds,
        ];
        chain.windows(2).all(|p| !p[0] || p[1])
    }
}

/// Runs every classifier. Fails only if `h` cannot be formed.
pub fn classify(
    geo: &Geometry,
    c: &ContactStructure,
) -> Result<(ClassificationReport, HOperator), ContactError> {
    let m = geo.manifold();
    let contact_valid =
        validate_almost_contact(m, c)?.is_ok() && check_contact_metric(m, c)?.is_ok();
    let h = compute_h(m, c)?;
    let r = geo.riemann();
    let report = ClassificationReport {
        contact_valid,
        sasakian: is_sasakian(geo, c),
        kappa_mu: solve_kappa_mu(geo, c, &h),
        flat: is_flat(r),
        constant_curvature: constant_curvature(m, r),
        locally_symmetric: is_locally_symmetric(geo),
        phi_symmetric: phi_symmetry(geo, c, Scope::Global),
        locally_phi_symmetric: phi_symmetry(geo, c, Scope::Local),
        phi_recurrent: solve_phi_recurrence(geo, c, Scope::Global),
        locally_phi_recurrent: solve_phi_recurrence(geo, c, Scope::Local),
    };
    Ok((report, h))
}

/// Identities that must hold whatever the input; any failure is an engine
/// defect. Contact identities are only checked on contact metric input.
pub fn self_checks(
    geo: &Geometry,
    c: &ContactStructure,
    h: &HOperator,
    report: &ClassificationReport,
) -> Vec<InvariantFailure> {
    let m = geo.manifold();
    let mut out = geometric_self_checks(geo);
    if m.dim() == 3 {
        if let Ok(Some(w)) = check_3d_decomposition(m, geo.riemann(), geo.ricci()) {
            out.push(InvariantFailure {
                name: "three-dimensional curvature decomposition",
                indices: w.indices,
                residual: w.value.to_string(),
            });
        }
    }
    if !report.implication_chain_holds() {
        out.push(InvariantFailure {
            name: "flat => locally symmetric => phi-symmetric => locally phi-symmetric",
            indices: vec![],
            residual: String::new(),
        });
    }
    if !report.contact_valid {
        return out;
    }
    let d = nabla_structure_tensors(geo, c);
    out.extend(contact_derivative_checks(geo, c, h, &d));
    if let Some(kappa) = &report.kappa_mu.kappa {
        if report.kappa_mu.status != KappaMuStatus::Inconsistent {
            out.extend(h_squared_check(c, h, kappa));
            out.extend(kappa_mu_phi_derivative_check(geo, c, h, &d));
            out.extend(ricci_xi_check(geo, c, kappa));
        }
    }
    out
}

/// `S(X, ξ) = 2nκ η(X)` on frame vectors, `dim = 2n+1`.
pub fn ricci_xi_check(geo: &Geometry, c: &ContactStructure, kappa: &Expr) -> Vec<InvariantFailure> {
    let m = geo.manifold();
    let n = m.dim();
    let two_n = Expr::int((n - 1) as i64);
    let mut out = Vec::new();
    for i in 0..n {
        let s: Expr = (0..n)
            .map(|k| geo.ricci().ricci.get(i, k) * &c.xi()[k])
            .sum();
        let diff = s - &two_n * kappa * &c.eta()[i];
        if !diff.is_zero() {
            out.push(InvariantFailure {
                name: "S(X, xi) = 2n kappa eta(X)",
                indices: vec![i],
                residual: diff.to_string(),
            });
        }
    }
    out
}
