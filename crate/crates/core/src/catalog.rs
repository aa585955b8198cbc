//! Ready-made manifolds: the chart example on `{x ≠ 0}`, the 3-D
//! (κ,μ) frame family, the Sasakian 3-sphere and flat Euclidean frames.

use thiserror::Error;

use crate::contact::{ContactError, ContactStructure, FrameOperator};
use crate::expr::{Expr, Symbol, SymbolTable};
use crate::frame::{ChartFrame, FrameError, FrameManifold, StructureFunctions, VectorField};
use crate::linalg::ExprMatrix;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}` (available: {ids})", ids = available_ids().join(", "))]
    UnknownId(String),
    #[error("lambda must not be identically zero")]
    LambdaZero,
    #[error("flat frame needs an odd dimension >= 3, got {0}")]
    BadDimension(usize),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Contact(#[from] ContactError),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    /// Builder arguments, by name.
    pub parameters: Vec<(String, Expr)>,
    pub manifold: FrameManifold,
    pub structure: ContactStructure,
    pub provenance: String,
    /// Deliberately not a contact metric structure.
    pub invalid_fixture: bool,
}

/// Ids accepted by [`entry`]; any `flat<n>` with odd `n >= 3` also works.
pub fn available_ids() -> Vec<&'static str> {
    vec!["example41", "kmu", "sphere", "flat3", "flat5"]
}

pub fn entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    match id {
        "example41" => build_example_41(),
        "kmu" => {
            let (l, m) = kmu_parameters();
            build_kmu_frame(l, m)
        }
        "sphere" => build_sasakian_sphere(),
        _ => match id
            .strip_prefix("flat")
            .and_then(|d| d.parse::<usize>().ok())
        {
            Some(d) => build_flat_euclidean(d),
            None => Err(CatalogError::UnknownId(id.to_string())),
        },
    }
}

/// Every entry in [`available_ids`].
pub fn all_entries() -> Vec<CatalogEntry> {
    available_ids()
        .into_iter()
        .map(|id| entry(id).expect("catalog builders are total"))
        .collect()
}

fn e(i: usize) -> VectorField {
    VectorField::basis(3, i)
}

fn combo(terms: &[(Expr, usize)]) -> VectorField {
    let mut v = VectorField::zero(3);
    for (c, i) in terms {
        v = &v + &e(*i).scale(c);
    }
    v
}

/// `e1 = (2/x)∂y`, `e2 = 2∂x - (4z/x)∂y + xy∂z`, `e3 = ∂z` on `{x ≠ 0}`,
/// with `φe1 = e2`, `φe2 = -e1`, `ξ = e3`.
pub fn build_example_41() -> Result<CatalogEntry, CatalogError> {
    let t = SymbolTable::from_symbols([
        Symbol::coordinate("x"),
        Symbol::coordinate("y"),
        Symbol::coordinate("z"),
    ])
    .expect("distinct names");
    let p = |s: &str| t.parse(s).expect("well-formed literal");
    let rows = vec![
        vec![p("0"), p("2/x"), p("0")],
        vec![p("2"), p("-4*z/x"), p("x*y")],
        vec![p("0"), p("0"), p("1")],
    ];
    let chart = ChartFrame::new(t.coordinates().cloned().collect(), rows)?;
    let m = FrameManifold::from_chart(t, chart, ExprMatrix::identity(3))?;
    let phi = FrameOperator::from_images(vec![e(1), -&e(0), VectorField::zero(3)]);
    let c = ContactStructure::new(&m, phi, e(2))?;
    Ok(CatalogEntry {
        id: "example41".into(),
        parameters: vec![],
        manifold: m,
        structure: c,
        provenance: "chart frame on {x != 0}; frame metric taken as the identity, since the \
                     literal g(e_i,e_i) = 0 would be degenerate"
            .into(),
        invalid_fixture: false,
    })
}

/// Symbolic `lambda`, `mu` over a table declaring both as parameters.
pub fn kmu_parameters() -> (Expr, Expr) {
    let t = kmu_symbols();
    (t.parse("lambda").unwrap(), t.parse("mu").unwrap())
}

fn kmu_symbols() -> SymbolTable {
    SymbolTable::from_symbols([Symbol::parameter("lambda"), Symbol::parameter("mu")])
        .expect("distinct names")
}

/// `[e2,e3] = 2e1`, `[e3,e1] = c2 e2`, `[e1,e2] = c3 e3` with
/// `c2 = 1 - λ - μ/2`, `c3 = 1 + λ - μ/2`; `ξ = e1`, `φe2 = e3`, `φe3 = -e2`.
/// `λ` and `μ` may mention the parameters `lambda` and `mu`.
pub fn build_kmu_frame(lambda: Expr, mu: Expr) -> Result<CatalogEntry, CatalogError> {
    if lambda.is_zero() {
        return Err(CatalogError::LambdaZero);
    }
    let half_mu = &mu * &Expr::ratio(1, 2);
    let c2 = Expr::one() - &lambda - &half_mu;
    let c3 = Expr::one() + &lambda - &half_mu;
    let m = cyclic_frame(kmu_symbols(), c2, c3)?;
    let c = ContactStructure::new(&m, cyclic_phi(), e(0))?;
    Ok(CatalogEntry {
        id: "kmu".into(),
        parameters: vec![("lambda".into(), lambda), ("mu".into(), mu)],
        manifold: m,
        structure: c,
        provenance: "3-D (kappa,mu) frame with c2 = 1 - lambda - mu/2, c3 = 1 + lambda - mu/2, \
                     kappa = 1 - lambda^2"
            .into(),
        invalid_fixture: false,
    })
}

/// `[e_i, e_j] = 2e_k` cyclically: the unit 3-sphere as a Sasakian manifold.
pub fn build_sasakian_sphere() -> Result<CatalogEntry, CatalogError> {
    let m = cyclic_frame(SymbolTable::new(), Expr::int(2), Expr::int(2))?;
    let c = ContactStructure::new(&m, cyclic_phi(), e(0))?;
    Ok(CatalogEntry {
        id: "sphere".into(),
        parameters: vec![],
        manifold: m,
        structure: c,
        provenance: "left-invariant frame on S^3 with [e_i,e_j] = 2e_k cyclic (c2 = c3 = 2); \
                     Sasakian, constant curvature 1"
            .into(),
        invalid_fixture: false,
    })
}

fn cyclic_frame(symbols: SymbolTable, c2: Expr, c3: Expr) -> Result<FrameManifold, FrameError> {
    let mut s = StructureFunctions::zero(3);
    s.set(1, 2, combo(&[(Expr::int(2), 0)]));
    s.set(2, 0, combo(&[(c2, 1)]));
    s.set(0, 1, combo(&[(c3, 2)]));
    FrameManifold::from_structure(symbols, s, ExprMatrix::identity(3))
}

fn cyclic_phi() -> FrameOperator {
    FrameOperator::from_images(vec![VectorField::zero(3), e(2), -&e(1)])
}

/// Abelian frame with identity metric. It carries the standard almost
/// contact structure `ξ = e_n`, `φe_i = e_{i+m}`, `φe_{i+m} = -e_i`
/// (`n = 2m+1`), which is not a contact metric structure (`dη = 0`).
pub fn build_flat_euclidean(dim: usize) -> Result<CatalogEntry, CatalogError> {
    if dim < 3 || dim.is_multiple_of(2) {
        return Err(CatalogError::BadDimension(dim));
    }
    let half = dim / 2;
    let m = FrameManifold::from_structure(
        SymbolTable::new(),
        StructureFunctions::zero(dim),
        ExprMatrix::identity(dim),
    )?;
    let images = (0..dim)
        .map(|i| {
            if i < half {
                VectorField::basis(dim, i + half)
            } else if i < 2 * half {
                -&VectorField::basis(dim, i - half)
            } else {
                VectorField::zero(dim)
            }
        })
        .collect();
    let c = ContactStructure::new(
        &m,
        FrameOperator::from_images(images),
        VectorField::basis(dim, dim - 1),
    )?;
    Ok(CatalogEntry {
        id: format!("flat{dim}"),
        parameters: vec![],
        manifold: m,
        structure: c,
        provenance: format!("abelian frame on R^{dim}, identity metric; almost contact only"),
        invalid_fixture: true,
    })
}
