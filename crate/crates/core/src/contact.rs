//! Almost contact metric structures `(φ, ξ, η, g)` on a frame manifold and
//! the derived operator `h = ½ £_ξ φ`.

use std::fmt;

use thiserror::Error;

use crate::expr::Expr;
use crate::frame::{FrameError, FrameManifold, OneForm, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContactError {
    #[error("structure has dimension {found}, manifold has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("h fails `{0}`; the input structure is not a valid contact metric structure")]
    HInvariant(&'static str),
    #[error("unsupported: h is not diagonal in the frame at ({row}, {col}); re-express the frame in an h-eigenbasis")]
    NonDiagonalH { row: usize, col: usize },
    #[error("unsupported: h has more than one nonzero eigenvalue pair ({first}, {second})")]
    MultipleEigenvalues { first: String, second: String },
}

/// A (1,1) tensor by the images of the frame vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FrameOperator {
    images: Vec<VectorField>,
}

impl FrameOperator {
    /// `images[i]` is the image of `e_i`.
    pub fn from_images(images: Vec<VectorField>) -> Self {
        FrameOperator { images }
    }

    pub fn zero(dim: usize) -> Self {
        FrameOperator {
            images: vec![VectorField::zero(dim); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        FrameOperator {
            images: (0..dim).map(|i| VectorField::basis(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> &VectorField {
        &self.images[i]
    }

    pub fn images(&self) -> &[VectorField] {
        &self.images
    }

    /// Component `l` of the image of `e_i`.
    pub fn entry(&self, l: usize, i: usize) -> &Expr {
        &self.images[i].0[l]
    }

    pub fn apply(&self, x: &VectorField) -> VectorField {
        let n = self.dim();
        let mut out = VectorField::zero(n);
        for (i, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = &out + &self.images[i].scale(c);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FrameOperator) -> FrameOperator {
        FrameOperator {
            images: other.images.iter().map(|v| self.apply(v)).collect(),
        }
    }

    pub fn add(&self, other: &FrameOperator) -> FrameOperator {
        FrameOperator {
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, f: &Expr) -> FrameOperator {
        FrameOperator {
            images: self.images.iter().map(|v| v.scale(f)).collect(),
        }
    }

    pub fn trace(&self) -> Expr {
        (0..self.dim()).map(|i| self.entry(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(VectorField::is_zero)
    }

    pub fn is_diagonal(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim() {
            for l in 0..self.dim() {
                if l != i && !self.entry(l, i).is_zero() {
                    return Some((l, i));
                }
            }
        }
        None
    }
}

impl fmt::Debug for FrameOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (i, v) in self.images.iter().enumerate() {
            list.entry(&format_args!("e{}", i + 1), &format_args!("{v}"));
        }
        list.finish()
    }
}

/// `(φ, ξ, η)` attached to a frame manifold; `η` is the metric dual of `ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactStructure {
    phi: FrameOperator,
    xi: VectorField,
    eta: OneForm,
}

impl ContactStructure {
    pub fn new(
        m: &FrameManifold,
        phi: FrameOperator,
        xi: VectorField,
    ) -> Result<Self, ContactError> {
        let n = m.dim();
        for found in [phi.dim(), xi.dim()]
            .into_iter()
            .chain(phi.images().iter().map(VectorField::dim))
        {
            if found != n {
                return Err(ContactError::DimensionMismatch { expected: n, found });
            }
        }
        let eta = m.lower(&xi);
        Ok(ContactStructure { phi, xi, eta })
    }

    pub fn phi(&self) -> &FrameOperator {
        &self.phi
    }

    pub fn xi(&self) -> &VectorField {
        &self.xi
    }

    pub fn eta(&self) -> &OneForm {
        &self.eta
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    /// The frame indices `i` with `η(e_i) = 0`.
    pub fn horizontal_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.eta[i].is_zero()).collect()
    }

    /// The frame index `k` with `ξ = e_k`, when `ξ` is a frame vector.
    pub fn xi_frame_index(&self) -> Option<usize> {
        let (k, c) = self.xi.first_nonzero()?;
        (c.is_one() && self.xi.0.iter().filter(|c| !c.is_zero()).count() == 1).then_some(k)
    }

    pub fn substitute(
        &self,
        bindings: &[(String, Expr)],
        m: &FrameManifold,
    ) -> Result<Self, ContactError> {
        let sub = |v: &VectorField| -> Result<VectorField, ContactError> {
            v.0.iter()
                .map(|e| {
                    e.substitute_all(bindings).map_err(|err| {
                        ContactError::Frame(FrameError::Substitution(err.to_string()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(VectorField)
        };
        let phi = FrameOperator::from_images(
            self.phi
                .images()
                .iter()
                .map(sub)
                .collect::<Result<Vec<_>, _>>()?,
        );
        let xi = sub(&self.xi)?;
        ContactStructure::new(m, phi, xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `η(ξ) = 1`
    EtaOfXi,
    /// `φ² = -Id + η⊗ξ`
    PhiSquared,
    /// `g(φX, φY) = g(X,Y) - η(X)η(Y)`
    Compatibility,
    /// `φξ = 0`
    PhiXi,
    /// `η∘φ = 0`
    EtaPhi,
    /// `dη(X,Y) = g(X, φY)`
    ContactMetric,
}

impl Axiom {
    pub fn as_str(self) -> &'static str {
        match self {
            Axiom::EtaOfXi => "eta(xi) = 1",
            Axiom::PhiSquared => "phi^2 = -Id + eta (x) xi",
            Axiom::Compatibility => "g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)",
            Axiom::PhiXi => "phi xi = 0",
            Axiom::EtaPhi => "eta o phi = 0",
            Axiom::ContactMetric => "d eta(X,Y) = g(X, phi Y)",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One failed axiom instance; `indices` are the frame vectors it was
/// evaluated on and `residual` is the nonzero difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StructureVerdict {
    pub violations: Vec<AxiomViolation>,
}

impl StructureVerdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(
        &mut self,
        axiom: Axiom,
        indices: Vec<usize>,
        residual: impl fmt::Display,
        zero: bool,
    ) {
        if !zero {
            self.violations.push(AxiomViolation {
                axiom,
                indices,
                residual: residual.to_string(),
            });
        }
    }
}

/// Checks every almost contact metric axiom on the frame and collects all
/// failures.
pub fn validate_almost_contact(
    m: &FrameManifold,
    c: &ContactStructure,
) -> Result<StructureVerdict, ContactError> {
    let n = m.dim();
    if c.dim() != n {
        return Err(ContactError::DimensionMismatch {
            expected: n,
            found: c.dim(),
        });
    }
    let mut verdict = StructureVerdict::default();
    let eta_xi = c.eta.apply(&c.xi) - Expr::one();
    verdict.check(Axiom::EtaOfXi, vec![], &eta_xi, eta_xi.is_zero());

    for i in 0..n {
        let e = m.basis(i);
        let phi2 = c.phi.apply(&c.phi.apply(&e));
        let rhs = &(-&e) + &c.xi.scale(&c.eta[i]);
        let diff = &phi2 - &rhs;
        verdict.check(Axiom::PhiSquared, vec![i], &diff, diff.is_zero());
    }
    for i in 0..n {
        for j in i..n {
            let lhs = m.inner(c.phi.image(i), c.phi.image(j));
            let rhs = m.metric().get(i, j) - &c.eta[i] * &c.eta[j];
            let diff = lhs - rhs;
            let zero = diff.is_zero();
            verdict.check(Axiom::Compatibility, vec![i, j], &diff, zero);
        }
    }
    let phi_xi = c.phi.apply(&c.xi);
    verdict.check(Axiom::PhiXi, vec![], &phi_xi, phi_xi.is_zero());
    for i in 0..n {
        let v = c.eta.apply(c.phi.image(i));
        let zero = v.is_zero();
        verdict.check(Axiom::EtaPhi, vec![i], &v, zero);
    }
    Ok(verdict)
}

/// `dη(e_i, e_j) = ½(e_i(η(e_j)) - e_j(η(e_i)) - η([e_i, e_j]))`.
pub fn d_eta(
    m: &FrameManifold,
    c: &ContactStructure,
    i: usize,
    j: usize,
) -> Result<Expr, ContactError> {
    let t = m.directional_derivative(i, &c.eta[j])?
        - m.directional_derivative(j, &c.eta[i])?
        - c.eta.apply(m.structure().bracket(i, j));
    Ok(t.scale(&half()))
}

fn half() -> num_rational::BigRational {
    num_rational::BigRational::new(1.into(), 2.into())
}

/// Checks `dη(e_i, e_j) = g(e_i, φe_j)` for all pairs.
pub fn check_contact_metric(
    m: &FrameManifold,
    c: &ContactStructure,
) -> Result<StructureVerdict, ContactError> {
    let n = m.dim();
    let mut verdict = StructureVerdict::default();
    for i in 0..n {
        for j in 0..n {
            let diff = d_eta(m, c, i, j)? - m.inner(&m.basis(i), c.phi.image(j));
            let zero = diff.is_zero();
            verdict.check(Axiom::ContactMetric, vec![i, j], &diff, zero);
        }
    }
    Ok(verdict)
}

/// The operator `h = ½ £_ξ φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HOperator(pub FrameOperator);

impl HOperator {
    pub fn operator(&self) -> &FrameOperator {
        &self.0
    }

    pub fn apply(&self, x: &VectorField) -> VectorField {
        self.0.apply(x)
    }
}

/// First failing `h` invariant, if any: `hξ = 0`, `hφ = -φh`, `tr h = 0`,
/// and self-adjointness.
pub fn h_invariant_failure(
    m: &FrameManifold,
    c: &ContactStructure,
    h: &FrameOperator,
) -> Option<&'static str> {
    if !h.apply(&c.xi).is_zero() {
        return Some("h xi = 0");
    }
    if !h.compose(&c.phi).add(&c.phi.compose(h)).is_zero() {
        return Some("h phi = -phi h");
    }
    if !h.trace().is_zero() {
        return Some("tr h = 0");
    }
    let n = m.dim();
    for i in 0..n {
        for j in i + 1..n {
            let l = m.inner(h.image(i), &m.basis(j));
            let r = m.inner(&m.basis(i), h.image(j));
            if !(l - r).is_zero() {
                return Some("g(hX, Y) = g(X, hY)");
            }
        }
    }
    None
}

/// `h e_i = ½([ξ, φe_i] - φ[ξ, e_i])`, validated against the `h` invariants.
pub fn compute_h(m: &FrameManifold, c: &ContactStructure) -> Result<HOperator, ContactError> {
    let n = m.dim();
    let half = Expr::ratio(1, 2);
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let e = m.basis(i);
        let a = m.bracket(&c.xi, c.phi.image(i))?;
        let b = c.phi.apply(&m.bracket(&c.xi, &e)?);
        images.push((&a - &b).scale(&half));
    }
    let h = FrameOperator::from_images(images);
    if let Some(fail) = h_invariant_failure(m, c, &h) {
        return Err(ContactError::HInvariant(fail));
    }
    Ok(HOperator(h))
}

/// Partition of frame indices into eigenspaces `D(λ)`, `D(-λ)`, `D(0)` of a
/// frame-diagonal `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenstructure {
    /// `None` when `h = 0`.
    pub lambda: Option<Expr>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub kernel: Vec<usize>,
}

/// Reads the eigenstructure off a diagonal `h`. Of the pair `±λ`, `λ` is the
/// one whose canonical numerator has a positive leading coefficient.
pub fn h_eigenstructure(h: &HOperator) -> Result<Eigenstructure, ContactError> {
    let op = h.operator();
    if let Some((row, col)) = op.is_diagonal() {
        return Err(ContactError::NonDiagonalH { row, col });
    }
    let mut lambda: Option<Expr> = None;
    let mut out = Eigenstructure {
        lambda: None,
        positive: vec![],
        negative: vec![],
        kernel: vec![],
    };
    for i in 0..op.dim() {
        let d = op.entry(i, i);
        if d.is_zero() {
            out.kernel.push(i);
            continue;
        }
        let l = lambda.get_or_insert_with(|| {
            let positive = d.numerator().leading_coeff() > num_traits::Zero::zero();
            if positive {
                d.clone()
            } else {
                -d
            }
        });
        if *d == *l {
            out.positive.push(i);
        } else if (d + &*l).is_zero() {
            out.negative.push(i);
        } else {
            return Err(ContactError::MultipleEigenvalues {
                first: l.to_string(),
                second: d.to_string(),
            });
        }
    }
    out.lambda = lambda;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Symbol, SymbolTable};
    use crate::frame::{ChartFrame, StructureFunctions};
    use crate::linalg::ExprMatrix;

    fn vf(t: &SymbolTable, comps: &[&str]) -> VectorField {
        VectorField(comps.iter().map(|s| t.parse(s).unwrap()).collect())
    }

    fn example() -> (FrameManifold, ContactStructure) {
        let t = SymbolTable::from_symbols([
            Symbol::coordinate("x"),
            Symbol::coordinate("y"),
            Symbol::coordinate("z"),
        ])
        .unwrap();
        let chart = ChartFrame::new(
            t.coordinates().cloned().collect(),
            [["0", "2/x", "0"], ["2", "-4*z/x", "x*y"], ["0", "0", "1"]]
                .iter()
                .map(|r| r.iter().map(|s| t.parse(s).unwrap()).collect())
                .collect(),
        )
        .unwrap();
        let m = FrameManifold::from_chart(t.clone(), chart, ExprMatrix::identity(3)).unwrap();
        let phi = FrameOperator::from_images(vec![
            vf(&t, &["0", "1", "0"]),
            vf(&t, &["-1", "0", "0"]),
            vf(&t, &["0", "0", "0"]),
        ]);
        let c = ContactStructure::new(&m, phi, m.basis(2)).unwrap();
        (m, c)
    }

    fn kmu(lambda: Expr, mu: Expr) -> (FrameManifold, ContactStructure) {
        let t = SymbolTable::from_symbols([Symbol::parameter("lambda"), Symbol::parameter("mu")])
            .unwrap();
        let half_mu = mu.scale(&half());
        let c2 = Expr::one() - &lambda - &half_mu;
        let c3 = Expr::one() + &lambda - &half_mu;
        let mut s = StructureFunctions::zero(3);
        s.set(
            1,
            2,
            VectorField(vec![Expr::int(2), Expr::zero(), Expr::zero()]),
        );
        s.set(2, 0, VectorField(vec![Expr::zero(), c2, Expr::zero()]));
        s.set(0, 1, VectorField(vec![Expr::zero(), Expr::zero(), c3]));
        let m = FrameManifold::from_structure(t, s, ExprMatrix::identity(3)).unwrap();
        let phi = FrameOperator::from_images(vec![VectorField::zero(3), m.basis(2), -&m.basis(1)]);
        let c = ContactStructure::new(&m, phi, m.basis(0)).unwrap();
        (m, c)
    }

    #[test]
    fn catalog_structures_validate() {
        let (m, c) = example();
        assert!(validate_almost_contact(&m, &c).unwrap().is_ok());
        assert!(check_contact_metric(&m, &c).unwrap().is_ok());
        let (m, c) = kmu(Expr::ratio(1, 2), Expr::zero());
        assert!(validate_almost_contact(&m, &c).unwrap().is_ok());
        assert!(check_contact_metric(&m, &c).unwrap().is_ok());
        assert_eq!(
            c.eta(),
            &OneForm(vec![Expr::one(), Expr::zero(), Expr::zero()])
        );
    }

    #[test]
    fn vanishing_phi_violates_phi_squared() {
        let (m, _) = kmu(Expr::ratio(1, 2), Expr::zero());
        let c = ContactStructure::new(&m, FrameOperator::zero(3), m.basis(0)).unwrap();
        let v = validate_almost_contact(&m, &c).unwrap();
        let phi2: Vec<_> = v
            .violations
            .iter()
            .filter(|v| v.axiom == Axiom::PhiSquared)
            .map(|v| v.indices.clone())
            .collect();
        assert_eq!(phi2, vec![vec![1], vec![2]]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let (m, _) = kmu(Expr::one(), Expr::zero());
        assert!(matches!(
            ContactStructure::new(&m, FrameOperator::zero(2), m.basis(0)),
            Err(ContactError::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn d_eta_values() {
        let (m, c) = kmu(Expr::ratio(1, 2), Expr::int(1));
        assert_eq!(d_eta(&m, &c, 2, 1).unwrap(), Expr::one());
        assert_eq!(d_eta(&m, &c, 1, 2).unwrap(), Expr::int(-1));
        for i in 0..3 {
            assert!(d_eta(&m, &c, i, i).unwrap().is_zero());
        }
        let (m, c) = example();
        assert_eq!(d_eta(&m, &c, 0, 1).unwrap(), Expr::int(-1));
        assert_eq!(m.inner(&m.basis(0), c.phi().image(1)), Expr::int(-1));
    }

    #[test]
    fn abelian_frame_is_not_contact_metric() {
        let (_, c0) = example();
        let t = SymbolTable::new();
        let m =
            FrameManifold::from_structure(t, StructureFunctions::zero(3), ExprMatrix::identity(3))
                .unwrap();
        let c = ContactStructure::new(&m, c0.phi().clone(), m.basis(2)).unwrap();
        assert!(validate_almost_contact(&m, &c).unwrap().is_ok());
        let v = check_contact_metric(&m, &c).unwrap();
        assert!(!v.is_ok());
        assert_eq!(v.violations[0].indices, vec![0, 1]);
    }

    #[test]
    fn h_values() {
        let (m, c) = example();
        let h = compute_h(&m, &c).unwrap();
        assert_eq!(h.apply(&m.basis(0)), -&m.basis(0));
        assert_eq!(h.apply(&m.basis(1)), m.basis(1));
        assert!(h.apply(&m.basis(2)).is_zero());
        let es = h_eigenstructure(&h).unwrap();
        assert_eq!(es.lambda, Some(Expr::one()));
        assert_eq!(
            (es.positive, es.negative, es.kernel),
            (vec![1], vec![0], vec![2])
        );

        let (m, c) = kmu(Expr::ratio(1, 2), Expr::zero());
        let h = compute_h(&m, &c).unwrap();
        assert_eq!(h.apply(&m.basis(1)), m.basis(1).scale(&Expr::ratio(1, 2)));
        let es = h_eigenstructure(&h).unwrap();
        assert_eq!(es.lambda, Some(Expr::ratio(1, 2)));
        assert_eq!(
            (es.positive, es.negative, es.kernel),
            (vec![1], vec![2], vec![0])
        );

        // c2 = c3 = 2
        let (m, c) = kmu(Expr::zero(), Expr::int(-2));
        let h = compute_h(&m, &c).unwrap();
        assert!(h.operator().is_zero());
        let es = h_eigenstructure(&h).unwrap();
        assert_eq!(es.lambda, None);
        assert_eq!(es.kernel, vec![0, 1, 2]);
    }

    #[test]
    fn symbolic_h_is_lambda_diag() {
        let t = SymbolTable::from_symbols([Symbol::parameter("lambda"), Symbol::parameter("mu")])
            .unwrap();
        let (m, c) = kmu(t.parse("lambda").unwrap(), t.parse("mu").unwrap());
        let h = compute_h(&m, &c).unwrap();
        let lambda = t.parse("lambda").unwrap();
        assert_eq!(h.apply(&m.basis(1)), m.basis(1).scale(&lambda));
        assert_eq!(h.apply(&m.basis(2)), m.basis(2).scale(&-&lambda));
        assert_eq!(h_eigenstructure(&h).unwrap().lambda, Some(lambda));
    }

    #[test]
    fn non_diagonal_h_is_unsupported() {
        let h = HOperator(FrameOperator::from_images(vec![
            VectorField(vec![Expr::zero(), Expr::one(), Expr::zero()]),
            VectorField(vec![Expr::one(), Expr::zero(), Expr::zero()]),
            VectorField::zero(3),
        ]));
        assert!(matches!(
            h_eigenstructure(&h),
            Err(ContactError::NonDiagonalH { .. })
        ));
    }
}
