//! Levi-Civita connection, curvature and covariant derivatives, all in
//! frame components.

use std::fmt;
use std::sync::OnceLock;

use crate::contact::{ContactStructure, HOperator};
use crate::expr::Expr;
use crate::frame::{FrameError, FrameManifold, OneForm, VectorField};
use crate::linalg::ExprMatrix;

/// `∇_{e_i} e_j = Σ_k Γ^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionTable {
    dim: usize,
    table: Vec<VectorField>,
}

impl ConnectionTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∇_{e_i} e_j`.
    pub fn get(&self, i: usize, j: usize) -> &VectorField {
        &self.table[i * self.dim + j]
    }

    /// `Γ^k_{ij}`.
    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> &Expr {
        &self.get(i, j).0[k]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(VectorField::is_zero)
    }
}

/// Koszul formula in the frame:
/// `2g(∇_X Y, Z) = Xg(Y,Z) + Yg(Z,X) - Zg(X,Y) - g(X,[Y,Z]) - g(Y,[X,Z]) + g(Z,[X,Y])`.
pub fn koszul(m: &FrameManifold) -> Result<ConnectionTable, FrameError> {
    let n = m.dim();
    let g = m.metric();
    let ginv = m.metric_inverse();
    let s = m.structure();
    // g(e_a, [e_b, e_c])
    let gb = |a: usize, b: usize, c: usize| m.inner(&m.basis(a), s.bracket(b, c));
    let half = Expr::ratio(1, 2);
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut lowered = Vec::with_capacity(n);
            for k in 0..n {
                let v = m.directional_derivative(i, g.get(j, k))?
                    + m.directional_derivative(j, g.get(k, i))?
                    - m.directional_derivative(k, g.get(i, j))?
                    - gb(i, j, k)
                    - gb(j, i, k)
                    + gb(k, i, j);
                lowered.push(v);
            }
            let raised = (0..n)
                .map(|l| {
                    let t: Expr = (0..n).map(|k| ginv.get(l, k) * &lowered[k]).sum();
                    t * &half
                })
                .collect();
            table.push(VectorField(raised));
        }
    }
    Ok(ConnectionTable { dim: n, table })
}

/// `(∇_X Y)^k = Σ_i X^i e_i(Y^k) + Σ_{i,j} X^i Y^j Γ^k_{ij}`.
pub fn covariant_derivative_vf(
    m: &FrameManifold,
    conn: &ConnectionTable,
    x: &VectorField,
    y: &VectorField,
) -> Result<VectorField, FrameError> {
    let n = m.dim();
    let mut out = VectorField::zero(n);
    for (i, xi) in x.0.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        out = &out + &covariant_along_frame(m, conn, i, y)?.scale(xi);
    }
    Ok(out)
}

/// `∇_{e_i} Y`.
fn covariant_along_frame(
    m: &FrameManifold,
    conn: &ConnectionTable,
    i: usize,
    y: &VectorField,
) -> Result<VectorField, FrameError> {
    let n = m.dim();
    let mut comps = Vec::with_capacity(n);
    for k in 0..n {
        let mut c = m.directional_derivative(i, &y.0[k])?;
        for (j, yj) in y.0.iter().enumerate() {
            let gamma = conn.christoffel(k, i, j);
            if yj.is_zero() || gamma.is_zero() {
                continue;
            }
            c = c + yj * gamma;
        }
        comps.push(c);
    }
    Ok(VectorField(comps))
}

/// `R(e_i, e_j) e_k = Σ_l R^l_{ijk} e_l` with
/// `R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_{[X,Y]} Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannTensor {
    dim: usize,
    values: Vec<VectorField>,
}

impl RiemannTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `R(e_i, e_j) e_k`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &VectorField {
        &self.values[(i * self.dim + j) * self.dim + k]
    }

    /// `R(e_i, e_j) Z`.
    pub fn apply(&self, i: usize, j: usize, z: &VectorField) -> VectorField {
        let mut out = VectorField::zero(self.dim);
        for (k, zk) in z.0.iter().enumerate() {
            if zk.is_zero() {
                continue;
            }
            out = &out + &self.get(i, j, k).scale(zk);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(VectorField::is_zero)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> VectorField) -> Self {
        let mut values = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    values.push(f(i, j, k));
                }
            }
        }
        RiemannTensor { dim, values }
    }
}

pub fn riemann(m: &FrameManifold, conn: &ConnectionTable) -> Result<RiemannTensor, FrameError> {
    let n = m.dim();
    let s = m.structure();
    let mut values = vec![VectorField::zero(n); n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let a = covariant_along_frame(m, conn, i, conn.get(j, k))?;
                let b = covariant_along_frame(m, conn, j, conn.get(i, k))?;
                let mut c = VectorField::zero(n);
                for (p, cp) in s.bracket(i, j).0.iter().enumerate() {
                    if !cp.is_zero() {
                        c = &c + &conn.get(p, k).scale(cp);
                    }
                }
                let r = &(&a - &b) - &c;
                values[(j * n + i) * n + k] = -&r;
                values[(i * n + j) * n + k] = r;
            }
        }
    }
    Ok(RiemannTensor { dim: n, values })
}

/// Ricci tensor `S_{ij}`, Ricci operator `Q` (`g(QX,Y) = S(X,Y)`, stored as
/// `Q e_i = Σ_j Q[j][i] e_j`) and scalar curvature `r = tr Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciData {
    pub ricci: ExprMatrix,
    pub operator: ExprMatrix,
    pub scalar: Expr,
}

impl RicciData {
    /// `Q e_i`.
    pub fn apply_q(&self, i: usize) -> VectorField {
        VectorField(
            (0..self.operator.rows())
                .map(|j| self.operator.get(j, i).clone())
                .collect(),
        )
    }

    pub fn q_of(&self, x: &VectorField) -> VectorField {
        let n = x.dim();
        let mut out = VectorField::zero(n);
        for (i, c) in x.0.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.apply_q(i).scale(c);
            }
        }
        out
    }
}

/// `S(Y,Z) = tr(X ↦ R(X,Y)Z)`, which equals `Σ_a g(R(ē_a,Y)Z, ē_a)` over any
/// g-orthonormal frame.
pub fn ricci_scalar(m: &FrameManifold, riem: &RiemannTensor) -> RicciData {
    let n = m.dim();
    let ricci = ExprMatrix::from_fn(n, n, |j, k| {
        (0..n).map(|a| riem.get(a, j, k).0[a].clone()).sum()
    });
    let ginv = m.metric_inverse();
    // Q^j_i = Σ_k g^{jk} S_{ik}
    let operator = ExprMatrix::from_fn(n, n, |j, i| {
        (0..n).map(|k| ginv.get(j, k) * ricci.get(i, k)).sum()
    });
    let scalar = operator.trace();
    RicciData {
        ricci,
        operator,
        scalar,
    }
}

/// Connection, curvature and a lazily filled `∇R` table for one manifold.
#[derive(Debug)]
pub struct Geometry {
    manifold: FrameManifold,
    connection: ConnectionTable,
    riemann: RiemannTensor,
    ricci: RicciData,
    nabla_r: Vec<OnceLock<VectorField>>,
}

impl Geometry {
    pub fn compute(m: &FrameManifold) -> Result<Self, FrameError> {
        let connection = koszul(m)?;
        let riemann = riemann(m, &connection)?;
        let ricci = ricci_scalar(m, &riemann);
        let n = m.dim();
        Ok(Geometry {
            manifold: m.clone(),
            connection,
            riemann,
            ricci,
            nabla_r: (0..n * n * n * n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn manifold(&self) -> &FrameManifold {
        &self.manifold
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn connection(&self) -> &ConnectionTable {
        &self.connection
    }

    pub fn riemann(&self) -> &RiemannTensor {
        &self.riemann
    }

    pub fn ricci(&self) -> &RicciData {
        &self.ricci
    }

    /// `∇_X Y`.
    pub fn covariant(&self, x: &VectorField, y: &VectorField) -> VectorField {
        covariant_derivative_vf(&self.manifold, &self.connection, x, y)
            .expect("frame data validated at construction")
    }

    /// `(∇_{e_w} R)(e_i, e_j) e_k`, memoized.
    pub fn nabla_r(&self, w: usize, i: usize, j: usize, k: usize) -> &VectorField {
        let n = self.dim();
        let slot = &self.nabla_r[((w * n + i) * n + j) * n + k];
        slot.get_or_init(|| {
            nabla_r(&self.manifold, &self.connection, &self.riemann, w, i, j, k)
                .expect("frame data validated at construction")
        })
    }

    /// Evaluates every `∇R` component.
    pub fn fill_nabla_r(&self) {
        let n = self.dim();
        for w in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        self.nabla_r(w, i, j, k);
                    }
                }
            }
        }
    }
}

/// `(∇_W R)(X,Y)Z = ∇_W(R(X,Y)Z) - R(∇_W X, Y)Z - R(X, ∇_W Y)Z - R(X,Y)∇_W Z`
/// on frame vectors.
pub fn nabla_r(
    m: &FrameManifold,
    conn: &ConnectionTable,
    riem: &RiemannTensor,
    w: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<VectorField, FrameError> {
    let n = m.dim();
    let mut out = covariant_along_frame(m, conn, w, riem.get(i, j, k))?;
    for a in 0..n {
        let gi = conn.christoffel(a, w, i);
        if !gi.is_zero() {
            out = &out - &riem.get(a, j, k).scale(gi);
        }
        let gj = conn.christoffel(a, w, j);
        if !gj.is_zero() {
            out = &out - &riem.get(i, a, k).scale(gj);
        }
        let gk = conn.christoffel(a, w, k);
        if !gk.is_zero() {
            out = &out - &riem.get(i, j, a).scale(gk);
        }
    }
    Ok(out)
}

/// Frame components of `∇φ`, `∇ξ` and `∇η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureDerivatives {
    dim: usize,
    /// `(∇_{e_w} φ) e_i` at `w * dim + i`.
    nabla_phi: Vec<VectorField>,
    /// `∇_{e_w} ξ`.
    nabla_xi: Vec<VectorField>,
    /// `(∇_{e_w} η)(e_i)`, row `w`.
    nabla_eta: Vec<OneForm>,
}

impl StructureDerivatives {
    pub fn nabla_phi(&self, w: usize, i: usize) -> &VectorField {
        &self.nabla_phi[w * self.dim + i]
    }

    pub fn nabla_xi(&self, w: usize) -> &VectorField {
        &self.nabla_xi[w]
    }

    pub fn nabla_eta(&self, w: usize, i: usize) -> &Expr {
        &self.nabla_eta[w].0[i]
    }
}

pub fn nabla_structure_tensors(geo: &Geometry, c: &ContactStructure) -> StructureDerivatives {
    let m = geo.manifold();
    let n = m.dim();
    let mut nabla_phi = Vec::with_capacity(n * n);
    let mut nabla_xi = Vec::with_capacity(n);
    let mut nabla_eta = Vec::with_capacity(n);
    for w in 0..n {
        let ew = m.basis(w);
        nabla_xi.push(geo.covariant(&ew, c.xi()));
        let mut eta_row = Vec::with_capacity(n);
        for i in 0..n {
            let grad = geo.connection().get(w, i);
            let a = geo.covariant(&ew, c.phi().image(i));
            nabla_phi.push(&a - &c.phi().apply(grad));
            let de = m
                .directional_derivative(w, &c.eta()[i])
                .expect("validated frame data");
            eta_row.push(de - c.eta().apply(grad));
        }
        nabla_eta.push(OneForm(eta_row));
    }
    StructureDerivatives {
        dim: n,
        nabla_phi,
        nabla_xi,
        nabla_eta,
    }
}

/// A failed tensor identity: `name` plus the frame indices it failed at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFailure {
    pub name: &'static str,
    pub indices: Vec<usize>,
    pub residual: String,
}

impl fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        write!(
            f,
            "{} fails at ({}): residual {}",
            self.name,
            idx.join(","),
            self.residual
        )
    }
}

fn fail(name: &'static str, indices: &[usize], residual: impl fmt::Display) -> InvariantFailure {
    InvariantFailure {
        name,
        indices: indices.to_vec(),
        residual: residual.to_string(),
    }
}

/// Connection and curvature identities that hold for every Levi-Civita
/// connection; a failure means an engine defect.
pub fn geometric_self_checks(geo: &Geometry) -> Vec<InvariantFailure> {
    let m = geo.manifold();
    let n = m.dim();
    let g = m.metric();
    let conn = geo.connection();
    let riem = geo.riemann();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let torsion = &(conn.get(i, j) - conn.get(j, i)) - m.structure().bracket(i, j);
            if !torsion.is_zero() {
                out.push(fail("torsion-free", &[i, j], &torsion));
            }
            for k in 0..n {
                let lhs = m.directional_derivative(i, g.get(j, k)).expect("validated");
                let rhs: Expr = (0..n)
                    .map(|l| {
                        conn.christoffel(l, i, j) * g.get(l, k)
                            + conn.christoffel(l, i, k) * g.get(j, l)
                    })
                    .sum();
                let r = lhs - rhs;
                if !r.is_zero() {
                    out.push(fail("metric compatibility", &[i, j, k], &r));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let anti = riem.get(i, j, k) + riem.get(j, i, k);
                if !anti.is_zero() {
                    out.push(fail("R(X,Y) = -R(Y,X)", &[i, j, k], &anti));
                }
                for l in 0..n {
                    let a = m.inner(riem.get(i, j, k), &m.basis(l));
                    let b = m.inner(riem.get(i, j, l), &m.basis(k));
                    let r = a + b;
                    if !r.is_zero() {
                        out.push(fail("g(R(X,Y)Z,W) = -g(R(X,Y)W,Z)", &[i, j, k, l], &r));
                    }
                }
                let bianchi = &(riem.get(i, j, k) + riem.get(j, k, i)) + riem.get(k, i, j);
                if !bianchi.is_zero() {
                    out.push(fail("first Bianchi identity", &[i, j, k], &bianchi));
                }
            }
        }
    }
    for w in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = &(geo.nabla_r(w, i, j, k) + geo.nabla_r(i, j, w, k))
                        + geo.nabla_r(j, w, i, k);
                    if !s.is_zero() {
                        out.push(fail("second Bianchi identity", &[w, i, j, k], &s));
                    }
                }
            }
        }
    }
    out
}

/// `∇_X ξ = -φX - φhX` and `(∇_X η)(Y) = g(X + hX, φY)` on frame vectors.
pub fn contact_derivative_checks(
    geo: &Geometry,
    c: &ContactStructure,
    h: &HOperator,
    d: &StructureDerivatives,
) -> Vec<InvariantFailure> {
    let m = geo.manifold();
    let n = m.dim();
    let mut out = Vec::new();
    for w in 0..n {
        let ew = m.basis(w);
        let hx = h.apply(&ew);
        let expected = -&(&c.phi().apply(&ew) + &c.phi().apply(&hx));
        let r = d.nabla_xi(w) - &expected;
        if !r.is_zero() {
            out.push(fail("nabla_X xi = -phi X - phi h X", &[w], &r));
        }
        let x_plus_hx = &ew + &hx;
        for i in 0..n {
            let expected = m.inner(&x_plus_hx, c.phi().image(i));
            let r = d.nabla_eta(w, i) - &expected;
            if !r.is_zero() {
                out.push(fail("(nabla_X eta)(Y) = g(X + hX, phi Y)", &[w, i], &r));
            }
        }
    }
    out
}

/// `(∇_X φ)Y = g(X + hX, Y)ξ - η(Y)(X + hX)`, valid on (κ,μ)-spaces.
pub fn kappa_mu_phi_derivative_check(
    geo: &Geometry,
    c: &ContactStructure,
    h: &HOperator,
    d: &StructureDerivatives,
) -> Vec<InvariantFailure> {
    let m = geo.manifold();
    let n = m.dim();
    let mut out = Vec::new();
    for w in 0..n {
        let ew = m.basis(w);
        let x_plus_hx = &ew + &h.apply(&ew);
        for i in 0..n {
            let expected =
                &c.xi().scale(&m.inner(&x_plus_hx, &m.basis(i))) - &x_plus_hx.scale(&c.eta()[i]);
            let r = d.nabla_phi(w, i) - &expected;
            if !r.is_zero() {
                out.push(fail(
                    "(nabla_X phi)Y = g(X+hX,Y)xi - eta(Y)(X+hX)",
                    &[w, i],
                    &r,
                ));
            }
        }
    }
    out
}

/// `h² = (κ - 1)φ²`.
pub fn h_squared_check(
    c: &ContactStructure,
    h: &HOperator,
    kappa: &Expr,
) -> Option<InvariantFailure> {
    let h2 = h.operator().compose(h.operator());
    let phi2 = c.phi().compose(c.phi());
    let rhs = phi2.scale(&(kappa - Expr::one()));
    let diff = h2.add(&rhs.scale(&Expr::int(-1)));
    if diff.is_zero() {
        None
    } else {
        Some(fail("h^2 = (kappa - 1) phi^2", &[], format!("{diff:?}")))
    }
}
