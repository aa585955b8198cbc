//! Manifolds presented by a global frame `e_1, …, e_n`.
//!
//! A frame is either abstract (constant structure functions
//! `[e_i,e_j] = Σ_k C^k_{ij} e_k`) or realized on a coordinate chart as
//! `e_i = Σ_a f_i^a ∂_a`, in which case the structure functions are derived.
//! Frame indices are 0-based throughout the API.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use thiserror::Error;

use crate::expr::{Expr, Symbol, SymbolTable};
use crate::linalg::ExprMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("dimension {0} is not an odd integer >= 3")]
    BadDimension(usize),
    #[error("{what}: expected {expected} entries, found {found}")]
    Shape {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("frame matrix is singular (determinant {determinant})")]
    SingularFrame { determinant: String },
    #[error("metric matrix is singular")]
    SingularMetric,
    #[error("metric matrix is not symmetric")]
    AsymmetricMetric,
    #[error("metric entry g[{i}][{j}] = {value} depends on a coordinate")]
    NonConstantMetric { i: usize, j: usize, value: String },
    #[error("structure functions are not antisymmetric at [e{i},e{j}]")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("abstract frame data `{value}` depends on non-parameter symbols")]
    CoordinateDependence { value: String },
    #[error("`{0}` is not a declared coordinate")]
    NotACoordinate(String),
    #[error("substitution failed: {0}")]
    Substitution(String),
    #[error("frame index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// Vector field by its frame components `X = Σ_i X^i e_i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VectorField(pub Vec<Expr>);

impl VectorField {
    pub fn zero(dim: usize) -> Self {
        VectorField(vec![Expr::zero(); dim])
    }

    /// The frame vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Expr::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Expr::is_zero)
    }

    pub fn scale(&self, f: &Expr) -> Self {
        VectorField(self.0.iter().map(|c| c * f).collect())
    }

    /// Index and value of the first nonzero component.
    pub fn first_nonzero(&self) -> Option<(usize, &Expr)> {
        self.0.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn map(&self, f: impl FnMut(&Expr) -> Expr) -> Self {
        VectorField(self.0.iter().map(f).collect())
    }
}

impl Index<usize> for VectorField {
    type Output = Expr;

    fn index(&self, i: usize) -> &Expr {
        &self.0[i]
    }
}

impl Add<&VectorField> for &VectorField {
    type Output = VectorField;

    fn add(self, rhs: &VectorField) -> VectorField {
        debug_assert_eq!(self.dim(), rhs.dim());
        VectorField(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&VectorField> for &VectorField {
    type Output = VectorField;

    fn sub(self, rhs: &VectorField) -> VectorField {
        debug_assert_eq!(self.dim(), rhs.dim());
        VectorField(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &VectorField {
    type Output = VectorField;

    fn neg(self) -> VectorField {
        VectorField(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VectorField {
    /// `2*e1 + (2/x)*e3`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "e{}", i + 1)?;
            } else {
                write!(f, "({c})*e{}", i + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// 1-form by its values on the frame, `ω(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OneForm(pub Vec<Expr>);

impl OneForm {
    pub fn zero(dim: usize) -> Self {
        OneForm(vec![Expr::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Expr::is_zero)
    }

    pub fn apply(&self, x: &VectorField) -> Expr {
        self.0.iter().zip(&x.0).map(|(w, c)| w * c).sum()
    }
}

impl Index<usize> for OneForm {
    type Output = Expr;

    fn index(&self, i: usize) -> &Expr {
        &self.0[i]
    }
}

/// Structure functions `C^k_{ij}` of a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFunctions {
    dim: usize,
    /// `brackets[i * dim + j] = [e_i, e_j]`
    brackets: Vec<VectorField>,
}

impl StructureFunctions {
    pub fn zero(dim: usize) -> Self {
        StructureFunctions {
            dim,
            brackets: vec![VectorField::zero(dim); dim * dim],
        }
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = -v`.
    pub fn set(&mut self, i: usize, j: usize, v: VectorField) {
        assert_eq!(v.dim(), self.dim);
        self.brackets[j * self.dim + i] = -&v;
        self.brackets[i * self.dim + j] = v;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket(&self, i: usize, j: usize) -> &VectorField {
        &self.brackets[i * self.dim + j]
    }

    /// `C^k_{ij}`.
    pub fn coefficient(&self, k: usize, i: usize, j: usize) -> &Expr {
        &self.bracket(i, j).0[k]
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(VectorField::is_zero)
    }

    /// First `(i, j)` violating `C^k_{ij} = -C^k_{ji}`.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in i..self.dim {
                if !(self.bracket(i, j) + self.bracket(j, i)).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Coordinate realization `e_i = Σ_a f_i^a ∂_a` of a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartFrame {
    coordinates: Vec<Symbol>,
    /// Row `i` holds the coefficients of `e_i`.
    vectors: ExprMatrix,
}

impl ChartFrame {
    pub fn new(coordinates: Vec<Symbol>, vectors: Vec<Vec<Expr>>) -> Result<Self, FrameError> {
        let n = coordinates.len();
        if let Some(c) = coordinates.iter().find(|c| c.is_parameter()) {
            return Err(FrameError::NotACoordinate(c.name().to_string()));
        }
        if vectors.len() != n {
            return Err(FrameError::Shape {
                what: "frame vectors".into(),
                expected: n,
                found: vectors.len(),
            });
        }
        for (i, row) in vectors.iter().enumerate() {
            if row.len() != n {
                return Err(FrameError::Shape {
                    what: format!("frame vector e{}", i + 1),
                    expected: n,
                    found: row.len(),
                });
            }
        }
        let vectors = ExprMatrix::from_rows(vectors).expect("rows checked");
        Ok(ChartFrame {
            coordinates,
            vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[Symbol] {
        &self.coordinates
    }

    /// `f_i^a`, the `∂_a` coefficient of `e_i`.
    pub fn coefficient(&self, i: usize, a: usize) -> &Expr {
        self.vectors.get(i, a)
    }

    pub fn matrix(&self) -> &ExprMatrix {
        &self.vectors
    }

    /// `e_i(f) = Σ_a f_i^a ∂f/∂x^a`.
    pub fn derivative(&self, i: usize, f: &Expr) -> Expr {
        if f.is_constant() {
            return Expr::zero();
        }
        self.coordinates
            .iter()
            .enumerate()
            .map(|(a, x)| {
                let c = self.vectors.get(i, a);
                if c.is_zero() {
                    Expr::zero()
                } else {
                    c * f.diff(x)
                }
            })
            .sum()
    }

    /// Structure functions of the frame, from
    /// `[e_i,e_j] = Σ_a (e_i(f_j^a) - e_j(f_i^a)) ∂_a` re-expressed in the frame.
    pub fn brackets(&self) -> Result<StructureFunctions, FrameError> {
        let n = self.dim();
        let inverse = self
            .vectors
            .inverse()
            .map_err(|_| FrameError::SingularFrame {
                determinant: self.vectors.determinant().to_string(),
            })?;
        let mut out = StructureFunctions::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let coord: Vec<Expr> = (0..n)
                    .map(|a| {
                        self.derivative(i, self.vectors.get(j, a))
                            - self.derivative(j, self.vectors.get(i, a))
                    })
                    .collect();
                // ∂_a = Σ_k (F⁻¹)_{ak} e_k
                let frame = (0..n)
                    .map(|k| (0..n).map(|a| &coord[a] * inverse.get(a, k)).sum())
                    .collect();
                out.set(i, j, VectorField(frame));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameMode {
    Abstract,
    Chart(ChartFrame),
}

/// Odd-dimensional manifold with a global frame, structure functions and a
/// constant frame metric `g_{ij} = g(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameManifold {
    dim: usize,
    mode: FrameMode,
    structure: StructureFunctions,
    metric: ExprMatrix,
    metric_inverse: ExprMatrix,
    symbols: SymbolTable,
}

impl FrameManifold {
    /// Manifold realized on a chart; brackets are derived from the frame.
    pub fn from_chart(
        symbols: SymbolTable,
        chart: ChartFrame,
        metric: ExprMatrix,
    ) -> Result<Self, FrameError> {
        let dim = chart.dim();
        check_dimension(dim)?;
        let structure = chart.brackets()?;
        Self::assemble(symbols, dim, FrameMode::Chart(chart), structure, metric)
    }

    /// Abstract frame with parameter-only structure constants.
    pub fn from_structure(
        symbols: SymbolTable,
        structure: StructureFunctions,
        metric: ExprMatrix,
    ) -> Result<Self, FrameError> {
        let dim = structure.dim();
        check_dimension(dim)?;
        if let Some((i, j)) = structure.antisymmetry_violation() {
            return Err(FrameError::NotAntisymmetric { i, j });
        }
        for b in &structure.brackets {
            if let Some(c) = b.0.iter().find(|c| !symbols.is_parameter_only(c)) {
                return Err(FrameError::CoordinateDependence {
                    value: c.to_string(),
                });
            }
        }
        Self::assemble(symbols, dim, FrameMode::Abstract, structure, metric)
    }

    fn assemble(
        symbols: SymbolTable,
        dim: usize,
        mode: FrameMode,
        structure: StructureFunctions,
        metric: ExprMatrix,
    ) -> Result<Self, FrameError> {
        if metric.rows() != dim || metric.cols() != dim {
            return Err(FrameError::Shape {
                what: "metric".into(),
                expected: dim,
                found: if metric.rows() != dim {
                    metric.rows()
                } else {
                    metric.cols()
                },
            });
        }
        for i in 0..dim {
            for j in 0..dim {
                let g = metric.get(i, j);
                if !symbols.is_parameter_only(g) {
                    return Err(FrameError::NonConstantMetric {
                        i,
                        j,
                        value: g.to_string(),
                    });
                }
            }
        }
        if !metric.is_symmetric() {
            return Err(FrameError::AsymmetricMetric);
        }
        let metric_inverse = metric.inverse().map_err(|_| FrameError::SingularMetric)?;
        Ok(FrameManifold {
            dim,
            mode,
            structure,
            metric,
            metric_inverse,
            symbols,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> &FrameMode {
        &self.mode
    }

    pub fn chart(&self) -> Option<&ChartFrame> {
        match &self.mode {
            FrameMode::Chart(c) => Some(c),
            FrameMode::Abstract => None,
        }
    }

    pub fn structure(&self) -> &StructureFunctions {
        &self.structure
    }

    pub fn metric(&self) -> &ExprMatrix {
        &self.metric
    }

    pub fn metric_inverse(&self) -> &ExprMatrix {
        &self.metric_inverse
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn basis(&self, i: usize) -> VectorField {
        VectorField::basis(self.dim, i)
    }

    /// `g(X, Y)`.
    pub fn inner(&self, x: &VectorField, y: &VectorField) -> Expr {
        let mut total = Expr::zero();
        for i in 0..self.dim {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let g = self.metric.get(i, j);
                if g.is_zero() || y.0[j].is_zero() {
                    continue;
                }
                total = total + &x.0[i] * g * &y.0[j];
            }
        }
        total
    }

    /// Metric dual `g(X, ·)` as a 1-form.
    pub fn lower(&self, x: &VectorField) -> OneForm {
        OneForm(
            (0..self.dim)
                .map(|j| self.inner(x, &self.basis(j)))
                .collect(),
        )
    }

    /// `e_i(f)`. In abstract mode only parameter-only functions are allowed
    /// and their derivative is zero.
    pub fn directional_derivative(&self, i: usize, f: &Expr) -> Result<Expr, FrameError> {
        if i >= self.dim {
            return Err(FrameError::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        match &self.mode {
            FrameMode::Chart(chart) => Ok(chart.derivative(i, f)),
            FrameMode::Abstract => {
                if self.symbols.is_parameter_only(f) {
                    Ok(Expr::zero())
                } else {
                    Err(FrameError::CoordinateDependence {
                        value: f.to_string(),
                    })
                }
            }
        }
    }

    /// `X(f) = Σ_i X^i e_i(f)`.
    pub fn apply_vector(&self, x: &VectorField, f: &Expr) -> Result<Expr, FrameError> {
        let mut total = Expr::zero();
        for (i, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            total = total + c * self.directional_derivative(i, f)?;
        }
        Ok(total)
    }

    /// Lie bracket of vector fields via Leibniz over the structure functions.
    pub fn bracket(&self, x: &VectorField, y: &VectorField) -> Result<VectorField, FrameError> {
        let n = self.dim;
        let mut out = VectorField::zero(n);
        for k in 0..n {
            let mut c = self.apply_vector(x, &y.0[k])? - self.apply_vector(y, &x.0[k])?;
            for i in 0..n {
                if x.0[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let s = self.structure.coefficient(k, i, j);
                    if s.is_zero() || y.0[j].is_zero() {
                        continue;
                    }
                    c = c + &x.0[i] * &y.0[j] * s;
                }
            }
            out.0[k] = c;
        }
        Ok(out)
    }

    /// Cyclic sums `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`
    /// over `i < j < k`, including derivative terms in chart mode.
    pub fn check_jacobi(&self) -> Result<JacobiVerdict, FrameError> {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let e = |a| self.basis(a);
                    let s = self.structure.bracket(j, k).clone();
                    let t1 = self.bracket(&e(i), &s)?;
                    let t2 = self.bracket(&e(j), self.structure.bracket(k, i))?;
                    let t3 = self.bracket(&e(k), self.structure.bracket(i, j))?;
                    let sum = &(&t1 + &t2) + &t3;
                    if !sum.is_zero() {
                        violations.push(JacobiViolation {
                            triple: (i, j, k),
                            cyclic_sum: sum,
                        });
                    }
                }
            }
        }
        Ok(JacobiVerdict { violations })
    }

    /// Replaces parameters by values throughout the frame data.
    pub fn substitute(&self, bindings: &[(String, Expr)]) -> Result<Self, FrameError> {
        let sub = |e: &Expr| {
            e.substitute_all(bindings)
                .map_err(|err| FrameError::Substitution(err.to_string()))
        };
        let metric = try_map_matrix(&self.metric, sub)?;
        match &self.mode {
            FrameMode::Abstract => {
                let mut structure = StructureFunctions::zero(self.dim);
                for i in 0..self.dim {
                    for j in i + 1..self.dim {
                        let b = self.structure.bracket(i, j);
                        let v = b.0.iter().map(sub).collect::<Result<Vec<_>, _>>()?;
                        structure.set(i, j, VectorField(v));
                    }
                }
                Self::from_structure(self.symbols.clone(), structure, metric)
            }
            FrameMode::Chart(chart) => {
                let vectors = (0..chart.dim())
                    .map(|i| {
                        (0..chart.dim())
                            .map(|a| sub(chart.coefficient(i, a)))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let chart = ChartFrame::new(chart.coordinates.clone(), vectors)?;
                Self::from_chart(self.symbols.clone(), chart, metric)
            }
        }
    }
}

fn try_map_matrix(
    m: &ExprMatrix,
    f: impl Fn(&Expr) -> Result<Expr, FrameError>,
) -> Result<ExprMatrix, FrameError> {
    let rows = (0..m.rows())
        .map(|i| m.row(i).iter().map(&f).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExprMatrix::from_rows(rows).expect("shape preserved"))
}

fn check_dimension(dim: usize) -> Result<(), FrameError> {
    if dim < 3 || dim.is_multiple_of(2) {
        Err(FrameError::BadDimension(dim))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub cyclic_sum: VectorField,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JacobiVerdict {
    pub violations: Vec<JacobiViolation>,
}

impl JacobiVerdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> SymbolTable {
        SymbolTable::from_symbols([
            Symbol::coordinate("x"),
            Symbol::coordinate("y"),
            Symbol::coordinate("z"),
            Symbol::parameter("c2"),
            Symbol::parameter("c3"),
        ])
        .unwrap()
    }

    fn vf(t: &SymbolTable, comps: &[&str]) -> VectorField {
        VectorField(comps.iter().map(|s| t.parse(s).unwrap()).collect())
    }

    fn chart(t: &SymbolTable, coords: &[&str], rows: &[&[&str]]) -> ChartFrame {
        ChartFrame::new(
            coords.iter().map(|c| t.get(c).unwrap().clone()).collect(),
            rows.iter()
                .map(|r| r.iter().map(|s| t.parse(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn example_chart(t: &SymbolTable) -> ChartFrame {
        chart(
            t,
            &["x", "y", "z"],
            &[
                &["0", "2/x", "0"],
                &["2", "-4*z/x", "x*y"],
                &["0", "0", "1"],
            ],
        )
    }

    #[test]
    fn brackets_of_the_three_dimensional_chart_example() {
        let t = xyz();
        let s = example_chart(&t).brackets().unwrap();
        assert_eq!(s.bracket(0, 1), &vf(&t, &["2/x", "0", "2"]));
        assert_eq!(s.bracket(0, 2), &VectorField::zero(3));
        assert_eq!(s.bracket(1, 2), &vf(&t, &["2", "0", "0"]));
        assert_eq!(s.bracket(1, 0), &vf(&t, &["-2/x", "0", "-2"]));
    }

    #[test]
    fn coordinate_frames_commute() {
        let t = xyz();
        let c = chart(
            &t,
            &["x", "y", "z"],
            &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
        );
        assert!(c.brackets().unwrap().is_abelian());
        // two-dimensional fixture with disjoint variables
        let c2 = chart(&t, &["x", "y"], &[&["x", "0"], &["0", "1"]]);
        assert!(c2.brackets().unwrap().is_abelian());
    }

    #[test]
    fn singular_frame_names_determinant() {
        let t = xyz();
        let c = chart(
            &t,
            &["x", "y", "z"],
            &[&["x", "0", "0"], &["2*x", "0", "0"], &["0", "0", "1"]],
        );
        assert_eq!(
            c.brackets().unwrap_err(),
            FrameError::SingularFrame {
                determinant: "0".into()
            }
        );
    }

    #[test]
    fn directional_derivatives() {
        let t = xyz();
        let m = FrameManifold::from_chart(t.clone(), example_chart(&t), ExprMatrix::identity(3))
            .unwrap();
        let x = t.parse("x").unwrap();
        assert_eq!(m.directional_derivative(0, &x).unwrap(), Expr::zero());
        assert_eq!(m.directional_derivative(1, &x).unwrap(), Expr::int(2));

        let a = bra1(&t);
        let c2 = t.parse("c2").unwrap();
        assert_eq!(a.directional_derivative(0, &c2).unwrap(), Expr::zero());
        assert!(matches!(
            a.directional_derivative(0, &x),
            Err(FrameError::CoordinateDependence { .. })
        ));
    }

    fn abstract_frame(t: &SymbolTable, brackets: &[(usize, usize, &[&str])]) -> FrameManifold {
        let mut s = StructureFunctions::zero(3);
        for (i, j, v) in brackets {
            s.set(*i, *j, vf(t, v));
        }
        FrameManifold::from_structure(t.clone(), s, ExprMatrix::identity(3)).unwrap()
    }

    fn bra1(t: &SymbolTable) -> FrameManifold {
        abstract_frame(
            t,
            &[
                (1, 2, &["2", "0", "0"]),
                (2, 0, &["0", "c2", "0"]),
                (0, 1, &["0", "0", "c3"]),
            ],
        )
    }

    #[test]
    fn jacobi_verdicts() {
        let t = xyz();
        assert!(bra1(&t).check_jacobi().unwrap().is_ok());
        assert!(abstract_frame(&t, &[]).check_jacobi().unwrap().is_ok());
        let tampered = abstract_frame(
            &t,
            &[
                (0, 1, &["1", "0", "0"]),
                (1, 2, &["1", "0", "0"]),
                (2, 0, &["0", "1", "0"]),
            ],
        );
        let v = tampered.check_jacobi().unwrap();
        assert_eq!(v.violations.len(), 1);
        assert_eq!(v.violations[0].triple, (0, 1, 2));
        assert_eq!(v.violations[0].cyclic_sum, vf(&t, &["0", "1", "0"]));
        // without the extra bracket the cyclic sum vanishes
        let ok = abstract_frame(&t, &[(0, 1, &["1", "0", "0"]), (1, 2, &["1", "0", "0"])]);
        assert!(ok.check_jacobi().unwrap().is_ok());
    }

    #[test]
    fn chart_frames_satisfy_jacobi() {
        let t = xyz();
        let m = FrameManifold::from_chart(t.clone(), example_chart(&t), ExprMatrix::identity(3))
            .unwrap();
        assert!(m.check_jacobi().unwrap().is_ok());
    }

    #[test]
    fn bracket_examples() {
        let t = xyz();
        let m = FrameManifold::from_chart(t.clone(), example_chart(&t), ExprMatrix::identity(3))
            .unwrap();
        assert_eq!(
            m.bracket(&m.basis(1), &m.basis(2)).unwrap(),
            vf(&t, &["2", "0", "0"])
        );
        let x = vf(&t, &["x*y", "z^2 - 1/x", "3"]);
        assert!(m.bracket(&x, &x).unwrap().is_zero());

        let flat = FrameManifold::from_chart(
            t.clone(),
            chart(
                &t,
                &["x", "y", "z"],
                &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
            ),
            ExprMatrix::identity(3),
        )
        .unwrap();
        let e1 = flat.basis(0);
        assert_eq!(flat.bracket(&e1, &vf(&t, &["x", "0", "0"])).unwrap(), e1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = xyz();
        assert_eq!(
            FrameManifold::from_structure(
                t.clone(),
                StructureFunctions::zero(4),
                ExprMatrix::identity(4)
            )
            .unwrap_err(),
            FrameError::BadDimension(4)
        );
        let mut s = StructureFunctions::zero(3);
        s.set(0, 1, vf(&t, &["x", "0", "0"]));
        assert!(matches!(
            FrameManifold::from_structure(t.clone(), s, ExprMatrix::identity(3)),
            Err(FrameError::CoordinateDependence { .. })
        ));
        let mut g = ExprMatrix::identity(3);
        g.set(0, 1, Expr::int(1));
        assert_eq!(
            FrameManifold::from_structure(t.clone(), StructureFunctions::zero(3), g).unwrap_err(),
            FrameError::AsymmetricMetric
        );
        let mut g = ExprMatrix::identity(3);
        g.set(2, 2, t.parse("x").unwrap());
        assert!(matches!(
            FrameManifold::from_structure(t.clone(), StructureFunctions::zero(3), g),
            Err(FrameError::NonConstantMetric { i: 2, j: 2, .. })
        ));
        assert_eq!(
            FrameManifold::from_structure(t, StructureFunctions::zero(3), ExprMatrix::zeros(3, 3))
                .unwrap_err(),
            FrameError::SingularMetric
        );
    }
}
