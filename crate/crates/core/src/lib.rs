//! Exact frame-based tensor calculus for (almost) contact metric manifolds.
//!
//! Scalars are canonical rational functions ([`expr::Expr`]); every tensor
//! is stored by its components in a global frame. On top of the Levi-Civita
//! connection and curvature tables, [`classify`] decides the Sasakian,
//! (κ,μ)-nullity, symmetry and φ-recurrence conditions exactly.

pub mod catalog;
pub mod classify;
pub mod contact;
pub mod curvature;
pub mod expr;
pub mod frame;
pub mod linalg;
