//! Linear models and an exact simplex solver for their relaxations.

pub mod model;
pub mod simplex;

pub use model::{dot, normalize, Constraint, LinearModel, ObjSense, Objective, Relation, Terms, VarKind, Variable};
pub use simplex::{count_fractional, solve, LpResult, LpStatus, Simplex};
