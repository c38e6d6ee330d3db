//! Linear formulations: the hull of a simple mixed set, a perfect extended
//! formulation for uniform one-row instances, an `ε`-approximate one for
//! the one-row knapsack cover subproblem, and LP-format output.

pub mod approx;
pub mod hull;
pub mod lp_format;
pub mod uniform;

pub use approx::{build_eps_1mkc, classify, EpsFormulation, PieceKey, SignatureSpace, DEFAULT_PIECE_CAP};
pub use hull::{enumerate_y_min, hull_y, HullYParams};
pub use lp_format::emit_lp;
pub use uniform::{build_uniform_perfect, uniform_objective, PieceIndex, UniformInstance};

use crate::instance::{CoverInstance, Sense};
use crate::lp::{LinearModel, Objective, Relation, Terms, VarKind};
use crate::rational::Rational;

/// The natural mixed-integer model of an instance: `x_ij` then `y_i`.
pub fn p_model(inst: &CoverInstance) -> LinearModel {
    let q = Rational::from_int;
    let mut m = LinearModel::new();
    let x: Vec<Vec<usize>> =
        (0..inst.n).map(|i| (0..inst.m).map(|j| m.add_nonneg(format!("x{}_{}", i + 1, j + 1))).collect()).collect();
    let y: Vec<usize> =
        (0..inst.n).map(|i| m.add_var(format!("y{}", i + 1), Some(q(0)), Some(q(1)), VarKind::Binary)).collect();
    let rel = match inst.sense {
        Sense::Cover => Relation::Ge,
        Sense::Pack => Relation::Le,
    };
    for j in 0..inst.m {
        m.add_constraint(format!("row{}", j + 1), (0..inst.n).map(|i| (x[i][j], q(1))).collect(), rel, q(inst.d[j]));
    }
    for i in 0..inst.n {
        for j in 0..inst.m {
            let tag = format!("{}_{}", i + 1, j + 1);
            m.add_constraint(format!("lo{tag}"), vec![(x[i][j], q(1)), (y[i], q(-inst.l[i][j]))], Relation::Ge, q(0));
            m.add_constraint(format!("hi{tag}"), vec![(x[i][j], q(1)), (y[i], q(-inst.c[i][j]))], Relation::Le, q(0));
        }
    }
    let mut obj: Terms = Vec::new();
    for i in 0..inst.n {
        obj.extend((0..inst.m).map(|j| (x[i][j], q(inst.v[i][j]))));
        obj.push((y[i], q(inst.f[i])));
    }
    m.set_objective(match inst.sense {
        Sense::Cover => Objective::minimize(obj),
        Sense::Pack => Objective::maximize(obj),
    });
    m
}
