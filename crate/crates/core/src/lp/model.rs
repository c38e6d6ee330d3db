use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjSense {
    Minimize,
    Maximize,
}

/// `None` bounds are infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    pub kind: VarKind,
}

/// Sparse row: `(variable index, coefficient)` sorted by index, no zeros.
pub type Terms = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Terms,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: ObjSense,
    pub terms: Terms,
    pub constant: Rational,
}

impl Objective {
    pub fn minimize(terms: Terms) -> Self {
        Objective { sense: ObjSense::Minimize, terms: normalize(terms), constant: Rational::zero() }
    }

    pub fn maximize(terms: Terms) -> Self {
        Objective { sense: ObjSense::Maximize, terms: normalize(terms), constant: Rational::zero() }
    }

    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        dot(&self.terms, values) + &self.constant
    }
}

/// Sums duplicate indices, drops zeros, sorts by index.
pub fn normalize(terms: Terms) -> Terms {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, c) in terms {
        *acc.entry(i).or_default() += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn dot(terms: &[(usize, Rational)], values: &[Rational]) -> Rational {
    terms.iter().map(|(i, c)| c * &values[*i]).sum()
}

/// A linear (or mixed-integer) program with sparse rows. Integrality flags
/// are carried for emission only; the simplex solves the relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearModel {
    pub vars: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
}

impl Default for LinearModel {
    fn default() -> Self {
        Self::new()
    }
}

impl LinearModel {
    pub fn new() -> Self {
        LinearModel { vars: Vec::new(), constraints: Vec::new(), objective: Objective::minimize(Vec::new()) }
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: Option<Rational>,
        upper: Option<Rational>,
        kind: VarKind,
    ) -> usize {
        self.vars.push(Variable { name: name.into(), lower, upper, kind });
        self.vars.len() - 1
    }

    /// Continuous variable with `lower ≤ x`, no upper bound.
    pub fn add_nonneg(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, Some(Rational::zero()), None, VarKind::Continuous)
    }

    pub fn add_bounded(&mut self, name: impl Into<String>, lower: Rational, upper: Rational) -> usize {
        self.add_var(name, Some(lower), Some(upper), VarKind::Continuous)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Terms,
        relation: Relation,
        rhs: Rational,
    ) -> usize {
        self.constraints.push(Constraint { name: name.into(), terms: normalize(terms), relation, rhs });
        self.constraints.len() - 1
    }

    pub fn set_objective(&mut self, objective: Objective) {
        self.objective = Objective { terms: normalize(objective.terms), ..objective };
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let n = self.vars.len();
        let bad = |t: &Terms| t.iter().any(|(i, _)| *i >= n);
        if let Some(c) = self.constraints.iter().find(|c| bad(&c.terms)) {
            return Err(Error::DimensionMismatch(format!("row {} references a variable beyond {n}", c.name)));
        }
        if bad(&self.objective.terms) {
            return Err(Error::DimensionMismatch(format!("objective references a variable beyond {n}")));
        }
        for v in &self.vars {
            if v.kind == VarKind::Binary {
                let lo_ok = v.lower.as_ref().is_some_and(|l| !l.is_negative());
                let hi_ok = v.upper.as_ref().is_some_and(|u| *u <= Rational::one());
                if !lo_ok || !hi_ok {
                    return Err(Error::DimensionMismatch(format!(
                        "binary variable {} has bounds outside [0, 1]",
                        v.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Residual-free check of bounds and rows.
    pub fn is_feasible_point(&self, values: &[Rational]) -> bool {
        if values.len() != self.vars.len() {
            return false;
        }
        for (v, x) in self.vars.iter().zip(values) {
            if v.lower.as_ref().is_some_and(|l| x < l) || v.upper.as_ref().is_some_and(|u| x > u) {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let lhs = dot(&c.terms, values);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}
