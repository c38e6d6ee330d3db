//! Convex hull of `Y = {(α, ψ) ∈ R₊ × {0,1}^ν : α + ∑ψ ≥ δ, α ≤ σ}`.

use crate::error::{Error, Result};
use crate::lp::{LinearModel, Objective, Relation};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullYParams {
    pub delta: Rational,
    pub sigma: Rational,
    pub nu: usize,
}

impl HullYParams {
    pub fn check(&self) -> Result<()> {
        if !self.delta.is_positive() {
            return Err(Error::Hypothesis(format!("delta must be positive, got {}", self.delta)));
        }
        if !self.sigma.is_positive() || self.sigma > Rational::one() {
            return Err(Error::Hypothesis(format!("sigma must lie in (0, 1], got {}", self.sigma)));
        }
        if self.nu == 0 {
            return Err(Error::Hypothesis("nu must be positive".into()));
        }
        let need = (&self.delta - &self.sigma).ceil();
        if Rational::from_int(self.nu as i64) < need {
            return Err(Error::Hypothesis(format!("nu = {} is below ⌈δ − σ⌉ = {need}", self.nu)));
        }
        Ok(())
    }
}

/// Variable 0 is `α`; variables `1..=ν` are `ψ`.
pub fn hull_y(p: &HullYParams) -> Result<LinearModel> {
    p.check()?;
    let mut m = LinearModel::new();
    let alpha = m.add_bounded("alpha", Rational::zero(), p.sigma.clone());
    let psi: Vec<usize> =
        (1..=p.nu).map(|i| m.add_bounded(format!("psi{i}"), Rational::zero(), Rational::one())).collect();
    let sum_psi = |coef: &Rational| psi.iter().map(|&v| (v, coef.clone())).collect::<Vec<_>>();

    let mut cover = sum_psi(&Rational::one());
    cover.push((alpha, Rational::one()));
    m.add_constraint("cover", cover, Relation::Ge, p.delta.clone());

    m.add_constraint("round", sum_psi(&Rational::one()), Relation::Ge, (&p.delta - &p.sigma).ceil());

    // α ≥ (δ − ⌊δ⌋)(⌈δ⌉ − ∑ψ)
    let frac = &p.delta - p.delta.floor();
    let mut mir = sum_psi(&frac);
    mir.push((alpha, Rational::one()));
    m.add_constraint("mir", mir, Relation::Ge, &frac * p.delta.ceil());

    m.set_objective(Objective::minimize(Vec::new()));
    Ok(m)
}

/// Minimum of `cost_alpha·α + ∑ cost_psi·ψ` over the integer points of `Y`.
pub fn enumerate_y_min(p: &HullYParams, cost_alpha: &Rational, cost_psi: &[Rational]) -> Option<Rational> {
    assert_eq!(cost_psi.len(), p.nu);
    let mut best: Option<Rational> = None;
    for mask in 0u64..(1 << p.nu) {
        let ones = mask.count_ones() as i64;
        let lo = (&p.delta - Rational::from_int(ones)).max(Rational::zero());
        if lo > p.sigma {
            continue;
        }
        let alpha = if cost_alpha.is_negative() { p.sigma.clone() } else { lo };
        let mut v = cost_alpha * &alpha;
        for (i, c) in cost_psi.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v += c;
            }
        }
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best
}
