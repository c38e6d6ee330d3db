//! Approximation schemes for knapsack cover / packing with a fixed number
//! of dimensions, and for `P` through the decomposition.
//!
//! Guess the `k` most expensive chosen items `S`, forbid every item more
//! expensive than the cheapest guess, solve the LP relaxation over the rest
//! and round its basic solution. A basic solution has at most one
//! fractional item per row, so rounding costs at most `μ` items each no
//! dearer than anything in `S`.

use crate::decomposition::{build_mkc, enumerate_g, lift, DEFAULT_G_CAP};
use crate::error::{Error, Result};
use crate::instance::{zero_optimum, CoverInstance, MixedSolution, MkcInstance, MkcSolution, Sense};
use crate::lp::{count_fractional, LinearModel, Objective, Relation, Simplex};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtasConfig {
    pub epsilon: Rational,
    /// Upper limit on the number of guessed subsets per subproblem.
    pub subset_cap: u64,
    /// Upper limit on the number of choice functions for `P`.
    pub g_cap: u64,
}

impl PtasConfig {
    pub fn new(epsilon: Rational) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(PtasConfig { epsilon, subset_cap: 10_000_000, g_cap: DEFAULT_G_CAP })
    }

    /// Guess size `min{η, ⌈μ/ε⌉}`.
    pub fn guess_size(&self, eta: usize, mu: usize) -> usize {
        let k = (Rational::from_int(mu as i64) / &self.epsilon).ceil();
        k.to_i64().map_or(eta, |k| (k.max(0) as usize).min(eta))
    }

    /// Guess size for packing, `min{η, ⌈μ(1+ε)/ε⌉}`. Rounding down loses at
    /// most `μ/k` of the optimum, and `1 − μ/k ≥ 1/(1+ε)` needs this larger `k`.
    pub fn pack_guess_size(&self, eta: usize, mu: usize) -> usize {
        let k = (Rational::from_int(mu as i64) * (Rational::one() + &self.epsilon) / &self.epsilon).ceil();
        k.to_i64().map_or(eta, |k| (k.max(0) as usize).min(eta))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PtasStats {
    pub lp_solves: usize,
    /// Largest number of fractional item variables seen in an LP solution.
    pub max_fractional: usize,
    /// LP solutions with more fractional item variables than rows.
    pub fractional_over_rows: usize,
    /// Guesses that passed the filter but whose LP was not optimal.
    pub lp_failures: usize,
    /// Every `(μ, fractional count)` observed, in solve order.
    pub fractional_log: Vec<(usize, usize)>,
}

impl PtasStats {
    fn record(&mut self, rows: usize, fractional: usize) {
        self.lp_solves += 1;
        self.max_fractional = self.max_fractional.max(fractional);
        if fractional > rows {
            self.fractional_over_rows += 1;
        }
        self.fractional_log.push((rows, fractional));
    }
}

fn binomial_sum(n: usize, k: usize) -> u64 {
    let mut total = 0u64;
    let mut term = 1u64;
    for s in 0..=k.min(n) {
        total = total.saturating_add(term);
        term = term.saturating_mul((n - s) as u64) / (s as u64 + 1);
    }
    total
}

/// Size-then-lexicographic enumeration of subsets of `0..n` with at most `k` elements.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    for size in 0..=k.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            visit(&idx);
            let mut pos = size;
            while pos > 0 && idx[pos - 1] == n - size + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            for t in pos..size {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
}

/// Best `α` for a fixed `y`, or `None` if no `α` makes `y` feasible.
/// Cover takes the least `α` that closes each row; packing fills the
/// remaining capacity when that pays.
fn best_alpha(inst: &MkcInstance, y: &[bool]) -> Option<Vec<Rational>> {
    let cov = inst.covered(y);
    (0..inst.mu)
        .map(|j| {
            let gap = inst.dbar[j] - cov[j];
            if inst.sense == Sense::Cover {
                (gap <= inst.cbar[j]).then(|| Rational::from_int(gap.max(0)))
            } else if gap < 0 {
                None
            } else if inst.vbar[j] > 0 {
                Some(Rational::from_int(gap.min(inst.cbar[j])))
            } else {
                Some(Rational::zero())
            }
        })
        .collect()
}

fn scheme(inst: &MkcInstance, cfg: &PtasConfig, stats: &mut PtasStats) -> Result<Option<MkcSolution>> {
    let cover = inst.sense == Sense::Cover;
    let free = inst.free_items();
    let k = if cover { cfg.guess_size(free.len(), inst.mu) } else { cfg.pack_guess_size(free.len(), inst.mu) };
    let subsets = binomial_sum(free.len(), k);
    if subsets > cfg.subset_cap {
        return Err(Error::CapExceeded {
            what: "guessed subsets".into(),
            value: subsets.to_string(),
            cap: cfg.subset_cap.to_string(),
        });
    }
    let mut best: Option<MkcSolution> = None;
    if !cover && inst.fixed.is_empty() {
        best = Some(MkcSolution {
            y: vec![false; inst.eta],
            alpha: vec![Rational::zero(); inst.mu],
            value: Rational::zero(),
        });
    }
    let offer = |y: Vec<bool>, best: &mut Option<MkcSolution>| {
        let Some(alpha) = best_alpha(inst, &y) else { return };
        let value = inst.objective(&y, &alpha);
        let better = match best {
            None => true,
            Some(b) if cover => value < b.value,
            Some(b) => value > b.value,
        };
        if better {
            *best = Some(MkcSolution { y, alpha, value });
        }
    };

    for_each_subset(free.len(), k, |picks| {
        let guess: Vec<usize> = picks.iter().map(|&p| free[p]).collect();
        let floor = guess.iter().map(|&t| inst.fbar[t]).min();
        let mut y_fixed = vec![false; inst.eta];
        for &i in inst.fixed.iter().chain(&guess) {
            y_fixed[i] = true;
        }
        let rest: Vec<usize> =
            free.iter().copied().filter(|&i| !y_fixed[i] && floor.is_none_or(|m| inst.fbar[i] <= m)).collect();
        let base = inst.covered(&y_fixed);

        let residual: Vec<i64> = (0..inst.mu).map(|j| inst.dbar[j] - base[j]).collect();
        let passes = (0..inst.mu).all(|j| {
            if cover {
                rest.iter().map(|&i| inst.wbar[i][j]).sum::<i64>() >= residual[j] - inst.cbar[j]
            } else {
                residual[j] >= 0
            }
        });
        if !passes {
            return;
        }
        // The guess on its own settles every optimum with at most k free items.
        offer(y_fixed.clone(), &mut best);

        let mut model = LinearModel::new();
        let yv: Vec<usize> =
            rest.iter().map(|&i| model.add_bounded(format!("y{i}"), Rational::zero(), Rational::one())).collect();
        let av: Vec<usize> = (0..inst.mu)
            .map(|j| model.add_bounded(format!("a{j}"), Rational::zero(), Rational::from_int(inst.cbar[j])))
            .collect();
        let relation = if cover { Relation::Ge } else { Relation::Le };
        for j in 0..inst.mu {
            let mut terms: Vec<(usize, Rational)> =
                rest.iter().zip(&yv).map(|(&i, &v)| (v, Rational::from_int(inst.wbar[i][j]))).collect();
            terms.push((av[j], Rational::one()));
            model.add_constraint(format!("r{j}"), terms, relation, Rational::from_int(residual[j]));
        }
        let mut obj: Vec<(usize, Rational)> =
            rest.iter().zip(&yv).map(|(&i, &v)| (v, Rational::from_int(inst.fbar[i]))).collect();
        obj.extend((0..inst.mu).map(|j| (av[j], Rational::from_int(inst.vbar[j]))));
        model.set_objective(if cover { Objective::minimize(obj) } else { Objective::maximize(obj) });

        let lp = match Simplex::new(&model) {
            Ok(mut s) => s.optimize(&model.objective),
            Err(_) => {
                stats.lp_failures += 1;
                return;
            }
        };
        if !lp.is_optimal() {
            stats.lp_failures += 1;
            return;
        }
        stats.record(inst.mu, count_fractional(&lp, &model, &yv));

        let mut y = y_fixed;
        for (&i, &v) in rest.iter().zip(&yv) {
            let val = &lp.values[v];
            y[i] = if cover { val.is_positive() } else { val.is_one() };
        }
        offer(y, &mut best);
    });
    Ok(best)
}

/// `(1+ε)`-approximation for a cover subproblem.
pub fn mkc_ptas(inst: &MkcInstance, cfg: &PtasConfig) -> Result<MkcSolution> {
    mkc_ptas_with_stats(inst, cfg, &mut PtasStats::default())
}

pub fn mkc_ptas_with_stats(inst: &MkcInstance, cfg: &PtasConfig, stats: &mut PtasStats) -> Result<MkcSolution> {
    if inst.sense != Sense::Cover {
        return Err(Error::Precondition("mkc_ptas needs a cover instance".into()));
    }
    scheme(inst, cfg, stats)?.ok_or_else(|| Error::Infeasible("no guessed subset admits a cover".into()))
}

/// `1/(1+ε)`-approximation for a packing subproblem.
pub fn mkp_ptas(inst: &MkcInstance, cfg: &PtasConfig) -> Result<MkcSolution> {
    mkp_ptas_with_stats(inst, cfg, &mut PtasStats::default())
}

pub fn mkp_ptas_with_stats(inst: &MkcInstance, cfg: &PtasConfig, stats: &mut PtasStats) -> Result<MkcSolution> {
    if inst.sense != Sense::Pack {
        return Err(Error::Precondition("mkp_ptas needs a packing instance".into()));
    }
    scheme(inst, cfg, stats)?.ok_or_else(|| Error::Infeasible("the mandatory items do not fit".into()))
}

pub fn p_ptas(inst: &CoverInstance, cfg: &PtasConfig) -> Result<MixedSolution> {
    p_ptas_with_stats(inst, cfg, &mut PtasStats::default())
}

/// Runs the subproblem scheme for every choice function and lifts the best.
pub fn p_ptas_with_stats(inst: &CoverInstance, cfg: &PtasConfig, stats: &mut PtasStats) -> Result<MixedSolution> {
    if let Some(sol) = zero_optimum(inst) {
        return Ok(sol);
    }
    let cover = inst.sense == Sense::Cover;
    let mut best = None;
    for g in enumerate_g(inst, cfg.g_cap)? {
        let mkc = build_mkc(inst, &g);
        if !mkc.is_feasible() {
            continue;
        }
        let sol = match scheme(&mkc, cfg, stats)? {
            Some(s) => s,
            None => continue,
        };
        let better = match &best {
            None => true,
            Some((_, b)) => {
                let b: &MkcSolution = b;
                if cover {
                    sol.value < b.value
                } else {
                    sol.value > b.value
                }
            }
        };
        if better {
            best = Some((g, sol));
        }
    }
    let (g, sol) = best.ok_or_else(|| Error::Infeasible("every subproblem is infeasible".into()))?;
    lift(inst, &g, &sol)
}
