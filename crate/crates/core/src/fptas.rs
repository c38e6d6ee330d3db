//! Cost-scaling dynamic program for the one-dimensional knapsack cover
//! problem, and its use on one-row instances of `P`.

use std::fmt;
use std::str::FromStr;

use crate::decomposition::{build_mkc, enumerate_g, lift, DEFAULT_G_CAP};
use crate::error::{Error, Result};
use crate::instance::{zero_optimum, CoverInstance, MixedSolution, MkcInstance, MkcSolution, Sense};
use crate::rational::Rational;

/// The polynomial `poly(η)` bounding `f_max / f_min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyEta {
    Eta,
    EtaSquared,
    Const(u64),
}

impl PolyEta {
    pub fn eval(self, eta: usize) -> Rational {
        let eta = eta as i64;
        let v = match self {
            PolyEta::Eta => eta,
            PolyEta::EtaSquared => eta * eta,
            PolyEta::Const(k) => k as i64,
        };
        Rational::from_int(v.max(1))
    }
}

impl fmt::Display for PolyEta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyEta::Eta => write!(f, "eta"),
            PolyEta::EtaSquared => write!(f, "eta^2"),
            PolyEta::Const(k) => write!(f, "const:{k}"),
        }
    }
}

impl FromStr for PolyEta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "eta" => Ok(PolyEta::Eta),
            "eta^2" => Ok(PolyEta::EtaSquared),
            other => match other.strip_prefix("const:").map(|k| k.parse::<u64>()) {
                Some(Ok(k)) if k >= 1 => Ok(PolyEta::Const(k)),
                _ => Err(Error::Parse(format!("poly-eta must be eta, eta^2 or const:k with k ≥ 1, got {s:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptasConfig {
    pub epsilon: Rational,
    pub poly_eta: PolyEta,
    /// Upper limit on `(η+1)(F+1)` table cells.
    pub table_cap: u64,
}

impl FptasConfig {
    pub fn new(epsilon: Rational) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(FptasConfig { epsilon, poly_eta: PolyEta::Eta, table_cap: 50_000_000 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scaled {
    pub lambda: Rational,
    /// `⌈f̄_i / λ⌉`
    pub fprime: Vec<i64>,
    /// `v̄ / λ`, kept exact.
    pub vprime: Rational,
}

fn require_one_dim(inst: &MkcInstance) -> Result<()> {
    if inst.mu != 1 {
        return Err(Error::Precondition(format!("expected one dimension, got {}", inst.mu)));
    }
    if inst.sense != Sense::Cover {
        return Err(Error::Precondition("the dynamic program handles cover instances only".into()));
    }
    Ok(())
}

pub fn scale(inst: &MkcInstance, cfg: &FptasConfig) -> Result<Scaled> {
    require_one_dim(inst)?;
    let fmax = Rational::from_int(inst.fbar.iter().copied().max().unwrap_or(0));
    let eta = inst.eta.max(1);
    let ratio = &cfg.epsilon * fmax / (Rational::from_int(eta as i64) * cfg.poly_eta.eval(eta));
    let lambda = ratio.max(Rational::one());
    let fprime = inst
        .fbar
        .iter()
        .map(|&f| (Rational::from_int(f) / &lambda).ceil().to_i64().expect("scaled cost fits"))
        .collect();
    let vprime = Rational::from_int(inst.vbar[0]) / &lambda;
    Ok(Scaled { lambda, fprime, vprime })
}

/// `cells[i][j]`: largest weight coverable by items `0..i` at cost at most `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable {
    pub cells: Vec<Vec<i64>>,
    /// Whether item `i-1` is taken at cell `(i, j)`.
    pub take: Vec<Vec<bool>>,
    pub costs: Vec<i64>,
}

impl DpTable {
    pub fn budget(&self) -> usize {
        self.cells[0].len() - 1
    }

    pub fn best(&self, j: usize) -> i64 {
        self.cells[self.cells.len() - 1][j]
    }

    /// Items realizing `cells[η][j]`, in index order.
    pub fn items_at(&self, mut j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for i in (1..self.cells.len()).rev() {
            if self.take[i][j] {
                out.push(i - 1);
                j -= self.costs[i - 1] as usize;
            }
        }
        out.reverse();
        out
    }
}

pub fn dp(costs: &[i64], weights: &[i64], table_cap: u64) -> Result<DpTable> {
    assert_eq!(costs.len(), weights.len());
    if costs.iter().any(|&f| f < 0) {
        return Err(Error::Precondition("costs must be nonnegative".into()));
    }
    let total: i64 = costs.iter().sum();
    let cells_needed = (costs.len() as u64 + 1).saturating_mul(total as u64 + 1);
    if cells_needed > table_cap {
        return Err(Error::CapExceeded {
            what: "DP table cells".into(),
            value: cells_needed.to_string(),
            cap: table_cap.to_string(),
        });
    }
    let width = total as usize + 1;
    let mut cells = vec![vec![0i64; width]];
    let mut take = vec![vec![false; width]];
    for (i, (&f, &w)) in costs.iter().zip(weights).enumerate() {
        let prev = &cells[i];
        let f = f as usize;
        let mut row = prev.clone();
        let mut bits = vec![false; width];
        for j in f..width {
            let with = w + prev[j - f];
            if with > row[j] {
                row[j] = with;
                bits[j] = true;
            }
        }
        cells.push(row);
        take.push(bits);
    }
    Ok(DpTable { cells, take, costs: costs.to_vec() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptasOutcome {
    pub solution: MkcSolution,
    pub lambda: Rational,
    /// Scaled objective at the chosen cost level.
    pub scaled_value: Rational,
}

/// Scaled objective `j + v′·max(d − M(η, j), 0)` over every cost level
/// that can still be completed by the continuous variable.
fn sweep(table: &DpTable, target: i64, cbar: i64, vprime: &Rational) -> Option<(usize, Rational)> {
    let mut best: Option<(usize, Rational)> = None;
    let mut j = table.budget() as i64;
    while j >= 0 {
        let cov = table.best(j as usize);
        if cov < target - cbar {
            break;
        }
        let q = Rational::from_int(j) + vprime * Rational::from_int((target - cov).max(0));
        if best.as_ref().is_none_or(|(_, b)| q < *b) {
            best = Some((j as usize, q));
        }
        j -= 1;
    }
    best
}

/// Fixed items are taken up front; the table covers the remaining items.
pub fn one_mkc_fptas(inst: &MkcInstance, cfg: &FptasConfig) -> Result<FptasOutcome> {
    require_one_dim(inst)?;
    let total: i64 = inst.wbar.iter().map(|w| w[0]).sum();
    if total < inst.dbar[0] - inst.cbar[0] {
        return Err(Error::Infeasible(format!(
            "all items cover {total}, short of d̄ − c̄ = {}",
            inst.dbar[0] - inst.cbar[0]
        )));
    }
    let free = inst.free_items();
    let fixed_w: i64 = inst.fixed.iter().map(|&i| inst.wbar[i][0]).sum();
    let reduced = MkcInstance {
        sense: Sense::Cover,
        eta: free.len(),
        mu: 1,
        fbar: free.iter().map(|&i| inst.fbar[i]).collect(),
        vbar: inst.vbar.clone(),
        cbar: inst.cbar.clone(),
        wbar: free.iter().map(|&i| inst.wbar[i].clone()).collect(),
        dbar: vec![inst.dbar[0] - fixed_w],
        fixed: Vec::new(),
    };
    let sc = scale(&reduced, cfg)?;
    let weights: Vec<i64> = reduced.wbar.iter().map(|w| w[0]).collect();
    let table = dp(&sc.fprime, &weights, cfg.table_cap)?;
    let (level, scaled_value) =
        sweep(&table, reduced.dbar[0], reduced.cbar[0], &sc.vprime).expect("full budget is feasible");
    let mut y = vec![false; inst.eta];
    for &i in &inst.fixed {
        y[i] = true;
    }
    for k in table.items_at(level) {
        y[free[k]] = true;
    }
    let covered = inst.covered(&y)[0];
    let alpha = vec![Rational::from_int((inst.dbar[0] - covered).clamp(0, inst.cbar[0]))];
    let value = inst.objective(&y, &alpha);
    Ok(FptasOutcome { solution: MkcSolution { y, alpha, value }, lambda: sc.lambda, scaled_value })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P1Outcome {
    pub solution: MixedSolution,
    /// `f_max / f_min ≤ poly(n)` with `f_max = max(f_i + c_i v_i)` and
    /// `f_min = min(f_i + ℓ_i v_i)`.
    pub hypothesis_holds: bool,
    /// Every subproblem ran unscaled, so the result is optimal.
    pub all_lambda_one: bool,
    pub warnings: Vec<String>,
}

pub fn cost_spread_holds(inst: &CoverInstance, poly: PolyEta) -> bool {
    let hi = (0..inst.n).map(|i| inst.f[i] + inst.c[i][0] * inst.v[i][0]).max().unwrap_or(0);
    let lo = (0..inst.n).map(|i| inst.f[i] + inst.l[i][0] * inst.v[i][0]).min().unwrap_or(0);
    if hi == 0 {
        return true;
    }
    lo > 0 && Rational::new(hi, lo) <= poly.eval(inst.n)
}

pub fn p1_fptas(inst: &CoverInstance, cfg: &FptasConfig) -> Result<P1Outcome> {
    if inst.m != 1 {
        return Err(Error::Precondition(format!("the FPTAS needs m = 1, got m = {}", inst.m)));
    }
    if inst.sense != Sense::Cover {
        return Err(Error::Precondition("the FPTAS handles cover instances only".into()));
    }
    let hypothesis_holds = cost_spread_holds(inst, cfg.poly_eta);
    let mut warnings = Vec::new();
    if !hypothesis_holds {
        warnings.push(format!(
            "cost spread f_max/f_min exceeds poly(n) = {}; the (1+ε) bound is not certified",
            cfg.poly_eta.eval(inst.n)
        ));
    }
    if let Some(solution) = zero_optimum(inst) {
        return Ok(P1Outcome { solution, hypothesis_holds, all_lambda_one: true, warnings });
    }
    let mut best: Option<(crate::decomposition::GChoice, MkcSolution)> = None;
    let mut all_lambda_one = true;
    for g in enumerate_g(inst, DEFAULT_G_CAP)? {
        let mkc = build_mkc(inst, &g);
        if !mkc.is_feasible() {
            continue;
        }
        let out = one_mkc_fptas(&mkc, cfg)?;
        all_lambda_one &= out.lambda.is_one();
        if best.as_ref().is_none_or(|(_, b)| out.solution.value < b.value) {
            best = Some((g, out.solution));
        }
    }
    let (g, sub) = best.ok_or_else(|| Error::Infeasible("every subproblem is infeasible".into()))?;
    Ok(P1Outcome { solution: lift(inst, &g, &sub)?, hypothesis_holds, all_lambda_one, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(fbar: Vec<i64>, w: Vec<i64>, v: i64, c: i64, d: i64) -> MkcInstance {
        MkcInstance {
            sense: Sense::Cover,
            eta: fbar.len(),
            mu: 1,
            fbar,
            vbar: vec![v],
            cbar: vec![c],
            wbar: w.into_iter().map(|x| vec![x]).collect(),
            dbar: vec![d],
            fixed: vec![],
        }
    }

    fn cfg(p: i64, q: i64) -> FptasConfig {
        FptasConfig::new(Rational::new(p, q)).unwrap()
    }

    #[test]
    fn scaling_of_worked_example() {
        let inst = one(vec![2, 100], vec![1, 100], 100, 1, 1);
        let s = scale(&inst, &cfg(1, 1)).unwrap();
        assert_eq!(s.lambda, Rational::from_int(25));
        assert_eq!(s.fprime, vec![1, 4]);
        assert_eq!(s.vprime, Rational::from_int(4));
    }

    #[test]
    fn small_epsilon_leaves_costs_alone() {
        let inst = one(vec![2, 100], vec![1, 100], 100, 1, 1);
        let s = scale(&inst, &cfg(1, 100)).unwrap();
        assert!(s.lambda.is_one());
        assert_eq!(s.fprime, vec![2, 100]);
    }

    #[test]
    fn worked_example_value() {
        for c in [cfg(1, 2), cfg(1, 100)] {
            let out = one_mkc_fptas(&one(vec![2, 100], vec![1, 100], 100, 1, 1), &c).unwrap();
            assert_eq!(out.solution.value, Rational::from_int(2));
            assert_eq!(out.solution.y, vec![true, false]);
        }
    }

    #[test]
    fn single_item_table() {
        let t = dp(&[2], &[7], 1000).unwrap();
        assert_eq!(t.cells[1], vec![0, 0, 7]);
    }

    #[test]
    fn two_item_table() {
        let t = dp(&[1, 1], &[3, 5], 1000).unwrap();
        assert_eq!(t.cells[2][1], 5);
        assert_eq!(t.cells[2][2], 8);
        assert_eq!(t.items_at(2), vec![0, 1]);
        assert_eq!(t.items_at(1), vec![1]);
    }

    #[test]
    fn continuous_part_alone_suffices() {
        let out = one_mkc_fptas(&one(vec![3, 4], vec![2, 2], 0, 5, 5), &cfg(1, 2)).unwrap();
        assert_eq!(out.solution.value, Rational::zero());
        assert!(out.solution.y.iter().all(|&b| !b));
        assert_eq!(out.solution.alpha, vec![Rational::from_int(5)]);
    }

    #[test]
    fn infeasible_is_reported() {
        let r = one_mkc_fptas(&one(vec![1], vec![1], 1, 1, 5), &cfg(1, 2));
        assert!(matches!(r, Err(Error::Infeasible(_))));
    }

    #[test]
    fn table_cap_is_enforced() {
        assert!(matches!(dp(&[1000, 1000], &[1, 1], 100), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn poly_eta_parsing() {
        assert_eq!("eta".parse::<PolyEta>().unwrap(), PolyEta::Eta);
        assert_eq!("eta^2".parse::<PolyEta>().unwrap(), PolyEta::EtaSquared);
        assert_eq!("const:5".parse::<PolyEta>().unwrap(), PolyEta::Const(5));
        assert!("const:0".parse::<PolyEta>().is_err());
        assert!("n".parse::<PolyEta>().is_err());
    }

    #[test]
    fn rejects_two_rows() {
        let inst = crate::instance::generate(&crate::instance::GenConfig::cover(1, 3, 2, 5)).unwrap();
        assert!(matches!(p1_fptas(&inst, &cfg(1, 2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn fixed_items_are_kept() {
        let mut inst = one(vec![2, 100], vec![1, 100], 100, 1, 1);
        inst.fixed = vec![1];
        let out = one_mkc_fptas(&inst, &cfg(1, 2)).unwrap();
        assert_eq!(out.solution.y, vec![false, true]);
        assert_eq!(out.solution.value, Rational::from_int(100));
    }
}
