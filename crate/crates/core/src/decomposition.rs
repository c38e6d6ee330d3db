//! Decomposition of `P` into knapsack subproblems, one per choice function
//! `g : [m] → [n]`.
//!
//! For a fixed `g`, item `g(j)` carries the only fractional `x_{g(j)j}` of
//! dimension `j`; every other item sits at its lower bound (set `L`) or its
//! upper bound (set `C`) whenever selected. Which side an item lands on
//! depends only on how its unit cost compares to the pivot's.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, MixedSolution, MkcInstance, MkcSolution, Sense};
use crate::rational::Rational;

pub const DEFAULT_G_CAP: u64 = 1_000_000;

/// Pivot item per dimension, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GChoice {
    pub g: Vec<usize>,
}

impl GChoice {
    pub fn new(g: Vec<usize>) -> Self {
        GChoice { g }
    }

    /// The distinct pivot items, sorted.
    pub fn items(&self) -> Vec<usize> {
        let mut v = self.g.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for GChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.g.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LCPartition {
    /// Items held at `ℓ_ij` when selected.
    pub lower: Vec<usize>,
    /// Items held at `c_ij` when selected.
    pub upper: Vec<usize>,
    pub pivot: usize,
    pub dim: usize,
}

/// Whether item `i` goes to the lower-bound side relative to pivot `k`.
///
/// Cover: items that are more expensive per unit than the pivot (ties:
/// smaller index). Pack: items that are less profitable (ties: larger index).
fn in_lower(sense: Sense, v: &[Vec<i64>], i: usize, k: usize, j: usize) -> bool {
    let (vi, vk) = (v[i][j], v[k][j]);
    match sense {
        Sense::Cover => vi > vk || (vi == vk && i < k),
        Sense::Pack => vi < vk || (vi == vk && i > k),
    }
}

pub fn lc_partition(inst: &CoverInstance, k: usize, j: usize) -> LCPartition {
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for i in (0..inst.n).filter(|&i| i != k) {
        if in_lower(inst.sense, &inst.v, i, k, j) {
            lower.push(i);
        } else {
            upper.push(i);
        }
    }
    LCPartition { lower, upper, pivot: k, dim: j }
}

/// Per-dimension weight `w^g_ij`.
fn weight(inst: &CoverInstance, g: &GChoice, i: usize, j: usize) -> i64 {
    let k = g.g[j];
    if i == k || in_lower(inst.sense, &inst.v, i, k, j) {
        inst.l[i][j]
    } else {
        inst.c[i][j]
    }
}

/// The subproblem for `g`. Pivot items are recorded as fixed selections.
pub fn build_mkc(inst: &CoverInstance, g: &GChoice) -> MkcInstance {
    assert_eq!(g.g.len(), inst.m, "choice length must equal m");
    let wbar: Vec<Vec<i64>> = (0..inst.n).map(|i| (0..inst.m).map(|j| weight(inst, g, i, j)).collect()).collect();
    let fbar = (0..inst.n).map(|i| inst.f[i] + (0..inst.m).map(|j| inst.v[i][j] * wbar[i][j]).sum::<i64>()).collect();
    MkcInstance {
        sense: inst.sense,
        eta: inst.n,
        mu: inst.m,
        fbar,
        vbar: g.g.iter().enumerate().map(|(j, &k)| inst.v[k][j]).collect(),
        cbar: g.g.iter().enumerate().map(|(j, &k)| inst.c[k][j] - inst.l[k][j]).collect(),
        wbar,
        dbar: inst.d.clone(),
        fixed: g.items(),
    }
}

/// All `n^m` choice functions in lexicographic order.
#[derive(Debug, Clone)]
pub struct GEnumerator {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for GEnumerator {
    type Item = GChoice;

    fn next(&mut self) -> Option<GChoice> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if succ[pos] + 1 < self.n {
                succ[pos] += 1;
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(GChoice { g: cur })
    }
}

pub fn enumerate_g(inst: &CoverInstance, cap: u64) -> Result<GEnumerator> {
    let count = (inst.n as u64).checked_pow(inst.m as u32);
    match count {
        Some(c) if c <= cap => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "n^m".into(),
                value: count.map_or_else(|| format!("{}^{}", inst.n, inst.m), |c| c.to_string()),
                cap: cap.to_string(),
            })
        }
    }
    let next = if inst.n == 0 { None } else { Some(vec![0; inst.m]) };
    Ok(GEnumerator { n: inst.n, next })
}

/// Maps a subproblem solution back to `(x, y)` with the same value.
pub fn lift(inst: &CoverInstance, g: &GChoice, sub: &MkcSolution) -> Result<MixedSolution> {
    let mkc = build_mkc(inst, g);
    mkc.check_solution(sub).map_err(Error::Precondition)?;
    let mut x = vec![vec![Rational::zero(); inst.m]; inst.n];
    for (i, row) in x.iter_mut().enumerate() {
        if !sub.y[i] {
            continue;
        }
        for (j, xij) in row.iter_mut().enumerate() {
            *xij = if i == g.g[j] {
                &sub.alpha[j] + Rational::from_int(inst.l[i][j])
            } else {
                Rational::from_int(mkc.wbar[i][j])
            };
        }
    }
    let value = inst.objective(&x, &sub.y);
    Ok(MixedSolution { x, y: sub.y.clone(), value })
}
