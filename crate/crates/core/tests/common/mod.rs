#![allow(dead_code)]

use covermip::instance::{generate, CoverInstance, GenConfig, MkcInstance, Sense};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Instance with sizes drawn from the seed: `1 ≤ n ≤ max_n`, `1 ≤ m ≤ max_m`.
pub fn sized_instance(seed: u64, max_n: usize, max_m: usize, sense: Sense) -> CoverInstance {
    let mut r = rng(seed ^ 0x5eed);
    let n = r.random_range(1..=max_n);
    let m = r.random_range(1..=max_m);
    let coeff_max = r.random_range(3..=20);
    generate(&GenConfig { seed, n, m, coeff_max, sense }).expect("generator succeeds")
}

/// Small coefficients so that zero-cost optima show up often.
pub fn low_cost_instance(seed: u64, max_n: usize, max_m: usize) -> CoverInstance {
    let mut r = rng(seed ^ 0x2e70);
    let n = r.random_range(1..=max_n);
    let m = r.random_range(1..=max_m);
    let coeff_max = r.random_range(1..=3);
    generate(&GenConfig { seed, n, m, coeff_max, sense: Sense::Cover }).expect("generator succeeds")
}

/// One-row knapsack cover instance with positive costs, positive weights
/// and `0 < c̄ ≤ d̄`, made feasible by construction.
pub fn one_mkc(seed: u64, max_eta: usize) -> MkcInstance {
    let mut r = rng(seed ^ 0x1a9c);
    let eta = r.random_range(1..=max_eta);
    let d = r.random_range(2..=20i64);
    let c = r.random_range(1..=d);
    let mut wbar: Vec<Vec<i64>> = (0..eta).map(|_| vec![r.random_range(1..=d)]).collect();
    let total: i64 = wbar.iter().map(|w| w[0]).sum();
    if total < d - c {
        wbar[0][0] += d - c - total;
        wbar[0][0] = wbar[0][0].min(d);
        let total: i64 = wbar.iter().map(|w| w[0]).sum();
        if total < d - c {
            for w in wbar.iter_mut() {
                w[0] = d;
            }
        }
    }
    MkcInstance {
        sense: Sense::Cover,
        eta,
        mu: 1,
        fbar: (0..eta).map(|_| r.random_range(1..=30)).collect(),
        vbar: vec![r.random_range(1..=10)],
        cbar: vec![c],
        wbar,
        dbar: vec![d],
        fixed: vec![],
    }
}

pub fn worked_example() -> MkcInstance {
    MkcInstance {
        sense: Sense::Cover,
        eta: 2,
        mu: 1,
        fbar: vec![2, 100],
        vbar: vec![100],
        cbar: vec![1],
        wbar: vec![vec![1], vec![100]],
        dbar: vec![1],
        fixed: vec![],
    }
}

pub fn uniform_instance(seed: u64, max_n: usize) -> covermip::formulation::UniformInstance {
    let mut r = rng(seed ^ 0x0417);
    let n = r.random_range(1..=max_n);
    let ell = r.random_range(0..=4i64);
    let cap = r.random_range(ell.max(1)..=ell + 5);
    let d = r.random_range(cap..=cap * n as i64);
    covermip::formulation::UniformInstance {
        n,
        v: (0..n).map(|_| r.random_range(0..=20)).collect(),
        f: (0..n).map(|_| r.random_range(0..=20)).collect(),
        ell,
        cap,
        d,
    }
}

/// Knapsack subproblem with `η ≤ max_eta`, `μ ≤ max_mu`; cover instances
/// are made feasible by construction.
pub fn random_mkc(seed: u64, max_eta: usize, max_mu: usize, sense: Sense) -> MkcInstance {
    let mut r = rng(seed ^ 0x3b1d);
    let eta = r.random_range(1..=max_eta);
    let mu = r.random_range(1..=max_mu);
    let mut wbar: Vec<Vec<i64>> = (0..eta).map(|_| (0..mu).map(|_| r.random_range(0..=12)).collect()).collect();
    let cbar: Vec<i64> = (0..mu).map(|_| r.random_range(1..=8)).collect();
    let dbar: Vec<i64> = (0..mu).map(|_| r.random_range(0..=30)).collect();
    if sense == Sense::Cover {
        for j in 0..mu {
            let total: i64 = wbar.iter().map(|w| w[j]).sum();
            if total + cbar[j] < dbar[j] {
                wbar[0][j] += dbar[j] - cbar[j] - total;
            }
        }
    }
    MkcInstance {
        sense,
        eta,
        mu,
        fbar: (0..eta).map(|_| r.random_range(0..=40)).collect(),
        vbar: (0..mu).map(|_| r.random_range(0..=10)).collect(),
        cbar,
        wbar,
        dbar,
        fixed: vec![],
    }
}
