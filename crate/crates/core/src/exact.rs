//! Exhaustive solvers used as ground truth at small sizes.
//!
//! Everything here stays in integers: with integral data the optimal
//! continuous parts are integral too, so values are converted to
//! rationals only at the end.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, MixedSolution, MkcInstance, MkcSolution, Sense};
use crate::rational::Rational;

pub const DEFAULT_MKC_CAP: usize = 20;
pub const DEFAULT_P_CAP: usize = 16;

/// Lexicographic order on the sorted index lists of two selections.
fn lex_cmp(a: &[bool], b: &[bool]) -> Ordering {
    let sa = a.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i);
    let sb = b.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i);
    sa.cmp(sb)
}

/// Is `cand` strictly better than the incumbent (value, then lex-smallest set)?
fn improves(sense: Sense, cand: i64, y: &[bool], best: &Option<(i64, Vec<bool>)>) -> bool {
    match best {
        None => true,
        Some((bv, by)) => {
            let ord = match sense {
                Sense::Cover => cand.cmp(bv),
                Sense::Pack => bv.cmp(&cand),
            };
            ord == Ordering::Less || (ord == Ordering::Equal && lex_cmp(y, by) == Ordering::Less)
        }
    }
}

fn mask_to_y(mask: u64, items: &[usize], eta: usize, fixed: &[usize]) -> Vec<bool> {
    let mut y = vec![false; eta];
    for &i in fixed {
        y[i] = true;
    }
    for (b, &i) in items.iter().enumerate() {
        if mask >> b & 1 == 1 {
            y[i] = true;
        }
    }
    y
}

/// Best `α` for a fixed selection, or `None` if the selection is infeasible.
fn best_alpha(inst: &MkcInstance, covered: &[i64]) -> Option<Vec<i64>> {
    (0..inst.mu)
        .map(|j| {
            let gap = inst.dbar[j] - covered[j];
            match inst.sense {
                Sense::Cover => (gap <= inst.cbar[j]).then(|| gap.max(0)),
                Sense::Pack => (gap >= 0).then(|| if inst.vbar[j] > 0 { gap.min(inst.cbar[j]) } else { 0 }),
            }
        })
        .collect()
}

/// Optimum over all selections containing the fixed items.
pub fn exact_mkc(inst: &MkcInstance, cap: usize) -> Result<Option<MkcSolution>> {
    if inst.eta > cap {
        return Err(Error::CapExceeded { what: "eta".into(), value: inst.eta.to_string(), cap: cap.to_string() });
    }
    let free = inst.free_items();
    let mut best: Option<(i64, Vec<bool>)> = None;
    let mut best_alpha_vec = Vec::new();
    for mask in 0..(1u64 << free.len()) {
        let y = mask_to_y(mask, &free, inst.eta, &inst.fixed);
        let cov = inst.covered(&y);
        let Some(alpha) = best_alpha(inst, &cov) else { continue };
        let value: i64 = (0..inst.eta).filter(|&i| y[i]).map(|i| inst.fbar[i]).sum::<i64>()
            + (0..inst.mu).map(|j| inst.vbar[j] * alpha[j]).sum::<i64>();
        if improves(inst.sense, value, &y, &best) {
            best = Some((value, y));
            best_alpha_vec = alpha;
        }
    }
    Ok(best.map(|(value, y)| MkcSolution {
        y,
        alpha: best_alpha_vec.into_iter().map(Rational::from_int).collect(),
        value: Rational::from_int(value),
    }))
}

/// Per-dimension fill order: cheapest first for cover, most profitable
/// first for pack; ties by index.
fn fill_orders(inst: &CoverInstance) -> Vec<Vec<usize>> {
    (0..inst.m)
        .map(|j| {
            let mut order: Vec<usize> = (0..inst.n).collect();
            match inst.sense {
                Sense::Cover => order.sort_by_key(|&i| (inst.v[i][j], i)),
                Sense::Pack => order.sort_by_key(|&i| (std::cmp::Reverse(inst.v[i][j]), i)),
            }
            order
        })
        .collect()
}

/// Optimal `x` for fixed `y`, written into `x`; returns the value of `∑ v x`
/// or `None` when some row cannot be satisfied.
fn fill(inst: &CoverInstance, orders: &[Vec<usize>], y: &[bool], x: &mut [Vec<i64>]) -> Option<i64> {
    let mut total = 0i64;
    for j in 0..inst.m {
        let mut sum = 0i64;
        for i in 0..inst.n {
            x[i][j] = if y[i] { inst.l[i][j] } else { 0 };
            sum += x[i][j];
        }
        match inst.sense {
            Sense::Cover => {
                let mut need = inst.d[j] - sum;
                for &i in &orders[j] {
                    if need <= 0 {
                        break;
                    }
                    if y[i] {
                        let add = (inst.c[i][j] - inst.l[i][j]).min(need);
                        x[i][j] += add;
                        need -= add;
                    }
                }
                if need > 0 {
                    return None;
                }
            }
            Sense::Pack => {
                let mut room = inst.d[j] - sum;
                if room < 0 {
                    return None;
                }
                for &i in &orders[j] {
                    if room == 0 {
                        break;
                    }
                    if y[i] {
                        let add = (inst.c[i][j] - inst.l[i][j]).min(room);
                        x[i][j] += add;
                        room -= add;
                    }
                }
            }
        }
        total += (0..inst.n).map(|i| inst.v[i][j] * x[i][j]).sum::<i64>();
    }
    Some(total)
}

/// Optimal continuous part for a given `y`, or `None` if `y` is infeasible.
pub fn best_x_for(inst: &CoverInstance, y: &[bool]) -> Option<MixedSolution> {
    let orders = fill_orders(inst);
    let mut x = vec![vec![0i64; inst.m]; inst.n];
    fill(inst, &orders, y, &mut x)?;
    Some(to_solution(inst, x, y.to_vec()))
}

fn to_solution(inst: &CoverInstance, x: Vec<Vec<i64>>, y: Vec<bool>) -> MixedSolution {
    let x: Vec<Vec<Rational>> = x.into_iter().map(|r| r.into_iter().map(Rational::from_int).collect()).collect();
    let value = inst.objective(&x, &y);
    MixedSolution { x, y, value }
}

/// Optimum of `P` by enumerating all `y`.
pub fn exact_p(inst: &CoverInstance, cap: usize) -> Result<Option<MixedSolution>> {
    if inst.n > cap {
        return Err(Error::CapExceeded { what: "n".into(), value: inst.n.to_string(), cap: cap.to_string() });
    }
    let orders = fill_orders(inst);
    let all: Vec<usize> = (0..inst.n).collect();
    let mut x = vec![vec![0i64; inst.m]; inst.n];
    let mut best: Option<(i64, Vec<bool>)> = None;
    let mut best_x = Vec::new();
    for mask in 0..(1u64 << inst.n) {
        let y = mask_to_y(mask, &all, inst.n, &[]);
        let Some(vx) = fill(inst, &orders, &y, &mut x) else { continue };
        let value = vx + (0..inst.n).filter(|&i| y[i]).map(|i| inst.f[i]).sum::<i64>();
        if improves(inst.sense, value, &y, &best) {
            best = Some((value, y));
            best_x = x.clone();
        }
    }
    Ok(best.map(|(_, y)| to_solution(inst, best_x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn worked_example() -> MkcInstance {
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

    #[test]
    fn worked_example_optimum() {
        let sol = exact_mkc(&worked_example(), DEFAULT_MKC_CAP).unwrap().unwrap();
        assert_eq!(sol.value, Rational::from_int(2));
        assert_eq!(sol.y, vec![true, false]);
        assert_eq!(sol.alpha, vec![Rational::zero()]);
    }

    #[test]
    fn zero_demand_selects_nothing() {
        let mut inst = worked_example();
        inst.dbar = vec![0];
        let sol = exact_mkc(&inst, DEFAULT_MKC_CAP).unwrap().unwrap();
        assert_eq!(sol.value, Rational::zero());
        assert_eq!(sol.y, vec![false, false]);
        assert_eq!(sol.alpha, vec![Rational::zero()]);
    }

    #[test]
    fn ties_pick_lex_smallest_set() {
        let mut inst = worked_example();
        inst.fbar = vec![5, 5];
        inst.wbar = vec![vec![1], vec![1]];
        inst.vbar = vec![10];
        let sol = exact_mkc(&inst, DEFAULT_MKC_CAP).unwrap().unwrap();
        assert_eq!(sol.y, vec![true, false]);
    }

    #[test]
    fn fixed_items_are_always_selected() {
        let mut inst = worked_example();
        inst.fixed = vec![1];
        let sol = exact_mkc(&inst, DEFAULT_MKC_CAP).unwrap().unwrap();
        assert_eq!(sol.y, vec![false, true]);
        assert_eq!(sol.value, Rational::from_int(100));
    }

    #[test]
    fn both_items_needed() {
        let inst = CoverInstance {
            sense: Sense::Cover,
            n: 2,
            m: 1,
            v: vec![vec![0], vec![0]],
            l: vec![vec![0], vec![0]],
            c: vec![vec![3], vec![3]],
            d: vec![4],
            f: vec![1, 1],
        };
        let sol = exact_p(&inst, DEFAULT_P_CAP).unwrap().unwrap();
        assert_eq!(sol.value, Rational::from_int(2));
        assert_eq!(sol.y, vec![true, true]);
        inst.check_solution(&sol).unwrap();
    }

    #[test]
    fn pack_fills_most_profitable_first() {
        let inst = CoverInstance {
            sense: Sense::Pack,
            n: 2,
            m: 1,
            v: vec![vec![1], vec![3]],
            l: vec![vec![1], vec![0]],
            c: vec![vec![4], vec![2]],
            d: vec![4],
            f: vec![0, 0],
        };
        let sol = exact_p(&inst, DEFAULT_P_CAP).unwrap().unwrap();
        // 3·2 + 1·2 beats any alternative
        assert_eq!(sol.value, Rational::from_int(8));
        inst.check_solution(&sol).unwrap();
    }

    #[test]
    fn infeasible_instance_has_no_solution() {
        let inst = CoverInstance {
            sense: Sense::Cover,
            n: 1,
            m: 1,
            v: vec![vec![0]],
            l: vec![vec![0]],
            c: vec![vec![1]],
            d: vec![2],
            f: vec![0],
        };
        assert!(exact_p(&inst, DEFAULT_P_CAP).unwrap().is_none());
    }

    #[test]
    fn caps_are_enforced() {
        let mut inst = worked_example();
        inst.eta = 21;
        assert!(matches!(exact_mkc(&inst, DEFAULT_MKC_CAP), Err(Error::CapExceeded { .. })));
    }
}
