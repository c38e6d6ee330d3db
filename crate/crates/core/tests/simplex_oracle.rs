#![allow(clippy::needless_range_loop)]

//! The simplex against brute-force vertex enumeration on small bounded LPs.

mod common;

use covermip::lp::{solve, LinearModel, LpStatus, Objective, Relation, Simplex, Terms};
use covermip::Rational;
use rand::RngExt;

use common::rng;

/// `a·x = b` candidates for an active set: rows and variable bounds.
fn hyperplanes(m: &LinearModel) -> Vec<(Vec<Rational>, Rational)> {
    let n = m.num_vars();
    let mut out = Vec::new();
    for c in &m.constraints {
        let mut a = vec![Rational::zero(); n];
        for (i, v) in &c.terms {
            a[*i] = v.clone();
        }
        out.push((a, c.rhs.clone()));
    }
    for (i, v) in m.vars.iter().enumerate() {
        for b in [&v.lower, &v.upper].into_iter().flatten() {
            let mut a = vec![Rational::zero(); n];
            a[i] = Rational::one();
            out.push((a, b.clone()));
        }
    }
    out
}

/// Unique solution of a square system, if it is nonsingular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[col][col];
                for k in col..n {
                    let t = &factor * &a[col][k];
                    a[r][k] = &a[r][k] - &t;
                }
                let t = &factor * &b[col];
                b[r] = &b[r] - &t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(n: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), visit);
}

/// Best objective over all feasible vertices; `None` if there are none.
fn vertex_optimum(m: &LinearModel) -> Option<Rational> {
    let planes = hyperplanes(m);
    let n = m.num_vars();
    let minimize = m.objective.sense == covermip::lp::ObjSense::Minimize;
    let mut best: Option<Rational> = None;
    combinations(planes.len(), n, &mut |active| {
        let a = active.iter().map(|&p| planes[p].0.clone()).collect();
        let b = active.iter().map(|&p| planes[p].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if m.is_feasible_point(&x) {
                let v = m.objective.evaluate(&x);
                let better = best.as_ref().is_none_or(|b| if minimize { v < *b } else { v > *b });
                if better {
                    best = Some(v);
                }
            }
        }
    });
    best
}

fn random_model(seed: u64) -> LinearModel {
    let mut r = rng(seed);
    let n = r.random_range(1..=6usize);
    let rows = r.random_range(1..=4usize);
    let mut m = LinearModel::new();
    for i in 0..n {
        let lo = r.random_range(-3..=2i64);
        let hi = lo + r.random_range(0..=5i64);
        m.add_bounded(format!("x{i}"), Rational::from_int(lo), Rational::from_int(hi));
    }
    for j in 0..rows {
        let terms: Terms = (0..n)
            .filter_map(|i| {
                let c = r.random_range(-4..=4i64);
                (c != 0).then(|| (i, Rational::new(c, r.random_range(1..=3))))
            })
            .collect();
        let rel = [Relation::Le, Relation::Ge, Relation::Eq][r.random_range(0..3usize)];
        m.add_constraint(format!("r{j}"), terms, rel, Rational::from_int(r.random_range(-6..=6)));
    }
    let obj: Terms = (0..n).map(|i| (i, Rational::from_int(r.random_range(-5..=5)))).collect();
    m.set_objective(if r.random_bool(0.5) { Objective::minimize(obj) } else { Objective::maximize(obj) });
    m
}

#[test]
fn matches_vertex_enumeration() {
    let (mut optimal, mut infeasible) = (0, 0);
    for seed in 0..150 {
        let m = random_model(seed);
        let lp = solve(&m).unwrap();
        match vertex_optimum(&m) {
            Some(v) => {
                assert_eq!(lp.status, LpStatus::Optimal, "seed {seed}");
                assert_eq!(lp.objective, v, "seed {seed}");
                assert!(m.is_feasible_point(&lp.values), "seed {seed}");
                optimal += 1;
            }
            None => {
                assert_eq!(lp.status, LpStatus::Infeasible, "seed {seed}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal > 30 && infeasible > 5, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn warm_start_matches_cold_solves() {
    for seed in 200..260 {
        let m = random_model(seed);
        let Ok(mut warm) = Simplex::new(&m) else { continue };
        if !warm.is_feasible() {
            continue;
        }
        let mut r = rng(seed);
        for _ in 0..5 {
            let obj: Terms = (0..m.num_vars()).map(|i| (i, Rational::from_int(r.random_range(-5..=5)))).collect();
            let obj = Objective::maximize(obj);
            let mut cold = m.clone();
            cold.set_objective(obj.clone());
            assert_eq!(warm.optimize(&obj).objective, solve(&cold).unwrap().objective, "seed {seed}");
        }
    }
}

#[test]
fn free_direction_is_unbounded() {
    let mut m = LinearModel::new();
    let x = m.add_var("x", None, None, covermip::lp::VarKind::Continuous);
    let y = m.add_nonneg("y");
    m.add_constraint("r", vec![(x, Rational::one()), (y, Rational::from_int(-1))], Relation::Le, Rational::one());
    m.set_objective(Objective::maximize(vec![(y, Rational::one())]));
    assert_eq!(solve(&m).unwrap().status, LpStatus::Unbounded);
}

#[test]
fn pivot_sequence_is_deterministic() {
    let m = random_model(7);
    let a = solve(&m).unwrap();
    let b = solve(&m).unwrap();
    assert_eq!(a, b);
}
