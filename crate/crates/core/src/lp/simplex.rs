//! Bounded-variable primal simplex over exact rationals.
//!
//! Every row `a·x ⋈ b` becomes `a·x + s = b` with a slack whose bounds
//! encode the relation (`≤`: `s ≥ 0`, `≥`: `s ≤ 0`, `=`: `s = 0`). Variable
//! bounds stay implicit, so the basis always has exactly one column per row
//! and non-basic columns rest at a finite bound (free columns rest at zero).
//! Rows whose slack cannot absorb the starting residual get an artificial
//! column; phase one drives those to zero. Entering and leaving choices
//! follow Bland's rule, which makes the pivot sequence a pure function of
//! the model.

use crate::error::Result;
use crate::lp::model::{LinearModel, ObjSense, Objective, Relation};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    /// One value per model variable; meaningful only when `Optimal`.
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// Basic columns of the standard form, one per row. Columns
    /// `0..num_vars` are model variables, `num_vars..num_vars + rows` are
    /// row slacks, and anything beyond is a zero-valued artificial left on a
    /// redundant row.
    pub basis: Vec<usize>,
}

impl LpResult {
    fn without_solution(status: LpStatus, nvars: usize) -> Self {
        LpResult { status, values: vec![Rational::zero(); nvars], objective: Rational::zero(), basis: Vec::new() }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColState {
    Basic(usize),
    Lower,
    Upper,
    /// Non-basic free column resting at zero.
    Zero,
}

type Row = Vec<(usize, Rational)>;

enum Outcome {
    Optimal,
    Unbounded,
}

/// Simplex state kept after phase one so several objectives can be
/// optimized over the same feasible region, each starting from the last
/// optimal basis.
#[derive(Debug, Clone)]
pub struct Simplex {
    nvars: usize,
    nrows: usize,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
    rows: Vec<Row>,
    basis: Vec<usize>,
    state: Vec<ColState>,
    x: Vec<Rational>,
    first_art: usize,
    feasible: bool,
    pivots: usize,
}

fn entry(row: &Row, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

/// `a - f·b` for sorted sparse rows.
fn axpy(a: &Row, f: &Rational, b: &Row) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Simplex {
    /// Builds the standard form and runs phase one.
    pub fn new(model: &LinearModel) -> Result<Self> {
        model.check_dimensions()?;
        let nvars = model.num_vars();
        let nrows = model.num_constraints();
        let mut lower: Vec<Option<Rational>> = model.vars.iter().map(|v| v.lower.clone()).collect();
        let mut upper: Vec<Option<Rational>> = model.vars.iter().map(|v| v.upper.clone()).collect();
        let mut state = Vec::with_capacity(nvars + 2 * nrows);
        let mut x = Vec::with_capacity(nvars + 2 * nrows);
        let mut bounds_ok = true;
        for j in 0..nvars {
            match (&lower[j], &upper[j]) {
                (Some(l), Some(u)) if l > u => {
                    bounds_ok = false;
                    state.push(ColState::Lower);
                    x.push(l.clone());
                }
                (Some(l), _) => {
                    state.push(ColState::Lower);
                    x.push(l.clone());
                }
                (None, Some(u)) => {
                    state.push(ColState::Upper);
                    x.push(u.clone());
                }
                (None, None) => {
                    state.push(ColState::Zero);
                    x.push(Rational::zero());
                }
            }
        }
        for c in &model.constraints {
            let (lo, hi) = match c.relation {
                Relation::Le => (Some(Rational::zero()), None),
                Relation::Ge => (None, Some(Rational::zero())),
                Relation::Eq => (Some(Rational::zero()), Some(Rational::zero())),
            };
            let rest = if lo.is_some() { ColState::Lower } else { ColState::Upper };
            lower.push(lo);
            upper.push(hi);
            state.push(rest);
            x.push(Rational::zero());
        }
        let first_art = nvars + nrows;
        let mut rows = Vec::with_capacity(nrows);
        let mut basis = Vec::with_capacity(nrows);
        for (i, c) in model.constraints.iter().enumerate() {
            let slack = nvars + i;
            let residual = &c.rhs - crate::lp::model::dot(&c.terms, &x);
            let slack_ok = match c.relation {
                Relation::Le => !residual.is_negative(),
                Relation::Ge => !residual.is_positive(),
                Relation::Eq => residual.is_zero(),
            };
            let mut row: Row = c.terms.clone();
            row.push((slack, Rational::one()));
            if slack_ok {
                state[slack] = ColState::Basic(i);
                x[slack] = residual;
                basis.push(slack);
            } else {
                let art = x.len();
                if residual.is_negative() {
                    for e in row.iter_mut() {
                        e.1 = -&e.1;
                    }
                }
                row.push((art, Rational::one()));
                lower.push(Some(Rational::zero()));
                upper.push(None);
                state.push(ColState::Basic(i));
                x.push(residual.abs());
                basis.push(art);
            }
            rows.push(row);
        }
        let mut s =
            Simplex { nvars, nrows, lower, upper, rows, basis, state, x, first_art, feasible: false, pivots: 0 };
        if bounds_ok {
            s.phase_one();
        }
        Ok(s)
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots
    }

    fn ncols(&self) -> usize {
        self.x.len()
    }

    fn is_art(&self, col: usize) -> bool {
        col >= self.first_art
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (col, t) in row {
                d[*col] -= cb * t;
            }
        }
        d
    }

    fn phase_one(&mut self) {
        let ncols = self.ncols();
        let cost: Vec<Rational> =
            (0..ncols).map(|j| if self.is_art(j) { Rational::one() } else { Rational::zero() }).collect();
        if ncols > self.first_art {
            let mut d = self.reduced_costs(&cost);
            // Phase one is bounded below by zero, so it cannot be unbounded.
            let _ = self.iterate(&mut d, true);
        }
        let infeasibility: Rational = (self.first_art..ncols).map(|j| &self.x[j]).sum();
        if infeasibility.is_positive() {
            self.feasible = false;
            return;
        }
        for p in 0..self.nrows {
            if !self.is_art(self.basis[p]) {
                continue;
            }
            let entering = self.rows[p]
                .iter()
                .find(|(col, _)| !self.is_art(*col) && !matches!(self.state[*col], ColState::Basic(_)))
                .map(|(col, _)| *col);
            if let Some(q) = entering {
                let leaving = self.basis[p];
                self.pivot(p, q, None);
                self.state[leaving] = ColState::Lower;
            }
        }
        for j in self.first_art..ncols {
            self.upper[j] = Some(Rational::zero());
        }
        self.feasible = true;
    }

    fn can_increase(&self, j: usize) -> bool {
        !matches!(self.state[j], ColState::Basic(_)) && self.upper[j].as_ref().is_none_or(|u| self.x[j] < *u)
    }

    fn can_decrease(&self, j: usize) -> bool {
        !matches!(self.state[j], ColState::Basic(_)) && self.lower[j].as_ref().is_none_or(|l| self.x[j] > *l)
    }

    fn iterate(&mut self, d: &mut Vec<Rational>, phase_one: bool) -> Outcome {
        loop {
            let mut entering = None;
            for j in 0..self.ncols() {
                if matches!(self.state[j], ColState::Basic(_)) || (!phase_one && self.is_art(j)) {
                    continue;
                }
                let dj = &d[j];
                if (dj.is_negative() && self.can_increase(j)) || (dj.is_positive() && self.can_decrease(j)) {
                    entering = Some(j);
                    break;
                }
            }
            let Some(q) = entering else {
                return Outcome::Optimal;
            };
            let dir_up = d[q].is_negative();

            // (theta, leaving row, leaving goes to upper)
            let mut best: Option<(Rational, Option<usize>, bool)> = None;
            if let (Some(l), Some(u)) = (&self.lower[q], &self.upper[q]) {
                best = Some((u - l, None, false));
            }
            for (i, row) in self.rows.iter().enumerate() {
                let Some(t) = entry(row, q) else { continue };
                // change of the basic variable per unit move of q
                let rate = if dir_up { -t } else { t.clone() };
                let b = self.basis[i];
                let (limit, to_upper) = if rate.is_negative() {
                    match &self.lower[b] {
                        Some(l) => ((&self.x[b] - l) / -&rate, false),
                        None => continue,
                    }
                } else {
                    match &self.upper[b] {
                        Some(u) => ((u - &self.x[b]) / &rate, true),
                        None => continue,
                    }
                };
                let better = match &best {
                    None => true,
                    Some((theta, row_opt, _)) => {
                        limit < *theta || (limit == *theta && row_opt.is_some_and(|r| b < self.basis[r]))
                    }
                };
                if better {
                    best = Some((limit, Some(i), to_upper));
                }
            }
            let Some((theta, leave_row, to_upper)) = best else {
                return Outcome::Unbounded;
            };

            if !theta.is_zero() {
                let step = if dir_up { theta.clone() } else { -&theta };
                self.x[q] += &step;
                for i in 0..self.nrows {
                    if let Some(t) = entry(&self.rows[i], q) {
                        let b = self.basis[i];
                        let delta = t * &step;
                        self.x[b] -= delta;
                    }
                }
            }
            match leave_row {
                None => {
                    self.state[q] = if dir_up { ColState::Upper } else { ColState::Lower };
                    let bound = if dir_up { &self.upper[q] } else { &self.lower[q] };
                    self.x[q] = bound.clone().expect("finite bound on flip");
                }
                Some(p) => {
                    let leaving = self.basis[p];
                    self.pivot(p, q, Some(d));
                    self.state[leaving] = if to_upper { ColState::Upper } else { ColState::Lower };
                    let bound = if to_upper { &self.upper[leaving] } else { &self.lower[leaving] };
                    self.x[leaving] = bound.clone().expect("finite bound on leaving variable");
                }
            }
        }
    }

    fn pivot(&mut self, p: usize, q: usize, d: Option<&mut Vec<Rational>>) {
        self.pivots += 1;
        let piv = entry(&self.rows[p], q).expect("nonzero pivot").clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for e in self.rows[p].iter_mut() {
                e.1 *= &inv;
            }
        }
        let prow = std::mem::take(&mut self.rows[p]);
        for i in 0..self.nrows {
            if i == p {
                continue;
            }
            if let Some(t) = entry(&self.rows[i], q).cloned() {
                self.rows[i] = axpy(&self.rows[i], &t, &prow);
            }
        }
        if let Some(d) = d {
            let dq = d[q].clone();
            if !dq.is_zero() {
                for (col, t) in &prow {
                    d[*col] -= &dq * t;
                }
            }
        }
        self.rows[p] = prow;
        let old = self.basis[p];
        if let ColState::Basic(_) = self.state[old] {
            self.state[old] = ColState::Lower;
        }
        self.basis[p] = q;
        self.state[q] = ColState::Basic(p);
    }

    /// Optimizes `objective` from the current basis.
    pub fn optimize(&mut self, objective: &Objective) -> LpResult {
        if !self.feasible {
            return LpResult::without_solution(LpStatus::Infeasible, self.nvars);
        }
        let ncols = self.ncols();
        let mut cost = vec![Rational::zero(); ncols];
        for (j, c) in &objective.terms {
            cost[*j] = match objective.sense {
                ObjSense::Minimize => c.clone(),
                ObjSense::Maximize => -c,
            };
        }
        let mut d = self.reduced_costs(&cost);
        match self.iterate(&mut d, false) {
            Outcome::Unbounded => LpResult::without_solution(LpStatus::Unbounded, self.nvars),
            Outcome::Optimal => {
                let values = self.x[..self.nvars].to_vec();
                let obj = objective.evaluate(&values);
                LpResult { status: LpStatus::Optimal, values, objective: obj, basis: self.basis.clone() }
            }
        }
    }
}

/// Solves the LP relaxation of `model` (integrality flags ignored).
pub fn solve(model: &LinearModel) -> Result<LpResult> {
    let mut s = Simplex::new(model)?;
    Ok(s.optimize(&model.objective))
}

/// Number of variables in `subset` whose value lies strictly between their bounds.
pub fn count_fractional(result: &LpResult, model: &LinearModel, subset: &[usize]) -> usize {
    subset
        .iter()
        .filter(|&&i| {
            let v = &model.vars[i];
            let x = &result.values[i];
            v.lower.as_ref().is_none_or(|l| x > l) && v.upper.as_ref().is_none_or(|u| x < u)
        })
        .count()
}
