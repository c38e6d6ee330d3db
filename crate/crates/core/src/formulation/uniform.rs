//! Extended formulation for one-row instances with common bounds `ℓ, c`.
//!
//! Sorting items by unit cost (dearest first), every vertex has one pivot
//! `g` whose `x_g` is free in `[ℓ, c]`; selected items before it sit at `ℓ`
//! and those after it at `c`. For each pivot `g` and count `b` of selected
//! items before it, the hull of that piece is known in closed form, and the
//! pieces are glued with one copy of the variables per `(g, b)`.

use crate::error::{Error, Result};
use crate::instance::{CoverInstance, Sense};
use crate::lp::{LinearModel, Objective, Relation, Terms};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformInstance {
    pub n: usize,
    pub v: Vec<i64>,
    pub f: Vec<i64>,
    pub ell: i64,
    pub cap: i64,
    pub d: i64,
}

impl UniformInstance {
    pub fn check(&self) -> Result<()> {
        if self.n == 0 || self.v.len() != self.n || self.f.len() != self.n {
            return Err(Error::DimensionMismatch("v and f must have n entries, n ≥ 1".into()));
        }
        if !(self.d >= self.cap && self.cap >= self.ell && self.ell >= 0) {
            return Err(Error::Hypothesis(format!(
                "need d ≥ c ≥ ℓ ≥ 0, got d={}, c={}, ℓ={}",
                self.d, self.cap, self.ell
            )));
        }
        if self.v.iter().chain(&self.f).any(|&x| x < 0) {
            return Err(Error::Hypothesis("costs must be nonnegative".into()));
        }
        if self.cap == 0 || self.d == 0 {
            return Err(Error::Hypothesis("c and d must be positive".into()));
        }
        Ok(())
    }

    /// Recognizes one-row cover instances with common bounds.
    pub fn from_cover(inst: &CoverInstance) -> Result<Self> {
        if inst.sense != Sense::Cover || inst.m != 1 {
            return Err(Error::Hypothesis("need a one-row cover instance".into()));
        }
        let (ell, cap) = (inst.l[0][0], inst.c[0][0]);
        if (0..inst.n).any(|i| inst.l[i][0] != ell || inst.c[i][0] != cap) {
            return Err(Error::Hypothesis("bounds must be common to all items".into()));
        }
        let u = UniformInstance {
            n: inst.n,
            v: inst.v.iter().map(|r| r[0]).collect(),
            f: inst.f.clone(),
            ell,
            cap,
            d: inst.d[0],
        };
        u.check()?;
        Ok(u)
    }

    pub fn to_cover(&self) -> CoverInstance {
        CoverInstance {
            sense: Sense::Cover,
            n: self.n,
            m: 1,
            v: self.v.iter().map(|&x| vec![x]).collect(),
            l: vec![vec![self.ell]; self.n],
            c: vec![vec![self.cap]; self.n],
            d: vec![self.d],
            f: self.f.clone(),
        }
    }

    /// Item indices by unit cost, dearest first, ties by index.
    pub fn order(&self) -> Vec<usize> {
        let mut o: Vec<usize> = (0..self.n).collect();
        o.sort_by_key(|&i| (std::cmp::Reverse(self.v[i]), i));
        o
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Pivot positions (1-based, in sorted order) and their admissible counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceIndex {
    pub pieces: Vec<(usize, Vec<i64>)>,
}

impl PieceIndex {
    pub fn new(u: &UniformInstance) -> Self {
        let (n, l, c, d) = (u.n as i64, u.ell, u.cap, u.d);
        let g_max = if c == l { n } else { div_floor((n + 1) * c - d - l, c - l).min(n) };
        let mut pieces = Vec::new();
        for g in 1..=g_max.max(0) {
            let lo = if l == 0 { 0 } else { div_ceil(d - (n + 1 - g) * c, l).max(0) };
            let bs: Vec<i64> = (lo..g).collect();
            if !bs.is_empty() {
                pieces.push((g as usize, bs));
            }
        }
        PieceIndex { pieces }
    }

    pub fn count(&self) -> usize {
        self.pieces.iter().map(|(_, b)| b.len()).sum()
    }

    /// Variables the formulation uses: `2n + (n + 2)·∑|B^g|`.
    pub fn variable_count(&self, n: usize) -> usize {
        2 * n + (n + 2) * self.count()
    }
}

/// Builds the extended formulation. Original variables `x_i`, `y_i` come
/// first (indices `i` and `n + i`, original item order).
pub fn build_uniform_perfect(u: &UniformInstance) -> Result<LinearModel> {
    u.check()?;
    let index = PieceIndex::new(u);
    if index.pieces.is_empty() {
        return Err(Error::Infeasible("no pivot position admits a feasible piece".into()));
    }
    let n = u.n;
    let order = u.order();
    let (l, c, d) = (u.ell, u.cap, u.d);
    let q = Rational::from_int;

    let mut m = LinearModel::new();
    let x: Vec<usize> = (0..n).map(|i| m.add_nonneg(format!("x{}", i + 1))).collect();
    let y: Vec<usize> = (0..n).map(|i| m.add_nonneg(format!("y{}", i + 1))).collect();

    // Per piece: z, x_g copy, y copies by sorted position.
    struct Piece {
        g: usize,
        b: i64,
        z: usize,
        xg: usize,
        ys: Vec<usize>,
    }
    let mut pieces = Vec::new();
    for (g, bs) in &index.pieces {
        for &b in bs {
            let tag = format!("g{g}b{b}");
            let z = m.add_nonneg(format!("z_{tag}"));
            let xg = m.add_nonneg(format!("x_{tag}"));
            let ys = (0..n).map(|p| m.add_nonneg(format!("y_{tag}_{}", order[p] + 1))).collect();
            pieces.push(Piece { g: *g, b, z, xg, ys });
        }
    }

    for p in 0..n {
        let item = order[p];
        let pos = p + 1;
        let mut terms: Terms = vec![(x[item], q(1))];
        for pc in &pieces {
            if pc.g > pos {
                terms.push((pc.ys[p], q(-l)));
            } else if pc.g < pos {
                terms.push((pc.ys[p], q(-c)));
            } else {
                terms.push((pc.xg, q(-1)));
            }
        }
        m.add_constraint(format!("link_x{}", item + 1), terms, Relation::Eq, q(0));
        let mut terms: Terms = vec![(y[item], q(1))];
        terms.extend(pieces.iter().map(|pc| (pc.ys[p], q(-1))));
        m.add_constraint(format!("link_y{}", item + 1), terms, Relation::Eq, q(0));
    }

    for pc in &pieces {
        let tag = format!("g{}b{}", pc.g, pc.b);
        let after = || pc.ys[pc.g..].iter().copied();
        let before = || pc.ys[..pc.g - 1].iter().copied();

        let need = div_ceil(d - pc.b * l - c, c);
        let mut terms: Terms = after().map(|v| (v, q(1))).collect();
        terms.push((pc.z, q(-need)));
        m.add_constraint(format!("count_{tag}"), terms, Relation::Ge, q(0));

        let rest = d - (pc.b + 1) * l;
        let r = rest - div_floor(rest, c) * c;
        let mut terms: Terms = vec![(pc.xg, q(1))];
        terms.extend(after().map(|v| (v, q(r))));
        terms.push((pc.z, q(-(l + div_ceil(rest, c) * r))));
        m.add_constraint(format!("mir_{tag}"), terms, Relation::Ge, q(0));

        let mut terms: Terms = vec![(pc.xg, q(1))];
        terms.extend(after().map(|v| (v, q(c))));
        terms.push((pc.z, q(-(d - pc.b * l))));
        m.add_constraint(format!("demand_{tag}"), terms, Relation::Ge, q(0));

        let mut terms: Terms = before().map(|v| (v, q(1))).collect();
        terms.push((pc.z, q(-pc.b)));
        m.add_constraint(format!("prefix_{tag}"), terms, Relation::Eq, q(0));

        m.add_constraint(format!("pivot_{tag}"), vec![(pc.ys[pc.g - 1], q(1)), (pc.z, q(-1))], Relation::Eq, q(0));
        m.add_constraint(format!("xlo_{tag}"), vec![(pc.xg, q(1)), (pc.z, q(-l))], Relation::Ge, q(0));
        m.add_constraint(format!("xhi_{tag}"), vec![(pc.xg, q(1)), (pc.z, q(-c))], Relation::Le, q(0));
        for p in 0..n {
            m.add_constraint(
                format!("ub_{tag}_{}", order[p] + 1),
                vec![(pc.ys[p], q(1)), (pc.z, q(-1))],
                Relation::Le,
                q(0),
            );
        }
    }
    m.add_constraint("convex", pieces.iter().map(|pc| (pc.z, q(1))).collect(), Relation::Eq, q(1));

    let mut obj: Terms = (0..n).map(|i| (x[i], q(u.v[i]))).collect();
    obj.extend((0..n).map(|i| (y[i], q(u.f[i]))));
    m.set_objective(Objective::minimize(obj));
    Ok(m)
}

/// Objective over the original `x`, `y` of a built formulation.
pub fn uniform_objective(n: usize, v: &[i64], f: &[i64]) -> Objective {
    let mut obj: Terms = (0..n).map(|i| (i, Rational::from_int(v[i]))).collect();
    obj.extend((0..n).map(|i| (n + i, Rational::from_int(f[i]))));
    Objective::minimize(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_p, DEFAULT_P_CAP};
    use crate::lp::solve;

    #[test]
    fn single_item() {
        let u = UniformInstance { n: 1, v: vec![3], f: vec![5], ell: 1, cap: 4, d: 4 };
        let idx = PieceIndex::new(&u);
        assert_eq!(idx.pieces, vec![(1, vec![0])]);
        let lp = solve(&build_uniform_perfect(&u).unwrap()).unwrap();
        assert_eq!(lp.objective, Rational::from_int(5 + 3 * 4));
    }

    #[test]
    fn small_instance_matches_enumeration() {
        let u = UniformInstance { n: 4, v: vec![7, 5, 2, 1], f: vec![3, 9, 4, 6], ell: 1, cap: 3, d: 6 };
        let lp = solve(&build_uniform_perfect(&u).unwrap()).unwrap();
        let want = exact_p(&u.to_cover(), DEFAULT_P_CAP).unwrap().unwrap();
        assert_eq!(lp.objective, want.value);
    }

    #[test]
    fn zero_lower_bound_and_equal_bounds() {
        for (ell, cap) in [(0, 3), (2, 2)] {
            let u = UniformInstance { n: 3, v: vec![4, 2, 2], f: vec![1, 6, 2], ell, cap, d: 4 };
            let lp = solve(&build_uniform_perfect(&u).unwrap()).unwrap();
            let want = exact_p(&u.to_cover(), DEFAULT_P_CAP).unwrap().unwrap();
            assert_eq!(lp.objective, want.value, "ℓ={ell} c={cap}");
        }
    }

    #[test]
    fn infeasible_instance_is_reported() {
        let u = UniformInstance { n: 2, v: vec![1, 1], f: vec![1, 1], ell: 1, cap: 2, d: 5 };
        assert!(matches!(build_uniform_perfect(&u), Err(Error::Infeasible(_))));
    }

    #[test]
    fn variable_count_matches_model() {
        let u = UniformInstance { n: 5, v: vec![9, 7, 5, 3, 1], f: vec![1; 5], ell: 1, cap: 3, d: 7 };
        let m = build_uniform_perfect(&u).unwrap();
        assert_eq!(m.num_vars(), PieceIndex::new(&u).variable_count(5));
        assert!(m.num_vars() <= 2 * 5 + 7 * 5 * 5);
    }
}
