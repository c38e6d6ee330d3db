//! `ε`-approximate extended formulation for the one-dimensional knapsack
//! cover problem with a continuous variable.
//!
//! Items are sorted by cost, dearest first. A piece `P^{h,σ}` fixes the
//! dearest selected item `h` and, for each cost band `k` below `f̄_h`, the
//! number `σ_k` of selected items in that band (`σ_k = J` meaning "at least
//! `J`"). Any basic point of a piece rounds to an integer solution within
//! a factor `1 + ε`, so the hull of all pieces is a relaxation whose value
//! is within that factor of the integer optimum.

use crate::error::{Error, Result};
use crate::instance::{MkcInstance, Sense};
use crate::lp::{LinearModel, Objective, Relation, Simplex, Terms};
use crate::rational::Rational;

pub const DEFAULT_PIECE_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureSpace {
    pub epsilon: Rational,
    /// Smallest positive `K` with `(1+ε)^{−K} ≤ ε`.
    pub k: u32,
    /// `⌈1 + 1/ε⌉`
    pub j: u32,
}

impl SignatureSpace {
    pub fn new(epsilon: Rational) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
        }
        let base = Rational::one() + &epsilon;
        let mut k = 1u32;
        while base.pow(k).recip() > epsilon {
            k += 1;
        }
        let j = (Rational::one() + epsilon.recip()).ceil().to_i64().expect("J fits") as u32;
        Ok(SignatureSpace { epsilon, k, j })
    }

    /// `(J+1)^K`
    pub fn signatures(&self) -> u64 {
        (self.j as u64 + 1).saturating_pow(self.k)
    }

    /// `(1+ε)^{−k}` as an exact rational.
    pub fn shrink(&self, k: u32) -> Rational {
        (Rational::one() + &self.epsilon).pow(k).recip()
    }

    /// Signatures in lexicographic order.
    pub fn all(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.k {
            out = out
                .into_iter()
                .flat_map(|s| {
                    (0..=self.j).map(move |x| {
                        let mut t = s.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        out
    }
}

/// Which piece: `None` is the empty selection (`y = 0`, `α ≥ d̄`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PieceKey {
    /// Dearest selected item, as an original item index.
    pub h: Option<usize>,
    pub sigma: Vec<u32>,
}

/// The cost bands of one choice of `h` (positions in sorted order).
#[derive(Debug, Clone)]
struct Bands {
    /// `bands[k]`: sorted positions `p > h` with `f̄_h(1+ε)^{−k} ≥ f̄_p > f̄_h(1+ε)^{−(k+1)}`
    bands: Vec<Vec<usize>>,
}

fn bands(sorted_f: &[i64], h: usize, space: &SignatureSpace) -> Bands {
    let fh = Rational::from_int(sorted_f[h]);
    let cuts: Vec<Rational> = (0..=space.k).map(|k| &fh * space.shrink(k)).collect();
    let mut out = vec![Vec::new(); space.k as usize];
    for (p, &f) in sorted_f.iter().enumerate().skip(h + 1) {
        let f = Rational::from_int(f);
        for k in 0..space.k as usize {
            if cuts[k] >= f && f > cuts[k + 1] {
                out[k].push(p);
                break;
            }
        }
    }
    Bands { bands: out }
}

#[derive(Debug, Clone)]
pub struct EpsFormulation {
    pub model: LinearModel,
    pub space: SignatureSpace,
    /// Pieces kept after pruning the empty ones, in construction order.
    pub pieces: Vec<PieceKey>,
    /// `(J+1)^K·η` candidate pieces before pruning.
    pub candidates: u64,
    /// Sorted position → original item.
    pub order: Vec<usize>,
}

impl EpsFormulation {
    /// Index of the original `y_i` (the first `η` variables); `α` is at `η`.
    pub fn alpha_var(&self) -> usize {
        self.order.len()
    }
}

fn check_hypotheses(inst: &MkcInstance) -> Result<()> {
    if inst.mu != 1 || inst.sense != Sense::Cover {
        return Err(Error::Precondition("need a one-dimensional cover instance".into()));
    }
    if !inst.fixed.is_empty() {
        return Err(Error::Precondition("fixed items are not supported here".into()));
    }
    let (d, c, v) = (inst.dbar[0], inst.cbar[0], inst.vbar[0]);
    if inst.fbar.iter().any(|&f| f <= 0) || v <= 0 {
        return Err(Error::Hypothesis("item costs and the continuous cost must be positive".into()));
    }
    if inst.wbar.iter().any(|w| w[0] <= 0) {
        return Err(Error::Hypothesis("weights must be positive".into()));
    }
    if c <= 0 || c > d {
        return Err(Error::Hypothesis("need 0 < c̄ ≤ d̄".into()));
    }
    Ok(())
}

/// Rows of a piece over position-indexed `y` and `α`; `None` if trivially empty.
struct PieceRows {
    /// Positions forced to zero.
    zero: Vec<usize>,
    /// Position forced to one.
    one: Option<usize>,
    /// `(positions, relation, count)`
    counts: Vec<(Vec<usize>, Relation, i64)>,
    /// `α` lower bound forced by the empty piece.
    alpha_floor: i64,
}

fn piece_rows(
    eta: usize,
    sorted_f: &[i64],
    key_h: Option<usize>,
    sigma: &[u32],
    space: &SignatureSpace,
    d: i64,
) -> Option<PieceRows> {
    match key_h {
        None => Some(PieceRows { zero: (0..eta).collect(), one: None, counts: Vec::new(), alpha_floor: d }),
        Some(h) => {
            let b = bands(sorted_f, h, space);
            let mut counts = Vec::new();
            for (k, members) in b.bands.into_iter().enumerate() {
                let s = sigma[k];
                if s as usize > members.len() {
                    return None;
                }
                let rel = if s < space.j { Relation::Eq } else { Relation::Ge };
                counts.push((members, rel, s as i64));
            }
            Some(PieceRows { zero: (0..h).collect(), one: Some(h), counts, alpha_floor: 0 })
        }
    }
}

/// Standalone model of one piece over position-indexed `(y, α)`.
fn piece_model(inst: &MkcInstance, order: &[usize], rows: &PieceRows) -> LinearModel {
    let eta = order.len();
    let q = Rational::from_int;
    let mut m = LinearModel::new();
    let ys: Vec<usize> = (0..eta)
        .map(|p| {
            let fixed_zero = rows.zero.contains(&p);
            let fixed_one = rows.one == Some(p);
            let lo = if fixed_one { q(1) } else { q(0) };
            let hi = if fixed_zero { q(0) } else { q(1) };
            m.add_bounded(format!("y{p}"), lo, hi)
        })
        .collect();
    let a = m.add_bounded("a", q(rows.alpha_floor), q(inst.cbar[0]));
    let mut cover: Terms = (0..eta).map(|p| (ys[p], q(inst.wbar[order[p]][0]))).collect();
    cover.push((a, q(1)));
    m.add_constraint("cover", cover, Relation::Ge, q(inst.dbar[0]));
    for (members, rel, s) in &rows.counts {
        m.add_constraint("band", members.iter().map(|&p| (ys[p], q(1))).collect(), *rel, q(*s));
    }
    m
}

/// Builds the lifted model. Variables `0..η` are `y` (original order), `η` is `α`.
pub fn build_eps_1mkc(inst: &MkcInstance, epsilon: &Rational, piece_cap: u64) -> Result<EpsFormulation> {
    check_hypotheses(inst)?;
    // A weight beyond d̄ covers the row alone either way; capping it keeps
    // the integer points and tightens the relaxation.
    let mut capped = inst.clone();
    for w in capped.wbar.iter_mut() {
        w[0] = w[0].min(inst.dbar[0]);
    }
    let inst = &capped;
    let space = SignatureSpace::new(epsilon.clone())?;
    let eta = inst.eta;
    let candidates = space.signatures().saturating_mul(eta as u64);
    if candidates > piece_cap {
        return Err(Error::CapExceeded {
            what: "(J+1)^K·η pieces".into(),
            value: candidates.to_string(),
            cap: piece_cap.to_string(),
        });
    }
    let mut order: Vec<usize> = (0..eta).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(inst.fbar[i]), i));
    let sorted_f: Vec<i64> = order.iter().map(|&i| inst.fbar[i]).collect();
    let (d, c) = (inst.dbar[0], inst.cbar[0]);
    let q = Rational::from_int;

    let mut keys: Vec<(PieceKey, PieceRows)> = Vec::new();
    let mut consider = |h: Option<usize>, sigma: Vec<u32>| {
        if let Some(rows) = piece_rows(eta, &sorted_f, h, &sigma, &space, d) {
            let feasible = Simplex::new(&piece_model(inst, &order, &rows)).map(|s| s.is_feasible()).unwrap_or(false);
            if feasible {
                keys.push((PieceKey { h: h.map(|p| order[p]), sigma }, rows));
            }
        }
    };
    if d <= c {
        consider(None, Vec::new());
    }
    let signatures = space.all();
    for h in 0..eta {
        for sigma in &signatures {
            consider(Some(h), sigma.clone());
        }
    }

    let mut m = LinearModel::new();
    let y: Vec<usize> = (0..eta).map(|i| m.add_bounded(format!("y{}", i + 1), q(0), q(1))).collect();
    let alpha = m.add_bounded("alpha", q(0), q(c));
    let mut link_y: Vec<Terms> = (0..eta).map(|i| vec![(y[i], q(1))]).collect();
    let mut link_a: Terms = vec![(alpha, q(1))];
    let mut convex: Terms = Vec::new();

    for (t, (_, rows)) in keys.iter().enumerate() {
        let tag = format!("p{}", t + 1);
        let lam = m.add_nonneg(format!("lam_{tag}"));
        convex.push((lam, q(1)));
        // Position-indexed copy: a variable, λ itself, or nothing (fixed 0).
        let copies: Vec<Option<usize>> = (0..eta)
            .map(|p| {
                if rows.one == Some(p) {
                    Some(lam)
                } else if rows.zero.contains(&p) {
                    None
                } else {
                    let v = m.add_nonneg(format!("y_{tag}_{}", order[p] + 1));
                    m.add_constraint(
                        format!("ub_{tag}_{}", order[p] + 1),
                        vec![(v, q(1)), (lam, q(-1))],
                        Relation::Le,
                        q(0),
                    );
                    Some(v)
                }
            })
            .collect();
        let a = m.add_nonneg(format!("alpha_{tag}"));
        m.add_constraint(format!("ahi_{tag}"), vec![(a, q(1)), (lam, q(-c))], Relation::Le, q(0));
        if rows.alpha_floor > 0 {
            m.add_constraint(format!("alo_{tag}"), vec![(a, q(1)), (lam, q(-rows.alpha_floor))], Relation::Ge, q(0));
        }
        let mut cover: Terms = (0..eta).filter_map(|p| copies[p].map(|v| (v, q(inst.wbar[order[p]][0])))).collect();
        cover.push((a, q(1)));
        cover.push((lam, q(-d)));
        m.add_constraint(format!("cover_{tag}"), cover, Relation::Ge, q(0));
        for (k, (members, rel, s)) in rows.counts.iter().enumerate() {
            let mut terms: Terms = members.iter().filter_map(|&p| copies[p].map(|v| (v, q(1)))).collect();
            terms.push((lam, q(-s)));
            m.add_constraint(format!("band{}_{tag}", k + 1), terms, *rel, q(0));
        }
        for p in 0..eta {
            if let Some(v) = copies[p] {
                link_y[order[p]].push((v, q(-1)));
            }
        }
        link_a.push((a, q(-1)));
    }
    for (i, terms) in link_y.into_iter().enumerate() {
        m.add_constraint(format!("link_y{}", i + 1), terms, Relation::Eq, q(0));
    }
    m.add_constraint("link_alpha", link_a, Relation::Eq, q(0));
    m.add_constraint("convex", convex, Relation::Eq, q(1));

    let mut obj: Terms = (0..eta).map(|i| (y[i], q(inst.fbar[i]))).collect();
    obj.push((alpha, q(inst.vbar[0])));
    m.set_objective(Objective::minimize(obj));
    Ok(EpsFormulation { model: m, space, pieces: keys.into_iter().map(|(k, _)| k).collect(), candidates, order })
}

/// The piece an integer point belongs to, if the point is feasible.
pub fn classify(inst: &MkcInstance, space: &SignatureSpace, y: &[bool], alpha: &Rational) -> Option<PieceKey> {
    let cov: i64 = (0..inst.eta).filter(|&i| y[i]).map(|i| inst.wbar[i][0]).sum();
    if alpha.is_negative()
        || *alpha > Rational::from_int(inst.cbar[0])
        || Rational::from_int(cov) + alpha < Rational::from_int(inst.dbar[0])
    {
        return None;
    }
    let mut order: Vec<usize> = (0..inst.eta).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(inst.fbar[i]), i));
    let sorted_f: Vec<i64> = order.iter().map(|&i| inst.fbar[i]).collect();
    let Some(h) = (0..inst.eta).find(|&p| y[order[p]]) else {
        return Some(PieceKey { h: None, sigma: Vec::new() });
    };
    let b = bands(&sorted_f, h, space);
    let sigma =
        b.bands.iter().map(|members| (members.iter().filter(|&&p| y[order[p]]).count() as u32).min(space.j)).collect();
    Some(PieceKey { h: Some(order[h]), sigma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_mkc, DEFAULT_MKC_CAP};
    use crate::lp::solve;

    fn worked_example() -> MkcInstance {
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
    fn signature_constants() {
        let s = SignatureSpace::new(Rational::one()).unwrap();
        assert_eq!((s.k, s.j), (1, 2));
        assert_eq!(s.signatures(), 3);
        let s = SignatureSpace::new(Rational::new(1, 2)).unwrap();
        assert_eq!((s.k, s.j), (2, 3));
        let s = SignatureSpace::new(Rational::new(9, 10)).unwrap();
        assert_eq!((s.k, s.j), (1, 3));
        assert_eq!(s.all().len(), 4);
    }

    #[test]
    fn candidate_count() {
        let f = build_eps_1mkc(&worked_example(), &Rational::one(), DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(f.candidates, 6);
        assert!(f.pieces.len() as u64 <= f.candidates + 1);
    }

    #[test]
    fn worked_example_sandwich() {
        let inst = worked_example();
        let eps = Rational::new(1, 2);
        let f = build_eps_1mkc(&inst, &eps, DEFAULT_PIECE_CAP).unwrap();
        let lp = solve(&f.model).unwrap();
        let opt = exact_mkc(&inst, DEFAULT_MKC_CAP).unwrap().unwrap().value;
        assert_eq!(opt, Rational::from_int(2));
        assert!(lp.objective <= opt);
        assert!(opt <= (Rational::one() + eps) * lp.objective);
    }

    #[test]
    fn integer_points_are_classified_into_kept_pieces() {
        let inst = MkcInstance {
            sense: Sense::Cover,
            eta: 4,
            mu: 1,
            fbar: vec![5, 9, 3, 4],
            vbar: vec![2],
            cbar: vec![3],
            wbar: vec![vec![2], vec![4], vec![1], vec![3]],
            dbar: vec![6],
            fixed: vec![],
        };
        let f = build_eps_1mkc(&inst, &Rational::new(1, 2), DEFAULT_PIECE_CAP).unwrap();
        for mask in 0..16u32 {
            let y: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
            let cov: i64 = (0..4).filter(|&i| y[i]).map(|i| inst.wbar[i][0]).sum();
            let alpha = Rational::from_int((6 - cov).max(0));
            match classify(&inst, &f.space, &y, &alpha) {
                Some(key) => assert!(f.pieces.contains(&key), "{key:?}"),
                None => assert!(6 - cov > 3),
            }
        }
    }

    #[test]
    fn hypotheses_are_enforced() {
        let mut inst = worked_example();
        inst.fbar[0] = 0;
        assert!(matches!(build_eps_1mkc(&inst, &Rational::one(), DEFAULT_PIECE_CAP), Err(Error::Hypothesis(_))));
    }
}
