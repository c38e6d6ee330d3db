//! Problem data: the covering/packing program over `n` items and `m`
//! constraints, the knapsack subproblems it decomposes into, and their
//! solutions.
//!
//! Item and dimension indices are 0-based throughout the crate. Human-facing
//! messages use 1-based indices.

use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    /// `min`, demand rows `∑ x ≥ d`.
    Cover,
    /// `max`, capacity rows `∑ x ≤ d`.
    Pack,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Cover => "cover",
            Sense::Pack => "pack",
        })
    }
}

/// The mixed-integer program over items `i` and constraints `j`:
/// choose `y_i ∈ {0,1}` and `ℓ_ij y_i ≤ x_ij ≤ c_ij y_i` so that every
/// column sum of `x` meets (cover) or respects (pack) `d_j`, optimizing
/// `∑ v_ij x_ij + ∑ f_i y_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverInstance {
    pub sense: Sense,
    pub n: usize,
    pub m: usize,
    pub v: Vec<Vec<i64>>,
    pub l: Vec<Vec<i64>>,
    pub c: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    pub f: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub item: Option<usize>,
    pub dim: Option<usize>,
    pub message: String,
}

impl Violation {
    fn new(item: Option<usize>, dim: Option<usize>, message: impl Into<String>) -> Self {
        Violation { item, dim, message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn sub2(i: usize, j: usize) -> String {
    if i < 9 && j < 9 {
        format!("{}{}", i + 1, j + 1)
    } else {
        format!("{},{}", i + 1, j + 1)
    }
}

fn check_matrix(name: &str, mat: &[Vec<i64>], rows: usize, cols: usize, out: &mut Vec<Violation>) -> bool {
    if mat.len() != rows {
        out.push(Violation::new(None, None, format!("{name} has {} rows, expected {rows}", mat.len())));
        return false;
    }
    let mut ok = true;
    for (i, row) in mat.iter().enumerate() {
        if row.len() != cols {
            out.push(Violation::new(
                Some(i),
                None,
                format!("{name} row {} has {} entries, expected {cols}", i + 1, row.len()),
            ));
            ok = false;
        }
    }
    ok
}

impl CoverInstance {
    /// All invariant violations; empty when the instance is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(Violation::new(None, None, "n must be positive"));
        }
        if self.m == 0 {
            out.push(Violation::new(None, None, "m must be positive"));
        }
        let shapes = check_matrix("v", &self.v, self.n, self.m, &mut out)
            & check_matrix("l", &self.l, self.n, self.m, &mut out)
            & check_matrix("c", &self.c, self.n, self.m, &mut out);
        if self.d.len() != self.m {
            out.push(Violation::new(None, None, format!("d has {} entries, expected {}", self.d.len(), self.m)));
        }
        if self.f.len() != self.n {
            out.push(Violation::new(None, None, format!("f has {} entries, expected {}", self.f.len(), self.n)));
        }
        if !shapes || self.d.len() != self.m || self.f.len() != self.n {
            return out;
        }
        for (i, &fi) in self.f.iter().enumerate() {
            if fi < 0 {
                out.push(Violation::new(Some(i), None, format!("f_{} ≥ 0 fails", i + 1)));
            }
        }
        for (j, &dj) in self.d.iter().enumerate() {
            if dj < 0 {
                out.push(Violation::new(None, Some(j), format!("d_{} ≥ 0 fails", j + 1)));
            }
        }
        for i in 0..self.n {
            for j in 0..self.m {
                let s = sub2(i, j);
                if self.v[i][j] < 0 {
                    out.push(Violation::new(Some(i), Some(j), format!("v_{s} ≥ 0 fails")));
                }
                if self.l[i][j] < 0 {
                    out.push(Violation::new(Some(i), Some(j), format!("l_{s} ≥ 0 fails")));
                }
                if self.c[i][j] < self.l[i][j] {
                    out.push(Violation::new(Some(i), Some(j), format!("c_{s} ≥ l_{s} fails")));
                }
                if self.d[j] < self.c[i][j] {
                    out.push(Violation::new(Some(i), Some(j), format!("d_{} ≥ c_{s} fails", j + 1)));
                }
            }
        }
        out
    }

    pub fn validated(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Validation(v))
        }
    }

    /// `∑_i c_ij ≥ d_j` for every `j`; the cover program is feasible iff this holds.
    pub fn is_cover_feasible(&self) -> bool {
        (0..self.m).all(|j| (0..self.n).map(|i| self.c[i][j]).sum::<i64>() >= self.d[j])
    }

    pub fn objective(&self, x: &[Vec<Rational>], y: &[bool]) -> Rational {
        let mut total = Rational::zero();
        for i in 0..self.n {
            if y[i] {
                total += Rational::from_int(self.f[i]);
            }
            for j in 0..self.m {
                if self.v[i][j] != 0 && !x[i][j].is_zero() {
                    total += &x[i][j] * Rational::from_int(self.v[i][j]);
                }
            }
        }
        total
    }

    /// Re-checks bounds, rows and the stored value of `sol` exactly.
    pub fn check_solution(&self, sol: &MixedSolution) -> std::result::Result<(), String> {
        if sol.y.len() != self.n || sol.x.len() != self.n || sol.x.iter().any(|r| r.len() != self.m) {
            return Err("solution shape does not match instance".into());
        }
        for i in 0..self.n {
            let yi = if sol.y[i] { 1 } else { 0 };
            for j in 0..self.m {
                let lo = Rational::from_int(self.l[i][j] * yi);
                let hi = Rational::from_int(self.c[i][j] * yi);
                if sol.x[i][j] < lo || sol.x[i][j] > hi {
                    return Err(format!("x_{} = {} outside [{lo}, {hi}]", sub2(i, j), sol.x[i][j]));
                }
            }
        }
        for j in 0..self.m {
            let total: Rational = (0..self.n).map(|i| &sol.x[i][j]).sum();
            let dj = Rational::from_int(self.d[j]);
            let ok = match self.sense {
                Sense::Cover => total >= dj,
                Sense::Pack => total <= dj,
            };
            if !ok {
                return Err(format!("row {} has ∑x = {total} against d = {dj}", j + 1));
            }
        }
        let value = self.objective(&sol.x, &sol.y);
        if value != sol.value {
            return Err(format!("stored value {} differs from recomputed {value}", sol.value));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: CoverInstance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        inst.validated()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    /// Same instance with `v`/`f` replaced; used to sweep objectives over a fixed feasible set.
    pub fn with_objective(&self, v: Vec<Vec<i64>>, f: Vec<i64>) -> Self {
        CoverInstance { v, f, ..self.clone() }
    }
}

/// A knapsack cover (or packing) instance with one bounded continuous
/// variable `α_j ∈ [0, c̄_j]` per dimension. Items listed in `fixed` must
/// be selected; the decomposition uses them for its pivot items.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MkcInstance {
    pub sense: Sense,
    pub eta: usize,
    pub mu: usize,
    pub fbar: Vec<i64>,
    pub vbar: Vec<i64>,
    pub cbar: Vec<i64>,
    /// `η × μ`, row-major by item.
    pub wbar: Vec<Vec<i64>>,
    pub dbar: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed: Vec<usize>,
}

impl MkcInstance {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.eta == 0 {
            out.push(Violation::new(None, None, "eta must be positive"));
        }
        if self.mu == 0 {
            out.push(Violation::new(None, None, "mu must be positive"));
        }
        if self.fbar.len() != self.eta {
            out.push(Violation::new(None, None, "fbar length must equal eta"));
        }
        for (name, vec) in [("vbar", &self.vbar), ("cbar", &self.cbar), ("dbar", &self.dbar)] {
            if vec.len() != self.mu {
                out.push(Violation::new(None, None, format!("{name} length must equal mu")));
            }
        }
        let shapes = check_matrix("wbar", &self.wbar, self.eta, self.mu, &mut out);
        if !out.is_empty() || !shapes {
            return out;
        }
        let neg = |name: &str, vals: &[i64], out: &mut Vec<Violation>| {
            for (k, &x) in vals.iter().enumerate() {
                if x < 0 {
                    out.push(Violation::new(None, None, format!("{name}_{} ≥ 0 fails", k + 1)));
                }
            }
        };
        neg("fbar", &self.fbar, &mut out);
        neg("vbar", &self.vbar, &mut out);
        neg("cbar", &self.cbar, &mut out);
        neg("dbar", &self.dbar, &mut out);
        for (i, row) in self.wbar.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if w < 0 {
                    out.push(Violation::new(Some(i), Some(j), format!("wbar_{} ≥ 0 fails", sub2(i, j))));
                }
            }
        }
        for w in self.fixed.windows(2) {
            if w[0] >= w[1] {
                out.push(Violation::new(None, None, "fixed items must be strictly increasing"));
            }
        }
        if self.fixed.iter().any(|&i| i >= self.eta) {
            out.push(Violation::new(None, None, "fixed item out of range"));
        }
        out
    }

    pub fn validated(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Validation(v))
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: MkcInstance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        inst.validated()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed.binary_search(&i).is_ok()
    }

    /// Items not forced into the solution, in index order.
    pub fn free_items(&self) -> Vec<usize> {
        (0..self.eta).filter(|&i| !self.is_fixed(i)).collect()
    }

    /// Dimensions whose continuous variable is forced to zero (`c̄_j = 0`).
    pub fn degenerate_dims(&self) -> Vec<usize> {
        (0..self.mu).filter(|&j| self.cbar[j] == 0).collect()
    }

    /// Cover: every row coverable with all items; pack: the fixed items fit.
    pub fn is_feasible(&self) -> bool {
        match self.sense {
            Sense::Cover => {
                (0..self.mu).all(|j| (0..self.eta).map(|i| self.wbar[i][j]).sum::<i64>() >= self.dbar[j] - self.cbar[j])
            }
            Sense::Pack => {
                (0..self.mu).all(|j| self.fixed.iter().map(|&i| self.wbar[i][j]).sum::<i64>() <= self.dbar[j])
            }
        }
    }

    pub fn objective(&self, y: &[bool], alpha: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (i, &yi) in y.iter().enumerate() {
            if yi {
                total += Rational::from_int(self.fbar[i]);
            }
        }
        for (j, a) in alpha.iter().enumerate() {
            if self.vbar[j] != 0 {
                total += a * Rational::from_int(self.vbar[j]);
            }
        }
        total
    }

    /// Column sums `∑_{i∈S} w̄_ij` of a selection.
    pub fn covered(&self, y: &[bool]) -> Vec<i64> {
        (0..self.mu).map(|j| (0..self.eta).filter(|&i| y[i]).map(|i| self.wbar[i][j]).sum()).collect()
    }

    pub fn check_solution(&self, sol: &MkcSolution) -> std::result::Result<(), String> {
        if sol.y.len() != self.eta || sol.alpha.len() != self.mu {
            return Err("solution shape does not match instance".into());
        }
        if let Some(&i) = self.fixed.iter().find(|&&i| !sol.y[i]) {
            return Err(format!("fixed item {} not selected", i + 1));
        }
        let cov = self.covered(&sol.y);
        for j in 0..self.mu {
            let a = &sol.alpha[j];
            if a.is_negative() || *a > Rational::from_int(self.cbar[j]) {
                return Err(format!("alpha_{} = {a} outside [0, {}]", j + 1, self.cbar[j]));
            }
            let lhs = Rational::from_int(cov[j]) + a;
            let dj = Rational::from_int(self.dbar[j]);
            let ok = match self.sense {
                Sense::Cover => lhs >= dj,
                Sense::Pack => lhs <= dj,
            };
            if !ok {
                return Err(format!("row {} has ∑w + α = {lhs} against d̄ = {dj}", j + 1));
            }
        }
        let value = self.objective(&sol.y, &sol.alpha);
        if value != sol.value {
            return Err(format!("stored value {} differs from recomputed {value}", sol.value));
        }
        Ok(())
    }
}

mod bits {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(y: &[bool], s: S) -> Result<S::Ok, S::Error> {
        y.iter().map(|&b| u8::from(b)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        let raw = Vec::<u8>::deserialize(d)?;
        raw.into_iter()
            .map(|b| match b {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(serde::de::Error::custom("y entries must be 0 or 1")),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedSolution {
    pub x: Vec<Vec<Rational>>,
    #[serde(with = "bits")]
    pub y: Vec<bool>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MkcSolution {
    #[serde(with = "bits")]
    pub y: Vec<bool>,
    pub alpha: Vec<Rational>,
    pub value: Rational,
}

impl MkcSolution {
    pub fn selected(&self) -> Vec<usize> {
        (0..self.y.len()).filter(|&i| self.y[i]).collect()
    }
}

/// Zero-cost test. Items with `f_i = 0` whose lower bounds are free
/// (`v_ij ℓ_ij = 0` for every `j`) can be switched on at no cost; the
/// optimum is zero iff, for every `j`, those with `v_ij = 0` can cover
/// `d_j` on their own. Returns the corresponding zero-value solution.
pub fn zero_optimum(inst: &CoverInstance) -> Option<MixedSolution> {
    if inst.sense != Sense::Cover {
        return None;
    }
    let free: Vec<bool> =
        (0..inst.n).map(|i| inst.f[i] == 0 && (0..inst.m).all(|j| inst.v[i][j] == 0 || inst.l[i][j] == 0)).collect();
    for j in 0..inst.m {
        let cap: i64 = (0..inst.n).filter(|&i| free[i] && inst.v[i][j] == 0).map(|i| inst.c[i][j]).sum();
        if cap < inst.d[j] {
            return None;
        }
    }
    let x = (0..inst.n)
        .map(|i| {
            (0..inst.m)
                .map(|j| if free[i] && inst.v[i][j] == 0 { Rational::from_int(inst.c[i][j]) } else { Rational::zero() })
                .collect()
        })
        .collect();
    Some(MixedSolution { x, y: free, value: Rational::zero() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub coeff_max: i64,
    pub sense: Sense,
}

impl GenConfig {
    pub fn cover(seed: u64, n: usize, m: usize, coeff_max: i64) -> Self {
        GenConfig { seed, n, m, coeff_max, sense: Sense::Cover }
    }

    pub fn pack(seed: u64, n: usize, m: usize, coeff_max: i64) -> Self {
        GenConfig { seed, n, m, coeff_max, sense: Sense::Pack }
    }
}

/// Seeded random instance. Demands are drawn in `[1, coeff_max]`, then
/// `c_ij ≤ d_j` and `ℓ_ij ≤ c_ij`. Cover instances whose capacities fall
/// short get `d_j` redrawn in `[max_i c_ij, ∑_i c_ij]`.
pub fn generate(cfg: &GenConfig) -> Result<CoverInstance> {
    if cfg.coeff_max < 1 {
        return Err(Error::Precondition("coeff_max must be at least 1".into()));
    }
    if cfg.n == 0 || cfg.m == 0 {
        return Err(Error::Precondition("n and m must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (n, m, cm) = (cfg.n, cfg.m, cfg.coeff_max);
    let mut d: Vec<i64> = (0..m).map(|_| rng.random_range(1..=cm)).collect();
    let mut c = vec![vec![0i64; m]; n];
    let mut l = vec![vec![0i64; m]; n];
    let mut v = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            c[i][j] = rng.random_range(0..=d[j]);
            l[i][j] = rng.random_range(0..=c[i][j]);
            v[i][j] = rng.random_range(0..=cm);
        }
    }
    let f: Vec<i64> = (0..n).map(|_| rng.random_range(0..=cm)).collect();
    if cfg.sense == Sense::Cover {
        for j in 0..m {
            let total: i64 = (0..n).map(|i| c[i][j]).sum();
            if total >= d[j] {
                continue;
            }
            if total == 0 {
                let i = rng.random_range(0..n);
                c[i][j] = d[j];
                continue;
            }
            let hi = (0..n).map(|i| c[i][j]).max().unwrap_or(0);
            d[j] = rng.random_range(hi.max(1)..=total);
        }
    }
    Ok(CoverInstance { sense: cfg.sense, n, m, v, l, c, d, f })
}
