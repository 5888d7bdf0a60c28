//! The NashMax mixed-integer model and its LP-format round trip.
//!
//! Utilities are first normalised per re-seller to integers summing to at
//! most 1000. The concave `ln` of each bundle value is then bounded from
//! above by the chords through `(k, ln k)` and `(k + 1, ln(k + 1))` for odd
//! `k` in `1..=999`; every integer in `[1, 1000]` is an end point of one of
//! those chords, so `gamma_i = min_k cut_k(u_i)` equals `ln u_i` there.
//!
//! No solver is bundled: [`write_lp`] produces a file for an external
//! solver and [`read_solution`] decodes its answer. [`MilpModel::objective_at`]
//! evaluates the model on a fixed assignment, which lets tests solve small
//! models by enumeration.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::instance::{is_feasible_allocation, Allocation, CardinalityBounds, Instance};
use crate::{Error, Result};

/// Row-sum budget of the scaled utilities.
pub const SCALE: u32 = 1000;

/// Absolute tolerance for reading a binary variable from a solution file.
pub const BINARY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledInstance {
    m: usize,
    n: usize,
    values: Vec<u32>,
    scale_factors: Vec<f64>,
}

impl ScaledInstance {
    pub fn resellers(&self) -> usize {
        self.m
    }

    pub fn products(&self) -> usize {
        self.n
    }

    pub fn value(&self, i: usize, j: usize) -> u32 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// `1000 / row sum` for each re-seller.
    pub fn scale_factors(&self) -> &[f64] {
        &self.scale_factors
    }

    /// The scaled utilities as an ordinary instance.
    pub fn to_instance(&self) -> Instance {
        Instance::new(self.m, self.n, self.values.iter().map(|&v| f64::from(v)).collect())
            .expect("scaled values are valid utilities")
    }
}

/// Scales row `i` by `1000 / sum_j W[i][j]` and rounds down. Entries that
/// round to zero stay zero; there is no minimum of one.
pub fn scale_utilities(inst: &Instance) -> Result<ScaledInstance> {
    let (m, n) = (inst.resellers(), inst.products());
    let mut values = Vec::with_capacity(m * n);
    let mut scale_factors = Vec::with_capacity(m);
    for i in 0..m {
        let row = inst.row(i);
        let sum: f64 = row.iter().sum();
        if sum <= 0.0 {
            return Err(Error::ZeroSumRow(i));
        }
        let factor = f64::from(SCALE) / sum;
        // the slack absorbs representation error such as 0.7 * 1000 / 1.0
        let mut scaled: Vec<u32> = row.iter().map(|&w| (w * factor + 1e-9).floor() as u32).collect();
        // never let the slack push a row over budget
        let mut total: u32 = scaled.iter().sum();
        while total > SCALE {
            let j = (0..n).max_by_key(|&j| (scaled[j], std::cmp::Reverse(j))).expect("row is non-empty");
            scaled[j] -= 1;
            total -= 1;
        }
        values.extend(scaled);
        scale_factors.push(factor);
    }
    Ok(ScaledInstance { m, n, values, scale_factors })
}

/// `gamma_i - slope * sum_j v[i][j] x[i][j] <= rhs`, the chord of `ln`
/// between `k` and `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCut {
    pub reseller: usize,
    pub k: u32,
    pub slope: f64,
    pub rhs: f64,
}

impl LogCut {
    pub fn new(reseller: usize, k: u32) -> Self {
        let lk = f64::from(k).ln();
        let slope = f64::from(k + 1).ln() - lk;
        LogCut { reseller, k, slope, rhs: lk - slope * f64::from(k) }
    }

    /// Upper bound the cut places on `gamma` at bundle value `u`.
    pub fn at(&self, u: f64) -> f64 {
        self.rhs + self.slope * u
    }
}

/// Odd chord anchors `1, 3, ..., 999`.
pub fn cut_anchors() -> impl Iterator<Item = u32> {
    (1..SCALE).step_by(2)
}

/// Tightest cut value at bundle value `u`, i.e. the largest `gamma` the
/// model allows.
pub fn log_cut_bound(u: f64) -> f64 {
    cut_anchors().map(|k| LogCut::new(0, k).at(u)).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    scaled: ScaledInstance,
    bounds: CardinalityBounds,
    cuts: Vec<LogCut>,
}

pub fn build_nashmax_model(scaled: &ScaledInstance, b: &CardinalityBounds) -> MilpModel {
    let cuts = (0..scaled.m).flat_map(|i| cut_anchors().map(move |k| LogCut::new(i, k))).collect();
    MilpModel { scaled: scaled.clone(), bounds: *b, cuts }
}

impl MilpModel {
    pub fn scaled(&self) -> &ScaledInstance {
        &self.scaled
    }

    pub fn bounds(&self) -> &CardinalityBounds {
        &self.bounds
    }

    pub fn cuts(&self) -> &[LogCut] {
        &self.cuts
    }

    pub fn binary_count(&self) -> usize {
        self.scaled.m * self.scaled.n
    }

    pub fn continuous_count(&self) -> usize {
        self.scaled.m
    }

    /// One range row per re-seller and one per product.
    pub fn range_row_count(&self) -> usize {
        self.scaled.m + self.scaled.n
    }

    /// Best objective over `gamma` with the binaries fixed to `x`
    /// (row-major `m x n`), or `None` if `x` breaks a range row.
    pub fn objective_at(&self, x: &[bool]) -> Option<f64> {
        let (m, n) = (self.scaled.m, self.scaled.n);
        assert_eq!(x.len(), m * n, "assignment has the wrong length");
        let b = &self.bounds;
        let row_ok = (0..m).all(|i| (b.l1..=b.l2).contains(&(0..n).filter(|&j| x[i * n + j]).count()));
        let col_ok = (0..n).all(|j| (b.r1..=b.r2).contains(&(0..m).filter(|&i| x[i * n + j]).count()));
        if !row_ok || !col_ok {
            return None;
        }
        let mut objective = 0.0;
        let mut cuts = self.cuts.iter().peekable();
        for i in 0..m {
            let u: u32 = (0..n).filter(|&j| x[i * n + j]).map(|j| self.scaled.value(i, j)).sum();
            let mut gamma = f64::INFINITY;
            while let Some(c) = cuts.next_if(|c| c.reseller == i) {
                gamma = gamma.min(c.at(f64::from(u)));
            }
            objective += gamma;
        }
        Some(objective)
    }
}

fn x_name(i: usize, j: usize) -> String {
    format!("x_{i}_{j}")
}

/// Sum of `x` over a row or column, e.g. `x_0_0 + x_0_1`.
fn count_expr(vars: impl Iterator<Item = String>) -> String {
    vars.collect::<Vec<_>>().join(" + ")
}

fn range_rows(out: &mut String, name: &str, expr: &str, lo: usize, hi: usize) {
    if lo == hi {
        let _ = writeln!(out, " {name}: {expr} = {lo}");
    } else {
        let _ = writeln!(out, " {name}_lo: {expr} >= {lo}");
        let _ = writeln!(out, " {name}_hi: {expr} <= {hi}");
    }
}

/// Renders the model in LP format. Output depends only on the model.
pub fn lp_string(model: &MilpModel) -> String {
    let s = &model.scaled;
    let b = &model.bounds;
    let (m, n) = (s.m, s.n);
    let mut out = String::new();
    let _ = writeln!(out, "\\ NashMax: {m} re-sellers, {n} products, bounds {b}");
    out.push_str("Maximize\n obj: ");
    out.push_str(&(0..m).map(|i| format!("g_{i}")).collect::<Vec<_>>().join(" + "));
    out.push_str("\nSubject To\n");
    for c in &model.cuts {
        let i = c.reseller;
        let _ = write!(out, " cut_{i}_{}: g_{i}", c.k);
        for j in 0..n {
            let v = s.value(i, j);
            if v > 0 {
                let _ = write!(out, " - {} {}", c.slope * f64::from(v), x_name(i, j));
            }
        }
        let _ = writeln!(out, " <= {}", c.rhs);
    }
    for i in 0..m {
        let expr = count_expr((0..n).map(|j| x_name(i, j)));
        range_rows(&mut out, &format!("reseller_{i}"), &expr, b.l1, b.l2);
    }
    for j in 0..n {
        let expr = count_expr((0..m).map(|i| x_name(i, j)));
        range_rows(&mut out, &format!("product_{j}"), &expr, b.r1, b.r2);
    }
    out.push_str("Bounds\n");
    for i in 0..m {
        let _ = writeln!(out, " g_{i} free");
    }
    out.push_str("Binaries\n");
    for i in 0..m {
        for j in 0..n {
            let _ = writeln!(out, " {}", x_name(i, j));
        }
    }
    out.push_str("End\n");
    out
}

pub fn write_lp<W: Write>(model: &MilpModel, mut out: W) -> std::io::Result<()> {
    out.write_all(lp_string(model).as_bytes())
}

pub fn write_lp_file(model: &MilpModel, path: &Path) -> Result<()> {
    fs::write(path, lp_string(model)).map_err(|e| Error::io(path, e))
}

/// Decodes `name value` lines (blank lines and `#` comments ignored;
/// variables other than `x_i_j` ignored) into an allocation and checks it
/// against the model's bounds.
pub fn parse_solution(text: &str, model: &MilpModel) -> Result<Allocation> {
    let (m, n) = (model.scaled.m, model.scaled.n);
    let mut x: Vec<Option<bool>> = vec![None; m * n];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Solution(format!("line {}: {what}: `{line}`", lineno + 1));
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected `name value`"));
        };
        let Some(indices) = name.strip_prefix("x_") else { continue };
        let (i, j) = indices
            .split_once('_')
            .and_then(|(i, j)| Some((i.parse::<usize>().ok()?, j.parse::<usize>().ok()?)))
            .ok_or_else(|| bad("malformed variable name"))?;
        if i >= m || j >= n {
            return Err(bad("variable outside the model"));
        }
        let v: f64 = value.parse().map_err(|_| bad("value is not a number"))?;
        let bit = if (v - 1.0).abs() <= BINARY_TOLERANCE {
            true
        } else if v.abs() <= BINARY_TOLERANCE {
            false
        } else {
            return Err(bad("value is not binary"));
        };
        x[i * n + j] = Some(bit);
    }
    if let Some(pos) = x.iter().position(Option::is_none) {
        return Err(Error::Solution(format!("missing value for {}", x_name(pos / n, pos % n))));
    }
    let matrix: Vec<bool> = x.into_iter().map(|b| b == Some(true)).collect();
    let alloc = Allocation::from_matrix(m, n, &matrix);
    let verdict = is_feasible_allocation(&model.scaled.to_instance(), &alloc, &model.bounds);
    if let Some(v) = verdict.violations.first() {
        return Err(Error::Infeasible(v.to_string()));
    }
    Ok(alloc)
}

pub fn read_solution(path: &Path, model: &MilpModel) -> Result<Allocation> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_solution(&text, model)
}
