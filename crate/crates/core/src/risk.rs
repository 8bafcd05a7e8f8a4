//! Losses, datasets, loss tables and risks of linear predictors.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::datagen::{self, GeneratorSpec};
use crate::error::{invalid, Error, Result};
use crate::param_space::AtomSet;

/// Loss ℓ(prediction, target).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LossKind {
    Squared,
    Absolute,
    /// Classification by sign relative to `threshold`: the loss is 1 when the
    /// prediction and the target fall on different sides.
    ZeroOne { threshold: f64 },
}

impl LossKind {
    #[inline]
    pub fn eval(&self, prediction: f64, target: f64) -> f64 {
        match *self {
            LossKind::Squared => {
                let r = target - prediction;
                r * r
            }
            LossKind::Absolute => (target - prediction).abs(),
            LossKind::ZeroOne { threshold } => {
                if (prediction >= threshold) == (target >= threshold) {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    pub fn is_bounded_unit(&self) -> bool {
        matches!(self, LossKind::ZeroOne { .. })
    }
}

/// Ordered observations (xᵢ, yᵢ). Row order carries the dependence structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Dataset {
    pub fn new(dim: usize) -> Self {
        Self { dim, xs: Vec::new(), ys: Vec::new() }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        Self { dim, xs: Vec::with_capacity(dim * n), ys: Vec::with_capacity(n) }
    }

    pub fn from_rows(rows: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let dim = rows.first().map(|(x, _)| x.len()).ok_or_else(|| invalid("dataset has no rows"))?;
        let mut data = Self::with_capacity(dim, rows.len());
        for (x, y) in rows {
            data.push(&x, y)?;
        }
        Ok(data)
    }

    pub fn push(&mut self, x: &[f64], y: f64) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if !y.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(invalid("dataset entries must be finite"));
        }
        self.xs.extend_from_slice(x);
        self.ys.push(y);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn y(&self, i: usize) -> f64 {
        self.ys[i]
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.xs.chunks_exact(self.dim).zip(self.ys.iter().copied())
    }

    /// Reads the delimited text format: one observation per line, `y` first,
    /// then the x coordinates, separated by commas. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn read_delimited<R: BufRead>(reader: R) -> Result<Self> {
        let mut data: Option<Dataset> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields = trimmed
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })?;
            if fields.len() < 2 {
                return Err(Error::Parse { line: idx + 1, msg: "need y and at least one x coordinate".into() });
            }
            let target = data.get_or_insert_with(|| Dataset::new(fields.len() - 1));
            target
                .push(&fields[1..], fields[0])
                .map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })?;
        }
        data.ok_or_else(|| Error::Parse { line: 0, msg: "no observations".into() })
    }

    pub fn write_delimited<W: Write>(&self, mut writer: W) -> Result<()> {
        let mut line = String::new();
        for (x, y) in self.rows() {
            line.clear();
            write!(line, "{y}").unwrap();
            for v in x {
                write!(line, ",{v}").unwrap();
            }
            writeln!(writer, "{line}")?;
        }
        Ok(())
    }
}

/// L[i][j] = ℓᵢ(θⱼ), stored row-major (n rows, K columns).
#[derive(Debug, Clone, PartialEq)]
pub struct LossTable {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl LossTable {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        let n = rows.len();
        let mut values = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, got: row.len() });
            }
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(invalid("loss entries must be finite and nonnegative"));
            }
            values.extend(row);
        }
        Ok(Self { rows: n, cols, values })
    }

    pub fn n(&self) -> usize {
        self.rows
    }

    pub fn k(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(j).step_by(self.cols.max(1)).copied()
    }
}

/// Loss of every linear predictor ⟨θⱼ, ·⟩ on every observation.
pub fn compute_loss_table(data: &Dataset, atoms: &AtomSet, loss: LossKind) -> Result<LossTable> {
    check_dims(data, atoms)?;
    let k = atoms.len();
    let mut values = Vec::with_capacity(data.len() * k);
    for (x, y) in data.rows() {
        for atom in atoms.iter() {
            values.push(loss.eval(dot(atom.coords(), x), y));
        }
    }
    Ok(LossTable { rows: data.len(), cols: k, values })
}

/// rₙ(θⱼ) = (1/n) Σᵢ ℓᵢ(θⱼ), i.e. the column means of the table.
pub fn empirical_risk(table: &LossTable) -> Result<Vec<f64>> {
    if table.rows == 0 {
        return Err(invalid("empirical risk of an empty loss table"));
    }
    let mut sums = vec![0.0; table.cols];
    for row in table.values.chunks_exact(table.cols.max(1)) {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    let n = table.rows as f64;
    Ok(sums.into_iter().map(|s| s / n).collect())
}

/// rₙ computed directly from data, without materializing the loss table.
pub fn empirical_risk_direct(data: &Dataset, atoms: &AtomSet, loss: LossKind) -> Result<Vec<f64>> {
    check_dims(data, atoms)?;
    if data.is_empty() {
        return Err(invalid("empirical risk of an empty dataset"));
    }
    let mut sums = vec![0.0; atoms.len()];
    for (x, y) in data.rows() {
        for (s, atom) in sums.iter_mut().zip(atoms.iter()) {
            *s += loss.eval(dot(atom.coords(), x), y);
        }
    }
    let n = data.len() as f64;
    Ok(sums.into_iter().map(|s| s / n).collect())
}

fn check_dims(data: &Dataset, atoms: &AtomSet) -> Result<()> {
    if data.dim() != atoms.dim() {
        return Err(Error::DimensionMismatch { expected: atoms.dim(), got: data.dim() });
    }
    Ok(())
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Monte Carlo settings for risks without a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub draws: usize,
    pub seed: u64,
}

/// True risk R(θⱼ) per atom. `std_errors` is set when the values come from
/// Monte Carlo rather than a closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueRisk {
    pub values: Vec<f64>,
    pub std_errors: Option<Vec<f64>>,
}

/// R(θ) = E[rₙ(θ)]: closed form when the generator supports it for `loss`,
/// otherwise the Monte Carlo fallback when `mc` is given.
pub fn true_risk(gen: &GeneratorSpec, atoms: &AtomSet, loss: LossKind, mc: Option<MonteCarlo>) -> Result<TrueRisk> {
    match datagen::true_risk_closed_form(gen, atoms, loss) {
        Ok(values) => Ok(TrueRisk { values, std_errors: None }),
        Err(Error::Unsupported(msg)) => match mc {
            Some(mc) => datagen::true_risk_monte_carlo(gen, atoms, loss, mc),
            None => Err(Error::Unsupported(format!("{msg}; no Monte Carlo fallback configured"))),
        },
        Err(e) => Err(e),
    }
}
