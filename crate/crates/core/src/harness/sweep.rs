//! One coverage summary per value of a swept parameter.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::coverage::run_coverage;
use crate::error::{Error, Result};
use crate::ext_real::csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    N,
    Delta,
    P,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(SweepAxis::N),
            "delta" => Ok(SweepAxis::Delta),
            "p" => Ok(SweepAxis::P),
            other => Err(Error::Config(format!("unknown sweep axis `{other}` (expected n, delta or p)"))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::N => "n",
            SweepAxis::Delta => "delta",
            SweepAxis::P => "p",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub n: usize,
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub moment_bound: f64,
    pub coverage_bound: f64,
    pub coverage_oracle: f64,
    pub median_margin: f64,
    pub prior_margin: f64,
    pub mean_rbar: f64,
    pub mean_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    /// Log-log slopes against the swept value (at least two distinct values).
    pub slope_median_margin: Option<f64>,
    pub slope_prior_margin: Option<f64>,
}

impl SweepTable {
    pub const HEADER: &'static str =
        "axis,value,n,delta,p,q,moment_bound,coverage_bound,coverage_oracle,median_margin,prior_margin,mean_rbar,mean_slack";

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", Self::HEADER)?;
        for r in &self.rows {
            let cells = [
                csv(r.value),
                r.n.to_string(),
                csv(r.delta),
                csv(r.p),
                csv(r.q),
                csv(r.moment_bound),
                csv(r.coverage_bound),
                csv(r.coverage_oracle),
                csv(r.median_margin),
                csv(r.prior_margin),
                csv(r.mean_rbar),
                csv(r.mean_slack),
            ];
            writeln!(w, "{},{}", self.axis, cells.join(","))?;
        }
        Ok(())
    }
}

fn apply(base: &ExperimentConfig, axis: SweepAxis, value: f64) -> Result<ExperimentConfig> {
    let mut cfg = base.clone();
    match axis {
        SweepAxis::N => {
            if !(value >= 1.0) || value.fract() != 0.0 || value > usize::MAX as f64 {
                return Err(Error::Config(format!("n values must be positive integers, got {value}")));
            }
            cfg.n = value as usize;
        }
        SweepAxis::Delta => {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::Config(format!("delta values must lie in (0, 1), got {value}")));
            }
            cfg.delta = value;
        }
        SweepAxis::P => {
            if !(value > 1.0) || !value.is_finite() {
                return Err(Error::Config(format!("p values must be finite and > 1, got {value}")));
            }
            if cfg.p.is_none() {
                return Err(Error::Config("cannot sweep p when the regime derives it".into()));
            }
            cfg.p = Some(value);
        }
    }
    Ok(cfg)
}

pub fn run_sweep(base: &ExperimentConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    let configs = values.iter().map(|&v| apply(base, axis, v)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(values.len());
    for (cfg, &value) in configs.iter().zip(values) {
        let rep = run_coverage(cfg)?;
        rows.push(SweepRow {
            value,
            n: cfg.n,
            delta: rep.assumptions.delta,
            p: rep.assumptions.p,
            q: rep.assumptions.q,
            moment_bound: rep.moment_bound,
            coverage_bound: rep.coverage_bound,
            coverage_oracle: rep.coverage_oracle,
            median_margin: rep.median_margin,
            prior_margin: rep.prior_margin,
            mean_rbar: rep.mean_rbar,
            mean_slack: rep.mean_slack,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let slope = |f: fn(&SweepRow) -> f64| loglog_slope(&xs, &rows.iter().map(f).collect::<Vec<_>>());
    Ok(SweepTable {
        axis,
        slope_median_margin: slope(|r| r.median_margin),
        slope_prior_margin: slope(|r| r.prior_margin),
        rows,
    })
}

/// Ordinary least-squares slope of ln y on ln x. None when fewer than two
/// distinct x values or any value is not positive and finite.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}
