use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::DriveParams;
use crate::reduction::{resonance_detuning, LadderKind};

use super::{BlockadeReport, RunSettings, Scenario};

/// A drive parameter that a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Omega1,
    Omega2,
    Delta,
    BigDelta,
    NAtoms,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::Omega1 => "omega1",
            SweepAxis::Omega2 => "omega2",
            SweepAxis::Delta => "delta",
            SweepAxis::BigDelta => "big_delta",
            SweepAxis::NAtoms => "n_atoms",
        }
    }

    pub fn value(&self, p: &DriveParams) -> f64 {
        match self {
            SweepAxis::Omega1 => p.omega1(),
            SweepAxis::Omega2 => p.omega2(),
            SweepAxis::Delta => p.delta(),
            SweepAxis::BigDelta => p.big_delta(),
            SweepAxis::NAtoms => p.n_atoms() as f64,
        }
    }

    fn apply(&self, p: DriveParams, v: f64) -> Result<DriveParams> {
        match self {
            SweepAxis::Omega1 => p.with_omega1(v),
            SweepAxis::Omega2 => p.with_omega2(v),
            SweepAxis::Delta => p.with_delta(v),
            SweepAxis::BigDelta => p.with_big_delta(v),
            SweepAxis::NAtoms => {
                if v.fract() != 0.0 || v < 1.0 {
                    return Err(Error::InvalidParams(format!("n_atoms must be a positive integer, got {v}")));
                }
                p.with_n_atoms(v as usize)
            }
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega1" => Ok(SweepAxis::Omega1),
            "omega2" => Ok(SweepAxis::Omega2),
            "delta" => Ok(SweepAxis::Delta),
            "big_delta" => Ok(SweepAxis::BigDelta),
            "n_atoms" => Ok(SweepAxis::NAtoms),
            other => Err(Error::InvalidConfig(format!("unknown sweep axis {other:?}"))),
        }
    }
}

/// Cartesian product of `axes` applied to `base`, first axis slowest.
/// With `resonant` set, Δ is moved to the first-order Raman resonance at
/// every point.
pub fn build_grid(base: DriveParams, axes: &[(SweepAxis, Vec<f64>)], resonant: Option<LadderKind>) -> Result<Vec<DriveParams>> {
    let mut grid = vec![base];
    for (axis, values) in axes {
        if values.is_empty() {
            return Err(Error::EmptyGrid);
        }
        grid = grid
            .into_iter()
            .flat_map(|p| values.iter().map(move |&v| axis.apply(p, v)))
            .collect::<Result<Vec<_>>>()?;
    }
    if let Some(ladder) = resonant {
        grid = grid
            .into_iter()
            .map(|p| p.with_big_delta(resonance_detuning(&p, ladder)?))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(grid)
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub index: usize,
    pub params: DriveParams,
    pub outcome: Result<BlockadeReport>,
}

/// Runs `scenario` at every grid point in parallel. Rows come back in grid
/// order; a failing point records its error without stopping the rest.
/// `threads` caps the worker count.
pub fn sweep(grid: &[DriveParams], scenario: Scenario, settings: &RunSettings, threads: Option<usize>) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let work = || {
        grid.par_iter()
            .enumerate()
            .map(|(index, p)| SweepRow {
                index,
                params: *p,
                outcome: scenario.run(p, settings).map(|r| r.report),
            })
            .collect::<Vec<_>>()
    };
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}
