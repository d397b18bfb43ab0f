//! Grid sweeps: one quantum behavior per phase gap, evaluated against the
//! requested inequality families, the feasibility oracle and the marginal
//! equality conditions.

use macroreal::behavior::quantum_behavior;
use macroreal::catalog::{family_max, Family};
use macroreal::oracle::{joint_feasible, nsit_check, NsitCondition};
use macroreal::qubit::{QubitState, Schedule};
use rayon::prelude::*;

use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub phase: f64,
    /// Family maxima in the order the families were requested.
    pub family_max: Vec<f64>,
    pub oracle_feasible: bool,
    /// Residuals in `NsitCondition::all` order.
    pub nsit: Vec<f64>,
}

pub fn nsit_columns(n_times: usize) -> Vec<String> {
    NsitCondition::all(n_times)
        .iter()
        .map(|c| format!("nsit_{}", c.name()))
        .collect()
}

pub fn evaluate_point(
    state: &QubitState,
    n_times: usize,
    phase: f64,
    families: &[Family],
) -> Result<ScanRecord> {
    let sched = Schedule::equal_spacing(n_times, phase)
        .map_err(|e| CliError::input(format!("phase {phase}: {e}")))?;
    let behavior = quantum_behavior(state, &sched)?;
    let mut maxima = Vec::with_capacity(families.len());
    for fam in families {
        let (max, _) = family_max(*fam, &behavior)?;
        maxima.push(max);
    }
    let verdict = joint_feasible(&behavior)?;
    let nsit = NsitCondition::all(n_times)
        .into_iter()
        .map(|c| nsit_check(&behavior, c).map(|r| r.residual))
        .collect::<macroreal::Result<Vec<f64>>>()?;
    Ok(ScanRecord {
        phase,
        family_max: maxima,
        oracle_feasible: verdict.feasible,
        nsit,
    })
}

/// Evaluate every grid point in parallel; output is ordered by phase
/// regardless of completion order, and any failure aborts the whole scan
/// tagged with the offending phase.
pub fn scan(
    state: &QubitState,
    n_times: usize,
    points: &[f64],
    families: &[Family],
) -> Result<Vec<ScanRecord>> {
    points
        .par_iter()
        .map(|&phase| evaluate_point(state, n_times, phase, families))
        .collect()
}

/// Sequential reference implementation used to check the parallel path.
pub fn scan_sequential(
    state: &QubitState,
    n_times: usize,
    points: &[f64],
    families: &[Family],
) -> Result<Vec<ScanRecord>> {
    points
        .iter()
        .map(|&phase| evaluate_point(state, n_times, phase, families))
        .collect()
}
