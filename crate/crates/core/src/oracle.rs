//! Exact macrorealism decision: joint-distribution feasibility over all
//! contexts, and no-signaling-in-time (NSIT) equality residuals.
//!
//! Feasibility asks for `q ≥ 0` over the `2^n` outcome strings with
//! `Σ q = 1` whose marginal on every context equals that context's table.
//! The system is small (≤ 16 variables, ≤ 81 equality rows), so a dense
//! phase-1 simplex with Bland's anti-cycling rule decides it exactly at
//! tolerance 1e-9.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::behavior::{Behavior, JointDistribution};
use crate::qubit::Context;
use crate::{input_error, Error, Result, TOL_SOLVER};

/// Outcome of the feasibility decision. If feasible, `witness` marginalizes
/// back to every behavior table within the solver tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict {
    pub feasible: bool,
    pub witness: Option<JointDistribution>,
    /// Largest absolute constraint violation at the solver's final point.
    pub max_residual: f64,
}

/// The NSIT equality conditions checked by [`nsit_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsitCondition {
    /// `NSIT_(i)j`: the statistics of `M_j` alone equal the `j`-marginal of
    /// the sequential `(i, j)` run.
    TwoTime { earlier: u8, later: u8 },
    /// `NSIT_(1)23`: the pair table of `(2, 3)` equals the `m_1`-marginal
    /// of the full three-time run.
    LeadingThreeTime,
    /// `NSIT_1(2)3`: the pair table of `(1, 3)` equals the `m_2`-marginal
    /// of the full three-time run.
    MiddleThreeTime,
}

impl NsitCondition {
    pub fn name(&self) -> String {
        match self {
            NsitCondition::TwoTime { earlier, later } => format!("({earlier}){later}"),
            NsitCondition::LeadingThreeTime => String::from("(1)23"),
            NsitCondition::MiddleThreeTime => String::from("1(2)3"),
        }
    }

    /// All conditions applicable to a behavior over `n` times: every
    /// two-time pair, plus the two three-time conditions when `n = 3`.
    pub fn all(n_times: usize) -> Vec<NsitCondition> {
        let mut out = Vec::new();
        for i in 1..=n_times as u8 {
            for j in i + 1..=n_times as u8 {
                out.push(NsitCondition::TwoTime { earlier: i, later: j });
            }
        }
        if n_times == 3 {
            out.push(NsitCondition::LeadingThreeTime);
            out.push(NsitCondition::MiddleThreeTime);
        }
        out
    }
}

/// Residual of one NSIT condition on a behavior.
#[derive(Debug, Clone, PartialEq)]
pub struct NsitReport {
    pub condition: NsitCondition,
    /// Max absolute discrepancy over outcome strings; 0 for MR behaviors.
    pub residual: f64,
}

/// Compare a coarse-context table against the marginal of a finer one.
pub fn nsit_check(behavior: &Behavior, condition: NsitCondition) -> Result<NsitReport> {
    let n = behavior.n_times();
    let (coarse, fine, keep): (Context, Context, Vec<usize>) = match condition {
        NsitCondition::TwoTime { earlier, later } => {
            if earlier >= later {
                return input_error("two-time NSIT requires earlier < later");
            }
            let fine = Context::new(&[earlier, later], n)?;
            (Context::new(&[later], n)?, fine, vec![1])
        }
        NsitCondition::LeadingThreeTime => {
            if n != 3 {
                return input_error("NSIT_(1)23 requires a three-time behavior");
            }
            (Context::new(&[2, 3], 3)?, Context::new(&[1, 2, 3], 3)?, vec![1, 2])
        }
        NsitCondition::MiddleThreeTime => {
            if n != 3 {
                return input_error("NSIT_1(2)3 requires a three-time behavior");
            }
            (Context::new(&[1, 3], 3)?, Context::new(&[1, 2, 3], 3)?, vec![0, 2])
        }
    };
    let coarse_table = behavior.table(&coarse)?;
    let marginal = behavior.table(&fine)?.marginalize(&keep);
    let residual = (0..coarse_table.len())
        .map(|o| (coarse_table.prob(o) - marginal.prob(o)).abs())
        .fold(0.0f64, f64::max);
    Ok(NsitReport { condition, residual })
}

/// Does a global joint distribution reproduce every context table?
pub fn joint_feasible(behavior: &Behavior) -> Result<OracleVerdict> {
    let n = behavior.n_times();
    let n_atoms = 1usize << n;

    // Equality system A q = b: one row per (context, outcome) plus the
    // normalization row.
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for ctx in Context::all(n) {
        let table = behavior.table(&ctx)?;
        let k = ctx.arity();
        for o in 0..table.len() {
            let mut row = vec![0.0; n_atoms];
            for (s, slot) in row.iter_mut().enumerate() {
                let matches = ctx.indices().iter().enumerate().all(|(p, &t)| {
                    s >> (n - t as usize) & 1 == o >> (k - 1 - p) & 1
                });
                if matches {
                    *slot = 1.0;
                }
            }
            rows.push(row);
            rhs.push(table.prob(o).max(0.0));
        }
    }
    rows.push(vec![1.0; n_atoms]);
    rhs.push(1.0);

    let q = phase1_simplex(&rows, &rhs, n_atoms)?;

    let max_residual = rows
        .iter()
        .zip(&rhs)
        .map(|(row, &b)| {
            let ax: f64 = row.iter().zip(&q).map(|(a, x)| a * x).sum();
            (ax - b).abs()
        })
        .fold(0.0f64, f64::max);

    if max_residual <= TOL_SOLVER {
        // Renormalize away solver noise before constructing the witness.
        let sum: f64 = q.iter().sum();
        let atoms: Vec<f64> = q.iter().map(|x| (x / sum).max(0.0)).collect();
        let witness = JointDistribution::new(n, atoms)?;
        Ok(OracleVerdict { feasible: true, witness: Some(witness), max_residual })
    } else {
        Ok(OracleVerdict { feasible: false, witness: None, max_residual })
    }
}

/// The three-time macrorealism criterion: the conjunction of NSIT_(2)3,
/// NSIT_(1)23 and NSIT_1(2)3.
pub fn mr_verdict(behavior: &Behavior) -> Result<bool> {
    if behavior.n_times() != 3 {
        return input_error("the conjunction criterion is stated for three times");
    }
    let conditions = [
        NsitCondition::TwoTime { earlier: 2, later: 3 },
        NsitCondition::LeadingThreeTime,
        NsitCondition::MiddleThreeTime,
    ];
    for c in conditions {
        if nsit_check(behavior, c)?.residual > TOL_SOLVER {
            return Ok(false);
        }
    }
    Ok(true)
}

const PIVOT_EPS: f64 = 1e-12;

/// Minimize the sum of artificial variables for `A x = b, x ≥ 0` (`b ≥ 0`)
/// and return the structural part of the final basic solution.
fn phase1_simplex(rows: &[Vec<f64>], rhs: &[f64], n_vars: usize) -> Result<Vec<f64>> {
    let m = rows.len();
    let n_total = n_vars + m;
    // Tableau: structural columns, artificial columns, rhs.
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let mut r = vec![0.0; n_total + 1];
        r[..n_vars].copy_from_slice(row);
        r[n_vars + i] = 1.0;
        r[n_total] = rhs[i];
        t.push(r);
    }
    let mut basis: Vec<usize> = (n_vars..n_total).collect();

    let max_iters = 50 * (m + n_vars).max(100);
    for _ in 0..max_iters {
        // Reduced costs for cost vector c = (0 … 0, 1 … 1).
        let mut entering = None;
        'cols: for j in 0..n_total {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = if j >= n_vars { 1.0 } else { 0.0 };
            for i in 0..m {
                if basis[i] >= n_vars {
                    rc -= t[i][j];
                }
            }
            if rc < -PIVOT_EPS {
                entering = Some(j);
                break 'cols; // Bland: lowest eligible index.
            }
        }
        let Some(j) = entering else {
            // Optimal; extract structural solution.
            let mut x = vec![0.0; n_vars];
            for i in 0..m {
                if basis[i] < n_vars {
                    x[basis[i]] = t[i][n_total];
                }
            }
            return Ok(x);
        };

        // Ratio test; ties broken by lowest basis variable index (Bland).
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][j] > PIVOT_EPS {
                let ratio = t[i][n_total] / t[i][j];
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - PIVOT_EPS
                            || (ratio < lr + PIVOT_EPS && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            return Err(Error::Solver(String::from(
                "phase-1 column unbounded; constraint matrix is malformed",
            )));
        };

        // Pivot.
        let pv = t[pivot_row][j];
        for v in t[pivot_row].iter_mut() {
            *v /= pv;
        }
        for i in 0..m {
            if i != pivot_row && t[i][j].abs() > 0.0 {
                let f = t[i][j];
                for k in 0..=n_total {
                    let delta = f * t[pivot_row][k];
                    t[i][k] -= delta;
                }
                t[i][j] = 0.0;
            }
        }
        basis[pivot_row] = j;
    }
    Err(Error::Solver(String::from("phase-1 simplex did not converge")))
}
