//! Derivative-free maximization: a coarse grid pass followed by a
//! contracting pattern search. Deterministic for a fixed configuration.

use macroreal::behavior::quantum_behavior;
use macroreal::bell::{chsh_max, quantum_bell_behavior, singlet};
use macroreal::catalog::{family_max, Family};
use macroreal::qubit::{QubitState, Schedule};
use rayon::prelude::*;

use crate::{CliError, Result};

/// Parameters a three-or-more-time maximization may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FreeParam {
    /// Polar angle of the initial pure state.
    Theta,
    /// Azimuthal angle of the initial pure state.
    PhiState,
    /// Equal spacing between consecutive measurement phases.
    Phase,
}

impl std::str::FromStr for FreeParam {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(FreeParam::Theta),
            "phi" => Ok(FreeParam::PhiState),
            "phase" => Ok(FreeParam::Phase),
            other => Err(CliError::input(format!(
                "unknown free parameter {other:?}; expected theta, phi or phase"
            ))),
        }
    }
}

impl FreeParam {
    fn bounds(&self) -> (f64, f64) {
        match self {
            FreeParam::Theta => (0.0, std::f64::consts::PI),
            FreeParam::PhiState => (0.0, 2.0 * std::f64::consts::PI),
            FreeParam::Phase => (1e-4, std::f64::consts::PI),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Maximum {
    pub value: f64,
    /// Values of the free parameters, in the order they were requested.
    pub argmax: Vec<f64>,
}

/// Coarse grid (at least `grid_points` per free dimension) followed by a
/// contracting pattern search down to `PARAM_TOL` in each parameter.
const PARAM_TOL: f64 = 1e-8;

fn pattern_search<F>(
    objective: &F,
    bounds: &[(f64, f64)],
    start: Vec<f64>,
    mut step: f64,
) -> Maximum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut best = start;
    let mut best_val = objective(&best);
    while step > PARAM_TOL {
        let mut improved = false;
        for dim in 0..best.len() {
            for dir in [-1.0, 1.0] {
                let mut candidate = best.clone();
                candidate[dim] =
                    (candidate[dim] + dir * step).clamp(bounds[dim].0, bounds[dim].1);
                let v = objective(&candidate);
                if v > best_val {
                    best_val = v;
                    best = candidate;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Maximum { value: best_val, argmax: best }
}

fn grid_then_refine<F>(objective: F, bounds: &[(f64, f64)], grid_points: usize) -> Maximum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dims = bounds.len();
    let total: usize = grid_points.pow(dims as u32);
    let coords = |mut flat: usize| -> Vec<f64> {
        let mut point = vec![0.0; dims];
        for d in (0..dims).rev() {
            let i = flat % grid_points;
            flat /= grid_points;
            let (lo, hi) = bounds[d];
            point[d] = lo + (hi - lo) * i as f64 / (grid_points - 1) as f64;
        }
        point
    };
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|flat| objective(&coords(flat)))
        .collect();
    let coarse_best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // The objective may have several equally good basins; refine every
    // near-optimal grid point (capped) and break exact ties by the
    // lexicographically smallest parameter vector, so the result does not
    // depend on which basin happens to win the coarse pass by rounding.
    let starts: Vec<usize> = (0..total)
        .filter(|&flat| values[flat] >= coarse_best - 1e-2)
        .take(32)
        .collect();
    let step = bounds
        .iter()
        .map(|(lo, hi)| (hi - lo) / (grid_points - 1) as f64)
        .fold(0.0f64, f64::max);
    let mut best: Option<Maximum> = None;
    for refined in starts
        .into_par_iter()
        .map(|flat| pattern_search(&objective, bounds, coords(flat), step))
        .collect::<Vec<_>>()
    {
        best = Some(match best {
            None => refined,
            Some(held) => {
                if refined.value > held.value + 1e-9
                    || ((refined.value - held.value).abs() <= 1e-9
                        && refined.argmax < held.argmax)
                {
                    refined
                } else {
                    held
                }
            }
        });
    }
    best.unwrap()
}

/// Maximize a family's best LHS over the chosen free parameters; the fixed
/// values fill in whatever is not free.
pub fn maximize_family(
    family: Family,
    free: &[FreeParam],
    fixed_state: Option<QubitState>,
    fixed_theta: f64,
    fixed_phi: f64,
    fixed_phase: f64,
) -> Result<Maximum> {
    if free.is_empty() {
        return Err(CliError::input("the free parameter set must not be empty"));
    }
    if free.len() != free.iter().collect::<std::collections::BTreeSet<_>>().len() {
        return Err(CliError::input("free parameters must be distinct"));
    }
    if fixed_state.is_some()
        && free
            .iter()
            .any(|f| matches!(f, FreeParam::Theta | FreeParam::PhiState))
    {
        return Err(CliError::input(
            "a named fixed state cannot be combined with free state angles",
        ));
    }
    let n_times = family.n_times();
    let bounds: Vec<(f64, f64)> = free.iter().map(FreeParam::bounds).collect();
    let objective = |point: &[f64]| -> f64 {
        let mut theta = fixed_theta;
        let mut phi = fixed_phi;
        let mut phase = fixed_phase;
        for (param, value) in free.iter().zip(point) {
            match param {
                FreeParam::Theta => theta = *value,
                FreeParam::PhiState => phi = *value,
                FreeParam::Phase => phase = *value,
            }
        }
        let state = match &fixed_state {
            Some(s) => s.clone(),
            None => match QubitState::from_angles(theta, phi) {
                Ok(s) => s,
                Err(_) => return f64::NEG_INFINITY,
            },
        };
        let Ok(sched) = Schedule::equal_spacing(n_times, phase) else {
            return f64::NEG_INFINITY;
        };
        match quantum_behavior(&state, &sched).and_then(|b| family_max(family, &b)) {
            Ok((max, _)) => max,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    Ok(grid_then_refine(objective, &bounds, 101))
}

/// Maximize the best-signs CHSH LHS for the singlet over the four
/// measurement directions (polar angles in the x-z plane).
pub fn maximize_chsh() -> Result<Maximum> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let bounds = vec![(0.0, two_pi); 4];
    let rho = singlet();
    let objective = |angles: &[f64]| -> f64 {
        let dir = |alpha: f64| [alpha.sin(), 0.0, alpha.cos()];
        match quantum_bell_behavior(
            &rho,
            [dir(angles[0]), dir(angles[1])],
            [dir(angles[2]), dir(angles[3])],
        ) {
            Ok(b) => chsh_max(&b),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    Ok(grid_then_refine(objective, &bounds, 17))
}
