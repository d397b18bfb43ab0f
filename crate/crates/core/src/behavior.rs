//! Context-indexed probability tables and their moments.
//!
//! A [`Behavior`] holds one outcome distribution per nonempty subset of
//! measurement times (7 tables for three times, 15 for four). Quantum
//! behaviors come from the sequential measurement engine; macrorealist
//! behaviors come from marginalizing an explicit joint distribution, in
//! which case every table is context-independent by construction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::qubit::{sequential_distribution, Context, ProbTable, QubitState, Schedule};
use crate::{input_error, Result, TOL_ALGEBRA};

/// Full joint distribution over `{±1}^n` outcome strings, indexed with the
/// same time-order, `+1 → 0` bit convention as [`ProbTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n_times: usize,
    atoms: Vec<f64>,
}

impl JointDistribution {
    pub fn new(n_times: usize, atoms: Vec<f64>) -> Result<Self> {
        if !(2..=4).contains(&n_times) {
            return input_error("joint distribution must cover 2 to 4 times");
        }
        if atoms.len() != 1 << n_times {
            return input_error("joint distribution has wrong length");
        }
        if atoms.iter().any(|p| !p.is_finite() || *p < -TOL_ALGEBRA) {
            return input_error("joint distribution atoms must be nonnegative");
        }
        let sum: f64 = atoms.iter().sum();
        if (sum - 1.0).abs() > TOL_ALGEBRA {
            return input_error("joint distribution must sum to 1");
        }
        Ok(JointDistribution { n_times, atoms })
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// Marginal table on a context.
    pub fn marginal(&self, context: &Context) -> ProbTable {
        let positions: Vec<usize> =
            context.indices().iter().map(|&i| i as usize - 1).collect();
        let full = ProbTable::new(self.n_times, self.atoms.clone())
            .expect("joint atoms validated at construction");
        full.marginalize(&positions)
    }
}

/// All experimentally accessible statistics: one probability table per
/// nonempty context. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    n_times: usize,
    tables: BTreeMap<Context, ProbTable>,
}

impl Behavior {
    pub fn new(n_times: usize, tables: BTreeMap<Context, ProbTable>) -> Result<Self> {
        if !(2..=4).contains(&n_times) {
            return input_error("behavior must cover 2 to 4 times");
        }
        let all = Context::all(n_times);
        if tables.len() != all.len() {
            return input_error("behavior must contain every nonempty context");
        }
        for ctx in &all {
            match tables.get(ctx) {
                Some(t) if t.arity() == ctx.arity() => {}
                Some(_) => return input_error("table arity does not match its context"),
                None => return input_error("behavior is missing a context"),
            }
        }
        Ok(Behavior { n_times, tables })
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn contexts(&self) -> impl Iterator<Item = &Context> {
        self.tables.keys()
    }

    pub fn table(&self, context: &Context) -> Result<&ProbTable> {
        self.tables
            .get(context)
            .ok_or_else(|| crate::Error::InvalidInput("missing context".into()))
    }

    /// `γ_i = P(m_i = +1)` from the single-measurement context `{i}`.
    pub fn gamma_single(&self, i: u8) -> Result<f64> {
        let ctx = Context::new(&[i], self.n_times)?;
        Ok(self.table(&ctx)?.prob(0))
    }

    /// `γ_ij = P(m_i = +1, m_j = -1) + P(m_i = -1, m_j = +1)` from the
    /// pair context `{i, j}`.
    pub fn gamma_anti(&self, i: u8, j: u8) -> Result<f64> {
        if i >= j {
            return input_error("gamma_anti requires i < j");
        }
        let ctx = Context::new(&[i, j], self.n_times)?;
        let t = self.table(&ctx)?;
        Ok(t.prob(0b01) + t.prob(0b10))
    }
}

/// Behavior generated by sequential quantum measurement: every context's
/// table is produced by the Lüders engine.
pub fn quantum_behavior(state: &QubitState, schedule: &Schedule) -> Result<Behavior> {
    let n = schedule.n_times();
    let mut tables = BTreeMap::new();
    for ctx in Context::all(n) {
        let table = sequential_distribution(state, schedule, &ctx)?;
        tables.insert(ctx, table);
    }
    Behavior::new(n, tables)
}

/// Macrorealist behavior: every context's table is a marginal of one global
/// joint distribution, so all no-signaling-in-time conditions hold exactly.
pub fn mr_behavior(joint: &JointDistribution) -> Result<Behavior> {
    let n = joint.n_times();
    let mut tables = BTreeMap::new();
    for ctx in Context::all(n) {
        let table = joint.marginal(&ctx);
        tables.insert(ctx, table);
    }
    Behavior::new(n, tables)
}

/// All signed moments of one context's table: `values[mask]` holds
/// `⟨∏ M_i⟩` over the positions selected by `mask` (bit `p` selects the
/// `p`-th measured time of the context). `values[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    indices: Vec<u8>,
    values: Vec<f64>,
}

impl MomentVector {
    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    /// Moment over a set of time indices (must belong to the context).
    pub fn moment(&self, indices: &[u8]) -> Result<f64> {
        let mut mask = 0usize;
        for &i in indices {
            match self.indices.iter().position(|&j| j == i) {
                Some(p) => mask |= 1 << p,
                None => return input_error("moment index not in context"),
            }
        }
        Ok(self.values[mask])
    }

    /// Single expectation `⟨M_i⟩` within this context (disturbed by the
    /// context's earlier measurements when quantum-generated).
    pub fn single(&self, i: u8) -> Result<f64> {
        self.moment(&[i])
    }

    /// Pair correlator `⟨M_i M_j⟩` within this context.
    pub fn pair(&self, i: u8, j: u8) -> Result<f64> {
        self.moment(&[i, j])
    }

    /// Reconstruct the probability table from the moments:
    /// `P(o) = 2^{-k} Σ_S (∏_{p∈S} o_p) ⟨∏_S M⟩`.
    pub fn reconstruct(&self) -> ProbTable {
        let k = self.indices.len();
        let mut probs = vec![0.0; 1 << k];
        for (o, slot) in probs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (mask, v) in self.values.iter().enumerate() {
                let mut sign = 1.0;
                for p in 0..k {
                    if mask >> p & 1 == 1 {
                        sign *= ProbTable::outcome_value(o, k, p);
                    }
                }
                acc += sign * v;
            }
            *slot = acc / (1 << k) as f64;
        }
        ProbTable::new(k, probs).expect("moment reconstruction is a valid table")
    }
}

/// Moments of one context of a behavior.
pub fn moments(behavior: &Behavior, context: &Context) -> Result<MomentVector> {
    let table = behavior.table(context)?;
    let k = context.arity();
    let mut values = vec![0.0; 1 << k];
    for (mask, slot) in values.iter_mut().enumerate() {
        let positions: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 1).collect();
        *slot = table.moment(&positions);
    }
    Ok(MomentVector { indices: context.indices().to_vec(), values })
}
