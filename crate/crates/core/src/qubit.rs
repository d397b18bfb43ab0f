//! Qubit states, x-rotation evolution and the sequential (Lüders)
//! measurement probability engine.
//!
//! Dimensionless phases throughout: the evolution between times `t_i` and
//! `t_j` is `U = exp(-i dphi σ_x)` with `dphi = ω (t_j - t_i)`, so only the
//! product `ω τ` ever enters.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::{input_error, Result, TOL_ALGEBRA};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Dense 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[C; 2]; 2],
}

impl Mat2 {
    pub const fn new(e: [[C; 2]; 2]) -> Self {
        Mat2 { e }
    }

    pub const fn zero() -> Self {
        Mat2::new([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Mat2::new([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn sigma_x() -> Self {
        Mat2::new([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn sigma_y() -> Self {
        Mat2::new([[ZERO, C::new(0.0, -1.0)], [C::new(0.0, 1.0), ZERO]])
    }

    pub fn sigma_z() -> Self {
        Mat2::new([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] += rhs.e[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] -= rhs.e[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2::new([
            [self.e[0][0].conj(), self.e[1][0].conj()],
            [self.e[0][1].conj(), self.e[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> C {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> C {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.sub(&self.adjoint());
        d.e.iter().flatten().all(|c| c.norm() <= 2.0 * tol)
    }

    /// `n̂·σ` for a Bloch vector `n̂`.
    pub fn bloch_dot_sigma(n: [f64; 3]) -> Mat2 {
        Mat2::new([
            [C::new(n[2], 0.0), C::new(n[0], -n[1])],
            [C::new(n[0], n[1]), C::new(-n[2], 0.0)],
        ])
    }

    /// Projector onto the `sign`-eigenspace of `n̂·σ`: `(I ± n̂·σ)/2`.
    pub fn projector(n: [f64; 3], sign: i8) -> Mat2 {
        let s = if sign >= 0 { 0.5 } else { -0.5 };
        Mat2::identity()
            .scale(C::new(0.5, 0.0))
            .add(&Mat2::bloch_dot_sigma(n).scale(C::new(s, 0.0)))
    }
}

/// Qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho: Mat2,
}

impl QubitState {
    pub fn new(rho: Mat2) -> Result<Self> {
        if rho.e.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return input_error("state has non-finite entries");
        }
        if !rho.is_hermitian(TOL_ALGEBRA) {
            return input_error("state is not Hermitian");
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TOL_ALGEBRA || tr.im.abs() > TOL_ALGEBRA {
            return input_error("state trace is not 1");
        }
        // Hermitian 2x2: eigenvalues tr/2 ± sqrt((tr/2)^2 - det).
        let half = tr.re / 2.0;
        let disc = (half * half - rho.det().re).max(0.0);
        if half - libm::sqrt(disc) < -TOL_ALGEBRA {
            return input_error("state is not positive semidefinite");
        }
        Ok(QubitState { rho })
    }

    pub fn rho(&self) -> &Mat2 {
        &self.rho
    }

    /// Pure state `cos θ |0⟩ + e^{-iφ} sin θ |1⟩`.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return input_error("non-finite state angles");
        }
        let a = C::new(libm::cos(theta), 0.0);
        let b = C::from_polar(libm::sin(theta), -phi);
        let rho = Mat2::new([
            [a * a.conj(), a * b.conj()],
            [b * a.conj(), b * b.conj()],
        ]);
        QubitState::new(rho)
    }

    /// `|0⟩⟨0|`.
    pub fn zero() -> Self {
        QubitState { rho: Mat2::new([[ONE, ZERO], [ZERO, ZERO]]) }
    }

    /// `|1⟩⟨1|`.
    pub fn one() -> Self {
        QubitState { rho: Mat2::new([[ZERO, ZERO], [ZERO, ONE]]) }
    }

    /// `|+⟩⟨+|` with `|+⟩ = (|0⟩+|1⟩)/√2`, the +1 eigenstate of σ_x.
    /// Stationary under the x-rotation evolution.
    pub fn plus() -> Self {
        let h = C::new(0.5, 0.0);
        QubitState { rho: Mat2::new([[h, h], [h, h]]) }
    }

    /// Maximally mixed state `I/2`.
    pub fn maximally_mixed() -> Self {
        let h = C::new(0.5, 0.0);
        QubitState { rho: Mat2::new([[h, ZERO], [ZERO, h]]) }
    }
}

/// Measurement plan: nondecreasing dimensionless phases `φ_i = ω t_i`
/// and the measured observable as a unit Bloch vector (default σ_z).
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    phases: Vec<f64>,
    observable: [f64; 3],
}

impl Schedule {
    pub fn new(phases: Vec<f64>, observable: [f64; 3]) -> Result<Self> {
        let n = phases.len();
        if !(2..=4).contains(&n) {
            return input_error("schedule must have 2 to 4 measurement times");
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return input_error("non-finite phase in schedule");
        }
        if phases.windows(2).any(|w| w[1] < w[0]) {
            return input_error("phases must be nondecreasing");
        }
        let norm = libm::sqrt(observable.iter().map(|x| x * x).sum());
        if !norm.is_finite() || (norm - 1.0).abs() > TOL_ALGEBRA {
            return input_error("observable Bloch vector must have unit norm");
        }
        Ok(Schedule { phases, observable })
    }

    /// σ_z measured at every time.
    pub fn sigma_z(phases: Vec<f64>) -> Result<Self> {
        Schedule::new(phases, [0.0, 0.0, 1.0])
    }

    /// σ_z measurements at phases `0, dphi, 2·dphi, …`.
    pub fn equal_spacing(n_times: usize, dphi: f64) -> Result<Self> {
        if !dphi.is_finite() || dphi < 0.0 {
            return input_error("equal spacing must be finite and nonnegative");
        }
        Schedule::sigma_z((0..n_times).map(|i| i as f64 * dphi).collect())
    }

    pub fn n_times(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn observable(&self) -> [f64; 3] {
        self.observable
    }
}

/// The subset of schedule indices actually measured in a run, 1-based,
/// stored sorted ascending. Measurement order is time order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    indices: Vec<u8>,
}

impl Context {
    pub fn new(indices: &[u8], n_times: usize) -> Result<Self> {
        if indices.is_empty() {
            return input_error("context must be nonempty");
        }
        let mut sorted: Vec<u8> = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return input_error("context indices must be distinct");
        }
        if sorted[0] < 1 || *sorted.last().unwrap() as usize > n_times {
            return input_error("context index out of schedule range");
        }
        Ok(Context { indices: sorted })
    }

    /// Context from a bitmask over times (bit 0 ↔ index 1).
    pub fn from_mask(mask: u16, n_times: usize) -> Result<Self> {
        let indices: Vec<u8> =
            (0..n_times as u8).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        Context::new(&indices, n_times)
    }

    /// All `2^n - 1` nonempty contexts, ordered by bitmask.
    pub fn all(n_times: usize) -> Vec<Context> {
        (1u16..1 << n_times)
            .map(|m| Context::from_mask(m, n_times).unwrap())
            .collect()
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn arity(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, index: u8) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// Position of a time index within this context, if measured.
    pub fn position(&self, index: u8) -> Option<usize> {
        self.indices.binary_search(&index).ok()
    }
}

/// Probability table over `{±1}^arity` outcome strings.
///
/// Outcome strings are indexed in time order with `+1 → 0, -1 → 1`; the
/// first measured outcome is the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    arity: usize,
    probs: Vec<f64>,
}

impl ProbTable {
    pub fn new(arity: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1 << arity {
            return input_error("probability table has wrong length");
        }
        if probs.iter().any(|p| !p.is_finite() || *p < -TOL_ALGEBRA) {
            return input_error("probability table entries must be nonnegative");
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TOL_ALGEBRA {
            return input_error("probability table must sum to 1");
        }
        Ok(ProbTable { arity, probs })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Outcome value (+1 or -1) at a position of an outcome string.
    pub fn outcome_value(outcome: usize, arity: usize, position: usize) -> f64 {
        if outcome >> (arity - 1 - position) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Marginal table keeping only the given (sorted) positions.
    pub fn marginalize(&self, keep: &[usize]) -> ProbTable {
        let k = keep.len();
        let mut probs = vec![0.0; 1 << k];
        for o in 0..self.probs.len() {
            let mut sub = 0usize;
            for (p, &pos) in keep.iter().enumerate() {
                let bit = o >> (self.arity - 1 - pos) & 1;
                sub |= bit << (k - 1 - p);
            }
            probs[sub] += self.probs[o];
        }
        ProbTable { arity: k, probs }
    }

    /// Signed moment `⟨∏_{p∈positions} M_p⟩` of the table.
    pub fn moment(&self, positions: &[usize]) -> f64 {
        let mut acc = 0.0;
        for o in 0..self.probs.len() {
            let mut sign = 1.0;
            for &p in positions {
                sign *= Self::outcome_value(o, self.arity, p);
            }
            acc += sign * self.probs[o];
        }
        acc
    }
}

fn rotate_x(rho: &Mat2, dphi: f64) -> Mat2 {
    // U = cos(dphi) I - i sin(dphi) σ_x
    let u = Mat2::identity()
        .scale(C::new(libm::cos(dphi), 0.0))
        .add(&Mat2::sigma_x().scale(C::new(0.0, -libm::sin(dphi))));
    u.mul(rho).mul(&u.adjoint())
}

/// Unitary x-rotation evolution of a state by a phase increment.
pub fn evolve(state: &QubitState, dphi: f64) -> Result<QubitState> {
    if !dphi.is_finite() {
        return input_error("non-finite evolution phase");
    }
    QubitState::new(rotate_x(state.rho(), dphi))
}

/// Joint distribution of the measurements selected by `context`, obtained
/// by alternating unitary evolution and Lüders projection.
///
/// The state is taken at the first scheduled time `φ_1`; unmeasured times
/// contribute only free evolution. A zero-probability branch carries zero
/// weight through all of its descendants (no renormalization is ever done).
pub fn sequential_distribution(
    state: &QubitState,
    schedule: &Schedule,
    context: &Context,
) -> Result<ProbTable> {
    if *context.indices().last().unwrap() as usize > schedule.n_times() {
        return input_error("context index exceeds schedule length");
    }
    let n = schedule.observable();
    let proj = [Mat2::projector(n, 1), Mat2::projector(n, -1)];
    let arity = context.arity();
    let mut probs = vec![0.0; 1 << arity];

    // Branch states carry their weight unnormalized.
    let mut branches: Vec<(usize, Mat2)> = vec![(0, *state.rho())];
    let mut cursor = schedule.phases()[0];
    for &idx in context.indices() {
        let phase = schedule.phases()[idx as usize - 1];
        let dphi = phase - cursor;
        cursor = phase;
        let mut next = Vec::with_capacity(branches.len() * 2);
        for (code, rho) in branches {
            let evolved = rotate_x(&rho, dphi);
            for (bit, p) in proj.iter().enumerate() {
                next.push((code << 1 | bit, p.mul(&evolved).mul(p)));
            }
        }
        branches = next;
    }
    for (code, rho) in branches {
        probs[code] = rho.trace().re.max(0.0);
    }
    ProbTable::new(arity, probs)
}

/// Disturbed expectation `⟨M_target^{(priors)}⟩`: the mean outcome at
/// `target` when the measurements in `priors` were performed (and
/// marginalized) beforehand.
pub fn disturbed_expectation(
    state: &QubitState,
    schedule: &Schedule,
    target: u8,
    priors: &[u8],
) -> Result<f64> {
    if priors.iter().any(|&p| p >= target) {
        return input_error("prior measurements must precede the target in time order");
    }
    let mut indices: Vec<u8> = priors.to_vec();
    indices.push(target);
    let context = Context::new(&indices, schedule.n_times())?;
    let table = sequential_distribution(state, schedule, &context)?;
    let pos = context.position(target).unwrap();
    Ok(table.moment(&[pos]))
}

/// Two-point correlator `⟨M_i M_j⟩` in the context where exactly
/// `{i} ∪ intermediates ∪ {j}` are measured.
pub fn correlator(
    state: &QubitState,
    schedule: &Schedule,
    i: u8,
    j: u8,
    intermediates: &[u8],
) -> Result<f64> {
    if i >= j {
        return input_error("correlator requires i < j");
    }
    if intermediates.iter().any(|&k| k <= i || k >= j) {
        return input_error("intermediate measurements must lie strictly between i and j");
    }
    let mut indices: Vec<u8> = intermediates.to_vec();
    indices.push(i);
    indices.push(j);
    let context = Context::new(&indices, schedule.n_times())?;
    let table = sequential_distribution(state, schedule, &context)?;
    let pi = context.position(i).unwrap();
    let pj = context.position(j).unwrap();
    Ok(table.moment(&[pi, pj]))
}

/// Heisenberg-picture observable at schedule index `i` (1-based):
/// `U† (n̂·σ) U` with `U` the free evolution from `φ_1` to `φ_i`.
pub fn heisenberg_observable(schedule: &Schedule, i: u8) -> Result<Mat2> {
    if i < 1 || i as usize > schedule.n_times() {
        return input_error("observable index out of schedule range");
    }
    let dphi = schedule.phases()[i as usize - 1] - schedule.phases()[0];
    let u = Mat2::identity()
        .scale(C::new(libm::cos(dphi), 0.0))
        .add(&Mat2::sigma_x().scale(C::new(0.0, -libm::sin(dphi))));
    let m = Mat2::bloch_dot_sigma(schedule.observable());
    Ok(u.adjoint().mul(&m).mul(&u))
}
