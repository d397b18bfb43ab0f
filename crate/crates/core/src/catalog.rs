//! Macrorealist and Leggett-Garg inequality families as explicit linear
//! functionals over behavior atoms, all in the `LHS ≤ 0` convention.
//!
//! Each family is generated from its printed templates over all outcome
//! sign labelings and then deduplicated canonically (two labelings that
//! produce the same functional collapse to one instance). Deduplicated
//! family sizes:
//!
//! | family    | n | instances |
//! |-----------|---|-----------|
//! | LG3       | 3 | 4         |
//! | PAIR_ANTI | 3 | 4         |
//! | WIGNER3   | 3 | 24        |
//! | CH3       | 3 | 24        |
//! | LG2       | 3 | 12        |
//! | PLG2      | 3 | 12        |
//! | VNEW      | 3 | 2         |
//! | LG4       | 4 | 8         |
//! | WIGNER4   | 4 | 64        |
//! | CH4       | 4 | 64        |
//!
//! Mixed-probability inequalities read `P(m_i, m_j)` as the context where
//! only times `i` and `j` are measured and `P(m_i)` as the context `{i}`;
//! correlator-form inequalities (LG2/LG3/LG4) expand each `⟨M_i M_j⟩` (and
//! for LG2 the single moments) inside the corresponding pair context.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::behavior::Behavior;
use crate::qubit::{Context, ProbTable};
use crate::{input_error, Result, TOL_SOLVER};

/// The inequality families of the three-, four- and two-time scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Lg3,
    Lg4,
    PairAnti,
    Wigner3,
    Ch3,
    Wigner4,
    Ch4,
    Lg2,
    Plg2,
    Vnew,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Lg3,
        Family::Lg4,
        Family::PairAnti,
        Family::Wigner3,
        Family::Ch3,
        Family::Wigner4,
        Family::Ch4,
        Family::Lg2,
        Family::Plg2,
        Family::Vnew,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Lg3 => "LG3",
            Family::Lg4 => "LG4",
            Family::PairAnti => "PAIR_ANTI",
            Family::Wigner3 => "WIGNER3",
            Family::Ch3 => "CH3",
            Family::Wigner4 => "WIGNER4",
            Family::Ch4 => "CH4",
            Family::Lg2 => "LG2",
            Family::Plg2 => "PLG2",
            Family::Vnew => "VNEW",
        }
    }

    /// Number of measurement times the family is defined for.
    pub fn n_times(&self) -> usize {
        match self {
            Family::Lg4 | Family::Wigner4 | Family::Ch4 => 4,
            _ => 3,
        }
    }
}

impl core::str::FromStr for Family {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::Error::InvalidInput({
                let mut msg = String::from("unknown family: ");
                msg.push_str(s);
                msg
            }))
    }
}

/// One signed atom of an inequality LHS: `coeff · P_context(outcome)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub context: Context,
    pub outcome: u16,
    pub coeff: f64,
}

/// One member of a family: a linear functional over behavior atoms with
/// the macrorealist bound `LHS ≤ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityInstance {
    pub family: Family,
    /// Canonical index within the deduplicated family; `(family, index)`
    /// is the stable instance id.
    pub index: usize,
    /// Printed template the instance came from (0-based within the family).
    pub variant: u8,
    /// Outcome-label assignment `m_1, …` used to generate the instance.
    pub signs: Vec<i8>,
    pub terms: Vec<Term>,
    pub constant: f64,
}

/// Result of evaluating one instance against a behavior.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub family: Family,
    pub index: usize,
    pub lhs: f64,
    pub violated: bool,
}

// ---------------------------------------------------------------------------
// Expression builder

struct Expr {
    n_times: usize,
    atoms: BTreeMap<(Context, u16), f64>,
    constant: f64,
}

impl Expr {
    fn new(n_times: usize) -> Self {
        Expr { n_times, atoms: BTreeMap::new(), constant: 0.0 }
    }

    fn add_atom(&mut self, indices: &[u8], outcome: u16, coeff: f64) {
        let ctx = Context::new(indices, self.n_times).expect("template context is valid");
        *self.atoms.entry((ctx, outcome)).or_insert(0.0) += coeff;
    }

    /// `coeff · P(m_i = si, m_j = sj)` in context `{i, j}` (i < j).
    fn pair_prob(&mut self, i: u8, j: u8, si: i8, sj: i8, coeff: f64) {
        let outcome = (bit(si) << 1 | bit(sj)) as u16;
        self.add_atom(&[i, j], outcome, coeff);
    }

    /// `coeff · P(m_i = si)` in context `{i}`.
    fn single_prob(&mut self, i: u8, si: i8, coeff: f64) {
        self.add_atom(&[i], bit(si) as u16, coeff);
    }

    /// `sign · ⟨M_i M_j⟩` expanded over the atoms of context `{i, j}`.
    fn pair_correlator(&mut self, i: u8, j: u8, sign: f64) {
        for a in [1i8, -1] {
            for b in [1i8, -1] {
                self.pair_prob(i, j, a, b, sign * a as f64 * b as f64);
            }
        }
    }

    /// `sign · ⟨M_k⟩` expanded over the atoms of context `{i, j}` (the
    /// in-context, possibly disturbed single moment), `k ∈ {i, j}`.
    fn single_moment_in_pair(&mut self, i: u8, j: u8, k: u8, sign: f64) {
        for a in [1i8, -1] {
            for b in [1i8, -1] {
                let v = if k == i { a } else { b };
                self.pair_prob(i, j, a, b, sign * v as f64);
            }
        }
    }

    fn finish(
        self,
        family: Family,
        variant: u8,
        signs: Vec<i8>,
    ) -> (InequalityInstance, Vec<u8>) {
        let mut terms: Vec<Term> = self
            .atoms
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|((context, outcome), coeff)| Term { context, outcome, coeff })
            .collect();
        terms.sort_by(|a, b| (&a.context, a.outcome).cmp(&(&b.context, b.outcome)));
        // Canonical byte key for dedup: exact coefficient bits are stable
        // because all template arithmetic is on small integers.
        let mut key = Vec::new();
        for t in &terms {
            key.extend_from_slice(t.context.indices());
            key.extend_from_slice(&t.outcome.to_le_bytes());
            key.extend_from_slice(&t.coeff.to_bits().to_le_bytes());
        }
        key.extend_from_slice(&self.constant.to_bits().to_le_bytes());
        (
            InequalityInstance {
                family,
                index: 0,
                variant,
                signs,
                terms,
                constant: self.constant,
            },
            key,
        )
    }
}

fn bit(sign: i8) -> u8 {
    if sign >= 0 {
        0
    } else {
        1
    }
}

fn labelings(k: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..1u16 << k).map(move |m| {
        (0..k).map(|p| if m >> p & 1 == 0 { 1i8 } else { -1 }).collect()
    })
}

// ---------------------------------------------------------------------------
// Family templates

fn lg3(m: &[i8]) -> Expr {
    let (m1, m2, m3) = (m[0] as f64, m[1] as f64, m[2] as f64);
    let mut e = Expr::new(3);
    e.pair_correlator(1, 2, m1 * m2);
    e.pair_correlator(2, 3, m2 * m3);
    e.pair_correlator(1, 3, -m1 * m3);
    e.constant = -1.0;
    e
}

fn lg4(m: &[i8]) -> Expr {
    let (m1, m2, m3, m4) = (m[0] as f64, m[1] as f64, m[2] as f64, m[3] as f64);
    let mut e = Expr::new(4);
    e.pair_correlator(1, 2, m1 * m2);
    e.pair_correlator(2, 3, m2 * m3);
    e.pair_correlator(3, 4, m3 * m4);
    e.pair_correlator(1, 4, -m1 * m4);
    e.constant = -2.0;
    e
}

const TWO_TIME_PAIRS: [(u8, u8); 3] = [(1, 2), (2, 3), (1, 3)];

/// Two-time LG in correlator form, with every moment taken inside the
/// sequential pair context `{i, j}`; identically `-4 P_{ij}(-m_i, -m_j)`.
fn lg2(pair: (u8, u8), m: &[i8]) -> Expr {
    let (i, j) = pair;
    let (mi, mj) = (m[0] as f64, m[1] as f64);
    let mut e = Expr::new(3);
    e.single_moment_in_pair(i, j, i, mi);
    e.single_moment_in_pair(i, j, j, mj);
    e.pair_correlator(i, j, -mi * mj);
    e.constant = -1.0;
    e
}

/// Probabilistic two-time form: `P(m_i) - P(-m_j) - P(m_i, m_j) ≤ 0`.
fn plg2(pair: (u8, u8), m: &[i8]) -> Expr {
    let (i, j) = pair;
    let mut e = Expr::new(3);
    e.single_prob(i, m[0], 1.0);
    e.single_prob(j, -m[1], -1.0);
    e.pair_prob(i, j, m[0], m[1], -1.0);
    e
}

/// The four three-time inequalities built from anticorrelated pair sums.
fn pair_anti(variant: u8) -> Expr {
    let mut e = Expr::new(3);
    let anti = |i: u8, j: u8, coeff: f64, e: &mut Expr| {
        e.pair_prob(i, j, 1, -1, coeff);
        e.pair_prob(i, j, -1, 1, coeff);
    };
    let signs: [f64; 3] = match variant {
        0 => [1.0, 1.0, 1.0],   // sum of all three ≤ 2
        1 => [1.0, -1.0, -1.0], // Σ12 - Σ23 - Σ13 ≤ 0
        2 => [-1.0, 1.0, -1.0], // Σ23 - Σ12 - Σ13 ≤ 0
        _ => [-1.0, -1.0, 1.0], // Σ13 - Σ23 - Σ12 ≤ 0
    };
    anti(1, 2, signs[0], &mut e);
    anti(2, 3, signs[1], &mut e);
    anti(1, 3, signs[2], &mut e);
    e.constant = if variant == 0 { -2.0 } else { 0.0 };
    e
}

fn wigner3(variant: u8, m: &[i8]) -> Expr {
    let (m1, m2, m3) = (m[0], m[1], m[2]);
    let mut e = Expr::new(3);
    match variant {
        0 => {
            e.pair_prob(2, 3, m2, m3, 1.0);
            e.pair_prob(1, 2, -m1, m2, -1.0);
            e.pair_prob(1, 3, m1, m3, -1.0);
        }
        1 => {
            e.pair_prob(1, 3, m1, m3, 1.0);
            e.pair_prob(1, 2, m1, -m2, -1.0);
            e.pair_prob(2, 3, m2, m3, -1.0);
        }
        _ => {
            e.pair_prob(1, 2, m1, m2, 1.0);
            e.pair_prob(2, 3, m2, -m3, -1.0);
            e.pair_prob(1, 3, m1, m3, -1.0);
        }
    }
    e
}

fn ch3(variant: u8, m: &[i8]) -> Expr {
    let (m1, m2, m3) = (m[0], m[1], m[2]);
    let mut e = Expr::new(3);
    match variant {
        0 => {
            e.pair_prob(1, 2, m1, m2, 1.0);
            e.pair_prob(2, 3, m2, m3, 1.0);
            e.pair_prob(1, 3, m1, m3, -1.0);
            e.single_prob(2, m2, -1.0);
        }
        1 => {
            e.pair_prob(1, 3, m1, m3, 1.0);
            e.pair_prob(1, 2, m1, m2, 1.0);
            e.pair_prob(2, 3, m2, m3, -1.0);
            e.single_prob(1, m1, -1.0);
        }
        _ => {
            e.pair_prob(1, 3, m1, m3, 1.0);
            e.pair_prob(2, 3, m2, m3, 1.0);
            e.pair_prob(1, 2, m1, m2, -1.0);
            e.single_prob(3, m3, -1.0);
        }
    }
    e
}

fn wigner4(variant: u8, m: &[i8]) -> Expr {
    let (m1, m2, m3, m4) = (m[0], m[1], m[2], m[3]);
    let mut e = Expr::new(4);
    match variant {
        0 => {
            e.pair_prob(1, 2, m1, m2, 1.0);
            e.pair_prob(1, 4, m1, m4, -1.0);
            e.pair_prob(2, 3, m2, -m3, -1.0);
            e.pair_prob(3, 4, m3, -m4, -1.0);
        }
        1 => {
            e.pair_prob(1, 4, m1, m4, 1.0);
            e.pair_prob(1, 2, m1, m2, -1.0);
            e.pair_prob(2, 3, -m2, m3, -1.0);
            e.pair_prob(3, 4, -m3, m4, -1.0);
        }
        2 => {
            e.pair_prob(2, 3, m2, m3, 1.0);
            e.pair_prob(1, 4, m1, m4, -1.0);
            e.pair_prob(1, 2, -m1, m2, -1.0);
            e.pair_prob(3, 4, m3, -m4, -1.0);
        }
        _ => {
            e.pair_prob(3, 4, m3, m4, 1.0);
            e.pair_prob(1, 4, m1, m4, -1.0);
            e.pair_prob(1, 2, -m1, m2, -1.0);
            e.pair_prob(2, 3, -m2, m3, -1.0);
        }
    }
    e
}

fn ch4(variant: u8, m: &[i8]) -> Expr {
    let (m1, m2, m3, m4) = (m[0], m[1], m[2], m[3]);
    let mut e = Expr::new(4);
    match variant {
        0 => {
            e.pair_prob(1, 2, m1, m2, 1.0);
            e.pair_prob(1, 4, m1, m4, -1.0);
            e.pair_prob(2, 3, m2, m3, 1.0);
            e.pair_prob(3, 4, m3, m4, 1.0);
            e.single_prob(2, m2, -1.0);
            e.single_prob(3, m3, -1.0);
        }
        1 => {
            e.pair_prob(1, 2, m1, m2, 1.0);
            e.pair_prob(1, 4, m1, m4, 1.0);
            e.pair_prob(2, 3, m2, m3, 1.0);
            e.pair_prob(3, 4, m3, m4, -1.0);
            e.single_prob(1, m1, -1.0);
            e.single_prob(2, m2, -1.0);
        }
        2 => {
            e.pair_prob(1, 2, m1, m2, 1.0);
            e.pair_prob(1, 4, m1, m4, 1.0);
            e.pair_prob(2, 3, m2, m3, -1.0);
            e.pair_prob(3, 4, m3, m4, 1.0);
            e.single_prob(1, m1, -1.0);
            e.single_prob(4, m4, -1.0);
        }
        _ => {
            e.pair_prob(1, 4, m1, m4, 1.0);
            e.pair_prob(2, 3, m2, m3, 1.0);
            e.pair_prob(1, 2, m1, m2, -1.0);
            e.pair_prob(3, 4, m3, m4, 1.0);
            e.single_prob(3, m3, -1.0);
            e.single_prob(4, m4, -1.0);
        }
    }
    e
}

/// The two macrorealist inequalities derived from the positivity chain of
/// the anticorrelation weights γ.
fn vnew(variant: u8) -> Expr {
    let mut e = Expr::new(3);
    // Shared middle terms: -Σ_{m1=m3} P(m1, m3).
    e.pair_prob(1, 3, 1, 1, -1.0);
    e.pair_prob(1, 3, -1, -1, -1.0);
    if variant == 0 {
        e.single_prob(3, -1, 1.0);
        e.pair_prob(2, 3, 1, -1, -1.0);
    } else {
        e.single_prob(2, -1, 1.0);
        e.pair_prob(2, 3, -1, 1, -1.0);
    }
    e
}

// ---------------------------------------------------------------------------
// Operations

/// The complete canonical family for the given number of times.
pub fn enumerate(family: Family, n_times: usize) -> Result<Vec<InequalityInstance>> {
    if family.n_times() != n_times {
        return input_error("family is not defined for this number of times");
    }
    let mut seen: BTreeMap<Vec<u8>, ()> = BTreeMap::new();
    let mut out = Vec::new();
    let mut push = |inst: InequalityInstance, key: Vec<u8>, out: &mut Vec<InequalityInstance>| {
        if seen.insert(key, ()).is_none() {
            let mut inst = inst;
            inst.index = out.len();
            out.push(inst);
        }
    };
    match family {
        Family::Lg3 => {
            for m in labelings(3) {
                let (inst, key) = lg3(&m).finish(family, 0, m);
                push(inst, key, &mut out);
            }
        }
        Family::Lg4 => {
            for m in labelings(4) {
                let (inst, key) = lg4(&m).finish(family, 0, m);
                push(inst, key, &mut out);
            }
        }
        Family::PairAnti => {
            for v in 0..4u8 {
                let (inst, key) = pair_anti(v).finish(family, v, vec![]);
                push(inst, key, &mut out);
            }
        }
        Family::Wigner3 | Family::Ch3 => {
            for v in 0..3u8 {
                for m in labelings(3) {
                    let expr = if family == Family::Wigner3 {
                        wigner3(v, &m)
                    } else {
                        ch3(v, &m)
                    };
                    let (inst, key) = expr.finish(family, v, m);
                    push(inst, key, &mut out);
                }
            }
        }
        Family::Wigner4 | Family::Ch4 => {
            for v in 0..4u8 {
                for m in labelings(4) {
                    let expr = if family == Family::Wigner4 {
                        wigner4(v, &m)
                    } else {
                        ch4(v, &m)
                    };
                    let (inst, key) = expr.finish(family, v, m);
                    push(inst, key, &mut out);
                }
            }
        }
        Family::Lg2 | Family::Plg2 => {
            for (v, pair) in TWO_TIME_PAIRS.iter().enumerate() {
                for m in labelings(2) {
                    let expr = if family == Family::Lg2 {
                        lg2(*pair, &m)
                    } else {
                        plg2(*pair, &m)
                    };
                    let (inst, key) = expr.finish(family, v as u8, m);
                    push(inst, key, &mut out);
                }
            }
        }
        Family::Vnew => {
            for v in 0..2u8 {
                let (inst, key) = vnew(v).finish(family, v, vec![]);
                push(inst, key, &mut out);
            }
        }
    }
    Ok(out)
}

/// Exact linear evaluation of one instance against a behavior.
pub fn evaluate(instance: &InequalityInstance, behavior: &Behavior) -> Result<EvalResult> {
    if instance.family.n_times() != behavior.n_times() {
        return input_error("instance and behavior disagree on the number of times");
    }
    let mut lhs = instance.constant;
    for term in &instance.terms {
        let table: &ProbTable = behavior.table(&term.context)?;
        lhs += term.coeff * table.prob(term.outcome as usize);
    }
    Ok(EvalResult {
        family: instance.family,
        index: instance.index,
        lhs,
        violated: lhs > TOL_SOLVER,
    })
}

/// Maximum LHS over the whole family; ties break toward the lowest index.
pub fn family_max(family: Family, behavior: &Behavior) -> Result<(f64, InequalityInstance)> {
    let instances = enumerate(family, behavior.n_times())?;
    let mut best: Option<(f64, InequalityInstance)> = None;
    for inst in instances {
        let lhs = evaluate(&inst, behavior)?.lhs;
        let better = match &best {
            None => true,
            Some((b, _)) => lhs > *b,
        };
        if better {
            best = Some((lhs, inst));
        }
    }
    Ok(best.expect("every family is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::{mr_behavior, quantum_behavior, JointDistribution};
    use crate::qubit::{QubitState, Schedule};
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} != {b}");
    }

    #[test]
    fn family_sizes_after_dedup() {
        let sizes = [
            (Family::Lg3, 3, 4),
            (Family::PairAnti, 3, 4),
            (Family::Wigner3, 3, 24),
            (Family::Ch3, 3, 24),
            (Family::Lg2, 3, 12),
            (Family::Plg2, 3, 12),
            (Family::Vnew, 3, 2),
            (Family::Lg4, 4, 8),
            (Family::Wigner4, 4, 64),
            (Family::Ch4, 4, 64),
        ];
        for (fam, n, expect) in sizes {
            assert_eq!(enumerate(fam, n).unwrap().len(), expect, "{}", fam.name());
        }
    }

    #[test]
    fn enumerate_rejects_wrong_arity() {
        assert!(enumerate(Family::Lg3, 4).is_err());
        assert!(enumerate(Family::Wigner4, 3).is_err());
    }

    #[test]
    fn lg3_all_plus_labeling_matches_correlator_string() {
        // The (+,+,+) labeling realizes ⟨M1M2⟩ + ⟨M2M3⟩ - ⟨M1M3⟩ - 1.
        let instances = enumerate(Family::Lg3, 3).unwrap();
        let inst = instances
            .iter()
            .find(|i| i.signs == [1, 1, 1])
            .expect("all-plus labeling survives dedup");
        let sched = Schedule::equal_spacing(3, FRAC_PI_6).unwrap();
        let b = quantum_behavior(&QubitState::maximally_mixed(), &sched).unwrap();
        let r = evaluate(inst, &b).unwrap();
        // 2 cos(π/3) - cos(2π/3) - 1 = 1 + 1/2 - 1 = 1/2.
        assert_close(r.lhs, 0.5, 1e-12);
        assert!(r.violated);
    }

    #[test]
    fn lg3_quantum_maximum_at_pi_over_six() {
        let sched = Schedule::equal_spacing(3, FRAC_PI_6).unwrap();
        let b = quantum_behavior(&QubitState::maximally_mixed(), &sched).unwrap();
        let (max, _) = family_max(Family::Lg3, &b).unwrap();
        assert_close(max, 0.5, 1e-12);
    }

    #[test]
    fn vnew_point_value_at_pi_over_four() {
        let sched = Schedule::equal_spacing(3, FRAC_PI_4).unwrap();
        let b = quantum_behavior(&QubitState::maximally_mixed(), &sched).unwrap();
        let instances = enumerate(Family::Vnew, 3).unwrap();
        let r = evaluate(&instances[0], &b).unwrap();
        assert_close(r.lhs, 0.25, 1e-12);
        assert!(r.violated);
    }

    #[test]
    fn wigner3_silent_but_vnew_loud_for_plus_state_at_pi_over_four() {
        let sched = Schedule::equal_spacing(3, FRAC_PI_4).unwrap();
        let b = quantum_behavior(&QubitState::plus(), &sched).unwrap();
        let (w, _) = family_max(Family::Wigner3, &b).unwrap();
        assert!(w <= TOL_SOLVER, "WIGNER3 max {w} should not be violated");
        let (v, _) = family_max(Family::Vnew, &b).unwrap();
        assert!(v > 0.2, "VNEW max {v} should be violated");
    }

    #[test]
    fn mr_behavior_satisfies_lg_wigner_ch_families() {
        // One fixed non-uniform joint; the large randomized sweep lives in
        // the integration suite. VNEW is excluded: see the test below.
        let atoms = vec![0.05, 0.3, 0.02, 0.13, 0.2, 0.05, 0.15, 0.1];
        let b = mr_behavior(&JointDistribution::new(3, atoms).unwrap()).unwrap();
        for fam in Family::ALL
            .iter()
            .filter(|f| f.n_times() == 3 && **f != Family::Vnew)
        {
            let (max, inst) = family_max(*fam, &b).unwrap();
            assert!(
                max <= TOL_SOLVER,
                "{} instance {} violated on MR behavior: {max}",
                fam.name(),
                inst.index
            );
        }
    }

    #[test]
    fn vnew_is_not_a_classical_constraint() {
        // Both V expressions reduce to γ13 - (γ2 + γ3 + γ23)/2, which
        // reaches 1 on the deterministic assignment (+1, -1, -1). They are
        // therefore not bounded by zero over all classical joints, only
        // over those giving that outcome pattern no weight.
        let mut atoms = vec![0.0; 8];
        atoms[0b011] = 1.0;
        let b = mr_behavior(&JointDistribution::new(3, atoms).unwrap()).unwrap();
        let (max, _) = family_max(Family::Vnew, &b).unwrap();
        assert_close(max, 1.0, 1e-12);

        let mut safe = vec![0.2, 0.1, 0.15, 0.0, 0.25, 0.05, 0.1, 0.15];
        safe[0b011] = 0.0;
        let b = mr_behavior(&JointDistribution::new(3, safe).unwrap()).unwrap();
        let (max, _) = family_max(Family::Vnew, &b).unwrap();
        assert!(max <= TOL_SOLVER, "VNEW max {max}");
    }

    #[test]
    fn stable_ids_are_contiguous() {
        for fam in Family::ALL {
            let instances = enumerate(fam, fam.n_times()).unwrap();
            for (k, inst) in instances.iter().enumerate() {
                assert_eq!(inst.index, k);
                assert_eq!(inst.family, fam);
            }
        }
    }
}
