//! Two-qubit Bell baseline: CHSH, Clauser-Horne and Wigner forms on
//! no-signaling behaviors.
//!
//! In the two-party, two-setting, two-outcome scenario every probabilistic
//! form reduces, under no-signaling, to a fixed affine function of the four
//! CHSH correlators. [`form_equivalence`] checks that reduction numerically
//! for all 128 sign-labeled Clauser-Horne and Wigner instances; the gap is
//! zero (to rounding) for any no-signaling behavior, quantum or classical.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::qubit::Mat2;
use crate::{input_error, Result, TOL_ALGEBRA, TOL_SOLVER};

type C = Complex64;

/// Dense 4×4 complex matrix, just enough for two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4 {
    pub e: [[C; 4]; 4],
}

impl Mat4 {
    pub fn zero() -> Self {
        Mat4 { e: [[C::new(0.0, 0.0); 4]; 4] }
    }

    pub fn mul(&self, rhs: &Mat4) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C::new(0.0, 0.0);
                for k in 0..4 {
                    acc += self.e[i][k] * rhs.e[k][j];
                }
                out.e[i][j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> C {
        (0..4).map(|i| self.e[i][i]).sum()
    }

    pub fn adjoint(&self) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] = self.e[j][i].conj();
            }
        }
        out
    }

    pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.e[2 * i + k][2 * j + l] = a.e[i][j] * b.e[k][l];
                    }
                }
            }
        }
        out
    }

    fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.adjoint();
        (0..4).all(|i| (0..4).all(|j| (self.e[i][j] - d.e[i][j]).norm() <= 2.0 * tol))
    }

    /// Positive semidefiniteness via the characteristic coefficients: for a
    /// Hermitian matrix, all elementary symmetric functions of the
    /// eigenvalues nonnegative is equivalent to no negative eigenvalue.
    fn is_psd(&self, tol: f64) -> bool {
        let m2 = self.mul(self);
        let m3 = m2.mul(self);
        let m4 = m3.mul(self);
        let p1 = self.trace().re;
        let p2 = m2.trace().re;
        let p3 = m3.trace().re;
        let p4 = m4.trace().re;
        let e1 = p1;
        let e2 = (p1 * p1 - p2) / 2.0;
        let e3 = (p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0;
        let e4 = (p1 * p1 * p1 * p1 - 6.0 * p1 * p1 * p2 + 3.0 * p2 * p2 + 8.0 * p1 * p3
            - 6.0 * p4)
            / 24.0;
        [e1, e2, e3, e4].iter().all(|e| *e >= -tol)
    }
}

/// The singlet state `(|01⟩ - |10⟩)/√2` as a density matrix.
pub fn singlet() -> Mat4 {
    let h = C::new(0.5, 0.0);
    let mut m = Mat4::zero();
    m.e[1][1] = h;
    m.e[2][2] = h;
    m.e[1][2] = -h;
    m.e[2][1] = -h;
    m
}

/// Joint tables `P(a, b | x, y)` for two settings per side and ±1 outcomes.
///
/// Indexing: setting pair `(x, y)` with `x, y ∈ {0, 1}` (observables
/// `A_{x+1}`, `B_{y+1}`) and outcome pair `(a, b)` with `+1 → 0, -1 → 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellBehavior {
    tables: [[f64; 4]; 4],
}

impl BellBehavior {
    pub fn new(tables: [[f64; 4]; 4]) -> Result<Self> {
        for t in &tables {
            if t.iter().any(|p| !p.is_finite() || *p < -TOL_ALGEBRA) {
                return input_error("Bell table entries must be nonnegative");
            }
            let sum: f64 = t.iter().sum();
            if (sum - 1.0).abs() > TOL_ALGEBRA {
                return input_error("Bell tables must be normalized");
            }
        }
        Ok(BellBehavior { tables })
    }

    pub fn prob(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.tables[2 * x + y][2 * a + b]
    }

    /// `P(a | x)`; well-defined up to the no-signaling residual (the
    /// `y = 0` table is used).
    pub fn alice_marginal(&self, x: usize, a: usize) -> f64 {
        self.prob(x, 0, a, 0) + self.prob(x, 0, a, 1)
    }

    /// `P(b | y)` from the `x = 0` table.
    pub fn bob_marginal(&self, y: usize, b: usize) -> f64 {
        self.prob(0, y, 0, b) + self.prob(0, y, 1, b)
    }

    /// Max deviation of any one-party marginal across the other party's
    /// settings.
    pub fn no_signaling_residual(&self) -> f64 {
        let mut r = 0.0f64;
        for x in 0..2 {
            for a in 0..2 {
                let m0 = self.prob(x, 0, a, 0) + self.prob(x, 0, a, 1);
                let m1 = self.prob(x, 1, a, 0) + self.prob(x, 1, a, 1);
                r = r.max((m0 - m1).abs());
            }
        }
        for y in 0..2 {
            for b in 0..2 {
                let m0 = self.prob(0, y, 0, b) + self.prob(0, y, 1, b);
                let m1 = self.prob(1, y, 0, b) + self.prob(1, y, 1, b);
                r = r.max((m0 - m1).abs());
            }
        }
        r
    }

    pub fn correlator(&self, x: usize, y: usize) -> f64 {
        let mut acc = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * self.prob(x, y, a, b);
            }
        }
        acc
    }

    pub fn alice_expectation(&self, x: usize) -> f64 {
        self.alice_marginal(x, 0) - self.alice_marginal(x, 1)
    }

    pub fn bob_expectation(&self, y: usize) -> f64 {
        self.bob_marginal(y, 0) - self.bob_marginal(y, 1)
    }
}

/// `P(a, b | x, y) = tr[ρ (Π_a^x ⊗ Π_b^y)]` for projective ±1 measurements
/// along the given Bloch directions. No-signaling holds by construction.
pub fn quantum_bell_behavior(
    rho: &Mat4,
    alice_settings: [[f64; 3]; 2],
    bob_settings: [[f64; 3]; 2],
) -> Result<BellBehavior> {
    if !rho.is_hermitian(TOL_ALGEBRA) {
        return input_error("two-qubit state is not Hermitian");
    }
    if (rho.trace().re - 1.0).abs() > TOL_ALGEBRA {
        return input_error("two-qubit state trace is not 1");
    }
    if !rho.is_psd(1e-10) {
        return input_error("two-qubit state is not positive semidefinite");
    }
    for n in alice_settings.iter().chain(bob_settings.iter()) {
        let norm: f64 = n.iter().map(|x| x * x).sum::<f64>();
        if (norm - 1.0).abs() > 10.0 * TOL_ALGEBRA {
            return input_error("measurement settings must be unit Bloch vectors");
        }
    }
    let mut tables = [[0.0; 4]; 4];
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let pa = Mat2::projector(alice_settings[x], if a == 0 { 1 } else { -1 });
                    let pb = Mat2::projector(bob_settings[y], if b == 0 { 1 } else { -1 });
                    let p = rho.mul(&Mat4::kron(&pa, &pb)).trace().re;
                    tables[2 * x + y][2 * a + b] = p.max(0.0);
                }
            }
        }
    }
    BellBehavior::new(tables)
}

/// CHSH LHS in the `≤ 0` convention:
/// `a1b2⟨A1B2⟩ + a2b1⟨A2B1⟩ + a1b1⟨A1B1⟩ - a2b2⟨A2B2⟩ - 2`.
pub fn chsh_evaluate(behavior: &BellBehavior, signs: (i8, i8, i8, i8)) -> f64 {
    let (a1, a2, b1, b2) = (
        signs.0 as f64,
        signs.1 as f64,
        signs.2 as f64,
        signs.3 as f64,
    );
    a1 * b2 * behavior.correlator(0, 1)
        + a2 * b1 * behavior.correlator(1, 0)
        + a1 * b1 * behavior.correlator(0, 0)
        - a2 * b2 * behavior.correlator(1, 1)
        - 2.0
}

/// Best CHSH LHS over all 16 sign choices.
pub fn chsh_max(behavior: &BellBehavior) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for s in 0..16u8 {
        let sg = |k: u8| if s >> k & 1 == 0 { 1i8 } else { -1 };
        best = best.max(chsh_evaluate(behavior, (sg(0), sg(1), sg(2), sg(3))));
    }
    best
}

/// Which probabilistic Bell form an instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellForm {
    ClauserHorne,
    Wigner,
}

/// Affine expression over the scenario's moment basis
/// `[1, ⟨A1⟩, ⟨A2⟩, ⟨B1⟩, ⟨B2⟩, ⟨A1B1⟩, ⟨A1B2⟩, ⟨A2B1⟩, ⟨A2B2⟩]`,
/// together with the probability terms it expands.
#[derive(Debug, Clone, PartialEq)]
pub struct BellInstance {
    pub form: BellForm,
    pub variant: u8,
    /// Sign labeling `(a1, a2, b1, b2)`.
    pub signs: [i8; 4],
    joint: [[f64; 4]; 4],
    alice: [[f64; 2]; 2],
    bob: [[f64; 2]; 2],
    /// Moment-basis coefficients, built symbolically from the expansions
    /// of the pair and single probabilities.
    pub reduction: [f64; 9],
}

impl BellInstance {
    fn new(form: BellForm, variant: u8, signs: [i8; 4]) -> Self {
        let mut inst = BellInstance {
            form,
            variant,
            signs,
            joint: [[0.0; 4]; 4],
            alice: [[0.0; 2]; 2],
            bob: [[0.0; 2]; 2],
            reduction: [0.0; 9],
        };
        let (a1, a2, b1, b2) = (signs[0], signs[1], signs[2], signs[3]);
        // Template terms: (x, y, alice sign, bob sign, coefficient).
        let joint_terms: &[(usize, usize, i8, i8, f64)] = match (form, variant) {
            (BellForm::ClauserHorne, 0) => &[
                (0, 0, a1, b1, 1.0),
                (0, 1, a1, b2, 1.0),
                (1, 1, a2, b2, -1.0),
                (1, 0, a2, b1, 1.0),
            ],
            (BellForm::ClauserHorne, 1) => &[
                (0, 0, a1, b1, 1.0),
                (0, 1, a1, b2, -1.0),
                (1, 1, a2, b2, 1.0),
                (1, 0, a2, b1, 1.0),
            ],
            (BellForm::ClauserHorne, 2) => &[
                (0, 1, a1, b2, 1.0),
                (0, 0, a1, b1, -1.0),
                (1, 1, a2, b2, 1.0),
                (1, 0, a2, b1, 1.0),
            ],
            (BellForm::ClauserHorne, _) => &[
                (0, 0, a1, b1, 1.0),
                (0, 1, a1, b2, 1.0),
                (1, 1, a2, b2, 1.0),
                (1, 0, a2, b1, -1.0),
            ],
            (BellForm::Wigner, 0) => &[
                (0, 1, a1, b2, 1.0),
                (0, 0, a1, -b1, -1.0),
                (1, 1, a2, b2, -1.0),
                (1, 0, -a2, b1, -1.0),
            ],
            (BellForm::Wigner, 1) => &[
                (0, 0, a1, b1, 1.0),
                (0, 1, a1, b2, -1.0),
                (1, 1, a2, -b2, -1.0),
                (1, 0, -a2, b1, -1.0),
            ],
            (BellForm::Wigner, 2) => &[
                (1, 1, a2, b2, 1.0),
                (0, 0, a1, b1, -1.0),
                (0, 1, -a1, b2, -1.0),
                (1, 0, a2, -b1, -1.0),
            ],
            (BellForm::Wigner, _) => &[
                (1, 0, a2, b1, 1.0),
                (0, 0, a1, b1, -1.0),
                (1, 1, a2, -b2, -1.0),
                (0, 1, -a1, b2, -1.0),
            ],
        };
        for &(x, y, sa, sb, coeff) in joint_terms {
            inst.add_joint(x, y, sa, sb, coeff);
        }
        if form == BellForm::ClauserHorne {
            let single_terms: [(bool, usize, i8); 2] = match variant {
                0 => [(true, 0, a1), (false, 0, b1)],
                1 => [(true, 1, a2), (false, 0, b1)],
                2 => [(true, 1, a2), (false, 1, b2)],
                _ => [(true, 0, a1), (false, 1, b2)],
            };
            for (is_alice, setting, sign) in single_terms {
                inst.add_single(is_alice, setting, sign, -1.0);
            }
        }
        inst
    }

    fn add_joint(&mut self, x: usize, y: usize, sa: i8, sb: i8, coeff: f64) {
        let (a, b) = (bit(sa), bit(sb));
        self.joint[2 * x + y][2 * a + b] += coeff;
        // P(a,b|x,y) = (1 + a⟨A_x⟩ + b⟨B_y⟩ + ab⟨A_xB_y⟩)/4.
        let (sa, sb) = (sa as f64, sb as f64);
        self.reduction[0] += coeff / 4.0;
        self.reduction[1 + x] += coeff * sa / 4.0;
        self.reduction[3 + y] += coeff * sb / 4.0;
        self.reduction[5 + 2 * x + y] += coeff * sa * sb / 4.0;
    }

    fn add_single(&mut self, is_alice: bool, setting: usize, sign: i8, coeff: f64) {
        let o = bit(sign);
        if is_alice {
            self.alice[setting][o] += coeff;
            self.reduction[1 + setting] += coeff * sign as f64 / 2.0;
        } else {
            self.bob[setting][o] += coeff;
            self.reduction[3 + setting] += coeff * sign as f64 / 2.0;
        }
        self.reduction[0] += coeff / 2.0;
    }

    /// Direct LHS from the behavior's probability tables.
    pub fn direct_lhs(&self, behavior: &BellBehavior) -> f64 {
        let mut acc = 0.0;
        for xy in 0..4 {
            for ab in 0..4 {
                acc += self.joint[xy][ab] * behavior.tables[xy][ab];
            }
        }
        for x in 0..2 {
            for a in 0..2 {
                acc += self.alice[x][a] * behavior.alice_marginal(x, a);
            }
        }
        for y in 0..2 {
            for b in 0..2 {
                acc += self.bob[y][b] * behavior.bob_marginal(y, b);
            }
        }
        acc
    }

    /// The same LHS via the moment-expansion reduction.
    pub fn reduced_lhs(&self, behavior: &BellBehavior) -> f64 {
        let m = [
            1.0,
            behavior.alice_expectation(0),
            behavior.alice_expectation(1),
            behavior.bob_expectation(0),
            behavior.bob_expectation(1),
            behavior.correlator(0, 0),
            behavior.correlator(0, 1),
            behavior.correlator(1, 0),
            behavior.correlator(1, 1),
        ];
        self.reduction.iter().zip(m).map(|(c, v)| c * v).sum()
    }
}

fn bit(sign: i8) -> usize {
    if sign >= 0 {
        0
    } else {
        1
    }
}

/// All 128 sign-labeled Clauser-Horne and Wigner Bell instances.
pub fn enumerate_bell_instances() -> Vec<BellInstance> {
    let mut out = Vec::with_capacity(128);
    for form in [BellForm::ClauserHorne, BellForm::Wigner] {
        for variant in 0..4u8 {
            for s in 0..16u8 {
                let sg = |k: u8| if s >> k & 1 == 0 { 1i8 } else { -1 };
                out.push(BellInstance::new(form, variant, [sg(0), sg(1), sg(2), sg(3)]));
            }
        }
    }
    out
}

/// Max absolute gap between each probabilistic LHS and its CHSH-correlator
/// reduction, over all 128 instances. Errors on signaling behaviors, where
/// the one-party marginals entering the reduction are ambiguous.
pub fn form_equivalence(behavior: &BellBehavior) -> Result<f64> {
    if behavior.no_signaling_residual() > TOL_SOLVER {
        return input_error("behavior violates no-signaling beyond tolerance");
    }
    let mut gap = 0.0f64;
    for inst in enumerate_bell_instances() {
        let d = inst.direct_lhs(behavior);
        let r = inst.reduced_lhs(behavior);
        gap = gap.max((d - r).abs());
    }
    Ok(gap)
}
