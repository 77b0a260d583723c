//! Symbolic calculus of photon-operator monomials under device conjugation.
//!
//! To first order in the segment length, a device sequence replaces an
//! unwanted interaction term `M` by the average of its conjugates
//! `sum_s C_s† M C_s` over the accumulated controls `C_s` of the cycle
//! (see [`crate::control`] for the segment conventions). The sequence
//! *eliminates* `M` when that sum vanishes identically.
//!
//! Everything here works with normal-ordered two-mode monomials
//! `b1†^c1 b1^a1 b2†^c2 b2^a2`. Under a pure phase-shifter control with
//! angles `(alpha, beta)` a monomial is an eigenvector of conjugation:
//!
//! ```text
//! C† M C = e^{-i theta} M,   theta = (c1 - a1) alpha + (c2 - a2) beta
//! ```
//!
//! so elimination reduces to the vanishing of a finite sum of roots of
//! unity — decided *exactly* in cyclotomic integer arithmetic, never by a
//! float threshold. Beam splitters mix the modes instead: the control image
//! `W` (a unitary 2x2 matrix) maps each monomial to a combination of
//! monomials of the same total degree. Unitarity of `W` is what keeps the
//! transformed operator pair canonical (`[beta_1, beta_2†] = (W W†)_{12} = 0`),
//! so the binomial expansion of the conjugated monomial never produces
//! contraction terms of lower degree. Quarter-turn alphabets keep all
//! coefficients in the Gaussian integers and stay exact; arbitrary angles
//! fall back to floats.
//!
//! Every symbolic statement can be cross-checked against dense matrices on
//! a truncated Fock space via [`matrix_check`], which compares the two
//! routes on the truncation-safe subspace.

use crate::control::{DeviceSequence, SequenceError, TwoModeW};
use crate::exact::{root_sum_f64, root_sum_is_zero, GaussInt, GaussW, RationalAngle};
use crate::fock::{
    total_occupation_projector, FockError, FockOperator, FockSpace,
};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum CalculusError {
    #[error("survival weights are defined for phase-shifter-only sequences")]
    NotPhaseOnly,
    #[error("matrix checks need a two-mode space, got {got} modes")]
    NeedTwoModes { got: usize },
    #[error(
        "per-mode cutoff {dim_per_mode} too small for a degree-{degree} monomial \
         with mode mixing; need degree < cutoff"
    )]
    CutoffTooSmall { degree: u32, dim_per_mode: usize },
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Normal-ordered two-mode monomial `b1†^c1 b1^a1 b2†^c2 b2^a2`.
///
/// The field names follow the literal grammar `c(c1, c2) a(a1, a2)`:
/// creation exponents per mode, then annihilation exponents per mode.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub c1: u32,
    pub a1: u32,
    pub c2: u32,
    pub a2: u32,
}

impl Monomial {
    pub fn new(c1: u32, a1: u32, c2: u32, a2: u32) -> Self {
        Self { c1, a1, c2, a2 }
    }

    /// Total operator degree `c1 + a1 + c2 + a2`.
    pub fn degree(&self) -> u32 {
        self.c1 + self.a1 + self.c2 + self.a2
    }

    /// Net creation excess per mode, the "charge" that phase conjugation
    /// couples to.
    pub fn excess(&self) -> (i64, i64) {
        (
            self.c1 as i64 - self.a1 as i64,
            self.c2 as i64 - self.a2 as i64,
        )
    }

    /// Hermitian adjoint: swaps creation and annihilation exponents.
    pub fn adjoint(&self) -> Self {
        Self { c1: self.a1, a1: self.c1, c2: self.a2, a2: self.c2 }
    }

    /// Conjugation phase under a phase shifter with the given angles:
    /// `theta = (c1 - a1) alpha + (c2 - a2) beta`, reduced mod 2 pi.
    pub fn phase_of(&self, alpha: RationalAngle, beta: RationalAngle) -> RationalAngle {
        let (n1, n2) = self.excess();
        alpha.times(n1).add(&beta.times(n2))
    }

    /// The four terms linear in the photon operators:
    /// `b1, b1†, b2, b2†`.
    pub fn linear_set() -> Vec<Monomial> {
        vec![
            Monomial::new(0, 1, 0, 0),
            Monomial::new(1, 0, 0, 0),
            Monomial::new(0, 0, 0, 1),
            Monomial::new(0, 0, 1, 0),
        ]
    }

    /// Bilinears with per-mode charge (+-1, -+1) or (+-2, 0) / (0, +-2):
    /// one-photon exchange between the modes plus single-mode two-photon
    /// terms — `b1† b2, b1 b2†, b1†², b2†², b1², b2²`.
    pub fn set_a() -> Vec<Monomial> {
        vec![
            Monomial::new(1, 0, 0, 1),
            Monomial::new(0, 1, 1, 0),
            Monomial::new(2, 0, 0, 0),
            Monomial::new(0, 0, 2, 0),
            Monomial::new(0, 2, 0, 0),
            Monomial::new(0, 0, 0, 2),
        ]
    }

    /// Pair annihilation/creation across the modes: `b1 b2, b1† b2†`.
    pub fn set_b() -> Vec<Monomial> {
        vec![Monomial::new(0, 1, 0, 1), Monomial::new(1, 0, 1, 0)]
    }

    /// Occupation numbers `b1† b1, b2† b2` — zero charge, invariant under
    /// every phase shifter.
    pub fn set_c() -> Vec<Monomial> {
        vec![Monomial::new(1, 1, 0, 0), Monomial::new(0, 0, 1, 1)]
    }

    /// Dense matrix of the monomial, with mode `modes.0` as photon mode 1.
    pub fn to_operator(
        &self,
        space: FockSpace,
        modes: (usize, usize),
    ) -> Result<FockOperator, FockError> {
        let b1 = FockOperator::annihilation(space, modes.0)?;
        let b2 = FockOperator::annihilation(space, modes.1)?;
        let mut out = FockOperator::identity(space);
        for _ in 0..self.c1 {
            out = out.mul(&b1.adjoint())?;
        }
        for _ in 0..self.a1 {
            out = out.mul(&b1)?;
        }
        for _ in 0..self.c2 {
            out = out.mul(&b2.adjoint())?;
        }
        for _ in 0..self.a2 {
            out = out.mul(&b2)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c({},{})a({},{})", self.c1, self.c2, self.a1, self.a2)
    }
}

fn binom(n: u32, j: u32) -> i64 {
    let mut out: i64 = 1;
    for t in 0..j.min(n - j) {
        out = out * (n - t) as i64 / (t + 1) as i64;
    }
    out
}

/// Expansion of one transformed power: `(x W_0 + y W_1)^n` split by how
/// many factors land on mode 1. Yields `(j, coefficient)` meaning
/// `coefficient * mode1^j mode2^(n-j)`.
fn power_terms_gauss(w0: GaussInt, w1: GaussInt, n: u32) -> Vec<(u32, GaussInt)> {
    (0..=n)
        .map(|j| (j, w0.pow(j).mul(&w1.pow(n - j)).scale(binom(n, j))))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

fn power_terms_float(w0: Complex64, w1: Complex64, n: u32) -> Vec<(u32, Complex64)> {
    (0..=n)
        .map(|j| {
            (
                j,
                w0.powi(j as i32) * w1.powi((n - j) as i32) * binom(n, j) as f64,
            )
        })
        .collect()
}

/// Exact conjugate `C† M C` for a control with Gaussian-integer image `w`,
/// as a monomial combination. Creation factors transform with the complex
/// conjugate of `w`; every resulting monomial has the same total degree
/// as the input.
pub fn conjugate_gauss(m: &Monomial, w: &GaussW) -> BTreeMap<Monomial, GaussInt> {
    let c1 = power_terms_gauss(w[0][0].conj(), w[0][1].conj(), m.c1);
    let c2 = power_terms_gauss(w[1][0].conj(), w[1][1].conj(), m.c2);
    let a1 = power_terms_gauss(w[0][0], w[0][1], m.a1);
    let a2 = power_terms_gauss(w[1][0], w[1][1], m.a2);
    let mut out: BTreeMap<Monomial, GaussInt> = BTreeMap::new();
    for (jc1, vc1) in &c1 {
        for (jc2, vc2) in &c2 {
            for (ja1, va1) in &a1 {
                for (ja2, va2) in &a2 {
                    let mono = Monomial::new(
                        jc1 + jc2,
                        ja1 + ja2,
                        (m.c1 - jc1) + (m.c2 - jc2),
                        (m.a1 - ja1) + (m.a2 - ja2),
                    );
                    let coeff = vc1.mul(vc2).mul(va1).mul(va2);
                    let entry = out.entry(mono).or_insert(GaussInt::ZERO);
                    *entry = entry.add(&coeff);
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Float counterpart of [`conjugate_gauss`] for arbitrary control images.
pub fn conjugate_float(m: &Monomial, w: &TwoModeW) -> BTreeMap<Monomial, Complex64> {
    let c1 = power_terms_float(w[(0, 0)].conj(), w[(0, 1)].conj(), m.c1);
    let c2 = power_terms_float(w[(1, 0)].conj(), w[(1, 1)].conj(), m.c2);
    let a1 = power_terms_float(w[(0, 0)], w[(0, 1)], m.a1);
    let a2 = power_terms_float(w[(1, 0)], w[(1, 1)], m.a2);
    let mut out: BTreeMap<Monomial, Complex64> = BTreeMap::new();
    for (jc1, vc1) in &c1 {
        for (jc2, vc2) in &c2 {
            for (ja1, va1) in &a1 {
                for (ja2, va2) in &a2 {
                    let mono = Monomial::new(
                        jc1 + jc2,
                        ja1 + ja2,
                        (m.c1 - jc1) + (m.c2 - jc2),
                        (m.a1 - ja1) + (m.a2 - ja2),
                    );
                    *out.entry(mono).or_insert(Complex64::new(0.0, 0.0)) +=
                        vc1 * vc2 * va1 * va2;
                }
            }
        }
    }
    out
}

/// Survival weight of a monomial under a phase-shifter-only sequence:
/// the exact root-of-unity sum `sum_s e^{-i theta_s}` with one term per
/// segment.
#[derive(Clone, Debug)]
pub struct SurvivalWeight {
    /// Exponent angles of the summed unit phases (`-theta_s` per segment).
    pub angles: Vec<RationalAngle>,
    /// Float value of the sum.
    pub value: Complex64,
    /// Exact decision: true iff the sum vanishes identically.
    pub is_zero: bool,
}

pub fn survival_weight(
    seq: &DeviceSequence,
    m: &Monomial,
) -> Result<SurvivalWeight, CalculusError> {
    let mut angles = Vec::with_capacity(seq.len());
    for s in 1..=seq.len() {
        let (alpha, beta) = seq
            .cumulative_phase_pair(s)?
            .ok_or(CalculusError::NotPhaseOnly)?;
        angles.push(m.phase_of(alpha, beta).neg());
    }
    let is_zero = root_sum_is_zero(&angles);
    let (re, im) = root_sum_f64(&angles);
    Ok(SurvivalWeight { angles, value: Complex64::new(re, im), is_zero })
}

/// The summed conjugate `sum_s C_s† M C_s` as a monomial combination,
/// sorted canonically.
///
/// Phase-shifter-only and quarter-turn sequences are computed exactly
/// (coefficients reported as floats but decided in exact arithmetic, with
/// identically-zero entries dropped); other sequences use float arithmetic
/// and prune magnitudes below 1e-12.
pub fn surviving_terms(
    seq: &DeviceSequence,
    m: &Monomial,
) -> Result<Vec<(Monomial, Complex64)>, CalculusError> {
    // exact phase route
    if !seq.contains_beam_splitter() {
        let w = survival_weight(seq, m)?;
        return Ok(if w.is_zero { vec![] } else { vec![(*m, w.value)] });
    }
    // exact Gaussian route
    let gauss: Result<Option<Vec<GaussW>>, _> =
        (1..=seq.len()).map(|s| seq.cumulative_w_gauss(s)).collect();
    if let Some(ws) = gauss? {
        let mut acc: BTreeMap<Monomial, GaussInt> = BTreeMap::new();
        for w in &ws {
            for (mono, coeff) in conjugate_gauss(m, w) {
                let entry = acc.entry(mono).or_insert(GaussInt::ZERO);
                *entry = entry.add(&coeff);
            }
        }
        return Ok(acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, c)| (mono, c.to_c64()))
            .collect());
    }
    // float route
    let mut acc: BTreeMap<Monomial, Complex64> = BTreeMap::new();
    for s in 1..=seq.len() {
        let w = seq.cumulative_w(s)?;
        for (mono, coeff) in conjugate_float(m, &w) {
            *acc.entry(mono).or_insert(Complex64::new(0.0, 0.0)) += coeff;
        }
    }
    Ok(acc
        .into_iter()
        .filter(|(_, c)| c.norm() > 1e-12)
        .collect())
}

/// Whether the sequence eliminates the monomial to first order.
///
/// Exact for phase-shifter-only and quarter-turn sequences; sequences with
/// beam splitters at other angles are decided numerically against a 1e-9
/// coefficient threshold.
pub fn eliminates(seq: &DeviceSequence, m: &Monomial) -> Result<bool, CalculusError> {
    if !seq.contains_beam_splitter() {
        return Ok(survival_weight(seq, m)?.is_zero);
    }
    let terms = surviving_terms(seq, m)?;
    Ok(terms.iter().all(|(_, c)| c.norm() < 1e-9))
}

/// Whether the sequence eliminates every monomial in `targets`.
pub fn eliminates_all(seq: &DeviceSequence, targets: &[Monomial]) -> Result<bool, CalculusError> {
    for m in targets {
        if !eliminates(seq, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of the dense-matrix cross-check of the symbolic calculus.
#[derive(Clone, Copy, Debug)]
pub struct MatrixCheck {
    /// Spectral-norm difference between the symbolic prediction and the
    /// literal matrix sum, restricted to the truncation-safe subspace.
    pub route_difference: f64,
    /// Norm of the matrix sum itself on that subspace (zero iff the
    /// sequence eliminates the monomial there).
    pub matrix_sum_norm: f64,
}

/// Computes `sum_s C_s† M C_s` twice — once from the symbolic calculus,
/// once with dense truncated matrices — and compares.
///
/// Phase-shifter controls are diagonal, hence exact on the whole truncated
/// space; sequences containing beam splitters are compared after projecting
/// onto total occupation at most `cutoff - 1 - degree(M)`, the region the
/// truncation leaves faithful (which requires `degree(M) < cutoff`).
pub fn matrix_check(
    seq: &DeviceSequence,
    m: &Monomial,
    space: FockSpace,
) -> Result<MatrixCheck, CalculusError> {
    if space.num_modes() != 2 {
        return Err(CalculusError::NeedTwoModes { got: space.num_modes() });
    }
    let modes = (0usize, 1usize);
    let m_op = m.to_operator(space, modes)?;
    let mut matrix_sum = FockOperator::zeros(space);
    for s in 1..=seq.len() {
        let c = seq.cumulative_unitary(space, modes, s)?;
        matrix_sum = matrix_sum.add(&c.adjoint().mul(&m_op)?.mul(&c)?)?;
    }
    let mut symbolic = FockOperator::zeros(space);
    for (mono, coeff) in surviving_terms(seq, m)? {
        symbolic = symbolic.add(&mono.to_operator(space, modes)?.scale(coeff))?;
    }
    let projector = if seq.contains_beam_splitter() {
        let d = space.dim_per_mode();
        let deg = m.degree();
        let safe = (d as i64 - 1) - deg as i64;
        if safe < 0 {
            return Err(CalculusError::CutoffTooSmall { degree: deg, dim_per_mode: d });
        }
        Some(total_occupation_projector(space, safe as usize))
    } else {
        None
    };
    let restrict = |op: &FockOperator| -> Result<f64, CalculusError> {
        Ok(match &projector {
            Some(p) => op.mul(p)?.spectral_norm(),
            None => op.spectral_norm(),
        })
    };
    Ok(MatrixCheck {
        route_difference: restrict(&symbolic.sub(&matrix_sum)?)?,
        matrix_sum_norm: restrict(&matrix_sum)?,
    })
}
