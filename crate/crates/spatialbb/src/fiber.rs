//! System-bath Hamiltonians for a photon pair traveling through a noisy
//! fiber.
//!
//! The fiber is modeled segment by segment. Two system modes (the photon
//! pair, modes 0 and 1 of the Fock space) couple to one or two ancillary
//! bath modes representing the local environment of a segment:
//!
//! ```text
//! H_0   = omega_1 n_1 + omega_2 n_2 + sum_m nu_m a_m† a_m
//! H_int = sum_m g_m (b_1 + b_2) a_m† + h.c.
//! ```
//!
//! (zero-point offsets dropped — they only add a global phase).
//!
//! Segment-to-segment inhomogeneity is modeled by adding seeded random
//! Hermitian perturbations of spectral norm `epsilon`, one even and one odd
//! under the system parity `Pi = exp(i pi (n_1 + n_2))`:
//!
//! - the free part receives an even perturbation, preserving
//!   `Pi H_0 Pi = H_0` exactly — this is the symmetry the parity-kick
//!   sequences rely on, so it is enforced structurally (raw Gaussian draws
//!   are projected onto the even subspace before use);
//! - the interaction receives an odd perturbation, preserving
//!   `Pi H_int Pi = -H_int` exactly.
//!
//! Draws are keyed by `(seed, segment index, part)` so that segment k's
//! Hamiltonian never depends on which segments were built before it.

use crate::fock::{FockError, FockOperator, FockSpace};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("need one or two bath modes, got {got}")]
    BathCount { got: usize },
    #[error("per-mode dimension must be at least 2, got {got}")]
    DimTooSmall { got: usize },
    #[error("model parameter {name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("inhomogeneity scale must be nonnegative, got {got}")]
    NegativeEpsilon { got: f64 },
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// One truncated bath mode: its frequency and its coupling to the photons.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathMode {
    pub frequency: f64,
    pub coupling: f64,
}

/// Parameters of the segment model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberParams {
    /// Frequencies of the two photon modes.
    pub omega: [f64; 2],
    /// Bath modes (one or two).
    pub baths: Vec<BathMode>,
    /// Fock levels per mode.
    pub dim_per_mode: usize,
    /// Spectral norm of the per-segment random perturbations.
    pub epsilon: f64,
    /// Seed for all inhomogeneity draws.
    pub seed: u64,
}

/// A validated fiber model; all Hamiltonians are built from here.
#[derive(Clone, Debug)]
pub struct FiberModel {
    params: FiberParams,
    space: FockSpace,
}

/// The two Hamiltonian parts of one fiber segment, split by parity.
#[derive(Clone, Debug)]
pub struct SegmentHamiltonian {
    /// Parity-even free part (frequencies plus even inhomogeneity).
    pub h0: FockOperator,
    /// Parity-odd photon-bath coupling (plus odd inhomogeneity).
    pub interaction: FockOperator,
}

impl SegmentHamiltonian {
    pub fn total(&self) -> FockOperator {
        self.h0.add(&self.interaction).expect("parts share a space")
    }
}

impl FiberModel {
    pub fn new(params: FiberParams) -> Result<Self, ModelError> {
        if params.baths.is_empty() || params.baths.len() > 2 {
            return Err(ModelError::BathCount { got: params.baths.len() });
        }
        if params.dim_per_mode < 2 {
            return Err(ModelError::DimTooSmall { got: params.dim_per_mode });
        }
        for (name, value) in [
            ("omega[0]", params.omega[0]),
            ("omega[1]", params.omega[1]),
            ("epsilon", params.epsilon),
        ] {
            if !value.is_finite() {
                return Err(ModelError::NonFinite { name, value });
            }
        }
        for bath in &params.baths {
            if !bath.frequency.is_finite() {
                return Err(ModelError::NonFinite { name: "bath frequency", value: bath.frequency });
            }
            if !bath.coupling.is_finite() {
                return Err(ModelError::NonFinite { name: "bath coupling", value: bath.coupling });
            }
        }
        if params.epsilon < 0.0 {
            return Err(ModelError::NegativeEpsilon { got: params.epsilon });
        }
        let space = FockSpace::new(2 + params.baths.len(), params.dim_per_mode)?;
        Ok(Self { params, space })
    }

    pub fn params(&self) -> &FiberParams {
        &self.params
    }

    /// Full space: modes 0 and 1 are the photons, the rest are baths.
    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn bath_count(&self) -> usize {
        self.params.baths.len()
    }

    /// System parity `exp(i pi (n_1 + n_2))`: diagonal, entries exactly ±1.
    pub fn system_parity(&self) -> FockOperator {
        let dim = self.space.total_dim();
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        for idx in 0..dim {
            let occ = self.space.occupations(idx);
            let sign = if (occ[0] + occ[1]) % 2 == 0 { 1.0 } else { -1.0 };
            mat[(idx, idx)] = Complex64::new(sign, 0.0);
        }
        FockOperator::from_matrix(self.space, mat).expect("square by construction")
    }

    /// Homogeneous free Hamiltonian: diagonal frequency terms only.
    pub fn h0_homogeneous(&self) -> FockOperator {
        let dim = self.space.total_dim();
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        for idx in 0..dim {
            let occ = self.space.occupations(idx);
            let mut energy = self.params.omega[0] * occ[0] as f64
                + self.params.omega[1] * occ[1] as f64;
            for (m, bath) in self.params.baths.iter().enumerate() {
                energy += bath.frequency * occ[2 + m] as f64;
            }
            mat[(idx, idx)] = Complex64::new(energy, 0.0);
        }
        FockOperator::from_matrix(self.space, mat).expect("square by construction")
    }

    /// Homogeneous photon-bath coupling, linear in every mode operator.
    pub fn interaction_homogeneous(&self) -> Result<FockOperator, ModelError> {
        let mut h = FockOperator::zeros(self.space);
        for (m, bath) in self.params.baths.iter().enumerate() {
            let a = FockOperator::annihilation(self.space, 2 + m)?;
            for photon_mode in 0..2 {
                let b = FockOperator::annihilation(self.space, photon_mode)?;
                // g (b a† + b† a)
                let hop = b.mul(&a.adjoint())?;
                let pair = hop.add(&hop.adjoint())?;
                h = h.add(&pair.scale(Complex64::new(bath.coupling, 0.0)))?;
            }
        }
        Ok(h)
    }

    /// The Hamiltonian of fiber segment `k` (0-based), with its seeded
    /// inhomogeneity applied to both parts.
    pub fn segment_hamiltonian(&self, k: u64) -> Result<SegmentHamiltonian, ModelError> {
        let parity = self.system_parity();
        let mut h0 = self.h0_homogeneous();
        let mut interaction = self.interaction_homogeneous()?;
        if self.params.epsilon > 0.0 {
            let even = self.projected_draw(k, 0, &parity, false)?;
            let odd = self.projected_draw(k, 1, &parity, true)?;
            let eps = Complex64::new(self.params.epsilon, 0.0);
            h0 = h0.add(&even.scale(eps))?;
            interaction = interaction.add(&odd.scale(eps))?;
        }
        Ok(SegmentHamiltonian { h0, interaction })
    }

    /// Random Hermitian matrix of unit spectral norm with definite system
    /// parity. The projection `(H ± Pi H Pi)/2` is exact in floats because
    /// the parity matrix only flips entry signs.
    fn projected_draw(
        &self,
        k: u64,
        part: u64,
        parity: &FockOperator,
        odd: bool,
    ) -> Result<FockOperator, ModelError> {
        let dim = self.space.total_dim();
        let mut rng = ChaCha8Rng::seed_from_u64(mix(self.params.seed, k, part));
        let raw = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let hermitian = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
        let h = FockOperator::from_matrix(self.space, hermitian)?;
        let conjugated = parity.mul(&h)?.mul(parity)?;
        let projected = if odd {
            h.sub(&conjugated)?.scale(Complex64::new(0.5, 0.0))
        } else {
            h.add(&conjugated)?.scale(Complex64::new(0.5, 0.0))
        };
        let norm = projected.spectral_norm();
        if norm < 1e-12 {
            return Ok(FockOperator::zeros(self.space));
        }
        Ok(projected.scale(Complex64::new(1.0 / norm, 0.0)))
    }
}

/// Mixes (seed, segment, part) into one stream key; splitmix64 finalizer.
fn mix(seed: u64, k: u64, part: u64) -> u64 {
    let mut z = seed
        ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ part.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
