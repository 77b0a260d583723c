//! Truncated multi-mode bosonic Fock space: operator construction, algebra,
//! exponentials, states, and reduced density matrices.
//!
//! # Conventions (the single source of truth for tensor ordering)
//!
//! A space with `m` modes of `d` levels each has dimension `d^m`. Basis
//! states are labeled by occupation vectors `(n_0, ..., n_{m-1})` with
//! `0 <= n_j < d`, and **mode 0 is the slowest-varying index**:
//!
//! ```text
//! index = n_0 * d^(m-1) + n_1 * d^(m-2) + ... + n_{m-1}
//! ```
//!
//! Every embedding of a single-mode operator into the full space routes
//! through one internal `embed` helper, so this convention cannot drift
//! between operators.
//!
//! Truncation note: the canonical commutator `[b, b†] = 1` cannot hold on a
//! finite ladder; it holds on the subspace excluding the top level `|d-1>`.
//! Diagonal (number-conserving) conjugations are exact on the whole
//! truncated space; identities involving `b b†` are only asserted away from
//! the edge.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

/// Hard cap on the total dimension of any constructed space.
pub const MAX_TOTAL_DIM: usize = 4096;

/// Tolerance for Hermiticity / norm / trace verification.
pub const VERIFY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("mode {mode} out of range for a {num_modes}-mode space")]
    ModeOutOfRange { mode: usize, num_modes: usize },
    #[error("total dimension {dim} exceeds the cap {MAX_TOTAL_DIM}")]
    SpaceTooLarge { dim: usize },
    #[error("space must have at least one mode and at least one level per mode")]
    EmptySpace,
    #[error("operators live on different spaces")]
    SpaceMismatch,
    #[error("matrix dimension {got} does not match the space dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("state norm {norm} deviates from 1 beyond {VERIFY_TOL}")]
    NormViolation { norm: f64 },
    #[error("density trace {trace} deviates from 1 beyond {VERIFY_TOL}")]
    TraceViolation { trace: f64 },
    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("partial trace requires a density state; convert the vector first")]
    VectorPartialTrace,
    #[error("keep set must be a nonempty subset of the modes")]
    BadKeepSet,
    #[error("reduced density has eigenvalue {min_eig:.3e} below the -1e-10 floor")]
    NotPositive { min_eig: f64 },
}

/// Descriptor of a truncated multi-mode Fock space.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FockSpace {
    num_modes: usize,
    dim_per_mode: usize,
}

impl FockSpace {
    pub fn new(num_modes: usize, dim_per_mode: usize) -> Result<Self, FockError> {
        if num_modes == 0 || dim_per_mode == 0 {
            return Err(FockError::EmptySpace);
        }
        let mut dim: usize = 1;
        for _ in 0..num_modes {
            dim = dim
                .checked_mul(dim_per_mode)
                .filter(|&d| d <= MAX_TOTAL_DIM)
                .ok_or(FockError::SpaceTooLarge { dim: usize::MAX })?;
        }
        Ok(Self { num_modes, dim_per_mode })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn dim_per_mode(&self) -> usize {
        self.dim_per_mode
    }

    pub fn total_dim(&self) -> usize {
        self.dim_per_mode.pow(self.num_modes as u32)
    }

    /// Basis index of an occupation vector (mode 0 slowest-varying).
    pub fn index(&self, occupations: &[usize]) -> usize {
        assert_eq!(occupations.len(), self.num_modes, "occupation vector length");
        let mut idx = 0;
        for &n in occupations {
            assert!(n < self.dim_per_mode, "occupation {} exceeds cutoff", n);
            idx = idx * self.dim_per_mode + n;
        }
        idx
    }

    /// Occupation vector of a basis index.
    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.num_modes];
        for j in (0..self.num_modes).rev() {
            occ[j] = index % self.dim_per_mode;
            index /= self.dim_per_mode;
        }
        occ
    }
}

/// Dense operator on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    space: FockSpace,
    mat: DMatrix<Complex64>,
}

impl FockOperator {
    /// Wraps an explicit matrix; dimension must match the space.
    pub fn from_matrix(space: FockSpace, mat: DMatrix<Complex64>) -> Result<Self, FockError> {
        let d = space.total_dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(FockError::DimensionMismatch { got: mat.nrows(), expected: d });
        }
        Ok(Self { space, mat })
    }

    pub fn zeros(space: FockSpace) -> Self {
        let d = space.total_dim();
        Self { space, mat: DMatrix::zeros(d, d) }
    }

    pub fn identity(space: FockSpace) -> Self {
        let d = space.total_dim();
        Self { space, mat: DMatrix::identity(d, d) }
    }

    /// Single-mode lowering operator embedded in the full space:
    /// `<n-1| b |n> = sqrt(n)`, truncated at the cutoff.
    pub fn annihilation(space: FockSpace, mode: usize) -> Result<Self, FockError> {
        let d = space.dim_per_mode();
        let mut single = DMatrix::zeros(d, d);
        for n in 1..d {
            single[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Self::embed(space, mode, &single)
    }

    /// Raising operator; exactly the adjoint of [`Self::annihilation`].
    pub fn creation(space: FockSpace, mode: usize) -> Result<Self, FockError> {
        Ok(Self::annihilation(space, mode)?.adjoint())
    }

    /// Number operator `b† b`, diagonal `(0, 1, ..., d-1)` on its mode.
    pub fn number(space: FockSpace, mode: usize) -> Result<Self, FockError> {
        let d = space.dim_per_mode();
        let mut single = DMatrix::zeros(d, d);
        for n in 0..d {
            single[(n, n)] = Complex64::new(n as f64, 0.0);
        }
        Self::embed(space, mode, &single)
    }

    /// The one embedding routine: places a d x d single-mode operator on
    /// `mode`, identity elsewhere, honoring the module's index convention.
    fn embed(space: FockSpace, mode: usize, single: &DMatrix<Complex64>) -> Result<Self, FockError> {
        if mode >= space.num_modes() {
            return Err(FockError::ModeOutOfRange { mode, num_modes: space.num_modes() });
        }
        let total = space.total_dim();
        let d = space.dim_per_mode();
        // stride of `mode` in the row-major index, product of dims of faster modes
        let stride = d.pow((space.num_modes() - 1 - mode) as u32);
        let mut mat = DMatrix::zeros(total, total);
        // Nonzero entries connect indices that differ only in `mode`'s digit.
        for col in 0..total {
            let n_col = (col / stride) % d;
            let base = col - n_col * stride;
            for n_row in 0..d {
                let v = single[(n_row, n_col)];
                if v != ZERO_C {
                    mat[(base + n_row * stride, col)] = v;
                }
            }
        }
        Ok(Self { space, mat })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space, mat: self.mat.adjoint() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        if self.space != other.space {
            return Err(FockError::SpaceMismatch);
        }
        Ok(Self { space: self.space, mat: &self.mat + &other.mat })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FockError> {
        if self.space != other.space {
            return Err(FockError::SpaceMismatch);
        }
        Ok(Self { space: self.space, mat: &self.mat - &other.mat })
    }

    /// Operator product `self * other` (self acts after other).
    pub fn mul(&self, other: &Self) -> Result<Self, FockError> {
        if self.space != other.space {
            return Err(FockError::SpaceMismatch);
        }
        Ok(Self { space: self.space, mat: &self.mat * &other.mat })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { space: self.space, mat: &self.mat * c }
    }

    /// Max-abs entry of `A - A†`.
    pub fn hermiticity_residual(&self) -> f64 {
        let diff = &self.mat - self.mat.adjoint();
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= VERIFY_TOL
    }

    /// Max-abs entry of `A†A - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.space.total_dim();
        let diff = self.mat.adjoint() * &self.mat - DMatrix::<Complex64>::identity(d, d);
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_residual() <= 1e-10
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.mat)
    }

    /// Trace of the matrix.
    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn has_finite_entries(&self) -> bool {
        self.mat.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

pub(crate) fn spectral_norm(mat: &DMatrix<Complex64>) -> f64 {
    mat.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |a, &b| a.max(b))
}

/// `exp(scale * A)`.
///
/// Hermitian inputs go through an eigendecomposition (so `i * Hermitian`
/// exponentials are unitary to machine precision); everything else takes
/// the general scaling-and-squaring route.
pub fn matrix_exponential(a: &FockOperator, scale: Complex64) -> Result<FockOperator, FockError> {
    if !a.has_finite_entries() || !(scale.re.is_finite() && scale.im.is_finite()) {
        return Err(FockError::NonFinite);
    }
    let mat = if a.is_hermitian() {
        let eig = nalgebra::linalg::SymmetricEigen::new(a.mat.clone());
        let phases = DVector::from_iterator(
            eig.eigenvalues.len(),
            eig.eigenvalues.iter().map(|&l| (scale * l).exp()),
        );
        let v = &eig.eigenvectors;
        v * DMatrix::from_diagonal(&phases) * v.adjoint()
    } else {
        (&a.mat * scale).exp()
    };
    Ok(FockOperator { space: a.space, mat })
}

/// Spectral-norm distance `||A - B||`.
pub fn op_distance(a: &FockOperator, b: &FockOperator) -> Result<f64, FockError> {
    Ok(a.sub(b)?.spectral_norm())
}

/// Global-phase-invariant distance `min over phi of ||A - e^{i phi} B||`.
///
/// Seeded at the Frobenius-optimal phase `arg tr(B† A)` plus a coarse grid,
/// then refined by golden-section search on the spectral-norm objective.
pub fn op_distance_phase_invariant(a: &FockOperator, b: &FockOperator) -> Result<f64, FockError> {
    if a.space != b.space {
        return Err(FockError::SpaceMismatch);
    }
    let objective = |phi: f64| {
        let rot = &b.mat * Complex64::from_polar(1.0, phi);
        spectral_norm(&(&a.mat - rot))
    };
    let frob_seed = (b.mat.adjoint() * &a.mat).trace().arg();
    let mut best_phi = frob_seed;
    let mut best = objective(frob_seed);
    let coarse = 32;
    for k in 0..coarse {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / coarse as f64;
        let v = objective(phi);
        if v < best {
            best = v;
            best_phi = phi;
        }
    }
    // Golden-section refine around the best candidate.
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let window = 2.0 * std::f64::consts::PI / coarse as f64;
    let (mut lo, mut hi) = (best_phi - window, best_phi + window);
    let (mut c, mut d) = (hi - gr * (hi - lo), lo + gr * (hi - lo));
    let (mut fc, mut fd) = (objective(c), objective(d));
    for _ in 0..60 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = objective(d);
        }
    }
    Ok(best.min(fc).min(fd))
}

/// Pure or mixed state on a truncated Fock space.
#[derive(Clone, Debug)]
pub enum FockState {
    Vector { space: FockSpace, amplitudes: DVector<Complex64> },
    Density { space: FockSpace, matrix: DMatrix<Complex64> },
}

impl FockState {
    /// Basis (number) state with the given occupations.
    pub fn basis(space: FockSpace, occupations: &[usize]) -> Self {
        let mut amps = DVector::zeros(space.total_dim());
        amps[space.index(occupations)] = ONE;
        FockState::Vector { space, amplitudes: amps }
    }

    /// Normalized vector state; rejects norms off 1 beyond 1e-12.
    pub fn vector(space: FockSpace, amplitudes: DVector<Complex64>) -> Result<Self, FockError> {
        if amplitudes.len() != space.total_dim() {
            return Err(FockError::DimensionMismatch {
                got: amplitudes.len(),
                expected: space.total_dim(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > VERIFY_TOL {
            return Err(FockError::NormViolation { norm });
        }
        Ok(FockState::Vector { space, amplitudes })
    }

    /// Superposition of basis states, normalized for the caller.
    pub fn superposition(space: FockSpace, parts: &[(Vec<usize>, Complex64)]) -> Result<Self, FockError> {
        let mut amps: DVector<Complex64> = DVector::zeros(space.total_dim());
        for (occ, a) in parts {
            amps[space.index(occ)] += *a;
        }
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(FockError::NormViolation { norm });
        }
        amps /= Complex64::new(norm, 0.0);
        Ok(FockState::Vector { space, amplitudes: amps })
    }

    /// Density state; rejects traces off 1 beyond 1e-12.
    pub fn density(space: FockSpace, matrix: DMatrix<Complex64>) -> Result<Self, FockError> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(FockError::DimensionMismatch { got: matrix.nrows(), expected: d });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > VERIFY_TOL || tr.im.abs() > VERIFY_TOL {
            return Err(FockError::TraceViolation { trace: tr.re });
        }
        Ok(FockState::Density { space, matrix })
    }

    pub fn space(&self) -> FockSpace {
        match self {
            FockState::Vector { space, .. } | FockState::Density { space, .. } => *space,
        }
    }

    /// |psi><psi| for vectors; identity on densities.
    pub fn to_density(&self) -> FockState {
        match self {
            FockState::Vector { space, amplitudes } => FockState::Density {
                space: *space,
                matrix: amplitudes * amplitudes.adjoint(),
            },
            d @ FockState::Density { .. } => d.clone(),
        }
    }

    /// Applies a unitary: `U v` on vectors, `U rho U†` on densities.
    pub fn apply_unitary(&self, u: &FockOperator) -> Result<FockState, FockError> {
        if u.space != self.space() {
            return Err(FockError::SpaceMismatch);
        }
        Ok(match self {
            FockState::Vector { space, amplitudes } => FockState::Vector {
                space: *space,
                amplitudes: &u.mat * amplitudes,
            },
            FockState::Density { space, matrix } => FockState::Density {
                space: *space,
                matrix: &u.mat * matrix * u.mat.adjoint(),
            },
        })
    }

    pub fn amplitudes(&self) -> Option<&DVector<Complex64>> {
        match self {
            FockState::Vector { amplitudes, .. } => Some(amplitudes),
            _ => None,
        }
    }

    pub fn density_matrix(&self) -> Option<&DMatrix<Complex64>> {
        match self {
            FockState::Density { matrix, .. } => Some(matrix),
            _ => None,
        }
    }
}

/// Diagonal projector onto basis states of total occupation at most
/// `max_total`.
///
/// Mode-mixing unitaries conserve total photon number, so they act exactly
/// on any sector the per-mode cutoff keeps complete — those with total
/// occupation below the single-mode cutoff. Comparisons of conjugation
/// identities on truncated spaces restrict to that safe region by
/// right-multiplying with this projector.
pub fn total_occupation_projector(space: FockSpace, max_total: usize) -> FockOperator {
    let dim = space.total_dim();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for idx in 0..dim {
        if space.occupations(idx).iter().sum::<usize>() <= max_total {
            mat[(idx, idx)] = ONE;
        }
    }
    FockOperator { space, mat }
}

/// Traces out every mode not in `keep`, returning the reduced density state
/// on the kept modes (in their original order).
///
/// Requires a density input (convert vectors with [`FockState::to_density`]);
/// preserves the trace to 1e-12 and verifies the result is positive
/// semidefinite down to a -1e-10 eigenvalue floor.
pub fn partial_trace(state: &FockState, keep: &[usize]) -> Result<FockState, FockError> {
    let (space, rho) = match state {
        FockState::Density { space, matrix } => (*space, matrix),
        FockState::Vector { .. } => return Err(FockError::VectorPartialTrace),
    };
    let m = space.num_modes();
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.is_empty() || keep_sorted.iter().any(|&k| k >= m) {
        return Err(FockError::BadKeepSet);
    }
    let traced: Vec<usize> = (0..m).filter(|j| !keep_sorted.contains(j)).collect();
    let out_space = FockSpace::new(keep_sorted.len(), space.dim_per_mode())?;
    if traced.is_empty() {
        return FockState::density(out_space, rho.clone());
    }

    let d = space.dim_per_mode();
    let dim_out = out_space.total_dim();
    let dim_tr = d.pow(traced.len() as u32);
    let mut out = DMatrix::<Complex64>::zeros(dim_out, dim_out);
    let tr_space_dims = traced.len();
    // Assemble full-space occupation vectors from (kept, traced) digit pairs.
    let mut occ = vec![0usize; m];
    for i_out in 0..dim_out {
        let occ_keep_i = out_space.occupations(i_out);
        for j_out in 0..dim_out {
            let occ_keep_j = out_space.occupations(j_out);
            let mut acc = ZERO_C;
            for t in 0..dim_tr {
                // digits of t over the traced modes
                let mut tt = t;
                let mut occ_tr = vec![0usize; tr_space_dims];
                for j in (0..tr_space_dims).rev() {
                    occ_tr[j] = tt % d;
                    tt /= d;
                }
                for (pos, &mode) in keep_sorted.iter().enumerate() {
                    occ[mode] = occ_keep_i[pos];
                }
                for (pos, &mode) in traced.iter().enumerate() {
                    occ[mode] = occ_tr[pos];
                }
                let row = space.index(&occ);
                for (pos, &mode) in keep_sorted.iter().enumerate() {
                    occ[mode] = occ_keep_j[pos];
                }
                let col = space.index(&occ);
                acc += rho[(row, col)];
            }
            out[(i_out, j_out)] = acc;
        }
    }

    let tr = out.trace();
    if (tr.re - rho.trace().re).abs() > VERIFY_TOL {
        return Err(FockError::TraceViolation { trace: tr.re });
    }
    let min_eig = nalgebra::linalg::SymmetricEigen::new(out.clone())
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    if min_eig < -1e-10 {
        return Err(FockError::NotPositive { min_eig });
    }
    Ok(FockState::Density { space: out_space, matrix: out })
}
