//! Optical control devices and device sequences.
//!
//! A *device* is a fast passive two-mode transformation inserted into the
//! fiber: either a pair of phase shifters `ps(a, b) = exp(i(a n1 + b n2))`
//! (angles given as rational multiples of pi) or a beam splitter
//! `bs(t) = exp(2t (b1† b2 - b2† b1))`.
//!
//! A *sequence* of m devices divides the fiber into m equal segments,
//! written `[m, E_m, ..., 2, E_2, 1, E_1]`: the photon traverses segment 1,
//! then device E_1 fires, then segment 2, and so on; E_m closes the cycle.
//! During segment s the accumulated control is `C_s = E_{s-1} ... E_1`
//! (so `C_1 = I`), which is what conjugates the interaction Hamiltonian in
//! the averaging analysis. The final device E_m never appears in any `C_s`;
//! it only determines whether the sequence is *cyclic*, i.e. whether the
//! net two-mode action `E_m ... E_1` is the identity.
//!
//! Every device acts on the photon pair `(b1, b2)` by conjugation as
//! `C† b_i C = sum_j W_ij b_j` with
//!
//! ```text
//! ps(a, b):  W = diag(e^{ia}, e^{ib})
//! bs(t):     W = [[cos 2t, sin 2t], [-sin 2t, cos 2t]]
//! ```
//!
//! so `bs(1/4 pi)` swaps the modes up to a sign: `b1 -> b2, b2 -> -b1`.
//!
//! Named devices, in quarter-turn units of pi/2 on (mode 1, mode 2):
//!
//! | name    | angles       | action                                   |
//! |---------|--------------|------------------------------------------|
//! | Pi      | (2, 2)       | parity kick on both modes                |
//! | Pi1     | (2, 0)       | parity kick on mode 1 only               |
//! | G       | (1, 3)       | differential quarter-wave (G^2 = Pi)     |
//! | Gd      | (3, 1)       | its inverse                              |
//! | PiGPi1  | (1, 1)       | uniform quarter-wave                     |
//!
//! Because angles add mod 2 pi, the composites `Pi * Gd` and `Pi * G` equal
//! `G` and `Gd` as unitaries; the parser accepts all spellings and display
//! canonicalizes by value.

use crate::exact::{gauss_w_mul, GaussInt, GaussW, RationalAngle, GAUSS_W_IDENTITY};
use crate::fock::{matrix_exponential, FockError, FockOperator, FockSpace};
use nalgebra::Matrix2;
use num_complex::Complex64;
use std::fmt;

/// Float 2x2 image of a control on the photon-pair annihilation operators.
pub type TwoModeW = Matrix2<Complex64>;

/// A single fast optical device acting on the two photon modes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Device {
    /// `exp(i (alpha n1 + beta n2))` — independent phase shifts.
    PhaseShifter { alpha: RationalAngle, beta: RationalAngle },
    /// `exp(2 theta (b1† b2 - b2† b1))` — passive mode mixing.
    BeamSplitter { theta: RationalAngle },
}

impl Device {
    pub fn phase_shifter(alpha: RationalAngle, beta: RationalAngle) -> Self {
        Device::PhaseShifter { alpha, beta }
    }

    pub fn beam_splitter(theta: RationalAngle) -> Self {
        Device::BeamSplitter { theta }
    }

    /// Phase shifter in quarter turns of pi/2 per mode.
    fn quarters(a: i64, b: i64) -> Self {
        Device::PhaseShifter {
            alpha: RationalAngle::new(a, 2),
            beta: RationalAngle::new(b, 2),
        }
    }

    /// The do-nothing device.
    pub fn identity() -> Self {
        Self::quarters(0, 0)
    }

    /// Parity kick on both modes: `exp(i pi (n1 + n2))`.
    pub fn pi() -> Self {
        Self::quarters(2, 2)
    }

    /// Parity kick on mode 1 only: `exp(i pi n1)`.
    pub fn pi1() -> Self {
        Self::quarters(2, 0)
    }

    /// Differential quarter-wave `exp(i pi/2 (n1 - n2))`; squares to `Pi`.
    pub fn gamma() -> Self {
        Self::quarters(1, 3)
    }

    /// Inverse of [`Device::gamma`].
    pub fn gamma_dagger() -> Self {
        Self::quarters(3, 1)
    }

    /// Composite `Pi * Gd`; equal to [`Device::gamma`] as a unitary.
    pub fn pi_gamma_dagger() -> Self {
        Self::quarters(1, 3)
    }

    /// Composite `Pi * G`; equal to [`Device::gamma_dagger`] as a unitary.
    pub fn pi_gamma() -> Self {
        Self::quarters(3, 1)
    }

    /// Composite `Pi * G * Pi1`: uniform quarter-wave on both modes.
    pub fn pi_gamma_pi1() -> Self {
        Self::quarters(1, 1)
    }

    /// Phase-shifter angles, if this is a phase shifter.
    pub fn phase_pair(&self) -> Option<(RationalAngle, RationalAngle)> {
        match self {
            Device::PhaseShifter { alpha, beta } => Some((*alpha, *beta)),
            Device::BeamSplitter { .. } => None,
        }
    }

    pub fn is_beam_splitter(&self) -> bool {
        matches!(self, Device::BeamSplitter { .. })
    }

    /// Float image on the annihilation pair (see the module docs).
    pub fn w(&self) -> TwoModeW {
        match self {
            Device::PhaseShifter { alpha, beta } => Matrix2::new(
                Complex64::from_polar(1.0, alpha.as_f64()),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, beta.as_f64()),
            ),
            Device::BeamSplitter { theta } => {
                let t = 2.0 * theta.as_f64();
                let (s, c) = t.sin_cos();
                Matrix2::new(
                    Complex64::new(c, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(-s, 0.0),
                    Complex64::new(c, 0.0),
                )
            }
        }
    }

    /// Exact Gaussian-integer image, available when every entry lies in
    /// {0, ±1, ±i} — phase shifters at quarter turns, beam splitters whose
    /// doubled angle is a quarter turn.
    pub fn w_gauss(&self) -> Option<GaussW> {
        const Z: GaussInt = GaussInt::ZERO;
        match self {
            Device::PhaseShifter { alpha, beta } => {
                let qa = alpha.quarter_turns()?;
                let qb = beta.quarter_turns()?;
                Some([[GaussInt::unit(qa), Z], [Z, GaussInt::unit(qb)]])
            }
            Device::BeamSplitter { theta } => {
                let q = theta.times(2).quarter_turns()?;
                // cos/sin of q * pi/2 over q = 0..3
                let (c, s) = match q {
                    0 => (1, 0),
                    1 => (0, 1),
                    2 => (-1, 0),
                    _ => (0, -1),
                };
                let g = |v: i64| GaussInt { re: v, im: 0 };
                Some([[g(c), g(s)], [g(-s), g(c)]])
            }
        }
    }

    /// Full-space unitary with the device acting on `modes.0` as photon
    /// mode 1 and `modes.1` as photon mode 2.
    ///
    /// Phase shifters are built as exact diagonals (entries are exact
    /// {±1, ±i} at quarter turns); beam splitters go through the Hermitian
    /// exponential.
    pub fn unitary(
        &self,
        space: FockSpace,
        modes: (usize, usize),
    ) -> Result<FockOperator, FockError> {
        let (m1, m2) = modes;
        if m1 >= space.num_modes() || m2 >= space.num_modes() || m1 == m2 {
            return Err(FockError::ModeOutOfRange {
                mode: m1.max(m2),
                num_modes: space.num_modes(),
            });
        }
        match self {
            Device::PhaseShifter { alpha, beta } => {
                let dim = space.total_dim();
                let mut mat = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
                let quarters = alpha.quarter_turns().zip(beta.quarter_turns());
                for idx in 0..dim {
                    let occ = space.occupations(idx);
                    let (n1, n2) = (occ[m1] as i64, occ[m2] as i64);
                    mat[(idx, idx)] = match quarters {
                        Some((qa, qb)) => {
                            let g = GaussInt::unit(
                                ((qa as i64 * n1 + qb as i64 * n2).rem_euclid(4)) as u8,
                            );
                            Complex64::new(g.re as f64, g.im as f64)
                        }
                        None => Complex64::from_polar(
                            1.0,
                            alpha.as_f64() * n1 as f64 + beta.as_f64() * n2 as f64,
                        ),
                    };
                }
                FockOperator::from_matrix(space, mat)
            }
            Device::BeamSplitter { theta } => {
                let b1 = FockOperator::annihilation(space, m1)?;
                let b2 = FockOperator::annihilation(space, m2)?;
                let m = b1.adjoint().mul(&b2)?;
                // Hermitian generator h = -i (b1† b2 - b2† b1); U = exp(i 2t h)
                let h = m.sub(&m.adjoint())?.scale(Complex64::new(0.0, -1.0));
                matrix_exponential(&h, Complex64::new(0.0, 2.0 * theta.as_f64()))
            }
        }
    }
}

impl fmt::Display for Device {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Device::PhaseShifter { alpha, beta } => {
                let named = alpha.quarter_turns().zip(beta.quarter_turns()).and_then(
                    |(a, b)| match (a, b) {
                        (0, 0) => Some("I"),
                        (2, 2) => Some("Pi"),
                        (2, 0) => Some("Pi1"),
                        (1, 3) => Some("G"),
                        (3, 1) => Some("Gd"),
                        (1, 1) => Some("PiGPi1"),
                        _ => None,
                    },
                );
                match named {
                    Some(name) => write!(f, "{}", name),
                    None => write!(f, "ps({}, {})", frac(alpha), frac(beta)),
                }
            }
            Device::BeamSplitter { theta } => write!(f, "bs({})", frac(theta)),
        }
    }
}

/// Renders an angle as a fraction of pi, e.g. `3/2` for 3 pi / 2.
fn frac(a: &RationalAngle) -> String {
    if a.denom() == 1 {
        format!("{}", a.numer())
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SequenceError {
    #[error("a device sequence needs at least one device")]
    Empty,
    #[error("cumulative control index {index} out of range 1..={len}")]
    SegmentOutOfRange { index: usize, len: usize },
}

/// An ordered list of devices `E_1, ..., E_m` defining an m-segment cycle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeviceSequence {
    devices: Vec<Device>,
}

impl DeviceSequence {
    /// Devices in firing order (`E_1` first).
    pub fn new(devices: Vec<Device>) -> Result<Self, SequenceError> {
        if devices.is_empty() {
            return Err(SequenceError::Empty);
        }
        Ok(Self { devices })
    }

    /// `[2, Pi, 1, Pi]` — the basic parity pair. Cancels every interaction
    /// term that is linear in the photon operators.
    pub fn omega12() -> Self {
        Self { devices: vec![Device::pi(), Device::pi()] }
    }

    /// `[4, Pi, 3, PiGd, 2, Pi, 1, PiG]` — the nested four-step cycle. On
    /// top of the linear terms it cancels the mode-mixing and squeezing-type
    /// bilinears.
    pub fn omega1234() -> Self {
        Self {
            devices: vec![
                Device::pi_gamma(),
                Device::pi(),
                Device::pi_gamma_dagger(),
                Device::pi(),
            ],
        }
    }

    /// `[8, Pi, 7, PiGd, 6, Pi, 5, PiGPi1, 4, Pi, 3, PiGd, 2, Pi, 1, PiGPi1]`
    /// — the eight-step cycle whose accumulated controls sweep the full
    /// eight-element quarter-turn phase group, additionally cancelling the
    /// single-mode squeezing bilinears.
    pub fn eight_step() -> Self {
        Self {
            devices: vec![
                Device::pi_gamma_pi1(),
                Device::pi(),
                Device::pi_gamma_dagger(),
                Device::pi(),
                Device::pi_gamma_pi1(),
                Device::pi(),
                Device::pi_gamma_dagger(),
                Device::pi(),
            ],
        }
    }

    /// `[1, I]` — one segment, no kick: free evolution as a degenerate cycle.
    pub fn free() -> Self {
        Self { devices: vec![Device::identity()] }
    }

    pub fn len(&self) -> usize {
        self.devices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.devices.is_empty() // always false by construction
    }

    pub fn devices(&self) -> &[Device] {
        &self.devices
    }

    pub fn contains_beam_splitter(&self) -> bool {
        self.devices.iter().any(Device::is_beam_splitter)
    }

    /// Accumulated control during segment `s` (1-based) as a float 2x2
    /// image: `C_s = E_{s-1} ... E_1`, with `C_1 = I`.
    pub fn cumulative_w(&self, s: usize) -> Result<TwoModeW, SequenceError> {
        if s < 1 || s > self.devices.len() {
            return Err(SequenceError::SegmentOutOfRange { index: s, len: self.devices.len() });
        }
        let mut w = TwoModeW::identity();
        for device in &self.devices[..s - 1] {
            w = device.w() * w;
        }
        Ok(w)
    }

    /// Net action of the whole cycle, `E_m ... E_1`.
    pub fn total_w(&self) -> TwoModeW {
        let mut w = TwoModeW::identity();
        for device in &self.devices {
            w = device.w() * w;
        }
        w
    }

    /// Accumulated phase-shifter angles during segment `s`, when every
    /// device in `C_s` is a phase shifter (exact, mod 2 pi per mode).
    pub fn cumulative_phase_pair(
        &self,
        s: usize,
    ) -> Result<Option<(RationalAngle, RationalAngle)>, SequenceError> {
        if s < 1 || s > self.devices.len() {
            return Err(SequenceError::SegmentOutOfRange { index: s, len: self.devices.len() });
        }
        let mut alpha = RationalAngle::zero();
        let mut beta = RationalAngle::zero();
        for device in &self.devices[..s - 1] {
            match device.phase_pair() {
                Some((a, b)) => {
                    alpha = alpha.add(&a);
                    beta = beta.add(&b);
                }
                None => return Ok(None),
            }
        }
        Ok(Some((alpha, beta)))
    }

    /// Full-space unitary of the accumulated control `C_s` on the given
    /// photon modes.
    pub fn cumulative_unitary(
        &self,
        space: FockSpace,
        modes: (usize, usize),
        s: usize,
    ) -> Result<FockOperator, FockError> {
        assert!(s >= 1 && s <= self.devices.len(), "segment index out of range");
        let mut u = FockOperator::identity(space);
        for device in &self.devices[..s - 1] {
            u = device.unitary(space, modes)?.mul(&u)?;
        }
        Ok(u)
    }

    /// Whether the net cycle action is the identity on the photon pair.
    ///
    /// Exact for pure phase-shifter sequences (rational angle sums) and for
    /// quarter-turn alphabets including beam splitters (Gaussian-integer
    /// arithmetic); other mixes fall back to a float product with a 1e-9
    /// tolerance.
    ///
    /// `W_total = I` is the right notion on every photon-number sector at
    /// once: the sector of total occupation n transforms by the n-fold
    /// symmetric power of `W_total`, so any residual net phase or mixing
    /// acts differently on different sectors and the cycle fails to close.
    pub fn is_cyclic(&self) -> bool {
        if !self.contains_beam_splitter() {
            let mut alpha = RationalAngle::zero();
            let mut beta = RationalAngle::zero();
            for device in &self.devices {
                let (a, b) = device.phase_pair().expect("no beam splitters present");
                alpha = alpha.add(&a);
                beta = beta.add(&b);
            }
            return alpha.is_zero() && beta.is_zero();
        }
        let gauss: Option<Vec<GaussW>> = self.devices.iter().map(Device::w_gauss).collect();
        if let Some(ws) = gauss {
            let mut acc = GAUSS_W_IDENTITY;
            for w in &ws {
                acc = gauss_w_mul(w, &acc);
            }
            return acc == GAUSS_W_IDENTITY;
        }
        let w = self.total_w();
        (w - TwoModeW::identity()).norm() < 1e-9
    }

    /// Exact accumulated control image during segment `s`, when every
    /// contributing device has a Gaussian-integer image.
    pub fn cumulative_w_gauss(&self, s: usize) -> Result<Option<GaussW>, SequenceError> {
        if s < 1 || s > self.devices.len() {
            return Err(SequenceError::SegmentOutOfRange { index: s, len: self.devices.len() });
        }
        let mut acc = GAUSS_W_IDENTITY;
        for device in &self.devices[..s - 1] {
            match device.w_gauss() {
                Some(w) => acc = gauss_w_mul(&w, &acc),
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }
}

impl fmt::Display for DeviceSequence {
    /// Interval notation `[m, E_m, ..., 1, E_1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (pos, device) in self.devices.iter().enumerate().rev() {
            write!(f, "{}, {}", pos + 1, device)?;
            if pos > 0 {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}
