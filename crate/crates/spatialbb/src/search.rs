//! Breadth-first search for minimal cyclic sequences that eliminate a
//! target set of interaction monomials.
//!
//! The search walks sequences `E_1, E_2, ...` over a fixed device alphabet.
//! Rather than enumerating all `|alphabet|^length` paths, prefixes are
//! merged into *states* that capture everything the future can depend on:
//! the accumulated control so far plus, per target, the partial sum of
//! conjugates collected from the segments already traversed. Two prefixes
//! with equal states have identical completions, so the first layer
//! containing a solution state gives the true minimal length.
//!
//! All state arithmetic is exact:
//!
//! - phase-shifter alphabets track cumulative angles as rationals and each
//!   partial sum as an integer vector over powers of a root of unity
//!   (folded with `zeta^(n/2) = -1`); zero-ness is decided modulo the
//!   cyclotomic polynomial;
//! - alphabets containing beam splitters require quarter-turn devices and
//!   track Gaussian-integer control matrices with monomial-map partial
//!   sums.
//!
//! After the minimal length is known, the solution list is rebuilt by
//! plain enumeration at that length whenever that is affordable — an
//! independent pass through the public elimination API ([`crate::monomial`])
//! that both cross-checks the state machinery and yields the exact solution
//! count. Otherwise the deduplicated witnesses from the search itself are
//! reported and marked as such.

use crate::control::{Device, DeviceSequence, SequenceError};
use crate::exact::{
    gauss_w_mul, unit_sum_is_zero_from_counts, GaussInt, GaussW, RationalAngle,
    GAUSS_W_IDENTITY,
};
use crate::monomial::{conjugate_gauss, eliminates_all, CalculusError, Monomial};
use std::collections::{BTreeMap, HashMap};

/// Most sequences of interest are single digits long; the hard cap keeps
/// state growth and memory in check.
pub const MAX_SEARCH_STEPS: usize = 20;

/// Cap on `|alphabet|^minimal_length` for the exhaustive solution pass.
const EXHAUSTIVE_CAP: u64 = 2_000_000;

/// At most this many solutions are listed (lexicographically first by
/// alphabet index).
pub const SOLUTION_LIST_CAP: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("target set must not be empty")]
    EmptyTargets,
    #[error("max_steps must be in 1..={MAX_SEARCH_STEPS}, got {got}")]
    BadMaxSteps { got: usize },
    #[error("alphabets containing beam splitters must consist of quarter-turn devices")]
    UnsupportedAlphabet,
    #[error("phase denominators too fine for the search encoding (lcm {lcm} > 100)")]
    AnglesTooFine { lcm: i64 },
    #[error("state budget of {budget} states exceeded at length {length}")]
    StateBudgetExceeded { budget: usize, length: usize },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// What to search for.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub alphabet: Vec<Device>,
    pub targets: Vec<Monomial>,
    pub max_steps: usize,
    /// Abort (with an error) if a layer would exceed this many states.
    pub state_budget: usize,
}

impl SearchSpec {
    pub fn new(alphabet: Vec<Device>, targets: Vec<Monomial>, max_steps: usize) -> Self {
        Self { alphabet, targets, max_steps, state_budget: 2_000_000 }
    }
}

/// Search result.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// Shortest solving length, or `None` if nothing solves within
    /// `max_steps` (a definitive negative: the state space is covered).
    pub minimal_length: Option<usize>,
    /// Solutions at the minimal length, lexicographically first by
    /// alphabet index, at most [`SOLUTION_LIST_CAP`].
    pub solutions: Vec<DeviceSequence>,
    /// True when `solutions` came from full enumeration at the minimal
    /// length (then `solutions_total` is the exact count); false when only
    /// deduplicated search witnesses are listed.
    pub solutions_exhaustive: bool,
    pub solutions_total: Option<usize>,
    /// Total states across all explored layers.
    pub states_explored: usize,
}

/// Runs the minimal-length search for `spec`.
pub fn search_minimal(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    if spec.alphabet.is_empty() {
        return Err(SearchError::EmptyAlphabet);
    }
    if spec.targets.is_empty() {
        return Err(SearchError::EmptyTargets);
    }
    if spec.max_steps == 0 || spec.max_steps > MAX_SEARCH_STEPS {
        return Err(SearchError::BadMaxSteps { got: spec.max_steps });
    }
    let has_bs = spec.alphabet.iter().any(Device::is_beam_splitter);
    let raw = if has_bs {
        search_gauss(spec)?
    } else {
        search_phases(spec)?
    };
    let (minimal_length, witnesses, states_explored) = raw;
    let Some(len) = minimal_length else {
        return Ok(SearchOutcome {
            minimal_length: None,
            solutions: vec![],
            solutions_exhaustive: true,
            solutions_total: Some(0),
            states_explored,
        });
    };

    // Exhaustive confirmation pass at the minimal length, through the
    // public elimination API rather than the state machinery.
    let path_count = (spec.alphabet.len() as u64).checked_pow(len as u32);
    if let Some(count) = path_count.filter(|&c| c <= EXHAUSTIVE_CAP) {
        let mut total = 0usize;
        let mut solutions = Vec::new();
        let mut indices = vec![0usize; len];
        for _ in 0..count {
            let devices: Vec<Device> =
                indices.iter().map(|&i| spec.alphabet[i]).collect();
            let seq = DeviceSequence::new(devices)?;
            if seq.is_cyclic() && eliminates_all(&seq, &spec.targets)? {
                total += 1;
                if solutions.len() < SOLUTION_LIST_CAP {
                    solutions.push(seq);
                }
            }
            // odometer, most significant at the end: E_1 varies slowest,
            // giving lexicographic order in (E_1, ..., E_len)
            for pos in (0..len).rev() {
                indices[pos] += 1;
                if indices[pos] < spec.alphabet.len() {
                    break;
                }
                indices[pos] = 0;
            }
        }
        debug_assert!(total > 0, "search layer reported a solution the sweep cannot find");
        return Ok(SearchOutcome {
            minimal_length,
            solutions,
            solutions_exhaustive: true,
            solutions_total: Some(total),
            states_explored,
        });
    }

    let mut solutions = Vec::new();
    for path in witnesses.into_iter().take(SOLUTION_LIST_CAP) {
        let devices: Vec<Device> = path.iter().map(|&i| spec.alphabet[i as usize]).collect();
        solutions.push(DeviceSequence::new(devices)?);
    }
    Ok(SearchOutcome {
        minimal_length,
        solutions,
        solutions_exhaustive: false,
        solutions_total: None,
        states_explored,
    })
}

type RawResult = (Option<usize>, Vec<Vec<u8>>, usize);

fn lcm(a: i64, b: i64) -> i64 {
    let gcd = {
        let (mut x, mut y) = (a.abs(), b.abs());
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    a / gcd * b
}

/// Phase-shifter-only search: state is (cumulative angles, per-target
/// integer vector over zeta_n powers 0..n/2 with zeta^(n/2) = -1).
fn search_phases(spec: &SearchSpec) -> Result<RawResult, SearchError> {
    let pairs: Vec<(RationalAngle, RationalAngle)> = spec
        .alphabet
        .iter()
        .map(|d| d.phase_pair().ok_or(SearchError::UnsupportedAlphabet))
        .collect::<Result<_, _>>()?;
    let mut l = 1i64;
    for (a, b) in &pairs {
        l = lcm(l, a.denom());
        l = lcm(l, b.denom());
    }
    if l > 100 {
        return Err(SearchError::AnglesTooFine { lcm: l });
    }
    let n = 2 * l;
    let half = l as usize;
    let tcount = spec.targets.len();

    #[derive(Clone, PartialEq, Eq, Hash)]
    struct State {
        cum: (RationalAngle, RationalAngle),
        vecs: Vec<i64>, // tcount * half entries
    }

    let start = State {
        cum: (RationalAngle::zero(), RationalAngle::zero()),
        vecs: vec![0; tcount * half],
    };
    let mut frontier: HashMap<State, Vec<u8>> = HashMap::from([(start, vec![])]);
    let mut states_explored = 0usize;

    for length in 1..=spec.max_steps {
        let mut next: HashMap<State, Vec<u8>> = HashMap::new();
        for (state, path) in &frontier {
            // contribution of the segment about to be traversed, one
            // e^{-i theta} per target, independent of the appended device
            let mut stepped = state.vecs.clone();
            for (t, m) in spec.targets.iter().enumerate() {
                let theta = m.phase_of(state.cum.0, state.cum.1).neg();
                let e = (theta.numer() * l / theta.denom()).rem_euclid(n) as usize;
                if e < half {
                    stepped[t * half + e] += 1;
                } else {
                    stepped[t * half + e - half] -= 1;
                }
            }
            for (idx, (da, db)) in pairs.iter().enumerate() {
                let new_state = State {
                    cum: (state.cum.0.add(da), state.cum.1.add(db)),
                    vecs: stepped.clone(),
                };
                let mut new_path = path.clone();
                new_path.push(idx as u8);
                match next.get_mut(&new_state) {
                    Some(existing) => {
                        if new_path < *existing {
                            *existing = new_path;
                        }
                    }
                    None => {
                        // bound memory while the layer is being built, not after
                        if next.len() >= spec.state_budget {
                            return Err(SearchError::StateBudgetExceeded {
                                budget: spec.state_budget,
                                length,
                            });
                        }
                        next.insert(new_state, new_path);
                    }
                }
            }
        }
        states_explored += next.len();

        let mut witnesses: Vec<Vec<u8>> = next
            .iter()
            .filter(|(s, _)| {
                s.cum.0.is_zero()
                    && s.cum.1.is_zero()
                    && (0..tcount).all(|t| {
                        unit_sum_is_zero_from_counts(&s.vecs[t * half..(t + 1) * half], n)
                    })
            })
            .map(|(_, p)| p.clone())
            .collect();
        if !witnesses.is_empty() {
            witnesses.sort();
            return Ok((Some(length), witnesses, states_explored));
        }
        frontier = next;
    }
    Ok((None, vec![], states_explored))
}

/// Quarter-turn search with beam splitters: state is (Gaussian control
/// matrix, per-target monomial maps with Gaussian coefficients).
fn search_gauss(spec: &SearchSpec) -> Result<RawResult, SearchError> {
    let ws: Vec<GaussW> = spec
        .alphabet
        .iter()
        .map(|d| d.w_gauss().ok_or(SearchError::UnsupportedAlphabet))
        .collect::<Result<_, _>>()?;
    let tcount = spec.targets.len();

    #[derive(Clone, PartialEq, Eq, Hash)]
    struct State {
        cum: GaussW,
        sums: Vec<BTreeMap<Monomial, GaussInt>>,
    }

    let start = State { cum: GAUSS_W_IDENTITY, sums: vec![BTreeMap::new(); tcount] };
    let mut frontier: HashMap<State, Vec<u8>> = HashMap::from([(start, vec![])]);
    let mut states_explored = 0usize;

    for length in 1..=spec.max_steps {
        let mut next: HashMap<State, Vec<u8>> = HashMap::new();
        for (state, path) in &frontier {
            let mut stepped = state.sums.clone();
            for (t, m) in spec.targets.iter().enumerate() {
                for (mono, coeff) in conjugate_gauss(m, &state.cum) {
                    let entry = stepped[t].entry(mono).or_insert(GaussInt::ZERO);
                    *entry = entry.add(&coeff);
                }
                // canonical form: drop exact zeros so equal sums hash equal
                stepped[t].retain(|_, c| !c.is_zero());
            }
            for (idx, w) in ws.iter().enumerate() {
                let new_state = State { cum: gauss_w_mul(w, &state.cum), sums: stepped.clone() };
                let mut new_path = path.clone();
                new_path.push(idx as u8);
                match next.get_mut(&new_state) {
                    Some(existing) => {
                        if new_path < *existing {
                            *existing = new_path;
                        }
                    }
                    None => {
                        // bound memory while the layer is being built, not after
                        if next.len() >= spec.state_budget {
                            return Err(SearchError::StateBudgetExceeded {
                                budget: spec.state_budget,
                                length,
                            });
                        }
                        next.insert(new_state, new_path);
                    }
                }
            }
        }
        states_explored += next.len();

        let mut witnesses: Vec<Vec<u8>> = next
            .iter()
            .filter(|(s, _)| {
                s.cum == GAUSS_W_IDENTITY && s.sums.iter().all(BTreeMap::is_empty)
            })
            .map(|(_, p)| p.clone())
            .collect();
        if !witnesses.is_empty() {
            witnesses.sort();
            return Ok((Some(length), witnesses, states_explored));
        }
        frontier = next;
    }
    Ok((None, vec![], states_explored))
}
