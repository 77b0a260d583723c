//! Spatial bang-bang decoupling of photon noise in optical fibers.
//!
//! Fast optical devices (phase shifters, beam splitters) inserted at regular
//! intervals along a fiber act as "kicks" that average away the coupling
//! between the traveling photon modes and their environment, in direct
//! analogy with dynamical decoupling pulse sequences. This crate provides
//! the machinery to design and verify such device sequences and to size the
//! required device spacing:
//!
//! - [`fock`]: truncated multi-mode Fock spaces, dense operators, states,
//!   exponentials, and partial traces;
//! - [`exact`]: exact rational-angle and cyclotomic arithmetic backing the
//!   symbolic phase calculus;
//! - [`control`]: the optical device alphabet (phase shifters, beam
//!   splitters) and device sequences;
//! - [`monomial`]: symbolic conjugation of creation/annihilation monomials
//!   by device unitaries, survival weights, and elimination checks;
//! - [`search`]: breadth-first search for minimal cyclic sequences that
//!   eliminate a target set of interaction monomials;
//! - [`fiber`]: system-bath Hamiltonians for photon modes coupled to
//!   ancillary noise modes, with seeded random inhomogeneities;
//! - [`propagate`]: segment-by-segment propagation with and without
//!   interleaved devices, fidelity/coherence/purity figures of merit;
//! - [`bound`]: decoherence-rate integrals, their closed forms, and
//!   inversion for the device spacing that meets an error budget.

pub mod bound;
pub mod exact;
pub mod control;
pub mod fiber;
pub mod fock;
pub mod monomial;
pub mod propagate;
pub mod search;
