//! Exact-arithmetic toolkit for permutation statistics and continued fractions.
//!
//! The crate is organized around five layers:
//!
//! * [`permstat`] — permutations and their statistics: the cycle, record, and
//!   record-and-cycle classifications, index-refined crossing/nesting counts,
//!   inversions, and the parity identities relating them.
//! * [`polyring`] — sparse multivariate polynomials over arbitrary-precision
//!   integers, with doubly-indexed variable families, substitution, modular
//!   evaluation, and `[n]_{p,q}` brackets.
//! * [`cfkit`] — truncated formal power series and the expansion of S-, T-,
//!   and J-type continued fractions from level-indexed coefficient
//!   generators, plus the even contraction T → J.
//! * [`families`] — enumeration of permutations, D-permutations, and
//!   cycle-alternating permutations, and the weighted generating polynomials
//!   built as exact sums over those families.
//! * [`verifier`] — a registry pairing each enumeration series with its
//!   continued-fraction counterpart, checked symbolically at small order and
//!   by random modular specialization at larger order.
//!
//! The `cyclefrac` binary exposes all of this on the command line; see
//! [`cli`].

pub mod cfkit;
pub mod cli;
pub mod families;
pub mod permstat;
pub mod polyring;
pub mod verifier;
