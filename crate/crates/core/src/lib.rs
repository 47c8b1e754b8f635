//! Functional calculus `f[X]` for diagonalizable and quasi-diagonalizable
//! complex matrices, built on divided differences and Hermite interpolation.
//!
//! Module layout, bottom up:
//!
//! - [`numkit`]: dense complex matrices, norms, rank tests, eigensolver.
//! - [`funcspec`]: scalar functions (parsed expressions or sample tables) and their domains.
//! - [`divdiff`]: plain and confluent divided-difference tables, Opitz bidiagonal matrices.
//! - [`interp`]: Newton and Hermite interpolating polynomials.
//! - [`funcalc`]: the calculus itself, spectrum analysis and eigenvalue pairing.
//! - [`regclass`]: sampled estimators for bounded/convergent divided differences and Taylor remainders.
//! - [`probes`]: parameter sweeps that reproduce continuity and discontinuity constructions.

pub mod numkit;
pub mod funcspec;
pub mod divdiff;
pub mod interp;
pub mod funcalc;
pub mod regclass;
pub mod probes;
