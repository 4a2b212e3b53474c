//! Thermodynamic formalism for subshifts over `Z` and `Z^2`.
//!
//! The crate is organized around five layers:
//!
//! * [`group`] — lattice geometry: shapes, translates, sparseness,
//!   interiors/boundaries, Folner boxes, box tilings and sparse
//!   almost-partitions.
//! * [`subshift`] — subshift specifications, language enumeration,
//!   occurrence counting, replacements, extender-set comparison and the
//!   swap maps that exchange two configurations at a fixed window.
//! * [`potential`] — locally constant and summable-variation potentials,
//!   Birkhoff sums, variations, the SV norm and the homoclinic cocycle
//!   with rigorous truncation error.
//! * [`equilibrium`] — pressure and equilibrium-measure computation:
//!   the exact 1D transfer-operator pipeline, finite-window partition
//!   sums, a variational cross-check and Shannon-McMillan-Breiman
//!   sampling.
//! * [`audit`] — numerical certification of the measure inequalities
//!   (replaceability bound, locally constant corollary, MME corollary),
//!   the Radon-Nikodym bounds, the counting lemmas and the Stirling gap
//!   function.
//!
//! The core is `no_std` (with `alloc`); all types are immutable values
//! and all operations are pure functions, so everything here is safe to
//! call from concurrent contexts. IO, the CLI and file formats live in
//! the companion `subshift-tools` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod audit;
pub mod equilibrium;
pub mod group;
pub mod potential;
pub mod rng;
pub mod subshift;

pub use group::{AlmostPartition, BoxTiling, Dim, Shape, Site};
pub use potential::{CocycleValue, LocallyConstantPotential, Potential, SvPotential};
pub use subshift::{Alphabet, ExtenderReport, Pattern, PointApprox, SubshiftSpec};
