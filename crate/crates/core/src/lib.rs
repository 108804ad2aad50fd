//! Construction, validation, and classification of consistent operator
//! subspaces for open-system dynamics with correlated initial states:
//! assignment maps, subsystem dynamical maps, operator-sum
//! representations, physical domains, and the three inequivalent notions
//! of complete positivity (CP, CPTE, CPZE).
//!
//! The flow mirrors the objects themselves: [`opspace`] builds a
//! subspace `V ⊂ B(H_S ⊗ H_B)` and splits off the kernel of the partial
//! trace, [`consistency`] decides whether a family of evolutions keeps
//! that kernel invisible, [`assignment`] inverts the partial trace on
//! the quotient, [`dynmaps`] pushes states through
//! `Tr_B ∘ Ad_U ∘ A_V`, and [`cpclass`] classifies the resulting maps
//! with certificates. [`gallery`] rebuilds the known example families
//! as regression anchors, and [`report`] wires everything into a
//! machine-readable pipeline shared by the CLI and the browser demo.
//!
//! All values are immutable after construction and safe to share across
//! threads; randomized searches are deterministic under their recorded
//! seeds.

pub mod assignment;
pub mod consistency;
pub mod cpclass;
pub mod dynmaps;
pub mod error;
pub mod feasibility;
pub mod gallery;
pub mod linalg;
pub mod opspace;
pub mod random;
pub mod report;

pub use error::{Error, Result};
