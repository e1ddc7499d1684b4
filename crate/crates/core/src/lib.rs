//! Finite lattices, their congruence lattices, and constructions that
//! realize a prescribed distributive lattice as `Con L` with a prescribed
//! set of principal congruences.

pub mod bitset;
pub mod certificate;
pub mod chainrep;
pub mod congruence;
pub mod error;
pub mod gadgets;
pub mod io;
pub mod iso;
pub mod lattice;
pub mod pipeline;
pub mod quasicolor;
pub mod search;
pub mod verify;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use lattice::{Elem, FiniteLattice};
