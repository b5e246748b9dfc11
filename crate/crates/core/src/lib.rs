//! Stabilizer-tableau simulation of graph states with self-loops, the
//! Clifford rewrite rules that act on them, and the comparison and
//! readout protocols built on top.

pub mod densesim;
pub mod dyadic;
pub mod gf2;
pub mod graphmodel;
pub mod graphstate;
pub mod protocols;
pub mod readout;
pub mod tableau;

pub use dyadic::Dyadic;
pub use graphmodel::{Graph, GraphError};
pub use graphstate::{Counters, DeleteMode, GraphRegister, GraphStateError};
pub use protocols::{Outcome, ParityKind, TrialRecord};
pub use readout::{CopySource, PreparedCopies, ReadoutError, ReadoutRun};
pub use tableau::{Gate, Pauli, PauliString, Sign, Tableau, TableauError};
