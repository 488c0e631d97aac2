//! Parity tree automata over finite-memory labeled trees.

mod automata;
mod change;
mod emptiness;
mod ndet;
mod pbf;
mod regular;

pub use automata::{build_synthesis_apt, Apt, Npt};
pub use change::change;
pub use emptiness::{apt_emptiness, npt_emptiness};
pub use ndet::ndet;
pub use pbf::{Model, Pbf};
pub use regular::{all_trees, tree_compose, RegularTree};
