//! ω-word automata over explicit alphabets `2^vars`.

mod complement;
mod dpw;
mod ltl;
mod nbw;
pub(crate) mod safra;

pub use complement::complement_rank_based;
pub use dpw::{complement_via_dpw, nbw_to_dpw, Dpw};
pub use ltl::ltl_to_nbw;
pub(crate) use nbw::check_alphabet;
pub use nbw::{Nbw, MAX_ALPHABET_VARS};
