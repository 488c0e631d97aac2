//! Parity games: two-player solving and the multi-player game of a formula.

mod multi;
mod parity;

pub use multi::{
    build_multi_game, extract_team_strategy, sequentialize, verify_profile, MultiParityGame,
    SeqPosition, Sequentialized, TeamStrategyProfile,
};
pub use parity::{ParityGame, Player, Solution};
