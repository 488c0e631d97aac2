use serde::{Deserialize, Serialize};

use crate::graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player who wins when `color` is the largest seen infinitely often.
    pub fn of_color(color: u32) -> Player {
        if color.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

/// Two-player max-even parity game on a finite arena.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub moves: Vec<Vec<u32>>,
    pub color: Vec<u32>,
    pub initial: u32,
}

/// Winning regions and positional strategies: `strategy[v]` is the move of
/// `owner[v]` and is winning whenever `v` lies in its owner's region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<u32>,
}

impl ParityGame {
    pub fn new(owner: Vec<Player>, moves: Vec<Vec<u32>>, color: Vec<u32>, initial: u32) -> Self {
        let mut g = ParityGame {
            owner,
            moves,
            color,
            initial,
        };
        g.close_dead_ends();
        g
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    // a stuck owner loses: loop forever on a color bad for them
    fn close_dead_ends(&mut self) {
        for v in 0..self.owner.len() {
            if self.moves[v].is_empty() {
                self.moves[v].push(v as u32);
                let c = self.color[v];
                let bad = match self.owner[v] {
                    Player::Even => c | 1,
                    Player::Odd => c + (c & 1),
                };
                self.color[v] = bad;
            }
            self.moves[v].sort_unstable();
            self.moves[v].dedup();
        }
    }

    pub fn solve(&self) -> Solution {
        let n = self.len();
        let mut preds = vec![Vec::new(); n];
        for (v, ms) in self.moves.iter().enumerate() {
            for &w in ms {
                preds[w as usize].push(v as u32);
            }
        }
        let mut winner = vec![Player::Even; n];
        let mut strategy: Vec<u32> = self.moves.iter().map(|m| m[0]).collect();
        let all = vec![true; n];
        let solver = Zielonka { game: self, preds };
        solver.solve(&all, &mut winner, &mut strategy);
        Solution { winner, strategy }
    }

    /// Checks that `player`, following `strategy` from every position of
    /// `region`, stays in `region` and wins every resulting play.
    pub fn verify(&self, player: Player, region: &[bool], strategy: &[u32]) -> bool {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for v in 0..n {
            if !region[v] {
                continue;
            }
            if self.owner[v] == player {
                let w = strategy[v] as usize;
                if !region[w] || !self.moves[v].contains(&(w as u32)) {
                    return false;
                }
                adj[v].push(w);
            } else {
                for &w in &self.moves[v] {
                    if !region[w as usize] {
                        return false;
                    }
                    adj[v].push(w as usize);
                }
            }
        }
        // no cycle whose top color favors the opponent
        let mut colors: Vec<u32> = (0..n)
            .filter(|&v| region[v])
            .map(|v| self.color[v])
            .collect();
        colors.sort_unstable();
        colors.dedup();
        for c in colors {
            if Player::of_color(c) == player {
                continue;
            }
            let sub: Vec<Vec<usize>> = (0..n)
                .map(|v| {
                    if self.color[v] > c {
                        Vec::new()
                    } else {
                        adj[v]
                            .iter()
                            .copied()
                            .filter(|&w| self.color[w] <= c)
                            .collect()
                    }
                })
                .collect();
            let (comp, count) = graph::scc(&sub);
            let cyclic = graph::nontrivial(&sub, &comp, count);
            if (0..n).any(|v| region[v] && self.color[v] == c && cyclic[v]) {
                return false;
            }
        }
        true
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph game {\n");
        for v in 0..self.len() {
            let shape = match self.owner[v] {
                Player::Even => "circle",
                Player::Odd => "box",
            };
            s.push_str(&format!(
                "  p{v} [shape={shape}, label=\"{v} / {}\"];\n",
                self.color[v]
            ));
        }
        for (v, ms) in self.moves.iter().enumerate() {
            for w in ms {
                s.push_str(&format!("  p{v} -> p{w};\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}

struct Zielonka<'a> {
    game: &'a ParityGame,
    preds: Vec<Vec<u32>>,
}

impl Zielonka<'_> {
    /// Attractor of `target` for `player` inside `arena`; records attracting
    /// moves for the player's positions.
    fn attractor(
        &self,
        arena: &[bool],
        target: &[bool],
        player: Player,
        strategy: &mut [u32],
    ) -> Vec<bool> {
        let g = self.game;
        let n = g.len();
        let mut inside = target.to_vec();
        let mut escapes: Vec<usize> = (0..n)
            .map(|v| g.moves[v].iter().filter(|&&w| arena[w as usize]).count())
            .collect();
        let mut queue: std::collections::VecDeque<usize> = (0..n).filter(|&v| inside[v]).collect();
        while let Some(w) = queue.pop_front() {
            for &v in &self.preds[w] {
                let v = v as usize;
                if !arena[v] || inside[v] {
                    continue;
                }
                if g.owner[v] == player {
                    // lowest-numbered move into the attractor
                    strategy[v] = *g.moves[v]
                        .iter()
                        .find(|&&u| inside[u as usize] && arena[u as usize])
                        .expect("w is a successor");
                    inside[v] = true;
                    queue.push_back(v);
                } else {
                    escapes[v] -= 1;
                    if escapes[v] == 0 {
                        inside[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        inside
    }

    fn solve(&self, arena: &[bool], winner: &mut [Player], strategy: &mut [u32]) {
        let g = self.game;
        let n = g.len();
        let Some(top) = (0..n).filter(|&v| arena[v]).map(|v| g.color[v]).max() else {
            return;
        };
        let p = Player::of_color(top);
        let target: Vec<bool> = (0..n).map(|v| arena[v] && g.color[v] == top).collect();
        let a = self.attractor(arena, &target, p, strategy);
        let rest: Vec<bool> = (0..n).map(|v| arena[v] && !a[v]).collect();
        self.solve(&rest, winner, strategy);
        let opp_wins = (0..n).any(|v| rest[v] && winner[v] != p);
        if !opp_wins {
            for v in 0..n {
                if !arena[v] {
                    continue;
                }
                winner[v] = p;
                if target[v] && g.owner[v] == p {
                    strategy[v] = *g.moves[v]
                        .iter()
                        .find(|&&u| arena[u as usize])
                        .expect("subgames are traps");
                }
            }
            return;
        }
        let opp_region: Vec<bool> = (0..n).map(|v| rest[v] && winner[v] != p).collect();
        let b = self.attractor(arena, &opp_region, p.opponent(), strategy);
        for v in 0..n {
            if b[v] {
                winner[v] = p.opponent();
            }
        }
        let remaining: Vec<bool> = (0..n).map(|v| arena[v] && !b[v]).collect();
        self.solve(&remaining, winner, strategy);
    }
}
