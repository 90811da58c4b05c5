#![allow(dead_code)]

//! Independent oracle: brute-force clocked game-tree search implemented
//! directly from the game rules, with its own occurrence table and
//! assignment representation. It shares only the syntax tree with the
//! engine under test — no arenas, no attractors, no jump distances.

use std::collections::HashMap;

use loopfo_core::structures::Structure;
use loopfo_core::syntax::Formula;
use loopfo_core::Assignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaiveOutcome {
    Eloise,
    Abelard,
    Draw,
}

struct Table {
    nodes: Vec<Formula>,
    children: Vec<Vec<usize>>,
    /// claim → reference occurrence (nearest same-label ancestor)
    reference: Vec<Option<usize>>,
    vars: Vec<String>,
}

fn build_table(f: &Formula) -> Table {
    let mut nodes = Vec::new();
    let mut children = Vec::new();
    let mut parents: Vec<Option<usize>> = Vec::new();
    fn walk(
        f: &Formula,
        parent: Option<usize>,
        nodes: &mut Vec<Formula>,
        children: &mut Vec<Vec<usize>>,
        parents: &mut Vec<Option<usize>>,
    ) -> usize {
        let id = nodes.len();
        nodes.push(f.clone());
        children.push(Vec::new());
        parents.push(parent);
        for c in f.children() {
            let cid = walk(c, Some(id), nodes, children, parents);
            children[id].push(cid);
        }
        id
    }
    walk(f, None, &mut nodes, &mut children, &mut parents);
    let reference = (0..nodes.len())
        .map(|i| match &nodes[i] {
            Formula::Claim(k) => {
                let mut up = parents[i];
                while let Some(j) = up {
                    if matches!(&nodes[j], Formula::Labeled(k2, _) if k2 == k) {
                        return Some(j);
                    }
                    up = parents[j];
                }
                None
            }
            _ => None,
        })
        .collect();
    let vars: Vec<String> = f.all_variables().into_iter().collect();
    Table {
        nodes,
        children,
        reference,
        vars,
    }
}

struct Oracle<'a> {
    table: Table,
    m: &'a Structure,
    /// (occurrence, assignment vector, sign, fuel, player) → wins?
    memo: HashMap<(usize, Vec<usize>, bool, u32, bool), bool>,
}

const UNSET: usize = usize::MAX;

impl<'a> Oracle<'a> {
    fn atom_true(&self, occ: usize, assign: &[usize]) -> bool {
        let lookup = |v: &String| {
            let i = self
                .table
                .vars
                .iter()
                .position(|w| w == v)
                .expect("known var");
            assign[i]
        };
        match &self.table.nodes[occ] {
            Formula::Falsum => false,
            Formula::Equal(x, y) => lookup(x) == lookup(y),
            Formula::Atom(p, args) => {
                let tuple: Vec<usize> = args.iter().map(lookup).collect();
                self.m.holds(p, &tuple)
            }
            _ => unreachable!(),
        }
    }

    /// Does `player` (true = Eloise) have a winning strategy from this
    /// position of the clocked game?
    fn wins(&mut self, occ: usize, assign: &[usize], plus: bool, fuel: u32, player: bool) -> bool {
        let key = (occ, assign.to_vec(), plus, fuel, player);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        // recursion terminates: moves descend the syntax tree except
        // claim jumps, which strictly decrease the fuel
        let result = match &self.table.nodes[occ] {
            Formula::Falsum | Formula::Atom(..) | Formula::Equal(..) => {
                let truth = self.atom_true(occ, assign);
                let eloise_wins = truth == plus;
                eloise_wins == player
            }
            Formula::Claim(_) => match self.table.reference[occ] {
                None => false, // free claim: neither player wins
                Some(r) => {
                    if fuel == 0 {
                        false // out of clock: neither player wins
                    } else {
                        self.wins(r, assign, plus, fuel - 1, player)
                    }
                }
            },
            Formula::Not(_) => {
                let c = self.table.children[occ][0];
                self.wins(c, assign, !plus, fuel, player)
            }
            Formula::Labeled(..) => {
                let c = self.table.children[occ][0];
                self.wins(c, assign, plus, fuel, player)
            }
            Formula::And(..) | Formula::Or(..) => {
                let conj = matches!(self.table.nodes[occ], Formula::And(..));
                let abelard_moves = conj == plus;
                let mover_is_player = abelard_moves != player;
                let kids = self.table.children[occ].clone();
                if mover_is_player {
                    kids.iter()
                        .any(|&c| self.wins(c, assign, plus, fuel, player))
                } else {
                    kids.iter()
                        .all(|&c| self.wins(c, assign, plus, fuel, player))
                }
            }
            Formula::Exists(x, _) | Formula::Forall(x, _) => {
                let univ = matches!(self.table.nodes[occ], Formula::Forall(..));
                let abelard_moves = univ == plus;
                let mover_is_player = abelard_moves != player;
                let c = self.table.children[occ][0];
                let xi = self
                    .table
                    .vars
                    .iter()
                    .position(|w| w == x)
                    .expect("known var");
                let mut other = assign.to_vec();
                let domain = self.m.domain_size();
                let check = |this: &mut Self, e: usize, other: &mut Vec<usize>| {
                    other[xi] = e;
                    this.wins(c, other, plus, fuel, player)
                };
                if mover_is_player {
                    (0..domain).any(|e| check(self, e, &mut other))
                } else {
                    (0..domain).all(|e| check(self, e, &mut other))
                }
            }
        };
        self.memo.insert(key, result);
        result
    }
}

fn run(m: &Structure, s: &Assignment, f: &Formula, fuel: u32) -> NaiveOutcome {
    // deep game trees need more stack than the 2 MiB test threads carry
    let m = m.clone();
    let s = s.clone();
    let f = f.clone();
    std::thread::Builder::new()
        .stack_size(256 * 1024 * 1024)
        .spawn(move || run_inner(&m, &s, &f, fuel))
        .expect("spawn oracle thread")
        .join()
        .expect("oracle thread")
}

fn run_inner(m: &Structure, s: &Assignment, f: &Formula, fuel: u32) -> NaiveOutcome {
    let table = build_table(f);
    let assign: Vec<usize> = table
        .vars
        .iter()
        .map(|v| s.get(v).unwrap_or(UNSET))
        .collect();
    for (v, slot) in table.vars.iter().zip(&assign) {
        if *slot == UNSET {
            assert!(
                !f.free_variables().contains(v),
                "oracle needs the free variable {v} assigned"
            );
        }
    }
    // unassigned bound variables never get read before their quantifier
    // sets them; normalize to 0 so memo keys stay canonical
    let assign: Vec<usize> = assign
        .into_iter()
        .map(|e| if e == UNSET { 0 } else { e })
        .collect();
    let mut oracle = Oracle {
        table,
        m,
        memo: HashMap::new(),
    };
    let eloise = oracle.wins(0, &assign, true, fuel, true);
    let abelard = oracle.wins(0, &assign, true, fuel, false);
    assert!(
        !(eloise && abelard),
        "both players cannot win the same game"
    );
    if eloise {
        NaiveOutcome::Eloise
    } else if abelard {
        NaiveOutcome::Abelard
    } else {
        NaiveOutcome::Draw
    }
}

/// Verdict of the n-bounded game by exhaustive game-tree search.
pub fn naive_clocked(m: &Structure, s: &Assignment, f: &Formula, n: u32) -> NaiveOutcome {
    run(m, s, f, n)
}

/// Verdict of the unbounded game: on a finite structure a winner wins
/// within one pass over the positions, so a clock larger than the
/// position count is equivalent to no clock at all.
pub fn naive_unbounded(m: &Structure, s: &Assignment, f: &Formula) -> NaiveOutcome {
    let occs = f.occurrences().len() as u64;
    let vars = f.all_variables().len() as u32;
    let fuel = occs
        .saturating_mul((m.domain_size() as u64).saturating_pow(vars))
        .saturating_mul(2)
        .saturating_add(1);
    run(
        m,
        s,
        f,
        u32::try_from(fuel.min(1 << 24)).expect("bounded fuel"),
    )
}

/// Digraph cycle detection by depth-first search (allows reflexive
/// loops), for the cycle-sentence acceptance check.
pub fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    fn dfs(v: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &u in &adj[v] {
            match state[u] {
                0 => {
                    if dfs(u, adj, state) {
                        return true;
                    }
                }
                1 => return true,
                _ => {}
            }
        }
        state[v] = 2;
        false
    }
    (0..n).any(|v| state[v] == 0 && dfs(v, &adj, &mut state))
}

/// Outcome ↔ engine verdict comparison helper.
pub fn same_outcome(naive: NaiveOutcome, engine: loopfo_core::Outcome) -> bool {
    matches!(
        (naive, engine),
        (NaiveOutcome::Eloise, loopfo_core::Outcome::EloiseWins)
            | (NaiveOutcome::Abelard, loopfo_core::Outcome::AbelardWins)
            | (NaiveOutcome::Draw, loopfo_core::Outcome::Undetermined)
    )
}
