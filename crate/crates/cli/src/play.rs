//! Interactive game REPL.

use std::io::{BufRead, Write};

use loopfo_core::game::{Controller, Player, SessionMode, SessionOutcome};
use loopfo_core::GameSession;

use crate::output::{load_model, parse_assign, parse_with};
use crate::{CliError, CliResult, FormulaArg};

pub fn run(
    model: &str,
    formula: &FormulaArg,
    assign: &str,
    side: &str,
    clock: Option<u32>,
) -> CliResult {
    let m = load_model(model)?;
    let f = parse_with(formula, Some(m.vocab()))?;
    let s = parse_assign(assign)?;
    let mode = match side {
        "eloise" => SessionMode {
            eloise: Controller::Human,
            abelard: Controller::Engine,
        },
        "abelard" => SessionMode {
            eloise: Controller::Engine,
            abelard: Controller::Human,
        },
        "spectate" => SessionMode {
            eloise: Controller::Engine,
            abelard: Controller::Engine,
        },
        other => {
            return Err(CliError::input(format!(
                "unknown side `{other}` (expected eloise, abelard or spectate)"
            )))
        }
    };
    let mut session = GameSession::new(&m, &s, &f, mode, clock)?;
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    println!("playing {} on a {}-element structure", f, m.domain_size());
    if let Some(c) = clock {
        println!("clock: {c} claim jumps");
    }

    let mut rounds = 0usize;
    loop {
        match session.outcome() {
            SessionOutcome::Won(p) => {
                println!("{p} wins.");
                return Ok(0);
            }
            SessionOutcome::Draw => {
                println!("draw: neither player wins this play.");
                return Ok(0);
            }
            SessionOutcome::Ongoing => {}
        }
        let pos = session.current_position().clone();
        let player = session.to_move().expect("ongoing");
        println!(
            "\n[{player} to move] {} {} sign {}{}",
            session.current_subformula(),
            if pos.assign.is_empty() {
                String::new()
            } else {
                format!("[{}]", pos.assign)
            },
            pos.sign,
            pos.clock.map(|c| format!(" clock {c}")).unwrap_or_default()
        );
        let moves = session.legal_moves();
        match session.controller_to_move().expect("ongoing") {
            Controller::Engine => {
                let pick = session.hint().expect("ongoing");
                println!("{player} plays {}: {}", pick, moves[pick]);
                session.apply_move(pick).expect("hint is legal");
                // spectate mode has no human; guard against endless loops
                rounds += 1;
                if rounds > 400 {
                    println!("stopping after 400 rounds of engine play (infinite play is a draw).");
                    return Ok(0);
                }
            }
            Controller::Human => {
                for (i, m) in moves.iter().enumerate() {
                    println!("  {i}) {m}");
                }
                print!("move (index, `hint`, or `quit`)> ");
                std::io::stdout().flush().ok();
                let Some(Ok(line)) = lines.next() else {
                    println!("\nend of input; leaving the game.");
                    return Ok(0);
                };
                let cmd = line.trim();
                match cmd {
                    "quit" | "q" => return Ok(0),
                    "hint" | "h" => {
                        if let Some(i) = session.hint() {
                            println!("hint: {i}) {}", moves[i]);
                        }
                    }
                    other => match other.parse::<usize>() {
                        Ok(i) if i < moves.len() => {
                            let mover = player;
                            session.apply_move(i).expect("checked index");
                            let _ = mover;
                        }
                        _ => println!("enter a move index between 0 and {}", moves.len() - 1),
                    },
                }
            }
        }
        let _ = &pos;
        if matches!(session.outcome(), SessionOutcome::Ongoing) {
            continue;
        }
    }
}

#[allow(dead_code)]
fn player_name(p: Player) -> &'static str {
    match p {
        Player::Eloise => "Eloise",
        Player::Abelard => "Abelard",
    }
}
