use std::io::{BufRead, Write};

use fibsub::grundy::SubtractionSet;
use fibsub::theorem::{classify, sum_winner, Move};

use crate::{Failure, EXIT_OK};

struct Game {
    positions: Vec<u64>,
    set: SubtractionSet,
}

impl Game {
    fn single(&self) -> bool {
        self.positions.len() == 1
    }

    fn legal(&self, component: usize) -> Vec<u64> {
        self.set.subtrahends_upto(self.positions[component])
    }

    fn has_move(&self) -> bool {
        // 1 is in S, so any positive component can move
        self.positions.iter().any(|&x| x > 0)
    }

    fn state(&self) -> String {
        if self.single() {
            format!("position {}", self.positions[0])
        } else {
            let parts: Vec<String> = self.positions.iter().map(u64::to_string).collect();
            format!("positions [{}]", parts.join(", "))
        }
    }

    fn legal_line(&self) -> String {
        let join = |v: Vec<u64>| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        if self.single() {
            format!("legal subtrahends: {}", join(self.legal(0)))
        } else {
            let parts: Vec<String> = (0..self.positions.len())
                .filter(|&i| self.positions[i] > 0)
                .map(|i| format!("#{i}: {}", join(self.legal(i))))
                .collect();
            format!("legal subtrahends: {}", parts.join("; "))
        }
    }

    fn describe(&self, m: Move) -> String {
        if self.single() {
            format!("{}", m.subtrahend)
        } else {
            format!("{} from #{}", m.subtrahend, m.component)
        }
    }

    fn parse(&self, line: &str) -> Result<Move, String> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let number = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| format!("{t:?} is not a nonnegative integer"))
        };
        let (component, subtrahend) = match tokens.as_slice() {
            [s] if self.single() => (0, number(s)?),
            [c, s] => (number(c)? as usize, number(s)?),
            [] => return Err("enter a move".into()),
            _ if self.single() => return Err("enter a subtrahend".into()),
            _ => return Err("enter a move as: component subtrahend".into()),
        };
        let Some(&x) = self.positions.get(component) else {
            return Err(format!("there is no component #{component}"));
        };
        if !self
            .set
            .iter()
            .take_while(|&s| s <= subtrahend)
            .any(|s| s == subtrahend)
        {
            return Err(format!("{subtrahend} is not in S"));
        }
        if subtrahend > x {
            return Err(format!("{subtrahend} exceeds the position {x}"));
        }
        Ok(Move {
            component,
            subtrahend,
        })
    }

    /// Restores nim-sum 0 if possible, otherwise takes the smallest legal
    /// subtrahend from the first nonempty component.
    fn engine_move(&self) -> Result<Move, Failure> {
        if let Some(m) = sum_winner(&self.positions)?.winning_move {
            return Ok(m);
        }
        let component = self
            .positions
            .iter()
            .position(|&x| x > 0)
            .expect("caller checked that a move exists");
        Ok(Move {
            component,
            subtrahend: 1,
        })
    }

    fn apply(&mut self, m: Move) {
        self.positions[m.component] -= m.subtrahend;
    }
}

/// Interactive game against the engine. The human moves first unless
/// `engine_first` is set. End of input resigns.
pub fn play(
    positions: &[u64],
    engine_first: bool,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    for &x in positions {
        classify(x)?;
    }
    let mut game = Game {
        positions: positions.to_vec(),
        set: SubtractionSet::odd_fibonacci_minus_one(),
    };
    writeln!(
        out,
        "subtract an element of S = {{1, 4, 12, 33, 88, ...}}; a player with no legal move loses"
    )?;
    let mut human_turn = !engine_first;
    loop {
        writeln!(out, "{}", game.state())?;
        if !game.has_move() {
            if human_turn {
                writeln!(out, "no legal move, you lose")?;
            } else {
                writeln!(out, "engine has no legal move, you win")?;
            }
            return Ok(EXIT_OK);
        }
        if human_turn {
            writeln!(out, "{}", game.legal_line())?;
            let m = loop {
                write!(out, "your move> ")?;
                out.flush()?;
                let mut line = String::new();
                if input.read_line(&mut line)? == 0 {
                    writeln!(out)?;
                    writeln!(out, "you resign, engine wins")?;
                    return Ok(EXIT_OK);
                }
                match game.parse(&line) {
                    Ok(m) => break m,
                    Err(why) => writeln!(out, "illegal move: {why}")?,
                }
            };
            writeln!(out, "you subtract {}", game.describe(m))?;
            game.apply(m);
        } else {
            let m = game.engine_move()?;
            writeln!(out, "engine subtracts {}", game.describe(m))?;
            game.apply(m);
        }
        human_turn = !human_turn;
    }
}
