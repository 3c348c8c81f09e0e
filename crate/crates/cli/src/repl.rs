//! Line-oriented interactive session over one fibration and its history.

use std::fs;
use std::io::{self, BufRead, Write};

use lefschetz_core::{fibration_to_json, AbstractLF, Mode, SearchBudget};

use crate::{cmd_invariants, load_fibration};

const HELP: &str = "commands: load <file|expr>, show, moves, apply <N|move>, undo, \
mode <weinstein|smooth>, n <dim>, invariants, save <file>, help, quit";

/// Session state: the current fibration and the states before each move.
pub struct Session {
    current: Option<AbstractLF>,
    history: Vec<AbstractLF>,
    mode: Mode,
    n: u32,
    budget: SearchBudget,
}

impl Default for Session {
    fn default() -> Self {
        Session {
            current: None,
            history: Vec::new(),
            mode: Mode::Weinstein,
            n: 2,
            budget: SearchBudget::new(6, 20_000, 0),
        }
    }
}

impl Session {
    fn loaded(&self) -> Result<&AbstractLF, String> {
        self.current.as_ref().ok_or_else(|| "nothing loaded; use `load <file|expr>`".to_string())
    }

    /// Run one command line. `Ok(None)` ends the session.
    pub fn execute(&mut self, line: &str) -> Result<Option<String>, String> {
        let line = line.trim();
        let (cmd, arg) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let arg = arg.trim();
        match cmd {
            "" => Ok(Some(String::new())),
            "help" => Ok(Some(HELP.to_string())),
            "quit" | "exit" => Ok(None),
            "load" => {
                let f = load_fibration(arg, self.n).map_err(|e| e.to_string())?;
                let shown = f.to_string();
                self.current = Some(f);
                self.history.clear();
                Ok(Some(format!("loaded {shown}")))
            }
            "show" => Ok(Some(self.loaded()?.to_string())),
            "mode" => {
                self.mode = arg.parse()?;
                Ok(Some(format!("mode {}", self.mode)))
            }
            "n" => {
                self.n = arg.parse().map_err(|_| format!("bad dimension `{arg}`"))?;
                Ok(Some(format!("n = {} for expressions", self.n)))
            }
            "moves" => {
                let f = self.loaded()?;
                let list: Vec<String> = f
                    .legal_moves(self.mode)
                    .iter()
                    .enumerate()
                    .map(|(i, m)| format!("{:>3}  {m}", i + 1))
                    .collect();
                Ok(Some(list.join("\n")))
            }
            "apply" => {
                let f = self.loaded()?.clone();
                let mv = match arg.parse::<usize>() {
                    Ok(k) => {
                        let moves = f.legal_moves(self.mode);
                        k.checked_sub(1)
                            .and_then(|i| moves.get(i).cloned())
                            .ok_or_else(|| format!("no move {k}; `moves` lists {}", moves.len()))?
                    }
                    Err(_) => arg.parse()?,
                };
                let g = f.apply_move(&mv, self.mode).map_err(|e| format!("{mv}: {e}"))?;
                let shown = g.to_string();
                self.history.push(f);
                self.current = Some(g);
                Ok(Some(format!("applied {mv}\n{shown}")))
            }
            "undo" => {
                let prev = self.history.pop().ok_or("nothing to undo")?;
                let shown = prev.to_string();
                self.current = Some(prev);
                Ok(Some(format!("undone\n{shown}")))
            }
            "invariants" => Ok(Some(cmd_invariants(self.loaded()?, &self.budget).trim_end().to_string())),
            "save" => {
                if arg.is_empty() {
                    return Err("save needs a file name".into());
                }
                fs::write(arg, fibration_to_json(self.loaded()?)).map_err(|e| format!("cannot write {arg}: {e}"))?;
                Ok(Some(format!("saved {arg}")))
            }
            other => Err(format!("unknown command `{other}`; {HELP}")),
        }
    }
}

/// Read commands until end of input or `quit`; errors are reported and the
/// session continues.
pub fn run(input: impl BufRead, mut output: impl Write) -> io::Result<()> {
    let mut session = Session::default();
    for line in input.lines() {
        match session.execute(&line?) {
            Ok(Some(text)) if text.is_empty() => {}
            Ok(Some(text)) => writeln!(output, "{text}")?,
            Ok(None) => break,
            Err(e) => writeln!(output, "error: {e}")?,
        }
    }
    Ok(())
}
