//! Abelard typed in at the terminal. Prompts go to stderr so that stdout
//! keeps only the transcript.

use std::io::{self, BufRead, Write};

use krivine::game::{Answer, FnAbelard, Handle, MoveRequest};
use krivine::syntax::{parse_stack, parse_term};
use krivine::{Error, Registry, Stack, Term};

/// Read one line; `None` at end of input.
fn line(prompt: &str) -> Option<String> {
    eprint!("{prompt}");
    io::stderr().flush().ok();
    let mut buf = String::new();
    match io::stdin().lock().read_line(&mut buf) {
        Ok(0) | Err(_) => None,
        Ok(_) => Some(buf.trim().to_string()),
    }
}

/// Ask until `parse` accepts the line.
fn ask<T>(prompt: &str, mut parse: impl FnMut(&str) -> Result<T, String>) -> Option<T> {
    loop {
        let text = line(prompt)?;
        match parse(&text) {
            Ok(v) => return Some(v),
            Err(e) => eprintln!("  {e}; try again"),
        }
    }
}

fn numbers(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|e| format!("`{s}`: {e}")))
        .collect()
}

fn term_and_stack(reg: &Registry) -> Option<(Term, Stack)> {
    let u = ask("  u  = ", |s| parse_term(s, reg).map_err(|e| e.to_string()))?;
    let pi = ask("  pi = ", |s| parse_stack(s, reg).map_err(|e| e.to_string()))?;
    Some((u, pi))
}

fn eof() -> Error {
    Error::Config("end of input before the handle was given".into())
}

pub fn prompt() -> FnAbelard {
    let handle = Box::new(|reg: &Registry, g: usize| -> Result<Handle, Error> {
        eprintln!("handle:");
        let z = if g == 0 {
            vec![]
        } else {
            ask(&format!("  {g} leading value(s), comma separated: "), |s| {
                let z = numbers(s)?;
                if z.len() == g {
                    Ok(z)
                } else {
                    Err(format!("expected {g} values"))
                }
            })
            .ok_or_else(eof)?
        };
        let (u, pi) = term_and_stack(reg).ok_or_else(eof)?;
        Ok(Handle { z, u, pi })
    });
    let answer = Box::new(|req: &MoveRequest<'_>| -> Result<Option<Answer>, Error> {
        let at = &req.history[req.entry];
        eprintln!(
            "eloise plays {} at entry {} (m = {:?}, n = {:?}) with t = {}",
            req.m, req.entry, at.m, at.n, req.t
        );
        // An empty integer or end of input ends the match.
        let Some(n) = ask("  n  = ", |s| {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<u64>().map(Some).map_err(|e| e.to_string())
            }
        })
        .flatten() else {
            return Ok(None);
        };
        Ok(term_and_stack(req.registry).map(|(u, pi)| Answer { n, u, pi }))
    });
    FnAbelard::new("interactive", handle, answer)
}
