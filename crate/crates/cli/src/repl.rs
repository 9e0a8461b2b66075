//! The interactive loop: bare expressions evaluate and print, commands keep
//! session state. Errors print and the loop continues.

use std::io::{BufRead, Write};

use tra_core::lang::{Binding, Value};

use crate::session::Session;

const PROMPT: &str = "tra> ";

pub fn run(session: &mut Session, input: impl BufRead, mut output: impl Write) -> std::io::Result<()> {
    let mut lines = input.lines();
    loop {
        write!(output, "{PROMPT}")?;
        output.flush()?;
        let Some(line) = lines.next() else { break };
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(':') {
            if !command(session, rest, &mut output)? {
                break;
            }
            continue;
        }
        match session.eval_source(line) {
            Ok(value) => match session.render(&value) {
                Ok(text) => writeln!(output, "{text}")?,
                Err(e) => writeln!(output, "error: {e}")?,
            },
            Err(e) => writeln!(output, "error: {e}")?,
        }
    }
    Ok(())
}

/// Handles a `:command` line; returns false when the loop should stop.
fn command(session: &mut Session, rest: &str, output: &mut impl Write) -> std::io::Result<bool> {
    let mut parts = rest.splitn(2, char::is_whitespace);
    let name = parts.next().unwrap_or("");
    let arg = parts.next().unwrap_or("").trim();
    match name {
        "quit" | "q" => return Ok(false),
        "load" => match session.load_program(std::path::Path::new(arg)) {
            Ok(name) => writeln!(output, "loaded {name}")?,
            Err(e) => writeln!(output, "error: {e}")?,
        },
        "let" => match arg.split_once('=') {
            Some((ident, src)) => {
                let ident = ident.trim();
                match session.eval_source(src.trim()) {
                    Ok(Value::Rel(r)) => {
                        session.env.bind_mut(ident, Binding::Rel(r.clone()));
                        match session.render(&Value::Rel(r)) {
                            Ok(text) => writeln!(output, "{ident} = {text}")?,
                            Err(e) => writeln!(output, "error: {e}")?,
                        }
                    }
                    Ok(Value::Prog(pv)) => {
                        session.env.bind_mut(ident, Binding::Prog(pv.clone()));
                        let text = session
                            .render(&Value::Prog(pv))
                            .expect("program rendering is infallible");
                        writeln!(output, "{ident} = {text}")?;
                    }
                    Ok(Value::Table(_)) => writeln!(
                        output,
                        "error: only relations and programs can be bound; project the table first"
                    )?,
                    Err(e) => writeln!(output, "error: {e}")?,
                }
            }
            None => writeln!(output, "usage: :let <ident> = <expr>")?,
        },
        "limits" => {
            let l = &session.config.limits;
            writeln!(
                output,
                "max_depth={} max_answers={} fix_cap={}",
                l.max_depth, l.max_answers, session.config.fix_cap
            )?;
        }
        "universe" => match &session.config.universe {
            Some(u) => writeln!(output, "{u}")?,
            None => writeln!(output, "none")?,
        },
        other => writeln!(output, "unknown command :{other}")?,
    }
    Ok(true)
}
