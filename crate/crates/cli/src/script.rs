//! Line-oriented operation scripts.
//!
//! One command per line; blank lines and `#` comments are ignored.
//! Vertex sets are written `{0,1,2}` and permutations in cycle notation
//! such as `(0 1)(2 3)`. Vertex indices are checked against the register
//! size, which the parser tracks through `addvertex` and `delete`.

use qgraph::protocols::ParityKind;
use qgraph::{DeleteMode, Pauli};

use crate::error::ParseError;
use crate::graphfile::parse_index;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Cz(usize, usize),
    Cnot(usize, usize),
    Fx(usize, usize),
    FxWrapped(usize, usize),
    Pauli(Pauli, usize),
    LocalComp(usize),
    Iac(Vec<usize>, Vec<usize>),
    Iec(Vec<usize>),
    AddVertex,
    Delete(usize, DeleteMode),
    AssertVerify,
    Measure(ParityKind),
    /// Graph file path as written in the script.
    Compare(String),
    Automorphism(Vec<usize>),
    VCompare(usize, usize),
    Readout,
}

impl Command {
    pub fn is_protocol(&self) -> bool {
        matches!(
            self,
            Command::Measure(_)
                | Command::Compare(_)
                | Command::Automorphism(_)
                | Command::VCompare(..)
                | Command::Readout
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub line: usize,
    pub text: String,
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpScript {
    pub file: String,
    pub steps: Vec<Step>,
}

/// Splits on whitespace, keeping `{...}` groups whole.
fn tokenize(line: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '{' {
            let mut tok = String::new();
            loop {
                match chars.next() {
                    Some('}') => {
                        tok.push('}');
                        break;
                    }
                    Some(ch) => tok.push(ch),
                    None => return Err(format!("unclosed set `{tok}`")),
                }
            }
            out.push(tok);
        } else {
            let mut tok = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_whitespace() || ch == '{' {
                    break;
                }
                tok.push(ch);
                chars.next();
            }
            out.push(tok);
        }
    }
    Ok(out)
}

fn vertex(token: &str, n: usize) -> Result<usize, String> {
    let v = parse_index(token)?;
    if v >= n {
        return Err(format!("vertex {v} out of range for {n} vertices"));
    }
    Ok(v)
}

fn vertex_set(token: &str, n: usize) -> Result<Vec<usize>, String> {
    let inner = token
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| format!("expected a set like {{0,1}}, got `{token}`"))?;
    let mut set = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v = vertex(part, n)?;
        if set.contains(&v) {
            return Err(format!("vertex {v} repeated in `{token}`"));
        }
        set.push(v);
    }
    Ok(set)
}

/// Parses cycle notation into `perm` with `perm[i]` the image of `i`.
pub fn parse_cycles(text: &str, n: usize) -> Result<Vec<usize>, String> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut seen = vec![false; n];
    let mut rest = text.trim();
    if rest == "id" {
        return Ok(perm);
    }
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` in `{text}`"))?;
        let close = body.find(')').ok_or_else(|| format!("unclosed cycle in `{text}`"))?;
        let cycle: Vec<usize> = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| vertex(t, n))
            .collect::<Result<_, _>>()?;
        for &v in &cycle {
            if std::mem::replace(&mut seen[v], true) {
                return Err(format!("vertex {v} appears twice in `{text}`"));
            }
        }
        for (i, &v) in cycle.iter().enumerate() {
            perm[v] = cycle[(i + 1) % cycle.len()];
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(perm)
}

fn arity(tokens: &[String], want: usize, usage: &str) -> Result<(), String> {
    if tokens.len() != want {
        Err(format!("expected `{usage}`"))
    } else {
        Ok(())
    }
}

fn parse_op(tokens: &[String], n: &mut usize) -> Result<Command, String> {
    let name = tokens.get(1).ok_or("expected an operation after `op`")?;
    let pair = |usage: &str| -> Result<(usize, usize), String> {
        arity(tokens, 4, usage)?;
        Ok((vertex(&tokens[2], *n)?, vertex(&tokens[3], *n)?))
    };
    let distinct = |(a, b): (usize, usize), what: &str| -> Result<(usize, usize), String> {
        if a == b {
            Err(format!("{what} needs two distinct vertices"))
        } else {
            Ok((a, b))
        }
    };
    Ok(match name.as_str() {
        "cz" => {
            let (a, b) = pair("op cz <u> <v>")?;
            Command::Cz(a, b)
        }
        "cnot" => {
            let (a, b) = distinct(pair("op cnot <a> <b>")?, "cnot")?;
            Command::Cnot(a, b)
        }
        "fx" => {
            let (a, b) = distinct(pair("op fx <a> <b>")?, "fx")?;
            Command::Fx(a, b)
        }
        "fxw" => {
            let (a, b) = distinct(pair("op fxw <a> <b>")?, "fxw")?;
            Command::FxWrapped(a, b)
        }
        "x" | "y" | "z" => {
            arity(tokens, 3, "op x|y|z <v>")?;
            let p = match name.as_str() {
                "x" => Pauli::X,
                "y" => Pauli::Y,
                _ => Pauli::Z,
            };
            Command::Pauli(p, vertex(&tokens[2], *n)?)
        }
        "localcomp" => {
            arity(tokens, 3, "op localcomp <v>")?;
            Command::LocalComp(vertex(&tokens[2], *n)?)
        }
        "iac" => {
            arity(tokens, 4, "op iac {..} {..}")?;
            let s1 = vertex_set(&tokens[2], *n)?;
            let s2 = vertex_set(&tokens[3], *n)?;
            if let Some(v) = s1.iter().find(|v| s2.contains(v)) {
                return Err(format!("vertex {v} is in both sets"));
            }
            Command::Iac(s1, s2)
        }
        "iec" => {
            arity(tokens, 3, "op iec {..}")?;
            Command::Iec(vertex_set(&tokens[2], *n)?)
        }
        "addvertex" => {
            arity(tokens, 2, "op addvertex")?;
            *n += 1;
            Command::AddVertex
        }
        "delete" => {
            arity(tokens, 4, "op delete <v> blind|corrected")?;
            let v = vertex(&tokens[2], *n)?;
            let mode = match tokens[3].as_str() {
                "blind" => DeleteMode::Blind,
                "corrected" => DeleteMode::Corrected,
                other => return Err(format!("unknown delete mode `{other}`")),
            };
            *n -= 1;
            Command::Delete(v, mode)
        }
        other => return Err(format!("unknown operation `{other}`")),
    })
}

fn parse_line(trimmed: &str, n: &mut usize) -> Result<Command, String> {
    let tokens = tokenize(trimmed)?;
    Ok(match tokens[0].as_str() {
        "op" => parse_op(&tokens, n)?,
        "assert" => {
            arity(&tokens, 2, "assert verify")?;
            if tokens[1] != "verify" {
                return Err(format!("unknown assertion `{}`", tokens[1]));
            }
            Command::AssertVerify
        }
        "measure" => {
            arity(&tokens, 2, "measure euler|odd")?;
            match tokens[1].as_str() {
                "euler" => Command::Measure(ParityKind::Even),
                "odd" => Command::Measure(ParityKind::Odd),
                other => return Err(format!("unknown parity `{other}`")),
            }
        }
        "compare" => {
            arity(&tokens, 2, "compare <graphfile>")?;
            Command::Compare(tokens[1].clone())
        }
        "automorphism" => {
            let rest = trimmed["automorphism".len()..].trim();
            if rest.is_empty() {
                return Err("expected `automorphism <cycles>`".into());
            }
            Command::Automorphism(parse_cycles(rest, *n)?)
        }
        "vcompare" => {
            arity(&tokens, 3, "vcompare <a> <b>")?;
            let (a, b) = (vertex(&tokens[1], *n)?, vertex(&tokens[2], *n)?);
            if a == b {
                return Err("vcompare needs two distinct vertices".into());
            }
            Command::VCompare(a, b)
        }
        "readout" => {
            arity(&tokens, 1, "readout")?;
            Command::Readout
        }
        other => return Err(format!("unknown command `{other}`")),
    })
}

/// Parses a script for a register that starts with `n` vertices.
pub fn parse_script(text: &str, file: &str, n: usize) -> Result<OpScript, ParseError> {
    let mut n = n;
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let command = parse_line(trimmed, &mut n).map_err(|m| ParseError::new(file, idx + 1, m))?;
        steps.push(Step {
            line: idx + 1,
            text: trimmed.to_string(),
            command,
        });
    }
    Ok(OpScript {
        file: file.to_string(),
        steps,
    })
}
