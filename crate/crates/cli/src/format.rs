//! The line-oriented belief-base file format.
//!
//! ```text
//! # a three-ticket lottery
//! ATOMS:
//! wins_1 wins_2 wins_3
//! WORLDS:
//! w1: wins_1=1 wins_2=0 wins_3=0 weight 1/3
//! w2: wins_1=0 wins_2=1 wins_3=0 weight 1/3
//! w3: wins_1=0 wins_2=0 wins_3=1 weight 1/3
//! BACKGROUND:
//! (wins_1 | wins_2 | wins_3) & (wins_1 -> ~wins_2 & ~wins_3) & ...
//! CANDIDATES:
//! L1: ~wins_1
//! ```
//!
//! Atoms may be split over several lines and separated by spaces or commas.
//! Every world must give each atom exactly one value.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use probaccept_core::logic::is_identifier;
use probaccept_core::rational::parse_rational;
use probaccept_core::world::World;
use probaccept_core::{parse, BeliefBase, Error, FormulaSet, WorldModel};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Atoms,
    Worlds,
    Background,
    Candidates,
}

impl Section {
    fn from_header(line: &str) -> Option<Section> {
        match line {
            "ATOMS:" => Some(Section::Atoms),
            "WORLDS:" => Some(Section::Worlds),
            "BACKGROUND:" => Some(Section::Background),
            "CANDIDATES:" => Some(Section::Candidates),
            _ => None,
        }
    }
}

fn bad(line: usize, message: impl Into<String>) -> CliError {
    CliError::Format {
        line,
        message: message.into(),
    }
}

/// Wraps a core error with the line it came from; formula syntax errors also
/// get a column.
fn at(line: usize, column_base: usize, err: Error) -> CliError {
    match err {
        Error::Syntax { offset, message } => {
            bad(line, format!("column {}: {message}", column_base + offset + 1))
        }
        other => bad(line, other.to_string()),
    }
}

fn parse_world(
    line_no: usize,
    text: &str,
    atoms: &[String],
    index: &BTreeMap<&str, usize>,
) -> Result<(String, World), CliError> {
    let (name, rest) = text
        .split_once(':')
        .ok_or_else(|| bad(line_no, "expected `w<i>: <atom>=<0|1> ... weight <p>/<q>`"))?;
    let name = name.trim();
    if !is_identifier(name) {
        return Err(bad(line_no, format!("`{name}` is not a world name")));
    }
    let mut valuation: Vec<Option<bool>> = vec![None; index.len()];
    let mut tokens = rest.split_whitespace();
    let mut weight = None;
    while let Some(token) = tokens.next() {
        if token == "weight" {
            let value = tokens
                .next()
                .ok_or_else(|| bad(line_no, "`weight` needs a value"))?;
            weight = Some(parse_rational(value).map_err(|e| at(line_no, 0, e))?);
            if let Some(extra) = tokens.next() {
                return Err(bad(line_no, format!("unexpected `{extra}` after the weight")));
            }
            break;
        }
        let (atom, value) = token
            .split_once('=')
            .ok_or_else(|| bad(line_no, format!("expected `<atom>=<0|1>`, found `{token}`")))?;
        let &i = index
            .get(atom)
            .ok_or_else(|| bad(line_no, format!("unknown atom `{atom}`")))?;
        let value = match value {
            "0" => false,
            "1" => true,
            _ => return Err(bad(line_no, format!("`{atom}` must be 0 or 1, found `{value}`"))),
        };
        if valuation[i].replace(value).is_some() {
            return Err(bad(line_no, format!("`{atom}` assigned twice")));
        }
    }
    let weight = weight.ok_or_else(|| bad(line_no, "missing `weight <p>/<q>`"))?;
    let valuation = valuation
        .into_iter()
        .zip(atoms)
        .map(|(v, atom)| v.ok_or_else(|| bad(line_no, format!("`{atom}` has no value"))))
        .collect::<Result<Vec<bool>, _>>()?;
    Ok((name.to_owned(), World { valuation, weight }))
}

/// Parses a belief base, reporting errors by 1-based line number.
pub fn parse_base(text: &str) -> Result<BeliefBase, CliError> {
    let mut section = None;
    let mut seen = Vec::new();
    let mut atoms: Vec<String> = Vec::new();
    let mut world_lines = Vec::new();
    let mut background_lines = Vec::new();
    let mut candidate_lines = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let line = content.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(s) = Section::from_header(line) {
            if seen.contains(&s) {
                return Err(bad(line_no, format!("section `{line}` appears twice")));
            }
            seen.push(s);
            section = Some(s);
            continue;
        }
        let column_base = content.len() - content.trim_start().len();
        match section {
            None => return Err(bad(line_no, "content before the first section header")),
            Some(Section::Atoms) => {
                for atom in line.split(|c: char| c == ',' || c.is_whitespace()) {
                    if atom.is_empty() {
                        continue;
                    }
                    if !is_identifier(atom) {
                        return Err(bad(line_no, format!("`{atom}` is not an atom name")));
                    }
                    atoms.push(atom.to_owned());
                }
            }
            Some(Section::Worlds) => world_lines.push((line_no, line)),
            Some(Section::Background) => background_lines.push((line_no, column_base, line)),
            Some(Section::Candidates) => candidate_lines.push((line_no, column_base, line)),
        }
    }
    for (required, name) in [(Section::Atoms, "ATOMS:"), (Section::Worlds, "WORLDS:")] {
        if !seen.contains(&required) {
            return Err(bad(0, format!("missing section `{name}`")));
        }
    }

    let mut index = BTreeMap::new();
    for (i, atom) in atoms.iter().enumerate() {
        if index.insert(atom.as_str(), i).is_some() {
            return Err(bad(0, format!("atom `{atom}` listed twice")));
        }
    }
    let mut names = Vec::new();
    let mut worlds = Vec::new();
    for &(line_no, line) in &world_lines {
        let (name, world) = parse_world(line_no, line, &atoms, &index)?;
        if names.contains(&name) {
            return Err(bad(line_no, format!("world `{name}` defined twice")));
        }
        names.push(name);
        worlds.push(world);
    }
    let model = WorldModel::new(atoms.clone(), worlds).map_err(|e| bad(0, e.to_string()))?;

    let mut background = FormulaSet::new();
    for &(line_no, column_base, line) in &background_lines {
        background.insert(parse(line).map_err(|e| at(line_no, column_base, e))?);
    }
    let mut candidates = Vec::new();
    for &(line_no, column_base, line) in &candidate_lines {
        let (label, formula) = line
            .split_once(':')
            .ok_or_else(|| bad(line_no, "expected `<label>: <formula>`"))?;
        let offset = column_base + label.len() + 1;
        let formula = parse(formula).map_err(|e| at(line_no, offset, e))?;
        candidates.push((label.trim().to_owned(), formula));
    }
    BeliefBase::new(model, background, candidates).map_err(|e| bad(0, e.to_string()))
}

/// Renders a belief base in the file format; `parse_base` reads it back to
/// an equal base.
pub fn write_base(base: &BeliefBase, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(comment) = comment {
        for line in comment.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let model = base.model();
    out.push_str("ATOMS:\n");
    let _ = writeln!(out, "{}", model.atoms().join(" "));
    out.push_str("WORLDS:\n");
    for (i, world) in model.worlds().iter().enumerate() {
        let _ = write!(out, "w{}:", i + 1);
        for (atom, value) in model.atoms().iter().zip(&world.valuation) {
            let _ = write!(out, " {atom}={}", u8::from(*value));
        }
        let _ = writeln!(out, " weight {}", world.weight);
    }
    out.push_str("BACKGROUND:\n");
    for f in base.background() {
        let _ = writeln!(out, "{f}");
    }
    out.push_str("CANDIDATES:\n");
    for (i, f) in base.candidates().iter().enumerate() {
        let _ = writeln!(out, "{}: {f}", base.label_of(i));
    }
    out
}
