//! Parsers for the two input formats: update/query streams and plain edge
//! lists. `#` comments and blank lines are ignored in both.

use crate::CliError;
use dynfpt::graph::EdgeOp;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Problem {
    Vc,
    Cvd,
    CvdExact,
    Chromatic,
    Fvs,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Vc => "vc",
            Problem::Cvd => "cvd",
            Problem::CvdExact => "cvd-exact",
            Problem::Chromatic => "chromatic",
            Problem::Fvs => "fvs",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "vc" => Ok(Problem::Vc),
            "cvd" => Ok(Problem::Cvd),
            "cvd-exact" => Ok(Problem::CvdExact),
            "chromatic" => Ok(Problem::Chromatic),
            "fvs" => Ok(Problem::Fvs),
            other => Err(format!(
                "unknown problem {other:?} (expected vc, cvd, cvd-exact, chromatic or fvs)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum StreamItem {
    Op(EdgeOp),
    Query(Problem),
}

#[derive(Debug, Clone)]
pub struct Stream {
    pub n: usize,
    /// Items paired with their 1-based source line numbers.
    pub items: Vec<(usize, StreamItem)>,
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_vertex(tok: Option<&str>, line: usize) -> Result<usize, CliError> {
    let tok = tok.ok_or_else(|| CliError::input_at(line, "missing vertex id"))?;
    tok.parse()
        .map_err(|_| CliError::input_at(line, format!("invalid vertex id {tok:?}")))
}

/// Parses an update/query stream: header `n <N>`, then `+ u v`, `- u v`
/// and `? <problem>` lines.
pub fn parse_stream(text: &str) -> Result<Stream, CliError> {
    let mut lines = significant_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| CliError::input("empty stream: missing `n <N>` header"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("n") {
        return Err(CliError::input_at(header_no, "first line must be `n <N>`"));
    }
    let n: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| CliError::input_at(header_no, "invalid vertex count"))?;
    if toks.next().is_some() {
        return Err(CliError::input_at(
            header_no,
            "trailing tokens after header",
        ));
    }

    let mut items = Vec::new();
    for (no, line) in lines {
        let mut toks = line.split_whitespace();
        let item = match toks.next().unwrap() {
            "+" => {
                let u = parse_vertex(toks.next(), no)?;
                let v = parse_vertex(toks.next(), no)?;
                StreamItem::Op(EdgeOp::insert(u, v))
            }
            "-" => {
                let u = parse_vertex(toks.next(), no)?;
                let v = parse_vertex(toks.next(), no)?;
                StreamItem::Op(EdgeOp::delete(u, v))
            }
            "?" => {
                let name = toks
                    .next()
                    .ok_or_else(|| CliError::input_at(no, "`?` needs a problem name"))?;
                let problem = Problem::from_str(name).map_err(|e| CliError::input_at(no, e))?;
                StreamItem::Query(problem)
            }
            other => {
                return Err(CliError::input_at(
                    no,
                    format!("unrecognized directive {other:?}"),
                ));
            }
        };
        if toks.next().is_some() {
            return Err(CliError::input_at(no, "trailing tokens"));
        }
        items.push((no, item));
    }
    Ok(Stream { n, items })
}

/// An edge paired with its 1-based source line number.
pub type EdgeLine = (usize, usize, usize);

/// Parses an edge list: first line `n m`, then exactly `m` lines `u v`.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<EdgeLine>), CliError> {
    let mut lines = significant_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| CliError::input("empty input: missing `n m` header"))?;
    let mut toks = header.split_whitespace();
    let n: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| CliError::input_at(header_no, "invalid vertex count"))?;
    let m: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| CliError::input_at(header_no, "invalid edge count"))?;
    if toks.next().is_some() {
        return Err(CliError::input_at(
            header_no,
            "trailing tokens after header",
        ));
    }
    let mut edges = Vec::with_capacity(m);
    for (no, line) in lines {
        let mut toks = line.split_whitespace();
        let u = parse_vertex(toks.next(), no)?;
        let v = parse_vertex(toks.next(), no)?;
        if toks.next().is_some() {
            return Err(CliError::input_at(no, "trailing tokens"));
        }
        edges.push((no, u, v));
    }
    if edges.len() != m {
        return Err(CliError::input(format!(
            "header announced {m} edges but the file has {}",
            edges.len()
        )));
    }
    Ok((n, edges))
}
