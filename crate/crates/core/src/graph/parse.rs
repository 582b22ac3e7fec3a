//! Text format:
//!
//! ```text
//! # comment
//! vertices: v, w1, w2
//! edge e: v -> w1
//! edge f: v -> w2 * 3
//! edge g: v -> v * omega
//! ```
//!
//! Statements may also be separated by `;`. The `edge` keyword and the
//! `vertices:` prefix are optional (`u v; e: u -> v`).

use std::collections::{BTreeSet, HashMap};

use super::{Edge, Graph, Multiplicity};
use crate::error::ParseError;

struct PendingEdge {
    line: usize,
    id: String,
    source: String,
    range: String,
    multiplicity: Multiplicity,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.'))
}

fn syntax(line: usize, token: &str, message: &str) -> ParseError {
    ParseError::Syntax { line, token: token.to_string(), message: message.to_string() }
}

fn parse_multiplicity(line: usize, text: &str) -> Result<Multiplicity, ParseError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("omega") || t == "ω" {
        return Ok(Multiplicity::Omega);
    }
    match t.parse::<u32>() {
        Ok(m) if m > 0 => Ok(Multiplicity::Finite(m)),
        _ => Err(syntax(line, t, "malformed multiplicity")),
    }
}

fn parse_edge(line: usize, stmt: &str) -> Result<PendingEdge, ParseError> {
    let body = stmt.strip_prefix("edge ").unwrap_or(stmt).trim();
    let (id, rest) = body
        .split_once(':')
        .ok_or_else(|| syntax(line, body, "expected `<id>: <src> -> <rng>`"))?;
    let id = id.trim();
    if !valid_name(id) {
        return Err(syntax(line, id, "invalid edge id"));
    }
    let (ends, mult) = match rest.split_once('*') {
        Some((ends, mult)) => (ends, parse_multiplicity(line, mult)?),
        None => (rest, Multiplicity::Finite(1)),
    };
    let (src, rng) = ends
        .split_once("->")
        .ok_or_else(|| syntax(line, ends.trim(), "expected `->`"))?;
    let (src, rng) = (src.trim(), rng.trim());
    for name in [src, rng] {
        if !valid_name(name) {
            return Err(syntax(line, name, "invalid vertex name"));
        }
    }
    Ok(PendingEdge {
        line,
        id: id.to_string(),
        source: src.to_string(),
        range: rng.to_string(),
        multiplicity: mult,
    })
}

pub(super) fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut vertex_index: HashMap<String, usize> = HashMap::new();
    let mut pending = Vec::new();

    for (n, raw_line) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        for stmt in content.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            if stmt.contains("->") {
                pending.push(parse_edge(line, stmt)?);
                continue;
            }
            let list = match stmt.strip_prefix("vertices") {
                Some(rest) => rest
                    .trim_start()
                    .strip_prefix(':')
                    .ok_or_else(|| syntax(line, stmt, "expected `vertices:`"))?,
                None => stmt,
            };
            for name in list.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                if !valid_name(name) {
                    return Err(syntax(line, name, "invalid vertex name"));
                }
                if vertex_index.insert(name.to_string(), vertices.len()).is_some() {
                    return Err(ParseError::DuplicateVertex { line, name: name.to_string() });
                }
                vertices.push(name.to_string());
            }
        }
    }

    let mut edges = Vec::new();
    let mut seen_ids = BTreeSet::new();
    let mut omega_pairs = BTreeSet::new();
    for p in pending {
        if !seen_ids.insert(p.id.clone()) {
            return Err(ParseError::DuplicateEdge { line: p.line, name: p.id });
        }
        let lookup = |name: &str| {
            vertex_index
                .get(name)
                .copied()
                .ok_or_else(|| ParseError::UnknownVertex { line: p.line, name: name.to_string() })
        };
        let source = lookup(&p.source)?;
        let range = lookup(&p.range)?;
        if p.multiplicity.is_omega() && !omega_pairs.insert((source, range)) {
            return Err(ParseError::DuplicateOmega { line: p.line, source_vertex: p.source, range: p.range });
        }
        edges.push(Edge { id: p.id, source, range, multiplicity: p.multiplicity });
    }
    Ok(Graph::new(vertices, edges).expect("validated above"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_loop() {
        let g = parse_graph("v; e: v->v").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 1));
        assert_eq!(g.edge(0).source, g.edge(0).range);
    }

    #[test]
    fn unknown_vertex_is_named() {
        let err = parse_graph("v w; e: v->w *omega; f: v->u").unwrap_err();
        assert_eq!(err, ParseError::UnknownVertex { line: 1, name: "u".into() });
        assert!(err.to_string().contains("unknown vertex u"));
    }

    #[test]
    fn line_with_sink() {
        let g = parse_graph("u v; e: u->v").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert!(g.is_sink(g.vertex_id("v").unwrap()));
    }

    #[test]
    fn long_form_with_comments() {
        let text = "# clock\nvertices: v, w1, w2\nedge a: v -> w1 # first\nedge b: v -> w2 * 2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edge(1).multiplicity, Multiplicity::Finite(2));
    }

    #[test]
    fn errors_carry_line_and_token() {
        assert_eq!(
            parse_graph("v\nv").unwrap_err(),
            ParseError::DuplicateVertex { line: 2, name: "v".into() }
        );
        assert_eq!(
            parse_graph("v\ne: v->v\ne: v->v").unwrap_err(),
            ParseError::DuplicateEdge { line: 3, name: "e".into() }
        );
        match parse_graph("v w\nedge e: v -> w * zero").unwrap_err() {
            ParseError::Syntax { line, token, .. } => assert_eq!((line, token.as_str()), (2, "zero")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_graph("v w\ne: v -> w * 0"), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            parse_graph("v w\na: v -> w * omega\nb: v -> w * omega"),
            Err(ParseError::DuplicateOmega { line: 3, .. })
        ));
    }
}
