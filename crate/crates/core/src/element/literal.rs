//! Element literals: `3/2 * e1 e2 e3^ e1^ - f#2 f#2^ + v`.
//!
//! A caret marks a ghost edge, `#k` selects copy `k` of an edge family (a
//! bare name means copy 0). A coefficient is separated from its word by `*`.

use num_traits::{One, Zero};

use super::{Algebra, Element, Monomial, RawExpr, Symbol};
use crate::error::{LpaError, ParseError, Result};
use crate::field::{format_coeff, parse_rational, sign_and_abs, Coeff};
use crate::graph::{EdgeRef, Graph};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Word(String),
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<Token>| {
        if !cur.is_empty() {
            out.push(Token::Word(std::mem::take(cur)));
        }
    };
    for ch in text.chars() {
        match ch {
            '+' | '-' | '*' => {
                flush(&mut cur, &mut out);
                out.push(match ch {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    _ => Token::Star,
                });
            }
            c if c.is_whitespace() => flush(&mut cur, &mut out),
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut out);
    out
}

fn symbol(g: &Graph, token: &str) -> Result<Symbol> {
    let (body, ghost) = match token.strip_suffix('^') {
        Some(b) => (b, true),
        None => (token, false),
    };
    let (name, copy) = match body.split_once('#') {
        Some((n, k)) => {
            let k: u32 = k.parse().map_err(|_| ParseError::UnknownSymbol(token.to_string()))?;
            (n, Some(k))
        }
        None => (body, None),
    };
    if !ghost && copy.is_none() {
        if let Some(v) = g.vertex_id(name) {
            return Ok(Symbol::Vertex(v));
        }
    }
    let e = g.edge_id(name).ok_or_else(|| ParseError::UnknownSymbol(token.to_string()))?;
    let copy = copy.unwrap_or(0);
    let edge = g.edge(e);
    if !edge.multiplicity.admits(copy) {
        let multiplicity = match edge.multiplicity {
            crate::graph::Multiplicity::Finite(m) => m,
            crate::graph::Multiplicity::Omega => u32::MAX,
        };
        return Err(ParseError::CopyOutOfRange { edge: edge.id.clone(), multiplicity, index: copy }.into());
    }
    let r = EdgeRef::new(e, copy);
    Ok(if ghost { Symbol::Ghost(r) } else { Symbol::Edge(r) })
}

pub(super) fn parse_raw(alg: &Algebra<'_>, text: &str) -> Result<RawExpr> {
    let g = alg.graph;
    let tokens = tokenize(text);
    let mut raw = RawExpr::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut negative = false;
        // leading signs of the term
        while let Some(t @ (Token::Plus | Token::Minus)) = tokens.get(i) {
            if *t == Token::Minus {
                negative = !negative;
            }
            i += 1;
        }
        let mut coeff = Coeff::one();
        if let (Some(Token::Word(w)), Some(Token::Star)) = (tokens.get(i), tokens.get(i + 1)) {
            coeff = parse_rational(w).ok_or_else(|| ParseError::Coefficient(w.clone()))?;
            i += 2;
        }
        let mut word = Vec::new();
        while let Some(Token::Word(w)) = tokens.get(i) {
            word.push(w.clone());
            i += 1;
        }
        match tokens.get(i) {
            None | Some(Token::Plus) | Some(Token::Minus) => {}
            Some(t) => return Err(ParseError::Coefficient(format!("unexpected {t:?}")).into()),
        }
        if word.len() == 1 && word[0] == "0" {
            continue;
        }
        if word.is_empty() {
            return Err(LpaError::Parse(ParseError::Coefficient(format!("term without symbols in `{text}`"))));
        }
        let syms = word.iter().map(|w| symbol(g, w)).collect::<Result<Vec<_>>>()?;
        if negative {
            coeff = -coeff;
        }
        let coeff = alg
            .field
            .reduce(coeff)
            .ok_or_else(|| LpaError::Field(format!("coefficient undefined in {}", alg.field)))?;
        raw.push(coeff, syms);
    }
    Ok(raw)
}

pub(super) fn word(g: &Graph, m: &Monomial) -> String {
    if m.is_vertex() {
        return g.vertex_name(m.alpha.start).to_string();
    }
    let mut parts: Vec<String> = m.alpha.edges.iter().map(|&e| g.edge_name(e)).collect();
    parts.extend(m.beta.edges.iter().rev().map(|&e| format!("{}^", g.edge_name(e))));
    parts.join(" ")
}

pub(super) fn display(alg: &Algebra<'_>, a: &Element) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in a.terms.iter().enumerate() {
        let (negative, abs) = sign_and_abs(c, alg.field);
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !abs.is_one() {
            out.push_str(&format_coeff(&abs));
            out.push_str(" * ");
        }
        debug_assert!(!abs.is_zero());
        out.push_str(&word(alg.graph, m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_copies_and_coefficients() {
        let g = Graph::parse("v w; f: v->w * omega").unwrap();
        let alg = Algebra::new(&g);
        let x = alg.parse("-1 * f#2 f#2^").unwrap();
        assert_eq!(display(&alg, &x), "-f#2 f#2^");
        let y = alg.parse("3/2 * f#0 + 1/2 * f#0").unwrap();
        assert_eq!(display(&alg, &y), "2 * f#0");
    }

    #[test]
    fn rejects_unknown_symbols_and_copies() {
        let g = Graph::parse("v w; f: v->w * 2").unwrap();
        let alg = Algebra::new(&g);
        assert!(matches!(alg.parse("q"), Err(LpaError::Parse(ParseError::UnknownSymbol(_)))));
        assert!(matches!(alg.parse("f#2"), Err(LpaError::Parse(ParseError::CopyOutOfRange { .. }))));
        assert!(alg.parse("3 *").is_err());
    }

    #[test]
    fn zero_and_signs() {
        let g = Graph::parse("v; c: v->v").unwrap();
        let alg = Algebra::new(&g);
        assert!(alg.parse("0").unwrap().is_zero());
        assert!(alg.parse("c - c").unwrap().is_zero());
        assert_eq!(display(&alg, &alg.parse("- - c").unwrap()), "c");
        assert_eq!(display(&alg, &alg.parse("c^ - 2/3 * c").unwrap()), "c^ - 2/3 * c");
    }
}
