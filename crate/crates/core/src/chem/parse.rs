//! SMILES tokenizer and graph builder.
//!
//! Produces a [`RawGraph`]: atoms and bonds exactly as written, before
//! hydrogen assignment, kekulization and aromaticity perception.

use std::collections::HashMap;

use super::element::{atomic_number_of, Element};
use super::{ChemError, SyntaxKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RawOrder {
    Unspecified,
    Single,
    Double,
    Triple,
    Aromatic,
}

#[derive(Debug, Clone)]
pub(crate) struct RawAtom {
    pub element: Element,
    pub aromatic: bool,
    pub charge: i8,
    pub isotope: Option<u16>,
    /// `Some` for bracket atoms (explicit hydrogen count, default 0).
    pub bracket_h: Option<u8>,
}

#[derive(Debug, Clone)]
pub(crate) struct RawBond {
    pub a: usize,
    pub b: usize,
    pub order: RawOrder,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct RawGraph {
    pub atoms: Vec<RawAtom>,
    pub bonds: Vec<RawBond>,
}

fn syntax(position: usize, kind: SyntaxKind) -> ChemError {
    ChemError::Syntax { position, kind }
}

struct OpenRing {
    atom: usize,
    order: Option<RawOrder>,
    position: usize,
}

pub(crate) fn parse(text: &str) -> Result<RawGraph, ChemError> {
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return Err(ChemError::Empty);
    }
    let mut graph = RawGraph::default();
    let mut prev: Option<usize> = None;
    let mut pending: Option<(RawOrder, usize)> = None;
    let mut branches: Vec<(usize, usize)> = Vec::new();
    let mut rings: HashMap<u16, OpenRing> = HashMap::new();
    // True right after '(' until the branch receives its first atom.
    let mut branch_empty = false;
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            '(' => {
                if prev.is_none() || branch_empty {
                    return Err(syntax(i, SyntaxKind::MisplacedBranch));
                }
                if pending.is_some() {
                    return Err(syntax(i, SyntaxKind::DanglingBond));
                }
                branches.push((prev.unwrap(), i));
                branch_empty = true;
                i += 1;
            }
            ')' => {
                if branch_empty || pending.is_some() {
                    return Err(syntax(i, SyntaxKind::EmptyBranch));
                }
                let (atom, _) = branches.pop().ok_or_else(|| syntax(i, SyntaxKind::UnbalancedParenthesis))?;
                prev = Some(atom);
                i += 1;
            }
            '-' | '=' | '#' | ':' | '/' | '\\' => {
                if pending.is_some() {
                    return Err(syntax(i, SyntaxKind::DanglingBond));
                }
                if prev.is_none() {
                    return Err(syntax(i, SyntaxKind::DanglingBond));
                }
                let order = match c {
                    '=' => RawOrder::Double,
                    '#' => RawOrder::Triple,
                    ':' => RawOrder::Aromatic,
                    _ => RawOrder::Single,
                };
                pending = Some((order, i));
                i += 1;
            }
            '$' => return Err(syntax(i, SyntaxKind::UnsupportedBond)),
            '.' => {
                if pending.is_some() || prev.is_none() || branch_empty {
                    return Err(syntax(i, SyntaxKind::DanglingBond));
                }
                prev = None;
                i += 1;
            }
            '0'..='9' | '%' => {
                let atom = prev.ok_or_else(|| syntax(i, SyntaxKind::MisplacedRingClosure))?;
                if branch_empty {
                    return Err(syntax(i, SyntaxKind::MisplacedRingClosure));
                }
                let (number, next) = if c == '%' {
                    let d1 = chars.get(i + 1).and_then(|c| c.to_digit(10));
                    let d2 = chars.get(i + 2).and_then(|c| c.to_digit(10));
                    match (d1, d2) {
                        (Some(a), Some(b)) => ((a * 10 + b) as u16, i + 3),
                        _ => return Err(syntax(i, SyntaxKind::MisplacedRingClosure)),
                    }
                } else {
                    (c.to_digit(10).unwrap() as u16, i + 1)
                };
                let order = pending.take().map(|(o, _)| o);
                match rings.remove(&number) {
                    Some(open) => {
                        if open.atom == atom {
                            return Err(syntax(start, SyntaxKind::SelfBond));
                        }
                        let order = match (open.order, order) {
                            (Some(a), Some(b)) if a != b => {
                                return Err(syntax(start, SyntaxKind::ConflictingRingBond))
                            }
                            (Some(a), _) => a,
                            (None, Some(b)) => b,
                            (None, None) => RawOrder::Unspecified,
                        };
                        add_bond(&mut graph, open.atom, atom, order, start)?;
                    }
                    None => {
                        rings.insert(number, OpenRing { atom, order, position: start });
                    }
                }
                i = next;
            }
            '[' => {
                let (atom, next) = parse_bracket(&chars, i)?;
                attach(&mut graph, atom, &mut prev, &mut pending, i)?;
                branch_empty = false;
                i = next;
            }
            _ => {
                let (atom, next) = parse_organic(&chars, i)?;
                attach(&mut graph, atom, &mut prev, &mut pending, i)?;
                branch_empty = false;
                i = next;
            }
        }
    }

    if let Some((_, pos)) = pending {
        return Err(syntax(pos, SyntaxKind::DanglingBond));
    }
    if let Some(&(_, pos)) = branches.last() {
        return Err(syntax(pos, SyntaxKind::UnbalancedParenthesis));
    }
    if let Some(pos) = rings.values().map(|r| r.position).min() {
        return Err(syntax(pos, SyntaxKind::UnclosedRing));
    }
    Ok(graph)
}

fn attach(
    graph: &mut RawGraph,
    atom: RawAtom,
    prev: &mut Option<usize>,
    pending: &mut Option<(RawOrder, usize)>,
    position: usize,
) -> Result<(), ChemError> {
    let index = graph.atoms.len();
    graph.atoms.push(atom);
    if let Some(p) = *prev {
        let order = pending.take().map(|(o, _)| o).unwrap_or(RawOrder::Unspecified);
        add_bond(graph, p, index, order, position)?;
    }
    *prev = Some(index);
    Ok(())
}

fn add_bond(graph: &mut RawGraph, a: usize, b: usize, order: RawOrder, position: usize) -> Result<(), ChemError> {
    if graph.bonds.iter().any(|x| (x.a == a && x.b == b) || (x.a == b && x.b == a)) {
        return Err(syntax(position, SyntaxKind::DuplicateBond));
    }
    graph.bonds.push(RawBond { a, b, order });
    Ok(())
}

fn parse_organic(chars: &[char], i: usize) -> Result<(RawAtom, usize), ChemError> {
    let c = chars[i];
    let next = chars.get(i + 1).copied();
    let (element, aromatic, len) = match (c, next) {
        ('C', Some('l')) => (Element::Cl, false, 2),
        ('B', Some('r')) => (Element::Br, false, 2),
        ('B', _) => (Element::B, false, 1),
        ('C', _) => (Element::C, false, 1),
        ('N', _) => (Element::N, false, 1),
        ('O', _) => (Element::O, false, 1),
        ('P', _) => (Element::P, false, 1),
        ('S', _) => (Element::S, false, 1),
        ('F', _) => (Element::F, false, 1),
        ('I', _) => (Element::I, false, 1),
        ('b', _) => (Element::B, true, 1),
        ('c', _) => (Element::C, true, 1),
        ('n', _) => (Element::N, true, 1),
        ('o', _) => (Element::O, true, 1),
        ('p', _) => (Element::P, true, 1),
        ('s', _) => (Element::S, true, 1),
        _ => return Err(syntax(i, SyntaxKind::UnknownSymbol)),
    };
    Ok((RawAtom { element, aromatic, charge: 0, isotope: None, bracket_h: None }, i + len))
}

fn parse_bracket(chars: &[char], open: usize) -> Result<(RawAtom, usize), ChemError> {
    let mut i = open + 1;
    let at = |i: usize| chars.get(i).copied();

    let mut isotope: Option<u16> = None;
    let mut digits = String::new();
    while let Some(d) = at(i).filter(|c| c.is_ascii_digit()) {
        digits.push(d);
        i += 1;
    }
    if !digits.is_empty() {
        isotope = Some(digits.parse().map_err(|_| syntax(open, SyntaxKind::InvalidBracketAtom))?);
    }

    // element symbol: aromatic two-letter, aromatic one-letter, or element
    let (element, aromatic) = {
        let c0 = at(i).ok_or_else(|| syntax(open, SyntaxKind::UnclosedBracket))?;
        let c1 = at(i + 1);
        let two: Option<String> = c1.map(|c1| [c0, c1].iter().collect());
        if c0 == '*' {
            return Err(syntax(i, SyntaxKind::UnsupportedElement));
        }
        if let Some(two) = two.as_deref().filter(|s| matches!(*s, "se" | "as" | "te")) {
            i += 2;
            let element = match two {
                "se" => Element::Se,
                _ => return Err(syntax(i - 2, SyntaxKind::UnsupportedElement)),
            };
            (element, true)
        } else if c0.is_ascii_lowercase() {
            i += 1;
            let element = match c0 {
                'b' => Element::B,
                'c' => Element::C,
                'n' => Element::N,
                'o' => Element::O,
                'p' => Element::P,
                's' => Element::S,
                _ => return Err(syntax(i - 1, SyntaxKind::UnknownSymbol)),
            };
            (element, true)
        } else if c0.is_ascii_uppercase() {
            let symbol = match two.as_deref() {
                Some(t) if c1.is_some_and(|c| c.is_ascii_lowercase()) && atomic_number_of(t).is_some() => {
                    i += 2;
                    t.to_string()
                }
                _ => {
                    i += 1;
                    c0.to_string()
                }
            };
            if atomic_number_of(&symbol).is_none() {
                return Err(syntax(i - symbol.len(), SyntaxKind::UnknownSymbol));
            }
            let element = Element::from_symbol(&symbol)
                .ok_or_else(|| syntax(i - symbol.len(), SyntaxKind::UnsupportedElement))?;
            (element, false)
        } else {
            return Err(syntax(i, SyntaxKind::InvalidBracketAtom));
        }
    };

    // chirality: parsed and ignored
    if at(i) == Some('@') {
        i += 1;
        if at(i) == Some('@') {
            i += 1;
        } else {
            while at(i).is_some_and(|c| c.is_ascii_uppercase() && c != 'H') {
                i += 1;
            }
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
        }
    }

    let mut h = 0u8;
    if at(i) == Some('H') {
        i += 1;
        let mut d = String::new();
        while let Some(c) = at(i).filter(|c| c.is_ascii_digit()) {
            d.push(c);
            i += 1;
        }
        h = if d.is_empty() { 1 } else { d.parse().map_err(|_| syntax(i, SyntaxKind::InvalidBracketAtom))? };
    }

    let mut charge: i32 = 0;
    if let Some(sign @ ('+' | '-')) = at(i) {
        let unit = if sign == '+' { 1 } else { -1 };
        i += 1;
        let mut d = String::new();
        while let Some(c) = at(i).filter(|c| c.is_ascii_digit()) {
            d.push(c);
            i += 1;
        }
        if !d.is_empty() {
            charge = unit * d.parse::<i32>().map_err(|_| syntax(i, SyntaxKind::InvalidBracketAtom))?;
        } else {
            charge = unit;
            while at(i) == Some(sign) {
                charge += unit;
                i += 1;
            }
        }
    }
    if !(-4..=4).contains(&charge) {
        return Err(syntax(open, SyntaxKind::ChargeOutOfRange));
    }

    // atom class: ignored
    if at(i) == Some(':') {
        i += 1;
        while at(i).is_some_and(|c| c.is_ascii_digit()) {
            i += 1;
        }
    }

    if at(i) != Some(']') {
        return Err(syntax(open, SyntaxKind::UnclosedBracket));
    }
    Ok((
        RawAtom { element, aromatic, charge: charge as i8, isotope, bracket_h: Some(h) },
        i + 1,
    ))
}
