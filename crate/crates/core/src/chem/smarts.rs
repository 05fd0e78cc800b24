//! A SMARTS subset sufficient for atom-typing tables and substructure alerts.
//!
//! Atom primitives: `*`, `a`, `A`, `#n`, element symbols (uppercase
//! aliphatic, lowercase aromatic), isotope, `H`, `D`, `X`, `v`, `R`, `r`,
//! `x`, charges, recursive `$(...)`. Logic: `!`, `&` (or juxtaposition), `,`,
//! `;`. Bond primitives: `- = # : ~ @` with the same logic operators; an
//! unspecified bond matches single or aromatic.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use super::element::atomic_number_of;
use super::{BondOrder, Molecule};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("SMARTS error at {position} in {pattern:?}: {message}")]
pub struct SmartsError {
    pub pattern: String,
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
enum Expr<P> {
    Prim(P),
    Not(Box<Expr<P>>),
    And(Vec<Expr<P>>),
    Or(Vec<Expr<P>>),
}

impl<P> Expr<P> {
    fn eval(&self, f: &mut impl FnMut(&P) -> bool) -> bool {
        match self {
            Expr::Prim(p) => f(p),
            Expr::Not(e) => !e.eval(f),
            Expr::And(v) => v.iter().all(|e| e.eval(f)),
            Expr::Or(v) => v.iter().any(|e| e.eval(f)),
        }
    }
}

#[derive(Debug, Clone)]
enum AtomPrim {
    Any,
    Aromatic(bool),
    AtomicNum(u8),
    Element { z: u8, aromatic: bool },
    Isotope(u16),
    HCount(u8),
    Degree(u8),
    TotalDegree(u8),
    Valence(u8),
    /// `None`: in any ring
    RingCount(Option<u8>),
    /// `None`: in any ring
    RingSize(Option<u8>),
    RingConnectivity(u8),
    Charge(i8),
    Recursive(Box<Smarts>),
}

#[derive(Debug, Clone, Copy)]
enum BondPrim {
    Single,
    Double,
    Triple,
    Aromatic,
    Any,
    Ring,
}

#[derive(Debug, Clone)]
enum BondSpec {
    Default,
    Expr(Expr<BondPrim>),
}

/// A compiled pattern.
#[derive(Debug, Clone)]
pub struct Smarts {
    text: String,
    atoms: Vec<Expr<AtomPrim>>,
    bonds: Vec<(usize, usize, BondSpec)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Matching order with, for each non-root atom, an already-placed neighbour.
    order: Vec<(usize, Option<usize>)>,
}

/// A molecule prepared for matching, optionally with hydrogens as atoms.
pub struct Target<'m> {
    mol: &'m Molecule,
    explicit_h: bool,
    heavy: usize,
    neighbors: Vec<Vec<(usize, TargetBond)>>,
    ring_count: Vec<u8>,
    min_ring: Vec<u8>,
    ring_bonds: Vec<u8>,
    cache: RefCell<HashMap<(usize, usize), bool>>,
}

#[derive(Debug, Clone, Copy)]
struct TargetBond {
    order: BondOrder,
    in_ring: bool,
}

impl<'m> Target<'m> {
    pub fn new(mol: &'m Molecule, explicit_h: bool) -> Target<'m> {
        let heavy = mol.num_atoms();
        let mut neighbors: Vec<Vec<(usize, TargetBond)>> = (0..heavy)
            .map(|i| {
                mol.neighbors(i)
                    .iter()
                    .map(|&(w, b)| (w, TargetBond { order: mol.bonds()[b].order, in_ring: mol.bond_in_ring(b) }))
                    .collect()
            })
            .collect();
        if explicit_h {
            for i in 0..heavy {
                for _ in 0..mol.h_count(i) {
                    let h = neighbors.len();
                    let bond = TargetBond { order: BondOrder::Single, in_ring: false };
                    neighbors[i].push((h, bond));
                    neighbors.push(vec![(i, bond)]);
                }
            }
        }
        let n = neighbors.len();
        let mut ring_count = vec![0u8; n];
        let mut min_ring = vec![0u8; n];
        for ring in mol.rings() {
            for &a in ring {
                ring_count[a] = ring_count[a].saturating_add(1);
                let size = ring.len().min(255) as u8;
                if min_ring[a] == 0 || size < min_ring[a] {
                    min_ring[a] = size;
                }
            }
        }
        let ring_bonds = (0..n).map(|i| neighbors[i].iter().filter(|(_, b)| b.in_ring).count() as u8).collect();
        Target { mol, explicit_h, heavy, neighbors, ring_count, min_ring, ring_bonds, cache: RefCell::new(HashMap::new()) }
    }

    pub fn num_atoms(&self) -> usize {
        self.neighbors.len()
    }

    pub fn molecule(&self) -> &Molecule {
        self.mol
    }

    fn is_h(&self, i: usize) -> bool {
        i >= self.heavy
    }

    fn atomic_number(&self, i: usize) -> u8 {
        if self.is_h(i) {
            1
        } else {
            self.mol.atom(i).element.atomic_number()
        }
    }

    fn aromatic(&self, i: usize) -> bool {
        !self.is_h(i) && self.mol.atom(i).aromatic
    }

    fn total_h(&self, i: usize) -> u8 {
        if self.is_h(i) {
            0
        } else {
            self.mol.h_count(i)
        }
    }

    fn eval_prim(&self, p: &AtomPrim, i: usize) -> bool {
        match p {
            AtomPrim::Any => true,
            AtomPrim::Aromatic(a) => self.aromatic(i) == *a,
            AtomPrim::AtomicNum(z) => self.atomic_number(i) == *z,
            AtomPrim::Element { z, aromatic } => self.atomic_number(i) == *z && self.aromatic(i) == *aromatic,
            AtomPrim::Isotope(m) => !self.is_h(i) && self.mol.atom(i).isotope == Some(*m),
            AtomPrim::HCount(h) => self.total_h(i) == *h,
            AtomPrim::Degree(d) => self.neighbors[i].len() == *d as usize,
            AtomPrim::TotalDegree(x) => {
                let implicit = if self.is_h(i) || self.explicit_h { 0 } else { self.total_h(i) as usize };
                self.neighbors[i].len() + implicit == *x as usize
            }
            AtomPrim::Valence(v) => {
                if self.is_h(i) {
                    *v == 1
                } else {
                    self.mol.valence(i) == *v
                }
            }
            AtomPrim::RingCount(None) => self.ring_count[i] > 0,
            AtomPrim::RingCount(Some(n)) => self.ring_count[i] == *n,
            AtomPrim::RingSize(None) => self.ring_count[i] > 0,
            AtomPrim::RingSize(Some(n)) => self.ring_count[i] > 0 && self.min_ring[i] == *n,
            AtomPrim::RingConnectivity(n) => self.ring_bonds[i] == *n,
            AtomPrim::Charge(c) => {
                let charge = if self.is_h(i) { 0 } else { self.mol.atom(i).charge };
                charge == *c
            }
            AtomPrim::Recursive(sub) => {
                let key = (sub.as_ref() as *const Smarts as usize, i);
                if let Some(&hit) = self.cache.borrow().get(&key) {
                    return hit;
                }
                let hit = sub.matches_at(self, i);
                self.cache.borrow_mut().insert(key, hit);
                hit
            }
        }
    }

    fn atom_ok(&self, expr: &Expr<AtomPrim>, i: usize) -> bool {
        expr.eval(&mut |p| self.eval_prim(p, i))
    }

    fn bond_ok(spec: &BondSpec, b: TargetBond) -> bool {
        match spec {
            BondSpec::Default => matches!(b.order, BondOrder::Single | BondOrder::Aromatic),
            BondSpec::Expr(e) => e.eval(&mut |p| match p {
                BondPrim::Single => b.order == BondOrder::Single,
                BondPrim::Double => b.order == BondOrder::Double,
                BondPrim::Triple => b.order == BondOrder::Triple,
                BondPrim::Aromatic => b.order == BondOrder::Aromatic,
                BondPrim::Any => true,
                BondPrim::Ring => b.in_ring,
            }),
        }
    }

    fn bond_between(&self, a: usize, b: usize) -> Option<TargetBond> {
        self.neighbors[a].iter().find(|(w, _)| *w == b).map(|&(_, t)| t)
    }
}

impl Smarts {
    pub fn parse(text: &str) -> Result<Smarts, SmartsError> {
        Parser { text, chars: text.chars().collect(), pos: 0 }.pattern()
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// True if some match maps the first pattern atom onto `atom`.
    pub fn matches_at(&self, target: &Target, atom: usize) -> bool {
        let mut found = false;
        self.search(target, Some(atom), &mut |_| {
            found = true;
            false
        });
        found
    }

    pub fn has_match(&self, target: &Target) -> bool {
        let mut found = false;
        self.search(target, None, &mut |_| {
            found = true;
            false
        });
        found
    }

    /// Number of matches with distinct target atom sets.
    pub fn count_unique_matches(&self, target: &Target) -> usize {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        self.search(target, None, &mut |m| {
            let mut key = m.to_vec();
            key.sort_unstable();
            seen.insert(key);
            true
        });
        seen.len()
    }

    /// Distinct atom sets, each given in pattern-atom order of its first match.
    pub fn unique_matches(&self, target: &Target) -> Vec<Vec<usize>> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out = Vec::new();
        self.search(target, None, &mut |m| {
            let mut key = m.to_vec();
            key.sort_unstable();
            if seen.insert(key) {
                out.push(m.to_vec());
            }
            true
        });
        out
    }

    /// Enumerate injective matches; `visit` returns false to stop.
    fn search(&self, target: &Target, anchor: Option<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) {
        if self.atoms.is_empty() {
            return;
        }
        let mut map = vec![usize::MAX; self.atoms.len()];
        let mut used = vec![false; target.num_atoms()];
        self.extend(target, 0, anchor, &mut map, &mut used, visit);
    }

    fn extend(
        &self,
        target: &Target,
        depth: usize,
        anchor: Option<usize>,
        map: &mut [usize],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == self.order.len() {
            return visit(map);
        }
        let (p, via) = self.order[depth];
        let candidates: Vec<usize> = match (via, depth, anchor) {
            (_, 0, Some(a)) => vec![a],
            (Some(q), _, _) => target.neighbors[map[q]].iter().map(|&(w, _)| w).collect(),
            (None, _, _) => (0..target.num_atoms()).collect(),
        };
        for t in candidates {
            if used[t] || !target.atom_ok(&self.atoms[p], t) {
                continue;
            }
            let bonds_ok = self.adjacency[p].iter().all(|&(q, b)| {
                if map[q] == usize::MAX {
                    return true;
                }
                match target.bond_between(t, map[q]) {
                    Some(tb) => Target::bond_ok(&self.bonds[b].2, tb),
                    None => false,
                }
            });
            if !bonds_ok {
                continue;
            }
            map[p] = t;
            used[t] = true;
            let more = self.extend(target, depth + 1, anchor, map, used, visit);
            used[t] = false;
            map[p] = usize::MAX;
            if !more {
                return false;
            }
        }
        true
    }
}

struct Parser<'t> {
    text: &'t str,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> SmartsError {
        SmartsError { pattern: self.text.to_string(), position: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            self.chars[start..self.pos].iter().collect::<String>().parse().ok()
        }
    }

    fn pattern(mut self) -> Result<Smarts, SmartsError> {
        let mut atoms: Vec<Expr<AtomPrim>> = Vec::new();
        let mut bonds: Vec<(usize, usize, BondSpec)> = Vec::new();
        let mut prev: Option<usize> = None;
        let mut pending: Option<BondSpec> = None;
        let mut stack: Vec<usize> = Vec::new();
        let mut rings: HashMap<u32, (usize, Option<BondSpec>)> = HashMap::new();

        while let Some(c) = self.peek() {
            match c {
                '(' => {
                    stack.push(prev.ok_or_else(|| self.err("branch without atom"))?);
                    self.pos += 1;
                }
                ')' => {
                    prev = Some(stack.pop().ok_or_else(|| self.err("unbalanced ')'"))?);
                    self.pos += 1;
                }
                '.' => {
                    prev = None;
                    self.pos += 1;
                }
                '-' | '=' | '#' | ':' | '~' | '@' | '!' | '&' | ',' | ';' => {
                    pending = Some(BondSpec::Expr(self.bond_expr()?));
                }
                '0'..='9' | '%' => {
                    let a = prev.ok_or_else(|| self.err("ring closure without atom"))?;
                    let d = if c == '%' {
                        self.pos += 1;
                        self.number().ok_or_else(|| self.err("bad %nn"))?
                    } else {
                        self.pos += 1;
                        c.to_digit(10).unwrap()
                    };
                    match rings.remove(&d) {
                        Some((b, spec)) => {
                            let spec = pending.take().or(spec).unwrap_or(BondSpec::Default);
                            bonds.push((b, a, spec));
                        }
                        None => {
                            rings.insert(d, (a, pending.take()));
                        }
                    }
                }
                '[' => {
                    self.pos += 1;
                    let e = self.atom_expr(true)?;
                    if self.peek() != Some(']') {
                        return Err(self.err("expected ']'"));
                    }
                    self.pos += 1;
                    self.push_atom(e, &mut atoms, &mut bonds, &mut prev, &mut pending);
                }
                _ => {
                    let e = self.bare_atom()?;
                    self.push_atom(e, &mut atoms, &mut bonds, &mut prev, &mut pending);
                }
            }
        }
        if !stack.is_empty() || !rings.is_empty() {
            return Err(self.err("unclosed branch or ring"));
        }

        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, (a, b, _)) in bonds.iter().enumerate() {
            adjacency[*a].push((*b, i));
            adjacency[*b].push((*a, i));
        }
        let mut order = Vec::new();
        let mut placed = vec![false; atoms.len()];
        for root in 0..atoms.len() {
            if placed[root] {
                continue;
            }
            placed[root] = true;
            order.push((root, None));
            let mut k = order.len() - 1;
            while k < order.len() {
                let v = order[k].0;
                k += 1;
                for &(w, _) in &adjacency[v] {
                    if !placed[w] {
                        placed[w] = true;
                        order.push((w, Some(v)));
                    }
                }
            }
        }
        Ok(Smarts { text: self.text.to_string(), atoms, bonds, adjacency, order })
    }

    fn push_atom(
        &self,
        e: Expr<AtomPrim>,
        atoms: &mut Vec<Expr<AtomPrim>>,
        bonds: &mut Vec<(usize, usize, BondSpec)>,
        prev: &mut Option<usize>,
        pending: &mut Option<BondSpec>,
    ) {
        let i = atoms.len();
        atoms.push(e);
        if let Some(p) = *prev {
            bonds.push((p, i, pending.take().unwrap_or(BondSpec::Default)));
        }
        *prev = Some(i);
    }

    fn bare_atom(&mut self) -> Result<Expr<AtomPrim>, SmartsError> {
        let c = self.peek().unwrap();
        let two: Option<String> = self.peek_at(1).map(|d| [c, d].iter().collect());
        let prim = match (c, two.as_deref()) {
            (_, Some("Cl")) | (_, Some("Br")) => {
                self.pos += 2;
                AtomPrim::Element { z: atomic_number_of(two.as_deref().unwrap()).unwrap(), aromatic: false }
            }
            ('*', _) => {
                self.pos += 1;
                AtomPrim::Any
            }
            ('a', _) | ('A', _) => {
                self.pos += 1;
                AtomPrim::Aromatic(c == 'a')
            }
            ('B' | 'C' | 'N' | 'O' | 'P' | 'S' | 'F' | 'I', _) => {
                self.pos += 1;
                AtomPrim::Element { z: atomic_number_of(&c.to_string()).unwrap(), aromatic: false }
            }
            ('b' | 'c' | 'n' | 'o' | 'p' | 's', _) => {
                self.pos += 1;
                AtomPrim::Element { z: atomic_number_of(&c.to_ascii_uppercase().to_string()).unwrap(), aromatic: true }
            }
            _ => return Err(self.err("unexpected character")),
        };
        Ok(Expr::Prim(prim))
    }

    // atom expression: ';' < ',' < '&'/juxtaposition < '!'
    fn atom_expr(&mut self, first_in_bracket: bool) -> Result<Expr<AtomPrim>, SmartsError> {
        let mut parts = vec![self.atom_or(first_in_bracket)?];
        while self.peek() == Some(';') {
            self.pos += 1;
            parts.push(self.atom_or(false)?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn atom_or(&mut self, first: bool) -> Result<Expr<AtomPrim>, SmartsError> {
        let mut parts = vec![self.atom_and(first)?];
        while self.peek() == Some(',') {
            self.pos += 1;
            parts.push(self.atom_and(false)?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::Or(parts) })
    }

    fn atom_and(&mut self, first: bool) -> Result<Expr<AtomPrim>, SmartsError> {
        let mut parts = vec![self.atom_not(first)?];
        loop {
            match self.peek() {
                Some('&') => {
                    self.pos += 1;
                    parts.push(self.atom_not(false)?);
                }
                Some(']' | ',' | ';' | ')') | None => break,
                Some(_) => parts.push(self.atom_not(false)?),
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn atom_not(&mut self, first: bool) -> Result<Expr<AtomPrim>, SmartsError> {
        if self.peek() == Some('!') {
            self.pos += 1;
            return Ok(Expr::Not(Box::new(self.atom_not(false)?)));
        }
        self.atom_prim(first)
    }

    fn atom_prim(&mut self, first: bool) -> Result<Expr<AtomPrim>, SmartsError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        let next = self.peek_at(1);
        if c.is_ascii_uppercase() && next.is_some_and(|d| d.is_ascii_lowercase()) {
            let two: String = [c, next.unwrap()].iter().collect();
            if let Some(z) = atomic_number_of(&two) {
                self.pos += 2;
                return Ok(Expr::Prim(AtomPrim::Element { z, aromatic: false }));
            }
        }
        let prim = match c {
            '*' => {
                self.pos += 1;
                AtomPrim::Any
            }
            'a' if next != Some('s') => {
                self.pos += 1;
                AtomPrim::Aromatic(true)
            }
            'A' => {
                self.pos += 1;
                AtomPrim::Aromatic(false)
            }
            '#' => {
                self.pos += 1;
                AtomPrim::AtomicNum(self.number().ok_or_else(|| self.err("expected atomic number"))? as u8)
            }
            '0'..='9' => AtomPrim::Isotope(self.number().unwrap() as u16),
            '$' => {
                if next != Some('(') {
                    return Err(self.err("expected '(' after '$'"));
                }
                let start = self.pos + 2;
                let mut depth = 0;
                let mut end = None;
                for (k, &ch) in self.chars.iter().enumerate().skip(self.pos + 1) {
                    match ch {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(k);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let end = end.ok_or_else(|| self.err("unclosed recursive SMARTS"))?;
                let inner: String = self.chars[start..end].iter().collect();
                self.pos = end + 1;
                AtomPrim::Recursive(Box::new(Smarts::parse(&inner)?))
            }
            'H' if first && matches!(next, Some(']' | '+' | '-')) => {
                self.pos += 1;
                AtomPrim::AtomicNum(1)
            }
            'H' => {
                self.pos += 1;
                AtomPrim::HCount(self.number().unwrap_or(1) as u8)
            }
            'D' => {
                self.pos += 1;
                AtomPrim::Degree(self.number().unwrap_or(1) as u8)
            }
            'X' => {
                self.pos += 1;
                AtomPrim::TotalDegree(self.number().unwrap_or(1) as u8)
            }
            'v' => {
                self.pos += 1;
                AtomPrim::Valence(self.number().unwrap_or(1) as u8)
            }
            'R' => {
                self.pos += 1;
                AtomPrim::RingCount(self.number().map(|n| n as u8))
            }
            'r' => {
                self.pos += 1;
                AtomPrim::RingSize(self.number().map(|n| n as u8))
            }
            'x' => {
                self.pos += 1;
                AtomPrim::RingConnectivity(self.number().unwrap_or(1) as u8)
            }
            '+' | '-' => {
                self.pos += 1;
                let unit: i32 = if c == '+' { 1 } else { -1 };
                let charge = match self.number() {
                    Some(n) => unit * n as i32,
                    None => {
                        let mut q = unit;
                        while self.peek() == Some(c) {
                            self.pos += 1;
                            q += unit;
                        }
                        q
                    }
                };
                AtomPrim::Charge(charge as i8)
            }
            '@' => {
                while self.peek() == Some('@') {
                    self.pos += 1;
                }
                AtomPrim::Any
            }
            c if c.is_ascii_uppercase() => {
                let z = atomic_number_of(&c.to_string()).ok_or_else(|| self.err("unknown element"))?;
                self.pos += 1;
                AtomPrim::Element { z, aromatic: false }
            }
            c if c.is_ascii_lowercase() => {
                let two: Option<String> = next.map(|d| [c, d].iter().collect());
                match two.as_deref() {
                    Some(t @ ("se" | "as" | "te")) => {
                        self.pos += 2;
                        let mut up = t.to_string();
                        up[..1].make_ascii_uppercase();
                        AtomPrim::Element { z: atomic_number_of(&up).unwrap(), aromatic: true }
                    }
                    _ => {
                        let z = match c {
                            'b' | 'c' | 'n' | 'o' | 'p' | 's' => atomic_number_of(&c.to_ascii_uppercase().to_string()).unwrap(),
                            _ => return Err(self.err("unknown aromatic symbol")),
                        };
                        self.pos += 1;
                        AtomPrim::Element { z, aromatic: true }
                    }
                }
            }
            _ => return Err(self.err("unexpected character in atom")),
        };
        Ok(Expr::Prim(prim))
    }

    fn bond_expr(&mut self) -> Result<Expr<BondPrim>, SmartsError> {
        let mut parts = vec![self.bond_or()?];
        while self.peek() == Some(';') {
            self.pos += 1;
            parts.push(self.bond_or()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn bond_or(&mut self) -> Result<Expr<BondPrim>, SmartsError> {
        let mut parts = vec![self.bond_and()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            parts.push(self.bond_and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::Or(parts) })
    }

    fn bond_and(&mut self) -> Result<Expr<BondPrim>, SmartsError> {
        let mut parts = vec![self.bond_not()?];
        loop {
            match self.peek() {
                Some('&') => {
                    self.pos += 1;
                    parts.push(self.bond_not()?);
                }
                Some('-' | '=' | '#' | ':' | '~' | '@' | '!') => parts.push(self.bond_not()?),
                _ => break,
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn bond_not(&mut self) -> Result<Expr<BondPrim>, SmartsError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end in bond"))?;
        self.pos += 1;
        let prim = match c {
            '!' => return Ok(Expr::Not(Box::new(self.bond_not()?))),
            '-' => BondPrim::Single,
            '=' => BondPrim::Double,
            '#' => BondPrim::Triple,
            ':' => BondPrim::Aromatic,
            '~' => BondPrim::Any,
            '@' => BondPrim::Ring,
            _ => {
                self.pos -= 1;
                return Err(self.err("unexpected character in bond"));
            }
        };
        Ok(Expr::Prim(prim))
    }
}
