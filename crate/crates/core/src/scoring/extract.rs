use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;

use super::{AnswerKind, ExtractedAnswer, InvalidCategory};
use crate::chem::{parse_smiles_lenient, CanonicalKey, ChemError};

const OPEN: &str = "<answer>";
const CLOSE: &str = "</answer>";

/// Content of the last well-formed `<answer>…</answer>` span. Tags pair
/// left to right; a close tag pairs with the nearest unclosed open tag.
pub fn last_answer_span(text: &str) -> Option<&str> {
    let mut last = None;
    let mut pos = 0;
    while let Some(open) = text[pos..].find(OPEN).map(|i| pos + i) {
        let body = open + OPEN.len();
        let Some(close) = text[body..].find(CLOSE).map(|i| body + i) else { break };
        let start = text[body..close].rfind(OPEN).map_or(body, |i| body + i + OPEN.len());
        last = Some(&text[start..close]);
        pos = close + CLOSE.len();
    }
    last
}

pub fn extract_answer(text: &str, expected: AnswerKind) -> ExtractedAnswer {
    let Some(content) = last_answer_span(text) else {
        return ExtractedAnswer::Invalid(InvalidCategory::NoAnswerTags);
    };
    match expected {
        AnswerKind::Smiles => extract_smiles(content),
        AnswerKind::Number => extract_number(content),
        AnswerKind::ClassLabel => extract_label(content),
    }
}

fn strip_token(token: &str) -> &str {
    token
        .trim_start_matches(['"', '\'', '`', '*', '_', '<', '>'])
        .trim_end_matches(['"', '\'', '`', '*', '_', '<', '>', ',', ';', ':', '!', '?', '.'])
}

/// Loose test for text that was meant as SMILES: an uppercase atom symbol
/// plus some structural punctuation or digits.
fn smiles_shaped(token: &str) -> bool {
    token.chars().any(|c| c.is_ascii_uppercase() || "cnos".contains(c))
        && token.chars().any(|c| "()[]=#@+-/\\%0123456789".contains(c))
        && token.chars().all(|c| c.is_ascii_graphic())
}

fn extract_smiles(content: &str) -> ExtractedAnswer {
    struct Candidate {
        token: String,
        key: CanonicalKey,
        heavy: usize,
    }
    let mut valid: Vec<(Candidate, crate::chem::Molecule)> = Vec::new();
    let mut multi = false;
    let mut malformed = false;
    for raw in content.split_whitespace() {
        let token = strip_token(raw);
        if token.is_empty() {
            continue;
        }
        match parse_smiles_lenient(token) {
            Ok(mol) if mol.is_valid() && mol.is_multi_fragment() => multi = true,
            Ok(mol) if mol.is_valid() => {
                let key = CanonicalKey(mol.canonical_smiles().to_string());
                let heavy = mol.num_atoms();
                valid.push((Candidate { token: token.to_string(), key, heavy }, mol));
            }
            Ok(_) | Err(ChemError::Valence { .. }) | Err(ChemError::InvalidMolecule(_)) => malformed = true,
            Err(_) => malformed |= smiles_shaped(token),
        }
    }
    // single letters such as "C" or "I" inside prose are kept only when
    // nothing larger was proposed
    if valid.iter().any(|(c, _)| c.heavy > 1) {
        valid.retain(|(c, _)| c.heavy > 1);
    }
    let distinct: BTreeSet<&CanonicalKey> = valid.iter().map(|(c, _)| &c.key).collect();
    if multi || distinct.len() > 1 {
        return ExtractedAnswer::Invalid(InvalidCategory::MultipleSmiles);
    }
    // one distinct structure; keep the longest spelling of it
    match valid.into_iter().max_by_key(|(c, _)| c.token.len()) {
        Some((c, mol)) => ExtractedAnswer::Smiles { molecule: Box::new(mol), key: c.key },
        None if malformed => ExtractedAnswer::Invalid(InvalidCategory::InvalidSmiles),
        None => ExtractedAnswer::Invalid(InvalidCategory::NoSmilesInAnswer),
    }
}

fn number_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?:^|[^\w.])([-+−]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+−]?\d+)?)(?:\s*(?:[x×*])\s*10\s*(?:\^|\*\*)\s*\(?([-+−]?\d+)\)?)?",
        )
        .expect("number pattern compiles")
    })
}

fn parse_signed(s: &str) -> Option<f64> {
    s.replace('\u{2212}', "-").parse::<f64>().ok().filter(|v| v.is_finite())
}

/// All numbers in `content`, in order, with `a × 10^b` folded into one
/// value and trailing units ignored.
pub fn numbers_in(content: &str) -> Vec<f64> {
    number_pattern()
        .captures_iter(content)
        .filter_map(|c| {
            match c.get(2) {
                // parse "3.2e-5" as one literal so the value is correctly rounded
                Some(exp) if !c[1].contains(['e', 'E']) => parse_signed(&format!("{}e{}", &c[1], exp.as_str())),
                Some(_) => None,
                None => parse_signed(&c[1]),
            }
        })
        .collect()
}

fn extract_number(content: &str) -> ExtractedAnswer {
    let trimmed = content.trim();
    if let Some(v) = parse_signed(trimmed) {
        return ExtractedAnswer::Number(v);
    }
    let mut values = numbers_in(trimmed);
    values.sort_by(f64::total_cmp);
    values.dedup();
    match values.as_slice() {
        [] => ExtractedAnswer::Invalid(InvalidCategory::NoNumber),
        [v] => ExtractedAnswer::Number(*v),
        _ => ExtractedAnswer::Invalid(InvalidCategory::AmbiguousNumber),
    }
}

fn extract_label(content: &str) -> ExtractedAnswer {
    let label = content.trim().trim_matches(|c: char| c.is_ascii_punctuation() || c.is_whitespace()).to_lowercase();
    if label.is_empty() {
        ExtractedAnswer::Invalid(InvalidCategory::NoNumber)
    } else {
        ExtractedAnswer::ClassLabel(label)
    }
}
