//! Canonical JSON forms for every file artifact. Emission is
//! deterministic (full closed relations, pairs and sets sorted
//! lexicographically) so serialize/parse round-trips are byte-exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fposet::FPoset;
use crate::preorder::Preorder;
use crate::topology::FiniteSpace;

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct PreorderJson {
    pub size: usize,
    pub leq: Vec<(usize, usize)>,
    pub closed: bool,
}

impl From<&Preorder> for PreorderJson {
    fn from(p: &Preorder) -> Self {
        PreorderJson {
            size: p.size(),
            leq: p.pairs(),
            closed: true,
        }
    }
}

impl PreorderJson {
    pub fn to_preorder(&self) -> Result<Preorder> {
        Preorder::from_pairs(self.size, &self.leq, !self.closed)
    }
}

/// Pairing header carried by product carrier files.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct PairingJson {
    pub left_size: usize,
    pub right_size: usize,
    pub formula: String,
}

pub fn pairing(left_size: usize, right_size: usize) -> PairingJson {
    PairingJson {
        left_size,
        right_size,
        formula: "index = left * right_size + right".to_string(),
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct ProductJson {
    pub size: usize,
    pub leq: Vec<(usize, usize)>,
    pub closed: bool,
    pub pairing: PairingJson,
}

/// Finite-support product carrier with its mixed-radix pairing header.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct FspJson {
    pub size: usize,
    pub leq: Vec<(usize, usize)>,
    pub closed: bool,
    pub factors: Vec<usize>,
    pub tops: Vec<usize>,
    pub supports: Vec<Vec<usize>>,
    pub pairing: String,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct FPosetJson {
    pub family: Vec<Vec<usize>>,
    pub sets: Vec<Vec<usize>>,
    pub leq: Vec<(usize, usize)>,
}

impl From<&FPoset> for FPosetJson {
    fn from(fp: &FPoset) -> Self {
        FPosetJson {
            family: fp.family().members().to_vec(),
            sets: fp.sets().to_vec(),
            leq: fp.order().pairs(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct SpaceJson {
    pub points: usize,
    pub opens: Vec<Vec<usize>>,
}

impl From<&FiniteSpace> for SpaceJson {
    fn from(x: &FiniteSpace) -> Self {
        SpaceJson {
            points: x.points(),
            opens: x.opens_as_sets(),
        }
    }
}

impl SpaceJson {
    pub fn to_space(&self) -> Result<FiniteSpace> {
        FiniteSpace::new(self.points, &self.opens)
    }
}

/// Pretty-printed canonical emission with a trailing newline.
pub fn emit<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Compact one-line emission (stream manifests).
pub fn emit_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

pub fn parse<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn emit_preorder(p: &Preorder) -> String {
    emit(&PreorderJson::from(p))
}

pub fn parse_preorder(s: &str) -> Result<Preorder> {
    parse::<PreorderJson>(s)?.to_preorder()
}

/// One instance per line, in the stream's canonical order.
pub fn manifest_jsonl(instances: impl IntoIterator<Item = Preorder>) -> String {
    let mut out = String::new();
    for p in instances {
        out.push_str(&emit_line(&PreorderJson::from(&p)));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preorder_roundtrip_is_byte_exact() {
        let p = Preorder::from_pairs(3, &[(0, 1), (1, 2)], true).unwrap();
        let s = emit_preorder(&p);
        let q = parse_preorder(&s).unwrap();
        assert_eq!(p, q);
        assert_eq!(emit_preorder(&q), s);
    }

    #[test]
    fn unclosed_input_is_closed_on_parse() {
        let s = r#"{"size": 2, "leq": [[0, 1]], "closed": false}"#;
        let p = parse_preorder(s).unwrap();
        assert_eq!(p.pairs(), vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn invalid_closed_input_names_the_invariant() {
        let s = r#"{"size": 2, "leq": [[0, 1]], "closed": true}"#;
        let err = parse_preorder(s).unwrap_err();
        assert_eq!(err, Error::RelationNotReflexive { index: 0 });
    }

    #[test]
    fn manifest_is_one_line_per_instance() {
        let m = manifest_jsonl([Preorder::chain(1), Preorder::flat(2)]);
        assert_eq!(m.lines().count(), 2);
        let first: PreorderJson = parse(m.lines().next().unwrap()).unwrap();
        assert_eq!(first.size, 1);
    }
}
