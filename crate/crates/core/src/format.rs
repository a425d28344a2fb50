//! Plain-text documents describing posets and labelled maps.
//!
//! A document is a sequence of blocks. Each block starts with a `poset`
//! line and is followed by `elem`, `cover`, and `label` lines in any order:
//!
//! ```text
//! # comments run to end of line
//! poset example
//! elem a b t
//! cover a t
//! cover b t
//! label a low
//! label b low
//! label t high
//!
//! poset targets
//! elem low high
//! cover low high
//! ```
//!
//! Identifiers use `[A-Za-z0-9_]`. A single unlabelled block describes a
//! poset; a labelled block followed by a target block describes a candidate
//! map (parsed unverified).

use std::sync::Arc;

use crate::compression::CompressionMap;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// One parsed block: a poset plus any `label` lines it carried.
pub struct Block {
    pub poset: Poset,
    pub labels: Vec<(String, String)>,
}

/// A whole parsed document.
pub struct Document {
    pub blocks: Vec<Block>,
}

impl Document {
    /// The document read as a single poset: the first block. Labels and
    /// later blocks are ignored.
    pub fn single_poset(&self) -> Result<Poset> {
        match self.blocks.first() {
            Some(b) => Ok(b.poset.clone()),
            None => Err(Error::parse(0, "document has no poset block")),
        }
    }

    /// The document read as a candidate map: a labelled source block
    /// followed by a target block. The result has not been verified.
    pub fn as_map(&self) -> Result<CompressionMap> {
        if self.blocks.len() != 2 {
            return Err(Error::parse(
                0,
                format!("a map needs exactly 2 blocks, found {}", self.blocks.len()),
            ));
        }
        if !self.blocks[1].labels.is_empty() {
            return Err(Error::parse(0, "target block must not carry labels"));
        }
        let source = Arc::new(self.blocks[0].poset.clone());
        let target = Arc::new(self.blocks[1].poset.clone());
        CompressionMap::from_named(source, target, &self.blocks[0].labels)
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    struct Raw {
        name: String,
        start_line: usize,
        elems: Vec<String>,
        covers: Vec<(String, String)>,
        labels: Vec<(String, String)>,
    }
    let mut raws: Vec<Raw> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let mut tokens = line.split_whitespace();
        let Some(directive) = tokens.next() else {
            continue;
        };
        let rest: Vec<&str> = tokens.collect();
        match directive {
            "poset" => {
                let [name] = rest[..] else {
                    return Err(Error::parse(lineno, "poset line takes exactly one name"));
                };
                raws.push(Raw {
                    name: name.to_string(),
                    start_line: lineno,
                    elems: Vec::new(),
                    covers: Vec::new(),
                    labels: Vec::new(),
                });
            }
            "elem" => {
                let Some(raw) = raws.last_mut() else {
                    return Err(Error::parse(lineno, "elem before any poset line"));
                };
                if rest.is_empty() {
                    return Err(Error::parse(lineno, "elem line names no elements"));
                }
                raw.elems.extend(rest.iter().map(|s| s.to_string()));
            }
            "cover" => {
                let Some(raw) = raws.last_mut() else {
                    return Err(Error::parse(lineno, "cover before any poset line"));
                };
                let [lo, hi] = rest[..] else {
                    return Err(Error::parse(lineno, "cover line takes two names"));
                };
                raw.covers.push((lo.to_string(), hi.to_string()));
            }
            "label" => {
                let Some(raw) = raws.last_mut() else {
                    return Err(Error::parse(lineno, "label before any poset line"));
                };
                let [elem, lab] = rest[..] else {
                    return Err(Error::parse(lineno, "label line takes two names"));
                };
                raw.labels.push((elem.to_string(), lab.to_string()));
            }
            other => {
                return Err(Error::parse(lineno, format!("unknown directive {other}")));
            }
        }
    }
    let mut blocks = Vec::new();
    for raw in raws {
        let poset = Poset::from_covers(&raw.name, &raw.elems, &raw.covers)
            .map_err(|e| Error::parse(raw.start_line, format!("in poset {}: {e}", raw.name)))?;
        blocks.push(Block {
            poset,
            labels: raw.labels,
        });
    }
    Ok(Document { blocks })
}

/// Parses a document and reads it as a single poset.
pub fn parse_poset(text: &str) -> Result<Poset> {
    parse_document(text)?.single_poset()
}

/// Parses a document and reads it as an unverified candidate map.
pub fn parse_map(text: &str) -> Result<CompressionMap> {
    parse_document(text)?.as_map()
}

fn write_poset_block(out: &mut String, p: &Poset) {
    out.push_str("poset ");
    out.push_str(p.name());
    out.push('\n');
    for group in p.element_names().chunks(8) {
        out.push_str("elem");
        for name in group {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
    }
    for (lo, hi) in p.cover_pairs() {
        out.push_str("cover ");
        out.push_str(p.element_name(lo));
        out.push(' ');
        out.push_str(p.element_name(hi));
        out.push('\n');
    }
}

/// Renders a poset as a parseable document.
pub fn serialize_poset(p: &Poset) -> String {
    let mut out = String::new();
    write_poset_block(&mut out, p);
    out
}

/// Renders a map (source with labels, then target) as a parseable document.
pub fn serialize_map(m: &CompressionMap) -> String {
    let mut out = String::new();
    write_poset_block(&mut out, m.source());
    for i in 0..m.source().len() {
        out.push_str("label ");
        out.push_str(m.source().element_name(i));
        out.push(' ');
        out.push_str(m.target().element_name(m.label_of(i)));
        out.push('\n');
    }
    out.push('\n');
    write_poset_block(&mut out, m.target());
    out
}
