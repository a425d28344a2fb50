//! Built-in example positions and labellings, embedded at compile time.

use crate::compression::CompressionMap;
use crate::error::{Error, Result};
use crate::format::{parse_document, parse_poset};
use crate::poset::Poset;

/// A named built-in: either a plain poset or a candidate map (unverified).
pub enum Fixture {
    Poset(Poset),
    Map(CompressionMap),
}

const FIXTURES: [(&str, &str); 13] = [
    ("fig1_left", include_str!("../fixtures/fig1_left.poset")),
    ("fig2_nim", include_str!("../fixtures/fig2_nim.poset")),
    ("fig3_map", include_str!("../fixtures/fig3_map.poset")),
    ("fig4_map", include_str!("../fixtures/fig4_map.poset")),
    ("fig5_A", include_str!("../fixtures/fig5_A.poset")),
    ("fig5_Q", include_str!("../fixtures/fig5_Q.poset")),
    ("fig5_B", include_str!("../fixtures/fig5_B.poset")),
    ("fig6", include_str!("../fixtures/fig6.poset")),
    ("fig7_left", include_str!("../fixtures/fig7_left.poset")),
    ("fig7_mid", include_str!("../fixtures/fig7_mid.poset")),
    ("fig7_right", include_str!("../fixtures/fig7_right.poset")),
    ("fig8_left", include_str!("../fixtures/fig8_left.poset")),
    ("fig8_mid", include_str!("../fixtures/fig8_mid.poset")),
];

/// Names of all built-ins, in a stable order.
pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|&(n, _)| n).collect()
}

/// The raw document text of one built-in.
pub fn fixture_text(name: &str) -> Result<&'static str> {
    FIXTURES
        .iter()
        .find(|&&(n, _)| n == name)
        .map(|&(_, t)| t)
        .ok_or_else(|| Error::MissingFixture(name.to_string()))
}

/// Parses one built-in. Documents with two blocks load as maps, one block
/// as a poset.
pub fn load_fixture(name: &str) -> Result<Fixture> {
    let doc = parse_document(fixture_text(name)?)?;
    if doc.blocks.len() == 2 {
        Ok(Fixture::Map(doc.as_map()?))
    } else {
        Ok(Fixture::Poset(doc.single_poset()?))
    }
}

/// Parses a built-in known to be a plain poset.
pub fn load_fixture_poset(name: &str) -> Result<Poset> {
    parse_poset(fixture_text(name)?)
}

/// Parses a built-in known to be a map.
pub fn load_fixture_map(name: &str) -> Result<CompressionMap> {
    match load_fixture(name)? {
        Fixture::Map(m) => Ok(m),
        Fixture::Poset(_) => Err(Error::MissingFixture(format!("{name} is not a map"))),
    }
}

/// All built-ins, parsed.
pub fn load_fixtures() -> Vec<(&'static str, Fixture)> {
    FIXTURES
        .iter()
        .map(|&(n, _)| (n, load_fixture(n).expect("built-in fixtures parse")))
        .collect()
}
