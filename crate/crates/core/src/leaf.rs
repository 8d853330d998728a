//! Leaf labels: the atoms every triple, tree, and hypergraph node is built from.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeafError {
    #[error("invalid leaf name {0:?}: names are nonempty and match [A-Za-z0-9_+]+")]
    InvalidName(String),
}

/// A leaf label. Compared lexicographically by name; clones are cheap.
///
/// Names are restricted to `[A-Za-z0-9_+]+` so that every leaf survives the
/// text formats (triple files, hypergraph files, Newick) unescaped.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leaf(Arc<str>);

impl Leaf {
    pub fn new(name: &str) -> Result<Self, LeafError> {
        if name.is_empty() || !name.bytes().all(is_name_byte) {
            return Err(LeafError::InvalidName(name.to_string()));
        }
        Ok(Leaf(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'+'
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Leaf {
    type Err = LeafError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Leaf::new(s)
    }
}

impl AsRef<str> for Leaf {
    fn as_ref(&self) -> &str {
        &self.0
    }
}
