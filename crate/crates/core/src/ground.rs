use std::collections::HashMap;

use crate::error::{input, Error, Result};
use crate::set::{Element, ElementSet, MAX_ELEMENTS};

/// Ordered list of distinct element identifiers.
///
/// The position of an identifier is its element index; index order is the
/// canonical order used for every deterministic tie-break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    names: Vec<String>,
    index: HashMap<String, Element>,
}

impl GroundSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_ELEMENTS {
            return input(format!(
                "{} elements exceed the cap of {MAX_ELEMENTS} (build with the `wide` feature to raise it)",
                names.len()
            ));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return input(format!("duplicate element identifier `{n}`"));
            }
        }
        Ok(GroundSet { names, index })
    }

    /// Ground set with identifiers `e0, e1, ...`.
    pub fn numbered(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("e{i}"))).expect("numbered ground set within cap")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::range(self.names.len())
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<Element> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn resolve<S: AsRef<str>>(&self, names: &[S]) -> Result<ElementSet> {
        names.iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    /// Identifiers of `set` in canonical order.
    pub fn names_of(&self, set: ElementSet) -> Vec<String> {
        set.iter().map(|e| self.names[e].clone()).collect()
    }

    /// A copy of this ground set with one more identifier appended.
    pub fn extended(&self, extra: impl Into<String>) -> Result<Self> {
        let mut names = self.names.clone();
        names.push(extra.into());
        Self::new(names)
    }

    /// An identifier derived from `base` that does not clash with this ground set.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut candidate = format!("{base}^");
        while self.index.contains_key(&candidate) {
            candidate.push('^');
        }
        candidate
    }
}
