use crate::error::CoreError;
use crate::relation::BooleanRelation;

/// A finite named collection of Boolean relations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Language {
    names: Vec<String>,
    relations: Vec<BooleanRelation>,
}

impl Language {
    pub fn new() -> Self {
        Language::default()
    }

    pub fn add(&mut self, name: impl Into<String>, rel: BooleanRelation) -> Result<usize, CoreError> {
        let name = name.into();
        if self.names.iter().any(|n| *n == name) {
            return Err(CoreError::Precondition(format!(
                "duplicate relation name '{name}'"
            )));
        }
        self.names.push(name);
        self.relations.push(rel);
        Ok(self.relations.len() - 1)
    }

    pub fn from_pairs(pairs: Vec<(&str, BooleanRelation)>) -> Self {
        let mut lang = Language::new();
        for (n, r) in pairs {
            lang.add(n, r).expect("unique names");
        }
        lang
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn relation(&self, idx: usize) -> &BooleanRelation {
        &self.relations[idx]
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BooleanRelation)> {
        self.names
            .iter()
            .map(|n| n.as_str())
            .zip(self.relations.iter())
    }

    /// The language of coordinatewise-negated relations.
    pub fn dual(&self) -> Language {
        Language {
            names: self.names.clone(),
            relations: self.relations.iter().map(|r| r.dual()).collect(),
        }
    }

    /// Drops empty relations (they are handled by formula preprocessing, not
    /// by structural analysis).
    pub fn without_empty(&self) -> Language {
        let mut lang = Language::new();
        for (n, r) in self.iter() {
            if !r.is_empty() {
                lang.add(n, r.clone()).unwrap();
            }
        }
        lang
    }
}
