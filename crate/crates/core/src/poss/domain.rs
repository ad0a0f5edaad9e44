use std::collections::HashMap;

use crate::error::{Error, Result};

/// Finite ordered set of distinct value labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Domain {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels, index })
    }

    /// Domain with labels `"0"`, `"1"`, ... `"n-1"`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: a domain holds at least one label.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Checks that every index lies inside the domain.
    pub fn check_indices(&self, indices: &[usize]) -> Result<()> {
        match indices.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(Error::IndexOutOfRange { index, size: self.len() }),
            None => Ok(()),
        }
    }

    /// Sorted, de-duplicated complement of `subset`.
    pub fn complement(&self, subset: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.len()];
        for &i in subset {
            inside[i] = true;
        }
        (0..self.len()).filter(|&i| !inside[i]).collect()
    }
}
