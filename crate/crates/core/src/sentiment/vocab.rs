use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Sparse feature row: `(feature index, value)` sorted by index.
pub type SparseRow<T> = Vec<(usize, T)>;

/// Lowercased runs of alphanumeric characters.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl From<Vec<String>> for Vocabulary {
    fn from(terms: Vec<String>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary { terms, index }
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.terms
    }
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    /// Copy without the listed term positions; order of the rest is kept.
    pub fn without(&self, drop: &[usize]) -> Vocabulary {
        let mut keep = vec![true; self.terms.len()];
        for &i in drop {
            if i < keep.len() {
                keep[i] = false;
            }
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(t, _)| t.clone())
            .collect();
        terms.into()
    }
}

/// Most frequent tokens of the corpus, skipping tokens that start with a
/// banned prefix. Ties in frequency are broken lexicographically.
pub fn build_vocabulary<'a>(
    corpus: impl IntoIterator<Item = &'a str>,
    max_features: usize,
    banned_prefixes: &[&str],
) -> Result<Vocabulary> {
    if max_features == 0 {
        return Err(Error::invalid("max_features must be at least 1"));
    }
    let mut counts: HashMap<String, usize> = HashMap::new();
    for doc in corpus {
        for tok in tokenize(doc) {
            if banned_prefixes.iter().any(|p| tok.starts_with(p)) {
                continue;
            }
            *counts.entry(tok).or_default() += 1;
        }
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(max_features);
    Ok(ranked.into_iter().map(|(t, _)| t).collect::<Vec<_>>().into())
}

/// Raw term counts of `text` over `vocab`; out-of-vocabulary tokens are ignored.
pub fn featurize<T: Scalar>(text: &str, vocab: &Vocabulary) -> SparseRow<T> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for tok in tokenize(text) {
        if let Some(i) = vocab.get(&tok) {
            *counts.entry(i).or_default() += 1;
        }
    }
    let mut row: SparseRow<T> = counts
        .into_iter()
        .map(|(i, c)| (i, T::from_count(c)))
        .collect();
    row.sort_unstable_by_key(|&(i, _)| i);
    row
}
