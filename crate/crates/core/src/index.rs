//! Multiplicity vectors indexed by an integer class label, the common
//! output shape of the kernel-index and lowest-weight computations.

use std::collections::BTreeMap;
use std::fmt;

/// Formal sum of classes with integer multiplicities.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IndexClass {
    classes: BTreeMap<i64, i64>,
}

impl IndexClass {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, class: i64, multiplicity: i64) {
        if multiplicity == 0 {
            return;
        }
        let slot = self.classes.entry(class).or_insert(0);
        *slot += multiplicity;
        if *slot == 0 {
            self.classes.remove(&class);
        }
    }

    pub fn get(&self, class: i64) -> i64 {
        self.classes.get(&class).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.classes.iter().map(|(&c, &m)| (c, m))
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.classes.values().sum()
    }

    /// Compact JSON object `{"class": multiplicity, ..}` with sorted keys.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self
            .classes
            .iter()
            .map(|(c, m)| format!("\"{c}\":{m}"))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

impl fmt::Display for IndexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl FromIterator<(i64, i64)> for IndexClass {
    fn from_iter<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (c, m) in iter {
            out.add(c, m);
        }
        out
    }
}
