//! Ground-set and stream model.
//!
//! Elements are identified by opaque string ids at the edges of the system
//! (instance files, reports) and by dense `usize` indices everywhere else.
//! Dense indices are assigned in lexicographic order of the ids, so comparing
//! index vectors is the same as comparing id vectors.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// One element of the ground set together with its stream position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: String,
    pub index: usize,
    pub arrival_index: usize,
}

/// Bidirectional map between element ids and dense indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Universe {
    ids: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl Universe {
    /// Builds a universe from a list of ids. Duplicates are rejected.
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!(
                "duplicate element id `{}`",
                w[0]
            )));
        }
        let lookup = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Ok(Universe { ids, lookup })
    }

    /// A universe of `n` elements named `0`, `1`, ... (zero-padded so that
    /// lexicographic and numeric order agree).
    pub fn anonymous(n: usize) -> Self {
        let width = n.saturating_sub(1).to_string().len();
        Universe::new((0..n).map(|i| format!("{i:0width$}"))).expect("generated ids are unique")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.lookup.get(id).copied()
    }

    pub fn require(&self, id: &str, context: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::Validation(format!("unknown element id `{id}` in {context}")))
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }
}

/// Stream position of each element. Elements that have not been assigned a
/// position (e.g. a partially described order) report `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalOrder {
    position: Vec<Option<usize>>,
}

impl ArrivalOrder {
    /// `order[t]` is the element arriving at time `t`.
    pub fn from_sequence(n: usize, order: &[usize]) -> Result<Self> {
        let mut position = vec![None; n];
        for (t, &e) in order.iter().enumerate() {
            let slot = position.get_mut(e).ok_or(Error::Domain {
                element: e,
                context: "arrival order".into(),
            })?;
            if slot.is_some() {
                return Err(Error::Validation(format!(
                    "element {e} appears more than once in the arrival order"
                )));
            }
            *slot = Some(t);
        }
        Ok(ArrivalOrder { position })
    }

    pub fn position(&self, element: usize) -> Option<usize> {
        self.position.get(element).copied().flatten()
    }

    pub fn require(&self, element: usize) -> Result<usize> {
        self.position(element)
            .ok_or_else(|| Error::Precondition(format!("element {element} has no arrival index")))
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }
}

/// The order in which elements are revealed to a streaming algorithm.
///
/// Iteration yields every element exactly once, in arrival order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalStream {
    sequence: Vec<usize>,
    order: ArrivalOrder,
}

impl ArrivalStream {
    /// `sequence` must be a permutation of `0..n`.
    pub fn new(n: usize, sequence: Vec<usize>) -> Result<Self> {
        if sequence.len() != n {
            return Err(Error::Validation(format!(
                "stream lists {} elements but the ground set has {n}",
                sequence.len()
            )));
        }
        let order = ArrivalOrder::from_sequence(n, &sequence)?;
        Ok(ArrivalStream { sequence, order })
    }

    /// Elements arrive in index order.
    pub fn identity(n: usize) -> Self {
        ArrivalStream::new(n, (0..n).collect()).expect("identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn arrival(&self) -> &ArrivalOrder {
        &self.order
    }

    pub fn elements<'a>(&'a self, universe: &'a Universe) -> impl Iterator<Item = Element> + 'a {
        self.sequence
            .iter()
            .enumerate()
            .map(move |(t, &index)| Element {
                id: universe.id(index).to_string(),
                index,
                arrival_index: t,
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.sequence.iter().copied()
    }
}
