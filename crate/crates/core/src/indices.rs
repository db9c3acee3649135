//! Finite multisets, finite sets of indices, and finite index maps.
//!
//! Every index set here is finite, so every index map has finite fibers
//! and is therefore almost injective by construction; no separate check
//! is needed anywhere downstream.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// The ambient index set I is the natural numbers.
pub type Idx = u32;

/// A finite multiset over an ordered carrier. No zero multiplicities are stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Multiset<E: Ord> {
    counts: BTreeMap<E, usize>,
}

impl<E: Ord> Multiset<E> {
    pub fn new() -> Self {
        Multiset {
            counts: BTreeMap::new(),
        }
    }

    pub fn singleton(e: E) -> Self {
        let mut m = Multiset::new();
        m.insert(e);
        m
    }

    pub fn insert(&mut self, e: E) {
        *self.counts.entry(e).or_insert(0) += 1;
    }

    pub fn insert_n(&mut self, e: E, n: usize) {
        if n > 0 {
            *self.counts.entry(e).or_insert(0) += n;
        }
    }

    /// Multiplicity of `e`; zero when absent.
    pub fn count(&self, e: &E) -> usize {
        self.counts.get(e).copied().unwrap_or(0)
    }

    /// Total number of elements, multiplicities included.
    pub fn card(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct elements with their multiplicities, in carrier order.
    pub fn entries(&self) -> impl Iterator<Item = (&E, usize)> {
        self.counts.iter().map(|(e, n)| (e, *n))
    }

    /// Every element repeated by its multiplicity, in carrier order.
    pub fn expand(&self) -> impl Iterator<Item = &E> {
        self.counts
            .iter()
            .flat_map(|(e, n)| std::iter::repeat(e).take(*n))
    }

    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.counts.keys()
    }

    pub fn plus(&self, other: &Self) -> Self
    where
        E: Clone,
    {
        let mut out = self.clone();
        for (e, n) in other.entries() {
            out.insert_n(e.clone(), n);
        }
        out
    }

    /// Multiset difference; `None` when `other` is not contained in `self`.
    pub fn minus(&self, other: &Self) -> Option<Self>
    where
        E: Clone,
    {
        let mut out = self.clone();
        for (e, n) in other.entries() {
            let have = out.count(e);
            if have < n {
                return None;
            }
            if have == n {
                out.counts.remove(e);
            } else {
                out.counts.insert(e.clone(), have - n);
            }
        }
        Some(out)
    }
}

impl<E: Ord> FromIterator<E> for Multiset<E> {
    fn from_iter<T: IntoIterator<Item = E>>(iter: T) -> Self {
        let mut m = Multiset::new();
        for e in iter {
            m.insert(e);
        }
        m
    }
}

impl<E: Ord + Clone> Multiset<E> {
    pub fn from_slice(items: &[E]) -> Self {
        items.iter().cloned().collect()
    }

    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a Self>) -> Self
    where
        E: 'a,
    {
        let mut out = Multiset::new();
        for p in parts {
            for (e, n) in p.entries() {
                out.insert_n(e.clone(), n);
            }
        }
        out
    }
}

/// Selects `[family(i) | i in sel]` with multiplicities.
pub fn mset_select<E: Ord + Clone>(
    family: &BTreeMap<Idx, E>,
    sel: &IndexSet,
) -> Result<Multiset<E>> {
    let mut out = Multiset::new();
    for i in sel.iter() {
        match family.get(&i) {
            Some(e) => out.insert(e.clone()),
            None => {
                return Err(Error::invalid(format!(
                    "index {i} outside family domain"
                )))
            }
        }
    }
    Ok(out)
}

/// A finite set of indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet {
    elems: BTreeSet<Idx>,
}

impl IndexSet {
    pub fn new() -> Self {
        IndexSet::default()
    }

    pub fn singleton(i: Idx) -> Self {
        IndexSet {
            elems: BTreeSet::from([i]),
        }
    }

    pub fn contains(&self, i: Idx) -> bool {
        self.elems.contains(&i)
    }

    pub fn insert(&mut self, i: Idx) {
        self.elems.insert(i);
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Idx> + '_ {
        self.elems.iter().copied()
    }

    pub fn union(&self, other: &Self) -> Self {
        IndexSet {
            elems: self.elems.union(&other.elems).copied().collect(),
        }
    }

    /// Set union that insists the two sets are disjoint.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if let Some(i) = self.elems.intersection(&other.elems).next() {
            return Err(Error::invalid(format!(
                "index sets overlap at {i}; disjoint sum undefined"
            )));
        }
        Ok(self.union(other))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        IndexSet {
            elems: self.elems.intersection(&other.elems).copied().collect(),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        IndexSet {
            elems: self.elems.difference(&other.elems).copied().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.elems.is_disjoint(&other.elems)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.elems.is_subset(&other.elems)
    }

    pub fn max_elem(&self) -> Option<Idx> {
        self.elems.iter().next_back().copied()
    }
}

impl FromIterator<Idx> for IndexSet {
    fn from_iter<T: IntoIterator<Item = Idx>>(iter: T) -> Self {
        IndexSet {
            elems: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A finite function between index sets, kept as its graph. The source is
/// the key set; the target is contextual (any superset of the image).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexMap {
    graph: BTreeMap<Idx, Idx>,
}

impl IndexMap {
    pub fn empty() -> Self {
        IndexMap::default()
    }

    pub fn identity(on: &IndexSet) -> Self {
        IndexMap {
            graph: on.iter().map(|i| (i, i)).collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Idx, Idx)>) -> Result<Self> {
        let mut graph = BTreeMap::new();
        for (k, v) in pairs {
            if graph.insert(k, v).is_some() {
                return Err(Error::invalid(format!(
                    "index map defined twice at {k}"
                )));
            }
        }
        Ok(IndexMap { graph })
    }

    pub fn source(&self) -> IndexSet {
        self.graph.keys().copied().collect()
    }

    pub fn image(&self) -> IndexSet {
        self.graph.values().copied().collect()
    }

    pub fn get(&self, i: Idx) -> Option<Idx> {
        self.graph.get(&i).copied()
    }

    pub fn apply(&self, i: Idx) -> Result<Idx> {
        self.get(i)
            .ok_or_else(|| Error::invalid(format!("index map undefined at {i}")))
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Idx, Idx)> + '_ {
        self.graph.iter().map(|(k, v)| (*k, *v))
    }

    /// `{ j in source | u(j) = k }`; always finite.
    pub fn preimage(&self, k: Idx) -> IndexSet {
        self.graph
            .iter()
            .filter(|(_, v)| **v == k)
            .map(|(j, _)| *j)
            .collect()
    }

    pub fn preimage_of_set(&self, ks: &IndexSet) -> IndexSet {
        self.graph
            .iter()
            .filter(|(_, v)| ks.contains(**v))
            .map(|(j, _)| *j)
            .collect()
    }

    /// Restriction of the graph to the given source keys.
    pub fn restrict(&self, keys: &IndexSet) -> Self {
        IndexMap {
            graph: self
                .graph
                .iter()
                .filter(|(k, _)| keys.contains(**k))
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    /// `self . inner`: apply `inner` first. Errors when the image of `inner`
    /// leaves the source of `self`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let mut graph = BTreeMap::new();
        for (k, v) in inner.iter() {
            let w = self.apply(v)?;
            graph.insert(k, w);
        }
        Ok(IndexMap { graph })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.graph.values().all(|v| seen.insert(*v))
    }

    /// Bijection from its source onto exactly `target`.
    pub fn is_bijection_to(&self, target: &IndexSet) -> bool {
        self.is_injective() && self.image() == *target
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_injective() {
            return Err(Error::invalid("cannot invert a non-injective index map"));
        }
        Ok(IndexMap {
            graph: self.graph.iter().map(|(k, v)| (*v, *k)).collect(),
        })
    }

    pub fn is_total_on(&self, source: &IndexSet) -> bool {
        self.source() == *source
    }

    /// Union of graphs with disjoint key sets; overlap is an error.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let mut graph = self.graph.clone();
        for (k, v) in other.iter() {
            if graph.insert(k, v).is_some() {
                return Err(Error::invalid(format!(
                    "index map graphs overlap at {k}"
                )));
            }
        }
        Ok(IndexMap { graph })
    }
}

/// Index shift used when deleting the i-th entry of a sequence: position j
/// of the shortened sequence came from position `csucc(j, i)` of the original.
pub fn csucc(j: usize, i: usize) -> usize {
    if j < i {
        j
    } else {
        j + 1
    }
}

/// Removes the i-th entry (1-based) of a sequence, preserving order.
pub fn seq_delete<E: Clone>(s: &[E], i: usize) -> Result<Vec<E>> {
    if i == 0 || i > s.len() {
        return Err(Error::invalid(format!(
            "position {i} out of range 1..={}",
            s.len()
        )));
    }
    let mut out = s.to_vec();
    out.remove(i - 1);
    Ok(out)
}

/// Deterministic fresh-index allocator: hands out blocks of consecutive
/// naturals above a high-water mark.
#[derive(Debug, Clone)]
pub struct IndexAlloc {
    next: Idx,
}

impl IndexAlloc {
    pub fn new(start: Idx) -> Self {
        IndexAlloc { next: start }
    }

    pub fn above(used: &IndexSet) -> Self {
        IndexAlloc {
            next: used.max_elem().map(|m| m + 1).unwrap_or(0),
        }
    }

    pub fn skip(&mut self, n: Idx) {
        self.next += n;
    }

    pub fn block(&mut self, n: usize) -> IndexSet {
        let start = self.next;
        self.next += n as Idx;
        (start..self.next).collect()
    }
}
