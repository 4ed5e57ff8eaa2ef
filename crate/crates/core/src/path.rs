//! Atoms, node names, attribute paths and path-extension constraint sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

/// An indivisible DATR token. Whether an atom is an attribute or a terminal
/// depends on where it occurs, not on the atom itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(text: impl AsRef<str>) -> Self {
        Atom(Arc::from(text.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Name of a DATR node such as `Sheep`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeName(Arc<str>);

impl NodeName {
    pub fn new(text: impl AsRef<str>) -> Self {
        NodeName(Arc::from(text.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered sequence of attribute atoms, written `<a1 a2 ...>`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrPath(Vec<Atom>);

impl AttrPath {
    pub fn empty() -> Self {
        AttrPath(Vec::new())
    }

    /// Builds a path from whitespace-separated atom text, e.g. `"affix sing"`.
    pub fn parse_words(words: &str) -> Self {
        AttrPath(words.split_whitespace().map(Atom::new).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, atom: Atom) {
        self.0.push(atom);
    }

    pub fn is_prefix_of(&self, other: &AttrPath) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `Some(s)` with `prefix ^ s == self`.
    pub fn strip_prefix(&self, prefix: &AttrPath) -> Option<AttrPath> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|rest| AttrPath(rest.to_vec()))
    }

    pub fn concat(&self, suffix: &AttrPath) -> AttrPath {
        let mut atoms = Vec::with_capacity(self.len() + suffix.len());
        atoms.extend_from_slice(&self.0);
        atoms.extend_from_slice(&suffix.0);
        AttrPath(atoms)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Atom> {
        self.0.iter()
    }
}

impl From<Vec<Atom>> for AttrPath {
    fn from(atoms: Vec<Atom>) -> Self {
        AttrPath(atoms)
    }
}

impl FromIterator<Atom> for AttrPath {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        AttrPath(iter.into_iter().collect())
    }
}

impl fmt::Display for AttrPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, atom) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{atom}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for AttrPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for AttrPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// The suffix set `{ s | prefix ^ s ∈ set }`. Includes the empty path when
/// `prefix` itself is a member of `set`.
pub fn suffix_set<'a, I>(prefix: &AttrPath, set: I) -> BTreeSet<AttrPath>
where
    I: IntoIterator<Item = &'a AttrPath>,
{
    set.into_iter()
        .filter_map(|p| p.strip_prefix(prefix))
        .collect()
}

/// A finite set of non-empty path suffixes. An extension satisfies the set
/// when none of its members is a prefix of the extension.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintSet(BTreeSet<AttrPath>);

/// Outcome of checking a (possibly open-ended) extension against a
/// [`ConstraintSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satisfaction {
    /// No member is a prefix of the extension.
    Satisfied,
    /// The concrete part passes; members that the concrete part is a proper
    /// prefix of remain as obligations on the open tail.
    Residual(ConstraintSet),
    Violated,
}

impl ConstraintSet {
    pub fn new() -> Self {
        ConstraintSet(BTreeSet::new())
    }

    /// Builds a set from paths; empty paths are dropped.
    pub fn from_paths<I: IntoIterator<Item = AttrPath>>(paths: I) -> Self {
        ConstraintSet(paths.into_iter().filter(|p| !p.is_empty()).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AttrPath> {
        self.0.iter()
    }

    pub fn contains(&self, path: &AttrPath) -> bool {
        self.0.contains(path)
    }

    pub fn insert(&mut self, path: AttrPath) {
        if !path.is_empty() {
            self.0.insert(path);
        }
    }

    pub fn union(&self, other: &ConstraintSet) -> ConstraintSet {
        ConstraintSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn extend(&mut self, other: &ConstraintSet) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn is_subset(&self, other: &ConstraintSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `σ(prefix, self)` without the empty suffix: the obligations left on
    /// whatever follows `prefix`.
    pub fn residual(&self, prefix: &AttrPath) -> ConstraintSet {
        ConstraintSet::from_paths(suffix_set(prefix, &self.0))
    }

    /// True iff no member is a prefix of `path`.
    pub fn satisfied_by(&self, path: &AttrPath) -> bool {
        !self.0.iter().any(|c| c.is_prefix_of(path))
    }

    /// Checks `concrete ^ tail` where `open` says whether a tail follows.
    pub fn check(&self, concrete: &AttrPath, open: bool) -> Satisfaction {
        if !self.satisfied_by(concrete) {
            return Satisfaction::Violated;
        }
        if !open {
            return Satisfaction::Satisfied;
        }
        let residual = self.residual(concrete);
        if residual.is_empty() {
            Satisfaction::Satisfied
        } else {
            Satisfaction::Residual(residual)
        }
    }

    /// Drops members that already have a proper prefix in the set; the
    /// result forbids exactly the same extensions.
    pub fn minimized(&self) -> ConstraintSet {
        let kept = self
            .0
            .iter()
            .filter(|c| !self.0.iter().any(|d| d != *c && d.is_prefix_of(c)))
            .cloned()
            .collect();
        ConstraintSet(kept)
    }
}

impl FromIterator<AttrPath> for ConstraintSet {
    fn from_iter<I: IntoIterator<Item = AttrPath>>(iter: I) -> Self {
        ConstraintSet::from_paths(iter)
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ConstraintSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

/// `satisfies(S, C)` for a fully concrete `S`.
pub fn satisfies(path: &AttrPath, constraint: &ConstraintSet) -> bool {
    constraint.satisfied_by(path)
}
