use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::ParseError;
use crate::path::{Atom, AttrPath, NodeName};

/// Right-hand-side element of a sentence. The quoted (`Global*`) forms read
/// and rebind the global environment; the others inherit locally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Descriptor {
    EmptyValue,
    AtomValue(Atom),
    LocalNodePath(NodeName, AttrPath),
    LocalNode(NodeName),
    LocalPath(AttrPath),
    GlobalNodePath(NodeName, AttrPath),
    GlobalNode(NodeName),
    GlobalPath(AttrPath),
}

impl Descriptor {
    pub fn is_quoted(&self) -> bool {
        matches!(
            self,
            Descriptor::GlobalNodePath(..) | Descriptor::GlobalNode(_) | Descriptor::GlobalPath(_)
        )
    }

    /// Path written inside the descriptor, if any.
    pub fn path(&self) -> Option<&AttrPath> {
        match self {
            Descriptor::LocalNodePath(_, p)
            | Descriptor::LocalPath(p)
            | Descriptor::GlobalNodePath(_, p)
            | Descriptor::GlobalPath(p) => Some(p),
            _ => None,
        }
    }

    /// Node written inside the descriptor, if any.
    pub fn node(&self) -> Option<&NodeName> {
        match self {
            Descriptor::LocalNodePath(n, _)
            | Descriptor::LocalNode(n)
            | Descriptor::GlobalNodePath(n, _)
            | Descriptor::GlobalNode(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::EmptyValue => f.write_str("()"),
            Descriptor::AtomValue(a) => write!(f, "{a}"),
            Descriptor::LocalNodePath(n, p) => write!(f, "{n}:{p}"),
            Descriptor::LocalNode(n) => write!(f, "{n}"),
            Descriptor::LocalPath(p) => write!(f, "{p}"),
            Descriptor::GlobalNodePath(n, p) => write!(f, "\"{n}:{p}\""),
            Descriptor::GlobalNode(n) => write!(f, "\"{n}\""),
            Descriptor::GlobalPath(p) => write!(f, "\"{p}\""),
        }
    }
}

/// `node:lhs_path == rhs.`
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Sentence {
    pub node: NodeName,
    pub lhs_path: AttrPath,
    pub rhs: Vec<Descriptor>,
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} ==", self.node, self.lhs_path)?;
        for d in &self.rhs {
            write!(f, " {d}")?;
        }
        f.write_str(".")
    }
}

/// A parsed DATR theory. Sentences keep source order; `(node, lhs_path)`
/// pairs are unique.
#[derive(Clone, Debug)]
pub struct Theory {
    sentences: Vec<Sentence>,
    node_index: BTreeMap<NodeName, BTreeSet<AttrPath>>,
    by_lhs: HashMap<(NodeName, AttrPath), usize>,
}

impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        self.sentences == other.sentences
    }
}

impl Eq for Theory {}

impl Theory {
    pub fn new(sentences: Vec<Sentence>) -> Result<Self, ParseError> {
        let mut node_index: BTreeMap<NodeName, BTreeSet<AttrPath>> = BTreeMap::new();
        let mut by_lhs = HashMap::with_capacity(sentences.len());
        for (i, s) in sentences.iter().enumerate() {
            if by_lhs
                .insert((s.node.clone(), s.lhs_path.clone()), i)
                .is_some()
            {
                return Err(ParseError::DuplicateLhs {
                    node: s.node.to_string(),
                    path: s.lhs_path.to_string(),
                });
            }
            node_index
                .entry(s.node.clone())
                .or_default()
                .insert(s.lhs_path.clone());
        }
        Ok(Theory {
            sentences,
            node_index,
            by_lhs,
        })
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    /// Node → set of LHS paths defined at that node.
    pub fn node_index(&self) -> &BTreeMap<NodeName, BTreeSet<AttrPath>> {
        &self.node_index
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeName> {
        self.node_index.keys()
    }

    pub fn defines(&self, node: &NodeName) -> bool {
        self.node_index.contains_key(node)
    }

    pub fn paths_at(&self, node: &NodeName) -> Option<&BTreeSet<AttrPath>> {
        self.node_index.get(node)
    }

    pub fn sentence_index(&self, node: &NodeName, lhs_path: &AttrPath) -> Option<usize> {
        self.by_lhs.get(&(node.clone(), lhs_path.clone())).copied()
    }

    /// Atoms occurring outside paths, i.e. the terminals.
    pub fn terminals(&self) -> BTreeSet<Atom> {
        self.sentences
            .iter()
            .flat_map(|s| s.rhs.iter())
            .filter_map(|d| match d {
                Descriptor::AtomValue(a) => Some(a.clone()),
                _ => None,
            })
            .collect()
    }

    /// Atoms occurring in any LHS path or descriptor path.
    pub fn attribute_alphabet(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for s in &self.sentences {
            out.extend(s.lhs_path.iter().cloned());
            for d in &s.rhs {
                if let Some(p) = d.path() {
                    out.extend(p.iter().cloned());
                }
            }
        }
        out
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sentences {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
