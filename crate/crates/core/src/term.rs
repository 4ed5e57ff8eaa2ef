//! Nonterminal quintuples `[N, P, C, N', P']` whose node and path slots may
//! hold variables.
//!
//! A path slot is a [`PathTerm`]: concrete atoms optionally followed by an
//! open tail variable. Tails stand for extensions that have not been fixed
//! yet; the constraints on what a tail may become are kept next to the term
//! (see [`crate::matcher::Bindings`]).

use std::fmt;

use serde::Serialize;

use crate::path::{Atom, AttrPath, ConstraintSet, NodeName};

/// Variable identity. Node variables and tail variables share one id space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Var(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeTerm {
    Named(NodeName),
    Var(Var),
}

impl NodeTerm {
    pub fn named(name: &str) -> Self {
        NodeTerm::Named(NodeName::new(name))
    }

    pub fn as_named(&self) -> Option<&NodeName> {
        match self {
            NodeTerm::Named(n) => Some(n),
            NodeTerm::Var(_) => None,
        }
    }
}

/// `atoms ^ tail`, where a missing tail means the path is closed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PathTerm {
    pub atoms: AttrPath,
    pub tail: Option<Var>,
}

/// A path suffix, open or closed.
pub type Suffix = PathTerm;

impl PathTerm {
    pub fn closed(atoms: AttrPath) -> Self {
        PathTerm { atoms, tail: None }
    }

    pub fn open(atoms: AttrPath, tail: Var) -> Self {
        PathTerm {
            atoms,
            tail: Some(tail),
        }
    }

    /// A bare path variable.
    pub fn var(v: Var) -> Self {
        PathTerm::open(AttrPath::empty(), v)
    }

    pub fn is_open(&self) -> bool {
        self.tail.is_some()
    }

    /// `prefix ^ self`.
    pub fn prepend(&self, prefix: &AttrPath) -> PathTerm {
        PathTerm {
            atoms: prefix.concat(&self.atoms),
            tail: self.tail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NonTerminal {
    pub node: NodeTerm,
    pub path: PathTerm,
    /// Path-extension constraint on whatever follows `path`.
    pub constraint: ConstraintSet,
    pub global_node: NodeTerm,
    pub global_path: PathTerm,
}

impl NonTerminal {
    /// Nonterminal with closed local path and fresh-looking global variables
    /// `N'`/`P'` given as `gn`/`gp`.
    pub fn new(node: &str, path: &str, constraint: &[&str], gn: Var, gp: Var) -> Self {
        NonTerminal {
            node: NodeTerm::named(node),
            path: PathTerm::closed(AttrPath::parse_words(path)),
            constraint: ConstraintSet::from_paths(
                constraint.iter().map(|c| AttrPath::parse_words(c)),
            ),
            global_node: NodeTerm::Var(gn),
            global_path: PathTerm::var(gp),
        }
    }

    /// Calls `f` on every variable, in slot order.
    pub fn for_each_var(&self, mut f: impl FnMut(Var)) {
        if let NodeTerm::Var(v) = self.node {
            f(v);
        }
        if let Some(v) = self.path.tail {
            f(v);
        }
        if let NodeTerm::Var(v) = self.global_node {
            f(v);
        }
        if let Some(v) = self.global_path.tail {
            f(v);
        }
    }

    pub fn map_vars(&self, f: &impl Fn(Var) -> Var) -> NonTerminal {
        NonTerminal {
            node: map_node(&self.node, f),
            path: map_path(&self.path, f),
            constraint: self.constraint.clone(),
            global_node: map_node(&self.global_node, f),
            global_path: map_path(&self.global_path, f),
        }
    }
}

pub(crate) fn map_node(t: &NodeTerm, f: &impl Fn(Var) -> Var) -> NodeTerm {
    match t {
        NodeTerm::Named(n) => NodeTerm::Named(n.clone()),
        NodeTerm::Var(v) => NodeTerm::Var(f(*v)),
    }
}

pub(crate) fn map_path(t: &PathTerm, f: &impl Fn(Var) -> Var) -> PathTerm {
    PathTerm {
        atoms: t.atoms.clone(),
        tail: t.tail.map(f),
    }
}

/// Right-hand-side symbol of a backbone rule or a pending category.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Symbol {
    Terminal(Atom),
    Nt(NonTerminal),
}

impl Symbol {
    pub fn map_vars(&self, f: &impl Fn(Var) -> Var) -> Symbol {
        match self {
            Symbol::Terminal(a) => Symbol::Terminal(a.clone()),
            Symbol::Nt(nt) => Symbol::Nt(nt.map_vars(f)),
        }
    }
}

// Generic notation: node vars print as `?N3`, open tails as `<a b>^T3`.

impl fmt::Display for NodeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeTerm::Named(n) => write!(f, "{n}"),
            NodeTerm::Var(v) => write!(f, "?N{}", v.0),
        }
    }
}

impl fmt::Display for PathTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tail {
            None => write!(f, "{}", self.atoms),
            Some(v) => write!(f, "{}^T{}", self.atoms, v.0),
        }
    }
}

impl fmt::Display for NonTerminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}, {}]",
            self.node, self.path, self.constraint, self.global_node, self.global_path
        )
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Terminal(a) => write!(f, "{a}"),
            Symbol::Nt(nt) => write!(f, "{nt}"),
        }
    }
}
