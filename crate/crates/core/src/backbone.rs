//! The context-free backbone of a theory: one production per sentence over
//! nonterminal quintuples.
//!
//! Every rule uses the same three variables. `E` ([`EXT`]) is the extension
//! appended to the LHS path at use time and must satisfy the LHS constraint;
//! `P'` ([`GLOBAL_PATH`]) and `N'` ([`GLOBAL_NODE`]) are the global
//! environment. Right-hand paths that inherit the extension are open in `E`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::path::{Atom, AttrPath, ConstraintSet, NodeName};
use crate::syntax::{Descriptor, Sentence, Theory};
use crate::term::{NodeTerm, NonTerminal, PathTerm, Symbol, Var};

pub const EXT: Var = Var(0);
pub const GLOBAL_PATH: Var = Var(1);
pub const GLOBAL_NODE: Var = Var(2);
/// Number of variable ids a rule template uses.
pub const RULE_VARS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("node {0} is not defined in the theory")]
    UnknownNode(NodeName),
}

/// `C(P, N, θ)`: suffixes of the paths defined at `node` that extend `path`,
/// without the empty suffix.
pub fn path_constraint(
    path: &AttrPath,
    node: &NodeName,
    theory: &Theory,
) -> Result<ConstraintSet, CompileError> {
    let paths = theory
        .paths_at(node)
        .ok_or_else(|| CompileError::UnknownNode(node.clone()))?;
    Ok(ConstraintSet::from_paths(crate::path::suffix_set(
        path, paths,
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub id: usize,
    /// LHS with its closed sentence path; the extension `E` follows it.
    pub lhs: NonTerminal,
    pub rhs: Vec<Symbol>,
    /// Index of the source sentence in the theory.
    pub source: usize,
}

impl Rule {
    pub fn is_epsilon(&self) -> bool {
        self.rhs.is_empty()
    }

    /// Constraint the extension `E` must satisfy.
    pub fn extension_constraint(&self) -> &ConstraintSet {
        &self.lhs.constraint
    }

    /// Bracket rendering with the global variables shown as `N'`/`P'`, e.g.
    /// `[House, <>, {<root>}, N', P'] -> [Noun, <>, {<root>}, N', P']`.
    pub fn bracket_notation(&self) -> String {
        let mut out = bracket(&self.lhs);
        out.push_str(" ->");
        if self.rhs.is_empty() {
            out.push_str(" ε");
        }
        for s in &self.rhs {
            out.push(' ');
            match s {
                Symbol::Terminal(a) => out.push_str(a.as_str()),
                Symbol::Nt(nt) => out.push_str(&bracket(nt)),
            }
        }
        out
    }
}

fn bracket_node(t: &NodeTerm) -> String {
    match t {
        NodeTerm::Named(n) => n.to_string(),
        NodeTerm::Var(v) if *v == GLOBAL_NODE => "N'".into(),
        NodeTerm::Var(v) => format!("?N{}", v.0),
    }
}

fn bracket_path(t: &PathTerm) -> String {
    match t.tail {
        Some(v) if v == GLOBAL_PATH && t.atoms.is_empty() => "P'".into(),
        Some(v) if v == EXT || v == GLOBAL_PATH => t.atoms.to_string(),
        Some(v) => format!("{}^T{}", t.atoms, v.0),
        None => t.atoms.to_string(),
    }
}

fn bracket(nt: &NonTerminal) -> String {
    format!(
        "[{}, {}, {}, {}, {}]",
        bracket_node(&nt.node),
        bracket_path(&nt.path),
        nt.constraint,
        bracket_node(&nt.global_node),
        bracket_path(&nt.global_path)
    )
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bracket_notation())
    }
}

/// Compiled rules plus the head indices the chart parser looks rules up by.
#[derive(Clone, Debug)]
pub struct RuleSet {
    rules: Vec<Rule>,
    by_terminal: HashMap<Atom, Vec<usize>>,
    by_local_node: HashMap<NodeName, Vec<usize>>,
    var_headed: Vec<usize>,
    epsilon: Vec<usize>,
    terminals: BTreeSet<Atom>,
    alphabet: BTreeSet<Atom>,
}

impl RuleSet {
    fn new(rules: Vec<Rule>, terminals: BTreeSet<Atom>, alphabet: BTreeSet<Atom>) -> Self {
        let mut set = RuleSet {
            rules,
            by_terminal: HashMap::new(),
            by_local_node: HashMap::new(),
            var_headed: Vec::new(),
            epsilon: Vec::new(),
            terminals,
            alphabet,
        };
        for r in &set.rules {
            match r.rhs.first() {
                None => set.epsilon.push(r.id),
                Some(Symbol::Terminal(a)) => {
                    set.by_terminal.entry(a.clone()).or_default().push(r.id)
                }
                Some(Symbol::Nt(nt)) => match &nt.node {
                    NodeTerm::Named(n) => {
                        set.by_local_node.entry(n.clone()).or_default().push(r.id)
                    }
                    NodeTerm::Var(_) => set.var_headed.push(r.id),
                },
            }
        }
        set
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: usize) -> &Rule {
        &self.rules[id]
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn by_terminal(&self, atom: &Atom) -> &[usize] {
        self.by_terminal.get(atom).map_or(&[], Vec::as_slice)
    }

    pub fn by_local_node(&self, node: &NodeName) -> &[usize] {
        self.by_local_node.get(node).map_or(&[], Vec::as_slice)
    }

    pub fn var_headed(&self) -> &[usize] {
        &self.var_headed
    }

    pub fn epsilon_rules(&self) -> &[usize] {
        &self.epsilon
    }

    /// Atoms that occur outside paths in the source theory.
    pub fn terminals(&self) -> &BTreeSet<Atom> {
        &self.terminals
    }

    /// Atoms that occur inside paths in the source theory.
    pub fn alphabet(&self) -> &BTreeSet<Atom> {
        &self.alphabet
    }

    pub fn bracket_listing(&self) -> Vec<String> {
        self.rules.iter().map(Rule::bracket_notation).collect()
    }
}

fn rhs_image(s: &Sentence, d: &Descriptor, constraint: &ConstraintSet) -> Option<Symbol> {
    let local = |node: NodeName, path: &AttrPath| NonTerminal {
        node: NodeTerm::Named(node),
        path: PathTerm::open(path.clone(), EXT),
        constraint: constraint.clone(),
        global_node: NodeTerm::Var(GLOBAL_NODE),
        global_path: PathTerm::var(GLOBAL_PATH),
    };
    let nt = match d {
        Descriptor::EmptyValue => return None,
        Descriptor::AtomValue(a) => return Some(Symbol::Terminal(a.clone())),
        Descriptor::LocalNodePath(n, p) => local(n.clone(), p),
        Descriptor::LocalNode(n) => local(n.clone(), &s.lhs_path),
        Descriptor::LocalPath(p) => local(s.node.clone(), p),
        Descriptor::GlobalNodePath(n, p) => NonTerminal {
            node: NodeTerm::Named(n.clone()),
            path: PathTerm::open(p.clone(), EXT),
            constraint: constraint.clone(),
            global_node: NodeTerm::Named(n.clone()),
            global_path: PathTerm::open(p.clone(), EXT),
        },
        // the global path is used as is; the local extension does not reach it
        Descriptor::GlobalNode(n) => NonTerminal {
            node: NodeTerm::Named(n.clone()),
            path: PathTerm::var(GLOBAL_PATH),
            constraint: ConstraintSet::new(),
            global_node: NodeTerm::Named(n.clone()),
            global_path: PathTerm::var(GLOBAL_PATH),
        },
        Descriptor::GlobalPath(p) => NonTerminal {
            node: NodeTerm::Var(GLOBAL_NODE),
            path: PathTerm::open(p.clone(), EXT),
            constraint: constraint.clone(),
            global_node: NodeTerm::Var(GLOBAL_NODE),
            global_path: PathTerm::open(p.clone(), EXT),
        },
    };
    Some(Symbol::Nt(nt))
}

/// Maps every sentence to one backbone rule.
pub fn compile(theory: &Theory) -> Result<RuleSet, CompileError> {
    let mut rules = Vec::with_capacity(theory.sentences().len());
    for (i, s) in theory.sentences().iter().enumerate() {
        let constraint = path_constraint(&s.lhs_path, &s.node, theory)?;
        let rhs = s
            .rhs
            .iter()
            .filter_map(|d| rhs_image(s, d, &constraint))
            .collect();
        rules.push(Rule {
            id: i,
            lhs: NonTerminal {
                node: NodeTerm::Named(s.node.clone()),
                path: PathTerm::closed(s.lhs_path.clone()),
                constraint,
                global_node: NodeTerm::Var(GLOBAL_NODE),
                global_path: PathTerm::var(GLOBAL_PATH),
            },
            rhs,
            source: i,
        });
    }
    Ok(RuleSet::new(
        rules,
        theory.terminals(),
        theory.attribute_alphabet(),
    ))
}
