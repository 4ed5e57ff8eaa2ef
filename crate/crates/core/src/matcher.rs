//! Matching of terminals, nonterminals and symbol sequences, on top of a
//! small unification engine for node variables and open path tails.
//!
//! An open tail `T` carries *obligations*: a [`ConstraintSet`] none of whose
//! members may be a prefix of whatever `T` is eventually bound to. Binding
//! `T := r ^ U` checks the obligations against `r` and moves the residue
//! `σ(r, ·)` onto `U`, so a constraint is never lost when a tail is refined.

use std::collections::HashMap;

use serde::Serialize;

use crate::path::{AttrPath, ConstraintSet, Satisfaction};
use crate::term::{NodeTerm, NonTerminal, PathTerm, Suffix, Symbol, Var};

#[derive(Clone, Debug, Default)]
pub struct Bindings {
    nodes: HashMap<Var, NodeTerm>,
    tails: HashMap<Var, PathTerm>,
    obligations: HashMap<Var, ConstraintSet>,
    next: u32,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bindings whose fresh variables start at `floor`.
    pub fn above(floor: u32) -> Self {
        Bindings {
            next: floor,
            ..Self::default()
        }
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var(self.next);
        self.next += 1;
        v
    }

    /// Reserves `count` variable ids and returns the offset to add to ids
    /// `0..count` of a term being renamed apart.
    pub fn reserve(&mut self, count: u32) -> u32 {
        let base = self.next;
        self.next += count;
        base
    }

    pub fn walk_node(&self, t: &NodeTerm) -> NodeTerm {
        let mut cur = t.clone();
        while let NodeTerm::Var(v) = cur {
            match self.nodes.get(&v) {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    pub fn resolve_path(&self, t: &PathTerm) -> PathTerm {
        let mut atoms = t.atoms.clone();
        let mut tail = t.tail;
        while let Some(v) = tail {
            match self.tails.get(&v) {
                Some(next) => {
                    atoms = atoms.concat(&next.atoms);
                    tail = next.tail;
                }
                None => break,
            }
        }
        PathTerm { atoms, tail }
    }

    /// Obligations currently attached to an unbound tail.
    pub fn obligations(&self, v: Var) -> ConstraintSet {
        self.obligations.get(&v).cloned().unwrap_or_default()
    }

    /// Applies the bindings to every slot. An open local path gets its
    /// tail's obligations as constraint; a closed one keeps its own.
    pub fn resolve_nt(&self, nt: &NonTerminal) -> NonTerminal {
        let path = self.resolve_path(&nt.path);
        let constraint = match path.tail {
            Some(t) => self.obligations(t),
            None => nt.constraint.clone(),
        };
        NonTerminal {
            node: self.walk_node(&nt.node),
            path,
            constraint,
            global_node: self.walk_node(&nt.global_node),
            global_path: self.resolve_path(&nt.global_path),
        }
    }

    pub fn resolve_symbol(&self, s: &Symbol) -> Symbol {
        match s {
            Symbol::Terminal(a) => Symbol::Terminal(a.clone()),
            Symbol::Nt(nt) => Symbol::Nt(self.resolve_nt(nt)),
        }
    }

    /// Requires `constraint` to hold for whatever `v` stands for.
    pub fn add_obligations(&mut self, v: Var, constraint: &ConstraintSet) -> bool {
        if constraint.is_empty() {
            return true;
        }
        let term = self.resolve_path(&PathTerm::var(v));
        self.constrain(&term, constraint)
    }

    fn constrain(&mut self, resolved: &PathTerm, constraint: &ConstraintSet) -> bool {
        match constraint.check(&resolved.atoms, resolved.is_open()) {
            Satisfaction::Violated => false,
            Satisfaction::Satisfied => true,
            Satisfaction::Residual(rest) => {
                let tail = resolved.tail.expect("residual only for open terms");
                self.obligations.entry(tail).or_default().extend(&rest);
                true
            }
        }
    }

    fn bind_tail(&mut self, v: Var, resolved: PathTerm) -> bool {
        if resolved.tail == Some(v) {
            // v = r ^ v has no finite solution unless r is empty
            return resolved.atoms.is_empty();
        }
        let owed = self.obligations.remove(&v).unwrap_or_default();
        self.tails.insert(v, resolved.clone());
        self.constrain(&resolved, &owed)
    }

    pub fn unify_node(&mut self, a: &NodeTerm, b: &NodeTerm) -> bool {
        let (a, b) = (self.walk_node(a), self.walk_node(b));
        match (a, b) {
            (NodeTerm::Named(x), NodeTerm::Named(y)) => x == y,
            (NodeTerm::Var(v), NodeTerm::Var(w)) if v == w => true,
            (NodeTerm::Var(v), other) | (other, NodeTerm::Var(v)) => {
                self.nodes.insert(v, other);
                true
            }
        }
    }

    pub fn unify_path(&mut self, a: &PathTerm, b: &PathTerm) -> bool {
        let (a, b) = (self.resolve_path(a), self.resolve_path(b));
        let (la, lb) = (a.atoms.len(), b.atoms.len());
        let k = la.min(lb);
        if a.atoms.atoms()[..k] != b.atoms.atoms()[..k] {
            return false;
        }
        let rest = |p: &PathTerm| PathTerm {
            atoms: AttrPath::from(p.atoms.atoms()[k..].to_vec()),
            tail: p.tail,
        };
        match la.cmp(&lb) {
            std::cmp::Ordering::Equal => match (a.tail, b.tail) {
                (None, None) => true,
                (Some(t), None) | (None, Some(t)) => {
                    self.bind_tail(t, PathTerm::closed(AttrPath::empty()))
                }
                (Some(t), Some(u)) => t == u || self.bind_tail(t, PathTerm::var(u)),
            },
            std::cmp::Ordering::Less => match a.tail {
                Some(t) => self.bind_tail(t, rest(&b)),
                None => false,
            },
            std::cmp::Ordering::Greater => match b.tail {
                Some(u) => self.bind_tail(u, rest(&a)),
                None => false,
            },
        }
    }
}

/// Which of the two nonterminal matching cases applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MatchCase {
    Terminal,
    /// The item's path extends the rule's path.
    ItemExtendsRule,
    /// The rule's path extends the item's path.
    RuleExtendsItem,
}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub case: MatchCase,
    pub suffix: Suffix,
    pub constraint: ConstraintSet,
    pub bindings: Bindings,
}

/// Terminals match iff equal, with an arbitrary (fresh open) suffix.
pub fn match_terminal(
    t1: &crate::path::Atom,
    t2: &crate::path::Atom,
    bindings: &Bindings,
) -> Option<MatchResult> {
    if t1 != t2 {
        return None;
    }
    let mut bindings = bindings.clone();
    let suffix = PathTerm::var(bindings.fresh());
    Some(MatchResult {
        case: MatchCase::Terminal,
        suffix,
        constraint: ConstraintSet::new(),
        bindings,
    })
}

/// Matches a rule-side nonterminal against an item-side one.
///
/// With `P1` the rule path and `P2` the item path: if `P2 = P1 ^ E` the
/// extension `E` must satisfy the rule constraint and the result is suffix
/// `E` with the item's constraint; if `P1 = P2 ^ E` the extension must
/// satisfy the item's constraint and the result is an empty suffix with
/// constraint `σ(E, C2)`. Open tails on either side are bound as needed.
/// Node and global slots are unified first.
pub fn match_nonterminal(
    rule: &NonTerminal,
    item: &NonTerminal,
    bindings: &Bindings,
) -> Option<MatchResult> {
    let mut b = bindings.clone();
    for nt in [rule, item] {
        if let Some(t) = nt.path.tail {
            if !b.add_obligations(t, &nt.constraint) {
                return None;
            }
        }
    }
    if !b.unify_node(&rule.node, &item.node)
        || !b.unify_node(&rule.global_node, &item.global_node)
        || !b.unify_path(&rule.global_path, &item.global_path)
    {
        return None;
    }

    let p1 = b.resolve_path(&rule.path);
    let p2 = b.resolve_path(&item.path);
    if let Some(ext) = p2.atoms.strip_prefix(&p1.atoms) {
        if p1.is_open() {
            if !b.unify_path(&p1, &p2) {
                return None;
            }
        } else {
            if !rule.constraint.satisfied_by(&ext) {
                return None;
            }
            if let Some(u) = p2.tail {
                if !b.add_obligations(u, &rule.constraint.residual(&ext)) {
                    return None;
                }
            }
        }
        let suffix = b.resolve_path(&PathTerm {
            atoms: ext,
            tail: p2.tail,
        });
        Some(MatchResult {
            case: MatchCase::ItemExtendsRule,
            suffix,
            constraint: item.constraint.clone(),
            bindings: b,
        })
    } else if let Some(ext) = p1.atoms.strip_prefix(&p2.atoms) {
        if p2.is_open() {
            if !b.unify_path(&p1, &p2) {
                return None;
            }
        } else if !item.constraint.satisfied_by(&ext) {
            return None;
        }
        let suffix = b.resolve_path(&PathTerm {
            atoms: AttrPath::empty(),
            tail: p1.tail,
        });
        Some(MatchResult {
            case: MatchCase::RuleExtendsItem,
            suffix,
            constraint: item.constraint.residual(&ext),
            bindings: b,
        })
    } else {
        None
    }
}

/// Unifies two suffixes; returns the common instance.
pub fn unify_suffix(s1: &Suffix, s2: &Suffix, bindings: &Bindings) -> Option<(Suffix, Bindings)> {
    let mut b = bindings.clone();
    if !b.unify_path(s1, s2) {
        return None;
    }
    let s = b.resolve_path(s1);
    Some((s, b))
}

/// Element-wise match with one shared suffix; the constraint is the union
/// of the element constraints.
pub fn match_sequence(
    rule_seq: &[Symbol],
    item_seq: &[Symbol],
    bindings: &Bindings,
) -> Option<MatchResult> {
    if rule_seq.len() != item_seq.len() {
        return None;
    }
    let mut b = bindings.clone();
    let mut shared: Option<Suffix> = None;
    let mut constraint = ConstraintSet::new();
    for (r, i) in rule_seq.iter().zip(item_seq) {
        let m = match (r, i) {
            (Symbol::Terminal(t1), Symbol::Terminal(t2)) => match_terminal(t1, t2, &b)?,
            (Symbol::Nt(n1), Symbol::Nt(n2)) => match_nonterminal(n1, n2, &b)?,
            _ => return None,
        };
        b = m.bindings;
        shared = Some(match shared {
            None => m.suffix,
            Some(s) => {
                let (s, nb) = unify_suffix(&s, &m.suffix, &b)?;
                b = nb;
                s
            }
        });
        constraint.extend(&m.constraint);
    }
    let suffix = match shared {
        Some(s) => b.resolve_path(&s),
        None => PathTerm::closed(AttrPath::empty()),
    };
    let case = match rule_seq.first() {
        Some(Symbol::Nt(_)) | None => MatchCase::ItemExtendsRule,
        Some(Symbol::Terminal(_)) => MatchCase::Terminal,
    };
    Some(MatchResult {
        case,
        suffix,
        constraint,
        bindings: b,
    })
}
