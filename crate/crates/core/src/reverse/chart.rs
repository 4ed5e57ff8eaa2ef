use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::matcher::Bindings;
use crate::path::{ConstraintSet, NodeName};
use crate::term::{NodeTerm, NonTerminal, PathTerm, Suffix, Symbol, Var};

/// Obligations on the open tails of one item, keyed by the item's own
/// (canonical) variables.
pub type Obligations = BTreeMap<Var, ConstraintSet>;

/// A completed analysis of `input[start..end]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InactiveItem {
    pub start: usize,
    pub end: usize,
    pub cat: NonTerminal,
    pub obligations: Obligations,
}

/// A partial analysis: `lhs` spans `start..end` plus whatever `pending`
/// covers from `end` on. `lhs.path ^ suffix` is the final LHS path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ActiveItem {
    pub start: usize,
    pub end: usize,
    pub lhs: NonTerminal,
    pub pending: Vec<Symbol>,
    pub suffix: Suffix,
    pub obligations: Obligations,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Item {
    Inactive(InactiveItem),
    Active(ActiveItem),
}

pub type ItemId = usize;

impl Item {
    pub fn span(&self) -> (usize, usize) {
        match self {
            Item::Inactive(i) => (i.start, i.end),
            Item::Active(a) => (a.start, a.end),
        }
    }

    pub fn as_inactive(&self) -> Option<&InactiveItem> {
        match self {
            Item::Inactive(i) => Some(i),
            Item::Active(_) => None,
        }
    }

    pub fn as_active(&self) -> Option<&ActiveItem> {
        match self {
            Item::Active(a) => Some(a),
            Item::Inactive(_) => None,
        }
    }

    fn obligations(&self) -> &Obligations {
        match self {
            Item::Inactive(i) => &i.obligations,
            Item::Active(a) => &a.obligations,
        }
    }

    /// Number of variable ids the item uses (they are `0..n`).
    pub fn var_count(&self) -> u32 {
        let mut max = 0;
        let mut see = |v: Var| max = max.max(v.0 + 1);
        match self {
            Item::Inactive(i) => i.cat.for_each_var(&mut see),
            Item::Active(a) => {
                a.lhs.for_each_var(&mut see);
                if let Some(v) = a.suffix.tail {
                    see(v);
                }
                for s in &a.pending {
                    if let Symbol::Nt(nt) = s {
                        nt.for_each_var(&mut see);
                    }
                }
            }
        }
        max
    }

    /// Renames the item apart into `b` and registers its obligations there.
    pub fn import(&self, b: &mut Bindings) -> Item {
        let base = b.reserve(self.var_count());
        let shift = |v: Var| Var(v.0 + base);
        for (v, c) in self.obligations() {
            let ok = b.add_obligations(shift(*v), c);
            debug_assert!(ok, "fresh variables accept any obligations");
        }
        match self {
            Item::Inactive(i) => Item::Inactive(InactiveItem {
                start: i.start,
                end: i.end,
                cat: i.cat.map_vars(&shift),
                obligations: Obligations::new(),
            }),
            Item::Active(a) => Item::Active(ActiveItem {
                start: a.start,
                end: a.end,
                lhs: a.lhs.map_vars(&shift),
                pending: a.pending.iter().map(|s| s.map_vars(&shift)).collect(),
                suffix: crate::term::map_path(&a.suffix, &shift),
                obligations: Obligations::new(),
            }),
        }
    }
}

/// Renames variables in order of first occurrence so alpha-equivalent
/// items compare equal.
struct Canon<'b> {
    bindings: &'b Bindings,
    map: HashMap<Var, Var>,
    obligations: Obligations,
}

impl<'b> Canon<'b> {
    fn new(bindings: &'b Bindings) -> Self {
        Canon {
            bindings,
            map: HashMap::new(),
            obligations: Obligations::new(),
        }
    }

    fn var(&mut self, v: Var) -> Var {
        if let Some(&w) = self.map.get(&v) {
            return w;
        }
        let w = Var(self.map.len() as u32);
        self.map.insert(v, w);
        let owed = self.bindings.obligations(v).minimized();
        if !owed.is_empty() {
            self.obligations.insert(w, owed);
        }
        w
    }

    fn node(&mut self, t: &NodeTerm) -> NodeTerm {
        match self.bindings.walk_node(t) {
            NodeTerm::Var(v) => NodeTerm::Var(self.var(v)),
            named => named,
        }
    }

    fn path(&mut self, t: &PathTerm) -> PathTerm {
        let r = self.bindings.resolve_path(t);
        PathTerm {
            atoms: r.atoms,
            tail: r.tail.map(|v| self.var(v)),
        }
    }

    fn constraint_of(&self, t: &PathTerm) -> ConstraintSet {
        t.tail
            .and_then(|v| self.obligations.get(&v).cloned())
            .unwrap_or_default()
    }

    fn nt(&mut self, nt: &NonTerminal) -> NonTerminal {
        let node = self.node(&nt.node);
        let path = self.path(&nt.path);
        let global_node = self.node(&nt.global_node);
        let global_path = self.path(&nt.global_path);
        let constraint = if path.is_open() {
            self.constraint_of(&path)
        } else {
            nt.constraint.clone()
        };
        NonTerminal {
            node,
            path,
            constraint,
            global_node,
            global_path,
        }
    }

    fn symbol(&mut self, s: &Symbol) -> Symbol {
        match s {
            Symbol::Terminal(a) => Symbol::Terminal(a.clone()),
            Symbol::Nt(nt) => Symbol::Nt(self.nt(nt)),
        }
    }
}

pub(crate) fn canonical_inactive(
    b: &Bindings,
    start: usize,
    end: usize,
    cat: &NonTerminal,
) -> InactiveItem {
    let mut canon = Canon::new(b);
    let cat = canon.nt(cat);
    InactiveItem {
        start,
        end,
        cat,
        obligations: canon.obligations,
    }
}

pub(crate) fn canonical_active(
    b: &Bindings,
    start: usize,
    end: usize,
    lhs: &NonTerminal,
    pending: &[Symbol],
    suffix: &Suffix,
) -> ActiveItem {
    let mut canon = Canon::new(b);
    let mut lhs = canon.nt(lhs);
    let suffix = canon.path(suffix);
    let pending = pending.iter().map(|s| canon.symbol(s)).collect();
    lhs.constraint = canon.constraint_of(&suffix);
    ActiveItem {
        start,
        end,
        lhs,
        pending,
        suffix,
        obligations: canon.obligations,
    }
}

/// Monotonic item store. Items are never removed or changed once added.
#[derive(Debug, Default)]
pub struct Chart {
    items: Vec<Item>,
    index: HashMap<Item, ItemId>,
    inactive_by_start: HashMap<usize, Vec<ItemId>>,
    inactive_by_start_node: HashMap<(usize, NodeName), Vec<ItemId>>,
    active_by_end: HashMap<usize, Vec<ItemId>>,
}

impl Chart {
    /// Adds `item` unless an identical one exists; returns the new id.
    pub fn insert(&mut self, item: Item) -> Option<ItemId> {
        if self.index.contains_key(&item) {
            return None;
        }
        let id = self.items.len();
        match &item {
            Item::Inactive(i) => {
                self.inactive_by_start.entry(i.start).or_default().push(id);
                if let NodeTerm::Named(n) = &i.cat.node {
                    self.inactive_by_start_node
                        .entry((i.start, n.clone()))
                        .or_default()
                        .push(id);
                }
            }
            Item::Active(a) => self.active_by_end.entry(a.end).or_default().push(id),
        }
        self.index.insert(item.clone(), id);
        self.items.push(item);
        Some(id)
    }

    pub fn contains(&self, item: &Item) -> bool {
        self.index.contains_key(item)
    }

    pub fn get(&self, id: ItemId) -> &Item {
        &self.items[id]
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn inactive(&self) -> impl Iterator<Item = &InactiveItem> {
        self.items.iter().filter_map(Item::as_inactive)
    }

    pub fn inactive_starting_at(&self, vertex: usize) -> &[ItemId] {
        self.inactive_by_start
            .get(&vertex)
            .map_or(&[], Vec::as_slice)
    }

    pub fn inactive_starting_at_node(&self, vertex: usize, node: &NodeName) -> &[ItemId] {
        self.inactive_by_start_node
            .get(&(vertex, node.clone()))
            .map_or(&[], Vec::as_slice)
    }

    pub fn active_ending_at(&self, vertex: usize) -> &[ItemId] {
        self.active_by_end.get(&vertex).map_or(&[], Vec::as_slice)
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Inactive(i) => write!(f, "({}, {}, {})", i.start, i.end, i.cat),
            Item::Active(a) => {
                write!(f, "({}, {}, {}, ", a.start, a.end, a.lhs)?;
                for (k, s) in a.pending.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ", {})", a.suffix)
            }
        }
    }
}
