//! Reverse queries: from a value back to the `Node:<path>` queries that
//! evaluate to it, by bottom-up chart parsing of the value against the
//! compiled backbone.
//!
//! Items are kept resolved and in canonical form (variables renumbered by
//! first occurrence), so the chart never holds two alpha-variants of one
//! item. Whenever items are combined they are first renamed apart.

mod answer;
mod chart;

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

pub use answer::{expand_answer, extract_answers, ReverseAnswer};
pub use chart::{ActiveItem, Chart, InactiveItem, Item, ItemId, Obligations};

use crate::backbone::{Rule, RuleSet, EXT, RULE_VARS};
use crate::forward::EvalLimits;
use crate::matcher::{match_nonterminal, Bindings};
use crate::path::{Atom, ConstraintSet};
use crate::term::{NodeTerm, NonTerminal, PathTerm, Suffix, Symbol, Var};

/// Renames a rule apart into `b`; returns `(lhs, rhs, extension)`.
fn import_rule(rule: &Rule, b: &mut Bindings) -> (NonTerminal, Vec<Symbol>, Suffix) {
    let base = b.reserve(RULE_VARS);
    let shift = |v: Var| Var(v.0 + base);
    let ext = shift(EXT);
    let ok = b.add_obligations(ext, &rule.lhs.constraint);
    debug_assert!(ok);
    (
        rule.lhs.map_vars(&shift),
        rule.rhs.iter().map(|s| s.map_vars(&shift)).collect(),
        PathTerm::var(ext),
    )
}

/// What happened to one candidate item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Added,
    Duplicate,
    Suppressed,
}

/// One procedure firing that produced a candidate item.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub proc: &'static str,
    pub span: (usize, usize),
    pub rule: Option<usize>,
    /// Existing chart item consumed, if any.
    pub consumed: Option<ItemId>,
    pub item: String,
    pub suffix: String,
    pub constraint: ConstraintSet,
    pub outcome: Outcome,
    pub chart_size: usize,
}

struct Origin {
    proc: &'static str,
    rule: Option<usize>,
    consumed: Option<ItemId>,
}

enum Input {
    Terminal(Atom),
    Item(ItemId),
}

pub struct ChartParser<'r> {
    rules: &'r RuleSet,
    input: Vec<Atom>,
    limits: EvalLimits,
    chart: Chart,
    agenda: VecDeque<ItemId>,
    suppressed: HashSet<Item>,
    trace: Option<Vec<TraceRecord>>,
}

impl<'r> ChartParser<'r> {
    pub fn new(rules: &'r RuleSet, input: &[Atom], limits: EvalLimits) -> Self {
        ChartParser {
            rules,
            input: input.to_vec(),
            limits,
            chart: Chart::default(),
            agenda: VecDeque::new(),
            suppressed: HashSet::new(),
            trace: None,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn take_trace(&mut self) -> Vec<TraceRecord> {
        self.trace.take().unwrap_or_default()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Distinct items dropped for exceeding the path bound.
    pub fn suppressed(&self) -> usize {
        self.suppressed.len()
    }

    /// Parses the whole input left to right, starting at `vertex`.
    pub fn parse(&mut self, vertex: usize) {
        let mut v = vertex;
        loop {
            self.add_epsilon(v);
            self.saturate();
            let Some(a) = self.input.get(v).cloned() else {
                break;
            };
            self.reduce(v, Input::Terminal(a.clone()), v + 1);
            self.complete(v, Input::Terminal(a), v + 1);
            self.saturate();
            v += 1;
        }
    }

    fn saturate(&mut self) {
        while let Some(id) = self.agenda.pop_front() {
            match self.chart.get(id) {
                Item::Inactive(i) => {
                    let (s, e) = (i.start, i.end);
                    self.reduce(s, Input::Item(id), e);
                    self.complete(s, Input::Item(id), e);
                }
                Item::Active(_) => self.advance(id),
            }
        }
    }

    /// Adds every ε-rule as an empty-span item at `v`.
    fn add_epsilon(&mut self, v: usize) {
        for &rid in self.rules.epsilon_rules() {
            let mut b = Bindings::new();
            let (lhs, _, ext) = import_rule(self.rules.rule(rid), &mut b);
            let origin = Origin {
                proc: "add-epsilon",
                rule: Some(rid),
                consumed: None,
            };
            self.add_item(&b, v, v, &lhs, &[], &ext, &ConstraintSet::new(), origin);
        }
    }

    /// Starts new rules whose first RHS symbol matches the input.
    fn reduce(&mut self, v1: usize, input: Input, v2: usize) {
        match input {
            Input::Terminal(a) => {
                for &rid in self.rules.by_terminal(&a) {
                    let mut b = Bindings::new();
                    let (lhs, rhs, ext) = import_rule(self.rules.rule(rid), &mut b);
                    let origin = Origin {
                        proc: "reduce",
                        rule: Some(rid),
                        consumed: None,
                    };
                    self.add_item(
                        &b,
                        v1,
                        v2,
                        &lhs,
                        &rhs[1..],
                        &ext,
                        &ConstraintSet::new(),
                        origin,
                    );
                }
            }
            Input::Item(id) => {
                let Item::Inactive(item) = self.chart.get(id).clone() else {
                    return;
                };
                // LHS nodes are always named, so the item's node is too
                let mut candidates: Vec<usize> = self.rules.var_headed().to_vec();
                if let NodeTerm::Named(n) = &item.cat.node {
                    candidates.extend_from_slice(self.rules.by_local_node(n));
                }
                for rid in candidates {
                    let rule = self.rules.rule(rid);
                    let mut b = Bindings::new();
                    let Item::Inactive(mine) = Item::Inactive(item.clone()).import(&mut b) else {
                        unreachable!()
                    };
                    let (lhs, rhs, ext) = import_rule(rule, &mut b);
                    let Some(Symbol::Nt(head)) = rhs.first() else {
                        continue;
                    };
                    let Some(m) = match_nonterminal(head, &mine.cat, &b) else {
                        continue;
                    };
                    let origin = Origin {
                        proc: "reduce",
                        rule: Some(rid),
                        consumed: Some(id),
                    };
                    self.add_item(
                        &m.bindings,
                        v1,
                        v2,
                        &lhs,
                        &rhs[1..],
                        &ext,
                        &m.constraint,
                        origin,
                    );
                }
            }
        }
    }

    /// Extends active items ending at `v1` whose next symbol matches.
    fn complete(&mut self, v1: usize, input: Input, v2: usize) {
        let actives = self.chart.active_ending_at(v1).to_vec();
        for aid in actives {
            self.combine(aid, &input, v2, "complete");
        }
    }

    /// A new active item meets the input and inactive items already at its
    /// end vertex. Without this, items built by later ε-steps at the same
    /// vertex would never be combined.
    fn advance(&mut self, aid: ItemId) {
        let Item::Active(active) = self.chart.get(aid) else {
            return;
        };
        let end = active.end;
        match active.pending.first() {
            Some(Symbol::Terminal(t)) => {
                if self.input.get(end) == Some(t) {
                    let t = t.clone();
                    self.combine(aid, &Input::Terminal(t), end + 1, "advance");
                }
            }
            Some(Symbol::Nt(nt)) => {
                let ids = match &nt.node {
                    NodeTerm::Named(n) => self.chart.inactive_starting_at_node(end, n).to_vec(),
                    NodeTerm::Var(_) => self.chart.inactive_starting_at(end).to_vec(),
                };
                for id in ids {
                    let to = self.chart.get(id).span().1;
                    self.combine(aid, &Input::Item(id), to, "advance");
                }
            }
            None => {}
        }
    }

    fn combine(&mut self, aid: ItemId, input: &Input, v2: usize, proc: &'static str) {
        let mut b = Bindings::new();
        let Item::Active(active) = self.chart.get(aid).import(&mut b) else {
            return;
        };
        let Some(next) = active.pending.first() else {
            return;
        };
        let (b, constraint, consumed) = match (next, input) {
            (Symbol::Terminal(t), Input::Terminal(a)) if t == a => (b, ConstraintSet::new(), None),
            (Symbol::Nt(nt), Input::Item(id)) => {
                let Item::Inactive(item) = self.chart.get(*id).import(&mut b) else {
                    return;
                };
                let Some(m) = match_nonterminal(nt, &item.cat, &b) else {
                    return;
                };
                (m.bindings, m.constraint, Some(*id))
            }
            _ => return,
        };
        let origin = Origin {
            proc,
            rule: None,
            consumed,
        };
        self.add_item(
            &b,
            active.start,
            v2,
            &active.lhs,
            &active.pending[1..],
            &active.suffix,
            &constraint,
            origin,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn add_item(
        &mut self,
        b: &Bindings,
        start: usize,
        end: usize,
        lhs: &NonTerminal,
        pending: &[Symbol],
        suffix: &Suffix,
        constraint: &ConstraintSet,
        origin: Origin,
    ) {
        let max = self.limits.max_path_len;
        let item = if pending.is_empty() {
            let cat = NonTerminal {
                path: suffix.prepend(&lhs.path.atoms),
                ..lhs.clone()
            };
            Item::Inactive(chart::canonical_inactive(b, start, end, &cat))
        } else {
            Item::Active(chart::canonical_active(b, start, end, lhs, pending, suffix))
        };
        let too_long = match &item {
            Item::Inactive(i) => {
                i.cat.path.atoms.len() > max || i.cat.global_path.atoms.len() > max
            }
            Item::Active(a) => {
                a.lhs.path.atoms.len() + a.suffix.atoms.len() > max
                    || a.lhs.global_path.atoms.len() > max
            }
        };
        let outcome = if too_long {
            self.suppressed.insert(item.clone());
            Outcome::Suppressed
        } else if let Some(id) = self.chart.insert(item.clone()) {
            self.agenda.push_back(id);
            Outcome::Added
        } else {
            Outcome::Duplicate
        };
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceRecord {
                proc: origin.proc,
                span: (start, end),
                rule: origin.rule,
                consumed: origin.consumed,
                item: item.to_string(),
                suffix: b.resolve_path(suffix).to_string(),
                constraint: constraint.clone(),
                outcome,
                chart_size: self.chart.len(),
            });
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReverseOutcome {
    pub answers: Vec<ReverseAnswer>,
    /// Distinct items dropped for exceeding the path bound; non-zero means
    /// the answer set may be incomplete.
    pub suppressed: usize,
    /// Value atoms that no sentence can produce.
    pub unknown_atoms: Vec<Atom>,
    pub inactive_items: usize,
    pub active_items: usize,
}

/// Every query (as a possibly open answer) whose value is `value`.
pub fn reverse_query(rules: &RuleSet, value: &[Atom], limits: EvalLimits) -> ReverseOutcome {
    reverse_query_traced(rules, value, limits, false).outcome
}

/// A reverse query together with its procedure trace and final chart.
pub struct ReverseRun {
    pub outcome: ReverseOutcome,
    pub trace: Vec<TraceRecord>,
    /// Every chart item in canonical notation, in insertion order.
    pub chart: Vec<String>,
}

pub fn reverse_query_traced(
    rules: &RuleSet,
    value: &[Atom],
    limits: EvalLimits,
    trace: bool,
) -> ReverseRun {
    let mut unknown_atoms: Vec<Atom> = value
        .iter()
        .filter(|a| !rules.terminals().contains(*a))
        .cloned()
        .collect();
    unknown_atoms.sort();
    unknown_atoms.dedup();
    if !unknown_atoms.is_empty() {
        let outcome = ReverseOutcome {
            answers: Vec::new(),
            suppressed: 0,
            unknown_atoms,
            inactive_items: 0,
            active_items: 0,
        };
        return ReverseRun {
            outcome,
            trace: Vec::new(),
            chart: Vec::new(),
        };
    }
    let mut parser = ChartParser::new(rules, value, limits);
    if trace {
        parser = parser.with_trace();
    }
    parser.parse(0);
    let answers = extract_answers(parser.chart(), value.len());
    let inactive_items = parser.chart().inactive().count();
    let outcome = ReverseOutcome {
        answers,
        suppressed: parser.suppressed(),
        unknown_atoms,
        inactive_items,
        active_items: parser.chart().len() - inactive_items,
    };
    ReverseRun {
        outcome,
        trace: parser.take_trace(),
        chart: parser.chart().items().iter().map(Item::to_string).collect(),
    }
}
