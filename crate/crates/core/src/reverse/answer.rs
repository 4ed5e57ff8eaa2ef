use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::chart::{Chart, Item};
use crate::forward::{all_paths, Query};
use crate::matcher::Bindings;
use crate::path::{Atom, AttrPath, ConstraintSet, NodeName};
use crate::term::NodeTerm;

/// A family of queries: `node:path`, plus (when `open`) every extension
/// of `path` that has no member of `forbidden` as a prefix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ReverseAnswer {
    pub node: NodeName,
    pub path: AttrPath,
    pub open: bool,
    pub forbidden: ConstraintSet,
}

impl ReverseAnswer {
    pub fn covers(&self, q: &Query) -> bool {
        if q.node != self.node {
            return false;
        }
        match q.path.strip_prefix(&self.path) {
            Some(rest) if self.open => self.forbidden.satisfied_by(&rest),
            Some(rest) => rest.is_empty(),
            None => false,
        }
    }

    /// True when every query `other` covers is also covered by `self`.
    pub fn subsumes(&self, other: &ReverseAnswer) -> bool {
        if self.node != other.node {
            return false;
        }
        if !self.open {
            return !other.open && self.path == other.path;
        }
        let Some(rest) = other.path.strip_prefix(&self.path) else {
            return false;
        };
        if !self.forbidden.satisfied_by(&rest) {
            return false;
        }
        if !other.open {
            return true;
        }
        // each forbidden path still reachable past `rest` must be blocked
        // at or before it in `other`
        self.forbidden
            .residual(&rest)
            .iter()
            .all(|f| other.forbidden.iter().any(|g| g.is_prefix_of(f)))
    }

    pub fn query(&self) -> Query {
        Query {
            node: self.node.clone(),
            path: self.path.clone(),
        }
    }
}

impl fmt::Display for ReverseAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.node, self.path)?;
        if self.open {
            f.write_str("+…")?;
            if !self.forbidden.is_empty() {
                write!(f, " !{}", self.forbidden)?;
            }
        }
        Ok(())
    }
}

/// Reads answers off the inactive items spanning the whole input whose
/// global environment can be the query itself.
pub fn extract_answers(chart: &Chart, input_len: usize) -> Vec<ReverseAnswer> {
    let mut found = BTreeSet::new();
    for &id in chart.inactive_starting_at(0) {
        let item = chart.get(id);
        if item.span().1 != input_len {
            continue;
        }
        let mut b = Bindings::new();
        let Item::Inactive(item) = item.import(&mut b) else {
            continue;
        };
        let cat = &item.cat;
        if !b.unify_node(&cat.global_node, &cat.node) || !b.unify_path(&cat.global_path, &cat.path)
        {
            continue;
        }
        let NodeTerm::Named(node) = b.walk_node(&cat.node) else {
            continue;
        };
        let path = b.resolve_path(&cat.path);
        let forbidden = path
            .tail
            .map(|t| b.obligations(t).minimized())
            .unwrap_or_default();
        found.insert(ReverseAnswer {
            node,
            path: path.atoms,
            open: path.tail.is_some(),
            forbidden,
        });
    }
    prune_subsumed(found.into_iter().collect())
}

fn prune_subsumed(answers: Vec<ReverseAnswer>) -> Vec<ReverseAnswer> {
    answers
        .iter()
        .enumerate()
        .filter(|(i, a)| {
            !answers
                .iter()
                .enumerate()
                .any(|(j, b)| j != *i && b.subsumes(a) && (!a.subsumes(b) || j < *i))
        })
        .map(|(_, a)| a.clone())
        .collect()
}

/// Concrete queries an answer stands for, with paths of at most `max_len`
/// atoms over `alphabet`.
pub fn expand_answer(answer: &ReverseAnswer, alphabet: &[Atom], max_len: usize) -> Vec<Query> {
    if answer.path.len() > max_len {
        return Vec::new();
    }
    if !answer.open {
        return vec![answer.query()];
    }
    all_paths(alphabet, max_len - answer.path.len())
        .into_iter()
        .filter(|e| answer.forbidden.satisfied_by(e))
        .map(|e| Query {
            node: answer.node.clone(),
            path: answer.path.concat(&e),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ans(node: &str, path: &str, open: bool, forbidden: &[&str]) -> ReverseAnswer {
        ReverseAnswer {
            node: NodeName::new(node),
            path: AttrPath::parse_words(path),
            open,
            forbidden: ConstraintSet::from_paths(
                forbidden.iter().map(|f| AttrPath::parse_words(f)),
            ),
        }
    }

    #[test]
    fn display() {
        assert_eq!(
            ans("Sheep", "orth sing", true, &["gen"]).to_string(),
            "Sheep:<orth sing>+… !{<gen>}"
        );
        assert_eq!(
            ans("Sheep", "root", true, &[]).to_string(),
            "Sheep:<root>+…"
        );
        assert_eq!(ans("Sheep", "root", false, &[]).to_string(), "Sheep:<root>");
    }

    #[test]
    fn coverage() {
        let a = ans("Sheep", "orth sing", true, &["gen"]);
        assert!(a.covers(&Query::new("Sheep", "orth sing")));
        assert!(a.covers(&Query::new("Sheep", "orth sing x")));
        assert!(!a.covers(&Query::new("Sheep", "orth sing gen")));
        assert!(!a.covers(&Query::new("Sheep", "orth")));
        assert!(!a.covers(&Query::new("Foot", "orth sing")));
        let c = ans("Sheep", "root", false, &[]);
        assert!(c.covers(&Query::new("Sheep", "root")));
        assert!(!c.covers(&Query::new("Sheep", "root x")));
    }

    #[test]
    fn subsumption() {
        let wide = ans("N", "a", true, &[]);
        let narrow = ans("N", "a b", true, &["c"]);
        assert!(wide.subsumes(&narrow));
        assert!(!narrow.subsumes(&wide));
        let blocked = ans("N", "a", true, &["b c"]);
        assert!(blocked.subsumes(&narrow));
        assert!(!blocked.subsumes(&ans("N", "a b", true, &[])));
        assert!(wide.subsumes(&ans("N", "a", false, &[])));
        assert!(!ans("N", "a", false, &[]).subsumes(&narrow));
        let pruned = prune_subsumed(vec![wide.clone(), narrow, wide.clone()]);
        assert_eq!(pruned, vec![wide]);
    }

    #[test]
    fn expansion() {
        let alphabet = [Atom::new("x"), Atom::new("y")];
        let a = ans("N", "x", true, &["y"]);
        let qs = expand_answer(&a, &alphabet, 2);
        let shown: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
        assert_eq!(shown, vec!["N:<x>", "N:<x x>"]);
        assert_eq!(
            expand_answer(&ans("N", "x", false, &[]), &alphabet, 2).len(),
            1
        );
        assert!(expand_answer(&ans("N", "x y z", true, &[]), &alphabet, 2).is_empty());
        for q in &qs {
            assert!(a.covers(q));
        }
    }
}
