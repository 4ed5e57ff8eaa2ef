//! Standard (forward) DATR evaluation: `Node:<path>` to a value.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::path::{Atom, AttrPath, NodeName};
use crate::syntax::{Descriptor, Sentence, Theory};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Query {
    pub node: NodeName,
    pub path: AttrPath,
}

impl Query {
    pub fn new(node: &str, path: &str) -> Self {
        Query {
            node: NodeName::new(node),
            path: AttrPath::parse_words(path),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.node, self.path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed query {0:?}: expected Node:<a1 a2 ...>")]
pub struct QuerySyntaxError(pub String);

impl FromStr for Query {
    type Err = QuerySyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || QuerySyntaxError(s.to_string());
        let (node, rest) = s.trim().split_once(':').ok_or_else(err)?;
        let node = node.trim();
        if !node.chars().next().is_some_and(char::is_uppercase)
            || !node
                .chars()
                .all(|c| c.is_alphanumeric() || "_-'+".contains(c))
        {
            return Err(err());
        }
        let inner = rest
            .trim()
            .strip_prefix('<')
            .and_then(|r| r.strip_suffix('>'))
            .ok_or_else(err)?;
        if inner.contains(['<', '>', '"', ':']) {
            return Err(err());
        }
        Ok(Query {
            node: NodeName::new(node),
            path: AttrPath::parse_words(inner),
        })
    }
}

/// A sequence of terminal atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Value(pub Vec<Atom>);

impl Value {
    pub fn parse_words(words: &str) -> Self {
        Value(words.split_whitespace().map(Atom::new).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<&str> = self.0.iter().map(Atom::as_str).collect();
        f.write_str(&words.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EvalLimits {
    /// Longest path (in atoms) any sub-query or chart item may carry.
    pub max_path_len: usize,
    /// Deepest descriptor-expansion recursion allowed.
    pub max_depth: usize,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits {
            max_path_len: 10,
            max_depth: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "status")]
pub enum EvalError {
    #[error("UNDEFINED: no sentence at {node} matches {path}")]
    Undefined { node: NodeName, path: AttrPath },
    #[error("LIMIT: {reason}")]
    LimitExceeded { reason: String },
}

/// Returns the sentence at `node` whose LHS path is the longest prefix of
/// `path`, plus the extension left over.
pub fn lookup_sentence<'t>(
    theory: &'t Theory,
    node: &NodeName,
    path: &AttrPath,
) -> Option<(&'t Sentence, AttrPath)> {
    let lhs = theory
        .paths_at(node)?
        .iter()
        .filter(|p| p.is_prefix_of(path))
        .max_by_key(|p| p.len())?;
    let idx = theory.sentence_index(node, lhs)?;
    let ext = path.strip_prefix(lhs)?;
    Some((&theory.sentences()[idx], ext))
}

/// One sub-query visited during evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForwardStep {
    pub depth: usize,
    pub node: NodeName,
    pub path: AttrPath,
    pub global_node: NodeName,
    pub global_path: AttrPath,
    /// The sentence used, as source text; `None` when nothing matched.
    pub sentence: Option<String>,
}

pub struct Evaluator<'t> {
    theory: &'t Theory,
    limits: EvalLimits,
    trace: Option<Vec<ForwardStep>>,
}

impl<'t> Evaluator<'t> {
    pub fn new(theory: &'t Theory, limits: EvalLimits) -> Self {
        Evaluator {
            theory,
            limits,
            trace: None,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn take_trace(&mut self) -> Vec<ForwardStep> {
        self.trace.take().unwrap_or_default()
    }

    pub fn eval(&mut self, query: &Query) -> Result<Value, EvalError> {
        let mut out = Vec::new();
        self.eval_at(
            &query.node,
            &query.path,
            &query.node,
            &query.path,
            0,
            &mut out,
        )?;
        Ok(Value(out))
    }

    fn eval_at(
        &mut self,
        node: &NodeName,
        path: &AttrPath,
        gnode: &NodeName,
        gpath: &AttrPath,
        depth: usize,
        out: &mut Vec<Atom>,
    ) -> Result<(), EvalError> {
        if depth > self.limits.max_depth {
            return Err(EvalError::LimitExceeded {
                reason: format!("recursion deeper than {}", self.limits.max_depth),
            });
        }
        if path.len() > self.limits.max_path_len || gpath.len() > self.limits.max_path_len {
            return Err(EvalError::LimitExceeded {
                reason: format!("path longer than {} atoms", self.limits.max_path_len),
            });
        }
        let found = lookup_sentence(self.theory, node, path);
        if let Some(trace) = self.trace.as_mut() {
            trace.push(ForwardStep {
                depth,
                node: node.clone(),
                path: path.clone(),
                global_node: gnode.clone(),
                global_path: gpath.clone(),
                sentence: found.as_ref().map(|(s, _)| s.to_string()),
            });
        }
        let Some((sentence, ext)) = found else {
            return Err(EvalError::Undefined {
                node: node.clone(),
                path: path.clone(),
            });
        };
        let next = depth + 1;
        for d in &sentence.rhs {
            match d {
                Descriptor::EmptyValue => {}
                Descriptor::AtomValue(a) => out.push(a.clone()),
                Descriptor::LocalPath(p) => {
                    self.eval_at(node, &p.concat(&ext), gnode, gpath, next, out)?
                }
                Descriptor::LocalNode(n) => {
                    self.eval_at(n, &sentence.lhs_path.concat(&ext), gnode, gpath, next, out)?
                }
                Descriptor::LocalNodePath(n, p) => {
                    self.eval_at(n, &p.concat(&ext), gnode, gpath, next, out)?
                }
                Descriptor::GlobalNodePath(n, p) => {
                    let p = p.concat(&ext);
                    self.eval_at(n, &p, n, &p, next, out)?
                }
                Descriptor::GlobalNode(n) => self.eval_at(n, gpath, n, gpath, next, out)?,
                Descriptor::GlobalPath(p) => {
                    let p = p.concat(&ext);
                    self.eval_at(gnode, &p, gnode, &p, next, out)?
                }
            }
        }
        Ok(())
    }
}

/// Evaluates `query` with the global environment set to the query itself.
pub fn eval_query(theory: &Theory, query: &Query, limits: EvalLimits) -> Result<Value, EvalError> {
    Evaluator::new(theory, limits).eval(query)
}

/// Every `(node, path)` over the theory's attribute alphabet with path
/// length at most `max_path_len`: nodes in name order, shorter paths first,
/// paths of equal length in lexicographic order.
pub fn enumerate_queries(theory: &Theory, max_path_len: usize) -> impl Iterator<Item = Query> + '_ {
    let alphabet: Vec<Atom> = theory.attribute_alphabet().into_iter().collect();
    let paths = all_paths(&alphabet, max_path_len);
    theory.nodes().flat_map(move |n| {
        paths.clone().into_iter().map(move |p| Query {
            node: n.clone(),
            path: p,
        })
    })
}

pub(crate) fn all_paths(alphabet: &[Atom], max_len: usize) -> Vec<AttrPath> {
    let mut out = vec![AttrPath::empty()];
    let mut layer = vec![AttrPath::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for p in &layer {
            for a in alphabet {
                let mut q = p.clone();
                q.push(a.clone());
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;

    const NOUNS: &str = include_str!("../tests/fixtures/nouns.dtr");

    fn theory() -> Theory {
        parse_source(NOUNS).unwrap()
    }

    fn eval(th: &Theory, q: &str) -> Result<Value, EvalError> {
        eval_query(th, &q.parse().unwrap(), EvalLimits::default())
    }

    #[test]
    fn lookup_longest_prefix() {
        let th = theory();
        let (s, ext) = lookup_sentence(
            &th,
            &NodeName::new("Sheep"),
            &AttrPath::parse_words("orth plur"),
        )
        .unwrap();
        assert_eq!(s.to_string(), "Sheep:<> == Noun.");
        assert_eq!(ext, AttrPath::parse_words("orth plur"));

        let (s, ext) = lookup_sentence(
            &th,
            &NodeName::new("Foot"),
            &AttrPath::parse_words("root plur sing"),
        )
        .unwrap();
        assert_eq!(s.to_string(), "Foot:<root plur> == feet.");
        assert_eq!(ext, AttrPath::parse_words("sing"));

        assert!(
            lookup_sentence(&th, &NodeName::new("Noun"), &AttrPath::parse_words("affix")).is_none()
        );
    }

    #[test]
    fn noun_values() {
        let th = theory();
        assert_eq!(eval(&th, "Sheep:<orth plur>").unwrap().to_string(), "sheep");
        assert_eq!(eval(&th, "Foot:<root plur>").unwrap().to_string(), "feet");
        assert_eq!(
            eval(&th, "House:<orth plur>").unwrap().to_string(),
            "house s"
        );
        assert_eq!(eval(&th, "Foot:<orth sing>").unwrap().to_string(), "foot");
        assert_eq!(
            eval(&th, "Sheep:<orth sing gen>").unwrap().to_string(),
            "sheep s"
        );
        assert!(matches!(
            eval(&th, "Sheep:<orth>"),
            Err(EvalError::Undefined { .. })
        ));
    }

    #[test]
    fn extension_is_discarded_at_leaves() {
        let th = theory();
        assert_eq!(
            eval(&th, "Sheep:<root x>").unwrap(),
            eval(&th, "Sheep:<root>").unwrap()
        );
    }

    #[test]
    fn cycles_hit_limits() {
        for src in ["N:<a> == <a>.", "N:<a> == <a a>."] {
            let th = parse_source(src).unwrap();
            assert!(matches!(
                eval(&th, "N:<a>"),
                Err(EvalError::LimitExceeded { .. })
            ));
        }
        let th = parse_source("N:<a a> == <a>.").unwrap();
        assert!(matches!(
            eval(&th, "N:<a a>"),
            Err(EvalError::Undefined { .. })
        ));
    }

    #[test]
    fn global_node_keeps_global_path() {
        let th = parse_source("A:<x> == \"B\".\nB:<x> == bx.\nB:<x y> == bxy.").unwrap();
        assert_eq!(eval(&th, "A:<x y>").unwrap().to_string(), "bxy");
        assert_eq!(eval(&th, "A:<x>").unwrap().to_string(), "bx");
    }

    #[test]
    fn trace_records_each_subquery() {
        let th = theory();
        let mut ev = Evaluator::new(&th, EvalLimits::default()).with_trace();
        ev.eval(&"House:<orth plur>".parse().unwrap()).unwrap();
        let trace = ev.take_trace();
        assert_eq!(trace[0].node.as_str(), "House");
        assert!(trace
            .iter()
            .any(|s| s.path == AttrPath::parse_words("root plur")
                && s.global_path == AttrPath::parse_words("root plur")));
    }

    #[test]
    fn query_text() {
        assert_eq!(
            "Sheep:<orth plur>".parse::<Query>().unwrap(),
            Query::new("Sheep", "orth plur")
        );
        assert_eq!(
            " House : <> ".parse::<Query>().unwrap(),
            Query::new("House", "")
        );
        for bad in [
            "sheep:<a>",
            "Sheep<a>",
            "Sheep:<a",
            "Sheep:a>",
            "Sheep:<\"a\">",
        ] {
            assert!(bad.parse::<Query>().is_err(), "{bad}");
        }
    }

    #[test]
    fn enumeration_counts() {
        let th = theory();
        assert_eq!(enumerate_queries(&th, 0).count(), 4);
        let one: Vec<_> = enumerate_queries(&th, 1).collect();
        assert_eq!(one.len(), 28);
        assert!(one.contains(&Query::new("Sheep", "plur")));
        let alphabet = th.attribute_alphabet();
        assert!(enumerate_queries(&th, 2).all(|q| q.path.iter().all(|a| alphabet.contains(a))));
        assert_eq!(enumerate_queries(&th, 4).count(), 6220);
    }
}
