use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::theory::{Descriptor, Theory};
use crate::path::{AttrPath, NodeName};

/// Warning produced by [`validate_theory`]. None of these stop compilation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind")]
pub enum Diagnostic {
    /// A descriptor names a node with no sentences.
    UndefinedNode { node: NodeName },
    /// A descriptor points at a node/path that no LHS path at the target
    /// can ever match, whatever the extension.
    DanglingReference {
        from: String,
        node: NodeName,
        path: AttrPath,
    },
    /// Nodes that only ever refer to each other: forward evaluation through
    /// them cannot reach a value.
    NonTerminationRisk { nodes: Vec<NodeName> },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UndefinedNode { node } => write!(f, "warning: undefined node {node}"),
            Diagnostic::DanglingReference { from, node, path } => {
                write!(
                    f,
                    "warning: {from} refers to {node}:{path}, which no sentence can match"
                )
            }
            Diagnostic::NonTerminationRisk { nodes } => {
                let names: Vec<_> = nodes.iter().map(|n| n.to_string()).collect();
                write!(
                    f,
                    "warning: recursion without a base case through {}",
                    names.join(", ")
                )
            }
        }
    }
}

/// Static checks over a parsed theory. Never modifies it.
pub fn validate_theory(theory: &Theory) -> Vec<Diagnostic> {
    let mut out = BTreeSet::new();

    for s in theory.sentences() {
        for d in &s.rhs {
            let Some(target) = d.node() else { continue };
            if !theory.defines(target) {
                out.insert(Diagnostic::UndefinedNode {
                    node: target.clone(),
                });
            }
        }
    }

    for s in theory.sentences() {
        for d in &s.rhs {
            let (node, path) = match d {
                Descriptor::LocalNodePath(n, p) | Descriptor::GlobalNodePath(n, p) => (n, p),
                Descriptor::LocalNode(n) => (n, &s.lhs_path),
                Descriptor::LocalPath(p) => (&s.node, p),
                _ => continue,
            };
            let Some(paths) = theory.paths_at(node) else {
                continue;
            };
            let reachable = paths
                .iter()
                .any(|q| q.is_prefix_of(path) || path.is_prefix_of(q));
            if !reachable {
                out.insert(Diagnostic::DanglingReference {
                    from: format!("{}:{}", s.node, s.lhs_path),
                    node: node.clone(),
                    path: path.clone(),
                });
            }
        }
    }

    out.extend(base_free_cycles(theory));
    out.into_iter().collect()
}

fn references(node: &NodeName, d: &Descriptor) -> Option<NodeName> {
    match d {
        Descriptor::LocalPath(_) => Some(node.clone()),
        other => other.node().cloned(),
    }
}

fn base_free_cycles(theory: &Theory) -> Vec<Diagnostic> {
    let mut graph = DiGraph::<NodeName, ()>::new();
    let ids: BTreeMap<NodeName, _> = theory
        .nodes()
        .map(|n| (n.clone(), graph.add_node(n.clone())))
        .collect();
    for s in theory.sentences() {
        for d in &s.rhs {
            if let Some(target) = references(&s.node, d) {
                if let Some(&to) = ids.get(&target) {
                    graph.update_edge(ids[&s.node], to, ());
                }
            }
        }
    }

    let mut out = Vec::new();
    for component in tarjan_scc(&graph) {
        let members: BTreeSet<NodeName> = component.iter().map(|&i| graph[i].clone()).collect();
        let cyclic = component.len() > 1
            || component
                .first()
                .is_some_and(|&i| graph.contains_edge(i, i));
        if !cyclic {
            continue;
        }
        // a base is a sentence that does not refer back into the component
        let has_base = theory
            .sentences()
            .iter()
            .filter(|s| members.contains(&s.node))
            .any(|s| {
                s.rhs
                    .iter()
                    .all(|d| references(&s.node, d).is_none_or(|t| !members.contains(&t)))
            });
        if !has_base {
            out.push(Diagnostic::NonTerminationRisk {
                nodes: members.into_iter().collect(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;

    #[test]
    fn undefined_node_warning() {
        let th = parse_source("A:<> == Verb.\nA:<x> == y.").unwrap();
        let diags = validate_theory(&th);
        assert!(diags.contains(&Diagnostic::UndefinedNode {
            node: NodeName::new("Verb")
        }));
    }

    #[test]
    fn mutual_recursion_without_base() {
        let th = parse_source("A:<> == B.\nB:<> == A.").unwrap();
        assert_eq!(
            validate_theory(&th),
            vec![Diagnostic::NonTerminationRisk {
                nodes: vec![NodeName::new("A"), NodeName::new("B")]
            }]
        );
    }

    #[test]
    fn self_loop_with_base_is_fine() {
        let th = parse_source("N:<> == x.\nN:<a a> == <a>.").unwrap();
        assert!(validate_theory(&th).is_empty());
    }

    #[test]
    fn dangling_reference() {
        let th = parse_source("A:<x> == B:<q>.\nB:<r> == s.").unwrap();
        assert_eq!(
            validate_theory(&th),
            vec![Diagnostic::DanglingReference {
                from: "A:<x>".into(),
                node: NodeName::new("B"),
                path: AttrPath::parse_words("q"),
            }]
        );
    }
}
