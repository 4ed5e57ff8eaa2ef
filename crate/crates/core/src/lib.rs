//! A DATR lexicon engine that runs in both directions.
//!
//! Forward, [`forward::eval_query`] maps `Node:<path>` to a value by
//! longest-prefix lookup and inheritance. Reverse, a theory is compiled
//! ([`backbone::compile`]) into context-free rules over nonterminal
//! quintuples and a value is chart-parsed back into the queries that
//! produce it ([`reverse::reverse_query`]).
//!
//! ```
//! use datr::{backbone, forward, reverse, syntax};
//!
//! let theory = syntax::parse_source("Cat: <> == cat <plur> == cat s.").unwrap();
//! let limits = forward::EvalLimits::default();
//! let q = "Cat:<plur>".parse().unwrap();
//! assert_eq!(forward::eval_query(&theory, &q, limits).unwrap().to_string(), "cat s");
//!
//! let rules = backbone::compile(&theory).unwrap();
//! let value = forward::Value::parse_words("cat");
//! let out = reverse::reverse_query(&rules, value.atoms(), limits);
//! assert_eq!(out.answers[0].to_string(), "Cat:<>+… !{<plur>}");
//! ```

pub mod backbone;
pub mod crosscheck;
pub mod forward;
pub mod matcher;
pub mod path;
pub mod reverse;
pub mod syntax;
pub mod term;

pub use backbone::{compile, Rule, RuleSet};
pub use forward::{eval_query, EvalError, EvalLimits, Query, Value};
pub use path::{Atom, AttrPath, ConstraintSet, NodeName};
pub use reverse::{reverse_query, ReverseAnswer, ReverseOutcome};
pub use syntax::{parse_source, ParseError, Theory};
