//! Round-trip check of reverse answers against forward evaluation over all
//! queries up to a path length.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::backbone::RuleSet;
use crate::forward::{enumerate_queries, EvalError, EvalLimits, Evaluator, Query, Value};
use crate::path::Atom;
use crate::reverse::{expand_answer, reverse_query, ReverseAnswer};
use crate::syntax::Theory;

/// An answer that stands for a query whose value differs.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub value: Value,
    pub answer: ReverseAnswer,
    pub query: Query,
    /// What forward evaluation gave instead.
    pub got: String,
}

/// A defined query not covered by any answer for its value.
#[derive(Clone, Debug, Serialize)]
pub struct Miss {
    pub query: Query,
    pub value: Value,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CrossCheckReport {
    pub max_path_len: usize,
    pub enumerated: usize,
    pub defined: usize,
    pub undefined: usize,
    /// Queries that hit an evaluation limit; they are left out of both checks.
    pub excluded: usize,
    pub distinct_values: usize,
    pub violations: Vec<Violation>,
    pub misses: Vec<Miss>,
    /// Sum of suppressed chart items over all reverse queries.
    pub suppressed: usize,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.misses.is_empty()
    }
}

pub fn run_crosscheck(
    theory: &Theory,
    rules: &RuleSet,
    max_path_len: usize,
    limits: EvalLimits,
) -> CrossCheckReport {
    let mut ev = Evaluator::new(theory, limits);
    let mut report = CrossCheckReport {
        max_path_len,
        ..Default::default()
    };
    let mut results: HashMap<Query, Result<Value, EvalError>> = HashMap::new();
    let mut by_value: BTreeMap<Value, Vec<Query>> = BTreeMap::new();
    for q in enumerate_queries(theory, max_path_len) {
        report.enumerated += 1;
        let r = ev.eval(&q);
        match &r {
            Ok(v) => {
                report.defined += 1;
                by_value.entry(v.clone()).or_default().push(q.clone());
            }
            Err(EvalError::Undefined { .. }) => report.undefined += 1,
            Err(EvalError::LimitExceeded { .. }) => report.excluded += 1,
        }
        results.insert(q, r);
    }
    report.distinct_values = by_value.len();

    let alphabet: Vec<Atom> = theory.attribute_alphabet().into_iter().collect();
    for (value, queries) in &by_value {
        let out = reverse_query(rules, value.atoms(), limits);
        report.suppressed += out.suppressed;
        for answer in &out.answers {
            for q in expand_answer(answer, &alphabet, max_path_len) {
                let r = match results.get(&q) {
                    Some(r) => r.clone(),
                    None => ev.eval(&q),
                };
                let got = match r {
                    Ok(v) if &v == value => continue,
                    Err(EvalError::LimitExceeded { .. }) => continue,
                    Ok(v) => format!("{v:?}"),
                    Err(e) => e.to_string(),
                };
                report.violations.push(Violation {
                    value: value.clone(),
                    answer: answer.clone(),
                    query: q,
                    got,
                });
            }
        }
        for q in queries {
            if !out.answers.iter().any(|a| a.covers(q)) {
                report.misses.push(Miss {
                    query: q.clone(),
                    value: value.clone(),
                });
            }
        }
    }
    report
}
