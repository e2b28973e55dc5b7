use std::collections::HashSet;

use crate::analysis::AnalysisError;
use crate::model::{Context, ContextError, ProcessModelVariable};

/// Number of concrete contexts over `variables`, or `None` on overflow.
pub fn context_count(variables: &[ProcessModelVariable]) -> Option<u128> {
    variables
        .iter()
        .try_fold(1u128, |acc, v| acc.checked_mul(v.values.len() as u128))
}

fn check_distinct(variables: &[ProcessModelVariable]) -> Result<(), AnalysisError> {
    let mut seen = HashSet::new();
    for v in variables {
        if !seen.insert(v.id.as_str()) {
            return Err(ContextError::DuplicateVariable(v.id.clone()).into());
        }
    }
    Ok(())
}

/// Walks the cartesian product of `domains` like an odometer whose last
/// wheel turns fastest, so rows come out in declaration order of variables
/// and values.
fn product(variables: &[ProcessModelVariable], domains: &[Vec<&str>]) -> Vec<Context> {
    if domains.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut wheel = vec![0usize; domains.len()];
    loop {
        out.push(
            variables
                .iter()
                .zip(&wheel)
                .zip(domains)
                .map(|((v, &i), d)| (v.id.clone(), d[i]))
                .collect(),
        );
        let mut pos = domains.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            wheel[pos] += 1;
            if wheel[pos] < domains[pos].len() {
                break;
            }
            wheel[pos] = 0;
        }
    }
}

/// Every concrete context over `variables`, lexicographic in declaration
/// order. An empty variable list yields exactly one empty context.
pub fn enumerate_contexts(variables: &[ProcessModelVariable]) -> Result<Vec<Context>, AnalysisError> {
    check_distinct(variables)?;
    let domains: Vec<Vec<&str>> = variables
        .iter()
        .map(|v| v.values.iter().map(String::as_str).collect())
        .collect();
    Ok(product(variables, &domains))
}

/// All concrete contexts over `variables` that `partial` matches, in the same
/// order as [`enumerate_contexts`].
pub fn expand(partial: &Context, variables: &[ProcessModelVariable]) -> Result<Vec<Context>, AnalysisError> {
    check_distinct(variables)?;
    for (var, value) in partial.iter() {
        let v = variables
            .iter()
            .find(|v| &v.id == var)
            .ok_or_else(|| ContextError::ForeignVariable(var.clone()))?;
        if !v.has_value(value) {
            return Err(ContextError::ValueOutsideDomain {
                variable: var.clone(),
                value: value.to_owned(),
            }
            .into());
        }
    }
    let domains: Vec<Vec<&str>> = variables
        .iter()
        .map(|v| match partial.get(v.id.as_str()) {
            Some(fixed) => vec![fixed],
            None => v.values.iter().map(String::as_str).collect(),
        })
        .collect();
    Ok(product(variables, &domains))
}

/// Conjunction of two partial contexts, or `None` when they assign different
/// values to the same variable.
pub fn intersect(a: &Context, b: &Context) -> Option<Context> {
    let mut merged = a.clone();
    for (var, value) in b.iter() {
        match a.get(var.as_str()) {
            Some(existing) if existing != value => return None,
            Some(_) => {}
            None => {
                merged.assign(var.clone(), value);
            }
        }
    }
    Some(merged)
}
