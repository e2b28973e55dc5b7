use std::collections::{BTreeSet, HashSet};

use crate::causal::checklist::checklist_for;
use crate::causal::walk::{walk_paths, Walks};
use crate::diagnostic::Diagnostic;
use crate::model::{CfCategory, DeclKind, StpaModel};

/// Word-set Jaccard similarity at or above which two causal factors with the
/// same category and location are reported as likely duplicates.
pub const DUPLICATE_SIMILARITY: f64 = 0.8;

fn words(text: &str) -> BTreeSet<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn similarity(a: &str, b: &str) -> f64 {
    let (wa, wb) = (words(a), words(b));
    let union = wa.union(&wb).count();
    if union == 0 {
        return 1.0;
    }
    wa.intersection(&wb).count() as f64 / union as f64
}

/// Checks declared causal factors against the control structure.
///
/// Errors for factors located off every walk of their UCAs; warnings for
/// near-duplicate factors and open-loop controllers; one info per UCA and
/// checklist category that no declared factor covers. Assumes the model
/// resolves.
pub fn validate_cfs(model: &StpaModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut walks: Vec<Walks> = Vec::with_capacity(model.ucas.len());
    let mut open_loop_seen = HashSet::new();
    for u in &model.ucas {
        let w = walk_paths(model, u.id.as_str()).unwrap_or_default();
        for d in &w.diagnostics {
            if open_loop_seen.insert(d.message.clone()) {
                diags.push(d.clone());
            }
        }
        walks.push(w);
    }
    let walks_of = |uca: &str| model.ucas.iter().position(|u| u.id == uca).map(|i| &walks[i]);

    for (i, cf) in model.causal_factors.iter().enumerate() {
        let at = cf.located_at.as_str();
        let on_path = cf.ucas.iter().any(|u| {
            let own_controller = model.uca(u.as_str()).is_some_and(|x| x.source_controller == at);
            own_controller || walks_of(u.as_str()).is_some_and(|w| w.contains_entity(at) || w.contains_edge(at))
        });
        if !on_path {
            let list: Vec<&str> = cf.ucas.iter().map(|u| u.as_str()).collect();
            diags.push(Diagnostic::error(
                "causal/off-path",
                format!(
                    "causal factor {} off-path: {at} is not on any feedback or control path of {}",
                    cf.id,
                    list.join(", ")
                ),
                model.span(DeclKind::CausalFactor, i),
            ));
        }
    }

    for (j, b) in model.causal_factors.iter().enumerate() {
        let twin = model.causal_factors[..j].iter().position(|a| {
            a.category == b.category
                && a.located_at == b.located_at
                && similarity(&a.description, &b.description) >= DUPLICATE_SIMILARITY
        });
        if let Some(i) = twin {
            let a = &model.causal_factors[i];
            diags.push(
                Diagnostic::warning(
                    "causal/duplicate-cf",
                    format!(
                        "causal factor {} looks like a duplicate of {}; link the UCA to {} instead",
                        b.id, a.id, a.id
                    ),
                    model.span(DeclKind::CausalFactor, j),
                )
                .with_related(format!("{} declared here", a.id), model.span(DeclKind::CausalFactor, i)),
            );
        }
    }

    for (i, u) in model.ucas.iter().enumerate() {
        let declared: HashSet<CfCategory> = model
            .causal_factors
            .iter()
            .filter(|cf| cf.ucas.contains(&u.id))
            .map(|cf| cf.category)
            .collect();
        let mut reported = HashSet::new();
        for item in checklist_for(model, u.id.as_str(), &walks[i]) {
            if !declared.contains(&item.category) && reported.insert(item.category) {
                diags.push(Diagnostic::info(
                    "causal/uncovered-category",
                    format!("{} has no declared causal factor of category {}", u.id, item.category),
                    model.span(DeclKind::Uca, i),
                ));
            }
        }
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostic::Severity;
    use crate::dsl::parse_str;

    const BASE: &str = "loss L \"l\"\nhazard H \"h\" leads_to [L]\ncontroller C \"C\"\nprocess P \"P\"\n\
                        actuator X \"X\"\nsensor S \"S\"\naction A \"a\" from C to P\n\
                        feedback F \"f\" from P to C via [S]\n\
                        uca U action = A guide = not_provided hazards [H] \"u\"\n";

    fn run(extra: &str) -> Vec<Diagnostic> {
        let (m, d) = parse_str("v.stpa", &format!("{BASE}{extra}"));
        assert!(d.is_empty(), "{d:?}");
        validate_cfs(&m)
    }

    #[test]
    fn off_path_cf_is_an_error() {
        let d = run("cf CF-1 category = actuation_failure at X for [U] \"x\"");
        let errs: Vec<_> = d.iter().filter(|d| d.is_error()).collect();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.starts_with("causal factor CF-1 off-path"));
    }

    #[test]
    fn cf_at_own_controller_and_edges_are_on_path() {
        let d = run("cf CF-1 category = control_algorithm at C for [U] \"x\"\n\
             cf CF-2 category = transmission_loss at F for [U] \"y\"\n\
             cf CF-3 category = sensor_operation at S for [U] \"z\"");
        assert!(d.iter().all(|d| !d.is_error()), "{d:?}");
    }

    #[test]
    fn one_info_per_uncovered_category() {
        let d = run("");
        assert!(d.iter().all(|d| d.severity == Severity::Info));
        let cats: Vec<&str> = d.iter().map(|d| d.message.rsplit(' ').next().unwrap()).collect();
        assert_eq!(
            cats,
            [
                "mental_model_content",
                "mental_model_update",
                "sensing_limitation",
                "sensor_operation",
                "control_algorithm",
                "process_disturbance"
            ]
        );
    }

    #[test]
    fn near_duplicates_warn() {
        let d = run(
            "cf CF-1 category = sensor_operation at S for [U] \"Sensor not working due to power failure\"\n\
             cf CF-2 category = sensor_operation at S for [U] \"Sensor not working due to power failure.\"\n\
             cf CF-3 category = sensor_operation at S for [U] \"Measurement inaccuracies from discretization\"",
        );
        let warns: Vec<_> = d.iter().filter(|d| d.severity == Severity::Warning).collect();
        assert_eq!(warns.len(), 1);
        assert_eq!(warns[0].rule, "causal/duplicate-cf");
        assert!(warns[0].message.starts_with("causal factor CF-2"));
    }

    #[test]
    fn similarity_bounds() {
        assert_eq!(similarity("a b", "B A"), 1.0);
        assert_eq!(similarity("a", "b"), 0.0);
    }
}
