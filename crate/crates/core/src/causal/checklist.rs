use serde::Serialize;

use crate::causal::walk::{walk_paths, PathWalk, Walks};
use crate::causal::CausalError;
use crate::model::{CfCategory, EntityKind, GuideCategory, Identifier, StpaModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChecklistItem {
    pub category: CfCategory,
    pub located_at: Identifier,
    pub prompt: String,
}

/// Emission order of checklist groups. Sensing limitation and sensor
/// operation share a group so the two items for one sensor stay together.
const GROUPS: &[&[CfCategory]] = &[
    &[CfCategory::MentalModelContent, CfCategory::MentalModelUpdate],
    &[CfCategory::SensingLimitation, CfCategory::SensorOperation],
    &[CfCategory::TransmissionLoss],
    &[CfCategory::PreProcessing],
    &[CfCategory::Presentation],
    &[CfCategory::ControlAlgorithm],
    &[CfCategory::TimingDelay],
    &[CfCategory::ActuationFailure],
    &[CfCategory::ControlPathTransmission],
    &[CfCategory::ProcessDisturbance],
];

fn kind_of(model: &StpaModel, id: &str) -> Option<EntityKind> {
    model.entity(id).map(|e| e.kind)
}

fn is_device(kind: Option<EntityKind>) -> bool {
    matches!(kind, Some(EntityKind::Sensor | EntityKind::Actuator))
}

fn is_controller(kind: Option<EntityKind>) -> bool {
    kind == Some(EntityKind::Controller)
}

/// Role of each non-controller element of a feedback walk:
/// the origin is a disturbance source (or a sensor/controller if the walk
/// starts there), an element between two controllers presents information,
/// a device between another device and a controller transmits it, and any
/// other device senses.
fn feedback_roles(model: &StpaModel, walk: &PathWalk) -> Vec<(CfCategory, Identifier)> {
    let el = &walk.elements;
    let mut out = Vec::new();
    for i in 0..el.len().saturating_sub(1) {
        let id = &el[i];
        let kind = kind_of(model, id.as_str());
        if is_controller(kind) {
            out.push((CfCategory::PreProcessing, id.clone()));
            continue;
        }
        if i == 0 && !is_device(kind) {
            out.push((CfCategory::ProcessDisturbance, id.clone()));
            continue;
        }
        let prev = i.checked_sub(1).map(|p| kind_of(model, el[p].as_str()));
        let next = kind_of(model, el[i + 1].as_str());
        match (prev, is_controller(next)) {
            (Some(p), true) if is_controller(p) => out.push((CfCategory::Presentation, id.clone())),
            (Some(p), true) if is_device(p) => out.push((CfCategory::TransmissionLoss, id.clone())),
            _ => {
                out.push((CfCategory::SensingLimitation, id.clone()));
                out.push((CfCategory::SensorOperation, id.clone()));
            }
        }
    }
    out
}

/// Role of each element after the controller on a control walk: a device
/// right after a controller that hands over to another device relays the
/// command, other devices actuate, intermediate controllers relay, and the
/// final process is where disturbances enter.
fn control_roles(model: &StpaModel, walk: &PathWalk) -> Vec<(CfCategory, Identifier)> {
    let el = &walk.elements;
    let mut out = Vec::new();
    for i in 1..el.len() {
        let id = &el[i];
        let kind = kind_of(model, id.as_str());
        let last = i + 1 == el.len();
        let cat = if is_controller(kind) {
            CfCategory::ControlPathTransmission
        } else if last && !is_device(kind) {
            CfCategory::ProcessDisturbance
        } else {
            let prev = kind_of(model, el[i - 1].as_str());
            let next = el.get(i + 1).map(|n| kind_of(model, n.as_str()));
            match next {
                Some(n) if is_controller(prev) && is_device(n) => CfCategory::ControlPathTransmission,
                _ => CfCategory::ActuationFailure,
            }
        };
        out.push((cat, id.clone()));
    }
    out
}

fn prompt(category: CfCategory, label: &str, uca: &str) -> String {
    match category {
        CfCategory::MentalModelContent => {
            format!("Does the process model of {label} lack or misstate information needed to avoid {uca}?")
        }
        CfCategory::MentalModelUpdate => {
            format!("Can the process model of {label} fail to be updated (distraction, poor presentation, changed process) before {uca}?")
        }
        CfCategory::ControlAlgorithm => {
            format!("Can the control algorithm of {label} (training, routine, rules) produce {uca} despite a correct process model?")
        }
        CfCategory::SensingLimitation => {
            format!(
                "Can {label} fail to capture the relevant part of reality (range, occlusion, resolution, inaccuracy)?"
            )
        }
        CfCategory::SensorOperation => {
            format!("Can {label} stop operating or deliver no output (hardware, power, connection failure)?")
        }
        CfCategory::TransmissionLoss => {
            format!("Can {label} lose, drop, corrupt or reorder the feedback it carries?")
        }
        CfCategory::PreProcessing => {
            format!("Can {label} fail or process incoming information with wrong beliefs (calibration, models, parameters)?")
        }
        CfCategory::Presentation => {
            format!("Can {label} present information incompletely or illegibly (failure, dropped frames, glare)?")
        }
        CfCategory::ActuationFailure => {
            format!("Can {label} fail to execute the command or execute it incorrectly?")
        }
        CfCategory::ControlPathTransmission => {
            format!("Can {label} lose, delay, corrupt or reorder the command on its way to the process?")
        }
        CfCategory::ProcessDisturbance => {
            format!("Can {label} behave outside its assumed envelope or be disturbed by unmodeled inputs?")
        }
        CfCategory::TimingDelay => {
            format!("Can {label} add delay (processing, transmission, reaction time) that makes the action untimely?")
        }
    }
}

/// Causal-factor checklist for one UCA, derived from its path walks.
pub fn checklist(model: &StpaModel, uca: &str) -> Result<Vec<ChecklistItem>, CausalError> {
    let walks = walk_paths(model, uca)?;
    Ok(checklist_for(model, uca, &walks))
}

pub(crate) fn checklist_for(model: &StpaModel, uca: &str, walks: &Walks) -> Vec<ChecklistItem> {
    let Some(u) = model.uca(uca) else {
        return Vec::new();
    };
    let controller = u.source_controller.clone();
    let mut found: Vec<(CfCategory, Identifier)> = vec![
        (CfCategory::MentalModelContent, controller.clone()),
        (CfCategory::MentalModelUpdate, controller.clone()),
        (CfCategory::ControlAlgorithm, controller.clone()),
    ];
    for w in walks.feedback() {
        found.extend(feedback_roles(model, w));
    }
    for w in walks.control() {
        found.extend(control_roles(model, w));
    }
    if u.guide.category == GuideCategory::WrongTiming {
        let ordered = walks.feedback().chain(walks.control());
        for w in ordered {
            found.extend(w.elements.iter().map(|e| (CfCategory::TimingDelay, e.clone())));
        }
    }

    let mut items = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for group in GROUPS {
        for (cat, at) in &found {
            if group.contains(cat) && seen.insert((*cat, at.clone())) {
                items.push(ChecklistItem {
                    category: *cat,
                    located_at: at.clone(),
                    prompt: prompt(*cat, model.entity_label(at.as_str()), uca),
                });
            }
        }
    }
    items
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;

    #[test]
    fn open_loop_controller_gets_controller_items_and_process() {
        let src = "loss L \"l\"\nhazard H \"h\" leads_to [L]\ncontroller C \"C\"\nprocess P \"P\"\n\
                   action A \"a\" from C to P\nuca U action = A guide = not_provided hazards [H] \"u\"";
        let (m, d) = parse_str("c.stpa", src);
        assert!(d.is_empty());
        let items = checklist(&m, "U").unwrap();
        let cats: Vec<CfCategory> = items.iter().map(|i| i.category).collect();
        assert_eq!(
            cats,
            [
                CfCategory::MentalModelContent,
                CfCategory::MentalModelUpdate,
                CfCategory::ControlAlgorithm,
                CfCategory::ProcessDisturbance
            ]
        );
        assert!(items[..3].iter().all(|i| i.located_at == "C"));
        assert_eq!(items[3].located_at, "P");
    }

    #[test]
    fn prompts_use_labels() {
        let p = prompt(CfCategory::TransmissionLoss, "Network-UL", "UCA-1");
        assert!(p.contains("Network-UL"));
    }
}
