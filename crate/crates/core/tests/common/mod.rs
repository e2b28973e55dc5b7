//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;

use stpa_core::{
    CausalFactor, CfCategory, Context, ControllerConstraint, Edge, EdgeKind, Entity, EntityKind, GuideCategory,
    GuideWord, Hazard, Identifier, Loss, ProcessModelVariable, Qualifier, StpaModel, SystemConstraint,
    UnsafeControlAction,
};

/// Every concrete context of `vars`, built by recursion over the first
/// variable rather than by the library's odometer.
pub fn brute_enumerate(vars: &[ProcessModelVariable]) -> Vec<Vec<(String, String)>> {
    match vars.split_first() {
        None => vec![Vec::new()],
        Some((first, rest)) => {
            let tails = brute_enumerate(rest);
            let mut out = Vec::new();
            for value in &first.values {
                for tail in &tails {
                    let mut row = vec![(first.id.to_string(), value.clone())];
                    row.extend(tail.iter().cloned());
                    out.push(row);
                }
            }
            out
        }
    }
}

/// True when every assignment of `partial` also appears in `row`.
pub fn brute_matches(partial: &Context, row: &[(String, String)]) -> bool {
    partial
        .iter()
        .all(|(var, value)| row.iter().any(|(v, x)| v == var.as_str() && x == value))
}

pub fn to_context(row: &[(String, String)]) -> Context {
    row.iter()
        .map(|(v, x)| (Identifier::new(v.clone()), x.clone()))
        .collect()
}

pub fn variable(id: &str, values: &[&str]) -> ProcessModelVariable {
    ProcessModelVariable {
        id: id.into(),
        owner: "C".into(),
        label: format!("label of {id}"),
        values: values.iter().map(|v| v.to_string()).collect(),
    }
}

/// Up to `max_vars` variables with 1..=`max_values` distinct values each.
pub fn variable_set(max_vars: usize, max_values: usize) -> impl Strategy<Value = Vec<ProcessModelVariable>> {
    prop::collection::vec(1..=max_values, 0..=max_vars).prop_map(|sizes| {
        sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| ProcessModelVariable {
                id: Identifier::new(format!("V{i}")),
                owner: "C".into(),
                label: format!("Variable {i}"),
                values: (0..n).map(|k| format!("value {k}")).collect(),
            })
            .collect()
    })
}

/// A variable set together with a partial context over it. Each variable is
/// left free or fixed to one of its values.
pub fn partial_with_vars(
    max_vars: usize,
    max_values: usize,
) -> impl Strategy<Value = (Context, Vec<ProcessModelVariable>)> {
    variable_set(max_vars, max_values).prop_flat_map(|vars| {
        let picks: Vec<_> = vars.iter().map(|v| prop::option::of(0..v.values.len())).collect();
        (Just(vars), picks).prop_map(|(vars, picks)| {
            let mut ctx = Context::new();
            for (v, pick) in vars.iter().zip(picks) {
                if let Some(k) = pick {
                    ctx.assign(v.id.clone(), v.values[k].clone());
                }
            }
            (ctx, vars)
        })
    })
}

/// Description text: printable ASCII and a few non-ASCII characters,
/// including characters the serializer must escape, ending in a letter.
pub fn text() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 μκ̇≠#|,.\"\\\\\t\n{}\\[\\]=-]{0,16}[a-zé]"
}

/// Deterministic cursor over a pool of random draws.
struct Draws {
    nums: Vec<u32>,
    texts: Vec<String>,
    n: usize,
    t: usize,
}

impl Draws {
    fn below(&mut self, bound: usize) -> usize {
        let x = self.nums[self.n % self.nums.len()] as usize;
        self.n += 1;
        if bound == 0 {
            0
        } else {
            x % bound
        }
    }

    fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    fn coin(&mut self) -> bool {
        self.below(2) == 0
    }

    fn text(&mut self) -> String {
        let s = self.texts[self.t % self.texts.len()].clone();
        self.t += 1;
        s
    }

    /// Non-empty subset of `items`, in `items` order or shuffled.
    fn subset<T: Clone>(&mut self, items: &[T]) -> Vec<T> {
        let mut out: Vec<T> = items.iter().filter(|_| self.coin()).cloned().collect();
        if out.is_empty() {
            out.push(items[self.below(items.len())].clone());
        }
        if out.len() > 1 && self.coin() {
            out.reverse();
        }
        out
    }
}

const ID_STEMS: [&str; 4] = ["", "x_", "Ü", "n-"];

fn build(nums: Vec<u32>, texts: Vec<String>) -> StpaModel {
    let mut d = Draws {
        nums,
        texts,
        n: 0,
        t: 0,
    };
    let mut m = StpaModel::new();
    let stem = ID_STEMS[d.below(ID_STEMS.len())];

    for i in 1..=d.range(1, 3) {
        m.losses.push(Loss {
            id: format!("L-{i}").into(),
            description: d.text(),
        });
    }
    let loss_ids: Vec<Identifier> = m.losses.iter().map(|l| l.id.clone()).collect();
    for i in 1..=d.range(1, 4) {
        m.hazards.push(Hazard {
            id: format!("H-{i}").into(),
            description: d.text(),
            leads_to: d.subset(&loss_ids),
        });
    }
    let hazard_ids: Vec<Identifier> = m.hazards.iter().map(|h| h.id.clone()).collect();
    for i in 1..=d.range(0, 2) {
        m.constraints.push(SystemConstraint {
            id: format!("SC-{i}").into(),
            description: d.text(),
            mitigates: d.subset(&hazard_ids),
        });
    }

    let mut controllers = Vec::new();
    let mut devices = Vec::new();
    let mut others = Vec::new();
    let counts = [
        (EntityKind::Controller, d.range(1, 3)),
        (EntityKind::ControlledProcess, d.range(1, 2)),
        (EntityKind::Sensor, d.range(0, 3)),
        (EntityKind::Actuator, d.range(0, 2)),
        (EntityKind::Environment, d.range(0, 1)),
    ];
    for (kind, n) in counts {
        for i in 0..n {
            let id = Identifier::new(format!("{stem}{}{i}", kind.keyword()));
            m.entities.push(Entity::new(id.clone(), kind, d.text()));
            match kind {
                EntityKind::Controller => controllers.push(id),
                EntityKind::Sensor | EntityKind::Actuator => devices.push(id),
                _ => others.push(id),
            }
        }
    }
    let mut targets = controllers.clone();
    targets.extend(others.iter().cloned());

    let mut edge_no = 0;
    let mut edge = |d: &mut Draws, kind: EdgeKind, source: Identifier, target: Identifier| {
        edge_no += 1;
        let via = if devices.is_empty() || d.coin() {
            Vec::new()
        } else {
            d.subset(&devices)
        };
        let signals = (0..d.range(0, 2)).map(|_| d.text()).collect();
        Edge {
            id: format!("E{edge_no}").into(),
            kind,
            label: d.text(),
            source,
            target,
            signals,
            via,
        }
    };
    for c in &controllers {
        for _ in 0..d.range(1, 2) {
            let choices: Vec<&Identifier> = targets.iter().filter(|t| *t != c).collect();
            let target = choices[d.below(choices.len())].clone();
            let e = edge(&mut d, EdgeKind::ControlAction, c.clone(), target);
            m.edges.push(e);
        }
    }
    for _ in 0..d.range(0, 3) {
        let target = controllers[d.below(controllers.len())].clone();
        let choices: Vec<&Identifier> = targets.iter().filter(|t| **t != target).collect();
        let source = choices[d.below(choices.len())].clone();
        let e = edge(&mut d, EdgeKind::Feedback, source, target);
        m.edges.push(e);
    }

    let mut var_no = 0;
    for c in &controllers {
        for _ in 0..d.range(0, 3) {
            var_no += 1;
            let mut values: Vec<String> = Vec::new();
            for k in 0..d.range(2, 4) {
                let mut v = d.text();
                while values.contains(&v) {
                    v.push_str(&k.to_string());
                }
                values.push(v);
            }
            m.variables.push(ProcessModelVariable {
                id: format!("V{var_no}").into(),
                owner: c.clone(),
                label: d.text(),
                values,
            });
        }
    }

    let actions: Vec<Edge> = m.control_actions().cloned().collect();
    for i in 1..=d.range(0, 6) {
        let action = &actions[d.below(actions.len())];
        let category = GuideCategory::ALL[d.below(4)];
        let legal: Vec<Qualifier> = Qualifier::ALL
            .into_iter()
            .filter(|q| q.category() == category)
            .collect();
        let qualifier = if legal.is_empty() || d.coin() {
            None
        } else {
            Some(legal[d.below(legal.len())])
        };
        let mut context = Context::new();
        for v in m.variables.iter().filter(|v| v.owner == action.source) {
            if d.coin() {
                context.assign(v.id.clone(), v.values[d.below(v.values.len())].clone());
            }
        }
        m.ucas.push(UnsafeControlAction {
            id: format!("UCA-{i}").into(),
            action: action.id.clone(),
            source_controller: action.source.clone(),
            guide: GuideWord { category, qualifier },
            context,
            hazards: d.subset(&hazard_ids),
            description: d.text(),
        });
    }

    let uca_ids: Vec<Identifier> = m.ucas.iter().map(|u| u.id.clone()).collect();
    if !uca_ids.is_empty() {
        let mut locations: Vec<Identifier> = m.entities.iter().map(|e| e.id.clone()).collect();
        locations.extend(m.edges.iter().map(|e| e.id.clone()));
        for i in 1..=d.range(0, 4) {
            m.causal_factors.push(CausalFactor {
                id: format!("CF-{i}").into(),
                category: CfCategory::ALL[d.below(CfCategory::ALL.len())],
                located_at: locations[d.below(locations.len())].clone(),
                ucas: d.subset(&uca_ids),
                description: d.text(),
            });
        }
        for i in 1..=d.range(0, 2) {
            m.controller_constraints.push(ControllerConstraint {
                id: format!("CC-{i}").into(),
                derived_from: uca_ids[d.below(uca_ids.len())].clone(),
                description: d.text(),
            });
        }
    }
    m
}

/// Random models that resolve without diagnostics.
pub fn valid_model() -> impl Strategy<Value = StpaModel> {
    (
        prop::collection::vec(any::<u32>(), 200..400),
        prop::collection::vec(text(), 30..60),
    )
        .prop_map(|(nums, texts)| build(nums, texts))
}
