//! Domain types for an STPA analysis: losses, hazards, the control structure,
//! process-model variables, unsafe control actions and causal factors.
//!
//! A [`StpaModel`] is built once (usually by the parser) and treated as
//! immutable afterwards. Every analysis is a pure function over it.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::diagnostic::SourceSpan;

/// Name of a declaration such as `L-1`, `H-3`, `UCA-12` or `Network-UL`.
///
/// Comparison is exact and case-sensitive. Well-formedness (letters, digits,
/// hyphens and underscores, nothing else) is checked by `resolve`, so that
/// programmatically built models report bad ids as diagnostics instead of
/// panicking.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Identifier(String);

impl Identifier {
    pub fn new(text: impl Into<String>) -> Self {
        Identifier(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_well_formed(&self) -> bool {
        !self.0.is_empty() && self.0.chars().all(is_identifier_char)
    }

    /// Orders `UCA-2` before `UCA-10` by comparing digit runs numerically.
    pub fn natural_cmp(&self, other: &Identifier) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

pub(crate) fn is_identifier_char(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '_'
}

pub(crate) fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut a = a.chars().peekable();
    let mut b = b.chars().peekable();
    loop {
        match (a.peek().copied(), b.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut da = String::new();
                while let Some(c) = a.next_if(|c| c.is_ascii_digit()) {
                    da.push(c);
                }
                let mut db = String::new();
                while let Some(c) = b.next_if(|c| c.is_ascii_digit()) {
                    db.push(c);
                }
                let ta = da.trim_start_matches('0');
                let tb = db.trim_start_matches('0');
                let ord = ta
                    .len()
                    .cmp(&tb.len())
                    .then_with(|| ta.cmp(tb))
                    .then_with(|| da.len().cmp(&db.len()));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(&y);
                }
                a.next();
                b.next();
            }
        }
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Identifier {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Identifier {
    fn from(s: &str) -> Self {
        Identifier(s.to_owned())
    }
}

impl From<String> for Identifier {
    fn from(s: String) -> Self {
        Identifier(s)
    }
}

impl PartialEq<str> for Identifier {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for Identifier {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Loss {
    pub id: Identifier,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hazard {
    pub id: Identifier,
    pub description: String,
    pub leads_to: Vec<Identifier>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemConstraint {
    pub id: Identifier,
    pub description: String,
    pub mitigates: Vec<Identifier>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EntityKind {
    Controller,
    Sensor,
    Actuator,
    ControlledProcess,
    Environment,
}

impl EntityKind {
    pub const ALL: [EntityKind; 5] = [
        EntityKind::Controller,
        EntityKind::Sensor,
        EntityKind::Actuator,
        EntityKind::ControlledProcess,
        EntityKind::Environment,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            EntityKind::Controller => "controller",
            EntityKind::Sensor => "sensor",
            EntityKind::Actuator => "actuator",
            EntityKind::ControlledProcess => "process",
            EntityKind::Environment => "environment",
        }
    }

    pub fn from_keyword(word: &str) -> Option<EntityKind> {
        EntityKind::ALL.into_iter().find(|k| k.keyword() == word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entity {
    pub id: Identifier,
    pub kind: EntityKind,
    pub label: String,
    pub in_system_boundary: bool,
}

impl Entity {
    /// Environment entities sit outside the system boundary; everything else inside.
    pub fn new(id: impl Into<Identifier>, kind: EntityKind, label: impl Into<String>) -> Self {
        Entity {
            id: id.into(),
            kind,
            label: label.into(),
            in_system_boundary: kind != EntityKind::Environment,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeKind {
    ControlAction,
    Feedback,
}

impl EdgeKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EdgeKind::ControlAction => "action",
            EdgeKind::Feedback => "feedback",
        }
    }
}

/// A control-action or feedback link. `via` lists the sensors, actuators and
/// network elements the signal passes through, in travel order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: Identifier,
    pub kind: EdgeKind,
    pub label: String,
    pub source: Identifier,
    pub target: Identifier,
    pub signals: Vec<String>,
    pub via: Vec<Identifier>,
}

impl Edge {
    /// Source, via elements and target in travel order.
    pub fn hops(&self) -> impl Iterator<Item = &Identifier> {
        std::iter::once(&self.source)
            .chain(self.via.iter())
            .chain(std::iter::once(&self.target))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcessModelVariable {
    pub id: Identifier,
    pub owner: Identifier,
    pub label: String,
    pub values: Vec<String>,
}

impl ProcessModelVariable {
    pub fn has_value(&self, value: &str) -> bool {
        self.values.iter().any(|v| v == value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("foreign variable {0}")]
    ForeignVariable(Identifier),
    #[error("value {value:?} is not in the domain of variable {variable}")]
    ValueOutsideDomain { variable: Identifier, value: String },
    #[error("duplicate variable {0}")]
    DuplicateVariable(Identifier),
}

/// Partial assignment of process-model variables to value labels.
/// Variables that are not mentioned are wildcards; the empty context denotes
/// every context. Insertion order is kept for display, equality ignores it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Context {
    assignments: IndexMap<Identifier, String>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn with(mut self, variable: impl Into<Identifier>, value: impl Into<String>) -> Self {
        self.assign(variable, value);
        self
    }

    /// Returns the previous value if the variable was already assigned.
    pub fn assign(&mut self, variable: impl Into<Identifier>, value: impl Into<String>) -> Option<String> {
        self.assignments.insert(variable.into(), value.into())
    }

    pub fn get(&self, variable: &str) -> Option<&str> {
        self.assignments.get(variable).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Identifier, &str)> {
        self.assignments.iter().map(|(k, v)| (k, v.as_str()))
    }

    pub fn variables(&self) -> impl Iterator<Item = &Identifier> {
        self.assignments.keys()
    }

    pub fn without(&self, variable: &str) -> Context {
        let mut c = self.clone();
        c.assignments.shift_remove(variable);
        c
    }

    /// True iff every assignment in `self` agrees with `concrete`.
    ///
    /// `concrete` is expected to assign every variable of the controller; a
    /// variable assigned here but absent from `concrete` is a foreign variable.
    pub fn matches(&self, concrete: &Context) -> Result<bool, ContextError> {
        let mut all = true;
        for (var, value) in &self.assignments {
            match concrete.assignments.get(var) {
                None => return Err(ContextError::ForeignVariable(var.clone())),
                Some(v) if v != value => all = false,
                Some(_) => {}
            }
        }
        Ok(all)
    }
}

/// See [`Context::matches`].
pub fn context_matches(partial: &Context, concrete: &Context) -> Result<bool, ContextError> {
    partial.matches(concrete)
}

impl<K: Into<Identifier>, V: Into<String>> FromIterator<(K, V)> for Context {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        let mut c = Context::new();
        for (k, v) in iter {
            c.assign(k, v);
        }
        c
    }
}

/// The four guide-word categories used to look for unsafe control actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GuideCategory {
    NotProvided,
    ProvidedUnsafe,
    WrongTiming,
    WrongDuration,
}

impl GuideCategory {
    pub const ALL: [GuideCategory; 4] = [
        GuideCategory::NotProvided,
        GuideCategory::ProvidedUnsafe,
        GuideCategory::WrongTiming,
        GuideCategory::WrongDuration,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            GuideCategory::NotProvided => "not_provided",
            GuideCategory::ProvidedUnsafe => "provided_unsafe",
            GuideCategory::WrongTiming => "wrong_timing",
            GuideCategory::WrongDuration => "wrong_duration",
        }
    }

    pub fn from_keyword(word: &str) -> Option<GuideCategory> {
        GuideCategory::ALL.into_iter().find(|c| c.keyword() == word)
    }

    pub fn title(self) -> &'static str {
        match self {
            GuideCategory::NotProvided => "Not providing causes hazards",
            GuideCategory::ProvidedUnsafe => "Providing causes hazards",
            GuideCategory::WrongTiming => "Too early, too late, out of order",
            GuideCategory::WrongDuration => "Stopped too soon, applied too long",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for GuideCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Qualifier {
    TooEarly,
    TooLate,
    OutOfOrder,
    StoppedTooSoon,
    AppliedTooLong,
    Insufficient,
    Excessive,
    InsufficientOrExcessive,
}

impl Qualifier {
    pub const ALL: [Qualifier; 8] = [
        Qualifier::TooEarly,
        Qualifier::TooLate,
        Qualifier::OutOfOrder,
        Qualifier::StoppedTooSoon,
        Qualifier::AppliedTooLong,
        Qualifier::Insufficient,
        Qualifier::Excessive,
        Qualifier::InsufficientOrExcessive,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Qualifier::TooEarly => "too_early",
            Qualifier::TooLate => "too_late",
            Qualifier::OutOfOrder => "out_of_order",
            Qualifier::StoppedTooSoon => "stopped_too_soon",
            Qualifier::AppliedTooLong => "applied_too_long",
            Qualifier::Insufficient => "insufficient",
            Qualifier::Excessive => "excessive",
            Qualifier::InsufficientOrExcessive => "insufficient_or_excessive",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Qualifier> {
        Qualifier::ALL.into_iter().find(|q| q.keyword() == word)
    }

    /// The only category this qualifier may refine.
    pub fn category(self) -> GuideCategory {
        match self {
            Qualifier::TooEarly | Qualifier::TooLate | Qualifier::OutOfOrder => GuideCategory::WrongTiming,
            Qualifier::StoppedTooSoon | Qualifier::AppliedTooLong => GuideCategory::WrongDuration,
            Qualifier::Insufficient | Qualifier::Excessive | Qualifier::InsufficientOrExcessive => {
                GuideCategory::ProvidedUnsafe
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("qualifier {} cannot refine guide word {}", .qualifier.keyword(), .category.keyword())]
pub struct GuideWordError {
    pub category: GuideCategory,
    pub qualifier: Qualifier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GuideWord {
    pub category: GuideCategory,
    pub qualifier: Option<Qualifier>,
}

impl GuideWord {
    pub fn new(category: GuideCategory, qualifier: Option<Qualifier>) -> Result<GuideWord, GuideWordError> {
        let gw = GuideWord { category, qualifier };
        gw.check().map(|()| gw)
    }

    pub fn plain(category: GuideCategory) -> GuideWord {
        GuideWord {
            category,
            qualifier: None,
        }
    }

    pub fn is_legal(category: GuideCategory, qualifier: Option<Qualifier>) -> bool {
        qualifier.is_none_or(|q| q.category() == category)
    }

    pub fn check(&self) -> Result<(), GuideWordError> {
        match self.qualifier {
            Some(q) if !GuideWord::is_legal(self.category, Some(q)) => Err(GuideWordError {
                category: self.category,
                qualifier: q,
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnsafeControlAction {
    pub id: Identifier,
    /// Control-action edge this UCA is about.
    pub action: Identifier,
    /// Controller issuing the action; always the action edge's source in a
    /// resolved model.
    pub source_controller: Identifier,
    pub guide: GuideWord,
    pub context: Context,
    pub hazards: Vec<Identifier>,
    pub description: String,
}

/// Causal-factor classes used to scaffold step-4 checklists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CfCategory {
    MentalModelContent,
    MentalModelUpdate,
    ControlAlgorithm,
    SensingLimitation,
    SensorOperation,
    TransmissionLoss,
    PreProcessing,
    Presentation,
    ActuationFailure,
    ControlPathTransmission,
    ProcessDisturbance,
    TimingDelay,
}

impl CfCategory {
    pub const ALL: [CfCategory; 12] = [
        CfCategory::MentalModelContent,
        CfCategory::MentalModelUpdate,
        CfCategory::ControlAlgorithm,
        CfCategory::SensingLimitation,
        CfCategory::SensorOperation,
        CfCategory::TransmissionLoss,
        CfCategory::PreProcessing,
        CfCategory::Presentation,
        CfCategory::ActuationFailure,
        CfCategory::ControlPathTransmission,
        CfCategory::ProcessDisturbance,
        CfCategory::TimingDelay,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            CfCategory::MentalModelContent => "mental_model_content",
            CfCategory::MentalModelUpdate => "mental_model_update",
            CfCategory::ControlAlgorithm => "control_algorithm",
            CfCategory::SensingLimitation => "sensing_limitation",
            CfCategory::SensorOperation => "sensor_operation",
            CfCategory::TransmissionLoss => "transmission_loss",
            CfCategory::PreProcessing => "pre_processing",
            CfCategory::Presentation => "presentation",
            CfCategory::ActuationFailure => "actuation_failure",
            CfCategory::ControlPathTransmission => "control_path_transmission",
            CfCategory::ProcessDisturbance => "process_disturbance",
            CfCategory::TimingDelay => "timing_delay",
        }
    }

    pub fn from_keyword(word: &str) -> Option<CfCategory> {
        CfCategory::ALL.into_iter().find(|c| c.keyword() == word)
    }

    /// Categories describing flaws inside the controller itself.
    pub fn is_controller_internal(self) -> bool {
        matches!(
            self,
            CfCategory::MentalModelContent | CfCategory::MentalModelUpdate | CfCategory::ControlAlgorithm
        )
    }
}

impl fmt::Display for CfCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CausalFactor {
    pub id: Identifier,
    pub category: CfCategory,
    /// An entity id or an edge id.
    pub located_at: Identifier,
    pub ucas: Vec<Identifier>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ControllerConstraint {
    pub id: Identifier,
    pub derived_from: Identifier,
    pub description: String,
}

/// Declaration kinds. Ids are unique within a kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DeclKind {
    Loss,
    Hazard,
    Constraint,
    Entity,
    Edge,
    Variable,
    Uca,
    CausalFactor,
    ControllerConstraint,
}

impl DeclKind {
    pub const ALL: [DeclKind; 9] = [
        DeclKind::Loss,
        DeclKind::Hazard,
        DeclKind::Constraint,
        DeclKind::Entity,
        DeclKind::Edge,
        DeclKind::Variable,
        DeclKind::Uca,
        DeclKind::CausalFactor,
        DeclKind::ControllerConstraint,
    ];

    pub fn noun(self) -> &'static str {
        match self {
            DeclKind::Loss => "loss",
            DeclKind::Hazard => "hazard",
            DeclKind::Constraint => "system constraint",
            DeclKind::Entity => "entity",
            DeclKind::Edge => "edge",
            DeclKind::Variable => "variable",
            DeclKind::Uca => "unsafe control action",
            DeclKind::CausalFactor => "causal factor",
            DeclKind::ControllerConstraint => "controller constraint",
        }
    }
}

/// Source location of every declaration, indexed by kind and position in the
/// model's per-kind list.
#[derive(Debug, Clone, Default)]
pub struct SpanTable {
    spans: BTreeMap<DeclKind, Vec<SourceSpan>>,
}

impl SpanTable {
    pub fn push(&mut self, kind: DeclKind, span: SourceSpan) {
        self.spans.entry(kind).or_default().push(span);
    }

    /// Span of the `index`-th declaration of `kind`, or [`SourceSpan::unknown`]
    /// for declarations that were not parsed.
    pub fn get(&self, kind: DeclKind, index: usize) -> SourceSpan {
        self.spans
            .get(&kind)
            .and_then(|v| v.get(index))
            .cloned()
            .unwrap_or_default()
    }

    pub fn len(&self, kind: DeclKind) -> usize {
        self.spans.get(&kind).map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.spans.values().all(Vec::is_empty)
    }
}

/// Root aggregate. Equality compares declarations only; spans are ignored.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StpaModel {
    pub losses: Vec<Loss>,
    pub hazards: Vec<Hazard>,
    pub constraints: Vec<SystemConstraint>,
    pub entities: Vec<Entity>,
    pub edges: Vec<Edge>,
    pub variables: Vec<ProcessModelVariable>,
    pub ucas: Vec<UnsafeControlAction>,
    pub causal_factors: Vec<CausalFactor>,
    pub controller_constraints: Vec<ControllerConstraint>,
    #[serde(skip)]
    pub spans: SpanTable,
}

impl PartialEq for StpaModel {
    fn eq(&self, other: &Self) -> bool {
        self.losses == other.losses
            && self.hazards == other.hazards
            && self.constraints == other.constraints
            && self.entities == other.entities
            && self.edges == other.edges
            && self.variables == other.variables
            && self.ucas == other.ucas
            && self.causal_factors == other.causal_factors
            && self.controller_constraints == other.controller_constraints
    }
}

impl Eq for StpaModel {}

fn find<'a, T>(items: &'a [T], id: &str, key: impl Fn(&T) -> &Identifier) -> Option<&'a T> {
    items.iter().find(|item| key(item).as_str() == id)
}

impl StpaModel {
    pub fn new() -> Self {
        StpaModel::default()
    }

    pub fn loss(&self, id: &str) -> Option<&Loss> {
        find(&self.losses, id, |x| &x.id)
    }

    pub fn hazard(&self, id: &str) -> Option<&Hazard> {
        find(&self.hazards, id, |x| &x.id)
    }

    pub fn constraint(&self, id: &str) -> Option<&SystemConstraint> {
        find(&self.constraints, id, |x| &x.id)
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        find(&self.entities, id, |x| &x.id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        find(&self.edges, id, |x| &x.id)
    }

    pub fn variable(&self, id: &str) -> Option<&ProcessModelVariable> {
        find(&self.variables, id, |x| &x.id)
    }

    pub fn uca(&self, id: &str) -> Option<&UnsafeControlAction> {
        find(&self.ucas, id, |x| &x.id)
    }

    pub fn causal_factor(&self, id: &str) -> Option<&CausalFactor> {
        find(&self.causal_factors, id, |x| &x.id)
    }

    /// Label of an entity, falling back to its id.
    pub fn entity_label<'a>(&'a self, id: &'a str) -> &'a str {
        self.entity(id).map_or(id, |e| e.label.as_str())
    }

    pub fn variables_of<'a>(&'a self, controller: &'a str) -> impl Iterator<Item = &'a ProcessModelVariable> + 'a {
        self.variables.iter().filter(move |v| v.owner == controller)
    }

    pub fn ucas_for_action<'a>(&'a self, action: &'a str) -> impl Iterator<Item = &'a UnsafeControlAction> + 'a {
        self.ucas.iter().filter(move |u| u.action == action)
    }

    pub fn control_actions(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::ControlAction)
    }

    pub fn feedback_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Feedback)
    }

    pub fn is_empty(&self) -> bool {
        DeclKind::ALL.into_iter().all(|k| self.count(k) == 0)
    }

    pub fn count(&self, kind: DeclKind) -> usize {
        match kind {
            DeclKind::Loss => self.losses.len(),
            DeclKind::Hazard => self.hazards.len(),
            DeclKind::Constraint => self.constraints.len(),
            DeclKind::Entity => self.entities.len(),
            DeclKind::Edge => self.edges.len(),
            DeclKind::Variable => self.variables.len(),
            DeclKind::Uca => self.ucas.len(),
            DeclKind::CausalFactor => self.causal_factors.len(),
            DeclKind::ControllerConstraint => self.controller_constraints.len(),
        }
    }

    /// Ids of all declarations of `kind`, in declaration order.
    pub fn ids(&self, kind: DeclKind) -> Vec<&Identifier> {
        match kind {
            DeclKind::Loss => self.losses.iter().map(|x| &x.id).collect(),
            DeclKind::Hazard => self.hazards.iter().map(|x| &x.id).collect(),
            DeclKind::Constraint => self.constraints.iter().map(|x| &x.id).collect(),
            DeclKind::Entity => self.entities.iter().map(|x| &x.id).collect(),
            DeclKind::Edge => self.edges.iter().map(|x| &x.id).collect(),
            DeclKind::Variable => self.variables.iter().map(|x| &x.id).collect(),
            DeclKind::Uca => self.ucas.iter().map(|x| &x.id).collect(),
            DeclKind::CausalFactor => self.causal_factors.iter().map(|x| &x.id).collect(),
            DeclKind::ControllerConstraint => self.controller_constraints.iter().map(|x| &x.id).collect(),
        }
    }

    pub fn span(&self, kind: DeclKind, index: usize) -> SourceSpan {
        self.spans.get(kind, index)
    }

    /// Span of the first declaration of `kind` named `id`.
    pub fn span_of(&self, kind: DeclKind, id: &str) -> SourceSpan {
        self.ids(kind)
            .iter()
            .position(|x| x.as_str() == id)
            .map(|i| self.span(kind, i))
            .unwrap_or_default()
    }

    /// Fills in each UCA's `source_controller` from its action edge. Used by
    /// the parser, whose grammar names only the action.
    pub fn derive_uca_controllers(&mut self) {
        for i in 0..self.ucas.len() {
            if let Some(src) = self.edge(self.ucas[i].action.as_str()).map(|e| e.source.clone()) {
                self.ucas[i].source_controller = src;
            }
        }
    }
}
