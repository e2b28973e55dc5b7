use crate::diagnostic::{Diagnostic, SourceSpan};
use crate::dsl::lexer::{Tok, Token};
use crate::model::{
    CausalFactor, CfCategory, Context, ControllerConstraint, DeclKind, Edge, EdgeKind, Entity, EntityKind,
    GuideCategory, GuideWord, Hazard, Identifier, Loss, ProcessModelVariable, Qualifier, StpaModel, SystemConstraint,
    UnsafeControlAction,
};

const TOP_LEVEL: &[&str] = &[
    "loss",
    "hazard",
    "constraint",
    "controller",
    "sensor",
    "actuator",
    "process",
    "environment",
    "action",
    "feedback",
    "variable",
    "uca",
    "cf",
    "controller_constraint",
];

/// Marker for a statement that was abandoned after reporting a diagnostic.
struct Abandon;

type PResult<T> = Result<T, Abandon>;

pub(crate) struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    model: &'a mut StpaModel,
    diags: &'a mut Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(tokens: &'a [Token], model: &'a mut StpaModel, diags: &'a mut Vec<Diagnostic>) -> Self {
        Parser {
            tokens,
            pos: 0,
            model,
            diags,
        }
    }

    pub(crate) fn run(mut self) {
        while !self.at_eof() {
            let start = self.pos;
            if self.statement().is_err() {
                self.recover(start);
            }
        }
    }

    fn at_eof(&self) -> bool {
        self.peek() == &Tok::Eof
    }

    fn cur(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek(&self) -> &Tok {
        &self.cur().tok
    }

    fn bump(&mut self) -> &Token {
        let i = self.pos.min(self.tokens.len() - 1);
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        &self.tokens[i]
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span.clone()
    }

    /// Skips to the next top-level keyword that starts a line.
    fn recover(&mut self, start: usize) {
        if self.pos == start {
            self.bump();
        }
        while !self.at_eof() {
            let t = self.cur();
            if t.line_start && matches!(&t.tok, Tok::Ident(w) if TOP_LEVEL.contains(&w.as_str())) {
                break;
            }
            self.bump();
        }
    }

    fn fail<T>(&mut self, message: String) -> PResult<T> {
        let span = self.cur().span.clone();
        self.diags.push(Diagnostic::error("parse/syntax", message, span));
        Err(Abandon)
    }

    fn expected<T>(&mut self, what: &str) -> PResult<T> {
        let found = self.peek().describe();
        self.fail(format!("expected {what}, found {found}"))
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(w) if w == word => {
                self.bump();
                Ok(())
            }
            _ => self.expected(&format!("'{word}'")),
        }
    }

    fn punct(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.expected(&tok.describe())
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn ident(&mut self) -> PResult<Identifier> {
        match self.peek().clone() {
            Tok::Ident(w) => {
                self.bump();
                Ok(Identifier::new(w))
            }
            _ => self.expected("an identifier"),
        }
    }

    fn string(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.expected("a quoted string"),
        }
    }

    /// `open item (, item)* ,? close`, possibly empty.
    fn list<T>(&mut self, open: Tok, close: Tok, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.punct(open)?;
        let mut out = Vec::new();
        while *self.peek() != close {
            out.push(item(self)?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.punct(close)?;
        Ok(out)
    }

    fn id_list(&mut self) -> PResult<Vec<Identifier>> {
        self.list(Tok::LBracket, Tok::RBracket, Self::ident)
    }

    fn non_empty_id_list(&mut self, message: impl FnOnce() -> String) -> PResult<Vec<Identifier>> {
        let start = self.cur().span.clone();
        let ids = self.id_list()?;
        if ids.is_empty() {
            let span = start.to(&self.prev_span());
            self.diags.push(Diagnostic::error("parse/empty-list", message(), span));
            return Err(Abandon);
        }
        Ok(ids)
    }

    fn enum_value<T>(&mut self, what: &str, lookup: impl Fn(&str) -> Option<T>, options: &[&str]) -> PResult<T> {
        let span = self.cur().span.clone();
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return self.expected(what),
        };
        match lookup(&word) {
            Some(v) => {
                self.bump();
                Ok(v)
            }
            None => {
                self.diags.push(Diagnostic::error(
                    "parse/unknown-keyword",
                    format!("unknown {what} '{word}'; expected one of: {}", options.join(", ")),
                    span,
                ));
                Err(Abandon)
            }
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let start = self.cur().span.clone();
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return self.expected("a declaration keyword"),
        };
        let kind = match word.as_str() {
            "loss" => self.loss()?,
            "hazard" => self.hazard()?,
            "constraint" => self.constraint()?,
            "action" | "feedback" => self.edge()?,
            "variable" => self.variable()?,
            "uca" => self.uca()?,
            "cf" => self.causal_factor()?,
            "controller_constraint" => self.controller_constraint()?,
            w => match EntityKind::from_keyword(w) {
                Some(k) => self.entity(k)?,
                None => {
                    self.diags.push(Diagnostic::error(
                        "parse/unknown-keyword",
                        format!("unknown keyword '{w}'"),
                        start,
                    ));
                    return Err(Abandon);
                }
            },
        };
        let span = start.to(&self.prev_span());
        self.model.spans.push(kind, span);
        Ok(())
    }

    fn loss(&mut self) -> PResult<DeclKind> {
        self.bump();
        let id = self.ident()?;
        let description = self.string()?;
        self.model.losses.push(Loss { id, description });
        Ok(DeclKind::Loss)
    }

    fn hazard(&mut self) -> PResult<DeclKind> {
        self.bump();
        let id = self.ident()?;
        let description = self.string()?;
        self.keyword("leads_to")?;
        let leads_to = self.non_empty_id_list(|| "hazard must reference at least one loss".to_owned())?;
        self.model.hazards.push(Hazard {
            id,
            description,
            leads_to,
        });
        Ok(DeclKind::Hazard)
    }

    fn constraint(&mut self) -> PResult<DeclKind> {
        self.bump();
        let id = self.ident()?;
        let description = self.string()?;
        self.keyword("mitigates")?;
        let mitigates = self.non_empty_id_list(|| "system constraint must mitigate at least one hazard".to_owned())?;
        self.model.constraints.push(SystemConstraint {
            id,
            description,
            mitigates,
        });
        Ok(DeclKind::Constraint)
    }

    fn entity(&mut self, kind: EntityKind) -> PResult<DeclKind> {
        self.bump();
        let id = self.ident()?;
        let label = self.string()?;
        self.model.entities.push(Entity::new(id, kind, label));
        Ok(DeclKind::Entity)
    }

    fn edge(&mut self) -> PResult<DeclKind> {
        let kind = if self.is_keyword("action") {
            EdgeKind::ControlAction
        } else {
            EdgeKind::Feedback
        };
        self.bump();
        let id = self.ident()?;
        let label = self.string()?;
        self.keyword("from")?;
        let source = self.ident()?;
        self.keyword("to")?;
        let target = self.ident()?;
        let mut via = Vec::new();
        if self.is_keyword("via") {
            self.bump();
            via = self.id_list()?;
        }
        let mut signals = Vec::new();
        if self.is_keyword("signals") {
            self.bump();
            signals = self.list(Tok::LBracket, Tok::RBracket, Self::string)?;
        }
        self.model.edges.push(Edge {
            id,
            kind,
            label,
            source,
            target,
            signals,
            via,
        });
        Ok(DeclKind::Edge)
    }

    fn variable(&mut self) -> PResult<DeclKind> {
        self.bump();
        let id = self.ident()?;
        self.keyword("of")?;
        let owner = self.ident()?;
        let label = self.string()?;
        let values = self.list(Tok::LBrace, Tok::RBrace, Self::string)?;
        self.model.variables.push(ProcessModelVariable {
            id,
            owner,
            label,
            values,
        });
        Ok(DeclKind::Variable)
    }

    fn uca(&mut self) -> PResult<DeclKind> {
        self.bump();
        let id = self.ident()?;
        self.keyword("action")?;
        self.punct(Tok::Equals)?;
        let action = self.ident()?;
        self.keyword("guide")?;
        self.punct(Tok::Equals)?;
        let category = self.enum_value(
            "guide word",
            GuideCategory::from_keyword,
            &GuideCategory::ALL.map(GuideCategory::keyword),
        )?;
        let mut qualifier = None;
        if self.is_keyword("qualifier") {
            self.bump();
            self.punct(Tok::Equals)?;
            qualifier = Some(self.enum_value(
                "qualifier",
                Qualifier::from_keyword,
                &Qualifier::ALL.map(Qualifier::keyword),
            )?);
        }
        let mut context = Context::new();
        if self.is_keyword("context") {
            self.bump();
            self.punct(Tok::LBrace)?;
            while matches!(self.peek(), Tok::Ident(_)) {
                let var_span = self.cur().span.clone();
                let var = self.ident()?;
                self.punct(Tok::Equals)?;
                let value = self.string()?;
                if context.assign(var.clone(), value).is_some() {
                    self.diags.push(Diagnostic::error(
                        "parse/duplicate-context-variable",
                        format!("variable {var} is assigned twice in the context of {id}"),
                        var_span,
                    ));
                    return Err(Abandon);
                }
                self.eat(&Tok::Comma);
            }
            self.punct(Tok::RBrace)?;
        }
        self.keyword("hazards")?;
        let hazards = self.non_empty_id_list(|| format!("{id} must reference at least one hazard"))?;
        let description = self.string()?;
        self.model.ucas.push(UnsafeControlAction {
            id,
            action,
            source_controller: Identifier::new(""),
            guide: GuideWord { category, qualifier },
            context,
            hazards,
            description,
        });
        Ok(DeclKind::Uca)
    }

    fn causal_factor(&mut self) -> PResult<DeclKind> {
        self.bump();
        let id = self.ident()?;
        self.keyword("category")?;
        self.punct(Tok::Equals)?;
        let category = self.enum_value(
            "causal-factor category",
            CfCategory::from_keyword,
            &CfCategory::ALL.map(CfCategory::keyword),
        )?;
        self.keyword("at")?;
        let located_at = self.ident()?;
        self.keyword("for")?;
        let ucas = self.non_empty_id_list(|| format!("{id} must reference at least one unsafe control action"))?;
        let description = self.string()?;
        self.model.causal_factors.push(CausalFactor {
            id,
            category,
            located_at,
            ucas,
            description,
        });
        Ok(DeclKind::CausalFactor)
    }

    fn controller_constraint(&mut self) -> PResult<DeclKind> {
        self.bump();
        let id = self.ident()?;
        self.keyword("from")?;
        let derived_from = self.ident()?;
        let description = self.string()?;
        self.model.controller_constraints.push(ControllerConstraint {
            id,
            derived_from,
            description,
        });
        Ok(DeclKind::ControllerConstraint)
    }
}
