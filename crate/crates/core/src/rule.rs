use std::fmt;

use serde::Serialize;

use crate::error::CoreError;
use crate::membrane::MembraneId;
use crate::multiset::Multiset;
use crate::symbol::Symbol;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RuleForm {
    /// Replace `consumed` by `produced` inside the subject.
    Rewrite,
    /// The subject enters a sibling labelled `host`.
    Endo,
    /// The subject leaves its `host`-labelled parent.
    Exo,
    /// Objects move from the subject's parent into the subject.
    SendIn,
    /// Objects move from the subject out to its parent.
    SendOut,
}

impl RuleForm {
    pub fn needs_host(self) -> bool {
        matches!(self, RuleForm::Endo | RuleForm::Exo)
    }

    /// Endo and exo move membranes; the rest only move objects.
    pub fn is_structural(self) -> bool {
        self.needs_host()
    }

    pub fn keyword(self) -> &'static str {
        match self {
            RuleForm::Rewrite => "in",
            RuleForm::Endo => "endo",
            RuleForm::Exo => "exo",
            RuleForm::SendIn => "send-in",
            RuleForm::SendOut => "send-out",
        }
    }
}

impl fmt::Display for RuleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A rule anchored to a membrane label.
///
/// `subject` is the locus of a rewrite, the mover of an endo/exo, and the
/// child membrane of a send-in/send-out. Where objects are taken from and
/// put to depends on the form; see [`Rule::consumes_from_parent`] and
/// [`Rule::produces_into_parent`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    id: String,
    form: RuleForm,
    subject: Symbol,
    host: Option<Symbol>,
    consumed: Multiset,
    produced: Multiset,
    promoter: Option<Multiset>,
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        form: RuleForm,
        subject: Symbol,
        host: Option<Symbol>,
        consumed: Multiset,
        produced: Multiset,
        promoter: Option<Multiset>,
    ) -> Result<Self, CoreError> {
        let id = id.into();
        if !Symbol::is_valid(&id) {
            return Err(CoreError::InvalidRuleId(id));
        }
        if consumed.is_empty() {
            return Err(CoreError::EmptyConsumed { rule: id });
        }
        match (form.needs_host(), host.is_some()) {
            (true, false) => {
                return Err(CoreError::HostMismatch {
                    rule: id,
                    form,
                    problem: "requires a host label",
                })
            }
            (false, true) => {
                return Err(CoreError::HostMismatch {
                    rule: id,
                    form,
                    problem: "must not name a host label",
                })
            }
            _ => {}
        }
        // An empty promoter is no promoter.
        let promoter = promoter.filter(|p| !p.is_empty());
        Ok(Rule {
            id,
            form,
            subject,
            host,
            consumed,
            produced,
            promoter,
        })
    }

    pub fn rewrite(
        id: impl Into<String>,
        locus: Symbol,
        consumed: Multiset,
        produced: Multiset,
    ) -> Result<Self, CoreError> {
        Rule::new(id, RuleForm::Rewrite, locus, None, consumed, produced, None)
    }

    pub fn endo(
        id: impl Into<String>,
        mover: Symbol,
        host: Symbol,
        consumed: Multiset,
        produced: Multiset,
    ) -> Result<Self, CoreError> {
        Rule::new(
            id,
            RuleForm::Endo,
            mover,
            Some(host),
            consumed,
            produced,
            None,
        )
    }

    pub fn exo(
        id: impl Into<String>,
        mover: Symbol,
        host: Symbol,
        consumed: Multiset,
        produced: Multiset,
    ) -> Result<Self, CoreError> {
        Rule::new(
            id,
            RuleForm::Exo,
            mover,
            Some(host),
            consumed,
            produced,
            None,
        )
    }

    pub fn send_in(
        id: impl Into<String>,
        child: Symbol,
        consumed: Multiset,
        produced: Multiset,
    ) -> Result<Self, CoreError> {
        Rule::new(id, RuleForm::SendIn, child, None, consumed, produced, None)
    }

    pub fn send_out(
        id: impl Into<String>,
        child: Symbol,
        consumed: Multiset,
        produced: Multiset,
    ) -> Result<Self, CoreError> {
        Rule::new(id, RuleForm::SendOut, child, None, consumed, produced, None)
    }

    pub fn with_promoter(mut self, promoter: Multiset) -> Self {
        self.promoter = Some(promoter).filter(|p| !p.is_empty());
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn form(&self) -> RuleForm {
        self.form
    }

    pub fn subject(&self) -> &Symbol {
        &self.subject
    }

    pub fn host(&self) -> Option<&Symbol> {
        self.host.as_ref()
    }

    pub fn consumed(&self) -> &Multiset {
        &self.consumed
    }

    pub fn produced(&self) -> &Multiset {
        &self.produced
    }

    pub fn promoter(&self) -> Option<&Multiset> {
        self.promoter.as_ref()
    }

    /// Only send-in draws its reactants from the subject's parent.
    pub fn consumes_from_parent(&self) -> bool {
        self.form == RuleForm::SendIn
    }

    /// Only send-out puts its products into the subject's parent.
    pub fn produces_into_parent(&self) -> bool {
        self.form == RuleForm::SendOut
    }
}

/// A rule bound to concrete membranes of one configuration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct RuleInstance {
    pub rule: String,
    pub subject: MembraneId,
    pub host: Option<MembraneId>,
    /// Parent of the subject when the instance was bound (`None` for the skin).
    pub parent: Option<MembraneId>,
}
