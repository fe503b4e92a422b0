use std::collections::BTreeSet;
use std::fmt;

use mmsim_core::{Model, RuleForm, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// A rule names a label no membrane carries; the rule can never fire.
    AbsentLabel { rule: String, label: Symbol },
    /// Produced somewhere, never consumed or used as a promoter, and not
    /// present initially.
    DeadSymbol { symbol: Symbol, rule: String },
    /// `endo X into X`: a membrane cannot enter itself.
    SelfEntry { rule: String },
}

impl Warning {
    /// The rule the warning is attached to.
    pub fn rule(&self) -> &str {
        match self {
            Warning::AbsentLabel { rule, .. }
            | Warning::DeadSymbol { rule, .. }
            | Warning::SelfEntry { rule } => rule,
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::AbsentLabel { rule, label } => {
                write!(f, "rule `{rule}` refers to label `{label}`, which no membrane carries")
            }
            Warning::DeadSymbol { symbol, rule } => write!(
                f,
                "symbol `{symbol}` (produced by rule `{rule}`) is never consumed and never present initially"
            ),
            Warning::SelfEntry { rule } => {
                write!(f, "rule `{rule}` moves a membrane into a sibling with its own label")
            }
        }
    }
}

pub fn lint(model: &Model) -> Vec<Warning> {
    let walk = model.config().walk();
    let labels: BTreeSet<&Symbol> = walk.iter().map(|(m, _)| &m.label).collect();
    let initial: BTreeSet<&Symbol> = walk
        .iter()
        .flat_map(|(m, _)| m.contents.symbols())
        .collect();
    let used: BTreeSet<&Symbol> = model
        .rules()
        .iter()
        .flat_map(|r| {
            r.consumed()
                .symbols()
                .chain(r.promoter().into_iter().flat_map(|p| p.symbols()))
        })
        .collect();

    let mut warnings = Vec::new();
    let mut dead_reported = BTreeSet::new();
    for rule in model.rules() {
        for label in std::iter::once(rule.subject()).chain(rule.host()) {
            if !labels.contains(label) {
                warnings.push(Warning::AbsentLabel {
                    rule: rule.id().to_string(),
                    label: label.clone(),
                });
            }
        }
        if rule.form() == RuleForm::Endo && rule.host() == Some(rule.subject()) {
            warnings.push(Warning::SelfEntry {
                rule: rule.id().to_string(),
            });
        }
        for symbol in rule.produced().symbols() {
            if !used.contains(symbol) && !initial.contains(symbol) && dead_reported.insert(symbol) {
                warnings.push(Warning::DeadSymbol {
                    symbol: symbol.clone(),
                    rule: rule.id().to_string(),
                });
            }
        }
    }
    warnings
}
