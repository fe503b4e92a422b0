use std::collections::HashSet;

use crate::error::CoreError;
use crate::membrane::Configuration;
use crate::rule::Rule;

/// A membrane structure together with the rules that drive it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    config: Configuration,
    rules: Vec<Rule>,
    name: Option<String>,
}

impl Model {
    /// Rule ids must be unique. Rules over labels absent from the structure
    /// are accepted; they are simply never enabled.
    pub fn new(config: Configuration, rules: Vec<Rule>) -> Result<Self, CoreError> {
        let mut seen = HashSet::new();
        for rule in &rules {
            if !seen.insert(rule.id()) {
                return Err(CoreError::DuplicateRuleId(rule.id().to_string()));
            }
        }
        Ok(Model {
            config,
            rules,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id() == id)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Same structure and rules, ignoring the name.
    pub fn structurally_eq(&self, other: &Model) -> bool {
        self.config == other.config && self.rules == other.rules
    }
}
