use thiserror::Error;

use crate::rule::RuleForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("invalid symbol `{0}`: expected an ASCII identifier starting with a letter (optionally after one reserved `_`)")]
    InvalidSymbol(String),

    #[error("multiset underflow on `{symbol}`: have {have}, need {need}")]
    Underflow {
        symbol: String,
        have: u64,
        need: u64,
    },

    #[error("multiset count overflow on `{symbol}`")]
    Overflow { symbol: String },

    #[error("rule `{rule}` consumes nothing; spontaneous rules are not allowed")]
    EmptyConsumed { rule: String },

    #[error("rule `{rule}` of form `{form}` {problem}")]
    HostMismatch {
        rule: String,
        form: RuleForm,
        problem: &'static str,
    },

    #[error("invalid rule id `{0}`")]
    InvalidRuleId(String),

    #[error("duplicate rule id `{0}`")]
    DuplicateRuleId(String),
}
