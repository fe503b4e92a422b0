use std::collections::HashMap;

use mmsim_core::{Configuration, Layout, Model, Multiset, Rule, RuleForm, Symbol};

use crate::error::ParseError;
use crate::lexer::{Lexer, Pos, Spanned, Tok};

/// Nesting deeper than this is rejected instead of recursing further.
pub const MAX_DEPTH: usize = 256;

/// Where each rule was declared, for positioned diagnostics after parsing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceMap {
    rule_lines: HashMap<String, usize>,
}

impl SourceMap {
    pub fn rule_line(&self, id: &str) -> Option<usize> {
        self.rule_lines.get(id).copied()
    }
}

pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    parse_model_with_source_map(text).map(|(m, _)| m)
}

/// Accepts raw bytes; invalid UTF-8 is reported at the offending byte.
pub fn parse_model_bytes(bytes: &[u8]) -> Result<Model, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_model(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            // `valid` is well-formed by construction.
            let prefix = std::str::from_utf8(valid).unwrap_or_default();
            let line = prefix.matches('\n').count() + 1;
            let column = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(ParseError::new(line, column, "invalid UTF-8"))
        }
    }
}

pub fn parse_model_with_source_map(text: &str) -> Result<(Model, SourceMap), ParseError> {
    let mut p = Parser {
        lx: Lexer::new(text),
    };
    let layout = p.membrane(0)?;
    let mut rules = Vec::new();
    let mut source = SourceMap::default();
    loop {
        let t = p.lx.next()?;
        match &t.tok {
            Tok::Eof => break,
            Tok::Ident(w) if w == "rule" => {
                let (rule, id_pos) = p.rule()?;
                if source.rule_lines.contains_key(rule.id()) {
                    return Err(ParseError::new(
                        id_pos.line,
                        id_pos.column,
                        format!("duplicate rule id `{}`", rule.id()),
                    ));
                }
                source.rule_lines.insert(rule.id().to_string(), t.pos.line);
                rules.push(rule);
            }
            other => return Err(unexpected(&t, other, "`rule` or end of input")),
        }
    }
    let config = Configuration::from_layout(&layout);
    let model = Model::new(config, rules).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    Ok((model, source))
}

fn unexpected(t: &Spanned, tok: &Tok, expected: &str) -> ParseError {
    ParseError::new(
        t.pos.line,
        t.pos.column,
        format!("expected {expected}, found {}", tok.describe()),
    )
}

struct Parser<'a> {
    lx: Lexer<'a>,
}

impl Parser<'_> {
    fn expect(&mut self, want: Tok) -> Result<Spanned, ParseError> {
        let t = self.lx.next()?;
        if t.tok == want {
            Ok(t)
        } else {
            Err(unexpected(&t, &t.tok, &want.describe()))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let t = self.lx.next()?;
        match &t.tok {
            Tok::Ident(w) if w == word => Ok(()),
            other => Err(unexpected(&t, other, &format!("`{word}`"))),
        }
    }

    fn symbol(&mut self, what: &str) -> Result<(Symbol, Pos), ParseError> {
        let t = self.lx.next()?;
        match &t.tok {
            Tok::Ident(name) => Symbol::new(name.as_str()).map(|s| (s, t.pos)).map_err(|_| {
                ParseError::new(
                    t.pos.line,
                    t.pos.column,
                    format!("malformed {what} `{name}`"),
                )
            }),
            other => Err(unexpected(&t, other, what)),
        }
    }

    fn membrane(&mut self, depth: usize) -> Result<Layout, ParseError> {
        let open = self.expect(Tok::LBracket)?;
        if depth >= MAX_DEPTH {
            return Err(ParseError::new(
                open.pos.line,
                open.pos.column,
                format!("membranes nested deeper than {MAX_DEPTH}"),
            ));
        }
        let (label, _) = self.symbol("membrane label")?;
        let mut layout = Layout::new(label);
        if self.lx.peek()?.tok == Tok::Colon {
            self.lx.next()?;
            if matches!(self.lx.peek()?.tok, Tok::Ident(_)) {
                layout.contents = self.contents()?;
            }
        }
        loop {
            match self.lx.peek()?.tok {
                Tok::LBracket => layout.children.push(self.membrane(depth + 1)?),
                Tok::RBracket => {
                    self.lx.next()?;
                    return Ok(layout);
                }
                _ => {
                    let t = self.lx.next()?;
                    return Err(unexpected(&t, &t.tok, "`[` or `]`"));
                }
            }
        }
    }

    fn contents(&mut self) -> Result<Multiset, ParseError> {
        let mut ms = Multiset::new();
        loop {
            let (symbol, pos) = self.symbol("object symbol")?;
            let mut count = 1u64;
            if self.lx.peek()?.tok == Tok::Star {
                self.lx.next()?;
                let t = self.lx.next()?;
                count = match &t.tok {
                    Tok::Int(digits) => digits.parse::<u64>().map_err(|_| {
                        ParseError::new(
                            t.pos.line,
                            t.pos.column,
                            format!("count `{digits}` is too large"),
                        )
                    })?,
                    other => return Err(unexpected(&t, other, "a count")),
                };
                if count == 0 {
                    return Err(ParseError::new(
                        t.pos.line,
                        t.pos.column,
                        "counts must be at least 1",
                    ));
                }
            }
            ms.insert(symbol, count)
                .map_err(|e| ParseError::new(pos.line, pos.column, e.to_string()))?;
            if self.lx.peek()?.tok == Tok::Comma {
                self.lx.next()?;
            } else {
                return Ok(ms);
            }
        }
    }

    fn rhs(&mut self) -> Result<Multiset, ParseError> {
        if self.lx.peek()?.tok == Tok::LParen {
            self.lx.next()?;
            self.expect(Tok::RParen)?;
            Ok(Multiset::new())
        } else {
            self.contents()
        }
    }

    // Called after the `rule` keyword.
    fn rule(&mut self) -> Result<(Rule, Pos), ParseError> {
        let t = self.lx.next()?;
        let (id, id_pos) = match &t.tok {
            Tok::Ident(name) if Symbol::is_valid(name) => (name.clone(), t.pos),
            Tok::Ident(name) => {
                return Err(ParseError::new(
                    t.pos.line,
                    t.pos.column,
                    format!("malformed rule id `{name}`"),
                ))
            }
            other => return Err(unexpected(&t, other, "rule id")),
        };
        self.expect(Tok::Colon)?;

        let head = self.lx.next()?;
        let form = match &head.tok {
            Tok::Ident(w) if w == "in" => RuleForm::Rewrite,
            Tok::Ident(w) if w == "endo" => RuleForm::Endo,
            Tok::Ident(w) if w == "exo" => RuleForm::Exo,
            Tok::SendIn => RuleForm::SendIn,
            Tok::SendOut => RuleForm::SendOut,
            other => {
                return Err(unexpected(
                    &head,
                    other,
                    "`in`, `endo`, `exo`, `send-in` or `send-out`",
                ))
            }
        };
        let (subject, _) = self.symbol("membrane label")?;
        let host = match form {
            RuleForm::Endo => {
                self.keyword("into")?;
                Some(self.symbol("membrane label")?.0)
            }
            RuleForm::Exo => {
                self.keyword("from")?;
                Some(self.symbol("membrane label")?.0)
            }
            _ => None,
        };
        self.expect(Tok::Colon)?;
        let consumed = self.contents()?;
        self.expect(Tok::Arrow)?;
        let produced = self.rhs()?;
        let promoter = match &self.lx.peek()?.tok {
            Tok::Ident(w) if w == "if" => {
                self.lx.next()?;
                Some(self.contents()?)
            }
            _ => None,
        };
        let rule = Rule::new(id, form, subject, host, consumed, produced, promoter)
            .map_err(|e| ParseError::new(head.pos.line, head.pos.column, e.to_string()))?;
        Ok((rule, id_pos))
    }
}
