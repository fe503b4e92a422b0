use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    LBracket,
    RBracket,
    Colon,
    Comma,
    Star,
    Arrow,
    LParen,
    RParen,
    Ident(String),
    Int(String),
    SendIn,
    SendOut,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Star => "`*`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::SendIn => "`send-in`".into(),
            Tok::SendOut => "`send-out`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub pos: Pos,
}

/// On-demand tokenizer: nothing past the current parse point is ever read,
/// so the first reported error is always the first offending location.
pub(crate) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
    peeked: Option<Spanned>,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().peekable(),
            line: 1,
            column: 1,
            peeked: None,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    pub(crate) fn peek(&mut self) -> Result<&Spanned, ParseError> {
        if self.peeked.is_none() {
            let t = self.scan()?;
            self.peeked = Some(t);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    pub(crate) fn next(&mut self) -> Result<Spanned, ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.scan(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn scan(&mut self) -> Result<Spanned, ParseError> {
        self.skip_trivia();
        let pos = self.pos();
        let Some(c) = self.bump() else {
            return Ok(Spanned { tok: Tok::Eof, pos });
        };
        let tok = match c {
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' => {
                if self.chars.peek() == Some(&'>') {
                    self.bump();
                    Tok::Arrow
                } else {
                    return Err(ParseError::new(
                        pos.line,
                        pos.column,
                        "expected `->` after `-`",
                    ));
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::from(c);
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Int(s)
            }
            c if is_ident_char(c) => {
                let mut s = String::from(c);
                while let Some(&d) = self.chars.peek() {
                    if is_ident_char(d) {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if s == "send" && self.chars.peek() == Some(&'-') {
                    return self.send_keyword(pos);
                }
                Tok::Ident(s)
            }
            other => {
                return Err(ParseError::new(
                    pos.line,
                    pos.column,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        Ok(Spanned { tok, pos })
    }

    // `send-in` / `send-out`; the `send` prefix has already been read.
    fn send_keyword(&mut self, pos: Pos) -> Result<Spanned, ParseError> {
        self.bump();
        let mut word = String::new();
        while let Some(&d) = self.chars.peek() {
            if is_ident_char(d) {
                word.push(d);
                self.bump();
            } else {
                break;
            }
        }
        let tok = match word.as_str() {
            "in" => Tok::SendIn,
            "out" => Tok::SendOut,
            _ => {
                return Err(ParseError::new(
                    pos.line,
                    pos.column,
                    format!("unknown keyword `send-{word}`, expected `send-in` or `send-out`"),
                ))
            }
        };
        Ok(Spanned { tok, pos })
    }
}
