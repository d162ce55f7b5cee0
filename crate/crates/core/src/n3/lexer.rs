use super::{ParseError, Position};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Var(String),
    Number(String),
    Str(String),
    True,
    False,
    A,
    PrefixKw,
    Dot,
    Semi,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Implies,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::IriRef(iri) => format!("<{iri}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Var(v) => format!("?{v}"),
            Tok::Number(n) => n.clone(),
            Tok::Str(_) => "string literal".into(),
            Tok::True => "true".into(),
            Tok::False => "false".into(),
            Tok::A => "'a'".into(),
            Tok::PrefixKw => "@prefix".into(),
            Tok::Dot => "'.'".into(),
            Tok::Semi => "';'".into(),
            Tok::Comma => "','".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Implies => "'=>'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Position,
}

pub(crate) fn is_local_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn is_local_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.'
}

pub(crate) fn is_prefix_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.i + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.i).copied()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Position {
        Position { line: self.line, column: self.col }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '\u{feff}' {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let pos = self.pos();
        let err = |msg: String| Err(ParseError::new(pos, msg));
        let Some(c) = self.peek() else {
            return Ok(Token { tok: Tok::Eof, pos });
        };
        let tok = match c {
            '.' => {
                self.bump();
                Tok::Dot
            }
            ';' => {
                self.bump();
                Tok::Semi
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '{' => {
                self.bump();
                Tok::LBrace
            }
            '}' => {
                self.bump();
                Tok::RBrace
            }
            '=' => {
                if self.peek_at(1) == Some('>') {
                    self.bump();
                    self.bump();
                    Tok::Implies
                } else {
                    return err("unsupported syntax '=' (only '=>' is accepted)".into());
                }
            }
            '<' => {
                if self.peek_at(1) == Some('=') {
                    return err("unsupported syntax '<=' (reverse implication)".into());
                }
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.peek() {
                        Some('>') => {
                            self.bump();
                            break;
                        }
                        Some(c) if !c.is_whitespace() && c != '<' && c != '"' => {
                            iri.push(c);
                            self.bump();
                        }
                        _ => return err("unterminated IRI reference".into()),
                    }
                }
                if iri.is_empty() {
                    return err("empty IRI reference".into());
                }
                Tok::IriRef(iri)
            }
            '?' => {
                self.bump();
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                if !crate::term::is_valid_variable_name(&name) {
                    return err(format!("invalid variable name ?{name}"));
                }
                Tok::Var(name)
            }
            '"' => {
                self.bump();
                let mut text = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('"') => text.push('"'),
                            Some('\\') => text.push('\\'),
                            Some('n') => text.push('\n'),
                            Some('r') => text.push('\r'),
                            Some('t') => text.push('\t'),
                            Some(other) => return err(format!("unsupported string escape \\{other}")),
                            None => return err("unterminated string literal".into()),
                        },
                        Some('\n') | None => return err("unterminated string literal".into()),
                        Some(c) => text.push(c),
                    }
                }
                if self.peek() == Some('@') || (self.peek() == Some('^') && self.peek_at(1) == Some('^')) {
                    return Err(ParseError::new(self.pos(), "language tags and datatypes are not supported".into()));
                }
                Tok::Str(text)
            }
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphabetic());
                if word == "prefix" {
                    Tok::PrefixKw
                } else {
                    return err(format!("unsupported directive @{word}"));
                }
            }
            '+' | '-' | '0'..='9' => {
                let mut text = String::new();
                if c == '+' || c == '-' {
                    if !self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                        return err(format!("unexpected character '{c}'"));
                    }
                    text.push(c);
                    self.bump();
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
                if self.peek() == Some('.') && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                    self.bump();
                    text.push('.');
                    text.push_str(&self.take_while(|c| c.is_ascii_digit()));
                }
                if matches!(self.peek(), Some('e') | Some('E')) {
                    return Err(ParseError::new(self.pos(), "exponent notation is not supported".into()));
                }
                Tok::Number(text)
            }
            c if c.is_ascii_alphabetic() || c == ':' => {
                let prefix = self.take_while(is_prefix_char);
                if self.peek() == Some(':') {
                    self.bump();
                    let mut local = String::new();
                    if self.peek().is_some_and(is_local_start) {
                        local = self.take_while(is_local_char);
                        // A trailing '.' terminates the statement, not the name.
                        while local.ends_with('.') {
                            local.pop();
                            self.i -= 1;
                            self.col -= 1;
                        }
                    }
                    Tok::PName { prefix, local }
                } else {
                    match prefix.as_str() {
                        "a" => Tok::A,
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => return err(format!("unexpected bare word '{prefix}'")),
                    }
                }
            }
            '[' | ']' => return err("blank nodes are not supported".into()),
            '_' if self.peek_at(1) == Some(':') => return err("blank nodes are not supported".into()),
            other => return err(format!("unexpected character '{other}'")),
        };
        Ok(Token { tok, pos })
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut lexer = Lexer { chars: text.chars().collect(), i: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        let token = lexer.next_token()?;
        let done = token.tok == Tok::Eof;
        out.push(token);
        if done {
            return Ok(out);
        }
    }
}
