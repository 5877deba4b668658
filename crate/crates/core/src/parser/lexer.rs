//! Tokenizer for program and query text.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Atom(String),
    Var(String),
    Number(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Slash,
    /// `:-`
    Neck,
    /// `:~`
    FuzzyNeck,
    /// `:#`
    FunctionDef,
    /// `=>`
    Arrow,
    /// `?-`
    QueryPrefix,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    /// Clause-terminating `.`
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Atom(a) => write!(f, "atom `{a}`"),
            Tok::Var(v) => write!(f, "variable `{v}`"),
            Tok::Number(n) => write!(f, "number `{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Neck => f.write_str("`:-`"),
            Tok::FuzzyNeck => f.write_str("`:~`"),
            Tok::FunctionDef => f.write_str("`:#`"),
            Tok::Arrow => f.write_str("`=>`"),
            Tok::QueryPrefix => f.write_str("`?-`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Le => f.write_str("`=<`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Ge => f.write_str("`>=`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::End => f.write_str("end of clause `.`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LexError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Lexer<'s> {
    chars: std::iter::Peekable<std::str::Chars<'s>>,
    rest: &'s str,
    line: usize,
    column: usize,
}

impl<'s> Lexer<'s> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.rest.chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.rest = &self.rest[c.len_utf8()..];
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn number(&mut self, negative: bool) -> Result<f64, String> {
        let mut text = String::new();
        if negative {
            text.push('-');
        }
        text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        if self.peek() == Some('.') && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            text.push('.');
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let after = self.peek2();
            let signed = matches!(after, Some('+' | '-'));
            let digit_follows = if signed {
                self.rest.chars().nth(2).is_some_and(|c| c.is_ascii_digit())
            } else {
                after.is_some_and(|c| c.is_ascii_digit())
            };
            if digit_follows {
                text.push('e');
                self.bump();
                if signed {
                    text.push(self.bump().unwrap());
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            }
        }
        let n: f64 = text.parse().map_err(|_| format!("malformed number `{text}`"))?;
        if n.is_finite() {
            Ok(n)
        } else {
            Err(format!("number `{text}` is out of range"))
        }
    }

    fn quoted(&mut self) -> Result<String, String> {
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err("unterminated quoted atom".into()),
                Some('\'') if self.peek() == Some('\'') => {
                    self.bump();
                    s.push('\'');
                }
                Some('\'') => return Ok(s),
                Some('\\') => match self.bump() {
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some(c @ ('\\' | '\'')) => s.push(c),
                    _ => return Err("unknown escape in quoted atom".into()),
                },
                Some(c) => s.push(c),
            }
        }
    }
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Tokenizes `src`. Lexical errors are reported and skipped so that later
/// clauses can still be checked.
pub(crate) fn tokenize(src: &str) -> (Vec<Token>, Vec<LexError>) {
    let mut lx = Lexer {
        chars: src.chars().peekable(),
        rest: src,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    while let Some(c) = lx.peek() {
        let (line, column) = (lx.line, lx.column);
        let mut push = |tok| tokens.push(Token { tok, line, column });
        match c {
            c if c.is_whitespace() => {
                lx.bump();
            }
            '%' => {
                lx.take_while(|c| c != '\n');
            }
            '/' if lx.peek2() == Some('*') => {
                lx.bump();
                lx.bump();
                let mut closed = false;
                while let Some(c) = lx.bump() {
                    if c == '*' && lx.peek() == Some('/') {
                        lx.bump();
                        closed = true;
                        break;
                    }
                }
                if !closed {
                    errors.push(LexError {
                        line,
                        column,
                        message: "unterminated block comment".into(),
                    });
                }
            }
            c if c.is_ascii_digit() => match lx.number(false) {
                Ok(n) => push(Tok::Number(n)),
                Err(message) => errors.push(LexError { line, column, message }),
            },
            '-' if lx.peek2().is_some_and(|c| c.is_ascii_digit()) => {
                lx.bump();
                match lx.number(true) {
                    Ok(n) => push(Tok::Number(n)),
                    Err(message) => errors.push(LexError { line, column, message }),
                }
            }
            c if c.is_lowercase() => push(Tok::Atom(lx.take_while(is_ident))),
            c if c.is_uppercase() || c == '_' => push(Tok::Var(lx.take_while(is_ident))),
            '\'' => {
                lx.bump();
                match lx.quoted() {
                    Ok(s) => push(Tok::Atom(s)),
                    Err(message) => errors.push(LexError { line, column, message }),
                }
            }
            _ => {
                lx.bump();
                let next = lx.peek();
                let two = |lx: &mut Lexer<'_>, tok| {
                    lx.bump();
                    tok
                };
                let tok = match (c, next) {
                    ('(', _) => Tok::LParen,
                    (')', _) => Tok::RParen,
                    ('[', _) => Tok::LBracket,
                    (']', _) => Tok::RBracket,
                    (',', _) => Tok::Comma,
                    ('/', _) => Tok::Slash,
                    ('.', _) => Tok::End,
                    (':', Some('-')) => two(&mut lx, Tok::Neck),
                    (':', Some('~')) => two(&mut lx, Tok::FuzzyNeck),
                    (':', Some('#')) => two(&mut lx, Tok::FunctionDef),
                    ('?', Some('-')) => two(&mut lx, Tok::QueryPrefix),
                    ('=', Some('>')) => two(&mut lx, Tok::Arrow),
                    ('=', Some('<')) => two(&mut lx, Tok::Le),
                    ('<', Some('=')) => two(&mut lx, Tok::Le),
                    ('>', Some('=')) => two(&mut lx, Tok::Ge),
                    ('=', _) => Tok::Eq,
                    ('<', _) => Tok::Lt,
                    ('>', _) => Tok::Gt,
                    _ => {
                        errors.push(LexError {
                            line,
                            column,
                            message: format!("unexpected character `{c}`"),
                        });
                        continue;
                    }
                };
                tokens.push(Token { tok, line, column });
            }
        }
    }
    (tokens, errors)
}
