use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{DiagnosticCode, ParseDiagnostic};
use crate::model::SourceSpan;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Float(f64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Assign,
    Colon,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Bang,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Float(x) => format!("float {x:?}"),
            Tok::Str(_) => String::from("string literal"),
            Tok::Newline => String::from("end of line"),
            Tok::Eof => String::from("end of input"),
            other => format!("'{}'", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Assign => "=",
            Tok::Colon => ":",
            Tok::Arrow => "->",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Percent => "%",
            Tok::EqEq => "==",
            Tok::NotEq => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Bang => "!",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    file: Option<&'a str>,
    tokens: Vec<Token>,
    diags: Vec<ParseDiagnostic>,
}

/// Splits source text into tokens. Lexical errors are collected; the
/// offending characters are skipped so later lines still tokenize.
pub fn tokenize(file: Option<&str>, source: &str) -> (Vec<Token>, Vec<ParseDiagnostic>) {
    let mut lx = Lexer {
        chars: source.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        file,
        tokens: Vec::new(),
        diags: Vec::new(),
    };
    lx.run();
    (lx.tokens, lx.diags)
}

impl Lexer<'_> {
    fn span(&self, line: usize, column: usize, length: usize) -> SourceSpan {
        SourceSpan { file: self.file.map(String::from), line, column, length }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&mut self, line: usize, column: usize, length: usize, message: String) {
        let span = self.span(line, column, length.max(1));
        self.diags.push(ParseDiagnostic::error(DiagnosticCode::Lexical, message, span));
    }

    fn run(&mut self) {
        while let Some(c) = self.peek(0) {
            let (line, col, start) = (self.line, self.col, self.pos);
            let push = |lx: &mut Self, tok: Tok| {
                let len = lx.pos - start;
                let span = lx.span(line, col, len);
                lx.tokens.push(Token { tok, span });
            };
            match c {
                ' ' | '\t' | '\r' => {
                    self.bump();
                }
                '#' => {
                    while self.peek(0).is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                '\n' => {
                    self.bump();
                    push(self, Tok::Newline);
                }
                '"' => self.string(line, col, start),
                c if c.is_ascii_digit() => self.number(line, col, start),
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(c) = self.peek(0).filter(|c| c.is_alphanumeric() || *c == '_') {
                        s.push(c);
                        self.bump();
                    }
                    push(self, Tok::Ident(s));
                }
                _ => {
                    let two = (c, self.peek(1).unwrap_or('\0'));
                    let (tok, len) = match two {
                        ('-', '>') => (Some(Tok::Arrow), 2),
                        ('=', '=') => (Some(Tok::EqEq), 2),
                        ('!', '=') => (Some(Tok::NotEq), 2),
                        ('<', '=') => (Some(Tok::Le), 2),
                        ('>', '=') => (Some(Tok::Ge), 2),
                        ('&', '&') => (Some(Tok::AndAnd), 2),
                        ('|', '|') => (Some(Tok::OrOr), 2),
                        ('(', _) => (Some(Tok::LParen), 1),
                        (')', _) => (Some(Tok::RParen), 1),
                        (',', _) => (Some(Tok::Comma), 1),
                        ('.', _) => (Some(Tok::Dot), 1),
                        ('=', _) => (Some(Tok::Assign), 1),
                        (':', _) => (Some(Tok::Colon), 1),
                        ('+', _) => (Some(Tok::Plus), 1),
                        ('-', _) => (Some(Tok::Minus), 1),
                        ('*', _) => (Some(Tok::Star), 1),
                        ('/', _) => (Some(Tok::Slash), 1),
                        ('%', _) => (Some(Tok::Percent), 1),
                        ('<', _) => (Some(Tok::Lt), 1),
                        ('>', _) => (Some(Tok::Gt), 1),
                        ('!', _) => (Some(Tok::Bang), 1),
                        _ => (None, 1),
                    };
                    for _ in 0..len {
                        self.bump();
                    }
                    match tok {
                        Some(tok) => push(self, tok),
                        None => self.error(line, col, 1, format!("unexpected character '{c}'")),
                    }
                }
            }
        }
        let span = self.span(self.line, self.col, 0);
        self.tokens.push(Token { tok: Tok::Eof, span });
    }

    fn string(&mut self, line: usize, col: usize, start: usize) {
        self.bump();
        let mut s = String::new();
        loop {
            match self.peek(0) {
                None | Some('\n') => {
                    let len = self.pos - start;
                    self.error(line, col, len, String::from("unterminated string literal"));
                    return;
                }
                Some('"') => {
                    self.bump();
                    break;
                }
                Some('\\') => {
                    let (el, ec) = (self.line, self.col);
                    self.bump();
                    match self.peek(0) {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        other => {
                            let shown = other.map(|c| format!("\\{c}")).unwrap_or_else(|| String::from("\\"));
                            self.error(el, ec, 2, format!("invalid escape sequence '{shown}'"));
                        }
                    }
                    if self.peek(0).is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                Some(c) => {
                    s.push(c);
                    self.bump();
                }
            }
        }
        let span = self.span(line, col, self.pos - start);
        self.tokens.push(Token { tok: Tok::Str(s), span });
    }

    fn number(&mut self, line: usize, col: usize, start: usize) {
        let mut text = String::new();
        let mut is_float = false;
        while let Some(c) = self.peek(0).filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
        }
        if self.peek(0) == Some('.') && self.peek(1).is_some_and(|c| c.is_ascii_digit()) {
            is_float = true;
            text.push('.');
            self.bump();
            while let Some(c) = self.peek(0).filter(char::is_ascii_digit) {
                text.push(c);
                self.bump();
            }
        }
        if matches!(self.peek(0), Some('e' | 'E')) {
            let sign = matches!(self.peek(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if self.peek(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                is_float = true;
                for _ in 0..digit_at {
                    text.push(self.bump().unwrap_or('e'));
                }
                while let Some(c) = self.peek(0).filter(char::is_ascii_digit) {
                    text.push(c);
                    self.bump();
                }
            }
        }
        let len = self.pos - start;
        let tok = if is_float {
            match text.parse::<f64>() {
                Ok(x) if x.is_finite() => Tok::Float(x),
                _ => {
                    self.error(line, col, len, format!("float literal '{text}' is out of range"));
                    return;
                }
            }
        } else {
            match text.parse::<i64>() {
                Ok(i) => Tok::Int(i),
                Err(_) => {
                    self.error(line, col, len, format!("integer literal '{text}' does not fit in 64 bits"));
                    return;
                }
            }
        };
        let span = self.span(line, col, len);
        self.tokens.push(Token { tok, span });
    }
}
