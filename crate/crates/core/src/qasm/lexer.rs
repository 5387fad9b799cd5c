use std::fmt;

use super::{QasmError, QasmErrorKind, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Int(String),
    Real(String),
    Str(String),
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Arrow,
    EqEq,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) | TokenKind::Int(s) | TokenKind::Real(s) => f.write_str(s),
            TokenKind::Str(s) => write!(f, "\"{s}\""),
            TokenKind::Semicolon => f.write_str(";"),
            TokenKind::Comma => f.write_str(","),
            TokenKind::LBracket => f.write_str("["),
            TokenKind::RBracket => f.write_str("]"),
            TokenKind::LParen => f.write_str("("),
            TokenKind::RParen => f.write_str(")"),
            TokenKind::LBrace => f.write_str("{"),
            TokenKind::RBrace => f.write_str("}"),
            TokenKind::Arrow => f.write_str("->"),
            TokenKind::EqEq => f.write_str("=="),
            TokenKind::Plus => f.write_str("+"),
            TokenKind::Minus => f.write_str("-"),
            TokenKind::Star => f.write_str("*"),
            TokenKind::Slash => f.write_str("/"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

/// Splits `text` into tokens, dropping whitespace and `//` comments.
/// The returned list always ends with [`TokenKind::Eof`].
pub fn tokenize(text: &str) -> Result<Vec<Token>, QasmError> {
    let mut lexer = Lexer {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    loop {
        let token = lexer.next_token()?;
        let done = token.kind == TokenKind::Eof;
        tokens.push(token);
        if done {
            return Ok(tokens);
        }
    }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> SourceSpan {
        SourceSpan {
            line: self.line,
            column: self.column,
        }
    }

    fn skip_trivia(&mut self) {
        loop {
            match (self.peek(), self.peek_at(1)) {
                (Some(c), _) if c.is_whitespace() => {
                    self.bump();
                }
                (Some('/'), Some('/')) => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool, out: &mut String) {
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
    }

    fn next_token(&mut self) -> Result<Token, QasmError> {
        self.skip_trivia();
        let span = self.span();
        let Some(c) = self.peek() else {
            return Ok(Token {
                kind: TokenKind::Eof,
                span,
            });
        };
        let kind = match c {
            ';' | ',' | '[' | ']' | '(' | ')' | '{' | '}' | '+' | '*' | '/' => {
                self.bump();
                match c {
                    ';' => TokenKind::Semicolon,
                    ',' => TokenKind::Comma,
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    '+' => TokenKind::Plus,
                    '*' => TokenKind::Star,
                    _ => TokenKind::Slash,
                }
            }
            '-' => {
                self.bump();
                if self.peek() == Some('>') {
                    self.bump();
                    TokenKind::Arrow
                } else {
                    TokenKind::Minus
                }
            }
            '=' if self.peek_at(1) == Some('=') => {
                self.bump();
                self.bump();
                TokenKind::EqEq
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                self.take_while(|c| c != '"' && c != '\n', &mut s);
                if self.bump() != Some('"') {
                    return Err(QasmError::new(span, QasmErrorKind::UnterminatedString));
                }
                TokenKind::Str(s)
            }
            c if c.is_ascii_digit()
                || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                self.number()
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                self.take_while(|c| c.is_ascii_alphanumeric() || c == '_', &mut s);
                TokenKind::Ident(s)
            }
            other => {
                return Err(QasmError::new(span, QasmErrorKind::UnexpectedChar(other)));
            }
        };
        Ok(Token { kind, span })
    }

    fn number(&mut self) -> TokenKind {
        let mut s = String::new();
        self.take_while(|c| c.is_ascii_digit(), &mut s);
        let mut real = false;
        if self.peek() == Some('.') {
            real = true;
            s.push('.');
            self.bump();
            self.take_while(|c| c.is_ascii_digit(), &mut s);
        }
        let exponent_follows = matches!(self.peek(), Some('e' | 'E'))
            && match self.peek_at(1) {
                Some(d) if d.is_ascii_digit() => true,
                Some('+' | '-') => self.peek_at(2).is_some_and(|d| d.is_ascii_digit()),
                _ => false,
            };
        if exponent_follows {
            real = true;
            s.push(self.bump().unwrap_or('e'));
            if let Some(sign @ ('+' | '-')) = self.peek() {
                s.push(sign);
                self.bump();
            }
            self.take_while(|c| c.is_ascii_digit(), &mut s);
        }
        if real {
            TokenKind::Real(s)
        } else {
            TokenKind::Int(s)
        }
    }
}
