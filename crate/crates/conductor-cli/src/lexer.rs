//! Tokenizer for the script language, tracking line/column spans.

use crate::ast::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    // punctuation
    Semi,
    Colon,
    Comma,
    Dot,
    Arrow,     // ->
    Tilde,     // ~
    Gt,        // >
    Pipe,      // |
    Eq,        // =
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    /// a raw polynomial expression captured verbatim (balanced, up to a
    /// delimiter); produced on demand by the parser, never by the lexer
    Raw(String),
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Semi => write!(f, ";"),
            Tok::Colon => write!(f, ":"),
            Tok::Comma => write!(f, ","),
            Tok::Dot => write!(f, "."),
            Tok::Arrow => write!(f, "->"),
            Tok::Tilde => write!(f, "~"),
            Tok::Gt => write!(f, ">"),
            Tok::Pipe => write!(f, "|"),
            Tok::Eq => write!(f, "="),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Raw(s) => write!(f, "{s}"),
            Tok::Eof => write!(f, "<end of input>"),
        }
    }
}

/// The character stream with position tracking; the parser drives it
/// directly so that polynomial expressions can be captured verbatim.
#[derive(Debug, Clone)]
pub struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    pub fn new(text: &str) -> Lexer {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    pub fn span(&self) -> Span {
        Span {
            line: self.line,
            col: self.col,
        }
    }

    fn bump_char(&mut self) -> Option<char> {
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

    fn peek_char(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub fn skip_ws_and_comments(&mut self) {
        loop {
            while self
                .peek_char()
                .map(|c| c.is_whitespace())
                .unwrap_or(false)
            {
                self.bump_char();
            }
            // line comments with '#' or '//'
            if self.peek_char() == Some('#')
                || (self.peek_char() == Some('/') && self.chars.get(self.pos + 1) == Some(&'/'))
            {
                while let Some(c) = self.peek_char() {
                    if c == '\n' {
                        break;
                    }
                    self.bump_char();
                }
                continue;
            }
            break;
        }
    }

    /// Next structural token.
    pub fn next_token(&mut self) -> (Tok, Span) {
        self.skip_ws_and_comments();
        let span = self.span();
        let Some(c) = self.peek_char() else {
            return (Tok::Eof, span);
        };
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(c) = self.peek_char() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    s.push(c);
                    self.bump_char();
                } else {
                    break;
                }
            }
            return (Tok::Ident(s), span);
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(c) = self.peek_char() {
                if c.is_ascii_digit() {
                    s.push(c);
                    self.bump_char();
                } else {
                    break;
                }
            }
            return (Tok::Int(s.parse().unwrap_or(0)), span);
        }
        self.bump_char();
        let tok = match c {
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '~' => Tok::Tilde,
            '>' => Tok::Gt,
            '|' => Tok::Pipe,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '-' => {
                if self.peek_char() == Some('>') {
                    self.bump_char();
                    Tok::Arrow
                } else {
                    // a bare minus can only start a signed integer here
                    if let Some(d) = self.peek_char() {
                        if d.is_ascii_digit() {
                            let mut s = String::from("-");
                            while let Some(c) = self.peek_char() {
                                if c.is_ascii_digit() {
                                    s.push(c);
                                    self.bump_char();
                                } else {
                                    break;
                                }
                            }
                            return (Tok::Int(s.parse().unwrap_or(0)), span);
                        }
                    }
                    Tok::Ident("-".into())
                }
            }
            other => Tok::Ident(other.to_string()),
        };
        (tok, span)
    }

    /// Captures a raw polynomial expression verbatim up to (not including)
    /// an unbalanced delimiter among `,`, `;`, `)`, `}`.
    pub fn capture_expr(&mut self) -> (String, Span) {
        self.skip_ws_and_comments();
        let span = self.span();
        let mut depth = 0usize;
        let mut out = String::new();
        while let Some(c) = self.peek_char() {
            match c {
                '(' => depth += 1,
                ')' => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                ',' | ';' | '}' if depth == 0 => break,
                _ => {}
            }
            out.push(c);
            self.bump_char();
        }
        (out.trim().to_string(), span)
    }

    pub fn at_eof(&mut self) -> bool {
        self.skip_ws_and_comments();
        self.peek_char().is_none()
    }
}
