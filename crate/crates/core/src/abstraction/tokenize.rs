//! Lexer for the C/Java-like mini-language used by source units.
//!
//! Statements end at `;` (outside parentheses), `{` and `}`; every
//! non-comment token records the statement it belongs to.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Keyword,
    Identifier,
    StringLiteral,
    NumericLiteral,
    Punctuation,
    Comment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub statement_index: usize,
}

impl Token {
    pub fn new(text: impl Into<String>, kind: TokenKind, statement_index: usize) -> Self {
        Self {
            text: text.into(),
            kind,
            statement_index,
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "auto",
    "bool",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "extern",
    "false",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "inline",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "null",
    "package",
    "private",
    "protected",
    "public",
    "register",
    "return",
    "short",
    "signed",
    "sizeof",
    "static",
    "struct",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "true",
    "try",
    "typedef",
    "union",
    "unsigned",
    "var",
    "void",
    "volatile",
    "while",
];

/// Keywords that name a built-in type; an identifier after one is a declared variable.
pub const PRIMITIVE_TYPES: &[&str] = &[
    "auto", "bool", "boolean", "byte", "char", "double", "float", "int", "long", "short", "signed", "unsigned", "var",
    "void",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

const PUNCT3: &[&str] = &[">>>", "<<=", ">>=", "...", "->*"];
const PUNCT2: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "->", "::", "<<",
    ">>", "[]",
];
const PUNCT1: &str = "{}()[];,.<>=!+-*/%&|^~?:@#";

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c))
    }
}

/// Splits unit source text into tokens, comments included.
pub fn tokenize(source: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor::new(source);
    let mut out = Vec::new();
    let mut statement = 0usize;
    let mut paren_depth = 0usize;

    while let Some(c) = cur.peek(0) {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let (line, column) = (cur.line, cur.column);

        if cur.starts_with("//") {
            let mut text = String::new();
            while let Some(c) = cur.peek(0) {
                if c == '\n' {
                    break;
                }
                text.push(c);
                cur.bump();
            }
            out.push(Token::new(text, TokenKind::Comment, statement));
            continue;
        }
        if cur.starts_with("/*") {
            let mut text = String::new();
            text.push(cur.bump().unwrap());
            text.push(cur.bump().unwrap());
            loop {
                if cur.starts_with("*/") {
                    text.push(cur.bump().unwrap());
                    text.push(cur.bump().unwrap());
                    break;
                }
                match cur.bump() {
                    Some(c) => text.push(c),
                    None => {
                        return Err(Error::Unterminated {
                            what: "comment",
                            line,
                            column,
                        })
                    }
                }
            }
            out.push(Token::new(text, TokenKind::Comment, statement));
            continue;
        }

        let (text, kind) = if c == '"' || c == '\'' {
            let quote = c;
            let mut text = String::new();
            text.push(cur.bump().unwrap());
            loop {
                match cur.bump() {
                    Some('\\') => {
                        text.push('\\');
                        match cur.bump() {
                            Some(e) if e != '\n' => text.push(e),
                            _ => {
                                return Err(Error::Unterminated {
                                    what: "string literal",
                                    line,
                                    column,
                                })
                            }
                        }
                    }
                    Some(ch) if ch == quote => {
                        text.push(ch);
                        break;
                    }
                    Some('\n') | None => {
                        return Err(Error::Unterminated {
                            what: "string literal",
                            line,
                            column,
                        })
                    }
                    Some(ch) => text.push(ch),
                }
            }
            (text, TokenKind::StringLiteral)
        } else if c.is_ascii_digit() || (c == '.' && cur.peek(1).is_some_and(|d| d.is_ascii_digit())) {
            let mut text = String::new();
            let hex = cur.starts_with("0x") || cur.starts_with("0X");
            while let Some(ch) = cur.peek(0) {
                let exponent_sign = (ch == '+' || ch == '-') && !hex && text.ends_with(['e', 'E']);
                if ch.is_ascii_alphanumeric() || ch == '_' || ch == '.' || exponent_sign {
                    text.push(ch);
                    cur.bump();
                } else {
                    break;
                }
            }
            (text, TokenKind::NumericLiteral)
        } else if c.is_alphabetic() || c == '_' || c == '$' {
            let mut text = String::new();
            while let Some(ch) = cur.peek(0) {
                if ch.is_alphanumeric() || ch == '_' || ch == '$' {
                    text.push(ch);
                    cur.bump();
                } else {
                    break;
                }
            }
            let kind = if is_keyword(&text) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            (text, kind)
        } else if let Some(p) = PUNCT3.iter().chain(PUNCT2).find(|p| cur.starts_with(p)) {
            for _ in 0..p.chars().count() {
                cur.bump();
            }
            (p.to_string(), TokenKind::Punctuation)
        } else if PUNCT1.contains(c) {
            cur.bump();
            (c.to_string(), TokenKind::Punctuation)
        } else {
            return Err(Error::UnexpectedChar { ch: c, line, column });
        };

        let ends_statement = kind == TokenKind::Punctuation
            && match text.as_str() {
                "(" => {
                    paren_depth += 1;
                    false
                }
                ")" => {
                    paren_depth = paren_depth.saturating_sub(1);
                    false
                }
                ";" => paren_depth == 0,
                "{" | "}" => {
                    paren_depth = 0;
                    true
                }
                _ => false,
            };
        out.push(Token::new(text, kind, statement));
        if ends_statement {
            statement += 1;
        }
    }
    Ok(out)
}

/// Number of statements, i.e. distinct statement indices carried by code tokens.
pub fn statement_count(tokens: &[Token]) -> usize {
    tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Comment)
        .map(|t| t.statement_index + 1)
        .max()
        .unwrap_or(0)
}
