use std::fmt;

use super::ParseError;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// Identifier starting with an uppercase letter.
    Node(String),
    /// Identifier starting with a lowercase letter, digit or underscore.
    Atom(String),
    Colon,
    LAngle,
    RAngle,
    Equals,
    Quote,
    LParen,
    RParen,
    Period,
    /// `#name`; recognised only so the parser can reject it by name.
    Directive(String),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Node(s) => write!(f, "node `{s}`"),
            TokenKind::Atom(s) => write!(f, "atom `{s}`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::LAngle => f.write_str("`<`"),
            TokenKind::RAngle => f.write_str("`>`"),
            TokenKind::Equals => f.write_str("`==`"),
            TokenKind::Quote => f.write_str("`\"`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Period => f.write_str("`.`"),
            TokenKind::Directive(s) => write!(f, "directive `#{s}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '\'' | '+')
}

/// Splits DATR source into tokens. `%` starts a comment running to the end
/// of the line.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        let kind = match c {
            ':' => {
                bump(&mut chars);
                TokenKind::Colon
            }
            '<' => {
                bump(&mut chars);
                TokenKind::LAngle
            }
            '>' => {
                bump(&mut chars);
                TokenKind::RAngle
            }
            '"' => {
                bump(&mut chars);
                TokenKind::Quote
            }
            '(' => {
                bump(&mut chars);
                TokenKind::LParen
            }
            ')' => {
                bump(&mut chars);
                TokenKind::RParen
            }
            '.' => {
                bump(&mut chars);
                TokenKind::Period
            }
            '=' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    TokenKind::Equals
                } else {
                    // single `=` is DATR's extensional sentence form
                    return Err(ParseError::Unsupported {
                        pos,
                        what: "extensional `=` sentences".into(),
                    });
                }
            }
            '#' => {
                bump(&mut chars);
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    name.push(c);
                    bump(&mut chars);
                }
                TokenKind::Directive(name)
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    text.push(c);
                    bump(&mut chars);
                }
                if c.is_uppercase() {
                    TokenKind::Node(text)
                } else {
                    TokenKind::Atom(text)
                }
            }
            other => {
                return Err(ParseError::IllegalCharacter { pos, ch: other });
            }
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}
