use super::lexer::{Pos, Token, TokenKind};
use super::theory::{Descriptor, Sentence, Theory};
use super::ParseError;
use crate::path::{Atom, AttrPath, NodeName};

/// Parses a token stream into a [`Theory`].
///
/// Accepts the spelled-out notation only: every sentence has an explicit
/// `<path> ==`. A node header `Node:` is shared by the sentences that follow
/// it until a `.` is followed by another header. Both layouts work:
///
/// ```text
/// Noun: <affix sing> == <affix plur> == s.
/// Noun: <affix sing> == .
///       <affix plur> == s.
/// ```
pub fn parse_theory(tokens: &[Token]) -> Result<Theory, ParseError> {
    let mut parser = Parser { tokens, at: 0 };
    let sentences = parser.theory()?;
    Theory::new(sentences)
}

struct Parser<'t> {
    tokens: &'t [Token],
    at: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.at)
    }

    fn peek_kind(&self, offset: usize) -> Option<&'t TokenKind> {
        self.tokens.get(self.at + offset).map(|t| &t.kind)
    }

    fn end_pos(&self) -> Pos {
        self.tokens
            .last()
            .map(|t| Pos {
                line: t.pos.line,
                column: t.pos.column + 1,
            })
            .unwrap_or(Pos { line: 1, column: 1 })
    }

    fn pos(&self) -> Pos {
        self.peek().map(|t| t.pos).unwrap_or_else(|| self.end_pos())
    }

    fn found(&self) -> String {
        self.peek()
            .map(|t| t.kind.to_string())
            .unwrap_or_else(|| "end of input".into())
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            expected: expected.into(),
            found: self.found(),
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.error(expected)),
        }
    }

    fn reject_directive(&self) -> Result<(), ParseError> {
        if let Some(Token {
            kind: TokenKind::Directive(name),
            pos,
        }) = self.peek()
        {
            return Err(ParseError::Unsupported {
                pos: *pos,
                what: format!("directive `#{name}`"),
            });
        }
        Ok(())
    }

    fn at_header(&self) -> bool {
        matches!(self.peek_kind(0), Some(TokenKind::Node(_)))
            && matches!(self.peek_kind(1), Some(TokenKind::Colon))
    }

    /// A `<...>` at the cursor that is followed by `==` starts a sentence.
    fn at_sentence_start(&self) -> bool {
        if !matches!(self.peek_kind(0), Some(TokenKind::LAngle)) {
            return false;
        }
        let mut i = self.at + 1;
        while let Some(t) = self.tokens.get(i) {
            match t.kind {
                TokenKind::RAngle => {
                    return matches!(
                        self.tokens.get(i + 1).map(|t| &t.kind),
                        Some(TokenKind::Equals)
                    )
                }
                TokenKind::Atom(_) => i += 1,
                _ => return false,
            }
        }
        false
    }

    fn theory(&mut self) -> Result<Vec<Sentence>, ParseError> {
        let mut sentences = Vec::new();
        let mut current: Option<NodeName> = None;
        while self.peek().is_some() {
            self.reject_directive()?;
            if current.is_none() {
                if !self.at_header() {
                    return Err(self.error("node header `Node:`"));
                }
                if let Some(TokenKind::Node(name)) = self.peek_kind(0) {
                    current = Some(NodeName::new(name));
                }
                self.at += 2;
            }
            let node = current.clone().expect("header parsed above");
            let lhs_path = self.path()?;
            self.expect(TokenKind::Equals, "`==`")?;
            let rhs = self.rhs()?;
            sentences.push(Sentence {
                node,
                lhs_path,
                rhs,
            });
            match self.peek_kind(0) {
                Some(TokenKind::Period) => {
                    self.at += 1;
                    if self.at_header() {
                        current = None;
                    }
                }
                Some(TokenKind::LAngle) => {}
                _ => return Err(self.error("`.` or another `<path> ==`")),
            }
        }
        Ok(sentences)
    }

    fn path(&mut self) -> Result<AttrPath, ParseError> {
        self.expect(TokenKind::LAngle, "`<`")?;
        let mut path = AttrPath::empty();
        loop {
            let Some(tok) = self.peek() else {
                return Err(self.error("`>`"));
            };
            match &tok.kind {
                TokenKind::Atom(a) => {
                    path.push(Atom::new(a));
                    self.at += 1;
                }
                TokenKind::RAngle => {
                    self.at += 1;
                    return Ok(path);
                }
                TokenKind::Quote | TokenKind::Node(_) | TokenKind::LAngle => {
                    return Err(ParseError::EvaluablePathUnsupported { pos: tok.pos });
                }
                _ => return Err(self.error("attribute atom or `>`")),
            }
        }
    }

    fn rhs(&mut self) -> Result<Vec<Descriptor>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.reject_directive()?;
            let Some(tok) = self.peek() else {
                return Ok(out);
            };
            let descriptor = match &tok.kind {
                TokenKind::Period => return Ok(out),
                TokenKind::LAngle if self.at_sentence_start() => return Ok(out),
                TokenKind::Atom(a) => {
                    self.at += 1;
                    Descriptor::AtomValue(Atom::new(a))
                }
                TokenKind::LParen => {
                    self.at += 1;
                    self.expect(TokenKind::RParen, "`)`")?;
                    Descriptor::EmptyValue
                }
                TokenKind::Node(_) => match self.node_ref()? {
                    (n, Some(p)) => Descriptor::LocalNodePath(n, p),
                    (n, None) => Descriptor::LocalNode(n),
                },
                TokenKind::LAngle => Descriptor::LocalPath(self.path()?),
                TokenKind::Quote => {
                    self.at += 1;
                    let d = match self.peek_kind(0) {
                        Some(TokenKind::Node(_)) => match self.node_ref()? {
                            (n, Some(p)) => Descriptor::GlobalNodePath(n, p),
                            (n, None) => Descriptor::GlobalNode(n),
                        },
                        Some(TokenKind::LAngle) => Descriptor::GlobalPath(self.path()?),
                        _ => return Err(self.error("node or path inside quotes")),
                    };
                    self.expect(TokenKind::Quote, "closing `\"`")?;
                    d
                }
                _ => return Err(self.error("descriptor, `.` or next sentence")),
            };
            out.push(descriptor);
        }
    }

    fn node_ref(&mut self) -> Result<(NodeName, Option<AttrPath>), ParseError> {
        let Some(TokenKind::Node(name)) = self.peek_kind(0) else {
            return Err(self.error("node name"));
        };
        let node = NodeName::new(name);
        self.at += 1;
        if matches!(self.peek_kind(0), Some(TokenKind::Colon)) {
            self.at += 1;
            Ok((node, Some(self.path()?)))
        } else {
            Ok((node, None))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_source, tokenize};
    use super::*;

    fn p(s: &str) -> AttrPath {
        AttrPath::parse_words(s)
    }

    #[test]
    fn single_local_path_sentence() {
        let th = parse_source("N:<a> == <a>.").unwrap();
        assert_eq!(th.sentences().len(), 1);
        assert_eq!(th.sentences()[0].rhs, vec![Descriptor::LocalPath(p("a"))]);
    }

    #[test]
    fn evaluable_path_is_rejected() {
        let err = parse_source(r#"N:<a> == N:<"X:<b>" c>."#).unwrap_err();
        assert!(matches!(err, ParseError::EvaluablePathUnsupported { .. }));
    }

    #[test]
    fn duplicate_lhs_is_an_error() {
        let err = parse_source("N:<a> == x.\nN:<a> == y.").unwrap_err();
        assert_eq!(
            err,
            ParseError::DuplicateLhs {
                node: "N".into(),
                path: "<a>".into()
            }
        );
    }

    #[test]
    fn all_descriptor_forms() {
        let th = parse_source(r#"N:<a> == () x M:<b c> M <d> "M:<e>" "M" "<f>"."#).unwrap();
        let m = NodeName::new("M");
        assert_eq!(
            th.sentences()[0].rhs,
            vec![
                Descriptor::EmptyValue,
                Descriptor::AtomValue(Atom::new("x")),
                Descriptor::LocalNodePath(m.clone(), p("b c")),
                Descriptor::LocalNode(m.clone()),
                Descriptor::LocalPath(p("d")),
                Descriptor::GlobalNodePath(m.clone(), p("e")),
                Descriptor::GlobalNode(m),
                Descriptor::GlobalPath(p("f")),
            ]
        );
    }

    #[test]
    fn block_layout_without_inner_periods() {
        let th = parse_source(
            "Noun: <orth> == \"<root>\" \"<affix>\" <affix sing> == <affix plur> == s.",
        )
        .unwrap();
        assert_eq!(th.sentences().len(), 3);
        assert!(th.sentences()[1].rhs.is_empty());
        assert_eq!(th.sentences()[2].lhs_path, p("affix plur"));
    }

    #[test]
    fn directive_is_unsupported() {
        let err = parse_source("#vars $x.").unwrap_err();
        assert!(matches!(
            err,
            ParseError::IllegalCharacter { .. } | ParseError::Unsupported { .. }
        ));
        let err = parse_source("#show <a>.").unwrap_err();
        assert!(matches!(err, ParseError::Unsupported { .. }));
    }

    #[test]
    fn missing_period_reports_position() {
        let err = parse_source("N:<a> == x").unwrap_err();
        match err {
            ParseError::Syntax {
                expected, found, ..
            } => {
                assert!(expected.contains('.'));
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sentence_without_header_is_rejected() {
        let tokens = tokenize("<a> == x.").unwrap();
        assert!(matches!(
            parse_theory(&tokens),
            Err(ParseError::Syntax { .. })
        ));
    }
}
