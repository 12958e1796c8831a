//! Recursive descent parser for the concrete formula syntax.
//!
//! ```text
//! f ::= top | bot | PRED(VAR) | ~f | (f & f) | (f | f) | (f -> f)
//!     | [VAR:=AGENT] f | <VAR:=AGENT> f | K{VAR,...} f | Khat{VAR,...} f
//! ```
//!
//! Prefix operators bind tighter than the binary connectives, which must be
//! parenthesized. Inside one pair of parentheses a chain of the same `&` or
//! `|` is accepted and nests to the right.

use super::{AgentId, Formula, PredId, VarId, VarSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable `{var}` is free in the body of the knowledge operator at offset {position}")]
    FreeVariableUnderK { var: VarId, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::FreeVariableUnderK { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    LBrace,
    RBrace,
    Comma,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Define,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Define => "`:=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b if b.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'<' => Tok::LAngle,
            b'>' => Tok::RAngle,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b':' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Define
            }
            b if b.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_owned())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

/// Parses a formula, expanding sugar into the six primitive constructors.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let f = parser.formula()?;
    parser.expect(Tok::Eof)?;
    Ok(f)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn token(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if super::is_valid_token(&s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected {what}, found {}", other.describe())),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let start = self.offset();
        match self.bump() {
            Tok::Ident(word) => match word.as_str() {
                "top" => Ok(Formula::Top),
                "bot" => Ok(Formula::bot()),
                "K" | "Khat" => {
                    let vars = self.var_set()?;
                    let body = self.formula()?;
                    if let Some(var) = body.free_vars().into_iter().next() {
                        return Err(ParseError::FreeVariableUnderK { var, position: start });
                    }
                    Ok(if word == "K" {
                        Formula::Know(vars, Box::new(body))
                    } else {
                        Formula::Know(vars, Box::new(body.not())).not()
                    })
                }
                _ if super::is_valid_token(&word) => {
                    self.expect(Tok::LParen)?;
                    let var = self.token("a variable")?;
                    self.expect(Tok::RParen)?;
                    Ok(Formula::Atom(PredId::new(word), VarId::new(var)))
                }
                _ => Err(ParseError::Syntax {
                    position: start,
                    message: format!("`{word}` is not a keyword or a lowercase token"),
                }),
            },
            Tok::Tilde => Ok(self.formula()?.not()),
            Tok::LBracket => {
                let (var, agent) = self.binding()?;
                self.expect(Tok::RBracket)?;
                Ok(Formula::Assign(var, agent, Box::new(self.formula()?)))
            }
            Tok::LAngle => {
                let (var, agent) = self.binding()?;
                self.expect(Tok::RAngle)?;
                let body = self.formula()?;
                Ok(Formula::Assign(var, agent, Box::new(body.not())).not())
            }
            Tok::LParen => self.parenthesized(),
            other => Err(ParseError::Syntax {
                position: start,
                message: format!("expected a formula, found {}", other.describe()),
            }),
        }
    }

    fn parenthesized(&mut self) -> Result<Formula, ParseError> {
        let first = self.formula()?;
        let op = self.peek().clone();
        let result = match op {
            Tok::RParen => first,
            Tok::Arrow => {
                self.bump();
                first.implies(self.formula()?)
            }
            Tok::Amp | Tok::Pipe => {
                let mut items = vec![first];
                while *self.peek() == op {
                    self.bump();
                    items.push(self.formula()?);
                }
                if op == Tok::Amp {
                    Formula::conj(items)
                } else {
                    Formula::disj(items)
                }
            }
            other => return self.error(format!("expected `&`, `|`, `->` or `)`, found {}", other.describe())),
        };
        self.expect(Tok::RParen)?;
        Ok(result)
    }

    fn binding(&mut self) -> Result<(VarId, AgentId), ParseError> {
        let var = self.token("a variable")?;
        self.expect(Tok::Define)?;
        let agent = self.token("an agent")?;
        Ok((VarId::new(var), AgentId::new(agent)))
    }

    fn var_set(&mut self) -> Result<VarSet, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut vars = VarSet::new();
        loop {
            match self.peek() {
                Tok::RBrace => {
                    self.bump();
                    return Ok(vars);
                }
                Tok::Comma => {
                    self.bump();
                }
                _ => {
                    vars.insert(VarId::new(self.token("a variable or `}`")?));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clarification_ii() -> Formula {
        Formula::diamond(
            "x",
            "a",
            Formula::know(
                ["x"],
                Formula::assign(
                    "y",
                    "b",
                    Formula::know(["y"], Formula::diamond("z", "c", Formula::atom("p", "z"))),
                ),
            ),
        )
    }

    #[test]
    fn parses_clarification_ii() {
        assert_eq!(
            parse("<x:=a> K{x} [y:=b] K{y} <z:=c> p(z)").unwrap(),
            clarification_ii()
        );
    }

    #[test]
    fn empty_knowledge_set() {
        assert_eq!(
            parse("K{} top").unwrap(),
            Formula::Know(VarSet::new(), Box::new(Formula::Top))
        );
    }

    #[test]
    fn rejects_open_knowledge_body() {
        match parse("K{x} p(x)") {
            Err(ParseError::FreeVariableUnderK { var, position }) => {
                assert_eq!(var.as_str(), "x");
                assert_eq!(position, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("[x:=a] K{x} <y:=b> p(x)"),
            Err(ParseError::FreeVariableUnderK { position: 7, .. })
        ));
    }

    #[test]
    fn sugar_expands() {
        assert_eq!(parse("bot").unwrap(), Formula::bot());
        assert_eq!(
            parse("(p(x) -> q(y))").unwrap(),
            Formula::atom("p", "x").implies(Formula::atom("q", "y"))
        );
        assert_eq!(
            parse("Khat{x, y} top").unwrap(),
            Formula::khat(["x", "y"], Formula::top())
        );
        assert_eq!(
            parse("(top & bot & top)").unwrap(),
            Formula::top().and(Formula::bot().and(Formula::top()))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse("(p(x) & q(x)").unwrap_err();
        assert_eq!(err.position(), 12);
        assert!(matches!(
            parse("p(x) & q(x)"),
            Err(ParseError::Syntax { position: 5, .. })
        ));
        assert!(matches!(
            parse("[x=a] top"),
            Err(ParseError::Syntax { position: 2, .. })
        ));
        assert!(matches!(parse("P(x)"), Err(ParseError::Syntax { position: 0, .. })));
        assert!(matches!(parse("top $"), Err(ParseError::Syntax { position: 4, .. })));
        assert!(parse("[top:=a] top").is_err());
    }
}
