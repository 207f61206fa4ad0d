use std::collections::BTreeSet;

use super::{is_valid_name, Formula, Proposition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown proposition {0:?}")]
    UnknownProposition(String),
    #[error("next operator X at byte {0} is not allowed here")]
    NextNotAllowed(usize),
}

/// Parser configuration. The default accepts any well-formed atom and allows `X`.
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Closed alphabet; `None` means open.
    pub alphabet: Option<BTreeSet<Proposition>>,
    pub allow_next: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { alphabet: None, allow_next: true }
    }
}

impl ParseOptions {
    pub fn closed(alphabet: BTreeSet<Proposition>) -> Self {
        ParseOptions { alphabet: Some(alphabet), allow_next: true }
    }

    pub fn without_next(mut self) -> Self {
        self.allow_next = false;
        self
    }
}

/// Parses with an open alphabet.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, &ParseOptions::default())
}

/// Precedence, loosest first: `->`, `|`, `&`, `U`, then the unary operators
/// `! F G X`. Binary operators are right-associative.
pub fn parse_with(text: &str, options: &ParseOptions) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, options, end: text.len() };
    let f = parser.implication()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Not,
    And,
    Or,
    Arrow,
    Until,
    Eventually,
    Always,
    Next,
    True,
    False,
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '!' | '¬' => Some(Tok::Not),
            '&' | '∧' => Some(Tok::And),
            '|' | '∨' => Some(Tok::Or),
            '→' => Some(Tok::Arrow),
            _ => None,
        };
        if let Some(t) = single {
            chars.next();
            out.push((i, t));
            continue;
        }
        if c == '-' {
            chars.next();
            match chars.peek() {
                Some(&(_, '>')) => {
                    chars.next();
                    out.push((i, Tok::Arrow));
                    continue;
                }
                _ => {
                    return Err(ParseError::Syntax { position: i + 1, expected: "'>' after '-'".into() })
                }
            }
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut word = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    word.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "U" => Tok::Until,
                "F" => Tok::Eventually,
                "G" => Tok::Always,
                "X" => Tok::Next,
                "true" => Tok::True,
                "false" => Tok::False,
                w if is_valid_name(w) => Tok::Ident(word),
                _ => {
                    return Err(ParseError::Syntax {
                        position: i,
                        expected: "operator or lowercase proposition name".into(),
                    })
                }
            };
            out.push((i, tok));
            continue;
        }
        return Err(ParseError::Syntax { position: i, expected: "formula token".into() });
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    options: &'a ParseOptions,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(i, _)| *i).unwrap_or(self.end)
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax { position: self.offset(), expected: expected.to_string() }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conjunction()?;
        if self.eat(&Tok::Or) {
            let rhs = self.disjunction()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.until()?;
        if self.eat(&Tok::And) {
            let rhs = self.conjunction()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Until) {
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Eventually) => {
                self.pos += 1;
                Ok(Formula::eventually(self.unary()?))
            }
            Some(Tok::Always) => {
                self.pos += 1;
                Ok(Formula::always(self.unary()?))
            }
            Some(Tok::Next) => {
                if !self.options.allow_next {
                    return Err(ParseError::NextNotAllowed(at));
                }
                self.pos += 1;
                Ok(Formula::next(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("proposition, constant, unary operator or '('"));
        };
        match tok {
            Tok::True => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Tok::False => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                let p = Proposition::new(&name).map_err(|_| self.error("proposition name"))?;
                if let Some(alphabet) = &self.options.alphabet {
                    if !alphabet.contains(&p) {
                        return Err(ParseError::UnknownProposition(name));
                    }
                }
                self.pos += 1;
                Ok(Formula::Atom(p))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.implication()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("')'"));
                }
                Ok(inner)
            }
            _ => Err(self.error("proposition, constant, unary operator or '('")),
        }
    }
}
