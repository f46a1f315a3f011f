use super::{is_point_name, Formula, MsoError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Tilde,
    Amp,
    Bar,
    Arrow,
}

const RESERVED: [&str; 4] = ["ex", "all", "in", "E"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, MsoError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'=' => Tok::Eq,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() => {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(MsoError::ParseError {
                    position: i,
                    message: format!("unexpected character {:?}", text[i..].chars().next().unwrap_or('?')),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, MsoError> {
        Err(MsoError::ParseError {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), MsoError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn variable(&mut self, point: bool) -> Result<String, MsoError> {
        match self.peek() {
            Some(Tok::Ident(name)) if !RESERVED.contains(&name.as_str()) && is_point_name(name) == point => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ if point => self.error("expected a point variable"),
            _ => self.error("expected a set variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula, MsoError> {
        match self.peek().cloned() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(self.formula()?.not())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let left = self.formula()?;
                let combine: fn(Formula, Formula) -> Formula = match self.bump() {
                    Some(Tok::Amp) => Formula::and,
                    Some(Tok::Bar) => Formula::or,
                    Some(Tok::Arrow) => Formula::implies,
                    Some(Tok::RParen) => return Ok(left),
                    _ => {
                        self.pos -= 1;
                        return self.error("expected `&`, `|`, `->` or `)`");
                    }
                };
                let right = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(combine(left, right))
            }
            Some(Tok::Ident(word)) if word == "ex" || word == "all" => {
                self.pos += 1;
                let var = match self.peek() {
                    Some(Tok::Ident(name)) if !RESERVED.contains(&name.as_str()) => name.clone(),
                    _ => return self.error("expected a variable after quantifier"),
                };
                self.pos += 1;
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                let body = self.formula()?;
                Ok(if word == "ex" {
                    Formula::exists(&var, body)
                } else {
                    Formula::forall(&var, body)
                })
            }
            Some(Tok::Ident(word)) if word == "E" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(` after E")?;
                let a = self.variable(true)?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.variable(true)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::Edge(a, b))
            }
            Some(Tok::Ident(_)) => {
                let a = self.variable(true)?;
                match self.bump() {
                    Some(Tok::Eq) => Ok(Formula::Eq(a, self.variable(true)?)),
                    Some(Tok::Ident(w)) if w == "in" => Ok(Formula::Member(a, self.variable(false)?)),
                    _ => {
                        self.pos -= 1;
                        self.error("expected `=` or `in`")
                    }
                }
            }
            _ => self.error("expected a formula"),
        }
    }
}

/// Parses a formula without checking scope.
pub(crate) fn parse_open(text: &str) -> Result<Formula, MsoError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return p.error("trailing input");
    }
    Ok(f)
}

/// Parses a sentence: free variables and shadowed binders are scope errors.
pub fn parse(text: &str) -> Result<Formula, MsoError> {
    let f = parse_open(text)?;
    f.check_scope(&[])?;
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = MsoError;

    fn from_str(s: &str) -> Result<Self, MsoError> {
        parse(s)
    }
}

impl Formula {
    /// Parses a formula whose free variables must all appear in `context`.
    pub fn parse_in_context(text: &str, context: &[&str]) -> Result<Formula, MsoError> {
        let f = parse_open(text)?;
        let ctx: Vec<String> = context.iter().map(|s| s.to_string()).collect();
        f.check_scope(&ctx)?;
        Ok(f)
    }
}
