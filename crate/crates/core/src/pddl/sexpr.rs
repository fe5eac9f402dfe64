//! Tokenizer and s-expression reader for PDDL text.
//!
//! Atoms are lowercased on read; PDDL identifiers are case-insensitive.

use std::fmt;

use super::PddlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a, _) => Some(a),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            SExpr::Atom(..) => None,
        }
    }

    /// The head keyword of a list, if it starts with an atom.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(SExpr::as_atom)
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Reader<'a> {
    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<SExpr, PddlError> {
        self.skip_trivia();
        let pos = self.pos();
        match self.chars.peek().copied() {
            None => Err(PddlError::Syntax {
                pos,
                expected: "expression".into(),
                found: "end of input".into(),
            }),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, pos));
                        }
                        None => {
                            return Err(PddlError::Syntax {
                                pos: self.pos(),
                                expected: "')'".into(),
                                found: "end of input".into(),
                            })
                        }
                        _ => items.push(self.read()?),
                    }
                }
            }
            Some(')') => Err(PddlError::Syntax {
                pos,
                expected: "expression".into(),
                found: "')'".into(),
            }),
            Some(_) => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.extend(c.to_lowercase());
                    self.bump();
                }
                Ok(SExpr::Atom(atom, pos))
            }
        }
    }
}

/// Reads exactly one top-level expression; trailing non-trivia is an error.
pub fn read_one(text: &str) -> Result<SExpr, PddlError> {
    let mut r = Reader { chars: text.chars().peekable(), line: 1, col: 1 };
    let e = r.read()?;
    r.skip_trivia();
    if r.chars.peek().is_some() {
        return Err(PddlError::Syntax {
            pos: r.pos(),
            expected: "end of input".into(),
            found: "trailing text".into(),
        });
    }
    Ok(e)
}
