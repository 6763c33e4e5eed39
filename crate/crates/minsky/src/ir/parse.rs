//! Parser for the textual program format.
//!
//! ```text
//! program := stmt (';' stmt)* | /*empty*/
//! stmt    := 'inc' target | 'dec' target | 'test' target
//!          | 'loop' '{' program '}'
//!          | 'choice' '{' program '}' ('or' '{' program '}')+
//!          | 'repeat' INT '{' program '}'
//!          | 'skip'
//! target  := ident | '{' ident (',' ident)* '}'
//! ```
//!
//! UTF-8 with `#` line comments. The braced target form is sugar for a series
//! of single commands. Sequences and choices right-associate.

use super::{CounterId, Program};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    LBrace,
    RBrace,
    Semi,
    Comma,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self, ch: char) {
        self.pos += ch.len_utf8();
        if ch == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(ch) = self.src[self.pos..].chars().next() {
            if ch.is_whitespace() {
                self.bump(ch);
                continue;
            }
            if ch == '#' {
                while let Some(c) = self.src[self.pos..].chars().next() {
                    self.bump(c);
                    if c == '\n' {
                        break;
                    }
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match ch {
                '{' => {
                    self.bump(ch);
                    Tok::LBrace
                }
                '}' => {
                    self.bump(ch);
                    Tok::RBrace
                }
                ';' => {
                    self.bump(ch);
                    Tok::Semi
                }
                ',' => {
                    self.bump(ch);
                    Tok::Comma
                }
                c if c.is_ascii_digit() => {
                    let start = self.pos;
                    while let Some(c) = self.src[self.pos..].chars().next() {
                        if c.is_ascii_digit() {
                            self.bump(c);
                        } else {
                            break;
                        }
                    }
                    let text = &self.src[start..self.pos];
                    let value = text
                        .parse::<u64>()
                        .map_err(|_| self.error(format!("integer {text} out of range")))?;
                    Tok::Int(value)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = self.pos;
                    while let Some(c) = self.src[self.pos..].chars().next() {
                        if c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | ':') {
                            self.bump(c);
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(self.src[start..self.pos].to_string())
                }
                c => return Err(self.error(format!("unexpected character {c:?}"))),
            };
            out.push(Spanned { tok, line, col });
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error_here(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.end_line, self.end_col));
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self, expected: &str) -> Result<Spanned, ParseError> {
        let s = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.error_here(format!("expected {expected}, found end of input")))?;
        self.pos += 1;
        Ok(s)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let s = self.next(what)?;
        if s.tok == tok {
            Ok(())
        } else {
            Err(ParseError {
                line: s.line,
                col: s.col,
                msg: format!("expected {what}, found {:?}", s.tok),
            })
        }
    }

    /// program := ε | stmt (';' stmt)*
    fn program(&mut self) -> Result<Program, ParseError> {
        let mut stmts: Vec<Program> = Vec::new();
        if matches!(self.peek(), None | Some(Tok::RBrace)) {
            return Ok(Program::Skip);
        }
        loop {
            self.stmt(&mut stmts)?;
            if matches!(self.peek(), Some(Tok::Semi)) {
                self.pos += 1;
            } else {
                break;
            }
        }
        // Keep explicit skips: `skip; inc x` parses to Seq(Skip, Inc x).
        Ok(stmts
            .into_iter()
            .rev()
            .reduce(|acc, p| Program::Seq(Box::new(p), Box::new(acc)))
            .unwrap_or(Program::Skip))
    }

    fn stmt(&mut self, out: &mut Vec<Program>) -> Result<(), ParseError> {
        let s = self.next("a statement")?;
        let kw = match &s.tok {
            Tok::Ident(w) => w.as_str(),
            other => {
                return Err(ParseError {
                    line: s.line,
                    col: s.col,
                    msg: format!("expected a statement, found {other:?}"),
                })
            }
        };
        match kw {
            "inc" | "dec" | "test" => {
                let targets = self.targets()?;
                for c in targets {
                    out.push(match kw {
                        "inc" => Program::Inc(c),
                        "dec" => Program::Dec(c),
                        _ => Program::Test(c),
                    });
                }
            }
            "loop" => {
                self.expect(Tok::LBrace, "'{'")?;
                let body = self.program()?;
                self.expect(Tok::RBrace, "'}'")?;
                out.push(Program::loop_(body));
            }
            "repeat" => {
                let s = self.next("a repeat count")?;
                let k = match s.tok {
                    Tok::Int(k) => k,
                    other => {
                        return Err(ParseError {
                            line: s.line,
                            col: s.col,
                            msg: format!("expected a repeat count, found {other:?}"),
                        })
                    }
                };
                self.expect(Tok::LBrace, "'{'")?;
                let body = self.program()?;
                self.expect(Tok::RBrace, "'}'")?;
                out.push(Program::repeat(body, k));
            }
            "choice" => {
                let mut branches = Vec::new();
                self.expect(Tok::LBrace, "'{'")?;
                branches.push(self.program()?);
                self.expect(Tok::RBrace, "'}'")?;
                loop {
                    match self.peek() {
                        Some(Tok::Ident(w)) if w == "or" => {
                            self.pos += 1;
                            self.expect(Tok::LBrace, "'{'")?;
                            branches.push(self.program()?);
                            self.expect(Tok::RBrace, "'}'")?;
                        }
                        _ => break,
                    }
                }
                if branches.len() < 2 {
                    return Err(ParseError {
                        line: s.line,
                        col: s.col,
                        msg: "choice needs at least one 'or' branch".into(),
                    });
                }
                out.push(Program::choice_of(branches));
            }
            "skip" => out.push(Program::Skip),
            other => {
                return Err(ParseError {
                    line: s.line,
                    col: s.col,
                    msg: format!("unknown statement {other:?}"),
                })
            }
        }
        Ok(())
    }

    /// target := ident | '{' ident (',' ident)* '}'
    fn targets(&mut self) -> Result<Vec<CounterId>, ParseError> {
        match self.peek() {
            Some(Tok::LBrace) => {
                self.pos += 1;
                let mut names = vec![self.counter()?];
                while matches!(self.peek(), Some(Tok::Comma)) {
                    self.pos += 1;
                    names.push(self.counter()?);
                }
                self.expect(Tok::RBrace, "'}'")?;
                Ok(names)
            }
            _ => Ok(vec![self.counter()?]),
        }
    }

    fn counter(&mut self) -> Result<CounterId, ParseError> {
        let s = self.next("a counter name")?;
        match &s.tok {
            Tok::Ident(w) => CounterId::try_new(w).ok_or_else(|| ParseError {
                line: s.line,
                col: s.col,
                msg: format!("invalid counter name {w:?}"),
            }),
            other => Err(ParseError {
                line: s.line,
                col: s.col,
                msg: format!("expected a counter name, found {other:?}"),
            }),
        }
    }
}

/// Parses a program from its textual form.
pub fn parse(text: &str) -> Result<Program, ParseError> {
    let (end_line, end_col) = {
        let mut lx = Lexer::new(text);
        for ch in text.chars() {
            lx.bump(ch);
        }
        (lx.line, lx.col)
    };
    let toks = Lexer::new(text).tokens()?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end_line,
        end_col,
    };
    let program = parser.program()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.error_here("trailing input after program"));
    }
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(name: &str) -> CounterId {
        CounterId::new(name)
    }

    #[test]
    fn parses_commands_and_sequences() {
        assert_eq!(
            parse("inc x; dec x").unwrap(),
            Program::seq_of([Program::inc(&c("x")), Program::dec(&c("x"))])
        );
    }

    #[test]
    fn parses_blocks() {
        assert_eq!(
            parse("loop { inc x }").unwrap(),
            Program::loop_(Program::inc(&c("x")))
        );
        assert_eq!(
            parse("repeat 4 { inc y }").unwrap(),
            Program::repeat(Program::inc(&c("y")), 4)
        );
        assert_eq!(
            parse("choice { inc x } or { dec x }").unwrap(),
            Program::choice_of([Program::inc(&c("x")), Program::dec(&c("x"))])
        );
    }

    #[test]
    fn parses_empty_and_skip() {
        assert_eq!(parse("").unwrap(), Program::Skip);
        assert_eq!(parse("  # just a comment\n").unwrap(), Program::Skip);
        assert_eq!(parse("skip").unwrap(), Program::Skip);
        assert_eq!(parse("loop { }").unwrap(), Program::loop_(Program::Skip));
    }

    #[test]
    fn braced_target_sugar() {
        assert_eq!(
            parse("inc{a,b}; dec c").unwrap(),
            Program::seq_of([
                Program::inc(&c("a")),
                Program::inc(&c("b")),
                Program::dec(&c("c")),
            ])
        );
        assert_eq!(
            parse("test{a,b,a}").unwrap(),
            Program::seq_of([
                Program::test(&c("a")),
                Program::test(&c("b")),
                Program::test(&c("a")),
            ])
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("loop { inc x").unwrap_err();
        assert_eq!((err.line, err.col), (1, 13));
        let err = parse("inc 3").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
        let err = parse("loop { inc x }\n  ?").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
    }

    #[test]
    fn rejects_single_branch_choice() {
        assert!(parse("choice { inc x }").is_err());
    }

    #[test]
    fn primes_and_namespaces_in_names() {
        assert_eq!(parse("inc x'").unwrap(), Program::inc(&c("x'")));
        assert_eq!(parse("inc A::b").unwrap(), Program::inc(&c("A::b")));
    }
}
