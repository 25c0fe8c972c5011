//! Lexer and recursive-descent parser for partitioned formulas.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := un ("&" un)*
//! un      := "!" un | ("exists" | "forall") ident "." un | atom
//! atom    := ident "(" ident ("," ident)* ")"
//!          | ident ("=" | "!=" | "<") ident
//!          | "(" formula ")"
//! ```
//!
//! `x < y` is the binary relation named `<`; `x != y` abbreviates
//! `!(x = y)`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Atom { relation: String, args: Vec<String> },
    Equal(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    /// Free variables, in sorted order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Atom { args, .. } => args.iter().for_each(|a| note(a, bound)),
            Formula::Equal(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { relation, args } if args.len() == 2 && relation == "<" => {
                write!(f, "{} < {}", args[0], args[1])
            }
            Formula::Atom { relation, args } => write!(f, "{relation}({})", args.join(",")),
            Formula::Equal(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(inner) => write!(f, "!({inner})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Exists(v, body) => write!(f, "exists {v}. ({body})"),
            Formula::Forall(v, body) => write!(f, "forall {v}. ({body})"),
        }
    }
}

/// A formula `phi(x; y)` with object variables `x_vars` and parameter
/// variables `y_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedFormula {
    pub ast: Formula,
    pub x_vars: Vec<String>,
    pub y_vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Eq,
    Neq,
    Lt,
    Exists,
    Forall,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Bang => "`!`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Arrow => "`->`",
            Tok::DoubleArrow => "`<->`",
            Tok::Eq => "`=`",
            Tok::Neq => "`!=`",
            Tok::Lt => "`<`",
            Tok::Exists => "`exists`",
            Tok::Forall => "`forall`",
            Tok::End => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: String) -> Error {
    Error::Syntax {
        line,
        column,
        message,
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut push = |tok: Tok, len: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += len;
            *column += len;
        };
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            ',' => push(Tok::Comma, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            '&' => push(Tok::Amp, 1, &mut i, &mut column),
            '|' => push(Tok::Pipe, 1, &mut i, &mut column),
            '=' => push(Tok::Eq, 1, &mut i, &mut column),
            '!' if next == Some('=') => push(Tok::Neq, 2, &mut i, &mut column),
            '!' => push(Tok::Bang, 1, &mut i, &mut column),
            '-' if next == Some('>') => push(Tok::Arrow, 2, &mut i, &mut column),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::DoubleArrow, 3, &mut i, &mut column)
            }
            '<' => push(Tok::Lt, 1, &mut i, &mut column),
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    _ => Tok::Ident(word),
                };
                push(tok, j - i, &mut i, &mut column)
            }
            other => {
                return Err(syntax(line, column, format!("unexpected character {other:?}")));
            }
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn advance(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> Error {
        let t = &self.tokens[self.pos];
        syntax(t.line, t.column, format!("expected {expected}, found {}", t.tok))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(name)
            }
            _ => Err(self.error_here(expected)),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut left = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.advance();
            let right = self.imp()?;
            left = Formula::Iff(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let right = self.imp()?;
            return Ok(Formula::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.advance();
            let right = self.and()?;
            left = Formula::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.advance();
            let right = self.unary()?;
            left = Formula::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.advance();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::Exists | Tok::Forall => {
                let universal = *self.peek() == Tok::Forall;
                self.advance();
                let var = self.ident("a variable after the quantifier")?;
                self.expect(Tok::Dot, "`.` after the quantified variable")?;
                let body = Box::new(self.unary()?);
                Ok(if universal {
                    Formula::Forall(var, body)
                } else {
                    Formula::Exists(var, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::LParen {
            self.advance();
            let inner = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(inner);
        }
        let name = self.ident("a formula")?;
        match self.peek() {
            Tok::LParen => {
                self.advance();
                let mut args = alloc::vec![self.ident("an argument variable")?];
                while *self.peek() == Tok::Comma {
                    self.advance();
                    args.push(self.ident("an argument variable")?);
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                Ok(Formula::Atom {
                    relation: name,
                    args,
                })
            }
            Tok::Eq => {
                self.advance();
                Ok(Formula::Equal(name, self.ident("a variable after `=`")?))
            }
            Tok::Neq => {
                self.advance();
                let rhs = self.ident("a variable after `!=`")?;
                Ok(Formula::Not(Box::new(Formula::Equal(name, rhs))))
            }
            Tok::Lt => {
                self.advance();
                let rhs = self.ident("a variable after `<`")?;
                Ok(Formula::Atom {
                    relation: "<".to_string(),
                    args: alloc::vec![name, rhs],
                })
            }
            _ => Err(self.error_here("`(`, `=`, `!=` or `<` after an identifier")),
        }
    }
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c))
        && chars.all(is_ident_char)
        && s != "exists"
        && s != "forall"
}

/// Parses `"x1,x2;y1"` into the object and parameter variable lists.
pub fn parse_partition(partition: &str) -> Result<(Vec<String>, Vec<String>)> {
    let mut sides = partition.split(';');
    let x_side = sides.next().unwrap_or("");
    let y_side = sides.next().unwrap_or("");
    if sides.next().is_some() {
        return Err(invalid!("partition {partition:?} has more than one `;`"));
    }
    let split = |side: &str| -> Result<Vec<String>> {
        let side = side.trim();
        if side.is_empty() {
            return Ok(Vec::new());
        }
        side.split(',')
            .map(|v| {
                let v = v.trim();
                if valid_ident(v) {
                    Ok(v.to_string())
                } else {
                    Err(invalid!("{v:?} is not a variable name"))
                }
            })
            .collect()
    };
    let (x, y) = (split(x_side)?, split(y_side)?);
    let mut seen = BTreeSet::new();
    for v in x.iter().chain(y.iter()) {
        if !seen.insert(v) {
            return Err(invalid!("variable {v} appears twice in the partition"));
        }
    }
    Ok((x, y))
}

pub fn parse_formula(text: &str, partition: &str) -> Result<PartitionedFormula> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let ast = parser.formula()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error_here("an operator or end of input"));
    }
    let (x_vars, y_vars) = parse_partition(partition)?;
    for v in ast.free_vars() {
        if !x_vars.contains(&v) && !y_vars.contains(&v) {
            return Err(invalid!("free variable {v} is not declared in the partition {partition:?}"));
        }
    }
    Ok(PartitionedFormula {
        ast,
        x_vars,
        y_vars,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    fn s(v: &str) -> String {
        v.to_string()
    }

    #[test]
    fn parses_examples() {
        let f = parse_formula("E(x,y)", "x;y").unwrap();
        assert_eq!(
            f.ast,
            Formula::Atom {
                relation: s("E"),
                args: vec![s("x"), s("y")]
            }
        );
        assert_eq!((f.x_vars, f.y_vars), (vec![s("x")], vec![s("y")]));

        let f = parse_formula("exists z. (E(x,z) & E(z,y))", "x;y").unwrap();
        assert!(matches!(f.ast, Formula::Exists(ref v, _) if v == "z"));

        let f = parse_formula("x = y1 | x = y2", "x;y1,y2").unwrap();
        assert!(matches!(f.ast, Formula::Or(..)));
        assert_eq!(f.y_vars.len(), 2);
    }

    #[test]
    fn precedence() {
        let f = parse_formula("!a = b & c = d | e = f -> g = h <-> i = j", "a,b,c,d,e,f,g,h,i,j;").unwrap();
        assert_eq!(
            f.ast.to_string(),
            "((((!(a = b) & c = d) | e = f) -> g = h) <-> i = j)"
        );
        let f = parse_formula("a = a -> b = b -> c = c", "a,b,c").unwrap();
        assert_eq!(f.ast.to_string(), "(a = a -> (b = b -> c = c))");
        let f = parse_formula("x<y & x != y", "x;y").unwrap();
        assert_eq!(f.ast.to_string(), "(x < y & !(x = y))");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("E(x,\n  & y)", "x;y").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 3,
                message: s("expected an argument variable, found `&`")
            }
        );
        match parse_formula("x = ", "x;").unwrap_err() {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (1, 5)),
            other => panic!("{other:?}"),
        }
        match parse_formula("x # y", "x;y").unwrap_err() {
            Error::Syntax { column, .. } => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn partition_checks() {
        assert!(parse_formula("E(x,z)", "x;y").is_err());
        assert!(parse_formula("exists z. E(x,z)", "x;").is_ok());
        assert!(parse_partition("x;x").is_err());
        assert!(parse_partition("x;y;z").is_err());
        assert!(parse_partition("1x;y").is_err());
        assert_eq!(parse_partition("x").unwrap(), (vec![s("x")], vec![]));
        // bound variables shadow the partition
        let f = parse_formula("exists x. x = y", "x;y").unwrap();
        assert_eq!(f.ast.free_vars().into_iter().collect::<Vec<_>>(), vec![s("y")]);
    }
}
