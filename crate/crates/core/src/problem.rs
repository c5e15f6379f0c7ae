//! Problem files: abducible and order directives, axioms, goals and
//! flattening targets, in a small clause language.
//!
//! ```text
//! % comment
//! abducible i, j, b, c.
//! order i < j < b < c.
//! axiom select(store(X,Z,V),Z) = V.
//! goal select(d2,k) != select(d4,k) | e = e.
//! flatten f(a).
//! ```
//!
//! Identifiers starting with an uppercase letter or `_` are variables,
//! scoped to their statement.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::subsumption::is_variant;
use crate::term::{Abducibles, Clause, Literal, Signature, Symbol, Term, TermError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {expected}, found {found}")]
    Syntax { line: usize, col: usize, expected: String, found: String },
    #[error("{line}:{col}: symbol `{symbol}` used with arity {second}, earlier with arity {first}")]
    ArityMismatch { line: usize, col: usize, symbol: String, first: usize, second: usize },
    #[error("{line}:{col}: unknown directive `{name}`")]
    UnknownDirective { line: usize, col: usize, name: String },
    #[error("{line}:{col}: invalid order: {reason}")]
    InvalidOrder { line: usize, col: usize, reason: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::ArityMismatch { line, col, .. }
            | ParseError::UnknownDirective { line, col, .. }
            | ParseError::InvalidOrder { line, col, .. } => (*line, *col),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Statement {
    Abducible(Vec<Symbol>),
    Order(Vec<Symbol>),
    Axiom(Clause),
    Goal(Clause),
    Flatten(Term),
}

impl PartialEq for Statement {
    /// Clauses are compared up to renaming of their variables.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Statement::Abducible(a), Statement::Abducible(b)) | (Statement::Order(a), Statement::Order(b)) => a == b,
            (Statement::Axiom(a), Statement::Axiom(b)) | (Statement::Goal(a), Statement::Goal(b)) => {
                a == b || is_variant(a, b)
            }
            (Statement::Flatten(a), Statement::Flatten(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |syms: &[Symbol], sep: &str| syms.iter().map(|s| s.name().to_string()).collect::<Vec<_>>().join(sep);
        match self {
            Statement::Abducible(syms) => write!(f, "abducible {}.", names(syms, ", ")),
            Statement::Order(syms) => write!(f, "order {}.", names(syms, " < ")),
            Statement::Axiom(c) => write!(f, "axiom {}.", print_clause(c)),
            Statement::Goal(c) => write!(f, "goal {}.", print_clause(c)),
            Statement::Flatten(t) => write!(f, "flatten {t}."),
        }
    }
}

fn print_clause(c: &Clause) -> String {
    if c.is_empty() {
        // The language has no empty clause; this literal is false in every model.
        return "X0 != X0".to_string();
    }
    c.literals().iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" | ")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProblemFile {
    pub statements: Vec<Statement>,
}

impl ProblemFile {
    /// Declared abducibles, ordered by the `order` directive if any, otherwise
    /// by declaration; abducibles missing from the order come last.
    pub fn abducibles(&self) -> Abducibles {
        let mut declared: Vec<Symbol> = Vec::new();
        let mut order: Vec<Symbol> = Vec::new();
        for s in &self.statements {
            match s {
                Statement::Abducible(syms) => {
                    for sym in syms {
                        if !declared.contains(sym) {
                            declared.push(sym.clone());
                        }
                    }
                }
                Statement::Order(syms) => order = syms.clone(),
                _ => {}
            }
        }
        let mut ranked: Vec<Symbol> = order.into_iter().filter(|s| declared.contains(s)).collect();
        for s in declared {
            if !ranked.contains(&s) {
                ranked.push(s);
            }
        }
        Abducibles::new(ranked.iter().map(|s| s.name()))
    }

    pub fn axioms(&self) -> Vec<Clause> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Statement::Axiom(c) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn goals(&self) -> Vec<Clause> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Statement::Goal(c) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn flatten_targets(&self) -> Vec<Term> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Statement::Flatten(t) => Some(t.clone()),
                _ => None,
            })
            .collect()
    }

    /// Axioms followed by goals.
    pub fn clauses(&self) -> Vec<Clause> {
        let mut out = self.axioms();
        out.extend(self.goals());
        out
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for s in &self.statements {
            match s {
                Statement::Abducible(syms) | Statement::Order(syms) => {
                    for sym in syms {
                        let _ = sig.declare(sym, 0);
                    }
                }
                Statement::Axiom(c) | Statement::Goal(c) => {
                    let _ = sig.add_clause(c);
                }
                Statement::Flatten(t) => {
                    let _ = sig.add_term(t);
                }
            }
        }
        sig
    }
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Neq,
    Pipe,
    Lt,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Neq => f.write_str("`!=`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let ch = chars[i];
        let start_col = col;
        let mut len = 1;
        let tok = match ch {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '=' => Tok::Eq,
            '|' => Tok::Pipe,
            '<' => Tok::Lt,
            '!' => {
                if chars.get(i + 1) != Some(&'=') {
                    let found = chars.get(i + 1).map_or("end of input".to_string(), |x| format!("`{x}`"));
                    return Err(ParseError::Syntax { line, col: col + 1, expected: "`=` after `!`".into(), found });
                }
                len = 2;
                Tok::Neq
            }
            c if c.is_alphanumeric() || c == '_' => {
                let word: String =
                    chars[i..].iter().take_while(|x| x.is_alphanumeric() || **x == '_').collect();
                len = word.chars().count();
                Tok::Ident(word)
            }
            other => {
                return Err(ParseError::Syntax { line, col, expected: "a token".into(), found: format!("`{other}`") })
            }
        };
        out.push(Spanned { tok, line, col: start_col });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

fn is_variable_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_uppercase() || c == '_')
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    sig: Signature,
    vars: HashMap<String, Var>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> &Spanned {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::Syntax { line: t.line, col: t.col, expected: expected.into(), found: t.tok.to_string() }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, usize, usize), ParseError> {
        let t = self.peek();
        match &t.tok {
            Tok::Ident(s) => {
                let out = (s.clone(), t.line, t.col);
                self.bump();
                Ok(out)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn declare(&mut self, sym: &Symbol, arity: usize, line: usize, col: usize) -> Result<(), ParseError> {
        match self.sig.declare(sym, arity) {
            Ok(()) => Ok(()),
            Err(TermError::ArityMismatch { first, second, .. }) => Err(ParseError::ArityMismatch {
                line,
                col,
                symbol: sym.name().to_string(),
                first,
                second,
            }),
            Err(e) => unreachable!("declare only reports arity mismatches: {e}"),
        }
    }

    fn constant(&mut self, expected: &str) -> Result<Symbol, ParseError> {
        let (name, line, col) = self.ident(expected)?;
        if is_variable_name(&name) {
            return Err(ParseError::Syntax { line, col, expected: expected.into(), found: format!("variable `{name}`") });
        }
        let sym = Symbol::new(&name);
        self.declare(&sym, 0, line, col)?;
        Ok(sym)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (name, line, col) = self.ident("a term")?;
        if is_variable_name(&name) {
            let next = self.vars.len() as u32;
            let v = *self.vars.entry(name).or_insert_with(|| Var::ordinary(next));
            return Ok(Term::Var(v));
        }
        let mut args = Vec::new();
        if self.peek().tok == Tok::LParen {
            self.bump();
            args.push(self.term()?);
            while self.peek().tok == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
        }
        let sym = Symbol::new(&name);
        self.declare(&sym, args.len(), line, col)?;
        Ok(Term::app(sym, args))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let lhs = self.term()?;
        let positive = match self.peek().tok {
            Tok::Eq => true,
            Tok::Neq => false,
            _ => return Err(self.error("`=` or `!=`")),
        };
        self.bump();
        let rhs = self.term()?;
        Ok(Literal::new(positive, lhs, rhs))
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        self.vars.clear();
        let mut lits = vec![self.literal()?];
        while self.peek().tok == Tok::Pipe {
            self.bump();
            lits.push(self.literal()?);
        }
        Ok(Clause::new(lits).normalize_vars())
    }

    fn symbol_list(&mut self, sep: Tok, expected: &str) -> Result<Vec<Symbol>, ParseError> {
        let mut out = vec![self.constant(expected)?];
        while self.peek().tok == sep {
            self.bump();
            out.push(self.constant(expected)?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let (name, line, col) = self.ident("a directive")?;
        let st = match name.as_str() {
            "abducible" => Statement::Abducible(self.symbol_list(Tok::Comma, "an abducible constant")?),
            "order" => {
                let syms = self.symbol_list(Tok::Lt, "an abducible constant")?;
                for (i, s) in syms.iter().enumerate() {
                    if syms[..i].contains(s) {
                        return Err(ParseError::InvalidOrder {
                            line,
                            col,
                            reason: format!("`{s}` appears twice"),
                        });
                    }
                }
                Statement::Order(syms)
            }
            "axiom" => Statement::Axiom(self.clause()?),
            "goal" => Statement::Goal(self.clause()?),
            "flatten" => {
                self.vars.clear();
                let at = (self.peek().line, self.peek().col);
                let t = self.term()?;
                if !t.is_ground() {
                    return Err(ParseError::Syntax {
                        line: at.0,
                        col: at.1,
                        expected: "a ground term".into(),
                        found: format!("`{t}`"),
                    });
                }
                Statement::Flatten(t)
            }
            _ => return Err(ParseError::UnknownDirective { line, col, name }),
        };
        self.expect(Tok::Dot, "`.`")?;
        Ok(st)
    }
}

pub fn parse(text: &str) -> Result<ProblemFile, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig: Signature::new(), vars: HashMap::new() };
    let mut statements = Vec::new();
    while p.peek().tok != Tok::Eof {
        statements.push(p.statement()?);
    }
    let file = ProblemFile { statements };
    check_orders(&file)?;
    Ok(file)
}

/// Every symbol of an `order` directive must be declared abducible.
fn check_orders(file: &ProblemFile) -> Result<(), ParseError> {
    let abducibles = file.abducibles();
    for s in &file.statements {
        if let Statement::Order(syms) = s {
            if let Some(bad) = syms.iter().find(|s| !abducibles.contains(s)) {
                return Err(ParseError::InvalidOrder { line: 0, col: 0, reason: format!("`{bad}` is not abducible") });
            }
        }
    }
    Ok(())
}

/// Parses a single clause, as given on a command line.
pub fn parse_clause(text: &str) -> Result<Clause, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig: Signature::new(), vars: HashMap::new() };
    let c = p.clause()?;
    if p.peek().tok == Tok::Dot {
        p.bump();
    }
    if p.peek().tok != Tok::Eof {
        return Err(p.error("end of clause"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_array_statements() {
        let f = parse("abducible i, j, b, c. axiom select(store(X,Z,V),Z) = V. goal select(d2,k) != select(d4,k).").unwrap();
        assert_eq!(f.statements.len(), 3);
        let x = |i| Term::Var(Var::ordinary(i));
        let store = Term::func("store", vec![x(0), x(1), x(2)]);
        let ax = Clause::unit(Literal::pos(Term::func("select", vec![store, x(1)]), x(2)));
        assert_eq!(f.statements[1], Statement::Axiom(ax));
        assert_eq!(f.abducibles().iter().map(|s| s.name()).collect::<Vec<_>>(), ["i", "j", "b", "c"]);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("axiom f(X = Y.") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 11)),
            other => panic!("{other:?}"),
        }
        match parse("abducible a.\n  axiom a = .") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 13)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arity_and_directive_errors() {
        assert!(matches!(parse("axiom f(a) = a. axiom f(a,b) = a."), Err(ParseError::ArityMismatch { .. })));
        assert!(matches!(parse("lemma a = b."), Err(ParseError::UnknownDirective { .. })));
        assert!(matches!(parse("abducible a. order a < b."), Err(ParseError::InvalidOrder { .. })));
        assert!(matches!(parse("abducible f. axiom f(a) = a."), Err(ParseError::ArityMismatch { .. })));
    }

    #[test]
    fn comments_and_order() {
        let f = parse("% header\nabducible a, b, c. % trailing\norder c < a.\naxiom a = b.").unwrap();
        assert_eq!(f.abducibles().iter().map(|s| s.name()).collect::<Vec<_>>(), ["c", "a", "b"]);
    }

    #[test]
    fn round_trip() {
        let text = "abducible a, b.\norder b < a.\naxiom f(X,Y) != f(Y,X) | X = a.\ngoal g(a) != b.\nflatten g(a).\n";
        let f = parse(text).unwrap();
        let again = parse(&f.to_string()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn single_clause() {
        let c = parse_clause("a != c | b != d").unwrap();
        assert_eq!(c.len(), 2);
        assert!(parse_clause("a != c b").is_err());
    }
}
