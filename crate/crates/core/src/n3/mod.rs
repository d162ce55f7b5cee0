//! The Notation3 subset used by fixture files: `@prefix`, triples with `;`
//! and `,` lists, list terms, quoted graphs, `?variables`, numbers, strings,
//! booleans and `{P} => {C} .` implication rules.
//!
//! Anything outside that subset (blank nodes, paths, `@forAll`, `<=`,
//! datatypes, language tags) is rejected with a positioned error.

mod lexer;
mod serialize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::term::{Decimal, Graph, Term, Triple};
use crate::vocab;
use lexer::{Tok, Token};

pub use serialize::{render_term, serialize_document};

pub type PrefixMap = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{position}: {message}")]
pub struct ParseError {
    pub position: Position,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: Position, message: String) -> Self {
        ParseError { position, message }
    }
}

/// `premise => conclusion`. Every conclusion variable occurs in the premise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub premise: Graph,
    pub conclusion: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("conclusion variable ?{0} does not occur in the premise")]
pub struct RangeRestrictionError(pub String);

impl Rule {
    pub fn new(premise: Graph, conclusion: Graph) -> Result<Rule, RangeRestrictionError> {
        let bound = premise.variables();
        if let Some(free) = conclusion.variables().into_iter().find(|v| !bound.contains(v)) {
            return Err(RangeRestrictionError(free.to_string()));
        }
        Ok(Rule { premise, conclusion })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementBody {
    /// Triples sharing one subject, as written in a single statement.
    Facts(Vec<Triple>),
    /// Index into [`Document::rules`].
    Rule(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub position: Position,
    pub body: StatementBody,
}

impl Statement {
    pub fn triples(&self) -> &[Triple] {
        match &self.body {
            StatementBody::Facts(triples) => triples,
            StatementBody::Rule(_) => &[],
        }
    }
}

/// A parsed file: prefixes, the ground fact graph, rules in input order, and
/// every statement with its source position.
///
/// Equality ignores positions but does compare how facts are grouped into
/// statements, because action descriptions are identified per statement.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub prefixes: PrefixMap,
    pub facts: Graph,
    pub rules: Vec<Rule>,
    pub statements: Vec<Statement>,
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.prefixes == other.prefixes
            && self.facts == other.facts
            && self.rules == other.rules
            && self.fact_groups() == other.fact_groups()
    }
}

impl Eq for Document {}

impl Document {
    pub fn new() -> Self {
        Document::default()
    }

    /// Appends a fact statement. All triples should share `subject`.
    pub fn push_facts(&mut self, triples: Vec<Triple>) {
        self.facts.extend(triples.iter().cloned());
        self.statements
            .push(Statement { position: Position { line: 0, column: 0 }, body: StatementBody::Facts(triples) });
    }

    pub fn push_rule(&mut self, rule: Rule) {
        self.statements
            .push(Statement { position: Position { line: 0, column: 0 }, body: StatementBody::Rule(self.rules.len()) });
        self.rules.push(rule);
    }

    /// Fact statements as triple sets, plus any facts not covered by a
    /// statement grouped by subject.
    pub fn fact_groups(&self) -> BTreeSet<Graph> {
        let mut groups: BTreeSet<Graph> = self
            .statements
            .iter()
            .filter(|s| matches!(s.body, StatementBody::Facts(_)))
            .map(|s| s.triples().iter().filter(|t| self.facts.contains(t)).cloned().collect::<Graph>())
            .filter(|g| !g.is_empty())
            .collect();
        let covered: Graph = groups.iter().flat_map(|g| g.iter().cloned()).collect();
        let mut leftover: BTreeMap<&Term, Graph> = BTreeMap::new();
        for t in self.facts.iter().filter(|t| !covered.contains(t)) {
            leftover.entry(&t.subject).or_default().insert(t.clone());
        }
        groups.extend(leftover.into_values());
        groups
    }

    /// Fact statements whose subject is `subject`, in source order.
    pub fn statements_about<'a>(&'a self, subject: &'a Term) -> impl Iterator<Item = &'a Statement> + 'a {
        self.statements.iter().filter(move |s| s.triples().first().is_some_and(|t| &t.subject == subject))
    }
}

/// Resolves `prefix:local` or `<absolute>` to an IRI term.
pub fn resolve_name(prefixes: &PrefixMap, name: &str) -> Result<Term, ParseError> {
    let at = Position { line: 1, column: 1 };
    if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
        return Term::try_iri(inner).map_err(|e| ParseError::new(at, e.to_string()));
    }
    let Some((prefix, local)) = name.split_once(':') else {
        return Err(ParseError::new(at, format!("not a prefixed name or IRI reference: {name}")));
    };
    match prefixes.get(prefix) {
        Some(base) => Term::try_iri(format!("{base}{local}")).map_err(|e| ParseError::new(at, e.to_string())),
        None => Err(ParseError::new(at, format!("unknown prefix '{prefix}:'"))),
    }
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let tokens = lexer::tokenize(text)?;
    let mut parser = Parser { tokens, i: 0, doc: Document::new(), open: Vec::new(), loose_vars: Vec::new() };
    parser.document()?;
    Ok(parser.doc)
}

/// Parses a single term, e.g. `data:person_c`, `<http://x/y>`, `17.5` or
/// `(1 2)`. Variables and quoted graphs are accepted.
pub fn parse_term(prefixes: &PrefixMap, text: &str) -> Result<Term, ParseError> {
    let tokens = lexer::tokenize(text)?;
    let mut parser = Parser { tokens, i: 0, doc: Document::new(), open: Vec::new(), loose_vars: Vec::new() };
    parser.doc.prefixes = prefixes.clone();
    let term = parser.term(1)?;
    match parser.peek() {
        Tok::Eof => Ok(term),
        other => Err(ParseError::new(parser.pos(), format!("unexpected {} after term", other.describe()))),
    }
}

#[derive(Debug, Clone, Copy)]
enum Construct {
    Statement,
    Graph,
    List,
}

struct Parser {
    tokens: Vec<Token>,
    i: usize,
    doc: Document,
    open: Vec<(Construct, Position)>,
    /// Variables seen outside braces in the current statement.
    loose_vars: Vec<(String, Position)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.i].tok
    }

    fn pos(&self) -> Position {
        self.tokens[self.i].pos
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.i].clone();
        if token.tok != Tok::Eof {
            self.i += 1;
        }
        token
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        if *self.peek() == Tok::Eof {
            if let Some((construct, pos)) = self.open.last() {
                let what = match construct {
                    Construct::Statement => "unterminated statement (missing '.')",
                    Construct::Graph => "unterminated graph (missing '}')",
                    Construct::List => "unterminated list (missing ')')",
                };
                return ParseError::new(*pos, what.to_string());
            }
        }
        ParseError::new(self.pos(), format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek() {
                Tok::Eof => return Ok(()),
                Tok::PrefixKw => self.prefix_decl()?,
                _ => self.statement()?,
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), ParseError> {
        let start = self.advance().pos;
        self.open.push((Construct::Statement, start));
        let label = match self.advance().tok {
            Tok::PName { prefix, local } if local.is_empty() => prefix,
            _ => {
                self.i -= 1;
                return Err(self.unexpected("prefix label such as 'care:'"));
            }
        };
        let iri = match self.advance().tok {
            Tok::IriRef(iri) => iri,
            _ => {
                self.i -= 1;
                return Err(self.unexpected("IRI reference"));
            }
        };
        self.expect_dot()?;
        self.open.pop();
        self.doc.prefixes.insert(label, iri);
        Ok(())
    }

    fn expect_dot(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Dot {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected("'.'"))
        }
    }

    /// A variable outside braces is only accepted when a quoted graph in the
    /// same statement mentions it (e.g. `wst:provider ?p` next to a
    /// precondition binding `?p`).
    fn check_loose_vars(&mut self, triples: &[Triple]) -> Result<(), ParseError> {
        let mut scoped = BTreeSet::new();
        for t in triples {
            for term in t.terms() {
                if let Term::Graph(g) = term {
                    scoped.extend(g.variables());
                }
            }
        }
        for (name, pos) in self.loose_vars.drain(..) {
            if !scoped.contains(name.as_str()) {
                return Err(ParseError::new(pos, format!("variable ?{name} in a fact statement outside braces")));
            }
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let start = self.pos();
        self.loose_vars.clear();
        self.open.push((Construct::Statement, start));
        let subject = self.term(0)?;
        if *self.peek() == Tok::Implies {
            self.advance();
            let object = self.term(0)?;
            self.expect_dot()?;
            let (Term::Graph(premise), Term::Graph(conclusion)) = (subject, object) else {
                return Err(ParseError::new(start, "'=>' requires a quoted graph on both sides".into()));
            };
            let rule = Rule::new((*premise).clone(), (*conclusion).clone())
                .map_err(|e| ParseError::new(start, e.to_string()))?;
            self.doc.statements.push(Statement { position: start, body: StatementBody::Rule(self.doc.rules.len()) });
            self.doc.rules.push(rule);
        } else {
            let mut triples = Vec::new();
            self.predicate_objects(&subject, 0, &mut triples)?;
            self.expect_dot()?;
            self.check_loose_vars(&triples)?;
            self.doc.facts.extend(triples.iter().cloned());
            self.doc.statements.push(Statement { position: start, body: StatementBody::Facts(triples) });
        }
        self.open.pop();
        Ok(())
    }

    fn predicate_objects(&mut self, subject: &Term, depth: usize, out: &mut Vec<Triple>) -> Result<(), ParseError> {
        loop {
            let predicate = self.predicate(depth)?;
            loop {
                let object = self.term(depth)?;
                out.push(Triple::new(subject.clone(), predicate.clone(), object));
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
            if *self.peek() != Tok::Semi {
                return Ok(());
            }
            while *self.peek() == Tok::Semi {
                self.advance();
            }
            if matches!(self.peek(), Tok::Dot | Tok::RBrace | Tok::Eof) {
                return Ok(());
            }
        }
    }

    fn predicate(&mut self, depth: usize) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Tok::A => {
                self.advance();
                Ok(Term::iri(vocab::RDF_TYPE))
            }
            Tok::IriRef(_) | Tok::PName { .. } | Tok::Var(_) => self.term(depth),
            Tok::Number(_) | Tok::Str(_) | Tok::True | Tok::False => {
                Err(ParseError::new(pos, "literal in predicate position".into()))
            }
            Tok::LParen | Tok::LBrace => Err(ParseError::new(pos, "list or graph in predicate position".into())),
            Tok::Implies => Err(ParseError::new(pos, "nested implication is not supported".into())),
            _ => Err(self.unexpected("predicate")),
        }
    }

    /// `depth` counts enclosing braces; variables are only legal at depth > 0.
    fn term(&mut self, depth: usize) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::IriRef(iri) => {
                self.advance();
                Term::try_iri(&iri).map_err(|e| ParseError::new(pos, e.to_string()))
            }
            Tok::PName { prefix, local } => {
                self.advance();
                match self.doc.prefixes.get(&prefix) {
                    Some(base) => {
                        Term::try_iri(format!("{base}{local}")).map_err(|e| ParseError::new(pos, e.to_string()))
                    }
                    None => Err(ParseError::new(pos, format!("unknown prefix '{prefix}:'"))),
                }
            }
            Tok::Var(name) => {
                if depth == 0 {
                    self.loose_vars.push((name.clone(), pos));
                }
                self.advance();
                Ok(Term::var(name))
            }
            Tok::Number(text) => {
                self.advance();
                let value: Decimal =
                    text.parse().map_err(|_| ParseError::new(pos, format!("invalid number {text}")))?;
                Ok(Term::number(value))
            }
            Tok::Str(text) => {
                self.advance();
                Ok(Term::text(text))
            }
            Tok::True => {
                self.advance();
                Ok(Term::boolean(true))
            }
            Tok::False => {
                self.advance();
                Ok(Term::boolean(false))
            }
            Tok::LParen => {
                self.advance();
                self.open.push((Construct::List, pos));
                let mut items = Vec::new();
                while *self.peek() != Tok::RParen {
                    if *self.peek() == Tok::Eof {
                        return Err(self.unexpected("')'"));
                    }
                    items.push(self.term(depth)?);
                }
                self.advance();
                self.open.pop();
                Ok(Term::list(items))
            }
            Tok::LBrace => {
                self.advance();
                self.open.push((Construct::Graph, pos));
                let graph = self.formula(depth + 1)?;
                self.open.pop();
                Ok(Term::graph(graph))
            }
            Tok::A => Err(ParseError::new(pos, "'a' is only valid in predicate position".into())),
            Tok::Implies => Err(ParseError::new(pos, "nested implication is not supported".into())),
            _ => Err(self.unexpected("term")),
        }
    }

    fn formula(&mut self, depth: usize) -> Result<Graph, ParseError> {
        let mut triples = Vec::new();
        loop {
            match self.peek() {
                Tok::RBrace => {
                    self.advance();
                    return Ok(triples.into_iter().collect());
                }
                Tok::Eof => return Err(self.unexpected("'}'")),
                _ => {}
            }
            let subject = self.term(depth)?;
            if *self.peek() == Tok::Implies {
                return Err(ParseError::new(self.pos(), "nested implication is not supported".into()));
            }
            self.predicate_objects(&subject, depth, &mut triples)?;
            match self.peek() {
                Tok::Dot => {
                    self.advance();
                }
                Tok::RBrace => {}
                _ => return Err(self.unexpected("'.' or '}'")),
            }
        }
    }
}
