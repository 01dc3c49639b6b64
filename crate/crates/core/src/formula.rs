//! Formula AST for the monadic propositional/quantified fragment, together with
//! the ASCII notation used throughout the dataset (`->`, `<->`, `~`, `and`,
//! `or`, `forall x:`, `exists x:`).
//!
//! Precedence, tightest first: `~`, then `and`/`or`, then `->`/`<->`.
//! `and`/`or` are left-associative and may not be mixed at one level without
//! parentheses; `->`/`<->` are right-associative. A quantifier may only appear
//! as the outermost node of a clause and scopes to the end of it.
//!
//! The notation never needs parentheses for any formula the generator emits
//! from the rule catalog; the renderer adds the minimal set required for the
//! parse to be unambiguous under the rules above.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Argument of a unary predicate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Const(n) | Term::Var(n) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Pred(String, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn pred(name: impl Into<String>, arg: Term) -> Self {
        Formula::Pred(name.into(), arg)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForAll(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// `p` or `P(t)`.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Pred(..))
    }

    /// An atomic formula or the negation of one.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(inner) => inner.is_atomic(),
            f => f.is_atomic(),
        }
    }

    pub fn is_quantified(&self) -> bool {
        matches!(self, Formula::ForAll(..) | Formula::Exists(..))
    }

    pub fn contains_quantifier(&self) -> bool {
        match self {
            Formula::ForAll(..) | Formula::Exists(..) => true,
            Formula::Atom(_) | Formula::Pred(..) => false,
            Formula::Not(f) => f.contains_quantifier(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.contains_quantifier() || r.contains_quantifier()
            }
        }
    }

    /// Flips the polarity of a literal without stacking negations; any other
    /// formula is wrapped in `~`.
    pub fn complement(&self) -> Formula {
        match self {
            Formula::Not(inner) if inner.is_atomic() => (**inner).clone(),
            f => Formula::not(f.clone()),
        }
    }

    /// The formula that directly contradicts `self`: literal complement, with
    /// the quantifier dualised for quantified clauses (`forall x: Q(x)` is
    /// contradicted by `exists x: ~Q(x)`).
    pub fn contradiction(&self) -> Formula {
        match self {
            Formula::ForAll(v, body) => Formula::exists(v.clone(), body.contradiction()),
            Formula::Exists(v, body) => Formula::forall(v.clone(), body.contradiction()),
            f => f.complement(),
        }
    }

    /// Strips one negation, if present.
    pub fn atom_of_literal(&self) -> Option<&Formula> {
        match self {
            Formula::Not(inner) if inner.is_atomic() => Some(inner),
            f if f.is_atomic() => Some(f),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Rough size measure, used by tests and proptest strategies.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Pred(..) => 1,
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    /// Applies `f` to every symbol leaf (atoms, predicates, terms, bound
    /// variables), rebuilding the tree.
    fn map_symbols(&self, f: &mut impl FnMut(SymbolKind, &str) -> String) -> Formula {
        match self {
            Formula::Atom(n) => Formula::Atom(f(SymbolKind::Proposition, n)),
            Formula::Pred(p, t) => {
                let p = f(SymbolKind::Predicate, p);
                let t = match t {
                    Term::Const(c) => Term::Const(f(SymbolKind::Constant, c)),
                    Term::Var(v) => Term::Var(f(SymbolKind::Variable, v)),
                };
                Formula::Pred(p, t)
            }
            Formula::Not(x) => Formula::not(x.map_symbols(f)),
            Formula::And(l, r) => Formula::and(l.map_symbols(f), r.map_symbols(f)),
            Formula::Or(l, r) => Formula::or(l.map_symbols(f), r.map_symbols(f)),
            Formula::Implies(l, r) => Formula::implies(l.map_symbols(f), r.map_symbols(f)),
            Formula::Iff(l, r) => Formula::iff(l.map_symbols(f), r.map_symbols(f)),
            Formula::ForAll(v, b) => {
                let v = f(SymbolKind::Variable, v);
                Formula::forall(v, b.map_symbols(f))
            }
            Formula::Exists(v, b) => {
                let v = f(SymbolKind::Variable, v);
                Formula::exists(v, b.map_symbols(f))
            }
        }
    }

    fn visit_symbols(&self, f: &mut impl FnMut(SymbolKind, &str)) {
        match self {
            Formula::Atom(n) => f(SymbolKind::Proposition, n),
            Formula::Pred(p, t) => {
                f(SymbolKind::Predicate, p);
                match t {
                    Term::Const(c) => f(SymbolKind::Constant, c),
                    Term::Var(v) => f(SymbolKind::Variable, v),
                }
            }
            Formula::Not(x) => x.visit_symbols(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.visit_symbols(f);
                r.visit_symbols(f);
            }
            Formula::ForAll(v, b) | Formula::Exists(v, b) => {
                f(SymbolKind::Variable, v);
                b.visit_symbols(f);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

// Binding strength of a node's top connective; larger binds tighter.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::ForAll(..) | Formula::Exists(..) => 0,
        Formula::Implies(..) | Formula::Iff(..) => 1,
        Formula::And(..) | Formula::Or(..) => 2,
        Formula::Not(_) => 3,
        Formula::Atom(_) | Formula::Pred(..) => 4,
    }
}

fn write_wrapped(f: &Formula, parens: bool, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if parens {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(n) => out.write_str(n),
            Formula::Pred(p, t) => write!(out, "{p}({})", t.name()),
            Formula::Not(x) => {
                out.write_str("~")?;
                write_wrapped(x, level(x) < 3, out)
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                let op = if matches!(self, Formula::And(..)) { "and" } else { "or" };
                let same = |x: &Formula| std::mem::discriminant(x) == std::mem::discriminant(self);
                // left-associative; a differing and/or child always needs parentheses
                let lp = level(l) < 2 || (level(l) == 2 && !same(l));
                let rp = level(r) <= 2;
                write_wrapped(l, lp, out)?;
                write!(out, " {op} ")?;
                write_wrapped(r, rp, out)
            }
            Formula::Implies(l, r) | Formula::Iff(l, r) => {
                let op = if matches!(self, Formula::Implies(..)) { "->" } else { "<->" };
                write_wrapped(l, level(l) <= 1, out)?;
                write!(out, " {op} ")?;
                write_wrapped(r, level(r) < 1, out)
            }
            Formula::ForAll(v, b) => write!(out, "forall {v}: {b}"),
            Formula::Exists(v, b) => write!(out, "exists {v}: {b}"),
        }
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_formula(&text).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty formula")]
    Empty,
    #[error("unexpected character {ch:?} at {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("expected {expected} at {pos}, found {found}")]
    Expected { expected: &'static str, found: String, pos: usize },
    #[error("cannot mix `and` and `or` without parentheses at {pos}")]
    MixedJunction { pos: usize },
    #[error("quantifier at {pos} is nested inside a connective")]
    NestedQuantifier { pos: usize },
    #[error("`{name}` at {pos} is not a valid {what}")]
    BadSymbol { name: String, what: &'static str, pos: usize },
    #[error("variable `{0}` is not bound by a quantifier")]
    UnboundVariable(String),
    #[error("trailing input at {pos}")]
    Trailing { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Tilde,
    Arrow,
    DoubleArrow,
    Colon,
    And,
    Or,
    ForAll,
    Exists,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DoubleArrow => f.write_str("`<->`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::And => f.write_str("`and`"),
            Tok::Or => f.write_str("`or`"),
            Tok::ForAll => f.write_str("`forall`"),
            Tok::Exists => f.write_str("`exists`"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' => i += 1,
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'~' => {
                toks.push((Tok::Tilde, i));
                i += 1;
            }
            b':' => {
                toks.push((Tok::Colon, i));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push((Tok::Arrow, i));
                i += 2;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                toks.push((Tok::DoubleArrow, i));
                i += 3;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "forall" => Tok::ForAll,
                    "exists" => Tok::Exists,
                    w => Tok::Ident(w.to_string()),
                };
                toks.push((tok, start));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::UnexpectedChar { ch, pos: i });
            }
        }
    }
    Ok(toks)
}

/// `x` or `x_<digits>`.
pub fn is_variable_name(name: &str) -> bool {
    match name.strip_prefix('x') {
        Some("") => true,
        Some(rest) => rest.strip_prefix('_').is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())),
        None => false,
    }
}

fn starts_lower(name: &str) -> bool {
    name.bytes().next().is_some_and(|b| b.is_ascii_lowercase())
}

fn starts_upper(name: &str) -> bool {
    name.bytes().next().is_some_and(|b| b.is_ascii_uppercase())
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn found(&self) -> String {
        self.peek().map_or_else(|| "end of input".to_string(), |t| t.to_string())
    }

    fn expect(&mut self, tok: Tok, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Expected { expected: what, found: self.found(), pos: self.offset() })
        }
    }

    fn clause(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::ForAll) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::ForAll);
                self.pos += 1;
                let at = self.offset();
                let var = match self.peek() {
                    Some(Tok::Ident(v)) => v.clone(),
                    _ => return Err(ParseError::Expected { expected: "variable", found: self.found(), pos: at }),
                };
                if !is_variable_name(&var) {
                    return Err(ParseError::BadSymbol { name: var, what: "variable", pos: at });
                }
                self.pos += 1;
                self.expect(Tok::Colon, "`:`")?;
                let body = self.implication()?;
                Ok(if universal { Formula::forall(var, body) } else { Formula::exists(var, body) })
            }
            _ => self.implication(),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.junction()?;
        match self.peek() {
            Some(Tok::Arrow) => {
                self.pos += 1;
                Ok(Formula::implies(lhs, self.implication()?))
            }
            Some(Tok::DoubleArrow) => {
                self.pos += 1;
                Ok(Formula::iff(lhs, self.implication()?))
            }
            _ => Ok(lhs),
        }
    }

    fn junction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        let mut kind: Option<Tok> = None;
        while let Some(t @ (Tok::And | Tok::Or)) = self.peek().cloned() {
            if kind.as_ref().is_some_and(|k| *k != t) {
                return Err(ParseError::MixedJunction { pos: self.offset() });
            }
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if t == Tok::And { Formula::and(acc, rhs) } else { Formula::or(acc, rhs) };
            kind = Some(t);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::ForAll) | Some(Tok::Exists) => Err(ParseError::NestedQuantifier { pos: at }),
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    if !starts_upper(&name) {
                        return Err(ParseError::BadSymbol { name, what: "predicate", pos: at });
                    }
                    self.pos += 1;
                    let arg_at = self.offset();
                    let arg = match self.peek() {
                        Some(Tok::Ident(a)) => a.clone(),
                        _ => {
                            return Err(ParseError::Expected {
                                expected: "predicate argument",
                                found: self.found(),
                                pos: arg_at,
                            })
                        }
                    };
                    self.pos += 1;
                    self.expect(Tok::RParen, "`)`")?;
                    let term = if is_variable_name(&arg) {
                        Term::Var(arg)
                    } else if starts_lower(&arg) {
                        Term::Const(arg)
                    } else {
                        return Err(ParseError::BadSymbol { name: arg, what: "term", pos: arg_at });
                    };
                    Ok(Formula::Pred(name, term))
                } else if starts_lower(&name) && !is_variable_name(&name) {
                    Ok(Formula::Atom(name))
                } else {
                    Err(ParseError::BadSymbol { name, what: "proposition", pos: at })
                }
            }
            _ => Err(ParseError::Expected { expected: "formula", found: self.found(), pos: at }),
        }
    }
}

fn check_bound(f: &Formula, bound: &mut Vec<String>) -> Result<(), ParseError> {
    match f {
        Formula::Atom(_) | Formula::Pred(_, Term::Const(_)) => Ok(()),
        Formula::Pred(_, Term::Var(v)) => {
            if bound.iter().any(|b| b == v) {
                Ok(())
            } else {
                Err(ParseError::UnboundVariable(v.clone()))
            }
        }
        Formula::Not(x) => check_bound(x, bound),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            check_bound(l, bound)?;
            check_bound(r, bound)
        }
        Formula::ForAll(v, b) | Formula::Exists(v, b) => {
            bound.push(v.clone());
            let res = check_bound(b, bound);
            bound.pop();
            res
        }
    }
}

/// Parses one clause of the notation, e.g. `p_2 -> ~q_2` or
/// `forall x_2: Q(x_2)`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser { toks, pos: 0, end: text.len() };
    let f = parser.clause()?;
    if parser.pos != parser.toks.len() {
        return Err(ParseError::Trailing { pos: parser.offset() });
    }
    check_bound(&f, &mut Vec::new())?;
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Proposition,
    Predicate,
    Constant,
    Variable,
}

/// Symbols of a formula (or list of formulas), each class in order of first
/// occurrence in a left-to-right traversal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolInventory {
    pub propositions: Vec<String>,
    pub predicates: Vec<String>,
    pub constants: Vec<String>,
    pub variables: Vec<String>,
}

impl SymbolInventory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn of(formulas: &[Formula]) -> Self {
        let mut inv = Self::new();
        for f in formulas {
            inv.extend(f);
        }
        inv
    }

    pub fn extend(&mut self, f: &Formula) {
        f.visit_symbols(&mut |kind, name| self.insert(kind, name));
    }

    pub fn insert(&mut self, kind: SymbolKind, name: &str) {
        let set = self.class_mut(kind);
        if !set.iter().any(|s| s == name) {
            set.push(name.to_string());
        }
    }

    pub fn class(&self, kind: SymbolKind) -> &[String] {
        match kind {
            SymbolKind::Proposition => &self.propositions,
            SymbolKind::Predicate => &self.predicates,
            SymbolKind::Constant => &self.constants,
            SymbolKind::Variable => &self.variables,
        }
    }

    fn class_mut(&mut self, kind: SymbolKind) -> &mut Vec<String> {
        match kind {
            SymbolKind::Proposition => &mut self.propositions,
            SymbolKind::Predicate => &mut self.predicates,
            SymbolKind::Constant => &mut self.constants,
            SymbolKind::Variable => &mut self.variables,
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.all().any(|s| s == name)
    }

    pub fn all(&self) -> impl Iterator<Item = &str> {
        self.propositions
            .iter()
            .chain(&self.predicates)
            .chain(&self.constants)
            .chain(&self.variables)
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.propositions.len() + self.predicates.len() + self.constants.len() + self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn collect_symbols(f: &Formula) -> SymbolInventory {
    let mut inv = SymbolInventory::new();
    inv.extend(f);
    inv
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenameError {
    #[error("renaming maps both `{first}` and `{second}` to `{target}`")]
    Collision { first: String, second: String, target: String },
    #[error("`{target}` is not a valid {kind:?} name")]
    InvalidTarget { target: String, kind: SymbolKind },
}

/// Symbol renaming, applied simultaneously to every symbol class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Renaming(BTreeMap<String, String>);

impl Renaming {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: impl Into<String>, to: impl Into<String>) {
        self.0.insert(from.into(), to.into());
    }

    pub fn get<'a>(&'a self, name: &'a str) -> &'a str {
        self.0.get(name).map_or(name, String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// `self` after `first`: a symbol is renamed by `first`, then by `self`.
    pub fn after(&self, first: &Renaming) -> Renaming {
        let mut out = Renaming::new();
        for (k, v) in &first.0 {
            out.insert(k.clone(), self.get(v).to_string());
        }
        for (k, v) in &self.0 {
            if !first.0.contains_key(k) {
                out.insert(k.clone(), v.clone());
            }
        }
        out
    }

    /// Checks that the renaming keeps every symbol of `inv` distinct and in
    /// its lexical class.
    pub fn check(&self, inv: &SymbolInventory) -> Result<(), RenameError> {
        for kind in [SymbolKind::Proposition, SymbolKind::Predicate, SymbolKind::Constant, SymbolKind::Variable] {
            let mut seen: BTreeMap<&str, &str> = BTreeMap::new();
            for name in inv.class(kind) {
                let target = self.get(name);
                let valid = match kind {
                    SymbolKind::Variable => is_variable_name(target),
                    SymbolKind::Predicate => starts_upper(target),
                    SymbolKind::Proposition => starts_lower(target) && !is_variable_name(target),
                    SymbolKind::Constant => starts_lower(target) && !is_variable_name(target),
                };
                if !valid {
                    return Err(RenameError::InvalidTarget { target: target.to_string(), kind });
                }
                if let Some(first) = seen.insert(target, name) {
                    return Err(RenameError::Collision {
                        first: first.to_string(),
                        second: name.clone(),
                        target: target.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Renames without validation; callers are expected to have run
    /// [`Renaming::check`] over the symbols involved.
    pub fn apply_unchecked(&self, f: &Formula) -> Formula {
        f.map_symbols(&mut |_, name| self.get(name).to_string())
    }
}

impl FromIterator<(String, String)> for Renaming {
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> Self {
        Renaming(iter.into_iter().collect())
    }
}

pub fn rename_symbols(f: &Formula, map: &Renaming) -> Result<Formula, RenameError> {
    map.check(&collect_symbols(f))?;
    Ok(map.apply_unchecked(f))
}

/// Every symbol name of `formulas`, regardless of class.
pub fn symbol_names(formulas: &[Formula]) -> HashSet<String> {
    let mut out = HashSet::new();
    for f in formulas {
        f.visit_symbols(&mut |_, n| {
            out.insert(n.to_string());
        });
    }
    out
}
