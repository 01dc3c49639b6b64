//! Templated natural-language rendering of formulas.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, Renaming, SymbolInventory, SymbolKind, Term};

const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.json");

#[derive(Debug, Error)]
pub enum NlError {
    #[error("symbol `{0}` has no lexicon entry")]
    UnmappedSymbol(String),
    #[error("lexicon has too few {0} for this example")]
    PoolExhausted(&'static str),
    #[error("no lexicon entry `{0}`")]
    UnknownEntry(String),
    #[error("invalid lexicon: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Surface forms of a verb phrase, or of a whole clause for impersonal
/// entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub key: String,
    pub present: String,
    pub conditional: String,
    pub negated: String,
    pub negated_conditional: String,
    /// Plural noun for predicates like "is an astronaut".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plural: Option<String>,
    /// Word used after "are" in "some Xs are Y".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<String>,
}

impl Entry {
    fn form(&self, mode: Mode, negated: bool) -> &str {
        match (mode, negated) {
            (Mode::Present, false) => &self.present,
            (Mode::Conditional, false) => &self.conditional,
            (Mode::Present, true) => &self.negated,
            (Mode::Conditional, true) => &self.negated_conditional,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub subjects: Vec<String>,
    pub predicates: Vec<Entry>,
    pub actions: Vec<Entry>,
    pub impersonal: Vec<Entry>,
}

impl Default for Lexicon {
    fn default() -> Self {
        serde_json::from_str(DEFAULT_LEXICON).expect("embedded lexicon parses")
    }
}

impl Lexicon {
    pub fn from_json(text: &str) -> Result<Self, NlError> {
        let lex: Lexicon = serde_json::from_str(text)?;
        lex.check()?;
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self, NlError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn check(&self) -> Result<(), NlError> {
        let mut seen = HashSet::new();
        for s in &self.subjects {
            if !seen.insert(s.as_str()) {
                return Err(NlError::Invalid(format!("duplicate subject `{s}`")));
            }
        }
        let mut keys = HashSet::new();
        for e in self.predicates.iter().chain(&self.actions).chain(&self.impersonal) {
            if !keys.insert(e.key.as_str()) {
                return Err(NlError::Invalid(format!("duplicate entry `{}`", e.key)));
            }
        }
        Ok(())
    }

    fn find<'a>(pool: &'a [Entry], key: &str) -> Result<&'a Entry, NlError> {
        pool.iter().find(|e| e.key == key).ok_or_else(|| NlError::UnknownEntry(key.to_string()))
    }

    pub fn predicate(&self, key: &str) -> Result<&Entry, NlError> {
        Self::find(&self.predicates, key)
    }

    pub fn action(&self, key: &str) -> Result<&Entry, NlError> {
        Self::find(&self.actions, key)
    }

    pub fn impersonal_entry(&self, key: &str) -> Result<&Entry, NlError> {
        Self::find(&self.impersonal, key)
    }

    /// Predicate or action entry by key.
    pub fn subject_entry(&self, key: &str) -> Result<&Entry, NlError> {
        self.predicate(key).or_else(|_| self.action(key))
    }
}

/// How a proposition is realised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phrase {
    /// "James is rich", "Susan plays squash".
    Subject { subject: String, entry: Entry },
    /// "it is raining".
    Impersonal(Entry),
}

/// Lexical choices for every symbol of one example.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexAssignment {
    pub propositions: BTreeMap<String, Phrase>,
    pub predicates: BTreeMap<String, Entry>,
    pub constants: BTreeMap<String, String>,
}

impl LexAssignment {
    pub fn with_subject(mut self, prop: &str, subject: &str, entry: &Entry) -> Self {
        self.propositions
            .insert(prop.to_string(), Phrase::Subject { subject: subject.to_string(), entry: entry.clone() });
        self
    }

    pub fn with_impersonal(mut self, prop: &str, entry: &Entry) -> Self {
        self.propositions.insert(prop.to_string(), Phrase::Impersonal(entry.clone()));
        self
    }

    pub fn with_predicate(mut self, pred: &str, entry: &Entry) -> Self {
        self.predicates.insert(pred.to_string(), entry.clone());
        self
    }

    pub fn with_constant(mut self, constant: &str, subject: &str) -> Self {
        self.constants.insert(constant.to_string(), subject.to_string());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Predicate,
    Action,
    Impersonal,
}

/// Samples lexical choices without replacement: no subject, predicate,
/// action or impersonal clause is used twice in one example.
pub fn assign_lexicon<R: Rng + ?Sized>(
    inventory: &SymbolInventory,
    lexicon: &Lexicon,
    rng: &mut R,
) -> Result<LexAssignment, NlError> {
    let mut subjects: Vec<&String> = lexicon.subjects.iter().collect();
    let mut preds: Vec<&Entry> = lexicon.predicates.iter().collect();
    let mut actions: Vec<&Entry> = lexicon.actions.iter().collect();
    let mut impersonal: Vec<&Entry> = lexicon.impersonal.iter().collect();
    subjects.shuffle(rng);
    preds.shuffle(rng);
    actions.shuffle(rng);
    impersonal.shuffle(rng);

    let mut out = LexAssignment::default();
    for c in inventory.class(SymbolKind::Constant) {
        let s = subjects.pop().ok_or(NlError::PoolExhausted("subjects"))?;
        out.constants.insert(c.clone(), s.clone());
    }
    for p in inventory.class(SymbolKind::Predicate) {
        let from_preds = match (preds.is_empty(), actions.is_empty()) {
            (true, true) => return Err(NlError::PoolExhausted("predicates and actions")),
            (false, true) => true,
            (true, false) => false,
            (false, false) => rng.gen_bool(preds.len() as f64 / (preds.len() + actions.len()) as f64),
        };
        let e = if from_preds { preds.pop() } else { actions.pop() }.expect("checked non-empty");
        out.predicates.insert(p.clone(), e.clone());
    }
    for p in inventory.class(SymbolKind::Proposition) {
        let mut kinds = Vec::new();
        if !subjects.is_empty() && !preds.is_empty() {
            kinds.push(Kind::Predicate);
        }
        if !subjects.is_empty() && !actions.is_empty() {
            kinds.push(Kind::Action);
        }
        if !impersonal.is_empty() {
            kinds.push(Kind::Impersonal);
        }
        let kind = *kinds.choose(rng).ok_or(NlError::PoolExhausted("phrases"))?;
        let phrase = match kind {
            Kind::Impersonal => Phrase::Impersonal(impersonal.pop().expect("non-empty").clone()),
            Kind::Predicate | Kind::Action => {
                let entry = if kind == Kind::Predicate { preds.pop() } else { actions.pop() };
                Phrase::Subject {
                    subject: subjects.pop().expect("non-empty").clone(),
                    entry: entry.expect("non-empty").clone(),
                }
            }
        };
        out.propositions.insert(p.clone(), phrase);
    }
    Ok(out)
}

/// Grammatical mode of a clause: antecedents of implications use the
/// conditional forms ("were rich", "works"), everything else the present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Present,
    Conditional,
}

fn literal_nl(atom: &Formula, negated: bool, a: &LexAssignment, mode: Mode) -> Result<String, NlError> {
    match atom {
        Formula::Atom(p) => match a.propositions.get(p) {
            Some(Phrase::Subject { subject, entry }) => Ok(format!("{subject} {}", entry.form(mode, negated))),
            Some(Phrase::Impersonal(entry)) => Ok(entry.form(mode, negated).to_string()),
            None => Err(NlError::UnmappedSymbol(p.clone())),
        },
        Formula::Pred(name, t) => {
            let entry = a.predicates.get(name).ok_or_else(|| NlError::UnmappedSymbol(name.clone()))?;
            let subject = match t {
                Term::Var(v) => v.as_str(),
                Term::Const(c) => a.constants.get(c).ok_or_else(|| NlError::UnmappedSymbol(c.clone()))?.as_str(),
            };
            Ok(format!("{subject} {}", entry.form(mode, negated)))
        }
        _ => unreachable!("literal_nl called on a compound formula"),
    }
}

/// Renders a clause (lowercase, no final period).
pub fn render_nl(f: &Formula, a: &LexAssignment, mode: Mode) -> Result<String, NlError> {
    Ok(match f {
        Formula::Atom(_) | Formula::Pred(..) => literal_nl(f, false, a, mode)?,
        Formula::Not(inner) if inner.is_atomic() => literal_nl(inner, true, a, mode)?,
        Formula::Not(inner) => format!("it is not the case that {}", render_nl(inner, a, Mode::Present)?),
        Formula::And(l, r) => format!("{} and {}", render_nl(l, a, mode)?, render_nl(r, a, mode)?),
        Formula::Or(l, r) => format!("{} or {}", render_nl(l, a, mode)?, render_nl(r, a, mode)?),
        Formula::Implies(l, r) => {
            format!("if {}, then {}", render_nl(l, a, Mode::Conditional)?, render_nl(r, a, Mode::Present)?)
        }
        Formula::Iff(l, r) => {
            format!("{} if and only if {}", render_nl(l, a, Mode::Present)?, render_nl(r, a, Mode::Present)?)
        }
        Formula::ForAll(v, body) => format!("for all {v}, {}", render_nl(body, a, Mode::Present)?),
        Formula::Exists(v, body) => match some_are(v, body, a) {
            Some(text) => text,
            None => format!("there is at least one {v} for which {}", render_nl(body, a, Mode::Present)?),
        },
    })
}

// `exists x: P(x) and Q(x)` with a noun P becomes "some Ps are Q".
fn some_are(v: &str, body: &Formula, a: &LexAssignment) -> Option<String> {
    let Formula::And(l, r) = body else { return None };
    let (Formula::Pred(p, Term::Var(x1)), Formula::Pred(q, Term::Var(x2))) = (&**l, &**r) else { return None };
    if x1 != v || x2 != v {
        return None;
    }
    let plural = a.predicates.get(p)?.plural.as_ref()?;
    let complement = a.predicates.get(q)?.complement.as_ref()?;
    Some(format!("some {plural} are {complement}"))
}

pub fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// A full sentence: capitalised, with a final period.
pub fn sentence(f: &Formula, a: &LexAssignment) -> Result<String, NlError> {
    Ok(format!("{}.", capitalize(&render_nl(f, a, Mode::Present)?)))
}

fn canonical_name(kind: SymbolKind, i: usize) -> String {
    let bases: &[&str] = match kind {
        SymbolKind::Proposition => &["p", "q", "r", "s", "t", "u", "v", "w"],
        SymbolKind::Predicate => &["P", "Q", "R", "S", "T", "U", "V", "W"],
        SymbolKind::Constant => &["a", "b", "c", "d", "e", "f", "g", "h"],
        SymbolKind::Variable => unreachable!("variables keep their names"),
    };
    let (round, k) = (i / bases.len(), i % bases.len());
    if round == 0 {
        bases[k].to_string()
    } else {
        format!("{}_{round}", bases[k])
    }
}

/// Renames propositions, predicates and constants to p, q, r, ... /
/// P, Q, ... / a, b, ... in order of first appearance. Variables are kept.
pub fn canonicalize_type1(formulas: &[Formula]) -> Vec<Formula> {
    let inv = SymbolInventory::of(formulas);
    let mut map = Renaming::new();
    for kind in [SymbolKind::Proposition, SymbolKind::Predicate, SymbolKind::Constant] {
        for (i, name) in inv.class(kind).iter().enumerate() {
            map.insert(name.clone(), canonical_name(kind, i));
        }
    }
    formulas.iter().map(|f| map.apply_unchecked(f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn fs(xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn default_lexicon_sizes() {
        let lex = Lexicon::default();
        lex.check().unwrap();
        assert_eq!(lex.subjects.len(), 20);
        assert_eq!(lex.predicates.len(), 30);
        assert_eq!(lex.actions.len(), 15);
        assert_eq!(lex.impersonal.len(), 8);
    }

    #[test]
    fn rendering_examples() {
        let lex = Lexicon::default();
        let a = LexAssignment::default()
            .with_subject("p", "James", lex.predicate("rich").unwrap())
            .with_subject("q", "Susan", lex.action("play squash").unwrap())
            .with_subject("w", "David", lex.action("work").unwrap())
            .with_impersonal("c", lex.impersonal_entry("cloudy").unwrap())
            .with_impersonal("r", lex.impersonal_entry("rain").unwrap())
            .with_predicate("A", lex.predicate("astronaut").unwrap())
            .with_predicate("M", lex.action("climb a mountain").unwrap())
            .with_predicate("E", lex.predicate("electrician").unwrap())
            .with_predicate("R", lex.predicate("rich").unwrap());
        let s = |t: &str| sentence(&f(t), &a).unwrap();
        assert_eq!(s("p -> q"), "If James were rich, then Susan is playing squash.");
        assert_eq!(s("w <-> c"), "David is working if and only if it is cloudy.");
        assert_eq!(s("r"), "It is raining.");
        assert_eq!(s("~w"), "David is not working.");
        assert_eq!(s("w -> c"), "If David works, then it is cloudy.");
        assert_eq!(
            s("exists x: A(x) -> M(x)"),
            "There is at least one x for which if x were an astronaut, then x is climbing a mountain."
        );
        assert_eq!(s("forall x: M(x) -> A(x)"), "For all x, if x climbs a mountain, then x is an astronaut.");
        assert_eq!(s("forall x_4: E(x_4)"), "For all x_4, x_4 is an electrician.");
        assert_eq!(s("exists x: A(x) and R(x)"), "Some astronauts are rich.");
        assert_eq!(s("exists x: R(x) and A(x)"), "There is at least one x for which x is rich and x is an astronaut.");
        assert_eq!(s("~(w and c)"), "It is not the case that David is working and it is cloudy.");
        assert!(matches!(sentence(&f("z"), &a), Err(NlError::UnmappedSymbol(_))));
    }

    #[test]
    fn assignment_is_without_replacement() {
        let lex = Lexicon::default();
        let inv = SymbolInventory::of(&fs(&["p -> q", "r or s", "t and u", "P(a) -> Q(b)", "forall x: R(x)"]));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = assign_lexicon(&inv, &lex, &mut rng).unwrap();
            let mut subjects: Vec<&str> = a.constants.values().map(String::as_str).collect();
            let mut entries: Vec<&str> = a.predicates.values().map(|e| e.key.as_str()).collect();
            for ph in a.propositions.values() {
                match ph {
                    Phrase::Subject { subject, entry } => {
                        subjects.push(subject);
                        entries.push(&entry.key);
                    }
                    Phrase::Impersonal(e) => entries.push(&e.key),
                }
            }
            let n = subjects.len();
            subjects.sort();
            subjects.dedup();
            assert_eq!(subjects.len(), n);
            let n = entries.len();
            entries.sort();
            entries.dedup();
            assert_eq!(entries.len(), n);
            assert_eq!(a.propositions.len(), 6);
        }
    }

    #[test]
    fn pool_exhaustion() {
        let lex = Lexicon::default();
        let consts: Vec<Formula> = (0..21).map(|i| f(&format!("P(c_{i})"))).collect();
        let inv = SymbolInventory::of(&consts);
        assert!(matches!(
            assign_lexicon(&inv, &lex, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(NlError::PoolExhausted(_))
        ));
    }

    #[test]
    fn canonical_naming() {
        assert_eq!(canonicalize_type1(&fs(&["a -> b", "a", "b"])), fs(&["p -> q", "p", "q"]));
        assert_eq!(canonicalize_type1(&fs(&["r -> s", "t"])), fs(&["p -> q", "r"]));
        assert_eq!(canonicalize_type1(&fs(&["q -> p", "p"])), fs(&["p -> q", "q"]));
        let c = fs(&["p -> q", "p", "q"]);
        assert_eq!(canonicalize_type1(&c), c);
        assert_eq!(
            canonicalize_type1(&fs(&["forall x_3: R(x_3) -> P_1(x_3)", "R(d)"])),
            fs(&["forall x_3: P(x_3) -> Q(x_3)", "P(a)"])
        );
    }

    #[test]
    fn lexicon_file_round_trip() {
        let lex = Lexicon::default();
        let text = serde_json::to_string(&lex).unwrap();
        assert_eq!(Lexicon::from_json(&text).unwrap(), lex);
        let mut dup = lex.clone();
        dup.subjects.push("James".into());
        assert!(Lexicon::from_json(&serde_json::to_string(&dup).unwrap()).is_err());
    }
}
