//! Inference rule catalog and pattern matching.
//!
//! A rule is written with ordinary formulas whose leaves are placeholders:
//! `p`, `q`, ... stand for ground literals, `P(x)` for a predicate literal
//! applied to a bound variable, `P(a)` for one applied to a constant.
//! Matching follows three conventions:
//!
//! * a placeholder binds a whole literal (`p` may bind `~q_2`);
//! * `~p` in a pattern matches the complement of `p`'s binding, so
//!   `p -> q, ~q` matches `p_2 -> ~q_2, q_2`;
//! * `<->` is matched in either orientation.
//!
//! Bindings are injective: two placeholders never bind the same underlying
//! atom, predicate or term.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use thiserror::Error;

use crate::formula::{parse_formula, Formula, SymbolInventory, SymbolKind, Term};
use crate::semantics::{oracle_verdict, DomainVerdict, EntailmentVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleFamily {
    Propositional,
    /// `universal instantiation` and `existential generalization`.
    Quantifier,
    Universal,
    Existential,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferenceRule {
    pub name: String,
    pub premises: Vec<Formula>,
    pub inferences: Vec<Formula>,
    pub contradictions: Vec<Formula>,
    pub unrelated: Vec<Formula>,
    /// Placeholders in first-occurrence order over premises, inferences and
    /// unrelated clauses.
    pub symbols: Vec<String>,
    pub family: RuleFamily,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule `{rule}`: {detail}")]
    Invalid { rule: String, detail: String },
    #[error("bad pattern `{text}`: {source}")]
    Pattern { text: String, source: crate::formula::ParseError },
}

impl InferenceRule {
    fn from_notation(
        name: &str,
        premises: &[&str],
        inferences: &[&str],
        contradictions: &[&str],
        unrelated: &[&str],
        family: RuleFamily,
    ) -> Result<Self, RuleError> {
        let parse = |xs: &[&str]| {
            xs.iter()
                .map(|t| parse_formula(t).map_err(|source| RuleError::Pattern { text: t.to_string(), source }))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(Self::new(name, parse(premises)?, parse(inferences)?, parse(contradictions)?, parse(unrelated)?, family))
    }

    pub fn new(
        name: &str,
        premises: Vec<Formula>,
        inferences: Vec<Formula>,
        contradictions: Vec<Formula>,
        unrelated: Vec<Formula>,
        family: RuleFamily,
    ) -> Self {
        let all: Vec<Formula> = premises.iter().chain(&inferences).chain(&unrelated).cloned().collect();
        let symbols = SymbolInventory::of(&all).all().map(str::to_string).collect();
        Self { name: name.to_string(), premises, inferences, contradictions, unrelated, symbols, family }
    }

    /// Index of the inference that `self.contradictions[index]` contradicts.
    pub fn contradiction_partner(&self, index: usize) -> Option<usize> {
        let c = self.contradictions.get(index)?;
        self.inferences.iter().position(|i| &i.contradiction() == c)
    }

    /// Every substitution under which the premise patterns match
    /// `candidates` position by position.
    pub fn match_premises(&self, candidates: &[Formula]) -> Vec<Substitution> {
        if candidates.len() != self.premises.len() {
            return Vec::new();
        }
        let mut current = vec![Substitution::default()];
        for (pat, f) in self.premises.iter().zip(candidates) {
            let mut next = Vec::new();
            for s in &current {
                match_formula(pat, f, s, &mut next);
            }
            if next.is_empty() {
                return next;
            }
            current = next;
        }
        dedup(current)
    }

    /// True if some ordering of `step_premises` matches the premise patterns
    /// and `conclusion` matches one of the inferences under the same
    /// substitution.
    pub fn validates(&self, step_premises: &[Formula], conclusion: &Formula) -> bool {
        if step_premises.len() != self.premises.len() {
            return false;
        }
        let mut order: Vec<usize> = (0..step_premises.len()).collect();
        loop {
            let ordered: Vec<Formula> = order.iter().map(|&i| step_premises[i].clone()).collect();
            for s in self.match_premises(&ordered) {
                let mut out = Vec::new();
                for inf in &self.inferences {
                    match_formula(inf, conclusion, &s, &mut out);
                    if !out.is_empty() {
                        return true;
                    }
                }
            }
            if !next_permutation(&mut order) {
                return false;
            }
        }
    }

    fn placeholders(&self) -> SymbolInventory {
        let all: Vec<Formula> = self
            .premises
            .iter()
            .chain(&self.inferences)
            .chain(&self.contradictions)
            .chain(&self.unrelated)
            .cloned()
            .collect();
        SymbolInventory::of(&all)
    }

    /// Renders the rule as `name: P1, P2 => I1, I2 | contradicts: ... | unrelated: ...`.
    pub fn describe(&self) -> String {
        let join = |xs: &[Formula]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        format!(
            "{}: {} => {} | contradicts: {} | unrelated: {}",
            self.name,
            join(&self.premises),
            join(&self.inferences),
            join(&self.contradictions),
            join(&self.unrelated)
        )
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

// ---------------------------------------------------------------------------
// Substitutions and matching
// ---------------------------------------------------------------------------

/// Placeholder bindings produced by matching a rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    /// Propositional placeholder -> ground literal.
    props: BTreeMap<String, Formula>,
    /// Predicate placeholder -> (predicate, negated).
    preds: BTreeMap<String, (String, bool)>,
    /// Variable or constant placeholder -> name.
    terms: BTreeMap<String, String>,
}

impl Substitution {
    pub fn is_empty(&self) -> bool {
        self.props.is_empty() && self.preds.is_empty() && self.terms.is_empty()
    }

    pub fn prop(&self, placeholder: &str) -> Option<&Formula> {
        self.props.get(placeholder)
    }

    pub fn pred(&self, placeholder: &str) -> Option<(&str, bool)> {
        self.preds.get(placeholder).map(|(n, neg)| (n.as_str(), *neg))
    }

    pub fn term(&self, placeholder: &str) -> Option<&str> {
        self.terms.get(placeholder).map(String::as_str)
    }

    pub fn bind_prop(&mut self, placeholder: &str, literal: Formula) -> bool {
        if let Some(existing) = self.props.get(placeholder) {
            return *existing == literal;
        }
        let Some(atom) = literal.atom_of_literal() else { return false };
        if self.props.values().any(|l| l.atom_of_literal() == Some(atom)) {
            return false;
        }
        self.props.insert(placeholder.to_string(), literal);
        true
    }

    pub fn bind_pred(&mut self, placeholder: &str, name: &str, negated: bool) -> bool {
        if let Some((n, neg)) = self.preds.get(placeholder) {
            return n == name && *neg == negated;
        }
        if self.preds.values().any(|(n, _)| n == name) {
            return false;
        }
        self.preds.insert(placeholder.to_string(), (name.to_string(), negated));
        true
    }

    pub fn bind_term(&mut self, placeholder: &str, name: &str) -> bool {
        if let Some(n) = self.terms.get(placeholder) {
            return n == name;
        }
        if self.terms.values().any(|n| n == name) {
            return false;
        }
        self.terms.insert(placeholder.to_string(), name.to_string());
        true
    }

    /// Symbols the bindings introduce.
    pub fn image_symbols(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        for l in self.props.values() {
            out.extend(crate::formula::symbol_names(std::slice::from_ref(l)));
        }
        out.extend(self.preds.values().map(|(n, _)| n.clone()));
        out.extend(self.terms.values().cloned());
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, v) in &self.props {
            parts.push(format!("{k}↦{v}"));
        }
        for (k, (n, neg)) in &self.preds {
            parts.push(format!("{k}↦{}{n}", if *neg { "~" } else { "" }));
        }
        for (k, v) in &self.terms {
            parts.push(format!("{k}↦{v}"));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn dedup(v: Vec<Substitution>) -> Vec<Substitution> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|s| seen.insert(s.clone())).collect()
}

fn is_leaf(f: &Formula) -> bool {
    f.is_atomic()
}

fn is_ground(f: &Formula) -> bool {
    !matches!(f, Formula::Pred(_, Term::Var(_)))
}

/// Matches `pat` against `f`, extending `s`; every resulting substitution is
/// pushed onto `out`.
pub fn match_formula(pat: &Formula, f: &Formula, s: &Substitution, out: &mut Vec<Substitution>) {
    match pat {
        Formula::Atom(p) => {
            if f.is_literal() && f.atom_of_literal().is_some_and(is_ground) {
                let mut s = s.clone();
                if s.bind_prop(p, f.clone()) {
                    out.push(s);
                }
            }
        }
        Formula::Pred(pp, pt) => {
            let Some(atom) = f.atom_of_literal() else { return };
            let Formula::Pred(name, t) = atom else { return };
            let negated = !f.is_atomic();
            let same_kind = matches!((pt, t), (Term::Var(_), Term::Var(_)) | (Term::Const(_), Term::Const(_)));
            if !same_kind {
                return;
            }
            let mut s = s.clone();
            if s.bind_pred(pp, name, negated) && s.bind_term(pt.name(), t.name()) {
                out.push(s);
            }
        }
        Formula::Not(inner) if is_leaf(inner) => {
            if f.is_literal() {
                match_formula(inner, &f.complement(), s, out);
            }
        }
        Formula::Not(inner) => {
            if let Formula::Not(g) = f {
                if !is_leaf(g) {
                    match_formula(inner, g, s, out);
                }
            }
        }
        Formula::And(pl, pr) => {
            if let Formula::And(l, r) = f {
                match_pair(pl, pr, l, r, s, out);
            }
        }
        Formula::Or(pl, pr) => {
            if let Formula::Or(l, r) = f {
                match_pair(pl, pr, l, r, s, out);
            }
        }
        Formula::Implies(pl, pr) => {
            if let Formula::Implies(l, r) = f {
                match_pair(pl, pr, l, r, s, out);
            }
        }
        Formula::Iff(pl, pr) => {
            if let Formula::Iff(l, r) = f {
                let before = out.len();
                match_pair(pl, pr, l, r, s, out);
                match_pair(pl, pr, r, l, s, out);
                let tail = dedup(out.split_off(before));
                out.extend(tail);
            }
        }
        Formula::ForAll(pv, pb) => {
            if let Formula::ForAll(v, b) = f {
                let mut s = s.clone();
                if s.bind_term(pv, v) {
                    match_formula(pb, b, &s, out);
                }
            }
        }
        Formula::Exists(pv, pb) => {
            if let Formula::Exists(v, b) = f {
                let mut s = s.clone();
                if s.bind_term(pv, v) {
                    match_formula(pb, b, &s, out);
                }
            }
        }
    }
}

fn match_pair(pl: &Formula, pr: &Formula, l: &Formula, r: &Formula, s: &Substitution, out: &mut Vec<Substitution>) {
    let mut left = Vec::new();
    match_formula(pl, l, s, &mut left);
    for s in &left {
        match_formula(pr, r, s, out);
    }
}

/// Instantiates a pattern; `None` if some placeholder is unbound.
pub fn instantiate(pat: &Formula, s: &Substitution) -> Option<Formula> {
    Some(match pat {
        Formula::Atom(p) => s.props.get(p)?.clone(),
        Formula::Pred(pp, pt) => {
            let (name, negated) = s.preds.get(pp)?;
            let t = s.terms.get(pt.name())?.clone();
            let term = match pt {
                Term::Var(_) => Term::Var(t),
                Term::Const(_) => Term::Const(t),
            };
            let atom = Formula::Pred(name.clone(), term);
            if *negated {
                Formula::not(atom)
            } else {
                atom
            }
        }
        Formula::Not(inner) if is_leaf(inner) => instantiate(inner, s)?.complement(),
        Formula::Not(inner) => Formula::not(instantiate(inner, s)?),
        Formula::And(l, r) => Formula::and(instantiate(l, s)?, instantiate(r, s)?),
        Formula::Or(l, r) => Formula::or(instantiate(l, s)?, instantiate(r, s)?),
        Formula::Implies(l, r) => Formula::implies(instantiate(l, s)?, instantiate(r, s)?),
        Formula::Iff(l, r) => Formula::iff(instantiate(l, s)?, instantiate(r, s)?),
        Formula::ForAll(v, b) => Formula::forall(s.terms.get(v)?.clone(), instantiate(b, s)?),
        Formula::Exists(v, b) => Formula::exists(s.terms.get(v)?.clone(), instantiate(b, s)?),
    })
}

/// Hands out symbol names that do not clash with anything already used by a
/// problem. Names take the form `<placeholder>_<n>`, where `n` starts at the
/// current step counter.
#[derive(Clone, Debug)]
pub struct FreshNamer {
    used: HashSet<String>,
    counter: usize,
}

impl FreshNamer {
    pub fn new<I: IntoIterator<Item = String>>(used: I) -> Self {
        Self { used: used.into_iter().collect(), counter: 1 }
    }

    /// Moves on to the next growth step.
    pub fn advance(&mut self) {
        self.counter += 1;
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    pub fn fresh(&mut self, placeholder: &str) -> String {
        let mut k = self.counter;
        loop {
            let name = format!("{placeholder}_{k}");
            if self.used.insert(name.clone()) {
                return name;
            }
            k += 1;
        }
    }

    /// Binds every placeholder of `rule` left unbound in `s` to a fresh
    /// symbol.
    pub fn complete(&mut self, rule: &InferenceRule, s: &mut Substitution) {
        let ph = rule.placeholders();
        for p in &ph.propositions {
            if s.prop(p).is_none() {
                let name = self.fresh(p);
                s.props.insert(p.clone(), Formula::Atom(name));
            }
        }
        for p in &ph.predicates {
            if s.pred(p).is_none() {
                let name = self.fresh(p);
                s.preds.insert(p.clone(), (name, false));
            }
        }
        for t in ph.variables.iter().chain(&ph.constants) {
            if s.term(t).is_none() {
                let name = self.fresh(t);
                s.terms.insert(t.clone(), name);
            }
        }
    }
}

/// One-step forward application. Conclusions needing a placeholder that the
/// premises leave unbound are dropped unless `fresh` is supplied.
pub fn apply_forward_with(
    rule: &InferenceRule,
    candidates: &[Formula],
    mut fresh: Option<&mut FreshNamer>,
) -> Vec<(Formula, Substitution)> {
    let mut out = Vec::new();
    for mut s in rule.match_premises(candidates) {
        if let Some(namer) = fresh.as_deref_mut() {
            namer.complete(rule, &mut s);
        }
        for inf in &rule.inferences {
            if let Some(c) = instantiate(inf, &s) {
                out.push((c, s.clone()));
            }
        }
    }
    out
}

pub fn apply_forward(rule: &InferenceRule, candidates: &[Formula]) -> Vec<(Formula, Substitution)> {
    apply_forward_with(rule, candidates, None)
}

#[derive(Clone, Debug)]
pub struct BackwardMatch<'a> {
    pub rule: &'a InferenceRule,
    pub substitution: Substitution,
    pub new_premises: Vec<Formula>,
}

/// Picks uniformly among every (rule, substitution) whose inference pattern
/// matches `target`, binds the remaining placeholders to fresh symbols and
/// returns the instantiated rule premises.
pub fn match_backward<'a, R: Rng + ?Sized>(
    rules: &'a Catalog,
    target: &Formula,
    rng: &mut R,
    namer: &mut FreshNamer,
) -> Option<BackwardMatch<'a>> {
    let candidates = backward_candidates(rules, target);
    if candidates.is_empty() {
        return None;
    }
    let (idx, mut s) = candidates[rng.gen_range(0..candidates.len())].clone();
    let rule = &rules.rules[idx];
    namer.complete(rule, &mut s);
    let new_premises = rule.premises.iter().map(|p| instantiate(p, &s).expect("substitution completed")).collect();
    Some(BackwardMatch { rule, substitution: s, new_premises })
}

/// Every (rule index, substitution) that derives `target` in one step.
pub fn backward_candidates(rules: &Catalog, target: &Formula) -> Vec<(usize, Substitution)> {
    let mut out: Vec<(usize, Substitution)> = Vec::new();
    for (idx, rule) in rules.rules.iter().enumerate() {
        let mut substs = Vec::new();
        for inf in &rule.inferences {
            match_formula(inf, target, &Substitution::default(), &mut substs);
        }
        for s in dedup(substs) {
            out.push((idx, s));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Catalog {
    rules: Vec<InferenceRule>,
}

impl Catalog {
    pub fn new(rules: Vec<InferenceRule>) -> Self {
        Self { rules }
    }

    /// The 17 propositional rules, the two quantifier rules and the 47
    /// derived quantified variants.
    pub fn standard() -> Result<Self, RuleError> {
        let base = builtin_rules()?;
        let propositional: Vec<InferenceRule> =
            base.iter().filter(|r| r.family == RuleFamily::Propositional).cloned().collect();
        let mut rules = base;
        rules.extend(derive_quantified_rules(&propositional)?);
        Ok(Self { rules })
    }

    /// Shared instance of [`Catalog::standard`].
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::standard().expect("built-in catalog is valid"))
    }

    pub fn iter(&self) -> impl Iterator<Item = &InferenceRule> {
        self.rules.iter()
    }

    pub fn rules(&self) -> &[InferenceRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn by_name(&self, name: &str) -> impl Iterator<Item = &InferenceRule> + '_ {
        let name = name.to_string();
        self.rules.iter().filter(move |r| r.name == name)
    }

    pub fn get(&self, index: usize) -> Option<&InferenceRule> {
        self.rules.get(index)
    }
}

type RuleRow = (&'static str, &'static [&'static str], &'static [&'static str], &'static [&'static str]);

// (name, premises, inferences, contradictions); unrelated clauses use the
// first letter of p, q, r, s, t the rule does not mention.
const PROPOSITIONAL: [RuleRow; 17] = [
    ("modus ponens", &["p -> q", "p"], &["q"], &["~q"]),
    ("modus tollens", &["p -> q", "~q"], &["~p"], &["p"]),
    ("hypothetical syllogism", &["p -> q", "q -> r"], &["p -> r"], &[]),
    ("disjunctive syllogism", &["p or q", "~p"], &["q"], &["~q"]),
    ("conjunction", &["p", "q"], &["p and q", "q and p"], &[]),
    ("simplification", &["p and q"], &["p"], &["~p"]),
    ("simplification", &["p and q"], &["q"], &["~q"]),
    ("addition", &["p"], &["p or q", "q or p"], &[]),
    ("resolution", &["p or q", "~p or r"], &["q or r"], &[]),
    ("biconditional introduction", &["p -> q", "q -> p"], &["p <-> q"], &[]),
    ("biconditional elimination", &["p <-> q"], &["p -> q", "q -> p"], &[]),
    ("biconditional elimination", &["p <-> q", "~q"], &["~p"], &["p"]),
    ("biconditional elimination", &["p <-> q", "p"], &["q"], &["~q"]),
    ("de morgan's law", &["~(p and q)"], &["~p or ~q"], &[]),
    ("de morgan's law", &["~(p or q)"], &["~p and ~q"], &[]),
    ("constructive dilemma", &["p -> r", "q -> s", "p or q"], &["r or s"], &[]),
    ("destructive dilemma", &["p -> r", "q -> s", "~r or ~s"], &["~p or ~q"], &[]),
];

/// The 17 propositional rules plus `universal instantiation` and
/// `existential generalization`.
pub fn builtin_rules() -> Result<Vec<InferenceRule>, RuleError> {
    let mut rules = Vec::with_capacity(19);
    for (name, premises, inferences, contradictions) in PROPOSITIONAL {
        let used = SymbolInventory::of(
            &premises
                .iter()
                .chain(inferences)
                .map(|t| parse_formula(t).expect("catalog pattern parses"))
                .collect::<Vec<_>>(),
        );
        let spare = ["p", "q", "r", "s", "t"]
            .into_iter()
            .find(|c| !used.propositions.iter().any(|u| u == c))
            .expect("a spare placeholder");
        let not_spare = format!("~{spare}");
        rules.push(InferenceRule::from_notation(
            name,
            premises,
            inferences,
            contradictions,
            &[spare, &not_spare],
            RuleFamily::Propositional,
        )?);
    }
    rules.push(InferenceRule::from_notation(
        "universal instantiation",
        &["forall x: P(x)"],
        &["P(a)"],
        &["~P(a)"],
        &["Q(a)", "~Q(a)"],
        RuleFamily::Quantifier,
    )?);
    rules.push(InferenceRule::from_notation(
        "existential generalization",
        &["P(a)"],
        &["exists x: P(x)"],
        &["forall x: ~P(x)"],
        &["exists x: Q(x)", "exists x: ~Q(x)"],
        RuleFamily::Quantifier,
    )?);
    for r in &rules {
        validate_rule(r)?;
    }
    Ok(rules)
}

// `p` -> `P(x)` throughout a propositional pattern.
fn lift(f: &Formula) -> Formula {
    match f {
        Formula::Atom(n) => Formula::pred(n.to_uppercase(), Term::var("x")),
        Formula::Not(x) => Formula::not(lift(x)),
        Formula::And(l, r) => Formula::and(lift(l), lift(r)),
        Formula::Or(l, r) => Formula::or(lift(l), lift(r)),
        Formula::Implies(l, r) => Formula::implies(lift(l), lift(r)),
        Formula::Iff(l, r) => Formula::iff(lift(l), lift(r)),
        other => other.clone(),
    }
}

fn all(f: &Formula) -> Formula {
    Formula::forall("x", lift(f))
}

fn some(f: &Formula) -> Formula {
    Formula::exists("x", lift(f))
}

/// One universal variant per propositional rule and one existential variant
/// per premise position: 17 + 30 = 47 rules, each checked by the oracle.
pub fn derive_quantified_rules(prop_rules: &[InferenceRule]) -> Result<Vec<InferenceRule>, RuleError> {
    let mut universal = Vec::new();
    let mut existential = Vec::new();
    for r in prop_rules {
        if r.family != RuleFamily::Propositional {
            return Err(RuleError::Invalid {
                rule: r.name.clone(),
                detail: "only propositional rules can be lifted".into(),
            });
        }
        universal.push(InferenceRule::new(
            &format!("universal {}", r.name),
            r.premises.iter().map(all).collect(),
            r.inferences.iter().map(all).collect(),
            r.contradictions.iter().map(some).collect(),
            r.unrelated.iter().map(all).collect(),
            RuleFamily::Universal,
        ));
        for k in 0..r.premises.len() {
            let premises = r.premises.iter().enumerate().map(|(i, p)| if i == k { some(p) } else { all(p) }).collect();
            existential.push(InferenceRule::new(
                &format!("existential {}", r.name),
                premises,
                r.inferences.iter().map(some).collect(),
                r.contradictions.iter().map(all).collect(),
                r.unrelated.iter().map(some).collect(),
                RuleFamily::Existential,
            ));
        }
    }
    universal.extend(existential);
    for r in &universal {
        validate_rule(r)?;
    }
    Ok(universal)
}

/// Checks a rule on its generic instance (placeholders read as distinct
/// symbols): inferences entailed, contradictions contradicted, unrelated
/// clauses independent, agreeing at every oracle domain size. Every
/// contradiction must also pair with an inference.
pub fn validate_rule(rule: &InferenceRule) -> Result<(), RuleError> {
    let fail = |detail: String| RuleError::Invalid { rule: rule.name.clone(), detail };
    let expect = |f: &Formula, want: EntailmentVerdict| -> Result<(), RuleError> {
        match oracle_verdict(&rule.premises, f) {
            Ok(DomainVerdict::Agreed(v)) if v == want => Ok(()),
            Ok(v) => Err(fail(format!("`{f}` expected {want}, got {v:?}"))),
            Err(e) => Err(fail(e.to_string())),
        }
    };
    for i in &rule.inferences {
        expect(i, EntailmentVerdict::Entailed)?;
    }
    for (k, c) in rule.contradictions.iter().enumerate() {
        expect(c, EntailmentVerdict::Contradicted)?;
        if rule.contradiction_partner(k).is_none() {
            return Err(fail(format!("`{c}` does not directly contradict any inference")));
        }
    }
    for u in &rule.unrelated {
        expect(u, EntailmentVerdict::Independent)?;
    }
    let ph = rule.placeholders();
    if ph.predicates.iter().any(|p| p.contains('_')) || ph.propositions.iter().any(|p| p.contains('_')) {
        return Err(fail("placeholders must be bare letters".into()));
    }
    Ok(())
}

/// Placeholder class of a pattern symbol.
pub fn placeholder_kind(rule: &InferenceRule, name: &str) -> Option<SymbolKind> {
    let ph = rule.placeholders();
    [SymbolKind::Proposition, SymbolKind::Predicate, SymbolKind::Constant, SymbolKind::Variable]
        .into_iter()
        .find(|k| ph.class(*k).iter().any(|s| s == name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn fs(xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|s| f(s)).collect()
    }

    fn rule<'a>(c: &'a Catalog, name: &str) -> &'a InferenceRule {
        c.by_name(name).next().unwrap()
    }

    #[test]
    fn counts() {
        let base = builtin_rules().unwrap();
        assert_eq!(base.len(), 19);
        assert_eq!(base.iter().filter(|r| r.family == RuleFamily::Propositional).count(), 17);
        let c = Catalog::builtin();
        assert_eq!(c.len(), 66);
        assert_eq!(c.iter().filter(|r| r.family == RuleFamily::Universal).count(), 17);
        assert_eq!(c.iter().filter(|r| r.family == RuleFamily::Existential).count(), 30);
    }

    #[test]
    fn modus_ponens_as_printed() {
        let c = Catalog::builtin();
        let mp = rule(c, "modus ponens");
        assert_eq!(mp.premises, fs(&["p -> q", "p"]));
        assert_eq!(mp.inferences, fs(&["q"]));
        assert_eq!(mp.contradictions, fs(&["~q"]));
        assert_eq!(mp.unrelated, fs(&["r", "~r"]));
        assert_eq!(mp.symbols, ["p", "q", "r"]);
    }

    #[test]
    fn universal_instantiation_as_printed() {
        let c = Catalog::builtin();
        let ui = rule(c, "universal instantiation");
        assert_eq!(ui.premises, fs(&["forall x: P(x)"]));
        assert_eq!(ui.inferences, fs(&["P(a)"]));
        assert_eq!(ui.contradictions, fs(&["~P(a)"]));
        assert_eq!(ui.unrelated, fs(&["Q(a)", "~Q(a)"]));
    }

    #[test]
    fn derived_variants() {
        let c = Catalog::builtin();
        let ump = rule(c, "universal modus ponens");
        assert_eq!(ump.premises, fs(&["forall x: P(x) -> Q(x)", "forall x: P(x)"]));
        assert_eq!(ump.inferences, fs(&["forall x: Q(x)"]));
        let emp: Vec<_> = c.by_name("existential modus ponens").collect();
        assert_eq!(emp.len(), 2);
        assert!(emp.iter().any(|r| r.premises == fs(&["forall x: P(x) -> Q(x)", "exists x: P(x)"])
            && r.inferences == fs(&["exists x: Q(x)"])));
        let uc = rule(c, "universal conjunction");
        assert_eq!(uc.premises, fs(&["forall x: P(x)", "forall x: Q(x)"]));
        assert_eq!(uc.inferences[0], f("forall x: P(x) and Q(x)"));
    }

    #[test]
    fn forward_examples() {
        let c = Catalog::builtin();
        let mp = rule(c, "modus ponens");
        let out = apply_forward(mp, &fs(&["p -> q", "p"]));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, f("q"));
        assert_eq!(out[0].1.prop("p"), Some(&f("p")));
        assert_eq!(out[0].1.prop("q"), Some(&f("q")));
        assert!(apply_forward(mp, &fs(&["p -> q", "r"])).is_empty());

        let uc = rule(c, "universal conjunction");
        let got: Vec<_> = apply_forward(uc, &fs(&["forall x_2: Q(x_2)", "forall x_2: P_2(x_2)"]))
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        assert_eq!(got, fs(&["forall x_2: Q(x_2) and P_2(x_2)", "forall x_2: P_2(x_2) and Q(x_2)"]));
    }

    #[test]
    fn complement_and_commutative_matching() {
        let c = Catalog::builtin();
        assert!(rule(c, "modus tollens").validates(&fs(&["p_2 -> ~q_2", "q_2"]), &f("~p_2")));
        assert!(c.by_name("biconditional elimination").any(|r| r.validates(&fs(&["p <-> p_2", "~p_2"]), &f("~p"))));
        assert!(c.by_name("biconditional elimination").any(|r| r.validates(&fs(&["w <-> c", "~w"]), &f("~c"))));
        // premise order in a step is free
        assert!(rule(c, "modus ponens").validates(&fs(&["p", "p -> q"]), &f("q")));
        assert!(!rule(c, "modus ponens").validates(&fs(&["p"]), &f("q")));
    }

    #[test]
    fn injective_bindings() {
        let c = Catalog::builtin();
        // p and q may not both bind the atom `a`
        assert!(apply_forward(rule(c, "conjunction"), &fs(&["a", "~a"])).is_empty());
        assert!(apply_forward(rule(c, "conjunction"), &fs(&["a", "a"])).is_empty());
    }

    #[test]
    fn fresh_placeholders_are_dropped_forward() {
        let c = Catalog::builtin();
        assert!(apply_forward(rule(c, "addition"), &fs(&["p"])).is_empty());
        let mut namer = FreshNamer::new(["p".to_string()]);
        let out = apply_forward_with(rule(c, "addition"), &fs(&["p"]), Some(&mut namer));
        assert_eq!(out[0].0, f("p or q_1"));
    }

    #[test]
    fn backward_examples() {
        let c = Catalog::builtin();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let target = f("forall x: Q(x)");
        let mut seen_ump = false;
        for _ in 0..200 {
            let mut namer = FreshNamer::new(["Q".to_string(), "x".to_string()]);
            let m = match_backward(c, &target, &mut rng, &mut namer).unwrap();
            let forward: Vec<Formula> = apply_forward(m.rule, &m.new_premises).into_iter().map(|x| x.0).collect();
            assert!(forward.contains(&target), "{} {:?}", m.rule.name, m.new_premises);
            if m.rule.name == "universal modus ponens" {
                assert_eq!(m.new_premises, fs(&["forall x: P_1(x) -> Q(x)", "forall x: P_1(x)"]));
                seen_ump = true;
            }
        }
        assert!(seen_ump);

        let cands = backward_candidates(c, &f("P(a)"));
        assert!(cands.iter().any(|(i, _)| c.rules()[*i].name == "universal instantiation"));
        let mut namer = FreshNamer::new(["P".to_string(), "a".to_string()]);
        let (i, mut s) = cands.into_iter().find(|(i, _)| c.rules()[*i].name == "universal instantiation").unwrap();
        namer.complete(&c.rules()[i], &mut s);
        assert_eq!(instantiate(&c.rules()[i].premises[0], &s).unwrap(), f("forall x_1: P(x_1)"));

        let mut namer = FreshNamer::new(["q".to_string()]);
        let mp = c.rules().iter().position(|r| r.name == "modus ponens").unwrap();
        let (_, mut s) = backward_candidates(c, &f("q")).into_iter().find(|(i, _)| *i == mp).unwrap();
        namer.complete(&c.rules()[mp], &mut s);
        let prem: Vec<Formula> = c.rules()[mp].premises.iter().map(|p| instantiate(p, &s).unwrap()).collect();
        assert_eq!(prem, fs(&["p_1 -> q", "p_1"]));
    }

    #[test]
    fn no_rule_infers_negated_conjunction() {
        assert!(match_backward(
            Catalog::builtin(),
            &f("~(p and q)"),
            &mut ChaCha8Rng::seed_from_u64(1),
            &mut FreshNamer::new([])
        )
        .is_none());
    }

    #[test]
    fn permutations() {
        let mut v = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
    }
}
