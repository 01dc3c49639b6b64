//! Independent semantic oracle.
//!
//! Propositional questions are decided exactly by truth-table enumeration.
//! Quantified formulas are first grounded over a finite domain (the constants
//! already mentioned plus `domain_size` anonymous individuals), turning `forall`
//! into a conjunction and `exists` into a disjunction. The table is evaluated
//! 64 assignments at a time, one bit per assignment.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, Term};
use crate::rules::{Catalog, InferenceRule};

/// Truth tables are refused above this many ground atoms.
pub const MAX_GROUND_ATOMS: usize = 24;

/// Domain sizes at which quantified verdicts must agree.
pub const ORACLE_DOMAINS: RangeInclusive<usize> = 1..=3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntailmentVerdict {
    Entailed,
    Contradicted,
    Independent,
    PremisesInconsistent,
}

impl fmt::Display for EntailmentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntailmentVerdict::Entailed => "entailed",
            EntailmentVerdict::Contradicted => "contradicted",
            EntailmentVerdict::Independent => "independent",
            EntailmentVerdict::PremisesInconsistent => "premises_inconsistent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("{count} ground atoms exceed the truth-table limit of {MAX_GROUND_ATOMS}")]
    TooManyAtoms { count: usize },
    #[error("domain size must be at least 1")]
    EmptyDomain,
    #[error("variable `{0}` is free")]
    FreeVariable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum GroundAtom {
    Prop(String),
    Pred(String, String),
}

#[derive(Clone, Debug)]
enum Prop {
    Var(usize),
    Not(Box<Prop>),
    And(Vec<Prop>),
    Or(Vec<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

struct Grounder {
    domain: Vec<String>,
    atoms: HashMap<GroundAtom, usize>,
}

impl Grounder {
    fn atom(&mut self, key: GroundAtom) -> Prop {
        let next = self.atoms.len();
        Prop::Var(*self.atoms.entry(key).or_insert(next))
    }

    fn ground(&mut self, f: &Formula, env: &mut Vec<(String, String)>) -> Result<Prop, SemanticsError> {
        Ok(match f {
            Formula::Atom(n) => self.atom(GroundAtom::Prop(n.clone())),
            Formula::Pred(p, Term::Const(c)) => self.atom(GroundAtom::Pred(p.clone(), c.clone())),
            Formula::Pred(p, Term::Var(v)) => {
                let ind = env
                    .iter()
                    .rev()
                    .find(|(name, _)| name == v)
                    .map(|(_, d)| d.clone())
                    .ok_or_else(|| SemanticsError::FreeVariable(v.clone()))?;
                self.atom(GroundAtom::Pred(p.clone(), ind))
            }
            Formula::Not(x) => Prop::Not(Box::new(self.ground(x, env)?)),
            Formula::And(l, r) => Prop::And(vec![self.ground(l, env)?, self.ground(r, env)?]),
            Formula::Or(l, r) => Prop::Or(vec![self.ground(l, env)?, self.ground(r, env)?]),
            Formula::Implies(l, r) => Prop::Implies(Box::new(self.ground(l, env)?), Box::new(self.ground(r, env)?)),
            Formula::Iff(l, r) => Prop::Iff(Box::new(self.ground(l, env)?), Box::new(self.ground(r, env)?)),
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let mut parts = Vec::with_capacity(self.domain.len());
                for d in self.domain.clone() {
                    env.push((v.clone(), d));
                    let g = self.ground(body, env);
                    env.pop();
                    parts.push(g?);
                }
                if matches!(f, Formula::ForAll(..)) {
                    Prop::And(parts)
                } else {
                    Prop::Or(parts)
                }
            }
        })
    }
}

// Bit masks for the first six atoms within a 64-assignment block.
const LOW_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn eval(p: &Prop, block: u64) -> u64 {
    match p {
        Prop::Var(i) if *i < 6 => LOW_MASKS[*i],
        Prop::Var(i) => {
            if (block >> (i - 6)) & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        }
        Prop::Not(x) => !eval(x, block),
        Prop::And(xs) => xs.iter().fold(u64::MAX, |acc, x| acc & eval(x, block)),
        Prop::Or(xs) => xs.iter().fold(0, |acc, x| acc | eval(x, block)),
        Prop::Implies(l, r) => !eval(l, block) | eval(r, block),
        Prop::Iff(l, r) => !(eval(l, block) ^ eval(r, block)),
    }
}

fn collect_constants(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Pred(_, Term::Const(c)) => {
            if !out.contains(c) {
                out.push(c.clone());
            }
        }
        Formula::Atom(_) | Formula::Pred(..) => {}
        Formula::Not(x) | Formula::ForAll(_, x) | Formula::Exists(_, x) => collect_constants(x, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            collect_constants(l, out);
            collect_constants(r, out);
        }
    }
}

/// Decides the relation between `premises` and `query`.
///
/// For quantified input the domain is every constant mentioned plus
/// `domain_size` fresh individuals; propositional input ignores the domain.
pub fn classify(
    premises: &[Formula],
    query: &Formula,
    domain_size: usize,
) -> Result<EntailmentVerdict, SemanticsError> {
    if domain_size == 0 {
        return Err(SemanticsError::EmptyDomain);
    }
    let mut domain = Vec::new();
    for f in premises.iter().chain(std::iter::once(query)) {
        collect_constants(f, &mut domain);
    }
    // '#' never occurs in parsed symbol names.
    domain.extend((1..=domain_size).map(|i| format!("#{i}")));

    let mut g = Grounder { domain, atoms: HashMap::new() };
    let mut env = Vec::new();
    let premises = premises.iter().map(|f| g.ground(f, &mut env)).collect::<Result<Vec<_>, _>>()?;
    let premises = Prop::And(premises);
    let query = g.ground(query, &mut env)?;

    let n = g.atoms.len();
    if n > MAX_GROUND_ATOMS {
        return Err(SemanticsError::TooManyAtoms { count: n });
    }
    let (blocks, last_mask) = if n <= 6 {
        (1u64, if n == 6 { u64::MAX } else { (1u64 << (1u32 << n)) - 1 })
    } else {
        (1u64 << (n - 6), u64::MAX)
    };

    let mut model = false;
    let mut countermodel = false; // premises hold, query false
    let mut witness = false; // premises hold, query true
    for block in 0..blocks {
        let pm = eval(&premises, block) & last_mask;
        if pm == 0 {
            continue;
        }
        model = true;
        let qm = eval(&query, block);
        countermodel |= pm & !qm != 0;
        witness |= pm & qm != 0;
        if countermodel && witness {
            return Ok(EntailmentVerdict::Independent);
        }
    }
    Ok(match (model, countermodel, witness) {
        (false, _, _) => EntailmentVerdict::PremisesInconsistent,
        (true, false, _) => EntailmentVerdict::Entailed,
        (true, true, false) => EntailmentVerdict::Contradicted,
        (true, true, true) => EntailmentVerdict::Independent,
    })
}

/// Verdicts of a query across several domain sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainVerdict {
    /// Every domain size (or the single propositional check) agrees.
    Agreed(EntailmentVerdict),
    /// Domain sizes disagree; entries are in domain-size order.
    Mixed(Vec<EntailmentVerdict>),
}

impl DomainVerdict {
    pub fn agreed(&self) -> Option<EntailmentVerdict> {
        match self {
            DomainVerdict::Agreed(v) => Some(*v),
            DomainVerdict::Mixed(_) => None,
        }
    }
}

/// Runs [`classify`] once for propositional input, or at every size in
/// `domains` when any formula is quantified.
pub fn classify_across(
    premises: &[Formula],
    query: &Formula,
    domains: RangeInclusive<usize>,
) -> Result<DomainVerdict, SemanticsError> {
    let quantified = premises.iter().chain(std::iter::once(query)).any(Formula::contains_quantifier);
    if !quantified {
        return Ok(DomainVerdict::Agreed(classify(premises, query, 1)?));
    }
    let verdicts = domains.map(|d| classify(premises, query, d)).collect::<Result<Vec<_>, _>>()?;
    if verdicts.windows(2).all(|w| w[0] == w[1]) {
        Ok(DomainVerdict::Agreed(verdicts[0]))
    } else {
        Ok(DomainVerdict::Mixed(verdicts))
    }
}

/// Shorthand for [`classify_across`] over [`ORACLE_DOMAINS`].
pub fn oracle_verdict(premises: &[Formula], query: &Formula) -> Result<DomainVerdict, SemanticsError> {
    classify_across(premises, query, ORACLE_DOMAINS)
}

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainStep {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub rule: String,
}

/// Ordered rule applications ending in `conclusion`. A chain that disproves a
/// target ends in a formula contradicting it; the target itself is held by
/// the owning problem.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InferenceChain {
    pub conclusion: Formula,
    pub steps: Vec<ChainStep>,
}

impl InferenceChain {
    pub fn new(conclusion: Formula, steps: Vec<ChainStep>) -> Self {
        Self { conclusion, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct ChainFailure {
    /// Index of the offending step; equals the step count for failures about
    /// the chain as a whole.
    pub step: usize,
    pub reason: String,
}

/// Checks a single step against every rule carrying `rule` as name, or
/// against the whole catalog when `rule` is `None`.
pub fn step_is_valid(step_premises: &[Formula], conclusion: &Formula, rule: Option<&str>, rules: &Catalog) -> bool {
    let candidates: Vec<&InferenceRule> = match rule {
        Some(name) => rules.by_name(name).collect(),
        None => rules.iter().collect(),
    };
    candidates.iter().any(|r| r.validates(step_premises, conclusion))
}

/// Verifies that every step is an instance of its named rule and only uses
/// premises or earlier conclusions, and that the last step concludes
/// `chain.conclusion`. An empty chain is valid iff its conclusion is a premise.
pub fn verify_chain(premises: &[Formula], chain: &InferenceChain, rules: &Catalog) -> Result<(), ChainFailure> {
    verify_steps(premises, chain, rules, true)
}

/// Like [`verify_chain`] but accepts a step if any rule in the catalog
/// justifies it; used for chains printed without rule names.
pub fn verify_chain_unnamed(premises: &[Formula], chain: &InferenceChain, rules: &Catalog) -> Result<(), ChainFailure> {
    verify_steps(premises, chain, rules, false)
}

fn verify_steps(
    premises: &[Formula],
    chain: &InferenceChain,
    rules: &Catalog,
    use_names: bool,
) -> Result<(), ChainFailure> {
    let mut known: Vec<&Formula> = premises.iter().collect();
    for (i, step) in chain.steps.iter().enumerate() {
        if use_names && rules.by_name(&step.rule).next().is_none() {
            return Err(ChainFailure { step: i, reason: format!("unknown rule `{}`", step.rule) });
        }
        if let Some(missing) = step.premises.iter().find(|p| !known.contains(p)) {
            return Err(ChainFailure {
                step: i,
                reason: format!("`{missing}` is neither a premise nor an earlier conclusion"),
            });
        }
        let name = use_names.then_some(step.rule.as_str());
        if !step_is_valid(&step.premises, &step.conclusion, name, rules) {
            let rendered: Vec<String> = step.premises.iter().map(ToString::to_string).collect();
            return Err(ChainFailure {
                step: i,
                reason: format!(
                    "{} does not yield `{}` from [{}]",
                    if use_names { step.rule.as_str() } else { "no rule" },
                    step.conclusion,
                    rendered.join(", ")
                ),
            });
        }
        known.push(&step.conclusion);
    }
    match chain.steps.last() {
        Some(last) if last.conclusion != chain.conclusion => Err(ChainFailure {
            step: chain.steps.len(),
            reason: format!("chain ends in `{}`, not `{}`", last.conclusion, chain.conclusion),
        }),
        None if !premises.contains(&chain.conclusion) => {
            Err(ChainFailure { step: 0, reason: format!("empty chain but `{}` is not a premise", chain.conclusion) })
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn fs(xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|s| parse_formula(s).unwrap()).collect()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn propositional_examples() {
        assert_eq!(classify(&fs(&["p -> q", "p"]), &f("q"), 1).unwrap(), EntailmentVerdict::Entailed);
        assert_eq!(classify(&[], &f("r"), 1).unwrap(), EntailmentVerdict::Independent);
        assert_eq!(
            classify(&fs(&["p <-> p_2", "p_2 -> ~q_2", "q_2"]), &f("~p"), 1).unwrap(),
            EntailmentVerdict::Entailed
        );
        assert_eq!(classify(&fs(&["p", "~p"]), &f("q -> r"), 1).unwrap(), EntailmentVerdict::PremisesInconsistent);
        assert_eq!(classify(&fs(&["p -> q", "p"]), &f("~q"), 1).unwrap(), EntailmentVerdict::Contradicted);
    }

    #[test]
    fn quantified_disjunctive_syllogism_contradiction() {
        let premises = fs(&["forall x_3: P_3(x_3) or Q_3(x_3)", "forall x_3: ~P_3(x_3)"]);
        let query = f("exists x_3: ~Q_3(x_3)");
        for d in 1..=3 {
            assert_eq!(classify(&premises, &query, d).unwrap(), EntailmentVerdict::Contradicted);
        }
    }

    #[test]
    fn existing_constants_join_the_domain() {
        let premises = fs(&["forall x_4: P(x_4)", "~P(joseph)"]);
        assert_eq!(classify(&premises, &f("~Q(joseph)"), 1).unwrap(), EntailmentVerdict::PremisesInconsistent);
    }

    #[test]
    fn small_domains_can_disagree() {
        // true in every one-element model, refutable with two individuals
        let premises = fs(&["exists x: P(x)", "exists x: Q(x)"]);
        let v = classify_across(&premises, &f("exists x: P(x) and Q(x)"), 1..=3).unwrap();
        assert_eq!(
            v,
            DomainVerdict::Mixed(vec![
                EntailmentVerdict::Entailed,
                EntailmentVerdict::Independent,
                EntailmentVerdict::Independent
            ])
        );
    }

    #[test]
    fn errors() {
        assert_eq!(classify(&[], &f("p"), 0), Err(SemanticsError::EmptyDomain));
        let many: Vec<Formula> = (0..25).map(|i| Formula::atom(format!("p_{i}"))).collect();
        assert_eq!(classify(&many, &f("q"), 1), Err(SemanticsError::TooManyAtoms { count: 26 }));
        let free = Formula::pred("P", Term::var("x"));
        assert_eq!(classify(&[], &free, 1), Err(SemanticsError::FreeVariable("x".into())));
    }

    #[test]
    fn many_atoms_use_the_block_path() {
        // 10 atoms -> 16 blocks of 64 assignments
        let mut premises = Vec::new();
        for i in 0..9 {
            premises.push(Formula::implies(Formula::atom(format!("p_{i}")), Formula::atom(format!("p_{}", i + 1))));
        }
        premises.push(f("p_0"));
        assert_eq!(classify(&premises, &f("p_9"), 1).unwrap(), EntailmentVerdict::Entailed);
        assert_eq!(classify(&premises[..9], &f("p_9"), 1).unwrap(), EntailmentVerdict::Independent);
    }
}
