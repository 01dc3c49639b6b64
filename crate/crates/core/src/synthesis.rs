//! Inference problem synthesis by backward chaining.

use std::collections::{BTreeSet, HashSet};
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::example::{AnswerPosition, TypeWeights};
use crate::formula::{Formula, Renaming, SymbolInventory, SymbolKind};
use crate::rules::{instantiate, match_backward, match_formula, Catalog, FreshNamer, InferenceRule, Substitution};
use crate::semantics::{oracle_verdict, ChainStep, EntailmentVerdict, InferenceChain, SemanticsError};

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("problem generation exhausted after {attempts} attempts")]
    GenerationExhausted { attempts: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    /// Probability of applying 0, 1, 2, ... growth steps.
    pub chain_length_distribution: Vec<f64>,
    pub num_problems: usize,
    pub num_variations: usize,
    pub contradiction_cap: f64,
    pub num_examples: usize,
    pub split_ratio: f64,
    pub length_threshold: usize,
    pub answer_position: AnswerPosition,
    pub seed: u64,
    pub type_weights: TypeWeights,
    /// Share of type 3 queries taken verbatim from the premises.
    pub obvious_rate: f64,
    /// Share of type 3 queries taken from the unrelated set.
    pub unrelated_rate: f64,
    /// Probability that a prompt asks for rule names.
    pub name_rules_rate: f64,
    pub max_retries: usize,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            chain_length_distribution: vec![0.425, 0.3, 0.2, 0.05, 0.025],
            num_problems: 5000,
            num_variations: 25,
            contradiction_cap: 0.1,
            num_examples: 200_000,
            split_ratio: 0.9,
            length_threshold: 4,
            answer_position: AnswerPosition::Begin,
            seed: 0,
            type_weights: TypeWeights::default(),
            obvious_rate: 0.05,
            unrelated_rate: 0.10,
            name_rules_rate: 0.5,
            max_retries: 20,
        }
    }
}

fn probability(name: &str, p: f64) -> Result<(), SynthesisError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SynthesisError::InvalidConfig(format!("{name} must lie in [0, 1], got {p}")))
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<(), SynthesisError> {
        let dist = &self.chain_length_distribution;
        if dist.is_empty()
            || dist.iter().any(|p| p.is_nan() || *p < 0.0)
            || (dist.iter().sum::<f64>() - 1.0).abs() > 1e-6
        {
            return Err(SynthesisError::InvalidConfig(
                "chain length distribution must be non-negative and sum to 1".into(),
            ));
        }
        probability("contradiction cap", self.contradiction_cap)?;
        probability("split ratio", self.split_ratio)?;
        probability("obvious rate", self.obvious_rate)?;
        probability("unrelated rate", self.unrelated_rate)?;
        probability("name-rules rate", self.name_rules_rate)?;
        if self.obvious_rate + self.unrelated_rate > 1.0 {
            return Err(SynthesisError::InvalidConfig("corner-case rates exceed 1".into()));
        }
        self.type_weights.validate().map_err(|e| SynthesisError::InvalidConfig(e.to_string()))?;
        if self.max_retries == 0 {
            return Err(SynthesisError::InvalidConfig("max retries must be positive".into()));
        }
        Ok(())
    }
}

/// Deterministic per-item generator: one ChaCha stream per (domain, index).
pub fn item_rng(seed: u64, domain: u16, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << 48) | (index & ((1 << 48) - 1)));
    rng
}

pub(crate) const DOMAIN_PROBLEMS: u16 = 1;
pub(crate) const DOMAIN_VARIATIONS: u16 = 2;

/// A target formula together with the chain proving it (for `provable`) or
/// proving something that contradicts it (for `contradicted`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Target {
    pub target: Formula,
    pub chain: InferenceChain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferenceProblem {
    pub problem_id: u64,
    pub premises: Vec<Formula>,
    pub provable: Vec<Target>,
    pub contradicted: Vec<Target>,
    pub unrelated: Vec<Formula>,
    pub is_contradictory: bool,
    pub depth: usize,
}

impl InferenceProblem {
    fn formulas(&self) -> Vec<Formula> {
        let mut all = self.premises.clone();
        for t in self.provable.iter().chain(&self.contradicted) {
            all.push(t.target.clone());
            all.push(t.chain.conclusion.clone());
            for s in &t.chain.steps {
                all.extend(s.premises.iter().cloned());
                all.push(s.conclusion.clone());
            }
        }
        all.extend(self.unrelated.iter().cloned());
        all
    }

    pub fn symbols(&self) -> SymbolInventory {
        SymbolInventory::of(&self.formulas())
    }

    /// Applies a renaming everywhere, chains included.
    pub fn renamed(&self, map: &Renaming) -> InferenceProblem {
        let r = |f: &Formula| map.apply_unchecked(f);
        let rt = |t: &Target| Target {
            target: r(&t.target),
            chain: InferenceChain::new(
                r(&t.chain.conclusion),
                t.chain
                    .steps
                    .iter()
                    .map(|s| ChainStep {
                        premises: s.premises.iter().map(r).collect(),
                        conclusion: r(&s.conclusion),
                        rule: s.rule.clone(),
                    })
                    .collect(),
            ),
        };
        InferenceProblem {
            problem_id: self.problem_id,
            premises: self.premises.iter().map(r).collect(),
            provable: self.provable.iter().map(rt).collect(),
            contradicted: self.contradicted.iter().map(rt).collect(),
            unrelated: self.unrelated.iter().map(r).collect(),
            is_contradictory: self.is_contradictory,
            depth: self.depth,
        }
    }

    /// Canonical rendering used to detect duplicate variations.
    pub fn canonical_string(&self) -> String {
        let mut out = String::new();
        let join = |fs: &[Formula]| fs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        out.push_str(&join(&self.premises));
        for (tag, ts) in [("I", &self.provable), ("C", &self.contradicted)] {
            for t in ts {
                out.push_str(&format!(" |{tag} {} <= {}:", t.target, t.chain.conclusion));
                for s in &t.chain.steps {
                    out.push_str(&format!(" [{}] {} / {};", join(&s.premises), s.conclusion, s.rule));
                }
            }
        }
        out.push_str(" |U ");
        out.push_str(&join(&self.unrelated));
        out
    }

    pub fn premise_count(&self) -> usize {
        self.premises.len()
    }
}

fn sample_depth<R: Rng + ?Sized>(dist: &[f64], rng: &mut R) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in dist.iter().enumerate() {
        acc += p;
        if x < acc {
            return i;
        }
    }
    dist.len() - 1
}

fn seed_problem(rule: &InferenceRule) -> (Vec<Formula>, Vec<Target>, Vec<Target>, Vec<Formula>) {
    let step =
        |c: &Formula| ChainStep { premises: rule.premises.clone(), conclusion: c.clone(), rule: rule.name.clone() };
    let provable = rule
        .inferences
        .iter()
        .map(|i| Target { target: i.clone(), chain: InferenceChain::new(i.clone(), vec![step(i)]) })
        .collect();
    let contradicted = rule
        .contradictions
        .iter()
        .enumerate()
        .filter_map(|(k, c)| {
            let partner = &rule.inferences[rule.contradiction_partner(k)?];
            Some(Target { target: c.clone(), chain: InferenceChain::new(partner.clone(), vec![step(partner)]) })
        })
        .collect();
    (rule.premises.clone(), provable, contradicted, rule.unrelated.clone())
}

/// Drops steps that re-derive something known and cuts the chain once its
/// conclusion is reached.
pub fn simplify_chain(premises: &[Formula], chain: &InferenceChain) -> InferenceChain {
    let mut known: HashSet<&Formula> = premises.iter().collect();
    let mut steps = Vec::new();
    if known.contains(&chain.conclusion) {
        return InferenceChain::new(chain.conclusion.clone(), steps);
    }
    for s in &chain.steps {
        if known.contains(&s.conclusion) {
            continue;
        }
        known.insert(&s.conclusion);
        steps.push(s.clone());
        if s.conclusion == chain.conclusion {
            break;
        }
    }
    InferenceChain::new(chain.conclusion.clone(), steps)
}

/// Builds one problem: seed rule, `depth` backward growth steps, chain
/// simplification and an oracle check of every target. Problems whose
/// oracle verdicts disagree with their construction are rejected with
/// `GenerationExhausted` after the retry bound.
pub fn generate_problem<R: Rng + ?Sized>(
    rules: &Catalog,
    config: &GenerationConfig,
    rng: &mut R,
) -> Result<InferenceProblem, SynthesisError> {
    for _ in 0..config.max_retries {
        if let Some(p) = try_generate(rules, config, rng)? {
            return Ok(p);
        }
    }
    Err(SynthesisError::GenerationExhausted { attempts: config.max_retries })
}

fn try_generate<R: Rng + ?Sized>(
    rules: &Catalog,
    config: &GenerationConfig,
    rng: &mut R,
) -> Result<Option<InferenceProblem>, SynthesisError> {
    let r0 = &rules.rules()[rng.gen_range(0..rules.len())];
    let (mut premises, mut provable, mut contradicted, unrelated) = seed_problem(r0);
    let depth = sample_depth(&config.chain_length_distribution, rng);
    let mut namer = FreshNamer::new(r0.symbols.iter().cloned());
    for s in SymbolInventory::of(&r0.contradictions).all() {
        namer.reserve(s);
    }

    for _ in 0..depth {
        namer.advance();
        let mut grown = false;
        for _ in 0..config.max_retries {
            let idx = rng.gen_range(0..premises.len());
            let target = premises[idx].clone();
            let mut trial = namer.clone();
            let Some(m) = match_backward(rules, &target, rng, &mut trial) else { continue };
            let clash =
                m.new_premises.iter().enumerate().any(|(i, p)| premises.contains(p) || m.new_premises[..i].contains(p));
            if clash {
                continue;
            }
            namer = trial;
            let step = ChainStep { premises: m.new_premises.clone(), conclusion: target, rule: m.rule.name.clone() };
            premises.splice(idx..=idx, m.new_premises);
            for t in provable.iter_mut().chain(contradicted.iter_mut()) {
                t.chain.steps.insert(0, step.clone());
            }
            grown = true;
            break;
        }
        if !grown {
            return Ok(None);
        }
    }

    for t in provable.iter_mut().chain(contradicted.iter_mut()) {
        t.chain = simplify_chain(&premises, &t.chain);
    }
    contradicted.retain(|t| !t.chain.is_empty());

    // `None` rejects the attempt: domain sizes disagree, or the grounded
    // problem is too large for the truth table.
    let verdict = |q: &Formula| -> Result<Option<EntailmentVerdict>, SynthesisError> {
        match oracle_verdict(&premises, q) {
            Ok(v) => Ok(v.agreed()),
            Err(SemanticsError::TooManyAtoms { .. }) => Ok(None),
            Err(e) => Err(e.into()),
        }
    };
    let is_contradictory = match verdict(&premises[0])? {
        Some(EntailmentVerdict::PremisesInconsistent) => true,
        Some(_) => false,
        None => return Ok(None),
    };
    if !is_contradictory {
        let checks = provable
            .iter()
            .map(|t| (&t.target, EntailmentVerdict::Entailed))
            .chain(contradicted.iter().map(|t| (&t.target, EntailmentVerdict::Contradicted)))
            .chain(unrelated.iter().map(|u| (u, EntailmentVerdict::Independent)));
        for (q, want) in checks {
            if verdict(q)? != Some(want) {
                return Ok(None);
            }
        }
    }
    Ok(Some(InferenceProblem { problem_id: 0, premises, provable, contradicted, unrelated, is_contradictory, depth }))
}

/// Outcome of a batch run, before and after the contradiction cap.
#[derive(Clone, Debug, Default)]
pub struct ProblemSet {
    pub problems: Vec<InferenceProblem>,
    /// Contradictory problems generated, admitted or not.
    pub contradictory_generated: usize,
    /// Attempts that failed outright.
    pub failures: usize,
}

/// Generates `config.num_problems` attempts in parallel (problem id = attempt
/// index), then re-admits contradictory problems up to the cap.
pub fn generate_problems(rules: &Catalog, config: &GenerationConfig) -> Result<ProblemSet, SynthesisError> {
    config.validate()?;
    let results: Vec<Option<InferenceProblem>> = (0..config.num_problems as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(config.seed, DOMAIN_PROBLEMS, i);
            match generate_problem(rules, config, &mut rng) {
                Ok(mut p) => {
                    p.problem_id = i;
                    Ok(Some(p))
                }
                Err(SynthesisError::GenerationExhausted { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_, SynthesisError>>()?;
    let failures = results.iter().filter(|r| r.is_none()).count();
    let all: Vec<InferenceProblem> = results.into_iter().flatten().collect();
    let normal = all.iter().filter(|p| !p.is_contradictory).count();
    let buffered = all.len() - normal;
    let admit = admitted_contradictions(normal, buffered, config.contradiction_cap);
    let mut taken = 0;
    let problems = all
        .into_iter()
        .filter(|p| {
            if !p.is_contradictory {
                return true;
            }
            taken += 1;
            taken <= admit
        })
        .collect();
    Ok(ProblemSet { problems, contradictory_generated: buffered, failures })
}

/// Largest k <= `buffered` with k / (normal + k) <= cap.
pub fn admitted_contradictions(normal: usize, buffered: usize, cap: f64) -> usize {
    if cap >= 1.0 {
        return buffered;
    }
    let mut k = ((cap * normal as f64) / (1.0 - cap)).floor() as usize;
    k = k.min(buffered);
    while k > 0 && k as f64 > cap * (normal + k) as f64 + 1e-9 {
        k -= 1;
    }
    k
}

/// One-step conclusion with the rule producing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneStep {
    pub conclusion: Formula,
    pub rule: String,
}

/// Every conclusion reachable by one rule application over the premises,
/// introducing no new symbols and not already a premise, sorted by rendered
/// string. Each conclusion is reported once, with the first catalog rule
/// yielding it.
pub fn enumerate_one_step(premises: &[Formula], rules: &Catalog) -> Vec<OneStep> {
    let present: HashSet<&Formula> = premises.iter().collect();
    let mut found: Vec<(String, usize, Formula)> = Vec::new();
    let mut seen: HashSet<Formula> = HashSet::new();
    for (ri, rule) in rules.iter().enumerate() {
        let mut substs = Vec::new();
        let mut used = vec![false; premises.len()];
        match_tuple(rule, premises, 0, &mut used, &Substitution::default(), &mut substs);
        for s in substs {
            for inf in &rule.inferences {
                let Some(c) = instantiate(inf, &s) else { continue };
                if present.contains(&c) || !seen.insert(c.clone()) {
                    continue;
                }
                found.push((c.to_string(), ri, c));
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.into_iter().map(|(_, ri, conclusion)| OneStep { conclusion, rule: rules.rules()[ri].name.clone() }).collect()
}

fn match_tuple(
    rule: &InferenceRule,
    premises: &[Formula],
    k: usize,
    used: &mut [bool],
    s: &Substitution,
    out: &mut Vec<Substitution>,
) {
    if k == rule.premises.len() {
        out.push(s.clone());
        return;
    }
    for j in 0..premises.len() {
        if used[j] {
            continue;
        }
        let mut next = Vec::new();
        match_formula(&rule.premises[k], &premises[j], s, &mut next);
        if next.is_empty() {
            continue;
        }
        used[j] = true;
        for s2 in &next {
            match_tuple(rule, premises, k + 1, used, s2, out);
        }
        used[j] = false;
    }
}

// ---------------------------------------------------------------------------
// Renaming variations
// ---------------------------------------------------------------------------

fn pool(kind: SymbolKind, needed: usize) -> Vec<String> {
    let bases: &[&str] = match kind {
        SymbolKind::Proposition => &["p", "q", "r", "s", "t", "u", "w"],
        SymbolKind::Predicate => &["P", "Q", "R", "S", "T", "U", "W"],
        SymbolKind::Constant => &["a", "b", "c", "d", "e", "f", "g", "h"],
        SymbolKind::Variable => &["x"],
    };
    let mut out = Vec::new();
    let mut suffix = 0;
    while out.len() < needed.max(1) || suffix <= 4 {
        for b in bases {
            out.push(if suffix == 0 { b.to_string() } else { format!("{b}_{suffix}") });
        }
        suffix += 1;
    }
    out
}

/// A random injective renaming of every symbol in `inv`, class by class.
pub fn random_renaming<R: Rng + ?Sized>(inv: &SymbolInventory, rng: &mut R) -> Renaming {
    let mut map = Renaming::new();
    for kind in [SymbolKind::Proposition, SymbolKind::Predicate, SymbolKind::Constant, SymbolKind::Variable] {
        let from = inv.class(kind);
        let mut names = pool(kind, from.len());
        names.shuffle(rng);
        for (f, t) in from.iter().zip(names) {
            map.insert(f.clone(), t);
        }
    }
    map
}

/// Up to `n` distinct renamed copies of `problem`, none identical to it.
pub fn make_variations<R: Rng + ?Sized>(
    problem: &InferenceProblem,
    n: usize,
    max_retries: usize,
    rng: &mut R,
) -> Vec<InferenceProblem> {
    let inv = problem.symbols();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    seen.insert(problem.canonical_string());
    let mut out = Vec::new();
    for _ in 0..n {
        for _ in 0..max_retries.max(1) {
            let v = problem.renamed(&random_renaming(&inv, rng));
            if seen.insert(v.canonical_string()) {
                out.push(v);
                break;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Problem files
// ---------------------------------------------------------------------------

/// Writes one JSON object per line.
pub fn write_problems<W: Write>(problems: &[InferenceProblem], mut w: W) -> Result<(), SynthesisError> {
    for p in problems {
        serde_json::to_writer(&mut w, p).map_err(|source| SynthesisError::Json { line: 0, source })?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_problems<R: BufRead>(r: R) -> Result<Vec<InferenceProblem>, SynthesisError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| SynthesisError::Json { line: i + 1, source })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::semantics::verify_chain;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn fs(xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn one_step_closure_of_quantified_premises() {
        let got = enumerate_one_step(
            &fs(&["forall x_2: Q(x_2)", "exists x_2: P_2(x_2) -> Q_2(x_2)", "forall x_2: P_2(x_2)"]),
            Catalog::builtin(),
        );
        let want = vec![
            OneStep { conclusion: f("exists x_2: Q_2(x_2)"), rule: "existential modus ponens".into() },
            OneStep { conclusion: f("forall x_2: P_2(x_2) and Q(x_2)"), rule: "universal conjunction".into() },
            OneStep { conclusion: f("forall x_2: Q(x_2) and P_2(x_2)"), rule: "universal conjunction".into() },
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn one_step_closure_of_biconditional() {
        let got: Vec<Formula> =
            enumerate_one_step(&fs(&["p <-> q", "~p"]), Catalog::builtin()).into_iter().map(|o| o.conclusion).collect();
        assert_eq!(got, fs(&["p -> q", "q -> p", "~q"]));
    }

    #[test]
    fn one_step_edge_cases() {
        assert!(enumerate_one_step(&[], Catalog::builtin()).is_empty());
        assert!(enumerate_one_step(&fs(&["p"]), Catalog::builtin()).is_empty());
    }

    #[test]
    fn simplification_cuts_and_drops() {
        let step = |p: &[&str], c: &str| ChainStep { premises: fs(p), conclusion: f(c), rule: "x".into() };
        let chain = InferenceChain::new(f("q"), vec![step(&["a"], "b"), step(&["b"], "q"), step(&["q"], "z")]);
        let s = simplify_chain(&fs(&["a", "b"]), &chain);
        assert_eq!(s.steps, vec![step(&["b"], "q")]);
        assert!(simplify_chain(&fs(&["q"]), &chain).is_empty());
    }

    #[test]
    fn depth_zero_from_modus_ponens() {
        let c = Catalog::builtin();
        let mp = c.by_name("modus ponens").next().unwrap();
        let (p, i, cc, u) = seed_problem(mp);
        assert_eq!(p, fs(&["p -> q", "p"]));
        assert_eq!(i.len(), 1);
        assert_eq!(i[0].chain.steps.len(), 1);
        assert_eq!(cc[0].target, f("~q"));
        assert_eq!(cc[0].chain.conclusion, f("q"));
        assert_eq!(u, fs(&["r", "~r"]));
    }

    #[test]
    fn generated_problems_are_sound() {
        let c = Catalog::builtin();
        let config = GenerationConfig { num_problems: 60, ..Default::default() };
        let set = generate_problems(c, &config).unwrap();
        assert!(set.problems.len() >= 50);
        for p in &set.problems {
            for t in &p.provable {
                verify_chain(&p.premises, &t.chain, c).unwrap();
                assert_eq!(t.chain.conclusion, t.target);
            }
            for t in &p.contradicted {
                verify_chain(&p.premises, &t.chain, c).unwrap();
                assert_eq!(t.chain.conclusion.contradiction(), t.target);
            }
        }
    }

    #[test]
    fn premise_count_grows_by_rule_arity() {
        let c = Catalog::builtin();
        let mut rng = item_rng(3, 0, 0);
        for _ in 0..30 {
            let p = generate_problem(c, &GenerationConfig::default(), &mut rng).unwrap();
            assert!(p.premise_count() >= 1);
            assert!(p.depth <= 4);
        }
    }

    #[test]
    fn contradiction_admission() {
        assert_eq!(admitted_contradictions(90, 50, 0.1), 10);
        assert_eq!(admitted_contradictions(90, 3, 0.1), 3);
        assert_eq!(admitted_contradictions(0, 3, 0.1), 0);
        assert_eq!(admitted_contradictions(5, 3, 1.0), 3);
    }

    #[test]
    fn variations_keep_id_and_verdicts() {
        let c = Catalog::builtin();
        let mut rng = item_rng(11, 0, 0);
        let mut p = generate_problem(c, &GenerationConfig::default(), &mut rng).unwrap();
        p.problem_id = 42;
        let vars = make_variations(&p, 5, 20, &mut rng);
        assert!(!vars.is_empty());
        let mut strings = HashSet::new();
        for v in &vars {
            assert_eq!(v.problem_id, 42);
            assert_ne!(v.canonical_string(), p.canonical_string());
            assert!(strings.insert(v.canonical_string()));
            for (a, b) in p.provable.iter().zip(&v.provable) {
                assert_eq!(
                    oracle_verdict(&p.premises, &a.target).unwrap(),
                    oracle_verdict(&v.premises, &b.target).unwrap()
                );
                verify_chain(&v.premises, &b.chain, c).unwrap();
            }
        }
    }

    #[test]
    fn renaming_example() {
        let map: Renaming =
            [("p".to_string(), "r".to_string()), ("q".to_string(), "p_2".to_string())].into_iter().collect();
        let c = Catalog::builtin();
        let (premises, provable, contradicted, unrelated) = seed_problem(c.by_name("modus ponens").next().unwrap());
        let p = InferenceProblem {
            problem_id: 1,
            premises,
            provable,
            contradicted,
            unrelated: unrelated[..0].to_vec(),
            is_contradictory: false,
            depth: 0,
        };
        let r = p.renamed(&map);
        assert_eq!(r.premises[0], f("r -> p_2"));
        assert_eq!(r.provable[0].chain.steps[0].premises[0], f("r -> p_2"));
    }

    #[test]
    fn problem_lines_round_trip() {
        let c = Catalog::builtin();
        let set = generate_problems(c, &GenerationConfig { num_problems: 10, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        write_problems(&set.problems, &mut buf).unwrap();
        assert_eq!(read_problems(&buf[..]).unwrap(), set.problems);
    }

    #[test]
    fn config_validation() {
        assert!(GenerationConfig::default().validate().is_ok());
        let bad = GenerationConfig { chain_length_distribution: vec![0.5, 0.4], ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = GenerationConfig { contradiction_cap: 1.5, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
