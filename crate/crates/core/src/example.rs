//! Seq2seq examples of the five problem types.
//!
//! Sampling and rendering are split: [`plan_example`] draws every random
//! choice into an [`ExamplePlan`], and [`render_example`] turns a plan into
//! text deterministically.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, SymbolInventory};
use crate::nl::{assign_lexicon, capitalize, render_nl, LexAssignment, Lexicon, Mode, NlError};
use crate::rules::Catalog;
use crate::semantics::InferenceChain;
use crate::synthesis::{enumerate_one_step, GenerationConfig, InferenceProblem, OneStep};

pub const TYPE1_PROMPT: &str = "Translate the following inference to logic notation: ";
pub const TYPE2_PROMPT: &str = "What can be inferred from the following premises in a single inference step (ignoring inferences that add new predicates or constants)? ";
pub const TYPE2_NAME_RULES: &str = "Name the inference rule being used: ";
pub const TYPE2_NOTHING: &str = "Nothing can be inferred from these premises.";
pub const TYPE2_CONTRADICTORY: &str = "Since the premises are contradictory, we can infer anything from them.";
pub const TYPE3_PROMPT: &str = "Consider the following premises. ";
pub const TYPE3_INLINE_NAME_RULES: &str = " If possible, name the inference rules being used at each step.";
pub const TYPE3_FOLLOWING: &str = "Can we infer the following from them? ";
pub const TYPE3_FOLLOWING_NAME_RULES: &str = "If we can, name the inference rule being used: ";
pub const BEGIN_YES: &str = "Yes, via the following inference chain. ";
pub const BEGIN_NO: &str = "No, we can see why via the following inference chain. ";
pub const END_YES: &str = " Therefore, the answer is yes.";
pub const END_NO: &str = " Therefore, the answer is no.";
pub const OBVIOUS: &str = "Yes, that is one of the premises.";
pub const UNRELATED: &str = "No, we cannot infer that from the premises.";
pub const CONTRADICTORY: &str = "Yes, the premises are contradictory, so we can infer anything from them.";

#[derive(Debug, Error)]
pub enum ExampleError {
    #[error("problem cannot yield a type {0} example")]
    Infeasible(ProblemType),
    #[error("answer flip applies to type 3 examples only, got type {0}")]
    NotChainType(ProblemType),
    #[error("invalid type weights: {0}")]
    Weights(String),
    #[error(transparent)]
    Nl(#[from] NlError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProblemType {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2a")]
    TwoA,
    #[serde(rename = "2b")]
    TwoB,
    #[serde(rename = "3a")]
    ThreeA,
    #[serde(rename = "3b")]
    ThreeB,
}

impl ProblemType {
    pub const ALL: [ProblemType; 5] =
        [ProblemType::One, ProblemType::TwoA, ProblemType::TwoB, ProblemType::ThreeA, ProblemType::ThreeB];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemType::One => "1",
            ProblemType::TwoA => "2a",
            ProblemType::TwoB => "2b",
            ProblemType::ThreeA => "3a",
            ProblemType::ThreeB => "3b",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_natural_language(self) -> bool {
        matches!(self, ProblemType::One | ProblemType::TwoB | ProblemType::ThreeB)
    }

    pub fn is_chain(self) -> bool {
        matches!(self, ProblemType::ThreeA | ProblemType::ThreeB)
    }
}

impl fmt::Display for ProblemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ProblemType::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| format!("unknown problem type `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerPosition {
    #[default]
    Begin,
    End,
}

impl FromStr for AnswerPosition {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "begin" => Ok(AnswerPosition::Begin),
            "end" => Ok(AnswerPosition::End),
            _ => Err(format!("answer position must be `begin` or `end`, got `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerCase {
    #[default]
    None,
    Unrelated,
    Obvious,
    ContradictoryPremises,
}

/// Sampling probability of each problem type, in the order 1, 2a, 2b, 3a, 3b.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeWeights(pub [f64; 5]);

impl Default for TypeWeights {
    fn default() -> Self {
        TypeWeights([0.1218, 0.2455, 0.1916, 0.2520, 0.1891])
    }
}

impl TypeWeights {
    pub fn validate(&self) -> Result<(), ExampleError> {
        if self.0.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(ExampleError::Weights("weights must be non-negative".into()));
        }
        if (self.0.iter().sum::<f64>() - 1.0).abs() > 1e-6 {
            return Err(ExampleError::Weights("weights must sum to 1".into()));
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ProblemType {
        let x: f64 = rng.gen();
        let mut acc = 0.0;
        for (t, w) in ProblemType::ALL.iter().zip(self.0) {
            acc += w;
            if x < acc {
                return *t;
            }
        }
        ProblemType::ThreeB
    }
}

impl FromStr for TypeWeights {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v = parse_floats(s)?;
        let arr: [f64; 5] = v.try_into().map_err(|_| "expected five comma-separated weights".to_string())?;
        let w = TypeWeights(arr);
        w.validate().map_err(|e| e.to_string())?;
        Ok(w)
    }
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad number `{x}`: {e}"))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub input: String,
    pub output: String,
    #[serde(rename = "type")]
    pub problem_type: ProblemType,
    pub answer_position: AnswerPosition,
    pub problem_id: u64,
    pub premise_count: usize,
    pub corner_case: CornerCase,
}

/// The two ways a type 3 prompt states its query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryShape {
    /// "Can we infer ~p from them?"
    Inline,
    /// "Can we infer the following from them? ... ~p."
    Following,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainAnswer {
    Proof(InferenceChain),
    /// Chain ending in a formula that contradicts the query.
    Disproof(InferenceChain),
    Obvious,
    Unrelated,
    Contradictory,
}

impl ChainAnswer {
    fn corner_case(&self) -> CornerCase {
        match self {
            ChainAnswer::Proof(_) | ChainAnswer::Disproof(_) => CornerCase::None,
            ChainAnswer::Obvious => CornerCase::Obvious,
            ChainAnswer::Unrelated => CornerCase::Unrelated,
            ChainAnswer::Contradictory => CornerCase::ContradictoryPremises,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanBody {
    Translate { conclusion: Formula },
    OneStep { conclusions: Vec<OneStep>, contradictory: bool },
    Chain { query: Formula, shape: QueryShape, answer: ChainAnswer },
}

/// Every choice needed to render one example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExamplePlan {
    pub problem_type: ProblemType,
    pub answer_position: AnswerPosition,
    pub problem_id: u64,
    /// Premises in presentation order.
    pub premises: Vec<Formula>,
    pub name_rules: bool,
    pub body: PlanBody,
    /// Required for types 1, 2b and 3b.
    pub lexicon: Option<LexAssignment>,
}

impl ExamplePlan {
    fn formulas(&self) -> Vec<Formula> {
        let mut all = self.premises.clone();
        match &self.body {
            PlanBody::Translate { conclusion } => all.push(conclusion.clone()),
            PlanBody::OneStep { conclusions, .. } => all.extend(conclusions.iter().map(|c| c.conclusion.clone())),
            PlanBody::Chain { query, answer, .. } => {
                all.push(query.clone());
                if let ChainAnswer::Proof(c) | ChainAnswer::Disproof(c) = answer {
                    for s in &c.steps {
                        all.extend(s.premises.iter().cloned());
                        all.push(s.conclusion.clone());
                    }
                }
            }
        }
        all
    }
}

/// Knobs for example sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExampleRates {
    pub obvious: f64,
    pub unrelated: f64,
    pub name_rules: f64,
}

impl Default for ExampleRates {
    fn default() -> Self {
        Self { obvious: 0.05, unrelated: 0.10, name_rules: 0.5 }
    }
}

impl From<&GenerationConfig> for ExampleRates {
    fn from(c: &GenerationConfig) -> Self {
        Self { obvious: c.obvious_rate, unrelated: c.unrelated_rate, name_rules: c.name_rules_rate }
    }
}

/// Draws all random choices for one example of type `ptype`.
pub fn plan_example<R: Rng + ?Sized>(
    problem: &InferenceProblem,
    ptype: ProblemType,
    position: AnswerPosition,
    rates: &ExampleRates,
    rules: &Catalog,
    lexicon: &Lexicon,
    rng: &mut R,
) -> Result<ExamplePlan, ExampleError> {
    let mut premises = problem.premises.clone();
    premises.shuffle(rng);
    let name_rules = rng.gen_bool(rates.name_rules);
    let body = match ptype {
        ProblemType::One => {
            let candidates: Vec<&Formula> =
                problem.provable.iter().filter(|t| !t.chain.is_empty()).map(|t| &t.target).collect();
            let conclusion = (*candidates.choose(rng).ok_or(ExampleError::Infeasible(ptype))?).clone();
            PlanBody::Translate { conclusion }
        }
        ProblemType::TwoA | ProblemType::TwoB => {
            let conclusions = if problem.is_contradictory { Vec::new() } else { enumerate_one_step(&premises, rules) };
            PlanBody::OneStep { conclusions, contradictory: problem.is_contradictory }
        }
        ProblemType::ThreeA | ProblemType::ThreeB => {
            let shape = if rng.gen_bool(0.5) { QueryShape::Inline } else { QueryShape::Following };
            let (query, answer) = pick_query(problem, rates, rng).ok_or(ExampleError::Infeasible(ptype))?;
            PlanBody::Chain { query, shape, answer }
        }
    };
    let mut plan = ExamplePlan {
        problem_type: ptype,
        answer_position: position,
        problem_id: problem.problem_id,
        premises,
        name_rules,
        body,
        lexicon: None,
    };
    if ptype.is_natural_language() {
        let inv = SymbolInventory::of(&plan.formulas());
        plan.lexicon = Some(assign_lexicon(&inv, lexicon, rng)?);
    }
    Ok(plan)
}

fn pick_query<R: Rng + ?Sized>(
    problem: &InferenceProblem,
    rates: &ExampleRates,
    rng: &mut R,
) -> Option<(Formula, ChainAnswer)> {
    let x: f64 = rng.gen();
    if x < rates.obvious {
        return Some((problem.premises.choose(rng)?.clone(), ChainAnswer::Obvious));
    }
    let targets = problem.provable.len() + problem.contradicted.len();
    if problem.is_contradictory {
        let pool: Vec<&Formula> =
            problem.provable.iter().chain(&problem.contradicted).map(|t| &t.target).chain(&problem.unrelated).collect();
        return Some(((*pool.choose(rng)?).clone(), ChainAnswer::Contradictory));
    }
    if (x < rates.obvious + rates.unrelated || targets == 0) && !problem.unrelated.is_empty() {
        return Some((problem.unrelated.choose(rng)?.clone(), ChainAnswer::Unrelated));
    }
    if targets == 0 {
        return None;
    }
    let k = rng.gen_range(0..targets);
    if k < problem.provable.len() {
        let t = &problem.provable[k];
        let answer = if t.chain.is_empty() { ChainAnswer::Obvious } else { ChainAnswer::Proof(t.chain.clone()) };
        Some((t.target.clone(), answer))
    } else {
        let t = &problem.contradicted[k - problem.provable.len()];
        Some((t.target.clone(), ChainAnswer::Disproof(t.chain.clone())))
    }
}

struct Renderer<'a> {
    lex: Option<&'a LexAssignment>,
}

impl Renderer<'_> {
    /// Clause inside running text.
    fn clause(&self, f: &Formula) -> Result<String, NlError> {
        match self.lex {
            Some(a) => render_nl(f, a, Mode::Present),
            None => Ok(f.to_string()),
        }
    }

    /// Stand-alone sentence with final period.
    fn sentence(&self, f: &Formula) -> Result<String, NlError> {
        match self.lex {
            Some(a) => Ok(format!("{}.", capitalize(&render_nl(f, a, Mode::Present)?))),
            None => Ok(format!("{f}.")),
        }
    }

    fn sentences(&self, fs: &[Formula]) -> Result<String, NlError> {
        Ok(fs.iter().map(|f| self.sentence(f)).collect::<Result<Vec<_>, _>>()?.join(" "))
    }
}

/// "From A, B we can infer C via R." steps, the last one prefixed with
/// "Finally," when the chain has more than one step.
pub fn render_chain(
    chain: &InferenceChain,
    name_rules: bool,
    contradicts: Option<&str>,
    clause: &dyn Fn(&Formula) -> Result<String, NlError>,
) -> Result<String, NlError> {
    let n = chain.steps.len();
    let mut parts = Vec::with_capacity(n);
    for (i, s) in chain.steps.iter().enumerate() {
        let last = i + 1 == n;
        let lead = if last && n > 1 { "Finally, from" } else { "From" };
        let prem = s.premises.iter().map(clause).collect::<Result<Vec<_>, _>>()?.join(", ");
        let mut text = format!("{lead} {prem} we can infer {}", clause(&s.conclusion)?);
        if name_rules {
            text.push_str(&format!(" via {}", s.rule));
        }
        if let (true, Some(t)) = (last, contradicts) {
            text.push_str(&format!(", which contradicts {t}"));
        }
        text.push('.');
        parts.push(text);
    }
    Ok(parts.join(" "))
}

pub fn render_example(plan: &ExamplePlan) -> Result<Example, ExampleError> {
    let ptype = plan.problem_type;
    let lex = if ptype.is_natural_language() {
        Some(plan.lexicon.as_ref().ok_or(ExampleError::Infeasible(ptype))?)
    } else {
        None
    };
    let r = Renderer { lex };
    let (input, output, corner) = match &plan.body {
        PlanBody::Translate { conclusion } => {
            let a = lex.expect("type 1 is natural language");
            let input = format!(
                "{TYPE1_PROMPT}{} Therefore {}.",
                r.sentences(&plan.premises)?,
                render_nl(conclusion, a, Mode::Present)?
            );
            let mut all = plan.premises.clone();
            all.push(conclusion.clone());
            let canon = crate::nl::canonicalize_type1(&all);
            let (last, prems) = canon.split_last().expect("non-empty");
            let mut output: String = prems.iter().map(|f| format!("{f}. ")).collect();
            output.push_str(&format!("Therefore {last}."));
            (input, output, CornerCase::None)
        }
        PlanBody::OneStep { conclusions, contradictory } => {
            let naming = if plan.name_rules { TYPE2_NAME_RULES } else { "" };
            let input = format!("{TYPE2_PROMPT}{naming}{}", r.sentences(&plan.premises)?);
            let output = if *contradictory {
                TYPE2_CONTRADICTORY.to_string()
            } else if conclusions.is_empty() {
                TYPE2_NOTHING.to_string()
            } else {
                conclusions
                    .iter()
                    .map(|c| {
                        if plan.name_rules {
                            let x = match lex {
                                Some(_) => capitalize(&r.clause(&c.conclusion)?),
                                None => r.clause(&c.conclusion)?,
                            };
                            Ok(format!("{x} can be inferred via the {} rule.", c.rule))
                        } else {
                            r.sentence(&c.conclusion)
                        }
                    })
                    .collect::<Result<Vec<_>, NlError>>()?
                    .join(" ")
            };
            let corner = if *contradictory { CornerCase::ContradictoryPremises } else { CornerCase::None };
            (input, output, corner)
        }
        PlanBody::Chain { query, shape, answer } => {
            let mut input = format!("{TYPE3_PROMPT}{} ", r.sentences(&plan.premises)?);
            match shape {
                QueryShape::Inline => {
                    input.push_str(&format!("Can we infer {} from them?", r.clause(query)?));
                    if plan.name_rules {
                        input.push_str(TYPE3_INLINE_NAME_RULES);
                    }
                }
                QueryShape::Following => {
                    input.push_str(TYPE3_FOLLOWING);
                    if plan.name_rules {
                        input.push_str(TYPE3_FOLLOWING_NAME_RULES);
                    }
                    input.push_str(&r.sentence(query)?);
                }
            }
            let clause = |f: &Formula| r.clause(f);
            let output = match answer {
                ChainAnswer::Proof(c) => {
                    let chain = render_chain(c, plan.name_rules, None, &clause)?;
                    wrap_answer(&chain, true, plan.answer_position)
                }
                ChainAnswer::Disproof(c) => {
                    let q = r.clause(query)?;
                    let chain = render_chain(c, plan.name_rules, Some(&q), &clause)?;
                    wrap_answer(&chain, false, plan.answer_position)
                }
                ChainAnswer::Obvious => OBVIOUS.to_string(),
                ChainAnswer::Unrelated => UNRELATED.to_string(),
                ChainAnswer::Contradictory => CONTRADICTORY.to_string(),
            };
            (input, output, answer.corner_case())
        }
    };
    Ok(Example {
        input,
        output,
        problem_type: ptype,
        answer_position: plan.answer_position,
        problem_id: plan.problem_id,
        premise_count: plan.premises.len(),
        corner_case: corner,
    })
}

fn wrap_answer(chain: &str, yes: bool, position: AnswerPosition) -> String {
    match (position, yes) {
        (AnswerPosition::Begin, true) => format!("{BEGIN_YES}{chain}"),
        (AnswerPosition::Begin, false) => format!("{BEGIN_NO}{chain}"),
        (AnswerPosition::End, true) => format!("{chain}{END_YES}"),
        (AnswerPosition::End, false) => format!("{chain}{END_NO}"),
    }
}

/// Samples and renders one example.
pub fn make_example<R: Rng + ?Sized>(
    problem: &InferenceProblem,
    ptype: ProblemType,
    position: AnswerPosition,
    rates: &ExampleRates,
    rules: &Catalog,
    lexicon: &Lexicon,
    rng: &mut R,
) -> Result<Example, ExampleError> {
    render_example(&plan_example(problem, ptype, position, rates, rules, lexicon, rng)?)
}

/// Moves the yes/no answer of a chain-bearing type 3 example between the
/// beginning and the end of the output. Single-sentence answers are kept.
pub fn answer_flip(example: &Example) -> Result<Example, ExampleError> {
    if !example.problem_type.is_chain() {
        return Err(ExampleError::NotChainType(example.problem_type));
    }
    let mut out = example.clone();
    let o = example.output.as_str();
    let flipped = match example.answer_position {
        AnswerPosition::Begin => {
            if let Some(chain) = o.strip_prefix(BEGIN_YES) {
                Some(format!("{chain}{END_YES}"))
            } else {
                o.strip_prefix(BEGIN_NO).map(|chain| format!("{chain}{END_NO}"))
            }
        }
        AnswerPosition::End => {
            if let Some(chain) = o.strip_suffix(END_YES) {
                Some(format!("{BEGIN_YES}{chain}"))
            } else {
                o.strip_suffix(END_NO).map(|chain| format!("{BEGIN_NO}{chain}"))
            }
        }
    };
    if let Some(text) = flipped {
        out.output = text;
    }
    out.answer_position = match example.answer_position {
        AnswerPosition::Begin => AnswerPosition::End,
        AnswerPosition::End => AnswerPosition::Begin,
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::semantics::ChainStep;
    use crate::synthesis::{generate_problems, item_rng, Target};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn fs(xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|s| f(s)).collect()
    }

    fn plan(ptype: ProblemType, premises: &[&str], body: PlanBody) -> ExamplePlan {
        ExamplePlan {
            problem_type: ptype,
            answer_position: AnswerPosition::Begin,
            problem_id: 0,
            premises: fs(premises),
            name_rules: false,
            body,
            lexicon: None,
        }
    }

    fn step(p: &[&str], c: &str, rule: &str) -> ChainStep {
        ChainStep { premises: fs(p), conclusion: f(c), rule: rule.into() }
    }

    #[test]
    fn chain_rendering() {
        let chain = InferenceChain::new(f("q"), vec![step(&["p -> q", "p"], "q", "modus ponens")]);
        let clause = |f: &Formula| Ok(f.to_string());
        assert_eq!(
            render_chain(&chain, true, None, &clause).unwrap(),
            "From p -> q, p we can infer q via modus ponens."
        );
        assert_eq!(
            render_chain(&chain, false, Some("~q"), &clause).unwrap(),
            "From p -> q, p we can infer q, which contradicts ~q."
        );
    }

    #[test]
    fn disproof_end_form() {
        let chain = InferenceChain::new(
            f("q"),
            vec![step(&["p -> r", "p"], "r", "modus ponens"), step(&["r -> q", "r"], "q", "modus ponens")],
        );
        let mut p = plan(
            ProblemType::ThreeA,
            &["p -> r", "p", "r -> q"],
            PlanBody::Chain { query: f("~q"), shape: QueryShape::Inline, answer: ChainAnswer::Disproof(chain) },
        );
        p.answer_position = AnswerPosition::End;
        let e = render_example(&p).unwrap();
        assert_eq!(e.input, "Consider the following premises. p -> r. p. r -> q. Can we infer ~q from them?");
        assert_eq!(
            e.output,
            "From p -> r, p we can infer r. Finally, from r -> q, r we can infer q, which contradicts ~q. Therefore, the answer is no."
        );
        let b = answer_flip(&e).unwrap();
        assert!(b.output.starts_with("No, we can see why via the following inference chain. From p -> r"));
        assert_eq!(answer_flip(&b).unwrap(), e);
    }

    #[test]
    fn corner_cases_are_fixed_by_flip() {
        for (answer, text) in [
            (ChainAnswer::Obvious, OBVIOUS),
            (ChainAnswer::Unrelated, UNRELATED),
            (ChainAnswer::Contradictory, CONTRADICTORY),
        ] {
            let p = plan(
                ProblemType::ThreeA,
                &["p"],
                PlanBody::Chain { query: f("p"), shape: QueryShape::Following, answer },
            );
            let e = render_example(&p).unwrap();
            assert_eq!(e.output, text);
            assert_eq!(answer_flip(&e).unwrap().output, text);
            assert_eq!(answer_flip(&answer_flip(&e).unwrap()).unwrap(), e);
        }
    }

    #[test]
    fn flip_rejects_other_types() {
        let p = plan(ProblemType::TwoA, &["p"], PlanBody::OneStep { conclusions: vec![], contradictory: false });
        let e = render_example(&p).unwrap();
        assert_eq!(e.output, TYPE2_NOTHING);
        assert!(matches!(answer_flip(&e), Err(ExampleError::NotChainType(_))));
    }

    #[test]
    fn contradictory_one_step() {
        let p = plan(ProblemType::TwoA, &["p", "~p"], PlanBody::OneStep { conclusions: vec![], contradictory: true });
        let e = render_example(&p).unwrap();
        assert_eq!(e.output, TYPE2_CONTRADICTORY);
        assert_eq!(e.corner_case, CornerCase::ContradictoryPremises);
    }

    #[test]
    fn type_one_needs_a_chain() {
        let problem = InferenceProblem {
            problem_id: 0,
            premises: fs(&["p"]),
            provable: vec![Target { target: f("p"), chain: InferenceChain::new(f("p"), vec![]) }],
            contradicted: vec![],
            unrelated: vec![],
            is_contradictory: false,
            depth: 0,
        };
        let r = make_example(
            &problem,
            ProblemType::One,
            AnswerPosition::Begin,
            &ExampleRates::default(),
            Catalog::builtin(),
            &Lexicon::default(),
            &mut item_rng(0, 0, 0),
        );
        assert!(matches!(r, Err(ExampleError::Infeasible(ProblemType::One))));
    }

    #[test]
    fn sampled_examples_are_well_formed() {
        let rules = Catalog::builtin();
        let set = generate_problems(rules, &GenerationConfig { num_problems: 40, ..Default::default() }).unwrap();
        let lex = Lexicon::default();
        let mut rng = item_rng(1, 0, 0);
        for p in &set.problems {
            for t in ProblemType::ALL {
                for pos in [AnswerPosition::Begin, AnswerPosition::End] {
                    let e = match make_example(p, t, pos, &ExampleRates::default(), rules, &lex, &mut rng) {
                        Ok(e) => e,
                        Err(ExampleError::Infeasible(_)) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    assert!(!e.input.is_empty() && !e.output.is_empty());
                    assert_eq!(e.premise_count, p.premises.len());
                    if t.is_chain() && e.corner_case == CornerCase::None {
                        match pos {
                            AnswerPosition::Begin => assert!(e.output.starts_with("Yes") || e.output.starts_with("No")),
                            AnswerPosition::End => assert!(e.output.ends_with(END_YES) || e.output.ends_with(END_NO)),
                        }
                        assert_eq!(answer_flip(&answer_flip(&e).unwrap()).unwrap(), e);
                    }
                }
            }
        }
    }

    #[test]
    fn weights_parse_and_sample() {
        let w: TypeWeights = "0.2,0.2,0.2,0.2,0.2".parse().unwrap();
        assert_eq!(w.0, [0.2; 5]);
        assert!("0.5,0.5".parse::<TypeWeights>().is_err());
        assert!("0.5,0.5,0.5,0,0".parse::<TypeWeights>().is_err());
        let only3b = TypeWeights([0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(only3b.sample(&mut item_rng(0, 0, 0)), ProblemType::ThreeB);
    }

    #[test]
    fn example_json_shape() {
        let p = plan(ProblemType::TwoA, &["p"], PlanBody::OneStep { conclusions: vec![], contradictory: false });
        let e = render_example(&p).unwrap();
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        assert_eq!(v["type"], "2a");
        assert_eq!(v["answer_position"], "begin");
        assert_eq!(v["corner_case"], "none");
    }
}
