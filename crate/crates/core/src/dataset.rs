//! End-to-end dataset assembly: problems, variations, examples, splits,
//! serialization, statistics and validation.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::example::{
    make_example, AnswerPosition, CornerCase, Example, ExampleError, ExampleRates, ProblemType, BEGIN_NO, BEGIN_YES,
    CONTRADICTORY, END_NO, END_YES, OBVIOUS, TYPE1_PROMPT, TYPE2_CONTRADICTORY, TYPE2_NAME_RULES, TYPE2_NOTHING,
    TYPE2_PROMPT, TYPE3_FOLLOWING, TYPE3_FOLLOWING_NAME_RULES, TYPE3_INLINE_NAME_RULES, TYPE3_PROMPT, UNRELATED,
};
use crate::formula::{parse_formula, Formula};
use crate::nl::{canonicalize_type1, Lexicon};
use crate::rules::Catalog;
use crate::semantics::{
    oracle_verdict, verify_chain, verify_chain_unnamed, ChainStep, EntailmentVerdict, InferenceChain,
};
use crate::synthesis::{
    enumerate_one_step, generate_problems, item_rng, make_variations, GenerationConfig, InferenceProblem,
    SynthesisError, DOMAIN_VARIATIONS,
};

const DOMAIN_EXAMPLES: u16 = 3;
const DOMAIN_EXAMPLES_TEST: u16 = 4;
const DOMAIN_SPLIT: u16 = 5;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Example(#[from] ExampleError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: {message}")]
    Record { path: String, line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    Iid,
    Ood,
    Length,
}

impl SplitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitKind::Iid => "iid",
            SplitKind::Ood => "ood",
            SplitKind::Length => "length",
        }
    }
}

impl fmt::Display for SplitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "iid" => Ok(SplitKind::Iid),
            "ood" => Ok(SplitKind::Ood),
            "length" => Ok(SplitKind::Length),
            _ => Err(format!("split must be iid, ood or length, got `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Jsonl => "jsonl",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(format!("format must be tsv or jsonl, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetSplit {
    pub name: SplitKind,
    pub train: Vec<Example>,
    pub test: Vec<Example>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LengthStats {
    pub min: usize,
    pub median: usize,
    pub p90: usize,
    pub max: usize,
}

impl LengthStats {
    pub fn of(mut values: Vec<usize>) -> Self {
        if values.is_empty() {
            return Self::default();
        }
        values.sort_unstable();
        let at = |q: f64| values[((values.len() - 1) as f64 * q).round() as usize];
        Self { min: values[0], median: at(0.5), p90: at(0.9), max: values[values.len() - 1] }
    }
}

impl fmt::Display for LengthStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {} / {} / {}", self.min, self.median, self.p90, self.max)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub problems: usize,
    pub contradictory_problems: usize,
    /// Contradictory problems generated before the cap was applied.
    pub contradictory_generated: usize,
    /// Growth steps per problem.
    pub depth_histogram: BTreeMap<usize, usize>,
    /// Steps per inference and contradiction chain.
    pub chain_length_histogram: BTreeMap<usize, usize>,
    pub variations: usize,
    pub attempts: usize,
    pub type_counts: BTreeMap<String, usize>,
    pub corner_case_counts: BTreeMap<String, usize>,
    pub input_chars: LengthStats,
    pub output_chars: LengthStats,
    pub input_tokens: LengthStats,
    pub output_tokens: LengthStats,
    pub train_size: usize,
    pub test_size: usize,
    pub warnings: Vec<String>,
}

impl StatsReport {
    pub fn total_examples(&self) -> usize {
        self.train_size + self.test_size
    }
}

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "problems: {} ({} with contradictions)", self.problems, self.contradictory_problems)?;
        if !self.depth_histogram.is_empty() {
            writeln!(f, "growth steps per problem:")?;
            for (k, v) in &self.depth_histogram {
                writeln!(f, "  {k}: {v}")?;
            }
        }
        if !self.chain_length_histogram.is_empty() {
            writeln!(f, "inference chains by length:")?;
            for (k, v) in &self.chain_length_histogram {
                writeln!(f, "  {k}: {v}")?;
            }
        }
        writeln!(f, "variations: {}", self.variations)?;
        writeln!(f, "examples per type:")?;
        for (k, v) in &self.type_counts {
            writeln!(f, "  {k}: {v}")?;
        }
        writeln!(f, "train / test: {} / {}", self.train_size, self.test_size)?;
        writeln!(f, "input chars (min / median / p90 / max): {}", self.input_chars)?;
        writeln!(f, "output chars (min / median / p90 / max): {}", self.output_chars)?;
        writeln!(f, "input tokens (min / median / p90 / max): {}", self.input_tokens)?;
        write!(f, "output tokens (min / median / p90 / max): {}", self.output_tokens)?;
        for w in &self.warnings {
            write!(f, "\nwarning: {w}")?;
        }
        Ok(())
    }
}

/// Example-level statistics of a split; problem-level fields stay zero.
pub fn report_stats(split: &DatasetSplit) -> StatsReport {
    let all: Vec<&Example> = split.train.iter().chain(&split.test).collect();
    report_examples(&all, split.train.len(), split.test.len())
}

fn report_examples(all: &[&Example], train: usize, test: usize) -> StatsReport {
    let mut r = StatsReport { train_size: train, test_size: test, ..Default::default() };
    if all.is_empty() {
        return r;
    }
    for e in all {
        *r.type_counts.entry(e.problem_type.to_string()).or_default() += 1;
        let cc = serde_json::to_value(e.corner_case).expect("enum serializes");
        *r.corner_case_counts.entry(cc.as_str().unwrap_or_default().to_string()).or_default() += 1;
    }
    r.input_chars = LengthStats::of(all.iter().map(|e| e.input.chars().count()).collect());
    r.output_chars = LengthStats::of(all.iter().map(|e| e.output.chars().count()).collect());
    r.input_tokens = LengthStats::of(all.iter().map(|e| e.input.split_whitespace().count()).collect());
    r.output_tokens = LengthStats::of(all.iter().map(|e| e.output.split_whitespace().count()).collect());
    r
}

fn add_problem_stats(r: &mut StatsReport, problems: &[InferenceProblem]) {
    r.problems += problems.len();
    for p in problems {
        r.contradictory_problems += p.is_contradictory as usize;
        *r.depth_histogram.entry(p.depth).or_default() += 1;
        for t in p.provable.iter().chain(&p.contradicted) {
            *r.chain_length_histogram.entry(t.chain.len()).or_default() += 1;
        }
    }
}

fn variations_of(problems: &[InferenceProblem], config: &GenerationConfig) -> Vec<InferenceProblem> {
    problems
        .par_iter()
        .map(|p| {
            let mut rng = item_rng(config.seed, DOMAIN_VARIATIONS, p.problem_id);
            make_variations(p, config.num_variations, config.max_retries, &mut rng)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// `attempts` example draws from `pool`, one rng stream per attempt.
/// Infeasible (problem, type) pairs are redrawn with a fresh type.
pub fn generate_examples(
    pool: &[InferenceProblem],
    attempts: usize,
    domain: u16,
    config: &GenerationConfig,
    rules: &Catalog,
    lexicon: &Lexicon,
) -> Result<Vec<Example>, DatasetError> {
    if pool.is_empty() {
        return Ok(Vec::new());
    }
    let rates = ExampleRates::from(config);
    let drawn: Vec<Option<Example>> = (0..attempts as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(config.seed, domain, i);
            let problem = &pool[rng.gen_range(0..pool.len())];
            for _ in 0..config.max_retries {
                let t = config.type_weights.sample(&mut rng);
                match make_example(problem, t, config.answer_position, &rates, rules, lexicon, &mut rng) {
                    Ok(e) => return Ok(Some(e)),
                    Err(ExampleError::Infeasible(_)) | Err(ExampleError::Nl(_)) => continue,
                    Err(e) => return Err(DatasetError::from(e)),
                }
            }
            Ok(None)
        })
        .collect::<Result<_, DatasetError>>()?;
    Ok(drawn.into_iter().flatten().collect())
}

fn dedup(examples: Vec<Example>, seen: &mut HashSet<(String, String)>) -> Vec<Example> {
    examples.into_iter().filter(|e| seen.insert((e.input.clone(), e.output.clone()))).collect()
}

/// Runs the whole pipeline for one split. Falling short of
/// `config.num_examples` after deduplication is reported as a warning.
pub fn build_dataset(
    config: &GenerationConfig,
    split: SplitKind,
    rules: &Catalog,
    lexicon: &Lexicon,
) -> Result<(DatasetSplit, StatsReport), DatasetError> {
    config.validate()?;
    let set = generate_problems(rules, config)?;
    let mut split_rng = item_rng(config.seed, DOMAIN_SPLIT, split as u64);
    let (train, test, variations) = match split {
        SplitKind::Iid | SplitKind::Length => {
            let pool = variations_of(&set.problems, config);
            let examples = generate_examples(&pool, config.num_examples, DOMAIN_EXAMPLES, config, rules, lexicon)?;
            let mut examples = dedup(examples, &mut HashSet::new());
            let (train, test) = if split == SplitKind::Iid {
                examples.shuffle(&mut split_rng);
                let n_train = (examples.len() as f64 * config.split_ratio).round() as usize;
                let test = examples.split_off(n_train);
                (examples, test)
            } else {
                examples.into_iter().partition(|e| e.premise_count <= config.length_threshold)
            };
            (train, test, pool.len())
        }
        SplitKind::Ood => {
            let mut problems = set.problems.clone();
            problems.shuffle(&mut split_rng);
            let half = problems.len() / 2;
            let test_problems = problems.split_off(half);
            let mut train_pool = variations_of(&problems, config);
            let mut test_pool = variations_of(&test_problems, config);
            // keep pools in id order so the result does not hinge on the shuffle above
            train_pool.sort_by_key(|p| p.problem_id);
            test_pool.sort_by_key(|p| p.problem_id);
            let n_train = (config.num_examples as f64 * config.split_ratio).round() as usize;
            let train = generate_examples(&train_pool, n_train, DOMAIN_EXAMPLES, config, rules, lexicon)?;
            let test = generate_examples(
                &test_pool,
                config.num_examples - n_train,
                DOMAIN_EXAMPLES_TEST,
                config,
                rules,
                lexicon,
            )?;
            let mut seen = HashSet::new();
            let train = dedup(train, &mut seen);
            let test = dedup(test, &mut seen);
            (train, test, train_pool.len() + test_pool.len())
        }
    };
    let dataset = DatasetSplit { name: split, train, test };
    let mut report = report_stats(&dataset);
    add_problem_stats(&mut report, &set.problems);
    report.contradictory_generated = set.contradictory_generated;
    report.variations = variations;
    report.attempts = config.num_examples;
    if set.failures > 0 {
        report.warnings.push(format!("{} problem attempts failed to generate", set.failures));
    }
    if report.problems < config.num_problems {
        report.warnings.push(format!("kept {} of {} requested problems", report.problems, config.num_problems));
    }
    if report.total_examples() < config.num_examples {
        report.warnings.push(format!(
            "emitted {} of {} requested examples after removing duplicates",
            report.total_examples(),
            config.num_examples
        ));
    }
    Ok((dataset, report))
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

pub fn escape_tsv(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_tsv(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}

pub fn write_examples<W: Write>(examples: &[Example], format: Format, w: W) -> std::io::Result<()> {
    let mut w = BufWriter::new(w);
    for e in examples {
        match format {
            Format::Tsv => writeln!(w, "{}\t{}", escape_tsv(&e.input), escape_tsv(&e.output))?,
            Format::Jsonl => {
                serde_json::to_writer(&mut w, e)?;
                w.write_all(b"\n")?;
            }
        }
    }
    w.flush()
}

/// Writes `<split>_train.<ext>` and `<split>_test.<ext>` under `dir`.
pub fn write_dataset(split: &DatasetSplit, format: Format, dir: &Path) -> Result<Vec<PathBuf>, DatasetError> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (part, examples) in [("train", &split.train), ("test", &split.test)] {
        let path = dir.join(format!("{}_{part}.{}", split.name, format.extension()));
        write_examples(examples, format, File::create(&path)?)?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn read_jsonl(path: &Path) -> Result<Vec<Example>, DatasetError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let e = serde_json::from_str(&line).map_err(|err| DatasetError::Record {
            path: path.display().to_string(),
            line: i + 1,
            message: err.to_string(),
        })?;
        out.push(e);
    }
    Ok(out)
}

/// Reads (input, output) pairs from a TSV file.
pub fn read_tsv(path: &Path) -> Result<Vec<(String, String)>, DatasetError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let (a, b) = line.split_once('\t').ok_or_else(|| DatasetError::Record {
            path: path.display().to_string(),
            line: i + 1,
            message: "expected two tab-separated columns".into(),
        })?;
        out.push((unescape_tsv(a), unescape_tsv(b)));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TypeTally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub per_type: BTreeMap<String, TypeTally>,
    /// (1-based record number, problem type, reason)
    pub failures: Vec<(usize, String, String)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total(&self) -> usize {
        self.per_type.values().map(|t| t.passed + t.failed).sum()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, tally) in &self.per_type {
            writeln!(f, "type {t}: {} passed, {} failed", tally.passed, tally.failed)?;
        }
        for (line, t, why) in self.failures.iter().take(50) {
            writeln!(f, "record {line} (type {t}): {why}")?;
        }
        if self.failures.len() > 50 {
            writeln!(f, "... {} more failures", self.failures.len() - 50)?;
        }
        Ok(())
    }
}

/// Checks every example. Logic-notation types (1 output, 2a, 3a) are parsed
/// back and re-derived with the rule catalog and the oracle; natural-language
/// types are checked against the templates.
pub fn validate_dataset(examples: &[Example], rules: &Catalog) -> ValidationReport {
    let results: Vec<Result<(), String>> = examples.par_iter().map(|e| validate_example(e, rules)).collect();
    let mut report = ValidationReport::default();
    for (i, (e, r)) in examples.iter().zip(results).enumerate() {
        let tally = report.per_type.entry(e.problem_type.to_string()).or_default();
        match r {
            Ok(()) => tally.passed += 1,
            Err(why) => {
                tally.failed += 1;
                report.failures.push((i + 1, e.problem_type.to_string(), why));
            }
        }
    }
    report
}

pub fn validate_file(path: &Path, rules: &Catalog) -> Result<ValidationReport, DatasetError> {
    Ok(validate_dataset(&read_jsonl(path)?, rules))
}

fn parse_list(text: &str) -> Result<Vec<Formula>, String> {
    let text = text.trim();
    let text = text.strip_suffix('.').ok_or_else(|| format!("`{text}` does not end with a period"))?;
    text.split(". ").map(|s| parse_formula(s).map_err(|e| format!("`{s}`: {e}"))).collect()
}

fn parse_one(text: &str) -> Result<Formula, String> {
    parse_formula(text).map_err(|e| format!("`{text}`: {e}"))
}

fn verdict(premises: &[Formula], q: &Formula) -> Result<Option<EntailmentVerdict>, String> {
    Ok(oracle_verdict(premises, q).map_err(|e| e.to_string())?.agreed())
}

fn inconsistent(premises: &[Formula]) -> Result<bool, String> {
    let Some(first) = premises.first() else { return Ok(false) };
    Ok(verdict(premises, first)? == Some(EntailmentVerdict::PremisesInconsistent))
}

fn expect(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn sentence_count(text: &str) -> usize {
    text.trim().strip_suffix('.').map_or(0, |t| t.split(". ").count())
}

pub fn validate_example(e: &Example, rules: &Catalog) -> Result<(), String> {
    match e.problem_type {
        ProblemType::One => validate_type1(e),
        ProblemType::TwoA => validate_type2a(e, rules),
        ProblemType::TwoB => validate_type2b(e),
        ProblemType::ThreeA => validate_type3a(e, rules),
        ProblemType::ThreeB => validate_type3b(e),
    }
}

fn validate_type1(e: &Example) -> Result<(), String> {
    let body = e.input.strip_prefix(TYPE1_PROMPT).ok_or("missing type 1 prompt")?;
    let (prem, _) = body.rsplit_once(" Therefore ").ok_or("missing `Therefore` in input")?;
    expect(sentence_count(prem) == e.premise_count, || "premise count mismatch".into())?;
    let (prem, concl) = e.output.rsplit_once("Therefore ").ok_or("missing `Therefore` in output")?;
    let mut all = if prem.trim().is_empty() { Vec::new() } else { parse_list(prem)? };
    expect(all.len() == e.premise_count, || "output premise count mismatch".into())?;
    let concl = parse_one(concl.strip_suffix('.').ok_or("conclusion lacks a period")?)?;
    all.push(concl.clone());
    expect(canonicalize_type1(&all) == all, || "output is not canonically named".into())?;
    let v = verdict(&all[..all.len() - 1], &concl)?;
    expect(matches!(v, Some(EntailmentVerdict::Entailed | EntailmentVerdict::PremisesInconsistent)), || {
        format!("conclusion not entailed ({v:?})")
    })
}

fn type2_premises(e: &Example) -> Result<(bool, &str), String> {
    let body = e.input.strip_prefix(TYPE2_PROMPT).ok_or("missing type 2 prompt")?;
    Ok(match body.strip_prefix(TYPE2_NAME_RULES) {
        Some(rest) => (true, rest),
        None => (false, body),
    })
}

fn validate_type2a(e: &Example, rules: &Catalog) -> Result<(), String> {
    let (named, body) = type2_premises(e)?;
    let premises = parse_list(body)?;
    expect(premises.len() == e.premise_count, || "premise count mismatch".into())?;
    if e.output == TYPE2_CONTRADICTORY {
        return expect(inconsistent(&premises)?, || "premises are not contradictory".into());
    }
    expect(!inconsistent(&premises)?, || "contradictory premises not reported".into())?;
    let expected = enumerate_one_step(&premises, rules);
    if e.output == TYPE2_NOTHING {
        return expect(expected.is_empty(), || format!("{} one-step conclusions missing", expected.len()));
    }
    let body = e.output.strip_suffix('.').ok_or("output lacks a period")?;
    let mut got = Vec::new();
    for part in body.split(". ") {
        if named {
            let (f, rule) = part.split_once(" can be inferred via the ").ok_or("missing rule name")?;
            let rule = rule.strip_suffix(" rule").ok_or("missing `rule`")?;
            got.push((parse_one(f)?, Some(rule.to_string())));
        } else {
            got.push((parse_one(part)?, None));
        }
    }
    let want: HashSet<(Formula, Option<String>)> =
        expected.into_iter().map(|o| (o.conclusion, named.then_some(o.rule))).collect();
    let got_set: HashSet<(Formula, Option<String>)> = got.iter().cloned().collect();
    expect(got.len() == got_set.len() && got_set == want, || "one-step conclusions differ from the closure".into())
}

fn validate_type2b(e: &Example) -> Result<(), String> {
    let (named, body) = type2_premises(e)?;
    expect(sentence_count(body) == e.premise_count, || "premise count mismatch".into())?;
    if e.output == TYPE2_CONTRADICTORY || e.output == TYPE2_NOTHING {
        return Ok(());
    }
    let body = e.output.strip_suffix('.').ok_or("output lacks a period")?;
    for part in body.split(". ") {
        let has_rule = part.contains(" can be inferred via the ") && part.ends_with(" rule");
        expect(has_rule == named, || format!("rule naming does not match the prompt: `{part}`"))?;
    }
    Ok(())
}

struct Type3Input<'a> {
    premises: &'a str,
    query: &'a str,
    named: bool,
}

fn split_type3(input: &str) -> Result<Type3Input<'_>, String> {
    let body = input.strip_prefix(TYPE3_PROMPT).ok_or("missing type 3 prompt")?;
    let (premises, rest) = body.split_once(" Can we infer ").ok_or("missing query")?;
    let premises = premises.trim_end();
    if let Some(q) = rest.strip_prefix(&TYPE3_FOLLOWING["Can we infer ".len()..]) {
        let (named, q) = match q.strip_prefix(TYPE3_FOLLOWING_NAME_RULES) {
            Some(q) => (true, q),
            None => (false, q),
        };
        return Ok(Type3Input { premises: premises.trim_end(), query: q, named });
    }
    let (q, tail) = rest.split_once(" from them?").ok_or("malformed inline query")?;
    let named = match tail {
        "" => false,
        t if t == TYPE3_INLINE_NAME_RULES => true,
        _ => return Err("unexpected text after query".into()),
    };
    Ok(Type3Input { premises, query: q, named })
}

enum Answer<'a> {
    Chain { yes: bool, steps: &'a str },
    Corner(&'a str),
}

fn split_answer(e: &Example) -> Result<Answer<'_>, String> {
    let o = e.output.as_str();
    if [OBVIOUS, UNRELATED, CONTRADICTORY].contains(&o) {
        return Ok(Answer::Corner(o));
    }
    let chain = match e.answer_position {
        AnswerPosition::Begin => {
            o.strip_prefix(BEGIN_YES).map(|s| (true, s)).or_else(|| o.strip_prefix(BEGIN_NO).map(|s| (false, s)))
        }
        AnswerPosition::End => {
            o.strip_suffix(END_YES).map(|s| (true, s)).or_else(|| o.strip_suffix(END_NO).map(|s| (false, s)))
        }
    };
    let (yes, steps) = chain.ok_or("output matches no answer template")?;
    Ok(Answer::Chain { yes, steps })
}

fn parse_chain(text: &str, named: bool, contradicts: bool) -> Result<(Vec<ChainStep>, Option<Formula>), String> {
    let text = text.strip_suffix('.').ok_or("chain lacks a final period")?;
    let parts: Vec<&str> = text.split(". ").collect();
    let n = parts.len();
    let mut steps = Vec::with_capacity(n);
    let mut target = None;
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == n;
        let lead = if last && n > 1 { "Finally, from " } else { "From " };
        let rest = part.strip_prefix(lead).ok_or_else(|| format!("step {} should start with `{lead}`", i + 1))?;
        let (prem, mut concl) = rest.split_once(" we can infer ").ok_or("step lacks `we can infer`")?;
        if last && contradicts {
            let (c, t) = concl.split_once(", which contradicts ").ok_or("missing `which contradicts`")?;
            target = Some(parse_one(t)?);
            concl = c;
        }
        let rule = if named {
            let (c, r) = concl.split_once(" via ").ok_or("missing rule name")?;
            concl = c;
            r.to_string()
        } else {
            expect(!concl.contains(" via "), || "rule named although not requested".into())?;
            String::new()
        };
        let premises = prem.split(", ").map(parse_one).collect::<Result<Vec<_>, _>>()?;
        steps.push(ChainStep { premises, conclusion: parse_one(concl)?, rule });
    }
    Ok((steps, target))
}

fn validate_type3a(e: &Example, rules: &Catalog) -> Result<(), String> {
    let parts = split_type3(&e.input)?;
    let premises = parse_list(parts.premises)?;
    expect(premises.len() == e.premise_count, || "premise count mismatch".into())?;
    let query = parse_one(parts.query.strip_suffix('.').unwrap_or(parts.query))?;
    match split_answer(e)? {
        Answer::Corner(OBVIOUS) => expect(premises.contains(&query), || "query is not a premise".into()),
        Answer::Corner(UNRELATED) => {
            let v = verdict(&premises, &query)?;
            expect(v == Some(EntailmentVerdict::Independent), || format!("query is not independent ({v:?})"))
        }
        Answer::Corner(_) => expect(inconsistent(&premises)?, || "premises are not contradictory".into()),
        Answer::Chain { yes, steps } => {
            let (steps, contradicted) = parse_chain(steps, parts.named, !yes)?;
            let last = steps.last().ok_or("empty chain")?.conclusion.clone();
            let chain = InferenceChain::new(last.clone(), steps);
            let check = if parts.named {
                verify_chain(&premises, &chain, rules)
            } else {
                verify_chain_unnamed(&premises, &chain, rules)
            };
            check.map_err(|f| f.to_string())?;
            let v = verdict(&premises, &query)?;
            if yes {
                expect(last == query, || "chain does not end in the query".into())?;
                expect(v == Some(EntailmentVerdict::Entailed), || format!("oracle says {v:?}"))
            } else {
                expect(contradicted.as_ref() == Some(&query), || "contradicted clause is not the query".into())?;
                expect(last.contradiction() == query, || "chain conclusion does not contradict the query".into())?;
                expect(v == Some(EntailmentVerdict::Contradicted), || format!("oracle says {v:?}"))
            }
        }
    }
}

fn validate_type3b(e: &Example) -> Result<(), String> {
    let parts = split_type3(&e.input)?;
    expect(sentence_count(parts.premises) == e.premise_count, || "premise count mismatch".into())?;
    match split_answer(e)? {
        Answer::Corner(OBVIOUS) => {
            let q = parts.query.strip_suffix('.').unwrap_or(parts.query);
            let q_cap = crate::nl::capitalize(q);
            let prem = parts.premises.strip_suffix('.').unwrap_or(parts.premises);
            expect(prem.split(". ").any(|s| s == q || s == q_cap), || "query is not a premise".into())
        }
        Answer::Corner(_) => Ok(()),
        Answer::Chain { yes, steps } => {
            let n = steps.split(". ").count();
            expect(steps.starts_with("From "), || "chain should start with `From`".into())?;
            expect(n == 1 || steps.contains("Finally, from "), || "multi-step chain lacks `Finally`".into())?;
            expect(yes || steps.contains(", which contradicts "), || "disproof lacks `which contradicts`".into())
        }
    }
}

/// Counts per corner case, mostly for tests and reports.
pub fn corner_case_counts(examples: &[Example]) -> BTreeMap<CornerCase, usize> {
    let mut out: BTreeMap<CornerCase, usize> = BTreeMap::new();
    for e in examples {
        *out.entry(e.corner_case).or_default() += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(split: SplitKind) -> (DatasetSplit, StatsReport) {
        let config = GenerationConfig { num_problems: 80, num_variations: 5, num_examples: 1500, ..Default::default() };
        build_dataset(&config, split, Catalog::builtin(), &Lexicon::default()).unwrap()
    }

    #[test]
    fn iid_split_shape() {
        let (d, r) = small(SplitKind::Iid);
        let n = d.train.len() + d.test.len();
        assert!((d.train.len() as f64 / n as f64 - 0.9).abs() < 0.005);
        let mut seen = HashSet::new();
        for e in d.train.iter().chain(&d.test) {
            assert!(seen.insert((&e.input, &e.output)));
        }
        assert_eq!(r.total_examples(), n);
        assert_eq!(r.type_counts.values().sum::<usize>(), n);
    }

    #[test]
    fn length_and_ood_invariants() {
        let (d, _) = small(SplitKind::Length);
        assert!(d.train.iter().all(|e| e.premise_count <= 4));
        assert!(d.test.iter().all(|e| e.premise_count > 4));
        let (d, _) = small(SplitKind::Ood);
        let train: HashSet<u64> = d.train.iter().map(|e| e.problem_id).collect();
        assert!(d.test.iter().all(|e| !train.contains(&e.problem_id)));
        assert!(!d.test.is_empty());
    }

    #[test]
    fn generated_examples_validate() {
        let (d, _) = small(SplitKind::Iid);
        let report = validate_dataset(&d.train, Catalog::builtin());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn injected_flip_is_caught() {
        let (d, _) = small(SplitKind::Iid);
        let mut examples = d.train.clone();
        let i = examples
            .iter()
            .position(|e| e.problem_type == ProblemType::ThreeA && e.output.starts_with("Yes, via"))
            .unwrap();
        examples[i].output = examples[i].output.replacen("Yes", "No", 1);
        let report = validate_dataset(&examples, Catalog::builtin());
        assert_eq!(report.failures.len(), 1, "{report}");
        assert_eq!(report.failures[0].0, i + 1);
    }

    #[test]
    fn tsv_escaping() {
        let s = "a\tb\nc\\d";
        assert_eq!(escape_tsv(s), "a\\tb\\nc\\\\d");
        assert_eq!(unescape_tsv(&escape_tsv(s)), s);
    }

    #[test]
    fn files_round_trip() {
        let (d, _) = small(SplitKind::Iid);
        let dir = tempfile::tempdir().unwrap();
        let paths = write_dataset(&d, Format::Jsonl, dir.path()).unwrap();
        assert!(paths[0].ends_with("iid_train.jsonl"));
        assert_eq!(read_jsonl(&paths[0]).unwrap(), d.train);
        let paths = write_dataset(&d, Format::Tsv, dir.path()).unwrap();
        let rows = read_tsv(&paths[1]).unwrap();
        assert_eq!(rows.len(), d.test.len());
        assert_eq!(rows[0], (d.test[0].input.clone(), d.test[0].output.clone()));
    }

    #[test]
    fn empty_report() {
        let r = report_stats(&DatasetSplit { name: SplitKind::Iid, train: vec![], test: vec![] });
        assert_eq!(r, StatsReport::default());
    }

    #[test]
    fn length_stats() {
        let s = LengthStats::of((1..=10).collect());
        assert_eq!((s.min, s.median, s.max), (1, 6, 10));
        assert_eq!(s.p90, 9);
    }
}
