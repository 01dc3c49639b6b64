//! Shared inputs for the benchmarks.

use logicinf_core::synthesis::{generate_problems, GenerationConfig};
use logicinf_core::{parse_formula, Catalog, Formula, InferenceProblem};

/// A fixed batch of problems generated with seed 0.
pub fn sample_problems(n: usize) -> Vec<InferenceProblem> {
    let config = GenerationConfig { num_problems: n, ..Default::default() };
    generate_problems(Catalog::builtin(), &config).expect("default config generates").problems
}

pub fn formulas(texts: &[&str]) -> Vec<Formula> {
    texts.iter().map(|t| parse_formula(t).expect("valid formula")).collect()
}
