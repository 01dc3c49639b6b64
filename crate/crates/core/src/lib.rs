//! Synthetic logical-inference problems: formulas, a semantic oracle, an
//! inference rule catalog, problem synthesis, natural-language rendering and
//! dataset assembly.

pub mod dataset;
pub mod example;
pub mod formula;
pub mod nl;
pub mod rules;
pub mod semantics;
pub mod synthesis;

pub use dataset::{
    build_dataset, report_stats, validate_dataset, write_dataset, DatasetError, DatasetSplit, Format, SplitKind,
    StatsReport, ValidationReport,
};
pub use example::{
    answer_flip, make_example, render_example, AnswerPosition, CornerCase, Example, ExampleError, ExamplePlan,
    ProblemType, TypeWeights,
};
pub use formula::{parse_formula, Formula, ParseError, Renaming, SymbolInventory, SymbolKind, Term};
pub use nl::{assign_lexicon, canonicalize_type1, render_nl, LexAssignment, Lexicon, NlError};
pub use rules::{Catalog, InferenceRule, RuleError, RuleFamily, Substitution};
pub use semantics::{classify, verify_chain, ChainStep, EntailmentVerdict, InferenceChain, SemanticsError};
pub use synthesis::{
    enumerate_one_step, generate_problem, generate_problems, make_variations, GenerationConfig, InferenceProblem,
    SynthesisError,
};
