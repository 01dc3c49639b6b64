use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use logicinf_core::dataset::{
    build_dataset, read_jsonl, report_stats, validate_file, write_dataset, DatasetSplit, Format, SplitKind,
};
use logicinf_core::example::{parse_floats, AnswerPosition, TypeWeights};
use logicinf_core::{Catalog, GenerationConfig, Lexicon};

#[derive(Parser)]
#[command(name = "logicinf", version, about = "Generate and check logical inference datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one split and write its train/test files.
    Generate(GenerateArgs),
    /// Check every example of a JSONL file against the rules and the oracle.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print statistics of a JSONL file.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Inspect the rule catalog.
    Rules {
        #[command(subcommand)]
        action: RulesAction,
    },
}

#[derive(Subcommand)]
enum RulesAction {
    /// Print every rule with its patterns.
    List,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long, default_value = "iid")]
    split: SplitKind,
    #[arg(long, default_value = "begin")]
    answer_position: AnswerPosition,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5000)]
    num_problems: usize,
    #[arg(long, default_value_t = 25)]
    num_variations: usize,
    #[arg(long, default_value_t = 200_000)]
    num_examples: usize,
    #[arg(long, default_value_t = 4)]
    length_threshold: usize,
    #[arg(long, default_value_t = 0.1)]
    contradiction_cap: f64,
    #[arg(long, default_value_t = 0.9)]
    split_ratio: f64,
    /// Five comma-separated weights for types 1, 2a, 2b, 3a, 3b.
    #[arg(long)]
    type_weights: Option<TypeWeights>,
    /// Comma-separated probabilities of 0, 1, 2, ... growth steps.
    #[arg(long)]
    chain_dist: Option<String>,
    #[arg(long, default_value = "jsonl")]
    format: Format,
    /// Lexicon JSON file replacing the built-in one.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

impl GenerateArgs {
    fn config(&self) -> Result<GenerationConfig> {
        let defaults = GenerationConfig::default();
        let chain_length_distribution = match &self.chain_dist {
            Some(s) => parse_floats(s).map_err(anyhow::Error::msg).context("--chain-dist")?,
            None => defaults.chain_length_distribution.clone(),
        };
        let config = GenerationConfig {
            chain_length_distribution,
            num_problems: self.num_problems,
            num_variations: self.num_variations,
            contradiction_cap: self.contradiction_cap,
            num_examples: self.num_examples,
            split_ratio: self.split_ratio,
            length_threshold: self.length_threshold,
            answer_position: self.answer_position,
            seed: self.seed,
            type_weights: self.type_weights.unwrap_or_default(),
            ..defaults
        };
        config.validate()?;
        Ok(config)
    }
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let config = args.config()?;
    let lexicon = match &args.lexicon {
        Some(p) => Lexicon::load(p).with_context(|| format!("loading lexicon {}", p.display()))?,
        None => Lexicon::default(),
    };
    let (split, report) = build_dataset(&config, args.split, Catalog::builtin(), &lexicon)?;
    let paths = write_dataset(&split, args.format, &args.out)?;
    let stats_path = args.out.join(format!("{}_stats.json", args.split));
    std::fs::write(&stats_path, serde_json::to_string_pretty(&report)?)?;
    println!("{report}");
    for p in paths.iter().chain([&stats_path]) {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Generate(args) => generate(&args)?,
        Command::Validate { input } => {
            let report = validate_file(&input, Catalog::builtin())?;
            print!("{report}");
            if !report.passed() {
                eprintln!("{} of {} examples failed", report.failures.len(), report.total());
                return Ok(ExitCode::FAILURE);
            }
            println!("all {} examples passed", report.total());
        }
        Command::Stats { input, json } => {
            if input.extension().is_some_and(|e| e != "jsonl") {
                bail!("stats needs a JSONL file");
            }
            let examples = read_jsonl(&input)?;
            let split = DatasetSplit { name: SplitKind::Iid, train: examples, test: Vec::new() };
            let report = report_stats(&split);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{report}");
            }
        }
        Command::Rules { action: RulesAction::List } => {
            let catalog = Catalog::builtin();
            for (i, rule) in catalog.iter().enumerate() {
                println!("{:>2}. {}", i + 1, rule.describe());
            }
            println!("{} rules", catalog.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}
