use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use toxcliff_core::analysis::load_case_fixture;
use toxcliff_core::dataset::ingest_dataset;
use toxcliff_core::miner::CliffPair;
use toxcliff_core::qa::{PromptBundle, QAInstance};
use toxcliff_harness::analyze::{analyze, AnalysisBundle, CaseSummary};
use toxcliff_harness::evaluate::{run_evaluation, PredictionRecord};
use toxcliff_harness::io::{read_json, read_jsonl, write_json};
use toxcliff_harness::pipeline::{
    build_stage, load_assets, load_split, mine_stage, prompt_stage, split_stage, Layout,
};
use toxcliff_harness::predictor::build_predictor;
use toxcliff_harness::report::{export_report, ReportFormat};
use toxcliff_harness::HarnessConfig;

#[derive(Parser)]
#[command(name = "toxcliff", version, about = "Toxicity-cliff benchmark construction and evaluation")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Delimited,
    Lines,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ingest a labeled CSV and mine cliff pairs.
    Mine {
        #[arg(long)]
        input: PathBuf,
    },
    /// Scaffold split of the mined pairs.
    Split,
    /// Three QA instances per pair.
    BuildQa,
    /// Prompts for the evaluation set.
    RenderPrompts,
    /// Query the configured predictor for every run, resuming if possible.
    Evaluate,
    /// Aggregate scores, case composition and alert overlap.
    Analyze,
    /// Write the report files.
    Report {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "table,delimited,lines")]
        format: Vec<Format>,
        /// Render a published case composition (`group,case,proportion`)
        /// instead of the computed one.
        #[arg(long)]
        cases_fixture: Option<PathBuf>,
    },
    /// Every stage from mining to report.
    Run {
        #[arg(long)]
        input: PathBuf,
    },
}

fn load_config(cli: &Cli) -> Result<HarnessConfig> {
    let mut cfg = match &cli.config {
        Some(p) => HarnessConfig::from_file(p)?,
        None => HarnessConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn mine(cfg: &HarnessConfig, layout: &Layout, input: &Path) -> Result<()> {
    let data = ingest_dataset(input).with_context(|| format!("reading {}", input.display()))?;
    write_json(&layout.run_meta(), &serde_json::json!({ "seed": cfg.seed, "config": cfg }))?;
    let pairs = mine_stage(cfg, &data, layout)?;
    log::info!("{} molecules, {} pairs", data.molecules.len(), pairs.len());
    Ok(())
}

fn split(cfg: &HarnessConfig, layout: &Layout) -> Result<()> {
    let pairs: Vec<CliffPair> = read_jsonl(&layout.pairs())?;
    let s = split_stage(cfg, &pairs, layout)?;
    log::info!("train {} / test {}", s.train.len(), s.test.len());
    Ok(())
}

fn build_qa(cfg: &HarnessConfig, layout: &Layout) -> Result<()> {
    let s = load_split(layout)?;
    let inst = build_stage(cfg, &s, layout)?;
    log::info!("{} instances", inst.len());
    Ok(())
}

fn render(cfg: &HarnessConfig, layout: &Layout) -> Result<()> {
    let instances: Vec<QAInstance> = read_jsonl(&layout.instances())?;
    let prompts = prompt_stage(cfg, &instances, &load_assets(cfg)?, layout)?;
    log::info!("{} prompts", prompts.len());
    Ok(())
}

fn evaluate(cfg: &HarnessConfig, layout: &Layout) -> Result<()> {
    let instances: Vec<QAInstance> = read_jsonl(&layout.instances())?;
    let prompts: Vec<PromptBundle> = read_jsonl(&layout.prompts())?;
    let predictor = build_predictor(cfg, &instances)?;
    let records = run_evaluation(cfg, &instances, &prompts, predictor.as_ref(), Some(&layout.predictions()))?;
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    log::info!("{} records, {failed} predictor failures", records.len());
    Ok(())
}

fn analyze_stage(cfg: &HarnessConfig, layout: &Layout) -> Result<()> {
    let records: Vec<PredictionRecord> = read_jsonl(&layout.predictions())?;
    let scored: Vec<_> = records.iter().map(PredictionRecord::scored).collect();
    let pairs: Vec<CliffPair> = read_jsonl(&layout.pairs())?;
    write_json(&layout.analysis(), &analyze(cfg, &scored, &pairs)?)?;
    Ok(())
}

fn report(layout: &Layout, formats: &[Format], fixture: Option<&Path>) -> Result<()> {
    let mut bundle: AnalysisBundle = match fixture {
        Some(_) if !layout.analysis().exists() => AnalysisBundle::default(),
        _ => read_json(&layout.analysis())?,
    };
    if let Some(path) = fixture {
        let (success, failure) = load_case_fixture(path)?;
        bundle.cases = Some(CaseSummary {
            success,
            failure,
            samples: 0,
            excluded: 0,
        });
    }
    let formats: Vec<ReportFormat> = formats
        .iter()
        .map(|f| match f {
            Format::Table => ReportFormat::Table,
            Format::Delimited => ReportFormat::Delimited,
            Format::Lines => ReportFormat::Lines,
        })
        .collect();
    for p in export_report(&bundle, &formats, &layout.root)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let layout = Layout::new(&cfg.output_dir);
    match &cli.command {
        Cmd::Mine { input } => mine(&cfg, &layout, input),
        Cmd::Split => split(&cfg, &layout),
        Cmd::BuildQa => build_qa(&cfg, &layout),
        Cmd::RenderPrompts => render(&cfg, &layout),
        Cmd::Evaluate => evaluate(&cfg, &layout),
        Cmd::Analyze => analyze_stage(&cfg, &layout),
        Cmd::Report {
            format,
            cases_fixture,
        } => report(&layout, format, cases_fixture.as_deref()),
        Cmd::Run { input } => {
            mine(&cfg, &layout, input)?;
            split(&cfg, &layout)?;
            build_qa(&cfg, &layout)?;
            render(&cfg, &layout)?;
            evaluate(&cfg, &layout)?;
            analyze_stage(&cfg, &layout)?;
            report(&layout, &[Format::Table, Format::Delimited, Format::Lines], None)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
