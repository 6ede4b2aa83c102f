use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hnn_forge::analysis::{analyze, verify_example5_suite, AnalyzeConfig, SuiteConfig};
use hnn_forge::instances::bs::bs_chain;
use hnn_forge::instances::{Example5, Instance};
use hnn_forge::tree::{ball, export_dot, vertex_of};
use hnn_forge::{format_word, normal_form, parse_word, word_stats, HnnError, HnnPresentation, Sign};

const MAX_TAU_LENGTH: usize = 8;
const MAX_RADIUS: usize = 6;
const MAX_X_LEN: usize = 6;
const MAX_BALL_VERTICES: usize = 2_000_000;

#[derive(Parser)]
#[command(name = "hnn-forge", version, about = "Normal forms, Bass-Serre trees and C*-simplicity evidence for HNN extensions")]
struct Cli {
    /// Instance selector: bs:m,n | finite:<path.json> | finite:s3 | finite:z4 | example5
    #[arg(long, global = true)]
    instance: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of a word and its letter statistics
    Nf {
        /// Whitespace-separated tokens; `t` and `T` are the stable letter and its inverse
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit a ball of the Bass-Serre tree as DOT
    Tree {
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Word whose vertex is the center of the ball
        #[arg(long, default_value = "")]
        center: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the evidence engine and emit a JSON report
    Analyze {
        #[arg(long, default_value_t = 4)]
        tau_length: usize,
        #[arg(long, default_value_t = 3)]
        kernel_tau_length: usize,
        #[arg(long, default_value_t = 10)]
        chain_steps: usize,
        /// Include wall-clock time in the report
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the structural lemmas of the example group and print a ledger
    VerifyExample5 {
        #[arg(long, default_value_t = 4)]
        x_len: usize,
        #[arg(long, default_value_t = 4)]
        tau_length: usize,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Print the exponent chain of a Baumslag-Solitar instance
    BsChain {
        #[arg(long, allow_hyphen_values = true)]
        direction: i64,
        #[arg(long)]
        steps: usize,
    },
}

enum Failure {
    Usage(String),
    Instance(String),
    Run(String),
    Suite,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Suite | Failure::Run(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Instance(_) => 3,
        }
    }
}

impl From<HnnError> for Failure {
    fn from(e: HnnError) -> Self {
        match e {
            HnnError::InvalidInstance(_) => Failure::Instance(e.to_string()),
            HnnError::Parse { .. } | HnnError::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Instance(m) | Failure::Run(m) => eprintln!("error: {m}"),
                Failure::Suite => eprintln!("error: lemma suite failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("HNN_FORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::Usage(format!("HNN_FORGE_THREADS must be an integer >= 1, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Run(e.to_string()))
}

fn cap(name: &str, value: usize, max: usize) -> Result<(), Failure> {
    if value == 0 || value > max {
        return Err(Failure::Usage(format!("--{name} must be between 1 and {max}")));
    }
    Ok(())
}

fn instance(cli: &Cli) -> Result<Instance, Failure> {
    let selector = cli
        .instance
        .as_deref()
        .ok_or_else(|| Failure::Usage("this command needs --instance".into()))?;
    Instance::from_selector(selector).map_err(|e| match e {
        HnnError::Parse { .. } | HnnError::InvalidInstance(_) => Failure::Instance(e.to_string()),
        other => other.into(),
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::Nf { word, format } => {
            let inst = instance(&cli)?;
            let text = match &inst {
                Instance::Bs(p) => nf_text(p, word, *format)?,
                Instance::Finite(p) => nf_text(p, word, *format)?,
                Instance::Example5(p) => nf_text(p, word, *format)?,
            };
            emit(&text, None)
        }
        Command::Tree { radius, center, out } => {
            if *radius > MAX_RADIUS {
                return Err(Failure::Usage(format!("--radius must be at most {MAX_RADIUS}")));
            }
            let inst = instance(&cli)?;
            let dot = match &inst {
                Instance::Bs(p) => tree_dot(p, center, *radius)?,
                Instance::Finite(p) => tree_dot(p, center, *radius)?,
                Instance::Example5(p) => tree_dot(p, center, *radius)?,
            };
            emit(&dot, out.as_ref())
        }
        Command::Analyze { tau_length, kernel_tau_length, chain_steps, timing, out } => {
            cap("tau-length", *tau_length, MAX_TAU_LENGTH)?;
            cap("kernel-tau-length", *kernel_tau_length, MAX_TAU_LENGTH)?;
            if *chain_steps < 2 || *chain_steps > hnn_forge::instances::bs::MAX_CHAIN_STEPS {
                return Err(Failure::Usage(format!("--chain-steps must be between 2 and {}", hnn_forge::instances::bs::MAX_CHAIN_STEPS)));
            }
            let inst = instance(&cli)?;
            let config = AnalyzeConfig {
                tau_length: *tau_length,
                kernel_tau_length: *kernel_tau_length,
                chain_steps: *chain_steps,
                timing: *timing,
            };
            let report = analyze(&inst, &config)?;
            emit(&format!("{}\n", report.to_json()), out.as_ref())
        }
        Command::VerifyExample5 { x_len, tau_length, pairs, seed } => {
            cap("x-len", *x_len, MAX_X_LEN)?;
            cap("tau-length", *tau_length, MAX_TAU_LENGTH)?;
            let variant = match cli.instance.as_deref() {
                None => Example5::new().variant(),
                Some(_) => match instance(&cli)? {
                    Instance::Example5(e) => e.variant(),
                    _ => return Err(Failure::Usage("verify-example5 only runs on the example5 instance".into())),
                },
            };
            let config = SuiteConfig {
                x_len: *x_len,
                survival_x_len: (*x_len).min(3),
                tau_length: *tau_length,
                length_formula_pairs: *pairs,
                seed: *seed,
                variant,
                ..SuiteConfig::default()
            };
            let ledger = verify_example5_suite(&config)?;
            print!("{ledger}");
            if ledger.passed() {
                Ok(())
            } else {
                Err(Failure::Suite)
            }
        }
        Command::BsChain { direction, steps } => {
            let Instance::Bs(b) = instance(&cli)? else {
                return Err(Failure::Usage("bs-chain needs a bs:m,n instance".into()));
            };
            let dir = Sign::from_i64(*direction)
                .ok_or_else(|| Failure::Usage("--direction must be 1 or -1".into()))?;
            let chain = bs_chain(&b, dir, *steps)?;
            let parts: Vec<String> = chain.iter().map(ToString::to_string).collect();
            println!("{}", parts.join(" "));
            Ok(())
        }
    }
}

fn nf_text<P: HnnPresentation>(pres: &P, word: &str, format: Format) -> Result<String, Failure> {
    let w = parse_word(pres, word)?;
    let nf = normal_form(pres, &w)?;
    let stats = word_stats(pres, &nf);
    let shown = format_word(pres, &nf.to_word());
    let sign = |s: Option<Sign>| s.map_or("none".to_string(), |s| s.to_string());
    Ok(match format {
        Format::Text => format!(
            "{shown}\nlength: {}\ntype: {}\ndirection: {}\ninitial_is_trivial: {}\nend_letter: {}\nin_T_dagger[-1]: {}\nin_T_dagger[+1]: {}\n",
            stats.length,
            sign(stats.ty),
            sign(stats.direction),
            stats.initial_is_trivial,
            pres.format_elt(&stats.end_letter),
            stats.in_t_dagger(Sign::Neg),
            stats.in_t_dagger(Sign::Pos),
        ),
        Format::Json => {
            let prefix: Vec<serde_json::Value> = nf
                .prefix
                .iter()
                .map(|(s, e)| serde_json::json!([pres.format_elt(s), e.as_i8()]))
                .collect();
            let value = serde_json::json!({
                "normal_form": shown,
                "prefix": prefix,
                "end_letter": pres.format_elt(&nf.end_letter),
                "length": stats.length,
                "type": stats.ty.map(Sign::as_i8),
                "direction": stats.direction.map(Sign::as_i8),
                "initial_is_trivial": stats.initial_is_trivial,
                "in_t_dagger": {
                    "-1": stats.in_t_dagger(Sign::Neg),
                    "1": stats.in_t_dagger(Sign::Pos),
                },
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json value serializes"))
        }
    })
}

fn tree_dot<P: HnnPresentation>(pres: &P, center: &str, radius: usize) -> Result<String, Failure> {
    let c = vertex_of(pres, &parse_word(pres, center)?)?;
    let b = ball(pres, &c, radius, MAX_BALL_VERTICES)?;
    Ok(export_dot(pres, &b))
}
