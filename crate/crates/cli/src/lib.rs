//! The `luknet` command line: formulas, networks, training and data preparation.

mod operand;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use luknet::data::{
    apply_recipe, binarize, classify_accuracy, enrich_negative, load_nominal_csv, select_attributes, Dataset,
    Recipe, DEFAULT_THRESHOLD,
};
use luknet::network::NetworkFile;
use luknet::numfmt::format_sig;
use luknet::rewrite::{extract_with_approximation, lambda_similarity, EvalSet, DEFAULT_BEAM_WIDTH};
use luknet::train::{reverse_engineer, TrainConfig};
use luknet::{TruthFunction, TruthTable};

use operand::{resolve, Operand};
use output::{emit, write_atomic};

pub const EXIT_USER: u8 = 1;
pub const EXIT_UNCONVERGED: u8 = 2;

/// Łukasiewicz formulas and saturating-linear networks.
///
/// Wherever a model is expected, give a formula such as `x0 * !x1`, a neuron
/// literal such as `psi(0; -x0, x1, x2)`, a network JSON file, or
/// `compile:` followed by a formula or literal.
#[derive(Parser)]
#[command(name = "luknet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the truth value of a model at a point.
    Eval {
        model: String,
        /// Comma-separated input values in [0,1].
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
    },
    /// Tabulate a model on the grid S_n.
    Table {
        model: String,
        #[arg(short = 'n', long, default_value_t = 1)]
        resolution: u32,
        /// Output CSV; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a formula into a network file.
    Compile {
        model: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Extract a formula from a Castro network and report its λ.
    Interpret {
        model: String,
        /// grid:N, data:FILE or mc:K; defaults to the network's resolution hint or grid:1.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BEAM_WIDTH)]
        beam: usize,
        /// Seed for mc mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the full extraction report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the λ-similarity of two models.
    Similar {
        a: String,
        b: String,
        /// grid:N, data:FILE or mc:K.
        #[arg(long, default_value = "grid:1")]
        mode: String,
        /// Seed for mc mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Learn a Castro network from a table and extract its formula.
    Reveng {
        table: PathBuf,
        #[command(flatten)]
        train: TrainArgs,
        /// Network output file.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Search and extraction report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// One-hot encode a nominal CSV.
    Binarize {
        input: PathBuf,
        /// Name of the class column.
        #[arg(long)]
        class: String,
        /// Class value mapped to target 1.
        #[arg(long)]
        positive: String,
        /// Keep both features of two-valued attributes.
        #[arg(long)]
        no_collapse: bool,
        /// Derived-feature recipe file, or `mushroom` for the built-in A1-A8.
        #[arg(long)]
        recipe: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Append scaled copies of every row as negative examples.
    Enrich {
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        factor: f64,
        #[arg(long, default_value_t = 0.0)]
        negative_target: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Select the attributes a learned network depends on.
    Select {
        input: PathBuf,
        #[command(flatten)]
        train: TrainArgs,
        /// Network output file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print classification accuracy and miss count of a model on a dataset.
    Accuracy {
        model: String,
        data: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Args)]
struct TrainArgs {
    /// JSON training configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    target_mse: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "LUKNET_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    max_topologies: Option<usize>,
    /// Restarts per topology.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    beam: Option<usize>,
    /// Print training progress to standard error.
    #[arg(long)]
    progress: bool,
}

impl TrainArgs {
    fn config(&self) -> Result<TrainConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                TrainConfig::from_json(&read(p)?).with_context(|| format!("loading {}", p.display()))?
            }
            None => TrainConfig::default(),
        };
        if let Some(v) = self.target_mse {
            cfg.target_mse = v;
        }
        if let Some(v) = self.seed {
            cfg.rng_seed = v;
        }
        if let Some(v) = self.jobs {
            cfg.jobs = v;
        }
        if let Some(v) = self.max_iterations {
            cfg.max_iterations = v;
        }
        if let Some(v) = self.max_topologies {
            cfg.max_topologies = v;
        }
        if let Some(v) = self.restarts {
            cfg.restarts_per_topology = Some(v);
        }
        if let Some(v) = self.beam {
            cfg.beam_width = v;
        }
        cfg.progress |= self.progress;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_dataset(path: &Path) -> Result<Dataset> {
    Dataset::read_csv_detect_table(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn fmt(v: f64) -> String {
    format_sig(v, 12)
}

fn eval_set(mode: &str, arity: usize, seed: u64) -> Result<EvalSet> {
    let (kind, arg) = mode.split_once(':').unwrap_or((mode, ""));
    Ok(match kind {
        "grid" => EvalSet::grid(arity, arg.parse().context("grid:N needs an integer N")?)?,
        "mc" => EvalSet::monte_carlo(arity, arg.parse().context("mc:K needs an integer K")?, seed),
        "data" => {
            let d = read_dataset(Path::new(arg))?;
            if d.arity() != arity {
                bail!("{arg} has {} inputs, the models need {arity}", d.arity());
            }
            EvalSet::rows(arity, d.rows())?
        }
        _ => bail!("unknown mode {mode:?}; use grid:N, data:FILE or mc:K"),
    })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Eval { model, at } => {
            let op = resolve(&model, &[])?;
            let f = op.widened(at.len())?;
            if let Some(v) = at.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                bail!("value {v} is outside [0,1]");
            }
            writeln!(out, "{}", fmt(f.eval_point(&at)))?;
        }
        Command::Table {
            model,
            resolution,
            output,
        } => {
            let op = resolve(&model, &[])?;
            let t = TruthTable::tabulate(&op.widened(op.arity())?, resolution)?;
            emit(out, output.as_deref(), t.to_csv_string().as_bytes())?;
        }
        Command::Compile { model, output } => {
            let op = resolve(&model, &[])?;
            let mut file = NetworkFile::new(op.castro()?.into_network());
            file.input_names = Some(op.names());
            emit(out, output.as_deref(), file.to_json().as_bytes())?;
        }
        Command::Interpret {
            model,
            mode,
            beam,
            seed,
            report,
        } => {
            let op = resolve(&model, &[])?;
            let net = op.castro()?;
            let mode = mode.unwrap_or_else(|| format!("grid:{}", op.resolution_hint().unwrap_or(1)));
            let set = eval_set(&mode, net.arity(), seed)?;
            let rep = extract_with_approximation(&net, &set, &op.names(), beam)?;
            if let Some(p) = report {
                write_atomic(&p, rep.to_json().as_bytes())?;
            }
            writeln!(out, "formula: {}", rep.formula)?;
            writeln!(out, "lambda: {} ({})", fmt(rep.lambda), rep.eval_mode)?;
            writeln!(out, "approximated neurons: {}", rep.approximated)?;
            for n in rep.neurons.iter().filter(|n| n.lambda > 0.0) {
                writeln!(
                    out,
                    "  layer {} neuron {}: {} (lambda {})",
                    n.layer,
                    n.index,
                    n.formula,
                    fmt(n.lambda)
                )?;
            }
        }
        Command::Similar { a, b, mode, seed } => {
            let (a, b) = (resolve(&a, &[])?, resolve(&b, &[])?);
            let m = a.arity().max(b.arity());
            let set = eval_set(&mode, m, seed)?;
            writeln!(
                out,
                "{}",
                fmt(lambda_similarity(&a.widened(m)?, &b.widened(m)?, &set)?)
            )?;
        }
        Command::Reveng {
            table,
            train,
            output,
            report,
        } => {
            let cfg = train.config()?;
            let data = read_dataset(&table)?;
            let res = reverse_engineer(&data, &cfg)?;
            let mut file = NetworkFile::new(res.network.as_network().clone());
            file.input_names = Some(data.names().to_vec());
            file.resolution_hint = data.resolution();
            if let Some(p) = &output {
                write_atomic(p, file.to_json().as_bytes())?;
            }
            if let Some(p) = &report {
                let json = serde_json::json!({
                    "converged": res.converged,
                    "mse": res.mse,
                    "widths": res.network.widths(),
                    "extraction": res.report,
                    "attempts": res.attempts,
                });
                write_atomic(p, (serde_json::to_string_pretty(&json)? + "\n").as_bytes())?;
            }
            writeln!(out, "formula: {}", res.report.formula)?;
            writeln!(out, "mse: {}", fmt(res.mse))?;
            writeln!(out, "lambda: {}", fmt(res.report.lambda))?;
            writeln!(out, "attempts: {}", res.attempts.len())?;
            if !res.converged {
                eprintln!("no network reached the target mse; reporting the best one found");
                return Ok(EXIT_UNCONVERGED);
            }
        }
        Command::Binarize {
            input,
            class,
            positive,
            no_collapse,
            recipe,
            output,
        } => {
            let t = load_nominal_csv(&input, &class, &positive)?;
            let d = match recipe.as_deref() {
                Some("mushroom") => apply_recipe(&t, &Recipe::mushroom())?,
                Some(p) => apply_recipe(&t, &Recipe::parse(&read(Path::new(p))?)?)?,
                None => binarize(&t, !no_collapse),
            };
            let mut buf = Vec::new();
            d.write_csv(&mut buf, &class)?;
            emit(out, output.as_deref(), &buf)?;
        }
        Command::Enrich {
            input,
            factor,
            negative_target,
            output,
        } => {
            let d = read_dataset(&input)?;
            let e = enrich_negative(&d, factor, negative_target)?;
            let target = target_name(&input)?;
            let mut buf = Vec::new();
            e.write_csv(&mut buf, &target)?;
            emit(out, output.as_deref(), &buf)?;
        }
        Command::Select { input, train, output } => {
            let cfg = train.config()?;
            let d = read_dataset(&input)?;
            let rep = select_attributes(&d, &cfg)?;
            if let Some(p) = &output {
                let mut file = NetworkFile::new(rep.network.as_network().clone());
                file.input_names = Some(d.names().to_vec());
                write_atomic(p, file.to_json().as_bytes())?;
            }
            writeln!(out, "{}", rep.to_json())?;
            if !rep.converged {
                return Ok(EXIT_UNCONVERGED);
            }
        }
        Command::Accuracy {
            model,
            data,
            threshold,
        } => {
            let d = read_dataset(&data)?;
            let op: Operand = resolve(&model, d.names())?;
            let a = classify_accuracy(&op.widened(d.arity())?, &d, threshold)?;
            writeln!(out, "accuracy: {}", fmt(a.accuracy))?;
            writeln!(out, "misses: {} of {}", a.misses, a.total)?;
        }
    }
    Ok(0)
}

/// Header of the last column of a CSV file.
fn target_name(path: &Path) -> Result<String> {
    let mut rd = csv::Reader::from_path(path)?;
    Ok(rd.headers()?.iter().last().unwrap_or("y").to_string())
}

/// Runs one command; `argv` includes the program name. Results go to `out`,
/// diagnostics to standard error. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            eprint!("{}", e.render());
            return EXIT_USER;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USER
        }
    }
}
