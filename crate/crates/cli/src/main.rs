use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ckdp_core::calibration::{recover_calibrated, Calibration};
use ckdp_core::frontend::DEFAULT_EXTENSION;
use ckdp_core::golden::GoldenDataset;
use ckdp_core::pipeline::{self, load, AnalysisConfig, ExitStatus, InputFormat, ModelChoice};
use ckdp_core::report::{render, render_metrics_csv, OutputFormat};
use ckdp_core::{serialize_model, Error, WmcMode};

#[derive(Parser)]
#[command(
    name = "ckdp",
    version,
    about = "CK design metrics and defect-proneness estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute metrics and the defect-proneness report.
    Analyze(AnalyzeArgs),
    /// Compute metrics only, as `class,dit,rfc,wmc` CSV.
    Metrics(InputArgs),
    /// Refit the model to a golden per-class table and audit the published coefficients.
    Calibrate(CalibrateArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Files or directories to analyze.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "source", value_parser = parse_input_format)]
    input_format: InputFormat,
    #[arg(long, default_value = "count")]
    wmc_mode: WmcMode,
    /// Source file extension searched for in directories.
    #[arg(long, default_value = DEFAULT_EXTENSION)]
    ext: String,
    /// Project name in reports (defaults to the input's file stem).
    #[arg(long)]
    project: Option<String>,
    /// Also write the extracted class model as an interchange document.
    #[arg(long, value_name = "PATH")]
    dump_model: Option<PathBuf>,
}

fn parse_input_format(s: &str) -> Result<InputFormat, String> {
    s.parse()
}

fn parse_output_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinModel {
    Published,
    Calibrated,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(
        long,
        value_enum,
        default_value = "calibrated",
        conflicts_with = "model_file"
    )]
    model: BuiltinModel,
    /// Model-set document to use instead of a built-in set.
    #[arg(long, value_name = "PATH")]
    model_file: Option<PathBuf>,
    #[arg(long, default_value = "text", value_parser = parse_output_format)]
    output: OutputFormat,
    /// Exit with status 1 when the project index exceeds this percentage.
    #[arg(long)]
    gate: Option<f64>,
    #[arg(long, default_value_t = 2)]
    round: u32,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Golden per-class CSV; the embedded table when omitted.
    #[arg(long, value_name = "PATH")]
    golden: Option<PathBuf>,
    /// Where to write the recovered model-set document.
    #[arg(long, value_name = "PATH")]
    model_out: Option<PathBuf>,
    #[arg(long, default_value = "text", value_parser = parse_output_format)]
    output: OutputFormat,
}

fn config_from(input: &InputArgs) -> AnalysisConfig {
    AnalysisConfig {
        inputs: input.inputs.clone(),
        input_format: input.input_format,
        wmc_mode: input.wmc_mode,
        extension: input.ext.clone(),
        project_id: input.project.clone(),
        ..AnalysisConfig::default()
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })
}

fn dump_model(input: &InputArgs, loaded: &pipeline::Loaded) -> Result<(), Error> {
    if let Some(path) = &input.dump_model {
        match &loaded.model {
            Some(model) => write_file(path, &serialize_model(model))?,
            None => {
                return Err(Error::Config(
                    "--dump-model needs source or model-document input".into(),
                ))
            }
        }
    }
    Ok(())
}

fn note(text: &str) {
    eprintln!("note: {text}");
}

fn emit(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn analyze(args: &AnalyzeArgs) -> Result<ExitStatus, Error> {
    let config = AnalysisConfig {
        model_choice: match (&args.model_file, args.model) {
            (Some(path), _) => ModelChoice::File(path.clone()),
            (None, BuiltinModel::Published) => ModelChoice::Published,
            (None, BuiltinModel::Calibrated) => ModelChoice::Calibrated,
        },
        output_format: args.output,
        gate: args.gate,
        round_decimals: args.round,
        ..config_from(&args.input)
    };
    config.validate()?;
    let model = config.model_choice.load()?;
    let loaded = load(&config)?;
    dump_model(&args.input, &loaded)?;
    let outcome = pipeline::analyze_vectors(&loaded.vectors, &model, &config)?;
    for text in &outcome.report.notes {
        note(text);
    }
    emit(&render(
        &outcome.report,
        config.output_format,
        config.round_decimals,
    ))?;
    if outcome.status == ExitStatus::GateExceeded {
        eprintln!(
            "gate: project index {:.2} exceeds {}",
            outcome.report.summary.p_dpr,
            config.gate.unwrap_or_default()
        );
    }
    Ok(outcome.status)
}

fn metrics(args: &InputArgs) -> Result<ExitStatus, Error> {
    let loaded = load(&config_from(args))?;
    dump_model(args, &loaded)?;
    emit(&render_metrics_csv(&loaded.vectors))?;
    Ok(ExitStatus::Success)
}

fn calibration_text(c: &Calibration) -> String {
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.6}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = String::new();
    out.push_str("Recovered model\n");
    for (name, fit) in [
        ("dit", &c.dit_fit),
        ("rfc", &c.rfc_fit),
        ("wmc", &c.wmc_fit),
        ("weights", &c.weight_fit),
    ] {
        out.push_str(&format!(
            "  {name:<8} [{}]  max |residual| {:.4}\n",
            fmt(&fit.coefficients),
            fit.max_abs_residual
        ));
    }
    out.push_str("\nPublished model divergence\n");
    out.push_str(&c.divergence.to_text());
    out
}

fn calibrate(args: &CalibrateArgs) -> Result<ExitStatus, Error> {
    let golden = match &args.golden {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            GoldenDataset::from_classes_csv(&text, &path.display().to_string())?
        }
        None => GoldenDataset::embedded(),
    };
    let calibration = recover_calibrated(&golden)?;
    for text in &calibration.notes {
        note(text);
    }
    let document = calibration.model.to_document();
    if let Some(path) = &args.model_out {
        write_file(path, &format!("{document}\n"))?;
    }
    let body = match args.output {
        OutputFormat::Structured => {
            let model: serde_json::Value =
                serde_json::from_str(&document).expect("model documents are valid JSON");
            let value = serde_json::json!({
                "model": model,
                "fits": {
                    "dit": calibration.dit_fit,
                    "rfc": calibration.rfc_fit,
                    "wmc": calibration.wmc_fit,
                    "weights": calibration.weight_fit,
                },
                "divergence": calibration.divergence.entries,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&value).expect("serializable")
            )
        }
        OutputFormat::Text | OutputFormat::Csv => calibration_text(&calibration),
    };
    emit(&body)?;
    Ok(ExitStatus::Success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Metrics(args) => metrics(args),
        Command::Calibrate(args) => calibrate(args),
    };
    let status = result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitStatus::InputError
    });
    ExitCode::from(status.code() as u8)
}
