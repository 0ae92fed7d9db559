use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kgraph_cli::document::{DirectiveDecl, Span};
use kgraph_cli::{default_directives, emit, parse_kg, run, Format, KgDocument, Model, Overrides};

#[derive(Parser)]
#[command(name = "kgraph", version, about = "Analyze k-graphs described in .kg files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// The .kg file to read.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Cap on search degrees, one value or one per color; the largest
    /// entry bounds every coordinate.
    #[arg(long, value_name = "A,B,...", value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
    max_degree: Vec<u32>,
    /// Record per-directive timing in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the file and check the factorization rules and labels.
    Validate(Common),
    /// Run the file's `analyze` directives (or a default set).
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Also write the JSON report to this file.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Print the component matrices, and `M^N` when `-N` is given.
    Matrices {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'N', value_name = "n1,n2,...")]
        degree: Option<String>,
    },
    /// Build the skew product over a window of the semigroup.
    Skew {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
        window: Option<String>,
        /// Use the degree functor into ℤᵏ instead of the declared labels.
        #[arg(long)]
        degree: bool,
    },
    /// Decide simplicity of an associated algebra.
    Simplicity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "af-core|graph|skew|fixed-point")]
        target: String,
        /// Use the degree functor into ℤᵏ instead of the declared labels.
        #[arg(long)]
        degree: bool,
    },
}

fn directive(name: &str, args: Vec<String>, options: Vec<(String, String)>) -> DirectiveDecl {
    DirectiveDecl { name: name.to_string(), args, options, span: Span::default() }
}

fn load(path: &Path) -> Result<(KgDocument, Model), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = parse_kg(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
    let model = Model::from_doc(&doc, name).map_err(|e| format!("{}:{e}", path.display()))?;
    Ok((doc, model))
}

fn execute(common: &Common, directives: impl FnOnce(&KgDocument, &Model) -> Vec<DirectiveDecl>, report_to: Option<&Path>) -> Result<i32, String> {
    let (doc, model) = load(&common.file)?;
    let mut overrides = Overrides::from_env()?;
    overrides.max_degree = common.max_degree.iter().copied().max();
    overrides.timing = common.timing;
    let list = directives(&doc, &model);
    let report = run(&model, &list, &overrides).map_err(|e| format!("{}: {e}", common.file.display()))?;
    let format = match common.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    print!("{}", emit(&report, format));
    if let Some(path) = report_to {
        std::fs::write(path, emit(&report, Format::Json)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(report.exit_code())
}

fn eta_option(degree: bool) -> Vec<(String, String)> {
    if degree {
        vec![("eta".to_string(), "degree".to_string())]
    } else {
        Vec::new()
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1; clap's own code 2 is reserved for Unknown verdicts.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Validate(common) => execute(common, |_, _| vec![directive("validate", vec![], vec![])], None),
        Command::Analyze { common, report } => execute(
            common,
            |doc, model| {
                if doc.directives.is_empty() {
                    default_directives(model)
                } else {
                    doc.directives.clone()
                }
            },
            report.as_deref(),
        ),
        Command::Matrices { common, degree } => {
            let options = degree.iter().map(|n| ("degree".to_string(), n.clone())).collect();
            execute(common, |_, _| vec![directive("matrices", vec![], options)], None)
        }
        Command::Skew { common, window, degree } => {
            let mut options = eta_option(*degree);
            if let Some(w) = window {
                options.push(("window".to_string(), w.clone()));
            }
            execute(common, |_, _| vec![directive("skew", vec![], options)], None)
        }
        Command::Simplicity { common, target, degree } => {
            let options = eta_option(*degree);
            execute(common, |_, _| vec![directive("simplicity", vec![target.clone()], options)], None)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
