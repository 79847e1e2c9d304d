use std::path::PathBuf;
use std::process::ExitCode;

use annulus_core::criteria::{self, CriteriaError};
use annulus_core::families::{self, FamilyInstance, FamilySpec, Predicate, StepRange};
use annulus_core::model::{self, AnnulusPresentation, ModelError, Report};
use annulus_core::oracle::{self, OracleSummary};
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_IO: u8 = 1;
const EXIT_SPEC: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Parser)]
#[command(name = "annulus", version, about = "Verdicts for type 3-3 annuli in handlebody-knot exteriors")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an annulus presentation stored as JSON.
    Classify { path: PathBuf },
    /// Build family instances, e.g. `T:3,3` or `T:mu=3..15:2,nu=3..15:2,filter=PT`.
    Family {
        spec: String,
        #[arg(long)]
        classify: bool,
    },
    /// Classify every instance satisfying a family predicate.
    Table {
        /// One of PT, PI, V, W, Vprime, U.
        name: String,
        /// Parameter range `a..b[:step]`, used for both mu and nu.
        #[arg(long, default_value = "3..15", allow_hyphen_values = true)]
        range: String,
    },
    /// Run a brute-force cross-check.
    Oracle {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Primitivity,
    Basis,
    Roots,
    Normalize,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure { code, message: message.to_string() }
}

fn model_failure(e: ModelError) -> Failure {
    match e {
        ModelError::Schema { .. } => fail(EXIT_SPEC, e),
        ModelError::Validation(_) => fail(EXIT_INVALID, e),
    }
}

fn classify_instance(inst: &FamilyInstance) -> Result<Report, Failure> {
    criteria::classify_with_lower_bound(&inst.presentation, inst.known_lower_bound.clone())
        .map_err(|e| fail(EXIT_INVALID, format!("{}: {e}", inst.presentation.label)))
}

const REPORT_COLUMNS: [&str; 10] = [
    "label", "p", "slope_type", "irreducible", "atoroidal", "unique", "chiral", "sym_upper", "sym_lower", "sym_exact",
];

fn report_row(r: &Report) -> Vec<String> {
    let opt = |g: Option<String>| g.unwrap_or_else(|| "-".into());
    let s = &r.symmetry;
    vec![
        r.label.clone(),
        r.p.to_string(),
        r.slope.slope_type.to_string(),
        r.irreducible.state.to_string(),
        r.atoroidal.state.to_string(),
        r.unique_annulus.state.to_string(),
        s.chiral.state.to_string(),
        opt(s.upper.map(|g| g.to_string())),
        opt(s.lower.as_ref().map(|l| l.group.to_string())),
        opt(s.exact.map(|g| g.to_string())),
    ]
}

const PRESENTATION_COLUMNS: [&str; 6] = ["label", "p", "h_l_plus", "h_l_minus", "w_l_plus", "w_l_minus"];

fn presentation_row(p: &AnnulusPresentation) -> Vec<String> {
    let word = |w: Option<&annulus_core::fgroup::Word>| w.map_or_else(|| "-".into(), |w| w.to_string());
    vec![
        p.label.clone(),
        p.p.to_string(),
        p.h_l_plus.to_string(),
        p.h_l_minus.to_string(),
        word(p.w_l_plus.as_ref()),
        word(p.w_l_minus.as_ref()),
    ]
}

fn render_table(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    match format {
        Format::Markdown => {
            out.push_str(&format!("| {} |\n", header.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for row in rows {
                out.push_str(&format!("| {} |\n", row.join(" | ")));
            }
        }
        _ => {
            out.push_str(&header.join("\t"));
            out.push('\n');
            for row in rows {
                out.push_str(&row.join("\t"));
                out.push('\n');
            }
        }
    }
    out
}

fn render_reports(format: Format, reports: &[Report], single: bool) -> String {
    match format {
        Format::Json if single => model::save_report(&reports[0]),
        Format::Json => model::to_canonical_json(&reports),
        _ => render_table(format, &REPORT_COLUMNS, &reports.iter().map(report_row).collect::<Vec<_>>()),
    }
}

fn cmd_classify(format: Format, path: &PathBuf) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    let pres = model::load_presentation(&text).map_err(model_failure)?;
    let report = criteria::classify(&pres).map_err(|e| match e {
        CriteriaError::Invalid(v) => model_failure(ModelError::Validation(v)),
        e => fail(EXIT_INVALID, e),
    })?;
    Ok(render_reports(format, &[report], true))
}

fn cmd_family(format: Format, spec: &str, classify: bool) -> Result<String, Failure> {
    let spec: FamilySpec = spec.parse().map_err(|e| fail(EXIT_SPEC, e))?;
    let instances = spec.instances().map_err(|e| fail(EXIT_SPEC, e))?;
    if classify {
        let reports = instances.iter().map(classify_instance).collect::<Result<Vec<_>, _>>()?;
        return Ok(render_reports(format, &reports, false));
    }
    let pres: Vec<_> = instances.into_iter().map(|i| i.presentation).collect();
    Ok(match format {
        Format::Json => model::to_canonical_json(&pres),
        _ => render_table(format, &PRESENTATION_COLUMNS, &pres.iter().map(presentation_row).collect::<Vec<_>>()),
    })
}

fn cmd_table(format: Format, name: &str, range: &str) -> Result<String, Failure> {
    let pred: Predicate = name.parse().map_err(|e| fail(EXIT_SPEC, e))?;
    let range: StepRange = range.parse().map_err(|e| fail(EXIT_SPEC, e))?;
    let instances =
        families::enumerate(pred.family(), range, Some(range), Some(pred)).map_err(|e| fail(EXIT_SPEC, e))?;
    let reports = instances.iter().map(classify_instance).collect::<Result<Vec<_>, _>>()?;
    Ok(match format {
        Format::Json => model::to_canonical_json(&reports),
        _ => render_reports(format, &reports, false),
    })
}

fn cmd_oracle(suite: Suite, maxlen: usize, cases: Option<usize>, seed: u64) -> Result<String, Failure> {
    let summary: OracleSummary = match suite {
        Suite::Primitivity => oracle::check_primitivity(maxlen),
        Suite::Basis => oracle::check_basis(maxlen),
        Suite::Roots => oracle::check_roots(cases.unwrap_or(1000), seed),
        Suite::Normalize => oracle::check_normalize(cases.unwrap_or(200), seed),
    };
    if summary.passed() {
        return Ok(format!("{}: pass, {} checked\n", summary.suite, summary.checked));
    }
    let mut msg = format!(
        "{}: FAIL, {} of {} checks failed\n",
        summary.suite,
        summary.failures.len(),
        summary.checked
    );
    for f in summary.failures.iter().take(20) {
        msg.push_str(&format!("  counterexample: {f}\n"));
    }
    Err(fail(EXIT_ORACLE, msg.trim_end()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { path } => cmd_classify(cli.format, path),
        Command::Family { spec, classify } => cmd_family(cli.format, spec, *classify),
        Command::Table { name, range } => cmd_table(cli.format, name, range),
        Command::Oracle { suite, maxlen, cases, seed } => cmd_oracle(*suite, *maxlen, *cases, *seed),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
