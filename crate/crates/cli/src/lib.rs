//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the text to print, so it can be tested without a process.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use indexcalc_core::assemble::{nonss_terms, orbital_value};
use indexcalc_core::indexhigher::{higher_pairing, mU_decomposition};
use indexcalc_core::indexss::{classify_element, tau_elliptic_with};
use indexcalc_core::{
    assemble_index, catalog_lookup, AssembleOptions, BernoulliConvention, CatalogEntry, Complex64,
    DiracInput, ElementDescriptor, ElementSpec, Error, GammaData, LambdaNorm, NonSsOptions,
    SignConvention, Subscript, WeightVec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Orbital,
    Higher,
    Nonss,
    Assemble,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignFlag {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BernoulliFlag {
    Classical,
    Modern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormFlag {
    RestrictedRoot,
    HighestWeight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SubscriptFlag {
    Display,
    Prose,
}

/// Index pairings of twisted Dirac operators on symmetric spaces.
#[derive(Debug, Parser)]
#[command(name = "indexcalc", version)]
pub struct Cli {
    /// Catalog group name (see --list-groups).
    #[arg(long, conflicts_with = "group_file", required_unless_present_any = ["group_file", "list_groups"])]
    pub group: Option<String>,
    /// JSON group specification.
    #[arg(long)]
    pub group_file: Option<PathBuf>,
    /// Highest weight of W, comma-separated rationals.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "list_groups")]
    pub lambda: Option<String>,
    /// Element as JSON, e.g. '{"type":"elliptic","X":["1/3"]}'.
    #[arg(long)]
    pub element: Option<String>,
    /// Γ constants as a JSON file; all-zero data if omitted.
    #[arg(long)]
    pub gamma_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "orbital")]
    pub mode: Mode,
    /// Levi name for --mode higher.
    #[arg(long)]
    pub levi: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Include per-coset terms and decompositions.
    #[arg(long)]
    pub diagnostics: bool,
    /// Factor convention of the display path.
    #[arg(long, value_enum, default_value = "minus")]
    pub sign_flag: SignFlag,
    #[arg(long, value_enum, default_value = "classical")]
    pub bernoulli: BernoulliFlag,
    #[arg(long, value_enum, default_value = "restricted-root")]
    pub norm: NormFlag,
    #[arg(long, value_enum, default_value = "display")]
    pub subscript: SubscriptFlag,
    /// Print the catalog group names and exit.
    #[arg(long)]
    pub list_groups: bool,
}

impl Cli {
    fn options(&self) -> AssembleOptions {
        AssembleOptions {
            sign_convention: match self.sign_flag {
                SignFlag::Minus => SignConvention::MinusExp,
                SignFlag::Plus => SignConvention::PlusExp,
            },
            nonss: NonSsOptions {
                bernoulli: match self.bernoulli {
                    BernoulliFlag::Classical => BernoulliConvention::Classical,
                    BernoulliFlag::Modern => BernoulliConvention::Modern,
                },
                norm: match self.norm {
                    NormFlag::RestrictedRoot => LambdaNorm::RestrictedRoot,
                    NormFlag::HighestWeight => LambdaNorm::HighestWeight,
                },
                subscript: match self.subscript {
                    SubscriptFlag::Display => Subscript::Display,
                    SubscriptFlag::Prose => Subscript::Prose,
                },
            },
        }
    }
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(m),
            other => Failure::Compute(other),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

// adding 0.0 turns -0.0 into 0.0
fn complex_json(z: Complex64) -> Value {
    json!([z.re + 0.0, z.im + 0.0])
}

fn complex_text(z: Complex64) -> String {
    if z.im.abs() < 1e-12 {
        format!("{}", z.re)
    } else {
        format!("{} {} {}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
    }
}

fn load_entry(cli: &Cli) -> Result<CatalogEntry, Failure> {
    match (&cli.group, &cli.group_file) {
        (Some(name), _) => Ok(catalog_lookup(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(CatalogEntry::from_json(&text)?)
        }
        (None, None) => Err(usage("one of --group or --group-file is required")),
    }
}

fn load_gamma(cli: &Cli) -> Result<GammaData, Failure> {
    match &cli.gamma_file {
        None => Ok(GammaData::zero()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("Γ data: {e}")))
        }
    }
}

fn element(cli: &Cli, entry: &CatalogEntry) -> Result<ElementDescriptor, Failure> {
    let raw = cli.element.as_deref().ok_or_else(|| usage("--element is required for this mode"))?;
    let spec: ElementSpec = serde_json::from_str(raw).map_err(|e| usage(format!("--element: {e}")))?;
    Ok(classify_element(&entry.pair, &spec)?)
}

fn compute(cli: &Cli) -> Result<Value, Failure> {
    let entry = load_entry(cli)?;
    let lambda = WeightVec::parse(cli.lambda.as_deref().unwrap_or_default()).map_err(|e| usage(format!("--lambda: {e}")))?;
    let input = DiracInput::new(entry.pair.clone(), lambda)?;
    let opts = cli.options();
    let mut out = json!({
        "group": entry.pair.name,
        "lambda": input.lambda(),
        "mode": format!("{:?}", cli.mode).to_lowercase(),
    });
    match cli.mode {
        Mode::Orbital => {
            let g = element(cli, &entry)?;
            out["element"] = serde_json::to_value(&g).expect("element serializes");
            out["value"] = complex_json(orbital_value(&input, &g, opts.sign_convention)?);
            if let ElementDescriptor::Elliptic(_) = g {
                let c = tau_elliptic_with(&input, &g, opts.sign_convention)?;
                out["display_value"] = complex_json(c.display_value);
                out["paths_agree"] = json!(c.paths_agree());
                out["display_applies"] = json!(c.display_applies);
                if cli.diagnostics {
                    out["per_coset_terms"] = serde_json::to_value(&c.per_coset_terms).expect("terms serialize");
                }
            }
        }
        Mode::Higher => {
            let name = cli.levi.as_deref().ok_or_else(|| usage("--levi is required for --mode higher"))?;
            let levi = entry.levi(name)?;
            let g = element(cli, &entry)?;
            out["levi"] = json!(name);
            out["maximal"] = json!(levi.maximal);
            out["element"] = serde_json::to_value(&g).expect("element serializes");
            out["value"] = complex_json(higher_pairing(&input, levi, &g)?);
            if cli.diagnostics && levi.maximal {
                out["decomposition"] = serde_json::to_value(mU_decomposition(&input, levi)?).expect("serializes");
            }
        }
        Mode::Nonss => {
            let gd = load_gamma(cli)?;
            out["terms"] = serde_json::to_value(nonss_terms(&input, &entry, &gd, &opts.nonss)?).expect("serializes");
        }
        Mode::Assemble => {
            let gd = load_gamma(cli)?;
            out["report"] = serde_json::to_value(assemble_index(&input, &entry, &gd, &opts)?).expect("serializes");
        }
    }
    Ok(out)
}

fn text_lines(v: &Value, prefix: &str, out: &mut Vec<String>) {
    let is_pair = |a: &Vec<Value>| a.len() == 2 && a.iter().all(Value::is_f64);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text_lines(x, &key, out);
            }
        }
        Value::Array(a) if is_pair(a) => {
            let z = Complex64::new(a[0].as_f64().unwrap_or(0.0), a[1].as_f64().unwrap_or(0.0));
            out.push(format!("{prefix}: {}", complex_text(z)));
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                text_lines(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(scalar).collect();
            out.push(format!("{prefix}: ({})", parts.join(", ")));
        }
        other => out.push(format!("{prefix}: {}", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("({})", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// Parses `args` (including the program name) and runs the query.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    if cli.list_groups {
        return (EXIT_OK, indexcalc_core::catalog_names().join("\n") + "\n");
    }
    match compute(&cli) {
        Ok(v) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("report serializes"),
                Format::Text => {
                    let mut lines = Vec::new();
                    text_lines(&v, "", &mut lines);
                    lines.join("\n")
                }
            };
            (EXIT_OK, body + "\n")
        }
        Err(Failure::Usage(m)) => (EXIT_USAGE, format!("usage error: {m}\n")),
        Err(Failure::Compute(e)) => {
            let body = match cli.format {
                Format::Json => {
                    json!({"error": {"kind": e.kind(), "message": e.to_string()}}).to_string()
                }
                Format::Text => format!("error[{}]: {e}", e.kind()),
            };
            (EXIT_COMPUTATION, body + "\n")
        }
    }
}
