//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Input with the
//! nabular header layout (`v.., v_NA.., extras..`) is read as a nabular
//! table and written back in the same layout.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::augment::{self, ClusterParams, CountMode, CLUSTER_COLUMN};
use crate::error::Error;
use crate::impute::{self, JitterParams, LinearModelSpec, Location, DEFAULT_SHIFT_FRACTION};
use crate::mechanisms::{amputate, MechanismSpec};
use crate::plots::{self, BarUnit, PlotData, RenderOptions};
use crate::replace::{self, ReplaceSpec, Scope, TokenKind};
use crate::shadow::{self, as_shadow, nabular, NabularTable, WhereClause};
use crate::summaries::{self, round_half_away};
use crate::table::{group_by, read_raw, table_from_raw, DType, NaTokenConfig, StatsRow, Table, Value};

#[derive(Debug, Parser)]
#[command(name = "tidymiss", version, about = "Profile, flag and impute missing values in delimited data")]
struct Cli {
    /// Input file; stdin when absent or `-`.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent or `-`.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(short, long, global = true, value_enum)]
    format: Option<Format>,
    /// Comma-separated tokens read as missing; the first is written for
    /// missing cells. Default `NA,` (NA and the empty string).
    #[arg(long, global = true, value_delimiter = ',', num_args = 1)]
    na: Option<Vec<String>>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count occurrences of candidate missing-value codes.
    #[command(group(ArgGroup::new("what").required(true).args(["values", "common"])))]
    Scan {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<String>,
        #[arg(long, value_enum)]
        common: Option<Common>,
    },
    /// Turn matching values into missing cells.
    #[command(group(ArgGroup::new("what").required(true).args(["values", "spec"])))]
    Replace {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "spec")]
        values: Vec<String>,
        #[command(flatten)]
        scope: ScopeArgs,
        /// `column=v1,v2`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        spec: Vec<String>,
    },
    /// Bind the shadow matrix to the data.
    Shadow {
        /// Emit the shadow in long form (case, variable, level).
        #[arg(long)]
        long: bool,
    },
    /// Mark rows with a special missing level in one shadow column.
    Recode {
        #[arg(long)]
        var: String,
        /// `col OP value`, conjunctions joined with `&`.
        #[arg(long = "where")]
        clause: String,
        #[arg(long)]
        suffix: String,
    },
    /// Numerical missingness summaries.
    Summary {
        #[command(subcommand)]
        kind: SummaryKind,
    },
    /// Append per-row missingness columns.
    Add {
        #[command(subcommand)]
        kind: AddKind,
    },
    /// Fill missing cells.
    Impute {
        #[command(subcommand)]
        method: ImputeMethod,
    },
    /// Introduce missing cells under a chosen mechanism.
    Amputate {
        #[arg(long, value_enum)]
        mechanism: Mechanism,
        #[arg(long)]
        target: String,
        #[arg(long)]
        psi: f64,
        /// Driver column for MAR.
        #[arg(long, required_if_eq("mechanism", "mar"))]
        driver: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        threshold: f64,
        #[arg(long, default_value_t = 0.0)]
        boost: f64,
    },
    /// Plot data and renderings.
    Plot {
        #[command(subcommand)]
        kind: PlotKind,
        #[arg(long, global = true, default_value_t = 720.0)]
        width: f64,
        #[arg(long, global = true, default_value_t = 480.0)]
        height: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Common {
    Numbers,
    Strings,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mechanism {
    Mcar,
    Mar,
    Mnar,
}

#[derive(Debug, Args)]
struct ScopeArgs {
    /// Comma-separated columns.
    #[arg(long, value_delimiter = ',', conflicts_with = "if_dtype")]
    at: Vec<String>,
    /// Columns of a dtype: integer, numeric, boolean or text.
    #[arg(long = "if")]
    if_dtype: Option<String>,
}

impl ScopeArgs {
    fn scope(&self) -> Result<Scope, CliError> {
        if !self.at.is_empty() {
            return Ok(Scope::At(self.at.clone()));
        }
        match &self.if_dtype {
            Some(d) => Ok(Scope::If(d.parse::<DType>().map_err(usage)?)),
            None => Ok(Scope::All),
        }
    }
}

#[derive(Debug, Subcommand)]
enum SummaryKind {
    /// Single-number counts and rates.
    Numbers,
    Vars {
        #[arg(long, value_delimiter = ',')]
        group_by: Vec<String>,
    },
    Cases {
        #[arg(long, value_delimiter = ',')]
        group_by: Vec<String>,
    },
    VarTable,
    CaseTable,
    Run {
        #[arg(long)]
        var: String,
    },
    Span {
        #[arg(long)]
        var: String,
        #[arg(long)]
        span_size: usize,
    },
    /// Data-missing vs shadow-missing counts.
    Shadow,
    /// Statistics of a variable split by the row's missingness label.
    ByMissingness {
        #[arg(long)]
        var: String,
    },
}

#[derive(Debug, Subcommand)]
enum AddKind {
    N,
    Prop,
    Any,
    Cluster {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    Label,
}

#[derive(Debug, Args)]
struct BelowArgs {
    #[arg(long, default_value_t = DEFAULT_SHIFT_FRACTION)]
    shift: f64,
    #[arg(long)]
    jitter: bool,
    #[arg(long, default_value_t = 0.05)]
    jitter_magnitude: f64,
}

impl BelowArgs {
    fn jitter(&self, seed: u64) -> JitterParams {
        JitterParams { enabled: self.jitter, magnitude: self.jitter_magnitude, seed }
    }
}

#[derive(Debug, Subcommand)]
enum ImputeMethod {
    Mean {
        #[command(flatten)]
        scope: ScopeArgs,
    },
    Median {
        #[command(flatten)]
        scope: ScopeArgs,
    },
    Below {
        #[command(flatten)]
        scope: ScopeArgs,
        #[command(flatten)]
        below: BelowArgs,
    },
    Lm {
        /// `response ~ p1 + p2`
        #[arg(long)]
        formula: String,
    },
}

#[derive(Debug, Subcommand)]
enum PlotKind {
    MissVar,
    MissCase,
    Heatmap {
        #[arg(long)]
        cluster: bool,
        #[arg(long)]
        sort_vars: bool,
    },
    Upset,
    SplitHist {
        #[arg(long)]
        var: String,
        #[arg(long)]
        by: String,
        #[arg(long, default_value_t = 10)]
        bins: usize,
        #[arg(long)]
        density: bool,
    },
    Scatter {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[command(flatten)]
        below: BelowArgs,
    },
    Parcoords {
        #[arg(long)]
        color: String,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Run the tool on `argv` (program name first) and return the exit code.
pub fn run(argv: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let msg = e.render().to_string();
                    let head: Vec<&str> = msg
                        .lines()
                        .take_while(|l| !l.starts_with("Usage:"))
                        .map(str::trim)
                        .filter(|l| !l.is_empty())
                        .collect();
                    let _ = writeln!(stderr, "{}", head.join(" "));
                    1
                }
            };
        }
    };
    match execute(&cli, stdin) {
        Ok(bytes) => match write_output(cli.output.as_ref(), &bytes, stdout) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                2
            }
        },
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {}", one_line(&msg));
            1
        }
        Err(CliError::Data(e)) => {
            let _ = writeln!(stderr, "error: {}", one_line(&e.to_string()));
            2
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn write_output(path: Option<&PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, bytes),
        _ => {
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}

/// Plain or nabular input, as detected from the header.
enum Input {
    Plain(Table),
    Nabular(NabularTable),
}

impl Input {
    fn data(&self) -> &Table {
        match self {
            Input::Plain(t) => t,
            Input::Nabular(n) => n.data(),
        }
    }

    fn to_nabular(&self) -> Result<NabularTable, Error> {
        match self {
            Input::Plain(t) => nabular(t),
            Input::Nabular(n) => Ok(n.clone()),
        }
    }

    /// Apply a verb that works on either kind.
    fn map(
        self,
        plain: impl FnOnce(&Table) -> Result<Table, Error>,
        nab: impl FnOnce(&NabularTable) -> Result<NabularTable, Error>,
    ) -> Result<Input, Error> {
        Ok(match self {
            Input::Plain(t) => Input::Plain(plain(&t)?),
            Input::Nabular(n) => Input::Nabular(nab(&n)?),
        })
    }
}

struct Ctx<'a> {
    config: NaTokenConfig,
    format: Format,
    seed: u64,
    subcommand: &'a str,
}

fn read_input(cli: &Cli, stdin: &mut dyn Read, config: &NaTokenConfig) -> Result<Input, Error> {
    let bytes = match &cli.input {
        Some(p) if p.as_os_str() != "-" => {
            fs::read(p).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))))?
        }
        _ => {
            let mut buf = Vec::new();
            stdin.read_to_end(&mut buf)?;
            buf
        }
    };
    let raw = read_raw(bytes.as_slice())?;
    match NabularTable::from_raw(&raw, config)? {
        Some(n) => Ok(Input::Nabular(n)),
        None => Ok(Input::Plain(table_from_raw(&raw, config)?)),
    }
}

fn subcommand_name(cmd: &Command) -> String {
    let sub = |s: &str, k: &str| format!("{s} {k}");
    match cmd {
        Command::Scan { .. } => "scan".into(),
        Command::Replace { .. } => "replace".into(),
        Command::Shadow { .. } => "shadow".into(),
        Command::Recode { .. } => "recode".into(),
        Command::Summary { kind } => sub(
            "summary",
            match kind {
                SummaryKind::Numbers => "numbers",
                SummaryKind::Vars { .. } => "vars",
                SummaryKind::Cases { .. } => "cases",
                SummaryKind::VarTable => "var-table",
                SummaryKind::CaseTable => "case-table",
                SummaryKind::Run { .. } => "run",
                SummaryKind::Span { .. } => "span",
                SummaryKind::Shadow => "shadow",
                SummaryKind::ByMissingness { .. } => "by-missingness",
            },
        ),
        Command::Add { kind } => sub(
            "add",
            match kind {
                AddKind::N => "n",
                AddKind::Prop => "prop",
                AddKind::Any => "any",
                AddKind::Cluster { .. } => "cluster",
                AddKind::Label => "label",
            },
        ),
        Command::Impute { method } => sub(
            "impute",
            match method {
                ImputeMethod::Mean { .. } => "mean",
                ImputeMethod::Median { .. } => "median",
                ImputeMethod::Below { .. } => "below",
                ImputeMethod::Lm { .. } => "lm",
            },
        ),
        Command::Amputate { .. } => "amputate".into(),
        Command::Plot { kind, .. } => sub(
            "plot",
            match kind {
                PlotKind::MissVar => "miss-var",
                PlotKind::MissCase => "miss-case",
                PlotKind::Heatmap { .. } => "heatmap",
                PlotKind::Upset => "upset",
                PlotKind::SplitHist { .. } => "split-hist",
                PlotKind::Scatter { .. } => "scatter",
                PlotKind::Parcoords { .. } => "parcoords",
            },
        ),
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Vec<u8>, CliError> {
    let config = match &cli.na {
        Some(tokens) => NaTokenConfig::new(tokens.iter().cloned()).map_err(usage)?,
        None => NaTokenConfig::default(),
    };
    let is_plot = matches!(cli.command, Command::Plot { .. });
    let is_report = matches!(cli.command, Command::Scan { .. } | Command::Summary { .. })
        || matches!(cli.command, Command::Shadow { long: true });
    let format = cli.format.unwrap_or(if is_plot { Format::Svg } else { Format::Csv });
    let allowed: &[Format] = if is_plot {
        &[Format::Svg, Format::Json, Format::Text]
    } else if is_report {
        &[Format::Csv, Format::Json]
    } else {
        &[Format::Csv]
    };
    let name = subcommand_name(&cli.command);
    if !allowed.contains(&format) {
        return Err(CliError::Usage(format!(
            "format `{}` is not available for `{name}`",
            format.to_possible_value().expect("named").get_name()
        )));
    }
    // Validate flag syntax before touching the input.
    let parsed = ParsedFlags::from_command(&cli.command)?;
    let input = read_input(cli, stdin, &config)?;
    let ctx = Ctx { config, format, seed: cli.seed, subcommand: &name };
    match &cli.command {
        Command::Scan { values, common } => {
            let mut vals: Vec<Value> = values.iter().map(|v| Value::parse_literal(v)).collect();
            if let Some(c) = common {
                if matches!(c, Common::Numbers | Common::All) {
                    vals.extend(replace::common_na_tokens(TokenKind::Numeric));
                }
                if matches!(c, Common::Strings | Common::All) {
                    vals.extend(replace::common_na_tokens(TokenKind::Text));
                }
            }
            let report = replace::miss_scan_count(input.data(), &vals)?;
            let rows = report.rows.iter().map(|r| vec![r.variable.clone(), r.value.clone(), r.n.to_string()]).collect();
            ctx.report(&["variable", "value", "n"], rows, &report)
        }
        Command::Replace { values, scope, .. } => {
            let out = match parsed.replace_spec {
                Some(spec) => {
                    input.map(|t| replace::replace_with_na(t, &spec), |n| replace::replace_with_na(n, &spec))?
                }
                None => {
                    let vals: Vec<Value> = values.iter().map(|v| Value::parse_literal(v)).collect();
                    let scope = scope.scope()?;
                    input.map(
                        |t| replace::replace_with_na_scoped(t, &scope, &vals),
                        |n| replace::replace_with_na_scoped(n, &scope, &vals),
                    )?
                }
            };
            ctx.data(&out)
        }
        Command::Shadow { long } => {
            let nab = input.to_nabular()?;
            if *long {
                let ls = shadow::shadow_long(nab.shadow());
                let rows = ls
                    .records
                    .iter()
                    .map(|r| vec![r.case.to_string(), r.variable.clone(), r.level.to_string()])
                    .collect();
                ctx.report(&["case", "variable", "level"], rows, &ls)
            } else {
                ctx.data(&Input::Nabular(nab))
            }
        }
        Command::Recode { var, suffix, .. } => {
            let clause = parsed.clause.as_ref().expect("parsed");
            let nab = shadow::recode_shadow(&input.to_nabular()?, var, clause, suffix)?;
            ctx.data(&Input::Nabular(nab))
        }
        Command::Summary { kind } => summary(&ctx, &input, kind),
        Command::Add { kind } => {
            let out = match kind {
                AddKind::N | AddKind::Prop | AddKind::Any => {
                    let mode = match kind {
                        AddKind::N => CountMode::N,
                        AddKind::Prop => CountMode::Proportion,
                        _ => CountMode::Any,
                    };
                    input.map(
                        |t| augment::add_miss_counts(t, mode),
                        |n| n.with_annotation(augment::miss_count_column(n.data(), mode)),
                    )?
                }
                AddKind::Cluster { k } => {
                    let params = ClusterParams { k: *k };
                    let seed = ctx.seed;
                    input.map(
                        |t| augment::add_miss_cluster(t, params, seed),
                        |n| {
                            let labels = augment::miss_cluster_labels(n.data(), params)?;
                            n.with_annotation(crate::table::Column::integer(
                                CLUSTER_COLUMN,
                                labels.into_iter().map(|l| Some(l as i64)).collect(),
                            ))
                        },
                    )?
                }
                AddKind::Label => Input::Nabular(augment::add_label_shadow(&input.to_nabular()?)?),
            };
            ctx.data(&out)
        }
        Command::Impute { method } => {
            let out = match method {
                ImputeMethod::Mean { scope } | ImputeMethod::Median { scope } => {
                    let stat =
                        if matches!(method, ImputeMethod::Mean { .. }) { Location::Mean } else { Location::Median };
                    let scope = scope.scope()?;
                    input.map(
                        |t| impute::impute_location(t, &scope, stat),
                        |n| impute::impute_location(n, &scope, stat),
                    )?
                }
                ImputeMethod::Below { scope, below } => {
                    let scope = scope.scope()?;
                    let jitter = below.jitter(ctx.seed);
                    input.map(
                        |t| impute::impute_below(t, &scope, below.shift, jitter),
                        |n| impute::impute_below(n, &scope, below.shift, jitter),
                    )?
                }
                ImputeMethod::Lm { .. } => {
                    let spec = parsed.formula.as_ref().expect("parsed");
                    input.map(|t| Ok(impute::impute_lm(t, spec)?.output), |n| Ok(impute::impute_lm(n, spec)?.output))?
                }
            };
            ctx.data(&out)
        }
        Command::Amputate { .. } => {
            let spec = parsed.mechanism.as_ref().expect("parsed");
            let seed = ctx.seed;
            let out = input.map(|t| amputate(t, spec, seed), |n| amputate(n, spec, seed))?;
            ctx.data(&out)
        }
        Command::Plot { kind, width, height } => {
            let payload = plot_payload(&ctx, &input, kind)?;
            ctx.plot(&payload, *width, *height)
        }
    }
}

/// Flag values that need parsing beyond clap.
#[derive(Default)]
struct ParsedFlags {
    replace_spec: Option<ReplaceSpec>,
    clause: Option<WhereClause>,
    formula: Option<LinearModelSpec>,
    mechanism: Option<MechanismSpec>,
}

impl ParsedFlags {
    fn from_command(cmd: &Command) -> Result<Self, CliError> {
        let mut out = ParsedFlags::default();
        match cmd {
            Command::Replace { spec, .. } if !spec.is_empty() => {
                let mut rs = ReplaceSpec::new();
                for entry in spec {
                    let (col, vals) = entry
                        .split_once('=')
                        .ok_or_else(|| CliError::Usage(format!("--spec `{entry}` is not `column=values`")))?;
                    let vals = vals.split(',').map(Value::parse_literal).collect();
                    rs = rs.with(col.trim(), vals);
                }
                out.replace_spec = Some(rs);
            }
            Command::Recode { clause, suffix, .. } => {
                out.clause = Some(clause.parse().map_err(usage)?);
                shadow::ShadowLevel::special(suffix).map_err(usage)?;
            }
            Command::Impute { method: ImputeMethod::Lm { formula } } => {
                out.formula = Some(formula.parse().map_err(usage)?)
            }
            Command::Amputate { mechanism, target, psi, driver, threshold, boost } => {
                out.mechanism = Some(match mechanism {
                    Mechanism::Mcar => MechanismSpec::mcar(target, *psi),
                    Mechanism::Mar => {
                        MechanismSpec::mar(target, driver.clone().expect("required by clap"), *psi, *threshold, *boost)
                    }
                    Mechanism::Mnar => MechanismSpec::mnar(target, *psi, *threshold, *boost),
                })
            }
            _ => {}
        }
        Ok(out)
    }
}

fn fmt_round(x: f64, places: i32) -> String {
    format!("{}", round_half_away(x, places))
}

fn fmt_stat(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "NA".into())
}

impl Ctx<'_> {
    fn envelope(&self, payload: serde_json::Value) -> Vec<u8> {
        let doc = json!({
            "tool_version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "payload": payload,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s.into_bytes()
    }

    fn report<T: Serialize>(&self, headers: &[&str], rows: Vec<Vec<String>>, payload: &T) -> Result<Vec<u8>, CliError> {
        match self.format {
            Format::Json => Ok(self.envelope(serde_json::to_value(payload).expect("json"))),
            _ => Ok(csv_bytes(headers, &rows)),
        }
    }

    fn data(&self, out: &Input) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        match out {
            Input::Plain(t) => crate::table::write_delimited(t, &mut buf, &self.config)?,
            Input::Nabular(n) => n.write_delimited(&mut buf, &self.config)?,
        }
        Ok(buf)
    }

    fn plot(&self, payload: &PlotData, width: f64, height: f64) -> Result<Vec<u8>, CliError> {
        match self.format {
            Format::Json => Ok(self.envelope(payload.to_json())),
            Format::Text => Ok(plots::render_text(payload).map_err(usage)?.into_bytes()),
            _ => {
                let opts = RenderOptions { width, height, ..RenderOptions::default() };
                Ok(plots::render_svg(payload, &opts)?.into_bytes())
            }
        }
    }
}

fn csv_bytes(headers: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

fn summary(ctx: &Ctx, input: &Input, kind: &SummaryKind) -> Result<Vec<u8>, CliError> {
    let table = input.data();
    let na = ctx.config.output_token();
    match kind {
        SummaryKind::Numbers => {
            let s = summaries::single_numbers(table)?;
            let rows = [
                ("n_miss", s.n_miss.to_string()),
                ("n_complete", s.n_complete.to_string()),
                ("prop_miss", fmt_round(s.prop_miss, 4)),
                ("prop_complete", fmt_round(s.prop_complete, 4)),
                ("pct_miss", fmt_round(s.pct_miss, 2)),
                ("pct_complete", fmt_round(s.pct_complete, 2)),
                ("pct_miss_case", fmt_round(s.pct_miss_case, 2)),
                ("pct_complete_case", fmt_round(s.pct_complete_case, 2)),
                ("pct_miss_var", fmt_round(s.pct_miss_var, 2)),
                ("pct_complete_var", fmt_round(s.pct_complete_var, 2)),
            ]
            .into_iter()
            .map(|(k, v)| vec![k.to_string(), v])
            .collect();
            ctx.report(&["measure", "value"], rows, &s)
        }
        SummaryKind::Vars { group_by: keys } | SummaryKind::Cases { group_by: keys } => {
            let by_var = matches!(kind, SummaryKind::Vars { .. });
            let key_refs: Vec<&str> = keys.iter().map(String::as_str).collect();
            let mut headers: Vec<&str> = key_refs.clone();
            headers.extend(if by_var { ["variable", "n_miss", "pct_miss"] } else { ["case", "n_miss", "pct_miss"] });
            let group_cells = |g: &[summaries::GroupKey]| g.iter().map(|k| k.value.clone()).collect::<Vec<_>>();
            if by_var {
                let rows = if keys.is_empty() {
                    summaries::miss_var_summary(table)
                } else {
                    summaries::miss_var_summary_grouped(&group_by(table, &key_refs)?, na)
                };
                let csv = rows
                    .iter()
                    .map(|r| {
                        let mut v = group_cells(&r.group);
                        v.extend([r.variable.clone(), r.n_miss.to_string(), fmt_round(r.pct_miss, 1)]);
                        v
                    })
                    .collect();
                ctx.report(&headers, csv, &rows)
            } else {
                let rows = if keys.is_empty() {
                    summaries::miss_case_summary(table)
                } else {
                    summaries::miss_case_summary_grouped(&group_by(table, &key_refs)?, na)
                };
                let csv = rows
                    .iter()
                    .map(|r| {
                        let mut v = group_cells(&r.group);
                        v.extend([r.case.to_string(), r.n_miss.to_string(), fmt_round(r.pct_miss, 1)]);
                        v
                    })
                    .collect();
                ctx.report(&headers, csv, &rows)
            }
        }
        SummaryKind::VarTable | SummaryKind::CaseTable => {
            let (rows, unit) = if matches!(kind, SummaryKind::VarTable) {
                (summaries::miss_var_table(table), "n_vars")
            } else {
                (summaries::miss_case_table(table), "n_cases")
            };
            let csv = rows
                .iter()
                .map(|r| vec![r.n_miss_in_unit.to_string(), r.n_units.to_string(), fmt_round(r.pct_units, 1)])
                .collect();
            let pct = if unit == "n_vars" { "pct_vars" } else { "pct_cases" };
            let head = if unit == "n_vars" { "n_miss_in_var" } else { "n_miss_in_case" };
            ctx.report(&[head, unit, pct], csv, &rows)
        }
        SummaryKind::Run { var } => {
            let rows = summaries::miss_var_run(table, var)?;
            let csv = rows
                .iter()
                .map(|r| vec![r.run_length.to_string(), if r.is_missing { "missing" } else { "complete" }.to_string()])
                .collect();
            ctx.report(&["run_length", "is_na"], csv, &rows)
        }
        SummaryKind::Span { var, span_size } => {
            let rows = summaries::miss_var_span(table, var, *span_size)?;
            let csv = rows
                .iter()
                .map(|r| {
                    vec![
                        r.span_counter.to_string(),
                        r.n_miss.to_string(),
                        r.n_complete.to_string(),
                        r.span_size.to_string(),
                    ]
                })
                .collect();
            ctx.report(&["span_counter", "n_miss", "n_complete", "span_size"], csv, &rows)
        }
        SummaryKind::Shadow => {
            let rows = summaries::shadow_counts(&input.to_nabular()?);
            let csv = rows
                .iter()
                .map(|r| vec![r.variable.clone(), r.n_data_miss.to_string(), r.n_shadow_miss.to_string()])
                .collect();
            ctx.report(&["variable", "n_data_miss", "n_shadow_miss"], csv, &rows)
        }
        SummaryKind::ByMissingness { var } => {
            let stats = impute::summarize_by_missingness(&input.to_nabular()?, var)?;
            let line = |label: &str, s: &Option<StatsRow>| {
                vec![
                    label.to_string(),
                    fmt_stat(s.map(|s| s.min)),
                    fmt_stat(s.map(|s| s.mean)),
                    fmt_stat(s.map(|s| s.median)),
                    fmt_stat(s.map(|s| s.max)),
                    s.map(|s| s.n_observed).unwrap_or(0).to_string(),
                ]
            };
            let csv = vec![line("Missing", &stats.missing), line("Not Missing", &stats.not_missing)];
            ctx.report(&["any_missing", "min", "mean", "median", "max", "n"], csv, &stats)
        }
    }
}

fn plot_payload(ctx: &Ctx, input: &Input, kind: &PlotKind) -> Result<PlotData, CliError> {
    let table = input.data();
    Ok(match kind {
        PlotKind::MissVar => PlotData::Bar(plots::miss_overview_bars(table, BarUnit::Var)),
        PlotKind::MissCase => PlotData::Bar(plots::miss_overview_bars(table, BarUnit::Case)),
        PlotKind::Heatmap { cluster, sort_vars } => {
            PlotData::Heatmap(plots::vis_miss_data(table, *cluster, *sort_vars))
        }
        PlotKind::Upset => {
            let shadow = match input {
                Input::Plain(t) => as_shadow(t)?,
                Input::Nabular(n) => n.shadow().clone(),
            };
            PlotData::Upset(plots::upset_data(&shadow)?)
        }
        PlotKind::SplitHist { var, by, bins, density } => {
            PlotData::SplitHistogram(plots::split_histogram_data(&input.to_nabular()?, var, by, *bins, *density)?)
        }
        PlotKind::Scatter { x, y, below } => PlotData::Scatter(plots::scatter_miss_data(
            &input.to_nabular()?,
            x,
            y,
            below.shift,
            below.jitter(ctx.seed),
        )?),
        PlotKind::Parcoords { color } => {
            PlotData::ParallelCoords(plots::parallel_coords_data(&input.to_nabular()?, color)?)
        }
    })
}
