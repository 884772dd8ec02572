//! Command-line front end.
//!
//! Every command produces a [`Report`]: a JSON body, optionally a table, and
//! the [`RunManifest`] describing the invocation. JSON output embeds the
//! manifest under `"manifest"`; CSV output carries it as `# key=value`
//! comment lines ahead of the header row.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::ctmc::{self, LevelMetric, SimConfig};
use crate::error::{domain, Error, Result};
use crate::gw::{self, GwSpec};
use crate::laws::{self, BetaForm};
use crate::specfun::{ExactScalar, Precision};
use crate::stats::EstimateCI;
use crate::thresholds;
use crate::treegen::TreeTopology;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "rumorlab",
    version,
    about = "Maki-Thompson rumor thresholds and simulations on trees"
)]
pub struct Cli {
    /// Master seed; defaults to OS entropy and is always echoed.
    #[arg(long, global = true, env = "RUMORLAB_SEED")]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file (default stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for replica-parallel commands.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Exact rationals regardless of size.
    #[arg(long, global = true, conflicts_with = "float")]
    pub exact: bool,

    /// Logarithmic floating point regardless of size.
    #[arg(long, global = true)]
    pub float: bool,

    #[arg(long, global = true, value_enum, default_value_t = BetaForm::Paper)]
    pub beta_form: BetaForm,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Critical spread probability p_c(d) over a range of degrees.
    PcTable(PcTableArgs),
    /// Survival probability theta(d, p), analytic and/or Monte Carlo.
    Theta(ThetaArgs),
    /// Extinction probability of one spreader lineage.
    Psi(DpArgs),
    /// Critical hub density alpha_c(d, k, h).
    AlphaC(AlphaArgs),
    /// Longest hub-to-hub path that keeps alpha_c below one.
    MaxH(MaxHArgs),
    /// Both closed forms of beta next to a simulated path traversal.
    AuditBeta(AuditBetaArgs),
    /// Offspring laws X' and N', optionally against simulated contacts.
    Offspring(OffspringArgs),
    /// Level-reach estimate from the event-driven rumor simulation.
    Simulate(SimulateArgs),
    /// Galton-Watson survival estimate.
    Gw(GwArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PcTable(_) => "pc-table",
            Command::Theta(_) => "theta",
            Command::Psi(_) => "psi",
            Command::AlphaC(_) => "alpha-c",
            Command::MaxH(_) => "max-h",
            Command::AuditBeta(_) => "audit-beta",
            Command::Offspring(_) => "offspring",
            Command::Simulate(_) => "simulate",
            Command::Gw(_) => "gw",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct PcTableArgs {
    #[arg(long, default_value_t = 3)]
    pub d_min: u32,
    #[arg(long, default_value_t = 11)]
    pub d_max: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct DpArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ThetaMethod {
    Analytic,
    GwMc,
    CtmcMc,
}

#[derive(Debug, Args, Serialize)]
pub struct ThetaArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub p: f64,
    /// Comma-separated list of methods.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "analytic")]
    pub method: Vec<ThetaMethod>,
    #[arg(long, default_value_t = 10_000)]
    pub replicas: u64,
    /// Generations for the Galton-Watson estimate.
    #[arg(long, default_value_t = gw::DEFAULT_HORIZON)]
    pub horizon: u32,
    /// Target level for the rumor simulation.
    #[arg(long, default_value_t = ctmc::DEFAULT_CAYLEY_LEVEL)]
    pub level: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct AlphaArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub h: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct MaxHArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct AuditBetaArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub replicas: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct OffspringArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Simulated spreaders to compare against (0 = analytic only).
    #[arg(long, default_value_t = 0)]
    pub replicas: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    Cayley,
    HubPath,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = TopologyKind::Cayley)]
    pub topology: TopologyKind,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub h: Option<u32>,
    /// Defaults to 30 on Cayley trees and 20 hub generations on hub trees.
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long, value_enum, default_value_t = LevelMetric::HubGeneration)]
    pub metric: LevelMetric,
    #[arg(long, default_value_t = 10_000)]
    pub replicas: u64,
    #[arg(long, default_value_t = ctmc::DEFAULT_EVENT_CAP)]
    pub event_cap: u64,
    /// Emit the reach probability of every level up to the target.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    InverseCdf,
    Thinning,
}

#[derive(Debug, Args, Serialize)]
pub struct GwArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 10_000)]
    pub replicas: u64,
    #[arg(long, default_value_t = gw::DEFAULT_HORIZON)]
    pub horizon: u32,
    #[arg(long, default_value_t = gw::DEFAULT_POPULATION_CAP)]
    pub cap: u64,
    #[arg(long, value_enum, default_value_t = Sampler::InverseCdf)]
    pub sampler: Sampler,
}

/// Provenance of one invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    pub version: String,
    pub duration_seconds: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub manifest: RunManifest,
    pub body: Map<String, Value>,
    pub table: Option<Table>,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("manifest".into(), serde_json::to_value(&self.manifest)?);
                doc.extend(self.body.clone());
                Ok(serde_json::to_string_pretty(&Value::Object(doc))? + "\n")
            }
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let m = &self.manifest;
        let mut out = String::new();
        for (key, value) in [
            ("command", m.command.clone()),
            ("parameters", m.parameters.to_string()),
            ("seed", m.seed.to_string()),
            ("version", m.version.clone()),
            ("duration_seconds", m.duration_seconds.to_string()),
        ] {
            out.push_str(&format!("# {key}={value}\n"));
        }
        let table = match &self.table {
            Some(t) => t.clone(),
            None => {
                let mut flat = Vec::new();
                flatten("", &Value::Object(self.body.clone()), &mut flat);
                let (header, row) = flat.into_iter().unzip();
                Table {
                    header,
                    rows: vec![row],
                }
            }
        };
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&table.header)?;
        for row in &table.rows {
            writer.write_record(row)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
        Ok(out)
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

impl Cli {
    fn precision(&self) -> Precision {
        if self.exact {
            Precision::Exact
        } else if self.float {
            Precision::Float
        } else {
            Precision::Auto
        }
    }
}

/// Parses `args`, runs the command and writes its output; returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = execute(&cli).and_then(|report| {
        let text = report.render(cli.format)?;
        match &cli.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(report.manifest.seed)
    });
    match result {
        Ok(seed) => {
            eprintln!("seed = {seed}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Domain(_) | Error::InvalidVertex(_) => EXIT_USAGE,
        Error::NumericFault(_) => EXIT_NUMERIC,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => EXIT_IO,
    }
}

/// Runs the parsed command on a pool of `--threads` workers.
pub fn execute(cli: &Cli) -> Result<Report> {
    let seed = cli.seed.unwrap_or_else(rand::random);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(domain("--threads must be >= 1"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let start = Instant::now();
    let (body, table) = pool.install(|| dispatch(cli, seed))?;
    let mut parameters = serde_json::to_value(&cli.command)?;
    if let Value::Object(map) = &mut parameters {
        map.insert("precision".into(), serde_json::to_value(cli.precision())?);
        map.insert("beta_form".into(), serde_json::to_value(cli.beta_form)?);
        if let Some(n) = cli.threads {
            map.insert("threads".into(), n.into());
        }
    }
    Ok(Report {
        manifest: RunManifest {
            command: cli.command.name().to_string(),
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: start.elapsed().as_secs_f64(),
        },
        body,
        table,
    })
}

type Body = (Map<String, Value>, Option<Table>);

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        _ => unreachable!("report bodies are objects"),
    }
}

fn dispatch(cli: &Cli, seed: u64) -> Result<Body> {
    let precision = cli.precision();
    match &cli.command {
        Command::PcTable(a) => pc_table(a, precision),
        Command::Theta(a) => theta(a, seed),
        Command::Psi(a) => psi(a),
        Command::AlphaC(a) => alpha_c(a, cli.beta_form, precision),
        Command::MaxH(a) => max_h(a, cli.beta_form, precision),
        Command::AuditBeta(a) => audit_beta(a, seed, precision),
        Command::Offspring(a) => offspring(a, seed),
        Command::Simulate(a) => simulate(a, seed),
        Command::Gw(a) => gw_command(a, seed),
    }
}

fn exact_parts(value: Option<&ExactScalar>) -> (String, String) {
    match value {
        Some(v) => (
            v.numerator().map(|n| n.to_string()).unwrap_or_default(),
            v.denominator().map(|n| n.to_string()).unwrap_or_default(),
        ),
        None => (String::new(), String::new()),
    }
}

fn pc_table(a: &PcTableArgs, precision: Precision) -> Result<Body> {
    if a.d_min < 3 {
        return Err(domain(format!(
            "d_min = {} but p_c(d) < 1 requires d >= 3",
            a.d_min
        )));
    }
    if a.d_min > a.d_max {
        return Err(domain(format!("empty range: d_min = {} > d_max = {}", a.d_min, a.d_max)));
    }
    let header = [
        "d",
        "pc_numerator",
        "pc_denominator",
        "pc_float",
        "pc_asymptotic",
        "pc_rounded_4dp",
        "pc_truncated_4dp",
    ];
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for d in a.d_min..=a.d_max {
        let report = thresholds::p_critical_with(d, precision)?;
        let (num, den) = exact_parts(report.exact.as_ref());
        let value = report.float_value;
        let rounded = format!("{value:.4}");
        let truncated = format!("{:.4}", (value * 1e4).floor() / 1e4);
        let asymptotic = report.asymptotic_value.unwrap_or(f64::NAN);
        rows.push(vec![
            d.to_string(),
            num.clone(),
            den.clone(),
            value.to_string(),
            asymptotic.to_string(),
            rounded.clone(),
            truncated.clone(),
        ]);
        records.push(json!({
            "d": d,
            "pc_numerator": num,
            "pc_denominator": den,
            "pc_float": value,
            "pc_asymptotic": asymptotic,
            "pc_rounded_4dp": rounded,
            "pc_truncated_4dp": truncated,
        }));
    }
    Ok((
        object(json!({ "rows": records })),
        Some(Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }),
    ))
}

fn theta(a: &ThetaArgs, seed: u64) -> Result<Body> {
    let pc = thresholds::p_critical(a.d)?;
    let mut body = object(json!({
        "d": a.d,
        "p": a.p,
        "p_critical": pc.float_value,
        "supercritical": !thresholds::is_subcritical(a.d, a.p)?,
    }));
    let analytic = thresholds::theta(a.d, a.p)?;
    let mut estimates: Vec<(&str, EstimateCI)> = Vec::new();
    for method in &a.method {
        match method {
            ThetaMethod::Analytic => {
                body.insert("analytic".into(), analytic.into());
            }
            ThetaMethod::GwMc => {
                let est = gw::survival_mc(a.d, a.p, a.replicas, a.horizon, gw::DEFAULT_POPULATION_CAP, seed)?;
                body.insert("gw_mc".into(), serde_json::to_value(&est)?);
                estimates.push(("gw_mc", est));
            }
            ThetaMethod::CtmcMc => {
                let topology = TreeTopology::cayley(a.d)?;
                let est = ctmc::estimate_survival_ctmc(
                    &topology,
                    a.p,
                    a.level,
                    a.replicas,
                    ctmc::DEFAULT_EVENT_CAP,
                    seed,
                )?;
                let mut value = serde_json::to_value(&est.estimate)?;
                value["cap_hits"] = est.cap_hits.into();
                body.insert("ctmc_mc".into(), value);
                estimates.push(("ctmc_mc", est.estimate));
            }
        }
    }
    for (name, est) in &estimates {
        body.insert(format!("{name}_z_vs_analytic"), finite_or_null(est.z_score(analytic)));
    }
    if let [(a_name, a_est), (b_name, b_est)] = estimates.as_slice() {
        body.insert(format!("{a_name}_z_vs_{b_name}"), finite_or_null(a_est.z_score_against(b_est)));
    }
    Ok((body, None))
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        x.into()
    } else {
        Value::Null
    }
}

fn psi(a: &DpArgs) -> Result<Body> {
    let bisection = thresholds::psi_bisection(a.d, a.p)?;
    let fixed = thresholds::psi_fixed_point(a.d, a.p)?;
    let law = laws::offspring_law(a.d, a.p)?;
    let iterated = gw::extinction_by_iteration(&law, 1e-12)?;
    Ok((
        object(json!({
            "d": a.d,
            "p": a.p,
            "subcritical": thresholds::is_subcritical(a.d, a.p)?,
            "psi": bisection.psi,
            "bisection_iterations": bisection.iterations,
            "residual": bisection.residual,
            "psi_fixed_point": fixed.psi,
            "fixed_point_iterations": fixed.iterations,
            "psi_pmf_iteration": iterated,
        })),
        None,
    ))
}

fn alpha_c(a: &AlphaArgs, form: BetaForm, precision: Precision) -> Result<Body> {
    let report = thresholds::alpha_critical_with(a.d, a.k, a.h, form, precision)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut body = object(json!({ "d": a.d, "k": a.k, "h": a.h, "beta_form": form }));
    body.extend(object(serde_json::to_value(&report)?));
    Ok((body, None))
}

fn max_h(a: &MaxHArgs, form: BetaForm, precision: Precision) -> Result<Body> {
    let h = thresholds::max_h_with(a.d, a.k, form, precision)?;
    let mut body = object(json!({
        "d": a.d,
        "k": a.k,
        "beta_form": form,
        "max_h": h,
        "alpha_c_at_max_h": thresholds::alpha_critical_with(a.d, a.k, h.max(1), form, precision)?.float_value,
        "alpha_c_at_max_h_plus_1": thresholds::alpha_critical_with(a.d, a.k, h + 1, form, precision)?.float_value,
    }));
    body.insert(
        "log_d_over_log_k".into(),
        thresholds::asymptotic_h_bound(a.d as f64, a.k as f64)?.into(),
    );
    let d = a.d as f64;
    if thresholds::is_log_scaled(d, a.k as f64) {
        if let Ok(scale) = thresholds::log_log_h_scale(d) {
            body.insert("k_is_log_scaled".into(), true.into());
            body.insert("log_d_over_log_log_d".into(), scale.into());
        }
    }
    if a.k >= a.d {
        eprintln!("warning: k = {} >= d = {}: hub-tree thresholds assume k < d", a.k, a.d);
    }
    Ok((body, None))
}

fn scalar_json(x: &ExactScalar) -> Value {
    serde_json::to_value(x).expect("scalars serialize")
}

fn audit_beta(a: &AuditBetaArgs, seed: u64, precision: Precision) -> Result<Body> {
    if a.k < 3 {
        return Err(domain(format!("audit-beta needs k >= 3, got {}", a.k)));
    }
    let d = a.k - 1;
    let paper = laws::beta_paper_with(d, precision)?;
    let series = laws::beta_series_with(d, precision)?;
    let gap = laws::beta_gap(d)?;
    let empirical = ctmc::path_traversal_empirical(a.k, a.replicas, seed)?;
    let (pf, sf) = (paper.to_f64(), series.to_f64());
    Ok((
        object(json!({
            "k": a.k,
            "beta_paper": scalar_json(&paper),
            "beta_series": scalar_json(&series),
            "gap": scalar_json(&gap),
            "relative_gap": (sf - pf) / sf,
            "empirical": empirical,
            "ci_covers_paper": empirical.covers(pf),
            "ci_covers_series": empirical.covers(sf),
            "z_vs_paper": finite_or_null(empirical.z_score(pf)),
            "z_vs_series": finite_or_null(empirical.z_score(sf)),
        })),
        None,
    ))
}

fn offspring(a: &OffspringArgs, seed: u64) -> Result<Body> {
    let x = laws::offspring_law(a.d, a.p)?;
    let n = laws::law_n_prime(a.d, a.p)?;
    let empirical = if a.replicas > 0 {
        Some(ctmc::offspring_empirical(a.d, a.p, a.replicas, seed)?)
    } else {
        None
    };
    let mut header = vec!["value", "x_prime", "n_prime"];
    if empirical.is_some() {
        header.push("x_prime_empirical");
    }
    let top = x.support_max().max(n.support_max());
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for v in 0..=top {
        let mut row = vec![v.to_string(), x.prob(v).to_string(), n.prob(v).to_string()];
        let mut record = json!({ "value": v, "x_prime": x.prob(v), "n_prime": n.prob(v) });
        if let Some(e) = &empirical {
            row.push(e.prob(v).to_string());
            record["x_prime_empirical"] = e.prob(v).into();
        }
        rows.push(row);
        records.push(record);
    }
    let mean_x = laws::mean_x(a.d)?.to_f64();
    let mut body = object(json!({
        "d": a.d,
        "p": a.p,
        "mean_x_prime": x.mean(),
        "p_times_mean_x": a.p * mean_x,
        "mean_n_prime": n.mean(),
        "rows": records,
    }));
    if let Some(e) = &empirical {
        body.insert("empirical_mean".into(), e.mean().into());
        body.insert("empirical_mean_se".into(), (e.variance() / a.replicas as f64).sqrt().into());
        body.insert("tv_distance".into(), e.tv_distance(&x).into());
    }
    Ok((
        body,
        Some(Table {
            header: header.into_iter().map(String::from).collect(),
            rows,
        }),
    ))
}

fn simulate(a: &SimulateArgs, seed: u64) -> Result<Body> {
    let topology = match a.topology {
        TopologyKind::Cayley => {
            if a.k.is_some() || a.alpha.is_some() || a.h.is_some() {
                return Err(domain("--k, --alpha and --h only apply to --topology hub-path"));
            }
            TreeTopology::cayley(a.d)?
        }
        TopologyKind::HubPath => match (a.k, a.alpha, a.h) {
            (Some(k), Some(alpha), Some(h)) => TreeTopology::hub_path(a.d, k, alpha, h)?,
            _ => return Err(domain("--topology hub-path needs --k, --alpha and --h")),
        },
    };
    for w in topology.warnings() {
        eprintln!("warning: {w}");
    }
    let level = a.level.unwrap_or(match a.topology {
        TopologyKind::Cayley => ctmc::DEFAULT_CAYLEY_LEVEL,
        TopologyKind::HubPath => ctmc::DEFAULT_HUB_LEVEL,
    });
    let config = SimConfig::new(topology, a.p, level)?
        .with_event_cap(a.event_cap)
        .with_metric(a.metric);
    let est = ctmc::estimate_survival_with(&config, a.replicas, seed)?;
    let e = &est.estimate;
    let mut body = object(json!({
        "topology": topology,
        "p": a.p,
        "level": level,
        "metric": a.metric,
        "estimate": e.estimate,
        "ci_low": e.ci_low,
        "ci_high": e.ci_high,
        "replicas": e.replicas,
        "cap_hits": est.cap_hits,
    }));
    let table = if a.sweep {
        let curve = est.curve();
        body.insert(
            "series".into(),
            curve
                .iter()
                .map(|(l, ci)| json!({ "level": l, "estimate": ci.estimate, "ci_low": ci.ci_low, "ci_high": ci.ci_high }))
                .collect(),
        );
        Some(Table {
            header: ["level", "estimate", "ci_low", "ci_high"].map(String::from).to_vec(),
            rows: curve
                .iter()
                .map(|(l, ci)| {
                    vec![l.to_string(), ci.estimate.to_string(), ci.ci_low.to_string(), ci.ci_high.to_string()]
                })
                .collect(),
        })
    } else {
        None
    };
    Ok((body, table))
}

fn gw_command(a: &GwArgs, seed: u64) -> Result<Body> {
    let mut spec = GwSpec::for_rumor(a.d, a.p, a.horizon, a.cap)?;
    if a.sampler == Sampler::Thinning {
        spec = spec.with_thinning(laws::law_x(a.d)?, a.p)?;
    }
    let est = gw::survival_mc_spec(&spec, a.replicas, seed)?;
    let analytic = thresholds::theta(a.d, a.p)?;
    let mut body = object(json!({ "d": a.d, "p": a.p, "horizon": a.horizon, "theta": analytic }));
    body.extend(object(serde_json::to_value(&est)?));
    body.insert("z_vs_theta".into(), finite_or_null(est.z_score(analytic)));
    Ok((body, None))
}
