use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use qzk_core::json::{qseries_to_json, ring_to_json, theorem_report_to_json, CERTIFICATE_NOTE};
use qzk_core::products::{build_trace, trace_y0, TraceKind, TraceSpec};
use qzk_core::reduction::{reduce_spec, sumspec_eval_budget, ReduceOptions, SumSpec, DEFAULT_EVAL_BUDGET, DEFAULT_MAX_DEPTH};
use qzk_core::series::rational::format_rational;
use qzk_core::series::{QSeries, Rational, Truncation};
use qzk_core::span::{default_order, enumerate_basis_budget, find_relations, verify_theorem, Theorem, DEFAULT_BASIS_BUDGET};
use qzk_core::special::{bibracket, bracket, eisenstein, zvalue, BiBracketIndex, BracketIndex, FamilyTag};
use qzk_core::{selftest, Error};

const DEFAULT_ORDER: usize = 20;
const DEFAULT_REDUCE_ORDER: usize = 15;

/// Exact multiple q-zeta values, product traces and span certificates.
#[derive(Parser, Debug)]
#[command(name = "qzk", version)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Config {
    /// q-order N: series are known through q^N.
    #[arg(long, global = true, env = "QZK_ORDER")]
    order: Option<usize>,
    /// Total degree D in the graded formal variables.
    #[arg(long, global = true, env = "QZK_DEGREE")]
    degree: Option<u32>,
    /// Bound Y on |y-exponents| kept during expansion.
    #[arg(long, global = true, env = "QZK_YBOUND")]
    ybound: Option<u32>,
    #[arg(long, global = true, env = "QZK_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on stored terms (traces) or visited tuples (lattice sums).
    #[arg(long, global = true, env = "QZK_BUDGET_TERMS")]
    budget_terms: Option<u64>,
    /// Recursion depth limit of the reduction engine.
    #[arg(long, global = true, env = "QZK_MAX_DEPTH", default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    /// Check every reduction step against brute-force evaluation.
    #[arg(long, global = true, env = "QZK_CERTIFY_STEPS")]
    certify_steps: bool,
    /// Use all cores instead of one thread.
    #[arg(long, global = true, env = "QZK_PARALLEL")]
    parallel: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The bracket [s_1, ..., s_l]; no entries gives 1.
    Bracket { entries: Vec<u32> },
    /// A bi-bracket such as "3,1;1,0" or "[3;1]"; no index gives 1.
    Bibracket { index: Option<String> },
    /// Okounkov's Z(s_1, ..., s_k), all entries >= 2.
    Zvalue { entries: Vec<u32> },
    /// The Eisenstein series G_k, k even.
    Eisenstein { k: u32 },
    /// Expand a product trace in its formal variables.
    Expand {
        /// lemma31, thm32:r, pn:N or bo.
        #[arg(long)]
        trace: String,
        /// Include the factors with formal powers a, b (pn traces).
        #[arg(long)]
        with_ab: bool,
        /// Keep only the y^0 coefficient.
        #[arg(long)]
        y0: bool,
        /// Print a single coefficient, e.g. "z^2*w".
        #[arg(long)]
        coeff: Option<String>,
    },
    /// Reduce a constrained lattice sum to bi-brackets.
    Reduce {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Check the weight statement of a trace coefficient theorem.
    Verify {
        /// lemma31, thm32:r, thm45 or thm54:N.
        #[arg(long)]
        theorem: String,
    },
    /// Linear relations among a family up to a weight.
    Relations {
        /// MD, qMD, BD, qBD, qMZV or QM.
        #[arg(long)]
        family: String,
        #[arg(long)]
        max_weight: u32,
    },
    /// Run the built-in property suite.
    Selftest,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    pass: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, pass: true }
    }
}

fn series_output(s: QSeries) -> Output {
    Output::ok(qseries_to_json(&s), format!("{s}"))
}

fn truncation(cfg: &Config, order: usize, degree: u32) -> Truncation {
    match cfg.ybound {
        Some(y) => Truncation::new(order, degree, y),
        None => Truncation::with_default_y(order, degree),
    }
}

fn trace_kind(name: &str, with_ab: bool) -> Result<TraceKind, Failure> {
    match name.parse::<TraceKind>()? {
        TraceKind::PN { players, .. } => Ok(TraceKind::PN { players, with_ab }),
        _ if with_ab => Err(Failure::Usage("--with-ab: only pn:N traces carry formal powers a, b".into())),
        k => Ok(k),
    }
}

fn expand(cfg: &Config, trace: &str, with_ab: bool, y0: bool, coeff: Option<&str>) -> Result<Output, Failure> {
    let order = cfg.order.unwrap_or(DEFAULT_ORDER);
    let degree = cfg.degree.unwrap_or(4);
    let mut spec = TraceSpec::new(trace_kind(trace, with_ab)?, truncation(cfg, order, degree));
    if let Some(b) = cfg.budget_terms {
        spec.budget = b;
    }
    let p = if y0 { trace_y0(&spec)? } else { build_trace(&spec)? };
    match coeff {
        None => Ok(Output::ok(ring_to_json(&p), format!("{p}"))),
        Some(m) => {
            let ctx = p.context();
            let mono = ctx.parse_mono(m).map_err(|e| Failure::Usage(format!("--coeff: {e}")))?;
            let layer = p.coeff(&mono);
            let terms: serde_json::Map<String, Value> =
                layer.terms.iter().map(|(y, s)| (ctx.format_yexp(y), qseries_to_json(s))).collect();
            let text = layer.terms.iter().map(|(y, s)| format!("{}: {s}", ctx.format_yexp(y))).collect::<Vec<_>>().join("\n");
            Ok(Output::ok(json!({"monomial": ctx.format_mono(&mono), "terms": terms}), text))
        }
    }
}

fn reduce(cfg: &Config, path: &PathBuf) -> Result<Output, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--spec {}: {e}", path.display())))?;
    let spec = SumSpec::from_json(&text)?;
    let order = cfg.order.unwrap_or(DEFAULT_REDUCE_ORDER);
    let budget = cfg.budget_terms.unwrap_or(DEFAULT_EVAL_BUDGET);
    let opts = ReduceOptions {
        max_depth: cfg.max_depth,
        certify_order: cfg.certify_steps.then_some(order),
        eval_budget: budget,
    };
    let (comb, stats) = reduce_spec(&spec, &opts)?;
    let input = sumspec_eval_budget(&spec, order, budget)?;
    let output = comb.evaluate(order);
    let pass = input == output;
    let json = json!({
        "spec": serde_json::from_str::<Value>(&spec.to_json()).expect("spec serializes to JSON"),
        "combination": comb.to_json(),
        "max_weight": comb.max_weight(),
        "certificate": {
            "q_order": order,
            "input": qseries_to_json(&input),
            "output": qseries_to_json(&output),
            "match": pass,
            "steps": stats.steps,
            "certified_steps": stats.certified_steps,
            "max_depth": stats.max_depth,
        },
    });
    let text = format!(
        "{spec}\n= {comb}\ncertificate at q^{order}: {} ({} steps, {} certified)",
        if pass { "match" } else { "MISMATCH" },
        stats.steps,
        stats.certified_steps
    );
    Ok(Output { json, text, pass })
}

fn term(coeff: &str, label: &str) -> String {
    if label == "1" {
        coeff.to_string()
    } else {
        format!("{coeff}*{label}")
    }
}

fn default_degree(t: Theorem) -> u32 {
    match t {
        Theorem::Lemma31 | Theorem::Theorem45 => 4,
        Theorem::Theorem32(_) | Theorem::Theorem54(_) => 3,
    }
}

fn verify(cfg: &Config, theorem: &str) -> Result<Output, Failure> {
    let t: Theorem = theorem.parse()?;
    let degree = cfg.degree.unwrap_or_else(|| default_degree(t));
    let r = verify_theorem(t, degree, cfg.order, cfg.budget_terms)?;
    let mut lines = vec![format!(
        "{t} up to degree {degree} at q^{}: {} ({} coefficients, {})",
        r.membership.q_order,
        if r.pass() { "PASS" } else { "FAIL" },
        r.membership.checks.len(),
        CERTIFICATE_NOTE
    )];
    if !r.constant_term_one {
        lines.push("constant term is not 1".into());
    }
    for c in &r.membership.checks {
        let coords = c.certificate.support().iter().map(|(l, x)| term(&format_rational(x), l)).collect::<Vec<_>>();
        let mut line = format!(
            "{} {} (weight {}): {}",
            if c.pass { "ok  " } else { "FAIL" },
            c.monomial,
            c.weight,
            if coords.is_empty() { "0".into() } else { coords.join(" + ") }
        );
        if let Some((d, b)) = c.degree {
            line.push_str(&format!(" [a,b degree {d} <= {b}]"));
        }
        lines.push(line);
    }
    Ok(Output { json: theorem_report_to_json(&r), text: lines.join("\n"), pass: r.pass() })
}

fn relations(cfg: &Config, family: &str, max_weight: u32) -> Result<Output, Failure> {
    let family: FamilyTag = family.parse()?;
    let size = enumerate_basis_budget(family, max_weight, 0, DEFAULT_BASIS_BUDGET)?.len();
    let order = cfg.order.unwrap_or_else(|| default_order(size));
    let basis = enumerate_basis_budget(family, max_weight, order, DEFAULT_BASIS_BUDGET)?;
    let rels = find_relations(&basis, order)?;
    let as_map = |v: &Vec<Rational>| -> serde_json::Map<String, Value> {
        basis
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(b, c)| (b.label.clone(), Value::String(format_rational(c))))
            .collect()
    };
    let json = json!({
        "family": family.to_string(),
        "max_weight": max_weight,
        "q_order": order,
        "basis": basis.iter().map(|b| b.label.clone()).collect::<Vec<_>>(),
        "relations": rels.iter().map(|r| Value::Object(as_map(r))).collect::<Vec<_>>(),
        "note": "relations hold up to q^N only",
    });
    let mut lines = vec![format!("{family} up to weight {max_weight}: {} elements, {} relations at q^{order}", basis.len(), rels.len())];
    for r in &rels {
        let terms: Vec<String> = as_map(r).iter().map(|(l, c)| term(c.as_str().unwrap_or_default(), l)).collect();
        lines.push(format!("0 = {}", terms.join(" + ")));
    }
    Ok(Output::ok(json, lines.join("\n")))
}

fn run_selftest() -> Output {
    let checks = selftest::full_suite();
    let pass = checks.iter().all(|c| c.pass);
    let json = json!({
        "pass": pass,
        "checks": checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
    });
    let text = checks
        .iter()
        .map(|c| if c.pass { format!("PASS {}", c.name) } else { format!("FAIL {}: {}", c.name, c.detail) })
        .collect::<Vec<_>>()
        .join("\n");
    Output { json, text, pass }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let cfg = &cli.config;
    let order = cfg.order.unwrap_or(DEFAULT_ORDER);
    match &cli.command {
        Command::Bracket { entries } => Ok(series_output(bracket(&BracketIndex::new(entries.clone())?, order))),
        Command::Bibracket { index } => {
            let idx = match index {
                Some(s) => s.parse::<BiBracketIndex>()?,
                None => BiBracketIndex::new(vec![], vec![])?,
            };
            Ok(series_output(bibracket(&idx, order)))
        }
        Command::Zvalue { entries } => Ok(series_output(zvalue(entries, order)?)),
        Command::Eisenstein { k } => Ok(series_output(eisenstein(*k, order)?)),
        Command::Expand { trace, with_ab, y0, coeff } => expand(cfg, trace, *with_ab, *y0, coeff.as_deref()),
        Command::Reduce { spec } => reduce(cfg, spec),
        Command::Verify { theorem } => verify(cfg, theorem),
        Command::Relations { family, max_weight } => relations(cfg, family, *max_weight),
        Command::Selftest => Ok(run_selftest()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = if cli.config.parallel { 0 } else { 1 };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().expect("thread pool is configured once");
    match run(&cli) {
        Ok(out) => {
            let body = match cli.config.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("JSON values serialize"),
                Format::Text => out.text,
            };
            let _ = writeln!(std::io::stdout(), "{body}");
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
