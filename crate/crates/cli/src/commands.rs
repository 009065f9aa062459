use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use densefew_core::bounds::{
    audit_grid, dense_positive_bound, dense_real_bound, evaluate, AuditStatus,
};
use densefew_core::counting::{
    classify, count_gale_with, count_real_solutions_2d_with, verify_correspondence_with,
};
use densefew_core::gale::{build_gale_system, check_hypotheses, diagonalize, relations_from_rows};
use densefew_core::lattice::affine_span_index;
use densefew_core::support::{
    mixed_volume_2d, search_decomposition, simplex_point_count, DEFAULT_SEARCH_BUDGET,
};
use densefew_core::{
    BoundParams, BoundReport, CountOptions, CountReport, DenseDecomposition, ExponentVector,
    FormulaId, RegionSpec, SupportSet,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::example::run_example;
use crate::files::{parse_count_input, parse_support, parse_system, CountInput, GaleFile};

#[derive(Parser, Debug)]
#[command(
    name = "densefew",
    version,
    about = "Bounds, Gale duality and certified real solution counts for dense fewnomial systems"
)]
pub struct Cli {
    /// Print a JSON report envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized steps (choice of shear when counting).
    #[arg(long, global = true, env = "DENSEFEW_SEED")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one bound formula, or every formula the parameters allow.
    Bounds(BoundsArgs),
    /// Search a support for a (d, ell)-dense decomposition.
    Analyze(AnalyzeArgs),
    /// Build the Gale dual of a square system.
    Dualize(DualizeArgs),
    /// Count real solutions of a bivariate system or Gale system.
    Count(CountArgs),
    /// Compare the counts of a bivariate system and its Gale dual.
    Verify(VerifyArgs),
    /// Run the full pipeline on the bundled worked example.
    VerifyExample(VerifyExampleArgs),
    /// Tabulate the combinatorial estimates over a parameter grid.
    Audit(AuditArgs),
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// One of khovanskii, bs-positive, dense-positive, bbs-real, dense-real,
    /// near-circuit, khovanskii-betti, bs-betti, dense-betti.
    #[arg(long)]
    pub formula: Option<String>,
    /// Decimals shown for enclosures.
    #[arg(long, default_value_t = 2)]
    pub digits: usize,
}

#[derive(Args, Debug)]
pub struct DecompositionArgs {
    /// Degree of the simplex; searched when omitted.
    #[arg(long)]
    pub d: Option<u32>,
    /// Dimension of the simplex; searched when omitted.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Maximal number of (W, v0) candidates per search.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Support file, or a system file whose supports are combined.
    pub support: PathBuf,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub ell: usize,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct DualizeArgs {
    pub system: PathBuf,
    #[command(flatten)]
    pub decomposition: DecompositionArgs,
    /// Relation rows `beta,gamma` separated by `;`, e.g. "1,1,1,1;2,2,1,-3".
    /// Defaults to a basis of the saturated relation lattice.
    #[arg(long)]
    pub relations: Option<String>,
    /// Also write the Gale file here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    /// All solutions with nonzero coordinates.
    Any,
    /// Both coordinates positive.
    Positive,
    /// Gale systems: coordinates and every h_i nonzero.
    MReal,
    /// Gale systems: coordinates and every h_i positive.
    Delta,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    /// System file or Gale file.
    pub input: PathBuf,
    /// Defaults to `any` for systems and `m-real` for Gale systems.
    #[arg(long, value_enum)]
    pub region: Option<RegionArg>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub system: PathBuf,
    #[command(flatten)]
    pub decomposition: DecompositionArgs,
}

#[derive(Args, Debug)]
pub struct VerifyExampleArgs {
    /// Perturb one coefficient first (negative control).
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 4)]
    pub max_ell: u32,
    #[arg(long, default_value_t = 4)]
    pub max_n: u32,
    #[arg(long, default_value_t = 3)]
    pub max_d: u32,
}

/// Result of a command: text and JSON renderings plus what went into the
/// envelope. `failure` is set when the command ran but an assertion failed.
#[derive(Debug)]
pub struct Outcome {
    pub command: &'static str,
    pub params: Value,
    pub files: Vec<(String, Vec<u8>)>,
    pub seed: Option<u64>,
    pub human: String,
    pub result: Value,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn new(command: &'static str, params: Value, human: String, result: Value) -> Self {
        Self {
            command,
            params,
            files: Vec::new(),
            seed: None,
            human,
            result,
            failure: None,
        }
    }
}

fn read_input(path: &PathBuf) -> Result<(String, Vec<u8>), CliError> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))?;
    Ok((text, bytes))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn count_options(seed: Option<u64>) -> CountOptions {
    CountOptions {
        seed: seed.unwrap_or_default(),
        ..CountOptions::default()
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Dualize(a) => cmd_dualize(a),
        Command::Count(a) => cmd_count(a, cli.seed),
        Command::Verify(a) => cmd_verify(a, cli.seed),
        Command::VerifyExample(a) => cmd_verify_example(a, cli.seed),
        Command::Audit(a) => cmd_audit(a),
    }
}

fn format_params(p: &BoundParams) -> String {
    [("n", p.n), ("ell", p.ell), ("d", p.d), ("k", p.k)]
        .iter()
        .filter_map(|(name, v)| v.map(|v| format!("{name}={v}")))
        .collect::<Vec<_>>()
        .join(", ")
}

fn required_params(f: FormulaId) -> &'static str {
    match f {
        FormulaId::DensePositive | FormulaId::DenseReal | FormulaId::DenseBetti => {
            "--n, --ell and --d"
        }
        FormulaId::NearCircuit => "--n and --d",
        _ => "--k and --n",
    }
}

pub fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome, CliError> {
    for (name, v) in [("n", a.n), ("ell", a.ell), ("d", a.d)] {
        if v == Some(0) {
            return Err(CliError::Input(format!("--{name} must be positive")));
        }
    }
    let params = BoundParams {
        n: a.n,
        ell: a.ell,
        d: a.d,
        k: a.k,
    };
    let formulas: Vec<FormulaId> = match &a.formula {
        Some(name) => {
            let f = FormulaId::parse(name).ok_or_else(|| {
                CliError::Input(format!(
                    "unknown formula `{name}`; expected one of {}",
                    FormulaId::ALL.map(FormulaId::name).join(", ")
                ))
            })?;
            vec![f]
        }
        None => FormulaId::ALL.to_vec(),
    };
    let reports: Vec<BoundReport> = formulas
        .iter()
        .filter_map(|&f| evaluate(f, &params))
        .collect();
    if reports.is_empty() {
        return Err(CliError::Input(match a.formula {
            Some(_) => format!(
                "formula {} needs {}",
                formulas[0],
                required_params(formulas[0])
            ),
            None => "no formula can be evaluated with these parameters".into(),
        }));
    }
    let mut human = String::new();
    for r in &reports {
        let _ = writeln!(
            human,
            "{:<17} ({}): {}",
            r.formula.name(),
            format_params(&r.params),
            r.summary(a.digits)
        );
    }
    let result = if reports.len() == 1 && a.formula.is_some() {
        to_json(&reports[0])
    } else {
        to_json(&reports)
    };
    Ok(Outcome::new("bounds", to_json(&params), human, result))
}

fn format_vector(v: &ExponentVector) -> String {
    format!(
        "({})",
        v.0.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn describe_decomposition(dec: &DenseDecomposition) -> String {
    format!(
        "d = {}, ell = {}, v0 = {}, v = [{}], W = {{{}}}",
        dec.d,
        dec.ell,
        format_vector(&dec.psi_offset),
        dec.vs()
            .iter()
            .map(format_vector)
            .collect::<Vec<_>>()
            .join(", "),
        dec.w
            .iter()
            .map(format_vector)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let (text, bytes) = read_input(&a.support)?;
    let support = parse_support(&text)?;
    let found = search_decomposition(&support, a.d, a.ell, a.budget)?;
    let span = affine_span_index(&support.to_vec())?;
    let mut human = match &found {
        Some(dec) => format!("decomposition: {}\n", describe_decomposition(dec)),
        None => "decomposition: NOT_FOUND\n".to_string(),
    };
    let _ = writeln!(
        human,
        "affine span index: {} ({})",
        span,
        if span.is_odd() { "odd" } else { "not odd" }
    );
    let result = json!({
        "found": found.is_some(),
        "decomposition": found,
        "affine_span_index": span,
        "span_odd": span.is_odd(),
    });
    let mut out = Outcome::new(
        "analyze",
        json!({"d": a.d, "ell": a.ell, "budget": a.budget}),
        human,
        result,
    );
    out.files.push(("support".into(), bytes));
    Ok(out)
}

/// Searches the given `(d, ell)`, or every pair whose point count matches
/// the support when either is omitted (smallest `ell` first).
pub fn find_decomposition(
    support: &SupportSet,
    args: &DecompositionArgs,
) -> Result<DenseDecomposition, CliError> {
    let n = support.nvars();
    let size = support.len();
    let mut candidates = Vec::new();
    for ell in 1..=size {
        if args.ell.is_some_and(|e| e != ell) {
            continue;
        }
        for d in 1..=size as u32 {
            if args.d.is_some_and(|x| x != d) {
                continue;
            }
            if simplex_point_count(d, ell) as usize + n == size {
                candidates.push((d, ell));
            }
        }
    }
    for (d, ell) in candidates {
        if let Some(dec) = search_decomposition(support, d, ell, args.budget)? {
            return Ok(dec);
        }
    }
    Err(CliError::Precondition(match (args.d, args.ell) {
        (Some(d), Some(ell)) => format!("support has no ({d}, {ell})-dense decomposition"),
        _ => "support has no dense decomposition".into(),
    }))
}

fn parse_relation_rows(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| CliError::Input(format!("bad relation entry `{}`", x.trim())))
                })
                .collect()
        })
        .collect()
}

fn decomposition_params(a: &DecompositionArgs) -> Value {
    json!({"d": a.d, "ell": a.ell, "budget": a.budget})
}

pub fn cmd_dualize(a: &DualizeArgs) -> Result<Outcome, CliError> {
    let (text, bytes) = read_input(&a.system)?;
    let file = parse_system(&text)?;
    let sys = file.to_fewnomial_system()?;
    let dec = find_decomposition(&sys.support, &a.decomposition)?;
    let diag = diagonalize(&sys, &dec)?;
    let relations = match &a.relations {
        Some(rows) => relations_from_rows(&parse_relation_rows(rows)?)?,
        None => diag.default_relations(),
    };
    let gs = build_gale_system(&diag, &relations)?;
    let hyp = check_hypotheses(&sys.support, &relations, &dec)?;
    let gale = GaleFile::from_system(&gs);
    if let Some(path) = &a.output {
        let text = serde_json::to_string_pretty(&gale).expect("serializable") + "\n";
        std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let mut human = format!("decomposition: {}\n", describe_decomposition(&dec));
    for (i, h) in gs.h.iter().enumerate() {
        let _ = writeln!(human, "h{} = {}", i + 1, h.format_with(&gale.variables));
    }
    for (j, r) in gs.relations.iter().enumerate() {
        let _ = writeln!(
            human,
            "relation {}: beta = {:?}, gamma = {:?}",
            j + 1,
            r.beta,
            r.gamma
        );
    }
    for e in &gale.equations {
        let _ = writeln!(human, "{e}");
    }
    let _ = writeln!(
        human,
        "affine span index {}, relation index in saturation {}; positive case {}, real case {}",
        hyp.span_index,
        hyp.relation_index_in_saturation,
        if hyp.positive_case_ok { "ok" } else { "fails" },
        if hyp.real_case_ok { "ok" } else { "fails" }
    );
    let mut params = decomposition_params(&a.decomposition);
    params["relations"] = json!(a.relations);
    let result = json!({
        "decomposition": dec,
        "gale": gale,
        "hypotheses": hyp,
    });
    let mut out = Outcome::new("dualize", params, human, result);
    out.files.push(("system".into(), bytes));
    Ok(out)
}

fn region_name(r: RegionArg) -> &'static str {
    match r {
        RegionArg::Any => "any",
        RegionArg::Positive => "positive",
        RegionArg::MReal => "m-real",
        RegionArg::Delta => "delta",
    }
}

fn describe_report(report: &CountReport, names: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} real solutions with nonzero coordinates ({} in the complex torus)",
        report.total_real, report.complex_torus_count
    );
    for (k, v) in &report.per_region {
        let _ = writeln!(s, "  {k}: {v}");
    }
    for p in &report.points {
        let mut flags = vec![if p.nondegenerate {
            "nondegenerate"
        } else {
            "degenerate"
        }
        .to_string()];
        if !p.h_signs.is_empty() {
            flags.push(format!("h signs {:?}", p.h_signs));
        }
        let _ = writeln!(
            s,
            "  ({}, {}) = ({}, {})  {}",
            names[0],
            names[1],
            p.preview[0],
            p.preview[1],
            flags.join(", ")
        );
    }
    s
}

pub fn cmd_count(a: &CountArgs, seed: Option<u64>) -> Result<Outcome, CliError> {
    let (text, bytes) = read_input(&a.input)?;
    let opts = count_options(seed);
    let (report, region, count, names) = match parse_count_input(&text)? {
        CountInput::System(file) => {
            let polys = file.to_polynomials()?;
            if polys.len() != 2 || file.variables.len() != 2 {
                return Err(CliError::Input(
                    "count needs two polynomials in two variables".into(),
                ));
            }
            let region = a.region.unwrap_or(RegionArg::Any);
            let spec = match region {
                RegionArg::Any => RegionSpec::any(),
                RegionArg::Positive => RegionSpec::positive_orthant(),
                _ => {
                    return Err(CliError::Input(format!(
                        "region {} applies to Gale systems only",
                        region_name(region)
                    )))
                }
            };
            let report = count_real_solutions_2d_with(&polys[0], &polys[1], &opts)?;
            let count = classify(&report, &spec)?;
            (report, region, count, file.variables.clone())
        }
        CountInput::Gale(file) => {
            let gs = file.to_system()?;
            let region = a.region.unwrap_or(RegionArg::MReal);
            let spec = match region {
                RegionArg::Any => RegionSpec::any(),
                RegionArg::Positive => RegionSpec::positive_orthant(),
                RegionArg::MReal => RegionSpec::gale_real(&gs.h),
                RegionArg::Delta => RegionSpec::gale_positive(&gs.h),
            };
            let report = count_gale_with(&gs, &opts)?;
            let count = if region == RegionArg::MReal {
                report.region("m_real")
            } else {
                classify(&report, &spec)?
            };
            (report, region, count, file.variables.clone())
        }
    };
    let mut human = describe_report(&report, &names);
    let _ = writeln!(human, "region {}: {count}", region_name(region));
    let result = json!({
        "region": region_name(region),
        "count": count,
        "report": report,
    });
    let mut out = Outcome::new(
        "count",
        json!({"region": region_name(region)}),
        human,
        result,
    );
    out.files.push(("input".into(), bytes));
    out.seed = Some(opts.seed);
    Ok(out)
}

pub fn cmd_verify(a: &VerifyArgs, seed: Option<u64>) -> Result<Outcome, CliError> {
    let (text, bytes) = read_input(&a.system)?;
    let file = parse_system(&text)?;
    let sys = file.to_fewnomial_system()?;
    if sys.nvars() != 2 {
        return Err(CliError::Input(
            "verify needs a system in two variables".into(),
        ));
    }
    let dec = find_decomposition(&sys.support, &a.decomposition)?;
    let opts = count_options(seed);
    let verdict = verify_correspondence_with(&sys, &dec, &opts)?;
    let (n, ell, d) = (2, dec.ell as u32, dec.d);
    let positive_bound = dense_positive_bound(n, ell, d);
    let real_bound = dense_real_bound(n, ell, d);
    let polys = sys.polynomials();
    let supports: Vec<SupportSet> = polys
        .iter()
        .map(|p| SupportSet::new(2, p.support()))
        .collect::<Result<_, _>>()?;
    let mv = mixed_volume_2d(&supports[0], &supports[1])?;
    let positive_ok =
        densefew_core::counting::check_bound_compliance(verdict.original_positive, &positive_bound);
    let real_ok =
        densefew_core::counting::check_bound_compliance(verdict.original_real, &real_bound);
    let mv_ok = verdict.original_real as u128 <= mv;

    let mut human = format!("decomposition: {}\n", describe_decomposition(&dec));
    let _ = writeln!(
        human,
        "positive: original {}, Gale delta {}, {}",
        verdict.original_positive,
        verdict.gale_delta,
        if verdict.positive_equal {
            "equal"
        } else {
            "DIFFERENT"
        }
    );
    let _ = writeln!(
        human,
        "real: original {}, Gale M(R) {}, {}",
        verdict.original_real,
        verdict.gale_m_real,
        match verdict.real_equal {
            Some(true) => "equal",
            Some(false) => "DIFFERENT",
            None => "not compared (odd-index hypotheses fail)",
        }
    );
    let _ = writeln!(
        human,
        "bounds: positive {} <= {} {}, real {} <= {} {}, mixed volume {}",
        verdict.original_positive,
        positive_bound.max_count,
        if positive_ok { "ok" } else { "VIOLATED" },
        verdict.original_real,
        real_bound.max_count,
        if real_ok { "ok" } else { "VIOLATED" },
        mv
    );
    let holds = verdict.holds() && positive_ok && real_ok && mv_ok;
    let _ = writeln!(human, "verdict: {}", if holds { "holds" } else { "FAILS" });
    let result = json!({
        "decomposition": dec,
        "verdict": verdict,
        "holds": holds,
        "bounds": {
            "positive": {"max_count": positive_bound.max_count.to_string(), "ok": positive_ok},
            "real": {"max_count": real_bound.max_count.to_string(), "ok": real_ok},
            "mixed_volume": mv,
            "mixed_volume_ok": mv_ok,
        },
    });
    let mut out = Outcome::new(
        "verify",
        decomposition_params(&a.decomposition),
        human,
        result,
    );
    out.files.push(("system".into(), bytes));
    out.seed = Some(opts.seed);
    if !holds {
        out.failure = Some(CliError::Assertion(
            "correspondence or bound check failed".into(),
        ));
    }
    Ok(out)
}

pub fn cmd_verify_example(a: &VerifyExampleArgs, seed: Option<u64>) -> Result<Outcome, CliError> {
    let opts = count_options(seed);
    let assertions = run_example(a.corrupt, &opts)?;
    let mut human = String::new();
    for x in &assertions {
        let _ = writeln!(
            human,
            "{} {}: expected {}, got {}",
            if x.passed { "PASS" } else { "FAIL" },
            x.name,
            x.expected,
            x.actual
        );
    }
    let failed: Vec<&str> = assertions
        .iter()
        .filter(|x| !x.passed)
        .map(|x| x.name.as_str())
        .collect();
    let result = json!({"passed": failed.is_empty(), "assertions": assertions});
    let mut out = Outcome::new(
        "verify-example",
        json!({"corrupt": a.corrupt}),
        human,
        result,
    );
    out.seed = Some(opts.seed);
    if !failed.is_empty() {
        out.failure = Some(CliError::Assertion(format!(
            "verify-example failed: {} (first failing assertion: {})",
            failed.join(", "),
            failed[0]
        )));
    }
    Ok(out)
}

pub fn cmd_audit(a: &AuditArgs) -> Result<Outcome, CliError> {
    let rows = audit_grid(a.max_ell, a.max_n, a.max_d);
    let mut human = format!(
        "{:<8} {:>3} {:>3} {:>3} {:>3} {:>24} {:>24}  {}\n",
        "family", "ell", "j", "n", "d", "lhs", "rhs", "status"
    );
    for r in &rows {
        let status = match r.status() {
            AuditStatus::Holds => "holds",
            AuditStatus::Equality => "EQUALITY",
            AuditStatus::Violated => "VIOLATED",
        };
        let family = to_json(&r.family);
        let _ = writeln!(
            human,
            "{:<8} {:>3} {:>3} {:>3} {:>3} {:>24} {:>24}  {}",
            family.as_str().unwrap_or_default(),
            r.ell,
            r.j,
            r.n,
            r.d.map_or("-".to_string(), |d| d.to_string()),
            densefew_core::algebra::rational::format_rational(&r.lhs),
            densefew_core::algebra::rational::format_rational(&r.rhs),
            status
        );
    }
    let result = json!({
        "rows": rows.iter().map(|r| {
            let mut v = to_json(r);
            v["status"] = to_json(&r.status());
            v
        }).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(
        "audit",
        json!({"max_ell": a.max_ell, "max_n": a.max_n, "max_d": a.max_d}),
        human,
        result,
    ))
}
