//! Command-line front end: `codes`, `build`, `count`, `verify`, `bounds`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 refused
//! because a size cap was hit.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;

use crate::bounds;
use crate::codes::{self, DEFAULT_ENUM_CAP};
use crate::error::{invalid, Error, Result};
use crate::packing::{self, Construction, CountMode, PointSet, DEFAULT_MAX_POINTS};
use crate::verify::{self, CertificateReport, DistanceReport, EXHAUSTIVE_GUARD};
use crate::weights::{self, WeightDistribution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

/// Largest `k` accepted by `codes` (generator matrices are built densely).
pub const CODES_MAX_K: u32 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "cubepack",
    version,
    about = "Exact unit-distance point packings in 2^k-dimensional unit cubes"
)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Code parameters, weight distributions and the Reed-Muller nesting chain
    Codes(CodesArgs),
    /// Materialize a construction, optionally writing a point file
    Build(BuildArgs),
    /// Count the points of a construction without generating them
    Count(CountArgs),
    /// Check pairwise distances of a point set, or certify a construction
    Verify(VerifyArgs),
    /// Exact lower-bound terms and the closed-form estimate
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum VerifyMode {
    Exhaustive,
    Sampled,
    Structural,
}

fn parse_construction(s: &str) -> std::result::Result<Construction, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_count_mode(s: &str) -> std::result::Result<CountMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug, Serialize)]
struct CodesArgs {
    #[arg(long)]
    k: u32,
    /// Largest code dimension enumerated word by word
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    #[arg(long)]
    k: u32,
    /// base, augmented16 or general
    #[arg(long, default_value = "base", value_parser = parse_construction)]
    construction: Construction,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: usize,
    /// Point file to write
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct CountArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, default_value = "general", value_parser = parse_construction)]
    construction: Construction,
    /// exact (full weight distributions) or lower (minimum-weight words only)
    #[arg(long, default_value = "exact", value_parser = parse_count_mode)]
    method: CountMode,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    /// Point file to check
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Build this construction instead of reading a file
    #[arg(long, value_parser = parse_construction)]
    construction: Option<Construction>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_enum, default_value_t = VerifyMode::Exhaustive)]
    mode: VerifyMode,
    /// Sampled pairs
    #[arg(long, default_value_t = 1_000_000)]
    pairs: u64,
    /// Required for sampled mode
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: usize,
    /// Largest set checked pair by pair in exhaustive mode
    #[arg(long, default_value_t = EXHAUSTIVE_GUARD)]
    guard: usize,
    /// augmented16 only: check every augmentation point against every base point
    #[arg(long)]
    thorough: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// A command's result in every output form it supports.
struct Outcome {
    code: i32,
    json: Value,
    text: String,
    csv: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a C,
    result: &'a Value,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameterCombination(msg.into())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::InvalidParameterCombination(_) | Error::Parse { .. } => {
            EXIT_USAGE
        }
        Error::EnumerationRefused { .. }
        | Error::MaterializationRefused { .. }
        | Error::VerificationRefused { .. } => EXIT_REFUSED,
        _ => EXIT_FAILED,
    }
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(usage(format!("cannot build thread pool: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    match result {
        Ok(text) => {
            if out.write_all(text.0.as_bytes()).is_err() {
                return EXIT_FAILED;
            }
            text.1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::MaterializationRefused { .. }) {
                let _ = writeln!(err, "hint: `cubepack count` reports sizes without generating points");
            }
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<(String, i32)> {
    match cmd {
        Command::Codes(a) => render("codes", a, a.format, cmd_codes(a)?),
        Command::Build(a) => render("build", a, a.format, cmd_build(a)?),
        Command::Count(a) => render("count", a, a.format, cmd_count(a)?),
        Command::Verify(a) => render("verify", a, a.format, cmd_verify(a)?),
        Command::Bounds(a) => render("bounds", a, a.format, cmd_bounds(a)?),
    }
}

fn render<C: Serialize>(
    command: &'static str,
    config: &C,
    format: Format,
    o: Outcome,
) -> Result<(String, i32)> {
    let body = match format {
        Format::Text => o.text,
        Format::Json => {
            let env = Envelope {
                tool: "cubepack",
                version: env!("CARGO_PKG_VERSION"),
                command,
                config,
                result: &o.json,
            };
            let mut s = serde_json::to_string_pretty(&env)
                .map_err(|e| Error::InternalConsistency(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => o
            .csv
            .ok_or_else(|| usage(format!("`{command}` has no csv output")))?,
    };
    Ok((body, o.code))
}

fn to_json<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::InternalConsistency(e.to_string()))
}

fn strings(xs: &[BigUint]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn list(xs: &[BigUint]) -> String {
    format!("[{}]", strings(xs).join(","))
}

// ---------------------------------------------------------------- codes

#[derive(Serialize)]
struct Agreement {
    methods: Vec<String>,
    agree: bool,
    summary: String,
}

fn agreement(results: &[(&str, Option<&WeightDistribution>)], skipped: Option<String>) -> Agreement {
    let present: Vec<&WeightDistribution> = results.iter().filter_map(|r| r.1).collect();
    let same = present.iter().filter(|d| **d == present[0]).count();
    let mut summary = format!("{same}/{} methods agree", present.len());
    if let Some(s) = skipped {
        summary.push_str(&format!(" ({s})"));
    }
    Agreement {
        methods: results
            .iter()
            .filter(|r| r.1.is_some())
            .map(|r| r.0.to_string())
            .collect(),
        agree: same == present.len(),
        summary,
    }
}

#[derive(Serialize)]
struct ChainLink {
    sub: String,
    sup: String,
    holds: bool,
}

#[derive(Serialize)]
struct CodesReport {
    k: u32,
    n: usize,
    hamming: String,
    extended_hamming: String,
    reed_muller: BTreeMap<String, String>,
    chain: Vec<ChainLink>,
    extended_hamming_is_top_rm: bool,
    #[serde(rename = "W")]
    w: Vec<String>,
    #[serde(rename = "V")]
    v: Vec<String>,
    #[serde(rename = "H")]
    h: Vec<String>,
    agreement_w: Agreement,
    agreement_v: Agreement,
    base_count: String,
}

fn enumerated(
    code: &codes::LinearCode,
    cap: usize,
) -> Result<(Option<WeightDistribution>, Option<String>)> {
    match weights::weights_bruteforce(code, cap) {
        Ok(d) => Ok((Some(d), None)),
        Err(Error::EnumerationRefused { dimension, cap }) => Ok((
            None,
            Some(format!("enumeration skipped: dimension {dimension} above cap {cap}")),
        )),
        Err(e) => Err(e),
    }
}

fn cmd_codes(a: &CodesArgs) -> Result<Outcome> {
    let k = a.k;
    if !(2..=CODES_MAX_K).contains(&k) {
        return Err(invalid(format!("codes needs 2 <= k <= {CODES_MAX_K}, got {k}")));
    }
    let n = 1usize << k;
    let ham = codes::hamming_code(k)?;
    let eh = codes::extended_hamming(k)?;
    let rm = (0..=k - 2)
        .map(|r| codes::reed_muller(r, k))
        .collect::<Result<Vec<_>>>()?;
    let mut chain = Vec::new();
    for r in 1..rm.len() {
        chain.push(ChainLink {
            sub: format!("RM({},{k})", r - 1),
            sup: format!("RM({r},{k})"),
            holds: codes::subcode_of(&rm[r - 1], &rm[r])?,
        });
    }
    let top = codes::is_permuted_copy(&eh, &rm[rm.len() - 1], &codes::extended_hamming_to_rm_permutation(k))?;

    let w_rec = weights::hamming_weights_recurrence(k)?;
    let w_closed = weights::hamming_weights_closed(k)?;
    let (w_enum, w_skip) = enumerated(&ham, a.cap)?;
    let v_rec = weights::extend_distribution(&w_rec);
    let v_closed = WeightDistribution::from_poly(&weights::extended_generating_function(k)?, n, "g(x)")?;
    let (v_enum, v_skip) = enumerated(&eh, a.cap)?;
    let agreement_w = agreement(
        &[
            ("recurrence", Some(&w_rec)),
            ("closed form", Some(&w_closed)),
            ("enumeration", w_enum.as_ref()),
        ],
        w_skip,
    );
    let agreement_v = agreement(
        &[
            ("parity extension of W", Some(&v_rec)),
            ("closed form", Some(&v_closed)),
            ("enumeration", v_enum.as_ref()),
        ],
        v_skip,
    );
    let h: Vec<BigUint> = (0..=n).map(|j| v_closed.count(j) << (n - j)).collect();
    let base = weights::base_count(k)?;

    let report = CodesReport {
        k,
        n,
        hamming: ham.params_string(),
        extended_hamming: eh.params_string(),
        reed_muller: rm
            .iter()
            .enumerate()
            .map(|(r, c)| (format!("RM({r},{k})"), c.params_string()))
            .collect(),
        chain,
        extended_hamming_is_top_rm: top,
        w: strings(w_rec.counts()),
        v: strings(v_closed.counts()),
        h: strings(&h),
        agreement_w,
        agreement_v,
        base_count: base.to_string(),
    };
    let ok = report.agreement_w.agree
        && report.agreement_v.agree
        && report.extended_hamming_is_top_rm
        && report.chain.iter().all(|l| l.holds);

    let mut text = String::new();
    text.push_str(&format!("k = {k}, n = {n}\n"));
    text.push_str(&format!("Hamming code           {}\n", report.hamming));
    text.push_str(&format!("extended Hamming code  {}\n", report.extended_hamming));
    for (r, c) in rm.iter().enumerate() {
        text.push_str(&format!("RM({r},{k}) {:>13}\n", c.params_string()));
    }
    for l in &report.chain {
        text.push_str(&format!(
            "{} subset of {}: {}\n",
            l.sub,
            l.sup,
            if l.holds { "yes" } else { "NO" }
        ));
    }
    text.push_str(&format!(
        "extended Hamming = RM({},{k}) up to coordinate order: {}\n",
        k - 2,
        if top { "yes" } else { "NO" }
    ));
    text.push_str(&format!("W = {}\n", list(w_rec.counts())));
    text.push_str(&format!("  {}\n", report.agreement_w.summary));
    text.push_str(&format!("V = {}\n", list(v_closed.counts())));
    text.push_str(&format!("  {}\n", report.agreement_v.summary));
    text.push_str(&format!("H = {}\n", list(&h)));
    text.push_str(&format!("base packing size = {base}\n"));

    let mut csv = String::from("j,W,V,H\n");
    for (j, hj) in h.iter().enumerate() {
        csv.push_str(&format!("{j},{},{},{hj}\n", w_rec.count(j), v_closed.count(j)));
    }
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_FAILED },
        json: to_json(&report)?,
        text,
        csv: Some(csv),
    })
}

// ---------------------------------------------------------------- build

#[derive(Serialize)]
struct BuildReport {
    construction: Construction,
    k: u32,
    dim: usize,
    count: String,
    /// `(fractional coordinates, points)` pairs, ascending.
    weight_classes: Vec<(usize, u64)>,
    written: Option<String>,
}

fn cmd_build(a: &BuildArgs) -> Result<Outcome> {
    let stream = packing::build(a.construction, a.k, a.cap)?;
    let expected = stream.expected_count().clone();
    let dim = stream.dim();
    let set = stream.materialize(a.max_points)?;
    if BigUint::from(set.len()) != expected {
        return Err(Error::InternalConsistency(format!(
            "stream announced {expected} points but yielded {}",
            set.len()
        )));
    }
    if let Some(path) = &a.out {
        let mut w = BufWriter::new(File::create(path)?);
        set.write_to(&mut w)?;
        w.flush()?;
    }
    let report = BuildReport {
        construction: a.construction,
        k: a.k,
        dim,
        count: expected.to_string(),
        weight_classes: packing::weight_class_breakdown(&set).into_iter().collect(),
        written: a.out.as_ref().map(|p| p.display().to_string()),
    };
    let mut text = format!(
        "{} k={} dim={}: {} points\n",
        a.construction, a.k, dim, report.count
    );
    text.push_str("fractional coordinates -> points\n");
    for (w, c) in &report.weight_classes {
        text.push_str(&format!("{w:>6} -> {c}\n"));
    }
    if let Some(p) = &report.written {
        text.push_str(&format!("written to {p}\n"));
    }
    Ok(Outcome {
        code: EXIT_OK,
        json: to_json(&report)?,
        text,
        csv: None,
    })
}

// ---------------------------------------------------------------- count

#[derive(Serialize)]
struct CountOut {
    construction: Construction,
    k: u32,
    method: CountMode,
    total: String,
    per_layer: BTreeMap<String, String>,
    exact: bool,
}

fn cmd_count(a: &CountArgs) -> Result<Outcome> {
    let (total, per_layer, exact) = match a.construction {
        Construction::General => {
            let r = packing::count_general(a.k, a.method, a.cap)?;
            (r.total, r.per_layer, r.exact)
        }
        Construction::Base => {
            let t = weights::base_count(a.k)?;
            (t.clone(), BTreeMap::from([("base".to_string(), t)]), true)
        }
        Construction::Augmented16 => {
            let t = packing::construction_count(Construction::Augmented16, a.k, a.cap)?;
            let base = weights::base_count(4)?;
            let aug = &t - &base;
            (
                t,
                BTreeMap::from([("base".to_string(), base), ("augmentation".to_string(), aug)]),
                true,
            )
        }
    };
    let report = CountOut {
        construction: a.construction,
        k: a.k,
        method: a.method,
        total: total.to_string(),
        per_layer: per_layer
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect(),
        exact,
    };
    let mut text = format!(
        "{} k={}: {} points ({})\n",
        a.construction,
        a.k,
        report.total,
        if exact { "exact" } else { "lower bound" }
    );
    for (name, c) in &report.per_layer {
        text.push_str(&format!("  {name}: {c}\n"));
    }
    Ok(Outcome {
        code: EXIT_OK,
        json: to_json(&report)?,
        text,
        csv: None,
    })
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
struct VerifyOut {
    source: String,
    points: Option<usize>,
    dim: Option<usize>,
    duplicates: Option<usize>,
    distance: Option<DistanceReport>,
    certificate: Option<CertificateReport>,
    thorough: Option<DistanceReport>,
    passed: bool,
}

fn load_points(a: &VerifyArgs) -> Result<(String, PointSet)> {
    match (&a.input, a.construction) {
        (Some(_), Some(_)) => Err(usage("give either --in or --construction, not both")),
        (None, None) => Err(usage("give --in <file> or --construction with --k")),
        (Some(path), None) => {
            let set = PointSet::read_from(BufReader::new(File::open(path)?))?;
            Ok((format!("file {}", path.display()), set))
        }
        (None, Some(c)) => {
            let k = a.k.ok_or_else(|| usage("--construction needs --k"))?;
            let set = packing::build(c, k, a.cap)?.materialize(a.max_points)?;
            Ok((format!("{c} k={k}"), set))
        }
    }
}

fn distance_text(r: &DistanceReport) -> String {
    let mut s = format!("{} check: {} pairs", r.mode, r.pairs_checked);
    if let Some(seed) = r.seed {
        s.push_str(&format!(" (seed {seed})"));
    }
    s.push_str(&format!(
        "\n  min squared distance {} / 4^{} = {}, at points {} and {}\n  {}\n",
        r.min_scaled_sq,
        r.scale_exp,
        r.min_distance_squared_f64(),
        r.argmin.0,
        r.argmin.1,
        if r.passed { "passed" } else { "FAILED" }
    ));
    s
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    if a.mode == VerifyMode::Sampled && a.seed.is_none() {
        return Err(usage("sampled mode requires --seed"));
    }
    if a.thorough && a.construction != Some(Construction::Augmented16) {
        return Err(usage("--thorough applies to --construction augmented16 only"));
    }
    let mut out = VerifyOut {
        source: String::new(),
        points: None,
        dim: None,
        duplicates: None,
        distance: None,
        certificate: None,
        thorough: None,
        passed: true,
    };
    let mut text = String::new();
    if a.mode == VerifyMode::Structural {
        let c = a
            .construction
            .ok_or_else(|| usage("structural mode needs --construction and --k"))?;
        let k = a.k.ok_or_else(|| usage("structural mode needs --k"))?;
        let cert = verify::verify_structural(c, k, a.cap)?;
        out.source = format!("{c} k={k}");
        text.push_str(&format!("structural certificate for {}\n", out.source));
        for case in &cert.cases {
            text.push_str(&format!(
                "  [{}] {}",
                if case.verified { "ok" } else { "FAIL" },
                case.name
            ));
            if !case.inequality.is_empty() {
                text.push_str(&format!(": {} (margin {})", case.inequality, case.margin));
            }
            text.push('\n');
        }
        if !cert.complete {
            text.push_str("  certificate incomplete: some distance claim could not be checked\n");
        }
        out.passed &= cert.overall;
        out.certificate = Some(cert);
    } else {
        let (source, set) = load_points(a)?;
        let report = match a.mode {
            VerifyMode::Exhaustive => verify::verify_exhaustive(&set, a.guard)?,
            _ => verify::verify_sampled(&set, a.pairs, a.seed.unwrap_or_default())?,
        };
        let dups = verify::check_no_duplicates(&set);
        text.push_str(&format!("{source}: {} points, dim {}\n", set.len(), set.dim()));
        text.push_str(&format!("duplicates: {dups}\n"));
        text.push_str(&distance_text(&report));
        out.source = source;
        out.points = Some(set.len());
        out.dim = Some(set.dim());
        out.duplicates = Some(dups);
        out.passed &= report.passed && dups == 0;
        out.distance = Some(report);
    }
    if a.thorough {
        let aug = packing::build_augmented16()?.materialize(a.max_points)?;
        let base = packing::build_base(4)?.materialize(a.max_points)?;
        let r = verify::verify_cross_exhaustive(&aug, &base)?;
        text.push_str("augmentation against every base point:\n");
        text.push_str(&distance_text(&r));
        out.passed &= r.passed;
        out.thorough = Some(r);
    }
    text.push_str(if out.passed { "verified\n" } else { "verification FAILED\n" });
    Ok(Outcome {
        code: if out.passed { EXIT_OK } else { EXIT_FAILED },
        json: to_json(&out)?,
        text,
        csv: None,
    })
}

// ---------------------------------------------------------------- bounds

fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome> {
    let r = bounds::bound_report(a.k)?;
    let mut text = format!("k = {}, n = {}\nbase = {}\n", r.k, r.n, r.base);
    for t in &r.terms {
        text.push_str(&format!("term r'={}: {}\n", t.r_prime, t.value));
    }
    text.push_str(&format!(
        "lower bound (exact) = {}\n  ~ {}\n",
        r.lower_bound_exact, r.lower_bound_exact_decimal
    ));
    text.push_str(&format!(
        "closed form with l = {}: ~ {}\n",
        r.leech_l, r.closed_form_value_decimal
    ));
    if let (Some(x), Some(d)) = (&r.leech_ratio, &r.leech_ratio_decimal) {
        text.push_str(&format!("partial sum ratio = {x} ~ {d}\n"));
    }
    for c in &r.exponent_checks {
        text.push_str(&format!(
            "exponent r'={}: {} >= {}: {}\n",
            c.r_prime, c.lhs, c.rhs, c.holds
        ));
    }
    text.push_str(&format!(
        "r'=0,2 terms {} + {} vs subtracted {}: gap {}{}\n",
        r.extension.r0,
        r.extension.r2,
        r.extension.printed_subtraction,
        r.extension.gap,
        if r.discrepancy_4n_flag { " (= 4n)" } else { "" }
    ));
    Ok(Outcome {
        code: EXIT_OK,
        json: to_json(&r)?,
        text,
        csv: None,
    })
}
