use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quadgrowth::bounds::{chhl_bound, default_sharp_constant, k_star, sharp_bound};
use quadgrowth::dickson::{dickson_reduce, DicksonKind};
use quadgrowth::harness::{inner_product_histogram, run_suites, Suite, VerifyConfig, DEFAULT_SEED};
use quadgrowth::oracle::spectrum_bruteforce;
use quadgrowth::spectrum::{nonzero_coefficients, support, weight_histogram};
use quadgrowth::walk::{WalkOptions, DEFAULT_CAP_LOG2};
use quadgrowth::{AnfPolynomial, Error};

/// Largest `n` for which `spectrum` cross-checks against the truth table.
const ORACLE_CROSS_CHECK_LIMIT: usize = 16;

#[derive(Parser, Debug)]
#[command(
    name = "quadgrowth",
    version,
    about = "Fourier spectra and level-k weights of quadratic phase functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dickson summary and every nonzero Fourier coefficient.
    Spectrum(PolyArgs),
    /// Exact level-k weights with the envelope and sharp bounds.
    Weights(WeightsArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Level weights of the inner-product forms around k = (2 - sqrt 2) m.
    Extremal(ExtremalArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Log2 cap on enumerated elements.
    #[arg(long, default_value_t = DEFAULT_CAP_LOG2)]
    cap: usize,
    /// Worker threads for enumeration.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Seed for randomized suites; echoed in text output.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write output to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl Common {
    fn walk(&self) -> WalkOptions {
        WalkOptions {
            cap_log2: self.cap,
            workers: self.workers as usize,
        }
    }

    fn sink(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
                Failure::Usage(format!("cannot create {}: {e}", p.display()))
            })?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Polynomial in ANF, e.g. "x1*x2 + x3 + 1".
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    poly: Option<String>,
    /// File with one polynomial per line; `#` starts a comment.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Number of variables (default: largest index used).
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct WeightsArgs {
    #[command(flatten)]
    poly: PolyArgs,
    /// A single level.
    #[arg(long, conflicts_with = "k_range")]
    k: Option<usize>,
    /// Inclusive range of levels, `a..b`.
    #[arg(long, value_parser = parse_range)]
    k_range: Option<RangeInclusive<usize>>,
    /// Constant C in the sharp bound C k^(-1/2) (1 + sqrt 2)^k.
    #[arg(long)]
    constant: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run only these suites (repeatable).
    #[arg(long, value_parser = parse_suite)]
    suite: Vec<Suite>,
    /// Inclusive rank range for the sharpness suite, `a..b`.
    #[arg(long, value_parser = parse_range)]
    m: Option<RangeInclusive<usize>>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ExtremalArgs {
    /// Inclusive rank range, `a..b`.
    #[arg(long, value_parser = parse_range, default_value = "0..14")]
    m: RangeInclusive<usize>,
    #[command(flatten)]
    common: Common,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start in `{s}`"))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end in `{s}`"))?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok(a..=b)
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Verification(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. }
            | Error::TooManyVariables { .. }
            | Error::Budget(_)
            | Error::TooWide { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("csv error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a),
        Command::Weights(a) => cmd_weights(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Extremal(a) => cmd_extremal(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn read_polynomials(args: &PolyArgs) -> Result<Vec<AnfPolynomial>, Failure> {
    let lines: Vec<String> = match (&args.poly, &args.file) {
        (Some(p), _) => vec![p.clone()],
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
            .filter(|l| !l.is_empty())
            .collect(),
        (None, None) => return Err(Failure::Usage("no polynomial given".into())),
    };
    if lines.is_empty() {
        return Err(Failure::Usage("input file holds no polynomials".into()));
    }
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            AnfPolynomial::parse(l, args.n).map_err(|e| {
                let where_ = if args.file.is_some() {
                    format!("polynomial {} (`{l}`): ", i + 1)
                } else {
                    String::new()
                };
                Failure::from(e).prefixed(&where_)
            })
        })
        .collect()
}

impl Failure {
    fn prefixed(self, p: &str) -> Self {
        match self {
            Failure::Usage(m) => Failure::Usage(format!("{p}{m}")),
            Failure::Verification(m) => Failure::Verification(format!("{p}{m}")),
            Failure::Resource(m) => Failure::Resource(format!("{p}{m}")),
        }
    }
}

fn cmd_spectrum(args: &PolyArgs) -> Result<(), Failure> {
    let polys = read_polynomials(args)?;
    let multi = polys.len() > 1;
    let walk = args.common.walk();
    let mut out = args.common.sink()?;
    let mut csv_out =
        (args.common.format == Format::Csv).then(|| csv::Writer::from_writer(Vec::new()));
    if let Some(w) = csv_out.as_mut() {
        let mut header = vec!["S_hex", "sign", "m"];
        if multi {
            header.insert(0, "poly_index");
        }
        w.write_record(&header)?;
    }
    for (idx, p) in polys.iter().enumerate() {
        let q = p.to_quadratic()?;
        let d = dickson_reduce(&q)?;
        let mut coeffs = nonzero_coefficients(&d, &walk)?;
        coeffs.sort_by(|(a, _), (b, _)| a.words().iter().rev().cmp(b.words().iter().rev()));
        if q.n() <= ORACLE_CROSS_CHECK_LIMIT {
            let oracle = spectrum_bruteforce(&q)?;
            let nonzero = oracle.iter().filter(|v| !v.is_zero()).count();
            let agree = nonzero == coeffs.len()
                && coeffs
                    .iter()
                    .all(|(s, c)| oracle[s.to_u64() as usize] == c.value());
            if !agree {
                return Err(Failure::Verification(format!(
                    "structure spectrum of `{p}` disagrees with the truth table"
                )));
            }
        }
        match csv_out.as_mut() {
            Some(w) => {
                for (s, c) in &coeffs {
                    let mut rec = vec![s.to_hex(), c.sign.to_string(), d.m().to_string()];
                    if multi {
                        rec.insert(0, (idx + 1).to_string());
                    }
                    w.write_record(&rec)?;
                }
            }
            None => {
                if multi {
                    writeln!(out, "# polynomial {}", idx + 1)?;
                }
                let coset = support(&d)?;
                writeln!(out, "polynomial: {p}")?;
                writeln!(out, "n: {}", q.n())?;
                writeln!(out, "m: {}", d.m())?;
                let class = match d.classify().kind {
                    DicksonKind::PureQuadratic { d: bit } => {
                        format!("pure quadratic, d = {}", u8::from(bit))
                    }
                    DicksonKind::QuadraticPlusLinear => {
                        "quadratic plus independent linear part".to_string()
                    }
                };
                writeln!(out, "class: {class}")?;
                writeln!(out, "quadratic support: {} variables", d.support().len())?;
                writeln!(
                    out,
                    "support coset: offset {} + span of {} vectors, forced weight {}",
                    coset.offset().to_set_string(),
                    coset.dimension(),
                    coset.forced_weight()
                )?;
                if q.n() <= ORACLE_CROSS_CHECK_LIMIT {
                    writeln!(out, "oracle cross-check: ok")?;
                }
                writeln!(out, "seed: {}", args.common.seed)?;
                writeln!(
                    out,
                    "{} nonzero coefficients of magnitude 2^-{}:",
                    coeffs.len(),
                    d.m()
                )?;
                for (s, c) in &coeffs {
                    writeln!(
                        out,
                        "  {} {}  {}",
                        if c.sign < 0 { "-" } else { "+" },
                        s.to_hex(),
                        s.to_set_string()
                    )?;
                }
            }
        }
    }
    if let Some(w) = csv_out {
        out.write_all(&w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?)?;
    }
    out.flush()?;
    Ok(())
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.12e}")
}

fn cmd_weights(args: &WeightsArgs) -> Result<(), Failure> {
    let polys = read_polynomials(&args.poly)?;
    let multi = polys.len() > 1;
    let common = &args.poly.common;
    let c = args.constant.unwrap_or_else(default_sharp_constant);
    if !(c.is_finite() && c > 0.0) {
        return Err(Failure::Usage(format!(
            "constant must be positive, got {c}"
        )));
    }
    let mut out = common.sink()?;
    let csv_mode = common.format == Format::Csv;
    let mut w = csv::Writer::from_writer(Vec::new());
    if csv_mode {
        let mut header = vec![
            "k",
            "count",
            "m",
            "weight_float",
            "chhl_bound",
            "sharp_bound",
            "ratio_to_sharp",
        ];
        if multi {
            header.insert(0, "poly_index");
        }
        w.write_record(&header)?;
    }
    for (idx, p) in polys.iter().enumerate() {
        let q = p.to_quadratic()?;
        let d = dickson_reduce(&q)?;
        let h = weight_histogram(&d, &common.walk())?;
        let ks = match (&args.k, &args.k_range) {
            (Some(k), _) => *k..=*k,
            (None, Some(r)) => r.clone(),
            (None, None) => 0..=q.n(),
        };
        if !csv_mode {
            if multi {
                writeln!(out, "# polynomial {}", idx + 1)?;
            }
            writeln!(out, "polynomial: {p}")?;
            writeln!(
                out,
                "n: {}, m: {}, C: {c}, seed: {}",
                q.n(),
                d.m(),
                common.seed
            )?;
            writeln!(
                out,
                "{:>4} {:>24} {:>18} {:>18} {:>18} {:>12}",
                "k", "count (x 2^-m)", "weight", "(1+sqrt2)^k", "sharp bound", "ratio"
            )?;
        }
        for k in ks {
            let count = h.count(k);
            let weight = h.level_weight(k).to_f64();
            let chhl = chhl_bound(k);
            let sharp = if k == 0 {
                None
            } else {
                Some(sharp_bound(k, c)?)
            };
            let ratio = sharp.map(|s| weight / s);
            if csv_mode {
                let mut rec = vec![
                    k.to_string(),
                    count.to_string(),
                    d.m().to_string(),
                    fmt_f64(weight),
                    fmt_f64(chhl),
                    sharp.map(fmt_f64).unwrap_or_default(),
                    ratio.map(fmt_f64).unwrap_or_default(),
                ];
                if multi {
                    rec.insert(0, (idx + 1).to_string());
                }
                w.write_record(&rec)?;
            } else {
                writeln!(
                    out,
                    "{:>4} {:>24} {:>18.10} {:>18.6} {:>18} {:>12}",
                    k,
                    count.to_string(),
                    weight,
                    chhl,
                    sharp
                        .map(|s| format!("{s:.6}"))
                        .unwrap_or_else(|| "-".into()),
                    ratio
                        .map(|r| format!("{r:.6}"))
                        .unwrap_or_else(|| "-".into()),
                )?;
            }
        }
    }
    if csv_mode {
        out.write_all(&w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let common = &args.common;
    let mut cfg = VerifyConfig {
        seed: common.seed,
        walk: common.walk(),
        ..VerifyConfig::default()
    };
    if let Some(r) = &args.m {
        cfg.sharpness_m = (*r.start(), *r.end());
    }
    let suites: Vec<Suite> = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite.clone()
    };
    let reports = run_suites(&suites, &cfg)?;
    let mut out = common.sink()?;
    match common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "check", "passed", "seed", "elapsed_s", "detail"])?;
            for r in &reports {
                for c in &r.checks {
                    w.write_record([
                        r.suite.name(),
                        &c.name,
                        if c.passed { "true" } else { "false" },
                        &r.seed.to_string(),
                        &format!("{:.3}", r.elapsed.as_secs_f64()),
                        &c.detail,
                    ])?;
                }
            }
            out.write_all(&w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?)?;
        }
        Format::Text => {
            writeln!(out, "seed: {}", cfg.seed)?;
            for r in &reports {
                writeln!(
                    out,
                    "{:<14} {:<5} {:>8.3} s",
                    r.suite.name(),
                    if r.passed() { "pass" } else { "FAIL" },
                    r.elapsed.as_secs_f64()
                )?;
                for c in &r.checks {
                    writeln!(
                        out,
                        "    {:<5} {}: {}",
                        if c.passed { "ok" } else { "FAIL" },
                        c.name,
                        c.detail
                    )?;
                }
            }
        }
    }
    out.flush()?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.suite.name())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "suites {}",
            failed.join(", ")
        )))
    }
}

fn cmd_extremal(args: &ExtremalArgs) -> Result<(), Failure> {
    let common = &args.common;
    let walk = common.walk();
    for m in args.m.clone() {
        walk.check(2 * m)?;
    }
    let mut out = common.sink()?;
    let csv_mode = common.format == Format::Csv;
    let mut w = csv::Writer::from_writer(Vec::new());
    if csv_mode {
        w.write_record([
            "m",
            "k",
            "count",
            "weight",
            "is_kstar",
            "sharp_bound_c1",
            "ratio",
        ])?;
    } else {
        writeln!(
            out,
            "inner-product forms, k* = round((2 - sqrt 2) m), seed: {}",
            common.seed
        )?;
        writeln!(
            out,
            "{:>3} {:>4} {:>14} {:>16} {:>3} {:>16} {:>10}",
            "m", "k", "count", "weight", "k*", "k^-1/2 (1+r2)^k", "ratio"
        )?;
    }
    for m in args.m.clone() {
        let h = inner_product_histogram(m, &walk)?;
        let ks = k_star(m);
        for k in 0..=2 * m {
            let count = h.count(k);
            let weight = h.level_weight(k).to_f64();
            let sharp = if k == 0 {
                None
            } else {
                Some(sharp_bound(k, 1.0)?)
            };
            let ratio = sharp.map(|s| weight / s);
            if csv_mode {
                w.write_record([
                    m.to_string(),
                    k.to_string(),
                    count.to_string(),
                    fmt_f64(weight),
                    (k == ks).to_string(),
                    sharp.map(fmt_f64).unwrap_or_default(),
                    ratio.map(fmt_f64).unwrap_or_default(),
                ])?;
            } else {
                writeln!(
                    out,
                    "{:>3} {:>4} {:>14} {:>16.8} {:>3} {:>16} {:>10}",
                    m,
                    k,
                    count.to_string(),
                    weight,
                    if k == ks { "*" } else { "" },
                    sharp
                        .map(|s| format!("{s:.6}"))
                        .unwrap_or_else(|| "-".into()),
                    ratio
                        .map(|r| format!("{r:.6}"))
                        .unwrap_or_else(|| "-".into()),
                )?;
            }
        }
    }
    if csv_mode {
        out.write_all(&w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?)?;
    }
    out.flush()?;
    Ok(())
}
