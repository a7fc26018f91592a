//! `zseries`: classify and factor power series of the form
//! `p^n + p^m βx + αx² + …` in Z[[x]].
//!
//! Exit codes: 0 decided, 1 no factorization (factor on an irreducible or
//! undecided input, or a failed verify), 2 bad input, 3 undecided.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use zseries::classify::{
    classify_general, classify_quadratic_at, QuadInput, Verdict, VerdictKind, DEFAULT_TERMS,
    MAX_TERMS,
};
use zseries::oracle::{verify_factorization, VerificationReport};
use zseries::padics::{is_square_zp, lift_roots_mod_pk};
use zseries::report::{join, ClassifyReport};
use zseries::series::normalize_head;
use zseries::{Error, TruncSeries};

const EXIT_DECIDED: u8 = 0;
const EXIT_NO_FACTORS: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "zseries", version, about = "Reducibility of integer power series in Z[[x]]", args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Same as `batch --file FILE`.
    #[arg(long, value_name = "FILE")]
    batch: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide reducibility of p^n + p^m βx + αx² (+ tail), or of an explicit series.
    Classify(ClassifyArgs),
    /// Print a verified factor pair for a reducible input.
    Factor(FactorArgs),
    /// Square class of an integer in Z_p.
    Square(SquareArgs),
    /// Roots of A y² + B y + C modulo p^k.
    Roots(RootsArgs),
    /// Replace p + a₁x + … by an associate whose coefficients 2..=t vanish.
    Normalize(NormalizeArgs),
    /// Check target ≡ a·b from three JSON files of decimal strings.
    Verify(VerifyArgs),
    /// Classify one input per line of a file, in parallel; JSON lines out.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Clone)]
struct InputArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, conflicts_with = "beta_zero")]
    m: Option<u32>,
    #[arg(long)]
    beta_zero: bool,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_big)]
    beta: Option<BigInt>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_big)]
    alpha: Option<BigInt>,
    /// Coefficients c₃, c₄, … of the tail.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_big)]
    tail: Vec<BigInt>,
    /// An explicit series f₀,f₁,… instead of the structured flags.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_big,
          conflicts_with_all = ["n", "m", "beta_zero", "beta", "alpha", "tail"])]
    coeffs: Vec<BigInt>,
    /// Prime to try first when factoring f₀ (with --coeffs).
    #[arg(long)]
    p_hint: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TERMS)]
    terms: usize,
}

#[derive(Args, Clone)]
struct ClassifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct FactorArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Also write PREFIX.a.json, PREFIX.b.json and PREFIX.target.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SquareArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_big)]
    d: BigInt,
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct RootsArgs {
    #[arg(long = "A", allow_hyphen_values = true, value_parser = parse_big)]
    a: BigInt,
    #[arg(long = "B", allow_hyphen_values = true, value_parser = parse_big)]
    b: BigInt,
    #[arg(long = "C", allow_hyphen_values = true, value_parser = parse_big)]
    c: BigInt,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct NormalizeArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_big, required = true)]
    coeffs: Vec<BigInt>,
    #[arg(long)]
    t: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long)]
    file: PathBuf,
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| format!("not a decimal integer: {s:?}"))
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_BAD_INPUT,
            message: e.to_string(),
        }
    }
}

fn bad_input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_BAD_INPUT,
        message: message.into(),
    }
}

type CmdResult = Result<(String, u8), Failure>;

/// What the structured flags or `--coeffs` describe.
enum Input {
    Quadratic(QuadInput),
    Series(TruncSeries, Option<u64>),
}

impl InputArgs {
    fn resolve(&self) -> Result<Input, Failure> {
        if !(2..=MAX_TERMS).contains(&self.terms) {
            return Err(bad_input(format!("--terms must lie in [2, {MAX_TERMS}]")));
        }
        if !self.coeffs.is_empty() {
            let f = TruncSeries::new(self.coeffs.clone())?;
            return Ok(Input::Series(f, self.p.or(self.p_hint)));
        }
        let need = |name: &str| bad_input(format!("missing --{name}"));
        let p = self.p.ok_or_else(|| need("p"))?;
        let n = self.n.ok_or_else(|| need("n"))?;
        let alpha = self.alpha.clone().ok_or_else(|| need("alpha"))?;
        let q = if self.beta_zero {
            if self.beta.is_some() {
                return Err(bad_input("--beta conflicts with --beta-zero"));
            }
            QuadInput::beta_zero(p, n, alpha)
        } else {
            let m = self.m.ok_or_else(|| bad_input("missing --m (or --beta-zero)"))?;
            let beta = self.beta.clone().ok_or_else(|| need("beta"))?;
            QuadInput::new(p, n, Some(m), beta, alpha)
        };
        q.validate()?;
        Ok(Input::Quadratic(q.with_tail(self.tail.clone())))
    }
}

/// Verdict plus the series it was computed for.
struct Decision {
    input: Input,
    series: Option<TruncSeries>,
    verdict: Verdict,
}

fn decide(args: &InputArgs) -> Result<Decision, Failure> {
    match args.resolve()? {
        Input::Quadratic(q) if q.tail.is_empty() => {
            let verdict = classify_quadratic_at(&q, args.terms)?;
            Ok(Decision {
                input: Input::Quadratic(q),
                series: None,
                verdict,
            })
        }
        Input::Quadratic(q) => {
            let order = args.terms.max(2 + q.tail.len());
            let f = q.series(order)?;
            let verdict = classify_general(&f, Some(q.p))?;
            Ok(Decision {
                input: Input::Quadratic(q),
                series: Some(f),
                verdict,
            })
        }
        Input::Series(f, hint) => {
            let verdict = classify_general(&f, hint)?;
            Ok(Decision {
                input: Input::Series(f.clone(), hint),
                series: Some(f),
                verdict,
            })
        }
    }
}

fn exit_for(v: &Verdict) -> u8 {
    if v.kind == VerdictKind::Unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_DECIDED
    }
}

fn series_report(f: &TruncSeries, hint: Option<u64>, v: &Verdict) -> Result<Value, Failure> {
    let verification = match &v.factors {
        Some(pair) => {
            let r = verify_factorization(f, &pair.a, &pair.b)?;
            Some(verification_json(&r, false))
        }
        None => None,
    };
    Ok(json!({
        "input": { "coeffs": strings(f.coeffs()), "p_hint": hint },
        "verdict": {
            "kind": v.kind.as_str(),
            "rule": v.rule.tag(),
            "citation": v.rule.citation(),
            "assumption": v.assumption,
            "zp_reducible": v.zp_reducible,
            "verified_order": v.verified_order,
        },
        "discriminant": v.discriminant.as_ref().map(ToString::to_string),
        "certificate": v.certificate,
        "factors": v.factors.as_ref().map(|pair| json!({
            "a": strings(pair.a.coeffs()),
            "b": strings(pair.b.coeffs()),
            "order": pair.order,
            "engine": pair.engine.name(),
        })),
        "verification": verification,
    }))
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn verification_json(r: &VerificationReport, with_residuals: bool) -> Value {
    let mut out = json!({
        "order": r.order,
        "residuals_zero_through": r.residuals_zero_through,
        "a_proper": r.a_proper,
        "b_proper": r.b_proper,
        "passed": r.passed,
    });
    if with_residuals {
        out["residuals"] = json!(strings(&r.residuals));
    }
    out
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = format!("{} (rule {})\n  {}\n", v.kind.as_str(), v.rule.tag(), v.rule.citation());
    if let Some(z) = v.zp_reducible {
        out.push_str(&format!("  Z_p[x] head: {}\n", if z { "reducible" } else { "irreducible" }));
    }
    if let Some(a) = &v.assumption {
        out.push_str(&format!("  assumption: {a}\n"));
    }
    if let Some(pair) = &v.factors {
        out.push_str(&format!("  a = {}\n  b = {}\n", join(pair.a.coeffs()), join(pair.b.coeffs())));
        out.push_str(&format!("  verified through order {}\n", pair.order));
    }
    out
}

fn classify_output(d: &Decision, format: Format) -> Result<String, Failure> {
    match (&d.input, format) {
        (Input::Quadratic(q), Format::Json) => Ok(ClassifyReport::new(q, &d.verdict)?.to_json()),
        (Input::Quadratic(q), Format::Text) if q.tail.is_empty() => {
            Ok(ClassifyReport::new(q, &d.verdict)?.to_text())
        }
        (Input::Quadratic(q), Format::Text) => {
            let v = &d.verdict;
            let mut out = verdict_text(v);
            out.push_str(&format!(
                "  discriminant {}: {}\n",
                q.discriminant(),
                is_square_zp(&q.discriminant(), q.p)?.describe(q.p)
            ));
            Ok(out)
        }
        (Input::Series(f, hint), Format::Json) => Ok(pretty(&series_report(f, *hint, &d.verdict)?)),
        (Input::Series(..), Format::Text) => Ok(verdict_text(&d.verdict)),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn cmd_classify(args: &ClassifyArgs) -> CmdResult {
    let d = decide(&args.input)?;
    let text = classify_output(&d, args.format)?;
    Ok((text, exit_for(&d.verdict)))
}

fn write_series(path: &Path, v: &[BigInt]) -> Result<(), Failure> {
    let body = serde_json::to_string(&strings(v)).expect("strings serialize");
    fs::write(path, body + "\n").map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_factor(args: &FactorArgs) -> CmdResult {
    let d = decide(&args.input)?;
    let v = &d.verdict;
    let Some(pair) = v.factors.as_ref().filter(|_| v.kind == VerdictKind::Reducible) else {
        let text = match args.format {
            Format::Text => format!("{} (rule {}): no factorization\n", v.kind.as_str(), v.rule.tag()),
            Format::Json => pretty(&json!({
                "verdict": { "kind": v.kind.as_str(), "rule": v.rule.tag(), "citation": v.rule.citation(), "assumption": v.assumption },
            })),
        };
        return Ok((text, EXIT_NO_FACTORS));
    };
    let target = match (&d.series, &d.input) {
        (Some(f), _) => f.truncate(pair.order)?,
        (None, Input::Quadratic(q)) => q.series(pair.order)?,
        (None, Input::Series(f, _)) => f.clone(),
    };
    let report = verify_factorization(&target, &pair.a, &pair.b)?;
    if let Some(prefix) = &args.out {
        write_series(&with_suffix(prefix, ".a.json"), pair.a.coeffs())?;
        write_series(&with_suffix(prefix, ".b.json"), pair.b.coeffs())?;
        write_series(&with_suffix(prefix, ".target.json"), target.coeffs())?;
    }
    let text = match args.format {
        Format::Text => format!(
            "{} (rule {})\na = {}\nb = {}\nverification: residuals zero through order {} ({})\n",
            v.kind.as_str(),
            v.rule.tag(),
            join(pair.a.coeffs()),
            join(pair.b.coeffs()),
            report.residuals_zero_through.map_or("none".into(), |k| k.to_string()),
            if report.passed { "pass" } else { "FAIL" }
        ),
        Format::Json => pretty(&json!({
            "verdict": {
                "kind": v.kind.as_str(),
                "rule": v.rule.tag(),
                "citation": v.rule.citation(),
                "assumption": v.assumption,
            },
            "factors": {
                "a": strings(pair.a.coeffs()),
                "b": strings(pair.b.coeffs()),
                "order": pair.order,
                "engine": pair.engine.name(),
            },
            "verification": verification_json(&report, true),
        })),
    };
    let code = if report.passed { EXIT_DECIDED } else { EXIT_NO_FACTORS };
    Ok((text, code))
}

fn cmd_square(args: &SquareArgs) -> CmdResult {
    let class = is_square_zp(&args.d, args.p)?;
    let text = match args.format {
        Format::Text => class.describe(args.p) + "\n",
        Format::Json => pretty(&json!({ "d": args.d.to_string(), "p": args.p, "class": class })),
    };
    Ok((text, EXIT_DECIDED))
}

fn cmd_roots(args: &RootsArgs) -> CmdResult {
    let roots = lift_roots_mod_pk(&args.a, &args.b, &args.c, args.p, args.k)?;
    let text = match args.format {
        Format::Text if roots.is_empty() => "(none)\n".to_string(),
        Format::Text => strings(&roots).join(", ") + "\n",
        Format::Json => pretty(&json!({
            "modulus": zseries::arith::pow(args.p, args.k).to_string(),
            "roots": strings(&roots),
        })),
    };
    Ok((text, EXIT_DECIDED))
}

fn trimmed(v: &[BigInt]) -> Vec<BigInt> {
    let keep = v.iter().rposition(|c| c != &BigInt::from(0)).map_or(1, |i| i + 1);
    v[..keep].to_vec()
}

fn cmd_normalize(args: &NormalizeArgs) -> CmdResult {
    let degree = args.coeffs.len() - 1;
    let a = TruncSeries::from_poly(&args.coeffs, degree + args.t)?;
    let h = normalize_head(&a, args.p, args.t)?;
    let u = trimmed(h.unit.coeffs());
    let q = trimmed(h.associate.coeffs());
    let text = match args.format {
        Format::Text => format!("u = {}\nq = {}\nlambda = {}\n", join(&u), join(&q), h.lambda),
        Format::Json => pretty(&json!({
            "u": strings(&u),
            "q": strings(&q),
            "lambda": h.lambda.to_string(),
            "order": h.associate.order(),
        })),
    };
    Ok((text, EXIT_DECIDED))
}

fn read_series(path: &Path) -> Result<TruncSeries, Failure> {
    let body = fs::read_to_string(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
    let raw: Vec<String> = serde_json::from_str(&body)
        .map_err(|e| bad_input(format!("{}: expected a JSON array of decimal strings: {e}", path.display())))?;
    let coeffs = raw
        .iter()
        .map(|s| parse_big(s).map_err(bad_input))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TruncSeries::new(coeffs)?)
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let target = read_series(&args.target)?;
    let a = read_series(&args.a)?;
    let b = read_series(&args.b)?;
    let r = verify_factorization(&target, &a, &b)?;
    let text = match args.format {
        Format::Text => format!(
            "{}: residuals zero through order {} of {}, proper constants: {}/{}\n",
            if r.passed { "pass" } else { "fail" },
            r.residuals_zero_through.map_or("none".into(), |k| k.to_string()),
            r.order,
            r.a_proper,
            r.b_proper
        ),
        Format::Json => pretty(&verification_json(&r, true)),
    };
    Ok((text, if r.passed { EXIT_DECIDED } else { EXIT_NO_FACTORS }))
}

fn batch_line(line: &str) -> (Value, u8) {
    let mut words = line.split_whitespace().peekable();
    words.next_if_eq(&"classify");
    let argv = std::iter::once("classify").chain(words);
    #[derive(Parser)]
    struct Line {
        #[command(flatten)]
        input: InputArgs,
    }
    let parsed = match Line::try_parse_from(argv) {
        Ok(l) => l,
        Err(e) => return (json!({ "error": e.to_string().trim() }), EXIT_BAD_INPUT),
    };
    let result = decide(&parsed.input).and_then(|d| {
        let value = match &d.input {
            Input::Quadratic(q) => serde_json::to_value(ClassifyReport::new(q, &d.verdict)?)
                .expect("reports serialize"),
            Input::Series(f, hint) => series_report(f, *hint, &d.verdict)?,
        };
        Ok((value, exit_for(&d.verdict)))
    });
    result.unwrap_or_else(|f| (json!({ "error": f.message }), f.code))
}

fn cmd_batch(args: &BatchArgs) -> CmdResult {
    let body = fs::read_to_string(&args.file)
        .map_err(|e| bad_input(format!("{}: {e}", args.file.display())))?;
    let lines: Vec<(usize, &str)> = body
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let results: Vec<(usize, Value, u8)> = lines
        .par_iter()
        .map(|&(i, l)| {
            let (v, code) = batch_line(l);
            (i + 1, v, code)
        })
        .collect();
    let mut out = String::new();
    let mut worst = EXIT_DECIDED;
    for (line, value, code) in results {
        let record = json!({ "line": line, "exit": code, "result": value });
        out.push_str(&serde_json::to_string(&record).expect("JSON values serialize"));
        out.push('\n');
        worst = worst.max(code);
    }
    Ok((out, worst))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match (&cli.command, cli.batch) {
        (Some(Command::Classify(a)), _) => cmd_classify(a),
        (Some(Command::Factor(a)), _) => cmd_factor(a),
        (Some(Command::Square(a)), _) => cmd_square(a),
        (Some(Command::Roots(a)), _) => cmd_roots(a),
        (Some(Command::Normalize(a)), _) => cmd_normalize(a),
        (Some(Command::Verify(a)), _) => cmd_verify(a),
        (Some(Command::Batch(a)), _) => cmd_batch(a),
        (None, Some(file)) => cmd_batch(&BatchArgs { file }),
        (None, None) => Err(bad_input("expected a subcommand or --batch FILE; see --help")),
    };
    match result {
        Ok((text, code)) => {
            let mut out = io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
