//! Command-line front end: word parsing, command dispatch, and
//! machine-readable reports.
//!
//! Every command produces a report with a `checks` array; each check names
//! the mathematical statement it exercises and says whether it held. Exit
//! codes: 0 when every check passes, 1 when a property fails, 2 on usage
//! errors. JSON output is deterministic: the same configuration and seed
//! produce identical bytes.

use std::io::Read;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::arcs::{GenKind, GoeritzGen, GoeritzWord, HandlebodyModel};
use crate::braid2::{B2Gen, PlanarModel};
use crate::freegroup::FWord;
use crate::numerics::{
    qt, stage5, worrisome, BumpProfile, GridSpec, KappaProfile, RadialProfile,
};
use crate::numerics::mat::{vec_norm, Mat};
use crate::numerics::{finite_difference_jacobian, lambda_jacobian, lambda_map};
use crate::surface::{parse_word as parse_surface_word, split_exponent, tokenize};
use crate::width::{canonical, thin, Schedule};

/// Entry point for the `goeritz` binary.
pub fn main() -> ! {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(cli));
}

#[derive(Parser)]
#[command(
    name = "goeritz",
    version,
    about = "Arc actions, braid relations, width certificates, and grid-checked damping estimates for genus-g handlebody symmetries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word: arc action with --genus, braid images with --holes.
    Eval(EvalArgs),
    /// Factor a target arc into anchored generators and a possible rotor.
    Factor(FactorArgs),
    /// Split a word into an anchored part and a freewheeling residual.
    Decompose(WordArgs),
    /// Compute the canonical meridian-crossing schedule and its width.
    Width(WordArgs),
    /// Rewrite a word in thin position: same arc, schedule of width <= 1.
    Thin(WordArgs),
    /// Check the defining relations of the pair braid group of the holed disk.
    Relations(RelationsArgs),
    /// Run the grid-based damping estimates and singularity scans.
    AppendixCheck(AppendixArgs),
    /// Run the seeded random property suite across all modules.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    /// Handlebody genus; selects the arc action.
    #[arg(long)]
    genus: Option<usize>,
    /// Number of holes in the disk; selects the braid action.
    #[arg(long)]
    holes: Option<usize>,
    /// Word to evaluate; omit to read one word per line from stdin.
    #[arg(long)]
    word: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct FactorArgs {
    #[arg(long)]
    genus: usize,
    /// Target arc as a surface-group word, e.g. "a1 b2^-1".
    #[arg(long)]
    target: String,
    /// Target end-exchange parity, 0 or 1.
    #[arg(long, default_value_t = 0)]
    parity: u8,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct WordArgs {
    #[arg(long)]
    genus: usize,
    /// Word over a1, a1', r, f1, ...; omit to read words from stdin.
    #[arg(long)]
    word: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct RelationsArgs {
    #[arg(long, default_value_t = 3)]
    holes: usize,
    /// Random parity-homomorphism pairs to test.
    #[arg(long, default_value_t = 50)]
    cases: usize,
    #[arg(long, env = "GOERITZ_SEED", default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct AppendixArgs {
    /// Shear strength of the matrix path [[1, r], [0, 1]].
    #[arg(long, default_value_t = 10.0)]
    r: f64,
    /// Bump profile scale.
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Committed bound for the bump profile slope s*phi'(s).
    #[arg(long, default_value_t = 4.0)]
    b0: f64,
    /// Slope bound for the slow profile in the determinant scan.
    #[arg(long, default_value_t = 0.009)]
    kappa: f64,
    /// Grid resolution RADIALxANGULARxTIME.
    #[arg(long, default_value = "64x64x16")]
    grid: String,
    /// Tolerance for the norm and factorization checks.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Finite-difference and factorization sample count.
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long, env = "GOERITZ_SEED", default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 2)]
    genus: usize,
    #[arg(long, default_value_t = 3)]
    holes: usize,
    #[arg(long, env = "GOERITZ_SEED", default_value_t = 7)]
    seed: u64,
    /// Random cases per property.
    #[arg(long, default_value_t = 25)]
    cases: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Check { name: name.to_string(), pass, detail }
    }
}

struct Report {
    command: &'static str,
    config: Value,
    result: Value,
    checks: Vec<Check>,
}

impl Report {
    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "command": self.command,
            "config": self.config,
            "result": self.result,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    fn render_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        out.push_str(&format!("config: {}\n", self.config));
        out.push_str(&format!("result: {}\n", self.result));
        for check in &self.checks {
            let tag = if check.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{tag}] {} -- {}\n", check.name, check.detail));
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        if failed == 0 {
            out.push_str(&format!("ok ({} checks)\n", self.checks.len()));
        } else {
            out.push_str(&format!("FAILED ({failed} of {} checks)\n", self.checks.len()));
        }
        out
    }
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.render_text()),
    }
}

fn usage_error(message: &str) -> i32 {
    eprintln!("error: {message}");
    2
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Factor(args) => run_factor(args),
        Command::Decompose(args) => run_word_command("decompose", args, decompose_report),
        Command::Width(args) => run_word_command("width", args, width_report),
        Command::Thin(args) => run_word_command("thin", args, thin_report),
        Command::Relations(args) => run_relations(args),
        Command::AppendixCheck(args) => run_appendix(args),
        Command::Selftest(args) => run_selftest(args),
    }
}

/// Words from --word, or one per nonempty stdin line.
fn word_sources(flag: Option<String>) -> Result<Vec<String>, String> {
    if let Some(word) = flag {
        return Ok(vec![word]);
    }
    let mut buffer = String::new();
    std::io::stdin()
        .read_to_string(&mut buffer)
        .map_err(|e| format!("could not read stdin: {e}"))?;
    let words: Vec<String> = buffer
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(str::to_string)
        .collect();
    if words.is_empty() {
        return Err("no word given: pass --word or pipe one word per line".to_string());
    }
    Ok(words)
}

fn finish(reports: &[Report]) -> i32 {
    if reports.iter().all(Report::all_pass) {
        0
    } else {
        1
    }
}

// ---------------------------------------------------------------- eval

fn run_eval(args: EvalArgs) -> i32 {
    let words = match word_sources(args.word) {
        Ok(words) => words,
        Err(message) => return usage_error(&message),
    };
    match (args.genus, args.holes) {
        (Some(genus), None) => {
            let model = match HandlebodyModel::new(genus) {
                Ok(model) => model,
                Err(err) => return usage_error(&err.to_string()),
            };
            let mut reports = Vec::new();
            for text in &words {
                match eval_arc_report(&model, text) {
                    Ok(report) => {
                        emit(&report, args.format);
                        reports.push(report);
                    }
                    Err(message) => return usage_error(&message),
                }
            }
            finish(&reports)
        }
        (None, Some(holes)) => {
            let model = match PlanarModel::new(holes) {
                Ok(model) => model,
                Err(err) => return usage_error(&err.to_string()),
            };
            let mut reports = Vec::new();
            for text in &words {
                match eval_braid_report(&model, text) {
                    Ok(report) => {
                        emit(&report, args.format);
                        reports.push(report);
                    }
                    Err(message) => return usage_error(&message),
                }
            }
            finish(&reports)
        }
        _ => usage_error("pass exactly one of --genus (arc action) or --holes (braid action)"),
    }
}

fn eval_arc_report(model: &HandlebodyModel, text: &str) -> Result<Report, String> {
    let word = GoeritzWord::parse(model.genus(), text).map_err(|e| e.to_string())?;
    let arc = model.tau(&word).map_err(|e| e.to_string())?;
    let freewheeling = model.is_freewheeling(&word).map_err(|e| e.to_string())?;
    let round_trip = word.concat(&word.inverse_word()).map_err(|e| e.to_string())?;
    let trivial = model.is_freewheeling(&round_trip).map_err(|e| e.to_string())?;
    Ok(Report {
        command: "eval",
        config: json!({ "genus": model.genus(), "word": text }),
        result: json!({
            "arc": arc.w().to_string(),
            "parity": arc.parity(),
            "freewheeling": freewheeling,
            "length": word.len(),
        }),
        checks: vec![Check::new(
            "a word followed by its formal inverse fixes the reference arc",
            trivial,
            format!("checked on a word of length {}", word.len()),
        )],
    })
}

fn parse_braid_word(p: usize, text: &str) -> Result<Vec<(B2Gen, i32)>, String> {
    let mut out = Vec::new();
    for (offset, token) in tokenize(text) {
        let (base, exponent) = split_exponent(token, offset).map_err(|e| e.to_string())?;
        if base == "1" {
            continue;
        }
        let exponent = i32::try_from(exponent)
            .map_err(|_| format!("byte {offset}: exponent out of range in `{token}`"))?;
        if base == "r" {
            out.push((B2Gen::Rotor, exponent));
            continue;
        }
        let (head, index_text) = base.split_at(1);
        let kind = match head {
            "a" => B2Gen::Anchored(0),
            "f" => B2Gen::Freewheel(0),
            _ => return Err(format!("byte {offset}: unknown token `{token}`")),
        };
        let index: usize = index_text
            .parse()
            .map_err(|_| format!("byte {offset}: unknown token `{token}`"))?;
        if index == 0 {
            return Err(format!("byte {offset}: index must be >= 1 in `{token}`"));
        }
        if index > p {
            return Err(format!(
                "byte {offset}: hole index {index} out of range 1..={p} in `{token}`"
            ));
        }
        let gen = match kind {
            B2Gen::Anchored(_) => B2Gen::Anchored(index),
            B2Gen::Freewheel(_) => B2Gen::Freewheel(index),
            B2Gen::Rotor => unreachable!(),
        };
        out.push((gen, exponent));
    }
    Ok(out)
}

fn eval_braid_report(model: &PlanarModel, text: &str) -> Result<Report, String> {
    let p = model.boundary_count();
    let word = parse_braid_word(p, text)?;
    let elt = model.evaluate(word.iter().copied()).map_err(|e| e.to_string())?;
    let mut images = Vec::new();
    for i in 1..=p {
        let circle = model.circle(i).map_err(|e| e.to_string())?;
        let image = elt.apply(&circle).map_err(|e| e.to_string())?;
        images.push(json!({ "loop": format!("c{i}"), "image": image.to_string() }));
    }
    for (name, lasso) in [("u0", model.point0()), ("u1", model.point1())] {
        let image = elt.apply(&lasso).map_err(|e| e.to_string())?;
        images.push(json!({ "loop": name, "image": image.to_string() }));
    }
    let certified = elt.validate().is_ok();
    let inverse_trivial = elt.compose(&elt.inverse()).map_err(|e| e.to_string())?.is_identity();
    Ok(Report {
        command: "eval",
        config: json!({ "holes": p, "word": text }),
        result: json!({
            "parity": elt.parity(),
            "identity": elt.is_identity(),
            "images": images,
        }),
        checks: vec![
            Check::new(
                "the braid fixes the boundary word of the marked disk",
                certified,
                "automorphism certificate and boundary word verified".to_string(),
            ),
            Check::new(
                "a braid composed with its inverse is the identity",
                inverse_trivial,
                format!("checked on a word of length {}", text.split_whitespace().count()),
            ),
        ],
    })
}

// -------------------------------------------------------------- factor

fn run_factor(args: FactorArgs) -> i32 {
    if args.parity > 1 {
        return usage_error("--parity must be 0 or 1");
    }
    let model = match HandlebodyModel::new(args.genus) {
        Ok(model) => model,
        Err(err) => return usage_error(&err.to_string()),
    };
    let raw = match parse_surface_word(args.genus, &args.target) {
        Ok(raw) => raw,
        Err(err) => return usage_error(&err.to_string()),
    };
    let report = match factor_report(&model, &raw, args.parity == 1, &args.target) {
        Ok(report) => report,
        Err(message) => return usage_error(&message),
    };
    emit(&report, args.format);
    finish(&[report])
}

fn factor_report(
    model: &HandlebodyModel,
    raw: &FWord,
    swapped: bool,
    target_text: &str,
) -> Result<Report, String> {
    let target = model.arc(raw, swapped).map_err(|e| e.to_string())?;
    let word = model.factor(&target).map_err(|e| e.to_string())?;
    let reached = model.tau(&word).map_err(|e| e.to_string())?;
    let round_trip = model.arc_eq(&reached, &target).map_err(|e| e.to_string())?;
    let anchored_only = word.gens().iter().enumerate().all(|(k, gen)| match gen.kind {
        GenKind::Anchored(_) | GenKind::AnchoredPrime(_) => true,
        GenKind::Rotor => k + 1 == word.len(),
        GenKind::Freewheel(_) => false,
    });
    Ok(Report {
        command: "factor",
        config: json!({
            "genus": model.genus(),
            "target": target_text,
            "parity": target.parity(),
        }),
        result: json!({
            "word": word.to_string(),
            "length": word.len(),
            "arc": target.w().to_string(),
        }),
        checks: vec![
            Check::new(
                "the factored word carries the reference arc to the target",
                round_trip,
                format!("target ({}, {})", target.w(), target.parity()),
            ),
            Check::new(
                "the factorization uses anchored twists plus at most one final rotor",
                anchored_only,
                format!("{} letters", word.len()),
            ),
        ],
    })
}

// --------------------------------------- decompose / width / thin

fn run_word_command(
    _name: &'static str,
    args: WordArgs,
    build: fn(&HandlebodyModel, &str) -> Result<Report, String>,
) -> i32 {
    let model = match HandlebodyModel::new(args.genus) {
        Ok(model) => model,
        Err(err) => return usage_error(&err.to_string()),
    };
    let words = match word_sources(args.word) {
        Ok(words) => words,
        Err(message) => return usage_error(&message),
    };
    let mut reports = Vec::new();
    for text in &words {
        match build(&model, text) {
            Ok(report) => {
                emit(&report, args.format);
                reports.push(report);
            }
            Err(message) => return usage_error(&message),
        }
    }
    finish(&reports)
}

fn decompose_report(model: &HandlebodyModel, text: &str) -> Result<Report, String> {
    let word = GoeritzWord::parse(model.genus(), text).map_err(|e| e.to_string())?;
    let (anchored_part, residual) = model.decompose(&word).map_err(|e| e.to_string())?;
    let residual_freewheeling = model.is_freewheeling(&residual).map_err(|e| e.to_string())?;
    let same_arc = model
        .arc_eq(
            &model.tau(&anchored_part).map_err(|e| e.to_string())?,
            &model.tau(&word).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
    let product = anchored_part.concat(&residual).map_err(|e| e.to_string())?;
    let recombines = product.reduced() == word.reduced();
    Ok(Report {
        command: "decompose",
        config: json!({ "genus": model.genus(), "word": text }),
        result: json!({
            "anchored_part": anchored_part.to_string(),
            "residual": residual.to_string(),
            "residual_reduced": residual.reduced().to_string(),
        }),
        checks: vec![
            Check::new(
                "the residual fixes the reference arc",
                residual_freewheeling,
                format!("residual length {}", residual.len()),
            ),
            Check::new(
                "the anchored part matches the input on the reference arc",
                same_arc,
                format!("anchored part length {}", anchored_part.len()),
            ),
            Check::new(
                "anchored part times residual reduces to the input word",
                recombines,
                format!("product length {} before reduction", product.len()),
            ),
        ],
    })
}

fn width_report(model: &HandlebodyModel, text: &str) -> Result<Report, String> {
    let word = GoeritzWord::parse(model.genus(), text).map_err(|e| e.to_string())?;
    let schedule = canonical(model, &word).map_err(|e| e.to_string())?;
    let balanced = Schedule::try_new(model.genus(), schedule.events().to_vec()).is_ok();
    Ok(Report {
        command: "width",
        config: json!({ "genus": model.genus(), "word": text }),
        result: json!({
            "width": schedule.width(),
            "events": schedule.events().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        }),
        checks: vec![
            Check::new(
                "the canonical schedule is balanced at every meridian disk",
                balanced,
                format!("{} events", schedule.len()),
            ),
            Check::new(
                "the canonical schedule of a generator word has width at most 1",
                schedule.width() <= 1,
                format!("width {}", schedule.width()),
            ),
        ],
    })
}

fn thin_report(model: &HandlebodyModel, text: &str) -> Result<Report, String> {
    let word = GoeritzWord::parse(model.genus(), text).map_err(|e| e.to_string())?;
    let (rewritten, schedule) = thin(model, &word).map_err(|e| e.to_string())?;
    let same_arc = model
        .arc_eq(
            &model.tau(&rewritten).map_err(|e| e.to_string())?,
            &model.tau(&word).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
    Ok(Report {
        command: "thin",
        config: json!({ "genus": model.genus(), "word": text }),
        result: json!({
            "rewritten": rewritten.to_string(),
            "width": schedule.width(),
            "events": schedule.len(),
        }),
        checks: vec![
            Check::new(
                "the rewritten word matches the input on the reference arc",
                same_arc,
                format!("rewritten length {}", rewritten.len()),
            ),
            Check::new(
                "the thin rewrite has a schedule of width at most 1",
                schedule.width() <= 1,
                format!("width {}", schedule.width()),
            ),
        ],
    })
}

// ----------------------------------------------------------- relations

// Braids act on the free group with exponential image growth, so random
// sampling keeps words short; parity and composition bookkeeping are
// insensitive to length.
fn random_braid_word(rng: &mut StdRng, p: usize, len: usize) -> Vec<(B2Gen, i32)> {
    (0..len)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let gen = match rng.gen_range(0..3) {
                0 => B2Gen::Rotor,
                1 => B2Gen::Anchored(rng.gen_range(1..=p)),
                _ => B2Gen::Freewheel(rng.gen_range(1..=p)),
            };
            (gen, sign)
        })
        .collect()
}

fn run_relations(args: RelationsArgs) -> i32 {
    let report = match relations_report(args.holes, args.cases, args.seed) {
        Ok(report) => report,
        Err(message) => return usage_error(&message),
    };
    emit(&report, args.format);
    finish(&[report])
}

fn relations_report(holes: usize, cases: usize, seed: u64) -> Result<Report, String> {
    let model = PlanarModel::new(holes).map_err(|e| e.to_string())?;
    let rotor = model.generator(B2Gen::Rotor).map_err(|e| e.to_string())?;
    let rotor_squared = rotor.compose(&rotor).map_err(|e| e.to_string())?;
    let anchored_product = model
        .evaluate((1..=holes).map(|i| (B2Gen::Anchored(i), 1)))
        .map_err(|e| e.to_string())?;
    let relation = rotor_squared == anchored_product;

    let mut iterates = true;
    for k in 2..=4 {
        let lhs = rotor.pow(2 * k).map_err(|e| e.to_string())?;
        let rhs = anchored_product.pow(k).map_err(|e| e.to_string())?;
        iterates &= lhs == rhs;
    }

    let mut rotor_free = true;
    let mut power = model.identity();
    for _ in 1..=10 {
        power = power.compose(&rotor).map_err(|e| e.to_string())?;
        rotor_free &= !power.is_identity();
    }

    let mut rng = StdRng::seed_from_u64(seed);
    let mut parity_hom = true;
    for _ in 0..cases {
        let len_u = rng.gen_range(0..=4);
        let u = model
            .evaluate(random_braid_word(&mut rng, holes, len_u))
            .map_err(|e| e.to_string())?;
        let len_v = rng.gen_range(0..=4);
        let v = model
            .evaluate(random_braid_word(&mut rng, holes, len_v))
            .map_err(|e| e.to_string())?;
        let uv = u.compose(&v).map_err(|e| e.to_string())?;
        parity_hom &= uv.parity() == (u.parity() + v.parity()) % 2;
    }

    Ok(Report {
        command: "relations",
        config: json!({ "holes": holes, "cases": cases, "seed": seed }),
        result: json!({
            "rotor_parity": rotor.parity(),
            "anchored_product_parity": anchored_product.parity(),
        }),
        checks: vec![
            Check::new(
                "rotor squared equals the ordered product of the anchored hole pushes",
                relation,
                format!("p = {holes}"),
            ),
            Check::new(
                "even rotor powers equal iterates of the full anchored product",
                iterates,
                "k = 2..4".to_string(),
            ),
            Check::new(
                "the rotor has infinite order",
                rotor_free,
                "powers 1..=10 are all nontrivial".to_string(),
            ),
            Check::new(
                "end-exchange parity is a homomorphism onto Z/2",
                parity_hom,
                format!("{cases} random pairs"),
            ),
        ],
    })
}

// ------------------------------------------------------ appendix-check

fn plane_directions(count: usize) -> Vec<Vec<f64>> {
    (0..count.max(1))
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / count.max(1) as f64;
            vec![theta.cos(), theta.sin()]
        })
        .collect()
}

fn run_appendix(args: AppendixArgs) -> i32 {
    let grid = match GridSpec::from_str(&args.grid) {
        Ok(grid) => grid,
        Err(err) => return usage_error(&err.to_string()),
    };
    if !(args.tol > 0.0) {
        return usage_error("--tol must be positive");
    }
    let report = match appendix_report(&args, grid) {
        Ok(report) => report,
        Err(message) => return usage_error(&message),
    };
    emit(&report, args.format);
    finish(&[report])
}

fn appendix_report(args: &AppendixArgs, grid: GridSpec) -> Result<Report, String> {
    let mut checks = Vec::new();
    let mut result = serde_json::Map::new();
    result.insert("grid".to_string(), json!(grid.to_string()));

    // Bump profile: the slope check is the constructor's contract, so a
    // failed construction is a failed check, not a usage error.
    let bump = match BumpProfile::new(args.eps, args.b0) {
        Ok(bump) => {
            checks.push(Check::new(
                "the bump slope s*phi'(s) stays below the committed bound b0",
                true,
                format!("grid sup {:.6} <= b0 = {}", bump.grid_slope_sup(), args.b0),
            ));
            result.insert("slope_sup".to_string(), json!(bump.grid_slope_sup()));
            Some(bump)
        }
        Err(err) => {
            if !(args.eps > 0.0 && args.b0 > 0.0) {
                return Err(err.to_string());
            }
            checks.push(Check::new(
                "the bump slope s*phi'(s) stays below the committed bound b0",
                false,
                err.to_string(),
            ));
            None
        }
    };

    if let Some(bump) = &bump {
        // Jacobian norm scan for the damping map.
        let mut max_norm: f64 = 0.0;
        let times: Vec<f64> = (0..grid.time.max(2))
            .map(|k| k as f64 / (grid.time.max(2) - 1) as f64)
            .collect();
        let mut rng = StdRng::seed_from_u64(args.seed);
        for n in [2usize, 3] {
            let dirs: Vec<Vec<f64>> = if n == 2 {
                plane_directions(grid.angular)
            } else {
                (0..grid.angular)
                    .map(|_| {
                        loop {
                            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                            let norm = vec_norm(&v);
                            if norm >= 0.3 {
                                break v.iter().map(|x| x / norm).collect();
                            }
                        }
                    })
                    .collect()
            };
            for &t in &times {
                for s in bump.radial_samples(grid.radial) {
                    for dir in &dirs {
                        let y: Vec<f64> = dir.iter().map(|&d| s * d).collect();
                        let jac = lambda_jacobian(bump, t, &y).map_err(|e| e.to_string())?;
                        max_norm = max_norm.max(jac.op_norm());
                    }
                }
            }
        }
        checks.push(Check::new(
            "the damping jacobian operator norm stays below 1 + b0 on the grid",
            max_norm <= 1.0 + args.b0 + args.tol,
            format!("max norm {:.6} vs 1 + b0 = {}", max_norm, 1.0 + args.b0),
        ));
        result.insert("jacobian_norm_max".to_string(), json!(max_norm));

        // Analytic Jacobian vs centered differences.
        let mut max_rel: f64 = 0.0;
        for _ in 0..args.cases {
            let n = if rng.gen_bool(0.5) { 2 } else { 3 };
            let t: f64 = rng.gen_range(0.0..=1.0);
            let y: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(-1.5 * args.eps..1.5 * args.eps))
                .collect();
            let analytic = lambda_jacobian(bump, t, &y).map_err(|e| e.to_string())?;
            let fd = finite_difference_jacobian(
                |z| lambda_map(bump, t, z).expect("valid radius"),
                &y,
                1e-6 * args.eps,
            );
            let rel = analytic.sub(&fd).frobenius() / analytic.frobenius().max(1.0);
            max_rel = max_rel.max(rel);
        }
        checks.push(Check::new(
            "the analytic damping jacobian matches centered finite differences",
            max_rel < 1e-5,
            format!("max relative error {max_rel:.3e} over {} samples", args.cases),
        ));
        result.insert("fd_max_rel_error".to_string(), json!(max_rel));

        // Planar shear scan and the threshold prediction.
        let shear = worrisome(args.r, bump, &grid);
        let predicted = args.r * shear.sup_slope / 2.0;
        let (shear_pass, shear_detail) = if predicted > 1.05 {
            (shear.witness, format!("predicted singular (r*sup/2 = {predicted:.3}), min {:.4}", shear.min_value))
        } else if predicted < 0.95 {
            (!shear.witness, format!("predicted regular (r*sup/2 = {predicted:.3}), min {:.4}", shear.min_value))
        } else {
            (true, format!("near threshold (r*sup/2 = {predicted:.3}), min {:.4}", shear.min_value))
        };
        checks.push(Check::new(
            "the damped shear is singular exactly when r*sup(s*phi') exceeds 2",
            shear_pass,
            shear_detail,
        ));
        result.insert(
            "worrisome".to_string(),
            json!({
                "r": shear.r,
                "min_value": shear.min_value,
                "argmin_radius": shear.argmin_radius,
                "argmin_angle": shear.argmin_angle,
                "witness": shear.witness,
                "sup_slope": shear.sup_slope,
            }),
        );

        // Determinant scan with the bump profile along the shear path.
        let path = |_: f64| Mat::from_rows(&[vec![1.0, args.r], vec![0.0, 1.0]]);
        let unguarded = stage5(path, bump, &grid).map_err(|e| e.to_string())?;
        checks.push(Check::new(
            "the bump-profile determinant scan is positive whenever its hypothesis holds",
            !unguarded.precondition_ok || unguarded.min_det > 0.0,
            format!(
                "kappa-hypothesis {}, min det {:.4}",
                if unguarded.precondition_ok { "holds" } else { "fails" },
                unguarded.min_det
            ),
        ));
        let consistent = (unguarded.min_det - shear.min_value).abs()
            <= 1e-9 * (1.0 + shear.min_value.abs());
        checks.push(Check::new(
            "the path determinant scan at t = 1 reproduces the planar shear coefficient",
            consistent,
            format!("min det {:.6} vs min coefficient {:.6}", unguarded.min_det, shear.min_value),
        ));
        result.insert(
            "stage5_bump".to_string(),
            json!({
                "kappa": unguarded.kappa,
                "kappa1": unguarded.kappa1,
                "kappa2": unguarded.kappa2,
                "precondition_ok": unguarded.precondition_ok,
                "min_det": unguarded.min_det,
                "nonsingular": unguarded.nonsingular,
            }),
        );
    }

    // Slow profile and the guarded determinant scan.
    match KappaProfile::new(args.kappa) {
        Ok(slow) => {
            checks.push(Check::new(
                "the slow profile keeps s*phi'(s) strictly below kappa",
                slow.grid_slope_sup() < args.kappa,
                format!("grid sup {:.6} < kappa = {}", slow.grid_slope_sup(), args.kappa),
            ));
            let path = |_: f64| Mat::from_rows(&[vec![1.0, args.r], vec![0.0, 1.0]]);
            let guarded = stage5(path, &slow, &grid).map_err(|e| e.to_string())?;
            checks.push(Check::new(
                "kappa below kappa1*kappa2 forces positive fiber determinants",
                !guarded.precondition_ok || guarded.min_det > 0.0,
                format!(
                    "kappa = {}, kappa1*kappa2 = {:.6}, min det {:.4}",
                    args.kappa,
                    guarded.kappa1 * guarded.kappa2,
                    guarded.min_det
                ),
            ));
            result.insert(
                "stage5_guarded".to_string(),
                json!({
                    "kappa": guarded.kappa,
                    "kappa1": guarded.kappa1,
                    "kappa2": guarded.kappa2,
                    "precondition_ok": guarded.precondition_ok,
                    "min_det": guarded.min_det,
                    "nonsingular": guarded.nonsingular,
                }),
            );
        }
        Err(err) => return Err(err.to_string()),
    }

    // QT factorization on random matrices.
    let mut rng = StdRng::seed_from_u64(args.seed.wrapping_add(1));
    let mut max_defect: f64 = 0.0;
    let mut factored = 0usize;
    let mut attempts = 0usize;
    while factored < args.cases && attempts < args.cases * 20 {
        attempts += 1;
        let n = rng.gen_range(2..=4);
        let rows: Vec<Vec<f64>> =
            (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let a = Mat::from_rows(&rows);
        let Ok((q, t)) = qt(&a) else { continue };
        factored += 1;
        let orth = q.transpose().mul(&q).sub(&Mat::identity(n)).frobenius();
        let recon = q.mul(&t).sub(&a).frobenius() / (1.0 + a.frobenius());
        let positive = t.is_upper_triangular() && (0..n).all(|i| t.get(i, i) > 0.0);
        let defect = if positive { orth.max(recon) } else { f64::INFINITY };
        max_defect = max_defect.max(defect);
    }
    checks.push(Check::new(
        "random matrices factor as orthogonal times positive upper triangular",
        factored == args.cases && max_defect <= args.tol,
        format!("{factored} matrices, max defect {max_defect:.3e}"),
    ));
    result.insert("qt_max_defect".to_string(), json!(max_defect));

    Ok(Report {
        command: "appendix-check",
        config: json!({
            "r": args.r,
            "eps": args.eps,
            "b0": args.b0,
            "kappa": args.kappa,
            "grid": grid.to_string(),
            "tol": args.tol,
            "cases": args.cases,
            "seed": args.seed,
        }),
        result: Value::Object(result),
        checks,
    })
}

// ------------------------------------------------------------ selftest

fn random_goeritz_word(rng: &mut StdRng, genus: usize, len: usize) -> GoeritzWord {
    let mut gens = Vec::with_capacity(len);
    for _ in 0..len {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let kind = match rng.gen_range(0..4) {
            0 => GenKind::Anchored(rng.gen_range(1..=genus)),
            1 => GenKind::AnchoredPrime(rng.gen_range(1..=genus)),
            2 => GenKind::Rotor,
            _ => GenKind::Freewheel(rng.gen_range(1..=2 * genus)),
        };
        gens.push(GoeritzGen::new(kind, sign));
    }
    GoeritzWord::new(genus, gens).expect("generators are in range")
}

fn random_reduced_surface_word(rng: &mut StdRng, genus: usize, len: usize) -> FWord {
    let rank = 2 * genus;
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let magnitude = rng.gen_range(1..=rank) as i32;
        let letter = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
        if letters.last() == Some(&-letter) {
            continue;
        }
        letters.push(letter);
    }
    FWord::from_letters(rank, &letters).expect("letters are in range")
}

fn run_selftest(args: SelftestArgs) -> i32 {
    let report = match selftest_report(&args) {
        Ok(report) => report,
        Err(message) => return usage_error(&message),
    };
    emit(&report, args.format);
    finish(&[report])
}

fn selftest_report(args: &SelftestArgs) -> Result<Report, String> {
    let mut checks = Vec::new();
    let mut rng = StdRng::seed_from_u64(args.seed);

    // Braid relations at the configured hole count.
    let model = PlanarModel::new(args.holes).map_err(|e| e.to_string())?;
    let rotor = model.generator(B2Gen::Rotor).map_err(|e| e.to_string())?;
    let relation = rotor.compose(&rotor).map_err(|e| e.to_string())?
        == model
            .evaluate((1..=args.holes).map(|i| (B2Gen::Anchored(i), 1)))
            .map_err(|e| e.to_string())?;
    checks.push(Check::new(
        "rotor squared equals the ordered product of the anchored hole pushes",
        relation,
        format!("p = {}", args.holes),
    ));

    let mut parity_hom = true;
    for _ in 0..args.cases {
        let len_u = rng.gen_range(0..=4);
        let u = model
            .evaluate(random_braid_word(&mut rng, args.holes, len_u))
            .map_err(|e| e.to_string())?;
        let len_v = rng.gen_range(0..=4);
        let v = model
            .evaluate(random_braid_word(&mut rng, args.holes, len_v))
            .map_err(|e| e.to_string())?;
        parity_hom &= u.compose(&v).map_err(|e| e.to_string())?.parity()
            == (u.parity() + v.parity()) % 2;
    }
    checks.push(Check::new(
        "end-exchange parity is a homomorphism onto Z/2",
        parity_hom,
        format!("{} random pairs", args.cases),
    ));

    // Arc decomposition properties.
    let handlebody = HandlebodyModel::new(args.genus).map_err(|e| e.to_string())?;
    let mut residuals_fix = true;
    let mut anchored_match = true;
    for _ in 0..args.cases {
        let len = rng.gen_range(0..=12);
        let word = random_goeritz_word(&mut rng, args.genus, len);
        let (anchored_part, residual) = handlebody.decompose(&word).map_err(|e| e.to_string())?;
        residuals_fix &= handlebody.is_freewheeling(&residual).map_err(|e| e.to_string())?;
        anchored_match &= handlebody
            .arc_eq(
                &handlebody.tau(&anchored_part).map_err(|e| e.to_string())?,
                &handlebody.tau(&word).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
    }
    checks.push(Check::new(
        "residuals of random words fix the reference arc",
        residuals_fix,
        format!("{} words", args.cases),
    ));
    checks.push(Check::new(
        "anchored parts of random words match them on the reference arc",
        anchored_match,
        format!("{} words", args.cases),
    ));

    // Factorization round trips on random targets.
    let mut factor_ok = true;
    for _ in 0..args.cases {
        let len = rng.gen_range(0..=5);
        let raw = random_reduced_surface_word(&mut rng, args.genus, len);
        let swapped = rng.gen_bool(0.5);
        let target = handlebody.arc(&raw, swapped).map_err(|e| e.to_string())?;
        let word = handlebody.factor(&target).map_err(|e| e.to_string())?;
        factor_ok &= handlebody
            .arc_eq(&handlebody.tau(&word).map_err(|e| e.to_string())?, &target)
            .map_err(|e| e.to_string())?;
    }
    checks.push(Check::new(
        "random target arcs factor and round-trip",
        factor_ok,
        format!("{} targets", args.cases),
    ));

    // Width properties.
    let mut thin_ok = true;
    let mut concat_ok = true;
    for _ in 0..args.cases {
        let len = rng.gen_range(0..=10);
        let word = random_goeritz_word(&mut rng, args.genus, len);
        let (rewritten, schedule) = thin(&handlebody, &word).map_err(|e| e.to_string())?;
        thin_ok &= schedule.width() <= 1
            && handlebody
                .arc_eq(
                    &handlebody.tau(&rewritten).map_err(|e| e.to_string())?,
                    &handlebody.tau(&word).map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
        let len_other = rng.gen_range(0..=10);
        let other = random_goeritz_word(&mut rng, args.genus, len_other);
        let first = canonical(&handlebody, &word).map_err(|e| e.to_string())?;
        let second = canonical(&handlebody, &other).map_err(|e| e.to_string())?;
        let joined = first.concat(&second).map_err(|e| e.to_string())?;
        concat_ok &= joined.width() == first.width().max(second.width());
    }
    checks.push(Check::new(
        "thin rewrites preserve the arc with schedules of width at most 1",
        thin_ok,
        format!("{} words", args.cases),
    ));
    checks.push(Check::new(
        "concatenated schedule width is the maximum of the parts",
        concat_ok,
        format!("{} pairs", args.cases),
    ));

    Ok(Report {
        command: "selftest",
        config: json!({
            "genus": args.genus,
            "holes": args.holes,
            "seed": args.seed,
            "cases": args.cases,
        }),
        result: json!({
            "checks_run": checks.len(),
        }),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid_words_parse_with_byte_offsets() {
        let word = parse_braid_word(4, "r a3 f2^-1").unwrap();
        assert_eq!(
            word,
            vec![(B2Gen::Rotor, 1), (B2Gen::Anchored(3), 1), (B2Gen::Freewheel(2), -1)]
        );
        let err = parse_braid_word(4, "r a0").unwrap_err();
        assert!(err.contains("byte 2") && err.contains(">= 1"), "{err}");
        let err = parse_braid_word(2, "a3").unwrap_err();
        assert!(err.contains("out of range 1..=2"), "{err}");
        let err = parse_braid_word(2, "x1").unwrap_err();
        assert!(err.contains("unknown token"), "{err}");
        assert_eq!(parse_braid_word(2, "a1^3").unwrap(), vec![(B2Gen::Anchored(1), 3)]);
        assert!(parse_braid_word(2, "a1'").is_err());
    }

    #[test]
    fn reports_serialize_with_schema_and_sorted_keys() {
        let report = Report {
            command: "demo",
            config: json!({ "genus": 2 }),
            result: json!({ "value": 1 }),
            checks: vec![Check::new("always true", true, "detail".to_string())],
        };
        let value = report.to_json();
        assert_eq!(value["schema"], 1);
        assert_eq!(value["command"], "demo");
        assert_eq!(value["checks"][0]["pass"], true);
        let text = report.render_text();
        assert!(text.contains("[PASS] always true"));
        assert!(text.ends_with("ok (1 checks)\n"));
    }

    #[test]
    fn relations_report_passes_for_small_hole_counts() {
        for holes in 1..=4 {
            let report = relations_report(holes, 10, 7).unwrap();
            assert!(report.all_pass(), "holes = {holes}");
        }
    }

    #[test]
    fn selftest_report_passes_on_a_small_budget() {
        let args = SelftestArgs {
            genus: 2,
            holes: 3,
            seed: 11,
            cases: 5,
            format: Format::Json,
        };
        let report = selftest_report(&args).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn appendix_report_flags_singularity_at_strong_shear() {
        let args = AppendixArgs {
            r: 10.0,
            eps: 1.0,
            b0: 4.0,
            kappa: 0.009,
            grid: "16x16x6".to_string(),
            tol: 1e-6,
            cases: 20,
            seed: 7,
            format: Format::Json,
        };
        let grid: GridSpec = args.grid.parse().unwrap();
        let report = appendix_report(&args, grid).unwrap();
        assert!(report.all_pass(), "{}", report.render_text());
        assert_eq!(report.result["worrisome"]["witness"], true);
        assert_eq!(report.result["stage5_guarded"]["precondition_ok"], true);
        assert_eq!(report.result["stage5_bump"]["precondition_ok"], false);
    }

    #[test]
    fn appendix_report_accepts_gentle_shear() {
        let args = AppendixArgs {
            r: 0.1,
            eps: 0.5,
            b0: 4.0,
            kappa: 0.5,
            grid: "16x16x6".to_string(),
            tol: 1e-6,
            cases: 20,
            seed: 7,
            format: Format::Json,
        };
        let grid: GridSpec = args.grid.parse().unwrap();
        let report = appendix_report(&args, grid).unwrap();
        assert!(report.all_pass(), "{}", report.render_text());
        assert_eq!(report.result["worrisome"]["witness"], false);
    }

    #[test]
    fn appendix_report_fails_check_when_bound_is_too_small() {
        let args = AppendixArgs {
            r: 1.0,
            eps: 1.0,
            b0: 2.0,
            kappa: 0.5,
            grid: "8x8x4".to_string(),
            tol: 1e-6,
            cases: 5,
            seed: 7,
            format: Format::Json,
        };
        let grid: GridSpec = args.grid.parse().unwrap();
        let report = appendix_report(&args, grid).unwrap();
        assert!(!report.all_pass());
        assert!(!report.checks[0].pass);
    }

    #[test]
    fn word_reports_agree_with_the_library() {
        let model = HandlebodyModel::new(2).unwrap();
        let report = eval_arc_report(&model, "a1 a1^-1").unwrap();
        assert_eq!(report.result["freewheeling"], true);
        assert!(report.all_pass());
        let report = decompose_report(&model, "f1 a1 f1^-1").unwrap();
        assert!(report.all_pass());
        let report = thin_report(&model, "f2 a1 f2^-1").unwrap();
        assert!(report.all_pass());
        let report = width_report(&model, "f2^-1 r a2").unwrap();
        assert!(report.all_pass());
        let planar = PlanarModel::new(3).unwrap();
        let report = eval_braid_report(&planar, "r f2").unwrap();
        assert_eq!(report.result["parity"], 1);
        assert!(report.all_pass());
        let report = factor_report(
            &model,
            &parse_surface_word(2, "a1 b2^-1").unwrap(),
            true,
            "a1 b2^-1",
        )
        .unwrap();
        assert!(report.all_pass());
    }
}
