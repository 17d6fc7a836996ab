use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use blowup_core::classify::{base_locus_peel, ReduceStatus, DEFAULT_PEEL_BUDGET};
use blowup_core::cremona::excess;
use blowup_core::dimension::StratumTerm;
use blowup_core::fixtures::{run_fixtures, FixtureContext};
use blowup_core::orbit::degree_histogram;
use blowup_core::*;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const GRAMMAR: &str = "\
Divisor literals:
  compact     n:d:m1,m2,...,ms     e.g. 3:10:7,6,6,6,6,1,1,1,1,1,1,1,1
  structured  {\"n\":3,\"d\":10,\"m\":[7,6,6,6,6,1,1,1,1,1,1,1,1]}
The class is dH - m1 E1 - ... - ms Es on the blow-up of P^n at s points;
an exceptional divisor E_i has d = 0 and m_i = -1.";

#[derive(Parser)]
#[command(
    name = "blowup",
    version,
    about = "Divisor classes on blow-ups of projective space at general points"
)]
#[command(after_help = GRAMMAR)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cap on worker threads.
    #[arg(long, global = true, env = "BLOWUP_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DivisorArg {
    /// Divisor literal, compact or JSON.
    #[arg(long, value_parser = parse_divisor_arg)]
    divisor: DivisorClass,
}

#[derive(Subcommand)]
enum Command {
    /// Mukai pairing of two classes.
    Pair {
        #[arg(long, value_parser = parse_divisor_arg)]
        a: DivisorClass,
        #[arg(long, value_parser = parse_divisor_arg)]
        b: DivisorClass,
    },
    /// Anticanonical degree (n+1)d - Σ m_i.
    Adeg(DivisorArg),
    /// Euler characteristic, with the planar genus and conditions when n = 2.
    Chi(DivisorArg),
    /// Standard Cremona transformation on an index set.
    Cremona {
        #[command(flatten)]
        divisor: DivisorArg,
        /// n + 1 distinct 1-based indices, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
    /// Apply a Weyl word given as a JSON array of index sets.
    Word {
        #[command(flatten)]
        divisor: DivisorArg,
        #[arg(long)]
        word: String,
        /// Apply the inverse word instead.
        #[arg(long)]
        invert: bool,
    },
    /// Decide whether a class is a (-1) class.
    Classify(DivisorArg),
    /// Peel negatively pairing (-1) classes off the base locus.
    Peel {
        #[command(flatten)]
        divisor: DivisorArg,
        #[arg(long)]
        max_degree: i64,
        #[arg(long, default_value_t = DEFAULT_PEEL_BUDGET)]
        max_iterations: usize,
    },
    /// Greedy Cremona reduction, with the shape certificate.
    Reduce(DivisorArg),
    /// Census of the Weyl orbit of E1.
    #[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
    Orbit {
        #[command(subcommand)]
        action: Option<OrbitAction>,
        #[arg(long, required = true)]
        n: Option<usize>,
        #[arg(long, required = true)]
        s: Option<usize>,
        #[arg(long, required = true)]
        max_degree: Option<i64>,
        /// Write the census as JSON Lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a census file (same as `orbit verify`).
    OrbitVerify(VerifyArgs),
    /// Conjectural expected dimension.
    Expdim {
        #[command(flatten)]
        divisor: DivisorArg,
        #[arg(long, value_enum, default_value_t = Method::Rnc)]
        method: Method,
        /// Degree bound for the (-1) curves used by `ghh`; defaults to d.
        #[arg(long)]
        max_degree: Option<i64>,
        /// List every stratum of the secant formula.
        #[arg(long)]
        strata: bool,
    },
    /// Dimension of the space of sections, by random interpolation mod p.
    Oracle {
        #[command(flatten)]
        divisor: DivisorArg,
        #[arg(long, default_value_t = oracle::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_PRIME)]
        prime: u64,
    },
    /// Run the built-in example checks.
    Fixtures,
}

#[derive(Subcommand)]
enum OrbitAction {
    /// Check every entry of a census file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Rnc,
    Ghh,
}

fn parse_divisor_arg(s: &str) -> Result<DivisorClass, String> {
    parse_divisor(s).map_err(|e| e.to_string())
}

/// Result of a command: a JSON document, its text rendering, and whether it succeeded.
struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new(command: &str, mut json: Value, text: String) -> Self {
        json.as_object_mut()
            .expect("command output is an object")
            .insert("command".into(), command.into());
        Self {
            json,
            text,
            ok: true,
        }
    }
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Domain(format!("{}: {e}", path.display()))
}

fn class_json(dc: &DivisorClass) -> Value {
    json!({ "n": dc.n(), "d": dc.d(), "m": dc.m(), "literal": dc.to_string(), "pretty": dc.pretty() })
}

fn word_json(w: &WeylWord) -> Value {
    serde_json::from_str(&w.to_json()).expect("word serializes as JSON")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    Ok(match &cli.command {
        Command::Pair { a, b } => {
            let v = mukai_pairing(a, b)?;
            Output::new(
                "pair",
                json!({ "a": class_json(a), "b": class_json(b), "value": v }),
                format!("<{}, {}> = {v}", a.pretty(), b.pretty()),
            )
        }
        Command::Adeg(DivisorArg { divisor }) => {
            let v = adeg(divisor)?;
            Output::new(
                "adeg",
                json!({ "divisor": class_json(divisor), "value": v }),
                format!("adeg({}) = {v}", divisor.pretty()),
            )
        }
        Command::Chi(DivisorArg { divisor }) => {
            let v = chi(divisor)?;
            let mut out = json!({ "divisor": class_json(divisor), "value": v });
            let mut text = format!("chi({}) = {v}", divisor.pretty());
            if divisor.n() == 2 {
                let genus = planar_genus(divisor)?;
                let cond = planar_conditions(divisor)?;
                out["planar_genus"] = genus.into();
                out["planar_conditions"] = serde_json::to_value(cond).expect("serializable");
                let yes = |b: bool| if b { "yes" } else { "no" };
                write!(
                    text,
                    "\narithmetic genus {genus}\nself-pairing -1: {}, genus 0: {}, adeg 1: {}, chi 1: {}",
                    yes(cond.self_pairing_minus_one),
                    yes(cond.genus_zero),
                    yes(cond.adeg_one),
                    yes(cond.chi_one)
                )
                .unwrap();
            }
            Output::new("chi", out, text)
        }
        Command::Cremona { divisor, indices } => {
            let dc = &divisor.divisor;
            let set = IndexSet::new(indices.clone(), dc.n(), dc.s())?;
            let image = cremona_apply(dc, &set)?;
            let k = excess(dc, &set)?;
            let structured = serde_json::to_string(&image).expect("serializable");
            Output::new(
                "cremona",
                json!({ "divisor": class_json(dc), "indices": set.indices(), "excess": k, "image": class_json(&image) }),
                format!("{}\n{image}\n{structured}", image.pretty()),
            )
        }
        Command::Word {
            divisor,
            word,
            invert,
        } => {
            let dc = &divisor.divisor;
            let mut w = WeylWord::from_json(word, dc.n(), dc.s())?;
            if *invert {
                w = invert_word(&w);
            }
            let image = apply_word(dc, &w)?;
            Output::new(
                "word",
                json!({ "divisor": class_json(dc), "word": word_json(&w), "image": class_json(&image) }),
                format!("{}\n{image}", image.pretty()),
            )
        }
        Command::Classify(DivisorArg { divisor }) => {
            let r = classify_minus_one(divisor)?;
            let mut out = json!({
                "divisor": class_json(divisor),
                "verdict": r.verdict,
                "steps": r.steps,
                "reached": class_json(&r.reached),
            });
            let mut text = format!(
                "{}: {:?} after {} steps",
                divisor.pretty(),
                r.verdict,
                r.steps
            );
            if let (Some(w), Some(t)) = (&r.witness, &r.terminal) {
                out["witness"] = word_json(w);
                out["terminal"] = class_json(t);
                write!(text, "\nterminal {}\nwitness {}", t.pretty(), w.to_json()).unwrap();
            } else {
                write!(text, "\nstopped at {}", r.reached.pretty()).unwrap();
            }
            Output::new("classify", out, text)
        }
        Command::Peel {
            divisor,
            max_degree,
            max_iterations,
        } => {
            let dc = &divisor.divisor;
            let r = base_locus_peel(dc, *max_degree, *max_iterations)?;
            let components: Vec<Value> = r
                .components
                .iter()
                .map(|c| json!({ "obstructor": class_json(&c.obstructor), "multiplicity": c.multiplicity }))
                .collect();
            let mut text = dc.pretty();
            for c in &r.components {
                write!(text, "\n  {} x ({})", c.multiplicity, c.obstructor.pretty()).unwrap();
            }
            write!(text, "\nresidual {}", r.residual.pretty()).unwrap();
            if r.exhausted {
                text.push_str("\niteration budget exhausted");
            }
            Output::new(
                "peel",
                json!({
                    "divisor": class_json(dc),
                    "components": components,
                    "residual": class_json(&r.residual),
                    "exhausted": r.exhausted,
                }),
                text,
            )
        }
        Command::Reduce(DivisorArg { divisor }) => {
            let r = cremona_reduce(divisor)?;
            // the certificate only applies to classes with self-pairing in {-4, -3, -2}
            let shape = dolgachev_shape_check(divisor).ok();
            let status = match r.status {
                ReduceStatus::Reduced => "reduced",
                ReduceStatus::NegativeDegree => "negative_degree",
            };
            Output::new(
                "reduce",
                json!({
                    "divisor": class_json(divisor),
                    "class": class_json(&r.class),
                    "word": word_json(&r.word),
                    "status": status,
                    "reaches_hyperplane_shape": shape,
                }),
                format!(
                    "{} ({status}, {} steps)\nhyperplane shape reached: {}",
                    r.class.pretty(),
                    r.word.len(),
                    shape.map_or("not applicable".to_string(), |b| b.to_string())
                ),
            )
        }
        Command::Orbit {
            action: Some(OrbitAction::Verify(args)),
            ..
        }
        | Command::OrbitVerify(args) => verify(&args.input)?,
        Command::Orbit {
            action: None,
            n,
            s,
            max_degree,
            out,
        } => {
            let (Some(n), Some(s), Some(max_degree)) = (*n, *s, *max_degree) else {
                return Err(Failure::Usage(
                    "orbit needs --n, --s and --max-degree".into(),
                ));
            };
            let table = enumerate(n, s, max_degree)?;
            if let Some(path) = out {
                let file = File::create(path).map_err(|e| io_err(path, e))?;
                let mut w = BufWriter::new(file);
                table.write_jsonl(&mut w).map_err(|e| io_err(path, e))?;
                w.flush().map_err(|e| io_err(path, e))?;
            }
            let hist = degree_histogram(&table);
            let mut text = format!(
                "X({n},{s}), degree <= {max_degree}: {} classes in {} orbits{}",
                table.total(),
                table.entries.len(),
                if table.complete { "" } else { " (incomplete)" }
            );
            for (d, c) in &hist {
                write!(text, "\n  d = {d}: {c}").unwrap();
            }
            let histogram: serde_json::Map<String, Value> = hist
                .iter()
                .map(|(d, c)| (d.to_string(), (*c).into()))
                .collect();
            Output::new(
                "orbit",
                json!({
                    "n": n, "s": s, "max_degree": max_degree,
                    "complete": table.complete,
                    "entries": table.entries.len(),
                    "total": table.total(),
                    "histogram": histogram,
                }),
                text,
            )
        }
        Command::Expdim {
            divisor,
            method,
            max_degree,
            strata,
        } => {
            let dc = &divisor.divisor;
            let (name, value, terms): (&str, i64, Option<Vec<StratumTerm>>) = match method {
                Method::Rnc => {
                    let terms = rnc_strata(dc)?;
                    let value = rnc_expected_dim(dc)?;
                    ("rnc", value, strata.then_some(terms))
                }
                Method::Ghh => {
                    if *strata {
                        return Err(Failure::Usage("--strata applies to --method rnc".into()));
                    }
                    (
                        "ghh",
                        ghh_expected_dim(dc, max_degree.unwrap_or(dc.d()))?,
                        None,
                    )
                }
            };
            let mut out = json!({ "divisor": class_json(dc), "method": name, "value": value, "conjectural": true });
            let mut text = format!(
                "expected dimension ({name}, conjectural) of {} = {value}",
                dc.pretty()
            );
            if let Some(terms) = terms {
                for t in &terms {
                    write!(
                        text,
                        "\n  I = {:?}, t = {}, r = {}, k = {}: {}",
                        t.stratum.indices, t.stratum.t, t.stratum.r, t.stratum.k, t.term
                    )
                    .unwrap();
                }
                out["strata"] = serde_json::to_value(terms).expect("serializable");
            }
            Output::new("expdim", out, text)
        }
        Command::Oracle {
            divisor,
            trials,
            prime,
        } => {
            let dc = &divisor.divisor;
            let r = h0_dimension_with(
                dc,
                &OracleOptions {
                    seed: cli.seed,
                    trials: *trials,
                    prime: *prime,
                },
            )?;
            let text =
                format!(
                "h0({}) = {} ({} trials mod {prime}, {})\nchi = {}, h1 lower bound estimate = {}",
                dc.pretty(),
                r.h0,
                r.trials,
                if r.confident { "all agree" } else { "ranks disagree" },
                r.chi,
                r.h1_lower_bound_estimate
            );
            let mut out = serde_json::to_value(&r).expect("serializable");
            out["divisor"] = class_json(dc);
            out["seed"] = cli.seed.into();
            out["prime"] = (*prime).into();
            Output::new("oracle", out, text)
        }
        Command::Fixtures => {
            let report = run_fixtures(&FixtureContext {
                seed: cli.seed,
                ..FixtureContext::default()
            });
            let mut text = String::new();
            for f in &report.fixtures {
                let status = if f.passed { "ok  " } else { "FAIL" };
                writeln!(text, "{status} {}: {}", f.name, f.detail).unwrap();
            }
            write!(
                text,
                "{} passed, {} failed, {} total",
                report.passed, report.failed, report.total
            )
            .unwrap();
            let mut out = Output::new(
                "fixtures",
                serde_json::to_value(&report).expect("serializable"),
                text,
            );
            out.ok = report.failed == 0;
            out
        }
    })
}

fn verify(path: &std::path::Path) -> Result<Output, Failure> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let table = OrbitTable::read_jsonl(BufReader::new(file))?;
    let problems = format_problems(&table);
    let ok = problems.is_empty() && verify_table(&table);
    let mut out = Output::new(
        "orbit-verify",
        json!({
            "n": table.n, "s": table.s, "max_degree": table.max_degree,
            "complete": table.complete,
            "entries": table.entries.len(),
            "valid": ok,
            "problems": problems,
        }),
        format!(
            "{}: {} entries, {}{}",
            path.display(),
            table.entries.len(),
            if ok { "valid" } else { "INVALID" },
            problems
                .iter()
                .map(|p| format!("\n  {p}"))
                .collect::<String>()
        ),
    );
    out.ok = ok;
    Ok(out)
}

/// Layout checks on a census file: sorted multiplicities, entry order and permutation counts.
fn format_problems(table: &OrbitTable) -> Vec<String> {
    let mut problems = Vec::new();
    for (i, e) in table.entries.iter().enumerate() {
        let line = i + 2;
        if e.m.windows(2).any(|w| w[0] < w[1]) {
            problems.push(format!(
                "line {line}: multiplicities not in decreasing order"
            ));
            continue;
        }
        match e.form().permutation_count() {
            Ok(p) if p == e.perms => {}
            Ok(p) => problems.push(format!(
                "line {line}: perms {} but {p} distinct orderings",
                e.perms
            )),
            Err(err) => problems.push(format!("line {line}: {err}")),
        }
        if i > 0 {
            let prev = &table.entries[i - 1];
            if (prev.d, &prev.m) >= (e.d, &e.m) {
                problems.push(format!("line {line}: entries not sorted by (d, m)"));
            }
        }
    }
    problems
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code == 2 {
                eprintln!("\n{GRAMMAR}");
            }
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{GRAMMAR}");
            ExitCode::from(2)
        }
    }
}
