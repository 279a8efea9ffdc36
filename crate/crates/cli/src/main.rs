//! `gngroup`: word problem, invariants, decompositions, portraits, quotient
//! tables, Hausdorff dimensions and the verification suite for `G_n`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 a computation was refused by the degree budget.

mod config;
mod render;

use std::collections::hash_map::RandomState;
use std::hash::BuildHasher;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use gngroup::abelian::{
    abelianize, chi4, epsilon, epsilon1, in_commutator, in_hnd, in_k4, in_kn_odd, parity_probe,
};
use gngroup::quotients::{
    hausdorff_closed_form, hausdorff_partial_formula, index_table, round_to, Budget, Real,
};
use gngroup::random::DEFAULT_SEED;
use gngroup::verify::{run_all, Status, VerifyOptions};
use gngroup::wordproblem::default_order_bound;
use gngroup::{
    are_equal, decompose, element_order, is_identity, parse_word, portrait, sigma, Error, Exec,
    GeneratorWord,
};
use serde_json::{json, Value};

use config::{parse_range, Config};
use render::{cell, Format, Output};

#[derive(Parser)]
#[command(
    name = "gngroup",
    version,
    about = "Computations in the self-similar groups G_n"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// TOML file with defaults for seed, budget, precision, n-range and verification sample sizes.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for random samples.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Draw a fresh seed instead of the fixed default; the seed used is reported on stderr.
    #[arg(long, global = true, conflicts_with = "seed")]
    randomize: bool,
    /// Largest level-action degree n^m for which a quotient is computed.
    #[arg(long, global = true)]
    budget_degree: Option<usize>,
    /// Decimal digits for logarithms and Hausdorff dimensions.
    #[arg(long, global = true)]
    precision_digits: Option<usize>,
    /// Run every computation on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WordArgs {
    /// Alphabet size (at least 3).
    #[arg(long)]
    n: usize,
    /// Word such as `a1*a2^-1`, `[a1,a2]` or `a1^a3`.
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct RangeArgs {
    /// `6`, `3..8` (inclusive) or `3,5,7`.
    #[arg(long)]
    n: Option<String>,
    /// Tree levels to examine.
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a word is trivial.
    Wp(WordArgs),
    /// Decide whether two words are equal.
    Eq {
        #[command(flatten)]
        word: WordArgs,
        /// Second word.
        #[arg(long)]
        other: String,
    },
    /// Order of an element, searched up to a bound.
    Order {
        #[command(flatten)]
        word: WordArgs,
        /// Largest order tried; defaults to 4(n-1)^2.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Root permutation and first-level states.
    Decompose(WordArgs),
    /// Vertex labels down to a depth.
    Portrait {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Abelianization, epsilon and membership in the characteristic subgroups.
    Invariants(WordArgs),
    /// Orders and indices of the level quotients.
    Quotients(RangeArgs),
    /// Closed-form Hausdorff dimension, with finite-level columns when `--levels` is given.
    Hausdorff(RangeArgs),
    /// Run the verification suite.
    Verify {
        #[command(flatten)]
        range: RangeArgs,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Global settings after merging the config file under the flags.
struct Settings {
    seed: u64,
    budget: Budget,
    digits: usize,
    exec: Exec,
    n: Option<String>,
    levels: Option<usize>,
    verify: VerifyOptions,
}

impl Settings {
    fn new(cli: &Cli) -> Result<Settings, Failure> {
        let cfg = match &cli.config {
            Some(path) => Config::load(path).map_err(Failure::Usage)?,
            None => Config::default(),
        };
        let seed = if cli.randomize {
            let seed = RandomState::new().hash_one(std::time::SystemTime::now());
            eprintln!("seed: {seed}");
            seed
        } else {
            cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED)
        };
        let budget = Budget {
            max_degree: cli
                .budget_degree
                .or(cfg.budget_degree)
                .unwrap_or(Budget::default().max_degree),
        };
        let digits = cli.precision_digits.or(cfg.precision_digits).unwrap_or(50);
        if digits == 0 {
            return Err(Failure::Usage(
                "precision must be at least one digit".into(),
            ));
        }
        let exec = if cli.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        };
        let mut verify = cfg.verify.unwrap_or_default();
        verify.seed = seed;
        verify.budget_degree = budget.max_degree;
        verify.precision_digits = digits;
        verify.exec = exec;
        Ok(Settings {
            seed,
            budget,
            digits,
            exec,
            n: cfg.n,
            levels: cfg.levels,
            verify,
        })
    }

    fn range(&self, args: &RangeArgs, default: &str) -> Result<Vec<usize>, Failure> {
        let text = args.n.as_deref().or(self.n.as_deref()).unwrap_or(default);
        parse_range(text).map_err(Failure::Usage)
    }

    fn levels(&self, args: &RangeArgs, default: usize) -> usize {
        args.levels.or(self.levels).unwrap_or(default)
    }

    fn real(&self, x: &Real) -> String {
        round_to(x, self.digits).to_string()
    }
}

fn word(args: &WordArgs) -> Result<GeneratorWord, Failure> {
    Ok(parse_word(args.n, &args.word)?.canonical())
}

fn wp(args: &WordArgs) -> Result<Output, Failure> {
    let w = word(args)?;
    let json = json!({ "n": args.n, "word": w.to_string(), "trivial": is_identity(&w) });
    Ok(Output::record(json, &["word", "trivial"]))
}

fn eq(args: &WordArgs, other: &str) -> Result<Output, Failure> {
    let u = word(args)?;
    let v = parse_word(args.n, other)?.canonical();
    let json = json!({
        "n": args.n,
        "word": u.to_string(),
        "other": v.to_string(),
        "equal": are_equal(&u, &v)?,
    });
    Ok(Output::record(json, &["word", "other", "equal"]))
}

fn order(args: &WordArgs, bound: Option<u64>) -> Result<Output, Failure> {
    let w = word(args)?;
    let bound = bound.unwrap_or_else(|| default_order_bound(args.n));
    let json = json!({
        "n": args.n,
        "word": w.to_string(),
        "order": element_order(&w, bound)?,
        "bound": bound,
    });
    let mut out = Output::record(json, &["word", "order", "bound"]);
    if out.json["order"].is_null() {
        out.notes.push(format!("no order up to {bound}"));
    }
    Ok(out)
}

fn decompose_cmd(args: &WordArgs) -> Result<Output, Failure> {
    let w = word(args)?;
    let d = decompose(&w).canonical();
    let factors: String = w
        .syllables()
        .iter()
        .map(|s| Ok(sigma(args.n, s.gen as usize)?.pow(s.exp).to_string()))
        .collect::<Result<_, Error>>()?;
    let json = json!({
        "n": args.n,
        "word": w.to_string(),
        "root": d.root.to_string(),
        "root_factors": if factors.is_empty() { "()".to_string() } else { factors },
        "states": d.states.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "display": d.to_string(),
    });
    Ok(Output::record(
        json,
        &["word", "display", "root", "root_factors", "states"],
    ))
}

fn portrait_cmd(args: &WordArgs, depth: usize) -> Result<Output, Failure> {
    let w = word(args)?;
    let p = portrait(&w, depth)?;
    let labels: Vec<(String, String)> = p
        .labels()
        .map(|(v, l)| (v.to_string(), l.to_string()))
        .collect();
    let json = json!({
        "n": args.n,
        "word": w.to_string(),
        "depth": depth,
        "labels": labels.iter().map(|(v, l)| json!({ "vertex": v, "label": l })).collect::<Vec<_>>(),
    });
    Ok(Output {
        json,
        header: vec!["vertex", "label"],
        rows: labels.into_iter().map(|(v, l)| vec![v, l]).collect(),
        notes: Vec::new(),
    })
}

fn invariants(args: &WordArgs) -> Result<Output, Failure> {
    let w = word(args)?;
    let n = args.n;
    let hnd: serde_json::Map<String, Value> = (3..n as u64)
        .filter(|d| (n as u64 - 1).is_multiple_of(*d))
        .map(|d| Ok((d.to_string(), json!(in_hnd(&w, d)?))))
        .collect::<Result<_, Error>>()?;
    let json = json!({
        "n": n,
        "word": w.to_string(),
        "abelianization": abelianize(&w).entries(),
        "epsilon": epsilon(&w),
        "epsilon1": epsilon1(&w),
        "in_commutator": in_commutator(&w),
        "chi4": chi4(&w).ok(),
        "in_k4": in_k4(&w).ok(),
        "in_kn": in_kn_odd(&w).ok(),
        "in_hnd": hnd,
        "parity": parity_probe(&w).ok(),
    });
    Ok(Output::record(
        json,
        &[
            "word",
            "abelianization",
            "epsilon",
            "epsilon1",
            "in_commutator",
            "chi4",
            "in_k4",
            "in_kn",
        ],
    ))
}

fn quotients(s: &Settings, args: &RangeArgs) -> Result<Output, Failure> {
    let ns = s.range(args, "3..6")?;
    let levels = s.levels(args, 2);
    let mut tables = Vec::new();
    let mut rows = Vec::new();
    for n in ns {
        let table = index_table(n, levels, &s.budget, s.exec, s.digits)?;
        let mut jrows = Vec::new();
        for r in &table.rows {
            let ratio = s.real(&r.partial_ratio);
            rows.push(vec![
                n.to_string(),
                r.level.to_string(),
                r.degree.to_string(),
                r.order.to_string(),
                r.index.to_string(),
                r.predicted_index.to_string(),
                r.matches_formula.to_string(),
                ratio.clone(),
            ]);
            jrows.push(json!({
                "level": r.level,
                "degree": r.degree,
                "order": r.order.to_string(),
                "index": r.index.to_string(),
                "predicted_index": r.predicted_index.to_string(),
                "matches_formula": r.matches_formula,
                "first_orbit_length": r.first_orbit_length,
                "partial_ratio": ratio,
            }));
        }
        tables.push(json!({ "n": n, "rows": jrows }));
    }
    Ok(Output {
        json: json!({ "precision_digits": s.digits, "tables": tables }),
        header: vec![
            "n",
            "level",
            "degree",
            "order",
            "index",
            "predicted_index",
            "matches_formula",
            "partial_ratio",
        ],
        rows,
        notes: Vec::new(),
    })
}

fn hausdorff(s: &Settings, args: &RangeArgs) -> Result<Output, Failure> {
    let ns = s.range(args, "3..8")?;
    let levels = s.levels(args, 0);
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for n in ns {
        let closed = s.real(&hausdorff_closed_form(n, s.digits)?);
        let mut jlevels = Vec::new();
        if levels > 0 {
            let table = index_table(n, levels, &s.budget, s.exec, s.digits)?;
            for r in &table.rows {
                let formula = s.real(&hausdorff_partial_formula(n, r.level, s.digits)?);
                let empirical = s.real(&r.partial_ratio);
                rows.push(vec![
                    n.to_string(),
                    closed.clone(),
                    r.level.to_string(),
                    empirical.clone(),
                    formula.clone(),
                ]);
                jlevels
                    .push(json!({ "level": r.level, "empirical": empirical, "formula": formula }));
            }
        } else {
            rows.push(vec![
                n.to_string(),
                closed.clone(),
                String::new(),
                String::new(),
                String::new(),
            ]);
        }
        results.push(json!({ "n": n, "closed_form": closed, "levels": jlevels }));
    }
    Ok(Output {
        json: json!({ "precision_digits": s.digits, "results": results }),
        header: vec!["n", "closed_form", "level", "empirical", "formula"],
        rows,
        notes: Vec::new(),
    })
}

fn verify(
    s: &Settings,
    args: &RangeArgs,
    report: Option<&PathBuf>,
) -> Result<(Output, bool), Failure> {
    let ns = s.range(args, "3..8")?;
    let mut opts = s.verify.clone();
    if let Some(levels) = args.levels.or(s.levels) {
        opts.max_level = Some(levels);
    }
    let result = run_all(&ns, &opts);
    let mut json = serde_json::to_value(&result).expect("serializable");
    json["seed"] = json!(s.seed);
    if let Some(path) = report {
        let text = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
        std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let rows = json["checks"]
        .as_array()
        .expect("checks")
        .iter()
        .map(|c| {
            ["claim_id", "status", "millis", "locus"]
                .iter()
                .map(|f| cell(&c[*f]))
                .collect()
        })
        .collect();
    let count = |status: Status| result.checks.iter().filter(|c| c.status == status).count();
    let notes = vec![format!(
        "{} checks: {} pass, {} recomputed-with-correction, {} inconclusive, {} fail",
        result.checks.len(),
        count(Status::Pass),
        count(Status::RecomputedWithCorrection),
        count(Status::Inconclusive),
        count(Status::Fail),
    )];
    let out = Output {
        json,
        header: vec!["claim_id", "status", "millis", "locus"],
        rows,
        notes,
    };
    Ok((out, result.any_failed()))
}

fn run(cli: &Cli) -> Result<(Output, bool), Failure> {
    let s = Settings::new(cli)?;
    let ok = |out| Ok((out, false));
    match &cli.command {
        Command::Wp(a) => ok(wp(a)?),
        Command::Eq { word, other } => ok(eq(word, other)?),
        Command::Order { word, bound } => ok(order(word, *bound)?),
        Command::Decompose(a) => ok(decompose_cmd(a)?),
        Command::Portrait { word, depth } => ok(portrait_cmd(word, *depth)?),
        Command::Invariants(a) => ok(invariants(a)?),
        Command::Quotients(a) => ok(quotients(&s, a)?),
        Command::Hausdorff(a) => ok(hausdorff(&s, a)?),
        Command::Verify { range, report } => verify(&s, range, report.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, failed)) => {
            print!("{}", out.render(cli.format));
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("refused: {msg}; raise --budget-degree to allow it");
            ExitCode::from(3)
        }
    }
}
