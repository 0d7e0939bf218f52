//! `sweepfam`: census, invariant and asymptotics reports from the command line.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use sweepfam_core::cache::{census_path, read_census, write_census, CensusFile};
use sweepfam_core::exact::{format_rational, parse_rational, ExactJson, Q};
use sweepfam_core::{
    asymptotics, audit_chain, census, cover_genus, delta_search, evaluate, excess_sign, DegenerationCensus,
    DeltaOptions, Enumerator, Error, FamilyParams, HurwitzOracle, Parity,
};

use render::{render, scalar_text, Format, Table};

const DEFAULT_BUDGET: &str = "50000000";

#[derive(Parser)]
#[command(
    name = "sweepfam",
    version,
    about = "Hurwitz census and surface invariants of sweeping families"
)]
struct Cli {
    /// Census cache directory.
    #[arg(long, global = true, env = "GG_CACHE_DIR", default_value = "census-cache")]
    cache_dir: PathBuf,
    /// Enumeration worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..), default_value_t = default_workers())]
    workers: u16,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn default_workers() -> u16 {
    std::thread::available_parallelism().map_or(1, |n| n.get().min(u16::MAX as usize) as u16)
}

#[derive(Args, Clone, Copy)]
struct Selector {
    /// Degree of the covers.
    #[arg(long)]
    k: u32,
    /// Number of branch points.
    #[arg(long)]
    b: Option<u32>,
    /// Genus of the covering curve; b = 2g + 2k - 2.
    #[arg(long)]
    g: Option<u32>,
}

#[derive(Args, Clone)]
struct Budget {
    /// Largest raw tuple count N to enumerate.
    #[arg(long, default_value = DEFAULT_BUDGET)]
    budget: BigInt,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Persistence window for the ratio bound.
    #[arg(long, default_value_t = asymptotics::DEFAULT_WINDOW)]
    window: u64,
    /// Largest plane degree tried.
    #[arg(long, default_value_t = asymptotics::DEFAULT_CEILING)]
    ceiling: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Odd,
    Even,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate (or load) the census of (k, b) and print its counts.
    Census {
        #[command(flatten)]
        sel: Selector,
        #[command(flatten)]
        budget: Budget,
        /// Recompute even if a cached census exists.
        #[arg(long)]
        refresh: bool,
    },
    /// Compare the enumerated tuple count with the character formula.
    OracleCheck {
        #[command(flatten)]
        sel: Selector,
        #[command(flatten)]
        budget: Budget,
        /// Skip enumeration and report the character count only.
        #[arg(long)]
        oracle_only: bool,
    },
    /// Surface invariants for a cached census.
    #[command(allow_negative_numbers = true)]
    Invariants {
        #[command(flatten)]
        sel: Selector,
        /// Total fiber degree of the branch divisor.
        #[arg(long)]
        c: BigInt,
        /// Genus of the base curve.
        #[arg(long)]
        gx: BigInt,
        /// The base carries a special very ample divisor.
        #[arg(long)]
        special_base: bool,
        /// Append the full intersection audit.
        #[arg(long)]
        audit: bool,
    },
    /// Intersection audit of K² for a cached census.
    #[command(allow_negative_numbers = true)]
    Audit {
        #[command(flatten)]
        sel: Selector,
        #[arg(long)]
        c: BigInt,
        #[arg(long)]
        gx: BigInt,
    },
    /// Maximal-gonality sign table, or a ratio certificate with --delta.
    Asymptotics {
        #[arg(long, value_enum, required_unless_present = "delta")]
        case: Option<CaseArg>,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
        /// Genus, gonality and ε ("p/q").
        #[arg(long, num_args = 3, value_names = ["G", "K", "EPS"], conflicts_with = "case")]
        delta: Option<Vec<String>>,
        /// Census to use with --delta, as "K,B".
        #[arg(long, requires = "delta")]
        census: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        budget: Budget,
    },
    /// Least plane degree with |K²/χ - 8| ≤ ε through the window.
    Delta {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: u32,
        /// Tolerance as "p/q".
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvariantViolation { .. } => 2,
            Error::SearchExhausted { .. } => 3,
            Error::Io(_) => 1,
            _ => 4,
        };
        let mut message = e.to_string();
        if let Error::SearchExhausted { trajectory, .. } = &e {
            message.push_str("\ntrajectory (d, K²/χ):");
            for (d, r) in trajectory {
                message.push_str(&format!("\n  {d}\t{r}"));
            }
        }
        Self { code, message }
    }
}

type Outcome = Result<(Value, Table), Failure>;

struct Context {
    cache_dir: PathBuf,
    workers: usize,
}

impl Context {
    fn resolve(&self, sel: Selector) -> Result<(u32, u32, u32), Failure> {
        if sel.k < 2 {
            return Err(Failure::usage(format!("k = {} must be at least 2", sel.k)));
        }
        let b = match (sel.b, sel.g) {
            (Some(b), None) => b,
            (None, Some(g)) => 2 * g + 2 * sel.k - 2,
            (Some(b), Some(g)) if b == 2 * g + 2 * sel.k - 2 => b,
            (Some(b), Some(g)) => {
                return Err(Failure::usage(format!(
                    "--b {b} and --g {g} disagree: b must be 2g + 2k - 2"
                )))
            }
            (None, None) => return Err(Failure::usage("one of --b or --g is required")),
        };
        let g = cover_genus(sel.k, b)?;
        Ok((sel.k, b, g))
    }

    /// Raw count from the character formula; refuses enumeration past the budget.
    fn check_budget(&self, k: u32, b: u32, budget: &BigInt) -> Result<BigInt, Failure> {
        let n = HurwitzOracle::with_max_degree(16).connected_count(k as usize, b as usize)?;
        if &n > budget {
            return Err(Failure {
                code: 3,
                message: format!(
                    "N({k},{b}) = {n} tuples exceeds the enumeration budget {budget}; \
                     `sweepfam oracle-check --k {k} --b {b} --oracle-only` gives N from characters"
                ),
            });
        }
        Ok(n)
    }

    fn cached(&self, k: u32, b: u32) -> Result<DegenerationCensus, Failure> {
        read_census(&self.cache_dir, k, b)?.ok_or_else(|| {
            Failure::usage(format!(
                "no cached census for (k, b) = ({k}, {b}) in {}; run `sweepfam census --k {k} --b {b}` first",
                self.cache_dir.display()
            ))
        })
    }

    fn obtain(&self, k: u32, b: u32, budget: &BigInt, refresh: bool) -> Result<DegenerationCensus, Failure> {
        if !refresh {
            if let Some(c) = read_census(&self.cache_dir, k, b)? {
                eprintln!("served from cache: {}", census_path(&self.cache_dir, k, b).display());
                return Ok(c);
            }
        }
        self.check_budget(k, b, budget)?;
        let c = census(k, b, self.workers)?;
        let path = write_census(&self.cache_dir, &c)?;
        eprintln!("wrote {}", path.display());
        Ok(c)
    }
}

fn exact(x: &Q) -> Value {
    serde_json::to_value(ExactJson::from(x)).expect("serializable")
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

/// Conventions behind the M-table and `e`, stated with every census.
fn census_notes() -> [&'static str; 3] {
    [
        "M_table cells are (j, i) with j the smaller orbit size; when 2j = k the side with i <= g - i is kept, \
         so (j, i) and (k - j, g - i) share one cell",
        "e sums the cells with i = 0 or i = g, each cell counted once",
        "the colliding pair is the last two entries; braid moves carry any other colliding pair there with its type",
    ]
}

fn cmd_census(ctx: &Context, sel: Selector, budget: &BigInt, refresh: bool) -> Outcome {
    let (k, b, _) = ctx.resolve(sel)?;
    let c = ctx.obtain(k, b, budget, refresh)?;
    let file = CensusFile::from(&c);
    let mut json = to_value(&file);
    let mut t = Table::new(&["field", "j", "i", "value"]);
    for key in [
        "k", "b", "g", "N", "N_tilde", "N1", "N22", "N3", "e", "N_sing", "central",
    ] {
        t.push(vec![key.into(), String::new(), String::new(), scalar_text(&json[key])]);
    }
    for row in &file.m_table {
        t.push(vec![
            "M_table".into(),
            row.j.to_string(),
            row.i.to_string(),
            row.count.to_string(),
        ]);
    }
    let notes = census_notes();
    for note in &notes {
        t.push(vec!["note".into(), String::new(), String::new(), note.to_string()]);
    }
    json.as_object_mut()
        .expect("object")
        .insert("notes".into(), json!(notes));
    Ok((json, t))
}

fn cmd_oracle_check(ctx: &Context, sel: Selector, budget: &BigInt, oracle_only: bool) -> Outcome {
    let (k, b, g) = ctx.resolve(sel)?;
    let oracle = HurwitzOracle::with_max_degree(16).connected_count(k as usize, b as usize)?;
    let enumerated = if oracle_only {
        None
    } else {
        ctx.check_budget(k, b, budget)?;
        Some(BigInt::from(Enumerator::new(k, b)?.workers(ctx.workers).count()))
    };
    let matches = enumerated.as_ref().map(|n| n == &oracle);
    let json = json!({
        "k": k, "b": b, "g": g,
        "oracle": oracle.to_string(),
        "enumeration": enumerated.as_ref().map(|n| n.to_string()),
        "match": matches,
    });
    if matches == Some(false) {
        return Err(Failure {
            code: 2,
            message: format!(
                "enumeration {} disagrees with character count {oracle}",
                enumerated.unwrap()
            ),
        });
    }
    let t = Table::from_json(&json);
    Ok((json, t))
}

fn audit_summary(a: &sweepfam_core::AuditReport) -> Value {
    json!({
        "closed_forms_consistent": a.closed_forms_consistent,
        "kf2_closed": exact(&a.kf2_closed),
        "printed_route_discrepancy": exact(&a.printed_route.discrepancy),
        "first_principles_route_discrepancy": exact(&a.first_principles_route.discrepancy),
    })
}

fn cmd_invariants(ctx: &Context, sel: Selector, c: BigInt, gx: BigInt, special: bool, with_audit: bool) -> Outcome {
    let (k, b, _) = ctx.resolve(sel)?;
    let census = ctx.cached(k, b)?;
    let params = FamilyParams::new(&census, c, gx)?.with_special_base(special);
    for w in params.warnings() {
        eprintln!("warning: {w}");
    }
    let inv = evaluate(&params)?;
    let audit = audit_chain(&params)?;
    let mut json = to_value(&inv);
    let obj = json.as_object_mut().expect("object");
    obj.insert(
        "noether_check".into(),
        Value::String(format!(
            "OK: 12χ = {} = K² + e(F)",
            format_rational(&(Q::from_integer(12.into()) * &inv.chi))
        )),
    );
    obj.insert("audit_summary".into(), audit_summary(&audit));
    if with_audit {
        obj.insert("audit".into(), to_value(&audit));
    }
    let t = Table::from_json(&json);
    Ok((json, t))
}

fn cmd_audit(ctx: &Context, sel: Selector, c: BigInt, gx: BigInt) -> Outcome {
    let (k, b, _) = ctx.resolve(sel)?;
    let census = ctx.cached(k, b)?;
    let audit = audit_chain(&FamilyParams::new(&census, c, gx)?)?;
    let json = to_value(&audit);
    let t = Table::from_json(&json);
    Ok((json, t))
}

fn cmd_excess_sign(case: CaseArg, n_max: u64) -> Outcome {
    let parity = match case {
        CaseArg::Odd => Parity::Odd,
        CaseArg::Even => Parity::Even,
    };
    let report = excess_sign(parity, n_max);
    let derived = asymptotics::substituted_polynomial(parity);
    let (printed, _) = asymptotics::printed_polynomial(parity);
    let mut rows = Vec::new();
    let mut t = Table::new(&["n", "g", "k", "b", "substituted", "printed"]);
    for n in parity.n_min()..=n_max {
        let case = parity.case(n);
        let x = Q::from_integer(n.into());
        let (s, p) = (derived.eval(&x), printed.eval(&x));
        t.push(vec![
            n.to_string(),
            case.genus().to_string(),
            case.k().to_string(),
            case.b().to_string(),
            format_rational(&s),
            format_rational(&p),
        ]);
        rows.push(json!({"n": n, "substituted": exact(&s), "printed": exact(&p)}));
    }
    let mut json = to_value(&report);
    json.as_object_mut()
        .expect("object")
        .insert("table".into(), Value::Array(rows));
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    Ok((json, t))
}

fn cmd_delta(
    ctx: &Context,
    g: u32,
    k: u32,
    epsilon: &str,
    census_ref: Option<&str>,
    search: &SearchArgs,
    budget: &BigInt,
) -> Outcome {
    if k < 2 {
        return Err(Failure::usage(format!("k = {k} must be at least 2")));
    }
    let b = 2 * g + 2 * k - 2;
    if let Some(text) = census_ref {
        let parsed: Option<(u32, u32)> = text
            .split_once(',')
            .and_then(|(a, c)| Some((a.trim().parse().ok()?, c.trim().parse().ok()?)));
        match parsed {
            Some(kb) if kb == (k, b) => {}
            Some((ck, cb)) => {
                return Err(Failure::usage(format!(
                    "--census {ck},{cb} does not match g = {g}, k = {k} (needs {k},{b})"
                )))
            }
            None => return Err(Failure::usage(format!("--census expects K,B, got {text:?}"))),
        }
    }
    let eps = parse_rational(epsilon)?;
    let census = ctx.obtain(k, b, budget, false)?;
    let opts = DeltaOptions {
        window: search.window,
        ceiling: search.ceiling,
        ..DeltaOptions::default()
    };
    let cert = delta_search(g, k, &census.counts, &eps, opts)?;
    let json = to_value(&cert);
    let t = Table::from_json(&json);
    Ok((json, t))
}

fn dispatch(cli: Cli) -> Result<String, Failure> {
    let ctx = Context {
        cache_dir: cli.cache_dir,
        workers: cli.workers as usize,
    };
    let (json, table) = match cli.command {
        Command::Census { sel, budget, refresh } => cmd_census(&ctx, sel, &budget.budget, refresh)?,
        Command::OracleCheck {
            sel,
            budget,
            oracle_only,
        } => cmd_oracle_check(&ctx, sel, &budget.budget, oracle_only)?,
        Command::Invariants {
            sel,
            c,
            gx,
            special_base,
            audit,
        } => cmd_invariants(&ctx, sel, c, gx, special_base, audit)?,
        Command::Audit { sel, c, gx } => cmd_audit(&ctx, sel, c, gx)?,
        Command::Asymptotics {
            case,
            n_max,
            delta,
            census,
            search,
            budget,
        } => match (case, delta) {
            (_, Some(d)) => {
                let g = d[0]
                    .parse()
                    .map_err(|_| Failure::usage(format!("bad genus {:?}", d[0])))?;
                let k = d[1]
                    .parse()
                    .map_err(|_| Failure::usage(format!("bad gonality {:?}", d[1])))?;
                cmd_delta(&ctx, g, k, &d[2], census.as_deref(), &search, &budget.budget)?
            }
            (Some(case), None) => cmd_excess_sign(case, n_max)?,
            (None, None) => return Err(Failure::usage("either --case or --delta is required")),
        },
        Command::Delta {
            g,
            k,
            epsilon,
            search,
            budget,
        } => cmd_delta(&ctx, g, k, &epsilon, None, &search, &budget.budget)?,
    };
    Ok(render(cli.format, &json, &table))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(4),
            };
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
