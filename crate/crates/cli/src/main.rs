//! `autfn`: replay scenario files and poke at free-group automorphisms and
//! finite matrix groups from the shell.
//!
//! Exit status: 0 on success, 1 when a check or assertion fails, 2 on bad
//! input (unreadable files, syntax errors, bad arguments).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use autfn_core::modgroup::{
    closure_matches_kernel, find_generating_pair, invariant_subreps, kernel_report, sanity_splitting,
    sl_mod4_splitting, split_obstruction, ObstructionResult, DEFAULT_CAP,
};
use autfn_core::scenario::{self, definitions, expand_file, ReplayReport, RunOptions, ScenarioFile};
use autfn_core::{abelianize, Caps, Endo, FiniteGroupTable, OrderResult, SplitResult, Word};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "autfn", version, about = "Free-group automorphisms, graph realizations and finite matrix groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Largest power tried by order computations.
    #[arg(long, default_value_t = 256)]
    cap_power: u64,
    /// Largest image length allowed while taking powers.
    #[arg(long, default_value_t = 20_000)]
    cap_len: usize,
}

impl CapArgs {
    fn caps(self) -> Caps {
        Caps {
            max_power: self.cap_power,
            max_word_len: self.cap_len,
        }
    }
}

#[derive(Args)]
struct ReportArgs {
    /// Print the report as a JSON array.
    #[arg(long)]
    json: bool,
    /// Also run assertions marked `large`.
    #[arg(long)]
    include_large: bool,
    #[command(flatten)]
    caps: CapArgs,
}

impl ReportArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            caps: self.caps.caps(),
            include_large: self.include_large,
            ..RunOptions::default()
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Print `{op, n, modulus, order, result, elapsed_ms}` as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AutArgs {
    /// Rank of the free group.
    #[arg(long)]
    rank: usize,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and statically check a scenario file, then print it canonically.
    Parse { file: PathBuf },
    /// Run one scenario file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Run every `.scn` file in a directory.
    Replay {
        dir: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Check that every scenario file carries a known anchor.
    Lint { dir: PathBuf },
    /// Compose automorphism expressions, leftmost outermost.
    Compose {
        #[command(flatten)]
        aut: AutArgs,
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Apply an automorphism to a word.
    Apply {
        #[command(flatten)]
        aut: AutArgs,
        expr: String,
        word: String,
    },
    /// Order in Aut and in Out.
    Order {
        #[command(flatten)]
        aut: AutArgs,
        expr: String,
    },
    /// Whether an automorphism is inner, with its conjugating word.
    Inner {
        #[command(flatten)]
        aut: AutArgs,
        expr: String,
    },
    /// Matrix of the induced map on the abelianization, optionally reduced.
    Abelianize {
        #[command(flatten)]
        aut: AutArgs,
        expr: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Determinant of the abelianized map.
    Det {
        #[command(flatten)]
        aut: AutArgs,
        expr: String,
    },
    /// Evaluate a realization (or any automorphism) defined in a scenario file.
    Realize {
        file: PathBuf,
        /// Graph automorphism name.
        gaut: String,
        /// Basis name.
        basis: String,
        /// Path from the base vertex to its image, for realizations that move it.
        #[arg(long)]
        delta: Option<String>,
        /// Scenario instance to use, e.g. `rotation[p=5,m=3]`.
        #[arg(long = "scenario")]
        scenario_name: Option<String>,
    },
    /// Normal closure of each elementary power in SL_n(Z/mod), compared with
    /// the kernel of reduction mod `level`.
    Closure {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Order, center and simplicity of SL_n(Z/mod) or PSL_n(Z/mod).
    Group {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        projective: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Kernel of SL_n(Z/4) -> SL_n(Z/2) and its trace-zero description.
    Kernel {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Search for a section of SL_3(Z/4) -> SL_3(Z/2).
    Splitting {
        /// Run the fixture with a known section instead.
        #[arg(long)]
        sanity: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Invariant subspaces of the trace-zero module over GF(2).
    Subreps {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Linear obstruction to a splitting for n >= 6.
    Obstruction {
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn emit(report: &ReplayReport, json: bool) -> bool {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
    }
    report.success()
}

/// Evaluates `expr` as an automorphism of `F_rank` in scenario syntax.
fn eval(rank: usize, expr: &str) -> Result<Endo> {
    eval_in(&format!("rank {rank}\n"), expr)
}

fn eval_in(prelude: &str, expr: &str) -> Result<Endo> {
    eval_instance(prelude, expr, None)
}

/// Evaluates `expr` appended to the last scenario of `prelude`, in the
/// instance called `instance` if given, else in the last one.
fn eval_instance(prelude: &str, expr: &str, instance: Option<&str>) -> Result<Endo> {
    const NAME: &str = "__cli";
    let src = format!("{prelude}\naut {NAME} = {expr}\n");
    let file = scenario::parser::parse_file(&src).map_err(|d| anyhow!("{d}"))?;
    let mut insts = expand_file(&file, "cli").map_err(|d| anyhow!("{d}"))?;
    let inst = match instance {
        Some(name) => insts
            .into_iter()
            .find(|i| i.scenario == name)
            .ok_or_else(|| anyhow!("no scenario instance `{name}`"))?,
        None => insts.pop().ok_or_else(|| anyhow!("no scenario to evaluate in"))?,
    };
    definitions(&inst, &RunOptions::default())
        .remove(NAME)
        .ok_or_else(|| anyhow!("expression did not evaluate"))?
        .map_err(|e| anyhow!(e))
}

fn show_order(o: OrderResult) -> String {
    match o {
        OrderResult::Finite(k) => k.to_string(),
        OrderResult::ExceedsCap { power, by_length } => {
            let why = if by_length { "image length cap" } else { "power cap" };
            format!("exceeds cap (no identity up to power {power}, {why})")
        }
    }
}

/// Prints a finite-group result as text or as one JSON object.
#[allow(clippy::too_many_arguments)]
fn finish(
    out: &OutArgs,
    t0: Instant,
    op: &str,
    n: usize,
    modulus: u64,
    order: Option<usize>,
    result: Value,
    text: String,
    ok: bool,
) -> bool {
    if out.json {
        let v = json!({
            "op": op,
            "n": n,
            "modulus": modulus,
            "order": order,
            "result": result,
            "elapsed_ms": t0.elapsed().as_millis() as u64,
        });
        println!("{v}");
    } else {
        println!("{text}");
    }
    ok
}

fn dispatch(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Parse { file } => {
            let src = read(&file)?;
            let parsed = scenario::parse(&src).map_err(|d| anyhow!("{}:{d}", file.display()))?;
            print!("{}", scenario::print(&parsed));
            Ok(true)
        }
        Cmd::Run { file, report } => {
            let src = read(&file)?;
            let parsed = scenario::parser::parse_file(&src).map_err(|d| anyhow!("{}:{d}", file.display()))?;
            let r = scenario::run(&parsed, &stem(&file), &report.options());
            Ok(emit(&r, report.json))
        }
        Cmd::Replay { dir, report } => {
            if !dir.is_dir() {
                bail!("{} is not a directory", dir.display());
            }
            let r = scenario::replay_all(&dir, &report.options());
            Ok(emit(&r, report.json))
        }
        Cmd::Lint { dir } => {
            let problems = scenario::lint(&dir);
            for p in &problems {
                println!("{p}");
            }
            Ok(problems.is_empty())
        }
        Cmd::Compose { aut, exprs } => {
            let mut acc = Endo::identity(aut.rank);
            for e in &exprs {
                acc = acc.compose(&eval(aut.rank, e)?)?;
            }
            println!("{acc}");
            Ok(true)
        }
        Cmd::Apply { aut, expr, word } => {
            let f = eval(aut.rank, &expr)?;
            let w = Word::parse(aut.rank, &word)?;
            println!("{}", f.apply(&w)?);
            Ok(true)
        }
        Cmd::Order { aut, expr } => {
            let f = eval(aut.rank, &expr)?;
            println!("order: {}", show_order(f.order(aut.caps.caps())));
            println!("order in Out: {}", show_order(f.out_order(aut.caps.caps())));
            Ok(true)
        }
        Cmd::Inner { aut, expr } => {
            let f = eval(aut.rank, &expr)?;
            match f.inner_witness() {
                Some(w) => {
                    println!("inner: conjugation by {w}");
                    Ok(true)
                }
                None => {
                    println!("not inner");
                    Ok(false)
                }
            }
        }
        Cmd::Abelianize { aut, expr, modulus } => {
            let m = abelianize(&eval(aut.rank, &expr)?);
            match modulus {
                Some(q) => println!("{}", m.mod_reduce(q)?),
                None => println!("{m}"),
            }
            Ok(true)
        }
        Cmd::Det { aut, expr } => {
            println!("{}", abelianize(&eval(aut.rank, &expr)?).det()?);
            Ok(true)
        }
        Cmd::Realize {
            file,
            gaut,
            basis,
            delta,
            scenario_name,
        } => {
            let src = read(&file)?;
            let expr = match delta {
                Some(d) => format!("realize({gaut}, {basis}, {d})"),
                None => format!("realize({gaut}, {basis})"),
            };
            let parsed = scenario::parser::parse_file(&src).map_err(|d| anyhow!("{}: {d}", file.display()))?;
            // The first scenario that has an instance matching `--scenario`
            // (or any instance, without it) and defines both names.
            let mut found = None;
            for sc in parsed.scenarios {
                let single = ScenarioFile { scenarios: vec![sc] };
                let insts = expand_file(&single, &stem(&file)).map_err(|d| anyhow!("{d}"))?;
                let hit = insts.iter().find(|i| {
                    scenario_name.as_deref().is_none_or(|n| i.scenario == n)
                        && i.gauts.contains_key(&gaut)
                        && i.bases.contains_key(&basis)
                });
                if let Some(i) = hit {
                    found = Some((scenario::print(&single), i.scenario.clone()));
                    break;
                }
            }
            let (prelude, name) =
                found.ok_or_else(|| anyhow!("no scenario defines both `{gaut}` and `{basis}`"))?;
            println!("{}", eval_instance(&prelude, &expr, Some(&name))?);
            Ok(true)
        }
        Cmd::Closure {
            n,
            modulus,
            level,
            cap,
            out,
        } => {
            let t0 = Instant::now();
            let rows = closure_matches_kernel(n, modulus, level, cap)?;
            let all = rows.iter().all(|r| r.2);
            let text = rows
                .iter()
                .map(|((k, r), order, same)| {
                    let verdict = if *same { "equals" } else { "differs from" };
                    format!("e_{k}{r}^{level}: closure of order {order} {verdict} the level-{level} kernel")
                })
                .collect::<Vec<_>>()
                .join("\n");
            let result = json!(rows
                .iter()
                .map(|((k, r), order, same)| json!({"k": k, "r": r, "closure_order": order, "equals_kernel": same}))
                .collect::<Vec<_>>());
            let order = rows.first().map(|r| r.1);
            Ok(finish(&out, t0, "closure", n, modulus, order, result, text, all))
        }
        Cmd::Group {
            n,
            modulus,
            projective,
            out,
        } => {
            let t0 = Instant::now();
            let sl = FiniteGroupTable::sl(n, modulus, DEFAULT_CAP)?;
            let t = if projective { sl.quotient_by_center(DEFAULT_CAP)? } else { sl };
            let name = if projective { "PSL" } else { "SL" };
            let (center, simple) = (t.center().len(), t.is_simple());
            let text = format!(
                "{name}_{n}(Z/{modulus}): order {}\ncenter order {center}\nsimple: {simple}",
                t.order()
            );
            let result = json!({"group": name, "center_order": center, "simple": simple});
            Ok(finish(&out, t0, "group", n, modulus, Some(t.order()), result, text, true))
        }
        Cmd::Kernel { n, out } => {
            let t0 = Instant::now();
            let r = kernel_report(n)?;
            let text = format!(
                "SL_{n}(Z/4): order {}\nkernel of reduction mod 2: order {}\nimage: {} of {}\n\
                 kernel is I + 2A with tr A even: {}\ntrace map is a homomorphism: {}, bijective: {}",
                r.group_order,
                r.kernel_order,
                r.image_order,
                r.target_order,
                r.matches_trace_zero,
                r.homomorphism,
                r.bijective
            );
            let result = json!({
                "kernel_order": r.kernel_order,
                "image_order": r.image_order,
                "target_order": r.target_order,
                "matches_trace_zero": r.matches_trace_zero,
                "homomorphism": r.homomorphism,
                "bijective": r.bijective,
            });
            Ok(finish(&out, t0, "kernel", n, 4, Some(r.group_order), result, text, r.all_hold()))
        }
        Cmd::Splitting { sanity, out } => {
            let t0 = Instant::now();
            let (n, modulus, r) = if sanity {
                (3, 3, sanity_splitting()?)
            } else {
                let target = FiniteGroupTable::sl(3, 2, DEFAULT_CAP)?;
                let (a, b) = find_generating_pair(&target, target.order())
                    .ok_or_else(|| anyhow!("no generating pair found"))?;
                (3, 4, sl_mod4_splitting(&a, &b)?)
            };
            let (text, result) = match r {
                SplitResult::Splitting { a, b } => (
                    format!("section generated by\n{a}\nand\n{b}"),
                    json!({"splitting": true, "a": a.to_string(), "b": b.to_string()}),
                ),
                SplitResult::NoSplitting {
                    pairs_checked,
                    pairs_enumerated,
                } => (
                    format!("no section; {pairs_checked} of {pairs_enumerated} lift pairs checked"),
                    json!({"splitting": false, "pairs_checked": pairs_checked, "pairs_enumerated": pairs_enumerated}),
                ),
            };
            Ok(finish(&out, t0, "splitting", n, modulus, None, result, text, true))
        }
        Cmd::Subreps { n, out } => {
            let t0 = Instant::now();
            let dims: Vec<usize> = invariant_subreps(n)?.iter().map(|s| s.dim()).collect();
            let text = format!("invariant subspace dimensions: {dims:?}");
            Ok(finish(&out, t0, "subreps", n, 2, None, json!({"dimensions": dims}), text, true))
        }
        Cmd::Obstruction { n, out } => {
            let t0 = Instant::now();
            let (text, result, ok) = match split_obstruction(n) {
                ObstructionResult::Infeasible {
                    system,
                    combination,
                    violated,
                    ..
                } => {
                    let verified = system.verify_certificate(&combination);
                    (
                        format!(
                            "infeasible: {} equations in {} unknowns\ncertificate rows {combination:?} verify: {verified}\n\
                             dropping the trace equation leaves a solution violating {violated:?}",
                            system.equations.len(),
                            system.vars
                        ),
                        json!({"status": "infeasible", "certificate": combination, "verified": verified, "violated": violated}),
                        verified,
                    )
                }
                ObstructionResult::Feasible(x) => (
                    format!("feasible: {x:?}"),
                    json!({"status": "feasible", "solution": x}),
                    false,
                ),
                ObstructionResult::Rejected(why) => (
                    format!("rejected: {why}"),
                    json!({"status": "rejected", "reason": why}),
                    false,
                ),
            };
            Ok(finish(&out, t0, "obstruction", n, 2, None, result, text, ok))
        }
    }
}
