//! `cayley-ci`: construct groups, compute closures, run CI checks, tower
//! searches and the named reproduction pipelines.
//!
//! Exit codes: 0 pass, 1 fail, 2 usage error, 3 cap or budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use cayley_ci::ci::{babai_check, block_tower_search, Transcript, TowerOutcome};
use cayley_ci::closures::{is_k_closed_with_budget, k_closure_with_budget, ClosureBudget};
use cayley_ci::repro::{reproduce, ReproOptions, CLAIMS, DEFAULT_SAMPLES, DEFAULT_SEED};
use cayley_ci::zoo::{cor2_groups, frobenius_natural, inner_holomorph, regular_representation, GroupSpec, Side};
use cayley_ci::{Error, PermGroup, DEFAULT_CAP};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cayley-ci", version, about = "Permutation-group tools for Cayley isomorphism questions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Largest group order that may be enumerated element by element.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP as u64)]
    cap: u64,
    /// Largest degree for closure computations (both arities).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the search transcript here as JSON lines.
    #[arg(long, global = true)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct GroupSource {
    /// Group spec as JSON or by name, e.g. `frobenius(5,4)`.
    #[arg(long)]
    spec: Option<String>,
    /// Use the inner holomorph of `--spec` instead of its regular action.
    #[arg(long)]
    holomorph: bool,
    /// Right instead of left regular action.
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
    /// Prime for the natural Frobenius action (with `--n`).
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// A permutation group as JSON, or a path to a JSON file.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a permutation group: a regular representation, an inner
    /// holomorph, a natural Frobenius action or the pair `G₁, G₂`
    /// (with `--p --n --a --b`).
    Construct {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
    },
    /// The k-closure of a group and whether the group is k-closed.
    Closure {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Count classes of regular subgroups of an ambient group isomorphic to
    /// `--spec`. The ambient group is `--group`, or the inner holomorph of
    /// `--ambient-spec`, or the inner holomorph of `--spec`.
    CiCheck {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        ambient_spec: Option<String>,
        #[arg(long)]
        group: Option<String>,
    },
    /// Block-tower search for two regular groups given as JSON or files.
    Tower { r: String, t: String },
    /// Run a named reproduction pipeline; `list` prints the claim ids.
    Reproduce {
        claim: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Alternative M12 generators for `m12-semiregular`.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Inline JSON when it starts with `{` or `[`, otherwise a file path.
fn read_json(arg: &str) -> anyhow::Result<Value> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("malformed JSON in {arg}: {e}")))
}

fn parse_group(arg: &str) -> anyhow::Result<PermGroup> {
    serde_json::from_value(read_json(arg)?).map_err(|e| usage(format!("not a permutation group: {e}")))
}

fn parse_spec(s: &str) -> anyhow::Result<GroupSpec> {
    GroupSpec::parse(s).map_err(|e| usage(e.to_string()))
}

impl GroupSource {
    fn resolve(&self) -> anyhow::Result<(String, PermGroup)> {
        match (&self.spec, self.p, self.n, &self.group) {
            (Some(s), None, None, None) => {
                let spec = parse_spec(s)?;
                if self.holomorph {
                    Ok((format!("inner holomorph of {spec}"), inner_holomorph(&spec)?))
                } else {
                    let side = match self.side {
                        SideArg::Left => Side::Left,
                        SideArg::Right => Side::Right,
                    };
                    Ok((format!("{spec} regular"), regular_representation(&spec, side)?.group))
                }
            }
            (None, Some(p), Some(n), None) => Ok((format!("frobenius({p},{n}) natural"), frobenius_natural(p, n)?)),
            (None, None, None, Some(g)) => Ok(("given group".into(), parse_group(g)?)),
            _ => Err(usage("give exactly one of --spec, --p with --n, or --group")),
        }
    }
}

fn budget(common: &Common) -> ClosureBudget {
    common.budget.map_or_else(ClosureBudget::default, ClosureBudget::uniform)
}

fn write_transcript(common: &Common, log: &Transcript) -> anyhow::Result<()> {
    if let Some(path) = &common.transcript {
        fs::write(path, log.to_json_lines()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Runs the command; returns the JSON to print and whether it passed.
fn run(cli: &Cli) -> anyhow::Result<(Value, bool)> {
    let common = &cli.common;
    let cap = common.cap as u128;
    match &cli.command {
        Command::Construct { source, a, b } => {
            if let (Some(p), Some(n), Some(a), Some(b)) = (source.p, source.n, a, b) {
                let (g1, g2) = cor2_groups(p, n, *a, *b)?;
                return Ok((json!({ "p": p, "n": n, "a": a, "b": b, "g1": g1, "g2": g2 }), true));
            }
            if a.is_some() || b.is_some() {
                bail!(usage("--a and --b need --p and --n"));
            }
            let (name, g) = source.resolve()?;
            Ok((json!({ "name": name, "order": g.order() as u64, "group": g }), true))
        }
        Command::Closure { source, k } => {
            if !(2..=3).contains(k) {
                bail!(usage("--k must be 2 or 3"));
            }
            let (name, g) = source.resolve()?;
            let b = budget(common);
            let closure = k_closure_with_budget(&g, *k, &b)?;
            let closed = is_k_closed_with_budget(&g, *k, &b)?;
            Ok((
                json!({
                    "name": name,
                    "k": k,
                    "order": g.order() as u64,
                    "closure_order": closure.order() as u64,
                    "is_k_closed": closed,
                    "closure": closure,
                }),
                true,
            ))
        }
        Command::CiCheck {
            spec,
            ambient_spec,
            group,
        } => {
            let target = parse_spec(spec)?;
            let ambient = match (ambient_spec, group) {
                (Some(_), Some(_)) => bail!(usage("give at most one of --ambient-spec and --group")),
                (Some(s), None) => inner_holomorph(&parse_spec(s)?)?,
                (None, Some(g)) => parse_group(g)?,
                (None, None) => inner_holomorph(&target)?,
            };
            let verdict = babai_check(&ambient, &target, cap)?;
            write_transcript(common, &verdict.transcript)?;
            Ok((serde_json::to_value(&verdict)?, true))
        }
        Command::Tower { r, t } => {
            let (r, t) = (parse_group(r)?, parse_group(t)?);
            let outcome = block_tower_search(&r, &t, cap)?;
            let (log, found) = match &outcome {
                TowerOutcome::Found(res) => (&res.transcript, true),
                TowerOutcome::NotFound(f) => (&f.transcript, false),
            };
            write_transcript(common, log)?;
            Ok((serde_json::to_value(&outcome)?, found))
        }
        Command::Reproduce {
            claim,
            seed,
            samples,
            fixture,
            timing,
        } => {
            if claim == "list" {
                return Ok((json!(CLAIMS), true));
            }
            if !CLAIMS.contains(&claim.as_str()) {
                bail!(usage(format!("unknown claim id {claim:?}; known: {}", CLAIMS.join(", "))));
            }
            let opts = ReproOptions {
                cap,
                budget: budget(common),
                seed: *seed,
                samples: *samples,
                m12: fixture.as_deref().map(Path::to_string_lossy).map(|p| parse_group(&p)).transpose()?,
            };
            let start = Instant::now();
            let mut report = reproduce(claim, &opts)?;
            if *timing {
                report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
            }
            let pass = report.pass;
            Ok((serde_json::to_value(&report)?, pass))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. } | Error::BudgetExceeded { .. }) => 3,
        Some(Error::InvalidSpec(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(value, pass)| {
        let text = serde_json::to_string_pretty(&value)? + "\n";
        match &cli.common.out {
            Some(path) => fs::write(path, text).map_err(|e| anyhow!("writing {}: {e}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
