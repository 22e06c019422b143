//! Command-line front end.
//!
//! [`run`] parses the arguments, dispatches to the library and returns the
//! exit code and output streams. Exit code 0 means success or a true verdict,
//! 1 a false verdict, 2 a usage or data error.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::corr::{pullback_square, CompMap};
use crate::equations::{i_lambda, i_lambda_z, member_by_equations, reduce, TypeIdeal};
use crate::error::{Error, Result};
use crate::partitions::{
    good_filling_exists, min_excluded, preceq, ExtNat, GenComposition, GenPartition,
};
use crate::poly::{discriminant, extract_discriminant, q, skew_sum, verify_witness, Q};
use crate::sample::{self, MapKind};
use crate::variety::{
    contains, format_tuple, gamma_at, theta_member, type_of, FinitaryPoint, PointSetVariety,
};

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "symvar",
    version,
    about = "Symmetric-group-stable varieties: orders, closures, equations"
)]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type of a finitary point, e.g. `0^inf,1^3`.
    Type { point: String },
    /// Decide mu ⪯ lambda.
    Preceq { mu: String, lambda: String },
    /// The minimal finite partitions not ⪯ lambda.
    MinExcluded { lambda: String },
    /// Generators of I_lambda, or of I_lambda(Z) with --variety.
    Equations {
        lambda: String,
        #[arg(long)]
        variety: Option<String>,
        /// Drop generators implied by the others on a random test battery.
        #[arg(long)]
        reduce: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Membership of a finitary point in the type locus or in Theta_lambda(Z).
    Member {
        lambda: String,
        point: String,
        #[arg(long)]
        variety: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
    /// Decide Theta_mu(Z1) ⊂ Theta_lambda(Z2).
    Contains {
        mu: String,
        file1: String,
        lambda: String,
        file2: String,
    },
    /// The point set Gamma_lambda(Z) at the composition mu.
    Gamma {
        lambda: String,
        file: String,
        mu: String,
    },
    /// Run the randomized invariant battery.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Equations,
    Both,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<S: AsRef<str>>(args: &[S]) -> Outcome {
    let args: Vec<&str> = args.iter().map(AsRef::as_ref).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let stdout = if cli.json {
                let mut s = report.json.to_string();
                s.push('\n');
                s
            } else {
                report.text
            };
            Outcome {
                code: report.code,
                stdout,
                stderr: report.diagnostics,
            }
        }
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Report {
    code: i32,
    text: String,
    json: Value,
    diagnostics: String,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            code: 0,
            text,
            json,
            diagnostics: String::new(),
        }
    }

    fn verdict(v: bool, json: Value) -> Self {
        Report {
            code: if v { 0 } else { 1 },
            text: format!("{v}\n"),
            json,
            diagnostics: String::new(),
        }
    }
}

fn parse_partition(s: &str) -> Result<GenPartition> {
    s.parse()
}

fn parse_composition(s: &str) -> Result<GenComposition> {
    let weights = s
        .split(',')
        .map(|t| t.trim().parse::<ExtNat>())
        .collect::<Result<Vec<_>>>()?;
    GenComposition::new(weights)
}

fn read_variety(path: &str) -> Result<PointSetVariety> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {path}: {e}")))?;
    PointSetVariety::parse_json(&text)
}

fn variety_for(lambda: &GenPartition, path: &str) -> Result<PointSetVariety> {
    let z = read_variety(path)?;
    if &z.lambda().shape() != lambda {
        return Err(Error::Incompatible(format!(
            "{path} lives on {} which does not have shape {lambda}",
            z.lambda()
        )));
    }
    Ok(z)
}

fn ideal_json(ideal: &TypeIdeal) -> Value {
    json!({
        "lambda": ideal.lambda.to_string(),
        "generators": ideal.generators.iter().map(|g| json!({
            "provenance": g.provenance.to_string(),
            "polynomial": g.poly.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Type { point } => {
            let x: FinitaryPoint = point.parse()?;
            let t = type_of(&x);
            Ok(Report::ok(
                format!("{t}\n"),
                json!({ "type": t.to_string() }),
            ))
        }
        Command::Preceq { mu, lambda } => {
            let v = preceq(&parse_partition(mu)?, &parse_partition(lambda)?);
            Ok(Report::verdict(v, json!({ "result": v })))
        }
        Command::MinExcluded { lambda } => {
            let set = min_excluded(&parse_partition(lambda)?)?;
            let text: String = set.iter().map(|p| format!("{p}\n")).collect();
            let list: Vec<String> = set.iter().map(ToString::to_string).collect();
            Ok(Report::ok(text, json!({ "min_excluded": list })))
        }
        Command::Equations {
            lambda,
            variety,
            reduce: do_reduce,
            seed,
        } => {
            let lam = parse_partition(lambda)?;
            let (mut ideal, values) = match variety {
                Some(path) => {
                    let z = variety_for(&lam, path)?;
                    (
                        i_lambda_z(&lam, &z)?,
                        z.coordinate_values().into_iter().collect(),
                    )
                }
                None => (i_lambda(&lam)?, (0..4).map(q).collect::<Vec<Q>>()),
            };
            let mut diagnostics = String::new();
            if *do_reduce {
                ideal = reduce(&ideal, &values, *seed);
                diagnostics.push_str("note: --reduce is heuristic; dropped generators were checked on a random battery only\n");
            }
            Ok(Report {
                code: 0,
                text: ideal.to_string(),
                json: ideal_json(&ideal),
                diagnostics,
            })
        }
        Command::Member {
            lambda,
            point,
            variety,
            method,
        } => {
            let lam = parse_partition(lambda)?;
            let x: FinitaryPoint = point.parse()?;
            let z = variety
                .as_deref()
                .map(|p| variety_for(&lam, p))
                .transpose()?;
            let direct = || -> Result<bool> {
                match &z {
                    Some(z) => theta_member(z, &x),
                    None => {
                        min_excluded(&lam)?;
                        Ok(preceq(&type_of(&x), &lam))
                    }
                }
            };
            let by_equations = || -> Result<bool> {
                let ideal = match &z {
                    Some(z) => i_lambda_z(&lam, z)?,
                    None => i_lambda(&lam)?,
                };
                Ok(member_by_equations(&ideal, &x))
            };
            match method {
                Method::Direct => {
                    let v = direct()?;
                    Ok(Report::verdict(
                        v,
                        json!({ "member": v, "method": "direct" }),
                    ))
                }
                Method::Equations => {
                    let v = by_equations()?;
                    Ok(Report::verdict(
                        v,
                        json!({ "member": v, "method": "equations" }),
                    ))
                }
                Method::Both => {
                    let (a, b) = (direct()?, by_equations()?);
                    if a != b {
                        return Ok(Report {
                            code: 2,
                            text: format!("disagreement: direct={a} equations={b}\n"),
                            json: json!({ "direct": a, "equations": b, "agree": false }),
                            diagnostics: "error: the two membership methods disagree\n".into(),
                        });
                    }
                    Ok(Report::verdict(
                        a,
                        json!({ "member": a, "direct": a, "equations": b, "agree": true }),
                    ))
                }
            }
        }
        Command::Contains {
            mu,
            file1,
            lambda,
            file2,
        } => {
            let z1 = variety_for(&parse_partition(mu)?, file1)?;
            let z2 = variety_for(&parse_partition(lambda)?, file2)?;
            let v = contains(&z1, &z2)?;
            Ok(Report::verdict(v, json!({ "contains": v })))
        }
        Command::Gamma { lambda, file, mu } => {
            let z = variety_for(&parse_partition(lambda)?, file)?;
            let g = gamma_at(&z, &parse_composition(mu)?);
            let text: String = g
                .points()
                .iter()
                .map(|p| format!("{}\n", format_tuple(p)))
                .collect();
            Ok(Report::ok(text, g.to_json()))
        }
        Command::Selfcheck { seed } => Ok(selfcheck(*seed)),
    }
}

struct Tally {
    name: &'static str,
    passed: usize,
    total: usize,
}

/// Runs every check family on seeded random instances.
fn selfcheck(seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = Vec::new();
    let small: Vec<Q> = (0..4).map(q).collect();

    let mut t = Tally {
        name: "skew-sum identity",
        passed: 0,
        total: 0,
    };
    for n in 2..=5u32 {
        for k in 0..n {
            let want = if k == n - 1 {
                discriminant(n)
            } else {
                Default::default()
            };
            t.total += 1;
            t.passed += usize::from(skew_sum(n, k) == want);
        }
    }
    tallies.push(t);

    let mut t = Tally {
        name: "discriminant extraction",
        passed: 0,
        total: 0,
    };
    for _ in 0..20 {
        let f = sample::polynomial(&mut rng, 3, 3);
        t.total += 1;
        t.passed += usize::from(extract_discriminant(&f).is_ok_and(|w| verify_witness(&f, &w)));
    }
    tallies.push(t);

    let mut t = Tally {
        name: "filling vs grouping",
        passed: 0,
        total: 0,
    };
    let parts = [ExtNat::Fin(1), ExtNat::Fin(2), ExtNat::Fin(3), ExtNat::Inf];
    let all: Vec<GenPartition> = (0..=3)
        .flat_map(|len| {
            itertools::Itertools::multi_cartesian_product((0..len).map(|_| parts.iter().copied()))
        })
        .map(GenPartition::new)
        .chain(std::iter::once(GenPartition::empty()))
        .collect();
    for a in &all {
        for b in &all {
            t.total += 1;
            t.passed += usize::from(preceq(a, b) == good_filling_exists(a, b));
        }
    }
    tallies.push(t);

    let mut t = Tally {
        name: "pullback squares",
        passed: 0,
        total: 0,
    };
    for _ in 0..50 {
        let mu = sample::inf_composition(&mut rng, 3, 4);
        let kind = [
            MapKind::PrincipalSurjection,
            MapKind::Injection,
            MapKind::Arbitrary,
        ][t.total % 3];
        let f1 = sample::map_into(&mut rng, &mu, MapKind::Arbitrary);
        let f2 = sample::map_into(&mut rng, &mu, kind);
        t.total += 1;
        t.passed += usize::from(pullback_ok(&f1, &f2));
    }
    tallies.push(t);

    let mut t = Tally {
        name: "type locus equations vs preceq",
        passed: 0,
        total: 0,
    };
    for _ in 0..60 {
        let lam = sample::inf_partition(&mut rng, 3, 3);
        let x = sample::finitary_point(&mut rng, 4, 4, &small);
        let ideal = i_lambda(&lam).expect("infinite part");
        t.total += 1;
        t.passed += usize::from(member_by_equations(&ideal, &x) == preceq(&type_of(&x), &lam));
    }
    tallies.push(t);

    let mut t = Tally {
        name: "theta equations vs direct",
        passed: 0,
        total: 0,
    };
    for _ in 0..20 {
        let lam = sample::inf_partition(&mut rng, 3, 2);
        let z = sample::distinct_point_set(&mut rng, &lam, 2, &small);
        let ideal = i_lambda_z(&lam, &z).expect("valid input");
        for _ in 0..3 {
            let x = sample::finitary_point(&mut rng, 4, 3, &small);
            t.total += 1;
            t.passed += usize::from(
                member_by_equations(&ideal, &x) == theta_member(&z, &x).expect("distinct"),
            );
        }
    }
    tallies.push(t);

    let mut text = String::new();
    let mut ok = true;
    let mut rows = Vec::new();
    for t in &tallies {
        ok &= t.passed == t.total;
        let _ = writeln!(text, "{}: {}/{} passed", t.name, t.passed, t.total);
        rows.push(json!({ "check": t.name, "passed": t.passed, "total": t.total }));
    }
    let _ = writeln!(
        text,
        "seed {seed}: {}",
        if ok { "all passed" } else { "FAILURES" }
    );
    Report {
        code: if ok { 0 } else { 1 },
        text,
        json: json!({ "seed": seed, "ok": ok, "checks": rows }),
        diagnostics: String::new(),
    }
}

/// Commutativity of the square plus the two preservation properties.
pub fn pullback_ok(f1: &CompMap, f2: &CompMap) -> bool {
    let Ok(sq) = pullback_square(f1, f2) else {
        return false;
    };
    let (Ok(a), Ok(b)) = (sq.g1.then(f1), sq.g2.then(f2)) else {
        return false;
    };
    a.table() == b.table()
        && (!f2.is_principal_surjection() || sq.g1.is_principal_surjection())
        && (!f2.is_injection() || sq.g1.is_injection())
}
