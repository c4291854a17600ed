use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use genfib_core::diophantine::{self, Parity, ParityRule};
use genfib_core::divisibility;
use genfib_core::divisors::{self, TauScanEntry};
use genfib_core::identities::{self, InvariantForm};
use genfib_core::{quadfield, sequence, Error, SequenceParams};

mod record;

use record::{Record, Status};

#[derive(Parser)]
#[command(name = "genfib", version, about = "Generalized Fibonacci toolkit")]
struct Cli {
    /// Cap the worker thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate G_n.
    Compute {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Fast)]
        method: Method,
    },
    /// Check the addition formula or the determinant identity.
    Identity {
        #[command(subcommand)]
        which: IdentityCommand,
    },
    /// Enumerate a parameter grid and list the divisible sequences.
    ScanDivisible {
        #[arg(long, value_parser = parse_range)]
        u_range: (i64, i64),
        #[arg(long, value_parser = parse_range)]
        v_range: (i64, i64),
        #[arg(long, value_parser = parse_range)]
        a_range: (i64, i64),
        #[arg(long, value_parser = parse_range)]
        b_range: (i64, i64),
        #[arg(long, default_value_t = 30)]
        bound: u64,
    },
    /// gcd(F_m, F_n) = F_gcd(m,n) for all 1 <= m, n <= max.
    GcdIdentity {
        #[arg(long, value_parser = parse_big)]
        a: BigInt,
        #[arg(long, value_parser = parse_big)]
        b: BigInt,
        #[arg(long)]
        max: u64,
    },
    /// Solutions of 5x^2 + 4y^2 = z^2.
    Dioph {
        #[command(subcommand)]
        which: DiophCommand,
    },
    /// Sums of two squares.
    #[command(args_conflicts_with_subcommands = true)]
    Bisquare {
        #[arg(long, value_parser = parse_big)]
        n: Option<BigInt>,
        #[command(subcommand)]
        scan: Option<BisquareCommand>,
    },
    /// Check that every term of one index parity is a sum of two squares.
    AltBisquable {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        k_max: u64,
        #[arg(long, value_enum)]
        parity: ParityArg,
    },
    /// Lower bounds on the divisor count of F_n.
    TauBounds {
        #[arg(long, value_parser = parse_big)]
        a: BigInt,
        #[arg(long, value_parser = parse_big)]
        b: BigInt,
        #[arg(long)]
        n_max: u64,
    },
    /// Primitive prime divisors of F_n.
    Primitive {
        #[arg(long, value_parser = parse_big)]
        a: BigInt,
        #[arg(long, value_parser = parse_big)]
        b: BigInt,
        #[arg(long, default_value_t = 1)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
    },
}

#[derive(Args)]
struct SeqArgs {
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    u: BigInt,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    v: BigInt,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    a: BigInt,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    b: BigInt,
}

impl SeqArgs {
    fn params(&self) -> SequenceParams {
        SequenceParams::new(
            self.u.clone(),
            self.v.clone(),
            self.a.clone(),
            self.b.clone(),
        )
    }
}

#[derive(Subcommand)]
enum IdentityCommand {
    Addition {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        max_m: u64,
        #[arg(long)]
        max_n: u64,
    },
    Determinant {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = FormArg::General)]
        form: FormArg,
    },
}

#[derive(Subcommand)]
enum DiophCommand {
    /// Family members over 1 <= k <= k-max, 1 <= l, m <= lm-max.
    Families {
        #[arg(long)]
        k_max: u64,
        #[arg(long)]
        lm_max: u64,
        #[arg(long, value_enum, default_value_t = RuleArg::AllOdd)]
        rule: RuleArg,
    },
    /// Exhaustive search over z <= z-max.
    Oracle {
        #[arg(long)]
        z_max: u64,
    },
    /// Compare the exhaustive list with the families.
    Complete {
        #[arg(long)]
        z_max: u64,
        #[arg(long)]
        lm_max: u64,
        #[arg(long, value_enum, default_value_t = RuleArg::Derived)]
        rule: RuleArg,
    },
}

#[derive(Subcommand)]
enum BisquareCommand {
    /// Seeds (u, v) whose invariant b u^2 + a u v - v^2 is a perfect square.
    Scan {
        #[arg(long)]
        u_max: u64,
        #[arg(long)]
        v_max: u64,
        #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
        b: BigInt,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Iter,
    Fast,
    Matrix,
    Binet,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    General,
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    AllOdd,
    Derived,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("`{s}` is not an integer"))
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("`{s}` is not a range of the form lo..hi"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound in `{s}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound in `{s}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

fn params_json(p: &SequenceParams) -> Value {
    json!({
        "u": p.u.to_string(),
        "v": p.v.to_string(),
        "a": p.a.to_string(),
        "b": p.b.to_string(),
    })
}

fn rule(r: RuleArg) -> ParityRule {
    match r {
        RuleArg::AllOdd => ParityRule::AllOdd,
        RuleArg::Derived => ParityRule::Derived,
    }
}

fn rule_name(r: RuleArg) -> &'static str {
    match r {
        RuleArg::AllOdd => "all-odd",
        RuleArg::Derived => "derived",
    }
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Violated
    }
}

fn run(command: Command) -> Vec<Record> {
    match command {
        Command::Compute { seq, n, method } => {
            let p = seq.params();
            let input = json!({"params": params_json(&p), "n": n});
            let value = match method {
                Method::Iter => Ok(sequence::g_iter(&p, n)),
                Method::Fast => Ok(sequence::g_fast(&p, n)),
                Method::Matrix => Ok(sequence::g_matrix(&p, n)),
                Method::Binet => quadfield::binet(&p, n),
            };
            vec![match value {
                Ok(v) => Record::new("compute", input, json!({"value": v.to_string()}), Status::Ok),
                Err(e) => Record::error("compute", input, &e),
            }]
        }
        Command::Identity { which } => identity(which),
        Command::ScanDivisible {
            u_range,
            v_range,
            a_range,
            b_range,
            bound,
        } => {
            let survivors = divisibility::scan_divisible(
                u_range.0..=u_range.1,
                v_range.0..=v_range.1,
                a_range.0..=a_range.1,
                b_range.0..=b_range.1,
                bound,
            );
            let input = json!({"bound": bound});
            let mut out: Vec<Record> = survivors
                .iter()
                .map(|(p, _)| {
                    Record::new(
                        "scan-divisible",
                        input.clone(),
                        json!({"params": params_json(p), "verdict": "divisible"}),
                        Status::Ok,
                    )
                })
                .collect();
            let grid = |r: (i64, i64)| format!("{}..{}", r.0, r.1);
            out.push(Record::new(
                "scan-divisible-summary",
                json!({
                    "u_range": grid(u_range),
                    "v_range": grid(v_range),
                    "a_range": grid(a_range),
                    "b_range": grid(b_range),
                    "bound": bound,
                }),
                json!({"survivors": survivors.len()}),
                Status::Ok,
            ));
            out
        }
        Command::GcdIdentity { a, b, max } => {
            let input = json!({"a": a.to_string(), "b": b.to_string(), "max": max});
            let mut violations = Vec::new();
            for m in 1..=max {
                for n in 1..=max {
                    match divisibility::gcd_identity_check(&a, &b, m, n) {
                        Ok(true) => {}
                        Ok(false) => violations.push(json!([m, n])),
                        Err(e) => return vec![Record::error("gcd-identity", input, &e)],
                    }
                }
            }
            let ok = violations.is_empty();
            vec![Record::new(
                "gcd-identity",
                input,
                json!({"checked": max * max, "violations": violations}),
                status_of(ok),
            )]
        }
        Command::Dioph { which } => dioph(which),
        Command::Bisquare { n, scan } => match (n, scan) {
            (_, Some(BisquareCommand::Scan { u_max, v_max, a, b })) => {
                let input = json!({"u_max": u_max, "v_max": v_max, "a": a.to_string(), "b": b.to_string()});
                diophantine::square_invariant_pairs(u_max.max(v_max), &a, &b)
                    .into_iter()
                    .filter(|(u, v, _)| *u <= BigInt::from(u_max) && *v <= BigInt::from(v_max))
                    .map(|(u, v, t)| {
                        Record::new(
                            "square-invariant",
                            input.clone(),
                            json!({"u": u.to_string(), "v": v.to_string(), "t": t.to_string()}),
                            Status::Ok,
                        )
                    })
                    .collect()
            }
            (Some(n), None) => {
                let input = json!({"n": n.to_string()});
                let result = diophantine::is_bisquare(&n).and_then(|is| {
                    diophantine::two_square_decomposition(&n).map(|d| (is, d))
                });
                vec![match result {
                    Ok((is, d)) => Record::new(
                        "bisquare",
                        input,
                        json!({
                            "bisquare": is,
                            "decomposition": d.map(|(r, s)| json!([r.to_string(), s.to_string()])),
                        }),
                        Status::Ok,
                    ),
                    Err(e) => Record::error("bisquare", input, &e),
                }]
            }
            (None, None) => vec![Record::error(
                "bisquare",
                json!({}),
                &Error::Domain("pass --n or the scan subcommand".into()),
            )],
        },
        Command::AltBisquable {
            seq,
            k_max,
            parity,
        } => {
            let p = seq.params();
            let (parity, name) = match parity {
                ParityArg::Even => (Parity::Even, "even"),
                ParityArg::Odd => (Parity::Odd, "odd"),
            };
            let input = json!({"params": params_json(&p), "k_max": k_max, "parity": name});
            let gated = diophantine::check_alternating_bisquable(&p, k_max, parity)
                .and_then(|_| diophantine::bisquable_terms(&p, k_max, parity));
            vec![match gated {
                Ok(report) => {
                    let terms: Vec<Value> = report
                        .terms
                        .iter()
                        .map(|w| {
                            json!({
                                "n": w.n,
                                "value": w.value.to_string(),
                                "decomposition": w.decomposition.as_ref()
                                    .map(|(r, s)| json!([r.to_string(), s.to_string()])),
                            })
                        })
                        .collect();
                    Record::new(
                        "alt-bisquable",
                        input,
                        json!({"holds": report.holds(), "terms": terms}),
                        status_of(report.holds()),
                    )
                }
                Err(e) => Record::error("alt-bisquable", input, &e),
            }]
        }
        Command::TauBounds { a, b, n_max } => {
            let input = json!({"a": a.to_string(), "b": b.to_string(), "n_max": n_max});
            match divisors::scan_tau_bounds(&a, &b, n_max) {
                Err(e) => vec![Record::error("tau-bounds", input, &e)],
                Ok(entries) => entries
                    .into_iter()
                    .map(|entry| match entry {
                        TauScanEntry::Checked(c) => Record::new(
                            "tau-bounds",
                            json!({"a": a.to_string(), "b": b.to_string(), "n": c.n}),
                            json!({
                                "tau": c.tau,
                                "tau_exact": c.tau_exact,
                                "omega_bound": c.omega_bound,
                                "divisor_bound": c.divisor_bound,
                                "omega_bound_ok": c.omega_bound_ok,
                                "tau_bound_ok": c.tau_bound_ok,
                            }),
                            status_of(c.holds()),
                        ),
                        TauScanEntry::Skipped { n, reason } => Record::new(
                            "tau-bounds",
                            json!({"a": a.to_string(), "b": b.to_string(), "n": n}),
                            json!({"reason": reason}),
                            Status::Skipped,
                        ),
                    })
                    .collect(),
            }
        }
        Command::Primitive { a, b, n_min, n_max } => {
            divisors::primitive_divisor_scan(&a, &b, n_min.max(1), n_max)
                .into_iter()
                .map(|(n, report)| {
                    let input = json!({"a": a.to_string(), "b": b.to_string(), "n": n});
                    match report {
                        Ok(r) => Record::new(
                            "primitive",
                            input,
                            json!({
                                "has_primitive": r.has_primitive,
                                "primes": r.primitive_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                            }),
                            Status::Ok,
                        ),
                        Err(e) => Record::error("primitive", input, &e),
                    }
                })
                .collect()
        }
    }
}

fn identity(which: IdentityCommand) -> Vec<Record> {
    match which {
        IdentityCommand::Addition { seq, max_m, max_n } => {
            let p = seq.params();
            let mut out = Vec::new();
            for m in 0..=max_m {
                for n in 0..=max_n {
                    let s = identities::addition_sides(&p, m, n);
                    out.push(Record::new(
                        "identity-addition",
                        json!({"params": params_json(&p), "m": m, "n": n}),
                        json!({"lhs": s.lhs.to_string(), "rhs": s.rhs.to_string()}),
                        status_of(s.holds()),
                    ));
                }
            }
            out
        }
        IdentityCommand::Determinant { seq, max_n, form } => {
            let p = seq.params();
            let (form, name) = match form {
                FormArg::General => (InvariantForm::General, "general"),
                FormArg::Literal => (InvariantForm::Literal, "literal"),
            };
            (0..=max_n)
                .map(|n| {
                    let s = identities::determinant_sides(&p, n, form);
                    Record::new(
                        "identity-determinant",
                        json!({"params": params_json(&p), "n": n, "form": name}),
                        json!({"lhs": s.lhs.to_string(), "rhs": s.rhs.to_string()}),
                        status_of(s.holds()),
                    )
                })
                .collect()
        }
    }
}

fn dioph(which: DiophCommand) -> Vec<Record> {
    match which {
        DiophCommand::Families {
            k_max,
            lm_max,
            rule: r,
        } => {
            let input = json!({"k_max": k_max, "lm_max": lm_max, "rule": rule_name(r)});
            diophantine::family_solutions(k_max, lm_max, rule(r))
                .into_iter()
                .map(|s| {
                    let ok = diophantine::is_solution(&s.x, &s.y, &s.z);
                    Record::new(
                        "dioph-family",
                        input.clone(),
                        json!({
                            "family": s.family.to_string(),
                            "k": s.k.to_string(),
                            "l": s.l.to_string(),
                            "m": s.m.to_string(),
                            "x": s.x.to_string(),
                            "y": s.y.to_string(),
                            "z": s.z.to_string(),
                        }),
                        status_of(ok),
                    )
                })
                .collect()
        }
        DiophCommand::Oracle { z_max } => diophantine::brute_force_solutions(z_max)
            .into_iter()
            .map(|(x, y, z)| {
                Record::new(
                    "dioph-oracle",
                    json!({"z_max": z_max}),
                    json!({"x": x, "y": y, "z": z}),
                    Status::Ok,
                )
            })
            .collect(),
        DiophCommand::Complete {
            z_max,
            lm_max,
            rule: r,
        } => {
            let report = diophantine::completeness_report(z_max, lm_max, rule(r));
            let triples = |v: &[(u64, u64, u64)]| -> Vec<Value> {
                v.iter().map(|t| json!([t.0, t.1, t.2])).collect()
            };
            vec![Record::new(
                "dioph-complete",
                json!({"z_max": z_max, "lm_max": lm_max, "rule": rule_name(r)}),
                json!({
                    "total": report.total,
                    "matched": report.matched,
                    "degenerate": report.degenerate.len(),
                    "unmatched": triples(&report.unmatched),
                }),
                status_of(report.is_complete()),
            )]
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("genfib: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    let records = run(cli.command);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for r in &records {
        if let Some(msg) = r.diagnostic() {
            eprintln!("genfib: {msg}");
        }
        if writeln!(out, "{}", r.to_line()).is_err() {
            return ExitCode::from(2);
        }
    }
    ExitCode::from(record::exit_code(&records))
}
