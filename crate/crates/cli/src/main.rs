//! `boundcalc`: evaluate bound expressions, compare them, certify sets of
//! bounds, generate dense chains and export their order structure.
//!
//! Exit codes: 0 holds or certified, 1 fails or refuted, 2 unknown or no
//! answer within the budget, 3 usage error.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use boundcalc::certify::{
    e_consistent, f_consistent, o_regular_check, regular_check, BoundSetSchema, Certificate, Status,
};
use boundcalc::config::BUDGET_ENV;
use boundcalc::order::{
    cantor_to_cut, cut_to_cantor, export_order, real_to_cantor, CantorSeq, Cut, Dyadic,
};
use boundcalc::relations::{
    cmp_ae, cmp_growth, is_tame, le_it, le_pow, ll_pow, tame_reports, Env, GrowthClass,
};
use boundcalc::universe::{generate, lookup, Address, ChainType, UniverseChain};
use boundcalc::{Bound, BoundExpr, Config, Outcome, Verdict};

#[derive(Parser, Debug)]
#[command(
    name = "boundcalc",
    version,
    about = "Calculus of time-bound functions"
)]
struct Cli {
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// JSON configuration file; flags below override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the payload to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "BITS")]
    budget_bits: Option<u64>,
    #[arg(long, global = true)]
    power_cap: Option<u32>,
    #[arg(long, global = true)]
    it_depth_cap: Option<u32>,
    #[arg(long, global = true)]
    max_depth: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression at a point (`123`, `2^k`, `2^k+r`, `T(k)`).
    Eval {
        expr: String,
        #[arg(long)]
        n: String,
    },
    /// Compare two expressions.
    Cmp {
        #[arg(long, value_enum)]
        rel: Rel,
        lhs: String,
        rhs: String,
    },
    /// Tameness of a finite set of bounds.
    Tame {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Certify a property of a factor or of a set of bounds.
    Certify {
        /// A set schema (`it(type1(log))`, `{n}`, `Bhex`, ...) or, for
        /// fcons/econs, a factor expression.
        #[arg(long)]
        set: String,
        #[arg(long, value_enum)]
        prop: Prop,
    },
    /// Generate a dense chain.
    Chain(ChainArgs),
    /// Find the entry at an address of a generated chain.
    Lookup {
        address: String,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Cantor code of a cut (`bottom`, `incl:101`, `excl:101`).
    Cut { cut: String },
    /// Cut of a Cantor code (`101(0)`), or with `--real`, the code of a dyadic (`3/2^3`).
    Cantor {
        seq: String,
        #[arg(long)]
        real: bool,
    },
    /// Order structure of a generated chain.
    Export {
        #[command(flatten)]
        chain: ChainArgs,
        /// Extra cuts to encode.
        #[arg(long = "cut")]
        cuts: Vec<String>,
        /// Emit the chain as DOT.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(long = "type", default_value = "1")]
    kind: String,
    #[arg(long, default_value_t = 2)]
    depth: u32,
    /// Iterated logarithms kept in the base set.
    #[arg(long)]
    cap: Option<u32>,
    /// Lower end of a single gap; needs `--hi`.
    #[arg(long, requires = "hi")]
    lo: Option<String>,
    #[arg(long, requires = "lo")]
    hi: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Rel {
    Ae,
    #[value(name = "O")]
    BigO,
    #[value(name = "o")]
    LittleO,
    Pow,
    Llpow,
    It,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Prop {
    Fcons,
    Econs,
    Regular,
    Oregular,
}

/// What a command produced: exit code, JSON payload and its text rendering.
struct Output {
    code: u8,
    json: Value,
    text: String,
}

enum Failure {
    Usage(String),
    /// A well-formed query the budget could not answer.
    Eval(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn eval_err(e: impl Display) -> Failure {
    Failure::Eval(e.to_string())
}

fn parse(s: &str) -> Result<BoundExpr, Failure> {
    BoundExpr::parse(s).map_err(usage)
}

fn outcome_code(o: Outcome) -> u8 {
    match o {
        Outcome::Holds => 0,
        Outcome::Fails => 1,
        Outcome::Unknown => 2,
    }
}

fn status_code(s: &Status) -> u8 {
    match s {
        Status::Certified | Status::CertifiedByRule { .. } | Status::Declared => 0,
        Status::Refuted => 1,
        Status::Numeric { .. } => 2,
    }
}

fn verdict(v: Verdict) -> Output {
    Output {
        code: outcome_code(v.outcome),
        text: v.to_string(),
        json: v.to_json(),
    }
}

fn certificate(c: Certificate) -> Output {
    let status = match &c.status {
        Status::CertifiedByRule { rule } => format!("certified by {rule}"),
        Status::Certified => "certified".into(),
        Status::Numeric { outcome } => format!("numeric evidence only ({outcome:?})"),
        Status::Declared => "declared".into(),
        Status::Refuted => "refuted".into(),
    };
    let params: Vec<String> = c
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let text = if params.is_empty() {
        format!("{}: {status}", c.subject)
    } else {
        format!("{}: {status} ({})", c.subject, params.join(", "))
    };
    Output {
        code: status_code(&c.status),
        text,
        json: c.to_json(),
    }
}

fn config(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let s =
                std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&s).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => Config::default(),
    };
    if let Ok(v) = std::env::var(BUDGET_ENV) {
        cfg.budget_bits = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{BUDGET_ENV}={v} is not a bit count")))?;
    }
    if let Some(b) = cli.budget_bits {
        cfg.budget_bits = b;
    }
    if let Some(c) = cli.power_cap {
        cfg.power_cap = c;
    }
    if let Some(c) = cli.it_depth_cap {
        cfg.it_depth_cap = c;
    }
    if let Some(d) = cli.max_depth {
        cfg.max_depth = d;
    }
    Ok(cfg)
}

fn chain(a: &ChainArgs, env: &Env) -> Result<UniverseChain, Failure> {
    let kind: ChainType = a.kind.parse().map_err(usage)?;
    let gap = match (&a.lo, &a.hi) {
        (Some(lo), Some(hi)) => Some((parse(lo)?, parse(hi)?)),
        _ => None,
    };
    generate(kind, a.depth, a.cap.unwrap_or(env.cfg.log_cap), gap, env).map_err(eval_err)
}

fn growth(f: &BoundExpr, g: &BoundExpr, little: bool, env: &Env) -> Output {
    use GrowthClass as G;
    let v = cmp_growth(f, g, env);
    let outcome = match (v.class, little) {
        (G::Unknown, _) => Outcome::Unknown,
        (G::StrictlyBelow, _) => Outcome::Holds,
        (G::SameOrder | G::Below, false) => Outcome::Holds,
        // Below with an unknown strictness leaves o open.
        (G::Below, true) => Outcome::Unknown,
        _ => Outcome::Fails,
    };
    let rel = if little { "o" } else { "O" };
    let text = format!("{f} ≤{rel} {g}: {outcome:?} ({:?})", v.class);
    let mut json = serde_json::to_value(&v).expect("growth verdicts serialize");
    json["relation"] = json!(rel);
    json["outcome"] = json!(outcome);
    Output {
        code: outcome_code(outcome),
        json,
        text,
    }
}

fn run(cli: &Cli, env: &Env) -> Result<Output, Failure> {
    Ok(match &cli.command {
        Command::Eval { expr, n } => {
            let e = parse(expr)?;
            let x = env.ar.parse(n).map_err(usage)?;
            let v = e.eval(&x, &env.ar).map_err(eval_err)?;
            Output {
                code: 0,
                text: v.to_string(),
                json: json!({ "expr": e.render(), "n": x.to_string(), "value": v.to_string(), "exact": v.as_exact().is_some() }),
            }
        }
        Command::Cmp { rel, lhs, rhs } => {
            let (f, g) = (parse(lhs)?, parse(rhs)?);
            match rel {
                Rel::Ae => verdict(cmp_ae(&f, &g, env)),
                Rel::BigO => growth(&f, &g, false, env),
                Rel::LittleO => growth(&f, &g, true, env),
                Rel::Pow => verdict(le_pow(&f, &g, env)),
                Rel::Llpow => verdict(ll_pow(&f, &g, env)),
                Rel::It => verdict(le_it(&f, &g, env)),
            }
        }
        Command::Tame { exprs } => {
            let es = exprs
                .iter()
                .map(|s| parse(s))
                .collect::<Result<Vec<_>, _>>()?;
            let set: Vec<&dyn Bound> = es.iter().map(|e| e as &dyn Bound).collect();
            let v = is_tame(&set, env);
            let reports = tame_reports(&set, env);
            let mut out = verdict(v);
            for r in &reports {
                out.text
                    .push_str(&format!("\n  {} / {}: {:?}", r.lhs, r.rhs, r.limit));
            }
            out.json = json!({ "verdict": out.json, "reports": reports });
            out
        }
        Command::Certify { set, prop } => certificate(match prop {
            Prop::Fcons => f_consistent(&parse(set)?, env),
            Prop::Econs => e_consistent(&parse(set)?, env),
            Prop::Regular => regular_check(&BoundSetSchema::parse(set).map_err(usage)?, env),
            Prop::Oregular => o_regular_check(&BoundSetSchema::parse(set).map_err(usage)?, env),
        }),
        Command::Chain(a) => {
            let c = chain(a, env)?;
            let text = c
                .entries
                .iter()
                .map(|e| format!("{}\t{}\t{}", e.address, e.val, e.bound.render()))
                .collect::<Vec<_>>()
                .join("\n");
            Output {
                code: 0,
                json: c.to_json(),
                text,
            }
        }
        Command::Lookup { address, chain: a } => {
            let addr: Address = address.parse().map_err(usage)?;
            let c = chain(a, env)?;
            let e = lookup(&c, &addr).map_err(eval_err)?;
            Output {
                code: 0,
                text: e.bound.render(),
                json: json!({ "address": e.address, "val": e.val, "expr": e.bound.render(), "depth": e.depth }),
            }
        }
        Command::Cut { cut } => {
            let c: Cut = cut.parse().map_err(usage)?;
            let f = cut_to_cantor(&c).map_err(usage)?;
            Output {
                code: 0,
                text: f.to_string(),
                json: json!({ "cut": c, "cantor": f.to_string() }),
            }
        }
        Command::Cantor { seq, real } => {
            if *real {
                let r: Dyadic = seq.parse().map_err(usage)?;
                let f = real_to_cantor(&r).map_err(usage)?;
                Output {
                    code: 0,
                    text: f.to_string(),
                    json: json!({ "real": r, "cantor": f.to_string() }),
                }
            } else {
                let f: CantorSeq = seq.parse().map_err(usage)?;
                match cantor_to_cut(&f) {
                    Ok(c) => Output {
                        code: 0,
                        text: c.to_string(),
                        json: json!({ "cantor": f.to_string(), "cut": c }),
                    },
                    Err(e) => Output {
                        code: 1,
                        text: e.to_string(),
                        json: json!({ "cantor": f.to_string(), "cut": null, "error": e.to_string() }),
                    },
                }
            }
        }
        Command::Export {
            chain: a,
            cuts,
            dot,
        } => {
            let c = chain(a, env)?;
            let cuts = cuts
                .iter()
                .map(|s| s.parse::<Cut>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            let x = export_order(&c, &cuts).map_err(usage)?;
            let text = if *dot {
                x.dot.clone()
            } else {
                x.cuts
                    .iter()
                    .map(|r| {
                        format!(
                            "{}\t{}\t{}",
                            r.cut,
                            r.cantor.as_deref().unwrap_or("-"),
                            r.lower.join(",")
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Output {
                code: 0,
                json: serde_json::to_value(&x).expect("exports serialize"),
                text,
            }
        }
    })
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => std::fs::write(p, format!("{body}\n"))
            .map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = config(&cli).and_then(|cfg| {
        let env = Env::new(cfg.clone()).map_err(eval_err)?;
        let out = run(&cli, &env)?;
        Ok((cfg, out))
    });
    let (code, body) = match result {
        Ok((cfg, mut out)) => {
            let dot = matches!(cli.command, Command::Export { dot: true, .. });
            let body = if cli.json && !dot {
                let payload = match out.json.take() {
                    Value::Object(mut m) => {
                        m.insert("config".into(), json!(cfg));
                        Value::Object(m)
                    }
                    v => json!({ "result": v, "config": cfg }),
                };
                serde_json::to_string_pretty(&payload).expect("values serialize")
            } else {
                out.text
            };
            (out.code, body)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(3);
        }
        Err(Failure::Eval(m)) => {
            eprintln!("error: {m}");
            if cli.json {
                let _ = emit(&cli, &json!({ "error": m }).to_string());
            }
            return ExitCode::from(2);
        }
    };
    match emit(&cli, &body) {
        Ok(()) => ExitCode::from(code),
        Err(Failure::Usage(m) | Failure::Eval(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
