//! Command-line front end: parse designs, run verifications and
//! certifications, emit reports and tables.
//!
//! Exit codes: 0 = every requested check passed, 1 = a checked property does
//! not hold, 2 = usage or input error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use patcross::catalog::{fixture_4_3_12, params_with_t, table1, verify_patterson, williams};
use patcross::design::{
    classify, enumerate_column_multisets, parse_design, profile, random_design, CrossoverDesign,
};
use patcross::infomat::{
    effects_info, info_elim_subjects, is_connected, schur_effects, EffectSet, PeriodMode,
};
use patcross::optimality::{
    averaged_block_params, check_uo, efficiency, functional_a_from_block_params,
    patterson_block_params, OptError, UOMode,
};
use num::Signed;
use patcross::ratmat::Q;
use patcross::symmetry::{average_brute, average_closed, check_32, AverageTarget, BRUTE_CAP_V};
use rayon::prelude::*;
use serde_json::json;
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "patcross", version, about = "Exact certification of balanced crossover designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check balance conditions, class membership, and connectedness.
    Verify {
        /// Design file ('#' comments, optional "p v n" header, p rows of n labels).
        design_file: String,
    },
    /// Print a frequency or information matrix of a design.
    Info {
        design_file: String,
        #[arg(long, value_enum)]
        matrix: MatrixKind,
        #[arg(long, value_enum, default_value = "adjusted")]
        periods: PeriodsArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Efficiency lower bounds for direct effects.
    Efficiency(EfficiencyArgs),
    /// Certify dominance over a class of competing designs.
    Certify(CertifyArgs),
    /// Emit a catalog design (self-verified) as a design file.
    Construct {
        #[command(subcommand)]
        which: ConstructKind,
    },
    /// Average a design's effects matrix over all treatment relabelings.
    Average { design_file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    #[value(name = "N", alias = "n")]
    N,
    #[value(name = "S", alias = "s")]
    S,
    #[value(name = "Theta", alias = "theta")]
    Theta,
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "C", alias = "c")]
    C,
    #[value(name = "C11.22", alias = "c11.22")]
    C1122,
    #[value(name = "C22.11", alias = "c22.11")]
    C2211,
}

#[derive(Clone, Copy, ValueEnum)]
enum PeriodsArg {
    Ignored,
    Adjusted,
}

impl From<PeriodsArg> for PeriodMode {
    fn from(p: PeriodsArg) -> Self {
        match p {
            PeriodsArg::Ignored => PeriodMode::Ignored,
            PeriodsArg::Adjusted => PeriodMode::Adjusted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct EfficiencyArgs {
    /// Emit the whole catalog table ("table1").
    #[arg(long, conflicts_with_all = ["p", "v"])]
    pairs: Option<String>,
    #[arg(long, requires = "v")]
    p: Option<usize>,
    #[arg(long, requires = "p")]
    v: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Direct,
    Residual,
    #[value(name = "joint-binary")]
    JointBinary,
    Functional,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompetitorsArg {
    Exhaustive,
    Sample,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    v: usize,
    #[arg(long)]
    t: i64,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, value_enum)]
    competitors: CompetitorsArg,
    /// Sample size (sample mode only).
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum ConstructKind {
    Williams {
        #[arg(long)]
        v: usize,
    },
    Fixture,
}

fn fail2(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn load_design(path: &str) -> Result<CrossoverDesign, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    parse_design(&text).map_err(|e| format!("{path}: {e}"))
}

fn cmd_verify(path: &str) -> ExitCode {
    let d = match load_design(path) {
        Ok(d) => d,
        Err(e) => return fail2(e),
    };
    let report = verify_patterson(&d);
    let cls = classify(&d);
    let connected = is_connected(&d);
    let ok = report.all_pass() && cls.no_self_succession && cls.binary && connected;
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "p": d.periods(),
        "v": d.treatments(),
        "n": d.subjects(),
        "conditions": {
            "a": report.cond_a,
            "b": report.cond_b,
            "c": report.cond_c,
            "d": report.cond_d,
            "e": report.cond_e,
        },
        "params": report.params.as_ref().map(|p| json!({"t": p.t, "lambda": p.lambda})),
        "failures": report.failures,
        "no_self_succession": cls.no_self_succession,
        "binary": cls.binary,
        "connected": connected,
        "all_pass": ok,
    });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_info(path: &str, which: MatrixKind, periods: PeriodsArg, format: Format) -> ExitCode {
    let d = match load_design(path) {
        Ok(d) => d,
        Err(e) => return fail2(e),
    };
    let (name, m) = match which {
        MatrixKind::N => ("N", profile(&d).n_mat),
        MatrixKind::S => ("S", profile(&d).s_mat),
        MatrixKind::Theta => ("Theta", profile(&d).theta),
        MatrixKind::M => ("M", info_elim_subjects(&d).matrix),
        MatrixKind::C => ("C", effects_info(&d, periods.into()).assembled()),
        MatrixKind::C1122 => (
            "C11.22",
            schur_effects(&effects_info(&d, periods.into()), EffectSet::Direct),
        ),
        MatrixKind::C2211 => (
            "C22.11",
            schur_effects(&effects_info(&d, periods.into()), EffectSet::Residual),
        ),
    };
    match format {
        Format::Csv => println!("{}", m.to_csv()),
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "matrix": name,
                "periods": match periods { PeriodsArg::Ignored => "ignored", PeriodsArg::Adjusted => "adjusted" },
                "rows": m,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    ExitCode::SUCCESS
}

fn cmd_efficiency(args: &EfficiencyArgs) -> ExitCode {
    let pairs: Vec<(usize, usize)> = match (&args.pairs, args.p, args.v) {
        (Some(tag), None, None) if tag == "table1" => {
            table1().iter().map(|&(p, v, _)| (p, v)).collect()
        }
        (Some(tag), ..) => return fail2(format!("unknown pair set {tag:?} (expected \"table1\")")),
        (None, Some(p), Some(v)) => vec![(p, v)],
        _ => return fail2("need either --pairs table1 or both --p and --v"),
    };
    let mut rows = Vec::new();
    for (p, v) in pairs {
        match efficiency(p, v) {
            Ok(row) => rows.push(row),
            Err(e) => return fail2(e),
        }
    }
    println!("p,v,e_star");
    for row in rows {
        println!("{},{},{}", row.p, row.v, row.e_star_decimal);
    }
    ExitCode::SUCCESS
}

fn competitor_pool(args: &CertifyArgs) -> Result<Vec<CrossoverDesign>, String> {
    let n = args.v * args.t as usize;
    match args.competitors {
        CompetitorsArg::Exhaustive => enumerate_column_multisets(args.p, args.v, n, true, None)
            .map(|it| it.collect())
            .map_err(|e| format!("{e}; use --competitors sample --count N instead")),
        CompetitorsArg::Sample => {
            let mut out = Vec::with_capacity(args.count);
            for i in 0..args.count {
                out.push(random_design(args.p, args.v, n, args.seed.wrapping_add(i as u64), true));
            }
            Ok(out)
        }
    }
}

fn cmd_certify(args: &CertifyArgs) -> ExitCode {
    let params = match params_with_t(args.p, args.v, args.t) {
        Ok(p) => p,
        Err(e) => return fail2(e),
    };
    let star = patterson_block_params(args.p, args.v, args.t).expect("validated above");
    let pool = match competitor_pool(args) {
        Ok(p) => p,
        Err(e) => return fail2(e),
    };

    #[derive(Default)]
    struct Tally {
        tested: usize,
        skipped: usize,
        failures: Vec<String>,
        min_slack: Option<Q>,
    }
    let merge = |mut a: Tally, b: Tally| {
        a.tested += b.tested;
        a.skipped += b.skipped;
        a.failures.extend(b.failures);
        a.min_slack = match (a.min_slack, b.min_slack) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        a
    };

    let design_id = |d: &CrossoverDesign| {
        d.columns()
            .iter()
            .map(|c| c.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(""))
            .collect::<Vec<_>>()
            .join("-")
    };

    let a_star = functional_a_from_block_params(&star, args.v).ok();
    let tally = pool
        .par_iter()
        .map(|d| {
            let mut t = Tally::default();
            match args.mode {
                ModeArg::Functional => match averaged_block_params(d)
                    .and_then(|bp| functional_a_from_block_params(&bp, args.v))
                {
                    Ok(a_d) => {
                        t.tested = 1;
                        let slack = &a_d - a_star.as_ref().unwrap();
                        if slack.is_negative() {
                            t.failures.push(design_id(d));
                        } else {
                            t.min_slack = Some(slack);
                        }
                    }
                    Err(OptError::NotInClass(_)) => t.skipped = 1,
                    Err(e) => {
                        t.tested = 1;
                        t.failures.push(format!("{}: {e}", design_id(d)));
                    }
                },
                _ => {
                    let mode = match args.mode {
                        ModeArg::Direct => UOMode::Direct,
                        ModeArg::Residual => UOMode::Residual,
                        _ => UOMode::JointBinary,
                    };
                    match check_uo(mode, &params, d) {
                        Ok(rep) => {
                            t.tested = 1;
                            if !rep.dominance || rep.concavity_ok == Some(false) {
                                t.failures.push(rep.competitor_id);
                            } else {
                                t.min_slack = rep.min_pivot;
                            }
                        }
                        Err(OptError::NotInClass(_)) => t.skipped = 1,
                        Err(e) => {
                            t.tested = 1;
                            t.failures.push(format!("{}: {e}", design_id(d)));
                        }
                    }
                }
            }
            t
        })
        .reduce(Tally::default, merge);

    let mut failures = tally.failures;
    failures.sort();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "p": args.p,
        "v": args.v,
        "t": args.t,
        "mode": match args.mode {
            ModeArg::Direct => "direct",
            ModeArg::Residual => "residual",
            ModeArg::JointBinary => "joint-binary",
            ModeArg::Functional => "functional",
        },
        "competitors": match args.competitors {
            CompetitorsArg::Exhaustive => json!("exhaustive"),
            CompetitorsArg::Sample => json!({"sample": args.count, "seed": args.seed}),
        },
        "tested": tally.tested,
        "skipped_out_of_class": tally.skipped,
        "failures": failures.len(),
        "failing": failures,
        "min_slack": tally.min_slack.map(|q| q.to_string()),
        "a_star": match args.mode {
            ModeArg::Functional => a_star.map(|q| q.to_string()),
            _ => None,
        },
    });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    if doc["failures"] == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_construct(kind: &ConstructKind) -> ExitCode {
    let d = match kind {
        ConstructKind::Williams { v } => match williams(*v) {
            Ok(d) => d,
            Err(e) => return fail2(e),
        },
        ConstructKind::Fixture => fixture_4_3_12(),
    };
    if !verify_patterson(&d).all_pass() {
        return fail2("constructed design failed self-verification");
    }
    print!("{}", d.to_text());
    ExitCode::SUCCESS
}

fn cmd_average(path: &str) -> ExitCode {
    let d = match load_design(path) {
        Ok(d) => d,
        Err(e) => return fail2(e),
    };
    let cls = classify(&d);
    let closed = if cls.no_self_succession && d.subjects() % d.treatments() == 0 {
        average_closed(&d).ok()
    } else {
        None
    };
    if d.treatments() > BRUTE_CAP_V {
        if let Some(c) = &closed {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "closed_form": c.assembled(),
                "brute_force": null,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        return fail2(format!(
            "v = {} exceeds the brute-force cap {BRUTE_CAP_V}",
            d.treatments()
        ));
    }
    let brute = match average_brute(&d, AverageTarget::CIgnored) {
        Ok(b) => b,
        Err(e) => return fail2(e),
    };
    let matches = closed.as_ref().map(|c| c.assembled() == brute);
    let eq32 = if cls.binary && d.subjects() % d.treatments() == 0 {
        check_32(&d).ok()
    } else {
        None
    };
    let ok = matches != Some(false) && eq32 != Some(false);
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "closed_form": closed.as_ref().map(|c| c.assembled()),
        "brute_force": brute,
        "match": matches,
        "eq32": eq32,
    });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify { design_file } => cmd_verify(&design_file),
        Command::Info {
            design_file,
            matrix,
            periods,
            format,
        } => cmd_info(&design_file, matrix, periods, format),
        Command::Efficiency(args) => cmd_efficiency(&args),
        Command::Certify(args) => cmd_certify(&args),
        Command::Construct { which } => cmd_construct(&which),
        Command::Average { design_file } => cmd_average(&design_file),
    }
}
