//! Command-line front end for the survdim library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
//! 3 precision cap reached, 4 enumeration budget exceeded.

mod checks;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::BigInt;

use survdim::dimension::{
    escape_rate, eta, holder_probe, modulus_probe, series_of, zeta, Precision,
};
use survdim::oracle::{
    bif_dim_estimate, dim_estimate, escape_estimate, markov_crosscheck, survivor_count,
};
use survdim::orbits::{enumerate_plateaus, in_bifurcation_set, plateau_of};
use survdim::rat::{parse_rational, Rational};
use survdim::words::{enumerate_lyndon, expand, Base, Expansion};
use survdim::Error;

use output::{dimension_json, out_writer, Sink};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "survdim",
    version,
    about = "Dimension of survivor sets for d-ary circle maps with a hole at zero",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Expansion base d >= 2.
    #[arg(long, global = true, default_value_t = 2)]
    base: u32,

    /// Certified enclosure tolerance ("1e-12", "0.001" or "1/1000000").
    #[arg(long, global = true, default_value = "1e-12")]
    tol: String,

    /// Starting working precision (bits) for log enclosures; doubles up to
    /// the 4096-bit cap before erroring.
    #[arg(long, global = true, default_value_t = 128)]
    precision: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid commands (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Node budget for oracle enumerations.
    #[arg(long, global = true, default_value_t = 2_000_000_000)]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension eta(t) of the survivor set, with certified enclosures.
    Eta { t: String },
    /// The root formula applied blindly at t (valid only on the
    /// bifurcation set; dominates eta elsewhere).
    Zeta { t: String },
    /// Staircase data over the grid k/N: eta and zeta enclosures,
    /// bifurcation membership and plateau labels.
    Staircase {
        /// Grid denominator N (rows k = 0..=N).
        #[arg(long, default_value_t = 1024)]
        grid: u64,
    },
    /// All stable-set plateaus with labels up to the given length.
    Plateaus {
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Exact bifurcation-set membership of t, with the escape witness and
    /// the plateau when t is stable.
    Bifurcation { t: String },
    /// Lyndon words (plateau labels) up to the given length, by value.
    Lyndon {
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Hoelder-exponent probe along the approximating sequence of t.
    Holder {
        #[arg(long, default_value = "1/4")]
        t: String,
        /// Probe indices, inclusive range "lo:hi".
        #[arg(long, default_value = "8:32")]
        n_range: String,
    },
    /// Modulus-of-continuity probe at the critical parameter.
    Modulus {
        /// Comma-separated probe depths.
        #[arg(long, default_value = "10,20,50,100")]
        n: String,
    },
    /// Brute-force survivor-set oracles.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Named verification suites (TAP output; exit 1 on failure).
    Verify {
        /// moran | plateau-constancy | complement-cover | lyndon-dom |
        /// oracle-agreement | envelope | holder | modulus | bifdim |
        /// monotonic | urbanski | all
        suite: String,
        /// Parameter override for the holder suite.
        #[arg(long)]
        t: Option<String>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Count depth-n surviving cylinders.
    Survivor {
        #[arg(long)]
        t: String,
        #[arg(long)]
        n: usize,
    },
    /// Least-squares dimension estimate from cylinder growth.
    Dim {
        #[arg(long)]
        t: String,
        /// Depth range "lo:hi".
        #[arg(long, default_value = "10:28")]
        n_range: String,
    },
    /// Escape-rate estimate at a single depth.
    Escape {
        #[arg(long)]
        t: String,
        #[arg(long)]
        n: usize,
    },
    /// Box-count proxy for the bifurcation set beyond t.
    Bifdim {
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 24)]
        n: usize,
    },
    /// Markov-decomposition crosscheck at a bifurcation parameter.
    Crosscheck {
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::InvalidInput(_) | Error::BadTolerance(_) => 2,
        Error::PrecisionCap { .. } => 3,
        Error::BudgetExceeded { .. } => 4,
        _ => 2,
    }
}

/// Accepts "p/q", an exact decimal/scientific literal, or an expansion
/// literal "pre(per)" in the working base.
fn parse_parameter(s: &str, base: Base) -> Result<Rational, Error> {
    if s.contains('(') {
        Ok(Expansion::parse(s, base)?.value())
    } else {
        parse_rational(s)
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), Error> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("range must be lo:hi, got {s:?}")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range start {lo:?}")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range end {hi:?}")))?;
    if lo > hi {
        return Err(Error::Parse(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

struct Ctx {
    base: Base,
    tol: Rational,
    prec: Precision,
    format: Format,
    sink: Sink,
    budget: u64,
}

fn run(cli: Cli) -> Result<bool, Error> {
    let base = Base::new(cli.base)?;
    let tol = parse_rational(&cli.tol)?;
    let prec = Precision {
        start_bits: cli.precision.max(8),
        cap_bits: 4096u64.max(cli.precision),
    };
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    let sink = out_writer(cli.out.as_deref())?;
    let mut ctx = Ctx {
        base,
        tol,
        prec,
        format: cli.format,
        sink,
        budget: cli.budget,
    };

    let mut check_failed = false;
    match cli.command {
        Command::Eta { t } => cmd_dimension(&mut ctx, &t, false)?,
        Command::Zeta { t } => cmd_dimension(&mut ctx, &t, true)?,
        Command::Staircase { grid } => cmd_staircase(&mut ctx, grid)?,
        Command::Plateaus { max_len } => cmd_plateaus(&mut ctx, max_len)?,
        Command::Bifurcation { t } => cmd_bifurcation(&mut ctx, &t)?,
        Command::Lyndon { max_len } => cmd_lyndon(&mut ctx, max_len)?,
        Command::Holder { t, n_range } => cmd_holder(&mut ctx, &t, &n_range)?,
        Command::Modulus { n } => cmd_modulus(&mut ctx, &n)?,
        Command::Oracle { what } => check_failed = cmd_oracle(&mut ctx, what)?,
        Command::Verify { suite, t } => check_failed = cmd_verify(&mut ctx, &suite, t.as_deref())?,
    }
    ctx.sink.finish()?;
    Ok(check_failed)
}

fn cmd_dimension(ctx: &mut Ctx, t_str: &str, blind: bool) -> Result<(), Error> {
    let t = parse_parameter(t_str, ctx.base)?;
    let result = if blind {
        zeta(&t, ctx.base, &ctx.tol, &ctx.prec)?
    } else {
        eta(&t, ctx.base, &ctx.tol, &ctx.prec)?
    };
    let in_unit_interior = t > Rational::from(BigInt::from(0)) && t < Rational::from(BigInt::from(1));
    let plateau = if in_unit_interior {
        plateau_of(&t, ctx.base)?
    } else {
        None
    };
    let series = if t > Rational::from(BigInt::from(0)) {
        Some(series_of(&expand(&t, ctx.base)?).to_string())
    } else {
        None
    };
    match ctx.format {
        Format::Json => {
            let mut obj = dimension_json(&result);
            obj["in_bifurcation_set"] = serde_json::json!(plateau.is_none());
            obj["plateau"] = match &plateau {
                Some(p) => output::plateau_json(p),
                None => serde_json::Value::Null,
            };
            obj["series_at_t"] = serde_json::json!(series);
            ctx.sink.emit_json(&obj)?;
        }
        Format::Csv => {
            ctx.sink
                .line("t,lambda_lo,lambda_hi,eta_lo,eta_hi,exact,in_U,plateau_label")?;
            ctx.sink.line(&format!(
                "{},{},{},{},{},{},{},{}",
                result.t,
                output::f64_lo(&result.lambda.lo),
                output::f64_hi(&result.lambda.hi),
                output::f64_lo(&result.eta_lo),
                output::f64_hi(&result.eta_hi),
                result.exact,
                plateau.is_none(),
                plateau
                    .as_ref()
                    .map(|p| p.label.to_string())
                    .unwrap_or_default()
            ))?;
        }
    }
    Ok(())
}

fn cmd_staircase(ctx: &mut Ctx, grid: u64) -> Result<(), Error> {
    use rayon::prelude::*;
    if grid == 0 {
        return Err(Error::InvalidInput("grid must be >= 1".into()));
    }
    let base = ctx.base;
    let tol = ctx.tol.clone();
    let prec = ctx.prec;
    let rows: Vec<Result<String, Error>> = (0..=grid)
        .into_par_iter()
        .map(|k| {
            let t = Rational::new(BigInt::from(k), BigInt::from(grid));
            let e = eta(&t, base, &tol, &prec)?;
            let z = zeta(&t, base, &tol, &prec)?;
            let plateau = if k > 0 && k < grid {
                plateau_of(&t, base)?
            } else {
                None
            };
            Ok(format!(
                "{},{},{},{},{},{},{}",
                t,
                output::f64_lo(&e.eta_lo),
                output::f64_hi(&e.eta_hi),
                output::f64_lo(&z.eta_lo),
                output::f64_hi(&z.eta_hi),
                plateau.is_none(),
                plateau.map(|p| p.label.to_string()).unwrap_or_default()
            ))
        })
        .collect();
    ctx.sink
        .line("t,eta_lo,eta_hi,zeta_lo,zeta_hi,in_U,plateau_label")?;
    for row in rows {
        ctx.sink.line(&row?)?;
    }
    Ok(())
}

fn cmd_plateaus(ctx: &mut Ctx, max_len: usize) -> Result<(), Error> {
    let plateaus = enumerate_plateaus(ctx.base, max_len);
    match ctx.format {
        Format::Json => {
            let list: Vec<serde_json::Value> =
                plateaus.iter().map(output::plateau_json).collect();
            ctx.sink.emit_json(&serde_json::Value::Array(list))?;
        }
        Format::Csv => {
            ctx.sink.line("label,left,right,length")?;
            for p in &plateaus {
                ctx.sink
                    .line(&format!("{},{},{},{}", p.label, p.left, p.right, p.length()))?;
            }
        }
    }
    Ok(())
}

fn cmd_bifurcation(ctx: &mut Ctx, t_str: &str) -> Result<(), Error> {
    let t = parse_parameter(t_str, ctx.base)?;
    let verdict = in_bifurcation_set(&t, ctx.base)?;
    let plateau = if !verdict.in_set {
        plateau_of(&t, ctx.base)?
    } else {
        None
    };
    match ctx.format {
        Format::Json => {
            let obj = serde_json::json!({
                "t": t.to_string(),
                "in_set": verdict.in_set,
                "witness_k": verdict.witness_k,
                "orbit_len": verdict.orbit_len,
                "plateau": plateau.as_ref().map(output::plateau_json),
            });
            ctx.sink.emit_json(&obj)?;
        }
        Format::Csv => {
            ctx.sink.line("t,in_set,witness_k,orbit_len,plateau_label")?;
            ctx.sink.line(&format!(
                "{},{},{},{},{}",
                t,
                verdict.in_set,
                verdict.witness_k.map(|k| k.to_string()).unwrap_or_default(),
                verdict.orbit_len,
                plateau.map(|p| p.label.to_string()).unwrap_or_default()
            ))?;
        }
    }
    Ok(())
}

fn cmd_lyndon(ctx: &mut Ctx, max_len: usize) -> Result<(), Error> {
    let words = enumerate_lyndon(ctx.base, max_len);
    match ctx.format {
        Format::Json => {
            let list: Vec<serde_json::Value> = words
                .iter()
                .map(|w| {
                    serde_json::json!({
                        "word": w.to_string(),
                        "value": w.value().to_string(),
                        "length": w.len(),
                    })
                })
                .collect();
            ctx.sink.emit_json(&serde_json::Value::Array(list))?;
        }
        Format::Csv => {
            ctx.sink.line("word,value,length")?;
            for w in &words {
                ctx.sink.line(&format!("{},{},{}", w, w.value(), w.len()))?;
            }
        }
    }
    Ok(())
}

fn cmd_holder(ctx: &mut Ctx, t_str: &str, n_range: &str) -> Result<(), Error> {
    let t = parse_parameter(t_str, ctx.base)?;
    let (lo, hi) = parse_range(n_range)?;
    let probe = holder_probe(&t, ctx.base, lo, hi, &ctx.prec)?;
    match ctx.format {
        Format::Json => {
            let points: Vec<serde_json::Value> = probe
                .points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "n": p.n,
                        "t_n": p.t_n.to_string(),
                        "dt": output::f64_hi(&p.dt),
                        "delta_eta_lo": output::f64_lo(&p.delta_lo),
                        "delta_eta_hi": output::f64_hi(&p.delta_hi),
                        "slope_lo": p.slope_lo,
                        "slope_hi": p.slope_hi,
                        "certified": p.certified,
                    })
                })
                .collect();
            let obj = serde_json::json!({
                "t": probe.t.to_string(),
                "eta_t": dimension_json(&probe.eta_t),
                "points": points,
            });
            ctx.sink.emit_json(&obj)?;
        }
        Format::Csv => {
            ctx.sink
                .line("n,t_n,dt,delta_eta_lo,delta_eta_hi,slope_lo,slope_hi,certified")?;
            for p in &probe.points {
                ctx.sink.line(&format!(
                    "{},{},{},{},{},{},{},{}",
                    p.n,
                    p.t_n,
                    output::f64_hi(&p.dt),
                    output::f64_lo(&p.delta_lo),
                    output::f64_hi(&p.delta_hi),
                    p.slope_lo,
                    p.slope_hi,
                    p.certified
                ))?;
            }
        }
    }
    Ok(())
}

fn cmd_modulus(ctx: &mut Ctx, n_list: &str) -> Result<(), Error> {
    let ns: Vec<u32> = n_list
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad probe depth {p:?}")))
        })
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for n in ns {
        rows.push(modulus_probe(ctx.base, n, &ctx.tol, &ctx.prec)?);
    }
    match ctx.format {
        Format::Json => {
            let list: Vec<serde_json::Value> = rows
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "n": p.n,
                        "t_n": p.t_n.to_string(),
                        "eta_lo": output::f64_lo(&p.eta.eta_lo),
                        "eta_hi": output::f64_hi(&p.eta.eta_hi),
                        "ratio_naive": p.ratio_naive,
                        "ratio_refined": p.ratio_refined,
                        "c_n": p.c_n,
                    })
                })
                .collect();
            ctx.sink.emit_json(&serde_json::Value::Array(list))?;
        }
        Format::Csv => {
            ctx.sink
                .line("n,t_n,eta_lo,eta_hi,ratio_naive,ratio_refined,c_n")?;
            for p in &rows {
                ctx.sink.line(&format!(
                    "{},{},{},{},{},{},{}",
                    p.n,
                    p.t_n,
                    output::f64_lo(&p.eta.eta_lo),
                    output::f64_hi(&p.eta.eta_hi),
                    p.ratio_naive,
                    p.ratio_refined,
                    p.c_n
                ))?;
            }
        }
    }
    Ok(())
}

fn cmd_oracle(ctx: &mut Ctx, what: OracleCommand) -> Result<bool, Error> {
    match what {
        OracleCommand::Survivor { t, n } => {
            let t = parse_parameter(&t, ctx.base)?;
            let stats = survivor_count(&t, ctx.base, n, ctx.budget)?;
            emit_survivor_stats(ctx, &t, &stats)?;
        }
        OracleCommand::Escape { t, n } => {
            let t = parse_parameter(&t, ctx.base)?;
            let stats = escape_estimate(&t, ctx.base, n, ctx.budget)?;
            emit_survivor_stats(ctx, &t, &stats)?;
        }
        OracleCommand::Dim { t, n_range } => {
            let t = parse_parameter(&t, ctx.base)?;
            let (lo, hi) = parse_range(&n_range)?;
            let fit = dim_estimate(&t, ctx.base, lo as usize, hi as usize, ctx.budget)?;
            match ctx.format {
                Format::Json => {
                    let obj = serde_json::json!({
                        "t": t.to_string(),
                        "d": ctx.base.get(),
                        "value": fit.value,
                        "residual": fit.residual,
                        "n_min": fit.n_min,
                        "n_max": fit.n_max,
                        "used_upper_half": fit.used_upper_half,
                        "escape_rate": escape_rate(fit.value, ctx.base),
                    });
                    ctx.sink.emit_json(&obj)?;
                }
                Format::Csv => {
                    ctx.sink
                        .line("t,d,value,residual,n_min,n_max,used_upper_half")?;
                    ctx.sink.line(&format!(
                        "{},{},{},{},{},{},{}",
                        t,
                        ctx.base.get(),
                        fit.value,
                        fit.residual,
                        fit.n_min,
                        fit.n_max,
                        fit.used_upper_half
                    ))?;
                }
            }
        }
        OracleCommand::Bifdim { t, n } => {
            let t = parse_parameter(&t, ctx.base)?;
            let est = bif_dim_estimate(&t, ctx.base, n, ctx.budget)?;
            match ctx.format {
                Format::Json => {
                    let obj = serde_json::json!({
                        "t": t.to_string(),
                        "d": ctx.base.get(),
                        "n": est.depth,
                        "count": est.count.to_string(),
                        "estimate": est.estimate,
                    });
                    ctx.sink.emit_json(&obj)?;
                }
                Format::Csv => {
                    ctx.sink.line("t,d,n,count,estimate")?;
                    ctx.sink.line(&format!(
                        "{},{},{},{},{}",
                        t,
                        ctx.base.get(),
                        est.depth,
                        est.count,
                        est.estimate
                    ))?;
                }
            }
        }
        OracleCommand::Crosscheck { t, samples, seed } => {
            let t = parse_parameter(&t, ctx.base)?;
            let report = markov_crosscheck(&t, ctx.base, samples, seed)?;
            match ctx.format {
                Format::Json => {
                    let obj = serde_json::json!({
                        "t": t.to_string(),
                        "forward_samples": report.forward_samples,
                        "forward_ok": report.forward_ok,
                        "reverse_samples": report.reverse_samples,
                        "reverse_ok": report.reverse_ok,
                        "atoms_hit": report.atoms_hit,
                        "all_ok": report.all_ok(),
                    });
                    ctx.sink.emit_json(&obj)?;
                }
                Format::Csv => {
                    ctx.sink.line(
                        "t,forward_samples,forward_ok,reverse_samples,reverse_ok,atoms_hit,all_ok",
                    )?;
                    ctx.sink.line(&format!(
                        "{},{},{},{},{},{},{}",
                        t,
                        report.forward_samples,
                        report.forward_ok,
                        report.reverse_samples,
                        report.reverse_ok,
                        report.atoms_hit,
                        report.all_ok()
                    ))?;
                }
            }
            return Ok(!report.all_ok());
        }
    }
    Ok(false)
}

fn emit_survivor_stats(
    ctx: &mut Ctx,
    t: &Rational,
    stats: &survdim::oracle::SurvivorStats,
) -> Result<(), Error> {
    match ctx.format {
        Format::Json => {
            let obj = serde_json::json!({
                "t": t.to_string(),
                "d": ctx.base.get(),
                "n": stats.depth,
                "count": stats.count.to_string(),
                "eta_estimate": stats.eta_estimate,
                "gamma_estimate": stats.gamma_estimate,
            });
            ctx.sink.emit_json(&obj)?;
        }
        Format::Csv => {
            ctx.sink.line("t,d,n,count,eta_estimate,gamma_estimate")?;
            ctx.sink.line(&format!(
                "{},{},{},{},{},{}",
                t,
                ctx.base.get(),
                stats.depth,
                stats.count,
                stats.eta_estimate,
                stats.gamma_estimate
            ))?;
        }
    }
    Ok(())
}

fn cmd_verify(ctx: &mut Ctx, suite: &str, t_override: Option<&str>) -> Result<bool, Error> {
    let t = match t_override {
        Some(s) => Some(parse_parameter(s, ctx.base)?),
        None => None,
    };
    let outcomes = checks::run_suite(suite, ctx.base, &ctx.tol, &ctx.prec, ctx.budget, t)?;
    let mut failed = false;
    for (i, outcome) in outcomes.iter().enumerate() {
        let status = if outcome.pass { "ok" } else { "not ok" };
        ctx.sink.line(&format!(
            "{status} {} - {}: {}",
            i + 1,
            outcome.name,
            outcome.detail
        ))?;
        failed |= !outcome.pass;
    }
    ctx.sink.line(&format!("1..{}", outcomes.len()))?;
    Ok(failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(err) => {
            let code = exit_code_for(&err);
            let mut stderr = std::io::stderr();
            let _ = writeln!(stderr, "error: {err}");
            ExitCode::from(code)
        }
    }
}
