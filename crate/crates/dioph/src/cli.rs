//! Command-line orchestration.
//!
//! Subcommands: `approx` (certified sequence), `oracle` (brute force),
//! `verify` (self-check and engine/oracle diff), `exponents`, `analyze`,
//! `bounds`, `theorem` (end-to-end inequality check), and `corpus` (write
//! the built-in instances). Exit codes: 0 success, 1 check failure,
//! 2 configuration or precision error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use crate::bestapprox::{
    compute_sequence, oracle_sequence, sequence_from_json, sequence_to_csv, sequence_to_json,
    verify_sequence, ApproxSequence, EngineError,
};
use crate::bounds;
use crate::config::RunConfig;
use crate::corpus;
use crate::exponents::{self, ExponentsError};
use crate::forms::{CaseTag, ThetaMatrix};
use crate::structure;

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_CONFIG: i32 = 2;

#[derive(Parser)]
#[command(name = "dioph", version, about = "Best approximations of linear forms, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Height bound override.
    #[arg(long)]
    max_height: Option<u64>,
    /// Worker threads for the shell sweep.
    #[arg(long)]
    workers: Option<usize>,
    /// Certification cap override, in bits.
    #[arg(long)]
    precision_cap_bits: Option<u32>,
}

#[derive(Args)]
struct OutArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a flat CSV table here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print a human-readable summary instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the certified best-approximation sequence.
    Approx {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Brute-force oracle sequence (small heights only).
    Oracle {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Verify a stored sequence against its matrix, optionally against the oracle.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
        /// Sequence JSON produced by `approx` or `oracle`.
        #[arg(long)]
        sequence: PathBuf,
        /// Recompute the oracle and require record-for-record agreement.
        #[arg(long)]
        against_oracle: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exponent estimates and per-record ratio diagnostics.
    Exponents {
        /// Sequence JSON produced by `approx`.
        #[arg(long)]
        sequence: PathBuf,
        /// First index of the tail used for min/max estimates.
        #[arg(long)]
        tail_start: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Structure analysis: runs, quadruples, determinant bounds, tail ranks.
    Analyze {
        /// Sequence JSON produced by `approx`.
        #[arg(long)]
        sequence: PathBuf,
        /// Report-level threshold for the product-spread findings.
        #[arg(long, default_value_t = structure::DEFAULT_RATIO_THRESHOLD)]
        ratio_threshold: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the bound functions and comparison tables.
    Bounds {
        /// Case: m1n3, m3n1 or m2n2.
        #[arg(long)]
        case: String,
        /// Single evaluation point (rational, e.g. 1/2 or 0.5).
        #[arg(long)]
        alpha: Option<String>,
        /// Grid lo:hi:count of evaluation points.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// End to end: sequence, exponents, and the transference inequality.
    Theorem {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        tail_start: Option<usize>,
        /// Additive slack allowed on the measured individual exponent.
        #[arg(long, default_value_t = 0.1)]
        slack: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write the built-in corpus: manifest plus one config per instance.
    Corpus {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

pub fn run(args: Vec<String>) -> i32 {
    let mut argv = vec!["dioph".to_string()];
    argv.extend(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

type CliResult = Result<i32, (i32, String)>;

fn config_err<E: std::fmt::Display>(e: E) -> (i32, String) {
    (EXIT_CONFIG, e.to_string())
}

fn engine_err(e: EngineError) -> (i32, String) {
    (EXIT_CONFIG, e.to_string())
}

fn load_config(args: &ConfigArgs) -> Result<(RunConfig, ThetaMatrix), (i32, String)> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| config_err(format!("{}: {e}", args.config.display())))?;
    let cfg = RunConfig::parse(&text).map_err(config_err)?;
    let theta = cfg.to_theta().map_err(config_err)?;
    Ok((cfg, theta))
}

fn load_sequence(path: &Path) -> Result<ApproxSequence, (i32, String)> {
    let text =
        fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    sequence_from_json(&text).map_err(config_err)
}

fn emit(out: &OutArgs, json: String, pretty: String) -> CliResult {
    if let Some(path) = &out.out {
        fs::write(path, &json).map_err(config_err)?;
    }
    if out.pretty {
        println!("{pretty}");
    } else if out.out.is_none() {
        print!("{json}");
    }
    Ok(EXIT_OK)
}

fn write_csv(out: &OutArgs, csv: String) -> Result<(), (i32, String)> {
    if let Some(path) = &out.csv {
        fs::write(path, csv).map_err(config_err)?;
    }
    Ok(())
}

fn sequence_summary(seq: &ApproxSequence) -> String {
    let mut s = format!(
        "{} records up to height {} ({}x{} matrix, hash {})\n",
        seq.records.len(),
        seq.max_height,
        seq.n,
        seq.m,
        seq.config_hash
    );
    s.push_str("  nu          M  zeta\n");
    for r in &seq.records {
        s.push_str(&format!("{:>4} {:>10}  {:.6e}\n", r.nu, r.height, r.zeta.to_f64_mid()));
    }
    for f in &seq.flags {
        s.push_str(&format!("  flag: {f}\n"));
    }
    s
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Approx { config, out } => {
            let (cfg, theta) = load_config(&config)?;
            let height = config
                .max_height
                .or(cfg.max_height)
                .unwrap_or_else(|| cfg.default_height());
            let policy = cfg.policy(config.precision_cap_bits);
            let workers = config.workers.or(cfg.workers).unwrap_or(1);
            let seq =
                compute_sequence(&theta, height, &policy, workers).map_err(engine_err)?;
            write_csv(&out, sequence_to_csv(&seq))?;
            emit(&out, sequence_to_json(&seq), sequence_summary(&seq))
        }
        Command::Oracle { config, out } => {
            let (cfg, theta) = load_config(&config)?;
            let height = config.max_height.or(cfg.max_height).unwrap_or(200);
            let seq = oracle_sequence(&theta, height).map_err(engine_err)?;
            write_csv(&out, sequence_to_csv(&seq))?;
            emit(&out, sequence_to_json(&seq), sequence_summary(&seq))
        }
        Command::Verify { config, sequence, against_oracle, out } => {
            let (cfg, theta) = load_config(&config)?;
            let seq = load_sequence(&sequence)?;
            let policy = cfg.policy(config.precision_cap_bits);
            let report = verify_sequence(&theta, &seq, &policy).map_err(engine_err)?;
            let mut pass = report.pass;
            let mut oracle_diff = Vec::new();
            if against_oracle {
                let oracle = oracle_sequence(&theta, seq.max_height).map_err(engine_err)?;
                if oracle.skeleton() != seq.skeleton() {
                    pass = false;
                    oracle_diff.push(format!(
                        "oracle produced {} records, sequence has {}",
                        oracle.records.len(),
                        seq.records.len()
                    ));
                    for (o, s) in oracle.records.iter().zip(&seq.records) {
                        if o.x != s.x || o.y != s.y || o.height != s.height {
                            oracle_diff.push(format!(
                                "first divergence at nu={}: oracle x={:?} M={}, sequence x={:?} M={}",
                                o.nu, o.x, o.height, s.x, s.height
                            ));
                            break;
                        }
                    }
                }
            }
            let json = serde_json::json!({
                "pass": pass,
                "scanned_points": report.scanned_points,
                "indices_ok": report.indices_ok,
                "canonical_ok": report.canonical_ok,
                "heights_strictly_increasing": report.heights_strictly_increasing,
                "zeta_strictly_decreasing": report.zeta_strictly_decreasing,
                "records_consistent": report.records_consistent,
                "emptiness_ok": report.emptiness_ok,
                "failures": report.failures,
                "notes": report.notes,
                "oracle_diff": oracle_diff,
            });
            let mut text = serde_json::to_string_pretty(&json).expect("report");
            text.push('\n');
            let pretty = if pass {
                format!("verification passed ({} points rescanned)", report.scanned_points)
            } else {
                format!(
                    "verification FAILED: {}",
                    report
                        .failures
                        .iter()
                        .chain(oracle_diff.iter())
                        .cloned()
                        .collect::<Vec<_>>()
                        .join("; ")
                )
            };
            emit(&out, text, pretty)?;
            Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Exponents { sequence, tail_start, out } => {
            let seq = load_sequence(&sequence)?;
            let tail = tail_start.unwrap_or_else(|| exponents::default_tail_start(&seq));
            let est = exponents::estimate_exponents(&seq, tail).map_err(exponents_err)?;
            write_csv(&out, exponents::ratios_to_csv(&est.ratios))?;
            let pretty = format!(
                "alpha_hat = {:.6} (+-{:.2e})   beta_hat = {:.6} (+-{:.2e})   tail {}..{} ({} ratios)",
                est.alpha_hat,
                est.alpha_err,
                est.beta_hat,
                est.beta_err,
                est.tail_start,
                seq.records.len(),
                est.tail_ratios
            );
            emit(&out, exponents::estimate_to_json(&est), pretty)
        }
        Command::Analyze { sequence, ratio_threshold, out } => {
            let seq = load_sequence(&sequence)?;
            let report = structure::analyze(&seq, ratio_threshold).map_err(config_err)?;
            write_csv(&out, structure::det_checks_to_csv(&report.det_checks))?;
            let ok = report.det_checks.iter().filter(|c| c.ok == Some(true)).count();
            let failed = report.det_checks.iter().filter(|c| c.ok == Some(false)).count();
            let pretty = format!(
                "{} runs, {} quadruples ({} determinant bounds ok, {} failed), tail rank {:?} -> {:?}",
                report.runs.len(),
                report.quadruples.len(),
                ok,
                failed,
                report.tail_ranks.first().map(|t| t.1),
                report.tail_ranks.last().map(|t| t.1),
            );
            emit(&out, structure::report_to_json(&report), pretty)?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Bounds { case, alpha, grid, out } => {
            let case = parse_case(&case)?;
            let grid = match (alpha, grid) {
                (Some(a), None) => vec![parse_alpha(&a)?],
                (None, Some(g)) => parse_grid(&g)?,
                _ => {
                    return Err((
                        EXIT_CONFIG,
                        "bounds needs exactly one of --alpha or --grid".into(),
                    ))
                }
            };
            let rows = bounds::compare_bounds(case, &grid).map_err(config_err)?;
            write_csv(&out, bounds::compare_to_csv(&rows))?;
            let mut json = serde_json::to_string_pretty(&rows).expect("rows");
            json.push('\n');
            let mut pretty = format!("{:>12} {:>16} {:>16}  winner\n", "alpha", "baseline", "new");
            for r in &rows {
                pretty.push_str(&format!(
                    "{:>12.6} {:>16} {:>16.9}  {:?}\n",
                    r.alpha,
                    r.baseline.map(|b| format!("{b:.9}")).unwrap_or_else(|| "n/a".into()),
                    r.new_bound,
                    r.winner
                ));
            }
            emit(&out, json, pretty)
        }
        Command::Theorem { config, tail_start, slack, out } => {
            let (cfg, theta) = load_config(&config)?;
            let case = theta.case();
            if case == CaseTag::Other {
                return Err((
                    EXIT_CONFIG,
                    format!("no transference bound for a {}x{} matrix", theta.n(), theta.m()),
                ));
            }
            let height = config
                .max_height
                .or(cfg.max_height)
                .unwrap_or_else(|| cfg.default_height());
            let policy = cfg.policy(config.precision_cap_bits);
            let workers = config.workers.or(cfg.workers).unwrap_or(1);
            let seq =
                compute_sequence(&theta, height, &policy, workers).map_err(engine_err)?;
            let tail = tail_start
                .or(cfg.tail_start)
                .unwrap_or_else(|| exponents::default_tail_start(&seq));
            let est = exponents::estimate_exponents(&seq, tail).map_err(exponents_err)?;
            let alpha = BigRational::from_float(est.alpha_hat)
                .ok_or_else(|| config_err("alpha estimate is not finite"))?;
            let rhs = bounds::rhs_new(case, &alpha).ok();
            let (applicable, rhs_mid, satisfied) = match rhs {
                Some(r) => {
                    let mid = r.mid_f64();
                    (true, Some(mid), Some(est.beta_hat + slack >= mid))
                }
                None => (false, None, None),
            };
            let json = serde_json::json!({
                "case": case.name(),
                "records": seq.records.len(),
                "max_height": seq.max_height,
                "tail_start": est.tail_start,
                "alpha_hat": est.alpha_hat,
                "beta_hat": est.beta_hat,
                "slack": slack,
                "applicable": applicable,
                "rhs": rhs_mid,
                "satisfied": satisfied,
                "flags": seq.flags,
            });
            let mut text = serde_json::to_string_pretty(&json).expect("verdict");
            text.push('\n');
            let pretty = match satisfied {
                Some(true) => format!(
                    "satisfied: beta_hat {:.4} + {slack} >= alpha_hat * g(alpha_hat) = {:.4}",
                    est.beta_hat,
                    rhs_mid.unwrap()
                ),
                Some(false) => format!(
                    "VIOLATED: beta_hat {:.4} + {slack} < alpha_hat * g(alpha_hat) = {:.4}",
                    est.beta_hat,
                    rhs_mid.unwrap()
                ),
                None => format!(
                    "not applicable: alpha_hat {:.4} is outside the bound's domain",
                    est.alpha_hat
                ),
            };
            emit(&out, text, pretty)?;
            Ok(match satisfied {
                Some(false) => EXIT_CHECK_FAILED,
                _ => EXIT_OK,
            })
        }
        Command::Corpus { out_dir } => {
            fs::create_dir_all(&out_dir).map_err(config_err)?;
            fs::write(out_dir.join("manifest.json"), corpus::manifest_json())
                .map_err(config_err)?;
            for inst in corpus::builtin_corpus() {
                let cfg = corpus::instance_config(&inst, inst.default_height);
                fs::write(out_dir.join(format!("{}.cfg", inst.name)), cfg)
                    .map_err(config_err)?;
            }
            println!("wrote manifest and {} configs to {}", 5, out_dir.display());
            Ok(EXIT_OK)
        }
    }
}

fn exponents_err(e: ExponentsError) -> (i32, String) {
    (EXIT_CONFIG, e.to_string())
}

fn parse_case(text: &str) -> Result<CaseTag, (i32, String)> {
    match text {
        "m1n3" => Ok(CaseTag::M1N3),
        "m3n1" => Ok(CaseTag::M3N1),
        "m2n2" => Ok(CaseTag::M2N2),
        _ => Err((EXIT_CONFIG, format!("unknown case {text:?} (m1n3, m3n1, m2n2)"))),
    }
}

fn parse_alpha(text: &str) -> Result<BigRational, (i32, String)> {
    // reuse the config parser's rational grammar through a one-line config
    let probe = format!("m = 1\nn = 1\nentry.1.1 = rational {text}\n");
    let cfg = RunConfig::parse(&probe).map_err(|e| (EXIT_CONFIG, e.to_string()))?;
    Ok(cfg.entries[&(1, 1)]
        .as_rational()
        .expect("rational entry")
        .clone())
}

fn parse_grid(text: &str) -> Result<Vec<BigRational>, (i32, String)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err((EXIT_CONFIG, format!("grid must be lo:hi:count, got {text:?}")));
    }
    let lo = parse_alpha(parts[0])?;
    let hi = parse_alpha(parts[1])?;
    let count: usize =
        parts[2].parse().map_err(|_| (EXIT_CONFIG, format!("bad count {:?}", parts[2])))?;
    if lo >= hi || count == 0 {
        return Err((EXIT_CONFIG, "grid needs lo < hi and count > 0".into()));
    }
    Ok(bounds::rational_grid(&lo, &hi, count))
}
