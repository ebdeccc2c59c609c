use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qburau::cfrac::default_numerator_extra;
use qburau::faithful::{alexander, classify_specialization_tol, SearchTolerances};
use qburau::qrat::{jones, q_deform};
use qburau::rootloc::{
    annulus_check_tol, rl_power_roots, sigma_sample_tol, AnnulusReport, ANNULUS_TOL, RESIDUAL_TOL,
};
use qburau::stabilize::{radius_estimate, stabilized_series};
use qburau::{BraidWord, Error, Exec, Fraction, LaurentPoly, PeriodicCF, QMatrix2, SpecPoint};

#[derive(Parser)]
#[command(
    name = "qburau",
    version,
    about = "q-deformed rationals and the Burau representation of B3"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the parallel paths; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// The q-rational `[r/s]_q` of a positive fraction.
    Qrat { fraction: String },
    /// Burau matrix of a braid word (letters aAbB or indices 1,-2,...).
    Burau {
        #[arg(default_value = "", allow_hyphen_values = true)]
        word: String,
        /// Substitute t = -q.
        #[arg(long)]
        q_convention: bool,
    },
    /// Roots of numerators and denominators of `[r/s]_q` for s <= max-den.
    Sigma {
        #[arg(long)]
        max_den: i64,
        /// Numerators range over r <= s + extra (default 2 * max-den).
        #[arg(long)]
        numerator_extra: Option<i64>,
        /// Root table destination; the summary goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = RESIDUAL_TOL)]
        residual_tol: f64,
        #[arg(long, default_value_t = ANNULUS_TOL)]
        annulus_tol: f64,
    },
    /// Faithfulness verdict for the specialization t = t0.
    Specialize {
        /// -1, 0.5, 1/3, 0.5+0.2i or zeta(n,k).
        #[arg(long, allow_hyphen_values = true)]
        t0: String,
        #[arg(long, default_value_t = 40)]
        max_den: i64,
        #[arg(long, default_value_t = qburau::faithful::SEARCH_TOL)]
        search_tol: f64,
        #[arg(long, default_value_t = qburau::faithful::CONFIRM_TOL)]
        confirm_tol: f64,
        #[arg(long, default_value_t = qburau::faithful::ANNULUS_MARGIN)]
        annulus_margin: f64,
    },
    /// Normalized Jones polynomial of the two-bridge knot of r/s.
    Jones { fraction: String },
    /// Alexander polynomial of the closure of a braid word.
    Alexander {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Stabilized Taylor series of `[x]_q` for x = phi or `pre;period`.
    Stabilize {
        x: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
        /// Convergent index for the radius estimate.
        #[arg(long, default_value_t = 18)]
        m: usize,
    },
    /// Roots of the entries of (R_q L_q)^m.
    Rlroots {
        #[arg(long)]
        m: u32,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u8>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Numeric(String),
    Checks,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Checks => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Numeric(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::StabilizationNotReached { .. } => {
                Failure::Numeric(e.to_string())
            }
            Error::Io(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = match configure_threads(cli.threads) {
        Ok(e) => e,
        Err(f) => return report(f),
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, exec, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            report(f)
        }
    }
}

fn report(f: Failure) -> ExitCode {
    match &f {
        Failure::Usage(m) | Failure::Io(m) | Failure::Numeric(m) => eprintln!("error: {m}"),
        Failure::Checks => eprintln!("error: acceptance checks failed"),
    }
    ExitCode::from(f.code())
}

fn configure_threads(threads: Option<usize>) -> Result<Exec, Failure> {
    match threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(k) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Exec::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Exec::Sequential),
        None => Ok(Exec::default()),
    }
}

fn run(cli: &Cli, exec: Exec, out: &mut impl Write) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Qrat { fraction } => {
            no_csv(fmt)?;
            let x = q_deform(positive(fraction)?)?;
            match fmt {
                Format::Json => json_line(out, &x)?,
                _ => writeln!(out, "{x}")?,
            }
        }
        Command::Burau { word, q_convention } => {
            no_csv(fmt)?;
            let mut m = QMatrix2::rho3(&braid(word)?);
            if *q_convention {
                m = m.to_q_convention()?;
            }
            match fmt {
                Format::Json => json_line(out, &matrix_json(&m))?,
                _ => writeln!(out, "{m}")?,
            }
        }
        Command::Sigma {
            max_den,
            numerator_extra,
            out: path,
            residual_tol,
            annulus_tol,
        } => {
            tolerance("--residual-tol", *residual_tol)?;
            tolerance("--annulus-tol", *annulus_tol)?;
            let extra = numerator_extra.unwrap_or_else(|| default_numerator_extra(*max_den));
            let sample = sigma_sample_tol(*max_den, extra, exec, *residual_tol)?;
            let rep = annulus_check_tol(&sample, *annulus_tol);
            match path {
                Some(p) => {
                    let file = File::create(p)
                        .map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
                    let mut w = BufWriter::new(file);
                    if fmt == Format::Json {
                        serde_json::to_writer(&mut w, &sample)
                            .map_err(|e| Failure::Io(e.to_string()))?;
                        writeln!(w)?;
                    } else {
                        sample.write_csv(&mut w)?;
                    }
                    w.flush()?;
                    match fmt {
                        Format::Json => json_line(out, &summary_json(&rep))?,
                        _ => write_summary(out, &rep)?,
                    }
                }
                None => match fmt {
                    Format::Csv => sample.write_csv(&mut *out)?,
                    Format::Json => json_line(
                        out,
                        &json!({ "sample": sample, "summary": summary_json(&rep) }),
                    )?,
                    Format::Text => write_summary(out, &rep)?,
                },
            }
        }
        Command::Specialize {
            t0,
            max_den,
            search_tol,
            confirm_tol,
            annulus_margin,
        } => {
            no_csv(fmt)?;
            tolerance("--search-tol", *search_tol)?;
            tolerance("--confirm-tol", *confirm_tol)?;
            tolerance("--annulus-margin", *annulus_margin)?;
            let point: SpecPoint = t0.parse()?;
            let tol = SearchTolerances {
                annulus_margin: *annulus_margin,
                search: *search_tol,
                confirm: *confirm_tol,
            };
            let v = classify_specialization_tol(&point, *max_den, exec, &tol)?;
            if fmt == Format::Text {
                writeln!(out, "{v}")?;
            }
            json_line(out, &v)?;
        }
        Command::Jones { fraction } => {
            no_csv(fmt)?;
            poly_out(out, fmt, &jones(positive(fraction)?)?, 'q')?;
        }
        Command::Alexander { word } => {
            no_csv(fmt)?;
            poly_out(out, fmt, &alexander(&braid(word)?)?, 't')?;
        }
        Command::Stabilize { x, order, m } => {
            no_csv(fmt)?;
            let x: PeriodicCF = x.parse()?;
            let st = stabilized_series(&x, *order)?;
            let radius = radius_estimate(&x, *m)?;
            match fmt {
                Format::Json => {
                    #[derive(serde::Serialize)]
                    struct Report<'a> {
                        #[serde(flatten)]
                        series: &'a qburau::StabilizedSeries,
                        radius_estimate: Value,
                    }
                    let report = Report {
                        series: &st,
                        radius_estimate: json!({ "m": m, "radius": radius }),
                    };
                    json_line(out, &report)?;
                }
                _ => {
                    writeln!(out, "{}", st.series)?;
                    writeln!(out, "stable at m = {}", st.stable_at_m)?;
                    writeln!(out, "radius estimate (m = {m}) = {radius:.10}")?;
                }
            }
        }
        Command::Rlroots { m } => {
            let rep = rl_power_roots(*m)?;
            match fmt {
                Format::Csv => rep.write_csv(&mut *out)?,
                Format::Json => json_line(out, &rep)?,
                Format::Text => {
                    for e in &rep.roots {
                        writeln!(
                            out,
                            "{:?} {:+.12} {:+.12}i |q| = {:.12} distance {:.12}",
                            e.entry,
                            e.root.re,
                            e.root.im,
                            e.root.norm(),
                            e.distance
                        )?;
                    }
                    writeln!(
                        out,
                        "min distance to |q| = 0.381966011250: {:.12}",
                        rep.min_distance
                    )?;
                }
            }
        }
        Command::Selftest { only } => {
            no_csv(fmt)?;
            let outcomes = match only {
                Some(id) if (1..=qburau::selftest::CRITERIA).contains(id) => {
                    vec![qburau::selftest::run_check(*id, exec)]
                }
                Some(id) => return Err(Failure::Usage(format!("no criterion {id}"))),
                None => qburau::selftest::run_all(exec),
            };
            match fmt {
                Format::Json => json_line(out, &outcomes)?,
                _ => {
                    for o in &outcomes {
                        writeln!(out, "{o}")?;
                    }
                    let passed = outcomes.iter().filter(|o| o.passed).count();
                    writeln!(out, "{passed}/{} criteria passed", outcomes.len())?;
                }
            }
            if outcomes.iter().any(|o| !o.passed) {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn no_csv(fmt: Format) -> Outcome {
    if fmt == Format::Csv {
        return Err(Failure::Usage(
            "csv output is available for sigma and rlroots only".into(),
        ));
    }
    Ok(())
}

fn tolerance(flag: &str, v: f64) -> Outcome {
    if !(v.is_finite() && v > 0.0) {
        return Err(Failure::Usage(format!(
            "{flag} must be a positive number, got {v}"
        )));
    }
    Ok(())
}

fn positive(text: &str) -> Result<Fraction, Failure> {
    let x: Fraction = text.parse()?;
    if !x.is_positive() || x.is_infinite() {
        return Err(Failure::Usage(format!(
            "expected a positive fraction, got {text}"
        )));
    }
    Ok(x)
}

fn braid(text: &str) -> Result<BraidWord, Failure> {
    Ok(text.parse()?)
}

fn json_line(out: &mut impl Write, v: &impl serde::Serialize) -> Outcome {
    serde_json::to_writer(&mut *out, v).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn poly_out(out: &mut impl Write, fmt: Format, p: &LaurentPoly, var: char) -> Outcome {
    match fmt {
        Format::Json => json_line(out, p),
        _ => Ok(writeln!(out, "{}", p.compact(var))?),
    }
}

fn matrix_json(m: &QMatrix2) -> Value {
    json!({
        "convention": m.convention(),
        "a": m.a,
        "b": m.b,
        "c": m.c,
        "d": m.d,
    })
}

fn summary_json(rep: &AnnulusReport) -> Value {
    json!({
        "total_roots": rep.total_roots,
        "proven_violations": rep.proven_violations.len(),
        "conjecture_outliers": rep.conjecture_outliers.len(),
        "min_modulus": rep.min_modulus,
        "max_modulus": rep.max_modulus,
        "max_residual": rep.max_residual,
    })
}

fn write_summary(out: &mut impl Write, rep: &AnnulusReport) -> Outcome {
    writeln!(out, "roots: {}", rep.total_roots)?;
    writeln!(out, "min modulus: {:.12}", rep.min_modulus)?;
    writeln!(out, "max modulus: {:.12}", rep.max_modulus)?;
    writeln!(out, "max residual: {:.3e}", rep.max_residual)?;
    writeln!(
        out,
        "violations of (0.171572875254, 5.828427124746): {}",
        rep.proven_violations.len()
    )?;
    writeln!(
        out,
        "outside [0.381966011250, 2.618033988750]: {} (empirical consistency only)",
        rep.conjecture_outliers.len()
    )?;
    Ok(())
}
