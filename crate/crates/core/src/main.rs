use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use afsterm::certificate::verify_certificate_text;
use afsterm::rewrite::StepKind;
use afsterm::syntax::{parse_term, print_term, print_term_in, print_type};
use afsterm::{find_interpretation, normalize, parse_afs, Afs, SearchConfig, SearchFailure, VarEnv};

#[derive(Parser)]
#[command(
    name = "afsterm",
    version,
    about = "Termination checker for algebraic functional systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a polynomial interpretation; prints YES or MAYBE first.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: u8,
        #[arg(long = "max-coeff", default_value_t = 3)]
        max_coeff: u32,
        /// Wall-clock limit in seconds.
        #[arg(long, default_value_t = 10.0)]
        timeout: f64,
        /// Also write the certificate to this file.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Worker threads (default: available cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Leave function arguments out of the templates.
        #[arg(long = "no-fun-args")]
        no_fun_args: bool,
    },
    /// Re-check a certificate; prints ACCEPT or REJECT.
    Verify {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Rewrite a closed term to normal form, leftmost-outermost.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
    },
    /// Print the type of every rule.
    Typecheck { file: PathBuf },
}

struct InputError(String);

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Afs, InputError> {
    let text = read(path)?;
    parse_afs(&text).map_err(|e| {
        let msg = e
            .to_string()
            .lines()
            .map(|l| format!("{}: {l}", path.display()))
            .collect::<Vec<_>>();
        InputError(msg.join("\n"))
    })
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8, InputError> {
    let io = |e: io::Error| InputError(e.to_string());
    match cli.command {
        Command::Check {
            file,
            degree,
            max_coeff,
            timeout,
            cert,
            jobs,
            no_fun_args,
        } => {
            let afs = load(&file)?;
            if !(timeout > 0.0 && timeout.is_finite()) {
                return Err(InputError("--timeout must be positive".into()));
            }
            let mut cfg = SearchConfig {
                max_coeff,
                degree,
                allow_fun_args: !no_fun_args,
                timeout: Duration::from_secs_f64(timeout),
                ..SearchConfig::default()
            };
            if let Some(j) = jobs {
                cfg.parallelism = j.max(1);
            }
            match find_interpretation(&afs, &cfg) {
                Ok(c) => {
                    let text = c.to_string();
                    if let Some(path) = cert {
                        fs::write(&path, &text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                    }
                    writeln!(out, "YES").map_err(io)?;
                    write!(out, "{text}").map_err(io)?;
                    Ok(0)
                }
                Err(f @ (SearchFailure::Exhausted(_) | SearchFailure::Timeout(_))) => {
                    writeln!(out, "MAYBE").map_err(io)?;
                    writeln!(
                        out,
                        "no interpretation found (degree={}, max_coeff={}): {f}",
                        cfg.degree, cfg.max_coeff
                    )
                    .map_err(io)?;
                    Ok(1)
                }
                Err(e) => Err(InputError(format!("{}: {e}", file.display()))),
            }
        }
        Command::Verify { file, cert } => {
            let afs = load(&file)?;
            let text = read(&cert)?;
            match verify_certificate_text(&afs, &text) {
                Ok(()) => {
                    writeln!(out, "ACCEPT").map_err(io)?;
                    Ok(0)
                }
                Err(r) => {
                    writeln!(out, "REJECT {r}").map_err(io)?;
                    Ok(1)
                }
            }
        }
        Command::Normalize { file, term, fuel } => {
            let afs = load(&file)?;
            let t = parse_term(&afs.sig, &term).map_err(|e| InputError(format!("--term: {e}")))?;
            afsterm::infer(&afs.sig, &VarEnv::empty(), &t).map_err(|e| InputError(format!("--term: {e}")))?;
            let show_step = |out: &mut dyn Write, k: usize, s: &afsterm::RewriteStep| {
                let how = match &s.kind {
                    StepKind::Rule { index, .. } => format!("rule {index}"),
                    StepKind::Beta => "beta".to_string(),
                };
                writeln!(
                    out,
                    "  {k}. {how} at {}: {}",
                    s.position,
                    print_term(&afs.sig, &s.result)
                )
            };
            match normalize(&afs, &VarEnv::empty(), &t, fuel) {
                Ok(n) => {
                    writeln!(out, "{}", print_term(&afs.sig, &n.normal_form)).map_err(io)?;
                    writeln!(out, "steps: {}", n.trace.len()).map_err(io)?;
                    for (k, s) in n.trace.iter().enumerate() {
                        show_step(out, k + 1, s).map_err(io)?;
                    }
                    Ok(0)
                }
                Err(e) => {
                    let last = e.last_term().unwrap_or(&t);
                    writeln!(out, "{}", print_term(&afs.sig, last)).map_err(io)?;
                    writeln!(out, "fuel exhausted after {} steps", e.trace.len()).map_err(io)?;
                    Ok(1)
                }
            }
        }
        Command::Typecheck { file } => {
            let afs = load(&file)?;
            for (i, r) in afs.rules.iter().enumerate() {
                let names: Vec<String> = (0..r.env.len()).map(|k| r.var_name(k)).collect();
                writeln!(
                    out,
                    "rule {i}: {} => {} : {}",
                    print_term_in(&afs.sig, &names, &r.lhs),
                    print_term_in(&afs.sig, &names, &r.rhs),
                    print_type(&r.ty)
                )
                .map_err(io)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => {
            let _ = out.flush();
            ExitCode::from(code)
        }
        Err(InputError(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
