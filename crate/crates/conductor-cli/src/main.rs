use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use conductor::limits::Limits;
use conductor::scalar::FieldTag;
use conductor_cli::{parse, run, Config};

/// Exact checks on conductor squares of rings: pushouts, patched modules,
/// valuation compositions, finite spectra, and chart gluing.
#[derive(Parser, Debug)]
#[command(name = "conductor", version)]
struct Args {
    /// Script file to execute (stdin when omitted)
    #[arg(long)]
    input: Option<String>,

    /// Write the JSON report to this file
    #[arg(long)]
    json: Option<String>,

    /// Total-degree cap for basis computations
    #[arg(long, default_value_t = 64)]
    degree_bound: u32,

    /// Degree cap for membership probes and presentation searches
    #[arg(long, default_value_t = 8)]
    probe_degree: u32,

    /// Coefficient field for `k[...]` declarations: QQ or Fp:<p>
    #[arg(long, default_value = "QQ")]
    field: String,

    /// Stop at the first failing record
    #[arg(long, default_value_t = false)]
    fail_fast: bool,

    /// Seed for the randomized spot checks
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Run independent commands concurrently (report stays in script order)
    #[arg(long, default_value_t = false)]
    parallel: bool,

    /// Include timings in the JSON report (off keeps reports byte-stable)
    #[arg(long, default_value_t = false)]
    timings: bool,
}

fn parse_field(text: &str) -> Result<FieldTag, String> {
    if text == "QQ" {
        return Ok(FieldTag::Rational);
    }
    if let Some(p) = text.strip_prefix("Fp:") {
        let p: u64 = p.parse().map_err(|_| format!("bad modulus in {text}"))?;
        if p < 2 || p >= (1 << 31) {
            return Err(format!("modulus {p} out of range"));
        }
        return Ok(FieldTag::Prime(p as u32));
    }
    Err(format!("unknown field {text}; use QQ or Fp:<p>"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let field = match parse_field(&args.field) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match &args.input {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {path}: {e}");
                return ExitCode::from(2);
            }
        },
        None => {
            let mut buf = String::new();
            if std::io::stdin().read_to_string(&mut buf).is_err() {
                eprintln!("error: cannot read stdin");
                return ExitCode::from(2);
            }
            buf
        }
    };
    let script = match parse(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let config = Config {
        field,
        limits: Limits::new(args.degree_bound, args.probe_degree),
        seed: args.seed,
        fail_fast: args.fail_fast,
        parallel: args.parallel,
    };
    let report = run(&script, &config);
    print!("{}", report.human());
    if let Some(path) = &args.json {
        if let Err(e) = std::fs::write(path, report.to_json_string(args.timings)) {
            eprintln!("error: cannot write {path}: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
