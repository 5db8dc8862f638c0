//! Command-line front end: factor search, first-window tables, prime
//! sieving, and the statistics commands, with JSON output for scripting.

use caicos::lab;
use caicos::{factor, factor_traced, EngineConfig, EngineError, PrimeWindow, Witness};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "caicos",
    version,
    about = "Integer factoring by prime-window digit recovery",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// Fixed first window, growing coefficient bound
    A,
    /// Doubling windows, coefficient bound tied to ln N
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedOrder {
    /// Always report the canonically first witness
    Deterministic,
    /// Report whichever witness a worker finds first
    Any,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for a nontrivial factorization N = U*V
    Factor {
        /// The number to factor (decimal or 0x-prefixed hex)
        n: String,
        #[arg(long, value_enum, default_value_t = VariantArg::A)]
        variant: VariantArg,
        /// Starting coefficient bound for variant a (even, >= 2)
        #[arg(long, default_value_t = 2)]
        beta_max_init: i64,
        /// Window-doubling cap for variant b
        #[arg(long, default_value_t = 20)]
        max_j: u32,
        #[arg(long, value_enum, default_value_t = SeedOrder::Deterministic)]
        seed_order: SeedOrder,
        /// Emit one JSON record per attempt on stderr
        #[arg(long)]
        trace: bool,
        /// Print the witness as one JSON object
        #[arg(long)]
        json: bool,
    },
    /// List every witness found in the first prime window over a coefficient box
    Table {
        /// The number to factor (decimal or 0x-prefixed hex)
        n: String,
        #[arg(long, default_value_t = 8)]
        alpha_max: i64,
        #[arg(long, default_value_t = -16, allow_negative_numbers = true)]
        beta_lo: i64,
        #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
        beta_hi: i64,
        /// Print the rows as one JSON array
        #[arg(long)]
        json: bool,
    },
    /// Print the primes strictly between two bounds, one per line
    Sieve {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Distribution of the 2-adic valuation of a-1 over primes in (A, 2A]
    StatsAvgR {
        #[arg(long = "A")]
        lower: u64,
    },
    /// Count first-window congruence hits for a known coprime pair U, V
    StatsDensity {
        #[arg(long = "U")]
        u: String,
        #[arg(long = "V")]
        v: String,
        #[arg(long, default_value_t = 16)]
        beta_max: i64,
    },
    /// Generate a deterministic test instance N = U*V from a seed
    Gen {
        #[arg(long)]
        u_bits: u32,
        #[arg(long)]
        v_bits: u32,
        /// Also plant a triple (a, alpha, beta) dividing beta*V - alpha*U
        #[arg(long)]
        plant: bool,
        #[arg(long)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(var) = std::env::var("CAICOS_WORKERS") {
        match var.parse::<usize>() {
            Ok(k) if k >= 1 => {
                // a failure here means a pool already exists; proceed with it
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("error: CAICOS_WORKERS must be a positive integer");
                return ExitCode::from(1);
            }
        }
    }
    match run(cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Factor { n, variant, beta_max_init, max_j, seed_order, trace, json } => {
            let n = parse_nat(&n)?;
            let mut cfg = match variant {
                VariantArg::A => EngineConfig::variant_a(),
                VariantArg::B => EngineConfig::variant_b(),
            };
            cfg.beta_max_init = beta_max_init;
            cfg.max_j = max_j;
            cfg.deterministic = matches!(seed_order, SeedOrder::Deterministic);
            cfg.trace = trace;
            let result = if trace {
                factor_traced(&n, &cfg, &mut |event| {
                    let line = serde_json::to_string(event).expect("trace events serialize");
                    eprintln!("{line}");
                })
            } else {
                factor(&n, &cfg)
            };
            match result {
                Ok(w) => {
                    print_witness(&w, json)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ EngineError::NoFactorFound) | Err(e @ EngineError::InputIsUnit) => {
                    eprintln!("{e}");
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Cmd::Table { n, alpha_max, beta_lo, beta_hi, json } => {
            let n = parse_nat(&n)?;
            let rows =
                lab::reproduce_table(&n, alpha_max, beta_lo, beta_hi).map_err(|e| e.to_string())?;
            if json {
                println!("{}", serde_json::to_string(&rows).expect("witnesses serialize"));
            } else {
                println!("a alpha beta u0 v0 s u1 v1 U V");
                for w in &rows {
                    println!(
                        "{} {} {} {} {} {} {} {} {} {}",
                        w.a, w.alpha, w.beta, w.u0, w.v0, w.s, w.u1, w.v1, w.u, w.v
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sieve { from, to } => {
            let lo = parse_nat(&from)?;
            let hi = parse_nat(&to)?;
            for p in PrimeWindow::new(lo, hi) {
                println!("{p}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::StatsAvgR { lower } => {
            let rep = lab::avg_r(lower).map_err(|e| e.to_string())?;
            println!("lower = {}", rep.lower);
            println!("primes = {}", rep.prime_count);
            println!("mean_r = {:.6}", rep.mean_r);
            for (r, count) in &rep.histogram {
                println!("r={r}: {count} ({:.6})", *count as f64 / rep.prime_count as f64);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::StatsDensity { u, v, beta_max } => {
            let u = parse_nat(&u)?;
            let v = parse_nat(&v)?;
            let rep = lab::triple_density(&u, &v, beta_max).map_err(|e| e.to_string())?;
            println!("x_floor = {}", rep.x_floor);
            println!("beta_max = {}", rep.beta_max);
            println!("triples_found = {}", rep.triples_found);
            println!("expected = {:.6}", rep.expected);
            println!("ratio = {:.6}", rep.ratio);
            println!("a alpha beta");
            for t in &rep.triples {
                println!("{} {} {}", t.a, t.alpha, t.beta);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen { u_bits, v_bits, plant, seed } => {
            let inst =
                lab::generate_instance(u_bits, v_bits, plant, seed).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string(&inst).expect("instances serialize"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_witness(w: &Witness, json: bool) -> Result<(), String> {
    if json {
        println!("{}", serde_json::to_string(w).expect("witnesses serialize"));
        return Ok(());
    }
    println!("U = {}", w.u);
    println!("V = {}", w.v);
    println!("a = {}", w.a);
    println!("alpha = {}", w.alpha);
    println!("beta = {}", w.beta);
    println!("u0 = {}", w.u0);
    println!("v0 = {}", w.v0);
    println!("s = {}", w.s);
    println!("u1 = {}", w.u1);
    println!("v1 = {}", w.v1);
    Ok(())
}

fn parse_nat(text: &str) -> Result<BigUint, String> {
    let t = text.trim();
    let parsed = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        BigUint::parse_bytes(hex.as_bytes(), 16)
    } else {
        BigUint::parse_bytes(t.as_bytes(), 10)
    };
    parsed.ok_or_else(|| format!("invalid natural number: {text}"))
}
