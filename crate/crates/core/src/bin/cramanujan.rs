use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cramanujan::bounds::{horizon_estimate, upper_bound};
use cramanujan::generator::{
    generate_covering, generate_with_config, required_limit, semantics_discrepancy_scan,
};
use cramanujan::rational::parse_grid;
use cramanujan::reports::{self, compare_sequences, parse_bfile};
use cramanujan::stats::{density, run_report};
use cramanujan::{Error, PrimeTable, RationalC, Semantics, TableConfig};

const MEM_CAP_ENV: &str = "CRAMANUJAN_MEM_CAP";
const DEFAULT_GRID: &str = "0.05:0.90:0.05";

#[derive(Parser, Debug)]
#[command(name = "cramanujan", version, about = "Generalized Ramanujan primes")]
struct Cli {
    /// Memory cap for the prime table, in bytes (suffixes K, M, G allowed).
    #[arg(long, global = true, env = MEM_CAP_ENV, value_parser = parse_size)]
    mem_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print R_{c,1}, ..., R_{c,n}.
    Generate {
        #[arg(long, value_parser = parse_c)]
        c: RationalC,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        /// Refuse to sieve beyond this bound.
        #[arg(long, value_parser = parse_count)]
        limit: Option<u64>,
        /// Require the count at every real x, not just integers.
        #[arg(long)]
        strict_real_x: bool,
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Density of c-Ramanujan primes among the primes below a limit.
    Density {
        #[arg(long, value_parser = parse_c)]
        c: RationalC,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
    },
    /// Longest runs of c-Ramanujan and other primes in (lo, hi).
    Runs {
        #[arg(long, value_parser = parse_c)]
        c: RationalC,
        #[arg(long, value_parser = parse_count)]
        lo: u64,
        #[arg(long, value_parser = parse_count)]
        hi: u64,
    },
    /// Certified upper bound for R_{c,n}.
    Bounds {
        #[arg(long, value_parser = parse_c)]
        c: RationalC,
        #[arg(long, value_parser = parse_count)]
        n: u64,
    },
    /// Compare the first n terms with an OEIS b-file.
    Verify {
        #[arg(long, value_parser = parse_c)]
        c: RationalC,
        #[arg(long)]
        bfile: PathBuf,
        #[arg(long, value_parser = parse_count)]
        n: u64,
    },
    /// Density table over a grid of c.
    Table1 {
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
        #[arg(long, value_parser = parse_count, default_value = "1000000")]
        limit: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Longest-run table over a grid of c.
    Table2 {
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
        #[arg(long, value_parser = parse_count, default_value = "100000")]
        lo: u64,
        #[arg(long, value_parser = parse_count, default_value = "1000000")]
        hi: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Points where the strict real-x reading would move some R_{c,n}.
    Scan {
        #[arg(long, value_parser = parse_c)]
        c: RationalC,
        #[arg(long, value_parser = parse_count)]
        n: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ListFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

impl From<TableFormat> for reports::Format {
    fn from(f: TableFormat) -> Self {
        match f {
            TableFormat::Csv => reports::Format::Csv,
            TableFormat::Json => reports::Format::Json,
        }
    }
}

fn parse_c(s: &str) -> Result<RationalC, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Accepts `1000000`, `1_000_000`, `1e6` or `10^6`.
fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    let pow = |base: &str, exp: &str| -> Option<u64> {
        let b: u64 = base.parse().ok()?;
        let e: u32 = exp.parse().ok()?;
        b.checked_pow(e)
    };
    let parsed = if let Some((m, e)) = t.split_once(['e', 'E']) {
        m.parse::<u64>()
            .ok()
            .zip(pow("10", e))
            .and_then(|(m, p)| m.checked_mul(p))
    } else if let Some((b, e)) = t.split_once('^') {
        pow(b, e)
    } else {
        t.parse().ok()
    };
    parsed.ok_or_else(|| format!("`{s}` is not a non-negative integer"))
}

fn parse_size(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let (digits, mult) = match t.char_indices().last() {
        Some((i, 'k' | 'K')) => (&t[..i], 1u64 << 10),
        Some((i, 'm' | 'M')) => (&t[..i], 1 << 20),
        Some((i, 'g' | 'G')) => (&t[..i], 1 << 30),
        _ => (t, 1),
    };
    digits
        .trim()
        .parse::<u64>()
        .ok()
        .and_then(|v| v.checked_mul(mult))
        .ok_or_else(|| format!("`{s}` is not a byte size"))
}

enum Failure {
    Mismatch(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("output serializes")
    );
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match cli.mem_cap {
        Some(cap) => TableConfig::with_mem_cap(cap),
        None => TableConfig::default(),
    };
    match cli.command {
        Command::Generate {
            c,
            n,
            limit,
            strict_real_x,
            format,
        } => {
            let semantics = if strict_real_x {
                Semantics::StrictReal
            } else {
                Semantics::IntegerSweep
            };
            if let Some(cap) = limit {
                let need = required_limit(&c, n, semantics)?;
                if need > cap {
                    return Err(Error::ResourceLimit(format!(
                        "R_{{{c},{n}}} needs a sieve to {need}, above --limit {cap}"
                    ))
                    .into());
                }
            }
            let (list, _) = generate_with_config(&c, n, semantics, &config)?;
            match format {
                ListFormat::Text => {
                    let line: Vec<String> = list.values.iter().map(u64::to_string).collect();
                    println!("{}", line.join(" "));
                }
                ListFormat::Csv => {
                    println!("n,r");
                    for (i, r) in list.values.iter().enumerate() {
                        println!("{},{r}", i + 1);
                    }
                }
                ListFormat::Json => print_json(&list),
            }
        }
        Command::Density { c, limit } => {
            let (list, table) = generate_covering(&c, limit, Semantics::IntegerSweep, &config)?;
            print_json(&density::<f64>(&list, &table, limit)?);
        }
        Command::Runs { c, lo, hi } => {
            if lo >= hi {
                return Err(
                    Error::InvalidArgument(format!("need lo < hi, got ({lo}, {hi})")).into(),
                );
            }
            let (list, table) = generate_covering(&c, hi, Semantics::IntegerSweep, &config)?;
            print_json(&run_report::<f64>(&table, &list, lo, hi)?);
        }
        Command::Bounds { c, n } => {
            let table = PrimeTable::build_with(horizon_estimate(&c, n)?.max(2), &config)?;
            print_json(&upper_bound::<f64>(&c, n, Some(&table))?);
        }
        Command::Verify { c, bfile, n } => {
            let content = std::fs::read_to_string(&bfile).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {}: {e}", bfile.display()))
            })?;
            let reference = parse_bfile(&content)?;
            let (list, _) = generate_with_config(&c, n, Semantics::IntegerSweep, &config)?;
            match compare_sequences(&list, &reference, n)? {
                None => println!("ok: {n} terms of c = {c} agree with {}", bfile.display()),
                Some(m) => {
                    return Err(Failure::Mismatch(format!(
                        "mismatch at n = {}: computed {}, reference {}",
                        m.index, m.computed, m.reference
                    )))
                }
            }
        }
        Command::Table1 {
            grid,
            limit,
            format,
        } => {
            let grid = parse_grid(&grid)?;
            let rows = reports::compute_table1(&grid, limit, &config)?;
            print!("{}", reports::emit_table1(&rows, format.into())?);
        }
        Command::Table2 {
            grid,
            lo,
            hi,
            format,
        } => {
            let grid = parse_grid(&grid)?;
            let rows = reports::compute_table2(&grid, lo, hi, &config)?;
            print!("{}", reports::emit_table2(&rows, format.into())?);
        }
        Command::Scan { c, n } => {
            let need = required_limit(&c, n, Semantics::StrictReal)?;
            let table = PrimeTable::build_with(need, &config)?;
            let cert = upper_bound::<f64>(&c, n, Some(&table))?;
            let dips = semantics_discrepancy_scan(&table, &c, n, cert.x0.min(need - 1))?;
            print_json(&dips);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e.root() {
                Error::ResourceLimit(_) | Error::OutOfRange { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
