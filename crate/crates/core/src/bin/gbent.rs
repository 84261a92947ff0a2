use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gbent::construct::{
    build_maiorana, census_size, enumerate_pary_bent, worked_example_q21, worked_example_q27,
    MaioranaSpec,
};
use gbent::io::{self, Format, FunctionFile};
use gbent::tables::{self, Relabel};
use gbent::{selftest, wht_naive, BigInt, GbentError};

#[derive(Parser)]
#[command(
    name = "gbent",
    version,
    about = "Exact spectra and bentness of functions Z_p^n -> Z_q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Delimited,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a function file. Exit status 0 if gbent, 1 if not, 2 on bad input.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
    /// Build a function file from a construction spec, or from a random spec.
    Construct {
        /// Construction spec; without it a random spec is drawn from --p, --n, --q, --seed.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        p: Option<u64>,
        /// Number of variables (even).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the composed truth table instead of the digit functions.
        #[arg(long)]
        table: bool,
    },
    /// Recompute the Hadamard-row tables of the two worked examples and compare with reference listings.
    Tables {
        /// Directory holding table1.txt and table2.txt; defaults to the bundled copies.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Dump the unnormalized spectrum of a function file.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exhaustive census of p-ary bent functions Z_p^n -> Z_p.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Run the built-in invariant suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Rendered output plus exit status.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, GbentError> {
    std::fs::read_to_string(path).map_err(|e| GbentError::Parse(format!("{}: {e}", path.display())))
}

fn read_function(path: &Path) -> Result<FunctionFile, GbentError> {
    io::parse_function(&read(path)?).map_err(|e| match e {
        GbentError::Parse(msg) => GbentError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn random_spec(
    p: Option<u64>,
    n: Option<u32>,
    q: Option<u64>,
    seed: u64,
) -> Result<MaioranaSpec, GbentError> {
    let (Some(p), Some(n), Some(q)) = (p, n, q) else {
        return Err(GbentError::InvalidParameters(
            "construct needs --input, or all of --p, --n and --q".into(),
        ));
    };
    if n == 0 || n % 2 != 0 {
        return Err(GbentError::InvalidParameters(format!(
            "--n must be even and positive, got {n}"
        )));
    }
    if !gbent::arith::is_odd_prime(p) {
        return Err(GbentError::NotOddPrime(p));
    }
    if q == 0 || q % p != 0 {
        return Err(GbentError::InvalidParameters(format!(
            "p = {p} must divide q = {q}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(MaioranaSpec::random(&mut rng, p, n / 2, q))
}

fn tables_report(golden_dir: Option<&Path>, format: Format) -> Result<Outcome, GbentError> {
    let mut text = String::new();
    let mut code = 0;
    let cases = [
        (
            "q = 27",
            "table1.txt",
            tables::TABLE_Q27,
            worked_example_q27(),
        ),
        (
            "q = 21",
            "table2.txt",
            tables::TABLE_Q21,
            worked_example_q21(),
        ),
    ];
    for (name, file, bundled, spec) in cases {
        let golden = match golden_dir {
            Some(dir) => read(&dir.join(file))?,
            None => bundled.to_string(),
        };
        let golden = tables::parse_golden(&golden)?;
        let table = tables::compute_table(&spec)?;
        let relabel = tables::find_relabel(&table, &golden)?;
        writeln!(
            text,
            "# worked example {name}: S(u) = 9 alpha zeta_3^j H_9^(r)"
        )
        .unwrap();
        match relabel {
            Some(r) => writeln!(
                text,
                "# {} reference rows agree under row relabeling: {}",
                golden.len(),
                r.name()
            )
            .unwrap(),
            None => {
                code = 1;
                let mismatches = tables::compare(&table, &golden, Relabel::DigitReversal)?;
                writeln!(text, "# MISMATCH against {} reference rows:", golden.len()).unwrap();
                for m in mismatches {
                    writeln!(
                        text,
                        "#   u = {:?}: expected {:?}, computed {:?}",
                        m.u, m.expected, m.actual
                    )
                    .unwrap();
                }
            }
        }
        text.push_str(&tables::render_table(
            &table,
            relabel.unwrap_or(Relabel::DigitReversal),
            format,
        ));
    }
    Ok(Outcome { text, code })
}

fn run(cli: &Cli) -> Result<Outcome, GbentError> {
    let format = match cli.common.format {
        FormatArg::Text => Format::Text,
        FormatArg::Delimited => Format::Delimited,
    };
    match &cli.command {
        Command::Analyze { input } => {
            let file = read_function(input)?;
            let analysis = io::analyze::<BigInt>(&file)?;
            Ok(Outcome {
                text: analysis.render(format),
                code: if analysis.gbent { 0 } else { 1 },
            })
        }
        Command::Construct {
            input,
            p,
            n,
            q,
            seed,
            table,
        } => {
            let spec = match input {
                Some(path) => io::parse_spec(&read(path)?)?,
                None => random_spec(*p, *n, *q, *seed)?,
            };
            let t = build_maiorana(&spec)?;
            let file = if *table {
                FunctionFile::Table(t.compose())
            } else {
                FunctionFile::Components(t)
            };
            Ok(Outcome::ok(io::emit_function(&file)))
        }
        Command::Tables { golden } => tables_report(golden.as_deref(), format),
        Command::Spectrum { input } => {
            let f = read_function(input)?.function();
            Ok(Outcome::ok(io::render_spectrum(
                &wht_naive::<BigInt>(&f),
                format,
            )))
        }
        Command::Enumerate { p, n } => {
            let (total, _) = census_size(*p, *n)?;
            let bent = enumerate_pary_bent(*p, *n)?;
            let mut text = String::new();
            match format {
                Format::Text => {
                    writeln!(text, "{} bent / {total} total", bent.len()).unwrap();
                    for f in &bent {
                        writeln!(text, "{:?}", f.table()).unwrap();
                    }
                }
                Format::Delimited => {
                    text.push_str("table\n");
                    for f in &bent {
                        let cells: Vec<String> = f.table().iter().map(u64::to_string).collect();
                        writeln!(text, "{}", cells.join(",")).unwrap();
                    }
                }
            }
            Ok(Outcome::ok(text))
        }
        Command::Selftest { seed } => {
            let results = selftest::run_all(*seed);
            let mut text = String::new();
            for r in &results {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                writeln!(text, "{mark}  {}: {}", r.name, r.detail).unwrap();
            }
            let code = if results.iter().all(|r| r.passed) {
                0
            } else {
                1
            };
            Ok(Outcome { text, code })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.jobs.map_or(0, usize::from))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(outcome) => {
            let written = match &cli.common.output {
                Some(path) => std::fs::write(path, &outcome.text),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
