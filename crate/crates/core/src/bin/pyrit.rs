use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pyrit::bench::{self, BenchConfig, CodecChoice, Iterations, Operation};
use pyrit::container;
use pyrit::field::FieldId;
use pyrit::matrix::{cauchy_parity_matrix, decode_matrix, CodeSpec};
use pyrit::ring::sparse_transform;
use pyrit::schedule::{choose_transform, compile_crs_schedule, compile_schedule};
use pyrit::transforms::TransformKind;
use pyrit::verify;

#[derive(Parser)]
#[command(name = "pyrit", version, about = "Erasure coding in polynomial rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Gf16,
    Gf64,
}

impl From<FieldArg> for FieldId {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Gf16 => FieldId::Gf16,
            FieldArg::Gf64 => FieldId::Gf64,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformArg {
    Embedding,
    Parity,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodecArg {
    Pyrit,
    Crs,
    Table,
    All,
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, value_enum, default_value = "gf16")]
    field: FieldArg,
    #[arg(long, value_enum, default_value = "auto")]
    transform: TransformArg,
}

impl CodeArgs {
    fn spec(&self) -> Result<CodeSpec> {
        let transform = match self.transform {
            TransformArg::Embedding => TransformKind::Embedding,
            TransformArg::Parity => TransformKind::Parity,
            TransformArg::Auto => choose_transform(self.k, self.r),
        };
        Ok(CodeSpec::new(
            self.k,
            self.r,
            FieldId::from(self.field).spec(),
            transform,
        )?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Split a file into k+r shard files.
    Encode {
        input: PathBuf,
        #[command(flatten)]
        code: CodeArgs,
        /// Bytes per symbol; must be a multiple of w and 8.
        #[arg(long, default_value_t = 6144)]
        symbol_size: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild a file from shard files or directories of shards.
    Decode {
        #[arg(required = true)]
        shards: Vec<PathBuf>,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        /// Refuse shards written with a different transform.
        #[arg(long, value_enum)]
        transform: Option<TransformArg>,
    },
    /// Print the Cauchy parity matrix, or a decoding matrix.
    Matrix {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated survivor indices; prints the rows recovering the
        /// erased data.
        #[arg(long, value_delimiter = ',')]
        survivors: Option<Vec<usize>>,
    },
    /// Compare ring and binary-matrix schedule costs.
    Stats {
        #[command(flatten)]
        code: CodeArgs,
        /// Print every operation of the ring schedule.
        #[arg(long)]
        dump: bool,
    },
    /// Run the exhaustive self-checks.
    Verify {
        #[arg(long, value_enum)]
        field: Option<FieldArg>,
        /// Corrupt the idempotent before running (must fail).
        #[arg(long)]
        fault: bool,
    },
    /// Throughput sweep; writes one CSV per operation and codec.
    Bench {
        #[command(flatten)]
        code: CodeArgs,
        /// Symbol sizes in bytes (default: powers of two, 128 B to 8 MiB).
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        threads: Vec<usize>,
        /// Fixed iteration count (default: about 64 MiB of traffic per point).
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, value_enum, default_value = "all")]
        codec: CodecArg,
        /// Output directory for CSV files; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Encode {
            input,
            code,
            symbol_size,
            out,
        } => {
            let code = code.spec()?;
            let paths = container::encode_file(&input, &out, &code, symbol_size)?;
            println!(
                "wrote {} shards ({}, k={}, r={}, {}) to {}",
                paths.len(),
                code.field().id(),
                code.k(),
                code.r(),
                code.transform(),
                out.display()
            );
        }
        Command::Decode {
            shards,
            out,
            transform,
        } => {
            let expected = match transform {
                None | Some(TransformArg::Auto) => None,
                Some(TransformArg::Embedding) => Some(TransformKind::Embedding),
                Some(TransformArg::Parity) => Some(TransformKind::Parity),
            };
            let paths = container::collect_shard_paths(&shards)?;
            let len = container::decode_files(&paths, &out, expected)?;
            println!("restored {len} bytes to {}", out.display());
        }
        Command::Matrix { code, survivors } => {
            let code = code.spec()?;
            match survivors {
                None => print!("{}", cauchy_parity_matrix(&code)?),
                Some(s) => print!("{}", decode_matrix(&code, &s)?),
            }
        }
        Command::Stats { code, dump } => stats(&code.spec()?, dump)?,
        Command::Verify { field, fault } => {
            let fields = match field {
                Some(f) => vec![FieldId::from(f)],
                None => vec![FieldId::Gf16, FieldId::Gf64],
            };
            let mut ok = true;
            for id in fields {
                let spec = id.spec();
                let theta = fault.then(|| verify::corrupted_theta1(&spec));
                let report = verify::run(&spec, theta)?;
                print!("{report}");
                ok &= report.all_passed();
            }
            return Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
        Command::Bench {
            code,
            sizes,
            threads,
            iterations,
            codec,
            out,
        } => {
            let mut config = BenchConfig::new(code.spec()?);
            if let Some(sizes) = sizes {
                config.sizes = sizes;
            }
            if threads.iter().any(|t| !bench::THREAD_COLUMNS.contains(t)) {
                bail!("thread counts must be among 1, 2, 4, 8");
            }
            config.threads = threads;
            if let Some(n) = iterations {
                config.iterations = Iterations::Fixed(n);
            }
            let codecs = match codec {
                CodecArg::Pyrit => vec![CodecChoice::Pyrit],
                CodecArg::Crs => vec![CodecChoice::Crs],
                CodecArg::Table => vec![CodecChoice::Table],
                CodecArg::All => CodecChoice::ALL.to_vec(),
            };
            run_bench(&config, &codecs, out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn stats(code: &CodeSpec, dump: bool) -> Result<()> {
    let matrix = cauchy_parity_matrix(code)?;
    let ring = compile_schedule(&matrix, code.transform());
    let crs = compile_crs_schedule(&matrix, code.transform());
    println!(
        "code {} k={} r={} transform={}",
        code.field().id(),
        code.k(),
        code.r(),
        code.transform()
    );
    println!("schedule  xor_ops  copy_ops  total_region_ops  matrix_ones  pre  core  post");
    for (name, s) in [("pyrit", ring.stats()), ("crs", crs.stats())] {
        println!(
            "{name:<8}  {:>7}  {:>8}  {:>16}  {:>11}  {:>3}  {:>4}  {:>4}",
            s.xor_ops,
            s.copy_ops,
            s.total_region_ops,
            s.matrix_ones,
            s.pre_ops,
            s.core_ops,
            s.post_ops
        );
    }
    let ratio = ring.stats().total_region_ops as f64 / crs.stats().total_region_ops.max(1) as f64;
    println!("ratio pyrit/crs {ratio:.4}");
    println!("ring weights:");
    for i in 0..matrix.rows() {
        let row: Vec<String> = matrix
            .row(i)
            .iter()
            .map(|&e| sparse_transform(e, code.field()).weight().to_string())
            .collect();
        println!("{}", row.join(" "));
    }
    if dump {
        print!("{}", ring.dump());
    }
    Ok(())
}

fn run_bench(config: &BenchConfig, codecs: &[CodecChoice], out: Option<PathBuf>) -> Result<()> {
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let emit = |name: &str, body: &str| -> Result<()> {
        match &out {
            Some(dir) => {
                let path = dir.join(name);
                std::fs::write(&path, body)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
            }
            None => print!("# {name}\n{body}"),
        }
        Ok(())
    };
    for op in [Operation::Encode, Operation::Decode] {
        let mut tables = Vec::new();
        for &codec in codecs {
            let table = bench::run(config, codec, op)?;
            emit(&table.file_name(), &table.to_csv())?;
            tables.push(table);
        }
        let find = |c| tables.iter().find(|t| t.codec == c);
        if let (Some(p), Some(t)) = (find(CodecChoice::Pyrit), find(CodecChoice::Table)) {
            emit(
                &format!("{}_ratio_pyrit_table.csv", op.name()),
                &p.ratio_csv(t),
            )?;
        }
    }
    Ok(())
}
