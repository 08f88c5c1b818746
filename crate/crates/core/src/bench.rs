//! Coding-throughput sweep over symbol sizes and thread counts.
//!
//! Each point times `iterations` full schedule replays (transforms
//! included, no I/O). Throughput is `(k + r) * symbol_size * iterations /
//! elapsed`. With several threads, every symbol is split into per-thread
//! column ranges and the workers meet at a barrier after each iteration.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Barrier;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};

use crate::codec::{round_symbol_size, SymbolBuffer};
use crate::error::Result;
use crate::matrix::{cauchy_parity_matrix, decode_matrix, CodeSpec, FieldMatrix};
use crate::schedule::{
    column_ranges, compile_crs_schedule, compile_schedule, packet_views, split_packets_mut,
    Workspace, XorSchedule,
};
use crate::table::TableCodec;

/// Thread counts reported in the CSV columns.
pub const THREAD_COLUMNS: [usize; 4] = [1, 2, 4, 8];

/// Powers of two from 128 B to 8 MiB.
pub fn default_sizes() -> Vec<usize> {
    (7..=23).map(|e| 1usize << e).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodecChoice {
    Pyrit,
    Crs,
    Table,
}

impl CodecChoice {
    pub const ALL: [CodecChoice; 3] = [CodecChoice::Pyrit, CodecChoice::Crs, CodecChoice::Table];

    pub fn name(self) -> &'static str {
        match self {
            CodecChoice::Pyrit => "pyrit",
            CodecChoice::Crs => "crs",
            CodecChoice::Table => "table",
        }
    }
}

impl FromStr for CodecChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pyrit" => Ok(CodecChoice::Pyrit),
            "crs" => Ok(CodecChoice::Crs),
            "table" => Ok(CodecChoice::Table),
            other => Err(format!("unknown codec `{other}` (pyrit, crs, table)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Encode,
    Decode,
}

impl Operation {
    pub fn name(self) -> &'static str {
        match self {
            Operation::Encode => "encoding",
            Operation::Decode => "decoding",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iterations {
    Fixed(usize),
    /// Enough iterations to move about this many bytes, clamped to 1..=1000.
    Budget(usize),
}

impl Iterations {
    fn resolve(self, bytes_per_iteration: usize) -> usize {
        match self {
            Iterations::Fixed(n) => n.max(1),
            Iterations::Budget(b) => (b / bytes_per_iteration.max(1)).clamp(1, 1000),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub code: CodeSpec,
    pub sizes: Vec<usize>,
    pub threads: Vec<usize>,
    pub iterations: Iterations,
}

impl BenchConfig {
    pub fn new(code: CodeSpec) -> Self {
        BenchConfig {
            code,
            sizes: default_sizes(),
            threads: THREAD_COLUMNS.to_vec(),
            iterations: Iterations::Budget(64 << 20),
        }
    }
}

/// Throughput in GB/s for one symbol size; `None` where not measured.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub throughput: [Option<f64>; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub codec: CodecChoice,
    pub operation: Operation,
    pub rows: Vec<BenchRow>,
}

pub const CSV_HEADER: &str = "size,t1,t2,t4,t8";

fn csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{}", row.size);
        for v in row.throughput {
            match v {
                Some(x) => {
                    let _ = write!(out, ",{x:.4}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

impl BenchTable {
    pub fn to_csv(&self) -> String {
        csv(&self.rows)
    }

    /// Suggested output name, e.g. `encoding_pyrit.csv`.
    pub fn file_name(&self) -> String {
        format!("{}_{}.csv", self.operation.name(), self.codec.name())
    }

    /// Row-wise `self / other` throughput ratio, same CSV shape.
    pub fn ratio_csv(&self, other: &BenchTable) -> String {
        let rows: Vec<BenchRow> = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut throughput = [None; 4];
                for (slot, (x, y)) in throughput
                    .iter_mut()
                    .zip(a.throughput.iter().zip(&b.throughput))
                {
                    if let (Some(x), Some(y)) = (x, y) {
                        if *y > 0.0 {
                            *slot = Some(x / y);
                        }
                    }
                }
                BenchRow {
                    size: a.size,
                    throughput,
                }
            })
            .collect();
        csv(&rows)
    }
}

fn gbps(bytes: usize, iterations: usize, elapsed: Duration) -> f64 {
    let secs = elapsed.as_secs_f64().max(1e-9);
    (bytes * iterations) as f64 / secs / 1e9
}

/// Times `iterations` replays of a schedule with `threads` workers.
fn time_schedule(
    schedule: &XorSchedule,
    inputs: &SymbolBuffer,
    outputs: &mut SymbolBuffer,
    threads: usize,
    iterations: usize,
) -> Duration {
    let w = schedule.field().w();
    let packet = inputs.packet_size();
    let ranges = column_ranges(packet, threads);
    let in_syms = inputs.symbol_slices();
    let in_pieces: Vec<Vec<Vec<&[u8]>>> = ranges
        .iter()
        .map(|r| {
            in_syms
                .iter()
                .map(|s| packet_views(s, w, r.clone()))
                .collect()
        })
        .collect();
    let mut out_pieces: Vec<Vec<Vec<&mut [u8]>>> = (0..ranges.len()).map(|_| Vec::new()).collect();
    for sym in outputs.symbol_slices_mut() {
        for (piece, packets) in split_packets_mut(sym, w, &ranges).into_iter().enumerate() {
            out_pieces[piece].push(packets);
        }
    }
    let workers = ranges.len();
    let start = Barrier::new(workers + 1);
    let step = Barrier::new(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = in_pieces
            .iter()
            .zip(out_pieces)
            .map(|(ins, mut outs)| {
                let (start, step) = (&start, &step);
                scope.spawn(move || {
                    let mut ws = Workspace::new();
                    start.wait();
                    for _ in 0..iterations {
                        schedule.run_views(ins, &mut outs, &mut ws);
                        step.wait();
                    }
                })
            })
            .collect();
        start.wait();
        let t0 = Instant::now();
        for h in handles {
            h.join().expect("bench worker panicked");
        }
        t0.elapsed()
    })
}

fn time_table(
    table: &TableCodec,
    matrix: &FieldMatrix,
    inputs: &[Vec<u8>],
    outputs: &mut [Vec<u8>],
    threads: usize,
    iterations: usize,
) -> Duration {
    let len = inputs.first().map_or(0, Vec::len);
    let ranges = column_ranges(len, threads);
    let in_pieces: Vec<Vec<&[u8]>> = ranges
        .iter()
        .map(|r| inputs.iter().map(|s| &s[r.clone()]).collect())
        .collect();
    let mut out_pieces: Vec<Vec<&mut [u8]>> = (0..ranges.len()).map(|_| Vec::new()).collect();
    for sym in outputs.iter_mut() {
        let mut rest: &mut [u8] = sym;
        for (piece, r) in ranges.iter().enumerate() {
            let (mine, tail) = std::mem::take(&mut rest).split_at_mut(r.len());
            out_pieces[piece].push(mine);
            rest = tail;
        }
    }
    let workers = ranges.len();
    let start = Barrier::new(workers + 1);
    let step = Barrier::new(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = in_pieces
            .iter()
            .zip(out_pieces)
            .map(|(ins, mut outs)| {
                let (start, step) = (&start, &step);
                scope.spawn(move || {
                    start.wait();
                    for _ in 0..iterations {
                        table
                            .apply_packed(matrix, ins, &mut outs)
                            .expect("bench buffers are consistent");
                        step.wait();
                    }
                })
            })
            .collect();
        start.wait();
        let t0 = Instant::now();
        for h in handles {
            h.join().expect("bench worker panicked");
        }
        t0.elapsed()
    })
}

/// Survivors used for decode timing: the first `min(k, r)` data symbols
/// are lost and replaced by the lowest-index parity symbols.
pub fn bench_survivors(code: &CodeSpec) -> Vec<usize> {
    let lost = code.k().min(code.r());
    (lost..code.k()).chain(code.k()..code.k() + lost).collect()
}

/// What one codec runs for one operation; independent of the symbol size.
enum Kernel {
    Schedule(XorSchedule),
    Table(Box<TableCodec>, FieldMatrix),
}

impl Kernel {
    fn new(code: &CodeSpec, codec: CodecChoice, operation: Operation) -> Result<Self> {
        let parity = cauchy_parity_matrix(code)?;
        let matrix = match operation {
            Operation::Encode => parity,
            Operation::Decode => decode_matrix(code, &bench_survivors(code))?,
        };
        Ok(match codec {
            CodecChoice::Pyrit => Kernel::Schedule(compile_schedule(&matrix, code.transform())),
            CodecChoice::Crs => Kernel::Schedule(compile_crs_schedule(&matrix, code.transform())),
            CodecChoice::Table => Kernel::Table(Box::new(TableCodec::new(*code)?), matrix),
        })
    }
}

/// Buffers for one symbol size. Contents are random: timing does not
/// depend on them.
enum Buffers {
    Bitsliced(SymbolBuffer, SymbolBuffer),
    Packed(Vec<Vec<u8>>, Vec<Vec<u8>>),
}

impl Buffers {
    fn new(kernel: &Kernel, code: &CodeSpec, symbol_size: usize) -> Result<Self> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(symbol_size as u64);
        Ok(match kernel {
            Kernel::Schedule(s) => {
                let mut bytes = vec![0u8; s.inputs() * symbol_size];
                rng.fill_bytes(&mut bytes);
                Buffers::Bitsliced(
                    SymbolBuffer::from_bytes(bytes, symbol_size, code.field())?,
                    SymbolBuffer::zeroed(s.outputs(), symbol_size, code.field())?,
                )
            }
            Kernel::Table(table, matrix) => {
                let len = table.packed_len(symbol_size);
                let mask = if code.field().w() == 6 { 0x3f } else { 0xff };
                let inputs = (0..matrix.cols())
                    .map(|_| {
                        let mut v = vec![0u8; len];
                        rng.fill_bytes(&mut v);
                        v.iter_mut().for_each(|b| *b &= mask);
                        v
                    })
                    .collect();
                Buffers::Packed(inputs, vec![vec![0u8; len]; matrix.rows()])
            }
        })
    }
}

fn time_point(
    kernel: &Kernel,
    buffers: &mut Buffers,
    threads: usize,
    iterations: usize,
) -> Duration {
    match (kernel, buffers) {
        (Kernel::Schedule(s), Buffers::Bitsliced(ins, outs)) => {
            time_schedule(s, ins, outs, threads, iterations)
        }
        (Kernel::Table(t, m), Buffers::Packed(ins, outs)) => {
            time_table(t, m, ins, outs, threads, iterations)
        }
        _ => unreachable!("buffers are built for their kernel"),
    }
}

/// Measures one point: returns GB/s.
pub fn measure(
    code: &CodeSpec,
    codec: CodecChoice,
    operation: Operation,
    size: usize,
    threads: usize,
    iterations: Iterations,
) -> Result<f64> {
    let kernel = Kernel::new(code, codec, operation)?;
    let symbol_size = round_symbol_size(size, code.field());
    let mut buffers = Buffers::new(&kernel, code, symbol_size)?;
    let bytes = code.total() * symbol_size;
    let iterations = iterations.resolve(bytes);
    Ok(gbps(
        bytes,
        iterations,
        time_point(&kernel, &mut buffers, threads, iterations),
    ))
}

/// Runs the full sweep for one codec and operation.
pub fn run(config: &BenchConfig, codec: CodecChoice, operation: Operation) -> Result<BenchTable> {
    let code = &config.code;
    let kernel = Kernel::new(code, codec, operation)?;
    let mut sizes = config.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut rows = Vec::with_capacity(sizes.len());
    for size in sizes {
        let symbol_size = round_symbol_size(size, code.field());
        let mut buffers = Buffers::new(&kernel, code, symbol_size)?;
        let bytes = code.total() * symbol_size;
        let iterations = config.iterations.resolve(bytes);
        let mut throughput = [None; 4];
        for (slot, &t) in throughput.iter_mut().zip(THREAD_COLUMNS.iter()) {
            if config.threads.contains(&t) {
                let elapsed = time_point(&kernel, &mut buffers, t, iterations);
                *slot = Some(gbps(bytes, iterations, elapsed));
            }
        }
        rows.push(BenchRow { size, throughput });
    }
    Ok(BenchTable {
        codec,
        operation,
        rows,
    })
}
