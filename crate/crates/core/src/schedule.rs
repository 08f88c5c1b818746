//! Compilation of a field matrix into a flat list of packet copies and xors,
//! and the replay engine that runs such a list over symbol buffers.
//!
//! A schedule has three stages:
//!
//! * `pre`: builds the extra ring packets of each input (parity transform
//!   only). Sources and destinations are input symbols.
//! * `core`: the matrix product in the ring. Sources are input symbols,
//!   destinations output symbols.
//! * `post`: folds the extra ring packets of each output back into its data
//!   packets (embedding transform only). Sources and destinations are
//!   output symbols.
//!
//! Packets `0..w` of a symbol live in the caller's buffers; packets `w..n`
//! live in per-worker scratch and are never written back.

use std::fmt::{self, Write as _};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::{BitMatrix, FieldElem, FieldSpec};
use crate::matrix::FieldMatrix;
use crate::region::{copy_into, xor_into};
use crate::ring::{phi1, to_shift_set, RingElem, SparseTable};
use crate::transforms::{parity_twist, TransformKind};

/// Bytes of each packet processed per pass over the schedule.
pub const TILE_BYTES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpMode {
    Copy,
    Xor,
    /// Zero-fill of the destination; the source fields are ignored.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct XorOp {
    pub src_sym: u32,
    pub src_pkt: u8,
    pub dst_sym: u32,
    pub dst_pkt: u8,
    pub mode: OpMode,
}

impl fmt::Display for XorOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            OpMode::Zero => write!(f, "Z -> {}.{}", self.dst_sym, self.dst_pkt),
            mode => write!(
                f,
                "{} {}.{} -> {}.{}",
                if mode == OpMode::Copy { 'C' } else { 'X' },
                self.src_sym,
                self.src_pkt,
                self.dst_sym,
                self.dst_pkt
            ),
        }
    }
}

/// Region-operation counts. One unit is one packet-sized copy, zero-fill or
/// xor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScheduleStats {
    pub xor_ops: usize,
    /// Copies and zero-fills.
    pub copy_ops: usize,
    pub total_region_ops: usize,
    /// Ones across the (trimmed) per-entry binary matrices.
    pub matrix_ones: usize,
    pub pre_ops: usize,
    pub core_ops: usize,
    pub post_ops: usize,
}

/// How a schedule maps field entries to packet operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    /// Ring multiplication through the given data transform.
    Pyrit(TransformKind),
    /// Expanded binary multiplication matrices. For parity-kind codes each
    /// entry is conjugated by the parity twist so the result matches the
    /// ring path.
    Crs(TransformKind),
}

impl ScheduleKind {
    pub fn transform(self) -> TransformKind {
        match self {
            ScheduleKind::Pyrit(t) | ScheduleKind::Crs(t) => t,
        }
    }
}

/// Which ring representative stands in for each matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representative {
    /// Lightest element of the coset (the sparse transform).
    Sparse,
    /// The image under the idempotent isomorphism.
    Idempotent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorSchedule {
    kind: ScheduleKind,
    field: FieldSpec,
    inputs: usize,
    outputs: usize,
    pre: Vec<XorOp>,
    core: Vec<XorOp>,
    post: Vec<XorOp>,
    stats: ScheduleStats,
}

/// Embedding when `k >= r`, parity otherwise.
pub fn choose_transform(k: usize, r: usize) -> TransformKind {
    if k >= r {
        TransformKind::Embedding
    } else {
        TransformKind::Parity
    }
}

struct Builder {
    n: usize,
    written: Vec<bool>,
    ops: Vec<XorOp>,
}

impl Builder {
    fn new(symbols: usize, n: usize) -> Self {
        Builder {
            n,
            written: vec![false; symbols * n],
            ops: Vec::new(),
        }
    }

    fn accumulate(&mut self, src_sym: usize, src_pkt: usize, dst_sym: usize, dst_pkt: usize) {
        let slot = &mut self.written[dst_sym * self.n + dst_pkt];
        let mode = if std::mem::replace(slot, true) {
            OpMode::Xor
        } else {
            OpMode::Copy
        };
        self.ops.push(XorOp {
            src_sym: src_sym as u32,
            src_pkt: src_pkt as u8,
            dst_sym: dst_sym as u32,
            dst_pkt: dst_pkt as u8,
            mode,
        });
    }

    fn is_written(&self, sym: usize, pkt: usize) -> bool {
        self.written[sym * self.n + pkt]
    }
}

fn zero_fill(sym: usize, pkt: usize) -> XorOp {
    XorOp {
        src_sym: 0,
        src_pkt: 0,
        dst_sym: sym as u32,
        dst_pkt: pkt as u8,
        mode: OpMode::Zero,
    }
}

/// Compiles `matrix` (outputs x inputs) into a ring-domain schedule using
/// sparse representatives.
pub fn compile_schedule(matrix: &FieldMatrix, kind: TransformKind) -> XorSchedule {
    compile_schedule_with(matrix, kind, Representative::Sparse)
}

pub fn compile_schedule_with(
    matrix: &FieldMatrix,
    kind: TransformKind,
    reps: Representative,
) -> XorSchedule {
    let spec = *matrix.spec();
    let (w, n, s) = (spec.w(), spec.n(), spec.spacing());
    let (outputs, inputs) = (matrix.rows(), matrix.cols());
    let table = SparseTable::new(&spec);
    let rep = |e: FieldElem| -> RingElem {
        match reps {
            Representative::Sparse => table.get(e),
            Representative::Idempotent => phi1(e, &spec),
        }
    };

    let mut core = Builder::new(outputs, n);
    let mut matrix_ones = 0;
    // input scratch packets the core stage reads (parity only)
    let mut needed = vec![false; inputs * n];
    let out_rows = match kind {
        TransformKind::Embedding => n,
        TransformKind::Parity => w,
    };
    for i in 0..outputs {
        for j in 0..inputs {
            let entry = matrix.get(i, j);
            if entry.is_zero() {
                continue;
            }
            let shifts = to_shift_set(rep(entry), n);
            for &shift in shifts.shifts() {
                for t in 0..out_rows {
                    let u = (t + n - usize::from(shift)) % n;
                    if kind == TransformKind::Embedding && u >= w {
                        continue;
                    }
                    if u >= w {
                        needed[j * n + u] = true;
                    }
                    core.accumulate(j, u, i, t);
                    matrix_ones += 1;
                }
            }
        }
    }

    let mut pre = Builder::new(inputs, n);
    if kind == TransformKind::Parity {
        for j in 0..inputs {
            for c in 0..n - w {
                if needed[j * n + w + c] {
                    for u in (c..w).step_by(s) {
                        pre.accumulate(j, u, j, w + c);
                    }
                }
            }
        }
    }

    let mut post_ops = Vec::new();
    if kind == TransformKind::Embedding {
        // continue write-tracking from the core stage
        let mut post = Builder {
            n,
            written: core.written.clone(),
            ops: Vec::new(),
        };
        for i in 0..outputs {
            for t in 0..w {
                let src = w + t % s;
                if core.is_written(i, src) {
                    post.accumulate(i, src, i, t);
                }
            }
        }
        core.written = post.written;
        post_ops = post.ops;
    }

    let mut core_ops = core.ops;
    for i in 0..outputs {
        for t in 0..w {
            if !core.written[i * n + t] {
                core_ops.push(zero_fill(i, t));
            }
        }
    }

    XorSchedule::assemble(
        ScheduleKind::Pyrit(kind),
        spec,
        inputs,
        outputs,
        pre.ops,
        core_ops,
        post_ops,
        matrix_ones,
    )
}

/// Per-entry binary matrix used by the CRS baseline.
pub fn crs_entry_bitmatrix(entry: FieldElem, kind: TransformKind, spec: &FieldSpec) -> BitMatrix {
    let plain = spec.to_bitmatrix(entry);
    match kind {
        TransformKind::Embedding => plain,
        TransformKind::Parity => {
            let w = spec.w();
            let mut twist = BitMatrix::zeros(w, w);
            for j in 0..w {
                let col = parity_twist(FieldElem(1 << j), spec);
                for i in 0..w {
                    twist.set(i, j, col.bit(i));
                }
            }
            twist.mul(&plain).mul(&twist)
        }
    }
}

/// Baseline schedule from the expanded bit matrix: no transforms, `w`
/// packets per symbol.
pub fn compile_crs_schedule(matrix: &FieldMatrix, kind: TransformKind) -> XorSchedule {
    let spec = *matrix.spec();
    let w = spec.w();
    let (outputs, inputs) = (matrix.rows(), matrix.cols());
    let mut core = Builder::new(outputs, spec.n());
    let mut ones = 0;
    for i in 0..outputs {
        for j in 0..inputs {
            let entry = matrix.get(i, j);
            if entry.is_zero() {
                continue;
            }
            let bits = crs_entry_bitmatrix(entry, kind, &spec);
            for t in 0..w {
                for u in 0..w {
                    if bits.get(t, u) {
                        core.accumulate(j, u, i, t);
                        ones += 1;
                    }
                }
            }
        }
    }
    let mut core_ops = core.ops;
    for i in 0..outputs {
        for t in 0..w {
            if !core.written[i * spec.n() + t] {
                core_ops.push(zero_fill(i, t));
            }
        }
    }
    XorSchedule::assemble(
        ScheduleKind::Crs(kind),
        spec,
        inputs,
        outputs,
        Vec::new(),
        core_ops,
        Vec::new(),
        ones,
    )
}

pub fn schedule_stats(s: &XorSchedule) -> ScheduleStats {
    s.stats
}

fn count(ops: &[XorOp]) -> (usize, usize) {
    ops.iter().fold((0, 0), |(x, c), op| match op.mode {
        OpMode::Xor => (x + 1, c),
        OpMode::Copy | OpMode::Zero => (x, c + 1),
    })
}

/// Scratch space for one replay worker.
#[derive(Debug, Default)]
pub struct Workspace {
    inputs: Vec<u8>,
    outputs: Vec<u8>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    fn prepare(&mut self, sched: &XorSchedule) {
        let extra = sched.field.n() - sched.field.w();
        let need_in = if sched.pre.is_empty() {
            0
        } else {
            sched.inputs * extra * TILE_BYTES
        };
        let need_out = if sched.post.is_empty() {
            0
        } else {
            sched.outputs * extra * TILE_BYTES
        };
        if self.inputs.len() < need_in {
            self.inputs.resize(need_in, 0);
        }
        if self.outputs.len() < need_out {
            self.outputs.resize(need_out, 0);
        }
    }
}

/// Splits a symbol into `w` packets restricted to the byte range `cols`.
pub(crate) fn packet_views(symbol: &[u8], w: usize, cols: Range<usize>) -> Vec<&[u8]> {
    let packet = symbol.len() / w;
    symbol
        .chunks_exact(packet)
        .map(|p| &p[cols.clone()])
        .collect()
}

/// Splits every packet of a mutable symbol into pieces at the given
/// boundaries; returns one packet list per piece.
pub(crate) fn split_packets_mut<'a>(
    symbol: &'a mut [u8],
    w: usize,
    bounds: &[Range<usize>],
) -> Vec<Vec<&'a mut [u8]>> {
    let packet = symbol.len() / w;
    let mut per_piece: Vec<Vec<&'a mut [u8]>> =
        (0..bounds.len()).map(|_| Vec::with_capacity(w)).collect();
    for p in symbol.chunks_exact_mut(packet) {
        let mut rest = p;
        let mut offset = 0;
        for (piece, range) in bounds.iter().enumerate() {
            let (_, tail) = std::mem::take(&mut rest).split_at_mut(range.start - offset);
            let (mine, tail) = tail.split_at_mut(range.len());
            per_piece[piece].push(mine);
            rest = tail;
            offset = range.end;
        }
    }
    per_piece
}

/// Splits `0..len` into at most `parts` word-aligned ranges.
pub(crate) fn column_ranges(len: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.max(1);
    let chunk = len.div_ceil(parts).div_ceil(8) * 8;
    let chunk = chunk.max(8);
    (0..len)
        .step_by(chunk)
        .map(|start| start..(start + chunk).min(len))
        .collect()
}

impl XorSchedule {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: ScheduleKind,
        field: FieldSpec,
        inputs: usize,
        outputs: usize,
        pre: Vec<XorOp>,
        core: Vec<XorOp>,
        post: Vec<XorOp>,
        matrix_ones: usize,
    ) -> Self {
        let mut stats = ScheduleStats {
            matrix_ones,
            pre_ops: pre.len(),
            core_ops: core.len(),
            post_ops: post.len(),
            ..Default::default()
        };
        for ops in [&pre, &core, &post] {
            let (x, c) = count(ops);
            stats.xor_ops += x;
            stats.copy_ops += c;
        }
        stats.total_region_ops = stats.xor_ops + stats.copy_ops;
        XorSchedule {
            kind,
            field,
            inputs,
            outputs,
            pre,
            core,
            post,
            stats,
        }
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn pre(&self) -> &[XorOp] {
        &self.pre
    }

    pub fn core(&self) -> &[XorOp] {
        &self.core
    }

    pub fn post(&self) -> &[XorOp] {
        &self.post
    }

    pub fn stats(&self) -> ScheduleStats {
        self.stats
    }

    /// Text listing, one op per line, stages introduced by `#` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (name, ops) in [
            ("pre", &self.pre),
            ("core", &self.core),
            ("post", &self.post),
        ] {
            let _ = writeln!(out, "# {name} {}", ops.len());
            for op in ops.iter() {
                let _ = writeln!(out, "{op}");
            }
        }
        out
    }

    fn check_shapes(&self, inputs: &[&[u8]], outputs: &[&mut [u8]]) -> Result<usize> {
        if inputs.len() != self.inputs || outputs.len() != self.outputs {
            return Err(Error::BufferShape(format!(
                "schedule expects {} inputs and {} outputs, got {} and {}",
                self.inputs,
                self.outputs,
                inputs.len(),
                outputs.len()
            )));
        }
        let len = inputs
            .first()
            .map(|s| s.len())
            .or_else(|| outputs.first().map(|s| s.len()))
            .unwrap_or(0);
        let w = self.field.w();
        if !len.is_multiple_of(w) {
            return Err(Error::BufferShape(format!(
                "symbol size {len} is not a multiple of w = {w}"
            )));
        }
        if inputs.iter().any(|s| s.len() != len) || outputs.iter().any(|s| s.len() != len) {
            return Err(Error::BufferShape("symbols differ in size".into()));
        }
        Ok(len)
    }

    /// Runs the schedule on whole symbols (each `w` packets long).
    pub fn replay(&self, inputs: &[&[u8]], outputs: &mut [&mut [u8]]) -> Result<()> {
        self.replay_threaded(inputs, outputs, 1)
    }

    /// Runs the schedule with the packet columns split across `threads`
    /// workers.
    pub fn replay_threaded(
        &self,
        inputs: &[&[u8]],
        outputs: &mut [&mut [u8]],
        threads: usize,
    ) -> Result<()> {
        let len = self.check_shapes(inputs, outputs)?;
        let w = self.field.w();
        let packet = len / w;
        if packet == 0 {
            return Ok(());
        }
        let ranges = column_ranges(packet, threads);
        let mut out_pieces: Vec<Vec<Vec<&mut [u8]>>> =
            (0..ranges.len()).map(|_| Vec::new()).collect();
        for sym in outputs.iter_mut() {
            for (piece, packets) in split_packets_mut(sym, w, &ranges).into_iter().enumerate() {
                out_pieces[piece].push(packets);
            }
        }
        let in_pieces: Vec<Vec<Vec<&[u8]>>> = ranges
            .iter()
            .map(|r| {
                inputs
                    .iter()
                    .map(|s| packet_views(s, w, r.clone()))
                    .collect()
            })
            .collect();
        if ranges.len() == 1 {
            let mut ws = Workspace::new();
            self.run_views(&in_pieces[0], &mut out_pieces[0], &mut ws);
            return Ok(());
        }
        std::thread::scope(|scope| {
            for (ins, mut outs) in in_pieces.iter().zip(out_pieces) {
                scope.spawn(move || {
                    let mut ws = Workspace::new();
                    self.run_views(ins, &mut outs, &mut ws);
                });
            }
        });
        Ok(())
    }

    /// Runs the schedule over packet views; every view has the same length.
    pub(crate) fn run_views(
        &self,
        inputs: &[Vec<&[u8]>],
        outputs: &mut [Vec<&mut [u8]>],
        ws: &mut Workspace,
    ) {
        ws.prepare(self);
        let len = inputs
            .first()
            .and_then(|s| s.first())
            .map(|p| p.len())
            .or_else(|| outputs.first().and_then(|s| s.first()).map(|p| p.len()))
            .unwrap_or(0);
        let mut lo = 0;
        while lo < len {
            let hi = (lo + TILE_BYTES).min(len);
            self.run_tile(inputs, outputs, ws, lo..hi);
            lo = hi;
        }
    }

    fn run_tile(
        &self,
        inputs: &[Vec<&[u8]>],
        outputs: &mut [Vec<&mut [u8]>],
        ws: &mut Workspace,
        cols: Range<usize>,
    ) {
        let w = self.field.w();
        let extra = self.field.n() - w;
        let width = cols.len();
        let scratch_at = |sym: u32, pkt: u8| -> usize {
            (sym as usize * extra + usize::from(pkt) - w) * TILE_BYTES
        };

        for op in &self.pre {
            let src = &inputs[op.src_sym as usize][usize::from(op.src_pkt)][cols.clone()];
            let at = scratch_at(op.dst_sym, op.dst_pkt);
            let dst = &mut ws.inputs[at..at + width];
            apply(op.mode, dst, src);
        }

        for op in &self.core {
            let dst: &mut [u8] = if usize::from(op.dst_pkt) < w {
                &mut outputs[op.dst_sym as usize][usize::from(op.dst_pkt)][cols.clone()]
            } else {
                let at = scratch_at(op.dst_sym, op.dst_pkt);
                &mut ws.outputs[at..at + width]
            };
            if op.mode == OpMode::Zero {
                dst.fill(0);
                continue;
            }
            let src: &[u8] = if usize::from(op.src_pkt) < w {
                &inputs[op.src_sym as usize][usize::from(op.src_pkt)][cols.clone()]
            } else {
                let at = scratch_at(op.src_sym, op.src_pkt);
                &ws.inputs[at..at + width]
            };
            apply(op.mode, dst, src);
        }

        for op in &self.post {
            let at = scratch_at(op.src_sym, op.src_pkt);
            let src = &ws.outputs[at..at + width];
            let dst = &mut outputs[op.dst_sym as usize][usize::from(op.dst_pkt)][cols.clone()];
            apply(op.mode, dst, src);
        }
    }
}

#[inline]
fn apply(mode: OpMode, dst: &mut [u8], src: &[u8]) {
    match mode {
        OpMode::Copy => copy_into(dst, src),
        OpMode::Xor => xor_into(dst, src),
        OpMode::Zero => dst.fill(0),
    }
}
