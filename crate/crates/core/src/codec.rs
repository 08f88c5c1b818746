//! Systematic encoding and decoding of symbol buffers.
//!
//! [`Codec`] holds the parity matrix and its compiled ring schedule for one
//! code. The free functions [`encode_crs`], [`encode_table`] and
//! [`oracle_encode`] compute the same parity through independent routes.

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::matrix::{
    cauchy_parity_matrix, check_survivors, decode_matrix_with, erased_data, CodeSpec, FieldMatrix,
};
use crate::region::{column, set_column};
use crate::schedule::{compile_crs_schedule, compile_schedule, XorSchedule};
use crate::table::TableCodec;
use crate::transforms::{parity_twist, TransformKind};

const WORD: usize = 8;

/// `count` symbols of `symbol_size` bytes each, stored contiguously in the
/// bit-sliced layout (see [`crate::region`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolBuffer {
    symbol_size: usize,
    count: usize,
    w: usize,
    data: Vec<u8>,
}

/// Symbol sizes must be positive multiples of both `w` and the word size.
pub fn check_symbol_size(symbol_size: usize, field: &FieldSpec) -> Result<()> {
    let w = field.w();
    if symbol_size == 0 || !symbol_size.is_multiple_of(w) || !symbol_size.is_multiple_of(WORD) {
        return Err(Error::BufferShape(format!(
            "symbol size {symbol_size} must be a positive multiple of {w} and {WORD}"
        )));
    }
    Ok(())
}

/// Smallest valid symbol size that is at least `bytes`.
pub fn round_symbol_size(bytes: usize, field: &FieldSpec) -> usize {
    let unit = lcm(field.w(), WORD);
    bytes.max(1).div_ceil(unit) * unit
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

impl SymbolBuffer {
    pub fn zeroed(count: usize, symbol_size: usize, field: &FieldSpec) -> Result<Self> {
        check_symbol_size(symbol_size, field)?;
        Ok(SymbolBuffer {
            symbol_size,
            count,
            w: field.w(),
            data: vec![0; count * symbol_size],
        })
    }

    pub fn from_bytes(data: Vec<u8>, symbol_size: usize, field: &FieldSpec) -> Result<Self> {
        check_symbol_size(symbol_size, field)?;
        if !data.len().is_multiple_of(symbol_size) {
            return Err(Error::BufferShape(format!(
                "{} bytes is not a whole number of {symbol_size}-byte symbols",
                data.len()
            )));
        }
        Ok(SymbolBuffer {
            symbol_size,
            count: data.len() / symbol_size,
            w: field.w(),
            data,
        })
    }

    pub fn from_symbols<S: AsRef<[u8]>>(symbols: &[S], field: &FieldSpec) -> Result<Self> {
        let size = symbols
            .first()
            .map_or(WORD * field.w(), |s| s.as_ref().len());
        if symbols.iter().any(|s| s.as_ref().len() != size) {
            return Err(Error::BufferShape("symbols differ in size".into()));
        }
        let data = symbols
            .iter()
            .flat_map(|s| s.as_ref().iter().copied())
            .collect();
        Self::from_bytes(data, size, field)
    }

    #[inline]
    pub fn symbol_size(&self) -> usize {
        self.symbol_size
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn packet_size(&self) -> usize {
        self.symbol_size / self.w
    }

    pub fn symbol(&self, i: usize) -> &[u8] {
        &self.data[i * self.symbol_size..(i + 1) * self.symbol_size]
    }

    pub fn symbol_mut(&mut self, i: usize) -> &mut [u8] {
        &mut self.data[i * self.symbol_size..(i + 1) * self.symbol_size]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &[u8]> {
        self.data.chunks_exact(self.symbol_size)
    }

    pub fn symbol_slices(&self) -> Vec<&[u8]> {
        self.symbols().collect()
    }

    pub fn symbol_slices_mut(&mut self) -> Vec<&mut [u8]> {
        self.data.chunks_exact_mut(self.symbol_size).collect()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn as_bytes_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }

    /// Number of field-element columns per symbol.
    pub fn columns(&self) -> usize {
        self.packet_size() * 8
    }

    /// Field element of symbol `sym` at column `t`.
    pub fn element(&self, sym: usize, t: usize) -> FieldElem {
        FieldElem(column(self.symbol(sym), self.packet_size(), self.w, t) as u8)
    }

    pub fn set_element(&mut self, sym: usize, t: usize, value: FieldElem) {
        let (p, w) = (self.packet_size(), self.w);
        set_column(self.symbol_mut(sym), p, w, t, value.0.into());
    }
}

fn check_data(data: &SymbolBuffer, code: &CodeSpec, expected: usize) -> Result<()> {
    check_symbol_size(data.symbol_size, code.field())?;
    if data.w != code.field().w() {
        return Err(Error::BufferShape(
            "buffer built for a different field".into(),
        ));
    }
    if data.count != expected {
        return Err(Error::BufferShape(format!(
            "expected {expected} symbols, got {}",
            data.count
        )));
    }
    Ok(())
}

fn run(
    schedule: &XorSchedule,
    inputs: &SymbolBuffer,
    outputs: &mut SymbolBuffer,
    threads: usize,
) -> Result<()> {
    let ins = inputs.symbol_slices();
    let mut outs = outputs.symbol_slices_mut();
    schedule.replay_threaded(&ins, &mut outs, threads)
}

/// Replays a compiled encoding schedule over `k` data symbols.
pub fn encode(
    data: &SymbolBuffer,
    code: &CodeSpec,
    schedule: &XorSchedule,
) -> Result<SymbolBuffer> {
    check_data(data, code, code.k())?;
    if schedule.inputs() != code.k() || schedule.outputs() != code.r() {
        return Err(Error::BufferShape(
            "schedule does not match the code".into(),
        ));
    }
    let mut parity = SymbolBuffer::zeroed(code.r(), data.symbol_size, code.field())?;
    run(schedule, data, &mut parity, 1)?;
    Ok(parity)
}

/// Baseline: binary-matrix expansion of each entry, no ring transforms.
pub fn encode_crs(data: &SymbolBuffer, code: &CodeSpec) -> Result<SymbolBuffer> {
    check_data(data, code, code.k())?;
    let matrix = cauchy_parity_matrix(code)?;
    let schedule = compile_crs_schedule(&matrix, code.transform());
    let mut parity = SymbolBuffer::zeroed(code.r(), data.symbol_size, code.field())?;
    run(&schedule, data, &mut parity, 1)?;
    Ok(parity)
}

/// Baseline: table-driven region multiplication on a packed layout.
pub fn encode_table(data: &SymbolBuffer, code: &CodeSpec) -> Result<SymbolBuffer> {
    check_data(data, code, code.k())?;
    let table = TableCodec::new(*code)?;
    table.encode_bitsliced(data)
}

/// Applies `matrix` to the inputs column by column with plain field
/// arithmetic. For parity-kind codes every element is passed through the
/// parity twist on the way in and out, which is what the ring path computes.
pub fn oracle_apply(
    matrix: &FieldMatrix,
    kind: TransformKind,
    inputs: &SymbolBuffer,
) -> Result<SymbolBuffer> {
    let f = *matrix.spec();
    if inputs.count() != matrix.cols() {
        return Err(Error::BufferShape(
            "input count does not match the matrix".into(),
        ));
    }
    let twist = |e: FieldElem| match kind {
        TransformKind::Embedding => e,
        TransformKind::Parity => parity_twist(e, &f),
    };
    let mut out = SymbolBuffer::zeroed(matrix.rows(), inputs.symbol_size(), &f)?;
    let mut column_in = vec![FieldElem::ZERO; matrix.cols()];
    for t in 0..inputs.columns() {
        for (j, slot) in column_in.iter_mut().enumerate() {
            *slot = twist(inputs.element(j, t));
        }
        for (i, value) in matrix.mul_vec(&column_in).into_iter().enumerate() {
            out.set_element(i, t, twist(value));
        }
    }
    Ok(out)
}

/// Slow column-by-column reference encoder.
pub fn oracle_encode(data: &SymbolBuffer, code: &CodeSpec) -> Result<SymbolBuffer> {
    check_data(data, code, code.k())?;
    oracle_apply(&cauchy_parity_matrix(code)?, code.transform(), data)
}

/// Decodes with a freshly built [`Codec`]; see [`Codec::reconstruct`].
pub fn decode(
    survivors: &SymbolBuffer,
    indices: &[usize],
    code: &CodeSpec,
) -> Result<SymbolBuffer> {
    Codec::new(*code)?.reconstruct(survivors, indices)
}

/// Encoder and decoder for one code, with the parity matrix and encoding
/// schedule compiled once.
#[derive(Debug, Clone)]
pub struct Codec {
    code: CodeSpec,
    parity: FieldMatrix,
    encoder: XorSchedule,
}

/// Decoding schedule for one survivor set.
#[derive(Debug, Clone)]
pub struct DecodePlan {
    survivors: Vec<usize>,
    erased: Vec<usize>,
    schedule: XorSchedule,
}

impl DecodePlan {
    pub fn survivors(&self) -> &[usize] {
        &self.survivors
    }

    /// Erased data indices, in the order the schedule produces them.
    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    pub fn schedule(&self) -> &XorSchedule {
        &self.schedule
    }
}

impl Codec {
    pub fn new(code: CodeSpec) -> Result<Self> {
        let parity = cauchy_parity_matrix(&code)?;
        let encoder = compile_schedule(&parity, code.transform());
        Ok(Codec {
            code,
            parity,
            encoder,
        })
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    pub fn parity_matrix(&self) -> &FieldMatrix {
        &self.parity
    }

    pub fn encoder(&self) -> &XorSchedule {
        &self.encoder
    }

    pub fn encode(&self, data: &SymbolBuffer) -> Result<SymbolBuffer> {
        self.encode_threaded(data, 1)
    }

    pub fn encode_threaded(&self, data: &SymbolBuffer, threads: usize) -> Result<SymbolBuffer> {
        check_data(data, &self.code, self.code.k())?;
        let mut parity = SymbolBuffer::zeroed(self.code.r(), data.symbol_size, self.code.field())?;
        self.encode_into(data, &mut parity, threads)?;
        Ok(parity)
    }

    /// Encodes into a caller-provided parity buffer.
    pub fn encode_into(
        &self,
        data: &SymbolBuffer,
        parity: &mut SymbolBuffer,
        threads: usize,
    ) -> Result<()> {
        check_data(data, &self.code, self.code.k())?;
        check_data(parity, &self.code, self.code.r())?;
        if parity.symbol_size != data.symbol_size {
            return Err(Error::BufferShape(
                "parity and data symbol sizes differ".into(),
            ));
        }
        run(&self.encoder, data, parity, threads)
    }

    /// Compiles the recovery schedule for the given survivors (`k` distinct
    /// indices in `0..k+r`).
    pub fn plan(&self, survivors: &[usize]) -> Result<DecodePlan> {
        check_survivors(&self.code, survivors)?;
        let matrix = decode_matrix_with(&self.code, &self.parity, survivors)?;
        Ok(DecodePlan {
            survivors: survivors.to_vec(),
            erased: erased_data(&self.code, survivors),
            schedule: compile_schedule(&matrix, self.code.transform()),
        })
    }

    /// Recovers the erased data symbols; returns them in
    /// [`DecodePlan::erased`] order.
    pub fn recover(
        &self,
        plan: &DecodePlan,
        survivors: &SymbolBuffer,
        threads: usize,
    ) -> Result<SymbolBuffer> {
        check_data(survivors, &self.code, self.code.k())?;
        let mut out =
            SymbolBuffer::zeroed(plan.erased.len(), survivors.symbol_size, self.code.field())?;
        run(&plan.schedule, survivors, &mut out, threads)?;
        Ok(out)
    }

    /// Returns the `k` data symbols given any `k` survivors.
    pub fn decode(&self, survivors: &SymbolBuffer, indices: &[usize]) -> Result<SymbolBuffer> {
        let plan = self.plan(indices)?;
        let recovered = self.recover(&plan, survivors, 1)?;
        let mut data =
            SymbolBuffer::zeroed(self.code.k(), survivors.symbol_size, self.code.field())?;
        for (pos, &idx) in indices.iter().enumerate() {
            if idx < self.code.k() {
                data.symbol_mut(idx).copy_from_slice(survivors.symbol(pos));
            }
        }
        for (pos, &idx) in plan.erased.iter().enumerate() {
            data.symbol_mut(idx).copy_from_slice(recovered.symbol(pos));
        }
        Ok(data)
    }

    /// Returns all `k + r` symbols: data recovered, parity re-encoded.
    pub fn reconstruct(&self, survivors: &SymbolBuffer, indices: &[usize]) -> Result<SymbolBuffer> {
        let data = self.decode(survivors, indices)?;
        let parity = self.encode(&data)?;
        let mut bytes = data.into_bytes();
        bytes.extend_from_slice(parity.as_bytes());
        SymbolBuffer::from_bytes(bytes, survivors.symbol_size, self.code.field())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngCore, SeedableRng};

    const GF16: FieldSpec = FieldSpec::gf16();
    const GF64: FieldSpec = FieldSpec::gf64();

    fn random(count: usize, size: usize, f: &FieldSpec, rng: &mut impl RngCore) -> SymbolBuffer {
        let mut bytes = vec![0u8; count * size];
        rng.fill_bytes(&mut bytes);
        SymbolBuffer::from_bytes(bytes, size, f).unwrap()
    }

    #[test]
    fn symbol_size_rules() {
        assert!(check_symbol_size(64, &GF16).is_ok());
        assert!(check_symbol_size(12, &GF16).is_err());
        assert!(check_symbol_size(24, &GF64).is_ok());
        assert!(check_symbol_size(16, &GF64).is_err());
        assert!(check_symbol_size(0, &GF16).is_err());
        assert_eq!(round_symbol_size(128, &GF64), 144);
        assert_eq!(round_symbol_size(128, &GF16), 128);
    }

    #[test]
    fn zero_data_zero_parity() {
        for f in [GF16, GF64] {
            for t in [TransformKind::Embedding, TransformKind::Parity] {
                let code = CodeSpec::new(5, 3, f, t).unwrap();
                let data = SymbolBuffer::zeroed(5, 48, &f).unwrap();
                let p = Codec::new(code).unwrap().encode(&data).unwrap();
                assert!(p.as_bytes().iter().all(|&b| b == 0));
            }
        }
    }

    #[test]
    fn single_symbol_code_copies() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for f in [GF16, GF64] {
            for t in [TransformKind::Embedding, TransformKind::Parity] {
                let code = CodeSpec::new(1, 1, f, t).unwrap();
                let data = random(1, 48, &f, &mut rng);
                let p = Codec::new(code).unwrap().encode(&data).unwrap();
                assert_eq!(p, data);
                assert_eq!(encode_crs(&data, &code).unwrap(), data);
                assert_eq!(encode_table(&data, &code).unwrap(), data);
            }
        }
    }

    #[test]
    fn hand_computed_oracle_column() {
        // k = 2 with row [1, x^2], data column (1, x^3): parity = 1 + x^2 x^3 = 0
        let f = GF16;
        let m = FieldMatrix::from_rows(&[vec![FieldElem(1), FieldElem(0b100)]], f).unwrap();
        let mut data = SymbolBuffer::zeroed(2, 8, &f).unwrap();
        data.set_element(0, 0, FieldElem(1));
        data.set_element(1, 0, FieldElem(0b1000));
        data.set_element(0, 1, FieldElem(1));
        let out = oracle_apply(&m, TransformKind::Embedding, &data).unwrap();
        assert_eq!(out.element(0, 0), FieldElem::ZERO);
        assert_eq!(out.element(0, 1), FieldElem(1));
    }

    #[test]
    fn oracle_is_linear() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let f = GF64;
        for t in [TransformKind::Embedding, TransformKind::Parity] {
            let code = CodeSpec::new(4, 3, f, t).unwrap();
            let a = random(4, 24, &f, &mut rng);
            let b = random(4, 24, &f, &mut rng);
            let sum: Vec<u8> = a
                .as_bytes()
                .iter()
                .zip(b.as_bytes())
                .map(|(x, y)| x ^ y)
                .collect();
            let sum = SymbolBuffer::from_bytes(sum, 24, &f).unwrap();
            let pa = oracle_encode(&a, &code).unwrap();
            let pb = oracle_encode(&b, &code).unwrap();
            let ps = oracle_encode(&sum, &code).unwrap();
            let expect: Vec<u8> = pa
                .as_bytes()
                .iter()
                .zip(pb.as_bytes())
                .map(|(x, y)| x ^ y)
                .collect();
            assert_eq!(ps.as_bytes(), &expect[..]);
        }
    }

    #[test]
    fn decode_examples() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        let code = CodeSpec::new(4, 2, GF16, TransformKind::Embedding).unwrap();
        let codec = Codec::new(code).unwrap();
        let data = random(4, 64, &GF16, &mut rng);
        let parity = codec.encode(&data).unwrap();
        let all: Vec<&[u8]> = data.symbols().chain(parity.symbols()).collect();

        let same = codec.decode(&data, &[0, 1, 2, 3]).unwrap();
        assert_eq!(same, data);

        let indices = [0, 2, 3, 5];
        let surv = SymbolBuffer::from_symbols(&indices.map(|i| all[i]), &GF16).unwrap();
        let full = codec.reconstruct(&surv, &indices).unwrap();
        for (i, sym) in all.iter().enumerate() {
            assert_eq!(full.symbol(i), *sym);
        }
    }

    #[test]
    fn shape_errors() {
        let code = CodeSpec::new(3, 2, GF16, TransformKind::Embedding).unwrap();
        let codec = Codec::new(code).unwrap();
        let wrong_count = SymbolBuffer::zeroed(2, 32, &GF16).unwrap();
        assert!(matches!(
            codec.encode(&wrong_count),
            Err(Error::BufferShape(_))
        ));
        let wrong_field = SymbolBuffer::zeroed(3, 48, &GF64).unwrap();
        assert!(matches!(
            codec.encode(&wrong_field),
            Err(Error::BufferShape(_))
        ));
        assert!(SymbolBuffer::from_bytes(vec![0; 33], 32, &GF16).is_err());
    }
}
