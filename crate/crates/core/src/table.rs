//! Lookup-table baseline: region multiplication on a packed layout.
//!
//! `GF(2^4)` packs two elements per byte and multiplies by a constant with
//! two 16-entry half-byte tables. `GF(2^6)` stores one element per byte and
//! uses log/antilog tables.

use crate::codec::SymbolBuffer;
use crate::error::{Error, Result};
use crate::field::{FieldElem, ModulusKind};
use crate::matrix::{cauchy_parity_matrix, CodeSpec, FieldMatrix};
use crate::region::{column, set_column, xor_into};
use crate::transforms::{parity_twist, TransformKind};

#[derive(Debug, Clone)]
enum Tables {
    /// `[c][x] = c * x` and `(c * x) << 4`.
    Nibble {
        lo: Vec<[u8; 16]>,
        hi: Vec<[u8; 16]>,
    },
    LogExp {
        log: [u8; 64],
        exp: [u8; 128],
    },
}

#[derive(Debug, Clone)]
pub struct TableCodec {
    code: CodeSpec,
    parity: FieldMatrix,
    tables: Tables,
    // byte -> byte map applying the parity twist to every packed element
    twist: [u8; 256],
}

impl TableCodec {
    pub fn new(code: CodeSpec) -> Result<Self> {
        let f = *code.field();
        let tables = match f.kind() {
            ModulusKind::Aop => {
                let mut lo = vec![[0u8; 16]; 16];
                let mut hi = vec![[0u8; 16]; 16];
                for c in 0..16u8 {
                    for x in 0..16u8 {
                        let p = f.mul(FieldElem(c), FieldElem(x)).0;
                        lo[c as usize][x as usize] = p;
                        hi[c as usize][x as usize] = p << 4;
                    }
                }
                Tables::Nibble { lo, hi }
            }
            ModulusKind::Esp => {
                let q = f.order() - 1;
                let generator = f
                    .elements()
                    .skip(2)
                    .find(|&g| (1..q).all(|e| f.pow(g, e as u32) != FieldElem::ONE))
                    .ok_or_else(|| Error::InvalidParams("no primitive element".into()))?;
                let mut log = [0u8; 64];
                let mut exp = [0u8; 128];
                let mut x = FieldElem::ONE;
                for e in 0..q {
                    exp[e] = x.0;
                    exp[e + q] = x.0;
                    log[x.0 as usize] = e as u8;
                    x = f.mul(x, generator);
                }
                Tables::LogExp { log, exp }
            }
        };
        let mut twist = [0u8; 256];
        for (b, slot) in twist.iter_mut().enumerate() {
            *slot = match f.kind() {
                ModulusKind::Aop => {
                    let lo = parity_twist(FieldElem(b as u8 & 0xf), &f).0;
                    let hi = parity_twist(FieldElem(b as u8 >> 4), &f).0;
                    lo | hi << 4
                }
                ModulusKind::Esp => parity_twist(FieldElem(b as u8 & 0x3f), &f).0,
            };
        }
        Ok(TableCodec {
            code,
            parity: cauchy_parity_matrix(&code)?,
            tables,
            twist,
        })
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    pub fn parity_matrix(&self) -> &FieldMatrix {
        &self.parity
    }

    /// Packed size of one bit-sliced symbol of `symbol_size` bytes.
    pub fn packed_len(&self, symbol_size: usize) -> usize {
        let columns = symbol_size / self.code.field().w() * 8;
        match self.tables {
            Tables::Nibble { .. } => columns / 2,
            Tables::LogExp { .. } => columns,
        }
    }

    pub fn to_packed(&self, symbol: &[u8]) -> Vec<u8> {
        let w = self.code.field().w();
        let packet = symbol.len() / w;
        let mut out = vec![0u8; self.packed_len(symbol.len())];
        for t in 0..packet * 8 {
            let e = column(symbol, packet, w, t) as u8;
            match self.tables {
                Tables::Nibble { .. } => out[t / 2] |= e << (4 * (t % 2)),
                Tables::LogExp { .. } => out[t] = e,
            }
        }
        out
    }

    pub fn from_packed(&self, packed: &[u8], symbol_size: usize) -> Vec<u8> {
        let w = self.code.field().w();
        let packet = symbol_size / w;
        let mut out = vec![0u8; symbol_size];
        for t in 0..packet * 8 {
            let e = match self.tables {
                Tables::Nibble { .. } => (packed[t / 2] >> (4 * (t % 2))) & 0xf,
                Tables::LogExp { .. } => packed[t],
            };
            set_column(&mut out, packet, w, t, e.into());
        }
        out
    }

    /// `dst ^= c * src` elementwise on packed regions.
    pub fn mul_add_region(&self, c: FieldElem, src: &[u8], dst: &mut [u8]) {
        match c.0 {
            0 => {}
            1 => xor_into(dst, src),
            _ => match &self.tables {
                Tables::Nibble { lo, hi } => {
                    let (lo, hi) = (&lo[c.0 as usize], &hi[c.0 as usize]);
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d ^= lo[(s & 0xf) as usize] ^ hi[(s >> 4) as usize];
                    }
                }
                Tables::LogExp { log, exp } => {
                    // product row for this constant, then one lookup per byte
                    let lc = log[c.0 as usize & 0x3f] as usize;
                    let mut row = [0u8; 64];
                    for (x, slot) in row.iter_mut().enumerate().skip(1) {
                        *slot = exp[log[x] as usize + lc];
                    }
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d ^= row[(s & 0x3f) as usize];
                    }
                }
            },
        }
    }

    /// `outputs = matrix * inputs` over packed regions of equal length,
    /// with the parity twist on both sides for parity-kind codes.
    pub fn apply_packed(
        &self,
        matrix: &FieldMatrix,
        inputs: &[&[u8]],
        outputs: &mut [&mut [u8]],
    ) -> Result<()> {
        if inputs.len() != matrix.cols() || outputs.len() != matrix.rows() {
            return Err(Error::BufferShape(
                "packed buffers do not match the matrix".into(),
            ));
        }
        let len = inputs.first().map_or(0, |s| s.len());
        if inputs.iter().any(|s| s.len() != len) || outputs.iter().any(|s| s.len() != len) {
            return Err(Error::BufferShape("packed symbols differ in size".into()));
        }
        let twisted: Vec<Vec<u8>>;
        let inputs: Vec<&[u8]> = if self.code.transform() == TransformKind::Parity {
            twisted = inputs
                .iter()
                .map(|s| s.iter().map(|&b| self.twist[b as usize]).collect())
                .collect();
            twisted.iter().map(Vec::as_slice).collect()
        } else {
            inputs.to_vec()
        };
        for (i, out) in outputs.iter_mut().enumerate() {
            out.fill(0);
            for (j, src) in inputs.iter().enumerate() {
                self.mul_add_region(matrix.get(i, j), src, out);
            }
            if self.code.transform() == TransformKind::Parity {
                for b in out.iter_mut() {
                    *b = self.twist[*b as usize];
                }
            }
        }
        Ok(())
    }

    pub fn encode_packed(&self, inputs: &[&[u8]], outputs: &mut [&mut [u8]]) -> Result<()> {
        self.apply_packed(&self.parity, inputs, outputs)
    }

    /// Encodes a bit-sliced buffer by converting to and from the packed
    /// layout.
    pub fn encode_bitsliced(&self, data: &SymbolBuffer) -> Result<SymbolBuffer> {
        let size = data.symbol_size();
        let packed: Vec<Vec<u8>> = data.symbols().map(|s| self.to_packed(s)).collect();
        let ins: Vec<&[u8]> = packed.iter().map(Vec::as_slice).collect();
        let mut outs = vec![vec![0u8; self.packed_len(size)]; self.code.r()];
        let mut out_refs: Vec<&mut [u8]> = outs.iter_mut().map(Vec::as_mut_slice).collect();
        self.encode_packed(&ins, &mut out_refs)?;
        let bytes: Vec<u8> = outs
            .iter()
            .flat_map(|p| self.from_packed(p, size))
            .collect();
        SymbolBuffer::from_bytes(bytes, size, self.code.field())
    }
}
