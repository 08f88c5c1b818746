//! Shard file format.
//!
//! A file is cut into stripes of `k * symbol_size` bytes (the last one zero
//! padded). Each stripe is encoded into `k + r` symbols, and shard `i` holds
//! a fixed header followed by symbol `i` of every stripe.
//!
//! Header layout (little endian, 29 bytes):
//!
//! | offset | size | field            |
//! |--------|------|------------------|
//! | 0      | 4    | magic `PYRT`     |
//! | 4      | 1    | version (1)      |
//! | 5      | 1    | field id         |
//! | 6      | 1    | transform id     |
//! | 7      | 2    | k                |
//! | 9      | 2    | r                |
//! | 11     | 2    | shard index      |
//! | 13     | 4    | symbol size      |
//! | 17     | 8    | original length  |
//! | 25     | 4    | CRC-32 of 0..25  |
//!
//! The coding matrix is not stored; it is rebuilt from `(k, r, field)`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::codec::{check_symbol_size, Codec, SymbolBuffer};
use crate::error::{Error, Result};
use crate::field::FieldId;
use crate::matrix::CodeSpec;
use crate::transforms::TransformKind;

pub const MAGIC: [u8; 4] = *b"PYRT";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 29;
pub const SHARD_EXTENSION: &str = "pyrt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardHeader {
    pub field: FieldId,
    pub transform: TransformKind,
    pub k: u16,
    pub r: u16,
    pub shard_index: u16,
    pub symbol_size: u32,
    pub original_length: u64,
}

impl ShardHeader {
    pub fn code(&self) -> Result<CodeSpec> {
        CodeSpec::new(
            self.k.into(),
            self.r.into(),
            self.field.spec(),
            self.transform,
        )
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5] = self.field.to_byte();
        out[6] = self.transform.to_byte();
        out[7..9].copy_from_slice(&self.k.to_le_bytes());
        out[9..11].copy_from_slice(&self.r.to_le_bytes());
        out[11..13].copy_from_slice(&self.shard_index.to_le_bytes());
        out[13..17].copy_from_slice(&self.symbol_size.to_le_bytes());
        out[17..25].copy_from_slice(&self.original_length.to_le_bytes());
        let crc = crc32fast::hash(&out[..25]);
        out[25..29].copy_from_slice(&crc.to_le_bytes());
        out
    }

    /// Parses and validates a header from the start of `bytes`.
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let malformed = |m: String| Error::MalformedHeader(m);
        if bytes.len() < HEADER_LEN {
            return Err(malformed(format!(
                "{} bytes, header needs {HEADER_LEN}",
                bytes.len()
            )));
        }
        if bytes[0..4] != MAGIC {
            return Err(malformed("bad magic".into()));
        }
        let stored = u32::from_le_bytes(bytes[25..29].try_into().unwrap());
        let computed = crc32fast::hash(&bytes[..25]);
        if stored != computed {
            return Err(Error::ChecksumError { stored, computed });
        }
        if bytes[4] != VERSION {
            return Err(malformed(format!("unsupported version {}", bytes[4])));
        }
        let field = FieldId::from_byte(bytes[5])
            .ok_or_else(|| malformed(format!("unknown field id {}", bytes[5])))?;
        let transform = TransformKind::from_byte(bytes[6])
            .ok_or_else(|| malformed(format!("unknown transform id {}", bytes[6])))?;
        let u16_at = |at: usize| u16::from_le_bytes(bytes[at..at + 2].try_into().unwrap());
        let header = ShardHeader {
            field,
            transform,
            k: u16_at(7),
            r: u16_at(9),
            shard_index: u16_at(11),
            symbol_size: u32::from_le_bytes(bytes[13..17].try_into().unwrap()),
            original_length: u64::from_le_bytes(bytes[17..25].try_into().unwrap()),
        };
        let code = header
            .code()
            .map_err(|e| malformed(format!("invalid code parameters: {e}")))?;
        if usize::from(header.shard_index) >= code.total() {
            return Err(malformed(format!(
                "shard index {} out of range 0..{}",
                header.shard_index,
                code.total()
            )));
        }
        check_symbol_size(header.symbol_size as usize, &field.spec())
            .map_err(|e| malformed(e.to_string()))?;
        Ok(header)
    }

    fn same_set(&self, other: &ShardHeader) -> bool {
        ShardHeader {
            shard_index: 0,
            ..*self
        } == ShardHeader {
            shard_index: 0,
            ..*other
        }
    }
}

/// Number of stripes needed for `len` bytes.
pub fn stripe_count(len: u64, code: &CodeSpec, symbol_size: usize) -> u64 {
    len.div_ceil((code.k() * symbol_size) as u64)
}

/// Encodes `input` into `k + r` shard images.
pub fn encode_shards(input: &[u8], code: &CodeSpec, symbol_size: usize) -> Result<Vec<Vec<u8>>> {
    check_symbol_size(symbol_size, code.field())?;
    let k16 = u16::try_from(code.k()).map_err(|_| Error::InvalidParams("k too large".into()))?;
    let r16 = u16::try_from(code.r()).map_err(|_| Error::InvalidParams("r too large".into()))?;
    let symbol_size32 = u32::try_from(symbol_size)
        .map_err(|_| Error::InvalidParams("symbol size too large".into()))?;
    let codec = Codec::new(*code)?;
    let stripes = stripe_count(input.len() as u64, code, symbol_size) as usize;
    let mut shards: Vec<Vec<u8>> = (0..code.total())
        .map(|i| {
            let header = ShardHeader {
                field: code.field().id(),
                transform: code.transform(),
                k: k16,
                r: r16,
                shard_index: i as u16,
                symbol_size: symbol_size32,
                original_length: input.len() as u64,
            };
            let mut v = Vec::with_capacity(HEADER_LEN + stripes * symbol_size);
            v.extend_from_slice(&header.to_bytes());
            v
        })
        .collect();

    let stripe_bytes = code.k() * symbol_size;
    for stripe in 0..stripes {
        let start = stripe * stripe_bytes;
        let end = (start + stripe_bytes).min(input.len());
        let mut block = input[start..end].to_vec();
        block.resize(stripe_bytes, 0);
        let data = SymbolBuffer::from_bytes(block, symbol_size, code.field())?;
        let parity = codec.encode(&data)?;
        for (i, sym) in data.symbols().chain(parity.symbols()).enumerate() {
            shards[i].extend_from_slice(sym);
        }
    }
    Ok(shards)
}

/// Restores the original bytes from any `k` consistent shards.
///
/// Shards whose header fails to parse are skipped; if too few remain, the
/// first parse error is returned. Data shards are preferred, then the
/// lowest-index parity shards. With `expected` set, the stored transform
/// must match it.
pub fn decode_shards<S: AsRef<[u8]>>(
    shards: &[S],
    expected: Option<TransformKind>,
) -> Result<Vec<u8>> {
    let mut first_error = None;
    let mut usable: Vec<(ShardHeader, &[u8])> = Vec::new();
    for shard in shards {
        let bytes = shard.as_ref();
        match ShardHeader::parse(bytes) {
            Ok(h) => usable.push((h, &bytes[HEADER_LEN..])),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    let Some(&(reference, _)) = usable.first() else {
        return Err(first_error.unwrap_or(Error::InsufficientShards {
            needed: 1,
            available: 0,
        }));
    };
    if let Some((h, _)) = usable.iter().find(|(h, _)| !h.same_set(&reference)) {
        return Err(Error::HeaderMismatch(format!(
            "shard {} disagrees with shard {}",
            h.shard_index, reference.shard_index
        )));
    }
    if let Some(requested) = expected {
        if requested != reference.transform {
            return Err(Error::TransformMismatch {
                stored: reference.transform,
                requested,
            });
        }
    }
    let code = reference.code()?;
    let symbol_size = reference.symbol_size as usize;
    let stripes = stripe_count(reference.original_length, &code, symbol_size) as usize;
    let payload_len = stripes * symbol_size;

    let mut by_index: Vec<Option<&[u8]>> = vec![None; code.total()];
    for (h, payload) in &usable {
        if payload.len() != payload_len {
            first_error.get_or_insert(Error::MalformedHeader(format!(
                "shard {} payload is {} bytes, expected {payload_len}",
                h.shard_index,
                payload.len()
            )));
            continue;
        }
        by_index[usize::from(h.shard_index)].get_or_insert(payload);
    }
    let chosen: Vec<usize> = (0..code.total())
        .filter(|&i| by_index[i].is_some())
        .take(code.k())
        .collect();
    if chosen.len() < code.k() {
        return Err(match first_error {
            Some(e) if matches!(e, Error::ChecksumError { .. }) => e,
            _ => Error::InsufficientShards {
                needed: code.k(),
                available: chosen.len(),
            },
        });
    }

    let codec = Codec::new(code)?;
    let plan = codec.plan(&chosen)?;
    let mut out = Vec::with_capacity(stripes * code.k() * symbol_size);
    for stripe in 0..stripes {
        let range = stripe * symbol_size..(stripe + 1) * symbol_size;
        if plan.erased().is_empty() {
            for &i in &chosen {
                out.extend_from_slice(&by_index[i].unwrap()[range.clone()]);
            }
            continue;
        }
        let mut bytes = Vec::with_capacity(code.k() * symbol_size);
        for &i in &chosen {
            bytes.extend_from_slice(&by_index[i].unwrap()[range.clone()]);
        }
        let survivors = SymbolBuffer::from_bytes(bytes, symbol_size, code.field())?;
        let recovered = codec.recover(&plan, &survivors, 1)?;
        let mut erased = plan.erased().iter().zip(recovered.symbols());
        for (i, shard) in by_index.iter().take(code.k()).enumerate() {
            match shard {
                Some(p) => out.extend_from_slice(&p[range.clone()]),
                None => {
                    let (&idx, sym) = erased.next().expect("erased symbol recovered");
                    debug_assert_eq!(idx, i);
                    out.extend_from_slice(sym);
                }
            }
        }
    }
    out.truncate(reference.original_length as usize);
    Ok(out)
}

pub fn shard_file_name(index: usize) -> String {
    format!("shard_{index:03}.{SHARD_EXTENSION}")
}

/// Encodes a file into shard files inside `out_dir`; returns their paths.
pub fn encode_file(
    input: &Path,
    out_dir: &Path,
    code: &CodeSpec,
    symbol_size: usize,
) -> anyhow::Result<Vec<PathBuf>> {
    let data = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let shards = encode_shards(&data, code, symbol_size)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut paths = Vec::with_capacity(shards.len());
    for (i, shard) in shards.iter().enumerate() {
        let path = out_dir.join(shard_file_name(i));
        fs::write(&path, shard).with_context(|| format!("writing {}", path.display()))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Collects shard files: every `*.pyrt` file of a directory, or the given
/// files.
pub fn collect_shard_paths(inputs: &[PathBuf]) -> anyhow::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|q| q.extension().is_some_and(|e| e == SHARD_EXTENSION))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Decodes shard files and writes the restored file to `output`.
pub fn decode_files(
    shards: &[PathBuf],
    output: &Path,
    expected: Option<TransformKind>,
) -> anyhow::Result<u64> {
    let paths = collect_shard_paths(shards)?;
    let mut images = Vec::with_capacity(paths.len());
    for p in &paths {
        images.push(fs::read(p).with_context(|| format!("reading {}", p.display()))?);
    }
    let data = decode_shards(&images, expected)?;
    fs::write(output, &data).with_context(|| format!("writing {}", output.display()))?;
    Ok(data.len() as u64)
}
