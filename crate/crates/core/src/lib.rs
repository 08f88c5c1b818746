//! Systematic MDS erasure codes over `GF(2^4)` and `GF(2^6)` whose linear
//! combinations are computed in the ring `F2[x]/(x^n + 1)`.
//!
//! Field elements are mapped into the ring, multiplied there by sparse
//! representatives (a product is then a handful of cyclic rotations, i.e.
//! XORs of whole packets), and mapped back. Encoding and decoding compile
//! to flat lists of region XORs that are replayed over bit-sliced symbols.
//!
//! Modules, bottom up:
//!
//! - [`field`]: the two supported fields, bit matrices, modulus checks.
//! - [`ring`]: ring arithmetic, the ideal isomorphic to the field, sparse
//!   representatives.
//! - [`transforms`]: the embedding and parity data transforms.
//! - [`matrix`]: Cauchy parity matrices, inversion, decode matrices.
//! - [`schedule`]: XOR schedule compiler and replay.
//! - [`codec`]: symbol buffers, encoder/decoder, reference encoder.
//! - [`table`]: table-driven baseline.
//! - [`container`]: shard files.
//! - [`bench`], [`verify`]: throughput sweep and self-checks used by the CLI.
//!
//! Runnable examples live in `examples/`: `ring_algebra`, `sparse_transform`,
//! `encode_decode`, `schedule_stats`, `file_shards`, `throughput`.
//!
//! ```
//! use pyrit::{Codec, CodeSpec, FieldSpec, SymbolBuffer, TransformKind};
//!
//! let code = CodeSpec::new(4, 2, FieldSpec::gf16(), TransformKind::Embedding).unwrap();
//! let codec = Codec::new(code).unwrap();
//! let data = SymbolBuffer::from_bytes((0..4 * 64).map(|i| i as u8).collect(), 64, code.field()).unwrap();
//! let parity = codec.encode(&data).unwrap();
//!
//! // lose symbols 0 and 2
//! let survivors = [1, 3, 4, 5];
//! let buf = SymbolBuffer::from_symbols(&[data.symbol(1), data.symbol(3), parity.symbol(0), parity.symbol(1)], code.field()).unwrap();
//! assert_eq!(codec.decode(&buf, &survivors).unwrap(), data);
//! ```

pub mod bench;
pub mod codec;
pub mod container;
pub mod error;
pub mod field;
pub mod matrix;
pub mod region;
pub mod ring;
pub mod schedule;
pub mod table;
pub mod transforms;
pub mod verify;

pub use codec::{decode, encode, oracle_encode, Codec, DecodePlan, SymbolBuffer};
pub use container::ShardHeader;
pub use error::{Error, Result};
pub use field::{FieldElem, FieldId, FieldSpec};
pub use matrix::{cauchy_parity_matrix, decode_matrix, CodeSpec, FieldMatrix};
pub use ring::{RingElem, ShiftSet};
pub use schedule::{
    choose_transform, compile_schedule, schedule_stats, ScheduleStats, XorSchedule,
};
pub use table::TableCodec;
pub use transforms::TransformKind;
