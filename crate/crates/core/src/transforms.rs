//! Transforms between the field and the ring, per element and per packet.
//!
//! Two data transforms are available:
//!
//! * **Embedding**: pad with `n - w` zero coefficients; the inverse is the
//!   reduction modulo the field polynomial, which for these moduli is a xor of
//!   the top block into the lower blocks.
//! * **Parity**: append parity bits so the result lies in the field ideal;
//!   the inverse drops them. This is a bijection, not a homomorphism, so
//!   encoder and decoder must both use it. Working through the parity path
//!   computes `T^-1 (M (T d))` where `T = phi_E_inv . phi_P` (see
//!   [`parity_twist`]), rather than `M d`.
//!
//! At packet level the extra `n - w` coefficients live in caller-provided
//! scratch packets which are never written to output storage.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::region::{copy_into, xor_into};
use crate::ring::{in_ideal_a1, RingElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    Embedding,
    Parity,
}

impl TransformKind {
    pub fn to_byte(self) -> u8 {
        match self {
            TransformKind::Embedding => 0,
            TransformKind::Parity => 1,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(TransformKind::Embedding),
            1 => Some(TransformKind::Parity),
            _ => None,
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformKind::Embedding => f.write_str("embedding"),
            TransformKind::Parity => f.write_str("parity"),
        }
    }
}

impl std::str::FromStr for TransformKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "embedding" | "emb" => Ok(TransformKind::Embedding),
            "parity" => Ok(TransformKind::Parity),
            other => Err(format!("unknown transform `{other}`")),
        }
    }
}

/// Zero padding.
#[inline]
pub fn phi_e(b: FieldElem, _spec: &FieldSpec) -> RingElem {
    RingElem(b.0.into())
}

/// Reduction modulo the field polynomial: coefficient `i` is xored with
/// coefficient `w + (i mod s)`.
pub fn phi_e_inv(a: RingElem, spec: &FieldSpec) -> FieldElem {
    let (w, s) = (spec.w(), spec.spacing());
    let top = a.0 >> w;
    let mut spread = 0u16;
    for i in 0..w {
        spread |= ((top >> (i % s)) & 1) << i;
    }
    FieldElem(((a.0 ^ spread) & spec.mask() as u16) as u8)
}

/// Appends one parity bit per residue class mod `s`.
pub fn phi_p(b: FieldElem, spec: &FieldSpec) -> RingElem {
    let (w, s) = (spec.w(), spec.spacing());
    let mut parity = 0u16;
    for i in 0..w {
        if b.bit(i) {
            parity ^= 1 << (i % s);
        }
    }
    RingElem(u16::from(b.0) | parity << w)
}

/// Drops the parity bits. The input must lie in the field ideal; this is
/// only checked in debug builds.
pub fn phi_p_inv(a: RingElem, spec: &FieldSpec) -> FieldElem {
    debug_assert!(
        in_ideal_a1(a, spec),
        "{a} is not in the field ideal: transform mismatch or corrupted data"
    );
    FieldElem((a.0 & spec.mask() as u16) as u8)
}

/// Checked variant of [`phi_p_inv`].
pub fn try_phi_p_inv(a: RingElem, spec: &FieldSpec) -> Result<FieldElem> {
    if !in_ideal_a1(a, spec) {
        return Err(Error::NotInIdeal);
    }
    Ok(FieldElem((a.0 & spec.mask() as u16) as u8))
}

/// The field-level bijection the parity path conjugates by:
/// `phi_E_inv(phi_P(b))`, i.e. each coefficient xored with the parity of its
/// residue class. It is GF(2)-linear and an involution for both fields.
pub fn parity_twist(b: FieldElem, spec: &FieldSpec) -> FieldElem {
    phi_e_inv(phi_p(b, spec), spec)
}

pub fn forward(kind: TransformKind, b: FieldElem, spec: &FieldSpec) -> RingElem {
    match kind {
        TransformKind::Embedding => phi_e(b, spec),
        TransformKind::Parity => phi_p(b, spec),
    }
}

pub fn inverse(kind: TransformKind, a: RingElem, spec: &FieldSpec) -> FieldElem {
    match kind {
        TransformKind::Embedding => phi_e_inv(a, spec),
        TransformKind::Parity => phi_p_inv(a, spec),
    }
}

fn check_shape(symbol_len: usize, scratch_len: usize, spec: &FieldSpec) -> Result<usize> {
    let w = spec.w();
    if !symbol_len.is_multiple_of(w) {
        return Err(Error::BufferShape(format!(
            "symbol of {symbol_len} bytes is not a multiple of w = {w}"
        )));
    }
    let packet = symbol_len / w;
    if scratch_len != packet * (spec.n() - w) {
        return Err(Error::BufferShape(format!(
            "scratch holds {scratch_len} bytes, expected {} packets of {packet}",
            spec.n() - w
        )));
    }
    Ok(packet)
}

/// Fills the `n - w` scratch packets of a symbol according to the forward
/// transform, bit column by bit column.
pub fn extend_packets(
    symbol: &[u8],
    kind: TransformKind,
    spec: &FieldSpec,
    scratch: &mut [u8],
) -> Result<()> {
    let packet = check_shape(symbol.len(), scratch.len(), spec)?;
    match kind {
        TransformKind::Embedding => scratch.fill(0),
        TransformKind::Parity => {
            let s = spec.spacing();
            for (j, dst) in scratch.chunks_exact_mut(packet).enumerate() {
                copy_into(dst, &symbol[j * packet..(j + 1) * packet]);
                for i in (j + s..spec.w()).step_by(s) {
                    xor_into(dst, &symbol[i * packet..(i + 1) * packet]);
                }
            }
        }
    }
    Ok(())
}

/// Applies the inverse transform given the `w` data packets and the `n - w`
/// scratch packets, writing the field result back into the data packets.
pub fn fold_packets(
    symbol: &mut [u8],
    kind: TransformKind,
    spec: &FieldSpec,
    scratch: &[u8],
) -> Result<()> {
    let packet = check_shape(symbol.len(), scratch.len(), spec)?;
    if kind == TransformKind::Embedding {
        let s = spec.spacing();
        for (i, dst) in symbol.chunks_exact_mut(packet).enumerate() {
            let j = i % s;
            xor_into(dst, &scratch[j * packet..(j + 1) * packet]);
        }
    }
    Ok(())
}

/// Packet-level [`parity_twist`], in place. `scratch` must hold `n - w`
/// packets.
pub fn twist_packets(symbol: &mut [u8], spec: &FieldSpec, scratch: &mut [u8]) -> Result<()> {
    extend_packets(symbol, TransformKind::Parity, spec, scratch)?;
    fold_packets(symbol, TransformKind::Embedding, spec, scratch)
}
