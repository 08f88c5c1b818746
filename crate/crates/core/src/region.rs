//! Region kernels and the bit-sliced symbol layout.
//!
//! A symbol of `w * P` bytes is split into `w` packets of `P` bytes. Bit `t`
//! of packet `i` (byte `t / 8`, bit `t % 8`, least significant first) is the
//! coefficient of `x^i` of the field element in column `t`. With this layout
//! every field or ring operation becomes a whole-region xor.

const WORD: usize = std::mem::size_of::<u64>();

/// `dst ^= src`, a machine word at a time.
#[inline]
pub fn xor_into(dst: &mut [u8], src: &[u8]) {
    debug_assert_eq!(dst.len(), src.len());
    let mut d = dst.chunks_exact_mut(WORD);
    let mut s = src.chunks_exact(WORD);
    for (dw, sw) in (&mut d).zip(&mut s) {
        let x =
            u64::from_ne_bytes(dw.try_into().unwrap()) ^ u64::from_ne_bytes(sw.try_into().unwrap());
        dw.copy_from_slice(&x.to_ne_bytes());
    }
    for (db, sb) in d.into_remainder().iter_mut().zip(s.remainder()) {
        *db ^= sb;
    }
}

#[inline]
pub fn copy_into(dst: &mut [u8], src: &[u8]) {
    dst.copy_from_slice(src);
}

/// Reads the `count`-bit column at bit offset `t` of a bit-sliced symbol.
pub fn column(symbol: &[u8], packet_size: usize, count: usize, t: usize) -> u16 {
    let (byte, bit) = (t / 8, t % 8);
    (0..count).fold(0u16, |acc, i| {
        acc | (u16::from((symbol[i * packet_size + byte] >> bit) & 1) << i)
    })
}

/// Writes the `count`-bit column at bit offset `t`.
pub fn set_column(symbol: &mut [u8], packet_size: usize, count: usize, t: usize, value: u16) {
    let (byte, bit) = (t / 8, t % 8);
    for i in 0..count {
        let b = &mut symbol[i * packet_size + byte];
        *b = (*b & !(1 << bit)) | ((((value >> i) & 1) as u8) << bit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_handles_tails() {
        for len in [0usize, 1, 7, 8, 9, 31, 64, 100] {
            let mut a: Vec<u8> = (0..len).map(|i| i as u8).collect();
            let b: Vec<u8> = (0..len).map(|i| (i * 7 + 3) as u8).collect();
            let expected: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            xor_into(&mut a, &b);
            assert_eq!(a, expected);
        }
    }

    #[test]
    fn column_roundtrip() {
        let mut sym = vec![0u8; 4 * 3];
        set_column(&mut sym, 3, 4, 13, 0b1010);
        assert_eq!(column(&sym, 3, 4, 13), 0b1010);
        assert_eq!(column(&sym, 3, 4, 12), 0);
        assert_eq!(sym[3 + 1], 1 << 5);
    }
}
