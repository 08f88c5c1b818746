//! Encode random data, drop `r` symbols, and recover them.

use pyrit::{choose_transform, CodeSpec, Codec, FieldSpec, SymbolBuffer};
use rand::{seq::SliceRandom, RngCore, SeedableRng};

fn main() -> pyrit::Result<()> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for (k, r, field) in [
        (8, 4, FieldSpec::gf16()),
        (40, 20, FieldSpec::gf64()),
        (20, 40, FieldSpec::gf64()),
    ] {
        let code = CodeSpec::new(k, r, field, choose_transform(k, r))?;
        let codec = Codec::new(code)?;
        let size = 4096 * field.w() / 2;

        let mut bytes = vec![0u8; k * size];
        rng.fill_bytes(&mut bytes);
        let data = SymbolBuffer::from_bytes(bytes, size, &field)?;
        let parity = codec.encode(&data)?;

        let mut indices: Vec<usize> = (0..k + r).collect();
        indices.shuffle(&mut rng);
        let mut survivors = indices[..k].to_vec();
        survivors.sort_unstable();
        let all: Vec<&[u8]> = data.symbols().chain(parity.symbols()).collect();
        let picked: Vec<&[u8]> = survivors.iter().map(|&i| all[i]).collect();
        let buf = SymbolBuffer::from_symbols(&picked, &field)?;

        let restored = codec.reconstruct(&buf, &survivors)?;
        let ok = restored.as_bytes()[..k * size] == *data.as_bytes()
            && restored.as_bytes()[k * size..] == *parity.as_bytes();
        println!(
            "{} k={k} r={r} {}: lost {:?} -> {}",
            field.id(),
            code.transform(),
            &indices[k..],
            if ok { "recovered" } else { "MISMATCH" }
        );
        assert!(ok);
    }
    Ok(())
}
