//! Write a file as shard files, delete some, and rebuild it.

use pyrit::container::{decode_files, encode_file};
use pyrit::{CodeSpec, FieldSpec, TransformKind};
use rand::{RngCore, SeedableRng};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let input = dir.path().join("input.bin");
    let mut payload = vec![0u8; 300_000];
    rand::rngs::StdRng::seed_from_u64(1).fill_bytes(&mut payload);
    std::fs::write(&input, &payload)?;

    let code = CodeSpec::new(8, 4, FieldSpec::gf16(), TransformKind::Embedding)?;
    let shard_dir = dir.path().join("shards");
    let paths = encode_file(&input, &shard_dir, &code, 4096)?;
    println!(
        "wrote {} shards of {} bytes",
        paths.len(),
        std::fs::metadata(&paths[0])?.len()
    );

    for p in [&paths[0], &paths[3], &paths[5], &paths[10]] {
        std::fs::remove_file(p)?;
        println!("deleted {}", p.file_name().unwrap().to_string_lossy());
    }

    let output = dir.path().join("restored.bin");
    let len = decode_files(&[shard_dir], &output, None)?;
    let same = std::fs::read(&output)? == payload;
    println!("restored {len} bytes, identical: {same}");
    assert!(same);
    Ok(())
}
