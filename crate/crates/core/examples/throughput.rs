//! A short throughput sweep for the three codecs.

use pyrit::bench::{self, BenchConfig, CodecChoice, Iterations, Operation};
use pyrit::{CodeSpec, FieldSpec, TransformKind};

fn main() -> pyrit::Result<()> {
    let code = CodeSpec::new(8, 4, FieldSpec::gf16(), TransformKind::Embedding)?;
    let config = BenchConfig {
        code,
        sizes: vec![2048, 32 << 10, 512 << 10],
        threads: vec![1, 2],
        iterations: Iterations::Budget(32 << 20),
    };
    for op in [Operation::Encode, Operation::Decode] {
        let mut tables = Vec::new();
        for codec in CodecChoice::ALL {
            let t = bench::run(&config, codec, op)?;
            println!("# {}\n{}", t.file_name(), t.to_csv());
            tables.push(t);
        }
        println!(
            "# {} pyrit/table\n{}",
            op.name(),
            tables[0].ratio_csv(&tables[2])
        );
    }
    Ok(())
}
