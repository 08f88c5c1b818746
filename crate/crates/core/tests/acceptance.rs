//! Acceptance criteria. Each test prints one `criterion N ... PASS|FAIL`
//! line (run with `--nocapture` to see them) and fails on FAIL.

use std::time::{Duration, Instant};

use pyrit::bench::{self, BenchConfig, CodecChoice, Iterations, Operation};
use pyrit::codec::{encode_crs, encode_table};
use pyrit::container::{decode_files, encode_file, shard_file_name, ShardHeader};
use pyrit::field::FieldElem;
use pyrit::matrix::is_mds;
use pyrit::ring::{idempotent_theta1, phi1, ring_mul, sparse_transform, IdealA1, RingElem};
use pyrit::schedule::compile_crs_schedule;
use pyrit::verify;
use pyrit::{
    cauchy_parity_matrix, compile_schedule, oracle_encode, CodeSpec, Codec, FieldSpec,
    SymbolBuffer, TransformKind,
};
use rand::{seq::SliceRandom, Rng, RngCore, SeedableRng};

const GF16: FieldSpec = FieldSpec::gf16();
const GF64: FieldSpec = FieldSpec::gf64();

/// The three evaluation configurations as `(k, r)`: 12, 60 and 60 symbols
/// in total.
fn reference_workloads() -> [CodeSpec; 3] {
    [
        CodeSpec::new(8, 4, GF16, TransformKind::Embedding).unwrap(),
        CodeSpec::new(40, 20, GF64, TransformKind::Embedding).unwrap(),
        CodeSpec::new(20, 40, GF64, TransformKind::Parity).unwrap(),
    ]
}

fn report(n: u32, what: &str, ok: bool, detail: &str) {
    println!(
        "criterion {n} {what}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {detail}");
}

fn random(count: usize, size: usize, f: &FieldSpec, rng: &mut impl RngCore) -> SymbolBuffer {
    let mut bytes = vec![0u8; count * size];
    rng.fill_bytes(&mut bytes);
    SymbolBuffer::from_bytes(bytes, size, f).unwrap()
}

/// Decodes with the given symbols erased, using data survivors first and
/// then the lowest-index parity symbols.
fn survives(codec: &Codec, data: &SymbolBuffer, parity: &SymbolBuffer, erased: &[usize]) -> bool {
    let code = codec.code();
    let survivors: Vec<usize> = (0..code.total())
        .filter(|i| !erased.contains(i))
        .take(code.k())
        .collect();
    let all: Vec<&[u8]> = data.symbols().chain(parity.symbols()).collect();
    let picked: Vec<&[u8]> = survivors.iter().map(|&i| all[i]).collect();
    let buf = SymbolBuffer::from_symbols(&picked, code.field()).unwrap();
    codec.decode(&buf, &survivors).unwrap() == *data
}

#[test]
fn criterion_1_algebra_exhaustives() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for f in [GF16, GF64] {
        let ideal = IdealA1::new(f);
        for s in [
            verify::homomorphism(&ideal),
            verify::a1_characterization(&ideal),
            verify::idempotency(&ideal),
        ] {
            ok &= s.ok();
            lines.push(format!("{} {s}", f.id()));
        }
        // membership by weight parity, from the definition of the ideal
        let s = f.spacing();
        let parity_rule = (0..1u16 << f.n()).all(|v| {
            let even = (0..s)
                .all(|c| (0..f.n()).filter(|i| i % s == c && v >> i & 1 == 1).count() % 2 == 0);
            even == pyrit::ring::in_ideal_a1(RingElem(v), &f)
        });
        ok &= parity_rule;
        let t = idempotent_theta1(&f);
        ok &= ring_mul(t, t, f.n()) == t;
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    for l in &lines {
        println!("  {l}");
    }
    report(
        1,
        "algebra exhaustives",
        ok,
        &format!("{:.3} s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_2_worked_example() {
    let prod = ring_mul(RingElem(0b00101), RingElem(0b10010), 5);
    let x2 = FieldElem(0b100);
    let image = phi1(x2, &GF16);
    let sparse = sparse_transform(x2, &GF16);
    let ok = prod == RingElem(0b11000)
        && image.to_string() == "1+x+x^3+x^4"
        && sparse == RingElem(0b100)
        && sparse.weight() == 1
        && image.weight() == 4;
    report(
        2,
        "worked example",
        ok,
        &format!("(1+x^2)(x+x^4) = {prod}; phi1(x^2) = {image}; sparse(x^2) = {sparse}"),
    );
}

#[test]
fn criterion_3_mixed_representatives() {
    let start = Instant::now();
    let a = verify::mixed_representatives(&IdealA1::new(GF16));
    let b = verify::mixed_representatives(&IdealA1::new(GF64));
    let elapsed = start.elapsed();
    let ok = a.ok()
        && a.total == 256 * 4
        && b.ok()
        && b.total >= 100_000
        && elapsed < Duration::from_secs(10);
    report(
        3,
        "mixed representatives",
        ok,
        &format!("gf16 {a}; gf64 {b}; {:.3} s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_4_mds() {
    let start = Instant::now();
    let mut checked = 0;
    let mut ok = true;
    for f in [GF16, GF64] {
        for k in 1..=6 {
            for r in 1..=6 {
                let code = CodeSpec::new(k, r, f, TransformKind::Embedding).unwrap();
                ok &= is_mds(&cauchy_parity_matrix(&code).unwrap());
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    report(
        4,
        "MDS grid",
        ok,
        &format!("{checked} matrices, {:.3} s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_5_roundtrip() {
    let start = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let (mut exhaustive, mut sampled, mut failures) = (0, 0, 0);
    for (k, r, f) in [(4, 2, GF16), (6, 3, GF16), (6, 3, GF64)] {
        for kind in [TransformKind::Embedding, TransformKind::Parity] {
            let codec = Codec::new(CodeSpec::new(k, r, f, kind).unwrap()).unwrap();
            let data = random(k, f.w() * 8 * 6, &f, &mut rng);
            let parity = codec.encode(&data).unwrap();
            for mask in 0u32..1 << (k + r) {
                if mask.count_ones() as usize > r {
                    continue;
                }
                let erased: Vec<usize> = (0..k + r).filter(|i| mask >> i & 1 == 1).collect();
                exhaustive += 1;
                failures += usize::from(!survives(&codec, &data, &parity, &erased));
            }
        }
    }
    for code in reference_workloads() {
        let codec = Codec::new(code).unwrap();
        let f = *code.field();
        let data = random(code.k(), f.w() * 8 * 4, &f, &mut rng);
        let parity = codec.encode(&data).unwrap();
        let mut idx: Vec<usize> = (0..code.total()).collect();
        for _ in 0..1000 {
            idx.shuffle(&mut rng);
            let lost = rng.gen_range(1..=code.r());
            sampled += 1;
            failures += usize::from(!survives(&codec, &data, &parity, &idx[..lost]));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures == 0 && elapsed < Duration::from_secs(120);
    report(
        5,
        "roundtrip",
        ok,
        &format!(
            "{exhaustive} exhaustive + {sampled} sampled patterns, {failures} failures, {:.1} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_6_oracle_equivalence() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(6);
    let mut grid: Vec<CodeSpec> = reference_workloads().to_vec();
    for f in [GF16, GF64] {
        for kind in [TransformKind::Embedding, TransformKind::Parity] {
            for (k, r) in [(1, 1), (2, 3), (4, 2), (5, 5), (6, 3), (3, 9)] {
                grid.push(CodeSpec::new(k, r, f, kind).unwrap());
            }
        }
    }
    let codecs: Vec<Codec> = grid.iter().map(|c| Codec::new(*c).unwrap()).collect();
    let (mut cases, mut mismatches) = (0, 0);
    while cases < 1200 {
        for codec in &codecs {
            let code = codec.code();
            let f = *code.field();
            let words = if code.total() > 20 {
                rng.gen_range(1..4)
            } else {
                rng.gen_range(1..24)
            };
            let data = random(code.k(), f.w() * 8 * words, &f, &mut rng);
            let expect = oracle_encode(&data, code).unwrap();
            let same = codec.encode(&data).unwrap() == expect
                && encode_crs(&data, code).unwrap() == expect
                && encode_table(&data, code).unwrap() == expect;
            cases += 1;
            mismatches += usize::from(!same);
        }
    }
    report(
        6,
        "oracle equivalence",
        mismatches == 0,
        &format!(
            "{cases} cases over {} codes, {mismatches} mismatches",
            grid.len()
        ),
    );
}

#[test]
fn criterion_7_complexity() {
    // lightest ring element reducing to each field element, by enumeration
    let mut min_weight = [u32::MAX; 16];
    for v in 0..1u16 << 5 {
        let u = IdealA1::new(GF16).phi1_inv(RingElem(v));
        min_weight[u.0 as usize] = min_weight[u.0 as usize].min(v.count_ones());
    }
    let coset_sum: u32 = min_weight[1..].iter().sum();
    let sparse_sum: u32 = GF16
        .elements()
        .skip(1)
        .map(|u| sparse_transform(u, &GF16).weight())
        .sum();
    let ones: usize = GF16
        .elements()
        .skip(1)
        .map(|u| GF16.to_bitmatrix(u).weight())
        .sum();
    let coset_avg = coset_sum as f64 / 15.0;
    let row_avg = ones as f64 / (15.0 * 4.0);
    let mut ok = coset_sum == 25 && sparse_sum == coset_sum && coset_avg < row_avg;
    let mut details = vec![format!(
        "coset weight {coset_sum}/15 = {coset_avg:.4} < bitmatrix row ones {row_avg:.4}"
    )];
    for code in reference_workloads() {
        let m = cauchy_parity_matrix(&code).unwrap();
        let ring = compile_schedule(&m, code.transform())
            .stats()
            .total_region_ops;
        let crs = compile_crs_schedule(&m, code.transform())
            .stats()
            .total_region_ops;
        ok &= ring < crs;
        details.push(format!(
            "{} ({},{}) {}: {ring} < {crs}",
            code.field().id(),
            code.k(),
            code.r(),
            code.transform()
        ));
    }
    report(7, "complexity reduction", ok, &details.join("; "));
}

#[test]
fn criterion_8_throughput_report() {
    let start = Instant::now();
    let config = BenchConfig {
        code: reference_workloads()[0],
        sizes: bench::default_sizes(),
        threads: bench::THREAD_COLUMNS.to_vec(),
        iterations: Iterations::Budget(16 << 20),
    };
    let out = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-bench");
    std::fs::create_dir_all(&out).unwrap();
    let mut ok = true;
    for op in [Operation::Encode, Operation::Decode] {
        let tables: Vec<_> = CodecChoice::ALL
            .iter()
            .map(|&c| bench::run(&config, c, op).unwrap())
            .collect();
        for t in &tables {
            std::fs::write(out.join(t.file_name()), t.to_csv()).unwrap();
            ok &= t.rows.len() == 17
                && t.rows
                    .iter()
                    .all(|r| r.throughput.iter().all(Option::is_some));
        }
        let ratio = tables[0].ratio_csv(&tables[2]);
        std::fs::write(
            out.join(format!("{}_ratio_pyrit_table.csv", op.name())),
            &ratio,
        )
        .unwrap();
        println!("  {} pyrit/table ratio:", op.name());
        for line in ratio.lines() {
            println!("    {line}");
        }
        let t1 = |size: usize| {
            tables[0]
                .rows
                .iter()
                .find(|r| r.size == size)
                .and_then(|r| r.throughput[0])
        };
        if let (Some(a), Some(b)) = (t1(8 << 20), t1(512 << 10)) {
            println!(
                "  {} pyrit t1: 8 MiB {a:.3} GB/s, 512 KiB {b:.3} GB/s (ratio {:.2})",
                op.name(),
                a / b
            );
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(600);
    report(
        8,
        "throughput sweep",
        ok,
        &format!(
            "3 codecs x 2 operations x 17 sizes x 4 thread counts in {:.1} s, CSV in {}",
            elapsed.as_secs_f64(),
            out.display()
        ),
    );
}

#[test]
fn criterion_9_container_robustness() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(9);
    let mut structured = 0;
    for i in 0..10_000 {
        let len = if i % 2 == 0 { rng.gen_range(0..40) } else { 29 };
        let mut bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        if i % 4 == 1 {
            bytes[..4].copy_from_slice(b"PYRT");
        }
        let parsed = std::panic::catch_unwind(|| ShardHeader::parse(&bytes));
        structured += usize::from(matches!(parsed, Ok(Err(_))));
    }

    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.bin");
    let mut payload = vec![0u8; 40_000];
    rng.fill_bytes(&mut payload);
    std::fs::write(&input, &payload).unwrap();
    let want = crc32fast::hash(&payload);
    let code = reference_workloads()[0];
    let shards = dir.path().join("shards");
    let paths = encode_file(&input, &shards, &code, 1024).unwrap();
    let (mut decodes, mut bad) = (0, 0);
    let out = dir.path().join("out.bin");
    for mask in 0u32..1 << code.total() {
        if mask.count_ones() as usize > code.r() {
            continue;
        }
        let kept: Vec<_> = (0..code.total())
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| shards.join(shard_file_name(i)))
            .collect();
        decode_files(&kept, &out, None).unwrap();
        decodes += 1;
        bad += usize::from(crc32fast::hash(&std::fs::read(&out).unwrap()) != want);
    }
    let ok = structured == 10_000 && bad == 0 && paths.len() == 12;
    report(
        9,
        "container robustness",
        ok,
        &format!("{structured}/10000 fuzzed headers rejected cleanly; {decodes} deletion patterns, {bad} mismatches"),
    );
}
