use proptest::prelude::*;
use pyrit::codec::{encode_crs, encode_table, oracle_apply};
use pyrit::schedule::{compile_crs_schedule, compile_schedule_with, Representative};
use pyrit::{
    cauchy_parity_matrix, compile_schedule, decode_matrix, oracle_encode, CodeSpec, Codec,
    FieldSpec, SymbolBuffer, TransformKind,
};
use rand::{seq::SliceRandom, Rng, RngCore, SeedableRng};

const FIELDS: [FieldSpec; 2] = [FieldSpec::gf16(), FieldSpec::gf64()];
const KINDS: [TransformKind; 2] = [TransformKind::Embedding, TransformKind::Parity];

fn random(count: usize, size: usize, f: &FieldSpec, rng: &mut impl RngCore) -> SymbolBuffer {
    let mut bytes = vec![0u8; count * size];
    rng.fill_bytes(&mut bytes);
    SymbolBuffer::from_bytes(bytes, size, f).unwrap()
}

fn pick(
    data: &SymbolBuffer,
    parity: &SymbolBuffer,
    survivors: &[usize],
    f: &FieldSpec,
) -> SymbolBuffer {
    let all: Vec<&[u8]> = data.symbols().chain(parity.symbols()).collect();
    let picked: Vec<&[u8]> = survivors.iter().map(|&i| all[i]).collect();
    SymbolBuffer::from_symbols(&picked, f).unwrap()
}

#[test]
fn replay_matches_oracle_on_small_grid() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for f in FIELDS {
        for kind in KINDS {
            for k in 1..=5 {
                for r in 1..=5 {
                    let code = CodeSpec::new(k, r, f, kind).unwrap();
                    let size = f.w() * 8 * rng.gen_range(1..40);
                    let data = random(k, size, &f, &mut rng);
                    let parity = Codec::new(code).unwrap().encode(&data).unwrap();
                    assert_eq!(
                        parity,
                        oracle_encode(&data, &code).unwrap(),
                        "{f:?} {kind} k={k} r={r}"
                    );
                }
            }
        }
    }
}

#[test]
fn decode_schedules_match_oracle() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(12);
    for f in FIELDS {
        for kind in KINDS {
            let code = CodeSpec::new(5, 4, f, kind).unwrap();
            let codec = Codec::new(code).unwrap();
            let mut idx: Vec<usize> = (0..9).collect();
            for _ in 0..20 {
                idx.shuffle(&mut rng);
                let mut survivors = idx[..5].to_vec();
                survivors.sort_unstable();
                let inputs = random(5, f.w() * 16, &f, &mut rng);
                let plan = codec.plan(&survivors).unwrap();
                let got = codec.recover(&plan, &inputs, 1).unwrap();
                let m = decode_matrix(&code, &survivors).unwrap();
                assert_eq!(got, oracle_apply(&m, kind, &inputs).unwrap());
            }
        }
    }
}

#[test]
fn baselines_agree_with_ring_codec() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(13);
    for f in FIELDS {
        for kind in KINDS {
            for (k, r) in [(1, 1), (3, 7), (8, 4), (10, 6)] {
                let code = CodeSpec::new(k, r, f, kind).unwrap();
                let data = random(k, f.w() * 8 * 33, &f, &mut rng);
                let ring = Codec::new(code).unwrap().encode(&data).unwrap();
                assert_eq!(encode_crs(&data, &code).unwrap(), ring);
                assert_eq!(encode_table(&data, &code).unwrap(), ring);
            }
        }
    }
}

#[test]
fn threaded_replay_is_identical() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(14);
    for f in FIELDS {
        let code = CodeSpec::new(6, 3, f, TransformKind::Parity).unwrap();
        let codec = Codec::new(code).unwrap();
        for words in [1, 3, 17, 300] {
            let data = random(6, f.w() * 8 * words, &f, &mut rng);
            let single = codec.encode(&data).unwrap();
            for t in [2, 4, 8] {
                assert_eq!(codec.encode_threaded(&data, t).unwrap(), single);
            }
        }
    }
}

#[test]
fn sparse_representatives_never_cost_more() {
    for f in FIELDS {
        for kind in KINDS {
            for (k, r) in [(1, 1), (4, 2), (8, 4), (6, 10)] {
                let code = CodeSpec::new(k, r, f, kind).unwrap();
                let m = cauchy_parity_matrix(&code).unwrap();
                let sparse = compile_schedule_with(&m, kind, Representative::Sparse).stats();
                let dense = compile_schedule_with(&m, kind, Representative::Idempotent).stats();
                assert!(sparse.matrix_ones <= dense.matrix_ones);
                assert!(sparse.total_region_ops <= dense.total_region_ops);
            }
        }
    }
}

#[test]
fn schedules_only_touch_declared_packets() {
    for f in FIELDS {
        for kind in KINDS {
            let code = CodeSpec::new(7, 5, f, kind).unwrap();
            let m = cauchy_parity_matrix(&code).unwrap();
            for s in [compile_schedule(&m, kind), compile_crs_schedule(&m, kind)] {
                for op in s.pre().iter().chain(s.core()).chain(s.post()) {
                    assert!((op.dst_pkt as usize) < f.n());
                    assert!((op.src_pkt as usize) < f.n());
                }
                let st = s.stats();
                assert_eq!(st.total_region_ops, st.xor_ops + st.copy_ops);
                assert_eq!(st.total_region_ops, st.pre_ops + st.core_ops + st.post_ops);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_k_survivors_restore_the_stripe(
        gf64 in any::<bool>(),
        parity_kind in any::<bool>(),
        k in 1usize..10,
        r in 1usize..7,
        words in 1usize..20,
        seed in any::<u64>(),
    ) {
        let f = if gf64 { FieldSpec::gf64() } else { FieldSpec::gf16() };
        let kind = if parity_kind { TransformKind::Parity } else { TransformKind::Embedding };
        let code = CodeSpec::new(k, r, f, kind).unwrap();
        let codec = Codec::new(code).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let data = random(k, f.w() * 8 * words, &f, &mut rng);
        let parity = codec.encode(&data).unwrap();
        let mut idx: Vec<usize> = (0..k + r).collect();
        idx.shuffle(&mut rng);
        let mut survivors = idx[..k].to_vec();
        survivors.sort_unstable();
        let buf = pick(&data, &parity, &survivors, &f);
        let full = codec.reconstruct(&buf, &survivors).unwrap();
        prop_assert_eq!(&full.as_bytes()[..data.as_bytes().len()], data.as_bytes());
        prop_assert_eq!(&full.as_bytes()[data.as_bytes().len()..], parity.as_bytes());
    }

    #[test]
    fn encoding_is_linear(seed in any::<u64>(), gf64 in any::<bool>(), parity_kind in any::<bool>()) {
        let f = if gf64 { FieldSpec::gf64() } else { FieldSpec::gf16() };
        let kind = if parity_kind { TransformKind::Parity } else { TransformKind::Embedding };
        let code = CodeSpec::new(5, 3, f, kind).unwrap();
        let codec = Codec::new(code).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let a = random(5, f.w() * 16, &f, &mut rng);
        let b = random(5, f.w() * 16, &f, &mut rng);
        let sum: Vec<u8> = a.as_bytes().iter().zip(b.as_bytes()).map(|(x, y)| x ^ y).collect();
        let sum = SymbolBuffer::from_bytes(sum, f.w() * 16, &f).unwrap();
        let pa = codec.encode(&a).unwrap();
        let pb = codec.encode(&b).unwrap();
        let expect: Vec<u8> = pa.as_bytes().iter().zip(pb.as_bytes()).map(|(x, y)| x ^ y).collect();
        let got = codec.encode(&sum).unwrap();
        prop_assert_eq!(got.as_bytes(), &expect[..]);
    }
}
