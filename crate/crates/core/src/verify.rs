//! Exhaustive self-checks behind `pyrit verify`.

use std::fmt;

use rand::{RngCore, SeedableRng};

use crate::codec::{oracle_encode, Codec, SymbolBuffer};
use crate::error::Result;
use crate::field::FieldSpec;
use crate::matrix::{cauchy_parity_matrix, is_mds, CodeSpec};
use crate::ring::{ring_mul, IdealA1, RingElem};
use crate::transforms::TransformKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "pass" } else { "FAIL" };
        write!(
            f,
            "{} {}/{} {}",
            self.name, self.passed, self.total, verdict
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub field: FieldSpec,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field.id())?;
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

fn tally(name: &'static str, checks: impl Iterator<Item = bool>) -> SuiteResult {
    let (mut passed, mut total) = (0, 0);
    for ok in checks {
        total += 1;
        passed += usize::from(ok);
    }
    SuiteResult {
        name,
        passed,
        total,
    }
}

fn ring_elements(spec: &FieldSpec) -> impl Iterator<Item = RingElem> {
    (0..1u16 << spec.n()).map(RingElem)
}

/// `phi1(a b) = phi1(a) phi1(b)`, `phi1(a + b) = phi1(a) + phi1(b)` and
/// `phi1_inv(phi1(a)) = a` for every pair.
pub fn homomorphism(ideal: &IdealA1) -> SuiteResult {
    let f = *ideal.spec();
    let n = f.n();
    let pairs = f.elements().flat_map(|a| f.elements().map(move |b| (a, b)));
    tally(
        "homomorphism",
        pairs.map(|(a, b)| {
            let (pa, pb) = (ideal.phi1(a), ideal.phi1(b));
            ideal.phi1(f.mul(a, b)) == ring_mul(pa, pb, n)
                && ideal.phi1(f.add(a, b)) == RingElem(pa.0 ^ pb.0)
                && ideal.phi1_inv(pa) == a
        }),
    )
}

/// Membership test agrees with the image of `phi1` on every ring element.
pub fn a1_characterization(ideal: &IdealA1) -> SuiteResult {
    let f = *ideal.spec();
    let mut image = vec![false; 1 << f.n()];
    for a in f.elements() {
        image[ideal.phi1(a).0 as usize] = true;
    }
    tally(
        "a1-characterization",
        ring_elements(&f).map(|a| ideal.contains(a) == image[a.0 as usize]),
    )
}

/// `theta1^2 = theta1` and `theta1` acts as the identity on the ideal.
pub fn idempotency(ideal: &IdealA1) -> SuiteResult {
    let f = *ideal.spec();
    let n = f.n();
    let t = ideal.theta1();
    let square = std::iter::once(ring_mul(t, t, n) == t);
    let unit = f.elements().map(|a| {
        let pa = ideal.phi1(a);
        ring_mul(t, pa, n) == pa
    });
    tally("idempotency", square.chain(unit))
}

/// Any ring representatives of `a` and `b` multiply to a representative of
/// `a b`, and `phi1(a)` times any representative of `b` lands on
/// `phi1(a b)`.
pub fn mixed_representatives(ideal: &IdealA1) -> SuiteResult {
    let f = *ideal.spec();
    let n = f.n();
    let mut reps: Vec<Vec<RingElem>> = vec![Vec::new(); f.order()];
    for u in ring_elements(&f) {
        reps[ideal.phi1_inv(u).0 as usize].push(u);
    }
    let reps = &reps;
    let cases = f.elements().flat_map(move |a| {
        f.elements().flat_map(move |b| {
            reps[a.0 as usize]
                .iter()
                .flat_map(move |&ra| reps[b.0 as usize].iter().map(move |&rb| (a, b, ra, rb)))
        })
    });
    tally(
        "mixed-representative",
        cases.map(|(a, b, ra, rb)| {
            let ab = f.mul(a, b);
            ideal.phi1_inv(ring_mul(ra, rb, n)) == ab
                && ring_mul(ideal.phi1(a), rb, n) == ideal.phi1(ab)
        }),
    )
}

/// Every Cauchy parity matrix with `k, r` in `1..=6` is MDS.
pub fn mds_grid(spec: &FieldSpec) -> Result<SuiteResult> {
    let mut checks = Vec::new();
    for k in 1..=6 {
        for r in 1..=6 {
            if k + r > spec.order() {
                continue;
            }
            let code = CodeSpec::new(k, r, *spec, TransformKind::Embedding)?;
            checks.push(is_mds(&cauchy_parity_matrix(&code)?));
        }
    }
    Ok(tally("mds-grid", checks.into_iter()))
}

/// Every way of losing up to `r` symbols of a small code, both transforms,
/// plus agreement of the encoder with the reference.
pub fn roundtrips(spec: &FieldSpec) -> Result<SuiteResult> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let size = spec.w() * 8 * 4;
    let mut checks = Vec::new();
    for (k, r) in [(4, 2), (6, 3)] {
        for transform in [TransformKind::Embedding, TransformKind::Parity] {
            let code = CodeSpec::new(k, r, *spec, transform)?;
            let codec = Codec::new(code)?;
            let mut bytes = vec![0u8; k * size];
            rng.fill_bytes(&mut bytes);
            let data = SymbolBuffer::from_bytes(bytes, size, spec)?;
            let parity = codec.encode(&data)?;
            checks.push(parity == oracle_encode(&data, &code)?);
            let all: Vec<&[u8]> = data.symbols().chain(parity.symbols()).collect();
            for mask in 0u32..1 << (k + r) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let survivors: Vec<usize> = (0..k + r).filter(|i| mask >> i & 1 == 1).collect();
                let picked: Vec<&[u8]> = survivors.iter().map(|&i| all[i]).collect();
                let buf = SymbolBuffer::from_symbols(&picked, spec)?;
                checks.push(codec.decode(&buf, &survivors)? == data);
            }
        }
    }
    Ok(tally("roundtrip", checks.into_iter()))
}

/// Runs every suite for one field. `theta1` overrides the idempotent used
/// by the algebra suites, for negative controls.
pub fn run(spec: &FieldSpec, theta1: Option<RingElem>) -> Result<VerifyReport> {
    let ideal = match theta1 {
        Some(t) => IdealA1::with_theta(*spec, t),
        None => IdealA1::new(*spec),
    };
    Ok(VerifyReport {
        field: *spec,
        suites: vec![
            homomorphism(&ideal),
            a1_characterization(&ideal),
            idempotency(&ideal),
            mixed_representatives(&ideal),
            mds_grid(spec)?,
            roundtrips(spec)?,
        ],
    })
}

/// The idempotent with its lowest coefficient flipped.
pub fn corrupted_theta1(spec: &FieldSpec) -> RingElem {
    RingElem(crate::ring::idempotent_theta1(spec).0 ^ 1)
}
