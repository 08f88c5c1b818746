//! The ring `R = F2[x]/(x^n + 1)` and the ideal inside it that is isomorphic
//! to the field.
//!
//! With `p(x)` the field modulus and `x^n + 1 = p(x) q(x)`, the ring splits
//! into the ideal `A1` generated by `q(x)` (a copy of the field) and the
//! ideal generated by `p(x)`. Multiplication by a ring element is a sum of
//! cyclic rotations, so any representative of a field element can be used
//! as long as it reduces to that element modulo `p(x)`; the sparse transform
//! picks the lightest one.

use std::fmt;

use crate::field::{poly_rem, FieldElem, FieldSpec, ModulusKind};

/// An element of `F2[x]/(x^n + 1)`; bit `i` is the coefficient of `x^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RingElem(pub u16);

impl RingElem {
    pub const ZERO: RingElem = RingElem(0);
    pub const ONE: RingElem = RingElem(1);

    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn bit(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    /// Multiplication by `x^shift` in a ring of length `n`.
    #[inline]
    pub fn rotate(self, shift: usize, n: usize) -> RingElem {
        let shift = shift % n;
        if shift == 0 {
            return self;
        }
        let mask = (1u32 << n) - 1;
        let v = u32::from(self.0);
        RingElem((((v << shift) | (v >> (n - shift))) & mask) as u16)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("0");
        }
        let mut first = true;
        for i in 0..16 {
            if self.bit(i) {
                if !first {
                    f.write_str("+")?;
                }
                first = false;
                match i {
                    0 => f.write_str("1")?,
                    1 => f.write_str("x")?,
                    _ => write!(f, "x^{i}")?,
                }
            }
        }
        Ok(())
    }
}

/// Cyclic convolution modulo `x^n + 1`.
pub fn ring_mul(a: RingElem, b: RingElem, n: usize) -> RingElem {
    let mut acc = RingElem::ZERO;
    for shift in 0..n {
        if a.bit(shift) {
            acc.0 ^= b.rotate(shift, n).0;
        }
    }
    acc
}

/// A ring element viewed as the set of rotations it applies. Multiplying
/// by the element xors together the rotations of the other operand by each
/// shift; as a binary matrix it is a union of (wrapped) diagonals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftSet {
    shifts: Vec<u8>,
    n: usize,
}

impl ShiftSet {
    #[inline]
    pub fn shifts(&self) -> &[u8] {
        &self.shifts
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// Product of the represented element with `b`, as a xor of rotations.
    pub fn apply(&self, b: RingElem) -> RingElem {
        self.shifts.iter().fold(RingElem::ZERO, |acc, &s| {
            RingElem(acc.0 ^ b.rotate(s.into(), self.n).0)
        })
    }
}

pub fn to_shift_set(a: RingElem, n: usize) -> ShiftSet {
    ShiftSet {
        shifts: (0..n).filter(|&i| a.bit(i)).map(|i| i as u8).collect(),
        n,
    }
}

/// The ideal of the ring isomorphic to the field, with its idempotent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealA1 {
    spec: FieldSpec,
    theta1: RingElem,
}

impl IdealA1 {
    pub fn new(spec: FieldSpec) -> Self {
        IdealA1 {
            spec,
            theta1: idempotent_theta1(&spec),
        }
    }

    /// Same ideal with an arbitrary element used in place of the idempotent.
    /// Only useful for negative tests of the verification suites.
    pub fn with_theta(spec: FieldSpec, theta1: RingElem) -> Self {
        IdealA1 { spec, theta1 }
    }

    #[inline]
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn theta1(&self) -> RingElem {
        self.theta1
    }

    /// Field to ideal isomorphism: `b(x) * theta1(x)`.
    pub fn phi1(&self, b: FieldElem) -> RingElem {
        ring_mul(RingElem(b.0.into()), self.theta1, self.spec.n())
    }

    pub fn phi1_inv(&self, a: RingElem) -> FieldElem {
        phi1_inv(a, &self.spec)
    }

    pub fn contains(&self, a: RingElem) -> bool {
        in_ideal_a1(a, &self.spec)
    }
}

/// Idempotent of the field ideal: the modulus plus one.
pub fn idempotent_theta1(spec: &FieldSpec) -> RingElem {
    RingElem((spec.modulus() ^ 1) as u16)
}

pub fn phi1(b: FieldElem, spec: &FieldSpec) -> RingElem {
    ring_mul(RingElem(b.0.into()), idempotent_theta1(spec), spec.n())
}

/// Reduction modulo the field polynomial. Total on the ring.
pub fn phi1_inv(a: RingElem, spec: &FieldSpec) -> FieldElem {
    FieldElem(poly_rem(u64::from(a.0), u64::from(spec.modulus())) as u8)
}

/// Membership in the field ideal: even weight for the all-one modulus, even
/// weight within each residue class mod `s` for the spaced modulus.
pub fn in_ideal_a1(a: RingElem, spec: &FieldSpec) -> bool {
    match spec.kind() {
        ModulusKind::Aop => a.weight().is_multiple_of(2),
        ModulusKind::Esp => {
            let s = spec.spacing();
            (0..s).all(|class| (class..spec.n()).step_by(s).filter(|&i| a.bit(i)).count() % 2 == 0)
        }
    }
}

/// Ring elements with no component in the field ideal: the `2^{n-w}`
/// multiples of the modulus.
pub fn complement_elements(spec: &FieldSpec) -> Vec<RingElem> {
    let n = spec.n();
    let p = RingElem(spec.modulus() as u16);
    (0u16..1 << (n - spec.w()))
        .map(|m| ring_mul(RingElem(m), p, n))
        .collect()
}

/// Minimum-weight ring representative of `u`, ties broken by smallest
/// integer value.
pub fn sparse_transform(u: FieldElem, spec: &FieldSpec) -> RingElem {
    let base = phi1(u, spec);
    complement_elements(spec)
        .into_iter()
        .map(|e| RingElem(base.0 ^ e.0))
        .min_by_key(|r| (r.weight(), r.0))
        .expect("complement set contains zero")
}

/// Precomputed sparse representatives for every field element.
#[derive(Debug, Clone)]
pub struct SparseTable {
    reps: Vec<RingElem>,
}

impl SparseTable {
    pub fn new(spec: &FieldSpec) -> Self {
        SparseTable {
            reps: spec.elements().map(|u| sparse_transform(u, spec)).collect(),
        }
    }

    #[inline]
    pub fn get(&self, u: FieldElem) -> RingElem {
        self.reps[usize::from(u.0)]
    }
}
