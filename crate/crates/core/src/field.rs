//! Arithmetic in the two small binary fields the codec works over.
//!
//! * `GF(2^4)` defined by the all-one polynomial `x^4 + x^3 + x^2 + x + 1`,
//!   which divides `x^5 + 1`.
//! * `GF(2^6)` defined by the 3-spaced polynomial `x^6 + x^3 + 1`, which
//!   divides `x^9 + 1`.
//!
//! Elements are stored as integers with bit `i` holding the coefficient of
//! `x^i`. The admissibility checks ([`validate_aop`], [`validate_esp`]) work
//! for arbitrary degrees so the choice of these two moduli can be audited.

use std::fmt;

use crate::error::{Error, Result};

/// Shape of the field modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModulusKind {
    /// All-one polynomial `x^w + ... + x + 1`.
    Aop,
    /// Equally spaced polynomial `p(x^s)` with `p` an all-one polynomial.
    Esp,
}

/// Identifier of the supported field instances, as stored in shard headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldId {
    Gf16,
    Gf64,
}

impl FieldId {
    pub fn to_byte(self) -> u8 {
        match self {
            FieldId::Gf16 => 0,
            FieldId::Gf64 => 1,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(FieldId::Gf16),
            1 => Some(FieldId::Gf64),
            _ => None,
        }
    }

    pub fn spec(self) -> FieldSpec {
        match self {
            FieldId::Gf16 => FieldSpec::gf16(),
            FieldId::Gf64 => FieldSpec::gf64(),
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldId::Gf16 => f.write_str("gf16"),
            FieldId::Gf64 => f.write_str("gf64"),
        }
    }
}

impl std::str::FromStr for FieldId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gf16" => Ok(FieldId::Gf16),
            "gf64" => Ok(FieldId::Gf64),
            other => Err(format!("unknown field `{other}` (expected gf16 or gf64)")),
        }
    }
}

/// Parameters of a field `GF(2^w)` together with the ring `F2[x]/(x^n + 1)`
/// it embeds into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    w: u32,
    n: u32,
    kind: ModulusKind,
    s: u32,
    r_esp: u32,
    modulus: u32,
}

impl FieldSpec {
    /// `GF(2^4)` modulo `x^4 + x^3 + x^2 + x + 1`, ring length 5.
    pub const fn gf16() -> Self {
        FieldSpec {
            w: 4,
            n: 5,
            kind: ModulusKind::Aop,
            s: 1,
            r_esp: 4,
            modulus: 0b1_1111,
        }
    }

    /// `GF(2^6)` modulo `x^6 + x^3 + 1`, ring length 9.
    pub const fn gf64() -> Self {
        FieldSpec {
            w: 6,
            n: 9,
            kind: ModulusKind::Esp,
            s: 3,
            r_esp: 2,
            modulus: 0b100_1001,
        }
    }

    pub fn id(&self) -> FieldId {
        match self.kind {
            ModulusKind::Aop => FieldId::Gf16,
            ModulusKind::Esp => FieldId::Gf64,
        }
    }

    /// Field degree.
    #[inline]
    pub fn w(&self) -> usize {
        self.w as usize
    }

    /// Ring length.
    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn kind(&self) -> ModulusKind {
        self.kind
    }

    /// Spacing of the modulus (1 for the all-one polynomial).
    #[inline]
    pub fn spacing(&self) -> usize {
        self.s as usize
    }

    /// Number of `s`-blocks in the modulus degree.
    #[inline]
    pub fn blocks(&self) -> usize {
        self.r_esp as usize
    }

    /// Modulus as a bit vector of length `w + 1`.
    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements.
    #[inline]
    pub fn order(&self) -> usize {
        1 << self.w
    }

    #[inline]
    pub(crate) fn mask(&self) -> u32 {
        (1 << self.w) - 1
    }

    /// All field elements in integer order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order() as u8).map(FieldElem)
    }

    /// Builds an element, rejecting values with bits at or above `w`.
    pub fn elem(&self, value: u8) -> Result<FieldElem> {
        if u32::from(value) > self.mask() {
            return Err(Error::InvalidParams(format!(
                "{value:#x} is not an element of GF(2^{})",
                self.w
            )));
        }
        Ok(FieldElem(value))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        gf_add(a, b)
    }

    /// Carry-less product reduced modulo the field polynomial.
    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let product = clmul(u64::from(a.0), u64::from(b.0));
        FieldElem(poly_rem(product, u64::from(self.modulus)) as u8)
    }

    /// Multiplicative inverse by exhaustive search; fields have at most 64
    /// elements.
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        self.elements()
            .skip(1)
            .find(|&b| self.mul(a, b) == FieldElem::ONE)
            .ok_or(Error::ZeroInverse)
    }

    pub fn pow(&self, a: FieldElem, mut e: u32) -> FieldElem {
        let mut acc = FieldElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The `w x w` binary matrix of multiplication by `a`: column `j` holds the
    /// coefficients of `a * x^j`.
    pub fn to_bitmatrix(&self, a: FieldElem) -> BitMatrix {
        let w = self.w();
        let mut m = BitMatrix::zeros(w, w);
        for j in 0..w {
            let col = self.mul(a, FieldElem(1 << j));
            for i in 0..w {
                if col.bit(i) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }
}

/// A field element; bit `i` is the coefficient of `x^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(pub u8);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn bit(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02x}", self.0)
    }
}

#[inline]
pub fn gf_add(a: FieldElem, b: FieldElem) -> FieldElem {
    FieldElem(a.0 ^ b.0)
}

#[inline]
pub fn gf_mul(a: FieldElem, b: FieldElem, spec: &FieldSpec) -> FieldElem {
    spec.mul(a, b)
}

#[inline]
pub fn gf_inv(a: FieldElem, spec: &FieldSpec) -> Result<FieldElem> {
    spec.inv(a)
}

#[inline]
pub fn field_to_bitmatrix(a: FieldElem, spec: &FieldSpec) -> BitMatrix {
    spec.to_bitmatrix(a)
}

/// Dense row-major matrix over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            bits: vec![false; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.cols + col] = value;
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn row_weight(&self, row: usize) -> usize {
        self.bits[row * self.cols..(row + 1) * self.cols]
            .iter()
            .filter(|&&b| b)
            .count()
    }

    /// Matrix-vector product over GF(2); `v` is a bit vector of length `cols`
    /// packed into an integer (bit `j` = entry `j`).
    pub fn mul_vec(&self, v: u64) -> u64 {
        let mut out = 0u64;
        for i in 0..self.rows {
            let mut acc = false;
            for j in 0..self.cols {
                acc ^= self.get(i, j) && (v >> j) & 1 == 1;
            }
            if acc {
                out |= 1 << i;
            }
        }
        out
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "bit matrix shapes do not chain");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = false;
                for l in 0..self.cols {
                    acc ^= self.get(i, l) && other.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// Plain GF(2)[x] helpers on integer bit vectors. Degrees stay below 64.

/// Carry-less multiplication. Inputs must have degree < 32.
pub(crate) fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut a = a;
    let mut i = 0;
    while a != 0 {
        if a & 1 == 1 {
            acc ^= b << i;
        }
        a >>= 1;
        i += 1;
    }
    acc
}

#[inline]
pub(crate) fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub(crate) fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m).expect("division by the zero polynomial");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Brute-force irreducibility: trial division by every polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible(p: u64) -> bool {
    let Some(d) = degree(p) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let half = d / 2;
    for divisor in 2u64..(1u64 << (half + 1)) {
        if poly_rem(p, divisor) == 0 {
            return false;
        }
    }
    true
}

/// The all-one polynomial of degree `w`.
pub fn all_one_poly(w: u32) -> u64 {
    (1u64 << (w + 1)) - 1
}

/// The `s`-spaced polynomial `x^{s r} + x^{s (r-1)} + ... + x^s + 1`.
pub fn spaced_poly(s: u32, r: u32) -> u64 {
    (0..=r).fold(0u64, |acc, i| acc | 1u64 << (s * i))
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m < 2 || a.is_multiple_of(m) {
        return None;
    }
    let mut x = a % m;
    for k in 1..m {
        if x == 1 {
            return Some(k);
        }
        x = x * a % m;
    }
    None
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// True iff the all-one polynomial of degree `w` is irreducible: `w + 1` is
/// prime and 2 has multiplicative order `w` modulo `w + 1`. Degree 1 (`x + 1`)
/// is irreducible trivially.
pub fn validate_aop(w: u32) -> bool {
    if w == 1 {
        return true;
    }
    let m = u64::from(w) + 1;
    is_prime(m) && multiplicative_order(2, m) == Some(u64::from(w))
}

/// Arithmetic irreducibility criterion for `s`-spaced polynomials with
/// `s = (r+1)^{t-1}`, `t >= 2`, and `r + 1` an odd prime.
///
/// Returns `None` outside that range (`s == 1` is the all-one case, and
/// `r == 1` falls outside the criterion's hypotheses).
pub fn esp_criterion(s: u32, r: u32) -> Option<bool> {
    if s <= 1 || r < 2 {
        return None;
    }
    let base = u64::from(r) + 1;
    // s = base^(t-1)
    let mut power = 1u64;
    let mut t_minus_1 = 0u32;
    while power < u64::from(s) {
        power *= base;
        t_minus_1 += 1;
    }
    if power != u64::from(s) {
        return Some(false);
    }
    let t = t_minus_1 + 1;
    let exp = u64::from(r) * base.pow(t - 2);
    let modulus = base.pow(t);
    Some(validate_aop(r) && pow_mod(2, exp, modulus) != 1)
}

/// True iff the `s`-spaced polynomial of degree `s r` is irreducible, by
/// trial division.
pub fn validate_esp(s: u32, r: u32) -> bool {
    if s == 0 || r == 0 || s * r > 62 {
        return false;
    }
    is_irreducible(spaced_poly(s, r))
}
