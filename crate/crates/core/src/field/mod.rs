//! Exact arithmetic in explicit binary fields F_{2^N}, 1 <= N <= 64.
//!
//! An element is a bit vector: bit i is the coefficient of gamma^i, where
//! gamma is the class of x modulo the field's defining polynomial. Every
//! field of a given degree uses the same modulus (the irreducible polynomial
//! with the smallest bit pattern), so values are reproducible across runs.

pub mod embed;
pub mod gf2x;
pub mod linalg;
pub mod poly;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use embed::{extend_and_embed, Embedding};
pub use linalg::{f2_linear_solve, rank_of_rows, LinearMap, LinearSolution};

/// Largest supported extension degree; elements are stored in one word.
pub const MAX_DEGREE: u32 = 64;

/// A field element. Only meaningful together with the [`BinaryField`] it was
/// produced by.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub const fn from_bits_unchecked(bits: u64) -> Self {
        FieldElem(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        parse_hex(s)
            .and_then(|v| u64::try_from(v).ok())
            .map(FieldElem)
            .ok_or_else(|| Error::InvalidInput(format!("bad field element {s:?}")))
    }
}

// addition in characteristic 2 is xor
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for FieldElem {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElem) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FieldElem::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

fn parse_hex(s: &str) -> Option<u128> {
    let digits = s.strip_prefix("0x")?;
    // canonical form only: lowercase, no leading zeros
    if digits.is_empty() || digits.chars().any(|c| c.is_ascii_uppercase()) || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    u128::from_str_radix(digits, 16).ok()
}

/// An explicit field F_{2^N}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryField {
    degree: u32,
    modulus: u128,
    /// modulus minus its leading term
    tail: u64,
    /// trace(gamma^i) stored at bit i
    trace_mask: u64,
}

impl fmt::Debug for BinaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {:#x})", self.degree, self.modulus)
    }
}

static FIELDS: [OnceLock<BinaryField>; MAX_DEGREE as usize] = [const { OnceLock::new() }; MAX_DEGREE as usize];

/// The canonical field of degree `n`.
pub fn make_field(n: u32) -> Result<BinaryField> {
    if n == 0 {
        return Err(Error::InvalidInput("field degree must be positive".into()));
    }
    if n > MAX_DEGREE {
        return Err(Error::Capacity { needed: n as u64, limit: MAX_DEGREE });
    }
    Ok(*FIELDS[n as usize - 1].get_or_init(|| BinaryField::from_modulus(gf2x::smallest_irreducible(n))))
}

/// Same as [`make_field`] for a degree that may not fit in `u32`.
pub fn make_field_checked(n: u64, limit: u32) -> Result<BinaryField> {
    if n > limit.min(MAX_DEGREE) as u64 {
        return Err(Error::Capacity { needed: n, limit: limit.min(MAX_DEGREE) });
    }
    make_field(n as u32)
}

impl BinaryField {
    fn from_modulus(modulus: u128) -> BinaryField {
        let degree = gf2x::degree(modulus).unwrap();
        let tail = (modulus ^ (1u128 << degree)) as u64;
        let mut field = BinaryField { degree, modulus, tail, trace_mask: 0 };
        let mut mask = 0u64;
        for i in 0..degree {
            if field.trace_slow(FieldElem(1 << i)) {
                mask |= 1 << i;
            }
        }
        field.trace_mask = mask;
        field
    }

    /// Parses the JSON form; only canonical moduli are accepted.
    pub fn from_parts(degree: u32, modulus: u128) -> Result<BinaryField> {
        let field = make_field(degree)?;
        if field.modulus != modulus {
            return Err(Error::InvalidInput(format!(
                "modulus {modulus:#x} is not the canonical modulus {:#x} for degree {degree}",
                field.modulus
            )));
        }
        Ok(field)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Number of elements, 2^N.
    pub fn order(&self) -> u128 {
        1u128 << self.degree
    }

    #[inline]
    fn mask(&self) -> u64 {
        if self.degree == 64 {
            u64::MAX
        } else {
            (1u64 << self.degree) - 1
        }
    }

    pub fn elem(&self, bits: u64) -> Result<FieldElem> {
        if bits & !self.mask() != 0 {
            return Err(Error::InvalidInput(format!("{bits:#x} is not an element of GF(2^{})", self.degree)));
        }
        Ok(FieldElem(bits))
    }

    pub fn contains(&self, e: FieldElem) -> bool {
        e.0 & !self.mask() == 0
    }

    /// The class gamma of x; zero when N = 1.
    pub fn generator(&self) -> FieldElem {
        self.reduce(0b10)
    }

    /// Elements with bit patterns in `start..end`, in increasing order.
    pub fn elements(&self, start: u64, end: u64) -> impl Iterator<Item = FieldElem> {
        (start..end).map(FieldElem)
    }

    #[inline]
    fn reduce(&self, mut p: u128) -> FieldElem {
        let n = self.degree;
        loop {
            let hi = p >> n;
            if hi == 0 {
                return FieldElem(p as u64);
            }
            let lo = p & ((1u128 << n) - 1);
            p = lo ^ gf2x::clmul(hi as u64, self.tail);
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.reduce(gf2x::clmul(a.0, b.0))
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, base: FieldElem, exp: u128) -> FieldElem {
        if exp == 0 {
            return FieldElem::ONE;
        }
        if base.is_zero() {
            return FieldElem::ZERO;
        }
        let group = (1u128 << self.degree) - 1;
        let reduced = if exp < group { exp } else { exp % group };
        // a nonzero exponent that is a multiple of the group order gives 1
        let e = if reduced == 0 { (1u128 << self.degree) - 1 } else { reduced };
        let mut acc = FieldElem::ONE;
        for bit in (0..128 - e.leading_zeros()).rev() {
            acc = self.square(acc);
            if (e >> bit) & 1 == 1 {
                acc = self.mul(acc, base);
            }
        }
        acc
    }

    /// Power with an arbitrary-precision exponent, reduced modulo 2^N - 1.
    pub fn pow_big(&self, base: FieldElem, exp: &BigUint) -> FieldElem {
        if exp.is_zero() {
            return FieldElem::ONE;
        }
        if base.is_zero() {
            return FieldElem::ZERO;
        }
        let group = (BigUint::one() << self.degree) - BigUint::one();
        let r = exp.mod_floor(&group);
        let r = if r.is_zero() { group } else { r };
        self.pow(base, r.to_u128().expect("reduced exponent fits"))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, (1u128 << self.degree) - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// e^{2^k}; negative k applies the inverse Frobenius.
    pub fn frobenius(&self, e: FieldElem, k: i64) -> FieldElem {
        let steps = k.rem_euclid(self.degree as i64);
        let mut acc = e;
        for _ in 0..steps {
            acc = self.square(acc);
        }
        acc
    }

    pub fn sqrt(&self, e: FieldElem) -> FieldElem {
        self.frobenius(e, -1)
    }

    fn trace_slow(&self, e: FieldElem) -> bool {
        let mut acc = FieldElem::ZERO;
        let mut cur = e;
        for _ in 0..self.degree {
            acc += cur;
            cur = self.square(cur);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 == 1
    }

    /// Absolute trace to F_2, returned as a bit.
    #[inline]
    pub fn trace(&self, e: FieldElem) -> u8 {
        ((e.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// Smallest d dividing N such that every element lies in F_{2^d}.
    pub fn minimal_subfield_degree(&self, elems: &[FieldElem]) -> u32 {
        (1..=self.degree)
            .filter(|d| self.degree.is_multiple_of(*d))
            .find(|&d| elems.iter().all(|&e| self.frobenius(e, d as i64) == e))
            .unwrap_or(self.degree)
    }
}

/// JSON form of a field: `{"degree": N, "modulus": "0x..."}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldRepr {
    degree: u32,
    modulus: String,
}

impl Serialize for BinaryField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr { degree: self.degree, modulus: format!("{:#x}", self.modulus) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FieldRepr::deserialize(d)?;
        let modulus = parse_hex(&repr.modulus)
            .ok_or_else(|| serde::de::Error::custom(format!("bad modulus {:?}", repr.modulus)))?;
        BinaryField::from_parts(repr.degree, modulus).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> BinaryField {
        make_field(4).unwrap()
    }

    /// Naive F_2[x] product reduced by long division; independent of `reduce`.
    fn naive_mul(a: u64, b: u64, m: u128) -> u64 {
        let mut prod = 0u128;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                prod ^= (a as u128) << i;
            }
        }
        gf2x::rem(prod, m) as u64
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(make_field(4).unwrap().modulus(), 0b10011);
        assert_eq!(make_field(2).unwrap().modulus(), 0b111);
        assert_eq!(make_field(1).unwrap().modulus(), 0b10);
        // brute-force sieve of all sextics: x^6+x+1 is the first irreducible
        let first = (64u128..128).find(|&m| {
            (2u128..8).all(|d| gf2x::rem(m, d) != 0) && gf2x::is_irreducible(m)
        });
        assert_eq!(first, Some(0b1000011));
        assert_eq!(make_field(6).unwrap().modulus(), 0b1000011);
    }

    #[test]
    fn capacity_and_degree_errors() {
        assert!(matches!(make_field(0), Err(Error::InvalidInput(_))));
        assert!(matches!(make_field(65), Err(Error::Capacity { .. })));
        assert!(make_field(64).is_ok());
    }

    #[test]
    fn multiplication_matches_naive() {
        for n in [1u32, 2, 3, 4, 7, 13, 31, 63, 64] {
            let f = make_field(n).unwrap();
            let mask = f.mask();
            let mut x = 0x9e37_79b9_7f4a_7c15u64;
            for _ in 0..200 {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = x & mask;
                let b = x.rotate_left(17) & mask;
                assert_eq!(f.mul(FieldElem(a), FieldElem(b)).bits(), naive_mul(a, b, f.modulus()));
            }
        }
    }

    #[test]
    fn f16_reference_values() {
        let f = f16();
        let a = f.generator();
        assert_eq!(a, FieldElem(0b10));
        let a3 = f.pow(a, 3);
        // alpha * alpha^3 = alpha^4 = alpha + 1
        assert_eq!(f.mul(a, a3), FieldElem(0b11));
        // alpha^9 = alpha^3 + alpha
        assert_eq!(f.pow(a, 9), FieldElem(0b1010));
        assert_eq!(f.frobenius(a, 4), a);
        assert_eq!(f.frobenius(a, -1), f.pow(a, 8));
        assert_eq!(f.frobenius(FieldElem::ZERO, 3), FieldElem::ZERO);
        assert_eq!(f.trace(a), 0);
        assert_eq!(f.trace(FieldElem::ZERO), 0);
        let f4 = make_field(2).unwrap();
        assert_eq!(f4.trace(f4.generator()), 1);
    }

    #[test]
    fn sqrt_inverts_squaring() {
        let f = f16();
        for e in f.elements(0, 16) {
            assert_eq!(f.sqrt(f.square(e)), e);
            assert_eq!(f.square(f.sqrt(e)), e);
        }
    }

    #[test]
    fn inverses_and_division_by_zero() {
        let f = make_field(7).unwrap();
        for e in f.elements(1, 128) {
            assert_eq!(f.mul(e, f.inv(e).unwrap()), FieldElem::ONE);
        }
        assert_eq!(f.inv(FieldElem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn big_exponents_reduce_mod_group_order() {
        let f = f16();
        let a = f.generator();
        let e = BigUint::from(15u32) * BigUint::from(10u32).pow(30) + BigUint::from(7u32);
        assert_eq!(f.pow_big(a, &e), f.pow(a, 7));
        assert_eq!(f.pow_big(a, &BigUint::from(15u32)), FieldElem::ONE);
        assert_eq!(f.pow_big(FieldElem::ZERO, &BigUint::from(3u32)), FieldElem::ZERO);
    }

    #[test]
    fn trace_counts_artin_schreier_solutions() {
        for n in 1..=8 {
            let f = make_field(n).unwrap();
            let size = 1u64 << n;
            let mut sols = vec![0u32; size as usize];
            for y in f.elements(0, size) {
                sols[(f.square(y) + y).bits() as usize] += 1;
            }
            for c in f.elements(0, size) {
                let expected = if f.trace(c) == 0 { 2 } else { 0 };
                assert_eq!(sols[c.bits() as usize], expected);
                assert_eq!(f.trace(c) == 1, f.trace_slow(c));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = f16();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"degree":4,"modulus":"0x13"}"#);
        let back: BinaryField = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<BinaryField>(r#"{"degree":4,"modulus":"0x19"}"#).is_err());
        assert_eq!(FieldElem::from_hex("0xa").unwrap(), FieldElem(10));
        assert!(FieldElem::from_hex("0XA").is_err());
        assert!(FieldElem::from_hex("12").is_err());
    }

    #[test]
    fn subfield_degree() {
        let f = make_field(12).unwrap();
        assert_eq!(f.minimal_subfield_degree(&[FieldElem::ONE]), 1);
        let g = f.generator();
        assert_eq!(f.minimal_subfield_degree(&[g]), 12);
        // an element of order 3 lives in F_4
        let w = f.pow(g, (4095 / 3) as u128);
        assert_eq!(f.minimal_subfield_degree(&[w]), 2);
    }
}
