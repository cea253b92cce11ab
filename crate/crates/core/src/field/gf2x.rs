//! Polynomials over F_2 packed into machine words (bit i is the coefficient
//! of x^i). Only what is needed to pick and validate field moduli.

/// Carry-less product of two 64-bit words.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { clmul_pclmul(a, b) };
        }
    }
    clmul_soft(a, b)
}

#[inline]
pub fn clmul_soft(a: u64, b: u64) -> u128 {
    let (mut small, big) = if a.count_ones() < b.count_ones() { (a, b) } else { (b, a) };
    let big = big as u128;
    let mut acc = 0u128;
    while small != 0 {
        acc ^= big << small.trailing_zeros();
        small &= small - 1;
    }
    acc
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::*;
    let x = _mm_set_epi64x(0, a as i64);
    let y = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(x, y, 0x00);
    let lo = _mm_cvtsi128_si64(r) as u64;
    let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
    ((hi as u128) << 64) | lo as u128
}

#[inline]
pub fn degree(p: u128) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(127 - p.leading_zeros())
    }
}

/// Remainder of `a` modulo `m` (m nonzero).
pub fn rem(mut a: u128, m: u128) -> u128 {
    let dm = degree(m).expect("zero modulus");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Product of two residues modulo `m`, with deg m <= 64.
pub fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(degree(m).unwrap_or(0) <= 64);
    // Residues have degree < 64 unless deg m = 64, where they still fit in 64 bits.
    rem(clmul(a as u64, b as u64), m)
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `m` of degree n is irreducible iff gcd(x^{2^k} - x, m) = 1
/// for every k <= n/2.
pub fn is_irreducible(m: u128) -> bool {
    let n = match degree(m) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    if m & 1 == 0 {
        return false;
    }
    let mut power = 0b10u128; // x
    for _ in 0..n / 2 {
        power = mulmod(power, power, m);
        if gcd(m, power ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

/// The irreducible polynomial of degree n whose bit pattern is smallest.
/// For n = 1 this is x itself.
pub fn smallest_irreducible(n: u32) -> u128 {
    assert!((1..=64).contains(&n));
    let top = 1u128 << n;
    (0..top)
        .map(|low| top | low)
        .find(|&m| is_irreducible(m))
        .expect("irreducible polynomials exist in every degree")
}
