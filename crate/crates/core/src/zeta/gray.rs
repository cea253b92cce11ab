//! Enumeration of F_{2^M} in Gray-code order for maps Q: F_{2^M} -> F_2^r
//! of degree at most 2 over F_2, i.e. Q(x+b) + Q(x) + Q(b) + Q(0) is
//! bilinear. Each step flips one coordinate of x and updates Q(x) with a
//! handful of xors, instead of evaluating Q from scratch. Every x is still
//! visited.

use rayon::prelude::*;

use crate::field::FieldElem;

/// Bits of x walked inside one chunk; higher bits are fixed per chunk.
const LOW_BITS: u32 = 12;

fn e(bits: u64) -> FieldElem {
    FieldElem::from_bits_unchecked(bits)
}

/// Number of x in F_{2^m} with q(x) = 0. `q` must be quadratic.
pub fn count_zeros<Q: Fn(FieldElem) -> u64 + Sync>(m: u32, q: &Q) -> u64 {
    let low = m.min(LOW_BITS);
    let q0 = q(FieldElem::ZERO);
    let qb: Vec<u64> = (0..low).map(|j| q(e(1 << j))).collect();
    // d[i][j] = D_{b_i}(b_j), D_b(x) = Q(x+b) + Q(x) + Q(b) + Q(0)
    let d: Vec<Vec<u64>> = (0..low)
        .map(|i| (0..low).map(|j| q(e((1 << i) ^ (1 << j))) ^ qb[i as usize] ^ qb[j as usize] ^ q0).collect())
        .collect();
    let walk = |chunk: u64| -> u64 {
        let x0 = chunk << low;
        let mut u = q(e(x0));
        let qx0 = u;
        let mut w: Vec<u64> = (0..low).map(|i| q(e(x0 ^ (1 << i))) ^ qx0 ^ qb[i as usize] ^ q0).collect();
        let mut zeros = (u == 0) as u64;
        for step in 1u64..(1 << low) {
            let j = step.trailing_zeros() as usize;
            u ^= qb[j] ^ q0 ^ w[j];
            for (wi, di) in w.iter_mut().zip(&d) {
                *wi ^= di[j];
            }
            zeros += (u == 0) as u64;
        }
        zeros
    };
    let chunks = 1u64 << (m - low);
    (0..chunks).into_par_iter().map(walk).sum()
}

/// Reference: evaluate q at every x.
pub fn count_zeros_direct<Q: Fn(FieldElem) -> u64>(m: u32, q: &Q) -> u64 {
    let end = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    (0..=end).filter(|&x| q(e(x)) == 0).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn matches_direct_evaluation() {
        for m in [1u32, 3, 8, 13, 14] {
            let f = make_field(m).unwrap();
            let g = f.generator();
            let c = f.pow(g, 7);
            // Tr(g x^5 + x^3 + c), and a vector-valued variant
            let q1 = |x: FieldElem| f.trace(f.mul(g, f.pow(x, 5)) + f.pow(x, 3) + c) as u64;
            let q2 = |x: FieldElem| (f.mul(x, f.pow(x, 8)) + f.mul(c, f.square(x))).bits() & 0b1011;
            assert_eq!(count_zeros(m, &q1), count_zeros_direct(m, &q1), "m = {m}");
            assert_eq!(count_zeros(m, &q2), count_zeros_direct(m, &q2), "m = {m}");
        }
    }
}
