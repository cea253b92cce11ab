use proptest::prelude::*;
use sscurve::field::{make_field, BinaryField, FieldElem};

/// Schoolbook carry-less product reduced bit by bit.
fn naive_mul(f: &BinaryField, a: u64, b: u64) -> u64 {
    let n = f.degree();
    let mut acc: u128 = 0;
    for i in 0..n {
        if b >> i & 1 == 1 {
            acc ^= (a as u128) << i;
        }
    }
    for i in (n..2 * n).rev() {
        if acc >> i & 1 == 1 {
            acc ^= f.modulus() << (i - n);
        }
    }
    acc as u64
}

fn elem(f: &BinaryField, bits: u64) -> FieldElem {
    let mask = if f.degree() == 64 { u64::MAX } else { (1u64 << f.degree()) - 1 };
    f.elem(bits & mask).unwrap()
}

proptest! {
    #[test]
    fn axioms(n in 1u32..=64, a: u64, b: u64, c: u64) {
        let f = make_field(n).unwrap();
        let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
        prop_assert_eq!(f.mul(a, b).bits(), naive_mul(&f, a.bits(), b.bits()));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.square(a), f.mul(a, a));
        prop_assert_eq!(f.frobenius(a, n as i64), a);
        prop_assert_eq!(f.sqrt(f.square(a)), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
        }
        prop_assert_eq!(f.pow(a, 3), f.mul(a, f.square(a)));
    }

    #[test]
    fn trace_is_additive(n in 1u32..=64, a: u64, b: u64) {
        let f = make_field(n).unwrap();
        let (a, b) = (elem(&f, a), elem(&f, b));
        prop_assert_eq!(f.trace(f.add(a, b)), f.trace(a) ^ f.trace(b));
        // trace(a^2 + a) = 0
        prop_assert_eq!(f.trace(f.add(f.square(a), a)), 0);
    }
}

#[test]
fn hex_round_trip_is_canonical() {
    assert_eq!(FieldElem::from_hex("0x1f").unwrap().to_hex(), "0x1f");
    assert!(FieldElem::from_hex("0x01").is_err());
    assert!(FieldElem::from_hex("1f").is_err());
}
