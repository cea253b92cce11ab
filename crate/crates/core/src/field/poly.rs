//! Dense univariate polynomials over a binary field, with root finding.

use super::{BinaryField, FieldElem};

/// Coefficient vector, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn monomial(c: FieldElem, deg: usize) -> Poly {
        let mut coeffs = vec![FieldElem::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    pub fn x() -> Poly {
        Poly::monomial(FieldElem::ONE, 1)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO);
        Poly::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn mul(&self, f: &BinaryField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += f.mul(a, b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, f: &BinaryField, c: FieldElem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self, f: &BinaryField) -> Poly {
        match f.inv(self.lead()) {
            Ok(inv) => self.scale(f, inv),
            Err(_) => Poly::zero(),
        }
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, f: &BinaryField, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv(d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![FieldElem::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, inv);
            q[i - dd] = factor;
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] += f.mul(factor, b);
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, f: &BinaryField, d: &Poly) -> Poly {
        self.divrem(f, d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, f: &BinaryField, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn eval(&self, f: &BinaryField, x: FieldElem) -> FieldElem {
        self.coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| f.mul(acc, x) + c)
    }

    /// x^{2^k} modulo `m`.
    pub fn x_pow_two_pow(f: &BinaryField, k: u32, m: &Poly) -> Poly {
        let mut acc = Poly::x().rem(f, m);
        for _ in 0..k {
            acc = acc.mul(f, &acc).rem(f, m);
        }
        acc
    }
}

/// All roots of `p` lying in the field `f`, sorted by bit pattern.
pub fn roots(f: &BinaryField, p: &Poly) -> Vec<FieldElem> {
    assert!(!p.is_zero(), "roots of the zero polynomial");
    if p.degree() == Some(0) {
        return Vec::new();
    }
    let mut out = if f.degree() == 1 {
        [FieldElem::ZERO, FieldElem::ONE].into_iter().filter(|&x| p.eval(f, x).is_zero()).collect()
    } else {
        // product of the distinct linear factors
        let frob = Poly::x_pow_two_pow(f, f.degree(), p);
        let split = p.gcd(f, &frob.add(&Poly::x()));
        let mut acc = Vec::new();
        split_linear(f, split, &mut acc);
        acc
    };
    out.sort();
    out
}

/// Splits a product of distinct monic linear factors using the trace maps
/// Tr(delta x) with delta = 1, gamma, gamma^2, ...
fn split_linear(f: &BinaryField, p: Poly, out: &mut Vec<FieldElem>) {
    match p.degree() {
        None | Some(0) => {}
        Some(1) => out.push(p.coeffs()[0]),
        Some(d) => {
            let gamma = f.generator();
            let mut delta = FieldElem::ONE;
            for _ in 0..f.degree() {
                let base = Poly::monomial(delta, 1).rem(f, &p);
                let mut term = base.clone();
                let mut tr = base;
                for _ in 1..f.degree() {
                    term = term.mul(f, &term).rem(f, &p);
                    tr = tr.add(&term);
                }
                let h = p.gcd(f, &tr);
                let dh = h.degree().unwrap_or(0);
                if dh > 0 && dh < d {
                    let (rest, _) = p.divrem(f, &h);
                    split_linear(f, h, out);
                    split_linear(f, rest.monic(f), out);
                    return;
                }
                delta = f.mul(delta, gamma);
            }
            unreachable!("trace splitting separates distinct roots")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn roots_of_field_polynomials() {
        let f = make_field(4).unwrap();
        // x^4 + x: the copy of F_4 inside F_16
        let p = Poly::new(vec![FieldElem::ZERO, FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE]);
        let r = roots(&f, &p);
        assert_eq!(r.len(), 4);
        for &x in &r {
            assert_eq!(f.pow(x, 4), x);
        }
        // x^2 + x + 1 has two roots in F_16 and none in F_2
        let q = Poly::new(vec![FieldElem::ONE; 3]);
        assert_eq!(roots(&f, &q).len(), 2);
        assert!(roots(&make_field(1).unwrap(), &q).is_empty());
        assert_eq!(roots(&make_field(3).unwrap(), &q).len(), 0);
    }

    #[test]
    fn roots_match_exhaustive_search() {
        let f = make_field(6).unwrap();
        let mut seed = 12345u64;
        for _ in 0..30 {
            let coeffs: Vec<FieldElem> = (0..7)
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                    FieldElem::from_bits_unchecked((seed >> 40) & 63)
                })
                .collect();
            let p = Poly::new(coeffs);
            if p.is_zero() {
                continue;
            }
            let brute: Vec<_> = f.elements(0, 64).filter(|&x| p.eval(&f, x).is_zero()).collect();
            if p.degree() == Some(0) {
                assert!(brute.is_empty());
                continue;
            }
            assert_eq!(roots(&f, &p), brute);
        }
    }

    #[test]
    fn divrem_identity() {
        let f = make_field(5).unwrap();
        let a = Poly::new((1..9).map(FieldElem::from_bits_unchecked).collect());
        let b = Poly::new(vec![FieldElem::from_bits_unchecked(3), FieldElem::ONE, FieldElem::from_bits_unchecked(7)]);
        let (q, r) = a.divrem(&f, &b);
        assert_eq!(q.mul(&f, &b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
