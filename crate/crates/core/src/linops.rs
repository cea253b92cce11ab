//! 2-linearized polynomials sum a_i x^{2^i}, sparse ordinary polynomials,
//! and Artin-Schreier reduction of right-hand sides of y^2 + y = f(x).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::linalg::LinearMap;
use crate::field::{BinaryField, Embedding, FieldElem};

/// Cap on N*k explored when searching for a splitting field.
const SPLITTING_SEARCH_LIMIT: u64 = 1 << 16;

/// sum_i a_i x^{2^i}; a_i is stored at index i, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinPoly {
    field: BinaryField,
    coeffs: Vec<FieldElem>,
}

fn check_same(a: &BinaryField, b: &BinaryField) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch { left: a.degree(), right: b.degree() });
    }
    Ok(())
}

impl LinPoly {
    pub fn new(field: BinaryField, mut coeffs: Vec<FieldElem>) -> Result<LinPoly> {
        if let Some(bad) = coeffs.iter().find(|c| !field.contains(**c)) {
            return Err(Error::InvalidInput(format!("coefficient {bad} outside GF(2^{})", field.degree())));
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(LinPoly { field, coeffs })
    }

    pub fn zero(field: BinaryField) -> LinPoly {
        LinPoly { field, coeffs: Vec::new() }
    }

    /// c x^{2^i}
    pub fn monomial(field: BinaryField, i: usize, c: FieldElem) -> LinPoly {
        let mut coeffs = vec![FieldElem::ZERO; i + 1];
        coeffs[i] = c;
        LinPoly::new(field, coeffs).expect("coefficient checked by caller")
    }

    /// The identity map x.
    pub fn identity(field: BinaryField) -> LinPoly {
        LinPoly::monomial(field, 0, FieldElem::ONE)
    }

    /// Polynomial with F_2 coefficients given by the set bits of `mask`
    /// (bit i set means x^{2^i} is present).
    pub fn from_f2_mask(field: BinaryField, mask: u64) -> LinPoly {
        let coeffs = (0..64 - mask.leading_zeros()).map(|i| FieldElem::from_bits_unchecked((mask >> i) & 1)).collect();
        LinPoly::new(field, coeffs).unwrap()
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The 2-degree h (x^{2^h} is the top term), None for zero.
    pub fn two_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_separable(&self) -> bool {
        !self.coeff(0).is_zero()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FieldElem::ONE)
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        let mut acc = FieldElem::ZERO;
        let mut pow = x;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pow = f.square(pow);
            }
            if !c.is_zero() {
                acc += f.mul(c, pow);
            }
        }
        acc
    }

    pub fn add(&self, other: &LinPoly) -> Result<LinPoly> {
        check_same(&self.field, &other.field)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        LinPoly::new(self.field, (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, c: FieldElem) -> LinPoly {
        LinPoly::new(self.field, self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect()).unwrap()
    }

    /// self(other(x)).
    pub fn compose(&self, other: &LinPoly) -> Result<LinPoly> {
        check_same(&self.field, &other.field)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(LinPoly::zero(*f));
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += f.mul(a, f.frobenius(b, i as i64));
            }
        }
        LinPoly::new(*f, out)
    }

    /// (self(x))^{2^k} as a linearized polynomial.
    pub fn twist(&self, k: usize) -> LinPoly {
        if self.is_zero() {
            return self.clone();
        }
        let f = &self.field;
        let mut coeffs = vec![FieldElem::ZERO; k];
        coeffs.extend(self.coeffs.iter().map(|&a| f.frobenius(a, k as i64)));
        LinPoly::new(*f, coeffs).unwrap()
    }

    /// Applies the coefficient automorphism c -> c^{2^k}.
    pub fn conjugate(&self, k: i64) -> LinPoly {
        let f = &self.field;
        LinPoly::new(*f, self.coeffs.iter().map(|&a| f.frobenius(a, k)).collect()).unwrap()
    }

    pub fn embed(&self, emb: &Embedding) -> Result<LinPoly> {
        check_same(&self.field, emb.base())?;
        LinPoly::new(*emb.ext(), self.coeffs.iter().map(|&a| emb.map(a)).collect())
    }

    /// Images of gamma^0 .. gamma^{N-1} under the map x -> self(x).
    pub fn images(&self) -> Vec<FieldElem> {
        (0..self.field.degree()).map(|i| self.eval(FieldElem::from_bits_unchecked(1 << i))).collect()
    }

    pub fn linear_map(&self) -> LinearMap {
        LinearMap::new(&self.images())
    }

    /// F_2-basis of the roots of `self` lying in the field of `emb.ext()`.
    pub fn kernel(&self, emb: &Embedding) -> Result<Vec<FieldElem>> {
        if self.is_zero() {
            return Err(Error::InvalidInput("kernel of the zero polynomial".into()));
        }
        Ok(self.embed(emb)?.linear_map().kernel().to_vec())
    }

    /// Least k such that every root lies in F_{2^{Nk}}, N the degree of the
    /// coefficient field. Decided by x^{2^{Nk}} = x modulo self, computed in
    /// the space of linearized residues.
    pub fn splitting_degree(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::InvalidInput("splitting degree of the zero polynomial".into()));
        }
        if !self.is_separable() {
            return Err(Error::Inseparable);
        }
        let h = self.two_degree().unwrap();
        if h == 0 {
            return Ok(1);
        }
        let f = &self.field;
        let lead_inv = f.inv(self.coeffs[h])?;
        // x^{2^h} == lead^{-1} sum_{i<h} a_i x^{2^i}
        let top: Vec<FieldElem> = self.coeffs[..h].iter().map(|&a| f.mul(a, lead_inv)).collect();
        let mut residue = vec![FieldElem::ZERO; h];
        residue[0] = FieldElem::ONE;
        let n = f.degree() as u64;
        let mut steps = 0u64;
        loop {
            for _ in 0..n {
                let carry = f.square(residue[h - 1]);
                for i in (1..h).rev() {
                    residue[i] = f.square(residue[i - 1]);
                }
                residue[0] = FieldElem::ZERO;
                if !carry.is_zero() {
                    for (r, &t) in residue.iter_mut().zip(&top) {
                        *r += f.mul(carry, t);
                    }
                }
            }
            steps += n;
            if residue[0] == FieldElem::ONE && residue[1..].iter().all(|c| c.is_zero()) {
                return Ok(steps / n);
            }
            if steps >= SPLITTING_SEARCH_LIMIT {
                return Err(Error::Capacity { needed: steps, limit: SPLITTING_SEARCH_LIMIT as u32 });
            }
        }
    }

    /// Right division in the ring of linearized polynomials under
    /// composition: self = q o d + r with 2-degree of r below that of d.
    pub fn right_divrem(&self, d: &LinPoly) -> Result<(LinPoly, LinPoly)> {
        check_same(&self.field, &d.field)?;
        let f = &self.field;
        let e = d.two_degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        let mut q = vec![FieldElem::ZERO; r.len().saturating_sub(e)];
        for top in (e..r.len()).rev() {
            if r[top].is_zero() {
                continue;
            }
            let shift = top - e;
            let c = f.div(r[top], f.frobenius(d.coeffs[e], shift as i64))?;
            q[shift] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[j + shift] += f.mul(c, f.frobenius(b, shift as i64));
            }
        }
        r.truncate(e);
        Ok((LinPoly::new(*f, q)?, LinPoly::new(*f, r)?))
    }

    /// Monic right gcd: its roots are the common roots of the inputs.
    pub fn right_gcd(&self, other: &LinPoly) -> Result<LinPoly> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.right_divrem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let inv = self.field.inv(*a.coeffs.last().unwrap())?;
        Ok(a.scale(inv))
    }

    /// x * self(x) as a sparse polynomial.
    pub fn times_x(&self) -> Result<SparsePoly> {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = 1u64.checked_shl(i as u32).filter(|_| i < 63).ok_or_else(|| overflow(i))?;
                terms.push((e + 1, c));
            }
        }
        Ok(SparsePoly::from_terms(self.field, terms))
    }
}

fn overflow(i: usize) -> Error {
    Error::Capacity { needed: i as u64, limit: 63 }
}

/// Polynomial with few nonzero terms at possibly very large exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: BinaryField,
    terms: BTreeMap<u64, FieldElem>,
}

impl SparsePoly {
    pub fn zero(field: BinaryField) -> SparsePoly {
        SparsePoly { field, terms: BTreeMap::new() }
    }

    /// Sums the given terms, dropping zero coefficients.
    pub fn from_terms(field: BinaryField, terms: impl IntoIterator<Item = (u64, FieldElem)>) -> SparsePoly {
        let mut p = SparsePoly::zero(field);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn monomial(field: BinaryField, e: u64, c: FieldElem) -> SparsePoly {
        SparsePoly::from_terms(field, [(e, c)])
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn add_term(&mut self, e: u64, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert(FieldElem::ZERO);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, FieldElem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: u64) -> FieldElem {
        self.terms.get(&e).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        check_same(&self.field, &other.field)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElem) -> SparsePoly {
        let f = self.field;
        SparsePoly::from_terms(f, self.terms().map(|(e, a)| (e, f.mul(a, c))))
    }

    /// self^{2^k}: coefficients raised to 2^k, exponents multiplied by 2^k.
    pub fn frobenius_power(&self, k: u32) -> Result<SparsePoly> {
        let f = self.field;
        let mut terms = Vec::with_capacity(self.len());
        for (e, c) in self.terms() {
            let e2 = e.checked_mul(1u64.checked_shl(k).filter(|_| k < 64).ok_or_else(|| overflow(k as usize))?);
            terms.push((e2.ok_or_else(|| overflow(k as usize))?, f.frobenius(c, k as i64)));
        }
        Ok(SparsePoly::from_terms(f, terms))
    }

    pub fn square(&self) -> Result<SparsePoly> {
        self.frobenius_power(1)
    }

    /// Coefficient automorphism c -> c^{2^k}, exponents unchanged.
    pub fn conjugate(&self, k: i64) -> SparsePoly {
        let f = self.field;
        SparsePoly::from_terms(f, self.terms().map(|(e, c)| (e, f.frobenius(c, k))))
    }

    pub fn embed(&self, emb: &Embedding) -> Result<SparsePoly> {
        check_same(&self.field, emb.base())?;
        Ok(SparsePoly::from_terms(*emb.ext(), self.terms().map(|(e, c)| (e, emb.map(c)))))
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        self.terms().fold(FieldElem::ZERO, |acc, (e, c)| acc + f.mul(c, f.pow(x, e as u128)))
    }

    /// The canonical member of the class f + {h^2 + h}: only odd exponents,
    /// plus a constant that is 0 when its trace vanishes and otherwise the
    /// smallest field element of trace 1.
    pub fn as_reduce(&self) -> SparsePoly {
        let f = self.field;
        let mut work = self.terms.clone();
        let mut out = SparsePoly::zero(f);
        while let Some((e, c)) = work.pop_last() {
            if e == 0 {
                if f.trace(c) == 1 {
                    out.add_term(0, smallest_trace_one(&f));
                }
            } else if e % 2 == 1 {
                out.add_term(e, c);
            } else {
                let root = f.sqrt(c);
                let slot = work.entry(e / 2).or_insert(FieldElem::ZERO);
                *slot += root;
                if slot.is_zero() {
                    work.remove(&(e / 2));
                }
            }
        }
        out
    }

    /// Genus of the smooth complete model of y^2 + y = self.
    pub fn as_genus(&self) -> Result<u64> {
        let reduced = self.as_reduce();
        match reduced.degree() {
            None => Err(Error::ReducibleCover),
            Some(0) => Ok(0),
            Some(d) => Ok((d - 1) / 2),
        }
    }
}

fn smallest_trace_one(f: &BinaryField) -> FieldElem {
    (0..f.degree()).map(|i| FieldElem::from_bits_unchecked(1 << i)).find(|&e| f.trace(e) == 1).expect("trace is onto")
}
