//! Embeddings between canonical fields F_{2^d} -> F_{2^N} with d | N.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::linalg::LinearMap;
use super::poly::{roots, Poly};
use super::{make_field, BinaryField, FieldElem};
use crate::error::{Error, Result};

/// A field homomorphism `base -> ext`, fixed by the image of the base
/// generator: the smallest root (by bit pattern) of the base modulus in ext.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    base: BinaryField,
    ext: BinaryField,
    /// image of gamma^i at index i
    table: Vec<u64>,
}

type TableCache = Mutex<HashMap<(u32, u32), Vec<u64>>>;

static TABLES: OnceLock<TableCache> = OnceLock::new();

impl Embedding {
    pub fn new(base: BinaryField, ext: BinaryField) -> Result<Embedding> {
        if !ext.degree().is_multiple_of(base.degree()) {
            return Err(Error::InvalidInput(format!(
                "GF(2^{}) does not embed into GF(2^{})",
                base.degree(),
                ext.degree()
            )));
        }
        let key = (base.degree(), ext.degree());
        let cache = TABLES.get_or_init(Default::default);
        if let Some(table) = cache.lock().unwrap().get(&key) {
            return Ok(Embedding { base, ext, table: table.clone() });
        }
        let modulus = Poly::new(
            (0..=base.degree())
                .map(|i| FieldElem::from_bits_unchecked(((base.modulus() >> i) & 1) as u64))
                .collect(),
        );
        let theta = *roots(&ext, &modulus)
            .first()
            .ok_or_else(|| Error::Internal("base modulus has no root in the extension".into()))?;
        let mut table = Vec::with_capacity(base.degree() as usize);
        let mut cur = FieldElem::ONE;
        for _ in 0..base.degree() {
            table.push(cur.bits());
            cur = ext.mul(cur, theta);
        }
        cache.lock().unwrap().insert(key, table.clone());
        Ok(Embedding { base, ext, table })
    }

    pub fn identity(field: BinaryField) -> Embedding {
        let table = (0..field.degree()).map(|i| 1u64 << i).collect();
        Embedding { base: field, ext: field, table }
    }

    pub fn base(&self) -> &BinaryField {
        &self.base
    }

    pub fn ext(&self) -> &BinaryField {
        &self.ext
    }

    #[inline]
    pub fn map(&self, e: FieldElem) -> FieldElem {
        let mut bits = e.bits();
        let mut out = 0u64;
        while bits != 0 {
            out ^= self.table[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        FieldElem::from_bits_unchecked(out)
    }

    /// The base element mapping to `e`, if `e` lies in the image.
    pub fn preimage(&self, e: FieldElem) -> Option<FieldElem> {
        let images: Vec<FieldElem> = self.table.iter().map(|&b| FieldElem::from_bits_unchecked(b)).collect();
        LinearMap::new(&images).preimage(e)
    }
}

/// The field F_{2^{Nk}} together with the embedding of `base` into it.
pub fn extend_and_embed(base: &BinaryField, k: u32) -> Result<(BinaryField, Embedding)> {
    if k == 0 {
        return Err(Error::InvalidInput("extension degree must be positive".into()));
    }
    let degree = base.degree() as u64 * k as u64;
    if degree > super::MAX_DEGREE as u64 {
        return Err(Error::Capacity { needed: degree, limit: super::MAX_DEGREE });
    }
    let ext = make_field(degree as u32)?;
    let emb = Embedding::new(*base, ext)?;
    Ok((ext, emb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_into_f4() {
        let f2 = make_field(1).unwrap();
        let (ext, emb) = extend_and_embed(&f2, 2).unwrap();
        assert_eq!(ext.degree(), 2);
        assert_eq!(emb.map(FieldElem::ZERO), FieldElem::ZERO);
        assert_eq!(emb.map(FieldElem::ONE), FieldElem::ONE);
    }

    #[test]
    fn f4_into_f16_is_a_homomorphism() {
        let f4 = make_field(2).unwrap();
        let (f16, emb) = extend_and_embed(&f4, 2).unwrap();
        let g = emb.map(f4.generator());
        assert_eq!(f16.square(g) + g + FieldElem::ONE, FieldElem::ZERO);
        for a in f4.elements(0, 4) {
            for b in f4.elements(0, 4) {
                assert_eq!(emb.map(f4.mul(a, b)), f16.mul(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(a + b), emb.map(a) + emb.map(b));
            }
        }
    }

    #[test]
    fn random_pairs_respect_multiplication() {
        let base = make_field(5).unwrap();
        let (ext, emb) = extend_and_embed(&base, 3).unwrap();
        let mut s = 7u64;
        for _ in 0..100 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = FieldElem::from_bits_unchecked((s >> 20) & 31);
            let b = FieldElem::from_bits_unchecked((s >> 40) & 31);
            assert_eq!(emb.map(base.mul(a, b)), ext.mul(emb.map(a), emb.map(b)));
        }
    }

    #[test]
    fn image_is_the_fixed_subfield() {
        let base = make_field(3).unwrap();
        let (ext, emb) = extend_and_embed(&base, 2).unwrap();
        let image: Vec<_> = base.elements(0, 8).map(|e| emb.map(e)).collect();
        for e in ext.elements(0, 64) {
            let fixed = ext.frobenius(e, 3) == e;
            assert_eq!(fixed, image.contains(&e));
            assert_eq!(emb.preimage(e).is_some(), fixed);
        }
    }

    #[test]
    fn capacity_error() {
        let base = make_field(40).unwrap();
        assert!(matches!(extend_and_embed(&base, 2), Err(Error::Capacity { needed: 80, .. })));
    }
}
