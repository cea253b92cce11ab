//! F_2-linear algebra on field elements viewed as bit vectors.

use super::FieldElem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub kernel: Vec<FieldElem>,
    pub solution: Option<FieldElem>,
}

/// Echelon form of an F_2-linear map given by the images of the unit
/// vectors. Reusable for many membership queries.
#[derive(Debug, Clone)]
pub struct LinearMap {
    /// (image, preimage combination), sorted by descending leading bit of image
    pivots: Vec<(u64, u64)>,
    kernel: Vec<FieldElem>,
}

#[inline]
fn top_bit(v: u64) -> u32 {
    63 - v.leading_zeros()
}

impl LinearMap {
    pub fn new(images: &[FieldElem]) -> LinearMap {
        assert!(images.len() <= 64);
        // slot b holds the pivot row whose leading bit is b
        let mut slots: [Option<(u64, u64)>; 64] = [None; 64];
        let mut kernel = Vec::new();
        for (i, img) in images.iter().enumerate() {
            let mut v = img.bits();
            let mut comb = 1u64 << i;
            while v != 0 {
                let b = top_bit(v);
                match slots[b as usize] {
                    Some((pv, pc)) => {
                        v ^= pv;
                        comb ^= pc;
                    }
                    None => break,
                }
            }
            if v == 0 {
                kernel.push(FieldElem::from_bits_unchecked(comb));
            } else {
                slots[top_bit(v) as usize] = Some((v, comb));
            }
        }
        let pivots = slots.iter().rev().flatten().copied().collect();
        LinearMap { pivots, kernel }
    }

    pub fn kernel(&self) -> &[FieldElem] {
        &self.kernel
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A preimage of `target`, if it lies in the image.
    pub fn preimage(&self, target: FieldElem) -> Option<FieldElem> {
        let mut t = target.bits();
        let mut sol = 0u64;
        for &(v, c) in &self.pivots {
            if t == 0 {
                break;
            }
            if (t >> top_bit(v)) & 1 == 1 {
                t ^= v;
                sol ^= c;
            }
        }
        (t == 0).then_some(FieldElem::from_bits_unchecked(sol))
    }

    /// Reduction of `target` modulo the image: an F_2-linear projection
    /// whose kernel is exactly the image.
    #[inline]
    pub fn residue(&self, target: FieldElem) -> u64 {
        let mut t = target.bits();
        for &(v, _) in &self.pivots {
            if (t >> top_bit(v)) & 1 == 1 {
                t ^= v;
            }
        }
        t
    }

    #[inline]
    pub fn in_image(&self, target: FieldElem) -> bool {
        let mut t = target.bits();
        for &(v, _) in &self.pivots {
            if t == 0 {
                return true;
            }
            if (t >> top_bit(v)) & 1 == 1 {
                t ^= v;
            }
        }
        t == 0
    }
}

/// Kernel basis of the map, and one solution of `map(x) = target` if any.
pub fn f2_linear_solve(images: &[FieldElem], target: FieldElem) -> LinearSolution {
    let map = LinearMap::new(images);
    LinearSolution { solution: map.preimage(target), kernel: map.kernel }
}

/// Rank over F_2 of a set of bit vectors of arbitrary length.
pub fn rank_of_rows(rows: &[Vec<u64>]) -> usize {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let lead = |r: &Vec<u64>| -> Option<usize> {
        r.iter().enumerate().rev().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + top_bit(*w) as usize)
    };
    for row in rows {
        let mut r = row.clone();
        while let Some(l) = lead(&r) {
            match basis.iter().find(|b| lead(b) == Some(l)) {
                Some(b) => {
                    for (x, y) in r.iter_mut().zip(b) {
                        *x ^= *y;
                    }
                }
                None => {
                    basis.push(r);
                    break;
                }
            }
        }
    }
    basis.len()
}
