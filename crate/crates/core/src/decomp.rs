//! Block decomposition of a genus: g = sum_i 2^{s_i} (2^{r_i + 1} - 1), one
//! block per maximal run of 1-bits in the binary expansion of g.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A run of `r + 1` consecutive set bits starting at bit `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub s: u32,
    pub r: u32,
}

impl Block {
    pub fn width(&self) -> u32 {
        self.r + 1
    }

    /// 2^s (2^{r+1} - 1)
    pub fn value(&self) -> u128 {
        (1u128 << self.s) * ((1u128 << (self.r + 1)) - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusDecomposition {
    pub g: u64,
    /// ordered by increasing s
    pub blocks: Vec<Block>,
    /// binary weight of g
    pub w: u32,
    /// widest block, which is also the degree of the field used by the
    /// fibre-product construction
    pub m: u32,
    /// u_i = (s_i + 1) - sum_{j<i} (r_j + 1)
    pub u: Vec<u32>,
    /// sum_i (r_i + 1) u_i - 1, present for g >= 2
    pub moduli_bound: Option<u64>,
}

pub fn decompose(g: u64) -> Result<GenusDecomposition> {
    if g == 0 {
        return Err(Error::InvalidInput("genus must be positive".into()));
    }
    let mut blocks = Vec::new();
    let mut rest = g;
    while rest != 0 {
        let s = rest.trailing_zeros();
        let width = (rest >> s).trailing_ones();
        blocks.push(Block { s, r: width - 1 });
        rest &= !(((1u128 << width) - 1) << s) as u64;
    }
    let w = blocks.iter().map(Block::width).sum();
    let m = blocks.iter().map(Block::width).max().unwrap();
    let mut u = Vec::with_capacity(blocks.len());
    let mut below = 0u32;
    for b in &blocks {
        u.push(b.s + 1 - below);
        below += b.width();
    }
    let mut d = GenusDecomposition { g, blocks, w, m, u, moduli_bound: None };
    d.moduli_bound = moduli_lower_bound(&d).ok();
    Ok(d)
}

impl GenusDecomposition {
    pub fn t(&self) -> usize {
        self.blocks.len()
    }

    /// sum_i 2^{s_i} (2^{r_i+1} - 1)
    pub fn recompose(&self) -> u128 {
        self.blocks.iter().map(Block::value).sum()
    }

    /// Checks every structural invariant of the decomposition.
    pub fn validate(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Internal(format!("decomposition of {}: {what}", self.g)));
        if self.blocks.is_empty() || self.recompose() != self.g as u128 {
            return fail("recomposition");
        }
        for pair in self.blocks.windows(2) {
            if pair[1].s < pair[0].s + pair[0].r + 2 {
                return fail("block gap");
            }
        }
        if self.w != self.g.count_ones() || self.w != self.blocks.iter().map(Block::width).sum::<u32>() {
            return fail("weight");
        }
        if self.m != self.blocks.iter().map(Block::width).max().unwrap() {
            return fail("max width");
        }
        if self.u.len() != self.blocks.len() || self.u[0] < 1 || self.u.windows(2).any(|p| p[1] < p[0] + 1) {
            return fail("u sequence");
        }
        let mut below = 0;
        for (b, &ui) in self.blocks.iter().zip(&self.u) {
            if ui != b.s + 1 - below {
                return fail("u formula");
            }
            below += b.width();
        }
        if self.moduli_bound != moduli_lower_bound(self).ok() {
            return fail("moduli bound");
        }
        Ok(())
    }

    /// Number of quotient curves contributed by block i (0-based) in either
    /// construction, and the genus of each: 2^{sum_{j<i} (r_j+1)} (2^{r_i+1} - 1)
    /// curves of genus 2^{u_i - 1}.
    pub fn strata(&self) -> Vec<(u128, u128)> {
        let mut below = 0u32;
        self.blocks
            .iter()
            .zip(&self.u)
            .map(|(b, &ui)| {
                let count = (1u128 << below) * ((1u128 << b.width()) - 1);
                below += b.width();
                (count, 1u128 << (ui - 1))
            })
            .collect()
    }
}

/// sum_i (r_i + 1) u_i - 1; defined for g >= 2.
pub fn moduli_lower_bound(d: &GenusDecomposition) -> Result<u64> {
    if d.g < 2 {
        return Err(Error::NotDefined("moduli bound requires g >= 2".into()));
    }
    let total: u64 = d.blocks.iter().zip(&d.u).map(|(b, &ui)| b.width() as u64 * ui as u64).sum();
    Ok(total - 1)
}
