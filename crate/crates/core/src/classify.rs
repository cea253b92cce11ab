//! Isomorphism questions for the curves y^2 + y = x R(x) and for spaces of
//! such right sides.
//!
//! Substituting x -> rho x turns x R(x) into x R'(x) with
//! a_i' = a_i rho^{2^i + 1}. Both searches below enumerate the finitely many
//! rho allowed by one such equation, in an explicitly built splitting field,
//! and then check every remaining constraint exactly.

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::poly::{roots, Poly};
use crate::field::{extend_and_embed, rank_of_rows, BinaryField, Embedding, FieldElem};
use crate::linops::LinPoly;

/// Largest 2-exponent e for which X^{2^e+1} = c is solved by polynomial
/// root finding.
pub const MAX_ROOT_EXPONENT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoMode {
    Curves,
    /// 2-degree 1: the witness relates the Artin-Schreier covers; as curves
    /// these are elliptic and further isomorphisms may exist
    AsCovers,
    Covers,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub rho: FieldElem,
    /// the field holding rho; the input field sits inside it via `embedding`
    pub field: BinaryField,
    pub embedding: Embedding,
    pub mode: IsoMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalBasis {
    pub ambient: BinaryField,
    pub embedding: Embedding,
    pub basis: Vec<FieldElem>,
}

fn degree_with_top(r: &LinPoly) -> Result<usize> {
    match r.two_degree() {
        Some(h) if h >= 1 => Ok(h),
        _ => Err(Error::InvalidInput("R must have 2-degree at least 1".into())),
    }
}

/// E(x) = R(x)^{2^h} + sum_{i=0}^{h} (a_i x)^{2^{h-i}}.
pub fn e_poly(r: &LinPoly) -> Result<LinPoly> {
    let h = degree_with_top(r)?;
    let f = *r.field();
    let mut c = vec![FieldElem::ZERO; 2 * h + 1];
    for i in 0..=h {
        let a = r.coeff(i);
        c[h + i] += f.frobenius(a, h as i64);
        c[h - i] += f.frobenius(a, (h - i) as i64);
    }
    LinPoly::new(f, c)
}

/// Root space of E in its splitting field.
pub fn radical(r: &LinPoly, budget: &Budget) -> Result<RadicalBasis> {
    let e = e_poly(r)?;
    let k = e.splitting_degree()?;
    budget.check_degree(r.field().degree() as u64 * k)?;
    let (ambient, embedding) = extend_and_embed(r.field(), k as u32)?;
    let basis = e.kernel(&embedding)?;
    if basis.len() != e.two_degree().unwrap() {
        return Err(Error::Internal("radical has the wrong dimension".into()));
    }
    Ok(RadicalBasis { ambient, embedding, basis })
}

/// a_i -> a_i rho^{2^i + 1}, i.e. the right side x R(x) after x -> rho x.
pub fn scaling_orbit(r: &LinPoly, rho: FieldElem) -> Result<LinPoly> {
    let f = r.field();
    if rho.is_zero() {
        return Err(Error::InvalidInput("rho must be nonzero".into()));
    }
    let coeffs = r
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &a)| f.mul(a, f.mul(rho, f.frobenius(rho, i as i64))))
        .collect();
    LinPoly::new(*f, coeffs)
}

/// The splitting field of X^{2^e+1} - c over the field of c, and all its
/// roots there in increasing order.
fn roots_of_power(f: &BinaryField, e: usize, c: FieldElem, budget: &Budget) -> Result<(Embedding, Vec<FieldElem>)> {
    if e > MAX_ROOT_EXPONENT {
        return Err(Error::Capacity { needed: e as u64, limit: MAX_ROOT_EXPONENT as u32 });
    }
    let d = (1u128 << e) + 1;
    let n = f.degree() as u64;
    // X^d - c splits over F_{2^M} iff d | 2^M - 1 and c^{(2^M-1)/d} = 1
    let limit = budget.max_degree.min(64);
    let j = (1..)
        .take_while(|&j| n * j <= limit as u64)
        .find(|&j| {
            let order = (1u128 << (n * j)) - 1;
            order.is_multiple_of(d) && f.pow(c, order / d) == FieldElem::ONE
        })
        .ok_or(Error::Capacity { needed: limit as u64 + 1, limit })?;
    let (ext, emb) = extend_and_embed(f, j as u32)?;
    let mut coeffs = vec![FieldElem::ZERO; d as usize + 1];
    coeffs[0] = emb.map(c);
    coeffs[d as usize] = FieldElem::ONE;
    let rs = roots(&ext, &Poly::new(coeffs));
    if rs.len() as u128 != d {
        return Err(Error::Internal(format!("found {} roots of a split polynomial of degree {d}", rs.len())));
    }
    Ok((emb, rs))
}

fn mode_for(h: usize) -> IsoMode {
    if h == 1 {
        IsoMode::AsCovers
    } else {
        IsoMode::Curves
    }
}

/// rho with a_i' = a_i rho^{2^i+1} for every i >= 1, over the algebraic
/// closure, or None. a_0 is irrelevant: it only adds a square to the right
/// side up to x -> x + const.
pub fn curves_isomorphic(r: &LinPoly, r2: &LinPoly, budget: &Budget) -> Result<Option<IsoWitness>> {
    if r.field() != r2.field() {
        return Err(Error::FieldMismatch { left: r.field().degree(), right: r2.field().degree() });
    }
    let h = degree_with_top(r)?;
    if r2.two_degree() != Some(h) {
        return Ok(None);
    }
    let support: Vec<usize> = (1..=h).filter(|&i| !r.coeff(i).is_zero()).collect();
    if support != (1..=h).filter(|&i| !r2.coeff(i).is_zero()).collect::<Vec<_>>() {
        return Ok(None);
    }
    let f = r.field();
    let i0 = support[0];
    let ratio = f.div(r2.coeff(i0), r.coeff(i0))?;
    let (emb, candidates) = roots_of_power(f, i0, ratio, budget)?;
    let ext = *emb.ext();
    let (src, dst) = (r.embed(&emb)?, r2.embed(&emb)?);
    for rho in candidates {
        let img = scaling_orbit(&src, rho)?;
        if support.iter().all(|&i| img.coeff(i) == dst.coeff(i)) {
            return Ok(Some(IsoWitness { rho, field: ext, embedding: emb, mode: mode_for(h) }));
        }
    }
    Ok(None)
}

/// Coefficient bits of each polynomial, for F_2-rank computations.
fn rows(ps: &[LinPoly], width: usize) -> Vec<Vec<u64>> {
    ps.iter()
        .map(|p| {
            let mut c = p.coeffs().iter().map(|e| e.bits()).collect::<Vec<_>>();
            c.resize(width, 0);
            c
        })
        .collect()
}

fn span_rank(ps: &[LinPoly]) -> usize {
    let width = ps.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    rank_of_rows(&rows(ps, width))
}

fn same_span(a: &[LinPoly], b: &[LinPoly]) -> bool {
    let ra = span_rank(a);
    let all: Vec<LinPoly> = a.iter().chain(b).cloned().collect();
    ra == span_rank(b) && span_rank(&all) == ra
}

fn span_elements(basis: &[LinPoly]) -> Result<Vec<LinPoly>> {
    let f = *basis[0].field();
    (1u64..(1 << basis.len()))
        .map(|m| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| (m >> i) & 1 == 1)
                .try_fold(LinPoly::zero(f), |acc, (_, p)| acc.add(p))
        })
        .collect()
}

/// Largest span size for which the target space is enumerated.
pub const MAX_SPAN_LOG2: usize = 16;

/// rho such that x -> rho x carries span{x R : R in l} onto span{x R : R in
/// l2}, or None. Candidates come from an element of maximal 2-degree e: its
/// image has 2-degree e and lies in the target, so rho^{2^e+1} is one of the
/// finitely many ratios of top coefficients. Each candidate is then checked
/// by comparing spans.
pub fn covers_isomorphic(l: &[LinPoly], l2: &[LinPoly], budget: &Budget) -> Result<Option<IsoWitness>> {
    let (Some(first), Some(first2)) = (l.first(), l2.first()) else {
        return Err(Error::InvalidInput("spaces must be nonempty".into()));
    };
    let f = first.field();
    if l.iter().chain(l2).any(|p| p.field() != f) {
        return Err(Error::FieldMismatch { left: f.degree(), right: first2.field().degree() });
    }
    let dim = span_rank(l);
    if dim != l.len() || span_rank(l2) != l2.len() {
        return Err(Error::InvalidInput("basis elements must be linearly independent".into()));
    }
    if dim != l2.len() {
        return Ok(None);
    }
    if dim > MAX_SPAN_LOG2 {
        return Err(Error::BudgetExceeded { needed_log2: dim as u32, budget_log2: MAX_SPAN_LOG2 as u32 });
    }
    let top = l.iter().max_by_key(|p| p.two_degree()).unwrap();
    let e = match top.two_degree() {
        Some(e) => e,
        None => return Err(Error::InvalidInput("zero element in basis".into())),
    };
    let a_e = top.coeff(e);
    let mut ratios: Vec<FieldElem> = Vec::new();
    for v in span_elements(l2)? {
        if v.two_degree() == Some(e) {
            let c = f.div(v.coeff(e), a_e)?;
            if !ratios.contains(&c) {
                ratios.push(c);
            }
        }
    }
    for c in ratios {
        let (emb, candidates) = roots_of_power(f, e, c, budget)?;
        let src = l.iter().map(|p| p.embed(&emb)).collect::<Result<Vec<_>>>()?;
        let dst = l2.iter().map(|p| p.embed(&emb)).collect::<Result<Vec<_>>>()?;
        for rho in candidates {
            let img = src.iter().map(|p| scaling_orbit(p, rho)).collect::<Result<Vec<_>>>()?;
            if same_span(&img, &dst) {
                return Ok(Some(IsoWitness { rho, field: *emb.ext(), embedding: emb, mode: IsoMode::Covers }));
            }
        }
    }
    Ok(None)
}

/// Re-checks the defining relation of a witness.
pub fn check_curve_witness(r: &LinPoly, r2: &LinPoly, w: &IsoWitness) -> Result<bool> {
    let img = scaling_orbit(&r.embed(&w.embedding)?, w.rho)?;
    let dst = r2.embed(&w.embedding)?;
    let h = img.two_degree().unwrap_or(0);
    Ok(dst.two_degree() == Some(h) && (1..=h).all(|i| img.coeff(i) == dst.coeff(i)))
}

pub fn check_cover_witness(l: &[LinPoly], l2: &[LinPoly], w: &IsoWitness) -> Result<bool> {
    let img = l.iter().map(|p| scaling_orbit(&p.embed(&w.embedding)?, w.rho)).collect::<Result<Vec<_>>>()?;
    let dst = l2.iter().map(|p| p.embed(&w.embedding)).collect::<Result<Vec<_>>>()?;
    Ok(same_span(&img, &dst))
}
