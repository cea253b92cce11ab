//! Degree-2 quotients of S(y) = T(x).
//!
//! The hyperplanes of the Galois group ker S are indexed by the nonzero
//! roots alpha of the linearized equation
//!   A_0^{2^{n-1}} a^{2^n} + A_1^{2^{n-2}} a^{2^{n-1}} + ... + A_{n-1} a^2 + a = 0,
//! and the quotient for alpha is w^2 + w = alpha^2 T. Reducing alpha^2 T and
//! applying the coefficient Frobenius c -> c^{2^{n-2}} gives the form
//!   w^2 + w = sum_k alpha^{2^{n-k}} x R_k^{(n-2)}(x),
//! where R^{(j)} has its coefficients raised to 2^j. The conjugate curve has
//! the same genus and the same point counts over every field containing alpha.

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::builder::{CurveSpec, GenusCertificate, StratumCount};
use crate::error::{Error, Result};
use crate::field::{extend_and_embed, BinaryField, Embedding, FieldElem};
use crate::linops::{LinPoly, SparsePoly};

/// The F_2-space of roots of the alpha equation, inside an explicit field.
#[derive(Debug, Clone)]
pub struct AlphaSpace {
    pub ambient: BinaryField,
    /// curve coefficient field -> ambient
    pub embedding: Embedding,
    pub basis: Vec<FieldElem>,
    /// the alpha equation over the curve's coefficient field
    pub equation: LinPoly,
}

impl AlphaSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// sum of basis elements selected by the bits of `mask`
    pub fn element(&self, mask: u64) -> FieldElem {
        self.basis
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .fold(FieldElem::ZERO, |acc, (_, &b)| acc + b)
    }

    /// Nonzero members in mask order 1, 2, 3, ..., bit i selecting basis[i].
    pub fn nonzero_elements(&self) -> Vec<FieldElem> {
        (1..(1u64 << self.dim())).map(|m| self.element(m)).collect()
    }

    pub fn contains(&self, alpha: FieldElem) -> bool {
        self.ambient.contains(alpha)
            && self.equation.embed(&self.embedding).map(|e| e.eval(alpha).is_zero()).unwrap_or(false)
    }
}

/// B monic of 2-degree n-1 and beta with B^2 + beta B = S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitData {
    pub b: LinPoly,
    pub beta: FieldElem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientCurve {
    pub alpha: FieldElem,
    #[serde(skip)]
    pub rhs: SparsePoly,
    pub genus: u64,
}

impl QuotientCurve {
    pub fn field(&self) -> &BinaryField {
        self.rhs.field()
    }
}

/// Coefficients of the alpha equation: 1 at a, A_i^{2^{n-1-i}} at a^{2^{n-i}}.
pub fn alpha_equation(c: &CurveSpec) -> LinPoly {
    let f = *c.field();
    let n = c.n();
    let mut coeffs = vec![FieldElem::ZERO; n + 1];
    coeffs[0] = FieldElem::ONE;
    for i in 0..n {
        coeffs[n - i] = f.frobenius(c.s().coeff(i), (n - 1 - i) as i64);
    }
    LinPoly::new(f, coeffs).expect("coefficients lie in the curve field")
}

/// Roots of the alpha equation in its splitting field.
pub fn solve_alpha_space(c: &CurveSpec, budget: &Budget) -> Result<AlphaSpace> {
    let k = alpha_equation(c).splitting_degree()?;
    solve_alpha_space_in(c, k, budget)
}

/// Same, inside F_{2^{Nk}}; k must be a multiple of the splitting degree.
pub fn solve_alpha_space_in(c: &CurveSpec, k: u64, budget: &Budget) -> Result<AlphaSpace> {
    let equation = alpha_equation(c);
    budget.check_degree(c.field().degree() as u64 * k)?;
    let (ambient, embedding) = extend_and_embed(c.field(), k as u32)?;
    let basis = equation.kernel(&embedding)?;
    if basis.len() != c.n() {
        return Err(Error::Internal(format!(
            "alpha space has dimension {} in GF(2^{}), expected {}",
            basis.len(),
            ambient.degree(),
            c.n()
        )));
    }
    Ok(AlphaSpace { ambient, embedding, basis, equation })
}

/// Solves B_0 = A_0 / beta, B_i = (A_i + B_{i-1}^2) / beta and checks
/// B_{n-2}^2 + beta = A_{n-1}.
pub fn split(s: &LinPoly, beta: FieldElem) -> Result<SplitData> {
    let f = *s.field();
    let n = s.two_degree().filter(|&n| n >= 1).ok_or_else(|| Error::InvalidInput("S must have 2-degree >= 1".into()))?;
    if !s.is_monic() {
        return Err(Error::InvalidInput("S must be monic".into()));
    }
    if beta.is_zero() || !f.contains(beta) {
        return Err(Error::BetaNotAdmissible);
    }
    let mut b = Vec::with_capacity(n);
    if n == 1 {
        if beta != s.coeff(0) {
            return Err(Error::BetaNotAdmissible);
        }
    } else {
        b.push(f.div(s.coeff(0), beta)?);
        for i in 1..n - 1 {
            let prev = f.square(b[i - 1]);
            b.push(f.div(s.coeff(i) + prev, beta)?);
        }
        if f.square(b[n - 2]) + beta != s.coeff(n - 1) {
            return Err(Error::BetaNotAdmissible);
        }
    }
    b.push(FieldElem::ONE);
    let b = LinPoly::new(f, b)?;
    debug_assert_eq!(b.twist(1).add(&b.scale(beta)).ok().as_ref(), Some(s));
    Ok(SplitData { b, beta })
}

/// R_k with coefficients raised to 2^{n-2}.
fn conjugated_r(c: &CurveSpec) -> Vec<LinPoly> {
    let n = c.n() as i64;
    c.r().iter().map(|r| r.conjugate(n - 2)).collect()
}

/// R_alpha = sum_k alpha^{2^{n-k}} R_k^{(n-2)}, over the ambient field.
pub fn combined_r(c: &CurveSpec, space: &AlphaSpace, alpha: FieldElem) -> Result<LinPoly> {
    let amb = &space.ambient;
    let n = c.n() as i64;
    let mut acc = LinPoly::zero(*amb);
    for (k, r) in conjugated_r(c).iter().enumerate() {
        let coeff = amb.frobenius(alpha, n - (k as i64 + 1));
        acc = acc.add(&r.embed(&space.embedding)?.scale(coeff))?;
    }
    Ok(acc)
}

pub fn quotient_curve(c: &CurveSpec, space: &AlphaSpace, alpha: FieldElem) -> Result<QuotientCurve> {
    if alpha.is_zero() || !space.contains(alpha) {
        return Err(Error::NotInAlphaSpace);
    }
    let rhs = combined_r(c, space, alpha)?.times_x()?.as_reduce();
    let genus = rhs.as_genus().map_err(|_| Error::Reducible)?;
    Ok(QuotientCurve { alpha, rhs, genus })
}

/// L_e(a) = sum_k c_{k,e} a^{2^{n-k}}, c_{k,e} the coefficient of x^{2^e} in
/// R_k^{(n-2)}; R_alpha vanishes at x^{2^e} exactly on the roots of L_e.
fn coefficient_equations(c: &CurveSpec) -> Vec<LinPoly> {
    let f = *c.field();
    let n = c.n();
    let rs = conjugated_r(c);
    let top = rs.iter().filter_map(LinPoly::two_degree).max().unwrap_or(0);
    (0..=top)
        .map(|e| {
            let mut coeffs = vec![FieldElem::ZERO; n];
            for (k, r) in rs.iter().enumerate() {
                coeffs[n - (k + 1)] = r.coeff(e);
            }
            LinPoly::new(f, coeffs).unwrap()
        })
        .collect()
}

/// Quotient genera grouped by the top term of R_alpha, from dimensions of
/// common root spaces (right gcds), without building the splitting field.
/// Entries with genus 0 are rational quotients.
pub fn genus_profile(c: &CurveSpec) -> Result<GenusCertificate> {
    let eqs = coefficient_equations(c);
    let mut common = alpha_equation(c);
    let mut dim_above = c.n() as u32;
    let mut strata = Vec::new();
    for (e, l) in eqs.iter().enumerate().rev() {
        common = common.right_gcd(l)?;
        let dim = common.two_degree().unwrap_or(0) as u32;
        if dim < dim_above {
            let count = (1u128 << dim_above) - (1u128 << dim);
            let genus = if e == 0 { 0 } else { 1u128 << (e - 1) };
            strata.push(StratumCount { count, genus });
        }
        dim_above = dim;
    }
    if dim_above != 0 {
        return Err(Error::Reducible);
    }
    strata.reverse();
    Ok(GenusCertificate::from_strata(strata))
}

/// True iff R_alpha is nonzero for every nonzero alpha in the alpha space.
pub fn is_irreducible(c: &CurveSpec) -> bool {
    let mut common = alpha_equation(c);
    for l in coefficient_equations(c) {
        common = match common.right_gcd(&l) {
            Ok(g) => g,
            Err(_) => return false,
        };
    }
    common.two_degree() == Some(0)
}

/// One quotient per nonzero alpha, in mask order.
pub fn decomposition(c: &CurveSpec, space: &AlphaSpace) -> Result<Vec<QuotientCurve>> {
    if !is_irreducible(c) {
        return Err(Error::Reducible);
    }
    space.nonzero_elements().into_par_iter().map(|alpha| quotient_curve(c, space, alpha)).collect()
}
