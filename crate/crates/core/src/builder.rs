//! Construction of the curves: the fibre product of Artin-Schreier curves
//! over F_{2^m}, its single-equation form when there is one block, and the
//! single equation S(y) = T(x) over F_2 built from the G-polynomial chain.

use serde::{Deserialize, Serialize};

use crate::decomp::GenusDecomposition;
use crate::error::{Error, Result};
use crate::field::{make_field, BinaryField, FieldElem};
use crate::linops::{LinPoly, SparsePoly};

/// Components beyond this count are certified by strata only.
pub const EXHAUSTIVE_COMPONENT_LIMIT: usize = 20;

/// One summand x L_i of the space spanned by the components: `dim`
/// components of the form c x^{2^u + 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub u: u32,
    pub dim: u32,
}

/// The normalization of the fibre product of the curves y_i^2 + y_i = f_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreProductSpec {
    pub field: BinaryField,
    pub components: Vec<SparsePoly>,
    pub strata: Vec<Stratum>,
}

/// The curve S(y) = x R_1(x) + (x R_2(x))^2 + ... + (x R_n(x))^{2^{n-1}}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    field: BinaryField,
    s: LinPoly,
    r: Vec<LinPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Curve {
    Single(CurveSpec),
    FibreProduct(FibreProductSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumCount {
    pub count: u128,
    pub genus: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenusCertificate {
    pub strata: Vec<StratumCount>,
    pub total: u128,
}

impl GenusCertificate {
    pub fn from_strata(strata: Vec<StratumCount>) -> GenusCertificate {
        let total = strata.iter().map(|s| s.count * s.genus).sum();
        GenusCertificate { strata, total }
    }
}

impl CurveSpec {
    pub fn new(field: BinaryField, s: LinPoly, r: Vec<LinPoly>) -> Result<CurveSpec> {
        let n = s.two_degree().ok_or_else(|| Error::InvalidInput("S is zero".into()))?;
        if n == 0 {
            return Err(Error::InvalidInput("S must have 2-degree at least 1".into()));
        }
        if !s.is_monic() {
            return Err(Error::InvalidInput("S must be monic".into()));
        }
        if !s.is_separable() {
            return Err(Error::InvalidInput("S must have a nonzero linear coefficient A_0".into()));
        }
        if r.len() != n {
            return Err(Error::InvalidInput(format!("expected {n} polynomials R_k, got {}", r.len())));
        }
        if r.iter().all(LinPoly::is_zero) {
            return Err(Error::InvalidInput("the R_k are all zero".into()));
        }
        if *s.field() != field || r.iter().any(|p| *p.field() != field) {
            return Err(Error::FieldMismatch { left: field.degree(), right: s.field().degree() });
        }
        let spec = CurveSpec { field, s, r };
        spec.rhs()?;
        Ok(spec)
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn s(&self) -> &LinPoly {
        &self.s
    }

    /// R_1 .. R_n
    pub fn r(&self) -> &[LinPoly] {
        &self.r
    }

    /// 2-degree of S.
    pub fn n(&self) -> usize {
        self.r.len()
    }

    /// T = sum_k (x R_k(x))^{2^{k-1}}.
    pub fn rhs(&self) -> Result<SparsePoly> {
        let mut t = SparsePoly::zero(self.field);
        for (k, rk) in self.r.iter().enumerate() {
            t = t.add(&rk.times_x()?.frobenius_power(k as u32)?)?;
        }
        if t.is_zero() {
            return Err(Error::InvalidInput("derived right side T is zero".into()));
        }
        Ok(t)
    }

    pub fn equation(&self) -> String {
        let rhs = self.rhs().map(|t| render_sparse(&self.field, &t, "x")).unwrap_or_else(|_| "?".into());
        format!("{} = {}", render_linear(&self.field, &self.s, "y"), rhs)
    }
}

impl FibreProductSpec {
    pub fn equation(&self) -> String {
        self.components
            .iter()
            .enumerate()
            .map(|(i, f)| format!("y_{i}^2+y_{i} = {}", render_sparse(&self.field, f, "x")))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Sum of the components selected by the bits of `mask`.
    pub fn combination(&self, mask: u64) -> SparsePoly {
        let mut acc = SparsePoly::zero(self.field);
        for (i, f) in self.components.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                acc = acc.add(f).expect("components share the field");
            }
        }
        acc
    }
}

impl Curve {
    pub fn field(&self) -> &BinaryField {
        match self {
            Curve::Single(c) => c.field(),
            Curve::FibreProduct(fp) => &fp.field,
        }
    }

    pub fn equation(&self) -> String {
        match self {
            Curve::Single(c) => c.equation(),
            Curve::FibreProduct(fp) => fp.equation(),
        }
    }
}

fn exponent_2u_plus_1(u: u32) -> Result<u64> {
    if u >= 63 {
        return Err(Error::Capacity { needed: u as u64, limit: 62 });
    }
    Ok((1u64 << u) + 1)
}

/// Components gamma^j x^{2^{u_i} + 1}, j = 0..r_i, for every block i, over
/// the field of degree m.
pub fn build_components(d: &GenusDecomposition) -> Result<FibreProductSpec> {
    let field = make_field(d.m)?;
    let gamma = field.generator();
    let mut components = Vec::with_capacity(d.w as usize);
    let mut strata = Vec::with_capacity(d.t());
    for (block, &u) in d.blocks.iter().zip(&d.u) {
        let e = exponent_2u_plus_1(u)?;
        for j in 0..block.width() {
            components.push(SparsePoly::monomial(field, e, field.pow(gamma, j as u128)));
        }
        strata.push(Stratum { u, dim: block.width() });
    }
    Ok(FibreProductSpec { field, components, strata })
}

/// Genus of the fibre product as a sum over the nonzero members of the
/// component space, grouped by the block of their top term. For at most
/// [`EXHAUSTIVE_COMPONENT_LIMIT`] components every member is also reduced
/// and its genus computed directly; the two tallies must agree.
pub fn certificate(spec: &FibreProductSpec) -> Result<GenusCertificate> {
    let mut below = 0u32;
    let mut strata = Vec::with_capacity(spec.strata.len());
    for s in &spec.strata {
        if s.u == 0 || below + s.dim > 127 {
            return Err(Error::InvalidInput("stratum bookkeeping out of range".into()));
        }
        strata.push(StratumCount { count: (1u128 << below) * ((1u128 << s.dim) - 1), genus: 1u128 << (s.u - 1) });
        below += s.dim;
    }
    if below as usize != spec.components.len() {
        return Err(Error::Internal("strata dimensions do not match the component count".into()));
    }
    let cert = GenusCertificate::from_strata(strata);
    if spec.components.len() <= EXHAUSTIVE_COMPONENT_LIMIT {
        let exhaustive = exhaustive_genera(spec)?;
        let mut expected: Vec<(u128, u128)> = cert.strata.iter().map(|s| (s.genus, s.count)).collect();
        expected.sort();
        if exhaustive != expected {
            return Err(Error::Internal(format!(
                "stratum tally {expected:?} disagrees with exhaustive tally {exhaustive:?}"
            )));
        }
    }
    Ok(cert)
}

/// (genus, count) pairs over all nonzero combinations, sorted by genus.
fn exhaustive_genera(spec: &FibreProductSpec) -> Result<Vec<(u128, u128)>> {
    let mut tally = std::collections::BTreeMap::<u128, u128>::new();
    for mask in 1..(1u64 << spec.components.len()) {
        let genus = spec.combination(mask).as_genus()?;
        *tally.entry(genus as u128).or_default() += 1;
    }
    Ok(tally.into_iter().collect())
}

/// Single equation y^{2^m} + y = sum_j gamma^j TrP(gamma^j x^{2^u+1}) for a
/// one-block fibre product over F_{2^m}, TrP(z) = z + z^2 + ... + z^{2^{m-1}}.
pub fn glue_single_block(spec: &FibreProductSpec) -> Result<CurveSpec> {
    if spec.strata.len() != 1 {
        return Err(Error::Unsupported("gluing needs exactly one block".into()));
    }
    let field = spec.field;
    let m = field.degree();
    if spec.strata[0].dim != m || spec.components.len() != m as usize {
        return Err(Error::Unsupported("gluing needs a block as wide as the field degree".into()));
    }
    let gamma = field.generator();
    let mut t = SparsePoly::zero(field);
    for (j, f) in spec.components.iter().enumerate() {
        let mut trace = SparsePoly::zero(field);
        for i in 0..m {
            trace = trace.add(&f.frobenius_power(i)?)?;
        }
        t = t.add(&trace.scale(field.pow(gamma, j as u128)))?;
    }
    let s = LinPoly::from_f2_mask(field, 1 | (1u64 << m));
    let r = to_standard_form(&t, m as usize)?;
    CurveSpec::new(field, s, r)
}

/// Recovers R_1..R_n from T = sum_k (x R_k)^{2^{k-1}}: a term c x^{2^a (2^e+1)}
/// goes to R_{a+1} at x^{2^e} with coefficient c^{2^{-a}}, and a term
/// c x^{2^b} goes to R_b at x with coefficient c^{2^{-(b-1)}}.
pub fn to_standard_form(t: &SparsePoly, n: usize) -> Result<Vec<LinPoly>> {
    let field = *t.field();
    let mut coeffs: Vec<Vec<FieldElem>> = vec![Vec::new(); n];
    for (e, c) in t.terms() {
        if e == 0 {
            return Err(Error::NotRepresentable(e));
        }
        let a = e.trailing_zeros();
        let odd = e >> a;
        let (k, pos, shift) = if odd == 1 {
            if a == 0 {
                return Err(Error::NotRepresentable(e));
            }
            (a as usize, 0usize, a as i64 - 1)
        } else {
            let m = odd - 1;
            if !m.is_power_of_two() {
                return Err(Error::NotRepresentable(e));
            }
            (a as usize + 1, m.trailing_zeros() as usize, a as i64)
        };
        if k > n {
            return Err(Error::NotRepresentable(e));
        }
        let slot = &mut coeffs[k - 1];
        if slot.len() <= pos {
            slot.resize(pos + 1, FieldElem::ZERO);
        }
        slot[pos] += field.frobenius(c, -shift);
    }
    coeffs.into_iter().map(|c| LinPoly::new(field, c)).collect()
}

/// The chain G_0 = x, G_i = G_{i-1}^{2^{r_i+1}} + G_{i-1}, i = 0..t, over F_2.
pub fn g_chain(d: &GenusDecomposition) -> Vec<LinPoly> {
    let f2 = make_field(1).expect("F_2");
    let mut chain = vec![LinPoly::identity(f2)];
    for block in &d.blocks {
        let prev = chain.last().unwrap();
        chain.push(prev.twist(block.width() as usize).add(prev).unwrap());
    }
    chain
}

/// The curve over F_2 with S = G_t and x R_{w-j} collecting the monomials
/// x^{2^{u_i}+1} whose coefficient G_{i-1}(alpha) contains alpha^{2^j}.
pub fn build_prime_field(d: &GenusDecomposition) -> Result<CurveSpec> {
    let f2 = make_field(1)?;
    let chain = g_chain(d);
    let w = d.w as usize;
    let mut masks = vec![0u64; w];
    for (i, &u) in d.u.iter().enumerate() {
        if u >= 63 {
            return Err(Error::Capacity { needed: u as u64, limit: 62 });
        }
        for (j, c) in chain[i].coeffs().iter().enumerate() {
            if *c == FieldElem::ONE {
                masks[w - j - 1] |= 1u64 << u;
            }
        }
    }
    let r = masks.into_iter().map(|m| LinPoly::from_f2_mask(f2, m)).collect();
    CurveSpec::new(f2, chain[d.t()].clone(), r)
}

/// Discrete logarithm of `c` to the field generator, for small fields.
fn generator_log(field: &BinaryField, c: FieldElem) -> Option<u64> {
    if field.degree() > 20 || c.is_zero() {
        return None;
    }
    let g = field.generator();
    let order = (1u64 << field.degree()) - 1;
    let mut cur = FieldElem::ONE;
    for k in 0..order {
        if cur == c {
            return Some(k);
        }
        cur = field.mul(cur, g);
    }
    None
}

fn render_coeff(field: &BinaryField, c: FieldElem) -> String {
    if c == FieldElem::ONE {
        return String::new();
    }
    match generator_log(field, c) {
        Some(1) => "α".into(),
        Some(k) => format!("α^{k}"),
        None => format!("({c})"),
    }
}

fn render_term(field: &BinaryField, c: FieldElem, var: &str, e: u64) -> String {
    let coeff = render_coeff(field, c);
    match e {
        0 if coeff.is_empty() => "1".into(),
        0 => coeff,
        1 => format!("{coeff}{var}"),
        _ => format!("{coeff}{var}^{e}"),
    }
}

/// Terms in strictly decreasing exponent order, joined by '+'.
pub fn render_sparse(field: &BinaryField, p: &SparsePoly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms().rev().map(|(e, c)| render_term(field, c, var, e)).collect::<Vec<_>>().join("+")
}

pub fn render_linear(field: &BinaryField, p: &LinPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = (0..p.coeffs().len())
        .rev()
        .filter(|&i| !p.coeff(i).is_zero())
        .map(|i| render_term(field, p.coeff(i), var, 1u64 << i))
        .collect();
    terms.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::decompose;

    fn prime(g: u64) -> CurveSpec {
        build_prime_field(&decompose(g).unwrap()).unwrap()
    }

    fn xr_exponents(c: &CurveSpec) -> Vec<Vec<u64>> {
        c.r().iter().map(|r| r.times_x().unwrap().terms().rev().map(|(e, _)| e).collect()).collect()
    }

    #[test]
    fn genus_221_table_and_equation() {
        let c = prime(221);
        assert_eq!(
            xr_exponents(&c),
            vec![vec![], vec![9], vec![9], vec![], vec![9, 5], vec![9, 5, 3]]
        );
        assert_eq!(
            c.equation(),
            "y^64+y^32+y^16+y^4+y^2+y = x^288+x^160+x^144+x^96+x^80+x^36+x^18"
        );
    }

    #[test]
    fn g_chain_for_221() {
        let chain = g_chain(&decompose(221).unwrap());
        let f2 = make_field(1).unwrap();
        assert_eq!(chain[1], LinPoly::from_f2_mask(f2, 0b11));
        assert_eq!(chain[2], LinPoly::from_f2_mask(f2, 0b11011));
        assert_eq!(chain[3], LinPoly::from_f2_mask(f2, 0b1110111));
    }

    #[test]
    fn small_prime_field_curves() {
        assert_eq!(prime(1).equation(), "y^2+y = x^3");
        assert_eq!(prime(30).equation(), "y^16+y = x^40");
        assert_eq!(prime(5).equation(), "y^4+y = x^10+x^6+x^5");
        assert_eq!(xr_exponents(&prime(5)), vec![vec![5], vec![5, 3]]);
        assert_eq!(xr_exponents(&prime(30)), vec![vec![], vec![], vec![], vec![5]]);
    }

    #[test]
    fn components_and_certificates() {
        let fp = build_components(&decompose(30).unwrap()).unwrap();
        assert_eq!(fp.field.degree(), 4);
        assert_eq!(fp.equation(), "y_0^2+y_0 = x^5; y_1^2+y_1 = αx^5; y_2^2+y_2 = α^2x^5; y_3^2+y_3 = α^3x^5");
        let cert = certificate(&fp).unwrap();
        assert_eq!(cert.strata, vec![StratumCount { count: 15, genus: 2 }]);
        assert_eq!(cert.total, 30);

        let fp1 = build_components(&decompose(1).unwrap()).unwrap();
        assert_eq!(fp1.field.degree(), 1);
        assert_eq!(fp1.equation(), "y_0^2+y_0 = x^3");
        assert_eq!(certificate(&fp1).unwrap().total, 1);

        let fp5 = build_components(&decompose(5).unwrap()).unwrap();
        assert_eq!(fp5.equation(), "y_0^2+y_0 = x^3; y_1^2+y_1 = x^5");
        let cert5 = certificate(&fp5).unwrap();
        assert_eq!(
            cert5.strata,
            vec![StratumCount { count: 1, genus: 1 }, StratumCount { count: 2, genus: 2 }]
        );
        assert_eq!(cert5.total, 5);
    }

    #[test]
    fn glue_genus_30() {
        let fp = build_components(&decompose(30).unwrap()).unwrap();
        let glued = glue_single_block(&fp).unwrap();
        assert_eq!(glued.equation(), "y^16+y = α^6x^40+x^20+α^12x^10+α^9x^5");
        let f = fp.field;
        let a = f.generator();
        let xr: Vec<SparsePoly> = glued.r().iter().map(|r| r.times_x().unwrap()).collect();
        assert_eq!(xr[0], SparsePoly::monomial(f, 5, f.pow(a, 9)));
        assert_eq!(xr[1], SparsePoly::monomial(f, 5, f.pow(a, 6)));
        assert_eq!(xr[2], SparsePoly::monomial(f, 5, FieldElem::ONE));
        assert_eq!(xr[3], SparsePoly::monomial(f, 5, f.pow(a, 12)));
    }

    #[test]
    fn glue_small_cases() {
        let glued = glue_single_block(&build_components(&decompose(1).unwrap()).unwrap()).unwrap();
        assert_eq!(glued.equation(), "y^2+y = x^3");
        let g3 = glue_single_block(&build_components(&decompose(3).unwrap()).unwrap()).unwrap();
        assert_eq!(g3.field().degree(), 2);
        assert_eq!(g3.n(), 2);
        let multi = build_components(&decompose(5).unwrap()).unwrap();
        assert!(matches!(glue_single_block(&multi), Err(Error::Unsupported(_))));
    }

    #[test]
    fn standard_form_examples() {
        let f2 = make_field(1).unwrap();
        let r = to_standard_form(&SparsePoly::monomial(f2, 3, FieldElem::ONE), 1).unwrap();
        assert_eq!(r, vec![LinPoly::monomial(f2, 1, FieldElem::ONE)]);
        assert_eq!(
            to_standard_form(&SparsePoly::monomial(f2, 7, FieldElem::ONE), 3),
            Err(Error::NotRepresentable(7))
        );
        assert_eq!(
            to_standard_form(&SparsePoly::monomial(f2, 1, FieldElem::ONE), 3),
            Err(Error::NotRepresentable(1))
        );
        // x^2 = x * x is R_1 = x
        let r = to_standard_form(&SparsePoly::monomial(f2, 2, FieldElem::ONE), 1).unwrap();
        assert_eq!(r, vec![LinPoly::identity(f2)]);
        // valuation too large for n
        assert!(to_standard_form(&SparsePoly::monomial(f2, 12, FieldElem::ONE), 2).is_err());
    }

    #[test]
    fn curve_spec_validation() {
        let f2 = make_field(1).unwrap();
        let s = LinPoly::from_f2_mask(f2, 0b101);
        let zero = LinPoly::zero(f2);
        assert!(CurveSpec::new(f2, s.clone(), vec![zero.clone(), zero.clone()]).is_err());
        assert!(CurveSpec::new(f2, s.clone(), vec![zero.clone()]).is_err());
        assert!(CurveSpec::new(f2, LinPoly::from_f2_mask(f2, 0b100), vec![zero.clone(), LinPoly::identity(f2)]).is_err());
        assert!(CurveSpec::new(f2, s, vec![zero, LinPoly::identity(f2)]).is_ok());
    }
}
