//! Point counting by enumeration of x, L-polynomials, and the
//! supersingularity verdict.
//!
//! All curves handled here have exactly one point at infinity: every index-2
//! quotient has a right side of odd reduced degree, so infinity is totally
//! ramified. That is checked before counting, never assumed.

mod gray;
mod lpoly;

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::ser::Serializer;
use serde::Serialize;

pub use lpoly::{lpoly_from_counts, newton_polygon, CountSeries, LPoly, NPReport};

use crate::budget::Budget;
use crate::builder::{certificate, Curve, CurveSpec, FibreProductSpec};
use crate::error::{Error, Result};
use crate::field::{extend_and_embed, make_field, rank_of_rows, BinaryField, Embedding, FieldElem};
use crate::linops::SparsePoly;
use crate::quotient::{decomposition, genus_profile, is_irreducible, solve_alpha_space, solve_alpha_space_in, QuotientCurve};

const CHUNK: u64 = 1 << 12;

/// Fibre product pieces beyond this many components are not enumerated.
pub const PIECE_LIMIT_LOG2: usize = 16;

type Map = Box<dyn Fn(FieldElem) -> u64 + Send + Sync>;

/// How the points above x are counted over the extension field.
pub enum Fibre {
    /// number of points above each x
    PerPoint(Map),
    /// `weight` points above each zero of an F_2-quadratic map
    Quadratic { form: Map, weight: u64 },
}

/// Exponents of binary weight at most 2 make x -> f(x) F_2-quadratic.
fn is_quadratic(f: &SparsePoly) -> bool {
    f.terms().all(|(e, _)| e.count_ones() <= 2)
}

/// Something whose affine points over F_{q^k} can be counted one x at a time.
pub trait Countable: Sync {
    fn base_field(&self) -> &BinaryField;
    fn genus(&self) -> Result<u64>;
    /// Checks the ramification precondition and returns the extension
    /// field together with the number of y above each x.
    fn fibre(&self, k: u32) -> Result<(BinaryField, Fibre)>;
}

fn check_odd_degree(f: &SparsePoly) -> Result<()> {
    match f.as_reduce().degree() {
        Some(d) if d % 2 == 1 => Ok(()),
        _ => Err(Error::UnsupportedRamification),
    }
}

/// Nonzero F_2-combinations of the reduced forms never drop to a constant,
/// i.e. the odd parts are linearly independent.
fn check_independent(field: &BinaryField, fs: &[SparsePoly]) -> Result<()> {
    let mut exps: Vec<u64> = Vec::new();
    let reduced: Vec<SparsePoly> = fs.iter().map(SparsePoly::as_reduce).collect();
    for r in &reduced {
        exps.extend(r.terms().map(|(e, _)| e).filter(|&e| e > 0));
    }
    exps.sort_unstable();
    exps.dedup();
    let words = (exps.len() * field.degree() as usize).div_ceil(64);
    let rows: Vec<Vec<u64>> = reduced
        .iter()
        .map(|r| {
            let mut row = vec![0u64; words.max(1)];
            for (slot, &e) in exps.iter().enumerate() {
                let bits = r.coeff(e).bits();
                for b in 0..field.degree() as usize {
                    if (bits >> b) & 1 == 1 {
                        let pos = slot * field.degree() as usize + b;
                        row[pos / 64] |= 1 << (pos % 64);
                    }
                }
            }
            row
        })
        .collect();
    if rank_of_rows(&rows) != fs.len() {
        return Err(Error::UnsupportedRamification);
    }
    Ok(())
}

impl Countable for QuotientCurve {
    fn base_field(&self) -> &BinaryField {
        self.field()
    }

    fn genus(&self) -> Result<u64> {
        Ok(self.genus)
    }

    fn fibre(&self, k: u32) -> Result<(BinaryField, Fibre)> {
        check_odd_degree(&self.rhs)?;
        let (ext, emb) = extend_and_embed(self.field(), k)?;
        let f = self.rhs.embed(&emb)?;
        if is_quadratic(&f) {
            return Ok((ext, Fibre::Quadratic { form: Box::new(move |x| ext.trace(f.eval(x)) as u64), weight: 2 }));
        }
        Ok((ext, Fibre::PerPoint(Box::new(move |x| 2 * (1 - ext.trace(f.eval(x)) as u64)))))
    }
}

impl Countable for FibreProductSpec {
    fn base_field(&self) -> &BinaryField {
        &self.field
    }

    fn genus(&self) -> Result<u64> {
        u64::try_from(certificate(self)?.total).map_err(|_| Error::Capacity { needed: u64::MAX, limit: 64 })
    }

    fn fibre(&self, k: u32) -> Result<(BinaryField, Fibre)> {
        check_independent(&self.field, &self.components)?;
        let (ext, emb) = extend_and_embed(&self.field, k)?;
        let fs = self.components.iter().map(|f| f.embed(&emb)).collect::<Result<Vec<_>>>()?;
        if fs.len() >= 64 {
            return Err(Error::Capacity { needed: fs.len() as u64, limit: 63 });
        }
        let full = 1u64 << fs.len();
        if fs.iter().all(is_quadratic) {
            let form = move |x| fs.iter().enumerate().fold(0u64, |acc, (j, f)| acc | (ext.trace(f.eval(x)) as u64) << j);
            return Ok((ext, Fibre::Quadratic { form: Box::new(form), weight: full }));
        }
        Ok((ext, Fibre::PerPoint(Box::new(move |x| if fs.iter().all(|f| ext.trace(f.eval(x)) == 0) { full } else { 0 }))))
    }
}

impl Countable for CurveSpec {
    fn base_field(&self) -> &BinaryField {
        self.field()
    }

    fn genus(&self) -> Result<u64> {
        Ok(genus_profile(self)?.total as u64)
    }

    fn fibre(&self, k: u32) -> Result<(BinaryField, Fibre)> {
        if !is_irreducible(self) {
            return Err(Error::Reducible);
        }
        let (ext, emb) = extend_and_embed(self.field(), k)?;
        let map = self.s().embed(&emb)?.linear_map();
        let kernel = 1u64 << map.kernel().len();
        let rs = self.r().iter().map(|r| r.embed(&emb)).collect::<Result<Vec<_>>>()?;
        // T(x) = sum_k (x R_k(x))^{2^{k-1}} is quadratic; T(x) lies in the
        // image of S iff its residue vanishes
        let form = move |x| {
            let t = rs
                .iter()
                .enumerate()
                .fold(FieldElem::ZERO, |acc, (i, r)| acc + ext.frobenius(ext.mul(x, r.eval(x)), i as i64));
            map.residue(t)
        };
        Ok((ext, Fibre::Quadratic { form: Box::new(form), weight: kernel }))
    }
}

impl Countable for Curve {
    fn base_field(&self) -> &BinaryField {
        self.field()
    }

    fn genus(&self) -> Result<u64> {
        match self {
            Curve::Single(c) => c.genus(),
            Curve::FibreProduct(fp) => fp.genus(),
        }
    }

    fn fibre(&self, k: u32) -> Result<(BinaryField, Fibre)> {
        match self {
            Curve::Single(c) => c.fibre(k),
            Curve::FibreProduct(fp) => fp.fibre(k),
        }
    }
}

fn prepare<C: Countable + ?Sized>(curve: &C, k: u32, budget: &Budget) -> Result<(BinaryField, Fibre)> {
    if k == 0 {
        return Err(Error::InvalidInput("extension degree must be positive".into()));
    }
    budget.check_points(curve.base_field().degree() as u64 * k as u64)?;
    curve.fibre(k)
}

/// #C(F_{q^k}) including the single point at infinity, summed over
/// disjoint x-ranges in parallel.
pub fn count_points<C: Countable + ?Sized>(curve: &C, k: u32, budget: &Budget) -> Result<u64> {
    let (ext, fibre) = prepare(curve, k, budget)?;
    let affine = match fibre {
        Fibre::Quadratic { form, weight } => gray::count_zeros(ext.degree(), &form) * weight,
        Fibre::PerPoint(f) => {
            let order = ext.order() as u64;
            (0..order.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| ext.elements(c * CHUNK, ((c + 1) * CHUNK).min(order)).map(&f).sum::<u64>())
                .sum()
        }
    };
    Ok(affine + 1)
}

/// Single-threaded reference for `count_points`: evaluates every x from
/// scratch.
pub fn count_points_sequential<C: Countable + ?Sized>(curve: &C, k: u32, budget: &Budget) -> Result<u64> {
    let (ext, fibre) = prepare(curve, k, budget)?;
    let affine = match fibre {
        Fibre::Quadratic { form, weight } => gray::count_zeros_direct(ext.degree(), &form) * weight,
        Fibre::PerPoint(f) => ext.elements(0, ext.order() as u64).map(f).sum(),
    };
    Ok(affine + 1)
}

pub fn count_series<C: Countable + ?Sized>(curve: &C, genus: u64, kmax: u32, budget: &Budget) -> Result<CountSeries> {
    let counts = (1..=kmax).map(|k| count_points(curve, k, budget)).collect::<Result<Vec<_>>>()?;
    Ok(CountSeries { field_degree: curve.base_field().degree(), genus, counts })
}

/// true, false, or "certified" in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Supersingular,
    NotSupersingular,
    Certified,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::Supersingular => s.serialize_bool(true),
            Verdict::NotSupersingular => s.serialize_bool(false),
            Verdict::Certified => s.serialize_str("certified"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PieceStatus {
    Numeric,
    Rational,
    CertifiedNotRecounted,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    /// alpha for quotients of S(y) = T(x); bitmask of components for fibre
    /// products
    pub label: String,
    pub genus: u64,
    /// degree over F_2 of the field the piece was counted over
    pub field_degree: u32,
    pub status: PieceStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lpoly: Option<Vec<String>>,
    pub supersingular: Verdict,
}

/// Numeric verdict for the whole curve, when it was affordable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericVerdict {
    pub field_degree: u32,
    pub counts: Vec<u64>,
    pub lpoly: Vec<String>,
    pub slopes: Vec<String>,
    pub supersingular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub genus: u64,
    pub strategy: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lpoly: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slopes: Option<Vec<String>>,
    pub supersingular: Verdict,
    pub pieces: Vec<PieceReport>,
    pub checks: BTreeMap<String, bool>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.supersingular != Verdict::NotSupersingular && self.checks.values().all(|&b| b)
    }
}

/// L-polynomial and Newton polygon from counts over k = 1..g+2 (the last two
/// as prediction checks, when affordable).
pub fn numeric_verdict<C: Countable + ?Sized>(curve: &C, genus: u64, budget: &Budget) -> Result<NumericVerdict> {
    let nd = curve.base_field().degree();
    let kmax = (1..=genus as u32 + 2).rev().find(|&k| budget.allows_points(nd as u64 * k as u64)).unwrap_or(0);
    if (kmax as u64) < genus.max(1) {
        return Err(Error::BudgetExceeded {
            needed_log2: (nd as u64 * genus.max(1)) as u32,
            budget_log2: budget.log2_points,
        });
    }
    let series = count_series(curve, genus, kmax, budget)?;
    let l = lpoly_from_counts(&series)?;
    let np = newton_polygon(&l, nd);
    Ok(NumericVerdict {
        field_degree: nd,
        counts: series.counts,
        lpoly: l.coeff_strings(),
        slopes: np.slope_strings(),
        supersingular: np.supersingular && l.degree() as u64 == 2 * genus,
    })
}

/// Exponents of the form 2^e + 1 (or 1): y^2 + y = x R(x), R linearized with
/// nonzero top coefficient, which is supersingular (or rational).
fn is_x_times_linearized(f: &SparsePoly) -> bool {
    f.terms().all(|(e, _)| e == 0 || e == 1 || (e > 2 && (e - 1).is_power_of_two()))
}

/// Restrict y^2 + y = f to the smallest subfield holding its coefficients.
fn descend(f: &SparsePoly) -> Result<SparsePoly> {
    let field = f.field();
    let coeffs: Vec<FieldElem> = f.terms().map(|(_, c)| c).collect();
    let d = field.minimal_subfield_degree(&coeffs);
    if d == field.degree() {
        return Ok(f.clone());
    }
    let sub = make_field(d)?;
    let emb = Embedding::new(sub, *field)?;
    let terms = f
        .terms()
        .map(|(e, c)| emb.preimage(c).map(|p| (e, p)).ok_or_else(|| Error::Internal("descent failed".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparsePoly::from_terms(sub, terms))
}

fn piece_report(label: String, rhs: &SparsePoly, budget: &Budget) -> Result<PieceReport> {
    let reduced = rhs.as_reduce();
    let genus = reduced.as_genus().map_err(|_| Error::Reducible)?;
    let small = descend(&reduced)?;
    let field_degree = small.field().degree();
    if genus == 0 {
        return Ok(PieceReport {
            label,
            genus,
            field_degree,
            status: PieceStatus::Rational,
            lpoly: Some(vec!["1".into()]),
            supersingular: Verdict::Supersingular,
        });
    }
    let q = QuotientCurve { alpha: FieldElem::ZERO, rhs: small, genus };
    match numeric_verdict(&q, genus, budget) {
        Ok(v) => Ok(PieceReport {
            label,
            genus,
            field_degree,
            status: PieceStatus::Numeric,
            lpoly: Some(v.lpoly),
            supersingular: if v.supersingular { Verdict::Supersingular } else { Verdict::NotSupersingular },
        }),
        Err(Error::BudgetExceeded { .. }) | Err(Error::Capacity { .. }) => {
            let certified = is_x_times_linearized(&reduced);
            Ok(PieceReport {
                label,
                genus,
                field_degree,
                status: if certified { PieceStatus::CertifiedNotRecounted } else { PieceStatus::NotCertified },
                lpoly: None,
                supersingular: if certified { Verdict::Certified } else { Verdict::NotSupersingular },
            })
        }
        Err(e) => Err(e),
    }
}

/// The index-2 quotients of the curve as right sides y^2 + y = f.
fn pieces(curve: &Curve, budget: &Budget) -> Result<Vec<(String, SparsePoly)>> {
    match curve {
        Curve::Single(c) => {
            let space = solve_alpha_space(c, budget)?;
            Ok(decomposition(c, &space)?.into_iter().map(|q| (q.alpha.to_hex(), q.rhs)).collect())
        }
        Curve::FibreProduct(fp) => {
            let n = fp.components.len();
            if n > PIECE_LIMIT_LOG2 {
                return Err(Error::BudgetExceeded { needed_log2: n as u32, budget_log2: PIECE_LIMIT_LOG2 as u32 });
            }
            Ok((1u64..(1 << n)).map(|m| (format!("{m:#x}"), fp.combination(m))).collect())
        }
    }
}

/// (a) the curve's own L-polynomial if affordable; otherwise (b) each
/// quotient numerically over its field of definition where affordable, and
/// (c) the x R(x) certificate for the rest.
pub fn verify_supersingular(curve: &Curve, budget: &Budget) -> Result<VerifyReport> {
    let genus = curve.genus()?;
    let mut checks = BTreeMap::new();
    match numeric_verdict(curve, genus, budget) {
        Ok(v) => {
            checks.insert("functional_equation".into(), true);
            checks.insert("lpoly_degree".into(), v.lpoly.len() as u64 == 2 * genus + 1);
            return Ok(VerifyReport {
                genus,
                strategy: "curve",
                lpoly: Some(v.lpoly),
                slopes: Some(v.slopes),
                supersingular: if v.supersingular { Verdict::Supersingular } else { Verdict::NotSupersingular },
                pieces: Vec::new(),
                checks,
            });
        }
        Err(Error::BudgetExceeded { .. }) | Err(Error::Capacity { .. }) => {}
        Err(Error::InconsistentCounts(_)) => {
            checks.insert("counts_consistent".into(), false);
            return Ok(VerifyReport {
                genus,
                strategy: "curve",
                lpoly: None,
                slopes: None,
                supersingular: Verdict::NotSupersingular,
                pieces: Vec::new(),
                checks,
            });
        }
        Err(e) => return Err(e),
    }
    let reports = pieces(curve, budget)?
        .into_par_iter()
        .map(|(label, rhs)| piece_report(label, &rhs, budget))
        .collect::<Result<Vec<_>>>()?;
    checks.insert("piece_genus_sum".into(), reports.iter().map(|p| p.genus).sum::<u64>() == genus);
    let verdict = if reports.iter().any(|p| p.supersingular == Verdict::NotSupersingular) {
        Verdict::NotSupersingular
    } else if reports.iter().all(|p| p.supersingular == Verdict::Supersingular) {
        Verdict::Supersingular
    } else {
        Verdict::Certified
    };
    Ok(VerifyReport {
        genus,
        strategy: "quotients",
        lpoly: None,
        slopes: None,
        supersingular: verdict,
        pieces: reports,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityRow {
    pub k: u32,
    /// #C - (Q + 1) over the degree-k extension of the compositum
    pub curve: i128,
    /// sum of the same over all quotients
    pub quotients: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub compositum_degree: u32,
    pub rows: Vec<AdditivityRow>,
    pub holds: bool,
}

/// Degree over the curve's field of the field where ker S and all alpha live.
pub fn compositum_degree(c: &CurveSpec) -> Result<u64> {
    let ks = c.s().splitting_degree()?;
    let ka = crate::quotient::alpha_equation(c).splitting_degree()?;
    Ok(ks.lcm(&ka))
}

/// Total points enumerated for one additivity row (the curve and all its
/// quotients) may exceed a single count's budget by this factor, as log2.
pub const ADDITIVITY_SLACK_LOG2: u32 = 4;

/// Compares #C - (Q+1) with the sum over quotients of #C_alpha - (Q+1) over
/// the compositum F_Q and its extensions up to kmax. Rows are produced for
/// every k that fits the budget; k = 1 must fit.
pub fn powersum_additivity(c: &CurveSpec, kmax: u32, budget: &Budget) -> Result<AdditivityReport> {
    let kc = compositum_degree(c)?;
    let space = solve_alpha_space_in(c, kc, budget)?;
    let amb = space.ambient;
    let quotients = decomposition(c, &space)?;
    let pieces_log2 = 64 - (quotients.len() as u64).leading_zeros();
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let bits = amb.degree() as u64 * k as u64;
        let total_ok = bits + pieces_log2 as u64 <= (budget.log2_points + ADDITIVITY_SLACK_LOG2) as u64;
        if !budget.allows_points(bits) || (k > 1 && !total_ok) {
            if k == 1 {
                budget.check_points(amb.degree() as u64)?;
            }
            break;
        }
        let base = (1i128 << (amb.degree() * k)) + 1;
        let curve = count_points(c, kc as u32 * k, budget)? as i128 - base;
        let mut sum = 0i128;
        for q in &quotients {
            sum += count_points(q, k, budget)? as i128 - base;
        }
        rows.push(AdditivityRow { k, curve, quotients: sum });
    }
    let holds = rows.iter().all(|r| r.curve == r.quotients);
    Ok(AdditivityReport { compositum_degree: amb.degree(), rows, holds })
}

pub fn powersum_additivity_check(c: &CurveSpec, kmax: u32, budget: &Budget) -> Result<bool> {
    let r = powersum_additivity(c, kmax, budget)?;
    if (r.rows.len() as u32) < kmax {
        let needed = r.compositum_degree * (r.rows.len() as u32 + 1);
        return Err(Error::BudgetExceeded { needed_log2: needed, budget_log2: budget.log2_points });
    }
    Ok(r.holds)
}
