//! L-polynomials from point counts, and their 2-adic Newton polygons.
//! Everything here is exact integer arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// #C(F_{q^k}) for k = 1, 2, ..., with q = 2^field_degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountSeries {
    pub field_degree: u32,
    pub genus: u64,
    pub counts: Vec<u64>,
}

/// c_0 + c_1 T + ... + c_{2g} T^{2g} over q = 2^field_degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPoly {
    pub field_degree: u32,
    pub coeffs: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NPReport {
    /// in units of q: every slope is 1/2 exactly when the polygon is the
    /// supersingular one
    pub slopes: Vec<Ratio<u64>>,
    pub supersingular: bool,
}

impl NPReport {
    pub fn slope_strings(&self) -> Vec<String> {
        self.slopes.iter().map(|s| s.to_string()).collect()
    }
}

fn q_pow(field_degree: u32, k: u64) -> BigInt {
    BigInt::one() << (field_degree as u64 * k)
}

/// (N - q^k - 1)^2 <= 4 g^2 q^k
fn weil_ok(field_degree: u32, genus: u64, k: u64, count: u64) -> bool {
    let qk = q_pow(field_degree, k);
    let dev = BigInt::from(count) - &qk - 1;
    let g = BigInt::from(genus);
    &dev * &dev <= BigInt::from(4) * &g * &g * qk
}

impl CountSeries {
    pub fn weil_violations(&self) -> Vec<u64> {
        (1..=self.counts.len() as u64)
            .filter(|&k| {
                let n = self.counts[k as usize - 1];
                n < 1 || !weil_ok(self.field_degree, self.genus, k, n)
            })
            .collect()
    }
}

impl LPoly {
    pub fn genus(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// c_0 = 1, c_{2g} = q^g and c_{2g-i} = q^{g-i} c_i.
    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.genus();
        if self.coeffs.len() != 2 * g + 1 || !self.coeffs[0].is_one() {
            return false;
        }
        (0..=g).all(|i| self.coeffs[2 * g - i] == q_pow(self.field_degree, (g - i) as u64) * &self.coeffs[i])
    }

    /// Power sums S_1..S_kmax of the reciprocal roots.
    pub fn power_sums(&self, kmax: usize) -> Vec<BigInt> {
        let c = |i: usize| self.coeffs.get(i).cloned().unwrap_or_default();
        let mut s: Vec<BigInt> = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            let mut acc = -BigInt::from(k) * c(k);
            for j in 1..k {
                acc -= &s[j - 1] * c(k - j);
            }
            s.push(acc);
        }
        s
    }

    /// #C(F_{q^k}) = q^k + 1 - S_k for k = 1..kmax.
    pub fn predicted_counts(&self, kmax: usize) -> Vec<BigInt> {
        self.power_sums(kmax)
            .into_iter()
            .enumerate()
            .map(|(i, s)| q_pow(self.field_degree, i as u64 + 1) + 1 - s)
            .collect()
    }
}

/// Newton identities for c_1..c_g, the functional equation for the rest.
/// Counts beyond k = g must agree with the prediction of the result.
pub fn lpoly_from_counts(series: &CountSeries) -> Result<LPoly> {
    let g = series.genus as usize;
    let nd = series.field_degree;
    if series.counts.len() < g {
        return Err(Error::InvalidInput(format!("need {g} counts, got {}", series.counts.len())));
    }
    if let Some(&k) = series.weil_violations().first() {
        return Err(Error::InconsistentCounts(format!(
            "count {} over degree-{k} extension violates the Weil bound for genus {g}",
            series.counts[k as usize - 1]
        )));
    }
    let s: Vec<BigInt> = series
        .counts
        .iter()
        .enumerate()
        .map(|(i, &n)| q_pow(nd, i as u64 + 1) + 1 - BigInt::from(n))
        .collect();
    let mut c = vec![BigInt::one()];
    for i in 1..=g {
        let mut acc = BigInt::zero();
        for j in 1..=i {
            acc += &s[j - 1] * &c[i - j];
        }
        let (quot, rem) = (-acc).div_rem(&BigInt::from(i));
        if !rem.is_zero() {
            return Err(Error::InconsistentCounts(format!("Newton identity {i} is not integral")));
        }
        c.push(quot);
    }
    for i in (0..g).rev() {
        let v = q_pow(nd, (g - i) as u64) * &c[i];
        c.push(v);
    }
    let l = LPoly { field_degree: nd, coeffs: c };
    let predicted = l.predicted_counts(series.counts.len());
    for (k, (p, &n)) in predicted.iter().zip(&series.counts).enumerate().skip(g) {
        if *p != BigInt::from(n) {
            return Err(Error::InconsistentCounts(format!(
                "predicted {p} points over degree-{} extension, counted {n}",
                k + 1
            )));
        }
    }
    Ok(l)
}

fn v2(c: &BigInt) -> u64 {
    c.trailing_zeros().expect("nonzero")
}

/// Lower convex hull of (i, v_2(c_i)) over nonzero c_i. Slopes are divided
/// by the field degree N so that they are valuations in units of q.
pub fn newton_polygon(l: &LPoly, field_degree: u32) -> NPReport {
    let pts: Vec<(u64, u64)> =
        l.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u64, v2(c))).collect();
    let mut hull: Vec<(u64, u64)> = Vec::new();
    for &p in &pts {
        // pop while the last hull point lies on or above the segment hull[-2] -> p
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let lhs = (b.1 as i128 - a.1 as i128) * (p.0 as i128 - a.0 as i128);
            let rhs = (p.1 as i128 - a.1 as i128) * (b.0 as i128 - a.0 as i128);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let n = field_degree as u64;
    let mut slopes = Vec::new();
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 as i128 - w[0].1 as i128);
        // the hull of a valid L-polynomial is nondecreasing; clamp defensively
        let s = Ratio::new(dy.max(0) as u64, dx * n);
        slopes.extend(std::iter::repeat_n(s, dx as usize));
    }
    let two_g = l.degree() as u64;
    let supersingular = l.satisfies_functional_equation()
        && pts.last().map(|&(i, v)| i == two_g && 2 * v == two_g * n).unwrap_or(false)
        && pts.iter().all(|&(i, v)| 2 * v >= i * n);
    NPReport { slopes, supersingular }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(coeffs: &[i64]) -> LPoly {
        LPoly { field_degree: 1, coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect() }
    }

    #[test]
    fn elliptic_from_counts() {
        let l = lpoly_from_counts(&CountSeries { field_degree: 1, genus: 1, counts: vec![3, 9] }).unwrap();
        assert_eq!(l, lp(&[1, 0, 2]));
        let l = lpoly_from_counts(&CountSeries { field_degree: 1, genus: 2, counts: vec![3, 5] }).unwrap();
        assert_eq!(l, lp(&[1, 0, 0, 0, 4]));
        let l = lpoly_from_counts(&CountSeries { field_degree: 1, genus: 0, counts: vec![] }).unwrap();
        assert_eq!(l, lp(&[1]));
    }

    #[test]
    fn inconsistent_counts() {
        // Weil: |N - 3| <= 2 sqrt 2 over F_2 for genus 1
        assert!(matches!(
            lpoly_from_counts(&CountSeries { field_degree: 1, genus: 1, counts: vec![7] }),
            Err(Error::InconsistentCounts(_))
        ));
        // y^2+y=x^3 has 9 points over F_4 and 3 over F_8
        assert!(lpoly_from_counts(&CountSeries { field_degree: 1, genus: 1, counts: vec![3, 9, 9] }).is_ok());
        assert!(matches!(
            lpoly_from_counts(&CountSeries { field_degree: 1, genus: 1, counts: vec![3, 9, 11] }),
            Err(Error::InconsistentCounts(_))
        ));
        // S_1 = 1, S_2 = 0: c_2 = -(S_1 c_1 + S_2)/2 = 1/2
        assert!(matches!(
            lpoly_from_counts(&CountSeries { field_degree: 1, genus: 2, counts: vec![2, 5] }),
            Err(Error::InconsistentCounts(_))
        ));
    }

    #[test]
    fn predictions_round_trip() {
        let l = lp(&[1, 0, 2]);
        let p: Vec<String> = l.predicted_counts(4).iter().map(|c| c.to_string()).collect();
        assert_eq!(p, vec!["3", "9", "9", "9"]);
    }

    #[test]
    fn newton_polygons() {
        let r = newton_polygon(&lp(&[1, 0, 2]), 1);
        assert_eq!(r.slope_strings(), vec!["1/2", "1/2"]);
        assert!(r.supersingular);
        let r = newton_polygon(&lp(&[1, 1, 2]), 1);
        assert_eq!(r.slope_strings(), vec!["0", "1"]);
        assert!(!r.supersingular);
        let r = newton_polygon(&lp(&[1, 0, 0, 0, 4]), 1);
        assert_eq!(r.slope_strings(), vec!["1/2"; 4]);
        assert!(r.supersingular);
        // q = 4: 1 + 4T^2 has slopes v_2(4)/(2*2) = 1/2
        let l = LPoly { field_degree: 2, coeffs: vec![BigInt::from(1), BigInt::from(0), BigInt::from(4)] };
        assert!(newton_polygon(&l, 2).supersingular);
        let l = LPoly { field_degree: 2, coeffs: vec![BigInt::from(1), BigInt::from(2), BigInt::from(4)] };
        let r = newton_polygon(&l, 2);
        assert_eq!(r.slope_strings(), vec!["1/2", "1/2"]);
        assert!(r.supersingular);
        let l = LPoly { field_degree: 2, coeffs: vec![BigInt::from(1), BigInt::from(1), BigInt::from(4)] };
        assert!(!newton_polygon(&l, 2).supersingular);
    }

    #[test]
    fn slopes_sum_to_endpoint() {
        for coeffs in [[1i64, 1, 2], [1, 0, 2], [1, -2, 2], [1, 2, 2]] {
            let r = newton_polygon(&lp(&coeffs), 1);
            let total: Ratio<u64> = r.slopes.iter().sum();
            assert_eq!(total, Ratio::from_integer(1));
        }
    }
}
