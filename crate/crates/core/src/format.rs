//! JSON documents: curve files, linearized polynomials and spaces of them.
//!
//! Serialization is deterministic (fixed key order, canonical hex), so a file
//! written here parses and re-serializes to the same bytes.

use serde::{Deserialize, Serialize};

use crate::builder::{Curve, CurveSpec, FibreProductSpec, GenusCertificate, Stratum};
use crate::error::{Error, Result};
use crate::field::{BinaryField, FieldElem};
use crate::linops::{LinPoly, SparsePoly};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Construction {
    pub genus: u64,
    /// "f2" or "f2m"
    pub mode: String,
    pub glue: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub certificate: GenusCertificate,
    pub construction: Construction,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFile {
    pub curve: Curve,
    pub meta: Option<Meta>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    exp: u64,
    coeff: FieldElem,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SparseDoc {
    terms: Vec<TermDoc>,
}

// Documents are dispatched on "kind" by hand: serde's tagged enums buffer
// values in a form that cannot hold the u128 certificate entries.
#[derive(Deserialize)]
struct KindDoc {
    kind: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SingleDoc {
    kind: String,
    field: BinaryField,
    #[serde(rename = "S")]
    s: Vec<FieldElem>,
    #[serde(rename = "R")]
    r: Vec<Vec<FieldElem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FibreDoc {
    kind: String,
    field: BinaryField,
    components: Vec<SparseDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

const SINGLE: &str = "single";
const FIBRE_PRODUCT: &str = "fibre_product";

fn sparse_doc(p: &SparsePoly) -> SparseDoc {
    // increasing exponent order, like the in-memory map
    SparseDoc { terms: p.terms().map(|(exp, coeff)| TermDoc { exp, coeff }).collect() }
}

fn check_elems(field: &BinaryField, elems: &[FieldElem]) -> Result<()> {
    match elems.iter().find(|e| !field.contains(**e)) {
        Some(e) => Err(Error::InvalidInput(format!("{e} is not an element of GF(2^{})", field.degree()))),
        None => Ok(()),
    }
}

/// Coefficient lists must be trimmed so that they re-serialize identically.
fn strict_linpoly(field: BinaryField, coeffs: Vec<FieldElem>) -> Result<LinPoly> {
    check_elems(&field, &coeffs)?;
    let n = coeffs.len();
    let p = LinPoly::new(field, coeffs)?;
    if p.coeffs().len() != n {
        return Err(Error::InvalidInput("coefficient list has trailing zeros".into()));
    }
    Ok(p)
}

fn strict_sparse(field: BinaryField, doc: SparseDoc) -> Result<SparsePoly> {
    let exps: Vec<u64> = doc.terms.iter().map(|t| t.exp).collect();
    if exps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("terms must have strictly increasing exponents".into()));
    }
    if doc.terms.iter().any(|t| t.coeff.is_zero()) {
        return Err(Error::InvalidInput("terms must have nonzero coefficients".into()));
    }
    check_elems(&field, &doc.terms.iter().map(|t| t.coeff).collect::<Vec<_>>())?;
    Ok(SparsePoly::from_terms(field, doc.terms.into_iter().map(|t| (t.exp, t.coeff))))
}

/// Consecutive runs of monomials c x^{2^u+1} with the same u, u increasing.
pub fn infer_strata(components: &[SparsePoly]) -> Result<Vec<Stratum>> {
    let mut strata: Vec<Stratum> = Vec::new();
    for c in components {
        let u = match (c.len(), c.degree()) {
            (1, Some(e)) if e > 2 && (e - 1).is_power_of_two() => (e - 1).trailing_zeros(),
            _ => return Err(Error::InvalidInput("components must be monomials c x^(2^u+1), u >= 1".into())),
        };
        match strata.last_mut() {
            Some(s) if s.u == u => s.dim += 1,
            Some(s) if s.u > u => return Err(Error::InvalidInput("components must be ordered by exponent".into())),
            _ => strata.push(Stratum { u, dim: 1 }),
        }
    }
    Ok(strata)
}

impl CurveFile {
    pub fn new(curve: Curve, meta: Option<Meta>) -> CurveFile {
        CurveFile { curve, meta }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let meta = self.meta.clone();
        let text = match &self.curve {
            Curve::Single(c) => serde_json::to_string_pretty(&SingleDoc {
                kind: SINGLE.into(),
                field: *c.field(),
                s: c.s().coeffs().to_vec(),
                r: c.r().iter().map(|r| r.coeffs().to_vec()).collect(),
                meta,
            }),
            Curve::FibreProduct(fp) => serde_json::to_string_pretty(&FibreDoc {
                kind: FIBRE_PRODUCT.into(),
                field: fp.field,
                components: fp.components.iter().map(sparse_doc).collect(),
                meta,
            }),
        };
        let mut out = text.expect("curve documents always serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<CurveFile> {
        let bad = |e: serde_json::Error| Error::InvalidInput(format!("curve file: {e}"));
        let kind: KindDoc = serde_json::from_str(text).map_err(bad)?;
        match kind.kind.as_str() {
            SINGLE => {
                let SingleDoc { field, s, r, meta, .. } = serde_json::from_str(text).map_err(bad)?;
                let s = strict_linpoly(field, s)?;
                let r = r.into_iter().map(|c| strict_linpoly(field, c)).collect::<Result<Vec<_>>>()?;
                Ok(CurveFile { curve: Curve::Single(CurveSpec::new(field, s, r)?), meta })
            }
            FIBRE_PRODUCT => {
                let FibreDoc { field, components, meta, .. } = serde_json::from_str(text).map_err(bad)?;
                if components.is_empty() {
                    return Err(Error::InvalidInput("fibre product needs at least one component".into()));
                }
                let components =
                    components.into_iter().map(|c| strict_sparse(field, c)).collect::<Result<Vec<_>>>()?;
                let strata = infer_strata(&components)?;
                Ok(CurveFile { curve: Curve::FibreProduct(FibreProductSpec { field, components, strata }), meta })
            }
            other => Err(Error::InvalidInput(format!("unknown curve kind {other:?}"))),
        }
    }
}

/// `{"field": ..., "coeffs": [...]}`: sum_i coeffs[i] x^{2^i}.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinPolyDoc {
    field: BinaryField,
    coeffs: Vec<FieldElem>,
}

/// `{"field": ..., "basis": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    field: BinaryField,
    basis: Vec<Vec<FieldElem>>,
}

pub fn linpoly_to_json(p: &LinPoly) -> String {
    let doc = LinPolyDoc { field: *p.field(), coeffs: p.coeffs().to_vec() };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn linpoly_from_json(text: &str) -> Result<LinPoly> {
    let doc: LinPolyDoc = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("polynomial file: {e}")))?;
    strict_linpoly(doc.field, doc.coeffs)
}

pub fn space_to_json(basis: &[LinPoly]) -> Result<String> {
    let field = *basis.first().ok_or_else(|| Error::InvalidInput("empty basis".into()))?.field();
    let doc = SpaceDoc { field, basis: basis.iter().map(|p| p.coeffs().to_vec()).collect() };
    Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
}

pub fn space_from_json(text: &str) -> Result<Vec<LinPoly>> {
    let doc: SpaceDoc = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("space file: {e}")))?;
    doc.basis.into_iter().map(|c| strict_linpoly(doc.field, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_components, build_prime_field, certificate, glue_single_block};
    use crate::decomp::decompose;
    use crate::field::make_field;

    fn meta(g: u64, cert: GenusCertificate) -> Option<Meta> {
        Some(Meta {
            certificate: cert,
            construction: Construction { genus: g, mode: "f2".into(), glue: false },
            version: VERSION.into(),
        })
    }

    #[test]
    fn round_trips() {
        for g in [1u64, 5, 30, 221] {
            let d = decompose(g).unwrap();
            let fp = build_components(&d).unwrap();
            let cert = certificate(&fp).unwrap();
            let files = vec![
                CurveFile::new(Curve::Single(build_prime_field(&d).unwrap()), meta(g, cert.clone())),
                CurveFile::new(Curve::FibreProduct(fp), None),
            ];
            for f in files {
                let text = f.to_json();
                let back = CurveFile::from_json(&text).unwrap();
                assert_eq!(back, f);
                assert_eq!(back.to_json(), text);
            }
        }
        let glued = glue_single_block(&build_components(&decompose(30).unwrap()).unwrap()).unwrap();
        let f = CurveFile::new(Curve::Single(glued), None);
        assert_eq!(CurveFile::from_json(&f.to_json()).unwrap().to_json(), f.to_json());
    }

    #[test]
    fn shape() {
        let c = build_prime_field(&decompose(1).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&CurveFile::new(Curve::Single(c), None).to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"kind": "single", "field": {"degree": 1, "modulus": "0x2"}, "S": ["0x1", "0x1"], "R": [["0x0", "0x1"]]})
        );
        let fp = build_components(&decompose(2).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&CurveFile::new(Curve::FibreProduct(fp), None).to_json()).unwrap();
        assert_eq!(v["components"][0], serde_json::json!({"terms": [{"exp": 5, "coeff": "0x1"}]}));
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = [
            r#"{"kind":"single","field":{"degree":1,"modulus":"0x2"},"S":["0x1","0x1"],"R":[["0x1"]],"extra":1}"#,
            r#"{"kind":"single","field":{"degree":1,"modulus":"0x2"},"S":["0x1","0x1","0x0"],"R":[["0x1"]]}"#,
            r#"{"kind":"single","field":{"degree":1,"modulus":"0x2"},"S":["0x1","0x1"],"R":[["0x01"]]}"#,
            r#"{"kind":"single","field":{"degree":1,"modulus":"0x2"},"S":["0x1","0x1"],"R":[["0x2"]]}"#,
            r#"{"kind":"single","field":{"degree":2,"modulus":"0x5"},"S":["0x1","0x1"],"R":[["0x1"]]}"#,
            r#"{"kind":"single","field":{"degree":1,"modulus":"0x2"},"S":["0x1","0x1"],"R":[]}"#,
            r#"{"kind":"fibre_product","field":{"degree":1,"modulus":"0x2"},"components":[{"terms":[{"exp":4,"coeff":"0x1"}]}]}"#,
            r#"{"kind":"elliptic"}"#,
        ];
        for text in bad {
            assert!(matches!(CurveFile::from_json(text), Err(Error::InvalidInput(_))), "{text}");
        }
    }

    #[test]
    fn polynomial_documents() {
        let f = make_field(4).unwrap();
        let p = LinPoly::new(f, vec![FieldElem::ZERO, f.generator(), FieldElem::ONE]).unwrap();
        assert_eq!(linpoly_from_json(&linpoly_to_json(&p)).unwrap(), p);
        let space = vec![p.clone(), LinPoly::identity(f)];
        assert_eq!(space_from_json(&space_to_json(&space).unwrap()).unwrap(), space);
    }
}
