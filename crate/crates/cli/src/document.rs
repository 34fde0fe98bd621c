//! JSON form of a telescoping result.
//!
//! Integers are always decimal strings so coefficients of any size survive
//! the trip through JSON.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use franel::algebra::{BiPoly, RatFunc, UniPoly};
use franel::operator::RecurrenceOperator;
use franel::telescoper::Certificate;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("invalid document: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub coef: String,
    pub deg_n: u32,
    pub deg_k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub num: Vec<Monomial>,
    pub den: Vec<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool_version: String,
    pub timestamp: String,
    pub r_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDocument {
    pub schema_version: u32,
    pub s: u32,
    pub order: usize,
    /// `c_0..c_r`, each listed from degree 0 upward.
    pub coeffs: Vec<Vec<String>>,
    pub certificate: CertificateDoc,
    pub provenance: Provenance,
}

fn poly_to_doc(p: &UniPoly) -> Vec<String> {
    p.coeffs().iter().map(BigInt::to_string).collect()
}

fn bipoly_to_doc(p: &BiPoly) -> Vec<Monomial> {
    p.terms().map(|(&(deg_n, deg_k), c)| Monomial { coef: c.to_string(), deg_n, deg_k }).collect()
}

fn parse_int(s: &str) -> Result<BigInt, DocumentError> {
    s.parse().map_err(|_| DocumentError::Invalid(format!("not an integer: {s:?}")))
}

fn doc_to_poly(c: &[String]) -> Result<UniPoly, DocumentError> {
    Ok(UniPoly::from_coeffs(c.iter().map(|x| parse_int(x)).collect::<Result<_, _>>()?))
}

fn doc_to_bipoly(ms: &[Monomial]) -> Result<BiPoly, DocumentError> {
    let terms = ms
        .iter()
        .map(|m| Ok((parse_int(&m.coef)?, m.deg_n, m.deg_k)))
        .collect::<Result<Vec<_>, DocumentError>>()?;
    Ok(BiPoly::from_terms(terms))
}

impl OperatorDocument {
    pub fn new(s: u32, op: &RecurrenceOperator, cert: &Certificate, provenance: Provenance) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            s,
            order: op.order(),
            coeffs: op.coeffs().iter().map(poly_to_doc).collect(),
            certificate: CertificateDoc { num: bipoly_to_doc(cert.r().num()), den: bipoly_to_doc(cert.r().den()) },
            provenance,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Schema(doc.schema_version));
        }
        Ok(doc)
    }

    /// Pretty JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// The operator exactly as stored (no renormalization) and the
    /// certificate in lowest terms.
    pub fn to_pair(&self) -> Result<(RecurrenceOperator, Certificate), DocumentError> {
        if self.s < 1 {
            return Err(DocumentError::Invalid("s must be at least 1".into()));
        }
        let coeffs = self.coeffs.iter().map(|c| doc_to_poly(c)).collect::<Result<Vec<_>, _>>()?;
        if coeffs.iter().all(UniPoly::is_zero) {
            return Err(DocumentError::Invalid("operator has no nonzero coefficient".into()));
        }
        let op = RecurrenceOperator::from_raw(coeffs);
        if op.order() != self.order {
            return Err(DocumentError::Invalid(format!("order {} but {} coefficients", self.order, self.coeffs.len())));
        }
        let num = doc_to_bipoly(&self.certificate.num)?;
        let den = doc_to_bipoly(&self.certificate.den)?;
        let r = RatFunc::new(num, den).map_err(|e| DocumentError::Invalid(format!("certificate: {e}")))?;
        Ok((op, Certificate::new(r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn provenance() -> Provenance {
        Provenance { tool_version: "0.0.0".into(), timestamp: "1970-01-01T00:00:00Z".into(), r_max: 2 }
    }

    #[test]
    fn roundtrip_small() {
        let op = RecurrenceOperator::from_i64s(&[&[-2], &[1]]).unwrap();
        let cert = Certificate::new(RatFunc::new(BiPoly::k(), BiPoly::linear(1, -1, 1)).unwrap());
        let doc = OperatorDocument::new(1, &op, &cert, provenance());
        let back = OperatorDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_pair().unwrap(), (op, cert));
        assert!(doc.to_json().contains("\"-2\""));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(OperatorDocument::from_json("{"), Err(DocumentError::Json(_))));
        let op = RecurrenceOperator::identity();
        let mut doc = OperatorDocument::new(1, &op, &Certificate::zero(), provenance());
        doc.schema_version = 2;
        assert!(matches!(OperatorDocument::from_json(&doc.to_json()), Err(DocumentError::Schema(2))));
        doc.schema_version = 1;
        doc.coeffs = vec![vec!["x".into()]];
        assert!(matches!(doc.to_pair(), Err(DocumentError::Invalid(_))));
        doc.coeffs = vec![vec!["0".into()]];
        assert!(matches!(doc.to_pair(), Err(DocumentError::Invalid(_))));
    }
}
