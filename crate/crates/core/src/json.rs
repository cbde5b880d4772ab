//! JSON documents for exact vectors. Rationals travel as decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::basis::Basis;
use crate::canon::CanonicalForm;
use crate::error::CertificateError;
use crate::flag::{FlagVector, TypeSigma};
use crate::vector::RationalVector;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<Rational, CertificateError> {
        parse_rational(&self.num, &self.den)
    }
}

pub fn parse_rational(num: &str, den: &str) -> Result<Rational, CertificateError> {
    let bad = || CertificateError::BadRational(format!("{num}/{den}"));
    let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
    let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    #[serde(rename = "classKey")]
    pub class_key: String,
    pub numerator: String,
    pub denominator: String,
}

/// Sparse vector document shared by level-5 vectors and flag vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorDocument {
    /// Hex key of the labeled type; absent for unlabeled vectors.
    #[serde(rename = "type", skip_serializing_if = "Option::is_none", default)]
    pub type_key: Option<String>,
    pub level: usize,
    pub entries: Vec<EntryJson>,
}

fn entry(key: String, r: &Rational) -> EntryJson {
    EntryJson { class_key: key, numerator: r.numer().to_string(), denominator: r.denom().to_string() }
}

impl RationalVector {
    pub fn to_document(&self) -> VectorDocument {
        let top = Basis::top();
        let entries = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| entry(top.key(i).to_hex(), c))
            .collect();
        VectorDocument { type_key: None, level: top.level(), entries }
    }

    pub fn from_document(doc: &VectorDocument) -> Result<Self, CertificateError> {
        let top = Basis::top();
        if doc.level != top.level() || doc.type_key.is_some() {
            return Err(CertificateError::UnknownCandidate("expected an unlabeled level-5 vector".into()));
        }
        let mut v = RationalVector::zeros();
        for e in &doc.entries {
            let key = CanonicalForm::from_hex(&e.class_key)
                .map_err(|_| CertificateError::UnknownCandidate(e.class_key.clone()))?;
            let i = top.index_of_key(&key).ok_or_else(|| CertificateError::UnknownCandidate(e.class_key.clone()))?;
            v.set(i, parse_rational(&e.numerator, &e.denominator)?);
        }
        Ok(v)
    }
}

impl FlagVector {
    pub fn to_document(&self) -> VectorDocument {
        let entries = self.terms().map(|(k, c)| entry(k.to_hex(), c)).collect();
        VectorDocument { type_key: Some(self.sigma().key().to_hex()), level: self.level(), entries }
    }

    pub fn from_document(doc: &VectorDocument) -> Result<Self, CertificateError> {
        let bad = |s: &str| CertificateError::UnknownCandidate(s.to_string());
        let type_hex = doc.type_key.as_deref().ok_or_else(|| bad("missing type"))?;
        let sigma_key = CanonicalForm::from_hex(type_hex).map_err(|_| bad(type_hex))?;
        let sigma = TypeSigma::new(sigma_key.representative());
        let mut v = FlagVector::new(sigma, doc.level)?;
        for e in &doc.entries {
            let form = CanonicalForm::from_hex(&e.class_key).map_err(|_| bad(&e.class_key))?;
            if form.n() != doc.level {
                return Err(bad(&e.class_key));
            }
            let flag = crate::flag::Flag::new(v.sigma(), form.representative()).map_err(|_| bad(&e.class_key))?;
            if flag.key().form() != form {
                return Err(bad(&e.class_key));
            }
            v.add_term(&flag, parse_rational(&e.numerator, &e.denominator)?)?;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::{named_element, SquareName};

    #[test]
    fn rational_vector_round_trip() {
        let mut v = RationalVector::zeros();
        v.set(3, Rational::new((-7).into(), 12.into()));
        v.set(141, Rational::new(134_730_108_347_752_975i64.into(), 4_596_007_971_038i64.into()));
        let text = serde_json::to_string(&v.to_document()).unwrap();
        let back: VectorDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(RationalVector::from_document(&back).unwrap(), v);
    }

    #[test]
    fn flag_vector_round_trip() {
        let w = named_element(SquareName::WB, &"113".parse().unwrap()).unwrap();
        let doc = w.to_document();
        assert_eq!(doc.entries.len(), 7);
        let text = serde_json::to_string(&doc).unwrap();
        let back = FlagVector::from_document(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.to_document(), doc);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_rational("1", "0").is_err());
        assert!(parse_rational("x", "2").is_err());
        assert_eq!(parse_rational("-4", "6").unwrap(), Rational::new((-2).into(), 3.into()));
    }
}
