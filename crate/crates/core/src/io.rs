//! JSON forms of quivers, CoHA elements and quantum-algebra elements.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coha::{element, CohaElement, CohaError};
use crate::poly::{parse_poly, PolyError};
use crate::quantum::{QElement, QScalar, QuantumError, ScalarError};
use crate::quiver::{DimVector, Quiver, QuiverError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coha(#[from] CohaError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// `{"vertices": n, "arrows": [[tail, head], ...], "blocks": [[...], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverFile {
    pub vertices: usize,
    #[serde(default)]
    pub arrows: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
}

impl QuiverFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn quiver(&self) -> Result<Quiver, IoError> {
        let arrows: Vec<(usize, usize)> = self.arrows.iter().map(|a| (a[0], a[1])).collect();
        Ok(Quiver::new(self.vertices, &arrows)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub gamma: Vec<u32>,
    pub poly: String,
}

impl From<&CohaElement> for ElementJson {
    fn from(e: &CohaElement) -> Self {
        ElementJson {
            gamma: e.grade().entries().to_vec(),
            poly: e.poly().to_string(),
        }
    }
}

impl ElementJson {
    pub fn to_element(&self, q: &Arc<Quiver>) -> Result<CohaElement, IoError> {
        Ok(element(
            q,
            DimVector::new(self.gamma.clone()),
            parse_poly(&self.poly)?,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarTermJson {
    pub gamma: Vec<u32>,
    pub scalar: String,
}

pub fn qelement_to_json(e: &QElement) -> Vec<ScalarTermJson> {
    e.terms()
        .iter()
        .map(|(g, c)| ScalarTermJson {
            gamma: g.entries().to_vec(),
            scalar: c.to_string(),
        })
        .collect()
}

pub fn qelement_from_json(
    q: &Arc<Quiver>,
    bound: DimVector,
    terms: &[ScalarTermJson],
) -> Result<QElement, IoError> {
    let mut e = QElement::zero(q, bound)?;
    for t in terms {
        e.add_term(DimVector::new(t.gamma.clone()), QScalar::parse(&t.scalar)?)?;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::dilog;

    #[test]
    fn quiver_file() {
        let f = QuiverFile::parse(
            r#"{"vertices": 3, "arrows": [[2, 1], [3, 2]], "blocks": [[1], [2, 3]]}"#,
        )
        .unwrap();
        assert_eq!(
            f.quiver().unwrap(),
            Quiver::new(3, &[(2, 1), (3, 2)]).unwrap()
        );
        assert_eq!(f.blocks, Some(vec![vec![1], vec![2, 3]]));
        let back = QuiverFile::parse(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(QuiverFile::parse(r#"{"vertices": 2, "arrows": [[1, 2]]}"#)
            .unwrap()
            .quiver()
            .is_err());
    }

    #[test]
    fn element_round_trip() {
        let q = Arc::new(Quiver::new(3, &[(2, 1), (3, 2)]).unwrap());
        let j = ElementJson {
            gamma: vec![0, 1, 1],
            poly: "ω[2,1]*ω[3,1]".into(),
        };
        let e = j.to_element(&q).unwrap();
        assert_eq!(ElementJson::from(&e), j);
        let bad = ElementJson {
            gamma: vec![2, 0, 0],
            poly: "ω[1,1]".into(),
        };
        assert!(matches!(
            bad.to_element(&q),
            Err(IoError::Coha(CohaError::NotSymmetric))
        ));
    }

    #[test]
    fn qelement_round_trip() {
        let q = Arc::new(Quiver::a1());
        let e = dilog(&q, &DimVector::new(vec![1]), &DimVector::new(vec![3])).unwrap();
        let json = qelement_to_json(&e);
        assert_eq!(json.len(), 4);
        assert_eq!(
            qelement_from_json(&q, DimVector::new(vec![3]), &json).unwrap(),
            e
        );
    }
}
