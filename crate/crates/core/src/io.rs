//! JSON documents for channels, superoperators and certificates.
//!
//! Complex entries are `[re, im]` pairs, matrices are stored row-major.
//! Choi matrices supplied externally must use the unnormalized convention
//! (trace `d_in` for a trace-preserving map).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{Channel, KrausSet, SuperOp};
use crate::error::{Error, Result};
use crate::linalg::{from_row_major, ComplexMatrix, Tolerance, C64};

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

pub fn pairs_to_matrix(rows: usize, cols: usize, entries: &[[f64; 2]]) -> Result<ComplexMatrix> {
    let values: Vec<C64> = entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
    from_row_major(rows, cols, &values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDoc {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    #[serde(default)]
    pub label: String,
    pub d_in: usize,
    pub d_out: usize,
    /// One entry list per Kraus operator, each `d_out * d_in` long.
    pub kraus: Vec<Vec<[f64; 2]>>,
}

impl ChannelDoc {
    pub fn from_channel(c: &Channel) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            label: c.label().to_string(),
            d_in: c.d_in(),
            d_out: c.d_out(),
            kraus: c.kraus().operators().iter().map(matrix_to_pairs).collect(),
        }
    }

    pub fn to_channel(&self, tol: &Tolerance) -> Result<Channel> {
        check_schema(self.schema_version)?;
        let ops = self
            .kraus
            .iter()
            .map(|k| pairs_to_matrix(self.d_out, self.d_in, k))
            .collect::<Result<Vec<_>>>()?;
        Channel::from_kraus(self.label.clone(), KrausSet::new(ops)?, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperOpDoc {
    pub d_in: usize,
    pub d_out: usize,
    /// `d_in^2 * d_out^2` entries, row-major.
    pub matrix: Vec<[f64; 2]>,
}

impl SuperOpDoc {
    pub fn from_superop(m: &SuperOp) -> Self {
        Self {
            d_in: m.d_in(),
            d_out: m.d_out(),
            matrix: matrix_to_pairs(m.matrix()),
        }
    }

    pub fn to_superop(&self) -> Result<SuperOp> {
        let m = pairs_to_matrix(self.d_in * self.d_in, self.d_out * self.d_out, &self.matrix)?;
        SuperOp::new(self.d_in, self.d_out, m)
    }
}

/// A stored certificate: `map` followed by `certificate` should reproduce
/// `target`. Verdict documents carry the same three fields, so either can be
/// loaded as a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    #[serde(default)]
    pub label: String,
    pub map: SuperOpDoc,
    pub target: SuperOpDoc,
    pub certificate: Option<SuperOpDoc>,
}

fn check_schema(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema_version {v}")));
    }
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn load_channel(path: &Path, tol: &Tolerance) -> Result<Channel> {
    read_json::<ChannelDoc>(path)?.to_channel(tol)
}

pub fn load_certificate(path: &Path) -> Result<CertificateDoc> {
    let doc: CertificateDoc = read_json(path)?;
    check_schema(doc.schema_version)?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn channel_round_trip() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = Channel::from_kraus("rand", sample::kraus(&mut rng, 2, 3, 2), &tol).unwrap();
        let doc = ChannelDoc::from_channel(&c);
        let text = serde_json::to_string(&doc).unwrap();
        let back: ChannelDoc = serde_json::from_str(&text).unwrap();
        let c2 = back.to_channel(&tol).unwrap();
        assert_eq!(c2.label(), "rand");
        assert!((c2.superop().matrix() - c.superop().matrix()).norm() < 1e-15);
    }

    #[test]
    fn schema_version_defaults_and_is_checked() {
        let tol = Tolerance::default();
        let text = r#"{"d_in":1,"d_out":1,"kraus":[[[1.0,0.0]]]}"#;
        let doc: ChannelDoc = serde_json::from_str(text).unwrap();
        assert_eq!(doc.schema_version, SCHEMA_VERSION);
        assert!(doc.to_channel(&tol).is_ok());
        let bad = ChannelDoc {
            schema_version: 99,
            ..doc
        };
        assert!(matches!(bad.to_channel(&tol), Err(Error::Parse(_))));
    }

    #[test]
    fn wrong_entry_count_rejected() {
        let doc = SuperOpDoc {
            d_in: 2,
            d_out: 2,
            matrix: vec![[1.0, 0.0]; 15],
        };
        assert!(doc.to_superop().is_err());
    }

    #[test]
    fn non_tp_channel_rejected() {
        let text = r#"{"d_in":1,"d_out":1,"kraus":[[[0.5,0.0]]]}"#;
        let doc: ChannelDoc = serde_json::from_str(text).unwrap();
        assert!(matches!(
            doc.to_channel(&Tolerance::default()),
            Err(Error::NotTp { .. })
        ));
    }
}
