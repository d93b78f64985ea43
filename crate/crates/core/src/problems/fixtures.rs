//! Metadata documents that accompany downloaded test matrices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureMetadata {
    pub name: String,
    pub kappa_c: f64,
    pub norm1_range: [f64; 2],
    pub norm2_range: [f64; 2],
}

impl FixtureMetadata {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    /// Open-interval membership used for norm sanity checks.
    pub fn norm1_ok(&self, value: f64) -> bool {
        value > self.norm1_range[0] && value < self.norm1_range[1]
    }

    pub fn norm2_ok(&self, value: f64) -> bool {
        value > self.norm2_range[0] && value < self.norm2_range[1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let m = FixtureMetadata { name: "conf5_0-4x4-10".into(), kappa_c: 0.2, norm1_range: [28.0, 31.0], norm2_range: [11.0, 14.0] };
        m.write(&path).unwrap();
        assert_eq!(FixtureMetadata::read(&path).unwrap(), m);
        assert!(m.norm1_ok(29.5) && !m.norm1_ok(31.0));
    }
}
