//! On-disk census cache: one JSON document per `(k, b)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::degeneration::{m_table_rows, DegenerationCensus, DegenerationCounts, MTableRow};
use crate::error::{Error, Result};
use crate::exact::decimal;
use crate::hurwitz::cover_genus;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Serialized census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFile {
    pub k: u32,
    pub b: u32,
    pub g: u32,
    #[serde(rename = "N", with = "decimal")]
    pub n: BigInt,
    #[serde(rename = "N_tilde", with = "decimal")]
    pub n_tilde: BigInt,
    #[serde(rename = "N1", with = "decimal")]
    pub n1: BigInt,
    #[serde(rename = "N22", with = "decimal")]
    pub n22: BigInt,
    #[serde(rename = "N3", with = "decimal")]
    pub n3: BigInt,
    #[serde(rename = "M_table")]
    pub m_table: Vec<MTableRow>,
    #[serde(with = "decimal")]
    pub central: BigInt,
    #[serde(with = "decimal")]
    pub e: BigInt,
    #[serde(rename = "N_sing", with = "decimal")]
    pub n_sing: BigInt,
    pub tool_version: String,
}

impl From<&DegenerationCensus> for CensusFile {
    fn from(c: &DegenerationCensus) -> Self {
        Self {
            k: c.k,
            b: c.b,
            g: c.g,
            n: c.raw_count.clone(),
            n_tilde: c.counts.n_tilde.clone(),
            n1: c.counts.n1.clone(),
            n22: c.counts.n22.clone(),
            n3: c.counts.n3.clone(),
            m_table: m_table_rows(&c.m_table),
            central: c.central.clone(),
            e: c.counts.e.clone(),
            n_sing: c.counts.n_sing.clone(),
            tool_version: TOOL_VERSION.to_string(),
        }
    }
}

impl TryFrom<CensusFile> for DegenerationCensus {
    type Error = Error;

    fn try_from(f: CensusFile) -> Result<Self> {
        if cover_genus(f.k, f.b)? != f.g {
            return Err(Error::Parse(format!(
                "cached genus {} does not match (k, b) = ({}, {})",
                f.g, f.k, f.b
            )));
        }
        let mut m_table = std::collections::BTreeMap::new();
        for row in f.m_table {
            if m_table.insert((row.j, row.i), row.count).is_some() {
                return Err(Error::Parse(format!("duplicate M-table cell ({}, {})", row.j, row.i)));
            }
        }
        let census = DegenerationCensus {
            k: f.k,
            b: f.b,
            g: f.g,
            raw_count: f.n,
            counts: DegenerationCounts {
                n_tilde: f.n_tilde,
                n1: f.n1,
                n22: f.n22,
                n3: f.n3,
                e: f.e,
                n_sing: f.n_sing,
            },
            m_table,
            central: f.central,
        };
        census.validate()?;
        Ok(census)
    }
}

pub fn census_path(dir: &Path, k: u32, b: u32) -> PathBuf {
    dir.join(format!("census_k{k}_b{b}.json"))
}

/// Writes the census atomically and returns its path.
pub fn write_census(dir: &Path, census: &DegenerationCensus) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = census_path(dir, census.k, census.b);
    let mut text = serde_json::to_string_pretty(&CensusFile::from(census))?;
    text.push('\n');
    let tmp = path.with_extension("json.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Reads a cached census, or `None` when absent.
pub fn read_census(dir: &Path, k: u32, b: u32) -> Result<Option<DegenerationCensus>> {
    let path = census_path(dir, k, b);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let file: CensusFile = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if (file.k, file.b) != (k, b) {
        return Err(Error::Parse(format!(
            "{} holds (k, b) = ({}, {})",
            path.display(),
            file.k,
            file.b
        )));
    }
    DegenerationCensus::try_from(file).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneration::census;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for (k, b) in [(2, 6), (3, 4), (3, 6), (4, 6)] {
            let c = census(k, b, 2).unwrap();
            let path = write_census(dir.path(), &c).unwrap();
            assert!(path.ends_with(format!("census_k{k}_b{b}.json")));
            assert_eq!(read_census(dir.path(), k, b).unwrap(), Some(c));
        }
        assert_eq!(read_census(dir.path(), 5, 8).unwrap(), None);
    }

    #[test]
    fn field_names_and_decimal_strings() {
        let c = census(3, 4, 1).unwrap();
        let v = serde_json::to_value(CensusFile::from(&c)).unwrap();
        assert_eq!(v["N"], "24");
        assert_eq!(v["N_tilde"], "4");
        assert_eq!(v["N3"], "3");
        assert_eq!(v["M_table"][0]["count"], "1");
        assert_eq!(v["tool_version"], TOOL_VERSION);
    }

    #[test]
    fn big_counts_survive() {
        let c = census(3, 4, 1).unwrap();
        let mut f = CensusFile::from(&c);
        let big: BigInt = "98765432109876543210987654321".parse().unwrap();
        f.n22 = big.clone();
        let text = serde_json::to_string(&f).unwrap();
        let back: CensusFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.n22, big);
    }

    #[test]
    fn tampered_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let c = census(3, 4, 1).unwrap();
        let path = write_census(dir.path(), &c).unwrap();
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("\"N3\": \"3\"", "\"N3\": \"4\"");
        fs::write(&path, text).unwrap();
        assert!(read_census(dir.path(), 3, 4).is_err());
    }
}
