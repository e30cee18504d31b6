//! Output formats: comma-separated result tables with a TOML metadata
//! sidecar, beam-pattern grids, and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use bdris_core::eval::ResultTable;
use bdris_core::metrics::BeamPattern;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Sidecar written next to every table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
struct Sidecar {
    name: String,
    warnings: Vec<String>,
    metadata: BTreeMap<String, String>,
}

fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.toml")
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Format(format!("{}: {e}", path.display()))
}

/// Writes `dir/<name>.csv` and `dir/<name>.meta.toml`; returns both paths.
///
/// Warnings are also kept as leading `#` lines of the table itself, so a
/// skipped sweep point is visible where the data is.
pub fn write_table(dir: &Path, table: &ResultTable) -> Result<Vec<PathBuf>> {
    let path = dir.join(format!("{}.csv", table.name));
    let mut text = String::new();
    for w in &table.warnings {
        text.push_str(&format!("# warning: {}\n", w.replace('\n', " ")));
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(&table.columns)
        .map_err(|e| csv_error(&path, e))?;
    for row in &table.rows {
        writer
            .write_record(row.iter().map(|x| x.to_string()))
            .map_err(|e| csv_error(&path, e))?;
    }
    let body = writer
        .into_inner()
        .map_err(|e| Error::Format(e.to_string()))?;
    text.push_str(std::str::from_utf8(&body).expect("csv of ASCII numbers"));
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;

    let sidecar = Sidecar {
        name: table.name.clone(),
        warnings: table.warnings.clone(),
        metadata: table.metadata.iter().cloned().collect(),
    };
    let meta = sidecar_path(&path);
    let text = toml::to_string(&sidecar).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(&meta, text).map_err(|e| Error::io(&meta, e))?;
    Ok(vec![path, meta])
}

/// Reads a table written by [`write_table`]; the sidecar is optional.
pub fn read_table(path: &Path) -> Result<ResultTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let columns: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut table = ResultTable::new(name, columns);
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = record
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        table.push_row(row)?;
    }
    let meta = sidecar_path(path);
    if meta.exists() {
        let text = fs::read_to_string(&meta).map_err(|e| Error::io(&meta, e))?;
        let s: Sidecar =
            toml::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", meta.display())))?;
        table.name = s.name;
        table.warnings = s.warnings;
        table.metadata = s.metadata.into_iter().collect();
    } else {
        table.warnings = text
            .lines()
            .filter_map(|l| l.strip_prefix("# warning: "))
            .map(str::to_string)
            .collect();
    }
    Ok(table)
}

/// Writes a pattern as `azimuth_deg,elevation_deg,directivity_dbi` rows.
pub fn write_pattern_grid(path: &Path, pattern: &BeamPattern) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["azimuth_deg", "elevation_deg", "directivity_dbi"])
        .map_err(|e| csv_error(path, e))?;
    for (i, az) in pattern.azimuths.iter().enumerate() {
        for (j, el) in pattern.elevations.iter().enumerate() {
            writer
                .write_record([
                    az.to_degrees().to_string(),
                    el.to_degrees().to_string(),
                    pattern.directivity_dbi(i, j).to_string(),
                ])
                .map_err(|e| csv_error(path, e))?;
        }
    }
    let body = writer
        .into_inner()
        .map_err(|e| Error::Format(e.to_string()))?;
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Hex SHA-256 of a file's bytes.
pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Hex SHA-256 of a string.
pub fn sha256_str(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
}

/// Record of one run: what ran, with which inputs, and what it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config_path: Option<String>,
    pub config_sha256: String,
    pub output_dir: String,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub gates_passed: bool,
    pub artifacts: Vec<Artifact>,
}

impl RunManifest {
    /// Checksums every file in `files` (which must live under `output_dir`).
    pub fn collect(mut self, files: &[PathBuf]) -> Result<Self> {
        let root = PathBuf::from(&self.output_dir);
        for f in files {
            let rel = f.strip_prefix(&root).unwrap_or(f);
            self.artifacts.push(Artifact {
                path: rel.to_string_lossy().into_owned(),
                sha256: sha256_file(f)?,
            });
        }
        Ok(self)
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.toml");
        let text = toml::to_string(self).map_err(|e| Error::Format(e.to_string()))?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new("sample", vec!["x".into(), "y".into(), "y_se".into()]);
        t.push_row(vec![0.1, 1.0 / 3.0, f64::INFINITY]).unwrap();
        t.push_row(vec![-2.5e-300, f64::NAN, 12345678.901234567])
            .unwrap();
        t.warnings.push("x = 7: skipped".into());
        t.metadata.push(("seed".into(), "2025".into()));
        t
    }

    fn same(a: &ResultTable, b: &ResultTable) -> bool {
        a.name == b.name
            && a.columns == b.columns
            && a.warnings == b.warnings
            && a.metadata == b.metadata
            && a.rows.iter().zip(&b.rows).all(|(r, s)| {
                r.iter()
                    .zip(s)
                    .all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()))
            })
    }

    #[test]
    fn table_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let t = sample();
        let files = write_table(dir.path(), &t).unwrap();
        assert_eq!(files.len(), 2);
        let back = read_table(&files[0]).unwrap();
        assert!(same(&t, &back), "{back:?}");
        // without the sidecar, warnings still come from the comment lines
        fs::remove_file(&files[1]).unwrap();
        let back = read_table(&files[0]).unwrap();
        assert_eq!(back.warnings, t.warnings);
    }

    #[test]
    fn malformed_table_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        fs::write(&p, "a,b\n1,zz\n").unwrap();
        assert!(matches!(read_table(&p), Err(Error::Format(_))));
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let files = write_table(dir.path(), &sample()).unwrap();
        let m = RunManifest {
            experiment: "rate".into(),
            config_path: None,
            config_sha256: sha256_str(""),
            output_dir: dir.path().to_string_lossy().into_owned(),
            seed: 1,
            timestamp: 0,
            gates_passed: true,
            artifacts: vec![],
        }
        .collect(&files)
        .unwrap();
        assert_eq!(m.artifacts[0].path, "sample.csv");
        assert_eq!(m.artifacts[0].sha256.len(), 64);
        let p = m.write(dir.path()).unwrap();
        assert_eq!(RunManifest::read(&p).unwrap(), m);
    }

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_str("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
