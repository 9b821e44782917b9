//! Number formatting, CSV rendering and atomic file output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use zorich_core::dynamics::{LabelGrid, PointCloud};

/// 17 significant digits; parses back to the same double.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt_real(v: Option<f64>) -> Option<String> {
    v.map(real)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: &'static str,
    pub seed: u64,
}

impl Provenance {
    pub fn new(config_hash: String, seed: u64) -> Self {
        Provenance {
            config_hash,
            version: env!("CARGO_PKG_VERSION"),
            seed,
        }
    }
}

/// Header `x1,…,xd`, then one point per line.
pub fn cloud_csv(cloud: &PointCloud) -> String {
    let header: Vec<String> = (1..=cloud.dim).map(|j| format!("x{j}")).collect();
    let mut out = header.join(",");
    out.push('\n');
    for p in cloud.points() {
        let row: Vec<String> = p.iter().map(|v| real(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// One line per run of axis-0 nodes (in the plane: one line per `y` value).
pub fn grid_csv(grid: &LabelGrid) -> String {
    let width = grid.grid.resolution[0];
    let mut out = String::with_capacity(grid.labels.len() * 2);
    for row in grid.labels.chunks(width) {
        let cells: Vec<String> = row.iter().map(|l| l.code().to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report serializes");
    bytes.push(b'\n');
    bytes
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp-{}", std::process::id()));
    path.with_file_name(name)
}

/// Writes every file to a temporary sibling first and renames only once all
/// writes succeeded, so a failure leaves none of the targets behind.
pub fn write_atomic(files: &[(PathBuf, Vec<u8>)]) -> io::Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    let result = (|| {
        for (path, bytes) in files {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let tmp = temp_path(path);
            staged.push(tmp.clone());
            let mut f = fs::File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
        }
        for ((path, _), tmp) in files.iter().zip(&staged) {
            fs::rename(tmp, path)?;
        }
        Ok(())
    })();
    if result.is_err() {
        for tmp in &staged {
            let _ = fs::remove_file(tmp);
        }
    }
    result
}
