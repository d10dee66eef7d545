use std::path::{Path, PathBuf};

use crate::Failure;

/// Relative `--out` paths are placed under this directory when it is set.
pub const OUT_DIR_ENV: &str = "QW_OUT_DIR";

pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("cannot write {}: {e}", path.display()))
}

fn ensure_parent(path: &Path) -> Result<(), Failure> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|e| io_failure(path, e))
        }
        _ => Ok(()),
    }
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<PathBuf, Failure> {
    let path = resolve_out(path);
    ensure_parent(&path)?;
    let mut w = csv::Writer::from_path(&path).map_err(|e| io_failure(&path, e))?;
    w.write_record(header).map_err(|e| io_failure(&path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| io_failure(&path, e))?;
    }
    w.flush().map_err(|e| io_failure(&path, e))?;
    Ok(path)
}

pub fn write_text(path: &Path, text: &str) -> Result<PathBuf, Failure> {
    let path = resolve_out(path);
    ensure_parent(&path)?;
    std::fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
    Ok(path)
}
