//! Output-path resolution and atomic file writes.
//!
//! Every artifact is staged in a temp file in the destination directory and
//! renamed into place, so an interrupted or failed run never leaves a
//! partial file at the target path.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// When set and non-empty, replaces the directory part of the configured
/// output stem; the file name is kept.
pub const ENV_OUTPUT_DIR: &str = "SWEEP_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub schema: PathBuf,
    pub manifest: PathBuf,
}

/// Expand a validated output stem into the three artifact paths, honoring
/// the directory override from the environment.
pub fn resolve_paths(output: &str) -> OutputPaths {
    let configured = PathBuf::from(output);
    let base = match std::env::var_os(ENV_OUTPUT_DIR) {
        Some(dir) if !dir.is_empty() => {
            let name = configured
                .file_name()
                .expect("config validation keeps a file name");
            Path::new(&dir).join(name)
        }
        _ => configured,
    };
    let stem = base.to_string_lossy();
    OutputPaths {
        csv: PathBuf::from(format!("{stem}.csv")),
        schema: PathBuf::from(format!("{stem}.schema.txt")),
        manifest: PathBuf::from(format!("{stem}.manifest.json")),
    }
}

/// Write `bytes` to `path` through a temp file in the same directory,
/// creating parent directories as needed.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_follow_the_stem() {
        let p = resolve_paths("out/run3");
        assert_eq!(p.csv, PathBuf::from("out/run3.csv"));
        assert_eq!(p.schema, PathBuf::from("out/run3.schema.txt"));
        assert_eq!(p.manifest, PathBuf::from("out/run3.manifest.json"));
    }

    #[test]
    fn atomic_write_creates_parents_and_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("nested/sub/result.csv");
        write_atomic(&target, b"first").unwrap();
        assert_eq!(fs::read(&target).unwrap(), b"first");
        write_atomic(&target, b"second").unwrap();
        assert_eq!(fs::read(&target).unwrap(), b"second");
        let names: Vec<_> = fs::read_dir(target.parent().unwrap())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names.len(), 1, "no temp files left behind: {names:?}");
    }
}
