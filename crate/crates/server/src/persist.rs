//! Crash-safe file writes.
//!
//! A document is first written in full to a temporary sibling file and
//! synced, then renamed over the target. Readers therefore see either the
//! previous version or the new one, never a mix. Temporary files left by an
//! interrupted write carry the `.tmp-` marker and are ignored on load.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

const TMP_MARKER: &str = ".tmp-";

static COUNTER: AtomicU64 = AtomicU64::new(0);

pub fn is_temp_file(path: &Path) -> bool {
    path.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n.contains(TMP_MARKER))
}

/// Writes `bytes` to a fresh temporary file next to `target` and syncs it.
pub fn stage(target: &Path, bytes: &[u8]) -> io::Result<PathBuf> {
    let name = target
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "target has no file name"))?;
    let tmp = target.with_file_name(format!(
        "{name}{TMP_MARKER}{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let mut file = File::create(&tmp)?;
    file.write_all(bytes)?;
    file.sync_all()?;
    Ok(tmp)
}

/// Renames a staged file over `target` and syncs the directory entry.
pub fn commit(staged: &Path, target: &Path) -> io::Result<()> {
    fs::rename(staged, target)?;
    if let Some(dir) = target.parent() {
        // Directory fsync is not supported everywhere; the rename itself is
        // already atomic.
        if let Ok(d) = File::open(dir) {
            let _ = d.sync_all();
        }
    }
    Ok(())
}

pub fn write_atomic(target: &Path, bytes: &[u8]) -> io::Result<()> {
    let staged = stage(target, bytes)?;
    commit(&staged, target).inspect_err(|_| {
        let _ = fs::remove_file(&staged);
    })
}

/// Deletes leftovers of interrupted writes in `dir`.
pub fn remove_stale_temps(dir: &Path) -> io::Result<usize> {
    let mut removed = 0;
    if !dir.exists() {
        return Ok(0);
    }
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if is_temp_file(&path) {
            fs::remove_file(&path)?;
            removed += 1;
        }
    }
    Ok(removed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("doc.json");
        write_atomic(&target, b"one").unwrap();
        write_atomic(&target, b"two").unwrap();
        assert_eq!(fs::read(&target).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn staged_but_uncommitted_leaves_old_version() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("doc.json");
        write_atomic(&target, b"old").unwrap();
        let staged = stage(&target, b"new").unwrap();
        assert!(is_temp_file(&staged));
        assert_eq!(fs::read(&target).unwrap(), b"old");
        assert_eq!(remove_stale_temps(dir.path()).unwrap(), 1);
        assert!(!staged.exists());
    }
}
