//! Atomic file output: everything a command produces is rendered first,
//! then each file goes through a temporary sibling and a rename.

use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// Files a command wants to write, in memory until [`Bundle::commit`].
#[derive(Debug, Default)]
pub struct Bundle {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Bundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, path: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.push((path.into(), contents.into()));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    /// Writes all files. Temporaries are created for every file before the
    /// first rename so that a failure while staging leaves nothing behind.
    pub fn commit(self) -> CliResult<Vec<PathBuf>> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, contents) in &self.files {
            staged.push(stage(path, contents)?);
        }
        let mut written = Vec::with_capacity(staged.len());
        for (tmp, (path, _)) in staged.into_iter().zip(self.files) {
            tmp.persist(&path).map_err(|e| CliError::Io {
                path: path.clone(),
                source: e.error,
            })?;
            written.push(path);
        }
        Ok(written)
    }
}

fn stage(path: &Path, contents: &[u8]) -> CliResult<NamedTempFile> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io_err)?;
    let mut tmp = NamedTempFile::new_in(&dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    Ok(tmp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commit_writes_every_file() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = Bundle::new();
        b.add(dir.path().join("a.txt"), "one");
        b.add(dir.path().join("sub/b.txt"), "two");
        let written = b.commit().unwrap();
        assert_eq!(written.len(), 2);
        assert_eq!(std::fs::read_to_string(dir.path().join("sub/b.txt")).unwrap(), "two");
        let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 2);
    }
}
