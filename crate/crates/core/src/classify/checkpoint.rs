use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ClassHistogram;
use crate::error::Result;

/// Partial histogram for the rank range `start..end`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub d: usize,
    pub start: u64,
    pub end: u64,
    pub histogram: ClassHistogram,
}

impl Checkpoint {
    pub fn file_name(d: usize, start: u64, end: u64) -> String {
        format!("d{d}-{start:020}-{end:020}.json")
    }

    fn path(dir: &Path, d: usize, r: &Range<u64>) -> PathBuf {
        dir.join(Self::file_name(d, r.start, r.end))
    }

    /// Reads the chunk file for `r`, if present and consistent.
    /// A corrupt or mismatched file is ignored and will be rewritten.
    pub fn load_matching(dir: &Path, d: usize, r: &Range<u64>) -> Result<Option<Checkpoint>> {
        let path = Self::path(dir, d, r);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Ok(serde_json::from_str::<Checkpoint>(&text).ok().filter(|c| {
            c.d == d
                && c.start == r.start
                && c.end == r.end
                && c.histogram.d() == d
                && c.histogram.total() == r.end - r.start
        }))
    }

    /// Writes atomically through a temporary file and rename.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = Self::path(dir, self.d, &(self.start..self.end));
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_vec(self)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Mode;
    use crate::rational::Rational;

    #[test]
    fn save_load_and_reject() {
        let dir = tempfile::tempdir().unwrap();
        let mut h = ClassHistogram::empty(2, Mode::Exhaustive);
        h.add(Rational::ZERO, 10);
        let cp = Checkpoint { d: 2, start: 0, end: 10, histogram: h };
        cp.save(dir.path()).unwrap();
        assert_eq!(Checkpoint::load_matching(dir.path(), 2, &(0..10)).unwrap(), Some(cp));
        assert_eq!(Checkpoint::load_matching(dir.path(), 2, &(0..11)).unwrap(), None);

        let bad = dir.path().join(Checkpoint::file_name(2, 10, 20));
        std::fs::write(&bad, "{ truncated").unwrap();
        assert_eq!(Checkpoint::load_matching(dir.path(), 2, &(10..20)).unwrap(), None);
    }
}
