//! On-disk cache of telescoping results keyed by `s`, tool version and the
//! normalization convention.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use franel::hyperterm::binom_power_term;
use franel::telescoper::verify_certificate;

use crate::document::OperatorDocument;

/// Environment variable naming the cache directory when `--cache-dir` is
/// not given.
pub const CACHE_ENV: &str = "FRANEL_CACHE_DIR";

/// Bumped whenever operator/certificate normalization or tie-breaking
/// changes, so stale entries are never served.
pub const NORMALIZATION_TAG: &str = "norm1";

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of a cache lookup.
#[derive(Debug)]
pub enum Lookup {
    Miss,
    Hit(OperatorDocument),
    /// Present but unreadable or failing verification.
    Corrupt(String),
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `--cache-dir` wins over the environment; no directory means no cache.
    pub fn resolve(flag: Option<&Path>) -> Option<Self> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(|dir| Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, s: u32) -> PathBuf {
        self.dir.join(format!("telescope-s{s}-v{TOOL_VERSION}-{NORMALIZATION_TAG}.json"))
    }

    /// Loads and re-verifies the cached result for `s`.
    pub fn load(&self, s: u32) -> Lookup {
        let path = self.path_for(s);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        let doc = match OperatorDocument::from_json(&text) {
            Ok(d) => d,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        if doc.s != s {
            return Lookup::Corrupt(format!("{}: entry is for s = {}", path.display(), doc.s));
        }
        let ok = doc.to_pair().ok().is_some_and(|(op, cert)| {
            let term = binom_power_term(s).expect("s >= 1");
            verify_certificate(&term, &op, &cert)
        });
        if !ok {
            return Lookup::Corrupt(format!("{}: certificate does not verify", path.display()));
        }
        Lookup::Hit(doc)
    }

    /// Writes atomically: temp file in the same directory, then rename.
    pub fn store(&self, doc: &OperatorDocument) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(doc.s);
        let tmp = self.dir.join(format!(".{}.tmp{}", doc.s, std::process::id()));
        fs::write(&tmp, doc.to_json())?;
        fs::rename(&tmp, &path)
    }
}
