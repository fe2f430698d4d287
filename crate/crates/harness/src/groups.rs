//! Orthogonal groups for the harness, optionally read from and written to a
//! cache directory with one file per `(p, ell, d)`.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use ffgeom::geometry::Space;
use ffgeom::motions::OrthGroup;
use ffgeom::Result;

static CACHE_DIR: OnceLock<PathBuf> = OnceLock::new();

/// Sets the cache directory for the rest of the process. Returns false if
/// one was already set.
pub fn set_cache_dir(dir: impl Into<PathBuf>) -> bool {
    CACHE_DIR.set(dir.into()).is_ok()
}

pub fn cache_file(dir: &Path, space: &Space) -> PathBuf {
    let f = space.field();
    dir.join(format!("orth-{}-{}-{}.bin", f.p(), f.ell(), space.dim()))
}

/// `O(d, q)` for `space`, from the cache when a readable entry exists.
/// A corrupt entry is ignored and overwritten.
pub fn orthogonal_group(space: &Arc<Space>) -> Result<OrthGroup> {
    let Some(dir) = CACHE_DIR.get() else {
        return OrthGroup::enumerate(space);
    };
    let path = cache_file(dir, space);
    if let Ok(f) = File::open(&path) {
        if let Ok(g) = OrthGroup::read_cache(space, BufReader::new(f)) {
            return Ok(g);
        }
    }
    let g = OrthGroup::enumerate(space)?;
    if std::fs::create_dir_all(dir).is_ok() {
        if let Ok(f) = File::create(&path) {
            // A failed write only costs a re-enumeration next time.
            let _ = g.write_cache(BufWriter::new(f));
        }
    }
    Ok(g)
}
