//! Observer table selection.
//!
//! Setting `LUXFIELD_OBSERVER_DIR` to a directory holding `observer.csv`
//! (same `wavelength,xbar,ybar,zbar` layout as the embedded table) replaces
//! the embedded CIE 2012 2° functions.

use std::path::{Path, PathBuf};

use luxfield_core::observer::{load_observer_tables, parse_observer_tables, ObserverError};
use luxfield_core::Colorimeter;

pub const OBSERVER_DIR_ENV: &str = "LUXFIELD_OBSERVER_DIR";
pub const OBSERVER_FILE: &str = "observer.csv";

#[derive(Debug, thiserror::Error)]
pub enum ObserverLoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: ObserverError,
    },
}

pub fn colorimeter_from_dir(dir: &Path) -> Result<Colorimeter, ObserverLoadError> {
    let path = dir.join(OBSERVER_FILE);
    let text = std::fs::read_to_string(&path).map_err(|source| ObserverLoadError::Io {
        path: path.clone(),
        source,
    })?;
    let tables = parse_observer_tables(&text).map_err(|source| ObserverLoadError::Parse { path, source })?;
    Ok(Colorimeter::new(&tables))
}

/// Colorimeter honouring the environment override.
pub fn colorimeter_from_env() -> Result<Colorimeter, ObserverLoadError> {
    match std::env::var_os(OBSERVER_DIR_ENV) {
        Some(dir) if !dir.is_empty() => colorimeter_from_dir(Path::new(&dir)),
        _ => Ok(Colorimeter::new(&load_observer_tables())),
    }
}
