//! On-disk cache of clique certificates, one JSON file per graph.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::cayley::CayleyGraph;
use crate::clique::{is_clique, solve_cayley, CliqueCertificate, SOLVER_VERSION};
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "PALEYLAB_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".paleylab-cache";

#[derive(Clone, Debug)]
pub struct CliqueCache {
    dir: PathBuf,
}

impl CliqueCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CliqueCache { dir: dir.into() }
    }

    /// `$PALEYLAB_CACHE`, else `./.paleylab-cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_CACHE_DIR.into()))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File name derived from (field descriptor, kind, d, solver version).
    pub fn key(graph: &CayleyGraph) -> String {
        let m = graph.manifest();
        let d = m.d.map_or_else(|| "-".to_string(), |d| d.to_string());
        let kind = serde_json::to_value(m.kind).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        let raw = format!("{}_{}_{}_v{}_g{}", m.field, kind, d, SOLVER_VERSION, m.generator);
        raw.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect::<String>() + ".json"
    }

    fn path(&self, graph: &CayleyGraph) -> PathBuf {
        self.dir.join(Self::key(graph))
    }

    /// A stored certificate, only if its manifest matches and its witness is
    /// still a clique of the claimed size in `graph`.
    pub fn get(&self, graph: &CayleyGraph) -> Option<CliqueCertificate> {
        let text = std::fs::read_to_string(self.path(graph)).ok()?;
        let cert: CliqueCertificate = serde_json::from_str(&text).ok()?;
        let valid = cert.manifest.as_ref() == Some(&graph.manifest())
            && cert.witness.len() == cert.omega
            && is_clique(graph.graph(), &cert.witness);
        valid.then_some(cert)
    }

    /// Writes to a temporary file in the cache directory, then renames.
    pub fn put(&self, graph: &CayleyGraph, cert: &CliqueCertificate) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string_pretty(cert)?.as_bytes())?;
        tmp.persist(self.path(graph)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Same cap semantics as [`solve_cayley`], cache hit or not.
    pub fn solve(&self, graph: &CayleyGraph, cap: usize) -> Result<CliqueCertificate> {
        let n = graph.graph().order();
        if n > cap {
            return Err(Error::SolverCapExceeded { n, cap });
        }
        if let Some(cert) = self.get(graph) {
            return Ok(cert);
        }
        let cert = solve_cayley(graph, cap)?;
        self.put(graph, &cert)?;
        Ok(cert)
    }
}

/// Solves through `cache` when one is given.
pub fn solve_maybe_cached(graph: &CayleyGraph, cap: usize, cache: Option<&CliqueCache>) -> Result<CliqueCertificate> {
    match cache {
        Some(c) => c.solve(graph, cap),
        None => solve_cayley(graph, cap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use std::sync::Arc;

    #[test]
    fn round_trip_and_tamper_detection() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CliqueCache::new(dir.path());
        let g = CayleyGraph::paley(&Arc::new(FiniteField::new(5, 2).unwrap()), 3).unwrap();
        assert!(cache.get(&g).is_none());
        let cert = cache.solve(&g, 1024).unwrap();
        assert_eq!(cert.omega, 5);
        assert_eq!(cache.get(&g).unwrap().witness, cert.witness);

        let mut bad = cert.clone();
        bad.witness = vec![0, 1, 2, 3, 5];
        cache.put(&g, &bad).unwrap();
        assert!(cache.get(&g).is_none());
        assert_eq!(cache.solve(&g, 1024).unwrap().witness, cert.witness);
        assert!(matches!(cache.solve(&g, 10), Err(Error::SolverCapExceeded { n: 25, cap: 10 })));
    }

    #[test]
    fn keys_are_file_safe() {
        let g = CayleyGraph::paley(&Arc::new(FiniteField::new(3, 2).unwrap()), 4).unwrap();
        let key = CliqueCache::key(&g);
        assert_eq!(key, "3_2_1_0_1_4_paley_4_v1_g4.json");
    }
}
