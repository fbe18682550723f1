//! Enumerated configuration sets, in memory and on disk.
//!
//! File layout, little-endian: magic `TMN1`, then `m`, `n` and the count as
//! `u64`, then `count·n` pairs of `u16`, then an FNV-1a checksum of all
//! preceding bytes.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use crate::config::Configuration;
use crate::error::{Error, Result};

use super::enumerate::{configuration_of, Pair, PairLists};

const MAGIC: &[u8; 4] = b"TMN1";
const HEADER: usize = 4 + 3 * 8;

/// Known sizes of the configuration sets.
pub const TABULATED_COUNTS: [((usize, usize), u64); 9] = [
    ((3, 2), 3),
    ((3, 3), 48),
    ((3, 4), 828),
    ((3, 5), 17178),
    ((3, 6), 419559),
    ((4, 3), 18),
    ((4, 4), 588),
    ((4, 5), 17016),
    ((4, 6), 514524),
];

pub fn tabulated_count(m: usize, n: usize) -> Option<u64> {
    TABULATED_COUNTS.iter().find(|(k, _)| *k == (m, n)).map(|(_, c)| *c)
}

/// All canonical configurations for one `(m, n)`, stored flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    m: usize,
    n: usize,
    pairs: Vec<Pair>,
}

impl Catalog {
    pub fn build(m: usize, n: usize) -> Self {
        let pairs = PairLists::new(m, n).flatten().collect();
        Catalog { m, n, pairs }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pair_lists(&self) -> std::slice::Chunks<'_, Pair> {
        self.pairs.chunks(self.n.max(1))
    }

    pub fn par_pair_lists(&self) -> rayon::slice::Chunks<'_, Pair> {
        use rayon::slice::ParallelSlice;
        self.pairs.par_chunks(self.n.max(1))
    }

    pub fn get(&self, idx: usize) -> Option<Configuration> {
        self.pair_lists().nth(idx).map(|p| configuration_of(self.m, p))
    }

    pub fn configurations(&self) -> impl Iterator<Item = Configuration> + '_ {
        self.pair_lists().map(|p| configuration_of(self.m, p))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER + self.pairs.len() * 4 + 8);
        out.extend_from_slice(MAGIC);
        for v in [self.m, self.n, self.len()] {
            out.extend_from_slice(&(v as u64).to_le_bytes());
        }
        for &(i, j) in &self.pairs {
            out.extend_from_slice(&i.to_le_bytes());
            out.extend_from_slice(&j.to_le_bytes());
        }
        let sum = fnv1a(&out);
        out.extend_from_slice(&sum.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let corrupt = |msg: &str| Error::CorruptCatalog(msg.to_string());
        if bytes.len() < HEADER + 8 {
            return Err(corrupt("file is shorter than its header"));
        }
        if &bytes[..4] != MAGIC {
            return Err(corrupt("bad magic"));
        }
        let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("eight bytes"));
        let (m, n, count) = (word(4), word(12), word(20));
        let body = count
            .checked_mul(n)
            .and_then(|p| p.checked_mul(4))
            .and_then(|b| usize::try_from(b).ok())
            .ok_or_else(|| corrupt("count is out of range"))?;
        if bytes.len() != HEADER + body + 8 {
            return Err(corrupt("length does not match the header"));
        }
        let split = HEADER + body;
        if fnv1a(&bytes[..split]) != word(split) {
            return Err(corrupt("checksum mismatch"));
        }
        let (m, n) = (m as usize, n as usize);
        if let Some(expected) = tabulated_count(m, n) {
            if expected != count {
                return Err(corrupt(&format!("({m},{n}) should hold {expected} configurations, found {count}")));
            }
        }
        let pairs: Vec<Pair> = bytes[HEADER..split]
            .chunks_exact(4)
            .map(|c| (u16::from_le_bytes([c[0], c[1]]), u16::from_le_bytes([c[2], c[3]])))
            .collect();
        let top = (m + n) as u16;
        if pairs.iter().any(|&(i, j)| i == 0 || i >= j || j > top) {
            return Err(corrupt("pair outside the index range"));
        }
        Ok(Catalog { m, n, pairs })
    }

    /// Writes the file, creating missing parent directories.
    pub fn store(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

pub fn catalog_path(dir: &Path, m: usize, n: usize) -> PathBuf {
    dir.join(format!("t_{m}_{n}.tmn"))
}

/// Enumerates and writes the catalog for `(m, n)` under `dir`.
pub fn catalog_store(m: usize, n: usize, dir: &Path) -> Result<PathBuf> {
    let path = catalog_path(dir, m, n);
    Catalog::build(m, n).store(&path)?;
    Ok(path)
}

pub fn catalog_load(m: usize, n: usize, dir: &Path) -> Result<Catalog> {
    let cat = Catalog::load(&catalog_path(dir, m, n))?;
    if (cat.m, cat.n) != (m, n) {
        return Err(Error::CorruptCatalog(format!("file holds ({},{}) instead of ({m},{n})", cat.m, cat.n)));
    }
    Ok(cat)
}

type Cache = Mutex<HashMap<(usize, usize), Arc<Catalog>>>;

/// Process-wide catalog, built on first use. With `dir`, an existing file
/// is loaded and a fresh enumeration is written back.
pub fn cached(m: usize, n: usize, dir: Option<&Path>) -> Result<Arc<Catalog>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("catalog cache poisoned").get(&(m, n)) {
        return Ok(hit.clone());
    }
    let cat = match dir {
        Some(d) if catalog_path(d, m, n).exists() => catalog_load(m, n, d)?,
        Some(d) => {
            let cat = Catalog::build(m, n);
            cat.store(&catalog_path(d, m, n))?;
            cat
        }
        None => Catalog::build(m, n),
    };
    let cat = Arc::new(cat);
    cache.lock().expect("catalog cache poisoned").insert((m, n), cat.clone());
    Ok(cat)
}
