//! Optimal search over canonical configurations of growing size.
//!
//! For each `(m, n)` every configuration is eliminated once, symbolically
//! in the tuple, giving the set of tuples it represents. Almost always that
//! set is a single ray, so the configurations are indexed by the primitive
//! tuple on their ray and a query reduces to a lookup plus a short scan of
//! the few wider ones. Results are the same as testing each configuration
//! in enumeration order and stopping at the first feasible one.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::bounds::lower_bound;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::weights::WeightTuple;

use super::catalog::cached;
use super::enumerate::{configuration_of, Pair, PairLists};
use super::feasible::{is_feasible, Mode};
use super::space::{represents, SolutionSpace};

pub const DEFAULT_CAP: usize = 7;

#[derive(Clone, Debug)]
pub struct BruteForceOptions {
    /// Largest size that will be searched.
    pub cap: usize,
    pub mode: Mode,
    /// Directory of catalog files to read, and to fill on a miss.
    pub catalog_dir: Option<PathBuf>,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions { cap: DEFAULT_CAP, mode: Mode::default(), catalog_dir: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForceOutcome {
    pub configuration: Configuration,
    /// Sizes searched, in order; the last one succeeded.
    pub sizes_tried: Vec<usize>,
    /// Configurations before the hit in enumeration order, plus the hit.
    pub scanned: u64,
}

impl BruteForceOutcome {
    pub fn size(&self) -> usize {
        self.configuration.size()
    }
}

#[derive(Clone, Debug)]
struct Hit {
    index: u64,
    pairs: Box<[Pair]>,
}

#[derive(Debug)]
struct RayEntry {
    plain: Hit,
    strict: Option<Hit>,
}

#[derive(Debug)]
struct WideEntry {
    hit: Hit,
    space: SolutionSpace,
}

/// Every configuration of one `(m, n)`, keyed by the tuples it represents.
#[derive(Debug)]
pub struct FeasibilityIndex {
    m: usize,
    count: u64,
    rays: HashMap<Box<[u64]>, RayEntry>,
    wide: Vec<WideEntry>,
}

fn strictly_valid(m: usize, pairs: &[Pair], s: &[u64]) -> bool {
    represents(m, pairs, s)
}

impl FeasibilityIndex {
    pub fn build<I, P>(m: usize, lists: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[Pair]>,
    {
        let mut index = FeasibilityIndex { m, count: 0, rays: HashMap::new(), wide: Vec::new() };
        for (k, pairs) in lists.into_iter().enumerate() {
            let pairs = pairs.as_ref();
            index.count += 1;
            let hit = || Hit { index: k as u64, pairs: pairs.into() };
            match SolutionSpace::of(m, pairs) {
                SolutionSpace::Trivial | SolutionSpace::Ray(None) => {}
                SolutionSpace::Ray(Some(ray)) => match index.rays.get_mut(ray.as_slice()) {
                    Some(entry) => {
                        if entry.strict.is_none() && strictly_valid(m, pairs, &ray) {
                            entry.strict = Some(hit());
                        }
                    }
                    None => {
                        let strict = strictly_valid(m, pairs, &ray).then(hit);
                        index.rays.insert(ray.into(), RayEntry { plain: hit(), strict });
                    }
                },
                space @ SolutionSpace::Wide(_) => index.wide.push(WideEntry { hit: hit(), space }),
            }
        }
        index
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// First configuration in enumeration order accepted under `mode`.
    pub fn first_feasible<E: Exponent>(&self, w: &WeightTuple<E>, mode: Mode) -> Result<Option<(u64, Configuration)>> {
        let Some(key) = w.entries().iter().map(Exponent::to_u64).collect::<Option<Vec<u64>>>() else {
            return Ok(None);
        };
        let s: Vec<i128> = key.iter().map(|&x| x as i128).collect();
        let mut best: Option<&Hit> = self.rays.get(key.as_slice()).and_then(|e| match mode {
            Mode::Plain => Some(&e.plain),
            Mode::Strict => e.strict.as_ref(),
        });
        for entry in &self.wide {
            if best.is_some_and(|b| b.index < entry.hit.index) {
                break;
            }
            if entry.space.contains(&s) && (mode == Mode::Plain || strictly_valid(self.m, &entry.hit.pairs, &key)) {
                best = Some(&entry.hit);
                break;
            }
        }
        let Some(hit) = best else { return Ok(None) };
        let cfg = configuration_of(self.m, &hit.pairs);
        // cheap confirmation through the independent system
        if !is_feasible(&cfg, w, mode)? {
            return Err(Error::internal(format!("indexed configuration does not represent {w}")));
        }
        Ok(Some((hit.index, cfg)))
    }
}

type IndexCache = Mutex<HashMap<(usize, usize), Arc<FeasibilityIndex>>>;

/// Process-wide index for `(m, n)`, built on first use.
pub fn feasibility_index(m: usize, n: usize, catalog_dir: Option<&std::path::Path>) -> Result<Arc<FeasibilityIndex>> {
    static CACHE: OnceLock<IndexCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("index cache poisoned").get(&(m, n)) {
        return Ok(hit.clone());
    }
    let index = match catalog_dir {
        Some(dir) => FeasibilityIndex::build(m, cached(m, n, Some(dir))?.pair_lists()),
        None => FeasibilityIndex::build(m, PairLists::new(m, n)),
    };
    let index = Arc::new(index);
    cache.lock().expect("index cache poisoned").insert((m, n), index.clone());
    Ok(index)
}

/// A minimum-size representation, searched in strict mode.
pub fn brute_force<E: Exponent>(w: &WeightTuple<E>) -> Result<Configuration> {
    brute_force_with(w, &BruteForceOptions::default()).map(|o| o.configuration)
}

pub fn brute_force_with<E: Exponent>(w: &WeightTuple<E>, opts: &BruteForceOptions) -> Result<BruteForceOutcome> {
    w.require_normalized()?;
    w.require_multivariate()?;
    let m = w.len();
    let lower = lower_bound(w)?;
    let mut sizes_tried = Vec::new();
    let mut scanned = 0u64;
    for n in lower..=opts.cap {
        sizes_tried.push(n);
        let index = feasibility_index(m, n, opts.catalog_dir.as_deref())?;
        match index.first_feasible(w, opts.mode)? {
            Some((k, configuration)) => {
                scanned += k + 1;
                return Ok(BruteForceOutcome { configuration, sizes_tried, scanned });
            }
            None => scanned += index.len(),
        }
    }
    Err(Error::SearchCap { cap: opts.cap, lower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::enumerate_configs;

    fn size(v: &[u64]) -> usize {
        brute_force(&WeightTuple::<u64>::from_u64s(v).unwrap()).unwrap().size()
    }

    #[test]
    fn small_tuples() {
        assert_eq!(size(&[1, 1]), 1);
        assert_eq!(size(&[1, 1, 1]), 3);
        assert_eq!(size(&[5, 4, 3]), 4);
        assert_eq!(size(&[11, 2, 1]), 4);
    }

    #[test]
    fn bivariate_matches_log() {
        for p in 2u64..=20 {
            for q in 1..p {
                if num_integer::gcd(p, q) == 1 {
                    let expect = crate::exponent::ceil_log2(&p) as usize;
                    assert_eq!(size(&[q, p - q]), expect, "({q},{})", p - q);
                }
            }
        }
    }

    /// The index must agree with a plain scan in enumeration order.
    #[test]
    fn index_matches_linear_scan() {
        for t in [[3u64, 2, 2], [1, 1, 1], [4, 3, 2], [5, 1, 1], [2, 2, 1]] {
            let w = WeightTuple::<u64>::from_u64s(&t).unwrap();
            for n in 3..=4 {
                let index = feasibility_index(3, n, None).unwrap();
                for mode in [Mode::Plain, Mode::Strict] {
                    let scan = enumerate_configs(3, n)
                        .enumerate()
                        .find(|(_, c)| is_feasible(c, &w, mode).unwrap())
                        .map(|(k, c)| (k as u64, c));
                    assert_eq!(index.first_feasible(&w, mode).unwrap(), scan, "{t:?} n={n} {mode:?}");
                }
            }
        }
    }

    #[test]
    fn cap_reported() {
        let w = WeightTuple::<u64>::from_u64s(&[7, 5, 3]).unwrap();
        let opts = BruteForceOptions { cap: 5, ..Default::default() };
        assert!(matches!(brute_force_with(&w, &opts), Err(Error::SearchCap { cap: 5, lower: 4 })));
    }

    #[test]
    fn starts_at_lower_bound() {
        let w = WeightTuple::<u64>::from_u64s(&[3, 2, 2]).unwrap();
        let out = brute_force_with(&w, &BruteForceOptions::default()).unwrap();
        assert_eq!(out.sizes_tried.first(), Some(&3));
        assert_eq!(out.size(), 4);
    }

    #[test]
    fn rejects_unnormalized() {
        let w = WeightTuple::<u64>::from_u64s(&[2, 4]).unwrap();
        assert!(matches!(brute_force(&w), Err(Error::InvalidInput(_))));
    }
}
