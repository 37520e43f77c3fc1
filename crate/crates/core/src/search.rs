//! Exhaustive existence search for `d`-regular circulant nut graphs of order
//! `n`.
//!
//! A `d`-regular `Circ(n, S)` with `n` even and `n/2 ∉ S` has `|S| = d/2`
//! and `S ⊆ {1, …, n/2 - 1}`. All such sets are enumerated in lexicographic
//! order and tested with [`is_nut_spectral`]. The work is split by the
//! smallest element of `S`; each block reports its least passing set and the
//! merge keeps the overall least, so results do not depend on scheduling.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circulant::{is_nut_spectral, parity_balanced, GeneratorSet};
use crate::numtheory::binomial;
use crate::{Error, Result};

/// Default largest number of generator sets examined for one `(n, d)`.
pub const DEFAULT_CAPACITY: u64 = 10_000_000;

/// `k`-subsets of `lo..=hi` in lexicographic order.
#[derive(Clone, Debug)]
pub struct Combinations {
    current: Vec<u64>,
    hi: u64,
    done: bool,
}

impl Combinations {
    pub fn new(lo: u64, hi: u64, k: usize) -> Self {
        let current: Vec<u64> = (lo..).take(k).collect();
        let done = k > 0 && lo + k as u64 - 1 > hi;
        Combinations { current, hi, done }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        // rightmost position that can still move up
        match (0..k)
            .rev()
            .find(|&i| self.current[i] < self.hi - (k - 1 - i) as u64)
        {
            Some(i) => {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

fn check_shape(n: u64, d: u64) -> Result<(u64, usize)> {
    if n % 2 == 1 {
        return Err(Error::Parameter(format!("order must be even, got n={n}")));
    }
    if d == 0 || d % 2 == 1 {
        return Err(Error::Parameter(format!(
            "degree must be even and positive, got d={d}"
        )));
    }
    let m = (n / 2).saturating_sub(1);
    if d / 2 > m {
        return Err(Error::Parameter(format!(
            "degree {d} needs d/2 <= n/2 - 1 = {m} generators"
        )));
    }
    Ok((m, (d / 2) as usize))
}

/// Every generator set of a `d`-regular circulant of order `n` avoiding
/// `n/2`, lexicographically. With `balanced_only`, sets with unequal numbers
/// of odd and even members are skipped; such sets are never nut graphs.
pub fn enumerate_sets(
    n: u64,
    d: u64,
    balanced_only: bool,
) -> Result<impl Iterator<Item = GeneratorSet>> {
    let (m, k) = check_shape(n, d)?;
    Ok(Combinations::new(1, m, k)
        .map(move |s| GeneratorSet::new(n, s).expect("subsets of 1..n/2 are valid"))
        .filter(move |g| !balanced_only || parity_balanced(g)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub n: u64,
    pub d: u64,
    pub exists: bool,
    /// Lexicographically least passing generator set.
    pub witness: Option<Vec<u64>>,
    pub sets_enumerated: u64,
    pub sets_passing: u64,
    /// True when the search space exceeded the capacity and was not searched.
    pub skipped: bool,
}

impl CatalogEntry {
    pub fn witness_set(&self) -> Option<GeneratorSet> {
        self.witness.as_ref().map(|w| {
            GeneratorSet::new(self.n, w.clone()).expect("witness is a valid generator set")
        })
    }
}

#[derive(Clone, Debug, Default)]
struct Partial {
    enumerated: u64,
    passing: u64,
    least: Option<Vec<u64>>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.enumerated += other.enumerated;
        self.passing += other.passing;
        self.least = match (self.least, other.least) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

fn search_block(n: u64, m: u64, k: usize, first: u64, balanced_only: bool) -> Partial {
    let mut acc = Partial::default();
    for rest in Combinations::new(first + 1, m, k - 1) {
        let mut s = Vec::with_capacity(k);
        s.push(first);
        s.extend(rest);
        let g = GeneratorSet::new(n, s).expect("subsets of 1..n/2 are valid");
        if balanced_only && !parity_balanced(&g) {
            continue;
        }
        acc.enumerated += 1;
        if is_nut_spectral(&g).is_nut {
            acc.passing += 1;
            if acc.least.is_none() {
                acc.least = Some(g.elements().to_vec());
            }
        }
    }
    acc
}

/// Searches one `(n, d)` pair. Sizes `d/2 > n/2 - 1` give an empty entry.
pub fn search_order(n: u64, d: u64, balanced_only: bool, capacity: u64) -> Result<CatalogEntry> {
    let mut entry = CatalogEntry {
        n,
        d,
        exists: false,
        witness: None,
        sets_enumerated: 0,
        sets_passing: 0,
        skipped: false,
    };
    let (m, k) = match check_shape(n, d) {
        Ok(shape) => shape,
        Err(_) if n.is_multiple_of(2) && d.is_multiple_of(2) && d > 0 => return Ok(entry),
        Err(e) => return Err(e),
    };
    if binomial(m, k as u64) > capacity as u128 {
        entry.skipped = true;
        return Ok(entry);
    }
    let total = (1..=m + 1 - k as u64)
        .into_par_iter()
        .map(|first| search_block(n, m, k, first, balanced_only))
        .reduce(Partial::default, Partial::merge);
    entry.exists = total.least.is_some();
    entry.witness = total.least;
    entry.sets_enumerated = total.enumerated;
    entry.sets_passing = total.passing;
    Ok(entry)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub degree: u64,
    pub entries: Vec<CatalogEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; `0` uses the global pool.
    pub jobs: usize,
    pub balanced_only: bool,
    pub capacity: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: 0,
            balanced_only: false,
            capacity: DEFAULT_CAPACITY,
        }
    }
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

/// One entry per even `n` in `n_min..=n_max`.
pub fn catalog(d: u64, n_min: u64, n_max: u64, opts: SearchOptions) -> Result<Catalog> {
    if n_min > n_max {
        return Err(Error::Parameter(format!(
            "n_min {n_min} exceeds n_max {n_max}"
        )));
    }
    if d == 0 || d % 2 == 1 {
        return Err(Error::Parameter(format!(
            "degree must be even and positive, got d={d}"
        )));
    }
    let entries = with_jobs(opts.jobs, || {
        (n_min..=n_max)
            .filter(|n| n % 2 == 0)
            .map(|n| search_order(n, d, opts.balanced_only, opts.capacity))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(Catalog { degree: d, entries })
}

impl Catalog {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("degree,n,exists,witness,sets_enumerated,sets_passing,skipped\n");
        for e in &self.entries {
            let witness = e
                .witness
                .as_ref()
                .map(|w| w.iter().map(u64::to_string).collect::<Vec<_>>().join(";"))
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.degree, e.n, e.exists, witness, e.sets_enumerated, e.sets_passing, e.skipped
            )
            .expect("writing to a String");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub n_max_offset: u64,
    pub entries: Vec<CatalogEntry>,
}

/// For each even `t >= 4`, searches for any `4t`-regular circulant nut graph
/// of every order `n` with `4 | n` and `4t + 8 <= n <= 4t + n_max_offset`.
pub fn conjecture_probe(
    t_values: &[u64],
    n_max_offset: u64,
    opts: SearchOptions,
) -> Result<ProbeReport> {
    if let Some(&t) = t_values.iter().find(|&&t| t < 4 || t % 2 == 1) {
        return Err(Error::Parameter(format!(
            "probe needs even t >= 4, got t={t}"
        )));
    }
    let entries = with_jobs(opts.jobs, || {
        t_values
            .iter()
            .flat_map(|&t| {
                (4 * t + 8..=4 * t + n_max_offset)
                    .step_by(4)
                    .map(move |n| (t, n))
            })
            .map(|(t, n)| search_order(n, 4 * t, opts.balanced_only, opts.capacity))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(ProbeReport {
        n_max_offset,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::is_nut_kernel;

    fn count(n: u64, d: u64, balanced: bool) -> usize {
        enumerate_sets(n, d, balanced).unwrap().count()
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let all: Vec<Vec<u64>> = Combinations::new(1, 5, 3).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], [1, 2, 3]);
        assert_eq!(all[9], [3, 4, 5]);
        assert_eq!(
            Combinations::new(4, 3, 0).collect::<Vec<_>>(),
            vec![Vec::<u64>::new()]
        );
        assert_eq!(Combinations::new(4, 3, 1).count(), 0);
        assert_eq!(Combinations::new(1, 2, 3).count(), 0);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(count(14, 8, false), 15);
        let sets: Vec<Vec<u64>> = enumerate_sets(8, 4, true)
            .unwrap()
            .map(|g| g.elements().to_vec())
            .collect();
        assert_eq!(sets, vec![vec![1, 2], vec![2, 3]]);
        assert_eq!(count(16, 8, true), 18);
        assert!(matches!(
            enumerate_sets(14, 7, false),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            enumerate_sets(14, 14, false),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn enumeration_count_is_binomial() {
        for n in (4..=26).step_by(2) {
            for d in (2..=n - 2).step_by(2) {
                assert_eq!(
                    count(n, d, false) as u128,
                    binomial(n / 2 - 1, d / 2),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn degree_eight_catalog_small() {
        let c = catalog(8, 10, 18, SearchOptions::default()).unwrap();
        let exists: Vec<u64> = c.entries.iter().filter(|e| e.exists).map(|e| e.n).collect();
        assert_eq!(exists, vec![14, 18]);
        for e in c.entries.iter().filter(|e| e.exists) {
            let g = e.witness_set().unwrap();
            assert!(is_nut_kernel(&g).unwrap().is_nut);
        }
    }

    #[test]
    fn degree_four_and_six() {
        let four = catalog(4, 6, 20, SearchOptions::default()).unwrap();
        for e in &four.entries {
            assert_eq!(e.exists, e.n >= 8, "n={}", e.n);
        }
        let six = catalog(6, 8, 16, SearchOptions::default()).unwrap();
        assert!(six.entries.iter().all(|e| !e.exists));
    }

    #[test]
    fn jobs_do_not_change_results() {
        let one = catalog(
            8,
            10,
            22,
            SearchOptions {
                jobs: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let four = catalog(
            8,
            10,
            22,
            SearchOptions {
                jobs: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn capacity_marks_skipped() {
        let opts = SearchOptions {
            capacity: 10,
            ..Default::default()
        };
        let c = catalog(8, 14, 16, opts).unwrap();
        assert!(c
            .entries
            .iter()
            .all(|e| e.skipped && !e.exists && e.sets_enumerated == 0));
        assert_eq!(c.entries.len(), 2);
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(
            catalog(8, 20, 10, SearchOptions::default()),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            catalog(7, 10, 20, SearchOptions::default()),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn too_small_orders_give_empty_entries() {
        let c = catalog(8, 4, 8, SearchOptions::default()).unwrap();
        assert!(c
            .entries
            .iter()
            .all(|e| !e.exists && e.sets_enumerated == 0 && !e.skipped));
    }

    #[test]
    fn probe_examples() {
        assert!(conjecture_probe(&[], 16, SearchOptions::default())
            .unwrap()
            .entries
            .is_empty());
        assert!(matches!(
            conjecture_probe(&[3], 16, SearchOptions::default()),
            Err(Error::Parameter(_))
        ));
        let r = conjecture_probe(&[4], 16, SearchOptions::default()).unwrap();
        let found: Vec<(u64, bool)> = r.entries.iter().map(|e| (e.n, e.exists)).collect();
        assert_eq!(found, vec![(24, true), (28, true), (32, true)]);
    }

    #[test]
    fn csv_has_one_line_per_entry() {
        let c = catalog(8, 12, 14, SearchOptions::default()).unwrap();
        let csv = c.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().starts_with("8,14,true,"));
    }
}
