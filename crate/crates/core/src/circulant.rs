//! Circulant graphs `Circ(n, S)` and the two nut-graph deciders.
//!
//! The eigenvalues of `Circ(n, S)` are `P(ω^j)` for the eigenvalue polynomial
//! `P(x) = Σ_{s∈S} (x^s + x^{n-s})` and `ω = e^{2πi/n}`. A circulant graph is
//! a nut graph iff `n` is even, `S` has as many odd as even members, and
//! `P(ω^j) ≠ 0` for `1 <= j < n/2`. Each such `ω^j` is a primitive `b`-th root
//! of unity for a divisor `b >= 3` of `n`, so the last condition is checked as
//! `Φ_b ∤ P` over those divisors.
//!
//! [`is_nut_kernel`] decides the same question directly from the adjacency
//! matrix with exact elimination and shares no code with the spectral path.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{primitive_integer_form, Echelon};
use crate::numtheory::divisors;
use crate::poly::{cyclotomic_divides, SparsePoly};
use crate::serde_big;
use crate::{Error, Result};

/// Default largest order accepted by [`kernel_oracle`].
pub const DEFAULT_ORACLE_LIMIT: u64 = 256;

/// Environment variable overriding [`DEFAULT_ORACLE_LIMIT`].
pub const ORACLE_LIMIT_ENV: &str = "NUTCIRC_ORACLE_LIMIT";

/// Generator set of `Circ(n, S)`: distinct `s` with `1 <= s < n/2`, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGeneratorSet")]
pub struct GeneratorSet {
    n: u64,
    elements: Vec<u64>,
}

#[derive(Deserialize)]
struct RawGeneratorSet {
    n: u64,
    elements: Vec<u64>,
}

impl TryFrom<RawGeneratorSet> for GeneratorSet {
    type Error = Error;

    fn try_from(raw: RawGeneratorSet) -> Result<Self> {
        GeneratorSet::new(raw.n, raw.elements)
    }
}

impl GeneratorSet {
    pub fn new(n: u64, mut elements: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGeneratorSet("order must be positive".into()));
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGeneratorSet(format!(
                "duplicate element {}",
                w[0]
            )));
        }
        if let Some(&s) = elements.iter().find(|&&s| s == 0 || 2 * s >= n) {
            return Err(Error::InvalidGeneratorSet(format!(
                "element {s} outside 1..n/2 for n = {n}"
            )));
        }
        Ok(GeneratorSet { n, elements })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Vertex degree `2 |S|`.
    pub fn degree(&self) -> u64 {
        2 * self.elements.len() as u64
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        write!(f, "Circ({}, {{{}}})", self.n, list.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    OddOrder,
    ParityImbalance,
    SpectralFailure,
    NullityNotOne,
    KernelHasZero,
    Ok,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Smallest `b` with `Φ_b | P`.
    Divisor(u64),
    Nullity(u64),
    KernelVector(#[serde(with = "serde_big::rational_vec")] Vec<BigRational>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NutVerdict {
    pub is_nut: bool,
    pub reason: Reason,
    pub witness: Option<Witness>,
}

impl NutVerdict {
    pub(crate) fn fail(reason: Reason, witness: Option<Witness>) -> Self {
        NutVerdict {
            is_nut: false,
            reason,
            witness,
        }
    }

    pub(crate) fn pass(witness: Option<Witness>) -> Self {
        NutVerdict {
            is_nut: true,
            reason: Reason::Ok,
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub nullity: u64,
    #[serde(with = "serde_big::opt_rational_vec")]
    pub kernel_vector: Option<Vec<BigRational>>,
    pub full_support: bool,
}

/// `P(x) = Σ_{s∈S} (x^s + x^{n-s})`.
pub fn eigen_poly(g: &GeneratorSet) -> SparsePoly {
    SparsePoly::from_terms(
        g.elements
            .iter()
            .flat_map(|&s| [(s, 1i64), (g.n - s, 1i64)]),
    )
}

/// `|S|` even with equally many odd and even members (and `S` nonempty).
pub fn parity_balanced(g: &GeneratorSet) -> bool {
    let odd = g.elements.iter().filter(|&&s| s % 2 == 1).count();
    !g.is_empty() && 2 * odd == g.len()
}

/// Every divisor `b >= 3` of `n`; the orders of `ω^j` for `1 <= j < n/2`.
pub fn spectral_divisors(n: u64) -> Vec<u64> {
    divisors(n).into_iter().filter(|&b| b >= 3).collect()
}

pub fn is_nut_spectral(g: &GeneratorSet) -> NutVerdict {
    if g.n % 2 == 1 {
        return NutVerdict::fail(Reason::OddOrder, None);
    }
    if !parity_balanced(g) {
        return NutVerdict::fail(Reason::ParityImbalance, None);
    }
    let p = eigen_poly(g);
    for b in spectral_divisors(g.n) {
        if cyclotomic_divides(b, &p).expect("b >= 3 and cyclotomic divisors are monic") {
            return NutVerdict::fail(Reason::SpectralFailure, Some(Witness::Divisor(b)));
        }
    }
    NutVerdict::pass(None)
}

/// Oracle capacity from [`ORACLE_LIMIT_ENV`], falling back to the default.
pub fn oracle_limit() -> u64 {
    std::env::var(ORACLE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_LIMIT)
}

/// The 0/1 adjacency matrix: `A[i][j] = 1` iff `(j - i) mod n` or
/// `(i - j) mod n` is a generator.
pub fn adjacency_matrix(g: &GeneratorSet) -> Vec<Vec<BigInt>> {
    let n = g.n as usize;
    let mut first = vec![0u8; n];
    for &s in &g.elements {
        first[s as usize] = 1;
        first[n - s as usize] = 1;
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from(first[(j + n - i) % n]))
                .collect()
        })
        .collect()
}

pub fn kernel_oracle(g: &GeneratorSet) -> Result<KernelReport> {
    kernel_oracle_with_limit(g, oracle_limit())
}

pub fn kernel_oracle_with_limit(g: &GeneratorSet, limit: u64) -> Result<KernelReport> {
    if g.n > limit {
        return Err(Error::Capacity { n: g.n, limit });
    }
    let echelon = Echelon::reduce(adjacency_matrix(g));
    let nullity = echelon.nullity() as u64;
    let kernel_vector = (nullity == 1).then(|| {
        let free = echelon.free_columns()[0];
        primitive_integer_form(&echelon.kernel_vector(free))
    });
    let full_support = kernel_vector
        .as_ref()
        .is_some_and(|v| v.iter().all(|x| !x.is_zero()));
    Ok(KernelReport {
        nullity,
        kernel_vector,
        full_support,
    })
}

pub fn is_nut_kernel(g: &GeneratorSet) -> Result<NutVerdict> {
    is_nut_kernel_with_limit(g, oracle_limit())
}

pub fn is_nut_kernel_with_limit(g: &GeneratorSet, limit: u64) -> Result<NutVerdict> {
    let report = kernel_oracle_with_limit(g, limit)?;
    Ok(match report.kernel_vector {
        None => NutVerdict::fail(
            Reason::NullityNotOne,
            Some(Witness::Nullity(report.nullity)),
        ),
        Some(v) if !report.full_support => {
            NutVerdict::fail(Reason::KernelHasZero, Some(Witness::KernelVector(v)))
        }
        Some(v) => NutVerdict::pass(Some(Witness::KernelVector(v))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_vec;

    fn g(n: u64, s: &[u64]) -> GeneratorSet {
        GeneratorSet::new(n, s.to_vec()).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert!(GeneratorSet::new(16, vec![1, 2, 16]).is_err());
        assert!(GeneratorSet::new(16, vec![8]).is_err());
        assert!(GeneratorSet::new(16, vec![0, 1]).is_err());
        assert!(GeneratorSet::new(16, vec![3, 3]).is_err());
        assert_eq!(g(16, &[7, 1, 2]).elements(), &[1, 2, 7]);
        assert_eq!(g(9, &[4]).elements(), &[4]);
    }

    #[test]
    fn eigen_poly_examples() {
        let want = |t: &[u64]| SparsePoly::from_terms(t.iter().map(|&e| (e, 1i64)));
        assert_eq!(eigen_poly(&g(8, &[2, 3])), want(&[2, 3, 5, 6]));
        assert_eq!(eigen_poly(&g(6, &[1, 2])), want(&[1, 2, 4, 5]));
        assert_eq!(
            eigen_poly(&g(14, &[1, 4, 5, 6])),
            want(&[1, 4, 5, 6, 8, 9, 10, 13])
        );
    }

    #[test]
    fn parity_examples() {
        assert!(parity_balanced(&g(16, &[1, 2, 4, 5, 6, 7])));
        assert!(!parity_balanced(&g(8, &[1, 3])));
        assert!(parity_balanced(&g(14, &[1, 4, 5, 6])));
        assert!(!parity_balanced(&g(14, &[])));
    }

    #[test]
    fn spectral_examples() {
        assert!(is_nut_spectral(&g(16, &[1, 2, 4, 5, 6, 7])).is_nut);
        assert_eq!(is_nut_spectral(&g(9, &[1, 2])).reason, Reason::OddOrder);
        let v = is_nut_spectral(&g(14, &[1, 2, 3, 4, 5, 6]));
        assert!(!v.is_nut);
        // x + x^2 + x^4 + x^5 ≡ 0 mod x^2 - x + 1, but not mod x^2 + x + 1
        let v = is_nut_spectral(&g(6, &[1, 2]));
        assert_eq!(v.reason, Reason::SpectralFailure);
        assert_eq!(v.witness, Some(Witness::Divisor(6)));
    }

    #[test]
    fn kernel_examples() {
        let r = kernel_oracle(&g(16, &[1, 2, 4, 5, 6, 7])).unwrap();
        assert_eq!(r.nullity, 1);
        assert!(r.full_support);
        let r = kernel_oracle(&g(4, &[1])).unwrap();
        assert_eq!((r.nullity, r.kernel_vector.is_none()), (2, true));
        assert_eq!(kernel_oracle(&g(6, &[1, 2])).unwrap().nullity, 3);

        assert!(is_nut_kernel(&g(16, &[1, 2, 4, 5, 6, 7])).unwrap().is_nut);
        let v = is_nut_kernel(&g(4, &[1])).unwrap();
        assert_eq!(v.reason, Reason::NullityNotOne);
        assert_eq!(v.witness, Some(Witness::Nullity(2)));
        assert!(is_nut_kernel(&g(10, &[3, 4])).unwrap().is_nut);
    }

    #[test]
    fn kernel_vector_annihilated() {
        let gs = g(16, &[1, 2, 4, 5, 6, 7]);
        let v = kernel_oracle(&gs).unwrap().kernel_vector.unwrap();
        assert!(mat_vec(&adjacency_matrix(&gs), &v)
            .iter()
            .all(Zero::is_zero));
    }

    #[test]
    fn capacity_guard() {
        let gs = g(20, &[1, 2]);
        assert_eq!(
            kernel_oracle_with_limit(&gs, 10),
            Err(Error::Capacity { n: 20, limit: 10 })
        );
    }

    #[test]
    fn row_sum_and_trace() {
        for gs in [g(16, &[1, 2, 4, 5, 6, 7]), g(11, &[2, 5]), g(30, &[1, 14])] {
            let p = eigen_poly(&gs);
            assert_eq!(p.eval(&BigInt::from(1)), BigInt::from(gs.degree()));
            assert!(p.reduce_mod_xb(gs.n()).unwrap().coeff(0).is_zero());
        }
    }

    #[test]
    fn verdict_json_round_trip() {
        let v = is_nut_kernel(&g(16, &[1, 2, 4, 5, 6, 7])).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<NutVerdict>(&json).unwrap(), v);
        let gs = g(16, &[1, 2, 4, 5, 6, 7]);
        let json = serde_json::to_string(&gs).unwrap();
        assert_eq!(serde_json::from_str::<GeneratorSet>(&json).unwrap(), gs);
        assert!(serde_json::from_str::<GeneratorSet>(r#"{"n":8,"elements":[4]}"#).is_err());
    }
}
