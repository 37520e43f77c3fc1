//! Which cyclotomic polynomials divide a given integer polynomial?
//!
//! [`cyclo_divisors_oracle`] answers by exhaustive exact division and is the
//! ground truth. [`cyclo_divisors_accelerated`] returns the same set but skips
//! most divisions using two lacunary-polynomial facts:
//!
//! * the Filaseta–Schinzel reduction: if `Φ_b | P`, `P` has `N` terms and the
//!   distinct primes `p_1..p_k` dividing `b` satisfy `Σ (p_j - 2) > N - 2`,
//!   then `Φ_{b / p_j^{e_j}} | P` for at least one `j`;
//! * the term-count argument for `Φ_q` and `Φ_{2q}` with `q` prime: after
//!   folding `P` modulo `x^q ∓ 1` the result has degree below `q`, so it is
//!   divisible only if it vanishes or has exactly `q` terms.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numtheory::{euler_phi, factorize, is_prime};
use crate::poly::{cyclotomic, cyclotomic_divides, SparsePoly};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Oracle,
    Accelerated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloDivisorReport {
    /// Every `b` with `Φ_b | P`, ascending.
    pub divisors: Vec<u64>,
    pub degree: u64,
    /// Largest `b` examined.
    pub search_bound: u64,
    pub engine: Engine,
}

impl CycloDivisorReport {
    pub fn contains(&self, b: u64) -> bool {
        self.divisors.binary_search(&b).is_ok()
    }

    /// True iff the polynomial has a root of unity among its roots.
    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }
}

/// One candidate reduction `b -> b / p^e` from the Filaseta–Schinzel theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub b: u64,
    pub prime: u64,
    pub exponent: u32,
    pub reduced: u64,
    pub term_count: usize,
    pub condition_sum: u64,
}

impl ReductionStep {
    /// `Σ (p_j - 2) > N - 2`
    pub fn condition_holds(&self) -> bool {
        self.condition_sum as i128 > self.term_count as i128 - 2
    }
}

/// Any `b` with `φ(b) <= d` satisfies `b <= 2 d^2`, because `φ(b) >= sqrt(b / 2)`.
fn search_bound(degree: u64) -> u64 {
    2 * degree * degree
}

fn candidates(degree: u64) -> impl Iterator<Item = u64> {
    (1..=search_bound(degree)).filter(move |&b| euler_phi(b).expect("b >= 1") <= degree)
}

/// Ground truth: tests `Φ_b | P` by exact long division for every `b` with
/// `φ(b) <= deg P`.
pub fn cyclo_divisors_oracle(p: &SparsePoly) -> Result<CycloDivisorReport> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    let dense = p.to_dense();
    let bs: Vec<u64> = candidates(degree).collect();
    let hits: Vec<Option<u64>> = bs
        .par_iter()
        .map(|&b| -> Result<Option<u64>> {
            let phi = cyclotomic(b)?;
            Ok(dense.is_divisible_by(&phi)?.then_some(b))
        })
        .collect::<Result<_>>()?;
    Ok(CycloDivisorReport {
        divisors: hits.into_iter().flatten().collect(),
        degree,
        search_bound: search_bound(degree),
        engine: Engine::Oracle,
    })
}

pub fn has_root_of_unity(p: &SparsePoly) -> Result<bool> {
    Ok(!cyclo_divisors_oracle(p)?.is_empty())
}

/// Candidate reductions of `b` for a polynomial with `term_count` terms.
///
/// The distinct primes of `b` are taken largest first until
/// `Σ (p_j - 2) > N - 2`; one step is returned per prime used. An empty list
/// means the theorem's hypothesis cannot be met for this `b`.
pub fn filaseta_step(term_count: usize, b: u64) -> Vec<ReductionStep> {
    if b < 2 || term_count == 0 {
        return Vec::new();
    }
    let mut primes = factorize(b);
    primes.reverse();
    let threshold = term_count as i128 - 2;
    let mut sum = 0u64;
    for (k, &(p, _)) in primes.iter().enumerate() {
        sum += p - 2;
        if sum as i128 > threshold {
            return primes[..=k]
                .iter()
                .map(|&(prime, exponent)| ReductionStep {
                    b,
                    prime,
                    exponent,
                    reduced: b / prime.pow(exponent),
                    term_count,
                    condition_sum: sum,
                })
                .collect();
        }
    }
    Vec::new()
}

/// Certifies `Φ_q ∤ P` and `Φ_{2q} ∤ P` by term counting, for prime `q >= 7`.
///
/// Returns `false` (inconclusive) when either folded polynomial vanishes or
/// has `q` or more terms.
pub fn large_prime_exclusion(p: &SparsePoly, q: u64) -> Result<bool> {
    if q < 7 || !is_prime(q) {
        return Err(Error::InvalidArgument(format!(
            "large prime exclusion needs a prime >= 7, got {q}"
        )));
    }
    let excluded = |r: SparsePoly| !r.is_zero() && (r.term_count() as u64) < q;
    Ok(excluded(p.reduce_mod_xb(q)?) && excluded(p.reduce_mod_signed(q)?))
}

/// `Some(q)` when `b` is `q` or `2q` for a prime `q >= 7`.
fn large_prime_core(b: u64) -> Option<u64> {
    let q = if b.is_multiple_of(2) { b / 2 } else { b };
    (q >= 7 && is_prime(q)).then_some(q)
}

/// Same divisor set as the oracle, with pruning before any exact division.
pub fn cyclo_divisors_accelerated(p: &SparsePoly) -> Result<CycloDivisorReport> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    let terms = p.term_count();
    let mut found = BTreeSet::new();
    let mut exclusion_cache: HashMap<u64, bool> = HashMap::new();

    // Ascending order: every reduced index b' < b is already decided.
    for b in candidates(degree) {
        let steps = filaseta_step(terms, b);
        if !steps.is_empty() && !steps.iter().any(|s| found.contains(&s.reduced)) {
            continue;
        }
        if let Some(q) = large_prime_core(b) {
            let excluded = match exclusion_cache.get(&q) {
                Some(&e) => e,
                None => {
                    let e = large_prime_exclusion(p, q)?;
                    exclusion_cache.insert(q, e);
                    e
                }
            };
            if excluded {
                continue;
            }
        }
        if cyclotomic_divides(b, p)? {
            found.insert(b);
        }
    }
    Ok(CycloDivisorReport {
        divisors: found.into_iter().collect(),
        degree,
        search_bound: search_bound(degree),
        engine: Engine::Accelerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &[(u64, i64)]) -> SparsePoly {
        SparsePoly::from_terms(t.iter().copied())
    }

    fn q3() -> SparsePoly {
        s(&[(5, 2), (4, 1), (3, -1), (2, 1), (1, -1), (0, -2)])
    }

    fn u2() -> SparsePoly {
        s(&[(8, 1), (7, 2), (5, -2), (3, 2), (0, -1), (1, -2)])
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            cyclo_divisors_oracle(&s(&[(2, 1), (0, -1)]))
                .unwrap()
                .divisors,
            vec![1, 2]
        );
        assert!(cyclo_divisors_oracle(&s(&[(2, 2), (1, 1), (0, 2)]))
            .unwrap()
            .is_empty());
        assert_eq!(cyclo_divisors_oracle(&q3()).unwrap().divisors, vec![1, 2]);
        // x^8 + 2x^7 - 2x^5 + 2x^3 - 2x - 1 vanishes mod x^4 + 1
        assert_eq!(
            cyclo_divisors_oracle(&u2()).unwrap().divisors,
            vec![1, 2, 8]
        );
        assert_eq!(
            cyclo_divisors_oracle(&SparsePoly::zero()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn constant_polynomial_has_no_divisors() {
        let r = cyclo_divisors_oracle(&s(&[(0, 5)])).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.degree, 0);
    }

    #[test]
    fn search_bound_covers_every_small_totient() {
        // scan far past the bound to make sure nothing is missed
        for d in 1..=40u64 {
            let beyond =
                (search_bound(d) + 1..=8 * d * d + 50).find(|&b| euler_phi(b).unwrap() <= d);
            assert_eq!(beyond, None, "degree {d}");
        }
    }

    #[test]
    fn roots_of_unity() {
        assert!(!has_root_of_unity(&s(&[(10, 2), (5, 1), (0, 2)])).unwrap());
        assert!(!has_root_of_unity(&s(&[(6, 2), (3, -1), (0, 2)])).unwrap());
        assert!(has_root_of_unity(&s(&[(4, 1), (3, 1), (2, 1), (1, 1), (0, 1)])).unwrap());
    }

    #[test]
    fn filaseta_examples() {
        let steps = filaseta_step(6, 21);
        assert_eq!(
            steps,
            vec![ReductionStep {
                b: 21,
                prime: 7,
                exponent: 1,
                reduced: 3,
                term_count: 6,
                condition_sum: 5
            }]
        );
        assert!(steps[0].condition_holds());
        assert!(filaseta_step(6, 15).is_empty());
        let steps = filaseta_step(3, 7);
        assert_eq!(steps.len(), 1);
        assert_eq!(
            (steps[0].prime, steps[0].reduced, steps[0].condition_sum),
            (7, 1, 5)
        );
    }

    #[test]
    fn filaseta_uses_several_primes_when_needed() {
        // N = 8: 7 - 2 = 5 is not > 6, add 5 - 2 = 3 -> 8 > 6
        let steps = filaseta_step(8, 2 * 5 * 49);
        let got: Vec<_> = steps
            .iter()
            .map(|s| (s.prime, s.exponent, s.reduced))
            .collect();
        assert_eq!(got, vec![(7, 2, 10), (5, 1, 98)]);
        assert!(steps
            .iter()
            .all(|s| s.condition_sum == 8 && s.condition_holds()));
    }

    #[test]
    fn large_prime_examples() {
        assert!(large_prime_exclusion(&q3(), 7).unwrap());
        let phi7 = s(&[(6, 1), (5, 1), (4, 1), (3, 1), (2, 1), (1, 1), (0, 1)]);
        assert!(!large_prime_exclusion(&phi7, 7).unwrap());
        assert!(large_prime_exclusion(&u2(), 7).unwrap());
        assert!(large_prime_exclusion(&q3(), 5).is_err());
        assert!(large_prime_exclusion(&q3(), 9).is_err());
    }

    #[test]
    fn accelerated_matches_oracle_on_small_inputs() {
        let polys = [
            q3(),
            u2(),
            s(&[(2, 1), (0, -1)]),
            s(&[(12, 1), (0, -1)]),
            s(&[(14, 1), (7, 1), (0, 1)]),
            s(&[(4, 1), (3, 1), (2, 1), (1, 1), (0, 1)]),
        ];
        for p in polys {
            assert_eq!(
                cyclo_divisors_accelerated(&p).unwrap().divisors,
                cyclo_divisors_oracle(&p).unwrap().divisors,
                "{p}"
            );
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn accelerated_agrees_with_oracle(
                terms in prop::collection::vec((0u64..24, -3i64..=3), 1..7),
            ) {
                let p = SparsePoly::from_terms(terms);
                prop_assume!(!p.is_zero());
                prop_assert_eq!(
                    cyclo_divisors_accelerated(&p).unwrap().divisors,
                    cyclo_divisors_oracle(&p).unwrap().divisors
                );
            }

            #[test]
            fn exclusion_is_sound(
                terms in prop::collection::vec((0u64..40, -3i64..=3), 1..7),
                q in prop::sample::select(vec![7u64, 11, 13]),
            ) {
                let p = SparsePoly::from_terms(terms);
                prop_assume!(!p.is_zero());
                if large_prime_exclusion(&p, q).unwrap() {
                    let dense = p.to_dense();
                    prop_assert!(!dense.is_divisible_by(&cyclotomic(q).unwrap()).unwrap());
                    prop_assert!(!dense.is_divisible_by(&cyclotomic(2 * q).unwrap()).unwrap());
                }
            }
        }
    }
}
