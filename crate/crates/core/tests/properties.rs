//! Algebraic identities and divisor-set facts checked over finite grids.

use num_bigint::BigInt;
use num_traits::Zero;
use nutcirc::cyclotomy::{cyclo_divisors_accelerated, cyclo_divisors_oracle, filaseta_step};
use nutcirc::families::{
    exponent_set, family_poly, unique_remainder_exists, FamilyPolyId, FamilyPolyKind,
};
use nutcirc::numtheory::{divisors, euler_phi, factorize};
use nutcirc::poly::{cyclotomic, DensePoly, SparsePoly};

fn fp(kind: FamilyPolyKind, t: u64) -> SparsePoly {
    family_poly(&FamilyPolyId::new(kind, t).unwrap())
}

fn odd_ts() -> impl Iterator<Item = u64> {
    (3..=15).step_by(2)
}

#[test]
fn product_of_cyclotomics_and_degrees() {
    for b in 1..=60u64 {
        let product = divisors(b)
            .into_iter()
            .fold(DensePoly::one(), |acc, d| acc.mul(&cyclotomic(d).unwrap()));
        let target = DensePoly::monomial(BigInt::from(1), b as usize).sub(&DensePoly::one());
        assert_eq!(product, target, "b = {b}");
        assert_eq!(
            cyclotomic(b).unwrap().degree(),
            Some(euler_phi(b).unwrap() as usize)
        );
    }
}

#[test]
fn square_prime_index_is_a_composition() {
    for b in 2..=200u64 {
        for (p, e) in factorize(b) {
            if e >= 2 {
                let lower = cyclotomic(b / p).unwrap().compose_power(p as usize);
                assert_eq!(*cyclotomic(b).unwrap(), lower, "b = {b}, p = {p}");
            }
        }
    }
}

#[test]
fn filaseta_worked_examples() {
    let s21 = filaseta_step(6, 21);
    assert_eq!(s21.len(), 1);
    assert_eq!(
        (s21[0].prime, s21[0].reduced, s21[0].condition_sum),
        (7, 3, 5)
    );
    assert!(s21[0].condition_holds());
    assert!(filaseta_step(6, 15).is_empty());
}

#[test]
fn filaseta_reductions_are_consistent_with_divisor_sets() {
    // whenever a divisor b meets the hypothesis, some reduced index divides too
    for kind in FamilyPolyKind::ALL {
        let ts: Vec<u64> = match kind {
            FamilyPolyKind::Q | FamilyPolyKind::R => odd_ts().collect(),
            _ => (2..=10).collect(),
        };
        for t in ts {
            let p = fp(kind, t);
            let report = cyclo_divisors_oracle(&p).unwrap();
            for &b in &report.divisors {
                let steps = filaseta_step(p.term_count(), b);
                assert!(
                    steps.is_empty() || steps.iter().any(|s| report.contains(s.reduced)),
                    "{kind} t={t} b={b}"
                );
            }
        }
    }
}

#[test]
fn family_polynomials_vanish_at_plus_minus_one() {
    let one = BigInt::from(1);
    let minus_one = BigInt::from(-1);
    for t in odd_ts() {
        for kind in [FamilyPolyKind::Q, FamilyPolyKind::R] {
            let p = fp(kind, t);
            assert!(
                p.eval(&one).is_zero() && p.eval(&minus_one).is_zero(),
                "{kind} t={t}"
            );
        }
    }
    for t in 2..=10 {
        for kind in [FamilyPolyKind::U, FamilyPolyKind::W] {
            let p = fp(kind, t);
            assert!(
                p.eval(&one).is_zero() && p.eval(&minus_one).is_zero(),
                "{kind} t={t}"
            );
        }
    }
}

#[test]
fn family_divisor_sets_are_small() {
    for t in odd_ts() {
        for kind in [FamilyPolyKind::Q, FamilyPolyKind::R] {
            let p = fp(kind, t);
            assert_eq!(
                cyclo_divisors_oracle(&p).unwrap().divisors,
                [1, 2],
                "{kind} t={t}"
            );
            assert_eq!(
                cyclo_divisors_accelerated(&p).unwrap().divisors,
                [1, 2],
                "{kind} t={t}"
            );
        }
    }
    for t in 2..=10 {
        for kind in [FamilyPolyKind::U, FamilyPolyKind::W] {
            let p = fp(kind, t);
            let oracle = cyclo_divisors_oracle(&p).unwrap();
            assert!(
                oracle.divisors.iter().all(|b| [1, 2, 4, 8].contains(b)),
                "{kind} t={t}"
            );
            assert_eq!(
                cyclo_divisors_accelerated(&p).unwrap().divisors,
                oracle.divisors
            );
        }
    }
}

#[test]
fn auxiliary_polynomials_have_no_roots_of_unity() {
    for text in [
        "10:2,5:1,0:2",
        "10:2,5:-1,0:2",
        "6:2,3:1,0:2",
        "6:2,3:-1,0:2",
        "2:2,1:1,0:2",
        "2:2,1:-1,0:2",
    ] {
        let p: SparsePoly = text.parse().unwrap();
        assert!(cyclo_divisors_oracle(&p).unwrap().is_empty(), "{text}");
        assert!(cyclo_divisors_accelerated(&p).unwrap().is_empty(), "{text}");
    }
}

#[test]
fn four_term_residue_example() {
    // 2x^10 + x^5 + 2 leaves x modulo x^2 + 1
    let z: SparsePoly = "10:2,5:1,0:2".parse().unwrap();
    let phi4 = cyclotomic(4).unwrap();
    assert_eq!(
        z.to_dense().rem(&phi4).unwrap(),
        DensePoly::from_i64s(&[0, 1])
    );
}

#[test]
fn unique_remainder_grids() {
    for t in (3..=25).step_by(2) {
        for p in [5, 7, 11, 13] {
            for kind in [FamilyPolyKind::Q, FamilyPolyKind::R] {
                let id = FamilyPolyId::new(kind, t).unwrap();
                assert!(
                    unique_remainder_exists(&id, p).unwrap(),
                    "{kind} t={t} p={p}"
                );
            }
        }
    }
    for t in 2..=25 {
        for p in [7, 11, 13] {
            for kind in [FamilyPolyKind::U, FamilyPolyKind::W] {
                let id = FamilyPolyId::new(kind, t).unwrap();
                assert!(
                    unique_remainder_exists(&id, p).unwrap(),
                    "{kind} t={t} p={p}"
                );
            }
        }
    }
}

#[test]
fn exponent_sets_have_six_elements() {
    for t in odd_ts() {
        assert_eq!(
            exponent_set(&FamilyPolyId::new(FamilyPolyKind::Q, t).unwrap()).len(),
            6
        );
    }
    for t in 2..=25 {
        assert_eq!(
            exponent_set(&FamilyPolyId::new(FamilyPolyKind::U, t).unwrap()).len(),
            6
        );
    }
}
