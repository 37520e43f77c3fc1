//! Fraction-free (Bareiss) row echelon form over the integers, used for
//! exact rank and null space computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row echelon form produced by [`Echelon::reduce`].
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    cols: usize,
}

impl Echelon {
    /// Bareiss elimination with column skipping. Every intermediate entry is
    /// a minor of the input, so the division by the previous pivot is exact.
    pub fn reduce(mut rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pivot = &pivot_row[c];
            for row in tail.iter_mut() {
                let factor = std::mem::take(&mut row[c]);
                for j in c + 1..cols {
                    let v = pivot * &row[j] - &factor * &pivot_row[j];
                    let (q, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
            }
            prev = rows[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        Echelon { rows, pivots, cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// Kernel vector with `x[free] = 1` and every other free variable zero.
    pub fn kernel_vector(&self, free: usize) -> Vec<BigRational> {
        assert!(
            !self.pivots.contains(&free),
            "column {free} is a pivot column"
        );
        let mut x = vec![BigRational::zero(); self.cols];
        x[free] = BigRational::one();
        for (i, &pc) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[i];
            let acc: BigRational = (pc + 1..self.cols)
                .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                .map(|j| BigRational::from_integer(row[j].clone()) * &x[j])
                .sum();
            x[pc] = -acc / BigRational::from_integer(row[pc].clone());
        }
        x
    }

    /// A basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        self.free_columns()
            .into_iter()
            .map(|f| self.kernel_vector(f))
            .collect()
    }
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive. The zero vector is returned unchanged.
pub fn primitive_integer_form(v: &[BigRational]) -> Vec<BigRational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &g * &sign))
        .collect()
}

/// `A v` over the rationals.
pub fn mat_vec(a: &[Vec<BigInt>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, x)| BigRational::from_integer(c.clone()) * x)
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Plain Gauss–Jordan over the rationals; independent rank oracle.
    fn rational_rank(a: &[Vec<BigInt>]) -> usize {
        let mut m: Vec<Vec<BigRational>> = a
            .iter()
            .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let piv = m[rank][c].clone();
            for i in 0..m.len() {
                if i != rank && !m[i][c].is_zero() {
                    let f = &m[i][c] / &piv;
                    let pivot_row = m[rank].clone();
                    for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= &f * p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn four_cycle_has_nullity_two() {
        let a = mat(&[&[0, 1, 0, 1], &[1, 0, 1, 0], &[0, 1, 0, 1], &[1, 0, 1, 0]]);
        let e = Echelon::reduce(a.clone());
        assert_eq!(e.rank(), 2);
        assert_eq!(e.nullity(), 2);
        for v in e.kernel_basis() {
            assert!(mat_vec(&a, &v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn primitive_form() {
        let v: Vec<BigRational> = [(-1, 2), (1, 3), (0, 1)]
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect();
        let p = primitive_integer_form(&v);
        let want: Vec<BigRational> = [3, -2, 0]
            .iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect();
        assert_eq!(p, want);
    }

    proptest! {
        #[test]
        fn rank_matches_rational_elimination(
            rows in 1usize..7,
            cols in 1usize..7,
            seed in prop::collection::vec(-3i64..=3, 49),
        ) {
            let a: Vec<Vec<BigInt>> = (0..rows)
                .map(|i| (0..cols).map(|j| BigInt::from(seed[i * 7 + j])).collect())
                .collect();
            let e = Echelon::reduce(a.clone());
            prop_assert_eq!(e.rank(), rational_rank(&a));
            for v in e.kernel_basis() {
                prop_assert!(mat_vec(&a, &v).iter().all(Zero::is_zero));
            }
        }
    }
}
