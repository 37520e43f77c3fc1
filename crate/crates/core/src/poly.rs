//! Exact integer polynomials.
//!
//! Two representations are used side by side: [`DensePoly`] (ascending
//! coefficient vector) for cyclotomic divisors and remainders, and
//! [`SparsePoly`] (exponent → coefficient map) for lacunary polynomials whose
//! degree is large compared to their term count. Conversions are explicit.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::numtheory::divisors;
use crate::{Error, Result};

/// Dense polynomial with coefficients ascending by exponent.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector. Equality is therefore structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DensePoly {
    coeffs: Vec<BigInt>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    /// `c * x^e`
    pub fn monomial(c: BigInt, e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Substitutes `x^k` for `x`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k > 0);
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(out)
    }

    /// Long division `self = q * divisor + r` with `deg r < deg divisor`.
    ///
    /// Runs in exact integer arithmetic. Monic (or unit-leading) divisors
    /// always succeed; for other divisors an error is returned as soon as a
    /// quotient coefficient would leave the integers.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InvalidArgument(
                    "integer long division: quotient is not integral".into(),
                ));
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] -= &q * d;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// `self mod divisor`.
    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// True when `divisor` divides `self` exactly.
    pub fn is_divisible_by(&self, divisor: &Self) -> Result<bool> {
        Ok(self.rem(divisor)?.is_zero())
    }

    /// Comma separated coefficients ascending from `x^0`; `0` for zero.
    pub fn to_dense_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_dense(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::zero());
        }
        s.split(',')
            .map(|c| {
                c.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn to_sparse(&self) -> SparsePoly {
        SparsePoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(e, c)| (e as u64, c.clone())),
        )
    }
}

fn write_ascending<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (u64, &'a BigInt)>,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if neg {
            f.write_str("-")?;
        } else if !first {
            f.write_str("+")?;
        }
        match e {
            0 => write!(f, "{mag}")?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                if e == 1 {
                    f.write_str("x")?;
                } else {
                    write!(f, "x^{e}")?;
                }
            }
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Human form, ascending: `-3+3x^2`.
impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ascending(
            f,
            self.coeffs.iter().enumerate().map(|(e, c)| (e as u64, c)),
        )
    }
}

/// Sparse polynomial keyed by exponent. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly {
    terms: BTreeMap<u64, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (u64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: u64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.terms.iter().map(|(&e, c)| c * x.pow(e as u32)).sum()
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn to_dense(&self) -> DensePoly {
        let Some(deg) = self.degree() else {
            return DensePoly::zero();
        };
        let mut coeffs = vec![BigInt::zero(); deg as usize + 1];
        for (&e, c) in &self.terms {
            coeffs[e as usize] = c.clone();
        }
        DensePoly::new(coeffs)
    }

    /// Replaces every exponent `a` by `a mod b`, summing collisions.
    /// The result is congruent to `self` modulo `x^b - 1`.
    pub fn reduce_mod_xb(&self, b: u64) -> Result<SparsePoly> {
        if b == 0 {
            return Err(Error::InvalidArgument(
                "reduction modulus must be >= 1".into(),
            ));
        }
        Ok(SparsePoly::from_terms(
            self.terms.iter().map(|(&e, c)| (e % b, c.clone())),
        ))
    }

    /// Maps `c x^a` to `c (-1)^(a div q) x^(a mod q)`; the result is congruent
    /// to `self` modulo `x^q + 1`.
    pub fn reduce_mod_signed(&self, q: u64) -> Result<SparsePoly> {
        if q == 0 {
            return Err(Error::InvalidArgument(
                "reduction modulus must be >= 1".into(),
            ));
        }
        Ok(SparsePoly::from_terms(self.terms.iter().map(|(&e, c)| {
            let c = if (e / q) % 2 == 1 { -c } else { c.clone() };
            (e % q, c)
        })))
    }

    /// `exp:coeff` pairs, exponents strictly descending; `0` for zero.
    pub fn to_sparse_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| format!("{e}:{c}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_sparse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for pair in s.split(',') {
            let (e, c) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected exp:coeff, got {pair:?}")))?;
            let e: u64 = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            let c: BigInt = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl FromStr for SparsePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_sparse(s)
    }
}

impl serde::Serialize for SparsePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_sparse_string())
    }
}

impl<'de> serde::Deserialize<'de> for SparsePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <String as serde::Deserialize>::deserialize(d)?;
        Self::parse_sparse(&raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ascending(f, self.terms())
    }
}

impl From<&SparsePoly> for DensePoly {
    fn from(p: &SparsePoly) -> Self {
        p.to_dense()
    }
}

/// Free-function form of [`DensePoly::div_rem`].
pub fn dense_div_rem(a: &DensePoly, b: &DensePoly) -> Result<(DensePoly, DensePoly)> {
    a.div_rem(b)
}

pub fn reduce_mod_xb(p: &SparsePoly, b: u64) -> Result<SparsePoly> {
    p.reduce_mod_xb(b)
}

pub fn reduce_mod_signed(p: &SparsePoly, q: u64) -> Result<SparsePoly> {
    p.reduce_mod_signed(q)
}

pub use crate::numtheory::euler_phi;

type CycloCache = RwLock<HashMap<u64, Arc<DensePoly>>>;

fn cache() -> &'static CycloCache {
    static CACHE: OnceLock<CycloCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `b`-th cyclotomic polynomial.
///
/// Obtained by dividing `x^b - 1` by every `Φ_d` with `d | b, d < b`.
/// Results are memoised process-wide; concurrent callers may race to compute
/// the same entry, which is harmless since the value is unique.
pub fn cyclotomic(b: u64) -> Result<Arc<DensePoly>> {
    if b == 0 {
        return Err(Error::InvalidArgument(
            "cyclotomic index must be >= 1".into(),
        ));
    }
    if let Some(p) = cache().read().expect("cyclotomic cache poisoned").get(&b) {
        return Ok(Arc::clone(p));
    }
    let mut acc = DensePoly::monomial(BigInt::one(), b as usize).sub(&DensePoly::one());
    for d in divisors(b) {
        if d == b {
            break;
        }
        let phi = cyclotomic(d)?;
        let (q, r) = acc.div_rem(&phi)?;
        debug_assert!(r.is_zero(), "Φ_{d} must divide x^{b} - 1");
        acc = q;
    }
    let acc = Arc::new(acc);
    cache()
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(b)
        .or_insert_with(|| Arc::clone(&acc));
    Ok(acc)
}

/// True when `Φ_b` divides `p`, decided by reducing `p` modulo `x^b - 1`
/// first (valid because `Φ_b | x^b - 1`).
pub fn cyclotomic_divides(b: u64, p: &SparsePoly) -> Result<bool> {
    let reduced = p.reduce_mod_xb(b)?.to_dense();
    let phi = cyclotomic(b)?;
    reduced.is_divisible_by(&phi)
}
