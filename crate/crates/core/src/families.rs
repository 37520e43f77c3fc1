//! The `D'` and `D''` circulant families, their six-term polynomials
//! `Q_t, R_t, U_t, W_t`, and the residue tables of those polynomials.
//!
//! `D'_{t,n} = Circ(n, S'_{t,n})` with `t` odd and `4 | n`, where
//! `S'_{t,n} = {1..t-1} ∪ {n/4, n/4 + 1} ∪ {n/2 - (t-1) .. n/2 - 1}`.
//! `D''_{t,n}` uses `{(n+2)/4, (n+6)/4}` as the middle block and needs
//! `n ≡ 2 (mod 4)`.
//!
//! [`family_nut_check`] decides nut-ness of these graphs without forming the
//! eigenvalue polynomial. For a primitive `b`-th root of unity `ζ` with
//! `b | n`, the outer blocks cancel when `ζ^{n/2} = -1` and double up when
//! `ζ^{n/2} = 1`; in the latter case `P(ζ)` times a factor vanishing only at
//! `±1` is one of the six-term polynomials:
//!
//! * `D'`:  `ζ^{n/4} = 1` gives `Q_t(ζ)`, `ζ^{n/4} = -1` gives `R_t(ζ)`;
//! * `D''`: with `ψ = ζ^{(n/2+1)/2}`, so that `ψ^2 = ζ` and `ψ` has the order
//!   of `ζ`, the value is `U_t(ψ)`; the other square root `-ψ` has
//!   `(-ψ)^{n/2} = -1` and gives `W_t(-ψ) = -U_t(ψ)`.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circulant::{GeneratorSet, NutVerdict, Reason, Witness};
use crate::numtheory::{divisors, is_prime};
use crate::poly::{cyclotomic, cyclotomic_divides, SparsePoly};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyVariant {
    #[serde(rename = "dprime")]
    DPrime,
    #[serde(rename = "ddprime")]
    DDoublePrime,
    /// `Circ(n, {1..2t+1} \ {t})`, the earlier family these two complement.
    #[serde(rename = "ds")]
    DsPrior,
}

impl FamilyVariant {
    pub fn name(self) -> &'static str {
        match self {
            FamilyVariant::DPrime => "dprime",
            FamilyVariant::DDoublePrime => "ddprime",
            FamilyVariant::DsPrior => "ds",
        }
    }
}

impl fmt::Display for FamilyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dprime" => Ok(FamilyVariant::DPrime),
            "ddprime" => Ok(FamilyVariant::DDoublePrime),
            "ds" => Ok(FamilyVariant::DsPrior),
            _ => Err(Error::Parse(format!(
                "unknown family variant {s:?} (expected dprime, ddprime or ds)"
            ))),
        }
    }
}

/// A validated `(variant, t, n)` triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyId {
    variant: FamilyVariant,
    t: u64,
    n: u64,
}

impl FamilyId {
    pub fn new(variant: FamilyVariant, t: u64, n: u64) -> Result<Self> {
        let bad = |msg: String| Err(Error::Parameter(format!("{variant} t={t} n={n}: {msg}")));
        if t == 0 {
            return bad("t must be positive".into());
        }
        match variant {
            FamilyVariant::DPrime => {
                if t.is_multiple_of(2) {
                    return bad("t must be odd".into());
                }
                if !n.is_multiple_of(4) {
                    return bad("n must be divisible by 4".into());
                }
                if n < 4 * t + 4 {
                    return bad(format!("n must be at least 4t + 4 = {}", 4 * t + 4));
                }
            }
            FamilyVariant::DDoublePrime => {
                if n % 4 != 2 {
                    return bad("n must be congruent to 2 mod 4".into());
                }
                if n < 4 * t + 6 {
                    return bad(format!("n must be at least 4t + 6 = {}", 4 * t + 6));
                }
            }
            FamilyVariant::DsPrior => {
                if t < 3 || t.is_multiple_of(2) {
                    return bad("t must be odd and at least 3".into());
                }
                if t % 10 == 1 {
                    return bad("t must not be 1 mod 10".into());
                }
                if t % 18 == 15 {
                    return bad("t must not be 15 mod 18".into());
                }
                if n % 2 == 1 {
                    return bad("n must be even".into());
                }
                if n < 4 * t + 4 {
                    return bad(format!("n must be at least 4t + 4 = {}", 4 * t + 4));
                }
            }
        }
        Ok(FamilyId { variant, t, n })
    }

    pub fn variant(&self) -> FamilyVariant {
        self.variant
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

pub fn build_family(id: &FamilyId) -> GeneratorSet {
    let (t, n) = (id.t, id.n);
    let elements: Vec<u64> = match id.variant {
        FamilyVariant::DsPrior => (1..=2 * t + 1).filter(|&s| s != t).collect(),
        FamilyVariant::DPrime | FamilyVariant::DDoublePrime => {
            let mid = match id.variant {
                FamilyVariant::DPrime => n / 4,
                _ => (n + 2) / 4,
            };
            (1..t)
                .chain([mid, mid + 1])
                .chain(n / 2 - (t - 1)..n / 2)
                .collect()
        }
    };
    GeneratorSet::new(n, elements).expect("family invariants imply a valid generator set")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyPolyKind {
    Q,
    R,
    U,
    W,
}

impl FamilyPolyKind {
    pub const ALL: [FamilyPolyKind; 4] = [
        FamilyPolyKind::Q,
        FamilyPolyKind::R,
        FamilyPolyKind::U,
        FamilyPolyKind::W,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyPolyKind::Q => "q",
            FamilyPolyKind::R => "r",
            FamilyPolyKind::U => "u",
            FamilyPolyKind::W => "w",
        }
    }

    /// Smallest `t` for which the polynomial is defined.
    fn min_t(self) -> u64 {
        match self {
            FamilyPolyKind::Q | FamilyPolyKind::R => 3,
            FamilyPolyKind::U | FamilyPolyKind::W => 2,
        }
    }

    fn min_prime(self) -> u64 {
        match self {
            FamilyPolyKind::Q | FamilyPolyKind::R => 5,
            FamilyPolyKind::U | FamilyPolyKind::W => 7,
        }
    }
}

impl fmt::Display for FamilyPolyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyPolyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q" => Ok(FamilyPolyKind::Q),
            "r" => Ok(FamilyPolyKind::R),
            "u" => Ok(FamilyPolyKind::U),
            "w" => Ok(FamilyPolyKind::W),
            _ => Err(Error::Parse(format!(
                "unknown polynomial kind {s:?} (expected q, r, u or w)"
            ))),
        }
    }
}

/// A validated `(kind, t)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyPolyId {
    kind: FamilyPolyKind,
    t: u64,
}

impl FamilyPolyId {
    pub fn new(kind: FamilyPolyKind, t: u64) -> Result<Self> {
        match kind {
            FamilyPolyKind::Q | FamilyPolyKind::R if t < 3 || t.is_multiple_of(2) => Err(
                Error::Parameter(format!("{kind}_t needs odd t >= 3, got t={t}")),
            ),
            FamilyPolyKind::U | FamilyPolyKind::W if t < 2 => Err(Error::Parameter(format!(
                "{kind}_t needs t >= 2, got t={t}"
            ))),
            _ => Ok(FamilyPolyId { kind, t }),
        }
    }

    pub fn kind(&self) -> FamilyPolyKind {
        self.kind
    }

    pub fn t(&self) -> u64 {
        self.t
    }
}

/// `(exponent, coefficient)` pairs of the polynomial, without domain checks.
/// Needs `t >= kind.min_t()` so that every exponent is nonnegative.
fn six_terms(kind: FamilyPolyKind, t: u64) -> [(u64, i64); 6] {
    debug_assert!(t >= kind.min_t());
    match kind {
        FamilyPolyKind::Q => [
            (2 * t - 1, 2),
            (t + 1, 1),
            (t, -1),
            (t - 1, 1),
            (t - 2, -1),
            (0, -2),
        ],
        FamilyPolyKind::R => [
            (2 * t - 1, 2),
            (t + 1, -1),
            (t, -3),
            (t - 1, 3),
            (t - 2, 1),
            (0, -2),
        ],
        FamilyPolyKind::U => [
            (4 * t - 1, 2),
            (2 * t + 4, 1),
            (2 * t + 1, -2),
            (2 * t - 1, 2),
            (2 * t - 4, -1),
            (1, -2),
        ],
        FamilyPolyKind::W => [
            (4 * t - 1, 2),
            (2 * t + 4, -1),
            (2 * t + 1, -2),
            (2 * t - 1, 2),
            (2 * t - 4, 1),
            (1, -2),
        ],
    }
}

fn unchecked_poly(kind: FamilyPolyKind, t: u64) -> SparsePoly {
    SparsePoly::from_terms(six_terms(kind, t))
}

pub fn family_poly(id: &FamilyPolyId) -> SparsePoly {
    unchecked_poly(id.kind, id.t)
}

/// The exponent support `L_t` (for Q, R) or `M_t` (for U, W).
pub fn exponent_set(id: &FamilyPolyId) -> BTreeSet<u64> {
    six_terms(id.kind, id.t).iter().map(|&(e, _)| e).collect()
}

/// True iff some exponent has a residue mod `p` shared by no other exponent.
pub fn unique_remainder_exists(id: &FamilyPolyId, p: u64) -> Result<bool> {
    let min = id.kind.min_prime();
    if p < min || !is_prime(p) {
        return Err(Error::Parameter(format!(
            "{}_t unique remainder check needs a prime p >= {min}, got {p}",
            id.kind
        )));
    }
    let residues: Vec<u64> = exponent_set(id).iter().map(|e| e % p).collect();
    Ok(residues
        .iter()
        .any(|r| residues.iter().filter(|&x| x == r).count() == 1))
}

/// Nut test for `D'` and `D''` by divisor classification.
///
/// Runs over the divisors `b >= 3` of `n` in ascending order and reports the
/// first `b` with `P(ζ_b) = 0` as the witness, matching
/// [`crate::circulant::is_nut_spectral`].
pub fn family_nut_check(id: &FamilyId) -> Result<NutVerdict> {
    let (t, n) = (id.t, id.n);
    let half = n / 2;
    let failing = |b: u64| -> Result<bool> {
        match (id.variant, t) {
            // P(ζ) ζ^{n/4+1} = (ζ + 1)(ζ^{n/2+1} + 1)
            (FamilyVariant::DPrime, 1) => cyclotomic_divides(b, &binomial_plus_one(half + 1)),
            // P(ζ) ζ^{(n+6)/4} = (ζ + 1)(ζ^{n/2+2} + 1)
            (FamilyVariant::DDoublePrime, 1) => cyclotomic_divides(b, &binomial_plus_one(half + 2)),
            // ζ^{n/2} = -1: outer blocks cancel, middle block is nonzero
            _ if half % b != 0 => Ok(false),
            (FamilyVariant::DPrime, _) => {
                let kind = if (n / 4) % b == 0 {
                    FamilyPolyKind::Q
                } else {
                    FamilyPolyKind::R
                };
                cyclotomic_divides(b, &unchecked_poly(kind, t))
            }
            (FamilyVariant::DDoublePrime, _) => {
                // ψ of order b with ψ^{n/2} = 1, or -ψ of order 2b with (-ψ)^{n/2} = -1
                let u = cyclotomic_divides(b, &unchecked_poly(FamilyPolyKind::U, t))?;
                let w = cyclotomic_divides(2 * b, &unchecked_poly(FamilyPolyKind::W, t))?;
                debug_assert_eq!(u, w, "W_t(-x) = -U_t(x)");
                Ok(u || w)
            }
            (FamilyVariant::DsPrior, _) => unreachable!(),
        }
    };
    if id.variant == FamilyVariant::DsPrior {
        return Err(Error::Unsupported(
            "family_nut_check covers dprime and ddprime only; use the spectral test for ds".into(),
        ));
    }
    for b in divisors(n).into_iter().filter(|&b| b >= 3) {
        if failing(b)? {
            return Ok(NutVerdict::fail(
                Reason::SpectralFailure,
                Some(Witness::Divisor(b)),
            ));
        }
    }
    Ok(NutVerdict::pass(None))
}

/// `x^k + 1`.
fn binomial_plus_one(k: u64) -> SparsePoly {
    SparsePoly::from_terms([(k, 1i64), (0, 1)])
}

/// Moduli covered by the residue tables.
pub const TABLE_MODULI: [u64; 6] = [3, 5, 6, 10, 15, 30];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    /// `t mod b`.
    pub residue: u64,
    /// Smallest `t >= t_min` with `t ≡ residue (mod b)`.
    pub representative: u64,
    /// The polynomial reduced modulo `x^b - 1`.
    pub reduced: SparsePoly,
    /// `reduced` modulo `Φ_b`.
    pub remainder: SparsePoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub kind: FamilyPolyKind,
    pub modulus: u64,
    pub rows: Vec<TableRow>,
}

fn check_modulus(b: u64) -> Result<()> {
    if TABLE_MODULI.contains(&b) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "table modulus must be one of {TABLE_MODULI:?}, got {b}"
        )))
    }
}

/// The row for residue class `t mod b`, computed from representative `t`.
pub fn table_row(kind: FamilyPolyKind, b: u64, t: u64) -> Result<TableRow> {
    if t < kind.min_t() {
        return Err(Error::Parameter(format!(
            "{kind}_t needs t >= {}, got t={t}",
            kind.min_t()
        )));
    }
    let reduced = unchecked_poly(kind, t).reduce_mod_xb(b)?;
    let phi = cyclotomic(b)?;
    let remainder = reduced.to_dense().rem(&phi)?.to_sparse();
    Ok(TableRow {
        residue: t % b,
        representative: t,
        reduced,
        remainder,
    })
}

/// One row per residue class `t mod b`, ascending.
///
/// Every class is tabulated, including those unreachable by odd `t` when `b`
/// is even; the reduced polynomial depends only on `t mod b`.
pub fn generate_table(kind: FamilyPolyKind, b: u64) -> Result<Table> {
    check_modulus(b)?;
    let min = kind.min_t();
    let rows = (0..b)
        .map(|r| table_row(kind, b, min + (r + b - min % b) % b))
        .collect::<Result<_>>()?;
    Ok(Table {
        kind,
        modulus: b,
        rows,
    })
}

/// Directory holding the shipped golden tables.
pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("appendix")
}

pub fn golden_path(dir: &Path, kind: FamilyPolyKind, b: u64) -> PathBuf {
    dir.join(format!("{kind}_{b}.txt"))
}

/// Serialises a table in the golden-file format.
pub fn table_to_golden(table: &Table) -> String {
    let mut out = format!(
        "# {}_t reduced mod x^{} - 1, remainder mod Phi_{}\n\
         # residue|reduced|remainder (sparse exp:coeff form, exponents descending)\n",
        table.kind.name().to_uppercase(),
        table.modulus,
        table.modulus
    );
    for row in &table.rows {
        out.push_str(&format!(
            "{}|{}|{}\n",
            row.residue,
            row.reduced.to_sparse_string(),
            row.remainder.to_sparse_string()
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenMismatch {
    pub kind: FamilyPolyKind,
    pub modulus: u64,
    pub residue: u64,
    /// `reduced`, `remainder` or `row` (row missing or unexpected).
    pub field: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub tables_checked: usize,
    pub rows_checked: usize,
    pub zero_remainders: usize,
    pub mismatches: Vec<GoldenMismatch>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.zero_remainders == 0 && self.tables_checked > 0
    }
}

type GoldenRow = (u64, String, String);

fn parse_golden(path: &Path) -> Result<Vec<GoldenRow>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read golden file {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || {
            Error::Config(format!(
                "{}:{}: malformed row {line:?}",
                path.display(),
                lineno + 1
            ))
        };
        let mut parts = line.split('|');
        let (Some(r), Some(red), Some(rem), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let residue = r.trim().parse().map_err(|_| bad())?;
        rows.push((residue, red.trim().to_string(), rem.trim().to_string()));
    }
    Ok(rows)
}

/// Regenerates every table and compares it with the golden files in `dir`.
///
/// Polynomials are compared after parsing, so term order and spacing in the
/// files do not matter.
pub fn appendix_golden_check(dir: &Path) -> Result<GoldenReport> {
    let mut report = GoldenReport::default();
    for kind in FamilyPolyKind::ALL {
        for b in TABLE_MODULI {
            let golden = parse_golden(&golden_path(dir, kind, b))?;
            let table = generate_table(kind, b)?;
            report.tables_checked += 1;
            let mut mismatch = |residue, field: &str, expected: String, actual: String| {
                report.mismatches.push(GoldenMismatch {
                    kind,
                    modulus: b,
                    residue,
                    field: field.into(),
                    expected,
                    actual,
                });
            };
            for row in &table.rows {
                let Some((_, red, rem)) = golden.iter().find(|g| g.0 == row.residue) else {
                    mismatch(row.residue, "row", "missing".into(), "present".into());
                    continue;
                };
                for (field, text, actual) in [
                    ("reduced", red, &row.reduced),
                    ("remainder", rem, &row.remainder),
                ] {
                    match SparsePoly::parse_sparse(text) {
                        Ok(expected) if &expected == actual => {}
                        _ => mismatch(row.residue, field, text.clone(), actual.to_sparse_string()),
                    }
                }
            }
            for (residue, _, _) in golden.iter().filter(|g| g.0 >= b) {
                mismatch(*residue, "row", "present".into(), "missing".into());
            }
            report.rows_checked += table.rows.len();
            report.zero_remainders += table.rows.iter().filter(|r| r.remainder.is_zero()).count();
        }
    }
    Ok(report)
}
