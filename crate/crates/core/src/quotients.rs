//! Congruence quotients `G_n / Stab(m)` and Hausdorff dimension.
//!
//! Orders come from Schreier–Sims on the level-`m` action, which is faithful
//! for the quotient. Logarithms are taken on the exact integers at the
//! requested decimal precision plus guard digits.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::UBig;
use serde::{Serialize, Serializer};

use crate::error::{check_alphabet, Error, Result};
use crate::par::Exec;
use crate::permgroup::StabilizerChain;
use crate::treeword::LevelAction;

pub type Real = FBig<HalfEven, 10>;

pub const DEFAULT_DIGITS: usize = 50;
const GUARD_DIGITS: usize = 12;

/// Largest level-action degree `n^m` the quotient code will build a chain for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 2000 }
    }
}

impl Budget {
    pub fn check(&self, n: usize, m: usize) -> Result<usize> {
        let degree = (n as u64)
            .checked_pow(m as u32)
            .filter(|&d| d <= usize::MAX as u64)
            .map(|d| d as usize);
        match degree {
            Some(d) if d <= self.max_degree => Ok(d),
            _ => Err(Error::BudgetExceeded {
                n,
                level: m,
                degree: degree.unwrap_or(usize::MAX),
                budget: self.max_degree,
            }),
        }
    }
}

fn real(x: &UBig, digits: usize) -> Real {
    Real::from(x.clone())
        .with_precision(digits + GUARD_DIGITS)
        .value()
}

pub fn ln_ubig(x: &UBig, digits: usize) -> Real {
    real(x, digits).ln()
}

pub fn factorial(n: usize) -> UBig {
    (1..=n as u64).map(UBig::from).product()
}

/// Rounds to `digits` significant decimal digits.
pub fn round_to(x: &Real, digits: usize) -> Real {
    x.clone().with_precision(digits).value()
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub fn abs_diff(x: &Real, y: &Real) -> Real {
    let d = x - y;
    if d < Real::ZERO {
        -d
    } else {
        d
    }
}

fn ser_ubig<S: Serializer>(x: &UBig, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ser_real<S: Serializer>(x: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&round_to(x, DEFAULT_DIGITS))
}

pub fn level_chain(n: usize, m: usize, budget: &Budget) -> Result<StabilizerChain> {
    check_alphabet(n)?;
    if m == 0 {
        return Err(Error::Precondition("levels start at 1".into()));
    }
    let degree = budget.check(n, m)?;
    let level = LevelAction::new(n, m);
    StabilizerChain::new(degree, &level.generators())
}

/// `|G_n / Stab(m)|`.
pub fn quotient_order(n: usize, m: usize, budget: &Budget) -> Result<UBig> {
    Ok(level_chain(n, m, budget)?.order().clone())
}

/// `|Aut(T) / Stab(m)| = n!^{(n^m - 1)/(n - 1)}`.
pub fn aut_quotient_order(n: usize, m: usize) -> UBig {
    factorial(n).pow(level_sum(n, m))
}

// 1 + n + ... + n^{m-1}
fn level_sum(n: usize, m: usize) -> usize {
    (0..m).map(|k| n.pow(k as u32)).sum()
}

fn level_sum_big(n: usize, m: usize) -> UBig {
    (0..m).map(|k| UBig::from(n).pow(k)).sum()
}

/// `|Stab(m-1) / Stab(m)|` predicted case by case: `n = 4`: `12`, then
/// `6912^{4^{m-2}}`; odd `n`: `n!`, then `n!^{n^{m-1}} / 2^{n^{m-2}}`;
/// even `n >= 6`: `(n!/2)^{n^{m-1}}`.
pub fn predicted_index(n: usize, m: usize) -> UBig {
    let f = factorial(n);
    match (n, m) {
        (_, 0) => UBig::ONE,
        (4, 1) => UBig::from(12u32),
        (4, _) => UBig::from(6912u32).pow(4usize.pow(m as u32 - 2)),
        (_, 1) if n % 2 == 1 => f,
        _ if n % 2 == 1 => odd_index_with_exponent_base(n, m, n),
        _ => (f / UBig::from(2u32)).pow(n.pow(m as u32 - 1)),
    }
}

/// Odd-`n` index `(n!^n / 2)^{base^{m-2}}` for `m >= 2`. With `base = n` this is the
/// closed form above; `base = 4` is the alternative exponent checked for comparison.
pub fn odd_index_with_exponent_base(n: usize, m: usize, base: usize) -> UBig {
    assert!(m >= 2);
    let first = factorial(n).pow(n) / UBig::from(2u32);
    first.pow(base.pow(m as u32 - 2))
}

pub fn predicted_order(n: usize, m: usize) -> UBig {
    (1..=m).map(|k| predicted_index(n, k)).product()
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientRow {
    pub level: usize,
    pub degree: usize,
    #[serde(serialize_with = "ser_ubig")]
    pub order: UBig,
    #[serde(serialize_with = "ser_ubig")]
    pub index: UBig,
    #[serde(serialize_with = "ser_ubig")]
    pub predicted_index: UBig,
    pub matches_formula: bool,
    pub first_orbit_length: usize,
    #[serde(serialize_with = "ser_real")]
    pub partial_ratio: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientTable {
    pub n: usize,
    pub rows: Vec<QuotientRow>,
}

/// Orders and consecutive indices for levels `1..=levels`; rows are built concurrently.
pub fn index_table(
    n: usize,
    levels: usize,
    budget: &Budget,
    exec: Exec,
    digits: usize,
) -> Result<QuotientTable> {
    check_alphabet(n)?;
    for m in 1..=levels {
        budget.check(n, m)?;
    }
    let ms: Vec<usize> = (1..=levels).collect();
    let chains = exec.map(&ms, |&m| level_chain(n, m, budget));
    let mut rows: Vec<QuotientRow> = Vec::with_capacity(levels);
    let mut prev = UBig::ONE;
    for (m, chain) in ms.into_iter().zip(chains) {
        let chain = chain?;
        let order = chain.order().clone();
        if &order % &prev != UBig::ZERO {
            return Err(Error::Precondition(format!(
                "order at level {m} is not a multiple of the order at level {}",
                m - 1
            )));
        }
        let index = &order / &prev;
        let predicted = predicted_index(n, m);
        rows.push(QuotientRow {
            level: m,
            degree: chain.degree(),
            matches_formula: index == predicted,
            predicted_index: predicted,
            first_orbit_length: chain.first_orbit().len(),
            partial_ratio: partial_ratio(n, m, &order, digits),
            index,
            order: order.clone(),
        });
        prev = order;
    }
    Ok(QuotientTable { n, rows })
}

/// `log |G/Stab(m)| / log |Aut(T)/Stab(m)|` for a given quotient order.
pub fn partial_ratio(n: usize, m: usize, order: &UBig, digits: usize) -> Real {
    let num = ln_ubig(order, digits);
    let den = ln_ubig(&factorial(n), digits) * real(&level_sum_big(n, m), digits);
    num / den
}

pub fn hausdorff_closed_form(n: usize, digits: usize) -> Result<Real> {
    check_alphabet(n)?;
    let ln2 = ln_ubig(&UBig::from(2u32), digits);
    let ln_fact = ln_ubig(&factorial(n), digits);
    Ok(if n == 4 {
        Real::ONE - ln_ubig(&UBig::from(48u32), digits) / ln_ubig(&UBig::from(331776u32), digits)
    } else if n.is_multiple_of(2) {
        Real::ONE - ln2 / ln_fact
    } else {
        Real::ONE - ln2 / (Real::from(n) * ln_fact)
    })
}

/// The finite-level ratio obtained by substituting the index formulas into
/// the log-ratio, written through its exponents of `n!`, `2` and `3`.
pub fn hausdorff_partial_formula(n: usize, m: usize, digits: usize) -> Result<Real> {
    check_alphabet(n)?;
    let ln2 = ln_ubig(&UBig::from(2u32), digits);
    let ln_fact = ln_ubig(&factorial(n), digits);
    let total_r = real(&level_sum_big(n, m), digits);
    Ok(if n == 4 {
        let threes = real(&level_sum_big(4, m - 1), digits);
        let ln3 = ln_ubig(&UBig::from(3u32), digits);
        Real::ONE - (total_r.clone() * ln2 + threes * ln3) / (total_r * ln_fact)
    } else if n.is_multiple_of(2) {
        Real::ONE - ln2 / ln_fact
    } else {
        let twos = real(&level_sum_big(n, m - 1), digits);
        Real::ONE - (twos * ln2) / (total_r * ln_fact)
    })
}

/// Partial ratios for `m = 1..=levels` from exact Schreier–Sims orders.
pub fn hausdorff_empirical(
    n: usize,
    levels: usize,
    budget: &Budget,
    exec: Exec,
    digits: usize,
) -> Result<Vec<Real>> {
    Ok(index_table(n, levels, budget, exec, digits)?
        .rows
        .into_iter()
        .map(|r| r.partial_ratio)
        .collect())
}
