//! Inequality measures and closed-form bounds.

use std::fmt;

use num_traits::{One, Zero};

use crate::equilibria::EquilibriumReport;
use crate::games::CostVector;
use crate::{Error, Rational, Result};

fn finite_costs(cv: &CostVector) -> Result<Vec<Rational>> {
    cv.costs()
        .iter()
        .map(|c| {
            c.finite()
                .ok_or_else(|| Error::Domain("cost vector has an infinite entry".into()))
        })
        .collect()
}

/// `ρ(s) = c_max / c_min`.
pub fn inequality_ratio(cv: &CostVector) -> Result<Rational> {
    let costs = finite_costs(cv)?;
    let min = *costs
        .iter()
        .min()
        .ok_or_else(|| Error::Domain("empty cost vector".into()))?;
    let max = *costs.iter().max().expect("nonempty");
    if min <= Rational::zero() {
        return Err(Error::Domain("ratio needs positive costs".into()));
    }
    Ok(max / min)
}

/// Largest ratio over the equilibrium set. Equilibria with an undefined
/// ratio (infinite costs) are skipped.
pub fn nir_from_report(report: &EquilibriumReport) -> Result<Rational> {
    if report.entries.is_empty() {
        return Err(Error::Domain("no Nash equilibria".into()));
    }
    report
        .entries
        .iter()
        .filter_map(|e| e.ratio)
        .max()
        .ok_or_else(|| Error::Domain("no equilibrium has a finite ratio".into()))
}

/// Mean absolute difference Gini, `Σ_i Σ_j |c_i − c_j| / (2 n Σ_i c_i)`.
pub fn gini(cv: &CostVector) -> Result<Rational> {
    let mut costs = finite_costs(cv)?;
    if costs.is_empty() {
        return Err(Error::Domain("empty cost vector".into()));
    }
    if costs.iter().any(|c| *c <= Rational::zero()) {
        return Err(Error::Domain("gini needs positive costs".into()));
    }
    // Sorted: Σ_i Σ_j |c_i − c_j| = 2 Σ_i (2i − n + 1) c_i.
    costs.sort();
    let n = costs.len() as i64;
    let weighted: Rational = costs
        .iter()
        .enumerate()
        .map(|(i, c)| *c * Rational::from_integer(2 * i as i64 - n + 1))
        .sum();
    let total: Rational = costs.iter().sum();
    Ok(weighted / (Rational::from_integer(n) * total))
}

/// True iff `x` Lorenz dominates `y`: ascending prefix sums of `x` are all
/// at least those of `y`, and somewhere strictly larger.
pub fn lorenz_dominates(x: &CostVector, y: &CostVector) -> Result<bool> {
    let mut xs = finite_costs(x)?;
    let mut ys = finite_costs(y)?;
    if xs.len() != ys.len() {
        return Err(Error::Domain("vectors differ in length".into()));
    }
    if xs.iter().sum::<Rational>() != ys.iter().sum::<Rational>() {
        return Err(Error::Domain("vectors differ in total".into()));
    }
    xs.sort();
    ys.sort();
    let (mut px, mut py) = (Rational::zero(), Rational::zero());
    let mut strict = false;
    for (a, b) in xs.iter().zip(&ys) {
        px += a;
        py += b;
        if px < py {
            return Ok(false);
        }
        strict |= px > py;
    }
    Ok(strict)
}

/// A closed-form bound on the Nash inequality ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub value: Rational,
    /// The ratio never reaches `value`.
    pub strict: bool,
    /// Holds only in the limit `n → ∞`.
    pub asymptotic: bool,
}

impl Bound {
    /// Whether `ratio` respects the bound at finite n.
    pub fn admits(&self, ratio: Rational) -> bool {
        if self.strict {
            ratio < self.value
        } else {
            ratio <= self.value
        }
    }

    pub fn kind(&self) -> &'static str {
        match (self.strict, self.asymptotic) {
            (true, false) => "strict",
            (false, false) => "weak",
            (_, true) => "asymptotic",
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.kind())
    }
}

/// Upper bound on the UC Nash inequality ratio by α regime. The middle
/// regime's 2 is a limit; small instances exceed it.
pub fn uc_nir_bound(alpha: Rational) -> Result<Bound> {
    if alpha <= Rational::zero() {
        return Err(Error::Argument(format!("alpha must be positive, got {alpha}")));
    }
    let one = Rational::one();
    let two = Rational::from_integer(2);
    Ok(if alpha < one {
        Bound {
            value: one + alpha,
            strict: false,
            asymptotic: false,
        }
    } else if alpha < two {
        Bound {
            value: two,
            strict: false,
            asymptotic: true,
        }
    } else {
        Bound {
            value: two + alpha,
            strict: false,
            asymptotic: false,
        }
    })
}

/// Every UBBC equilibrium has ratio strictly below 2.
pub fn ubbc_nir_bound() -> Bound {
    Bound {
        value: Rational::from_integer(2),
        strict: true,
        asymptotic: false,
    }
}

/// `max{2, 1 + α/2}`, the limiting worst star ratio.
pub fn star_max_ratio_limit(alpha: Rational) -> Result<Rational> {
    if alpha <= Rational::zero() {
        return Err(Error::Argument(format!("alpha must be positive, got {alpha}")));
    }
    let two = Rational::from_integer(2);
    Ok(two.max(Rational::one() + alpha / two))
}

/// Minimum UBBC social cost with uniform budget `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficientCost {
    pub value: u64,
    /// `k > (n−1)/2`: the complete graph is affordable and the value is
    /// clamped to its cost `n(n−1)`.
    pub clamped: bool,
}

/// `n(n−1) + 2n((n−1)/2 − k)`, valid for `1 ≤ k ≤ (n−1)/2`.
pub fn ubbc_efficient_cost(n: usize, k: usize) -> Result<EfficientCost> {
    if n < 2 || k == 0 {
        return Err(Error::Argument(format!("need n >= 2 and k >= 1, got n={n}, k={k}")));
    }
    let (n, k) = (n as u64, k as u64);
    if 2 * k > n - 1 {
        return Ok(EfficientCost {
            value: n * (n - 1),
            clamped: true,
        });
    }
    // n(n−1) + n(n−1−2k)
    Ok(EfficientCost {
        value: n * (n - 1) + n * (n - 1 - 2 * k),
        clamped: false,
    })
}

/// Social cost of any connected graph of diameter at most 2 with `m` edges:
/// adjacent pairs are at distance 1, the rest at distance 2.
pub fn diam2_social_cost(n: usize, m: usize) -> Result<u64> {
    if m > n * n.saturating_sub(1) / 2 {
        return Err(Error::Argument(format!("{m} edges exceed the complete graph on {n}")));
    }
    let (n, m) = (n as u64, m as u64);
    Ok(2 * n * n - 2 * n - 2 * m)
}
