//! Exact and log-space evaluation of the hypergeometric PMF, tails, and
//! moments.
//!
//! The urn model: `population` (N) balls, `whites` (M) of them white, and
//! `draws` (n) balls taken uniformly without replacement. The white count
//! among the drawn balls is hypergeometric with PMF
//!
//! ```text
//! h(M, N, n, i) = C(M, i) * C(N-M, n-i) / C(N, n)
//! ```
//!
//! Two backends are provided. The exact backend works in arbitrary-precision
//! rationals and is authoritative; the log backend works in f64 log space via
//! a compensated log-factorial table and is meant for large N where exact
//! arithmetic stops being practical.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric;

/// Binomial coefficient C(a, b) as an exact big integer, with the convention
/// C(a, b) = 0 for b > a (and C(0, 0) = 1).
pub fn choose(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for j in 0..b {
        acc = acc * BigInt::from(a - j) / BigInt::from(j + 1);
    }
    acc
}

/// Validated urn parameters (N, M, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hypergeometric {
    population: u64,
    whites: u64,
    draws: u64,
}

impl Hypergeometric {
    /// Requires `whites <= population` and `draws <= population`.
    pub fn new(population: u64, whites: u64, draws: u64) -> Result<Self> {
        if whites > population || draws > population {
            return Err(Error::InvalidParams {
                population,
                whites,
                draws,
            });
        }
        Ok(Self {
            population,
            whites,
            draws,
        })
    }

    pub fn population(&self) -> u64 {
        self.population
    }

    pub fn whites(&self) -> u64 {
        self.whites
    }

    pub fn blacks(&self) -> u64 {
        self.population - self.whites
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// The urn with every colour flipped: whites become blacks and vice
    /// versa. Always valid.
    pub fn color_flipped(&self) -> Hypergeometric {
        Hypergeometric {
            population: self.population,
            whites: self.population - self.whites,
            draws: self.draws,
        }
    }

    /// Inclusive range `[lo, hi]` outside of which the PMF is zero:
    /// `lo = max(0, n - (N - M))`, `hi = min(n, M)`. For valid parameters
    /// `lo <= hi` always holds.
    pub fn support(&self) -> (u64, u64) {
        let lo = self.draws.saturating_sub(self.blacks());
        let hi = self.draws.min(self.whites);
        debug_assert!(lo <= hi);
        (lo, hi)
    }

    /// White-ball fraction p = M/N, as an exact rational. Defined as 0 for an
    /// empty urn.
    pub fn success_fraction(&self) -> BigRational {
        if self.population == 0 {
            return BigRational::zero();
        }
        BigRational::new(BigInt::from(self.whites), BigInt::from(self.population))
    }

    /// Exact probability of drawing exactly `count` white balls. Zero outside
    /// the support.
    pub fn pmf(&self, count: u64) -> ExactProb {
        let (lo, hi) = self.support();
        if count < lo || count > hi {
            return ExactProb::zero();
        }
        let num = choose(self.whites, count) * choose(self.blacks(), self.draws - count);
        ExactProb::from_parts(num, choose(self.population, self.draws))
    }

    /// Log-space PMF via a per-call log-factorial table. For repeated
    /// evaluation build one [`LogFactorials`] and reuse it.
    pub fn pmf_log(&self, count: u64) -> LogProb {
        LogFactorials::up_to(self.population).pmf_log(self, count)
    }

    /// E[i] = n*M/N, exactly. Zero when nothing is drawn or no ball is white.
    pub fn mean(&self) -> BigRational {
        if self.population == 0 || self.draws == 0 || self.whites == 0 {
            return BigRational::zero();
        }
        BigRational::new(
            BigInt::from(self.draws) * BigInt::from(self.whites),
            BigInt::from(self.population),
        )
    }

    /// V[i] = n*M*(N-M)*(N-n) / (N^2*(N-1)), exactly. For N <= 1 the
    /// distribution is deterministic and the variance is 0.
    pub fn variance(&self) -> BigRational {
        if self.population <= 1 {
            return BigRational::zero();
        }
        let n = BigInt::from(self.draws);
        let m = BigInt::from(self.whites);
        let big_n = BigInt::from(self.population);
        let num = n * m * BigInt::from(self.blacks()) * BigInt::from(self.population - self.draws);
        let den = &big_n * &big_n * (big_n - BigInt::one());
        BigRational::new(num, den)
    }

    /// Pr[i >= threshold], exactly. Clamps: 1 for thresholds at or below the
    /// support, 0 beyond it.
    pub fn upper_tail(&self, threshold: i64) -> ExactProb {
        let (lo, hi) = self.support();
        if (threshold as i128) <= lo as i128 {
            return ExactProb::one();
        }
        if (threshold as i128) > hi as i128 {
            return ExactProb::zero();
        }
        let start = threshold as u64;
        ExactProb::from_parts(
            self.sum_pmf_numerators(start, hi),
            choose(self.population, self.draws),
        )
    }

    /// Pr[i <= threshold], exactly. Complements [`Self::upper_tail`]:
    /// `lower_tail(k) + upper_tail(k + 1) = 1` for every integer k.
    pub fn lower_tail(&self, threshold: i64) -> ExactProb {
        let (lo, hi) = self.support();
        if (threshold as i128) < lo as i128 {
            return ExactProb::zero();
        }
        if (threshold as i128) >= hi as i128 {
            return ExactProb::one();
        }
        let end = threshold as u64;
        ExactProb::from_parts(
            self.sum_pmf_numerators(lo, end),
            choose(self.population, self.draws),
        )
    }

    /// Sum of C(M,i)*C(N-M,n-i) for i in `[from, to]`, stepping the product
    /// incrementally. Both ends must lie within the support.
    fn sum_pmf_numerators(&self, from: u64, to: u64) -> BigInt {
        let m = self.whites;
        let b = self.blacks();
        let n = self.draws;
        let mut term = choose(m, from) * choose(b, n - from);
        let mut acc = term.clone();
        for i in from..to {
            // C(M,i+1)*C(B,n-i-1) = C(M,i)*C(B,n-i) * (M-i)(n-i) / ((i+1)(B+i+1-n));
            // i >= lo = n-B keeps the last factor >= 1
            term *= BigInt::from((m - i) as u128 * (n - i) as u128);
            term /= BigInt::from((i + 1) as u128 * (b as u128 + i as u128 + 1 - n as u128));
            acc += &term;
        }
        acc
    }
}

impl std::fmt::Display for Hypergeometric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "N={} M={} n={}",
            self.population, self.whites, self.draws
        )
    }
}

/// An exact probability: a non-negative big rational in [0, 1], always in
/// lowest terms so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    /// Checks the [0, 1] range.
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::ProbabilityRange(numeric::format_ratio(&value)));
        }
        Ok(ExactProb(value))
    }

    fn from_parts(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den.is_positive());
        let r = BigRational::new(num, den);
        debug_assert!(!r.is_negative() && r <= BigRational::one());
        ExactProb(r)
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        numeric::ratio_to_f64(&self.0)
    }

    /// Natural log; -inf for probability zero.
    pub fn ln(&self) -> f64 {
        numeric::ln_ratio(&self.0)
    }

    /// Canonical `num/den` string, e.g. `25/63`, `1/1`, `0/1`.
    pub fn fraction(&self) -> String {
        numeric::format_ratio(&self.0)
    }
}

impl std::fmt::Display for ExactProb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.fraction())
    }
}

impl std::str::FromStr for ExactProb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExactProb::new(numeric::parse_ratio(s)?)
    }
}

/// A probability in log space: a finite value <= 0, or -inf for probability
/// zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProb(f64);

impl LogProb {
    /// Probability zero.
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);

    /// Wraps a log-domain value. Tiny positive rounding residue is clamped
    /// to 0; anything materially above 0 is a caller bug.
    pub fn from_ln(value: f64) -> Self {
        debug_assert!(value <= 1e-9, "log-probability {value} is above 0");
        LogProb(value.min(0.0))
    }

    pub fn ln_value(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero_prob(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

/// Immutable table of ln(m!) for m = 0..=max, built once with compensated
/// (Kahan) summation so that absolute error stays near machine precision
/// even for m in the thousands. Safe to share across threads after build.
#[derive(Debug, Clone)]
pub struct LogFactorials {
    ln_fact: Vec<f64>,
}

impl LogFactorials {
    pub fn up_to(max: u64) -> Self {
        let mut ln_fact = Vec::with_capacity(max as usize + 1);
        ln_fact.push(0.0);
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for m in 1..=max {
            let y = (m as f64).ln() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            ln_fact.push(sum);
        }
        LogFactorials { ln_fact }
    }

    pub fn max_value(&self) -> u64 {
        (self.ln_fact.len() - 1) as u64
    }

    /// ln(m!). Panics if `m` exceeds the table.
    pub fn ln_factorial(&self, m: u64) -> f64 {
        self.ln_fact[m as usize]
    }

    /// ln C(a, b); -inf when b > a.
    pub fn ln_choose(&self, a: u64, b: u64) -> f64 {
        if b > a {
            return f64::NEG_INFINITY;
        }
        self.ln_fact[a as usize] - self.ln_fact[b as usize] - self.ln_fact[(a - b) as usize]
    }

    /// Log-space PMF. The table must cover `dist.population()`.
    pub fn pmf_log(&self, dist: &Hypergeometric, count: u64) -> LogProb {
        let (lo, hi) = dist.support();
        if count < lo || count > hi {
            return LogProb::ZERO;
        }
        let value = self.ln_choose(dist.whites(), count)
            + self.ln_choose(dist.blacks(), dist.draws() - count)
            - self.ln_choose(dist.population(), dist.draws());
        LogProb::from_ln(value)
    }

    /// Log-space tail Pr[i >= k] (or Pr[i <= k] for `lower`), via
    /// log-sum-exp over the in-support terms.
    pub fn tail_log(&self, dist: &Hypergeometric, threshold: i64, lower: bool) -> LogProb {
        let (lo, hi) = dist.support();
        let range = if lower {
            if (threshold as i128) < lo as i128 {
                return LogProb::ZERO;
            }
            lo..=hi.min(threshold.max(0) as u64)
        } else {
            if (threshold as i128) > hi as i128 {
                return LogProb::ZERO;
            }
            lo.max(threshold.max(0) as u64)..=hi
        };
        let terms: Vec<f64> = range
            .map(|i| self.pmf_log(dist, i).ln_value())
            .collect();
        let peak = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if peak == f64::NEG_INFINITY {
            return LogProb::ZERO;
        }
        let sum: f64 = terms.iter().map(|&t| (t - peak).exp()).sum();
        LogProb::from_ln(peak + sum.ln())
    }
}
