//! Hoeffding-style tail bounds for the hypergeometric distribution.
//!
//! For p = M/N and an upper threshold k = (p+t)n with t >= 0,
//!
//! ```text
//! Pr[i >= k] <= ( (p/(p+t))^(p+t) * ((1-p)/(1-p-t))^(1-p-t) )^n
//! Pr[i >= k] <= exp(-2 t^2 n)
//! ```
//!
//! The lower tail Pr[i <= E[i] - tn] is bounded by the same expressions with
//! p replaced by (N-M)/N, via the colour-flip symmetry.
//!
//! The deviation t is carried as an exact rational until the final
//! transcendental step, so threshold arithmetic like k = (p+t)n never
//! drifts. Interior values are evaluated in log space; exp(-2 t^2 n) alone
//! underflows doubles once n t^2 passes ~350.

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::dist::{ExactProb, Hypergeometric};
use crate::error::{Error, Result};
use crate::numeric;

/// Which analytic form of the bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundForm {
    /// The sharp product form.
    Hoeffding,
    /// The weaker exp(-2 t^2 n) form.
    Relaxed,
}

/// Which tail is being bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailSide {
    /// Pr[i >= k]
    Upper,
    /// Pr[i <= k']
    Lower,
}

/// A certified ceiling on a tail probability, always in [0, 1].
///
/// `vacuous` marks inputs with t < 0, where the premise of the inequality
/// fails; the trivial ceiling 1 is reported so that grid sweeps stay total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub vacuous: bool,
}

impl BoundValue {
    fn vacuous() -> Self {
        BoundValue {
            value: 1.0,
            vacuous: true,
        }
    }

    /// Clamps analytic overshoot (rounding near t = 0) back into [0, 1].
    fn certified(value: f64) -> Self {
        BoundValue {
            value: value.clamp(0.0, 1.0),
            vacuous: false,
        }
    }
}

/// A tail query tied to an integer threshold: the parameters, the side, the
/// threshold, and the exact deviation t that makes k = (p+t)n (upper) or
/// k' = (p-t)n (lower) hold by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSpec {
    params: Hypergeometric,
    side: TailSide,
    threshold: i64,
    t: BigRational,
}

impl TailSpec {
    /// Query Pr[i >= k]. Requires n >= 1 so the deviation is defined.
    pub fn upper(params: Hypergeometric, k: i64) -> Result<Self> {
        let t = t_from_k(&params, k)?;
        Ok(TailSpec {
            params,
            side: TailSide::Upper,
            threshold: k,
            t,
        })
    }

    /// Query Pr[i <= k']. Requires n >= 1. Here t = (E[i] - k')/n.
    pub fn lower(params: Hypergeometric, k_prime: i64) -> Result<Self> {
        let t = -t_from_k(&params, k_prime)?;
        Ok(TailSpec {
            params,
            side: TailSide::Lower,
            threshold: k_prime,
            t,
        })
    }

    pub fn params(&self) -> &Hypergeometric {
        &self.params
    }

    pub fn side(&self) -> TailSide {
        self.side
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    /// The exact deviation; negative means the bound side is vacuous.
    pub fn t(&self) -> &BigRational {
        &self.t
    }

    /// p = M/N.
    pub fn p(&self) -> BigRational {
        self.params.success_fraction()
    }

    /// The exact tail probability this spec asks about.
    pub fn exact_tail(&self) -> ExactProb {
        match self.side {
            TailSide::Upper => self.params.upper_tail(self.threshold),
            TailSide::Lower => self.params.lower_tail(self.threshold),
        }
    }

    /// The requested analytic ceiling for this tail.
    pub fn bound(&self, form: BoundForm) -> BoundValue {
        match self.side {
            TailSide::Upper => upper_deviation_bound(&self.params, &self.t, form),
            TailSide::Lower => lower_deviation_bound(&self.params, &self.t, form),
        }
    }
}

/// The exact deviation t = k/n - M/N, so that k = (p+t)n.
///
/// Fails for n = 0, where no draw count ever deviates from the mean.
pub fn t_from_k(params: &Hypergeometric, k: i64) -> Result<BigRational> {
    if params.draws() == 0 {
        return Err(Error::ZeroDraws);
    }
    let k_over_n = BigRational::new(k.into(), params.draws().into());
    Ok(k_over_n - params.success_fraction())
}

/// The product-form bound ((p/(p+t))^(p+t) ((1-p)/(1-p-t))^(1-p-t))^n on
/// Pr[i >= (p+t)n].
///
/// Regime conventions, each the analytic limit of the product form:
/// t < 0 vacuous; n = 0 or t = 0 give 1; t > 1-p gives 0 (the threshold
/// exceeds n); p = 0 with t > 0 gives 0; t = 1-p gives p^n with 0^0 = 1.
pub fn hoeffding_bound(params: &Hypergeometric, t: &BigRational) -> BoundValue {
    if t.is_negative() {
        return BoundValue::vacuous();
    }
    if params.draws() == 0 || t.is_zero() {
        return BoundValue::certified(1.0);
    }
    let p = params.success_fraction();
    let head = &p + t; // p + t
    let tail = BigRational::one() - &head; // 1 - p - t
    if tail.is_negative() {
        return BoundValue::certified(0.0);
    }
    if p.is_zero() {
        return BoundValue::certified(0.0);
    }
    let n = params.draws();
    if tail.is_zero() {
        // p^n, exact while the rational stays small enough to build
        if n <= 1 << 14 {
            let pow = num::pow::pow(p, n as usize);
            return BoundValue::certified(numeric::ratio_to_f64(&pow));
        }
        return BoundValue::certified((n as f64 * numeric::ln_ratio(&p)).exp());
    }
    let q = BigRational::one() - &p; // 1 - p
    let ln_factor = numeric::ratio_to_f64(&head) * numeric::ln_ratio(&(&p / &head))
        + numeric::ratio_to_f64(&tail) * numeric::ln_ratio(&(&q / &tail));
    BoundValue::certified((n as f64 * ln_factor).exp())
}

/// The relaxed bound exp(-2 t^2 n).
pub fn relaxed_bound(t: &BigRational, draws: u64) -> BoundValue {
    if t.is_negative() {
        return BoundValue::vacuous();
    }
    let exponent = BigRational::from_integer((2 * draws).into()) * t * t;
    BoundValue::certified((-numeric::ratio_to_f64(&exponent)).exp())
}

/// Ceiling for the upper deviation Pr[i >= E[i] + tn].
pub fn upper_deviation_bound(
    params: &Hypergeometric,
    t: &BigRational,
    form: BoundForm,
) -> BoundValue {
    match form {
        BoundForm::Hoeffding => hoeffding_bound(params, t),
        BoundForm::Relaxed => relaxed_bound(t, params.draws()),
    }
}

/// Ceiling for the lower deviation Pr[i <= E[i] - tn].
///
/// Computed as the upper bound of the colour-flipped urn (p replaced by
/// (N-M)/N), which is the same code path, so the mirror identity holds to
/// the bit.
pub fn lower_deviation_bound(
    params: &Hypergeometric,
    t: &BigRational,
    form: BoundForm,
) -> BoundValue {
    upper_deviation_bound(&params.color_flipped(), t, form)
}
