//! Ball volumes V_∞(λ,n,d) and bounds on the maximum code size F_∞(λ,n,d).
//!
//! Exact quantities use big integers and rationals; the permanent bounds
//! and the asymptotic code-size bounds are evaluated in natural-log space.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::build_matrix;
use super::permanent::{permanent_ryser_capped, RYSER_MAX_ORDER};
use crate::error::{Error, Result};
use crate::word::{enumerate_words, factorial, space_size, FreqPerm};

fn check_shape(lambda: usize, n: usize) -> Result<usize> {
    if lambda == 0 || n == 0 || n % lambda != 0 {
        return Err(Error::InvalidParams(format!(
            "lambda={lambda} must be positive and divide n={n}"
        )));
    }
    Ok(n / lambda)
}

fn require_positive_distance(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParams(
            "minimum distance d must be at least 1".into(),
        ));
    }
    Ok(())
}

/// V_∞(λ,n,d) = per A^(λ,n,d) / (λ!)^m.
pub fn ball_size_exact(lambda: usize, n: usize, d: usize) -> Result<BigUint> {
    ball_size_exact_capped(lambda, n, d, RYSER_MAX_ORDER)
}

/// As [`ball_size_exact`] with a custom permanent order guard. Above the
/// guard, a radius of at least m−1 still resolves to the whole space.
pub fn ball_size_exact_capped(
    lambda: usize,
    n: usize,
    d: usize,
    max_order: usize,
) -> Result<BigUint> {
    let m = check_shape(lambda, n)?;
    if n > max_order {
        if d + 1 >= m {
            return Ok(space_size(lambda, m));
        }
        return Err(Error::OrderTooLarge {
            order: n,
            max: max_order,
        });
    }
    let per = permanent_ryser_capped(&build_matrix(lambda, n, d)?, max_order)?;
    let divisor = factorial(lambda).pow(m as u32);
    let (q, r) = per.div_rem(&divisor);
    if !r.is_zero() {
        return Err(Error::NonDivisible {
            permanent: per.to_string(),
            divisor: divisor.to_string(),
        });
    }
    Ok(q)
}

/// Counts words of S_n^λ within distance d of I_n^λ by full enumeration.
pub fn ball_size_bruteforce(lambda: usize, n: usize, d: usize) -> Result<BigUint> {
    let m = check_shape(lambda, n)?;
    let center = FreqPerm::identity(lambda, m);
    let count = enumerate_words(lambda, m)?
        .filter(|w| w.distance(&center).is_ok_and(|dist| dist <= d))
        .count();
    Ok(BigUint::from(count))
}

/// A bound in natural-log scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBound {
    pub log: f64,
    /// The band width 2dλ+λ exceeded n and was clamped to n.
    pub clamped: bool,
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn band_width(lambda: usize, n: usize, d: usize) -> (usize, bool) {
    let w = 2 * d * lambda + lambda;
    if w > n {
        (n, true)
    } else {
        (w, false)
    }
}

/// log of [(2dλ+λ)!]^{n/(2dλ+λ)}, an upper bound on per A^(λ,n,d).
///
/// From Brègman's product-of-row-factorials bound with every row sum
/// replaced by the band width, clamped at n.
pub fn perm_bound_upper(lambda: usize, n: usize, d: usize) -> Result<LogBound> {
    check_shape(lambda, n)?;
    let (w, clamped) = band_width(lambda, n, d);
    Ok(LogBound {
        log: n as f64 / w as f64 * ln_factorial(w),
        clamped,
    })
}

/// log of (2dλ+λ)^n / 2^{2dλ} · n!/n^n, a lower bound on per A^(λ,n,d).
pub fn perm_bound_lower(lambda: usize, n: usize, d: usize) -> Result<LogBound> {
    check_shape(lambda, n)?;
    let (w, clamped) = band_width(lambda, n, d);
    let nf = n as f64;
    Ok(LogBound {
        log: nf * (w as f64).ln() - (2 * d * lambda) as f64 * std::f64::consts::LN_2
            + ln_factorial(n)
            - nf * nf.ln(),
        clamped,
    })
}

/// An exact rational code-size bound with its integer rounding (ceiling
/// for lower bounds, floor for upper bounds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSizeBound {
    pub value: BigRational,
    pub rounded: BigUint,
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_biguint(v: BigInt) -> BigUint {
    v.to_biguint().expect("bound is nonnegative")
}

/// Gilbert-type lower bound |S_n^λ| / V_∞(λ,n,d−1).
pub fn gilbert_lower(lambda: usize, n: usize, d: usize) -> Result<CodeSizeBound> {
    gilbert_lower_capped(lambda, n, d, RYSER_MAX_ORDER)
}

pub fn gilbert_lower_capped(
    lambda: usize,
    n: usize,
    d: usize,
    max_order: usize,
) -> Result<CodeSizeBound> {
    require_positive_distance(d)?;
    let m = check_shape(lambda, n)?;
    let value = ratio(
        space_size(lambda, m),
        ball_size_exact_capped(lambda, n, d - 1, max_order)?,
    );
    let rounded = to_biguint(value.ceil().to_integer());
    Ok(CodeSizeBound { value, rounded })
}

/// Sphere-packing upper bound |S_n^λ| / V_∞(λ,n,⌊(d−1)/2⌋).
pub fn packing_upper(lambda: usize, n: usize, d: usize) -> Result<CodeSizeBound> {
    packing_upper_capped(lambda, n, d, RYSER_MAX_ORDER)
}

pub fn packing_upper_capped(
    lambda: usize,
    n: usize,
    d: usize,
    max_order: usize,
) -> Result<CodeSizeBound> {
    require_positive_distance(d)?;
    let m = check_shape(lambda, n)?;
    let value = ratio(
        space_size(lambda, m),
        ball_size_exact_capped(lambda, n, (d - 1) / 2, max_order)?,
    );
    let rounded = to_biguint(value.floor().to_integer());
    Ok(CodeSizeBound { value, rounded })
}

/// (log lower, log upper) for F_∞(λ,n,d):
///
/// n! / [(2dλ−λ)!]^{n/(2dλ−λ)} ≤ F_∞ ≤ 2^{2λh} n^n / (2λh+λ)^n,  h = ⌊(d−1)/2⌋.
///
/// These are the permanent bounds substituted into the Gilbert and
/// packing bounds, without clamping.
pub fn asymptotic_bounds(lambda: usize, n: usize, d: usize) -> Result<(f64, f64)> {
    require_positive_distance(d)?;
    check_shape(lambda, n)?;
    let nf = n as f64;
    let w = 2 * d * lambda - lambda;
    let lower = ln_factorial(n) - nf / w as f64 * ln_factorial(w);
    let h = (d - 1) / 2;
    let upper = (2 * lambda * h) as f64 * std::f64::consts::LN_2 + nf * nf.ln()
        - nf * ((2 * lambda * h + lambda) as f64).ln();
    Ok((lower, upper))
}

/// Natural log of a positive rational, safe for values beyond f64 range.
pub fn ln_rational(v: &BigRational) -> f64 {
    ln_bigint(v.numer()) - ln_bigint(v.denom())
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact and log-space bounds on F_∞(λ,n,d) for one parameter set.
///
/// Serialized with big integers as decimal strings; absent exact values
/// (permanent above the order guard) are `null` and `exact` is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "BoundsReportWire", try_from = "BoundsReportWire")]
pub struct BoundsReport {
    pub lambda: usize,
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub space: BigUint,
    pub ball_dminus1: Option<BigUint>,
    pub ball_half: Option<BigUint>,
    pub gilbert_lower: Option<BigRational>,
    pub packing_upper: Option<BigRational>,
    pub asym_lower_log: f64,
    pub asym_upper_log: f64,
}

impl BoundsReport {
    pub fn exact(&self) -> bool {
        self.gilbert_lower.is_some() && self.packing_upper.is_some()
    }

    /// ⌈gilbert_lower⌉: a code of at least this size exists.
    pub fn gilbert_ceil(&self) -> Option<BigUint> {
        self.gilbert_lower
            .as_ref()
            .map(|v| to_biguint(v.ceil().to_integer()))
    }

    pub fn packing_floor(&self) -> Option<BigUint> {
        self.packing_upper
            .as_ref()
            .map(|v| to_biguint(v.floor().to_integer()))
    }
}

/// Builds the report for (λ, m, d), computing exact volumes through
/// permanents of order up to `max_order` and leaving them absent above it.
pub fn bounds_report(lambda: usize, m: usize, d: usize, max_order: usize) -> Result<BoundsReport> {
    require_positive_distance(d)?;
    let n = lambda * m;
    check_shape(lambda, n)?;
    let space = space_size(lambda, m);

    let optional = |r: Result<BigUint>| match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_capability_guard() => Ok(None),
        Err(e) => Err(e),
    };
    let ball_dminus1 = optional(ball_size_exact_capped(lambda, n, d - 1, max_order))?;
    let ball_half = optional(ball_size_exact_capped(lambda, n, (d - 1) / 2, max_order))?;
    let gilbert_lower = ball_dminus1.clone().map(|v| ratio(space.clone(), v));
    let packing_upper = ball_half.clone().map(|v| ratio(space.clone(), v));
    let (asym_lower_log, asym_upper_log) = asymptotic_bounds(lambda, n, d)?;

    Ok(BoundsReport {
        lambda,
        m,
        n,
        d,
        space,
        ball_dminus1,
        ball_half,
        gilbert_lower,
        packing_upper,
        asym_lower_log,
        asym_upper_log,
    })
}

#[derive(Serialize, Deserialize)]
struct BoundsReportWire {
    lambda: usize,
    m: usize,
    n: usize,
    d: usize,
    space: String,
    ball_dminus1: Option<String>,
    ball_half: Option<String>,
    gilbert_lower_num: Option<String>,
    gilbert_lower_den: Option<String>,
    packing_upper_num: Option<String>,
    packing_upper_den: Option<String>,
    asym_lower_log: f64,
    asym_upper_log: f64,
    exact: bool,
}

impl From<BoundsReport> for BoundsReportWire {
    fn from(r: BoundsReport) -> Self {
        let exact = r.exact();
        let split = |v: &Option<BigRational>| match v {
            Some(v) => (Some(v.numer().to_string()), Some(v.denom().to_string())),
            None => (None, None),
        };
        let (gn, gd) = split(&r.gilbert_lower);
        let (pn, pd) = split(&r.packing_upper);
        BoundsReportWire {
            lambda: r.lambda,
            m: r.m,
            n: r.n,
            d: r.d,
            space: r.space.to_string(),
            ball_dminus1: r.ball_dminus1.map(|v| v.to_string()),
            ball_half: r.ball_half.map(|v| v.to_string()),
            gilbert_lower_num: gn,
            gilbert_lower_den: gd,
            packing_upper_num: pn,
            packing_upper_den: pd,
            asym_lower_log: r.asym_lower_log,
            asym_upper_log: r.asym_upper_log,
            exact,
        }
    }
}

impl TryFrom<BoundsReportWire> for BoundsReport {
    type Error = String;

    fn try_from(w: BoundsReportWire) -> std::result::Result<Self, String> {
        fn big(s: &str) -> std::result::Result<BigUint, String> {
            s.parse().map_err(|e| format!("bad integer {s:?}: {e}"))
        }
        fn opt(s: Option<String>) -> std::result::Result<Option<BigUint>, String> {
            s.as_deref().map(big).transpose()
        }
        fn frac(
            num: Option<String>,
            den: Option<String>,
        ) -> std::result::Result<Option<BigRational>, String> {
            match (opt(num)?, opt(den)?) {
                (Some(n), Some(d)) if !d.is_zero() => Ok(Some(ratio(n, d))),
                (None, None) => Ok(None),
                _ => Err("numerator and denominator must both be present".into()),
            }
        }
        let report = BoundsReport {
            lambda: w.lambda,
            m: w.m,
            n: w.n,
            d: w.d,
            space: big(&w.space)?,
            ball_dminus1: opt(w.ball_dminus1)?,
            ball_half: opt(w.ball_half)?,
            gilbert_lower: frac(w.gilbert_lower_num, w.gilbert_lower_den)?,
            packing_upper: frac(w.packing_upper_num, w.packing_upper_den)?,
            asym_lower_log: w.asym_lower_log,
            asym_upper_log: w.asym_upper_log,
        };
        if report.exact() != w.exact {
            return Err("`exact` flag disagrees with the exact fields".into());
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ball_exact_examples() {
        assert_eq!(ball_size_exact(1, 3, 1).unwrap(), big(3));
        assert_eq!(ball_size_exact(2, 4, 1).unwrap(), big(6));
        assert_eq!(ball_size_exact(1, 5, 2).unwrap(), big(31));
        for (lambda, m) in [(1, 4), (2, 3), (3, 2), (2, 4)] {
            for d in m - 1..=m + 1 {
                assert_eq!(
                    ball_size_exact(lambda, lambda * m, d).unwrap(),
                    space_size(lambda, m)
                );
            }
        }
    }

    #[test]
    fn ball_exact_guard() {
        assert!(matches!(
            ball_size_exact_capped(1, 12, 2, 10),
            Err(Error::OrderTooLarge { order: 12, max: 10 })
        ));
        // Saturated radius resolves without a permanent.
        assert_eq!(
            ball_size_exact_capped(2, 40, 19, 10).unwrap(),
            space_size(2, 20)
        );
    }

    #[test]
    fn ball_bruteforce_examples() {
        assert_eq!(ball_size_bruteforce(1, 5, 1).unwrap(), big(8));
        assert_eq!(ball_size_bruteforce(2, 4, 0).unwrap(), big(1));
        assert_eq!(ball_size_bruteforce(1, 5, 2).unwrap(), big(31));
    }

    #[test]
    fn perm_bound_examples() {
        let up = perm_bound_upper(1, 5, 2).unwrap();
        assert!((up.log - 120f64.ln()).abs() < 1e-12);
        assert!((up.log - 4.7875).abs() < 1e-4);
        assert!(!up.clamped);
        for n in 1..10 {
            assert_eq!(perm_bound_upper(1, n, 0).unwrap().log, 0.0);
        }
        let up = perm_bound_upper(2, 10, 2).unwrap();
        assert!((up.log - ln_factorial(10)).abs() < 1e-12);

        let lo = perm_bound_lower(1, 5, 2).unwrap();
        assert!((lo.log - 7.5f64.ln()).abs() < 1e-12);
        assert!((lo.log - 2.0149).abs() < 1e-4);
        for n in 1..10 {
            assert!(perm_bound_lower(1, n, 0).unwrap().log <= 1e-12);
        }
        let lo = perm_bound_lower(2, 10, 2).unwrap();
        assert!((lo.log - (ln_factorial(10) - 256f64.ln())).abs() < 1e-9);

        assert!(perm_bound_upper(1, 3, 2).unwrap().clamped);
        assert!(perm_bound_lower(1, 3, 2).unwrap().clamped);
    }

    #[test]
    fn gilbert_and_packing_examples() {
        let g = gilbert_lower(1, 5, 3).unwrap();
        assert_eq!(g.value, frac(120, 31));
        assert_eq!(g.rounded, big(4));
        let g = gilbert_lower(1, 3, 2).unwrap();
        assert_eq!(g.value, frac(2, 1));
        for (lambda, m) in [(1, 4), (2, 3), (3, 2)] {
            let s = BigRational::from_integer(BigInt::from(space_size(lambda, m)));
            assert_eq!(gilbert_lower(lambda, lambda * m, 1).unwrap().value, s);
            assert_eq!(packing_upper(lambda, lambda * m, 1).unwrap().value, s);
        }

        let p = packing_upper(1, 5, 3).unwrap();
        assert_eq!(p.value, frac(15, 1));
        assert_eq!(p.rounded, big(15));
        assert_eq!(packing_upper(1, 3, 2).unwrap().value, frac(6, 1));
        assert!(gilbert_lower(1, 3, 0).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        // lower: 5!/[5!]^{5/5} = 1, upper: 2^2·5^5/3^5 = 12500/243.
        let (lo, up) = asymptotic_bounds(1, 5, 3).unwrap();
        assert!(lo.abs() < 1e-12);
        assert!((up - (12500f64 / 243.0).ln()).abs() < 1e-12);
        assert!((up - 3.9406).abs() < 1e-3);
        assert!(lo <= ln_rational(&frac(120, 31)));
        assert!(15f64.ln() <= up);
    }

    #[test]
    fn report_json_round_trip() {
        let r = bounds_report(1, 5, 3, RYSER_MAX_ORDER).unwrap();
        assert!(r.exact());
        assert_eq!(r.gilbert_ceil(), Some(big(4)));
        assert_eq!(r.packing_floor(), Some(big(15)));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["gilbert_lower_num"], "120");
        assert_eq!(json["gilbert_lower_den"], "31");
        assert_eq!(json["packing_upper_num"], "15");
        assert_eq!(json["exact"], true);
        let back: BoundsReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);

        let big_report = bounds_report(1, 40, 5, RYSER_MAX_ORDER).unwrap();
        assert!(!big_report.exact());
        let json = serde_json::to_value(&big_report).unwrap();
        assert!(json["gilbert_lower_num"].is_null());
        assert_eq!(json["exact"], false);
    }

    #[test]
    fn ln_rational_handles_huge_values() {
        let huge = BigRational::from_integer(BigInt::from(factorial(400)));
        assert!((ln_rational(&huge) - ln_factorial(400)).abs() < 1e-6);
    }
}
