//! Continued fractions, Ostrowski representations, and distances to the
//! integer lattice.
//!
//! Everything here runs in exact rational arithmetic. An irrational input is
//! carried as the exact rational value of its truncated expansion together
//! with a precision budget, so digit extraction, reconstruction bounds, and
//! nearest-integer distances are reproducible bit for bit.
//!
//! Notation used throughout: `a_k` are the partial quotients of
//! `α = [a_0; a_1, a_2, …]`, `p_k/q_k` the convergents, and
//! `D_k = q_k α − p_k` the signed convergent errors, which alternate in sign
//! and shrink strictly. An integer `l` expands over the basis `q_k` with
//! digits `c_{k+1}`; a real `θ ∈ [−α, 1−α)` expands over the basis `D_k`
//! with digits `b_{k+1}`. Both digit sequences obey
//! `0 ≤ b_1 < a_1`, `0 ≤ b_{k+1} ≤ a_{k+1}`, and `b_k = 0` whenever
//! `b_{k+1} = a_{k+1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A real number in one of three spellings: an exact rational, a decimal
/// literal with an explicit precision budget, or a list of continued-fraction
/// digits.
///
/// Decimal and digit inputs denote truncations of (typically irrational)
/// numbers; computations treat them as exact rationals while honoring the
/// precision budget, because continued-fraction digits beyond the stated
/// precision of a literal are noise.
#[derive(Debug, Clone, PartialEq)]
pub enum RealInput {
    /// Reduced fraction with `0 <= p/q < 1`; the integer part is kept apart.
    Rational { a0: i64, p: i64, q: i64 },
    /// Exact value of the decimal literal, reduced mod 1, plus its precision.
    Decimal {
        a0: i64,
        frac: BigRational,
        precision_digits: u32,
    },
    /// Partial quotients `[a_0; a_1, a_2, …]` with `a_k >= 1` for `k >= 1`.
    CfDigits { a0: i64, digits: Vec<u64> },
}

impl RealInput {
    /// Reduced rational input. `q` must be positive.
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::InvalidConfig(format!(
                "rational denominator must be positive, got {q}"
            )));
        }
        let g = p.gcd(&q).max(1);
        let (p, q) = (p / g, q / g);
        let a0 = p.div_euclid(q);
        let p = p.rem_euclid(q);
        Ok(RealInput::Rational { a0, p, q })
    }

    /// Parses a decimal literal such as `"0.41421356237309504880"`.
    ///
    /// The precision budget is the number of fractional digits given,
    /// floored at 15 (the spacing of `f64` around 1).
    pub fn decimal_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Parse(format!("empty decimal literal {s:?}")));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::Parse(format!("malformed decimal literal {s:?}")));
        }
        let digits = frac_part.len() as u32;
        let denom = BigInt::from(10u32).pow(digits.max(1));
        let int_val: BigInt = if int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|e| Error::Parse(format!("integer part of {s:?}: {e}")))?
        };
        let frac_val: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part
                .parse()
                .map_err(|e| Error::Parse(format!("fractional part of {s:?}: {e}")))?
        };
        let value = BigRational::new(
            BigInt::from(sign) * (int_val * &denom + frac_val),
            denom,
        );
        let a0 = value.floor().to_integer().to_i64().ok_or_else(|| {
            Error::Parse(format!("integer part of {s:?} out of range"))
        })?;
        let frac = &value - BigRational::from_integer(BigInt::from(a0));
        Ok(RealInput::Decimal {
            a0,
            frac,
            precision_digits: digits.max(15),
        })
    }

    /// Continued-fraction digit input `[a0; digits…]`.
    pub fn cf(a0: i64, digits: Vec<u64>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidConfig(
                "continued-fraction input needs at least one partial quotient".into(),
            ));
        }
        if digits.iter().any(|&a| a == 0) {
            return Err(Error::InvalidConfig(
                "partial quotients a_k must satisfy a_k >= 1 for k >= 1".into(),
            ));
        }
        Ok(RealInput::CfDigits { a0, digits })
    }

    /// Exact rational value when the input is a true rational.
    pub fn as_exact_rational(&self) -> Option<BigRational> {
        match self {
            RealInput::Rational { p, q, .. } => Some(BigRational::new(
                BigInt::from(*p),
                BigInt::from(*q),
            )),
            _ => None,
        }
    }

    /// Replaces the precision budget of a decimal input; other spellings
    /// carry their own precision semantics and pass through unchanged.
    pub fn with_precision(self, digits: u32) -> Self {
        match self {
            RealInput::Decimal { a0, frac, .. } => RealInput::Decimal {
                a0,
                frac,
                precision_digits: digits.max(1),
            },
            other => other,
        }
    }

    /// Fractional value as `f64`, for cross-checking against canonical
    /// parameters extracted in floating point.
    pub fn frac_f64(&self) -> f64 {
        match self {
            RealInput::Rational { p, q, .. } => *p as f64 / *q as f64,
            RealInput::Decimal { frac, .. } => big_rational_to_f64(frac),
            RealInput::CfDigits { digits, .. } => {
                let mut x = 0.0;
                for &a in digits.iter().rev() {
                    x = 1.0 / (a as f64 + x);
                }
                x
            }
        }
    }
}

/// Expansion budget: hard caps on the number of partial quotients and on the
/// denominator size.
#[derive(Debug, Clone)]
pub struct CfBudget {
    pub max_terms: usize,
    pub max_q: u128,
}

impl Default for CfBudget {
    fn default() -> Self {
        CfBudget {
            max_terms: 64,
            max_q: 10u128.pow(30),
        }
    }
}

/// Continued-fraction expansion with convergents and signed errors.
#[derive(Debug, Clone)]
pub struct ContinuedFraction {
    /// Integer part `a_0` of the original input.
    pub a0: i64,
    /// Partial quotients `a_1 … a_K`, all >= 1.
    pub digits: Vec<u64>,
    /// Convergents `(p_k, q_k)` of the fractional part for `k = 0 … K`.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Signed errors `D_k = q_k α − p_k` as exact rationals.
    pub errors: Vec<BigRational>,
    /// True when the expansion terminated because the input is rational;
    /// false when it was truncated by precision or budget.
    pub exact: bool,
    /// Exact fractional value the expansion works with. For truncated inputs
    /// this is the value of the truncation itself.
    pub value: BigRational,
    /// Effective decimal precision of the input.
    pub precision_digits: u32,
}

impl ContinuedFraction {
    /// `q_k` as `u64`; the budget keeps denominators comfortably inside.
    pub fn q_u64(&self, k: usize) -> u64 {
        self.convergents[k].1.to_u64().expect("q_k exceeds u64")
    }

    /// `D_k` as `f64`.
    pub fn d_f64(&self, k: usize) -> f64 {
        big_rational_to_f64(&self.errors[k])
    }

    /// Number of stored convergents (`K + 1`).
    pub fn len(&self) -> usize {
        self.convergents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.convergents.is_empty()
    }
}

/// Accurate `BigRational -> f64` conversion.
pub(crate) fn big_rational_to_f64(x: &BigRational) -> f64 {
    // numer/denom both convert with <= 0.5 ulp error at the magnitudes this
    // crate produces (denominators bounded by the budget, far below 1e308).
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Distance from an exact rational to the nearest integer.
pub(crate) fn nearest_int_distance(x: &BigRational) -> BigRational {
    let fl = x.floor();
    let frac = x - &fl;
    let one_minus = BigRational::one() - &frac;
    if frac <= one_minus {
        frac
    } else {
        one_minus
    }
}

/// Continued-fraction expansion of a [`RealInput`].
///
/// Rational inputs expand exactly by the Euclidean algorithm (canonical
/// form, final quotient >= 2). Decimal inputs stop once `q_k²` exceeds
/// `10^precision_digits`: past that point the digits of the literal no
/// longer constrain the expansion. Digit inputs pass through.
pub fn cf_expand(x: &RealInput, budget: &CfBudget) -> Result<ContinuedFraction> {
    if budget.max_terms == 0 {
        return Err(Error::InvalidConfig(
            "continued-fraction budget must allow at least one term".into(),
        ));
    }
    match x {
        RealInput::CfDigits { a0, digits } => {
            let take = digits.len().min(budget.max_terms);
            let digits: Vec<u64> = digits[..take].to_vec();
            let (convergents, value) = convergents_of(&digits);
            let errors = errors_of(&convergents, &value);
            let q_last = convergents.last().unwrap().1.clone();
            // Precision implied by the truncation: remainders below
            // ~1/q_K² are unresolved.
            let precision_digits = (2.0 * big_int_log10(&q_last)).floor().clamp(15.0, 300.0) as u32;
            Ok(ContinuedFraction {
                a0: *a0,
                digits,
                convergents,
                errors,
                exact: false,
                value,
                precision_digits,
            })
        }
        RealInput::Rational { a0, p, q } => {
            let frac = BigRational::new(BigInt::from(*p), BigInt::from(*q));
            let cf = expand_rational(&frac, budget, None)?;
            Ok(ContinuedFraction { a0: *a0, ..cf })
        }
        RealInput::Decimal {
            a0,
            frac,
            precision_digits,
        } => {
            let q_stop = BigInt::from(10u32).pow(*precision_digits);
            let mut cf = expand_rational(frac, budget, Some(&q_stop))?;
            cf.precision_digits = *precision_digits;
            Ok(ContinuedFraction { a0: *a0, ..cf })
        }
    }
}

/// Euclidean expansion of an exact rational in [0,1). When `q_sq_limit` is
/// given, stops before `q_k²` exceeds it and marks the result inexact.
fn expand_rational(
    frac: &BigRational,
    budget: &CfBudget,
    q_sq_limit: Option<&BigInt>,
) -> Result<ContinuedFraction> {
    debug_assert!(!frac.is_negative() && frac < &BigRational::one());
    let max_q = BigInt::from(budget.max_q);

    let mut digits: Vec<u64> = Vec::new();
    // Euclid on (n, d): next quotient floor(d/n).
    let mut n = frac.numer().clone();
    let mut d = frac.denom().clone();

    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero()); // (p_{-1}, q_{-1})
    let (mut p_cur, mut q_cur) = (BigInt::zero(), BigInt::one()); // (p_0, q_0) with a_0 = 0
    let mut convergents = vec![(p_cur.clone(), q_cur.clone())];
    let mut truncated = false;

    while !n.is_zero() {
        if digits.len() >= budget.max_terms {
            truncated = true;
            break;
        }
        let (a, rem) = d.div_rem(&n);
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        if q_next > max_q {
            truncated = true;
            break;
        }
        if let Some(limit) = q_sq_limit {
            if &q_next * &q_next > *limit {
                truncated = true;
                break;
            }
        }
        digits.push(a.to_u64().ok_or_else(|| {
            Error::Numeric("partial quotient exceeds u64".into())
        })?);
        convergents.push((p_next.clone(), q_next.clone()));
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        d = n;
        n = rem;
    }

    // The working value is the input when exact, else the last convergent.
    let exact = !truncated;
    let value = if exact {
        frac.clone()
    } else {
        let (p, q) = convergents.last().unwrap();
        BigRational::new(p.clone(), q.clone())
    };
    let errors = errors_of(&convergents, &value);
    Ok(ContinuedFraction {
        a0: 0,
        digits,
        convergents,
        errors,
        exact,
        value,
        precision_digits: 30,
    })
}

/// Convergents `(p_k, q_k)` for `k = 0..=K` of `[0; digits…]`, plus the
/// exact value of the full truncation.
fn convergents_of(digits: &[u64]) -> (Vec<(BigInt, BigInt)>, BigRational) {
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_cur, mut q_cur) = (BigInt::zero(), BigInt::one());
    let mut convergents = vec![(p_cur.clone(), q_cur.clone())];
    for &a in digits {
        let p_next = BigInt::from(a) * &p_cur + &p_prev;
        let q_next = BigInt::from(a) * &q_cur + &q_prev;
        convergents.push((p_next.clone(), q_next.clone()));
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    let value = BigRational::new(p_cur, q_cur);
    (convergents, value)
}

fn errors_of(convergents: &[(BigInt, BigInt)], value: &BigRational) -> Vec<BigRational> {
    convergents
        .iter()
        .map(|(p, q)| {
            BigRational::from_integer(q.clone()) * value
                - BigRational::from_integer(p.clone())
        })
        .collect()
}

fn big_int_log10(x: &BigInt) -> f64 {
    let (_, digits) = x.to_radix_be(10);
    digits.len() as f64
}

/// Ostrowski digit sequence relative to a continued fraction.
///
/// `digits[k]` is the coefficient of `q_k` (integer expansion, the
/// `c_{k+1}`) or of `D_k` (real expansion, the `b_{k+1}`).
#[derive(Debug, Clone)]
pub struct OstrowskiDigits {
    pub digits: Vec<u64>,
}

impl OstrowskiDigits {
    /// Checks the admissibility constraints against the partial quotients:
    /// `0 ≤ b_1 < a_1`, `0 ≤ b_{k+1} ≤ a_{k+1}`, and `b_k = 0` whenever
    /// `b_{k+1} = a_{k+1}`.
    pub fn is_admissible(&self, cf: &ContinuedFraction) -> bool {
        for (k, &d) in self.digits.iter().enumerate() {
            let cap = cf.digits[k];
            if k == 0 {
                if d >= cap {
                    return false;
                }
            } else if d > cap {
                return false;
            }
            if k >= 1 && d == cap && self.digits[k - 1] != 0 {
                return false;
            }
        }
        true
    }
}

/// Ostrowski expansion of a nonnegative integer over the basis `q_k`
/// (the digits `c_{k+1}`), by greedy extraction from the largest basis
/// element downward. `Σ c_{k+1} q_k = l` exactly.
pub fn ostrowski_integer(l: u64, cf: &ContinuedFraction) -> Result<OstrowskiDigits> {
    // Digits c_{k+1} for k = 0..K-1 carry caps a_{k+1} = cf.digits[k];
    // values up to q_K − 1 are representable.
    let kmax = cf.digits.len();
    if kmax == 0 {
        return Err(Error::InsufficientExpansion(
            "no partial quotients available".into(),
        ));
    }
    let q_top = &cf.convergents[kmax].1;
    if &BigInt::from(l) >= q_top {
        return Err(Error::InsufficientExpansion(format!(
            "l = {l} is not below q_{kmax} = {q_top}; extend the expansion"
        )));
    }
    let mut digits = vec![0u64; kmax];
    let mut rem = BigInt::from(l);
    for k in (0..kmax).rev() {
        let q_k = &cf.convergents[k].1;
        let (c, r) = rem.div_rem(q_k);
        digits[k] = c.to_u64().expect("digit exceeds u64");
        rem = r;
    }
    debug_assert!(rem.is_zero());
    Ok(OstrowskiDigits { digits })
}

/// Ostrowski expansion of a real `θ ∈ [−α, 1−α)` over the basis `D_k`
/// (the digits `b_{k+1}`).
///
/// Digits are extracted most-significant-first; at each index the digit is
/// the largest admissible value that leaves the remainder representable by
/// an admissible tail, which repairs would-be carries and avoids the
/// improper all-maximal tail (the analogue of a trailing string of nines).
/// After digit `k` the remainder is bounded by `|D_k|`, which is the
/// reconstruction guarantee.
pub fn ostrowski_real(theta: &BigRational, cf: &ContinuedFraction) -> Result<OstrowskiDigits> {
    let alpha = &cf.value;
    let lo = -alpha.clone();
    let hi = BigRational::one() - alpha;
    if theta < &lo || theta >= &hi {
        return Err(Error::ThetaOutOfRange {
            theta: big_rational_to_f64(theta),
            lo: big_rational_to_f64(&lo),
            hi: big_rational_to_f64(&hi),
        });
    }
    // Digit b_{k+1} needs the cap a_{k+1} and the tail interval needs
    // D_{k+1}, so k ranges over 0..K-1 and the last error must be present.
    let kmax = cf.digits.len();
    if kmax == 0 || cf.errors.len() <= kmax {
        return Err(Error::InsufficientExpansion(
            "expansion too short for a real Ostrowski representation".into(),
        ));
    }

    let mut digits = vec![0u64; kmax];
    let mut r = theta.clone();
    let mut prev_nonzero = false;
    for k in 0..kmax {
        if r.is_zero() {
            break;
        }
        let d_k = &cf.errors[k];
        if d_k.is_zero() {
            break; // exact rational tail: nothing representable past here
        }
        let cap_full = cf.digits[k];
        let cap = if k == 0 {
            cap_full - 1
        } else if prev_nonzero {
            cap_full - 1
        } else {
            cap_full
        };
        let ratio = &r / d_k;
        let base = ratio.floor().to_integer();
        let mut chosen: Option<u64> = None;
        // Candidates straddle r/D_k; scan from the largest admissible one.
        let mut cands: Vec<BigInt> = (-2i64..=2)
            .map(|off| &base + BigInt::from(off))
            .filter(|c| !c.is_negative() && *c <= BigInt::from(cap))
            .collect();
        cands.sort();
        cands.dedup();
        for c in cands.into_iter().rev() {
            let r2 = &r - BigRational::from_integer(c.clone()) * d_k;
            let digit = c.to_u64().unwrap();
            let restricted = digit != 0;
            if tail_contains(cf, k + 1, &r2, restricted) {
                digits[k] = digit;
                r = r2;
                chosen = Some(digit);
                break;
            }
        }
        let Some(digit) = chosen else {
            return Err(Error::Numeric(format!(
                "no admissible Ostrowski digit at index {k}"
            )));
        };
        prev_nonzero = digit != 0;
    }
    Ok(OstrowskiDigits { digits })
}

/// Whether `r` lies in the closed interval of values representable by an
/// admissible digit tail starting at index `j`. The endpoints are `−D_j`
/// and `−D_{j−1}` (opposite signs); when the previous digit was nonzero the
/// first digit of the tail loses its maximal value and the far endpoint
/// moves in by `D_j`.
fn tail_contains(cf: &ContinuedFraction, j: usize, r: &BigRational, restricted: bool) -> bool {
    let d_prev = if j == 0 {
        -BigRational::one() // D_{-1}
    } else {
        cf.errors[j - 1].clone()
    };
    let d_j = if j < cf.errors.len() {
        cf.errors[j].clone()
    } else {
        BigRational::zero()
    };
    let near = -d_j.clone();
    let mut far = -d_prev;
    if restricted {
        far -= d_j;
    }
    let (lo, hi) = if near <= far { (near, far) } else { (far, near) };
    r >= &lo && r <= &hi
}

/// Reduces `theta` by an integer into the fundamental interval
/// `[−α, 1−α)` of the expansion.
pub fn reduce_theta(theta: &BigRational, cf: &ContinuedFraction) -> BigRational {
    let shifted = theta + &cf.value;
    theta - shifted.floor()
}

/// Distance from `lα − θ` to the nearest integer.
///
/// Computed in exact rational arithmetic on the working value of the
/// expansion. For inexact expansions the same quantity is recomputed from
/// the Ostrowski digit difference `Σ = Σ_{k≥k0} (c_{k+1} − b_{k+1}) D_k`
/// whenever `l` is within the representable range, and the two routes are
/// compared; the direct value is returned.
pub fn inhom_distance(l: u64, cf: &ContinuedFraction, theta: &BigRational) -> f64 {
    let x = BigRational::from_integer(BigInt::from(l)) * &cf.value - theta;
    let naive = nearest_int_distance(&x);
    let naive_f = big_rational_to_f64(&naive);

    if !cf.exact {
        if let Some(sigma_f) = digit_route_distance(l, cf, theta) {
            // The digit route truncates the real expansion at the last
            // stored error, so agreement is limited by |D_{K-1}|.
            let depth_limit = cf
                .errors
                .get(cf.errors.len().saturating_sub(2))
                .map(|d| 4.0 * big_rational_to_f64(&d.abs()))
                .unwrap_or(0.0);
            debug_assert!(
                (naive_f - sigma_f).abs() <= 1e-12f64.max(depth_limit),
                "dual-path disagreement: naive {naive_f} vs digit route {sigma_f}"
            );
        }
    }
    naive_f
}

/// The digit-difference route for `‖lα − θ‖`: expand `l` over the `q_k`
/// and `θ` over the `D_k`, then take the distance of
/// `Σ = Σ_{k≥k0} (c_{k+1} − b_{k+1}) D_k` to the nearest integer.
/// Returns `None` when `l` is out of the representable range of the
/// truncated expansion. Serves as the independent cross-check of
/// [`inhom_distance`].
pub fn digit_route_distance(l: u64, cf: &ContinuedFraction, theta: &BigRational) -> Option<f64> {
    let theta_red = reduce_theta(theta, cf);
    let c = ostrowski_integer(l, cf).ok()?;
    let b = ostrowski_real(&theta_red, cf).ok()?;
    let mut sigma = BigRational::zero();
    for k in 0..c.digits.len().max(b.digits.len()) {
        let ck = c.digits.get(k).copied().unwrap_or(0);
        let bk = b.digits.get(k).copied().unwrap_or(0);
        let delta = BigInt::from(ck) - BigInt::from(bk);
        if !delta.is_zero() {
            sigma += BigRational::from_integer(delta) * &cf.errors[k];
        }
    }
    Some(big_rational_to_f64(&nearest_int_distance(&sigma)))
}

/// The nondecreasing sequence `l_n = Σ_{k≤n} b_{k+1} q_k` of inhomogeneous
/// best approximations of `β` by multiples of `α`.
///
/// The expansion target is `θ = β` when `α ∈ (0, 1−β)` and `θ = β − 1`
/// when `α ∈ [1−β, 1)`, which lands `θ` in the fundamental interval. Each
/// emitted `l_n` satisfies `‖l_n α − β‖ ≤ ‖l α − β‖` for every
/// `1 ≤ l ≤ l_n`; consecutive duplicates are dropped.
pub fn best_approx_sequence(
    cf: &ContinuedFraction,
    beta: &BigRational,
    max_terms: usize,
) -> Result<Vec<u64>> {
    if max_terms == 0 {
        return Err(Error::InsufficientExpansion(
            "sequence budget must allow at least one term".into(),
        ));
    }
    let one = BigRational::one();
    let theta = if cf.value < &one - beta {
        beta.clone()
    } else {
        beta - &one
    };
    let b = ostrowski_real(&theta, cf)?;
    let mut out: Vec<u64> = Vec::new();
    let mut sum = BigInt::zero();
    for (k, &digit) in b.digits.iter().take(max_terms).enumerate() {
        sum += BigInt::from(digit) * &cf.convergents[k].1;
        let Some(l) = sum.to_u64() else { break };
        if out.last() != Some(&l) {
            out.push(l);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    const SQRT2_MINUS_1: &str = "0.414213562373095048801688724209";

    #[test]
    fn expand_two_fifths() {
        let cf = cf_expand(&RealInput::rational(2, 5).unwrap(), &CfBudget::default()).unwrap();
        assert_eq!(cf.digits, vec![2, 2]);
        assert!(cf.exact);
        // Convergents 0/1, 1/2, 2/5.
        let qs: Vec<u64> = (0..cf.len()).map(|k| cf.q_u64(k)).collect();
        assert_eq!(qs, vec![1, 2, 5]);
        assert_eq!(cf.convergents[1].0.to_u64().unwrap(), 1);
        assert_eq!(cf.convergents[2].0.to_u64().unwrap(), 2);
    }

    #[test]
    fn expand_unit_fraction() {
        let cf = cf_expand(&RealInput::rational(1, 3).unwrap(), &CfBudget::default()).unwrap();
        assert_eq!(cf.digits, vec![3]);
        assert!(cf.exact);
        assert_eq!(cf.q_u64(1), 3);
    }

    #[test]
    fn expand_canonical_form() {
        // Euclid never ends in a partial quotient of 1 (for non-integers).
        for (p, q) in [(3, 4), (2, 3), (5, 7), (7, 12), (99, 101)] {
            let cf =
                cf_expand(&RealInput::rational(p, q).unwrap(), &CfBudget::default()).unwrap();
            assert!(
                *cf.digits.last().unwrap() >= 2,
                "{p}/{q} gave {:?}",
                cf.digits
            );
        }
    }

    #[test]
    fn expand_sqrt2_decimal() {
        let x = RealInput::decimal_str(SQRT2_MINUS_1).unwrap();
        let cf = cf_expand(&x, &CfBudget::default()).unwrap();
        assert!(!cf.exact);
        assert!(cf.digits.len() >= 8);
        assert!(cf.digits.iter().all(|&a| a == 2), "{:?}", cf.digits);
        let qs: Vec<u64> = (0..6).map(|k| cf.q_u64(k)).collect();
        assert_eq!(qs, vec![1, 2, 5, 12, 29, 70]);
        // Convergents approximate the input: |value − p_k/q_k| < 1/q_k².
        let input = x.as_exact_rational();
        assert!(input.is_none());
        let approx = cf.value.clone();
        let target = RealInput::decimal_str(SQRT2_MINUS_1).unwrap();
        if let RealInput::Decimal { frac, .. } = target {
            let err = (approx - frac).abs();
            let q_last = cf.convergents.last().unwrap().1.clone();
            let bound = BigRational::new(BigInt::one(), &q_last * &q_last);
            assert!(err <= bound);
        }
    }

    #[test]
    fn empty_budget_rejected() {
        let budget = CfBudget {
            max_terms: 0,
            max_q: 100,
        };
        assert!(matches!(
            cf_expand(&RealInput::rational(2, 5).unwrap(), &budget),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn convergent_identities() {
        // p_k q_{k−1} − p_{k−1} q_k = (−1)^{k−1}; |D_k| strictly decreasing
        // with alternating signs; |D_k| < 1/q_{k+1}.
        let x = RealInput::decimal_str(SQRT2_MINUS_1).unwrap();
        for input in [x, RealInput::rational(97, 251).unwrap(), RealInput::cf(0, vec![1, 2, 3, 4, 5, 6]).unwrap()] {
            let cf = cf_expand(&input, &CfBudget::default()).unwrap();
            for k in 1..cf.len() {
                let (pk, qk) = &cf.convergents[k];
                let (pk1, qk1) = &cf.convergents[k - 1];
                let det = pk * qk1 - pk1 * qk;
                let expected = if (k - 1) % 2 == 0 { 1 } else { -1 };
                assert_eq!(det, BigInt::from(expected), "k={k}");
            }
            for k in 1..cf.errors.len() {
                let prev = &cf.errors[k - 1];
                let cur = &cf.errors[k];
                if cur.is_zero() {
                    continue; // exact final convergent
                }
                assert!(prev.is_positive() != cur.is_positive(), "signs at k={k}");
                assert!(cur.abs() < prev.abs(), "|D_k| not decreasing at k={k}");
                // Strict |D_k| < 1/q_{k+1} needs the expansion to continue
                // past k+1; at the truncation boundary it is an equality.
                if k + 1 < cf.len() && !cf.errors[k + 1].is_zero() {
                    let bound = BigRational::new(BigInt::one(), cf.convergents[k + 1].1.clone());
                    assert!(cur.abs() < bound);
                }
            }
        }
    }

    #[test]
    fn ostrowski_integer_zero() {
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        let d = ostrowski_integer(0, &cf).unwrap();
        assert!(d.digits.iter().all(|&x| x == 0));
    }

    #[test]
    fn ostrowski_integer_basis_element() {
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        let l = cf.q_u64(3);
        let d = ostrowski_integer(l, &cf).unwrap();
        for (k, &digit) in d.digits.iter().enumerate() {
            assert_eq!(digit, u64::from(k == 3), "digit {k}");
        }
    }

    #[test]
    fn ostrowski_integer_zeckendorf() {
        // Golden-ratio base: q = 1, 1, 2, 3, 5, …; 4 = 3 + 1 with the
        // no-adjacent-ones rule. Verified against exhaustive search over
        // admissible digit vectors.
        let cf = cf_expand(&RealInput::cf(0, vec![1; 12]).unwrap(), &CfBudget::default()).unwrap();
        let d = ostrowski_integer(4, &cf).unwrap();
        assert!(d.is_admissible(&cf));
        let sum: u64 = d
            .digits
            .iter()
            .enumerate()
            .map(|(k, &c)| c * cf.q_u64(k))
            .sum();
        assert_eq!(sum, 4);

        // Exhaustive: the admissible representation of 4 is unique.
        let caps: Vec<u64> = cf.digits.clone();
        let mut found = Vec::new();
        fn rec(
            k: usize,
            caps: &[u64],
            cf: &ContinuedFraction,
            cur: &mut Vec<u64>,
            total: u64,
            found: &mut Vec<Vec<u64>>,
        ) {
            if total > 4 {
                return;
            }
            if k == caps.len().min(6) {
                if total == 4 {
                    let cand = OstrowskiDigits { digits: cur.clone() };
                    if cand.is_admissible(cf) {
                        found.push(cur.clone());
                    }
                }
                return;
            }
            let cap = if k == 0 { caps[0] - 1 } else { caps[k] };
            for c in 0..=cap {
                cur.push(c);
                rec(k + 1, caps, cf, cur, total + c * cf.q_u64(k), found);
                cur.pop();
            }
        }
        rec(0, &caps, &cf, &mut Vec::new(), 0, &mut found);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0][..], d.digits[..found[0].len()]);
    }

    #[test]
    fn ostrowski_integer_roundtrip_range() {
        let cf = cf_expand(&RealInput::cf(0, vec![2, 1, 3, 1, 4, 2, 1, 5]).unwrap(), &CfBudget::default()).unwrap();
        let q_top = cf.convergents[cf.digits.len()].1.to_u64().unwrap();
        for l in 0..q_top {
            let d = ostrowski_integer(l, &cf).unwrap();
            assert!(d.is_admissible(&cf), "l={l}: {:?}", d.digits);
            let sum: u64 = d
                .digits
                .iter()
                .enumerate()
                .map(|(k, &c)| c * cf.q_u64(k))
                .sum();
            assert_eq!(sum, l);
        }
        assert!(matches!(
            ostrowski_integer(q_top, &cf),
            Err(Error::InsufficientExpansion(_))
        ));
    }

    #[test]
    fn ostrowski_real_zero() {
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        let d = ostrowski_real(&BigRational::zero(), &cf).unwrap();
        assert!(d.digits.iter().all(|&x| x == 0));
    }

    #[test]
    fn ostrowski_real_alpha_itself() {
        // θ = D_0 = α has the single-term expansion b_1 = 1 (a_1 = 2).
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        let theta = cf.value.clone();
        let d = ostrowski_real(&theta, &cf).unwrap();
        assert_eq!(d.digits[0], 1);
        assert!(d.digits[1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn ostrowski_real_half_reconstructs() {
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        let theta = rat(1, 2);
        let d = ostrowski_real(&theta, &cf).unwrap();
        assert!(d.is_admissible(&cf));
        // Partial sums reproduce θ within |D_K| at every truncation depth.
        let mut partial = BigRational::zero();
        for (k, &digit) in d.digits.iter().enumerate() {
            partial += BigRational::from_integer(BigInt::from(digit)) * &cf.errors[k];
            let err = (&partial - &theta).abs();
            assert!(
                err <= cf.errors[k].abs(),
                "depth {k}: error {} vs |D_k| {}",
                big_rational_to_f64(&err),
                cf.d_f64(k).abs()
            );
        }
        // Specifically within |D_8| after depth 8.
        let partial8: BigRational = d.digits[..=8]
            .iter()
            .enumerate()
            .map(|(k, &digit)| BigRational::from_integer(BigInt::from(digit)) * &cf.errors[k])
            .sum();
        assert!((&partial8 - &theta).abs() <= cf.errors[8].abs());
    }

    #[test]
    fn ostrowski_real_range_check() {
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        assert!(matches!(
            ostrowski_real(&rat(3, 4), &cf),
            Err(Error::ThetaOutOfRange { .. })
        ));
        assert!(matches!(
            ostrowski_real(&rat(-1, 1), &cf),
            Err(Error::ThetaOutOfRange { .. })
        ));
    }

    #[test]
    fn inhom_distance_rational_cases() {
        let third = cf_expand(&RealInput::rational(1, 3).unwrap(), &CfBudget::default()).unwrap();
        assert!((inhom_distance(1, &third, &rat(1, 2)) - 1.0 / 6.0).abs() < 1e-15);
        let two_fifths =
            cf_expand(&RealInput::rational(2, 5).unwrap(), &CfBudget::default()).unwrap();
        assert!((inhom_distance(5, &two_fifths, &rat(1, 2)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inhom_distance_homogeneous_is_convergent_error() {
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        for k in 1..8 {
            let l = cf.q_u64(k);
            let d = inhom_distance(l, &cf, &BigRational::zero());
            assert!(
                (d - cf.d_f64(k).abs()).abs() < 1e-15,
                "k={k}: {d} vs {}",
                cf.d_f64(k).abs()
            );
        }
    }

    #[test]
    fn inhom_distance_dual_route_agreement() {
        // 10^3 pseudo-random (l, α, θ) triples; the debug_assert inside
        // inhom_distance enforces the 1e-12 agreement.
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            // Deep enough that |D_{K-1}| is far below the 1e-12 agreement bar.
            let digits: Vec<u64> = (0..40).map(|_| next() % 6 + 1).collect();
            let cf = cf_expand(&RealInput::cf(0, digits).unwrap(), &CfBudget::default()).unwrap();
            let q_top = cf.convergents[cf.digits.len()]
                .1
                .to_u64()
                .unwrap_or(u64::MAX);
            for _ in 0..25 {
                let l = next() % q_top.min(1_000_000);
                let th = rat((next() % 2000) as i64 - 1000, 2017);
                let naive = inhom_distance(l, &cf, &th);
                let sigma = digit_route_distance(l, &cf, &th).expect("within range");
                assert!(
                    (naive - sigma).abs() <= 1e-12,
                    "l={l} theta={th}: {naive} vs {sigma}"
                );
            }
        }
    }

    #[test]
    fn best_approx_degenerate_digits() {
        // θ = α has digits (1, 0, 0, …): the sequence collapses to l = q_0.
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        let beta = cf.value.clone(); // β = α < 1 − β, so θ = β
        let seq = best_approx_sequence(&cf, &beta, 32).unwrap();
        assert_eq!(seq, vec![1]);
    }

    fn brute_force_dominance(cf: &ContinuedFraction, beta: &BigRational, seq: &[u64], l_max: u64) {
        for &ln in seq {
            let dn = BigRational::from_integer(BigInt::from(ln)) * &cf.value - beta;
            let dn = nearest_int_distance(&dn);
            for l in 1..=ln.min(l_max) {
                let d = BigRational::from_integer(BigInt::from(l)) * &cf.value - beta;
                let d = nearest_int_distance(&d);
                assert!(
                    dn <= d,
                    "l_n = {ln} beaten by l = {l}: {} vs {}",
                    big_rational_to_f64(&dn),
                    big_rational_to_f64(&d)
                );
            }
        }
    }

    #[test]
    fn best_approx_dominance_sqrt2() {
        let cf = cf_expand(
            &RealInput::decimal_str(SQRT2_MINUS_1).unwrap(),
            &CfBudget::default(),
        )
        .unwrap();
        let beta = rat(1, 2);
        let seq = best_approx_sequence(&cf, &beta, 24).unwrap();
        assert!(!seq.is_empty());
        assert!(seq.windows(2).all(|w| w[0] < w[1]));
        brute_force_dominance(&cf, &beta, &seq, 100_000);
    }

    #[test]
    fn best_approx_dominance_golden_upper_branch() {
        // α = (√5−1)/2 ≈ 0.618 ≥ 1 − β for β = 1/2, exercising θ = β − 1.
        let cf = cf_expand(&RealInput::cf(0, vec![1; 24]).unwrap(), &CfBudget::default()).unwrap();
        let beta = rat(1, 2);
        let seq = best_approx_sequence(&cf, &beta, 24).unwrap();
        assert!(!seq.is_empty());
        brute_force_dominance(&cf, &beta, &seq, 100_000);
    }
}
