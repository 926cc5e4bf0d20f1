//! Exact stabilizability radius of the singular-plus-rotation family.
//!
//! The system couples a singular 2x2 matrix `M1` (one eigenvalue zero, the
//! other `λ2`) with a 2x2 matrix `M2` whose spectrum is a complex pair.
//! Conjugating by the real Jordan basis of `M2` turns `M2` into the scaled
//! rotation `J = ρ3·R(−απ)` and leaves a singular factor `M'1` whose kernel
//! and image eigendirections meet at angle `βπ`. The radius is then
//!
//! ```text
//! ρ̃ = ρ3 · inf_l ( |λ2|/ρ3 · |sin((lα − β)π)| / sin(βπ) )^(1/(l+1))
//! ```
//!
//! over cycle lengths `l`: rotate `l` times, project once. How the infimum
//! is resolved depends on the arithmetic of `α`:
//!
//! * some multiple of `α` hits `β` modulo one → the radius is exactly zero;
//! * `α = p/q` rational otherwise → minimize over `l < q`;
//! * `α` irrational → walk the inhomogeneous best-approximation sequence
//!   `l_n` from the Ostrowski expansion of `β` and stop once no future
//!   remainder representable at the input's precision could improve on the
//!   incumbent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::diophantine::{
    best_approx_sequence, big_rational_to_f64, cf_expand, nearest_int_distance, CfBudget,
    RealInput,
};
use crate::error::{Error, Result};
use crate::matrix::{eigen2x2, operator_norm, real_jordan_2x2, Matrix};
use crate::search::MatrixSet;
use crate::{TAU_EIG, TAU_SV};

const PI: f64 = std::f64::consts::PI;

/// The two-matrix system: a singular `M1` and an `M2` with complex spectrum.
#[derive(Debug, Clone)]
pub struct SingularRotationSystem {
    pub m1: Matrix,
    pub m2: Matrix,
}

impl SingularRotationSystem {
    /// Validates dimensions, singularity of `M1`, and the spectrum of `M2`
    /// at the crate default tolerances.
    pub fn new(m1: Matrix, m2: Matrix) -> Result<Self> {
        Self::new_with_tol(m1, m2, TAU_SV, TAU_EIG)
    }

    /// [`SingularRotationSystem::new`] with explicit tolerances: `|det M1|`
    /// may not exceed `tau_sv·‖M1‖²` and the discriminant of `M2` must lie
    /// below `−tau_eig`.
    pub fn new_with_tol(m1: Matrix, m2: Matrix, tau_sv: f64, tau_eig: f64) -> Result<Self> {
        if m1.dim() != 2 || m2.dim() != 2 {
            return Err(Error::Validation(format!(
                "singular-rotation systems are 2x2; got {}x{} and {}x{}",
                m1.dim(),
                m1.dim(),
                m2.dim(),
                m2.dim()
            )));
        }
        let norm = operator_norm(&m1);
        let det = m1.det()?;
        let tol = tau_sv * norm * norm;
        if det.abs() > tol {
            return Err(Error::NotSingular {
                det: det.abs(),
                tol,
            });
        }
        let disc = (m2.get(0, 0) - m2.get(1, 1)).powi(2) + 4.0 * m2.get(0, 1) * m2.get(1, 0);
        if disc >= -tau_eig {
            return Err(Error::NotComplexSpectrum {
                discriminant: disc,
            });
        }
        Ok(SingularRotationSystem { m1, m2 })
    }
}

/// Reduced parameters of the system in Jordan coordinates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CanonicalParams {
    /// Nonzero eigenvalue of the singular factor.
    pub lambda2: f64,
    /// Modulus of the complex eigenvalue pair of the rotation factor.
    pub rho3: f64,
    /// Rotation angle per step, in units of π, in (0,1).
    pub alpha: f64,
    /// Angle between the kernel and image eigendirections of the transformed
    /// singular factor, in units of π, in (0, 1/2].
    pub beta: f64,
}

/// Canonical parameters together with the change of basis that produced
/// them.
#[derive(Debug, Clone)]
pub struct Canonicalization {
    pub params: CanonicalParams,
    /// Change of basis with `M2 = P J P⁻¹`, det P = ±1.
    pub p: Matrix,
    /// Transformed singular factor `P⁻¹ M1 P`.
    pub m1_prime: Matrix,
    /// Scaled rotation `ρ3·[[cos απ, sin απ], [−sin απ, cos απ]]`.
    pub j: Matrix,
}

/// Reduces a system to canonical parameters.
///
/// `β` is computed from the eigenvectors of the transformed factor
/// `M'1 = P⁻¹ M1 P`, the coordinates the radius formula lives in. The
/// change of basis is only determined up to a commutant of `J` (a scaled
/// rotation); commutants preserve angles, so `β` does not depend on the
/// choice.
///
/// A nilpotent `M1` (both eigenvalues zero) makes the system trivial:
/// applying `M1` twice annihilates every state. That is reported as
/// [`Error::NilpotentSystem`]; callers map it to radius zero.
pub fn canonicalize(sys: &SingularRotationSystem) -> Result<Canonicalization> {
    let norm = operator_norm(&sys.m1);
    // trace = λ1 + λ2 = λ2 since the system carries det(M1) = 0.
    let lambda2 = sys.m1.trace();
    if norm == 0.0 || lambda2.abs() <= TAU_SV * norm {
        return Err(Error::NilpotentSystem);
    }
    let (p, rho3, alpha) = real_jordan_2x2(&sys.m2)?;
    let m1_prime = p.inverse2()?.mul(&sys.m1).mul(&p);
    let pairs = eigen2x2(&m1_prime);
    // Ordered by |value| descending: pairs[0] carries λ2, pairs[1] the kernel.
    let v2 = [pairs[0].vector[0].re, pairs[0].vector[1].re];
    let v1 = [pairs[1].vector[0].re, pairs[1].vector[1].re];
    let dot = (v1[0] * v2[0] + v1[1] * v2[1]).abs();
    let beta = dot.clamp(0.0, 1.0).acos() / PI;
    let j = Matrix::clockwise_rotation2(alpha * PI).scale(rho3);
    Ok(Canonicalization {
        params: CanonicalParams {
            lambda2,
            rho3,
            alpha,
            beta,
        },
        p,
        m1_prime,
        j,
    })
}

/// Canonical realization of the reduced system with the kernel direction on
/// the x axis: the singular factor maps everything onto the image direction
/// `(cos βπ, sin βπ)` with gain `λ2`, and `J` is the scaled clockwise
/// rotation by `απ`.
pub fn canonical_system(params: &CanonicalParams) -> (Matrix, Matrix) {
    let sb = (params.beta * PI).sin();
    let cb = (params.beta * PI).cos();
    let g = params.lambda2 / sb;
    let m1 = Matrix::from_flat(2, &[0.0, g * cb, 0.0, g * sb]).unwrap();
    let j = Matrix::clockwise_rotation2(params.alpha * PI).scale(params.rho3);
    (m1, j)
}

/// Per-step decay factor of the cycle "rotate `l` times, project once":
/// `ρ3 · (|λ2|/ρ3 · |sin((lα − β)π)| / sin(βπ))^(1/(l+1))`.
pub fn per_step_factor(params: &CanonicalParams, l: u64) -> f64 {
    let x = l as f64 * params.alpha - params.beta;
    let dist = nearest_int_distance_f64(x);
    factor_from_distance(params, l, dist)
}

/// The same factor with the nearest-integer distance of `lα − β` supplied
/// externally; the exact-arithmetic scans feed distances computed in
/// rational arithmetic, which keeps the sine argument accurate for large
/// `l` where `l·α` has already lost digits in `f64`.
pub(crate) fn factor_from_distance(params: &CanonicalParams, l: u64, dist: f64) -> f64 {
    let x = (params.lambda2.abs() / params.rho3) * (PI * dist).sin() / (PI * params.beta).sin();
    params.rho3 * x.powf(1.0 / (l as f64 + 1.0))
}

fn nearest_int_distance_f64(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// How a radius value was certified.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusCase {
    /// `‖lα − β‖ = 0` in exact arithmetic at the witness; the radius is 0.
    ExactZero { witness_l: u64 },
    /// The infimum is attained at a finite cycle length.
    FiniteAttained { l_star: u64 },
    /// Budget ran out before certification. The reported value is the
    /// minimum over everything evaluated and is always a valid upper bound
    /// (each cycle is a feasible switching law).
    Truncated {
        /// Best-approximation cycle lengths that were examined.
        l_sequence: Vec<u64>,
        /// Cycle length achieving the reported value.
        best_l: u64,
        /// Always true: the value upper-bounds the radius.
        certified_upper: bool,
        /// A remainder below 1e-12 was seen on an inexact input: the radius
        /// is zero within tolerance, but exact zeros are undecidable from
        /// truncated data.
        near_zero_advisory: bool,
    },
}

/// Computed stabilizability radius.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusResult {
    pub value: f64,
    pub case: RadiusCase,
    /// True when the infimum is certified to be attained (or exactly zero).
    pub finiteness: bool,
}

impl RadiusResult {
    fn attained(value: f64, l_star: u64) -> Self {
        RadiusResult {
            value,
            case: RadiusCase::FiniteAttained { l_star },
            finiteness: true,
        }
    }

    fn zero(witness_l: u64) -> Self {
        RadiusResult {
            value: 0.0,
            case: RadiusCase::ExactZero { witness_l },
            finiteness: true,
        }
    }

    /// Cycle length behind the reported value, whatever the case.
    pub fn witness(&self) -> u64 {
        match &self.case {
            RadiusCase::ExactZero { witness_l } => *witness_l,
            RadiusCase::FiniteAttained { l_star } => *l_star,
            RadiusCase::Truncated { best_l, .. } => *best_l,
        }
    }
}

/// Budgets for the exact-radius computation.
#[derive(Debug, Clone)]
pub struct RadiusConfig {
    /// Exhaustive scan bound for irrational `α`.
    pub l_cap: u64,
    /// Continued-fraction expansion budget.
    pub cf_budget: CfBudget,
    /// Number of best-approximation terms to walk.
    pub max_seq_terms: usize,
}

impl Default for RadiusConfig {
    fn default() -> Self {
        RadiusConfig {
            l_cap: 10_000,
            cf_budget: CfBudget::default(),
            max_seq_terms: 48,
        }
    }
}

/// Exact stabilizability radius for canonical parameters and an exactly
/// spelled `α`.
///
/// `alpha_input` must agree with `params.alpha`; it carries the arithmetic
/// identity of the angle (rational, decimal with precision, or
/// continued-fraction digits), which decides between the three cases.
pub fn exact_radius(
    params: &CanonicalParams,
    alpha_input: &RealInput,
    cfg: &RadiusConfig,
) -> Result<RadiusResult> {
    if params.lambda2 == 0.0 {
        // Nilpotent singular factor: the system dies in two steps.
        return Ok(RadiusResult::zero(0));
    }
    if !(params.rho3 > 0.0) || !(params.beta > 0.0 && params.beta <= 0.5) {
        return Err(Error::InvalidConfig(format!(
            "canonical parameters out of range: rho3 = {}, beta = {}",
            params.rho3, params.beta
        )));
    }
    let frac = alpha_input.frac_f64();
    if !(frac > 0.0 && frac < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must lie strictly inside (0,1); got {frac}"
        )));
    }
    if (frac - params.alpha).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "alpha input {frac} does not match canonical alpha {}",
            params.alpha
        )));
    }

    let beta = BigRational::from_float(params.beta)
        .ok_or_else(|| Error::Numeric("beta is not finite".into()))?;

    match alpha_input.as_exact_rational() {
        Some(alpha) => exact_radius_rational(params, &alpha, &beta),
        None => exact_radius_irrational(params, alpha_input, &beta, cfg),
    }
}

/// Cases 1 and 2: rational `α = p/q`.
fn exact_radius_rational(
    params: &CanonicalParams,
    alpha: &BigRational,
    beta: &BigRational,
) -> Result<RadiusResult> {
    if let Some(witness) = exact_zero_witness(alpha, beta) {
        return Ok(RadiusResult::zero(witness));
    }
    let q = alpha
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Numeric("denominator of alpha exceeds u64".into()))?;
    let mut best: Option<(f64, u64)> = None;
    for l in 0..q {
        let x = BigRational::from_integer(BigInt::from(l)) * alpha - beta;
        let dist = big_rational_to_f64(&nearest_int_distance(&x));
        let value = factor_from_distance(params, l, dist);
        if best.map_or(true, |(b, _)| value < b) {
            best = Some((value, l));
        }
    }
    let (value, l_star) = best.expect("q >= 1");
    Ok(RadiusResult::attained(value, l_star))
}

/// Smallest `l >= 0` with `lα − β ∈ ℤ`, if any exists.
fn exact_zero_witness(alpha: &BigRational, beta: &BigRational) -> Option<u64> {
    // l·(p·d) ≡ c·q  (mod q·d)  for α = p/q, β = c/d.
    let (p, q) = (alpha.numer().clone(), alpha.denom().clone());
    let (c, d) = (beta.numer().clone(), beta.denom().clone());
    let a = &p * &d;
    let n = &q * &d;
    let rhs = &c * &q;
    if n.is_zero() {
        return None;
    }
    let g = a.gcd(&n);
    if g.is_zero() {
        return if rhs.is_zero() { Some(0) } else { None };
    }
    if !(&rhs % &g).is_zero() {
        return None;
    }
    let a1 = &a / &g;
    let n1 = &n / &g;
    let r1 = &rhs / &g;
    if n1.is_one() {
        return Some(0);
    }
    let ext = a1.extended_gcd(&n1);
    // ext.x is the inverse of a1 modulo n1 (their gcd is one).
    let l = (r1 * ext.x).mod_floor(&n1);
    l.to_u64()
}

/// Case 3: irrational (truncated) `α`.
///
/// Walks the exhaustive prefix `l ≤ l_cap` and then the best-approximation
/// cycle lengths `l_n` in increasing order. Beating an incumbent `b` at
/// cycle length `l` needs `|sin((lα−β)π)|` below
/// `t(l) = b^(l+1)·sin(βπ)/(|λ2|·ρ3^l)`, which shrinks geometrically once
/// `b < ρ3`; as soon as `t` falls below the input's resolution
/// `10^-precision`, no remainder the truncated input can represent would
/// improve the incumbent and the walk stops with a certified minimum.
fn exact_radius_irrational(
    params: &CanonicalParams,
    alpha_input: &RealInput,
    beta: &BigRational,
    cfg: &RadiusConfig,
) -> Result<RadiusResult> {
    let cf = cf_expand(alpha_input, &cfg.cf_budget)?;
    let alpha = cf.value.clone();
    let ln_resolution = -(cf.precision_digits as f64) * std::f64::consts::LN_10;
    let ln_sin_beta = (params.beta * PI).sin().ln();
    let ln_lambda2 = params.lambda2.abs().ln();
    let ln_rho3 = params.rho3.ln();

    // (distance, factor) at cycle length l, distances in exact arithmetic.
    let eval = |l: u64| -> (f64, f64) {
        let x = BigRational::from_integer(BigInt::from(l)) * &alpha - beta;
        let dist = big_rational_to_f64(&nearest_int_distance(&x));
        (dist, factor_from_distance(params, l, dist))
    };

    let mut best: Option<(f64, u64)> = None;
    let mut near_zero = false;
    for l in 0..=cfg.l_cap {
        let (dist, value) = eval(l);
        if best.map_or(true, |(b, _)| value < b) {
            best = Some((value, l));
            // A remainder this small would have been case 1 for an exact
            // input; flag it instead of claiming an exact zero.
            near_zero = dist <= 1e-12;
        }
    }

    // No future candidate at cycle length >= l can improve on b once
    // ln t(l) drops below the resolution.
    let future_is_hopeless = |b: f64, l: u64, near_zero: bool| -> bool {
        !near_zero
            && b > 0.0
            && b < params.rho3
            && (l as f64 + 1.0) * b.ln() + ln_sin_beta - ln_lambda2 - (l as f64) * ln_rho3
                < ln_resolution
    };

    let l_sequence = best_approx_sequence(&cf, beta, cfg.max_seq_terms)?;
    let mut walked: Vec<u64> = Vec::new();
    let mut certified = false;
    for &l in &l_sequence {
        if let Some((b, _)) = best {
            if future_is_hopeless(b, l, near_zero) {
                certified = true;
                break;
            }
        }
        walked.push(l);
        let (dist, value) = eval(l);
        if best.map_or(true, |(b, _)| value < b) {
            best = Some((value, l));
            near_zero = dist <= 1e-12;
        }
    }
    let (value, best_l) = best.expect("scan is nonempty");

    // The walk may also exhaust the sequence with the incumbent already
    // unbeatable by anything past the horizon.
    if !certified && walked.len() == l_sequence.len() {
        let horizon = walked
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
            .max(cfg.l_cap)
            .saturating_add(1);
        certified = future_is_hopeless(value, horizon, near_zero);
    }

    if certified && !near_zero {
        Ok(RadiusResult::attained(value, best_l))
    } else {
        Ok(RadiusResult {
            value,
            case: RadiusCase::Truncated {
                l_sequence: walked,
                best_l,
                certified_upper: true,
                near_zero_advisory: near_zero,
            },
            finiteness: false,
        })
    }
}

/// Radius of the special system `M1 = diag(2,0)`, `M2 = R(−απ)`:
/// canonical parameters `λ2 = 2`, `ρ3 = 1`, `β = 1/2`, where the factor
/// reduces to `|2 cos(lαπ)|^(1/(l+1))`.
pub fn radius_example7(alpha: &RealInput) -> Result<RadiusResult> {
    radius_example7_with(alpha, &RadiusConfig::default())
}

/// [`radius_example7`] with explicit budgets.
pub fn radius_example7_with(alpha: &RealInput, cfg: &RadiusConfig) -> Result<RadiusResult> {
    let params = CanonicalParams {
        lambda2: 2.0,
        rho3: 1.0,
        alpha: alpha.frac_f64(),
        beta: 0.5,
    };
    exact_radius(&params, alpha, cfg)
}

/// Iterates `x(t+1) = M_{σ(t)} x(t)` and returns the Euclidean norms
/// `‖x(0)‖, ‖x(1)‖, …, ‖x(T)‖`.
///
/// `sigma` holds zero-based member indices in application order.
pub fn simulate_law(set: &MatrixSet, sigma: &[usize], x0: &[f64]) -> Result<Vec<f64>> {
    let dim = set.dim();
    if x0.len() != dim {
        return Err(Error::Validation(format!(
            "initial state has dimension {}, set is {dim}x{dim}",
            x0.len()
        )));
    }
    if x0.iter().all(|&v| v == 0.0) {
        return Err(Error::Validation("initial state must be nonzero".into()));
    }
    if let Some(&bad) = sigma.iter().find(|&&i| i >= set.len()) {
        return Err(Error::Validation(format!(
            "switching index {bad} out of range for {} members",
            set.len()
        )));
    }
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut x = x0.to_vec();
    let mut out = Vec::with_capacity(sigma.len() + 1);
    out.push(norm(&x));
    for &i in sigma {
        x = set.member(i).apply(&x);
        out.push(norm(&x));
    }
    Ok(out)
}
