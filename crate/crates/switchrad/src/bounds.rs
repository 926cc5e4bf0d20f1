//! Spherical-cap areas and the subradius lower bound.
//!
//! A depth-`T` product with largest singular value `s_n` can only pull unit
//! vectors into a ball of radius `r` from a spherical segment of area at
//! most `|S^{n-1}| · I(r²/s_n²; 1/2, (n-1)/2)`. Summing that over all `m^T`
//! products and asking the segments to cover the whole sphere is what forces
//! `ρ̃ ≥ ρ̌/m`. This module provides the pieces: the regularized incomplete
//! beta function, sphere and cap areas, and the bound arithmetic itself.

use crate::error::{Error, Result};

/// Regularized incomplete beta function `I(h; a, b)` to about 1e-12.
///
/// Adaptive quadrature of the defining integral after the substitution
/// `t = sin²u`, which turns the integrand into `2·sin^(2a-1)u·cos^(2b-1)u`
/// and tames the endpoint singularities for `a, b ≥ 1/2` (the half-integer
/// parameters the cap areas use). Both the partial and the complete
/// integral go through the same quadrature, and the endpoints are exact.
pub fn reg_inc_beta(h: f64, a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "beta parameters must be positive");
    if h <= 0.0 {
        return 0.0;
    }
    if h >= 1.0 {
        return 1.0;
    }
    let integrand = |u: f64| {
        let (s, c) = u.sin_cos();
        2.0 * s.powf(2.0 * a - 1.0) * c.powf(2.0 * b - 1.0)
    };
    let phi = h.sqrt().asin();
    let num = adaptive_simpson(&integrand, 0.0, phi, 1e-13, 52);
    let den = adaptive_simpson(&integrand, 0.0, std::f64::consts::FRAC_PI_2, 1e-13, 52);
    (num / den).clamp(0.0, 1.0)
}

/// Adaptive Simpson quadrature with Richardson correction.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64, depth: u32) -> f64 {
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    simpson_step(f, lo, hi, flo, fmid, fhi, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let lmid = 0.5 * (lo + mid);
    let rmid = 0.5 * (mid + hi);
    let (flmid, frmid) = (f(lmid), f(rmid));
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, lo, mid, flo, flmid, fmid, left, tol / 2.0, depth - 1)
            + simpson_step(f, mid, hi, fmid, frmid, fhi, right, tol / 2.0, depth - 1)
    }
}

/// Gamma function by the Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula below 1/2. Relative accuracy is about 1e-13 for the
/// argument range the sphere areas use (x ≤ 10).
pub fn gamma_fn(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Γ(x) Γ(1−x) = π / sin(πx)
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI / (s * gamma_fn(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Surface area of the unit sphere `S^{n-1}`: `2 π^(n/2) / Γ(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    assert!(n >= 2, "sphere_area needs dimension >= 2");
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_fn(n as f64 / 2.0)
}

/// Upper bound for the area of `{x ∈ S^{n-1} : ‖A x‖ ≤ r}` for a matrix
/// with largest singular value `s_n`:
/// `|S^{n-1}| · I(r²/s_n²; 1/2, (n-1)/2)`.
///
/// `r > s_n` clamps the ratio to one, i.e. the full sphere area.
pub fn cap_segment_area(r: f64, s_n: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "segment areas need dimension >= 2, got {n}"
        )));
    }
    if !(s_n > 0.0) || r < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "need s_n > 0 and r >= 0; got s_n = {s_n}, r = {r}"
        )));
    }
    let ratio = ((r / s_n) * (r / s_n)).min(1.0);
    Ok(sphere_area(n) * reg_inc_beta(ratio, 0.5, (n as f64 - 1.0) / 2.0))
}

/// The subradius-based lower bound on the stabilizability radius:
/// an estimate of `ρ̌` divided by the set cardinality `m`.
///
/// Feeding a valid lower estimate of `ρ̌` makes the result a lower bound on
/// `ρ̃`; finite-depth enumeration rates only bound `ρ̌` from above, so
/// treat results built from them as estimates.
pub fn theorem1_lower_bound(subradius_estimate: f64, m: usize) -> f64 {
    assert!(m >= 1, "matrix set cardinality must be at least 1");
    subradius_estimate / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn beta_endpoints_exact() {
        for (a, b) in [(0.5, 0.5), (0.5, 2.5), (1.5, 0.5), (2.0, 3.0)] {
            assert_eq!(reg_inc_beta(0.0, a, b), 0.0);
            assert_eq!(reg_inc_beta(1.0, a, b), 1.0);
        }
    }

    #[test]
    fn beta_half_half_closed_form() {
        // I(h; 1/2, 1/2) = (2/π) asin(√h).
        for k in 0..=100 {
            let h = k as f64 / 100.0;
            let expected = 2.0 / PI * h.sqrt().asin();
            assert!(
                (reg_inc_beta(h, 0.5, 0.5) - expected).abs() <= 1e-9,
                "h = {h}"
            );
        }
    }

    #[test]
    fn beta_point_value() {
        assert!((reg_inc_beta(0.5, 0.5, 0.5) - 0.5).abs() < 1e-12);
        // I(h; 1, 1) = h (uniform).
        assert!((reg_inc_beta(0.3, 1.0, 1.0) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn beta_symmetry_identity() {
        // I(h; (n−1)/2, 1/2) = 1 − I(1−h; 1/2, (n−1)/2).
        for n in 2..=6 {
            let a = (n as f64 - 1.0) / 2.0;
            for k in 1..20 {
                let h = k as f64 / 20.0;
                let lhs = reg_inc_beta(h, a, 0.5);
                let rhs = 1.0 - reg_inc_beta(1.0 - h, 0.5, a);
                assert!((lhs - rhs).abs() <= 1e-10, "n = {n}, h = {h}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn beta_monotone_in_h() {
        for (a, b) in [(0.5, 0.5), (0.5, 2.0), (1.5, 0.5)] {
            let mut prev = 0.0;
            for k in 0..=50 {
                let h = k as f64 / 50.0;
                let v = reg_inc_beta(h, a, b);
                assert!(v + 1e-12 >= prev, "a={a} b={b} h={h}");
                prev = v;
            }
        }
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma_fn(0.5) - PI.sqrt()).abs() < 1e-12 * PI.sqrt());
        assert!((gamma_fn(1.0) - 1.0).abs() < 1e-12);
        assert!((gamma_fn(1.5) - 0.5 * PI.sqrt()).abs() < 1e-12);
        assert!((gamma_fn(5.0) - 24.0).abs() < 24.0 * 1e-12);
        assert!((gamma_fn(10.0) - 362_880.0).abs() < 362_880.0 * 1e-12);
        // Half-integers up to the supported range.
        let mut expected = PI.sqrt(); // Γ(1/2)
        let mut x = 0.5;
        while x < 9.5 {
            assert!(
                (gamma_fn(x) - expected).abs() <= expected * 1e-12,
                "Γ({x})"
            );
            expected *= x;
            x += 1.0;
        }
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-12);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-11);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-11);
    }

    #[test]
    fn cap_area_endpoints() {
        assert_eq!(cap_segment_area(0.0, 2.0, 3).unwrap(), 0.0);
        let full = cap_segment_area(2.0, 2.0, 3).unwrap();
        assert!((full - sphere_area(3)).abs() < 1e-12);
        // r beyond s_n clamps to the full sphere.
        let clamped = cap_segment_area(5.0, 2.0, 3).unwrap();
        assert_eq!(clamped, full);
    }

    #[test]
    fn cap_area_circle_arcs() {
        // n = 2: the segment is a pair of arcs of total length
        // 4 asin(r/s). Check 100 ratios.
        for k in 1..=100 {
            let ratio = k as f64 / 100.0;
            let area = cap_segment_area(ratio, 1.0, 2).unwrap();
            let expected = 4.0 * ratio.asin();
            assert!((area - expected).abs() <= 1e-9, "ratio = {ratio}");
        }
    }

    #[test]
    fn lower_bound_arithmetic() {
        assert_eq!(theorem1_lower_bound(1.0, 2), 0.5);
        assert_eq!(theorem1_lower_bound(0.0, 7), 0.0);
    }
}
