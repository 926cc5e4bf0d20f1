//! Exhaustive exploration of matrix products: joint-spectral estimates,
//! optimal switching sequences, and pointwise stabilizability certificates.
//!
//! Minima of norms and spectral radii over products do not prune: a product
//! can shrink after a growing prefix, so branch-and-bound on prefix norms is
//! unsound for these objectives. Enumeration is therefore exact and
//! exhaustive, guarded by a configurable product-count budget (the depth-10
//! three-matrix search needs 3^10 = 59049 products).
//!
//! Switching sequences are stored oldest-first internally (σ(1), σ(2), …)
//! and rendered newest-first in reports, matching the product notation
//! `A_t = M_{σ(t)} ··· M_{σ(1)}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{mul_into, operator_norm, spectral_radius, Matrix};
use crate::MAX_DIM;

/// Ordered finite set of same-dimension square matrices; the member order is
/// the canonical index used in switching sequences.
#[derive(Debug, Clone)]
pub struct MatrixSet {
    members: Vec<Matrix>,
    dim: usize,
}

impl MatrixSet {
    pub fn new(members: Vec<Matrix>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Validation("matrix set must be nonempty".into()));
        };
        let dim = first.dim();
        if dim < 2 || dim > MAX_DIM {
            return Err(Error::UnsupportedSize { dim, max: MAX_DIM });
        }
        if let Some((i, m)) = members
            .iter()
            .enumerate()
            .find(|(_, m)| m.dim() != dim)
        {
            return Err(Error::Validation(format!(
                "member {i} is {}x{} but the set is {dim}x{dim}",
                m.dim(),
                m.dim()
            )));
        }
        Ok(MatrixSet { members, dim })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn member(&self, i: usize) -> &Matrix {
        &self.members[i]
    }

    pub fn members(&self) -> &[Matrix] {
        &self.members
    }

    /// Product `M_{σ(t)} ··· M_{σ(1)}` for an oldest-first sequence,
    /// multiplied in the same order the enumeration uses so replayed values
    /// match reported ones bit for bit.
    pub fn product_oldest_first(&self, sigma: &[usize]) -> Matrix {
        let mut acc = Matrix::identity(self.dim);
        let mut next = Matrix::zeros(self.dim);
        for &i in sigma {
            mul_into(&self.members[i], &acc, &mut next);
            std::mem::swap(&mut acc, &mut next);
        }
        acc
    }
}

/// Enumeration guard.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    /// Maximum number of depth-T products (`m^T`) an enumeration may visit.
    pub max_products: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_products: 1e7,
        }
    }
}

fn check_budget(m: usize, depth: usize, budget: &SearchBudget) -> Result<()> {
    let products = (m as f64).powi(depth as i32);
    if products > budget.max_products {
        return Err(Error::BudgetExceeded {
            products,
            depth,
            guard: budget.max_products,
        });
    }
    Ok(())
}

/// Renders an oldest-first zero-based sequence as newest-first one-based.
pub(crate) fn newest_first_one_based(sigma_oldest: &[usize]) -> Vec<usize> {
    sigma_oldest.iter().rev().map(|&i| i + 1).collect()
}

/// Per-depth extrema of norms and spectral radii over all products.
#[derive(Debug, Clone, Serialize)]
pub struct ProductSearchReport {
    /// Enumeration depth `T`.
    pub depth: usize,
    /// `min ‖A‖^(1/T)` over depth-`T` products.
    pub min_norm_rate: f64,
    /// `max ‖A‖^(1/T)` over depth-`T` products.
    pub max_norm_rate: f64,
    /// `min ρ(A)^(1/t)` over all `1 ≤ t ≤ T` and depth-`t` products.
    pub min_sr_rate: f64,
    /// `max ρ(A)^(1/t)` over all `1 ≤ t ≤ T` and depth-`t` products.
    pub max_sr_rate: f64,
    /// Smallest largest-singular-value over depth-`T` products: `S(T)`.
    pub s_of_t: f64,
    /// Switching sequences attaining each extremum, newest-first, one-based.
    pub argmin_norm: Vec<usize>,
    pub argmax_norm: Vec<usize>,
    pub argmin_sr: Vec<usize>,
    pub argmax_sr: Vec<usize>,
    /// Number of depth-`T` products visited (exactly `m^T`).
    pub products_visited: u64,
}

struct RateTracker {
    value: f64,
    arg: Vec<usize>,
}

impl RateTracker {
    fn new(minimizing: bool) -> Self {
        RateTracker {
            value: if minimizing { f64::INFINITY } else { f64::NEG_INFINITY },
            arg: Vec::new(),
        }
    }

    fn offer_min(&mut self, v: f64, seq: &[usize]) {
        if v < self.value {
            self.value = v;
            self.arg = seq.to_vec();
        }
    }

    fn offer_max(&mut self, v: f64, seq: &[usize]) {
        if v > self.value {
            self.value = v;
            self.arg = seq.to_vec();
        }
    }
}

/// Exhaustive rate report over all products up to depth `T`.
///
/// Depth-first, each depth-`t` product extending a depth-`(t−1)` product by
/// one member on the left. Ties keep the first sequence visited, which is
/// the lexicographically smallest in oldest-first order.
pub fn enumerate_rates(
    set: &MatrixSet,
    depth: usize,
    budget: &SearchBudget,
) -> Result<ProductSearchReport> {
    if depth == 0 {
        return Err(Error::InvalidConfig("enumeration depth must be >= 1".into()));
    }
    check_budget(set.len(), depth, budget)?;

    let mut min_norm = RateTracker::new(true);
    let mut max_norm = RateTracker::new(false);
    let mut min_sr = RateTracker::new(true);
    let mut max_sr = RateTracker::new(false);
    let mut s_of_t = f64::INFINITY;
    let mut visited: u64 = 0;

    visit_nodes(set, depth, |sigma, product| {
        let t = sigma.len();
        let sr_rate = spectral_radius(product).powf(1.0 / t as f64);
        min_sr.offer_min(sr_rate, sigma);
        max_sr.offer_max(sr_rate, sigma);
        if t == depth {
            visited += 1;
            let norm = operator_norm(product);
            let norm_rate = norm.powf(1.0 / t as f64);
            min_norm.offer_min(norm_rate, sigma);
            max_norm.offer_max(norm_rate, sigma);
            if norm < s_of_t {
                s_of_t = norm;
            }
        }
    });

    Ok(ProductSearchReport {
        depth,
        min_norm_rate: min_norm.value,
        max_norm_rate: max_norm.value,
        min_sr_rate: min_sr.value,
        max_sr_rate: max_sr.value,
        s_of_t,
        argmin_norm: newest_first_one_based(&min_norm.arg),
        argmax_norm: newest_first_one_based(&max_norm.arg),
        argmin_sr: newest_first_one_based(&min_sr.arg),
        argmax_sr: newest_first_one_based(&max_sr.arg),
        products_visited: visited,
    })
}

/// `S(T)`: the smallest largest-singular-value over all depth-`T` products.
/// `S(T)^(1/T)` is the depth-`T` estimate of the joint spectral subradius.
pub fn s_of_t(set: &MatrixSet, depth: usize, budget: &SearchBudget) -> Result<f64> {
    Ok(enumerate_rates(set, depth, budget)?.s_of_t)
}

/// Objective for [`optimal_sequence_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    SpectralRadius,
    Norm,
}

/// Result of an optimal-sequence search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    /// Argmin sequence, newest-first, one-based. With ties, the
    /// lexicographically smallest such rendering.
    pub sequence: Vec<usize>,
    /// Objective value of the returned sequence.
    pub value: f64,
    /// All sequences whose objective ties the minimum within `tie_rtol`
    /// (newest-first, one-based), sorted lexicographically; capped at 64.
    pub ties: Vec<Vec<usize>>,
    /// Total number of tying sequences (may exceed `ties.len()`).
    pub tie_count: u64,
    /// Relative tolerance used to group ties.
    pub tie_rtol: f64,
}

/// Exhaustive argmin of the objective over all depth-`t` products.
///
/// Products that differ by a cyclic shift share their spectral radius
/// exactly, so spectral-radius minimizers come in whole cyclic classes that
/// floating point separates only by rounding noise. Sequences within
/// relative tolerance `1e-9` of the minimum are grouped as ties and the
/// lexicographically smallest newest-first rendering is returned.
pub fn optimal_sequence_search(
    set: &MatrixSet,
    depth: usize,
    objective: Objective,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    if depth == 0 {
        return Err(Error::InvalidConfig("search depth must be >= 1".into()));
    }
    check_budget(set.len(), depth, budget)?;
    const TIE_RTOL: f64 = 1e-9;

    let eval = |product: &Matrix| match objective {
        Objective::SpectralRadius => spectral_radius(product),
        Objective::Norm => operator_norm(product),
    };

    // Pass 1: the minimum value.
    let mut min_value = f64::INFINITY;
    visit_nodes(set, depth, |sigma, product| {
        if sigma.len() == depth {
            let v = eval(product);
            if v < min_value {
                min_value = v;
            }
        }
    });

    // Pass 2: collect ties within tolerance.
    let cutoff = min_value * (1.0 + TIE_RTOL) + f64::MIN_POSITIVE;
    let mut ties: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut tie_count: u64 = 0;
    visit_nodes(set, depth, |sigma, product| {
        if sigma.len() == depth {
            let v = eval(product);
            if v <= cutoff {
                tie_count += 1;
                if ties.len() < 64 {
                    ties.push((newest_first_one_based(sigma), v));
                }
            }
        }
    });
    ties.sort_by(|a, b| a.0.cmp(&b.0));
    let (sequence, value) = ties.first().cloned().expect("at least one product");
    Ok(SearchOutcome {
        sequence,
        value,
        ties: ties.into_iter().map(|(s, _)| s).collect(),
        tie_count,
        tie_rtol: TIE_RTOL,
    })
}

/// Depth-first visit of every product of depth `1 ≤ t ≤ depth`, in
/// lexicographic oldest-first sequence order, no allocation per node.
/// The callback sees the oldest-first sequence and the product
/// `M_{σ(t)} ··· M_{σ(1)}`.
fn visit_nodes<F: FnMut(&[usize], &Matrix)>(set: &MatrixSet, depth: usize, mut f: F) {
    let m = set.len();
    let n = set.dim();
    // products[t] = M_{σ(t)} ··· M_{σ(1)}; products[0] = I.
    let mut products: Vec<Matrix> = (0..=depth).map(|_| Matrix::identity(n)).collect();
    let mut sigma: Vec<usize> = Vec::with_capacity(depth);
    let mut choice = vec![0usize; depth + 1];
    let mut t = 1usize;
    choice[1] = 0;
    while t >= 1 {
        if choice[t] == m {
            t -= 1;
            sigma.pop();
            if t == 0 {
                break;
            }
            choice[t] += 1;
            continue;
        }
        let pick = choice[t];
        sigma.truncate(t - 1);
        sigma.push(pick);
        let (done, rest) = products.split_at_mut(t);
        mul_into(set.member(pick), &done[t - 1], &mut rest[0]);
        f(&sigma, &products[t]);
        if t == depth {
            choice[t] += 1;
        } else {
            t += 1;
            choice[t] = 0;
        }
    }
}

/// Certificate data: a θ-grid over the upper unit semicircle and, per
/// sample, the best product and the norm it achieves.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    /// Sampled angles θ (radians in [0, π]).
    pub grid: Vec<f64>,
    /// Index into the product list of the norm-minimizing product per
    /// sample.
    pub winner: Vec<usize>,
    /// The winning norm per sample.
    pub best_norm: Vec<f64>,
    /// True when every sample has some product with norm < 1 − margin.
    pub covered: bool,
    /// Maximal θ-intervals where no product wins.
    pub uncovered_intervals: Vec<(f64, f64)>,
    /// Margin used in the comparison.
    pub margin: f64,
}

/// Checks pointwise stabilizability of a 2x2 set over initial states
/// `x0 = (cos θ, sin θ)`, θ on a uniform grid over [0, π].
///
/// `products` are switching sequences over the set, oldest-first,
/// zero-based. `covered` is true when every sample admits a product with
/// `‖A x0‖ < 1 − margin`. An empty product list is a valid, trivially
/// uncovered certificate.
pub fn stabilizability_certificate(
    set: &MatrixSet,
    products: &[Vec<usize>],
    grid_size: usize,
    margin: f64,
) -> Result<CertificateReport> {
    if set.dim() != 2 {
        return Err(Error::Validation(format!(
            "certificates cover the unit circle of a 2x2 set; got dimension {}",
            set.dim()
        )));
    }
    if grid_size < 2 {
        return Err(Error::InvalidConfig(
            "certificate grid needs at least 2 samples".into(),
        ));
    }
    for (i, seq) in products.iter().enumerate() {
        if let Some(&bad) = seq.iter().find(|&&j| j >= set.len()) {
            return Err(Error::Validation(format!(
                "product {i} references member {bad}, set has {}",
                set.len()
            )));
        }
    }
    let mats: Vec<Matrix> = products
        .iter()
        .map(|seq| set.product_oldest_first(seq))
        .collect();

    let mut grid = Vec::with_capacity(grid_size);
    let mut winner = Vec::with_capacity(grid_size);
    let mut best_norm = Vec::with_capacity(grid_size);
    let mut covered = true;
    let mut uncovered: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<f64> = None;

    for k in 0..grid_size {
        let theta = std::f64::consts::PI * k as f64 / (grid_size - 1) as f64;
        let x0 = [theta.cos(), theta.sin()];
        let mut best = f64::INFINITY;
        let mut best_i = usize::MAX;
        for (i, a) in mats.iter().enumerate() {
            let y = a.apply(&x0);
            let n = y[0].hypot(y[1]);
            if n < best {
                best = n;
                best_i = i;
            }
        }
        let ok = best < 1.0 - margin;
        if !ok {
            covered = false;
            if open.is_none() {
                open = Some(theta);
            }
        } else if let Some(start) = open.take() {
            uncovered.push((start, theta));
        }
        grid.push(theta);
        winner.push(best_i);
        best_norm.push(best);
    }
    if let Some(start) = open {
        uncovered.push((start, std::f64::consts::PI));
    }

    Ok(CertificateReport {
        grid,
        winner,
        best_norm,
        covered,
        uncovered_intervals: uncovered,
        margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn m2(rows: [[f64; 2]; 2]) -> Matrix {
        Matrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
    }

    fn example7_set(alpha: f64) -> MatrixSet {
        MatrixSet::new(vec![
            m2([[2.0, 0.0], [0.0, 0.0]]),
            Matrix::clockwise_rotation2(alpha * PI),
        ])
        .unwrap()
    }

    #[test]
    fn identity_set_rates_are_one() {
        let set = MatrixSet::new(vec![Matrix::identity(2)]).unwrap();
        let r = enumerate_rates(&set, 5, &SearchBudget::default()).unwrap();
        for v in [r.min_norm_rate, r.max_norm_rate, r.min_sr_rate, r.max_sr_rate, r.s_of_t] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert_eq!(r.products_visited, 1);
    }

    #[test]
    fn example7_third_attains_unit_sr_rate() {
        // α = 1/3: ρ(M1·M2) has eigenvalues {2cos(π/3), 0} = {1, 0}, and no
        // product of depth ≤ 6 does better.
        let set = example7_set(1.0 / 3.0);
        let r = enumerate_rates(&set, 6, &SearchBudget::default()).unwrap();
        assert!((r.min_sr_rate - 1.0).abs() < 1e-12, "{}", r.min_sr_rate);
        assert_eq!(r.products_visited, 64);
    }

    #[test]
    fn example5_min_norm_rate_at_least_one() {
        // diag(1/2, 2) with a π/6 rotation: the subradius is 1 and the
        // depth-T min-norm rate approaches it from above.
        let set = MatrixSet::new(vec![
            m2([[0.5, 0.0], [0.0, 2.0]]),
            Matrix::clockwise_rotation2(-PI / 6.0),
        ])
        .unwrap();
        let r = enumerate_rates(&set, 12, &SearchBudget::default()).unwrap();
        assert!(r.min_norm_rate >= 1.0 - 1e-12, "{}", r.min_norm_rate);
        assert_eq!(r.products_visited, 1 << 12);
    }

    #[test]
    fn min_norm_rate_non_increasing_under_doubling() {
        // Submultiplicativity: min-norm rates along doubling depths do not
        // increase (within rounding slack).
        let set = example7_set(2.0 / 5.0);
        let budget = SearchBudget::default();
        let r2 = enumerate_rates(&set, 2, &budget).unwrap();
        let r4 = enumerate_rates(&set, 4, &budget).unwrap();
        let r8 = enumerate_rates(&set, 8, &budget).unwrap();
        assert!(r4.min_norm_rate <= r2.min_norm_rate * (1.0 + 1e-12));
        assert!(r8.min_norm_rate <= r4.min_norm_rate * (1.0 + 1e-12));
    }

    #[test]
    fn gelfand_ordering_within_report() {
        // Every product satisfies ρ(A) ≤ ‖A‖. max_sr_rate scans all
        // t ≤ T, so it is bounded by the largest per-depth max norm rate.
        let set = example7_set(0.3);
        let budget = SearchBudget::default();
        let depth = 5;
        let r = enumerate_rates(&set, depth, &budget).unwrap();
        let norm_rate_envelope = (1..=depth)
            .map(|t| enumerate_rates(&set, t, &budget).unwrap().max_norm_rate)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(r.max_sr_rate <= norm_rate_envelope * (1.0 + 1e-12));
    }

    #[test]
    fn replay_reproduces_reported_rates() {
        let set = example7_set(0.3);
        let depth = 5;
        let r = enumerate_rates(&set, depth, &SearchBudget::default()).unwrap();
        // argmin_norm is newest-first one-based; replay oldest-first.
        let oldest: Vec<usize> = r.argmin_norm.iter().rev().map(|&i| i - 1).collect();
        let prod = set.product_oldest_first(&oldest);
        let rate = operator_norm(&prod).powf(1.0 / depth as f64);
        assert_eq!(rate, r.min_norm_rate);
    }

    #[test]
    fn budget_guard_trips() {
        let set = example7_set(0.3);
        let budget = SearchBudget { max_products: 100.0 };
        assert!(matches!(
            enumerate_rates(&set, 12, &budget),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn s_of_t_single_matrix_power() {
        let set = MatrixSet::new(vec![m2([[2.0, 0.0], [0.0, 0.0]])]).unwrap();
        let s = s_of_t(&set, 4, &SearchBudget::default()).unwrap();
        assert_eq!(s, 16.0);
        assert!((s.powf(0.25) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn s_of_t_takes_min_over_all_products() {
        // α = 1/3: the rotation-only product has norm 1, which beats every
        // product containing the singular factor (‖M1·M2‖ = 2).
        let set = example7_set(1.0 / 3.0);
        let m1m2 = set.member(0).mul(set.member(1));
        assert!((operator_norm(&m1m2) - 2.0).abs() < 1e-12);
        let s = s_of_t(&set, 2, &SearchBudget::default()).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn search_depth_one_picks_smallest_member() {
        let set = MatrixSet::new(vec![
            m2([[2.0, 0.0], [0.0, 0.5]]),
            Matrix::clockwise_rotation2(0.4),
        ])
        .unwrap();
        let out =
            optimal_sequence_search(&set, 1, Objective::SpectralRadius, &SearchBudget::default())
                .unwrap();
        assert_eq!(out.sequence, vec![2]);
        assert!((out.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn search_commuting_tie_breaks_lexicographically() {
        // diag(2, 1/2) and diag(1/2, 2) commute: both orderings of the
        // alternating product tie at spectral radius 1; the tie-break picks
        // the lexicographically smallest newest-first sequence.
        let set = MatrixSet::new(vec![
            m2([[2.0, 0.0], [0.0, 0.5]]),
            m2([[0.5, 0.0], [0.0, 2.0]]),
        ])
        .unwrap();
        let out =
            optimal_sequence_search(&set, 2, Objective::SpectralRadius, &SearchBudget::default())
                .unwrap();
        assert!((out.value - 1.0).abs() < 1e-12);
        assert_eq!(out.sequence, vec![1, 2]);
        assert_eq!(out.tie_count, 2);
        assert_eq!(out.ties, vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn certificate_empty_products_is_uncovered() {
        let set = example7_set(0.3);
        let r = stabilizability_certificate(&set, &[], 100, 0.0).unwrap();
        assert!(!r.covered);
        assert_eq!(r.uncovered_intervals.len(), 1);
        assert_eq!(r.uncovered_intervals[0], (0.0, PI));
    }

    #[test]
    fn certificate_single_product_covers_subinterval() {
        // Example-4 matrices; the single product M1·M2 shrinks some
        // directions but not all of [0, π].
        let set = MatrixSet::new(vec![
            m2([[2.0, 0.0], [0.0, 0.5]]),
            Matrix::clockwise_rotation2(PI / 3.0),
        ])
        .unwrap();
        let r =
            stabilizability_certificate(&set, &[vec![1, 0]], 2001, 0.0).unwrap();
        assert!(!r.covered);
        let n_ok = r.best_norm.iter().filter(|&&n| n < 1.0).count();
        assert!(n_ok > 0, "some directions are contracted");
        assert!(n_ok < 2001, "but not all of them");
        assert!(!r.uncovered_intervals.is_empty());
    }

    #[test]
    fn rejects_empty_set_and_mixed_dims() {
        assert!(MatrixSet::new(vec![]).is_err());
        let bad = MatrixSet::new(vec![
            Matrix::identity(2),
            Matrix::identity(3),
        ]);
        assert!(matches!(bad, Err(Error::Validation(_))));
    }
}
