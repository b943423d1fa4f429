//! Tuning-parameter bounds, the log-spaced `δ̃` grid and majority voting.
//!
//! For each `k` the set of `δ̃` on which `k` maximizes `l_p(·; δ̃)` is an
//! interval `(a_k, b_k)`. Closed-form inner bounds `u_a(k) ≥ a_k` and
//! `u_b(k) ≤ b_k` anchor the grid; the vote then counts, per grid point,
//! which `k` wins.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::likelihood::{
    admissible_sup, competition_sup, penalized_difference, penalized_profile_loglik,
    stationary_delta, SigmaProfile,
};
use crate::scalar::Scalar;

/// Grid points per unit when no size is given.
pub const DEFAULT_POINTS_PER_UNIT: usize = 50;

/// Bounds below this are round-off, not structure.
const BOUND_NOISE: f64 = 1e-12;
const DENOM_FLOOR: f64 = 1e-14;
const BRACKET_MARGIN: f64 = 1e-14;
const BISECT_RTOL: f64 = 1e-10;
const SCAN_POINTS: usize = 512;

/// Inner approximation `(u_a, u_b)` of `k`'s winning interval, with the
/// optional root-found interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaBounds<T> {
    pub k: usize,
    pub u_a: Option<T>,
    pub u_b: Option<T>,
    pub exact: Option<ExactInterval<T>>,
}

impl<T: Scalar> DeltaBounds<T> {
    pub fn compute(sp: &SigmaProfile<T>, k: usize, m: Option<T>) -> Self {
        let n = sp.n();
        let u_a = if k + 1 < n { bound_u_a(sp, k).ok() } else { None };
        let u_b = bound_u_b(sp, k).ok();
        let exact = match m {
            Some(m) if k >= 2 && k + 2 <= n => exact_delta_interval(sp, m, k).ok(),
            _ => None,
        };
        DeltaBounds { k, u_a, u_b, exact }
    }

    /// `log u_b − log u_a` when both bounds exist and are ordered.
    pub fn log_width(&self) -> Option<T> {
        match (self.u_a, self.u_b) {
            (Some(a), Some(b)) if a < b => Some(b.ln() - a.ln()),
            _ => None,
        }
    }
}

/// Outcome of root-finding for `(a_k, b_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactInterval<T> {
    Bounded { a: T, b: T },
    Empty,
}

impl<T: Scalar> ExactInterval<T> {
    pub fn bounds(&self) -> Option<(T, T)> {
        match *self {
            ExactInterval::Bounded { a, b } => Some((a, b)),
            ExactInterval::Empty => None,
        }
    }
}

fn degenerate<T>(k: usize, reason: impl Into<String>) -> Result<T> {
    Err(Error::DegenerateBound {
        k,
        reason: reason.into(),
    })
}

/// Upper inner bound `u_b(k) = −c₀/c₁` for `k ∈ 1..n−1`.
///
/// `c₀ = log(λ_k/σ̂²(k−1)) + (n−k) log(σ̂²(k)/σ̂²(k−1))` and
/// `c₁ = −n[k log σ̂²(k) − (k−1) log σ̂²(k−1)]` are the value and slope at
/// `δ̃ = 0` of `l_p(k; δ̃) − l_p(k−1; δ̃)` up to the factor `−m/2`. The
/// difference is convex and decreasing, so its tangent root never passes
/// `b_k`.
pub fn bound_u_b<T: Scalar>(sp: &SigmaProfile<T>, k: usize) -> Result<T> {
    sp.check_k(k)?;
    let n = sp.n();
    let lam = sp.lambda(k);
    let (s_prev, s_k) = (sp.sigma2(k - 1), sp.sigma2(k));
    if !(lam > T::zero() && s_prev > T::zero() && s_k > T::zero()) {
        return degenerate(k, "zero eigenvalue or residual variance");
    }
    let nf = T::from_usize_lossy(n);
    let kf = T::from_usize_lossy(k);
    let c0 = (lam / s_prev).ln() + (nf - kf) * (s_k / s_prev).ln();
    let c1 = -nf * (kf * s_k.ln() - (kf - T::one()) * s_prev.ln());
    if c1.abs() < T::tol(DENOM_FLOOR) {
        return degenerate(k, "vanishing denominator");
    }
    if c0.abs() < T::tol(BOUND_NOISE) {
        return degenerate(k, "no likelihood gain over k - 1");
    }
    let u = -c0 / c1;
    if !(u.is_finite() && u > T::zero()) {
        return degenerate(k, format!("non-positive value {u}"));
    }
    Ok(u)
}

/// Lower inner bound `u_a(k)` for `k ∈ 1..n−2`.
///
/// `g(δ̃) = l_p(k; δ̃) − l_p(k+1; δ̃)` is concave and increasing, so the chord
/// from `(0, g(0))` to `(u_b(k), g(u_b(k)))` crosses zero no earlier than
/// `g` does. The bound exists only when `g(u_b(k)) > 0`, i.e. when the inner
/// interval is non-empty.
pub fn bound_u_a<T: Scalar>(sp: &SigmaProfile<T>, k: usize) -> Result<T> {
    sp.check_k(k)?;
    if k + 2 > sp.n() {
        return Err(Error::Range(format!("u_a needs k ≤ n − 2, got {k}")));
    }
    if !sp.likelihood_defined(k + 1) {
        return degenerate(k, "likelihood undefined at k + 1");
    }
    let u = bound_u_b(sp, k)?;
    if u >= admissible_sup::<T>(sp.n(), k + 1) {
        return degenerate(k, "u_b(k) is not admissible at k + 1");
    }
    let one = T::one();
    let g0 = penalized_difference(sp, one, k, k + 1, T::zero())?;
    let gu = penalized_difference(sp, one, k, k + 1, u)?;
    if !(gu > T::zero()) {
        return degenerate(k, "k never beats k + 1 below u_b(k)");
    }
    if !(g0 < T::zero()) {
        return degenerate(k, "k already beats k + 1 without penalty");
    }
    let a = u * (-g0) / (gu - g0);
    if !(a.is_finite() && a > T::zero()) {
        return degenerate(k, format!("non-positive value {a}"));
    }
    Ok(a)
}

/// Largest `k ∈ 1..n−1` with `δ̃ < 1/k − 1/n`, or 0 when none qualifies.
pub fn admissible_k_max<T: Scalar>(n: usize, delta_tilde: T) -> usize {
    if n < 2 || !(delta_tilde >= T::zero()) {
        return 0;
    }
    let nf = T::from_usize_lossy(n);
    let ok = |k: usize| {
        let kf = T::from_usize_lossy(k);
        nf - kf - nf * kf * delta_tilde > T::zero()
    };
    let sup = nf / (T::one() + nf * delta_tilde);
    let mut k = sup.floor().to_usize().unwrap_or(0).min(n - 1);
    while k > 0 && !ok(k) {
        k -= 1;
    }
    while k + 1 < n && ok(k + 1) {
        k += 1;
    }
    k
}

/// `T` geometric points from `lo` to `hi`, both included.
pub fn geometric_grid<T: Scalar>(lo: T, hi: T, points: usize) -> Result<Vec<T>> {
    if points == 0 {
        return Err(Error::Range("grid needs at least one point".into()));
    }
    if !(lo > T::zero() && hi.is_finite() && lo < hi) {
        return Err(Error::DegenerateSpectrum(format!(
            "grid range ({lo}, {hi}) is empty"
        )));
    }
    if points == 1 {
        return Ok(vec![hi]);
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    let last = T::from_usize_lossy(points - 1);
    let mut out: Vec<T> = (0..points)
        .map(|t| (l0 + (l1 - l0) * T::from_usize_lossy(t) / last).exp())
        .collect();
    out[0] = lo;
    out[points - 1] = hi;
    Ok(out)
}

/// True when the two smallest positive eigenvalues coincide to 1e-12.
fn has_flat_tail<T: Scalar>(sp: &SigmaProfile<T>) -> bool {
    let pos: Vec<T> = sp
        .spectrum()
        .eigenvalues()
        .iter()
        .copied()
        .filter(|&x| x > T::zero())
        .collect();
    match pos.as_slice() {
        [.., a, b] => (*a - *b).abs() <= T::tol(BOUND_NOISE) * *a,
        _ => false,
    }
}

/// Endpoints of the default grid.
///
/// The upper end is `u_b(1)`. The lower end is the smallest positive
/// `u_a(k)`; when no `u_a` exists or the spectrum ends in a flat tail (whose
/// bounds collapse to round-off) it is lowered to `1e-6 · u_b(1)`.
pub fn grid_range<T: Scalar>(sp: &SigmaProfile<T>) -> Result<(T, T)> {
    let hi = bound_u_b(sp, 1).map_err(|e| {
        Error::DegenerateSpectrum(format!("no upper grid end: {e}"))
    })?;
    let floor = hi * T::lit(1e-6);
    let n = sp.n();
    let min_ua = (1..n.saturating_sub(1))
        .filter_map(|k| bound_u_a(sp, k).ok())
        .fold(None, |acc: Option<T>, u| Some(acc.map_or(u, |a| a.min(u))));
    let lo = match min_ua {
        Some(u) if has_flat_tail(sp) => u.min(floor),
        Some(u) => u,
        None => floor,
    };
    if !(lo < hi) {
        return Err(Error::DegenerateSpectrum(format!(
            "lower grid end {lo} is not below u_b(1) = {hi}"
        )));
    }
    Ok((lo, hi))
}

/// Default log-spaced grid with `points` values (`50·n` when `None`).
pub fn build_grid<T: Scalar>(sp: &SigmaProfile<T>, points: Option<usize>) -> Result<Vec<T>> {
    let (lo, hi) = grid_range(sp)?;
    geometric_grid(lo, hi, points.unwrap_or(DEFAULT_POINTS_PER_UNIT * sp.n()))
}

/// Votes per `k` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteTally<T> {
    pub counts: BTreeMap<usize, usize>,
    pub grid: Vec<T>,
    /// Indices of grid points where no candidate was eligible.
    pub skipped: Vec<usize>,
    /// Winner per grid point, aligned with `grid`.
    pub winners: Vec<Option<usize>>,
}

impl<T: Scalar> VoteTally<T> {
    pub fn total(&self) -> usize {
        self.counts.values().sum::<usize>() + self.skipped.len()
    }

    pub fn mode(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (&k, &c) in &self.counts {
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((k, c));
            }
        }
        best.map(|(k, _)| k)
    }
}

/// Maximizer of `l_p(·; δ̃)` among the eligible `k`, ties to the smaller.
///
/// `k` is eligible when `δ̃` is below [`competition_sup`] (which implies
/// admissibility) and the likelihood is defined. Returns `Ok(None)` when no
/// `k` is eligible and a domain error when every admissible `k` has an
/// undefined likelihood.
pub fn maximizer_at<T: Scalar>(sp: &SigmaProfile<T>, m: T, delta_tilde: T) -> Result<Option<usize>> {
    let kmax = admissible_k_max(sp.n(), delta_tilde);
    let mut best: Option<(usize, T)> = None;
    let mut any_defined = false;
    for k in 1..=kmax {
        if !sp.likelihood_defined(k) {
            continue;
        }
        any_defined = true;
        if !(delta_tilde < competition_sup(sp, k)?) {
            continue;
        }
        let v = penalized_profile_loglik(sp, m, k, delta_tilde)?;
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((k, v));
        }
    }
    if kmax > 0 && !any_defined {
        return Err(Error::Domain(format!(
            "likelihood undefined for every admissible k at δ̃ = {delta_tilde}"
        )));
    }
    Ok(best.map(|(k, _)| k))
}

/// Counts, for every grid point, the `k` maximizing the penalized likelihood.
///
/// Points are evaluated in parallel and merged in grid order, so the tally
/// does not depend on the worker count.
pub fn vote<T: Scalar>(sp: &SigmaProfile<T>, m: T, grid: &[T]) -> Result<VoteTally<T>> {
    let winners: Vec<Option<usize>> = grid
        .par_iter()
        .map(|&d| maximizer_at(sp, m, d))
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    let mut skipped = Vec::new();
    for (t, w) in winners.iter().enumerate() {
        match w {
            Some(k) => *counts.entry(*k).or_insert(0) += 1,
            None => skipped.push(t),
        }
    }
    Ok(VoteTally {
        counts,
        grid: grid.to_vec(),
        skipped,
        winners,
    })
}

/// Most voted `k`, ties to the smaller.
pub fn select_k<T: Scalar>(tally: &VoteTally<T>) -> Result<usize> {
    tally.mode().ok_or(Error::EmptyTally)
}

/// Result of the full voting pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PppcaEstimate<T> {
    pub k: usize,
    pub lo: T,
    pub hi: T,
    pub tally: VoteTally<T>,
}

/// Grid construction, voting and mode selection in one call.
pub fn pppca_select<T: Scalar>(
    sp: &SigmaProfile<T>,
    m: T,
    points: Option<usize>,
) -> Result<PppcaEstimate<T>> {
    let (lo, hi) = grid_range(sp)?;
    let grid = geometric_grid(lo, hi, points.unwrap_or(DEFAULT_POINTS_PER_UNIT * sp.n()))?;
    let tally = vote(sp, m, &grid)?;
    let k = select_k(&tally)?;
    Ok(PppcaEstimate { k, lo, hi, tally })
}

fn bisect<T: Scalar, F: Fn(T) -> Result<T>>(f: &F, mut lo: T, mut hi: T) -> Result<T> {
    let flo_pos = f(lo)? > T::zero();
    let rtol = T::tol(BISECT_RTOL);
    for _ in 0..200 {
        if hi - lo <= rtol * hi {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if (f(mid)? > T::zero()) == flo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

/// First point in `[lo, hi]` where `f` changes sign, refined by bisection.
fn first_crossing<T: Scalar, F: Fn(T) -> Result<T>>(f: &F, lo: T, hi: T) -> Result<Option<T>> {
    let xs = geometric_grid(lo, hi, SCAN_POINTS)?;
    let mut prev = f(xs[0])? > T::zero();
    for w in xs.windows(2) {
        let cur = f(w[1])? > T::zero();
        if cur != prev {
            return bisect(f, w[0], w[1]).map(Some);
        }
        prev = cur;
    }
    Ok(None)
}

/// Root-found winning interval `(a_k, b_k)` for `k ∈ 2..n−2`.
///
/// `a_k` is the first upward zero of `l_p(k; ·) − l_p(k+1; ·)` (0 when `k`
/// already wins at the bracket start) and `b_k` the first downward zero of
/// `l_p(k; ·) − l_p(k−1; ·)`, both searched on
/// `[1e-14, (1/k − 1/n)(1 − σ̂²(k)) − 1e-14]`.
pub fn exact_delta_interval<T: Scalar>(
    sp: &SigmaProfile<T>,
    m: T,
    k: usize,
) -> Result<ExactInterval<T>> {
    let n = sp.n();
    if k < 2 || k + 2 > n {
        return Err(Error::Range(format!("exact interval needs 2 ≤ k ≤ n − 2, got {k}")));
    }
    if !sp.likelihood_defined(k + 1) {
        return Ok(ExactInterval::Empty);
    }
    let margin = T::tol(BRACKET_MARGIN);
    let lo = margin;
    let hi = stationary_delta(sp, k)? - margin;
    let hi_up = hi.min(admissible_sup::<T>(n, k + 1) - margin);
    if !(lo < hi_up) {
        return Ok(ExactInterval::Empty);
    }

    let up = |d: T| penalized_difference(sp, m, k, k + 1, d);
    let down = |d: T| penalized_difference(sp, m, k, k - 1, d);

    let a = if up(lo)? >= T::zero() {
        T::zero()
    } else {
        match first_crossing(&up, lo, hi_up)? {
            Some(a) => a,
            None => return Ok(ExactInterval::Empty),
        }
    };
    if !(down(lo)? > T::zero()) {
        return Ok(ExactInterval::Empty);
    }
    let b = match first_crossing(&down, lo, hi)? {
        Some(b) => b,
        None => return Ok(ExactInterval::Empty),
    };
    if a < b {
        Ok(ExactInterval::Bounded { a, b })
    } else {
        Ok(ExactInterval::Empty)
    }
}
