//! Rate–distortion function by alternating minimization.
//!
//! `R(D)` is traced through its Lagrangian parameterization: for a slope
//! `s <= 0` the inner loop alternates between the reproduction marginal and
//! the test channel until a fixed point, yielding one `(D(s), R(s))` point on
//! the curve. An outer bisection on `s` then lands on the requested
//! distortion. If the target sits on a linear segment of the curve (where
//! `D(s)` jumps), the two bracketing points are convex-combined; mutual
//! information is convex in the test channel, so the mixture is optimal on
//! the segment.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::info::{entropy, mutual_information, Channel, Pmf};
use crate::math;
use crate::{Error, Result};

/// Default tolerance for `R(D)` solves, in bits.
pub const DEFAULT_RD_TOL: f64 = 1e-6;

/// Iteration budget for one inner fixed-point solve.
pub const MAX_INNER_ITERATIONS: usize = 10_000;

/// Reproduction symbols with less output mass than this are pruned from the
/// reported test channel.
const PRUNE_TOL: f64 = 1e-12;

/// Largest slope magnitude the outer bisection will explore.
const SLOPE_LIMIT: f64 = 1e9;

/// Bounded single-letter distortion matrix `d(u, v) >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMeasure {
    matrix: Vec<f64>,
    source_size: usize,
    reproduction_size: usize,
    d_max: f64,
}

impl DistortionMeasure {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidDistortion("empty matrix".into()));
        }
        let reproduction_size = rows[0].len();
        let mut matrix = Vec::with_capacity(rows.len() * reproduction_size);
        let mut d_max = 0.0f64;
        for (u, row) in rows.iter().enumerate() {
            if row.len() != reproduction_size {
                return Err(Error::InvalidDistortion(format!(
                    "row {u} has {} entries, expected {reproduction_size}",
                    row.len()
                )));
            }
            for (v, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidDistortion(format!(
                        "entry ({u}, {v}) is {d}, must be finite and non-negative"
                    )));
                }
                d_max = d_max.max(d);
            }
            matrix.extend_from_slice(row);
        }
        Ok(Self {
            matrix,
            source_size: rows.len(),
            reproduction_size,
            d_max,
        })
    }

    /// Hamming distortion on a `k`-ary alphabet.
    pub fn hamming(k: usize) -> Self {
        let mut matrix = vec![1.0; k * k];
        for i in 0..k {
            matrix[i * k + i] = 0.0;
        }
        Self {
            matrix,
            source_size: k,
            reproduction_size: k,
            d_max: if k > 1 { 1.0 } else { 0.0 },
        }
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn reproduction_size(&self) -> usize {
        self.reproduction_size
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.matrix[u * self.reproduction_size + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.matrix[u * self.reproduction_size..(u + 1) * self.reproduction_size]
    }

    fn check_source(&self, source: &Pmf) -> Result<()> {
        if source.alphabet_size() != self.source_size {
            return Err(Error::DimensionMismatch {
                what: "source alphabet vs distortion rows",
                expected: self.source_size,
                got: source.alphabet_size(),
            });
        }
        Ok(())
    }

    /// Minimal feasible distortion `D_min = sum_u P(u) min_v d(u, v)`.
    pub fn min_distortion(&self, source: &Pmf) -> Result<f64> {
        self.check_source(source)?;
        let mut total = 0.0;
        for u in 0..self.source_size {
            let best = self.row(u).iter().copied().fold(f64::INFINITY, f64::min);
            total += source.get(u) * best;
        }
        Ok(total)
    }

    /// Distortion of the best constant reproduction,
    /// `min_v sum_u P(u) d(u, v)`; the rate-zero endpoint of the curve.
    pub fn zero_rate_distortion(&self, source: &Pmf) -> Result<f64> {
        Ok(self.column_distortions(source)?.0)
    }

    /// Reproduction symbol achieving [`Self::zero_rate_distortion`].
    pub fn best_constant_symbol(&self, source: &Pmf) -> Result<usize> {
        Ok(self.column_distortions(source)?.1)
    }

    fn column_distortions(&self, source: &Pmf) -> Result<(f64, usize)> {
        self.check_source(source)?;
        let mut best = (f64::INFINITY, 0);
        for v in 0..self.reproduction_size {
            let mut total = 0.0;
            for u in 0..self.source_size {
                total += source.get(u) * self.get(u, v);
            }
            if total < best.0 {
                best = (total, v);
            }
        }
        Ok(best)
    }

    /// If `d(u, v)` depends only on `(v - u) mod k` on a square alphabet,
    /// return that difference profile `rho` (so `rho[0] = d(u, u)`).
    pub fn difference_profile(&self) -> Option<Vec<f64>> {
        if self.source_size != self.reproduction_size {
            return None;
        }
        let k = self.source_size;
        let rho: Vec<f64> = (0..k).map(|j| self.get(0, j)).collect();
        for u in 0..k {
            for j in 0..k {
                if self.get(u, (u + j) % k) != rho[j] {
                    return None;
                }
            }
        }
        Some(rho)
    }

    /// Expected distortion of a test channel `P(v|u)` under `source`.
    pub fn expected(&self, source: &Pmf, kernel: &Channel) -> Result<f64> {
        self.check_source(source)?;
        if kernel.input_size() != self.source_size
            || kernel.output_size() != self.reproduction_size
        {
            return Err(Error::DimensionMismatch {
                what: "test channel vs distortion matrix",
                expected: self.reproduction_size,
                got: kernel.output_size(),
            });
        }
        let mut total = 0.0;
        for u in 0..self.source_size {
            let p = source.get(u);
            for v in 0..self.reproduction_size {
                total += p * kernel.get(u, v) * self.get(u, v);
            }
        }
        Ok(total)
    }
}

/// One point on the rate–distortion curve.
#[derive(Debug, Clone)]
pub struct RdPoint {
    /// Achieved expected distortion of the reported test channel.
    pub distortion: f64,
    /// `R(distortion)` in bits per source symbol.
    pub rate: f64,
    /// Optimal test channel `P(v|u)`, with zero-mass reproduction symbols
    /// pruned; columns correspond to `active_symbols`.
    pub test_channel: Channel,
    /// Original reproduction indices of the surviving columns.
    pub active_symbols: Vec<usize>,
    /// Curve slope `dR/dD <= 0` at the point (`-inf` at the `D_min`
    /// endpoint of a deterministic optimal map).
    pub slope: f64,
}

impl RdPoint {
    /// Output marginal of the test channel, over `active_symbols`.
    pub fn reproduction_marginal(&self, source: &Pmf) -> Result<Pmf> {
        crate::info::output_distribution(source, &self.test_channel)
    }
}

struct SlopePoint {
    kernel: Vec<f64>, // |U| x |V| row-major
    distortion: f64,
    rate: f64,
}

/// Inner alternating minimization at fixed slope `s`.
fn solve_at_slope(source: &Pmf, d: &DistortionMeasure, s: f64) -> SlopePoint {
    let nu = d.source_size();
    let nv = d.reproduction_size();

    // Per-row shift keeps 2^(s * d) well scaled for very steep slopes.
    let mut weight = vec![0.0; nu * nv];
    for u in 0..nu {
        let row_min = d.row(u).iter().copied().fold(f64::INFINITY, f64::min);
        for v in 0..nv {
            weight[u * nv + v] = math::exp2(s * (d.get(u, v) - row_min));
        }
    }

    let mut q = vec![1.0 / nv as f64; nv];
    let mut q_next = vec![0.0; nv];
    for _ in 0..MAX_INNER_ITERATIONS {
        q_next.iter_mut().for_each(|x| *x = 0.0);
        for u in 0..nu {
            let p = source.get(u);
            if p == 0.0 {
                continue;
            }
            let w = &weight[u * nv..(u + 1) * nv];
            let z: f64 = (0..nv).map(|v| q[v] * w[v]).sum();
            let scale = p / z;
            for v in 0..nv {
                q_next[v] += scale * q[v] * w[v];
            }
        }
        let total: f64 = q_next.iter().sum();
        q_next.iter_mut().for_each(|x| *x /= total);
        let delta = q
            .iter()
            .zip(&q_next)
            .map(|(a, b)| math::abs(a - b))
            .fold(0.0, f64::max);
        q.copy_from_slice(&q_next);
        if delta <= 1e-13 {
            break;
        }
    }

    let mut kernel = vec![0.0; nu * nv];
    for u in 0..nu {
        let w = &weight[u * nv..(u + 1) * nv];
        let z: f64 = (0..nv).map(|v| q[v] * w[v]).sum();
        if z > 0.0 {
            for v in 0..nv {
                kernel[u * nv + v] = q[v] * w[v] / z;
            }
        } else {
            // Zero-probability source row whose support died out of q: send
            // it to the row's own best reproduction.
            let best = (0..nv)
                .max_by(|&a, &b| w[a].partial_cmp(&w[b]).expect("weights are finite"))
                .expect("nv > 0");
            kernel[u * nv + best] = 1.0;
        }
    }
    let (distortion, rate) = kernel_stats(source, d, &kernel);
    SlopePoint {
        kernel,
        distortion,
        rate,
    }
}

/// Expected distortion and mutual information of a kernel given row-major.
fn kernel_stats(source: &Pmf, d: &DistortionMeasure, kernel: &[f64]) -> (f64, f64) {
    let nu = d.source_size();
    let nv = d.reproduction_size();
    let mut marginal = vec![0.0; nv];
    let mut distortion = 0.0;
    for u in 0..nu {
        let p = source.get(u);
        for v in 0..nv {
            let k = kernel[u * nv + v];
            marginal[v] += p * k;
            distortion += p * k * d.get(u, v);
        }
    }
    let mut rate = 0.0;
    for u in 0..nu {
        let p = source.get(u);
        if p == 0.0 {
            continue;
        }
        for v in 0..nv {
            let k = kernel[u * nv + v];
            if k > 0.0 {
                rate += p * k * math::log2(k / marginal[v]);
            }
        }
    }
    (distortion, rate.max(0.0))
}

fn point_from_kernel(
    source: &Pmf,
    d: &DistortionMeasure,
    kernel: &[f64],
    slope: f64,
) -> RdPoint {
    let nu = d.source_size();
    let nv = d.reproduction_size();
    let mut marginal = vec![0.0; nv];
    for u in 0..nu {
        for v in 0..nv {
            marginal[v] += source.get(u) * kernel[u * nv + v];
        }
    }
    let active_symbols: Vec<usize> = (0..nv).filter(|&v| marginal[v] > PRUNE_TOL).collect();
    let rows: Vec<Vec<f64>> = (0..nu)
        .map(|u| {
            let mut kept: Vec<f64> =
                active_symbols.iter().map(|&v| kernel[u * nv + v]).collect();
            let sum: f64 = kept.iter().sum();
            if sum > 0.0 {
                kept.iter_mut().for_each(|k| *k /= sum);
            } else {
                // Only reachable for zero-probability source rows.
                kept[0] = 1.0;
            }
            kept
        })
        .collect();
    let test_channel = Channel::from_rows(rows).expect("pruned kernel rows renormalized");

    // Report the stats of what is actually returned.
    let pruned = DistortionMeasure::from_rows(
        (0..nu)
            .map(|u| active_symbols.iter().map(|&v| d.get(u, v)).collect())
            .collect(),
    )
    .expect("submatrix of a valid distortion measure");
    let distortion = pruned
        .expected(source, &test_channel)
        .expect("dimensions match by construction");
    let rate = mutual_information(source, &test_channel).expect("dimensions match");
    RdPoint {
        distortion,
        rate,
        test_channel,
        active_symbols,
        slope,
    }
}

/// Zero-rate endpoint: the best constant reproduction.
fn zero_rate_point(source: &Pmf, d: &DistortionMeasure) -> Result<RdPoint> {
    let v_star = d.best_constant_symbol(source)?;
    let nu = d.source_size();
    let kernel: Vec<f64> = (0..nu * d.reproduction_size())
        .map(|i| if i % d.reproduction_size() == v_star { 1.0 } else { 0.0 })
        .collect();
    Ok(point_from_kernel(source, d, &kernel, 0.0))
}

/// `R(target_distortion)` for `source` under `d`, to within `tol` bits.
///
/// The returned test channel achieves the reported rate and distortion; for
/// `target_distortion >= ` [`DistortionMeasure::zero_rate_distortion`] the
/// rate is 0, and targets below [`DistortionMeasure::min_distortion`] are
/// rejected.
pub fn rate_distortion(
    source: &Pmf,
    d: &DistortionMeasure,
    target_distortion: f64,
    tol: f64,
) -> Result<RdPoint> {
    d.check_source(source)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig("rate-distortion tolerance must be positive".into()));
    }
    let d_min = d.min_distortion(source)?;
    let d_zero = d.zero_rate_distortion(source)?;
    if target_distortion < d_min - 1e-12 {
        return Err(Error::InfeasibleDistortion {
            target: target_distortion,
            d_min,
        });
    }
    if target_distortion >= d_zero - 1e-12 {
        return zero_rate_point(source, d);
    }
    if target_distortion <= d_min + 1e-12 {
        if let Some(kernel) = deterministic_min_kernel(source, d) {
            return Ok(point_from_kernel(source, d, &kernel, f64::NEG_INFINITY));
        }
        // Non-unique minimizers: fall through and let the bisection push the
        // slope as far as it goes.
    }

    // Bracket the slope so that D(s_lo) <= target <= D(s_hi).
    let mut s_lo = -1.0;
    let mut lo = solve_at_slope(source, d, s_lo);
    while lo.distortion > target_distortion {
        if s_lo <= -SLOPE_LIMIT {
            break;
        }
        s_lo *= 2.0;
        lo = solve_at_slope(source, d, s_lo);
    }
    let mut s_hi = s_lo;
    let mut hi = SlopePoint {
        kernel: lo.kernel.clone(),
        distortion: lo.distortion,
        rate: lo.rate,
    };
    while hi.distortion < target_distortion {
        s_hi *= 0.5;
        if math::abs(s_hi) < 1e-9 {
            // Flat end of the curve: interpolate toward the zero-rate point.
            let zr = zero_rate_point(source, d)?;
            let mut flat = vec![0.0; lo.kernel.len()];
            let nv = d.reproduction_size();
            for u in 0..d.source_size() {
                flat[u * nv + zr.active_symbols[0]] = 1.0;
            }
            return Ok(chord_point(
                source,
                d,
                &hi,
                &SlopePoint {
                    kernel: flat,
                    distortion: zr.distortion,
                    rate: 0.0,
                },
                target_distortion,
                s_hi,
            ));
        }
        hi = solve_at_slope(source, d, s_hi);
    }

    // Bisection; stop when the implied rate error is inside tol.
    for _ in 0..200 {
        let s_mid = 0.5 * (s_lo + s_hi);
        let mid = solve_at_slope(source, d, s_mid);
        let rate_err = math::abs(mid.distortion - target_distortion) * f64::max(1.0, math::abs(s_mid));
        if rate_err <= 0.5 * tol && mid.distortion <= target_distortion + tol {
            return Ok(point_from_kernel(source, d, &mid.kernel, s_mid));
        }
        if mid.distortion > target_distortion {
            s_hi = s_mid;
            hi = mid;
        } else {
            s_lo = s_mid;
            lo = mid;
        }
        if math::abs(s_hi - s_lo) <= 1e-12 * f64::max(1.0, math::abs(s_lo)) {
            break;
        }
    }
    // Linear segment of the curve: D(s) jumps across the target while the
    // slope bracket collapses. The chord mixture is optimal there.
    Ok(chord_point(source, d, &lo, &hi, target_distortion, 0.5 * (s_lo + s_hi)))
}

/// Convex combination of two curve points hitting `target` exactly.
fn chord_point(
    source: &Pmf,
    d: &DistortionMeasure,
    at_or_below: &SlopePoint,
    at_or_above: &SlopePoint,
    target: f64,
    slope: f64,
) -> RdPoint {
    let spread = at_or_above.distortion - at_or_below.distortion;
    let theta = if spread > 0.0 {
        ((at_or_above.distortion - target) / spread).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let kernel: Vec<f64> = at_or_below
        .kernel
        .iter()
        .zip(&at_or_above.kernel)
        .map(|(a, b)| theta * a + (1.0 - theta) * b)
        .collect();
    point_from_kernel(source, d, &kernel, slope)
}

/// Deterministic kernel mapping each source symbol to its unique nearest
/// reproduction, when that minimizer is unique for every symbol.
fn deterministic_min_kernel(source: &Pmf, d: &DistortionMeasure) -> Option<Vec<f64>> {
    let nu = d.source_size();
    let nv = d.reproduction_size();
    let mut kernel = vec![0.0; nu * nv];
    for u in 0..nu {
        let row = d.row(u);
        let best = row.iter().copied().fold(f64::INFINITY, f64::min);
        let minimizers: Vec<usize> = (0..nv).filter(|&v| row[v] == best).collect();
        if minimizers.len() != 1 && source.get(u) > 0.0 {
            return None;
        }
        kernel[u * nv + minimizers[0]] = 1.0;
    }
    Some(kernel)
}

/// Sweep [`rate_distortion`] across a distortion grid.
pub fn rd_curve(
    source: &Pmf,
    d: &DistortionMeasure,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<RdPoint>> {
    grid.iter()
        .map(|&target| rate_distortion(source, d, target, tol))
        .collect()
}

/// Inverse of the curve: the distortion `D` with `R(D) = target_rate`,
/// found by monotone bisection over `D`. Rates above `R(D_min)` are
/// rejected rather than clamped.
pub fn distortion_rate_inverse(
    source: &Pmf,
    d: &DistortionMeasure,
    target_rate: f64,
    tol: f64,
) -> Result<f64> {
    d.check_source(source)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig("inverse tolerance must be positive".into()));
    }
    if target_rate < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "target rate {target_rate} must be non-negative"
        )));
    }
    let h_u = entropy(source);
    if target_rate > h_u + 1e-9 {
        return Err(Error::InfeasibleRate {
            target: target_rate,
            max_rate: h_u,
        });
    }
    let d_min = d.min_distortion(source)?;
    let d_zero = d.zero_rate_distortion(source)?;
    if target_rate == 0.0 {
        return Ok(d_zero);
    }
    let inner_tol = 0.25 * tol;
    let max_rate = rate_distortion(source, d, d_min, inner_tol)?.rate;
    if target_rate > max_rate + tol {
        return Err(Error::InfeasibleRate {
            target: target_rate,
            max_rate,
        });
    }
    if target_rate >= max_rate - tol {
        return Ok(d_min);
    }

    let (mut lo, mut hi) = (d_min, d_zero);
    let mut best = (0.5 * (lo + hi), f64::INFINITY);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let rate = rate_distortion(source, d, mid, inner_tol)?.rate;
        let err = math::abs(rate - target_rate);
        if err < best.1 {
            best = (mid, err);
        }
        if err <= tol {
            return Ok(mid);
        }
        if rate > target_rate {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 {
            break;
        }
    }
    if best.1 <= tol {
        Ok(best.0)
    } else {
        Err(Error::NotConverged {
            what: "distortion-rate inverse bisection",
            gap: best.1,
            iterations: 200,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hb(p: f64) -> f64 {
        let term = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
        term(p) + term(1.0 - p)
    }

    fn bss() -> Pmf {
        Pmf::uniform(2)
    }

    #[test]
    fn endpoints_for_bernoulli_hamming() {
        let d = DistortionMeasure::hamming(2);
        let p = Pmf::bernoulli(0.3).unwrap();
        assert_eq!(d.min_distortion(&p).unwrap(), 0.0);
        // Best constant reproduction of Bern(0.3) is the symbol 0.
        assert!((d.zero_rate_distortion(&p).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(d.best_constant_symbol(&p).unwrap(), 0);
    }

    #[test]
    fn bss_hamming_matches_closed_form() {
        let d = DistortionMeasure::hamming(2);
        let pt = rate_distortion(&bss(), &d, 0.1, 1e-7).unwrap();
        assert!(
            (pt.rate - (1.0 - hb(0.1))).abs() < 1e-5,
            "rate {} vs {}",
            pt.rate,
            1.0 - hb(0.1)
        );
        assert!(pt.distortion <= 0.1 + 1e-7);
        assert!(pt.slope < 0.0);
    }

    #[test]
    fn zero_distortion_rate_is_source_entropy() {
        let d = DistortionMeasure::hamming(2);
        let pt = rate_distortion(&bss(), &d, 0.0, 1e-7).unwrap();
        assert!((pt.rate - 1.0).abs() < 1e-9);
        assert_eq!(pt.distortion, 0.0);
    }

    #[test]
    fn half_distortion_needs_zero_rate() {
        let d = DistortionMeasure::hamming(2);
        let pt = rate_distortion(&bss(), &d, 0.5, 1e-7).unwrap();
        assert_eq!(pt.rate, 0.0);
        assert_eq!(pt.active_symbols.len(), 1);
    }

    #[test]
    fn bernoulli_03_hamming_point() {
        let d = DistortionMeasure::hamming(2);
        let p = Pmf::bernoulli(0.3).unwrap();
        let pt = rate_distortion(&p, &d, 0.1, 1e-7).unwrap();
        assert!((pt.rate - (hb(0.3) - hb(0.1))).abs() < 1e-5);
    }

    #[test]
    fn infeasible_distortion_names_d_min() {
        let d = DistortionMeasure::from_rows(vec![vec![0.5, 1.0], vec![1.0, 0.5]]).unwrap();
        let err = rate_distortion(&bss(), &d, 0.2, 1e-6).unwrap_err();
        match err {
            Error::InfeasibleDistortion { d_min, .. } => assert!((d_min - 0.5).abs() < 1e-12),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn returned_channel_reproduces_rate_and_distortion() {
        let d = DistortionMeasure::hamming(2);
        let p = Pmf::bernoulli(0.3).unwrap();
        let pt = rate_distortion(&p, &d, 0.15, 1e-7).unwrap();
        let mi = mutual_information(&p, &pt.test_channel).unwrap();
        assert!((mi - pt.rate).abs() < 1e-9);
    }

    #[test]
    fn curve_is_non_increasing_and_convex() {
        let d = DistortionMeasure::hamming(2);
        let grid: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64 / 20.0).collect();
        let pts = rd_curve(&bss(), &d, &grid, 1e-7).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].rate <= w[0].rate + 1e-9);
        }
        // Midpoint convexity on the achieved (D, R) pairs.
        for w in pts.windows(3) {
            let (d0, d1, d2) = (w[0].distortion, w[1].distortion, w[2].distortion);
            if d2 - d0 > 1e-9 {
                let t = (d1 - d0) / (d2 - d0);
                let chord = (1.0 - t) * w[0].rate + t * w[2].rate;
                assert!(w[1].rate <= chord + 1e-6, "convexity violated at D={d1}");
            }
        }
    }

    #[test]
    fn curve_examples_from_closed_form() {
        let d = DistortionMeasure::hamming(2);
        let pts = rd_curve(&bss(), &d, &[0.0, 0.25, 0.5], 1e-7).unwrap();
        let expected = [1.0, 1.0 - hb(0.25), 0.0];
        for (pt, e) in pts.iter().zip(expected) {
            assert!((pt.rate - e).abs() < 1e-5, "rate {} vs {e}", pt.rate);
        }

        let p3 = Pmf::bernoulli(0.3).unwrap();
        let pts = rd_curve(&p3, &d, &[0.1, 0.2], 1e-7).unwrap();
        for (pt, e) in pts.iter().zip([hb(0.3) - hb(0.1), hb(0.3) - hb(0.2)]) {
            assert!((pt.rate - e).abs() < 1e-5);
        }
    }

    #[test]
    fn inverse_recovers_distortion() {
        let d = DistortionMeasure::hamming(2);
        // R = 1 - h_b(0.1) inverts back to D = 0.1.
        let target = 1.0 - hb(0.1);
        let dd = distortion_rate_inverse(&bss(), &d, target, 1e-6).unwrap();
        assert!((dd - 0.1).abs() < 1e-5, "inverse gave {dd}");
        // Endpoints.
        assert!((distortion_rate_inverse(&bss(), &d, 1.0, 1e-6).unwrap() - 0.0).abs() < 1e-9);
        assert!((distortion_rate_inverse(&bss(), &d, 0.0, 1e-6).unwrap() - 0.5).abs() < 1e-12);
        // Above H(U): explicit error, no clamping.
        assert!(matches!(
            distortion_rate_inverse(&bss(), &d, 1.2, 1e-6),
            Err(Error::InfeasibleRate { .. })
        ));
    }

    #[test]
    fn difference_profile_detection() {
        assert!(DistortionMeasure::hamming(3).difference_profile().is_some());
        let not_diff =
            DistortionMeasure::from_rows(vec![vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(not_diff.difference_profile().is_none());
        let not_square =
            DistortionMeasure::from_rows(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0]]).unwrap();
        assert!(not_square.difference_profile().is_none());
    }

    #[test]
    fn pruning_keeps_rows_stochastic() {
        // Asymmetric distortion where one reproduction symbol dies at high D.
        let d = DistortionMeasure::from_rows(vec![
            vec![0.0, 1.0, 0.9],
            vec![1.0, 0.0, 0.9],
        ])
        .unwrap();
        let pt = rate_distortion(&bss(), &d, 0.45, 1e-6).unwrap();
        for u in 0..2 {
            let s: f64 = pt.test_channel.row(u).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(pt.active_symbols.len() <= 3);
    }
}
