//! The achievable (distortion, cryptogram-rate, equivocation) region.
//!
//! A triple `(D, Rc, h)` is achievable exactly when `h <= h*(D)` and
//! `Rc >= R(D)`, where `h*(D) = H(U) - [R(D) - lambda C]_+`. This module
//! evaluates that boundary, the perfect-secrecy condition `R(D) <= lambda C`,
//! the four-way necessary conditions when the reproduction sequence itself
//! must be secured, and the feedback enhancement of those caps.
//!
//! The four-way conditions are necessary only; the evaluator reports them as
//! an **outer bound**, never as an achievable region (their achievability is
//! open in general).

use alloc::vec::Vec;

use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

use crate::capacity::{capacity, DEFAULT_CAPACITY_TOL};
use crate::info::{
    entropy, mutual_information, output_distribution, uniform01, Channel, Pmf,
};
use crate::math;
use crate::rd::{rate_distortion, DistortionMeasure, DEFAULT_RD_TOL};
use crate::{Error, Result};

/// Tolerance on every achievability inequality.
pub const ACHIEVABILITY_TOL: f64 = 1e-9;

/// `[a]_+ = max(a, 0)`.
#[inline]
pub fn positive_part(a: f64) -> f64 {
    a.max(0.0)
}

/// A cipher-system instance: source law, key-distribution channel,
/// distortion measure, and bandwidth expansion factor `lambda` (channel
/// uses per source symbol).
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub source: Pmf,
    pub key_channel: Channel,
    pub distortion: DistortionMeasure,
    pub lambda: f64,
}

impl SystemSpec {
    /// `lambda = 0` is accepted and models the absence of a key channel.
    pub fn new(
        source: Pmf,
        key_channel: Channel,
        distortion: DistortionMeasure,
        lambda: f64,
    ) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidConfig(
                "lambda must be finite and non-negative".into(),
            ));
        }
        if distortion.source_size() != source.alphabet_size() {
            return Err(Error::DimensionMismatch {
                what: "source alphabet vs distortion rows",
                expected: distortion.source_size(),
                got: source.alphabet_size(),
            });
        }
        Ok(Self {
            source,
            key_channel,
            distortion,
            lambda,
        })
    }

    pub fn source_entropy(&self) -> f64 {
        entropy(&self.source)
    }

    /// Capacity of the key-distribution channel.
    pub fn key_capacity(&self) -> Result<f64> {
        Ok(capacity(&self.key_channel, DEFAULT_CAPACITY_TOL)?.capacity)
    }

    /// `R(D)` of the source under the spec's distortion measure.
    pub fn rate_at(&self, distortion: f64) -> Result<f64> {
        Ok(rate_distortion(&self.source, &self.distortion, distortion, DEFAULT_RD_TOL)?.rate)
    }
}

/// A candidate operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    /// Expected distortion.
    pub distortion: f64,
    /// Cryptogram rate in bits per source symbol.
    pub cryptogram_rate: f64,
    /// Source equivocation rate in bits per source symbol.
    pub equivocation: f64,
    /// Optional reproduction-sequence equivocation rate.
    pub reproduction_equivocation: Option<f64>,
}

impl TradeoffPoint {
    pub fn new(distortion: f64, cryptogram_rate: f64, equivocation: f64) -> Result<Self> {
        if distortion < 0.0 || cryptogram_rate < 0.0 || equivocation < 0.0 {
            return Err(Error::InvalidConfig(
                "tradeoff point coordinates must be non-negative".into(),
            ));
        }
        Ok(Self {
            distortion,
            cryptogram_rate,
            equivocation,
            reproduction_equivocation: None,
        })
    }

    pub fn with_reproduction_equivocation(mut self, h_prime: f64) -> Result<Self> {
        if h_prime < 0.0 {
            return Err(Error::InvalidConfig(
                "reproduction equivocation must be non-negative".into(),
            ));
        }
        self.reproduction_equivocation = Some(h_prime);
        Ok(self)
    }
}

/// Maximal achievable equivocation at distortion `D`:
/// `h*(D) = min(H(U), H(U) - R(D) + lambda C)`.
pub fn h_star(spec: &SystemSpec, distortion: f64) -> Result<f64> {
    let c = spec.key_capacity()?;
    h_star_with(spec, distortion, c)
}

fn h_star_with(spec: &SystemSpec, distortion: f64, key_capacity: f64) -> Result<f64> {
    let h_u = spec.source_entropy();
    let rate = spec.rate_at(distortion)?;
    Ok(f64::min(h_u, h_u - rate + spec.lambda * key_capacity))
}

/// Theorem test: `pt` is achievable iff `h <= h*(D)` and `Rc >= R(D)`.
///
/// `pt` must not carry a reproduction-equivocation coordinate; use
/// [`extended_conditions`] for that setting.
pub fn is_achievable(spec: &SystemSpec, pt: &TradeoffPoint) -> Result<bool> {
    if pt.reproduction_equivocation.is_some() {
        return Err(Error::InvalidConfig(
            "point carries a reproduction equivocation; use extended_conditions".into(),
        ));
    }
    let cap = h_star(spec, pt.distortion)?;
    let rate = spec.rate_at(pt.distortion)?;
    Ok(pt.equivocation <= cap + ACHIEVABILITY_TOL
        && pt.cryptogram_rate >= rate - ACHIEVABILITY_TOL)
}

/// Perfect secrecy (`h = H(U)`) is possible at distortion `D` iff
/// `R(D) <= lambda C`.
pub fn perfect_secrecy_condition(spec: &SystemSpec, distortion: f64) -> Result<bool> {
    let c = spec.key_capacity()?;
    let rate = spec.rate_at(distortion)?;
    Ok(rate <= spec.lambda * c + ACHIEVABILITY_TOL)
}

/// One row of the region boundary.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    pub distortion: f64,
    pub rate: f64,
    pub h_star: f64,
    pub perfect_secrecy: bool,
}

/// Sweep the boundary over a distortion grid. The capacity is solved once.
pub fn region_boundary(spec: &SystemSpec, grid: &[f64]) -> Result<Vec<BoundaryPoint>> {
    let c = spec.key_capacity()?;
    let h_u = spec.source_entropy();
    grid.iter()
        .map(|&d| {
            let rate = spec.rate_at(d)?;
            Ok(BoundaryPoint {
                distortion: d,
                rate,
                h_star: f64::min(h_u, h_u - rate + spec.lambda * c),
                perfect_secrecy: rate <= spec.lambda * c + ACHIEVABILITY_TOL,
            })
        })
        .collect()
}

/// Uniform `points`-point grid on `[D_min, D_max_zero]`.
pub fn default_distortion_grid(spec: &SystemSpec, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Ok(Vec::new());
    }
    let lo = spec.distortion.min_distortion(&spec.source)?;
    let hi = spec.distortion.zero_rate_distortion(&spec.source)?;
    if points == 1 {
        return Ok([lo].into());
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| lo + step * i as f64).collect())
}

/// Per-condition diagnostics of the four-way necessary conditions for
/// securing the reproduction sequence at level `h'`.
///
/// These conditions are an outer bound on the `(D, Rc, h, h')` region; they
/// are not known to be achievable in general.
#[derive(Debug, Clone)]
pub struct ExtendedConditionReport {
    /// Cap on `h`: `H(U) - [I(U;V) - lambda I(X;Y)]_+`.
    pub equivocation_cap: f64,
    /// Cap on `h'`: `min(H(V), lambda H(Y))`.
    pub reproduction_cap: f64,
    /// Floor on `Rc`: `I(U;V)`.
    pub rate_floor: f64,
    /// Floor on `D`: `E d(U, V)`.
    pub distortion_floor: f64,
    pub condition_a: bool,
    pub condition_b: bool,
    pub condition_c: bool,
    pub condition_d: bool,
}

impl ExtendedConditionReport {
    pub fn satisfied(&self) -> bool {
        self.condition_a && self.condition_b && self.condition_c && self.condition_d
    }

    /// What this report describes. The conditions are necessary, not known
    /// sufficient.
    pub fn bound_kind(&self) -> &'static str {
        "outer bound"
    }
}

/// Evaluate the four-way conditions at a user-chosen test channel `P(v|u)`
/// and key-channel input `P(x)`. The pair is taken as given rather than
/// optimized: minimizing `I(U;V)` or maximizing `I(X;Y)` can conflict with
/// the `H(V)` / `H(Y)` terms of the `h'` cap.
pub fn extended_conditions(
    spec: &SystemSpec,
    test_channel: &Channel,
    input: &Pmf,
    pt: &TradeoffPoint,
) -> Result<ExtendedConditionReport> {
    let h_prime = pt.reproduction_equivocation.ok_or_else(|| {
        Error::InvalidConfig("extended conditions need a reproduction equivocation".into())
    })?;
    let quantities = extended_quantities(spec, test_channel, input)?;
    let (i_uv, i_xy, h_v, h_y) = quantities;
    let h_u = spec.source_entropy();
    let equivocation_cap = h_u - positive_part(i_uv - spec.lambda * i_xy);
    let reproduction_cap = f64::min(h_v, spec.lambda * h_y);
    let distortion_floor = spec
        .distortion
        .expected(&spec.source, test_channel)?;
    Ok(ExtendedConditionReport {
        equivocation_cap,
        reproduction_cap,
        rate_floor: i_uv,
        distortion_floor,
        condition_a: pt.equivocation <= equivocation_cap + ACHIEVABILITY_TOL,
        condition_b: h_prime <= reproduction_cap + ACHIEVABILITY_TOL,
        condition_c: pt.cryptogram_rate >= i_uv - ACHIEVABILITY_TOL,
        condition_d: pt.distortion >= distortion_floor - ACHIEVABILITY_TOL,
    })
}

/// With noiseless feedback of the key-channel output, both caps improve:
/// returns `(h, h') = (H(U) - [I(U;V) - lambda H(Y)]_+, min(H(V), lambda H(Y)))`.
pub fn feedback_bounds(
    spec: &SystemSpec,
    test_channel: &Channel,
    input: &Pmf,
) -> Result<(f64, f64)> {
    let (i_uv, _i_xy, h_v, h_y) = extended_quantities(spec, test_channel, input)?;
    let h_u = spec.source_entropy();
    let h = h_u - positive_part(i_uv - spec.lambda * h_y);
    let h_prime = f64::min(h_v, spec.lambda * h_y);
    Ok((h, h_prime))
}

/// `(I(U;V), I(X;Y), H(V), H(Y))` for a candidate pair.
fn extended_quantities(
    spec: &SystemSpec,
    test_channel: &Channel,
    input: &Pmf,
) -> Result<(f64, f64, f64, f64)> {
    if test_channel.input_size() != spec.source.alphabet_size() {
        return Err(Error::DimensionMismatch {
            what: "test channel input vs source alphabet",
            expected: spec.source.alphabet_size(),
            got: test_channel.input_size(),
        });
    }
    let i_uv = mutual_information(&spec.source, test_channel)?;
    let i_xy = mutual_information(input, &spec.key_channel)?;
    let h_v = entropy(&output_distribution(&spec.source, test_channel)?);
    let h_y = entropy(&output_distribution(input, &spec.key_channel)?);
    Ok((i_uv, i_xy, h_v, h_y))
}

/// One candidate found by the heuristic frontier search.
#[derive(Debug, Clone)]
pub struct FrontierPoint {
    pub input: Pmf,
    pub test_channel: Channel,
    pub equivocation_cap: f64,
    pub reproduction_cap: f64,
    pub rate_floor: f64,
    pub distortion_floor: f64,
}

/// Randomized search for `(P_X, P_{V|U})` pairs with a large reproduction
/// cap at a small distortion floor. Heuristic only: the result is a sample
/// of the outer bound's frontier, with no optimality claim.
pub fn search_extended_frontier(
    spec: &SystemSpec,
    samples: usize,
    seed: u64,
) -> Result<Vec<FrontierPoint>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let nu = spec.source.alphabet_size();
    let nv = spec.distortion.reproduction_size();
    let nx = spec.key_channel.input_size();
    let h_u = spec.source_entropy();

    let mut candidates = Vec::with_capacity(samples);
    for _ in 0..samples {
        let input = random_pmf(nx, &mut rng);
        let rows = (0..nu).map(|_| random_pmf(nv, &mut rng).probs().into()).collect();
        let test_channel = Channel::from_rows(rows).expect("random rows are stochastic");
        let (i_uv, i_xy, h_v, h_y) = extended_quantities(spec, &test_channel, &input)?;
        let distortion_floor = spec.distortion.expected(&spec.source, &test_channel)?;
        candidates.push(FrontierPoint {
            input,
            test_channel,
            equivocation_cap: h_u - positive_part(i_uv - spec.lambda * i_xy),
            reproduction_cap: f64::min(h_v, spec.lambda * h_y),
            rate_floor: i_uv,
            distortion_floor,
        });
    }

    // Keep the non-dominated points: increasing reproduction cap as the
    // distortion floor grows.
    candidates.sort_by(|a, b| {
        a.distortion_floor
            .partial_cmp(&b.distortion_floor)
            .expect("floors are finite")
    });
    let mut frontier: Vec<FrontierPoint> = Vec::new();
    for c in candidates {
        if frontier
            .last()
            .map(|f| c.reproduction_cap > f.reproduction_cap + 1e-12)
            .unwrap_or(true)
        {
            frontier.push(c);
        }
    }
    Ok(frontier)
}

/// Dirichlet(1, ..., 1) sample via normalized exponentials.
fn random_pmf<R: rand_core::RngCore>(k: usize, rng: &mut R) -> Pmf {
    let mut raw: Vec<f64> = (0..k)
        .map(|_| -math::ln(1.0 - uniform01(rng)))
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.iter_mut().for_each(|x| *x /= sum);
    Pmf::new(raw).expect("normalized positive vector")
}
