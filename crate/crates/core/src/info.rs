//! Exact finite-alphabet probability objects and information measures.
//!
//! Everything downstream — the capacity and rate–distortion solvers, the
//! region evaluator, the scheme simulators — consumes these types. All
//! measures are in bits and use the `0 · log 0 = 0` convention, enforced by
//! clamping rather than by perturbing probabilities, so degenerate
//! distributions stay exact.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::math;
use crate::{Error, Result};

/// Tolerance on normalization sums. Inputs whose total deviates from 1 by at
/// most this much are renormalized; larger deviations are rejected.
pub const NORMALIZATION_TOL: f64 = 1e-9;

fn entropy_of(probs: &[f64]) -> f64 {
    -probs.iter().copied().map(math::plog2p).sum::<f64>()
}

/// Draw an index from a probability slice using one uniform variate.
pub(crate) fn sample_index<R: RngCore>(probs: &[f64], rng: &mut R) -> usize {
    let u = uniform01(rng);
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = i;
            if u < acc {
                return i;
            }
        }
    }
    // Rounding can leave acc marginally below 1; charge the tail symbol.
    last_positive
}

/// Uniform variate in `[0, 1)` from the top 53 bits of one draw.
pub(crate) fn uniform01<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A fair random bit.
pub(crate) fn random_bit<R: RngCore>(rng: &mut R) -> u8 {
    (rng.next_u64() >> 63) as u8
}

/// Probability mass function over the index alphabet `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validate and normalize a probability vector.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} is {p}, must be finite and non-negative"
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        if math::abs(sum - 1.0) > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, expected 1 within {NORMALIZATION_TOL:e}"
            )));
        }
        let probs = probs.into_iter().map(|p| p / sum).collect();
        Ok(Self { probs })
    }

    /// Uniform distribution over `k` symbols.
    pub fn uniform(k: usize) -> Self {
        Self {
            probs: vec![1.0 / k as f64; k.max(1)],
        }
    }

    /// Point mass on `at` in an alphabet of `k` symbols.
    pub fn degenerate(k: usize, at: usize) -> Result<Self> {
        if at >= k {
            return Err(Error::InvalidDistribution(format!(
                "point mass at {at} outside alphabet of size {k}"
            )));
        }
        let mut probs = vec![0.0; k];
        probs[at] = 1.0;
        Ok(Self { probs })
    }

    /// Binary law with `P(1) = p1`.
    pub fn bernoulli(p1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::InvalidDistribution(format!(
                "Bernoulli parameter {p1} outside [0, 1]"
            )));
        }
        Ok(Self {
            probs: vec![1.0 - p1, p1],
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Sample one symbol.
    pub fn sample<R: RngCore>(&self, rng: &mut R) -> usize {
        sample_index(&self.probs, rng)
    }
}

/// Row-stochastic conditional law of a discrete memoryless channel,
/// `matrix[x][y] = P(y | x)`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    matrix: Vec<f64>,
    input_size: usize,
    output_size: usize,
}

impl Channel {
    /// Validate a matrix given as rows; every row must sum to 1 within
    /// [`NORMALIZATION_TOL`] and is renormalized exactly.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidChannel("empty matrix".into()));
        }
        let output_size = rows[0].len();
        let input_size = rows.len();
        let mut matrix = Vec::with_capacity(input_size * output_size);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != output_size {
                return Err(Error::InvalidChannel(format!(
                    "row {x} has {} entries, expected {output_size}",
                    row.len()
                )));
            }
            for (y, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::InvalidChannel(format!(
                        "entry ({x}, {y}) is {p}, must be finite and non-negative"
                    )));
                }
            }
            let sum: f64 = row.iter().sum();
            if math::abs(sum - 1.0) > NORMALIZATION_TOL {
                return Err(Error::InvalidChannel(format!(
                    "row {x} sums to {sum}, expected 1 within {NORMALIZATION_TOL:e}"
                )));
            }
            matrix.extend(row.iter().map(|&p| p / sum));
        }
        Ok(Self {
            matrix,
            input_size,
            output_size,
        })
    }

    /// Noiseless `k`-ary channel.
    pub fn identity(k: usize) -> Self {
        let mut matrix = vec![0.0; k * k];
        for i in 0..k {
            matrix[i * k + i] = 1.0;
        }
        Self {
            matrix,
            input_size: k,
            output_size: k,
        }
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn binary_symmetric(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!(
                "crossover probability {p} outside [0, 1]"
            )));
        }
        Self::from_rows(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Binary erasure channel; outputs are ordered `[0, erasure, 1]`.
    pub fn binary_erasure(e: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&e) {
            return Err(Error::InvalidChannel(format!(
                "erasure probability {e} outside [0, 1]"
            )));
        }
        Self::from_rows(vec![vec![1.0 - e, e, 0.0], vec![0.0, e, 1.0 - e]])
    }

    /// `k`-ary symmetric channel: stays with `1 - p`, otherwise uniform over
    /// the `k - 1` other symbols.
    pub fn symmetric(k: usize, p: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidChannel("alphabet must have >= 2 symbols".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!(
                "error probability {p} outside [0, 1]"
            )));
        }
        let off = p / (k - 1) as f64;
        let rows = (0..k)
            .map(|x| (0..k).map(|y| if x == y { 1.0 - p } else { off }).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.matrix[x * self.output_size..(x + 1) * self.output_size]
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.matrix[x * self.output_size + y]
    }

    /// Sample an output symbol for input `x`.
    pub fn sample_output<R: RngCore>(&self, x: usize, rng: &mut R) -> usize {
        sample_index(self.row(x), rng)
    }
}

/// Joint probability matrix over a pair of finite alphabets,
/// `matrix[a][b] = P(A = a, B = b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    matrix: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl JointPmf {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidJoint("empty matrix".into()));
        }
        let cols = rows[0].len();
        let mut matrix = Vec::with_capacity(rows.len() * cols);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidJoint(format!(
                    "row {a} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (b, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::InvalidJoint(format!(
                        "entry ({a}, {b}) is {p}, must be finite and non-negative"
                    )));
                }
            }
            matrix.extend_from_slice(row);
        }
        let n_rows = rows.len();
        Self::from_flat(matrix, n_rows, cols)
    }

    /// Same validation for a row-major flat buffer.
    pub fn from_flat(matrix: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if matrix.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::InvalidJoint(format!(
                "buffer of {} entries does not match a {rows} x {cols} matrix",
                matrix.len()
            )));
        }
        if matrix.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidJoint(
                "entries must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = matrix.iter().sum();
        if math::abs(sum - 1.0) > NORMALIZATION_TOL {
            return Err(Error::InvalidJoint(format!(
                "entries sum to {sum}, expected 1 within {NORMALIZATION_TOL:e}"
            )));
        }
        let matrix = matrix.into_iter().map(|p| p / sum).collect();
        Ok(Self { matrix, rows, cols })
    }

    /// Joint law of `(X, Y)` when `X ~ px` feeds `ch`.
    pub fn from_source_and_channel(px: &Pmf, ch: &Channel) -> Result<Self> {
        if px.alphabet_size() != ch.input_size() {
            return Err(Error::DimensionMismatch {
                what: "source alphabet vs channel input",
                expected: ch.input_size(),
                got: px.alphabet_size(),
            });
        }
        let rows = ch.input_size();
        let cols = ch.output_size();
        let mut matrix = Vec::with_capacity(rows * cols);
        for x in 0..rows {
            let p = px.get(x);
            matrix.extend(ch.row(x).iter().map(|&c| p * c));
        }
        Ok(Self { matrix, rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.matrix[a * self.cols + b]
    }

    /// Marginal over the row variable `A`.
    pub fn row_marginal(&self) -> Pmf {
        let mut probs = vec![0.0; self.rows];
        for a in 0..self.rows {
            probs[a] = self.matrix[a * self.cols..(a + 1) * self.cols].iter().sum();
        }
        Pmf { probs }
    }

    /// Marginal over the column variable `B`.
    pub fn col_marginal(&self) -> Pmf {
        let mut probs = vec![0.0; self.cols];
        for a in 0..self.rows {
            for b in 0..self.cols {
                probs[b] += self.matrix[a * self.cols + b];
            }
        }
        Pmf { probs }
    }

    /// Joint entropy `H(A, B)` in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of(&self.matrix)
    }
}

/// Shannon entropy of a validated pmf, in bits. Lies in
/// `[0, log2(alphabet_size)]`.
pub fn entropy(p: &Pmf) -> f64 {
    entropy_of(p.probs())
}

/// Binary entropy function `h_b(p)` in bits, with `h_b(0) = h_b(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidDistribution(format!(
            "binary entropy argument {p} outside [0, 1]"
        )));
    }
    Ok(-(math::plog2p(p) + math::plog2p(1.0 - p)))
}

/// Output marginal of `ch` under input law `px`.
pub fn output_distribution(px: &Pmf, ch: &Channel) -> Result<Pmf> {
    if px.alphabet_size() != ch.input_size() {
        return Err(Error::DimensionMismatch {
            what: "source alphabet vs channel input",
            expected: ch.input_size(),
            got: px.alphabet_size(),
        });
    }
    let mut probs = vec![0.0; ch.output_size()];
    for x in 0..ch.input_size() {
        let p = px.get(x);
        if p == 0.0 {
            continue;
        }
        for (y, &c) in ch.row(x).iter().enumerate() {
            probs[y] += p * c;
        }
    }
    Ok(Pmf { probs })
}

/// Mutual information `I(X; Y)` in bits between the input of `ch` under law
/// `px` and its output, computed as `H(Y) - H(Y|X)`.
pub fn mutual_information(px: &Pmf, ch: &Channel) -> Result<f64> {
    let py = output_distribution(px, ch)?;
    let h_y = entropy(&py);
    let mut h_y_given_x = 0.0;
    for x in 0..ch.input_size() {
        let p = px.get(x);
        if p > 0.0 {
            h_y_given_x += p * entropy_of(ch.row(x));
        }
    }
    // Mathematically non-negative; clamp rounding residue.
    Ok((h_y - h_y_given_x).max(0.0))
}

/// Conditional entropy `H(A | B) = H(A, B) - H(B)` in bits. Lies in
/// `[0, H(A)]`.
pub fn conditional_entropy(j: &JointPmf) -> f64 {
    (j.entropy() - entropy(&j.col_marginal())).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    // Closed-form binary entropy, independent of the library path.
    fn hb(p: f64) -> f64 {
        let term = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
        term(p) + term(1.0 - p)
    }

    #[test]
    fn entropy_uniform_binary_is_one_bit() {
        assert!((entropy(&Pmf::uniform(2)) - 1.0).abs() < TOL);
    }

    #[test]
    fn entropy_degenerate_is_zero() {
        let p = Pmf::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(entropy(&p), 0.0);
    }

    #[test]
    fn entropy_bernoulli_point_one() {
        let p = Pmf::bernoulli(0.1).unwrap();
        assert!((entropy(&p) - hb(0.1)).abs() < TOL);
        assert!((entropy(&p) - 0.468995593589281).abs() < 1e-12);
    }

    #[test]
    fn pmf_rejects_negative_and_bad_sum() {
        assert!(Pmf::new(vec![-0.1, 1.1]).is_err());
        assert!(Pmf::new(vec![0.5, 0.6]).is_err());
        assert!(Pmf::new(vec![]).is_err());
        // Tiny drift is renormalized, not rejected.
        let p = Pmf::new(vec![0.5, 0.5 + 5e-10]).unwrap();
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn channel_rejects_bad_rows() {
        assert!(Channel::from_rows(vec![vec![0.5, 0.6], vec![0.5, 0.5]]).is_err());
        assert!(Channel::from_rows(vec![vec![0.5, 0.5], vec![0.5]]).is_err());
    }

    #[test]
    fn output_distribution_symmetry_and_identity() {
        let bsc = Channel::binary_symmetric(0.37).unwrap();
        let out = output_distribution(&Pmf::uniform(2), &bsc).unwrap();
        assert!((out.get(0) - 0.5).abs() < TOL);

        let id = Channel::identity(2);
        let degenerate = Pmf::new(vec![1.0, 0.0]).unwrap();
        let out = output_distribution(&degenerate, &id).unwrap();
        assert_eq!(out.probs(), &[1.0, 0.0]);
    }

    #[test]
    fn output_distribution_bernoulli_through_bsc() {
        // 0.3 * 0.89 + 0.7 * 0.11 = 0.344
        let px = Pmf::bernoulli(0.3).unwrap();
        let ch = Channel::binary_symmetric(0.11).unwrap();
        let out = output_distribution(&px, &ch).unwrap();
        assert!((out.get(1) - 0.344).abs() < TOL);
    }

    #[test]
    fn mutual_information_identity_channel_is_source_entropy() {
        let px = Pmf::bernoulli(0.3).unwrap();
        let i = mutual_information(&px, &Channel::identity(2)).unwrap();
        assert!((i - entropy(&px)).abs() < TOL);
    }

    #[test]
    fn mutual_information_constant_output_is_zero() {
        let ch = Channel::from_rows(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let i = mutual_information(&Pmf::bernoulli(0.3).unwrap(), &ch).unwrap();
        assert!(i.abs() < TOL);
    }

    #[test]
    fn mutual_information_uniform_bsc_closed_form() {
        let i = mutual_information(&Pmf::uniform(2), &Channel::binary_symmetric(0.1).unwrap())
            .unwrap();
        assert!((i - (1.0 - hb(0.1))).abs() < TOL);
    }

    #[test]
    fn conditional_entropy_product_and_diagonal() {
        // Independent pair: H(A|B) = H(A).
        let a = Pmf::bernoulli(0.3).unwrap();
        let b = Pmf::bernoulli(0.8).unwrap();
        let mut rows = Vec::new();
        for i in 0..2 {
            rows.push((0..2).map(|j| a.get(i) * b.get(j)).collect());
        }
        let j = JointPmf::from_rows(rows).unwrap();
        assert!((conditional_entropy(&j) - entropy(&a)).abs() < TOL);

        // A = B: H(A|B) = 0.
        let j = JointPmf::from_rows(vec![vec![0.3, 0.0], vec![0.0, 0.7]]).unwrap();
        assert!(conditional_entropy(&j).abs() < TOL);
    }

    #[test]
    fn conditional_entropy_additive_noise_pair() {
        // U ~ Bern(0.3), W = U xor Z with Z ~ Bern(0.11): brute-force the
        // 2 x 2 joint and compare with the closed form
        // h_b(0.3) + h_b(0.11) - h_b(0.344).
        let (pu, pz) = (0.3, 0.11);
        let mut rows = vec![vec![0.0; 2]; 2];
        for (u, z) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let w = u ^ z;
            let p = (if u == 1 { pu } else { 1.0 - pu }) * (if z == 1 { pz } else { 1.0 - pz });
            rows[u][w] += p;
        }
        let j = JointPmf::from_rows(rows).unwrap();
        let expected = hb(0.3) + hb(0.11) - hb(0.344);
        assert!((conditional_entropy(&j) - expected).abs() < TOL);
        assert!((expected - 0.452611763380118).abs() < 1e-12);
    }

    #[test]
    fn binary_entropy_edges_and_value() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < TOL);
        assert!((binary_entropy(0.11).unwrap() - 0.499915958164528).abs() < 1e-12);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn joint_marginals_are_consistent() {
        let px = Pmf::bernoulli(0.3).unwrap();
        let ch = Channel::binary_symmetric(0.11).unwrap();
        let j = JointPmf::from_source_and_channel(&px, &ch).unwrap();
        assert!((j.row_marginal().get(1) - 0.3).abs() < TOL);
        assert!((j.col_marginal().get(1) - 0.344).abs() < TOL);
    }

    #[test]
    fn sampling_hits_every_symbol_with_the_right_frequency() {
        use rand_chacha::ChaCha12Rng;
        use rand_core::SeedableRng;
        let p = Pmf::new(vec![0.2, 0.5, 0.3]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut counts = [0usize; 3];
        let n = 200_000;
        for _ in 0..n {
            counts[p.sample(&mut rng)] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / n as f64;
            assert!(
                (freq - p.get(i)).abs() < 0.01,
                "symbol {i}: frequency {freq} vs probability {}",
                p.get(i)
            );
        }
    }
}
