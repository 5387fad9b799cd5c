//! Post-processing of board outputs: one-hot decoding, block-sum rescaling,
//! moment summaries and goodness-of-fit against binomial or normal references.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use thiserror::Error;

use crate::sim::{Histogram, OutcomeDistribution};

/// Right-tail probability used for the chi-square rejection flag.
pub const CHI_SQUARE_ALPHA: f64 = 0.001;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("expected a {expected}-bit outcome, got {found} bits")]
    Length { expected: usize, found: usize },
    #[error("outcome contains a character other than 0 or 1")]
    NotBinary,
    #[error("no working bit is set")]
    NoHotBit,
    #[error("{0} working bits are set")]
    MultipleHotBits(usize),
    #[error("hot bit on even classical index {0}")]
    EvenPosition(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("no values to summarise")]
    Empty,
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("block size must be at least 1")]
    ZeroBlock,
    #[error("value {value} exceeds the board's {levels} levels")]
    ValueOutOfRange { value: usize, levels: usize },
    #[error("supports differ in length ({0} vs {1})")]
    SupportMismatch(usize, usize),
    #[error("every expected bin is zero")]
    NoExpectedMass,
}

/// Maps an outcome of an `n`-level board to its bin.
///
/// `bits` is the rendered classical register (`2n+2` characters, highest index
/// first). Classical bit 0 is ignored. Exactly one of bits `1..=2n+1` must be
/// set, and it must sit on an odd index `2k+1`, which decodes to `k`.
pub fn decode_one_hot(bits: &str, levels: usize) -> Result<usize, DecodeError> {
    let width = 2 * levels + 2;
    let chars = bits.as_bytes();
    if chars.len() != width {
        return Err(DecodeError::Length {
            expected: width,
            found: chars.len(),
        });
    }
    let mut hot = Vec::new();
    for (pos, &ch) in chars.iter().enumerate() {
        let index = width - 1 - pos;
        match ch {
            b'0' => {}
            b'1' if index == 0 => {}
            b'1' => hot.push(index),
            _ => return Err(DecodeError::NotBinary),
        }
    }
    match hot.as_slice() {
        [] => Err(DecodeError::NoHotBit),
        [index] if index % 2 == 1 => Ok((index - 1) / 2),
        [index] => Err(DecodeError::EvenPosition(*index)),
        many => Err(DecodeError::MultipleHotBits(many.len())),
    }
}

/// Bin values of an `n`-level board, each in `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedSamples {
    values: Vec<usize>,
    levels: usize,
}

impl DecodedSamples {
    pub fn new(values: Vec<usize>, levels: usize) -> Result<Self, StatsError> {
        if let Some(&value) = values.iter().find(|&&v| v > levels) {
            return Err(StatsError::ValueOutOfRange { value, levels });
        }
        Ok(Self { values, levels })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

/// Sums consecutive disjoint blocks; a trailing partial block is dropped.
pub fn rescale_blocks(
    samples: &DecodedSamples,
    block_size: usize,
) -> Result<Vec<usize>, StatsError> {
    if block_size == 0 {
        return Err(StatsError::ZeroBlock);
    }
    Ok(samples
        .values
        .chunks_exact(block_size)
        .map(|block| block.iter().sum())
        .collect())
}

/// Population moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub std_dev: f64,
    pub variance: f64,
}

impl SummaryStats {
    fn from_moments(mean: f64, variance: f64) -> Self {
        let variance = variance.max(0.0);
        Self {
            mean,
            std_dev: variance.sqrt(),
            variance,
        }
    }
}

pub fn summary_stats<I>(values: I) -> Result<SummaryStats, StatsError>
where
    I: IntoIterator,
    I::Item: Into<f64>,
{
    let values: Vec<f64> = values.into_iter().map(Into::into).collect();
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(SummaryStats::from_moments(mean, variance))
}

/// Moments of a distribution over `0..pmf.len()`.
pub fn distribution_stats(pmf: &[f64]) -> Result<SummaryStats, StatsError> {
    let total: f64 = pmf.iter().sum();
    if pmf.is_empty() || total <= 0.0 {
        return Err(StatsError::Empty);
    }
    let mean = pmf
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * p)
        .sum::<f64>()
        / total;
    let variance = pmf
        .iter()
        .enumerate()
        .map(|(k, p)| (k as f64 - mean).powi(2) * p)
        .sum::<f64>()
        / total;
    Ok(SummaryStats::from_moments(mean, variance))
}

/// Distribution of the sum of `copies` independent draws from `pmf`.
pub fn convolution_power(pmf: &[f64], copies: usize) -> Vec<f64> {
    let mut acc = vec![1.0];
    for _ in 0..copies {
        let mut next = vec![0.0; acc.len() + pmf.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, p) in pmf.iter().enumerate() {
                next[i + j] += a * p;
            }
        }
        acc = next;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceDistribution {
    Binomial { trials: usize, p: f64 },
    Normal { mean: f64, variance: f64 },
}

pub fn binomial_reference(trials: usize, p: f64) -> Result<ReferenceDistribution, StatsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StatsError::ProbabilityOutOfRange(p));
    }
    Ok(ReferenceDistribution::Binomial { trials, p })
}

pub fn normal_reference(mean: f64, variance: f64) -> Result<ReferenceDistribution, StatsError> {
    if variance.is_nan() || variance <= 0.0 || variance.is_infinite() {
        return Err(StatsError::NonPositiveVariance(variance));
    }
    Ok(ReferenceDistribution::Normal { mean, variance })
}

impl ReferenceDistribution {
    pub fn mean(&self) -> f64 {
        match *self {
            Self::Binomial { trials, p } => trials as f64 * p,
            Self::Normal { mean, .. } => mean,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Self::Binomial { trials, p } => trials as f64 * p * (1.0 - p),
            Self::Normal { variance, .. } => variance,
        }
    }

    /// `C(n, k) pᵏ (1−p)ⁿ⁻ᵏ` for binomials; zero off the support.
    pub fn pmf(&self, k: usize) -> f64 {
        match *self {
            Self::Binomial { trials, p } if k <= trials => {
                binomial_coefficient(trials, k)
                    * p.powi(k as i32)
                    * (1.0 - p).powi((trials - k) as i32)
            }
            Self::Binomial { .. } => 0.0,
            Self::Normal { .. } => self.pdf(k as f64),
        }
    }

    /// Density for normals; the point mass for binomials.
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Binomial { .. } => {
                if x >= 0.0 && x.fract() == 0.0 {
                    self.pmf(x as usize)
                } else {
                    0.0
                }
            }
            Self::Normal { mean, variance } => {
                (-(x - mean).powi(2) / (2.0 * variance)).exp()
                    / (2.0 * std::f64::consts::PI * variance).sqrt()
            }
        }
    }

    /// Probabilities of the integer bins `0..=max`.
    ///
    /// A normal is binned as `(k − ½, k + ½]` with the two tails folded into
    /// the end bins so the result sums to one.
    pub fn bin_probabilities(&self, max: usize) -> Vec<f64> {
        match *self {
            Self::Binomial { .. } => (0..=max).map(|k| self.pmf(k)).collect(),
            Self::Normal { mean, variance } => {
                let normal = Normal::new(mean, variance.sqrt()).expect("variance validated");
                let edge = |k: usize| normal.cdf(k as f64 + 0.5);
                (0..=max)
                    .map(|k| {
                        let upper = if k == max { 1.0 } else { edge(k) };
                        let lower = if k == 0 { 0.0 } else { edge(k - 1) };
                        upper - lower
                    })
                    .collect()
            }
        }
    }
}

fn binomial_coefficient(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `½ Σ |pᵢ − qᵢ|`, padding the shorter support with zeros.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub total_variation: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    /// Chi-square value with right-tail mass [`CHI_SQUARE_ALPHA`].
    pub critical_value: f64,
    pub exceeds_critical: bool,
}

/// Pearson goodness of fit of `observed` counts against `expected`
/// probabilities on the same bins.
///
/// Bins with zero expected probability are first merged into the nearest bin
/// with nonzero expectation (the lower one on ties).
pub fn compare_histogram(observed: &[u64], expected: &[f64]) -> Result<Comparison, StatsError> {
    if observed.len() != expected.len() {
        return Err(StatsError::SupportMismatch(observed.len(), expected.len()));
    }
    let shots: u64 = observed.iter().sum();
    if shots == 0 {
        return Err(StatsError::Empty);
    }
    let frequencies: Vec<f64> = observed.iter().map(|&n| n as f64 / shots as f64).collect();
    let total_variation = total_variation(&frequencies, expected);

    let (observed, expected) = pool_empty_bins(observed, expected)?;
    let chi_square: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(&o, &p)| {
            let e = p * shots as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let degrees_of_freedom = observed.len().saturating_sub(1);
    let critical_value = if degrees_of_freedom == 0 {
        f64::INFINITY
    } else {
        ChiSquared::new(degrees_of_freedom as f64)
            .expect("positive degrees of freedom")
            .inverse_cdf(1.0 - CHI_SQUARE_ALPHA)
    };
    Ok(Comparison {
        total_variation,
        chi_square,
        degrees_of_freedom,
        critical_value,
        exceeds_critical: chi_square > critical_value,
    })
}

fn pool_empty_bins(observed: &[u64], expected: &[f64]) -> Result<(Vec<u64>, Vec<f64>), StatsError> {
    let live: Vec<usize> = (0..expected.len()).filter(|&i| expected[i] > 0.0).collect();
    if live.is_empty() {
        return Err(StatsError::NoExpectedMass);
    }
    let mut pooled_obs = vec![0u64; live.len()];
    let pooled_exp: Vec<f64> = live.iter().map(|&i| expected[i]).collect();
    for (i, &o) in observed.iter().enumerate() {
        let target = live
            .iter()
            .enumerate()
            .min_by_key(|(_, &j)| j.abs_diff(i))
            .map(|(slot, _)| slot)
            .expect("nonempty");
        pooled_obs[target] += o;
    }
    Ok((pooled_obs, pooled_exp))
}

/// Decoded bin probabilities of an exact board distribution, plus the mass
/// that failed to decode.
pub fn decode_distribution(dist: &OutcomeDistribution, levels: usize) -> (Vec<f64>, f64) {
    let mut bins = vec![0.0; levels + 1];
    let mut rejected = 0.0;
    for (bits, p) in dist.iter() {
        match decode_one_hot(bits, levels) {
            Ok(k) => bins[k] += p,
            Err(_) => rejected += p,
        }
    }
    (bins, rejected)
}

/// Decoded bin counts of a sampled histogram, plus the outcomes that failed
/// to decode with their counts.
pub fn decode_histogram(hist: &Histogram, levels: usize) -> (Vec<u64>, Vec<(String, u64)>) {
    let mut bins = vec![0u64; levels + 1];
    let mut rejected = Vec::new();
    for (bits, n) in hist.iter() {
        match decode_one_hot(bits, levels) {
            Ok(k) => bins[k] += n,
            Err(_) => rejected.push((bits.to_owned(), n)),
        }
    }
    (bins, rejected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Renders a 10-bit register with a single hot classical index.
    fn hot(index: usize) -> String {
        (0..10)
            .rev()
            .map(|i| if i == index { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn decoding_ends_of_the_board() {
        assert_eq!(decode_one_hot(&hot(1), 4), Ok(0));
        assert_eq!(decode_one_hot(&hot(9), 4), Ok(4));
        assert_eq!(decode_one_hot(&hot(5), 4), Ok(2));
    }

    #[test]
    fn decoding_errors() {
        assert_eq!(
            decode_one_hot("0000001010", 4),
            Err(DecodeError::MultipleHotBits(2))
        );
        assert_eq!(decode_one_hot("0000000000", 4), Err(DecodeError::NoHotBit));
        assert_eq!(
            decode_one_hot(&hot(4), 4),
            Err(DecodeError::EvenPosition(4))
        );
        assert_eq!(
            decode_one_hot("0010", 4),
            Err(DecodeError::Length {
                expected: 10,
                found: 4
            })
        );
        assert_eq!(decode_one_hot("000000001x", 4), Err(DecodeError::NotBinary));
    }

    #[test]
    fn control_bit_is_ignored() {
        assert_eq!(decode_one_hot("0000000011", 4), Ok(0));
        assert_eq!(decode_one_hot("0000000001", 4), Err(DecodeError::NoHotBit));
    }

    #[test]
    fn block_sums() {
        let fours = DecodedSamples::new(vec![4; 8], 4).unwrap();
        assert_eq!(rescale_blocks(&fours, 8).unwrap(), vec![32]);
        let zeros = DecodedSamples::new(vec![0; 8], 4).unwrap();
        assert_eq!(rescale_blocks(&zeros, 8).unwrap(), vec![0]);
        let nine = DecodedSamples::new(vec![1; 9], 4).unwrap();
        assert_eq!(rescale_blocks(&nine, 8).unwrap(), vec![8]);
        assert_eq!(rescale_blocks(&nine, 0), Err(StatsError::ZeroBlock));
        assert!(DecodedSamples::new(vec![5], 4).is_err());
    }

    #[test]
    fn population_moments() {
        let s = summary_stats([0.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.variance, 4.0);
        assert_eq!(s.std_dev, 2.0);
        let flat = summary_stats([3u32; 7]).unwrap();
        assert_eq!(flat.variance, 0.0);
        assert_eq!(summary_stats(Vec::<f64>::new()), Err(StatsError::Empty));
    }

    #[test]
    fn binomial_references() {
        let b = binomial_reference(4, 0.5).unwrap();
        let pmf = b.bin_probabilities(4);
        for (got, want) in pmf.iter().zip([1.0, 4.0, 6.0, 4.0, 1.0]) {
            assert_abs_diff_eq!(*got, want / 16.0, epsilon = 1e-15);
        }
        let b2 = binomial_reference(2, 0.5).unwrap().bin_probabilities(2);
        assert_eq!(b2, vec![0.25, 0.5, 0.25]);
        let point = binomial_reference(6, 0.0).unwrap().bin_probabilities(6);
        assert_eq!(point[0], 1.0);
        assert!(point[1..].iter().all(|&p| p == 0.0));
        assert!(binomial_reference(3, 1.5).is_err());
        assert!(binomial_reference(3, -0.1).is_err());
    }

    #[test]
    fn binomial_pmf_sums_to_one() {
        for n in [1, 5, 17, 40] {
            for p in [0.1, 0.5, 0.75] {
                let total: f64 = binomial_reference(n, p)
                    .unwrap()
                    .bin_probabilities(n)
                    .iter()
                    .sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn normal_bins_cover_all_mass() {
        let r = normal_reference(16.0, 8.0).unwrap();
        let bins = r.bin_probabilities(32);
        assert_abs_diff_eq!(bins.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert!(bins[16] > bins[15] && bins[16] > bins[17]);
        assert!(normal_reference(0.0, 0.0).is_err());
        assert_abs_diff_eq!(
            r.pdf(16.0),
            1.0 / (16.0 * std::f64::consts::PI).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn comparing_a_distribution_with_itself() {
        let p = binomial_reference(4, 0.5).unwrap().bin_probabilities(4);
        assert_eq!(total_variation(&p, &p), 0.0);
        let counts = [1u64, 4, 6, 4, 1];
        let cmp = compare_histogram(&counts, &p).unwrap();
        assert_abs_diff_eq!(cmp.total_variation, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cmp.chi_square, 0.0, epsilon = 1e-12);
        assert_eq!(cmp.degrees_of_freedom, 4);
        assert!(!cmp.exceeds_critical);
    }

    #[test]
    fn chi_square_critical_value() {
        // Upper 0.1% point of chi-square with 3 degrees of freedom.
        let p = &[0.25; 4];
        let cmp = compare_histogram(&[250, 250, 250, 250], p).unwrap();
        assert_eq!(cmp.degrees_of_freedom, 3);
        assert_abs_diff_eq!(cmp.critical_value, 16.266236, epsilon = 1e-5);
        let skewed = compare_histogram(&[400, 200, 200, 200], p).unwrap();
        assert_abs_diff_eq!(skewed.chi_square, 120.0, epsilon = 1e-9);
        assert!(skewed.exceeds_critical);
    }

    #[test]
    fn empty_expected_bins_pool_into_nearest_neighbour() {
        // Bin 0 has no mass; its observation joins bin 1.
        let (obs, exp) = pool_empty_bins(&[3, 5, 2], &[0.0, 0.5, 0.5]).unwrap();
        assert_eq!(obs, vec![8, 2]);
        assert_eq!(exp, vec![0.5, 0.5]);
        // Equidistant: the lower neighbour wins.
        let (obs, _) = pool_empty_bins(&[1, 1, 1], &[0.5, 0.0, 0.5]).unwrap();
        assert_eq!(obs, vec![2, 1]);
        assert_eq!(
            pool_empty_bins(&[1], &[0.0]),
            Err(StatsError::NoExpectedMass)
        );
    }

    #[test]
    fn convolution_matches_binomial() {
        let coin = [0.5, 0.5];
        let sum = convolution_power(&coin, 6);
        let want = binomial_reference(6, 0.5).unwrap().bin_probabilities(6);
        assert!(total_variation(&sum, &want) < 1e-15);
        let s = distribution_stats(&sum).unwrap();
        assert_abs_diff_eq!(s.mean, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.variance, 1.5, epsilon = 1e-12);
    }
}
