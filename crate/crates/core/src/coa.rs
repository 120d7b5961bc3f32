//! Ciphertext-only recovery of a Type II pattern order.
//!
//! Each recorded pattern leaves a distribution of intensities over many
//! ciphertexts. Simulating the published patterns on exemplar images of the
//! same category gives reference distributions; rows are paired by nearest
//! histogram.

use ndarray::{Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpiError};
use crate::system::{images_to_matrix, ObjectImage, PatternKey, PermutationKey};

/// Uniform bins over `[range_low, range_high]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHistogramConfig", into = "RawHistogramConfig")]
pub struct HistogramConfig {
    range_low: f64,
    range_high: f64,
    bin_size: f64,
    bins: usize,
}

#[derive(Serialize, Deserialize)]
struct RawHistogramConfig {
    range_low: f64,
    range_high: f64,
    bin_size: f64,
}

impl TryFrom<RawHistogramConfig> for HistogramConfig {
    type Error = SpiError;
    fn try_from(r: RawHistogramConfig) -> Result<Self> {
        Self::new(r.range_low, r.range_high, r.bin_size)
    }
}

impl From<HistogramConfig> for RawHistogramConfig {
    fn from(c: HistogramConfig) -> Self {
        Self { range_low: c.range_low, range_high: c.range_high, bin_size: c.bin_size }
    }
}

impl HistogramConfig {
    pub fn new(range_low: f64, range_high: f64, bin_size: f64) -> Result<Self> {
        if !(range_low.is_finite() && range_high.is_finite() && bin_size.is_finite()) {
            return Err(SpiError::InvalidConfig("histogram range and bin size must be finite".into()));
        }
        if range_high <= range_low || bin_size <= 0.0 {
            return Err(SpiError::InvalidConfig(format!(
                "need range_high > range_low and bin_size > 0, got [{range_low}, {range_high}] / {bin_size}"
            )));
        }
        let ratio = (range_high - range_low) / bin_size;
        let bins = ratio.round();
        if bins < 1.0 || (ratio - bins).abs() > 1e-9 * ratio.max(1.0) {
            return Err(SpiError::InvalidConfig(format!(
                "range width {} is not a whole number of {bin_size}-wide bins",
                range_high - range_low
            )));
        }
        Ok(Self { range_low, range_high, bin_size, bins: bins as usize })
    }

    pub fn range_low(&self) -> f64 {
        self.range_low
    }

    pub fn range_high(&self) -> f64 {
        self.range_high
    }

    pub fn bin_size(&self) -> f64 {
        self.bin_size
    }

    pub fn bin_count(&self) -> usize {
        self.bins
    }

    /// Lower and upper edge of bin `i`.
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let lo = self.range_low + i as f64 * self.bin_size;
        let hi = if i + 1 == self.bins { self.range_high } else { self.range_low + (i + 1) as f64 * self.bin_size };
        (lo, hi)
    }

    /// Bin for `v`; out-of-range values land in the edge bins.
    pub fn bin_of(&self, v: f64) -> usize {
        if v.is_nan() || v < self.range_low {
            return 0;
        }
        let i = ((v - self.range_low) / self.bin_size).floor();
        if i >= self.bins as f64 {
            self.bins - 1
        } else {
            i as usize
        }
    }
}

impl Default for HistogramConfig {
    /// `[0, 15]` in bins of 0.5.
    fn default() -> Self {
        Self::new(0.0, 15.0, 0.5).expect("valid default")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntensityHistogram {
    config: HistogramConfig,
    counts: Vec<u64>,
}

impl Eq for HistogramConfig {}

impl IntensityHistogram {
    pub fn config(&self) -> &HistogramConfig {
        &self.config
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn build_histogram(values: &[f64], cfg: &HistogramConfig) -> Result<IntensityHistogram> {
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(SpiError::NonFinite(i));
    }
    let mut counts = vec![0u64; cfg.bin_count()];
    for &v in values {
        counts[cfg.bin_of(v)] += 1;
    }
    Ok(IntensityHistogram { config: *cfg, counts })
}

fn same_config(a: &IntensityHistogram, b: &IntensityHistogram) -> Result<()> {
    if a.config != b.config {
        return Err(SpiError::InvalidConfig("histograms were built with different bin settings".into()));
    }
    Ok(())
}

/// Euclidean distance between raw count vectors.
pub fn histogram_distance(a: &IntensityHistogram, b: &IntensityHistogram) -> Result<f64> {
    same_config(a, b)?;
    Ok(a.counts
        .iter()
        .zip(&b.counts)
        .map(|(&x, &y)| (x as f64 - y as f64).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Euclidean distance between bin frequencies (counts divided by totals).
pub fn frequency_distance(a: &IntensityHistogram, b: &IntensityHistogram) -> Result<f64> {
    same_config(a, b)?;
    let (ta, tb) = (a.total().max(1) as f64, b.total().max(1) as f64);
    Ok(a.counts
        .iter()
        .zip(&b.counts)
        .map(|(&x, &y)| (x as f64 / ta - y as f64 / tb).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Intensities of every exemplar under every published pattern, `M×Q′`.
pub fn simulate_exemplar_intensities(exemplars: &[ObjectImage], originals: &PatternKey) -> Result<Array2<f64>> {
    if let Some(bad) = exemplars.iter().find(|e| e.len() != originals.pixels()) {
        return Err(SpiError::DimensionMismatch {
            what: "exemplar pixels",
            expected: originals.pixels(),
            got: bad.len(),
        });
    }
    if exemplars.is_empty() {
        return Ok(Array2::zeros((originals.patterns(), 0)));
    }
    let e = images_to_matrix(exemplars);
    Ok(originals.to_f64().dot(&e.t()))
}

#[derive(Debug, Clone)]
pub struct CoaResult {
    pub permutation: PermutationKey,
    /// Entry `(m, j)`: distance between recorded row `m` and exemplar row `j`.
    pub distance_matrix: Array2<f64>,
    /// Set when the two sample counts differ and frequencies were compared.
    pub normalized: bool,
}

/// One histogram per matrix row.
pub fn row_histograms(rows: ArrayView2<'_, f64>, cfg: &HistogramConfig) -> Result<Vec<IntensityHistogram>> {
    rows.axis_iter(Axis(0))
        .map(|r| build_histogram(&r.to_vec(), cfg))
        .collect()
}

pub fn recover_permutation_coa(
    actual: ArrayView2<'_, f64>,
    exemplar: ArrayView2<'_, f64>,
    cfg: &HistogramConfig,
) -> Result<CoaResult> {
    let m = actual.nrows();
    if exemplar.nrows() != m {
        return Err(SpiError::DimensionMismatch { what: "exemplar pattern rows", expected: m, got: exemplar.nrows() });
    }
    if m == 0 || actual.ncols() == 0 || exemplar.ncols() == 0 {
        return Err(SpiError::InvalidDimensions(format!(
            "need at least one pattern and one sample per side, got {m}x{} and {m}x{}",
            actual.ncols(),
            exemplar.ncols()
        )));
    }
    let normalized = actual.ncols() != exemplar.ncols();
    let ha = row_histograms(actual, cfg)?;
    let he = row_histograms(exemplar, cfg)?;
    let mut distance_matrix = Array2::zeros((m, m));
    for (i, a) in ha.iter().enumerate() {
        for (j, e) in he.iter().enumerate() {
            distance_matrix[[i, j]] = if normalized { frequency_distance(a, e)? } else { histogram_distance(a, e)? };
        }
    }
    let permutation = greedy_assignment(distance_matrix.view())?;
    Ok(CoaResult { permutation, distance_matrix, normalized })
}

/// Row by row in ascending order, take the cheapest unused column; ties go to
/// the lowest column index.
pub fn greedy_assignment(cost: ArrayView2<'_, f64>) -> Result<PermutationKey> {
    let m = cost.nrows();
    if cost.ncols() != m {
        return Err(SpiError::DimensionMismatch { what: "cost matrix columns", expected: m, got: cost.ncols() });
    }
    let mut used = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for row in cost.axis_iter(Axis(0)) {
        let mut best: Option<(usize, f64)> = None;
        for (j, &c) in row.iter().enumerate() {
            if used[j] {
                continue;
            }
            // NaN costs rank last
            let c = if c.is_nan() { f64::INFINITY } else { c };
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((j, c));
            }
        }
        let (j, _) = best.expect("an unused column remains");
        used[j] = true;
        order.push(j);
    }
    PermutationKey::new(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{encrypt, generate_key};
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn four_bin_example() {
        let cfg = HistogramConfig::new(0.0, 20.0, 5.0).unwrap();
        let mut values = Vec::new();
        values.extend(std::iter::repeat(2.5).take(7));
        values.extend(std::iter::repeat(7.0).take(13));
        values.extend(std::iter::repeat(12.0).take(16));
        values.extend(std::iter::repeat(17.0).take(7));
        values.push(20.0);
        let h = build_histogram(&values, &cfg).unwrap();
        assert_eq!(h.counts(), &[7, 13, 16, 8]);
    }

    #[test]
    fn boundaries_and_outliers() {
        let cfg = HistogramConfig::new(0.0, 10.0, 5.0).unwrap();
        let h = build_histogram(&[5.0, 0.0, 10.0, -3.0, 99.0, f64::INFINITY], &cfg).unwrap();
        assert_eq!(h.counts(), &[2, 4]);
        assert_eq!(build_histogram(&[], &cfg).unwrap().counts(), &[0, 0]);
        assert!(build_histogram(&[f64::NAN], &cfg).is_err());
    }

    #[test]
    fn default_config() {
        let c = HistogramConfig::default();
        assert_eq!(c.bin_count(), 30);
        assert_eq!(c.bin_edges(29), (14.5, 15.0));
    }

    #[test]
    fn invalid_configs() {
        assert!(HistogramConfig::new(1.0, 1.0, 0.5).is_err());
        assert!(HistogramConfig::new(0.0, 1.0, 0.0).is_err());
        assert!(HistogramConfig::new(0.0, 1.0, 0.3).is_err());
        assert!(HistogramConfig::new(0.0, f64::NAN, 0.5).is_err());
        assert!(HistogramConfig::new(0.0, 0.9, 0.3).is_ok());
        let json = serde_json::to_string(&HistogramConfig::default()).unwrap();
        assert_eq!(json, r#"{"range_low":0.0,"range_high":15.0,"bin_size":0.5}"#);
        assert!(serde_json::from_str::<HistogramConfig>(r#"{"range_low":0,"range_high":1,"bin_size":2}"#).is_err());
    }

    #[test]
    fn distances() {
        let cfg = HistogramConfig::new(0.0, 2.0, 1.0).unwrap();
        let a = build_histogram(&[0.5], &cfg).unwrap();
        let b = build_histogram(&[1.5], &cfg).unwrap();
        assert_eq!(histogram_distance(&a, &a).unwrap(), 0.0);
        assert!((histogram_distance(&a, &b).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let other = build_histogram(&[0.5], &HistogramConfig::new(0.0, 4.0, 2.0).unwrap()).unwrap();
        assert!(histogram_distance(&a, &other).is_err());
        let b2 = build_histogram(&[0.5, 0.5], &cfg).unwrap();
        assert_eq!(frequency_distance(&a, &b2).unwrap(), 0.0);
    }

    #[test]
    fn exemplar_simulation_matches_encrypt() {
        let key = generate_key(6, 16, 4, 3).unwrap();
        let ex = crate::io::generate_smooth_images(5, 4, 4, 9).unwrap();
        let sim = simulate_exemplar_intensities(&ex, &key).unwrap();
        for (q, img) in ex.iter().enumerate() {
            let c = encrypt(img, &key).unwrap();
            for m in 0..6 {
                assert!((sim[[m, q]] - c.values()[m]).abs() < 1e-12);
            }
        }
        let zeros = vec![ObjectImage::filled(4, 4, 0.0).unwrap(); 3];
        assert!(simulate_exemplar_intensities(&zeros, &key).unwrap().iter().all(|&v| v == 0.0));
        let ones = PatternKey::from_rows(2, 1, &[vec![1, 1]]).unwrap();
        let img = ObjectImage::new(2, 1, vec![0.25, 0.5]).unwrap();
        assert_eq!(simulate_exemplar_intensities(&[img], &ones).unwrap()[[0, 0]], 0.75);
        assert!(simulate_exemplar_intensities(&ex, &generate_key(6, 9, 3, 3).unwrap()).is_err());
    }

    #[test]
    fn perfect_statistics_recover_the_order() {
        // row i of the exemplar matrix is constant at i, so every histogram differs
        let exemplar = Array2::from_shape_fn((5, 20), |(i, _)| i as f64 * 3.0);
        let perm = PermutationKey::new(vec![3, 0, 4, 1, 2]).unwrap();
        let actual = exemplar.select(Axis(0), perm.order());
        let r = recover_permutation_coa(actual.view(), exemplar.view(), &HistogramConfig::default()).unwrap();
        assert_eq!(r.permutation, perm);
        assert!(!r.normalized);
    }

    #[test]
    fn greedy_ties_go_low() {
        let cost = array![[1.0, 1.0], [0.0, 0.0]];
        assert_eq!(greedy_assignment(cost.view()).unwrap().order(), &[0, 1]);
        let cost = array![[f64::NAN, 2.0], [0.0, 0.0]];
        assert_eq!(greedy_assignment(cost.view()).unwrap().order(), &[1, 0]);
    }

    #[test]
    fn unequal_sample_counts_are_normalized() {
        let a = Array2::from_shape_fn((2, 4), |(i, _)| i as f64 * 5.0);
        let e = Array2::from_shape_fn((2, 8), |(i, _)| (1 - i) as f64 * 5.0);
        let r = recover_permutation_coa(a.view(), e.view(), &HistogramConfig::default()).unwrap();
        assert!(r.normalized);
        assert_eq!(r.permutation.order(), &[1, 0]);
        assert!(recover_permutation_coa(a.view(), Array2::zeros((3, 4)).view(), &HistogramConfig::default()).is_err());
        assert!(recover_permutation_coa(a.view(), Array2::zeros((2, 0)).view(), &HistogramConfig::default()).is_err());
    }

    proptest! {
        #[test]
        fn mass_is_conserved(values in prop::collection::vec(-100.0f64..100.0, 0..200)) {
            let h = build_histogram(&values, &HistogramConfig::default()).unwrap();
            prop_assert_eq!(h.total() as usize, values.len());
        }

        #[test]
        fn distance_is_symmetric(a in prop::collection::vec(0.0f64..15.0, 0..60), b in prop::collection::vec(0.0f64..15.0, 0..60)) {
            let cfg = HistogramConfig::default();
            let (ha, hb) = (build_histogram(&a, &cfg).unwrap(), build_histogram(&b, &cfg).unwrap());
            prop_assert_eq!(histogram_distance(&ha, &hb).unwrap(), histogram_distance(&hb, &ha).unwrap());
        }

        #[test]
        fn always_a_bijection(m in 1usize..12, cols in 1usize..10, seed: u64, special in 0u8..3) {
            use rand::Rng;
            let mut rng = crate::system::seeded_rng(seed);
            let mut gen = |_| match special {
                0 => rng.gen_range(-5.0..20.0),
                1 => 3.0,
                _ => if rng.gen_bool(0.5) { f64::INFINITY } else { -1e300 },
            };
            let a = Array2::from_shape_fn((m, cols), |ij| gen(ij));
            let e = Array2::from_shape_fn((m, cols + 1), |ij| gen(ij));
            let r = recover_permutation_coa(a.view(), e.view(), &HistogramConfig::default()).unwrap();
            let mut seen = r.permutation.order().to_vec();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..m).collect::<Vec<_>>());
        }

        #[test]
        fn column_order_is_irrelevant(seed: u64) {
            use rand::seq::SliceRandom;
            use rand::Rng;
            let mut rng = crate::system::seeded_rng(seed);
            let a = Array2::from_shape_fn((6, 30), |_| rng.gen_range(0.0..15.0));
            let e = Array2::from_shape_fn((6, 30), |_| rng.gen_range(0.0..15.0));
            let base = recover_permutation_coa(a.view(), e.view(), &HistogramConfig::default()).unwrap();
            let mut shuffled = a.clone();
            for mut row in shuffled.rows_mut() {
                let mut v = row.to_vec();
                v.shuffle(&mut rng);
                row.assign(&ndarray::Array1::from(v));
            }
            let again = recover_permutation_coa(shuffled.view(), e.view(), &HistogramConfig::default()).unwrap();
            prop_assert_eq!(base.permutation, again.permutation);
        }
    }
}
