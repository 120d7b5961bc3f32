//! Known-plaintext recovery of the pattern key.
//!
//! Swapping the roles of image and pattern turns `C_q(m) = Σ_n K(m,n) O_q(n)`
//! into one linear system per pattern: the plaintexts are the rows, pattern
//! `m` is the unknown and the `m`-th intensity of each ciphertext is the
//! right-hand side.

use ndarray::{Array2, Axis};

use crate::coa::greedy_assignment;
use crate::error::{Result, SpiError};
use crate::solver::{cgd_solve_many, normalize_binarize, SolverConfig};
use crate::system::{PatternKey, PermutationKey, PlainCipherCorpus};

#[derive(Debug, Clone)]
pub struct KpaResult {
    pub recovered_key: PatternKey,
    /// `‖A x − b‖ / ‖b‖` of each pattern's least-squares solve.
    pub per_pattern_residuals: Vec<f64>,
    pub iterations: Vec<usize>,
    pub config_echo: SolverConfig,
}

/// Recovers pattern `m` (zero-based) as a binary vector of length N.
pub fn recover_pattern(corpus: &PlainCipherCorpus, m: usize, cfg: &SolverConfig) -> Result<Vec<u8>> {
    if m >= corpus.patterns() {
        return Err(SpiError::IndexOutOfRange { index: m, len: corpus.patterns() });
    }
    let a = corpus.plaintext_matrix();
    let b = corpus.cipher_matrix();
    let out = cgd_solve_many(a.view(), b.slice(ndarray::s![.., m..m + 1]), cfg)?;
    normalize_binarize(&out.solutions.column(0).to_vec())
}

/// Recovers every pattern of a Type I key.
///
/// All patterns share one batched solve; each column comes out bit-identical
/// to [`recover_pattern`] for that index.
pub fn recover_key_type1(corpus: &PlainCipherCorpus, cfg: &SolverConfig) -> Result<KpaResult> {
    recover_patterns(corpus, &(0..corpus.patterns()).collect::<Vec<_>>(), cfg)
}

/// Like [`recover_key_type1`] restricted to the listed pattern indices; the
/// returned key has one row per index, in the given order.
pub fn recover_patterns(corpus: &PlainCipherCorpus, indices: &[usize], cfg: &SolverConfig) -> Result<KpaResult> {
    if let Some(&bad) = indices.iter().find(|&&i| i >= corpus.patterns()) {
        return Err(SpiError::IndexOutOfRange { index: bad, len: corpus.patterns() });
    }
    if indices.is_empty() {
        return Err(SpiError::InvalidDimensions("no pattern indices requested".into()));
    }
    let a = corpus.plaintext_matrix();
    let b = corpus.cipher_matrix().select(Axis(1), indices);
    let out = cgd_solve_many(a.view(), b.view(), cfg)?;
    let n = corpus.pixels();
    let mut bits = Array2::zeros((indices.len(), n));
    for (j, mut row) in bits.axis_iter_mut(Axis(0)).enumerate() {
        let binary = normalize_binarize(&out.solutions.column(j).to_vec())?;
        row.assign(&ndarray::Array1::from(binary));
    }
    let (w, h) = corpus.image_shape();
    Ok(KpaResult {
        recovered_key: PatternKey::new(w, h, bits)?,
        per_pattern_residuals: out.final_residuals,
        iterations: out.iterations,
        config_echo: *cfg,
    })
}

pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Assigns each recovered row, in ascending order, to the closest (Hamming)
/// original not yet taken; ties go to the lowest original index.
pub fn match_patterns_type2(recovered: &PatternKey, originals: &PatternKey) -> Result<PermutationKey> {
    if recovered.entries().dim() != originals.entries().dim() {
        return Err(SpiError::DimensionMismatch {
            what: "pattern key entries",
            expected: originals.entries().len(),
            got: recovered.entries().len(),
        });
    }
    let m = originals.patterns();
    let rec = recovered.entries();
    let org = originals.entries();
    let cost = Array2::from_shape_fn((m, m), |(i, j)| {
        rec.row(i).iter().zip(org.row(j)).filter(|(x, y)| x != y).count() as f64
    });
    greedy_assignment(cost.view())
}

/// Type II attack: recover the permuted patterns, then match them against
/// the published originals.
pub fn recover_permutation_type2(
    corpus: &PlainCipherCorpus,
    originals: &PatternKey,
    cfg: &SolverConfig,
) -> Result<(KpaResult, PermutationKey)> {
    if corpus.patterns() != originals.patterns() || corpus.pixels() != originals.pixels() {
        return Err(SpiError::DimensionMismatch {
            what: "published key entries",
            expected: corpus.patterns() * corpus.pixels(),
            got: originals.entries().len(),
        });
    }
    let kpa = recover_key_type1(corpus, cfg)?;
    let perm = match_patterns_type2(&kpa.recovered_key, originals)?;
    Ok((kpa, perm))
}
