//! Encrypted single-pixel imaging as a cryptosystem, and two attacks on it.
//!
//! * [`system`]: keys, plaintexts, ciphertexts and the linear measurement model.
//! * [`solver`]: conjugate-gradient least squares, TV-regularized decryption,
//!   and the normalize-then-threshold step.
//! * [`kpa`]: known-plaintext recovery of the pattern key (Type I) and of the
//!   pattern order (Type II).
//! * [`coa`]: ciphertext-only recovery of the pattern order by histogram
//!   matching against exemplar images.
//! * [`metrics`]: correct rates and PSNR.
//! * [`io`]: PGM, IDX, key and ciphertext files, resizing, synthetic images.

pub mod coa;
pub mod error;
pub mod io;
pub mod kpa;
pub mod metrics;
pub mod solver;
pub mod system;

pub use error::{Result, SpiError};
pub use system::{
    encrypt, encrypt_many, generate_key, key_space_size, permute_key, Ciphertext, KeySpace,
    ObjectImage, PatternKey, PermutationKey, PlainCipherCorpus, Regime,
};
