//! The JSON experiment description shared by every subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spi_crack::coa::HistogramConfig;
use spi_crack::io::{format_seed, generate_smooth_images, parse_idx, parse_seed, read_pgm_dir, resize_image};
use spi_crack::solver::SolverConfig;
use spi_crack::{ObjectImage, Regime};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub regime: Regime,
    pub width: usize,
    pub height: usize,
    /// Number of illumination patterns M.
    pub patterns: usize,
    pub plaintexts: CorpusSource,
    pub exemplars: CorpusSource,
    /// `tv_weight` applies to `decrypt`; the attacks always solve without it.
    pub solver: SolverConfig,
    pub histogram: HistogramConfig,
    /// Master seed, hexadecimal.
    pub seed: String,
    pub out: PathBuf,
}

/// Where a set of images comes from. Images whose size differs from the
/// experiment's are resized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum CorpusSource {
    Synthetic { count: usize },
    PgmDir { path: PathBuf, #[serde(default)] count: Option<usize> },
    Idx { path: PathBuf, #[serde(default)] offset: usize, count: usize },
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            regime: Regime::TypeI,
            width: 32,
            height: 32,
            patterns: 717,
            plaintexts: CorpusSource::Synthetic { count: 4096 },
            exemplars: CorpusSource::Synthetic { count: 14000 },
            solver: SolverConfig::decrypt(),
            histogram: HistogramConfig::default(),
            seed: format_seed(1),
            out: PathBuf::from("out"),
        }
    }
}

/// Seeds derived from the master seed, one per role.
pub const SEED_ROLES: [&str; 4] = ["key", "permutation", "plaintexts", "exemplars"];

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }

    pub fn master_seed(&self) -> Result<u64, CliError> {
        parse_seed(&self.seed).ok_or_else(|| CliError::Validation(format!("seed {:?} is not hexadecimal", self.seed)))
    }

    /// Role seed: the master for `key`, otherwise a hash of master and role.
    pub fn seed_for(&self, role: &str) -> Result<u64, CliError> {
        let master = self.master_seed()?;
        let idx = SEED_ROLES
            .iter()
            .position(|r| *r == role)
            .expect("known seed role") as u64;
        Ok(if idx == 0 { master } else { splitmix(master ^ splitmix(idx)) })
    }

    pub fn seed_table(&self) -> Result<BTreeMap<String, String>, CliError> {
        SEED_ROLES
            .iter()
            .map(|r| Ok((r.to_string(), format_seed(self.seed_for(r)?))))
            .collect()
    }

    pub fn pixels(&self) -> usize {
        self.width * self.height
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.width == 0 || self.height == 0 || self.patterns == 0 {
            return Err(CliError::Validation(format!(
                "width, height and patterns must be positive, got {}x{} with M={}",
                self.width, self.height, self.patterns
            )));
        }
        self.master_seed()?;
        self.solver.validate().map_err(|e| CliError::Validation(e.to_string()))?;
        for source in [&self.plaintexts, &self.exemplars] {
            source.validate()?;
        }
        Ok(())
    }

    pub fn load_images(&self, source: &CorpusSource, role: &str) -> Result<Vec<ObjectImage>, CliError> {
        let seed = self.seed_for(role)?;
        let (w, h) = (self.width, self.height);
        let raw = match source {
            CorpusSource::Synthetic { count } => return Ok(generate_smooth_images(*count, w, h, seed)?),
            CorpusSource::PgmDir { path, count } => {
                let mut imgs = read_pgm_dir(path)?;
                if let Some(c) = count {
                    if imgs.len() < *c {
                        return Err(CliError::Validation(format!(
                            "{} holds {} images, config asks for {c}",
                            path.display(),
                            imgs.len()
                        )));
                    }
                    imgs.truncate(*c);
                }
                imgs
            }
            CorpusSource::Idx { path, offset, count } => {
                let all = parse_idx(path)?;
                if offset + count > all.len() {
                    return Err(CliError::Validation(format!(
                        "{} holds {} images, config asks for {count} from offset {offset}",
                        path.display(),
                        all.len()
                    )));
                }
                all[*offset..offset + count].to_vec()
            }
        };
        raw.iter()
            .map(|img| Ok(resize_image(img, w, h)?))
            .collect()
    }
}

impl CorpusSource {
    fn validate(&self) -> Result<(), CliError> {
        let path = match self {
            CorpusSource::Synthetic { .. } => return Ok(()),
            CorpusSource::PgmDir { path, .. } | CorpusSource::Idx { path, .. } => path,
        };
        if !path.exists() {
            return Err(CliError::Validation(format!("corpus path {} does not exist", path.display())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = ExperimentConfig::default();
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back.seed, c.seed);
        assert_eq!(back.plaintexts, c.plaintexts);
    }

    #[test]
    fn partial_documents_fill_defaults() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"regime":"TYPE2","width":8,"height":8,"patterns":64,
                "exemplars":{"source":"idx","path":"x","count":5}}"#,
        )
        .unwrap();
        assert_eq!(c.regime, Regime::TypeII);
        assert_eq!(c.solver, SolverConfig::decrypt());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"widht":8}"#).is_err());
    }

    #[test]
    fn role_seeds_are_distinct_and_stable() {
        let c = ExperimentConfig { seed: "2a".into(), ..Default::default() };
        assert_eq!(c.seed_for("key").unwrap(), 42);
        let seeds: Vec<u64> = SEED_ROLES.iter().map(|r| c.seed_for(r).unwrap()).collect();
        let mut dedup = seeds.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), seeds.len());
        assert_eq!(c.seed_for("plaintexts").unwrap(), c.clone().seed_for("plaintexts").unwrap());
    }
}
