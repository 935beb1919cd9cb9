//! Reproducible encode/decode experiments driven by one JSON config.
//!
//! Every artifact written by [`run_pipeline`] is a function of the config
//! alone: no timings, absolute paths or thread counts end up in the files.

use std::path::{Path, PathBuf};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{bfs_distances, validate_closed_pseudomanifold, FVector, VertexId};
use crate::decoder::{calibrate_params, recover_permutation, Calibration, DecodeError, DecoderThresholds};
use crate::encoder::{encode, ConstructionParams, EncodeError, Encoded, GroundTruth};
use crate::generators::{cell600_boundary, icosahedron};
use crate::{flagcheck, io};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Io(#[from] io::IoError),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
    #[error("file system: {0}")]
    Fs(#[from] std::io::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationLevel {
    /// Decode only.
    #[default]
    Fast,
    /// Also check fns and closed-pseudomanifold on every encoded complex.
    Full,
    /// `Full`, plus exhaustive oracle checks on the building blocks.
    BruteForceOracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default)]
    pub params: ConstructionParams,
    pub k: usize,
    /// One-based permutations to encode; empty means all of `S_k` for
    /// `k ≤ 4`, otherwise `samples` random ones.
    #[serde(default)]
    pub permutations: Vec<Vec<usize>>,
    #[serde(default)]
    pub samples: usize,
    /// Random vertex relabelings decoded per permutation.
    #[serde(default = "one")]
    pub relabelings: usize,
    /// Fixed thresholds; calibrated when absent.
    #[serde(default)]
    pub thresholds: Option<DecoderThresholds>,
    #[serde(default)]
    pub verification: VerificationLevel,
    pub output_dir: PathBuf,
    /// Write complexes as JSON instead of text.
    #[serde(default)]
    pub json: bool,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<ExperimentConfig, ExperimentError> {
        serde_json::from_str(s).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    /// The permutations this config covers, in run order.
    pub fn permutations(&self) -> Result<Vec<Vec<usize>>, ExperimentError> {
        if self.k == 0 {
            return Err(ExperimentError::Config("k must be positive".into()));
        }
        if !self.permutations.is_empty() {
            for p in &self.permutations {
                if p.len() != self.k {
                    return Err(ExperimentError::Config(format!("permutation {p:?} does not have length {}", self.k)));
                }
            }
            return Ok(self.permutations.clone());
        }
        if self.k <= 4 {
            return Ok((1..=self.k).permutations(self.k).collect());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut p: Vec<usize> = (1..=self.k).collect();
        for _ in 0..self.samples.max(1) {
            p.shuffle(&mut rng);
            out.push(p.clone());
        }
        Ok(out)
    }
}

/// Measured `d(u_i, v_j)` facts for one encoded complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceFacts {
    pub distances: Vec<Vec<u32>>,
    /// Largest `d(u_i, v_σ(i))` over `σ(i) ≠ i`.
    pub max_match: Option<u32>,
    /// Smallest `d(u_i, v_j)` over `j ∉ {i, σ(i)}`.
    pub min_nonmatch: Option<u32>,
    pub within_thresholds: bool,
}

pub fn distance_facts(enc: &Encoded, thr: &DecoderThresholds) -> DistanceFacts {
    let g = enc.complex.skeleton_graph();
    let t = &enc.truth;
    let distances: Vec<Vec<u32>> = t
        .u_centers
        .par_iter()
        .map(|&u| {
            let d = bfs_distances(&g, u, None);
            t.v_centers.iter().map(|&v| d[v as usize]).collect()
        })
        .collect();
    let (mut max_match, mut min_nonmatch) = (None::<u32>, None::<u32>);
    for (i, row) in distances.iter().enumerate() {
        let target = t.sigma[i] - 1;
        for (j, &d) in row.iter().enumerate() {
            if j == target && j != i {
                max_match = Some(max_match.map_or(d, |m| m.max(d)));
            } else if j != i && j != target {
                min_nonmatch = Some(min_nonmatch.map_or(d, |m| m.min(d)));
            }
        }
    }
    let within_thresholds =
        max_match.is_none_or(|m| m <= thr.match_dist) && min_nonmatch.is_none_or(|m| m >= thr.nonmatch_dist);
    DistanceFacts { distances, max_match, min_nonmatch, within_thresholds }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub sigma: Vec<usize>,
    pub artifact: String,
    pub roles: String,
    pub sha256: String,
    pub f_vector: FVector,
    pub chi: i64,
    pub symbolic_chi: String,
    pub fns: Option<bool>,
    pub manifold: Option<bool>,
    /// Decoded permutation per relabeling, or the decoder error.
    pub decoded: Vec<Result<Vec<usize>, String>>,
    pub facts: DistanceFacts,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseSummary {
    pub copies: usize,
    pub vertices: usize,
    pub diameter: u32,
    pub link_diameter: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub config: ExperimentConfig,
    pub base: BaseSummary,
    pub calibration: Option<Calibration>,
    pub thresholds: DecoderThresholds,
    pub oracle_checks: Option<bool>,
    pub runs: Vec<RunRecord>,
    pub all_ok: bool,
}

fn file_name(sigma: &[usize]) -> String {
    sigma.iter().join("-")
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Uniform random vertex permutation for relabeling `r` of permutation `p`.
pub fn relabeling(seed: u64, p: usize, r: usize, n: usize) -> Vec<VertexId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((p as u64) << 32) | r as u64);
    let mut perm: Vec<VertexId> = (0..n as VertexId).collect();
    perm.shuffle(&mut rng);
    perm
}

fn oracle_checks() -> bool {
    let ico = icosahedron();
    let (cell, _) = cell600_boundary();
    [ico, cell].iter().all(|k| {
        flagcheck::oracle::is_flag(k) == flagcheck::is_flag(k).0
            && flagcheck::oracle::has_induced_square(k) == flagcheck::has_induced_square(k).0
    })
}

/// Runs the whole experiment, writing artifacts into `output_dir`.
/// `progress` receives human-readable status lines.
pub fn run_pipeline(
    cfg: &ExperimentConfig,
    mut progress: impl FnMut(&str),
) -> Result<PipelineSummary, ExperimentError> {
    let perms = cfg.permutations()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let dir = &cfg.output_dir;
    let base = cfg.params.base()?;
    progress(&format!(
        "base block: {} copies, {} vertices, diameter {}",
        base.copies,
        base.vertex_count(),
        base.diameter
    ));
    io::write_complex(&dir.join(artifact_name("base", cfg.json)), &base.complex, cfg.json)?;

    let (calibration, thresholds) = match cfg.thresholds {
        Some(t) => (None, t),
        None => {
            progress("calibrating on the cyclic permutation of three points");
            let c = calibrate_params(&cfg.params, &base)?;
            let t = c.thresholds;
            (Some(c), t)
        }
    };
    std::fs::write(dir.join("thresholds.json"), serde_json::to_string_pretty(&thresholds).expect("serializable"))?;

    let oracle = (cfg.verification == VerificationLevel::BruteForceOracle).then(oracle_checks);
    let mut runs = Vec::new();
    for (pi, sigma) in perms.iter().enumerate() {
        progress(&format!("encoding {}", file_name(sigma)));
        let enc = encode(sigma, &cfg.params, &base)?;
        let stem = format!("t_{}", file_name(sigma));
        let artifact = artifact_name(&stem, cfg.json);
        let body = if cfg.json { io::to_json_string(&enc.complex) } else { io::canonical_serialize(&enc.complex) };
        std::fs::write(dir.join(&artifact), &body)?;
        let roles = format!("{stem}.roles.json");
        write_truth(&dir.join(&roles), &enc.truth)?;

        let (fns, manifold) = if cfg.verification == VerificationLevel::Fast {
            (None, None)
        } else {
            progress("verifying");
            (
                Some(flagcheck::is_fns(&enc.complex)),
                Some(validate_closed_pseudomanifold(&enc.complex).is_manifold_like()),
            )
        };
        let facts = distance_facts(&enc, &thresholds);
        let mut decoded = Vec::new();
        for r in 0..cfg.relabelings {
            progress(&format!("decoding relabeling {}", r + 1));
            let perm = relabeling(cfg.seed, pi, r, enc.complex.vertex_count());
            let g = enc.complex.relabel(&perm)?.skeleton_graph();
            decoded.push(
                recover_permutation(&g, &thresholds, sigma.len()).map(|rep| rep.sigma).map_err(|e| e.to_string()),
            );
        }
        let ok = decoded.iter().all(|d| d.as_ref() == Ok(sigma))
            && fns != Some(false)
            && manifold != Some(false)
            && facts.within_thresholds;
        runs.push(RunRecord {
            sigma: sigma.clone(),
            artifact,
            roles,
            sha256: sha256_hex(body.as_bytes()),
            f_vector: enc.complex.f_vector(),
            chi: enc.complex.euler_characteristic(),
            symbolic_chi: enc.truth.symbolic_chi.to_string(),
            fns,
            manifold,
            decoded,
            facts,
            ok,
        });
    }
    let all_ok = runs.iter().all(|r| r.ok) && oracle != Some(false);
    // The output location is not part of the result.
    let echo = ExperimentConfig { output_dir: PathBuf::new(), ..cfg.clone() };
    let summary = PipelineSummary {
        config: echo,
        base: BaseSummary {
            copies: base.copies,
            vertices: base.vertex_count(),
            diameter: base.diameter,
            link_diameter: base.link_diameter,
        },
        calibration,
        thresholds,
        oracle_checks: oracle,
        runs,
        all_ok,
    };
    std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary).expect("serializable"))?;
    Ok(summary)
}

/// [`run_pipeline`] on a dedicated pool of `workers` threads.
pub fn run_with_workers(
    cfg: &ExperimentConfig,
    workers: usize,
    progress: impl FnMut(&str) + Send,
) -> Result<PipelineSummary, ExperimentError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    pool.install(|| run_pipeline(cfg, progress))
}

fn artifact_name(stem: &str, json: bool) -> String {
    format!("{stem}.{}", if json { "json" } else { "cplx" })
}

pub fn write_truth(path: &Path, truth: &GroundTruth) -> Result<(), ExperimentError> {
    std::fs::write(path, serde_json::to_string_pretty(truth).expect("serializable"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_default_to_the_symmetric_group() {
        let cfg = ExperimentConfig::from_json(r#"{"seed": 1, "k": 3, "output_dir": "x"}"#).unwrap();
        let p = cfg.permutations().unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![1, 2, 3]);
        assert_eq!(p[5], vec![3, 2, 1]);
        assert_eq!(cfg.relabelings, 1);
        assert!(ExperimentConfig::from_json(r#"{"seed": 1, "k": 3, "output_dir": "x", "bogus": 1}"#).is_err());
    }

    #[test]
    fn relabelings_are_seeded() {
        assert_eq!(relabeling(7, 0, 0, 50), relabeling(7, 0, 0, 50));
        assert_ne!(relabeling(7, 0, 0, 50), relabeling(7, 0, 1, 50));
        let mut p = relabeling(7, 2, 3, 50);
        p.sort_unstable();
        assert_eq!(p, (0..50).collect::<Vec<_>>());
    }
}
