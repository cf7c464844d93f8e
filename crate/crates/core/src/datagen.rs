//! Synthetic dataset construction: configuration samplers, oracle and zoo
//! labeling, split generation, and on-disk persistence.
//!
//! A generated dataset mirrors the scarce-label regime: every configuration
//! carries all zoo energies, a small random subset additionally carries the
//! oracle energy as its high-fidelity label. The full oracle labeling is
//! written to a sealed side file that only ablation and reporting tooling may
//! read; no training path touches it.

pub mod lattice {
    use crate::atoms::Configuration;

    /// Conventional cubic diamond cell (8 atoms) tiled `repeats` times.
    pub fn diamond_cell(a: f64, repeats: [usize; 3]) -> Configuration {
        let basis = [
            [0.0, 0.0, 0.0],
            [0.0, 0.5, 0.5],
            [0.5, 0.0, 0.5],
            [0.5, 0.5, 0.0],
            [0.25, 0.25, 0.25],
            [0.25, 0.75, 0.75],
            [0.75, 0.25, 0.75],
            [0.75, 0.75, 0.25],
        ];
        build(a, &basis, repeats)
    }

    /// Conventional fcc cell (4 atoms) tiled `repeats` times.
    pub fn fcc_cell(a: f64, repeats: [usize; 3]) -> Configuration {
        let basis = [
            [0.0, 0.0, 0.0],
            [0.0, 0.5, 0.5],
            [0.5, 0.0, 0.5],
            [0.5, 0.5, 0.0],
        ];
        build(a, &basis, repeats)
    }

    fn build(a: f64, basis: &[[f64; 3]], repeats: [usize; 3]) -> Configuration {
        let mut positions = Vec::new();
        for ix in 0..repeats[0] {
            for iy in 0..repeats[1] {
                for iz in 0..repeats[2] {
                    for b in basis {
                        positions.push([
                            a * (ix as f64 + b[0]),
                            a * (iy as f64 + b[1]),
                            a * (iz as f64 + b[2]),
                        ]);
                    }
                }
            }
        }
        let cell = [
            [a * repeats[0] as f64, 0.0, 0.0],
            [0.0, a * repeats[1] as f64, 0.0],
            [0.0, 0.0, a * repeats[2] as f64],
        ];
        Configuration::new(vec![14; positions.len()], positions, Some(cell), [true; 3])
            .expect("lattice construction is valid")
    }
}

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::atoms::{read_xyz, write_xyz, Configuration};
use crate::eip::{
    constants, label_with_eips, read_eip_file, write_eip_file, EipSet, EnergyTable, OracleModel,
};
use crate::error::{Error, Result};
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Diamond,
    Fcc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    PerturbedLattice,
    RandomCluster,
    DimerScan,
}

impl SamplerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SamplerKind::PerturbedLattice => "perturbed_lattice",
            SamplerKind::RandomCluster => "random_cluster",
            SamplerKind::DimerScan => "dimer_scan",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "perturbed_lattice" => Some(SamplerKind::PerturbedLattice),
            "random_cluster" => Some(SamplerKind::RandomCluster),
            "dimer_scan" => Some(SamplerKind::DimerScan),
            _ => None,
        }
    }
}

/// One homogeneous batch of sampled configurations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    #[serde(default = "default_lattice")]
    pub lattice: LatticeKind,
    #[serde(default = "default_lattice_constant")]
    pub lattice_constant: f64,
    #[serde(default = "default_repeats")]
    pub repeats: [usize; 3],
    /// Gaussian displacement per coordinate (A).
    #[serde(default)]
    pub sigma_disp: f64,
    #[serde(default = "default_cluster_range")]
    pub cluster_size: [usize; 2],
    pub count: usize,
    pub seed: u64,
}

fn default_lattice() -> LatticeKind {
    LatticeKind::Diamond
}
fn default_lattice_constant() -> f64 {
    constants::DIAMOND_LATTICE_CONSTANT
}
fn default_repeats() -> [usize; 3] {
    [1, 1, 1]
}
fn default_cluster_range() -> [usize; 2] {
    [2, 10]
}

impl SamplerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sigma_disp < 0.0 {
            return Err(Error::argument("sigma_disp must be >= 0"));
        }
        let [lo, hi] = self.cluster_size;
        if !(2..=10).contains(&lo) || !(2..=10).contains(&hi) || lo > hi {
            return Err(Error::argument(format!(
                "cluster size range [{lo}, {hi}] outside [2, 10]"
            )));
        }
        Ok(())
    }
}

const MAX_SAMPLE_RETRIES: usize = 1000;
/// Minimum allowed interatomic distance in sampled configurations.
fn min_sample_distance() -> f64 {
    0.5 * constants::DIMER_R_EQ
}

/// Draws the spec's configurations; deterministic per seed.
pub fn sample_configs(spec: &SamplerSpec) -> Result<Vec<Configuration>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for index in 0..spec.count {
        let config = match spec.kind {
            SamplerKind::PerturbedLattice => sample_perturbed_lattice(spec, &mut rng)?,
            SamplerKind::RandomCluster => sample_cluster(spec, &mut rng)?,
            SamplerKind::DimerScan => sample_dimer(spec, index),
        };
        out.push(config);
    }
    Ok(out)
}

fn sample_perturbed_lattice(spec: &SamplerSpec, rng: &mut ChaCha8Rng) -> Result<Configuration> {
    let base = match spec.lattice {
        LatticeKind::Diamond => lattice::diamond_cell(spec.lattice_constant, spec.repeats),
        LatticeKind::Fcc => lattice::fcc_cell(spec.lattice_constant, spec.repeats),
    };
    if spec.sigma_disp == 0.0 {
        return Ok(base);
    }
    let normal = Normal::new(0.0, spec.sigma_disp)
        .map_err(|e| Error::Sampler(format!("bad sigma_disp: {e}")))?;
    for _ in 0..MAX_SAMPLE_RETRIES {
        let positions: Vec<[f64; 3]> = base
            .positions()
            .iter()
            .map(|p| {
                [
                    p[0] + normal.sample(rng),
                    p[1] + normal.sample(rng),
                    p[2] + normal.sample(rng),
                ]
            })
            .collect();
        let config = Configuration::new(
            base.species().to_vec(),
            positions,
            base.cell().copied(),
            base.pbc(),
        )?;
        if min_periodic_distance(&config)? >= min_sample_distance() {
            return Ok(config);
        }
    }
    Err(Error::Sampler(format!(
        "perturbed lattice rejected {MAX_SAMPLE_RETRIES} times (sigma_disp {})",
        spec.sigma_disp
    )))
}

fn sample_cluster(spec: &SamplerSpec, rng: &mut ChaCha8Rng) -> Result<Configuration> {
    let [lo, hi] = spec.cluster_size;
    let n = rng.gen_range(lo..=hi);
    let r_eq = constants::DIMER_R_EQ;
    'attempt: for _ in 0..MAX_SAMPLE_RETRIES {
        let mut positions: Vec<[f64; 3]> = vec![[0.0; 3]];
        while positions.len() < n {
            let base = positions[rng.gen_range(0..positions.len())];
            let dir = random_unit(rng);
            let r = rng.gen_range(0.9 * r_eq..1.35 * r_eq);
            let cand = [
                base[0] + dir[0] * r,
                base[1] + dir[1] * r,
                base[2] + dir[2] * r,
            ];
            let too_close = positions.iter().any(|p| distance(p, &cand) < 0.9 * r_eq);
            if too_close {
                continue 'attempt;
            }
            positions.push(cand);
        }
        let config = Configuration::new(vec![14; n], positions, None, [false; 3])?;
        if min_direct_distance(&config) >= min_sample_distance() {
            return Ok(config);
        }
    }
    Err(Error::Sampler(format!(
        "cluster of size {n} rejected {MAX_SAMPLE_RETRIES} times"
    )))
}

fn sample_dimer(spec: &SamplerSpec, index: usize) -> Configuration {
    let r_eq = constants::DIMER_R_EQ;
    let (lo, hi) = (0.8 * r_eq, 1.6 * r_eq);
    let t = if spec.count > 1 {
        index as f64 / (spec.count - 1) as f64
    } else {
        0.5
    };
    let r = lo + (hi - lo) * t;
    Configuration::new(
        vec![14, 14],
        vec![[0.0, 0.0, 0.0], [r, 0.0, 0.0]],
        None,
        [false; 3],
    )
    .expect("dimer is valid")
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0f64),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

fn min_direct_distance(config: &Configuration) -> f64 {
    let mut min = f64::INFINITY;
    let p = config.positions();
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            min = min.min(distance(&p[i], &p[j]));
        }
    }
    min
}

fn min_periodic_distance(config: &Configuration) -> Result<f64> {
    let nl = crate::atoms::build_neighbor_list(config, min_sample_distance())?;
    if nl.coincident.is_some() {
        return Ok(0.0);
    }
    Ok(nl
        .distances()
        .into_iter()
        .fold(f64::INFINITY, f64::min)
        .min(f64::INFINITY))
}

/// Train/validation/test split fractions and seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitSpec {
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default = "default_val_fraction")]
    pub val_fraction: f64,
    pub seeds: Vec<u64>,
}

fn default_test_fraction() -> f64 {
    0.2
}
fn default_val_fraction() -> f64 {
    0.2
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            test_fraction: 0.2,
            val_fraction: 0.2,
            seeds: vec![101, 202, 303],
        }
    }
}

/// Indices into the high-fidelity-labeled subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Random disjoint covering splits of `m` labeled configurations, one per
/// seed in the spec.
pub fn make_splits(m: usize, spec: &SplitSpec) -> Result<Vec<Split>> {
    if m < 5 {
        return Err(Error::argument(format!(
            "need at least 5 labeled configurations to split, got {m}"
        )));
    }
    if !(0.0..1.0).contains(&spec.test_fraction) || !(0.0..1.0).contains(&spec.val_fraction) {
        return Err(Error::argument("split fractions must lie in (0, 1)"));
    }
    let n_test = (spec.test_fraction * m as f64).round() as usize;
    let n_val = (spec.val_fraction * (m - n_test) as f64).round() as usize;
    let mut out = Vec::new();
    for &seed in &spec.seeds {
        let mut indices: Vec<usize> = (0..m).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        indices.shuffle(&mut rng);
        let test = indices[..n_test].to_vec();
        let val = indices[n_test..n_test + n_val].to_vec();
        let train = indices[n_test + n_val..].to_vec();
        out.push(Split { train, val, test });
    }
    Ok(out)
}

/// A fully labeled synthetic dataset.
#[derive(Debug, Clone)]
pub struct GeneratedDataset {
    pub configs: Vec<Configuration>,
    pub kinds: Vec<SamplerKind>,
    pub eip_table: EnergyTable,
    /// Sorted indices of the oracle-labeled subset.
    pub dft_indices: Vec<usize>,
    /// Oracle energies aligned with `dft_indices`.
    pub dft_energies: Vec<f64>,
    /// Oracle energies for every configuration; persisted to the sealed side
    /// file and never loaded by training paths.
    pub sealed_oracle: Vec<f64>,
    pub splits: Vec<Split>,
    pub manifest: Manifest,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub seed: u64,
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
    pub dft_count: usize,
    pub eipset_hash: String,
    pub split_seeds: Vec<u64>,
    pub splits: Vec<Split>,
    pub dft_indices: Vec<usize>,
    pub constants_version: String,
}

/// Whole-dataset recipe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub samplers: Vec<SamplerSpec>,
    /// Number of oracle-labeled configurations.
    pub m: usize,
    pub seed: u64,
    #[serde(default)]
    pub splits: SplitSpec,
}

impl DatasetSpec {
    /// The desk-scale default: 1400 perturbed diamond cells in three
    /// displacement tiers, 500 clusters, 100 dimers; 100 oracle labels.
    pub fn default_workload(seed: u64) -> Self {
        let tier = |sigma: f64, count: usize, salt: u64| SamplerSpec {
            kind: SamplerKind::PerturbedLattice,
            lattice: LatticeKind::Diamond,
            lattice_constant: constants::DIAMOND_LATTICE_CONSTANT,
            repeats: [1, 1, 1],
            sigma_disp: sigma,
            cluster_size: default_cluster_range(),
            count,
            seed: seed.wrapping_add(salt),
        };
        DatasetSpec {
            samplers: vec![
                tier(0.05, 467, 1),
                tier(0.15, 467, 2),
                tier(0.3, 466, 3),
                SamplerSpec {
                    kind: SamplerKind::RandomCluster,
                    lattice: LatticeKind::Diamond,
                    lattice_constant: constants::DIAMOND_LATTICE_CONSTANT,
                    repeats: [1, 1, 1],
                    sigma_disp: 0.0,
                    cluster_size: [2, 10],
                    count: 500,
                    seed: seed.wrapping_add(4),
                },
                SamplerSpec {
                    kind: SamplerKind::DimerScan,
                    lattice: LatticeKind::Diamond,
                    lattice_constant: constants::DIAMOND_LATTICE_CONSTANT,
                    repeats: [1, 1, 1],
                    sigma_disp: 0.0,
                    cluster_size: [2, 2],
                    count: 100,
                    seed: seed.wrapping_add(5),
                },
            ],
            m: 100,
            seed,
            splits: SplitSpec::default(),
        }
    }
}

/// Fraction-of-configs threshold for the label-diversity assertion.
const LABEL_DIVERSITY_MIN_FRACTION: f64 = 0.10;
const MAX_DATASET_REGENERATIONS: u64 = 20;

/// Samples, labels, and splits a dataset from a spec.
///
/// The ground-truth best zoo member must not be constant: at least two
/// distinct members must be best for at least 10% of configurations each.
/// Violations regenerate with a derived seed, up to a retry cap.
pub fn build_dataset(
    spec: &DatasetSpec,
    eips: &EipSet,
    oracle: &OracleModel,
) -> Result<GeneratedDataset> {
    if spec.m == 0 {
        return Err(Error::argument(
            "m = 0: the method needs some ground-truth labels",
        ));
    }
    let mut attempt_spec = spec.clone();
    for attempt in 0..MAX_DATASET_REGENERATIONS {
        let ds = build_dataset_once(&attempt_spec, eips, oracle)?;
        if label_diversity_ok(&ds, eips) {
            if attempt > 0 {
                log::warn!("dataset regenerated {attempt} time(s) to satisfy label diversity");
            }
            return Ok(ds);
        }
        attempt_spec = reseed(&attempt_spec);
    }
    Err(Error::Sampler(format!(
        "label diversity unsatisfied after {MAX_DATASET_REGENERATIONS} regenerations"
    )))
}

fn reseed(spec: &DatasetSpec) -> DatasetSpec {
    let mut out = spec.clone();
    out.seed = out.seed.wrapping_add(0x9E3779B97F4A7C15);
    for (i, s) in out.samplers.iter_mut().enumerate() {
        s.seed = out.seed.wrapping_add(i as u64 + 1);
    }
    out
}

fn build_dataset_once(
    spec: &DatasetSpec,
    eips: &EipSet,
    oracle: &OracleModel,
) -> Result<GeneratedDataset> {
    let mut configs = Vec::new();
    let mut kinds = Vec::new();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for sampler in &spec.samplers {
        let batch = sample_configs(sampler)?;
        *counts.entry(sampler.kind.as_str().to_string()).or_default() += batch.len();
        kinds.extend(std::iter::repeat(sampler.kind).take(batch.len()));
        configs.extend(batch);
    }
    let total = configs.len();
    if spec.m > total {
        return Err(Error::argument(format!(
            "m = {} exceeds dataset size {total}",
            spec.m
        )));
    }

    let eip_table = label_with_eips(eips, &configs)?;
    let oracle_energies = parallel::map_collect(&configs, |c| oracle.energy(c));
    let sealed_oracle: Vec<f64> = oracle_energies.into_iter().collect::<Result<_>>()?;
    if let Some(bad) = sealed_oracle.iter().position(|e| !e.is_finite()) {
        return Err(Error::DataIntegrity(format!(
            "oracle energy for configuration {bad} is not finite"
        )));
    }

    let mut indices: Vec<usize> = (0..total).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0xD1F7_0000);
    indices.shuffle(&mut rng);
    let mut dft_indices: Vec<usize> = indices[..spec.m].to_vec();
    dft_indices.sort_unstable();
    let dft_energies: Vec<f64> = dft_indices.iter().map(|&i| sealed_oracle[i]).collect();

    let splits = make_splits(spec.m, &spec.splits)?;

    // annotate frames for persistence
    for (i, config) in configs.iter_mut().enumerate() {
        config.properties.insert("id".into(), i.to_string());
        config
            .properties
            .insert("kind".into(), kinds[i].as_str().to_string());
        for (p, name) in eip_table.names.iter().enumerate() {
            config
                .properties
                .insert(format!("eip_energy_{name}"), fmt_f64(eip_table.energies[i][p]));
        }
    }
    for (&idx, &e) in dft_indices.iter().zip(&dft_energies) {
        configs[idx].properties.insert("energy".into(), fmt_f64(e));
    }

    let manifest = Manifest {
        format: "wsnip-dataset-v1".into(),
        seed: spec.seed,
        counts,
        total,
        dft_count: spec.m,
        eipset_hash: String::new(), // filled at save time
        split_seeds: spec.splits.seeds.clone(),
        splits: splits.clone(),
        dft_indices: dft_indices.clone(),
        constants_version: constants::CONSTANTS_VERSION.into(),
    };

    Ok(GeneratedDataset {
        configs,
        kinds,
        eip_table,
        dft_indices,
        dft_energies,
        sealed_oracle,
        splits,
        manifest,
    })
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// True when at least two zoo members are each best for 10% of configurations.
fn label_diversity_ok(ds: &GeneratedDataset, eips: &EipSet) -> bool {
    let mut best_counts = vec![0usize; eips.len()];
    for (i, &oracle_e) in ds.sealed_oracle.iter().enumerate() {
        let n = ds.configs[i].len() as f64;
        let mut best = 0;
        let mut best_err = f64::INFINITY;
        for (p, &e) in ds.eip_table.energies[i].iter().enumerate() {
            let err = (e - oracle_e).abs() / n;
            if err < best_err {
                best_err = err;
                best = p;
            }
        }
        best_counts[best] += 1;
    }
    let threshold = (ds.configs.len() as f64 * LABEL_DIVERSITY_MIN_FRACTION).ceil() as usize;
    best_counts.iter().filter(|&&c| c >= threshold).count() >= 2
}

pub const CONFIGS_FILE: &str = "configs.xyz";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const EIPS_FILE: &str = "eips.json";
pub const SEALED_FILE: &str = "sealed_oracle.json";

#[derive(Debug, Serialize, Deserialize)]
struct SealedOracle {
    format: String,
    energies: Vec<f64>,
}

/// Writes configs, manifest, potential set, and the sealed oracle file.
pub fn save_dataset(
    dir: &Path,
    ds: &GeneratedDataset,
    eips: &EipSet,
    oracle: &OracleModel,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let eips_json = write_eip_file(eips, oracle)?;
    std::fs::write(dir.join(EIPS_FILE), &eips_json)?;

    let mut manifest = ds.manifest.clone();
    manifest.eipset_hash = content_hash(eips_json.as_bytes());
    std::fs::write(
        dir.join(MANIFEST_FILE),
        serde_json::to_string_pretty(&manifest)?,
    )?;

    std::fs::write(dir.join(CONFIGS_FILE), write_xyz(&ds.configs)?)?;

    let sealed = SealedOracle {
        format: "wsnip-sealed-v1".into(),
        energies: ds.sealed_oracle.clone(),
    };
    std::fs::write(dir.join(SEALED_FILE), serde_json::to_string(&sealed)?)?;
    Ok(())
}

/// A dataset as visible to training paths: no sealed oracle energies.
#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub configs: Vec<Configuration>,
    pub kinds: Vec<SamplerKind>,
    pub eip_table: EnergyTable,
    pub dft_indices: Vec<usize>,
    pub dft_energies: Vec<f64>,
    pub splits: Vec<Split>,
    pub manifest: Manifest,
    pub eips: EipSet,
    pub oracle: OracleModel,
    /// Hash binding the manifest and potential-set bytes, for provenance.
    pub content_hash: String,
}

/// Loads everything except the sealed oracle file.
pub fn load_dataset(dir: &Path) -> Result<LoadedDataset> {
    let eips_json = std::fs::read_to_string(dir.join(EIPS_FILE))?;
    let (eips, oracle) = read_eip_file(&eips_json)?;
    let manifest_json = std::fs::read_to_string(dir.join(MANIFEST_FILE))?;
    let manifest: Manifest = serde_json::from_str(&manifest_json)?;
    if manifest.eipset_hash != content_hash(eips_json.as_bytes()) {
        return Err(Error::DataIntegrity(
            "potential-set file does not match the manifest hash".into(),
        ));
    }
    let configs = read_xyz(&std::fs::read_to_string(dir.join(CONFIGS_FILE))?)?;
    if configs.len() != manifest.total {
        return Err(Error::DataIntegrity(format!(
            "manifest promises {} configurations, file holds {}",
            manifest.total,
            configs.len()
        )));
    }

    let mut kinds = Vec::with_capacity(configs.len());
    let mut energies = Vec::with_capacity(configs.len());
    for (i, config) in configs.iter().enumerate() {
        let kind = config
            .properties
            .get("kind")
            .and_then(|s| SamplerKind::parse(s))
            .ok_or_else(|| Error::DataIntegrity(format!("frame {i} lacks a sampler kind")))?;
        kinds.push(kind);
        let mut row = Vec::with_capacity(eips.len());
        for name in eips.names() {
            let key = format!("eip_energy_{name}");
            let value = config
                .properties
                .get(&key)
                .ok_or_else(|| Error::DataIntegrity(format!("frame {i} lacks `{key}`")))?;
            row.push(value.parse::<f64>().map_err(|_| {
                Error::DataIntegrity(format!("frame {i}: malformed `{key}`"))
            })?);
        }
        energies.push(row);
    }
    let eip_table = EnergyTable {
        names: eips.names(),
        energies,
    };

    let dft_indices = manifest.dft_indices.clone();
    let mut dft_energies = Vec::with_capacity(dft_indices.len());
    for &idx in &dft_indices {
        let value = configs[idx].properties.get("energy").ok_or_else(|| {
            Error::DataIntegrity(format!("labeled frame {idx} lacks an `energy` key"))
        })?;
        dft_energies.push(value.parse::<f64>().map_err(|_| {
            Error::DataIntegrity(format!("labeled frame {idx}: malformed energy"))
        })?);
    }

    let hash = content_hash(&[manifest_json.as_bytes(), eips_json.as_bytes()].concat());
    Ok(LoadedDataset {
        configs,
        kinds,
        eip_table,
        dft_indices,
        dft_energies,
        splits: manifest.splits.clone(),
        manifest,
        eips,
        oracle,
        content_hash: hash,
    })
}

/// Loads the sealed oracle energies; only ablation and reporting tooling may
/// call this.
pub fn load_sealed_oracle(dir: &Path) -> Result<Vec<f64>> {
    let path = dir.join(SEALED_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::DataIntegrity(format!(
            "sealed oracle file {} unavailable: {e}",
            path.display()
        ))
    })?;
    let sealed: SealedOracle = serde_json::from_str(&text)?;
    Ok(sealed.energies)
}

/// Hex SHA-256 of a byte string; used for dataset provenance.
pub fn content_hash(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
