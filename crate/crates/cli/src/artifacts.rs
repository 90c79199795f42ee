//! File names inside an output directory, the manifest, and loaders for
//! upstream artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context as _, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use metasketch::partition::{read_partition, PartitionSidecar};
use metasketch::{BfsRun, Graph, PartitionLayout, PrRun, SimMetrics};

pub const GRAPH: &str = "graph.txt";
pub const PARTITION_MAP: &str = "partition.tsv";
pub const PARTITION_SIDECAR: &str = "partition.json";
pub const METAGRAPH: &str = "metagraph.json";
pub const META_STATS: &str = "metastats.csv";
pub const METRICS_JSON: &str = "metrics.json";
pub const METRICS_CSV: &str = "metrics.csv";
pub const BOUNDS_JSON: &str = "bounds.json";
pub const BOUNDS_TEXT: &str = "bounds.txt";
pub const MANIFEST: &str = "manifest.json";

/// An upstream artifact that should exist but does not.
#[derive(Debug)]
pub struct MissingArtifact(pub PathBuf);

impl std::fmt::Display for MissingArtifact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "missing artifact: {}", self.0.display())
    }
}

impl std::error::Error for MissingArtifact {}

/// The run settings a stage used; only the fields relevant to that stage
/// are filled in.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balance_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<BTreeMap<String, String>>,
    pub output_dir: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub config: RunConfig,
    /// Path → SHA-256 of the file's contents.
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

/// One entry per stage that has written into the directory. No timestamps,
/// so rerunning with the same settings reproduces it byte for byte.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub stages: BTreeMap<String, StageRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Fails with [`MissingArtifact`] unless `path` is an existing file.
pub fn require(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(MissingArtifact(path.to_path_buf()).into())
    }
}

/// Collects what a stage reads and writes, then records it in the manifest.
pub struct Stage {
    name: &'static str,
    out: PathBuf,
    record: StageRecord,
}

impl Stage {
    pub fn new(name: &'static str, out: &Path, mut config: RunConfig) -> Result<Self> {
        fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
        config.output_dir = out.display().to_string();
        Ok(Self {
            name,
            out: out.to_path_buf(),
            record: StageRecord {
                config,
                ..StageRecord::default()
            },
        })
    }

    fn key(&self, path: &Path) -> String {
        match path.strip_prefix(&self.out) {
            Ok(rel) => rel.display().to_string(),
            Err(_) => path.display().to_string(),
        }
    }

    /// Reads an upstream artifact, recording its hash.
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        require(path)?;
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let key = self.key(path);
        self.record.inputs.insert(key, sha256_hex(&bytes));
        Ok(bytes)
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.out.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.record.outputs.insert(name.to_string(), sha256_hex(bytes));
        Ok(path)
    }

    pub fn finish(self) -> Result<()> {
        let path = self.out.join(MANIFEST);
        let mut manifest: Manifest = match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).unwrap_or_default(),
            Err(_) => Manifest::default(),
        };
        manifest.stages.insert(self.name.to_string(), self.record);
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

pub fn load_graph(stage: &mut Stage, path: &Path) -> Result<Graph> {
    let bytes = stage.read(path)?;
    Ok(metasketch::graph::read_edge_list(
        bytes.as_slice(),
        &path.display().to_string(),
    )?)
}

/// Reads `partition.tsv` and its sidecar from `dir`.
pub fn load_layout(stage: &mut Stage, g: &Graph, dir: &Path) -> Result<PartitionLayout> {
    let sidecar_path = dir.join(PARTITION_SIDECAR);
    let map_path = dir.join(PARTITION_MAP);
    require(&map_path)?;
    let sidecar: PartitionSidecar = serde_json::from_slice(&stage.read(&sidecar_path)?)
        .with_context(|| format!("parsing {}", sidecar_path.display()))?;
    let map = stage.read(&map_path)?;
    Ok(read_partition(g, BufReader::new(map.as_slice()), &sidecar)?)
}

/// A simulation run as stored in `metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "lowercase")]
pub enum RunRecord {
    Pr(PrRun),
    Bfs(BfsRun),
}

impl RunRecord {
    pub fn algo(&self) -> &'static str {
        match self {
            RunRecord::Pr(_) => "pr",
            RunRecord::Bfs(_) => "bfs",
        }
    }

    pub fn metrics(&self) -> &SimMetrics {
        match self {
            RunRecord::Pr(r) => &r.metrics,
            RunRecord::Bfs(r) => &r.metrics,
        }
    }

    pub fn label(&self) -> String {
        format!("{}-{}", self.algo(), self.metrics().model)
    }
}

/// Runs stored in `dir`. With `stage`, the file is recorded as an input.
pub fn load_runs(stage: Option<&mut Stage>, dir: &Path) -> Result<Vec<RunRecord>> {
    let path = dir.join(METRICS_JSON);
    let bytes = match stage {
        Some(stage) => stage.read(&path)?,
        None => fs::read(&path).with_context(|| format!("reading {}", path.display()))?,
    };
    serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))
}
