//! Quiver files and vector arguments.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{Context, Result};
use quiver_si::{Quiver, QuiverSpec};
use serde::Deserialize;

/// A quiver file: the quiver itself plus optional vectors keyed by vertex id.
#[derive(Debug, Deserialize)]
pub struct QuiverFile {
    #[serde(flatten)]
    pub spec: QuiverSpec,
    #[serde(default)]
    pub alpha: Option<BTreeMap<String, i64>>,
    #[serde(default)]
    pub beta: Option<BTreeMap<String, i64>>,
    #[serde(default)]
    pub sigma: Option<BTreeMap<String, i64>>,
}

pub struct LoadedQuiver {
    pub path: PathBuf,
    pub quiver: Arc<Quiver>,
    pub file: QuiverFile,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_quiver(path: &Path) -> Result<LoadedQuiver> {
    let file: QuiverFile = read_json(path)?;
    let quiver = Quiver::from_spec(file.spec.clone())?;
    Ok(LoadedQuiver {
        path: path.to_path_buf(),
        quiver: Arc::new(quiver),
        file,
    })
}

/// A vector given on the command line, either positional (`1,2,0`, in
/// vertex order) or keyed (`a=1,b=2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VectorArg {
    Positional(Vec<i64>),
    Keyed(BTreeMap<String, i64>),
}

impl FromStr for VectorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty vector".into());
        }
        let entry = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("`{}` is not an integer", t.trim()))
        };
        if s.contains('=') {
            let mut map = BTreeMap::new();
            for item in s.split(',') {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| format!("`{item}` is not of the form vertex=value"))?;
                if map.insert(k.trim().to_string(), entry(v)?).is_some() {
                    return Err(format!("vertex `{}` given twice", k.trim()));
                }
            }
            Ok(Self::Keyed(map))
        } else {
            s.split(',').map(entry).collect::<Result<_, _>>().map(Self::Positional)
        }
    }
}

impl VectorArg {
    /// Values in vertex order. Keyed vectors must name every vertex.
    pub fn resolve(&self, q: &Quiver) -> Result<Vec<i64>> {
        match self {
            Self::Positional(v) => {
                if v.len() != q.vertex_count() {
                    return Err(quiver_si::Error::VertexMismatch(format!(
                        "got {} entries for {} vertices",
                        v.len(),
                        q.vertex_count()
                    ))
                    .into());
                }
                Ok(v.clone())
            }
            Self::Keyed(m) => Ok(q.values_from_map(m)?),
        }
    }
}

impl LoadedQuiver {
    /// The vector `name`, taking the file's value when both the file and the
    /// flag supply one and warning if they differ.
    pub fn vector(&self, name: &str, flag: Option<&VectorArg>) -> Result<Option<Vec<i64>>> {
        let from_file = match name {
            "alpha" => self.file.alpha.as_ref(),
            "beta" => self.file.beta.as_ref(),
            "sigma" => self.file.sigma.as_ref(),
            _ => None,
        }
        .map(|m| self.quiver.values_from_map(m))
        .transpose()?;
        let from_flag = flag.map(|v| v.resolve(&self.quiver)).transpose()?;
        match (from_file, from_flag) {
            (Some(file), Some(flag)) => {
                if file != flag {
                    eprintln!("warning: {name} from {} overrides --{name}", self.path.display());
                }
                Ok(Some(file))
            }
            (file, flag) => Ok(file.or(flag)),
        }
    }

    pub fn require(&self, name: &str, flag: Option<&VectorArg>) -> Result<Vec<i64>> {
        self.vector(name, flag)?.ok_or_else(|| {
            quiver_si::Error::InvalidArgument(format!("no {name} given; pass --{name} or add it to the quiver file"))
                .into()
        })
    }
}
