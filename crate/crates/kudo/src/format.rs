//! JSON input formats.
//!
//! Masses and density values are numbers or exact `"p/q"` strings. A space
//! can be given inline or as a path to another JSON file, resolved relative
//! to the file that mentions it. Atoms in blocks are names or indices.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use kudo_core::kudo::PartitionSequence;
use kudo_core::partition::Partition;
use kudo_core::space::{Density, FiniteSpace};
use kudo_core::walk::harmonic::StepLaw;
use kudo_core::walk::word::parse_letter;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Context, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Exact(String),
}

impl Number {
    pub fn value(&self) -> std::result::Result<f64, String> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Exact(s) => {
                let r: Ratio<i64> = s.trim().parse().map_err(|_| format!("`{s}` is not a number or p/q ratio"))?;
                r.to_f64().ok_or_else(|| format!("`{s}` is out of range"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub atoms: Vec<String>,
    pub masses: Vec<Number>,
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(PathBuf),
    Inline(SpaceSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub space: SpaceRef,
    pub values: Vec<Number>,
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomId {
    Index(usize),
    Name(String),
}

pub type Blocks = Vec<Vec<AtomId>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub space: SpaceRef,
    pub blocks: Blocks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub space: SpaceRef,
    #[serde(default)]
    pub preperiod: Vec<Blocks>,
    pub period: Vec<Blocks>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Named(String),
    Letters(BTreeMap<String, Number>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSpec {
    pub k: usize,
    #[serde(default = "uniform_mu")]
    pub mu: MuSpec,
    #[serde(rename = "L")]
    pub depth: usize,
    #[serde(rename = "K", default = "default_terms")]
    pub terms: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub streams: Option<u64>,
}

fn uniform_mu() -> MuSpec {
    MuSpec::Named("uniform".into())
}

fn default_terms() -> usize {
    1
}

/// Reads and deserializes a JSON file, reporting the JSON path of any error.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_json(&path.display().to_string(), &text)
}

pub fn parse_json<T: DeserializeOwned>(file: &str, text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
        file: file.to_string(),
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn numbers(file: &str, field: &str, xs: &[Number]) -> Result<Vec<f64>> {
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            x.value().map_err(|message| CliError::Parse {
                file: file.to_string(),
                path: format!("{field}[{i}]"),
                message,
            })
        })
        .collect()
}

pub fn build_space(file: &str, spec: &SpaceSpec) -> Result<Arc<FiniteSpace>> {
    let masses = numbers(file, "masses", &spec.masses)?;
    FiniteSpace::new(spec.atoms.clone(), masses, spec.normalize).context(file)
}

fn resolve_space(base: &Path, space: &SpaceRef) -> Result<Arc<FiniteSpace>> {
    match space {
        SpaceRef::Inline(spec) => build_space(&base.display().to_string(), spec),
        SpaceRef::Path(p) => {
            let path = base.parent().unwrap_or(Path::new(".")).join(p);
            load_space(&path)
        }
    }
}

pub fn load_space(path: &Path) -> Result<Arc<FiniteSpace>> {
    let spec: SpaceSpec = read_json(path)?;
    build_space(&path.display().to_string(), &spec)
}

pub fn load_density(path: &Path) -> Result<Density> {
    let spec: DensitySpec = read_json(path)?;
    let file = path.display().to_string();
    let space = resolve_space(path, &spec.space)?;
    let values = numbers(&file, "values", &spec.values)?;
    if spec.normalize {
        Density::normalized(space, values).context(file)
    } else {
        Density::new(space, values).context(file)
    }
}

fn atom_index(space: &FiniteSpace, file: &str, field: &str, id: &AtomId) -> Result<usize> {
    let bad = |message: String| CliError::Parse {
        file: file.to_string(),
        path: field.to_string(),
        message,
    };
    match id {
        AtomId::Index(i) if *i < space.len() => Ok(*i),
        AtomId::Index(i) => Err(bad(format!("atom index {i} out of range"))),
        AtomId::Name(n) => space.index_of(n).ok_or_else(|| bad(format!("unknown atom `{n}`"))),
    }
}

pub fn build_partition(space: &Arc<FiniteSpace>, file: &str, field: &str, blocks: &Blocks) -> Result<Partition> {
    let mut idx = Vec::with_capacity(blocks.len());
    for (b, block) in blocks.iter().enumerate() {
        let mut out = Vec::with_capacity(block.len());
        for (i, id) in block.iter().enumerate() {
            out.push(atom_index(space, file, &format!("{field}[{b}][{i}]"), id)?);
        }
        idx.push(out);
    }
    Partition::from_blocks(space.clone(), &idx).context(format!("{file}: {field}"))
}

pub fn load_partition(path: &Path) -> Result<Partition> {
    let spec: PartitionSpec = read_json(path)?;
    let space = resolve_space(path, &spec.space)?;
    build_partition(&space, &path.display().to_string(), "blocks", &spec.blocks)
}

pub fn load_sequence(path: &Path) -> Result<PartitionSequence> {
    let spec: SequenceSpec = read_json(path)?;
    let file = path.display().to_string();
    let space = resolve_space(path, &spec.space)?;
    let build = |field: &str, list: &[Blocks]| -> Result<Vec<Partition>> {
        list.iter()
            .enumerate()
            .map(|(i, b)| build_partition(&space, &file, &format!("{field}[{i}]"), b))
            .collect()
    };
    let pre = build("preperiod", &spec.preperiod)?;
    let period = build("period", &spec.period)?;
    PartitionSequence::new(pre, period).context(file)
}

pub fn build_law(file: &str, spec: &WalkSpec) -> Result<StepLaw> {
    match &spec.mu {
        MuSpec::Named(name) if name == "uniform" => StepLaw::uniform(spec.k).context(file),
        MuSpec::Named(name) => Err(CliError::Parse {
            file: file.to_string(),
            path: "mu".into(),
            message: format!("unknown step law `{name}`"),
        }),
        MuSpec::Letters(map) => {
            let mut probs = vec![f64::NAN; 2 * spec.k];
            for (key, p) in map {
                let bad = |message: String| CliError::Parse {
                    file: file.to_string(),
                    path: format!("mu.{key}"),
                    message,
                };
                let mut chars = key.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(bad("keys must be single letters".into()));
                };
                let x = parse_letter(spec.k, c).map_err(|e| bad(e.to_string()))?;
                probs[x as usize] = p.value().map_err(bad)?;
            }
            StepLaw::new(spec.k, probs).context(format!("{file}: mu"))
        }
    }
}

pub fn load_walk(path: &Path) -> Result<WalkSpec> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_masses() {
        let spec: SpaceSpec = parse_json("t", r#"{"atoms":["a","b"],"masses":["1/3", 0.6666666666666667]}"#).unwrap();
        let s = build_space("t", &spec).unwrap();
        assert!((s.mass(0) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn errors_name_the_path() {
        let err = parse_json::<SpaceSpec>("t", r#"{"atoms":["a"],"masses":[1],"extra":1}"#).unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
        let err = parse_json::<WalkSpec>("t", r#"{"k":"two","L":1}"#).unwrap_err();
        assert!(err.to_string().contains("at `k`"), "{err}");
        let spec: SpaceSpec = parse_json("t", r#"{"atoms":["a"],"masses":["x/2"]}"#).unwrap();
        let err = build_space("t", &spec).unwrap_err();
        assert!(err.to_string().contains("masses[0]"), "{err}");
    }

    #[test]
    fn walk_laws() {
        let spec: WalkSpec = parse_json("t", r#"{"k":2,"L":2}"#).unwrap();
        assert!(build_law("t", &spec).unwrap().is_uniform());
        let spec: WalkSpec =
            parse_json("t", r#"{"k":2,"L":2,"mu":{"a":0.4,"A":0.1,"b":"3/10","B":0.2}}"#).unwrap();
        assert_eq!(build_law("t", &spec).unwrap().probs(), &[0.4, 0.1, 0.3, 0.2]);
        let spec: WalkSpec = parse_json("t", r#"{"k":2,"L":2,"mu":{"a":0.5,"A":0.5}}"#).unwrap();
        assert!(build_law("t", &spec).is_err());
    }
}
