//! JSON state files.
//!
//! A state file names its model by a path relative to the file itself and
//! lists either Schmidt sectors (total charge vacuum or abelian) or explicit
//! amplitude blocks (any total charge).
//!
//! ```json
//! { "model": "../models/fibonacci.json", "total_charge": "1",
//!   "sectors": [ { "charge": "tau", "p": 1.0, "schmidt": [1.0] } ],
//!   "context": { "A": ["tau"], "B": ["tau"] } }
//! ```

use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::AnyonModel;
use crate::purification::{Block, GeneralState};
use crate::state::{BipartiteState, Context, Sector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorEntry {
    pub charge: String,
    pub p: f64,
    pub schmidt: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextEntry {
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub a: String,
    pub b: String,
    #[serde(default = "one")]
    pub mu: u32,
    /// Row-major, rows indexing `H_A^a`.
    pub amplitudes: Vec<Vec<f64>>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_charge: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectors: Option<Vec<SectorEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<ContextEntry>,
}

/// A parsed state file.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Sectors(BipartiteState),
    Blocks(GeneralState),
}

impl LoadedState {
    pub fn model(&self) -> &AnyonModel {
        match self {
            LoadedState::Sectors(s) => s.model(),
            LoadedState::Blocks(g) => g.model(),
        }
    }

    /// Sector form; block files are refused.
    pub fn into_bipartite(self) -> Result<BipartiteState> {
        match self {
            LoadedState::Sectors(s) => Ok(s),
            LoadedState::Blocks(_) => Err(Error::Validation(
                "this command needs a state given by Schmidt sectors, not amplitude blocks".into(),
            )),
        }
    }

    pub fn into_general(self) -> GeneralState {
        match self {
            LoadedState::Sectors(s) => GeneralState::from_bipartite(&s),
            LoadedState::Blocks(g) => g,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Resolves `model` against the directory of the referring file.
pub fn resolve_model_path(file: &Path, model: &str) -> PathBuf {
    let p = Path::new(model);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        file.parent().unwrap_or_else(|| Path::new(".")).join(p)
    }
}

pub fn load_state(path: impl AsRef<Path>) -> Result<LoadedState> {
    let path = path.as_ref();
    let file: StateFile = serde_json::from_str(&read(path)?)?;
    let model = Arc::new(AnyonModel::load(resolve_model_path(path, &file.model))?);
    build_state(model, &file)
}

pub fn build_state(model: Arc<AnyonModel>, file: &StateFile) -> Result<LoadedState> {
    let total = match &file.total_charge {
        Some(label) => model.charge(label)?,
        None => model.vacuum(),
    };
    match (&file.sectors, &file.blocks) {
        (Some(sectors), None) => {
            let sectors = sectors
                .iter()
                .map(|s| {
                    Ok(Sector::new(
                        model.charge(&s.charge)?,
                        s.p,
                        s.schmidt.clone(),
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let context = match &file.context {
                Some(ctx) => Some(Context {
                    a: model.charges_of(&ctx.a)?,
                    b: model.charges_of(&ctx.b)?,
                }),
                None => None,
            };
            Ok(LoadedState::Sectors(BipartiteState::with_total(
                model, total, sectors, context,
            )?))
        }
        (None, Some(blocks)) => {
            let blocks = blocks
                .iter()
                .map(|b| {
                    let rows = b.amplitudes.len();
                    let cols = b.amplitudes.first().map_or(0, Vec::len);
                    if b.amplitudes.iter().any(|r| r.len() != cols) {
                        return Err(Error::Validation(format!(
                            "ragged amplitude matrix in block ({}, {})",
                            b.a, b.b
                        )));
                    }
                    let flat: Vec<f64> = b.amplitudes.iter().flatten().copied().collect();
                    Ok(Block {
                        a: model.charge(&b.a)?,
                        b: model.charge(&b.b)?,
                        mu: b.mu,
                        amp: DMatrix::from_row_slice(rows, cols, &flat),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LoadedState::Blocks(GeneralState::new(
                model, total, blocks,
            )?))
        }
        _ => Err(Error::Validation(
            "a state file lists exactly one of `sectors` or `blocks`".into(),
        )),
    }
}

/// Serializable form of a sector state.
pub fn state_to_file(state: &BipartiteState, model_path: &str) -> StateFile {
    let m = state.model();
    StateFile {
        model: model_path.to_string(),
        total_charge: Some(m.label(state.total()).to_string()),
        sectors: Some(
            state
                .sectors()
                .iter()
                .map(|s| SectorEntry {
                    charge: m.label(s.charge).to_string(),
                    p: s.weight,
                    schmidt: s.schmidt.clone(),
                })
                .collect(),
        ),
        blocks: None,
        context: state.context().map(|c| ContextEntry {
            a: c.a.iter().map(|&x| m.label(x).to_string()).collect(),
            b: c.b.iter().map(|&x| m.label(x).to_string()).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn fib() -> Arc<AnyonModel> {
        Arc::new(catalog::fibonacci())
    }

    #[test]
    fn sector_file_round_trip() {
        let text = r#"{ "model": "m.json", "total_charge": "1",
            "sectors": [ { "charge": "tau", "p": 0.5, "schmidt": [1.0] }, { "charge": "1", "p": 0.5, "schmidt": [1.0] } ],
            "context": { "A": ["tau", "tau"], "B": ["tau", "tau"] } }"#;
        let file: StateFile = serde_json::from_str(text).unwrap();
        let s = build_state(fib(), &file).unwrap().into_bipartite().unwrap();
        assert_eq!(s.sectors().len(), 2);
        let back = state_to_file(&s, "m.json");
        let again = build_state(fib(), &back).unwrap().into_bipartite().unwrap();
        assert_eq!(again.sectors(), s.sectors());
    }

    #[test]
    fn block_file() {
        let m = Arc::new(catalog::ising());
        let text = r#"{ "model": "i.json", "total_charge": "psi",
            "blocks": [ { "a": "sigma", "b": "sigma", "mu": 1, "amplitudes": [[1.0]] } ] }"#;
        let file: StateFile = serde_json::from_str(text).unwrap();
        let g = build_state(m.clone(), &file).unwrap();
        assert!(g.clone().into_bipartite().is_err());
        assert_eq!(g.into_general().total(), m.charge("psi").unwrap());
    }

    #[test]
    fn malformed_files() {
        let bad = [
            r#"{ "model": "m", "sectors": [], "blocks": [] }"#,
            r#"{ "model": "m" }"#,
            r#"{ "model": "m", "sectors": [ { "charge": "nope", "p": 1.0, "schmidt": [1.0] } ] }"#,
            r#"{ "model": "m", "blocks": [ { "a": "1", "b": "1", "amplitudes": [[1.0], [0.0, 1.0]] } ] }"#,
        ];
        for text in bad {
            let file: StateFile = serde_json::from_str(text).unwrap();
            assert!(build_state(fib(), &file).is_err(), "{text}");
        }
        assert!(serde_json::from_str::<StateFile>(r#"{ "model": "m", "extra": 1 }"#).is_err());
    }

    #[test]
    fn model_paths_are_relative_to_the_file() {
        let p = resolve_model_path(Path::new("/data/states/s.json"), "../models/fib.json");
        assert_eq!(p, Path::new("/data/states/../models/fib.json"));
        assert_eq!(
            resolve_model_path(Path::new("s.json"), "/abs/m.json"),
            Path::new("/abs/m.json")
        );
    }
}
