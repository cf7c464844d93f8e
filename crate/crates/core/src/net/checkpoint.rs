//! JSON checkpoints: named arrays with shapes plus optional optimizer state.
//! Values serialize in shortest round-trip form, so save/load is bit-exact.

use std::collections::BTreeMap;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::{Param, ParamSet, Scheduler, TrainState};
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "wsnip-checkpoint-v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrayData {
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainStateData {
    pub step: u64,
    pub scheduler: Scheduler,
    pub base_lr: f64,
    pub batch_size: usize,
    pub m: BTreeMap<String, ArrayData>,
    pub v: BTreeMap<String, ArrayData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub arrays: BTreeMap<String, ArrayData>,
    pub train_state: Option<TrainStateData>,
}

fn param_to_array(p: &Param) -> ArrayData {
    match p {
        Param::Matrix(a) => ArrayData {
            shape: a.shape().to_vec(),
            values: a.iter().copied().collect(),
        },
        Param::Vector(a) => ArrayData {
            shape: a.shape().to_vec(),
            values: a.iter().copied().collect(),
        },
    }
}

fn array_to_param(name: &str, data: &ArrayData) -> Result<Param> {
    let expected: usize = data.shape.iter().product();
    if data.values.len() != expected {
        return Err(Error::CheckpointIncompatible {
            name: name.to_string(),
            msg: format!(
                "shape {:?} wants {expected} values, found {}",
                data.shape,
                data.values.len()
            ),
        });
    }
    match data.shape.len() {
        1 => Ok(Param::Vector(Array1::from_vec(data.values.clone()))),
        2 => Ok(Param::Matrix(
            Array2::from_shape_vec((data.shape[0], data.shape[1]), data.values.clone()).unwrap(),
        )),
        n => Err(Error::CheckpointIncompatible {
            name: name.to_string(),
            msg: format!("unsupported rank {n}"),
        }),
    }
}

fn params_to_arrays(params: &ParamSet) -> BTreeMap<String, ArrayData> {
    params
        .entries
        .iter()
        .map(|(k, v)| (k.clone(), param_to_array(v)))
        .collect()
}

pub fn checkpoint_from(params: &ParamSet, state: Option<&TrainState>) -> Checkpoint {
    Checkpoint {
        format: CHECKPOINT_FORMAT.into(),
        arrays: params_to_arrays(params),
        train_state: state.map(|s| TrainStateData {
            step: s.step,
            scheduler: s.scheduler,
            base_lr: s.base_lr,
            batch_size: s.batch_size,
            m: params_to_arrays(&s.m),
            v: params_to_arrays(&s.v),
        }),
    }
}

pub fn save_checkpoint(path: &Path, params: &ParamSet, state: Option<&TrainState>) -> Result<()> {
    let ckpt = checkpoint_from(params, state);
    std::fs::write(path, serde_json::to_string(&ckpt)?)?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let text = std::fs::read_to_string(path)?;
    let ckpt: Checkpoint = serde_json::from_str(&text)?;
    if ckpt.format != CHECKPOINT_FORMAT {
        return Err(Error::DataIntegrity(format!(
            "unknown checkpoint format `{}`",
            ckpt.format
        )));
    }
    Ok(ckpt)
}

impl Checkpoint {
    /// Full parameter set from the checkpoint.
    pub fn to_params(&self) -> Result<ParamSet> {
        let mut out = ParamSet::new();
        for (name, data) in &self.arrays {
            out.insert(name.clone(), array_to_param(name, data)?);
        }
        Ok(out)
    }

    /// Copies arrays under `prefix` into `target`, leaving all other arrays
    /// (a freshly initialized head, say) untouched. Shapes must match.
    pub fn apply_prefix(&self, prefix: &str, target: &mut ParamSet) -> Result<()> {
        for (name, data) in &self.arrays {
            if !name.starts_with(prefix) {
                continue;
            }
            let incoming = array_to_param(name, data)?;
            match target.entries.get_mut(name) {
                Some(existing) => {
                    if existing.shape() != incoming.shape() {
                        return Err(super::shape_error(name, &existing.shape(), &incoming.shape()));
                    }
                    *existing = incoming;
                }
                None => {
                    return Err(Error::CheckpointIncompatible {
                        name: name.clone(),
                        msg: "not present in the target model".into(),
                    })
                }
            }
        }
        Ok(())
    }

    /// Restricts the checkpoint to arrays under a prefix (representation-only
    /// checkpoints).
    pub fn filter_prefix(&self, prefix: &str) -> Checkpoint {
        Checkpoint {
            format: self.format.clone(),
            arrays: self
                .arrays
                .iter()
                .filter(|(k, _)| k.starts_with(prefix))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            train_state: None,
        }
    }
}
