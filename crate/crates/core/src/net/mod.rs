//! Minimal neural-network core: named parameter arrays, multilayer
//! perceptrons with exact reverse-mode gradients, Adam, and learning-rate
//! schedules.

mod adam;
mod checkpoint;
mod mlp;

pub use adam::{adam_step, lr_at, Scheduler, TrainState, ADAM_BETA1, ADAM_BETA2, ADAM_EPS};
pub use checkpoint::{
    load_checkpoint, save_checkpoint, ArrayData, Checkpoint, TrainStateData, CHECKPOINT_FORMAT,
};
pub use mlp::{Mlp, MlpTrace};

use std::collections::BTreeMap;

use ndarray::{Array1, Array2};
use rand::Rng;

use crate::error::Error;

/// One named parameter array.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Matrix(Array2<f64>),
    Vector(Array1<f64>),
}

impl Param {
    pub fn shape(&self) -> Vec<usize> {
        match self {
            Param::Matrix(a) => a.shape().to_vec(),
            Param::Vector(a) => a.shape().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Param::Matrix(a) => a.len(),
            Param::Vector(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zeros_like(&self) -> Param {
        match self {
            Param::Matrix(a) => Param::Matrix(Array2::zeros(a.raw_dim())),
            Param::Vector(a) => Param::Vector(Array1::zeros(a.raw_dim())),
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = &f64> + '_> {
        match self {
            Param::Matrix(a) => Box::new(a.iter()),
            Param::Vector(a) => Box::new(a.iter()),
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            Param::Matrix(a) => a.iter().copied().collect(),
            Param::Vector(a) => a.iter().copied().collect(),
        }
    }

    fn apply_update(&mut self, other: &Param, f: impl Fn(f64, f64) -> f64) {
        match (self, other) {
            (Param::Matrix(a), Param::Matrix(b)) => a.zip_mut_with(b, |x, y| *x = f(*x, *y)),
            (Param::Vector(a), Param::Vector(b)) => a.zip_mut_with(b, |x, y| *x = f(*x, *y)),
            _ => panic!("parameter kind mismatch"),
        }
    }
}

/// Ordered map of named parameter arrays; the unit of optimization,
/// checkpointing, and gradient bookkeeping.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamSet {
    pub entries: BTreeMap<String, Param>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, param: Param) {
        self.entries.insert(name.into(), param);
    }

    pub fn matrix(&self, name: &str) -> &Array2<f64> {
        match &self.entries[name] {
            Param::Matrix(a) => a,
            Param::Vector(_) => panic!("`{name}` is a vector"),
        }
    }

    pub fn vector(&self, name: &str) -> &Array1<f64> {
        match &self.entries[name] {
            Param::Vector(a) => a,
            Param::Matrix(_) => panic!("`{name}` is a matrix"),
        }
    }

    pub fn num_params(&self) -> usize {
        self.entries.values().map(Param::len).sum()
    }

    pub fn zeros_like(&self) -> ParamSet {
        ParamSet {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v.zeros_like()))
                .collect(),
        }
    }

    pub fn all_finite(&self) -> bool {
        self.entries
            .values()
            .all(|p| p.iter().all(|v| v.is_finite()))
    }

    /// Accumulates `other` into `self` (gradient accumulation).
    pub fn add_assign(&mut self, other: &ParamSet) {
        for (name, param) in &mut self.entries {
            if let Some(o) = other.entries.get(name) {
                param.apply_update(o, |x, y| x + y);
            }
        }
    }

    /// Flat copy of every value in name order (finite-difference checks).
    pub fn flatten(&self) -> Vec<f64> {
        self.entries.values().flat_map(Param::values).collect()
    }

    /// Writes a flat vector back into the arrays, inverse of [`flatten`].
    pub fn unflatten(&mut self, flat: &[f64]) {
        let mut offset = 0;
        for param in self.entries.values_mut() {
            match param {
                Param::Matrix(a) => {
                    for v in a.iter_mut() {
                        *v = flat[offset];
                        offset += 1;
                    }
                }
                Param::Vector(a) => {
                    for v in a.iter_mut() {
                        *v = flat[offset];
                        offset += 1;
                    }
                }
            }
        }
        assert_eq!(offset, flat.len());
    }
}

/// Shifted softplus `ssp(x) = ln(0.5 e^x + 0.5)`; `ssp(0) = 0`.
pub fn ssp(x: f64) -> f64 {
    // softplus(x) - ln 2, computed stably
    let softplus = x.max(0.0) + (-x.abs()).exp().ln_1p();
    softplus - std::f64::consts::LN_2
}

/// Derivative of the shifted softplus: the logistic sigmoid.
pub fn ssp_prime(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Glorot-style uniform initialization in +-sqrt(6 / (fan_in + fan_out)),
/// zero biases.
pub fn init_linear(rng: &mut impl Rng, fan_out: usize, fan_in: usize) -> (Array2<f64>, Array1<f64>) {
    let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
    let w = Array2::from_shape_fn((fan_out, fan_in), |_| rng.gen_range(-bound..bound));
    (w, Array1::zeros(fan_out))
}

pub(crate) fn shape_error(name: &str, expected: &[usize], got: &[usize]) -> Error {
    Error::CheckpointIncompatible {
        name: name.to_string(),
        msg: format!("expected shape {expected:?}, got {got:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ssp_at_zero_is_zero() {
        assert!(ssp(0.0).abs() < 1e-15);
    }

    #[test]
    fn ssp_is_stable_for_large_inputs() {
        assert!((ssp(800.0) - (800.0 - std::f64::consts::LN_2)).abs() < 1e-9);
        assert!(ssp(-800.0).abs() < 1e-100 || ssp(-800.0) > -0.7);
        assert!(ssp(-800.0).is_finite());
    }

    #[test]
    fn ssp_prime_matches_finite_difference() {
        for &x in &[-3.0, -0.5, 0.0, 0.7, 4.0] {
            let h = 1e-6;
            let fd = (ssp(x + h) - ssp(x - h)) / (2.0 * h);
            assert!((ssp_prime(x) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn flatten_round_trip() {
        use ndarray::array;
        let mut ps = ParamSet::new();
        ps.insert("b", Param::Vector(array![1.0, 2.0]));
        ps.insert("a", Param::Matrix(array![[3.0, 4.0], [5.0, 6.0]]));
        let flat = ps.flatten();
        assert_eq!(flat.len(), 6);
        let mut ps2 = ps.zeros_like();
        ps2.unflatten(&flat);
        assert_eq!(ps, ps2);
    }
}
