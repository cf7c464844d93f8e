//! Adam optimizer and the two learning-rate schedules.

use serde::{Deserialize, Serialize};

use super::ParamSet;
use crate::error::{Error, Result};

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

/// Slanted-triangular warmup fraction and peak-to-floor ratio.
const ST_WARMUP_FRACTION: f64 = 0.1;
const ST_RATIO: f64 = 25.0;
/// Linear decay always ends at this rate.
const LINEAR_END_LR: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Scheduler {
    /// Linear warmup over the first 10% of steps from `lr/25` to `lr`, then
    /// linear decay back to `lr/25`.
    SlantedTriangular { total_steps: u64 },
    /// Linear interpolation from the base rate down to 1e-5.
    LinearDecay { total_steps: u64 },
}

/// Learning rate at `step` under `scheduler` with peak/base rate `base_lr`.
/// Piecewise linear and continuous; clamps past the final step.
pub fn lr_at(scheduler: &Scheduler, base_lr: f64, step: u64) -> f64 {
    match *scheduler {
        Scheduler::SlantedTriangular { total_steps } => {
            let total = total_steps.max(1) as f64;
            let floor = base_lr / ST_RATIO;
            let cut = ST_WARMUP_FRACTION * total;
            let s = (step as f64).min(total);
            if s <= cut {
                floor + (base_lr - floor) * s / cut
            } else {
                base_lr - (base_lr - floor) * (s - cut) / (total - cut)
            }
        }
        Scheduler::LinearDecay { total_steps } => {
            let total = total_steps.max(1) as f64;
            let s = (step as f64).min(total);
            base_lr + (LINEAR_END_LR - base_lr) * s / total
        }
    }
}

/// Optimizer state: step counter, first/second moments shaped like the
/// parameters, and the schedule.
#[derive(Debug, Clone)]
pub struct TrainState {
    pub step: u64,
    pub m: ParamSet,
    pub v: ParamSet,
    pub scheduler: Scheduler,
    pub base_lr: f64,
    pub batch_size: usize,
}

impl TrainState {
    pub fn new(params: &ParamSet, scheduler: Scheduler, base_lr: f64, batch_size: usize) -> Self {
        Self {
            step: 0,
            m: params.zeros_like(),
            v: params.zeros_like(),
            scheduler,
            base_lr,
            batch_size,
        }
    }

    pub fn current_lr(&self) -> f64 {
        lr_at(&self.scheduler, self.base_lr, self.step)
    }
}

/// One Adam update with bias correction. Gradients absent from `grads`
/// leave their parameters untouched. A non-finite gradient aborts training.
pub fn adam_step(state: &mut TrainState, params: &mut ParamSet, grads: &ParamSet) -> Result<()> {
    for (name, g) in &grads.entries {
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::TrainingAborted(format!(
                "non-finite gradient in `{name}` at step {}",
                state.step
            )));
        }
    }
    let lr = state.current_lr();
    state.step += 1;
    let t = state.step as i32;
    let bias1 = 1.0 - ADAM_BETA1.powi(t);
    let bias2 = 1.0 - ADAM_BETA2.powi(t);

    for (name, g) in &grads.entries {
        let m = state
            .m
            .entries
            .get_mut(name)
            .unwrap_or_else(|| panic!("moment missing for `{name}`"));
        m.apply_update(g, |m, g| ADAM_BETA1 * m + (1.0 - ADAM_BETA1) * g);
        let v = state
            .v
            .entries
            .get_mut(name)
            .unwrap_or_else(|| panic!("moment missing for `{name}`"));
        v.apply_update(g, |v, g| ADAM_BETA2 * v + (1.0 - ADAM_BETA2) * g * g);

        let p = params
            .entries
            .get_mut(name)
            .unwrap_or_else(|| panic!("parameter missing for `{name}`"));
        // p -= lr * m_hat / (sqrt(v_hat) + eps), elementwise over m then v
        let m_ref = &state.m.entries[name];
        let v_ref = &state.v.entries[name];
        match (p, m_ref, v_ref) {
            (super::Param::Matrix(p), super::Param::Matrix(m), super::Param::Matrix(v)) => {
                ndarray::Zip::from(p).and(m).and(v).for_each(|p, &m, &v| {
                    *p -= lr * (m / bias1) / ((v / bias2).sqrt() + ADAM_EPS);
                });
            }
            (super::Param::Vector(p), super::Param::Vector(m), super::Param::Vector(v)) => {
                ndarray::Zip::from(p).and(m).and(v).for_each(|p, &m, &v| {
                    *p -= lr * (m / bias1) / ((v / bias2).sqrt() + ADAM_EPS);
                });
            }
            _ => panic!("parameter kind mismatch for `{name}`"),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::Param;
    use ndarray::array;

    fn scalar_params(x: f64) -> ParamSet {
        let mut ps = ParamSet::new();
        ps.insert("w", Param::Vector(array![x]));
        ps
    }

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut params = scalar_params(0.7);
        let sched = Scheduler::LinearDecay { total_steps: 10 };
        let mut state = TrainState::new(&params, sched, 1e-3, 32);
        let grads = scalar_params(0.0);
        adam_step(&mut state, &mut params, &grads).unwrap();
        assert_eq!(params.vector("w")[0], 0.7);
    }

    #[test]
    fn first_step_with_unit_gradient() {
        // bias-corrected first step: delta = -lr * 1 / (1 + eps)
        let mut params = scalar_params(0.0);
        let sched = Scheduler::LinearDecay { total_steps: 1_000_000 };
        let mut state = TrainState::new(&params, sched, 1e-3, 32);
        let grads = scalar_params(1.0);
        adam_step(&mut state, &mut params, &grads).unwrap();
        let expected = -1e-3 / (1.0 + ADAM_EPS);
        assert!((params.vector("w")[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn constant_gradient_moves_against_its_sign() {
        let mut params = scalar_params(0.0);
        let sched = Scheduler::LinearDecay { total_steps: 100 };
        let mut state = TrainState::new(&params, sched, 1e-3, 32);
        for _ in 0..50 {
            let grads = scalar_params(-2.5);
            adam_step(&mut state, &mut params, &grads).unwrap();
        }
        assert!(params.vector("w")[0] > 0.0);
    }

    #[test]
    fn nan_gradient_aborts() {
        let mut params = scalar_params(0.0);
        let sched = Scheduler::LinearDecay { total_steps: 100 };
        let mut state = TrainState::new(&params, sched, 1e-3, 32);
        let grads = scalar_params(f64::NAN);
        assert!(matches!(
            adam_step(&mut state, &mut params, &grads),
            Err(Error::TrainingAborted(_))
        ));
    }

    #[test]
    fn linear_decay_endpoints() {
        let sched = Scheduler::LinearDecay { total_steps: 200 };
        assert_eq!(lr_at(&sched, 1e-3, 0), 1e-3);
        assert!((lr_at(&sched, 1e-3, 200) - 1e-5).abs() < 1e-18);
        // clamps beyond the end
        assert!((lr_at(&sched, 1e-3, 500) - 1e-5).abs() < 1e-18);
        // halfway
        let mid = lr_at(&sched, 1e-3, 100);
        assert!((mid - (1e-3 + 1e-5) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn slanted_triangular_shape() {
        let sched = Scheduler::SlantedTriangular { total_steps: 1000 };
        let lr = 1e-3;
        assert!((lr_at(&sched, lr, 0) - lr / 25.0).abs() < 1e-18);
        assert!((lr_at(&sched, lr, 100) - lr).abs() < 1e-18); // peak at 10%
        assert!((lr_at(&sched, lr, 1000) - lr / 25.0).abs() < 1e-15);
        assert!((lr_at(&sched, lr, 5000) - lr / 25.0).abs() < 1e-15);
        // continuity around the peak
        let before = lr_at(&sched, lr, 99);
        let after = lr_at(&sched, lr, 101);
        assert!(before < lr && after < lr);
        assert!(lr - before < 1e-5 && lr - after < 1e-5);
    }
}
