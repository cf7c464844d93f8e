//! Training objectives: MSE on high-fidelity labels, the Tukey biweight with
//! a batch-dynamic robust scale, their combination for label-augmented
//! training, the multi-task pretraining loss, and cross-entropy.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// MAR-to-standard-deviation conversion for normal errors.
pub const MAD_TO_SIGMA: f64 = 0.6745;
/// Tuning factor giving 95% efficiency under normal errors.
pub const TUKEY_K_FACTOR: f64 = 4.685;
/// Threshold floor guarding against an all-rejecting loss on perfect batches.
pub const K_FLOOR: f64 = 1e-6;

/// Robust residual scale estimated from one batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustScale {
    /// Median of absolute residuals (eV).
    pub mar: f64,
    /// MAR / 0.6745.
    pub sigma_hat: f64,
    /// 4.685 * sigma_hat, floored at [`K_FLOOR`].
    pub k: f64,
}

/// Median of absolute residuals; even counts average the two middle values.
pub fn robust_scale(residuals: &[f64]) -> Result<RobustScale> {
    if residuals.is_empty() {
        return Err(Error::argument("robust scale of an empty residual list"));
    }
    let mut abs: Vec<f64> = residuals.iter().map(|r| r.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let n = abs.len();
    let mar = if n % 2 == 1 {
        abs[n / 2]
    } else {
        0.5 * (abs[n / 2 - 1] + abs[n / 2])
    };
    let sigma_hat = mar / MAD_TO_SIGMA;
    let k = (TUKEY_K_FACTOR * sigma_hat).max(K_FLOOR);
    Ok(RobustScale { mar, sigma_hat, k })
}

/// Tukey biweight loss value at residual `r` with threshold `k`.
pub fn tukey(r: f64, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::argument(format!("tukey threshold must be > 0, got {k}")));
    }
    let k2_6 = k * k / 6.0;
    if r.abs() <= k {
        let z = 1.0 - (r / k) * (r / k);
        Ok(k2_6 * (1.0 - z * z * z))
    } else {
        Ok(k2_6)
    }
}

/// d tukey / d r: `r (1 - (r/k)^2)^2` inside the threshold, exactly zero
/// outside (rejected residuals contribute nothing to the gradient).
pub fn tukey_grad(r: f64, k: f64) -> f64 {
    if r.abs() <= k {
        let z = 1.0 - (r / k) * (r / k);
        r * z * z
    } else {
        0.0
    }
}

/// Per-batch accounting of the combined loss.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchLossReport {
    pub total: f64,
    pub dft_term: f64,
    pub eip_term: f64,
    pub alpha: f64,
    pub scale: Option<RobustScale>,
    /// Surrogate-labeled residuals with |r| > k this batch.
    pub eip_rejected: usize,
    pub eip_used: usize,
    /// Per-instance usage aligned with the surrogate batch order.
    pub used_mask: Vec<bool>,
}

/// Combined loss evaluation: value, report, and dL/d(prediction) for both
/// batches.
#[derive(Debug, Clone)]
pub struct LaLossResult {
    pub report: BatchLossReport,
    /// dL/dE_hat for the high-fidelity batch.
    pub dft_grads: Vec<f64>,
    /// dL/dE_hat for the surrogate batch.
    pub eip_grads: Vec<f64>,
}

/// Mean squared error over the high-fidelity batch plus `alpha` times the
/// mean Tukey loss over the surrogate batch; the threshold comes from the
/// robust scale of the union of both batches' residuals and is treated as a
/// constant in the gradient.
///
/// `dft` and `eip` hold `(prediction, target)` pairs. When using an
/// MSE-on-surrogates ablation set `robust = false`.
pub fn la_loss(
    dft: &[(f64, f64)],
    eip: &[(f64, f64)],
    alpha: f64,
    robust: bool,
) -> Result<LaLossResult> {
    if dft.is_empty() && eip.is_empty() {
        return Err(Error::argument("both loss batches are empty"));
    }
    if alpha < 0.0 {
        return Err(Error::argument(format!("alpha must be >= 0, got {alpha}")));
    }

    // residual convention: r = target - prediction
    let dft_res: Vec<f64> = dft.iter().map(|(p, t)| t - p).collect();
    let eip_res: Vec<f64> = eip.iter().map(|(p, t)| t - p).collect();

    let mut dft_term = 0.0;
    let mut dft_grads = vec![0.0; dft.len()];
    if !dft.is_empty() {
        let m = dft.len() as f64;
        for (i, &r) in dft_res.iter().enumerate() {
            dft_term += r * r / m;
            dft_grads[i] = -2.0 * r / m;
        }
    }

    let mut eip_term = 0.0;
    let mut eip_grads = vec![0.0; eip.len()];
    let mut used_mask = vec![true; eip.len()];
    let mut scale = None;
    if !eip.is_empty() {
        let s = eip.len() as f64;
        if robust {
            let union: Vec<f64> = dft_res.iter().chain(eip_res.iter()).copied().collect();
            let rs = robust_scale(&union)?;
            for (i, &r) in eip_res.iter().enumerate() {
                eip_term += alpha * tukey(r, rs.k)? / s;
                eip_grads[i] = -alpha * tukey_grad(r, rs.k) / s;
                used_mask[i] = r.abs() <= rs.k;
            }
            scale = Some(rs);
        } else {
            for (i, &r) in eip_res.iter().enumerate() {
                eip_term += alpha * r * r / s;
                eip_grads[i] = -alpha * 2.0 * r / s;
            }
        }
    }

    let eip_used = used_mask.iter().filter(|&&u| u).count();
    Ok(LaLossResult {
        report: BatchLossReport {
            total: dft_term + eip_term,
            dft_term,
            eip_term,
            alpha,
            scale,
            eip_rejected: eip.len() - eip_used,
            eip_used,
            used_mask,
        },
        dft_grads,
        eip_grads,
    })
}

/// Multi-task regression loss `(1/(n |P|)) sum_p sum_i (pred - target)^2`
/// and its gradient.
pub fn mp_loss(preds: &Array2<f64>, targets: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
    if preds.shape() != targets.shape() {
        return Err(Error::Shape(format!(
            "multi-task loss shapes {:?} vs {:?}",
            preds.shape(),
            targets.shape()
        )));
    }
    let count = preds.len() as f64;
    let diff = preds - targets;
    let loss = diff.iter().map(|d| d * d).sum::<f64>() / count;
    let grads = diff.mapv(|d| 2.0 * d / count);
    Ok((loss, grads))
}

/// Mean negative log-softmax of the true class, stabilized by row-max
/// subtraction. Returns (loss, dL/dlogits, softmax probabilities).
pub fn cross_entropy(
    logits: &Array2<f64>,
    labels: &[usize],
) -> Result<(f64, Array2<f64>, Array2<f64>)> {
    if logits.nrows() != labels.len() {
        return Err(Error::Shape(format!(
            "{} logit rows vs {} labels",
            logits.nrows(),
            labels.len()
        )));
    }
    let classes = logits.ncols();
    if let Some(&bad) = labels.iter().find(|&&l| l >= classes) {
        return Err(Error::argument(format!(
            "label {bad} out of range for {classes} classes"
        )));
    }
    let b = labels.len() as f64;
    let mut probs = logits.clone();
    let mut loss = 0.0;
    for (mut row, &label) in probs.rows_mut().into_iter().zip(labels.iter()) {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|v| (v - max).exp());
        let sum: f64 = row.iter().sum();
        row.mapv_inplace(|v| v / sum);
        loss += -(row[label].ln()) / b;
    }
    let mut grads = probs.clone();
    for (mut row, &label) in grads.rows_mut().into_iter().zip(labels.iter()) {
        row[label] -= 1.0;
        row.mapv_inplace(|v| v / b);
    }
    Ok((loss, grads, probs))
}

/// Softmax probabilities without a loss (inference).
pub fn softmax(logits: &Array2<f64>) -> Array2<f64> {
    let mut probs = logits.clone();
    for mut row in probs.rows_mut() {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|v| (v - max).exp());
        let sum: f64 = row.iter().sum();
        row.mapv_inplace(|v| v / sum);
    }
    probs
}
