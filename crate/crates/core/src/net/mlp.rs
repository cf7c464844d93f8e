//! Multilayer perceptron with shifted-softplus hidden layers and a linear
//! output layer; forward retains activations for exact backprop.

use ndarray::{Array1, Array2, Axis};
use rand::Rng;

use super::{init_linear, ssp, ssp_prime, Param, ParamSet};
use crate::error::{Error, Result};

/// Stack of linear layers; all but the last apply the shifted softplus.
#[derive(Debug, Clone)]
pub struct Mlp {
    pub widths: Vec<usize>,
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

/// Intermediates retained by a forward pass; consumed by `backward`.
#[derive(Debug)]
pub struct MlpTrace {
    /// Layer inputs: input matrix followed by each hidden activation.
    inputs: Vec<Array2<f64>>,
    /// Pre-activation values of hidden layers.
    pre_acts: Vec<Array2<f64>>,
}

impl Mlp {
    /// `widths = [input, hidden..., output]`.
    pub fn init(widths: &[usize], rng: &mut impl Rng) -> Self {
        assert!(widths.len() >= 2, "an MLP needs input and output widths");
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in widths.windows(2) {
            let (w, b) = init_linear(rng, pair[1], pair[0]);
            weights.push(w);
            biases.push(b);
        }
        Self {
            widths: widths.to_vec(),
            weights,
            biases,
        }
    }

    pub fn num_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.widths.last().unwrap()
    }

    /// `x` is B x input; returns B x output plus the trace for backprop.
    pub fn forward(&self, x: &Array2<f64>) -> Result<(Array2<f64>, MlpTrace)> {
        if x.ncols() != self.input_dim() {
            return Err(Error::Shape(format!(
                "mlp expects {} input columns, got {}",
                self.input_dim(),
                x.ncols()
            )));
        }
        let mut inputs = vec![x.clone()];
        let mut pre_acts = Vec::new();
        let mut h = x.clone();
        let last = self.num_layers() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut pre = h.dot(&w.t());
            pre += &b.view().insert_axis(Axis(0));
            if l < last {
                let act = pre.mapv(ssp);
                pre_acts.push(pre);
                inputs.push(act.clone());
                h = act;
            } else {
                h = pre;
            }
        }
        Ok((h, MlpTrace { inputs, pre_acts }))
    }

    /// Evaluation without keeping the trace.
    pub fn predict(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        Ok(self.forward(x)?.0)
    }

    /// Backpropagates `d_out = dL/d(output)` through the trace. Returns
    /// gradients (into `grads` under `prefix`) and dL/d(input).
    pub fn backward(
        &self,
        trace: &MlpTrace,
        d_out: &Array2<f64>,
        prefix: &str,
        grads: &mut ParamSet,
    ) -> Array2<f64> {
        let last = self.num_layers() - 1;
        let mut delta = d_out.clone();
        for l in (0..=last).rev() {
            // delta is dL/d(pre-activation of layer l) once the activation
            // derivative has been applied (output layer is linear)
            let dw = delta.t().dot(&trace.inputs[l]);
            let db = delta.sum_axis(Axis(0));
            accumulate(grads, &layer_name(prefix, l, "weight"), Param::Matrix(dw));
            accumulate(grads, &layer_name(prefix, l, "bias"), Param::Vector(db));
            let mut d_input = delta.dot(&self.weights[l]);
            if l > 0 {
                d_input.zip_mut_with(&trace.pre_acts[l - 1], |d, &p| *d *= ssp_prime(p));
            }
            delta = d_input;
        }
        delta
    }

    /// Registers parameters into a set under `prefix.layer{i}.{weight,bias}`.
    pub fn export(&self, prefix: &str, params: &mut ParamSet) {
        for l in 0..self.num_layers() {
            params.insert(
                layer_name(prefix, l, "weight"),
                Param::Matrix(self.weights[l].clone()),
            );
            params.insert(
                layer_name(prefix, l, "bias"),
                Param::Vector(self.biases[l].clone()),
            );
        }
    }

    /// Loads parameters back from a set; shapes must match.
    pub fn import(&mut self, prefix: &str, params: &ParamSet) -> Result<()> {
        for l in 0..self.num_layers() {
            let wname = layer_name(prefix, l, "weight");
            match params.entries.get(&wname) {
                Some(Param::Matrix(w)) if w.shape() == self.weights[l].shape() => {
                    self.weights[l] = w.clone();
                }
                Some(p) => {
                    return Err(super::shape_error(&wname, self.weights[l].shape(), &p.shape()))
                }
                None => {
                    return Err(Error::CheckpointIncompatible {
                        name: wname,
                        msg: "missing from parameter set".into(),
                    })
                }
            }
            let bname = layer_name(prefix, l, "bias");
            match params.entries.get(&bname) {
                Some(Param::Vector(b)) if b.len() == self.biases[l].len() => {
                    self.biases[l] = b.clone();
                }
                Some(p) => {
                    return Err(super::shape_error(&bname, self.biases[l].shape(), &p.shape()))
                }
                None => {
                    return Err(Error::CheckpointIncompatible {
                        name: bname,
                        msg: "missing from parameter set".into(),
                    })
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn layer_name(prefix: &str, layer: usize, kind: &str) -> String {
    format!("{prefix}.layer{layer}.{kind}")
}

pub(crate) fn accumulate(grads: &mut ParamSet, name: &str, value: Param) {
    match grads.entries.get_mut(name) {
        Some(existing) => existing.apply_update(&value, |x, y| x + y),
        None => {
            grads.insert(name, value);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;

    #[test]
    fn zero_weights_with_bias_give_bias() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut mlp = Mlp::init(&[3, 2], &mut rng);
        mlp.weights[0].fill(0.0);
        mlp.biases[0] = array![0.5, -1.5];
        let x = array![[1.0, 2.0, 3.0], [0.0, 0.0, 0.0]];
        let y = mlp.predict(&x).unwrap();
        for row in y.rows() {
            assert_eq!(row[0], 0.5);
            assert_eq!(row[1], -1.5);
        }
    }

    #[test]
    fn hand_computed_two_layer_forward() {
        // 2-2-1 net, hand-set weights, input (1, -1):
        //   pre1 = W1 x + b1 = [[1*1 + 0.5*(-1) + 0], [-1*1 + 2*(-1) + 0.25]]
        //        = [0.5, -2.75]
        //   h = ssp(pre1); y = w2 . h + b2
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut mlp = Mlp::init(&[2, 2, 1], &mut rng);
        mlp.weights[0] = array![[1.0, 0.5], [-1.0, 2.0]];
        mlp.biases[0] = array![0.0, 0.25];
        mlp.weights[1] = array![[2.0, -3.0]];
        mlp.biases[1] = array![0.125];
        let x = array![[1.0, -1.0]];
        let y = mlp.predict(&x).unwrap();
        let h0 = ssp(0.5);
        let h1 = ssp(-2.75);
        let expected = 2.0 * h0 - 3.0 * h1 + 0.125;
        assert!((y[[0, 0]] - expected).abs() < 1e-14);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mlp = Mlp::init(&[4, 2], &mut rng);
        let x = array![[1.0, 2.0, 3.0]];
        assert!(matches!(mlp.forward(&x), Err(Error::Shape(_))));
    }

    #[test]
    fn export_import_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mlp = Mlp::init(&[3, 5, 2], &mut rng);
        let mut params = ParamSet::new();
        mlp.export("rep", &mut params);
        let mut other = Mlp::init(&[3, 5, 2], &mut rng);
        other.import("rep", &params).unwrap();
        let x = array![[0.3, -0.2, 1.1]];
        assert_eq!(mlp.predict(&x).unwrap(), other.predict(&x).unwrap());

        let mut wrong = Mlp::init(&[3, 4, 2], &mut rng);
        assert!(matches!(
            wrong.import("rep", &params),
            Err(Error::CheckpointIncompatible { .. })
        ));
    }

    #[test]
    fn linear_net_mse_gradient_matches_normal_equations() {
        // single linear layer, MSE loss L = (1/B) sum (x.w - y)^2
        // closed form: dL/dw = 2 X^T (X w - y) / B
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mlp = Mlp::init(&[2, 1], &mut rng);
        let x = array![[1.0, 2.0], [3.0, -1.0], [0.5, 0.25]];
        let y = array![[1.0], [0.0], [2.0]];
        let (pred, trace) = mlp.forward(&x).unwrap();
        let b = x.nrows() as f64;
        let d_out = (&pred - &y) * (2.0 / b);
        let mut grads = ParamSet::new();
        mlp.backward(&trace, &d_out, "net", &mut grads);
        let residual = &pred - &y;
        let expected = residual.t().dot(&x).mapv(|v| 2.0 * v / b);
        let got = grads.matrix("net.layer0.weight");
        for (a, e) in got.iter().zip(expected.iter()) {
            assert!((a - e).abs() < 1e-12);
        }
    }
}
