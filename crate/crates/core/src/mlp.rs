//! One-hidden-layer perceptron with sigmoid units, trained by online
//! backpropagation with momentum on the sum of squared errors.
//!
//! Weight rows carry the bias in their last column, so the hidden
//! layer is an `H x (n+1)` matrix and the output layer `m x (H+1)`.
//! Targets use 1-of-m coding and predictions take the argmax output,
//! lowest class index on ties.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{confusion, macro_accuracy};
use crate::features::FeatureSet;

#[inline]
fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

/// Feed-forward network weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MLPModel {
    #[serde(rename = "n")]
    pub input_size: usize,
    #[serde(rename = "h")]
    pub hidden_size: usize,
    #[serde(rename = "m")]
    pub output_size: usize,
    /// Row-major `hidden_size x (input_size + 1)`, bias last.
    pub w_hidden: Vec<f64>,
    /// Row-major `output_size x (hidden_size + 1)`, bias last.
    pub w_output: Vec<f64>,
}

/// Training hyperparameters. The defaults are learning rate 0.8,
/// momentum 0.7 and 10000 epochs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    /// Epochs over the training set.
    pub iterations: usize,
    /// Drives per-epoch sample shuffling (and fresh inits in sweeps).
    pub seed: u64,
    /// Initial weights are uniform in [-init_range, +init_range].
    pub init_range: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.8,
            momentum: 0.7,
            iterations: 10000,
            seed: 0,
            init_range: 0.5,
        }
    }
}

/// Per-epoch sum of squared errors accumulated over the online pass.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainHistory {
    pub epoch_sse: Vec<f64>,
}

/// Weight-space gradients of E = 1/2 sum_k (target_k - output_k)^2 for
/// a single sample, laid out like the model's weight arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w_hidden: Vec<f64>,
    pub w_output: Vec<f64>,
}

/// Fresh model with weights drawn i.i.d. uniform from
/// [-range, +range] by a deterministic seeded generator, hidden layer
/// first, row-major.
pub fn init_model(n: usize, hidden: usize, m: usize, seed: u64, range: f64) -> MLPModel {
    assert!(n >= 1 && hidden >= 1 && m >= 1, "layer sizes must be >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |count: usize| -> Vec<f64> {
        (0..count)
            .map(|_| {
                if range == 0.0 {
                    0.0
                } else {
                    rng.random_range(-range..=range)
                }
            })
            .collect()
    };
    let w_hidden = draw(hidden * (n + 1));
    let w_output = draw(m * (hidden + 1));
    MLPModel {
        input_size: n,
        hidden_size: hidden,
        output_size: m,
        w_hidden,
        w_output,
    }
}

impl MLPModel {
    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_size {
            return Err(Error::DimensionMismatch {
                expected: self.input_size,
                got: x.len(),
            });
        }
        Ok(())
    }

    fn forward_into(&self, x: &[f64], hidden: &mut [f64], output: &mut [f64]) {
        let n = self.input_size;
        for (j, h) in hidden.iter_mut().enumerate() {
            let row = &self.w_hidden[j * (n + 1)..(j + 1) * (n + 1)];
            let mut acc = row[n]; // bias
            for (w, xv) in row[..n].iter().zip(x) {
                acc += w * xv;
            }
            *h = sigmoid(acc);
        }
        let hsz = self.hidden_size;
        for (k, o) in output.iter_mut().enumerate() {
            let row = &self.w_output[k * (hsz + 1)..(k + 1) * (hsz + 1)];
            let mut acc = row[hsz];
            for (w, hv) in row[..hsz].iter().zip(hidden.iter()) {
                acc += w * hv;
            }
            *o = sigmoid(acc);
        }
    }

    /// Activations of both layers; every value lies in (0, 1).
    pub fn forward(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_input(x)?;
        let mut hidden = vec![0.0; self.hidden_size];
        let mut output = vec![0.0; self.output_size];
        self.forward_into(x, &mut hidden, &mut output);
        Ok((hidden, output))
    }

    /// Argmax output activation, lowest class index on exact ties.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        let (_, output) = self.forward(x)?;
        let mut best = 0usize;
        for (k, &o) in output.iter().enumerate() {
            if o > output[best] {
                best = k;
            }
        }
        Ok(best)
    }

    /// Analytic gradient of E = 1/2 sum (t - o)^2 for one sample.
    pub fn gradient(&self, x: &[f64], targets: &[f64]) -> Result<Gradients> {
        self.check_input(x)?;
        if targets.len() != self.output_size {
            return Err(Error::DimensionMismatch {
                expected: self.output_size,
                got: targets.len(),
            });
        }
        let (n, hsz, m) = (self.input_size, self.hidden_size, self.output_size);
        let mut hidden = vec![0.0; hsz];
        let mut output = vec![0.0; m];
        self.forward_into(x, &mut hidden, &mut output);

        let mut delta_out = vec![0.0; m];
        for k in 0..m {
            delta_out[k] = -(targets[k] - output[k]) * output[k] * (1.0 - output[k]);
        }
        let mut delta_hid = vec![0.0; hsz];
        for j in 0..hsz {
            let mut acc = 0.0;
            for k in 0..m {
                acc += delta_out[k] * self.w_output[k * (hsz + 1) + j];
            }
            delta_hid[j] = acc * hidden[j] * (1.0 - hidden[j]);
        }

        let mut g_out = vec![0.0; self.w_output.len()];
        for k in 0..m {
            let row = k * (hsz + 1);
            for j in 0..hsz {
                g_out[row + j] = delta_out[k] * hidden[j];
            }
            g_out[row + hsz] = delta_out[k];
        }
        let mut g_hid = vec![0.0; self.w_hidden.len()];
        for j in 0..hsz {
            let row = j * (n + 1);
            for i in 0..n {
                g_hid[row + i] = delta_hid[j] * x[i];
            }
            g_hid[row + n] = delta_hid[j];
        }
        Ok(Gradients {
            w_hidden: g_hid,
            w_output: g_out,
        })
    }

    /// JSON serialization with full-precision weights.
    pub fn save_json(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self)
            .map_err(|e| Error::Invalid(format!("serialize model: {e}")))?;
        fs::write(path, json)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let model: MLPModel = serde_json::from_str(&text)
            .map_err(|e| Error::format(path.display().to_string(), e.to_string()))?;
        if model.w_hidden.len() != model.hidden_size * (model.input_size + 1)
            || model.w_output.len() != model.output_size * (model.hidden_size + 1)
        {
            return Err(Error::format(
                path.display().to_string(),
                "weight array lengths do not match the declared layer sizes",
            ));
        }
        Ok(model)
    }
}

/// Online backpropagation with momentum: for every sample, in a
/// per-epoch seeded shuffle order, each weight moves by
/// `delta_w(t) = -lr * dE/dw + momentum * delta_w(t-1)`. Deterministic
/// given the model, data and config.
pub fn train(
    model: &MLPModel,
    data: &FeatureSet,
    cfg: &TrainConfig,
) -> Result<(MLPModel, TrainHistory)> {
    if data.dim != model.input_size {
        return Err(Error::DimensionMismatch {
            expected: model.input_size,
            got: data.dim,
        });
    }
    for &l in &data.labels {
        if l >= model.output_size {
            return Err(Error::LabelOutOfRange {
                label: l,
                classes: model.output_size,
            });
        }
    }
    if !(0.0..1.0).contains(&cfg.momentum) {
        return Err(Error::Invalid(format!(
            "momentum {} must lie in [0, 1)",
            cfg.momentum
        )));
    }

    let mut model = model.clone();
    let (n, hsz, m) = (model.input_size, model.hidden_size, model.output_size);
    let mut vel_h = vec![0.0f64; model.w_hidden.len()];
    let mut vel_o = vec![0.0f64; model.w_output.len()];
    let mut hidden = vec![0.0f64; hsz];
    let mut output = vec![0.0f64; m];
    let mut delta_out = vec![0.0f64; m];
    let mut delta_hid = vec![0.0f64; hsz];
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut epoch_sse = Vec::with_capacity(cfg.iterations);
    let lr = cfg.learning_rate;
    let mom = cfg.momentum;

    for _ in 0..cfg.iterations {
        order.shuffle(&mut rng);
        let mut sse = 0.0f64;
        for &idx in &order {
            let x = &data.rows[idx];
            let label = data.labels[idx];
            model.forward_into(x, &mut hidden, &mut output);

            for k in 0..m {
                let t = if k == label { 1.0 } else { 0.0 };
                let e = t - output[k];
                sse += e * e;
                delta_out[k] = -e * output[k] * (1.0 - output[k]);
            }
            // hidden deltas must see the pre-update output weights
            for j in 0..hsz {
                let mut acc = 0.0;
                for k in 0..m {
                    acc += delta_out[k] * model.w_output[k * (hsz + 1) + j];
                }
                delta_hid[j] = acc * hidden[j] * (1.0 - hidden[j]);
            }

            for k in 0..m {
                let row = k * (hsz + 1);
                let d = delta_out[k];
                for j in 0..hsz {
                    let v = -lr * (d * hidden[j]) + mom * vel_o[row + j];
                    vel_o[row + j] = v;
                    model.w_output[row + j] += v;
                }
                let v = -lr * d + mom * vel_o[row + hsz];
                vel_o[row + hsz] = v;
                model.w_output[row + hsz] += v;
            }
            for j in 0..hsz {
                let row = j * (n + 1);
                let d = delta_hid[j];
                for i in 0..n {
                    let v = -lr * (d * x[i]) + mom * vel_h[row + i];
                    vel_h[row + i] = v;
                    model.w_hidden[row + i] += v;
                }
                let v = -lr * d + mom * vel_h[row + n];
                vel_h[row + n] = v;
                model.w_hidden[row + n] += v;
            }
        }
        epoch_sse.push(sse);
    }

    Ok((model, TrainHistory { epoch_sse }))
}

/// One row of a hidden-size sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub hidden: usize,
    /// Test-set macro recognition accuracy in percent.
    pub accuracy: f64,
}

/// The trial-and-error hidden-layer sizing procedure: train one model
/// per size from a fresh seeded init and report each size's test-set
/// macro accuracy. The customary sweep is 40..=140 in steps of 10.
pub fn sweep_hidden(
    train_set: &FeatureSet,
    test_set: &FeatureSet,
    cfg: &TrainConfig,
    sizes: &[usize],
) -> Result<Vec<SweepRow>> {
    if sizes.is_empty() {
        return Err(Error::Invalid("hidden-size sweep needs at least one size".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &hidden in sizes {
        let model = init_model(
            train_set.dim,
            hidden,
            train_set.class_count,
            cfg.seed,
            cfg.init_range,
        );
        let (model, _) = train(&model, train_set, cfg)?;
        let mut preds = Vec::with_capacity(test_set.len());
        for row in &test_set.rows {
            preds.push(model.predict(row)?);
        }
        let cm = confusion(&preds, &test_set.labels, train_set.class_count)?;
        rows.push(SweepRow {
            hidden,
            accuracy: macro_accuracy(&cm)?,
        });
    }
    Ok(rows)
}

/// Standard sweep sizes 40, 50, ..., 140.
pub fn default_sweep_sizes() -> Vec<usize> {
    (40..=140).step_by(10).collect()
}
