//! Feed-forward classifier with manual forward/backward passes, per-sample
//! gradients, and Glorot initialization.
//!
//! Layer `l` maps a batch `A` (rows = samples) to `A · Wᵀ + b`; every hidden
//! layer is followed by the configured activation and the output layer is
//! linear. The post-activation output of the last hidden layer is exposed as
//! the representation Φ.

mod gradients;

pub use gradients::{
    backward_from_representation, batch_gradient, loss_error_and_gradient, per_sample_grad_factors,
    per_sample_gradients, GradientMatrix, GradientSource, PerSampleGrads,
};

use alloc::vec;
use alloc::vec::Vec;

use crate::numerics::{Matrix, RandomStream};

/// Negative slope of `leaky_relu`; the conventional default.
pub const LEAKY_SLOPE: f64 = 0.01;

/// Hidden-layer activation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    LeakyRelu,
    Tanh,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    x
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu => {
                if x > 0.0 {
                    x
                } else {
                    LEAKY_SLOPE * x
                }
            }
            Activation::Tanh => libm::tanh(x),
            Activation::Identity => x,
        }
    }

    /// Derivative at `x`. Tie-breaks at exactly 0 are fixed so gradient
    /// checks are deterministic: relu' (0) = 0, leaky_relu' (0) = slope.
    #[inline]
    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu => {
                if x > 0.0 {
                    1.0
                } else {
                    LEAKY_SLOPE
                }
            }
            Activation::Tanh => {
                let t = libm::tanh(x);
                1.0 - t * t
            }
            Activation::Identity => 1.0,
        }
    }

    /// Case-insensitive name lookup ("relu", "leaky_relu", "tanh", "identity").
    pub fn parse(name: &str) -> Option<Activation> {
        let mut lower = [0u8; 16];
        let bytes = name.as_bytes();
        if bytes.len() > lower.len() {
            return None;
        }
        for (i, b) in bytes.iter().enumerate() {
            lower[i] = b.to_ascii_lowercase();
        }
        match &lower[..bytes.len()] {
            b"relu" => Some(Activation::Relu),
            b"leaky_relu" => Some(Activation::LeakyRelu),
            b"tanh" => Some(Activation::Tanh),
            b"identity" => Some(Activation::Identity),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::LeakyRelu => "leaky_relu",
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
        }
    }
}

/// One layer's parameters: weight matrix (fan_out × fan_in) and bias vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub weight: Matrix,
    pub bias: Vec<f64>,
}

/// Per-layer weights and biases plus a frozen snapshot of their values at
/// initialization.
///
/// The flattened ordering is canonical: layer 0 weights row-major, layer 0
/// biases, layer 1 weights, ... It round-trips bitwise through
/// [`ParamSet::set_from_flat`].
#[derive(Debug, Clone)]
pub struct ParamSet {
    layout: Vec<usize>,
    layers: Vec<LayerParams>,
    init: Vec<LayerParams>,
}

/// Glorot-uniform initialization: weights uniform on ±√(6/(fan_in+fan_out)),
/// biases zero. Draw order is layer-by-layer, row-major, so a given stream
/// always produces the same parameters.
pub fn init_glorot(layout: &[usize], rng: &mut RandomStream) -> ParamSet {
    assert!(
        layout.len() >= 2 && layout.iter().all(|&w| w > 0),
        "init_glorot: layout needs >= 2 positive widths"
    );
    let mut layers = Vec::with_capacity(layout.len() - 1);
    for l in 0..layout.len() - 1 {
        let fan_in = layout[l];
        let fan_out = layout[l + 1];
        let bound = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
        let weight = Matrix::from_fn(fan_out, fan_in, |_, _| rng.next_uniform(-bound, bound));
        layers.push(LayerParams {
            weight,
            bias: vec![0.0; fan_out],
        });
    }
    ParamSet {
        layout: layout.to_vec(),
        init: layers.clone(),
        layers,
    }
}

impl ParamSet {
    /// Rebuilds a parameter set from flattened current and initialization
    /// values (checkpoint restore).
    pub fn from_flats(layout: &[usize], current: &[f64], init: &[f64]) -> ParamSet {
        let mut ps = init_zeroed(layout);
        ps.set_from_flat(current);
        let mut snapshot = init_zeroed(layout);
        snapshot.set_from_flat(init);
        ps.init = snapshot.layers;
        ps
    }

    pub fn layout(&self) -> &[usize] {
        &self.layout
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[LayerParams] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [LayerParams] {
        &mut self.layers
    }

    pub fn init_snapshot(&self) -> &[LayerParams] {
        &self.init
    }

    pub fn param_count(&self) -> usize {
        self.layout
            .windows(2)
            .map(|w| w[0] * w[1] + w[1])
            .sum()
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            out.extend_from_slice(layer.weight.data());
            out.extend_from_slice(&layer.bias);
        }
        out
    }

    pub fn flatten_init(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.init {
            out.extend_from_slice(layer.weight.data());
            out.extend_from_slice(&layer.bias);
        }
        out
    }

    /// Overwrites the current parameters from a canonical flat vector.
    pub fn set_from_flat(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.param_count(), "set_from_flat: bad length");
        let mut offset = 0;
        for layer in &mut self.layers {
            let wlen = layer.weight.rows() * layer.weight.cols();
            layer
                .weight
                .data_mut()
                .copy_from_slice(&flat[offset..offset + wlen]);
            offset += wlen;
            let blen = layer.bias.len();
            layer.bias.copy_from_slice(&flat[offset..offset + blen]);
            offset += blen;
        }
    }
}

fn init_zeroed(layout: &[usize]) -> ParamSet {
    assert!(layout.len() >= 2, "layout needs >= 2 widths");
    let layers: Vec<LayerParams> = layout
        .windows(2)
        .map(|w| LayerParams {
            weight: Matrix::zeros(w[1], w[0]),
            bias: vec![0.0; w[1]],
        })
        .collect();
    ParamSet {
        layout: layout.to_vec(),
        init: layers.clone(),
        layers,
    }
}

/// Intermediate values of one forward pass.
///
/// `inputs[l]` is the batch entering layer `l` (so `inputs[0]` is the data),
/// `pre[l]` is the affine output of layer `l` before any activation.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub(crate) inputs: Vec<Matrix>,
    pub(crate) pre: Vec<Matrix>,
}

impl ForwardCache {
    /// Representation Φ: the post-activation output of the last hidden
    /// layer (the input to the final linear layer). For a single-layer
    /// network this is the data itself.
    pub fn representation(&self) -> &Matrix {
        self.inputs.last().expect("cache has at least one layer")
    }
}

/// Forward pass over a batch (rows = samples). Returns logits and the cache
/// needed for backward passes.
pub fn forward(params: &ParamSet, activation: Activation, x: &Matrix) -> (Matrix, ForwardCache) {
    assert_eq!(
        x.cols(),
        params.layout[0],
        "forward: input width {} != layout input {}",
        x.cols(),
        params.layout[0]
    );
    let num_layers = params.layers.len();
    let mut inputs = Vec::with_capacity(num_layers);
    let mut pre = Vec::with_capacity(num_layers);
    let mut a = x.clone();
    for (l, layer) in params.layers.iter().enumerate() {
        let mut z = a.matmul_nt(&layer.weight);
        for r in 0..z.rows() {
            let row = z.row_mut(r);
            for (zi, bi) in row.iter_mut().zip(layer.bias.iter()) {
                *zi += *bi;
            }
        }
        inputs.push(a);
        if l + 1 < num_layers {
            let act = Matrix::from_fn(z.rows(), z.cols(), |r, c| activation.apply(z.get(r, c)));
            pre.push(z);
            a = act;
        } else {
            pre.push(z.clone());
            a = z;
        }
    }
    (a, ForwardCache { inputs, pre })
}

/// Row-wise softmax with max-logit subtraction.
pub fn softmax(logits: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(logits.rows(), logits.cols());
    for r in 0..logits.rows() {
        let row = logits.row(r);
        let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let orow = out.row_mut(r);
        let mut sum = 0.0;
        for (o, &z) in orow.iter_mut().zip(row.iter()) {
            *o = libm::exp(z - m);
            sum += *o;
        }
        for o in orow.iter_mut() {
            *o /= sum;
        }
    }
    out
}

/// Mean softmax cross-entropy and 0-1 error rate over a batch.
///
/// The error counts samples whose argmax (ties broken by the lowest class
/// index) differs from the label.
pub fn loss_and_error(logits: &Matrix, labels: &[usize]) -> (f64, f64) {
    assert_eq!(logits.rows(), labels.len(), "loss_and_error: batch mismatch");
    let classes = logits.cols();
    let mut loss = 0.0;
    let mut wrong = 0usize;
    for (r, &label) in labels.iter().enumerate() {
        assert!(
            label < classes,
            "loss_and_error: label {label} out of range (classes = {classes})"
        );
        let row = logits.row(r);
        let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for &z in row {
            sum += libm::exp(z - m);
        }
        loss += m + libm::log(sum) - row[label];
        let mut best = 0usize;
        for (c, &z) in row.iter().enumerate() {
            if z > row[best] {
                best = c;
            }
        }
        if best != label {
            wrong += 1;
        }
    }
    let n = labels.len() as f64;
    (loss / n, wrong as f64 / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glorot_bound_matches_formula() {
        // layout [256, 256]: bound = sqrt(6/512) ~ 0.108253
        let mut rng = RandomStream::new(3, 0);
        let ps = init_glorot(&[256, 256], &mut rng);
        let bound = libm::sqrt(6.0 / 512.0);
        assert!((bound - 0.108_253_175_473_054_82).abs() < 1e-12);
        let w = &ps.layers()[0].weight;
        let mut max_abs: f64 = 0.0;
        for &v in w.data() {
            max_abs = max_abs.max(libm::fabs(v));
        }
        assert!(max_abs <= bound);
        assert!(max_abs > 0.9 * bound, "draws should fill the range");
        assert!(ps.layers()[0].bias.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn glorot_snapshot_freezes_initial_values() {
        let mut rng = RandomStream::new(4, 0);
        let mut ps = init_glorot(&[784, 256, 256, 256, 10], &mut rng);
        assert_eq!(ps.param_count(), 784 * 256 + 256 * 256 * 2 + 256 * 10 + 3 * 256 + 10);
        let before = ps.flatten_init();
        ps.layers_mut()[0].weight.set(0, 0, 99.0);
        assert_eq!(ps.flatten_init(), before);
    }

    #[test]
    fn flatten_roundtrip_is_bitwise() {
        let mut rng = RandomStream::new(5, 0);
        let mut ps = init_glorot(&[6, 5, 4], &mut rng);
        let flat = ps.flatten();
        let mut ps2 = ps.clone();
        ps2.set_from_flat(&flat);
        assert_eq!(ps2.flatten(), flat);
        // and through from_flats
        let restored = ParamSet::from_flats(ps.layout(), &flat, &ps.flatten_init());
        assert_eq!(restored.flatten(), flat);
        assert_eq!(restored.flatten_init(), ps.flatten_init());
        ps.set_from_flat(&flat);
        assert_eq!(ps.flatten(), flat);
    }

    #[test]
    fn zero_params_give_zero_logits() {
        let ps = init_zeroed(&[3, 4, 2]);
        let x = Matrix::from_rows(&[vec![1.0, -2.0, 0.5]]);
        let (logits, _) = forward(&ps, Activation::Relu, &x);
        assert!(logits.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn identity_network_is_the_product_of_weights() {
        let mut rng = RandomStream::new(6, 0);
        let ps = init_glorot(&[3, 3, 3], &mut rng);
        let x = Matrix::from_rows(&[vec![0.3, -0.7, 1.1]]);
        let (logits, _) = forward(&ps, Activation::Identity, &x);
        // manual affine composition
        let w0 = &ps.layers()[0].weight;
        let w1 = &ps.layers()[1].weight;
        let h = x.matmul_nt(w0);
        let expect = h.matmul_nt(w1);
        for c in 0..3 {
            assert!((logits.get(0, c) - expect.get(0, c)).abs() < 1e-12);
        }
    }

    #[test]
    fn relu_saturates_on_all_negative_preactivations() {
        let mut ps = init_zeroed(&[2, 3, 2]);
        // negative weights, positive input -> all layer-1 pre-activations < 0
        for v in ps.layers_mut()[0].weight.data_mut() {
            *v = -1.0;
        }
        let x = Matrix::from_rows(&[vec![1.0, 2.0]]);
        let (_, cache) = forward(&ps, Activation::Relu, &x);
        assert!(cache.representation().data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn uniform_logits_loss_is_ln_c() {
        let logits = Matrix::zeros(4, 10);
        let labels = [0, 3, 7, 9];
        let (loss, _) = loss_and_error(&logits, &labels);
        assert!((loss - libm::log(10.0)).abs() < 1e-12);
    }

    #[test]
    fn two_class_margin_example() {
        // logits [2, 0], label 0 -> loss = ln(1 + e^-2)
        let logits = Matrix::from_rows(&[vec![2.0, 0.0]]);
        let (loss, err) = loss_and_error(&logits, &[0]);
        assert!((loss - 0.126_928_011_042_972_6).abs() < 1e-9);
        assert_eq!(err, 0.0);
    }

    #[test]
    fn argmax_breaks_ties_toward_lowest_index() {
        let logits = Matrix::from_rows(&[vec![1.0, 1.0, 0.0]]);
        let (_, err0) = loss_and_error(&logits, &[0]);
        let (_, err1) = loss_and_error(&logits, &[1]);
        assert_eq!(err0, 0.0);
        assert_eq!(err1, 1.0);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn out_of_range_label_rejected() {
        let logits = Matrix::zeros(1, 3);
        loss_and_error(&logits, &[3]);
    }

    #[test]
    fn activation_parse_is_case_insensitive() {
        assert_eq!(Activation::parse("reLU"), Some(Activation::Relu));
        assert_eq!(Activation::parse("Leaky_ReLU"), Some(Activation::LeakyRelu));
        assert_eq!(Activation::parse("TANH"), Some(Activation::Tanh));
        assert_eq!(Activation::parse("identity"), Some(Activation::Identity));
        assert_eq!(Activation::parse("gelu"), None);
    }

    #[test]
    fn forward_is_affine_under_identity_activation() {
        let mut rng = RandomStream::new(8, 0);
        let ps = init_glorot(&[4, 5, 3], &mut rng);
        let x = Matrix::from_fn(2, 4, |_, _| rng.next_gaussian());
        let zero = Matrix::zeros(2, 4);
        let alpha = 2.5;
        let xs = Matrix::from_fn(2, 4, |r, c| alpha * x.get(r, c));
        let (fx, _) = forward(&ps, Activation::Identity, &x);
        let (f0, _) = forward(&ps, Activation::Identity, &zero);
        let (fxs, _) = forward(&ps, Activation::Identity, &xs);
        // f(αx) − f(0) = α (f(x) − f(0))
        for r in 0..2 {
            for c in 0..3 {
                let lhs = fxs.get(r, c) - f0.get(r, c);
                let rhs = alpha * (fx.get(r, c) - f0.get(r, c));
                assert!((lhs - rhs).abs() < 1e-9);
            }
        }
    }
}
